//! The numerical Weierstrass test: move a CM point to its best orbit
//! representative, evaluate the scaled derivative matrix of a cusp form
//! basis there through q-expansions with rigorous truncation tails, and
//! decide whether the Wronskian determinant can vanish.

pub mod ball;
pub mod basis;

use rug::{Complex, Float};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{extended_gcd, gcd};
use crate::fixedpoints::HeegnerPoint;
use crate::quadforms::UnimodularMatrix;
use ball::Ball;
use basis::CuspFormBasis;

#[derive(Debug, Error)]
pub enum WronskianError {
    #[error("point has non-positive imaginary part")]
    ImNotPositive,
    #[error("requested truncation {requested} exceeds the stored {available} coefficients")]
    TruncationExceedsBasis { requested: usize, available: usize },
    #[error("tail bound diverges at |q| = {rho}; increase the height or the truncation")]
    TailDiverges { rho: f64 },
    #[error("basis is for level {basis} but the point has level {point}")]
    LevelMismatch { basis: i64, point: i64 },
}

/// Exact orbit optimization for a CM point: scan c = 0 (mod N) with
/// |c·tau + d| <= 1 and gcd(c, d) = 1, minimize |c·tau + d| (ties by
/// smaller c, then |d|), then translate the real part into (-1/2, 1/2].
/// Everything is integer arithmetic on the attached form, so the result
/// is exact.
pub fn optimize_point(pt: &HeegnerPoint) -> (HeegnerPoint, UnimodularMatrix) {
    let a = pt.form.a as i128;
    let b = pt.form.b as i128;
    let n = pt.n;
    let disc = pt.d as i128;

    // |c tau + d|^2 scaled by (2A)^2 is (2A d - cB)^2 + c^2 disc
    let scale = 4 * a * a;
    let mut best = (scale, 0i64, 1i64); // (scaled value, c, d) for (c, d) = (0, 1)
    let mut c = n;
    while (c as i128) * (c as i128) * disc <= scale {
        let cb = c as i128 * b;
        // d range with |2A d - cB| <= 2A
        let lo = ((cb - 2 * a).div_euclid(2 * a)) as i64;
        let hi = ((cb + 2 * a).div_euclid(2 * a) + 1) as i64;
        for d in lo..=hi {
            if gcd(c, d) != 1 {
                continue;
            }
            let num = 2 * a * d as i128 - cb;
            let value = num * num + (c as i128) * (c as i128) * disc;
            if value < best.0 || (value == best.0 && (c, d.abs()) < (best.1, best.2.abs())) {
                best = (value, c, d);
            }
        }
        c += n;
    }

    let (_, c0, d0) = best;
    let gamma = if c0 == 0 && d0 == 1 {
        UnimodularMatrix::IDENTITY
    } else {
        let (g, u, v) = extended_gcd(c0, d0);
        debug_assert_eq!(g, 1);
        // det (v, -u; c0, d0) = v d0 + u c0 = 1
        UnimodularMatrix::new(v, -u, c0, d0)
    };
    let moved = pt.form.apply(&gamma.inverse());

    // translate x = -B/(2A) into (-1/2, 1/2]
    let t = (moved.a + moved.b).div_euclid(2 * moved.a);
    let shift = UnimodularMatrix::translation(t);
    let final_form = moved.apply(&shift.inverse());
    let gamma_total = shift.mul(&gamma);
    (
        HeegnerPoint::new(final_form, pt.d, pt.n, pt.beta),
        gamma_total,
    )
}

/// Numeric variant of the orbit optimization for a general point of the
/// upper half-plane.
pub fn best_representative(tau: &Complex, n: i64) -> (Complex, UnimodularMatrix) {
    let x = tau.real().to_f64();
    let y = tau.imag().to_f64();
    assert!(y > 0.0, "point must be in the upper half-plane");

    let mut best = (1.0f64, 0i64, 1i64);
    let mut c = n;
    while c as f64 * y <= 1.0 + 1e-12 {
        let cx = c as f64 * x;
        let lo = (-1.0 - cx).floor() as i64;
        let hi = (1.0 - cx).ceil() as i64;
        for d in lo..=hi {
            if gcd(c, d) != 1 {
                continue;
            }
            let value = (cx + d as f64).powi(2) + (c as f64 * y).powi(2);
            let better = value < best.0 * (1.0 - 1e-12)
                || ((value - best.0).abs() <= best.0 * 1e-12
                    && (c, d.abs()) < (best.1, best.2.abs()));
            if better {
                best = (value, c, d);
            }
        }
        c += n;
    }

    let (_, c0, d0) = best;
    let gamma = if c0 == 0 && d0 == 1 {
        UnimodularMatrix::IDENTITY
    } else {
        let (g, u, v) = extended_gcd(c0, d0);
        debug_assert_eq!(g, 1);
        UnimodularMatrix::new(v, -u, c0, d0)
    };

    let prec = tau.prec().0;
    let num = Complex::with_val(prec, tau * rug::Integer::from(gamma.p))
        + Float::with_val(prec, gamma.q);
    let den = Complex::with_val(prec, tau * rug::Integer::from(gamma.r))
        + Float::with_val(prec, gamma.s);
    let mut moved = Complex::with_val(prec, num / den);

    let t = (0.5 - moved.real().to_f64()).floor() as i64;
    moved += Float::with_val(prec, t);
    (moved, UnimodularMatrix::translation(t).mul(&gamma))
}

fn mag_upper_c(z: &Complex) -> f64 {
    z.real().to_f64().hypot(z.imag().to_f64()) * (1.0 + 1e-9) + f64::MIN_POSITIVE
}

/// Ball enclosure of q = exp(2 pi i tau).
fn nome(tau: &Complex, prec: u32) -> Ball {
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let i_two_pi = Complex::with_val(prec, (Float::with_val(prec, 0), two_pi));
    let arg = Complex::with_val(prec, &i_two_pi * tau);
    let arg_mag = mag_upper_c(&arg);
    let mid = arg.exp();
    // exp(z) error: argument rounding |z| * 2^-prec propagates with
    // derivative |exp(z)|; charge generous guard bits
    let rad = mag_upper_c(&mid) * (1.0 + arg_mag) * (2.0f64).powi(-(prec as i32 - 12));
    Ball { mid, rad }
}

/// Rigorous upper bound on the truncation tail of the row for
/// derivative order j - 1, from |a(n)| <= C n d(n) <= 2 C n^{3/2} and
/// the ratio test on n^{k + 3/2} rho^n.
fn tail_bound(c_const: f64, k: u32, b: usize, rho: f64) -> Result<f64, WronskianError> {
    let expo = k as f64 + 1.5;
    let m = (b + 1) as f64;
    let ratio = rho * ((m + 1.0) / m).powf(expo);
    if !(ratio < 1.0 - 1e-12) {
        return Err(WronskianError::TailDiverges { rho });
    }
    let ln_lead = expo * m.ln() + m * rho.ln();
    let lead = if ln_lead < -690.0 {
        1e-300
    } else {
        ln_lead.exp() * (1.0 + 1e-9)
    };
    let two_pi = std::f64::consts::TAU;
    let mut weight = 2.0 * c_const;
    for j in 1..=k {
        weight *= two_pi / j as f64;
    }
    Ok(weight * lead / (1.0 - ratio) * (1.0 + 1e-9))
}

/// Row i of the derivative matrix: f_i^{(j-1)}(tau) / (j-1)! for
/// j = 1..=g, as balls whose radii include series truncation.
pub fn derivative_row(
    basis: &CuspFormBasis,
    i: usize,
    tau: &Complex,
    trunc: Option<usize>,
) -> Result<Vec<Ball>, WronskianError> {
    let b = trunc.unwrap_or_else(|| default_truncation(basis.g).min(basis.b));
    if b > basis.b {
        return Err(WronskianError::TruncationExceedsBasis {
            requested: b,
            available: basis.b,
        });
    }
    let y = tau.imag().to_f64();
    if y <= 0.0 {
        return Err(WronskianError::ImNotPositive);
    }
    let prec = tau.prec().0;
    let g = basis.g;
    let q = nome(tau, prec);

    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let mut sums: Vec<Ball> = (0..g).map(|_| Ball::exact_zero(prec)).collect();
    let mut qpow = q.clone();
    for n in 1..=b {
        let an = basis.coeffs[i][n - 1];
        if an != 0 {
            let base = qpow.mul_i64(an);
            let two_pi_n = Float::with_val(prec, &two_pi * n as u32);
            let mut factor = Float::with_val(prec, 1);
            for (k, sum) in sums.iter_mut().enumerate() {
                // factor = (2 pi n)^k / k!
                if k > 0 {
                    factor = Float::with_val(prec, &factor * &two_pi_n) / k as u32;
                }
                // i^k rotates the weight through the axes
                let w = match k % 4 {
                    0 => Complex::with_val(prec, (&factor, 0)),
                    1 => Complex::with_val(prec, (0, &factor)),
                    2 => Complex::with_val(prec, (-factor.clone(), 0)),
                    _ => Complex::with_val(prec, (0, -factor.clone())),
                };
                *sum = sum.add(&base.mul(&Ball::from_complex(w)));
            }
        }
        if n < b {
            qpow = qpow.mul(&q);
        }
    }

    let rho = ((-std::f64::consts::TAU * y * (1.0 - 1e-9)).exp() * (1.0 + 1e-9)).min(1.0);
    let c_const = basis.tail_constant(i);
    for (k, sum) in sums.iter_mut().enumerate() {
        let tail = tail_bound(c_const, k as u32, b, rho)?;
        *sum = sum.add_rad(tail);
    }
    Ok(sums)
}

/// Default series truncation for a genus-g computation.
pub fn default_truncation(g: usize) -> usize {
     (20 * g).max(200)
}

/// Interval determinant of the full derivative matrix together with the
/// Hadamard bound on its magnitude.
pub fn wronskian_det(
    basis: &CuspFormBasis,
    tau: &Complex,
    trunc: Option<usize>,
) -> Result<(Ball, f64), WronskianError> {
    let g = basis.g;
    let mut matrix = Vec::with_capacity(g);
    for i in 0..g {
        matrix.push(derivative_row(basis, i, tau, trunc)?);
    }
    let mut hadamard = 1.0f64;
    for row in &matrix {
        let norm2: f64 = row.iter().map(|e| e.mag_upper_bound().powi(2)).sum();
        hadamard *= norm2.sqrt();
    }
    let prec = tau.prec().0;
    Ok((ball::det(&matrix, prec), hadamard))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WronskianVerdict {
    NotWeierstrass,
    LikelyWeierstrass,
    Inconclusive,
}

/// Full per-point result of the numerical test.
#[derive(Debug, Clone)]
pub struct WronskianReport {
    pub point: HeegnerPoint,
    pub gamma: UnimodularMatrix,
    pub det: Ball,
    pub hadamard: f64,
    pub verdict: WronskianVerdict,
}

/// Decide the Weierstrass status of a fixed point: optimize the
/// representative, evaluate the determinant interval, and compare
/// against zero and against the Hadamard-relative threshold.
pub fn verdict(
    basis: &CuspFormBasis,
    pt: &HeegnerPoint,
    digits: u32,
    trunc: Option<usize>,
) -> Result<WronskianReport, WronskianError> {
    if basis.n != pt.n {
        return Err(WronskianError::LevelMismatch {
            basis: basis.n,
            point: pt.n,
        });
    }
    let (opt, gamma) = optimize_point(pt);
    let tau = opt.tau_complex(digits);
    let (det, hadamard) = wronskian_det(basis, &tau, trunc)?;
    let mid_mag = mag_upper_c(&det.mid);
    let verdict = if det.excludes_zero() {
        WronskianVerdict::NotWeierstrass
    } else if mid_mag < 1e-8 * hadamard {
        WronskianVerdict::LikelyWeierstrass
    } else {
        WronskianVerdict::Inconclusive
    };
    Ok(WronskianReport {
        point: opt,
        gamma,
        det,
        hadamard,
        verdict,
    })
}
