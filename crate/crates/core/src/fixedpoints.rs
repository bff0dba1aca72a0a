//! Fixed points of Atkin-Lehner involutions: the counting formula with
//! its per-branch breakdown, the closed forms for small and elliptic Q,
//! and the enumeration of inequivalent fixed points of the full
//! involution as exact CM points.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, kronecker};
use crate::quadforms::{class_number, lift_to_level, reduced_forms, represent_coprime_to, QuadForm};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixedPointError {
    #[error("{q} is not an exact divisor of {n}")]
    NotExactDivisor { q: i64, n: i64 },
    #[error("Q = {0} is out of range for this formula")]
    QOutOfRange(i64),
    #[error("level {0} is too small; the enumeration needs N >= 5")]
    LevelTooSmall(i64),
    #[error("N = QM needs M > 1 here, got Q = N = {0}")]
    TrivialComplement(i64),
    #[error("(N, Q) = ({n}, {q}) does not satisfy the elliptic condition")]
    NotElliptic { n: i64, q: i64 },
}

/// Is q an exact divisor of n (q | n with gcd(q, n/q) = 1)?
pub fn is_exact_divisor(q: i64, n: i64) -> bool {
    q >= 1 && n >= 1 && n % q == 0 && crate::arith::gcd(q, n / q) == 1
}

/// Exact divisors of n in increasing order.
pub fn exact_divisors(n: i64) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    let f = factorize(n as u64);
    let mut ds = vec![1i64];
    for &(p, e) in &f.factors {
        let pe = p.pow(e) as i64;
        let mut next = Vec::with_capacity(ds.len() * 2);
        for &d in &ds {
            next.push(d);
            next.push(d * pe);
        }
        ds = next;
    }
    out.extend(ds);
    out.sort_unstable();
    out
}

/// The multiplier relating the full fixed-point count to h(-4N):
/// 2 when N = 7 (mod 8), 4/3 when N = 3 (mod 8) and N > 3, 1 otherwise.
pub fn delta(n: i64) -> Rational {
    assert!(n >= 1);
    if n % 8 == 7 {
        Rational::integer(2)
    } else if n % 8 == 3 && n > 3 {
        Rational::new(4, 3)
    } else {
        Rational::integer(1)
    }
}

/// Fixed-point count nu(Q; N) with every summand of the counting formula
/// kept separately for audit output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NuReport {
    pub n: i64,
    pub q: i64,
    pub total: i64,
    pub term_main: i64,
    pub term_hq: i64,
    pub term_q2: i64,
    pub term_q3: i64,
    pub term_q4: i64,
}

fn c_odd(q: i64, p: i64) -> i64 {
    if q % 4 == 3 {
        1 + kronecker(-q, p) as i64
    } else {
        1 + kronecker(-4 * q, p) as i64
    }
}

fn c1_two(q: i64, n: i64) -> i64 {
    // only reachable when 2 | N/Q, so Q is odd
    debug_assert_eq!(q % 2, 1);
    let v2 = n.trailing_zeros();
    if q % 4 == 1 {
        if v2 == 1 {
            1
        } else {
            0
        }
    } else {
        match v2 {
            1 => 2,
            2 => 3 + kronecker(-q, 2) as i64,
            _ => 3 * (1 + kronecker(-q, 2) as i64),
        }
    }
}

/// Evaluate the counting formula for nu(Q; N) branch by branch.
pub fn nu(q: i64, n: i64) -> Result<NuReport, FixedPointError> {
    if !is_exact_divisor(q, n) {
        return Err(FixedPointError::NotExactDivisor { q, n });
    }
    if q < 2 {
        return Err(FixedPointError::QOutOfRange(q));
    }
    let m = n / q;
    let m_fact = factorize(m as u64);

    let mut prod_c1 = 1i64;
    let mut prod_c2 = 1i64;
    for &(p, _) in &m_fact.factors {
        let p = p as i64;
        if p == 2 {
            prod_c1 *= c1_two(q, n);
            prod_c2 *= 1 + kronecker(-q, 2) as i64;
        } else {
            prod_c1 *= c_odd(q, p);
            prod_c2 *= c_odd(q, p);
        }
    }

    let h4q = class_number(4 * q).expect("-4Q is a discriminant");
    let term_main = prod_c1 * h4q;

    let term_hq = if q >= 4 && q % 4 == 3 {
        prod_c2 * class_number(q).expect("-Q is a discriminant for Q = 3 mod 4")
    } else {
        0
    };

    let term_q2 = if q == 2 {
        m_fact
            .factors
            .iter()
            .map(|&(p, _)| 1 + kronecker(-4, p as i64) as i64)
            .product()
    } else {
        0
    };

    let term_q3 = if q == 3 {
        m_fact
            .factors
            .iter()
            .map(|&(p, _)| 1 + kronecker(-3, p as i64) as i64)
            .product()
    } else {
        0
    };

    let term_q4 = if q == 4 {
        m_fact
            .factors
            .iter()
            .map(|&(p, e)| {
                let p = p as i64;
                p.pow(e / 2) + p.pow((e - 1) / 2)
            })
            .product()
    } else {
        0
    };

    Ok(NuReport {
        n,
        q,
        total: term_main + term_hq + term_q2 + term_q3 + term_q4,
        term_main,
        term_hq,
        term_q2,
        term_q3,
        term_q4,
    })
}

/// The elliptic condition for Q > 3: (-Q/p) = 1 for every odd prime
/// p | M, with Q = 3 (mod 4) if 4 exactly divides M and Q = 7 (mod 8)
/// if 8 | M. Equivalent to the solvability of X^2 = -Q (mod N).
pub fn elliptic_condition(n: i64, q: i64) -> Result<bool, FixedPointError> {
    if !is_exact_divisor(q, n) {
        return Err(FixedPointError::NotExactDivisor { q, n });
    }
    if q <= 3 {
        return Err(FixedPointError::QOutOfRange(q));
    }
    let m = n / q;
    if m <= 1 {
        return Err(FixedPointError::TrivialComplement(n));
    }
    for &(p, _) in &factorize(m as u64).factors {
        let p = p as i64;
        if p != 2 && kronecker(-q, p) != 1 {
            return Ok(false);
        }
    }
    let v2 = m.trailing_zeros();
    let ok = match v2 {
        0 | 1 => true,
        2 => q % 4 == 3,
        _ => q % 8 == 7,
    };
    Ok(ok)
}

/// Closed forms for nu(Q) with Q in {2, 3, 4}, including the vanishing
/// criteria.
pub fn nu_special(q: i64, n: i64) -> Result<i64, FixedPointError> {
    if !is_exact_divisor(q, n) {
        return Err(FixedPointError::NotExactDivisor { q, n });
    }
    if !(2..=4).contains(&q) {
        return Err(FixedPointError::QOutOfRange(q));
    }
    let m = n / q;
    if m <= 1 {
        return Err(FixedPointError::TrivialComplement(n));
    }
    let m_fact = factorize(m as u64);
    match q {
        2 => {
            let mut s = [0u32; 3]; // primes = 1, 3, 5 mod 8
            for &(p, _) in &m_fact.factors {
                match p % 8 {
                    1 => s[0] += 1,
                    3 => s[1] += 1,
                    5 => s[2] += 1,
                    _ => return Ok(0),
                }
            }
            if s[1] > 0 && s[2] > 0 {
                return Ok(0);
            }
            let mut total = 0i64;
            if s[2] == 0 {
                total += 1i64 << (s[0] + s[1]);
            }
            if s[1] == 0 {
                total += 1i64 << (s[0] + s[2]);
            }
            Ok(total)
        }
        3 => {
            if m % 8 == 0 {
                return Ok(0);
            }
            let mut s = 0u32;
            for &(p, _) in &m_fact.factors {
                match p % 12 {
                    1 | 7 => s += 1,
                    5 | 11 => return Ok(0),
                    _ => {} // p = 2 or 3 contributes nothing
                }
            }
            Ok(1i64 << (s + 1))
        }
        _ => {
            let mut t = 0u32;
            let mut s = 0u32;
            let mut base = 1i64;
            for &(p, e) in &m_fact.factors {
                match p % 4 {
                    1 => s += 1,
                    3 => t += 1,
                    _ => unreachable!("M is odd when 4 exactly divides N"),
                }
                let p = p as i64;
                base *= p.pow(e / 2) + p.pow((e - 1) / 2);
            }
            Ok(if t > 0 { base } else { base + (1i64 << s) })
        }
    }
}

/// Closed form for nu(Q) with Q > 4 under the elliptic condition,
/// selected by (Q mod 8, parity of N).
pub fn nu_elliptic(q: i64, n: i64) -> Result<i64, FixedPointError> {
    if !is_exact_divisor(q, n) {
        return Err(FixedPointError::NotExactDivisor { q, n });
    }
    if q <= 4 {
        return Err(FixedPointError::QOutOfRange(q));
    }
    if !elliptic_condition(n, q)? {
        return Err(FixedPointError::NotElliptic { n, q });
    }
    let m = n / q;
    let s = factorize(m as u64).omega();
    let alpha = match n.trailing_zeros() {
        0 | 1 => 1,
        2 => 2,
        _ => 3,
    };
    let h4q = class_number(4 * q).expect("-4Q is a discriminant");
    let value = if q % 8 == 7 || (q % 8 == 3 && n % 2 == 1) {
        let hq = class_number(q).expect("-Q is a discriminant for Q = 3 mod 4");
        (1i64 << s) * (alpha * h4q + hq)
    } else if q % 4 == 1 && n % 2 == 0 {
        (1i64 << (s - 1)) * h4q
    } else {
        (1i64 << s) * h4q
    };
    Ok(value)
}

/// A fixed point of the full involution, encoded exactly by its level-N
/// form [A, B, C]: the point itself is tau = (-B + sqrt(-d)) / (2A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeegnerPoint {
    pub form: QuadForm,
    pub d: i64,
    pub n: i64,
    pub beta: i64,
}

impl HeegnerPoint {
    pub fn new(form: QuadForm, d: i64, n: i64, beta: i64) -> Self {
        let pt = HeegnerPoint { form, d, n, beta };
        pt.check_invariants();
        pt
    }

    fn check_invariants(&self) {
        assert!(self.form.a > 0);
        assert_eq!(self.form.discriminant(), -self.d);
        assert_eq!(self.form.a.rem_euclid(self.n), 0);
        assert_eq!((self.form.b - self.beta).rem_euclid(2 * self.n), 0);
        assert!(self.form.is_primitive());
    }

    /// Real part -B / (2A), exact.
    pub fn x(&self) -> Rational {
        Rational::new(-self.form.b, 2 * self.form.a)
    }

    /// Square of the imaginary part, d / (4 A^2), exact.
    pub fn y_squared(&self) -> Rational {
        Rational::new(self.d, 4 * self.form.a * self.form.a)
    }

    /// Floating approximation of the point at the requested number of
    /// decimal digits (at least 15).
    pub fn tau_complex(&self, digits: u32) -> rug::Complex {
        assert!(digits >= 15, "precision below 15 digits is not supported");
        let prec = bits_for_digits(digits);
        let d = rug::Float::with_val(prec, self.d);
        let im = d.sqrt() / rug::Float::with_val(prec, 2 * self.form.a);
        let re = rug::Float::with_val(prec, -self.form.b)
            / rug::Float::with_val(prec, 2 * self.form.a);
        rug::Complex::with_val(prec, (re, im))
    }
}

/// Binary precision needed for the given number of decimal digits, with
/// guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// Enumerate pairwise inequivalent fixed points of the full involution
/// on X_0(N), N >= 5, as exact CM points: one per reduced form of
/// discriminant -4N, plus one per reduced form of discriminant -N when
/// N = 3 (mod 4).
pub fn enumerate_fixed_points(n: i64) -> Result<Vec<HeegnerPoint>, FixedPointError> {
    if n < 5 {
        return Err(FixedPointError::LevelTooSmall(n));
    }
    let mut branches = vec![(4 * n, 0i64)];
    if n % 4 == 3 {
        branches.push((n, n));
    }
    let mut out = Vec::new();
    for (d, beta) in branches {
        for f in reduced_forms(d).expect("branch discriminants are valid") {
            let (g, _) = represent_coprime_to(&f, n)
                .expect("primitive forms represent values coprime to N");
            let lifted = lift_to_level(&g, n, d, beta)
                .expect("lift preconditions hold by construction");
            out.push(HeegnerPoint::new(lifted, d, n, beta));
        }
    }
    Ok(out)
}
