//! Complex balls: a high-precision midpoint with an f64 error radius.
//! Every operation widens the radius by a generous bound on the
//! floating rounding of the midpoint, so a ball always contains the
//! exact value of the expression it was built from.

use rug::Complex;

/// Multiply an error term by a slack factor so that f64 rounding in the
/// radius bookkeeping itself can never shrink a bound.
fn up(x: f64) -> f64 {
    x * (1.0 + 1e-9) + f64::MIN_POSITIVE
}

/// Upper bound on |z| from the f64 projections. The slack in up()
/// absorbs both the projection rounding and the hypot error; a tight
/// bound matters because radius recursions multiply by it repeatedly.
fn mag_upper(z: &Complex) -> f64 {
    up(z.real().to_f64().hypot(z.imag().to_f64()))
}

/// Lower bound on |z|.
fn mag_lower(z: &Complex) -> f64 {
    let h = z.real().to_f64().hypot(z.imag().to_f64());
    (h * (1.0 - 1e-9) - f64::MIN_POSITIVE).max(0.0)
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub mid: Complex,
    pub rad: f64,
}

impl Ball {
    /// Wrap an already-rounded midpoint, charging one rounding unit.
    pub fn from_complex(mid: Complex) -> Ball {
        let rad = Ball::ulp(&mid);
        Ball { mid, rad }
    }

    pub fn exact_zero(prec: u32) -> Ball {
        Ball {
            mid: Complex::with_val(prec, (0, 0)),
            rad: 0.0,
        }
    }

    /// Bound on the rounding error of one midpoint operation at its
    /// working precision.
    fn ulp(mid: &Complex) -> f64 {
        let prec = mid.prec().0.min(mid.prec().1);
        let scale = if prec > 40 {
            (2.0f64).powi(-((prec - 6) as i32))
        } else {
            1e-9
        };
        up(mag_upper(mid) * scale)
    }

    pub fn mag_upper_bound(&self) -> f64 {
        up(mag_upper(&self.mid) + self.rad)
    }

    /// True when the ball provably avoids 0.
    pub fn excludes_zero(&self) -> bool {
        mag_lower(&self.mid) > self.rad
    }

    fn prec2(&self, other: &Ball) -> u32 {
        self.mid.prec().0.max(other.mid.prec().0)
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec2(other), &self.mid + &other.mid);
        let rad = up(self.rad + other.rad + Ball::ulp(&mid));
        Ball { mid, rad }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec2(other), &self.mid - &other.mid);
        let rad = up(self.rad + other.rad + Ball::ulp(&mid));
        Ball { mid, rad }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: Complex::with_val(self.mid.prec().0, -&self.mid),
            rad: self.rad,
        }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let mid = Complex::with_val(self.prec2(other), &self.mid * &other.mid);
        let cross = mag_upper(&self.mid) * other.rad
            + mag_upper(&other.mid) * self.rad
            + self.rad * other.rad;
        let rad = up(cross + Ball::ulp(&mid));
        Ball { mid, rad }
    }

    /// Multiply by an exact integer.
    pub fn mul_i64(&self, k: i64) -> Ball {
        let mid = Complex::with_val(self.mid.prec().0, &self.mid * rug::Integer::from(k));
        let rad = up(self.rad * (k.abs() as f64) + Ball::ulp(&mid));
        Ball { mid, rad }
    }

    pub fn add_rad(&self, extra: f64) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: up(self.rad + extra),
        }
    }
}

/// Determinant of a square ball matrix by cofactor expansion along the
/// first column. Fine for the genus sizes in play (g <= 5).
pub fn det(m: &[Vec<Ball>], prec: u32) -> Ball {
    let g = m.len();
    assert!(g >= 1 && m.iter().all(|row| row.len() == g));
    if g == 1 {
        return m[0][0].clone();
    }
    let mut acc = Ball::exact_zero(prec);
    for i in 0..g {
        let minor: Vec<Vec<Ball>> = m
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cof = m[i][0].mul(&det(&minor, prec));
        acc = if i % 2 == 0 {
            acc.add(&cof)
        } else {
            acc.sub(&cof)
        };
    }
    acc
}
