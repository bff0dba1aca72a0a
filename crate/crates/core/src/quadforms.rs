//! Positive definite integral binary quadratic forms: Gauss reduction,
//! SL2(Z) equivalence, class numbers, and the level-N lifting used to
//! build CM points.
//!
//! A form [a,b,c] stands for a x^2 + b x y + c y^2. A reduced form
//! satisfies |b| <= a <= c with b >= 0 whenever |b| = a or a = c, and
//! every positive definite class contains exactly one reduced form.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{extended_gcd, gcd};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("-{0} is not 0 or 1 mod 4, so it is not a discriminant")]
    NotADiscriminant(i64),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("no representative with leading coefficient coprime to {0} (form imprimitive?)")]
    NoCoprimeRepresentative(i64),
    #[error("lift precondition violated: {0}")]
    LiftPrecondition(String),
}

/// Integral binary quadratic form [a, b, c].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// An element of SL2(Z) acting on forms by substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMatrix {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix {
        p: 1,
        q: 0,
        r: 0,
        s: 1,
    };

    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Self {
        let m = UnimodularMatrix { p, q, r, s };
        assert_eq!(m.det(), 1, "matrix must have determinant 1");
        m
    }

    pub fn det(&self) -> i64 {
        self.p * self.s - self.q * self.r
    }

    /// Matrix product self * other (so that f.apply(m1).apply(m2) equals
    /// f.apply(m1 * m2)).
    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            p: self.p * other.p + self.q * other.r,
            q: self.p * other.q + self.q * other.s,
            r: self.r * other.p + self.s * other.r,
            s: self.r * other.q + self.s * other.s,
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix {
            p: self.s,
            q: -self.q,
            r: -self.r,
            s: self.p,
        }
    }

    /// Upper triangular translation matrix (1, t; 0, 1).
    pub fn translation(t: i64) -> UnimodularMatrix {
        UnimodularMatrix {
            p: 1,
            q: t,
            r: 0,
            s: 1,
        }
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Value of the form at (x, y).
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Substituted form Q(px + qy, rx + sy). Preserves the discriminant
    /// and the content.
    pub fn apply(&self, g: &UnimodularMatrix) -> QuadForm {
        debug_assert_eq!(g.det(), 1);
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (g.p as i128, g.q as i128, g.r as i128, g.s as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        QuadForm {
            a: i64::try_from(na).expect("coefficient overflow"),
            b: i64::try_from(nb).expect("coefficient overflow"),
            c: i64::try_from(nc).expect("coefficient overflow"),
        }
    }

    /// Gauss reduction. Returns the reduced form g and a matrix m with
    /// self.apply(&m) == g. Idempotent on already-reduced input.
    pub fn reduce(&self) -> (QuadForm, UnimodularMatrix) {
        assert!(self.is_positive_definite(), "reduce requires positive definite input");
        let mut f = *self;
        let mut m = UnimodularMatrix::IDENTITY;
        let swap = UnimodularMatrix::new(0, -1, 1, 0);
        loop {
            // normalize b into (-a, a]
            if f.b > f.a || f.b <= -f.a {
                let t = (f.a - f.b).div_euclid(2 * f.a);
                let tr = UnimodularMatrix::translation(t);
                f = f.apply(&tr);
                m = m.mul(&tr);
            }
            if f.a > f.c {
                f = f.apply(&swap);
                m = m.mul(&swap);
            } else {
                break;
            }
        }
        // boundary conventions of a reduced form
        if f.b < 0 && (-f.b == f.a || f.a == f.c) {
            if -f.b == f.a {
                let tr = UnimodularMatrix::translation(1);
                f = f.apply(&tr);
                m = m.mul(&tr);
            } else {
                f = f.apply(&swap);
                m = m.mul(&swap);
            }
        }
        debug_assert!(f.is_reduced());
        debug_assert_eq!(self.apply(&m), f);
        (f, m)
    }
}

/// All primitive reduced forms of discriminant -d, in lexicographic
/// (a, b) order. Rejects d unless -d = 0 or 1 mod 4.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>, QuadFormError> {
    if d <= 0 || !(d % 4 == 0 || d % 4 == 3) {
        return Err(QuadFormError::NotADiscriminant(d));
    }
    let mut out = Vec::new();
    let mut bb = d % 2;
    while bb * bb * 3 <= d {
        let m4 = bb * bb + d;
        debug_assert_eq!(m4 % 4, 0);
        let m = m4 / 4;
        let mut a = if bb > 0 { bb } else { 1 };
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                // a=bb or a=c forces b >= 0; skip the negative twin there
                if gcd(gcd(a, bb), c) == 1 {
                    out.push(QuadForm::new(a, bb, c));
                    if bb > 0 && a != bb && a != c {
                        out.push(QuadForm::new(a, -bb, c));
                    }
                }
            }
            a += 1;
        }
        bb += 2;
    }
    out.sort_by_key(|f| (f.a, f.b));
    Ok(out)
}

/// Class number h(-d) of primitive forms of discriminant -d.
pub fn class_number(d: i64) -> Result<i64, QuadFormError> {
    Ok(reduced_forms(d)?.len() as i64)
}

/// SL2(Z)-equivalence test. Returns g with f.apply(&g) == other when the
/// forms are equivalent.
pub fn equivalent(f: &QuadForm, other: &QuadForm) -> Option<UnimodularMatrix> {
    if !f.is_positive_definite() || !other.is_positive_definite() {
        return None;
    }
    let (rf, mf) = f.reduce();
    let (ro, mo) = other.reduce();
    if rf != ro {
        return None;
    }
    let g = mf.mul(&mo.inverse());
    debug_assert_eq!(f.apply(&g), *other);
    Some(g)
}

/// Replace f by an SL2(Z)-equivalent form whose leading coefficient is
/// coprime to n. Searches small coprime argument pairs and completes the
/// winning pair to a unimodular matrix.
pub fn represent_coprime_to(
    f: &QuadForm,
    n: i64,
) -> Result<(QuadForm, UnimodularMatrix), QuadFormError> {
    assert!(n >= 1);
    if gcd(f.a, n) == 1 {
        return Ok((*f, UnimodularMatrix::IDENTITY));
    }
    let omega = crate::arith::factorize(n as u64).omega() as i64;
    let bound = 2 * omega + 2;
    for radius in 1..=bound {
        for x in -radius..=radius {
            for y in -radius..=radius {
                if x.abs().max(y.abs()) != radius || gcd(x, y) != 1 {
                    continue;
                }
                if gcd(f.eval(x, y), n) != 1 {
                    continue;
                }
                // complete first column (x, y) to det 1: x*s - q*y = 1
                let (g, u, v) = extended_gcd(x, y);
                debug_assert_eq!(g, 1);
                let m = UnimodularMatrix::new(x, -v, y, u);
                return Ok((f.apply(&m), m));
            }
        }
    }
    Err(QuadFormError::NoCoprimeRepresentative(n))
}

/// Lift a form of discriminant -d with gcd(a, N) = 1 to a form [A, B, C]
/// with N | A and B = beta (mod 2N), by the substitution (K, -1; 1, 0)
/// where K solves 2aX + b = -beta (mod 2N).
pub fn lift_to_level(
    f: &QuadForm,
    n: i64,
    d: i64,
    beta: i64,
) -> Result<QuadForm, QuadFormError> {
    if f.discriminant() != -d {
        return Err(QuadFormError::LiftPrecondition(format!(
            "form has discriminant {}, expected {}",
            f.discriminant(),
            -d
        )));
    }
    if gcd(f.a, n) != 1 {
        return Err(QuadFormError::LiftPrecondition(format!(
            "gcd(a, N) = {} is not 1",
            gcd(f.a, n)
        )));
    }
    if (-d - beta * beta).rem_euclid(4 * n) != 0 {
        return Err(QuadFormError::LiftPrecondition(format!(
            "-{d} is not congruent to {beta}^2 mod 4*{n}"
        )));
    }
    let (k, _) = crate::arith::solve_linear_congruence(2 * f.a, -beta - f.b, 2 * n)
        .expect("congruence is solvable when the preconditions hold");
    let m = UnimodularMatrix::new(k, -1, 1, 0);
    let lifted = f.apply(&m);
    debug_assert_eq!(lifted.a.rem_euclid(n), 0);
    debug_assert_eq!((lifted.b - beta).rem_euclid(2 * n), 0);
    debug_assert!(lifted.is_primitive());
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(QuadForm::new(1, 0, 1).discriminant(), -4);
        assert_eq!(QuadForm::new(22, 0, 1).discriminant(), -88);
        assert_eq!(QuadForm::new(1, 1, 1).discriminant(), -3);
    }

    #[test]
    fn apply_examples() {
        let f = QuadForm::new(1, 0, 22);
        assert_eq!(f.apply(&UnimodularMatrix::IDENTITY), f);
        let s = UnimodularMatrix::new(0, -1, 1, 0);
        assert_eq!(f.apply(&s), QuadForm::new(22, 0, 1));
        let t = UnimodularMatrix::new(1, 1, 0, 1);
        assert_eq!(QuadForm::new(2, 1, 3).apply(&t), QuadForm::new(2, 5, 6));
    }

    #[test]
    fn reduce_examples() {
        let (r, m) = QuadForm::new(1, 0, 22).reduce();
        assert_eq!(r, QuadForm::new(1, 0, 22));
        assert_eq!(m, UnimodularMatrix::IDENTITY);

        let f = QuadForm::new(22, 0, 1);
        let (r, m) = f.reduce();
        assert_eq!(r, QuadForm::new(1, 0, 22));
        assert_eq!(f.apply(&m), r);

        let (r, _) = QuadForm::new(3, -2, 12).reduce();
        assert_eq!(r, QuadForm::new(3, -2, 12));
    }

    #[test]
    fn reduced_forms_examples() {
        assert_eq!(reduced_forms(4).unwrap(), vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(
            reduced_forms(88).unwrap(),
            vec![QuadForm::new(1, 0, 22), QuadForm::new(2, 0, 11)]
        );
        assert_eq!(
            reduced_forms(140).unwrap(),
            vec![
                QuadForm::new(1, 0, 35),
                QuadForm::new(3, -2, 12),
                QuadForm::new(3, 2, 12),
                QuadForm::new(4, -2, 9),
                QuadForm::new(4, 2, 9),
                QuadForm::new(5, 0, 7),
            ]
        );
        assert!(reduced_forms(5).is_err());
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(4).unwrap(), 1);
        assert_eq!(class_number(4 * 67).unwrap(), 3);
        assert_eq!(class_number(140).unwrap(), 6);
    }

    #[test]
    fn equivalence_examples() {
        let f = QuadForm::new(1, 0, 22);
        let g = QuadForm::new(22, 0, 1);
        let m = equivalent(&f, &g).unwrap();
        assert_eq!(f.apply(&m), g);
        assert!(equivalent(&f, &QuadForm::new(2, 0, 11)).is_none());
        let m = equivalent(&f, &f).unwrap();
        assert_eq!(f.apply(&m), f);
    }

    #[test]
    fn represent_coprime_examples() {
        let f = QuadForm::new(1, 0, 22);
        let (g, m) = represent_coprime_to(&f, 22).unwrap();
        assert_eq!(g, f);
        assert_eq!(m, UnimodularMatrix::IDENTITY);

        let f = QuadForm::new(2, 0, 11);
        let (g, m) = represent_coprime_to(&f, 22).unwrap();
        assert_eq!(gcd(g.a, 22), 1);
        assert_eq!(f.apply(&m), g);

        let f = QuadForm::new(22, 0, 1);
        let (g, _) = represent_coprime_to(&f, 22).unwrap();
        assert_eq!(gcd(g.a, 22), 1);
        assert_eq!(g.discriminant(), -88);
    }

    #[test]
    fn represent_coprime_small_arguments_suffice() {
        // every primitive reduced form of every discriminant up to 600
        // finds a coprime representative within the search bound
        for d in 3..=600i64 {
            if !(d % 4 == 0 || d % 4 == 3) {
                continue;
            }
            for f in reduced_forms(d).unwrap() {
                for n in [2i64, 6, 12, 30, 210, d, 2 * d] {
                    let (g, m) = represent_coprime_to(&f, n).unwrap();
                    assert_eq!(gcd(g.a, n), 1);
                    assert_eq!(f.apply(&m), g);
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        let f = QuadForm::new(1, 0, 22);
        let lifted = lift_to_level(&f, 22, 88, 0).unwrap();
        assert_eq!(lifted, QuadForm::new(22, 0, 1));

        let f = QuadForm::new(1, 1, 1);
        let lifted = lift_to_level(&f, 3, 3, 3).unwrap();
        assert_eq!(lifted.a.rem_euclid(3), 0);
        assert_eq!((lifted.b - 3).rem_euclid(6), 0);
        assert_eq!(lifted.discriminant(), -3);

        let f = QuadForm::new(2, 0, 11);
        assert!(matches!(
            lift_to_level(&f, 22, 88, 0),
            Err(QuadFormError::LiftPrecondition(_))
        ));
    }

    #[test]
    fn class_number_relation_2_4() {
        // h(-4N) = h(-N) for N = 7 mod 8, and 3h(-N) for N = 3 mod 8, N > 3
        for n in 1..=2000i64 {
            if n % 8 == 7 {
                assert_eq!(class_number(4 * n).unwrap(), class_number(n).unwrap(), "N={n}");
            } else if n % 8 == 3 && n > 3 {
                assert_eq!(
                    class_number(4 * n).unwrap(),
                    3 * class_number(n).unwrap(),
                    "N={n}"
                );
            }
        }
    }

    #[test]
    fn reduction_lands_in_enumerated_list() {
        // every primitive form with small coefficients reduces to a member
        // of reduced_forms of its discriminant, and list members are
        // pairwise inequivalent
        for d in 3..=300i64 {
            if !(d % 4 == 0 || d % 4 == 3) {
                continue;
            }
            let list = reduced_forms(d).unwrap();
            for i in 0..list.len() {
                for j in i + 1..list.len() {
                    assert!(equivalent(&list[i], &list[j]).is_none(), "d={d}");
                }
            }
        }
        for a in 1..=50i64 {
            for b in -50..=50i64 {
                for c in 1..=50i64 {
                    let f = QuadForm::new(a, b, c);
                    let d = -f.discriminant();
                    if d <= 0 || d > 2000 || !f.is_primitive() {
                        continue;
                    }
                    let (r, _) = f.reduce();
                    assert!(reduced_forms(d).unwrap().contains(&r), "{f:?}");
                }
            }
        }
    }
}
