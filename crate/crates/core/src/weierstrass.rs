//! Genus data for X_0(N), the quotient genus under an Atkin-Lehner
//! involution, and the classification of which fixed points are
//! Weierstrass points. The executable certificate is always nu(Q) > 4;
//! the closed-form criteria are carried along as named reasons and
//! cross-checked in tests.

use serde::Serialize;

use crate::arith::{euler_phi, factorize, gcd, kronecker};
use crate::fixedpoints::{
    elliptic_condition, is_exact_divisor, nu, FixedPointError, NuReport,
};
use crate::rational::Rational;

/// Divisor-count and elliptic-point data entering the genus formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusData {
    pub n: i64,
    pub g0: i64,
    pub index_mu: i64,
    pub e2: i64,
    pub e3: i64,
    pub cusps: i64,
}

/// Genus of X_0(N) by the standard index / elliptic point / cusp count
/// formula.
pub fn genus0(n: i64) -> GenusData {
    assert!(n >= 1);
    let f = factorize(n as u64);

    let mut mu = n;
    for &(p, _) in &f.factors {
        let p = p as i64;
        mu = mu / p * (p + 1);
    }

    let e2 = if n % 4 == 0 {
        0
    } else {
        f.factors
            .iter()
            .map(|&(p, _)| 1 + kronecker(-4, p as i64) as i64)
            .product()
    };
    let e3 = if n % 9 == 0 {
        0
    } else {
        f.factors
            .iter()
            .map(|&(p, _)| 1 + kronecker(-3, p as i64) as i64)
            .product()
    };

    let mut cusps = 0i64;
    for d in 1..=n {
        if n % d == 0 {
            cusps += euler_phi(gcd(d, n / d) as u64) as i64;
        }
    }

    let twelve_g = 12 + mu - 3 * e2 - 4 * e3 - 6 * cusps;
    debug_assert_eq!(twelve_g % 12, 0);
    let data = GenusData {
        n,
        g0: twelve_g / 12,
        index_mu: mu,
        e2,
        e3,
        cusps,
    };
    debug_assert_eq!(
        12 * (data.g0 - 1) + 3 * data.e2 + 4 * data.e3 + 6 * data.cusps,
        data.index_mu
    );
    data
}

/// Genus of the quotient X_0(N) / W_Q, (2 g_0 + 2 - nu(Q)) / 4 by
/// Riemann-Hurwitz, returned exactly so callers can assert integrality.
pub fn quotient_genus(n: i64, q: i64) -> Result<Rational, FixedPointError> {
    let report = nu(q, n)?;
    Ok(Rational::new(2 * genus0(n).g0 + 2 - report.total, 4))
}

/// The branched-cover criterion: fixed points of an order-p normalizer
/// are Weierstrass points provided the quotient genus g_star differs
/// from floor(g / p).
pub fn schoeneberg(g: i64, g_star: i64, p: i64) -> bool {
    assert!(p >= 2 && g >= 0 && g_star >= 0);
    g_star != g / p
}

/// Q with h(-Q) = 1.
pub const S1: [i64; 13] = [3, 4, 7, 8, 11, 12, 16, 19, 27, 28, 43, 67, 163];
/// Q with h(-4Q) = 2.
pub const S2: [i64; 14] = [5, 6, 8, 9, 10, 12, 13, 16, 18, 22, 25, 28, 37, 58];
/// Q with h(-4Q) = 3.
pub const S3: [i64; 8] = [11, 19, 23, 27, 31, 43, 67, 163];
/// Q with h(-4Q) = 4.
pub const S4: [i64; 44] = [
    14, 17, 20, 21, 24, 30, 32, 33, 34, 36, 39, 40, 42, 45, 46, 48, 49, 52, 55, 57, 60, 63, 64,
    70, 72, 73, 78, 82, 85, 88, 93, 97, 100, 102, 112, 130, 133, 142, 148, 177, 190, 193, 232,
    253,
];

/// Levels N with g_0(N) > 1 for which the fixed points of the full
/// involution W_N are not certified by the counting bound, in
/// increasing order.
pub fn exceptional_levels() -> Vec<i64> {
    vec![
        22, 28, 30, 33, 34, 37, 40, 42, 43, 45, 46, 48, 52, 57, 58, 60, 64, 67, 70, 72, 73, 78,
        82, 85, 88, 93, 97, 100, 102, 112, 130, 133, 142, 148, 163, 177, 190, 193, 232, 253,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    AllWeierstrass,
    NoFixedPoints,
    UndeterminedByCriterion,
    GenusTooSmall,
}

/// Outcome of the classification for (N, Q), with the names of every
/// criterion that independently certifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub n: i64,
    pub q: i64,
    pub g0: i64,
    pub nu: NuReport,
    pub status: Status,
    pub reason: Vec<String>,
}

fn residue_counts_mod8(m: i64) -> (u32, u32, u32) {
    let mut s = (0, 0, 0);
    for &(p, _) in &factorize(m as u64).factors {
        match p % 8 {
            1 => s.0 += 1,
            3 => s.1 += 1,
            5 => s.2 += 1,
            _ => {}
        }
    }
    s
}

/// Closed-form criteria certifying nu(Q) > 4 for Q in {2, 3, 4},
/// assuming nu(Q) > 0. Returns the name of the clause that fires.
fn small_q_clause(q: i64, m: i64) -> Option<String> {
    match q {
        2 => {
            let (s0, s1, s2) = residue_counts_mod8(m);
            let fires = (s1 == 0 && s2 == 0 && s0 > 1)
                || (s2 == 0 && s0 + s1 > 2)
                || (s1 == 0 && s0 + s2 > 2);
            fires.then(|| "small-Q criterion for W_2 (mod-8 prime counts)".to_string())
        }
        3 => {
            let s = factorize(m as u64)
                .factors
                .iter()
                .filter(|&&(p, _)| p % 12 == 1 || p % 12 == 7)
                .count();
            (s > 1).then(|| "small-Q criterion for W_3 (mod-12 prime count)".to_string())
        }
        4 => {
            let f = factorize(m as u64);
            let squarefree = f.factors.iter().all(|&(_, e)| e == 1);
            let s = f.factors.iter().filter(|&&(p, _)| p % 4 == 1).count() as i64;
            let t = f.factors.iter().filter(|&&(p, _)| p % 4 == 3).count() as i64;
            let fires = (!squarefree && m != 9) || (squarefree && 6 * s + 4 * t > 11);
            fires.then(|| "small-Q criterion for W_4 (square-free split)".to_string())
        }
        _ => None,
    }
}

/// Closed-form criteria certifying nu(Q) > 4 for Q > 4 under the
/// elliptic condition, split by (Q mod 8, parity of N).
fn elliptic_clause(n: i64, q: i64, m: i64) -> Option<String> {
    let s = factorize(m as u64).omega() as i64;
    let in_s2 = S2.contains(&q);
    let in_s4 = S4.contains(&q);
    if q % 8 == 7 || (q % 8 == 3 && n % 2 == 1) {
        if q != 7 {
            Some("elliptic criterion, case 1a (Q != 7)".to_string())
        } else if n % 4 == 0 || s > 1 {
            Some("elliptic criterion, case 1b (Q = 7)".to_string())
        } else {
            None
        }
    } else if q % 4 == 1 && n % 2 == 0 {
        if !in_s2 && !in_s4 {
            Some("elliptic criterion, case 2a (Q outside S2 and S4)".to_string())
        } else if (in_s2 && s > 2) || (in_s4 && s > 1) {
            Some("elliptic criterion, case 2b (enough prime factors)".to_string())
        } else {
            None
        }
    } else if !in_s2 {
        Some("elliptic criterion, case 3a (Q outside S2)".to_string())
    } else if s > 1 {
        Some("elliptic criterion, case 3b (enough prime factors)".to_string())
    } else {
        None
    }
}

/// Decide whether the fixed points of W_Q on X_0(N) are Weierstrass
/// points. The executable certificate is nu(Q) > 4; any closed-form
/// clause that also applies is recorded in the reason chain.
pub fn classify(n: i64, q: i64) -> Result<Verdict, FixedPointError> {
    if !is_exact_divisor(q, n) {
        return Err(FixedPointError::NotExactDivisor { q, n });
    }
    let report = nu(q, n)?;
    let g0 = genus0(n).g0;
    let mut reason = Vec::new();

    if g0 < 2 {
        reason.push(format!("genus of X_0({n}) is {g0}, below 2"));
        return Ok(Verdict {
            n,
            q,
            g0,
            nu: report,
            status: Status::GenusTooSmall,
            reason,
        });
    }
    if report.total == 0 {
        reason.push(format!("nu({q}; {n}) = 0"));
        return Ok(Verdict {
            n,
            q,
            g0,
            nu: report,
            status: Status::NoFixedPoints,
            reason,
        });
    }

    let m = n / q;
    if (2..=4).contains(&q) && m > 1 {
        if let Some(clause) = small_q_clause(q, m) {
            reason.push(clause);
        }
    }
    if q > 4 && m > 1 && elliptic_condition(n, q)? {
        if let Some(clause) = elliptic_clause(n, q, m) {
            reason.push(clause);
        }
    }

    let status = if report.total > 4 {
        reason.insert(
            0,
            format!(
                "nu({q}; {n}) = {} > 4: quotient genus {} differs from floor({g0}/2)",
                report.total,
                quotient_genus(n, q)?.as_integer().expect("integral genus"),
            ),
        );
        Status::AllWeierstrass
    } else {
        reason.push(format!(
            "nu({q}; {n}) = {} <= 4: the degree-2 quotient criterion is silent",
            report.total
        ));
        Status::UndeterminedByCriterion
    };
    Ok(Verdict {
        n,
        q,
        g0,
        nu: report,
        status,
        reason,
    })
}
