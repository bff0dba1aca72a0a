//! Checked-in transcription of the reference table of fixed points of
//! the full involution on the 40 undecided levels, with a parser that
//! reconstructs each printed point as an exact CM point.

use thiserror::Error;

use crate::fixedpoints::HeegnerPoint;
use crate::quadforms::{equivalent, QuadForm};
use crate::rational::Rational;

const TABLE: &str = include_str!("../data/table1.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Table1Error {
    #[error("malformed table line: {0}")]
    Malformed(String),
    #[error("cannot parse point {0:?}")]
    BadPoint(String),
    #[error("point {0:?} does not correspond to a level form at level {1}")]
    NoLevelForm(String, i64),
}

#[derive(Debug, Clone)]
pub struct TablePoint {
    pub text: String,
    pub point: HeegnerPoint,
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub n: i64,
    pub points: Vec<TablePoint>,
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        Some(Rational::new(num.trim().parse().ok()?, den.trim().parse().ok()?))
    } else {
        Some(Rational::integer(s.parse().ok()?))
    }
}

/// Parse one printed point: either `1/sqrt(-k)`, `1/(m*sqrt(-k))`, or
/// `x+sqrt(-k)/D` with rational x. Returns (x, y^2).
fn parse_point_text(s: &str) -> Option<(Rational, Rational)> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("1/sqrt(-") {
        let k: i64 = rest.strip_suffix(')')?.parse().ok()?;
        return Some((Rational::integer(0), Rational::new(1, k)));
    }
    if let Some(rest) = s.strip_prefix("1/(") {
        let rest = rest.strip_suffix(')')?;
        let (m_str, k_part) = rest.split_once("*sqrt(-")?;
        let m: i64 = m_str.trim().parse().ok()?;
        let k: i64 = k_part.strip_suffix(')')?.parse().ok()?;
        return Some((Rational::integer(0), Rational::new(1, m * m * k)));
    }
    let (x_str, rest) = s.split_once("+sqrt(-")?;
    let (k_str, d_str) = rest.split_once(")/")?;
    let x = parse_rational(x_str)?;
    let k: i64 = k_str.trim().parse().ok()?;
    let d: i64 = d_str.trim().parse().ok()?;
    Some((x, Rational::new(k, d * d)))
}

fn isqrt_exact(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i64;
    for cand in [r - 1, r, r + 1] {
        if cand >= 0 && cand * cand == v {
            return Some(cand);
        }
    }
    None
}

/// Rebuild the level form [A, B, C] of the point x + iy at level n from
/// exact coordinates; the branch (discriminant -4N or -N) is forced by
/// primitivity.
fn point_from_coordinates(n: i64, x: Rational, y2: Rational) -> Option<HeegnerPoint> {
    let mut branches = vec![(4 * n, 0i64)];
    if n % 4 == 3 {
        branches.push((n, n));
    }
    for (d, beta) in branches {
        // A^2 = d / (4 y^2)
        let a2 = Rational::new(d, 4) * Rational::new(y2.den(), y2.num());
        let a = match a2.as_integer().and_then(isqrt_exact) {
            Some(a) if a > 0 => a,
            _ => continue,
        };
        // B = -2 A x
        let b_rat = Rational::new(-2 * a, 1) * x;
        let b = match b_rat.as_integer() {
            Some(b) => b,
            None => continue,
        };
        if (b * b + d) % (4 * a) != 0 {
            continue;
        }
        let c = (b * b + d) / (4 * a);
        let form = QuadForm::new(a, b, c);
        if !form.is_primitive() || a % n != 0 || (b - beta).rem_euclid(2 * n) != 0 {
            continue;
        }
        return Some(HeegnerPoint::new(form, d, n, beta));
    }
    None
}

/// Parse a transcription in the shipped format.
pub fn parse(text: &str) -> Result<Vec<TableRow>, Table1Error> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n_str, rest) = line
            .split_once(':')
            .ok_or_else(|| Table1Error::Malformed(line.to_string()))?;
        let n: i64 = n_str
            .trim()
            .parse()
            .map_err(|_| Table1Error::Malformed(line.to_string()))?;
        let mut points = Vec::new();
        for text in rest.split(';') {
            let text = text.trim().to_string();
            let (x, y2) =
                parse_point_text(&text).ok_or_else(|| Table1Error::BadPoint(text.clone()))?;
            let point = point_from_coordinates(n, x, y2)
                .ok_or_else(|| Table1Error::NoLevelForm(text.clone(), n))?;
            points.push(TablePoint { text, point });
        }
        rows.push(TableRow { n, points });
    }
    Ok(rows)
}

/// The embedded transcription.
pub fn rows() -> Vec<TableRow> {
    parse(TABLE).expect("embedded table parses")
}

/// Two CM points of the same level are equivalent under the congruence
/// group exactly when they share (d, beta mod 2N) and their forms are
/// equivalent under the full modular group.
pub fn gamma0_equivalent(p1: &HeegnerPoint, p2: &HeegnerPoint) -> bool {
    p1.n == p2.n
        && p1.d == p2.d
        && (p1.beta - p2.beta).rem_euclid(2 * p1.n) == 0
        && equivalent(&p1.form, &p2.form).is_some()
}
