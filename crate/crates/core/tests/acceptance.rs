//! End-to-end acceptance gate. Each criterion prints one pass/fail
//! line; the test fails if any criterion does. Criterion 6 is known to
//! fail on levels 30 and 33: their lowest fixed points sit so close to
//! the real axis that a truncation of 200 terms cannot bring the
//! rigorous tail radius below the determinant size. The certificates
//! for those levels at truncation 1400 live in wronskian_certificates.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use alwp_core::fixedpoints::{
    delta, elliptic_condition, enumerate_fixed_points, exact_divisors, nu, nu_elliptic,
    nu_special, HeegnerPoint,
};
use alwp_core::quadforms::{class_number, QuadForm, UnimodularMatrix};
use alwp_core::table1;
use alwp_core::weierstrass::{exceptional_levels, genus0, quotient_genus, S1, S2, S3, S4};
use alwp_core::wronskian::basis::{basis_path, load_basis, CuspFormBasis};
use alwp_core::wronskian::{optimize_point, verdict, WronskianVerdict};

fn fixture(n: i64) -> CuspFormBasis {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/bases");
    load_basis(basis_path(&dir, n)).unwrap()
}

/// Class-number ground truth: the h = 1 discriminant lists and the
/// S1..S4 membership tables.
fn criterion_1() -> Result<(), String> {
    let h1: HashSet<i64> = [3, 4, 7, 8, 11, 19, 43, 67, 163, 12, 16, 27, 28]
        .into_iter()
        .collect();
    for d in 1..=700i64 {
        if d % 4 != 0 && d % 4 != 3 {
            continue;
        }
        let h = class_number(d).map_err(|e| e.to_string())?;
        if (h == 1) != h1.contains(&d) {
            return Err(format!("h(-{d}) = {h} disagrees with the h = 1 list"));
        }
    }
    for q in 1..=300i64 {
        let h4q = class_number(4 * q).map_err(|e| e.to_string())?;
        // The one list omission: h(-60) = 2 but Q = 15 = 7 (mod 8) is
        // always handled by elliptic case 1, which never consults S2.
        let s2 = S2.contains(&q) || q == 15;
        let ok = (h4q == 2) == s2 && (h4q == 3) == S3.contains(&q) && (h4q == 4) == S4.contains(&q);
        if !ok {
            return Err(format!("h(-4*{q}) = {h4q} disagrees with S2/S3/S4"));
        }
        let hq_is_one = match q % 4 {
            0 | 3 => class_number(q).map_err(|e| e.to_string())? == 1,
            _ => false,
        };
        if hq_is_one != S1.contains(&q) {
            return Err(format!("h(-{q}) = 1 membership disagrees with S1"));
        }
    }
    Ok(())
}

/// Fixed-point counts: enumeration length equals delta_N * h(-4N), and
/// the class-number relation behind delta_N holds through 2000.
fn criterion_2() -> Result<(), String> {
    for n in 5..=500i64 {
        let count = enumerate_fixed_points(n).map_err(|e| e.to_string())?.len() as i64;
        let h = class_number(4 * n).map_err(|e| e.to_string())?;
        let expected = delta(n) * alwp_core::rational::Rational::integer(h);
        if expected.as_integer() != Some(count) {
            return Err(format!("level {n}: {count} points, expected {expected}"));
        }
    }
    for n in 5..=2000i64 {
        let h4n = class_number(4 * n).map_err(|e| e.to_string())?;
        if n % 8 == 7 {
            let hn = class_number(n).map_err(|e| e.to_string())?;
            if h4n != hn {
                return Err(format!("h(-4*{n}) != h(-{n})"));
            }
        } else if n % 8 == 3 {
            let hn = class_number(n).map_err(|e| e.to_string())?;
            if h4n != 3 * hn {
                return Err(format!("h(-4*{n}) != 3 h(-{n})"));
            }
        }
    }
    Ok(())
}

/// Formula consistency: the closed-form counts agree with the general
/// counting formula, and vanishing matches the elliptic condition.
fn criterion_3() -> Result<(), String> {
    for n in 2..=500i64 {
        for q in exact_divisors(n) {
            if q < 2 || n / q <= 1 {
                continue;
            }
            let total = nu(q, n).map_err(|e| e.to_string())?.total;
            if q <= 4 {
                let s = nu_special(q, n).map_err(|e| e.to_string())?;
                if s != total {
                    return Err(format!("nu_special({q}; {n}) = {s}, nu = {total}"));
                }
            } else {
                let cond = elliptic_condition(n, q).map_err(|e| e.to_string())?;
                if cond {
                    let e = nu_elliptic(q, n).map_err(|e| e.to_string())?;
                    if e != total {
                        return Err(format!("nu_elliptic({q}; {n}) = {e}, nu = {total}"));
                    }
                } else if total != 0 {
                    return Err(format!("condition fails but nu({q}; {n}) = {total}"));
                }
                if cond != (total > 0) {
                    return Err(format!("nu({q}; {n}) = {total} vs condition {cond}"));
                }
            }
        }
    }
    Ok(())
}

/// Exceptional-list regeneration from scratch.
fn criterion_4() -> Result<(), String> {
    let mut found = Vec::new();
    for n in 5..=2000i64 {
        if genus0(n).g0 < 2 {
            continue;
        }
        if nu(n, n).map_err(|e| e.to_string())?.total <= 4 {
            found.push(n);
        }
    }
    if found != exceptional_levels() {
        return Err(format!("regenerated list {found:?}"));
    }
    Ok(())
}

fn matches_table(row: &table1::TableRow) -> Result<Vec<HeegnerPoint>, String> {
    let pts = enumerate_fixed_points(row.n).map_err(|e| e.to_string())?;
    if pts.len() != row.points.len() {
        return Err(format!(
            "level {}: {} enumerated, {} printed",
            row.n,
            pts.len(),
            row.points.len()
        ));
    }
    let mut used = vec![false; pts.len()];
    for tp in &row.points {
        let hit = pts.iter().enumerate().find(|&(i, p)| {
            !used[i] && table1::gamma0_equivalent(&tp.point, p)
        });
        match hit {
            Some((i, _)) => used[i] = true,
            None => {
                return Err(format!("level {}: {:?} unmatched", row.n, tp.text));
            }
        }
    }
    Ok(pts)
}

/// Table reproduction: every printed point matches an enumerated point
/// up to the congruence group, bijectively; for levels 22 and 37 the
/// normalized coordinates agree with the printed ones to 12 digits.
fn criterion_5() -> Result<(), String> {
    let rows = table1::rows();
    if rows.len() != 40 {
        return Err(format!("{} rows, expected 40", rows.len()));
    }
    for row in &rows {
        let pts = matches_table(row)?;
        if row.n == 22 || row.n == 37 {
            for tp in &row.points {
                let target_x = tp.point.x().to_f64();
                let target_y = tp.point.y_squared().to_f64().sqrt();
                let close = pts.iter().any(|p| {
                    let (opt, _) = optimize_point(p);
                    (opt.x().to_f64() - target_x).abs() < 1e-12
                        && (opt.y_squared().to_f64().sqrt() - target_y).abs() < 1e-12
                });
                if !close {
                    return Err(format!(
                        "level {}: no normalized point within 1e-12 of {:?}",
                        row.n, tp.text
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Negative controls at the default truncation: every fixed point of
/// the five reference levels should be certified NotWeierstrass.
fn criterion_6() -> Result<(), String> {
    let mut failures = Vec::new();
    for n in [22i64, 28, 30, 33, 37] {
        let basis = fixture(n);
        for pt in enumerate_fixed_points(n).map_err(|e| e.to_string())? {
            let r = verdict(&basis, &pt, 60, Some(200)).map_err(|e| e.to_string())?;
            if r.verdict != WronskianVerdict::NotWeierstrass {
                failures.push(format!(
                    "level {n} point [{}, {}, {}]: {:?} (radius {:.3e})",
                    pt.form.a, pt.form.b, pt.form.c, r.verdict, r.det.rad
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

/// Positive control: all eight fixed points at level 35 look like
/// Weierstrass points, with the midpoint far below the Hadamard scale.
fn criterion_7() -> Result<(), String> {
    let basis = fixture(35);
    for pt in enumerate_fixed_points(35).map_err(|e| e.to_string())? {
        let r = verdict(&basis, &pt, 60, Some(1400)).map_err(|e| e.to_string())?;
        if r.verdict != WronskianVerdict::LikelyWeierstrass {
            return Err(format!(
                "point [{}, {}, {}]: {:?}",
                pt.form.a, pt.form.b, pt.form.c, r.verdict
            ));
        }
    }
    Ok(())
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> i64 {
        (self.next() % bound) as i64
    }
}

fn random_form(rng: &mut Rng) -> QuadForm {
    loop {
        let a = 1 + rng.below(100);
        let b = rng.below(201) - 100;
        let c_min = b * b / (4 * a) + 1;
        let c = c_min + rng.below(100);
        let f = QuadForm::new(a, b, c);
        if f.is_positive_definite() {
            return f;
        }
    }
}

fn brute_force_class_number(d: i64) -> i64 {
    let mut count = 0;
    let mut a = 1;
    while 3 * a * a <= d {
        for b in -a..=a {
            if (b * b + d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + d) / (4 * a);
            let f = QuadForm::new(a, b, c);
            if f.is_reduced() && f.is_primitive() {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

fn random_gamma0(rng: &mut Rng, n: i64) -> UnimodularMatrix {
    let t1 = UnimodularMatrix::translation(rng.below(7) - 3);
    let k = rng.below(3) - 1;
    let lower = UnimodularMatrix::new(1, 0, k * n, 1);
    let t2 = UnimodularMatrix::translation(rng.below(7) - 3);
    t1.mul(&lower).mul(&t2)
}

/// Property suites: reduction, class-number oracle, Riemann-Hurwitz
/// integrality, representative optimality, verdict invariance.
fn criterion_8() -> Result<(), String> {
    let mut rng = Rng(0x5eed);

    for _ in 0..10_000 {
        let f = random_form(&mut rng);
        let (r, m) = f.reduce();
        if !r.is_reduced()
            || r.discriminant() != f.discriminant()
            || f.apply(&m) != r
            || r.reduce().0 != r
        {
            return Err(format!("reduction broke on {f:?}"));
        }
    }

    for d in 1..=400i64 {
        if d % 4 != 0 && d % 4 != 3 {
            continue;
        }
        let h = class_number(d).map_err(|e| e.to_string())?;
        let oracle = brute_force_class_number(d);
        if h != oracle {
            return Err(format!("h(-{d}) = {h}, brute force {oracle}"));
        }
    }

    for n in 2..=500i64 {
        for q in exact_divisors(n) {
            if q < 2 || n / q <= 1 {
                continue;
            }
            let g = quotient_genus(n, q).map_err(|e| e.to_string())?;
            match g.as_integer() {
                Some(v) if v >= 0 => {}
                _ => return Err(format!("quotient genus of ({n}, {q}) is {g}")),
            }
        }
    }

    for row in table1::rows().iter().filter(|r| r.n <= 60) {
        let n = row.n;
        for pt in enumerate_fixed_points(n).map_err(|e| e.to_string())? {
            let (opt, _) = optimize_point(&pt);
            let x = opt.x();
            if !(2 * x.num() > -x.den() && 2 * x.num() <= x.den()) {
                return Err(format!("level {n}: x = {x} outside the window"));
            }
            // No coset move with |c| <= 3N may raise the point further:
            // |c tau + d|^2 scaled by (2A)^2 stays at or above (2A)^2.
            let a2 = 2 * opt.form.a as i128;
            let b = opt.form.b as i128;
            let disc = opt.d as i128;
            for k in 1..=3i128 {
                for sign in [-1i128, 1] {
                    let c = sign * k * n as i128;
                    for dd in -(3 * n as i128 + 2)..=(3 * n as i128 + 2) {
                        // only coprime (c, d) extend to a group element
                        if alwp_core::arith::gcd(c.unsigned_abs() as i64, dd.unsigned_abs() as i64)
                            != 1
                        {
                            continue;
                        }
                        let num = (a2 * dd - c * b).pow(2) + c * c * disc;
                        if num < a2 * a2 {
                            return Err(format!(
                                "level {n}: ({c}, {dd}) beats the optimized point"
                            ));
                        }
                    }
                }
            }
        }
    }

    for n in [22i64, 37] {
        let basis = fixture(n);
        for pt in enumerate_fixed_points(n).map_err(|e| e.to_string())? {
            let base = verdict(&basis, &pt, 60, Some(200)).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let g = random_gamma0(&mut rng, n);
                let moved = HeegnerPoint::new(pt.form.apply(&g.inverse()), pt.d, pt.n, pt.beta);
                let r = verdict(&basis, &moved, 60, Some(200)).map_err(|e| e.to_string())?;
                if r.verdict != base.verdict {
                    return Err(format!("level {n}: verdict changed under {g:?}"));
                }
            }
        }
    }

    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<(), String>)> = vec![
        ("class-number ground truth", criterion_1),
        ("fixed-point counts", criterion_2),
        ("formula consistency", criterion_3),
        ("exceptional-list regeneration", criterion_4),
        ("table reproduction", criterion_5),
        ("Wronskian negative controls", criterion_6),
        ("Wronskian positive control", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {} ({name}): pass [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {msg}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
