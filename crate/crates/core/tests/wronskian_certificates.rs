//! Certificates that the default truncation cannot deliver. Levels 30
//! and 33 have fixed points with imaginary part below 0.012, so the
//! series needs on the order of a thousand terms before the rigorous
//! tail radius drops below the determinant size; the shipped bases
//! carry 1500 coefficients for exactly this reason.

use std::path::PathBuf;

use alwp_core::fixedpoints::enumerate_fixed_points;
use alwp_core::wronskian::basis::{basis_path, load_basis, CuspFormBasis};
use alwp_core::wronskian::{verdict, WronskianVerdict};

fn fixture(n: i64) -> CuspFormBasis {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/bases");
    load_basis(basis_path(&dir, n)).unwrap()
}

#[test]
fn low_lying_points_certified_at_high_truncation() {
    for n in [30i64, 33] {
        let basis = fixture(n);
        for pt in enumerate_fixed_points(n).unwrap() {
            let r = verdict(&basis, &pt, 60, Some(1400)).unwrap();
            assert_eq!(
                r.verdict,
                WronskianVerdict::NotWeierstrass,
                "level {n} point [{}, {}, {}], radius {:.3e}",
                pt.form.a,
                pt.form.b,
                pt.form.c,
                r.det.rad
            );
        }
    }
}

#[test]
fn doubling_truncation_never_flips_a_certificate() {
    for n in [22i64, 37] {
        let basis = fixture(n);
        for pt in enumerate_fixed_points(n).unwrap() {
            let coarse = verdict(&basis, &pt, 60, Some(200)).unwrap();
            let fine = verdict(&basis, &pt, 60, Some(400)).unwrap();
            if coarse.verdict == WronskianVerdict::NotWeierstrass {
                assert_eq!(fine.verdict, WronskianVerdict::NotWeierstrass);
            }
        }
    }
}
