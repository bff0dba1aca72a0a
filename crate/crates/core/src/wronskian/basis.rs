//! Ingestion of weight-2 cusp form bases from integer q-expansion
//! files. One file per level: comment lines start with '#', then a
//! header `level N genus g truncation B`, then g lines each holding
//! a_i(1), ..., a_i(B) separated by commas.

use std::path::Path;

use thiserror::Error;

use crate::weierstrass::genus0;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("cannot read basis file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed basis file: {0}")]
    Malformed(String),
    #[error("file claims genus {file} but X_0({n}) has genus {computed}")]
    GenusMismatch { n: i64, file: i64, computed: i64 },
    #[error("truncation {b} is too small for genus {g} (need at least {min})")]
    TruncationTooSmall { b: usize, g: usize, min: usize },
    #[error("the {g} stored forms are linearly dependent over the rationals")]
    RankDeficient { g: usize },
}

#[derive(Debug, Clone)]
pub struct CuspFormBasis {
    pub n: i64,
    pub g: usize,
    pub b: usize,
    pub coeffs: Vec<Vec<i64>>,
}

/// Number of divisors of n.
pub fn divisor_count(n: u64) -> u64 {
    crate::arith::factorize(n)
        .factors
        .iter()
        .map(|&(_, e)| (e + 1) as u64)
        .product()
}

impl CuspFormBasis {
    /// Calibrated constant for the coefficient growth bound
    /// |a_i(n)| <= C_i * n * d(n), taken as the maximum observed ratio
    /// over the stored range.
    pub fn tail_constant(&self, i: usize) -> f64 {
        self.coeffs[i]
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                let n = (idx + 1) as u64;
                a.unsigned_abs() as f64 / (n as f64 * divisor_count(n) as f64)
            })
            .fold(0.0f64, f64::max)
            * (1.0 + 1e-9)
    }

    /// Rank over the rationals of the g x B coefficient matrix, by
    /// fraction-free elimination in exact arithmetic.
    fn rank(&self) -> usize {
        let mut rows: Vec<Vec<rug::Rational>> = self
            .coeffs
            .iter()
            .map(|r| r.iter().map(|&x| rug::Rational::from(x)).collect())
            .collect();
        let mut rank = 0;
        let mut col = 0;
        while rank < rows.len() && col < self.b {
            if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) {
                rows.swap(rank, pivot);
                for r in rank + 1..rows.len() {
                    if rows[r][col] != 0 {
                        let factor =
                            rug::Rational::from(&rows[r][col] / &rows[rank][col]);
                        for c in col..self.b {
                            let delta = rug::Rational::from(&factor * &rows[rank][c]);
                            rows[r][c] -= delta;
                        }
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank
    }
}

/// Parse and invariant-check a basis file.
pub fn load_basis<P: AsRef<Path>>(path: P) -> Result<CuspFormBasis, BasisError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let header = lines
        .next()
        .ok_or_else(|| BasisError::Malformed("empty file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 6 || tokens[0] != "level" || tokens[2] != "genus" || tokens[4] != "truncation"
    {
        return Err(BasisError::Malformed(format!(
            "bad header line: {header:?}"
        )));
    }
    let n: i64 = tokens[1]
        .parse()
        .map_err(|_| BasisError::Malformed("bad level".into()))?;
    let g: usize = tokens[3]
        .parse()
        .map_err(|_| BasisError::Malformed("bad genus".into()))?;
    let b: usize = tokens[5]
        .parse()
        .map_err(|_| BasisError::Malformed("bad truncation".into()))?;
    if n < 1 || g < 1 || b < 1 {
        return Err(BasisError::Malformed("non-positive header field".into()));
    }

    let computed = genus0(n).g0;
    if computed != g as i64 {
        return Err(BasisError::GenusMismatch {
            n,
            file: g as i64,
            computed,
        });
    }
    if b < 10 * g {
        return Err(BasisError::TruncationTooSmall { b, g, min: 10 * g });
    }

    let mut coeffs = Vec::with_capacity(g);
    for i in 0..g {
        let line = lines.next().ok_or_else(|| {
            BasisError::Malformed(format!("expected {g} coefficient rows, found {i}"))
        })?;
        let row: Result<Vec<i64>, _> = line.split(',').map(|t| t.trim().parse()).collect();
        let row = row.map_err(|_| {
            BasisError::Malformed(format!("row {} has a non-integer entry", i + 1))
        })?;
        if row.len() != b {
            return Err(BasisError::Malformed(format!(
                "row {} has {} entries, expected {b}",
                i + 1,
                row.len()
            )));
        }
        coeffs.push(row);
    }
    if lines.next().is_some() {
        return Err(BasisError::Malformed("trailing data after last row".into()));
    }

    let basis = CuspFormBasis { n, g, b, coeffs };
    if basis.rank() != g {
        return Err(BasisError::RankDeficient { g });
    }
    Ok(basis)
}

/// Conventional fixture path for a level inside a basis directory:
/// `level_0NN.txt` with the level zero-padded to three digits.
pub fn basis_path(dir: &Path, n: i64) -> std::path::PathBuf {
    dir.join(format!("level_{n:03}.txt"))
}
