//! Command-line front end: fixed-point counts, point enumeration,
//! classification sweeps, the numerical Wronskian test, and full
//! regeneration of the reference table.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use alwp_core::fixedpoints::{
    delta, enumerate_fixed_points, exact_divisors, nu, HeegnerPoint,
};
use alwp_core::quadforms::class_number;
use alwp_core::weierstrass::{classify, exceptional_levels, genus0, quotient_genus};
use alwp_core::wronskian::basis::{basis_path, load_basis, CuspFormBasis};
use alwp_core::wronskian::{verdict, WronskianReport};

#[derive(Parser)]
#[command(
    name = "alwp",
    version,
    about = "Atkin-Lehner fixed points on X_0(N) and their Weierstrass status"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Numeric {
    /// Working precision in decimal digits (minimum 15)
    #[arg(long, default_value_t = 60)]
    digits: u32,
    /// Series truncation; defaults to max(200, 20 * genus)
    #[arg(long)]
    trunc: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-point counts nu(Q; N) with the formula's terms
    Nu {
        #[arg(long)]
        level: i64,
        /// Restrict to one exact divisor
        #[arg(long)]
        q: Option<i64>,
    },
    /// Enumerate the fixed points of the full involution as CM points
    FixedPoints {
        #[arg(long)]
        level: i64,
        #[arg(long, default_value_t = 60)]
        digits: u32,
    },
    /// Weierstrass classification by the counting criterion
    Classify {
        #[arg(long)]
        level: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
        /// Range sweep A..B (inclusive); emits CSV
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Numerical determinant test at the fixed points of one level
    Wronskian {
        #[arg(long)]
        level: i64,
        /// Basis file; defaults to the shipped fixture directory
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Evaluate at every fixed point (default behavior)
        #[arg(long)]
        all_fixed_points: bool,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Reproduce the reference table of fixed points on the 40 levels
    Table1 {
        /// Directory with basis files named level_0NN.txt
        #[arg(long)]
        basis_dir: Option<PathBuf>,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// CSV sweep of (N, Q, nu, g0, gplus, status) over a level range
    Sweep {
        /// Range A..B (inclusive)
        #[arg(long)]
        range: String,
    },
}

fn default_basis_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/bases")
}

fn provenance(digits: u32, trunc: Option<usize>) -> serde_json::Value {
    json!({
        "tool": "alwp",
        "version": env!("CARGO_PKG_VERSION"),
        "digits": digits,
        "trunc": trunc,
    })
}

fn point_json(pt: &HeegnerPoint, digits: u32) -> serde_json::Value {
    let tau = pt.tau_complex(digits);
    json!({
        "a": pt.form.a,
        "b": pt.form.b,
        "c": pt.form.c,
        "d": pt.d,
        "beta": pt.beta,
        "x": pt.x().to_string(),
        "y_squared": pt.y_squared().to_string(),
        "tau_re": tau.real().to_string_radix(10, Some(digits as usize)),
        "tau_im": tau.imag().to_string_radix(10, Some(digits as usize)),
    })
}

fn report_json(r: &WronskianReport, digits: u32) -> serde_json::Value {
    let tau = r.point.tau_complex(digits);
    json!({
        "tau": {
            "x": r.point.x().to_string(),
            "re": tau.real().to_f64(),
            "im": tau.imag().to_f64(),
            "form": [r.point.form.a, r.point.form.b, r.point.form.c],
        },
        "det_mid": [r.det.mid.real().to_f64(), r.det.mid.imag().to_f64()],
        "det_rad": r.det.rad,
        "hadamard": r.hadamard,
        "verdict": format!("{:?}", r.verdict),
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range must look like A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| "bad range start".to_string())?;
    let b: i64 = b.trim().parse().map_err(|_| "bad range end".to_string())?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn cmd_nu(level: i64, q: Option<i64>) -> Result<(), String> {
    let qs = match q {
        Some(q) => vec![q],
        None => exact_divisors(level).into_iter().filter(|&q| q >= 2).collect(),
    };
    let mut reports = Vec::new();
    for q in qs {
        reports.push(nu(q, level).map_err(|e| e.to_string())?);
    }
    let out = json!({
        "level": level,
        "delta": delta(level).to_string(),
        "h4n": class_number(4 * level).map_err(|e| e.to_string())?,
        "nu": reports,
        "provenance": provenance(0, None),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_fixed_points(level: i64, digits: u32) -> Result<(), String> {
    let pts = enumerate_fixed_points(level).map_err(|e| e.to_string())?;
    let optimized: Vec<serde_json::Value> = pts
        .iter()
        .map(|p| {
            let (opt, _) = alwp_core::wronskian::optimize_point(p);
            point_json(&opt, digits)
        })
        .collect();
    let out = json!({
        "level": level,
        "count": pts.len(),
        "points": optimized,
        "provenance": provenance(digits, None),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn sweep_csv(lo: i64, hi: i64) -> Result<(), String> {
    println!("N,Q,nu,g0,gplus,status");
    for n in lo..=hi {
        for q in exact_divisors(n).into_iter().filter(|&q| q >= 2) {
            let v = classify(n, q).map_err(|e| e.to_string())?;
            let gplus = quotient_genus(n, q).map_err(|e| e.to_string())?;
            println!(
                "{n},{q},{},{},{},{:?}",
                v.nu.total,
                genus0(n).g0,
                gplus,
                v.status
            );
        }
    }
    Ok(())
}

fn cmd_classify(level: Option<i64>, q: Option<i64>, sweep: Option<String>) -> Result<(), String> {
    if let Some(range) = sweep {
        let (lo, hi) = parse_range(&range)?;
        return sweep_csv(lo, hi);
    }
    let level = level.ok_or("either --level or --sweep is required")?;
    let qs = match q {
        Some(q) => vec![q],
        None => exact_divisors(level).into_iter().filter(|&q| q >= 2).collect(),
    };
    let mut verdicts = Vec::new();
    for q in qs {
        let v = classify(level, q).map_err(|e| e.to_string())?;
        verdicts.push(json!({
            "n": v.n,
            "q": v.q,
            "g0": v.g0,
            "nu": v.nu.total,
            "status": format!("{:?}", v.status),
            "reason": v.reason,
        }));
    }
    let out = json!({
        "level": level,
        "verdicts": verdicts,
        "provenance": provenance(0, None),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn load_level_basis(level: i64, path: Option<PathBuf>) -> Result<CuspFormBasis, String> {
    let path = path.unwrap_or_else(|| basis_path(&default_basis_dir(), level));
    let basis = load_basis(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if basis.n != level {
        return Err(format!(
            "basis file is for level {}, requested {level}",
            basis.n
        ));
    }
    Ok(basis)
}

fn cmd_wronskian(level: i64, basis: Option<PathBuf>, numeric: &Numeric) -> Result<(), String> {
    if numeric.digits < 15 {
        return Err("digits must be at least 15".into());
    }
    let basis = load_level_basis(level, basis)?;
    let pts = enumerate_fixed_points(level).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for pt in &pts {
        let r = verdict(&basis, pt, numeric.digits, numeric.trunc).map_err(|e| e.to_string())?;
        reports.push(report_json(&r, numeric.digits));
    }
    let out = json!({
        "level": level,
        "genus": basis.g,
        "points": reports,
        "provenance": provenance(numeric.digits, numeric.trunc),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_table1(basis_dir: Option<PathBuf>, numeric: &Numeric) -> Result<(), String> {
    let dir = basis_dir.unwrap_or_else(default_basis_dir);
    for n in exceptional_levels() {
        let pts = enumerate_fixed_points(n).map_err(|e| e.to_string())?;
        let basis = load_basis(basis_path(&dir, n)).ok();
        let mut cells = Vec::new();
        for pt in &pts {
            let (opt, _) = alwp_core::wronskian::optimize_point(pt);
            let x = opt.x();
            let coord = if x.num() == 0 {
                format!("sqrt(-{})/{}", opt.d, 2 * opt.form.a)
            } else {
                format!("{x}+sqrt(-{})/{}", opt.d, 2 * opt.form.a)
            };
            let cell = match &basis {
                Some(b) => {
                    let r = verdict(b, pt, numeric.digits, numeric.trunc)
                        .map_err(|e| e.to_string())?;
                    format!("{coord} [{:?}]", r.verdict)
                }
                None => coord,
            };
            cells.push(cell);
        }
        println!("{n}: {}", cells.join("; "));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Nu { level, q } => cmd_nu(*level, *q),
        Command::FixedPoints { level, digits } => cmd_fixed_points(*level, *digits),
        Command::Classify { level, q, sweep } => cmd_classify(*level, *q, sweep.clone()),
        Command::Wronskian {
            level,
            basis,
            all_fixed_points: _,
            numeric,
        } => cmd_wronskian(*level, basis.clone(), numeric),
        Command::Table1 { basis_dir, numeric } => cmd_table1(basis_dir.clone(), numeric),
        Command::Sweep { range } => parse_range(range).and_then(|(lo, hi)| sweep_csv(lo, hi)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
