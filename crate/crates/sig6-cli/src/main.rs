//! `sig6` command line: evaluate the signature-6 frame, tabulate it as CSV,
//! run the thirteen-identity verifier, report quarter periods, and continue
//! the frame (or the classical Jacobi baseline) along complex paths.
//!
//! Exit codes: 0 success, 1 verification/convergence failure, 2 usage,
//! 3 I/O, 4 singularity or blow-up along a continuation path.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use sig6::flow::{
    classical_integrate_path, classical_integrate_segment, integrate_path, integrate_segment,
    ClassicalState, FlowState,
};
use sig6::{
    classical_quarter_periods, frame_at, quarter_period, residual_report, Error, Modulus, PathSpec,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sig6", version, about = "Signature-6 analogues of the Jacobi elliptic functions", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the full frame at one real u.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        u: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate the frame over [u-min, u-max] as CSV (tn/T omitted: pole-prone).
    #[command(allow_negative_numbers = true)]
    Table {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        u_min: f64,
        #[arg(long)]
        u_max: f64,
        /// Number of rows, endpoints included.
        #[arg(long)]
        steps: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity residual suite over a grid of moduli.
    Verify {
        /// Comma-separated moduli.
        #[arg(long, default_value = "0.1,0.3,0.5,0.7071067811865476,0.9")]
        kappa_list: String,
        /// Equispaced u-points on [-2K6, 2K6] per modulus.
        #[arg(long, default_value_t = 33)]
        u_count: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print K6(kappa), K6(lambda), and the classical K(kappa), K'(kappa).
    Periods {
        #[arg(long)]
        kappa: f64,
    },
    /// Continue along a complex path and report return residuals.
    #[command(name = "continue", allow_negative_numbers = true)]
    Continue {
        #[arg(long)]
        kappa: f64,
        #[arg(long, value_enum, default_value_t = System::Sig6)]
        system: System,
        /// Comma-separated waypoints in x+iy form, e.g. "0.3,0.3+1.5i".
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum System {
    Sig6,
    Classical,
}

/// A failure routed to stderr plus its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Domain { .. } => 2,
            Error::Singularity { .. } | Error::StepUnderflow { .. } => 4,
            Error::SeriesDivergence { .. } | Error::NoConvergence { .. } => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { kappa, u, format } => cmd_eval(kappa, u, format),
        Command::Table {
            kappa,
            u_min,
            u_max,
            steps,
            out,
        } => cmd_table(kappa, u_min, u_max, steps, out.as_deref()),
        Command::Verify {
            kappa_list,
            u_count,
            tol,
        } => cmd_verify(&kappa_list, u_count, tol),
        Command::Periods { kappa } => cmd_periods(kappa),
        Command::Continue {
            kappa,
            system,
            path,
            tol,
            out,
        } => cmd_continue(kappa, system, &path, tol, out.as_deref()),
    }
}

fn validated_modulus(kappa: f64) -> Result<Modulus, Failure> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Failure::usage("kappa must lie in (0,1)"));
    }
    Ok(Modulus::new(kappa)?)
}

fn validated_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::usage("tol must be positive"));
    }
    Ok(())
}

/// 17 significant digits: round-trips f64 and keeps CSV bit-stable.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: 3,
            message: format!("cannot write {}: {e}", path.display()),
        }),
    }
}

fn cmd_eval(kappa: f64, u: f64, format: Format) -> Result<(), Failure> {
    let m = validated_modulus(kappa)?;
    let f = frame_at(&m, u)?;
    match format {
        Format::Csv => {
            println!("u,phi,psi,s,c,d,delta,partial,sigma,nabla,S,C,D,tn,T");
            let opt = |v: Option<f64>| v.map(sig17).unwrap_or_default();
            println!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                sig17(f.u),
                sig17(f.phi),
                sig17(f.psi),
                sig17(f.s),
                sig17(f.c),
                sig17(f.d),
                sig17(f.delta),
                sig17(f.p),
                sig17(f.sigma),
                sig17(f.nabla),
                sig17(f.s_sq),
                sig17(f.c_sq),
                sig17(f.d_sq),
                opt(f.tn),
                opt(f.t_sq),
            );
        }
        Format::Json => {
            let object = json!({
                "u": f.u,
                "phi": f.phi,
                "psi": f.psi,
                "s": f.s,
                "c": f.c,
                "d": f.d,
                "delta": f.delta,
                "partial": f.p,
                "sigma": f.sigma,
                "nabla": f.nabla,
                "S": f.s_sq,
                "C": f.c_sq,
                "D": f.d_sq,
                "tn": f.tn,
                "T": f.t_sq,
            });
            println!("{object:#}");
        }
    }
    Ok(())
}

fn cmd_table(
    kappa: f64,
    u_min: f64,
    u_max: f64,
    steps: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let m = validated_modulus(kappa)?;
    if steps < 2 {
        return Err(Failure::usage("steps must be at least 2"));
    }
    if u_min.is_nan() || u_max.is_nan() || u_min >= u_max {
        return Err(Failure::usage("u-min must be less than u-max"));
    }
    let mut csv = String::from("u,phi,psi,s,c,d,delta,partial,sigma,nabla\n");
    for i in 0..steps {
        let u = u_min + (u_max - u_min) * i as f64 / (steps - 1) as f64;
        let f = frame_at(&m, u)?;
        let row = [
            f.u, f.phi, f.psi, f.s, f.c, f.d, f.delta, f.p, f.sigma, f.nabla,
        ];
        let line = row.map(sig17).join(",");
        writeln!(csv, "{line}").expect("string write");
    }
    emit(&csv, out)
}

fn cmd_verify(kappa_list: &str, u_count: usize, tol: f64) -> Result<(), Failure> {
    validated_tol(tol)?;
    if u_count < 2 {
        return Err(Failure::usage("u-count must be at least 2"));
    }
    if kappa_list.trim().is_empty() {
        return Err(Failure::usage("kappa-list must not be empty"));
    }
    let kappas = kappa_list
        .split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("invalid kappa '{}'", item.trim())))
        })
        .collect::<Result<Vec<f64>, Failure>>()?;

    let mut failures = 0usize;
    for kappa in kappas {
        let m = validated_modulus(kappa)?;
        let report = residual_report(&m, u_count, tol)?;
        let tag = if report.pass { "PASS" } else { "FAIL" };
        println!(
            "kappa = {kappa}: {tag}  ({}, tol {tol:.1e}, R13 skipped at {} points)",
            report.grid, report.r13_skipped
        );
        for (name, value) in &report.entries {
            println!(
                "  {name:<24} max {value:.3e}  at u = {:+.6e}",
                report.argmax_u[name]
            );
        }
        if !report.pass {
            failures += 1;
        }
    }
    if failures > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{failures} modulus report(s) exceeded tol {tol:.1e}"),
        });
    }
    Ok(())
}

fn cmd_periods(kappa: f64) -> Result<(), Failure> {
    let m = validated_modulus(kappa)?;
    let (k, k_prime) = classical_quarter_periods(kappa)?;
    let complementary = Modulus::new(m.lambda())?;
    println!("K6(kappa)  = {}", sig17(quarter_period(&m)));
    println!("K6(lambda) = {}", sig17(quarter_period(&complementary)));
    println!("K(kappa)   = {}", sig17(k));
    println!("K'(kappa)  = {}", sig17(k_prime));
    Ok(())
}

/// Parse one waypoint in `x+iy` form: "1.5", "-2", "i", "-i", "2i",
/// "1+2i", "-1.5-0.3i", with scientific notation allowed in each part.
fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Ok(re) = s.parse::<f64>() {
        // f64::from_str accepts "nan"/"inf"; the integrator does not.
        return re.is_finite().then(|| Complex64::new(re, 0.0));
    }
    let body = s.strip_suffix('i')?;
    // Split before the sign of the imaginary part: the last +/- that is
    // neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = body
        .char_indices()
        .rev()
        .find(|&(i, ch)| {
            (ch == '+' || ch == '-')
                && i > 0
                && !matches!(bytes[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i);
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().ok()?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_part.parse::<f64>().ok()?,
    };
    (re.is_finite() && im.is_finite()).then(|| Complex64::new(re, im))
}

fn parse_path(path: &str) -> Result<PathSpec, Failure> {
    let waypoints = path
        .split(',')
        .map(|item| {
            parse_complex(item).ok_or_else(|| {
                Failure::usage(format!("invalid waypoint '{}': expected x+iy", item.trim()))
            })
        })
        .collect::<Result<Vec<Complex64>, Failure>>()?;
    Ok(PathSpec::new(waypoints)?)
}

fn format_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Real translation-law detection for two-waypoint paths: τ = n·step on the
/// real axis, n ≠ 0.
fn half_period_multiple(tau: Complex64, step: f64) -> Option<i64> {
    if tau.im.abs() > 1e-9 {
        return None;
    }
    let n = (tau.re / step).round();
    if n != 0.0 && (tau.re - n * step).abs() <= 1e-8 {
        Some(n as i64)
    } else {
        None
    }
}

fn law_sign(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn cmd_continue(
    kappa: f64,
    system: System,
    path: &str,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let m = validated_modulus(kappa)?;
    validated_tol(tol)?;
    let spec = parse_path(path)?;
    let w = spec.waypoints();
    let straight_tau = (w.len() == 2).then(|| w[1] - w[0]);

    let report = match system {
        System::Sig6 => {
            let base = integrate_segment(&FlowState::origin(), &m, w[0], tol)?;
            let trace = integrate_path(&base, &m, &spec, tol)?;
            let f = *trace.final_state();
            let return_residual = (f.s - base.s)
                .norm()
                .max((f.c - base.c).norm())
                .max((f.d - base.d).norm())
                .max((f.p - base.p).norm())
                .max((f.sigma - base.sigma).norm());
            let step = 2.0 * quarter_period(&m);
            let law = straight_tau
                .and_then(|tau| half_period_multiple(tau, step))
                .map(|n| {
                    let sgn = law_sign(n);
                    let r = (f.s - sgn * base.s)
                        .norm()
                        .max((f.c - sgn * base.c).norm())
                        .max((f.sigma - sgn * base.sigma).norm())
                        .max((f.d - base.d).norm())
                        .max((f.p - base.p).norm());
                    (n, r)
                });
            json!({
                "system": "sig6",
                "kappa": kappa,
                "waypoints": w.iter().copied().map(format_complex).collect::<Vec<_>>(),
                "tol": tol,
                "return_residual": return_residual,
                "law_half_periods": law.map(|(n, _)| n),
                "law_residual": law.map(|(_, r)| r),
                "delta_return": (f.delta() - base.delta()).norm(),
                "min_abs_p": trace.min_abs_p,
                "steps": trace.steps,
                "invariant_drift": trace.max_drift,
                "final_state": {
                    "u": complex_json(f.u),
                    "s": complex_json(f.s),
                    "c": complex_json(f.c),
                    "d": complex_json(f.d),
                    "partial": complex_json(f.p),
                    "sigma": complex_json(f.sigma),
                },
            })
        }
        System::Classical => {
            let origin = ClassicalState::origin(kappa)?;
            let base = classical_integrate_segment(&origin, w[0], tol)?;
            let trace = classical_integrate_path(&base, &spec, tol)?;
            let f = *trace.final_state();
            let return_residual = (f.sn - base.sn)
                .norm()
                .max((f.cn - base.cn).norm())
                .max((f.dn - base.dn).norm());
            let (big_k, _) = classical_quarter_periods(kappa)?;
            let law = straight_tau
                .and_then(|tau| half_period_multiple(tau, 2.0 * big_k))
                .map(|n| {
                    let sgn = law_sign(n);
                    let r = (f.sn - sgn * base.sn)
                        .norm()
                        .max((f.cn - sgn * base.cn).norm())
                        .max((f.dn - base.dn).norm());
                    (n, r)
                });
            json!({
                "system": "classical",
                "kappa": kappa,
                "waypoints": w.iter().copied().map(format_complex).collect::<Vec<_>>(),
                "tol": tol,
                "return_residual": return_residual,
                "law_half_periods": law.map(|(n, _)| n),
                "law_residual": law.map(|(_, r)| r),
                "delta_return": serde_json::Value::Null,
                "min_abs_p": serde_json::Value::Null,
                "steps": trace.steps,
                "invariant_drift": trace.max_drift,
                "final_state": {
                    "u": complex_json(f.u),
                    "sn": complex_json(f.sn),
                    "cn": complex_json(f.cn),
                    "dn": complex_json(f.dn),
                },
            })
        }
    };
    emit(&format!("{report:#}\n"), out)
}

#[cfg(test)]
mod tests {
    use super::parse_complex;
    use num_complex::Complex64;

    #[test]
    fn waypoint_forms() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("1.5"), c(1.5, 0.0));
        assert_eq!(parse_complex("-2"), c(-2.0, 0.0));
        assert_eq!(parse_complex("2i"), c(0.0, 2.0));
        assert_eq!(parse_complex("-0.5i"), c(0.0, -0.5));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-i"), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i"), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i"), c(1.0, -2.0));
        assert_eq!(parse_complex("-1.5+0.3i"), c(-1.5, 0.3));
        assert_eq!(parse_complex(" 3.0 , "), None);
        assert_eq!(parse_complex("1e-2+2e-3i"), c(0.01, 0.002));
        assert_eq!(parse_complex("1+i"), c(1.0, 1.0));
        assert_eq!(parse_complex("1-i"), c(1.0, -1.0));
    }

    #[test]
    fn waypoint_rejections() {
        for bad in ["", "x", "1+2j", "i2", "1++2i", "2i+1", "--", "1 2i", "nan", "inf", "nan+2i", "1-infi"] {
            assert_eq!(parse_complex(bad), None, "{bad:?}");
        }
    }
}
