//! Command-line front end. Exit codes: 0 success, 1 failed check,
//! 2 configuration or input error, 3 numerical abort.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::parse_config;
use super::records::{read_records, write_records, write_snapshot, RunRecord};
use crate::disk_spectral::{GridSpec, ScalarFieldDisk};
use crate::dynamics::{simulate, InitialCondition, Termination};
use crate::elliptic::{pressure_solve, taylor_sign, SolverParams};
use crate::energies::energy_rate_report;
use crate::error::{Error, Result};
use crate::geometry::boundary_geometry;
use crate::hodge::{lemma_suite, LemmaSuiteParams};
use crate::potential::mollifier_convergence_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "freesurf", version, about = "Self-gravitating free-boundary Euler flow on the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a configured simulation and write its CSV record.
    Simulate {
        config: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON snapshot of the final state.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Static disk: pressure against (1 − ρ²)/4 and c₀ against 1/2.
    EquilibriumCheck {
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, default_value_t = 48)]
        m: usize,
    },
    /// Rigid rotation: pressure against (1/2 − ω²)(1 − ρ²)/2 and c₀ against 1/2 − ω².
    RotationCheck {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, default_value_t = 48)]
        m: usize,
    },
    /// Inequality suite; prints one CSV row per check.
    VerifyLemmas {
        #[arg(long, default_value_t = 2000)]
        kmax: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, default_value_t = 48)]
        m: usize,
    },
    /// Mollified-potential error against indicator error over a sweep of m.
    PotentialConvergence {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        ms: Vec<usize>,
    },
    /// Finite-difference energy rates from a run CSV.
    EnergyReport {
        csv: PathBuf,
        /// Polynomial coefficients c₀, c₁, … of the rate bound Σ cₙEⁿ.
        #[arg(long, value_delimiter = ',')]
        coeffs: Vec<f64>,
    },
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run_cli`], writing to the given streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate { config, out: dest, snapshot } => cmd_simulate(&config, dest, snapshot, out, err),
        Command::EquilibriumCheck { k, m } => cmd_pressure_check(k, m, None, out),
        Command::RotationCheck { omega, k, m } => cmd_pressure_check(k, m, Some(omega), out),
        Command::VerifyLemmas { kmax, samples, seed, k, m } => cmd_verify(kmax, samples, seed, k, m, out),
        Command::PotentialConvergence { ms } => cmd_potential(&ms, out),
        Command::EnergyReport { csv, coeffs } => cmd_energy(&csv, &coeffs, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn cmd_simulate(
    path: &PathBuf,
    dest: Option<PathBuf>,
    snapshot: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let config = parse_config(&text)?;
    for f in &config.flags {
        writeln!(err, "warning: {f}").map_err(io)?;
    }
    let setup = config.to_setup()?;
    let echo = config.echo();
    let (record, final_state, status) = match simulate(&setup) {
        Ok(o) => {
            for w in &o.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            (RunRecord::from_output(&echo, &o), Some(o.final_state), o.status)
        }
        Err(e) if e.is_numerical() => {
            let status = Termination::SolverFailure(e.to_string());
            let mut rec = RunRecord::new(&echo);
            rec.status = status.label().to_string();
            rec.status_detail = status.detail().to_string();
            (rec, None, status)
        }
        Err(e) => return Err(e),
    };
    match dest {
        Some(p) => write_records(&record, &p)?,
        None => out.write_all(record.to_csv().as_bytes()).map_err(io)?,
    }
    if let (Some(p), Some(s)) = (snapshot, final_state.as_ref()) {
        write_snapshot(s, &p)?;
    }
    if status != Termination::Completed {
        writeln!(err, "run stopped: {} {}", status.label(), status.detail()).map_err(io)?;
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

fn cmd_pressure_check(k: usize, m: usize, omega: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let grid = GridSpec::new(k, m)?;
    let (ic, w) = match omega {
        None => (InitialCondition::Static, 0.0),
        Some(w) => (InitialCondition::Rotation { omega: w }, w),
    };
    let state = ic.build(&grid)?;
    let (p, grad_p) = pressure_solve(&state, -1.0, &SolverParams::default())?;
    let amp = 0.5 * (0.5 - w * w);
    let exact = ScalarFieldDisk::from_polar(&grid, |r, _| amp * (1.0 - r * r));
    let p_err = (&p - &exact).sup_norm();
    let c0 = taylor_sign(&grad_p, &boundary_geometry(&state.x)?);
    let c0_exact = 0.5 - w * w;
    writeln!(out, "omega = {w}").map_err(io)?;
    writeln!(out, "pressure sup error = {p_err:.3e}").map_err(io)?;
    writeln!(out, "c0 = {c0:.10} (expected {c0_exact})").map_err(io)?;
    if c0_exact <= 0.0 {
        writeln!(out, "note: omega^2 >= 1/2 predicts c0 <= 0 (Taylor sign fails)").map_err(io)?;
    }
    let pass = p_err <= 1e-6 && (c0 - c0_exact).abs() <= 1e-3;
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_verify(kmax: usize, samples: usize, seed: u64, k: usize, m: usize, out: &mut dyn Write) -> Result<i32> {
    let params = LemmaSuiteParams {
        k_max: kmax,
        samples,
        seed,
        grid: GridSpec::new(k, m)?,
    };
    let reports = lemma_suite(&params)?;
    writeln!(out, "name,lhs,rhs,empirical_constant,ceiling,asserted,identity_error,pass,sample_descriptor").map_err(io)?;
    for r in &reports {
        let id = r.identity_error.map(|e| format!("{e:.6e}")).unwrap_or_default();
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{},{},{},{},{}",
            r.name,
            r.lhs,
            r.rhs,
            r.empirical_constant,
            r.ceiling,
            r.asserted,
            id,
            r.pass,
            csv_cell(&r.sample_descriptor)
        )
        .map_err(io)?;
    }
    let failed = reports.iter().any(|r| r.asserted && !r.pass);
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn cmd_potential(ms: &[usize], out: &mut dyn Write) -> Result<i32> {
    let rows = mollifier_convergence_report(ms)?;
    writeln!(out, "m,grad_error,indicator_error,ratio").map_err(io)?;
    for r in &rows {
        let ratio = r.ratio.map(|v| format!("{v:.16e}")).unwrap_or_default();
        writeln!(out, "{},{:.16e},{:.16e},{}", r.m, r.grad_error, r.indicator_error, ratio).map_err(io)?;
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let spread = match (
        ratios.iter().cloned().reduce(f64::max),
        ratios.iter().cloned().reduce(f64::min),
    ) {
        (Some(hi), Some(lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    writeln!(out, "# ratio spread max/min = {spread:.6}").map_err(io)?;
    Ok(if spread < 3.0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_energy(path: &PathBuf, coeffs: &[f64], out: &mut dyn Write) -> Result<i32> {
    let rec = read_records(path)?;
    let series: Vec<_> = rec.rows.iter().map(|r| r.energy_report()).collect();
    let rows = energy_rate_report(&series, coeffs);
    writeln!(out, "# status: {}", rec.status).map_err(io)?;
    writeln!(out, "t,dE,dE1,dE2,dE3,dE4,flagged").map_err(io)?;
    for r in &rows {
        let rates: Vec<String> = r.rates.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{:.16e},{},{}", r.t, rates.join(","), r.flagged).map_err(io)?;
    }
    if let (Some(first), Some(last)) = (rec.rows.first(), rec.rows.last()) {
        if first.e > 0.0 {
            writeln!(out, "# E(t_end)/E(0) = {:.6}", last.e / first.e).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}
