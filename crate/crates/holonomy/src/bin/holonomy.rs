//! Command-line front end: figure-data emission, single-point reports,
//! and the cross-validation suite.
//!
//! Omega is fixed to 1 (natural units); only the ratio gamma/Omega is
//! exposed. Grid commands write CSV, single-point commands write JSON.
//! Exit codes: 0 success, 1 verification failure, 2 invalid
//! configuration, 3 degenerate-spectrum point.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use holonomy::models::{
    AbelianParams, NonAbelianParams, RampProfile, RampShape, TwoQubitDriveParams,
};
use holonomy::{abelian, experiments, format, nonabelian, verify, Error};

const DEFAULT_STEPS: usize = 20_000;
const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(name = "holonomy", version, about = "Holonomic gate dynamics beyond the adiabatic limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Matching {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ramp {
    Linear,
    Smoothstep,
}

#[derive(Args)]
struct OutputArgs {
    /// output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// number of theta grid points
    #[arg(long, default_value_t = 50)]
    theta_grid: usize,
    /// number of gamma/Omega grid points
    #[arg(long, default_value_t = 50)]
    ratio_grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PointArgs {
    /// mixing angle theta in radians
    #[arg(long)]
    theta: f64,
    /// loop ratio gamma/Omega
    #[arg(long)]
    gamma_ratio: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Leakage overlap eta over theta in (0, pi/2), gamma/Omega in [0, 1]
    Fig1a(GridArgs),
    /// Total phase over theta in [0, pi], gamma/Omega in [0, 1]
    Fig1b(GridArgs),
    /// Dark-space populations vs 1 - cos(theta) for the caption's ratios
    Fig2 {
        /// number of 1 - cos(theta) points per block
        #[arg(long, default_value_t = 200)]
        theta_grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Abelian cycle report: spectrum, leakage, total phase
    Phase(PointArgs),
    /// Non-abelian projected gate report
    Gate(PointArgs),
    /// Matching-interaction dark-state preparation (abelian and
    /// non-abelian variants)
    Prep {
        /// ramp target angle in radians
        #[arg(long, default_value_t = PI / 3.0)]
        theta: f64,
        /// ramp duration in Omega*t units
        #[arg(long, default_value_t = 1.0)]
        duration: f64,
        #[arg(long, value_enum, default_value_t = Matching::On)]
        matching: Matching,
        #[arg(long, value_enum, default_value_t = Ramp::Linear)]
        ramp: Ramp,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-qubit controlled-phase report from the enclosed-space loop
    Twoqubit {
        /// Rabi magnitude of the first drive
        #[arg(long, default_value_t = 1.0)]
        amp1: f64,
        /// Rabi magnitude of the second drive
        #[arg(long, default_value_t = 1.0)]
        amp2: f64,
        /// drive phase of the first beam (radians)
        #[arg(long, default_value_t = 0.0)]
        phi1: f64,
        /// drive phase of the second beam (radians)
        #[arg(long, default_value_t = 0.0)]
        phi2: f64,
        /// loop ratio gamma/kappa of the mapped system
        #[arg(long, default_value_t = 0.2)]
        gamma_ratio: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every cross-check and report pass/fail with residuals
    Verify {
        /// RK4 steps per loop period
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), String> {
    match &output.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// theta grid strictly inside (0, pi/2): the caption's open interval.
fn open_theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64 * (PI / 2.0)).collect()
}

fn closed_theta_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|i| i as f64 / (n - 1) as f64 * PI).collect()
}

fn ratio_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|j| j as f64 / (n - 1) as f64).collect()
}

fn check_grid(n: usize, what: &str) -> Result<(), String> {
    if n == 0 {
        Err(format!("{what} grid must be non-empty"))
    } else {
        Ok(())
    }
}

fn check_point(theta: f64, gamma_ratio: f64) -> Result<(), String> {
    if !theta.is_finite() {
        return Err("theta must be finite".into());
    }
    if !(gamma_ratio.is_finite() && gamma_ratio >= 0.0) {
        return Err("gamma-ratio must be finite and >= 0".into());
    }
    Ok(())
}

fn check_steps(steps: usize) -> Result<(), String> {
    if steps < 100 {
        Err(format!("steps must be >= 100, got {steps}"))
    } else {
        Ok(())
    }
}

fn fig1_rows_json(rows: &[abelian::Fig1Row], eta_only: bool) -> String {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            let mut obj = json!({
                "theta": r.theta,
                "gamma_ratio": r.gamma_ratio,
                "flag": if r.degenerate { "degenerate" } else { "" },
            });
            if eta_only {
                obj["eta"] = json!(r.eta);
            } else {
                obj["phi_total"] = json!(r.phi_total);
                obj["phi_adiabatic_ref"] = json!(r.phi_adiabatic_ref);
            }
            obj
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
}

/// exit-code mapping for evaluation errors
fn run_exit(err: &Error) -> u8 {
    match err {
        Error::DegenerateMiddleRoot { .. } | Error::DegenerateDrive => 3,
        _ => 2,
    }
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Fig1a(args) => {
            check_grid(args.theta_grid, "theta").map_err(|m| (2, m))?;
            check_grid(args.ratio_grid, "ratio").map_err(|m| (2, m))?;
            let rows = abelian::sweep_fig1(&open_theta_grid(args.theta_grid), &ratio_grid(args.ratio_grid));
            let content = match args.format {
                Format::Csv => format::fig1a_csv(&rows),
                Format::Json => fig1_rows_json(&rows, true),
            };
            emit(&args.output, &content).map_err(|m| (2, m))
        }
        Command::Fig1b(args) => {
            check_grid(args.theta_grid, "theta").map_err(|m| (2, m))?;
            check_grid(args.ratio_grid, "ratio").map_err(|m| (2, m))?;
            let rows = abelian::sweep_fig1(&closed_theta_grid(args.theta_grid), &ratio_grid(args.ratio_grid));
            let content = match args.format {
                Format::Csv => format::fig1b_csv(&rows),
                Format::Json => fig1_rows_json(&rows, false),
            };
            emit(&args.output, &content).map_err(|m| (2, m))
        }
        Command::Fig2 { theta_grid, format: fmt, output } => {
            check_grid(theta_grid, "theta").map_err(|m| (2, m))?;
            let rows = nonabelian::sweep_fig2(&[0.01, 0.2, 0.5, 0.8], theta_grid);
            let content = match fmt {
                Format::Csv => format::fig2_csv(&rows),
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "gamma_ratio": r.gamma_ratio,
                                "one_minus_cos_theta": r.one_minus_cos_theta,
                                "pop_d1": r.pop_d1,
                                "pop_d2": r.pop_d2,
                                "eta": r.eta,
                                "flag": if r.flagged { "degenerate" } else { "" },
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
                }
            };
            emit(&output, &content).map_err(|m| (2, m))
        }
        Command::Phase(args) => {
            check_point(args.theta, args.gamma_ratio).map_err(|m| (2, m))?;
            if args.gamma_ratio == 0.0 {
                return Err((2, "phase requires gamma-ratio > 0 (cyclic loop)".into()));
            }
            let p = AbelianParams::from_ratio(args.theta, args.gamma_ratio)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let cycle = abelian::cycle(&p).map_err(|e| (run_exit(&e), e.to_string()))?;
            let report = json!({
                "theta": args.theta,
                "gamma_ratio": args.gamma_ratio,
                "eta": cycle.eta,
                "phi_total": cycle.phi_total,
                "phi_adiabatic_ref": cycle.phi_adiabatic_ref,
                "roots": {
                    "x_minus": cycle.spectrum.x_minus,
                    "x0": cycle.spectrum.x0,
                    "x_plus": cycle.spectrum.x_plus,
                },
            });
            let content = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            emit(&args.output, &content).map_err(|m| (2, m))
        }
        Command::Gate(args) => {
            check_point(args.theta, args.gamma_ratio).map_err(|m| (2, m))?;
            if args.gamma_ratio == 0.0 {
                return Err((2, "gate requires gamma-ratio > 0 (cyclic loop)".into()));
            }
            let p = NonAbelianParams::from_ratio(args.theta, args.gamma_ratio)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let gate = nonabelian::projected_gate(&p).map_err(|e| (run_exit(&e), e.to_string()))?;
            let ideal = nonabelian::ideal_holonomy(args.theta);
            let mat = |m: &holonomy::numerics::CMatrix| {
                (0..2)
                    .map(|i| (0..2).map(|j| vec![m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            let report = json!({
                "theta": args.theta,
                "gamma_ratio": args.gamma_ratio,
                "projected": mat(&gate.projected),
                "ideal_holonomy": mat(&ideal),
                "population_d1": gate.population_d1,
                "population_d2": gate.population_d2,
                "leakage_by_state": [gate.leakage_by_state[0], gate.leakage_by_state[1]],
                "fidelity": gate.fidelity,
            });
            let content = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            emit(&args.output, &content).map_err(|m| (2, m))
        }
        Command::Prep { theta, duration, matching, ramp, steps, format: _, output } => {
            check_steps(steps).map_err(|m| (2, m))?;
            if !(theta.is_finite() && duration.is_finite() && duration > 0.0) {
                return Err((2, "prep needs finite theta and duration > 0".into()));
            }
            let shape = match ramp {
                Ramp::Linear => RampShape::Linear,
                Ramp::Smoothstep => RampShape::Smoothstep,
            };
            let with_matching = matching == Matching::On;
            let profile = RampProfile::new(0.0, theta, duration, shape)
                .map_err(|e| (2, e.to_string()))?;
            let ab = experiments::prepare_dark_state(&profile, with_matching, steps)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let non = experiments::prepare_dark_state_nonabelian(&profile, with_matching, steps)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let identity_residual = experiments::invariant_identity_check(&profile, 50);
            let report = json!({
                "ramp": {
                    "shape": match shape { RampShape::Linear => "linear", RampShape::Smoothstep => "smoothstep" },
                    "theta_start": 0.0,
                    "theta_end": theta,
                    "duration": duration,
                },
                "with_matching": with_matching,
                "steps": steps,
                "abelian": {
                    "final_infidelity": ab.final_infidelity,
                    "norm_drift": ab.norm_drift,
                },
                "nonabelian": {
                    "final_infidelity": non.final_infidelity,
                    "norm_drift": non.norm_drift,
                },
                "matching_identity_residual": identity_residual,
            });
            let content = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            emit(&output, &content).map_err(|m| (2, m))
        }
        Command::Twoqubit { amp1, amp2, phi1, phi2, gamma_ratio, format: _, output } => {
            if !(gamma_ratio.is_finite() && gamma_ratio > 0.0) {
                return Err((2, "twoqubit requires gamma-ratio > 0".into()));
            }
            let drive = TwoQubitDriveParams::new(amp1, amp2, phi1, phi2)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let eff = holonomy::models::EffectiveParams::from_drive(&drive)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let gamma = gamma_ratio * eff.kappa;
            let gate = experiments::two_qubit_gate(&drive, gamma)
                .map_err(|e| (run_exit(&e), e.to_string()))?;
            let g = &gate.gate;
            let report = json!({
                "drive": { "amp1": amp1, "amp2": amp2, "phi1": phi1, "phi2": phi2 },
                "effective": {
                    "kappa": gate.effective.kappa,
                    "theta_eff": gate.effective.theta_eff,
                    "phi_eff": gate.effective.phi_eff,
                    "gamma_ratio": gamma_ratio,
                },
                "phase_on_11": gate.phase_on_11,
                "leakage_from_11": gate.leakage_from_11,
                "gate": (0..4)
                    .map(|i| (0..4).map(|j| vec![g[(i, j)].re, g[(i, j)].im]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            let content = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            emit(&output, &content).map_err(|m| (2, m))
        }
        Command::Verify { steps, format: fmt, output } => {
            check_steps(steps).map_err(|m| (2, m))?;
            let report = verify::run_checks(steps);
            let content = match fmt {
                Format::Json => {
                    let checks: Vec<_> = report
                        .checks
                        .iter()
                        .map(|c| {
                            json!({
                                "name": c.name,
                                "residual": c.residual,
                                "tolerance": c.tolerance,
                                "passed": c.passed,
                            })
                        })
                        .collect();
                    let doc = json!({
                        "checks": checks,
                        "info": report.info,
                        "all_passed": report.all_passed(),
                    });
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
                Format::Csv => {
                    let mut out = String::new();
                    for c in &report.checks {
                        out.push_str(&format!(
                            "[{}] {} (residual {:.3e}, tolerance {:.1e})\n",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.residual,
                            c.tolerance,
                        ));
                    }
                    for line in &report.info {
                        out.push_str(&format!("[INFO] {line}\n"));
                    }
                    out.push_str(&format!(
                        "{}: {}/{} checks passed\n",
                        if report.all_passed() { "OK" } else { "FAILED" },
                        report.checks.iter().filter(|c| c.passed).count(),
                        report.checks.len(),
                    ));
                    out
                }
            };
            emit(&output, &content).map_err(|m| (2, m))?;
            if report.all_passed() {
                Ok(())
            } else {
                Err((1, "verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
