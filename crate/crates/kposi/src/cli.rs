//! Command-line front end: file ingestion, subcommand dispatch, JSON/CSV
//! report emission.
//!
//! Exit codes: 0 when the requested property holds (or the run simply
//! succeeded), 1 when a property was refuted or the input was degenerate,
//! 2 on usage or parse errors.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::classify::{
    classify_all, verify_vdp, OrderClassification, SsrReport, VdpMode, VdpReport, Verdict,
};
use crate::compound::compound;
use crate::dynamics::{simulate, wedge_dynamics, TrajectoryTrace, WedgeTrace};
use crate::error::{Error, Result};
use crate::generators::{generate, FixtureId, GeneratorKind, GeneratorSpec};
use crate::index::IndexSequence;
use crate::io;
use crate::matrix::Matrix;
use crate::selftest::run_selftest;
use crate::signvar::sign_variations;
use crate::spectral::{spectral_split, verify_separation, SeparationCheck, SpectralSplit};
use crate::tol::ToleranceProfile;

const TOL_PROFILE_ENV: &str = "KPOSI_TOL_PROFILE";

#[derive(Parser)]
#[command(
    name = "kposi",
    version,
    about = "Analyze discrete-time k-positive linear systems: sign-regularity, \
             sign-variation cones, spectral separation, exterior-product dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    /// key=value tolerance file (overrides KPOSI_TOL_PROFILE)
    #[arg(long, global = true, value_name = "FILE")]
    tol_profile: Option<PathBuf>,
    /// Minor zero threshold (Hadamard-normalized)
    #[arg(long, global = true)]
    tau_zero: Option<f64>,
    /// Spectral residual / consistency tolerance
    #[arg(long, global = true)]
    tau_spec: Option<f64>,
    /// Relative eigenvalue-gap refusal threshold
    #[arg(long, global = true)]
    tau_gap: Option<f64>,
    /// Slack on the fitted separation slope
    #[arg(long, global = true)]
    tau_rate: Option<f64>,
    /// Relative zero threshold for trajectory sign counts
    #[arg(long, global = true)]
    state_zero_rel: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify SR_k/SSR_k across orders, optionally checking the VDP
    Classify {
        matrix: PathBuf,
        /// Judge the exit code by this single order instead of full SSR
        #[arg(long)]
        k: Option<usize>,
        /// Also sample the variation-diminishing property
        #[arg(long, value_enum)]
        vdp: Option<VdpModeArg>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sign-variation counts and cone membership of a vector
    Signvar {
        vector: PathBuf,
        /// Cone order; exit 1 when the vector leaves P^k_-
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
    },
    /// Emit the k-th multiplicative compound
    Compound {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Simulate x(j+1) = A x(j) and trace sign variations
    Simulate {
        matrix: PathBuf,
        x0: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Cone order for the per-step membership flags
        #[arg(long)]
        k: Option<usize>,
        /// Renormalize the state to unit norm each step
        #[arg(long)]
        renorm: bool,
        /// Write the trace CSV here and print the JSON report to stdout
        #[arg(long, value_name = "FILE")]
        csv_out: Option<PathBuf>,
    },
    /// Spectral split and exponential-separation verification
    Separation {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 60)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exterior-product dynamics with the Perron-limit prediction
    Wedge {
        matrix: PathBuf,
        /// One file per initial vector; their count sets the order k
        #[arg(required = true)]
        inits: Vec<PathBuf>,
        #[arg(long)]
        steps: usize,
    },
    /// Generate test matrices (totally positive, SSR_k-only, fixtures)
    Gen {
        #[arg(long, value_enum)]
        kind: GenKindArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Target order for ssr-k-only
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        attempts: usize,
        /// Fixture name for --kind fixture
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Re-derive every built-in fixture reference value and report mismatches
    Selftest {
        /// Deliberately corrupt the fixtures first (negative control)
        #[arg(long, hide = true)]
        corrupt_fixtures: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VdpModeArg {
    Weak,
    Strong,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKindArg {
    Tp,
    SsrKOnly,
    ContractiveTp,
    Fixture,
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli, start) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kposi: {e}");
            e.exit_code()
        }
    }
}

fn resolve_tolerances(args: &TolArgs) -> Result<ToleranceProfile> {
    let mut profile = if let Some(path) = &args.tol_profile {
        ToleranceProfile::from_file(path)?
    } else if let Ok(path) = std::env::var(TOL_PROFILE_ENV) {
        ToleranceProfile::from_file(Path::new(&path))?
    } else {
        ToleranceProfile::default()
    };
    if let Some(v) = args.tau_zero {
        profile.tau_zero = v;
    }
    if let Some(v) = args.tau_spec {
        profile.tau_spec = v;
    }
    if let Some(v) = args.tau_gap {
        profile.tau_gap = v;
    }
    if let Some(v) = args.tau_rate {
        profile.tau_rate = v;
    }
    if let Some(v) = args.state_zero_rel {
        profile.state_zero_rel = v;
    }
    profile.validate()?;
    Ok(profile)
}

fn digest(path: &Path) -> Result<Value> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    Ok(json!({ "path": path.display().to_string(), "sha256": format!("{hash:x}") }))
}

fn run_report(
    command: &str,
    inputs: &[&Path],
    tol: &ToleranceProfile,
    pass: bool,
    result: Value,
    start: Instant,
) -> Result<Value> {
    let digests: Vec<Value> = inputs.iter().map(|p| digest(p)).collect::<Result<_>>()?;
    let argv: Vec<String> = std::env::args().collect();
    Ok(json!({
        "command": command,
        "argv": argv,
        "inputs": digests,
        "tolerance_profile": tol,
        "pass": pass,
        "result": result,
        "duration_ms": start.elapsed().as_secs_f64() * 1e3,
    }))
}

fn emit(report: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(report).expect("reports serialize")
    );
}

fn dispatch(cli: &Cli, start: Instant) -> Result<i32> {
    let tol = resolve_tolerances(&cli.tol)?;
    match &cli.command {
        Command::Classify {
            matrix,
            k,
            vdp,
            samples,
            seed,
        } => cmd_classify(matrix, *k, *vdp, *samples, *seed, &tol, start),
        Command::Signvar {
            vector,
            k,
            zero_tol,
        } => cmd_signvar(vector, *k, *zero_tol, &tol, start),
        Command::Compound { matrix, k, format } => cmd_compound(matrix, *k, *format, &tol, start),
        Command::Simulate {
            matrix,
            x0,
            steps,
            k,
            renorm,
            csv_out,
        } => cmd_simulate(
            matrix,
            x0,
            *steps,
            *k,
            *renorm,
            csv_out.as_deref(),
            &tol,
            start,
        ),
        Command::Separation {
            matrix,
            k,
            trials,
            horizon,
            seed,
        } => cmd_separation(matrix, *k, *trials, *horizon, *seed, &tol, start),
        Command::Wedge {
            matrix,
            inits,
            steps,
        } => cmd_wedge(matrix, inits, *steps, &tol, start),
        Command::Gen {
            kind,
            n,
            k,
            seed,
            attempts,
            name,
            format,
        } => cmd_gen(
            *kind,
            *n,
            *k,
            *seed,
            *attempts,
            name.as_deref(),
            *format,
            &tol,
            start,
        ),
        Command::Selftest { corrupt_fixtures } => cmd_selftest(*corrupt_fixtures, &tol, start),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    matrix_path: &Path,
    k: Option<usize>,
    vdp: Option<VdpModeArg>,
    samples: usize,
    seed: u64,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let a: Matrix<f64> = io::read_matrix(matrix_path)?;
    let report = classify_all(&a, tol)?;
    let mut result = ssr_report_json(&report);
    let mut pass = match k {
        Some(k) => {
            if k < 1 || k > a.rows().min(a.cols()) {
                return Err(Error::Dimension(format!(
                    "--k must be in 1..={}, got {k}",
                    a.rows().min(a.cols())
                )));
            }
            report.order(k).verdict == Verdict::Ssr
        }
        None => report.is_ssr,
    };
    if let Some(mode) = vdp {
        let mode = match mode {
            VdpModeArg::Weak => VdpMode::Weak,
            VdpModeArg::Strong => VdpMode::Strong,
        };
        let vdp_report = verify_vdp(&a, samples, mode, seed, tol)?;
        pass = vdp_report.pass;
        result["vdp"] = vdp_report_json(&vdp_report);
    }
    let wrapped = run_report("classify", &[matrix_path], tol, pass, result, start)?;
    emit(&wrapped);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_signvar(
    vector_path: &Path,
    k: Option<usize>,
    zero_tol: f64,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let y: Vec<f64> = io::read_vector(vector_path)?;
    let sv = sign_variations(&y, zero_tol)?;
    let mut result = json!({
        "length": y.len(),
        "s_minus": sv.s_minus,
        "s_plus": sv.s_plus,
        "zero_count": sv.zero_count,
        "zero_tol": zero_tol,
    });
    let mut pass = true;
    if let Some(k) = k {
        let membership = crate::signvar::cone_membership(&y, k, zero_tol)?;
        result["cone"] = json!({
            "k": k,
            "in_p_minus": membership.in_p_minus,
            "in_p_plus": membership.in_p_plus,
        });
        pass = membership.in_p_minus;
    }
    let wrapped = run_report("signvar", &[vector_path], tol, pass, result, start)?;
    emit(&wrapped);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_compound(
    matrix_path: &Path,
    k: usize,
    format: OutputFormat,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let a: Matrix<f64> = io::read_matrix(matrix_path)?;
    let c = compound(&a, k)?;
    match format {
        OutputFormat::Csv => print!("{}", io::matrix_to_csv(c.data())),
        OutputFormat::Json => {
            let result = json!({
                "order": c.order(),
                "base_rows": c.base_rows(),
                "base_cols": c.base_cols(),
                "compound": io::matrix_to_json(c.data()),
            });
            let wrapped = run_report("compound", &[matrix_path], tol, true, result, start)?;
            emit(&wrapped);
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    matrix_path: &Path,
    x0_path: &Path,
    steps: usize,
    k: Option<usize>,
    renorm: bool,
    csv_out: Option<&Path>,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let a: Matrix<f64> = io::read_matrix(matrix_path)?;
    let x0: Vec<f64> = io::read_vector(x0_path)?;
    let k = k.unwrap_or(1);
    let trace = simulate(
        std::slice::from_ref(&a),
        &x0,
        steps,
        k,
        renorm,
        tol.state_zero_rel,
    )?;
    let csv = trace_to_csv(&trace);
    match csv_out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            let result = trajectory_summary_json(&trace, Some(path));
            let wrapped = run_report(
                "simulate",
                &[matrix_path, x0_path],
                tol,
                true,
                result,
                start,
            )?;
            emit(&wrapped);
        }
        None => {
            // trace on stdout, summary on stderr so both stay machine-readable
            print!("{csv}");
            let result = trajectory_summary_json(&trace, None);
            let wrapped = run_report(
                "simulate",
                &[matrix_path, x0_path],
                tol,
                true,
                result,
                start,
            )?;
            eprintln!("{wrapped}");
        }
    }
    Ok(0)
}

fn cmd_separation(
    matrix_path: &Path,
    k: usize,
    trials: usize,
    horizon: usize,
    seed: u64,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let a: Matrix<f64> = io::read_matrix(matrix_path)?;
    let split = spectral_split(&a, k, tol)?;
    let check = verify_separation(&a, k, trials, horizon, seed, tol)?;
    let pass = check.pass;
    let result = json!({
        "split": spectral_split_json(&split),
        "separation": separation_json(&check),
    });
    let wrapped = run_report("separation", &[matrix_path], tol, pass, result, start)?;
    emit(&wrapped);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_wedge(
    matrix_path: &Path,
    init_paths: &[PathBuf],
    steps: usize,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let a: Matrix<f64> = io::read_matrix(matrix_path)?;
    let inits: Vec<Vec<f64>> = init_paths
        .iter()
        .map(|p| io::read_vector(p))
        .collect::<Result<_>>()?;
    let trace = wedge_dynamics(&a, &inits, steps)?;
    let result = wedge_trace_json(&trace);
    let mut inputs: Vec<&Path> = vec![matrix_path];
    inputs.extend(init_paths.iter().map(|p| p.as_path()));
    let wrapped = run_report("wedge", &inputs, tol, true, result, start)?;
    emit(&wrapped);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKindArg,
    n: usize,
    k: Option<usize>,
    seed: u64,
    attempts: usize,
    name: Option<&str>,
    format: OutputFormat,
    tol: &ToleranceProfile,
    start: Instant,
) -> Result<i32> {
    let kind = match kind {
        GenKindArg::Tp => GeneratorKind::TotallyPositive,
        GenKindArg::ContractiveTp => GeneratorKind::ContractiveTp,
        GenKindArg::SsrKOnly => {
            let k =
                k.ok_or_else(|| Error::InvalidValue("--kind ssr-k-only requires --k".into()))?;
            GeneratorKind::SsrKOnly { k }
        }
        GenKindArg::Fixture => {
            let name =
                name.ok_or_else(|| Error::InvalidValue("--kind fixture requires --name".into()))?;
            GeneratorKind::PaperFixture(name.parse::<FixtureId>()?)
        }
    };
    let spec = GeneratorSpec {
        n,
        kind,
        rng_seed: seed,
        attempts,
    };
    let (matrix, report): (Matrix<f64>, _) = generate(&spec)?;
    match format {
        OutputFormat::Csv => print!("{}", io::matrix_to_csv(&matrix)),
        OutputFormat::Json => {
            let mut result = json!({ "matrix": io::matrix_to_json(&matrix) });
            if let Some(r) = report {
                result["classification"] = ssr_report_json(&r);
            }
            let wrapped = run_report("gen", &[], tol, true, result, start)?;
            emit(&wrapped);
        }
    }
    Ok(0)
}

fn cmd_selftest(corrupt: bool, tol: &ToleranceProfile, start: Instant) -> Result<i32> {
    let checks = run_selftest(corrupt);
    let mut all_pass = true;
    let mut rows = Vec::new();
    for c in &checks {
        all_pass &= c.pass;
        println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        if !c.pass {
            println!("     {}", c.detail);
        }
        rows.push(json!({ "name": c.name, "pass": c.pass, "detail": c.detail }));
    }
    let result = json!({ "checks": rows, "total": checks.len() });
    let wrapped = run_report("selftest", &[], tol, all_pass, result, start)?;
    emit(&wrapped);
    Ok(if all_pass { 0 } else { 1 })
}

fn trace_to_csv(trace: &TrajectoryTrace<f64>) -> String {
    let n = trace.states[0].len();
    let mut out = String::from("j");
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push_str(",s_minus,s_plus\n");
    for (j, state) in trace.states.iter().enumerate() {
        out.push_str(&j.to_string());
        for x in state {
            out.push_str(&format!(",{x}"));
        }
        out.push_str(&format!(
            ",{},{}\n",
            trace.s_minus_trace[j], trace.s_plus_trace[j]
        ));
    }
    out
}

fn trajectory_summary_json(trace: &TrajectoryTrace<f64>, csv_path: Option<&Path>) -> Value {
    let max_s_plus_after_start = trace.s_plus_trace.iter().skip(1).max().copied();
    json!({
        "steps": trace.states.len() - 1,
        "k": trace.k,
        "renormalized": trace.renormalized,
        "state_zero_rel": trace.zero_tol_rel,
        "s_minus_initial": trace.s_minus_trace[0],
        "max_s_plus_after_start": max_s_plus_after_start,
        "all_states_in_p_k_minus": trace.cone_flags.iter().all(|c| c.in_p_minus),
        "csv": csv_path.map(|p| p.display().to_string()),
    })
}

fn sequence_json(seq: &IndexSequence) -> Value {
    json!(seq.indices())
}

fn order_classification_json(c: &OrderClassification<f64>) -> Value {
    let witness = |w: &Option<crate::classify::MinorWitness<f64>>| match w {
        Some(w) => json!({
            "rows": sequence_json(&w.rows),
            "cols": sequence_json(&w.cols),
            "value": w.value,
        }),
        None => Value::Null,
    };
    json!({
        "k": c.k,
        "verdict": c.verdict.as_str(),
        "signature": c.signature,
        "min_abs_minor": c.min_abs_minor,
        "witness_positive": witness(&c.witness_positive),
        "witness_negative": witness(&c.witness_negative),
    })
}

fn ssr_report_json(r: &SsrReport<f64>) -> Value {
    json!({
        "classifications": r.classifications.iter().map(order_classification_json).collect::<Vec<_>>(),
        "is_sr": r.is_sr,
        "is_ssr": r.is_ssr,
        "nonsingular": r.nonsingular,
        "tolerance_profile": r.tolerance_profile,
    })
}

fn vdp_report_json(r: &VdpReport<f64>) -> Value {
    json!({
        "mode": r.mode.as_str(),
        "precondition_ok": r.precondition_ok,
        "precondition_note": r.precondition_note,
        "samples": r.samples,
        "pass": r.pass,
        "counterexample": r.counterexample.as_ref().map(|w| json!({
            "x": w.x,
            "ax": w.ax,
            "variations_before": w.variations_before,
            "variations_after": w.variations_after,
        })),
    })
}

fn spectral_split_json(s: &SpectralSplit<f64>) -> Value {
    json!({
        "k": s.k,
        "signature": s.signature,
        "eigenvalues": s.eigenvalues.iter().map(|z| json!({ "re": z.re, "im": z.im })).collect::<Vec<_>>(),
        "real_basis": s.real_basis,
        "e_basis": s.e_basis,
        "ec_basis": s.ec_basis,
        "gap_ratio": s.gap_ratio,
        "product_sign_check": s.product_sign_check,
        "generic_basis": s.generic_basis,
    })
}

fn separation_json(c: &SeparationCheck<f64>) -> Value {
    json!({
        "rate_bound": c.rate_bound,
        "log_rate_bound": c.rate_bound.ln(),
        "measured_rates": c.measured_rates,
        "e_in_cone": c.e_in_cone,
        "ec_meets_cone_only_at_zero": c.ec_meets_cone_only_at_zero,
        "invariance_residuals": c.invariance_residuals,
        "rates_within_bound": c.rates_within_bound,
        "pass": c.pass,
        "witness_e": c.witness_e,
        "witness_ec": c.witness_ec,
    })
}

fn wedge_trace_json(t: &WedgeTrace<f64>) -> Value {
    json!({
        "k": t.k,
        "eta": t.eta,
        "eta_scaled": t.eta_scaled,
        "rho": t.rho,
        "v_b": t.v_b,
        "w_b": t.w_b,
        "predicted_limit": t.predicted_limit,
        "scaled_error": t.scaled_error,
        "signature_negative": t.signature_negative,
        "dual_path_max_rel_err": t.dual_path_max_rel_err,
    })
}
