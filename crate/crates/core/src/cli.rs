//! `qaa` command-line front end. Every successful run prints one JSON
//! document on stdout.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::QaaError;
use crate::linsys::{build_reciprocal_circuit, reciprocal_product, ReciprocalPlan, ToeplitzSystem};
use crate::polyeval::{build_eval_circuit, fit, named_function, CoefficientTable, FitOptions, QramStub};
use crate::primitives::{add_block, binary_controlled_ry, multiply_block, AngleFactor};
use crate::sim::{count_resources, export_qasm, parse_qasm, Circuit, CostModel, Simulator};
use crate::stateprep::{PrepSpec, PrepVariant};

pub const PREP_TOLERANCE: f64 = 1e-10;
pub const RECIP_TOLERANCE: f64 = 1e-10;
pub const POLYEVAL_TOLERANCE: f64 = 1e-9;
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "qaa", version, about = "Build, simulate and check quantum arithmetic-on-amplitude circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load x/2^n onto a flagged amplitude.
    Prep(PrepArgs),
    /// Reciprocal eigenvalue product for the tridiagonal Toeplitz system.
    Recip(RecipArgs),
    /// Fit a piecewise polynomial and write a coefficient table.
    Polyfit(PolyfitArgs),
    /// Evaluate a coefficient table on an amplitude.
    Polyeval(PolyevalArgs),
    /// Gate and qubit counts of a builder circuit.
    Resources(CircuitArgs),
    /// OpenQASM 2.0 text of a builder circuit.
    Export(CircuitArgs),
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long, default_value = "improved")]
    pub variant: PrepVariant,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=62))]
    pub n: u64,
    #[arg(long)]
    pub x: u64,
    /// Imaginary part for the complex variant.
    #[arg(long, default_value_t = 0)]
    pub b: u64,
    #[arg(long)]
    pub check: bool,
    /// Also write the circuit as QASM to this path.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Re-simulate the exported QASM and compare.
    #[arg(long, requires = "export")]
    pub check_roundtrip: bool,
}

#[derive(Debug, Args)]
pub struct RecipArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=20))]
    pub n: u64,
    #[arg(long, default_value_t = 2.0)]
    pub y: f64,
    #[arg(long)]
    pub j: u64,
    /// Override the planned factor count.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct PolyfitArgs {
    #[arg(long)]
    pub function: String,
    /// Lower and upper end, e.g. `0,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0])]
    pub domain: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long, default_value_t = 4)]
    pub pieces: usize,
    #[arg(long, default_value_t = 12)]
    pub n_bits: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Negative-side slope for `mrelu`.
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PolyevalArgs {
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    PrepBasic,
    PrepAlternative,
    PrepImproved,
    PrepComplex,
    Recip,
    Multiply,
    Add,
    Cascade,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    #[arg(long)]
    pub circuit: CircuitKind,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub y: f64,
    /// Angles for `multiply` and `add`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub thetas: Vec<f64>,
    /// Write QASM here instead of embedding it in the JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Qaa(#[from] QaaError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// JSON report plus whether every requested check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn complex_json(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn resources_json(circuit: &Circuit) -> Value {
    serde_json::to_value(count_resources(circuit, &CostModel::default())).expect("report serializes")
}

pub fn run_command(command: &Command) -> Result<Outcome, CliError> {
    let sim = Simulator::from_env();
    match command {
        Command::Prep(a) => prep(a, &sim),
        Command::Recip(a) => recip(a, &sim),
        Command::Polyfit(a) => polyfit(a),
        Command::Polyeval(a) => polyeval(a, &sim),
        Command::Resources(a) => {
            let c = build_named(a)?;
            let report = json!({
                "command": "resources",
                "inputs": circuit_inputs(a),
                "resources": resources_json(&c),
            });
            Ok(Outcome { report, passed: true })
        }
        Command::Export(a) => {
            let c = build_named(a)?;
            let text = export_qasm(&c);
            let mut report = json!({
                "command": "export",
                "inputs": circuit_inputs(a),
                "resources": resources_json(&c),
            });
            match &a.out {
                Some(path) => {
                    write(path, &text)?;
                    report["qasm_path"] = json!(path.display().to_string());
                }
                None => report["qasm"] = json!(text),
            }
            Ok(Outcome { report, passed: true })
        }
    }
}

fn prep(a: &PrepArgs, sim: &Simulator) -> Result<Outcome, CliError> {
    let spec = PrepSpec::new(a.variant, a.n as usize)?;
    let limit = 1u64 << a.n;
    if a.x >= limit {
        return Err(QaaError::RegisterOverflow { register: "data".into(), value: a.x, width: a.n as usize }.into());
    }
    if a.b != 0 && a.variant != PrepVariant::Complex {
        return Err(CliError::Usage("--b applies only to the complex variant".into()));
    }
    if a.b >= limit {
        return Err(QaaError::RegisterOverflow { register: "data_im".into(), value: a.b, width: a.n as usize }.into());
    }
    let circuit = spec.build()?;
    let input = spec.input_index(&circuit, a.x, a.b)?;
    let simulated = sim.flag_amplitude_for_input(&circuit, input)?;
    let oracle = spec.closed_form(a.x, a.b);
    let abs_error = (simulated - oracle).norm();
    let mut passed = abs_error <= PREP_TOLERANCE;

    let mut report = json!({
        "command": "prep",
        "inputs": { "variant": a.variant.as_str(), "n": a.n, "x": a.x, "b": a.b },
        "variant": a.variant.as_str(),
        "n": a.n,
        "x": a.x,
        "oracle": complex_json(oracle),
        "closed_form": complex_json(oracle),
        "simulated": complex_json(simulated),
        "flag_amplitude": complex_json(simulated),
        "abs_error": abs_error,
        "tolerance": PREP_TOLERANCE,
        "extra_qubits": spec.extra_qubits(),
        "resources": resources_json(&circuit),
    });
    if let Some(path) = &a.export {
        write(path, &export_qasm(&circuit))?;
        report["export"] = json!(path.display().to_string());
        if a.check_roundtrip {
            let parsed = parse_qasm(&read(path)?)?;
            let back = sim.flag_amplitude_for_input(&parsed, spec.input_index(&parsed, a.x, a.b)?)?;
            let err = (back - simulated).norm();
            passed &= err <= ROUNDTRIP_TOLERANCE;
            report["roundtrip"] = json!({ "simulated": complex_json(back), "abs_error": err });
        }
    }
    report["passed"] = json!(passed);
    Ok(Outcome { report, passed: passed || !a.check })
}

fn recip(a: &RecipArgs, sim: &Simulator) -> Result<Outcome, CliError> {
    let sys = ToeplitzSystem::new(a.n as usize, a.y)?;
    let j = a.j as usize;
    let lambda = sys.eigenvalue(j)?;
    let plan = match a.m {
        Some(m) => ReciprocalPlan::with_factors(&sys, m)?,
        None => ReciprocalPlan::for_system(&sys),
    };
    let product = reciprocal_product(&sys, j, &plan)?;
    let circuit = build_reciprocal_circuit(&sys, &plan)?;
    let input = circuit.layout.basis_index(&[("data", j as u64)])?;
    let simulated = sim.flag_amplitude_for_input(&circuit, input)?;
    let scale = 2f64.powi(plan.m as i32);
    let oracle = product / scale;
    let abs_error = (simulated - Complex64::new(oracle, 0.0)).norm();
    let scaled = simulated.re * scale;
    let reciprocal = 1.0 / sys.normalized(j)?;
    let abs_err = (scaled - reciprocal).abs();
    let passed = abs_error <= RECIP_TOLERANCE && abs_err <= plan.eps_bound;

    let report = json!({
        "command": "recip",
        "inputs": { "n": a.n, "y": a.y, "j": a.j, "m": plan.m },
        "n": a.n,
        "y": a.y,
        "j": a.j,
        "m": plan.m,
        "lambda": lambda,
        "reciprocal": reciprocal,
        "product": product,
        "oracle": complex_json(Complex64::new(oracle, 0.0)),
        "simulated": complex_json(simulated),
        "abs_error": abs_error,
        "circuit_amp_scaled": scaled,
        "abs_err": abs_err,
        "eps_bound": plan.eps_bound,
        "tolerance": RECIP_TOLERANCE,
        "passed": passed,
        "resources": resources_json(&circuit),
    });
    Ok(Outcome { report, passed: passed || !a.check })
}

fn polyfit(a: &PolyfitArgs) -> Result<Outcome, CliError> {
    let f = named_function(&a.function, a.alpha)
        .ok_or_else(|| CliError::Usage(format!("unknown function {:?}; expected sigmoid, tanh, mrelu or identity", a.function)))?;
    if a.domain.len() != 2 {
        return Err(CliError::Usage(format!("--domain takes two values lo,hi; got {}", a.domain.len())));
    }
    let opts = FitOptions { degree: a.degree, pieces: a.pieces, n_bits: a.n_bits, eps: a.eps };
    let (poly, fit_report) = fit(&*f, (a.domain[0], a.domain[1]), &opts)?;
    let table = CoefficientTable::new(&a.function, &poly, Some(fit_report.clone()));
    write(&a.out, &table.to_json())?;
    let report = json!({
        "command": "polyfit",
        "inputs": {
            "function": a.function,
            "domain": a.domain,
            "degree": a.degree,
            "pieces": a.pieces,
            "n_bits": a.n_bits,
            "eps": a.eps,
            "alpha": a.alpha,
        },
        "fit_report": fit_report,
        "max_abs_error": fit_report.worst(),
        "output_scale": poly.output_scale(),
        "out": a.out.display().to_string(),
    });
    Ok(Outcome { report, passed: true })
}

fn polyeval(a: &PolyevalArgs, sim: &Simulator) -> Result<Outcome, CliError> {
    let table = CoefficientTable::from_json(&read(&a.table)?)?;
    let poly = table.polynomial()?;
    let qram = QramStub::from_polynomial(&table.function, &poly);
    let j = poly.subdomain(a.x)?;
    let eval = build_eval_circuit(&poly, &qram, j, a.x)?;
    let simulated = sim.flag_amplitude_for_input(&eval.circuit, 0)?;
    let classical = poly.eval_classical(a.x)?;
    let oracle = classical / eval.scale;
    let abs_error = (simulated - Complex64::new(oracle, 0.0)).norm();
    let passed = abs_error * eval.scale <= POLYEVAL_TOLERANCE;

    let mut report = json!({
        "command": "polyeval",
        "inputs": { "table": a.table.display().to_string(), "x": a.x },
        "function": table.function,
        "subdomain": j,
        "u": eval.u,
        "oracle": complex_json(Complex64::new(oracle, 0.0)),
        "simulated": complex_json(simulated),
        "abs_error": abs_error,
        "amplitude_scale": eval.scale,
        "classical_value": classical * poly.output_scale(),
        "circuit_value": simulated.re * eval.scale * poly.output_scale(),
        "tolerance": POLYEVAL_TOLERANCE,
        "passed": passed,
        "resources": resources_json(&eval.circuit),
    });
    if let Some(f) = named_function(&table.function, 0.1) {
        report["function_value"] = json!(f(a.x));
    }
    Ok(Outcome { report, passed: passed || !a.check })
}

fn circuit_inputs(a: &CircuitArgs) -> Value {
    json!({
        "circuit": a.circuit.to_possible_value().map(|v| v.get_name().to_string()),
        "n": a.n,
        "y": a.y,
        "thetas": a.thetas,
    })
}

fn angles(thetas: &[f64]) -> Result<Vec<AngleFactor>, CliError> {
    Ok(thetas.iter().map(|&t| AngleFactor::new(t)).collect::<Result<_, _>>()?)
}

fn build_named(a: &CircuitArgs) -> Result<Circuit, CliError> {
    let prep = |v| -> Result<Circuit, CliError> { Ok(PrepSpec::new(v, a.n)?.build()?) };
    match a.circuit {
        CircuitKind::PrepBasic => prep(PrepVariant::Basic),
        CircuitKind::PrepAlternative => prep(PrepVariant::Alternative),
        CircuitKind::PrepImproved => prep(PrepVariant::Improved),
        CircuitKind::PrepComplex => prep(PrepVariant::Complex),
        CircuitKind::Recip => {
            let sys = ToeplitzSystem::new(a.n, a.y)?;
            Ok(build_reciprocal_circuit(&sys, &ReciprocalPlan::for_system(&sys))?)
        }
        CircuitKind::Multiply => {
            if a.thetas.is_empty() {
                return Err(CliError::Usage("multiply needs --thetas".into()));
            }
            Ok(multiply_block(&angles(&a.thetas)?)?)
        }
        CircuitKind::Add => match angles(&a.thetas)?.as_slice() {
            [t1, t2] => Ok(add_block(*t1, *t2)?),
            _ => Err(CliError::Usage("add needs exactly two --thetas".into())),
        },
        CircuitKind::Cascade => Ok(binary_controlled_ry(a.n)?),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            // A closed pipe on stdout is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
