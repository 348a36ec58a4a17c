use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use benney_core::numeric::{
    evolve_with_snapshots, symmetry_defect_with, NumericError, SimConfig, TransformOptions,
};
use benney_core::operator::{
    kupershmidt_check, lie_bracket, point_generators, verify_jet, verify_restricted,
};
use benney_core::{
    generate_eta_matrix, generate_eta_row, CanonicalOperator, EtaMatrix, Form, OperatorError,
    PointGeneratorId, Polynomial, SolverError, VerificationReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "benney",
    version,
    about = "Symmetries of the Benney moment equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Basis solutions η^i_k for k ≤ K, i ≤ N
    Generate {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Text)]
        format: MatrixFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a matrix or operator file against the determining equations
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Moment-only chains (the default)
        #[arg(long, conflicts_with = "jet")]
        restricted: bool,
        /// Jet form, on shell
        #[arg(long)]
        jet: bool,
    },
    /// The five point generators and their verification
    PointOps {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Bracket of two basis rows
    Bracket {
        #[arg(long = "row", num_args = 1, required = true)]
        rows: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Lower H^s through Σ j A^{j-1} ∂H/∂A^j = s H^{s-1}
    Kupershmidt {
        /// File holding H^s
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        chain: u32,
    },
    /// Integrate the truncated system; CSV snapshots
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Commutation defect of a finite point symmetry with the integrator
    Defect {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "gen")]
        generator: PointGeneratorId,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Scale with the wrong weights (negative control)
        #[arg(long)]
        corrupt_weights: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::BlowUp { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Exit status for a set of reports: success iff all passed.
fn verdict(passed: bool, what: &str) -> Result<(), CliError> {
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{what} failed verification")))
    }
}

fn generate(k: usize, n: usize, format: MatrixFormat, out: Option<&Path>) -> Result<(), CliError> {
    let m = generate_eta_matrix(k, n)?;
    let text = match format {
        MatrixFormat::Text => m.to_text(),
        MatrixFormat::Json => pretty(&m.to_json()),
        MatrixFormat::Latex => m.to_latex(),
    };
    emit(out, &text)
}

/// An operator file: `{"schema": 1, "form": "moment-only"|"jet", "N": n,
/// "coords": ["…", …]}`.
fn parse_operator(doc: &Value) -> Result<CanonicalOperator, CliError> {
    let bad = |m: &str| CliError::Input(format!("operator file: {m}"));
    let form = match doc.get("form").and_then(Value::as_str) {
        None | Some("moment-only") => Form::MomentOnly,
        Some("jet") => Form::Jet,
        Some(other) => return Err(bad(&format!("unknown form `{other}`"))),
    };
    let coords = doc
        .get("coords")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array `coords`"))?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_str()
                .ok_or_else(|| bad("coordinates must be strings"))?
                .parse::<Polynomial>()
                .map_err(|e| bad(&format!("coordinate {i}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let horizon = match doc.get("N") {
        Some(v) => v.as_u64().ok_or_else(|| bad("`N` must be an integer"))? as usize,
        None => coords.len().saturating_sub(1),
    };
    Ok(CanonicalOperator::new(coords, form, horizon)?)
}

fn check(op: &CanonicalOperator, jet: bool) -> Result<VerificationReport, CliError> {
    let op = if jet && op.form() == Form::MomentOnly {
        op.clone().into_jet()
    } else {
        op.clone()
    };
    Ok(if jet {
        verify_jet(&op)?
    } else {
        verify_restricted(&op)?
    })
}

fn verify(input: &Path, jet: bool) -> Result<(), CliError> {
    let doc: Value = serde_json::from_str(&read(input)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    if let Some(s) = doc.get("schema") {
        if s != 1 {
            return Err(CliError::Input(format!("unsupported schema {s}")));
        }
    }
    if doc.get("rows").is_some() {
        let m = EtaMatrix::from_json(&doc)?;
        let mut rows = Map::new();
        let mut passed = true;
        for row in m.rows() {
            let op = CanonicalOperator::new(row.coords(), Form::MomentOnly, m.horizon())?;
            let report = check(&op, jet)?;
            passed &= report.passed();
            rows.insert(row.k().to_string(), report.to_json());
        }
        let out = json!({
            "schema": 1,
            "verdict": if passed { "pass" } else { "fail" },
            "rows": rows,
        });
        emit(None, &pretty(&out))?;
        verdict(passed, "matrix")
    } else {
        let op = parse_operator(&doc)?;
        let report = check(&op, jet)?;
        emit(None, &pretty(&report.to_json()))?;
        verdict(report.passed(), "operator")
    }
}

fn point_ops(n: usize, format: ReportFormat) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Input(format!("N = {n}, need at least 2")));
    }
    let gens = point_generators(n);
    let mut passed = true;
    let mut text = String::new();
    let mut doc = Map::new();
    for (id, op) in &gens {
        let report = verify_jet(op)?;
        passed &= report.passed();
        match format {
            ReportFormat::Text => {
                for (i, c) in op.coords().iter().enumerate() {
                    text.push_str(&format!("{id} i={i}: {c}\n"));
                }
                text.push_str(&format!(
                    "{id}: {} (checked {}, skipped {})\n",
                    if report.passed() { "pass" } else { "fail" },
                    report.residuals.len(),
                    report.skipped.len()
                ));
            }
            ReportFormat::Json => {
                let coords: Vec<String> = op.coords().iter().map(|c| c.to_string()).collect();
                doc.insert(
                    id.to_string(),
                    json!({ "coords": coords, "report": report.to_json() }),
                );
            }
        }
    }
    if let ReportFormat::Json = format {
        text = pretty(&json!({ "schema": 1, "N": n, "generators": doc }));
    }
    emit(None, &text)?;
    verdict(passed, "a point generator")
}

fn bracket(rows: &[usize], n: usize) -> Result<(), CliError> {
    let [k1, k2] = rows else {
        return Err(CliError::Input("give exactly two --row values".into()));
    };
    let op = |k: usize| -> Result<CanonicalOperator, CliError> {
        Ok(CanonicalOperator::new(
            generate_eta_row(k, n)?.coords(),
            Form::MomentOnly,
            n,
        )?)
    };
    let b = lie_bracket(&op(*k1)?, &op(*k2)?)?;
    let report = verify_restricted(&b)?;
    let coords: Map<String, Value> = b
        .coords()
        .iter()
        .enumerate()
        .map(|(i, c)| (i.to_string(), Value::String(c.to_string())))
        .collect();
    let out = json!({
        "schema": 1,
        "rows": [k1, k2],
        "N": n,
        "coords": coords,
        "report": report.to_json(),
    });
    emit(None, &pretty(&out))?;
    verdict(report.passed(), "the bracket")
}

fn kupershmidt(h: &Path, s: u32, chain: u32) -> Result<(), CliError> {
    let mut current: Polynomial = read(h)?
        .trim()
        .parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", h.display())))?;
    if chain == 0 || chain > s {
        return Err(CliError::Input(format!("--chain must be in 1..={s}")));
    }
    let mut steps = Vec::new();
    let mut divisible = true;
    for step in 0..chain {
        let level = s - step;
        let c = kupershmidt_check(&current, level)?;
        divisible &= c.divisible;
        let degree = match c.h_prev.weighted_degree() {
            benney_core::WeightedDegree::Homogeneous(d) => json!(d),
            benney_core::WeightedDegree::Inhomogeneous => Value::Null,
        };
        steps.push(json!({
            "s": level,
            "divisible": c.divisible,
            "H_prev": c.h_prev.to_string(),
            "degree": degree,
        }));
        current = c.h_prev;
        if current.is_zero() {
            break;
        }
    }
    let out = json!({ "schema": 1, "divisible": divisible, "steps": steps });
    emit(None, &pretty(&out))?;
    verdict(divisible, "the divisibility check")
}

fn simulate(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = SimConfig::from_json(&read(config)?)?;
    let state = cfg.initial_state()?;
    let params = cfg.params(&state)?;
    let times: Vec<f64> = (0..cfg.snapshots)
        .map(|j| cfg.t_final * j as f64 / (cfg.snapshots - 1) as f64)
        .collect();
    let snapshots = evolve_with_snapshots(&state, &params, &times)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let io_err = |e: csv::Error| CliError::Input(e.to_string());
        w.write_record(state.csv_header()).map_err(io_err)?;
        for snap in &snapshots {
            snap.write_csv_rows(&mut w).map_err(io_err)?;
        }
        w.flush()?;
    }
    emit(out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn defect(
    config: &Path,
    generator: PointGeneratorId,
    a: f64,
    corrupt_weights: bool,
) -> Result<(), CliError> {
    let cfg = SimConfig::from_json(&read(config)?)?;
    let state = cfg.initial_state()?;
    let params = cfg.params(&state)?;
    let opts = TransformOptions {
        corrupt_scaling_weights: corrupt_weights,
    };
    let d = symmetry_defect_with(&state, generator, a, &params, opts)?;
    let out = json!({
        "schema": 1,
        "generator": generator.to_string(),
        "a": a,
        "N": cfg.n,
        "M": cfg.m,
        "L": cfg.length,
        "T": cfg.t_final,
        "corrupt_weights": corrupt_weights,
        "defect": d,
    });
    emit(None, &pretty(&out))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { k, n, format, out } => generate(k, n, format, out.as_deref()),
        Command::Verify { input, jet, .. } => verify(&input, jet),
        Command::PointOps { n, format } => point_ops(n, format),
        Command::Bracket { rows, n } => bracket(&rows, n),
        Command::Kupershmidt { h, s, chain } => kupershmidt(&h, s, chain),
        Command::Simulate { config, out } => simulate(&config, out.as_deref()),
        Command::Defect {
            config,
            generator,
            a,
            corrupt_weights,
        } => defect(&config, generator, a, corrupt_weights),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("benney: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
