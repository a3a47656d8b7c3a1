//! `speclab`: spectral truncations of finite metric groups from the shell.
//!
//! Every subcommand resolves a group (catalog descriptor or group-spec
//! file), runs one pipeline stage, and emits a deterministic artifact: JSON
//! is the canonical schema, CSV a projection of it. Identical flags and seed
//! produce byte-identical artifacts; wall-clock timings therefore go to
//! stderr and the artifact's `time_ms` column is pinned to zero. Errors
//! never write partial artifacts — failures print a machine-readable error
//! record to stdout and exit with status 1.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use speclab_core::convergence::{
    convergence_experiment_parallel, gh_upper_bound, lifted_measure, optimal_liftable_state,
    ChainSpec, DensityState, GHReport, MuRule,
};
use speclab_core::format::{load_group_spec, parse_state_file, StateSpec};
use speclab_core::group::{distance_profile, validate_group, FiniteMetricGroup, Violation};
use speclab_core::metric::{
    lip_norm_function, state_metric, AlgebraState, LipEvaluator, LipMode, MeasureState, DEFAULT_TOL,
};
use speclab_core::peter_weyl::{build_irreps, build_projection, verify_schur, IrrepSet};
use speclab_core::truncation::{build_context, RealFunction, TruncationContext};

#[derive(Parser)]
#[command(
    name = "speclab",
    version,
    about = "Spectral truncations of finite metric groups: projections, Lip-norms, state metrics, and Gromov-Hausdorff bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check every group and metric axiom; exit 1 with witnesses if any fail.
    Validate {
        /// Catalog descriptor (`family:params:metric`) or group-spec file.
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List the irreducible representations; optionally verify orthogonality.
    Irreps {
        #[arg(long)]
        group: String,
        /// Also report the Schur-orthogonality residual.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compress a function by the projection of a label set.
    Truncate {
        #[arg(long)]
        group: String,
        /// Comma-separated irrep labels.
        #[arg(long)]
        lambda: String,
        /// Comma-separated function values, one per group element
        /// (defaults to the distance-to-identity profile).
        #[arg(long)]
        function: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Lipschitz constants of a function and its compression.
    Lipnorm {
        #[arg(long)]
        group: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Certified distance between two states on a truncated algebra.
    StateMetric {
        #[arg(long)]
        group: String,
        #[arg(long)]
        lambda: String,
        /// State file (`weights` or `density`).
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gromov-Hausdorff upper bound for one truncation and liftable state.
    GhBound {
        #[arg(long)]
        group: String,
        #[arg(long)]
        lambda: String,
        /// `optimal`, `haar`, or a state-file path.
        #[arg(long, default_value = "optimal")]
        mu: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sweep a nested truncation chain and report the bound at each step.
    Converge {
        #[arg(long)]
        group: String,
        /// `auto` or a JSON file holding a list of label lists.
        #[arg(long, default_value = "auto")]
        chain: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

// ---------------------------------------------------------------------------
// Error records
// ---------------------------------------------------------------------------

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

macro_rules! impl_from_error {
    ($ty:ty, $kind:literal) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new($kind, e.to_string())
            }
        }
    };
}

impl_from_error!(speclab_core::group::GroupError, "validation");
impl_from_error!(speclab_core::format::FormatError, "parse");
impl_from_error!(speclab_core::peter_weyl::PwError, "representation");
impl_from_error!(speclab_core::truncation::TruncationError, "truncation");
impl_from_error!(speclab_core::metric::MetricError, "metric");
impl_from_error!(speclab_core::convergence::ConvergenceError, "convergence");
impl_from_error!(std::io::Error, "io");

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let record = serde_json::json!({
                "error": { "kind": e.kind, "message": e.message }
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("error record")
            );
            ExitCode::FAILURE
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn load_group(source: &str) -> Result<FiniteMetricGroup, CliError> {
    if Path::new(source).exists() {
        let text = std::fs::read_to_string(source)?;
        Ok(load_group_spec(&text)?)
    } else {
        let (family, metric) = speclab_core::group::parse_descriptor(source)?;
        Ok(speclab_core::group::make_catalog_group(&family, metric)?)
    }
}

fn split_labels(lambda: &str) -> Vec<String> {
    lambda
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_function(csv: &str, order: usize) -> Result<RealFunction, CliError> {
    let values: Result<Vec<f64>, _> = csv.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| CliError::new("parse", format!("bad function value: {e}")))?;
    if values.len() != order {
        return Err(CliError::new(
            "parse",
            format!(
                "function has {} values, group order is {order}",
                values.len()
            ),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::new("parse", "function values must be finite"));
    }
    Ok(RealFunction(values))
}

fn build_ctx(
    group: Arc<FiniteMetricGroup>,
    lambda: &str,
) -> Result<(TruncationContext, IrrepSet), CliError> {
    let set = build_irreps(&group)?;
    let labels = split_labels(lambda);
    let projection = build_projection(&set, &labels, &group)?;
    Ok((build_context(projection, group), set))
}

/// Resolve a state file into a density state on the context: densities are
/// taken as-is, weight vectors are realized as the canonical liftable
/// mixture of compressed-delta vector states.
fn load_density(path: &Path, ctx: &TruncationContext) -> Result<DensityState, CliError> {
    let text = std::fs::read_to_string(path)?;
    let state = match parse_state_file(&text)? {
        StateSpec::Density(rho) => DensityState { rho },
        StateSpec::Weights(w) => {
            MeasureState::new(w.clone())?;
            DensityState::from_weights_mixture(ctx, &w)?
        }
    };
    state.validate(ctx)?;
    Ok(state)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn json_artifact<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s
}

/// Simple key/value CSV projection used by the scalar-result commands.
fn kv_csv(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in pairs {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn complex_rows(m: &speclab_core::CMat) -> Vec<[f64; 2]> {
    let mut rows = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            rows.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Validate { group, out, format } => run_validate(&group, &out, format),
        Command::Irreps {
            group,
            verify,
            out,
            format,
        } => run_irreps(&group, verify, &out, format),
        Command::Truncate {
            group,
            lambda,
            function,
            out,
            format,
        } => run_truncate(&group, &lambda, function.as_deref(), &out, format),
        Command::Lipnorm {
            group,
            lambda,
            function,
            out,
            format,
        } => run_lipnorm(&group, &lambda, &function, &out, format),
        Command::StateMetric {
            group,
            lambda,
            sigma,
            tau,
            tol,
            out,
            format,
        } => run_state_metric(&group, &lambda, &sigma, &tau, tol, &out, format),
        Command::GhBound {
            group,
            lambda,
            mu,
            out,
            format,
        } => run_gh_bound(&group, &lambda, &mu, &out, format),
        Command::Converge {
            group,
            chain,
            seed,
            out,
            format,
        } => run_converge(&group, &chain, seed, &out, format),
    }
}

#[derive(Serialize)]
struct ValidateArtifact {
    command: &'static str,
    group: String,
    order: usize,
    valid: bool,
    violations: Vec<Violation>,
}

fn run_validate(source: &str, out: &Option<PathBuf>, format: Format) -> Result<ExitCode, CliError> {
    // Files are loaded leniently so the artifact carries every violated
    // axiom with its witnesses; catalog groups are validated at
    // construction and re-scanned for the artifact.
    let (group, report) = if Path::new(source).exists() {
        let text = std::fs::read_to_string(source)?;
        speclab_core::format::load_group_spec_lenient(&text)?
    } else {
        let (family, metric) = speclab_core::group::parse_descriptor(source)?;
        let group = speclab_core::group::make_catalog_group(&family, metric)?;
        let report = validate_group(&group);
        (group, report)
    };
    let valid = report.is_valid();
    let artifact = ValidateArtifact {
        command: "validate",
        group: group.name.clone(),
        order: group.order,
        valid,
        violations: report.violations,
    };
    let code = if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => {
            let mut pairs = vec![
                ("group", artifact.group.clone()),
                ("order", artifact.order.to_string()),
                ("valid", artifact.valid.to_string()),
            ];
            for v in &artifact.violations {
                pairs.push(("violation", format!("{v}")));
            }
            kv_csv(&pairs)
        }
    };
    emit(out, &content)?;
    Ok(code)
}

#[derive(Serialize)]
struct IrrepsArtifact {
    command: &'static str,
    group: String,
    order: usize,
    irreps: Vec<IrrepInfo>,
    sum_dim_sq: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    schur_residual: Option<f64>,
}

#[derive(Serialize)]
struct IrrepInfo {
    label: String,
    dim: usize,
}

fn run_irreps(
    source: &str,
    verify: bool,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = load_group(source)?;
    let set = build_irreps(&group)?;
    let irreps: Vec<IrrepInfo> = set
        .irreps
        .iter()
        .map(|r| IrrepInfo {
            label: r.label.clone(),
            dim: r.dim,
        })
        .collect();
    let sum_dim_sq = set.irreps.iter().map(|r| r.dim * r.dim).sum();
    let schur_residual = verify.then(|| verify_schur(&set, &group));
    let artifact = IrrepsArtifact {
        command: "irreps",
        group: group.name.clone(),
        order: group.order,
        irreps,
        sum_dim_sq,
        schur_residual,
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => {
            let mut s = String::from("label,dim\n");
            for r in &artifact.irreps {
                s.push_str(&format!("{},{}\n", r.label, r.dim));
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TruncateArtifact {
    command: &'static str,
    group: String,
    lambda: Vec<String>,
    dim_l2: usize,
    dim_algebra: usize,
    function: Vec<f64>,
    /// Compressed operator, row-major, as (re, im) pairs.
    matrix: Vec<[f64; 2]>,
}

fn run_truncate(
    source: &str,
    lambda: &str,
    function: Option<&str>,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = Arc::new(load_group(source)?);
    let (ctx, _) = build_ctx(group.clone(), lambda)?;
    let f = match function {
        Some(csv) => parse_function(csv, group.order)?,
        None => RealFunction(distance_profile(&group).delta),
    };
    let t = ctx.compress(&f);
    let artifact = TruncateArtifact {
        command: "truncate",
        group: group.name.clone(),
        lambda: ctx.projection.lambda.clone(),
        dim_l2: ctx.ambient_dim,
        dim_algebra: ctx.algebra_dim(),
        function: f.0.clone(),
        matrix: complex_rows(&t.matrix),
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => kv_csv(&[
            ("group", artifact.group.clone()),
            ("lambda", artifact.lambda.join(";")),
            ("dim_l2", artifact.dim_l2.to_string()),
            ("dim_algebra", artifact.dim_algebra.to_string()),
        ]),
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LipnormArtifact {
    command: &'static str,
    group: String,
    lambda: Vec<String>,
    function: Vec<f64>,
    lip_function: f64,
    lip_operator_left: f64,
    lip_operator_right: f64,
    lip_operator_both: f64,
}

fn run_lipnorm(
    source: &str,
    lambda: &str,
    function: &str,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = Arc::new(load_group(source)?);
    let (ctx, _) = build_ctx(group.clone(), lambda)?;
    let f = parse_function(function, group.order)?;
    let t = ctx.compress(&f);
    let seminorm = |mode| LipEvaluator::new(&ctx, mode).seminorm(&t);
    let artifact = LipnormArtifact {
        command: "lipnorm",
        group: group.name.clone(),
        lambda: ctx.projection.lambda.clone(),
        function: f.0.clone(),
        lip_function: lip_norm_function(&f, &group),
        lip_operator_left: seminorm(LipMode::OperatorLeft),
        lip_operator_right: seminorm(LipMode::OperatorRight),
        lip_operator_both: seminorm(LipMode::OperatorBoth),
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => kv_csv(&[
            ("lip_function", artifact.lip_function.to_string()),
            ("lip_operator_left", artifact.lip_operator_left.to_string()),
            (
                "lip_operator_right",
                artifact.lip_operator_right.to_string(),
            ),
            ("lip_operator_both", artifact.lip_operator_both.to_string()),
        ]),
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct StateMetricArtifact {
    command: &'static str,
    group: String,
    lambda: Vec<String>,
    value: f64,
    upper: f64,
    gap: f64,
    tol: f64,
    converged: bool,
    iterations: usize,
    maximizer: Vec<f64>,
}

fn run_state_metric(
    source: &str,
    lambda: &str,
    sigma_path: &Path,
    tau_path: &Path,
    tol: f64,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = Arc::new(load_group(source)?);
    let (ctx, _) = build_ctx(group.clone(), lambda)?;
    let sigma = AlgebraState::from_density(&ctx, &load_density(sigma_path, &ctx)?.rho)?;
    let tau = AlgebraState::from_density(&ctx, &load_density(tau_path, &ctx)?.rho)?;
    let evaluator = LipEvaluator::new(&ctx, LipMode::OperatorBoth);
    let cert = state_metric(&sigma, &tau, &evaluator, tol)?;
    let artifact = StateMetricArtifact {
        command: "state-metric",
        group: group.name.clone(),
        lambda: ctx.projection.lambda.clone(),
        value: cert.value,
        upper: cert.upper,
        gap: cert.gap,
        tol,
        converged: cert.converged,
        iterations: cert.iterations,
        maximizer: cert.maximizer,
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => kv_csv(&[
            ("value", artifact.value.to_string()),
            ("upper", artifact.upper.to_string()),
            ("gap", artifact.gap.to_string()),
            ("tol", artifact.tol.to_string()),
            ("converged", artifact.converged.to_string()),
        ]),
    };
    emit(out, &content)?;
    Ok(if cert.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[derive(Serialize)]
struct GhBoundArtifact {
    command: &'static str,
    group: String,
    lambda: Vec<String>,
    mu: String,
    epsilon: f64,
    dim_l2: usize,
    dim_algebra: usize,
    /// The realized liftable measure the bound integrates against.
    weights: Vec<f64>,
}

fn run_gh_bound(
    source: &str,
    lambda: &str,
    mu: &str,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = Arc::new(load_group(source)?);
    let (ctx, _) = build_ctx(group.clone(), lambda)?;
    let profile = distance_profile(&group);
    let state = match mu {
        "optimal" => optimal_liftable_state(&ctx, &profile).1,
        "haar" => DensityState::maximally_mixed(&ctx),
        path => load_density(Path::new(path), &ctx)?,
    };
    let lifted = lifted_measure(&ctx, &state)?;
    let epsilon = gh_upper_bound(&ctx, &lifted, &profile)?;
    let artifact = GhBoundArtifact {
        command: "gh-bound",
        group: group.name.clone(),
        lambda: ctx.projection.lambda.clone(),
        mu: mu.to_string(),
        epsilon,
        dim_l2: ctx.ambient_dim,
        dim_algebra: ctx.algebra_dim(),
        weights: lifted.weights.clone(),
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => kv_csv(&[
            ("group", artifact.group.clone()),
            ("lambda", artifact.lambda.join(";")),
            ("mu", artifact.mu.clone()),
            ("epsilon", artifact.epsilon.to_string()),
            ("dim_l2", artifact.dim_l2.to_string()),
            ("dim_algebra", artifact.dim_algebra.to_string()),
        ]),
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ConvergeArtifact {
    command: &'static str,
    group: String,
    chain: String,
    seed: u64,
    mu_rule: String,
    rows: Vec<ConvergeRow>,
}

#[derive(Serialize)]
struct ConvergeRow {
    step: usize,
    lambda: Vec<String>,
    dim_l2: usize,
    dim_algebra: usize,
    epsilon: f64,
    optimizer: String,
    mu_weights: Vec<f64>,
    /// Pinned to zero in artifacts; measured timings go to stderr.
    time_ms: f64,
}

fn thread_cap() -> usize {
    std::env::var("SPECLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn run_converge(
    source: &str,
    chain: &str,
    seed: u64,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let group = Arc::new(load_group(source)?);
    let chain_spec = if chain == "auto" {
        ChainSpec::Auto
    } else {
        let text = std::fs::read_to_string(chain)?;
        let steps: Vec<Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| CliError::new("parse", format!("chain file: {e}")))?;
        ChainSpec::Explicit(steps)
    };
    let threads = thread_cap();
    let report: GHReport =
        convergence_experiment_parallel(group.clone(), chain_spec, MuRule::Optimal, threads)?;

    for row in &report.rows {
        eprintln!(
            "step {}: |lambda| = {}, dim_l2 = {}, epsilon = {}, {:.3} ms",
            row.step,
            row.lambda.len(),
            row.dim_l2,
            row.epsilon,
            row.time_ms
        );
    }

    let rows: Vec<ConvergeRow> = report
        .rows
        .iter()
        .map(|r| ConvergeRow {
            step: r.step,
            lambda: r.lambda.clone(),
            dim_l2: r.dim_l2,
            dim_algebra: r.dim_algebra,
            epsilon: r.epsilon,
            optimizer: r.optimizer.clone(),
            mu_weights: r.mu_weights.clone(),
            time_ms: 0.0,
        })
        .collect();
    let artifact = ConvergeArtifact {
        command: "converge",
        group: group.name.clone(),
        chain: chain.to_string(),
        seed,
        mu_rule: report.mu_rule.clone(),
        rows,
    };
    let content = match format {
        Format::Json => json_artifact(&artifact),
        Format::Csv => {
            let mut s = String::from("step,lambda_labels,dim_l2,dim_algebra,epsilon,time_ms\n");
            for r in &artifact.rows {
                s.push_str(&format!(
                    "{},{},{},{},{},0\n",
                    r.step,
                    r.lambda.join(";"),
                    r.dim_l2,
                    r.dim_algebra,
                    r.epsilon
                ));
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}
