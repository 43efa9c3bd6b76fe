//! Command-line front end for the matrix-monotonicity toolkit.
//!
//! Subcommands:
//!
//! * `eval`   — apply a built-in scalar function to a symmetric matrix
//!   through its spectrum, optionally with the derivative operator or its
//!   action on a direction.
//! * `mono`   — seeded sampling check of a monotonicity notion (h, o, p, s,
//!   or all four) for a registered matrix map; writes a JSON report.
//! * `tsts`   — true-stress monotonicity scan of a stress model over random
//!   strain pairs, plus the deterministic dilation grid search for the
//!   quadratic model; writes a JSON report.
//! * `golden` — recompute every closed-form catalog value (skew-exponential
//!   pairings, determinant witnesses, shear-path determinants, determinant
//!   derivative identity, pseudo-potential quadratures) and print a
//!   verification table.
//! * `path`   — CSV of the shear-path experiment where the product stays
//!   invertible while its symmetric part loses definiteness.
//! * `trace`  — CSV of λ_min of the symmetrized true-stress derivative along
//!   a straight strain segment.
//!
//! Exit codes: 0 clean, 1 violations found, 2 spectral domain error,
//! 64 usage or parse error, 65 configuration error.  `--expect-violations`
//! swaps the meaning of 0 and 1 for the scanning commands so CI can assert
//! either outcome.  Reports are deterministic: same command, seed, and
//! configuration produce byte-identical output.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use matmono::elast::{
    hencky_violation_search, tsts_operator, tsts_scan, GridWitness, StrainState, StressModel,
};
use matmono::jogcalc::{run_path_experiment, sym_pd_crossing};
use matmono::monocheck::{
    builtin_map, builtin_map_names, check_hmon, check_omon, check_pmon, check_smon,
    counterexample_catalog, implication_matrix, lambda_min_along_curve, scalar_grid, CatalogEntry,
    MonotonicityReport, SampleDomain, SampleSpec,
};
use matmono::primfn::{
    apply_primary, builtin, builtin_names, det_derivative_identity_direction,
    det_derivative_identity_fd, frechet, potential_value, pseudo_potential, DifferencingSpec,
    EXP, IDENTITY,
};
use matmono::{sample, symcore, Error, SymMatrix};

// ---------------------------------------------------------------------------
// Error-to-exit-code plumbing
// ---------------------------------------------------------------------------

const EXIT_CLEAN: i32 = 0;
const EXIT_VIOLATIONS: i32 = 1;
const EXIT_DOMAIN: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_CONFIGURATION: i32 = 65;

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIGURATION,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain { .. } => EXIT_DOMAIN,
            Error::Shape(_) => EXIT_USAGE,
            Error::Numerical(_)
            | Error::Configuration(_)
            | Error::Precondition(_)
            | Error::CurveExit { .. } => EXIT_CONFIGURATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "matmono",
    version,
    about = "Monotonicity diagnostics for primary matrix functions and stress models",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a scalar function to a symmetric matrix through its spectrum.
    Eval(EvalArgs),
    /// Check a monotonicity notion of a registered matrix map by sampling.
    Mono(MonoArgs),
    /// Scan a stress model for true-stress monotonicity violations.
    Tsts(TstsArgs),
    /// Recompute the closed-form value catalog and print a verification table.
    Golden(GoldenArgs),
    /// Tabulate the shear path: invertible product, indefinite symmetric part.
    Path(PathArgs),
    /// Trace lambda_min of the true-stress derivative along a strain segment.
    Trace(TraceArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Scalar function name (exp, log, square, cube, id, cubic-mono, softplus).
    #[arg(value_name = "FN")]
    fn_name: Option<String>,
    /// Symmetric matrix as inline JSON rows or a path to a JSON file.
    #[arg(long, value_name = "JSON|PATH")]
    matrix: Option<String>,
    /// Also build the derivative operator at the matrix.
    #[arg(long)]
    derivative: bool,
    /// Direction to apply the derivative to (inline JSON rows or a path).
    #[arg(long, value_name = "JSON|PATH", requires = "derivative")]
    direction: Option<String>,
    /// Relative eigenvalue-gap threshold of the divided-difference switch.
    #[arg(long, value_name = "TAU")]
    tau_eig: Option<f64>,
    /// Gauss-Legendre order for integral representations.
    #[arg(long, value_name = "ORDER")]
    quad_order: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MonoArgs {
    /// Registered map name (exp, log, square, cube, id, cubic-mono,
    /// softplus, det-identity).
    #[arg(value_name = "MAP")]
    map: Option<String>,
    /// Monotonicity notion to check.
    #[arg(long, value_enum, value_name = "NOTION")]
    notion: Option<NotionArg>,
    /// Matrix dimension.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Number of sampled pairs (or scalar grid points for the s notion).
    #[arg(long, value_name = "COUNT")]
    samples: Option<usize>,
    /// RNG seed; every report records it.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Scale of the sampled matrices.
    #[arg(long, value_name = "SCALE")]
    scale: Option<f64>,
    /// Exit 0 when violations are found and 1 when the scan is clean.
    #[arg(long)]
    expect_violations: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TstsArgs {
    /// Stress model as inline JSON or a path to a JSON file, e.g.
    /// {"model":"tsts","mu":1,"lambda":1,"k":1,"k_hat":1}.
    #[arg(long, value_name = "JSON|PATH")]
    model: Option<String>,
    /// Strain domain: all of Sym(n) or the elastic domain of the model.
    #[arg(long, value_enum, value_name = "DOMAIN")]
    domain: Option<DomainArg>,
    /// Matrix dimension.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Number of sampled strain pairs.
    #[arg(long, value_name = "COUNT")]
    samples: Option<usize>,
    /// RNG seed; every report records it.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Scale of the sampled strains.
    #[arg(long, value_name = "SCALE")]
    scale: Option<f64>,
    /// Exit 0 when violations are found and 1 when the scan is clean.
    #[arg(long)]
    expect_violations: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GoldenArgs {
    /// Output format of the verification rows.
    #[arg(long, value_enum, value_name = "FORMAT")]
    format: Option<GoldenFormat>,
    /// Seed of the pseudo-potential sample rows.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PathArgs {
    /// Number of uniform grid points on [0, 1].
    #[arg(long, value_name = "COUNT")]
    steps: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// Stress model as inline JSON or a path to a JSON file.
    #[arg(long, value_name = "JSON|PATH")]
    model: Option<String>,
    /// Segment start: a logarithmic strain matrix (inline JSON or path).
    #[arg(long, value_name = "JSON|PATH")]
    from: Option<String>,
    /// Segment end: a logarithmic strain matrix (inline JSON or path).
    #[arg(long, value_name = "JSON|PATH")]
    to: Option<String>,
    /// Number of equispaced evaluation points on the segment.
    #[arg(long, value_name = "COUNT")]
    steps: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// JSON file whose keys fill in flags not given explicitly.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NotionArg {
    /// Inner-product pairing of value and argument increments.
    H,
    /// Preservation of the positive-definite order.
    O,
    /// Pairing against positive definite increments.
    P,
    /// Monotonicity of the inducing scalar function.
    S,
    /// All four notions and their joint pattern.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    /// Unrestricted symmetric strains.
    Sym,
    /// Strains inside the elastic domain of the model's yield stress.
    Elastic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GoldenFormat {
    /// Aligned text table.
    Table,
    /// JSON object with a row array.
    Json,
    /// Comma-separated rows.
    Csv,
}

// ---------------------------------------------------------------------------
// Config-file merging: keys fill flags that were not given explicitly
// ---------------------------------------------------------------------------

struct Cfg(serde_json::Map<String, Value>);

impl Cfg {
    fn load(path: &Option<PathBuf>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self(serde_json::Map::new()));
        };
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("could not read config `{}`: {e}", path.display()))
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| {
            CliError::config(format!("config `{}` is not valid JSON: {e}", path.display()))
        })?;
        match value {
            Value::Object(map) => Ok(Self(map)),
            _ => Err(CliError::config(format!(
                "config `{}` must hold a JSON object",
                path.display()
            ))),
        }
    }

    /// Fills a typed slot (numbers, strings) from the config key.
    fn fill<T: serde::de::DeserializeOwned>(
        &self,
        slot: &mut Option<T>,
        key: &str,
    ) -> Result<(), CliError> {
        if slot.is_none() {
            if let Some(value) = self.0.get(key) {
                *slot = Some(serde_json::from_value(value.clone()).map_err(|e| {
                    CliError::config(format!("config key `{key}`: {e}"))
                })?);
            }
        }
        Ok(())
    }

    /// Fills a JSON-or-path slot: strings pass through, any other JSON value
    /// is inlined verbatim (so a config may embed the model or matrix).
    fn fill_text(&self, slot: &mut Option<String>, key: &str) {
        if slot.is_none() {
            if let Some(value) = self.0.get(key) {
                *slot = Some(match value {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                });
            }
        }
    }

    fn fill_flag(&self, slot: &mut bool, key: &str) -> Result<(), CliError> {
        if !*slot {
            if let Some(value) = self.0.get(key) {
                *slot = value.as_bool().ok_or_else(|| {
                    CliError::config(format!("config key `{key}` must be a boolean"))
                })?;
            }
        }
        Ok(())
    }

    fn fill_enum<T: ValueEnum>(&self, slot: &mut Option<T>, key: &str) -> Result<(), CliError> {
        if slot.is_none() {
            if let Some(value) = self.0.get(key) {
                let text = value.as_str().ok_or_else(|| {
                    CliError::config(format!("config key `{key}` must be a string"))
                })?;
                *slot = Some(T::from_str(text, true).map_err(|e| {
                    CliError::config(format!("config key `{key}`: {e}"))
                })?);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Shared input parsing and output plumbing
// ---------------------------------------------------------------------------

/// Parses `raw` as inline JSON first, then as a path to a JSON file.
fn read_json(raw: &str, what: &str) -> Result<Value, CliError> {
    if let Ok(value) = serde_json::from_str::<Value>(raw) {
        return Ok(value);
    }
    match fs::read_to_string(raw) {
        Ok(text) => serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!("could not parse {what} file `{raw}`: {e}"))
        }),
        Err(_) => Err(CliError::usage(format!(
            "{what} `{raw}` is neither inline JSON nor a readable file"
        ))),
    }
}

fn parse_matrix(raw: &str, what: &str) -> Result<SymMatrix, CliError> {
    let value = read_json(raw, what)?;
    let rows: Vec<Vec<f64>> = serde_json::from_value(value).map_err(|e| {
        CliError::usage(format!("{what} must be a JSON array of matrix rows: {e}"))
    })?;
    let matrix = SymMatrix::from_rows(&rows)?;
    if matrix.needed_symmetrization() {
        return Err(CliError::usage(format!(
            "{what} is not symmetric: entries differ across the diagonal by up to {:e}",
            2.0 * matrix.symmetrization_defect()
        )));
    }
    Ok(matrix)
}

/// Resolves the `--n` flag, defaulting to 3; the samplers require a dimension
/// the dense spectral kernels support, so reject anything outside that range
/// before a scan starts.
fn resolve_dimension(n: Option<usize>) -> Result<usize, CliError> {
    let n = n.unwrap_or(3);
    if !(symcore::MIN_DIM..=symcore::MAX_DIM).contains(&n) {
        return Err(CliError::usage(format!(
            "dimension {n} outside supported range {}..={}",
            symcore::MIN_DIM,
            symcore::MAX_DIM
        )));
    }
    Ok(n)
}

fn parse_model(raw: &str) -> Result<StressModel, CliError> {
    let value = read_json(raw, "stress model")?;
    let model: StressModel = serde_json::from_value(value).map_err(|e| {
        CliError::usage(format!(
            "stress model must be a tagged JSON object, e.g. \
             {{\"model\":\"hencky\",\"mu\":1,\"kappa\":1}}: {e}"
        ))
    })?;
    model.validate()?;
    Ok(model)
}

/// Writes `body` to the output file (printing `summary` to stdout), or dumps
/// `body` itself to stdout when no file was requested.
fn emit(output: &Option<PathBuf>, body: &str, summary: &str) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, body).map_err(|e| {
                CliError::config(format!("could not write `{}`: {e}", path.display()))
            })?;
            println!("{summary}");
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn json_body<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::config(format!("report serialization failed: {e}")))?;
    body.push('\n');
    Ok(body)
}

/// Final exit code of a scanning command: violations map to 1, unless the
/// caller declared them expected, which swaps the two outcomes.
fn scan_exit(violations_found: bool, expect_violations: bool) -> i32 {
    if violations_found == expect_violations {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATIONS
    }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EvalReport {
    #[serde(rename = "fn")]
    fn_name: String,
    n: usize,
    matrix: Vec<Vec<f64>>,
    value: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_operator: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_applied: Option<Vec<Vec<f64>>>,
}

fn cmd_eval(mut args: EvalArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill(&mut args.fn_name, "fn")?;
    cfg.fill_text(&mut args.matrix, "matrix");
    cfg.fill_flag(&mut args.derivative, "derivative")?;
    cfg.fill_text(&mut args.direction, "direction");
    cfg.fill(&mut args.tau_eig, "tau-eig")?;
    cfg.fill(&mut args.quad_order, "quad-order")?;

    let name = args
        .fn_name
        .ok_or_else(|| CliError::usage("missing scalar function name"))?;
    let fnc = builtin(&name).ok_or_else(|| {
        CliError::usage(format!(
            "unknown scalar function `{name}`; built-ins: {}",
            builtin_names().join(", ")
        ))
    })?;
    let matrix_raw = args
        .matrix
        .ok_or_else(|| CliError::usage("missing --matrix"))?;
    let a = parse_matrix(&matrix_raw, "matrix")?;

    let value = apply_primary(fnc, &a)?;
    let mut report = EvalReport {
        fn_name: name,
        n: a.n(),
        matrix: a.to_rows(),
        value: value.to_rows(),
        derivative_lambda_min: None,
        derivative_operator: None,
        derivative_applied: None,
    };

    if args.derivative || args.direction.is_some() {
        let spec = DifferencingSpec::new(
            args.tau_eig.unwrap_or(DifferencingSpec::default().tau_eig()),
            args.quad_order
                .unwrap_or(DifferencingSpec::default().quad_order()),
        )?;
        let op = frechet(fnc, &a, &spec)?;
        report.derivative_lambda_min = Some(op.lambda_min()?);
        match &args.direction {
            Some(raw) => {
                let h = parse_matrix(raw, "direction")?;
                report.derivative_applied = Some(op.apply(&h)?.to_rows());
            }
            None => {
                let m = op.m();
                let rows = (0..m)
                    .map(|r| op.mat()[r * m..(r + 1) * m].to_vec())
                    .collect();
                report.derivative_operator = Some(rows);
            }
        }
    }

    let body = json_body(&report)?;
    let summary = format!(
        "eval {}: n = {} -> {}",
        report.fn_name,
        report.n,
        args.output
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default()
    );
    emit(&args.output, &body, &summary)?;
    Ok(EXIT_CLEAN)
}

// ---------------------------------------------------------------------------
// mono
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PatternReport {
    pattern: String,
    consistent_with_theory: bool,
    #[serde(flatten)]
    detail: matmono::monocheck::ImplicationPattern,
}

fn cmd_mono(mut args: MonoArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill(&mut args.map, "map")?;
    cfg.fill_enum(&mut args.notion, "notion")?;
    cfg.fill(&mut args.n, "n")?;
    cfg.fill(&mut args.samples, "samples")?;
    cfg.fill(&mut args.seed, "seed")?;
    cfg.fill(&mut args.scale, "scale")?;
    cfg.fill_flag(&mut args.expect_violations, "expect-violations")?;

    let name = args
        .map
        .ok_or_else(|| CliError::usage("missing map name"))?;
    let map = builtin_map(&name).ok_or_else(|| {
        CliError::usage(format!(
            "unknown map `{name}`; registered maps: {}",
            builtin_map_names().join(", ")
        ))
    })?;
    let notion = args.notion.unwrap_or(NotionArg::All);
    let n = resolve_dimension(args.n)?;
    let samples = args.samples.unwrap_or(200);
    let seed = args.seed.unwrap_or(sample::DEFAULT_SEED);
    let scale = args.scale.unwrap_or(1.0);
    let spec = SampleSpec::new(seed, samples, scale, map.domain().clone())?;

    let (body, violations_found, summary_head) = match notion {
        NotionArg::All => {
            let pattern = implication_matrix(&map, n, &spec)?;
            let violations = pattern.hmon.violations
                + pattern.omon.violations
                + pattern.pmon.violations
                + pattern.smon.as_ref().map_or(0, |r| r.violations);
            let report = PatternReport {
                pattern: pattern.pattern_string(),
                consistent_with_theory: pattern.consistent_with_theory(),
                detail: pattern,
            };
            let head = format!("mono {name} [all]: pattern {}", report.pattern);
            (json_body(&report)?, violations > 0, head)
        }
        NotionArg::S => {
            let fnc = map.scalar().ok_or_else(|| {
                CliError::config(format!(
                    "map `{name}` has no inducing scalar function; \
                     the spectral notion does not apply"
                ))
            })?;
            let grid = scalar_grid(map.domain(), samples);
            let report = check_smon(fnc, &grid);
            let head = format!(
                "mono {name} [s]: {} violations in {} grid points",
                report.violations, report.samples
            );
            (json_body(&report)?, report.violations > 0, head)
        }
        NotionArg::H | NotionArg::O | NotionArg::P => {
            let report: MonotonicityReport = match notion {
                NotionArg::H => check_hmon(&map, n, &spec)?,
                NotionArg::O => check_omon(&map, n, &spec)?,
                NotionArg::P => check_pmon(&map, n, &spec)?,
                _ => unreachable!(),
            };
            let head = format!(
                "mono {name} [{}]: {} violations in {} samples (seed {seed})",
                report.notion.label(),
                report.violations,
                report.samples
            );
            (json_body(&report)?, report.violations > 0, head)
        }
    };

    let summary = match &args.output {
        Some(path) => format!("{summary_head} -> {}", path.display()),
        None => summary_head,
    };
    emit(&args.output, &body, &summary)?;
    Ok(scan_exit(violations_found, args.expect_violations))
}

// ---------------------------------------------------------------------------
// tsts
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TstsReport {
    model: StressModel,
    domain: String,
    n: usize,
    scan: MonotonicityReport,
    /// Deterministic dilation-grid witness (quadratic model, sym domain).
    grid_witness: Option<GridWitness>,
}

fn cmd_tsts(mut args: TstsArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill_text(&mut args.model, "model");
    cfg.fill_enum(&mut args.domain, "domain")?;
    cfg.fill(&mut args.n, "n")?;
    cfg.fill(&mut args.samples, "samples")?;
    cfg.fill(&mut args.seed, "seed")?;
    cfg.fill(&mut args.scale, "scale")?;
    cfg.fill_flag(&mut args.expect_violations, "expect-violations")?;

    let model_raw = args
        .model
        .ok_or_else(|| CliError::usage("missing --model"))?;
    let model = parse_model(&model_raw)?;
    let domain = args.domain.unwrap_or(DomainArg::Sym);
    let n = resolve_dimension(args.n)?;
    let samples = args.samples.unwrap_or(200);
    let seed = args.seed.unwrap_or(sample::DEFAULT_SEED);
    let scale = args.scale.unwrap_or(1.0);

    let spec = SampleSpec::new(seed, samples, scale, SampleDomain::Sym)?;
    let restrict = domain == DomainArg::Elastic;
    let scan = tsts_scan(&model, n, &spec, restrict)?;
    let grid_witness = if !restrict && matches!(model, StressModel::Hencky { .. }) && n == 3 {
        hencky_violation_search(&model)?
    } else {
        None
    };

    let violations_found = scan.violations > 0 || grid_witness.is_some();
    let report = TstsReport {
        model,
        domain: match domain {
            DomainArg::Sym => "sym".to_string(),
            DomainArg::Elastic => "elastic".to_string(),
        },
        n,
        scan,
        grid_witness,
    };
    let body = json_body(&report)?;
    let head = format!(
        "tsts {} [{}]: {} sampled violations in {} pairs{} (seed {seed})",
        report.scan.map,
        report.domain,
        report.scan.violations,
        report.scan.samples,
        if report.grid_witness.is_some() {
            ", grid witness found"
        } else {
            ""
        }
    );
    let summary = match &args.output {
        Some(path) => format!("{head} -> {}", path.display()),
        None => head,
    };
    emit(&args.output, &body, &summary)?;
    Ok(scan_exit(violations_found, args.expect_violations))
}

// ---------------------------------------------------------------------------
// golden
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GoldenReport {
    seed: u64,
    failures: usize,
    rows: Vec<CatalogEntry>,
}

/// The full deterministic verification table: the counterexample catalog,
/// the shear-path determinant grid and its sym-PD crossing, the determinant
/// derivative identity in both constructions, and pseudo-potential
/// quadratures against their closed forms on seeded samples.
fn golden_rows(seed: u64) -> Result<Vec<CatalogEntry>, CliError> {
    let mut rows = counterexample_catalog();

    let experiment = run_path_experiment(11)?;
    for record in &experiment.records {
        rows.push(CatalogEntry::new(
            format!("shear-path-det-product-t{:.1}", record.t),
            0.125,
            record.det_ab,
            1e-12,
        ));
    }
    rows.push(CatalogEntry::new(
        "shear-path-sym-pd-crossing",
        std::f64::consts::FRAC_1_SQRT_2,
        sym_pd_crossing(1e-12)?,
        1e-9,
    ));

    let diag = [2.0, 3.0, 5.0];
    rows.push(CatalogEntry::new(
        "det-derivative-identity-formula",
        31.0,
        det_derivative_identity_direction(&diag)?,
        1e-9,
    ));
    rows.push(CatalogEntry::new(
        "det-derivative-identity-fd",
        31.0,
        det_derivative_identity_fd(&diag, 1e-5)?,
        1e-6,
    ));

    let dspec = DifferencingSpec::default();
    for (fnc, label) in [(&IDENTITY, "id"), (&EXP, "exp")] {
        let f0 = fnc
            .antiderivative(0.0)
            .expect("both functions register antiderivatives");
        for i in 0..20u64 {
            let mut rng = sample::substream(seed, 7000 + i);
            let a = sample::gaussian_sym(&mut rng, 3, 0.75);
            let expected = potential_value(fnc, &a)? - 3.0 * f0;
            let computed = pseudo_potential(fnc, &a, &dspec)?;
            rows.push(CatalogEntry::new(
                format!("pseudo-potential-{label}-{i:02}"),
                expected,
                computed,
                1e-7,
            ));
        }
    }

    Ok(rows)
}

fn golden_table(seed: u64, rows: &[CatalogEntry], failures: usize) -> String {
    let mut out = format!("seed {seed}\n");
    out.push_str(&format!(
        "{:<36} {:>24} {:>24} {:>13} {:>8}  status\n",
        "name", "expected", "computed", "|err|", "tol"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:<36} {:>24} {:>24} {:>13.3e} {:>8.0e}  {}\n",
            row.name,
            row.expected,
            row.computed,
            row.abs_err,
            row.tol,
            if row.passed() { "pass" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "golden: {} rows, {} failures\n",
        rows.len(),
        failures
    ));
    out
}

fn cmd_golden(mut args: GoldenArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill_enum(&mut args.format, "format")?;
    cfg.fill(&mut args.seed, "seed")?;

    let seed = args.seed.unwrap_or(sample::DEFAULT_SEED);
    let rows = golden_rows(seed)?;
    let failures = rows.iter().filter(|r| !r.passed()).count();

    let body = match args.format.unwrap_or(GoldenFormat::Table) {
        GoldenFormat::Table => golden_table(seed, &rows, failures),
        GoldenFormat::Json => json_body(&GoldenReport {
            seed,
            failures,
            rows,
        })?,
        GoldenFormat::Csv => {
            let mut out = String::from("name,expected,computed,abs_err,tol,passed\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{:e},{:e},{}\n",
                    row.name,
                    row.expected,
                    row.computed,
                    row.abs_err,
                    row.tol,
                    row.passed()
                ));
            }
            out
        }
    };
    let summary = format!(
        "golden: {} failures{}",
        failures,
        args.output
            .as_ref()
            .map(|p| format!(" -> {}", p.display()))
            .unwrap_or_default()
    );
    emit(&args.output, &body, &summary)?;
    Ok(if failures == 0 {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATIONS
    })
}

// ---------------------------------------------------------------------------
// path
// ---------------------------------------------------------------------------

fn cmd_path(mut args: PathArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill(&mut args.steps, "steps")?;

    let steps = args.steps.unwrap_or(11);
    let experiment = run_path_experiment(steps)?;
    let crossing = sym_pd_crossing(1e-12)?;
    let body = experiment.to_csv();
    let summary = format!(
        "path: {} points, invertible throughout = {}, sym-PD changes = {}, crossing t* = {crossing}{}",
        experiment.records.len(),
        experiment.invertible_throughout(),
        experiment.sym_pd_changes(),
        args.output
            .as_ref()
            .map(|p| format!(" -> {}", p.display()))
            .unwrap_or_default()
    );
    emit(&args.output, &body, &summary)?;
    Ok(EXIT_CLEAN)
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

fn cmd_trace(mut args: TraceArgs) -> Result<i32, CliError> {
    let cfg = Cfg::load(&args.config)?;
    cfg.fill_text(&mut args.model, "model");
    cfg.fill_text(&mut args.from, "from");
    cfg.fill_text(&mut args.to, "to");
    cfg.fill(&mut args.steps, "steps")?;

    let model = parse_model(
        &args
            .model
            .ok_or_else(|| CliError::usage("missing --model"))?,
    )?;
    let from = parse_matrix(
        &args.from.ok_or_else(|| CliError::usage("missing --from"))?,
        "segment start",
    )?;
    let to = parse_matrix(
        &args.to.ok_or_else(|| CliError::usage("missing --to"))?,
        "segment end",
    )?;
    let steps = args.steps.unwrap_or(33);

    let trace = lambda_min_along_curve(
        |l| {
            let state = StrainState::from_log(l.clone())?;
            Ok(tsts_operator(&model, &state)?.operator)
        },
        &from,
        &to,
        steps,
    )?;

    let mut body = String::from("t,lambda_min\n");
    for point in &trace.points {
        body.push_str(&format!("{},{}\n", point.t, point.lambda_min));
    }
    let summary = format!(
        "trace: {} points, min lambda_min = {}, sign changes = {}{}",
        trace.points.len(),
        trace.min_lambda,
        trace.sign_changes,
        args.output
            .as_ref()
            .map(|p| format!(" -> {}", p.display()))
            .unwrap_or_default()
    );
    emit(&args.output, &body, &summary)?;
    Ok(EXIT_CLEAN)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Mono(args) => cmd_mono(args),
        Command::Tsts(args) => cmd_tsts(args),
        Command::Golden(args) => cmd_golden(args),
        Command::Path(args) => cmd_path(args),
        Command::Trace(args) => cmd_trace(args),
    }
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match run(cli) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {}", e.message);
                e.code
            }
        },
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_CLEAN };
            let _ = e.print();
            code
        }
    };
    std::process::exit(code);
}
