//! Command-line driver for the fermisea library.
//!
//! Subcommands: measure | lambda | directions | entropy-scan | bound-scan |
//! construct | verify | fit.  Seas are JSON documents (`--sea FILE`,
//! `--inline JSON`, or `--sea random --seed S --dim D`); scans emit CSV or
//! JSON rows with a fixed column order; `construct` builds a sea realizing a
//! growth target and embeds its verification report as metadata; `verify`
//! re-checks a constructed sea.  Exit codes: 0 ok, 2 malformed input,
//! 3 numeric failure, 4 budget exceeded, 5 verification failed, 1 other.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermisea::bounds::{fhm_bound_exact, fhm_bound_quadrature, BoundsError, QuadraturePlan};
use fermisea::cli::{
    emit_results, exit_code, fit_scaling, load_sea, parse_l_range, CliError, FitModel,
    OutputFormat, RunConfig, ScanRow, SeaSpec, SpecError, CSV_HEADER,
};
use fermisea::constructor::{
    construct_verified, lift_to_dimension, verify_entropy_target, verify_lambda_minorant,
    ConstructorError, GrowthFamily, GrowthProfile, LadderConfig,
};
use fermisea::corpus::random_product_sea;
use fermisea::fermi_sea::{FermiSea, IntervalUnion, TorusVector};
use fermisea::spectrum::DEFAULT_ORDER_CAP;
use fermisea::util::geometric_grid;
use serde::Deserialize;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fermisea", version, about = "Entanglement entropy of free-fermion Fermi seas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimension, measure, and filling fraction of a sea (JSON).
    Measure(InfoArgs),
    /// Evaluate the shift defect |M \ (M+a)| at a given shift (JSON).
    Lambda(LambdaArgs),
    /// Classify each axis as relevant or irrelevant under the defect (JSON).
    Directions(DirectionsArgs),
    /// Diagonalize Q_L over a range of sides; emit entropy and bound rows.
    EntropyScan(ScanArgs),
    /// Evaluate only the closed-form and quadrature bounds (no eigensolve).
    BoundScan(ScanArgs),
    /// Build a sea realizing a growth target and verify it (JSON sea spec).
    Construct(ConstructArgs),
    /// Re-verify a constructed sea: minorant, entropy target, route agreement.
    Verify(VerifyArgs),
    /// Fit a scaling law to scan CSV output (JSON report).
    Fit(FitArgs),
}

/// How a sea arrives on the command line.
#[derive(Args, Clone, Default)]
struct SeaArgs {
    /// Sea spec file, or the literal `random` for a seeded random sea.
    #[arg(long)]
    sea: Option<String>,
    /// Inline JSON sea spec.
    #[arg(long, conflicts_with = "sea")]
    inline: Option<String>,
    /// Dimension for randomly generated seas.
    #[arg(long)]
    dim: Option<usize>,
    /// RNG seed for randomly generated seas.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone, Default)]
struct InfoArgs {
    #[command(flatten)]
    sea: SeaArgs,
    /// Config file with the same keys as the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LambdaArgs {
    #[command(flatten)]
    info: InfoArgs,
    /// Shift vector, comma separated, e.g. `0.3` or `0.3,1.2`.
    #[arg(long)]
    shift: String,
}

#[derive(Args)]
struct DirectionsArgs {
    #[command(flatten)]
    info: InfoArgs,
    /// Samples per axis on (0, pi].
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Relevance threshold on max Lambda along the axis.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    sea: SeaArgs,
    /// Cube sides: `N`, `a..b`, `a..b:step`, or `geom:a..b:n`.
    #[arg(long = "L")]
    l: Option<String>,
    /// Dense-eigensolver order cap (rows above it fail with a budget error).
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads; output bytes do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall-clock per row (breaks byte determinism).
    #[arg(long)]
    timings: bool,
    /// Config file with the same keys as the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Growth family of the target F_L.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Exponent for the power family: F_L = L^(1 - alpha), alpha in (0,1).
    #[arg(long)]
    alpha: Option<f64>,
    /// JSON file with table points [[L, F], ...] for the table family.
    #[arg(long)]
    table_file: Option<PathBuf>,
    /// Lift the constructed 1-d union to this dimension.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Coarsest ladder scale a0 (fraction of the circle is a0/2pi).
    #[arg(long)]
    base_scale: Option<f64>,
    /// Number of dyadic levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Safety factor multiplying the minorant h.
    #[arg(long)]
    safety: Option<f64>,
    #[arg(long)]
    l_min: Option<usize>,
    #[arg(long)]
    l_max: Option<usize>,
    /// Entropy demand margin for the interval provisioner.
    #[arg(long)]
    demand_margin: Option<f64>,
    /// Points in the default geometric verification grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Hard cap on the number of intervals.
    #[arg(long)]
    max_intervals: Option<usize>,
    /// Verification grid override, same forms as the scan `--L`.
    #[arg(long = "L")]
    l: Option<String>,
    /// Dense-eigensolver order cap during verification.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    sea: SeaArgs,
    /// Growth family; defaults to the spec's construction metadata.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    table_file: Option<PathBuf>,
    /// Safety factor; defaults to the spec metadata, then 4pi.
    #[arg(long)]
    safety: Option<f64>,
    /// Coarsest scale a0; defaults to the spec metadata, then 0.05.
    #[arg(long)]
    base_scale: Option<f64>,
    /// Verification grid, same forms as the scan `--L`.
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long)]
    cap: Option<usize>,
    /// Relative agreement required between the two bound routes.
    #[arg(long, default_value_t = 1e-6)]
    quad_tol: f64,
    /// Samples for the minorant check.
    #[arg(long, default_value_t = 768)]
    samples: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Scan CSV to fit (`-` for stdin).
    #[arg(long)]
    input: String,
    /// Scaling-law model.
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Column to fit against L.
    #[arg(long, value_enum, default_value_t = ColumnArg::EntropyNats)]
    column: ColumnArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Power,
    Log,
    Loglog,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    /// S = c ln L + b.
    LogLinear,
    /// S = c L^(d-1) ln L + b.
    SurfaceLog,
    /// S = A L^p.
    PowerLaw,
}

impl From<ModelArg> for FitModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::LogLinear => FitModel::LogLinear,
            ModelArg::SurfaceLog => FitModel::SurfaceLog,
            ModelArg::PowerLaw => FitModel::PowerLaw,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ColumnArg {
    EntropyNats,
    TraceBound,
    FhmExact,
    FhmQuadrature,
}

/// Optional config file carrying the same keys as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    sea: Option<String>,
    inline: Option<String>,
    dim: Option<usize>,
    seed: Option<u64>,
    #[serde(rename = "L")]
    l: Option<String>,
    quad_tol: Option<f64>,
    cap: Option<usize>,
    workers: Option<usize>,
    timings: Option<bool>,
    out: Option<String>,
    format: Option<FormatArg>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Lambda(a) => cmd_lambda(a),
        Command::Directions(a) => cmd_directions(a),
        Command::EntropyScan(a) => cmd_scan(a, true),
        Command::BoundScan(a) => cmd_scan(a, false),
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Fit(a) => cmd_fit(a),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile, CliError> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str(&text).map_err(|e| {
                SpecError::Invalid {
                    message: format!("config file {}: {e}", p.display()),
                }
                .into()
            })
        }
    }
}

/// Materializes the sea named by flags (or config fallback).
fn resolve_sea(args: &SeaArgs, cfg: &ConfigFile) -> Result<(SeaSpec, FermiSea), CliError> {
    let inline = args.inline.as_ref().or(cfg.inline.as_ref());
    let source = args.sea.as_ref().or(cfg.sea.as_ref());
    let dim = args.dim.or(cfg.dim).unwrap_or(1);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    if let Some(text) = inline {
        return Ok(load_sea(text)?);
    }
    match source {
        Some(s) if s == "random" => {
            let sea = random_product_sea(seed, dim, 4, 0.05);
            let spec = SeaSpec::from_fermi_sea(&sea, Some(serde_json::json!({ "seed": seed })));
            Ok((spec, sea))
        }
        Some(path) => {
            let text = fs::read_to_string(path)?;
            Ok(load_sea(&text)?)
        }
        None => Err(SpecError::Invalid {
            message: "no sea given: pass --sea FILE, --sea random, or --inline JSON".into(),
        }
        .into()),
    }
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn cmd_measure(args: InfoArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let (_, sea) = resolve_sea(&args.sea, &cfg)?;
    let d = sea.dim();
    let measure = sea.measure();
    let filling = measure / (2.0 * PI).powi(d as i32);
    write_json(
        &args.out,
        &serde_json::json!({ "dim": d, "measure": measure, "filling": filling }),
    )
}

fn parse_shift(input: &str) -> Result<Vec<f64>, CliError> {
    input
        .split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|e| {
                SpecError::Range {
                    input: input.into(),
                    reason: format!("bad shift component '{t}': {e}"),
                }
                .into()
            })
        })
        .collect()
}

fn cmd_lambda(args: LambdaArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.info.config)?;
    let (_, sea) = resolve_sea(&args.info.sea, &cfg)?;
    let shift = TorusVector::new(parse_shift(&args.shift)?).map_err(CliError::Sea)?;
    let overlap = sea.overlap(&shift)?;
    let lambda = sea.lambda_measure(&shift)?;
    write_json(
        &args.info.out,
        &serde_json::json!({
            "shift": shift.components(),
            "overlap": overlap,
            "lambda": lambda,
        }),
    )
}

fn cmd_directions(args: DirectionsArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.info.config)?;
    let (_, sea) = resolve_sea(&args.info.sea, &cfg)?;
    let reports = sea.classify_directions(args.samples, args.tol)?;
    let axes: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            serde_json::json!({
                "axis": r.axis,
                "max_lambda": r.max_lambda,
                "relevant": r.relevant,
            })
        })
        .collect();
    write_json(&args.info.out, &serde_json::json!({ "axes": axes }))
}

fn cmd_scan(args: ScanArgs, entropy: bool) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let (_, sea) = resolve_sea(&args.sea, &cfg)?;
    let range = args.l.as_ref().or(cfg.l.as_ref()).ok_or(SpecError::Invalid {
        message: "no sides given: pass --L".into(),
    })?;
    let run = RunConfig {
        l_values: parse_l_range(range)?,
        cap: args.cap.or(cfg.cap).unwrap_or(DEFAULT_ORDER_CAP),
        workers: args.workers.or(cfg.workers).unwrap_or(1),
        timings: args.timings || cfg.timings.unwrap_or(false),
        entropy,
        quadrature: true,
        plan: QuadraturePlan::default(),
    };
    let rows = fermisea::cli::run_entropy_scan(&sea, &run)?;
    let format = args.format.or(cfg.format).map(OutputFormat::from).unwrap_or(OutputFormat::Csv);
    let out = args.out.clone().or(cfg.out.as_ref().map(PathBuf::from));
    let mut w = open_out(&out)?;
    emit_results(&rows, format, &mut w)?;
    Ok(())
}

fn read_table_points(path: &PathBuf) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path)?;
    let raw: Vec<(f64, f64)> = serde_json::from_str(&text).map_err(|e| SpecError::Invalid {
        message: format!("table file {}: {e}", path.display()),
    })?;
    Ok(raw)
}

fn build_family(
    family: FamilyArg,
    alpha: Option<f64>,
    table_file: &Option<PathBuf>,
) -> Result<GrowthFamily, CliError> {
    match family {
        FamilyArg::Power => {
            let alpha = alpha.ok_or(SpecError::Invalid {
                message: "power family needs --alpha".into(),
            })?;
            Ok(GrowthFamily::Power { alpha })
        }
        FamilyArg::Log => Ok(GrowthFamily::Log),
        FamilyArg::Loglog => Ok(GrowthFamily::LogLog),
        FamilyArg::Table => {
            let path = table_file.as_ref().ok_or(SpecError::Invalid {
                message: "table family needs --table-file".into(),
            })?;
            Ok(GrowthFamily::Table {
                points: read_table_points(path)?,
            })
        }
    }
}

fn ladder_config(args: &ConstructArgs) -> LadderConfig {
    let mut cfg = LadderConfig::default();
    if let Some(v) = args.base_scale {
        cfg.base_scale = v;
    }
    if let Some(v) = args.levels {
        cfg.levels = v;
    }
    if let Some(v) = args.safety {
        cfg.safety = v;
    }
    if let Some(v) = args.l_min {
        cfg.l_min = v;
    }
    if let Some(v) = args.l_max {
        cfg.l_max = v;
    }
    if let Some(v) = args.demand_margin {
        cfg.demand_margin = v;
    }
    if let Some(v) = args.grid_points {
        cfg.grid_points = v;
    }
    if let Some(v) = args.max_intervals {
        cfg.max_intervals = v;
    }
    cfg
}

/// Serializable description of a growth family, embedded in sea metadata.
fn family_json(family: &GrowthFamily) -> serde_json::Value {
    match family {
        GrowthFamily::Power { alpha } => serde_json::json!({ "family": "power", "alpha": alpha }),
        GrowthFamily::Log => serde_json::json!({ "family": "log" }),
        GrowthFamily::LogLog => serde_json::json!({ "family": "loglog" }),
        GrowthFamily::Table { points } => {
            serde_json::json!({ "family": "table", "points": points })
        }
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliError> {
    let family = build_family(args.family, args.alpha, &args.table_file)?;
    let profile = GrowthProfile::new(family.clone())?;
    let config = ladder_config(&args);
    let grid = match &args.l {
        Some(expr) => parse_l_range(expr)?,
        None => geometric_grid(config.l_min, config.l_max, config.grid_points),
    };
    let cap = args.cap.unwrap_or(DEFAULT_ORDER_CAP);
    let built = construct_verified(&profile, &config, &grid, cap)?;
    let union = &built.sea.union;
    let sea = if args.dim > 1 {
        lift_to_dimension(union, args.dim)
    } else {
        FermiSea::Union(union.clone())
    };
    let scales = &built.sea.ladder.scales;
    let rows: Vec<serde_json::Value> = built
        .verification
        .rows
        .iter()
        .map(|r| serde_json::json!([r.l, r.entropy_nats, r.target]))
        .collect();
    let metadata = serde_json::json!({
        "target": family_json(&family),
        "label": family.label(),
        "safety": built.sea.safety,
        "safety_doubled": built.safety_doubled,
        "base_scale": built.sea.base_scale,
        "K": scales.len(),
        "verified_range": [scales.last().copied().unwrap_or(0.0), scales.first().copied().unwrap_or(0.0)],
        "counts": built.sea.ladder.counts,
        "intervals": built.sea.ladder.total_intervals(),
        "minorant_worst_margin": built.sea.minorant.worst_margin,
        "l_star": built.verification.l_star,
        "rows": rows,
    });
    let spec = SeaSpec::from_fermi_sea(&sea, Some(metadata));
    write_json(&args.out, &serde_json::to_value(&spec).map_err(std::io::Error::from)?)
}

/// Pulls the growth family out of construction metadata.
fn family_from_metadata(meta: &serde_json::Value) -> Option<GrowthFamily> {
    let target = meta.get("target")?;
    match target.get("family")?.as_str()? {
        "power" => Some(GrowthFamily::Power {
            alpha: target.get("alpha")?.as_f64()?,
        }),
        "log" => Some(GrowthFamily::Log),
        "loglog" => Some(GrowthFamily::LogLog),
        "table" => {
            let points: Vec<(f64, f64)> =
                serde_json::from_value(target.get("points")?.clone()).ok()?;
            Some(GrowthFamily::Table { points })
        }
        _ => None,
    }
}

/// The 1-d union factor of a constructed sea (the non-full axis of a lift).
fn construction_union(sea: &FermiSea) -> Result<IntervalUnion, CliError> {
    const FULL: f64 = 2.0 * PI - 1e-12;
    match sea {
        FermiSea::Union(u) => Ok(u.clone()),
        FermiSea::Product(axes) => {
            let partial: Vec<&IntervalUnion> =
                axes.iter().filter(|u| u.measure() < FULL).collect();
            match partial.as_slice() {
                [one] => Ok((*one).clone()),
                [] => Err(SpecError::Invalid {
                    message: "every axis is the full circle; nothing to verify".into(),
                }
                .into()),
                _ => Err(SpecError::Invalid {
                    message: "ambiguous construction: several axes are partial".into(),
                }
                .into()),
            }
        }
        FermiSea::Grid(_) => Err(SpecError::Invalid {
            message: "verify needs an interval-union construction, not a grid".into(),
        }
        .into()),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let (spec, sea) = resolve_sea(&args.sea, &cfg)?;
    let meta = spec.metadata().cloned().unwrap_or(serde_json::Value::Null);

    let family = match args.family {
        Some(f) => build_family(f, args.alpha, &args.table_file)?,
        None => family_from_metadata(&meta).ok_or(SpecError::Invalid {
            message: "no growth target: pass --family or a spec with construction metadata".into(),
        })?,
    };
    let profile = GrowthProfile::new(family)?;
    let meta_f64 = |key: &str| meta.get(key).and_then(|v| v.as_f64());
    let safety = args.safety.or(meta_f64("safety")).unwrap_or(4.0 * PI);
    let base_scale = args.base_scale.or(meta_f64("base_scale")).unwrap_or(0.05);
    let union = construction_union(&sea)?;

    let minorant = verify_lambda_minorant(&union, &profile, safety, base_scale, args.samples);

    let grid = match args.l.as_ref().or(cfg.l.as_ref()) {
        Some(expr) => parse_l_range(expr)?,
        None => geometric_grid(8, 512, 13),
    };
    let cap = args.cap.or(cfg.cap).unwrap_or(DEFAULT_ORDER_CAP);
    let verification = verify_entropy_target(&sea, &profile, &grid, cap)?;

    // Route agreement: both bound evaluations must coincide where defined.
    let quad_tol = args.quad_tol.max(cfg.quad_tol.unwrap_or(0.0));
    let plan = QuadraturePlan::default();
    let mut max_gap: f64 = 0.0;
    let mut routes_checked = 0usize;
    for &l in &grid {
        let exact = fhm_bound_exact(&sea, l)?;
        match fhm_bound_quadrature(&sea, l, &plan) {
            Ok(quad) => {
                max_gap = max_gap.max((exact - quad).abs() / exact.abs().max(1e-30));
                routes_checked += 1;
            }
            Err(BoundsError::UnsupportedSea { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let routes_ok = routes_checked == 0 || max_gap <= quad_tol;

    let ok = minorant.ok && verification.l_star.is_some() && routes_ok;
    let rows: Vec<serde_json::Value> = verification
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "L": r.l,
                "entropy_nats": r.entropy_nats,
                "target": r.target,
            })
        })
        .collect();
    let report = serde_json::json!({
        "ok": ok,
        "minorant": {
            "ok": minorant.ok,
            "worst_margin": minorant.worst_margin,
            "worst_a": minorant.worst_a,
            "samples": minorant.samples,
        },
        "entropy": { "l_star": verification.l_star, "rows": rows },
        "routes": { "checked": routes_checked, "max_rel_gap": max_gap, "tol": quad_tol },
    });
    write_json(&args.out, &report)?;
    if !ok {
        let what = if !minorant.ok {
            "lambda minorant"
        } else if verification.l_star.is_none() {
            "entropy target"
        } else {
            "route agreement"
        };
        return Err(ConstructorError::VerificationFailed {
            what: what.into(),
            detail: format!(
                "minorant ok: {}, l_star: {:?}, max route gap: {max_gap:.3e}",
                minorant.ok, verification.l_star
            ),
        }
        .into());
    }
    Ok(())
}

fn model_label(model: FitModel) -> &'static str {
    match model {
        FitModel::LogLinear => "log_linear",
        FitModel::SurfaceLog => "surface_log",
        FitModel::PowerLaw => "power_law",
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let text = if args.input == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        fs::read_to_string(&args.input)?
    };
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != CSV_HEADER {
        return Err(SpecError::Invalid {
            message: format!("unexpected CSV header '{header}'"),
        }
        .into());
    }
    let column = match args.column {
        ColumnArg::EntropyNats => 2,
        ColumnArg::TraceBound => 3,
        ColumnArg::FhmExact => 4,
        ColumnArg::FhmQuadrature => 5,
    };
    let mut points: Vec<(usize, f64)> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(SpecError::Invalid {
                message: format!("row {} has {} fields, expected 7", i + 2, fields.len()),
            }
            .into());
        }
        let bad = |what: &str| SpecError::Invalid {
            message: format!("row {}: bad {what}", i + 2),
        };
        let l: usize = fields[0].parse().map_err(|_| bad("L"))?;
        let dim: usize = fields[1].parse().map_err(|_| bad("dim"))?;
        dims.push(dim);
        if fields[column].is_empty() {
            continue;
        }
        let value: f64 = fields[column].parse().map_err(|_| bad("value"))?;
        points.push((l, value));
    }
    dims.dedup();
    if dims.len() > 1 {
        return Err(SpecError::Invalid {
            message: "rows mix dimensions; fit them separately".into(),
        }
        .into());
    }
    let dim = dims.first().copied().unwrap_or(1);
    let report = fit_scaling(&points, dim, args.model.into())?;
    write_json(
        &args.out,
        &serde_json::json!({
            "model": model_label(report.model),
            "coefficient": report.coefficient,
            "offset": report.offset,
            "rms_residual": report.rms_residual,
            "points": report.points,
            "dim": dim,
        }),
    )
}

// Silence a false unused warning: ScanRow is used through emit_results.
#[allow(dead_code)]
fn _types(_: &ScanRow) {}
