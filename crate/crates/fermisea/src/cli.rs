//! Scan orchestration and serialization behind the command-line interface.
//!
//! Seas travel as JSON documents tagged by `type`; scans run over a list of
//! cube sides on a dedicated thread pool and emit rows in a fixed column
//! order, byte-deterministic unless timings are requested.

use crate::bounds::{fhm_bound_exact, fhm_bound_quadrature, BoundsError, QuadraturePlan};
use crate::constructor::ConstructorError;
use crate::fermi_sea::{FermiSea, FermiSeaError, GridSea, IntervalUnion};
use crate::spectrum::{entropy_of_state, SpectrumError, DEFAULT_ORDER_CAP};
use crate::symbol::{build_restricted, coefficient_table, SymbolError};
use crate::util::geometric_grid;
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;
use thiserror::Error;

/// Column order of every tabular emission.
pub const CSV_HEADER: &str = "L,dim,entropy_nats,trace_bound,fhm_exact,fhm_quadrature,runtime_ms";

/// Cell payloads up to this many cells serialize as a plain 0/1 string;
/// larger grids switch to base64-packed bits.
pub const CELLS_STRING_LIMIT: usize = 4096;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("sea spec parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid sea spec: {message}")]
    Invalid { message: String },
    #[error("invalid range expression '{input}': {reason}")]
    Range { input: String, reason: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Sea(#[from] FermiSeaError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Constructor(#[from] ConstructorError),
    #[error("fit is degenerate: {reason}")]
    Fit { reason: String },
    #[error("thread pool construction failed: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Process exit code for an error, per the contract: 2 malformed input,
/// 3 numeric failure, 4 resource budget exceeded, 5 verification failed,
/// 1 anything else.
pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Spec(_) | CliError::Fit { .. } => 2,
        CliError::Sea(_) => 2,
        CliError::Symbol(_) => 3,
        CliError::Spectrum(SpectrumError::DimensionCap { .. }) => 4,
        CliError::Spectrum(_) => 3,
        CliError::Bounds(BoundsError::UnsupportedSea { .. })
        | CliError::Bounds(BoundsError::BadQuadratureSpec { .. })
        | CliError::Bounds(BoundsError::EmptyCube) => 2,
        CliError::Bounds(_) => 3,
        CliError::Constructor(e) => match e {
            ConstructorError::NotSubVolume { .. } | ConstructorError::BadConfig { .. } => 2,
            ConstructorError::BudgetExceeded { .. } | ConstructorError::SpanExceeded { .. } => 4,
            ConstructorError::VerificationFailed { .. } => 5,
            ConstructorError::Spectrum(SpectrumError::DimensionCap { .. }) => 4,
            _ => 3,
        },
        CliError::Pool(_) | CliError::Io(_) => 1,
    }
}

/// Grid cells as either a 0/1 string or base64-packed bits, LSB first.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CellsSpec {
    Bits(String),
    Packed { packed: String, len: usize },
}

impl CellsSpec {
    pub fn encode(cells: &[bool]) -> Self {
        if cells.len() <= CELLS_STRING_LIMIT {
            CellsSpec::Bits(cells.iter().map(|&b| if b { '1' } else { '0' }).collect())
        } else {
            let mut bytes = vec![0u8; cells.len().div_ceil(8)];
            for (i, &b) in cells.iter().enumerate() {
                if b {
                    bytes[i / 8] |= 1 << (i % 8);
                }
            }
            CellsSpec::Packed {
                packed: BASE64.encode(&bytes),
                len: cells.len(),
            }
        }
    }

    pub fn decode(&self) -> Result<Vec<bool>, SpecError> {
        match self {
            CellsSpec::Bits(s) => s
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(SpecError::Invalid {
                        message: format!("cell character '{other}' is not 0 or 1"),
                    }),
                })
                .collect(),
            CellsSpec::Packed { packed, len } => {
                let bytes = BASE64.decode(packed).map_err(|e| SpecError::Invalid {
                    message: format!("cells payload is not valid base64: {e}"),
                })?;
                if bytes.len() != len.div_ceil(8) {
                    return Err(SpecError::Invalid {
                        message: format!(
                            "packed cells carry {} bytes but len = {} needs {}",
                            bytes.len(),
                            len,
                            len.div_ceil(8)
                        ),
                    });
                }
                Ok((0..*len).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect())
            }
        }
    }
}

fn default_snap() -> bool {
    true
}

/// JSON wire form of a Fermi sea.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SeaSpec {
    Union {
        intervals: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metadata: Option<serde_json::Value>,
    },
    Product {
        axes: Vec<Vec<(f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metadata: Option<serde_json::Value>,
    },
    Grid {
        dim: usize,
        resolution: usize,
        cells: CellsSpec,
        #[serde(default = "default_snap")]
        snap: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metadata: Option<serde_json::Value>,
    },
}

impl SeaSpec {
    /// Validates and materializes the sea.
    pub fn to_fermi_sea(&self) -> Result<FermiSea, SpecError> {
        let invalid = |e: FermiSeaError| SpecError::Invalid {
            message: e.to_string(),
        };
        match self {
            SeaSpec::Union { intervals, .. } => Ok(FermiSea::Union(
                IntervalUnion::new(intervals).map_err(invalid)?,
            )),
            SeaSpec::Product { axes, .. } => {
                if axes.is_empty() {
                    return Err(SpecError::Invalid {
                        message: "product sea needs at least one axis".into(),
                    });
                }
                Ok(FermiSea::Product(
                    axes.iter()
                        .map(|pairs| IntervalUnion::new(pairs).map_err(invalid))
                        .collect::<Result<Vec<_>, _>>()?,
                ))
            }
            SeaSpec::Grid {
                dim,
                resolution,
                cells,
                snap,
                ..
            } => Ok(FermiSea::Grid(
                GridSea::new(*dim, *resolution, cells.decode()?, *snap).map_err(invalid)?,
            )),
        }
    }

    /// Wire form of an existing sea, carrying optional metadata.
    pub fn from_fermi_sea(sea: &FermiSea, metadata: Option<serde_json::Value>) -> Self {
        let pairs =
            |u: &IntervalUnion| u.intervals().iter().map(|iv| (iv.lo(), iv.hi())).collect();
        match sea {
            FermiSea::Union(u) => SeaSpec::Union {
                intervals: pairs(u),
                metadata,
            },
            FermiSea::Product(fs) => SeaSpec::Product {
                axes: fs.iter().map(pairs).collect(),
                metadata,
            },
            FermiSea::Grid(g) => SeaSpec::Grid {
                dim: g.dim(),
                resolution: g.resolution(),
                cells: CellsSpec::encode(g.cells()),
                snap: g.snap_enabled(),
                metadata,
            },
        }
    }

    pub fn metadata(&self) -> Option<&serde_json::Value> {
        match self {
            SeaSpec::Union { metadata, .. }
            | SeaSpec::Product { metadata, .. }
            | SeaSpec::Grid { metadata, .. } => metadata.as_ref(),
        }
    }
}

/// Parses a sea spec document, reporting the position of syntax errors.
pub fn parse_sea_spec(text: &str) -> Result<SeaSpec, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and materializes in one step.
pub fn load_sea(text: &str) -> Result<(SeaSpec, FermiSea), SpecError> {
    let spec = parse_sea_spec(text)?;
    let sea = spec.to_fermi_sea()?;
    Ok((spec, sea))
}

/// Parses a cube-side expression: `N`, `a..b`, `a..b:step`, or
/// `geom:a..b:n` for n geometrically spaced sides.
pub fn parse_l_range(input: &str) -> Result<Vec<usize>, SpecError> {
    let fail = |reason: &str| SpecError::Range {
        input: input.into(),
        reason: reason.into(),
    };
    let num = |s: &str, what: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| fail(&format!("{what} '{s}' is not a positive integer")))
    };
    let values = if let Some(rest) = input.strip_prefix("geom:") {
        let (range, n_str) = rest
            .rsplit_once(':')
            .ok_or_else(|| fail("geometric form is geom:a..b:n"))?;
        let (a_str, b_str) = range
            .split_once("..")
            .ok_or_else(|| fail("geometric form is geom:a..b:n"))?;
        let (a, b, n) = (num(a_str, "start")?, num(b_str, "end")?, num(n_str, "count")?);
        if a < 1 || b < a {
            return Err(fail("need 1 <= a <= b"));
        }
        if n < 2 {
            return Err(fail("geometric grid needs at least 2 points"));
        }
        geometric_grid(a, b, n)
    } else if let Some((a_str, rest)) = input.split_once("..") {
        let (b_str, step) = match rest.split_once(':') {
            Some((b_str, s_str)) => (b_str, num(s_str, "step")?),
            None => (rest, 1),
        };
        let (a, b) = (num(a_str, "start")?, num(b_str, "end")?);
        if a < 1 || b < a {
            return Err(fail("need 1 <= a <= b"));
        }
        if step < 1 {
            return Err(fail("step must be at least 1"));
        }
        (a..=b).step_by(step).collect()
    } else {
        vec![num(input, "value")?]
    };
    if values.is_empty() {
        return Err(fail("expression yields no sides"));
    }
    if values.len() > 65536 {
        return Err(fail("expression yields more than 65536 sides"));
    }
    if values[0] < 1 {
        return Err(fail("sides must be at least 1"));
    }
    Ok(values)
}

/// What a scan computes for each side.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub l_values: Vec<usize>,
    /// Dense-eigensolver order cap.
    pub cap: usize,
    /// Worker threads for the per-call pool.
    pub workers: usize,
    /// Report wall-clock per row; off by default to keep output
    /// byte-deterministic.
    pub timings: bool,
    /// Diagonalize and report entropy_nats and trace_bound.
    pub entropy: bool,
    /// Evaluate the quadrature route where the sea supports it.
    pub quadrature: bool,
    pub plan: QuadraturePlan,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            l_values: vec![],
            cap: DEFAULT_ORDER_CAP,
            workers: 1,
            timings: false,
            entropy: true,
            quadrature: true,
            plan: QuadraturePlan::default(),
        }
    }
}

/// One emitted row. Optional fields print empty in CSV and null in JSON.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScanRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub dim: usize,
    pub entropy_nats: Option<f64>,
    pub trace_bound: Option<f64>,
    pub fhm_exact: Option<f64>,
    pub fhm_quadrature: Option<f64>,
    pub runtime_ms: u64,
}

fn scan_one(sea: &FermiSea, l: usize, config: &RunConfig) -> Result<ScanRow, CliError> {
    let start = Instant::now();
    let mut row = ScanRow {
        l,
        dim: sea.dim(),
        entropy_nats: None,
        trace_bound: None,
        fhm_exact: None,
        fhm_quadrature: None,
        runtime_ms: 0,
    };
    row.fhm_exact = Some(fhm_bound_exact(sea, l)?);
    if config.entropy {
        let table = coefficient_table(sea, l)?;
        let rs = build_restricted(&table, l)?;
        let record = entropy_of_state(&rs, config.cap)?;
        row.entropy_nats = Some(record.entropy_nats);
        row.trace_bound = Some(record.trace_bound);
    }
    if config.quadrature {
        match fhm_bound_quadrature(sea, l, &config.plan) {
            Ok(v) => row.fhm_quadrature = Some(v),
            Err(BoundsError::UnsupportedSea { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if config.timings {
        row.runtime_ms = start.elapsed().as_millis() as u64;
    }
    Ok(row)
}

/// Runs the scan on a dedicated pool of `workers` threads. Rows come back
/// in input order regardless of scheduling, so output is deterministic.
pub fn run_entropy_scan(sea: &FermiSea, config: &RunConfig) -> Result<Vec<ScanRow>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| {
        config
            .l_values
            .par_iter()
            .map(|&l| scan_one(sea, l, config))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

fn csv_float(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// Writes rows in the fixed column order.
pub fn emit_results(
    rows: &[ScanRow],
    format: OutputFormat,
    out: &mut impl Write,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.l,
                    r.dim,
                    csv_float(r.entropy_nats),
                    csv_float(r.trace_bound),
                    csv_float(r.fhm_exact),
                    csv_float(r.fhm_quadrature),
                    r.runtime_ms
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &serde_json::json!({ "rows": rows }))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Scaling laws the fitter knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// S = c ln L + b.
    LogLinear,
    /// S = c L^(d-1) ln L + b; equals LogLinear when d = 1.
    SurfaceLog,
    /// S = A L^p, fitted as ln S = p ln L + ln A.
    PowerLaw,
}

/// Least-squares fit summary.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: FitModel,
    /// Slope: c for the linear models, the exponent p for PowerLaw.
    pub coefficient: f64,
    /// Intercept: b, or ln A for PowerLaw.
    pub offset: f64,
    pub rms_residual: f64,
    pub points: usize,
}

/// Fits one scaling model to (L, value) samples by least squares.
pub fn fit_scaling(
    points: &[(usize, f64)],
    dim: usize,
    model: FitModel,
) -> Result<FitReport, CliError> {
    let degenerate = |reason: &str| CliError::Fit {
        reason: reason.into(),
    };
    if dim == 0 {
        return Err(degenerate("dimension must be at least 1"));
    }
    let mut xy = Vec::with_capacity(points.len());
    for &(l, v) in points {
        if l < 1 || !v.is_finite() {
            return Err(degenerate("samples must have L >= 1 and finite values"));
        }
        let lf = l as f64;
        let pair = match model {
            FitModel::LogLinear => (lf.ln(), v),
            FitModel::SurfaceLog => (lf.powi(dim as i32 - 1) * lf.ln(), v),
            FitModel::PowerLaw => {
                if v <= 0.0 {
                    return Err(degenerate("power-law fit needs positive values"));
                }
                (lf.ln(), v.ln())
            }
        };
        xy.push(pair);
    }
    if xy.len() < 2 {
        return Err(degenerate("need at least two samples"));
    }
    let n = xy.len() as f64;
    let xbar = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    if sxx < 1e-18 {
        return Err(degenerate("feature values are all identical"));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    let coefficient = sxy / sxx;
    let offset = ybar - coefficient * xbar;
    let rms = (xy
        .iter()
        .map(|p| (p.1 - coefficient * p.0 - offset).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitReport {
        model,
        coefficient,
        offset,
        rms_residual: rms,
        points: xy.len(),
    })
}
