//! Python bindings: a thin `Sea` class over the JSON spec format plus
//! module-level helpers mirroring the CLI (`construct_sea`, `fejer_kernel`,
//! `binary_entropy`).  Scans return lists of dicts with the same fields as
//! the CSV columns; optional values come back as `None`.

use fermisea::bounds::{self, QuadraturePlan};
use fermisea::cli::{self, CliError, RunConfig, SeaSpec};
use fermisea::constructor::{
    construct_verified, lift_to_dimension, GrowthFamily, GrowthProfile, LadderConfig,
};
use fermisea::corpus::random_product_sea;
use fermisea::fermi_sea::{FermiSea, TorusVector};
use fermisea::spectrum::{self, DEFAULT_ORDER_CAP};
use fermisea::symbol::{build_restricted, coefficient_table};
use fermisea::util::geometric_grid;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use std::f64::consts::PI;

/// Input-shaped errors become ValueError; numeric and budget failures
/// become RuntimeError, matching the CLI's 2-vs-3/4/5 split.
fn to_py_err(e: CliError) -> PyErr {
    match cli::exit_code(&e) {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A Fermi sea handle constructed from a JSON spec document.
#[pyclass(name = "Sea", frozen)]
struct PySea {
    sea: FermiSea,
}

impl PySea {
    fn shift(&self, components: Vec<f64>) -> PyResult<TorusVector> {
        TorusVector::new(components)
            .map_err(|e| to_py_err(CliError::Sea(e)))
    }

    fn restricted(&self, l: usize) -> PyResult<fermisea::symbol::RestrictedSymbol> {
        let table = coefficient_table(&self.sea, l).map_err(|e| to_py_err(e.into()))?;
        build_restricted(&table, l).map_err(|e| to_py_err(e.into()))
    }
}

#[pymethods]
impl PySea {
    #[new]
    fn new(spec_json: &str) -> PyResult<Self> {
        let (_, sea) = cli::load_sea(spec_json).map_err(|e| to_py_err(e.into()))?;
        Ok(Self { sea })
    }

    /// Seeded random product sea, the same corpus the CLI's `--sea random`
    /// draws from.
    #[staticmethod]
    #[pyo3(signature = (seed, dim = 1))]
    fn random(seed: u64, dim: usize) -> Self {
        Self {
            sea: random_product_sea(seed, dim, 4, 0.05),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.sea.dim()
    }

    #[getter]
    fn measure(&self) -> f64 {
        self.sea.measure()
    }

    /// |M| / (2 pi)^d.
    #[getter]
    fn filling(&self) -> f64 {
        self.sea.measure() / (2.0 * PI).powi(self.sea.dim() as i32)
    }

    /// |M intersect (M + a)|.
    fn overlap(&self, shift: Vec<f64>) -> PyResult<f64> {
        self.sea
            .overlap(&self.shift(shift)?)
            .map_err(|e| to_py_err(CliError::Sea(e)))
    }

    /// Defect |M \ (M + a)|.
    fn lambda_measure(&self, shift: Vec<f64>) -> PyResult<f64> {
        self.sea
            .lambda_measure(&self.shift(shift)?)
            .map_err(|e| to_py_err(CliError::Sea(e)))
    }

    /// Entanglement entropy S_L in nats via dense diagonalization.
    #[pyo3(signature = (l, cap = DEFAULT_ORDER_CAP))]
    fn entropy(&self, l: usize, cap: usize) -> PyResult<f64> {
        let rs = self.restricted(l)?;
        spectrum::entropy_of_state(&rs, cap)
            .map(|r| r.entropy_nats)
            .map_err(|e| to_py_err(e.into()))
    }

    /// Tr Q_L (1 - Q_L) computed from matrix entries.
    fn trace_bound(&self, l: usize) -> PyResult<f64> {
        Ok(spectrum::trace_purity_bound(&self.restricted(l)?))
    }

    /// Tr Q_L (1 - Q_L) from the closed-form coefficient sum.
    fn fhm_exact(&self, l: usize) -> PyResult<f64> {
        bounds::fhm_bound_exact(&self.sea, l).map_err(|e| to_py_err(e.into()))
    }

    /// Same trace via the Fejér-kernel integral; None when the sea has no
    /// quadrature route.
    fn fhm_quadrature(&self, l: usize) -> PyResult<Option<f64>> {
        match bounds::fhm_bound_quadrature(&self.sea, l, &QuadraturePlan::default()) {
            Ok(v) => Ok(Some(v)),
            Err(bounds::BoundsError::UnsupportedSea { .. }) => Ok(None),
            Err(e) => Err(to_py_err(e.into())),
        }
    }

    /// Scan several sides; returns a list of dicts matching the CSV columns.
    #[pyo3(signature = (l_values, entropy = true, cap = DEFAULT_ORDER_CAP, workers = 1))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        l_values: Vec<usize>,
        entropy: bool,
        cap: usize,
        workers: usize,
    ) -> PyResult<Bound<'py, PyList>> {
        let config = RunConfig {
            l_values,
            cap,
            workers,
            entropy,
            ..RunConfig::default()
        };
        let rows = cli::run_entropy_scan(&self.sea, &config).map_err(to_py_err)?;
        let out = PyList::empty_bound(py);
        for r in rows {
            let d = PyDict::new_bound(py);
            d.set_item("L", r.l)?;
            d.set_item("dim", r.dim)?;
            d.set_item("entropy_nats", r.entropy_nats)?;
            d.set_item("trace_bound", r.trace_bound)?;
            d.set_item("fhm_exact", r.fhm_exact)?;
            d.set_item("fhm_quadrature", r.fhm_quadrature)?;
            d.set_item("runtime_ms", r.runtime_ms)?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// The sea as a JSON spec document.
    fn to_json(&self) -> PyResult<String> {
        let spec = SeaSpec::from_fermi_sea(&self.sea, None);
        serde_json_string(&spec)
    }

    fn __repr__(&self) -> String {
        format!(
            "Sea(dim={}, measure={:.6}, filling={:.6})",
            self.sea.dim(),
            self.sea.measure(),
            self.filling()
        )
    }
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Builds a sea realizing the growth target F_L and verifies it; returns
/// the spec JSON with construction metadata (counts, L*, margins).
#[pyfunction]
#[pyo3(signature = (family, alpha = None, points = None, dim = 1, l_grid = None, cap = DEFAULT_ORDER_CAP))]
fn construct_sea(
    family: &str,
    alpha: Option<f64>,
    points: Option<Vec<(f64, f64)>>,
    dim: usize,
    l_grid: Option<Vec<usize>>,
    cap: usize,
) -> PyResult<String> {
    let family = match (family, alpha, points) {
        ("power", Some(alpha), _) => GrowthFamily::Power { alpha },
        ("power", None, _) => {
            return Err(PyValueError::new_err("power family needs alpha"));
        }
        ("log", _, _) => GrowthFamily::Log,
        ("loglog", _, _) => GrowthFamily::LogLog,
        ("table", _, Some(points)) => GrowthFamily::Table { points },
        ("table", _, None) => {
            return Err(PyValueError::new_err("table family needs points"));
        }
        (other, _, _) => {
            return Err(PyValueError::new_err(format!(
                "unknown family '{other}': expected power, log, loglog, or table"
            )));
        }
    };
    let profile = GrowthProfile::new(family).map_err(|e| to_py_err(e.into()))?;
    let config = LadderConfig::default();
    let grid =
        l_grid.unwrap_or_else(|| geometric_grid(config.l_min, config.l_max, config.grid_points));
    let built = construct_verified(&profile, &config, &grid, cap).map_err(|e| to_py_err(e.into()))?;
    let sea = if dim > 1 {
        lift_to_dimension(&built.sea.union, dim)
    } else {
        FermiSea::Union(built.sea.union.clone())
    };
    let metadata = serde_json::json!({
        "safety": built.sea.safety,
        "safety_doubled": built.safety_doubled,
        "base_scale": built.sea.base_scale,
        "counts": built.sea.ladder.counts,
        "intervals": built.sea.ladder.total_intervals(),
        "minorant_worst_margin": built.sea.minorant.worst_margin,
        "l_star": built.verification.l_star,
    });
    serde_json_string(&SeaSpec::from_fermi_sea(&sea, Some(metadata)))
}

/// eta(x) = -x ln x - (1 - x) ln(1 - x), in nats.
#[pyfunction]
fn binary_entropy(x: f64) -> PyResult<f64> {
    spectrum::binary_entropy_eta(x, 1e-12).map_err(|e| to_py_err(e.into()))
}

/// Fejér kernel k_L(a) = sin^2(L a / 2) / sin^2(a / 2).
#[pyfunction]
fn fejer_kernel(l: usize, a: f64) -> f64 {
    bounds::fejer_kernel(l, a)
}

#[pymodule]
fn fermisea_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySea>()?;
    m.add_function(wrap_pyfunction!(construct_sea, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(fejer_kernel, m)?)?;
    m.add("CSV_HEADER", cli::CSV_HEADER)?;
    Ok(())
}
