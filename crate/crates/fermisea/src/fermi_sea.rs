//! Fermi seas on the d-torus and their translation geometry.
//!
//! A sea M is a measurable subset of [-pi, pi)^d. The central quantity is the
//! translation defect
//!
//!   Lambda_M(a) = |M \ (M + a)| = |M| - |M intersect (M + a)|,
//!
//! which is symmetric in a, subadditive along rays, and vanishes identically
//! in directions along which M is translation invariant.

use crate::util::{wrap_angle, TWO_PI};
use std::f64::consts::PI;
use thiserror::Error;

/// Absolute tolerance for angle comparisons (merging, overlap detection).
pub const TOL_ANGLE: f64 = 1e-12;

/// Absolute tolerance below which a translation defect counts as zero.
pub const TOL_DEGENERATE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FermiSeaError {
    #[error("interval [{lo}, {hi}] is invalid: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: String },
    #[error("intervals overlap on [{lo:.12}, {hi:.12}]")]
    OverlappingIntervals { lo: f64, hi: f64 },
    #[error("dimension mismatch: sea has dimension {expected}, argument has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("translation component {offset:.3e} on axis {axis} is not a grid cell multiple and snapping is disabled")]
    GridSnap { axis: usize, offset: f64 },
    #[error("grid cells payload has length {got}, expected {expected}")]
    BadGridCells { expected: usize, got: usize },
    #[error("grid resolution and dimension must be at least 1")]
    BadGridShape,
    #[error("direction vector has norm {norm:.6}, expected a unit vector")]
    NotUnitVector { norm: f64 },
    #[error("probe grid must be sorted, strictly positive, and non-empty")]
    BadProbeGrid,
    #[error("non-finite angular value encountered")]
    NonFinite,
}

/// Point on the d-torus with components canonicalized to [-pi, pi).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusVector {
    components: Vec<f64>,
}

impl TorusVector {
    /// Canonicalizes each component into [-pi, pi).
    pub fn new(components: Vec<f64>) -> Result<Self, FermiSeaError> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(FermiSeaError::NonFinite);
        }
        Ok(Self {
            components: components.into_iter().map(wrap_angle).collect(),
        })
    }

    /// One-dimensional convenience constructor.
    pub fn scalar(a: f64) -> Result<Self, FermiSeaError> {
        Self::new(vec![a])
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }
}

/// Half-open arc [lo, hi) stored on the canonical branch, never crossing the
/// seam: -pi <= lo < hi <= pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Builds an already-normalized piece; rejects empty or seam-crossing input.
    pub fn new(lo: f64, hi: f64) -> Result<Self, FermiSeaError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(FermiSeaError::NonFinite);
        }
        if !(-PI..PI).contains(&lo) || hi <= lo || hi > PI {
            return Err(FermiSeaError::InvalidInterval {
                lo,
                hi,
                reason: "expected -pi <= lo < hi <= pi".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Splits a raw arc of length `hi - lo` in (0, 2pi] into canonical pieces.
    fn split_raw(lo: f64, hi: f64) -> Result<Vec<Interval>, FermiSeaError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(FermiSeaError::NonFinite);
        }
        let len = hi - lo;
        if len <= 0.0 || len > TWO_PI + TOL_ANGLE {
            return Err(FermiSeaError::InvalidInterval {
                lo,
                hi,
                reason: "length must satisfy 0 < hi - lo <= 2 pi".into(),
            });
        }
        let len = len.min(TWO_PI);
        let wlo = wrap_angle(lo);
        let end = wlo + len;
        if end <= PI + TOL_ANGLE {
            Ok(vec![Interval {
                lo: wlo,
                hi: end.min(PI),
            }])
        } else {
            let mut out = vec![Interval { lo: wlo, hi: PI }];
            let tail = end - TWO_PI;
            if tail > -PI + TOL_ANGLE {
                out.push(Interval { lo: -PI, hi: tail });
            }
            out.reverse();
            Ok(out)
        }
    }
}

/// Finite union of disjoint canonical intervals, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    /// The empty sea.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The full circle.
    pub fn full() -> Self {
        Self {
            intervals: vec![Interval { lo: -PI, hi: PI }],
        }
    }

    /// Builds a union from raw (lo, hi) arcs, normalizing and splitting at the
    /// seam. Arcs whose interiors overlap are rejected; touching arcs merge.
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self, FermiSeaError> {
        let mut pieces = Vec::new();
        for &(lo, hi) in pairs {
            pieces.extend(Interval::split_raw(lo, hi)?);
        }
        Self::assemble(pieces, true)
    }

    /// Union-semantics assembly used by internal set operations.
    fn from_pieces_merging(pieces: Vec<Interval>) -> Self {
        Self::assemble(pieces, false).expect("merging assembly cannot fail")
    }

    fn assemble(mut pieces: Vec<Interval>, strict: bool) -> Result<Self, FermiSeaError> {
        pieces.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi + TOL_ANGLE => {
                    if strict && p.lo < last.hi - TOL_ANGLE {
                        return Err(FermiSeaError::OverlappingIntervals {
                            lo: p.lo,
                            hi: last.hi.min(p.hi),
                        });
                    }
                    last.hi = last.hi.max(p.hi);
                }
                _ => out.push(p),
            }
        }
        Ok(Self { intervals: out })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total arc length.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    /// All interval endpoints, in order.
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .collect()
    }

    /// The set M + t on the circle.
    pub fn translate(&self, t: f64) -> Self {
        let mut pieces = Vec::with_capacity(self.intervals.len() + 1);
        for iv in &self.intervals {
            pieces.extend(
                Interval::split_raw(iv.lo + t, iv.hi + t).expect("translate preserves length"),
            );
        }
        Self::from_pieces_merging(pieces)
    }

    /// Measure of the pairwise intersection with another union.
    pub fn intersection_measure(&self, other: &Self) -> f64 {
        let (mut i, mut j, mut acc) = (0usize, 0usize, 0.0f64);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if hi > lo {
                acc += hi - lo;
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        acc
    }

    /// Overlap C_M(a) = |M intersect (M + a)|.
    pub fn overlap(&self, a: f64) -> f64 {
        self.intersection_measure(&self.translate(a))
    }

    /// Translation defect Lambda_M(a) = |M| - C_M(a).
    pub fn lambda(&self, a: f64) -> f64 {
        (self.measure() - self.overlap(a)).max(0.0)
    }
}

/// Occupancy of the d-torus sampled on a regular N^d cell grid, row-major
/// with axis 1 fastest. Cell c on an axis covers [-pi + c w, -pi + (c+1) w)
/// for w = 2 pi / N.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSea {
    dim: usize,
    resolution: usize,
    cells: Vec<bool>,
    snap: bool,
}

impl GridSea {
    pub fn new(
        dim: usize,
        resolution: usize,
        cells: Vec<bool>,
        snap: bool,
    ) -> Result<Self, FermiSeaError> {
        if dim == 0 || resolution == 0 {
            return Err(FermiSeaError::BadGridShape);
        }
        let expected = resolution.pow(dim as u32);
        if cells.len() != expected {
            return Err(FermiSeaError::BadGridCells {
                expected,
                got: cells.len(),
            });
        }
        Ok(Self {
            dim,
            resolution,
            cells,
            snap,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn snap_enabled(&self) -> bool {
        self.snap
    }

    /// Cell width along each axis.
    pub fn cell_width(&self) -> f64 {
        TWO_PI / self.resolution as f64
    }

    pub fn measure(&self) -> f64 {
        let occupied = self.cells.iter().filter(|&&b| b).count() as f64;
        occupied * self.cell_width().powi(self.dim as i32)
    }

    /// Resolves a translation into whole-cell offsets, snapping if allowed.
    fn snap_offsets(&self, a: &TorusVector) -> Result<Vec<i64>, FermiSeaError> {
        let w = self.cell_width();
        a.components()
            .iter()
            .enumerate()
            .map(|(axis, &c)| {
                let k = (c / w).round();
                let off = c - k * w;
                if !self.snap && off.abs() > TOL_DEGENERATE {
                    return Err(FermiSeaError::GridSnap { axis, offset: off });
                }
                Ok((k as i64).rem_euclid(self.resolution as i64))
            })
            .collect()
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.dim).map(|i| self.resolution.pow(i as u32)).collect()
    }

    /// Cyclically shifted occupancy.
    pub fn shift(&self, offsets: &[i64]) -> Self {
        let n = self.resolution as i64;
        let strides = self.strides();
        let mut cells = vec![false; self.cells.len()];
        for (idx, &val) in self.cells.iter().enumerate() {
            if !val {
                continue;
            }
            let mut target = 0usize;
            for (i, &s) in strides.iter().enumerate() {
                let c = (idx / s) % self.resolution;
                let shifted = ((c as i64 + offsets[i]).rem_euclid(n)) as usize;
                target += shifted * s;
            }
            cells[target] = true;
        }
        Self {
            cells,
            ..self.clone()
        }
    }

    /// Overlap with the sea shifted by whole cells.
    fn overlap_cells(&self, offsets: &[i64]) -> f64 {
        let shifted = self.shift(offsets);
        let count = self
            .cells
            .iter()
            .zip(shifted.cells.iter())
            .filter(|(&a, &b)| a && b)
            .count() as f64;
        count * self.cell_width().powi(self.dim as i32)
    }

    /// Exact interval-union rendering of a one-dimensional grid sea.
    pub fn to_interval_union(&self) -> Option<IntervalUnion> {
        if self.dim != 1 {
            return None;
        }
        let w = self.cell_width();
        let mut pairs = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for (c, &occ) in self.cells.iter().enumerate() {
            match (occ, run) {
                (true, None) => run = Some((c, c)),
                (true, Some((s, _))) => run = Some((s, c)),
                (false, Some((s, e))) => {
                    pairs.push((-PI + s as f64 * w, -PI + (e + 1) as f64 * w));
                    run = None;
                }
                (false, None) => {}
            }
        }
        if let Some((s, e)) = run {
            pairs.push((-PI + s as f64 * w, -PI + (e + 1) as f64 * w));
        }
        Some(IntervalUnion::new(&pairs).expect("grid runs are disjoint"))
    }
}

/// A Fermi sea in one of three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum FermiSea {
    /// One-dimensional union of intervals.
    Union(IntervalUnion),
    /// Cartesian product of one-dimensional unions; dimension = factor count.
    Product(Vec<IntervalUnion>),
    /// Cell-sampled occupancy; the approximation tier.
    Grid(GridSea),
}

/// Per-axis relevance classification under the defect functional.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionReport {
    pub axis: usize,
    pub max_lambda: f64,
    pub relevant: bool,
}

/// Estimated linear lower-bound data along a fixed direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBoundProbe {
    pub c_est: f64,
    pub eps_est: f64,
    pub samples: Vec<(f64, f64)>,
}

impl FermiSea {
    pub fn dim(&self) -> usize {
        match self {
            FermiSea::Union(_) => 1,
            FermiSea::Product(fs) => fs.len(),
            FermiSea::Grid(g) => g.dim(),
        }
    }

    /// Lebesgue measure |M|.
    pub fn measure(&self) -> f64 {
        match self {
            FermiSea::Union(u) => u.measure(),
            FermiSea::Product(fs) => fs.iter().map(IntervalUnion::measure).product(),
            FermiSea::Grid(g) => g.measure(),
        }
    }

    fn check_dim(&self, a: &TorusVector) -> Result<(), FermiSeaError> {
        if a.dim() != self.dim() {
            return Err(FermiSeaError::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        Ok(())
    }

    /// The translated sea M + a. Grid translations move by whole cells.
    pub fn translate(&self, a: &TorusVector) -> Result<FermiSea, FermiSeaError> {
        self.check_dim(a)?;
        Ok(match self {
            FermiSea::Union(u) => FermiSea::Union(u.translate(a.components()[0])),
            FermiSea::Product(fs) => FermiSea::Product(
                fs.iter()
                    .zip(a.components())
                    .map(|(f, &t)| f.translate(t))
                    .collect(),
            ),
            FermiSea::Grid(g) => FermiSea::Grid(g.shift(&g.snap_offsets(a)?)),
        })
    }

    /// Overlap C_M(a) = |M intersect (M + a)|.
    pub fn overlap(&self, a: &TorusVector) -> Result<f64, FermiSeaError> {
        self.check_dim(a)?;
        Ok(match self {
            FermiSea::Union(u) => u.overlap(a.components()[0]),
            FermiSea::Product(fs) => fs
                .iter()
                .zip(a.components())
                .map(|(f, &t)| f.overlap(t))
                .product(),
            FermiSea::Grid(g) => g.overlap_cells(&g.snap_offsets(a)?),
        })
    }

    /// Translation defect Lambda_M(a); for products this evaluates
    /// prod |A_i| - prod C_{A_i}(a_i).
    pub fn lambda_measure(&self, a: &TorusVector) -> Result<f64, FermiSeaError> {
        Ok((self.measure() - self.overlap(a)?).max(0.0))
    }

    /// Scans each axis on the grid { j pi / samples : j = 1..samples } and
    /// reports whether the defect ever exceeds `tol` along that axis.
    pub fn classify_directions(
        &self,
        samples: usize,
        tol: f64,
    ) -> Result<Vec<DirectionReport>, FermiSeaError> {
        let samples = samples.max(8);
        let d = self.dim();
        let mut out = Vec::with_capacity(d);
        for axis in 0..d {
            let mut max_lambda: f64 = 0.0;
            for j in 1..=samples {
                let kappa = j as f64 * PI / samples as f64;
                let mut comps = vec![0.0; d];
                comps[axis] = kappa;
                let lam = self.lambda_measure(&TorusVector::new(comps)?)?;
                max_lambda = max_lambda.max(lam);
            }
            out.push(DirectionReport {
                axis,
                max_lambda,
                relevant: max_lambda > tol,
            });
        }
        Ok(out)
    }

    /// Estimates the best linear constant c with Lambda(lambda v) >= c lambda
    /// on the given grid, and the largest grid prefix on which it holds.
    pub fn linear_bound_probe(
        &self,
        v: &[f64],
        lambda_grid: &[f64],
    ) -> Result<LinearBoundProbe, FermiSeaError> {
        if v.len() != self.dim() {
            return Err(FermiSeaError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(FermiSeaError::NotUnitVector { norm });
        }
        if lambda_grid.is_empty()
            || lambda_grid.iter().any(|&l| !(l > 0.0))
            || lambda_grid.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(FermiSeaError::BadProbeGrid);
        }
        let mut samples = Vec::with_capacity(lambda_grid.len());
        let mut c_est = f64::INFINITY;
        for &lam in lambda_grid {
            let point = TorusVector::new(v.iter().map(|&x| x * lam).collect())?;
            let val = self.lambda_measure(&point)?;
            samples.push((lam, val));
            c_est = c_est.min(val / lam);
        }
        let mut eps_est = 0.0;
        for &(lam, val) in &samples {
            if val + TOL_ANGLE >= c_est * lam {
                eps_est = lam;
            } else {
                break;
            }
        }
        Ok(LinearBoundProbe {
            c_est,
            eps_est,
            samples,
        })
    }
}
