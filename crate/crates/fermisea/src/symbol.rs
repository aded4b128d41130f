//! Fourier coefficients of a Fermi sea and the restricted correlation matrix.
//!
//! The symbol of a sea M is its indicator; the coefficients are
//!
//!   qhat(delta) = (2 pi)^(-d) int_M exp(-i delta . a) da,
//!
//! and the cube restriction Q_L is the Hermitian block-Toeplitz matrix with
//! Q_L[row(k), row(l)] = qhat(l - k) over k, l in {1..L}^d, where
//! row(k) = sum_i (k_i - 1) L^(i-1) with axis 1 fastest.

use crate::fermi_sea::{FermiSea, GridSea, IntervalUnion};
use crate::util::{kahan_sum, TWO_PI};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Hermitian-symmetry and consistency tolerance for coefficient tables.
pub const TOL_HERMITIAN: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("difference index {delta:?} outside the stored window |delta_i| <= {max_abs}")]
    MissingCoefficient { delta: Vec<i64>, max_abs: i64 },
    #[error("difference index has dimension {got}, table has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cube side must be at least 1")]
    EmptyCube,
    #[error("matrix deviates from Hermitian symmetry by {deviation:.3e}")]
    NotHermitian { deviation: f64 },
}

/// Integer difference vector delta in Z^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceIndex(pub Vec<i64>);

impl DifferenceIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Closed-form coefficient of a one-dimensional interval union.
fn union_coefficient(u: &IntervalUnion, delta: i64) -> Complex64 {
    if delta == 0 {
        return Complex64::new(u.measure() / TWO_PI, 0.0);
    }
    let d = delta as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for iv in u.intervals() {
        let elo = Complex64::from_polar(1.0, -d * iv.lo());
        let ehi = Complex64::from_polar(1.0, -d * iv.hi());
        acc += (elo - ehi) / (Complex64::i() * TWO_PI * d);
    }
    acc
}

/// Exact coefficient of one grid cell along one axis, normalized by 1/(2 pi).
fn cell_weight(resolution: usize, cell: usize, delta: i64) -> Complex64 {
    let w = TWO_PI / resolution as f64;
    let lo = -std::f64::consts::PI + cell as f64 * w;
    let hi = lo + w;
    if delta == 0 {
        return Complex64::new(w / TWO_PI, 0.0);
    }
    let d = delta as f64;
    let elo = Complex64::from_polar(1.0, -d * lo);
    let ehi = Complex64::from_polar(1.0, -d * hi);
    (elo - ehi) / (Complex64::i() * TWO_PI * d)
}

fn grid_coefficient(g: &GridSea, delta: &[i64]) -> Complex64 {
    let n = g.resolution();
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, &occ) in g.cells().iter().enumerate() {
        if !occ {
            continue;
        }
        let mut term = Complex64::new(1.0, 0.0);
        let mut rem = idx;
        for &di in delta {
            let c = rem % n;
            rem /= n;
            term *= cell_weight(n, c, di);
        }
        acc += term;
    }
    acc
}

/// Single Fourier coefficient qhat(delta) of the sea, in closed form.
pub fn fourier_coefficient(sea: &FermiSea, delta: &DifferenceIndex) -> Result<Complex64, SymbolError> {
    if delta.dim() != sea.dim() {
        return Err(SymbolError::DimensionMismatch {
            expected: sea.dim(),
            got: delta.dim(),
        });
    }
    Ok(match sea {
        FermiSea::Union(u) => union_coefficient(u, delta.0[0]),
        FermiSea::Product(fs) => fs
            .iter()
            .zip(&delta.0)
            .map(|(f, &d)| union_coefficient(f, d))
            .product(),
        FermiSea::Grid(g) => grid_coefficient(g, &delta.0),
    })
}

/// Dense table of qhat(delta) over the window |delta_i| <= l - 1, stored
/// row-major with axis 1 fastest.
#[derive(Debug, Clone)]
pub struct SymbolCoefficients {
    dim: usize,
    l: usize,
    values: Vec<Complex64>,
}

impl SymbolCoefficients {
    fn side(&self) -> usize {
        2 * self.l - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest cube side the table can serve.
    pub fn max_cube(&self) -> usize {
        self.l
    }

    fn flat_index(&self, delta: &[i64]) -> Option<usize> {
        let off = self.l as i64 - 1;
        let side = self.side();
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &d in delta {
            if d.abs() > off {
                return None;
            }
            idx += (d + off) as usize * stride;
            stride *= side;
        }
        Some(idx)
    }

    /// Table lookup for qhat(delta).
    pub fn get(&self, delta: &DifferenceIndex) -> Result<Complex64, SymbolError> {
        if delta.dim() != self.dim {
            return Err(SymbolError::DimensionMismatch {
                expected: self.dim,
                got: delta.dim(),
            });
        }
        self.flat_index(&delta.0)
            .map(|i| self.values[i])
            .ok_or_else(|| SymbolError::MissingCoefficient {
                delta: delta.0.clone(),
                max_abs: self.l as i64 - 1,
            })
    }

    /// qhat(0), the filling fraction |M| / (2 pi)^d.
    pub fn filling(&self) -> f64 {
        let zero = vec![0i64; self.dim];
        self.values[self.flat_index(&zero).unwrap()].re
    }

    /// Largest deviation from Hermitian symmetry qhat(-delta) = conj qhat(delta).
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let side = self.side();
        let total = self.values.len();
        for idx in 0..total {
            let mut rem = idx;
            let mut mirror = 0usize;
            let mut stride = 1usize;
            for _ in 0..self.dim {
                let c = rem % side;
                rem /= side;
                mirror += (side - 1 - c) * stride;
                stride *= side;
            }
            let dev = (self.values[idx] - self.values[mirror].conj()).norm();
            worst = worst.max(dev);
        }
        worst
    }

    /// Partial Parseval sum over the stored window.
    pub fn parseval_sum(&self) -> f64 {
        kahan_sum(self.values.iter().map(|v| v.norm_sqr()))
    }

    /// Iterates (delta, qhat(delta)) over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        let side = self.side();
        let off = self.l as i64 - 1;
        let dim = self.dim;
        self.values.iter().enumerate().map(move |(idx, &v)| {
            let mut rem = idx;
            let mut delta = Vec::with_capacity(dim);
            for _ in 0..dim {
                delta.push((rem % side) as i64 - off);
                rem /= side;
            }
            (delta, v)
        })
    }
}

/// Builds the full coefficient window for cubes up to side `l`.
///
/// Product seas factorize: the table is the outer product of the per-axis
/// one-dimensional tables. Grid seas use exact per-cell integrals, so the
/// coefficients are exact for the grid-rendered set; any discretization error
/// lives in the grid rendering itself, not in this table.
pub fn coefficient_table(sea: &FermiSea, l: usize) -> Result<SymbolCoefficients, SymbolError> {
    if l == 0 {
        return Err(SymbolError::EmptyCube);
    }
    let dim = sea.dim();
    let side = 2 * l - 1;
    let off = l as i64 - 1;
    let values = match sea {
        FermiSea::Union(u) => (0..side)
            .map(|i| union_coefficient(u, i as i64 - off))
            .collect(),
        FermiSea::Product(fs) => {
            let axis_tables: Vec<Vec<Complex64>> = fs
                .iter()
                .map(|f| (0..side).map(|i| union_coefficient(f, i as i64 - off)).collect())
                .collect();
            let total = side.pow(dim as u32);
            let mut values = Vec::with_capacity(total);
            for idx in 0..total {
                let mut rem = idx;
                let mut v = Complex64::new(1.0, 0.0);
                for table in axis_tables.iter() {
                    v *= table[rem % side];
                    rem /= side;
                }
                values.push(v);
            }
            values
        }
        FermiSea::Grid(g) => {
            let total = side.pow(dim as u32);
            let mut values = Vec::with_capacity(total);
            for idx in 0..total {
                let mut rem = idx;
                let mut delta = Vec::with_capacity(dim);
                for _ in 0..dim {
                    delta.push((rem % side) as i64 - off);
                    rem /= side;
                }
                values.push(grid_coefficient(g, &delta));
            }
            values
        }
    };
    Ok(SymbolCoefficients { dim, l, values })
}

/// Dense cube restriction of the symbol.
#[derive(Debug, Clone)]
pub struct RestrictedSymbol {
    l: usize,
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl RestrictedSymbol {
    pub fn cube_side(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix order L^d.
    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Largest deviation |Q[k,l] - conj Q[l,k]|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for l in k..n {
                let dev = (self.matrix[(k, l)] - self.matrix[(l, k)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Checks the block-Toeplitz property: entries depend on l - k only.
    pub fn toeplitz_deviation(&self, coeffs: &SymbolCoefficients) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                let delta = DifferenceIndex(decode_difference(k, l, self.l, self.dim));
                let dev = (self.matrix[(k, l)] - coeffs.get(&delta).unwrap()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Writes entries as CSV rows "row,col,re,im" for debugging.
    pub fn write_entries_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        let n = self.matrix.nrows();
        for k in 0..n {
            for l in 0..n {
                let v = self.matrix[(k, l)];
                writeln!(out, "{},{},{:.16e},{:.16e}", k, l, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

fn decode_difference(row_k: usize, row_l: usize, l: usize, dim: usize) -> Vec<i64> {
    let mut delta = Vec::with_capacity(dim);
    let (mut rk, mut rl) = (row_k, row_l);
    for _ in 0..dim {
        let k_i = (rk % l) as i64;
        let l_i = (rl % l) as i64;
        delta.push(l_i - k_i);
        rk /= l;
        rl /= l;
    }
    delta
}

/// Materializes Q_L from a coefficient table.
pub fn build_restricted(
    coeffs: &SymbolCoefficients,
    l: usize,
) -> Result<RestrictedSymbol, SymbolError> {
    if l == 0 {
        return Err(SymbolError::EmptyCube);
    }
    if l > coeffs.max_cube() {
        return Err(SymbolError::MissingCoefficient {
            delta: vec![l as i64 - 1; coeffs.dim()],
            max_abs: coeffs.max_cube() as i64 - 1,
        });
    }
    let dim = coeffs.dim();
    let n = l.pow(dim as u32);
    let matrix = DMatrix::from_fn(n, n, |k, r| {
        let delta = decode_difference(k, r, l, dim);
        coeffs
            .get(&DifferenceIndex(delta))
            .expect("window covers all cube differences")
    });
    Ok(RestrictedSymbol { l, dim, matrix })
}
