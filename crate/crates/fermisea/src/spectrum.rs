//! Eigenvalues of the restricted symbol and the entanglement entropy.
//!
//! Q_L is Hermitian with spectrum in [0, 1]; the von Neumann entropy of the
//! associated reduced state is S_L = sum_i eta(lambda_i) in nats, with
//!
//!   eta(x) = -x ln x - (1 - x) ln (1 - x),
//!
//! and the elementary bound S_L >= Tr Q_L (1 - Q_L) always holds.

use crate::symbol::{RestrictedSymbol, TOL_HERMITIAN};
use crate::util::kahan_sum;
use thiserror::Error;

/// Slack admitted on the closed spectral range [0, 1].
pub const TOL_EIGEN_RANGE: f64 = 1e-9;

/// Default cap on the matrix order accepted by the dense eigensolver.
pub const DEFAULT_ORDER_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("matrix deviates from Hermitian symmetry by {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix order {order} exceeds the dense-solver cap {cap}")]
    DimensionCap { order: usize, cap: usize },
    #[error("symmetric eigensolver failed to converge")]
    ConvergenceFailure,
    #[error("eigenvalue {value:.6e} escapes [0, 1] beyond tolerance {tol:.1e}")]
    EigenvalueRange { value: f64, tol: f64 },
    #[error("entropy argument {value:.6e} outside [0, 1] beyond tolerance {tol:.1e}")]
    DomainError { value: f64, tol: f64 },
}

/// Sorted spectrum of a restricted symbol with a trace consistency residual.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues in ascending order, all within [0, 1] up to tolerance.
    pub eigenvalues: Vec<f64>,
    /// |sum of eigenvalues - Tr Q|, a cheap solver sanity check.
    pub trace_residual: f64,
}

/// Entropy and bound data for one cube side.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRecord {
    pub l: usize,
    pub dim: usize,
    /// S_L = sum eta(lambda_i), in nats.
    pub entropy_nats: f64,
    /// Tr Q_L (1 - Q_L), computed from matrix entries, not eigenvalues.
    pub trace_bound: f64,
    /// Trace residual reported by the eigensolve.
    pub eig_residual: f64,
}

/// Binary entropy eta(x) in nats, clamping excursions within `tol`.
pub fn binary_entropy_eta(x: f64, tol: f64) -> Result<f64, SpectrumError> {
    if !x.is_finite() || x < -tol || x > 1.0 + tol {
        return Err(SpectrumError::DomainError { value: x, tol });
    }
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.ln() - (1.0 - x) * (1.0 - x).ln())
}

/// Dense Hermitian eigensolve with validation of the physical range.
pub fn eigenvalues(rs: &RestrictedSymbol, cap: usize) -> Result<Spectrum, SpectrumError> {
    let order = rs.order();
    if order > cap {
        return Err(SpectrumError::DimensionCap { order, cap });
    }
    let deviation = rs.hermitian_deviation();
    if deviation > TOL_HERMITIAN {
        return Err(SpectrumError::NotHermitian { deviation });
    }
    let eig = rs
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(SpectrumError::ConvergenceFailure)?;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &v in &eigenvalues {
        if !v.is_finite() || v < -TOL_EIGEN_RANGE || v > 1.0 + TOL_EIGEN_RANGE {
            return Err(SpectrumError::EigenvalueRange {
                value: v,
                tol: TOL_EIGEN_RANGE,
            });
        }
    }
    let trace: f64 = kahan_sum((0..order).map(|i| rs.matrix()[(i, i)].re));
    let trace_residual = (kahan_sum(eigenvalues.iter().copied()) - trace).abs();
    Ok(Spectrum {
        eigenvalues,
        trace_residual,
    })
}

/// Tr Q (1 - Q) = Tr Q - ||Q||_F^2, evaluated from entries alone.
///
/// This route never touches the eigensolver, so it can cross-check it.
pub fn trace_purity_bound(rs: &RestrictedSymbol) -> f64 {
    let m = rs.matrix();
    let n = m.nrows();
    let trace = kahan_sum((0..n).map(|i| m[(i, i)].re));
    let frobenius_sq = kahan_sum(m.iter().map(|v| v.norm_sqr()));
    trace - frobenius_sq
}

/// Full entropy evaluation of one restricted symbol.
pub fn entropy_of_state(rs: &RestrictedSymbol, cap: usize) -> Result<EntropyRecord, SpectrumError> {
    let spectrum = eigenvalues(rs, cap)?;
    let terms = spectrum
        .eigenvalues
        .iter()
        .map(|&v| binary_entropy_eta(v, TOL_EIGEN_RANGE))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(EntropyRecord {
        l: rs.cube_side(),
        dim: rs.dim(),
        entropy_nats: kahan_sum(terms),
        trace_bound: trace_purity_bound(rs),
        eig_residual: spectrum.trace_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi_sea::{FermiSea, IntervalUnion};
    use crate::symbol::{build_restricted, coefficient_table};
    use std::f64::consts::PI;

    const LN_2: f64 = 0.69314718055994530942;
    const LAMBDA_PLUS: f64 = 0.81830988618379067154;
    const ETA_LAMBDA_PLUS: f64 = 0.47394663373377751796;
    const S_TWO: f64 = 0.94789326746755503592;
    const TRACE_TWO: f64 = 0.29735763271532445711;

    fn half_circle() -> FermiSea {
        FermiSea::Union(IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap())
    }

    fn restricted(sea: &FermiSea, l: usize) -> RestrictedSymbol {
        build_restricted(&coefficient_table(sea, l).unwrap(), l).unwrap()
    }

    #[test]
    fn eta_golden_values() {
        assert!((binary_entropy_eta(0.5, 0.0).unwrap() - LN_2).abs() < 1e-16);
        assert!(
            (binary_entropy_eta(0.81831, 0.0).unwrap() - 0.47394646244733470929).abs() < 1e-15
        );
        assert!((binary_entropy_eta(LAMBDA_PLUS, 0.0).unwrap() - ETA_LAMBDA_PLUS).abs() < 1e-15);
        assert_eq!(binary_entropy_eta(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy_eta(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn eta_clamps_and_rejects() {
        assert_eq!(binary_entropy_eta(-1e-12, 1e-9).unwrap(), 0.0);
        assert_eq!(binary_entropy_eta(1.0 + 1e-12, 1e-9).unwrap(), 0.0);
        assert!(matches!(
            binary_entropy_eta(-1e-3, 1e-9),
            Err(SpectrumError::DomainError { .. })
        ));
        assert!(matches!(
            binary_entropy_eta(f64::NAN, 1e-9),
            Err(SpectrumError::DomainError { .. })
        ));
    }

    #[test]
    fn half_filling_single_site() {
        let rec = entropy_of_state(&restricted(&half_circle(), 1), DEFAULT_ORDER_CAP).unwrap();
        assert!((rec.entropy_nats - LN_2).abs() < 1e-14, "{}", rec.entropy_nats);
        assert!((rec.trace_bound - 0.25).abs() < 1e-14);
    }

    #[test]
    fn half_filling_two_sites() {
        let rs = restricted(&half_circle(), 2);
        let spec = eigenvalues(&rs, DEFAULT_ORDER_CAP).unwrap();
        assert!((spec.eigenvalues[0] - (1.0 - LAMBDA_PLUS)).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - LAMBDA_PLUS).abs() < 1e-14);
        assert!(spec.trace_residual < 1e-12);
        let rec = entropy_of_state(&rs, DEFAULT_ORDER_CAP).unwrap();
        assert!((rec.entropy_nats - S_TWO).abs() < 1e-13, "{}", rec.entropy_nats);
        assert!((rec.trace_bound - TRACE_TWO).abs() < 1e-14);
        assert!(rec.eig_residual < 1e-12);
    }

    #[test]
    fn trace_bound_routes_agree() {
        let sea = FermiSea::Union(IntervalUnion::new(&[(-1.2, -0.3), (0.4, 2.0)]).unwrap());
        let rs = restricted(&sea, 12);
        let spec = eigenvalues(&rs, DEFAULT_ORDER_CAP).unwrap();
        let via_eigs: f64 = spec.eigenvalues.iter().map(|v| v * (1.0 - v)).sum();
        let via_entries = trace_purity_bound(&rs);
        assert!((via_eigs - via_entries).abs() < 1e-11);
    }

    #[test]
    fn entropy_dominates_trace_bound() {
        let sea = FermiSea::Union(IntervalUnion::new(&[(-2.5, -1.0), (0.0, 0.8)]).unwrap());
        for l in [1usize, 3, 7, 15] {
            let rec = entropy_of_state(&restricted(&sea, l), DEFAULT_ORDER_CAP).unwrap();
            assert!(rec.entropy_nats >= rec.trace_bound - 1e-12, "L = {l}");
        }
    }

    #[test]
    fn identity_symbol_has_zero_entropy() {
        let rec =
            entropy_of_state(&restricted(&FermiSea::Union(IntervalUnion::full()), 6), 4096)
                .unwrap();
        assert!(rec.entropy_nats.abs() < 1e-10, "{}", rec.entropy_nats);
        assert!(rec.trace_bound.abs() < 1e-12);
    }

    #[test]
    fn product_with_full_axis_doubles_spectrum() {
        let lift = FermiSea::Product(vec![
            IntervalUnion::full(),
            IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap(),
        ]);
        let rec = entropy_of_state(&restricted(&lift, 2), DEFAULT_ORDER_CAP).unwrap();
        assert!((rec.entropy_nats - 2.0 * S_TWO).abs() < 1e-12);
    }

    #[test]
    fn order_cap_enforced() {
        let rs = restricted(&half_circle(), 5);
        assert!(matches!(
            eigenvalues(&rs, 4),
            Err(SpectrumError::DimensionCap { order: 5, cap: 4 })
        ));
    }
}
