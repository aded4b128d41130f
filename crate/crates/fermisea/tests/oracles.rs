//! Cross-checks against independent oracles: brute-force set sampling for
//! the translation defect, a Chebyshev polynomial-trace evaluation of the
//! entropy that never diagonalizes, and frozen high-precision constants.

use fermisea::cli::{run_entropy_scan, RunConfig};
use fermisea::fermi_sea::{FermiSea, GridSea, IntervalUnion, TorusVector};
use fermisea::spectrum::{entropy_of_state, DEFAULT_ORDER_CAP};
use fermisea::symbol::{build_restricted, coefficient_table, fourier_coefficient, DifferenceIndex};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

fn wrap(x: f64) -> f64 {
    let t = (x + PI).rem_euclid(TWO_PI) - PI;
    if t >= PI {
        t - TWO_PI
    } else {
        t
    }
}

fn contains(u: &IntervalUnion, x: f64) -> bool {
    let x = wrap(x);
    u.intervals().iter().any(|iv| iv.lo() <= x && x < iv.hi())
}

/// Midpoint-sampled |M \ (M + a)| on the circle.
fn lambda_brute_union(u: &IntervalUnion, a: f64, samples: usize) -> f64 {
    let w = TWO_PI / samples as f64;
    let mut count = 0usize;
    for j in 0..samples {
        let x = -PI + (j as f64 + 0.5) * w;
        if contains(u, x) && !contains(u, x - a) {
            count += 1;
        }
    }
    count as f64 * w
}

#[test]
fn lambda_matches_brute_force_sampling() {
    let seas = [
        IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap(),
        IntervalUnion::new(&[(-2.8, -1.1), (0.3, 0.9), (1.4, 2.9)]).unwrap(),
        IntervalUnion::new(&[(PI - 0.4, PI + 0.8)]).unwrap(),
    ];
    let shifts = [0.05, 0.31, 0.7, 1.3, 2.2, -0.4, -1.9, 3.0];
    for u in &seas {
        for &a in &shifts {
            let exact = u.lambda(a);
            let brute = lambda_brute_union(u, a, 400_000);
            assert!(
                (exact - brute).abs() < 1e-3,
                "a = {a}: exact {exact} vs brute {brute}"
            );
        }
    }
}

#[test]
fn product_law_matches_two_dimensional_sampling() {
    let ax = IntervalUnion::new(&[(-1.8, -0.4), (0.5, 1.7)]).unwrap();
    let ay = IntervalUnion::new(&[(-0.9, 1.2)]).unwrap();
    let sea = FermiSea::Product(vec![ax.clone(), ay.clone()]);
    let n = 3000usize;
    let w = TWO_PI / n as f64;
    for (sx, sy) in [(0.3, 0.0), (0.0, 0.8), (0.45, -1.1), (2.0, 2.5)] {
        let exact = sea
            .lambda_measure(&TorusVector::new(vec![sx, sy]).unwrap())
            .unwrap();
        let mut count = 0usize;
        for i in 0..n {
            let x = -PI + (i as f64 + 0.5) * w;
            let in_x = contains(&ax, x);
            let in_x_shifted = contains(&ax, x - sx);
            for j in 0..n {
                let y = -PI + (j as f64 + 0.5) * w;
                if in_x && contains(&ay, y) && !(in_x_shifted && contains(&ay, y - sy)) {
                    count += 1;
                }
            }
        }
        let brute = count as f64 * w * w;
        assert!(
            (exact - brute).abs() < 0.08,
            "shift ({sx}, {sy}): exact {exact} vs brute {brute}"
        );
        // Per-axis overlaps carry the same information at tight tolerance.
        let cx = ax.measure() - ax.lambda(sx);
        let cy = ay.measure() - ay.lambda(sy);
        let recomposed = ax.measure() * ay.measure() - cx * cy;
        assert!((exact - recomposed).abs() < 1e-12);
    }
}

/// Chebyshev coefficients of eta((1 + t) / 2) on t in [-1, 1].
fn eta_chebyshev_coefficients(degree: usize, quad_points: usize) -> Vec<f64> {
    let eta = |x: f64| {
        if x <= 0.0 || x >= 1.0 {
            0.0
        } else {
            -x * x.ln() - (1.0 - x) * (1.0 - x).ln()
        }
    };
    let mut coeffs = vec![0.0f64; degree + 1];
    for j in 0..quad_points {
        let theta = PI * (j as f64 + 0.5) / quad_points as f64;
        let f = eta(0.5 * (1.0 + theta.cos()));
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c += f * (k as f64 * theta).cos();
        }
    }
    for c in coeffs.iter_mut() {
        *c *= 2.0 / quad_points as f64;
    }
    coeffs[0] /= 2.0;
    coeffs
}

/// sum_k c_k Tr T_k(2Q - 1) by the matrix three-term recurrence; no
/// eigendecomposition anywhere.
fn entropy_by_polynomial_trace(q: &DMatrix<Complex64>, coeffs: &[f64]) -> f64 {
    let n = q.nrows();
    let identity = DMatrix::<Complex64>::identity(n, n);
    let a = q.map(|v| v * Complex64::new(2.0, 0.0)) - &identity;
    let mut total = coeffs[0] * n as f64 + coeffs[1] * a.trace().re;
    let mut t_prev = identity;
    let mut t_cur = a.clone();
    for &c in &coeffs[2..] {
        let t_next = (&a * &t_cur).map(|v| v * Complex64::new(2.0, 0.0)) - &t_prev;
        total += c * t_next.trace().re;
        t_prev = t_cur;
        t_cur = t_next;
    }
    total
}

#[test]
fn polynomial_trace_entropy_matches_eigenvalue_route() {
    // eta's endpoint singularities slow Chebyshev convergence to O(1/m^2);
    // degree 6000 leaves a truncation tail safely under the tolerance.
    let coeffs = eta_chebyshev_coefficients(6000, 16384);
    let cases: Vec<(FermiSea, Vec<usize>)> = vec![
        (
            FermiSea::Union(IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap()),
            vec![4, 16, 32],
        ),
        (
            FermiSea::Union(IntervalUnion::new(&[(-2.1, -0.8), (0.4, 1.3)]).unwrap()),
            vec![16],
        ),
        (
            FermiSea::Product(vec![
                IntervalUnion::new(&[(0.0, PI)]).unwrap(),
                IntervalUnion::new(&[(-1.2, 0.9)]).unwrap(),
            ]),
            vec![5],
        ),
        (
            FermiSea::Grid(
                GridSea::new(1, 8, vec![true, true, false, true, false, false, true, false], true)
                    .unwrap(),
            ),
            vec![8],
        ),
    ];
    for (sea, sides) in &cases {
        for &l in sides {
            let rs = build_restricted(&coefficient_table(sea, l).unwrap(), l).unwrap();
            let record = entropy_of_state(&rs, DEFAULT_ORDER_CAP).unwrap();
            let poly = entropy_by_polynomial_trace(rs.matrix(), &coeffs);
            let scale = record.entropy_nats.max(1.0);
            assert!(
                (record.entropy_nats - poly).abs() < 1e-6 * scale,
                "dim {} L {l}: eigen {} vs polynomial {}",
                sea.dim(),
                record.entropy_nats,
                poly
            );
        }
    }
}

// Constants below were frozen from 30-digit arbitrary-precision evaluations.
const LN_2: f64 = 0.69314718055994530942;
const INV_PI: f64 = 0.31830988618379067154;
const LAMBDA_PLUS: f64 = 0.81830988618379067154;
const S_TWO: f64 = 0.94789326746755503592;
const TRACE_TWO: f64 = 0.29735763271532445711;
const TENTH_PI: f64 = 0.31415926535897932385;

#[test]
fn frozen_constants_through_the_full_pipeline() {
    let sea = FermiSea::Union(IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap());
    let config = RunConfig {
        l_values: vec![1, 2],
        ..RunConfig::default()
    };
    let rows = run_entropy_scan(&sea, &config).unwrap();
    assert!((rows[0].entropy_nats.unwrap() - LN_2).abs() < 1e-14);
    assert!((rows[1].entropy_nats.unwrap() - S_TWO).abs() < 1e-13);
    assert!((rows[1].trace_bound.unwrap() - TRACE_TWO).abs() < 1e-14);
    assert!((rows[1].fhm_exact.unwrap() - TRACE_TWO).abs() < 1e-14);
    assert!((rows[1].fhm_quadrature.unwrap() - TRACE_TWO).abs() < 1e-10);

    let q1 = fourier_coefficient(&sea, &DifferenceIndex(vec![1])).unwrap();
    assert!((q1.re - INV_PI).abs() < 1e-15 && q1.im.abs() < 1e-16);
    let rs = build_restricted(&coefficient_table(&sea, 2).unwrap(), 2).unwrap();
    let spectrum = fermisea::spectrum::eigenvalues(&rs, 16).unwrap();
    assert!((spectrum.eigenvalues[1] - LAMBDA_PLUS).abs() < 1e-14);
    assert!((spectrum.eigenvalues[0] - (1.0 - LAMBDA_PLUS)).abs() < 1e-14);

    let square = FermiSea::Product(vec![
        IntervalUnion::new(&[(0.0, PI)]).unwrap(),
        IntervalUnion::new(&[(0.0, PI)]).unwrap(),
    ]);
    let lam = square
        .lambda_measure(&TorusVector::new(vec![0.1, 0.0]).unwrap())
        .unwrap();
    assert!((lam - TENTH_PI).abs() < 1e-14);
}
