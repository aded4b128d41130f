//! Fejer-kernel evaluation of the trace functional Tr Q_L (1 - Q_L).
//!
//! Two independent routes compute the same quantity:
//!
//! - exact:      L^d qhat(0) - sum_{|delta_i| < L} prod_i (L - |delta_i|) |qhat(delta)|^2,
//! - quadrature: (2 pi)^(-2d) int prod_i k_L(a_i) Lambda_M(a) da,
//!
//! where k_L(a) = sin^2(L a / 2) / sin^2(a / 2) is the Fejer kernel with
//! k_L(0) = L^2, (1 / 2 pi) int k_L = L, and k_L(a) >= 4 L^2 / pi^2 on
//! [0, pi / L]. Keeping both routes alive cross-checks the coefficient
//! table against the translation geometry.

use crate::fermi_sea::{FermiSea, IntervalUnion};
use crate::symbol::{coefficient_table, SymbolError};
use crate::util::{kahan_sum, wrap_angle, TWO_PI};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("cube side must be at least 1")]
    EmptyCube,
    #[error("quadrature route does not support this sea: {reason}")]
    UnsupportedSea { reason: String },
    #[error("bad quadrature specification: {reason}")]
    BadQuadratureSpec { reason: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// sin^2(y), switching to a series below |y| = 1e-4 to keep the 0/0 limit
/// of the kernel ratio exact to machine precision.
fn sin_sq(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        y2 * (1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 45.0 - y2 * y2 * y2 / 315.0)
    } else {
        let s = y.sin();
        s * s
    }
}

/// Fejer kernel k_L(a), 2 pi-periodic, with the removable singularity at
/// a = 0 filled by its limit L^2.
pub fn fejer_kernel(l: usize, a: f64) -> f64 {
    let a = wrap_angle(a);
    if a == 0.0 {
        return (l * l) as f64;
    }
    sin_sq(l as f64 * a / 2.0) / sin_sq(a / 2.0)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence from Chebyshev initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // P_n(x) and P_n'(x) via the three-term recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let dpn = n as f64 * (x * pn - p0) / (x * x - 1.0);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Recompute the derivative at the converged node for the weight.
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let pn_prev = if n == 1 { 1.0 } else { p0 };
        let pn = if n == 1 { x } else { p1 };
        let dpn = n as f64 * (x * pn - pn_prev) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dpn * dpn);
    }
    // Newton from descending Chebyshev guesses yields ascending nodes here;
    // sort defensively so the contract is explicit.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    let nodes_sorted = idx.iter().map(|&i| nodes[i]).collect();
    let weights_sorted = idx.iter().map(|&i| weights[i]).collect();
    (nodes_sorted, weights_sorted)
}

/// Composite Gauss-Legendre rule on [-pi, pi].
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Builds `panels` uniform panels refined by optional interior
    /// breakpoints, each carrying a GL rule of the given order.
    pub fn composite(
        order: usize,
        panels: usize,
        breakpoints: &[f64],
    ) -> Result<Self, BoundsError> {
        if order == 0 || panels == 0 {
            return Err(BoundsError::BadQuadratureSpec {
                reason: "order and panel count must be positive".into(),
            });
        }
        let mut edges: Vec<f64> = (0..=panels)
            .map(|i| -PI + TWO_PI * i as f64 / panels as f64)
            .collect();
        for &b in breakpoints {
            let w = wrap_angle(b);
            edges.push(w);
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let (gl_nodes, gl_weights) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * (edges.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = (hi - lo) / 2.0;
            let mid = (hi + lo) / 2.0;
            for (x, w) in gl_nodes.iter().zip(&gl_weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total mass; equals 2 pi for a grid on the full circle.
    pub fn mass(&self) -> f64 {
        kahan_sum(self.weights.iter().copied())
    }

    /// Integrates a scalar function over [-pi, pi].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        kahan_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x)),
        )
    }
}

/// How the quadrature route builds its grids.
#[derive(Debug, Clone)]
pub struct QuadraturePlan {
    /// GL order per panel.
    pub order: usize,
    /// Uniform panels per unit of L (the kernel oscillates on scale 1/L).
    pub panels_per_l: usize,
    /// Minimum total panel count regardless of L.
    pub min_panels: usize,
    /// Split panels at kinks of the translation geometry (endpoint
    /// differences); disable to study raw convergence.
    pub align_kinks: bool,
}

impl Default for QuadraturePlan {
    fn default() -> Self {
        Self {
            order: 12,
            panels_per_l: 8,
            min_panels: 32,
            align_kinks: true,
        }
    }
}

impl QuadraturePlan {
    fn panels(&self, l: usize) -> usize {
        (self.panels_per_l * l).max(self.min_panels)
    }

    fn grid_for(&self, l: usize, union: &IntervalUnion) -> Result<QuadratureGrid, BoundsError> {
        let breakpoints = if self.align_kinks {
            kink_points(union)
        } else {
            Vec::new()
        };
        QuadratureGrid::composite(self.order, self.panels(l), &breakpoints)
    }
}

/// Kinks of a |-> C_M(a) for a one-dimensional union: all pairwise endpoint
/// differences, wrapped to the canonical branch.
pub fn kink_points(union: &IntervalUnion) -> Vec<f64> {
    let endpoints = union.endpoints();
    let mut out = Vec::with_capacity(endpoints.len() * endpoints.len());
    for &e in &endpoints {
        for &f in &endpoints {
            out.push(wrap_angle(e - f));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    out
}

/// Exact route: L^d qhat(0) - sum over the window of prod (L - |delta_i|)
/// |qhat(delta)|^2. Equals Tr Q_L (1 - Q_L) identically.
pub fn fhm_bound_exact(sea: &FermiSea, l: usize) -> Result<f64, BoundsError> {
    if l == 0 {
        return Err(BoundsError::EmptyCube);
    }
    let table = coefficient_table(sea, l)?;
    let lf = l as f64;
    let dim = sea.dim();
    let volume_term = lf.powi(dim as i32) * table.filling();
    let sum = kahan_sum(table.iter().map(|(delta, v)| {
        let weight: f64 = delta.iter().map(|&d| lf - d.abs() as f64).product();
        weight * v.norm_sqr()
    }));
    Ok(volume_term - sum)
}

/// Quadrature route for one axis: (1 / 4 pi^2) int k_L(a) C_A(a) da.
fn axis_overlap_integral(
    union: &IntervalUnion,
    l: usize,
    plan: &QuadraturePlan,
) -> Result<f64, BoundsError> {
    let grid = plan.grid_for(l, union)?;
    let val = grid.integrate(|a| fejer_kernel(l, a) * union.overlap(a));
    Ok(val / (TWO_PI * TWO_PI))
}

/// Quadrature route: numerically integrates the kernel-weighted translation
/// geometry. Supports one-dimensional unions (grids render exactly to
/// unions) and product seas via the separated form
///
///   L^d qhat(0) - prod_i (1 / 4 pi^2) int k_L(a) C_{A_i}(a) da.
///
/// Multidimensional grid seas have no product structure to separate over and
/// are rejected; the exact route covers them.
pub fn fhm_bound_quadrature(
    sea: &FermiSea,
    l: usize,
    plan: &QuadraturePlan,
) -> Result<f64, BoundsError> {
    if l == 0 {
        return Err(BoundsError::EmptyCube);
    }
    let lf = l as f64;
    match sea {
        FermiSea::Union(u) => {
            let grid = plan.grid_for(l, u)?;
            let val = grid.integrate(|a| fejer_kernel(l, a) * u.lambda(a));
            Ok(val / (TWO_PI * TWO_PI))
        }
        FermiSea::Product(fs) => {
            let filling: f64 = fs.iter().map(|f| f.measure() / TWO_PI).product();
            let volume_term = lf.powi(fs.len() as i32) * filling;
            let mut prod = 1.0;
            for f in fs {
                prod *= axis_overlap_integral(f, l, plan)?;
            }
            Ok(volume_term - prod)
        }
        FermiSea::Grid(g) => match g.to_interval_union() {
            Some(u) => fhm_bound_quadrature(&FermiSea::Union(u), l, plan),
            None => Err(BoundsError::UnsupportedSea {
                reason: format!(
                    "grid sea of dimension {} has no separable structure; use the exact route",
                    g.dim()
                ),
            }),
        },
    }
}

/// Both routes for one cube side.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub l: usize,
    pub dim: usize,
    pub exact: f64,
    pub quadrature: Option<f64>,
}

/// Evaluates the exact route and, where supported, the quadrature route.
pub fn bound_report(
    sea: &FermiSea,
    l: usize,
    plan: &QuadraturePlan,
) -> Result<BoundReport, BoundsError> {
    let exact = fhm_bound_exact(sea, l)?;
    let quadrature = match fhm_bound_quadrature(sea, l, plan) {
        Ok(v) => Some(v),
        Err(BoundsError::UnsupportedSea { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BoundReport {
        l,
        dim: sea.dim(),
        exact,
        quadrature,
    })
}

/// Identity diagnostics over a range of sides: the worst ratio of k_L to
/// its plateau lower bound 4 L^2 / pi^2 on [0, pi / L], and the worst
/// relative error of the mass identity (1 / 2 pi) int k_L = L.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDiagnostics {
    pub min_plateau_ratio: f64,
    pub max_mass_rel_err: f64,
}

pub fn kernel_identity_diagnostics(sides: &[usize], order: usize) -> KernelDiagnostics {
    let mut min_ratio = f64::INFINITY;
    let mut max_err: f64 = 0.0;
    for &l in sides {
        assert!(l >= 1);
        let floor = 4.0 * (l * l) as f64 / (PI * PI);
        for j in 0..=400 {
            let a = j as f64 * PI / (l as f64 * 400.0);
            min_ratio = min_ratio.min(fejer_kernel(l, a) / floor);
        }
        let grid = QuadratureGrid::composite(order, (8 * l).max(32), &[])
            .expect("static quadrature spec");
        let mass = grid.integrate(|a| fejer_kernel(l, a)) / TWO_PI;
        max_err = max_err.max((mass - l as f64).abs() / l as f64);
    }
    KernelDiagnostics {
        min_plateau_ratio: min_ratio,
        max_mass_rel_err: max_err,
    }
}

/// Near-zero kernel-mass constants over a range of sides:
/// c1 = min_L (int_0^delta k_L da) / L and
/// c2 = min_L (int_0^delta a k_L(a) da) / ln L; both must stay strictly
/// positive for the linear entropy bounds to have content.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConstants {
    pub c1_est: f64,
    pub c2_est: f64,
}

/// Gauss-Legendre integral of f over [0, delta] with enough panels to
/// resolve the oscillation scale 2 pi / L.
fn integrate_prefix(f: impl Fn(f64) -> f64, delta: f64, l: usize, order: usize) -> f64 {
    let panels = (l.max(32)).min(4096);
    let (nodes, weights) = gauss_legendre(order);
    let h = delta / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in nodes.iter().zip(&weights) {
            total += w * h / 2.0 * f(mid + x * h / 2.0);
        }
    }
    total
}

pub fn kernel_integral_constants(sides: &[usize], delta: f64, order: usize) -> KernelConstants {
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::INFINITY;
    for &l in sides {
        assert!(l >= 2, "c2 normalizes by ln L, so L >= 2 is required");
        let mass = integrate_prefix(|a| fejer_kernel(l, a), delta, l, order);
        let moment = integrate_prefix(|a| a * fejer_kernel(l, a), delta, l, order);
        c1 = c1.min(mass / l as f64);
        c2 = c2.min(moment / (l as f64).ln());
    }
    KernelConstants {
        c1_est: c1,
        c2_est: c2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi_sea::GridSea;
    use crate::spectrum::trace_purity_bound;
    use crate::symbol::build_restricted;

    #[test]
    fn kernel_at_zero_is_l_squared() {
        for l in [1usize, 2, 7, 100, 512] {
            assert_eq!(fejer_kernel(l, 0.0), (l * l) as f64);
        }
    }

    #[test]
    fn kernel_series_matches_direct_at_switch() {
        for l in [3usize, 64, 511] {
            for &a in &[9.9e-5, 1.01e-4, 5e-5, 2e-4] {
                let lf = l as f64;
                let direct = (lf * a / 2.0).sin().powi(2) / (a / 2.0).sin().powi(2);
                let val = fejer_kernel(l, a);
                assert!(
                    ((val - direct) / direct).abs() < 1e-10,
                    "l = {l}, a = {a}: {val} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn kernel_plateau_bound_holds() {
        let kc = kernel_identity_diagnostics(&[4, 16, 64, 256], 12);
        assert!(kc.min_plateau_ratio >= 1.0 - 1e-12, "{kc:?}");
        assert!(kc.max_mass_rel_err < 1e-12, "{kc:?}");
    }

    #[test]
    fn kernel_prefix_constants_are_positive_and_stable() {
        // As L grows, int_0^delta k_L -> pi L and the first moment grows
        // like 2 ln L; at L delta of order one the constants dip but stay
        // of order one, bounded above by the limits pi and ~2.
        let kc = kernel_integral_constants(&[16, 64, 256, 512], 0.1, 12);
        assert!(kc.c1_est > 0.0 && kc.c2_est > 0.0, "{kc:?}");
        assert!(kc.c1_est > 1.0 && kc.c1_est < PI + 1e-9, "{kc:?}");
        assert!(kc.c2_est > 0.2 && kc.c2_est < 3.0, "{kc:?}");
    }

    #[test]
    fn kernel_is_even_and_periodic() {
        for &a in &[0.3, 1.1, 2.9] {
            assert!((fejer_kernel(9, a) - fejer_kernel(9, -a)).abs() < 1e-9);
            assert!((fejer_kernel(9, a) - fejer_kernel(9, a + TWO_PI)).abs() < 1e-9);
        }
    }

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        let (nodes, weights) = gauss_legendre(5);
        assert!((kahan_sum(weights.iter().copied()) - 2.0).abs() < 1e-14);
        // Degree-9 polynomial integrated exactly by a 5-point rule.
        let poly = |x: f64| 3.0 * x.powi(9) - x.powi(6) + 2.0 * x.powi(3) - x + 0.5;
        let exact = -2.0 / 7.0 + 1.0; // odd terms vanish on [-1, 1]
        let num: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * poly(x))
            .sum();
        assert!((num - exact).abs() < 1e-14, "{num} vs {exact}");
        assert!(nodes.windows(2).all(|w| w[0] < w[1]), "nodes sorted");
    }

    #[test]
    fn composite_grid_mass_is_two_pi() {
        let g = QuadratureGrid::composite(12, 64, &[0.123, -2.5]).unwrap();
        assert!((g.mass() - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn kernel_fourier_coefficient_identity() {
        // (1 / 2 pi) int k_L(a) cos(delta a) da = (L - |delta|)_+ for integers.
        let l = 6usize;
        let grid = QuadratureGrid::composite(12, 96, &[]).unwrap();
        for delta in 0..8i64 {
            let val = grid.integrate(|a| fejer_kernel(l, a) * (delta as f64 * a).cos()) / TWO_PI;
            let expect = (l as f64 - delta as f64).max(0.0);
            assert!((val - expect).abs() < 1e-10, "delta = {delta}: {val}");
        }
    }

    fn seas_for_identity() -> Vec<FermiSea> {
        vec![
            FermiSea::Union(IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap()),
            FermiSea::Union(IntervalUnion::new(&[(-2.0, -0.7), (0.1, 1.9)]).unwrap()),
            FermiSea::Product(vec![
                IntervalUnion::new(&[(0.0, PI)]).unwrap(),
                IntervalUnion::new(&[(-1.0, 1.3)]).unwrap(),
            ]),
            FermiSea::Grid(
                GridSea::new(2, 4, vec![
                    true, false, true, true, false, false, true, false, true, true, false, false,
                    false, true, false, true,
                ], true)
                .unwrap(),
            ),
        ]
    }

    #[test]
    fn exact_route_equals_trace_functional() {
        for sea in seas_for_identity() {
            for l in [1usize, 2, 3, 5] {
                let bound = fhm_bound_exact(&sea, l).unwrap();
                let rs = build_restricted(&coefficient_table(&sea, l).unwrap(), l).unwrap();
                let trace = trace_purity_bound(&rs);
                assert!(
                    (bound - trace).abs() <= 1e-12 * trace.abs().max(1.0),
                    "dim {} L {l}: {bound} vs {trace}",
                    sea.dim()
                );
            }
        }
    }

    #[test]
    fn quadrature_route_matches_exact() {
        let plan = QuadraturePlan::default();
        let union = FermiSea::Union(IntervalUnion::new(&[(-2.0, -0.7), (0.1, 1.9)]).unwrap());
        let product = FermiSea::Product(vec![
            IntervalUnion::new(&[(0.0, PI)]).unwrap(),
            IntervalUnion::new(&[(-1.0, 1.3)]).unwrap(),
        ]);
        for sea in [union, product] {
            for l in [1usize, 4, 9, 16] {
                let exact = fhm_bound_exact(&sea, l).unwrap();
                let quad = fhm_bound_quadrature(&sea, l, &plan).unwrap();
                assert!(
                    (quad - exact).abs() <= 1e-10 * exact.abs().max(1.0),
                    "dim {} L {l}: {quad} vs {exact}",
                    sea.dim()
                );
            }
        }
    }

    #[test]
    fn grid_sea_routes() {
        let plan = QuadraturePlan::default();
        let g1 = FermiSea::Grid(
            GridSea::new(1, 8, vec![true, true, false, true, false, false, true, true], true)
                .unwrap(),
        );
        let exact = fhm_bound_exact(&g1, 5).unwrap();
        let quad = fhm_bound_quadrature(&g1, 5, &plan).unwrap();
        assert!((quad - exact).abs() <= 1e-10 * exact.max(1.0));
        let g2 = FermiSea::Grid(GridSea::new(2, 2, vec![true, false, false, true], true).unwrap());
        assert!(matches!(
            fhm_bound_quadrature(&g2, 3, &plan),
            Err(BoundsError::UnsupportedSea { .. })
        ));
        let report = bound_report(&g2, 3, &plan).unwrap();
        assert!(report.quadrature.is_none());
        assert!(report.exact.is_finite());
    }

    #[test]
    fn full_circle_bound_vanishes() {
        let sea = FermiSea::Union(IntervalUnion::full());
        for l in [1usize, 3, 10] {
            assert!(fhm_bound_exact(&sea, l).unwrap().abs() < 1e-12);
        }
    }
}
