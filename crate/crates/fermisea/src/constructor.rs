//! Construction of one-dimensional Fermi seas whose cube entropy tracks a
//! prescribed sub-volume growth law F_L.
//!
//! The design works through a scale ladder: dyadic scales a_k = a_0 2^-k
//! carry blocks of N_k intervals, each of length a_k and separated by gaps
//! a_k, with blocks isolated from each other by gaps a_0. For a shift
//! a <= a_k every block at scale j <= k contributes exactly N_j a to the
//! translation defect, so
//!
//!   Lambda_M(a) >= N_k a   for a in (a_{k+1}, a_k],
//!
//! and choosing N_k >= safety h(a_k) / a_k enforces the minorant
//! Lambda_M(a) >= safety h(a) that drives the kernel bound, where
//! h = (x g)' for the growth function g tied to the target by
//!
//!   (2 / pi^2) g(pi / L) >= F_L / L^2.
//!
//! Interval counts alone do not pay the entropy bill at desk scale, so a
//! greedy provisioner tops the ladder up: an isolated momentum interval of
//! length a contributes roughly ln(L a) / 3 + 0.30 nats to S_L once
//! L a >= 1, and the builder adds intervals at the finest trusted scale
//! until a demanded multiple of F_L is covered on a geometric grid of
//! sides. Every construction is then verified numerically: the minorant on
//! a dense shift grid, and the entropy target on a grid of cube sides.

use crate::fermi_sea::{FermiSea, FermiSeaError, IntervalUnion};
use crate::spectrum::{entropy_of_state, SpectrumError};
use crate::symbol::{build_restricted, coefficient_table, SymbolError};
use crate::util::geometric_grid;
use std::f64::consts::PI;
use thiserror::Error;

/// Natural log of 2; the entropy capacity of one lattice site in nats.
const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Error)]
pub enum ConstructorError {
    #[error("growth target is not sub-volume: {reason}")]
    NotSubVolume { reason: String },
    #[error("bad constructor configuration: {reason}")]
    BadConfig { reason: String },
    #[error("ladder needs {intervals} intervals, budget allows {budget}")]
    BudgetExceeded { intervals: usize, budget: usize },
    #[error("ladder spans {span:.4} rad but only {available:.4} rad fit on the circle; lower l_max or the growth demand")]
    SpanExceeded { span: f64, available: f64 },
    #[error("{what} verification failed: {detail}")]
    VerificationFailed { what: String, detail: String },
    #[error(transparent)]
    Sea(#[from] FermiSeaError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Families of entropy growth targets F_L.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFamily {
    /// F_L = L^(1 - alpha) for alpha in (0, 1).
    Power { alpha: f64 },
    /// F_L = L / ln L.
    Log,
    /// F_L = L / ln ln L; realizable only asymptotically, kept for its
    /// growth functions.
    LogLog,
    /// F_L given at sample points (L_i, F_i), interpolated linearly in L
    /// and clamped outside the sampled range.
    Table { points: Vec<(f64, f64)> },
}

impl GrowthFamily {
    /// Short label used in serialized metadata.
    pub fn label(&self) -> String {
        match self {
            GrowthFamily::Power { alpha } => format!("power(alpha={alpha})"),
            GrowthFamily::Log => "log".into(),
            GrowthFamily::LogLog => "loglog".into(),
            GrowthFamily::Table { points } => format!("table({} points)", points.len()),
        }
    }
}

/// A validated growth target with its unscaled bound functions g and h.
///
/// g is tied to the target by (2 / pi^2) g(pi / L) >= F_L / L^2 (equality
/// for the parametric families) and h = (x g)'; both are stored without the
/// safety factor, which multiplies h only at use sites.
#[derive(Debug, Clone)]
pub struct GrowthProfile {
    family: GrowthFamily,
    /// Table support, ascending in x = pi / L.
    table_x: Vec<f64>,
    /// Cumulative-max g values over `table_x`, nondecreasing.
    table_g: Vec<f64>,
}

impl GrowthProfile {
    pub fn new(family: GrowthFamily) -> Result<Self, ConstructorError> {
        let (table_x, table_g) = match &family {
            GrowthFamily::Power { alpha } => {
                if !alpha.is_finite() || *alpha <= 0.0 || *alpha >= 1.0 {
                    return Err(ConstructorError::NotSubVolume {
                        reason: format!("power exponent alpha = {alpha} must lie in (0, 1)"),
                    });
                }
                (Vec::new(), Vec::new())
            }
            GrowthFamily::Log | GrowthFamily::LogLog => (Vec::new(), Vec::new()),
            GrowthFamily::Table { points } => {
                if points.len() < 2 {
                    return Err(ConstructorError::BadConfig {
                        reason: "growth table needs at least two points".into(),
                    });
                }
                for w in points.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(ConstructorError::BadConfig {
                            reason: "growth table sides must be strictly increasing".into(),
                        });
                    }
                }
                if points
                    .iter()
                    .any(|&(l, f)| !l.is_finite() || !f.is_finite() || l < 2.0 || f <= 0.0)
                {
                    return Err(ConstructorError::BadConfig {
                        reason: "growth table needs finite L >= 2 and F > 0".into(),
                    });
                }
                let (l_last, f_last) = *points.last().unwrap();
                if f_last > LN_2 * l_last {
                    return Err(ConstructorError::NotSubVolume {
                        reason: format!(
                            "table demands {f_last:.3} nats at L = {l_last}, above the capacity {:.3}",
                            LN_2 * l_last
                        ),
                    });
                }
                // x = pi / L descends as L ascends; reverse into ascending x.
                let mut xs: Vec<f64> = points.iter().rev().map(|&(l, _)| PI / l).collect();
                let mut gs: Vec<f64> = points
                    .iter()
                    .rev()
                    .map(|&(l, f)| 0.5 * PI * PI * f / (l * l))
                    .collect();
                // Cumulative max keeps g nondecreasing, which makes g itself
                // an a.e. minorant of (x g)'.
                for i in 1..gs.len() {
                    if gs[i] < gs[i - 1] {
                        gs[i] = gs[i - 1];
                    }
                }
                xs.dedup();
                (xs, gs)
            }
        };
        let profile = Self {
            family,
            table_x,
            table_g,
        };
        profile.check_sub_volume()?;
        Ok(profile)
    }

    pub fn family(&self) -> &GrowthFamily {
        &self.family
    }

    /// Confirms F_L / L shrinks across a geometric grid of sides.
    fn check_sub_volume(&self) -> Result<(), ConstructorError> {
        let (lo, hi) = match &self.family {
            GrowthFamily::Table { points } => (points[0].0, points.last().unwrap().0),
            _ => (16.0, 16384.0),
        };
        let f = |l: f64| self.target_entropy(l) / l;
        let (first, last) = (f(lo), f(hi));
        if last.is_finite() && (!first.is_finite() || last <= first * (1.0 + 1e-9)) {
            return Ok(());
        }
        Err(ConstructorError::NotSubVolume {
            reason: format!(
                "F_L / L rises from {first:.4} at L = {lo} to {last:.4} at L = {hi}"
            ),
        })
    }

    /// Target entropy F_L; +inf where the family is undefined or exceeds
    /// any finite demand (small L for the log families).
    pub fn target_entropy(&self, l: f64) -> f64 {
        match &self.family {
            GrowthFamily::Power { alpha } => l.powf(1.0 - alpha),
            GrowthFamily::Log => {
                let ll = l.ln();
                if ll <= 0.0 {
                    f64::INFINITY
                } else {
                    l / ll
                }
            }
            GrowthFamily::LogLog => {
                let ll = l.ln();
                if ll <= 1.0 {
                    f64::INFINITY
                } else {
                    l / ll.ln()
                }
            }
            GrowthFamily::Table { points } => {
                let first = points.first().unwrap();
                let last = points.last().unwrap();
                if l <= first.0 {
                    return first.1;
                }
                if l >= last.0 {
                    return last.1;
                }
                let i = points.partition_point(|&(pl, _)| pl < l);
                let (l0, f0) = points[i - 1];
                let (l1, f1) = points[i];
                f0 + (f1 - f0) * (l - l0) / (l1 - l0)
            }
        }
    }

    /// Unscaled growth function g(x) on 0 < x <= 1.
    pub fn g(&self, x: f64) -> f64 {
        assert!(x > 0.0 && x <= 1.0, "g is evaluated on (0, 1], got {x}");
        match &self.family {
            GrowthFamily::Power { alpha } => 0.5 * PI * PI * (x / PI).powf(1.0 + alpha),
            GrowthFamily::Log => 0.5 * PI * x / (PI / x).ln(),
            GrowthFamily::LogLog => 0.5 * PI * x / (PI / x).ln().ln(),
            GrowthFamily::Table { .. } => self.table_interp(x),
        }
    }

    /// Unscaled a.e. minorant h of (x g)'(x) on 0 < x <= 1; exact for the
    /// parametric families, h = g for tables.
    pub fn h(&self, x: f64) -> f64 {
        assert!(x > 0.0 && x <= 1.0, "h is evaluated on (0, 1], got {x}");
        match &self.family {
            GrowthFamily::Power { alpha } => {
                0.5 * (2.0 + alpha) * PI.powf(1.0 - alpha) * x.powf(1.0 + alpha)
            }
            GrowthFamily::Log => {
                let ln = (PI / x).ln();
                0.5 * PI * x * (2.0 / ln + 1.0 / (ln * ln))
            }
            GrowthFamily::LogLog => {
                let ln = (PI / x).ln();
                let lnln = ln.ln();
                0.5 * PI * x * (2.0 / lnln + 1.0 / (ln * lnln * lnln))
            }
            // For nondecreasing g >= 0, (x g)' = g + x g' >= g a.e.
            GrowthFamily::Table { .. } => self.table_interp(x),
        }
    }

    fn table_interp(&self, x: f64) -> f64 {
        let xs = &self.table_x;
        let gs = &self.table_g;
        if x <= xs[0] {
            // Linear through the origin keeps g nondecreasing with g(0+) = 0.
            return gs[0] * x / xs[0];
        }
        if x >= *xs.last().unwrap() {
            return *gs.last().unwrap();
        }
        let i = xs.partition_point(|&p| p < x);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (g0, g1) = (gs[i - 1], gs[i]);
        g0 + (g1 - g0) * (x - x0) / (x1 - x0)
    }
}

/// Geometry and provisioning knobs of the ladder builder.
#[derive(Debug, Clone)]
pub struct LadderConfig {
    /// Coarsest scale a_0 and the isolation gap between blocks.
    pub base_scale: f64,
    /// Number of halvings; scales run a_0 2^0 .. a_0 2^-levels.
    pub levels: usize,
    /// Safety factor multiplying h in counts and verification.
    pub safety: f64,
    /// Smallest cube side the construction provisions for.
    pub l_min: usize,
    /// Largest cube side the construction provisions for.
    pub l_max: usize,
    /// Entropy demanded per side, as a multiple of F_L.
    pub demand_margin: f64,
    /// Geometric grid resolution used by the provisioner.
    pub grid_points: usize,
    /// Hard cap on the total interval count.
    pub max_intervals: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            base_scale: 0.05,
            levels: 6,
            safety: 4.0 * PI,
            l_min: 8,
            l_max: 512,
            demand_margin: 1.25,
            grid_points: 13,
            max_intervals: 4096,
        }
    }
}

impl LadderConfig {
    fn validate(&self) -> Result<(), ConstructorError> {
        let bad = |reason: &str| {
            Err(ConstructorError::BadConfig {
                reason: reason.into(),
            })
        };
        if !(self.base_scale > 0.0 && self.base_scale <= 0.5) {
            return bad("base_scale must lie in (0, 0.5]");
        }
        if self.levels == 0 || self.levels > 24 {
            return bad("levels must lie in 1..=24");
        }
        if !(self.safety > 0.0 && self.safety.is_finite()) {
            return bad("safety must be positive and finite");
        }
        if self.l_min < 2 || self.l_max <= self.l_min {
            return bad("need 2 <= l_min < l_max");
        }
        if !(0.5..=10.0).contains(&self.demand_margin) {
            return bad("demand_margin must lie in [0.5, 10]");
        }
        if self.grid_points < 2 {
            return bad("grid_points must be at least 2");
        }
        if self.max_intervals == 0 {
            return bad("max_intervals must be positive");
        }
        Ok(())
    }

    fn scales(&self) -> Vec<f64> {
        (0..=self.levels)
            .map(|k| self.base_scale * 0.5f64.powi(k as i32))
            .collect()
    }
}

/// Per-scale interval counts of a planned ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleLadder {
    /// Dyadic scales a_k, descending.
    pub scales: Vec<f64>,
    /// Interval counts N_k per scale.
    pub counts: Vec<usize>,
}

impl ScaleLadder {
    pub fn total_intervals(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Entropy yield model for one isolated momentum interval of length a at
/// cube side L: zero below the resolution threshold L a = 1, then the
/// logarithmic law ln(L a) / 3 plus a conservative offset.
fn interval_yield(u: f64) -> f64 {
    if u < 1.0 {
        0.0
    } else {
        u.ln() / 3.0 + 0.30
    }
}

/// Smallest value of L a at which the provisioner trusts the yield model.
const YIELD_TRUST: f64 = 4.0;

/// Plans per-scale counts: the h-minorant floor, then greedy entropy
/// provisioning over a descending geometric grid of sides.
pub fn plan_ladder(profile: &GrowthProfile, config: &LadderConfig) -> ScaleLadder {
    let scales = config.scales();
    let mut counts: Vec<usize> = scales
        .iter()
        .map(|&a| (config.safety * profile.h(a) / a).ceil() as usize)
        .collect();
    let grid = geometric_grid(config.l_min, config.l_max, config.grid_points);
    for &l in grid.iter().rev() {
        let target = profile.target_entropy(l as f64);
        if !target.is_finite() {
            continue;
        }
        let demand = config.demand_margin * target;
        let supply: f64 = counts
            .iter()
            .zip(&scales)
            .map(|(&n, &a)| n as f64 * interval_yield(l as f64 * a))
            .sum();
        let deficit = demand - supply;
        if deficit <= 0.0 {
            continue;
        }
        // Finest scale the yield model still trusts at this side; finer
        // scales pack more entropy per unit of circle.
        let Some(k) = scales
            .iter()
            .rposition(|&a| l as f64 * a >= YIELD_TRUST)
        else {
            continue;
        };
        counts[k] += (deficit / interval_yield(l as f64 * scales[k])).ceil() as usize;
    }
    ScaleLadder { scales, counts }
}

/// Places the ladder on the circle: per scale, N_k intervals of length a_k
/// with intra-block gaps a_k; blocks separated by gaps a_0; margins a_0 at
/// both seam sides so the wrap gap never undercuts the isolation gap.
pub fn layout_ladder(
    ladder: &ScaleLadder,
    base_scale: f64,
    max_intervals: usize,
) -> Result<IntervalUnion, ConstructorError> {
    let total = ladder.total_intervals();
    if total > max_intervals {
        return Err(ConstructorError::BudgetExceeded {
            intervals: total,
            budget: max_intervals,
        });
    }
    let a0 = base_scale;
    let mut pairs = Vec::with_capacity(total);
    let mut cursor = -PI + a0;
    for (&n, &a) in ladder.counts.iter().zip(&ladder.scales) {
        for i in 0..n {
            pairs.push((cursor, cursor + a));
            cursor += a;
            if i + 1 < n {
                cursor += a;
            }
        }
        if n > 0 {
            cursor += a0;
        }
    }
    if cursor > PI {
        return Err(ConstructorError::SpanExceeded {
            span: cursor - a0 + PI - a0,
            available: 2.0 * PI - 2.0 * a0,
        });
    }
    Ok(IntervalUnion::new(&pairs)?)
}

/// Outcome of checking Lambda_M(a) >= safety h(a) on a dense shift grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorantReport {
    pub ok: bool,
    /// Smallest value of Lambda(a) - safety h(a) over the grid.
    pub worst_margin: f64,
    /// Shift at which the worst margin occurs.
    pub worst_a: f64,
    pub samples: usize,
}

/// Verifies the minorant on a log-spaced grid of shifts in
/// [base_scale / 1000, base_scale].
pub fn verify_lambda_minorant(
    union: &IntervalUnion,
    profile: &GrowthProfile,
    safety: f64,
    base_scale: f64,
    samples: usize,
) -> MinorantReport {
    let samples = samples.max(16);
    let lo = base_scale * 1e-3;
    let ratio = (base_scale / lo).powf(1.0 / (samples as f64 - 1.0));
    let mut worst_margin = f64::INFINITY;
    let mut worst_a = lo;
    for i in 0..samples {
        let a = lo * ratio.powi(i as i32);
        let margin = union.lambda(a) - safety * profile.h(a);
        if margin < worst_margin {
            worst_margin = margin;
            worst_a = a;
        }
    }
    MinorantReport {
        ok: worst_margin >= -1e-12,
        worst_margin,
        worst_a,
        samples,
    }
}

/// A constructed sea with its ladder data and minorant certificate.
#[derive(Debug, Clone)]
pub struct ExoticSea {
    pub union: IntervalUnion,
    pub ladder: ScaleLadder,
    pub safety: f64,
    pub base_scale: f64,
    pub minorant: MinorantReport,
}

/// Builds the ladder sea for a growth profile and certifies its minorant.
pub fn build_exotic_sea(
    profile: &GrowthProfile,
    config: &LadderConfig,
) -> Result<ExoticSea, ConstructorError> {
    config.validate()?;
    let ladder = plan_ladder(profile, config);
    let union = layout_ladder(&ladder, config.base_scale, config.max_intervals)?;
    let minorant =
        verify_lambda_minorant(&union, profile, config.safety, config.base_scale, 768);
    if !minorant.ok {
        return Err(ConstructorError::VerificationFailed {
            what: "translation-defect minorant".into(),
            detail: format!(
                "margin {:.3e} at shift {:.6e}",
                minorant.worst_margin, minorant.worst_a
            ),
        });
    }
    Ok(ExoticSea {
        union,
        ladder,
        safety: config.safety,
        base_scale: config.base_scale,
        minorant,
    })
}

/// Embeds a one-dimensional sea into dimension d as
/// (full circle)^(d-1) x M, so every axis but the last is irrelevant and
/// S_L factors as L^(d-1) times the one-dimensional entropy.
pub fn lift_to_dimension(union: &IntervalUnion, dim: usize) -> FermiSea {
    if dim <= 1 {
        return FermiSea::Union(union.clone());
    }
    let mut axes = vec![IntervalUnion::full(); dim - 1];
    axes.push(union.clone());
    FermiSea::Product(axes)
}

/// One side of the entropy-vs-target comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTargetRow {
    pub l: usize,
    pub entropy_nats: f64,
    pub target: f64,
}

/// Entropy verification summary over a grid of sides.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVerification {
    pub rows: Vec<EntropyTargetRow>,
    /// Smallest grid side from which S_L >= F_L holds through the end of
    /// the grid; None when even the largest side falls short.
    pub l_star: Option<usize>,
}

/// Computes S_L over the grid and locates the onset side l_star.
pub fn verify_entropy_target(
    sea: &FermiSea,
    profile: &GrowthProfile,
    l_grid: &[usize],
    cap: usize,
) -> Result<EntropyVerification, ConstructorError> {
    let mut grid: Vec<usize> = l_grid.iter().copied().filter(|&l| l >= 1).collect();
    grid.sort_unstable();
    grid.dedup();
    let mut rows = Vec::with_capacity(grid.len());
    for &l in &grid {
        let table = coefficient_table(sea, l)?;
        let rs = build_restricted(&table, l)?;
        let record = entropy_of_state(&rs, cap)?;
        rows.push(EntropyTargetRow {
            l,
            entropy_nats: record.entropy_nats,
            target: profile.target_entropy(l as f64),
        });
    }
    let mut l_star = None;
    for row in rows.iter().rev() {
        if row.entropy_nats >= row.target {
            l_star = Some(row.l);
        } else {
            break;
        }
    }
    Ok(EntropyVerification { rows, l_star })
}

/// A construction that passed both verifications.
#[derive(Debug, Clone)]
pub struct VerifiedConstruction {
    pub sea: ExoticSea,
    pub verification: EntropyVerification,
    /// True when the first attempt missed the entropy target and the
    /// safety factor was doubled once to provision more intervals.
    pub safety_doubled: bool,
}

/// Builds and verifies a sea end to end. If the first attempt fails either
/// verification, the safety factor is doubled once — more intervals at
/// every scale — and the attempt repeats; a second failure is returned.
pub fn construct_verified(
    profile: &GrowthProfile,
    config: &LadderConfig,
    l_grid: &[usize],
    cap: usize,
) -> Result<VerifiedConstruction, ConstructorError> {
    let attempt = |cfg: &LadderConfig| -> Result<(ExoticSea, EntropyVerification), ConstructorError> {
        let sea = build_exotic_sea(profile, cfg)?;
        let verification =
            verify_entropy_target(&FermiSea::Union(sea.union.clone()), profile, l_grid, cap)?;
        Ok((sea, verification))
    };
    match attempt(config) {
        Ok((sea, verification)) if verification.l_star.is_some() => Ok(VerifiedConstruction {
            sea,
            verification,
            safety_doubled: false,
        }),
        Ok(_) | Err(ConstructorError::VerificationFailed { .. }) => {
            let mut doubled = config.clone();
            doubled.safety *= 2.0;
            let (sea, verification) = attempt(&doubled)?;
            if verification.l_star.is_none() {
                return Err(ConstructorError::VerificationFailed {
                    what: "entropy target".into(),
                    detail: format!(
                        "S_L < F_L at the largest verified side even after doubling safety to {:.3}",
                        doubled.safety
                    ),
                });
            }
            Ok(VerifiedConstruction {
                sea,
                verification,
                safety_doubled: true,
            })
        }
        Err(e) => Err(e),
    }
}
