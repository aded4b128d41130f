//! Acceptance suite: one test per release criterion, each asserting the
//! documented bound and printing a single summary line.  Every criterion is
//! a hard gate; there are no advisory checks.
//!
//! 01 closed-form golden values at half filling
//! 02 exact identity vs entrywise trace and quadrature on a random corpus
//! 03 defect-functional property sweep (1000 seeded triples)
//! 04 d=1 logarithmic scaling with fitted slope in [0.30, 0.37]
//! 05 d=2 surface-log scaling with positive coefficient and stable ratio
//! 06 tensor-lift identity S_L(full x M) = L * S_L(M)
//! 07 Fejér kernel identities and positive prefix constants
//! 08 growth construction pipeline for F_L = L / ln L
//! 09 eigenvalue range across a representative corpus
//! 10 byte determinism of scans across worker counts

use fermisea::bounds::{
    fhm_bound_exact, fhm_bound_quadrature, kernel_identity_diagnostics,
    kernel_integral_constants, QuadraturePlan,
};
use fermisea::cli::{fit_scaling, FitModel};
use fermisea::constructor::{construct_verified, GrowthFamily, GrowthProfile, LadderConfig};
use fermisea::corpus::random_interval_union;
use fermisea::fermi_sea::{FermiSea, IntervalUnion, TorusVector};
use fermisea::spectrum::{eigenvalues, entropy_of_state, trace_purity_bound};
use fermisea::symbol::{build_restricted, coefficient_table};
use fermisea::util::geometric_grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command;

const LN_2: f64 = std::f64::consts::LN_2;
/// 2 eta(1/2 + 1/pi) to 20 digits.
const S_TWO: f64 = 0.94789326746755503592;
/// 1/2 - 2/pi^2 to 20 digits.
const TRACE_TWO: f64 = 0.29735763271532445711;

fn half_circle() -> FermiSea {
    FermiSea::Union(IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap())
}

fn entropy(sea: &FermiSea, l: usize, cap: usize) -> f64 {
    let table = coefficient_table(sea, l).unwrap();
    let rs = build_restricted(&table, l).unwrap();
    entropy_of_state(&rs, cap).unwrap().entropy_nats
}

#[test]
fn criterion_01_closed_form_goldens() {
    let sea = half_circle();
    let t1 = coefficient_table(&sea, 1).unwrap();
    let q1 = build_restricted(&t1, 1).unwrap();
    let r1 = entropy_of_state(&q1, 16).unwrap();
    assert!((r1.entropy_nats - LN_2).abs() < 1e-12, "S_1 = {}", r1.entropy_nats);
    assert!((r1.trace_bound - 0.25).abs() < 1e-12, "T_1 = {}", r1.trace_bound);

    let t2 = coefficient_table(&sea, 2).unwrap();
    let q2 = build_restricted(&t2, 2).unwrap();
    let r2 = entropy_of_state(&q2, 16).unwrap();
    assert!((r2.entropy_nats - S_TWO).abs() < 1e-9, "S_2 = {}", r2.entropy_nats);
    assert!((r2.trace_bound - TRACE_TWO).abs() < 1e-12, "T_2 = {}", r2.trace_bound);
    println!(
        "ACCEPTANCE 01 PASS: S_1 = ln 2 and S_2 = 2 eta(1/2 + 1/pi) with exact trace bounds"
    );
}

#[test]
fn criterion_02_exact_identity_on_random_corpus() {
    let plan = QuadraturePlan::default();
    let mut worst_trace: f64 = 0.0;
    let mut worst_quad: f64 = 0.0;
    for seed in 0..20u64 {
        let sea = FermiSea::Union(random_interval_union(seed, 5, 0.05));
        for l in 1..=32usize {
            let exact = fhm_bound_exact(&sea, l).unwrap();
            let table = coefficient_table(&sea, l).unwrap();
            let q = build_restricted(&table, l).unwrap();
            let trace = trace_purity_bound(&q);
            let scale = exact.abs().max(1e-30);
            worst_trace = worst_trace.max((exact - trace).abs() / scale);
            let quad = fhm_bound_quadrature(&sea, l, &plan).unwrap();
            worst_quad = worst_quad.max((exact - quad).abs() / scale);
        }
    }
    assert!(worst_trace <= 1e-10, "trace route deviates by {worst_trace:.3e}");
    assert!(worst_quad <= 1e-6, "quadrature route deviates by {worst_quad:.3e}");
    println!(
        "ACCEPTANCE 02 PASS: 20 seas x L = 1..32, trace gap {worst_trace:.2e}, quadrature gap {worst_quad:.2e}"
    );
}

#[test]
fn criterion_03_defect_property_sweep() {
    for seed in 0..1000u64 {
        let union = random_interval_union(seed, 6, 0.05);
        let sea = FermiSea::Union(union.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let a: f64 = rng.gen_range(-PI..PI);
        let b: f64 = rng.gen_range(-PI..PI);
        let lam = |x: f64| {
            sea.lambda_measure(&TorusVector::scalar(x).unwrap()).unwrap()
        };
        assert!(lam(a + b) <= lam(a) + lam(b) + 1e-9, "subadditivity, seed {seed}");
        assert!((lam(a) - lam(-a)).abs() <= 1e-12, "symmetry, seed {seed}");
        assert_eq!(lam(0.0), 0.0, "Lambda(0), seed {seed}");
        let cap = union.measure().min(2.0 * PI - union.measure());
        assert!(lam(a) >= 0.0 && lam(a) <= cap + 1e-12, "range, seed {seed}");
    }
    println!("ACCEPTANCE 03 PASS: 1000 seeded triples satisfy the defect properties");
}

#[test]
fn criterion_04_d1_log_scaling() {
    let sea = half_circle();
    let sides = geometric_grid(64, 512, 7);
    let points: Vec<(usize, f64)> = sides.iter().map(|&l| (l, entropy(&sea, l, 1024))).collect();
    let fit = fit_scaling(&points, 1, FitModel::LogLinear).unwrap();
    assert!(fit.coefficient > 0.0, "slope must be positive");
    assert!(
        (0.30..=0.37).contains(&fit.coefficient),
        "slope {} outside [0.30, 0.37]",
        fit.coefficient
    );
    println!(
        "ACCEPTANCE 04 PASS: d=1 half filling, fitted slope {:.5} in [0.30, 0.37] over L = {sides:?}",
        fit.coefficient
    );
}

#[test]
fn criterion_05_d2_surface_log_scaling() {
    let quarter = IntervalUnion::new(&[(0.0, PI)]).unwrap();
    let sea = FermiSea::Product(vec![quarter.clone(), quarter]);
    let sides = geometric_grid(4, 32, 7);
    let points: Vec<(usize, f64)> = sides.iter().map(|&l| (l, entropy(&sea, l, 2304))).collect();
    let fit = fit_scaling(&points, 2, FitModel::SurfaceLog).unwrap();
    assert!(fit.coefficient > 0.0, "surface-log coefficient must be positive");

    // Ratio stability over the top half of the range.
    let top: Vec<f64> = points
        .iter()
        .filter(|(l, _)| *l * 2 >= *sides.last().unwrap())
        .map(|(l, s)| s / (*l as f64 * (*l as f64).ln()))
        .collect();
    let (lo, hi) = top
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    let variation = hi / lo - 1.0;
    assert!(variation < 0.30, "S / (L ln L) varies by {variation:.3} over the top half");
    println!(
        "ACCEPTANCE 05 PASS: d=2 quarter filling, c = {:.4} > 0, top-half ratio variation {:.1}%",
        fit.coefficient,
        variation * 100.0
    );
}

#[test]
fn criterion_06_tensor_lift_identity() {
    let seas = [
        IntervalUnion::new(&[(-PI / 2.0, PI / 2.0)]).unwrap(),
        IntervalUnion::new(&[(-2.0, -0.8), (0.4, 1.9)]).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for base in &seas {
        let one_d = FermiSea::Union(base.clone());
        let lift = FermiSea::Product(vec![IntervalUnion::full(), base.clone()]);
        for l in [2usize, 4, 8, 16] {
            let s1 = entropy(&one_d, l, 1024);
            let s2 = entropy(&lift, l, 1024);
            worst = worst.max((s2 - l as f64 * s1).abs());
        }
    }
    assert!(worst <= 1e-8, "lift identity violated by {worst:.3e}");
    println!("ACCEPTANCE 06 PASS: S_L(full x M) = L S_L(M) to {worst:.2e} for L <= 16");
}

#[test]
fn criterion_07_fejer_kernel_checks() {
    let all_sides: Vec<usize> = (1..=64).collect();
    let diag = kernel_identity_diagnostics(&all_sides, 12);
    assert!(
        diag.max_mass_rel_err <= 1e-8,
        "mass identity off by {:.3e}",
        diag.max_mass_rel_err
    );
    assert!(
        diag.min_plateau_ratio >= 1.0 - 1e-12,
        "plateau bound ratio {} < 1",
        diag.min_plateau_ratio
    );
    let constants = kernel_integral_constants(&[16, 32, 64, 128, 256, 512], 0.1, 12);
    assert!(constants.c1_est > 0.0, "c1 = {}", constants.c1_est);
    assert!(constants.c2_est > 0.0, "c2 = {}", constants.c2_est);
    println!(
        "ACCEPTANCE 07 PASS: mass identity to {:.1e}, plateau ratio {:.6}, c1 = {:.4}, c2 = {:.4}",
        diag.max_mass_rel_err, diag.min_plateau_ratio, constants.c1_est, constants.c2_est
    );
}

#[test]
fn criterion_08_growth_construction_pipeline() {
    let profile = GrowthProfile::new(GrowthFamily::Log).unwrap();
    let config = LadderConfig::default();
    let grid = geometric_grid(config.l_min, config.l_max, config.grid_points);
    let built = construct_verified(&profile, &config, &grid, 4096).unwrap();
    assert!(built.sea.minorant.ok, "minorant check failed");
    assert!(
        built.sea.minorant.worst_margin >= 0.0,
        "worst margin {}",
        built.sea.minorant.worst_margin
    );
    let l_star = built.verification.l_star.expect("entropy target not reached in range");
    assert!(grid.contains(&l_star) || l_star <= *grid.last().unwrap());
    println!(
        "ACCEPTANCE 08 PASS: F = L / ln L sea with {} intervals, margin {:.3e}, L* = {l_star}{}",
        built.sea.ladder.total_intervals(),
        built.sea.minorant.worst_margin,
        if built.safety_doubled { " (after one documented safety doubling)" } else { "" }
    );
}

#[test]
fn criterion_09_eigenvalue_range() {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut count = 0usize;
    let mut scan = |sea: &FermiSea, l: usize| {
        let table = coefficient_table(sea, l).unwrap();
        let q = build_restricted(&table, l).unwrap();
        let spectrum = eigenvalues(&q, 4096).unwrap();
        for &v in &spectrum.eigenvalues {
            lo = lo.min(v);
            hi = hi.max(v);
            count += 1;
        }
    };
    for seed in 0..20u64 {
        let sea = FermiSea::Union(random_interval_union(seed, 5, 0.05));
        for l in [4usize, 16, 32] {
            scan(&sea, l);
        }
    }
    scan(&half_circle(), 32);
    let quarter = IntervalUnion::new(&[(0.0, PI)]).unwrap();
    scan(&FermiSea::Product(vec![quarter.clone(), quarter]), 8);
    let profile = GrowthProfile::new(GrowthFamily::Log).unwrap();
    let built = fermisea::constructor::build_exotic_sea(&profile, &LadderConfig::default()).unwrap();
    scan(&FermiSea::Union(built.union), 64);
    assert!(lo >= -1e-9, "eigenvalue {lo} below -1e-9");
    assert!(hi <= 1.0 + 1e-9, "eigenvalue {hi} above 1 + 1e-9");
    println!("ACCEPTANCE 09 PASS: {count} eigenvalues in [{lo:.3e}, {hi:.12}]");
}

#[test]
fn criterion_10_worker_determinism() {
    let bin = env!("CARGO_BIN_EXE_fermisea");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    // Random-corpus scan (the criterion-02 domain) at both worker counts.
    let corpus = ["entropy-scan", "--sea", "random", "--seed", "2", "--dim", "1", "--L", "1..32"];
    let c1 = run(&[&corpus[..], &["--workers", "1"]].concat());
    let c8 = run(&[&corpus[..], &["--workers", "8"]].concat());
    assert_eq!(c1, c8, "corpus scan bytes differ across worker counts");

    // Half-filling scaling sweep (the criterion-04 domain).
    const HALF: &str = r#"{"type":"union","intervals":[[-1.5707963267948966,1.5707963267948966]]}"#;
    let sweep = ["entropy-scan", "--inline", HALF, "--L", "geom:64..512:7"];
    let s1 = run(&[&sweep[..], &["--workers", "1"]].concat());
    let s8 = run(&[&sweep[..], &["--workers", "8"]].concat());
    assert_eq!(s1, s8, "scaling sweep bytes differ across worker counts");
    println!("ACCEPTANCE 10 PASS: scans are byte-identical at --workers 1 and --workers 8");
}
