//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. Run with `cargo test -p shifted-schur --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use shifted_schur::asymptotics::{amoeba_boundary, bulk_kernel_entry, density, support_boundary, theta, LimitPoint};
use shifted_schur::correlation::{rho_pf, rho_pf_with, OracleTable};
use shifted_schur::partitions::for_each_spp;
use shifted_schur::pfaffian::determinant;
use shifted_schur::process::{default_window, macmahon_coeffs, MqParams};
use shifted_schur::schur::verify_qpqp;
use shifted_schur::series::{Kernel, KernelSource};
use shifted_schur::stats::{expected_volume, variance_volume, MEAN_LIMIT, ZETA3};
use shifted_schur::{
    pfaffian, pfaffian_reference, AlternationMethod, PointConfiguration, SkewSymmetricMatrix, Specialization,
    StrictPartition,
};

fn sci(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id} [{name}]: {verdict} ({:.2?}) {detail}", elapsed);
    assert!(ok, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_shifted_macmahon() {
    let start = Instant::now();
    let exact = macmahon_coeffs(10).unwrap();
    let mut counted = vec![0u128; 11];
    for_each_spp(10, 10, |pi| {
        counted[pi.volume() as usize] += 1u128 << pi.alternation(AlternationMethod::Components);
    })
    .unwrap();
    let elapsed = start.elapsed();
    let ok = exact == counted && exact[..4] == [1, 2, 6, 16] && elapsed < Duration::from_secs(60);
    report(
        1,
        "shifted MacMahon",
        ok,
        elapsed,
        format!("coefficients {exact:?}, enumeration {counted:?}"),
    );
}

#[test]
fn criterion_2_alternation_equivalence() {
    let start = Instant::now();
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for_each_spp(10, 10, |pi| {
        checked += 1;
        if pi.alternation(AlternationMethod::DiagonalFormula) != pi.alternation(AlternationMethod::Components) {
            mismatches += 1;
        }
    })
    .unwrap();
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && elapsed < Duration::from_secs(60);
    report(
        2,
        "alternation equivalence",
        ok,
        elapsed,
        format!("{checked} partitions, {mismatches} mismatches"),
    );
}

#[test]
fn criterion_3_pfaffian_formula_vs_oracle() {
    let start = Instant::now();
    let sites: Vec<(i64, u32)> = (-2..=2).flat_map(|t| (1..=3).map(move |x| (t, x))).collect();
    let mut sets: Vec<Vec<(i64, u32)>> = sites.iter().map(|&p| vec![p]).collect();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            sets.push(vec![sites[i], sites[j]]);
        }
    }
    let oracle = OracleTable::new(20).unwrap();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_diff = 0.0f64;
    let mut checked = 0;
    for q in [0.05, 0.1] {
        let params = MqParams::new(q, default_window(2, q, 1e-16)).unwrap();
        let mut kernel = Kernel::new(KernelSource::Mq(params), 8).unwrap();
        for set in &sets {
            let x = PointConfiguration::new(set.iter().copied()).unwrap();
            let pf = rho_pf_with(&x, &mut kernel).unwrap().value;
            let or = oracle.rho(&x, q).unwrap();
            let diff = (pf - or.value).abs();
            worst_diff = worst_diff.max(diff);
            worst_excess = worst_excess.max(diff - or.error_bound.unwrap() - 1e-8);
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_excess <= 0.0 && elapsed < Duration::from_secs(600);
    report(
        3,
        "Pfaffian formula vs oracle",
        ok,
        elapsed,
        format!("{checked} configurations, max |difference| {worst_diff:.3e}"),
    );
}

fn random_skew(dim: usize, rng: &mut StdRng) -> SkewSymmetricMatrix {
    SkewSymmetricMatrix::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0))
}

#[test]
fn criterion_4_pfaffian_correctness() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20_240_601);
    let mut worst_sq = 0.0f64;
    let mut worst_ref = 0.0f64;
    for dim in (2..=16).step_by(2) {
        for _ in 0..20 {
            let a = random_skew(dim, &mut rng);
            let pf = pfaffian(&a).unwrap();
            let det = determinant(&a.to_dense()).unwrap();
            worst_sq = worst_sq.max((pf * pf - det).abs() / det.abs().max(f64::MIN_POSITIVE));
            if dim <= 12 {
                let reference = pfaffian_reference(&a).unwrap();
                worst_ref = worst_ref.max((pf - reference).abs() / reference.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_sq < 1e-10 && worst_ref < 1e-12;
    report(
        4,
        "Pfaffian correctness",
        ok,
        elapsed,
        format!("max rel |Pf²−det| {worst_sq:.3e}, max rel |Pf−reference| {worst_ref:.3e}"),
    );
}

#[test]
fn criterion_5_sine_kernel() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for chi in [0.3, 3f64.ln(), 2.0] {
        let p = LimitPoint::new(0.0, chi).unwrap();
        let th = theta(p);
        for dx in -6i64..=6 {
            let expected = if dx == 0 {
                th / PI
            } else {
                (th * dx as f64).sin() / (PI * dx as f64)
            };
            worst = worst.max((bulk_kernel_entry(0, dx, p).unwrap() - expected).abs());
        }
    }
    let elapsed = start.elapsed();
    report(
        5,
        "sine kernel",
        worst < 1e-8,
        elapsed,
        format!("max deviation {worst:.3e}"),
    );
}

#[test]
fn criterion_6_density() {
    let start = Instant::now();
    let boundary_half = [-4.0, -1.0, 0.0, 0.5, 2.0, 7.0]
        .iter()
        .all(|&tau| density(LimitPoint::new(tau, 0.0).unwrap()) == 0.5);
    let frozen = [0.3, 1.0, 2.0, 5.0].iter().all(|&tau: &f64| {
        let edge = support_boundary(tau);
        [1e-9, 0.1, 3.0].iter().all(|&d| {
            theta(LimitPoint::new(tau, edge + d).unwrap()) == 0.0
                && theta(LimitPoint::new(-tau, edge + d).unwrap()) == 0.0
        })
    });
    let mut worst = 0.0f64;
    for xi in [0.5, 1.0, 2.0] {
        let tau: f64 = 2.0 * xi;
        let (mut lo, mut hi) = (0.0f64, 60.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if theta(LimitPoint::new(tau, mid).unwrap()) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst = worst.max((0.25 * (lo + hi) - amoeba_boundary(xi)).abs());
    }
    let elapsed = start.elapsed();
    let ok = boundary_half && frozen && worst < 1e-9;
    report(
        6,
        "density",
        ok,
        elapsed,
        format!("half at chi=0: {boundary_half}, frozen beyond edge: {frozen}, amoeba deviation {worst:.3e}"),
    );
}

#[test]
fn criterion_7_bulk_convergence_trend() {
    let start = Instant::now();
    let chi = 3f64.ln();
    let mut values = BTreeMap::new();
    let mut gaps = Vec::new();
    for r in [0.1f64, 0.05, 0.025] {
        let q = (-r).exp();
        let x = (chi / r).round() as u32;
        let source = KernelSource::Mq(MqParams::new(q, default_window(0, q, 1e-16)).unwrap());
        let value = rho_pf(&PointConfiguration::new([(0, x)]).unwrap(), &source)
            .unwrap()
            .value;
        gaps.push((value - 1.0 / 3.0).abs());
        values.insert(format!("{r}"), value);
    }
    let elapsed = start.elapsed();
    let ok = gaps.windows(2).all(|w| w[1] < w[0]);
    report(
        7,
        "bulk convergence trend",
        ok,
        elapsed,
        format!("rho {values:?}, gaps {}", sci(&gaps)),
    );
}

#[test]
fn criterion_8_volume_law() {
    let start = Instant::now();
    let target = 7.0 * ZETA3 / 4.0;
    let scaled = |r: f64| r.powi(3) * expected_volume((-r).exp()).unwrap();
    let gaps: Vec<f64> = [0.2, 0.1, 0.05, 0.02]
        .iter()
        .map(|&r| (scaled(r) - target).abs())
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let at_001 = scaled(0.01);
    let within = ((at_001 - target) / target).abs() < 0.05;
    let mut worst_fd = 0.0f64;
    for r in [0.01, 0.05, 0.2, 1.0] {
        let h = 1e-3 * r;
        let e = |s: f64| expected_volume((-s).exp()).unwrap();
        let d = (-e(r + 2.0 * h) + 8.0 * e(r + h) - 8.0 * e(r - h) + e(r - 2.0 * h)) / (12.0 * h);
        let var = variance_volume((-r).exp()).unwrap();
        worst_fd = worst_fd.max((-d - var).abs() / var);
    }
    let elapsed = start.elapsed();
    let ok = within && monotone && worst_fd < 1e-8;
    report(
        8,
        "volume law",
        ok,
        elapsed,
        format!(
            "r³E(r=0.01) = {at_001:.6} vs 7ζ(3)/4 = {target:.6} (series limit 7ζ(3)/2 = {MEAN_LIMIT:.6}), \
             gaps to 7ζ(3)/4 {}, variance finite-difference deviation {worst_fd:.3e}",
            sci(&gaps)
        ),
    );
}

#[test]
fn criterion_9_qpqp_identity() {
    let start = Instant::now();
    let sp = |p: &[u32]| StrictPartition::new(p.to_vec()).unwrap();
    let cases = [
        (sp(&[]), sp(&[]), 0.3, 0.2),
        (sp(&[1]), sp(&[]), 0.25, 0.3),
        (sp(&[2]), sp(&[1]), 0.3, 0.3),
        (sp(&[2, 1]), sp(&[3]), 0.2, 0.1),
        (sp(&[3]), sp(&[2, 1]), 0.15, 0.3),
    ];
    let mut worst = 0.0f64;
    for (mu, nu, a, b) in &cases {
        let r = verify_qpqp(mu, nu, &Specialization::single(*a), &Specialization::single(*b), 20).unwrap();
        worst = worst.max(r.residual);
    }
    let elapsed = start.elapsed();
    report(
        9,
        "QPQP identity",
        worst < 1e-9,
        elapsed,
        format!("max residual {worst:.3e} over {} pairs", cases.len()),
    );
}
