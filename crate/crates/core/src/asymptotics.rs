//! Bulk scaling limits as `q = e^{−r} → 1` with `r t → τ`, `r x → χ`:
//! the angle `θ(τ, χ)`, the limiting density `θ/π`, the extended sine
//! kernel, the boundary Pfaffian at `χ = 0`, and the limit shape.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pfaffian::{determinant, pfaffian, SkewSymmetricMatrix};
use crate::quadrature::{integrate, integrate_real};

/// Bulk formulas are used from this `χ` on.
pub const MIN_BULK_CHI: f64 = 1e-9;
const KERNEL_TOL: f64 = 1e-13;
const SHAPE_TOL: f64 = 1e-12;
/// Beyond this `χ` the density is below `e^{−40}`.
const SHAPE_CUTOFF: f64 = 80.0;

/// A macroscopic position `(τ, χ)` with `χ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub tau: f64,
    pub chi: f64,
}

impl LimitPoint {
    pub fn new(tau: f64, chi: f64) -> Result<Self> {
        if !tau.is_finite() || !chi.is_finite() || chi < 0.0 {
            return Err(Error::InvalidInput(format!(
                "need finite tau and chi >= 0, got ({tau}, {chi})"
            )));
        }
        Ok(Self { tau, chi })
    }
}

/// Microscopic window around a limit point: integer offsets `(Δt, Δx)` of
/// each point, and for the `χ = 0` case the actual parts `x_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub offsets: Vec<(i64, i64)>,
    pub boundary_parts: Option<Vec<u32>>,
}

impl WindowConfig {
    pub fn bulk(offsets: Vec<(i64, i64)>) -> Self {
        Self {
            offsets,
            boundary_parts: None,
        }
    }

    /// Points at time offsets `dt[i]` with parts `x[i]`.
    pub fn boundary(dt: Vec<i64>, parts: Vec<u32>) -> Result<Self> {
        if dt.len() != parts.len() {
            return Err(Error::InvalidInput("time offsets and parts differ in length".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidInput("boundary parts must be positive".into()));
        }
        Ok(Self {
            offsets: dt.into_iter().zip(&parts).map(|(t, &x)| (t, x as i64)).collect(),
            boundary_parts: Some(parts),
        })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// `cos θ = cosh(τ/2)·tanh(χ/2)`; `θ = 0` once this reaches 1.
pub fn theta(p: LimitPoint) -> f64 {
    let a = p.tau.abs() / 2.0;
    let b = p.chi / 2.0;
    let arg = a.cosh() * b.tanh();
    if arg <= 0.5 {
        return arg.acos();
    }
    // 1 − arg without cancellation
    let (ch, sh) = ((a / 2.0).cosh(), (a / 2.0).sinh());
    let e2b = (-2.0 * b).exp();
    let one_minus = 2.0 * (ch * ch * e2b - sh * sh) / (1.0 + e2b);
    if one_minus <= 0.0 {
        return 0.0;
    }
    2.0 * one_minus.sqrt().atan2((1.0 + arg).sqrt())
}

/// Limiting density `θ/π` of the plane diagram.
pub fn density(p: LimitPoint) -> f64 {
    theta(p) / PI
}

/// The `χ` beyond which the density vanishes: `2 log((e^{|τ|/2}+1)/(e^{|τ|/2}−1))`,
/// infinite at `τ = 0`.
pub fn support_boundary(tau: f64) -> f64 {
    2.0 * amoeba_boundary(tau / 2.0)
}

/// `ω = log((e^{|ξ|}+1)/(e^{|ξ|}−1))`, the upper boundary of the amoeba of
/// `−1 + z + w + zw` in coordinates `(ξ, ω) = (τ/2, χ/2)`.
pub fn amoeba_boundary(xi: f64) -> f64 {
    let e = xi.abs();
    if e == 0.0 {
        return f64::INFINITY;
    }
    ((e.exp() + 1.0) / e.exp_m1()).ln()
}

/// A contour integral with its numerical diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelEntry {
    pub value: f64,
    pub imag_residual: f64,
    pub error_estimate: f64,
}

/// `(1/2πi) ∫ ((1−z)/(1+z))^{Δt} z^{−e−1} dz` over the arc of radius `R`
/// through angles `[−θ, θ]` (counterclockwise) when `Δt ≥ 0`, and over the
/// complementary arc (clockwise) otherwise.
fn arc_integral(dt: i64, exponent: i64, radius: f64, theta: f64) -> Result<KernelEntry> {
    let integrand = |phi: f64| -> Complex64 {
        let z = Complex64::from_polar(radius, phi);
        let ratio = (1.0 - z) / (1.0 + z);
        ratio.powi(dt as i32) * z.powi(-(exponent as i32))
    };
    let (raw, err) = if dt >= 0 {
        integrate(integrand, -theta, theta, KERNEL_TOL, KERNEL_TOL)?
    } else {
        let (v, e) = integrate(integrand, theta, 2.0 * PI - theta, KERNEL_TOL, KERNEL_TOL)?;
        (-v, e)
    };
    let v = raw / (2.0 * PI);
    Ok(KernelEntry {
        value: v.re,
        imag_residual: v.im.abs(),
        error_estimate: err / (2.0 * PI),
    })
}

/// The process is symmetric under `t → −t`; on the `τ < 0` side time
/// offsets enter with the opposite sign.
fn oriented(dt: i64, tau: f64) -> i64 {
    if tau < 0.0 {
        -dt
    } else {
        dt
    }
}

/// Bulk limit kernel entry for offsets `(Δt, Δx)` at `p`, with diagnostics.
pub fn bulk_kernel_entry_detailed(dt: i64, dx: i64, p: LimitPoint) -> Result<KernelEntry> {
    if p.chi < MIN_BULK_CHI {
        return Err(Error::InvalidInput(format!(
            "bulk kernel needs chi >= {MIN_BULK_CHI}, got {}",
            p.chi
        )));
    }
    arc_integral(oriented(dt, p.tau), dx, (-p.tau.abs() / 2.0).exp(), theta(p))
}

/// Bulk limit kernel entry for offsets `(Δt, Δx)` at `p`.
pub fn bulk_kernel_entry(dt: i64, dx: i64, p: LimitPoint) -> Result<f64> {
    Ok(bulk_kernel_entry_detailed(dt, dx, p)?.value)
}

/// The `2n × 2n` matrix whose Pfaffian is the limit correlation at `χ = 0`.
pub fn boundary_matrix(window: &WindowConfig, p: LimitPoint) -> Result<SkewSymmetricMatrix> {
    let parts = window
        .boundary_parts
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("boundary matrix needs boundary parts".into()))?;
    if p.chi != 0.0 {
        return Err(Error::InvalidInput(format!(
            "boundary matrix needs chi = 0, got {}",
            p.chi
        )));
    }
    if parts.len() != window.offsets.len() {
        return Err(Error::InvalidInput(
            "boundary parts and offsets differ in length".into(),
        ));
    }
    let n = parts.len();
    let radius = (-p.tau.abs() / 2.0).exp();
    let theta = PI / 2.0;
    let t = |i: usize| oriented(window.offsets[i].0, p.tau);
    let x = |i: usize| parts[i] as i64;
    let sign = |v: i64| if v % 2 == 0 { 1.0 } else { -1.0 };
    let mut m = SkewSymmetricMatrix::zeros(2 * n);
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            let value = if b < n {
                sign(x(b)) * arc_integral(t(a) - t(b), x(a) + x(b), radius, theta)?.value
            } else if a < n {
                let bp = 2 * n - 1 - b;
                arc_integral(t(a) - t(bp), x(a) - x(bp), radius, theta)?.value
            } else {
                let (ap, bp) = (2 * n - 1 - a, 2 * n - 1 - b);
                sign(x(ap)) * arc_integral(t(ap) - t(bp), -(x(ap) + x(bp)), radius, theta)?.value
            };
            m.set(a, b, value);
        }
    }
    Ok(m)
}

/// Limit of `ρ(X)`: a determinant of bulk kernel entries for `χ > 0`, the
/// boundary Pfaffian for `χ = 0`.
pub fn limit_correlation(window: &WindowConfig, p: LimitPoint) -> Result<f64> {
    if window.boundary_parts.is_some() {
        if p.chi != 0.0 {
            return Err(Error::InvalidInput(
                "boundary parts are only meaningful at chi = 0".into(),
            ));
        }
        return pfaffian(&boundary_matrix(window, p)?);
    }
    if p.chi < MIN_BULK_CHI {
        return Err(Error::InvalidInput(
            "at chi = 0 the window must list its boundary parts".into(),
        ));
    }
    if window.is_empty() {
        return Ok(1.0);
    }
    if theta(p) == 0.0 {
        return Ok(0.0);
    }
    let k = window
        .offsets
        .iter()
        .map(|&(ti, xi)| {
            window
                .offsets
                .iter()
                .map(|&(tj, xj)| bulk_kernel_entry(ti - tj, xi - xj, p))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    determinant(&k)
}

/// `∫_χ^∞ θ(τ, s)/π ds`.
fn column_height(tau: f64, chi: f64) -> Result<f64> {
    let upper = support_boundary(tau).min(SHAPE_CUTOFF);
    if chi >= upper {
        return Ok(0.0);
    }
    let (v, _) = integrate_real(
        |s| density(LimitPoint { tau, chi: s }),
        chi,
        upper,
        SHAPE_TOL,
        SHAPE_TOL,
    )?;
    Ok(v)
}

/// Candidate limit-shape point `(x, y, z)` over `(τ, χ)`.
pub fn limit_shape_point(p: LimitPoint) -> Result<(f64, f64, f64)> {
    let h = column_height(p.tau, p.chi)?;
    if p.tau >= 0.0 {
        Ok((h, h + p.tau, p.chi))
    } else {
        Ok((h - p.tau, h, p.chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(tau: f64, chi: f64) -> LimitPoint {
        LimitPoint::new(tau, chi).unwrap()
    }

    #[test]
    fn theta_examples() {
        for tau in [-3.0, 0.0, 0.7] {
            assert_eq!(theta(pt(tau, 0.0)), PI / 2.0);
        }
        assert!((theta(pt(0.0, 3f64.ln())) - PI / 3.0).abs() < 1e-14);
        for tau in [0.4, 1.0, 2.5] {
            let edge = support_boundary(tau);
            assert_eq!(theta(pt(tau, edge * (1.0 + 1e-12))), 0.0);
            assert_eq!(theta(pt(-tau, edge + 0.5)), 0.0);
            assert!(theta(pt(tau, edge * (1.0 - 1e-6))) > 0.0);
        }
    }

    #[test]
    fn theta_matches_the_printed_formula() {
        for (tau, chi) in [(0.3f64, 0.2f64), (1.2, 0.9), (-2.0, 0.4), (0.0, 5.0), (0.1, 3.9)] {
            let arg = (tau.abs().exp() + 1.0) * (chi.exp() - 1.0) / (2.0 * (tau.abs() / 2.0).exp() * (chi.exp() + 1.0));
            let expected = if arg <= 1.0 { arg.acos() } else { 0.0 };
            assert!((theta(pt(tau, chi)) - expected).abs() < 1e-7, "({tau},{chi})");
        }
    }

    #[test]
    fn theta_is_even_in_tau() {
        for tau in [0.1, 0.5, 1.7, 4.0] {
            for chi in [0.0, 0.3, 1.1, 2.0] {
                assert_eq!(theta(pt(tau, chi)).to_bits(), theta(pt(-tau, chi)).to_bits());
            }
        }
    }

    #[test]
    fn zero_offsets_give_density() {
        let p = pt(0.8, 0.6);
        assert!((bulk_kernel_entry(0, 0, p).unwrap() - theta(p) / PI).abs() < 1e-13);
    }

    #[test]
    fn equal_time_entries_are_sine_kernel() {
        for chi in [0.4, 3f64.ln(), 2.5] {
            let p = pt(0.0, chi);
            let th = theta(p);
            for dx in -6i64..=6 {
                if dx == 0 {
                    continue;
                }
                let e = bulk_kernel_entry_detailed(0, dx, p).unwrap();
                let expected = (th * dx as f64).sin() / (PI * dx as f64);
                assert!((e.value - expected).abs() < 1e-8);
                assert!(e.imag_residual < 1e-10);
            }
        }
    }

    #[test]
    fn unequal_time_entries_are_real() {
        let p = pt(0.6, 0.8);
        for dt in [-2i64, -1, 1, 3] {
            for dx in [-2i64, 0, 1, 4] {
                let e = bulk_kernel_entry_detailed(dt, dx, p).unwrap();
                assert!(e.imag_residual < 1e-10, "dt={dt} dx={dx}: {}", e.imag_residual);
            }
        }
    }

    #[test]
    fn bulk_needs_positive_chi() {
        assert!(bulk_kernel_entry(0, 0, pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn single_boundary_point_is_one_half() {
        let w = WindowConfig::boundary(vec![0], vec![1]).unwrap();
        let p = pt(0.0, 0.0);
        let m = boundary_matrix(&w, p).unwrap();
        assert_eq!(m.dim(), 2);
        assert!((pfaffian(&m).unwrap() - 0.5).abs() < 1e-13);
        assert!((limit_correlation(&w, p).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn mixing_boundary_and_bulk_is_rejected() {
        let w = WindowConfig::boundary(vec![0], vec![1]).unwrap();
        assert!(limit_correlation(&w, pt(0.0, 0.5)).is_err());
        let b = WindowConfig::bulk(vec![(0, 0)]);
        assert!(limit_correlation(&b, pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn single_point_limit_is_density() {
        let p = pt(0.3, 1.1);
        let w = WindowConfig::bulk(vec![(0, 0)]);
        assert!((limit_correlation(&w, p).unwrap() - density(p)).abs() < 1e-12);
    }

    #[test]
    fn two_point_equal_time_determinant() {
        let p = pt(0.0, 0.9);
        let th = theta(p);
        let w = WindowConfig::bulk(vec![(0, 5), (0, 6)]);
        let expected = (th / PI).powi(2) - (th.sin() / PI).powi(2);
        assert!((limit_correlation(&w, p).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn reflecting_time_reflects_tau() {
        let offsets = vec![(0i64, 0i64), (2, -1), (-1, 3)];
        let mirrored: Vec<(i64, i64)> = offsets.iter().map(|&(t, x)| (-t, x)).collect();
        let a = limit_correlation(&WindowConfig::bulk(offsets), pt(0.9, 0.4)).unwrap();
        let b = limit_correlation(&WindowConfig::bulk(mirrored), pt(-0.9, 0.4)).unwrap();
        assert!((a - b).abs() < 1e-12);
        let w = WindowConfig::boundary(vec![0, 1], vec![2, 1]).unwrap();
        let m = WindowConfig::boundary(vec![0, -1], vec![2, 1]).unwrap();
        let a = limit_correlation(&w, pt(0.5, 0.0)).unwrap();
        let b = limit_correlation(&m, pt(-0.5, 0.0)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn frozen_region_has_no_points() {
        let p = pt(2.0, support_boundary(2.0) + 0.3);
        for w in [
            WindowConfig::bulk(vec![(0, 0)]),
            WindowConfig::bulk(vec![(0, 0), (1, 2)]),
            WindowConfig::bulk(vec![(0, 0), (-1, 1), (2, 0)]),
        ] {
            assert_eq!(limit_correlation(&w, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn equal_time_minors_are_probabilities() {
        for chi in [0.2, 1.0, 2.2] {
            let p = pt(0.5, chi);
            for w in [
                vec![(0, 0), (0, 1)],
                vec![(0, 0), (0, 2), (0, 3)],
                vec![(0, -2), (0, 0), (0, 1), (0, 5)],
            ] {
                let d = limit_correlation(&WindowConfig::bulk(w), p).unwrap();
                assert!((-1e-8..=1.0 + 1e-8).contains(&d));
            }
        }
    }

    #[test]
    fn amoeba_matches_frozen_boundary() {
        for xi in [0.5, 1.0, 2.0] {
            let tau = 2.0 * xi;
            let (mut lo, mut hi) = (0.0, 50.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if theta(pt(tau, mid)) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let omega = 0.5 * (0.5 * (lo + hi));
            assert!((omega - amoeba_boundary(xi)).abs() < 1e-9, "xi={xi}");
            assert_eq!(amoeba_boundary(-xi), amoeba_boundary(xi));
        }
    }

    #[test]
    fn limit_shape_examples() {
        let p = pt(0.7, 0.3);
        let (x, y, z) = limit_shape_point(p).unwrap();
        assert_eq!(z, 0.3);
        assert!((y - x - 0.7).abs() < 1e-12);
        let (x, y, _) = limit_shape_point(pt(-0.7, 0.3)).unwrap();
        assert!((x - y - 0.7).abs() < 1e-12);
        for tau in [0.5, 1.5] {
            let (x, y, z) = limit_shape_point(pt(tau, support_boundary(tau))).unwrap();
            assert_eq!(x, 0.0);
            assert_eq!(y - tau, 0.0);
            assert_eq!(z, support_boundary(tau));
        }
    }

    #[test]
    fn column_height_tail_at_zero_tau() {
        // θ(0, s) = 2 arctan(e^{−s/2}), so the height decays like (4/π) e^{−χ/2}
        let chi = 20.0;
        let (x, _, _) = limit_shape_point(pt(0.0, chi)).unwrap();
        let approx = 4.0 / PI * (-chi / 2.0f64).exp();
        assert!(((x - approx) / approx).abs() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn theta_symmetry_and_range(tau in -6.0f64..6.0, chi in 0.0f64..8.0) {
            let a = theta(pt(tau, chi));
            prop_assert_eq!(a.to_bits(), theta(pt(-tau, chi)).to_bits());
            prop_assert!((0.0..=PI / 2.0).contains(&a));
        }

        #[test]
        fn theta_decreases_in_tau(tau in 0.0f64..5.0, step in 0.01f64..1.0, chi in 0.01f64..4.0) {
            prop_assert!(theta(pt(tau + step, chi)) <= theta(pt(tau, chi)));
        }

        #[test]
        fn equal_time_window_is_a_probability(
            tau in -2.0f64..2.0,
            chi in 0.05f64..3.0,
            xs in proptest::collection::btree_set(-6i64..6, 1..5),
        ) {
            let w = WindowConfig::bulk(xs.into_iter().map(|x| (0, x)).collect());
            let d = limit_correlation(&w, pt(tau, chi)).unwrap();
            prop_assert!((-1e-8..=1.0 + 1e-8).contains(&d), "{}", d);
        }

        #[test]
        fn kernel_entries_are_real(
            tau in -2.0f64..2.0,
            chi in 0.05f64..3.0,
            dt in -3i64..=3,
            dx in -4i64..=4,
        ) {
            let e = bulk_kernel_entry_detailed(dt, dx, pt(tau, chi)).unwrap();
            prop_assert!(e.imag_residual < 1e-10);
        }
    }
}
