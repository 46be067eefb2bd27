//! `--self-test`: quick invariant checks for the module behind each subcommand.

use std::f64::consts::PI;

use serde_json::{json, Value};
use shifted_schur::asymptotics::{
    amoeba_boundary, bulk_kernel_entry, density, limit_correlation, limit_shape_point, support_boundary, theta,
    LimitPoint, WindowConfig,
};
use shifted_schur::correlation::{rho_pf, OracleTable};
use shifted_schur::partitions::for_each_spp;
use shifted_schur::pfaffian::determinant;
use shifted_schur::process::{macmahon_coeffs, MqParams};
use shifted_schur::schur::verify_qpqp;
use shifted_schur::series::{Kernel, KernelSource};
use shifted_schur::stats::{expected_volume, variance_volume};
use shifted_schur::{
    pfaffian, AlternationMethod, PointConfiguration, SkewSymmetricMatrix, Specialization, StrictPartition,
};

pub struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Default)]
pub struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn check(&mut self, name: &'static str, outcome: Result<(bool, String), shifted_schur::Error>) {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
        self.checks.push(Check { name, pass, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }

    pub fn to_json(&self, subcommand: &str) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
            .collect();
        json!({ "subcommand": subcommand, "pass": self.passed(), "checks": checks })
    }
}

type Outcome = Result<(bool, String), shifted_schur::Error>;

fn pts(p: &[(i64, u32)]) -> PointConfiguration {
    PointConfiguration::new(p.iter().copied()).expect("fixed test points are valid")
}

fn lp(tau: f64, chi: f64) -> LimitPoint {
    LimitPoint::new(tau, chi).expect("fixed limit points are valid")
}

pub fn run(name: &str) -> Report {
    let mut r = Report::default();
    match name {
        "macmahon" => {
            r.check("product matches enumeration", macmahon_vs_enumeration());
            r.check("alternation formulas agree", alternation_agreement());
        }
        "corr" => {
            r.check("pfaffian matches oracle", pfaffian_vs_oracle());
            r.check("pfaffian squared is determinant", pfaffian_squares());
        }
        "oracle" => r.check("oracle is a probability", oracle_sanity()),
        "kernel" => {
            r.check("sine kernel", sine_kernel());
            r.check("finite kernel antisymmetry", finite_antisymmetry());
        }
        "density" => r.check("density boundary values", density_values()),
        "shape" => r.check("limit shape coordinates", shape_values()),
        "volume" => r.check("variance is minus dE/dr", volume_derivative()),
        "qpqp-check" => r.check("identity residuals", qpqp_residuals()),
        _ => unreachable!("subcommand names are fixed by the parser"),
    }
    r
}

fn macmahon_vs_enumeration() -> Outcome {
    let exact = macmahon_coeffs(8)?;
    let mut counted = vec![0u128; 9];
    for_each_spp(8, 8, |pi| {
        counted[pi.volume() as usize] += 1u128 << pi.alternation(AlternationMethod::Components);
    })?;
    Ok((exact == counted, format!("{exact:?}")))
}

fn alternation_agreement() -> Outcome {
    let mut bad = 0;
    let mut total = 0;
    for_each_spp(8, 8, |pi| {
        total += 1;
        if pi.alternation(AlternationMethod::Components) != pi.alternation(AlternationMethod::DiagonalFormula) {
            bad += 1;
        }
    })?;
    Ok((bad == 0, format!("{bad} of {total} disagree")))
}

fn pfaffian_vs_oracle() -> Outcome {
    let q = 0.1;
    let table = OracleTable::new(14)?;
    let source = KernelSource::Mq(MqParams::new(q, 14)?);
    let mut worst = 0.0f64;
    let mut ok = true;
    for x in [pts(&[(0, 1)]), pts(&[(0, 1), (1, 1)]), pts(&[(-1, 2), (0, 1)])] {
        let pf = rho_pf(&x, &source)?.value;
        let or = table.rho(&x, q)?;
        let diff = (pf - or.value).abs();
        worst = worst.max(diff);
        ok &= diff <= or.error_bound.unwrap_or(0.0) + 1e-8;
    }
    Ok((ok, format!("max difference {worst:.3e}")))
}

fn pfaffian_squares() -> Outcome {
    let mut worst = 0.0f64;
    for dim in [2usize, 4, 6, 8] {
        let a = SkewSymmetricMatrix::from_fn(dim, |i, j| ((i * 7 + j * 3) as f64).sin());
        let pf = pfaffian(&a)?;
        let det = determinant(&a.to_dense())?;
        worst = worst.max((pf * pf - det).abs() / det.abs().max(1e-300));
    }
    Ok((worst < 1e-10, format!("max relative deviation {worst:.3e}")))
}

fn oracle_sanity() -> Outcome {
    let table = OracleTable::new(12)?;
    let q = 0.2;
    let whole = table.rho(&pts(&[]), q)?.value;
    let one = table.rho(&pts(&[(0, 1)]), q)?.value;
    let two = table.rho(&pts(&[(0, 1), (1, 1)]), q)?.value;
    let ok = (whole - 1.0).abs() < 1e-15 && (0.0..=1.0).contains(&one) && two <= one;
    Ok((ok, format!("rho(empty)={whole}, rho(a)={one}, rho(a,b)={two}")))
}

fn sine_kernel() -> Outcome {
    let p = lp(0.0, 3f64.ln());
    let th = theta(p);
    let mut worst = (bulk_kernel_entry(0, 0, p)? - th / PI).abs();
    for dx in 1..=6i64 {
        let expected = (th * dx as f64).sin() / (PI * dx as f64);
        worst = worst.max((bulk_kernel_entry(0, dx, p)? - expected).abs());
    }
    Ok((worst < 1e-8, format!("max deviation {worst:.3e}")))
}

fn finite_antisymmetry() -> Outcome {
    let mut kernel = Kernel::new(KernelSource::Mq(MqParams::new(0.3, 10)?), 4)?;
    let mut worst = 0.0f64;
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            let defect = if x + y == 0 {
                if x % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            };
            let s = kernel.coeff(x, y, 1, 1)? + kernel.coeff(y, x, 1, 1)?;
            worst = worst.max((s - defect).abs());
        }
    }
    Ok((worst < 1e-10, format!("max deviation {worst:.3e}")))
}

fn density_values() -> Outcome {
    let half = [-2.0, 0.0, 1.5].iter().all(|&t| density(lp(t, 0.0)) == 0.5);
    let frozen = theta(lp(1.0, support_boundary(1.0) + 0.1)) == 0.0;
    let third = (density(lp(0.0, 3f64.ln())) - 1.0 / 3.0).abs() < 1e-14;
    let edge = support_boundary(2.0) / 2.0 - amoeba_boundary(1.0);
    let window = limit_correlation(&WindowConfig::boundary(vec![0], vec![1])?, lp(0.0, 0.0))?;
    let ok = half && frozen && third && edge.abs() < 1e-12 && (window - 0.5).abs() < 1e-12;
    Ok((
        ok,
        format!("half={half} frozen={frozen} third={third} edge={edge:.3e} boundary_pf={window}"),
    ))
}

fn shape_values() -> Outcome {
    let (x, y, z) = limit_shape_point(lp(0.5, 0.4))?;
    let (x0, y0, _) = limit_shape_point(lp(1.0, support_boundary(1.0)))?;
    let ok = z == 0.4 && (y - x - 0.5).abs() < 1e-12 && x0 == 0.0 && y0 == 1.0;
    Ok((ok, format!("({x}, {y}, {z})")))
}

fn volume_derivative() -> Outcome {
    let r: f64 = 0.1;
    let h = 1e-3 * r;
    let e = |s: f64| expected_volume((-s).exp());
    let d = (-e(r + 2.0 * h)? + 8.0 * e(r + h)? - 8.0 * e(r - h)? + e(r - 2.0 * h)?) / (12.0 * h);
    let var = variance_volume((-r).exp())?;
    let rel = (-d - var).abs() / var;
    Ok((rel < 1e-8, format!("relative deviation {rel:.3e}")))
}

fn qpqp_residuals() -> Outcome {
    let sp = |p: &[u32]| StrictPartition::new(p.to_vec());
    let mut worst = 0.0f64;
    for (mu, nu) in [(sp(&[])?, sp(&[])?), (sp(&[2])?, sp(&[1])?), (sp(&[2, 1])?, sp(&[3])?)] {
        let rep = verify_qpqp(&mu, &nu, &Specialization::single(0.3), &Specialization::single(0.2), 20)?;
        worst = worst.max(rep.residual);
    }
    Ok((worst < 1e-9, format!("max residual {worst:.3e}")))
}
