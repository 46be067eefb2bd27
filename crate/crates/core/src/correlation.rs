//! Correlation functions `ρ(X)` of the random plane diagram: the Pfaffian
//! formula and a brute-force enumeration oracle with an explicit error bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::{for_each_spp, plane_diagram, AlternationMethod, PointConfiguration, DEFAULT_ENUMERATION_CAP};
use crate::pfaffian::{pfaffian, SkewSymmetricMatrix};
use crate::process::{macmahon_coeffs, MACMAHON_CAP};
use crate::series::Kernel;
pub use crate::series::KernelSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pfaffian,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub value: f64,
    pub method: Method,
    /// Truncation error bound (oracle only).
    pub error_bound: Option<f64>,
    pub params: Value,
}

/// Row `a` of `M_X` (0-based): the point it refers to, its exponent and its
/// sign. Rows `0..n` carry `x_i`; row `a ≥ n` carries `−x_{a'}` with
/// `a' = 2n − 1 − a` and sign `(−1)^{x_{a'}}`.
fn row_data(points: &[(i64, u32)], a: usize) -> (i64, i64, f64) {
    let n = points.len();
    if a < n {
        let (t, x) = points[a];
        (t, x as i64, 1.0)
    } else {
        let (t, x) = points[2 * n - 1 - a];
        (t, -(x as i64), if x % 2 == 0 { 1.0 } else { -1.0 })
    }
}

/// `M_X` with entries taken from a prepared kernel. Points are used in
/// canonical `(t, x)` order.
pub fn build_matrix_with(points: &PointConfiguration, kernel: &mut Kernel) -> Result<SkewSymmetricMatrix> {
    let pts = points.to_vec();
    let dim = 2 * pts.len();
    let mut m = SkewSymmetricMatrix::zeros(dim);
    for a in 0..dim {
        let (ta, ea, sa) = row_data(&pts, a);
        for b in a + 1..dim {
            let (tb, eb, sb) = row_data(&pts, b);
            m.set(a, b, sa * sb * kernel.coeff(ea, eb, ta, tb)?);
        }
    }
    Ok(m)
}

/// `M_X` for the given source.
pub fn build_matrix(points: &PointConfiguration, source: &KernelSource) -> Result<SkewSymmetricMatrix> {
    let mut kernel = kernel_for(points, source)?;
    build_matrix_with(points, &mut kernel)
}

fn kernel_for(points: &PointConfiguration, source: &KernelSource) -> Result<Kernel> {
    let reach = points.iter().map(|p| p.1 as usize).max().unwrap_or(0);
    Kernel::new(source.clone(), reach)
}

/// `ρ(X) = Pf(M_X)`.
pub fn rho_pf(points: &PointConfiguration, source: &KernelSource) -> Result<CorrelationResult> {
    let mut kernel = kernel_for(points, source)?;
    rho_pf_with(points, &mut kernel)
}

/// [`rho_pf`] reusing the cached expansions of `kernel`.
pub fn rho_pf_with(points: &PointConfiguration, kernel: &mut Kernel) -> Result<CorrelationResult> {
    let m = build_matrix_with(points, kernel)?;
    let value = pfaffian(&m)?;
    Ok(CorrelationResult {
        value,
        method: Method::Pfaffian,
        error_bound: None,
        params: json!({ "source": kernel.source().to_json(), "dim": m.dim() }),
    })
}

/// All strict plane partitions up to a volume, reduced to what the oracle
/// needs: alternation, volume and plane diagram.
#[derive(Clone, Debug)]
pub struct OracleTable {
    vmax: u32,
    entries: Vec<OracleEntry>,
}

#[derive(Clone, Debug)]
struct OracleEntry {
    alternation: u32,
    volume: u32,
    diagram: Vec<(i64, u32)>,
}

impl OracleTable {
    pub fn new(vmax: u32) -> Result<Self> {
        let mut entries = Vec::new();
        for_each_spp(vmax, DEFAULT_ENUMERATION_CAP, |pi| {
            entries.push(OracleEntry {
                alternation: pi.alternation(AlternationMethod::Components),
                volume: pi.volume(),
                diagram: plane_diagram(pi).to_vec(),
            });
        })?;
        Ok(Self { vmax, entries })
    }

    pub fn vmax(&self) -> u32 {
        self.vmax
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ 2^A` over the selected entries, bucketed by volume.
    fn weighted_counts(&self, mut keep: impl FnMut(&OracleEntry) -> bool) -> Vec<u128> {
        let mut counts = vec![0u128; self.vmax as usize + 1];
        for e in self.entries.iter().filter(|e| keep(e)) {
            counts[e.volume as usize] += 1u128 << e.alternation;
        }
        counts
    }

    fn series(counts: &[u128], q: f64, factor: impl Fn(usize) -> f64) -> f64 {
        counts
            .iter()
            .enumerate()
            .rev()
            .map(|(v, &c)| factor(v) * c as f64 * q.powi(v as i32))
            .sum()
    }

    /// Truncated `ρ(X)` with its error bound.
    pub fn rho(&self, points: &PointConfiguration, q: f64) -> Result<CorrelationResult> {
        check_q(q)?;
        let z = Self::series(&self.weighted_counts(|_| true), q, |_| 1.0);
        let wanted = points.to_vec();
        let hits = self.weighted_counts(|e| wanted.iter().all(|p| e.diagram.binary_search(p).is_ok()));
        let hit = Self::series(&hits, q, |_| 1.0);
        let tail = tail_bound(self.vmax, q)?;
        Ok(CorrelationResult {
            value: hit / z,
            method: Method::Oracle,
            error_bound: Some(tail / z),
            params: json!({ "q": q, "vmax": self.vmax, "partitions": self.entries.len() }),
        })
    }

    /// Truncated `ρ(X)` in exact rational arithmetic.
    pub fn rho_exact(&self, points: &PointConfiguration, q: &BigRational) -> Result<BigRational> {
        if !(q > &BigRational::zero() && q < &BigRational::one()) {
            return Err(Error::InvalidInput(format!("q must lie in (0, 1), got {q}")));
        }
        let exact = |counts: Vec<u128>| -> BigRational {
            let mut total = BigRational::zero();
            let mut power = BigRational::one();
            for c in counts {
                total += &power * BigRational::from_integer(BigInt::from(c));
                power *= q;
            }
            total
        };
        let wanted = points.to_vec();
        let hit = exact(self.weighted_counts(|e| wanted.iter().all(|p| e.diagram.binary_search(p).is_ok())));
        Ok(hit / exact(self.weighted_counts(|_| true)))
    }

    /// Truncated `E|π|` and a bound on the truncation error.
    pub fn expected_volume(&self, q: f64) -> Result<(f64, f64)> {
        check_q(q)?;
        let counts = self.weighted_counts(|_| true);
        let z = Self::series(&counts, q, |_| 1.0);
        let mean = Self::series(&counts, q, |v| v as f64) / z;
        let bound = (volume_tail_bound(self.vmax, q)? + mean * tail_bound(self.vmax, q)?) / z;
        Ok((mean, bound))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("q must lie in (0, 1), got {q}")))
    }
}

/// Upper bound on `Σ_{n > vmax} c_n q^n` for the MacMahon coefficients:
/// exact terms up to `n = 24`, then `c_n ≤ c_24 ρ^{n−24}` with `ρ = c_24/c_23`.
/// Infinite when `ρ q ≥ 1`.
pub fn tail_bound(vmax: u32, q: f64) -> Result<f64> {
    let (exact, c_last, ratio) = tail_parts(vmax, q, |_| 1.0)?;
    let x = ratio * q;
    if x >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(exact + c_last * q.powi(MACMAHON_CAP as i32) * x / (1.0 - x))
}

/// Upper bound on `Σ_{n > vmax} n c_n q^n`.
fn volume_tail_bound(vmax: u32, q: f64) -> Result<f64> {
    let (exact, c_last, ratio) = tail_parts(vmax, q, |n| n as f64)?;
    let x = ratio * q;
    if x >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let n0 = MACMAHON_CAP as f64;
    let geometric = n0 * x / (1.0 - x) + x / ((1.0 - x) * (1.0 - x));
    Ok(exact + c_last * q.powi(MACMAHON_CAP as i32) * geometric)
}

fn tail_parts(vmax: u32, q: f64, factor: impl Fn(u32) -> f64) -> Result<(f64, f64, f64)> {
    if vmax > MACMAHON_CAP {
        return Err(Error::CapExceeded {
            what: "vmax",
            requested: vmax as u64,
            cap: MACMAHON_CAP as u64,
        });
    }
    let c = macmahon_coeffs(MACMAHON_CAP)?;
    let exact: f64 = (vmax + 1..=MACMAHON_CAP)
        .map(|n| factor(n) * c[n as usize] as f64 * q.powi(n as i32))
        .sum();
    let last = c[MACMAHON_CAP as usize] as f64;
    let ratio = last / c[MACMAHON_CAP as usize - 1] as f64;
    Ok((exact, last, ratio))
}

/// Brute-force `ρ(X)` over all strict plane partitions with `|π| ≤ vmax`.
pub fn rho_oracle(points: &PointConfiguration, q: f64, vmax: u32) -> Result<CorrelationResult> {
    OracleTable::new(vmax)?.rho(points, q)
}
