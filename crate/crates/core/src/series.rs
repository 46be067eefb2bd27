//! Laurent coefficients of the generating function `J(t, z)` and the
//! correlation kernel `K_{x,y}(t1, t2)` extracted from them.
//!
//! For a finite chain `J(t, z)` is a product of rational factors and is
//! expanded by truncated power-series products. For the `q`-measure the
//! infinite products are sampled on the circle `|z| = q^{−t/2}`, where
//! `|J| = 1`, and the coefficients are recovered by FFT. Coefficients are
//! stored scaled, `d_k = c_k R^k`, which keeps them bounded even when `q` is
//! close to 1.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::process::{MqParams, SpecializationChain};

/// Factors of an infinite product below this size are dropped.
const FACTOR_EPS: f64 = 1e-17;
/// FFT sizes are doubled until the outer coefficients fall below this.
const FFT_TAIL_TOL: f64 = 1e-15;
const MIN_FFT_SIZE: usize = 4096;
const MAX_FFT_SIZE: usize = 1 << 22;
/// Ceiling on the internal degree of truncated power-series products.
const MAX_PRODUCT_DEGREE: usize = 1 << 16;

/// Truncated Laurent series `Σ_{k=lo}^{hi} c_k z^k`. Coefficients are kept
/// in the scaled form `d_k = c_k R^k` for a radius `R` (1 unless stated).
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    lo: i64,
    scaled: Vec<f64>,
    radius: f64,
}

impl LaurentSeries {
    pub fn new(lo: i64, coeffs: Vec<f64>) -> Self {
        Self {
            lo,
            scaled: coeffs,
            radius: 1.0,
        }
    }

    pub fn with_radius(lo: i64, scaled: Vec<f64>, radius: f64) -> Self {
        Self { lo, scaled, radius }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.scaled.len() as i64 - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn check(&self, k: i64) -> Result<usize> {
        if k < self.lo || k > self.hi() {
            return Err(Error::WindowTooSmall {
                exponent: k,
                lo: self.lo,
                hi: self.hi(),
            });
        }
        Ok((k - self.lo) as usize)
    }

    /// `c_k`.
    pub fn coeff(&self, k: i64) -> Result<f64> {
        let i = self.check(k)?;
        Ok(self.scaled[i] * self.radius.powi(-(k as i32)))
    }

    /// `d_k = c_k R^k`.
    pub fn scaled_coeff(&self, k: i64) -> Result<f64> {
        Ok(self.scaled[self.check(k)?])
    }

    fn scaled_or_zero(&self, k: i64) -> f64 {
        if k < self.lo || k > self.hi() {
            0.0
        } else {
            self.scaled[(k - self.lo) as usize]
        }
    }

    /// Restriction to exponents `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Self> {
        self.check(lo)?;
        self.check(hi)?;
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Ok(Self {
            lo,
            scaled: self.scaled[a..=b].to_vec(),
            radius: self.radius,
        })
    }

    /// Product of two power series (`lo = 0`, radius 1), truncated to degree
    /// `n`. Exact on `[0, n]` when both factors are.
    pub fn mul_power_series(&self, other: &Self, n: usize) -> Result<Self> {
        if self.lo != 0 || other.lo != 0 || self.radius != 1.0 || other.radius != 1.0 {
            return Err(Error::InvalidInput(
                "power-series product needs lo = 0 and radius 1".into(),
            ));
        }
        let mut out = vec![0.0; n + 1];
        for (i, a) in self.scaled.iter().enumerate().take(n + 1) {
            for (j, b) in other.scaled.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(0, out))
    }

    /// `{lo, coeffs}` with unscaled coefficients.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<f64> = (self.lo..=self.hi())
            .map(|k| self.coeff(k).unwrap_or(f64::NAN))
            .collect();
        json!({ "lo": self.lo, "coeffs": coeffs })
    }
}

/// `(1 + a z)/(1 − a z) = 1 + 2 Σ_{k≥1} a^k z^k` through degree `n`.
pub fn rational_factor(a: f64, n: usize) -> LaurentSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut p = 1.0;
    for _ in 1..=n {
        p *= a;
        coeffs.push(2.0 * p);
    }
    LaurentSeries::new(0, coeffs)
}

/// Where the kernel comes from: the `q`-measure on strict plane partitions
/// (two-sided time `t ∈ ℤ`) or a finite chain (time `t ∈ [1, T]`).
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSource {
    Mq(MqParams),
    Chain(SpecializationChain<f64>),
}

impl KernelSource {
    fn check_time(&self, t: i64) -> Result<()> {
        match self {
            KernelSource::Mq(_) => Ok(()),
            KernelSource::Chain(c) => {
                if t >= 1 && t <= c.len() as i64 {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!(
                        "time {t} outside the chain range [1, {}]",
                        c.len()
                    )))
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            KernelSource::Mq(p) => json!({ "q": p.q(), "window": p.window() }),
            KernelSource::Chain(c) => c.to_json(),
        }
    }
}

/// Values entering `J(t, z) = Π (1 + a z)/(1 − a z) · Π (1 − b/z)/(1 + b/z)`.
fn chain_factors(chain: &SpecializationChain<f64>, t: usize) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (t..=chain.len())
        .flat_map(|m| chain.minus(m).values().iter().copied())
        .filter(|&v| v != 0.0)
        .collect();
    let b: Vec<f64> = (0..t)
        .flat_map(|m| chain.plus(m).values().iter().copied())
        .filter(|&v| v != 0.0)
        .collect();
    (a, b)
}

/// `A_m = q^{m + max(t,0) + 1/2}`, `B_m = q^{m + max(−t,0) + 1/2}` for `m < factors`.
fn mq_factors(q: f64, t: i64, factors: usize) -> (Vec<f64>, Vec<f64>) {
    let sa = t.max(0) as f64;
    let sb = (-t).max(0) as f64;
    let a = (0..factors).map(|m| q.powf(m as f64 + sa + 0.5)).collect();
    let b = (0..factors).map(|m| q.powf(m as f64 + sb + 0.5)).collect();
    (a, b)
}

/// Expands `Π (1 + a z)/(1 − a z) · Π (1 − b/z)/(1 + b/z)` on `[−n, n]` by
/// truncated power-series products. Needs every `|a|, |b| < 1`.
fn expand_factors(a: &[f64], b: &[f64], n: usize) -> Result<LaurentSeries> {
    let amax = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs()));
    if amax >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "series expansion needs specialization values below 1 in magnitude, got {amax}"
        )));
    }
    let extra = if amax == 0.0 {
        0
    } else {
        (2.0 * (1e-20f64).ln() / amax.ln()).ceil() as usize + 16
    };
    let degree = n + extra;
    if degree > MAX_PRODUCT_DEGREE {
        return Err(Error::CapExceeded {
            what: "series degree",
            requested: degree as u64,
            cap: MAX_PRODUCT_DEGREE as u64,
        });
    }
    let p = power_series_product(a, 1.0, degree);
    let q = power_series_product(b, -1.0, degree);
    let n = n as i64;
    let d = degree as i64;
    let coeffs = (-n..=n)
        .map(|k| {
            let j0 = (-k).max(0);
            let j1 = d - k.max(0);
            (j0..=j1).map(|j| p[(k + j) as usize] * q[j as usize]).sum()
        })
        .collect();
    Ok(LaurentSeries::new(-n, coeffs))
}

/// Coefficients of `Π (1 + σ v u)/(1 − σ v u)` through degree `n`.
fn power_series_product(values: &[f64], sign: f64, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    for &v in values {
        let c = sign * v;
        for k in (1..=n).rev() {
            p[k] += c * p[k - 1];
        }
        for k in 1..=n {
            p[k] += c * p[k - 1];
        }
    }
    p
}

/// `J(t, z)` of the `q`-measure from the product of its first `factors`
/// factor pairs, expanded directly. Reliable for small `q` only.
pub fn j_series_product_mq(t: i64, q: f64, factors: usize, n: usize) -> Result<LaurentSeries> {
    let (a, b) = mq_factors(q, t, factors);
    expand_factors(&a, &b, n)
}

/// Number of factor pairs of the `q`-measure product that matter at radius `R`.
fn mq_factor_count(q: f64, t: i64, radius: f64) -> usize {
    let sa = t.max(0) as f64 + 0.5;
    let sb = (-t).max(0) as f64 + 0.5;
    // smallest m with q^{m+s} · scale < eps for both families
    let need = |s: f64, scale: f64| -> usize {
        let m = (FACTOR_EPS / scale).ln() / q.ln() - s;
        m.max(0.0).ceil() as usize + 1
    };
    need(sa, radius).max(need(sb, 1.0 / radius))
}

/// Scaled coefficients of the `q`-measure `J(t, z)` on `|z| = q^{−t/2}`,
/// covering at least `[−n, n]`.
fn mq_j_fft(q: f64, t: i64, n: usize) -> LaurentSeries {
    let radius = q.powf(-(t as f64) / 2.0);
    let factors = mq_factor_count(q, t, radius);
    let (a, b) = mq_factors(q, t, factors);
    let mut size = MIN_FFT_SIZE.max((4 * (n + 1)).next_power_of_two());
    let mut planner = FftPlanner::<f64>::new();
    loop {
        let mut buf: Vec<Complex64> = (0..size)
            .map(|j| {
                let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / size as f64);
                let zi = z.inv();
                let mut acc = Complex64::new(1.0, 0.0);
                for (&am, &bm) in a.iter().zip(&b) {
                    let num = (1.0 + am * z) * (1.0 - bm * zi);
                    let den = (1.0 - am * z) * (1.0 + bm * zi);
                    acc *= num / den;
                }
                acc
            })
            .collect();
        planner.plan_fft_forward(size).process(&mut buf);
        let half = size / 2;
        let scale = 1.0 / size as f64;
        let tail = (3 * size / 8..half)
            .map(|k| buf[k].norm().max(buf[size - k].norm()) * scale)
            .fold(0.0, f64::max);
        if tail < FFT_TAIL_TOL || size >= MAX_FFT_SIZE {
            let lo = -(half as i64 - 1);
            let scaled = (lo..half as i64)
                .map(|k| {
                    let idx = if k >= 0 { k as usize } else { (size as i64 + k) as usize };
                    buf[idx].re * scale
                })
                .collect();
            return LaurentSeries::with_radius(lo, scaled, radius);
        }
        size *= 2;
    }
}

/// Coefficients of `J(t, z)` on `[−n, n]`.
pub fn j_series(t: i64, source: &KernelSource, n: usize) -> Result<LaurentSeries> {
    source.check_time(t)?;
    match source {
        KernelSource::Mq(p) => mq_j_fft(p.q(), t, n).window(-(n as i64), n as i64),
        KernelSource::Chain(c) => {
            let (a, b) = chain_factors(c, t as usize);
            expand_factors(&a, &b, n)
        }
    }
}

/// Coefficient of `z^x w^y` in `(z−w)/(2(z+w)) J(t1, z) J(t2, w)`, with the
/// region `|z| > |w|` when `t1 ≥ t2` and `|z| < |w|` otherwise.
pub fn kernel_coeff(x: i64, y: i64, t1: i64, t2: i64, source: &KernelSource, n: usize) -> Result<f64> {
    let reach = x.unsigned_abs().max(y.unsigned_abs()) as usize;
    if reach > n {
        return Err(Error::WindowTooSmall {
            exponent: reach as i64,
            lo: -(n as i64),
            hi: n as i64,
        });
    }
    let mut kernel = Kernel::new(source.clone(), n)?;
    kernel.coeff(x, y, t1, t2)
}

/// Default half-width of the coefficient window for kernel work.
pub fn default_truncation(max_abs_exponent: usize) -> usize {
    2 * max_abs_exponent + 16
}

/// Kernel entries with the `J` expansions cached per time.
#[derive(Clone, Debug)]
pub struct Kernel {
    source: KernelSource,
    half_width: usize,
    tables: BTreeMap<i64, LaurentSeries>,
}

impl Kernel {
    /// Prepares a kernel for exponents `|x|, |y| ≤ max_abs_exponent`.
    pub fn new(source: KernelSource, max_abs_exponent: usize) -> Result<Self> {
        Ok(Self {
            source,
            half_width: max_abs_exponent,
            tables: BTreeMap::new(),
        })
    }

    pub fn source(&self) -> &KernelSource {
        &self.source
    }

    fn table(&mut self, t: i64) -> Result<&LaurentSeries> {
        if !self.tables.contains_key(&t) {
            self.source.check_time(t)?;
            let series = match &self.source {
                KernelSource::Mq(p) => mq_j_fft(p.q(), t, self.half_width),
                KernelSource::Chain(c) => {
                    let (a, b) = chain_factors(c, t as usize);
                    let amax = a.iter().chain(&b).fold(0.0f64, |m, v| m.max(v.abs()));
                    // room for the convolution tail
                    let extra = if amax == 0.0 {
                        0
                    } else if amax < 1.0 {
                        ((1e-20f64).ln() / amax.ln()).ceil() as usize + 16
                    } else {
                        return Err(Error::InvalidInput(format!(
                            "kernel needs specialization values below 1 in magnitude, got {amax}"
                        )));
                    };
                    expand_factors(&a, &b, default_truncation(self.half_width) + extra)?
                }
            };
            self.tables.insert(t, series);
        }
        Ok(&self.tables[&t])
    }

    /// Radius `R_t` on which the coefficients of `J(t, ·)` are scaled.
    pub fn radius(&mut self, t: i64) -> Result<f64> {
        Ok(self.table(t)?.radius())
    }

    /// `K_{x,y}(t1, t2) · R_{t1}^x R_{t2}^y`.
    pub fn scaled_coeff(&mut self, x: i64, y: i64, t1: i64, t2: i64) -> Result<f64> {
        let reach = x.unsigned_abs().max(y.unsigned_abs()) as usize;
        if reach > self.half_width {
            return Err(Error::WindowTooSmall {
                exponent: reach as i64,
                lo: -(self.half_width as i64),
                hi: self.half_width as i64,
            });
        }
        let s1 = self.table(t1)?.clone();
        let s2 = self.table(t2)?;
        let (r1, r2) = (s1.radius(), s2.radius());
        let lead = 0.5 * s1.scaled_or_zero(x) * s2.scaled_or_zero(y);
        let mut sum = 0.0;
        if t1 >= t2 {
            let ratio = r2 / r1;
            let kmax = (s1.hi() - x).min(y - s2.lo());
            let mut w = 1.0;
            for k in 1..=kmax.max(0) {
                w *= -ratio;
                sum += w * s1.scaled_or_zero(x + k) * s2.scaled_or_zero(y - k);
            }
            Ok(lead + sum)
        } else {
            let ratio = r1 / r2;
            let kmax = (x - s1.lo()).min(s2.hi() - y);
            let mut w = 1.0;
            for k in 1..=kmax.max(0) {
                w *= -ratio;
                sum += w * s1.scaled_or_zero(x - k) * s2.scaled_or_zero(y + k);
            }
            Ok(-lead - sum)
        }
    }

    /// `K_{x,y}(t1, t2)`.
    pub fn coeff(&mut self, x: i64, y: i64, t1: i64, t2: i64) -> Result<f64> {
        let scaled = self.scaled_coeff(x, y, t1, t2)?;
        let r1 = self.radius(t1)?;
        let r2 = self.radius(t2)?;
        Ok(scaled * r1.powi(-(x as i32)) * r2.powi(-(y as i32)))
    }
}
