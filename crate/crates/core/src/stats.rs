//! Mean and variance of the volume `|π|` under the `q`-measure.

use serde::Serialize;

use crate::error::{Error, Result};

/// `ζ(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_2;
/// Limit of `r³ E|π|`: `2 Σ_k 2/(2k+1)³`.
pub const MEAN_LIMIT: f64 = 7.0 * ZETA3 / 2.0;
/// Limit of `r⁴ Var|π|`, three times the mean limit.
pub const VARIANCE_LIMIT: f64 = 21.0 * ZETA3 / 2.0;

const MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumeMoments {
    pub q: f64,
    pub r: f64,
    pub mean: f64,
    pub variance: f64,
}

impl VolumeMoments {
    pub fn new(q: f64) -> Result<Self> {
        Ok(Self {
            q,
            r: -q.ln(),
            mean: expected_volume(q)?,
            variance: variance_volume(q)?,
        })
    }

    pub fn from_r(r: f64) -> Result<Self> {
        Self::new((-r).exp())
    }

    pub fn scaled_mean(&self) -> f64 {
        self.r.powi(3) * self.mean
    }

    pub fn scaled_variance(&self) -> f64 {
        self.r.powi(4) * self.variance
    }
}

fn check(q: f64) -> Result<f64> {
    if q > 0.0 && q < 1.0 {
        Ok(-q.ln())
    } else {
        Err(Error::InvalidInput(format!("q must lie in (0, 1), got {q}")))
    }
}

fn sum_series(term: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for m in 1..=MAX_TERMS {
        let t = term(m as f64);
        total += t;
        if t < 1e-16 * total {
            break;
        }
    }
    total
}

/// `E|π| = Σ_{m≥1} 2m² q^m/(1 − q^{2m})`.
pub fn expected_volume(q: f64) -> Result<f64> {
    let r = check(q)?;
    Ok(sum_series(|m| 2.0 * m * m * (-m * r).exp() / -(-2.0 * m * r).exp_m1()))
}

/// `Var|π| = Σ_{m≥1} 2m³ q^m (1 + q^{2m})/(1 − q^{2m})²`.
pub fn variance_volume(q: f64) -> Result<f64> {
    let r = check(q)?;
    Ok(sum_series(|m| {
        let q2m = (-2.0 * m * r).exp();
        let den = (-2.0 * m * r).exp_m1();
        2.0 * m * m * m * (-m * r).exp() * (1.0 + q2m) / (den * den)
    }))
}
