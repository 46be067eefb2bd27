//! Skew Schur P and Q functions of finite specializations, the pairing H,
//! and a numerical check of the QPQP summation identity.
//!
//! Marked shifted tableaux use the alphabet `1 < 1' < 2 < 2' < …` with
//! weakly decreasing rows and columns; an unmarked letter occurs at most once
//! per column and a marked letter at most once per row.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{skew_strip_stats, StrictPartition};
use crate::scalar::Scalar;

/// Default cap on the number of tableaux visited by [`skew_pq`].
pub const DEFAULT_TABLEAU_CAP: u64 = 10_000_000;

/// Finitely many variable values `x_i = a_i`; all further variables are 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Specialization<S> {
    values: Vec<S>,
}

impl<S: Scalar> Specialization<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn empty() -> Self {
        Self { values: Vec::new() }
    }

    pub fn single(value: S) -> Self {
        Self { values: vec![value] }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The specialization `x ∪ y` (values concatenated).
    pub fn union(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        values.extend(other.values.iter().cloned());
        Self { values }
    }
}

impl Specialization<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    P,
    Q,
}

/// `Q_{λ/μ}` or `P_{λ/μ}` at `spec` by tableau enumeration.
pub fn skew_pq<S: Scalar>(
    lambda: &StrictPartition,
    mu: &StrictPartition,
    spec: &Specialization<S>,
    kind: Kind,
) -> Result<S> {
    skew_pq_with_cap(lambda, mu, spec, kind, DEFAULT_TABLEAU_CAP)
}

pub fn skew_pq_with_cap<S: Scalar>(
    lambda: &StrictPartition,
    mu: &StrictPartition,
    spec: &Specialization<S>,
    kind: Kind,
    cap: u64,
) -> Result<S> {
    if !lambda.contains(mu) {
        return Ok(S::zero());
    }
    let contents = tableau_contents(lambda, mu, spec.len(), cap)?;
    let mut total = S::zero();
    for (content, count) in contents {
        let mut term = S::from_i64(count as i64);
        for (v, &e) in spec.values.iter().zip(&content) {
            if e > 0 {
                term = term * v.powi(e);
            }
        }
        total = total + term;
    }
    Ok(rescale(total, lambda, mu, kind))
}

fn rescale<S: Scalar>(q_value: S, lambda: &StrictPartition, mu: &StrictPartition, kind: Kind) -> S {
    match kind {
        Kind::Q => q_value,
        Kind::P => q_value * S::pow2(mu.len() as i64 - lambda.len() as i64),
    }
}

/// Counts marked shifted tableaux of shape `λ − μ` over `n` letters, keyed
/// by content (number of boxes holding `k` or `k'`, for each `k`).
fn tableau_contents(
    lambda: &StrictPartition,
    mu: &StrictPartition,
    n: usize,
    cap: u64,
) -> Result<HashMap<Vec<u32>, u64>> {
    // Boxes of the shifted skew shape in column-major order.
    let inner: std::collections::BTreeSet<(u32, u32)> = mu.shifted_boxes().collect();
    let mut boxes: Vec<(u32, u32)> = lambda.shifted_boxes().filter(|b| !inner.contains(b)).collect();
    boxes.sort_by_key(|&(i, j)| (j, i));
    let index: HashMap<(u32, u32), usize> = boxes.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let left: Vec<Option<usize>> = boxes
        .iter()
        .map(|&(i, j)| index.get(&(i, j.wrapping_sub(1))).copied())
        .collect();
    let up: Vec<Option<usize>> = boxes
        .iter()
        .map(|&(i, j)| index.get(&(i.wrapping_sub(1), j)).copied())
        .collect();

    let mut out = HashMap::new();
    if boxes.is_empty() {
        out.insert(vec![0; n], 1);
        return Ok(out);
    }
    if n == 0 {
        return Ok(out);
    }
    let mut search = TableauSearch {
        left,
        up,
        codes: vec![0; boxes.len()],
        content: vec![0; n],
        letters: 2 * n as u32,
        visited: 0,
        cap,
        out,
    };
    search.fill(0)?;
    Ok(search.out)
}

struct TableauSearch {
    left: Vec<Option<usize>>,
    up: Vec<Option<usize>>,
    /// `2k − 2` for the letter `k`, `2k − 1` for `k'`.
    codes: Vec<u32>,
    content: Vec<u32>,
    letters: u32,
    visited: u64,
    cap: u64,
    out: HashMap<Vec<u32>, u64>,
}

impl TableauSearch {
    fn fill(&mut self, k: usize) -> Result<()> {
        if k == self.codes.len() {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::ShapeTooLarge { cap: self.cap });
            }
            *self.out.entry(self.content.clone()).or_insert(0) += 1;
            return Ok(());
        }
        let mut hi = self.letters - 1;
        if let Some(l) = self.left[k] {
            hi = hi.min(self.codes[l]);
        }
        if let Some(u) = self.up[k] {
            hi = hi.min(self.codes[u]);
        }
        for c in 0..=hi {
            let marked = c % 2 == 1;
            if marked && self.left[k].is_some_and(|l| self.codes[l] == c) {
                continue;
            }
            if !marked && self.up[k].is_some_and(|u| self.codes[u] == c) {
                continue;
            }
            self.codes[k] = c;
            self.content[(c / 2) as usize] += 1;
            self.fill(k + 1)?;
            self.content[(c / 2) as usize] -= 1;
        }
        Ok(())
    }
}

/// One-variable closed form: `2^{a(λ−μ)} s^{|λ|−|μ|}` when `λ − μ` is a
/// horizontal strip, otherwise 0.
pub fn skew_q_single<S: Scalar>(lambda: &StrictPartition, mu: &StrictPartition, s: &S) -> S {
    let stats = skew_strip_stats(lambda, mu);
    if !stats.contains || !stats.horizontal_strip {
        return S::zero();
    }
    S::pow2(stats.a as i64) * s.powi(lambda.weight() - mu.weight())
}

/// `Q_{λ/μ}(spec)`, using the closed form for at most one variable.
pub fn skew_q<S: Scalar>(lambda: &StrictPartition, mu: &StrictPartition, spec: &Specialization<S>) -> Result<S> {
    match spec.values.as_slice() {
        [] => Ok(if lambda == mu { S::one() } else { S::zero() }),
        [s] => Ok(skew_q_single(lambda, mu, s)),
        _ => skew_pq(lambda, mu, spec, Kind::Q),
    }
}

/// `P_{λ/μ}(spec)`, using the closed form for at most one variable.
pub fn skew_p<S: Scalar>(lambda: &StrictPartition, mu: &StrictPartition, spec: &Specialization<S>) -> Result<S> {
    Ok(rescale(skew_q(lambda, mu, spec)?, lambda, mu, Kind::P))
}

/// `H(x, y) = Π_{i,j} (1 + a_i b_j)/(1 − a_i b_j)`.
pub fn h_pairing<S: Scalar>(x: &Specialization<S>, y: &Specialization<S>) -> Result<S> {
    let mut acc = S::one();
    for a in &x.values {
        for b in &y.values {
            let ab = a.clone() * b.clone();
            let den = S::one() - ab.clone();
            if den.is_zero() {
                return Err(Error::PoleOnProduct);
            }
            acc = acc * (S::one() + ab) / den;
        }
    }
    Ok(acc)
}

/// Both sides of the QPQP identity and their difference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QpqpReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `(2·max|a|)^cutoff`, a scale for the neglected tail of the λ-sum.
    pub tail_indicator: f64,
    pub cutoff: u32,
}

/// Compares `Σ_{|λ| ≤ cutoff} Q_{λ/μ}(x) P_{λ/ν}(y)` with
/// `H(x,y) Σ_τ Q_{ν/τ}(x) P_{μ/τ}(y)`.
pub fn verify_qpqp(
    mu: &StrictPartition,
    nu: &StrictPartition,
    x: &Specialization<f64>,
    y: &Specialization<f64>,
    cutoff: u32,
) -> Result<QpqpReport> {
    let max_abs = x.max_abs().max(y.max_abs());
    if max_abs > 0.5 {
        return Err(Error::InvalidInput(format!(
            "specialization values must be at most 1/2 in magnitude, got {max_abs}"
        )));
    }
    let mut lhs = 0.0;
    for lambda in StrictPartition::all_up_to(cutoff) {
        if !lambda.contains(mu) || !lambda.contains(nu) {
            continue;
        }
        lhs += skew_q(&lambda, mu, x)? * skew_p(&lambda, nu, y)?;
    }
    let mut inner = 0.0;
    for tau in mu.common_subpartitions(nu) {
        inner += skew_q(nu, &tau, x)? * skew_p(mu, &tau, y)?;
    }
    let rhs = h_pairing(x, y)? * inner;
    Ok(QpqpReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        tail_indicator: (2.0 * max_abs).powi(cutoff as i32),
        cutoff,
    })
}
