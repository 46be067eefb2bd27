//! The shifted Schur process: weights, partition function and
//! probabilities of a specialization chain, the chain realizing the
//! measure `2^{A(π)} q^{|π|}`, and the shifted MacMahon product.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::{AlternationMethod, StrictPartition, StrictPlanePartition};
use crate::scalar::Scalar;
use crate::schur::{h_pairing, skew_p, skew_q, Specialization};

/// Largest `N` accepted by [`macmahon_coeffs`].
pub const MACMAHON_CAP: u32 = 24;

/// `(ρ_0^+, ρ_1^−, ρ_1^+, …, ρ_{T−1}^+, ρ_T^−)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializationChain<S> {
    plus: Vec<Specialization<S>>,
    minus: Vec<Specialization<S>>,
}

impl<S: Scalar> SpecializationChain<S> {
    /// `plus = [ρ_0^+, …, ρ_{T−1}^+]`, `minus = [ρ_1^−, …, ρ_T^−]`.
    pub fn new(plus: Vec<Specialization<S>>, minus: Vec<Specialization<S>>) -> Result<Self> {
        if plus.is_empty() || plus.len() != minus.len() {
            return Err(Error::InvalidInput(format!(
                "chain needs T >= 1 plus and minus specializations, got {} and {}",
                plus.len(),
                minus.len()
            )));
        }
        Ok(Self { plus, minus })
    }

    /// A chain of length `T` with every specialization empty.
    pub fn empty(t: usize) -> Self {
        Self {
            plus: vec![Specialization::empty(); t.max(1)],
            minus: vec![Specialization::empty(); t.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `ρ_m^+` for `0 ≤ m < T`.
    pub fn plus(&self, m: usize) -> &Specialization<S> {
        &self.plus[m]
    }

    /// `ρ_m^−` for `1 ≤ m ≤ T`.
    pub fn minus(&self, m: usize) -> &Specialization<S> {
        &self.minus[m - 1]
    }
}

impl SpecializationChain<f64> {
    pub fn to_json(&self) -> Value {
        let list =
            |v: &[Specialization<f64>]| -> Value { v.iter().map(|s| json!(s.values())).collect::<Vec<_>>().into() };
        json!({ "T": self.len(), "plus": list(&self.plus), "minus": list(&self.minus) })
    }
}

/// `q ∈ (0, 1)` together with the half-width `T` of the finite window
/// `t ∈ [−T, T]` used to approximate the measure by a finite chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MqParams {
    q: f64,
    window: u32,
}

impl MqParams {
    pub fn new(q: f64, window: u32) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidInput(format!("q must lie in (0, 1), got {q}")));
        }
        Ok(Self { q, window })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn r(&self) -> f64 {
        -self.q.ln()
    }
}

/// Window rule: the largest queried `|t|` plus enough slack that factors
/// beyond the window weigh less than `tolerance`.
pub fn default_window(max_abs_t: u32, q: f64, tolerance: f64) -> u32 {
    let slack = (tolerance.ln() / q.ln() - 1e-9).ceil().max(1.0);
    max_abs_t + slack as u32
}

/// The chain for window `T`, given `s = q^{1/2}`.
///
/// Diagonal `λ^n`, `n ∈ [−T, T]`, is the `(n + T + 1)`-th partition of the
/// chain. Plus specializations carry `s^{−(2n+1)}` for `n ≤ −1` and minus
/// specializations carry `s^{2n+1}` for `n ≥ 0`; all others are empty.
pub fn mq_chain_from_sqrt<S: Scalar>(s: &S, window: u32) -> SpecializationChain<S> {
    let t = window as i64;
    let plus = (0..=2 * t)
        .map(|j| {
            let n = j - t - 1;
            if n <= -1 {
                Specialization::single(s.powi((-2 * n - 1) as u32))
            } else {
                Specialization::empty()
            }
        })
        .collect();
    let minus = (1..=2 * t + 1)
        .map(|k| {
            let n = k - t - 1;
            if n >= 0 {
                Specialization::single(s.powi((2 * n + 1) as u32))
            } else {
                Specialization::empty()
            }
        })
        .collect();
    SpecializationChain { plus, minus }
}

pub fn mq_chain(params: &MqParams) -> SpecializationChain<f64> {
    mq_chain_from_sqrt(&params.q.sqrt(), params.window)
}

/// `Q_{λ¹}(ρ_0^+) P_{λ¹/μ¹}(ρ_1^−) Q_{λ²/μ¹}(ρ_1^+) ⋯ P_{λ^T}(ρ_T^−)`.
pub fn weight_w<S: Scalar>(
    lambdas: &[StrictPartition],
    mus: &[StrictPartition],
    chain: &SpecializationChain<S>,
) -> Result<S> {
    let t = chain.len();
    if lambdas.len() != t || mus.len() + 1 != t {
        return Err(Error::InvalidInput(format!(
            "expected {t} partitions λ and {} partitions μ, got {} and {}",
            t - 1,
            lambdas.len(),
            mus.len()
        )));
    }
    let empty = StrictPartition::empty();
    let mu_at = |i: usize| -> &StrictPartition {
        if i == 0 || i == t {
            &empty
        } else {
            &mus[i - 1]
        }
    };
    let mut w = S::one();
    for i in 1..=t {
        let lambda = &lambdas[i - 1];
        w = w * skew_q(lambda, mu_at(i - 1), chain.plus(i - 1))?;
        if w.is_zero() {
            return Ok(w);
        }
        w = w * skew_p(lambda, mu_at(i), chain.minus(i))?;
        if w.is_zero() {
            return Ok(w);
        }
    }
    Ok(w)
}

/// `Σ_μ W(λ, μ)`. The sum factorizes over the independent `μ^i ⊂ λ^i ∩ λ^{i+1}`.
pub fn weight_sum_over_mu<S: Scalar>(lambdas: &[StrictPartition], chain: &SpecializationChain<S>) -> Result<S> {
    let t = chain.len();
    if lambdas.len() != t {
        return Err(Error::InvalidInput(format!(
            "expected {t} partitions, got {}",
            lambdas.len()
        )));
    }
    let empty = StrictPartition::empty();
    let mut w = skew_q(&lambdas[0], &empty, chain.plus(0))?;
    for i in 1..t {
        let (left, right) = (&lambdas[i - 1], &lambdas[i]);
        let mut local = S::zero();
        for mu in left.common_subpartitions(right) {
            let term = skew_p(left, &mu, chain.minus(i))?;
            if term.is_zero() {
                continue;
            }
            local = local + term * skew_q(right, &mu, chain.plus(i))?;
        }
        w = w * local;
        if w.is_zero() {
            return Ok(w);
        }
    }
    Ok(w * skew_p(&lambdas[t - 1], &empty, chain.minus(t))?)
}

/// `Z = Π_{0 ≤ i < j ≤ T} H(ρ_i^+, ρ_j^−)`.
pub fn partition_function<S: Scalar>(chain: &SpecializationChain<S>) -> Result<S> {
    let t = chain.len();
    let mut z = S::one();
    for i in 0..t {
        for j in (i + 1)..=t {
            z = z * h_pairing(chain.plus(i), chain.minus(j))?;
        }
    }
    Ok(z)
}

/// Probability of the sequence `λ¹, …, λ^T`.
pub fn prob<S: Scalar>(lambdas: &[StrictPartition], chain: &SpecializationChain<S>) -> Result<S> {
    Ok(weight_sum_over_mu(lambdas, chain)? / partition_function(chain)?)
}

/// `2^{A(π)} q^{|π|}`.
pub fn mq_weight<S: Scalar>(pi: &StrictPlanePartition, q: &S) -> S {
    S::pow2(pi.alternation(AlternationMethod::Components) as i64) * q.powi(pi.volume())
}

/// `Σ_μ W` for the diagonals of `π` under the chain of the smallest window
/// containing its support, with `s = q^{1/2}`; equals [`mq_weight`].
pub fn mq_weight_via_chain<S: Scalar>(pi: &StrictPlanePartition, s: &S) -> Result<S> {
    let window = pi.t_left().max(pi.t_right()) as u32;
    let chain = mq_chain_from_sqrt(s, window);
    let w = window as i64;
    let lambdas: Vec<StrictPartition> = (-w..=w).map(|n| pi.diagonal(n)).collect();
    weight_sum_over_mu(&lambdas, &chain)
}

/// Reads a chain-indexed sequence of diagonals `λ^{−T} … λ^T` back as a plane
/// partition, if it is one.
pub fn sequence_to_spp(lambdas: &[StrictPartition]) -> Result<StrictPlanePartition> {
    let t = (lambdas.len() as i64 - 1) / 2;
    StrictPlanePartition::from_diagonals(-t, lambdas)
}

/// Coefficients `c_0, …, c_N` of `Π_{n≥1} ((1+q^n)/(1−q^n))^n`.
pub fn macmahon_coeffs(n_max: u32) -> Result<Vec<u128>> {
    if n_max > MACMAHON_CAP {
        return Err(Error::CapExceeded {
            what: "N",
            requested: n_max as u64,
            cap: MACMAHON_CAP as u64,
        });
    }
    let len = n_max as usize + 1;
    let mut c = vec![0u128; len];
    c[0] = 1;
    for n in 1..len {
        // (1+q^n)/(1−q^n) = 1 + 2 Σ_{k≥1} q^{nk}, applied n times.
        for _ in 0..n {
            let prev = c.clone();
            for d in (n..len).step_by(n) {
                for e in 0..len - d {
                    c[e + d] += 2 * prev[e];
                }
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_spp, for_each_spp, validate_spp};
    use crate::scalar::QSeries;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn sp(parts: &[u32]) -> StrictPartition {
        StrictPartition::new(parts.to_vec()).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn one_step(s: BigRational, t: BigRational) -> SpecializationChain<BigRational> {
        SpecializationChain::new(vec![Specialization::single(s)], vec![Specialization::single(t)]).unwrap()
    }

    #[test]
    fn single_step_weight_and_partition_function() {
        let (s, t) = (rat(1, 3), rat(1, 5));
        let chain = one_step(s.clone(), t.clone());
        let w = weight_w(&[sp(&[1])], &[], &chain).unwrap();
        assert_eq!(w, rat(2, 1) * &s * &t);
        let z = partition_function(&chain).unwrap();
        assert_eq!(z, (rat(1, 1) + &s * &t) / (rat(1, 1) - &s * &t));
        let p = prob(&[sp(&[1])], &chain).unwrap();
        assert_eq!(p, w / z);
    }

    #[test]
    fn broken_containment_has_zero_weight() {
        let chain = SpecializationChain::new(
            vec![Specialization::single(0.3), Specialization::single(0.2)],
            vec![Specialization::single(0.4), Specialization::single(0.1)],
        )
        .unwrap();
        let w = weight_w(&[sp(&[1]), sp(&[2])], &[sp(&[2])], &chain).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn empty_sequence_weight_is_one() {
        let chain = SpecializationChain::new(
            vec![Specialization::single(0.3), Specialization::single(0.2)],
            vec![Specialization::single(0.4), Specialization::single(0.1)],
        )
        .unwrap();
        let e = StrictPartition::empty();
        assert_eq!(
            weight_w(&[e.clone(), e.clone()], std::slice::from_ref(&e), &chain).unwrap(),
            1.0
        );
        let z = partition_function(&chain).unwrap();
        assert!((prob(&[e.clone(), e], &chain).unwrap() - 1.0 / z).abs() < 1e-15);
        assert_eq!(partition_function(&SpecializationChain::<f64>::empty(3)).unwrap(), 1.0);
    }

    #[test]
    fn mq_chain_values() {
        let q = 0.09f64;
        let chain = mq_chain(&MqParams::new(q, 2).unwrap());
        assert_eq!(chain.len(), 5);
        // minus slot of diagonal n = 0 and plus slot of n = −1
        assert!((chain.minus(3).values()[0] - q.sqrt()).abs() < 1e-15);
        assert!((chain.plus(2).values()[0] - q.sqrt()).abs() < 1e-15);
        assert!((chain.plus(0).values()[0] / q.powf(2.5) - 1.0).abs() < 1e-14);
        assert!((chain.plus(1).values()[0] / q.powf(1.5) - 1.0).abs() < 1e-14);
        assert!((chain.minus(5).values()[0] / q.powf(2.5) - 1.0).abs() < 1e-14);
        for m in [1, 2] {
            assert!(chain.minus(m).is_empty());
        }
        for m in [3, 4] {
            assert!(chain.plus(m).is_empty());
        }
        assert!(MqParams::new(1.0, 1).is_err());
    }

    #[test]
    fn macmahon_first_terms() {
        assert_eq!(macmahon_coeffs(3).unwrap(), vec![1, 2, 6, 16]);
        assert!(matches!(macmahon_coeffs(25), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn macmahon_matches_enumeration() {
        let coeffs = macmahon_coeffs(10).unwrap();
        let mut counts = vec![0u128; 11];
        for_each_spp(10, 24, |p| {
            counts[p.volume() as usize] += 1u128 << p.alternation(AlternationMethod::Components);
        })
        .unwrap();
        assert_eq!(coeffs, counts);
    }

    #[test]
    fn mq_weight_examples() {
        assert_eq!(mq_weight(&StrictPlanePartition::empty(), &0.3), 1.0);
        let fig = validate_spp(&[vec![5, 3, 2, 1, 1], vec![4, 3, 2, 1], vec![3, 3, 2], vec![2, 2, 1]]).unwrap();
        let q = rat(1, 2);
        assert_eq!(mq_weight(&fig, &q), rat(128, 1) * <BigRational as Scalar>::powi(&q, 35));
    }

    #[test]
    fn chain_weight_reproduces_measure_exactly() {
        let s = rat(1, 3);
        let q = &s * &s;
        for pi in enumerate_spp(8).unwrap() {
            let via_chain = mq_weight_via_chain(&pi, &s).unwrap();
            assert_eq!(via_chain, mq_weight(&pi, &q), "{:?}", pi.rows());
        }
    }

    /// All sequences of three strict partitions with total size at most `n`.
    fn triples(n: u32) -> Vec<Vec<StrictPartition>> {
        let all = StrictPartition::all_up_to(n);
        let mut out = Vec::new();
        for a in &all {
            for b in &all {
                for c in &all {
                    if a.weight() + b.weight() + c.weight() <= n {
                        out.push(vec![a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn partition_function_matches_weight_sum_as_series() {
        type S = QSeries<20>;
        let chain = mq_chain_from_sqrt(&S::var(), 1);
        let z = partition_function(&chain).unwrap();
        // every weight here has s-degree 2·(total size), so sizes ≤ 10 suffice
        let mut total = S::zero();
        for lambdas in triples(10) {
            for mu in lambdas[0].common_subpartitions(&lambdas[1]) {
                for nu in lambdas[1].common_subpartitions(&lambdas[2]) {
                    total = total + weight_w(&lambdas, &[mu.clone(), nu], &chain).unwrap();
                }
            }
        }
        assert_eq!(total, z);
    }

    #[test]
    fn partition_function_matches_weight_sum_for_mixed_chain() {
        type S = QSeries<8>;
        let s = S::var();
        let chain = SpecializationChain::new(
            vec![
                Specialization::new(vec![s.clone(), s.clone() * s.clone()]),
                Specialization::single(S::from_i64(2) * s.clone()),
            ],
            vec![
                Specialization::single(s.clone()),
                Specialization::new(vec![s.clone(), S::from_i64(3) * s.clone()]),
            ],
        )
        .unwrap();
        let z = partition_function(&chain).unwrap();
        // a weight has s-degree at least |λ¹| + |λ²|
        let all = StrictPartition::all_up_to(8);
        let mut total = S::zero();
        for a in &all {
            for b in &all {
                if a.weight() + b.weight() > 8 {
                    continue;
                }
                for mu in a.common_subpartitions(b) {
                    total = total + weight_w(&[a.clone(), b.clone()], &[mu], &chain).unwrap();
                }
            }
        }
        assert_eq!(total, z);
    }

    #[test]
    fn window_three_partition_function_by_transfer_matrix() {
        let q: f64 = 0.1;
        let chain = mq_chain(&MqParams::new(q, 3).unwrap());
        // diagonals heavier than 16 carry total weight below 3e-12
        let states = StrictPartition::all_up_to(16);
        let empty = StrictPartition::empty();
        // v[λ] = Σ over prefixes ending in λ
        let mut v: Vec<f64> = states
            .iter()
            .map(|l| skew_q(l, &empty, chain.plus(0)).unwrap())
            .collect();
        for i in 1..chain.len() {
            let mut next = vec![0.0; states.len()];
            for (a, left) in states.iter().enumerate() {
                if v[a] == 0.0 {
                    continue;
                }
                for (b, right) in states.iter().enumerate() {
                    let mut local = 0.0;
                    for mu in left.common_subpartitions(right) {
                        local +=
                            skew_p(left, &mu, chain.minus(i)).unwrap() * skew_q(right, &mu, chain.plus(i)).unwrap();
                    }
                    next[b] += v[a] * local;
                }
            }
            v = next;
        }
        let t = chain.len();
        let total: f64 = states
            .iter()
            .zip(&v)
            .map(|(l, w)| w * skew_p(l, &empty, chain.minus(t)).unwrap())
            .sum();
        let z = partition_function(&chain).unwrap();
        assert!(((total - z) / z).abs() < 1e-10, "{total} vs {z}");
    }

    #[test]
    fn probabilities_accumulate_towards_one() {
        let chain = mq_chain(&MqParams::new(0.1, 1).unwrap());
        let mut previous = 0.0;
        for bound in [4, 8, 12] {
            let mut total = 0.0;
            for pi in enumerate_spp(bound).unwrap() {
                if pi.t_left() > 1 || pi.t_right() > 1 {
                    continue;
                }
                let lambdas: Vec<_> = (-1..=1).map(|n| pi.diagonal(n)).collect();
                let p = prob(&lambdas, &chain).unwrap();
                assert!((0.0..=1.0).contains(&p));
                total += p;
            }
            assert!(total < 1.0 && total > previous);
            previous = total;
        }
        assert!(1.0 - previous < 1e-6, "{previous}");
    }

    #[test]
    fn default_window_grows_with_tolerance() {
        assert_eq!(default_window(2, 0.1, 1e-12), 14);
        assert!(default_window(0, 0.5, 1e-12) > default_window(0, 0.1, 1e-12));
    }
}
