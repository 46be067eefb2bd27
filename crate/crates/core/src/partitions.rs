//! Strict partitions, strict plane partitions and their plane diagrams.
//!
//! A strict plane partition is stored as its matrix of positive entries
//! (rows nonincreasing left to right, columns nonincreasing top to bottom,
//! diagonals strictly decreasing). The diagonal view `λ^t`, `t ∈ [−T_L, T_R]`,
//! is derived: entry `(i, j)` (0-based) lies on diagonal `t = j − i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default safety cap on the volume accepted by [`enumerate_spp`].
pub const DEFAULT_ENUMERATION_CAP: u32 = 24;

/// Strictly decreasing sequence of positive integers. The empty partition
/// has no parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct StrictPartition {
    parts: Vec<u32>,
}

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let positive = parts.iter().all(|&p| p > 0);
        let strict = parts.windows(2).all(|w| w[0] > w[1]);
        if positive && strict {
            Ok(Self { parts })
        } else {
            Err(Error::NotStrict(parts))
        }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, `l(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn has_part(&self, x: u32) -> bool {
        self.parts.contains(&x)
    }

    /// `μ ⊂ self` in the sense `μ_i ≤ λ_i` for every `i`.
    pub fn contains(&self, mu: &StrictPartition) -> bool {
        mu.len() <= self.len() && mu.parts.iter().zip(&self.parts).all(|(m, l)| m <= l)
    }

    /// All strict partitions of weight at most `max_weight`, ordered by
    /// weight and then lexicographically.
    pub fn all_up_to(max_weight: u32) -> Vec<StrictPartition> {
        let mut out = Vec::new();
        for n in 0..=max_weight {
            let mut cur = Vec::new();
            gen_of_weight(n, n, &mut cur, &mut out);
        }
        out
    }

    /// All strict partitions `μ` with `μ_i ≤ bound[i]` (and no parts past the
    /// end of `bound`).
    pub fn all_inside(bound: &[u32]) -> Vec<StrictPartition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        gen_inside(bound, u32::MAX, &mut cur, &mut out);
        out
    }

    /// Strict partitions contained in both `self` and `other`.
    pub fn common_subpartitions(&self, other: &StrictPartition) -> Vec<StrictPartition> {
        let n = self.len().min(other.len());
        let bound: Vec<u32> = (0..n).map(|i| self.part(i).min(other.part(i))).collect();
        Self::all_inside(&bound)
    }

    /// Boxes `(row, col)` (1-based) of the shifted diagram:
    /// `i ≤ j ≤ λ_i + i − 1`.
    pub fn shifted_boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts.iter().enumerate().flat_map(|(k, &p)| {
            let i = k as u32 + 1;
            (i..i + p).map(move |j| (i, j))
        })
    }
}

fn gen_of_weight(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
    if remaining == 0 {
        out.push(StrictPartition { parts: cur.clone() });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        cur.push(p);
        gen_of_weight(remaining - p, p - 1, cur, out);
        cur.pop();
    }
}

fn gen_inside(bound: &[u32], below: u32, cur: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
    out.push(StrictPartition { parts: cur.clone() });
    let i = cur.len();
    if i >= bound.len() {
        return;
    }
    let hi = bound[i].min(below.saturating_sub(1));
    for p in 1..=hi {
        cur.push(p);
        gen_inside(bound, p, cur, out);
        cur.pop();
    }
}

impl TryFrom<Vec<u32>> for StrictPartition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<StrictPartition> for Vec<u32> {
    fn from(p: StrictPartition) -> Self {
        p.parts
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Result of [`skew_strip_stats`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkewStats {
    pub contains: bool,
    pub horizontal_strip: bool,
    /// Number of connected components of the shifted skew diagram. Zero when
    /// `μ ⊄ λ`.
    pub a: u32,
}

/// Containment, the horizontal-strip test and the component count `a(λ−μ)`.
///
/// The strip test looks at columns of the ordinary (unshifted) skew diagram.
/// For strips, `a` is the number of columns `i ≥ 1` occupied while column
/// `i + 1` is empty; otherwise it falls back to counting connected components
/// of the shifted skew diagram. The fallback is diagnostic only.
pub fn skew_strip_stats(lambda: &StrictPartition, mu: &StrictPartition) -> SkewStats {
    if !lambda.contains(mu) {
        return SkewStats {
            contains: false,
            horizontal_strip: false,
            a: 0,
        };
    }
    let width = lambda.part(0);
    let column_height = |c: u32| -> u32 {
        (0..lambda.len())
            .filter(|&i| mu.part(i) < c && c <= lambda.part(i))
            .count() as u32
    };
    let heights: Vec<u32> = (1..=width + 1).map(column_height).collect();
    let horizontal_strip = heights.iter().all(|&h| h <= 1);
    let a = if horizontal_strip {
        heights.windows(2).filter(|w| w[0] > 0 && w[1] == 0).count() as u32
    } else {
        shifted_components(lambda, mu)
    };
    SkewStats {
        contains: true,
        horizontal_strip,
        a,
    }
}

/// Connected components (edge adjacency) of the shifted skew diagram `λ − μ`.
/// Assumes `μ ⊂ λ`.
pub fn shifted_components(lambda: &StrictPartition, mu: &StrictPartition) -> u32 {
    let inner: BTreeSet<(u32, u32)> = mu.shifted_boxes().collect();
    let cells: BTreeSet<(u32, u32)> = lambda.shifted_boxes().filter(|b| !inner.contains(b)).collect();
    count_components(&cells, |_, _| true)
}

fn count_components<F>(cells: &BTreeSet<(u32, u32)>, same: F) -> u32
where
    F: Fn((u32, u32), (u32, u32)) -> bool,
{
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in cells {
        if seen.contains(&start) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen.insert(start);
        while let Some((i, j)) = stack.pop() {
            let mut nbrs = vec![(i + 1, j), (i, j + 1)];
            if i > 0 {
                nbrs.push((i - 1, j));
            }
            if j > 0 {
                nbrs.push((i, j - 1));
            }
            for nb in nbrs {
                if cells.contains(&nb) && !seen.contains(&nb) && same((i, j), nb) {
                    seen.insert(nb);
                    stack.push(nb);
                }
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlternationMethod {
    DiagonalFormula,
    Components,
}

/// A strict plane partition, stored as its matrix of positive entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct StrictPlanePartition {
    rows: Vec<Vec<u32>>,
}

/// Validates a nonnegative-integer matrix (rows may be ragged; missing
/// entries count as zero) and returns the strict plane partition it encodes.
pub fn validate_spp(matrix: &[Vec<u32>]) -> Result<StrictPlanePartition> {
    let at = |i: usize, j: usize| -> u32 { matrix.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0) };
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if j > 0 && v > row[j - 1] {
                return Err(Error::NotAPlanePartition(format!("row {i} increases at column {j}")));
            }
            if i > 0 && v > at(i - 1, j) {
                return Err(Error::NotAPlanePartition(format!("column {j} increases at row {i}")));
            }
        }
    }
    let mut rows: Vec<Vec<u32>> = matrix
        .iter()
        .map(|r| r.iter().copied().take_while(|&v| v > 0).collect())
        .collect();
    // Positive entries after a zero would have tripped the row check.
    while rows.last().is_some_and(|r| r.is_empty()) {
        rows.pop();
    }
    if rows.iter().any(|r| r.is_empty()) {
        return Err(Error::NotAPlanePartition("empty row above a nonempty row".into()));
    }
    let spp = StrictPlanePartition { rows };
    for (t, lambda) in spp.diagonal_parts() {
        if lambda.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::DiagonalNotStrict {
                offset: t,
                parts: lambda,
            });
        }
    }
    Ok(spp)
}

impl StrictPlanePartition {
    pub fn empty() -> Self {
        Self { rows: Vec::new() }
    }

    /// Builds `π` from its diagonals `λ^{t0}, λ^{t0+1}, …`; the result is
    /// validated, so the sequence must satisfy the interlacing conditions.
    pub fn from_diagonals(t0: i64, diagonals: &[StrictPartition]) -> Result<Self> {
        let mut matrix: Vec<Vec<u32>> = Vec::new();
        for (k, lambda) in diagonals.iter().enumerate() {
            let t = t0 + k as i64;
            for (idx, &p) in lambda.parts().iter().enumerate() {
                let (i, j) = if t >= 0 {
                    (idx, idx + t as usize)
                } else {
                    (idx + (-t) as usize, idx)
                };
                if matrix.len() <= i {
                    matrix.resize(i + 1, Vec::new());
                }
                if matrix[i].len() <= j {
                    matrix[i].resize(j + 1, 0);
                }
                matrix[i][j] = p;
            }
        }
        let spp = validate_spp(&matrix)?;
        // Holes (zeros inside a row) are absorbed by validation; make sure no
        // part was dropped along the way.
        let total: u32 = diagonals.iter().map(StrictPartition::weight).sum();
        if spp.volume() != total {
            return Err(Error::NotAPlanePartition(
                "diagonals do not form a plane partition".into(),
            ));
        }
        Ok(spp)
    }

    /// Inverse of [`plane_diagram`].
    pub fn from_plane_diagram(points: &PointConfiguration) -> Result<Self> {
        if points.is_empty() {
            return Ok(Self::empty());
        }
        let t_min = points.iter().map(|p| p.0).min().unwrap_or(0).min(0);
        let t_max = points.iter().map(|p| p.0).max().unwrap_or(0).max(0);
        let mut diagonals = Vec::new();
        for t in t_min..=t_max {
            let mut parts: Vec<u32> = points.iter().filter(|p| p.0 == t).map(|p| p.1).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            diagonals.push(StrictPartition::new(parts)?);
        }
        Self::from_diagonals(t_min, &diagonals)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Entry `π(i, j)` (0-based), zero outside the support.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    /// `|π|`.
    pub fn volume(&self) -> u32 {
        self.rows.iter().flatten().sum()
    }

    pub fn num_boxes(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `T_L`: the lowest nonempty diagonal is `λ^{−T_L}`.
    pub fn t_left(&self) -> i64 {
        self.rows.len().saturating_sub(1) as i64
    }

    /// `T_R`: the highest nonempty diagonal is `λ^{T_R}`.
    pub fn t_right(&self) -> i64 {
        self.rows.first().map_or(0, |r| r.len().saturating_sub(1)) as i64
    }

    /// The diagonal `λ^t` (empty outside the support).
    pub fn diagonal(&self, t: i64) -> StrictPartition {
        StrictPartition {
            parts: self.diagonal_raw(t),
        }
    }

    fn diagonal_raw(&self, t: i64) -> Vec<u32> {
        let mut parts = Vec::new();
        let mut k = 0usize;
        loop {
            let (i, j) = if t >= 0 {
                (k, k + t as usize)
            } else {
                (k + (-t) as usize, k)
            };
            let v = self.entry(i, j);
            if v == 0 {
                break;
            }
            parts.push(v);
            k += 1;
        }
        parts
    }

    fn diagonal_parts(&self) -> Vec<(i64, Vec<u32>)> {
        (-self.t_left()..=self.t_right())
            .map(|t| (t, self.diagonal_raw(t)))
            .collect()
    }

    /// `(t, λ^t)` for `t` from `−T_L` to `T_R`.
    pub fn diagonals(&self) -> Vec<(i64, StrictPartition)> {
        (-self.t_left()..=self.t_right())
            .map(|t| (t, self.diagonal(t)))
            .collect()
    }

    /// The alternation `A(π)`.
    pub fn alternation(&self, method: AlternationMethod) -> u32 {
        match method {
            AlternationMethod::DiagonalFormula => self.alternation_diagonal(),
            AlternationMethod::Components => self.alternation_components(),
        }
    }

    fn alternation_diagonal(&self) -> u32 {
        let (tl, tr) = (self.t_left(), self.t_right());
        let a = |big: &StrictPartition, small: &StrictPartition| {
            let stats = skew_strip_stats(big, small);
            debug_assert!(stats.horizontal_strip);
            stats.a as i64
        };
        let mut total: i64 = 0;
        for i in 1..=tr + 1 {
            total += a(&self.diagonal(i - 1), &self.diagonal(i));
        }
        for i in -tl..=0 {
            total += a(&self.diagonal(i), &self.diagonal(i - 1));
        }
        total -= self.diagonal(0).len() as i64;
        debug_assert!(total >= 0);
        total as u32
    }

    fn alternation_components(&self) -> u32 {
        let cells: BTreeSet<(u32, u32)> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| (0..r.len()).map(move |j| (i as u32, j as u32)))
            .collect();
        count_components(&cells, |a, b| {
            self.entry(a.0 as usize, a.1 as usize) == self.entry(b.0 as usize, b.1 as usize)
        })
    }
}

impl TryFrom<Vec<Vec<u32>>> for StrictPlanePartition {
    type Error = Error;
    fn try_from(m: Vec<Vec<u32>>) -> Result<Self> {
        validate_spp(&m)
    }
}

impl From<StrictPlanePartition> for Vec<Vec<u32>> {
    fn from(p: StrictPlanePartition) -> Self {
        p.rows
    }
}

/// Finite set of points `(t, x)` with `x > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointConfiguration {
    points: BTreeSet<(i64, u32)>,
}

impl PointConfiguration {
    /// Rejects repeated points and `x = 0`.
    pub fn new(points: impl IntoIterator<Item = (i64, u32)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (t, x) in points {
            if x == 0 {
                return Err(Error::InvalidInput(format!("point ({t}, 0) has a nonpositive part")));
            }
            if !set.insert((t, x)) {
                return Err(Error::InvalidInput(format!("point ({t}, {x}) is repeated")));
            }
        }
        Ok(Self { points: set })
    }

    /// Parses `[[t, x], …]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<(i64, i64)> =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("points must be [[t,x],...]: {e}")))?;
        let mut pts = Vec::with_capacity(raw.len());
        for (t, x) in raw {
            if x <= 0 {
                return Err(Error::InvalidInput(format!("point ({t}, {x}) has a nonpositive part")));
            }
            pts.push((t, x as u32));
        }
        Self::new(pts)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, t: i64, x: u32) -> bool {
        self.points.contains(&(t, x))
    }

    pub fn is_subset(&self, other: &PointConfiguration) -> bool {
        self.points.is_subset(&other.points)
    }

    /// Points in canonical `(t, x)` order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.points.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<(i64, u32)> {
        self.iter().collect()
    }
}

impl Serialize for PointConfiguration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[i64; 2]> = self.iter().map(|(t, x)| [t, x as i64]).collect();
        v.serialize(s)
    }
}

/// `{(t, x) : x is a part of λ^t}`.
pub fn plane_diagram(pi: &StrictPlanePartition) -> PointConfiguration {
    let mut points = BTreeSet::new();
    for (i, row) in pi.rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            points.insert((j as i64 - i as i64, v));
        }
    }
    PointConfiguration { points }
}

/// Calls `visit` on every strict plane partition with `|π| ≤ max_volume`,
/// each exactly once, in a fixed depth-first order (matrix cells filled row
/// by row).
pub fn for_each_spp<F>(max_volume: u32, cap: u32, mut visit: F) -> Result<()>
where
    F: FnMut(&StrictPlanePartition),
{
    if max_volume > cap {
        return Err(Error::CapExceeded {
            what: "max_volume",
            requested: max_volume as u64,
            cap: cap as u64,
        });
    }
    let mut rows: Vec<Vec<u32>> = vec![Vec::new()];
    extend(&mut rows, max_volume, &mut visit);
    Ok(())
}

fn extend<F>(rows: &mut Vec<Vec<u32>>, remaining: u32, visit: &mut F)
where
    F: FnMut(&StrictPlanePartition),
{
    let r = rows.len() - 1;
    let j = rows[r].len();

    if j == 0 {
        // Closing an empty row closes the matrix.
        let done = StrictPlanePartition {
            rows: rows[..r].to_vec(),
        };
        visit(&done);
    } else {
        rows.push(Vec::new());
        extend(rows, remaining, visit);
        rows.pop();
    }

    let mut ub = remaining;
    if r > 0 {
        let above = &rows[r - 1];
        if j >= above.len() {
            return;
        }
        ub = ub.min(above[j]);
        if j > 0 {
            ub = ub.min(above[j - 1] - 1);
        }
    }
    if j > 0 {
        ub = ub.min(rows[r][j - 1]);
    }
    for v in 1..=ub {
        rows[r].push(v);
        extend(rows, remaining - v, visit);
        rows[r].pop();
    }
}

/// Every strict plane partition of volume at most `max_volume` (default cap).
pub fn enumerate_spp(max_volume: u32) -> Result<std::vec::IntoIter<StrictPlanePartition>> {
    let mut out = Vec::new();
    for_each_spp(max_volume, DEFAULT_ENUMERATION_CAP, |p| out.push(p.clone()))?;
    Ok(out.into_iter())
}
