//! Finite pseudo-metric spaces and the quantities defined directly on them:
//! perimeters over cyclic orders, Gromov products, the 4-point rules and the
//! multiplicative / additive rays.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, from_json_value, half, to_f64, Rational};

/// Default cap on the point count for exhaustive perimeter minimisation.
pub const DEFAULT_PERIMETER_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonzeroDiagonal { i: usize },
    AsymmetricMatrix { i: usize, j: usize },
    NegativeDistance { i: usize, j: usize },
    /// `d(i, j) > d(i, k) + d(k, j)`.
    TriangleViolation { i: usize, k: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { i } => write!(f, "d({i},{i}) is not zero"),
            Violation::AsymmetricMatrix { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            Violation::NegativeDistance { i, j } => write!(f, "d({i},{j}) is negative"),
            Violation::TriangleViolation { i, k, j } => {
                write!(f, "d({i},{j}) > d({i},{k}) + d({k},{j})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("{labels} labels given for a {n}-point matrix")]
    LabelCount { labels: usize, n: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("bad matrix entry at ({row},{col}): {reason}")]
    BadEntry { row: usize, col: usize, reason: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not a pseudo-metric: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Violations(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("order has {got} points, space has {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{n} points exceed the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("shift {a} is below the floor {floor}")]
    ShiftBelowFloor { a: String, floor: String },
    #[error("scale factor must be nonnegative")]
    NegativeScale,
}

/// How strictly [`PseudoMetricSpace::with_validation`] checks its input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Validation {
    Exact,
    /// Symmetry and triangle checks up to an absolute tolerance; the upper
    /// triangle wins when the input is slightly asymmetric.
    Tolerant(f64),
}

/// A finite pseudo-metric space with exact distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoMetricSpace {
    labels: Vec<String>,
    n: usize,
    dist: Vec<Rational>,
}

impl PseudoMetricSpace {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        Self::with_validation(labels, matrix, Validation::Exact)
    }

    /// Points labelled `1..=n`.
    pub fn from_matrix(matrix: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        let labels = default_labels(matrix.len());
        Self::new(labels, matrix)
    }

    pub fn with_validation(
        labels: Vec<String>,
        matrix: Vec<Vec<Rational>>,
        validation: Validation,
    ) -> Result<Self, SpaceError> {
        let n = matrix.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if labels.len() != n {
            return Err(SpaceError::LabelCount {
                labels: labels.len(),
                n,
            });
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        let mut dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        let violations = match validation {
            Validation::Exact => exact_violations(n, &dist),
            Validation::Tolerant(tol) => {
                let v = tolerant_violations(n, &dist, tol);
                if v.is_empty() {
                    for i in 0..n {
                        dist[i * n + i] = Rational::zero();
                        for j in i + 1..n {
                            dist[j * n + i] = dist[i * n + j].clone();
                        }
                    }
                }
                v
            }
        };
        if !violations.is_empty() {
            return Err(SpaceError::Violations(violations));
        }
        Ok(PseudoMetricSpace { labels, n, dist })
    }

    /// Builds a space from float distances, stored at their exact binary
    /// values and validated up to `tol`.
    pub fn from_f64(labels: Vec<String>, matrix: &[Vec<f64>], tol: f64) -> Result<Self, SpaceError> {
        let mut rows = Vec::with_capacity(matrix.len());
        for (row, r) in matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(r.len());
            for (col, &x) in r.iter().enumerate() {
                let q = crate::rational::from_f64(x).ok_or_else(|| SpaceError::BadEntry {
                    row,
                    col,
                    reason: "not finite".into(),
                })?;
                out.push(q);
            }
            rows.push(out);
        }
        Self::with_validation(labels, rows, Validation::Tolerant(tol))
    }

    /// Internal constructor for spaces derived from an already valid one.
    pub(crate) fn from_parts_unchecked(labels: Vec<String>, dist: Vec<Rational>) -> Self {
        let n = labels.len();
        debug_assert_eq!(dist.len(), n * n);
        PseudoMetricSpace { labels, n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_f64_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(to_f64).collect())
            .collect()
    }

    /// Unordered pairs `(i, j)`, `i < j`, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn subspace(&self, points: &[usize]) -> PseudoMetricSpace {
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let dist = points
            .iter()
            .flat_map(|&i| points.iter().map(move |&j| self.d(i, j).clone()))
            .collect();
        PseudoMetricSpace::from_parts_unchecked(labels, dist)
    }

    /// Classes of points at mutual distance zero, each sorted, ordered by
    /// their smallest member.
    pub fn zero_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (i..self.n)
                .filter(|&j| class_of[j] == usize::MAX && self.d(i, j).is_zero())
                .collect();
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members);
        }
        classes
    }

    /// A point `p` is degenerate when `d(q, r) = d(q, p) + d(p, r)` for some
    /// points `q`, `r` distinct from `p`.
    pub fn is_degenerate_point(&self, p: usize) -> bool {
        (0..self.n).any(|q| {
            q != p
                && (q + 1..self.n)
                    .any(|r| r != p && self.d(q, r) == &(self.d(q, p) + self.d(p, r)))
        })
    }

    /// All triangle inequalities strict (for triples of distinct points).
    pub fn is_nondegenerate(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k && self.d(i, j) >= &(self.d(i, k) + self.d(k, j)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "labels": self.labels,
            "matrix": (0..self.n)
                .map(|i| self.row(i).iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Parses `{"labels": [...], "matrix": [[...]]}`. Entries are `"p/q"`
    /// strings or integers; non-integer numbers need `allow_float`.
    pub fn from_json_str(text: &str, allow_float: bool) -> Result<Self, SpaceError> {
        #[derive(Deserialize)]
        struct Input {
            labels: Option<Vec<String>>,
            matrix: Vec<Vec<serde_json::Value>>,
        }
        let input: Input =
            serde_json::from_str(text).map_err(|e| SpaceError::Malformed(e.to_string()))?;
        let rows = parse_rows(&input.matrix, allow_float)?;
        let labels = input.labels.unwrap_or_else(|| default_labels(rows.len()));
        if allow_float {
            Self::with_validation(labels, rows, Validation::Tolerant(crate::FLOAT_TOLERANCE))
        } else {
            Self::new(labels, rows)
        }
    }

    /// CSV with the labels in the header row. Rows may optionally start
    /// with their own label, in which case the header starts with an empty
    /// cell.
    pub fn from_csv_str(text: &str, allow_float: bool) -> Result<Self, SpaceError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or(SpaceError::Empty)?
            .split(',')
            .map(|c| c.trim().trim_matches('"').to_string())
            .collect();
        let row_labels = header.first().is_some_and(|h| h.is_empty());
        let labels: Vec<String> = if row_labels {
            header[1..].to_vec()
        } else {
            header
        };
        let mut matrix = Vec::new();
        for line in lines {
            let mut cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if row_labels && !cells.is_empty() {
                cells.remove(0);
            }
            matrix.push(
                cells
                    .into_iter()
                    .map(|c| serde_json::Value::String(c.trim_matches('"').to_string()))
                    .collect::<Vec<_>>(),
            );
        }
        let rows = parse_rows(&matrix, allow_float)?;
        if allow_float {
            Self::with_validation(labels, rows, Validation::Tolerant(crate::FLOAT_TOLERANCE))
        } else {
            Self::new(labels, rows)
        }
    }
}

fn parse_rows(matrix: &[Vec<serde_json::Value>], allow_float: bool) -> Result<Vec<Vec<Rational>>, SpaceError> {
    matrix
        .iter()
        .enumerate()
        .map(|(row, r)| {
            r.iter()
                .enumerate()
                .map(|(col, v)| {
                    let v = match v {
                        serde_json::Value::String(s) if allow_float => match s.trim().parse::<f64>() {
                            Ok(x) if !s.contains('/') => serde_json::json!(x),
                            _ => v.clone(),
                        },
                        _ => v.clone(),
                    };
                    from_json_value(&v, allow_float)
                        .map_err(|reason| SpaceError::BadEntry { row, col, reason })
                })
                .collect()
        })
        .collect()
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn exact_violations(n: usize, d: &[Rational]) -> Vec<Violation> {
    let at = |i: usize, j: usize| &d[i * n + j];
    let mut out = Vec::new();
    for i in 0..n {
        if !at(i, i).is_zero() {
            out.push(Violation::NonzeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if at(i, j) != at(j, i) {
                out.push(Violation::AsymmetricMatrix { i, j });
            }
            if at(i, j).is_negative() || at(j, i).is_negative() {
                out.push(Violation::NegativeDistance { i, j });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k != i && k != j && at(i, j) > &(at(i, k) + at(k, j)) {
                    out.push(Violation::TriangleViolation { i, k, j });
                }
            }
        }
    }
    out
}

fn tolerant_violations(n: usize, d: &[Rational], tol: f64) -> Vec<Violation> {
    let f: Vec<f64> = d.iter().map(to_f64).collect();
    let at = |i: usize, j: usize| f[i * n + j];
    let mut out = Vec::new();
    for i in 0..n {
        if at(i, i).abs() > tol {
            out.push(Violation::NonzeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (at(i, j) - at(j, i)).abs() > tol {
                out.push(Violation::AsymmetricMatrix { i, j });
            }
            if at(i, j) < 0.0 || at(j, i) < 0.0 {
                out.push(Violation::NegativeDistance { i, j });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k != i && k != j && at(i, j) > at(i, k) + at(k, j) + tol {
                    out.push(Violation::TriangleViolation { i, k, j });
                }
            }
        }
    }
    out
}

/// A cyclic order on `0..n`, stored rotated so that point 0 comes first.
/// Inversion is not quotiented here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicOrder(Vec<usize>);

impl CyclicOrder {
    pub fn new(seq: Vec<usize>) -> Result<Self, MetricError> {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &p in &seq {
            if p >= n || seen[p] {
                return Err(MetricError::NotAPermutation(n));
            }
            seen[p] = true;
        }
        Ok(Self::from_seq_unchecked(seq))
    }

    pub(crate) fn from_seq_unchecked(mut seq: Vec<usize>) -> Self {
        if let Some(pos) = seq.iter().position(|&p| p == 0) {
            seq.rotate_left(pos);
        }
        CyclicOrder(seq)
    }

    /// From 1-based point numbers, as orders are usually written by hand.
    pub fn from_one_based(seq: &[usize]) -> Result<Self, MetricError> {
        let n = seq.len();
        let zero_based = seq
            .iter()
            .map(|&p| p.checked_sub(1).ok_or(MetricError::NotAPermutation(n)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(zero_based)
    }

    pub fn seq(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> CyclicOrder {
        let mut s = self.0.clone();
        s.reverse();
        Self::from_seq_unchecked(s)
    }

    /// Lexicographically smaller of the order and its inverse.
    pub fn up_to_inversion(&self) -> CyclicOrder {
        let r = self.reversed();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    /// Consecutive pairs `(p, π(p))`, including the closing pair.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p + 1).collect()
    }
}

/// Serialized as 1-based point numbers.
impl Serialize for CyclicOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl fmt::Display for CyclicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `P(M, π)`: the sum of distances between consecutive points.
pub fn perimeter(space: &PseudoMetricSpace, order: &CyclicOrder) -> Result<Rational, MetricError> {
    if order.len() != space.n() {
        return Err(MetricError::LengthMismatch {
            got: order.len(),
            expected: space.n(),
        });
    }
    Ok(order.steps().map(|(p, q)| space.d(p, q)).sum())
}

pub fn half_perimeter(space: &PseudoMetricSpace, order: &CyclicOrder) -> Result<Rational, MetricError> {
    Ok(perimeter(space, order)? * half())
}

/// Exhaustive minimum of the perimeter over all cyclic orders, together with
/// the lexicographically smallest minimising sequence.
pub fn min_perimeter(space: &PseudoMetricSpace, cap: usize) -> Result<(Rational, CyclicOrder), MetricError> {
    let n = space.n();
    if n > cap {
        return Err(MetricError::TooLarge { n, cap });
    }
    if n <= 3 {
        let order = CyclicOrder((0..n).collect());
        let p = perimeter(space, &order)?;
        return Ok((p, order));
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut seq = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    search_orders(space, &mut seq, &mut used, Rational::zero(), &mut best);
    let (value, seq) = best.expect("at least one cyclic order exists");
    Ok((value, CyclicOrder(seq)))
}

fn search_orders(
    space: &PseudoMetricSpace,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    partial: Rational,
    best: &mut Option<(Rational, Vec<usize>)>,
) {
    let n = space.n();
    if let Some((b, _)) = best {
        if &partial >= b {
            return;
        }
    }
    if seq.len() == n {
        // one representative per inversion pair
        if seq[1] > seq[n - 1] {
            return;
        }
        let total = partial + space.d(seq[n - 1], 0);
        if best.as_ref().is_none_or(|(b, _)| &total < b) {
            *best = Some((total, seq.clone()));
        }
        return;
    }
    let last = *seq.last().unwrap();
    for p in 1..n {
        if used[p] {
            continue;
        }
        used[p] = true;
        seq.push(p);
        let next = &partial + space.d(last, p);
        search_orders(space, seq, used, next, best);
        seq.pop();
        used[p] = false;
    }
}

/// `(p_j, p_k)_{p_i} = (d(i,j) + d(i,k) - d(j,k)) / 2`.
pub fn gromov_product(space: &PseudoMetricSpace, i: usize, j: usize, k: usize) -> Result<Rational, MetricError> {
    let n = space.n();
    for index in [i, j, k] {
        if index >= n {
            return Err(MetricError::IndexOutOfRange { index, n });
        }
    }
    Ok(gromov(space, i, j, k))
}

#[inline]
pub(crate) fn gromov(space: &PseudoMetricSpace, i: usize, j: usize, k: usize) -> Rational {
    (space.d(i, j) + space.d(i, k) - space.d(j, k)) * half()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourPointMode {
    /// The two largest of the three pair sums coincide.
    Strong,
    /// Some two of the three pair sums coincide.
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourPointReport {
    pub holds: bool,
    /// First violating quadruple in lexicographic order.
    pub violation: Option<[usize; 4]>,
}

/// The three pair sums of a quadruple, in the order
/// `ij+kl`, `ik+jl`, `il+jk`.
pub fn pair_sums(space: &PseudoMetricSpace, q: [usize; 4]) -> [Rational; 3] {
    let [i, j, k, l] = q;
    [
        space.d(i, j) + space.d(k, l),
        space.d(i, k) + space.d(j, l),
        space.d(i, l) + space.d(j, k),
    ]
}

pub fn quadruple_satisfies(space: &PseudoMetricSpace, q: [usize; 4], mode: FourPointMode) -> bool {
    let mut s = pair_sums(space, q);
    s.sort();
    match mode {
        FourPointMode::Strong => s[1] == s[2],
        FourPointMode::Weak => s[0] == s[1] || s[1] == s[2],
    }
}

pub fn four_point_check(space: &PseudoMetricSpace, mode: FourPointMode) -> FourPointReport {
    let n = space.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let q = [i, j, k, l];
                    if !quadruple_satisfies(space, q, mode) {
                        return FourPointReport {
                            holds: false,
                            violation: Some(q),
                        };
                    }
                }
            }
        }
    }
    FourPointReport {
        holds: true,
        violation: None,
    }
}

/// `(M, λρ)`.
pub fn scale(space: &PseudoMetricSpace, lambda: &Rational) -> Result<PseudoMetricSpace, MetricError> {
    if lambda.is_negative() {
        return Err(MetricError::NegativeScale);
    }
    let dist = space.dist.iter().map(|d| d * lambda).collect();
    Ok(PseudoMetricSpace::from_parts_unchecked(space.labels.clone(), dist))
}

/// The least `a` for which `ρ + a` (diagonal kept at zero) is a
/// pseudo-metric. `None` for a single point, where every shift is legal.
pub fn shift_floor(space: &PseudoMetricSpace) -> Option<Rational> {
    let n = space.n();
    let mut floor: Option<Rational> = None;
    let mut bump = |v: Rational| {
        if floor.as_ref().is_none_or(|f| &v > f) {
            floor = Some(v);
        }
    };
    for (i, j) in space.pairs() {
        bump(-space.d(i, j).clone());
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x != y && y != z && x != z {
                    bump(space.d(x, y) - space.d(x, z) - space.d(z, y));
                }
            }
        }
    }
    floor
}

/// `(M, ρ + a)` with the diagonal kept at zero.
pub fn shift(space: &PseudoMetricSpace, a: &Rational) -> Result<PseudoMetricSpace, MetricError> {
    if let Some(floor) = shift_floor(space) {
        if a < &floor {
            return Err(MetricError::ShiftBelowFloor {
                a: format_rational(a),
                floor: format_rational(&floor),
            });
        }
    }
    let n = space.n();
    let mut dist = space.dist.clone();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dist[i * n + j] += a;
            }
        }
    }
    Ok(PseudoMetricSpace::from_parts_unchecked(space.labels.clone(), dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};
    use crate::fixtures::{five_point_space, simplex};

    #[test]
    fn singleton_is_valid() {
        let s = PseudoMetricSpace::from_matrix(vec![vec![rat(0)]]).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(shift_floor(&s), None);
    }

    #[test]
    fn five_point_matrix_is_valid() {
        let s = five_point_space();
        assert_eq!(s.n(), 5);
        assert_eq!(s.d(0, 1), &rat(4));
        assert_eq!(s.d(0, 2), &rat(6));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let m = vec![
            vec![rat(0), rat(5), rat(1)],
            vec![rat(5), rat(0), rat(1)],
            vec![rat(1), rat(1), rat(0)],
        ];
        let err = PseudoMetricSpace::from_matrix(m).unwrap_err();
        assert_eq!(
            err,
            SpaceError::Violations(vec![Violation::TriangleViolation { i: 0, k: 2, j: 1 }])
        );
    }

    #[test]
    fn structural_errors() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(3), rat(0)]];
        match PseudoMetricSpace::from_matrix(m).unwrap_err() {
            SpaceError::Violations(v) => {
                assert!(v.contains(&Violation::NonzeroDiagonal { i: 0 }));
                assert!(v.contains(&Violation::AsymmetricMatrix { i: 0, j: 1 }));
            }
            e => panic!("unexpected {e:?}"),
        }
        let m = vec![vec![rat(0), rat(-1)], vec![rat(-1), rat(0)]];
        assert!(matches!(
            PseudoMetricSpace::from_matrix(m),
            Err(SpaceError::Violations(v)) if v == vec![Violation::NegativeDistance { i: 0, j: 1 }]
        ));
        let m = vec![vec![rat(0), rat(1)], vec![rat(1)]];
        assert!(matches!(
            PseudoMetricSpace::from_matrix(m),
            Err(SpaceError::NotSquare { row: 1, .. })
        ));
        assert_eq!(PseudoMetricSpace::from_matrix(vec![]), Err(SpaceError::Empty));
    }

    #[test]
    fn five_point_half_perimeters() {
        let s = five_point_space();
        let pi1 = CyclicOrder::from_one_based(&[1, 2, 3, 5, 4]).unwrap();
        let pi2 = CyclicOrder::from_one_based(&[1, 2, 5, 3, 4]).unwrap();
        assert_eq!(half_perimeter(&s, &pi1).unwrap(), rat(12));
        assert_eq!(half_perimeter(&s, &pi2).unwrap(), rat(13));
    }

    #[test]
    fn three_point_half_perimeter_is_order_free() {
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(3), rat(4)],
            vec![rat(3), rat(0), rat(5)],
            vec![rat(4), rat(5), rat(0)],
        ])
        .unwrap();
        for seq in [vec![0, 1, 2], vec![0, 2, 1], vec![2, 1, 0]] {
            let o = CyclicOrder::new(seq).unwrap();
            assert_eq!(half_perimeter(&s, &o).unwrap(), rat(6));
        }
    }

    #[test]
    fn length_mismatch() {
        let s = five_point_space();
        let o = CyclicOrder::new(vec![0, 1, 2]).unwrap();
        assert!(matches!(
            perimeter(&s, &o),
            Err(MetricError::LengthMismatch { got: 3, expected: 5 })
        ));
    }

    #[test]
    fn min_perimeter_examples() {
        let (p, _) = min_perimeter(&simplex(4, rat(1)), DEFAULT_PERIMETER_CAP).unwrap();
        assert_eq!(p, rat(4));
        let (p, order) = min_perimeter(&five_point_space(), DEFAULT_PERIMETER_CAP).unwrap();
        assert_eq!(p, rat(20));
        assert_eq!(order.seq(), &[0, 1, 2, 3, 4]);
        assert!(matches!(
            min_perimeter(&simplex(11, rat(1)), DEFAULT_PERIMETER_CAP),
            Err(MetricError::TooLarge { n: 11, cap: 10 })
        ));
        let two = simplex(2, rat(3));
        assert_eq!(min_perimeter(&two, 10).unwrap().0, rat(6));
    }

    #[test]
    fn gromov_products() {
        let s = simplex(3, rat(1));
        assert_eq!(gromov_product(&s, 0, 1, 2).unwrap(), frac(1, 2));
        let line = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(1), rat(3)],
            vec![rat(1), rat(0), rat(2)],
            vec![rat(3), rat(2), rat(0)],
        ])
        .unwrap();
        assert_eq!(gromov_product(&line, 1, 0, 2).unwrap(), rat(0));
        assert!(gromov_product(&line, 0, 1, 3).is_err());
    }

    #[test]
    fn four_point_on_examples() {
        assert!(four_point_check(&simplex(5, rat(2)), FourPointMode::Strong).holds);
        let s = five_point_space();
        let sums = pair_sums(&s, [0, 1, 2, 3]);
        assert_eq!(sums, [rat(8), rat(12), rat(10)]);
        let weak = four_point_check(&s, FourPointMode::Weak);
        assert!(!weak.holds);
        assert_eq!(weak.violation, Some([0, 1, 2, 3]));
    }

    #[test]
    fn shift_floor_examples() {
        assert_eq!(shift_floor(&simplex(3, rat(1))), Some(rat(-1)));
        let with_zero = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(0), rat(2)],
            vec![rat(0), rat(0), rat(2)],
            vec![rat(2), rat(2), rat(0)],
        ])
        .unwrap();
        assert_eq!(shift_floor(&with_zero), Some(rat(0)));
        let s = five_point_space();
        assert_eq!(shift(&s, &rat(0)).unwrap(), s);
        assert!(matches!(
            shift(&simplex(3, rat(1)), &rat(-2)),
            Err(MetricError::ShiftBelowFloor { .. })
        ));
    }

    #[test]
    fn csv_and_json_input() {
        let csv = "a,b,c\n0,1,1\n1,0,1/2\n1,1/2,0\n";
        let s = PseudoMetricSpace::from_csv_str(csv, false).unwrap();
        assert_eq!(s.labels(), &["a", "b", "c"]);
        assert_eq!(s.d(1, 2), &frac(1, 2));
        let csv = ",a,b\na,0,2\nb,2,0\n";
        let s = PseudoMetricSpace::from_csv_str(csv, false).unwrap();
        assert_eq!(s.d(0, 1), &rat(2));
        let json = r#"{"labels":["x","y"],"matrix":[["0","3/2"],["3/2",0]]}"#;
        let s = PseudoMetricSpace::from_json_str(json, false).unwrap();
        assert_eq!(s.d(0, 1), &frac(3, 2));
        let json = r#"{"labels":["x","y"],"matrix":[[0,1.5],[1.5,0]]}"#;
        assert!(PseudoMetricSpace::from_json_str(json, false).is_err());
        assert!(PseudoMetricSpace::from_json_str(json, true).is_ok());
    }
}
