use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::ToursError;
use crate::fillings::mpf;
use crate::lp::SignMode;
use crate::metric::PseudoMetricSpace;
use crate::rational::{lcm_of_denominators, Rational};
use crate::trees::{BinaryTopology, TreeTopology};

/// Cap on `k·n` for the exhaustive multi-tour search.
pub const MULTITOUR_CAP: usize = 12;

/// Longest cycle built when realizing a dual solution.
const MAX_REALIZATION: usize = 100_000;

/// A cyclic sequence of `k·n` point occurrences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiTourCertificate {
    pub k: usize,
    pub cycle: Vec<usize>,
}

fn binary(t: &TreeTopology) -> Result<(), ToursError> {
    BinaryTopology::new(t.clone()).map(|_| ()).map_err(|_| ToursError::NotBinary)
}

fn is_periodic(seq: &[usize]) -> bool {
    let len = seq.len();
    (1..len).filter(|d| len % d == 0).any(|d| (d..len).all(|i| seq[i] == seq[i - d]))
}

/// Validates the certificate and returns `(1/2k)·Σ ρ(x, π(x))`.
///
/// Repeating a shorter cycle or stepping from a point to itself is rejected
/// as `NotSingleCycle`.
pub fn check_multitour(
    space: &PseudoMetricSpace,
    t: &TreeTopology,
    cert: &MultiTourCertificate,
) -> Result<Rational, ToursError> {
    binary(t)?;
    let n = t.point_count();
    if n != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: n,
            space: space.n(),
        });
    }
    let k = cert.k;
    let mut counts = vec![0usize; n];
    for &p in &cert.cycle {
        if p >= n {
            return Err(ToursError::Tree(crate::trees::TreeError::UnknownPoint(p)));
        }
        counts[p] += 1;
    }
    if let Some(p) = (0..n).find(|&p| counts[p] != k) {
        return Err(ToursError::CountViolation {
            point: p,
            count: counts[p],
            expected: k,
        });
    }
    if k == 0 || n < 2 {
        return Err(ToursError::NotSingleCycle);
    }
    let len = cert.cycle.len();
    let mut coverage = vec![0usize; t.edge_count()];
    let mut total = Rational::zero();
    for i in 0..len {
        let (p, q) = (cert.cycle[i], cert.cycle[(i + 1) % len]);
        if p == q {
            return Err(ToursError::NotSingleCycle);
        }
        for e in t.boundary_path(p, q)? {
            coverage[e] += 1;
        }
        total += space.d(p, q);
    }
    if let Some(e) = (0..coverage.len()).find(|&e| coverage[e] != 2 * k) {
        return Err(ToursError::CoverageViolation {
            edge: e,
            count: coverage[e],
            expected: 2 * k,
        });
    }
    if is_periodic(&cert.cycle) {
        return Err(ToursError::NotSingleCycle);
    }
    Ok(total / Rational::from_integer(BigInt::from(2 * k)))
}

struct Search<'a> {
    n: usize,
    k: usize,
    paths: Vec<Vec<Vec<usize>>>,
    rho: &'a PseudoMetricSpace,
    coverage: Vec<usize>,
    counts: Vec<usize>,
    seq: Vec<usize>,
    best: Option<(Rational, Vec<usize>)>,
}

impl Search<'_> {
    fn push(&mut self, p: usize, q: usize) -> bool {
        let mut ok = true;
        for &e in &self.paths[p][q] {
            self.coverage[e] += 1;
            ok &= self.coverage[e] <= 2 * self.k;
        }
        ok
    }

    fn pop(&mut self, p: usize, q: usize) {
        for &e in &self.paths[p][q] {
            self.coverage[e] -= 1;
        }
    }

    fn run(&mut self, sum: Rational) {
        let last = *self.seq.last().expect("seeded");
        if self.seq.len() == self.n * self.k {
            if last == 0 {
                return;
            }
            if self.push(last, 0) && self.coverage.iter().all(|&c| c == 2 * self.k) && !is_periodic(&self.seq) {
                let total = &sum + self.rho.d(last, 0);
                if self.best.as_ref().is_none_or(|(b, _)| total > *b) {
                    self.best = Some((total, self.seq.clone()));
                }
            }
            self.pop(last, 0);
            return;
        }
        for q in 0..self.n {
            if q == last || self.counts[q] == self.k {
                continue;
            }
            if self.push(last, q) {
                self.counts[q] += 1;
                self.seq.push(q);
                let next = &sum + self.rho.d(last, q);
                self.run(next);
                self.seq.pop();
                self.counts[q] -= 1;
            }
            self.pop(last, q);
        }
    }
}

/// Best multi-tour of multiplicity exactly `k` by exhaustive search, with
/// its half-perimeter. `None` when no valid certificate exists.
pub fn enumerate_multitours(
    space: &PseudoMetricSpace,
    t: &TreeTopology,
    k: usize,
) -> Result<Option<(MultiTourCertificate, Rational)>, ToursError> {
    binary(t)?;
    let n = t.point_count();
    if n != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: n,
            space: space.n(),
        });
    }
    if n * k > MULTITOUR_CAP {
        return Err(ToursError::TooLarge {
            n: n * k,
            cap: MULTITOUR_CAP,
        });
    }
    if n < 2 || k == 0 {
        return Ok(None);
    }
    let paths = (0..n)
        .map(|p| (0..n).map(|q| t.boundary_path(p, q).expect("points in range")).collect())
        .collect();
    let mut s = Search {
        n,
        k,
        paths,
        rho: space,
        coverage: vec![0; t.edge_count()],
        counts: vec![0; n],
        seq: vec![0],
        best: None,
    };
    s.counts[0] = 1;
    s.run(Rational::zero());
    Ok(s.best.map(|(total, cycle)| {
        let hp = total / Rational::from_integer(BigInt::from(2 * k));
        (MultiTourCertificate { k, cycle }, hp)
    }))
}

/// Turns pair multipliers with unit edge coverage into a closed walk on
/// the points: multiplicities are cleared of denominators, then an Euler
/// circuit of the resulting multigraph is read off. `None` when the
/// support is disconnected or the cycle would be too long.
pub fn realize_dual(n: usize, dual: &[((usize, usize), Rational)]) -> Option<MultiTourCertificate> {
    let l = lcm_of_denominators(dual.iter().map(|(_, y)| y));
    let mut mult: Vec<((usize, usize), BigInt)> = dual
        .iter()
        .filter(|(_, y)| !y.is_zero())
        .map(|&((p, q), ref y)| ((p, q), (y * Rational::from_integer(&l * 2)).to_integer()))
        .collect();
    // every edge is covered 2l times; divide out what keeps that even
    let g = mult.iter().fold(BigInt::zero(), |g, (_, m)| g.gcd(m));
    let g = g.gcd(&l);
    let k = (&l / &g).to_usize()?;
    for (_, m) in mult.iter_mut() {
        *m = &*m / &g;
    }
    if k == 0 || n.checked_mul(k)? > MAX_REALIZATION {
        return None;
    }
    let mut adj = vec![vec![0usize; n]; n];
    for ((p, q), m) in &mult {
        let m = m.to_usize()?;
        adj[*p][*q] += m;
        adj[*q][*p] += m;
    }
    // Hierholzer, smallest neighbour first
    let mut stack = vec![0usize];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        match (0..n).find(|&w| adj[v][w] > 0) {
            Some(w) => {
                adj[v][w] -= 1;
                adj[w][v] -= 1;
                stack.push(w);
            }
            None => circuit.push(stack.pop().expect("non-empty")),
        }
    }
    circuit.pop();
    circuit.reverse();
    if circuit.len() != n * k || adj.iter().flatten().any(|&c| c > 0) {
        return None;
    }
    Some(MultiTourCertificate { k, cycle: circuit })
}

#[derive(Debug, Clone, Serialize)]
pub struct EreminReport {
    /// Optimal value of the free-sign program, `mpf₋(M, G)`.
    #[serde(with = "crate::rational::serde_str")]
    pub dual_value: Rational,
    #[serde(skip)]
    pub dual: Vec<((usize, usize), Rational)>,
    /// Best certificate found by exhaustive search over `k ≤ max_k`.
    pub best: Option<MultiTourCertificate>,
    #[serde(with = "crate::rational::serde_opt")]
    pub best_half_perimeter: Option<Rational>,
    pub attained: bool,
    /// Certificate built from the dual solution.
    pub realization: Option<MultiTourCertificate>,
    /// The realization passed `check_multitour` with value `dual_value`.
    pub realization_verified: bool,
}

/// `mpf₋(M, G)` from the program, compared against multi-tours.
pub fn eremin_value(space: &PseudoMetricSpace, t: &TreeTopology, max_k: usize) -> Result<EreminReport, ToursError> {
    binary(t)?;
    let n = t.point_count();
    if n != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: n,
            space: space.n(),
        });
    }
    let solved = mpf(space, t, SignMode::Free)?;
    let dual_value = solved.value.clone();
    let dual: Vec<((usize, usize), Rational)> = solved
        .lp
        .pairs
        .iter()
        .copied()
        .zip(solved.solution.dual.iter().cloned())
        .collect();
    let mut best: Option<(MultiTourCertificate, Rational)> = None;
    for k in 1..=max_k {
        if let Some((cert, hp)) = enumerate_multitours(space, t, k)? {
            if hp > dual_value {
                return Err(ToursError::BoundViolated {
                    tour: hp.to_string(),
                    dual: dual_value.to_string(),
                });
            }
            if best.as_ref().is_none_or(|(_, b)| hp > *b) {
                best = Some((cert, hp));
            }
        }
    }
    let attained = match &best {
        Some((_, hp)) => *hp == dual_value,
        None => n < 2,
    };
    let realization = if n >= 2 { realize_dual(n, &dual) } else { None };
    let realization_verified = realization
        .as_ref()
        .is_some_and(|c| check_multitour(space, t, c).is_ok_and(|v| v == dual_value));
    let (best, best_half_perimeter) = match best {
        Some((c, hp)) => (Some(c), Some(hp)),
        None => (None, None),
    };
    Ok(EreminReport {
        dual_value,
        dual,
        best,
        best_half_perimeter,
        attained,
        realization,
        realization_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{diagonal_quartet, five_point_mustache, five_point_space, simplex, square57};
    use crate::metric::{half_perimeter, CyclicOrder};
    use crate::rational::rat;

    fn cert(k: usize, one_based: &[usize]) -> MultiTourCertificate {
        MultiTourCertificate {
            k,
            cycle: one_based.iter().map(|p| p - 1).collect(),
        }
    }

    #[test]
    fn planar_tour_is_a_multitour() {
        let s = five_point_space();
        let t = five_point_mustache();
        let c = cert(1, &[1, 2, 5, 3, 4]);
        let hp = half_perimeter(&s, &CyclicOrder::from_one_based(&[1, 2, 5, 3, 4]).unwrap()).unwrap();
        assert_eq!(check_multitour(&s, &t, &c).unwrap(), hp);
        assert!(matches!(
            check_multitour(&s, &t, &cert(1, &[1, 3, 2, 4, 5])),
            Err(ToursError::CoverageViolation { .. })
        ));
        assert!(matches!(
            check_multitour(&s, &t, &cert(1, &[1, 2, 5, 3])),
            Err(ToursError::CountViolation { point: 3, .. })
        ));
    }

    #[test]
    fn doubling_needs_interleaving() {
        let s = simplex(3, rat(2));
        let t = TreeTopology::star(3);
        assert_eq!(
            check_multitour(&s, &t, &cert(2, &[1, 2, 3, 1, 2, 3])),
            Err(ToursError::NotSingleCycle)
        );
        assert_eq!(check_multitour(&s, &t, &cert(2, &[1, 2, 1, 3, 2, 3])).unwrap(), rat(3));
    }

    #[test]
    fn triangle_attained_at_k1() {
        let s = simplex(3, rat(2));
        let r = eremin_value(&s, &TreeTopology::star(3), 2).unwrap();
        assert_eq!(r.dual_value, rat(3));
        assert!(r.attained);
        assert_eq!(r.best.unwrap().k, 1);
        assert!(r.realization_verified);
    }

    #[test]
    fn square_reaches_twelve() {
        let r = eremin_value(&square57(), &diagonal_quartet(), 2).unwrap();
        assert_eq!(r.dual_value, rat(12));
        assert_eq!(r.best_half_perimeter, Some(rat(12)));
        assert!(r.attained);
        assert!(r.realization_verified);
    }

    #[test]
    fn mustache_dual_is_realized() {
        let s = five_point_space();
        let t = five_point_mustache();
        let r = eremin_value(&s, &t, 2).unwrap();
        assert!(r.dual_value >= rat(13) && r.dual_value <= rat(14));
        assert!(r.realization_verified, "{:?}", r.realization);
        let c = r.realization.unwrap();
        assert_eq!(check_multitour(&s, &t, &c).unwrap(), r.dual_value);
    }

    #[test]
    fn non_binary_rejected() {
        let s = simplex(4, rat(1));
        assert_eq!(
            eremin_value(&s, &TreeTopology::star(4), 1).unwrap_err(),
            ToursError::NotBinary
        );
    }
}
