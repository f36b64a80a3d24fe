//! Minimal parametric fillings, the topology sweep for minimal fillings,
//! stability, transport along additive rays and extension witnesses.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::mst::mst;
use crate::lp::{solve, LPSolution, LpError, LpStatus, PathLP, SignMode};
use crate::metric::{four_point_check, shift_floor, FourPointMode, PseudoMetricSpace};
use crate::rational::{format_rational, half, Rational};
use crate::trees::{
    binary_count, binary_from_index, enumerate_binary, splittings, TopologyKey, TreeError, TreeTopology,
    WeightMode, WeightedTree,
};

/// Default cap on the (quotient) point count of a full sweep.
pub const DEFAULT_MF_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FillingError {
    #[error("topology has {topology} boundary points, space has {space}")]
    BoundaryMismatch { topology: usize, space: usize },
    #[error("{n} points exceed the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("the tree is not a minimal parametric filling of its own type")]
    NotParametricMinimum,
    #[error("shift {a} is below the floor {floor}")]
    ShiftBelowFloor { a: String, floor: String },
    #[error("boundary vertex {0} is not a leaf")]
    BoundaryDegreeViolation(usize),
    #[error("edge {0} has negative weight")]
    NegativeWeights(usize),
    #[error("program status {0:?}")]
    NotOptimal(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Optimal weights for one topology.
#[derive(Debug, Clone)]
pub struct Mpf {
    pub tree: WeightedTree,
    pub value: Rational,
    pub lp: PathLP,
    pub solution: LPSolution,
}

pub fn path_lp(space: &PseudoMetricSpace, topology: &TreeTopology, mode: SignMode) -> Result<PathLP, FillingError> {
    if topology.point_count() != space.n() {
        return Err(FillingError::BoundaryMismatch {
            topology: topology.point_count(),
            space: space.n(),
        });
    }
    let pairs: Vec<(usize, usize)> = space.pairs().collect();
    let rhs = pairs.iter().map(|&(p, q)| space.d(p, q).clone()).collect();
    Ok(PathLP {
        edge_count: topology.edge_count(),
        pairs,
        paths: topology.pair_paths(),
        rhs,
        mode,
    })
}

/// `mpf(M, G)` (nonnegative weights) or `mpf₋(M, G)` (free weights).
pub fn mpf(space: &PseudoMetricSpace, topology: &TreeTopology, mode: SignMode) -> Result<Mpf, FillingError> {
    let lp = path_lp(space, topology, mode)?;
    let solution = solve(&lp)?;
    if solution.status != LpStatus::Optimal {
        return Err(FillingError::NotOptimal(solution.status));
    }
    let wmode = match mode {
        SignMode::Nonnegative => WeightMode::Filling,
        SignMode::Free => WeightMode::Generalized,
    };
    let tree = WeightedTree::new(topology.clone(), solution.primal.clone(), wmode)?;
    Ok(Mpf {
        tree,
        value: solution.value.clone(),
        lp,
        solution,
    })
}

/// Optimal value only.
pub fn mpf_value(space: &PseudoMetricSpace, topology: &TreeTopology, mode: SignMode) -> Result<Rational, FillingError> {
    let lp = path_lp(space, topology, mode)?;
    let solution = solve(&lp)?;
    if solution.status != LpStatus::Optimal {
        return Err(FillingError::NotOptimal(solution.status));
    }
    Ok(solution.value)
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub cap: usize,
    /// Number of enumeration shards; results do not depend on it.
    pub shards: usize,
    pub full_table: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            cap: DEFAULT_MF_CAP,
            shards: rayon::current_num_threads().max(1) * 4,
            full_table: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub topology: String,
    #[serde(with = "crate::rational::serde_str")]
    pub mpf: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub mpf_free: Rational,
}

#[derive(Debug, Clone)]
pub struct FillingReport {
    pub mode: SignMode,
    pub weight: Rational,
    /// Winning tree on the full space; points at distance zero hang off
    /// their class representative by zero-weight edges.
    pub best_tree: WeightedTree,
    pub topology_key: TopologyKey,
    /// Multipliers of the winning program, keyed by point pairs of the
    /// full space (zero for pairs outside the representative set).
    pub dual: Vec<((usize, usize), Rational)>,
    /// Zero-distance classes; the first member represents the class.
    pub classes: Vec<Vec<usize>>,
    pub topologies_evaluated: usize,
    pub table: Option<Vec<TableRow>>,
    pub additive: bool,
    pub pseudo_additive: bool,
    pub stable: bool,
}

#[derive(Clone)]
struct Best {
    value: Rational,
    index: usize,
    key: Option<TopologyKey>,
}

fn better(n: usize, a: &mut Best, b: &mut Best) -> bool {
    match b.value.cmp(&a.value) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            let ka = a.key.get_or_insert_with(|| binary_from_index(n, a.index).canonical_key()).clone();
            let kb = b.key.get_or_insert_with(|| binary_from_index(n, b.index).canonical_key());
            *kb < ka
        }
    }
}

fn merge(n: usize, a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(mut a), Some(mut b)) => {
            if better(n, &mut a, &mut b) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// Minimum of `mpf(q, G)` over all binary `G`, ties broken by the smallest
/// canonical key. Returns `(index, value)`.
fn sweep(q: &PseudoMetricSpace, mode: SignMode, shards: usize) -> Result<(usize, Rational), FillingError> {
    let m = q.n();
    let total = binary_count(m);
    let shards = shards.clamp(1, total);
    let per_shard: Vec<Result<Option<Best>, FillingError>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut best: Option<Best> = None;
            for index in (s..total).step_by(shards) {
                let t = binary_from_index(m, index);
                let value = mpf_value(q, &t, mode)?;
                best = merge(m, best, Some(Best { value, index, key: None }));
            }
            Ok(best)
        })
        .collect();
    let mut best = None;
    for r in per_shard {
        best = merge(m, best, r?);
    }
    let b = best.expect("at least one topology");
    Ok((b.index, b.value))
}

/// Minimal filling by a sweep over all binary topologies of the
/// zero-distance quotient.
pub fn mf(space: &PseudoMetricSpace, mode: SignMode, opts: &SweepOptions) -> Result<FillingReport, FillingError> {
    let classes = space.zero_classes();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let q = space.subspace(&reps);
    let m = q.n();
    if m > opts.cap {
        return Err(FillingError::TooLarge { n: m, cap: opts.cap });
    }
    let (topology, evaluated) = if m <= 2 {
        (TreeTopology::star(m), 1)
    } else {
        let (index, _) = sweep(&q, mode, opts.shards)?;
        (binary_from_index(m, index).into_inner(), binary_count(m))
    };
    let win = mpf(&q, &topology, mode)?;
    let stable = is_stable(&q, &mpf(&q, &topology, SignMode::Nonnegative)?.tree)?;
    let table = if opts.full_table && m >= 3 {
        let rows: Result<Vec<TableRow>, FillingError> = enumerate_binary(m, opts.cap)?
            .par_iter()
            .map(|t| {
                Ok(TableRow {
                    topology: key_with_labels(&t.canonical_key(), q.labels()),
                    mpf: mpf_value(&q, t, SignMode::Nonnegative)?,
                    mpf_free: mpf_value(&q, t, SignMode::Free)?,
                })
            })
            .collect();
        Some(rows?)
    } else {
        None
    };
    let best_tree = expand_quotient(&win.tree, &classes, space.n());
    let mut dual = Vec::new();
    for (k, &(i, j)) in win.lp.pairs.iter().enumerate() {
        dual.push(((reps[i], reps[j]), win.solution.dual[k].clone()));
    }
    dual.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(FillingReport {
        mode,
        weight: win.value.clone(),
        topology_key: best_tree.topology().canonical_key(),
        best_tree,
        dual,
        classes,
        topologies_evaluated: evaluated,
        table,
        additive: four_point_check(space, FourPointMode::Strong).holds,
        pseudo_additive: four_point_check(space, FourPointMode::Weak).holds,
        stable,
    })
}

/// Value of the minimal filling only.
pub fn mf_value(space: &PseudoMetricSpace, mode: SignMode, opts: &SweepOptions) -> Result<Rational, FillingError> {
    let classes = space.zero_classes();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let q = space.subspace(&reps);
    let m = q.n();
    if m > opts.cap {
        return Err(FillingError::TooLarge { n: m, cap: opts.cap });
    }
    if m <= 2 {
        return mpf_value(&q, &TreeTopology::star(m), mode);
    }
    Ok(sweep(&q, mode, opts.shards)?.1)
}

/// Split key rendered with point labels instead of indices.
pub fn key_with_labels(key: &TopologyKey, labels: &[String]) -> String {
    key.0
        .iter()
        .map(|s| {
            let side = |v: &[usize]| v.iter().map(|&p| labels[p].as_str()).collect::<Vec<_>>().join(",");
            format!("{}|{}", side(&s.small), side(&s.large))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Re-attaches points of each zero-distance class to the vertex of its
/// representative with zero-weight pendant edges.
pub fn expand_quotient(tree: &WeightedTree, classes: &[Vec<usize>], n: usize) -> WeightedTree {
    let t = tree.topology();
    if classes.iter().all(|c| c.len() == 1) && n == t.point_count() {
        let mut pv = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            pv[c[0]] = t.vertex_of(i);
        }
        let topology = TreeTopology::new(t.vertex_count(), t.edges().to_vec(), pv).expect("relabelled tree");
        return tree.with_topology(topology, tree.weights().to_vec());
    }
    let mut vc = t.vertex_count();
    let mut edges = t.edges().to_vec();
    let mut weights = tree.weights().to_vec();
    let mut pv = vec![0; n];
    for (i, class) in classes.iter().enumerate() {
        let v = t.vertex_of(i);
        pv[class[0]] = v;
        for &p in &class[1..] {
            edges.push((v, vc));
            weights.push(Rational::zero());
            pv[p] = vc;
            vc += 1;
        }
    }
    let topology = TreeTopology::new(vc, edges, pv).expect("pendant edges keep a tree");
    tree.with_topology(topology, weights)
}

/// True when no binary refinement of the tree's topology has a strictly
/// smaller `mpf`. The tree must itself be a minimal parametric filling.
pub fn is_stable(space: &PseudoMetricSpace, tree: &WeightedTree) -> Result<bool, FillingError> {
    let topo = tree.topology();
    let own = mpf(space, topo, SignMode::Nonnegative)?;
    if own.value != tree.total_weight() || !tree.is_filling_of(space) {
        return Err(FillingError::NotParametricMinimum);
    }
    for s in splittings(topo) {
        if mpf_value(space, &s.topology, SignMode::Nonnegative)? < own.value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adds `a/2` to every edge at a boundary leaf (`a` per edge when both ends
/// are boundary leaves).
pub fn transport_along_ray(space: &PseudoMetricSpace, tree: &WeightedTree, a: &Rational) -> Result<WeightedTree, FillingError> {
    let t = tree.topology();
    if t.point_count() != space.n() {
        return Err(FillingError::BoundaryMismatch {
            topology: t.point_count(),
            space: space.n(),
        });
    }
    if let Some(floor) = shift_floor(space) {
        if a < &floor {
            return Err(FillingError::ShiftBelowFloor {
                a: format_rational(a),
                floor: format_rational(&floor),
            });
        }
    }
    for v in 0..t.vertex_count() {
        if t.is_boundary(v) && (t.degree(v) > 1 || t.points_at(v).len() > 1) {
            return Err(FillingError::BoundaryDegreeViolation(v));
        }
    }
    let step = a * half();
    let weights = t
        .edges()
        .iter()
        .zip(tree.weights())
        .map(|(&(u, v), w)| {
            let ends = [u, v].iter().filter(|&&x| t.is_boundary(x)).count();
            w + &step * Rational::from_integer(ends.into())
        })
        .collect();
    Ok(WeightedTree::auto(t.clone(), weights)?)
}

/// `(V, d_ω)` on all tree vertices, with its minimum spanning tree length.
pub fn extension_witness(space: &PseudoMetricSpace, tree: &WeightedTree) -> Result<(PseudoMetricSpace, Rational), FillingError> {
    if let Some(e) = tree.weights().iter().position(|w| w.is_negative()) {
        return Err(FillingError::NegativeWeights(e));
    }
    let t = tree.topology();
    if t.point_count() != space.n() {
        return Err(FillingError::BoundaryMismatch {
            topology: t.point_count(),
            space: space.n(),
        });
    }
    let labels: Vec<String> = (0..t.vertex_count())
        .map(|v| {
            let ps = t.points_at(v);
            if ps.is_empty() {
                format!("v{v}")
            } else {
                ps.iter().map(|&p| space.label(p)).collect::<Vec<_>>().join("+")
            }
        })
        .collect();
    let ext = PseudoMetricSpace::new(labels, tree.vertex_distances()).expect("nonnegative tree metric");
    let (w, _) = mst(&ext);
    Ok((ext, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_point_mustache, five_point_space, simplex, square57};
    use crate::rational::rat;

    fn opts() -> SweepOptions {
        SweepOptions {
            cap: DEFAULT_MF_CAP,
            shards: 3,
            full_table: false,
        }
    }

    #[test]
    fn mustache_mpf_is_fourteen() {
        let r = mpf(&five_point_space(), &five_point_mustache(), SignMode::Nonnegative).unwrap();
        assert_eq!(r.value, rat(14));
        let free = mpf(&five_point_space(), &five_point_mustache(), SignMode::Free).unwrap();
        assert!(free.value >= rat(13) && free.value <= rat(14));
    }

    #[test]
    fn five_point_mf() {
        let r = mf(&five_point_space(), SignMode::Nonnegative, &opts()).unwrap();
        assert_eq!(r.weight, rat(13));
        assert_eq!(r.topologies_evaluated, 15);
        assert!(r.stable);
        let free = mf(&five_point_space(), SignMode::Free, &opts()).unwrap();
        assert_eq!(free.weight, rat(13));
    }

    #[test]
    fn simplex_and_square() {
        assert_eq!(mf_value(&simplex(5, rat(2)), SignMode::Nonnegative, &opts()).unwrap(), rat(5));
        assert_eq!(mf_value(&square57(), SignMode::Nonnegative, &opts()).unwrap(), rat(12));
    }

    #[test]
    fn unstable_base() {
        let g = mpf(&five_point_space(), &five_point_mustache(), SignMode::Nonnegative).unwrap().tree;
        assert!(is_stable(&five_point_space(), &g).unwrap());
        let (base, _) = g.base();
        assert!(!is_stable(&five_point_space(), &base).unwrap());
    }

    #[test]
    fn zero_distances_are_quotiented() {
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(0), rat(2), rat(2)],
            vec![rat(0), rat(0), rat(2), rat(2)],
            vec![rat(2), rat(2), rat(0), rat(2)],
            vec![rat(2), rat(2), rat(2), rat(0)],
        ])
        .unwrap();
        let r = mf(&s, SignMode::Nonnegative, &opts()).unwrap();
        assert_eq!(r.weight, rat(3));
        assert!(r.best_tree.is_filling_of(&s));
        assert_eq!(r.best_tree.total_weight(), rat(3));
    }

    #[test]
    fn rays_and_witness() {
        let s = simplex(4, rat(1));
        let r = mf(&s, SignMode::Nonnegative, &opts()).unwrap();
        let moved = transport_along_ray(&s, &r.best_tree, &rat(-1)).unwrap();
        assert_eq!(moved.total_weight(), rat(0));
        let same = transport_along_ray(&s, &r.best_tree, &rat(0)).unwrap();
        assert_eq!(same, r.best_tree);
        assert!(transport_along_ray(&s, &r.best_tree, &rat(-2)).is_err());
        let (_, w) = extension_witness(&s, &r.best_tree).unwrap();
        assert_eq!(w, rat(2));
        let two = simplex(2, rat(3));
        let r2 = mf(&two, SignMode::Nonnegative, &opts()).unwrap();
        assert_eq!(extension_witness(&two, &r2.best_tree).unwrap().1, rat(3));
    }
}
