use num_traits::{Signed, Zero};

use super::AdditiveError;
use crate::metric::{four_point_check, gromov, FourPointMode, PseudoMetricSpace};
use crate::rational::{half, Rational};
use crate::trees::{TreeTopology, WeightMode, WeightedTree};

/// A weighted tree with `d_ω = ρ` on every pair of boundary points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingTree {
    pub tree: WeightedTree,
    /// Some weight is negative.
    pub signed: bool,
}

#[derive(Clone)]
struct Draft {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<Rational>,
    point_vertex: Vec<usize>,
}

impl Draft {
    fn tree(&self) -> WeightedTree {
        let t = TreeTopology::build(self.vertex_count, self.edges.clone(), self.point_vertex.clone())
            .expect("draft is a tree");
        WeightedTree::new(t, self.weights.clone(), WeightMode::Generalized).expect("weights match edges")
    }

    fn new_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Splits edge `e` at distance `s` from its end `from`; returns the new vertex.
    fn subdivide(&mut self, e: usize, from: usize, s: Rational) -> usize {
        let (a, b) = self.edges[e];
        let other = if a == from { b } else { a };
        let m = self.new_vertex();
        let rest = &self.weights[e] - &s;
        self.edges[e] = (from, m);
        self.weights[e] = s;
        self.edges.push((m, other));
        self.weights.push(rest);
        m
    }

    fn attach(&mut self, at: usize, w: Rational) {
        let v = self.new_vertex();
        self.edges.push((at, v));
        self.weights.push(w);
        self.point_vertex.push(v);
    }
}

/// Insertion by the largest Gromov product with respect to point 0.
fn insert_by_gromov(space: &PseudoMetricSpace, d: &mut Draft, p: usize) {
    let (mut t, mut ystar) = (gromov(space, 0, 1, p), 1);
    for y in 2..p {
        let g = gromov(space, 0, y, p);
        if g > t {
            t = g;
            ystar = y;
        }
    }
    let pendant = space.d(0, p) - &t;
    let tree = d.tree();
    let topo = tree.topology();
    let mut cur = d.point_vertex[0];
    let mut acc = Rational::zero();
    for e in topo.vertex_path(cur, d.point_vertex[ystar]) {
        if acc == t {
            break;
        }
        let w = tree.weight(e);
        if &acc + w > t {
            let m = d.subdivide(e, cur, &t - &acc);
            d.attach(m, pendant);
            return;
        }
        acc += w;
        cur = topo.other_end(e, cur);
    }
    d.attach(cur, pendant);
}

/// Every edge where `p` can attach: the split point and pendant weight are
/// solved from one point on each side and checked on the rest.
fn fitting_edges(space: &PseudoMetricSpace, d: &Draft, p: usize) -> Vec<(usize, usize, Rational, Rational)> {
    let tree = d.tree();
    let topo = tree.topology();
    let vd = tree.vertex_distances();
    let pv = topo.point_vertex();
    let mut out = Vec::new();
    for e in 0..topo.edge_count() {
        let (u, v) = topo.edge(e);
        let us = topo.side_points(e, u);
        let vs = topo.side_points(e, v);
        let w = tree.weight(e);
        let a = space.d(p, us[0]) - &vd[u][pv[us[0]]];
        let b = space.d(p, vs[0]) - &vd[v][pv[vs[0]]];
        let h = (&a + &b - w) * half();
        let s = (&a - &b + w) * half();
        let on_u = &h + &s;
        let on_v = &h + w - &s;
        let fits = us.iter().all(|&y| &on_u + &vd[u][pv[y]] == *space.d(p, y))
            && vs.iter().all(|&y| &on_v + &vd[v][pv[y]] == *space.d(p, y));
        if fits {
            out.push((e, u, s, h));
        }
    }
    out
}

/// Inserts points `p..n` in order, backtracking when a placement that fits
/// the points so far leaves no room for a later one.
fn insert_signed(space: &PseudoMetricSpace, d: Draft, p: usize) -> Option<Draft> {
    if p == space.n() {
        return Some(d);
    }
    for (e, u, s, h) in fitting_edges(space, &d, p) {
        let mut next = d.clone();
        let m = next.subdivide(e, u, s);
        next.attach(m, h);
        if let Some(done) = insert_signed(space, next, p + 1) {
            return Some(done);
        }
    }
    None
}

fn not_additive(space: &PseudoMetricSpace, allow_negative: bool) -> AdditiveError {
    let mode = if allow_negative {
        FourPointMode::Weak
    } else {
        FourPointMode::Strong
    };
    AdditiveError::NotAdditive {
        quadruple: four_point_check(space, mode).violation,
    }
}

/// Generating tree of an additive space, or of a pseudo-additive one when
/// `allow_negative` is set. Output is in canonical form.
pub fn reconstruct(space: &PseudoMetricSpace, allow_negative: bool) -> Result<GeneratingTree, AdditiveError> {
    let n = space.n();
    let mut d = Draft {
        vertex_count: 1,
        edges: Vec::new(),
        weights: Vec::new(),
        point_vertex: vec![0],
    };
    if n >= 2 {
        d.attach(0, space.d(0, 1).clone());
    }
    if allow_negative {
        d = insert_signed(space, d, 2.min(n)).ok_or_else(|| not_additive(space, allow_negative))?;
    } else {
        for p in 2..n {
            insert_by_gromov(space, &mut d, p);
        }
    }
    let tree = canonical_form(&d.tree());
    let bm = tree.boundary_matrix();
    if space.pairs().any(|(p, q)| &bm[p][q] != space.d(p, q)) {
        return Err(not_additive(space, allow_negative));
    }
    let signed = tree.weights().iter().any(|w| w.is_negative());
    if signed && !allow_negative {
        return Err(not_additive(space, allow_negative));
    }
    let mode = if signed {
        WeightMode::Generalized
    } else {
        WeightMode::Filling
    };
    let tree = WeightedTree::new(tree.topology().clone(), tree.weights().to_vec(), mode)?;
    Ok(GeneratingTree { tree, signed })
}

/// Contracts zero-weight edges unless they join two distinct points
/// (lower points claim interior vertices first), suppresses false vertices
/// and renumbers: vertices in depth-first preorder from the vertex of
/// point 0, children by smallest point below them; each edge is listed at
/// the position of its lower vertex.
pub fn canonical_form(tree: &WeightedTree) -> WeightedTree {
    let t = tree.topology();
    let k = t.vertex_count();
    let mut parent: Vec<usize> = (0..k).collect();
    let mut low: Vec<Option<usize>> = (0..k).map(|v| t.points_at(v).iter().min().copied()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut zero: Vec<usize> = tree.degenerate_edges();
    let rank = |e: &usize| {
        let (a, b) = t.edge(*e);
        let pa = t.points_at(a).iter().min().copied().unwrap_or(usize::MAX);
        let pb = t.points_at(b).iter().min().copied().unwrap_or(usize::MAX);
        (pa.min(pb) != usize::MAX, pa.min(pb), *e)
    };
    zero.sort_by_key(rank);
    let mut family = Vec::new();
    for e in zero {
        let (a, b) = t.edge(e);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if low[ra].is_some() && low[rb].is_some() {
            continue;
        }
        parent[rb] = ra;
        low[ra] = low[ra].or(low[rb]);
        family.push(e);
    }
    let (f, _) = tree.factorize(&family).expect("zero edges contract");
    let (s, _) = f.suppress_false_vertices();
    let t = s.topology();
    let k = t.vertex_count();
    if t.point_count() == 0 {
        return s;
    }
    let root = t.vertex_of(0);
    let rooted = t.rooted(root);
    // smallest point in each subtree
    let mut low = vec![usize::MAX; k];
    for &v in rooted.order.iter().rev() {
        if let Some(&p) = t.points_at(v).iter().min() {
            low[v] = low[v].min(p);
        }
        if let Some((parent, _)) = rooted.parent[v] {
            low[parent] = low[parent].min(low[v]);
        }
    }
    let mut number = vec![usize::MAX; k];
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    let mut weights = Vec::with_capacity(k.saturating_sub(1));
    let mut stack = vec![root];
    let mut next = 0;
    while let Some(v) = stack.pop() {
        number[v] = next;
        next += 1;
        if let Some((parent, e)) = rooted.parent[v] {
            edges.push((number[parent], number[v]));
            weights.push(s.weight(e).clone());
        }
        let mut children: Vec<usize> = t
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| rooted.parent[w].map(|(p, _)| p) == Some(v))
            .collect();
        children.sort_by_key(|&w| (low[w], w));
        stack.extend(children.into_iter().rev());
    }
    let pv = t.point_vertex().iter().map(|&v| number[v]).collect();
    let topology = TreeTopology::build(k, edges, pv).expect("renumbering keeps a tree");
    WeightedTree::new(topology, weights, s.mode()).expect("weights match edges")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_point_space, planar_space, diamond_points, simplex};
    use crate::rational::{frac, rat, to_f64};

    #[test]
    fn simplex_gives_a_star() {
        let g = reconstruct(&simplex(5, rat(3)), false).unwrap();
        let t = g.tree.topology();
        assert_eq!(t.vertex_count(), 6);
        assert!(g.tree.weights().iter().all(|w| *w == frac(3, 2)));
        assert!(!g.signed);
    }

    #[test]
    fn tiny_spaces() {
        let one = PseudoMetricSpace::from_matrix(vec![vec![rat(0)]]).unwrap();
        assert_eq!(reconstruct(&one, false).unwrap().tree.topology().vertex_count(), 1);
        let two = PseudoMetricSpace::from_matrix(vec![vec![rat(0), rat(4)], vec![rat(4), rat(0)]]).unwrap();
        assert_eq!(reconstruct(&two, false).unwrap().tree.weights(), &[rat(4)]);
    }

    #[test]
    fn five_point_space_is_not_additive() {
        let err = reconstruct(&five_point_space(), false).unwrap_err();
        assert_eq!(err, AdditiveError::NotAdditive { quadruple: Some([0, 1, 2, 3]) });
        assert!(reconstruct(&five_point_space(), true).is_err());
    }

    #[test]
    fn diamond_is_pseudo_additive() {
        let s = planar_space(&diamond_points());
        assert!(reconstruct(&s, false).is_err());
        let g = reconstruct(&s, true).unwrap();
        assert!(g.signed);
        let t = g.tree.topology();
        let key: Vec<String> = t.splits().iter().filter(|s| !s.is_trivial()).map(|s| s.to_string()).collect();
        assert_eq!(key, vec!["1,3|2,4"]);
        let neg = g.tree.weights().iter().find(|w| w.is_negative()).unwrap();
        assert!((to_f64(neg) - (1.0 - 3f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_points_sit_inside_the_tree() {
        // 0 - 1 - 2 on a line
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(1), rat(3)],
            vec![rat(1), rat(0), rat(2)],
            vec![rat(3), rat(2), rat(0)],
        ])
        .unwrap();
        let g = reconstruct(&s, false).unwrap();
        let t = g.tree.topology();
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.degree(t.vertex_of(1)), 2);
        assert_eq!(reconstruct(&s, true).unwrap().tree, g.tree);
    }

    #[test]
    fn signed_counterexample_for_gromov_insertion() {
        // cherries {0,1},{2,3}, pendants 2, interior -1
        let t = TreeTopology::new(6, vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)], vec![0, 1, 2, 3]).unwrap();
        let w = WeightedTree::new(t, vec![rat(2), rat(2), rat(-1), rat(2), rat(2)], WeightMode::Generalized).unwrap();
        let s = w.boundary_space(crate::metric::default_labels(4)).unwrap();
        let g = reconstruct(&s, true).unwrap();
        assert_eq!(g.tree, canonical_form(&w));
    }

    #[test]
    fn zero_length_interior_path_needs_backtracking() {
        // interior edges 1 and -1 in a row: a first fitting edge can be a dead end
        let t = TreeTopology::new(
            10,
            vec![(0, 6), (1, 9), (2, 6), (7, 8), (3, 7), (8, 6), (4, 8), (9, 7), (5, 9)],
            vec![0, 1, 2, 3, 4, 5],
        )
        .unwrap();
        let w = [9, 2, 5, 1, 11, -1, 5, -2, 12].map(rat).to_vec();
        let w = WeightedTree::new(t, w, WeightMode::Generalized).unwrap();
        let s = w.boundary_space(crate::metric::default_labels(6)).unwrap();
        let g = reconstruct(&s, true).unwrap();
        assert!(g.tree.is_filling_of(&s));
        assert_eq!(g.tree.boundary_space(crate::metric::default_labels(6)).unwrap(), s);
    }
}
