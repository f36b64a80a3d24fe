use serde::Serialize;

use super::ToursError;
use crate::metric::PseudoMetricSpace;
use crate::trees::WeightedTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexExactness {
    pub exact: bool,
    pub degree: usize,
    /// Largest family of non-degenerate incident edges, no two of which lie
    /// on a common exact path.
    pub neind: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    /// `(p, q, d_ω(p, q) = ρ(p, q))` for `p < q`.
    pub pairs: Vec<(usize, usize, bool)>,
    pub edges: Vec<bool>,
    pub vertices: Vec<VertexExactness>,
    /// Pairs `p < q` joined by an exact path.
    pub exact_paths_graph: Vec<(usize, usize)>,
    /// `co_exact[v]` lists pairs of edges at `v` lying on a common exact path.
    #[serde(skip)]
    pub co_exact: Vec<Vec<(usize, usize)>>,
}

impl ExactnessReport {
    pub fn is_pair_exact(&self, p: usize, q: usize) -> bool {
        let (p, q) = (p.min(q), p.max(q));
        p == q || self.pairs.iter().any(|&(a, b, x)| a == p && b == q && x)
    }

    pub fn edges_co_exact(&self, v: usize, e: usize, f: usize) -> bool {
        let key = (e.min(f), e.max(f));
        self.co_exact[v].contains(&key)
    }

    /// Whether the graph of exact paths joins all `n` points.
    pub fn exact_paths_connected(&self, n: usize) -> bool {
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(p, q) in &self.exact_paths_graph {
            adj[p].push(q);
            adj[q].push(p);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn common_vertex(t: &crate::trees::TreeTopology, e: usize, f: usize) -> usize {
    let (a, b) = t.edge(e);
    let (c, d) = t.edge(f);
    if a == c || a == d {
        a
    } else {
        debug_assert!(b == c || b == d);
        b
    }
}

/// Maximum independent set size by brute force.
fn max_independent(k: usize, conflict: &[(usize, usize)]) -> usize {
    assert!(k < 26, "degree too large for exhaustive search");
    let masks: Vec<u32> = conflict.iter().map(|&(a, b)| (1 << a) | (1 << b)).collect();
    (0u32..1 << k)
        .filter(|s| masks.iter().all(|m| s & m != *m))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Classifies pairs, edges and vertices of a filling as exact or not.
pub fn exactness_report(space: &PseudoMetricSpace, tree: &WeightedTree) -> Result<ExactnessReport, ToursError> {
    let t = tree.topology();
    let n = t.point_count();
    if n != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: n,
            space: space.n(),
        });
    }
    if !tree.is_filling_of(space) {
        return Err(ToursError::NotAFilling);
    }
    let bm = tree.boundary_matrix();
    let mut pairs = Vec::new();
    let mut graph = Vec::new();
    let mut edges = vec![false; t.edge_count()];
    let mut vertex_exact: Vec<bool> = (0..t.vertex_count()).map(|v| t.is_boundary(v)).collect();
    let mut co_exact = vec![Vec::new(); t.vertex_count()];
    for (p, q) in space.pairs() {
        let exact = &bm[p][q] == space.d(p, q);
        pairs.push((p, q, exact));
        if !exact {
            continue;
        }
        graph.push((p, q));
        let path = t.boundary_path(p, q)?;
        for &e in &path {
            edges[e] = true;
            let (a, b) = t.edge(e);
            vertex_exact[a] = true;
            vertex_exact[b] = true;
        }
        for w in path.windows(2) {
            let v = common_vertex(t, w[0], w[1]);
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            if !co_exact[v].contains(&key) {
                co_exact[v].push(key);
            }
        }
    }
    for c in co_exact.iter_mut() {
        c.sort_unstable();
    }
    let vertices = (0..t.vertex_count())
        .map(|v| {
            let incident: Vec<usize> = t
                .neighbors(v)
                .iter()
                .map(|&(_, e)| e)
                .filter(|&e| !tree.is_degenerate(e))
                .collect();
            let conflict: Vec<(usize, usize)> = co_exact[v]
                .iter()
                .filter_map(|&(e, f)| {
                    let i = incident.iter().position(|&x| x == e)?;
                    let j = incident.iter().position(|&x| x == f)?;
                    Some((i, j))
                })
                .collect();
            VertexExactness {
                exact: vertex_exact[v],
                degree: t.degree(v),
                neind: max_independent(incident.len(), &conflict),
            }
        })
        .collect();
    Ok(ExactnessReport {
        pairs,
        edges,
        vertices,
        exact_paths_graph: graph,
        co_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillings::mpf;
    use crate::fixtures::{diagonal_quartet, five_point_mustache, five_point_space, square57};
    use crate::lp::SignMode;
    use crate::rational::rat;
    use crate::trees::{TreeTopology, WeightMode};

    #[test]
    fn mustache_mpf_is_exact_everywhere() {
        let s = five_point_space();
        let g = mpf(&s, &five_point_mustache(), SignMode::Nonnegative).unwrap().tree;
        let r = exactness_report(&s, &g).unwrap();
        assert!(r.edges.iter().all(|&e| e));
        assert!(r.vertices.iter().all(|v| v.exact));
    }

    #[test]
    fn square_interior_edge_is_not_exact() {
        let s = square57();
        let t = diagonal_quartet();
        // every pendant edge at half the diagonal is one of the optimal weightings
        let h = crate::rational::frac(7, 2);
        let g = WeightedTree::new(t.clone(), vec![h.clone(), h.clone(), rat(0), h.clone(), h], WeightMode::Filling).unwrap();
        assert_eq!(g.total_weight(), mpf(&s, &t, SignMode::Nonnegative).unwrap().value);
        let r = exactness_report(&s, &g).unwrap();
        let interior = (0..t.edge_count())
            .find(|&e| {
                let (a, b) = t.edge(e);
                !t.is_boundary(a) && !t.is_boundary(b)
            })
            .unwrap();
        assert_eq!(g.weight(interior), &rat(0));
        assert!(!r.edges[interior]);
    }

    #[test]
    fn neind_on_a_star() {
        // all pairs exact on an additive star: no two edges are independent
        let s = crate::fixtures::simplex(3, rat(2));
        let g = WeightedTree::new(TreeTopology::star(3), vec![rat(1); 3], WeightMode::Filling).unwrap();
        let r = exactness_report(&s, &g).unwrap();
        assert_eq!(r.vertices[3].neind, 1);
        assert!(r.exact_paths_connected(3));
        // inflate one edge: its pairs are no longer exact
        let g = WeightedTree::new(TreeTopology::star(3), vec![rat(2), rat(1), rat(1)], WeightMode::Filling).unwrap();
        let r = exactness_report(&s, &g).unwrap();
        assert_eq!(r.vertices[3].neind, 2);
        assert!(!r.edges[0]);
        assert!(!r.exact_paths_connected(3));
    }

    #[test]
    fn not_a_filling() {
        let s = crate::fixtures::simplex(3, rat(2));
        let g = WeightedTree::new(TreeTopology::star(3), vec![rat(0); 3], WeightMode::Filling).unwrap();
        assert_eq!(exactness_report(&s, &g).unwrap_err(), ToursError::NotAFilling);
    }
}
