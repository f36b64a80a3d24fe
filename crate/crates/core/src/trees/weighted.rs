use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::topology::TreeTopology;
use super::TreeError;
use crate::metric::PseudoMetricSpace;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// All weights nonnegative.
    Filling,
    /// Weights of any sign.
    Generalized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedTree {
    topology: TreeTopology,
    weights: Vec<Rational>,
    mode: WeightMode,
}

impl WeightedTree {
    pub fn new(topology: TreeTopology, weights: Vec<Rational>, mode: WeightMode) -> Result<Self, TreeError> {
        if weights.len() != topology.edge_count() {
            return Err(TreeError::Invalid(format!(
                "{} weights for {} edges",
                weights.len(),
                topology.edge_count()
            )));
        }
        if mode == WeightMode::Filling {
            if let Some(e) = weights.iter().position(|w| w.is_negative()) {
                return Err(TreeError::NegativeWeight(e));
            }
        }
        Ok(WeightedTree {
            topology,
            weights,
            mode,
        })
    }

    /// Filling mode when every weight is nonnegative, generalized otherwise.
    pub fn auto(topology: TreeTopology, weights: Vec<Rational>) -> Result<Self, TreeError> {
        let mode = if weights.iter().any(|w| w.is_negative()) {
            WeightMode::Generalized
        } else {
            WeightMode::Filling
        };
        Self::new(topology, weights, mode)
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> &Rational {
        &self.weights[e]
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn point_count(&self) -> usize {
        self.topology.point_count()
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_degenerate(&self, e: usize) -> bool {
        self.weights[e].is_zero()
    }

    pub fn degenerate_edges(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&e| self.is_degenerate(e)).collect()
    }

    pub fn path_weight(&self, path: &[usize]) -> Rational {
        path.iter().map(|&e| &self.weights[e]).sum()
    }

    /// `d_ω(p, q)`.
    pub fn tree_distance(&self, p: usize, q: usize) -> Result<Rational, TreeError> {
        Ok(self.path_weight(&self.topology.boundary_path(p, q)?))
    }

    /// `d_ω` between all pairs of vertices.
    pub fn vertex_distances(&self) -> Vec<Vec<Rational>> {
        let k = self.topology.vertex_count();
        (0..k)
            .map(|root| {
                let rooted = self.topology.rooted(root);
                let mut d = vec![Rational::zero(); k];
                for &v in &rooted.order[1..] {
                    let (p, e) = rooted.parent[v].expect("non-root");
                    d[v] = &d[p] + &self.weights[e];
                }
                d
            })
            .collect()
    }

    /// `d_ω` between all pairs of boundary points.
    pub fn boundary_matrix(&self) -> Vec<Vec<Rational>> {
        let vd = self.vertex_distances();
        let pv = self.topology.point_vertex();
        pv.iter().map(|&u| pv.iter().map(|&v| vd[u][v].clone()).collect()).collect()
    }

    /// `(M, d_ω)` with the given labels. Fails when `d_ω` is not a
    /// pseudo-metric, which can only happen for negative weights.
    pub fn boundary_space(&self, labels: Vec<String>) -> Result<PseudoMetricSpace, crate::metric::SpaceError> {
        PseudoMetricSpace::new(labels, self.boundary_matrix())
    }

    /// `d_ω(p, q) ≥ ρ(p, q)` for every pair.
    pub fn is_filling_of(&self, space: &PseudoMetricSpace) -> bool {
        if space.n() != self.point_count() {
            return false;
        }
        let bm = self.boundary_matrix();
        space.pairs().all(|(p, q)| &bm[p][q] >= space.d(p, q))
    }

    /// Contracts every connected component of the edge family `family`
    /// (zero-weight edges only) to a vertex. Returns the factor and the map
    /// from old to new vertices.
    pub fn factorize(&self, family: &[usize]) -> Result<(WeightedTree, Vec<usize>), TreeError> {
        let k = self.topology.vertex_count();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut in_family = vec![false; self.weights.len()];
        for &e in family {
            if e >= self.weights.len() {
                return Err(TreeError::UnknownEdge(e));
            }
            if !self.is_degenerate(e) {
                return Err(TreeError::NonDegenerateEdgeInF(e));
            }
            in_family[e] = true;
            let (u, v) = self.topology.edge(e);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut id = vec![usize::MAX; k];
        let mut map = vec![0; k];
        let mut next = 0;
        for v in 0..k {
            let r = find(&mut parent, v);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            map[v] = id[r];
        }
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for (e, &(u, v)) in self.topology.edges().iter().enumerate() {
            if !in_family[e] {
                edges.push((map[u], map[v]));
                weights.push(self.weights[e].clone());
            }
        }
        let pv = self.topology.point_vertex().iter().map(|&v| map[v]).collect();
        let topology = TreeTopology::build(next, edges, pv)?;
        Ok((
            WeightedTree {
                topology,
                weights,
                mode: self.mode,
            },
            map,
        ))
    }

    /// Removes interior vertices of degree 2, merging their two edges.
    /// Returns the new tree and the map from old vertices (`None` for
    /// removed ones).
    pub fn suppress_false_vertices(&self) -> (WeightedTree, Vec<Option<usize>>) {
        let t = &self.topology;
        let k = t.vertex_count();
        let is_false = |v: usize| t.degree(v) == 2 && !t.is_boundary(v);
        if !(0..k).any(is_false) {
            return (self.clone(), (0..k).map(Some).collect());
        }
        let mut map = vec![None; k];
        let mut next = 0;
        for v in 0..k {
            if !is_false(v) {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut used = vec![false; t.edge_count()];
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for e in 0..t.edge_count() {
            if used[e] {
                continue;
            }
            used[e] = true;
            let (a, b) = t.edge(e);
            let mut w = self.weights[e].clone();
            // walk through false vertices in both directions
            let mut ends = [a, b];
            for (side, start) in [(0usize, a), (1, b)] {
                let mut prev_edge = e;
                let mut cur = start;
                while is_false(cur) {
                    let &(next_v, next_e) = t
                        .neighbors(cur)
                        .iter()
                        .find(|&&(_, f)| f != prev_edge)
                        .expect("degree two");
                    used[next_e] = true;
                    w += &self.weights[next_e];
                    prev_edge = next_e;
                    cur = next_v;
                }
                ends[side] = cur;
            }
            edges.push((map[ends[0]].unwrap(), map[ends[1]].unwrap()));
            weights.push(w);
        }
        let pv = t.point_vertex().iter().map(|&v| map[v].unwrap()).collect();
        let topology = TreeTopology::build(next, edges, pv).expect("suppression keeps a tree");
        (
            WeightedTree {
                topology,
                weights,
                mode: self.mode,
            },
            map,
        )
    }

    /// Factor by all degenerate edges, then drop false vertices.
    pub fn base(&self) -> (WeightedTree, Vec<usize>) {
        let (f, map) = self
            .factorize(&self.degenerate_edges())
            .expect("degenerate edges are always contractible");
        let (b, map2) = f.suppress_false_vertices();
        let composed = map
            .iter()
            .map(|&v| {
                // a suppressed vertex is never boundary; send it to the end of
                // one of its merged edges
                map2[v].unwrap_or_else(|| {
                    let w = f.topology.neighbors(v)[0].0;
                    map2[w].unwrap_or(0)
                })
            })
            .collect();
        (b, composed)
    }

    pub(crate) fn with_topology(&self, topology: TreeTopology, weights: Vec<Rational>) -> WeightedTree {
        WeightedTree {
            topology,
            weights,
            mode: self.mode,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn mustache(weights: [i64; 7]) -> WeightedTree {
        // points 0..5 on leaves 0..5; interior 5 (cherry 0,1), 6 (point 3 side), 7 (cherry 2,4)
        let t = TreeTopology::new(
            8,
            vec![(0, 5), (1, 5), (5, 6), (3, 6), (6, 7), (2, 7), (4, 7)],
            vec![0, 1, 2, 3, 4],
        )
        .unwrap();
        WeightedTree::new(t, weights.iter().map(|&w| rat(w)).collect(), WeightMode::Filling).unwrap()
    }

    #[test]
    fn distances_on_a_star() {
        let star = WeightedTree::new(TreeTopology::star(3), vec![frac(1, 2); 3], WeightMode::Filling).unwrap();
        assert_eq!(star.tree_distance(0, 2).unwrap(), rat(1));
        assert_eq!(star.tree_distance(1, 1).unwrap(), rat(0));
        assert_eq!(star.total_weight(), frac(3, 2));
    }

    #[test]
    fn base_of_the_mustache_filling() {
        let g = mustache([2, 2, 2, 2, 0, 2, 4]);
        let (b, _) = g.base();
        assert_eq!(b.topology().vertex_count(), 7);
        let deg4 = (0..7).filter(|&v| b.topology().degree(v) == 4).count();
        assert_eq!(deg4, 1);
        assert_eq!(b.total_weight(), g.total_weight());
    }

    #[test]
    fn factorize_rejects_positive_edges() {
        let g = mustache([2, 2, 2, 2, 0, 2, 4]);
        assert!(matches!(g.factorize(&[0]), Err(TreeError::NonDegenerateEdgeInF(0))));
        let (same, _) = g.factorize(&[]).unwrap();
        assert_eq!(same, g);
    }

    #[test]
    fn negative_weights_need_generalized_mode() {
        let t = TreeTopology::star(3);
        assert!(WeightedTree::new(t.clone(), vec![rat(1), rat(-1), rat(1)], WeightMode::Filling).is_err());
        let g = WeightedTree::auto(t, vec![rat(1), rat(-1), rat(1)]).unwrap();
        assert_eq!(g.mode(), WeightMode::Generalized);
    }

    #[test]
    fn false_vertices_are_suppressed() {
        let t = TreeTopology::build(3, vec![(0, 1), (1, 2)], vec![0, 2]).unwrap();
        let g = WeightedTree::new(t, vec![rat(1), rat(2)], WeightMode::Filling).unwrap();
        let (s, map) = g.suppress_false_vertices();
        assert_eq!(s.topology().edge_count(), 1);
        assert_eq!(s.weights(), &[rat(3)]);
        assert_eq!(map[1], None);
    }
}
