//! Binary refinements ("splittings") of a tree topology.

use super::enumerate::{binary_count, binary_from_index};
use super::topology::{BinaryTopology, TreeTopology};

/// A binary topology that contracts back onto its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub topology: BinaryTopology,
    /// Edges added by the refinement; contracting them recovers the source.
    /// Edge `e` of the source keeps index `e`.
    pub new_edges: Vec<usize>,
}

enum Item {
    Edge(usize),
    Point(usize),
}

/// Every binary refinement: each vertex with `k ≥ 3` incident edges plus
/// held points is replaced by one of the `(2k−5)!!` binary trees on those
/// items, and every point moves to its own leaf.
pub fn splittings(t: &TreeTopology) -> Vec<Splitting> {
    let n = t.point_count();
    if n <= 2 && t.vertex_count() == 1 {
        let star = TreeTopology::star(n);
        let new_edges = (0..star.edge_count()).collect();
        return vec![Splitting {
            topology: BinaryTopology::new(star).expect("trivial trees are binary"),
            new_edges,
        }];
    }
    let items: Vec<Vec<Item>> = (0..t.vertex_count())
        .map(|v| {
            t.neighbors(v)
                .iter()
                .map(|&(_, e)| Item::Edge(e))
                .chain(t.points_at(v).iter().map(|&p| Item::Point(p)))
                .collect()
        })
        .collect();
    let refined: Vec<usize> = (0..t.vertex_count()).filter(|&v| items[v].len() >= 3).collect();
    let radices: Vec<usize> = refined.iter().map(|&v| binary_count(items[v].len())).collect();
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut index in 0..total {
        let mut vc = t.vertex_count();
        let mut edges = t.edges().to_vec();
        let mut point_vertex = t.point_vertex().to_vec();
        for (slot, &v) in refined.iter().enumerate() {
            let choice = index % radices[slot];
            index /= radices[slot];
            let its = &items[v];
            let k = its.len();
            let small = binary_from_index(k, choice);
            let mut map = vec![usize::MAX; small.vertex_count()];
            for (i, m) in map.iter_mut().enumerate().skip(k) {
                *m = if i == k {
                    v
                } else {
                    vc += 1;
                    vc - 1
                };
            }
            for (j, item) in its.iter().enumerate() {
                if let Item::Point(p) = item {
                    map[j] = vc;
                    point_vertex[*p] = vc;
                    vc += 1;
                }
            }
            for &(a, b) in small.edges() {
                let (leaf, inner) = if a < k { (a, b) } else if b < k { (b, a) } else { (usize::MAX, 0) };
                match its.get(leaf) {
                    Some(Item::Edge(e)) => {
                        let (x, y) = edges[*e];
                        edges[*e] = if x == v { (map[inner], y) } else { (x, map[inner]) };
                    }
                    _ => edges.push((map[a], map[b])),
                }
            }
        }
        let topology = TreeTopology::new(vc, edges, point_vertex).expect("refinement is a tree");
        let new_edges = (t.edge_count()..topology.edge_count()).collect();
        out.push(Splitting {
            topology: BinaryTopology::new(topology).expect("refinement is binary"),
            new_edges,
        });
    }
    out
}
