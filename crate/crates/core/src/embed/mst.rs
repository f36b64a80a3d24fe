use num_traits::Zero;

use crate::metric::PseudoMetricSpace;
use crate::rational::Rational;

/// Minimum spanning tree of the complete graph on the points. Edges are
/// scanned in `(length, i, j)` order, so ties resolve towards
/// lexicographically smaller index pairs.
pub fn mst(space: &PseudoMetricSpace) -> (Rational, Vec<(usize, usize)>) {
    let n = space.n();
    let mut pairs: Vec<(usize, usize)> = space.pairs().collect();
    pairs.sort_by(|a, b| space.d(a.0, a.1).cmp(space.d(b.0, b.1)).then(a.cmp(b)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut total = Rational::zero();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, j) in pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
            total += space.d(i, j);
            edges.push((i, j));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    (total, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_point_space, simplex};
    use crate::rational::rat;

    #[test]
    fn examples() {
        assert_eq!(mst(&simplex(5, rat(3))).0, rat(12));
        let (w, edges) = mst(&five_point_space());
        assert_eq!(w, rat(16));
        assert_eq!(edges, vec![(0, 1), (0, 4), (1, 2), (2, 3)]);
        assert_eq!(mst(&simplex(1, rat(1))).0, rat(0));
    }
}
