//! Small spaces and topologies used throughout the examples and tests.

use num_traits::Zero;
use rand::Rng;

use crate::metric::{default_labels, PseudoMetricSpace};
use crate::rational::{frac, rat, Rational};
use crate::trees::{binary_count, binary_from_index, TreeTopology, WeightMode, WeightedTree};

fn integer_space(m: &[&[i64]]) -> PseudoMetricSpace {
    PseudoMetricSpace::from_matrix(m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
        .expect("fixture is a metric")
}

/// Five points on a cycle: 4 between cyclic neighbours, 6 otherwise.
pub fn five_point_space() -> PseudoMetricSpace {
    integer_space(&[
        &[0, 4, 6, 6, 4],
        &[4, 0, 4, 6, 6],
        &[6, 4, 0, 4, 6],
        &[6, 6, 4, 0, 4],
        &[4, 6, 6, 4, 0],
    ])
}

/// Binary topology with mustaches `{1,2}` and `{3,5}` and point 4 in the
/// middle. Edges: `x1, x2, y1, x4, y2, x3, x5`.
pub fn five_point_mustache() -> TreeTopology {
    TreeTopology::new(
        8,
        vec![(0, 5), (1, 5), (5, 6), (3, 6), (6, 7), (2, 7), (4, 7)],
        vec![0, 1, 2, 3, 4],
    )
    .expect("fixture is a tree")
}

/// Regular simplex: `n` points at mutual distance `d`.
pub fn simplex(n: usize, d: Rational) -> PseudoMetricSpace {
    PseudoMetricSpace::from_matrix(
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { rat(0) } else { d.clone() }).collect())
            .collect(),
    )
    .expect("simplex is a metric")
}

/// Square with sides 5 and diagonals 7, points in cyclic order.
pub fn square57() -> PseudoMetricSpace {
    integer_space(&[&[0, 5, 7, 5], &[5, 0, 5, 7], &[7, 5, 0, 5], &[5, 7, 5, 0]])
}

/// Quartet with cherries `{1,3}` and `{2,4}`, the pairing of the diagonals
/// of a square in cyclic order `1,2,3,4`.
pub fn diagonal_quartet() -> TreeTopology {
    TreeTopology::new(6, vec![(0, 4), (2, 4), (4, 5), (1, 5), (3, 5)], vec![0, 1, 2, 3]).expect("fixture is a tree")
}

/// Planar points of a rhombus made of two unit equilateral triangles
/// sharing the diagonal `1–3`, in cyclic order `1,2,3,4`.
pub fn diamond_points() -> Vec<[f64; 2]> {
    let h = 3f64.sqrt() / 2.0;
    vec![[0.0, 0.0], [0.5, h], [1.0, 0.0], [0.5, -h]]
}

/// Rectangle `a × b` in cyclic order.
pub fn rectangle_points(a: f64, b: f64) -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]]
}

/// Euclidean distance matrix of planar points as a space.
pub fn planar_space(points: &[[f64; 2]]) -> PseudoMetricSpace {
    crate::embed::PlanarConfig::new(points.to_vec())
        .expect("finite fixture points")
        .to_space()
}

/// Shortest path closure of a complete graph with random positive
/// rational weights `p/q`, `p ≤ 60`, `q ≤ 6`.
pub fn random_rational_space<R: Rng>(rng: &mut R, n: usize) -> PseudoMetricSpace {
    let mut d = vec![vec![rat(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = frac(rng.gen_range(1..=60), rng.gen_range(1..=6));
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    PseudoMetricSpace::from_matrix(d).expect("shortest paths form a metric")
}

/// Random binary tree on `n ≥ 2` points with integer weights. Signed trees
/// get nonzero interior weights in `-3..=6` and are redrawn until the
/// boundary distances form a pseudo-metric and no path between interior
/// vertices has total weight zero, so the tree is the only one generating
/// its boundary distances.
pub fn random_weighted_tree<R: Rng>(rng: &mut R, n: usize, signed: bool) -> WeightedTree {
    loop {
        let t = if n == 2 {
            TreeTopology::star(2)
        } else {
            binary_from_index(n, rng.gen_range(0..binary_count(n))).into_inner()
        };
        let weights: Vec<Rational> = t
            .edges()
            .iter()
            .map(|&(u, v)| {
                let pendant = t.is_boundary(u) || t.is_boundary(v);
                match (pendant, signed) {
                    (true, _) => rat(rng.gen_range(1..=12)),
                    (false, false) => rat(rng.gen_range(0..=8)),
                    (false, true) => rat([-3, -2, -1, 1, 2, 3, 4, 5, 6][rng.gen_range(0..9)]),
                }
            })
            .collect();
        let w = WeightedTree::new(t, weights, WeightMode::Generalized).expect("weights match edges");
        let t = w.topology();
        let vd = w.vertex_distances();
        let interior: Vec<usize> = (0..t.vertex_count()).filter(|&v| !t.is_boundary(v)).collect();
        let resolved = interior
            .iter()
            .all(|&a| interior.iter().all(|&b| a == b || !vd[a][b].is_zero()));
        if resolved && w.boundary_space(default_labels(n)).is_ok() {
            return w;
        }
    }
}
