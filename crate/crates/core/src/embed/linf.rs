use num_traits::{Signed, Zero};
use serde::Serialize;

use super::EmbedError;
use crate::metric::PseudoMetricSpace;
use crate::rational::Rational;
use crate::trees::WeightedTree;

/// A point of `ℓ∞ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinfPoint {
    #[serde(with = "crate::rational::serde_vec")]
    pub coords: Vec<Rational>,
}

pub fn linf_distance(a: &LinfPoint, b: &LinfPoint) -> Rational {
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Each point goes to its row of the distance matrix; an isometry.
pub fn kuratowski_embed(space: &PseudoMetricSpace) -> Vec<LinfPoint> {
    (0..space.n())
        .map(|i| LinfPoint {
            coords: space.row(i).to_vec(),
        })
        .collect()
}

/// Image of every tree vertex: coordinate `i` of vertex `v` is
/// `min_α d_ω(v, p_α) + ρ(p_α, p_i)`.
pub fn kuratowski_network(space: &PseudoMetricSpace, tree: &WeightedTree) -> Result<Vec<LinfPoint>, EmbedError> {
    let n = space.n();
    if tree.point_count() != n {
        return Err(EmbedError::BoundaryMismatch {
            tree: tree.point_count(),
            space: n,
        });
    }
    if let Some(e) = tree.weights().iter().position(|w| w.is_negative()) {
        return Err(EmbedError::NegativeWeights(e));
    }
    let vd = tree.vertex_distances();
    let pv = tree.topology().point_vertex();
    Ok(vd
        .iter()
        .map(|row| LinfPoint {
            coords: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|a| &row[pv[a]] + space.d(a, i))
                        .min()
                        .expect("at least one point")
                })
                .collect(),
        })
        .collect())
}

/// `ω_Γ(e)`: the ℓ∞ length of every edge under the vertex images.
pub fn induced_lengths(tree: &WeightedTree, images: &[LinfPoint]) -> Vec<Rational> {
    tree.topology()
        .edges()
        .iter()
        .map(|&(u, v)| linf_distance(&images[u], &images[v]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::oracle_triangle;
    use crate::fillings::mpf;
    use crate::fixtures::{five_point_mustache, five_point_space, simplex};
    use crate::lp::SignMode;
    use crate::metric::gromov_product;
    use crate::rational::rat;
    use crate::trees::WeightMode;

    #[test]
    fn embedding_is_an_isometry() {
        let s = five_point_space();
        let pts = kuratowski_embed(&s);
        assert_eq!(pts[0].coords, [0, 4, 6, 6, 4].map(rat).to_vec());
        for (i, j) in s.pairs() {
            assert_eq!(&linf_distance(&pts[i], &pts[j]), s.d(i, j));
        }
        let one = PseudoMetricSpace::from_matrix(vec![vec![rat(0)]]).unwrap();
        assert_eq!(kuratowski_embed(&one)[0].coords, vec![rat(0)]);
    }

    #[test]
    fn triangle_steiner_point_is_gromov_products() {
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(3), rat(4)],
            vec![rat(3), rat(0), rat(5)],
            vec![rat(4), rat(5), rat(0)],
        ])
        .unwrap();
        let o = oracle_triangle(&s).unwrap();
        let img = kuratowski_network(&s, &o.tree).unwrap();
        let expected: Vec<Rational> = (0..3).map(|i| gromov_product(&s, i, (i + 1) % 3, (i + 2) % 3).unwrap()).collect();
        assert_eq!(img[3].coords, expected);
        assert_eq!(induced_lengths(&o.tree, &img), o.tree.weights());
    }

    #[test]
    fn mpf_edges_keep_their_weights() {
        let s = five_point_space();
        let g = mpf(&s, &five_point_mustache(), SignMode::Nonnegative).unwrap().tree;
        let img = kuratowski_network(&s, &g).unwrap();
        assert_eq!(induced_lengths(&g, &img), g.weights());
        assert_eq!(&img[..5], &kuratowski_embed(&s)[..]);
    }

    #[test]
    fn inflated_filling_shrinks() {
        let s = simplex(3, rat(2));
        let t = crate::trees::TreeTopology::star(3);
        let g = WeightedTree::new(t, vec![rat(5), rat(1), rat(1)], WeightMode::Filling).unwrap();
        let img = kuratowski_network(&s, &g).unwrap();
        let lengths = induced_lengths(&g, &img);
        assert!(lengths.iter().zip(g.weights()).any(|(l, w)| l < w));
        assert!(lengths.iter().zip(g.weights()).all(|(l, w)| l <= w));
    }
}
