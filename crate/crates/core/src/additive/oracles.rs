//! Closed-form minimal fillings for small or highly structured spaces.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::AdditiveError;
use crate::metric::{gromov, pair_sums, PseudoMetricSpace};
use crate::rational::{half, Rational};
use crate::trees::{TreeTopology, WeightMode, WeightedTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    pub tree: WeightedTree,
    pub value: Rational,
}

/// Which pair `(j, k)` supplies the Gromov product `(p_j, p_k)_{p_i}` for
/// the edge at `p_i` of a star.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HubRule {
    /// The two lowest-index other points.
    #[default]
    LowestOthers,
    /// The largest product over all pairs; the star is then always a
    /// filling, and generating exactly when the space is a star.
    MaxProduct,
}

fn arity(space: &PseudoMetricSpace, expected: usize) -> Result<(), AdditiveError> {
    if space.n() != expected {
        return Err(AdditiveError::WrongArity {
            expected,
            got: space.n(),
        });
    }
    Ok(())
}

fn star_weight(space: &PseudoMetricSpace, members: &[usize], i: usize, rule: HubRule) -> Rational {
    let others: Vec<usize> = members.iter().copied().filter(|&x| x != i).collect();
    match rule {
        HubRule::LowestOthers => gromov(space, i, others[0], others[1]),
        HubRule::MaxProduct => {
            let mut best = gromov(space, i, others[0], others[1]);
            for (a, &j) in others.iter().enumerate() {
                for &k in &others[a + 1..] {
                    let g = gromov(space, i, j, k);
                    if g > best {
                        best = g;
                    }
                }
            }
            best
        }
    }
}

fn generates(tree: &WeightedTree, space: &PseudoMetricSpace, points: &[usize]) -> bool {
    let bm = tree.boundary_matrix();
    points
        .iter()
        .enumerate()
        .all(|(a, &p)| points[a + 1..].iter().all(|&q| bm[p][q] == *space.d(p, q)))
}

/// Three points: the star with Gromov-product weights, of weight `p(M)`.
pub fn oracle_triangle(space: &PseudoMetricSpace) -> Result<Oracle, AdditiveError> {
    arity(space, 3)?;
    oracle_star(space, HubRule::LowestOthers)
}

/// The star generating an additive space whose minimal filling is a star.
pub fn oracle_star(space: &PseudoMetricSpace, rule: HubRule) -> Result<Oracle, AdditiveError> {
    let n = space.n();
    if n < 3 {
        return Err(AdditiveError::WrongArity { expected: 3, got: n });
    }
    let members: Vec<usize> = (0..n).collect();
    let weights: Vec<Rational> = (0..n).map(|i| star_weight(space, &members, i, rule)).collect();
    let tree = WeightedTree::new(TreeTopology::star(n), weights, WeightMode::Filling)?;
    if !generates(&tree, space, &members) {
        return Err(AdditiveError::NotApplicable("the space is not generated by a star".into()));
    }
    let value = tree.total_weight();
    Ok(Oracle { tree, value })
}

/// Two adjacent hubs, each carrying one side of the bipartition as
/// pendant points. Sides are stars on their own; the bridge takes the
/// least weight that keeps every cross pair covered.
pub fn oracle_two_star(space: &PseudoMetricSpace, sides: (&[usize], &[usize])) -> Result<Oracle, AdditiveError> {
    let n = space.n();
    let (a, b) = sides;
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    if all != (0..n).collect::<Vec<_>>() {
        return Err(AdditiveError::NotApplicable("sides must partition the points".into()));
    }
    if a.len() < 3 || b.len() < 3 {
        return Err(AdditiveError::NotApplicable("each hub needs three pendant points".into()));
    }
    let (h1, h2) = (n, n + 1);
    let mut edges = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    let mut pendant = vec![Rational::zero(); n];
    for (side, hub) in [(a, h1), (b, h2)] {
        for &p in side {
            pendant[p] = star_weight(space, side, p, HubRule::LowestOthers);
            edges.push((p, hub));
            weights.push(pendant[p].clone());
        }
    }
    let mut bridge = Rational::zero();
    for &i in a {
        for &j in b {
            let need = space.d(i, j) - &pendant[i] - &pendant[j];
            if need > bridge {
                bridge = need;
            }
        }
    }
    edges.push((h1, h2));
    weights.push(bridge);
    let topology = TreeTopology::new(n + 2, edges, (0..n).collect())?;
    let tree = WeightedTree::new(topology, weights, WeightMode::Filling)
        .map_err(|_| AdditiveError::NotApplicable("a side is not additive".into()))?;
    if !generates(&tree, space, a) || !generates(&tree, space, b) {
        return Err(AdditiveError::NotApplicable("a side is not generated by its star".into()));
    }
    let value = tree.total_weight();
    Ok(Oracle { tree, value })
}

/// Minimal filling of a four-point space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointOracle {
    pub value: Rational,
    /// The points relabelled `p₁..p₄`: `{p₁, p₂}` and `{p₃, p₄}` are the
    /// mustaches, and `ρ₁₃ + ρ₂₄` is the largest pair sum.
    pub labels: [usize; 4],
    /// Weight of the interior edge.
    pub lambda5: Rational,
    /// Feasible range of the weight at `p₁`.
    pub x_range: (Rational, Rational),
    /// The filling at the lower end of the range.
    pub tree: WeightedTree,
}

impl FourPointOracle {
    /// Pendant weights `λ₁..λ₄` (indexed by relabelled position) for
    /// `λ₁ = x`.
    pub fn lambdas(&self, space: &PseudoMetricSpace, x: &Rational) -> [Rational; 4] {
        let [p1, p2, p3, p4] = self.labels;
        let r = |i: usize, j: usize| space.d(i, j).clone();
        let (r12, r13, r24, r34) = (r(p1, p2), r(p1, p3), r(p2, p4), r(p3, p4));
        [
            x.clone(),
            &r12 - x,
            (&r13 - &r24 + &r12 + &r34) * half() - x,
            (-&r13 + &r24 - &r12 + &r34) * half() + x,
        ]
    }
}

/// Value `½(min + max)` of the three pair sums, mustaches on the minimizing
/// pairing (first in the order `12|34`, `13|24`, `14|23` on ties).
pub fn oracle_four_point(space: &PseudoMetricSpace) -> Result<FourPointOracle, AdditiveError> {
    arity(space, 4)?;
    let sums = pair_sums(space, [0, 1, 2, 3]);
    let pairings = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    let imin = (0..3).min_by(|&a, &b| sums[a].cmp(&sums[b])).expect("three sums");
    let max = sums.iter().max().expect("three sums").clone();
    let value = (&sums[imin] + &max) * half();
    let [p1, p2, a, b] = pairings[imin];
    // p₃ is the partner of p₁ in the largest cross pairing
    let (p3, p4) = if space.d(p1, a) + space.d(p2, b) >= space.d(p1, b) + space.d(p2, a) {
        (a, b)
    } else {
        (b, a)
    };
    let labels = [p1, p2, p3, p4];
    let lambda5 = (space.d(p1, p3) + space.d(p2, p4) - space.d(p1, p2) - space.d(p3, p4)) * half();
    let x_range = (gromov(space, p1, p2, p4), gromov(space, p1, p2, p3));
    let mut oracle = FourPointOracle {
        value,
        labels,
        lambda5: lambda5.clone(),
        x_range,
        tree: WeightedTree::new(TreeTopology::star(1), vec![], WeightMode::Filling)?,
    };
    let l = oracle.lambdas(space, &oracle.x_range.0);
    // leaves 0..4 hold the points, hubs 4 (p₁, p₂) and 5 (p₃, p₄)
    let mut weights = vec![Rational::zero(); 5];
    let mut edges = vec![(0, 0); 5];
    for (slot, &p) in labels.iter().enumerate() {
        edges[p] = (p, if slot < 2 { 4 } else { 5 });
        weights[p] = l[slot].clone();
    }
    edges[4] = (4, 5);
    weights[4] = lambda5;
    let topology = TreeTopology::new(6, edges, vec![0, 1, 2, 3])?;
    oracle.tree = WeightedTree::new(topology, weights, WeightMode::Filling)?;
    Ok(oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{diamond_points, planar_space, rectangle_points, simplex, square57};
    use crate::metric::half_perimeter;
    use crate::metric::CyclicOrder;
    use crate::rational::{rat, to_f64};

    fn close(a: &Rational, b: f64) -> bool {
        (to_f64(a) - b).abs() < 1e-9
    }

    #[test]
    fn triangle_weight_is_half_perimeter() {
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(3), rat(4)],
            vec![rat(3), rat(0), rat(5)],
            vec![rat(4), rat(5), rat(0)],
        ])
        .unwrap();
        let o = oracle_triangle(&s).unwrap();
        assert_eq!(o.value, rat(6));
        assert_eq!(o.tree.weights(), &[rat(1), rat(2), rat(3)]);
        let hp = half_perimeter(&s, &CyclicOrder::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(o.value, hp);
        assert!(matches!(oracle_triangle(&simplex(4, rat(1))), Err(AdditiveError::WrongArity { .. })));
    }

    #[test]
    fn star_rules_agree_on_stars() {
        let s = simplex(6, rat(2));
        for rule in [HubRule::LowestOthers, HubRule::MaxProduct] {
            assert_eq!(oracle_star(&s, rule).unwrap().value, rat(6));
        }
        assert!(matches!(oracle_star(&square57(), HubRule::MaxProduct), Err(AdditiveError::NotApplicable(_))));
    }

    #[test]
    fn two_stars() {
        // hubs joined by an edge of weight 3, pendants 1
        let mut m = vec![vec![rat(0); 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    m[i][j] = if (i < 3) == (j < 3) { rat(2) } else { rat(5) };
                }
            }
        }
        let s = PseudoMetricSpace::from_matrix(m).unwrap();
        let o = oracle_two_star(&s, (&[0, 1, 2], &[3, 4, 5])).unwrap();
        assert_eq!(o.value, rat(9));
        assert_eq!(o.tree.weight(6), &rat(3));
    }

    #[test]
    fn diamond() {
        let r3 = 3f64.sqrt();
        // long diagonal 1–3, short diagonal 2–4
        let s = planar_space(&[[-r3 / 2.0, 0.0], [0.0, 0.5], [r3 / 2.0, 0.0], [0.0, -0.5]]);
        let o = oracle_four_point(&s).unwrap();
        assert!(close(&o.value, (3.0 + r3) / 2.0));
        assert!(close(&o.lambda5, (r3 - 1.0) / 2.0));
        assert!(close(&o.x_range.0, 0.5) && close(&o.x_range.1, r3 / 2.0));
        assert!(o.tree.is_filling_of(&s));
        assert_eq!(o.tree.total_weight(), o.value);
        let mirrored = oracle_four_point(&planar_space(&diamond_points())).unwrap();
        assert!(close(&mirrored.value, (3.0 + r3) / 2.0));
    }

    #[test]
    fn rectangle() {
        let (a, b) = (1.0, 2.0);
        let d = (a * a + b * b as f64).sqrt();
        let s = planar_space(&rectangle_points(a, b));
        let o = oracle_four_point(&s).unwrap();
        assert!(close(&o.value, a + d));
        assert!(close(&o.lambda5, d - a));
        // λ₃ = (ρ13 − ρ24 + ρ12 + ρ34)/2 − λ₁ over the range of λ₁
        let hi = o.lambdas(&s, &o.x_range.0)[2].clone();
        let lo = o.lambdas(&s, &o.x_range.1)[2].clone();
        assert!(close(&lo, (a + b - d) / 2.0), "{}", to_f64(&lo));
        assert!(close(&hi, (a - b + d) / 2.0), "{}", to_f64(&hi));
    }

    #[test]
    fn square_is_twelve() {
        let o = oracle_four_point(&square57()).unwrap();
        assert_eq!(o.value, rat(12));
        assert!(o.tree.is_filling_of(&square57()));
    }
}
