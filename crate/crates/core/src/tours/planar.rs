use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::ToursError;
use crate::metric::{half_perimeter, CyclicOrder, PseudoMetricSpace};
use crate::rational::Rational;
use crate::trees::{TreeTopology, WeightedTree};

/// Default cap on the point count for tour enumeration.
pub const DEFAULT_TOUR_CAP: usize = 10;

/// Upper bound on the number of rotation systems walked.
const MAX_EMBEDDINGS: u128 = 1 << 22;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Item {
    Edge(usize),
    Point(usize),
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Boundary walk of one planar embedding, starting at point 0.
fn walk(t: &TreeTopology, rotation: &[Vec<Item>]) -> Vec<usize> {
    let n = t.point_count();
    let mut v = t.vertex_of(0);
    let mut at = rotation[v].iter().position(|&i| i == Item::Point(0)).expect("point 0 at its vertex");
    let mut out = vec![0];
    loop {
        let r = &rotation[v];
        at = (at + 1) % r.len();
        match r[at] {
            Item::Point(0) => break,
            Item::Point(p) => out.push(p),
            Item::Edge(e) => {
                v = t.other_end(e, v);
                at = rotation[v].iter().position(|&i| i == Item::Edge(e)).expect("edge at its end");
            }
        }
        if out.len() > n {
            unreachable!("walk visits each point once");
        }
    }
    out
}

/// Next permutation of `a[1..]` in lexicographic order; `false` after the last.
fn next_rotation(a: &mut [Item]) -> bool {
    let tail = &mut a[1..];
    let key = |i: &Item| match *i {
        Item::Edge(e) => (0, e),
        Item::Point(p) => (1, p),
    };
    let k = tail.len();
    if k < 2 {
        return false;
    }
    let mut i = k - 1;
    while i > 0 && key(&tail[i - 1]) >= key(&tail[i]) {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = k - 1;
    while key(&tail[j]) <= key(&tail[i - 1]) {
        j -= 1;
    }
    tail.swap(i - 1, j);
    tail[i..].reverse();
    true
}

/// All planar tours of the topology up to rotation and inversion, sorted.
/// Points held by a vertex act as pendant edges in its cyclic order.
pub fn enumerate_tours(t: &TreeTopology, cap: usize) -> Result<Vec<CyclicOrder>, ToursError> {
    let n = t.point_count();
    if n > cap {
        return Err(ToursError::TooLarge { n, cap });
    }
    if n <= 2 {
        return Ok(vec![CyclicOrder::from_seq_unchecked((0..n).collect())]);
    }
    let mut rotation: Vec<Vec<Item>> = (0..t.vertex_count())
        .map(|v| {
            let mut items: Vec<Item> = t.neighbors(v).iter().map(|&(_, e)| Item::Edge(e)).collect();
            items.sort_by_key(|i| match *i {
                Item::Edge(e) => e,
                Item::Point(_) => 0,
            });
            items.extend(t.points_at(v).iter().map(|&p| Item::Point(p)));
            items
        })
        .collect();
    let embeddings: u128 = rotation.iter().map(|r| factorial(r.len().saturating_sub(1))).product();
    if embeddings > MAX_EMBEDDINGS {
        return Err(ToursError::TooLarge { n, cap });
    }
    let varying: Vec<usize> = (0..rotation.len()).filter(|&v| rotation[v].len() >= 3).collect();
    let mut seen = BTreeSet::new();
    loop {
        let order = CyclicOrder::from_seq_unchecked(walk(t, &rotation));
        seen.insert(order.up_to_inversion());
        // odometer over the rotations of the varying vertices
        let mut advanced = false;
        for &v in &varying {
            if next_rotation(&mut rotation[v]) {
                advanced = true;
                break;
            }
            // wrapped: restore the first permutation
            let first = rotation[v][0];
            let mut rest = rotation[v][1..].to_vec();
            rest.sort_by_key(|i| match *i {
                Item::Edge(e) => (0, e),
                Item::Point(p) => (1, p),
            });
            rotation[v] = std::iter::once(first).chain(rest).collect();
        }
        if !advanced {
            break;
        }
    }
    Ok(seen.into_iter().collect())
}

/// Whether every edge is crossed exactly twice by the steps of the order.
pub fn is_planar(t: &TreeTopology, order: &CyclicOrder) -> Result<bool, ToursError> {
    let n = t.point_count();
    if order.len() != n {
        return Err(ToursError::BoundaryMismatch {
            topology: n,
            space: order.len(),
        });
    }
    if n <= 1 {
        return Ok(true);
    }
    let mut crossings = vec![0usize; t.edge_count()];
    for (p, q) in order.steps() {
        for e in t.boundary_path(p, q)? {
            crossings[e] += 1;
        }
    }
    Ok(crossings.iter().all(|&c| c == 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TourRow {
    pub order: CyclicOrder,
    #[serde(with = "crate::rational::serde_str")]
    pub half_perimeter: Rational,
    /// Every step's tree path has `d_ω = ρ`.
    pub exact: bool,
}

/// Half-perimeter and exactness of every planar tour of the tree.
pub fn tour_table(space: &PseudoMetricSpace, tree: &WeightedTree, cap: usize) -> Result<Vec<TourRow>, ToursError> {
    if tree.point_count() != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: tree.point_count(),
            space: space.n(),
        });
    }
    let bm = tree.boundary_matrix();
    let weight = tree.total_weight();
    let mut rows = Vec::new();
    for order in enumerate_tours(tree.topology(), cap)? {
        let hp = if order.len() <= 1 {
            Rational::zero()
        } else {
            half_perimeter(space, &order).expect("lengths match")
        };
        if hp > weight {
            return Err(ToursError::NotAFilling);
        }
        let exact = order.len() > 1 && order.steps().all(|(p, q)| &bm[p][q] == space.d(p, q));
        rows.push(TourRow {
            order,
            half_perimeter: hp,
            exact,
        });
    }
    Ok(rows)
}
