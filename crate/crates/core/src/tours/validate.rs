use serde::Serialize;

use super::exactness::{exactness_report, ExactnessReport};
use crate::metric::{four_point_check, FourPointMode, PseudoMetricSpace};
use crate::trees::WeightedTree;

/// What the tree is claimed to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// Minimal parametric filling of its own topology.
    Mpf,
    /// Minimal filling.
    Mf,
}

/// Structural properties every minimum satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureCheck {
    /// The tree must be a filling at all.
    Filling,
    /// Every non-degenerate edge lies on an exact path.
    NonDegenerateEdgeExact,
    /// Every vertex lies on an exact path.
    VertexExact,
    /// `2·neind(v) ≤ deg(v)` at interior vertices.
    NeindBound,
    /// Some two mustache points are joined by an exact path.
    MustacheExact,
    /// Every path of at most two edges lies on an exact path.
    ShortPathExact,
    /// The graph of exact paths is connected.
    ExactPathsConnected,
    /// A boundary vertex of degree above one only holds degenerate points.
    BoundaryVertexDegree,
    /// Non-degenerate non-additive spaces need a positive interior edge.
    NonDegenerateInteriorEdge,
    /// Boundary points next to any vertex form an additive subspace.
    LocalAdditivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureViolation {
    pub check: StructureCheck,
    pub detail: String,
}

fn violation(check: StructureCheck, detail: String) -> StructureViolation {
    StructureViolation { check, detail }
}

/// Every structural property that fails for the claimed kind of minimum.
/// Empty on genuine minima.
pub fn validate_structure(space: &PseudoMetricSpace, tree: &WeightedTree, claim: Claim) -> Vec<StructureViolation> {
    use StructureCheck::*;
    let report = match exactness_report(space, tree) {
        Ok(r) => r,
        Err(e) => return vec![violation(Filling, e.to_string())],
    };
    let t = tree.topology();
    let mut out = Vec::new();
    for (e, &exact) in report.edges.iter().enumerate() {
        if !exact && !tree.is_degenerate(e) {
            out.push(violation(NonDegenerateEdgeExact, format!("edge {e}")));
        }
    }
    for (v, r) in report.vertices.iter().enumerate() {
        if !r.exact {
            out.push(violation(VertexExact, format!("vertex {v}")));
        }
        if !t.is_boundary(v) && 2 * r.neind > r.degree {
            out.push(violation(
                NeindBound,
                format!("vertex {v}: neind {} with degree {}", r.neind, r.degree),
            ));
        }
    }
    mustaches(tree, &report, &mut out);
    if claim == Claim::Mf {
        short_paths(tree, &report, &mut out);
        if !report.exact_paths_connected(space.n()) {
            out.push(violation(ExactPathsConnected, "graph of exact paths is disconnected".into()));
        }
        for v in 0..t.vertex_count() {
            if t.is_boundary(v) && t.degree(v) > 1 {
                for &p in t.points_at(v) {
                    if !space.is_degenerate_point(p) {
                        out.push(violation(
                            BoundaryVertexDegree,
                            format!("point {p} at vertex {v} of degree {}", t.degree(v)),
                        ));
                    }
                }
            }
        }
        if space.is_nondegenerate() && !four_point_check(space, FourPointMode::Strong).holds {
            let found = (0..t.edge_count()).any(|e| {
                let (a, b) = t.edge(e);
                !t.is_boundary(a) && !t.is_boundary(b) && !tree.is_degenerate(e)
            });
            if !found {
                out.push(violation(NonDegenerateInteriorEdge, "no positive interior edge".into()));
            }
        }
        local_additivity(space, tree, &mut out);
    }
    out
}

fn mustaches(tree: &WeightedTree, report: &ExactnessReport, out: &mut Vec<StructureViolation>) {
    let t = tree.topology();
    for v in 0..t.vertex_count() {
        if t.is_boundary(v) || t.degree(v) < 3 {
            continue;
        }
        let whiskers: Vec<usize> = t
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| t.is_boundary(w))
            .collect();
        if whiskers.len() + 1 != t.degree(v) {
            continue;
        }
        let joined = whiskers.iter().enumerate().any(|(i, &a)| {
            whiskers[i + 1..].iter().any(|&b| {
                t.points_at(a)
                    .iter()
                    .any(|&p| t.points_at(b).iter().any(|&q| report.is_pair_exact(p, q)))
            })
        });
        if !joined {
            out.push(violation(StructureCheck::MustacheExact, format!("mustaches at vertex {v}")));
        }
    }
}

fn short_paths(tree: &WeightedTree, report: &ExactnessReport, out: &mut Vec<StructureViolation>) {
    let t = tree.topology();
    for (e, &exact) in report.edges.iter().enumerate() {
        if !exact {
            out.push(violation(StructureCheck::ShortPathExact, format!("edge {e}")));
        }
    }
    for v in 0..t.vertex_count() {
        let inc = t.neighbors(v);
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (e, f) = (inc[i].1, inc[j].1);
                if !report.edges_co_exact(v, e, f) {
                    out.push(violation(
                        StructureCheck::ShortPathExact,
                        format!("edges {e} and {f} at vertex {v}"),
                    ));
                }
            }
        }
    }
}

fn local_additivity(space: &PseudoMetricSpace, tree: &WeightedTree, out: &mut Vec<StructureViolation>) {
    let (base, _) = tree.base();
    let b = base.topology();
    for w in 0..b.vertex_count() {
        let mut near: Vec<usize> = b
            .neighbors(w)
            .iter()
            .map(|&(u, _)| u)
            .chain(std::iter::once(w))
            .filter(|&u| b.is_boundary(u))
            .flat_map(|u| b.points_at(u).iter().copied())
            .collect();
        near.sort_unstable();
        near.dedup();
        if near.len() >= 4 && !four_point_check(&space.subspace(&near), FourPointMode::Strong).holds {
            out.push(violation(
                StructureCheck::LocalAdditivity,
                format!("points {near:?} around base vertex {w}"),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillings::{mf, mpf, SweepOptions};
    use crate::fixtures::{five_point_mustache, five_point_space, square57};
    use crate::lp::SignMode;
    use crate::rational::{rat, max_of};
    use crate::trees::{enumerate_binary, WeightMode};

    #[test]
    fn lp_minima_pass_the_mpf_suite() {
        let s = five_point_space();
        for t in enumerate_binary(5, 10).unwrap() {
            let g = mpf(&s, &t, SignMode::Nonnegative).unwrap().tree;
            assert_eq!(validate_structure(&s, &g, Claim::Mpf), vec![], "{:?}", t.canonical_key());
        }
    }

    #[test]
    fn mf_winners_pass_both_suites() {
        for s in [five_point_space(), square57()] {
            let r = mf(&s, SignMode::Nonnegative, &SweepOptions::default()).unwrap();
            assert_eq!(validate_structure(&s, &r.best_tree, Claim::Mf), vec![]);
        }
    }

    #[test]
    fn inflated_weights_fail() {
        let s = five_point_space();
        let t = five_point_mustache();
        let big = max_of(s.rows().iter().flatten()).unwrap();
        let g = WeightedTree::new(t.clone(), vec![big; t.edge_count()], WeightMode::Filling).unwrap();
        let v = validate_structure(&s, &g, Claim::Mpf);
        assert!(v.iter().any(|x| x.check == StructureCheck::NonDegenerateEdgeExact));
    }

    #[test]
    fn non_filling_is_reported() {
        let s = five_point_space();
        let t = five_point_mustache();
        let g = WeightedTree::new(t.clone(), vec![rat(0); t.edge_count()], WeightMode::Filling).unwrap();
        assert_eq!(validate_structure(&s, &g, Claim::Mf)[0].check, StructureCheck::Filling);
    }
}
