//! Path-covering programs: minimize `Σ w_e` subject to `Σ_{e∈γ(p,q)} w_e ≥ ρ(p,q)`
//! for every boundary pair, with `w ≥ 0` or `w` free.
//!
//! The solver works on the dual `max Σ ρ(p,q)·y_pq` over `y ≥ 0` with one
//! row per edge (`≤ 1` when `w ≥ 0`, `= 1` when `w` is free). The primal
//! weights are the row multipliers of that dual.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{maximize, Outcome, Problem, Row, Sense};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    Nonnegative,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    MalformedLP(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLP {
    pub edge_count: usize,
    /// Point pairs `(p, q)`, `p < q`, one per constraint.
    pub pairs: Vec<(usize, usize)>,
    /// Edge indices on the tree path of each pair.
    pub paths: Vec<Vec<usize>>,
    pub rhs: Vec<Rational>,
    pub mode: SignMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPSolution {
    pub status: LpStatus,
    /// One weight per edge.
    pub primal: Vec<Rational>,
    pub value: Rational,
    /// One multiplier `y_pq ≥ 0` per pair constraint.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyFailure {
    #[error("solution is not marked optimal")]
    NotOptimal,
    #[error("solution has the wrong shape")]
    Malformed,
    #[error("primal infeasible: {0}")]
    PrimalInfeasible(String),
    #[error("primal weight {got} differs from claimed value {claimed}")]
    PrimalValueMismatch { got: String, claimed: String },
    #[error("dual value {got} differs from claimed value {claimed}")]
    DualValueMismatch { got: String, claimed: String },
    #[error("dual infeasible: {0}")]
    DualInfeasible(String),
    #[error("complementary slackness fails: {0}")]
    ComplementarySlackness(String),
}

impl PathLP {
    pub fn validate(&self) -> Result<(), LpError> {
        let m = self.pairs.len();
        if self.paths.len() != m || self.rhs.len() != m {
            return Err(LpError::MalformedLP(format!(
                "{} pairs, {} paths, {} right-hand sides",
                m,
                self.paths.len(),
                self.rhs.len()
            )));
        }
        for (k, path) in self.paths.iter().enumerate() {
            let mut seen = vec![false; self.edge_count];
            for &e in path {
                if e >= self.edge_count {
                    return Err(LpError::MalformedLP(format!("pair {k} uses unknown edge {e}")));
                }
                if seen[e] {
                    return Err(LpError::MalformedLP(format!("pair {k} repeats edge {e}")));
                }
                seen[e] = true;
            }
        }
        Ok(())
    }

    /// `Σ_{e∈γ_k} w_e`.
    pub fn path_weight(&self, k: usize, w: &[Rational]) -> Rational {
        self.paths[k].iter().map(|&e| &w[e]).sum()
    }

    /// `Σ_{k: e∈γ_k} y_k` for every edge.
    pub fn column_sums(&self, y: &[Rational]) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.edge_count];
        for (k, path) in self.paths.iter().enumerate() {
            if y[k].is_zero() {
                continue;
            }
            for &e in path {
                sums[e] += &y[k];
            }
        }
        sums
    }

    fn dual_problem(&self) -> Problem {
        let m = self.pairs.len();
        let mut rows: Vec<Row> = (0..self.edge_count)
            .map(|_| Row {
                coeffs: vec![Rational::zero(); m],
                sense: match self.mode {
                    SignMode::Nonnegative => Sense::Le,
                    SignMode::Free => Sense::Eq,
                },
                rhs: rat(1),
            })
            .collect();
        for (k, path) in self.paths.iter().enumerate() {
            for &e in path {
                rows[e].coeffs[k] = rat(1);
            }
        }
        Problem {
            objective: self.rhs.clone(),
            rows,
        }
    }

    /// Primal form with the extra row `Σ w = total`, used to explore the
    /// optimal face. Free variables are split as `w = w⁺ − w⁻`.
    fn face_problem(&self, total: &Rational, objective_edge: usize, sign: i64) -> Problem {
        let split = self.mode == SignMode::Free;
        let cols = if split { 2 * self.edge_count } else { self.edge_count };
        let expand = |coef: &dyn Fn(usize) -> Rational| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); cols];
            for e in 0..self.edge_count {
                let c = coef(e);
                if split {
                    v[self.edge_count + e] = -c.clone();
                }
                v[e] = c;
            }
            v
        };
        let mut rows = Vec::with_capacity(self.pairs.len() + 1);
        for (k, path) in self.paths.iter().enumerate() {
            let coeffs = expand(&|e| if path.contains(&e) { rat(1) } else { rat(0) });
            rows.push(Row {
                coeffs,
                sense: Sense::Ge,
                rhs: self.rhs[k].clone(),
            });
        }
        rows.push(Row {
            coeffs: expand(&|_| rat(1)),
            sense: Sense::Eq,
            rhs: total.clone(),
        });
        let objective = expand(&|e| if e == objective_edge { rat(sign) } else { rat(0) });
        Problem { objective, rows }
    }
}

pub fn solve(lp: &PathLP) -> Result<LPSolution, LpError> {
    lp.validate()?;
    let outcome = maximize(&lp.dual_problem());
    Ok(match outcome {
        Outcome::Optimal(o) => LPSolution {
            status: LpStatus::Optimal,
            primal: o.y,
            value: o.value,
            dual: o.x,
            pivots: o.pivots,
        },
        Outcome::Unbounded => empty_solution(lp, LpStatus::Infeasible),
        Outcome::Infeasible => empty_solution(lp, LpStatus::Unbounded),
    })
}

fn empty_solution(lp: &PathLP, status: LpStatus) -> LPSolution {
    LPSolution {
        status,
        primal: vec![Rational::zero(); lp.edge_count],
        value: Rational::zero(),
        dual: vec![Rational::zero(); lp.pairs.len()],
        pivots: 0,
    }
}

/// Independent re-check of an optimal solution: primal feasibility, primal
/// value, dual value, dual feasibility and complementary slackness, in that
/// order.
pub fn certify(lp: &PathLP, sol: &LPSolution) -> Result<(), CertifyFailure> {
    if sol.status != LpStatus::Optimal {
        return Err(CertifyFailure::NotOptimal);
    }
    if lp.validate().is_err() || sol.primal.len() != lp.edge_count || sol.dual.len() != lp.pairs.len() {
        return Err(CertifyFailure::Malformed);
    }
    if lp.mode == SignMode::Nonnegative {
        if let Some(e) = sol.primal.iter().position(|w| w.is_negative()) {
            return Err(CertifyFailure::PrimalInfeasible(format!("edge {e} has negative weight")));
        }
    }
    for k in 0..lp.pairs.len() {
        if lp.path_weight(k, &sol.primal) < lp.rhs[k] {
            let (p, q) = lp.pairs[k];
            return Err(CertifyFailure::PrimalInfeasible(format!("pair ({p},{q}) is not covered")));
        }
    }
    let primal_value: Rational = sol.primal.iter().sum();
    if primal_value != sol.value {
        return Err(CertifyFailure::PrimalValueMismatch {
            got: format_rational(&primal_value),
            claimed: format_rational(&sol.value),
        });
    }
    let dual_value: Rational = sol.dual.iter().zip(&lp.rhs).map(|(y, b)| y * b).sum();
    if dual_value != sol.value {
        return Err(CertifyFailure::DualValueMismatch {
            got: format_rational(&dual_value),
            claimed: format_rational(&sol.value),
        });
    }
    if let Some(k) = sol.dual.iter().position(|y| y.is_negative()) {
        return Err(CertifyFailure::DualInfeasible(format!("multiplier {k} is negative")));
    }
    let one = rat(1);
    for (e, s) in lp.column_sums(&sol.dual).iter().enumerate() {
        let ok = match lp.mode {
            SignMode::Nonnegative => s <= &one,
            SignMode::Free => s == &one,
        };
        if !ok {
            return Err(CertifyFailure::DualInfeasible(format!(
                "edge {e} carries multiplier sum {}",
                format_rational(s)
            )));
        }
    }
    for k in 0..lp.pairs.len() {
        if sol.dual[k].is_positive() && lp.path_weight(k, &sol.primal) != lp.rhs[k] {
            return Err(CertifyFailure::ComplementarySlackness(format!("pair {k} is slack")));
        }
    }
    if lp.mode == SignMode::Nonnegative {
        for (e, s) in lp.column_sums(&sol.dual).iter().enumerate() {
            if sol.primal[e].is_positive() && s != &one {
                return Err(CertifyFailure::ComplementarySlackness(format!("edge {e} is slack")));
            }
        }
    }
    Ok(())
}

/// Range of `w_edge` over the optimal face. `None` marks an unbounded side.
pub fn optimal_range(
    lp: &PathLP,
    sol: &LPSolution,
    edge: usize,
) -> Result<(Option<Rational>, Option<Rational>), LpError> {
    lp.validate()?;
    if edge >= lp.edge_count || sol.status != LpStatus::Optimal {
        return Err(LpError::MalformedLP(format!("no optimal face for edge {edge}")));
    }
    let read = |sign: i64| -> Result<Option<Rational>, LpError> {
        match maximize(&lp.face_problem(&sol.value, edge, sign)) {
            Outcome::Optimal(o) => Ok(Some(o.value * rat(sign))),
            Outcome::Unbounded => Ok(None),
            Outcome::Infeasible => Err(LpError::MalformedLP("optimal face is empty".into())),
        }
    };
    Ok((read(-1)?, read(1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    /// 3-point star: edges 0,1,2 are the pendant edges of points 0,1,2.
    fn star3(d01: i64, d02: i64, d12: i64, mode: SignMode) -> PathLP {
        PathLP {
            edge_count: 3,
            pairs: vec![(0, 1), (0, 2), (1, 2)],
            paths: vec![vec![0, 1], vec![0, 2], vec![1, 2]],
            rhs: vec![rat(d01), rat(d02), rat(d12)],
            mode,
        }
    }

    #[test]
    fn star_gives_gromov_products() {
        let lp = star3(3, 4, 5, SignMode::Nonnegative);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.primal, vec![rat(1), rat(2), rat(3)]);
        assert_eq!(sol.value, rat(6));
        certify(&lp, &sol).unwrap();
        let free = solve(&star3(3, 4, 5, SignMode::Free)).unwrap();
        assert_eq!(free.value, rat(6));
    }

    #[test]
    fn certify_catches_perturbations() {
        let lp = star3(2, 2, 2, SignMode::Nonnegative);
        let sol = solve(&lp).unwrap();
        let mut bumped = sol.clone();
        bumped.primal[0] += rat(1);
        assert!(matches!(certify(&lp, &bumped), Err(CertifyFailure::PrimalValueMismatch { .. })));
        let mut halved = sol.clone();
        for y in &mut halved.dual {
            *y *= frac(1, 2);
        }
        assert!(matches!(certify(&lp, &halved), Err(CertifyFailure::DualValueMismatch { .. })));
    }

    #[test]
    fn range_on_a_rigid_star_is_a_point() {
        let lp = star3(3, 4, 5, SignMode::Nonnegative);
        let sol = solve(&lp).unwrap();
        let (lo, hi) = optimal_range(&lp, &sol, 2).unwrap();
        assert_eq!(lo, Some(rat(3)));
        assert_eq!(hi, Some(rat(3)));
    }

    #[test]
    fn malformed_is_rejected() {
        let mut lp = star3(1, 1, 1, SignMode::Free);
        lp.paths[0].push(7);
        assert!(solve(&lp).is_err());
    }

    #[test]
    fn uncoverable_pair_is_infeasible() {
        let lp = PathLP {
            edge_count: 1,
            pairs: vec![(0, 1), (0, 2), (1, 2)],
            paths: vec![vec![], vec![0], vec![0]],
            rhs: vec![rat(1), rat(1), rat(1)],
            mode: SignMode::Nonnegative,
        };
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }
}
