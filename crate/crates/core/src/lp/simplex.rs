//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `maximize c·x` subject to `a_i·x (≤ | ≥ | =) b_i`, `x ≥ 0`, and
//! returns an optimal basic solution together with the row multipliers
//! `y = c_B B⁻¹`. The first attempt runs over [`Q128`]; on overflow the
//! whole solve is repeated over big rationals, so results never depend on
//! which scalar type finished.

use std::cmp::Ordering;
use std::fmt::Write as _;

use super::field::{FResult, Field, Overflow, Q128};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct Problem {
    /// Coefficients of the objective to maximize.
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub x: Vec<Rational>,
    /// Row multipliers: `≤` rows get `y ≥ 0`, `≥` rows `y ≤ 0`, `=` rows any sign.
    pub y: Vec<Rational>,
    pub value: Rational,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

pub fn maximize(problem: &Problem) -> Outcome {
    match run::<Q128>(problem) {
        Ok(outcome) => outcome,
        Err(Overflow) => run::<Rational>(problem).expect("big rationals do not overflow"),
    }
}

/// Same as [`maximize`] but forced onto big rationals; used to cross-check
/// the fast path.
pub fn maximize_big(problem: &Problem) -> Outcome {
    run::<Rational>(problem).expect("big rationals do not overflow")
}

struct Tableau<F> {
    m: usize,
    cols: usize,
    a: Vec<Vec<F>>,
    obj: Vec<F>,
    basis: Vec<usize>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<F: Field> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) -> FResult<()> {
        let p = self.a[r][c].clone();
        let mut prow = Vec::new();
        for k in 0..=self.cols {
            if !self.a[r][k].is_zero() {
                let v = self.a[r][k].div(&p)?;
                self.a[r][k] = v.clone();
                prow.push((k, v));
            }
        }
        for i in 0..self.m {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (k, v) in &prow {
                self.a[i][*k] = self.a[i][*k].sub(&f.mul(v)?)?;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (k, v) in &prow {
                self.obj[*k] = self.obj[*k].sub(&f.mul(v)?)?;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
        Ok(())
    }

    fn optimize(&mut self, banned: &[bool]) -> FResult<Step> {
        loop {
            let Some(c) = (0..self.cols).find(|&j| !banned[j] && self.obj[j].is_negative()) else {
                return Ok(Step::Optimal);
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.m {
                if !self.a[i][c].is_positive() {
                    continue;
                }
                let ratio = self.a[i][self.cols].div(&self.a[i][c])?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.try_cmp(br)? {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Ok(Step::Unbounded);
            };
            self.pivot(r, c)?;
        }
    }

    /// `obj[j] = Σ_i c_{basis(i)} a_ij − c_j`.
    fn price(&mut self, cost: &[F]) -> FResult<()> {
        for j in 0..=self.cols {
            let mut v = if j < self.cols { cost[j].neg()? } else { F::zero() };
            for i in 0..self.m {
                let cb = &cost[self.basis[i]];
                if !cb.is_zero() && !self.a[i][j].is_zero() {
                    v = v.add(&cb.mul(&self.a[i][j])?)?;
                }
            }
            self.obj[j] = v;
        }
        Ok(())
    }

    fn dump(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.a.iter().enumerate() {
            let _ = write!(out, "x{:<3}|", self.basis[i]);
            for v in row {
                let _ = write!(out, " {:>6}", format_rational(&v.to_rational()));
            }
            out.push('\n');
        }
        out.push_str("obj |");
        for v in &self.obj {
            let _ = write!(out, " {:>6}", format_rational(&v.to_rational()));
        }
        out.push('\n');
        out
    }
}

fn run<F: Field>(problem: &Problem) -> FResult<Outcome> {
    let (tab, layout) = build::<F>(problem)?;
    solve(tab, &layout, problem)
}

struct Layout {
    n: usize,
    negated: Vec<bool>,
    unit_col: Vec<usize>,
    artificial: Vec<bool>,
}

fn build<F: Field>(problem: &Problem) -> FResult<(Tableau<F>, Layout)> {
    let n = problem.objective.len();
    let m = problem.rows.len();
    let mut senses = Vec::with_capacity(m);
    let mut negated = Vec::with_capacity(m);
    for row in &problem.rows {
        let neg = num_traits::Signed::is_negative(&row.rhs);
        negated.push(neg);
        senses.push(match (row.sense, neg) {
            (Sense::Le, true) => Sense::Ge,
            (Sense::Ge, true) => Sense::Le,
            (s, _) => s,
        });
    }
    let surplus_count = senses.iter().filter(|s| **s == Sense::Ge).count();
    let cols = n + surplus_count + m;
    let mut artificial = vec![false; cols];
    let mut unit_col = Vec::with_capacity(m);
    let mut a = Vec::with_capacity(m);
    let mut next_surplus = n;
    for (i, row) in problem.rows.iter().enumerate() {
        let mut r = vec![F::zero(); cols + 1];
        for (j, q) in row.coeffs.iter().enumerate() {
            let v = F::from_rational(q)?;
            r[j] = if negated[i] { v.neg()? } else { v };
        }
        let rhs = F::from_rational(&row.rhs)?;
        r[cols] = if negated[i] { rhs.neg()? } else { rhs };
        if senses[i] == Sense::Ge {
            r[next_surplus] = F::one().neg()?;
            next_surplus += 1;
        }
        let u = n + surplus_count + i;
        r[u] = F::one();
        artificial[u] = senses[i] != Sense::Le;
        unit_col.push(u);
        a.push(r);
    }
    let tab = Tableau {
        m,
        cols,
        a,
        obj: vec![F::zero(); cols + 1],
        basis: unit_col.clone(),
        pivots: 0,
    };
    Ok((
        tab,
        Layout {
            n,
            negated,
            unit_col,
            artificial,
        },
    ))
}

fn solve<F: Field>(mut tab: Tableau<F>, layout: &Layout, problem: &Problem) -> FResult<Outcome> {
    let cols = tab.cols;
    let none_banned = vec![false; cols];
    if layout.artificial.iter().any(|&x| x) {
        let cost: Vec<F> = (0..cols)
            .map(|j| if layout.artificial[j] { F::one().neg() } else { Ok(F::zero()) })
            .collect::<FResult<_>>()?;
        tab.price(&cost)?;
        tab.optimize(&none_banned)?;
        if tab.obj[cols].is_negative() {
            return Ok(Outcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..tab.m {
            if !layout.artificial[tab.basis[r]] {
                continue;
            }
            if let Some(c) = (0..cols).find(|&j| !layout.artificial[j] && !tab.a[r][j].is_zero()) {
                tab.pivot(r, c)?;
            }
        }
    }
    let mut cost = vec![F::zero(); cols];
    for (j, q) in problem.objective.iter().enumerate() {
        cost[j] = F::from_rational(q)?;
    }
    tab.price(&cost)?;
    if let Step::Unbounded = tab.optimize(&layout.artificial)? {
        return Ok(Outcome::Unbounded);
    }
    let mut x = vec![Rational::from_integer(0.into()); layout.n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < layout.n {
            x[b] = tab.a[i][cols].to_rational();
        }
    }
    let y = (0..tab.m)
        .map(|i| {
            let v = tab.obj[layout.unit_col[i]].to_rational();
            if layout.negated[i] {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok(Outcome::Optimal(Optimum {
        x,
        y,
        value: tab.obj[cols].to_rational(),
        basis: tab.basis.clone(),
        pivots: tab.pivots,
    }))
}

/// Text dump of the initial tableau, for debugging.
pub fn dump_initial(problem: &Problem) -> String {
    match build::<Rational>(problem) {
        Ok((tab, _)) => tab.dump(),
        Err(_) => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn row(coeffs: &[i64], sense: Sense, rhs: i64) -> Row {
        Row {
            coeffs: coeffs.iter().map(|&c| rat(c)).collect(),
            sense,
            rhs: rat(rhs),
        }
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18
        let p = Problem {
            objective: vec![rat(3), rat(5)],
            rows: vec![
                row(&[1, 0], Sense::Le, 4),
                row(&[0, 2], Sense::Le, 12),
                row(&[3, 2], Sense::Le, 18),
            ],
        };
        let Outcome::Optimal(o) = maximize(&p) else { panic!() };
        assert_eq!(o.value, rat(36));
        assert_eq!(o.x, vec![rat(2), rat(6)]);
        assert_eq!(o.y, vec![rat(0), frac(3, 2), rat(1)]);
    }

    #[test]
    fn minimisation_with_ge_rows() {
        // min x + y, x + 2y ≥ 4, 3x + y ≥ 6  ==  max -x - y
        let p = Problem {
            objective: vec![rat(-1), rat(-1)],
            rows: vec![row(&[1, 2], Sense::Ge, 4), row(&[3, 1], Sense::Ge, 6)],
        };
        let Outcome::Optimal(o) = maximize(&p) else { panic!() };
        assert_eq!(o.value, frac(-14, 5));
        assert_eq!(o.x, vec![frac(8, 5), frac(6, 5)]);
        let dual_value: Rational = o.y.iter().zip([rat(4), rat(6)]).map(|(y, b)| y * b).sum();
        assert_eq!(dual_value, o.value);
        assert!(o.y.iter().all(|y| y <= &rat(0)));
    }

    #[test]
    fn equality_and_negative_rhs() {
        // max x, x + y = 3, -x ≥ -2
        let p = Problem {
            objective: vec![rat(1), rat(0)],
            rows: vec![row(&[1, 1], Sense::Eq, 3), row(&[-1, 0], Sense::Ge, -2)],
        };
        let Outcome::Optimal(o) = maximize(&p) else { panic!() };
        assert_eq!(o.value, rat(2));
        let dual_value: Rational = o.y.iter().zip([rat(3), rat(-2)]).map(|(y, b)| y * b).sum();
        assert_eq!(dual_value, rat(2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = Problem {
            objective: vec![rat(1)],
            rows: vec![row(&[1], Sense::Le, 1), row(&[1], Sense::Ge, 2)],
        };
        assert_eq!(maximize(&p), Outcome::Infeasible);
        let p = Problem {
            objective: vec![rat(1)],
            rows: vec![row(&[1], Sense::Ge, 1)],
        };
        assert_eq!(maximize(&p), Outcome::Unbounded);
    }

    #[test]
    fn fast_and_big_paths_agree() {
        let p = Problem {
            objective: vec![rat(2), rat(3), rat(1)],
            rows: vec![
                row(&[1, 1, 1], Sense::Le, 10),
                row(&[2, 1, 0], Sense::Ge, 3),
                row(&[0, 1, 3], Sense::Eq, 7),
            ],
        };
        assert_eq!(maximize(&p), maximize_big(&p));
        assert!(!dump_initial(&p).is_empty());
    }
}
