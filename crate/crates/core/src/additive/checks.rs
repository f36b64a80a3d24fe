use serde::Serialize;

use super::AdditiveError;
use crate::fillings::{mf, FillingError, SweepOptions};
use crate::lp::SignMode;
use crate::metric::{four_point_check, min_perimeter, FourPointMode, PseudoMetricSpace, DEFAULT_PERIMETER_CAP};
use crate::rational::{half, Rational};
use crate::tours::{enumerate_tours, ToursError};
use crate::trees::TreeTopology;

pub fn is_additive(space: &PseudoMetricSpace) -> bool {
    four_point_check(space, FourPointMode::Strong).holds
}

pub fn is_pseudo_additive(space: &PseudoMetricSpace) -> bool {
    four_point_check(space, FourPointMode::Weak).holds
}

/// Whether every planar tour of the topology has the same half-perimeter.
pub fn equal_halfperimeter_test(space: &PseudoMetricSpace, t: &TreeTopology) -> Result<bool, AdditiveError> {
    if t.point_count() != space.n() {
        return Err(ToursError::BoundaryMismatch {
            topology: t.point_count(),
            space: space.n(),
        }
        .into());
    }
    if !t.has_leaf_boundary() {
        return Err(AdditiveError::NotApplicable("boundary must sit on leaves".into()));
    }
    let tours = enumerate_tours(t, usize::MAX)?;
    let mut values = tours.iter().map(|o| {
        o.steps().map(|(p, q)| space.d(p, q)).sum::<Rational>() * half()
    });
    let first = values.next();
    Ok(values.all(|v| Some(&v) == first.as_ref()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RublevaReport {
    #[serde(with = "crate::rational::serde_str")]
    pub mf: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub half_perimeter: Rational,
    /// `mf = p(M)`.
    pub equal: bool,
    pub additive: bool,
}

impl RublevaReport {
    /// `mf = p(M)` exactly when the space is additive.
    pub fn consistent(&self) -> bool {
        self.equal == self.additive
    }
}

/// Compares the minimal filling weight with the least half-perimeter.
pub fn rubleva_check(space: &PseudoMetricSpace, opts: &SweepOptions) -> Result<RublevaReport, AdditiveError> {
    let cap = opts.cap.min(DEFAULT_PERIMETER_CAP.max(opts.cap));
    let report = mf(space, SignMode::Nonnegative, opts).map_err(|e| match e {
        FillingError::TooLarge { n, cap } => AdditiveError::TooLarge { n, cap },
        e => e.into(),
    })?;
    let (perimeter, _) = min_perimeter(space, cap.max(space.n()))
        .map_err(|_| AdditiveError::TooLarge { n: space.n(), cap })?;
    let half_perimeter = perimeter * half();
    Ok(RublevaReport {
        equal: report.weight == half_perimeter,
        mf: report.weight,
        half_perimeter,
        additive: is_additive(space),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::reconstruct;
    use crate::fixtures::{diamond_points, five_point_mustache, five_point_space, planar_space, simplex};
    use crate::rational::rat;

    #[test]
    fn predicates() {
        let five = five_point_space();
        assert!(!is_additive(&five) && !is_pseudo_additive(&five));
        let diamond = planar_space(&diamond_points());
        assert!(!is_additive(&diamond) && is_pseudo_additive(&diamond));
        let tri = simplex(3, rat(1));
        assert!(is_additive(&tri) && is_pseudo_additive(&tri));
    }

    #[test]
    fn equal_half_perimeters() {
        assert!(!equal_halfperimeter_test(&five_point_space(), &five_point_mustache()).unwrap());
        let diamond = planar_space(&diamond_points());
        let g = reconstruct(&diamond, true).unwrap();
        assert!(equal_halfperimeter_test(&diamond, g.tree.topology()).unwrap());
        let s = simplex(5, rat(2));
        let g = reconstruct(&s, false).unwrap();
        assert!(equal_halfperimeter_test(&s, g.tree.topology()).unwrap());
    }

    #[test]
    fn rubleva() {
        let r = rubleva_check(&simplex(5, rat(2)), &SweepOptions::default()).unwrap();
        assert!(r.equal && r.additive && r.consistent());
        let r = rubleva_check(&five_point_space(), &SweepOptions::default()).unwrap();
        assert_eq!((r.mf.clone(), r.half_perimeter.clone()), (rat(13), rat(10)));
        assert!(!r.equal && !r.additive && r.consistent());
    }
}
