use serde::{Deserialize, Serialize};

use super::EmbedError;
use crate::metric::{default_labels, PseudoMetricSpace};

/// Points in the Euclidean plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarConfig {
    pub points: Vec<[f64; 2]>,
}

impl PlanarConfig {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self, EmbedError> {
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(EmbedError::NonFinite);
        }
        Ok(PlanarConfig { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (p, q) = (self.points[i], self.points[j]);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    /// Euclidean distances as a space, each taken at its exact binary value.
    pub fn to_space(&self) -> PseudoMetricSpace {
        let n = self.len();
        let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| self.distance(i, j)).collect()).collect();
        PseudoMetricSpace::from_f64(default_labels(n), &m, crate::FLOAT_TOLERANCE)
            .expect("planar distances are a metric up to rounding")
    }
}
