use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{mst, smt_planar, EmbedError, PlanarConfig, MAX_SMT_POINTS};
use crate::fillings::{mf_value, SweepOptions};
use crate::fixtures::simplex;
use crate::lp::SignMode;
use crate::metric::PseudoMetricSpace;
use crate::rational::{format_rational, rat, to_f64, Rational};

pub const HISTOGRAM_BINS: usize = 20;
/// Lower bound checked on every planar sample of three or four points.
const PLANAR_BOUND_SLACK: f64 = 1e-6;

/// `mf / mst`, exact.
pub fn sgr(space: &PseudoMetricSpace, opts: &SweepOptions) -> Result<Rational, EmbedError> {
    let (tree, _) = mst(space);
    if tree.is_zero() {
        return Err(EmbedError::Trivial);
    }
    Ok(mf_value(space, SignMode::Nonnegative, opts)? / tree)
}

/// `mf / smt` of a planar configuration.
pub fn ssr_planar(config: &PlanarConfig, opts: &SweepOptions) -> Result<f64, EmbedError> {
    let smt = smt_planar(&config.points)?;
    if smt.length == 0.0 {
        return Err(EmbedError::Trivial);
    }
    let mf = mf_value(&config.to_space(), SignMode::Nonnegative, opts)?;
    Ok(to_f64(&mf) / smt.length)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Equidistant spaces of every size from 2 up to the arity.
    Simplex,
    /// Shortest path metrics of complete graphs with random integer weights.
    RandomMetric,
    /// Uniform points in the unit square; reports `ssr`.
    RandomPlanar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub generator: Generator,
    /// `sgr` or `ssr`.
    pub ratio: &'static str,
    pub arity: usize,
    pub samples: usize,
    pub min: f64,
    /// Exact minimum for `sgr`.
    pub min_exact: Option<String>,
    pub argmin: usize,
    pub argmin_input: serde_json::Value,
    pub bound: f64,
    /// Samples at or below the bound.
    pub violations: usize,
    pub histogram: Vec<HistogramBin>,
    #[serde(skip)]
    pub values: Vec<f64>,
}

enum Sample {
    Space(PseudoMetricSpace),
    Planar(PlanarConfig),
}

fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> PseudoMetricSpace {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=20);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    PseudoMetricSpace::from_matrix(d.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
        .expect("shortest paths form a metric")
}

fn histogram(values: &[f64], min: f64) -> Vec<HistogramBin> {
    let max = values.iter().copied().fold(min, f64::max);
    let width = (max - min) / HISTOGRAM_BINS as f64;
    let mut bins: Vec<HistogramBin> = (0..HISTOGRAM_BINS)
        .map(|i| HistogramBin {
            lo: min + width * i as f64,
            hi: if i + 1 == HISTOGRAM_BINS { max } else { min + width * (i + 1) as f64 },
            count: 0,
        })
        .collect();
    for &v in values {
        let i = if width > 0.0 { ((v - min) / width) as usize } else { 0 };
        bins[i.min(HISTOGRAM_BINS - 1)].count += 1;
    }
    bins
}

/// Samples spaces from the generator and summarizes the ratio. The same
/// seed always gives the same summary.
pub fn ratio_sweep(
    generator: Generator,
    count: usize,
    arity: usize,
    seed: u64,
    opts: &SweepOptions,
) -> Result<RatioSummary, EmbedError> {
    let max = match generator {
        Generator::RandomPlanar => MAX_SMT_POINTS,
        _ => opts.cap,
    };
    let min = if generator == Generator::RandomPlanar { 3 } else { 2 };
    if !(min..=max).contains(&arity) {
        return Err(EmbedError::TooManyPoints { n: arity, min, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Sample> = match generator {
        Generator::Simplex => (2..=arity).map(|n| Sample::Space(simplex(n, rat(1)))).collect(),
        Generator::RandomMetric => (0..count).map(|_| Sample::Space(random_metric(&mut rng, arity))).collect(),
        Generator::RandomPlanar => (0..count)
            .map(|_| {
                let points = (0..arity).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
                Sample::Planar(PlanarConfig { points })
            })
            .collect(),
    };
    let values: Vec<(f64, Option<Rational>)> = samples
        .par_iter()
        .map(|s| match s {
            Sample::Space(space) => sgr(space, opts).map(|r| (to_f64(&r), Some(r))),
            Sample::Planar(c) => ssr_planar(c, opts).map(|r| (r, None)),
        })
        .collect::<Result<_, _>>()?;
    let (argmin, (min, min_exact)) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .map(|(i, v)| (i, v.clone()))
        .unwrap_or((0, (f64::NAN, None)));
    let (ratio, bound) = match generator {
        Generator::RandomPlanar => ("ssr", 3f64.sqrt() / 2.0 - PLANAR_BOUND_SLACK),
        _ => ("sgr", 0.5),
    };
    let violations = values
        .iter()
        .filter(|(v, exact)| match exact {
            Some(r) => *r <= crate::rational::half(),
            None => *v < bound,
        })
        .count();
    let argmin_input = match samples.get(argmin) {
        Some(Sample::Space(s)) => s.to_json_value(),
        Some(Sample::Planar(c)) => serde_json::to_value(c).expect("finite points"),
        None => serde_json::Value::Null,
    };
    let floats: Vec<f64> = values.iter().map(|v| v.0).collect();
    Ok(RatioSummary {
        generator,
        ratio,
        arity,
        samples: values.len(),
        min,
        min_exact: min_exact.as_ref().map(format_rational),
        argmin,
        argmin_input,
        bound,
        violations,
        histogram: if floats.is_empty() { Vec::new() } else { histogram(&floats, min) },
        values: floats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_point_space, planar_space};
    use crate::rational::frac;

    const H: f64 = 0.866_025_403_784_438_6;

    #[test]
    fn simplex_ratios() {
        let opts = SweepOptions::default();
        assert_eq!(sgr(&simplex(4, rat(1)), &opts).unwrap(), frac(2, 3));
        assert_eq!(sgr(&simplex(2, rat(5)), &opts).unwrap(), rat(1));
        assert_eq!(sgr(&five_point_space(), &opts).unwrap(), frac(13, 16));
        let one = simplex(1, rat(1));
        assert_eq!(sgr(&one, &opts).unwrap_err(), EmbedError::Trivial);
    }

    #[test]
    fn triangle_formula() {
        // (d1 + d2 + d3) / (2 (d1 + d2)) for d1 ≤ d2 ≤ d3
        let s = PseudoMetricSpace::from_matrix(vec![
            vec![rat(0), rat(3), rat(4)],
            vec![rat(3), rat(0), rat(5)],
            vec![rat(4), rat(5), rat(0)],
        ])
        .unwrap();
        assert_eq!(sgr(&s, &SweepOptions::default()).unwrap(), frac(12, 14));
    }

    #[test]
    fn planar_ratios() {
        let opts = SweepOptions::default();
        let tri = PlanarConfig::new(vec![[0.0, 0.0], [1.0, 0.0], [0.5, H]]).unwrap();
        assert!((ssr_planar(&tri, &opts).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-9);
        let square = PlanarConfig::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let expected = (1.0 + 2f64.sqrt()) / (1.0 + 3f64.sqrt());
        assert!((ssr_planar(&square, &opts).unwrap() - expected).abs() < 1e-8);
        assert_eq!(planar_space(&square.points), square.to_space());
    }

    #[test]
    fn sweeps_are_reproducible() {
        let opts = SweepOptions::default();
        let a = ratio_sweep(Generator::RandomMetric, 30, 4, 7, &opts).unwrap();
        let b = ratio_sweep(Generator::RandomMetric, 30, 4, 7, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        assert!(a.min > 0.5);
        assert_eq!(a.histogram.iter().map(|b| b.count).sum::<usize>(), 30);
        let p = ratio_sweep(Generator::RandomPlanar, 20, 3, 1, &opts).unwrap();
        assert_eq!((p.ratio, p.violations), ("ssr", 0));
        assert!(ratio_sweep(Generator::RandomPlanar, 1, 7, 1, &opts).is_err());
    }
}
