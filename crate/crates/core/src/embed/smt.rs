use rayon::prelude::*;
use serde::Serialize;

use super::EmbedError;
use crate::trees::{enumerate_binary, TreeTopology};

pub const MAX_SMT_POINTS: usize = 6;
const MAX_ITERATIONS: usize = 200_000;
/// Steiner points closer than this to a neighbour are merged with it.
const MERGE: f64 = 1e-9;

/// Shortest network found, with vertex positions (points first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmtResult {
    pub length: f64,
    #[serde(skip)]
    pub topology: TreeTopology,
    pub positions: Vec<[f64; 2]>,
    pub edges: Vec<(usize, usize)>,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn sorted_sum(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs.into_iter().sum()
}

fn network_length(t: &TreeTopology, pos: &[[f64; 2]]) -> f64 {
    sorted_sum(
        t.edges()
            .iter()
            .map(|&(u, v)| {
                let d = dist(pos[u], pos[v]);
                if d < MERGE {
                    0.0
                } else {
                    d
                }
            })
            .collect(),
    )
}

/// Solves the dense system in place by Gaussian elimination.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let k = b.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            if f == 0.0 {
                continue;
            }
            for j in c..k {
                a[r][j] -= f * a[c][j];
            }
            b[r][0] -= f * b[c][0];
            b[r][1] -= f * b[c][1];
        }
    }
    let mut x = vec![[0.0; 2]; k];
    for r in (0..k).rev() {
        let mut s = b[r];
        for j in r + 1..k {
            s[0] -= a[r][j] * x[j][0];
            s[1] -= a[r][j] * x[j][1];
        }
        x[r] = [s[0] / a[r][r], s[1] / a[r][r]];
    }
    x
}

/// Point minimizing the summed distance to three points.
fn fermat_point(p: [[f64; 2]; 3]) -> [f64; 2] {
    let side = [dist(p[1], p[2]), dist(p[0], p[2]), dist(p[0], p[1])];
    let limit = 2.0 * std::f64::consts::PI / 3.0 - 1e-12;
    let mut angles = [0.0; 3];
    for i in 0..3 {
        let (x, y) = (side[(i + 1) % 3], side[(i + 2) % 3]);
        if x == 0.0 || y == 0.0 {
            return p[i];
        }
        angles[i] = angle_at(x, y, side[i]);
        if angles[i] >= limit {
            return p[i];
        }
    }
    // barycentric weights a / sin(A + π/3)
    let w: Vec<f64> = (0..3)
        .map(|i| side[i] / (angles[i] + std::f64::consts::FRAC_PI_3).sin())
        .collect();
    let total: f64 = w.iter().sum();
    [
        (0..3).map(|i| w[i] * p[i][0]).sum::<f64>() / total,
        (0..3).map(|i| w[i] * p[i][1]).sum::<f64>() / total,
    ]
}

/// One reweighted least squares step moving all Steiner points at once.
fn joint_step(t: &TreeTopology, pos: &mut [[f64; 2]], n: usize, floor: f64) {
    let k = pos.len() - n;
    let mut a = vec![vec![0.0; k]; k];
    let mut b = vec![[0.0; 2]; k];
    for &(u, v) in t.edges() {
        let w = 1.0 / dist(pos[u], pos[v]).max(floor);
        for (x, y) in [(u, v), (v, u)] {
            if x < n {
                continue;
            }
            a[x - n][x - n] += w;
            if y < n {
                b[x - n][0] += w * pos[y][0];
                b[x - n][1] += w * pos[y][1];
            } else {
                a[x - n][y - n] -= w;
            }
        }
    }
    for (i, p) in solve(a, b).into_iter().enumerate() {
        pos[n + i] = p;
    }
}

/// Minimizes total length over the Steiner positions of a full topology
/// whose leaves `0..n` carry the points. Alternates a joint reweighted step
/// with moving each Steiner point to the Fermat point of its neighbours;
/// both never increase the length.
fn optimize(t: &TreeTopology, points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>, EmbedError> {
    let n = points.len();
    let k = t.vertex_count() - n;
    let scale = points
        .iter()
        .flat_map(|p| points.iter().map(move |q| dist(*p, *q)))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut pos: Vec<[f64; 2]> = points.to_vec();
    // start each Steiner point at a mean of the terminals, weighted by closeness in the tree
    for s in n..n + k {
        let rooted = t.rooted(s);
        let mut depth = vec![0i32; t.vertex_count()];
        for &v in &rooted.order {
            if let Some((p, _)) = rooted.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        let (mut x, mut y, mut w) = (0.0, 0.0, 0.0);
        for (i, p) in points.iter().enumerate() {
            let c = 2f64.powi(-depth[t.vertex_of(i)]);
            x += c * p[0];
            y += c * p[1];
            w += c;
        }
        pos.push([x / w, y / w]);
    }
    if k == 0 {
        return Ok(pos);
    }
    let mut length = network_length(t, &pos);
    let mut stalled = 0;
    for _ in 0..MAX_ITERATIONS {
        let before = pos.clone();
        joint_step(t, &mut pos, n, 1e-15 * scale);
        if network_length(t, &pos) > length {
            pos.clone_from(&before);
        }
        for s in n..n + k {
            let nb = t.neighbors(s);
            pos[s] = fermat_point([pos[nb[0].0], pos[nb[1].0], pos[nb[2].0]]);
        }
        let next = network_length(t, &pos);
        let moved = before.iter().zip(&pos).map(|(a, b)| dist(*a, *b)).fold(0.0, f64::max);
        if moved <= 1e-15 * scale || length - next <= 1e-16 * scale {
            stalled += 1;
            if stalled >= 20 {
                return Ok(pos);
            }
        } else {
            stalled = 0;
        }
        length = next;
    }
    if max_gradient(t, &pos, n) <= 1e-10 {
        Ok(pos)
    } else {
        Err(EmbedError::NonConvergence)
    }
}

/// Largest gradient norm at a Steiner point not merged with a neighbour.
pub(crate) fn max_gradient(t: &TreeTopology, pos: &[[f64; 2]], n: usize) -> f64 {
    (n..t.vertex_count())
        .filter(|&s| t.neighbors(s).iter().all(|&(w, _)| dist(pos[s], pos[w]) >= MERGE))
        .map(|s| {
            let g = t.neighbors(s).iter().fold([0.0, 0.0], |g, &(w, _)| {
                let d = dist(pos[s], pos[w]);
                [g[0] + (pos[s][0] - pos[w][0]) / d, g[1] + (pos[s][1] - pos[w][1]) / d]
            });
            g[0].hypot(g[1])
        })
        .fold(0.0, f64::max)
}

fn angle_at(a: f64, b: f64, opposite: f64) -> f64 {
    ((a * a + b * b - opposite * opposite) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

/// Length of the shortest network on three points.
pub(crate) fn smt_three(p: &[[f64; 2]]) -> f64 {
    let a = dist(p[1], p[2]);
    let b = dist(p[0], p[2]);
    let c = dist(p[0], p[1]);
    let limit = 2.0 * std::f64::consts::PI / 3.0;
    // angle at each vertex with its two adjacent sides
    for (x, y, opp) in [(b, c, a), (a, c, b), (a, b, c)] {
        if x > 0.0 && y > 0.0 && angle_at(x, y, opp) >= limit {
            return x + y;
        }
    }
    if a == 0.0 || b == 0.0 || c == 0.0 {
        return sorted_sum(vec![a, b, c]) - a.max(b).max(c);
    }
    let area = ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs() / 2.0;
    ((a * a + b * b + c * c) / 2.0 + 2.0 * 3f64.sqrt() * area).sqrt()
}

/// Euclidean Steiner minimal tree of 2 to 6 points, by optimizing every
/// full topology.
pub fn smt_planar(points: &[[f64; 2]]) -> Result<SmtResult, EmbedError> {
    let n = points.len();
    if !(2..=MAX_SMT_POINTS).contains(&n) {
        return Err(EmbedError::TooManyPoints {
            n,
            min: 2,
            max: MAX_SMT_POINTS,
        });
    }
    if points.iter().flatten().any(|c| !c.is_finite()) {
        return Err(EmbedError::NonFinite);
    }
    let topologies: Vec<TreeTopology> = if n == 2 {
        vec![TreeTopology::star(2)]
    } else {
        enumerate_binary(n, MAX_SMT_POINTS)
            .expect("within cap")
            .into_iter()
            .map(|b| b.into_inner())
            .collect()
    };
    let results: Vec<Result<(f64, Vec<[f64; 2]>), EmbedError>> = topologies
        .par_iter()
        .map(|t| {
            let pos = optimize(t, points)?;
            Ok((network_length(t, &pos), pos))
        })
        .collect();
    let mut best: Option<(usize, f64, Vec<[f64; 2]>)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let (len, pos) = r?;
        if best.as_ref().map_or(true, |b| len < b.1) {
            best = Some((i, len, pos));
        }
    }
    let (i, mut length, positions) = best.expect("at least one topology");
    if n == 3 {
        length = smt_three(points);
    }
    let topology = topologies[i].clone();
    Ok(SmtResult {
        length,
        edges: topology.edges().to_vec(),
        topology,
        positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = 0.866_025_403_784_438_6;

    #[test]
    fn equilateral() {
        let p = [[0.0, 0.0], [1.0, 0.0], [0.5, H]];
        let r = smt_planar(&p).unwrap();
        assert!((r.length - 3f64.sqrt()).abs() < 1e-9);
        let numeric = network_length(&r.topology, &r.positions);
        assert!((numeric - r.length).abs() < 1e-7);
    }

    #[test]
    fn unit_square() {
        let p = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let r = smt_planar(&p).unwrap();
        assert!((r.length - (1.0 + 3f64.sqrt())).abs() < 1e-8, "{}", r.length);
        assert!(max_gradient(&r.topology, &r.positions, 4) <= 1e-10);
    }

    #[test]
    fn obtuse_triangle_uses_two_sides() {
        let p = [[0.0, 0.0], [2.0, 0.0], [-1.0, 0.2]];
        let r = smt_planar(&p).unwrap();
        let expected = 2.0 + (1.0f64 + 0.04).sqrt();
        assert!((r.length - expected).abs() < 1e-12);
        let numeric = network_length(&r.topology, &r.positions);
        assert!((numeric - expected).abs() < 1e-7, "{numeric}");
    }

    #[test]
    fn two_points_and_bounds() {
        assert_eq!(smt_planar(&[[0.0, 0.0], [3.0, 4.0]]).unwrap().length, 5.0);
        assert!(matches!(smt_planar(&[[0.0, 0.0]]), Err(EmbedError::TooManyPoints { .. })));
        assert!(matches!(smt_planar(&[[0.0, 0.0]; 7]), Err(EmbedError::TooManyPoints { .. })));
    }

    #[test]
    fn collinear_and_repeated_points() {
        let r = smt_planar(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0], [6.0, 0.0]]).unwrap();
        assert!((r.length - 6.0).abs() < 1e-8, "{}", r.length);
        let r = smt_planar(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!((r.length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_pentagon_and_hexagon() {
        for n in [5usize, 6] {
            let p: Vec<[f64; 2]> = (0..n)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    [a.cos(), a.sin()]
                })
                .collect();
            let r = smt_planar(&p).unwrap();
            let perimeter = 2.0 * (std::f64::consts::PI / n as f64).sin() * n as f64;
            // shorter than the spanning path, longer than half the perimeter
            assert!(r.length < perimeter * (n - 1) as f64 / n as f64 + 1e-12);
            assert!(r.length > perimeter / 2.0);
        }
    }
}
