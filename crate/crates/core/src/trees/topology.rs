use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use super::TreeError;

/// A boundary bipartition `{small | large}` of point indices. Sides are
/// sorted; the smaller side comes first, and on equal sizes the
/// lexicographically smaller side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Split {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
}

impl Split {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>) -> Split {
        a.sort_unstable();
        b.sort_unstable();
        if (b.len(), &b) < (a.len(), &a) {
            std::mem::swap(&mut a, &mut b);
        }
        Split { small: a, large: b }
    }

    pub fn is_trivial(&self) -> bool {
        self.small.len() <= 1
    }

    pub fn side_of(&self, p: usize) -> Option<bool> {
        if self.small.binary_search(&p).is_ok() {
            Some(true)
        } else if self.large.binary_search(&p).is_ok() {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| s.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", side(&self.small), side(&self.large))
    }
}

/// Canonical encoding of a boundary-labelled tree: its sorted split set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TopologyKey(pub Vec<Split>);

impl fmt::Display for TopologyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A tree whose vertices may carry boundary points. Every vertex of degree
/// one or two carries at least one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTopology {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    point_vertex: Vec<usize>,
    adj: Vec<Vec<(usize, usize)>>,
    vertex_points: Vec<Vec<usize>>,
}

impl TreeTopology {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        point_vertex: Vec<usize>,
    ) -> Result<Self, TreeError> {
        let t = Self::build(vertex_count, edges, point_vertex)?;
        for v in 0..t.vertex_count {
            if t.degree(v) <= 2 && t.vertex_points[v].is_empty() {
                return Err(TreeError::Invalid(format!(
                    "vertex {v} has degree {} but carries no boundary point",
                    t.degree(v)
                )));
            }
        }
        Ok(t)
    }

    /// Like [`TreeTopology::new`] without the boundary condition on low
    /// degree vertices.
    pub(crate) fn build(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        point_vertex: Vec<usize>,
    ) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::Invalid("no vertices".into()));
        }
        if edges.len() + 1 != vertex_count {
            return Err(TreeError::Invalid(format!(
                "{} edges for {} vertices",
                edges.len(),
                vertex_count
            )));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(TreeError::Invalid(format!("bad edge {e}: ({u},{v})")));
            }
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        if count != vertex_count {
            return Err(TreeError::Invalid("graph is disconnected".into()));
        }
        let mut vertex_points = vec![Vec::new(); vertex_count];
        for (p, &v) in point_vertex.iter().enumerate() {
            if v >= vertex_count {
                return Err(TreeError::Invalid(format!("point {p} sits on missing vertex {v}")));
            }
            vertex_points[v].push(p);
        }
        Ok(TreeTopology {
            vertex_count,
            edges,
            point_vertex,
            adj,
            vertex_points,
        })
    }

    /// Star on `n` points: points on vertices `0..n`, centre `n`. Two points
    /// give a single edge, one point a single vertex.
    pub fn star(n: usize) -> TreeTopology {
        match n {
            0 | 1 => TreeTopology::new(1, vec![], vec![0; n]).expect("singleton"),
            2 => TreeTopology::new(2, vec![(0, 1)], vec![0, 1]).expect("edge"),
            _ => TreeTopology::new(n + 1, (0..n).map(|i| (i, n)).collect(), (0..n).collect())
                .expect("star"),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn point_count(&self) -> usize {
        self.point_vertex.len()
    }

    pub fn point_vertex(&self) -> &[usize] {
        &self.point_vertex
    }

    pub fn vertex_of(&self, p: usize) -> usize {
        self.point_vertex[p]
    }

    pub fn points_at(&self, v: usize) -> &[usize] {
        &self.vertex_points[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        !self.vertex_points[v].is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `(neighbour, edge)` pairs, in edge order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Every interior vertex has degree 3 and every boundary vertex is a
    /// leaf holding exactly one point.
    pub fn is_binary(&self) -> bool {
        let n = self.point_count();
        if n <= 2 {
            return self.vertex_points.iter().all(|ps| ps.len() == 1) && self.vertex_count == n.max(1);
        }
        (0..self.vertex_count).all(|v| match self.vertex_points[v].len() {
            0 => self.degree(v) == 3,
            1 => self.degree(v) == 1,
            _ => false,
        })
    }

    /// Every boundary vertex has degree at most one and holds one point.
    pub fn has_leaf_boundary(&self) -> bool {
        (0..self.vertex_count).all(|v| self.vertex_points[v].len() <= 1 && (self.vertex_points[v].is_empty() || self.degree(v) <= 1))
    }

    /// Parent links of a traversal rooted at `root`: `(parent, edge)` per
    /// vertex, `None` at the root, plus vertex depths and BFS order.
    pub fn rooted(&self, root: usize) -> Rooted {
        let mut parent = vec![None; self.vertex_count];
        let mut depth = vec![0usize; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut seen = vec![false; self.vertex_count];
        seen[root] = true;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &(w, e) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, e));
                    depth[w] = depth[u] + 1;
                    order.push(w);
                }
            }
        }
        Rooted { parent, depth, order }
    }

    /// Edges on the path between two vertices, from `u` towards `v`.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<usize> {
        self.rooted(u).path_to_root(v).into_iter().rev().collect()
    }

    /// Edges of the tree path between points `p` and `q`.
    pub fn boundary_path(&self, p: usize, q: usize) -> Result<Vec<usize>, TreeError> {
        let n = self.point_count();
        for x in [p, q] {
            if x >= n {
                return Err(TreeError::UnknownPoint(x));
            }
        }
        Ok(self.vertex_path(self.point_vertex[p], self.point_vertex[q]))
    }

    /// Paths for all pairs `p < q` in row-major order.
    pub fn pair_paths(&self) -> Vec<Vec<usize>> {
        let n = self.point_count();
        let rooted = self.rooted(0);
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for p in 0..n {
            for q in p + 1..n {
                out.push(rooted.path_between(self.point_vertex[p], self.point_vertex[q]));
            }
        }
        out
    }

    /// Points on the side of `from` when edge `e` is removed.
    pub(crate) fn side_points(&self, e: usize, from: usize) -> Vec<usize> {
        let (a, b) = self.edges[e];
        let blocked = if from == a { b } else { a };
        let mut out = Vec::new();
        let mut stack = vec![(from, blocked)];
        while let Some((u, prev)) = stack.pop() {
            out.extend_from_slice(&self.vertex_points[u]);
            for &(w, _) in &self.adj[u] {
                if w != prev {
                    stack.push((w, u));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn split(&self, e: usize) -> Result<Split, TreeError> {
        if e >= self.edges.len() {
            return Err(TreeError::UnknownEdge(e));
        }
        let (a, b) = self.edges[e];
        Ok(Split::new(self.side_points(e, a), self.side_points(e, b)))
    }

    pub fn splits(&self) -> Vec<Split> {
        (0..self.edges.len()).map(|e| self.split(e).expect("edge exists")).collect()
    }

    pub fn canonical_key(&self) -> TopologyKey {
        let mut s = self.splits();
        s.sort();
        TopologyKey(s)
    }

    /// Rebuilds the tree carrying exactly the given splits. Vertices are
    /// numbered in construction order.
    pub fn from_splits(n: usize, splits: &[Split]) -> Result<TreeTopology, TreeError> {
        // vertex -> held points; edges as (u, v)
        let mut held: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut sorted = splits.to_vec();
        sorted.sort();
        sorted.dedup();
        for s in &sorted {
            let total = s.small.len() + s.large.len();
            if total != n || s.small.is_empty() || s.small.iter().chain(&s.large).any(|&p| p >= n) {
                return Err(TreeError::Invalid(format!("split {s} is not a bipartition of {n} points")));
            }
            let topo = TreeTopology::build(held.len(), edges.clone(), point_vertex_of(&held, n))?;
            // already present?
            if topo.splits().contains(s) {
                continue;
            }
            let mut placed = false;
            for v in 0..held.len() {
                let mut a_branches = Vec::new();
                let mut clean = true;
                for &(w, e) in topo.neighbors(v) {
                    let side = topo.side_points(e, w);
                    let in_small = side.iter().all(|p| s.small.binary_search(p).is_ok());
                    let in_large = side.iter().all(|p| s.large.binary_search(p).is_ok());
                    if in_small {
                        a_branches.push(e);
                    } else if !in_large {
                        clean = false;
                        break;
                    }
                }
                if !clean {
                    continue;
                }
                let a_points: Vec<usize> = held[v].iter().copied().filter(|p| s.small.binary_search(p).is_ok()).collect();
                let new_v = held.len();
                held[v].retain(|p| s.small.binary_search(p).is_err());
                held.push(a_points);
                for e in a_branches {
                    let (x, y) = edges[e];
                    edges[e] = if x == v { (new_v, y) } else { (x, new_v) };
                }
                edges.push((v, new_v));
                placed = true;
                break;
            }
            if !placed {
                return Err(TreeError::Invalid(format!("split {s} is incompatible with the others")));
            }
        }
        let pv = point_vertex_of(&held, n);
        TreeTopology::new(held.len(), edges, pv)
    }

    /// Same tree up to relabelling of vertices.
    pub fn isomorphic(&self, other: &TreeTopology) -> bool {
        self.point_count() == other.point_count() && self.canonical_key() == other.canonical_key()
    }
}

fn point_vertex_of(held: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut pv = vec![0; n];
    for (v, ps) in held.iter().enumerate() {
        for &p in ps {
            pv[p] = v;
        }
    }
    pv
}

pub struct Rooted {
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    pub order: Vec<usize>,
}

impl Rooted {
    /// Edges from `v` up to the root.
    pub fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[v] {
            out.push(e);
            v = p;
        }
        out
    }

    /// Edges between two vertices, from `u` towards `v`.
    pub fn path_between(&self, mut u: usize, mut v: usize) -> Vec<usize> {
        let mut head = Vec::new();
        let mut tail = Vec::new();
        while self.depth[u] > self.depth[v] {
            let (p, e) = self.parent[u].expect("non-root");
            head.push(e);
            u = p;
        }
        while self.depth[v] > self.depth[u] {
            let (p, e) = self.parent[v].expect("non-root");
            tail.push(e);
            v = p;
        }
        while u != v {
            let (pu, eu) = self.parent[u].expect("non-root");
            let (pv, ev) = self.parent[v].expect("non-root");
            head.push(eu);
            tail.push(ev);
            u = pu;
            v = pv;
        }
        tail.reverse();
        head.extend(tail);
        head
    }
}

/// A tree topology whose interior vertices have degree 3 and whose boundary
/// vertices are leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTopology(TreeTopology);

impl BinaryTopology {
    pub fn new(t: TreeTopology) -> Result<Self, TreeError> {
        if !t.is_binary() {
            return Err(TreeError::NotBinary);
        }
        Ok(BinaryTopology(t))
    }

    pub fn into_inner(self) -> TreeTopology {
        self.0
    }

    pub fn as_topology(&self) -> &TreeTopology {
        &self.0
    }
}

impl Deref for BinaryTopology {
    type Target = TreeTopology;
    fn deref(&self) -> &TreeTopology {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartet() -> TreeTopology {
        // cherries {0,1} and {2,3}
        TreeTopology::new(6, vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)], vec![0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn split_examples() {
        let t = TreeTopology::star(2);
        assert_eq!(t.split(0).unwrap(), Split::new(vec![0], vec![1]));
        let q = quartet();
        assert_eq!(q.split(2).unwrap(), Split::new(vec![0, 1], vec![2, 3]));
        assert_eq!(q.split(3).unwrap(), Split::new(vec![2], vec![0, 1, 3]));
        assert!(matches!(q.split(9), Err(TreeError::UnknownEdge(9))));
    }

    #[test]
    fn split_ordering() {
        let s = Split::new(vec![3, 4], vec![0, 1]);
        assert_eq!(s.small, vec![0, 1]);
        assert_eq!(s.large, vec![3, 4]);
        assert_eq!(Split::new(vec![0, 1, 2], vec![3]).small, vec![3]);
    }

    #[test]
    fn paths() {
        let q = quartet();
        assert_eq!(q.boundary_path(0, 3).unwrap(), vec![0, 2, 4]);
        assert!(q.boundary_path(1, 1).unwrap().is_empty());
        assert!(matches!(q.boundary_path(0, 7), Err(TreeError::UnknownPoint(7))));
        let all = q.pair_paths();
        assert_eq!(all.len(), 6);
        assert_eq!(all[2], vec![0, 2, 4]);
    }

    #[test]
    fn agreement_is_enforced() {
        // interior vertex of degree 2
        let err = TreeTopology::new(4, vec![(0, 2), (2, 3), (3, 1)], vec![0, 1]);
        assert!(err.is_err());
        // cycle-free but disconnected
        assert!(TreeTopology::new(3, vec![(0, 1), (0, 1)], vec![0, 1, 2]).is_err());
    }

    #[test]
    fn splits_round_trip() {
        let q = quartet();
        let rebuilt = TreeTopology::from_splits(4, &q.splits()).unwrap();
        assert!(rebuilt.isomorphic(&q));
        assert!(rebuilt.is_binary());
        // a vertex holding two points
        let t = TreeTopology::new(3, vec![(0, 1), (0, 2)], vec![0, 0, 1, 2]).unwrap();
        let rebuilt = TreeTopology::from_splits(4, &t.splits()).unwrap();
        assert!(rebuilt.isomorphic(&t));
        assert_eq!(rebuilt.points_at(rebuilt.vertex_of(0)), &[0, 1]);
    }
}
