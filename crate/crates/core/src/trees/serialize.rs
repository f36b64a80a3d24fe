//! Weighted-tree text formats.
//!
//! JSON: `{"vertices": k, "boundary": {"v": "label" | ["label", ...]},
//! "edges": [[u, v, "p/q"], ...]}` with an optional `"mode": "generalized"`
//! for signed trees. Newick export is provided for leaf-boundary trees.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use super::topology::TreeTopology;
use super::weighted::{WeightMode, WeightedTree};
use super::TreeError;
use crate::rational::{format_rational, from_json_value, parse_rational, to_f64, Rational};

fn parse_err(position: impl Into<String>, message: impl Into<String>) -> TreeError {
    TreeError::Parse {
        position: position.into(),
        message: message.into(),
    }
}

pub fn to_json_value(tree: &WeightedTree, labels: &[String]) -> Value {
    let t = tree.topology();
    let mut boundary = Map::new();
    for v in 0..t.vertex_count() {
        let ps = t.points_at(v);
        match ps.len() {
            0 => {}
            1 => {
                boundary.insert(v.to_string(), json!(labels[ps[0]]));
            }
            _ => {
                boundary.insert(v.to_string(), json!(ps.iter().map(|&p| &labels[p]).collect::<Vec<_>>()));
            }
        }
    }
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .zip(tree.weights())
        .map(|(&(u, v), w)| json!([u, v, format_rational(w)]))
        .collect();
    let mut out = Map::new();
    out.insert("vertices".into(), json!(t.vertex_count()));
    out.insert("boundary".into(), Value::Object(boundary));
    out.insert("edges".into(), Value::Array(edges));
    if tree.mode() == WeightMode::Generalized {
        out.insert("mode".into(), json!("generalized"));
    }
    Value::Object(out)
}

pub fn serialize(tree: &WeightedTree, labels: &[String]) -> String {
    to_json_value(tree, labels).to_string()
}

/// Parses a tree whose boundary labels are resolved against `labels`.
pub fn deserialize_with_labels(text: &str, labels: &[String]) -> Result<WeightedTree, TreeError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    from_json_value_with(&value, Some(labels)).map(|(t, _)| t)
}

/// Parses a tree and returns it with its labels. Labels `1..=n` map to
/// points `0..n`; other label sets are numbered in order of appearance.
pub fn deserialize(text: &str) -> Result<(WeightedTree, Vec<String>), TreeError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    from_json_value_with(&value, None)
}

pub fn from_json(value: &Value, labels: Option<&[String]>) -> Result<(WeightedTree, Vec<String>), TreeError> {
    from_json_value_with(value, labels)
}

fn from_json_value_with(value: &Value, labels: Option<&[String]>) -> Result<(WeightedTree, Vec<String>), TreeError> {
    let obj = value.as_object().ok_or_else(|| parse_err("$", "expected an object"))?;
    let k = obj
        .get("vertices")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("vertices", "expected a vertex count"))? as usize;
    let boundary = obj
        .get("boundary")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("boundary", "expected an object"))?;
    let mut placed: Vec<(usize, String)> = Vec::new();
    let mut by_vertex: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (key, v) in boundary {
        let vertex: usize = key
            .parse()
            .map_err(|_| parse_err(format!("boundary.{key}"), "vertex key is not an index"))?;
        let names: Vec<String> = match v {
            Value::String(s) => vec![s.clone()],
            Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| parse_err(format!("boundary.{key}"), "labels must be strings"))
                })
                .collect::<Result<_, _>>()?,
            _ => return Err(parse_err(format!("boundary.{key}"), "expected a label or list of labels")),
        };
        by_vertex.entry(vertex).or_default().extend(names);
    }
    for (v, names) in by_vertex {
        for name in names {
            placed.push((v, name));
        }
    }
    let label_list: Vec<String> = match labels {
        Some(l) => l.to_vec(),
        None => {
            let mut names: Vec<String> = placed.iter().map(|(_, s)| s.clone()).collect();
            let numeric: Option<Vec<usize>> = names.iter().map(|s| s.parse::<usize>().ok()).collect();
            if let Some(mut nums) = numeric {
                nums.sort_unstable();
                if nums.iter().enumerate().all(|(i, &x)| x == i + 1) {
                    names = (1..=nums.len()).map(|i| i.to_string()).collect();
                }
            }
            names
        }
    };
    let mut point_vertex = vec![usize::MAX; label_list.len()];
    for (v, name) in &placed {
        let p = label_list
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| parse_err("boundary", format!("unknown label `{name}`")))?;
        if point_vertex[p] != usize::MAX {
            return Err(parse_err("boundary", format!("label `{name}` appears twice")));
        }
        point_vertex[p] = *v;
    }
    if let Some(p) = point_vertex.iter().position(|&v| v == usize::MAX) {
        return Err(parse_err("boundary", format!("label `{}` is not placed", label_list[p])));
    }
    let edges_v = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("edges", "expected an array"))?;
    let mut edges = Vec::with_capacity(edges_v.len());
    let mut weights = Vec::with_capacity(edges_v.len());
    for (i, e) in edges_v.iter().enumerate() {
        let arr = e
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| parse_err(format!("edges[{i}]"), "expected [u, v, weight]"))?;
        let u = arr[0].as_u64().ok_or_else(|| parse_err(format!("edges[{i}][0]"), "expected a vertex"))?;
        let v = arr[1].as_u64().ok_or_else(|| parse_err(format!("edges[{i}][1]"), "expected a vertex"))?;
        let w = from_json_value(&arr[2], false).map_err(|m| parse_err(format!("edges[{i}][2]"), m))?;
        edges.push((u as usize, v as usize));
        weights.push(w);
    }
    let topology = TreeTopology::new(k, edges, point_vertex).map_err(|e| parse_err("$", e.to_string()))?;
    let tree = match obj.get("mode").and_then(Value::as_str) {
        Some("generalized") => WeightedTree::new(topology, weights, WeightMode::Generalized),
        Some("filling") => WeightedTree::new(topology, weights, WeightMode::Filling),
        Some(other) => return Err(parse_err("mode", format!("unknown mode `{other}`"))),
        None => WeightedTree::auto(topology, weights),
    }
    .map_err(|e| parse_err("edges", e.to_string()))?;
    Ok((tree, label_list))
}

/// Parenthesised export with float branch lengths. Needs a tree whose
/// boundary points sit on distinct leaves.
pub fn to_newick(tree: &WeightedTree, labels: &[String]) -> Result<String, TreeError> {
    let t = tree.topology();
    if !t.has_leaf_boundary() {
        return Err(TreeError::Invalid("newick export needs leaf boundary".into()));
    }
    let n = t.point_count();
    if n == 1 {
        return Ok(format!("{};", labels[0]));
    }
    let leaf0 = t.vertex_of(0);
    let root = if n == 2 { leaf0 } else { t.neighbors(leaf0)[0].0 };
    let mut out = String::new();
    write_node(tree, labels, root, None, &mut out);
    out.push(';');
    Ok(out)
}

fn min_point_below(t: &TreeTopology, v: usize, parent: usize) -> usize {
    let mut best = t.points_at(v).iter().copied().min().unwrap_or(usize::MAX);
    for &(w, _) in t.neighbors(v) {
        if w != parent {
            best = best.min(min_point_below(t, w, v));
        }
    }
    best
}

fn write_node(tree: &WeightedTree, labels: &[String], v: usize, via: Option<(usize, usize)>, out: &mut String) {
    let t = tree.topology();
    let parent = via.map(|(p, _)| p).unwrap_or(usize::MAX);
    let mut children: Vec<(usize, usize)> = t.neighbors(v).iter().copied().filter(|&(w, _)| w != parent).collect();
    children.sort_by_key(|&(w, _)| min_point_below(t, w, v));
    if !children.is_empty() {
        out.push('(');
        for (i, &(w, e)) in children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_node(tree, labels, w, Some((v, e)), out);
        }
        out.push(')');
    }
    if let Some(&p) = t.points_at(v).first() {
        out.push_str(&labels[p]);
    }
    if let Some((_, e)) = via {
        out.push(':');
        out.push_str(&to_f64(tree.weight(e)).to_string());
    }
}

/// Result of parsing Newick text.
#[derive(Debug, Clone)]
pub struct NewickTree {
    pub tree: WeightedTree,
    /// Whether every branch carried a length.
    pub has_lengths: bool,
}

/// Parses Newick text. Labels resolve against `labels` when given, and
/// otherwise must be `1..=n`. Branch lengths are read exactly; missing
/// lengths count as zero. A degree-2 unlabelled root is suppressed.
pub fn parse_newick(text: &str, labels: Option<&[String]>) -> Result<NewickTree, TreeError> {
    let mut p = NewickParser {
        s: text.trim().as_bytes(),
        i: 0,
        edges: Vec::new(),
        weights: Vec::new(),
        names: Vec::new(),
        vertex_count: 0,
        all_lengths: true,
    };
    let root = p.node()?;
    let _ = root;
    p.skip_ws();
    if p.peek() != Some(b';') {
        return Err(parse_err(format!("offset {}", p.i), "expected `;`"));
    }
    let n = p.names.len();
    let label_list: Vec<String> = match labels {
        Some(l) => l.to_vec(),
        None => (1..=n).map(|i| i.to_string()).collect(),
    };
    let mut point_vertex = vec![usize::MAX; label_list.len()];
    for (v, name) in &p.names {
        let idx = label_list
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| parse_err("labels", format!("unknown label `{name}`")))?;
        if point_vertex[idx] != usize::MAX {
            return Err(parse_err("labels", format!("label `{name}` appears twice")));
        }
        point_vertex[idx] = *v;
    }
    if let Some(idx) = point_vertex.iter().position(|&v| v == usize::MAX) {
        return Err(parse_err("labels", format!("label `{}` is missing", label_list[idx])));
    }
    let raw = TreeTopology::build(p.vertex_count, p.edges, point_vertex).map_err(|e| parse_err("$", e.to_string()))?;
    let raw = WeightedTree::auto(raw, p.weights).map_err(|e| parse_err("$", e.to_string()))?;
    let (tree, _) = raw.suppress_false_vertices();
    TreeTopology::new(
        tree.topology().vertex_count(),
        tree.topology().edges().to_vec(),
        tree.topology().point_vertex().to_vec(),
    )
    .map_err(|e| parse_err("$", e.to_string()))?;
    Ok(NewickTree {
        tree,
        has_lengths: p.all_lengths,
    })
}

struct NewickParser<'a> {
    s: &'a [u8],
    i: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<Rational>,
    names: Vec<(usize, String)>,
    vertex_count: usize,
    all_lengths: bool,
}

impl NewickParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.i;
        while self.peek().is_some_and(|c| !b"(),:;".contains(&c)) {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.i]).trim().to_string()
    }

    /// Parses one subtree and returns its vertex.
    fn node(&mut self) -> Result<usize, TreeError> {
        let v = self.vertex_count;
        self.vertex_count += 1;
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.i += 1;
            loop {
                let child = self.node()?;
                self.skip_ws();
                let length = if self.peek() == Some(b':') {
                    self.i += 1;
                    let at = self.i;
                    let tok = self.token();
                    parse_rational(&tok).map_err(|_| parse_err(format!("offset {at}"), format!("bad length `{tok}`")))?
                } else {
                    self.all_lengths = false;
                    Rational::zero()
                };
                self.edges.push((v, child));
                self.weights.push(length);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.i += 1,
                    Some(b')') => {
                        self.i += 1;
                        break;
                    }
                    _ => return Err(parse_err(format!("offset {}", self.i), "expected `,` or `)`")),
                }
            }
        }
        let name = self.token();
        if !name.is_empty() {
            self.names.push((v, name));
        } else if self.edges.iter().all(|&(a, _)| a != v) {
            return Err(parse_err(format!("offset {}", self.i), "leaf without a label"));
        }
        Ok(v)
    }
}
