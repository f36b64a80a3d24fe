use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

use minfill::embed::PlanarConfig;
use minfill::metric::PseudoMetricSpace;
use minfill::trees::serialize::{deserialize_with_labels, parse_newick};
use minfill::trees::{Split, TreeTopology};

use crate::error::{domain, invalid_space, CliError};

pub struct Input {
    pub space: PseudoMetricSpace,
    pub planar: Option<PlanarConfig>,
}

fn read(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Space JSON, CSV or a planar configuration (float mode only).
pub fn load(path: &Path, float: bool) -> Result<Input, CliError> {
    let text = read(path)?;
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') {
        let space = PseudoMetricSpace::from_csv_str(&text, float).map_err(invalid_space)?;
        return Ok(Input { space, planar: None });
    }
    let value: Value = serde_json::from_str(trimmed)
        .map_err(|e| invalid_space(minfill::metric::SpaceError::Malformed(e.to_string())))?;
    if value.get("points").is_some() {
        if !float {
            return Err(CliError::usage("planar configurations have irrational distances; use --mode float"));
        }
        let config: PlanarConfig = serde_json::from_value(value)
            .map_err(|e| invalid_space(minfill::metric::SpaceError::Malformed(e.to_string())))?;
        let config = PlanarConfig::new(config.points).map_err(domain)?;
        if config.is_empty() {
            return Err(invalid_space(minfill::metric::SpaceError::Empty));
        }
        return Ok(Input {
            space: config.to_space(),
            planar: Some(config),
        });
    }
    let space = PseudoMetricSpace::from_json_str(trimmed, float).map_err(invalid_space)?;
    Ok(Input { space, planar: None })
}

pub fn digest(space: &PseudoMetricSpace) -> String {
    let bytes = Sha256::digest(space.to_json_value().to_string().as_bytes());
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn label_index(space: &PseudoMetricSpace, label: &str) -> Result<usize, CliError> {
    space
        .index_of(label.trim())
        .ok_or_else(|| CliError::usage(format!("unknown label `{}` in topology", label.trim())))
}

/// A topology given as a tree file (JSON or Newick), inline Newick, or
/// space-separated splits such as `1,2|3,4,5 1,2,4|3,5`. Split lists
/// describe leaf-labelled trees, so every trivial split is implied.
pub fn topology(arg: &str, space: &PseudoMetricSpace) -> Result<TreeTopology, CliError> {
    let labels = space.labels();
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(deserialize_with_labels(text, labels).map_err(domain)?.topology().clone());
    }
    if text.starts_with('(') {
        return Ok(parse_newick(text, Some(labels)).map_err(domain)?.tree.topology().clone());
    }
    let mut splits = Vec::new();
    for part in text.split(|c: char| c.is_whitespace() || c == ';').filter(|s| !s.is_empty()) {
        let (a, b) = part
            .split_once('|')
            .ok_or_else(|| CliError::usage(format!("split `{part}` needs a `|`")))?;
        let side = |s: &str| -> Result<Vec<usize>, CliError> {
            s.split(',').filter(|x| !x.is_empty()).map(|x| label_index(space, x)).collect()
        };
        splits.push(Split::new(side(a)?, side(b)?));
    }
    let n = space.n();
    for p in 0..n {
        splits.push(Split::new(vec![p], (0..n).filter(|&x| x != p).collect()));
    }
    splits.sort();
    splits.dedup();
    TreeTopology::from_splits(space.n(), &splits).map_err(domain)
}
