//! Binary topologies by leaf insertion.
//!
//! Point `k` (for `k ≥ 3`) is inserted by subdividing one of the `2k − 3`
//! edges of a tree on points `0..k`. A topology index in
//! `0..(2n−5)!!` is the mixed-radix number of those edge choices, which
//! makes shards cheap: shard `i` of `k` takes the indices `≡ i (mod k)`.

use super::topology::{BinaryTopology, TreeTopology};
use super::TreeError;

/// Default cap on the point count for topology enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// `(2n − 5)!!`, the number of binary topologies on `n ≥ 3` labelled
/// leaves; 1 for `n ≤ 3`.
pub fn binary_count(n: usize) -> usize {
    (3..n).map(|k| 2 * k - 3).product()
}

/// The binary topology with the given insertion index. Points sit on
/// vertices `0..n`; interior vertices are `n..2n−2`.
pub fn binary_from_index(n: usize, mut index: usize) -> BinaryTopology {
    if n <= 2 {
        return BinaryTopology::new(TreeTopology::star(n)).expect("trivial trees are binary");
    }
    let mut edges: Vec<(usize, usize)> = vec![(0, n), (1, n), (2, n)];
    for k in 3..n {
        let radix = 2 * k - 3;
        let c = index % radix;
        index /= radix;
        let w = n + k - 2;
        let (a, b) = edges[c];
        edges[c] = (a, w);
        edges.push((w, b));
        edges.push((k, w));
    }
    let t = TreeTopology::new(2 * n - 2, edges, (0..n).collect()).expect("insertion builds a tree");
    BinaryTopology::new(t).expect("insertion keeps degrees at 3")
}

fn check_cap(n: usize, cap: usize) -> Result<(), TreeError> {
    if n > cap {
        return Err(TreeError::TooLarge { n, cap });
    }
    Ok(())
}

/// All binary topologies on `n` points, sorted by canonical key.
pub fn enumerate_binary(n: usize, cap: usize) -> Result<Vec<BinaryTopology>, TreeError> {
    check_cap(n, cap)?;
    let mut all: Vec<_> = (0..binary_count(n))
        .map(|i| {
            let t = binary_from_index(n, i);
            (t.canonical_key(), t)
        })
        .collect();
    all.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(all.into_iter().map(|(_, t)| t).collect())
}

/// Insertion indices of shard `shard` out of `of`.
pub fn shard_indices(n: usize, shard: usize, of: usize) -> impl Iterator<Item = usize> {
    let of = of.max(1);
    (shard..binary_count(n)).step_by(of)
}

/// Topologies of one shard, in insertion order.
pub fn enumerate_shard(
    n: usize,
    shard: usize,
    of: usize,
    cap: usize,
) -> Result<impl Iterator<Item = BinaryTopology>, TreeError> {
    check_cap(n, cap)?;
    Ok(shard_indices(n, shard, of).map(move |i| binary_from_index(n, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_binary(3, 10).unwrap().len(), 1);
        assert_eq!(enumerate_binary(4, 10).unwrap().len(), 3);
        assert_eq!(enumerate_binary(6, 10).unwrap().len(), 105);
        assert_eq!(binary_count(9), 135135);
        assert!(matches!(enumerate_binary(11, 10), Err(TreeError::TooLarge { n: 11, cap: 10 })));
    }

    #[test]
    fn all_distinct_and_sorted() {
        for n in 3..=7 {
            let all = enumerate_binary(n, 10).unwrap();
            let keys: Vec<_> = all.iter().map(|t| t.canonical_key()).collect();
            let set: BTreeSet<_> = keys.iter().cloned().collect();
            assert_eq!(set.len(), keys.len());
            assert!(keys.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn shards_partition() {
        let mut seen = BTreeSet::new();
        for s in 0..4 {
            for t in enumerate_shard(6, s, 4, 10).unwrap() {
                assert!(seen.insert(t.canonical_key()));
            }
        }
        assert_eq!(seen.len(), 105);
    }

    #[test]
    fn tiny_cases() {
        assert_eq!(enumerate_binary(2, 10).unwrap()[0].edge_count(), 1);
        assert_eq!(enumerate_binary(1, 10).unwrap()[0].vertex_count(), 1);
    }
}
