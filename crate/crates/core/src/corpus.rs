//! Enumeration of numerical semigroups by genus along the gap tree.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::semigroup::GoodSemigroup;

/// Largest genus accepted by [`numerical_semigroups_up_to_genus`].
pub const GENUS_GUARD: u64 = 12;

/// A node of the gap tree: the gap set of a numerical semigroup, sorted.
#[derive(Clone, Debug)]
struct Node {
    gaps: Vec<u64>,
}

impl Node {
    fn frobenius(&self) -> Option<u64> {
        self.gaps.last().copied()
    }

    fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }

    /// Minimal generators larger than the Frobenius number.
    fn children(&self) -> Vec<Node> {
        let lo = self.frobenius().map_or(1, |f| f + 1);
        let m = (1..).find(|&n| self.contains(n)).unwrap();
        (lo..lo + m)
            .filter(|&x| (1..x).all(|a| !(self.contains(a) && self.contains(x - a))))
            .map(|x| {
                let mut gaps = self.gaps.clone();
                gaps.push(x);
                Node { gaps }
            })
            .collect()
    }
}

/// Every numerical semigroup of genus at most `max_genus`, ordered by genus
/// and then by the position of its node in a breadth-first walk.
pub fn numerical_semigroups_up_to_genus(max_genus: u64) -> Result<Vec<GoodSemigroup>> {
    if max_genus > GENUS_GUARD {
        return Err(Error::GuardExceeded(format!(
            "genus {max_genus} exceeds the corpus guard {GENUS_GUARD}"
        )));
    }
    let mut level = vec![Node { gaps: Vec::new() }];
    let mut nodes = Vec::new();
    for genus in 0..=max_genus {
        if genus > 0 {
            level = level.iter().flat_map(Node::children).collect();
        }
        nodes.extend(level.iter().cloned());
    }
    nodes
        .par_iter()
        .map(|n| {
            let s = GoodSemigroup::from_gaps(&n.gaps)?;
            GoodSemigroup::from_numerical_generators(&s.minimal_generators()?)
        })
        .collect()
}

/// Count of numerical semigroups of each genus `0..=max_genus`.
pub fn counts_by_genus(max_genus: u64) -> Result<Vec<usize>> {
    let corpus = numerical_semigroups_up_to_genus(max_genus)?;
    let mut counts = vec![0; max_genus as usize + 1];
    for s in &corpus {
        counts[s.delta()? as usize] += 1;
    }
    Ok(counts)
}
