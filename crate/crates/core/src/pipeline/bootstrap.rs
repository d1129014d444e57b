use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

const BOOTSTRAP_STREAM: u64 = 0xB007;

/// Seed of replicate `index` under `master`.
pub fn replicate_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, BOOTSTRAP_STREAM, index)
}

/// One node-bootstrap replicate: `n` nodes drawn with replacement; copy `i`
/// links to copy `j` iff the original nodes are linked. Copies of the same
/// node are never linked to each other.
pub fn bootstrap_replicate(a: &SparseAdjacency, seed: u64) -> SparseAdjacency {
    let n = a.n_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (pos, &v) in sampled.iter().enumerate() {
        copies[v].push(pos);
    }
    let mut pairs = Vec::new();
    for (i, &v) in sampled.iter().enumerate() {
        for &w in a.neighbors(v) {
            pairs.extend(copies[w].iter().map(|&j| (i, j)));
        }
    }
    SparseAdjacency::from_pairs_unchecked(n, pairs, a.is_directed())
}

/// Lazily generated replicates; replicate `r` uses [`replicate_seed`]`(seed, r)`.
pub struct BootstrapStream<'a> {
    source: &'a SparseAdjacency,
    seed: u64,
    next: usize,
    total: usize,
}

impl Iterator for BootstrapStream<'_> {
    type Item = SparseAdjacency;

    fn next(&mut self) -> Option<SparseAdjacency> {
        if self.next >= self.total {
            return None;
        }
        let r = bootstrap_replicate(self.source, replicate_seed(self.seed, self.next as u64));
        self.next += 1;
        Some(r)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for BootstrapStream<'_> {}

pub fn bootstrap_networks(
    a: &SparseAdjacency,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapStream<'_>> {
    if replicates == 0 {
        return Err(Error::param("replicates", "must be at least 1"));
    }
    Ok(BootstrapStream {
        source: a,
        seed,
        next: 0,
        total: replicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_reproducible() {
        let a = SparseAdjacency::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], false)
            .unwrap();
        let first: Vec<_> = bootstrap_networks(&a, 5, 42).unwrap().collect();
        let second: Vec<_> = bootstrap_networks(&a, 5, 42).unwrap().collect();
        assert_eq!(first, second);
        assert!(first.iter().all(|r| r.n_nodes() == 6));
        assert!(bootstrap_networks(&a, 0, 1).is_err());
    }
}
