//! Stochastic block model sampling and the two-group experiment sweeps.
//!
//! Every replicate draws its graph and its SVD start vector from seeds
//! derived from `(master seed, config id, replicate index)`, so result tables
//! do not depend on how replicates are scheduled across threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};
use crate::pipeline::giant_component_nodes;
use crate::report::graph_metrics;
use crate::seed::{derive_seed, mix64};
use crate::svd::SvdOptions;

pub const DEFAULT_IN_PROBS: [f64; 4] = [0.30, 0.35, 0.40, 0.45];
pub const DEFAULT_OUT_PROBS: [f64; 3] = [0.01, 0.05, 0.1];
pub const DEFAULT_IMBALANCE_OUT_PROB: f64 = 0.05;
pub const DEFAULT_SPLITS: [f64; 4] = [0.5, 0.2, 0.1, 0.01];
pub const DEFAULT_NODES: usize = 1000;
pub const DEFAULT_REPLICATES: usize = 100;

/// Undirected SBM: `link_probs[a][b]` is the edge probability between a
/// node of block `a` and a node of block `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmConfig {
    pub block_sizes: Vec<usize>,
    pub link_probs: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SbmConfig {
    pub fn new(block_sizes: Vec<usize>, link_probs: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let c = SbmConfig {
            block_sizes,
            link_probs,
            seed,
        };
        c.validate()?;
        Ok(c)
    }

    /// Two blocks with `p_in` inside each block and `p_out` across.
    pub fn two_block(sizes: [usize; 2], p_in: f64, p_out: f64, seed: u64) -> Result<Self> {
        Self::new(
            sizes.to_vec(),
            vec![vec![p_in, p_out], vec![p_out, p_in]],
            seed,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.block_sizes.len();
        if b == 0 || self.block_sizes.contains(&0) {
            return Err(Error::param(
                "block_sizes",
                "every block needs at least one node",
            ));
        }
        if self.n_nodes() < 2 {
            return Err(Error::param("block_sizes", "an SBM needs at least 2 nodes"));
        }
        if self.link_probs.len() != b || self.link_probs.iter().any(|r| r.len() != b) {
            return Err(Error::param(
                "link_probs",
                format!("must be a {b}×{b} matrix"),
            ));
        }
        for (i, row) in self.link_probs.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::param(
                        "link_probs",
                        format!("entry ({i},{j}) = {p} is not in [0,1]"),
                    ));
                }
                if p != self.link_probs[j][i] {
                    return Err(Error::param("link_probs", "must be symmetric"));
                }
            }
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block of every node; blocks occupy consecutive index ranges.
    pub fn membership(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    }

    /// Number of node pairs available to each block pair (`a ≤ b`).
    pub fn pair_counts(&self) -> Vec<Vec<u64>> {
        let s: Vec<u64> = self.block_sizes.iter().map(|&x| x as u64).collect();
        (0..s.len())
            .map(|a| {
                (0..s.len())
                    .map(|b| match a.cmp(&b) {
                        std::cmp::Ordering::Less => s[a] * s[b],
                        std::cmp::Ordering::Equal => s[a] * (s[a] - 1) / 2,
                        std::cmp::Ordering::Greater => 0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Undirected edge counts of `a` per block pair (`a ≤ b`).
    pub fn edge_counts(&self, graph: &SparseAdjacency) -> Vec<Vec<u64>> {
        let member = self.membership();
        let b = self.block_sizes.len();
        let mut counts = vec![vec![0u64; b]; b];
        for (i, j) in graph.entries().filter(|(i, j)| i < j) {
            let (x, y) = (member[i].min(member[j]), member[i].max(member[j]));
            counts[x][y] += 1;
        }
        counts
    }
}

/// Samples an undirected simple graph: every unordered pair is linked
/// independently with its block-pair probability.
pub fn sample_sbm(config: &SbmConfig) -> Result<SparseAdjacency> {
    config.validate()?;
    let member = config.membership();
    let n = member.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        let row = &config.link_probs[member[u]];
        for v in u + 1..n {
            let p = row[member[v]];
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    SparseAdjacency::from_edges(n, &edges, false)
}

/// One cell of an experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub config_id: usize,
    pub in_prob: f64,
    pub out_prob: f64,
    /// Share of the nodes in the first (minority) block.
    pub split: f64,
    pub block_sizes: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub cells: Vec<GridCell>,
    pub replicates_per_config: usize,
    pub k_for_elbow: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config_id: usize,
    pub in_prob: f64,
    pub out_prob: f64,
    pub split: f64,
    pub replicate: usize,
    pub d_hat: usize,
    pub entropy: f64,
    pub gc_fraction: f64,
}

pub const RESULTS_HEADER: &str =
    "config_id,in_prob,out_prob,split,replicate,d_hat,entropy,gc_fraction";

fn check_prob(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{p} is not a probability")))
    }
}

fn check_run(n: usize, replicates: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::param("n", "experiments need at least 3 nodes"));
    }
    if replicates == 0 {
        return Err(Error::param("replicates", "must be at least 1"));
    }
    if k < 3 {
        return Err(Error::param(
            "k",
            "the elbow needs at least 3 singular values",
        ));
    }
    Ok(())
}

impl ExperimentGrid {
    /// Full factorial of in- and out-group probabilities with two equal blocks.
    pub fn engagement(
        in_probs: &[f64],
        out_probs: &[f64],
        n: usize,
        replicates: usize,
        k: usize,
        seed: u64,
    ) -> Result<Self> {
        check_run(n, replicates, k)?;
        let half = n / 2;
        let mut cells = Vec::new();
        for &p_in in in_probs {
            check_prob("in_probs", p_in)?;
            for &p_out in out_probs {
                check_prob("out_probs", p_out)?;
                cells.push(GridCell {
                    config_id: cells.len(),
                    in_prob: p_in,
                    out_prob: p_out,
                    split: 0.5,
                    block_sizes: [half, n - half],
                });
            }
        }
        Ok(ExperimentGrid {
            cells,
            replicates_per_config: replicates,
            k_for_elbow: k.min(n),
            master_seed: seed,
        })
    }

    /// In-group probabilities crossed with minority-block shares, fixed out-group probability.
    pub fn imbalance(
        in_probs: &[f64],
        out_prob: f64,
        splits: &[f64],
        n: usize,
        replicates: usize,
        k: usize,
        seed: u64,
    ) -> Result<Self> {
        check_run(n, replicates, k)?;
        check_prob("out_prob", out_prob)?;
        let mut cells = Vec::new();
        for &p_in in in_probs {
            check_prob("in_probs", p_in)?;
            for &split in splits {
                let minority = minority_size(n, split)?;
                cells.push(GridCell {
                    config_id: cells.len(),
                    in_prob: p_in,
                    out_prob,
                    split,
                    block_sizes: [minority, n - minority],
                });
            }
        }
        Ok(ExperimentGrid {
            cells,
            replicates_per_config: replicates,
            k_for_elbow: k.min(n),
            master_seed: seed,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len() * self.replicates_per_config
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Runs replicate `index` of the flattened `(cell, replicate)` order.
    pub fn run_one(&self, index: usize) -> Result<ExperimentResult> {
        let cell = &self.cells[index / self.replicates_per_config];
        let replicate = index % self.replicates_per_config;
        let seed = derive_seed(self.master_seed, cell.config_id as u64, replicate as u64);
        let config = SbmConfig::two_block(cell.block_sizes, cell.in_prob, cell.out_prob, seed)?;
        let graph = sample_sbm(&config)?;
        let metrics = graph_metrics(
            &graph,
            self.k_for_elbow,
            &SvdOptions::default().with_seed(mix64(seed)),
        )?;
        Ok(ExperimentResult {
            config_id: cell.config_id,
            in_prob: cell.in_prob,
            out_prob: cell.out_prob,
            split: cell.split,
            replicate,
            d_hat: metrics.dimension.d_hat,
            entropy: metrics.entropy.entropy,
            gc_fraction: giant_component_nodes(&graph).len() as f64 / graph.n_nodes() as f64,
        })
    }

    /// All replicates in `(config, replicate)` order. Replicates run on the
    /// current rayon pool when the `parallel` feature is enabled.
    pub fn run(&self) -> Result<Vec<ExperimentResult>> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.len())
                .into_par_iter()
                .map(|i| self.run_one(i))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.len()).map(|i| self.run_one(i)).collect()
        }
    }
}

/// Size of the minority block for share `split` of `n` nodes.
pub fn minority_size(n: usize, split: f64) -> Result<usize> {
    if !(split > 0.0 && split <= 0.5) {
        return Err(Error::param(
            "splits",
            format!("{split} must lie in (0, 0.5]"),
        ));
    }
    let m = (split * n as f64).round() as usize;
    if m == 0 || m >= n {
        return Err(Error::param(
            "splits",
            format!("split {split} of {n} nodes leaves an empty block"),
        ));
    }
    Ok(m)
}

pub fn run_engagement_sweep(
    in_probs: &[f64],
    out_probs: &[f64],
    n: usize,
    replicates: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<ExperimentResult>> {
    ExperimentGrid::engagement(in_probs, out_probs, n, replicates, k, seed)?.run()
}

pub fn run_imbalance_sweep(
    in_probs: &[f64],
    out_prob: f64,
    splits: &[f64],
    n: usize,
    replicates: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<ExperimentResult>> {
    ExperimentGrid::imbalance(in_probs, out_prob, splits, n, replicates, k, seed)?.run()
}

/// Writes results as comma-separated rows under [`RESULTS_HEADER`].
pub fn write_results<W: Write>(mut w: W, results: &[ExperimentResult]) -> io::Result<()> {
    writeln!(w, "{RESULTS_HEADER}")?;
    for r in results {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.config_id,
            r.in_prob,
            r.out_prob,
            r.split,
            r.replicate,
            r.d_hat,
            r.entropy,
            r.gc_fraction
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_probabilities_give_empty_graph() {
        let c = SbmConfig::two_block([3, 4], 0.0, 0.0, 1).unwrap();
        assert_eq!(sample_sbm(&c).unwrap().nnz(), 0);
    }

    #[test]
    fn unit_probabilities_give_complete_graph() {
        let c = SbmConfig::two_block([2, 2], 1.0, 1.0, 1).unwrap();
        assert_eq!(sample_sbm(&c).unwrap().edge_count(), 6);
    }

    #[test]
    fn validation() {
        assert!(SbmConfig::two_block([2, 2], 1.2, 0.0, 1).is_err());
        assert!(SbmConfig::two_block([0, 2], 0.5, 0.1, 1).is_err());
        assert!(SbmConfig::new(vec![2, 2], vec![vec![0.5, 0.1], vec![0.2, 0.5]], 0).is_err());
        assert!(SbmConfig::new(vec![1], vec![vec![0.5]], 0).is_err());
    }

    #[test]
    fn minority_sizes() {
        assert_eq!(minority_size(1000, 0.01).unwrap(), 10);
        assert_eq!(minority_size(1000, 0.5).unwrap(), 500);
        assert!(minority_size(50, 0.005).is_err());
        assert!(minority_size(50, 0.7).is_err());
    }

    #[test]
    fn grid_cardinality() {
        let g =
            ExperimentGrid::engagement(&DEFAULT_IN_PROBS, &DEFAULT_OUT_PROBS, 1000, 100, 100, 0)
                .unwrap();
        assert_eq!(g.len(), 1200);
        let g =
            ExperimentGrid::imbalance(&DEFAULT_IN_PROBS, 0.05, &DEFAULT_SPLITS, 1000, 100, 100, 0)
                .unwrap();
        assert_eq!(g.len(), 1600);
        assert_eq!(g.cells[3].block_sizes, [10, 990]);
        assert!(ExperimentGrid::engagement(&[1.5], &[0.1], 100, 1, 10, 0).is_err());
    }

    #[test]
    fn edge_counts_partition_edges() {
        let c = SbmConfig::two_block([5, 7], 0.5, 0.2, 9).unwrap();
        let g = sample_sbm(&c).unwrap();
        let counts = c.edge_counts(&g);
        let total: u64 = counts.iter().flatten().sum();
        assert_eq!(total as usize, g.edge_count());
        assert_eq!(c.pair_counts(), vec![vec![10, 35], vec![0, 21]]);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let a = run_engagement_sweep(&[0.3], &[0.05, 0.1], 60, 2, 20, 5).unwrap();
        let b = run_engagement_sweep(&[0.3], &[0.05, 0.1], 60, 2, 20, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert_eq!((a[3].config_id, a[3].replicate), (1, 1));
    }
}
