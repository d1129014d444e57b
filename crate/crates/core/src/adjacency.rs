//! Unweighted simple graphs stored as compressed sparse rows.

use std::collections::HashMap;
use std::io::{self, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Compressed sparse row pattern; values are implicitly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
}

impl Csr {
    /// `pairs` must be sorted and deduplicated.
    fn from_sorted(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _) in pairs {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = pairs.iter().map(|&(_, c)| c).collect();
        Csr { row_ptr, col_idx }
    }

    fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().map(|&j| x[j]).sum();
        }
    }
}

/// Adjacency matrix of an unweighted graph without self-loops or
/// duplicate edges. Undirected graphs store both orientations of every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAdjacency {
    n_nodes: usize,
    directed: bool,
    out: Csr,
    /// Transposed pattern; only kept for directed graphs.
    inc: Option<Csr>,
    labels: Option<Vec<String>>,
}

impl SparseAdjacency {
    /// Builds an adjacency from index pairs. Duplicates collapse, self-loops
    /// are dropped and undirected input is symmetrised.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)], directed: bool) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::param("n_nodes", "a graph needs at least one node"));
        }
        let mut pairs = Vec::with_capacity(if directed {
            edges.len()
        } else {
            2 * edges.len()
        });
        for &(row, col) in edges {
            if row >= n_nodes || col >= n_nodes {
                return Err(Error::IndexOutOfRange { row, col, n_nodes });
            }
            if row == col {
                continue;
            }
            pairs.push((row, col));
            if !directed {
                pairs.push((col, row));
            }
        }
        Ok(Self::from_pairs_unchecked(n_nodes, pairs, directed))
    }

    pub(crate) fn from_pairs_unchecked(
        n_nodes: usize,
        mut pairs: Vec<(usize, usize)>,
        directed: bool,
    ) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let out = Csr::from_sorted(n_nodes, &pairs);
        let inc = directed.then(|| {
            let mut t: Vec<_> = pairs.iter().map(|&(r, c)| (c, r)).collect();
            t.sort_unstable();
            Csr::from_sorted(n_nodes, &t)
        });
        SparseAdjacency {
            n_nodes,
            directed,
            out,
            inc,
            labels: None,
        }
    }

    /// Attaches external identifiers, one per row.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_nodes {
            return Err(Error::param(
                "labels",
                format!("expected {} labels, got {}", self.n_nodes, labels.len()),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of stored matrix entries (both orientations for undirected graphs).
    pub fn nnz(&self) -> usize {
        self.out.col_idx.len()
    }

    /// Number of graph edges: arcs when directed, unordered pairs otherwise.
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.nnz()
        } else {
            self.nnz() / 2
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label_index(&self) -> Option<HashMap<&str, usize>> {
        self.labels
            .as_ref()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect())
    }

    /// Column indices of row `i` (out-neighbours), ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        self.out.row(i)
    }

    /// Row indices of column `i` (in-neighbours), ascending.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        match &self.inc {
            Some(t) => t.row(i),
            None => self.out.row(i),
        }
    }

    pub fn has_edge(&self, row: usize, col: usize) -> bool {
        self.neighbors(row).binary_search(&col).is_ok()
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_nodes).flat_map(move |i| self.neighbors(i).iter().map(move |&j| (i, j)))
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        self.out.mul_vec(x, y);
    }

    /// `y = Aᵀ x`
    pub fn mul_t_vec(&self, x: &[f64], y: &mut [f64]) {
        match &self.inc {
            Some(t) => t.mul_vec(x, y),
            None => self.out.mul_vec(x, y),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n_nodes, self.n_nodes);
        for (i, j) in self.entries() {
            m[(i, j)] = 1.0;
        }
        m
    }

    /// Subgraph induced by `nodes`; row `k` of the result is `nodes[k]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Self> {
        let mut position = vec![usize::MAX; self.n_nodes];
        for (k, &v) in nodes.iter().enumerate() {
            if v >= self.n_nodes {
                return Err(Error::IndexOutOfRange {
                    row: v,
                    col: v,
                    n_nodes: self.n_nodes,
                });
            }
            position[v] = k;
        }
        let mut pairs = Vec::new();
        for (k, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                if position[w] != usize::MAX {
                    pairs.push((k, position[w]));
                }
            }
        }
        let mut sub = Self::from_pairs_unchecked(nodes.len().max(1), pairs, self.directed);
        if let Some(labels) = &self.labels {
            sub.labels = Some(nodes.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok(sub)
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_nodes];
        if perm.len() != self.n_nodes
            || !perm
                .iter()
                .all(|&p| p < self.n_nodes && !std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::param(
                "perm",
                "not a permutation of the node indices",
            ));
        }
        let pairs = self.entries().map(|(i, j)| (perm[i], perm[j])).collect();
        let mut out = Self::from_pairs_unchecked(self.n_nodes, pairs, self.directed);
        if let Some(labels) = &self.labels {
            let mut relabelled = vec![String::new(); self.n_nodes];
            for (i, l) in labels.iter().enumerate() {
                relabelled[perm[i]] = l.clone();
            }
            out.labels = Some(relabelled);
        }
        Ok(out)
    }

    /// Writes the graph as a sorted `src<TAB>dst` edge list. Undirected edges
    /// are written once, smaller index first. Labels are used when present.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, j) in self.entries() {
            if !self.directed && j < i {
                continue;
            }
            match &self.labels {
                Some(l) => writeln!(w, "{}\t{}", l[i], l[j])?,
                None => writeln!(w, "{i}\t{j}")?,
            }
        }
        Ok(())
    }
}
