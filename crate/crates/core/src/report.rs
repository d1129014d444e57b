//! Whole-network analysis reports and summary statistics.

use serde::{Deserialize, Serialize};

use crate::adjacency::SparseAdjacency;
use crate::dimension::{estimate_dimension, DimensionEstimate};
use crate::entropy::{svd_entropy, EntropyReport};
use crate::error::{Error, Result};
use crate::pipeline::giant_component;
use crate::polarisation::WindowMetrics;
use crate::svd::{truncated_svd_with, SingularSpectrum, SvdOptions};

/// Number of singular values fed to the elbow when nothing else is asked for.
pub const DEFAULT_K: usize = 100;

#[derive(Debug, Clone)]
pub struct GraphMetrics {
    pub spectrum: SingularSpectrum,
    pub dimension: DimensionEstimate,
    pub entropy: EntropyReport,
}

/// Spectrum, dimension and entropy of `a` using `min(k, n)` singular values.
pub fn graph_metrics(a: &SparseAdjacency, k: usize, opts: &SvdOptions) -> Result<GraphMetrics> {
    let k_used = k.min(a.n_nodes());
    if a.n_nodes() < 3 {
        return Err(Error::GraphTooSmall {
            n_nodes: a.n_nodes(),
            needed: 3,
        });
    }
    if k_used < 3 {
        return Err(Error::param(
            "k",
            "the elbow needs at least 3 singular values",
        ));
    }
    let spectrum = truncated_svd_with(a, k_used, opts)?;
    let dimension = estimate_dimension(&spectrum)?;
    let entropy = svd_entropy(&spectrum)?;
    Ok(GraphMetrics {
        spectrum,
        dimension,
        entropy,
    })
}

/// Metrics for a network and for its giant component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub giant_nodes: usize,
    pub giant_edges: usize,
    pub k_requested: usize,
    pub k_used: usize,
    pub k_used_gc: usize,
    pub d_hat: usize,
    pub d_hat_gc: usize,
    pub entropy: f64,
    pub entropy_gc: f64,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_gc: Option<Vec<f64>>,
}

impl AnalysisReport {
    pub fn window_metrics(&self, label: impl Into<String>) -> WindowMetrics {
        WindowMetrics {
            label: label.into(),
            d_hat: self.d_hat,
            entropy: Some(self.entropy),
            k_used: self.k_used,
        }
    }
}

pub fn analyse(
    a: &SparseAdjacency,
    k: usize,
    opts: &SvdOptions,
    input_digest: impl Into<String>,
    emit_spectrum: bool,
) -> Result<AnalysisReport> {
    let full = graph_metrics(a, k, opts)?;
    let gc = giant_component(a)?;
    let giant = graph_metrics(&gc, k, opts)?;
    Ok(AnalysisReport {
        input_digest: input_digest.into(),
        n_nodes: a.n_nodes(),
        n_edges: a.edge_count(),
        giant_nodes: gc.n_nodes(),
        giant_edges: gc.edge_count(),
        k_requested: k,
        k_used: full.spectrum.len(),
        k_used_gc: giant.spectrum.len(),
        d_hat: full.dimension.d_hat,
        d_hat_gc: giant.dimension.d_hat,
        entropy: full.entropy.entropy,
        entropy_gc: giant.entropy.entropy,
        converged: full.spectrum.converged() && giant.spectrum.converged(),
        spectrum: emit_spectrum.then(|| full.spectrum.values().to_vec()),
        spectrum_gc: emit_spectrum.then(|| giant.spectrum.values().to_vec()),
    })
}

/// One row of the pointwise-estimate table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "Window")]
    pub window: String,
    #[serde(rename = "Dimension")]
    pub dimension: usize,
    #[serde(rename = "Dimension GC")]
    pub dimension_gc: Option<usize>,
    #[serde(rename = "Entropy")]
    pub entropy: Option<f64>,
    #[serde(rename = "Entropy GC")]
    pub entropy_gc: Option<f64>,
}

impl TableRow {
    pub fn from_report(window: impl Into<String>, r: &AnalysisReport) -> Self {
        TableRow {
            window: window.into(),
            dimension: r.d_hat,
            dimension_gc: Some(r.d_hat_gc),
            entropy: Some(r.entropy),
            entropy_gc: Some(r.entropy_gc),
        }
    }
}

/// Order statistics reported for bootstrap distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q025: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q975: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear interpolation between order statistics (`(n-1)p` indexing).
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (s.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            s[lo] + (h - lo as f64) * (s[hi] - s[lo])
        };
        Some(Quantiles {
            min: s[0],
            q025: q(0.025),
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            q975: q(0.975),
            max: s[s.len() - 1],
        })
    }
}
