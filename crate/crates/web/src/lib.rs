//! Browser bindings. Every export returns a JSON string.

use polardim::pipeline::{giant_component_nodes, parse_edge_list};
use polardim::report::analyse;
use polardim::sbm::{minority_size, sample_sbm, SbmConfig};
use polardim::{
    embed, estimate_dimension, svd_entropy, truncated_svd, SingularSpectrum, SvdOptions,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct SpectrumSummary {
    pub values: Vec<f64>,
    pub d_hat: usize,
    pub entropy: Option<f64>,
    pub profile_loglik: Vec<f64>,
}

fn summarise(spectrum: &SingularSpectrum) -> polardim::Result<SpectrumSummary> {
    let dim = estimate_dimension(spectrum)?;
    Ok(SpectrumSummary {
        values: spectrum.values().to_vec(),
        d_hat: dim.d_hat,
        entropy: svd_entropy(spectrum).ok().map(|e| e.entropy),
        profile_loglik: dim.profile_loglik,
    })
}

#[derive(Serialize)]
pub struct SbmSample {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub block_sizes: [usize; 2],
    pub membership: Vec<usize>,
    pub gc_fraction: f64,
    /// Node positions in the two leading embedding directions.
    pub positions: Vec<[f64; 2]>,
    pub spectrum: SpectrumSummary,
}

/// Samples a two-block graph and returns its spectrum, elbow and a 2-D embedding.
pub fn sbm_sample(
    n: usize,
    minority_share: f64,
    p_in: f64,
    p_out: f64,
    k: usize,
    seed: u64,
) -> polardim::Result<SbmSample> {
    let minority = minority_size(n, minority_share)?;
    let config = SbmConfig::two_block([minority, n - minority], p_in, p_out, seed)?;
    let g = sample_sbm(&config)?;
    let spectrum = truncated_svd(&g, k.min(n))?;
    let e = embed(&g, 2)?;
    let positions = (0..n)
        .map(|i| [e.left_positions[(i, 0)], e.left_positions[(i, 1)]])
        .collect();
    Ok(SbmSample {
        n_nodes: n,
        n_edges: g.edge_count(),
        block_sizes: [minority, n - minority],
        membership: config.membership(),
        gc_fraction: giant_component_nodes(&g).len() as f64 / n as f64,
        positions,
        spectrum: summarise(&spectrum)?,
    })
}

pub fn spectrum_summary(values: Vec<f64>) -> polardim::Result<SpectrumSummary> {
    summarise(&SingularSpectrum::from_values(values)?)
}

fn to_json<T: Serialize>(r: polardim::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = sbmSample)]
pub fn sbm_sample_js(
    n: usize,
    minority_share: f64,
    p_in: f64,
    p_out: f64,
    k: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_json(sbm_sample(
        n,
        minority_share,
        p_in,
        p_out,
        k,
        u64::from(seed),
    ))
}

/// Elbow and entropy of a list of singular values.
#[wasm_bindgen(js_name = spectrumSummary)]
pub fn spectrum_summary_js(values: Vec<f64>) -> Result<String, JsError> {
    to_json(spectrum_summary(values))
}

/// Full report on a pasted edge list.
#[wasm_bindgen(js_name = analyseEdgeList)]
pub fn analyse_edge_list_js(text: &str, k: usize, directed: bool) -> Result<String, JsError> {
    to_json(
        parse_edge_list(text, directed)
            .and_then(|g| analyse(&g, k, &SvdOptions::default(), "", true)),
    )
}
