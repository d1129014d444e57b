use std::fs::File;
use std::io::{self, BufWriter, Write};

use polardim::pipeline::{
    bootstrap_replicate, build_window_network, giant_component, giant_component_nodes,
    replicate_seed, validate_series, WindowSpec,
};
use polardim::report::{analyse, graph_metrics, AnalysisReport, Quantiles, TableRow};
use polardim::sbm::{write_results, ExperimentGrid};
use polardim::seed::mix64;
use polardim::{
    compare_windows, estimate_dimension, svd_entropy, truncated_svd_with, Error,
    PolarisationVerdict, SingularSpectrum, SparseAdjacency, SvdMethod, SvdOptions, WindowMetrics,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{
    BootstrapArgs, BootstrapTarget, CompareArgs, EngagementArgs, EstimateArgs, ImbalanceArgs,
    SbmCommon, SolverArgs, SpectrumArgs,
};
use crate::error::CliError;
use crate::input::{load_network, load_records, read_input};
use crate::log;

/// Largest graph that may be retried on the dense route after the Krylov route fails.
const FALLBACK_MAX_NODES: usize = 4000;
const SMALL_GIANT_FRACTION: f64 = 0.5;

fn svd_options(s: &SolverArgs) -> Result<SvdOptions, CliError> {
    if !(s.tolerance > 0.0 && s.tolerance < 1.0) {
        return Err(CliError::Usage("--tolerance must lie in (0, 1)".into()));
    }
    if s.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    Ok(SvdOptions {
        method: SvdMethod::Auto,
        tolerance: s.tolerance,
        seed: s.seed,
        max_basis: s.max_basis,
    })
}

fn dense(opts: &SvdOptions) -> SvdOptions {
    opts.clone().with_method(SvdMethod::Dense)
}

fn no_fallback(n: usize) -> CliError {
    CliError::Numerical(format!(
        "singular values did not converge on a {n}-node graph, too large for the dense fallback"
    ))
}

fn warn_clamp(what: &str, k: usize, n: usize) {
    if k > n {
        log::warn(&format!(
            "--k {k} exceeds the {n} nodes of the {what}; using {n}"
        ));
    }
}

fn warn_small_giant(giant: usize, n: usize) {
    let fraction = giant as f64 / n as f64;
    if fraction < SMALL_GIANT_FRACTION {
        log::warn(&format!(
            "giant component holds only {giant} of {n} nodes ({:.1}%)",
            100.0 * fraction
        ));
    }
}

fn analyse_checked(
    a: &SparseAdjacency,
    k: usize,
    opts: &SvdOptions,
    digest: &str,
    emit_spectrum: bool,
) -> Result<AnalysisReport, CliError> {
    let report = analyse(a, k, opts, digest, emit_spectrum)?;
    if report.converged {
        return Ok(report);
    }
    if a.n_nodes() > FALLBACK_MAX_NODES {
        return Err(no_fallback(a.n_nodes()));
    }
    log::warn("iterative solver did not converge; retrying with the dense route");
    Ok(analyse(a, k, &dense(opts), digest, emit_spectrum)?)
}

fn spectrum_checked(
    a: &SparseAdjacency,
    k: usize,
    opts: &SvdOptions,
) -> Result<SingularSpectrum, CliError> {
    let s = truncated_svd_with(a, k, opts)?;
    if s.converged() {
        return Ok(s);
    }
    if a.n_nodes() > FALLBACK_MAX_NODES {
        return Err(no_fallback(a.n_nodes()));
    }
    log::warn("iterative solver did not converge; retrying with the dense route");
    Ok(truncated_svd_with(a, k, &dense(opts))?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn estimate(args: &EstimateArgs, threads: usize) -> Result<(), CliError> {
    let opts = svd_options(&args.solver)?;
    let net = load_network(&args.network)?;
    log::header(
        "estimate",
        args,
        args.solver.seed,
        Some(&net.digest),
        threads,
    );
    let g = &net.graph;
    warn_clamp("network", args.solver.k, g.n_nodes());
    let report = analyse_checked(g, args.solver.k, &opts, &net.digest, args.emit_spectrum)?;
    warn_clamp("giant component", args.solver.k, report.giant_nodes);
    warn_small_giant(report.giant_nodes, report.n_nodes);
    print_json(&report)
}

#[derive(Serialize)]
struct SpectrumOutput {
    input_digest: String,
    giant: bool,
    n_nodes: usize,
    n_edges: usize,
    k_requested: usize,
    k_used: usize,
    converged: bool,
    values: Vec<f64>,
}

pub fn spectrum(args: &SpectrumArgs, threads: usize) -> Result<(), CliError> {
    let opts = svd_options(&args.solver)?;
    let net = load_network(&args.network)?;
    log::header(
        "spectrum",
        args,
        args.solver.seed,
        Some(&net.digest),
        threads,
    );
    let g = if args.giant {
        giant_component(&net.graph)?
    } else {
        net.graph
    };
    warn_clamp("network", args.solver.k, g.n_nodes());
    let s = spectrum_checked(&g, args.solver.k, &opts)?;
    print_json(&SpectrumOutput {
        input_digest: net.digest,
        giant: args.giant,
        n_nodes: g.n_nodes(),
        n_edges: g.edge_count(),
        k_requested: args.solver.k,
        k_used: s.len(),
        converged: s.converged(),
        values: s.values().to_vec(),
    })
}

/// A precomputed window row. Accepts both field names and table column names.
#[derive(Debug, Deserialize)]
struct ReportRow {
    #[serde(alias = "Window")]
    label: String,
    #[serde(alias = "Dimension")]
    d_hat: usize,
    #[serde(default, alias = "Entropy")]
    entropy: Option<f64>,
    #[serde(default, alias = "Dimension GC")]
    d_hat_gc: Option<usize>,
    #[serde(default, alias = "Entropy GC")]
    entropy_gc: Option<f64>,
    #[serde(default)]
    k_used: Option<usize>,
}

#[derive(Serialize)]
struct WindowReport {
    label: String,
    start: u64,
    end: u64,
    report: AnalysisReport,
}

#[derive(Serialize)]
struct CompareOutput {
    input_digest: String,
    k_requested: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    windows: Vec<WindowReport>,
    table: Vec<TableRow>,
    verdict: PolarisationVerdict,
    verdict_gc: Option<PolarisationVerdict>,
}

/// Giant-component verdict; `None` with a warning when the windows cannot be compared.
fn gc_verdict(
    metrics: Option<Vec<WindowMetrics>>,
) -> Result<Option<PolarisationVerdict>, CliError> {
    let Some(metrics) = metrics else {
        return Ok(None);
    };
    match compare_windows(&metrics) {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotComparable(m)) => {
            log::warn(&format!("giant components not compared: {m}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn compare(args: &CompareArgs, threads: usize) -> Result<(), CliError> {
    let opts = svd_options(&args.solver)?;
    let k = args.solver.k;
    if let Some(path) = &args.reports {
        if !args.windows.is_empty() {
            return Err(CliError::Usage(
                "--window cannot be combined with --reports".into(),
            ));
        }
        let input = read_input(path)?;
        log::header(
            "compare",
            args,
            args.solver.seed,
            Some(&input.digest),
            threads,
        );
        let rows: Vec<ReportRow> = serde_json::from_str(&input.text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if rows.len() < 2 {
            return Err(CliError::Usage(
                "comparison needs at least two windows".into(),
            ));
        }
        let metrics: Vec<WindowMetrics> = rows
            .iter()
            .map(|r| WindowMetrics {
                label: r.label.clone(),
                d_hat: r.d_hat,
                entropy: r.entropy,
                k_used: r.k_used.unwrap_or(k),
            })
            .collect();
        let gc_metrics = rows
            .iter()
            .map(|r| {
                r.d_hat_gc.map(|d| WindowMetrics {
                    label: r.label.clone(),
                    d_hat: d,
                    entropy: r.entropy_gc,
                    k_used: r.k_used.unwrap_or(k),
                })
            })
            .collect::<Option<Vec<_>>>();
        let table = rows
            .iter()
            .map(|r| TableRow {
                window: r.label.clone(),
                dimension: r.d_hat,
                dimension_gc: r.d_hat_gc,
                entropy: r.entropy,
                entropy_gc: r.entropy_gc,
            })
            .collect();
        return print_json(&CompareOutput {
            input_digest: input.digest,
            k_requested: k,
            windows: Vec::new(),
            table,
            verdict: compare_windows(&metrics)?,
            verdict_gc: gc_verdict(gc_metrics)?,
        });
    }

    let path = args
        .records
        .as_ref()
        .expect("clap requires --records or --reports");
    if args.windows.len() < 2 {
        return Err(CliError::Usage(
            "comparison needs at least two --window flags".into(),
        ));
    }
    let input = read_input(path)?;
    log::header(
        "compare",
        args,
        args.solver.seed,
        Some(&input.digest),
        threads,
    );
    let records = load_records(&input.text)?;
    let mut specs = args
        .windows
        .iter()
        .map(|w| WindowSpec::with_kinds(w.label.clone(), w.start, w.end, args.kinds.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    specs.sort_by_key(|w| (w.start, w.end));
    validate_series(&specs)?;

    let reports = specs
        .par_iter()
        .map(|w| {
            let g = build_window_network(&records, w, args.directed)?;
            let r = analyse_checked(&g, k, &opts, &input.digest, false)?;
            Ok(r)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    for (w, r) in specs.iter().zip(&reports) {
        warn_clamp(&format!("window `{}`", w.label), k, r.n_nodes);
        warn_small_giant(r.giant_nodes, r.n_nodes);
    }
    let metrics: Vec<_> = specs
        .iter()
        .zip(&reports)
        .map(|(w, r)| r.window_metrics(w.label.clone()))
        .collect();
    let gc_metrics = specs
        .iter()
        .zip(&reports)
        .map(|(w, r)| WindowMetrics {
            label: w.label.clone(),
            d_hat: r.d_hat_gc,
            entropy: Some(r.entropy_gc),
            k_used: r.k_used_gc,
        })
        .collect();
    let verdict = compare_windows(&metrics)?;
    let verdict_gc = gc_verdict(Some(gc_metrics))?;
    let table = specs
        .iter()
        .zip(&reports)
        .map(|(w, r)| TableRow::from_report(w.label.clone(), r))
        .collect();
    let windows = specs
        .into_iter()
        .zip(reports)
        .map(|(w, report)| WindowReport {
            label: w.label,
            start: w.start,
            end: w.end,
            report,
        })
        .collect();
    print_json(&CompareOutput {
        input_digest: input.digest,
        k_requested: k,
        windows,
        table,
        verdict,
        verdict_gc,
    })
}

#[derive(Serialize)]
struct ReplicateRow {
    replicate: usize,
    d_hat: usize,
    entropy: Option<f64>,
}

#[derive(Serialize)]
struct PointEstimate {
    d_hat: usize,
    entropy: f64,
}

#[derive(Serialize)]
struct BootstrapOutput {
    input_digest: String,
    on: BootstrapTarget,
    n_nodes: usize,
    n_edges: usize,
    giant_fraction: f64,
    k_requested: usize,
    k_used: usize,
    replicates: usize,
    seed: u64,
    point: PointEstimate,
    d_hat: Quantiles,
    entropy: Option<Quantiles>,
    degenerate_replicates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<ReplicateRow>>,
}

pub fn bootstrap(args: &BootstrapArgs, threads: usize) -> Result<(), CliError> {
    let opts = svd_options(&args.solver)?;
    if args.replicates == 0 {
        return Err(CliError::Usage("--replicates must be at least 1".into()));
    }
    let net = load_network(&args.network)?;
    log::header(
        "bootstrap",
        args,
        args.solver.seed,
        Some(&net.digest),
        threads,
    );
    let full = &net.graph;
    let giant_nodes = giant_component_nodes(full);
    warn_small_giant(giant_nodes.len(), full.n_nodes());
    let giant_fraction = giant_nodes.len() as f64 / full.n_nodes() as f64;
    let base = match args.on {
        BootstrapTarget::Giant => full.induced_subgraph(&giant_nodes)?,
        BootstrapTarget::Full => full.clone(),
    };
    let k = args.solver.k;
    warn_clamp("resampled network", k, base.n_nodes());

    let point = graph_metrics(&base, k, &opts)?;
    let k_used = point.spectrum.len();
    if !point.spectrum.converged() && base.n_nodes() > FALLBACK_MAX_NODES {
        return Err(no_fallback(base.n_nodes()));
    }
    let point = if point.spectrum.converged() {
        point
    } else {
        graph_metrics(&base, k, &dense(&opts))?
    };

    let rows = (0..args.replicates)
        .into_par_iter()
        .map(|r| {
            let seed = replicate_seed(args.solver.seed, r as u64);
            let g = bootstrap_replicate(&base, seed);
            let s = spectrum_checked(&g, k_used, &opts.clone().with_seed(mix64(seed)))?;
            let d = estimate_dimension(&s)?;
            let entropy = match svd_entropy(&s) {
                Ok(e) => Some(e.entropy),
                Err(Error::UndefinedEntropy(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(ReplicateRow {
                replicate: r,
                d_hat: d.d_hat,
                entropy,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let dims: Vec<f64> = rows.iter().map(|r| r.d_hat as f64).collect();
    let entropies: Vec<f64> = rows.iter().filter_map(|r| r.entropy).collect();
    let degenerate = rows.len() - entropies.len();
    if degenerate > 0 {
        log::warn(&format!(
            "{degenerate} replicates had no edges; their entropy is undefined"
        ));
    }
    print_json(&BootstrapOutput {
        input_digest: net.digest,
        on: args.on,
        n_nodes: base.n_nodes(),
        n_edges: base.edge_count(),
        giant_fraction,
        k_requested: k,
        k_used,
        replicates: args.replicates,
        seed: args.solver.seed,
        point: PointEstimate {
            d_hat: point.dimension.d_hat,
            entropy: point.entropy.entropy,
        },
        d_hat: Quantiles::from_samples(&dims).expect("at least one replicate"),
        entropy: Quantiles::from_samples(&entropies),
        degenerate_replicates: degenerate,
        rows: args.emit_rows.then_some(rows),
    })
}

fn write_grid(grid: &ExperimentGrid, common: &SbmCommon) -> Result<(), CliError> {
    let results = grid.run()?;
    match &common.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_results(&mut w, &results)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_results(&mut w, &results)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn sbm_engagement(args: &EngagementArgs, threads: usize) -> Result<(), CliError> {
    let c = &args.common;
    log::header("sbm engagement", args, c.seed, None, threads);
    warn_clamp("block model", c.k, c.n);
    let grid = ExperimentGrid::engagement(
        &args.in_probs,
        &args.out_probs,
        c.n,
        c.replicates,
        c.k,
        c.seed,
    )?;
    write_grid(&grid, c)
}

pub fn sbm_imbalance(args: &ImbalanceArgs, threads: usize) -> Result<(), CliError> {
    let c = &args.common;
    log::header("sbm imbalance", args, c.seed, None, threads);
    warn_clamp("block model", c.k, c.n);
    let grid = ExperimentGrid::imbalance(
        &args.in_probs,
        args.out_prob,
        &args.splits,
        c.n,
        c.replicates,
        c.k,
        c.seed,
    )?;
    write_grid(&grid, c)
}
