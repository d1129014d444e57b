//! Test-side oracles written independently of the library numerics.
#![allow(dead_code)]

use polardim::SparseAdjacency;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values of a row-major `rows x cols` matrix by one-sided Jacobi
/// rotations on its columns, sorted descending.
pub fn jacobi_singular_values(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut c: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) =
                    c[p].iter().zip(&c[q]).fold((0.0, 0.0, 0.0), |acc, (x, y)| {
                        (acc.0 + x * x, acc.1 + y * y, acc.2 + x * y)
                    });
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let (left, right) = c.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xo, yo) = (*x, *y);
                    *x = cs * xo - sn * yo;
                    *y = sn * xo + cs * yo;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn dense_row_major(a: &SparseAdjacency) -> Vec<f64> {
    let n = a.n_nodes();
    let mut m = vec![0.0; n * n];
    for (i, j) in a.entries() {
        m[i * n + j] = 1.0;
    }
    m
}

pub fn oracle_spectrum(a: &SparseAdjacency) -> Vec<f64> {
    jacobi_singular_values(&dense_row_major(a), a.n_nodes(), a.n_nodes())
}

/// Erdős–Rényi style graph with every ordered (directed) or unordered pair
/// present with probability `density`.
pub fn random_graph(n: usize, density: f64, directed: bool, seed: u64) -> SparseAdjacency {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        let from = if directed { 0 } else { i + 1 };
        for j in from..n {
            if i != j && rng.random::<f64>() < density {
                edges.push((i, j));
            }
        }
    }
    SparseAdjacency::from_edges(n, &edges, directed).unwrap()
}

/// Profile log-likelihood of every split, evaluated directly from its definition.
pub fn brute_force_elbow(values: &[f64]) -> usize {
    let k = values.len();
    let floor = 1e-12 * values[0] * values[0];
    let mut best = (f64::NEG_INFINITY, 0);
    for d in 1..k {
        let (head, tail) = values.split_at(d);
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (m1, m2) = (mean(head), mean(tail));
        let ss: f64 = head.iter().map(|x| (x - m1).powi(2)).sum::<f64>()
            + tail.iter().map(|x| (x - m2).powi(2)).sum::<f64>();
        let var = (ss / k as f64).max(floor).max(f64::MIN_POSITIVE);
        let ll: f64 = head
            .iter()
            .map(|x| normal_log_density(*x, m1, var))
            .chain(tail.iter().map(|x| normal_log_density(*x, m2, var)))
            .sum();
        if ll > best.0 {
            best = (ll, d);
        }
    }
    best.1
}

fn normal_log_density(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var)
}

/// Normalised Shannon entropy of a nonnegative vector, from its definition.
pub fn arithmetic_entropy(values: &[f64]) -> f64 {
    let total: f64 = values.iter().sum();
    let h: f64 = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let p = v / total;
            -p * p.ln()
        })
        .sum();
    h / (values.len() as f64).ln()
}

pub fn max_relative_error(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / scale)
        .fold(0.0, f64::max)
}
