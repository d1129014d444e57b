//! Truncated singular value decomposition of sparse adjacency matrices.
//!
//! Two routes are available. The dense route densifies the matrix and runs a
//! full SVD; it is used for small graphs or when most of the spectrum is
//! requested. The Krylov route grows a pair of orthonormal bases `V` (right)
//! and `U` (left) by alternating products with `A` and `Aᵀ` (Golub-Kahan
//! bidiagonalisation with full reorthogonalisation) and extracts Ritz triplets
//! from the projected matrix `B = Uᵀ A V`.
//!
//! `B` is assembled column by column from the Gram-Schmidt coefficients of
//! `A v`, so it stays exact when the basis is refilled with random vectors.
//! Refills happen on breakdown (an invariant subspace was found) and once
//! after the first convergence, because a single Krylov sequence cannot see
//! more than one copy of a repeated singular value.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};

/// Graphs up to this size always take the dense route under [`SvdMethod::Auto`].
pub const DENSE_MAX_NODES: usize = 1200;
/// Upper size limit for the dense route under [`SvdMethod::Auto`].
const DENSE_AUTO_CEILING: usize = 4000;
/// Extra Krylov steps taken after a verification refill.
const VERIFY_STEPS: usize = 10;
/// Relative norm below which an orthogonalised vector counts as dependent.
const DEFLATION_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SvdMethod {
    Auto,
    Dense,
    Krylov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdOptions {
    pub method: SvdMethod,
    /// Ritz residual tolerance, relative to the largest singular value.
    pub tolerance: f64,
    /// Seed for the random start and refill vectors of the Krylov route.
    pub seed: u64,
    /// Cap on the right basis dimension; `None` allows the full space.
    pub max_basis: Option<usize>,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            method: SvdMethod::Auto,
            tolerance: 1e-10,
            seed: 0,
            max_basis: None,
        }
    }
}

impl SvdOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_method(mut self, method: SvdMethod) -> Self {
        self.method = method;
        self
    }
}

/// Descending singular values plus truncation metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    k_requested: usize,
    n_nodes: usize,
    converged: bool,
}

impl SingularSpectrum {
    /// Wraps an externally supplied list of singular values. The values are
    /// sorted descending; negative or non-finite entries are rejected.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("values", "spectrum is empty"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::param(
                "values",
                format!("singular values must be finite and nonnegative, got {bad}"),
            ));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let k = values.len();
        Ok(SingularSpectrum {
            values,
            k_requested: k,
            n_nodes: k,
            converged: true,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn k_requested(&self) -> usize {
        self.k_requested
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// The leading `k` values as a new spectrum.
    pub fn truncate(&self, k: usize) -> SingularSpectrum {
        let k = k.min(self.values.len());
        SingularSpectrum {
            values: self.values[..k].to_vec(),
            k_requested: k,
            n_nodes: self.n_nodes,
            converged: self.converged,
        }
    }
}

/// Leading singular triplets: `left` and `right` are `n × K` with orthonormal columns.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left: DMatrix<f64>,
    pub values: Vec<f64>,
    pub right: DMatrix<f64>,
    pub converged: bool,
}

impl SvdFactors {
    pub fn spectrum(&self, k_requested: usize) -> SingularSpectrum {
        SingularSpectrum {
            values: self.values.clone(),
            k_requested,
            n_nodes: self.left.nrows(),
            converged: self.converged,
        }
    }
}

/// The `k` largest singular values of `a`, with default options.
pub fn truncated_svd(a: &SparseAdjacency, k: usize) -> Result<SingularSpectrum> {
    truncated_svd_with(a, k, &SvdOptions::default())
}

pub fn truncated_svd_with(
    a: &SparseAdjacency,
    k: usize,
    opts: &SvdOptions,
) -> Result<SingularSpectrum> {
    let d = decompose(a, k, opts, false)?;
    Ok(SingularSpectrum {
        values: d.values,
        k_requested: k,
        n_nodes: a.n_nodes(),
        converged: d.converged,
    })
}

/// Leading `k` singular triplets of `a`, with default options.
pub fn svd_factors(a: &SparseAdjacency, k: usize) -> Result<SvdFactors> {
    svd_factors_with(a, k, &SvdOptions::default())
}

pub fn svd_factors_with(a: &SparseAdjacency, k: usize, opts: &SvdOptions) -> Result<SvdFactors> {
    let d = decompose(a, k, opts, true)?;
    let (left, right) = d.vectors.expect("vectors requested");
    Ok(SvdFactors {
        left,
        values: d.values,
        right,
        converged: d.converged,
    })
}

struct Decomposition {
    values: Vec<f64>,
    vectors: Option<(DMatrix<f64>, DMatrix<f64>)>,
    converged: bool,
}

fn decompose(
    a: &SparseAdjacency,
    k: usize,
    opts: &SvdOptions,
    want_vectors: bool,
) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if !(opts.tolerance > 0.0 && opts.tolerance.is_finite()) {
        return Err(Error::param("tolerance", "must be positive and finite"));
    }
    let n = a.n_nodes();
    let k = k.min(n);
    if a.nnz() == 0 {
        let vectors = want_vectors.then(|| {
            let eye = DMatrix::<f64>::identity(n, k);
            (eye.clone(), eye)
        });
        return Ok(Decomposition {
            values: vec![0.0; k],
            vectors,
            converged: true,
        });
    }
    let dense = match opts.method {
        SvdMethod::Dense => true,
        SvdMethod::Krylov => false,
        SvdMethod::Auto => n <= DENSE_MAX_NODES || (3 * k >= n && n <= DENSE_AUTO_CEILING),
    };
    if dense {
        Ok(dense_svd(a, k, want_vectors))
    } else {
        Ok(Krylov::new(a, k, opts).run(want_vectors))
    }
}

/// Indices of `values` ordered by descending value.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    order
}

fn dense_svd(a: &SparseAdjacency, k: usize, want_vectors: bool) -> Decomposition {
    let svd = a.to_dense().svd(want_vectors, want_vectors);
    let order = descending_order(svd.singular_values.as_slice());
    let values = order[..k].iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = want_vectors.then(|| {
        let u = svd.u.as_ref().expect("u computed");
        let vt = svd.v_t.as_ref().expect("v_t computed");
        let left = DMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]);
        let right = DMatrix::from_fn(vt.ncols(), k, |r, c| vt[(order[c], r)]);
        (left, right)
    });
    Decomposition {
        values,
        vectors,
        converged: true,
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Classical Gram-Schmidt with one reorthogonalisation pass. Returns the
/// accumulated projection coefficients.
fn orthogonalise(x: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, b) in coeffs.iter_mut().zip(basis) {
            let h = dot(b, x);
            *c += h;
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= h * bi;
            }
        }
    }
    coeffs
}

struct Krylov<'a> {
    a: &'a SparseAdjacency,
    k: usize,
    tol: f64,
    max_basis: usize,
    rng: ChaCha8Rng,
    right: Vec<Vec<f64>>,
    left: Vec<Vec<f64>>,
    /// Column `j` holds the coefficients of `A v_j` on the left basis.
    b_cols: Vec<Vec<f64>>,
    /// `(I - V Vᵀ) Aᵀ u` for left vectors not yet absorbed into `V`, keyed by left index.
    pending: Vec<(usize, Vec<f64>)>,
}

struct Ritz {
    values: Vec<f64>,
    residuals: Vec<f64>,
    p: DMatrix<f64>,
    q: DMatrix<f64>,
}

impl<'a> Krylov<'a> {
    fn new(a: &'a SparseAdjacency, k: usize, opts: &SvdOptions) -> Self {
        let n = a.n_nodes();
        Krylov {
            a,
            k,
            tol: opts.tolerance,
            max_basis: opts.max_basis.unwrap_or(n).clamp(k.min(n), n),
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            right: Vec::new(),
            left: Vec::new(),
            b_cols: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn random_vector(&mut self) -> Vec<f64> {
        let n = self.a.n_nodes();
        (0..n).map(|_| self.rng.random_range(-1.0..1.0)).collect()
    }

    /// Adds `candidate` to the right basis if it is independent, and extends
    /// the left basis with the new part of `A v`. Returns whether `v` was added.
    fn push_right(&mut self, mut candidate: Vec<f64>) -> bool {
        let before = norm(&candidate);
        if before == 0.0 || self.right.len() >= self.a.n_nodes() {
            return false;
        }
        orthogonalise(&mut candidate, &self.right);
        let after = norm(&candidate);
        if after <= DEFLATION_TOL * before {
            return false;
        }
        candidate.iter_mut().for_each(|x| *x /= after);

        let mut av = vec![0.0; candidate.len()];
        self.a.mul_vec(&candidate, &mut av);
        self.right.push(candidate);
        // Existing pending remainders must stay orthogonal to the grown V.
        let v = self.right.last().unwrap();
        for (_, r) in self.pending.iter_mut() {
            let h = dot(v, r);
            r.iter_mut().zip(v).for_each(|(ri, vi)| *ri -= h * vi);
        }

        let scale = norm(&av);
        let mut col = orthogonalise(&mut av, &self.left);
        let rem = norm(&av);
        if scale > 0.0 && rem > DEFLATION_TOL * scale {
            av.iter_mut().for_each(|x| *x /= rem);
            col.push(rem);
            let mut atu = vec![0.0; av.len()];
            self.a.mul_t_vec(&av, &mut atu);
            orthogonalise(&mut atu, &self.right);
            self.left.push(av);
            self.pending.push((self.left.len() - 1, atu));
        }
        self.b_cols.push(col);
        true
    }

    /// One Krylov step: absorbs every pending remainder into `V`, plus
    /// `inject` random vectors. Returns false once the pair of subspaces is
    /// invariant and a random probe adds no new left direction.
    fn step(&mut self, inject: usize) -> bool {
        let pending = std::mem::take(&mut self.pending);
        for (_, r) in pending {
            self.push_right(r);
        }
        for _ in 0..inject {
            let r = self.random_vector();
            self.push_right(r);
        }
        if self.pending.is_empty() {
            // Breakdown: probe with random vectors until the left basis grows
            // or a probe shows range(A) is already spanned.
            loop {
                if self.right.len() >= self.a.n_nodes() {
                    return false;
                }
                let left_before = self.left.len();
                let r = self.random_vector();
                if !self.push_right(r) {
                    continue;
                }
                if self.left.len() == left_before {
                    return false;
                }
                return true;
            }
        }
        true
    }

    /// Ritz values, residual norms and left coefficients; right coefficients
    /// only when `with_right` is set.
    fn ritz(&self, with_right: bool) -> Ritz {
        let (mu, mv) = (self.left.len(), self.right.len());
        let b = DMatrix::from_fn(mu, mv, |i, j| self.b_cols[j].get(i).copied().unwrap_or(0.0));
        let svd = b.svd(true, with_right);
        let u = svd.u.expect("u");
        let order = descending_order(svd.singular_values.as_slice());
        let values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let p = DMatrix::from_fn(mu, order.len(), |r, c| u[(r, order[c])]);
        let q = match &svd.v_t {
            Some(vt) => DMatrix::from_fn(mv, order.len(), |r, c| vt[(order[c], r)]),
            None => DMatrix::zeros(0, 0),
        };
        let n = self.a.n_nodes();
        let residuals = (0..order.len())
            .map(|c| {
                let mut res = vec![0.0; n];
                for (li, r) in &self.pending {
                    let w = p[(*li, c)];
                    res.iter_mut().zip(r).for_each(|(x, ri)| *x += w * ri);
                }
                norm(&res)
            })
            .collect();
        Ritz {
            values,
            residuals,
            p,
            q,
        }
    }

    fn is_converged(&self, ritz: &Ritz) -> bool {
        if ritz.values.len() < self.k {
            return false;
        }
        let bound = self.tol * ritz.values[0].max(f64::MIN_POSITIVE);
        ritz.residuals[..self.k].iter().all(|&r| r <= bound)
    }

    fn run(mut self, want_vectors: bool) -> Decomposition {
        let n = self.a.n_nodes();
        let mut exhausted = false;
        let mut next_check = (2 * self.k + 10).min(self.max_basis);
        let mut accepted: Option<Vec<f64>> = None;
        let mut verify_until = 0usize;
        let mut inject = 1usize;

        let ritz = loop {
            while !exhausted && self.right.len() < next_check {
                exhausted = !self.step(inject);
                inject = 0;
            }
            let ritz = self.ritz(false);
            if exhausted || self.right.len() >= n {
                break (ritz, true);
            }
            let converged = self.is_converged(&ritz) && self.right.len() >= verify_until;
            if converged {
                let top = &ritz.values[..self.k];
                let bound = 10.0 * self.tol * ritz.values[0];
                if let Some(prev) = &accepted {
                    if prev.iter().zip(top).all(|(a, b)| (a - b).abs() <= bound) {
                        break (ritz, true);
                    }
                }
                accepted = Some(top.to_vec());
                inject = 1;
                verify_until = self.right.len() + VERIFY_STEPS;
            }
            if self.right.len() >= self.max_basis {
                break (ritz, false);
            }
            let grow = if converged {
                VERIFY_STEPS
            } else {
                (self.right.len() / 4).max(10)
            };
            next_check = (self.right.len() + grow).min(self.max_basis);
        };
        let (ritz, converged) = ritz;
        let ritz = if want_vectors { self.ritz(true) } else { ritz };

        let mut values: Vec<f64> = ritz.values.iter().take(self.k).copied().collect();
        let found = values.len();
        values.resize(self.k, 0.0);

        let vectors = want_vectors.then(|| {
            let left_basis = std::mem::take(&mut self.left);
            let right_basis = std::mem::take(&mut self.right);
            let left = self.lift(&left_basis, &ritz.p, found);
            let right = self.lift(&right_basis, &ritz.q, found);
            (left, right)
        });
        Decomposition {
            values,
            vectors,
            converged,
        }
    }

    /// Maps the first `found` small-space vectors back to `n`-space and
    /// completes to `k` orthonormal columns.
    fn lift(&mut self, basis: &[Vec<f64>], coeffs: &DMatrix<f64>, found: usize) -> DMatrix<f64> {
        let n = self.a.n_nodes();
        let mut cols: Vec<Vec<f64>> = (0..found)
            .map(|c| {
                let mut x = vec![0.0; n];
                for (r, b) in basis.iter().enumerate() {
                    let w = coeffs[(r, c)];
                    x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += w * bi);
                }
                x
            })
            .collect();
        while cols.len() < self.k {
            let mut x = self.random_vector();
            orthogonalise(&mut x, &cols);
            let nx = norm(&x);
            if nx > 1e-8 {
                x.iter_mut().for_each(|xi| *xi /= nx);
                cols.push(x);
            }
        }
        DMatrix::from_fn(n, self.k, |r, c| cols[c][r])
    }
}
