use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};
use crate::svd::{svd_factors_with, SvdOptions};
use nalgebra::DMatrix;

/// Left and right latent positions of a rank-`d` RDPG fit.
///
/// `left_positions` is `n × d` (`U_d Σ_d^½`) and `right_positions` is
/// `d × n` (`Σ_d^½ V_dᵀ`), so their product is the best rank-`d`
/// approximation of the adjacency matrix in Frobenius norm.
#[derive(Debug, Clone)]
pub struct RdpgEmbedding {
    pub left_positions: DMatrix<f64>,
    pub right_positions: DMatrix<f64>,
    pub d: usize,
    pub singular_values: Vec<f64>,
}

impl RdpgEmbedding {
    /// Estimated probability of an edge `i → j`. Not clamped to `[0, 1]`.
    pub fn probability(&self, i: usize, j: usize) -> f64 {
        self.left_positions
            .row(i)
            .iter()
            .zip(self.right_positions.column(j).iter())
            .map(|(l, r)| l * r)
            .sum()
    }

    /// Dense `L̂ R̂`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.left_positions * &self.right_positions
    }
}

pub fn embed(a: &SparseAdjacency, d: usize) -> Result<RdpgEmbedding> {
    embed_with(a, d, &SvdOptions::default())
}

pub fn embed_with(a: &SparseAdjacency, d: usize, opts: &SvdOptions) -> Result<RdpgEmbedding> {
    let n = a.n_nodes();
    if d == 0 || d > n {
        return Err(Error::param("d", format!("must lie in 1..={n}, got {d}")));
    }
    let (left, values, right) = if a.is_directed() {
        let f = svd_factors_with(a, d, opts)?;
        (f.left, f.values, f.right)
    } else {
        symmetric_factors(a, d, opts)?
    };
    let root: Vec<f64> = values.iter().map(|s| s.sqrt()).collect();
    let left_positions = DMatrix::from_fn(n, d, |r, c| left[(r, c)] * root[c]);
    let right_positions = DMatrix::from_fn(d, n, |r, c| root[r] * right[(c, r)]);
    Ok(RdpgEmbedding {
        left_positions,
        right_positions,
        d,
        singular_values: values,
    })
}

/// Rank-`d` factors of a symmetric matrix whose product is symmetric.
///
/// A symmetric matrix has `u = ±v` for every singular pair, except inside a
/// cluster of equal singular values, where any rotation is admissible. When
/// the cut at `d` splits such a cluster, the kept vectors are rotated onto
/// eigenvectors of the cluster's sign operator `Vᵀ U` so that every kept term
/// `σ u vᵀ` is itself symmetric.
fn symmetric_factors(
    a: &SparseAdjacency,
    d: usize,
    opts: &SvdOptions,
) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let n = a.n_nodes();
    let mut k = (d + 8).min(n);
    let f = loop {
        let f = svd_factors_with(a, k, opts)?;
        let tol = TIE_TOL * f.values[0].max(f64::MIN_POSITIVE);
        let mut end = d;
        while end < f.values.len() && (f.values[d - 1] - f.values[end]).abs() <= tol {
            end += 1;
        }
        if end < f.values.len() || k == n {
            break f;
        }
        k = (2 * k).min(n);
    };
    let tol = TIE_TOL * f.values[0].max(f64::MIN_POSITIVE);
    let sigma = f.values[d - 1];
    let start = (0..d)
        .find(|&i| (f.values[i] - sigma).abs() <= tol)
        .unwrap();
    let end = (d..f.values.len())
        .find(|&i| (f.values[i] - sigma).abs() > tol)
        .unwrap_or(f.values.len());

    let mut left = f.left.columns(0, d).into_owned();
    let mut right = f.right.columns(0, d).into_owned();
    if end > d && sigma > tol {
        let m = end - start;
        let uc = f.left.columns(start, m);
        let vc = f.right.columns(start, m);
        let sign_op = vc.transpose() * uc;
        let sym = (&sign_op + sign_op.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        for (slot, &e) in order.iter().take(d - start).enumerate() {
            let y = eig.eigenvectors.column(e);
            right.set_column(start + slot, &(vc * y));
            left.set_column(start + slot, &(uc * y));
        }
    }
    Ok((left, f.values[..d].to_vec(), right))
}

/// Relative gap below which neighbouring singular values are treated as tied.
const TIE_TOL: f64 = 1e-8;
