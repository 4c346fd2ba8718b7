//! Lanczos with full reorthogonalization and deflation.
//!
//! Each eigenpair comes from its own Krylov run started orthogonal to every
//! pair already locked, so degenerate eigenvalues are returned once per
//! independent eigenvector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::SparseRealMatrix;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov dimension cap per run.
    pub max_iter: usize,
    /// Restarts (from the current Ritz vector) before giving up.
    pub max_restarts: usize,
    /// Required `‖Hv - Ev‖` for every returned pair.
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { max_iter: 300, max_restarts: 20, residual_tol: 1e-10, seed: 0x5eed_1a2c }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Two passes of classical Gram-Schmidt against `basis`.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

/// Lowest eigenvalue and eigenvector of the tridiagonal matrix.
fn tridiagonal_lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty tridiagonal");
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

fn residual(h: &SparseRealMatrix, x: &[f64], scratch: &mut [f64]) -> (f64, f64) {
    h.matvec(x, scratch);
    let theta = dot(x, scratch);
    let r = scratch.iter().zip(x).map(|(hx, xi)| (hx - theta * xi).powi(2)).sum::<f64>().sqrt();
    (theta, r)
}

/// One Krylov run in the orthogonal complement of `locked`.
fn krylov_run(
    h: &SparseRealMatrix,
    locked: &[Vec<f64>],
    start: &[f64],
    max_iter: usize,
    target: f64,
) -> Option<Vec<f64>> {
    let n = h.dim();
    let mut v = start.to_vec();
    orthogonalize(&mut v, locked);
    let nv = norm(&v);
    if nv < 1e-12 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nv);

    let m_max = max_iter.min(n - locked.len()).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    let mut alphas = Vec::with_capacity(m_max);
    let mut betas: Vec<f64> = Vec::with_capacity(m_max);
    let mut w = vec![0.0; n];
    loop {
        h.matvec(&v, &mut w);
        let a = dot(&w, &v);
        axpy(-a, &v, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), betas.last()) {
            axpy(-b, prev, &mut w);
        }
        basis.push(v);
        alphas.push(a);
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let j = basis.len();
        let exhausted = b < 1e-12 || j == m_max;
        if exhausted || j.is_multiple_of(10) {
            let (_, y) = tridiagonal_lowest(&alphas, &betas);
            let estimate = b * y[j - 1].abs();
            if exhausted || estimate < target {
                let mut x = vec![0.0; n];
                for (yi, vi) in y.iter().zip(&basis) {
                    axpy(*yi, vi, &mut x);
                }
                orthogonalize(&mut x, locked);
                let nx = norm(&x);
                x.iter_mut().for_each(|xi| *xi /= nx);
                return Some(x);
            }
        }
        betas.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
}

/// The `k` lowest eigenpairs of a real symmetric matrix, ascending.
///
/// Returns fewer than `k` pairs only when the matrix dimension is smaller.
pub fn lowest_eigenpairs(h: &SparseRealMatrix, k: usize, opts: &LanczosOptions) -> Result<Vec<Eigenpair>> {
    let n = h.dim();
    let k = k.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(k);
    let mut scratch = vec![0.0; n];
    let mut total_iter = 0;
    while pairs.len() < k {
        let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut best = f64::INFINITY;
        let mut accepted = None;
        for _ in 0..=opts.max_restarts {
            let Some(x) = krylov_run(h, &locked, &start, opts.max_iter, 0.01 * opts.residual_tol) else {
                // start vector lay inside the locked span; draw another
                start = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                continue;
            };
            total_iter += opts.max_iter.min(n);
            let (theta, r) = residual(h, &x, &mut scratch);
            best = best.min(r);
            if r <= opts.residual_tol {
                accepted = Some(Eigenpair { value: theta, vector: x, residual: r });
                break;
            }
            start = x;
        }
        match accepted {
            Some(pair) => {
                locked.push(pair.vector.clone());
                pairs.push(pair);
            }
            None => return Err(Error::NoConvergence { iterations: total_iter, residual: best }),
        }
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}
