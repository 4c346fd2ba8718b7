//! Brute-force reference built without the library's basis, sector or
//! reduction code: explicit spin matrices, a full Kronecker-product
//! Hamiltonian, dense diagonalization and partial traces by index reshaping.


use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Local dimension of 1-based `site`: spin ½ on 4n-3, 4n-2 and spin 1 on 4n-1, 4n.
pub fn local_dim(site: usize) -> usize {
    if (site - 1) % 4 < 2 {
        2
    } else {
        3
    }
}

/// (Sz, S+) with basis order m = s, s-1, ..., -s.
fn spin_matrices(d: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    match d {
        2 => (
            DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        ),
        3 => {
            let r2 = 2f64.sqrt();
            (
                DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
                DMatrix::from_row_slice(3, 3, &[0.0, r2, 0.0, 0.0, 0.0, r2, 0.0, 0.0, 0.0]),
            )
        }
        _ => unreachable!(),
    }
}

/// Operator `op` acting on 1-based `site` of an `n`-site chain.
fn embed(n: usize, site: usize, op: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for s in 1..=n {
        let factor = if s == site { op.clone() } else { DMatrix::identity(local_dim(s), local_dim(s)) };
        out = out.kronecker(&factor);
    }
    out
}

/// Full Hamiltonian: ring bonds (i, i+1), J1 = 1 on odd i, alpha on even i.
pub fn hamiltonian(n: usize, alpha: f64) -> DMatrix<f64> {
    let dim: usize = (1..=n).map(local_dim).product();
    let mut h = DMatrix::zeros(dim, dim);
    for i in 1..=n {
        let j = i % n + 1;
        let coupling = if i % 2 == 1 { 1.0 } else { alpha };
        let (zi, pi) = spin_matrices(local_dim(i));
        let (zj, pj) = spin_matrices(local_dim(j));
        let (zi, zj) = (embed(n, i, &zi), embed(n, j, &zj));
        let (pi, pj) = (embed(n, i, &pi), embed(n, j, &pj));
        let flip = &pi * pj.transpose();
        h += (&zi * &zj + (&flip + flip.transpose()) * 0.5) * coupling;
    }
    h
}

pub struct Reference {
    pub n: usize,
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn solve(n: usize, alpha: f64) -> Reference {
    let eig = SymmetricEigen::new(hamiltonian(n, alpha));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_columns(&order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>());
    Reference { n, energies, vectors }
}

impl Reference {
    /// Normalized Gibbs weights; `beta = None` averages the ground multiplet.
    pub fn weights(&self, beta: Option<f64>) -> Vec<f64> {
        let e0 = self.energies[0];
        let w: Vec<f64> = self
            .energies
            .iter()
            .map(|&e| match beta {
                Some(b) => (-b * (e - e0)).exp(),
                None => f64::from(u8::from(e - e0 < 1e-7)),
            })
            .collect();
        let z: f64 = w.iter().sum();
        w.iter().map(|x| x / z).collect()
    }

    pub fn density_matrix(&self, weights: &[f64]) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| self.vectors[(r, c)] * weights[c]);
        scaled * self.vectors.transpose()
    }

    pub fn thermal_dm(&self, beta: Option<f64>) -> DMatrix<f64> {
        self.density_matrix(&self.weights(beta))
    }

    pub fn energy(&self, beta: Option<f64>) -> f64 {
        self.weights(beta).iter().zip(&self.energies).map(|(w, e)| w * e).sum()
    }

    /// Equal mixture of the eigenstates `members`.
    pub fn mixture_dm(&self, members: &[usize]) -> DMatrix<f64> {
        let mut w = vec![0.0; self.energies.len()];
        for &k in members {
            w[k] = 1.0 / members.len() as f64;
        }
        self.density_matrix(&w)
    }

    /// Indices of the `level`-th distinct energy level (0 = ground).
    pub fn level(&self, level: usize) -> Vec<usize> {
        let mut start = 0;
        for _ in 0..level {
            let e = self.energies[start];
            start += self.energies[start..].iter().take_while(|&&x| x - e < 1e-7).count();
        }
        let e = self.energies[start];
        (start..self.energies.len()).take_while(|&k| self.energies[k] - e < 1e-7).collect()
    }
}

/// Reduced density matrix of 1-based sites `i`, `j` (in that order) by
/// viewing each basis index as a tuple of site digits.
pub fn partial_trace(rho: &DMatrix<f64>, n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let dims: Vec<usize> = (1..=n).map(local_dim).collect();
    let dim = rho.nrows();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; n];
        for s in (0..n).rev() {
            d[s] = x % dims[s];
            x /= dims[s];
        }
        d
    };
    let all: Vec<Vec<usize>> = (0..dim).map(digits).collect();
    let (di, dj) = (dims[i - 1], dims[j - 1]);
    let mut out = DMatrix::zeros(di * dj, di * dj);
    for r in 0..dim {
        for c in 0..dim {
            let (a, b) = (&all[r], &all[c]);
            let rest_equal = (0..n).all(|s| s == i - 1 || s == j - 1 || a[s] == b[s]);
            if rest_equal {
                out[(a[i - 1] * dj + a[j - 1], b[i - 1] * dj + b[j - 1])] += rho[(r, c)];
            }
        }
    }
    out
}

/// log2 of the trace norm of the partial transpose on the second factor.
pub fn log_negativity(rho: &DMatrix<f64>, da: usize, db: usize) -> f64 {
    let pt = DMatrix::from_fn(da * db, da * db, |r, c| {
        let (a, b, a2, b2) = (r / db, r % db, c / db, c % db);
        rho[(a * db + b2, a2 * db + b)]
    });
    SymmetricEigen::new(pt).eigenvalues.iter().map(|l| l.abs()).sum::<f64>().log2()
}

/// `Tr(ρ S_a·S_b)` on a pair matrix with local dimensions (da, db).
pub fn exchange(rho: &DMatrix<f64>, da: usize, db: usize) -> f64 {
    let (za, pa) = spin_matrices(da);
    let (zb, pb) = spin_matrices(db);
    let flip = pa.kronecker(&pb.transpose());
    let op = za.kronecker(&zb) + (&flip + flip.transpose()) * 0.5;
    (rho * op).trace()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

pub fn unit(dim: usize, k: usize) -> DVector<f64> {
    DVector::from_fn(dim, |r, _| f64::from(u8::from(r == k)))
}
