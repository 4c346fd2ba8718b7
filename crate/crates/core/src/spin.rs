//! Spin operator matrices, two-spin exchange operators and Clebsch-Gordan
//! coefficients.
//!
//! Local basis states are ordered by descending magnetic quantum number:
//! index `k` carries `m = s - k`.

use nalgebra::DMatrix;

use crate::sparse::SparseRealMatrix;

/// Spin magnitude stored as `2s`, so spin ½ is `1` and spin 1 is `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinValue {
    twice_s: u32,
}

impl SpinValue {
    pub const HALF: SpinValue = SpinValue { twice_s: 1 };
    pub const ONE: SpinValue = SpinValue { twice_s: 2 };

    pub const fn from_twice(twice_s: u32) -> Self {
        Self { twice_s }
    }

    pub const fn twice(self) -> u32 {
        self.twice_s
    }

    pub fn value(self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// Local Hilbert-space dimension `2s + 1`.
    pub const fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    /// `s(s+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    /// Magnetic quantum number of local basis index `k`.
    pub fn m_of(self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

impl std::fmt::Display for SpinValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice_s.is_multiple_of(2) {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

/// `Sz`, `S+`, `S-` for one spin.
#[derive(Debug, Clone)]
pub struct LocalOperators {
    pub s: SpinValue,
    pub sz: DMatrix<f64>,
    pub s_plus: DMatrix<f64>,
    pub s_minus: DMatrix<f64>,
}

impl LocalOperators {
    pub fn sx(&self) -> DMatrix<f64> {
        (&self.s_plus + &self.s_minus) * 0.5
    }

    /// `i·Sy`, which is real: `(S+ - S-)/2`. `Sy² = -(i·Sy)²`.
    pub fn i_sy(&self) -> DMatrix<f64> {
        (&self.s_plus - &self.s_minus) * 0.5
    }
}

/// Ladder matrix element `⟨m'|S±|m⟩` for `m' = m ± 1`.
pub fn ladder_element(s: SpinValue, m: f64, m_new: f64) -> f64 {
    (s.casimir() - m * m_new).max(0.0).sqrt()
}

pub fn make_local_operators(s: SpinValue) -> LocalOperators {
    let d = s.dim();
    let sz = DMatrix::from_fn(d, d, |r, c| if r == c { s.m_of(r) } else { 0.0 });
    // S+ raises m, i.e. lowers the index: S+[k-1, k].
    let s_plus = DMatrix::from_fn(d, d, |r, c| {
        if r + 1 == c {
            ladder_element(s, s.m_of(c), s.m_of(r))
        } else {
            0.0
        }
    });
    let s_minus = s_plus.transpose();
    LocalOperators { s, sz, s_plus, s_minus }
}

/// `S_a·S_b = Sz⊗Sz + ½(S+⊗S- + S-⊗S+)` on the product space, first factor
/// major.
pub fn exchange_coupling(sa: SpinValue, sb: SpinValue) -> SparseRealMatrix {
    let a = make_local_operators(sa);
    let b = make_local_operators(sb);
    let dense = a.sz.kronecker(&b.sz) + (a.s_plus.kronecker(&b.s_minus) + a.s_minus.kronecker(&b.s_plus)) * 0.5;
    let dim = dense.nrows();
    let triplets = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let v = dense[(r, c)];
            (v != 0.0).then_some((r, c, v))
        })
        .collect();
    SparseRealMatrix::from_triplets(dim, triplets)
}

fn factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩`, all arguments given as
/// twice their value.
///
/// Condon-Shortley phase: `⟨j1 j1; j2 (J-j1) | J J⟩ > 0`. Invalid or
/// non-coupling quantum numbers give 0.
pub fn clebsch_gordan(tj1: i32, tj2: i32, tm1: i32, tm2: i32, tj: i32, tm: i32) -> f64 {
    if tj1 < 0 || tj2 < 0 || tj < 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    if tm1 + tm2 != tm {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i32| -> i64 { (x / 2) as i64 };
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tm1);
    let c = h(tj2 + tm2);
    let d = h(tj - tj2 + tm1);
    let e = h(tj - tj1 - tm2);
    let prefactor = ((tj + 1) as f64 * factorial(h(tj + tj1 - tj2)) * factorial(h(tj - tj1 + tj2)) * factorial(a)
        / factorial(h(tj1 + tj2 + tj) + 1))
    .sqrt()
        * (factorial(h(tj + tm))
            * factorial(h(tj - tm))
            * factorial(h(tj1 - tm1))
            * factorial(h(tj1 + tm1))
            * factorial(h(tj2 - tm2))
            * factorial(h(tj2 + tm2)))
        .sqrt();
    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign
            / (factorial(k)
                * factorial(a - k)
                * factorial(b - k)
                * factorial(c - k)
                * factorial(d + k)
                * factorial(e + k));
    }
    prefactor * sum
}

/// Columns are the coupled states `|J M⟩` of `sa ⊗ sb`, ordered by ascending
/// `J` then descending `M`, expanded in the product basis (first factor
/// major). Also returns the `2J` label of each column.
pub fn coupled_basis(sa: SpinValue, sb: SpinValue) -> (DMatrix<f64>, Vec<i32>) {
    let (ta, tb) = (sa.twice() as i32, sb.twice() as i32);
    let (da, db) = (sa.dim(), sb.dim());
    let dim = da * db;
    let mut u = DMatrix::zeros(dim, dim);
    let mut labels = Vec::with_capacity(dim);
    let mut col = 0;
    let mut tj = (ta - tb).abs();
    while tj <= ta + tb {
        let mut tm = tj;
        while tm >= -tj {
            for ka in 0..da {
                for kb in 0..db {
                    let tma = ta - 2 * ka as i32;
                    let tmb = tb - 2 * kb as i32;
                    u[(ka * db + kb, col)] = clebsch_gordan(ta, tb, tma, tmb, tj, tm);
                }
            }
            labels.push(tj);
            col += 1;
            tm -= 2;
        }
        tj += 2;
    }
    (u, labels)
}

/// Projector onto total spin `J` (given as `2J`) in `sa ⊗ sb`.
pub fn total_spin_projector(sa: SpinValue, sb: SpinValue, twice_j: i32) -> DMatrix<f64> {
    let (u, labels) = coupled_basis(sa, sb);
    let dim = u.nrows();
    let mut p = DMatrix::zeros(dim, dim);
    for (col, &tj) in labels.iter().enumerate() {
        if tj == twice_j {
            let v = u.column(col);
            p += v * v.transpose();
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn spin_half_and_one_matrices() {
        let h = make_local_operators(SpinValue::HALF);
        assert_eq!(h.sz, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]));
        let one = make_local_operators(SpinValue::ONE);
        assert_eq!(one.sz, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, -1.0])));
        let nz: Vec<f64> = one.s_plus.iter().copied().filter(|v| *v != 0.0).collect();
        assert_eq!(nz.len(), 2);
        for v in nz {
            assert!((v - 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn local_operator_invariants() {
        for t in 0..=6 {
            let s = SpinValue::from_twice(t);
            let ops = make_local_operators(s);
            let comm = &ops.sz * &ops.s_plus - &ops.s_plus * &ops.sz;
            assert!((comm - &ops.s_plus).abs().max() <= 1e-14);
            let sx = ops.sx();
            let isy = ops.i_sy();
            let s2 = &sx * &sx - &isy * &isy + &ops.sz * &ops.sz;
            let expect = DMatrix::identity(s.dim(), s.dim()) * s.casimir();
            assert!((s2 - expect).abs().max() <= 1e-13, "casimir for 2s={t}");
            assert_eq!(ops.s_minus, ops.s_plus.transpose());
        }
    }

    #[test]
    fn exchange_spectra() {
        let cases = [
            (SpinValue::HALF, SpinValue::HALF, vec![-0.75, 0.25, 0.25, 0.25]),
            (SpinValue::HALF, SpinValue::ONE, vec![-1.0, -1.0, 0.5, 0.5, 0.5, 0.5]),
            (
                SpinValue::ONE,
                SpinValue::ONE,
                vec![-2.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            ),
        ];
        for (a, b, expect) in cases {
            let x = exchange_coupling(a, b);
            assert_eq!(x.trace(), 0.0);
            assert_eq!(x.max_asymmetry(), 0.0);
            let e = sorted_eigenvalues(x.to_dense());
            for (got, want) in e.iter().zip(&expect) {
                assert!((got - want).abs() < 1e-12, "{a}x{b}: {e:?}");
            }
        }
    }

    #[test]
    fn exchange_commutes_with_total_sz() {
        for (a, b) in [
            (SpinValue::HALF, SpinValue::HALF),
            (SpinValue::HALF, SpinValue::ONE),
            (SpinValue::ONE, SpinValue::ONE),
        ] {
            let x = exchange_coupling(a, b).to_dense();
            let oa = make_local_operators(a);
            let ob = make_local_operators(b);
            let sz = oa.sz.kronecker(&DMatrix::identity(b.dim(), b.dim()))
                + DMatrix::identity(a.dim(), a.dim()).kronecker(&ob.sz);
            assert_eq!(&x * &sz - &sz * &x, DMatrix::zeros(x.nrows(), x.nrows()));
        }
    }

    #[test]
    fn clebsch_gordan_values() {
        let r2 = 1.0 / 2f64.sqrt();
        assert!((clebsch_gordan(1, 1, 1, -1, 0, 0) - r2).abs() < 1e-15);
        assert!((clebsch_gordan(1, 2, 1, 2, 3, 3) - 1.0).abs() < 1e-15);
        // Condon-Shortley: highest-weight coefficient positive.
        assert!((clebsch_gordan(1, 2, 1, 0, 1, 1) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((clebsch_gordan(1, 2, -1, 2, 1, 1) + (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // M != m1 + m2, bad parity, triangle violation.
        assert_eq!(clebsch_gordan(1, 1, 1, 1, 2, 0), 0.0);
        assert_eq!(clebsch_gordan(1, 1, 0, 1, 1, 1), 0.0);
        assert_eq!(clebsch_gordan(1, 1, 1, -1, 4, 0), 0.0);
    }

    #[test]
    fn coupled_basis_is_orthogonal() {
        for (a, b) in [
            (SpinValue::HALF, SpinValue::HALF),
            (SpinValue::HALF, SpinValue::ONE),
            (SpinValue::ONE, SpinValue::ONE),
            (SpinValue::ONE, SpinValue::HALF),
        ] {
            let (u, _) = coupled_basis(a, b);
            let id = DMatrix::<f64>::identity(u.nrows(), u.nrows());
            assert!((u.transpose() * &u - id).abs().max() <= 1e-13);
        }
    }

    #[test]
    fn coupled_states_diagonalize_exchange() {
        // Each |J M⟩ is an eigenvector of S_a·S_b with ½(J(J+1) - s_a(s_a+1) - s_b(s_b+1)).
        for (a, b) in [
            (SpinValue::HALF, SpinValue::HALF),
            (SpinValue::HALF, SpinValue::ONE),
            (SpinValue::ONE, SpinValue::ONE),
        ] {
            let x = exchange_coupling(a, b).to_dense();
            let (u, labels) = coupled_basis(a, b);
            for (col, &tj) in labels.iter().enumerate() {
                let j = tj as f64 / 2.0;
                let e = 0.5 * (j * (j + 1.0) - a.casimir() - b.casimir());
                let v = u.column(col).into_owned();
                assert!((&x * &v - &v * e).norm() < 1e-13);
            }
        }
    }
}
