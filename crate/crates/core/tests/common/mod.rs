#![allow(dead_code)]

use shufflesor::problems::random_normalized_factor;
use shufflesor::{c64, Complex64, DenseMatrix, HermitianMatrix, RngState};

pub fn random_hermitian(n: usize, complex: bool, rng: &mut RngState) -> HermitianMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c64(rng.standard_normal(), 0.0);
        for j in 0..i {
            let im = if complex { rng.standard_normal() } else { 0.0 };
            let v = c64(rng.standard_normal(), im);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    HermitianMatrix::new(m).unwrap()
}

/// PSD unit-diagonal `B = AA^*` from an `n×m` factor with unit rows.
pub fn random_psd(n: usize, m: usize, complex: bool, rng: &mut RngState) -> HermitianMatrix {
    random_normalized_factor(n, m, complex, rng).unwrap().matrix
}

pub fn random_vector(n: usize, complex: bool, rng: &mut RngState) -> Vec<Complex64> {
    (0..n)
        .map(|_| c64(rng.standard_normal(), if complex { rng.standard_normal() } else { 0.0 }))
        .collect()
}

pub fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Number of eigenvalues of `B` below `t`, from the signs of the pivots of
/// an LDL^* factorization of `B − tI` (Sylvester inertia).
pub fn count_below(b: &HermitianMatrix, t: f64) -> usize {
    let n = b.n();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| b.row(i).to_vec()).collect();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= t;
    }
    let mut negative = 0;
    for k in 0..n {
        let mut pivot = m[k][k].re;
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negative += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            for j in k + 1..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    negative
}

/// Eigenvalues (non-increasing) by bisection on the inertia count.
pub fn bisection_eigenvalues(b: &HermitianMatrix) -> Vec<f64> {
    let n = b.n();
    let bound = 1.0 + b.as_dense().as_slice().iter().map(|v| v.norm()).sum::<f64>();
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        // k-th smallest: smallest t with count_below(t) > k.
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count_below(b, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        values.push(0.5 * (lo + hi));
    }
    values.reverse();
    values
}

/// Solves `M c = y` for square `M` by Gaussian elimination with partial pivoting.
pub fn solve(m: &DenseMatrix, y: &[Complex64]) -> Vec<Complex64> {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut rhs = y.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        a.swap(k, p);
        rhs.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
            let v = rhs[k];
            rhs[i] -= f * v;
        }
    }
    let mut c = vec![c64(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for j in k + 1..n {
            acc -= a[k][j] * c[j];
        }
        c[k] = acc / a[k][k];
    }
    c
}
