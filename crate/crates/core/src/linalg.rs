//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// `a ⊗ b` with row index `i * b.nrows() + k`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list, the empty product being the 1×1 identity.
pub fn kron_all<'a>(mats: impl IntoIterator<Item = &'a CMat>) -> CMat {
    mats.into_iter().fold(identity(1), |acc, m| kron(&acc, m))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise difference; shape mismatch counts as infinite.
pub fn deviation(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// max(|U*U − 1|, |UU* − 1|).
pub fn unitarity_defect(u: &CMat) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let id = identity(n);
    deviation(&(u.adjoint() * u), &id).max(deviation(&(u * u.adjoint()), &id))
}

/// ⟨a, b⟩ = Tr(b* a), linear in the first slot.
pub fn frobenius(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Stacks columns: vec(X).
pub fn vectorize(m: &CMat) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &[C64], rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v)
}

/// Numerical rank via singular values, relative to the largest one.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top.max(1.0)).count()
}

/// Orthonormal basis of the kernel of `m`, from the eigenvectors of m*m with
/// eigenvalue below `rel_tol²` times the largest one.
pub fn nullspace(m: &CMat, rel_tol: f64) -> Vec<DVector<C64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..n).map(|k| DVector::from_fn(n, |r, _| c(if r == k { 1.0 } else { 0.0 }))).collect();
    }
    let gram = m.adjoint() * m;
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1.0);
    let cut = rel_tol * rel_tol * top;
    (0..n)
        .filter(|&k| eig.eigenvalues[k] <= cut)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Gram–Schmidt over candidate vectors in the given order, keeping at most
/// `limit` of them. Vectors whose residual norm falls below `tol` are skipped.
pub fn orthonormalize(candidates: impl IntoIterator<Item = DVector<C64>>, limit: usize, tol: f64) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for mut v in candidates {
        if basis.len() >= limit {
            break;
        }
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&v);
                v -= b * coeff;
            }
        }
        let n = v.norm();
        if n > tol {
            basis.push(v / c(n));
        }
    }
    basis
}
