//! Small dense linear algebra helpers shared by the representation builders.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Ascending eigenvalues and matching eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * c(0.5);
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Conjugates every operator into the subspace spanned by the orthonormal
/// columns of `basis`.
pub fn restrict(ops: &[CMatrix], basis: &CMatrix) -> Vec<CMatrix> {
    let adj = basis.adjoint();
    ops.iter().map(|x| &adj * x * basis).collect()
}

/// Gram-Schmidt step: orthogonalises `v` against `basis` (twice, for
/// stability) and returns it normalised, or `None` if nothing is left.
pub fn orthogonalize(basis: &[CVector], mut v: CVector, tol: f64) -> Option<CVector> {
    let scale = v.norm();
    if scale == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
    }
    let norm = v.norm();
    (norm > tol * scale.max(1.0)).then(|| v / c(norm))
}

pub fn columns_to_matrix(rows: usize, cols: &[CVector]) -> CMatrix {
    CMatrix::from_fn(rows, cols.len(), |r, k| cols[k][r])
}

/// Smallest invariant subspace containing `seeds`, for the Lie algebra whose
/// action on a vector is `act(generator_index, v)`.
pub fn generate_submodule<F>(dim: usize, generators: usize, seeds: &[CVector], act: F) -> CMatrix
where
    F: Fn(usize, &CVector) -> CVector,
{
    const TOL: f64 = 1e-8;
    let mut basis: Vec<CVector> = Vec::new();
    for s in seeds {
        if let Some(v) = orthogonalize(&basis, s.clone(), TOL) {
            basis.push(v);
        }
    }
    let mut next = 0;
    while next < basis.len() {
        let v = basis[next].clone();
        next += 1;
        for g in 0..generators {
            let w = act(g, &v);
            if let Some(u) = orthogonalize(&basis, w, TOL) {
                basis.push(u);
            }
        }
    }
    columns_to_matrix(dim, &basis)
}

/// Simultaneous eigenvectors of the commuting Hermitian operators `hs`,
/// each tagged with its doubled eigenvalues rounded to integers (the
/// doubled weight when `hs` are the Cartan generators).
pub fn weight_decomposition(hs: &[CMatrix]) -> Vec<(Vec<i64>, CVector)> {
    let dim = hs.first().map_or(0, |h| h.nrows());
    // generic combination: distinct weights get distinct eigenvalues
    let mut k = zeros(dim, dim);
    for (i, h) in hs.iter().enumerate() {
        k += h * c(1.0 / (std::f64::consts::PI + 1.7 * i as f64).powi(i as i32 + 1));
    }
    let (_, vecs) = hermitian_eigen(&k);
    (0..dim)
        .map(|j| {
            let v = vecs.column(j).into_owned();
            let w = hs.iter().map(|h| (2.0 * v.dotc(&(h * &v)).re).round() as i64).collect();
            (w, v)
        })
        .collect()
}

/// Orthonormal basis of the joint eigenspace of `hs` for the doubled
/// eigenvalues `target`.
pub fn joint_eigenspace(hs: &[CMatrix], target: &[i64]) -> CMatrix {
    let dim = hs.first().map_or(0, |h| h.nrows());
    let cols: Vec<CVector> = weight_decomposition(hs)
        .into_iter()
        .filter(|(w, _)| w.as_slice() == target)
        .map(|(_, v)| v)
        .collect();
    columns_to_matrix(dim, &cols)
}
