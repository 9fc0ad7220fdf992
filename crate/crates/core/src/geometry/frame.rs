//! The map `H = g^{-1/2}`, the orthonormal frame `ε_i = H e_i` and the
//! connection form `ω_j^k(X) = g(∇_X ε_j, ε_k)` of the Levi-Civita
//! connection in that frame.

use nalgebra::DMatrix;

use super::chart::MetricPoint;
use crate::error::{arg, Result};

/// Connection coefficients `ω_j^k(e_x)` stored as `omega[x][(j, k)]`
/// together with the frame map `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameData {
    pub h: DMatrix<f64>,
    pub omega: Vec<DMatrix<f64>>,
}

impl FrameData {
    pub fn zero(n: usize) -> Self {
        Self { h: DMatrix::identity(n, n), omega: vec![DMatrix::zeros(n, n); n] }
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    /// `ω(X) = Σ_x X_x ω(e_x)`.
    pub fn at(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n();
        x.iter().zip(&self.omega).fold(DMatrix::zeros(n, n), |acc, (xi, w)| acc + w * *xi)
    }

    /// Largest `|ω_j^k + ω_k^j|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.omega.iter().map(|w| (w + w.transpose()).amax()).fold(0.0, f64::max)
    }

    /// Largest entry of `ω`.
    pub fn max_abs(&self) -> f64 {
        self.omega.iter().map(|w| w.amax()).fold(0.0, f64::max)
    }
}

/// Principal inverse square root of a symmetric positive definite matrix,
/// with its eigen-decomposition `(Q, s)` where `g = Q diag(s²) Qᵀ`.
fn inverse_sqrt(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<f64>)> {
    let n = g.nrows();
    if g.ncols() != n {
        return arg("metric must be square");
    }
    let scale = g.amax().max(1.0);
    if (g - g.transpose()).amax() > 1e-12 * scale {
        return arg("metric is not symmetric");
    }
    let eig = g.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return arg("metric is not positive definite");
    }
    let s: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let q = eig.eigenvectors;
    let inv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, s.iter().map(|v| 1.0 / v)));
    let h = &q * inv * q.transpose();
    Ok(((&h + h.transpose()) * 0.5, q, s))
}

/// The symmetric positive `H` with `H g H = δ`.
pub fn h_map(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(inverse_sqrt(g)?.0)
}

/// `H` and its coordinate derivatives `∂_k H`, obtained from the Sylvester
/// equation `S Ẏ + Ẏ S = −H ġ H` with `S = g^{1/2}`, solved in the eigenbasis
/// of `g`.
pub fn h_map_with_derivatives(p: &MetricPoint) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
    let n = p.n();
    let (h, q, s) = inverse_sqrt(&p.g)?;
    let qt = q.transpose();
    let dh = p
        .dg
        .iter()
        .map(|dg| {
            let rhs = -(&qt * &h * dg * &h * &q);
            let y = DMatrix::from_fn(n, n, |i, j| rhs[(i, j)] / (s[i] + s[j]));
            &q * y * &qt
        })
        .collect();
    Ok((h, dh))
}

/// Connection form from the three-line expression in terms of `H` and its
/// flat derivatives:
///
/// `ω_j^k(X) = ½ g((∂_X H)e_j − (∂_{He_j}H)H⁻¹X, He_k)
///           − ½ g((∂_X H)e_k − (∂_{He_k}H)H⁻¹X, He_j)
///           − ½ g((∂_{He_j}H)e_k − (∂_{He_k}H)e_j, HX)`.
///
/// This agrees with the Levi-Civita connection form to first order in
/// `g − δ` only: for `g = φ²δ` it returns `½(1 + 1/φ)` times the true value.
/// It is kept for comparison; [`connection_form_exact`] is exact.
pub fn connection_form_three_term(p: &MetricPoint) -> Result<FrameData> {
    let n = p.n();
    let (h, dh) = h_map_with_derivatives(p)?;
    let h_inv = &p.g * &h;
    let g = &p.g;
    // ∂_{He_j} H
    let along: Vec<DMatrix<f64>> = (0..n)
        .map(|j| (0..n).fold(DMatrix::zeros(n, n), |acc, m| acc + &dh[m] * h[(m, j)]))
        .collect();
    let gh = g * &h;
    let inner = |v: &nalgebra::DVector<f64>, k: usize| -> f64 { v.dot(&gh.column(k)) };
    let mut omega = Vec::with_capacity(n);
    for x in 0..n {
        let h_inv_x = h_inv.column(x).into_owned();
        let hx = h.column(x).into_owned();
        let first = DMatrix::from_fn(n, n, |j, k| {
            let v = dh[x].column(j) - &along[j] * &h_inv_x;
            0.5 * inner(&v, k)
        });
        let w = DMatrix::from_fn(n, n, |j, k| {
            let v = along[j].column(k) - along[k].column(j);
            first[(j, k)] - first[(k, j)] - 0.5 * v.dot(&(g * &hx))
        });
        omega.push(w);
    }
    Ok(FrameData { h, omega })
}

/// Levi-Civita connection form in the frame `He_i`, computed from the
/// Christoffel symbols: `ω_j^k(X) = g(∂_X(He_j) + Γ(X, He_j), He_k)`.
pub fn connection_form_exact(p: &MetricPoint) -> Result<FrameData> {
    let n = p.n();
    let (h, dh) = h_map_with_derivatives(p)?;
    let hg = &h * &p.g;
    // Γ_{d,ab} = ½(∂_a g_bd + ∂_b g_ad − ∂_d g_ab)
    let gamma = |d: usize, a: usize, b: usize| 0.5 * (p.d(a, b, d) + p.d(b, a, d) - p.d(d, a, b));
    let mut omega = Vec::with_capacity(n);
    for x in 0..n {
        let flat = &hg * &dh[x];
        // C[d][b] = Γ_{d,xb}
        let c = DMatrix::from_fn(n, n, |d, b| gamma(d, x, b));
        let christoffel = h.transpose() * c * &h;
        omega.push(DMatrix::from_fn(n, n, |j, k| flat[(k, j)] + christoffel[(k, j)]));
    }
    Ok(FrameData { h, omega })
}

/// Leading order connection form `ω_j^k(X) = ½(∂_j g(X, e_k) − ∂_k g(X, e_j))`
/// with `H` replaced by the identity.
pub fn connection_form_asymptotic(p: &MetricPoint) -> FrameData {
    let n = p.n();
    let omega = (0..n)
        .map(|x| DMatrix::from_fn(n, n, |j, k| 0.5 * (p.d(j, x, k) - p.d(k, x, j))))
        .collect();
    FrameData { h: DMatrix::identity(n, n), omega }
}

/// Projection of `ω ∈ R^n ⊗ so(n)` onto its `R^n` summand, normalized so
/// that `π(i(α)) = α`: `π(ω)_k = Σ_j ω_j^k(e_j) / (1 − n)`.
pub fn pi_projection(frame: &FrameData) -> Vec<f64> {
    let n = frame.n();
    (0..n)
        .map(|k| (0..n).map(|j| frame.omega[j][(j, k)]).sum::<f64>() / (1.0 - n as f64))
        .collect()
}

/// `i(α)(X) = α ∧ X`, i.e. `ω_j^k(e_x) = α_j δ_kx − α_k δ_jx`.
pub fn embed(alpha: &[f64]) -> FrameData {
    let n = alpha.len();
    let omega = (0..n)
        .map(|x| {
            DMatrix::from_fn(n, n, |j, k| {
                alpha[j] * f64::from(u8::from(k == x)) - alpha[k] * f64::from(u8::from(j == x))
            })
        })
        .collect();
    FrameData { h: DMatrix::identity(n, n), omega }
}
