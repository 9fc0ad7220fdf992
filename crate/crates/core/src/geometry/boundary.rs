//! The boundary term `−Σ_κ ∮ ⟨ν⊗σ_κ, A(ρ(ω)σ_κ)⟩` of a Weitzenböck formula
//! for constant sections, and its comparison with `μ(a)·m(g)`.

use serde::Serialize;

use super::chart::{ChartInfo, MetricChart};
use super::frame::{connection_form_exact, FrameData};
use super::mass::{check_radii, extrapolate, mass_quadrature, Extrapolation, MassReport};
use super::quadrature::SphereQuadrature;
use crate::error::{arg, Result};
use crate::rational::{self, Rational};
use crate::spectral::linalg::{max_abs, CMatrix, C64};
use crate::spectral::{pair_count, pair_index, MatrixRep, ProjectionSet};
use crate::weights::Decomposition;
use crate::weitzenbock::{mass_coefficient, CoefficientVector};

/// How the normal, the frame and the area element are taken on `S_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameMode {
    /// Euclidean normal `x/r`, euclidean area, `ω` evaluated on `e_X`.
    Euclidean,
    /// `g`-unit normal expressed in the frame `He_i`, `ω` evaluated on
    /// `He_X` and the area element induced by `g`.
    Exact,
}

/// `T_{i,X,p} = Σ_κ ⟨e_i⊗σ_κ, A(e_X ⊗ ρ(e_a∧e_b)σ_κ)⟩` for the pair `p = (a,b)`.
#[derive(Debug, Clone)]
pub struct BoundaryKernel {
    n: usize,
    pairs: Vec<(usize, usize)>,
    t: Vec<C64>,
}

impl BoundaryKernel {
    /// Kernel for `A = Σ a_j Π_j`, summing over the basis in which the
    /// representation is written.
    pub fn new(rep: &MatrixRep, proj: &ProjectionSet, a: &[f64]) -> Result<Self> {
        check_alignment(rep, proj, a)?;
        let d = rep.dim_v();
        Self::build(rep, &proj.combination(a), |block, rho| {
            let mut tr = C64::new(0.0, 0.0);
            for r in 0..d {
                for k in 0..d {
                    tr += block[(r, k)] * rho[(k, r)];
                }
            }
            tr
        })
    }

    /// Kernel with the sum over `κ` taken in an explicit orthonormal basis
    /// (the columns of `basis`).
    pub fn with_basis(rep: &MatrixRep, proj: &ProjectionSet, a: &[f64], basis: &CMatrix) -> Result<Self> {
        check_alignment(rep, proj, a)?;
        let d = rep.dim_v();
        if basis.nrows() != d || basis.ncols() != d {
            return arg(format!("basis must be {d}×{d}"));
        }
        if max_abs(&(basis.adjoint() * basis - CMatrix::identity(d, d))) > 1e-10 {
            return arg("basis is not orthonormal");
        }
        Self::build(rep, &proj.combination(a), |block, rho| {
            (0..d)
                .map(|k| {
                    let s = basis.column(k);
                    (s.adjoint() * (block * rho * s))[(0, 0)]
                })
                .sum()
        })
    }

    fn build<F>(rep: &MatrixRep, a: &CMatrix, contract: F) -> Result<Self>
    where
        F: Fn(&CMatrix, &CMatrix) -> C64,
    {
        let n = rep.n();
        let d = rep.dim_v();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect();
        let mut t = Vec::with_capacity(n * n * pairs.len());
        for i in 0..n {
            for x in 0..n {
                let block = a.view((i * d, x * d), (d, d)).into_owned();
                for &(p, q) in &pairs {
                    t.push(contract(&block, &rep.generators()[pair_index(n, p, q)]));
                }
            }
        }
        Ok(Self { n, pairs, t })
    }

    /// `−Re Σ_{i,X} ν_i Σ_{a<b} ω_a^b(X) T_{i,X,(a,b)}`, with `ω(X)` already
    /// evaluated on the chosen frame vectors.
    pub fn integrand(&self, nu: &[f64], omega: &[nalgebra::DMatrix<f64>]) -> f64 {
        let m = self.pairs.len();
        let mut total = 0.0;
        for (i, &nu_i) in nu.iter().enumerate() {
            if nu_i == 0.0 {
                continue;
            }
            for (x, w) in omega.iter().enumerate() {
                let base = (i * self.n + x) * m;
                let s: f64 = self
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(p, &(a, b))| w[(a, b)] * self.t[base + p].re)
                    .sum();
                total += nu_i * s;
            }
        }
        -total
    }

    /// Largest imaginary part of the kernel (zero up to rounding).
    pub fn imaginary_defect(&self) -> f64 {
        self.t.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn check_alignment(rep: &MatrixRep, proj: &ProjectionSet, a: &[f64]) -> Result<()> {
    if proj.n != rep.n() || proj.dim_v != rep.dim_v() {
        return arg("projection set does not belong to this representation");
    }
    if a.len() != proj.len() {
        return arg(format!("coefficient vector has {} entries, expected {}", a.len(), proj.len()));
    }
    debug_assert_eq!(pair_count(rep.n()), rep.generators().len());
    Ok(())
}

/// Integrand of the boundary term at `x` for the given frame mode.
fn boundary_integrand(chart: &MetricChart, kernel: &BoundaryKernel, x: &[f64], nu0: &[f64], mode: FrameMode) -> f64 {
    let p = chart.eval_unchecked(x);
    let frame = match connection_form_exact(&p) {
        Ok(f) => f,
        Err(_) => return f64::NAN,
    };
    match mode {
        FrameMode::Euclidean => kernel.integrand(nu0, &frame.omega),
        FrameMode::Exact => {
            let (nu, omega, area) = exact_frame(&p.g, &frame, nu0);
            kernel.integrand(&nu, &omega) * area
        }
    }
}

/// Frame components of the `g`-unit normal, `ω(He_X)` and the ratio of the
/// induced area element to the euclidean one.
fn exact_frame(g: &nalgebra::DMatrix<f64>, frame: &FrameData, nu0: &[f64]) -> (Vec<f64>, Vec<nalgebra::DMatrix<f64>>, f64) {
    let n = nu0.len();
    let h = &frame.h;
    let hn: Vec<f64> = (0..n).map(|i| (0..n).map(|k| h[(i, k)] * nu0[k]).sum()).collect();
    let s = hn.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nu = hn.iter().map(|v| v / s).collect();
    let omega = (0..n)
        .map(|x| (0..n).fold(nalgebra::DMatrix::zeros(n, n), |acc, m| acc + &frame.omega[m] * h[(m, x)]))
        .collect();
    let area = g.determinant().sqrt() * s;
    (nu, omega, area)
}

/// Boundary term on the sphere of radius `radius`.
pub fn boundary_integral(
    chart: &MetricChart,
    kernel: &BoundaryKernel,
    radius: f64,
    quad_order: usize,
    mode: FrameMode,
) -> Result<f64> {
    check_radii(chart, &[radius])?;
    if kernel.n != chart.n() {
        return arg("chart and representation dimensions differ");
    }
    let q = SphereQuadrature::new(chart.n(), radius, quad_order)?;
    let value = q.integrate(|x, nu| boundary_integrand(chart, kernel, x, nu, mode));
    if !value.is_finite() {
        return arg("metric degenerate on the integration sphere");
    }
    Ok(value)
}

/// `−Σ_κ ∮_{S_r} ⟨ν⊗σ_κ, A(ρ(ω)σ_κ)⟩ dA` for `A = Σ a_j Π_j`.
pub fn boundary_term(
    chart: &MetricChart,
    rep: &MatrixRep,
    proj: &ProjectionSet,
    a: &CoefficientVector,
    radius: f64,
    quad_order: usize,
    mode: FrameMode,
) -> Result<f64> {
    let kernel = BoundaryKernel::new(rep, proj, &a.to_f64())?;
    boundary_integral(chart, &kernel, radius, quad_order, mode)
}

/// Boundary terms on several radii with their extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub chart: ChartInfo,
    pub frame: FrameMode,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub limit: f64,
    pub error_estimate: f64,
    pub model_exponent: Option<f64>,
    pub fit_residual: f64,
    pub quad_order: usize,
    pub flags: Vec<String>,
}

impl BoundaryReport {
    fn new(chart: &MetricChart, frame: FrameMode, radii: &[f64], values: Vec<f64>, quad_order: usize) -> Self {
        let fit = extrapolate(radii, &values);
        Self {
            chart: chart.info(),
            frame,
            radii: radii.to_vec(),
            values,
            limit: fit.limit,
            error_estimate: fit.error_estimate,
            model_exponent: fit.model_exponent,
            fit_residual: fit.fit_residual,
            quad_order,
            flags: fit.flags,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,value\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            out.push_str(&format!("{r},{v}\n"));
        }
        out
    }
}

pub fn boundary_report(
    chart: &MetricChart,
    rep: &MatrixRep,
    proj: &ProjectionSet,
    a: &CoefficientVector,
    radii: &[f64],
    quad_order: usize,
    mode: FrameMode,
) -> Result<BoundaryReport> {
    check_radii(chart, radii)?;
    let kernel = BoundaryKernel::new(rep, proj, &a.to_f64())?;
    let values = radii
        .iter()
        .map(|&r| boundary_integral(chart, &kernel, r, quad_order, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryReport::new(chart, mode, radii, values, quad_order))
}

/// Boundary term against `μ(a)` times the mass, radius by radius and in the
/// limit.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub mass: MassReport,
    pub boundary: BoundaryReport,
    /// `boundary(r) / mass(r)`.
    pub ratios: Vec<f64>,
    /// Extrapolation of the per-radius ratios.
    pub ratio_fit: Extrapolation,
    /// `limit(boundary) / limit(mass)`.
    pub ratio: f64,
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
    pub mu_value: f64,
    /// `|ratio − μ| / max(|μ|, 1e−12)`, or `|ratio|` when `μ = 0`.
    pub relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::RationalJson(q.clone()), s)
}

/// Relative tolerance on `boundary/mass − μ(a)` used by [`theorem_check`].
pub const THEOREM_TOL: f64 = 0.01;

/// Evaluates boundary term and mass on the same radii and compares the ratio
/// of their limits with `μ(a)`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_check(
    chart: &MetricChart,
    rep: &MatrixRep,
    proj: &ProjectionSet,
    decomp: &Decomposition,
    a: &CoefficientVector,
    radii: &[f64],
    quad_order: usize,
    mode: FrameMode,
) -> Result<TheoremReport> {
    let mu = mass_coefficient(decomp, a)?;
    let mass = mass_quadrature(chart, radii, quad_order)?;
    let boundary = boundary_report(chart, rep, proj, a, radii, quad_order, mode)?;
    if mass.limit == 0.0 {
        return arg("the mass vanishes, the ratio is undefined");
    }
    let ratios: Vec<f64> = boundary.values.iter().zip(&mass.values).map(|(b, m)| b / m).collect();
    let ratio_fit = extrapolate(radii, &ratios);
    let ratio = boundary.limit / mass.limit;
    let mu_value = rational::to_f64(&mu);
    let relative_error = if mu_value == 0.0 {
        ratio.abs()
    } else {
        (ratio - mu_value).abs() / mu_value.abs()
    };
    let passed = relative_error <= THEOREM_TOL;
    Ok(TheoremReport {
        mass,
        boundary,
        ratios,
        ratio_fit,
        ratio,
        mu,
        mu_value,
        relative_error,
        tolerance: THEOREM_TOL,
        passed,
    })
}
