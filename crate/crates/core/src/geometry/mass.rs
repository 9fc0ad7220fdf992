//! The ADM mass integrand, sphere integrals on a sequence of radii and the
//! extrapolation of those integrals to infinite radius.

use serde::Serialize;

use super::chart::{ChartInfo, MetricChart, MetricPoint};
use super::quadrature::SphereQuadrature;
use crate::error::{arg, Result};

/// `(div₀ g − d tr₀ g)_i = Σ_j (∂_j g_ij − ∂_i g_jj)`.
pub fn adm_covector(p: &MetricPoint) -> Vec<f64> {
    let n = p.n();
    (0..n)
        .map(|i| (0..n).map(|j| p.d(j, i, j) - p.d(i, j, j)).sum())
        .collect()
}

/// `(div₀ g − d tr₀ g)(ν)` with `ν = x/|x|`.
pub fn adm_integrand(p: &MetricPoint, x: &[f64]) -> f64 {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    adm_covector(p).iter().zip(x).map(|(a, xi)| a * xi / r).sum()
}

/// Result of fitting `value(r) = limit + c·r^{−s}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub error_estimate: f64,
    /// Fitted `s`; `None` when the values do not vary.
    pub model_exponent: Option<f64>,
    pub fit_residual: f64,
    pub flags: Vec<String>,
}

impl Extrapolation {
    pub fn accepted(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Least squares `(m, c)` and residual for a fixed exponent.
fn linear_fit(radii: &[f64], values: &[f64], s: f64) -> (f64, f64, f64) {
    let k = radii.len() as f64;
    let xs: Vec<f64> = radii.iter().map(|r| r.powf(-s)).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = values.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let m = my - c * mx;
    let res: f64 = xs.iter().zip(values).map(|(x, y)| (y - m - c * x).powi(2)).sum();
    (m, c, res)
}

const S_MIN: f64 = 0.05;
const S_MAX: f64 = 8.0;

/// Fits `value(r) = m + c·r^{−s}` with `s > 0` over all supplied radii by
/// minimizing the least squares residual in `s` (log grid followed by golden
/// section refinement).
///
/// The error estimate is the larger of the fit residual and a third of the
/// distance between the last value and the limit, so the last value always
/// lies within three error estimates of the limit.
pub fn extrapolate(radii: &[f64], values: &[f64]) -> Extrapolation {
    let mut flags = Vec::new();
    let k = values.len();
    let last = values.last().copied().unwrap_or(0.0);
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if k < 3 {
        flags.push(format!("only {k} radii, at least 3 are needed for extrapolation"));
        let spread = if k == 2 { (values[1] - values[0]).abs() } else { 0.0 };
        return Extrapolation { limit: last, error_estimate: spread, model_exponent: None, fit_residual: 0.0, flags };
    }
    let spread = values.iter().fold(0.0_f64, |m, v| m.max((v - last).abs()));
    if spread <= 1e-14 * scale.max(1e-300) || spread == 0.0 {
        return Extrapolation {
            limit: last,
            error_estimate: spread,
            model_exponent: None,
            fit_residual: 0.0,
            flags,
        };
    }
    let objective = |s: f64| linear_fit(radii, values, s).2;
    let grid = 240;
    let log_min = S_MIN.ln();
    let log_max = S_MAX.ln();
    let at = |i: usize| (log_min + (log_max - log_min) * i as f64 / grid as f64).exp();
    let best = (0..=grid)
        .min_by(|&a, &b| objective(at(a)).total_cmp(&objective(at(b))))
        .unwrap_or(0);
    let (mut lo, mut hi) = (at(best.saturating_sub(1)), at((best + 1).min(grid)));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..200 {
        if hi - lo < 1e-13 * hi {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    let s = 0.5 * (lo + hi);
    let (m, _, res) = linear_fit(radii, values, s);
    let fit_residual = (res / k as f64).sqrt();
    if best == 0 || best == grid {
        flags.push(format!("decay exponent at the edge of the search range ({s:.3})"));
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tol = 1e-12 * scale;
    let sign_change = diffs.windows(2).any(|d| d[0] * d[1] < 0.0 && d[0].abs() > tol && d[1].abs() > tol);
    let growing = diffs.windows(2).any(|d| d[1].abs() > d[0].abs() + tol);
    if sign_change || growing {
        flags.push("non-monotone convergence".into());
    }
    let error_estimate = fit_residual.max((last - m).abs() / 3.0).max(1e-15 * scale);
    Extrapolation { limit: m, error_estimate, model_exponent: Some(s), fit_residual, flags }
}

/// Per-radius values of a sphere integral and their extrapolated limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassReport {
    pub chart: ChartInfo,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub limit: f64,
    pub error_estimate: f64,
    pub model_exponent: Option<f64>,
    pub fit_residual: f64,
    pub quad_order: usize,
    pub flags: Vec<String>,
}

impl MassReport {
    pub fn from_values(chart: &MetricChart, radii: &[f64], values: Vec<f64>, quad_order: usize) -> Self {
        let fit = extrapolate(radii, &values);
        Self {
            chart: chart.info(),
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

    /// `radius,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,value\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            out.push_str(&format!("{r},{v}\n"));
        }
        out
    }
}

/// Radii must be finite, strictly increasing and beyond `r_min`.
pub fn check_radii(chart: &MetricChart, radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return arg("at least one radius is required");
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) {
        return arg("radii must be strictly increasing");
    }
    if radii.iter().any(|r| !r.is_finite() || !(*r > chart.r_min())) {
        return arg(format!("every radius must be finite and exceed r_min = {}", chart.r_min()));
    }
    Ok(())
}

/// `∮_{S_r} (div₀ g − d tr₀ g)(ν) dA` on one sphere.
pub fn mass_integral(chart: &MetricChart, radius: f64, quad_order: usize) -> Result<f64> {
    check_radii(chart, &[radius])?;
    let q = SphereQuadrature::new(chart.n(), radius, quad_order)?;
    Ok(q.integrate(|x, _| adm_integrand(&chart.eval_unchecked(x), x)))
}

/// Raw ADM mass `lim ∮ (div₀ g − d tr₀ g)(ν)`, without normalization.
pub fn mass_quadrature(chart: &MetricChart, radii: &[f64], quad_order: usize) -> Result<MassReport> {
    check_radii(chart, radii)?;
    let values = radii
        .iter()
        .map(|&r| mass_integral(chart, r, quad_order))
        .collect::<Result<Vec<_>>>()?;
    Ok(MassReport::from_values(chart, radii, values, quad_order))
}

/// Raw mass of the isotropic Schwarzschild metric in dimension `n`:
/// `2(n−1) M |S^{n−1}|`.
pub fn schwarzschild_raw_mass(n: usize, mass: f64) -> f64 {
    2.0 * (n as f64 - 1.0) * mass * super::quadrature::unit_sphere_area(n)
}
