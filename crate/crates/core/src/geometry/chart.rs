//! Metrics on `R^n \ B` written in a chart at infinity, evaluated together
//! with their analytic first derivatives.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::poly::DecayPoly;
use crate::error::{arg, Error, Result};
use crate::sampling::{random_unit_vector, seeded};

/// `g(x)` and `∂_k g(x)` (`dg[k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPoint {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
}

impl MetricPoint {
    pub fn flat(n: usize) -> Self {
        Self { g: DMatrix::identity(n, n), dg: vec![DMatrix::zeros(n, n); n] }
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    /// `∂_k g_ij`.
    pub fn d(&self, k: usize, i: usize, j: usize) -> f64 {
        self.dg[k][(i, j)]
    }
}

/// A metric given by an analytic formula.
pub trait MetricField: Send + Sync {
    fn eval(&self, x: &[f64]) -> MetricPoint;
}

struct Flat {
    n: usize,
}

impl MetricField for Flat {
    fn eval(&self, _x: &[f64]) -> MetricPoint {
        MetricPoint::flat(self.n)
    }
}

/// `(1 + M/(2 r^{n-2}))^{4/(n-2)} δ`.
struct Schwarzschild {
    n: usize,
    mass: f64,
}

impl MetricField for Schwarzschild {
    fn eval(&self, x: &[f64]) -> MetricPoint {
        let n = self.n;
        let k = (n - 2) as f64;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u = 1.0 + self.mass / (2.0 * r.powf(k));
        let phi = u.powf(4.0 / k);
        // ∂_k φ = −2M u^{4/(n−2)−1} x_k / r^n
        let radial = -2.0 * self.mass * u.powf(4.0 / k - 1.0) / r.powi(n as i32);
        MetricPoint {
            g: DMatrix::identity(n, n) * phi,
            dg: x.iter().map(|&xk| DMatrix::identity(n, n) * (radial * xk)).collect(),
        }
    }
}

/// `δ + h` with every entry of `h` a decaying polynomial field.
struct Perturbation {
    n: usize,
    /// Upper triangle, row major.
    h: Vec<DecayPoly>,
}

impl MetricField for Perturbation {
    fn eval(&self, x: &[f64]) -> MetricPoint {
        let n = self.n;
        let mut p = MetricPoint::flat(n);
        let mut t = 0;
        for i in 0..n {
            for j in i..n {
                let jet = self.h[t].gradient_jet(x);
                t += 1;
                p.g[(i, j)] += jet.value;
                if i != j {
                    p.g[(j, i)] += jet.value;
                }
                for k in 0..n {
                    p.dg[k][(i, j)] = jet.grad[k];
                    p.dg[k][(j, i)] = jet.grad[k];
                }
            }
        }
        p
    }
}

/// `δ + L_Y δ`, i.e. `h_ij = ∂_i Y_j + ∂_j Y_i`, a linearized change of chart.
struct Gauge {
    n: usize,
    y: Vec<DecayPoly>,
}

impl MetricField for Gauge {
    fn eval(&self, x: &[f64]) -> MetricPoint {
        let n = self.n;
        let jets: Vec<_> = self.y.iter().map(|f| f.jet(x)).collect();
        let mut p = MetricPoint::flat(n);
        for i in 0..n {
            for j in 0..n {
                p.g[(i, j)] += jets[j].grad[i] + jets[i].grad[j];
                for k in 0..n {
                    p.dg[k][(i, j)] = jets[j].hess[i][k] + jets[i].hess[j][k];
                }
            }
        }
        p
    }
}

/// A metric on `{|x| > r_min}` with its claimed decay order.
#[derive(Clone)]
pub struct MetricChart {
    n: usize,
    tau: Option<f64>,
    r_min: f64,
    label: String,
    field: Arc<dyn MetricField>,
}

impl fmt::Debug for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricChart")
            .field("n", &self.n)
            .field("tau", &self.tau)
            .field("r_min", &self.r_min)
            .field("label", &self.label)
            .finish()
    }
}

/// Serializable chart metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartInfo {
    pub kind: String,
    pub n: usize,
    pub tau: Option<f64>,
    pub r_min: f64,
}

/// Fitted decay exponents of `|g − δ|` and `|∂g|` on dyadic radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub tau_metric: f64,
    pub tau_derivative: f64,
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return arg(format!("dimension must be at least 3, got {n}"));
    }
    Ok(())
}

impl MetricChart {
    /// A chart from a user supplied field. The field is spot-checked for
    /// positivity and for the claimed decay.
    pub fn custom(n: usize, tau: f64, r_min: f64, label: impl Into<String>, field: Arc<dyn MetricField>) -> Result<Self> {
        check_dimension(n)?;
        if !(tau > 0.0) || !(r_min > 0.0) {
            return arg("decay order and inner radius must be positive");
        }
        let chart = Self { n, tau: Some(tau), r_min, label: label.into(), field };
        chart.spot_check()?;
        Ok(chart)
    }

    pub fn flat(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, tau: None, r_min: 1.0, label: "flat".into(), field: Arc::new(Flat { n }) })
    }

    /// Spatial Schwarzschild metric in isotropic coordinates, `τ = n − 2`,
    /// `r_min = 2 M^{1/(n−2)}`.
    pub fn schwarzschild(n: usize, mass: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(mass > 0.0) || !mass.is_finite() {
            return arg(format!("mass must be positive, got {mass}"));
        }
        let chart = Self {
            n,
            tau: Some((n - 2) as f64),
            r_min: 2.0 * mass.powf(1.0 / (n - 2) as f64),
            label: format!("schwarzschild(n={n}, M={mass})"),
            field: Arc::new(Schwarzschild { n, mass }),
        };
        chart.spot_check()?;
        Ok(chart)
    }

    /// `δ + h` with `h` given by `n(n+1)/2` decaying fields in upper
    /// triangular row-major order.
    pub fn perturbation(n: usize, h: Vec<DecayPoly>, tau: f64, r_min: f64) -> Result<Self> {
        check_dimension(n)?;
        if h.len() != n * (n + 1) / 2 || h.iter().any(|f| f.n != n) {
            return arg("perturbation needs n(n+1)/2 fields in n variables");
        }
        Self::custom(n, tau, r_min, "perturbation", Arc::new(Perturbation { n, h }))
    }

    /// Random homogeneous perturbation decaying exactly like `r^{-τ}`, with
    /// `r_min` chosen so the metric stays comfortably positive.
    pub fn random_perturbation<R: Rng + ?Sized>(rng: &mut R, n: usize, tau: f64, degree: u32) -> Result<Self> {
        check_dimension(n)?;
        let h: Vec<DecayPoly> = (0..n * (n + 1) / 2)
            .map(|_| DecayPoly::random_homogeneous(rng, n, degree, tau, 1.0))
            .collect();
        let bound = h.iter().map(DecayPoly::coefficient_bound).fold(0.0, f64::max);
        let r_min = (4.0 * n as f64 * bound).powf(1.0 / tau).max(1.0);
        Self::perturbation(n, h, tau, r_min)
    }

    /// Pure gauge perturbation `δ + L_Y δ` with `Y` decaying like `r^{1−τ}`.
    pub fn gauge(n: usize, y: Vec<DecayPoly>, tau: f64, r_min: f64) -> Result<Self> {
        check_dimension(n)?;
        if y.len() != n || y.iter().any(|f| f.n != n) {
            return arg("gauge perturbation needs n fields in n variables");
        }
        Self::custom(n, tau, r_min, "gauge", Arc::new(Gauge { n, y }))
    }

    pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, n: usize, tau: f64, degree: u32) -> Result<Self> {
        check_dimension(n)?;
        let y: Vec<DecayPoly> = (0..n)
            .map(|_| DecayPoly::random_homogeneous(rng, n, degree, tau - 1.0, 1.0))
            .collect();
        let bound = y.iter().map(DecayPoly::coefficient_bound).fold(0.0, f64::max);
        let slope = 2.0 * (degree as f64 + tau + 1.0);
        let r_min = (4.0 * n as f64 * slope * bound).powf(1.0 / tau).max(1.0);
        Self::gauge(n, y, tau, r_min)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> Option<f64> {
        self.tau
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn info(&self) -> ChartInfo {
        ChartInfo { kind: self.label.clone(), n: self.n, tau: self.tau, r_min: self.r_min }
    }

    /// Evaluates the metric; `x` must lie outside the inner ball.
    pub fn eval(&self, x: &[f64]) -> Result<MetricPoint> {
        if x.len() != self.n {
            return arg(format!("point has {} coordinates, expected {}", x.len(), self.n));
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(r > self.r_min) {
            return arg(format!("|x| = {r} is not beyond r_min = {}", self.r_min));
        }
        Ok(self.field.eval(x))
    }

    /// Unchecked evaluation for hot loops that validated the radius already.
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> MetricPoint {
        self.field.eval(x)
    }

    /// Fits the decay exponents of `max |g − δ|` and `max |∂g|` over fixed
    /// directions on six dyadic radii starting at `8 r_min`.
    pub fn decay_fit(&self) -> DecayFit {
        let mut rng = seeded(0x5eed);
        let dirs: Vec<Vec<f64>> = (0..16).map(|_| random_unit_vector(&mut rng, self.n)).collect();
        let mut logs = Vec::new();
        for k in 0..6 {
            let r = 8.0 * self.r_min * 2f64.powi(k);
            let (mut dev, mut der): (f64, f64) = (0.0, 0.0);
            for d in &dirs {
                let x: Vec<f64> = d.iter().map(|v| v * r).collect();
                let p = self.eval_unchecked(&x);
                let id = DMatrix::<f64>::identity(self.n, self.n);
                dev = dev.max((&p.g - id).amax());
                der = p.dg.iter().fold(der, |m, d| m.max(d.amax()));
            }
            logs.push((r.ln(), dev.ln(), der.ln()));
        }
        let slope = |pick: fn(&(f64, f64, f64)) -> f64| {
            let m = logs.len() as f64;
            let mx = logs.iter().map(|t| t.0).sum::<f64>() / m;
            let my = logs.iter().map(pick).sum::<f64>() / m;
            let sxy: f64 = logs.iter().map(|t| (t.0 - mx) * (pick(t) - my)).sum();
            let sxx: f64 = logs.iter().map(|t| (t.0 - mx).powi(2)).sum();
            -sxy / sxx
        };
        DecayFit { tau_metric: slope(|t| t.1), tau_derivative: slope(|t| t.2) }
    }

    /// Positivity at sample points near `r_min` and decay exponents within
    /// 10% of the claimed order.
    pub fn spot_check(&self) -> Result<()> {
        let mut rng = seeded(0xc0ffee);
        for _ in 0..64 {
            let r = self.r_min * (1.05 + 3.0 * rng.random::<f64>());
            let x: Vec<f64> = random_unit_vector(&mut rng, self.n).iter().map(|v| v * r).collect();
            let p = self.eval_unchecked(&x);
            let sym = (&p.g - p.g.transpose()).amax();
            let min_eig = p.g.clone().symmetric_eigenvalues().min();
            if sym > 1e-12 || !(min_eig > 0.0) {
                return Err(Error::Argument(format!(
                    "{}: metric not symmetric positive definite at |x| = {r:.3}",
                    self.label
                )));
            }
        }
        if let Some(tau) = self.tau {
            let fit = self.decay_fit();
            if (fit.tau_metric - tau).abs() > 0.1 * tau || (fit.tau_derivative - tau - 1.0).abs() > 0.1 * (tau + 1.0) {
                return Err(Error::Argument(format!(
                    "{}: claimed decay order {tau} but fitted {:.3} (metric) and {:.3} (derivative)",
                    self.label, fit.tau_metric, fit.tau_derivative
                )));
            }
        }
        Ok(())
    }
}
