//! Sampled check of `π(ω) = −(div₀g − d tr₀g)/(2(n−1))` on a chart.
//!
//! The identity is exact for the leading order connection form and holds up
//! to terms quadratic in `g − δ` for the Levi-Civita connection form, so the
//! error of the latter decays one decay order faster than `π(ω)` itself.

use rand::Rng;
use serde::Serialize;

use super::chart::{ChartInfo, MetricChart};
use super::frame::{connection_form_asymptotic, connection_form_exact, pi_projection};
use super::mass::adm_covector;
use crate::error::{arg, Result};
use crate::sampling::random_unit_vector;

/// Relative error below which the identity counts as exact to rounding.
pub const ROUNDING_TOL: f64 = 1e-12;

/// Smallest accepted gap between the decay rate of the error and that of the
/// leading term.
pub const MIN_GAP: f64 = 0.8;

/// Per-radius maxima over the sampled directions and the fitted decay rates.
#[derive(Debug, Clone, Serialize)]
pub struct PiIdentityReport {
    pub chart: ChartInfo,
    pub radii: Vec<f64>,
    pub directions: usize,
    /// `max |(div₀g − d tr₀g)/(2(n−1))|`.
    pub leading: Vec<f64>,
    /// `max |π(ω_asymptotic) + (div₀g − d tr₀g)/(2(n−1))|`.
    pub asymptotic_error: Vec<f64>,
    /// Same with the Levi-Civita connection form.
    pub exact_error: Vec<f64>,
    pub leading_exponent: f64,
    pub asymptotic_exponent: Option<f64>,
    pub exact_exponent: Option<f64>,
    /// `true` when the asymptotic error is at rounding level everywhere.
    pub asymptotic_exact: bool,
    /// `exact_exponent − leading_exponent`.
    pub exact_gap: Option<f64>,
    pub passed: bool,
}

/// Slope of `ln y` against `ln r` by least squares; `None` if some `y`
/// vanishes.
fn decay_exponent(radii: &[f64], values: &[f64]) -> Option<f64> {
    if values.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let k = radii.len() as f64;
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(-sxy / sxx)
}

/// Samples `directions` random directions on each radius and compares both
/// connection forms with the mass covector.
pub fn pi_identity_check<R: Rng + ?Sized>(
    chart: &MetricChart,
    radii: &[f64],
    directions: usize,
    rng: &mut R,
) -> Result<PiIdentityReport> {
    if radii.len() < 2 || directions == 0 {
        return arg("need at least two radii and one direction");
    }
    super::mass::check_radii(chart, radii)?;
    let n = chart.n();
    let scale = -1.0 / (2.0 * (n as f64 - 1.0));
    let dirs: Vec<Vec<f64>> = (0..directions).map(|_| random_unit_vector(rng, n)).collect();
    let mut leading = Vec::with_capacity(radii.len());
    let mut asymptotic_error = Vec::with_capacity(radii.len());
    let mut exact_error = Vec::with_capacity(radii.len());
    let mut asymptotic_exact = true;
    for &r in radii {
        let (mut lead, mut asym, mut exact) = (0.0_f64, 0.0_f64, 0.0_f64);
        for d in &dirs {
            let x: Vec<f64> = d.iter().map(|v| v * r).collect();
            let p = chart.eval(&x)?;
            let target: Vec<f64> = adm_covector(&p).iter().map(|v| v * scale).collect();
            let norm = target.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let dist = |pi: Vec<f64>| pi.iter().zip(&target).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            let e_asym = dist(pi_projection(&connection_form_asymptotic(&p)));
            let e_exact = dist(pi_projection(&connection_form_exact(&p)?));
            asymptotic_exact &= e_asym <= ROUNDING_TOL * norm.max(f64::MIN_POSITIVE);
            lead = lead.max(norm);
            asym = asym.max(e_asym);
            exact = exact.max(e_exact);
        }
        leading.push(lead);
        asymptotic_error.push(asym);
        exact_error.push(exact);
    }
    let leading_exponent = decay_exponent(radii, &leading).ok_or_else(|| crate::Error::Argument(
        "the mass covector vanishes at a sample radius".into(),
    ))?;
    let asymptotic_exponent = decay_exponent(radii, &asymptotic_error);
    let exact_exponent = decay_exponent(radii, &exact_error);
    let exact_gap = exact_exponent.map(|s| s - leading_exponent);
    let asymptotic_ok =
        asymptotic_exact || asymptotic_exponent.is_some_and(|s| s - leading_exponent >= MIN_GAP);
    let passed = asymptotic_ok && exact_gap.is_some_and(|g| g >= MIN_GAP);
    Ok(PiIdentityReport {
        chart: chart.info(),
        radii: radii.to_vec(),
        directions,
        leading,
        asymptotic_error,
        exact_error,
        leading_exponent,
        asymptotic_exponent,
        exact_exponent,
        asymptotic_exact,
        exact_gap,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::seeded;

    #[test]
    fn identity_holds_with_a_full_order_gap() {
        let mut rng = seeded(8);
        for n in 3..=5 {
            let chart = MetricChart::random_perturbation(&mut rng, n, 1.0, 2).unwrap();
            let radii: Vec<f64> = (0..5).map(|k| chart.r_min() * 4.0 * 2f64.powi(k)).collect();
            let report = pi_identity_check(&chart, &radii, 20, &mut rng).unwrap();
            assert!(report.asymptotic_exact, "n={n}");
            assert!((report.leading_exponent - 2.0).abs() < 0.1, "n={n}: {}", report.leading_exponent);
            assert!((report.exact_gap.unwrap() - 1.0).abs() < 0.15, "n={n}: {:?}", report.exact_gap);
            assert!(report.passed);
        }
    }

    #[test]
    fn schwarzschild_decay_orders() {
        let chart = MetricChart::schwarzschild(3, 1.0).unwrap();
        let mut rng = seeded(1);
        let report = pi_identity_check(&chart, &[10.0, 20.0, 40.0, 80.0], 8, &mut rng).unwrap();
        assert!(report.asymptotic_exact);
        assert!((report.leading_exponent - 2.0).abs() < 0.1, "{report:?}");
        assert!(report.passed);
    }

    #[test]
    fn flat_chart_is_rejected() {
        let chart = MetricChart::flat(3).unwrap();
        assert!(pi_identity_check(&chart, &[2.0, 4.0], 3, &mut seeded(0)).is_err());
        assert!(pi_identity_check(&chart, &[2.0], 3, &mut seeded(0)).is_err());
    }
}
