//! Product quadrature on round spheres `S_r ⊂ R^n`.
//!
//! Hyperspherical angles `θ_1, …, θ_{n−2} ∈ [0, π]` and `φ ∈ [0, 2π)` are
//! used. In the variable `t = cos θ_k` the measure `sin^j θ_k dθ_k` becomes
//! the Gegenbauer weight `(1 − t²)^{(j−1)/2}`, integrated by a Gauss rule;
//! `φ` uses the trapezoid rule, which is exact for trigonometric
//! polynomials.

use nalgebra::DMatrix;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{arg, Result};

/// Gauss rule for `∫_{-1}^{1} f(t) (1 − t²)^a dt` with `points` nodes, built
/// by the Golub–Welsch eigenvalue method.
pub fn gauss_gegenbauer(points: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let lambda = a + 0.5;
    let mut jacobi = DMatrix::<f64>::zeros(points, points);
    for k in 1..points {
        let kf = k as f64;
        let b = (kf * (kf + 2.0 * lambda - 1.0) / (4.0 * (kf + lambda) * (kf + lambda - 1.0))).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let mu0 = (std::f64::consts::PI.ln() * 0.5 + ln_gamma(a + 1.0) - ln_gamma(a + 1.5)).exp();
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..points)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    // symmetrize: the rule is exactly symmetric under t ↦ −t
    let m = pairs.len();
    for i in 0..m / 2 {
        let t = 0.5 * (pairs[m - 1 - i].0 - pairs[i].0);
        let w = 0.5 * (pairs[m - 1 - i].1 + pairs[i].1);
        pairs[i] = (-t, w);
        pairs[m - 1 - i] = (t, w);
    }
    if m % 2 == 1 {
        pairs[m / 2].0 = 0.0;
    }
    pairs.into_iter().unzip()
}

/// Area of the unit sphere `S^{n−1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * std::f64::consts::PI.ln() - ln_gamma(h)).exp()
}

/// `∫_{S^{n−1}} x^α dA` in closed form.
pub fn sphere_moment(alpha: &[u32]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let betas: Vec<f64> = alpha.iter().map(|&a| (a as f64 + 1.0) / 2.0).collect();
    let log = betas.iter().map(|&b| ln_gamma(b)).sum::<f64>() - ln_gamma(betas.iter().sum());
    2.0 * log.exp()
}

/// Nodes, unit normals and weights on `S_r`; the weights sum to the area.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub n: usize,
    pub radius: f64,
    pub order: usize,
    /// Points on the unit sphere (the outward euclidean normals).
    pub normals: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// Refuse rules with more nodes than this.
pub const MAX_NODES: usize = 20_000_000;

impl SphereQuadrature {
    /// Rule exact for polynomials of degree `2·order + 1` restricted to the
    /// sphere: `order + 1` Gauss nodes per polar angle and `2·order + 2`
    /// equispaced azimuths.
    pub fn new(n: usize, radius: f64, order: usize) -> Result<Self> {
        if n < 2 {
            return arg("sphere quadrature needs n ≥ 2");
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return arg(format!("radius must be positive, got {radius}"));
        }
        let per_angle = order + 1;
        let azimuths = 2 * order + 2;
        let count = per_angle
            .checked_pow((n - 2) as u32)
            .and_then(|v| v.checked_mul(azimuths))
            .filter(|&v| v <= MAX_NODES);
        if count.is_none() {
            return arg(format!("quadrature order {order} in dimension {n} needs too many nodes"));
        }
        // polar rules, θ_k carries sin^{n−1−k}
        let polar: Vec<(Vec<f64>, Vec<f64>)> = (1..=n - 2)
            .map(|k| gauss_gegenbauer(per_angle, ((n - 1 - k) as f64 - 1.0) / 2.0))
            .collect();
        let mut normals = Vec::with_capacity(count.unwrap_or(0));
        let mut weights = Vec::with_capacity(count.unwrap_or(0));
        let mut index = vec![0usize; n - 2];
        loop {
            // walk down the polar angles
            let mut point = vec![0.0; n];
            let mut sin_prod = 1.0;
            let mut w = 1.0;
            for (k, &i) in index.iter().enumerate() {
                let t = polar[k].0[i];
                w *= polar[k].1[i];
                point[k] = sin_prod * t;
                sin_prod *= (1.0 - t * t).max(0.0).sqrt();
            }
            for a in 0..azimuths {
                let phi = 2.0 * std::f64::consts::PI * a as f64 / azimuths as f64;
                let mut p = point.clone();
                p[n - 2] = sin_prod * phi.cos();
                p[n - 1] = sin_prod * phi.sin();
                normals.push(p);
                weights.push(w * 2.0 * std::f64::consts::PI / azimuths as f64 * radius.powi(n as i32 - 1));
            }
            // odometer increment
            let mut k = 0;
            while k < index.len() {
                index[k] += 1;
                if index[k] < per_angle {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
            if k == index.len() {
                break;
            }
        }
        Ok(Self { n, radius, order, normals, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Point `r·ν` of node `i`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.normals[i].iter().map(|v| v * self.radius).collect()
    }

    /// `∮ f(x, ν) dA` with per-node evaluation in parallel and a
    /// deterministic pairwise reduction.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64], &[f64]) -> f64 + Sync,
    {
        self.integrate_many(1, |x, nu| vec![f(x, nu)])[0]
    }

    /// Integrates `components` functions at once.
    pub fn integrate_many<F>(&self, components: usize, f: F) -> Vec<f64>
    where
        F: Fn(&[f64], &[f64]) -> Vec<f64> + Sync,
    {
        let values: Vec<Vec<f64>> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let x = self.point(i);
                let v = f(&x, &self.normals[i]);
                debug_assert_eq!(v.len(), components);
                v.into_iter().map(|y| y * self.weights[i]).collect()
            })
            .collect();
        (0..components)
            .map(|c| {
                let column: Vec<f64> = values.iter().map(|v| v[c]).collect();
                pairwise_sum(&column)
            })
            .collect()
    }
}

/// Pairwise (cascade) summation in a fixed tree, independent of threads.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::poly::monomials;

    #[test]
    fn gegenbauer_rule_integrates_polynomials() {
        for &a in &[0.0, 0.5, 1.0, 1.5, 2.0] {
            let (t, w) = gauss_gegenbauer(6, a);
            // ∫ t^{2k} (1−t²)^a dt = B(k + ½, a + 1)
            for k in 0..6 {
                let exact = (ln_gamma(k as f64 + 0.5) + ln_gamma(a + 1.0) - ln_gamma(k as f64 + a + 1.5)).exp();
                let approx: f64 = t.iter().zip(&w).map(|(x, y)| y * x.powi(2 * k)).sum();
                assert!((approx - exact).abs() < 1e-13 * exact.max(1.0), "a={a} k={k}");
            }
        }
        let (t, _) = gauss_gegenbauer(7, 0.0);
        // Legendre nodes of degree 7 include 0 and ±0.9491079123427585
        assert_eq!(t[3], 0.0);
        assert!((t[6] - 0.949_107_912_342_758_5).abs() < 1e-14);
    }

    #[test]
    fn areas() {
        assert!((unit_sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-13);
        for n in 3..=6 {
            let q = SphereQuadrature::new(n, 2.0, 5).unwrap();
            let total = q.integrate(|_, _| 1.0);
            let exact = unit_sphere_area(n) * 2f64.powi(n as i32 - 1);
            assert!((total - exact).abs() < 1e-12 * exact);
            assert!(q.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn moments_up_to_twice_the_order() {
        for n in 3..=5 {
            let order = 4;
            let q = SphereQuadrature::new(n, 1.0, order).unwrap();
            for degree in 0..=(2 * order as u32) {
                for alpha in monomials(n, degree) {
                    let approx = q.integrate(|x, _| x.iter().zip(&alpha).map(|(v, &a)| v.powi(a as i32)).product());
                    let exact = sphere_moment(&alpha);
                    assert!((approx - exact).abs() < 1e-12 * exact.abs().max(1.0), "n={n} {alpha:?}");
                }
            }
        }
    }

    #[test]
    fn nodes_lie_on_the_sphere() {
        let q = SphereQuadrature::new(4, 3.0, 3).unwrap();
        for i in 0..q.len() {
            let r: f64 = q.point(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((r - 3.0).abs() < 1e-13);
        }
        assert_eq!(q.len(), 4 * 4 * 8);
    }

    #[test]
    fn invalid_rules() {
        assert!(SphereQuadrature::new(3, -1.0, 4).is_err());
        assert!(SphereQuadrature::new(12, 1.0, 64).is_err());
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }
}
