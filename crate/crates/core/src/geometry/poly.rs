//! Scalar fields `P(x)·|x|^{-s}` with `P` a polynomial, together with their
//! analytic gradients and Hessians.

use rand::Rng;

/// `Σ_t c_t x^{α_t} · |x|^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayPoly {
    pub n: usize,
    /// `(coefficient, exponents)` pairs.
    pub terms: Vec<(f64, Vec<u32>)>,
    pub s: f64,
}

/// Value, gradient and Hessian at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<Vec<f64>>,
}

/// All exponent vectors of total degree `degree` in `n` variables.
pub fn monomials(n: usize, degree: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(n - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl DecayPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new(), s: 0.0 }
    }

    /// Homogeneous polynomial of the given degree with standard normal
    /// coefficients times `|x|^{-(degree + tau)}`, so the field decays
    /// exactly like `|x|^{-tau}` along every ray.
    pub fn random_homogeneous<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, tau: f64, amplitude: f64) -> Self {
        let terms = monomials(n, degree)
            .into_iter()
            .map(|alpha| (amplitude * rng.sample::<f64, _>(rand_distr::StandardNormal), alpha))
            .collect();
        Self { n, terms, s: degree as f64 + tau }
    }

    /// Largest `|P(x)|·|x|^{-s}` over the unit sphere bounded crudely by the
    /// sum of absolute coefficients.
    pub fn coefficient_bound(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.jet_order(x, 0).value
    }

    pub fn jet(&self, x: &[f64]) -> Jet {
        self.jet_order(x, 2)
    }

    /// Value and gradient only (the Hessian is left zero).
    pub fn gradient_jet(&self, x: &[f64]) -> Jet {
        self.jet_order(x, 1)
    }

    fn jet_order(&self, x: &[f64], order: usize) -> Jet {
        let n = self.n;
        let mut p = 0.0;
        let mut dp = vec![0.0; n];
        let mut ddp = vec![vec![0.0; n]; n];
        for (coef, alpha) in &self.terms {
            p += coef * monomial(x, alpha, None, None);
            if order >= 1 {
                for a in 0..n {
                    if alpha[a] > 0 {
                        dp[a] += coef * monomial(x, alpha, Some(a), None);
                    }
                }
            }
            if order >= 2 {
                for a in 0..n {
                    for b in 0..n {
                        if alpha[a] > 0 && (a != b || alpha[a] > 1) && alpha[b] > 0 {
                            ddp[a][b] += coef * monomial(x, alpha, Some(a), Some(b));
                        }
                    }
                }
            }
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let s = self.s;
        // f = r^{-s}, ∂_a f = -s x_a r^{-s-2},
        // ∂_a∂_b f = -s δ_ab r^{-s-2} + s(s+2) x_a x_b r^{-s-4}
        let f = r2.powf(-s / 2.0);
        let f1 = -s * f / r2;
        let f2 = s * (s + 2.0) * f / (r2 * r2);
        let mut grad = vec![0.0; n];
        let mut hess = vec![vec![0.0; n]; n];
        if order >= 1 {
            for a in 0..n {
                grad[a] = dp[a] * f + p * f1 * x[a];
            }
        }
        if order >= 2 {
            for a in 0..n {
                for b in 0..n {
                    let df_ab = if a == b { f1 } else { 0.0 } + f2 * x[a] * x[b];
                    hess[a][b] = ddp[a][b] * f + dp[a] * f1 * x[b] + dp[b] * f1 * x[a] + p * df_ab;
                }
            }
        }
        Jet { value: p * f, grad, hess }
    }
}

/// `∂_a ∂_b x^α` (each derivative optional).
fn monomial(x: &[f64], alpha: &[u32], da: Option<usize>, db: Option<usize>) -> f64 {
    let mut coef = 1.0;
    let mut e: Vec<i32> = alpha.iter().map(|&v| v as i32).collect();
    for d in [da, db].into_iter().flatten() {
        coef *= e[d] as f64;
        e[d] -= 1;
    }
    if coef == 0.0 {
        return 0.0;
    }
    x.iter().zip(&e).map(|(xi, &k)| xi.powi(k)).product::<f64>() * coef
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::seeded;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 3).len(), 20);
        assert!(monomials(3, 2).iter().all(|a| a.iter().sum::<u32>() == 2));
    }

    #[test]
    fn jets_match_finite_differences() {
        let mut rng = seeded(11);
        let f = DecayPoly::random_homogeneous(&mut rng, 3, 2, 1.3, 1.0);
        let x = [1.3, -0.7, 2.1];
        let jet = f.jet(&x);
        let h = 1e-5;
        for a in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
            assert!((fd - jet.grad[a]).abs() < 1e-8, "grad {a}");
            let gp = f.jet(&xp).grad;
            let gm = f.jet(&xm).grad;
            for b in 0..3 {
                let fd = (gp[b] - gm[b]) / (2.0 * h);
                assert!((fd - jet.hess[a][b]).abs() < 1e-7, "hess {a}{b}");
            }
        }
    }

    #[test]
    fn homogeneous_decay() {
        let mut rng = seeded(2);
        let f = DecayPoly::random_homogeneous(&mut rng, 4, 3, 1.5, 1.0);
        let x = [0.3, -0.2, 0.5, 0.1];
        let x2: Vec<f64> = x.iter().map(|v| v * 2.0).collect();
        assert!((f.value(&x2) / f.value(&x) - 2f64.powf(-1.5)).abs() < 1e-12);
    }
}
