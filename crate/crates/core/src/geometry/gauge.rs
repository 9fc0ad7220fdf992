//! Divergence structure check for the quadrature: the flux of `*d*β` through
//! a sphere vanishes for every 2-form `β`.

use rand::Rng;

use super::poly::DecayPoly;
use super::quadrature::SphereQuadrature;
use crate::error::{arg, Result};

/// Antisymmetric field `β_ij = P_ij(x)|x|^{-s}`, stored for `i < j`.
#[derive(Debug, Clone)]
pub struct TwoForm {
    pub n: usize,
    pub entries: Vec<DecayPoly>,
}

/// Flux and the scale it is compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flux {
    pub flux: f64,
    /// `∮ |Σ_ij ∂_j β_ji ν_i| dA`.
    pub scale: f64,
}

impl Flux {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.flux.abs()
        } else {
            self.flux.abs() / self.scale
        }
    }
}

impl TwoForm {
    pub fn new(n: usize, entries: Vec<DecayPoly>) -> Result<Self> {
        if entries.len() != n * (n - 1) / 2 || entries.iter().any(|f| f.n != n) {
            return arg("a 2-form needs n(n−1)/2 fields in n variables");
        }
        Ok(Self { n, entries })
    }

    /// Random polynomial of the given degree (not homogeneous) times
    /// `|x|^{-s}` in every component.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, s: f64) -> Self {
        let entries = (0..n * (n - 1) / 2)
            .map(|_| {
                let mut f = DecayPoly::zero(n);
                for d in 0..=degree {
                    f.terms.extend(DecayPoly::random_homogeneous(rng, n, d, 0.0, 1.0).terms);
                }
                f.s = s;
                f
            })
            .collect();
        Self { n, entries }
    }

    /// `Σ_ij ∂_j β_ji ν_i` at `x`, with `ν = x/|x|`.
    pub fn divergence_flux_density(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        // div_i = Σ_j ∂_j β_ji
        let mut div = vec![0.0; n];
        let mut t = 0;
        for a in 0..n {
            for b in a + 1..n {
                let g = self.entries[t].gradient_jet(x).grad;
                t += 1;
                // β_ab = f, β_ba = −f
                div[b] += g[a];
                div[a] -= g[b];
            }
        }
        div.iter().zip(x).map(|(d, xi)| d * xi / r).sum()
    }

    pub fn flux(&self, radius: f64, quad_order: usize) -> Result<Flux> {
        let q = SphereQuadrature::new(self.n, radius, quad_order)?;
        let values = q.integrate_many(2, |x, _| {
            let v = self.divergence_flux_density(x);
            vec![v, v.abs()]
        });
        Ok(Flux { flux: values[0], scale: values[1] })
    }
}
