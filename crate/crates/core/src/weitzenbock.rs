//! Weitzenböck coefficient vectors.
//!
//! A vector `a = (a_1, …, a_N)` aligned with the summands of `R^n ⊗ V` gives a
//! Weitzenböck formula when `Σ a_j P_j^* P_j` has vanishing second order
//! symbol, i.e. when `Σ a_j q_j(ξ) = 0` for every unit `ξ`. This module finds
//! that space numerically from the symbol matrices and evaluates the mass
//! coefficient `μ(a)` exactly.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{arg, Result};
use crate::rational::{self, Rational, RationalJson};
use crate::sampling::random_unit_vector;
use crate::spectral::linalg::{c, zeros, CMatrix};
use crate::spectral::{symbol_matrix, ProjectionSet};
use crate::weights::{casimir, Decomposition, DominantWeight};

/// Number of random directions `ξ` used to assemble the symbol condition.
pub const SYMBOL_SAMPLES: usize = 6;

/// Singular values below this fraction of the largest one span the nullspace.
pub const NULLSPACE_TOL: f64 = 1e-8;

/// Largest denominator accepted when rounding the basis to rationals.
pub const MAX_DENOMINATOR: i64 = 1000;

/// Tolerance for accepting a rounded rational entry.
pub const RATIONAL_TOL: f64 = 1e-9;

/// Coefficients `(a_1, …, a_N)` in summand order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    coeffs: Vec<Rational>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![Rational::zero(); len])
    }

    /// Comma separated rationals such as `-1,2` or `1/2,-1`.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = text.split(',').map(rational::parse).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: &Rational, other: &Self, beta: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
    }

    pub fn check_aligned(&self, decomp: &Decomposition) -> Result<()> {
        if self.len() != decomp.len() {
            return arg(format!(
                "coefficient vector has {} entries but R^{} ⊗ ({}) has {} summands",
                self.len(),
                decomp.n,
                decomp.rho,
                decomp.len()
            ));
        }
        Ok(())
    }
}

impl Serialize for CoefficientVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for q in &self.coeffs {
            seq.serialize_element(&RationalJson(q.clone()))?;
        }
        seq.end()
    }
}

/// The universal choice `a_j = w(λ_j, ρ)`.
pub fn universal_vector(decomp: &Decomposition) -> CoefficientVector {
    CoefficientVector::new(decomp.weights())
}

/// `μ(a) = −Σ a_j dim W_j w(λ_j, ρ) / (2n(n−1))`.
pub fn mass_coefficient(decomp: &Decomposition, a: &CoefficientVector) -> Result<Rational> {
    a.check_aligned(decomp)?;
    let n = decomp.n as i64;
    let sum = decomp
        .summands
        .iter()
        .zip(a.coeffs())
        .fold(Rational::zero(), |acc, (s, aj)| {
            acc + aj * Rational::from_integer(s.dim.clone()) * &s.conformal_weight
        });
    Ok(-sum / rational::int(2 * n * (n - 1)))
}

/// `dim V · c(ρ) / (n(n−1))`, the positive constant attached to the
/// universal formula once its negative weight terms are moved to `P_+`.
pub fn universal_mass_coefficient(decomp: &Decomposition) -> Rational {
    let n = decomp.n as i64;
    Rational::from_integer(decomp.dim_v()) * casimir(&decomp.rho) / rational::int(n * (n - 1))
}

/// `‖Σ a_j q_j(ξ)‖` in the Frobenius norm.
pub fn symbol_residual(proj: &ProjectionSet, a: &[f64], xi: &[f64]) -> Result<f64> {
    if a.len() != proj.len() {
        return arg(format!("coefficient vector has {} entries, expected {}", a.len(), proj.len()));
    }
    Ok(symbol_combination(proj, a, xi)?.norm())
}

fn symbol_combination(proj: &ProjectionSet, a: &[f64], xi: &[f64]) -> Result<CMatrix> {
    let mut total = zeros(proj.dim_v, proj.dim_v);
    for (j, &aj) in a.iter().enumerate() {
        if aj != 0.0 {
            total += symbol_matrix(proj, j, xi)? * c(aj);
        }
    }
    Ok(total)
}

/// The space of Weitzenböck coefficient vectors of one decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct WeitzenbockBasis {
    pub n: usize,
    pub rho: DominantWeight,
    pub summand_count: usize,
    /// Orthonormal basis of the nullspace.
    pub basis: Vec<Vec<f64>>,
    /// Reduced row echelon form of the basis when every entry is a small
    /// rational.
    pub rational_basis: Option<Vec<CoefficientVector>>,
    /// Largest `‖Σ a_j q_j(ξ)‖` over the sample directions and basis vectors.
    pub residual: f64,
    /// Singular values of the assembled symbol system, descending.
    pub singular_values: Vec<f64>,
    /// `⌊N/2⌋`.
    pub expected_dim: usize,
    /// Distance of the universal vector from the span.
    pub universal_residual: f64,
    /// Set when the nullspace dimension differs from `⌊N/2⌋`.
    pub anomaly: Option<String>,
}

impl WeitzenbockBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Euclidean distance of `a` from the span.
    pub fn span_residual(&self, a: &[f64]) -> f64 {
        let mut rest = a.to_vec();
        for b in &self.basis {
            let dot: f64 = b.iter().zip(a).map(|(x, y)| x * y).sum();
            for (r, x) in rest.iter_mut().zip(b) {
                *r -= dot * x;
            }
        }
        rest.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest symbol residual of the basis vectors on `samples` fresh
    /// random directions.
    pub fn fresh_residual<R: Rng + ?Sized>(&self, proj: &ProjectionSet, samples: usize, rng: &mut R) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let xi = random_unit_vector(rng, proj.n);
            for b in &self.basis {
                worst = worst.max(symbol_residual(proj, b, &xi)?);
            }
        }
        Ok(worst)
    }
}

/// Solves `Σ a_j q_j(ξ_s) = 0` over random unit `ξ_s`.
pub fn weitzenbock_basis<R: Rng + ?Sized>(
    proj: &ProjectionSet,
    decomp: &Decomposition,
    rng: &mut R,
) -> Result<WeitzenbockBasis> {
    if proj.len() != decomp.len() || proj.n != decomp.n {
        return arg("projection set and decomposition are not aligned");
    }
    let big_n = decomp.len();
    let d = proj.dim_v;
    let samples: Vec<Vec<f64>> = (0..SYMBOL_SAMPLES).map(|_| random_unit_vector(rng, proj.n)).collect();

    // Hermitian symbols: the upper triangle's real parts and the strict upper
    // triangle's imaginary parts carry all the information.
    let rows_per_sample = d * d;
    let mut system = DMatrix::<f64>::zeros(rows_per_sample * samples.len(), big_n);
    for (s, xi) in samples.iter().enumerate() {
        for j in 0..big_n {
            let q = symbol_matrix(proj, j, xi)?;
            let mut row = s * rows_per_sample;
            for r in 0..d {
                for k in r..d {
                    system[(row, j)] = q[(r, k)].re;
                    row += 1;
                    if k > r {
                        system[(row, j)] = q[(r, k)].im;
                        row += 1;
                    }
                }
            }
        }
    }

    if system.nrows() < big_n {
        return arg("symbol system has fewer equations than unknowns");
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let scale = singular_values.first().copied().unwrap_or(0.0).max(1.0);
    let mut basis: Vec<Vec<f64>> = order
        .iter()
        .filter(|&&i| svd.singular_values[i] <= NULLSPACE_TOL * scale)
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    for b in &mut basis {
        normalize_sign(b);
    }

    let mut residual: f64 = 0.0;
    for xi in &samples {
        for b in &basis {
            residual = residual.max(symbol_residual(proj, b, xi)?);
        }
    }

    let expected_dim = big_n / 2;
    let anomaly = (basis.len() != expected_dim).then(|| {
        format!(
            "nullspace dimension {} differs from ⌊N/2⌋ = {} (N = {})",
            basis.len(),
            expected_dim,
            big_n
        )
    });
    let rational_basis = rational_form(&basis);
    let mut out = WeitzenbockBasis {
        n: decomp.n,
        rho: decomp.rho.clone(),
        summand_count: big_n,
        basis,
        rational_basis,
        residual,
        singular_values,
        expected_dim,
        universal_residual: 0.0,
        anomaly,
    };
    out.universal_residual = out.span_residual(&universal_vector(decomp).to_f64());
    Ok(out)
}

/// Makes the largest entry positive so the output does not depend on the
/// sign choices of the SVD.
fn normalize_sign(v: &mut [f64]) {
    let lead = v.iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Reduced row echelon form of the basis, rounded to rationals with small
/// denominators. `None` when some entry is not close to such a rational.
fn rational_form(basis: &[Vec<f64>]) -> Option<Vec<CoefficientVector>> {
    if basis.is_empty() {
        return Some(Vec::new());
    }
    let cols = basis[0].len();
    let mut rows: Vec<Vec<f64>> = basis.to_vec();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows.len() {
            break;
        }
        let (best, value) = (pivot_row..rows.len())
            .map(|r| (r, rows[r][col]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
        if value.abs() < 1e-8 {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        rows[pivot_row].iter_mut().for_each(|x| *x /= p);
        for r in 0..rows.len() {
            if r != pivot_row {
                let f = rows[r][col];
                if f != 0.0 {
                    for k in 0..cols {
                        rows[r][k] -= f * rows[pivot_row][k];
                    }
                }
            }
        }
        pivot_row += 1;
    }
    rows.iter()
        .map(|row| {
            let coeffs = row
                .iter()
                .map(|&x| {
                    let q = rational::approximate(x, MAX_DENOMINATOR)?;
                    ((rational::to_f64(&q) - x).abs() <= RATIONAL_TOL).then_some(q)
                })
                .collect::<Option<Vec<_>>>()?;
            Some(CoefficientVector::new(coeffs))
        })
        .collect()
}

/// Sign of `μ(a)` read as a mass theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MassSign {
    #[serde(rename = "positive-mass")]
    Positive,
    #[serde(rename = "negative-mass")]
    Negative,
    #[serde(rename = "zero")]
    Zero,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
    pub classification: MassSign,
    /// 0-based summand indices with `a_j > 0`.
    pub p_plus_indices: Vec<usize>,
    /// 0-based summand indices with `a_j < 0`.
    pub p_minus_indices: Vec<usize>,
    /// Whether `a` satisfies the symbol condition; `None` when no basis was
    /// supplied.
    pub in_span: Option<bool>,
    pub span_residual: Option<f64>,
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson(q.clone()).serialize(s)
}

/// Tolerance for membership of a coefficient vector in the Weitzenböck space.
pub const SPAN_TOL: f64 = 1e-9;

/// Evaluates `μ(a)` and splits the summands into `P_+` and `P_−`.
pub fn classify(
    decomp: &Decomposition,
    a: &CoefficientVector,
    basis: Option<&WeitzenbockBasis>,
) -> Result<Classification> {
    let mu = mass_coefficient(decomp, a)?;
    let classification = match rational::sign(&mu) {
        1 => MassSign::Positive,
        -1 => MassSign::Negative,
        _ => MassSign::Zero,
    };
    let indices = |positive: bool| {
        a.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero() && q.is_positive() == positive)
            .map(|(j, _)| j)
            .collect()
    };
    let span_residual = basis.map(|b| {
        let v = a.to_f64();
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        b.span_residual(&v) / scale
    });
    Ok(Classification {
        mu,
        classification,
        p_plus_indices: indices(true),
        p_minus_indices: indices(false),
        in_span: span_residual.map(|r| r <= SPAN_TOL),
        span_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::sampling::seeded;
    use crate::spectral::{analyze, Family, MatrixRep};
    use crate::weights::decompose;

    fn basis_for(n: usize, family: Family, seed: u64) -> (WeitzenbockBasis, crate::spectral::SpectralData) {
        let data = analyze(MatrixRep::build(n, family).unwrap()).unwrap();
        let basis = weitzenbock_basis(&data.projections, &data.decomposition, &mut seeded(seed)).unwrap();
        (basis, data)
    }

    #[test]
    fn spin_formula_is_unique_up_to_scale() {
        for n in 3..=7 {
            let (basis, _) = basis_for(n, Family::Spin, 1);
            assert_eq!(basis.dim(), 1, "n={n}");
            assert!(basis.anomaly.is_none());
            let rational = basis.rational_basis.clone().unwrap();
            assert_eq!(rational, vec![CoefficientVector::from_ints(&[1, 1 - n as i64])]);
            assert!(basis.universal_residual < 1e-9);
            assert!(basis.residual < 1e-9);
        }
    }

    #[test]
    fn trivial_representation_has_no_formula() {
        let (basis, _) = basis_for(4, Family::Exterior(0), 2);
        assert_eq!(basis.dim(), 0);
        assert_eq!(basis.expected_dim, 0);
        assert!(basis.anomaly.is_none());
        assert_eq!(basis.rational_basis, Some(vec![]));
        assert_eq!(basis.universal_residual, 0.0);
    }

    #[test]
    fn two_forms_in_five_dimensions() {
        let (basis, data) = basis_for(5, Family::Exterior(2), 3);
        assert_eq!(basis.rational_basis.clone().unwrap(), vec![CoefficientVector::from_ints(&[1, -2, -3])]);
        assert_eq!(universal_vector(&data.decomposition), CoefficientVector::from_ints(&[1, -2, -3]));
        let fresh = basis.fresh_residual(&data.projections, 50, &mut seeded(99)).unwrap();
        assert!(fresh < 1e-8);
    }

    #[test]
    fn one_forms_in_four_dimensions_have_two_formulas() {
        let (basis, _) = basis_for(4, Family::Exterior(1), 4);
        assert_eq!(basis.dim(), 2);
        assert!(basis.anomaly.is_none());
        // universal line and the self-dual/anti-self-dual balance
        let rational = basis.rational_basis.clone().unwrap();
        assert_eq!(rational.len(), 2);
        assert!(basis.universal_residual < 1e-9);
        assert!(basis.span_residual(&[0.0, 1.0, -1.0, 0.0]) < 1e-9);
    }

    #[test]
    fn universal_vectors() {
        let spin3 = decompose(&DominantWeight::spin(3).unwrap());
        assert_eq!(universal_vector(&spin3), CoefficientVector::new(vec![frac(1, 2), int(-1)]));
        let zero = decompose(&DominantWeight::zero(6).unwrap());
        assert_eq!(universal_vector(&zero), CoefficientVector::from_ints(&[0]));
    }

    #[test]
    fn witten_normalization() {
        for n in 3..=10usize {
            let d = decompose(&DominantWeight::spin(n).unwrap());
            let a = CoefficientVector::from_ints(&[-1, n as i64 - 1]);
            let dim_sigma = 1i64 << (n / 2 - usize::from(n % 2 == 0));
            assert_eq!(mass_coefficient(&d, &a).unwrap(), frac(dim_sigma, 4), "n={n}");
        }
        let d = decompose(&DominantWeight::spin(3).unwrap());
        assert_eq!(mass_coefficient(&d, &CoefficientVector::parse("-1,2").unwrap()).unwrap(), frac(1, 2));
    }

    #[test]
    fn mass_coefficient_examples() {
        let forms = decompose(&DominantWeight::standard(3).unwrap());
        assert_eq!(mass_coefficient(&forms, &CoefficientVector::zero(3)).unwrap(), int(0));
        assert_eq!(mass_coefficient(&forms, &universal_vector(&forms)).unwrap(), int(-1));
        assert_eq!(universal_mass_coefficient(&forms), int(1));
        let spin3 = decompose(&DominantWeight::spin(3).unwrap());
        assert_eq!(universal_mass_coefficient(&spin3), frac(1, 4));
        let zero = decompose(&DominantWeight::zero(5).unwrap());
        assert_eq!(universal_mass_coefficient(&zero), int(0));
        assert!(mass_coefficient(&forms, &CoefficientVector::zero(2)).is_err());
    }

    #[test]
    fn universal_identity_and_linearity() {
        let weights = [
            (3, "5/2"),
            (4, "2,-1"),
            (5, "3,1"),
            (6, "3/2,1/2,-1/2"),
            (7, "2,2,1"),
            (8, "4,3,3,-3"),
            (11, "7/2,5/2,5/2,3/2,1/2"),
        ];
        for (n, w) in weights {
            let d = decompose(&DominantWeight::parse(n, w).unwrap());
            let u = universal_vector(&d);
            assert_eq!(mass_coefficient(&d, &u).unwrap(), -universal_mass_coefficient(&d));
            let other = CoefficientVector::new((0..d.len()).map(|j| frac(j as i64 * 3 - 2, 7)).collect());
            let (alpha, beta) = (frac(-5, 3), frac(2, 9));
            let lhs = mass_coefficient(&d, &u.combine(&alpha, &other, &beta)).unwrap();
            let rhs = alpha * mass_coefficient(&d, &u).unwrap() + beta * mass_coefficient(&d, &other).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn two_summand_weights() {
        for n in [4usize, 6, 8, 10] {
            for k2 in 1..=6i64 {
                for last in [1i64, -1] {
                    let mut coords = vec![k2; n / 2];
                    *coords.last_mut().unwrap() *= last;
                    let text: Vec<String> = coords.iter().map(|c| format!("{c}/2")).collect();
                    let d = decompose(&DominantWeight::parse(n, &text.join(",")).unwrap());
                    assert_eq!(d.len(), 2);
                    let k = frac(k2, 2);
                    assert_eq!(d.summands[0].conformal_weight, k.clone());
                    assert_eq!(d.summands[1].conformal_weight, int(1) - frac(n as i64, 2) - k);
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let spin = decompose(&DominantWeight::spin(5).unwrap());
        let report = classify(&spin, &CoefficientVector::from_ints(&[-1, 4]), None).unwrap();
        assert_eq!(report.classification, MassSign::Positive);
        assert_eq!(report.p_plus_indices, vec![1]);
        assert_eq!(report.p_minus_indices, vec![0]);
        assert_eq!(report.in_span, None);

        let d = decompose(&DominantWeight::parse(6, "1,1,-1").unwrap());
        let u = universal_vector(&d);
        assert_eq!(classify(&d, &u, None).unwrap().classification, MassSign::Negative);
        let neg = u.combine(&int(-1), &u, &int(0));
        assert_eq!(classify(&d, &neg, None).unwrap().classification, MassSign::Positive);

        let zero = classify(&d, &CoefficientVector::zero(2), None).unwrap();
        assert_eq!(zero.classification, MassSign::Zero);
        assert!(zero.p_plus_indices.is_empty() && zero.p_minus_indices.is_empty());
    }

    #[test]
    fn classification_checks_span() {
        let (basis, data) = basis_for(3, Family::Spin, 5);
        let good = classify(&data.decomposition, &CoefficientVector::from_ints(&[-1, 2]), Some(&basis)).unwrap();
        assert_eq!(good.in_span, Some(true));
        let bad = classify(&data.decomposition, &CoefficientVector::from_ints(&[1, 1]), Some(&basis)).unwrap();
        assert_eq!(bad.in_span, Some(false));
    }

    #[test]
    fn json_of_coefficients() {
        let a = CoefficientVector::parse("1/2,-1").unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[{"num":1,"den":2},{"num":-1,"den":1}]"#);
    }
}
