//! Explicit matrix representations of `so(n)` and the spectral side of the
//! weight calculus: the conformal weight operator `B` on `R^n ⊗ V`, the
//! projections `Π_j` onto its irreducible summands and the symbols
//! `q_j(ξ) = p_j(ξ)^* p_j(ξ)`.

pub mod families;
pub mod linalg;

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::rational::to_f64;
use crate::weights::{decompose, weyl_dimension, Decomposition, DominantWeight};
use linalg::{
    c, generate_submodule, hermitian_eigen, hermitian_eigenvalues, joint_eigenspace, max_abs,
    restrict, weight_decomposition, zeros, CMatrix, CVector,
};

/// Dense constructions are refused beyond this size of `R^n ⊗ V`.
pub const MAX_TENSOR_DIM: usize = 2048;

/// Number of generators `e_a∧e_b`, `a < b`.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Position of `e_a∧e_b` (`a < b`, 0-based) in the generator list.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Representation families with an explicit matrix construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Λ^p R^n`; for `p = n/2` the self-dual half.
    Exterior(usize),
    /// Spinors; positive half-spinors in even dimension.
    Spin,
    /// Symmetric traceless tensors of degree `k`.
    SymmetricTraceless(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Exterior(p) => write!(f, "exterior({p})"),
            Family::Spin => f.write_str("spin"),
            Family::SymmetricTraceless(k) => write!(f, "symmetric_traceless({k})"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Family {
    /// Dominant weight of the (default half of the) family in dimension `n`.
    pub fn weight(&self, n: usize) -> Result<DominantWeight> {
        match *self {
            Family::Exterior(p) => {
                if p > n {
                    return arg(format!("exterior power p = {p} exceeds n = {n}"));
                }
                DominantWeight::forms(n, p.min(n - p))
            }
            Family::Spin => DominantWeight::spin(n),
            Family::SymmetricTraceless(k) => {
                if k == 0 {
                    return arg("symmetric traceless degree must be at least 1");
                }
                DominantWeight::symmetric(n, k as i64)
            }
        }
    }

    /// Recognises a dominant weight as a member of one of the families.
    pub fn recognize(rho: &DominantWeight) -> Result<Family> {
        let n = rho.n();
        let abs: Vec<i64> = rho.coords().iter().map(|x| x.abs().doubled()).collect();
        if abs.iter().all(|&x| x == 1) {
            return Ok(Family::Spin);
        }
        let ones = abs.iter().take_while(|&&x| x == 2).count();
        if abs[ones..].iter().all(|&x| x == 0) {
            return Ok(Family::Exterior(ones));
        }
        if abs[0] % 2 == 0 && abs[1..].iter().all(|&x| x == 0) {
            return Ok(Family::SymmetricTraceless(abs[0] as usize / 2));
        }
        Err(Error::Capability(format!(
            "no explicit matrix construction for the so({n}) representation ({rho}); \
             supported: exterior powers, spinors, symmetric traceless tensors"
        )))
    }
}

/// Skew-Hermitian generator matrices `ρ(e_a∧e_b)` of an irreducible
/// representation, in an orthonormal basis of `V`.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    n: usize,
    family: Family,
    weight: DominantWeight,
    generators: Vec<CMatrix>,
}

impl MatrixRep {
    /// Builds the default member of `family` in dimension `n`.
    pub fn build(n: usize, family: Family) -> Result<Self> {
        if n < 3 {
            return arg(format!("dimension n = {n} must be at least 3"));
        }
        let weight = family.weight(n)?;
        Self::build_with_weight(family, weight)
    }

    /// Builds the representation with dominant weight `rho`, provided it
    /// belongs to a supported family (including negative halves in even
    /// dimension).
    pub fn for_weight(rho: &DominantWeight) -> Result<Self> {
        let family = Family::recognize(rho)?;
        Self::build_with_weight(family, rho.clone())
    }

    fn build_with_weight(family: Family, weight: DominantWeight) -> Result<Self> {
        let n = weight.n();
        let dim = weyl_dimension(&weight)
            .to_usize()
            .filter(|d| n * d <= MAX_TENSOR_DIM)
            .ok_or_else(|| {
                Error::Capability(format!(
                    "{family} in dimension {n} exceeds the dense size limit n·dim V ≤ {MAX_TENSOR_DIM}"
                ))
            })?;
        let target: Vec<i64> = weight.coords().iter().map(|x| x.doubled()).collect();
        let generators = match family {
            Family::Exterior(p) => {
                let gens = families::exterior(n, p);
                if 2 * p == n {
                    select_component(n, &gens, &target)?
                } else {
                    gens
                }
            }
            Family::Spin => {
                let gens = families::spin(n);
                if n.is_multiple_of(2) {
                    select_chirality(n, &gens, &target)?
                } else {
                    gens
                }
            }
            Family::SymmetricTraceless(k) => families::symmetric_traceless(n, k),
        };
        let rep = Self { n, family, weight, generators };
        if rep.dim_v() != dim {
            return Err(Error::Consistency(format!(
                "{family} in dimension {n} has {} basis vectors but Weyl dimension {dim}",
                rep.dim_v()
            )));
        }
        Ok(rep)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn weight(&self) -> &DominantWeight {
        &self.weight
    }

    pub fn dim_v(&self) -> usize {
        self.generators.first().map_or(1, |g| g.nrows())
    }

    /// Generators in `pair_index` order.
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// `ρ(e_a∧e_b)` for any `a, b` (zero when `a = b`).
    pub fn generator(&self, a: usize, b: usize) -> CMatrix {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.generators[pair_index(self.n, a, b)].clone(),
            std::cmp::Ordering::Greater => -self.generators[pair_index(self.n, b, a)].clone(),
            std::cmp::Ordering::Equal => zeros(self.dim_v(), self.dim_v()),
        }
    }

    /// Cartan generators `H_k = i ρ(e_{2k-1}∧e_{2k})`, Hermitian; their joint
    /// eigenvalues are the weights.
    pub fn cartan(&self) -> Vec<CMatrix> {
        cartan(self.n, &self.generators)
    }

    /// `−Σ_{a<b} ρ(e_a∧e_b)²`, equal to `c(ρ)·Id` for an irreducible `ρ`.
    pub fn casimir_matrix(&self) -> CMatrix {
        let d = self.dim_v();
        self.generators.iter().fold(zeros(d, d), |acc, g| acc - g * g)
    }

    /// `max ‖ρ(e_a∧e_b)^* + ρ(e_a∧e_b)‖`.
    pub fn skew_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| max_abs(&(g.adjoint() + g)))
            .fold(0.0, f64::max)
    }

    /// Largest violation of the bracket relations
    /// `[ρ(ab), ρ(cd)] = −δ_bc ρ(ad) + δ_ac ρ(bd) − δ_ad ρ(bc) + δ_bd ρ(ac)`,
    /// which hold for the convention `e_a∧e_b : e_a ↦ e_b`.
    pub fn relation_defect(&self) -> f64 {
        let n = self.n;
        let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                for cc in 0..n {
                    for d in cc + 1..n {
                        let x = &self.generators[pair_index(n, a, b)];
                        let y = &self.generators[pair_index(n, cc, d)];
                        let lhs = x * y - y * x;
                        let rhs = self.generator(a, d) * c(-delta(b, cc))
                            + self.generator(b, d) * c(delta(a, cc))
                            + self.generator(b, cc) * c(-delta(a, d))
                            + self.generator(a, cc) * c(delta(b, d));
                        worst = worst.max(max_abs(&(lhs - rhs)));
                    }
                }
            }
        }
        worst
    }

    /// Action of `e_a∧e_b` (by `pair_index`) on `R^n ⊗ V`, vectors laid out
    /// as `n` consecutive blocks of length `dim V`.
    pub fn tensor_action(&self, pair: usize, v: &CVector) -> CVector {
        let (a, b) = pair_of(self.n, pair);
        let d = self.dim_v();
        let g = &self.generators[pair];
        let mut out = CVector::zeros(v.len());
        for i in 0..self.n {
            let block = v.rows(i * d, d);
            out.rows_mut(i * d, d).copy_from(&(g * block));
        }
        // the R^n factor: e_a ↦ e_b, e_b ↦ −e_a
        let va = v.rows(a * d, d).into_owned();
        let vb = v.rows(b * d, d).into_owned();
        let mut ob = out.rows_mut(b * d, d);
        ob += &va;
        let mut oa = out.rows_mut(a * d, d);
        oa -= &vb;
        out
    }
}

fn pair_of(n: usize, pair: usize) -> (usize, usize) {
    let mut idx = pair;
    for a in 0..n {
        let row = n - a - 1;
        if idx < row {
            return (a, a + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index {pair} out of range for n = {n}")
}

fn cartan(n: usize, generators: &[CMatrix]) -> Vec<CMatrix> {
    (0..n / 2)
        .map(|k| &generators[pair_index(n, 2 * k, 2 * k + 1)] * linalg::C64::new(0.0, 1.0))
        .collect()
}

fn highest_weight_vectors(n: usize, generators: &[CMatrix], target: &[i64]) -> Result<CMatrix> {
    let hw = joint_eigenspace(&cartan(n, generators), target);
    if hw.ncols() == 0 {
        return Err(Error::Consistency(format!(
            "no vector of weight {target:?} (doubled) in the constructed representation"
        )));
    }
    Ok(hw)
}

/// Restricts a reducible representation to the irreducible component
/// generated by its vectors of weight `target`.
fn select_component(n: usize, gens: &[CMatrix], target: &[i64]) -> Result<Vec<CMatrix>> {
    let hw = highest_weight_vectors(n, gens, target)?;
    let dim = gens[0].nrows();
    let seeds: Vec<CVector> = (0..hw.ncols()).map(|j| hw.column(j).into_owned()).collect();
    let basis = generate_submodule(dim, gens.len(), &seeds, |g, v| &gens[g] * v);
    Ok(restrict(gens, &basis))
}

/// Restricts the Dirac spinors to the chirality eigenspace containing the
/// vectors of weight `target`.
fn select_chirality(n: usize, gens: &[CMatrix], target: &[i64]) -> Result<Vec<CMatrix>> {
    let chi = families::chirality(n);
    let hw = highest_weight_vectors(n, gens, target)?;
    let v = hw.column(0).into_owned();
    let sign = v.dotc(&(&chi * &v)).re.signum();
    let (values, vectors) = hermitian_eigen(&chi);
    let keep: Vec<usize> = (0..values.len()).filter(|&i| (values[i] - sign).abs() < 1e-9).collect();
    let basis = CMatrix::from_fn(chi.nrows(), keep.len(), |r, j| vectors[(r, keep[j])]);
    Ok(restrict(gens, &basis))
}

/// The conformal weight operator `B(α⊗v) = Σ_i e_i ⊗ ρ(e_i∧α)v` on
/// `R^n ⊗ V`, basis `e_i ⊗ σ_κ` at index `i·dim V + κ`.
#[derive(Debug, Clone)]
pub struct BOperator<'a> {
    pub rep: &'a MatrixRep,
    pub matrix: CMatrix,
}

pub fn build_b(rep: &MatrixRep) -> BOperator<'_> {
    let (n, d) = (rep.n(), rep.dim_v());
    let mut m = zeros(n * d, n * d);
    for i in 0..n {
        for k in 0..n {
            if i != k {
                m.view_mut((i * d, k * d), (d, d)).copy_from(&rep.generator(i, k));
            }
        }
    }
    BOperator { rep, matrix: m }
}

impl BOperator<'_> {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// `Σ_i B_{ii}` as an endomorphism of `V`.
    pub fn partial_trace(&self) -> CMatrix {
        let d = self.rep.dim_v();
        (0..self.rep.n()).fold(zeros(d, d), |acc, i| acc + self.matrix.view((i * d, i * d), (d, d)))
    }

    /// `tr B²`.
    pub fn trace_of_square(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Orthogonal projections `Π_j` onto the summands of `R^n ⊗ V`, in the
/// summand order of the decomposition.
#[derive(Debug, Clone)]
pub struct ProjectionSet {
    pub n: usize,
    pub dim_v: usize,
    pub weights: Vec<f64>,
    pub dims: Vec<usize>,
    pub projections: Vec<CMatrix>,
}

/// Worst deviations from the algebraic identities of a [`ProjectionSet`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProjectionDefects {
    pub idempotent: f64,
    pub self_adjoint: f64,
    pub orthogonal: f64,
    pub completeness: f64,
    pub eigen: f64,
    pub rank_mismatch: bool,
}

impl ProjectionDefects {
    pub fn max(&self) -> f64 {
        [self.idempotent, self.self_adjoint, self.orthogonal, self.completeness, self.eigen]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Tolerance for matching eigenvalues of `B` with predicted weights.
pub const EIGEN_MATCH_TOL: f64 = 1e-6;

/// Builds the projections by Lagrange interpolation in `B`. Summands sharing
/// a conformal weight (possible in even dimension) are separated by the
/// submodules generated from their highest weight vectors.
pub fn build_projections(b: &BOperator<'_>, decomp: &Decomposition) -> Result<ProjectionSet> {
    let rep = b.rep;
    if &decomp.rho != rep.weight() {
        return arg(format!(
            "decomposition of ({}) does not match the representation ({})",
            decomp.rho,
            rep.weight()
        ));
    }
    let weights: Vec<f64> = decomp.summands.iter().map(|s| to_f64(&s.conformal_weight)).collect();
    for ev in b.eigenvalues() {
        if weights.iter().all(|w| (ev - w).abs() > EIGEN_MATCH_TOL) {
            return Err(Error::Consistency(format!(
                "B has eigenvalue {ev} not among the predicted conformal weights {weights:?}"
            )));
        }
    }
    // groups of summands sharing a conformal weight
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, s) in decomp.summands.iter().enumerate() {
        match groups
            .iter_mut()
            .find(|g| decomp.summands[g[0]].conformal_weight == s.conformal_weight)
        {
            Some(g) => g.push(j),
            None => groups.push(vec![j]),
        }
    }
    let dim = b.dim();
    let identity = CMatrix::identity(dim, dim);
    let mut projections = vec![zeros(dim, dim); decomp.len()];
    for g in &groups {
        let wg = weights[g[0]];
        let mut p = identity.clone();
        for h in &groups {
            let wh = weights[h[0]];
            if wh != wg {
                p = p * (&b.matrix - &identity * c(wh)) * c(1.0 / (wg - wh));
            }
        }
        if g.len() == 1 {
            projections[g[0]] = p;
        } else {
            let targets: Vec<&DominantWeight> = g.iter().map(|&j| &decomp.summands[j].weight).collect();
            for (j, q) in g.iter().zip(split_shared_weight(rep, &p, &targets)?) {
                projections[*j] = q;
            }
        }
    }
    let dims: Vec<usize> = decomp
        .summands
        .iter()
        .map(|s| s.dim.to_usize().unwrap_or(usize::MAX))
        .collect();
    let set = ProjectionSet { n: rep.n(), dim_v: rep.dim_v(), weights, dims, projections };
    for (j, p) in set.projections.iter().enumerate() {
        let rank = p.trace().re.round() as usize;
        if rank != set.dims[j] {
            return Err(Error::Consistency(format!(
                "projection onto ({}) has rank {rank}, expected {}",
                decomp.summands[j].weight, set.dims[j]
            )));
        }
    }
    Ok(set)
}

fn split_shared_weight(
    rep: &MatrixRep,
    group: &CMatrix,
    targets: &[&DominantWeight],
) -> Result<Vec<CMatrix>> {
    let n = rep.n();
    let d = rep.dim_v();
    let dim = n * d;
    let std_rep = MatrixRep::build(n, Family::Exterior(1))?;
    let outer = weight_decomposition(&std_rep.cartan());
    let inner = weight_decomposition(&rep.cartan());
    let mut out = Vec::with_capacity(targets.len());
    let mut rest = group.clone();
    for (idx, lambda) in targets.iter().enumerate() {
        if idx + 1 == targets.len() {
            out.push(rest.clone());
            break;
        }
        let target: Vec<i64> = lambda.coords().iter().map(|x| x.doubled()).collect();
        let mut cols = Vec::new();
        for (wo, vo) in &outer {
            for (wi, vi) in &inner {
                if wo.iter().zip(wi).zip(&target).all(|((a, b), t)| a + b == *t) {
                    cols.push(vo.kronecker(vi));
                }
            }
        }
        let span = linalg::columns_to_matrix(dim, &cols);
        let (values, vecs) = hermitian_eigen(&(span.adjoint() * group * &span));
        let inside: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 1.0 - 1e-6).collect();
        if inside.len() != 1 {
            return Err(Error::Consistency(format!(
                "expected one highest weight vector of weight ({lambda}), found {}",
                inside.len()
            )));
        }
        let seed = &span * vecs.column(inside[0]);
        let basis = generate_submodule(dim, pair_count(n), &[seed], |g, v| rep.tensor_action(g, v));
        let proj = &basis * basis.adjoint();
        rest -= &proj;
        out.push(proj);
    }
    Ok(out)
}

impl ProjectionSet {
    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn defects(&self, b: &BOperator<'_>) -> ProjectionDefects {
        let dim = self.n * self.dim_v;
        let mut d = ProjectionDefects {
            idempotent: 0.0,
            self_adjoint: 0.0,
            orthogonal: 0.0,
            completeness: 0.0,
            eigen: 0.0,
            rank_mismatch: false,
        };
        let mut sum = zeros(dim, dim);
        for (j, p) in self.projections.iter().enumerate() {
            d.idempotent = d.idempotent.max(max_abs(&(p * p - p)));
            d.self_adjoint = d.self_adjoint.max(max_abs(&(p - p.adjoint())));
            d.eigen = d.eigen.max(max_abs(&(&b.matrix * p - p * c(self.weights[j]))));
            for q in &self.projections[j + 1..] {
                d.orthogonal = d.orthogonal.max(max_abs(&(p * q)));
            }
            if p.trace().re.round() as usize != self.dims[j] {
                d.rank_mismatch = true;
            }
            sum += p;
        }
        d.completeness = max_abs(&(sum - CMatrix::identity(dim, dim)));
        d
    }

    /// `A = Σ a_j Π_j`.
    pub fn combination(&self, coeffs: &[f64]) -> CMatrix {
        let dim = self.n * self.dim_v;
        self.projections
            .iter()
            .zip(coeffs)
            .fold(zeros(dim, dim), |acc, (p, a)| acc + p * c(*a))
    }
}

/// Symbol `q_j(ξ)` with entries `⟨ξ⊗σ_a, Π_j(ξ⊗σ_b)⟩`.
pub fn symbol_matrix(proj: &ProjectionSet, j: usize, xi: &[f64]) -> Result<CMatrix> {
    if j >= proj.len() {
        return arg(format!("summand index {j} out of range (N = {})", proj.len()));
    }
    if xi.len() != proj.n {
        return arg(format!("ξ has {} components, expected {}", xi.len(), proj.n));
    }
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return arg(format!("ξ must be a unit vector, |ξ| = {norm}"));
    }
    let d = proj.dim_v;
    let p = &proj.projections[j];
    let mut q = zeros(d, d);
    for (i, &xi_i) in xi.iter().enumerate() {
        for (k, &xi_k) in xi.iter().enumerate() {
            let w = xi_i * xi_k;
            if w != 0.0 {
                q += p.view((i * d, k * d), (d, d)) * c(w);
            }
        }
    }
    Ok(q)
}

/// Everything needed to cross-check a family against the weight calculus.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub rep: MatrixRep,
    pub decomposition: Decomposition,
    pub b_eigenvalues: Vec<f64>,
    pub trace_b_squared: f64,
    pub projections: ProjectionSet,
    pub defects: ProjectionDefects,
}

pub fn analyze(rep: MatrixRep) -> Result<SpectralData> {
    let decomposition = decompose(rep.weight());
    let (b_eigenvalues, trace_b_squared, projections, defects) = {
        let b = build_b(&rep);
        let projections = build_projections(&b, &decomposition)?;
        let defects = projections.defects(&b);
        (b.eigenvalues(), b.trace_of_square(), projections, defects)
    };
    Ok(SpectralData { rep, decomposition, b_eigenvalues, trace_b_squared, projections, defects })
}

/// Tolerance of the spectral cross-checks.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// One named comparison between the explicit matrices and the weight
/// calculus.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
}

/// Result of [`cross_check`].
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub n: usize,
    pub family: Family,
    pub weight: DominantWeight,
    pub dim_v: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Compares an analysed representation with the exact predictions:
/// generator relations, the Casimir operator, the spectrum of `B` with
/// multiplicities, `tr B²` and the projection identities.
pub fn cross_check(data: &SpectralData) -> CrossCheck {
    let rep = &data.rep;
    let d = rep.dim_v();
    let cas = to_f64(&crate::weights::casimir(rep.weight()));
    let mut checks = vec![
        Check::new("generators skew-adjoint", rep.skew_defect(), CROSS_CHECK_TOL),
        Check::new("bracket relations", rep.relation_defect(), CROSS_CHECK_TOL),
        Check::new(
            "Casimir operator equals c(rho)",
            max_abs(&(rep.casimir_matrix() - CMatrix::identity(d, d) * c(cas))),
            CROSS_CHECK_TOL,
        ),
    ];
    let mut predicted: Vec<f64> = Vec::new();
    let mut dims_ok = true;
    for s in &data.decomposition.summands {
        match s.dim.to_usize() {
            Some(k) => predicted.extend(std::iter::repeat_n(to_f64(&s.conformal_weight), k)),
            None => dims_ok = false,
        }
    }
    let mut actual = data.b_eigenvalues.clone();
    actual.sort_by(f64::total_cmp);
    predicted.sort_by(f64::total_cmp);
    let spectrum = if dims_ok && actual.len() == predicted.len() {
        actual.iter().zip(&predicted).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    checks.push(Check::new("B spectrum equals conformal weights with Weyl multiplicities", spectrum, CROSS_CHECK_TOL));
    let expected = 2.0 * d as f64 * cas;
    let trace = if expected == 0.0 {
        data.trace_b_squared.abs()
    } else {
        (data.trace_b_squared - expected).abs() / expected.abs()
    };
    checks.push(Check::new("tr B^2 equals 2 dim V c(rho) (relative)", trace, CROSS_CHECK_TOL));
    let defects = if data.defects.rank_mismatch { f64::INFINITY } else { data.defects.max() };
    checks.push(Check::new("projection identities", defects, CROSS_CHECK_TOL));
    let passed = checks.iter().all(|c| c.passed);
    CrossCheck { n: rep.n(), family: rep.family(), weight: rep.weight().clone(), dim_v: d, checks, passed }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorDump {
    pub i: usize,
    pub j: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// JSON payload of `--dump-spectral`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDump {
    pub n: usize,
    pub family: Family,
    pub weight: DominantWeight,
    pub dim_v: usize,
    pub generators: Vec<GeneratorDump>,
    pub b_eigenvalues: Vec<f64>,
}

impl SpectralDump {
    pub fn new(rep: &MatrixRep, b_eigenvalues: Vec<f64>) -> Self {
        let n = rep.n();
        let mut generators = Vec::with_capacity(pair_count(n));
        for a in 0..n {
            for b in a + 1..n {
                let g = &rep.generators[pair_index(n, a, b)];
                let rows = |f: fn(&num_complex::Complex<f64>) -> f64| {
                    (0..g.nrows()).map(|r| (0..g.ncols()).map(|k| f(&g[(r, k)])).collect()).collect()
                };
                generators.push(GeneratorDump { i: a + 1, j: b + 1, re: rows(|z| z.re), im: rows(|z| z.im) });
            }
        }
        Self {
            n,
            family: rep.family(),
            weight: rep.weight().clone(),
            dim_v: rep.dim_v(),
            generators,
            b_eigenvalues,
        }
    }
}

#[cfg(test)]
mod tests;
