//! Generator matrices `ρ(e_a∧e_b)` for the concrete representation families.
//!
//! Convention: `e_a∧e_b` acts on `R^n` by `e_a ↦ e_b`, `e_b ↦ −e_a`. Every
//! family below is a Lie algebra homomorphism for this convention and is
//! written in an orthonormal basis, so generators are skew-Hermitian.

use std::collections::HashMap;

use super::linalg::{c, hermitian_eigen, zeros, CMatrix, C64};
use super::pair_count;

/// Generators of the derivation action on `Λ^p R^n` in the basis
/// `e_I = e_{i_1}∧…∧e_{i_p}`, `i_1 < … < i_p`.
pub fn exterior(n: usize, p: usize) -> Vec<CMatrix> {
    let subsets = combinations(n, p);
    let index: HashMap<&[usize], usize> =
        subsets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let dim = subsets.len();
    let mut gens = Vec::with_capacity(pair_count(n));
    for a in 0..n {
        for b in a + 1..n {
            let mut m = zeros(dim, dim);
            for (col, set) in subsets.iter().enumerate() {
                for (pos, &i) in set.iter().enumerate() {
                    let (target, coeff) = if i == a {
                        (b, 1.0)
                    } else if i == b {
                        (a, -1.0)
                    } else {
                        continue;
                    };
                    if set.contains(&target) {
                        continue;
                    }
                    let mut image = set.clone();
                    image[pos] = target;
                    let sign = sort_with_sign(&mut image);
                    m[(index[image.as_slice()], col)] += c(coeff * sign);
                }
            }
            gens.push(m);
        }
    }
    gens
}

fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Sorts in place and returns the sign of the sorting permutation.
fn sort_with_sign(v: &mut [usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    v.sort_unstable();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Hermitian gamma matrices of size `2^⌊n/2⌋` with `γ_a γ_b + γ_b γ_a = 2δ_ab`,
/// built as tensor products of Pauli matrices.
pub fn gamma_matrices(n: usize) -> Vec<CMatrix> {
    let m = n / 2;
    let i = C64::new(0.0, 1.0);
    let id = CMatrix::identity(2, 2);
    let sx = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let sy = CMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]);
    let sz = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let chain = |slot: usize, middle: &CMatrix| {
        let mut out = CMatrix::identity(1, 1);
        for k in 0..m {
            let f = match k.cmp(&slot) {
                std::cmp::Ordering::Less => &sz,
                std::cmp::Ordering::Equal => middle,
                std::cmp::Ordering::Greater => &id,
            };
            out = out.kronecker(f);
        }
        out
    };
    let mut gammas = Vec::with_capacity(n);
    for k in 0..m {
        gammas.push(chain(k, &sx));
        gammas.push(chain(k, &sy));
    }
    if n % 2 == 1 {
        gammas.push(chain(m, &sz));
    }
    gammas
}

/// `ρ(e_a∧e_b) = ½ Γ_a Γ_b` with the skew-Hermitian Clifford generators
/// `Γ_a = i γ_a`, `Γ_a² = −1`.
pub fn spin(n: usize) -> Vec<CMatrix> {
    let g = gamma_matrices(n);
    let mut gens = Vec::with_capacity(pair_count(n));
    for a in 0..n {
        for b in a + 1..n {
            gens.push(&g[a] * &g[b] * c(-0.5));
        }
    }
    gens
}

/// Chirality operator `i^m γ_1 ⋯ γ_n` for even `n = 2m`;
/// commutes with all spin generators and squares to the identity.
pub fn chirality(n: usize) -> CMatrix {
    let g = gamma_matrices(n);
    let m = n / 2;
    let mut prod = CMatrix::identity(g[0].nrows(), g[0].ncols());
    for x in &g {
        prod *= x;
    }
    let phase = C64::new(0.0, 1.0).powu(m as u32);
    prod * phase
}

fn monomials(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(var: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if var == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(var + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn factorial_sqrt(alpha: &[usize]) -> f64 {
    alpha
        .iter()
        .map(|&a| (1..=a).map(|x| x as f64).product::<f64>())
        .product::<f64>()
        .sqrt()
}

/// Derivation action on degree-`k` polynomials, in the orthonormal basis
/// `x^α / √α!` of the Fischer inner product, restricted to the harmonic
/// (traceless) subspace.
pub fn symmetric_traceless(n: usize, k: usize) -> Vec<CMatrix> {
    let monos = monomials(n, k);
    let index: HashMap<&[usize], usize> =
        monos.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let dim = monos.len();
    let mut gens = Vec::with_capacity(pair_count(n));
    for a in 0..n {
        for b in a + 1..n {
            let mut m = zeros(dim, dim);
            for (col, alpha) in monos.iter().enumerate() {
                let norm = factorial_sqrt(alpha);
                // x_b ∂_a − x_a ∂_b
                for (from, to, sign) in [(a, b, 1.0), (b, a, -1.0)] {
                    if alpha[from] == 0 {
                        continue;
                    }
                    let mut gamma = alpha.clone();
                    gamma[from] -= 1;
                    gamma[to] += 1;
                    let coeff = sign * alpha[from] as f64 * factorial_sqrt(&gamma) / norm;
                    m[(index[gamma.as_slice()], col)] += c(coeff);
                }
            }
            gens.push(m);
        }
    }
    if k < 2 {
        return gens;
    }
    let lower = monomials(n, k - 2);
    let lower_index: HashMap<&[usize], usize> =
        lower.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut lap = zeros(lower.len(), dim);
    for (col, alpha) in monos.iter().enumerate() {
        let norm = factorial_sqrt(alpha);
        for i in 0..n {
            if alpha[i] >= 2 {
                let mut beta = alpha.clone();
                beta[i] -= 2;
                let coeff = (alpha[i] * (alpha[i] - 1)) as f64 * factorial_sqrt(&beta) / norm;
                lap[(lower_index[beta.as_slice()], col)] += c(coeff);
            }
        }
    }
    let (values, vectors) = hermitian_eigen(&(lap.adjoint() * &lap));
    let scale = values.last().copied().unwrap_or(1.0).max(1.0);
    let kernel: Vec<usize> = (0..values.len()).filter(|&i| values[i].abs() < 1e-10 * scale).collect();
    let basis = CMatrix::from_fn(dim, kernel.len(), |r, j| vectors[(r, kernel[j])]);
    super::linalg::restrict(&gens, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_one_is_the_defining_representation() {
        let g = exterior(3, 1);
        assert_eq!(g.len(), 3);
        // ρ(e₁∧e₂): e₁ ↦ e₂, e₂ ↦ −e₁, e₃ ↦ 0
        let e12 = &g[0];
        assert_eq!(e12[(1, 0)], c(1.0));
        assert_eq!(e12[(0, 1)], c(-1.0));
        assert_eq!(e12.column(2).norm(), 0.0);
    }

    #[test]
    fn gamma_matrices_satisfy_clifford_relations() {
        for n in 3..9 {
            let g = gamma_matrices(n);
            let d = g[0].nrows();
            assert_eq!(d, 1 << (n / 2));
            for a in 0..n {
                for b in 0..n {
                    let ac = &g[a] * &g[b] + &g[b] * &g[a];
                    let expected = if a == b { CMatrix::identity(d, d) * c(2.0) } else { zeros(d, d) };
                    assert!((ac - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn chirality_is_an_involution_commuting_with_spin() {
        for n in [4, 6, 8] {
            let chi = chirality(n);
            let d = chi.nrows();
            assert!((&chi * &chi - CMatrix::identity(d, d)).norm() < 1e-13);
            for g in spin(n) {
                assert!((&chi * &g - &g * &chi).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn harmonic_dimensions() {
        assert_eq!(symmetric_traceless(3, 2)[0].nrows(), 5);
        assert_eq!(symmetric_traceless(3, 3)[0].nrows(), 7);
        assert_eq!(symmetric_traceless(4, 2)[0].nrows(), 9);
        assert_eq!(symmetric_traceless(6, 3)[0].nrows(), 50);
    }
}
