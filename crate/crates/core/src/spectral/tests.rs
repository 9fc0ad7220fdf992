use super::*;
use crate::weights::casimir;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Eigenvalues grouped as (value, multiplicity), values rounded to 1e-6.
fn spectrum(values: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        let v = (v * 1e6).round() / 1e6;
        match out.iter_mut().find(|(w, _)| (*w - v).abs() < 1e-6) {
            Some(e) => e.1 += 1,
            None => out.push((v, 1)),
        }
    }
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

#[test]
fn pair_indices_enumerate_all_pairs() {
    let n = 6;
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            assert_eq!(pair_index(n, a, b), k);
            assert_eq!(pair_of(n, k), (a, b));
            k += 1;
        }
    }
    assert_eq!(k, pair_count(n));
}

#[test]
fn spin_three_has_casimir_three_quarters() {
    let rep = MatrixRep::build(3, Family::Spin).unwrap();
    assert_eq!(rep.dim_v(), 2);
    let cas = rep.casimir_matrix();
    assert!(max_abs(&(cas - CMatrix::identity(2, 2) * c(0.75))) < 1e-14);
}

#[test]
fn symmetric_two_in_three_dimensions() {
    let rep = MatrixRep::build(3, Family::SymmetricTraceless(2)).unwrap();
    assert_eq!(rep.dim_v(), 5);
}

#[test]
fn families_satisfy_relations_and_casimir() {
    let mut cases = Vec::new();
    for n in 3..=6 {
        for p in 0..=n {
            cases.push((n, Family::Exterior(p)));
        }
        cases.push((n, Family::Spin));
        for k in 1..=3 {
            cases.push((n, Family::SymmetricTraceless(k)));
        }
    }
    for (n, family) in cases {
        let rep = MatrixRep::build(n, family).unwrap();
        assert!(rep.skew_defect() < 1e-12, "{family} n={n}");
        assert!(rep.relation_defect() < 1e-12, "{family} n={n}: {}", rep.relation_defect());
        let cas = to_f64(&casimir(rep.weight()));
        let d = rep.dim_v();
        assert!(max_abs(&(rep.casimir_matrix() - CMatrix::identity(d, d) * c(cas))) < 1e-10, "{family} n={n}");
    }
}

#[test]
fn negative_halves_are_constructible() {
    let minus = DominantWeight::parse(6, "1/2,1/2,-1/2").unwrap();
    let rep = MatrixRep::for_weight(&minus).unwrap();
    assert_eq!(rep.dim_v(), 4);
    let asd = DominantWeight::parse(4, "1,-1").unwrap();
    let rep = MatrixRep::for_weight(&asd).unwrap();
    assert_eq!(rep.family(), Family::Exterior(2));
    assert_eq!(rep.dim_v(), 3);
    assert!(rep.relation_defect() < 1e-12);
    // the highest weight really is (1,-1)
    let hs = rep.cartan();
    assert_eq!(joint_eigenspace(&hs, &[2, -2]).ncols(), 1);
    assert_eq!(joint_eigenspace(&hs, &[2, 2]).ncols(), 0);
}

#[test]
fn unsupported_weights_are_capability_errors() {
    let w = DominantWeight::parse(5, "2,1").unwrap();
    assert!(matches!(MatrixRep::for_weight(&w), Err(Error::Capability(_))));
    assert!(matches!(
        MatrixRep::build(12, Family::SymmetricTraceless(3)),
        Err(Error::Capability(_))
    ));
    assert!(matches!(MatrixRep::build(3, Family::Exterior(4)), Err(Error::Argument(_))));
    assert!(matches!(MatrixRep::build(3, Family::SymmetricTraceless(0)), Err(Error::Argument(_))));
}

#[test]
fn b_of_the_trivial_representation_vanishes() {
    let rep = MatrixRep::build(4, Family::Exterior(0)).unwrap();
    let b = build_b(&rep);
    assert_eq!(b.dim(), 4);
    assert_eq!(max_abs(&b.matrix), 0.0);
    let proj = build_projections(&b, &decompose(rep.weight())).unwrap();
    assert_eq!(proj.len(), 1);
    assert!(max_abs(&(&proj.projections[0] - CMatrix::identity(4, 4))) < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xi = random_unit(&mut rng, 4);
    let q = symbol_matrix(&proj, 0, &xi).unwrap();
    assert!(max_abs(&(q - CMatrix::identity(1, 1))) < 1e-12);
}

#[test]
fn b_spectrum_of_one_forms_in_three_dimensions() {
    let rep = MatrixRep::build(3, Family::Exterior(1)).unwrap();
    let b = build_b(&rep);
    assert!(b.self_adjoint_defect() < 1e-15);
    assert!(max_abs(&b.partial_trace()) < 1e-15);
    assert_eq!(spectrum(&b.eigenvalues()), vec![(1.0, 5), (-1.0, 3), (-2.0, 1)]);
    let proj = build_projections(&b, &decompose(rep.weight())).unwrap();
    assert_eq!(proj.dims, vec![5, 3, 1]);
    assert!(proj.defects(&b).max() < 1e-9);
}

#[test]
fn b_spectrum_of_spinors_in_five_dimensions() {
    let rep = MatrixRep::build(5, Family::Spin).unwrap();
    let b = build_b(&rep);
    let s = spectrum(&b.eigenvalues());
    assert_eq!(s.len(), 2);
    assert!((s[0].0 - 0.5).abs() < 1e-12 && s[0].1 == 16);
    assert!((s[1].0 + 2.0).abs() < 1e-12 && s[1].1 == 4);
}

#[test]
fn spinor_projection_ranks_and_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=7 {
        let rep = MatrixRep::build(n, Family::Spin).unwrap();
        let b = build_b(&rep);
        let proj = build_projections(&b, &decompose(rep.weight())).unwrap();
        let d = rep.dim_v();
        assert_eq!(proj.dims, vec![d * (n - 1), d]);
        for _ in 0..5 {
            let xi = random_unit(&mut rng, n);
            let q1 = symbol_matrix(&proj, 0, &xi).unwrap();
            let q2 = symbol_matrix(&proj, 1, &xi).unwrap();
            assert!(max_abs(&(&q1 - &q2 * c((n - 1) as f64))) < 1e-10);
            assert!(max_abs(&(&q2 - CMatrix::identity(d, d) * c(1.0 / n as f64))) < 1e-10);
        }
    }
}

#[test]
fn shared_conformal_weights_are_separated() {
    // R^4 ⊗ R^4: Λ²₊ and Λ²₋ both have w = −1
    let rep = MatrixRep::build(4, Family::Exterior(1)).unwrap();
    let b = build_b(&rep);
    let decomp = decompose(rep.weight());
    let proj = build_projections(&b, &decomp).unwrap();
    assert_eq!(proj.dims, vec![9, 3, 3, 1]);
    assert!(proj.defects(&b).max() < 1e-9, "{:?}", proj.defects(&b));
    // weight (1,1) occurs in the (1,1) summand but not in the (1,-1) summand
    let hs: Vec<CMatrix> = {
        let std_h = MatrixRep::build(4, Family::Exterior(1)).unwrap().cartan();
        let d = rep.dim_v();
        let id_v = CMatrix::identity(d, d);
        let id_n = CMatrix::identity(4, 4);
        std_h.iter().zip(rep.cartan()).map(|(h, k)| h.kronecker(&id_v) + id_n.kronecker(&k)).collect()
    };
    let space = joint_eigenspace(&hs, &[2, 2]);
    assert_eq!(space.ncols(), 2);
    let trace_on = |p: &CMatrix| (space.adjoint() * p * &space).trace().re;
    assert!((trace_on(&proj.projections[0]) - 1.0).abs() < 1e-9);
    assert!((trace_on(&proj.projections[1]) - 1.0).abs() < 1e-9);
    assert!(trace_on(&proj.projections[2]).abs() < 1e-9);
}

#[test]
fn symbols_are_positive_and_resolve_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, family) in [(5, Family::Exterior(2)), (4, Family::SymmetricTraceless(2)), (6, Family::Spin)] {
        let rep = MatrixRep::build(n, family).unwrap();
        let b = build_b(&rep);
        let proj = build_projections(&b, &decompose(rep.weight())).unwrap();
        let d = rep.dim_v();
        let reference: Vec<Vec<f64>> = {
            let xi = random_unit(&mut rng, n);
            (0..proj.len()).map(|j| hermitian_eigenvalues(&symbol_matrix(&proj, j, &xi).unwrap())).collect()
        };
        for _ in 0..20 {
            let xi = random_unit(&mut rng, n);
            let mut sum = zeros(d, d);
            let mut weighted = zeros(d, d);
            for j in 0..proj.len() {
                let q = symbol_matrix(&proj, j, &xi).unwrap();
                let ev = hermitian_eigenvalues(&q);
                assert!(ev[0] > -1e-10);
                for (a, b) in ev.iter().zip(&reference[j]) {
                    assert!((a - b).abs() < 1e-9);
                }
                sum += &q;
                weighted += &q * c(proj.weights[j]);
            }
            assert!(max_abs(&(sum - CMatrix::identity(d, d))) < 1e-9);
            assert!(max_abs(&weighted) < 1e-9);
        }
    }
}

#[test]
fn symbol_rejects_non_unit_vectors() {
    let rep = MatrixRep::build(3, Family::Spin).unwrap();
    let b = build_b(&rep);
    let proj = build_projections(&b, &decompose(rep.weight())).unwrap();
    assert!(matches!(symbol_matrix(&proj, 0, &[1.0, 1.0, 0.0]), Err(Error::Argument(_))));
    assert!(matches!(symbol_matrix(&proj, 5, &[1.0, 0.0, 0.0]), Err(Error::Argument(_))));
}

#[test]
fn mismatched_decomposition_is_rejected() {
    let rep = MatrixRep::build(3, Family::Spin).unwrap();
    let b = build_b(&rep);
    let other = decompose(&DominantWeight::standard(3).unwrap());
    assert!(matches!(build_projections(&b, &other), Err(Error::Argument(_))));
}

#[test]
fn cross_check_passes_for_small_families() {
    for (n, family) in [(3, Family::Spin), (4, Family::Exterior(2)), (5, Family::SymmetricTraceless(2))] {
        let report = cross_check(&analyze(MatrixRep::build(n, family).unwrap()).unwrap());
        assert!(report.passed, "{report:?}");
        assert_eq!(report.checks.len(), 6);
    }
}
