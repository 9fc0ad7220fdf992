//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails.
//!
//! Run with `cargo test -p masscalc --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use masscalc::geometry::gauge::TwoForm;
use masscalc::geometry::{
    mass_quadrature, pi_identity_check, theorem_check, FrameMode, MetricChart,
};
use masscalc::rational::{self, frac, Rational};
use masscalc::sampling::seeded;
use masscalc::spectral::{analyze, cross_check, Family, MatrixRep};
use masscalc::weights::{closed_form_weight, conformal_weight, decompose, DominantWeight, HalfInt};
use masscalc::weitzenbock::{mass_coefficient, universal_vector, weitzenbock_basis, CoefficientVector};
use rand::Rng;

/// Tolerances, one per criterion where a tolerance applies.
mod tol {
    /// Eigenvalues of `B` against conformal weights.
    pub const SPECTRUM: f64 = 1e-9;
    /// `tr B²` against `2·dim V·c(ρ)`, relative.
    pub const TRACE_B2: f64 = 1e-9;
    /// Distance of the universal vector from the Weitzenböck space.
    pub const UNIVERSAL: f64 = 1e-9;
    /// Extrapolated Schwarzschild mass against `16π`, relative.
    pub const ADM: f64 = 1e-3;
    /// Ratio of boundary term to mass against `μ(a)`, relative.
    pub const THEOREM: f64 = 1e-2;
    /// Gap between the decay rates of the error and of the leading term.
    pub const PI_GAP: f64 = 0.8;
    /// Flux of `*d*β` relative to the flux of its absolute value.
    pub const GAUGE: f64 = 1e-8;
}

/// Runtime budgets.
mod budget {
    use std::time::Duration;
    pub const DECOMPOSITION: Duration = Duration::from_secs(10);
    pub const SPECTRAL: Duration = Duration::from_secs(120);
    pub const ADM: Duration = Duration::from_secs(10);
    pub const THEOREM: Duration = Duration::from_secs(60);
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

/// A random dominant weight with `3 ≤ n ≤ 12` and coordinates of absolute
/// value at most 4.
fn random_weight<R: Rng>(rng: &mut R) -> DominantWeight {
    let n = rng.random_range(3..=12usize);
    let m = n / 2;
    let spin_type = rng.random_bool(0.5);
    // doubled coordinates: even in 0..=8, or odd in 1..=7
    let mut doubled: Vec<i64> = (0..m)
        .map(|_| if spin_type { 2 * rng.random_range(0..=3) + 1 } else { 2 * rng.random_range(0..=4) })
        .collect();
    doubled.sort_unstable_by(|a, b| b.cmp(a));
    if n % 2 == 0 && rng.random_bool(0.5) {
        doubled[m - 1] = -doubled[m - 1];
    }
    DominantWeight::new(n, doubled.into_iter().map(HalfInt::from_doubled).collect()).expect("dominant by construction")
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let mut rng = seeded(20_260_001);
    let weights: Vec<DominantWeight> = (0..500).map(|_| random_weight(&mut rng)).collect();
    let start = Instant::now();
    let mut invariant_failures = Vec::new();
    let mut closed_form_failures = Vec::new();
    let mut summands = 0usize;
    for rho in &weights {
        let d = decompose(rho);
        if let Err(e) = d.check_invariants() {
            invariant_failures.push(e.to_string());
        }
        for s in &d.summands {
            summands += 1;
            let by_casimir = conformal_weight(&s.weight, rho).expect("summand weights are dominant");
            let closed = closed_form_weight(rho, s.origin);
            if by_casimir != closed || by_casimir != s.conformal_weight {
                closed_form_failures.push(format!("n={} rho=({rho}) lambda=({})", rho.n(), s.weight));
            }
        }
    }
    let elapsed = start.elapsed();
    let first = outcome(
        invariant_failures.is_empty() && within(elapsed, budget::DECOMPOSITION),
        format!(
            "500 random weights, {} invariant failures, {:.3} s (budget {} s){}",
            invariant_failures.len(),
            elapsed.as_secs_f64(),
            budget::DECOMPOSITION.as_secs(),
            invariant_failures.first().map(|e| format!(", first: {e}")).unwrap_or_default()
        ),
    );
    let second = outcome(
        closed_form_failures.is_empty(),
        format!(
            "{summands} summands, {} mismatches between Casimir differences and the closed forms{}",
            closed_form_failures.len(),
            closed_form_failures.first().map(|e| format!(", first: {e}")).unwrap_or_default()
        ),
    );
    (first, second)
}

fn spectral_families() -> Vec<(usize, Family)> {
    let mut cases = Vec::new();
    for n in 3..=8 {
        for p in 1..=n {
            cases.push((n, Family::Exterior(p)));
        }
    }
    for n in 3..=8 {
        cases.push((n, Family::Spin));
    }
    for n in 3..=6 {
        for k in 1..=3 {
            cases.push((n, Family::SymmetricTraceless(k)));
        }
    }
    cases
}

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let cases = spectral_families();
    let start = Instant::now();
    let mut spectral_failures = Vec::new();
    let mut worst_spectrum: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut weitzenbock_failures = Vec::new();
    let mut worst_universal: f64 = 0.0;
    let mut rng = seeded(20_260_003);
    for &(n, family) in &cases {
        let data = match MatrixRep::build(n, family).and_then(analyze) {
            Ok(d) => d,
            Err(e) => {
                spectral_failures.push(format!("{family} n={n}: {e}"));
                weitzenbock_failures.push(format!("{family} n={n}: {e}"));
                continue;
            }
        };
        let report = cross_check(&data);
        let value = |name: &str| report.checks.iter().find(|c| c.name.starts_with(name)).map(|c| c.value);
        let spectrum = value("B spectrum").unwrap_or(f64::INFINITY);
        let trace = value("tr B^2").unwrap_or(f64::INFINITY);
        worst_spectrum = worst_spectrum.max(spectrum);
        worst_trace = worst_trace.max(trace);
        if !(spectrum <= tol::SPECTRUM && trace <= tol::TRACE_B2) {
            spectral_failures.push(format!("{family} n={n}: spectrum {spectrum:e}, tr B^2 {trace:e}"));
        }
        match weitzenbock_basis(&data.projections, &data.decomposition, &mut rng) {
            Ok(basis) => {
                worst_universal = worst_universal.max(basis.universal_residual);
                let expected = data.decomposition.len() / 2;
                if basis.dim() != expected || basis.universal_residual > tol::UNIVERSAL {
                    weitzenbock_failures.push(format!(
                        "{family} n={n}: dim {} (expected {expected}), universal residual {:e}",
                        basis.dim(),
                        basis.universal_residual
                    ));
                }
            }
            Err(e) => weitzenbock_failures.push(format!("{family} n={n}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let third = outcome(
        spectral_failures.is_empty() && within(elapsed, budget::SPECTRAL),
        format!(
            "{} representations, max eigenvalue error {worst_spectrum:.1e}, max tr B^2 error {worst_trace:.1e}, {:.1} s (budget {} s){}",
            cases.len(),
            elapsed.as_secs_f64(),
            budget::SPECTRAL.as_secs(),
            spectral_failures.first().map(|e| format!(", first failure: {e}")).unwrap_or_default()
        ),
    );
    let fourth = outcome(
        weitzenbock_failures.is_empty(),
        format!(
            "{} representations, dimension floor(N/2) everywhere: {}, max universal residual {worst_universal:.1e}{}",
            cases.len(),
            weitzenbock_failures.is_empty(),
            weitzenbock_failures.first().map(|e| format!(", first failure: {e}")).unwrap_or_default()
        ),
    );
    (third, fourth)
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    for n in 3..=10usize {
        let rho = DominantWeight::spin(n).expect("spin weight");
        let d = decompose(&rho);
        let a = CoefficientVector::from_ints(&[-1, n as i64 - 1]);
        let half = usize::from(n % 2 == 0);
        let expected: Rational = frac(1 << (n / 2 - half), 4);
        match mass_coefficient(&d, &a) {
            Ok(mu) if mu == expected => {}
            Ok(mu) => failures.push(format!("n={n}: {} vs {}", rational::display(&mu), rational::display(&expected))),
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("mu(-1, n-1) = 2^(floor(n/2)-delta)/4 exactly for n = 3..10; mismatches: {failures:?}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let chart = MetricChart::schwarzschild(3, 1.0).expect("chart");
    match mass_quadrature(&chart, &[50.0, 100.0, 200.0], 32) {
        Ok(report) => {
            let elapsed = start.elapsed();
            let rel = (report.limit / (16.0 * PI) - 1.0).abs();
            outcome(
                rel <= tol::ADM && within(elapsed, budget::ADM),
                format!(
                    "limit {:.9} vs 16*pi = {:.9}, relative error {rel:.2e} (tolerance {:.0e}), fitted s = {}, {:.3} s",
                    report.limit,
                    16.0 * PI,
                    tol::ADM,
                    report.model_exponent.map(|s| format!("{s:.4}")).unwrap_or_default(),
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_7() -> Outcome {
    let chart = MetricChart::schwarzschild(3, 1.0).expect("chart");
    let radii = [50.0, 100.0, 200.0];
    let mut parts = Vec::new();
    let mut passed = true;
    for (family, coeffs, expected) in [
        (Family::Exterior(1), None, -1.0),
        (Family::Spin, Some(CoefficientVector::from_ints(&[-1, 2])), 0.5),
    ] {
        let start = Instant::now();
        let result = MatrixRep::build(3, family).and_then(analyze).and_then(|data| {
            let a = coeffs.clone().unwrap_or_else(|| universal_vector(&data.decomposition));
            theorem_check(&chart, &data.rep, &data.projections, &data.decomposition, &a, &radii, 32, FrameMode::Euclidean)
        });
        let elapsed = start.elapsed();
        match result {
            Ok(r) => {
                let rel = (r.ratio - expected).abs() / expected.abs();
                let ok = rel <= tol::THEOREM && within(elapsed, budget::THEOREM);
                passed &= ok;
                parts.push(format!(
                    "{family}: ratio {:.6} vs {expected}, relative error {rel:.1e}, {:.2} s",
                    r.ratio,
                    elapsed.as_secs_f64()
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("{family}: {e}"));
            }
        }
    }
    outcome(passed, format!("{} (tolerance {:.0e})", parts.join("; "), tol::THEOREM))
}

fn criterion_8() -> Outcome {
    let mut rng = seeded(20_260_008);
    let mut min_exact_gap = f64::INFINITY;
    let mut all_asymptotic_exact = true;
    let mut failures = Vec::new();
    let mut worst_asym_rel: f64 = 0.0;
    for i in 0..20 {
        let n = 3 + i % 4;
        let tau = rng.random_range(1.0..1.5);
        let degree = rng.random_range(1..=3);
        let chart = match MetricChart::random_perturbation(&mut rng, n, tau, degree) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("chart {i}: {e}"));
                continue;
            }
        };
        let radii: Vec<f64> = (0..5).map(|k| chart.r_min() * 4.0 * 2f64.powi(k)).collect();
        // 20 directions on 5 radii: 100 sample points
        match pi_identity_check(&chart, &radii, 20, &mut rng) {
            Ok(r) => {
                all_asymptotic_exact &= r.asymptotic_exact;
                for (e, l) in r.asymptotic_error.iter().zip(&r.leading) {
                    worst_asym_rel = worst_asym_rel.max(e / l);
                }
                let gap = r.exact_gap.unwrap_or(f64::NAN);
                min_exact_gap = min_exact_gap.min(gap);
                let asym_ok = r.asymptotic_exact
                    || r.asymptotic_exponent.is_some_and(|s| s - r.leading_exponent >= tol::PI_GAP);
                if !asym_ok || gap.is_nan() || gap < tol::PI_GAP {
                    failures.push(format!("chart {i} (n={n}, tau={tau:.2}): exact gap {gap:.3}"));
                }
            }
            Err(e) => failures.push(format!("chart {i}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "20 charts x 100 points: asymptotic form exact to rounding: {all_asymptotic_exact} (max relative error {worst_asym_rel:.1e}); \
             Levi-Civita form min exponent gap {min_exact_gap:.3} (required {}){}",
            tol::PI_GAP,
            failures.first().map(|e| format!(", first failure: {e}")).unwrap_or_default()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = seeded(20_260_009);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..10 {
        let n = 3 + i % 3;
        let degree = rng.random_range(1..=4);
        let s = rng.random_range(0.5..3.0);
        let beta = TwoForm::random(&mut rng, n, degree, s);
        let radius = rng.random_range(1.5..20.0);
        match beta.flux(radius, 8) {
            Ok(f) => {
                worst = worst.max(f.relative());
                if f.relative().is_nan() || f.relative() > tol::GAUGE {
                    failures.push(format!("beta {i}: {:e}", f.relative()));
                }
            }
            Err(e) => failures.push(format!("beta {i}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("10 random 2-forms, max relative flux {worst:.1e} (tolerance {:.0e}){}", tol::GAUGE,
            failures.first().map(|e| format!(", first failure: {e}")).unwrap_or_default()),
    )
}

fn main() {
    let (c1, c2) = criterion_1_and_2();
    let (c3, c4) = criterion_3_and_4();
    let results = [
        ("1 exact decomposition suite", c1),
        ("2 conformal weight cross-check", c2),
        ("3 spectral agreement", c3),
        ("4 Weitzenbock space", c4),
        ("5 Witten normalization", criterion_5()),
        ("6 ADM quadrature", criterion_6()),
        ("7 boundary term equals mu(a) times mass", criterion_7()),
        ("8 pi(omega) identity", criterion_8()),
        ("9 quadrature gauge sanity", criterion_9()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
