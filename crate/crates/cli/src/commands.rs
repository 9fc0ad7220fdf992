//! Execution of the subcommands.

use masscalc::geometry::{
    boundary_report, mass_quadrature, theorem_check, BoundaryReport, FrameMode, MassReport, MetricChart,
    TheoremReport,
};
use masscalc::rational::{self, RationalJson};
use masscalc::sampling::{seeded, SeededRng};
use masscalc::spectral::{analyze, cross_check, CrossCheck, Family, MatrixRep, SpectralData, SpectralDump};
use masscalc::weights::{casimir, decompose, weyl_dimension, Decomposition, DominantWeight};
use masscalc::weitzenbock::{
    classify, mass_coefficient, universal_vector, weitzenbock_basis, Classification, CoefficientVector,
    WeitzenbockBasis, SPAN_TOL,
};
use masscalc::{Error, Rational};
use serde::Serialize;

use crate::args::{BoundaryArgs, CoeffArgs, Command, FrameArg, MassArgs, MetricArgs, RepArgs};
use crate::report::{num, opt, Rendered, Table};

/// Largest symbol residual tolerated for a reported Weitzenböck basis.
const BASIS_RESIDUAL_TOL: f64 = 1e-8;

/// What a subcommand produced.
pub struct Outcome {
    pub rendered: Rendered,
    /// A verified identity failed: exit code 2.
    pub failed: bool,
    pub spectral: Option<SpectralDump>,
}

/// Runs one subcommand. `wants_dump` asks for the spectral data even when
/// the subcommand itself does not need a matrix representation.
pub fn execute(command: &Command, seed: u64, wants_dump: bool) -> Result<Outcome, Error> {
    let mut rng = seeded(seed);
    match command {
        Command::Decompose(a) => decompose_cmd(a, wants_dump),
        Command::Casimir(a) => casimir_cmd(a, wants_dump),
        Command::Weitzenbock(a) => weitzenbock_cmd(a, &mut rng),
        Command::Mu(a) => mu_cmd(a, &mut rng, wants_dump),
        Command::Classify(a) => classify_cmd(a, &mut rng, wants_dump),
        Command::VerifyRep(a) => verify_cmd(a),
        Command::Mass(a) => mass_cmd(a, &mut rng, wants_dump),
        Command::Boundary(a) => boundary_cmd(a, &mut rng, false),
        Command::TheoremCheck(a) => boundary_cmd(a, &mut rng, true),
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::Argument(msg.into()))
}

fn parse_family(name: &str, p: Option<usize>, k: Option<usize>) -> Result<Family, Error> {
    match name.to_ascii_lowercase().replace('-', "_").as_str() {
        "exterior" | "forms" => match p {
            Some(p) => Ok(Family::Exterior(p)),
            None => usage("family exterior needs --p"),
        },
        "spin" | "spinor" => Ok(Family::Spin),
        "symmetric_traceless" | "symmetric" | "sym" => match k {
            Some(k) => Ok(Family::SymmetricTraceless(k)),
            None => usage("family symmetric_traceless needs --k"),
        },
        other => Err(Error::Capability(format!(
            "family `{other}` has no matrix construction; supported: exterior, spin, symmetric_traceless"
        ))),
    }
}

fn resolve_weight(a: &RepArgs) -> Result<DominantWeight, Error> {
    let from_family = a.family.as_deref().map(|f| parse_family(f, a.p, a.k)?.weight(a.n)).transpose()?;
    match (&a.weight, from_family) {
        (Some(text), family_weight) => {
            let rho = DominantWeight::parse(a.n, text)?;
            if let Some(fw) = family_weight {
                if fw != rho {
                    return usage(format!("--weight {rho} does not match the family weight {fw}"));
                }
            }
            Ok(rho)
        }
        (None, Some(fw)) => Ok(fw),
        (None, None) => usage("give either --weight or --family"),
    }
}

fn spectral_data(rho: &DominantWeight) -> Result<SpectralData, Error> {
    analyze(MatrixRep::for_weight(rho)?)
}

fn dump_of(data: &SpectralData) -> SpectralDump {
    SpectralDump::new(&data.rep, data.b_eigenvalues.clone())
}

fn optional_dump(rho: &DominantWeight, wanted: bool) -> Result<Option<SpectralDump>, Error> {
    Ok(if wanted { Some(dump_of(&spectral_data(rho)?)) } else { None })
}

fn rat(q: &Rational) -> String {
    rational::display(q)
}

fn coeff_text(a: &CoefficientVector) -> String {
    a.coeffs().iter().map(rat).collect::<Vec<_>>().join(",")
}

fn summand_table(d: &Decomposition) -> Table {
    let mut t = Table::new("Summands", &["index", "weight", "w", "dim", "origin"]);
    for (j, s) in d.summands.iter().enumerate() {
        t.row(vec![
            (j + 1).to_string(),
            s.weight.to_string(),
            rat(&s.conformal_weight),
            s.dim.to_string(),
            s.origin.to_string(),
        ]);
    }
    t
}

#[derive(Serialize)]
struct DecomposeOut<'a> {
    n: usize,
    rho: &'a DominantWeight,
    dim_v: String,
    casimir: RationalJson,
    summands: &'a [masscalc::weights::Summand],
    invariants_hold: bool,
    invariant_error: Option<String>,
}

fn decompose_cmd(a: &RepArgs, wants_dump: bool) -> Result<Outcome, Error> {
    let rho = resolve_weight(a)?;
    let d = decompose(&rho);
    let check = d.check_invariants();
    let out = DecomposeOut {
        n: d.n,
        rho: &rho,
        dim_v: d.dim_v().to_string(),
        casimir: RationalJson(casimir(&rho)),
        summands: &d.summands,
        invariants_hold: check.is_ok(),
        invariant_error: check.as_ref().err().map(|e| e.to_string()),
    };
    Ok(Outcome {
        rendered: Rendered::new(&out, vec![summand_table(&d)]),
        failed: check.is_err(),
        spectral: optional_dump(&rho, wants_dump)?,
    })
}

#[derive(Serialize)]
struct CasimirOut<'a> {
    n: usize,
    rho: &'a DominantWeight,
    casimir: RationalJson,
    casimir_decimal: f64,
    dim_v: String,
}

fn casimir_cmd(a: &RepArgs, wants_dump: bool) -> Result<Outcome, Error> {
    let rho = resolve_weight(a)?;
    let c = casimir(&rho);
    let out = CasimirOut {
        n: a.n,
        rho: &rho,
        casimir_decimal: rational::to_f64(&c),
        casimir: RationalJson(c.clone()),
        dim_v: weyl_dimension(&rho).to_string(),
    };
    let mut t = Table::new("Casimir", &["n", "rho", "casimir", "dim_v"]);
    t.row(vec![a.n.to_string(), rho.to_string(), rat(&c), out.dim_v.clone()]);
    Ok(Outcome { rendered: Rendered::new(&out, vec![t]), failed: false, spectral: optional_dump(&rho, wants_dump)? })
}

#[derive(Serialize)]
struct WeitzenbockOut<'a> {
    #[serde(flatten)]
    basis: &'a WeitzenbockBasis,
    summands: &'a [masscalc::weights::Summand],
    universal: CoefficientVector,
    passed: bool,
}

fn weitzenbock_failed(b: &WeitzenbockBasis) -> bool {
    b.anomaly.is_some() || b.universal_residual > SPAN_TOL || b.residual > BASIS_RESIDUAL_TOL
}

fn weitzenbock_cmd(a: &RepArgs, rng: &mut SeededRng) -> Result<Outcome, Error> {
    let rho = resolve_weight(a)?;
    let data = spectral_data(&rho)?;
    let basis = weitzenbock_basis(&data.projections, &data.decomposition, rng)?;
    let failed = weitzenbock_failed(&basis);
    let out = WeitzenbockOut {
        basis: &basis,
        summands: &data.decomposition.summands,
        universal: universal_vector(&data.decomposition),
        passed: !failed,
    };
    let mut t = Table::new("Weitzenböck basis", &["index", "coefficients"]);
    match &basis.rational_basis {
        Some(rb) => rb.iter().enumerate().for_each(|(i, v)| t.row(vec![(i + 1).to_string(), coeff_text(v)])),
        None => basis.basis.iter().enumerate().for_each(|(i, v)| {
            t.row(vec![(i + 1).to_string(), v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")])
        }),
    }
    let mut s = Table::new("Summary", &["dim", "expected_dim", "residual", "universal_residual", "anomaly"]);
    s.row(vec![
        basis.dim().to_string(),
        basis.expected_dim.to_string(),
        num(basis.residual),
        num(basis.universal_residual),
        basis.anomaly.clone().unwrap_or_default(),
    ]);
    Ok(Outcome { rendered: Rendered::new(&out, vec![summand_table(&data.decomposition), t, s]), failed, spectral: Some(dump_of(&data)) })
}

/// How the coefficient vectors were chosen.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum Selection {
    Explicit,
    Universal,
    Basis,
}

struct Coefficients {
    selection: Selection,
    vectors: Vec<CoefficientVector>,
    basis: Option<WeitzenbockBasis>,
    data: Option<SpectralData>,
}

/// How much of the spectral machinery a subcommand needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Analyse {
    /// Nothing, unless the selection is `basis`.
    No,
    /// The representation and the Weitzenböck basis when constructible.
    IfPossible,
    /// The representation, failing if it is not constructible.
    Required,
}

/// Resolves `--coeffs` into coefficient vectors.
fn resolve_coeffs(text: &str, d: &Decomposition, rng: &mut SeededRng, analyse: Analyse) -> Result<Coefficients, Error> {
    let selection = match text.trim() {
        "universal" => Selection::Universal,
        "basis" => Selection::Basis,
        _ => Selection::Explicit,
    };
    let want_basis = matches!(selection, Selection::Basis) || analyse == Analyse::IfPossible;
    let data = match (analyse, selection) {
        (Analyse::Required, _) | (_, Selection::Basis) => Some(spectral_data(&d.rho)?),
        (Analyse::IfPossible, _) => spectral_data(&d.rho).ok(),
        (Analyse::No, _) => None,
    };
    let basis = match &data {
        Some(data) if want_basis => Some(weitzenbock_basis(&data.projections, &data.decomposition, rng)?),
        _ => None,
    };
    let vectors = match selection {
        Selection::Universal => vec![universal_vector(d)],
        Selection::Basis => match basis.as_ref().and_then(|b| b.rational_basis.clone()) {
            Some(v) if !v.is_empty() => v,
            Some(_) => return usage("the Weitzenböck space is zero"),
            None => return usage("the Weitzenböck basis has no rational form; pass explicit coefficients"),
        },
        Selection::Explicit => {
            let v = CoefficientVector::parse(text)?;
            v.check_aligned(d)?;
            vec![v]
        }
    };
    Ok(Coefficients { selection, vectors, basis, data })
}

#[derive(Serialize)]
struct MuEntry {
    coeffs: CoefficientVector,
    mu: RationalJson,
    mu_decimal: f64,
}

#[derive(Serialize)]
struct MuOut<'a> {
    n: usize,
    rho: &'a DominantWeight,
    selection: Selection,
    entries: Vec<MuEntry>,
}

fn mu_cmd(a: &CoeffArgs, rng: &mut SeededRng, wants_dump: bool) -> Result<Outcome, Error> {
    let rho = resolve_weight(&a.rep)?;
    let d = decompose(&rho);
    let c = resolve_coeffs(&a.coeffs, &d, rng, Analyse::No)?;
    let mut t = Table::new("Mass coefficient", &["coeffs", "mu", "mu_decimal"]);
    let mut entries = Vec::new();
    for v in c.vectors {
        let mu = mass_coefficient(&d, &v)?;
        t.row(vec![coeff_text(&v), rat(&mu), num(rational::to_f64(&mu))]);
        entries.push(MuEntry { mu_decimal: rational::to_f64(&mu), mu: RationalJson(mu), coeffs: v });
    }
    let out = MuOut { n: a.rep.n, rho: &rho, selection: c.selection, entries };
    let spectral = match c.data {
        Some(data) if wants_dump => Some(dump_of(&data)),
        _ => optional_dump(&rho, wants_dump)?,
    };
    Ok(Outcome { rendered: Rendered::new(&out, vec![t]), failed: false, spectral })
}

#[derive(Serialize)]
struct ClassifyEntry {
    coeffs: CoefficientVector,
    #[serde(flatten)]
    result: Classification,
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    n: usize,
    rho: &'a DominantWeight,
    summands: &'a [masscalc::weights::Summand],
    selection: Selection,
    basis: Option<Vec<CoefficientVector>>,
    span_check: String,
    entries: Vec<ClassifyEntry>,
    passed: bool,
}

fn classify_cmd(a: &CoeffArgs, rng: &mut SeededRng, wants_dump: bool) -> Result<Outcome, Error> {
    let rho = resolve_weight(&a.rep)?;
    let d = decompose(&rho);
    let c = resolve_coeffs(&a.coeffs, &d, rng, Analyse::IfPossible)?;
    let span_check = match &c.basis {
        Some(_) => "checked".to_string(),
        None => "unavailable: no explicit matrix construction for this representation".to_string(),
    };
    let mut t = Table::new(
        "Classification",
        &["coeffs", "mu", "classification", "p_plus", "p_minus", "in_span", "span_residual"],
    );
    let mut entries = Vec::new();
    for v in c.vectors {
        let result = classify(&d, &v, c.basis.as_ref())?;
        let list = |ix: &[usize]| ix.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
        t.row(vec![
            coeff_text(&v),
            rat(&result.mu),
            serde_json::to_value(result.classification).map(|x| x.as_str().unwrap_or("").to_string()).unwrap_or_default(),
            list(&result.p_plus_indices),
            list(&result.p_minus_indices),
            result.in_span.map(|b| b.to_string()).unwrap_or_default(),
            opt(result.span_residual),
        ]);
        entries.push(ClassifyEntry { coeffs: v, result });
    }
    let failed = entries.iter().any(|e| e.result.in_span == Some(false));
    let out = ClassifyOut {
        n: a.rep.n,
        rho: &rho,
        summands: &d.summands,
        selection: c.selection,
        basis: c.basis.as_ref().and_then(|b| b.rational_basis.clone()),
        span_check,
        entries,
        passed: !failed,
    };
    let spectral = match c.data {
        Some(data) if wants_dump => Some(dump_of(&data)),
        _ => optional_dump(&rho, wants_dump)?,
    };
    Ok(Outcome { rendered: Rendered::new(&out, vec![t]), failed, spectral })
}

fn verify_cmd(a: &RepArgs) -> Result<Outcome, Error> {
    let rho = resolve_weight(a)?;
    let data = spectral_data(&rho)?;
    let report: CrossCheck = cross_check(&data);
    let mut t = Table::new("Checks", &["check", "value", "tolerance", "passed"]);
    for c in &report.checks {
        t.row(vec![c.name.clone(), num(c.value), num(c.tolerance), c.passed.to_string()]);
    }
    Ok(Outcome { failed: !report.passed, rendered: Rendered::new(&report, vec![t]), spectral: Some(dump_of(&data)) })
}

/// Parses comma separated, strictly increasing, positive radii.
pub fn parse_radii(text: &str) -> Result<Vec<f64>, Error> {
    let radii = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Argument(format!("cannot parse radius `{}`", s.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return usage("radii must be positive and finite");
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return usage("radii must be strictly increasing");
    }
    Ok(radii)
}

fn build_chart(n: usize, m: &MetricArgs, rng: &mut SeededRng) -> Result<MetricChart, Error> {
    match m.metric.to_ascii_lowercase().as_str() {
        "flat" => MetricChart::flat(n),
        "schwarzschild" => MetricChart::schwarzschild(n, m.mass),
        "perturbation" => MetricChart::random_perturbation(rng, n, m.tau, m.degree),
        "gauge" => MetricChart::random_gauge(rng, n, m.tau, m.degree),
        other => usage(format!("unknown metric `{other}`; expected flat, schwarzschild, perturbation or gauge")),
    }
}

fn radius_table(title: &str, radii: &[f64], columns: &[(&str, &[f64])]) -> Table {
    let mut headers = vec!["radius"];
    headers.extend(columns.iter().map(|c| c.0));
    let mut t = Table::new(title, &headers);
    for (i, r) in radii.iter().enumerate() {
        let mut row = vec![num(*r)];
        row.extend(columns.iter().map(|c| num(c.1[i])));
        t.row(row);
    }
    t
}

/// One row of the limits table: quantity, limit, error estimate, model exponent and flags.
type LimitRow<'a> = (&'a str, f64, f64, Option<f64>, &'a [String]);

fn limit_table(rows: &[LimitRow<'_>]) -> Table {
    let mut t = Table::new("Limits", &["quantity", "limit", "error_estimate", "model_exponent", "flags"]);
    for (name, limit, err, s, flags) in rows {
        t.row(vec![name.to_string(), num(*limit), num(*err), opt(*s), flags.join("; ")]);
    }
    t
}

fn mass_cmd(a: &MassArgs, rng: &mut SeededRng, wants_dump: bool) -> Result<Outcome, Error> {
    if wants_dump {
        return usage("--dump-spectral needs a representation; `mass` has none");
    }
    let radii = parse_radii(&a.metric.radii)?;
    let chart = build_chart(a.n, &a.metric, rng)?;
    let report: MassReport = mass_quadrature(&chart, &radii, a.metric.order)?;
    let tables = vec![
        radius_table("Mass integrals", &report.radii, &[("value", &report.values)]),
        limit_table(&[("mass", report.limit, report.error_estimate, report.model_exponent, &report.flags)]),
    ];
    Ok(Outcome { rendered: Rendered::new(&report, tables), failed: false, spectral: None })
}

#[derive(Serialize)]
struct BoundaryEntry {
    coeffs: CoefficientVector,
    #[serde(flatten)]
    report: BoundaryReport,
}

#[derive(Serialize)]
struct TheoremEntry {
    coeffs: CoefficientVector,
    #[serde(flatten)]
    report: TheoremReport,
}

#[derive(Serialize)]
struct BoundaryOut<'a, E> {
    n: usize,
    rho: &'a DominantWeight,
    family: Family,
    selection: Selection,
    entries: Vec<E>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
}

fn boundary_cmd(a: &BoundaryArgs, rng: &mut SeededRng, theorem: bool) -> Result<Outcome, Error> {
    let rho = resolve_weight(&a.coeff.rep)?;
    let radii = parse_radii(&a.metric.radii)?;
    let chart = build_chart(a.coeff.rep.n, &a.metric, rng)?;
    let d = decompose(&rho);
    let c = resolve_coeffs(&a.coeff.coeffs, &d, rng, Analyse::Required)?;
    let data = c.data.expect("representation analysed");
    let mode = match a.frame {
        FrameArg::Euclidean => FrameMode::Euclidean,
        FrameArg::Exact => FrameMode::Exact,
    };
    let order = a.metric.order;
    let mut tables = Vec::new();
    let mut failed = false;
    let rendered = if theorem {
        let mut entries = Vec::new();
        let mut limits = Vec::new();
        for v in c.vectors {
            let r = theorem_check(&chart, &data.rep, &data.projections, &d, &v, &radii, order, mode)?;
            tables.push(radius_table(
                &format!("Theorem check for a = ({})", coeff_text(&v)),
                &radii,
                &[("mass", &r.mass.values), ("boundary", &r.boundary.values), ("ratio", &r.ratios)],
            ));
            limits.push((coeff_text(&v), r.ratio, r.mu_value, r.relative_error, r.passed));
            failed |= !r.passed;
            entries.push(TheoremEntry { coeffs: v, report: r });
        }
        let mut t = Table::new("Ratios", &["coeffs", "ratio", "mu", "relative_error", "passed"]);
        for (cf, ratio, mu, err, ok) in limits {
            t.row(vec![cf, num(ratio), num(mu), num(err), ok.to_string()]);
        }
        tables.push(t);
        let out = BoundaryOut {
            n: a.coeff.rep.n,
            rho: &rho,
            family: data.rep.family(),
            selection: c.selection,
            entries,
            passed: Some(!failed),
        };
        Rendered::new(&out, tables)
    } else {
        let mut entries = Vec::new();
        for v in c.vectors {
            let r = boundary_report(&chart, &data.rep, &data.projections, &v, &radii, order, mode)?;
            tables.push(radius_table(&format!("Boundary terms for a = ({})", coeff_text(&v)), &radii, &[("value", &r.values)]));
            tables.push(limit_table(&[("boundary", r.limit, r.error_estimate, r.model_exponent, &r.flags)]));
            entries.push(BoundaryEntry { coeffs: v, report: r });
        }
        let out = BoundaryOut {
            n: a.coeff.rep.n,
            rho: &rho,
            family: data.rep.family(),
            selection: c.selection,
            entries,
            passed: None,
        };
        Rendered::new(&out, tables)
    };
    Ok(Outcome { rendered, failed, spectral: Some(dump_of(&data)) })
}
