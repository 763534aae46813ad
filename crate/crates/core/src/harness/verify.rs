//! The verification suite: structural checks on the code plus executable
//! versions of the expansion, distance, critical-generator, robustness and
//! decoding properties, each reported as pass, fail, skipped or not
//! applicable.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{for_each_subset, trial_seed, GuaranteeRadius, HarnessError, RadiusSource, SCHEMA_VERSION};
use crate::code::{CssCode, ErrorType};
use crate::decoder::SmallSetFlipDecoder;
use crate::gf2::{Gf2Vector, RowSpace};
use crate::graph::{binomial, subsets_up_to, BipartiteGraph, Certification, ExpansionProfile, GraphError, Side};
use crate::oracle::{
    classical_flip_decode, classical_min_distance, find_critical_generator, lemma8_flip, quantum_min_distance,
    syndrome_partition, transpose_min_distance, CosetOracle, ExpansionParams, OracleError, SearchLimits,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    /// Number of individual cases examined.
    pub cases: u64,
    /// A counterexample on failure, or supporting data otherwise.
    pub data: Option<Value>,
}

impl CheckReport {
    fn new(name: &str, status: CheckStatus, detail: impl Into<String>, cases: u64, data: Option<Value>) -> Self {
        Self {
            name: name.into(),
            status,
            detail: detail.into(),
            cases,
            data,
        }
    }

    fn skipped(name: &str, why: impl std::fmt::Display) -> Self {
        Self::new(name, CheckStatus::Skipped, format!("infeasible: {why}"), 0, None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub kind: String,
    pub graph: Option<Value>,
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub not_applicable: usize,
}

impl VerifyReport {
    fn from_checks(graph: Option<Value>, checks: Vec<CheckReport>) -> Self {
        let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
        Self {
            schema: SCHEMA_VERSION,
            kind: "verify".into(),
            graph,
            passed: count(CheckStatus::Pass),
            failed: count(CheckStatus::Fail),
            skipped: count(CheckStatus::Skipped),
            not_applicable: count(CheckStatus::NotApplicable),
            checks,
        }
    }

    /// A report for a graph that could not even be loaded.
    pub fn invalid_graph(error: &GraphError) -> Self {
        Self::from_checks(
            None,
            vec![CheckReport::new(
                "graph-invariants",
                CheckStatus::Fail,
                error.to_string(),
                1,
                Some(json!({ "error": format!("{error:?}") })),
            )],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    /// Largest subset size for exhaustive expansion profiles.
    pub max_subset_size: usize,
    /// Budget for expansion profiles and subset enumerations.
    pub ceiling: u128,
    /// Budget for distance and coset searches.
    pub oracle_ceiling: u128,
    /// Random errors per sampled property.
    pub samples: usize,
    /// Largest number of errors enumerated per exhaustive weight.
    pub max_exhaustive: u128,
    pub seed: u64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            max_subset_size: 4,
            ceiling: 50_000_000,
            oracle_ceiling: 50_000_000,
            samples: 200,
            max_exhaustive: 200_000,
            seed: 0,
        }
    }
}

struct Profiles {
    a: ExpansionProfile,
    b: ExpansionProfile,
}

impl Profiles {
    fn cert(&self, side: Side, bound: f64) -> Certification {
        match side {
            Side::Left => self.a.certify_below(bound),
            Side::Right => self.b.certify_below(bound),
        }
    }

    fn params(&self, bound: f64) -> (ExpansionParams, usize) {
        let (ca, cb) = (self.a.certify_below(bound), self.b.certify_below(bound));
        (
            ExpansionParams {
                gamma_a: ca.gamma,
                delta_a: ca.delta,
                gamma_b: cb.gamma,
                delta_b: cb.delta,
            },
            ca.size.min(cb.size),
        )
    }
}

/// Errors used by the sampled properties: every error of weight 1 and 2
/// (when within `bound` and the enumeration budget) plus random errors of
/// weight up to `bound`.
fn error_family(n: usize, bound: usize, settings: &VerifySettings, salt: u64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for w in 1..=bound.min(2) {
        if binomial(n, w) <= settings.max_exhaustive {
            for_each_subset(n, w, &mut |s| out.push(s.to_vec()));
        }
    }
    if bound >= 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(settings.seed, salt));
        for _ in 0..settings.samples {
            let w = rng.gen_range(1..=bound.min(n));
            let mut s = sample(&mut rng, n, w).into_vec();
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

fn vector(n: usize, support: &[usize]) -> Gf2Vector {
    Gf2Vector::from_support(n, support).expect("support in range")
}

fn is_infeasible(e: &OracleError) -> bool {
    matches!(e, OracleError::Infeasible { .. })
}

/// Runs the full suite on the code of `graph`.
pub fn verify_suite(graph: &BipartiteGraph, settings: &VerifySettings) -> Result<VerifyReport, HarnessError> {
    let code = CssCode::hypergraph_product(graph.clone());
    let mut checks = vec![
        CheckReport::new(
            "graph-invariants",
            CheckStatus::Pass,
            format!(
                "({}, {})-biregular with n_a = {}, n_b = {}",
                graph.delta_a(),
                graph.delta_b(),
                graph.n_a(),
                graph.n_b()
            ),
            1,
            None,
        ),
        check_orthogonality(&code),
        check_parameters(&code),
    ];

    let profiles = match (
        graph.expansion_profile(Side::Left, settings.max_subset_size, settings.ceiling),
        graph.expansion_profile(Side::Right, settings.max_subset_size, settings.ceiling),
    ) {
        (Ok(a), Ok(b)) => Some(Profiles { a, b }),
        (Err(e), _) | (_, Err(e)) => {
            checks.push(CheckReport::skipped("expansion-profile", e));
            None
        }
    };

    if let Some(p) = &profiles {
        let certs: Vec<Value> = [0.5, 0.25, 1.0 / 6.0]
            .iter()
            .flat_map(|&bound| {
                [Side::Left, Side::Right].map(|side| {
                    let c = p.cert(side, bound);
                    json!({ "side": side, "delta_bound": bound, "size": c.size, "gamma": c.gamma, "delta": c.delta })
                })
            })
            .collect();
        checks.push(CheckReport::new(
            "expansion-profile",
            CheckStatus::Pass,
            format!("exhaustive minimum neighborhoods up to subset size {}", settings.max_subset_size),
            p.a.subsets_checked + p.b.subsets_checked,
            Some(json!({ "min_neighbors_a": p.a.min_neighbors, "min_neighbors_b": p.b.min_neighbors, "certifications": certs })),
        ));
        checks.push(check_unique_neighbors(graph, p, settings));
        checks.push(check_classical_distance(graph, p, settings));
        checks.push(check_quantum_distance(&code, p, settings));
        checks.extend(check_critical_suite(&code, p, settings));
        checks.extend(check_decoding(&code, p, settings)?);
        checks.push(check_classical_decoder(graph, p, settings));
    }

    let graph_data = json!({
        "n_a": graph.n_a(), "n_b": graph.n_b(), "delta_a": graph.delta_a(), "delta_b": graph.delta_b(),
        "n": code.n(), "k": code.code_dimension(),
    });
    Ok(VerifyReport::from_checks(Some(graph_data), checks))
}

fn check_orthogonality(code: &CssCode) -> CheckReport {
    let name = "css-orthogonality";
    let product = code.h_x().mat_mul(&code.h_z().transpose()).expect("shapes agree");
    match (0..product.rows()).find(|&r| !product.row(r).is_empty()) {
        None => CheckReport::new(name, CheckStatus::Pass, "h_x h_z^T = 0", product.rows() as u64, None),
        Some(r) => CheckReport::new(
            name,
            CheckStatus::Fail,
            "nonzero entry in h_x h_z^T",
            product.rows() as u64,
            Some(json!({ "row": r, "cols": product.row(r) })),
        ),
    }
}

fn check_parameters(code: &CssCode) -> CheckReport {
    let p = code.parameters();
    let n_ok = p.n == p.n_a * p.n_a + p.n_b * p.n_b;
    let bound = code.dimension_lower_bound();
    let status = if n_ok && p.k >= bound {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckReport::new(
        "code-parameters",
        status,
        format!("n = {}, k = {} (lower bound {bound})", p.n, p.k),
        1,
        Some(json!(p)),
    )
}

fn check_unique_neighbors(graph: &BipartiteGraph, p: &Profiles, settings: &VerifySettings) -> CheckReport {
    let name = "unique-neighbors";
    let mut cases = 0u64;
    for side in [Side::Left, Side::Right] {
        let c = p.cert(side, 0.5);
        let n = graph.side_len(side);
        if subsets_up_to(n, c.size) > settings.ceiling {
            return CheckReport::skipped(name, format!("{} subsets", subsets_up_to(n, c.size)));
        }
        let degree = graph.degree(side) as f64;
        let mut witness = None;
        for size in 1..=c.size {
            for_each_subset(n, size, &mut |s| {
                if witness.is_some() {
                    return;
                }
                cases += 1;
                let unique = graph.unique_and_multiple_neighbors(side, s).expect("valid subset").unique.len();
                if (unique as f64) < (1.0 - 2.0 * c.delta) * degree * size as f64 - 1e-9 {
                    witness = Some(json!({ "side": side, "subset": s, "unique": unique, "delta": c.delta }));
                }
            });
        }
        if let Some(w) = witness {
            return CheckReport::new(name, CheckStatus::Fail, "too few unique neighbors", cases, Some(w));
        }
    }
    CheckReport::new(
        name,
        CheckStatus::Pass,
        "|Γ_u(S)| >= (1 - 2δ)Δ|S| for every subset within the certified size",
        cases,
        None,
    )
}

fn check_classical_distance(graph: &BipartiteGraph, p: &Profiles, settings: &VerifySettings) -> CheckReport {
    let name = "classical-distance";
    let h = graph.incidence_matrix();
    let (ca, cb) = (p.cert(Side::Left, 0.5), p.cert(Side::Right, 0.5));
    let limits = |size: usize| SearchLimits {
        weight_cap: size,
        ceiling: settings.oracle_ceiling,
    };
    let d = match classical_min_distance(&h, limits(ca.size)) {
        Ok(d) => d,
        Err(e) => return CheckReport::skipped(name, e),
    };
    let dt = match transpose_min_distance(&h, limits(cb.size)) {
        Ok(d) => d,
        Err(e) => return CheckReport::skipped(name, e),
    };
    let ok = d.distance.is_at_least(ca.size) && dt.distance.is_at_least(cb.size);
    CheckReport::new(
        name,
        if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        format!("d = {} (need >= {}), d^T = {} (need >= {})", d.distance, ca.size, dt.distance, cb.size),
        2,
        Some(json!({ "d_witness": d.witness, "dt_witness": dt.witness })),
    )
}

fn check_quantum_distance(code: &CssCode, p: &Profiles, settings: &VerifySettings) -> CheckReport {
    let name = "quantum-distance";
    let (_, size) = p.params(0.5);
    if code.code_dimension() == 0 {
        return CheckReport::new(name, CheckStatus::NotApplicable, "k = 0", 0, None);
    }
    let limits = SearchLimits {
        weight_cap: size,
        ceiling: settings.oracle_ceiling,
    };
    match quantum_min_distance(code, limits) {
        Err(e) => CheckReport::skipped(name, e),
        Ok(r) => {
            let ok = r.distance.is_at_least(size);
            CheckReport::new(
                name,
                if ok { CheckStatus::Pass } else { CheckStatus::Fail },
                format!("quantum distance {} (need >= {size})", r.distance),
                1,
                Some(json!({ "witness": r.witness, "error_type": r.error_type })),
            )
        }
    }
}

fn check_critical_suite(code: &CssCode, p: &Profiles, settings: &VerifySettings) -> Vec<CheckReport> {
    let (params, bound) = p.params(1.0 / 6.0);
    let n = code.n();
    let family = error_family(n, bound, settings, 7);
    let mut critical = (0u64, None::<Value>);
    let mut flips = (0u64, None::<Value>, 0u64);
    let mut robust = (0u64, None::<Value>, 0u64);
    for ty in ErrorType::BOTH {
        let coset = CosetOracle::new(code, ty).with_ceiling(settings.oracle_ceiling);
        for support in &family {
            let e = vector(n, support);
            critical.0 += 1;
            let found = find_critical_generator(code, ty, &e, &params).expect("nonempty error");
            let Some(d) = found else {
                critical.1.get_or_insert(json!({ "error_type": ty, "support": support, "reason": "none found" }));
                continue;
            };
            if let Err(err) = syndrome_partition(code, &e, &d) {
                critical.1.get_or_insert(json!({ "error_type": ty, "support": support, "reason": err.to_string() }));
                continue;
            }
            let rep = match coset.minimum_representative(&e) {
                Ok(r) => r,
                Err(err) if is_infeasible(&err) => {
                    flips.2 += 1;
                    robust.2 += 1;
                    continue;
                }
                Err(err) => panic!("coset oracle failed: {err}"),
            };
            let w_r = rep.weight();
            robust.0 += 1;
            let s_w = code.syndrome(ty, &e).expect("length n").weight();
            if w_r < bound && 3 * s_w < w_r {
                robust.1.get_or_insert(json!({ "error_type": ty, "support": support, "syndrome_weight": s_w, "reduced_weight": w_r }));
            }
            if w_r == e.weight() {
                flips.0 += 1;
                match lemma8_flip(code, &e, &d) {
                    Ok(f) => {
                        let mut after = e.clone();
                        for &q in &f.support {
                            after.flip(q);
                        }
                        if let Ok(w_after) = coset.reduced_weight(&after) {
                            if w_after > w_r {
                                flips.1.get_or_insert(json!({ "error_type": ty, "support": support, "reason": "reduced weight grew" }));
                            }
                        }
                    }
                    Err(err) => {
                        flips.1.get_or_insert(json!({ "error_type": ty, "support": support, "reason": err.to_string() }));
                    }
                }
            }
        }
    }
    let verdict = |w: &Option<Value>| if w.is_some() { CheckStatus::Fail } else { CheckStatus::Pass };
    let scope = format!("errors of weight <= {bound} (delta below 1/6), {} supports per type", family.len());
    vec![
        CheckReport::new("critical-generator", verdict(&critical.1), scope.clone(), critical.0, critical.1),
        CheckReport::new(
            "critical-flip",
            verdict(&flips.1),
            format!("{scope}; minimum-weight representatives only; {} coset searches infeasible", flips.2),
            flips.0,
            flips.1,
        ),
        CheckReport::new(
            "syndrome-robustness",
            verdict(&robust.1),
            format!("{scope}; {} coset searches infeasible", robust.2),
            robust.0,
            robust.1,
        ),
    ]
}

fn check_decoding(code: &CssCode, p: &Profiles, settings: &VerifySettings) -> Result<Vec<CheckReport>, HarnessError> {
    let (ca, cb) = (p.cert(Side::Left, 1.0 / 6.0), p.cert(Side::Right, 1.0 / 6.0));
    let radius = GuaranteeRadius::from_parts(
        code.graph(),
        ca.size as f64,
        cb.size as f64,
        ca.delta,
        cb.delta,
        RadiusSource::Certified,
    );
    let n = code.n();
    let mut trials = 0u64;
    let (mut guaranteed, mut beyond_ok, mut beyond) = (0u64, 0u64, 0u64);
    let mut failure = None;
    let mut accounting = None;
    for ty in ErrorType::BOTH {
        let mut decoder = SmallSetFlipDecoder::new(code, ty)?;
        let rowspace = RowSpace::new(code.generators(ty));
        for w in 1..=2usize {
            let mut supports = Vec::new();
            if binomial(n, w) <= settings.max_exhaustive {
                for_each_subset(n, w, &mut |s| supports.push(s.to_vec()));
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(settings.seed, 100 + w as u64));
                for _ in 0..settings.samples {
                    let mut s = sample(&mut rng, n, w).into_vec();
                    s.sort_unstable();
                    supports.push(s);
                }
            }
            for s in supports {
                trials += 1;
                let e = vector(n, &s);
                let syn = code.syndrome(ty, &e)?;
                let r = decoder.decode(&syn)?;
                let mut diff = e.clone();
                diff ^= &r.correction;
                let correct = r.success && rowspace.contains(&diff).expect("length n");
                if radius.covers(w) {
                    guaranteed += 1;
                    if !correct {
                        failure.get_or_insert(json!({ "error_type": ty, "support": s }));
                    }
                    if r.success && (r.flipped_total > 3 * syn.weight() || r.iterations > syn.weight()) {
                        accounting.get_or_insert(json!({ "error_type": ty, "support": s, "flipped": r.flipped_total, "syndrome_weight": syn.weight() }));
                    }
                } else {
                    beyond += 1;
                    beyond_ok += u64::from(correct);
                }
            }
        }
    }
    let detail = format!(
        "w0 = {:.4}; {guaranteed} guaranteed trials; {beyond_ok}/{beyond} beyond-guarantee weight-1/2 trials decoded correctly",
        radius.w0
    );
    let status = |fail: &Option<Value>| {
        if guaranteed == 0 {
            CheckStatus::NotApplicable
        } else if fail.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        }
    };
    Ok(vec![
        CheckReport::new("decoding-guarantee", status(&failure), detail.clone(), trials, failure.clone()),
        CheckReport::new("flip-accounting", status(&accounting), detail, guaranteed, accounting),
    ])
}

fn check_classical_decoder(graph: &BipartiteGraph, p: &Profiles, settings: &VerifySettings) -> CheckReport {
    let name = "classical-flip-decoder";
    let c = p.cert(Side::Left, 0.25);
    let max_w = c.size / 2;
    if max_w == 0 {
        return CheckReport::new(
            name,
            CheckStatus::NotApplicable,
            format!("certified size {} with delta below 1/4 gives no correctable weight", c.size),
            0,
            None,
        );
    }
    let n = graph.n_a();
    if subsets_up_to(n, max_w) > settings.ceiling {
        return CheckReport::skipped(name, format!("{} errors", subsets_up_to(n, max_w)));
    }
    let mut cases = 0;
    let mut witness = None;
    for w in 1..=max_w {
        for_each_subset(n, w, &mut |s| {
            cases += 1;
            let mut syn = Gf2Vector::zeros(graph.n_b());
            for &a in s {
                for &b in graph.a_neighbors(a) {
                    syn.flip(b);
                }
            }
            let r = classical_flip_decode(graph, &syn).expect("length n_b");
            if !(r.success && r.correction == s) && witness.is_none() {
                witness = Some(json!({ "support": s, "correction": r.correction }));
            }
        });
    }
    CheckReport::new(
        name,
        if witness.is_some() { CheckStatus::Fail } else { CheckStatus::Pass },
        format!("all errors of weight <= {max_w} (certified size {}, delta {:.4})", c.size, c.delta),
        cases,
        witness,
    )
}
