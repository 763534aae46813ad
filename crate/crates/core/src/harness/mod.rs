//! Reproducible decoding trials, the verification suite, and scaling
//! benchmarks.
//!
//! Per-trial randomness comes from [`trial_seed`], so a trial's error
//! depends only on the master seed and its ordinal. Records can therefore
//! be produced in any order or on any number of threads and then sorted by
//! id.

mod bench;
mod verify;

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, CssCode, ErrorType};
use crate::decoder::{DecoderError, DecoderOptions, SmallSetFlipDecoder};
use crate::gf2::{Gf2Vector, RowSpace};
use crate::graph::{BipartiteGraph, GraphError, Side, DEFAULT_SUBSET_CEILING};
use crate::oracle::OracleError;

pub use bench::{bench, BenchConfig, BenchReport, BenchRow, WeightScaling};
pub use verify::{verify_suite, CheckReport, CheckStatus, VerifyReport, VerifySettings};

/// Version of every JSON document the harness emits.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest number of supports an exhaustive trial plan may contain.
pub const MAX_EXHAUSTIVE_TRIALS: u128 = 5_000_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Mixes `master` and `ordinal` into a trial seed.
///
/// The ordinal is spread by the 64-bit golden-ratio constant and added to
/// the master seed, then passed through the SplitMix64 finalizer:
/// `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
/// z *= 0x94D049BB133111EB; z ^= z >> 31`, all with wrapping arithmetic.
pub fn trial_seed(master: u64, ordinal: u64) -> u64 {
    mix64(master.wrapping_add(ordinal.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sorted support, built from the same mixer.
pub fn support_hash(support: &[usize]) -> u64 {
    support
        .iter()
        .fold(mix64(support.len() as u64), |h, &q| mix64(h ^ (q as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorModel {
    /// Uniformly random supports of each weight.
    RandomSupport,
    /// Every support of each weight.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSelection {
    X,
    Z,
    Both,
}

impl SideSelection {
    pub fn types(self) -> &'static [ErrorType] {
        match self {
            SideSelection::X => &[ErrorType::X],
            SideSelection::Z => &[ErrorType::Z],
            SideSelection::Both => &ErrorType::BOTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub model: ErrorModel,
    pub min_weight: usize,
    pub max_weight: usize,
    /// Trials per weight and error type for the random model.
    pub trials_per_weight: usize,
    pub master_seed: u64,
    pub side: SideSelection,
    /// Check stabilizer equivalence of every correction.
    pub check_equivalence: bool,
    /// Measure wall time per trial.
    pub timed: bool,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            model: ErrorModel::RandomSupport,
            min_weight: 1,
            max_weight: 4,
            trials_per_weight: 100,
            master_seed: 0,
            side: SideSelection::Both,
            check_equivalence: true,
            timed: true,
        }
    }
}

/// One planned trial: an error of one type with a known support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub id: u64,
    pub error_type: ErrorType,
    pub weight: usize,
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub error_type: ErrorType,
    pub weight: usize,
    pub support_hash: u64,
    /// The decoder cleared the syndrome.
    pub success: bool,
    /// The correction equals the error up to generators. Absent when the
    /// check is disabled or the code has no logical qubits.
    pub correctly_decoded: Option<bool>,
    pub iterations: usize,
    pub flipped_total: usize,
    pub syndrome_weight: usize,
    pub evaluations: usize,
    /// The error weight is below the guaranteed radius.
    pub guaranteed: bool,
    /// `Σ|e_i| ≤ 3|σ(e)|` and `iterations ≤ |σ(e)|`.
    pub accounting_ok: bool,
    pub wall_time_us: u64,
}

/// The guaranteed radius `min(γ_A n_A, γ_B n_B) / (3 (1 + Δ_B))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeRadius {
    pub w0: f64,
    pub gamma_a_n_a: f64,
    pub gamma_b_n_b: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    /// `certified` when the expansion was checked exhaustively, `assumed`
    /// when supplied by the caller.
    pub source: RadiusSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSource {
    Certified,
    Assumed,
}

impl GuaranteeRadius {
    /// Certifies both sides exhaustively for subsets up to `max_subset_size`
    /// with the tightest delta below `1/6`.
    pub fn certify(graph: &BipartiteGraph, max_subset_size: usize, ceiling: u128) -> Result<Self, HarnessError> {
        let ca = graph
            .expansion_profile(Side::Left, max_subset_size, ceiling)?
            .certify_below(1.0 / 6.0);
        let cb = graph
            .expansion_profile(Side::Right, max_subset_size, ceiling)?
            .certify_below(1.0 / 6.0);
        Ok(Self::from_parts(
            graph,
            ca.size as f64,
            cb.size as f64,
            ca.delta,
            cb.delta,
            RadiusSource::Certified,
        ))
    }

    /// Uses caller-supplied expansion parameters.
    pub fn assume(graph: &BipartiteGraph, gamma_a: f64, delta_a: f64, gamma_b: f64, delta_b: f64) -> Self {
        Self::from_parts(
            graph,
            gamma_a * graph.n_a() as f64,
            gamma_b * graph.n_b() as f64,
            delta_a,
            delta_b,
            RadiusSource::Assumed,
        )
    }

    pub(super) fn from_parts(g: &BipartiteGraph, ga: f64, gb: f64, da: f64, db: f64, source: RadiusSource) -> Self {
        Self {
            w0: ga.min(gb) / (3.0 * (1.0 + g.delta_b() as f64)),
            gamma_a_n_a: ga,
            gamma_b_n_b: gb,
            delta_a: da,
            delta_b: db,
            source,
        }
    }

    /// True when errors of weight `w` fall under the guarantee.
    pub fn covers(&self, w: usize) -> bool {
        self.delta_a < 1.0 / 6.0 && self.delta_b < 1.0 / 6.0 && (w as f64) < self.w0
    }
}

/// Expands a configuration into concrete trials, ordered by id.
pub fn plan_trials(code: &CssCode, cfg: &TrialConfig) -> Result<Vec<TrialSpec>, HarnessError> {
    let n = code.n();
    if cfg.min_weight > cfg.max_weight || cfg.max_weight > n {
        return Err(HarnessError::InvalidConfig(format!(
            "weight range {}..={} must lie within 0..={n}",
            cfg.min_weight, cfg.max_weight
        )));
    }
    let mut specs = Vec::new();
    let mut id = 0u64;
    match cfg.model {
        ErrorModel::Exhaustive => {
            let per_type: u128 = (cfg.min_weight..=cfg.max_weight)
                .map(|w| crate::graph::binomial(n, w))
                .sum();
            let total = per_type * cfg.side.types().len() as u128;
            if total > MAX_EXHAUSTIVE_TRIALS {
                return Err(HarnessError::InvalidConfig(format!(
                    "exhaustive plan has {total} trials, above the limit of {MAX_EXHAUSTIVE_TRIALS}"
                )));
            }
            for &ty in cfg.side.types() {
                for w in cfg.min_weight..=cfg.max_weight {
                    for_each_subset(n, w, &mut |support| {
                        specs.push(TrialSpec {
                            id,
                            error_type: ty,
                            weight: w,
                            support: support.to_vec(),
                        });
                        id += 1;
                    });
                }
            }
        }
        ErrorModel::RandomSupport => {
            for &ty in cfg.side.types() {
                for w in cfg.min_weight..=cfg.max_weight {
                    for _ in 0..cfg.trials_per_weight {
                        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.master_seed, id));
                        let mut support = sample(&mut rng, n, w).into_vec();
                        support.sort_unstable();
                        specs.push(TrialSpec {
                            id,
                            error_type: ty,
                            weight: w,
                            support,
                        });
                        id += 1;
                    }
                }
            }
        }
    }
    Ok(specs)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            f(cur);
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

/// Decodes planned trials with reusable decoders and rowspaces.
pub struct TrialRunner<'a> {
    code: &'a CssCode,
    decoders: Vec<SmallSetFlipDecoder<'a>>,
    rowspaces: [Option<RowSpace>; 2],
    logical: bool,
    radius: Option<GuaranteeRadius>,
    cfg: TrialConfig,
}

fn type_index(ty: ErrorType) -> usize {
    match ty {
        ErrorType::X => 0,
        ErrorType::Z => 1,
    }
}

impl<'a> TrialRunner<'a> {
    pub fn new(code: &'a CssCode, cfg: &TrialConfig, radius: Option<GuaranteeRadius>) -> Result<Self, HarnessError> {
        let decoders = ErrorType::BOTH
            .iter()
            .map(|&ty| SmallSetFlipDecoder::with_options(code, ty, DecoderOptions::default()))
            .collect::<Result<Vec<_>, _>>()?;
        let logical = code.code_dimension() > 0;
        let mut rowspaces = [None, None];
        if cfg.check_equivalence && logical {
            for &ty in cfg.side.types() {
                rowspaces[type_index(ty)] = Some(RowSpace::new(code.generators(ty)));
            }
        }
        Ok(Self {
            code,
            decoders,
            rowspaces,
            logical,
            radius,
            cfg: cfg.clone(),
        })
    }

    pub fn run(&mut self, planned: &TrialSpec) -> Result<TrialRecord, HarnessError> {
        let n = self.code.n();
        let e = Gf2Vector::from_support(n, &planned.support).map_err(CodeError::from)?;
        let s = self.code.syndrome(planned.error_type, &e)?;
        let ti = type_index(planned.error_type);
        let start = self.cfg.timed.then(Instant::now);
        let r = self.decoders[ti].decode(&s)?;
        let wall_time_us = start.map_or(0, |t| t.elapsed().as_micros() as u64);
        let correctly_decoded = match (&self.rowspaces[ti], self.logical) {
            (Some(rs), true) if r.success => {
                let mut d = e.clone();
                d ^= &r.correction;
                Some(rs.contains(&d).map_err(CodeError::from)?)
            }
            (Some(_), true) => Some(false),
            _ => None,
        };
        let sw = s.weight();
        Ok(TrialRecord {
            trial: planned.id,
            error_type: planned.error_type,
            weight: planned.weight,
            support_hash: support_hash(&planned.support),
            success: r.success,
            correctly_decoded,
            iterations: r.iterations,
            flipped_total: r.flipped_total,
            syndrome_weight: sw,
            evaluations: r.evaluations,
            guaranteed: self.radius.is_some_and(|g| g.covers(planned.weight)),
            accounting_ok: r.flipped_total <= 3 * sw && r.iterations <= sw,
            wall_time_us,
        })
    }
}

/// Runs every trial of `cfg` sequentially.
pub fn simulate(
    code: &CssCode,
    cfg: &TrialConfig,
    radius: Option<GuaranteeRadius>,
) -> Result<Vec<TrialRecord>, HarnessError> {
    let specs = plan_trials(code, cfg)?;
    let mut runner = TrialRunner::new(code, cfg, radius)?;
    specs.iter().map(|s| runner.run(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSummary {
    pub error_type: ErrorType,
    pub weight: usize,
    pub trials: usize,
    pub successes: usize,
    pub correct: usize,
    pub success_rate: f64,
    /// Fraction of trials with a verified equivalent correction, when checked.
    pub correct_rate: Option<f64>,
    pub guaranteed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub schema: u32,
    pub kind: String,
    pub n: usize,
    pub k: usize,
    pub model: ErrorModel,
    pub master_seed: u64,
    pub radius: Option<GuaranteeRadius>,
    pub per_weight: Vec<WeightSummary>,
    pub guaranteed_trials: usize,
    pub guaranteed_failures: usize,
    pub accounting_violations: usize,
    pub notes: Vec<String>,
}

impl SimulationSummary {
    pub fn build(
        code: &CssCode,
        cfg: &TrialConfig,
        radius: Option<GuaranteeRadius>,
        records: &[TrialRecord],
    ) -> Self {
        let k = code.code_dimension();
        let mut per_weight: Vec<WeightSummary> = Vec::new();
        for r in records {
            let slot = match per_weight
                .iter_mut()
                .find(|w| w.error_type == r.error_type && w.weight == r.weight)
            {
                Some(s) => s,
                None => {
                    per_weight.push(WeightSummary {
                        error_type: r.error_type,
                        weight: r.weight,
                        trials: 0,
                        successes: 0,
                        correct: 0,
                        success_rate: 0.0,
                        correct_rate: None,
                        guaranteed: r.guaranteed,
                    });
                    per_weight.last_mut().expect("just pushed")
                }
            };
            slot.trials += 1;
            slot.successes += usize::from(r.success);
            slot.correct += usize::from(r.correctly_decoded == Some(true));
            if r.correctly_decoded.is_some() {
                slot.correct_rate = Some(0.0);
            }
        }
        for w in &mut per_weight {
            w.success_rate = w.successes as f64 / w.trials.max(1) as f64;
            if w.correct_rate.is_some() {
                w.correct_rate = Some(w.correct as f64 / w.trials.max(1) as f64);
            }
        }
        per_weight.sort_by_key(|w| (type_index(w.error_type), w.weight));
        let guaranteed: Vec<&TrialRecord> = records.iter().filter(|r| r.guaranteed).collect();
        let guaranteed_failures = guaranteed
            .iter()
            .filter(|r| !r.success || r.correctly_decoded == Some(false))
            .count();
        let accounting_violations = guaranteed.iter().filter(|r| r.success && !r.accounting_ok).count();
        let mut notes = vec![match cfg.model {
            ErrorModel::Exhaustive => "exhaustive: every support of each weight was decoded".to_string(),
            ErrorModel::RandomSupport => {
                "random_support: uniformly random supports; worst-case errors are only covered by exhaustive runs"
                    .to_string()
            }
        }];
        if k == 0 {
            notes.push("k = 0: the code has no logical qubits, so only syndrome clearing is reported".into());
        }
        match radius {
            Some(g) if g.w0 < 1.0 => notes.push(format!(
                "w0 = {:.4} < 1: no nonzero weight is guaranteed; all results are empirical",
                g.w0
            )),
            Some(g) if g.source == RadiusSource::Assumed => {
                notes.push("w0 uses assumed expansion parameters".into())
            }
            None => notes.push("no expansion information: w0 not computed".into()),
            _ => {}
        }
        Self {
            schema: SCHEMA_VERSION,
            kind: "summary".into(),
            n: code.n(),
            k,
            model: cfg.model,
            master_seed: cfg.master_seed,
            radius,
            per_weight,
            guaranteed_trials: guaranteed.len(),
            guaranteed_failures,
            accounting_violations,
            notes,
        }
    }
}

/// Default subset ceiling for expansion certification in the harness.
pub const HARNESS_SUBSET_CEILING: u128 = DEFAULT_SUBSET_CEILING;
