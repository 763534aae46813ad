//! Decoder scaling benchmarks over a family of random biregular graphs.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{trial_seed, HarnessError, SCHEMA_VERSION};
use crate::code::{CssCode, ErrorType};
use crate::decoder::{DecoderOptions, SmallSetFlipDecoder};
use crate::gf2::Gf2Vector;
use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScaling {
    /// The same error weight at every size.
    Fixed(usize),
    /// Weight `ceil(factor * sqrt(n))`.
    Sqrt(f64),
}

impl WeightScaling {
    pub fn weight(self, n: usize) -> usize {
        match self {
            WeightScaling::Fixed(w) => w,
            WeightScaling::Sqrt(f) => (f * (n as f64).sqrt()).ceil() as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Left-side sizes; right sizes follow from the degrees.
    pub sizes: Vec<usize>,
    pub delta_a: usize,
    pub delta_b: usize,
    pub scalings: Vec<WeightScaling>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![24, 48, 96],
            delta_a: 3,
            delta_b: 4,
            scalings: vec![WeightScaling::Fixed(2), WeightScaling::Sqrt(0.1)],
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n_a: usize,
    pub n_b: usize,
    pub n: usize,
    pub scaling: WeightScaling,
    pub weight: usize,
    pub trials: usize,
    pub mean_decode_us: f64,
    pub mean_evaluations: f64,
    pub mean_syndrome_weight: f64,
    /// Total evaluations divided by total initial syndrome weight.
    pub evaluations_per_syndrome_unit: f64,
    /// Fraction of trials ending with a zero syndrome.
    pub success_rate: f64,
    /// Every trial stayed within its evaluation budget
    /// `Δ_A Δ_B (|σ| + Δ_B Σ|F|)`.
    pub trace_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: u32,
    pub kind: String,
    pub delta_a: usize,
    pub delta_b: usize,
    pub rows: Vec<BenchRow>,
}

/// Times X-type decoding of random errors at every size and scaling.
pub fn bench(cfg: &BenchConfig) -> Result<BenchReport, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidConfig("trials must be positive".into()));
    }
    if cfg.delta_b == 0 {
        return Err(HarnessError::InvalidConfig("delta_b must be positive".into()));
    }
    let mut rows = Vec::new();
    for (si, &n_a) in cfg.sizes.iter().enumerate() {
        if !(n_a * cfg.delta_a).is_multiple_of(cfg.delta_b) {
            return Err(HarnessError::InvalidConfig(format!(
                "n_a = {n_a} times delta_a = {} is not divisible by delta_b = {}",
                cfg.delta_a, cfg.delta_b
            )));
        }
        let n_b = n_a * cfg.delta_a / cfg.delta_b;
        let graph =
            BipartiteGraph::generate_biregular(n_a, n_b, cfg.delta_a, cfg.delta_b, trial_seed(cfg.seed, si as u64))?;
        let code = CssCode::hypergraph_product(graph);
        let n = code.n();
        let mut decoder = SmallSetFlipDecoder::with_options(&code, ErrorType::X, DecoderOptions::default())?;
        let per_eval = (cfg.delta_a * cfg.delta_b) as u64;
        for (wi, &scaling) in cfg.scalings.iter().enumerate() {
            let weight = scaling.weight(n).min(n);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, ((si as u64) << 32) | (wi as u64 + 1)));
            let (mut time_us, mut evals, mut syn_total, mut successes) = (0f64, 0u64, 0u64, 0usize);
            let mut consistent = true;
            for _ in 0..cfg.trials {
                let support = sample(&mut rng, n, weight).into_vec();
                let e = Gf2Vector::from_support(n, &support).expect("in range");
                let s = code.syndrome_x(&e)?;
                let start = Instant::now();
                let r = decoder.decode(&s)?;
                time_us += start.elapsed().as_secs_f64() * 1e6;
                evals += r.evaluations as u64;
                syn_total += s.weight() as u64;
                successes += usize::from(r.success);
                let budget = per_eval * (s.weight() as u64 + cfg.delta_b as u64 * r.flipped_total as u64);
                consistent &= r.evaluations as u64 <= budget;
            }
            let t = cfg.trials as f64;
            rows.push(BenchRow {
                n_a,
                n_b,
                n,
                scaling,
                weight,
                trials: cfg.trials,
                mean_decode_us: time_us / t,
                mean_evaluations: evals as f64 / t,
                mean_syndrome_weight: syn_total as f64 / t,
                evaluations_per_syndrome_unit: if syn_total == 0 { 0.0 } else { evals as f64 / syn_total as f64 },
                success_rate: successes as f64 / t,
                trace_consistent: consistent,
            });
        }
    }
    Ok(BenchReport {
        schema: SCHEMA_VERSION,
        kind: "bench".into(),
        delta_a: cfg.delta_a,
        delta_b: cfg.delta_b,
        rows,
    })
}
