//! The small-set-flip decoder.
//!
//! Each iteration flips the subset of a single generator's support that
//! lowers the syndrome weight by the largest amount per flipped qubit. Ties
//! go to the larger decrease, then the lower generator id, then the smaller
//! mask. Candidates are cached per generator and only generators next to a
//! changed syndrome bit are re-evaluated after a flip.
//!
//! A mask has bit `j` set when the `j`-th qubit of the generator's support,
//! in increasing flat-index order, is flipped.

mod queue;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CssCode, ErrorType};
use crate::gf2::{Gf2SparseMatrix, Gf2Vector};
use queue::{compare_ratio, BucketQueue, RatioKeys};

/// Largest `Δ_A + Δ_B` the exhaustive subset search accepts.
pub const MAX_GENERATOR_WEIGHT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoderError {
    #[error("generator weight {weight} exceeds the supported maximum {max}")]
    GeneratorTooHeavy { weight: usize, max: usize },
    #[error("syndrome has length {found}, expected {expected}")]
    SyndromeLength { expected: usize, found: usize },
    #[error("generator {generator} out of range ({count} generators)")]
    GeneratorOutOfRange { generator: usize, count: usize },
}

/// A flip inside one generator together with its effect on the syndrome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipCandidate {
    pub generator: usize,
    pub mask: u32,
    pub decrease: u32,
    pub size: u32,
}

impl FlipCandidate {
    /// Total selection order: `Less` means `self` is preferred.
    pub fn preference(&self, other: &FlipCandidate) -> Ordering {
        compare_ratio(self.decrease, self.size, other.decrease, other.size)
            .then(self.generator.cmp(&other.generator))
            .then(self.mask.cmp(&other.mask))
    }

    /// Flat qubit indices selected by the mask.
    pub fn flip_support(&self, generators: &Gf2SparseMatrix) -> Vec<usize> {
        generators
            .row(self.generator)
            .iter()
            .enumerate()
            .filter(|(j, _)| self.mask >> j & 1 == 1)
            .map(|(_, &q)| q)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderOptions {
    /// Record every accepted flip.
    pub trace: bool,
    /// Maintain cached candidates incrementally. When false every generator
    /// is re-evaluated on every iteration.
    pub incremental: bool,
    /// After each refresh, recompute every generator from scratch and panic
    /// if a cached candidate disagrees. Intended for tests.
    pub verify_cache: bool,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        Self {
            trace: false,
            incremental: true,
            verify_cache: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub generator: usize,
    pub flip: Vec<usize>,
    pub weight_before: usize,
    pub weight_after: usize,
    /// Generators evaluated while refreshing after this flip.
    pub reevaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub success: bool,
    pub correction: Gf2Vector,
    pub iterations: usize,
    pub trace: Option<Vec<TraceStep>>,
    pub initial_syndrome_weight: usize,
    pub residual_syndrome_weight: usize,
    /// Sum of the sizes of all accepted flips.
    pub flipped_total: usize,
    /// Number of single-generator evaluations performed.
    pub evaluations: usize,
}

/// Precomputed local structure of every generator.
///
/// For generator `g`, `local[local_start[g]..local_start[g + 1]]` lists the
/// checks touched by its support in increasing order, and
/// `columns[column_start[g] + j]` marks the positions in that list touched
/// by its `j`-th qubit. A generator's checks form a grid of size
/// `Δ_A Δ_B <= 100` under the weight cap, so every column fits in a `u128`
/// and a Gray-code step is one XOR and one popcount.
#[derive(Debug, Clone)]
struct Evaluator {
    local_start: Vec<usize>,
    local: Vec<usize>,
    column_start: Vec<usize>,
    columns: Vec<u128>,
}

impl Evaluator {
    fn new(checks: &Gf2SparseMatrix, generators: &Gf2SparseMatrix) -> Self {
        let mut e = Evaluator {
            local_start: vec![0],
            local: Vec::new(),
            column_start: vec![0],
            columns: Vec::new(),
        };
        let mut local = Vec::new();
        for g in 0..generators.rows() {
            let support = generators.row(g);
            local.clear();
            for &q in support {
                local.extend_from_slice(checks.col(q));
            }
            local.sort_unstable();
            local.dedup();
            assert!(local.len() <= 128, "generator {g} touches {} checks", local.len());
            for &q in support {
                let col = checks.col(q).iter().fold(0u128, |acc, c| {
                    acc | 1u128 << local.binary_search(c).expect("local check")
                });
                e.columns.push(col);
            }
            e.local.extend_from_slice(&local);
            e.local_start.push(e.local.len());
            e.column_start.push(e.columns.len());
        }
        e
    }

    /// Largest number of checks any generator touches.
    fn max_local(&self) -> usize {
        self.local_start.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    fn evaluate(&self, s: &Gf2Vector, g: usize) -> Option<FlipCandidate> {
        let local = &self.local[self.local_start[g]..self.local_start[g + 1]];
        let columns = &self.columns[self.column_start[g]..self.column_start[g + 1]];
        let mut state = 0u128;
        for (l, &c) in local.iter().enumerate() {
            state |= u128::from(s.get(c)) << l;
        }
        if state == 0 {
            return None;
        }
        let base = i64::from(state.count_ones());
        let mut mask = 0u32;
        let mut best = LocalBest::default();
        for step in 1u32..(1u32 << columns.len()) {
            let j = step.trailing_zeros() as usize;
            mask ^= 1 << j;
            state ^= columns[j];
            best.offer(mask, base - i64::from(state.count_ones()));
        }
        best.finish(g)
    }
}

/// Best flip seen so far within one generator. Every candidate shares the
/// generator, so the selection order reduces to ratio, then decrease, then
/// mask.
#[derive(Default)]
struct LocalBest {
    decrease: u32,
    size: u32,
    mask: u32,
}

impl LocalBest {
    #[inline]
    fn offer(&mut self, mask: u32, decrease: i64) {
        if decrease <= 0 {
            return;
        }
        let (d, size) = (decrease as u32, mask.count_ones());
        let lhs = u64::from(d) * u64::from(self.size);
        let rhs = u64::from(self.decrease) * u64::from(size);
        if self.decrease == 0 || lhs > rhs || (lhs == rhs && (d > self.decrease || (d == self.decrease && mask < self.mask)))
        {
            *self = LocalBest { decrease: d, size, mask };
        }
    }

    fn finish(self, generator: usize) -> Option<FlipCandidate> {
        (self.decrease > 0).then_some(FlipCandidate {
            generator,
            mask: self.mask,
            decrease: self.decrease,
            size: self.size,
        })
    }
}

/// Reusable decoder for one error type of one code.
///
/// Working buffers are kept between calls and only the touched entries are
/// cleared, so repeated decodes of sparse syndromes do not pay for the full
/// generator count.
pub struct SmallSetFlipDecoder<'a> {
    checks: &'a Gf2SparseMatrix,
    generators: &'a Gf2SparseMatrix,
    options: DecoderOptions,
    keys: RatioKeys,
    queue: BucketQueue,
    cache: Vec<Option<FlipCandidate>>,
    cached: Vec<usize>,
    evaluator: Evaluator,
    evaluations: usize,
}

impl<'a> SmallSetFlipDecoder<'a> {
    pub fn new(code: &'a CssCode, ty: ErrorType) -> Result<Self, DecoderError> {
        Self::with_options(code, ty, DecoderOptions::default())
    }

    pub fn with_options(
        code: &'a CssCode,
        ty: ErrorType,
        options: DecoderOptions,
    ) -> Result<Self, DecoderError> {
        let weight = code.row_weight();
        if weight > MAX_GENERATOR_WEIGHT {
            return Err(DecoderError::GeneratorTooHeavy {
                weight,
                max: MAX_GENERATOR_WEIGHT,
            });
        }
        let checks = code.checks(ty);
        let generators = code.generators(ty);
        let evaluator = Evaluator::new(checks, generators);
        let keys = RatioKeys::new(weight.max(1), evaluator.max_local().max(1));
        Ok(Self {
            checks,
            generators,
            options,
            queue: BucketQueue::new(keys.len()),
            keys,
            cache: vec![None; generators.rows()],
            cached: Vec::new(),
            evaluator,
            evaluations: 0,
        })
    }

    pub fn options(&self) -> DecoderOptions {
        self.options
    }

    pub fn set_options(&mut self, options: DecoderOptions) {
        self.options = options;
    }

    /// Best improving flip inside generator `g` for syndrome `s`.
    pub fn best_flip(&mut self, s: &Gf2Vector, g: usize) -> Result<Option<FlipCandidate>, DecoderError> {
        self.check_syndrome(s)?;
        if g >= self.generators.rows() {
            return Err(DecoderError::GeneratorOutOfRange {
                generator: g,
                count: self.generators.rows(),
            });
        }
        Ok(self.evaluator.evaluate(s, g))
    }

    fn check_syndrome(&self, s: &Gf2Vector) -> Result<(), DecoderError> {
        if s.len() != self.checks.rows() {
            return Err(DecoderError::SyndromeLength {
                expected: self.checks.rows(),
                found: s.len(),
            });
        }
        Ok(())
    }

    fn reset(&mut self) {
        for &g in &self.cached {
            self.cache[g] = None;
        }
        self.cached.clear();
        self.queue.clear();
        self.evaluations = 0;
    }

    /// Generators sharing a qubit with any of `changed`, sorted and unique.
    fn generators_near(&self, changed: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut dirty = Vec::new();
        for c in changed {
            for &q in self.checks.row(c) {
                dirty.extend_from_slice(self.generators.col(q));
            }
        }
        dirty.sort_unstable();
        dirty.dedup();
        dirty
    }

    fn refresh(&mut self, s: &Gf2Vector, dirty: &[usize]) {
        for &g in dirty {
            if let Some(old) = self.cache[g] {
                self.queue.remove(self.keys.key(old.decrease, old.size), g);
            }
            let fresh = self.evaluator.evaluate(s, g);
            if let Some(c) = fresh {
                if self.cache[g].is_none() {
                    self.cached.push(g);
                }
                self.queue.insert(self.keys.key(c.decrease, c.size), g);
            }
            self.cache[g] = fresh;
        }
        self.evaluations += dirty.len();
        if self.options.verify_cache {
            self.verify_against_rescan(s);
        }
    }

    fn verify_against_rescan(&mut self, s: &Gf2Vector) {
        for g in 0..self.generators.rows() {
            let fresh = self.evaluator.evaluate(s, g);
            assert_eq!(fresh, self.cache[g], "stale cached candidate for generator {g}");
        }
    }

    fn rescan_best(&mut self, s: &Gf2Vector) -> Option<FlipCandidate> {
        let mut best: Option<FlipCandidate> = None;
        for g in 0..self.generators.rows() {
            if let Some(c) = self.evaluator.evaluate(s, g) {
                if best.is_none_or(|b| c.preference(&b) == Ordering::Less) {
                    best = Some(c);
                }
            }
        }
        self.evaluations += self.generators.rows();
        best
    }

    /// Runs the decoder on `syndrome` until no single-generator flip lowers
    /// the syndrome weight.
    pub fn decode(&mut self, syndrome: &Gf2Vector) -> Result<DecodeResult, DecoderError> {
        self.check_syndrome(syndrome)?;
        self.reset();
        let mut s = syndrome.clone();
        let mut correction = Gf2Vector::zeros(self.checks.cols());
        let initial = s.weight();
        let mut weight = initial;
        let mut trace = self.options.trace.then(Vec::new);
        let mut iterations = 0;
        let mut flipped_total = 0;

        if self.options.incremental {
            let dirty = self.generators_near(s.ones());
            self.refresh(&s, &dirty);
        }

        loop {
            let candidate = if self.options.incremental {
                match self.queue.first() {
                    Some((_, g)) => self.cache[g].expect("queued generator has a candidate"),
                    None => break,
                }
            } else {
                match self.rescan_best(&s) {
                    Some(c) => c,
                    None => break,
                }
            };
            let flip = candidate.flip_support(self.generators);
            let mut touched: Vec<usize> = Vec::with_capacity(flip.len() * 8);
            for &q in &flip {
                correction.flip(q);
                touched.extend_from_slice(self.checks.col(q));
            }
            touched.sort_unstable();
            let mut changed = Vec::with_capacity(touched.len());
            for run in touched.chunk_by(|x, y| x == y) {
                if run.len() % 2 == 1 {
                    changed.push(run[0]);
                }
            }
            for &c in &changed {
                s.flip(c);
            }
            let before = weight;
            weight -= candidate.decrease as usize;
            debug_assert_eq!(weight, s.weight());
            iterations += 1;
            flipped_total += flip.len();

            let mut reevaluated = 0;
            if self.options.incremental {
                let dirty = self.generators_near(changed.iter().copied());
                reevaluated = dirty.len();
                self.refresh(&s, &dirty);
            }
            if let Some(t) = trace.as_mut() {
                t.push(TraceStep {
                    generator: candidate.generator,
                    flip,
                    weight_before: before,
                    weight_after: weight,
                    reevaluated,
                });
            }
        }

        Ok(DecodeResult {
            success: weight == 0,
            correction,
            iterations,
            trace,
            initial_syndrome_weight: initial,
            residual_syndrome_weight: weight,
            flipped_total,
            evaluations: self.evaluations,
        })
    }
}

/// Best improving flip inside generator `g` when decoding errors of type `ty`.
pub fn best_flip_in_generator(
    code: &CssCode,
    s: &Gf2Vector,
    g: usize,
    ty: ErrorType,
) -> Result<Option<FlipCandidate>, DecoderError> {
    SmallSetFlipDecoder::new(code, ty)?.best_flip(s, g)
}

/// Decodes one error type with default options, optionally recording a trace.
pub fn decode_side(
    code: &CssCode,
    s: &Gf2Vector,
    ty: ErrorType,
    trace: bool,
) -> Result<DecodeResult, DecoderError> {
    let options = DecoderOptions {
        trace,
        ..DecoderOptions::default()
    };
    SmallSetFlipDecoder::with_options(code, ty, options)?.decode(s)
}

/// Decodes X errors from `s_x` and Z errors from `s_z` independently.
pub fn decode(
    code: &CssCode,
    s_x: &Gf2Vector,
    s_z: &Gf2Vector,
) -> Result<(DecodeResult, DecodeResult), DecoderError> {
    Ok((
        decode_side(code, s_x, ErrorType::X, false)?,
        decode_side(code, s_z, ErrorType::Z, false)?,
    ))
}
