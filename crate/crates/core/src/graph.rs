//! Biregular bipartite graphs `G = (A ∪ B, E)` and their expansion.
//!
//! `A` is the left side (`n_a` vertices of degree `delta_a`), `B` the right
//! side (`n_b` vertices of degree `delta_b`). Vertex ids are dense per side.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::Gf2SparseMatrix;

/// Resampling budget of the configuration model.
pub const MAX_GENERATION_ATTEMPTS: usize = 1000;

/// Default ceiling on the number of subsets an exhaustive check may visit.
pub const DEFAULT_SUBSET_CEILING: u128 = 100_000_000;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The `A` side.
    Left,
    /// The `B` side.
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("degree equation violated: {n_a}*{delta_a} != {n_b}*{delta_b}")]
    DegreeEquation {
        n_a: usize,
        n_b: usize,
        delta_a: usize,
        delta_b: usize,
    },
    #[error("unsupported shape: {0}")]
    Shape(String),
    #[error("no simple graph found after {attempts} configuration-model attempts")]
    Generation { attempts: usize },
    #[error("{side} vertex {vertex} out of range (side has {len} vertices)")]
    VertexOutOfRange { side: Side, vertex: usize, len: usize },
    #[error("{side} vertex {vertex} has degree {degree}, expected {expected}")]
    DegreeMismatch {
        side: Side,
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("{side} vertex {vertex} lists neighbor {neighbor} more than once")]
    RepeatedNeighbor {
        side: Side,
        vertex: usize,
        neighbor: usize,
    },
    #[error("vertex {0} appears twice in the subset")]
    DuplicateVertex(usize),
    #[error("invalid expansion parameters: {0}")]
    InvalidParameters(String),
    #[error("exhaustive enumeration of {subsets} subsets exceeds the ceiling of {ceiling}")]
    Infeasible { subsets: u128, ceiling: u128 },
    #[error("graph file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A simple biregular bipartite graph with sorted adjacency lists on both sides.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    delta_a: usize,
    delta_b: usize,
    a_adj: Vec<Vec<usize>>,
    b_adj: Vec<Vec<usize>>,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteGraph")
            .field("n_a", &self.n_a)
            .field("n_b", &self.n_b)
            .field("delta_a", &self.delta_a)
            .field("delta_b", &self.delta_b)
            .field("a_adj", &self.a_adj)
            .finish()
    }
}

impl BipartiteGraph {
    /// Validates the A-side adjacency lists and derives the B side.
    pub fn from_adjacency(
        n_a: usize,
        n_b: usize,
        delta_a: usize,
        delta_b: usize,
        mut a_adj: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        if n_a * delta_a != n_b * delta_b {
            return Err(GraphError::DegreeEquation {
                n_a,
                n_b,
                delta_a,
                delta_b,
            });
        }
        if a_adj.len() != n_a {
            return Err(GraphError::Shape(format!(
                "expected {n_a} adjacency lists, found {}",
                a_adj.len()
            )));
        }
        let mut b_adj = vec![Vec::with_capacity(delta_b); n_b];
        for (a, nbrs) in a_adj.iter_mut().enumerate() {
            if nbrs.len() != delta_a {
                return Err(GraphError::DegreeMismatch {
                    side: Side::Left,
                    vertex: a,
                    degree: nbrs.len(),
                    expected: delta_a,
                });
            }
            nbrs.sort_unstable();
            for (k, &b) in nbrs.iter().enumerate() {
                if b >= n_b {
                    return Err(GraphError::VertexOutOfRange {
                        side: Side::Right,
                        vertex: b,
                        len: n_b,
                    });
                }
                if k > 0 && nbrs[k - 1] == b {
                    return Err(GraphError::RepeatedNeighbor {
                        side: Side::Left,
                        vertex: a,
                        neighbor: b,
                    });
                }
                b_adj[b].push(a);
            }
        }
        if let Some((b, nbrs)) = b_adj.iter().enumerate().find(|(_, n)| n.len() != delta_b) {
            return Err(GraphError::DegreeMismatch {
                side: Side::Right,
                vertex: b,
                degree: nbrs.len(),
                expected: delta_b,
            });
        }
        Ok(Self {
            n_a,
            n_b,
            delta_a,
            delta_b,
            a_adj,
            b_adj,
        })
    }

    /// Samples a simple biregular graph with the configuration model: a
    /// uniform matching of the `n_a * delta_a` left stubs to the right stubs,
    /// resampled from scratch whenever a repeated edge appears.
    pub fn generate_biregular(
        n_a: usize,
        n_b: usize,
        delta_a: usize,
        delta_b: usize,
        seed: u64,
    ) -> Result<Self, GraphError> {
        if n_a * delta_a != n_b * delta_b {
            return Err(GraphError::DegreeEquation {
                n_a,
                n_b,
                delta_a,
                delta_b,
            });
        }
        if n_b > n_a || delta_a > delta_b {
            return Err(GraphError::Shape(format!(
                "need n_b <= n_a and delta_a <= delta_b, got n_a={n_a} n_b={n_b} delta_a={delta_a} delta_b={delta_b}"
            )));
        }
        if n_a == 0 || delta_a == 0 || delta_a > n_b || delta_b > n_a {
            return Err(GraphError::Shape(format!(
                "no simple graph with n_a={n_a} n_b={n_b} delta_a={delta_a} delta_b={delta_b}"
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stubs: Vec<usize> = (0..n_b)
            .flat_map(|b| std::iter::repeat_n(b, delta_b))
            .collect();
        let mut seen = vec![usize::MAX; n_b];
        'attempt: for _ in 0..MAX_GENERATION_ATTEMPTS {
            stubs.shuffle(&mut rng);
            for (a, chunk) in stubs.chunks(delta_a).enumerate() {
                for &b in chunk {
                    if seen[b] == a {
                        seen.fill(usize::MAX);
                        continue 'attempt;
                    }
                    seen[b] = a;
                }
            }
            let a_adj = stubs.chunks(delta_a).map(<[usize]>::to_vec).collect();
            return Self::from_adjacency(n_a, n_b, delta_a, delta_b, a_adj);
        }
        Err(GraphError::Generation {
            attempts: MAX_GENERATION_ATTEMPTS,
        })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn delta_a(&self) -> usize {
        self.delta_a
    }

    pub fn delta_b(&self) -> usize {
        self.delta_b
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::Left => self.n_a,
            Side::Right => self.n_b,
        }
    }

    pub fn degree(&self, side: Side) -> usize {
        match side {
            Side::Left => self.delta_a,
            Side::Right => self.delta_b,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.n_a * self.delta_a
    }

    fn adjacency(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::Left => &self.a_adj,
            Side::Right => &self.b_adj,
        }
    }

    /// Neighbors of a left vertex, sorted.
    #[inline]
    pub fn a_neighbors(&self, a: usize) -> &[usize] {
        &self.a_adj[a]
    }

    /// Neighbors of a right vertex, sorted.
    #[inline]
    pub fn b_neighbors(&self, b: usize) -> &[usize] {
        &self.b_adj[b]
    }

    pub fn neighbors(&self, side: Side, v: usize) -> Result<&[usize], GraphError> {
        let len = self.side_len(side);
        if v >= len {
            return Err(GraphError::VertexOutOfRange {
                side,
                vertex: v,
                len,
            });
        }
        Ok(&self.adjacency(side)[v])
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.a_adj[a].binary_search(&b).is_ok()
    }

    /// For every vertex of `Γ(subset)`, the number of its neighbors inside
    /// `subset`, sorted by vertex id.
    pub fn neighborhood_counts(
        &self,
        side: Side,
        subset: &[usize],
    ) -> Result<Vec<(usize, usize)>, GraphError> {
        let len = self.side_len(side);
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0]));
            }
        }
        if let Some(&v) = sorted.iter().find(|&&v| v >= len) {
            return Err(GraphError::VertexOutOfRange {
                side,
                vertex: v,
                len,
            });
        }
        let mut counts = vec![0usize; self.side_len(side.other())];
        for &v in &sorted {
            for &u in &self.adjacency(side)[v] {
                counts[u] += 1;
            }
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .collect())
    }

    /// Splits `Γ(subset)` into unique neighbors (exactly one neighbor in the
    /// subset) and multiple neighbors (the rest).
    pub fn unique_and_multiple_neighbors(
        &self,
        side: Side,
        subset: &[usize],
    ) -> Result<NeighborSplit, GraphError> {
        let mut split = NeighborSplit::default();
        for (u, c) in self.neighborhood_counts(side, subset)? {
            if c == 1 {
                split.unique.push(u);
            } else {
                split.multiple.push(u);
            }
        }
        Ok(split)
    }

    /// Checks `(gamma, delta)` expansion on one side: every subset `S` with
    /// `|S| <= gamma * n_side` (further capped at `max_subset_size`) must have
    /// `|Γ(S)| >= (1 - delta) * Δ * |S|`.
    pub fn check_expansion(&self, query: &ExpansionQuery) -> Result<ExpansionReport, GraphError> {
        if !(query.gamma > 0.0 && query.gamma <= 1.0) {
            return Err(GraphError::InvalidParameters(format!(
                "gamma must be in (0, 1], got {}",
                query.gamma
            )));
        }
        if !(query.delta >= 0.0 && query.delta < 1.0) {
            return Err(GraphError::InvalidParameters(format!(
                "delta must be in [0, 1), got {}",
                query.delta
            )));
        }
        let n = self.side_len(query.side);
        let gamma_cap = (query.gamma * n as f64 + EPS).floor() as usize;
        let size_limit = gamma_cap.min(query.max_subset_size).min(n);
        let degree = self.degree(query.side) as f64;
        let threshold = |size: usize| (1.0 - query.delta) * degree * size as f64 - EPS;

        let mut report = ExpansionReport {
            side: query.side,
            gamma: query.gamma,
            delta: query.delta,
            mode: query.mode.kind(),
            max_subset_size: query.max_subset_size,
            size_limit,
            verified: true,
            witness: None,
            subsets_checked: 0,
        };

        match query.mode {
            CheckMode::Exhaustive => {
                let total = subsets_up_to(n, size_limit);
                if total > query.ceiling {
                    return Err(GraphError::Infeasible {
                        subsets: total,
                        ceiling: query.ceiling,
                    });
                }
                let mut walker = SubsetWalker::new(self, query.side);
                let mut limit = size_limit;
                let mut witness: Option<Vec<usize>> = None;
                walker.walk(&mut limit, &mut |subset, gamma_size| {
                    report.subsets_checked += 1;
                    if (gamma_size as f64) < threshold(subset.len()) {
                        witness = Some(subset.to_vec());
                        // Only strictly smaller witnesses are of interest now.
                        Some(subset.len() - 1)
                    } else {
                        None
                    }
                });
                if let Some(w) = witness {
                    report.verified = false;
                    report.witness = Some(w);
                }
            }
            CheckMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let adj = self.adjacency(query.side);
                let mut stamp = vec![usize::MAX; self.side_len(query.side.other())];
                let mut epoch = 0usize;
                'sizes: for size in 1..=size_limit {
                    let mut best: Option<Vec<usize>> = None;
                    for _ in 0..samples {
                        let mut subset = rand::seq::index::sample(&mut rng, n, size).into_vec();
                        subset.sort_unstable();
                        epoch += 1;
                        let mut count = 0;
                        for &v in &subset {
                            for &u in &adj[v] {
                                if stamp[u] != epoch {
                                    stamp[u] = epoch;
                                    count += 1;
                                }
                            }
                        }
                        report.subsets_checked += 1;
                        if (count as f64) < threshold(size)
                            && best.as_ref().is_none_or(|b| subset < *b)
                        {
                            best = Some(subset);
                        }
                    }
                    if let Some(b) = best {
                        report.verified = false;
                        report.witness = Some(b);
                        break 'sizes;
                    }
                }
            }
        }
        Ok(report)
    }

    /// Exhaustively computes, for every subset size up to `max_size`, the
    /// minimum of `|Γ(S)|` over subsets of that size.
    pub fn expansion_profile(
        &self,
        side: Side,
        max_size: usize,
        ceiling: u128,
    ) -> Result<ExpansionProfile, GraphError> {
        let n = self.side_len(side);
        let max_size = max_size.min(n);
        let total = subsets_up_to(n, max_size);
        if total > ceiling {
            return Err(GraphError::Infeasible {
                subsets: total,
                ceiling,
            });
        }
        let mut min_neighbors = vec![usize::MAX; max_size];
        let mut walker = SubsetWalker::new(self, side);
        let mut limit = max_size;
        let mut checked = 0u64;
        walker.walk(&mut limit, &mut |subset, gamma_size| {
            checked += 1;
            let slot = &mut min_neighbors[subset.len() - 1];
            *slot = (*slot).min(gamma_size);
            None
        });
        Ok(ExpansionProfile {
            side,
            n_side: n,
            degree: self.degree(side),
            min_neighbors,
            subsets_checked: checked,
        })
    }

    /// The `n_b × n_a` parity-check matrix with a one wherever `b ~ a`.
    pub fn incidence_matrix(&self) -> Gf2SparseMatrix {
        Gf2SparseMatrix::from_row_supports(self.n_a, self.b_adj.clone()).expect("sorted adjacency")
    }

    /// Graph text format: a header `n_a n_b delta_a delta_b`, then one line
    /// per left vertex with its sorted right neighbors.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.n_a, self.n_b, self.delta_a, self.delta_b);
        for nbrs in &self.a_adj {
            let line: Vec<String> = nbrs.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let parse_line = |line_no: usize, line: &str| -> Result<Vec<usize>, GraphError> {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|e| GraphError::Parse {
                        line: line_no + 1,
                        message: format!("bad integer {tok:?}: {e}"),
                    })
                })
                .collect()
        };
        let (hdr_no, hdr) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "empty file".into(),
        })?;
        let header = parse_line(hdr_no, hdr)?;
        let &[n_a, n_b, delta_a, delta_b] = header.as_slice() else {
            return Err(GraphError::Parse {
                line: 1,
                message: format!("header needs 4 integers, found {}", header.len()),
            });
        };
        let mut a_adj = Vec::with_capacity(n_a);
        for (no, line) in lines {
            if a_adj.len() == n_a {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(GraphError::Parse {
                    line: no + 1,
                    message: format!("more than {n_a} adjacency lines"),
                });
            }
            a_adj.push(parse_line(no, line)?);
        }
        if a_adj.len() != n_a {
            return Err(GraphError::Parse {
                line: a_adj.len() + 2,
                message: format!("expected {n_a} adjacency lines, found {}", a_adj.len()),
            });
        }
        Self::from_adjacency(n_a, n_b, delta_a, delta_b, a_adj)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NeighborSplit {
    pub unique: Vec<usize>,
    pub multiple: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    /// Random subsets per size. A clean sampled run is not a proof.
    Sampled { samples: usize, seed: u64 },
}

impl CheckMode {
    fn kind(self) -> CheckKind {
        match self {
            CheckMode::Exhaustive => CheckKind::Exhaustive,
            CheckMode::Sampled { .. } => CheckKind::Sampled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionQuery {
    pub side: Side,
    pub gamma: f64,
    pub delta: f64,
    pub max_subset_size: usize,
    pub mode: CheckMode,
    pub ceiling: u128,
}

impl ExpansionQuery {
    pub fn exhaustive(side: Side, gamma: f64, delta: f64, max_subset_size: usize) -> Self {
        Self {
            side,
            gamma,
            delta,
            max_subset_size,
            mode: CheckMode::Exhaustive,
            ceiling: DEFAULT_SUBSET_CEILING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub side: Side,
    pub gamma: f64,
    pub delta: f64,
    pub mode: CheckKind,
    pub max_subset_size: usize,
    /// Largest subset size actually covered, `min(floor(gamma n), max_subset_size)`.
    pub size_limit: usize,
    /// In sampled mode this only means no counterexample was found.
    pub verified: bool,
    pub witness: Option<Vec<usize>>,
    pub subsets_checked: u64,
}

/// Exact minimum neighborhood sizes per subset size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionProfile {
    pub side: Side,
    pub n_side: usize,
    pub degree: usize,
    /// Entry `s - 1` is `min |Γ(S)|` over all `|S| = s`.
    pub min_neighbors: Vec<usize>,
    pub subsets_checked: u64,
}

impl ExpansionProfile {
    pub fn max_size(&self) -> usize {
        self.min_neighbors.len()
    }

    /// Smallest `delta` such that all subsets of size at most `size` expand by
    /// `(1 - delta) * Δ`.
    pub fn delta_at(&self, size: usize) -> f64 {
        (1..=size.min(self.max_size()))
            .map(|s| 1.0 - self.min_neighbors[s - 1] as f64 / (self.degree * s) as f64)
            .fold(0.0, f64::max)
    }

    /// The largest size `s >= 1` whose tightest delta is strictly below
    /// `delta_bound`, with that delta. Size 1 always qualifies with delta 0.
    pub fn certify_below(&self, delta_bound: f64) -> Certification {
        let mut size = 1.min(self.max_size());
        for s in 1..=self.max_size() {
            if self.delta_at(s) < delta_bound - EPS {
                size = s;
            } else {
                break;
            }
        }
        Certification {
            side: self.side,
            size,
            gamma: size as f64 / self.n_side as f64,
            delta: self.delta_at(size),
        }
    }
}

/// An exhaustively verified `(gamma, delta)` pair for one side, with `gamma`
/// measured as `size / n_side`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    pub side: Side,
    pub size: usize,
    pub gamma: f64,
    pub delta: f64,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of nonempty subsets of size at most `k` of an `n`-set.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    (1..=k.min(n)).fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)))
}

/// Depth-first enumeration of subsets in lexicographic order with
/// incremental neighborhood counts.
struct SubsetWalker<'g> {
    adj: &'g [Vec<usize>],
    counts: Vec<u32>,
    distinct: usize,
    stack: Vec<usize>,
}

impl<'g> SubsetWalker<'g> {
    fn new(g: &'g BipartiteGraph, side: Side) -> Self {
        Self {
            adj: g.adjacency(side),
            counts: vec![0; g.side_len(side.other())],
            distinct: 0,
            stack: Vec::new(),
        }
    }

    /// Calls `visit(subset, |Γ(subset)|)` on every nonempty subset of size at
    /// most `*limit`. A visitor may return a new (smaller) limit.
    fn walk<F>(&mut self, limit: &mut usize, visit: &mut F)
    where
        F: FnMut(&[usize], usize) -> Option<usize>,
    {
        self.descend(0, limit, visit);
    }

    fn descend<F>(&mut self, start: usize, limit: &mut usize, visit: &mut F)
    where
        F: FnMut(&[usize], usize) -> Option<usize>,
    {
        for v in start..self.adj.len() {
            if self.stack.len() >= *limit {
                return;
            }
            self.push(v);
            if let Some(new_limit) = visit(&self.stack, self.distinct) {
                *limit = new_limit.min(*limit);
            }
            if self.stack.len() < *limit {
                self.descend(v + 1, limit, visit);
            }
            self.pop(v);
        }
    }

    fn push(&mut self, v: usize) {
        for &u in &self.adj[v] {
            if self.counts[u] == 0 {
                self.distinct += 1;
            }
            self.counts[u] += 1;
        }
        self.stack.push(v);
    }

    fn pop(&mut self, v: usize) {
        for &u in &self.adj[v] {
            self.counts[u] -= 1;
            if self.counts[u] == 0 {
                self.distinct -= 1;
            }
        }
        self.stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> BipartiteGraph {
        BipartiteGraph::generate_biregular(2, 2, 2, 2, 7).unwrap()
    }

    fn k32() -> BipartiteGraph {
        BipartiteGraph::generate_biregular(3, 2, 2, 3, 11).unwrap()
    }

    fn assert_invariants(g: &BipartiteGraph) {
        assert_eq!(g.n_a() * g.delta_a(), g.n_b() * g.delta_b());
        for a in 0..g.n_a() {
            let n = g.a_neighbors(a);
            assert_eq!(n.len(), g.delta_a());
            assert!(n.windows(2).all(|w| w[0] < w[1]));
            for &b in n {
                assert!(g.b_neighbors(b).contains(&a));
            }
        }
        for b in 0..g.n_b() {
            let n = g.b_neighbors(b);
            assert_eq!(n.len(), g.delta_b());
            assert!(n.windows(2).all(|w| w[0] < w[1]));
            for &a in n {
                assert!(g.a_neighbors(a).contains(&b));
            }
        }
    }

    #[test]
    fn forced_small_graphs() {
        for seed in 0..5 {
            let c4 = BipartiteGraph::generate_biregular(2, 2, 2, 2, seed).unwrap();
            assert_eq!(c4.a_neighbors(0), &[0, 1]);
            assert_eq!(c4.a_neighbors(1), &[0, 1]);
            let k = BipartiteGraph::generate_biregular(3, 2, 2, 3, seed).unwrap();
            for b in 0..2 {
                assert_eq!(k.b_neighbors(b), &[0, 1, 2]);
            }
        }
    }

    #[test]
    fn generated_graph_invariants_and_determinism() {
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 1).unwrap();
        assert_invariants(&g);
        let again = BipartiteGraph::generate_biregular(12, 9, 3, 4, 1).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.neighbors(Side::Left, 5).unwrap(), g.a_neighbors(5));
        assert_eq!(g.neighbors(Side::Left, 5).unwrap().len(), 3);
        for seed in 0..20 {
            assert_invariants(&BipartiteGraph::generate_biregular(40, 30, 3, 4, seed).unwrap());
        }
    }

    #[test]
    fn generation_errors() {
        assert!(matches!(
            BipartiteGraph::generate_biregular(12, 9, 3, 3, 0),
            Err(GraphError::DegreeEquation { .. })
        ));
        assert!(matches!(
            BipartiteGraph::generate_biregular(9, 12, 4, 3, 0),
            Err(GraphError::Shape(_))
        ));
        assert!(matches!(
            BipartiteGraph::generate_biregular(2, 1, 1, 2, 0).map(|g| g.n_a()),
            Ok(2)
        ));
        assert!(matches!(
            BipartiteGraph::generate_biregular(3, 1, 2, 6, 0),
            Err(GraphError::Shape(_))
        ));
    }

    #[test]
    fn neighbor_queries() {
        let c4 = four_cycle();
        assert_eq!(c4.neighbors(Side::Left, 0).unwrap(), &[0, 1]);
        assert!(matches!(
            c4.neighbors(Side::Left, 2),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        let k = k32();
        assert_eq!(k.neighbors(Side::Right, 1).unwrap(), &[0, 1, 2]);
    }

    #[test]
    fn unique_and_multiple_examples() {
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 1).unwrap();
        let s = g.unique_and_multiple_neighbors(Side::Left, &[4]).unwrap();
        assert_eq!(s.unique, g.a_neighbors(4));
        assert!(s.multiple.is_empty());

        let c4 = four_cycle();
        let s = c4.unique_and_multiple_neighbors(Side::Left, &[0, 1]).unwrap();
        assert!(s.unique.is_empty());
        assert_eq!(s.multiple, vec![0, 1]);

        let k = k32();
        let s = k.unique_and_multiple_neighbors(Side::Left, &[0, 2]).unwrap();
        assert!(s.unique.is_empty());
        assert_eq!(s.multiple, vec![0, 1]);

        assert!(matches!(
            k.unique_and_multiple_neighbors(Side::Left, &[1, 1]),
            Err(GraphError::DuplicateVertex(1))
        ));
        assert!(k.unique_and_multiple_neighbors(Side::Right, &[2]).is_err());
    }

    #[test]
    fn edge_count_conservation() {
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 3).unwrap();
        for mask in 1u32..(1 << 12) {
            let s: Vec<usize> = (0..12).filter(|i| mask >> i & 1 == 1).collect();
            let counts = g.neighborhood_counts(Side::Left, &s).unwrap();
            let split = g.unique_and_multiple_neighbors(Side::Left, &s).unwrap();
            let multi_edges: usize = counts.iter().filter(|c| c.1 > 1).map(|c| c.1).sum();
            assert_eq!(g.delta_a() * s.len(), split.unique.len() + multi_edges);
            assert_eq!(split.unique.len() + split.multiple.len(), counts.len());
        }
    }

    #[test]
    fn expansion_examples() {
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 1).unwrap();
        let r = g
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 1.0 / 12.0, 0.0, 1))
            .unwrap();
        assert!(r.verified);
        assert_eq!(r.subsets_checked, 12);

        let c4 = four_cycle();
        let r = c4
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 1.0, 0.49, 2))
            .unwrap();
        assert!(!r.verified);
        assert_eq!(r.witness, Some(vec![0, 1]));
        let r = c4
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 1.0, 0.5, 2))
            .unwrap();
        assert!(r.verified);

        let k = k32();
        let r = k
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 2.0 / 3.0, 1.0 / 6.0, 10))
            .unwrap();
        assert_eq!(r.size_limit, 2);
        assert!(!r.verified);
        let w = r.witness.unwrap();
        assert_eq!(w, vec![0, 1]);
        assert!((k.neighborhood_counts(Side::Left, &w).unwrap().len() as f64) < (5.0 / 6.0) * 4.0);
    }

    #[test]
    fn exhaustive_witness_is_minimum_size() {
        // Find a graph with a violating pair and a violating triple, and make
        // sure the reported witness is the smallest one.
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 5).unwrap();
        let r = g
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 1.0, 0.2, 4))
            .unwrap();
        if let Some(w) = &r.witness {
            let profile = g.expansion_profile(Side::Left, 4, DEFAULT_SUBSET_CEILING).unwrap();
            for s in 1..w.len() {
                assert!(profile.min_neighbors[s - 1] as f64 >= 0.8 * 3.0 * s as f64 - 1e-9);
            }
            let gw = g.neighborhood_counts(Side::Left, w).unwrap().len();
            assert!((gw as f64) < 0.8 * 3.0 * w.len() as f64);
        }
    }

    #[test]
    fn sampled_mode_finds_forced_witness() {
        let c4 = four_cycle();
        let q = ExpansionQuery {
            mode: CheckMode::Sampled { samples: 4, seed: 9 },
            ..ExpansionQuery::exhaustive(Side::Left, 1.0, 0.25, 2)
        };
        let r = c4.check_expansion(&q).unwrap();
        assert_eq!(r.mode, CheckKind::Sampled);
        assert!(!r.verified);
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn infeasible_and_invalid_queries() {
        let g = BipartiteGraph::generate_biregular(40, 30, 3, 4, 1).unwrap();
        let q = ExpansionQuery {
            ceiling: 1000,
            ..ExpansionQuery::exhaustive(Side::Left, 1.0, 0.1, 5)
        };
        assert!(matches!(g.check_expansion(&q), Err(GraphError::Infeasible { .. })));
        assert!(g
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 0.0, 0.1, 5))
            .is_err());
        assert!(g
            .check_expansion(&ExpansionQuery::exhaustive(Side::Left, 0.5, 1.0, 5))
            .is_err());
    }

    #[test]
    fn profile_certification() {
        let c4 = four_cycle();
        let p = c4.expansion_profile(Side::Left, 2, DEFAULT_SUBSET_CEILING).unwrap();
        assert_eq!(p.min_neighbors, vec![2, 2]);
        assert!((p.delta_at(2) - 0.5).abs() < 1e-12);
        let c = p.certify_below(0.5);
        assert_eq!(c.size, 1);
        assert_eq!(c.delta, 0.0);
        let c = p.certify_below(0.6);
        assert_eq!(c.size, 2);
    }

    #[test]
    fn text_round_trip() {
        let g = BipartiteGraph::generate_biregular(12, 9, 3, 4, 1).unwrap();
        let text = g.to_text();
        assert_eq!(text.lines().count(), 13);
        let back = BipartiteGraph::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!(
            BipartiteGraph::from_text("2 2 2 2\n0 1\n0 0\n"),
            Err(GraphError::RepeatedNeighbor { .. })
        ));
        assert!(matches!(
            BipartiteGraph::from_text("2 2 2 2\n0 1\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            BipartiteGraph::from_text("2 2 2\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            BipartiteGraph::from_text("3 2 2 3\n0 1\n0 1\n0\n"),
            Err(GraphError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            BipartiteGraph::from_text("2 2 2 2\n0 x\n0 1\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }
}
