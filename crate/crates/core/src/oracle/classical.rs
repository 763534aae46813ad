//! The classical bit-flip decoder on the graph's own code.

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::gf2::{Gf2Error, Gf2Vector};
use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalDecodeResult {
    pub success: bool,
    /// Bits on the `A` side to flip.
    pub correction: Vec<usize>,
    pub iterations: usize,
    pub residual_syndrome_weight: usize,
}

/// Repeatedly flips the lowest-index bit of `A` with more unsatisfied than
/// satisfied checks until the syndrome vanishes or no such bit remains.
/// `s` is indexed by `B`.
pub fn classical_flip_decode(graph: &BipartiteGraph, s: &Gf2Vector) -> Result<ClassicalDecodeResult, OracleError> {
    if s.len() != graph.n_b() {
        return Err(Gf2Error::DimensionMismatch {
            expected: graph.n_b(),
            found: s.len(),
        }
        .into());
    }
    let mut s = s.clone();
    let mut flipped = vec![false; graph.n_a()];
    let mut iterations = 0;
    loop {
        let pick = (0..graph.n_a()).find(|&a| {
            let unsat = graph.a_neighbors(a).iter().filter(|&&b| s.get(b)).count();
            2 * unsat > graph.a_neighbors(a).len()
        });
        let Some(a) = pick else { break };
        for &b in graph.a_neighbors(a) {
            s.flip(b);
        }
        flipped[a] = !flipped[a];
        iterations += 1;
    }
    let residual = s.weight();
    Ok(ClassicalDecodeResult {
        success: residual == 0,
        correction: (0..graph.n_a()).filter(|&a| flipped[a]).collect(),
        iterations,
        residual_syndrome_weight: residual,
    })
}
