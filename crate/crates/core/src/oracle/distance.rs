//! Minimum distances by enumeration over subsets of increasing weight.

use serde::{Deserialize, Serialize};

use super::{Distance, OracleError, DEFAULT_ORACLE_CEILING};
use crate::code::{CssCode, ErrorType};
use crate::gf2::{Gf2SparseMatrix, Gf2Vector, RowSpace};
use crate::graph::binomial;

/// Bounds on a distance search: the largest weight to try and the total
/// number of subsets the search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub weight_cap: usize,
    pub ceiling: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            weight_cap: usize::MAX,
            ceiling: DEFAULT_ORACLE_CEILING,
        }
    }
}

impl SearchLimits {
    pub fn with_cap(weight_cap: usize) -> Self {
        Self {
            weight_cap,
            ..Self::default()
        }
    }
}

/// A distance together with a minimum-weight witness when one was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceSearch {
    pub distance: Distance,
    pub witness: Option<Vec<usize>>,
    /// For quantum distances, the error type of the witness.
    pub error_type: Option<ErrorType>,
}

/// Smallest `w ≤ max_weight` and the lexicographically first `w`-subset of
/// indices whose XOR of `vectors` is accepted.
pub(super) fn first_subset_by_weight(
    vectors: &[Gf2Vector],
    len: usize,
    max_weight: usize,
    ceiling: u128,
    accept: &dyn Fn(&Gf2Vector) -> bool,
) -> Result<Option<Vec<usize>>, OracleError> {
    fn walk(
        vectors: &[Gf2Vector],
        start: usize,
        left: usize,
        acc: &mut Gf2Vector,
        chosen: &mut Vec<usize>,
        accept: &dyn Fn(&Gf2Vector) -> bool,
    ) -> bool {
        if left == 0 {
            return accept(acc);
        }
        for i in start..=vectors.len() - left {
            *acc ^= &vectors[i];
            chosen.push(i);
            if walk(vectors, i + 1, left - 1, acc, chosen, accept) {
                *acc ^= &vectors[i];
                return true;
            }
            chosen.pop();
            *acc ^= &vectors[i];
        }
        false
    }

    let n = vectors.len();
    let mut spent: u128 = 0;
    let mut acc = Gf2Vector::zeros(len);
    let mut chosen = Vec::new();
    for w in 1..=max_weight.min(n) {
        spent = spent.saturating_add(binomial(n, w));
        if spent > ceiling {
            return Err(OracleError::Infeasible {
                needed: spent,
                ceiling,
            });
        }
        if walk(vectors, 0, w, &mut acc, &mut chosen, accept) {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

fn column_vectors(h: &Gf2SparseMatrix) -> Vec<Gf2Vector> {
    (0..h.cols())
        .map(|c| Gf2Vector::from_support(h.rows(), h.col(c)).expect("column in range"))
        .collect()
}

/// Minimum number of columns of `h` summing to zero.
pub fn classical_min_distance(h: &Gf2SparseMatrix, limits: SearchLimits) -> Result<DistanceSearch, OracleError> {
    let rank = h.rank();
    if rank == h.cols() {
        return Ok(DistanceSearch {
            distance: Distance::Infinite,
            witness: None,
            error_type: None,
        });
    }
    // Any rank + 1 columns are dependent.
    let cap = limits.weight_cap.min(rank + 1);
    let vectors = column_vectors(h);
    let found = first_subset_by_weight(&vectors, h.rows(), cap, limits.ceiling, &|acc| acc.is_zero())?;
    Ok(match found {
        Some(w) => DistanceSearch {
            distance: Distance::Finite(w.len()),
            witness: Some(w),
            error_type: None,
        },
        None => DistanceSearch {
            distance: Distance::GreaterThan(cap),
            witness: None,
            error_type: None,
        },
    })
}

/// Minimum number of rows of `h` summing to zero.
pub fn transpose_min_distance(h: &Gf2SparseMatrix, limits: SearchLimits) -> Result<DistanceSearch, OracleError> {
    classical_min_distance(&h.transpose(), limits)
}

/// Minimum weight of a logical operator of either type: a vector with zero
/// syndrome that is not a sum of generators.
pub fn quantum_min_distance(code: &CssCode, limits: SearchLimits) -> Result<DistanceSearch, OracleError> {
    if code.code_dimension() == 0 {
        return Ok(DistanceSearch {
            distance: Distance::Infinite,
            witness: None,
            error_type: None,
        });
    }
    let n = code.n();
    let cap = limits.weight_cap.min(n);
    let mut best = DistanceSearch {
        distance: Distance::GreaterThan(cap),
        witness: None,
        error_type: None,
    };
    for ty in ErrorType::BOTH {
        let checks = code.checks(ty);
        let rowspace = RowSpace::new(code.generators(ty));
        let m = checks.rows();
        // Each qubit maps to (its syndrome | its residue modulo generators).
        let vectors: Vec<Gf2Vector> = (0..n)
            .map(|q| {
                let unit = Gf2Vector::from_support(n, &[q]).expect("in range");
                let residue = rowspace.residue(&unit).expect("length n");
                let mut support: Vec<usize> = checks.col(q).to_vec();
                support.extend(residue.ones().map(|i| m + i));
                Gf2Vector::from_support(m + n, &support).expect("in range")
            })
            .collect();
        let layer_cap = match best.distance {
            Distance::Finite(d) => d - 1,
            _ => cap,
        };
        let found = first_subset_by_weight(&vectors, m + n, layer_cap, limits.ceiling, &|acc| {
            acc.first_one().is_some_and(|i| i >= m)
        })?;
        if let Some(w) = found {
            best = DistanceSearch {
                distance: Distance::Finite(w.len()),
                witness: Some(w),
                error_type: Some(ty),
            };
        }
    }
    Ok(best)
}
