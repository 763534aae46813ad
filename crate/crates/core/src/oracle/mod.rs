//! Brute-force reference implementations.
//!
//! Everything here is exponential on purpose and guarded by explicit
//! feasibility ceilings. The decoder and the harness are checked against
//! these functions, never the other way around.

mod classical;
mod coset;
mod critical;
mod distance;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::CodeError;
use crate::gf2::Gf2Error;

pub use classical::{classical_flip_decode, ClassicalDecodeResult};
pub use coset::{is_correctly_decoded, reduced_weight, CosetOracle};
pub use critical::{
    find_critical_generator, lemma8_flip, syndrome_partition, CriticalDecomposition, ExpansionParams,
    FlipCase, CriticalFlip, ReducedVariables, SyndromePartition,
};
pub use distance::{classical_min_distance, quantum_min_distance, transpose_min_distance, DistanceSearch, SearchLimits};

/// Default number of candidate subsets an oracle may visit before giving up.
pub const DEFAULT_ORACLE_CEILING: u128 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search needs {needed} candidates, above the ceiling of {ceiling}")]
    Infeasible { needed: u128, ceiling: u128 },
    #[error("the error set is empty")]
    EmptyErrorSet,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// A minimum distance. `Infinite` means no nonzero codeword exists;
/// `GreaterThan(w)` means none of weight at most `w` exists and the search
/// stopped at the requested cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Finite(usize),
    Infinite,
    GreaterThan(usize),
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// True when the distance is known to be at least `w`.
    pub fn is_at_least(self, w: usize) -> bool {
        match self {
            Distance::Finite(d) => d >= w,
            Distance::Infinite => true,
            Distance::GreaterThan(c) => c + 1 >= w,
        }
    }

    /// The smaller of two distances, keeping lower-bound information.
    pub fn min(self, other: Distance) -> Distance {
        use Distance::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), Infinite) | (Infinite, Finite(a)) => Finite(a),
            (Finite(a), GreaterThan(c)) | (GreaterThan(c), Finite(a)) => {
                if a <= c {
                    Finite(a)
                } else {
                    GreaterThan(c)
                }
            }
            (Infinite, Infinite) => Infinite,
            (Infinite, GreaterThan(c)) | (GreaterThan(c), Infinite) => GreaterThan(c),
            (GreaterThan(a), GreaterThan(b)) => GreaterThan(a.min(b)),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
            Distance::GreaterThan(c) => write!(f, ">{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Distance::*;

    #[test]
    fn distance_min_and_bounds() {
        assert_eq!(Finite(3).min(Infinite), Finite(3));
        assert_eq!(Finite(5).min(GreaterThan(4)), GreaterThan(4));
        assert_eq!(Finite(4).min(GreaterThan(4)), Finite(4));
        assert_eq!(Infinite.min(Infinite), Infinite);
        assert!(GreaterThan(4).is_at_least(5));
        assert!(!GreaterThan(4).is_at_least(6));
        assert!(Infinite.is_at_least(1000));
        assert_eq!(Finite(2).to_string(), "2");
        assert_eq!(Infinite.to_string(), "inf");
        assert_eq!(GreaterThan(7).to_string(), ">7");
    }
}
