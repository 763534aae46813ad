//! Reduced weight and decoding correctness modulo the generator group.

use std::sync::OnceLock;

use super::distance::first_subset_by_weight;
use super::{OracleError, DEFAULT_ORACLE_CEILING};
use crate::code::{CssCode, ErrorType};
use crate::gf2::{Gf2Vector, RowSpace};
use crate::graph::binomial;

/// Largest rowspace dimension for which the whole coset is enumerated.
const MAX_COSET_DIMENSION: usize = 24;

/// Precomputed rowspace of the generators acting trivially on one error
/// type, with the residue of every unit vector.
#[derive(Debug, Clone)]
pub struct CosetOracle {
    n: usize,
    rowspace: RowSpace,
    unit_residues: OnceLock<Vec<Gf2Vector>>,
    ceiling: u128,
}

impl CosetOracle {
    pub fn new(code: &CssCode, ty: ErrorType) -> Self {
        let n = code.n();
        Self {
            n,
            rowspace: RowSpace::new(code.generators(ty)),
            unit_residues: OnceLock::new(),
            ceiling: DEFAULT_ORACLE_CEILING,
        }
    }

    fn unit_residues(&self) -> &[Gf2Vector] {
        self.unit_residues.get_or_init(|| {
            (0..self.n)
                .map(|q| {
                    let unit = Gf2Vector::from_support(self.n, &[q]).expect("in range");
                    self.rowspace.residue(&unit).expect("length n")
                })
                .collect()
        })
    }

    pub fn with_ceiling(mut self, ceiling: u128) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn rowspace(&self) -> &RowSpace {
        &self.rowspace
    }

    fn check_len(&self, v: &Gf2Vector) -> Result<(), OracleError> {
        if v.len() != self.n {
            return Err(crate::gf2::Gf2Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            }
            .into());
        }
        Ok(())
    }

    /// True when `a ⊕ b` is a sum of generators.
    pub fn equivalent(&self, a: &Gf2Vector, b: &Gf2Vector) -> Result<bool, OracleError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut d = a.clone();
        d ^= b;
        Ok(self.rowspace.contains(&d)?)
    }

    /// A minimum-weight element of `e + rowspace`.
    pub fn minimum_representative(&self, e: &Gf2Vector) -> Result<Gf2Vector, OracleError> {
        self.check_len(e)?;
        let w = e.weight();
        if w == 0 {
            return Ok(e.clone());
        }
        let dim = self.rowspace.dim();
        let weight_search: u128 = (1..w).map(|k| binomial(self.n, k)).sum();
        if dim <= MAX_COSET_DIMENSION && (1u128 << dim) <= weight_search {
            return Ok(self.enumerate_coset(e));
        }
        self.weight_search(e)
    }

    /// Lightest vector with the same residue as `e`, searching weights
    /// below `|e|` in increasing order.
    fn weight_search(&self, e: &Gf2Vector) -> Result<Gf2Vector, OracleError> {
        let target = self.rowspace.residue(e)?;
        if target.is_zero() {
            return Ok(Gf2Vector::zeros(self.n));
        }
        let below = e.weight().saturating_sub(1);
        let found = first_subset_by_weight(self.unit_residues(), self.n, below, self.ceiling, &|acc| {
            *acc == target
        })?;
        Ok(match found {
            Some(support) => Gf2Vector::from_support(self.n, &support).expect("in range"),
            None => e.clone(),
        })
    }

    /// Gray-code walk over every element of the coset.
    fn enumerate_coset(&self, e: &Gf2Vector) -> Gf2Vector {
        let basis = self.rowspace.basis();
        let mut cur = e.clone();
        let mut best = e.clone();
        let mut best_w = e.weight();
        for step in 1u64..(1u64 << basis.len()) {
            cur ^= &basis[step.trailing_zeros() as usize];
            let w = cur.weight();
            if w < best_w {
                best_w = w;
                best = cur.clone();
            }
        }
        best
    }

    pub fn reduced_weight(&self, e: &Gf2Vector) -> Result<usize, OracleError> {
        Ok(self.minimum_representative(e)?.weight())
    }

    pub fn is_correctly_decoded(&self, e: &Gf2Vector, correction: &Gf2Vector) -> Result<bool, OracleError> {
        self.equivalent(e, correction)
    }
}

/// Smallest weight in `e + span(generators)`, where the generators are the
/// ones acting trivially on errors of type `ty`.
pub fn reduced_weight(code: &CssCode, e: &Gf2Vector, ty: ErrorType) -> Result<usize, OracleError> {
    CosetOracle::new(code, ty).reduced_weight(e)
}

/// True when `correction` equals `e` up to a sum of generators.
pub fn is_correctly_decoded(
    code: &CssCode,
    e: &Gf2Vector,
    correction: &Gf2Vector,
    ty: ErrorType,
) -> Result<bool, OracleError> {
    CosetOracle::new(code, ty).is_correctly_decoded(e, correction)
}
