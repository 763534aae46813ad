//! The hypergraph-product CSS code built from a single bipartite graph.
//!
//! Qubits are `A² ∪ B²`. A pair `(α, a) ∈ A²` has flat index `α·n_a + a`; a
//! pair `(b, β) ∈ B²` has flat index `n_a² + b·n_b + β`. X-checks are indexed
//! by `(α, β) ∈ A×B` in row-major order, Z-generators by `(b, a) ∈ B×A`.
//!
//! With `H` the `n_b × n_a` incidence matrix of the graph this gives
//! `H_X = (1 ⊗ H | Hᵀ ⊗ 1)` and `H_Z = (H ⊗ 1 | 1 ⊗ Hᵀ)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{Gf2Error, Gf2SparseMatrix, Gf2Vector};
use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("index ({first}, {second}) out of range for a {rows}x{cols} grid")]
    IndexOutOfRange {
        first: usize,
        second: usize,
        rows: usize,
        cols: usize,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Which Pauli component is being handled. X errors are detected by `H_X`
/// and corrected with Z-generators; Z errors the other way around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorType {
    X,
    Z,
}

impl ErrorType {
    pub const BOTH: [ErrorType; 2] = [ErrorType::X, ErrorType::Z];
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorType::X => "X",
            ErrorType::Z => "Z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitKind {
    AA,
    BB,
}

/// A qubit named by its pair of graph vertices: `(α, a)` for `AA`, `(b, β)`
/// for `BB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Qubit {
    pub kind: QubitKind,
    pub first: usize,
    pub second: usize,
}

impl Qubit {
    pub fn aa(alpha: usize, a: usize) -> Self {
        Self {
            kind: QubitKind::AA,
            first: alpha,
            second: a,
        }
    }

    pub fn bb(b: usize, beta: usize) -> Self {
        Self {
            kind: QubitKind::BB,
            first: b,
            second: beta,
        }
    }
}

/// Sizes and rate of a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n_a: usize,
    pub n_b: usize,
    pub delta_a: usize,
    pub delta_b: usize,
    pub n: usize,
    pub k: usize,
    pub row_weight: usize,
}

#[derive(Clone)]
pub struct CssCode {
    graph: BipartiteGraph,
    h_x: Gf2SparseMatrix,
    h_z: Gf2SparseMatrix,
}

impl fmt::Debug for CssCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CssCode")
            .field("n_a", &self.graph.n_a())
            .field("n_b", &self.graph.n_b())
            .field("n", &self.n())
            .finish()
    }
}

impl CssCode {
    /// Builds the hypergraph product of `graph` with itself.
    pub fn hypergraph_product(graph: BipartiteGraph) -> Self {
        let (n_a, n_b) = (graph.n_a(), graph.n_b());
        let bb = |b: usize, beta: usize| n_a * n_a + b * n_b + beta;

        // X-check (α, β): {(α, a) : a ~ β} ∪ {(b, β) : b ~ α}.
        let mut x_rows = Vec::with_capacity(n_a * n_b);
        for alpha in 0..n_a {
            for beta in 0..n_b {
                let mut row: Vec<usize> = graph
                    .b_neighbors(beta)
                    .iter()
                    .map(|&a| alpha * n_a + a)
                    .collect();
                row.extend(graph.a_neighbors(alpha).iter().map(|&b| bb(b, beta)));
                x_rows.push(row);
            }
        }
        // Z-generator (b, a): {(α, a) : α ~ b} ∪ {(b, β) : β ~ a}.
        let mut z_rows = Vec::with_capacity(n_a * n_b);
        for b in 0..n_b {
            for a in 0..n_a {
                let mut row: Vec<usize> = graph
                    .b_neighbors(b)
                    .iter()
                    .map(|&alpha| alpha * n_a + a)
                    .collect();
                row.extend(graph.a_neighbors(a).iter().map(|&beta| bb(b, beta)));
                z_rows.push(row);
            }
        }
        let n = n_a * n_a + n_b * n_b;
        let h_x = Gf2SparseMatrix::from_row_supports(n, x_rows).expect("sorted by construction");
        let h_z = Gf2SparseMatrix::from_row_supports(n, z_rows).expect("sorted by construction");
        Self { graph, h_x, h_z }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.h_x.cols()
    }

    pub fn h_x(&self) -> &Gf2SparseMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &Gf2SparseMatrix {
        &self.h_z
    }

    /// `Δ_A + Δ_B`, the weight of every check and generator.
    pub fn row_weight(&self) -> usize {
        self.graph.delta_a() + self.graph.delta_b()
    }

    /// The matrix whose syndrome reveals errors of type `ty`.
    pub fn checks(&self, ty: ErrorType) -> &Gf2SparseMatrix {
        match ty {
            ErrorType::X => &self.h_x,
            ErrorType::Z => &self.h_z,
        }
    }

    /// The generators that act trivially on errors of type `ty`.
    pub fn generators(&self, ty: ErrorType) -> &Gf2SparseMatrix {
        match ty {
            ErrorType::X => &self.h_z,
            ErrorType::Z => &self.h_x,
        }
    }

    pub fn qubit_index(&self, q: Qubit) -> Result<usize, CodeError> {
        let (n_a, n_b) = (self.graph.n_a(), self.graph.n_b());
        let side = match q.kind {
            QubitKind::AA => n_a,
            QubitKind::BB => n_b,
        };
        if q.first >= side || q.second >= side {
            return Err(CodeError::IndexOutOfRange {
                first: q.first,
                second: q.second,
                rows: side,
                cols: side,
            });
        }
        Ok(match q.kind {
            QubitKind::AA => q.first * n_a + q.second,
            QubitKind::BB => n_a * n_a + q.first * n_b + q.second,
        })
    }

    pub fn qubit(&self, flat: usize) -> Qubit {
        let (n_a, n_b) = (self.graph.n_a(), self.graph.n_b());
        assert!(flat < self.n(), "qubit {flat} out of range");
        if flat < n_a * n_a {
            Qubit::aa(flat / n_a, flat % n_a)
        } else {
            let r = flat - n_a * n_a;
            Qubit::bb(r / n_b, r % n_b)
        }
    }

    pub fn x_check_index(&self, alpha: usize, beta: usize) -> Result<usize, CodeError> {
        let (n_a, n_b) = (self.graph.n_a(), self.graph.n_b());
        if alpha >= n_a || beta >= n_b {
            return Err(CodeError::IndexOutOfRange {
                first: alpha,
                second: beta,
                rows: n_a,
                cols: n_b,
            });
        }
        Ok(alpha * n_b + beta)
    }

    /// `(α, β)` of an X-check row.
    pub fn x_check(&self, row: usize) -> (usize, usize) {
        (row / self.graph.n_b(), row % self.graph.n_b())
    }

    pub fn z_generator_index(&self, b: usize, a: usize) -> Result<usize, CodeError> {
        let (n_a, n_b) = (self.graph.n_a(), self.graph.n_b());
        if b >= n_b || a >= n_a {
            return Err(CodeError::IndexOutOfRange {
                first: b,
                second: a,
                rows: n_b,
                cols: n_a,
            });
        }
        Ok(b * n_a + a)
    }

    /// `(b, a)` of a Z-generator row.
    pub fn z_generator(&self, row: usize) -> (usize, usize) {
        (row / self.graph.n_a(), row % self.graph.n_a())
    }

    /// Support of `g_ba = {αa : α ~ b} ∪ {bβ : β ~ a}`, sorted by flat index.
    pub fn z_generator_support(&self, b: usize, a: usize) -> Result<Vec<Qubit>, CodeError> {
        let row = self.z_generator_index(b, a)?;
        Ok(self.h_z.row(row).iter().map(|&q| self.qubit(q)).collect())
    }

    /// Support of `g_αβ = {αa : a ~ β} ∪ {bβ : b ~ α}`, sorted by flat index.
    pub fn x_check_support(&self, alpha: usize, beta: usize) -> Result<Vec<Qubit>, CodeError> {
        let row = self.x_check_index(alpha, beta)?;
        Ok(self.h_x.row(row).iter().map(|&q| self.qubit(q)).collect())
    }

    pub fn syndrome_x(&self, e_x: &Gf2Vector) -> Result<Gf2Vector, CodeError> {
        Ok(self.h_x.mat_vec(e_x)?)
    }

    pub fn syndrome_z(&self, e_z: &Gf2Vector) -> Result<Gf2Vector, CodeError> {
        Ok(self.h_z.mat_vec(e_z)?)
    }

    pub fn syndrome(&self, ty: ErrorType, e: &Gf2Vector) -> Result<Gf2Vector, CodeError> {
        Ok(self.checks(ty).mat_vec(e)?)
    }

    /// `k = n - rank(H_X) - rank(H_Z)`, computed exactly.
    pub fn code_dimension(&self) -> usize {
        self.n() - self.h_x.rank() - self.h_z.rank()
    }

    /// The lower bound `(n_a - n_b)²` on the dimension.
    pub fn dimension_lower_bound(&self) -> usize {
        let d = self.graph.n_a().abs_diff(self.graph.n_b());
        d * d
    }

    pub fn parameters(&self) -> CodeParameters {
        CodeParameters {
            n_a: self.graph.n_a(),
            n_b: self.graph.n_b(),
            delta_a: self.graph.delta_a(),
            delta_b: self.graph.delta_b(),
            n: self.n(),
            k: self.code_dimension(),
            row_weight: self.row_weight(),
        }
    }
}

/// A pair `(e_X, e_Z)` over the same qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPattern {
    pub e_x: Gf2Vector,
    pub e_z: Gf2Vector,
}

impl ErrorPattern {
    pub fn new(e_x: Gf2Vector, e_z: Gf2Vector) -> Result<Self, CodeError> {
        if e_x.len() != e_z.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: e_x.len(),
                found: e_z.len(),
            }
            .into());
        }
        Ok(Self { e_x, e_z })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            e_x: Gf2Vector::zeros(n),
            e_z: Gf2Vector::zeros(n),
        }
    }

    pub fn component(&self, ty: ErrorType) -> &Gf2Vector {
        match ty {
            ErrorType::X => &self.e_x,
            ErrorType::Z => &self.e_z,
        }
    }

    /// Number of qubits hit by an X error, a Z error, or both.
    pub fn weight(&self) -> usize {
        self.e_x
            .words()
            .iter()
            .zip(self.e_z.words())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }
}
