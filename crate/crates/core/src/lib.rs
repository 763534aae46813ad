//! Small-set-flip decoding for hypergraph product codes of bipartite expanders.
//!
//! The crate builds hypergraph-product CSS codes from biregular bipartite
//! graphs, decodes X and Z errors with the small-set-flip decoder, and ships
//! brute-force oracles and a simulation harness used to check the decoder.

pub mod code;
pub mod decoder;
pub mod gf2;
pub mod graph;
pub mod harness;
pub mod oracle;

pub use code::{CodeError, CodeParameters, CssCode, ErrorPattern, ErrorType, Qubit, QubitKind};
pub use gf2::{DenseGf2Matrix, Gf2Error, Gf2SparseMatrix, Gf2Vector, RowSpace};
pub use graph::{BipartiteGraph, GraphError, Side};
pub use decoder::{
    best_flip_in_generator, decode, decode_side, DecodeResult, DecoderError, DecoderOptions, FlipCandidate,
    SmallSetFlipDecoder, TraceStep,
};
