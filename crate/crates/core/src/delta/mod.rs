//! Δ-polynomials: derivative operators, the orderly ranking, structural
//! derivations and evaluation.

pub mod eval;
pub mod indet;
pub mod ring;

pub use eval::{evaluate, evaluate_pair, evaluate_with, DeltaTarget, EvalError, FieldTarget};
pub use indet::{ContextMismatch, DerivOp, Indet, Ranking};
pub use ring::{rename_block, AlgebraicView, DeltaPoly, DeltaRing};
