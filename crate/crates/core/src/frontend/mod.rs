//! Text and JSON front end: parser, canonical printer, system documents and
//! the axiom-instance emitter.

pub mod axiom;
pub mod json;
pub mod parse;
pub mod print;

pub use parse::{parse_base_elem, parse_poly, DMode, ParseContext, ParseError, ParseErrorKind};
pub use print::{print_base_elem, print_poly, BlockNaming, Printer};
pub use json::{parse_matrix, DocumentError, System, SystemDocument};
pub use axiom::{emit_axiom_instance, AxiomError, AxiomInstanceDocument};
