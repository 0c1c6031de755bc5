//! Emission of the first-order instance attached to a change of derivation
//! basis. Nothing is evaluated: the document lists the transformed
//! derivations, the prolongation pairs under them, the `W`-generators and a
//! sentence skeleton over the language with `m + 1` derivation symbols.
//!
//! In the sentence, `d1 … dm` and `D` name `δ′_1 … δ′_m` and `D′`, and each
//! `W`-generator is embedded by sending block `b` to `D^b x̄`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rational::format_rational;
use crate::base_field::DerivationVector;
use crate::delta::{DeltaPoly, DerivOp, Indet};
use crate::geometry::{prolongation_system, GeometryError, VarietySystem};
use crate::transform::{make_transformed, transformed_ring, RationalMatrix, TransformError};

use super::json::{matrix_to_strings, System};
use super::print::{BlockNaming, Printer};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomInstanceDocument {
    pub matrix: Vec<Vec<String>>,
    /// `δ′_i` as coordinates over the basis derivations.
    pub deltas: Vec<Vec<String>>,
    pub d: Vec<String>,
    /// `(f_i, τ_{D′/Δ′} f_i)`.
    pub pairs: Vec<[String; 2]>,
    pub w: Vec<String>,
    pub sentence: String,
    pub caveat: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AxiomError {
    #[error("no matrix supplied")]
    MissingMatrix,
    #[error("V: {0}")]
    V(GeometryError),
    #[error("W: {0}")]
    W(GeometryError),
    #[error(transparent)]
    Matrix(#[from] TransformError),
}

fn vector_strings(v: &DerivationVector) -> Vec<String> {
    v.0.iter().map(format_rational).collect()
}

/// Rewrites a polynomial in blocks `x̄, ȳ, …` as one over the full
/// alphabet in block 0, `D` occupying the last operator slot.
pub fn embed_blocks(f: &DeltaPoly, m: usize) -> DeltaPoly {
    f.map_vars(|u| {
        let mut exps = u.op.exponents().to_vec();
        exps.push(u.block as u32);
        debug_assert_eq!(exps.len(), m + 1);
        Indet::new(0, u.var, DerivOp::from_exponents(exps))
    })
}

pub fn emit_axiom_instance(sys: &System) -> Result<AxiomInstanceDocument, AxiomError> {
    let matrix: &RationalMatrix = sys.matrix.as_ref().ok_or(AxiomError::MissingMatrix)?;
    let (deltas, d) = make_transformed(matrix, &sys.field)?;
    let ring = transformed_ring(matrix, sys.field.clone(), sys.ring.n())?;
    let v = VarietySystem::new(sys.polys.clone()).map_err(AxiomError::V)?;
    let w = VarietySystem::new(sys.w.clone()).map_err(AxiomError::W)?;
    let system = prolongation_system(&ring, &v);

    let names = sys.generators();
    let plain = Printer { generators: names, naming: BlockNaming::XY, d_slot: None };
    let m = ring.m();
    let full = Printer { generators: names, naming: BlockNaming::XY, d_slot: Some(m) };

    let mut atoms: Vec<String> = Vec::new();
    for f in v.generators().iter().chain(w.generators()) {
        let atom = format!("{} = 0", full.poly(&embed_blocks(f, m)));
        if !atoms.contains(&atom) {
            atoms.push(atom);
        }
    }
    let vars: Vec<String> = (1..=ring.n()).map(|j| format!("x{j}")).collect();
    let mut sentence = String::new();
    if !names.is_empty() {
        sentence.push_str(&format!("∀{} ", names.join(" ")));
    }
    sentence.push_str(&format!("∃{} ({})", vars.join(" "), atoms.join(" ∧ ")));

    Ok(AxiomInstanceDocument {
        matrix: matrix_to_strings(matrix),
        deltas: deltas.iter().map(vector_strings).collect(),
        d: vector_strings(&d),
        pairs: system.pairs.iter().map(|(f, t)| [plain.poly(f), plain.poly(t)]).collect(),
        w: w.generators().iter().map(|g| plain.poly(g)).collect(),
        sentence,
        caveat: system.caveat.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::json::SystemDocument;

    fn system(json: &str) -> System {
        SystemDocument::from_json(json).unwrap().resolve().unwrap()
    }

    #[test]
    fn identity_instance() {
        let sys = system(r#"{"m": 0, "n": 1, "polys": ["x1"], "w": ["x1", "y1"], "matrix": [["1"]]}"#);
        let doc = emit_axiom_instance(&sys).unwrap();
        assert_eq!(doc.pairs, vec![["x1".to_string(), "y1".to_string()]]);
        assert_eq!(doc.sentence, "∃x1 (x1 = 0 ∧ D x1 = 0)");
        assert_eq!(doc.d, vec!["1"]);
        assert!(doc.deltas.is_empty());
    }

    #[test]
    fn empty_w() {
        let sys = system(r#"{"m": 1, "n": 1, "polys": ["x1"], "matrix": [["1","0"],["0","1"]]}"#);
        assert_eq!(emit_axiom_instance(&sys), Err(AxiomError::W(GeometryError::EmptySystem)));
        let sys = system(r#"{"m": 1, "n": 1, "polys": ["x1"], "w": ["y1"]}"#);
        assert_eq!(emit_axiom_instance(&sys), Err(AxiomError::MissingMatrix));
    }

    #[test]
    fn swap_exchanges_roles() {
        // δ1 t = 1, D t = 0. Under the swap, D′ = δ1 and τ(x1 - t) = y1 - 1.
        let base = r#""base": {"generators": ["t"], "derivations": [{"t": "1"}, {}]}"#;
        let sys = system(&format!(
            r#"{{"m": 1, "n": 1, {base}, "polys": ["x1 - t", "d1 x1"], "w": ["y1 - 1"], "matrix": [["0","1"],["1","0"]]}}"#
        ));
        let doc = emit_axiom_instance(&sys).unwrap();
        assert_eq!(doc.deltas, vec![vec!["0", "1"]]);
        assert_eq!(doc.d, vec!["1", "0"]);
        assert_eq!(doc.pairs[0][1], "-1 + y1");
        assert_eq!(doc.pairs[1][1], "d1 y1");
        assert_eq!(doc.sentence, "∀t ∃x1 (-t + x1 = 0 ∧ d1 x1 = 0 ∧ -1 + D x1 = 0)");

        let id = system(&format!(
            r#"{{"m": 1, "n": 1, {base}, "polys": ["x1 - t"], "w": ["y1"], "matrix": [["1","0"],["0","1"]]}}"#
        ));
        assert_eq!(emit_axiom_instance(&id).unwrap().pairs[0][1], "y1");
    }
}
