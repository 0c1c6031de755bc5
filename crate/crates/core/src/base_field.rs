//! Concrete differential base fields `K = ℚ(g_1, …, g_p)`.
//!
//! A field carries `m + 1` commuting derivations, the last of which plays
//! the role of `D`. Each derivation is fixed by its values on the
//! generators and extended to all of `K` by the chain rule.

use std::fmt;

use thiserror::Error;

use crate::arith::{Coeff, RatFunc, Rational};

/// Elements of the base field.
pub type BaseElem = RatFunc;

/// Coefficients of a derivation over the basis `(δ_1, …, δ_m, D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivationVector(pub Vec<Rational>);

impl DerivationVector {
    pub fn basis(index: usize, len: usize) -> Self {
        DerivationVector(
            (0..len)
                .map(|i| if i == index { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A failing commutator: `δ_i(δ_j g) ≠ δ_j(δ_i g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReport {
    pub first: usize,
    pub second: usize,
    pub generator: String,
    /// `δ_first(δ_second g)`
    pub lhs: BaseElem,
    /// `δ_second(δ_first g)`
    pub rhs: BaseElem,
}

impl fmt::Display for CommutatorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "derivations {} and {} do not commute on generator {}",
            self.first + 1,
            self.second + 1,
            self.generator
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaseFieldError {
    #[error("invalid generator name {0:?}")]
    BadGeneratorName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("derivation table has {got} rows, expected at least 1")]
    NoDerivations { got: usize },
    #[error("derivation row {row} has {got} entries, expected {expected}")]
    RowLength { row: usize, got: usize, expected: usize },
    #[error("derivation table entry refers to generator index {0} outside the field")]
    ForeignGenerator(usize),
    #[error("{0}")]
    NotCommuting(CommutatorReport),
}

/// Names that would collide with the polynomial grammar.
fn reserved(name: &str) -> bool {
    let is_indexed = |prefix: char| {
        name.starts_with(prefix)
            && name.len() > 1
            && name[1..].chars().all(|c| c.is_ascii_digit() || c == '_')
    };
    name == "D" || is_indexed('x') || is_indexed('y') || is_indexed('d')
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !reserved(name)
}

#[derive(Clone, Debug)]
pub struct BaseField {
    generators: Vec<String>,
    /// `tables[d][g]` is the value of derivation `d` on generator `g`.
    tables: Vec<Vec<BaseElem>>,
}

impl BaseField {
    /// Builds the field and eagerly verifies that all derivations commute.
    pub fn new(generators: Vec<String>, tables: Vec<Vec<BaseElem>>) -> Result<Self, BaseFieldError> {
        let field = Self::unchecked(generators, tables)?;
        check_commutativity(&field).map_err(BaseFieldError::NotCommuting)?;
        Ok(field)
    }

    /// The field ℚ with `derivations` zero derivations.
    pub fn rationals(derivations: usize) -> Self {
        BaseField { generators: Vec::new(), tables: vec![Vec::new(); derivations.max(1)] }
    }

    /// ℚ(t_1, …, t_p) with `derivations` basis derivations, the `i`-th being
    /// `∂/∂t_i` (zero once `i > p`).
    pub fn partials(names: &[&str], derivations: usize) -> Self {
        let p = names.len();
        let tables = (0..derivations)
            .map(|d| {
                (0..p)
                    .map(|g| if g == d { RatFunc::one() } else { RatFunc::zero() })
                    .collect()
            })
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), tables)
            .expect("partial derivatives commute")
    }

    /// Builds the field without the commutator check. Shape and names are
    /// still validated.
    pub fn unchecked(generators: Vec<String>, tables: Vec<Vec<BaseElem>>) -> Result<Self, BaseFieldError> {
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(g) {
                return Err(BaseFieldError::BadGeneratorName(g.clone()));
            }
            if generators[..i].contains(g) {
                return Err(BaseFieldError::DuplicateGenerator(g.clone()));
            }
        }
        if tables.is_empty() {
            return Err(BaseFieldError::NoDerivations { got: 0 });
        }
        for (row, r) in tables.iter().enumerate() {
            if r.len() != generators.len() {
                return Err(BaseFieldError::RowLength { row, got: r.len(), expected: generators.len() });
            }
            for e in r {
                if let Some(&g) = e.generators().iter().find(|&&g| g >= generators.len()) {
                    return Err(BaseFieldError::ForeignGenerator(g));
                }
            }
        }
        Ok(BaseField { generators, tables })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Total number of derivations, `m + 1`.
    pub fn num_derivations(&self) -> usize {
        self.tables.len()
    }

    /// Index of `D` among the basis derivations.
    pub fn d_index(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn table(&self, derivation: usize) -> &[BaseElem] {
        &self.tables[derivation]
    }

    pub fn basis_vector(&self, derivation: usize) -> DerivationVector {
        DerivationVector::basis(derivation, self.num_derivations())
    }

    pub fn d_vector(&self) -> DerivationVector {
        self.basis_vector(self.d_index())
    }

    /// Values of the derivation `d` on each generator.
    pub fn generator_images(&self, d: &DerivationVector) -> Vec<BaseElem> {
        assert_eq!(d.len(), self.num_derivations(), "derivation vector length");
        (0..self.generators.len())
            .map(|g| {
                d.0.iter().enumerate().fold(RatFunc::zero(), |acc, (row, c)| {
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add(&self.tables[row][g].mul(&RatFunc::rational(c.clone())))
                    }
                })
            })
            .collect()
    }

    /// Chain rule: `d(e) = Σ_j ∂e/∂g_j · d(g_j)`.
    pub fn derive(&self, e: &BaseElem, d: &DerivationVector) -> BaseElem {
        derive_with_images(e, &self.generator_images(d))
    }

    pub fn derive_basis(&self, e: &BaseElem, derivation: usize) -> BaseElem {
        derive_with_images(e, &self.tables[derivation])
    }

    pub fn is_d_constant(&self, e: &BaseElem) -> bool {
        self.derive_basis(e, self.d_index()).is_zero()
    }

    /// The field with the same generators whose basis derivations are the
    /// given combinations of the current ones. Commutativity is inherited.
    pub fn with_derivations(&self, vectors: &[DerivationVector]) -> BaseField {
        let tables = vectors.iter().map(|v| self.generator_images(v)).collect();
        BaseField { generators: self.generators.clone(), tables }
    }
}

pub(crate) fn derive_with_images(e: &BaseElem, images: &[BaseElem]) -> BaseElem {
    let mut acc = RatFunc::zero();
    for g in e.generators() {
        let img = &images[g];
        if img.is_zero() {
            continue;
        }
        acc = acc.add(&e.partial(g).mul(img));
    }
    acc
}

/// Checks `δ_i(δ_j g) = δ_j(δ_i g)` for every pair of derivations and every
/// generator. This suffices because a commutator of derivations is a
/// derivation, and one vanishing on generators vanishes everywhere.
pub fn check_commutativity(field: &BaseField) -> Result<(), CommutatorReport> {
    let k = field.num_derivations();
    for i in 0..k {
        for j in i + 1..k {
            for (g, name) in field.generators.iter().enumerate() {
                let lhs = field.derive_basis(&field.tables[j][g], i);
                let rhs = field.derive_basis(&field.tables[i][g], j);
                if lhs != rhs {
                    return Err(CommutatorReport { first: i, second: j, generator: name.clone(), lhs, rhs });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::arith::Field;

    fn c(n: i64) -> RatFunc {
        RatFunc::rational(int(n))
    }

    #[test]
    fn chain_rule_examples() {
        let k = BaseField::partials(&["t"], 2);
        let t = RatFunc::generator(0);
        let d1 = k.basis_vector(0);
        assert_eq!(k.derive(&t, &d1), c(1));
        assert_eq!(k.derive(&t.mul(&t), &d1), c(2).mul(&t));
        assert_eq!(k.derive(&c(1).div(&t), &d1), c(-1).div(&t.mul(&t)));
    }

    #[test]
    fn commutativity_examples() {
        let k = BaseField::partials(&["t1", "t2"], 3);
        assert!(check_commutativity(&k).is_ok());

        // δ1 t1 = t2, δ1 t2 = 0, δ2 t1 = 0, δ2 t2 = t1
        let (t1, t2) = (RatFunc::generator(0), RatFunc::generator(1));
        let tables = vec![vec![t2.clone(), c(0)], vec![c(0), t1.clone()]];
        let names = vec!["t1".to_string(), "t2".to_string()];
        let err = BaseField::new(names.clone(), tables.clone()).unwrap_err();
        let BaseFieldError::NotCommuting(report) = err else { panic!("expected commutator failure") };
        assert_eq!(report.generator, "t1");
        assert_eq!((report.first, report.second), (0, 1));
        // δ1(δ2 t1) = 0, δ2(δ1 t1) = δ2 t2 = t1
        assert_eq!(report.lhs, c(0));
        assert_eq!(report.rhs, t1);

        let single = BaseField::new(names, vec![vec![t2, c(0)]]).unwrap();
        assert!(check_commutativity(&single).is_ok());
    }

    #[test]
    fn d_constants() {
        let k = BaseField::partials(&["t"], 1);
        assert!(k.is_d_constant(&c(7)));
        assert!(!k.is_d_constant(&RatFunc::generator(0)));

        // D t1 = 0, D t2 = 1
        let two = BaseField::new(
            vec!["t1".into(), "t2".into()],
            vec![vec![c(1), c(0)], vec![c(0), c(1)]],
        )
        .unwrap();
        assert!(two.is_d_constant(&RatFunc::generator(0)));
        assert!(!two.is_d_constant(&RatFunc::generator(1)));
    }

    #[test]
    fn names_are_validated() {
        for bad in ["x1", "y2", "d1", "D", "1t", "x1_2", ""] {
            assert!(BaseField::unchecked(vec![bad.into()], vec![vec![c(0)]]).is_err(), "{bad}");
        }
        assert!(BaseField::unchecked(vec!["x".into(), "dt".into(), "Dt".into()], vec![vec![c(0), c(0), c(0)]]).is_ok());
    }
}
