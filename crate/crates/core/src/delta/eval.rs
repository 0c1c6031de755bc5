//! Evaluation homomorphisms `f ↦ f(ā)` into concrete Δ-rings.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::Coeff;
use crate::base_field::BaseElem;

use super::indet::Indet;
use super::ring::{DeltaPoly, DeltaRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no value assigned to variable {var} of block {block}")]
    Unassigned { block: usize, var: usize },
    #[error("evaluation is singular: {0}")]
    Singular(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },
}

/// A concrete Δ-ring receiving evaluations. `derive(e, i)` is the action of
/// the `i`-th structural derivation of the source ring.
pub trait DeltaTarget {
    type Elem: Clone;

    fn embed(&self, c: &BaseElem) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn derive(&self, e: &Self::Elem, i: usize) -> Self::Elem;
}

/// The base field of a ring, with `Δ` acting as in the ring.
#[derive(Clone, Copy, Debug)]
pub struct FieldTarget<'a> {
    pub ring: &'a DeltaRing,
}

impl DeltaTarget for FieldTarget<'_> {
    type Elem = BaseElem;

    fn embed(&self, c: &BaseElem) -> BaseElem {
        c.clone()
    }
    fn zero(&self) -> BaseElem {
        BaseElem::zero()
    }
    fn add(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.add(b)
    }
    fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.mul(b)
    }
    fn derive(&self, e: &BaseElem, i: usize) -> BaseElem {
        self.ring.delta_base(e, i)
    }
}

/// A Δ-polynomial ring as target: substitution of Δ-polynomials.
impl DeltaTarget for DeltaRing {
    type Elem = DeltaPoly;

    fn embed(&self, c: &BaseElem) -> DeltaPoly {
        DeltaPoly::constant(c.clone())
    }
    fn zero(&self) -> DeltaPoly {
        DeltaPoly::zero()
    }
    fn add(&self, a: &DeltaPoly, b: &DeltaPoly) -> DeltaPoly {
        a + b
    }
    fn mul(&self, a: &DeltaPoly, b: &DeltaPoly) -> DeltaPoly {
        a * b
    }
    fn derive(&self, e: &DeltaPoly, i: usize) -> DeltaPoly {
        self.apply_delta(i, e)
    }
}

/// Evaluates `f` with `θ x_j` of block `b` sent to `θ(assign(b, j))`.
///
/// Derivatives of the assigned values are computed in the target and
/// memoized per call.
pub fn evaluate_with<T: DeltaTarget>(
    target: &T,
    f: &DeltaPoly,
    mut assign: impl FnMut(usize, usize) -> Option<T::Elem>,
) -> Result<T::Elem, EvalError> {
    let mut memo: BTreeMap<Indet, T::Elem> = BTreeMap::new();
    let mut acc = target.zero();
    for (mono, c) in f.terms() {
        let mut term = target.embed(c);
        for (u, e) in mono.powers() {
            let v = value_of(target, u, &mut memo, &mut assign)?;
            for _ in 0..*e {
                term = target.mul(&term, &v);
            }
        }
        acc = target.add(&acc, &term);
    }
    Ok(acc)
}

fn value_of<T: DeltaTarget>(
    target: &T,
    u: &Indet,
    memo: &mut BTreeMap<Indet, T::Elem>,
    assign: &mut impl FnMut(usize, usize) -> Option<T::Elem>,
) -> Result<T::Elem, EvalError> {
    if let Some(v) = memo.get(u) {
        return Ok(v.clone());
    }
    let v = match u.op.exponents().iter().position(|&r| r > 0) {
        None => assign(u.block, u.var).ok_or(EvalError::Unassigned { block: u.block, var: u.var })?,
        Some(i) => {
            let lower = Indet::new(u.block, u.var, u.op.lower(i).expect("positive exponent"));
            let inner = value_of(target, &lower, memo, assign)?;
            target.derive(&inner, i)
        }
    };
    memo.insert(u.clone(), v.clone());
    Ok(v)
}

/// `f(ā)` for a polynomial in block 0 only.
pub fn evaluate<T: DeltaTarget>(target: &T, f: &DeltaPoly, point: &[T::Elem]) -> Result<T::Elem, EvalError> {
    evaluate_with(target, f, |block, var| if block == 0 { point.get(var).cloned() } else { None })
}

/// `f(ā, b̄)` with block 0 sent to `ā` and block 1 to `b̄`.
pub fn evaluate_pair<T: DeltaTarget>(
    target: &T,
    f: &DeltaPoly,
    a: &[T::Elem],
    b: &[T::Elem],
) -> Result<T::Elem, EvalError> {
    evaluate_with(target, f, |block, var| match block {
        0 => a.get(var).cloned(),
        1 => b.get(var).cloned(),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arith::rational::int;
    use crate::base_field::BaseField;

    #[test]
    fn evaluate_examples() {
        let k = Arc::new(BaseField::partials(&["t"], 2));
        let r = DeltaRing::new(k, 1);
        let t = BaseElem::generator(0);
        let target = FieldTarget { ring: &r };

        let f = r.jet(0, 0, &[1]);
        let v = evaluate(&target, &f, &[t.mul(&t)]).unwrap();
        assert_eq!(v, BaseElem::rational(int(2)).mul(&t));

        let zero = &r.x(0) - &r.x(0);
        assert!(evaluate(&target, &zero, &[t.clone()]).unwrap().is_zero());

        let f = r.x(0).scale(&t);
        assert_eq!(evaluate(&target, &f, &[BaseElem::one()]).unwrap(), t);

        assert_eq!(
            evaluate(&target, &r.y(0), &[t.clone()]),
            Err(EvalError::Unassigned { block: 1, var: 0 })
        );
    }

    #[test]
    fn substitution_into_a_ring() {
        let k = Arc::new(BaseField::rationals(3));
        let r = DeltaRing::new(k, 1);
        // x ↦ x², so δ1 x ↦ 2 x δ1x
        let f = r.jet(0, 0, &[1, 0]);
        let image = evaluate(&r, &f, &[r.x(0).pow(2)]).unwrap();
        assert_eq!(image, (&r.x(0) * &r.jet(0, 0, &[1, 0])).scale(&BaseElem::rational(int(2))));
    }
}
