//! The Δ-polynomial ring `K{x̄} = K[θx̄]` over a concrete base field.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{Coeff, Poly, Rational};
use crate::base_field::{derive_with_images, BaseElem, BaseField, DerivationVector};

use super::indet::{ContextMismatch, DerivOp, Indet, Ranking};

/// A Δ-polynomial. Monomials are multisets of [`Indet`]; coefficients are
/// base-field elements.
pub type DeltaPoly = Poly<Indet, BaseElem>;

/// Ring handle: the base field, the number `n` of differential
/// indeterminates, and the derivations acting as `Δ` and as `D`.
///
/// The handle is cheap to clone; values of [`DeltaPoly`] carry no context.
#[derive(Clone, Debug)]
pub struct DeltaRing {
    field: Arc<BaseField>,
    n: usize,
    deltas: Vec<DerivationVector>,
    d: DerivationVector,
    delta_images: Vec<Vec<BaseElem>>,
    d_images: Vec<BaseElem>,
}

/// `f̂` together with the indeterminates substituted for `t_1, t_2, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicView {
    pub poly: Poly<usize, BaseElem>,
    pub support: Vec<Indet>,
}

impl AlgebraicView {
    /// Substitutes the support back into `f̂`.
    pub fn reconstruct(&self) -> DeltaPoly {
        self.poly.map_vars(|&k| self.support[k].clone())
    }
}

impl DeltaRing {
    /// `Δ` is the first `m` basis derivations of the field and `D` the last.
    pub fn new(field: Arc<BaseField>, n: usize) -> Self {
        let k = field.num_derivations();
        let deltas = (0..k - 1).map(|i| field.basis_vector(i)).collect();
        let d = field.d_vector();
        Self::with_derivations(field, n, deltas, d)
    }

    /// Every basis derivation, `D` included, acts structurally. This is the
    /// ring of jets over the full alphabet `Δ ∪ {D}`.
    pub fn full(field: Arc<BaseField>, n: usize) -> Self {
        let k = field.num_derivations();
        let deltas = (0..k).map(|i| field.basis_vector(i)).collect();
        let d = field.d_vector();
        Self::with_derivations(field, n, deltas, d)
    }

    pub fn with_derivations(
        field: Arc<BaseField>,
        n: usize,
        deltas: Vec<DerivationVector>,
        d: DerivationVector,
    ) -> Self {
        let delta_images = deltas.iter().map(|v| field.generator_images(v)).collect();
        let d_images = field.generator_images(&d);
        DeltaRing { field, n, deltas, d, delta_images, d_images }
    }

    pub fn field(&self) -> &Arc<BaseField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of structural derivations.
    pub fn m(&self) -> usize {
        self.deltas.len()
    }

    pub fn deltas(&self) -> &[DerivationVector] {
        &self.deltas
    }

    pub fn d(&self) -> &DerivationVector {
        &self.d
    }

    pub fn ranking(&self) -> Ranking {
        Ranking::new(self.n, self.m())
    }

    pub fn check(&self, f: &DeltaPoly) -> Result<(), ContextMismatch> {
        let r = self.ranking();
        f.variables().iter().try_for_each(|u| r.validate(u))
    }

    // -- constructors ----------------------------------------------------

    pub fn identity_op(&self) -> DerivOp {
        DerivOp::identity(self.m())
    }

    pub fn indet(&self, block: usize, var: usize, exponents: &[u32]) -> Indet {
        assert_eq!(exponents.len(), self.m(), "operator length");
        Indet::new(block, var, DerivOp::from_exponents(exponents.to_vec()))
    }

    /// The order-zero indeterminate `x_var` of block 0.
    pub fn x(&self, var: usize) -> DeltaPoly {
        DeltaPoly::var(Indet::base(var, self.m()))
    }

    /// The order-zero indeterminate `y_var` (block 1).
    pub fn y(&self, var: usize) -> DeltaPoly {
        DeltaPoly::var(Indet::new(1, var, self.identity_op()))
    }

    pub fn jet(&self, block: usize, var: usize, exponents: &[u32]) -> DeltaPoly {
        DeltaPoly::var(self.indet(block, var, exponents))
    }

    pub fn constant(&self, c: BaseElem) -> DeltaPoly {
        DeltaPoly::constant(c)
    }

    pub fn rational(&self, q: Rational) -> DeltaPoly {
        DeltaPoly::constant(BaseElem::rational(q))
    }

    // -- derivations -----------------------------------------------------

    pub fn derive_base(&self, e: &BaseElem, d: &DerivationVector) -> BaseElem {
        self.field.derive(e, d)
    }

    pub fn delta_base(&self, e: &BaseElem, i: usize) -> BaseElem {
        derive_with_images(e, &self.delta_images[i])
    }

    pub fn d_base(&self, e: &BaseElem) -> BaseElem {
        derive_with_images(e, &self.d_images)
    }

    pub(crate) fn coeff_images(&self, d: &DerivationVector) -> Vec<BaseElem> {
        self.field.generator_images(d)
    }

    pub(crate) fn d_images(&self) -> &[BaseElem] {
        &self.d_images
    }

    /// `f^d`: applies `d` to every coefficient, indeterminates fixed.
    pub fn coeff_derive(&self, f: &DeltaPoly, d: &DerivationVector) -> DeltaPoly {
        coeff_derive_with(f, &self.coeff_images(d))
    }

    /// `f^{δ_i}`.
    pub fn coeff_delta(&self, f: &DeltaPoly, i: usize) -> DeltaPoly {
        coeff_derive_with(f, &self.delta_images[i])
    }

    /// `f^D`.
    pub fn coeff_d(&self, f: &DeltaPoly) -> DeltaPoly {
        coeff_derive_with(f, &self.d_images)
    }

    /// The derivation acting as `on_indet` on indeterminates and through
    /// the generator images `coeff_images` on coefficients.
    pub fn derive_with(
        &self,
        f: &DeltaPoly,
        mut on_indet: impl FnMut(&Indet) -> DeltaPoly,
        coeff_images: &[BaseElem],
    ) -> DeltaPoly {
        let mut cache: BTreeMap<Indet, DeltaPoly> = BTreeMap::new();
        let mut out = coeff_derive_with(f, coeff_images);
        for (mono, c) in f.terms() {
            for (u, e) in mono.powers() {
                let image = cache.entry(u.clone()).or_insert_with(|| on_indet(u));
                if image.is_zero() {
                    continue;
                }
                let (_, rest) = mono.without_one(u).expect("variable occurs");
                let scale = c.mul(&BaseElem::rational(Rational::from_integer((*e).into())));
                out.add_scaled(image, &scale, &rest);
            }
        }
        out
    }

    /// Structural `δ_i f`: Leibniz on indeterminates plus `f^{δ_i}`.
    pub fn apply_delta(&self, i: usize, f: &DeltaPoly) -> DeltaPoly {
        assert!(i < self.m(), "derivation index {} out of range (m = {})", i + 1, self.m());
        self.derive_with(f, |u| DeltaPoly::var(u.bump(i)), &self.delta_images[i])
    }

    /// `θ f` for an operator over the structural alphabet.
    pub fn apply_op(&self, op: &DerivOp, f: &DeltaPoly) -> DeltaPoly {
        let mut out = f.clone();
        for (i, &r) in op.exponents().iter().enumerate() {
            for _ in 0..r {
                out = self.apply_delta(i, &out);
            }
        }
        out
    }

    /// `f̂` with support sorted by the ranking.
    pub fn algebraic_view(&self, f: &DeltaPoly) -> AlgebraicView {
        let support = f.variables();
        let index: BTreeMap<&Indet, usize> = support.iter().enumerate().map(|(k, u)| (u, k)).collect();
        let poly = f.map_vars(|u| index[u]);
        AlgebraicView { poly, support: support.clone() }
    }
}

pub(crate) fn coeff_derive_with(f: &DeltaPoly, images: &[BaseElem]) -> DeltaPoly {
    let mut out = DeltaPoly::zero();
    for (m, c) in f.terms() {
        out.add_term(m.clone(), derive_with_images(c, images));
    }
    out
}

/// Moves every indeterminate of `f` into `block`, keeping operators.
pub fn rename_block(f: &DeltaPoly, block: usize) -> DeltaPoly {
    f.map_vars(|u| u.in_block(block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn ring_q(m: usize, n: usize) -> DeltaRing {
        DeltaRing::new(Arc::new(BaseField::rationals(m + 1)), n)
    }

    #[test]
    fn apply_delta_examples() {
        let r = ring_q(2, 1);
        let x = r.x(0);
        assert_eq!(r.apply_delta(0, &x), r.jet(0, 0, &[1, 0]));

        let d1x = r.jet(0, 0, &[1, 0]);
        let f = &x * &d1x;
        let expect = &(&d1x * &d1x) + &(&x * &r.jet(0, 0, &[2, 0]));
        assert_eq!(r.apply_delta(0, &f), expect);

        // over ℚ(t) with δ1 t = 1: δ1(t x) = t δ1x + x
        let k = Arc::new(BaseField::partials(&["t"], 2));
        let rt = DeltaRing::new(k, 1);
        let t = BaseElem::generator(0);
        let f = rt.x(0).scale(&t);
        let expect = &rt.jet(0, 0, &[1]).scale(&t) + &rt.x(0);
        assert_eq!(rt.apply_delta(0, &f), expect);
    }

    #[test]
    fn algebraic_view_examples() {
        let r = ring_q(1, 1);
        let f = &r.x(0).pow(2) + &r.jet(0, 0, &[1]);
        let view = r.algebraic_view(&f);
        assert_eq!(view.support, vec![Indet::base(0, 1), r.indet(0, 0, &[1])]);
        let t1 = Poly::<usize, BaseElem>::var(0);
        let t2 = Poly::<usize, BaseElem>::var(1);
        assert_eq!(view.poly, &t1.pow(2) + &t2);
        assert_eq!(view.reconstruct(), f);

        let c = r.rational(int(5));
        let view = r.algebraic_view(&c);
        assert!(view.support.is_empty());
        assert_eq!(view.poly.as_constant(), Some(BaseElem::rational(int(5))));
    }

    #[test]
    fn context_check() {
        let r = ring_q(2, 1);
        assert!(r.check(&r.x(0)).is_ok());
        let other = ring_q(1, 1);
        assert!(r.check(&other.x(0)).is_err());
        let r3 = ring_q(2, 3);
        assert!(r.check(&r3.x(2)).is_err());
    }
}
