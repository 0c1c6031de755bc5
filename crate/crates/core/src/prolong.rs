//! The relative prolongation `τ = τ_{D/Δ}` and the identities built on it.
//!
//! Iterated `τ` lives in the block-indexed jet ring: block `b` holds a copy
//! of `x̄`, and the shift derivation sends `θ x̄_b` to `θ x̄_{b+1}` while
//! acting as `D` on coefficients. Block 1 doubles as the `ȳ` of `τ f(x̄, ȳ)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{poly_divide_exact, Coeff, MonomialOrder};
use crate::arith::rational::factorial;
use crate::base_field::BaseElem;
use crate::delta::{evaluate, evaluate_pair, evaluate_with, DeltaPoly, DeltaRing, DerivOp, EvalError, FieldTarget, Indet};

/// Default cap on `k` for iterated-`τ` operations.
pub const DEFAULT_K_CAP: u32 = 3;

pub type Jacobian = BTreeMap<Indet, DeltaPoly>;
/// Symmetric: both `(u, v)` and `(v, u)` are stored.
pub type Hessian = BTreeMap<(Indet, Indet), DeltaPoly>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProlongError {
    #[error("k = {k} is outside 1..={cap}")]
    KOutOfRange { k: u32, cap: u32 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("generator {index} fails the precondition: {reason}")]
    PreconditionFailed { index: usize, reason: &'static str },
    #[error("cofactor division leaves a nonzero remainder")]
    DivisionFails { remainder: DeltaPoly },
}

/// A derivation from `Δ ∪ {D}` acting on the jet ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Der {
    Delta(usize),
    D,
}

impl Der {
    /// All of `Δ ∪ {D}` for a ring with `m` structural derivations.
    pub fn all(m: usize) -> Vec<Der> {
        (0..m).map(Der::Delta).chain(std::iter::once(Der::D)).collect()
    }

    /// The image of a single indeterminate: `δ_i θx̄_b = δ_iθ x̄_b` and
    /// `D θx̄_b = θ x̄_{b+1}`.
    pub fn on_indet(self, u: &Indet) -> Indet {
        match self {
            Der::Delta(i) => u.bump(i),
            Der::D => Indet::new(u.block + 1, u.var, u.op.clone()),
        }
    }
}

pub fn jacobian(f: &DeltaPoly) -> Jacobian {
    f.variables()
        .into_iter()
        .map(|u| {
            let p = f.partial(&u);
            (u, p)
        })
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

pub fn hessian(f: &DeltaPoly) -> Hessian {
    let mut out = Hessian::new();
    for (u, fu) in jacobian(f) {
        for (v, fuv) in jacobian(&fu) {
            out.insert((u.clone(), v), fuv);
        }
    }
    out
}

/// `f^δ`: the derivation applied to coefficients only.
pub fn coeff_der(ring: &DeltaRing, f: &DeltaPoly, d: Der) -> DeltaPoly {
    match d {
        Der::Delta(i) => ring.coeff_delta(f, i),
        Der::D => ring.coeff_d(f),
    }
}

/// Structural action of `δ ∈ Δ ∪ {D}` on the jet ring.
pub fn apply_der(ring: &DeltaRing, f: &DeltaPoly, d: Der) -> DeltaPoly {
    match d {
        Der::Delta(i) => ring.apply_delta(i, f),
        Der::D => shift_tau(ring, f),
    }
}

/// `df · δθx̄`.
pub fn jacobian_dot(jac: &Jacobian, d: Der) -> DeltaPoly {
    let mut out = DeltaPoly::zero();
    for (u, p) in jac {
        out = out + p * &DeltaPoly::var(d.on_indet(u));
    }
    out
}

/// `τ f = df(x̄)·θȳ + f^D(x̄)` assembled from the Jacobian.
pub fn tau(ring: &DeltaRing, f: &DeltaPoly) -> DeltaPoly {
    &jacobian_dot(&jacobian(f), Der::D) + &ring.coeff_d(f)
}

/// `τ_{D/Δ} f` restricted to the affine part: `df(x̄)·θȳ`.
pub fn tangent_part(f: &DeltaPoly) -> DeltaPoly {
    jacobian_dot(&jacobian(f), Der::D)
}

/// The shift derivation `τ̂` of the jet ring.
pub fn shift_tau(ring: &DeltaRing, f: &DeltaPoly) -> DeltaPoly {
    ring.derive_with(f, |u| DeltaPoly::var(Der::D.on_indet(u)), ring.d_images())
}

pub fn shift_tau_pow(ring: &DeltaRing, f: &DeltaPoly, k: u32) -> DeltaPoly {
    (0..k).fold(f.clone(), |acc, _| shift_tau(ring, &acc))
}

/// `τ` under the nested-pairing reading of iterated prolongation: at level
/// `l` the derivation sends block `b` to block `b + 2^l`.
pub fn nested_pairing_tau(ring: &DeltaRing, f: &DeltaPoly, level: u32) -> DeltaPoly {
    let step = 1usize << level;
    ring.derive_with(f, |u| DeltaPoly::var(Indet::new(u.block + step, u.var, u.op.clone())), ring.d_images())
}

/// `τ^k` under the nested-pairing reading, with values in blocks `0..2^k`.
pub fn nested_pairing_tau_pow(ring: &DeltaRing, f: &DeltaPoly, k: u32) -> DeltaPoly {
    (0..k).fold(f.clone(), |acc, level| nested_pairing_tau(ring, &acc, level))
}

/// `δ f − (df·δθx̄ + f^δ)`.
pub fn first_order_residual(ring: &DeltaRing, f: &DeltaPoly, d: Der) -> DeltaPoly {
    let direct = apply_der(ring, f, d);
    let rhs = &jacobian_dot(&jacobian(f), d) + &coeff_der(ring, f, d);
    direct - rhs
}

/// The five-term right-hand side of the second-order expansion of `δζ f`:
/// `df·δζθx̄ + δθx̄·Hf·(ζθx̄)ᵗ + f^{δζ} + df^δ·ζθx̄ + df^ζ·δθx̄`.
pub fn second_order_expand(ring: &DeltaRing, f: &DeltaPoly, delta: Der, zeta: Der) -> DeltaPoly {
    let jac = jacobian(f);
    let mut out = DeltaPoly::zero();
    for (u, p) in &jac {
        let dz = delta.on_indet(&zeta.on_indet(u));
        out = out + p * &DeltaPoly::var(dz);
    }
    for ((u, v), h) in hessian(f) {
        let pair = &DeltaPoly::var(delta.on_indet(&u)) * &DeltaPoly::var(zeta.on_indet(&v));
        out = out + &h * &pair;
    }
    let f_delta = coeff_der(ring, f, delta);
    let f_zeta = coeff_der(ring, f, zeta);
    out = out + coeff_der(ring, &f_zeta, delta);
    out = out + jacobian_dot(&jacobian(&f_delta), zeta);
    out + jacobian_dot(&jacobian(&f_zeta), delta)
}

/// `δ(ζ f)` computed structurally minus [`second_order_expand`].
pub fn check_second_order(ring: &DeltaRing, f: &DeltaPoly, delta: Der, zeta: Der) -> DeltaPoly {
    let direct = apply_der(ring, &apply_der(ring, f, zeta), delta);
    direct - second_order_expand(ring, f, delta, zeta)
}

fn check_k(k: u32, cap: u32) -> Result<(), ProlongError> {
    if k == 0 || k > cap {
        return Err(ProlongError::KOutOfRange { k, cap });
    }
    Ok(())
}

/// `D^k a` in the base field.
pub fn d_pow(ring: &DeltaRing, a: &BaseElem, k: u32) -> BaseElem {
    (0..k).fold(a.clone(), |acc, _| ring.d_base(&acc))
}

/// Evaluates a jet-ring polynomial at `∇^k ā`: block `b` is sent to `D^b ā`.
pub fn eval_at_nabla(ring: &DeltaRing, f: &DeltaPoly, a: &[BaseElem]) -> Result<BaseElem, EvalError> {
    let target = FieldTarget { ring };
    evaluate_with(&target, f, |block, var| a.get(var).map(|x| d_pow(ring, x, block as u32)))
}

/// Both sides of `τ^k f(∇^k ā) = D^k f(ā)`.
pub fn nabla_eval(ring: &DeltaRing, f: &DeltaPoly, a: &[BaseElem], k: u32) -> Result<(BaseElem, BaseElem), ProlongError> {
    check_k(k, DEFAULT_K_CAP)?;
    let lhs = eval_at_nabla(ring, &shift_tau_pow(ring, f, k), a)?;
    let value = evaluate(&FieldTarget { ring }, f, a)?;
    Ok((lhs, d_pow(ring, &value, k)))
}

/// The `p` with `τ^k(f^k) = k!(τf)^k + f·p`.
pub fn tau_power_cofactor(ring: &DeltaRing, f: &DeltaPoly, k: u32) -> Result<DeltaPoly, ProlongError> {
    tau_power_cofactor_capped(ring, f, k, DEFAULT_K_CAP)
}

pub fn tau_power_cofactor_capped(ring: &DeltaRing, f: &DeltaPoly, k: u32, cap: u32) -> Result<DeltaPoly, ProlongError> {
    check_k(k, cap)?;
    let lhs = shift_tau_pow(ring, &f.pow(k), k);
    let main = shift_tau(ring, f).pow(k).scale(&BaseElem::rational(factorial(k)));
    cofactor(&(lhs - main), f)
}

/// The same division under the nested-pairing convention.
pub fn nested_pairing_cofactor(ring: &DeltaRing, f: &DeltaPoly, k: u32) -> Result<DeltaPoly, ProlongError> {
    check_k(k, DEFAULT_K_CAP)?;
    let lhs = nested_pairing_tau_pow(ring, &f.pow(k), k);
    let main = shift_tau(ring, f).pow(k).scale(&BaseElem::rational(factorial(k)));
    cofactor(&(lhs - main), f)
}

fn cofactor(g: &DeltaPoly, f: &DeltaPoly) -> Result<DeltaPoly, ProlongError> {
    if g.is_zero() {
        return Ok(DeltaPoly::zero());
    }
    if f.is_zero() {
        return Err(ProlongError::DivisionFails { remainder: g.clone() });
    }
    poly_divide_exact(g, f, &MonomialOrder::degrevlex())
        .map_err(|e| ProlongError::DivisionFails { remainder: e.remainder })
}

/// One summand `h · θ g_index` of a radical-membership certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct CertTerm {
    pub generator: usize,
    pub op: DerivOp,
    pub cofactor: DeltaPoly,
}

/// Witness that `f^k = Σ h_{θ,g} · θ g` for generators `g` of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub k: u32,
    pub terms: Vec<CertTerm>,
}

impl Certificate {
    /// `Σ h · θ g`.
    pub fn combination(&self, ring: &DeltaRing, generators: &[DeltaPoly]) -> DeltaPoly {
        self.terms.iter().fold(DeltaPoly::zero(), |acc, t| {
            acc + &t.cofactor * &ring.apply_op(&t.op, &generators[t.generator])
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalVerdict {
    Verified,
    CertificateInvalid { residual: DeltaPoly },
    TauNonzero { value: BaseElem },
}

/// Checks `g(ā) = 0` and `τ(g)_ā(b̄) = 0` for every `g ∈ A`.
pub fn check_tau_vanishing(
    ring: &DeltaRing,
    generators: &[DeltaPoly],
    a: &[BaseElem],
    b: &[BaseElem],
) -> Result<(), ProlongError> {
    let target = FieldTarget { ring };
    for (index, g) in generators.iter().enumerate() {
        if !evaluate(&target, g, a)?.is_zero() {
            return Err(ProlongError::PreconditionFailed { index, reason: "g(a) is not zero" });
        }
        if !evaluate_pair(&target, &tau(ring, g), a, b)?.is_zero() {
            return Err(ProlongError::PreconditionFailed { index, reason: "tau(g) does not vanish at (a, b)" });
        }
    }
    Ok(())
}

/// Given `τ(g)_ā(b̄) = 0` on `A` and a certificate of `f ∈ {A}`, evaluates
/// `τ(f)_ā(b̄)`.
pub fn radical_transfer_check(
    ring: &DeltaRing,
    generators: &[DeltaPoly],
    a: &[BaseElem],
    b: &[BaseElem],
    f: &DeltaPoly,
    cert: &Certificate,
) -> Result<RadicalVerdict, ProlongError> {
    check_tau_vanishing(ring, generators, a, b)?;
    let residual = f.pow(cert.k) - cert.combination(ring, generators);
    if cert.k == 0 || !residual.is_zero() {
        return Ok(RadicalVerdict::CertificateInvalid { residual });
    }
    let value = evaluate_pair(&FieldTarget { ring }, &tau(ring, f), a, b)?;
    Ok(if value.is_zero() { RadicalVerdict::Verified } else { RadicalVerdict::TauNonzero { value } })
}

/// The derivation `D′ : R{ā} → S` with `D′ ā = b̄`, realized as
/// `D′(f(ā)) = τ(f)_ā(b̄)`.
#[derive(Clone, Debug)]
pub struct DerivationExtension {
    ring: DeltaRing,
    generators: Vec<DeltaPoly>,
    a: Vec<BaseElem>,
    b: Vec<BaseElem>,
}

pub fn extend_derivation(
    ring: &DeltaRing,
    generators: &[DeltaPoly],
    a: &[BaseElem],
    b: &[BaseElem],
) -> Result<DerivationExtension, ProlongError> {
    for pt in [a, b] {
        if pt.len() != ring.n() {
            return Err(EvalError::PointLength { got: pt.len(), expected: ring.n() }.into());
        }
    }
    check_tau_vanishing(ring, generators, a, b)?;
    Ok(DerivationExtension { ring: ring.clone(), generators: generators.to_vec(), a: a.to_vec(), b: b.to_vec() })
}

impl DerivationExtension {
    pub fn generators(&self) -> &[DeltaPoly] {
        &self.generators
    }

    pub fn point(&self) -> &[BaseElem] {
        &self.a
    }

    pub fn companion(&self) -> &[BaseElem] {
        &self.b
    }

    /// `f(ā)`.
    pub fn value(&self, f: &DeltaPoly) -> Result<BaseElem, EvalError> {
        evaluate(&FieldTarget { ring: &self.ring }, f, &self.a)
    }

    /// `D′(f(ā))`.
    pub fn apply(&self, f: &DeltaPoly) -> Result<BaseElem, EvalError> {
        evaluate_pair(&FieldTarget { ring: &self.ring }, &tau(&self.ring, f), &self.a, &self.b)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arith::rational::int;
    use crate::base_field::BaseField;

    fn c(n: i64) -> BaseElem {
        BaseElem::rational(int(n))
    }

    fn ring_q(m: usize) -> DeltaRing {
        DeltaRing::new(Arc::new(BaseField::rationals(m + 1)), 1)
    }

    /// ℚ(t) with δ1 = 0 and D = d/dt.
    fn ring_t_d() -> DeltaRing {
        let field = BaseField::new(vec!["t".into()], vec![vec![c(0)], vec![c(1)]]).unwrap();
        DeltaRing::new(Arc::new(field), 1)
    }

    fn x(block: usize, m: usize) -> DeltaPoly {
        DeltaPoly::var(Indet::new(block, 0, DerivOp::identity(m)))
    }

    #[test]
    fn jacobian_and_hessian() {
        let r = ring_q(1);
        let d1x = r.jet(0, 0, &[1]);
        let f = &r.x(0).pow(2) + &d1x;
        let jac = jacobian(&f);
        assert_eq!(jac.len(), 2);
        assert_eq!(jac[&Indet::base(0, 1)], r.x(0).scale(&c(2)));
        assert_eq!(jac[&r.indet(0, 0, &[1])], DeltaPoly::one());
        let hes = hessian(&f);
        assert_eq!(hes.len(), 1);
        assert_eq!(hes[&(Indet::base(0, 1), Indet::base(0, 1))], r.rational(int(2)));

        assert!(jacobian(&r.rational(int(3))).is_empty());
        let g = &r.x(0) * &d1x;
        let hes = hessian(&g);
        let (u, v) = (Indet::base(0, 1), r.indet(0, 0, &[1]));
        assert_eq!(hes[&(u.clone(), v.clone())], DeltaPoly::one());
        assert_eq!(hes[&(v, u)], DeltaPoly::one());
    }

    #[test]
    fn coeff_derive_examples() {
        let t = BaseElem::generator(0);
        let r = ring_t_d();
        let f = r.x(0).scale(&t);
        assert_eq!(r.coeff_d(&f), r.x(0));
        let f = ring_q(1).x(0).scale(&c(5));
        assert!(ring_q(1).coeff_d(&f).is_zero());
        // D t = t: (t² δ1x)^D = 2t² δ1x
        let field = BaseField::new(vec!["t".into()], vec![vec![c(0)], vec![t.clone()]]).unwrap();
        let r = DeltaRing::new(Arc::new(field), 1);
        let t2 = t.mul(&t);
        let f = r.jet(0, 0, &[1]).scale(&t2);
        assert_eq!(r.coeff_d(&f), r.jet(0, 0, &[1]).scale(&c(2).mul(&t2)));
    }

    #[test]
    fn tau_matches_shift_on_block_zero() {
        let r = ring_t_d();
        let t = BaseElem::generator(0);
        let f = &(&r.x(0).pow(2) * &r.jet(0, 0, &[1])).scale(&t) + &r.x(0);
        assert_eq!(tau(&r, &f), shift_tau(&r, &f));
        // τ(x²) = 2 x y
        assert_eq!(tau(&r, &r.x(0).pow(2)), (&r.x(0) * &r.y(0)).scale(&c(2)));
    }

    #[test]
    fn shift_tau_examples() {
        let r = ring_q(1);
        assert_eq!(shift_tau(&r, &x(0, 1)), x(1, 1));
        let expect = &x(1, 1).pow(2).scale(&c(2)) + &(&x(0, 1) * &x(2, 1)).scale(&c(2));
        assert_eq!(shift_tau_pow(&r, &x(0, 1).pow(2), 2), expect);
        assert_eq!(shift_tau(&r, &r.jet(0, 0, &[1])), r.jet(1, 0, &[1]));
    }

    #[test]
    fn second_order_examples() {
        let r = ring_t_d();
        let t = BaseElem::generator(0);
        let f = &r.x(0).pow(2).scale(&t) + &r.jet(0, 0, &[1]);
        for d in Der::all(1) {
            assert!(first_order_residual(&r, &f, d).is_zero());
            for z in Der::all(1) {
                assert!(check_second_order(&r, &f, d, z).is_zero(), "{d:?} {z:?}");
            }
        }
        assert!(check_second_order(&r, &r.x(0), Der::Delta(0), Der::D).is_zero());
    }

    #[test]
    fn nabla_examples() {
        let r = ring_t_d();
        let t = BaseElem::generator(0);
        let f = r.x(0).pow(2);
        let (l, rhs) = nabla_eval(&r, &f, &[t.clone()], 1).unwrap();
        assert_eq!(l, c(2).mul(&t));
        assert_eq!(l, rhs);
        let (l, rhs) = nabla_eval(&r, &f, &[t.clone()], 2).unwrap();
        assert_eq!((l.clone(), rhs), (c(2), c(2)));
        let (l, rhs) = nabla_eval(&r, &r.constant(t.clone()), &[t], 3).unwrap();
        assert_eq!((l, rhs), (c(0), c(0)));
    }

    #[test]
    fn cofactor_examples() {
        let r = ring_q(1);
        assert!(tau_power_cofactor(&r, &x(0, 1), 1).unwrap().is_zero());
        assert_eq!(tau_power_cofactor(&r, &x(0, 1), 2).unwrap(), x(2, 1).scale(&c(2)));
        let rt = ring_t_d();
        let k = rt.constant(BaseElem::generator(0));
        assert!(tau_power_cofactor(&rt, &k, 1).unwrap().is_zero());
        assert!(matches!(tau_power_cofactor(&r, &x(0, 1), 4), Err(ProlongError::KOutOfRange { .. })));
    }

    #[test]
    fn nested_pairing_regression() {
        let r = ring_q(1);
        let two = nested_pairing_tau_pow(&r, &x(0, 1).pow(2), 2);
        let expect = &(&x(1, 1) * &x(2, 1)).scale(&c(2)) + &(&x(0, 1) * &x(3, 1)).scale(&c(2));
        assert_eq!(two, expect);
        assert!(matches!(nested_pairing_cofactor(&r, &x(0, 1), 2), Err(ProlongError::DivisionFails { .. })));
    }

    #[test]
    fn radical_transfer_examples() {
        let r = ring_q(1);
        let gens = vec![r.x(0)];
        let trivial = Certificate { k: 1, terms: vec![CertTerm { generator: 0, op: r.identity_op(), cofactor: DeltaPoly::one() }] };
        let v = radical_transfer_check(&r, &gens, &[c(0)], &[c(0)], &r.x(0), &trivial).unwrap();
        assert_eq!(v, RadicalVerdict::Verified);

        let wrong = Certificate { k: 1, terms: vec![CertTerm { generator: 0, op: r.identity_op(), cofactor: r.rational(int(2)) }] };
        let v = radical_transfer_check(&r, &gens, &[c(0)], &[c(0)], &r.x(0), &wrong).unwrap();
        assert!(matches!(v, RadicalVerdict::CertificateInvalid { .. }));

        // A = {x²}, ā = 0, b̄ = 1 satisfies the hypotheses but τ(x)_0(1) = 1
        let gens = vec![r.x(0).pow(2)];
        let cert = Certificate { k: 2, terms: vec![CertTerm { generator: 0, op: r.identity_op(), cofactor: DeltaPoly::one() }] };
        let v = radical_transfer_check(&r, &gens, &[c(0)], &[c(1)], &r.x(0), &cert).unwrap();
        assert_eq!(v, RadicalVerdict::TauNonzero { value: c(1) });
        let v = radical_transfer_check(&r, &gens, &[c(0)], &[c(0)], &r.x(0), &cert).unwrap();
        assert_eq!(v, RadicalVerdict::Verified);
    }

    #[test]
    fn extension_examples() {
        let field = BaseField::partials(&["t"], 2);
        let r = DeltaRing::new(Arc::new(field), 1);
        let t = BaseElem::generator(0);
        let ext = extend_derivation(&r, &[], &[t.clone()], &[t.clone()]).unwrap();
        assert_eq!(ext.apply(&r.x(0).pow(2)).unwrap(), c(2).mul(&t).mul(&t));

        let rq = ring_q(1);
        let err = extend_derivation(&rq, &[rq.x(0)], &[c(0)], &[c(1)]).unwrap_err();
        assert!(matches!(err, ProlongError::PreconditionFailed { index: 0, .. }));
    }
}
