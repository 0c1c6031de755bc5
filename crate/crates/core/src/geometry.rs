//! Prolongation and tangent systems of Kolchin-closed sets, their fibers,
//! the torsor action, component locality and the section map.
//!
//! Everything here is relative to the generators supplied: the ideal of a
//! variety is never computed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::linalg::rank;
use crate::arith::{Coeff, Field};
use crate::base_field::BaseElem;
use crate::delta::{evaluate, evaluate_pair, evaluate_with, DeltaPoly, DeltaRing, EvalError, FieldTarget, Indet};
use crate::prolong::{d_pow, shift_tau, tangent_part, tau};

pub const PROLONGATION_CAVEAT: &str =
    "the pairs cut out the full prolongation only when the ambient field is differentially closed";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("system has no generators")]
    EmptySystem,
    #[error("generator {index} is the zero polynomial")]
    ZeroGenerator { index: usize },
    #[error("point is not on the variety: generator {index} does not vanish")]
    PointNotOnV { index: usize },
    #[error("precondition failed at generator {index}: {reason}")]
    PreconditionFailed { index: usize, reason: &'static str },
    #[error("no witness polynomial supplied for component {component}")]
    WitnessMissing { component: usize },
    #[error("witness for component {component} vanishes at the point")]
    WitnessVanishes { component: usize },
    #[error("component index {index} out of range ({count} components)")]
    ComponentIndex { index: usize, count: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `V = 𝒱(f_1, …, f_s)` with generators in block 0.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietySystem {
    generators: Vec<DeltaPoly>,
}

impl VarietySystem {
    pub fn new(generators: Vec<DeltaPoly>) -> Result<Self, GeometryError> {
        if generators.is_empty() {
            return Err(GeometryError::EmptySystem);
        }
        if let Some(index) = generators.iter().position(DeltaPoly::is_zero) {
            return Err(GeometryError::ZeroGenerator { index });
        }
        Ok(VarietySystem { generators })
    }

    pub fn generators(&self) -> &[DeltaPoly] {
        &self.generators
    }

    /// `true` iff every generator vanishes at `a`.
    pub fn contains(&self, ring: &DeltaRing, a: &[BaseElem]) -> Result<bool, EvalError> {
        Ok(self.first_nonvanishing(ring, a)?.is_none())
    }

    fn first_nonvanishing(&self, ring: &DeltaRing, a: &[BaseElem]) -> Result<Option<usize>, EvalError> {
        let target = FieldTarget { ring };
        for (i, f) in self.generators.iter().enumerate() {
            if !evaluate(&target, f, a)?.is_zero() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Paired generators `(f_i, τ f_i)` in the blocks `(x̄, ȳ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongationSystem {
    pub base: VarietySystem,
    pub pairs: Vec<(DeltaPoly, DeltaPoly)>,
    pub caveat: &'static str,
}

/// Paired generators `(f_i, df_i·θȳ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSystem {
    pub base: VarietySystem,
    pub pairs: Vec<(DeltaPoly, DeltaPoly)>,
}

pub fn prolongation_system(ring: &DeltaRing, v: &VarietySystem) -> ProlongationSystem {
    let pairs = v.generators.iter().map(|f| (f.clone(), tau(ring, f))).collect();
    ProlongationSystem { base: v.clone(), pairs, caveat: PROLONGATION_CAVEAT }
}

pub fn tangent_system(v: &VarietySystem) -> TangentSystem {
    let pairs = v.generators.iter().map(|f| (f.clone(), tangent_part(f))).collect();
    TangentSystem { base: v.clone(), pairs }
}

/// `D ā` coordinatewise.
pub fn d_point(ring: &DeltaRing, a: &[BaseElem]) -> Vec<BaseElem> {
    a.iter().map(|x| ring.d_base(x)).collect()
}

/// Checks `(ā, Dā) ∈ τV` for `ā ∈ V`.
pub fn section_contains(ring: &DeltaRing, v: &VarietySystem, a: &[BaseElem]) -> Result<bool, GeometryError> {
    if let Some(index) = v.first_nonvanishing(ring, a)? {
        return Err(GeometryError::PointNotOnV { index });
    }
    let da = d_point(ring, a);
    let target = FieldTarget { ring };
    for f in &v.generators {
        if !evaluate_pair(&target, &tau(ring, f), a, &da)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsorAction {
    pub point: Vec<BaseElem>,
    /// Every `τ f_i` has degree at most 1 in `ȳ`.
    pub linear: bool,
    /// `(ā, b̄ + c̄)` satisfies the prolongation system.
    pub member: bool,
}

fn block_degree(f: &DeltaPoly, block: usize) -> u32 {
    f.terms()
        .map(|(m, _)| m.powers().iter().filter(|(u, _)| u.block == block).map(|(_, e)| e).sum())
        .max()
        .unwrap_or(0)
}

/// `((ā, b̄), (ā, c̄)) ↦ (ā, b̄ + c̄)` for `b̄` in the tangent fiber and `c̄`
/// in the prolongation fiber.
pub fn torsor_act(
    ring: &DeltaRing,
    v: &VarietySystem,
    a: &[BaseElem],
    b: &[BaseElem],
    c: &[BaseElem],
) -> Result<TorsorAction, GeometryError> {
    if let Some(index) = v.first_nonvanishing(ring, a)? {
        return Err(GeometryError::PointNotOnV { index });
    }
    let target = FieldTarget { ring };
    let tangent = tangent_system(v);
    for (index, (_, t)) in tangent.pairs.iter().enumerate() {
        if !evaluate_pair(&target, t, a, b)?.is_zero() {
            return Err(GeometryError::PreconditionFailed { index, reason: "b is not in the tangent fiber" });
        }
    }
    let prolong = prolongation_system(ring, v);
    for (index, (_, t)) in prolong.pairs.iter().enumerate() {
        if !evaluate_pair(&target, t, a, c)?.is_zero() {
            return Err(GeometryError::PreconditionFailed { index, reason: "c is not in the prolongation fiber" });
        }
    }
    let point: Vec<BaseElem> = b.iter().zip(c).map(|(x, y)| x.add(y)).collect();
    let linear = prolong.pairs.iter().all(|(_, t)| block_degree(t, 1) <= 1);
    let mut member = true;
    for (_, t) in &prolong.pairs {
        if !evaluate_pair(&target, t, a, &point)?.is_zero() {
            member = false;
        }
    }
    Ok(TorsorAction { point, linear, member })
}

/// `h(ā, ȳ)`: block 0 specialized to `ā`, block 1 kept symbolic.
pub fn fiber_poly(ring: &DeltaRing, h: &DeltaPoly, a: &[BaseElem]) -> Result<DeltaPoly, EvalError> {
    evaluate_with(ring, h, |block, var| match block {
        0 => a.get(var).map(|x| DeltaPoly::constant(x.clone())),
        1 => Some(ring.y(var)),
        _ => None,
    })
}

/// The fiber `τ(V)_ā` as the list of affine polynomials `τ f_i(ā, ȳ)`.
pub fn prolongation_fiber(ring: &DeltaRing, v: &VarietySystem, a: &[BaseElem]) -> Result<Vec<DeltaPoly>, EvalError> {
    v.generators.iter().map(|f| fiber_poly(ring, &tau(ring, f), a)).collect()
}

/// Whether two lists of affine polynomials in `ȳ` have the same `K`-span.
pub fn same_affine_span(first: &[DeltaPoly], second: &[DeltaPoly]) -> bool {
    let mut support: BTreeSet<Indet> = BTreeSet::new();
    for p in first.iter().chain(second) {
        support.extend(p.variables());
    }
    let support: Vec<Indet> = support.into_iter().collect();
    let row = |p: &DeltaPoly| -> Vec<BaseElem> {
        let mut r: Vec<BaseElem> = support.iter().map(|u| p.coeff(&crate::arith::Monomial::var(u.clone()))).collect();
        r.push(p.coeff(&crate::arith::Monomial::one()));
        r
    };
    let a: Vec<Vec<BaseElem>> = first.iter().map(row).collect();
    let b: Vec<Vec<BaseElem>> = second.iter().map(row).collect();
    let both: Vec<Vec<BaseElem>> = a.iter().chain(&b).cloned().collect();
    let (ra, rb, rab) = (rank(&a), rank(&b), rank(&both));
    ra == rab && rb == rab
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiberVerdict {
    /// The fibers of `V` and `V_i` at `ā` agree: the product identity held
    /// for every generator, the affine spans coincide, and every sample
    /// lies in both fibers or in neither.
    Agree { samples_checked: usize },
    /// The spans differ, or a sample separates the fibers.
    Disagree { reason: String },
    /// `ā` lies on another component, so the hypothesis fails.
    Skipped { diagnostic: String },
}

/// Compares `τ(V)_ā` with `τ(V_i)_ā` for `ā` on `V_i` only.
///
/// `witnesses[j]` must vanish on component `j` and not at `ā` (it is
/// ignored for `j = i`). Irreducibility of the components is assumed.
pub fn component_fiber_check(
    ring: &DeltaRing,
    v: &VarietySystem,
    components: &[VarietySystem],
    i: usize,
    witnesses: &[Option<DeltaPoly>],
    a: &[BaseElem],
    samples: &[Vec<BaseElem>],
) -> Result<FiberVerdict, GeometryError> {
    if i >= components.len() {
        return Err(GeometryError::ComponentIndex { index: i, count: components.len() });
    }
    if let Some(index) = components[i].first_nonvanishing(ring, a)? {
        return Err(GeometryError::PointNotOnV { index });
    }
    let target = FieldTarget { ring };
    let mut product = DeltaPoly::one();
    for (j, comp) in components.iter().enumerate() {
        if j == i {
            continue;
        }
        if comp.contains(ring, a)? {
            return Ok(FiberVerdict::Skipped {
                diagnostic: format!("point lies on components {} and {}", i + 1, j + 1),
            });
        }
        let g = witnesses.get(j).cloned().flatten().ok_or(GeometryError::WitnessMissing { component: j })?;
        if evaluate(&target, &g, a)?.is_zero() {
            return Err(GeometryError::WitnessVanishes { component: j });
        }
        product = &product * &g;
    }
    let g_value = evaluate(&target, &product, a)?;
    // τ(f·G)_ā = G(ā)·τ(f)_ā whenever f(ā) = 0
    for (index, f) in components[i].generators.iter().enumerate() {
        let lhs = fiber_poly(ring, &tau(ring, &(f * &product)), a)?;
        let rhs = fiber_poly(ring, &tau(ring, f), a)?.scale(&g_value);
        if lhs != rhs {
            return Ok(FiberVerdict::Disagree { reason: format!("product identity fails for generator {}", index + 1) });
        }
    }
    let fiber_v = prolongation_fiber(ring, v, a)?;
    let fiber_i = prolongation_fiber(ring, &components[i], a)?;
    if !same_affine_span(&fiber_v, &fiber_i) {
        return Ok(FiberVerdict::Disagree { reason: "fiber spans differ".into() });
    }
    let in_fiber = |fiber: &[DeltaPoly], y: &[BaseElem]| -> Result<bool, EvalError> {
        let target = FieldTarget { ring };
        for p in fiber {
            let val = evaluate_with(&target, p, |block, var| if block == 1 { y.get(var).cloned() } else { None })?;
            if !val.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for (s, y) in samples.iter().enumerate() {
        if in_fiber(&fiber_v, y)? != in_fiber(&fiber_i, y)? {
            return Ok(FiberVerdict::Disagree { reason: format!("sample {} separates the fibers", s + 1) });
        }
    }
    Ok(FiberVerdict::Agree { samples_checked: samples.len() })
}

/// The polynomial map `s` on `n(k+2)` coordinates in blocks `0..=k+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMap {
    pub n: usize,
    pub k: usize,
    /// The tuple `g`, kept for building `c̄`.
    pub g: Vec<DeltaPoly>,
    /// Block-major: coordinate `b·n + j` is the `j`-th entry of block `b`.
    pub coords: Vec<DeltaPoly>,
}

/// `s = (x̄_1, …, x̄_k, f·x̄_{k+1}, −x̄_{k+1}²·τg(x̄_0, …, x̄_k, x̄_1, …, x̄_k, f·x̄_{k+1}))`
/// with products taken coordinatewise. `f` and `g` are `n`-tuples over
/// blocks `0..=k`.
pub fn section_map(ring: &DeltaRing, f: &[DeltaPoly], g: &[DeltaPoly], k: usize) -> SectionMap {
    let n = ring.n();
    assert_eq!(f.len(), n, "f must be an n-tuple");
    assert_eq!(g.len(), n, "g must be an n-tuple");
    let jet = |block: usize, var: usize| DeltaPoly::var(Indet::new(block, var, ring.identity_op()));
    let mut coords = Vec::with_capacity(n * (k + 2));
    for b in 1..=k {
        coords.extend((0..n).map(|j| jet(b, j)));
    }
    coords.extend((0..n).map(|j| &f[j] * &jet(k + 1, j)));
    for j in 0..n {
        // shift_tau sends block b to b + 1; block k + 1 then stands for f·x̄_{k+1}
        let shifted = shift_tau(ring, &g[j]);
        let substituted = evaluate_with(ring, &shifted, |block, var| {
            Some(if block == k + 1 { &f[var] * &jet(k + 1, var) } else { jet(block, var) })
        })
        .expect("every block is assigned");
        coords.push(-(&jet(k + 1, j).pow(2) * &substituted));
    }
    SectionMap { n, k, g: g.to_vec(), coords }
}

impl SectionMap {
    /// `c̄ = (ā, D′ā, …, D′^k ā, 1/g(ā, …, D′^k ā))`.
    pub fn point(&self, ring: &DeltaRing, a: &[BaseElem]) -> Result<Vec<BaseElem>, EvalError> {
        if a.len() != self.n {
            return Err(EvalError::PointLength { got: a.len(), expected: self.n });
        }
        let mut c: Vec<BaseElem> = Vec::with_capacity(self.n * (self.k + 2));
        for b in 0..=self.k {
            c.extend(a.iter().map(|x| d_pow(ring, x, b as u32)));
        }
        let target = FieldTarget { ring };
        for (j, gj) in self.g.iter().enumerate() {
            let val = evaluate_with(&target, gj, |block, var| c.get(block * self.n + var).cloned())?;
            if val.is_zero() {
                return Err(EvalError::Singular(format!("g{} vanishes at the point", j + 1)));
            }
            c.push(val.inv());
        }
        Ok(c)
    }

    /// `s(c̄)`.
    pub fn apply(&self, ring: &DeltaRing, c: &[BaseElem]) -> Result<Vec<BaseElem>, EvalError> {
        let target = FieldTarget { ring };
        self.coords
            .iter()
            .map(|p| evaluate_with(&target, p, |block, var| c.get(block * self.n + var).cloned()))
            .collect()
    }

    /// Checks `s(c̄) = D′c̄`; this holds when `D′^{k+1}ā = f/g` at `ā`.
    pub fn verify_at(&self, ring: &DeltaRing, a: &[BaseElem]) -> Result<bool, EvalError> {
        let c = self.point(ring, a)?;
        let s = self.apply(ring, &c)?;
        Ok(s == d_point(ring, &c))
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

    /// ℚ(t) with no Δ and D = d/dt.
    fn ring_t() -> DeltaRing {
        let field = BaseField::new(vec!["t".into()], vec![vec![c(1)]]).unwrap();
        DeltaRing::new(Arc::new(field), 1)
    }

    #[test]
    fn prolongation_examples() {
        let r = ring_q(1);
        let v = VarietySystem::new(vec![r.x(0)]).unwrap();
        assert_eq!(prolongation_system(&r, &v).pairs, vec![(r.x(0), r.y(0))]);

        let v = VarietySystem::new(vec![r.x(0).pow(2)]).unwrap();
        let two_xy = (&r.x(0) * &r.y(0)).scale(&c(2));
        assert_eq!(prolongation_system(&r, &v).pairs[0].1, two_xy);
        assert_eq!(tangent_system(&v).pairs[0].1, two_xy);

        // δ1x − t over ℚ(t) with D t = 1: τ-part δ1y − 1
        let field = BaseField::new(vec!["t".into()], vec![vec![c(0)], vec![c(1)]]).unwrap();
        let rt = DeltaRing::new(Arc::new(field), 1);
        let t = BaseElem::generator(0);
        let f = &rt.jet(0, 0, &[1]) - &rt.constant(t.clone());
        let v = VarietySystem::new(vec![f]).unwrap();
        assert_eq!(prolongation_system(&rt, &v).pairs[0].1, &rt.jet(1, 0, &[1]) - &rt.rational(int(1)));

        // c·x with Dc ≠ 0: tangent c·y, prolongation c·y + Dc·x
        let v = VarietySystem::new(vec![rt.x(0).scale(&t)]).unwrap();
        assert_eq!(tangent_system(&v).pairs[0].1, rt.y(0).scale(&t));
        assert_eq!(prolongation_system(&rt, &v).pairs[0].1, &rt.y(0).scale(&t) + &rt.x(0));

        assert_eq!(VarietySystem::new(vec![]), Err(GeometryError::EmptySystem));
    }

    #[test]
    fn section_examples() {
        let r = ring_t();
        let t = BaseElem::generator(0);
        let v = VarietySystem::new(vec![&r.x(0) - &r.constant(t.clone())]).unwrap();
        assert_eq!(section_contains(&r, &v, &[t.clone()]), Ok(true));
        let v0 = VarietySystem::new(vec![r.x(0)]).unwrap();
        assert_eq!(section_contains(&r, &v0, &[c(0)]), Ok(true));
        assert_eq!(section_contains(&r, &v0, &[c(1)]), Err(GeometryError::PointNotOnV { index: 0 }));
    }

    #[test]
    fn torsor_examples() {
        let r = ring_t();
        let t = BaseElem::generator(0);
        let v = VarietySystem::new(vec![&r.x(0) - &r.constant(t.clone())]).unwrap();
        let act = torsor_act(&r, &v, &[t.clone()], &[c(0)], &[c(1)]).unwrap();
        assert_eq!(act, TorsorAction { point: vec![c(1)], linear: true, member: true });
        let err = torsor_act(&r, &v, &[t.clone()], &[c(1)], &[c(1)]).unwrap_err();
        assert!(matches!(err, GeometryError::PreconditionFailed { index: 0, .. }));
    }

    #[test]
    fn component_fiber_examples() {
        let r = ring_q(1);
        let x = r.x(0);
        let x1 = &x - &r.rational(int(1));
        let v = VarietySystem::new(vec![&x * &x1]).unwrap();
        let comps = vec![VarietySystem::new(vec![x.clone()]).unwrap(), VarietySystem::new(vec![x1.clone()]).unwrap()];
        let witnesses = vec![None, Some(x1.clone())];
        let samples = vec![vec![c(0)], vec![c(3)]];
        let verdict = component_fiber_check(&r, &v, &comps, 0, &witnesses, &[c(0)], &samples).unwrap();
        assert_eq!(verdict, FiberVerdict::Agree { samples_checked: 2 });

        let err = component_fiber_check(&r, &v, &comps, 0, &[None, None], &[c(0)], &[]).unwrap_err();
        assert_eq!(err, GeometryError::WitnessMissing { component: 1 });

        let single = vec![v.clone()];
        let verdict = component_fiber_check(&r, &v, &single, 0, &[None], &[c(1)], &samples).unwrap();
        assert_eq!(verdict, FiberVerdict::Agree { samples_checked: 2 });

        // both components through the point
        let comps = vec![VarietySystem::new(vec![x.clone()]).unwrap(), VarietySystem::new(vec![x.pow(2)]).unwrap()];
        let verdict = component_fiber_check(&r, &v, &comps, 0, &[None, Some(x1)], &[c(0)], &[]).unwrap();
        assert!(matches!(verdict, FiberVerdict::Skipped { .. }));
    }

    #[test]
    fn section_map_examples() {
        let r = ring_t();
        let t = BaseElem::generator(0);
        let s = section_map(&r, &[DeltaPoly::zero()], &[DeltaPoly::one()], 1);
        assert_eq!(s.coords.len(), 3);
        assert_eq!(s.coords[0], DeltaPoly::var(Indet::new(1, 0, r.identity_op())));
        assert!(s.coords[2].is_zero());
        let cbar = s.point(&r, &[t.clone()]).unwrap();
        assert_eq!(cbar, vec![t.clone(), c(1), c(1)]);
        assert_eq!(s.apply(&r, &cbar).unwrap(), vec![c(1), c(0), c(0)]);
        assert_eq!(s.verify_at(&r, &[t.clone()]), Ok(true));

        // a = t², k = 1: D′²a = 2 = f/g with f = 2·x_1 and g = x_1
        let x1 = DeltaPoly::var(Indet::new(1, 0, r.identity_op()));
        let s = section_map(&r, &[x1.scale(&c(2))], &[x1.clone()], 1);
        assert_eq!(s.verify_at(&r, &[t.mul(&t)]), Ok(true));
        assert_eq!(s.verify_at(&r, &[t.mul(&t).mul(&t)]), Ok(false));
    }
}
