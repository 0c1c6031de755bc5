//! Randomized property checks over seeded instances.
//!
//! Each check draws `cases` instances from a [`Sampler`] and records a
//! printable witness for every case that fails. Instances that need a point
//! on a variety are built around the point: a generator `p − p(ā)` vanishes
//! at `ā` by construction, and the combination `L(q̃)·p̃ − L(p̃)·q̃` also
//! lies in the kernel of a chosen linear functional `L` such as
//! `f ↦ τ f(ā, b̄)`.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::Coeff;
use crate::base_field::BaseElem;
use crate::delta::{evaluate, evaluate_pair, DeltaPoly, DeltaRing, EvalError, FieldTarget};
use crate::frontend::{parse_poly, print_poly, ParseContext};
use crate::geometry::{
    component_fiber_check, d_point, section_contains, torsor_act, FiberVerdict, VarietySystem,
};
use crate::prolong::{
    check_second_order, extend_derivation, first_order_residual, nabla_eval, radical_transfer_check,
    tangent_part, tau, tau_power_cofactor, CertTerm, Certificate, Der, RadicalVerdict,
};
use crate::sample::{Regime, Sampler};
use crate::transform::{check_transformed_commute, rewrite_jets};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.to_string(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, case: usize, msg: impl Into<String>) {
        self.failures.push(format!("case {case}: {}", msg.into()));
    }

    fn merge(mut self, other: CheckReport) -> Self {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {} cases, {} failures, {verdict}", self.name, self.cases, self.failures.len())?;
        for w in &self.failures {
            write!(f, "\n  {w}")?;
        }
        Ok(())
    }
}

fn show(ring: &DeltaRing, f: &DeltaPoly) -> String {
    print_poly(f, ring.field().generators())
}

fn small(seed: u64) -> Sampler {
    Sampler::with_regime(seed, Regime { max_terms: 3, max_degree: 2, max_order: 2, ..Regime::default() })
}

fn tiny(seed: u64) -> Sampler {
    Sampler::with_regime(
        seed,
        Regime {
            max_terms: 2,
            max_degree: 2,
            max_order: 1,
            max_coeff_degree: 1,
            denominators: false,
            ..Regime::default()
        },
    )
}

/// `p − p(ā)`.
pub fn vanishing_at(ring: &DeltaRing, p: &DeltaPoly, a: &[BaseElem]) -> Result<DeltaPoly, EvalError> {
    let value = evaluate(&FieldTarget { ring }, p, a)?;
    Ok(p - &DeltaPoly::constant(value))
}

/// A nonzero generator vanishing at `ā` and in the kernel of `functional`.
/// Returns `None` when no correction is found in a few draws.
fn corrected_generator(
    s: &mut Sampler,
    ring: &DeltaRing,
    a: &[BaseElem],
    functional: &dyn Fn(&DeltaPoly) -> Result<BaseElem, EvalError>,
) -> Result<Option<DeltaPoly>, EvalError> {
    for _ in 0..8 {
        let p = vanishing_at(ring, &s.poly(ring, 1), a)?;
        if p.is_zero() {
            continue;
        }
        let lp = functional(&p)?;
        if lp.is_zero() {
            return Ok(Some(p));
        }
        let mut candidates: Vec<DeltaPoly> = (0..3).map(|_| s.poly(ring, 1)).collect();
        candidates.extend((0..ring.n()).map(|j| ring.x(j)));
        for q in candidates {
            let q = vanishing_at(ring, &q, a)?;
            let lq = functional(&q)?;
            if lq.is_zero() {
                continue;
            }
            let g = &p.scale(&lq) - &q.scale(&lp);
            if !g.is_zero() {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// A point `b̄`, equal to `Dā` with probability `p_d`.
pub fn companion(s: &mut Sampler, ring: &DeltaRing, a: &[BaseElem], p_d: f64) -> Vec<BaseElem> {
    if s.coin(p_d) {
        d_point(ring, a)
    } else {
        s.point(ring)
    }
}

/// Generators `A` with `g(ā) = 0` and `τ g(ā, b̄) = 0`.
pub fn tau_vanishing_generators(
    s: &mut Sampler,
    ring: &DeltaRing,
    a: &[BaseElem],
    b: &[BaseElem],
) -> Result<Vec<DeltaPoly>, EvalError> {
    let functional = |f: &DeltaPoly| evaluate_pair(&FieldTarget { ring }, &tau(ring, f), a, b);
    let count = s.range(1, 2);
    let mut gens = Vec::new();
    for _ in 0..count {
        if let Some(g) = corrected_generator(s, ring, a, &functional)? {
            gens.push(g);
        }
    }
    Ok(gens)
}

/// `δf = df·δθx̄ + f^δ` for every `δ ∈ Δ ∪ {D}`.
pub fn first_order_identity(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("first-order identity");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let f = s.poly(&ring, 1);
        for d in Der::all(ring.m()) {
            let r = first_order_residual(&ring, &f, d);
            if !r.is_zero() {
                report.fail(case, format!("f = {}, {d:?}: residual {}", show(&ring, &f), show(&ring, &r)));
            }
        }
        report.cases += 1;
    }
    report
}

/// The second-order expansion of `δζ f` for ordered pairs `δ ≠ ζ`.
pub fn second_order_identity(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("second-order identity");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let f = s.poly(&ring, 1);
        let ders = Der::all(ring.m());
        for &delta in &ders {
            for &zeta in &ders {
                if delta == zeta {
                    continue;
                }
                let r = check_second_order(&ring, &f, delta, zeta);
                if !r.is_zero() {
                    report.fail(
                        case,
                        format!("f = {}, ({delta:?}, {zeta:?}): residual {}", show(&ring, &f), show(&ring, &r)),
                    );
                }
            }
        }
        report.cases += 1;
    }
    report
}

pub fn identities(seed: u64, cases: usize) -> CheckReport {
    let mut r = first_order_identity(seed, cases).merge(second_order_identity(seed.wrapping_add(1), cases));
    r.name = "identities".into();
    r
}

/// `τ(fg) = τ(f)g + fτ(g)` and `τ δ_i f = δ_i τ f`.
pub fn tau_derivation(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("tau derivation");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let f = s.poly(&ring, 1);
        let g = s.poly(&ring, 1);
        let lhs = tau(&ring, &(&f * &g));
        let rhs = &(&tau(&ring, &f) * &g) + &(&f * &tau(&ring, &g));
        if lhs != rhs {
            report.fail(case, format!("product rule fails for f = {}, g = {}", show(&ring, &f), show(&ring, &g)));
        }
        for i in 0..ring.m() {
            if tau(&ring, &ring.apply_delta(i, &f)) != ring.apply_delta(i, &tau(&ring, &f)) {
                report.fail(case, format!("tau does not commute with d{} on f = {}", i + 1, show(&ring, &f)));
            }
        }
        report.cases += 1;
    }
    report
}

/// `τ^k f(∇^k ā) = D^k f(ā)` over `ℚ(t1, t2)`.
pub fn nabla_identity(seed: u64, cases: usize, ks: &[u32]) -> CheckReport {
    let mut report = CheckReport::new("nabla identity");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let m = s.range(1, 3);
        let n = s.range(1, 3);
        let ring = s.ring_with(m, n, 2);
        let f = s.poly(&ring, 1);
        let a = s.point(&ring);
        for &k in ks {
            match nabla_eval(&ring, &f, &a, k) {
                Ok((lhs, rhs)) if lhs == rhs => {}
                Ok(_) => report.fail(case, format!("k = {k}: sides differ for f = {}", show(&ring, &f))),
                Err(e) => report.fail(case, format!("k = {k}: {e}")),
            }
        }
        report.cases += 1;
    }
    report
}

/// Exact division `τ^k(f^k) − k!(τf)^k = f·p`.
pub fn power_cofactor(seed: u64, cases: usize, ks: &[u32]) -> CheckReport {
    let mut report = CheckReport::new("power cofactor");
    let mut s = small(seed);
    for case in 0..cases {
        let ring = s.ring();
        let f = s.nonzero_poly(&ring, 1);
        for &k in ks {
            if let Err(e) = tau_power_cofactor(&ring, &f, k) {
                report.fail(case, format!("k = {k}, f = {}: {e}", show(&ring, &f)));
            }
        }
        report.cases += 1;
    }
    report
}

/// The extension `D′(f(ā)) = τ f(ā, b̄)` on constructed instances.
pub fn extension(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("extension");
    let mut s = Sampler::new(seed);
    let mut case = 0;
    while report.cases < cases {
        case += 1;
        let ring = s.ring();
        let a = s.point(&ring);
        let b = companion(&mut s, &ring, &a, 0.3);
        let gens = match tau_vanishing_generators(&mut s, &ring, &a, &b) {
            Ok(g) if !g.is_empty() => g,
            _ => continue,
        };
        let ext = match extend_derivation(&ring, &gens, &a, &b) {
            Ok(e) => e,
            Err(e) => {
                report.fail(case, format!("constructed instance rejected: {e}"));
                report.cases += 1;
                continue;
            }
        };
        let gen_count = ring.field().generators().len();
        let f = s.poly(&ring, 1);
        let g = s.poly(&ring, 1);
        let h = s.poly(&ring, 1);
        let c = s.base_elem(gen_count);
        let result = (|| -> Result<Vec<&'static str>, EvalError> {
            let mut bad = Vec::new();
            let (df, dg) = (ext.apply(&f)?, ext.apply(&g)?);
            if ext.apply(&(&f + &g))? != df.add(&dg) {
                bad.push("additivity");
            }
            let leibniz = df.mul(&ext.value(&g)?).add(&ext.value(&f)?.mul(&dg));
            if ext.apply(&(&f * &g))? != leibniz {
                bad.push("Leibniz rule");
            }
            for i in 0..ring.m() {
                if ext.apply(&ring.apply_delta(i, &f))? != ring.delta_base(&df, i) {
                    bad.push("commutation with Delta");
                }
            }
            if ext.apply(&DeltaPoly::constant(c.clone()))? != ring.d_base(&c) {
                bad.push("agreement with D on the base field");
            }
            for (j, bj) in b.iter().enumerate() {
                if &ext.apply(&ring.x(j))? != bj {
                    bad.push("value on the point");
                }
            }
            let op = s.op(ring.m(), 1);
            let which = s.range(0, gens.len() - 1);
            let shifted = &f + &(&h * &ring.apply_op(&op, &gens[which]));
            if ext.apply(&shifted)? != df {
                bad.push("independence of the representative");
            }
            let again = extend_derivation(&ring, &gens, &a, &b).expect("same instance");
            if again.apply(&f)? != df {
                bad.push("reproducibility");
            }
            Ok(bad)
        })();
        match result {
            Ok(bad) => {
                for what in bad {
                    report.fail(case, format!("{what} fails for f = {}", show(&ring, &f)));
                }
            }
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

/// Certificates whose target lies in the differential ideal `[A]`:
/// `f = Σ h·θg` and `f^k = f^{k−1}·Σ h·θg`.
pub fn radical_valid(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("radical transfer, f in [A]");
    let mut s = tiny(seed);
    while report.cases < cases {
        let case = report.cases;
        let ring = s.ring();
        let a = s.point(&ring);
        let b = companion(&mut s, &ring, &a, 0.3);
        let gens = match tau_vanishing_generators(&mut s, &ring, &a, &b) {
            Ok(g) if !g.is_empty() => g,
            _ => continue,
        };
        let mut terms = Vec::new();
        for _ in 0..s.range(1, 2) {
            let generator = s.range(0, gens.len() - 1);
            terms.push(CertTerm { generator, op: s.op(ring.m(), 1), cofactor: s.poly(&ring, 1) });
        }
        let f = Certificate { k: 1, terms: terms.clone() }.combination(&ring, &gens);
        let k = s.range(1, 3) as u32;
        let scale = f.pow(k - 1);
        let cert = Certificate {
            k,
            terms: terms.into_iter().map(|t| CertTerm { cofactor: &t.cofactor * &scale, ..t }).collect(),
        };
        match radical_transfer_check(&ring, &gens, &a, &b, &f, &cert) {
            Ok(RadicalVerdict::Verified) => {}
            Ok(v) => report.fail(case, format!("k = {k}, f = {}: {v:?}", show(&ring, &f))),
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

/// Certificates `f^k = 1·g` with `A = {g}`, `g = f^k`, `f(ā) = 0`. The
/// hypothesis on `A` holds for every `b̄` once `k ≥ 2`. Case 0 is
/// `A = {x²}`, `ā = 0`, `b̄ = 1` over `ℚ`.
pub fn radical_general(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("radical transfer, f in {A}");
    let mut s = Sampler::new(seed);
    while report.cases < cases {
        let case = report.cases;
        let (ring, f, a, b, k) = if case == 0 {
            let ring = DeltaRing::new(Arc::new(crate::base_field::BaseField::rationals(2)), 1);
            let x = ring.x(0);
            (ring, x, vec![BaseElem::zero()], vec![BaseElem::one()], 2)
        } else {
            let ring = s.ring();
            let a = s.point(&ring);
            let f = match vanishing_at(&ring, &s.nonzero_poly(&ring, 1), &a) {
                Ok(f) if !f.is_zero() => f,
                _ => continue,
            };
            let b = companion(&mut s, &ring, &a, 0.3);
            let k = s.range(1, 3) as u32;
            (ring, f, a, b, k)
        };
        let gens = vec![f.pow(k)];
        let cert = Certificate {
            k,
            terms: vec![CertTerm { generator: 0, op: ring.identity_op(), cofactor: DeltaPoly::one() }],
        };
        match radical_transfer_check(&ring, &gens, &a, &b, &f, &cert) {
            Ok(RadicalVerdict::Verified) => {}
            Ok(RadicalVerdict::TauNonzero { value }) => report.fail(
                case,
                format!(
                    "k = {k}, f = {}: tau(f)(a, b) = {}",
                    show(&ring, &f),
                    crate::frontend::print_base_elem(&value, ring.field().generators())
                ),
            ),
            Ok(v) => report.fail(case, format!("{v:?}")),
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

/// `(ā, Dā) ∈ τV` for constructed `ā ∈ V`.
pub fn section(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("section");
    let mut s = Sampler::new(seed);
    while report.cases < cases {
        let case = report.cases;
        let ring = s.ring();
        let a = s.point(&ring);
        let gens: Vec<DeltaPoly> = (0..s.range(1, 3))
            .filter_map(|_| vanishing_at(&ring, &s.poly(&ring, 1), &a).ok())
            .filter(|g| !g.is_zero())
            .collect();
        let Ok(v) = VarietySystem::new(gens) else { continue };
        match section_contains(&ring, &v, &a) {
            Ok(true) => {}
            Ok(false) => report.fail(case, format!("(a, Da) misses tau V for V = {}", show_all(&ring, &v))),
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

fn show_all(ring: &DeltaRing, v: &VarietySystem) -> String {
    let parts: Vec<String> = v.generators().iter().map(|g| show(ring, g)).collect();
    format!("V({})", parts.join(", "))
}

/// `(ā, b̄ + c̄)` stays in `τV` for `b̄` in the tangent fiber and `c̄` in the
/// prolongation fiber.
pub fn torsor(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("torsor");
    let mut s = Sampler::new(seed);
    while report.cases < cases {
        let case = report.cases;
        let ring = s.ring();
        let a = s.point(&ring);
        let b = s.point(&ring);
        let functional = |f: &DeltaPoly| evaluate_pair(&FieldTarget { ring: &ring }, &tangent_part(f), &a, &b);
        let mut gens = Vec::new();
        for _ in 0..s.range(1, 2) {
            if let Ok(Some(g)) = corrected_generator(&mut s, &ring, &a, &functional) {
                gens.push(g);
            }
        }
        let Ok(v) = VarietySystem::new(gens) else { continue };
        let c = d_point(&ring, &a);
        match torsor_act(&ring, &v, &a, &b, &c) {
            Ok(act) if act.member && act.linear => {}
            Ok(act) => report.fail(
                case,
                format!("member = {}, linear = {} for {}", act.member, act.linear, show_all(&ring, &v)),
            ),
            Err(e) => report.fail(case, format!("{e} for {}", show_all(&ring, &v))),
        }
        report.cases += 1;
    }
    report
}

/// `τ f − df·θȳ = f^D` always, and `τ f = df·θȳ` over `D`-constants.
pub fn tangent_coincidence(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("tangent coincidence");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let f = s.poly(&ring, 1);
        if tau(&ring, &f) - tangent_part(&f) != ring.coeff_d(&f) {
            report.fail(case, format!("tau - tangent part is not f^D for f = {}", show(&ring, &f)));
        }
        let field = ring.field().clone();
        let constant = f.map_coeffs(|c| {
            if field.is_d_constant(c) {
                c.clone()
            } else {
                BaseElem::rational(c.num().terms().next().map(|(_, q)| q.clone()).unwrap_or_default())
            }
        });
        if tau(&ring, &constant) != tangent_part(&constant) {
            report.fail(case, format!("systems differ over D-constants for f = {}", show(&ring, &constant)));
        }
        report.cases += 1;
    }
    report
}

/// `V = 𝒱(p̃·q̃)` with components `𝒱(p̃)`, `𝒱(q̃)`, `p̃(ā) = 0 ≠ q̃(ā)`.
pub fn component_family(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("component fibers");
    let mut s = Sampler::new(seed);
    while report.cases < cases {
        let case = report.cases;
        let ring = s.ring();
        let a = s.point(&ring);
        let Ok(p) = vanishing_at(&ring, &s.poly(&ring, 1), &a) else { continue };
        let q = s.poly(&ring, 1);
        let target = FieldTarget { ring: &ring };
        if p.is_zero() || evaluate(&target, &q, &a).map(|v| v.is_zero()).unwrap_or(true) {
            continue;
        }
        let v = VarietySystem::new(vec![&p * &q]).expect("nonzero");
        let comps = vec![VarietySystem::new(vec![p.clone()]).unwrap(), VarietySystem::new(vec![q.clone()]).unwrap()];
        let samples = vec![d_point(&ring, &a), s.point(&ring), s.point(&ring)];
        match component_fiber_check(&ring, &v, &comps, 0, &[None, Some(q.clone())], &a, &samples) {
            Ok(FiberVerdict::Agree { .. }) => {}
            Ok(verdict) => report.fail(case, format!("{verdict:?} for {}", show_all(&ring, &v))),
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

/// Random invertible `M` yield commuting `(Δ′, D′)`.
pub fn commute(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("commute");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let m = s.invertible_matrix(ring.m() + 1);
        match check_transformed_commute(&m, ring.field(), ring.n()) {
            Ok(Ok(())) => {}
            Ok(Err(fail)) => report.fail(case, format!("M = {m}: {fail:?}")),
            Err(e) => report.fail(case, format!("M = {m}: {e}")),
        }
        report.cases += 1;
    }
    report
}

/// `rewrite_jets(rewrite_jets(f, M), M⁻¹) = f` over the full alphabet.
pub fn rewrite_roundtrip(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("rewrite round trip");
    let mut s = small(seed);
    for case in 0..cases {
        let ring = s.ring();
        let full = DeltaRing::full(ring.field().clone(), ring.n());
        let f = s.poly(&full, 1);
        let m = s.invertible_matrix(full.m());
        let inv = m.inverse().expect("invertible");
        match rewrite_jets(&f, &m).and_then(|g| rewrite_jets(&g, &inv)) {
            Ok(back) if back == f => {}
            Ok(back) => report.fail(case, format!("M = {m}: {} came back as {}", show(&full, &f), show(&full, &back))),
            Err(e) => report.fail(case, e.to_string()),
        }
        report.cases += 1;
    }
    report
}

/// `parse(print(f)) = f` and printing is idempotent.
pub fn print_roundtrip(seed: u64, cases: usize) -> CheckReport {
    let mut report = CheckReport::new("print round trip");
    let mut s = Sampler::new(seed);
    for case in 0..cases {
        let ring = s.ring();
        let blocks = s.range(1, 4);
        let f = s.poly(&ring, blocks);
        let names = ring.field().generators();
        let ctx = ParseContext::new(names, ring.n(), ring.m());
        let text = print_poly(&f, names);
        match parse_poly(&text, ctx) {
            Ok(g) if g == f => {
                if print_poly(&g, names) != text {
                    report.fail(case, format!("printing is not idempotent on {text}"));
                }
            }
            Ok(g) => report.fail(case, format!("{text} parsed as {}", print_poly(&g, names))),
            Err(e) => report.fail(case, format!("{text}: {e}")),
        }
        report.cases += 1;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_pass() {
        for r in [
            identities(1, 10),
            tau_derivation(1, 10),
            nabla_identity(1, 5, &[1, 2]),
            power_cofactor(1, 5, &[1, 2]),
            extension(1, 10),
            radical_valid(1, 10),
            section(1, 10),
            torsor(1, 10),
            tangent_coincidence(1, 10),
            component_family(1, 10),
            commute(1, 10),
            rewrite_roundtrip(1, 10),
            print_roundtrip(1, 20),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn general_family_fails_at_the_counterexample() {
        let r = radical_general(1, 1);
        assert_eq!(r.failures.len(), 1);
        assert!(r.failures[0].contains("tau(f)(a, b) = 1"), "{r}");
    }
}
