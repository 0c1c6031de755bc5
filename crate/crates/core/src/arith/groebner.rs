//! Multivariate division and a bounded Buchberger engine.
//!
//! The engine is meant for desk-scale membership checks. It never guesses:
//! when a step or degree cap is reached it reports [`LimitExceeded`] and the
//! caller treats the question as inconclusive.

use std::fmt::Debug;

use thiserror::Error;

use super::order::MonomialOrder;
use super::poly::{Field, Monomial, Poly};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("division leaves a nonzero remainder")]
pub struct DivisionFails<V: Ord + Debug, C: Debug> {
    pub remainder: Poly<V, C>,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("Gröbner computation hit its {which} limit")]
pub struct LimitExceeded {
    pub which: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerLimits {
    /// Maximum number of S-pairs reduced.
    pub max_steps: usize,
    /// Maximum total degree of an S-pair lcm.
    pub max_degree: u32,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_steps: 2_000, max_degree: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Inconclusive,
}

pub fn leading_term<'a, V: Ord + Clone + Debug, C: Field>(
    p: &'a Poly<V, C>,
    ord: &MonomialOrder<V>,
) -> Option<(&'a Monomial<V>, &'a C)> {
    p.terms().max_by(|a, b| ord.compare(a.0, b.0))
}

/// Full multivariate division of `g` by `divisors`.
///
/// Returns the quotients and the remainder; no term of the remainder is
/// divisible by a leading monomial of a divisor.
pub fn divide<V: Ord + Clone + Debug, C: Field>(
    g: &Poly<V, C>,
    divisors: &[Poly<V, C>],
    ord: &MonomialOrder<V>,
) -> (Vec<Poly<V, C>>, Poly<V, C>) {
    let leads: Vec<Option<(Monomial<V>, C)>> = divisors
        .iter()
        .map(|d| leading_term(d, ord).map(|(m, c)| (m.clone(), c.inv())))
        .collect();
    let mut quotients = vec![Poly::zero(); divisors.len()];
    let mut remainder = Poly::zero();
    let mut p = g.clone();
    while let Some((lm, lc)) = leading_term(&p, ord).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads.iter().enumerate().find_map(|(i, l)| {
            let (dm, dinv) = l.as_ref()?;
            dm.quotient_of(&lm).map(|q| (i, q, lc.mul(dinv)))
        });
        match hit {
            Some((i, q, c)) => {
                p.add_scaled(&divisors[i], &c.neg(), &q);
                quotients[i].add_term(q, c);
            }
            None => {
                remainder.add_term(lm.clone(), lc.clone());
                p.add_term(lm, lc.neg());
            }
        }
    }
    (quotients, remainder)
}

/// Exact quotient `g / f`. A singleton is a Gröbner basis of the principal
/// ideal it generates, so a nonzero remainder certifies `f ∤ g`.
pub fn poly_divide_exact<V: Ord + Clone + Debug, C: Field>(
    g: &Poly<V, C>,
    f: &Poly<V, C>,
    ord: &MonomialOrder<V>,
) -> Result<Poly<V, C>, DivisionFails<V, C>> {
    assert!(!f.is_zero(), "division by the zero polynomial");
    let (mut q, r) = divide(g, std::slice::from_ref(f), ord);
    if r.is_zero() {
        Ok(q.pop().unwrap_or_default())
    } else {
        Err(DivisionFails { remainder: r })
    }
}

pub fn normal_form<V: Ord + Clone + Debug, C: Field>(
    g: &Poly<V, C>,
    basis: &[Poly<V, C>],
    ord: &MonomialOrder<V>,
) -> Poly<V, C> {
    divide(g, basis, ord).1
}

fn s_polynomial<V: Ord + Clone + Debug, C: Field>(
    f: &Poly<V, C>,
    g: &Poly<V, C>,
    ord: &MonomialOrder<V>,
) -> Poly<V, C> {
    let (fm, fc) = leading_term(f, ord).expect("nonzero");
    let (gm, gc) = leading_term(g, ord).expect("nonzero");
    let l = fm.lcm(gm);
    let fa = fm.quotient_of(&l).expect("lcm divisible");
    let ga = gm.quotient_of(&l).expect("lcm divisible");
    let mut s = f.mul_monomial(&fa, &fc.inv());
    s.add_scaled(g, &gc.inv().neg(), &ga);
    s
}

fn make_monic<V: Ord + Clone + Debug, C: Field>(p: &Poly<V, C>, ord: &MonomialOrder<V>) -> Poly<V, C> {
    match leading_term(p, ord) {
        Some((_, c)) => p.div_scalar(c),
        None => p.clone(),
    }
}

/// Buchberger's algorithm with the coprime (first) and chain (second)
/// criteria. Pairs are processed in order of increasing lcm degree; the
/// result is the reduced Gröbner basis.
pub fn groebner_basis<V: Ord + Clone + Debug, C: Field>(
    gens: &[Poly<V, C>],
    ord: &MonomialOrder<V>,
    limits: GroebnerLimits,
) -> Result<Vec<Poly<V, C>>, LimitExceeded> {
    if limits.max_steps == 0 {
        return Err(LimitExceeded { which: "step" });
    }
    let mut basis: Vec<Poly<V, C>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(g, ord))
        .collect();
    let lead = |p: &Poly<V, C>| leading_term(p, ord).map(|(m, _)| m.clone()).expect("nonzero");
    let mut leads: Vec<Monomial<V>> = basis.iter().map(&lead).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done: std::collections::BTreeSet<(usize, usize)> = Default::default();
    let mut steps = 0usize;
    while !pairs.is_empty() {
        // smallest lcm degree first; ties broken by insertion order
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(ia, a), (ib, b)| {
                let da = leads[a.0].lcm(&leads[a.1]).degree();
                let db = leads[b.0].lcm(&leads[b.1]).degree();
                da.cmp(&db).then(ia.cmp(ib))
            })
            .expect("nonempty");
        let (i, j) = pairs.remove(idx);
        done.insert((i, j));
        let l = leads[i].lcm(&leads[j]);
        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if l.degree() > limits.max_degree {
            return Err(LimitExceeded { which: "degree" });
        }
        steps += 1;
        if steps > limits.max_steps {
            return Err(LimitExceeded { which: "step" });
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j], ord), &basis, ord);
        if !r.is_zero() {
            let r = make_monic(&r, ord);
            let k = basis.len();
            leads.push(lead(&r));
            basis.push(r);
            for a in 0..k {
                pairs.push((a, k));
            }
        }
    }
    Ok(reduce_basis(basis, ord))
}

fn reduce_basis<V: Ord + Clone + Debug, C: Field>(
    basis: Vec<Poly<V, C>>,
    ord: &MonomialOrder<V>,
) -> Vec<Poly<V, C>> {
    let leads: Vec<Monomial<V>> = basis
        .iter()
        .map(|p| leading_term(p, ord).map(|(m, _)| m.clone()).expect("nonzero"))
        .collect();
    // minimal: drop elements whose lead is divisible by another lead
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| {
            j != i
                && leads[j].divides(&leads[i])
                && (leads[j] != leads[i] || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Poly<V, C>> = keep.into_iter().map(|i| basis[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, p) in minimal.iter().enumerate() {
        let others: Vec<Poly<V, C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        let (lm, lc) = leading_term(p, ord).map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let tail = {
            let mut t = p.clone();
            t.add_term(lm.clone(), lc.neg());
            t
        };
        let mut r = normal_form(&tail, &others, ord);
        r.add_term(lm, lc);
        reduced.push(make_monic(&r, ord));
    }
    reduced.sort_by(|a, b| {
        let la = leading_term(a, ord).map(|(m, _)| m.clone()).expect("nonzero");
        let lb = leading_term(b, ord).map(|(m, _)| m.clone()).expect("nonzero");
        ord.compare(&la, &lb)
    });
    reduced
}

pub fn ideal_member<V: Ord + Clone + Debug, C: Field>(
    f: &Poly<V, C>,
    gens: &[Poly<V, C>],
    ord: &MonomialOrder<V>,
    limits: GroebnerLimits,
) -> Membership {
    match groebner_basis(gens, ord, limits) {
        Ok(basis) => {
            if normal_form(f, &basis, ord).is_zero() {
                Membership::Yes
            } else {
                Membership::No
            }
        }
        Err(_) => Membership::Inconclusive,
    }
}

/// Verifies Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis<V: Ord + Clone + Debug, C: Field>(
    basis: &[Poly<V, C>],
    ord: &MonomialOrder<V>,
) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            let s = s_polynomial(&basis[i], &basis[j], ord);
            if !normal_form(&s, basis, ord).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, Rational};

    type P = Poly<usize, Rational>;

    fn x() -> P {
        P::var(1)
    }
    fn y() -> P {
        P::var(0)
    }
    fn c(n: i64) -> P {
        P::constant(int(n))
    }

    fn ord() -> MonomialOrder<usize> {
        MonomialOrder::degrevlex()
    }

    #[test]
    fn exact_division_examples() {
        let q = poly_divide_exact(&(&x().pow(2) - &c(1)), &(&x() - &c(1)), &ord()).unwrap();
        assert_eq!(q, &x() + &c(1));
        let q = poly_divide_exact(&P::zero(), &(&x() + &y()), &ord()).unwrap();
        assert!(q.is_zero());
        let err = poly_divide_exact(&(&(&x() * &y()) + &c(1)), &x(), &ord()).unwrap_err();
        assert_eq!(err.remainder, c(1));
    }

    #[test]
    fn groebner_examples() {
        let b = groebner_basis(&[x()], &ord(), GroebnerLimits::default()).unwrap();
        assert_eq!(b, vec![x()]);

        let gens = [x().pow(2), &x() * &y()];
        let b = groebner_basis(&gens, &ord(), GroebnerLimits::default()).unwrap();
        assert!(is_groebner_basis(&b, &ord()));
        assert!(normal_form(&(&x() * &y().pow(2)), &b, &ord()).is_zero());
        assert_eq!(normal_form(&y(), &b, &ord()), y());

        let gens = [&x() - &y(), &y() - &c(1)];
        let b = groebner_basis(&gens, &ord(), GroebnerLimits::default()).unwrap();
        assert_eq!(normal_form(&x(), &b, &ord()), c(1));
    }

    #[test]
    fn membership_examples() {
        let lim = GroebnerLimits::default();
        assert_eq!(ideal_member(&(&x().pow(2) - &c(1)), &[&x() - &c(1)], &ord(), lim), Membership::Yes);
        assert_eq!(ideal_member(&c(1), &[x()], &ord(), lim), Membership::No);
        let zero = GroebnerLimits { max_steps: 0, max_degree: 0 };
        assert_eq!(ideal_member(&x(), &[x()], &ord(), zero), Membership::Inconclusive);
    }

    #[test]
    fn degree_cap_is_inconclusive() {
        // cyclic-3 needs lcms beyond degree 2
        let (a, b, z) = (P::var(0), P::var(1), P::var(2));
        let gens = [
            &(&a + &b) + &z,
            &(&(&a * &b) + &(&b * &z)) + &(&z * &a),
            &(&(&a * &b) * &z) - &c(1),
        ];
        let tight = GroebnerLimits { max_steps: 100, max_degree: 2 };
        assert!(groebner_basis(&gens, &ord(), tight).is_err());
        let b = groebner_basis(&gens, &ord(), GroebnerLimits::default()).unwrap();
        assert!(is_groebner_basis(&b, &ord()));
        assert_eq!(ideal_member(&(&a.pow(3) - &c(1)), &gens, &ord(), GroebnerLimits::default()), Membership::Yes);
    }
}
