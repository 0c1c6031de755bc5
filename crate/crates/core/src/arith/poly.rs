//! Sparse commutative polynomials, generic over the variable type and the
//! coefficient field.
//!
//! A monomial is a sorted list of `(variable, exponent)` pairs, so the set of
//! variables never has to be fixed up front. Terms live in a `BTreeMap`
//! keyed by the monomial; zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;
use num_traits::{One, Zero};

/// Coefficient ring operations. Equality must be semantic (two
/// representations of the same element compare equal).
pub trait Coeff: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A coefficient ring that is a field.
pub trait Field: Coeff {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero rational");
        self.recip()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V> {
    powers: Vec<(V, u32)>,
}

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: V) -> Self {
        Monomial { powers: vec![(v, 1)] }
    }

    pub fn from_powers(mut powers: Vec<(V, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(V, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((last, le)) if *last == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn powers(&self) -> &[(V, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.powers
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, ea) = &self.powers[i];
            let (b, eb) = &other.powers[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.powers[i..]);
        out.extend_from_slice(&other.powers[j..]);
        Monomial { powers: out }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.powers.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(other.powers.len());
        for (v, e) in &other.powers {
            let d = self.exponent(v);
            if d > *e {
                return None;
            }
            if e - d > 0 {
                out.push((v.clone(), e - d));
            }
        }
        if self.powers.iter().any(|(v, _)| other.exponent(v) == 0) {
            return None;
        }
        Some(Monomial { powers: out })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut powers = self.powers.clone();
        for (v, e) in &other.powers {
            match powers.iter_mut().find(|(w, _)| w == v) {
                Some((_, le)) => *le = (*le).max(*e),
                None => powers.push((v.clone(), *e)),
            }
        }
        Monomial::from_powers(powers)
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.powers.iter().all(|(v, _)| other.exponent(v) == 0)
    }

    /// Removes one power of `v`, returning the old exponent, or `None` if
    /// `v` does not occur.
    pub fn without_one(&self, v: &V) -> Option<(u32, Self)> {
        let idx = self.powers.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let mut powers = self.powers.clone();
        let e = powers[idx].1;
        if e == 1 {
            powers.remove(idx);
        } else {
            powers[idx].1 -= 1;
        }
        Some((e, Monomial { powers }))
    }

    /// Expanded factor list: each variable repeated by its exponent.
    pub fn factors(&self) -> impl Iterator<Item = &V> {
        self.powers
            .iter()
            .flat_map(|(v, e)| std::iter::repeat(v).take(*e as usize))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<V: Ord, C> {
    terms: BTreeMap<Monomial<V>, C>,
}

impl<V: Ord + Clone + Debug, C: Coeff> Default for Poly<V, C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone + Debug, C: Coeff> Poly<V, C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: V) -> Self {
        Self::monomial(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial<V>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial<V>, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial<V>, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The constant term, if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &C, shift: &Monomial<V>) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(shift.mul(m), c.mul(scale));
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, a)| {
                    let p = a.mul(c);
                    (!p.is_zero()).then(|| (m.clone(), p))
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>, c: &C) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c, m);
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Variables occurring in the polynomial, in ascending order.
    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: &V) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.without_one(v) {
                out.add_term(rest, c.mul(&C::from_rational(&Rational::from_integer(e.into()))));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Poly<V, D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Renames variables; the map need not be injective.
    pub fn map_vars<W: Ord + Clone + Debug>(&self, mut f: impl FnMut(&V) -> W) -> Poly<W, C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let powers = m.powers().iter().map(|(v, e)| (f(v), *e)).collect();
            out.add_term(Monomial::from_powers(powers), c.clone());
        }
        out
    }

    /// Ring homomorphism sending each variable to a polynomial (in a
    /// possibly different variable type) and each coefficient through
    /// `embed`. Powers of images are cached per call.
    pub fn substitute<W: Ord + Clone + Debug>(
        &self,
        mut image: impl FnMut(&V) -> Poly<W, C>,
    ) -> Poly<W, C> {
        let mut cache: BTreeMap<V, Vec<Poly<W, C>>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m.powers() {
                let pows = cache.entry(v.clone()).or_insert_with(|| vec![Poly::one(), image(v)]);
                while pows.len() <= *e as usize {
                    let next = &pows[pows.len() - 1] * &pows[1];
                    pows.push(next);
                }
                term = &term * &pows[*e as usize];
            }
            out = out + term;
        }
        out
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { c.neg() } else { c.clone() });
        }
        out
    }
}

impl<V: Ord + Clone + Debug, C: Field> Poly<V, C> {
    /// Divides every coefficient by `c`.
    pub fn div_scalar(&self, c: &C) -> Self {
        self.scale(&c.inv())
    }
}

impl<'a, V: Ord + Clone + Debug, C: Coeff> Add for &'a Poly<V, C> {
    type Output = Poly<V, C>;
    fn add(self, rhs: Self) -> Poly<V, C> {
        self.combine(rhs, false)
    }
}

impl<V: Ord + Clone + Debug, C: Coeff> Add for Poly<V, C> {
    type Output = Poly<V, C>;
    fn add(mut self, rhs: Self) -> Poly<V, C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a, V: Ord + Clone + Debug, C: Coeff> Sub for &'a Poly<V, C> {
    type Output = Poly<V, C>;
    fn sub(self, rhs: Self) -> Poly<V, C> {
        self.combine(rhs, true)
    }
}

impl<V: Ord + Clone + Debug, C: Coeff> Sub for Poly<V, C> {
    type Output = Poly<V, C>;
    fn sub(mut self, rhs: Self) -> Poly<V, C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c.neg());
        }
        self
    }
}

impl<'a, V: Ord + Clone + Debug, C: Coeff> Mul for &'a Poly<V, C> {
    type Output = Poly<V, C>;
    fn mul(self, rhs: Self) -> Poly<V, C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_scaled(rhs, c, m);
        }
        out
    }
}

impl<V: Ord + Clone + Debug, C: Coeff> Mul for Poly<V, C> {
    type Output = Poly<V, C>;
    fn mul(self, rhs: Self) -> Poly<V, C> {
        &self * &rhs
    }
}

impl<V: Ord + Clone + Debug, C: Coeff> Neg for Poly<V, C> {
    type Output = Poly<V, C>;
    fn neg(self) -> Poly<V, C> {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, c.neg())).collect(),
        }
    }
}

impl<'a, V: Ord + Clone + Debug, C: Coeff> Neg for &'a Poly<V, C> {
    type Output = Poly<V, C>;
    fn neg(self) -> Poly<V, C> {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    type P = Poly<usize, Rational>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &(&x() + &y()) - &x();
        assert_eq!(p, y());
        assert_eq!(p.len(), 1);
        assert!((&x() - &x()).is_zero());
    }

    #[test]
    fn pow_and_partial() {
        let p = (&x() + &y()).pow(3);
        assert_eq!(p.len(), 4);
        let dp = p.partial(&0);
        assert_eq!(dp, (&x() + &y()).pow(2).scale(&int(3)));
    }

    #[test]
    fn monomial_quotient() {
        let a = Monomial::from_powers(vec![(0usize, 2), (1, 1)]);
        let b = Monomial::from_powers(vec![(0usize, 1)]);
        assert!(b.divides(&a));
        assert_eq!(b.quotient_of(&a), Some(Monomial::from_powers(vec![(0, 1), (1, 1)])));
        assert_eq!(a.quotient_of(&b), None);
        assert_eq!(a.lcm(&Monomial::var(2)).degree(), 4);
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let p = &x().pow(2) * &y();
        let q = p.substitute(|v| if *v == 0 { &y() + &P::one() } else { x() });
        assert_eq!(q, &(&y() + &P::one()).pow(2) * &x());
    }
}
