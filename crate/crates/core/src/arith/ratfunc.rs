//! Rational functions over ℚ.
//!
//! Values are kept in lowest terms with a denominator that is monic under
//! lex order, so equality is structural. Sums and products cancel common
//! factors of the denominators first, which keeps the GCD inputs small.

use super::gcd::{gcd, MultiPoly};
use super::groebner::{leading_term, poly_divide_exact};
use super::order::MonomialOrder;
use super::poly::{Coeff, Field, Poly};
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

fn quotient(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if let Some(c) = b.as_constant() {
        return a.div_scalar(&c);
    }
    poly_divide_exact(a, b, &MonomialOrder::lex()).expect("exact division by a common factor")
}

fn is_one(p: &MultiPoly) -> bool {
    p.as_constant().is_some_and(|c| c.is_one())
}

impl RatFunc {
    /// `None` when the denominator is the zero polynomial.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(q))
    }

    pub fn generator(index: usize) -> Self {
        Self::from_poly(MultiPoly::var(index))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// `num/den` for coprime inputs: only the scaling is normalized.
    fn coprime(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(d) = den.as_constant() {
            return Self::from_poly(if d.is_one() { num } else { num.div_scalar(&d) });
        }
        let lc = leading_term(&den, &MonomialOrder::lex()).map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc { num: num.div_scalar(&lc), den: den.div_scalar(&lc) }
        }
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() || den.as_constant().is_some() {
            return Self::coprime(num, den);
        }
        let g = gcd(&num, &den);
        if is_one(&g) {
            return Self::coprime(num, den);
        }
        Self::coprime(quotient(&num, &g), quotient(&den, &g))
    }

    /// Lowest terms with a monic denominator; values are always kept in
    /// this form.
    pub fn reduced(&self) -> Self {
        self.clone()
    }

    /// Partial derivative with respect to generator `index`.
    pub fn partial(&self, index: usize) -> Self {
        let dn = self.num.partial(&index);
        if self.is_polynomial() {
            return Self::from_poly(dn);
        }
        // (n/d)′ = (n′d − nd′)/d²
        let dd = self.den.partial(&index);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn generators(&self) -> Vec<usize> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v.sort();
        v.dedup();
        v
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(&self.num + &other.num);
        }
        if self.den == other.den {
            return Self::reduce(&self.num + &other.num, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if is_one(&g) {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return Self::coprime(num, &self.den * &other.den);
        }
        let (d1, d2) = (quotient(&self.den, &g), quotient(&other.den, &g));
        let num = &(&self.num * &d2) + &(&other.num * &d1);
        let den = &self.den * &d2;
        let h = gcd(&num, &g);
        if is_one(&h) {
            Self::coprime(num, den)
        } else {
            Self::coprime(quotient(&num, &h), quotient(&den, &h))
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(&self.num * &other.num);
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let num = &quotient(&self.num, &g1) * &quotient(&other.num, &g2);
        let den = &quotient(&self.den, &g2) * &quotient(&other.den, &g1);
        Self::coprime(num, den)
    }
    fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::rational(q.clone())
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        Self::coprime(self.den.clone(), self.num.clone())
    }
}

impl From<Rational> for RatFunc {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<Poly<usize, Rational>> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}
