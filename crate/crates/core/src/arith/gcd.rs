//! Multivariate GCD over ℚ by recursive primitive remainder sequences.
//!
//! A polynomial is viewed as univariate in its largest variable with
//! coefficients in ℚ[remaining variables]; contents are taken recursively.

use num_bigint::BigInt;
use num_integer::Integer;

use super::groebner::poly_divide_exact;
use super::order::MonomialOrder;
use super::poly::{Coeff, Monomial, Poly};
use super::rational::Rational;

pub type MultiPoly = Poly<usize, Rational>;

fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<usize> {
    a.variables().into_iter().chain(b.variables()).max()
}

/// Coefficients of `a` as a polynomial in `v`, indexed by power.
fn coefficients_in(a: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(); a.degree_in(&v) as usize + 1];
    for (m, c) in a.terms() {
        let e = m.exponent(&v);
        let rest: Vec<(usize, u32)> = m.powers().iter().filter(|(w, _)| *w != v).cloned().collect();
        out[e as usize].add_term(Monomial::from_powers(rest), c.clone());
    }
    out
}

fn leading_coeff_in(a: &MultiPoly, v: usize) -> MultiPoly {
    coefficients_in(a, v).pop().unwrap_or_default()
}

fn exact_quotient(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    poly_divide_exact(a, b, &MonomialOrder::lex()).expect("gcd cofactor must divide exactly")
}

fn content_in(a: &MultiPoly, v: usize) -> MultiPoly {
    coefficients_in(a, v)
        .iter()
        .fold(MultiPoly::zero(), |acc, c| gcd_raw(&acc, c))
}

/// Scales `a` so its coefficients are coprime integers.
fn integer_primitive(a: &MultiPoly) -> MultiPoly {
    let mut num: BigInt = num_traits::Zero::zero();
    let mut den: BigInt = num_traits::One::one();
    for (_, c) in a.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num_traits::Zero::is_zero(&num) {
        return a.clone();
    }
    a.scale(&Rational::new(den, num))
}

fn primitive_part_in(a: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(a, v);
    if c.is_zero() {
        return a.clone();
    }
    integer_primitive(&exact_quotient(a, &c))
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(&v);
    let lb = leading_coeff_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(&v) >= db {
        let dr = r.degree_in(&v);
        let lr = leading_coeff_in(&r, v);
        let shift = Monomial::from_powers(vec![(v, dr - db)]);
        let mut next = &lb * &r;
        next = next - (&lr * b).mul_monomial(&shift, &Rational::one());
        r = next;
    }
    r
}

/// Largest evaluation point, in bits, the heuristic GCD will try.
const HEURISTIC_BITS: u64 = 20_000;

fn integer_content(a: &MultiPoly) -> BigInt {
    a.terms().fold(BigInt::default(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(a: &MultiPoly) -> BigInt {
    a.terms().map(|(_, c)| num_traits::Signed::abs(c.numer())).max().unwrap_or_default()
}

fn evaluate_at(a: &MultiPoly, v: usize, xi: &BigInt) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (m, c) in a.terms() {
        let rest: Vec<(usize, u32)> = m.powers().iter().filter(|(w, _)| *w != v).cloned().collect();
        let value = c * Rational::from_integer(num_traits::Pow::pow(xi, m.exponent(&v)));
        out.add_term(Monomial::from_powers(rest), value);
    }
    out
}

/// Reads `gamma` as digits in base `xi` with symmetric residues, the
/// `i`-th digit becoming the coefficient of `v^i`.
fn interpolate(gamma: &MultiPoly, v: usize, xi: &BigInt, max_degree: u32) -> Option<MultiPoly> {
    let half = xi / 2;
    let mut rest = gamma.clone();
    let mut out = MultiPoly::zero();
    let mut i = 0;
    while !rest.is_zero() {
        if i > max_degree {
            return None;
        }
        let mut digit = MultiPoly::zero();
        for (m, c) in rest.terms() {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(m.clone(), Rational::from_integer(r));
        }
        rest = (&rest - &digit).div_scalar(&Rational::from_integer(xi.clone()));
        out = out + digit.mul_monomial(&Monomial::from_powers(vec![(v, i)]), &Rational::one());
        i += 1;
    }
    Some(out)
}

fn divides(g: &MultiPoly, a: &MultiPoly) -> bool {
    poly_divide_exact(a, g, &MonomialOrder::lex()).is_ok()
}

/// Heuristic GCD of polynomials with coprime integer coefficients: the
/// GCD of the values at a large integer is lifted back digit by digit and
/// accepted only if it divides both inputs.
fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let Some(v) = main_var(a, b) else {
        let (x, y) = (a.as_constant()?, b.as_constant()?);
        return Some(MultiPoly::constant(Rational::from_integer(x.numer().gcd(y.numer()))));
    };
    let max_degree = a.degree_in(&v).min(b.degree_in(&v));
    let mut xi: BigInt = 2 * max_norm(a).min(max_norm(b)) + 29;
    for _ in 0..6 {
        if xi.bits() * (max_degree as u64 + 1) > HEURISTIC_BITS {
            return None;
        }
        let (ea, eb) = (evaluate_at(a, v, &xi), evaluate_at(b, v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic_gcd(&ea, &eb)?;
            if let Some(g) = interpolate(&gamma, v, &xi, max_degree) {
                let g = integer_primitive(&g);
                if !g.is_zero() && divides(&g, a) && divides(&g, b) {
                    let content = integer_content(a).gcd(&integer_content(b));
                    return Some(g.scale(&Rational::from_integer(content)));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn gcd_raw(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let Some(v) = main_var(a, b) else {
        return MultiPoly::one();
    };
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MultiPoly::one();
    }
    let (da, db) = (a.degree_in(&v), b.degree_in(&v));
    if da == 0 {
        return gcd_raw(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_raw(&content_in(a, v), b);
    }
    if let Some(g) = heuristic_gcd(&integer_primitive(a), &integer_primitive(b)) {
        return g;
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let content = gcd_raw(&ca, &cb);
    let (mut p, mut q) = (integer_primitive(&exact_quotient(a, &ca)), integer_primitive(&exact_quotient(b, &cb)));
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            q = MultiPoly::one();
            break;
        }
        p = q;
        q = primitive_part_in(&r, v);
    }
    &content * &primitive_part_in(&q, v)
}

/// Divides by the leading coefficient under lex so the result is unique.
pub fn monic(a: &MultiPoly) -> MultiPoly {
    match super::groebner::leading_term(a, &MonomialOrder::lex()) {
        Some((_, c)) => a.div_scalar(c),
        None => a.clone(),
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    monic(&gcd_raw(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn v(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }
    fn c(n: i64) -> MultiPoly {
        MultiPoly::constant(int(n))
    }

    #[test]
    fn univariate() {
        let a = &(&v(0) - &c(1)) * &(&v(0) + &c(2));
        let b = &(&v(0) - &c(1)) * &(&v(0) - &c(3));
        assert_eq!(gcd(&a, &b), &v(0) - &c(1));
        assert_eq!(gcd(&a, &c(5)), c(1));
        assert_eq!(gcd(&MultiPoly::zero(), &a.scale(&int(3))), monic(&a));
    }

    #[test]
    fn bivariate_common_factor() {
        let g = &(&v(0) * &v(1)) + &c(1);
        let a = &g * &(&v(0) + &v(1));
        let b = &g * &(&v(0).pow(2) - &v(1));
        assert_eq!(gcd(&a, &b), monic(&g));
    }

    #[test]
    fn divisor_and_coprime_shortcuts() {
        let g = &(&v(0) * &v(1)) + &c(2);
        let h = &(&v(0).pow(2) * &v(1)) - &v(1);
        assert_eq!(gcd(&g, &(&g * &h)), monic(&g));
        assert_eq!(gcd(&(&g * &g), &(&g * &h)), monic(&g));
        assert_eq!(gcd(&g, &h), c(1));
        assert_eq!(gcd(&(&v(1) * &g), &(&v(1) * &h)), v(1));
    }

    #[test]
    fn content_only_gcd() {
        // gcd lives entirely in the non-main variable
        let a = &v(0) * &(&v(1) + &c(1));
        let b = &(&v(0) + &c(1)) * &v(0);
        assert_eq!(gcd(&a, &b), v(0));
        let t = &v(2) - &v(0);
        assert_eq!(gcd(&(&t * &v(1)), &(&t * &(&v(1) + &c(7)))), monic(&t));
    }
}
