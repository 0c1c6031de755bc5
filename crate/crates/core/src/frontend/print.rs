//! Canonical text form. The output always parses back to the same value.

use std::cmp::Ordering;

use crate::arith::rational::{format_rational, is_negative};
use crate::arith::{Coeff, Monomial, MultiPoly, Rational};
use crate::base_field::BaseElem;
use crate::delta::{DeltaPoly, Indet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockNaming {
    /// `x`/`y` when only blocks 1 and 2 occur, `x{j}_{b}` otherwise.
    Auto,
    XY,
    Indexed,
}

#[derive(Clone, Copy, Debug)]
pub struct Printer<'a> {
    pub generators: &'a [String],
    pub naming: BlockNaming,
    /// Operator slot printed as `D` instead of `d{slot+1}`.
    pub d_slot: Option<usize>,
}

impl<'a> Printer<'a> {
    pub fn new(generators: &'a [String]) -> Self {
        Printer { generators, naming: BlockNaming::Auto, d_slot: None }
    }

    pub fn indet(&self, u: &Indet, indexed: bool) -> String {
        let mut s = String::new();
        for (i, &r) in u.op.exponents().iter().enumerate() {
            if r == 0 {
                continue;
            }
            if self.d_slot == Some(i) {
                s.push('D');
            } else {
                s.push_str(&format!("d{}", i + 1));
            }
            if r > 1 {
                s.push_str(&format!("^{r}"));
            }
            s.push(' ');
        }
        match (indexed, u.block) {
            (false, 0) => s.push_str(&format!("x{}", u.var + 1)),
            (false, 1) => s.push_str(&format!("y{}", u.var + 1)),
            _ => s.push_str(&format!("x{}_{}", u.var + 1, u.block + 1)),
        }
        s
    }

    pub fn poly(&self, f: &DeltaPoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let indexed = match self.naming {
            BlockNaming::XY => false,
            BlockNaming::Indexed => true,
            BlockNaming::Auto => f.variables().iter().any(|u| u.block > 1),
        };
        let mut terms: Vec<(&Monomial<Indet>, &BaseElem)> = f.terms().collect();
        terms.sort_by(|a, b| monomial_cmp(a.0, b.0));
        let rendered = terms.into_iter().map(|(m, c)| {
            let factors: Vec<String> = m
                .powers()
                .iter()
                .map(|(u, e)| {
                    let name = self.indet(u, indexed);
                    if *e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            self.coeff_term(c, factors)
        });
        join_signed(rendered)
    }

    /// A base-field element on its own.
    pub fn base_elem(&self, e: &BaseElem) -> String {
        let (neg, text) = self.coeff_term(e, Vec::new());
        if neg {
            format!("-{text}")
        } else {
            text
        }
    }

    pub fn multi_poly(&self, p: &MultiPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial<usize>, &Rational)> = p.terms().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| dense(b.0).cmp(&dense(a.0))));
        join_signed(terms.into_iter().map(|(m, q)| rational_term(q, self.generator_factors(m))))
    }

    fn generator_factors(&self, m: &Monomial<usize>) -> Vec<String> {
        m.powers()
            .iter()
            .map(|(g, e)| {
                let name = self.generators.get(*g).cloned().unwrap_or_else(|| format!("g{}", g + 1));
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect()
    }

    /// `(negative, text)` for `c · factors`.
    fn coeff_term(&self, c: &BaseElem, factors: Vec<String>) -> (bool, String) {
        let c = c.clone();
        if let Some(q) = c.as_rational() {
            return rational_term(&q, factors);
        }
        let num = match c.den().as_constant() {
            Some(k) => c.num().div_scalar(&k),
            None => c.num().clone(),
        };
        let bare = factors.is_empty() && c.den().as_constant().is_some();
        let (neg, mut text) = if num.len() == 1 {
            let (m, q) = num.terms().next().expect("one term");
            rational_term(q, self.generator_factors(m))
        } else if bare {
            (false, self.multi_poly(&num))
        } else {
            (false, format!("({})", self.multi_poly(&num)))
        };
        if c.den().as_constant().is_none() {
            let den = c.den();
            let simple = den.len() == 1 && den.terms().all(|(m, q)| q.is_one() && m.powers().len() == 1);
            if simple {
                text = format!("{text}/{}", self.multi_poly(den));
            } else {
                text = format!("{text}/({})", self.multi_poly(den));
            }
        }
        if !factors.is_empty() {
            text = format!("{text}*{}", factors.join("*"));
        }
        (neg, text)
    }
}

fn rational_term(q: &Rational, factors: Vec<String>) -> (bool, String) {
    let neg = is_negative(q);
    let abs = if neg { -q.clone() } else { q.clone() };
    let text = if factors.is_empty() {
        format_rational(&abs)
    } else if abs.is_one() {
        factors.join("*")
    } else {
        format!("{}*{}", format_rational(&abs), factors.join("*"))
    };
    (neg, text)
}

/// Exponent vector in generator order, for graded lex with `g1 > g2 > …`.
fn dense(m: &Monomial<usize>) -> Vec<u32> {
    let len = m.powers().iter().map(|(g, _)| g + 1).max().unwrap_or(0);
    let mut v = vec![0; len];
    for (g, e) in m.powers() {
        v[*g] = *e;
    }
    v
}

fn join_signed(terms: impl Iterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, text)) in terms.enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&text);
    }
    out
}

/// Total degree first, then the factor lists under the ranking.
pub fn monomial_cmp(a: &Monomial<Indet>, b: &Monomial<Indet>) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.factors().cmp(b.factors()))
}

/// `print_poly` with automatic block naming.
pub fn print_poly(f: &DeltaPoly, generators: &[String]) -> String {
    Printer::new(generators).poly(f)
}

pub fn print_base_elem(e: &BaseElem, generators: &[String]) -> String {
    Printer::new(generators).base_elem(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse::{parse_base_elem, parse_poly, ParseContext};

    fn roundtrip(text: &str, names: &[String], n: usize, m: usize) -> String {
        let ctx = ParseContext::new(names, n, m);
        let f = parse_poly(text, ctx).unwrap();
        let printed = print_poly(&f, names);
        assert_eq!(parse_poly(&printed, ctx).unwrap(), f, "{printed}");
        printed
    }

    #[test]
    fn print_examples() {
        let none: Vec<String> = vec![];
        assert_eq!(roundtrip("x1 + d1 x1", &none, 1, 1), "x1 + d1 x1");
        assert_eq!(roundtrip("y1*x1*2", &none, 1, 1), "2*x1*y1");
        assert_eq!(roundtrip("x1 - x1", &none, 1, 1), "0");
        assert_eq!(roundtrip("d1 x1 + x1_3", &none, 1, 1), "d1 x1_1 + x1_3");
        assert_eq!(roundtrip("-1/2*x1^2 + 3", &none, 1, 1), "3 - 1/2*x1^2");
    }

    #[test]
    fn coefficient_forms() {
        let names: Vec<String> = vec!["t".into(), "s".into()];
        assert_eq!(roundtrip("(t + 1)*x1", &names, 1, 0), "(t + 1)*x1");
        assert_eq!(roundtrip("x1/t", &names, 1, 0), "1/t*x1");
        assert_eq!(roundtrip("-2*t/(t*s)*x1", &names, 1, 0), "-2/s*x1");
        assert_eq!(roundtrip("x1/(t + s)", &names, 1, 0), "1/(t + s)*x1");
        assert_eq!(roundtrip("(t^2 - 1)/(2*t - 2)", &names, 1, 0), "1/2*t + 1/2");
        assert_eq!(roundtrip("t^2*s - 3*t + 1/3", &names, 1, 0), "t^2*s - 3*t + 1/3");
        let e = parse_base_elem("-t/(s + 1)", &names).unwrap();
        assert_eq!(print_base_elem(&e, &names), "-t/(s + 1)");
    }
}
