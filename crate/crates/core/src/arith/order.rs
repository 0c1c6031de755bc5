//! Monomial orders for division and Gröbner bases.

use std::cmp::Ordering;

use super::poly::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A monomial order together with a variable priority.
///
/// Variables listed in `priority` are the most significant, in list order.
/// Unlisted variables come after them, and among themselves the larger
/// variable (by `Ord`) is more significant.
#[derive(Clone, Debug)]
pub struct MonomialOrder<V> {
    pub kind: OrderKind,
    pub priority: Vec<V>,
}

impl<V: Ord + Clone> MonomialOrder<V> {
    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: Vec::new() }
    }

    pub fn degrevlex() -> Self {
        MonomialOrder { kind: OrderKind::DegRevLex, priority: Vec::new() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<V>) -> Self {
        MonomialOrder { kind, priority }
    }

    fn significance(&self, a: &V, b: &V) -> Ordering {
        // Ordering::Less means `a` is more significant than `b`.
        let pa = self.priority.iter().position(|v| v == a);
        let pb = self.priority.iter().position(|v| v == b);
        match (pa, pb) {
            (Some(i), Some(j)) => i.cmp(&j),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => b.cmp(a),
        }
    }

    pub fn compare(&self, a: &Monomial<V>, b: &Monomial<V>) -> Ordering {
        if let OrderKind::DegRevLex = self.kind {
            match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        let mut vars: Vec<&V> = a
            .powers()
            .iter()
            .chain(b.powers().iter())
            .map(|(v, _)| v)
            .collect();
        vars.sort_by(|x, y| self.significance(x, y));
        vars.dedup();
        match self.kind {
            OrderKind::Lex => {
                for v in vars {
                    match a.exponent(v).cmp(&b.exponent(v)) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegRevLex => {
                for v in vars.into_iter().rev() {
                    match a.exponent(v).cmp(&b.exponent(v)) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}
