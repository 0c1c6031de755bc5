//! Derivative operators, derivative indeterminates and the orderly ranking.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// An element `δ_m^{r_m} ⋯ δ_1^{r_1}` of the free commutative monoid on the
/// derivations, stored as the exponent vector `(r_1, …, r_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivOp(Vec<u32>);

impl DerivOp {
    pub fn identity(m: usize) -> Self {
        DerivOp(vec![0; m])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        DerivOp(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of derivations in the alphabet.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total order `Σ r_l`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    /// `δ_i ∘ self`.
    pub fn bump(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] += 1;
        DerivOp(e)
    }

    pub fn compose(&self, other: &DerivOp) -> Self {
        assert_eq!(self.len(), other.len(), "operators over different alphabets");
        DerivOp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The operator with one power of `δ_i` removed.
    pub fn lower(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(DerivOp(e))
    }
}

impl Ord for DerivOp {
    /// `(Σ r_l, r_m, …, r_1)` lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for DerivOp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `θ x_j` in block `block`. Blocks and variables are 0-based: block 0 is
/// `x̄`, block 1 is `ȳ`, and block `i` in the jet ring holds the copy that a
/// `∇`-point sends to `D^i ā`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Indet {
    pub block: usize,
    pub var: usize,
    pub op: DerivOp,
}

impl Indet {
    pub fn new(block: usize, var: usize, op: DerivOp) -> Self {
        Indet { block, var, op }
    }

    pub fn base(var: usize, m: usize) -> Self {
        Indet { block: 0, var, op: DerivOp::identity(m) }
    }

    pub fn in_block(&self, block: usize) -> Self {
        Indet { block, var: self.var, op: self.op.clone() }
    }

    pub fn bump(&self, i: usize) -> Self {
        Indet { block: self.block, var: self.var, op: self.op.bump(i) }
    }

    /// The ranking key `(Σ r_l, j, r_m, …, r_1)`, ignoring the block.
    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.op
            .order()
            .cmp(&other.op.order())
            .then(self.var.cmp(&other.var))
            .then_with(|| self.op.0.iter().rev().cmp(other.op.0.iter().rev()))
    }
}

impl Ord for Indet {
    /// Block first, then the orderly ranking within the block.
    fn cmp(&self, other: &Self) -> Ordering {
        self.block.cmp(&other.block).then_with(|| self.rank_cmp(other))
    }
}

impl PartialOrd for Indet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Indet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.op.0.iter().enumerate() {
            match r {
                0 => {}
                1 => write!(f, "d{} ", i + 1)?,
                r => write!(f, "d{}^{} ", i + 1, r)?,
            }
        }
        match self.block {
            0 => write!(f, "x{}", self.var + 1),
            1 => write!(f, "y{}", self.var + 1),
            b => write!(f, "x{}_{}", self.var + 1, b + 1),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextMismatch {
    #[error("indeterminate {0} uses {1} derivations, ring has {2}")]
    Alphabet(String, usize, usize),
    #[error("indeterminate {0} refers to variable {1}, ring has {2}")]
    Variable(String, usize, usize),
    #[error("indeterminates {0} and {1} lie in different blocks")]
    Block(String, String),
}

/// The orderly ranking on `θx̄` for `n` differential indeterminates and `m`
/// derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub n: usize,
    pub m: usize,
}

impl Ranking {
    pub fn new(n: usize, m: usize) -> Self {
        Ranking { n, m }
    }

    pub fn validate(&self, u: &Indet) -> Result<(), ContextMismatch> {
        if u.op.len() != self.m {
            return Err(ContextMismatch::Alphabet(u.to_string(), u.op.len(), self.m));
        }
        if u.var >= self.n {
            return Err(ContextMismatch::Variable(u.to_string(), u.var + 1, self.n));
        }
        Ok(())
    }

    pub fn compare(&self, u: &Indet, v: &Indet) -> Result<Ordering, ContextMismatch> {
        self.validate(u)?;
        self.validate(v)?;
        if u.block != v.block {
            return Err(ContextMismatch::Block(u.to_string(), v.to_string()));
        }
        Ok(u.rank_cmp(v))
    }

    /// All operators of total order `order`, ascending in the ranking.
    fn operators_of_order(&self, order: u32) -> Vec<DerivOp> {
        fn fill(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DerivOp>) {
            if slot == cur.len() {
                if left == 0 {
                    out.push(DerivOp(cur.clone()));
                }
                return;
            }
            for r in 0..=left {
                cur[slot] = r;
                fill(slot + 1, left - r, cur, out);
            }
            cur[slot] = 0;
        }
        let mut out = Vec::new();
        if self.m == 0 {
            if order == 0 {
                out.push(DerivOp(Vec::new()));
            }
            return out;
        }
        fill(0, order, &mut vec![0; self.m], &mut out);
        out.sort();
        out
    }

    /// The first `count` indeterminates `θ_1x̄, θ_2x̄, …` of block 0.
    pub fn enumerate(&self, count: usize) -> Vec<Indet> {
        let mut out = Vec::with_capacity(count);
        if self.n == 0 {
            return out;
        }
        let mut order = 0;
        while out.len() < count {
            let ops = self.operators_of_order(order);
            if ops.is_empty() {
                break;
            }
            'fill: for var in 0..self.n {
                for op in &ops {
                    if out.len() == count {
                        break 'fill;
                    }
                    out.push(Indet::new(0, var, op.clone()));
                }
            }
            order += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(var: usize, e: &[u32]) -> Indet {
        Indet::new(0, var, DerivOp::from_exponents(e.to_vec()))
    }

    #[test]
    fn compare_examples() {
        let r = Ranking::new(2, 2);
        // δ1x1 vs δ2x1: (1,1,0,1) < (1,1,1,0)
        assert_eq!(r.compare(&jet(0, &[1, 0]), &jet(0, &[0, 1])), Ok(Ordering::Less));
        assert_eq!(r.compare(&jet(0, &[0, 0]), &jet(1, &[0, 0])), Ok(Ordering::Less));
        let u = jet(1, &[2, 1]);
        assert_eq!(r.compare(&u, &u), Ok(Ordering::Equal));
        // order dominates the variable index
        assert_eq!(r.compare(&jet(1, &[0, 0]), &jet(0, &[1, 0])), Ok(Ordering::Less));
    }

    #[test]
    fn mismatched_contexts_rejected() {
        let r = Ranking::new(2, 2);
        assert!(matches!(r.compare(&jet(0, &[1]), &jet(0, &[1, 0])), Err(ContextMismatch::Alphabet(..))));
        assert!(matches!(r.compare(&jet(2, &[0, 0]), &jet(0, &[1, 0])), Err(ContextMismatch::Variable(..))));
        let y = Indet::new(1, 0, DerivOp::identity(2));
        assert!(matches!(r.compare(&y, &jet(0, &[0, 0])), Err(ContextMismatch::Block(..))));
    }

    #[test]
    fn enumerate_examples() {
        let one = Ranking::new(1, 1).enumerate(3);
        assert_eq!(one, vec![jet(0, &[0]), jet(0, &[1]), jet(0, &[2])]);
        let two = Ranking::new(1, 2).enumerate(4);
        assert_eq!(two, vec![jet(0, &[0, 0]), jet(0, &[1, 0]), jet(0, &[0, 1]), jet(0, &[2, 0])]);
        assert_eq!(Ranking::new(3, 3).enumerate(1), vec![jet(0, &[0, 0, 0])]);
        // m = 0: only the n order-zero indeterminates exist
        assert_eq!(Ranking::new(2, 0).enumerate(5).len(), 2);
    }

    #[test]
    fn enumeration_is_strictly_increasing_and_exhaustive() {
        let r = Ranking::new(2, 3);
        let list = r.enumerate(60);
        for w in list.windows(2) {
            assert_eq!(r.compare(&w[0], &w[1]), Ok(Ordering::Less));
        }
        // every indeterminate below the last one appears
        let last = list.last().unwrap().clone();
        let max_order = last.op.order();
        for order in 0..=max_order {
            for var in 0..2 {
                for op in r.operators_of_order(order) {
                    let u = Indet::new(0, var, op);
                    if u < last {
                        assert!(list.contains(&u), "missing {u}");
                    }
                }
            }
        }
    }
}
