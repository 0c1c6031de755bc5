//! Seeded random instances for randomized checks.
//!
//! All draws come from a ChaCha stream, so a seed fixes every instance.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Coeff, Monomial, MultiPoly, Rational};
use crate::base_field::{BaseElem, BaseField};
use crate::delta::{DeltaPoly, DeltaRing, DerivOp, Indet};
use crate::transform::RationalMatrix;

/// Size bounds for sampled instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regime {
    pub max_m: usize,
    pub max_n: usize,
    pub max_order: u32,
    pub max_terms: usize,
    pub max_coeff_degree: u32,
    pub max_generators: usize,
    pub max_degree: u32,
    /// Whether coefficients may have nonconstant denominators.
    pub denominators: bool,
}

impl Default for Regime {
    fn default() -> Self {
        Regime {
            max_m: 3,
            max_n: 3,
            max_order: 3,
            max_terms: 6,
            max_coeff_degree: 2,
            max_generators: 2,
            max_degree: 3,
            denominators: true,
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub regime: Regime,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_regime(seed, Regime::default())
    }

    pub fn with_regime(seed: u64, regime: Regime) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), regime }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// `p/q` with `|p| ≤ 5` and `1 ≤ q ≤ 3`.
    pub fn rational(&mut self) -> Rational {
        let p: i64 = self.rng.gen_range(-5..=5);
        let q: i64 = self.rng.gen_range(1..=3);
        Rational::new(p.into(), q.into())
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let q = self.rational();
            if !q.is_zero() {
                return q;
            }
        }
    }

    /// A polynomial in the first `gens` generators of degree at most
    /// `max_coeff_degree`.
    pub fn base_poly(&mut self, gens: usize) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let terms = self.range(1, 3);
        for _ in 0..terms {
            let mut powers = Vec::new();
            if gens > 0 {
                let degree = self.rng.gen_range(0..=self.regime.max_coeff_degree);
                for _ in 0..degree {
                    powers.push((self.rng.gen_range(0..gens), 1));
                }
            }
            out.add_term(Monomial::from_powers(powers), self.nonzero_rational());
        }
        out
    }

    pub fn nonzero_base_poly(&mut self, gens: usize) -> MultiPoly {
        loop {
            let p = self.base_poly(gens);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A base-field element, occasionally with a nonconstant denominator.
    pub fn base_elem(&mut self, gens: usize) -> BaseElem {
        let num = self.base_poly(gens);
        if gens > 0 && self.regime.denominators && self.coin(0.25) {
            let den = self.nonzero_base_poly(gens);
            BaseElem::new(num, den).expect("nonzero denominator")
        } else {
            BaseElem::from_poly(num)
        }
    }

    pub fn nonzero_base_elem(&mut self, gens: usize) -> BaseElem {
        loop {
            let e = self.base_elem(gens);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// `ℚ(t1, …, tp)` with `derivations` commuting derivations. Generator
    /// `t_j` carries a weight `φ_j ∈ {1, t_j}` and derivation `i` sends
    /// `t_j` to `c_ij φ_j`. The vector fields `φ_j ∂/∂t_j` commute, hence so
    /// do their constant combinations.
    pub fn field(&mut self, generators: usize, derivations: usize) -> BaseField {
        let names: Vec<String> = (1..=generators).map(|j| format!("t{j}")).collect();
        let weights: Vec<BaseElem> = (0..generators)
            .map(|j| if self.coin(0.3) { BaseElem::generator(j) } else { BaseElem::one() })
            .collect();
        let tables = (0..derivations)
            .map(|_| {
                weights
                    .iter()
                    .map(|w| {
                        let c = if self.coin(0.3) { Rational::zero() } else { self.rational() };
                        w.mul(&BaseElem::rational(c))
                    })
                    .collect()
            })
            .collect();
        BaseField::new(names, tables).expect("sampled derivations commute")
    }

    /// A ring with `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n`.
    pub fn ring(&mut self) -> DeltaRing {
        let m = self.range(1, self.regime.max_m);
        let n = self.range(1, self.regime.max_n);
        let gens = self.range(0, self.regime.max_generators);
        self.ring_with(m, n, gens)
    }

    pub fn ring_with(&mut self, m: usize, n: usize, gens: usize) -> DeltaRing {
        DeltaRing::new(Arc::new(self.field(gens, m + 1)), n)
    }

    pub fn op(&mut self, m: usize, max_order: u32) -> DerivOp {
        let order = self.rng.gen_range(0..=max_order);
        let mut exps = vec![0u32; m];
        if m > 0 {
            for _ in 0..order {
                exps[self.rng.gen_range(0..m)] += 1;
            }
        }
        DerivOp::from_exponents(exps)
    }

    pub fn indet(&mut self, ring: &DeltaRing, blocks: usize) -> Indet {
        let block = self.rng.gen_range(0..blocks.max(1));
        let var = self.rng.gen_range(0..ring.n());
        Indet::new(block, var, self.op(ring.m(), self.regime.max_order))
    }

    /// A Δ-polynomial in blocks `0..blocks` with at most `max_terms` terms.
    pub fn poly(&mut self, ring: &DeltaRing, blocks: usize) -> DeltaPoly {
        let gens = ring.field().generators().len();
        let mut out = DeltaPoly::zero();
        let terms = self.range(1, self.regime.max_terms);
        for _ in 0..terms {
            let degree = self.rng.gen_range(0..=self.regime.max_degree);
            let factors: Vec<(Indet, u32)> = (0..degree).map(|_| (self.indet(ring, blocks), 1)).collect();
            out.add_term(Monomial::from_powers(factors), self.nonzero_base_elem(gens));
        }
        out
    }

    pub fn nonzero_poly(&mut self, ring: &DeltaRing, blocks: usize) -> DeltaPoly {
        loop {
            let f = self.poly(ring, blocks);
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// A point with polynomial coordinates.
    pub fn point(&mut self, ring: &DeltaRing) -> Vec<BaseElem> {
        let gens = ring.field().generators().len();
        (0..ring.n()).map(|_| BaseElem::from_poly(self.base_poly(gens))).collect()
    }

    /// A matrix with entries `p/q` as in [`Sampler::rational`], redrawn
    /// until invertible.
    pub fn invertible_matrix(&mut self, size: usize) -> RationalMatrix {
        loop {
            let rows = (0..size).map(|_| (0..size).map(|_| self.rational()).collect()).collect();
            let m = RationalMatrix::new(rows).expect("square");
            if !m.determinant().is_zero() {
                return m;
            }
        }
    }
}
