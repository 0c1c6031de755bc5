//! Exact arithmetic: rationals, sparse polynomials, rational functions,
//! division and bounded Gröbner bases.

pub mod gcd;
pub mod groebner;
pub mod linalg;
pub mod order;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use gcd::MultiPoly;
pub use groebner::{
    groebner_basis, ideal_member, poly_divide_exact, DivisionFails, GroebnerLimits, LimitExceeded,
    Membership,
};
pub use order::{MonomialOrder, OrderKind};
pub use poly::{Coeff, Field, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use rational::Rational;
