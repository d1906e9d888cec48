//! Exact scalars, polynomials and dense linear algebra.

mod eps;
mod matrix;
mod poly;
mod rational;
mod ring;
mod sym;

pub use eps::EpsFrac;
pub use matrix::{AffineSolution, ExactMatrix};
pub use poly::UniPoly;
pub use rational::{
    factorial, int, is_integer, minus_one_pow, parse_rational, pow2, rat, serde_rational,
    serde_rational_vec, to_i64, Rational,
};
pub use ring::{Field, Ring};
pub use sym::SymValue;
