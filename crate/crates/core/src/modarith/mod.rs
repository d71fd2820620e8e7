//! Exact mod-1 arithmetic, rational approximation, and classical
//! arithmetic functions.

pub mod arith;
pub mod frac;
pub mod rational;

pub use arith::{
    divisor_s, divisor_s_table, intersective_check, mangoldt, mangoldt_table, primes_load,
    primes_save, primes_upto, IntersectiveRow,
};
pub use frac::Frac128;
pub use rational::{convergents, dirichlet_approx, medium_range_approx, ModArithError, RationalApprox};
