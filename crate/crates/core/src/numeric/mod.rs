//! Arithmetic substrate: exact rationals (GMP), certified balls (MPFR),
//! Bernoulli numbers, cotangent derivatives, digamma and zeta values.

mod arith;
mod ball;
mod bernoulli;
mod cot;
mod digamma;
mod pipower;
mod reconstruct;
mod series;
mod zeta;

pub use rug::{Integer, Rational};

pub use arith::{binomial, euler_totient, factorial, gcd};
pub use ball::{hex_float, CertifiedReal, PrecisionContext};
pub use bernoulli::bernoulli;
pub use cot::{cot_derivative_at, cot_derivative_poly, cot_pi_rational, CotDerivPolynomial, CotTable};
pub use digamma::{digamma_rational, DigammaTable};
pub use pipower::PiPowerRational;
pub use reconstruct::{reconstruct_rational, simplest_rational_between};
pub use series::{periodic_dirichlet_sum, periodic_dirichlet_sum_with_plan, TailPlan};
pub use zeta::{zeta_even, zeta_value};
