//! Exact arithmetic: rationals, q-Puiseux polynomials, ħ-Laurent polynomials, matrices.

mod hlaurent;
mod linsolve;
mod matrix;
mod qpoly;
mod rat;

pub use hlaurent::HLaurent;
pub use linsolve::{Equation, LinearSystem, SolveOutcome};
pub use matrix::{Mat, Ring};
pub use qpoly::QPoly;
pub use rat::{gcd_u64, lcm_u64, Rat};
