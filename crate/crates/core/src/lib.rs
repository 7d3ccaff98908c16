//! Exact symbolic-numeric analysis of holonomic sequences and balanced
//! hypergeometric multisums.
//!
//! The crate is organised around one pipeline: describe a multisum term in a
//! small DSL ([`term`]), evaluate it exactly ([`multisum`]), guess and verify a
//! linear recurrence ([`recurrence`]), transfer the recurrence to a linear ODE
//! and interrogate its singularities ([`ode`]), then confront the exact
//! predictions with numerics ([`asympt`]) and arithmetic certificates
//! ([`arith`]).  Everything is built on the exact kernel in [`exact`].
//!
//! The crate is `no_std` (with `alloc`): all algorithms are pure, IO and file
//! formats live in the companion `holoscope` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod asympt;
pub mod exact;
pub mod multisum;
pub mod ode;
pub mod recurrence;
pub mod term;

pub use exact::poly::PolyQ;
pub use exact::rational::{Int, Rat};
pub use multisum::ExactSequence;
pub use recurrence::Recurrence;
pub use term::BalancedTerm;
