//! Quantum and classical strategies for telling apart two causal hypotheses
//! about a reversible process.
//!
//! A black box maps a cause `A` to two candidate effects `B` and `C`. Under
//! hypothesis `H1` the box acts as `U·U† ⊗ I/d` (the effect sits in `B`),
//! under `H2` as `I/d ⊗ V·V†` (the effect sits in `C`). The crate builds the
//! probe states of the classical, coherent, singlet and reference-entangled
//! strategies, synthesizes the outputs under each hypothesis, evaluates the
//! minimum-error discrimination probability, and checks the closed-form
//! error curves in [`formulas`] against brute-force oracles.
//!
//! Module map:
//!
//! - [`numkernel`]: dense complex linear algebra (eigensolver, trace norm, fidelity).
//! - [`quantum`]: states, channels, Choi matrices, hypothesis channels, randomness.
//! - [`combinat`]: singlet groupings and trivial-irrep multiplicities.
//! - [`strategies`]: probe states and hypothesis outputs.
//! - [`discrimination`]: Helstrom, square-root measurement, classical optimum, Monte Carlo.
//! - [`formulas`]: closed-form error probabilities, decay rates and lower bounds.
//! - [`checks`]: the oracle-vs-formula verification suite behind `verify`.
//!
//! Data-parallel inner loops run on rayon when the `parallel` feature is
//! enabled (the default); see [`exec`].

#![forbid(unsafe_code)]

pub mod checks;
pub mod combinat;
pub mod discrimination;
pub mod error;
pub mod exec;
pub mod formulas;
pub mod numkernel;
pub mod quantum;
pub mod strategies;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numkernel::{ComplexMatrix, C64};
