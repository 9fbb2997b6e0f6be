//! Probe states for each strategy and the output states they produce under
//! a causal hypothesis.
//!
//! Output factors are always in canonical order `B₁..B_N, C₁..C_N[, R]`, so
//! the two hypotheses are related by the fixed swap of the `B` and `C`
//! blocks.

mod classical;
mod output;
mod probes;

pub use classical::{classical_output_distribution, Distribution, MAX_CLASSICAL_OUTCOMES};
pub use output::{
    canonical_swap_order, output_state, parameter_spread, output_state_with_rng, INVARIANCE_SAMPLES, INVARIANCE_TOL,
};
pub use probes::{
    active_probes, coherent_probe, grouped_singlet_state, probe_state, reference_probe,
    singlet_state, ProbeKind,
};
