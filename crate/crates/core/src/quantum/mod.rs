//! States, CPTP channels, Choi matrices, the two hypothesis families, and
//! executable forms of the cause-effect predicates (constancy, correctability,
//! reversibility).

mod channel;
mod hypothesis;
mod random;
mod state;

pub use channel::{
    apply_channel, choi_distance, choi_from_kraus, choi_of, is_constant, is_cptp, reduced_process,
    verify_reversible, Channel, Reversibility, CHANNEL_TOL,
};
pub use hypothesis::{
    hypothesis_channel, permutation_unitary, Dependence, EffectSlot, HypothesisSpec, Parameter,
};
pub use random::{
    haar_unitary, random_channel, random_density_matrix, random_permutation, random_pure_state, Rng,
};
pub use state::MultiState;
