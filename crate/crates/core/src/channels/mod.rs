//! Quantum channels in Kraus and superoperator form, average fidelity, depolarizing
//! maps, group twirls and frame potentials.
//!
//! Superoperators act on column-stacked density matrices. The twirl over a finite
//! set averages `C^dag Lambda(C rho C^dag) C`; global phases of `C` cancel, so tableaux
//! modulo phase are enough to define it.

pub mod haar;
mod kraus;
mod superop;
mod twirl;

pub use kraus::{
    apply_channel, average_fidelity, compose_channels, depolarizing, weyl_operator, KrausChannel, CPTP_TOL,
};
pub use superop::{is_depolarizing, Superoperator};
pub use twirl::{frame_potential, group_frame_potential, twirl, twirl_over};
