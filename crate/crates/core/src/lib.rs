//! Unitary-gate randomized benchmarking for prime-dimensional qudit Clifford gates.
//!
//! The crate is organised in layers:
//!
//! - [`qudit_algebra`]: generalized Pauli operators with exact phase arithmetic, the
//!   dense gate set (`X`, `Z`, `F`, `P`, `CZ`, `T`), states, and the two-qubit
//!   symmetric-subspace machinery.
//! - [`clifford`]: symplectic tableaux over `Z_d`, uniform sampling, dense synthesis,
//!   full group enumeration with Cayley tables and a binary cache format.
//! - [`channels`]: Kraus channels, superoperators, average fidelity, depolarizing
//!   channels, group twirls, frame potentials and Haar-random oracles.
//! - [`rb`]: random inverse-closed Clifford sequences, noisy density-matrix propagation,
//!   shot sampling and full benchmarking runs.
//! - [`fitting`]: bounded damped Gauss-Newton fit of `A0 * p^(m-1) + B0` and the
//!   conversion from decay base to average error rate.
//! - [`cli`]: experiment files, the `run` / `verify` / `enumerate` commands and the
//!   artifacts they write.
//!
//! ```
//! use qudit_rb::clifford::{random_clifford, CliffordTableau};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let c = random_clifford(3, 1, &mut rng).unwrap();
//! let id = c.compose(&c.invert()).unwrap();
//! assert_eq!(id, CliffordTableau::identity(3, 1).unwrap());
//! ```

pub mod channels;
pub mod cli;
pub mod clifford;
mod error;
pub mod fitting;
pub mod qudit_algebra;
pub mod rb;

pub use error::{Error, Result};
