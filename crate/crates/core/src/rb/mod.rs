//! Randomized benchmarking runs: inverse-closed random Clifford sequences, noisy
//! density-matrix propagation, shot sampling, and the predicted decay.
//!
//! Noise acts after every ideal gate, including the closing inverse. Preparation and
//! measurement errors enter only through the prepared state and the measured effect.

mod run;
mod sequence;
mod simulate;

pub use run::{
    run_rb, sequence_rng, LengthData, Mode, Provenance, RBConfig, RBDataset, SequenceRecord,
    DATASET_SCHEMA, ENUMERATION_LIMIT,
};
pub use sequence::{compose_sequence, generate_indexed_sequence, generate_sequence};
pub use simulate::{
    binomial_survival, exact_sequence_fidelity, exact_sequence_fidelity_dense, predicted_decay, sample_survival,
    DecayPrediction, Spam,
};
