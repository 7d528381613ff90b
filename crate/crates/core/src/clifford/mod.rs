//! Clifford gates as symplectic tableaux over `Z_d`.

mod cache;
mod group;
mod sample;
mod synth;
mod tableau;

pub use cache::{decode_group, encode_group, read_group_cache, write_group_cache};
pub use group::{
    cached_group, closure, enumerate_group, enumerate_group_with_cap, group_generators, qutrit_lmn_elements,
    CliffordGroupTable, DEFAULT_GROUP_CAP,
};
pub use sample::{clifford_group_order, random_clifford, random_symplectic, symplectic_group_order};
pub use synth::tableau_to_dense;
pub use tableau::{compose, conjugate_pauli, invert, symplectic_form, CliffordTableau};
