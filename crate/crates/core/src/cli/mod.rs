//! Command-line layer: experiment files, the `run`, `verify` and `enumerate`
//! commands, and their artifacts.

mod plot;
mod run;
mod spec;
mod verify;

pub use plot::decay_svg;
pub use run::{cmd_run, fit_report, FitReport, RunOptions, RunOutcome};
pub use spec::{over_rotation, ExperimentSpec, NoiseSpec};
pub use verify::{cmd_enumerate, cmd_verify, Suite, VerifyReport};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Exit status for an error: 2 for bad input, 1 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidDimension(_)
        | Error::NonPrimeDimension(_)
        | Error::DimensionMismatch { .. }
        | Error::UnknownGate(_)
        | Error::NotUnitary(_)
        | Error::InvalidState(_)
        | Error::NotCptp(_)
        | Error::OutOfRange(_)
        | Error::InvalidTableau(_)
        | Error::GroupTooLarge { .. }
        | Error::Config(_)
        | Error::CacheFormat(_) => EXIT_INVALID_INPUT,
        _ => EXIT_RUNTIME,
    }
}
