//! File formats, subcommands and the verification harness.
//!
//! All documents are JSON with a `kind` tag. Exit codes: 0 on success, 2 on
//! invalid input, 3 on a failed `--check` or verify suite. The environment
//! variable `SYMRIGID_TOL` overrides the default relative rank tolerance.

pub mod commands;
pub mod docs;
pub mod verify;

use crate::numerics::TolerancePolicy;

/// Tolerance from the environment, falling back to the default.
pub fn tolerance_from_env() -> TolerancePolicy {
    match std::env::var("SYMRIGID_TOL") {
        Ok(s) => match s.parse::<f64>() {
            Ok(v) if v > 0.0 => TolerancePolicy::new(v),
            _ => TolerancePolicy::default(),
        },
        Err(_) => TolerancePolicy::default(),
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
