//! The self-check battery: quadrature against independent dynamics.
//!
//! The period and winding functions are computed twice in this crate, by
//! deliberately different routes: as singular integrals over the radial
//! band, and as return times and phase advances of numerically integrated
//! orbits. The battery cross-checks the two routes against each other and
//! against every structural identity the theory provides: conjugate
//! exponent symmetry, the flat p = 2 case, the expansion around the
//! circular orbit, conservation laws of the full planar flow, closure of
//! reconstructed eigenfunctions, and the normalization of the scaling
//! transform. This example runs the battery, prints one line per check,
//! and exits nonzero if anything fails.
//!
//! Run with:
//!
//! ```text
//! cargo run --release --example verify
//! ```

use std::path::PathBuf;
use std::process::ExitCode;

use plap::io_cli::{cmd_verify, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig {
        out: PathBuf::from("target/example-out/verify"),
        ..RunConfig::default()
    };
    match cmd_verify(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
