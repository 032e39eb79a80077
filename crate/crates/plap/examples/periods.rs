//! Sweep of the normalized period and winding functions over momenta.
//!
//! Every nonzero solution of the planar system
//! (phi_p(x'))' + lambda phi_p(x) = 0 can be rescaled to unit energy, after
//! which it is classified by a single momentum parameter mu in [0, 1]. Two
//! scalar functions of mu then describe the orbit completely: the radial
//! component oscillates with period 2 pi T(mu), and one radial oscillation
//! advances the angular phase by 2 pi S(mu). This example sweeps T, S, and
//! the ratio U = T / S across the momentum interval, prints the limiting
//! behaviour at both ends, and writes a dense sweep to CSV.
//!
//! Run with:
//!
//! ```text
//! cargo run --release --example periods
//! ```

use std::path::PathBuf;

use plap::io_cli::{cmd_periods, RunConfig};
use plap::periodfun::{limits_at_zero, period_triple};
use plap::specfun::make_exponent;

fn main() -> plap::Result<()> {
    let e = make_exponent(3.0)?;
    println!("exponent p = {}, conjugate q = {}", e.p(), e.q());
    println!();

    // Interior sweep. Both functions are computed as singular integrals
    // over the orbit's radial band; close to mu = 1 the band collapses and
    // the implementation switches to a series expansion, which the method
    // column records.
    println!(
        "{:>8} {:>20} {:>20} {:>20} {:>12}",
        "mu", "T(mu)", "S(mu)", "U(mu)", "method"
    );
    for k in 1..=19 {
        let mu = k as f64 / 20.0;
        let t = period_triple(&e, mu, 1e-11)?;
        println!(
            "{mu:8.3} {:20.15} {:20.15} {:20.15} {:>12}",
            t.t_val,
            t.s_val,
            t.u_val,
            t.method.as_str()
        );
    }
    println!();

    // At mu -> 0 the orbit degenerates to a collinear oscillation whose
    // half period is pi_p / 2 pi, and the winding tends to 1/2 because the
    // phase jumps by pi at each passage through the origin.
    let (t_zero, s_zero) = limits_at_zero(&e);
    let near_zero = period_triple(&e, 1e-6, 1e-11)?;
    println!("limit mu -> 0:  T = {t_zero:.15}, S = {s_zero:.15}");
    println!(
        "at mu = 1e-6:   T = {:.15}, S = {:.15}",
        near_zero.t_val, near_zero.s_val
    );

    // At mu = 1 the orbit is the circular equilibrium of the reduced
    // system; T and S share the limit C1 = sqrt(p - 1) / p.
    let near_one = period_triple(&e, 1.0 - 1e-9, 1e-11)?;
    println!("limit mu -> 1:  T = S = {:.15}", e.c1());
    println!(
        "at mu = 1-1e-9: T = {:.15}, S = {:.15}",
        near_one.t_val, near_one.s_val
    );
    println!();

    // Dense sweep written as an artifact, one row per momentum.
    let cfg = RunConfig {
        p: 3.0,
        mu_count: 501,
        out: PathBuf::from("target/example-out/periods"),
        ..RunConfig::default()
    };
    cmd_periods(&cfg)?;
    Ok(())
}
