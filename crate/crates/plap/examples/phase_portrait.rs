//! The reduced dynamics in band coordinates and its phase portrait.
//!
//! After energy normalization the planar system collapses to an
//! autonomous flow on the band (r, theta) in (0, 1) x (0, pi):
//!
//! ```text
//! r'     = F(r) cos(theta)
//! theta' = G(r) sin(theta)
//! ```
//!
//! which conserves Q(r) sin(theta) = mu, so every orbit traces one level
//! curve of Q(r) sin(theta). The curves are closed loops around the single
//! equilibrium (1/p, pi/2), and the time around a loop is 2 pi T(mu). This
//! example integrates one loop numerically, checks the conservation law
//! and the agreement of the measured return time and phase advance with
//! the quadrature values, then renders the family of level curves as an
//! SVG phase portrait.
//!
//! Run with:
//!
//! ```text
//! cargo run --release --example phase_portrait
//! ```

use std::path::PathBuf;

use plap::dynamics::{phi_winding, reduced_flow, return_time};
use plap::io_cli::{cmd_phase_portrait, RunConfig};
use plap::periodfun::period_triple;
use plap::specfun::{level_roots, make_exponent, q_func};

fn main() -> plap::Result<()> {
    let e = make_exponent(3.0)?;
    let mu = 0.6;

    // One radial cycle, sampled densely. The orbit starts at the inner
    // radial turning point r_- with theta = pi/2 and returns there after
    // time 2 pi T(mu).
    let (r_lo, r_hi) = level_roots(&e, mu)?;
    println!("mu = {mu}: radial band [{r_lo:.15}, {r_hi:.15}]");

    let triple = period_triple(&e, mu, 1e-11)?;
    let t_star = return_time(&e, mu, 1e-12)?;
    let winding = phi_winding(&e, mu, 1e-12)?;
    println!(
        "return time   {:.15} vs quadrature 2 pi T = {:.15}",
        t_star,
        2.0 * std::f64::consts::PI * triple.t_val
    );
    println!(
        "phase advance {:.15} vs quadrature S     = {:.15}",
        winding, triple.s_val
    );
    println!();

    // Conservation of the momentum integral along the flow.
    let traj = reduced_flow(&e, mu, t_star, 2048, 1e-12)?;
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let qi = q_func(&e, s.r)? * s.theta.sin();
        worst = worst.max((qi - mu).abs());
    }
    println!(
        "largest drift of Q(r) sin(theta) over {} samples: {:.3e}",
        traj.samples.len(),
        worst
    );
    println!(
        "r stayed in [{:.12}, {:.12}]",
        traj.samples
            .iter()
            .map(|s| s.r)
            .fold(f64::INFINITY, f64::min),
        traj.samples
            .iter()
            .map(|s| s.r)
            .fold(f64::NEG_INFINITY, f64::max)
    );
    println!();

    // The portrait artifact draws the level curves for mu = 0.1 .. 0.9
    // around the equilibrium marker at (1/p, pi/2).
    let cfg = RunConfig {
        p: 3.0,
        out: PathBuf::from("target/example-out/phase_portrait"),
        ..RunConfig::default()
    };
    cmd_phase_portrait(&cfg)?;
    Ok(())
}
