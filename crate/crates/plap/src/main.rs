use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plap::io_cli::{
    cmd_eigenfunction, cmd_periods, cmd_phase_portrait, cmd_spectrum, cmd_verify, ConfigOverlay,
    RunConfig,
};

/// Periodic spectrum of the planar vectorial p-Laplacian.
#[derive(Parser)]
#[command(name = "plap", version, about)]
struct Cli {
    /// Flat key = value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Exponent p of the operator (p > 1).
    #[arg(long, global = true)]
    p: Option<f64>,

    /// Lower end of the momentum window.
    #[arg(long, global = true)]
    mu_lo: Option<f64>,

    /// Upper end of the momentum window.
    #[arg(long, global = true)]
    mu_hi: Option<f64>,

    /// Number of momentum grid points for the periods table.
    #[arg(long, global = true)]
    mu_count: Option<usize>,

    /// Largest denominator m of the rational windings to enumerate.
    #[arg(long, global = true)]
    max_denominator: Option<u64>,

    /// Number of ladder rungs to report per spectral record.
    #[arg(long, global = true)]
    n_max: Option<u64>,

    /// Numerator of one rational winding index.
    #[arg(long, global = true)]
    ell: Option<u64>,

    /// Denominator of one rational winding index.
    #[arg(long, global = true)]
    m: Option<u64>,

    /// Degenerate orbit family to reconstruct: zero or unit.
    #[arg(long, global = true)]
    base: Option<String>,

    /// Table format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative tolerance of the period quadratures.
    #[arg(long, global = true)]
    tol_quad: Option<f64>,

    /// Tolerance of the trajectory integrators.
    #[arg(long, global = true)]
    tol_ode: Option<f64>,

    /// Residual tolerance when solving the winding equation.
    #[arg(long, global = true)]
    tol_root: Option<f64>,

    /// Tolerance of the generator independence scan.
    #[arg(long, global = true)]
    tol_independence: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the period T, winding S, and ratio U over a momentum window.
    Periods,
    /// Enumerate rational windings and their eigenvalue ladders.
    Spectrum,
    /// Reconstruct one closed trajectory with plots and samples.
    Eigenfunction,
    /// Draw level curves of the reduced system.
    PhasePortrait,
    /// Run the internal cross-validation battery.
    Verify,
}

fn overlay_from(cli: &Cli) -> plap::Result<ConfigOverlay> {
    Ok(ConfigOverlay {
        p: cli.p,
        mu_lo: cli.mu_lo,
        mu_hi: cli.mu_hi,
        mu_count: cli.mu_count,
        max_denominator: cli.max_denominator,
        n_max: cli.n_max,
        ell: cli.ell,
        m: cli.m,
        base: cli.base.as_deref().map(str::parse).transpose()?,
        format: cli.format.as_deref().map(str::parse).transpose()?,
        out: cli.out.clone(),
        quad_rel_tol: cli.tol_quad,
        ode_tol: cli.tol_ode,
        root_tol: cli.tol_root,
        independence_tol: cli.tol_independence,
    })
}

fn run(cli: &Cli) -> plap::Result<u8> {
    let overlay = overlay_from(cli)?;
    let cfg = RunConfig::resolve(cli.config.as_deref(), overlay)?;
    match cli.command {
        Command::Periods => cmd_periods(&cfg).map(|()| 0),
        Command::Spectrum => cmd_spectrum(&cfg).map(|()| 0),
        Command::Eigenfunction => cmd_eigenfunction(&cfg).map(|()| 0),
        Command::PhasePortrait => cmd_phase_portrait(&cfg).map(|()| 0),
        Command::Verify => cmd_verify(&cfg).map(|ok| if ok { 0 } else { 3 }),
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `plap ... | head`)
    // instead of panicking on the failed print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
