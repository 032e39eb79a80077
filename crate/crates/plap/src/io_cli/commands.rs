//! Implementations of the command-line entry points.
//!
//! Each command resolves its inputs from a [`RunConfig`], writes its
//! artifacts into the configured output directory, and prints one line per
//! file written. They are plain library functions so the examples and the
//! integration tests drive exactly the same code as the binary.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::PathBuf;

use serde_json::json;

use crate::dynamics::reconstruct_eigenfunction;
use crate::error::{Error, Result};
use crate::periodfun::period_triple;
use crate::specfun::{level_roots, make_exponent, q_func, Exponent};
use crate::spectrum::{
    base_records, build_spectrum, make_record, s_range, solve_momentum, EigenvalueRecord,
    RationalIndex, SpectrumParams,
};

use super::config::{BaseKind, RunConfig};
use super::svg::{project_oblique, Figure, PALETTE};
use super::table::{Cell, Table};
use super::verify::run_battery;

/// Tabulates mu, T, S, U and the evaluation method over the momentum window.
///
/// A momentum at which the quadrature fails is flagged in the method column
/// and the run continues; failures are also reported on stderr.
pub fn cmd_periods(cfg: &RunConfig) -> Result<()> {
    let e = make_exponent(cfg.p)?;
    let mut table = Table::new(["mu", "T", "S", "U", "method"]);
    let mut failures = 0usize;
    for i in 0..cfg.mu_count {
        let f = i as f64 / (cfg.mu_count - 1) as f64;
        let mu = cfg.mu_lo + (cfg.mu_hi - cfg.mu_lo) * f;
        match period_triple(&e, mu, cfg.quad_rel_tol) {
            Ok(t) => table.push_row(vec![
                Cell::Num(mu),
                Cell::Num(t.t_val),
                Cell::Num(t.s_val),
                Cell::Num(t.u_val),
                Cell::Text(t.method.as_str().to_string()),
            ]),
            Err(err) => {
                failures += 1;
                eprintln!("warning: mu = {mu}: {err}");
                table.push_row(vec![
                    Cell::Num(mu),
                    Cell::Num(f64::NAN),
                    Cell::Num(f64::NAN),
                    Cell::Num(f64::NAN),
                    Cell::Text("failed".to_string()),
                ]);
            }
        }
    }
    let path = table.write(&cfg.out, "periods", cfg.format)?;
    println!(
        "wrote {} ({} rows, {} failures)",
        path.display(),
        cfg.mu_count,
        failures
    );
    Ok(())
}

/// Builds the spectrum, writes the eigenvalue table and the independence
/// report, and prints a summary.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<()> {
    let e = make_exponent(cfg.p)?;
    let params = SpectrumParams {
        mu_lo: cfg.mu_lo,
        mu_hi: cfg.mu_hi,
        max_denominator: cfg.max_denominator,
        quad_tol: cfg.quad_rel_tol,
        root_tol: cfg.root_tol,
        independence_tol: cfg.independence_tol,
    };
    let result = build_spectrum(&e, &params)?;

    let mut headers = vec!["label".to_string(), "mu".to_string(), "pi_star".to_string()];
    for n in 1..=cfg.n_max {
        headers.push(format!("lambda_scaling_{n}"));
        headers.push(format!("lambda_original_{n}"));
    }
    let mut table = Table::new(headers);
    for rec in &result.records {
        let mut row = vec![
            Cell::Text(rec.index.label()),
            Cell::Num(rec.mu),
            Cell::Num(rec.pi_star),
        ];
        for n in 1..=cfg.n_max {
            row.push(Cell::Num(rec.lambda_scaling(n)));
            row.push(Cell::Num(rec.lambda_original(n)));
        }
        table.push_row(row);
    }
    let path = table.write(&cfg.out, "spectrum", cfg.format)?;
    println!(
        "wrote {} ({} records)",
        path.display(),
        result.records.len()
    );

    let independence = json!({
        "tol": result.independence.tol,
        "clean": result.independence.is_clean(),
        "generators": result.independence.generators.iter()
            .map(|(label, value)| json!({"label": label, "value": value}))
            .collect::<Vec<_>>(),
        "violations": result.independence.violations.iter()
            .map(|&(i, j, ratio, nearest)| json!({
                "i": i, "j": j, "ratio": ratio, "nearest": nearest,
            }))
            .collect::<Vec<_>>(),
    });
    fs::create_dir_all(&cfg.out)?;
    let ind_path = cfg.out.join("spectrum_independence.json");
    fs::write(&ind_path, format!("{independence:#}\n"))?;
    println!("wrote {}", ind_path.display());

    println!(
        "p = {}: winding range ({:.9}, {:.9}), {} generators, {} integer-ratio violations",
        result.p,
        result.s_min,
        result.s_max,
        result.independence.generators.len(),
        result.independence.violations.len()
    );
    Ok(())
}

/// Picks the record requested by `--base` or `--ell/--m`, solving the
/// winding equation in the latter case.
fn resolve_record(e: &Exponent, cfg: &RunConfig) -> Result<EigenvalueRecord> {
    if let Some(base) = cfg.base {
        let (zero, unit) = base_records(e);
        return Ok(match base {
            BaseKind::Zero => zero,
            BaseKind::Unit => unit,
        });
    }
    let (ell, m) = match (cfg.ell, cfg.m) {
        (Some(ell), Some(m)) => (ell, m),
        _ => {
            return Err(Error::InvalidConfig(
                "eigenfunction needs either --base zero|unit or both --ell and --m".into(),
            ))
        }
    };
    if (e.p() - 2.0).abs() < 1e-12 {
        return Err(Error::InvalidConfig(
            "at p = 2 the winding is identically 1/2 and rational indices are degenerate; \
             use --base zero or --base unit"
                .into(),
        ));
    }
    let ix = RationalIndex::new(ell, m)?;
    let roots = solve_momentum(e, ix, cfg.mu_lo, cfg.mu_hi, cfg.quad_rel_tol, cfg.root_tol)?;
    match roots.first() {
        None => {
            let (s_min, s_max) = s_range(e, cfg.mu_lo, cfg.mu_hi, 64)?;
            Err(Error::UnresolvableIndex {
                ell,
                m,
                p: e.p(),
                s_min,
                s_max,
            })
        }
        Some(&mu) => {
            if roots.len() > 1 {
                println!(
                    "note: {} momenta solve the winding equation; using mu = {mu}",
                    roots.len()
                );
            }
            make_record(e, ix, mu, cfg.quad_rel_tol)
        }
    }
}

/// Reconstructs one closed trajectory, writes its samples and three plots,
/// and prints the eigenvalue ladder up to n_max.
pub fn cmd_eigenfunction(cfg: &RunConfig) -> Result<()> {
    let e = make_exponent(cfg.p)?;
    let record = resolve_record(&e, cfg)?;
    let traj = reconstruct_eigenfunction(&e, &record, 1, 1024)?;

    let mut table = Table::new(["t", "x1", "x2", "y1", "y2", "potential", "kinetic"]);
    for (&t, st) in traj.ts.iter().zip(&traj.states) {
        let pot = st.x1.hypot(st.x2).powf(e.p()) / e.p();
        let kin = st.y1.hypot(st.y2).powf(e.q()) / e.q();
        table.push_row(vec![
            Cell::Num(t),
            Cell::Num(st.x1),
            Cell::Num(st.x2),
            Cell::Num(st.y1),
            Cell::Num(st.y2),
            Cell::Num(pot),
            Cell::Num(kin),
        ]);
    }
    let label = record.index.label();
    let path = table.write(&cfg.out, "eigenfunction", cfg.format)?;
    println!(
        "wrote {} (index {label}, mu = {:.12})",
        path.display(),
        record.mu
    );

    let mut components = Figure::new(
        &format!("Eigenfunction components, index {label}, p = {}", cfg.p),
        "t",
        "x",
    );
    components.add_series(
        "x1",
        PALETTE[0],
        traj.ts
            .iter()
            .zip(&traj.states)
            .map(|(&t, s)| (t, s.x1))
            .collect(),
    );
    components.add_series(
        "x2",
        PALETTE[1],
        traj.ts
            .iter()
            .zip(&traj.states)
            .map(|(&t, s)| (t, s.x2))
            .collect(),
    );
    let p1 = components.write(&cfg.out, "eigenfunction_components")?;

    let mut orbit = Figure::new(
        &format!("Position orbit, index {label}, p = {}", cfg.p),
        "x1",
        "x2",
    );
    orbit.add_series(
        "x(t)",
        PALETTE[0],
        traj.states.iter().map(|s| (s.x1, s.x2)).collect(),
    );
    orbit.add_marker(traj.states[0].x1, traj.states[0].x2, PALETTE[2]);
    let p2 = orbit.write(&cfg.out, "eigenfunction_orbit")?;

    let spatial: Vec<(f64, f64, f64)> = traj
        .ts
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| (s.x1, s.x2, t))
        .collect();
    let mut space = Figure::new(
        &format!("Trajectory in (x1, x2, t), index {label}, p = {}", cfg.p),
        "oblique u",
        "oblique v",
    );
    space.add_series("(x1, x2, t)", PALETTE[3], project_oblique(&spatial));
    let p3 = space.write(&cfg.out, "eigenfunction_3d")?;
    println!("wrote {}", p1.display());
    println!("wrote {}", p2.display());
    println!("wrote {}", p3.display());

    println!(
        "closure error {:.3e}; eigenvalue ladder for index {label}:",
        traj.meta.closure_error.unwrap_or(f64::NAN)
    );
    for n in 1..=cfg.n_max {
        println!(
            "  n = {n}: lambda_scaling = {:.12}, lambda_original = {:.6}",
            record.lambda_scaling(n),
            record.lambda_original(n)
        );
    }
    Ok(())
}

/// Draws closed level curves of the reduced system in the (r, theta) strip
/// and writes both the figure and the sampled curve data.
pub fn cmd_phase_portrait(cfg: &RunConfig) -> Result<()> {
    let e = make_exponent(cfg.p)?;
    let mut fig = Figure::new(
        &format!("Reduced phase portrait, p = {}", cfg.p),
        "r",
        "theta",
    );
    let mut table = Table::new(["mu", "r", "theta"]);
    let n = 129usize;
    for k in 1..=9 {
        let mu = 0.1 * k as f64;
        let (r_lo, r_hi) = level_roots(&e, mu)?;
        let delta = r_hi - r_lo;
        let mut curve = Vec::with_capacity(2 * n);
        // Endpoint-clustered sweep keeps resolution where the curve turns.
        for i in 0..n {
            let omega = PI * i as f64 / (n - 1) as f64;
            let r = r_lo + delta * (0.5 * omega).sin().powi(2);
            let ratio = (mu / q_func(&e, r)?).min(1.0);
            curve.push((r, ratio.asin()));
        }
        for i in (0..n).rev() {
            let omega = PI * i as f64 / (n - 1) as f64;
            let r = r_lo + delta * (0.5 * omega).sin().powi(2);
            let ratio = (mu / q_func(&e, r)?).min(1.0);
            curve.push((r, PI - ratio.asin()));
        }
        for &(r, theta) in &curve {
            table.push_row(vec![Cell::Num(mu), Cell::Num(r), Cell::Num(theta)]);
        }
        fig.add_series(
            &format!("mu = {mu:.1}"),
            PALETTE[(k - 1) % PALETTE.len()],
            curve,
        );
    }
    fig.add_marker(1.0 / e.p(), FRAC_PI_2, "#000000");
    let svg_path = fig.write(&cfg.out, "phase_portrait")?;
    let data_path = table.write(&cfg.out, "phase_portrait", cfg.format)?;
    println!("wrote {}", svg_path.display());
    println!("wrote {}", data_path.display());
    Ok(())
}

/// Runs the verification battery, writes the JSON report, and returns
/// whether every check passed.
pub fn cmd_verify(cfg: &RunConfig) -> Result<bool> {
    let checks = run_battery();
    let all_pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let doc = json!({ "all_pass": all_pass, "checks": checks });
    fs::create_dir_all(&cfg.out)?;
    let path: PathBuf = cfg.out.join("verify.json");
    fs::write(&path, format!("{doc:#}\n"))?;
    println!("wrote {}", path.display());
    println!(
        "verification battery: {}",
        if all_pass {
            "all checks passed"
        } else {
            "FAILURES present"
        }
    );
    Ok(all_pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io_cli::config::OutputFormat;

    fn cfg_in(dir: &std::path::Path) -> RunConfig {
        RunConfig {
            out: dir.to_path_buf(),
            ..Default::default()
        }
    }

    #[test]
    fn periods_writes_parseable_rows() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            mu_lo: 0.3,
            mu_hi: 0.8,
            mu_count: 5,
            ..cfg_in(dir.path())
        };
        cmd_periods(&cfg).unwrap();
        let text = std::fs::read_to_string(dir.path().join("periods.csv")).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("mu,T,S,U,method"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 5);
        for row in rows {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(fields.len(), 5);
            let t: f64 = fields[1].parse().unwrap();
            assert!(t > 0.4 && t < 0.5, "T out of range: {t}");
            assert_eq!(fields[4], "quadrature");
        }
    }

    #[test]
    fn spectrum_emits_table_and_independence_report() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            p: 5.0,
            max_denominator: 9,
            n_max: 2,
            format: OutputFormat::Json,
            ..cfg_in(dir.path())
        };
        cmd_spectrum(&cfg).unwrap();
        let records: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("spectrum.json")).unwrap(),
        )
        .unwrap();
        let rows = records.as_array().unwrap();
        let labels: Vec<&str> = rows.iter().map(|r| r["label"].as_str().unwrap()).collect();
        assert_eq!(labels, ["mu=0", "mu=1", "3/7", "4/9"]);
        for row in rows {
            assert!(row["lambda_scaling_1"].is_number());
            assert!(row["lambda_original_2"].is_number());
        }
        let ind: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("spectrum_independence.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(ind["clean"], serde_json::json!(true));
        assert_eq!(ind["generators"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn eigenfunction_base_orbit_writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            base: Some(BaseKind::Unit),
            ..cfg_in(dir.path())
        };
        cmd_eigenfunction(&cfg).unwrap();
        for name in [
            "eigenfunction.csv",
            "eigenfunction_components.svg",
            "eigenfunction_orbit.svg",
            "eigenfunction_3d.svg",
        ] {
            assert!(dir.path().join(name).is_file(), "missing artifact {name}");
        }
        let text = std::fs::read_to_string(dir.path().join("eigenfunction.csv")).unwrap();
        let second = text.lines().nth(1).unwrap();
        let fields: Vec<f64> = second.split(',').map(|f| f.parse().unwrap()).collect();
        // At t = 0 the circular orbit sits at (1, 0, 0, 1).
        assert!((fields[1] - 1.0).abs() < 1e-14);
        assert!((fields[4] - 1.0).abs() < 1e-14);
        // Energy split of the circular orbit is (1/p, 1/q).
        assert!((fields[5] - 1.0 / 3.0).abs() < 1e-14);
        assert!((fields[6] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn unresolvable_index_reports_the_range() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            mu_lo: 0.3,
            mu_hi: 0.8,
            ell: Some(1),
            m: Some(3),
            ..cfg_in(dir.path())
        };
        let err = cmd_eigenfunction(&cfg).unwrap_err();
        match err {
            Error::UnresolvableIndex {
                ell,
                m,
                s_min,
                s_max,
                ..
            } => {
                assert_eq!((ell, m), (1, 3));
                assert!(s_min > 0.45 && s_max < 0.5, "range ({s_min}, {s_max})");
            }
            other => panic!("expected an unresolvable-index error, got {other}"),
        }
    }

    #[test]
    fn rational_index_rejected_at_two() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            p: 2.0,
            ell: Some(1),
            m: Some(2),
            ..cfg_in(dir.path())
        };
        assert!(matches!(
            cmd_eigenfunction(&cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn phase_portrait_is_deterministic() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        cmd_phase_portrait(&cfg_in(dir_a.path())).unwrap();
        cmd_phase_portrait(&cfg_in(dir_b.path())).unwrap();
        let svg_a = std::fs::read_to_string(dir_a.path().join("phase_portrait.svg")).unwrap();
        let svg_b = std::fs::read_to_string(dir_b.path().join("phase_portrait.svg")).unwrap();
        assert_eq!(svg_a, svg_b);
        assert!(svg_a.matches("<polyline").count() == 9);
    }
}
