//! Cross-validation battery behind the `verify` command.
//!
//! Every check pits two independent computational routes against each
//! other: quadrature against closed forms, the reduced flow against
//! quadrature, polar reconstruction against direct integration, and all
//! conserved quantities against their defining invariance. A check that
//! cannot even be computed is reported as failed with the error text, so
//! the battery always produces a complete report.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{
    full_flow, phi_winding, reconstruct_eigenfunction, return_time, scaling_transform, PhaseState,
};
use crate::error::Result;
use crate::periodfun::{period_triple, s_forms, s_of_mu, t_of_mu, u_slope_check};
use crate::specfun::{g_func, level_splits, make_exponent, q_func, q_of_split, Exponent};
use crate::spectrum::{make_record, solve_momentum, RationalIndex};

/// Outcome of one battery check.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn run_check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> VerifyCheck {
    match f() {
        Ok((pass, detail)) => VerifyCheck {
            name: name.to_string(),
            pass,
            detail,
        },
        Err(err) => VerifyCheck {
            name: name.to_string(),
            pass: false,
            detail: format!("computation failed: {err}"),
        },
    }
}

/// Runs the full battery and returns one record per check.
pub fn run_battery() -> Vec<VerifyCheck> {
    vec![
        run_check("flat_windings_at_two", flat_windings_at_two),
        run_check("conjugate_exponent_symmetry", conjugate_symmetry),
        run_check("winding_form_agreement", winding_form_agreement),
        run_check("circular_expansion_bracket_p3", || {
            expansion_bracket(&make_exponent(3.0)?)
        }),
        run_check("circular_expansion_bracket_p5", || {
            expansion_bracket(&make_exponent(5.0)?)
        }),
        run_check("winding_cubic_remainder_p3", || {
            winding_cubic_remainder(&make_exponent(3.0)?)
        }),
        run_check("winding_cubic_remainder_p5", || {
            winding_cubic_remainder(&make_exponent(5.0)?)
        }),
        run_check("ratio_slope_near_circular", ratio_slope),
        run_check("small_momentum_limits", small_momentum_limits),
        run_check("flow_vs_quadrature", flow_vs_quadrature),
        run_check("conservation_laws", conservation_laws),
        run_check("orbit_closure", orbit_closure),
        run_check("scaling_normalization", scaling_normalization),
        run_check("reference_table", reference_table),
        run_check("level_function_identities", level_identities),
    ]
}

fn flat_windings_at_two() -> Result<(bool, String)> {
    let e = make_exponent(2.0)?;
    let mut worst = 0.0f64;
    for k in 1..=19 {
        let mu = 0.05 * k as f64;
        let triple = period_triple(&e, mu, 1e-12)?;
        worst = worst.max((triple.t_val - 0.5).abs());
        worst = worst.max((triple.s_val - 0.5).abs());
    }
    Ok((
        worst <= 1e-10,
        format!("max |T - 1/2|, |S - 1/2| over 19 momenta: {worst:.3e} (limit 1e-10)"),
    ))
}

fn conjugate_symmetry() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &p in &[3.0, 5.0] {
        let e = make_exponent(p)?;
        let c = e.conjugate();
        for k in 0..7 {
            let mu = 0.1 + 0.145 * k as f64;
            let a = period_triple(&e, mu, 1e-12)?;
            let b = period_triple(&c, mu, 1e-12)?;
            worst = worst.max((a.t_val - b.t_val).abs());
            worst = worst.max((a.s_val - b.s_val).abs());
        }
    }
    Ok((
        worst <= 1e-9,
        format!("max |T_p - T_q|, |S_p - S_q| over p in {{3, 5}}: {worst:.3e} (limit 1e-9)"),
    ))
}

fn winding_form_agreement() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &p in &[3.0, 5.0] {
        let e = make_exponent(p)?;
        for &mu in &[0.3, 0.7] {
            let forms = s_forms(&e, mu, 1e-12)?;
            for i in 0..3 {
                for j in (i + 1)..3 {
                    worst = worst.max((forms[i] - forms[j]).abs());
                }
            }
        }
    }
    Ok((
        worst <= 1e-8,
        format!("max pairwise gap between the three winding integrals: {worst:.3e} (limit 1e-8)"),
    ))
}

/// The curvature of T and S at the circular orbit, measured as
/// K = |f(1-h) - c1 - c2 h| / h^2, must land within a factor 4 of the
/// predicted quadratic coefficient for both step sizes.
pub(crate) fn expansion_bracket(e: &Exponent) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &h in &[1e-2, 1e-3] {
        let triple = period_triple(e, 1.0 - h, 1e-12)?;
        let k_t = (triple.t_val - e.c1() - e.c2() * h).abs() / (h * h);
        let k_s = (triple.s_val - e.c1() - e.c2() * h).abs() / (h * h);
        let t_ok = k_t >= e.c3().abs() / 4.0 && k_t <= 4.0 * e.c3().abs();
        let s_ok = k_s >= e.c4().abs() / 4.0 && k_s <= 4.0 * e.c4().abs();
        pass &= t_ok && s_ok;
        parts.push(format!(
            "h={h:.0e}: K_T/c3 = {:.3}, K_S/c4 = {:.3}",
            k_t / e.c3(),
            k_s / e.c4()
        ));
    }
    Ok((
        pass,
        format!(
            "p = {}: curvature ratios must lie in [1/4, 4]: {}",
            e.p(),
            parts.join("; ")
        ),
    ))
}

/// The full quadratic model of S near the circular orbit must be accurate
/// to a cubic remainder; this is sensitive to the sign of the quadratic
/// coefficient, unlike the bracket above.
pub(crate) fn winding_cubic_remainder(e: &Exponent) -> Result<(bool, String)> {
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for &h in &[1e-2, 1e-3] {
        let s = s_of_mu(e, 1.0 - h, 1e-12)?;
        let model = e.c1() + h * (e.c2() + h * e.c4());
        let bound = 10.0 * e.c4().abs() * h.powi(3) + 1e-12;
        let err = (s - model).abs();
        pass &= err <= bound;
        worst_ratio = worst_ratio.max(err / bound);
    }
    Ok((
        pass,
        format!(
            "p = {}: |S(1-h) - quadratic model| vs cubic bound, worst ratio {worst_ratio:.3}",
            e.p()
        ),
    ))
}

fn ratio_slope() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &p in &[3.0, 5.0] {
        let e = make_exponent(p)?;
        let (measured, predicted) = u_slope_check(&e, 1.0 - 1e-3, 1e-12)?;
        worst = worst.max((measured - predicted).abs() / predicted.abs());
    }
    Ok((
        worst <= 0.2,
        format!("T/S slope near the circular orbit off prediction by {worst:.2e} rel (limit 0.2)"),
    ))
}

fn small_momentum_limits() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &p in &[3.0, 5.0] {
        let e = make_exponent(p)?;
        let triple = period_triple(&e, 1e-4, 1e-12)?;
        worst = worst.max((triple.t_val - e.pi_p() / (2.0 * PI)).abs());
        worst = worst.max((triple.s_val - 0.5).abs());
    }
    Ok((
        worst <= 5e-3,
        format!("distance to the mu -> 0 limits at mu = 1e-4: {worst:.3e} (limit 5e-3)"),
    ))
}

fn flow_vs_quadrature() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &(p, mu) in &[(3.0, 0.5), (1.5, 0.8)] {
        let e = make_exponent(p)?;
        let t_quad = t_of_mu(&e, mu, 1e-12)?;
        let t_flow = return_time(&e, mu, 1e-11)? / (2.0 * PI);
        worst = worst.max(((t_flow - t_quad) / t_quad).abs());
        let s_quad = s_of_mu(&e, mu, 1e-12)?;
        let s_flow = phi_winding(&e, mu, 1e-11)?;
        worst = worst.max(((s_flow - s_quad) / s_quad).abs());
    }
    Ok((
        worst <= 1e-7,
        format!("reduced flow vs quadrature, worst relative gap {worst:.3e} (limit 1e-7)"),
    ))
}

fn conservation_laws() -> Result<(bool, String)> {
    let cases = [
        (
            1.5,
            2.3,
            PhaseState {
                x1: 0.8,
                x2: -0.3,
                y1: 0.4,
                y2: 1.1,
            },
        ),
        (
            3.0,
            1.4,
            PhaseState {
                x1: 1.0,
                x2: 0.2,
                y1: 0.7,
                y2: -0.5,
            },
        ),
    ];
    let mut worst = 0.0f64;
    for &(p, lam, start) in &cases {
        let e = make_exponent(p)?;
        let traj = full_flow(&e, lam, start, 10.0, 101, 1e-11)?;
        let h0 = traj.meta.energy_level.unwrap_or(f64::NAN);
        let m0 = traj.meta.momentum.unwrap_or(f64::NAN);
        for st in &traj.states {
            worst = worst.max(((st.hamiltonian(&e, lam) - h0) / h0).abs());
            worst = worst.max((st.momentum() - m0).abs());
        }
    }
    Ok((
        worst <= 1e-8,
        format!("energy and momentum drift over t = 10: {worst:.3e} (limit 1e-8)"),
    ))
}

fn orbit_closure() -> Result<(bool, String)> {
    let e = make_exponent(3.0)?;
    let ix = RationalIndex::new(9, 19)?;
    let roots = solve_momentum(&e, ix, 1e-4, 1.0 - 1e-6, 1e-11, 1e-11)?;
    let mu = roots[0];
    let rec = make_record(&e, ix, mu, 1e-11)?;
    let traj = reconstruct_eigenfunction(&e, &rec, 1, 128)?;
    let closure = traj.meta.closure_error.unwrap_or(f64::NAN);
    let mut worst_h = 0.0f64;
    let mut worst_m = 0.0f64;
    for st in &traj.states {
        worst_h = worst_h.max((st.hamiltonian(&e, 1.0) - 1.0).abs());
        worst_m = worst_m.max((st.momentum() - mu).abs());
    }
    let pass = closure <= 1e-6 && worst_h <= 1e-8 && worst_m <= 1e-8;
    Ok((
        pass,
        format!(
            "index 9/19 at p = 3: closure {closure:.2e} (limit 1e-6), \
             energy drift {worst_h:.2e}, momentum drift {worst_m:.2e} (limits 1e-8)"
        ),
    ))
}

fn scaling_normalization() -> Result<(bool, String)> {
    let mut worst_h = 0.0f64;
    let mut mu_ok = true;
    for &(p, lam, start) in &[
        (
            1.5,
            1.2,
            PhaseState {
                x1: 0.9,
                x2: 0.1,
                y1: -0.2,
                y2: 0.8,
            },
        ),
        (
            3.0,
            2.0,
            PhaseState {
                x1: 0.5,
                x2: -0.6,
                y1: 0.3,
                y2: 0.4,
            },
        ),
    ] {
        let e = make_exponent(p)?;
        let traj = full_flow(&e, lam, start, 5.0, 81, 1e-11)?;
        let scaled = scaling_transform(&e, &traj)?;
        let mu = scaled.meta.momentum.unwrap_or(f64::NAN);
        mu_ok &= (0.0..=1.0 + 1e-12).contains(&mu);
        for st in &scaled.states {
            worst_h = worst_h.max((st.hamiltonian(&e, 1.0) - 1.0).abs());
        }
    }
    // The p = 2 family has a closed-form normalized momentum.
    let e2 = make_exponent(2.0)?;
    let (a1, a2, ph1, ph2, lam) = (1.3f64, 0.7f64, 0.25f64, -0.4f64, 1.7f64);
    let start = PhaseState {
        x1: a1 * (lam * ph1).sin(),
        x2: a2 * (lam * ph2).sin(),
        y1: lam * a1 * (lam * ph1).cos(),
        y2: lam * a2 * (lam * ph2).cos(),
    };
    let traj = full_flow(&e2, lam, start, 5.0, 81, 1e-11)?;
    let scaled = scaling_transform(&e2, &traj)?;
    let expect = 2.0 * a1 * a2 * (lam * (ph1 - ph2)).sin().abs() / (a1 * a1 + a2 * a2);
    let closed_gap = (scaled.meta.momentum.unwrap_or(f64::NAN) - expect).abs();
    let pass = mu_ok && worst_h <= 1e-8 && closed_gap <= 1e-10;
    Ok((
        pass,
        format!(
            "unit-energy drift {worst_h:.2e} (limit 1e-8), normalized momentum in [0,1]: {mu_ok}, \
             p = 2 closed form gap {closed_gap:.2e} (limit 1e-10)"
        ),
    ))
}

fn reference_table() -> Result<(bool, String)> {
    // Frozen values computed with 60-digit arithmetic.
    let cases = [
        (3.0, 0.5, 0.480_705_554_355_031_54, 0.484_151_402_840_221_56),
        (5.0, 0.2, 0.446_992_024_382_531_74, 0.481_984_946_569_606_48),
        (5.0, 0.8, 0.414_960_125_640_717_61, 0.416_685_361_501_525_55),
    ];
    let mut worst = 0.0f64;
    for &(p, mu, t_ref, s_ref) in &cases {
        let e = make_exponent(p)?;
        let triple = period_triple(&e, mu, 1e-12)?;
        worst = worst.max(((triple.t_val - t_ref) / t_ref).abs());
        worst = worst.max(((triple.s_val - s_ref) / s_ref).abs());
    }
    let e3 = make_exponent(3.0)?;
    let (left, right) = level_splits(&e3, 0.8)?;
    worst = worst.max((left.r - 0.092_001_770_415_909_388).abs());
    worst = worst.max((right.r - 0.661_332_878_105_673_99).abs());
    Ok((
        worst <= 5e-11,
        format!("worst deviation from the frozen reference table: {worst:.3e} (limit 5e-11)"),
    ))
}

fn level_identities() -> Result<(bool, String)> {
    let e = make_exponent(3.0)?;
    let c = e.conjugate();
    let mut worst = 0.0f64;
    // Peak of the level function at r = 1/p.
    worst = worst.max((q_func(&e, 1.0 / 3.0)? - 1.0).abs());
    // Conjugate reflection Q_p(r) = Q_q(1 - r).
    for &r in &[0.2, 0.7] {
        worst = worst.max((q_func(&e, r)? - q_func(&c, 1.0 - r)?).abs());
    }
    // Level roots must sit exactly on the level.
    for &(p, mu) in &[(3.0, 0.3), (3.0, 0.9), (1.5, 0.3), (1.5, 0.9)] {
        let ep = make_exponent(p)?;
        let (left, right) = level_splits(&ep, mu)?;
        worst = worst.max((q_of_split(&ep, &left) - mu).abs());
        worst = worst.max((q_of_split(&ep, &right) - mu).abs());
    }
    // Derivative identity Q'(r) F(r) = -Q(r) G(r), via a central difference;
    // the difference quotient itself carries ~1e-9 relative noise, so this
    // part gets its own looser limit.
    let r = 0.37;
    let h = 1e-6;
    let dq = (q_func(&e, r + h)? - q_func(&e, r - h)?) / (2.0 * h);
    let f = crate::specfun::f_func(&e, r)?;
    let lhs = dq * f;
    let rhs = -q_func(&e, r)? * g_func(&e, r)?;
    let fd_ok = ((lhs - rhs) / rhs).abs() <= 1e-6;
    // Half-period conjugacy pi_p = pi_q.
    worst = worst.max((e.pi_p() - c.pi_p()).abs());
    let pass = worst <= 1e-12 && fd_ok;
    Ok((
        pass,
        format!(
            "max identity residual {worst:.3e} (limit 1e-12), \
             derivative identity relative gap within 1e-6: {fd_ok}"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::doctored_exponent;

    #[test]
    fn battery_is_all_green() {
        let checks = run_battery();
        assert_eq!(checks.len(), 15);
        for c in &checks {
            assert!(c.pass, "check {} failed: {}", c.name, c.detail);
        }
    }

    #[test]
    fn battery_catches_doctored_constants() {
        let good = make_exponent(3.0).unwrap();
        assert!(expansion_bracket(&good).unwrap().0);
        assert!(winding_cubic_remainder(&good).unwrap().0);

        let bad_linear = doctored_exponent(3.0, true, false);
        assert!(
            !expansion_bracket(&bad_linear).unwrap().0,
            "a negated linear coefficient must break the curvature bracket"
        );

        let bad_quadratic = doctored_exponent(3.0, false, true);
        assert!(
            !winding_cubic_remainder(&bad_quadratic).unwrap().0,
            "a wrong-sign quadratic coefficient must break the cubic remainder"
        );
    }
}
