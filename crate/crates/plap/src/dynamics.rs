//! Trajectories of the planar p-Laplacian flow, in both coordinate systems.
//!
//! The reduced system lives on the strip (r, theta) in (0,1) x (0,pi) with
//! an auxiliary phase angle phi:
//!
//! ```text
//! r'     = F(r) cos(theta)
//! theta' = G(r) sin(theta)
//! phi'   = (p r)^(-1/p) (q (1-r))^(1/p) sin(theta)
//! ```
//!
//! It conserves the momentum Q(r) sin(theta) and encodes one closed orbit
//! per momentum level: a full radial oscillation starting and ending at the
//! inner radius r_-. Its return time equals 2 pi T(mu) and the phase advance
//! over one return equals 2 pi S(mu), which makes the flow an independent
//! check on the quadrature-based period functions.
//!
//! The full system is the planar Hamiltonian flow
//!
//! ```text
//! x' = phi_q(y),    y' = -lambda^p phi_p(x)
//! ```
//!
//! with phi_a the duality map v -> ||v||^(a-2) v. It conserves the energy
//! H = (lambda ||x||)^p / p + ||y||^q / q and the angular momentum
//! M = x1 y2 - x2 y1. Any nonzero solution can be normalized onto the unit
//! energy level of the lambda = 1 flow by the scaling transform, which maps
//! its momentum into [0, 1]; the reduced coordinates describe exactly those
//! normalized orbits via r = ||x||^p / p, with phi the phase of x and
//! theta the phase of y relative to x.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::num::ode::{integrate_sampled, Integrator, OdeOptions};
use crate::periodfun::check_momentum;
use crate::specfun::{cos_p, f_func, g_func, level_splits, q_func, Exponent};
use crate::spectrum::{EigenvalueRecord, RecordIndex};

/// Duality map of the plane: v -> ||v||^(alpha-2) v, fixed to 0 at 0.
///
/// Below the norm floor the scale factor ||v||^(alpha-2) can overflow for
/// alpha < 2 while the image norm ||v||^(alpha-1) is already negligible for
/// the exponent ranges in use, so the map is cut off to zero there.
pub fn phi_alpha(v: [f64; 2], alpha: f64) -> [f64; 2] {
    debug_assert!(alpha > 1.0, "duality map needs alpha > 1, got {alpha}");
    let n = v[0].hypot(v[1]);
    if n < 1e-280 {
        return [0.0, 0.0];
    }
    let scale = n.powf(alpha - 2.0);
    [v[0] * scale, v[1] * scale]
}

/// One sample of the reduced flow.
#[derive(Debug, Clone, Copy)]
pub struct ReducedState {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

/// One state of the full planar flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl PhaseState {
    /// Conserved energy of the flow with parameter `lambda`.
    pub fn hamiltonian(&self, e: &Exponent, lambda: f64) -> f64 {
        let nx = self.x1.hypot(self.x2);
        let ny = self.y1.hypot(self.y2);
        (lambda * nx).powf(e.p()) / e.p() + ny.powf(e.q()) / e.q()
    }

    /// Conserved angular momentum x1 y2 - x2 y1.
    pub fn momentum(&self) -> f64 {
        self.x1 * self.y2 - self.x2 * self.y1
    }

    fn from_slice(y: &[f64]) -> Self {
        Self {
            x1: y[0],
            x2: y[1],
            y1: y[2],
            y2: y[3],
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        ((self.x1 - other.x1).powi(2)
            + (self.x2 - other.x2).powi(2)
            + (self.y1 - other.y1).powi(2)
            + (self.y2 - other.y2).powi(2))
        .sqrt()
    }
}

/// Provenance and measured invariants of a computed trajectory.
///
/// `energy_level` and `momentum` are measured on the first sample;
/// `closure_error` is the 4D distance between the last and first state when
/// the trajectory is expected to close.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryMeta {
    pub p: f64,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub tol: f64,
    pub closure_error: Option<f64>,
    pub energy_level: Option<f64>,
    pub momentum: Option<f64>,
}

/// Uniformly sampled solution of the reduced system.
#[derive(Debug, Clone)]
pub struct ReducedTrajectory {
    pub samples: Vec<ReducedState>,
    pub meta: TrajectoryMeta,
}

/// Uniformly sampled solution of the full planar flow.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    pub ts: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub meta: TrajectoryMeta,
}

/// Right-hand side of the reduced system on [r, theta, phi].
///
/// Dense-output stages can poke marginally outside the invariant band
/// [r_-, r_+], so the radius is clamped to the open unit interval before
/// taking logarithms.
fn reduced_rhs(e: &Exponent, y: &[f64], dy: &mut [f64]) {
    let r = y[0].clamp(1e-300, 1.0 - 1e-16);
    let (sin_t, cos_t) = y[1].sin_cos();
    let f = f_func(e, r).expect("clamped radius stays interior");
    let g = g_func(e, r).expect("clamped radius stays interior");
    let phi_fac = (((e.q() * (1.0 - r)).ln() - (e.p() * r).ln()) / e.p()).exp();
    dy[0] = f * cos_t;
    dy[1] = g * sin_t;
    dy[2] = phi_fac * sin_t;
}

fn sample_grid(t_end: f64, n_samples: usize) -> Vec<f64> {
    (0..n_samples)
        .map(|i| t_end * (i as f64 / (n_samples - 1) as f64))
        .collect()
}

fn check_sampling(t_end: f64, n_samples: usize, minimum: usize) -> Result<()> {
    if t_end <= 0.0 || !t_end.is_finite() {
        return Err(Error::OutOfDomain {
            name: "t_end",
            value: t_end,
            domain: "(0, inf)",
        });
    }
    if n_samples < minimum {
        return Err(Error::InvalidConfig(format!(
            "need at least {minimum} samples, got {n_samples}"
        )));
    }
    Ok(())
}

/// Integrates the reduced system from the inner radius over [0, t_end],
/// returning `n_samples` uniformly spaced states.
///
/// The initial condition is (r_-(mu), pi/2, 0), the leftmost point of the
/// closed orbit at momentum `mu`. Conservation of Q(r) sin(theta) is
/// verified on every sample; drift beyond 100 x tol aborts with an error.
/// At mu = 1 the orbit degenerates to the equilibrium (1/p, pi/2) and the
/// phase advances linearly.
pub fn reduced_flow(
    e: &Exponent,
    mu: f64,
    t_end: f64,
    n_samples: usize,
    tol: f64,
) -> Result<ReducedTrajectory> {
    check_momentum(mu)?;
    check_sampling(t_end, n_samples, 2)?;
    let (left, _) = level_splits(e, mu)?;
    let y0 = [left.r, FRAC_PI_2, 0.0];
    let ts = sample_grid(t_end, n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    integrate_sampled(
        |_t: f64, y: &[f64], dy: &mut [f64]| reduced_rhs(e, y, dy),
        0.0,
        &y0,
        t_end,
        OdeOptions::with_tol(tol),
        &ts,
        |t, y| {
            samples.push(ReducedState {
                t,
                r: y[0],
                theta: y[1],
                phi: y[2],
            });
        },
    )?;
    let mut drift = 0.0f64;
    for s in &samples {
        drift = drift.max((q_func(e, s.r)? * s.theta.sin() - mu).abs());
    }
    if drift > 100.0 * tol {
        return Err(Error::Inconsistency(format!(
            "reduced momentum drifted by {drift:e} at mu = {mu}, beyond 100 x tol = {:e}",
            100.0 * tol
        )));
    }
    Ok(ReducedTrajectory {
        samples,
        meta: TrajectoryMeta {
            p: e.p(),
            lambda: None,
            mu: Some(mu),
            tol,
            closure_error: None,
            energy_level: None,
            momentum: Some(mu),
        },
    })
}

/// Integrates the reduced system until theta first crosses pi/2 downward
/// and returns the refined crossing time and phase (t*, phi(t*)).
///
/// The orbit starts at (r_-, pi/2) with theta initially decreasing, dips
/// through the lower half strip, crosses pi/2 upward at the outer radius,
/// and completes the radial cycle at the next downward crossing back at
/// r_-. The trigger g(t_k) > 0 >= g(t_k+1) with g = theta - pi/2 selects
/// downward crossings only, the initial g(0) = 0 does not trigger, and the
/// crossing must happen at a radius below 1/p to discard any numerically
/// grazing touch near the outer radius.
fn radial_cycle(e: &Exponent, mu: f64, tol: f64) -> Result<(f64, f64)> {
    check_momentum(mu)?;
    if mu == 1.0 {
        return Err(Error::OutOfDomain {
            name: "mu",
            value: mu,
            domain: "(0, 1) for a radial cycle; mu = 1 is the equilibrium",
        });
    }
    let (left, _) = level_splits(e, mu)?;
    let y0 = [left.r, FRAC_PI_2, 0.0];
    let horizon = 4.0 * PI;
    let mut ig = Integrator::new(
        |_t: f64, y: &[f64], dy: &mut [f64]| reduced_rhs(e, y, dy),
        0.0,
        &y0,
        OdeOptions::with_tol(tol),
    );
    let r_split = 1.0 / e.p();
    let mut buf = [0.0f64; 3];
    let mut done = false;
    while !done {
        done = ig.step_toward(horizon)?;
        let g_prev = ig.y_prev()[1] - FRAC_PI_2;
        let g_now = ig.y()[1] - FRAC_PI_2;
        if !(g_prev > 0.0 && g_now <= 0.0) {
            continue;
        }
        // Secant refinement on the dense interpolant, falling back to the
        // midpoint when the slope degenerates.
        let (mut ta, mut ga) = (ig.t_prev(), g_prev);
        let (mut tb, mut gb) = (ig.t(), g_now);
        let mut t_star = tb;
        for _ in 0..50 {
            let guess = if gb != ga {
                tb - gb * (tb - ta) / (gb - ga)
            } else {
                0.5 * (ta + tb)
            };
            let t_mid = guess.clamp(ta.min(tb), ta.max(tb));
            ig.dense_eval(t_mid, &mut buf);
            let g_mid = buf[1] - FRAC_PI_2;
            t_star = t_mid;
            if g_mid > 0.0 {
                (ta, ga) = (t_mid, g_mid);
            } else {
                (tb, gb) = (t_mid, g_mid);
            }
            if (tb - ta).abs() <= 1e-13 * tb.abs().max(1.0) {
                break;
            }
        }
        ig.dense_eval(t_star, &mut buf);
        if buf[0] < r_split {
            return Ok((t_star, buf[2]));
        }
    }
    Err(Error::EventNotFound {
        what: "downward section crossing of the radial cycle",
        horizon,
    })
}

/// Time of the first full radial oscillation of the reduced orbit at
/// momentum `mu`; equals 2 pi T(mu).
pub fn return_time(e: &Exponent, mu: f64, tol: f64) -> Result<f64> {
    radial_cycle(e, mu, tol).map(|(t, _)| t)
}

/// Phase turns accumulated over one radial oscillation, phi(t*) / 2 pi;
/// equals the winding S(mu).
pub fn phi_winding(e: &Exponent, mu: f64, tol: f64) -> Result<f64> {
    radial_cycle(e, mu, tol).map(|(_, phi)| phi / (2.0 * PI))
}

const RECONSTRUCT_TOL: f64 = 1e-12;
/// A reconstructed eigenfunction that misses its start by more than this
/// is reported as an inconsistency rather than returned.
const CLOSURE_LIMIT: f64 = 1e-4;

fn finish_closed_trajectory(
    e: &Exponent,
    ts: Vec<f64>,
    states: Vec<PhaseState>,
    mu: f64,
    tol: f64,
) -> Result<PhaseTrajectory> {
    let closure = states[states.len() - 1].distance(&states[0]);
    if closure > CLOSURE_LIMIT {
        return Err(Error::Inconsistency(format!(
            "reconstructed trajectory fails to close: gap {closure:e} after t = {}",
            ts[ts.len() - 1]
        )));
    }
    let meta = TrajectoryMeta {
        p: e.p(),
        lambda: Some(1.0),
        mu: Some(mu),
        tol,
        closure_error: Some(closure),
        energy_level: Some(states[0].hamiltonian(e, 1.0)),
        momentum: Some(states[0].momentum()),
    };
    Ok(PhaseTrajectory { ts, states, meta })
}

/// Reconstructs the closed eigenfunction trajectory behind a spectral
/// record, sampled over its n-th ladder interval [0, 2 n pi_star].
///
/// Rational records integrate the reduced system and recover the planar
/// state through the polar map x = (p r)^(1/p) e^(i phi),
/// y = (q (1-r))^(1/q) e^(i (theta + phi)). The zero-momentum record uses
/// the scalar generalized cosine (a collinear oscillation), and the
/// unit-momentum record is the explicit circular orbit. All three live on
/// the unit energy level of the lambda = 1 flow and close up to rounding
/// and integration error, which is verified before returning.
pub fn reconstruct_eigenfunction(
    e: &Exponent,
    record: &EigenvalueRecord,
    n: u64,
    n_samples: usize,
) -> Result<PhaseTrajectory> {
    if (record.p - e.p()).abs() > 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "record was built for p = {} but the exponent is p = {}",
            record.p,
            e.p()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidConfig(
            "ladder index n must be at least 1".into(),
        ));
    }
    check_sampling(1.0, n_samples, 64)?;
    let t_end = record.lambda_scaling(n);
    let ts = sample_grid(t_end, n_samples);

    let states = match record.index {
        RecordIndex::UnitMomentum => ts
            .iter()
            .map(|&t| {
                let (s, c) = t.sin_cos();
                PhaseState {
                    x1: c,
                    x2: s,
                    y1: -s,
                    y2: c,
                }
            })
            .collect::<Vec<_>>(),
        RecordIndex::ZeroMomentum => {
            let mut states = Vec::with_capacity(n_samples);
            for &t in &ts {
                let (v, d) = cos_p(e, t)?;
                states.push(PhaseState {
                    x1: v,
                    x2: 0.0,
                    y1: phi_alpha([d, 0.0], e.p())[0],
                    y2: 0.0,
                });
            }
            states
        }
        RecordIndex::Rational(_) => {
            let (left, _) = level_splits(e, record.mu)?;
            let y0 = [left.r, FRAC_PI_2, 0.0];
            let mut states = Vec::with_capacity(n_samples);
            integrate_sampled(
                |_t: f64, y: &[f64], dy: &mut [f64]| reduced_rhs(e, y, dy),
                0.0,
                &y0,
                t_end,
                OdeOptions::with_tol(RECONSTRUCT_TOL),
                &ts,
                |_t, y| {
                    let (r, theta, phi) = (y[0], y[1], y[2]);
                    let mx = ((e.p() * r).ln() / e.p()).exp();
                    let my = ((e.q() * (1.0 - r)).ln() / e.q()).exp();
                    let psi = theta + phi;
                    states.push(PhaseState {
                        x1: mx * phi.cos(),
                        x2: mx * phi.sin(),
                        y1: my * psi.cos(),
                        y2: my * psi.sin(),
                    });
                },
            )?;
            states
        }
    };
    finish_closed_trajectory(e, ts, states, record.mu, RECONSTRUCT_TOL)
}

/// Integrates the full planar flow x' = phi_q(y), y' = -lambda^p phi_p(x)
/// from `start` over [0, t_end] with `n_samples` uniform samples.
///
/// Energy and angular momentum are measured on every sample; drift beyond
/// 100 x tol (relative for the energy, absolute for the momentum on unit
/// scale) aborts with an error.
pub fn full_flow(
    e: &Exponent,
    lambda: f64,
    start: PhaseState,
    t_end: f64,
    n_samples: usize,
    tol: f64,
) -> Result<PhaseTrajectory> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::OutOfDomain {
            name: "lambda",
            value: lambda,
            domain: "(0, inf)",
        });
    }
    check_sampling(t_end, n_samples, 2)?;
    let lam_pow = lambda.powf(e.p());
    let (p, q) = (e.p(), e.q());
    let y0 = [start.x1, start.x2, start.y1, start.y2];
    let ts = sample_grid(t_end, n_samples);
    let mut states = Vec::with_capacity(n_samples);
    integrate_sampled(
        move |_t: f64, y: &[f64], dy: &mut [f64]| {
            let dx = phi_alpha([y[2], y[3]], q);
            let dv = phi_alpha([y[0], y[1]], p);
            dy[0] = dx[0];
            dy[1] = dx[1];
            dy[2] = -lam_pow * dv[0];
            dy[3] = -lam_pow * dv[1];
        },
        0.0,
        &y0,
        t_end,
        OdeOptions::with_tol(tol),
        &ts,
        |_t, y| states.push(PhaseState::from_slice(y)),
    )?;
    let h0 = states[0].hamiltonian(e, lambda);
    let m0 = states[0].momentum();
    let mut h_drift = 0.0f64;
    let mut m_drift = 0.0f64;
    for s in &states {
        h_drift = h_drift.max((s.hamiltonian(e, lambda) - h0).abs());
        m_drift = m_drift.max((s.momentum() - m0).abs());
    }
    let allowed = 100.0 * tol;
    if h_drift > allowed * h0.abs().max(f64::MIN_POSITIVE) || m_drift > allowed * m0.abs().max(1.0)
    {
        return Err(Error::Inconsistency(format!(
            "conservation drift too large: energy {h_drift:e} of {h0}, momentum {m_drift:e}"
        )));
    }
    Ok(PhaseTrajectory {
        ts,
        states,
        meta: TrajectoryMeta {
            p: e.p(),
            lambda: Some(lambda),
            mu: None,
            tol,
            closure_error: None,
            energy_level: Some(h0),
            momentum: Some(m0),
        },
    })
}

/// Normalizes a nonzero solution of the lambda-flow onto the unit energy
/// level of the lambda = 1 flow:
///
/// ```text
/// (x, y)(t)  ->  (lambda h^(-1/p) x(delta t / lambda), delta h^(-1/q) y(delta t / lambda))
/// ```
///
/// with h the conserved energy and delta the sign of the momentum (time is
/// reversed for negative momentum so the normalized momentum is always in
/// [0, 1]). Sample times map to delta lambda t and are re-sorted ascending
/// when delta = -1.
pub fn scaling_transform(e: &Exponent, traj: &PhaseTrajectory) -> Result<PhaseTrajectory> {
    let lambda = traj.meta.lambda.ok_or_else(|| {
        Error::InvalidConfig(
            "scaling transform needs the flow parameter lambda in the metadata".into(),
        )
    })?;
    let first = traj
        .states
        .first()
        .ok_or_else(|| Error::InvalidConfig("cannot transform an empty trajectory".into()))?;
    let h = first.hamiltonian(e, lambda);
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "cannot normalize a trajectory with energy {h}; the zero solution has no scale"
        )));
    }
    let m0 = first.momentum();
    let delta = if m0 >= 0.0 { 1.0 } else { -1.0 };
    let mu_norm = m0.abs() * lambda / h;
    let fx = lambda * (-h.ln() / e.p()).exp();
    let fy = delta * (-h.ln() / e.q()).exp();
    let mut pairs: Vec<(f64, PhaseState)> = traj
        .ts
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| {
            (
                delta * lambda * t,
                PhaseState {
                    x1: fx * s.x1,
                    x2: fx * s.x2,
                    y1: fy * s.y1,
                    y2: fy * s.y2,
                },
            )
        })
        .collect();
    if delta < 0.0 {
        pairs.reverse();
    }
    let (ts, states): (Vec<f64>, Vec<PhaseState>) = pairs.into_iter().unzip();
    let meta = TrajectoryMeta {
        p: e.p(),
        lambda: Some(1.0),
        mu: Some(mu_norm),
        tol: traj.meta.tol,
        closure_error: None,
        energy_level: Some(states[0].hamiltonian(e, 1.0)),
        momentum: Some(mu_norm),
    };
    Ok(PhaseTrajectory { ts, states, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodfun::{s_of_mu, t_of_mu};
    use crate::specfun::{level_roots, make_exponent};
    use crate::spectrum::{base_records, make_record, solve_momentum, RationalIndex};
    use proptest::prelude::*;

    fn e(p: f64) -> Exponent {
        make_exponent(p).unwrap()
    }

    fn rational_record(p: f64, ell: u64, m: u64) -> (Exponent, EigenvalueRecord) {
        let ex = e(p);
        let ix = RationalIndex::new(ell, m).unwrap();
        let roots = solve_momentum(&ex, ix, 1e-4, 1.0 - 1e-6, 1e-11, 1e-11).unwrap();
        let rec = make_record(&ex, ix, roots[0], 1e-11).unwrap();
        (ex, rec)
    }

    #[test]
    fn duality_map_basics() {
        assert_eq!(phi_alpha([0.0, 0.0], 3.0), [0.0, 0.0]);
        let v = [3.0, -4.0];
        let w = phi_alpha(v, 2.0);
        assert_eq!(w, v, "alpha = 2 must be the identity");
        let z = phi_alpha(v, 3.0);
        let nz = z[0].hypot(z[1]);
        assert!(
            (nz - 25.0).abs() < 1e-12,
            "norm must map to norm^(alpha-1): got {nz}"
        );
        assert!(
            (z[0] * v[1] - z[1] * v[0]).abs() < 1e-12,
            "direction preserved"
        );
    }

    #[test]
    fn return_time_is_flat_at_two() {
        let ex = e(2.0);
        let t = return_time(&ex, 0.6, 1e-11).unwrap();
        assert!(
            (t - PI).abs() < 1e-9,
            "p = 2 radial cycle must last pi: got {t}"
        );
        let w = phi_winding(&ex, 0.6, 1e-11).unwrap();
        assert!((w - 0.5).abs() < 1e-9, "p = 2 winding must be 1/2: got {w}");
        let (lo, hi) = level_roots(&ex, 0.6).unwrap();
        assert!((lo - 0.1).abs() < 1e-12 && (hi - 0.9).abs() < 1e-12);
    }

    #[test]
    fn cycle_data_matches_quadrature() {
        for &(p, mu) in &[(3.0, 0.5), (5.0, 0.8)] {
            let ex = e(p);
            let t_quad = t_of_mu(&ex, mu, 1e-12).unwrap();
            let t_flow = return_time(&ex, mu, 1e-11).unwrap() / (2.0 * PI);
            assert!(
                ((t_flow - t_quad) / t_quad).abs() < 1e-8,
                "return period mismatch at p = {p}, mu = {mu}: flow {t_flow} vs quadrature {t_quad}"
            );
            let s_quad = s_of_mu(&ex, mu, 1e-12).unwrap();
            let s_flow = phi_winding(&ex, mu, 1e-11).unwrap();
            assert!(
                ((s_flow - s_quad) / s_quad).abs() < 1e-8,
                "winding mismatch at p = {p}, mu = {mu}: flow {s_flow} vs quadrature {s_quad}"
            );
        }
    }

    #[test]
    fn reduced_flow_stays_in_band_and_conserves() {
        let ex = e(5.0);
        let (r_lo, r_hi) = level_roots(&ex, 0.8).unwrap();
        let traj = reduced_flow(&ex, 0.8, 10.0, 201, 1e-11).unwrap();
        assert_eq!(traj.samples.len(), 201);
        for w in traj.samples.windows(2) {
            assert!(w[1].phi > w[0].phi, "phase must advance monotonically");
        }
        for s in &traj.samples {
            assert!(
                s.r > r_lo - 1e-9 && s.r < r_hi + 1e-9,
                "radius {} left the band [{r_lo}, {r_hi}]",
                s.r
            );
            assert!(s.theta > 0.0 && s.theta < PI);
        }
    }

    #[test]
    fn reduced_flow_equilibrium_at_unit_momentum() {
        let ex = e(3.0);
        let traj = reduced_flow(&ex, 1.0, 6.0, 61, 1e-11).unwrap();
        for s in &traj.samples {
            assert!(
                (s.r - 1.0 / 3.0).abs() < 1e-12,
                "equilibrium radius drifted to {}",
                s.r
            );
            assert!((s.theta - FRAC_PI_2).abs() < 1e-12);
            assert!(
                (s.phi - s.t).abs() < 1e-9,
                "equilibrium phase must advance at unit rate: phi = {} at t = {}",
                s.phi,
                s.t
            );
        }
    }

    #[test]
    fn reconstructed_rational_orbit_closes() {
        let (ex, rec) = rational_record(3.0, 9, 19);
        let traj = reconstruct_eigenfunction(&ex, &rec, 1, 128).unwrap();
        assert!(
            traj.meta.closure_error.unwrap() < 1e-6,
            "closure gap {}",
            traj.meta.closure_error.unwrap()
        );
        for st in &traj.states {
            assert!(
                (st.hamiltonian(&ex, 1.0) - 1.0).abs() < 1e-8,
                "energy left the unit level: {}",
                st.hamiltonian(&ex, 1.0)
            );
            assert!(
                (st.momentum() - rec.mu).abs() < 1e-8,
                "momentum {} strayed from {}",
                st.momentum(),
                rec.mu
            );
        }
        assert!((traj.ts[traj.ts.len() - 1] - 2.0 * rec.pi_star).abs() < 1e-12);
    }

    #[test]
    fn reconstructed_zero_momentum_orbit_is_collinear() {
        let ex = e(3.0);
        let (zero, _) = base_records(&ex);
        let traj = reconstruct_eigenfunction(&ex, &zero, 1, 96).unwrap();
        assert!(traj.meta.closure_error.unwrap() < 1e-9);
        for st in &traj.states {
            assert_eq!(st.x2, 0.0, "collinear orbit must stay on the first axis");
            assert_eq!(st.y2, 0.0);
            assert!(st.momentum().abs() < 1e-15);
            assert!(
                (st.hamiltonian(&ex, 1.0) - 1.0).abs() < 5e-10,
                "energy {} off the unit level",
                st.hamiltonian(&ex, 1.0)
            );
        }
        let t_last = traj.ts[traj.ts.len() - 1];
        assert!((t_last - 2.0 * ex.pi_p()).abs() < 1e-12);
    }

    #[test]
    fn reconstructed_unit_momentum_orbit_is_circular() {
        let ex = e(5.0);
        let (_, unit) = base_records(&ex);
        let traj = reconstruct_eigenfunction(&ex, &unit, 2, 64).unwrap();
        assert!(traj.meta.closure_error.unwrap() < 1e-12);
        assert!((traj.ts[traj.ts.len() - 1] - 4.0 * PI).abs() < 1e-12);
        for (&t, st) in traj.ts.iter().zip(&traj.states) {
            assert!((st.x1 - t.cos()).abs() < 1e-14);
            assert!((st.x2 - t.sin()).abs() < 1e-14);
            assert!((st.y1 + t.sin()).abs() < 1e-14);
            assert!((st.y2 - t.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn reconstruction_matches_direct_flow() {
        let (ex, rec) = rational_record(3.0, 9, 19);
        let traj = reconstruct_eigenfunction(&ex, &rec, 1, 256).unwrap();
        let t_end = traj.ts[traj.ts.len() - 1];
        let direct = full_flow(&ex, 1.0, traj.states[0], t_end, 256, 1e-11).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in traj.states.iter().zip(&direct.states) {
            worst = worst.max(a.distance(b));
        }
        assert!(
            worst < 1e-6,
            "polar reconstruction and direct integration disagree by {worst}"
        );
    }

    #[test]
    fn full_flow_conserves_energy_and_momentum() {
        let ex = e(1.5);
        let start = PhaseState {
            x1: 0.8,
            x2: -0.3,
            y1: 0.4,
            y2: 1.1,
        };
        let traj = full_flow(&ex, 2.3, start, 10.0, 101, 1e-11).unwrap();
        let h0 = traj.meta.energy_level.unwrap();
        let m0 = traj.meta.momentum.unwrap();
        for st in &traj.states {
            assert!(((st.hamiltonian(&ex, 2.3) - h0) / h0).abs() < 1e-8);
            assert!((st.momentum() - m0).abs() < 1e-8);
        }
    }

    #[test]
    fn scaling_collapses_linear_family_to_closed_form() {
        let ex = e(2.0);
        let (a1, a2, ph1, ph2, lam) = (1.3f64, 0.7f64, 0.25f64, -0.4f64, 1.7f64);
        let start = PhaseState {
            x1: a1 * (lam * ph1).sin(),
            x2: a2 * (lam * ph2).sin(),
            y1: lam * a1 * (lam * ph1).cos(),
            y2: lam * a2 * (lam * ph2).cos(),
        };
        let traj = full_flow(&ex, lam, start, 5.0, 101, 1e-11).unwrap();
        let scaled = scaling_transform(&ex, &traj).unwrap();
        let expect = 2.0 * a1 * a2 * (lam * (ph1 - ph2)).sin().abs() / (a1 * a1 + a2 * a2);
        let got = scaled.meta.momentum.unwrap();
        assert!(
            (got - expect).abs() < 1e-10,
            "normalized momentum: got {got}, closed form {expect}"
        );
        for st in &scaled.states {
            assert!(
                (st.hamiltonian(&ex, 1.0) - 1.0).abs() < 1e-10,
                "normalized energy {} off unit",
                st.hamiltonian(&ex, 1.0)
            );
        }
    }

    #[test]
    fn scaling_handles_negative_momentum_and_rejects_zero() {
        let ex = e(3.0);
        let start = PhaseState {
            x1: 1.0,
            x2: 0.2,
            y1: 0.7,
            y2: -0.5,
        };
        assert!(start.momentum() < 0.0);
        let traj = full_flow(&ex, 1.4, start, 4.0, 81, 1e-11).unwrap();
        let scaled = scaling_transform(&ex, &traj).unwrap();
        let mu = scaled.meta.momentum.unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&mu), "mu_norm = {mu}");
        for w in scaled.ts.windows(2) {
            assert!(w[1] > w[0], "times must be ascending after reversal");
        }
        assert!((scaled.states[0].hamiltonian(&ex, 1.0) - 1.0).abs() < 1e-10);

        let zero = PhaseTrajectory {
            ts: vec![0.0, 1.0],
            states: vec![
                PhaseState {
                    x1: 0.0,
                    x2: 0.0,
                    y1: 0.0,
                    y2: 0.0
                };
                2
            ],
            meta: traj.meta,
        };
        assert!(scaling_transform(&ex, &zero).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prop_duality_maps_invert(
            x in -10.0f64..10.0,
            y in -10.0f64..10.0,
            p in 1.2f64..6.0,
        ) {
            prop_assume!(x.hypot(y) > 1e-3);
            let ex = e(p);
            let w = phi_alpha(phi_alpha([x, y], ex.q()), ex.p());
            prop_assert!((w[0] - x).abs() < 1e-10 * x.abs().max(1.0));
            prop_assert!((w[1] - y).abs() < 1e-10 * y.abs().max(1.0));
        }

        #[test]
        fn prop_normalized_momentum_in_unit_interval(
            x1 in -2.0f64..2.0,
            x2 in -2.0f64..2.0,
            y1 in -2.0f64..2.0,
            y2 in -2.0f64..2.0,
            p in 1.4f64..4.0,
            lam in 0.5f64..3.0,
        ) {
            let start = PhaseState { x1, x2, y1, y2 };
            prop_assume!(x1.hypot(x2) > 0.05 && y1.hypot(y2) > 0.05);
            let ex = e(p);
            let traj = full_flow(&ex, lam, start, 1.0, 33, 1e-11).unwrap();
            let scaled = scaling_transform(&ex, &traj).unwrap();
            let mu = scaled.meta.momentum.unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&mu), "mu_norm = {}", mu);
            let h1 = scaled.states[0].hamiltonian(&ex, 1.0);
            prop_assert!((h1 - 1.0).abs() < 1e-10, "unit energy violated: {}", h1);
        }
    }
}
