//! Period functions of the reduced orbits.
//!
//! A closed reduced orbit on the level Q = mu has two characteristic numbers.
//! T(mu) is the normalized time for the energy fraction r to run once from
//! the lower level root to the upper one and back; S(mu) is the normalized
//! phase winding accumulated over that oscillation. Both are integrals over
//! [r_minus, r_plus] whose integrands blow up like an inverse square root at
//! both ends.
//!
//! The substitution r = r_minus + delta sin^2(omega/2), delta = r_plus -
//! r_minus, absorbs the blow-up: on omega in [0, pi] every integrand below
//! is smooth and bounded. Two further precautions make the evaluation exact
//! to the last few ulps even when a level root sits within 1e-300 of the
//! ends of (0, 1):
//!
//! * each node keeps its energy split (r, s) anchored at the nearer root,
//!   with the small fraction taken from the root's primitively stored small
//!   component rather than reconstructed as 1 minus the large one;
//! * the square root sqrt(Q^2 - mu^2) is evaluated through the log gap
//!   d = ln Q(r(omega)) - ln mu, assembled from ln_1p terms that vanish
//!   exactly at the roots, as mu e^(d/2) sqrt(-expm1(-2d)).
//!
//! Quadrature runs a doubling Gauss-Legendre ladder and switches to a
//! tanh-sinh rule when an orbit hugs the ends of the unit interval so
//! tightly that the boundary layer outruns polynomial accuracy. Near the
//! circular orbit (1 - mu below 1e-8) the integrals are replaced by their
//! quadratic expansions, which are accurate to O((1-mu)^3) there while the
//! integrand geometry has already collapsed below rounding noise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::num::{gauss, tanhsinh};
use crate::specfun::{level_splits, EnergySplit, Exponent};

/// Switch to the quadratic expansions once 1 - mu drops below this.
const ASYMPTOTIC_SWITCH: f64 = 1e-8;
/// Skip the polynomial ladder when a root is this close to the interval end,
/// relative to the oscillation width.
const LAYER_LIMIT: f64 = 1e-5;
/// Refinement cap for the tanh-sinh fallback.
const TS_MAX_LEVEL: u32 = 12;

const COMPONENT_NAMES: [&str; 4] = [
    "return period",
    "symmetric winding",
    "left-weighted winding",
    "right-weighted winding",
];

/// How a period value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodMethod {
    /// Desingularized quadrature over the oscillation interval.
    Quadrature,
    /// Quadratic expansion around the circular orbit mu = 1.
    Asymptotic,
    /// Closed-form limit value at mu = 0.
    Limit,
}

impl PeriodMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PeriodMethod::Quadrature => "quadrature",
            PeriodMethod::Asymptotic => "asymptotic",
            PeriodMethod::Limit => "limit",
        }
    }
}

impl std::fmt::Display for PeriodMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both period functions and their ratio at one momentum level.
#[derive(Debug, Clone, Copy)]
pub struct PeriodTriple {
    pub mu: f64,
    /// Normalized return period T(mu).
    pub t_val: f64,
    /// Normalized winding S(mu).
    pub s_val: f64,
    /// Ratio U(mu) = T(mu) / S(mu).
    pub u_val: f64,
    pub method: PeriodMethod,
}

/// Node geometry shared by all period integrands on one level orbit.
struct OrbitGeometry {
    p: f64,
    q: f64,
    delta: f64,
    left: EnergySplit,
    right: EnergySplit,
    /// Exponent (p-2)/p of the ratio qs/pr appearing in the return period.
    pow_exp: f64,
    mu: f64,
    ln_mu: f64,
}

impl OrbitGeometry {
    fn new(e: &Exponent, mu: f64) -> Result<Self> {
        let (left, right) = level_splits(e, mu)?;
        Ok(Self {
            p: e.p(),
            q: e.q(),
            delta: right.r - left.r,
            left,
            right,
            pow_exp: (e.p() - 2.0) / e.p(),
            mu,
            ln_mu: mu.ln(),
        })
    }

    /// The four omega-integrands (return period, symmetric winding, and the
    /// two one-sided winding forms) at the node whose distances to the ends
    /// of [0, pi] are `off_a` and `off_b`.
    fn components(&self, off_a: f64, off_b: f64) -> [f64; 4] {
        let (r, s, d);
        if off_a <= off_b {
            // Left half: anchor at the lower root so the log gap d vanishes
            // exactly at omega = 0.
            let u = (0.5 * off_a).sin().powi(2);
            let du = self.delta * u;
            r = self.left.r + du;
            s = self.left.s - du;
            d = (du / self.left.r).ln_1p() / self.p + (-du / self.left.s).ln_1p() / self.q;
        } else {
            let c = (0.5 * off_b).sin().powi(2);
            let dc = self.delta * c;
            r = self.right.r - dc;
            s = self.right.s + dc;
            d = (-dc / self.right.r).ln_1p() / self.p + (dc / self.right.s).ln_1p() / self.q;
        }
        // sqrt(Q^2 - mu^2) = Q sqrt(-expm1(-2d)) with Q = e^(d + ln mu);
        // assembling Q inside one exponential keeps the factor finite even
        // when e^d alone would overflow.
        let root = (d + self.ln_mu).exp() * (-(-2.0 * d).exp_m1()).sqrt();
        let sin_omega = off_a.min(off_b).sin();
        let base = 0.5 * self.delta * sin_omega / root;
        let pr = self.p * r;
        let qs = self.q * s;
        let ratio_pow = (self.pow_exp * (qs.ln() - pr.ln())).exp();
        [
            base * ratio_pow,
            base * self.mu / (pr * qs),
            base * self.mu / pr,
            base * self.mu / qs,
        ]
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct Comp {
    sum: f64,
    carry: f64,
}

impl Comp {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn gl_components(geom: &OrbitGeometry, n: usize) -> [f64; 4] {
    let rule = gauss::ladder_rule(n);
    let mut acc = [Comp::default(); 4];
    for &(x, w) in rule {
        let off_a = 0.5 * PI * (1.0 + x);
        let off_b = 0.5 * PI * (1.0 - x);
        let vals = geom.components(off_a, off_b);
        for i in 0..4 {
            acc[i].add(w * vals[i]);
        }
    }
    // The interval half-length pi/2 and the leading 1/pi combine to 1/2.
    std::array::from_fn(|i| 0.5 * acc[i].value())
}

/// All four period components at relative tolerance `rel_tol`.
fn quad_components(geom: &OrbitGeometry, rel_tol: f64) -> Result<[f64; 4]> {
    let tol = rel_tol.max(4e-15);
    let layered = geom.left.r / geom.delta < LAYER_LIMIT || geom.right.s / geom.delta < LAYER_LIMIT;
    if !layered {
        let mut prev: Option<[f64; 4]> = None;
        for &n in gauss::LADDER.iter() {
            let cur = gl_components(geom, n);
            if let Some(before) = prev {
                let all_settled = (0..4).all(|i| (cur[i] - before[i]).abs() <= tol * cur[i].abs());
                if all_settled {
                    return Ok(cur);
                }
            }
            prev = Some(cur);
        }
    }
    // Orbits hugging the ends of (0, 1) develop a boundary layer narrower
    // than any affordable polynomial rule; tanh-sinh nodes crowd into the
    // layer double-exponentially and resolve it.
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let res = tanhsinh::integrate(|a, b| geom.components(a, b)[i], 0.0, PI, tol, TS_MAX_LEVEL);
        if !res.converged {
            return Err(Error::QuadratureNonConvergence {
                what: COMPONENT_NAMES[i],
                tol,
                last_change: res.last_change,
            });
        }
        *slot = res.value / PI;
    }
    Ok(out)
}

pub(crate) fn check_momentum(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "mu",
            value: mu,
            domain: "(0, 1]",
        })
    }
}

/// Quadratic expansions of (T, S) around the circular orbit mu = 1.
///
/// Exact at mu = 1; the truncation error grows like |1 - mu|^3 away from it.
pub fn asymptotic_ts(e: &Exponent, mu: f64) -> (f64, f64) {
    let h = 1.0 - mu;
    (
        e.c1() + h * (e.c2() + h * e.c3()),
        e.c1() + h * (e.c2() + h * e.c4()),
    )
}

/// Limits of (T, S) as mu approaches 0: the orbit degenerates into the
/// scalar oscillation, whose half-period fixes T while S tends to 1/2.
pub fn limits_at_zero(e: &Exponent) -> (f64, f64) {
    (e.pi_p() / (2.0 * PI), 0.5)
}

/// T, S, and U = T/S at momentum level `mu`, with the evaluation method.
pub fn period_triple(e: &Exponent, mu: f64, rel_tol: f64) -> Result<PeriodTriple> {
    check_momentum(mu)?;
    if 1.0 - mu < ASYMPTOTIC_SWITCH {
        let (t_val, s_val) = asymptotic_ts(e, mu);
        return Ok(PeriodTriple {
            mu,
            t_val,
            s_val,
            u_val: t_val / s_val,
            method: PeriodMethod::Asymptotic,
        });
    }
    let geom = OrbitGeometry::new(e, mu)?;
    let c = quad_components(&geom, rel_tol)?;
    Ok(PeriodTriple {
        mu,
        t_val: c[0],
        s_val: c[1],
        u_val: c[0] / c[1],
        method: PeriodMethod::Quadrature,
    })
}

/// Normalized return period T(mu).
pub fn t_of_mu(e: &Exponent, mu: f64, rel_tol: f64) -> Result<f64> {
    period_triple(e, mu, rel_tol).map(|t| t.t_val)
}

/// Normalized winding S(mu).
pub fn s_of_mu(e: &Exponent, mu: f64, rel_tol: f64) -> Result<f64> {
    period_triple(e, mu, rel_tol).map(|t| t.s_val)
}

/// Period ratio U(mu) = T(mu) / S(mu).
pub fn u_of_mu(e: &Exponent, mu: f64, rel_tol: f64) -> Result<f64> {
    period_triple(e, mu, rel_tol).map(|t| t.u_val)
}

/// The winding computed through its three equivalent integral forms:
/// symmetric, left-weighted, and right-weighted. Analytically all three are
/// S(mu); their numerical agreement cross-checks the quadrature.
pub fn s_forms(e: &Exponent, mu: f64, rel_tol: f64) -> Result<[f64; 3]> {
    check_momentum(mu)?;
    if 1.0 - mu < ASYMPTOTIC_SWITCH {
        let (_, s_val) = asymptotic_ts(e, mu);
        return Ok([s_val; 3]);
    }
    let geom = OrbitGeometry::new(e, mu)?;
    let c = quad_components(&geom, rel_tol)?;
    Ok([c[1], c[2], c[3]])
}

/// Centered difference of U against its linear prediction near mu = 1.
///
/// Returns (measured slope, predicted slope c7 (1 - mu)). The step is
/// min(1e-5, (1-mu)/10), so the stencil never crosses the endpoint.
pub fn u_slope_check(e: &Exponent, mu: f64, rel_tol: f64) -> Result<(f64, f64)> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::OutOfDomain {
            name: "mu",
            value: mu,
            domain: "(0, 1)",
        });
    }
    let h = 1e-5f64.min((1.0 - mu) / 10.0).min(0.5 * mu);
    let up = u_of_mu(e, mu + h, rel_tol)?;
    let dn = u_of_mu(e, mu - h, rel_tol)?;
    Ok(((up - dn) / (2.0 * h), e.c7() * (1.0 - mu)))
}
