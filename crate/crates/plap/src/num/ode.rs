//! Explicit adaptive Runge–Kutta integration: Dormand–Prince 5(4).
//!
//! Embedded error estimate, PI step-size control, first-same-as-last stage
//! reuse, and a quartic dense-output interpolant over the last accepted step.
//! The integrator is a pull-style stepper: callers advance one accepted step
//! at a time and may interpolate anywhere inside it, which keeps memory flat
//! for long horizons and gives event detectors exact access to the step just
//! taken.

use crate::error::{Error, Result};

/// Tolerances and guards for one integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Absolute tolerance per component.
    pub atol: f64,
    /// Upper bound on the step size (infinite by default).
    pub h_max: f64,
    /// Total step budget (accepted + rejected).
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-11,
            h_max: f64::INFINITY,
            max_steps: 20_000_000,
        }
    }
}

impl OdeOptions {
    /// Uniform tolerance for both the absolute and relative test.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
// Fifth-order solution weights; the seventh stage evaluates at the new point.
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Error-estimate weights (5th minus 4th order solution).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights for the fifth interpolation coefficient.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Right-hand side signature: `f(t, y, dy)` writes the derivative into `dy`.
pub trait Rhs {
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F: Fn(f64, &[f64], &mut [f64])> Rhs for F {
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self(t, y, dy)
    }
}

/// One-step-at-a-time Dormand–Prince driver with dense output.
pub struct Integrator<F: Rhs> {
    f: F,
    opts: OdeOptions,
    dim: usize,
    t: f64,
    y: Vec<f64>,
    t_prev: f64,
    y_prev: Vec<f64>,
    h: f64,
    /// Stage derivatives; `k[0]` is valid at `(t, y)` between steps (FSAL).
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    y_new: Vec<f64>,
    /// Dense coefficients of the last accepted step, `dim x 5`, row-major.
    cont: Vec<f64>,
    facold: f64,
    steps_taken: usize,
    rejected_last: bool,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl<F: Rhs> Integrator<F> {
    /// Prepares an integration starting at `(t0, y0)`.
    pub fn new(f: F, t0: f64, y0: &[f64], opts: OdeOptions) -> Self {
        let dim = y0.len();
        let mut s = Self {
            f,
            opts,
            dim,
            t: t0,
            y: y0.to_vec(),
            t_prev: t0,
            y_prev: y0.to_vec(),
            h: 0.0,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
            y_new: vec![0.0; dim],
            cont: vec![0.0; dim * 5],
            facold: 1e-4,
            steps_taken: 0,
            rejected_last: false,
            n_accepted: 0,
            n_rejected: 0,
        };
        s.f.eval(t0, &s.y, &mut s.k[0]);
        s.h = s.initial_step();
        s
    }

    /// Classic norm-based starting step-size heuristic.
    fn initial_step(&mut self) -> f64 {
        let sc = |i: usize| self.opts.atol + self.opts.rtol * self.y[i].abs();
        let d0 = rms(self.y.iter().enumerate().map(|(i, v)| v / sc(i)), self.dim);
        let d1 = rms(
            self.k[0].iter().enumerate().map(|(i, v)| v / sc(i)),
            self.dim,
        );
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        for i in 0..self.dim {
            self.stage[i] = self.y[i] + h0 * self.k[0][i];
        }
        self.f.eval(self.t + h0, &self.stage, &mut self.k[1]);
        let d2 = rms(
            (0..self.dim).map(|i| (self.k[1][i] - self.k[0][i]) / sc(i)),
            self.dim,
        ) / h0;
        let d_max = d1.max(d2);
        let h1 = if d_max <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d_max).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.opts.h_max)
    }

    /// Current time (end of the last accepted step).
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Current state.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Start time of the last accepted step.
    pub fn t_prev(&self) -> f64 {
        self.t_prev
    }

    /// State at the start of the last accepted step.
    pub fn y_prev(&self) -> &[f64] {
        &self.y_prev
    }

    /// Takes one accepted step, clipped so it never passes `t_limit`.
    /// Returns `true` when `t_limit` has been reached.
    pub fn step_toward(&mut self, t_limit: f64) -> Result<bool> {
        if t_limit - self.t <= 1e-14 * self.t.abs().max(1.0) {
            self.t = self.t.max(t_limit);
            return Ok(true);
        }
        loop {
            self.steps_taken += 1;
            if self.steps_taken > self.opts.max_steps {
                return Err(Error::StepBudgetExceeded {
                    max_steps: self.opts.max_steps,
                    t: self.t,
                });
            }
            let mut h = self.h.min(self.opts.h_max);
            let mut clipped = false;
            if self.t + h >= t_limit {
                h = t_limit - self.t;
                clipped = true;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }

            let err = self.try_step(h);

            // PI controller (error exponent 1/5 with a small derivative term).
            let beta = 0.04;
            let expo1 = 0.2 - beta * 0.75;
            if err.is_finite() && err <= 1.0 {
                // Accept.
                let fac11 = err.powf(expo1);
                let mut fac = fac11 / self.facold.powf(beta);
                fac = (fac / 0.9).clamp(0.1, 5.0);
                let mut h_next = h / fac;
                if self.rejected_last {
                    h_next = h_next.min(h);
                }
                self.facold = err.max(1e-4);
                self.rejected_last = false;
                self.n_accepted += 1;

                self.prepare_dense(h);
                self.t_prev = self.t;
                std::mem::swap(&mut self.y_prev, &mut self.y);
                std::mem::swap(&mut self.y, &mut self.y_new);
                self.t = if clipped { t_limit } else { self.t + h };
                self.k.swap(0, 6); // FSAL: derivative at the new point.
                self.h = h_next;
                return Ok(self.t >= t_limit);
            }
            // Reject and shrink.
            self.n_rejected += 1;
            self.rejected_last = true;
            self.h = if err.is_finite() {
                let fac11 = err.powf(expo1);
                h / (fac11 / 0.9).min(5.0)
            } else {
                h * 0.2
            };
        }
    }

    /// Evaluates the six intermediate stages and the error norm for step `h`.
    /// On return `y_new` and `k[6]` describe the candidate step.
    fn try_step(&mut self, h: f64) -> f64 {
        let dim = self.dim;
        macro_rules! build_stage {
            ($coeffs:expr, $ks:expr) => {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (c, k) in $coeffs.iter().zip($ks) {
                        acc += c * self.k[*k][i];
                    }
                    self.stage[i] = self.y[i] + h * acc;
                }
            };
        }
        build_stage!(A2, &[0usize]);
        self.f.eval(self.t + C[1] * h, &self.stage, &mut self.k[1]);
        build_stage!(A3, &[0usize, 1]);
        self.f.eval(self.t + C[2] * h, &self.stage, &mut self.k[2]);
        build_stage!(A4, &[0usize, 1, 2]);
        self.f.eval(self.t + C[3] * h, &self.stage, &mut self.k[3]);
        build_stage!(A5, &[0usize, 1, 2, 3]);
        self.f.eval(self.t + C[4] * h, &self.stage, &mut self.k[4]);
        build_stage!(A6, &[0usize, 1, 2, 3, 4]);
        self.f.eval(self.t + C[5] * h, &self.stage, &mut self.k[5]);
        for i in 0..dim {
            let mut acc = 0.0;
            for (c, k) in A7.iter().zip(0..6) {
                acc += c * self.k[k][i];
            }
            self.y_new[i] = self.y[i] + h * acc;
        }
        // Derivative at the candidate endpoint doubles as the next first stage.
        self.f.eval(self.t + h, &self.y_new, &mut self.k[6]);

        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (c, k) in E.iter().zip(0..7) {
                e += c * self.k[k][i];
            }
            e *= h;
            let sc = self.opts.atol + self.opts.rtol * self.y[i].abs().max(self.y_new[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        if !err_sq.is_finite() || !self.y_new.iter().all(|v| v.is_finite()) {
            return f64::NAN;
        }
        (err_sq / dim as f64).sqrt()
    }

    /// Stores the dense-output coefficients of the step just accepted.
    fn prepare_dense(&mut self, h: f64) {
        for i in 0..self.dim {
            let ydiff = self.y_new[i] - self.y[i];
            let bspl = h * self.k[0][i] - ydiff;
            let mut c5 = 0.0;
            for (d, k) in D.iter().zip(0..7) {
                c5 += d * self.k[k][i];
            }
            let row = &mut self.cont[i * 5..i * 5 + 5];
            row[0] = self.y[i];
            row[1] = ydiff;
            row[2] = bspl;
            row[3] = ydiff - h * self.k[6][i] - bspl;
            row[4] = h * c5;
        }
    }

    /// Interpolates the solution at `t` inside the last accepted step.
    pub fn dense_eval(&self, t: f64, out: &mut [f64]) {
        let h = self.t - self.t_prev;
        debug_assert!(h > 0.0, "dense output requires an accepted step");
        let theta = ((t - self.t_prev) / h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        for (slot, row) in out.iter_mut().zip(self.cont.chunks_exact(5)).take(self.dim) {
            *slot =
                row[0] + theta * (row[1] + theta1 * (row[2] + theta * (row[3] + theta1 * row[4])));
        }
    }
}

fn rms(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    (values.map(|v| v * v).sum::<f64>() / n as f64).sqrt()
}

/// Integrates to `t_end` and returns the final state.
pub fn integrate_to<F: Rhs>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: OdeOptions,
) -> Result<Vec<f64>> {
    let mut ig = Integrator::new(f, t0, y0, opts);
    while !ig.step_toward(t_end)? {}
    Ok(ig.y().to_vec())
}

/// Integrates to `t_end`, calling `on_sample(t, y)` at each requested time.
///
/// Sample times must be ascending and inside `[t0, t_end]`; values are read
/// from the dense interpolant of the step containing each time.
pub fn integrate_sampled<F: Rhs>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: OdeOptions,
    sample_ts: &[f64],
    mut on_sample: impl FnMut(f64, &[f64]),
) -> Result<Vec<f64>> {
    let mut ig = Integrator::new(f, t0, y0, opts);
    let mut buf = vec![0.0; y0.len()];
    let mut next = 0usize;
    // Samples exactly at the start come straight from the initial state.
    while next < sample_ts.len() && sample_ts[next] <= t0 {
        on_sample(sample_ts[next], y0);
        next += 1;
    }
    loop {
        let done = ig.step_toward(t_end)?;
        while next < sample_ts.len() && sample_ts[next] <= ig.t() {
            ig.dense_eval(sample_ts[next], &mut buf);
            on_sample(sample_ts[next], &buf);
            next += 1;
        }
        if done {
            break;
        }
    }
    Ok(ig.y().to_vec())
}
