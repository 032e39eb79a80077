//! Periodic eigenvalues assembled from the period functions.
//!
//! Every closed reduced orbit whose winding S(mu) is a rational ell/m closes
//! up after m radial oscillations and ell phase revolutions, and contributes
//! the half-period generator pi_star = m pi T(mu). Together with the two
//! degenerate families at the ends of the momentum interval (the scalar
//! oscillation at mu = 0 with generator pi_p and the circular orbit at
//! mu = 1 with generator pi), these produce the full periodic spectrum:
//! each generator g yields the eigenvalue ladder lambda_n = 2 n g in the
//! scaled problem and (2 n g)^p in the original one.
//!
//! The pipeline is: bound the reachable winding range over the momentum
//! window, enumerate coprime fractions strictly inside it, solve S(mu) =
//! ell/m for each, and cross-check every record through the identity
//! m pi T(mu) = ell pi U(mu), which holds exactly at a true root. A final
//! pass tests the generators for pairwise integer ratios; such a relation
//! would merge two ladders and is reported as an independence violation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::num::rootfind::{bracketed_root, RootCfg};
use crate::periodfun::{period_triple, s_of_mu};
use crate::specfun::Exponent;

/// A reduced fraction ell/m identifying one rational winding level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalIndex {
    ell: u64,
    m: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalIndex {
    /// Validates that both parts are positive and the fraction is reduced.
    pub fn new(ell: u64, m: u64) -> Result<Self> {
        if ell == 0 || m == 0 {
            return Err(Error::InvalidConfig(format!(
                "winding index {ell}/{m} must have positive numerator and denominator"
            )));
        }
        if gcd(ell, m) != 1 {
            return Err(Error::InvalidConfig(format!(
                "winding index {ell}/{m} is not in lowest terms"
            )));
        }
        Ok(Self { ell, m })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The fraction as a float.
    pub fn value(&self) -> f64 {
        self.ell as f64 / self.m as f64
    }
}

impl std::fmt::Display for RationalIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.ell, self.m)
    }
}

/// Which family of closed orbits a record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordIndex {
    /// Closed orbit with rational winding ell/m at an interior momentum.
    Rational(RationalIndex),
    /// Scalar oscillation family in the limit mu = 0.
    ZeroMomentum,
    /// Circular orbit at full momentum mu = 1.
    UnitMomentum,
}

impl RecordIndex {
    /// Short label used in reports and emitted tables.
    pub fn label(&self) -> String {
        match self {
            RecordIndex::Rational(ix) => ix.to_string(),
            RecordIndex::ZeroMomentum => "mu=0".to_string(),
            RecordIndex::UnitMomentum => "mu=1".to_string(),
        }
    }
}

/// One generator of an eigenvalue ladder.
#[derive(Debug, Clone, Copy)]
pub struct EigenvalueRecord {
    pub index: RecordIndex,
    /// Momentum level of the underlying closed orbit.
    pub mu: f64,
    /// Half-period generator of the ladder.
    pub pi_star: f64,
    /// Exponent the record was computed for.
    pub p: f64,
}

impl EigenvalueRecord {
    /// n-th eigenvalue of the scaled problem: 2 n pi_star.
    pub fn lambda_scaling(&self, n: u64) -> f64 {
        2.0 * n as f64 * self.pi_star
    }

    /// n-th eigenvalue of the original problem: (2 n pi_star)^p.
    pub fn lambda_original(&self, n: u64) -> f64 {
        self.lambda_scaling(n).powf(self.p)
    }
}

/// Outcome of the pairwise integer-ratio scan over the generators.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    /// Checked generators as (label, value), in record order.
    pub generators: Vec<(String, f64)>,
    /// Ordered pairs (i, j, ratio, nearest integer) whose ratio sits within
    /// tolerance of an integer >= 1.
    pub violations: Vec<(usize, usize, f64, u64)>,
    /// Tolerance the scan ran at.
    pub tol: f64,
}

impl IndependenceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Everything the spectrum pipeline produces for one exponent.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub p: f64,
    /// Verified winding range over the momentum window.
    pub s_min: f64,
    pub s_max: f64,
    /// Base records first (mu = 0, then mu = 1), then rational records
    /// ordered by (denominator, numerator).
    pub records: Vec<EigenvalueRecord>,
    pub independence: IndependenceReport,
}

/// Tunable inputs of the spectrum pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumParams {
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub max_denominator: u64,
    pub quad_tol: f64,
    pub root_tol: f64,
    pub independence_tol: f64,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        Self {
            mu_lo: 1e-4,
            mu_hi: 1.0 - 1e-6,
            max_denominator: 50,
            quad_tol: 1e-11,
            root_tol: 1e-11,
            independence_tol: 1e-9,
        }
    }
}

fn check_window(mu_lo: f64, mu_hi: f64) -> Result<()> {
    if mu_lo > 0.0 && mu_lo < mu_hi && mu_hi <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "momentum window [{mu_lo}, {mu_hi}] must satisfy 0 < lo < hi <= 1"
        )))
    }
}

/// Minimum and maximum of the winding over an inclusive grid of `grid_n`
/// momentum values spanning [mu_lo, mu_hi].
pub fn s_range(e: &Exponent, mu_lo: f64, mu_hi: f64, grid_n: usize) -> Result<(f64, f64)> {
    check_window(mu_lo, mu_hi)?;
    if grid_n < 16 {
        return Err(Error::InvalidConfig(format!(
            "winding range scan needs at least 16 grid points, got {grid_n}"
        )));
    }
    let scan = momentum_scan(e, mu_lo, mu_hi, grid_n - 1, 1e-11)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(_, s) in &scan {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}

/// All reduced fractions ell/m with m up to `max_denominator` lying strictly
/// inside (s_min, s_max), ascending by value.
pub fn enumerate_indices(max_denominator: u64, s_min: f64, s_max: f64) -> Vec<RationalIndex> {
    let mut out = Vec::new();
    for m in 2..=max_denominator {
        for ell in 1..m {
            if gcd(ell, m) != 1 {
                continue;
            }
            let v = ell as f64 / m as f64;
            if v > s_min && v < s_max {
                out.push(RationalIndex { ell, m });
            }
        }
    }
    out.sort_by(|a, b| a.value().total_cmp(&b.value()));
    out
}

/// Inclusive momentum grid with `n_sub` subintervals and the winding at each
/// node.
fn momentum_scan(
    e: &Exponent,
    mu_lo: f64,
    mu_hi: f64,
    n_sub: usize,
    quad_tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut scan = Vec::with_capacity(n_sub + 1);
    for i in 0..=n_sub {
        let mu = mu_lo + (mu_hi - mu_lo) * i as f64 / n_sub as f64;
        scan.push((mu, s_of_mu(e, mu, quad_tol)?));
    }
    Ok(scan)
}

/// Polishes one sign-change bracket of S(mu) - target down to rounding.
fn refine_bracket(e: &Exponent, target: f64, lo: f64, hi: f64, quad_tol: f64) -> Result<f64> {
    let mut inner: Option<Error> = None;
    let cfg = RootCfg {
        xtol_abs: 1e-15,
        ..Default::default()
    };
    let root = bracketed_root(
        |mu| match s_of_mu(e, mu, quad_tol) {
            Ok(s) => s - target,
            Err(err) => {
                inner = Some(err);
                f64::NAN
            }
        },
        lo,
        hi,
        &cfg,
        "momentum solving the winding equation",
    );
    if let Some(err) = inner {
        return Err(err);
    }
    root
}

fn roots_from_scan(
    e: &Exponent,
    scan: &[(f64, f64)],
    target: f64,
    quad_tol: f64,
    root_tol: f64,
) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    for pair in scan.windows(2) {
        let (mu_a, s_a) = pair[0];
        let (mu_b, s_b) = pair[1];
        let g_a = s_a - target;
        let g_b = s_b - target;
        if g_a == 0.0 {
            roots.push(mu_a);
        } else if g_a * g_b < 0.0 {
            roots.push(refine_bracket(e, target, mu_a, mu_b, quad_tol)?);
        }
    }
    if let Some(&(mu_end, s_end)) = scan.last() {
        if s_end == target {
            roots.push(mu_end);
        }
    }
    for &mu in &roots {
        let resid = (s_of_mu(e, mu, quad_tol)? - target).abs();
        if resid > root_tol {
            return Err(Error::Inconsistency(format!(
                "winding residual {resid:e} at mu = {mu} exceeds {root_tol:e}"
            )));
        }
    }
    Ok(roots)
}

/// All momentum levels inside [mu_lo, mu_hi] where the winding equals
/// `index`, found by a 512-subinterval scan plus bracketed refinement.
///
/// Each returned root satisfies |S(mu) - ell/m| <= root_tol.
pub fn solve_momentum(
    e: &Exponent,
    index: RationalIndex,
    mu_lo: f64,
    mu_hi: f64,
    quad_tol: f64,
    root_tol: f64,
) -> Result<Vec<f64>> {
    check_window(mu_lo, mu_hi)?;
    let scan = momentum_scan(e, mu_lo, mu_hi, 512, quad_tol)?;
    roots_from_scan(e, &scan, index.value(), quad_tol, root_tol)
}

/// Builds the eigenvalue record for a rational index at a solved momentum,
/// cross-checking the generator through its two equivalent constructions.
///
/// pi_star = m pi T(mu) must agree with ell pi U(mu); at a true root of the
/// winding equation these are identical, so a discrepancy beyond 1e-6
/// (relative) means `mu` does not actually solve S(mu) = ell/m.
pub fn make_record(
    e: &Exponent,
    index: RationalIndex,
    mu: f64,
    quad_tol: f64,
) -> Result<EigenvalueRecord> {
    let triple = period_triple(e, mu, quad_tol)?;
    let pi_star = index.m as f64 * PI * triple.t_val;
    let alt = index.ell as f64 * PI * triple.u_val;
    let disc = (pi_star - alt).abs();
    if disc > 1e-6 * pi_star {
        return Err(Error::Inconsistency(format!(
            "generator mismatch for index {index} at mu = {mu}: \
             m pi T = {pi_star} vs ell pi U = {alt}"
        )));
    }
    Ok(EigenvalueRecord {
        index: RecordIndex::Rational(index),
        mu,
        pi_star,
        p: e.p(),
    })
}

/// The two degenerate ladder generators: the scalar-oscillation family at
/// mu = 0 (generator pi_p) and the circular orbit at mu = 1 (generator pi).
pub fn base_records(e: &Exponent) -> (EigenvalueRecord, EigenvalueRecord) {
    (
        EigenvalueRecord {
            index: RecordIndex::ZeroMomentum,
            mu: 0.0,
            pi_star: e.pi_p(),
            p: e.p(),
        },
        EigenvalueRecord {
            index: RecordIndex::UnitMomentum,
            mu: 1.0,
            pi_star: PI,
            p: e.p(),
        },
    )
}

/// Scans every ordered pair of generators for a near-integer ratio.
pub fn independence_check(generators: &[(String, f64)], tol: f64) -> IndependenceReport {
    let mut violations = Vec::new();
    for (i, &(_, a)) in generators.iter().enumerate() {
        for (j, &(_, b)) in generators.iter().enumerate() {
            if i == j {
                continue;
            }
            let ratio = a / b;
            let nearest = ratio.round();
            if nearest >= 1.0 && (ratio - nearest).abs() < tol {
                violations.push((i, j, ratio, nearest as u64));
            }
        }
    }
    IndependenceReport {
        generators: generators.to_vec(),
        violations,
        tol,
    }
}

/// Runs the full pipeline: winding range, index enumeration, momentum
/// solving, record construction, and the independence scan.
pub fn build_spectrum(e: &Exponent, params: &SpectrumParams) -> Result<SpectrumResult> {
    check_window(params.mu_lo, params.mu_hi)?;
    let scan = momentum_scan(e, params.mu_lo, params.mu_hi, 512, params.quad_tol)?;
    let mut s_min = f64::INFINITY;
    let mut s_max = f64::NEG_INFINITY;
    for &(_, s) in &scan {
        s_min = s_min.min(s);
        s_max = s_max.max(s);
    }

    let (zero, unit) = base_records(e);
    let mut records = vec![zero, unit];

    // At p = 2 the winding is identically 1/2 and the rational equation
    // degenerates: every momentum solves it up to rounding, and the whole
    // spectrum collapses onto the single classical generator pi.
    let flat = (e.p() - 2.0).abs() < 1e-12;
    if !flat {
        let mut rational = Vec::new();
        for index in enumerate_indices(params.max_denominator, s_min, s_max) {
            for mu in roots_from_scan(e, &scan, index.value(), params.quad_tol, params.root_tol)? {
                rational.push(make_record(e, index, mu, params.quad_tol)?);
            }
        }
        rational.sort_by_key(|rec| match rec.index {
            RecordIndex::Rational(ix) => (ix.m, ix.ell),
            _ => (0, 0),
        });
        records.extend(rational);
    }

    let mut generators: Vec<(String, f64)> = Vec::new();
    for rec in &records {
        let dup = generators
            .iter()
            .any(|(_, g)| (g - rec.pi_star).abs() <= 1e-12 * rec.pi_star);
        if !dup {
            generators.push((rec.index.label(), rec.pi_star));
        }
    }
    let independence = independence_check(&generators, params.independence_tol);

    Ok(SpectrumResult {
        p: e.p(),
        s_min,
        s_max,
        records,
        independence,
    })
}
