//! Exponent data and special functions of the reduced phase plane.
//!
//! For an exponent p > 1 with conjugate q = p/(p-1), planar trajectories are
//! described on the strip (r, theta) in (0,1) x (0,pi) through three scalar
//! functions of the energy fraction r:
//!
//! * `q_func`, the level function Q(r) = (pr)^(1/p) (q(1-r))^(1/q), conserved
//!   along reduced orbits and maximal at r = 1/p with Q(1/p) = 1;
//! * `f_func`, F(r) = (pr)^(1/q) (q(1-r))^(1/p), the radial advection factor;
//! * `g_func`, the angular advection factor, vanishing exactly at r = 1/p.
//!
//! `level_roots` inverts Q on both sides of its maximum, and `cos_p` is the
//! generalized cosine: the scalar oscillation that every zero-momentum
//! trajectory reduces to, with half-period `pi_p`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::num::ode::{integrate_to, OdeOptions};

/// Precomputed data for one exponent p > 1 and its conjugate q = p/(p-1).
#[derive(Debug, Clone, Copy)]
pub struct Exponent {
    p: f64,
    q: f64,
    pi_p: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    c7: f64,
}

impl Exponent {
    /// The exponent itself.
    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The conjugate exponent q = p/(p-1).
    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Half-period of the generalized cosine; `cos_p` has period `2 * pi_p`.
    #[inline]
    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    /// Common value sqrt(p-1)/p of both period functions at full momentum.
    #[inline]
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Shared linear coefficient of both period functions near mu = 1.
    #[inline]
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Quadratic coefficient of the return-period expansion near mu = 1.
    #[inline]
    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Quadratic coefficient of the winding expansion near mu = 1.
    #[inline]
    pub fn c4(&self) -> f64 {
        self.c4
    }

    /// Linear coefficient of the period-ratio expansion near mu = 1.
    #[inline]
    pub fn c7(&self) -> f64 {
        self.c7
    }

    /// Exponent data with the roles of p and q swapped.
    pub fn conjugate(&self) -> Exponent {
        make_exponent(self.q).expect("conjugate of a valid exponent is valid")
    }
}

/// Test-only constructor for an exponent with deliberately corrupted
/// expansion coefficients, used to prove the verification battery notices
/// wrong reference constants.
#[cfg(test)]
pub(crate) fn doctored_exponent(p: f64, negate_c2: bool, negate_c4: bool) -> Exponent {
    let mut e = make_exponent(p).expect("doctored exponent starts from a valid one");
    if negate_c2 {
        e.c2 = -e.c2;
    }
    if negate_c4 {
        e.c4 = -e.c4;
    }
    e
}

/// Validates p and precomputes the conjugate exponent, the generalized
/// half-period, and the coefficients of the near-circular expansions.
pub fn make_exponent(p: f64) -> Result<Exponent> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "(1, inf)",
        });
    }
    let q = p / (p - 1.0);
    let sp = (p - 1.0).sqrt();
    let d = p - 2.0;
    Ok(Exponent {
        p,
        q,
        pi_p: 2.0 * PI * (p - 1.0).powf(1.0 / p) / (p * (PI / p).sin()),
        c1: sp / p,
        c2: d * d / (12.0 * p * sp),
        c3: d.powi(4) / (576.0 * p * sp.powi(3)),
        c4: d * d * (p * p + 20.0 * p - 20.0) / (576.0 * p * sp.powi(3)),
        c7: d * d / (12.0 * (p - 1.0)),
    })
}

/// A point on the unit energy shell, split into the fraction r carried by the
/// position term and the fraction s carried by the velocity term.
///
/// Both components are stored as computed, so whichever of the two is small
/// keeps full relative precision instead of being reconstructed as 1 minus
/// the other.
#[derive(Debug, Clone, Copy)]
pub struct EnergySplit {
    pub r: f64,
    pub s: f64,
}

fn check_unit_interior(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value: x,
            domain: "(0, 1)",
        })
    }
}

/// Level function Q(r) = (pr)^(1/p) (q(1-r))^(1/q) on (0, 1).
pub fn q_func(e: &Exponent, r: f64) -> Result<f64> {
    check_unit_interior("r", r)?;
    let (p, q) = (e.p, e.q);
    Ok(((p * r).ln() / p + (q * (1.0 - r)).ln() / q).exp())
}

/// Level function evaluated on an energy split, using both stored fractions.
///
/// Near the ends of the unit interval one of r and s drops below the spacing
/// of floating-point numbers around 1, and `q_func` on the large fraction
/// alone cannot see the small one. A split carries both, so the level keeps
/// full relative precision there.
pub fn q_of_split(e: &Exponent, split: &EnergySplit) -> f64 {
    let (p, q) = (e.p, e.q);
    ((p * split.r).ln() / p + (q * split.s).ln() / q).exp()
}

/// Radial advection factor F(r) = (pr)^(1/q) (q(1-r))^(1/p) on (0, 1).
pub fn f_func(e: &Exponent, r: f64) -> Result<f64> {
    check_unit_interior("r", r)?;
    let (p, q) = (e.p, e.q);
    Ok(((p * r).ln() / q + (q * (1.0 - r)).ln() / p).exp())
}

/// Angular advection factor G(r) on (0, 1).
///
/// Evaluated in the factored form p^(1/q) q^(1/p) (r - 1/p) / (r^(1/p)
/// (1-r)^(1/q)), which is exact at the zero r = 1/p and free of the
/// cancellation the difference-of-powers form suffers near it.
pub fn g_func(e: &Exponent, r: f64) -> Result<f64> {
    check_unit_interior("r", r)?;
    let (p, q) = (e.p, e.q);
    let scale = (p.ln() / q + q.ln() / p).exp();
    Ok(scale * (r - 1.0 / p) / ((r.ln() / p + (1.0 - r).ln() / q).exp()))
}

/// Finds the left energy split with Q(r) = mu, working on u = ln r where the
/// level function is strictly increasing up to its maximum.
fn left_split(e: &Exponent, mu: f64) -> Result<EnergySplit> {
    let (p, q) = (e.p, e.q);
    let ln_mu = mu.ln();
    let ln_p = p.ln();
    let h = |u: f64| {
        let r = u.exp();
        (ln_p + u) / p + (q * (1.0 - r)).ln() / q - ln_mu
    };
    // Below exp(-745) the fraction r underflows; such levels are out of reach.
    let lo = -745.0;
    let hi = -ln_p;
    if h(lo) >= 0.0 {
        return Err(Error::BracketFailure {
            what: "left level root",
            lo: lo.exp(),
            hi: hi.exp(),
        });
    }
    let u =
        crate::num::rootfind::bracketed_root(h, lo, hi, &Default::default(), "left level root")?;
    let r = u.exp();
    Ok(EnergySplit { r, s: 1.0 - r })
}

/// Both energy splits on the level Q = mu, for mu in (0, 1].
///
/// The left split is found in log space, so a fraction r as small as 1e-300
/// still carries full relative precision. The right split reuses the same
/// machinery through the reflection Q_p(r) = Q_q(1-r): its small component s
/// is the left root of the conjugate exponent, computed primitively.
pub fn level_splits(e: &Exponent, mu: f64) -> Result<(EnergySplit, EnergySplit)> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "mu",
            value: mu,
            domain: "(0, 1]",
        });
    }
    let top = 1.0 / e.p;
    if mu == 1.0 {
        let at_top = EnergySplit {
            r: top,
            s: 1.0 - top,
        };
        return Ok((at_top, at_top));
    }
    let left = left_split(e, mu)?;
    let conj_left = left_split(&e.conjugate(), mu)?;
    let right = EnergySplit {
        r: 1.0 - conj_left.r,
        s: conj_left.r,
    };
    debug_assert!(left.r <= top && right.r >= top);
    Ok((left, right))
}

/// The two solutions of Q(r) = mu as plain fractions (r_minus, r_plus),
/// with r_minus <= 1/p <= r_plus.
pub fn level_roots(e: &Exponent, mu: f64) -> Result<(f64, f64)> {
    let (left, right) = level_splits(e, mu)?;
    Ok((left.r, right.r))
}

/// Scalar power nonlinearity sign(v) |v|^(alpha - 1), with value 0 at 0.
fn scalar_phi(v: f64, alpha: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(alpha - 1.0)
    }
}

/// Generalized cosine and its derivative at time `t`.
///
/// The scalar oscillator x' = phi_q(y), y' = -phi_p(x) started from the rest
/// state (p^(1/p), 0) on the unit energy shell defines cos_p. It is even,
/// changes sign under a half-period shift, and satisfies
/// |x|^p / p + |x'|^p / q = 1 for all time. The evaluation folds `t` into the
/// first quarter period and integrates the oscillator over that short arc.
pub fn cos_p(e: &Exponent, t: f64) -> Result<(f64, f64)> {
    if !t.is_finite() {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "finite reals",
        });
    }
    let tp = e.pi_p;
    let mut u = t.rem_euclid(2.0 * tp);
    if !(0.0..2.0 * tp).contains(&u) {
        u = 0.0;
    }
    let mut sign_v = 1.0;
    let mut sign_d = 1.0;
    if u > tp {
        // Even reflection: x(u) = x(2 tp - u), so the derivative flips.
        u = 2.0 * tp - u;
        sign_d = -sign_d;
    }
    if u > 0.5 * tp {
        // Antipodal reflection: x(u) = -x(tp - u), derivative unchanged.
        u = tp - u;
        sign_v = -sign_v;
    }
    let x0 = e.p.powf(1.0 / e.p);
    if u <= 0.0 {
        return Ok((sign_v * x0, 0.0));
    }
    let (p, q) = (e.p, e.q);
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = scalar_phi(y[1], q);
        dy[1] = -scalar_phi(y[0], p);
    };
    let end = integrate_to(rhs, 0.0, &[x0, 0.0], u, OdeOptions::with_tol(1e-13))?;
    Ok((sign_v * end[0], sign_d * scalar_phi(end[1], q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(p: f64) -> Exponent {
        make_exponent(p).unwrap()
    }

    #[test]
    fn rejects_bad_exponents() {
        for p in [1.0, 0.5, -3.0, f64::NAN, f64::INFINITY] {
            assert!(make_exponent(p).is_err(), "p = {p} must be rejected");
        }
    }

    #[test]
    fn half_period_reference_values() {
        assert!((e(2.0).pi_p() - PI).abs() < 1e-15);
        for (p, expect) in [
            (1.25, 2.821_000_590_042_074_6),
            (1.5, 3.046_991_999_046_172_3),
            (3.0, 3.046_991_999_046_172_3),
            (5.0, 2.821_000_590_042_074_6),
        ] {
            let got = e(p).pi_p();
            assert!(
                (got - expect).abs() < 5e-15,
                "pi_p at p = {p}: expected {expect}, got {got}"
            );
        }
    }

    #[test]
    fn expansion_coefficients_reference_values() {
        let e3 = e(3.0);
        let e5 = e(5.0);
        let cases = [
            (e3.c1(), 0.471_404_520_791_031_7),
            (e3.c2(), 0.019_641_855_032_959_655),
            (e3.c3(), 2.046_026_565_933_297_2e-4),
            (e3.c4(), 0.010_025_530_173_073_156),
            (e3.c7(), 1.0 / 24.0),
            (e5.c1(), 0.4),
            (e5.c2(), 0.075),
            (e5.c3(), 3.515_625e-3),
            (e5.c4(), 0.041_015_625),
            (e5.c7(), 0.1875),
        ];
        for (i, (got, expect)) in cases.iter().enumerate() {
            assert!(
                (got - expect).abs() <= 1e-15 * expect.abs().max(1.0),
                "coefficient case {i}: expected {expect}, got {got}"
            );
        }
        let e2 = e(2.0);
        assert_eq!(e2.c1(), 0.5);
        assert_eq!(e2.c2(), 0.0);
        assert_eq!(e2.c3(), 0.0);
        assert_eq!(e2.c4(), 0.0);
        assert_eq!(e2.c7(), 0.0);
    }

    #[test]
    fn conjugate_pairs_share_invariants() {
        for p in [1.25, 1.5, 3.0, 4.0, 5.0] {
            let ep = e(p);
            let eq = ep.conjugate();
            assert!((eq.p() - ep.q()).abs() < 1e-15);
            assert!((eq.q() - ep.p()).abs() < 2e-15 * ep.p());
            for (a, b, name) in [
                (ep.pi_p(), eq.pi_p(), "pi_p"),
                (ep.c1(), eq.c1(), "c1"),
                (ep.c2(), eq.c2(), "c2"),
                (ep.c3(), eq.c3(), "c3"),
                (ep.c4(), eq.c4(), "c4"),
                (ep.c7(), eq.c7(), "c7"),
            ] {
                assert!(
                    (a - b).abs() <= 1e-13 * a.abs().max(1e-3),
                    "{name} must be conjugate-symmetric at p = {p}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn level_function_shape() {
        for p in [1.25, 1.5, 2.0, 3.0, 5.0] {
            let ex = e(p);
            let top = 1.0 / p;
            let peak = q_func(&ex, top).unwrap();
            assert!((peak - 1.0).abs() < 1e-14, "Q(1/p) at p = {p}: got {peak}");
            assert!(q_func(&ex, top * 0.7).unwrap() < peak);
            assert!(q_func(&ex, top + 0.7 * (1.0 - top)).unwrap() < peak);
        }
        let ex = e(3.0);
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(q_func(&ex, bad).is_err(), "r = {bad} must be rejected");
            assert!(f_func(&ex, bad).is_err());
            assert!(g_func(&ex, bad).is_err());
        }
    }

    #[test]
    fn conjugate_reflection_of_level_and_advection() {
        for p in [1.5, 3.0, 4.0] {
            let ep = e(p);
            let eq = ep.conjugate();
            for i in 1..20 {
                let r = i as f64 / 20.0;
                let ql = q_func(&ep, r).unwrap();
                let qr = q_func(&eq, 1.0 - r).unwrap();
                assert!(
                    (ql - qr).abs() < 1e-14,
                    "Q reflection at p = {p}, r = {r}: {ql} vs {qr}"
                );
                let fl = f_func(&ep, r).unwrap();
                let fr = f_func(&eq, 1.0 - r).unwrap();
                assert!(
                    (fl - fr).abs() < 1e-14 * fl.max(1.0),
                    "F reflection at p = {p}, r = {r}: {fl} vs {fr}"
                );
            }
        }
    }

    #[test]
    fn angular_factor_matches_derivative_identity() {
        // Differentiating Q along the reduced flow gives Q'(r) F(r) = -Q(r) G(r).
        for p in [1.5, 2.0, 3.0, 5.0] {
            let ex = e(p);
            for i in 1..=17 {
                let r = 0.04 + 0.055 * i as f64;
                let h = 1e-6;
                let dq = (q_func(&ex, r + h).unwrap() - q_func(&ex, r - h).unwrap()) / (2.0 * h);
                let lhs = dq * f_func(&ex, r).unwrap();
                let rhs = -q_func(&ex, r).unwrap() * g_func(&ex, r).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-8,
                    "Q'F + QG at p = {p}, r = {r}: {lhs} vs {rhs}"
                );
            }
        }
        let ex = e(3.0);
        assert_eq!(g_func(&ex, 1.0 / 3.0).unwrap(), 0.0);
        assert!(g_func(&ex, 0.2).unwrap() < 0.0);
        assert!(g_func(&ex, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn level_roots_bracket_and_invert() {
        for p in [1.5, 2.0, 3.0, 5.0] {
            let ex = e(p);
            for mu in [1e-4, 0.05, 0.2, 0.5, 0.8, 0.95, 1.0 - 1e-6] {
                let (left, right) = level_splits(&ex, mu).unwrap();
                assert!(
                    left.r <= 1.0 / p && 1.0 / p <= right.r,
                    "roots must bracket 1/p at p = {p}, mu = {mu}: got ({}, {})",
                    left.r,
                    right.r
                );
                let res_m = (q_of_split(&ex, &left) - mu).abs();
                let res_p = (q_of_split(&ex, &right) - mu).abs();
                assert!(
                    res_m <= 1e-12 && res_p <= 1e-12,
                    "residuals at p = {p}, mu = {mu}: {res_m:e}, {res_p:e}"
                );
            }
            // Away from the ends of (0, 1) the bare roots invert the level too.
            for mu in [0.2, 0.5, 0.8] {
                let (rm, rp) = level_roots(&ex, mu).unwrap();
                assert!((q_func(&ex, rm).unwrap() - mu).abs() <= 1e-12);
                assert!((q_func(&ex, rp).unwrap() - mu).abs() <= 1e-12);
            }
            let (rm, rp) = level_roots(&ex, 1.0).unwrap();
            assert_eq!(rm, 1.0 / p);
            assert_eq!(rp, 1.0 / p);
        }
        let ex = e(3.0);
        for bad in [0.0, -1.0, 1.0 + 1e-9, f64::NAN] {
            assert!(
                level_roots(&ex, bad).is_err(),
                "mu = {bad} must be rejected"
            );
        }
    }

    #[test]
    fn level_roots_reference_values() {
        let cases = [
            (
                1.5,
                0.2,
                0.035_046_110_551_819_817,
                0.998_811_993_773_931_49,
            ),
            (1.5, 0.5, 0.147_375_100_556_158_47, 0.980_747_283_656_555_39),
            (1.5, 0.8, 0.338_667_121_894_326_01, 0.907_998_229_584_090_61),
            (
                3.0,
                0.2,
                0.001_188_006_226_068_506_7,
                0.964_953_889_448_180_18,
            ),
            (
                3.0,
                0.5,
                0.019_252_716_343_444_614,
                0.852_624_899_443_841_53,
            ),
            (
                3.0,
                0.8,
                0.092_001_770_415_909_388,
                0.661_332_878_105_673_99,
            ),
            (
                5.0,
                0.2,
                2.621_714_924_754_015_9e-5,
                0.927_078_455_537_729_83,
            ),
            (
                5.0,
                0.5,
                0.002_586_659_568_800_353_8,
                0.759_010_545_362_961_66,
            ),
            (
                5.0,
                0.8,
                0.030_367_674_560_328_973,
                0.524_325_706_274_458_41,
            ),
        ];
        for (p, mu, rm_ref, rp_ref) in cases {
            let (rm, rp) = level_roots(&e(p), mu).unwrap();
            assert!(
                (rm - rm_ref).abs() <= 1e-12 * rm_ref,
                "r_minus at p = {p}, mu = {mu}: expected {rm_ref}, got {rm}"
            );
            assert!(
                (rp - rp_ref).abs() <= 1e-12 * rp_ref,
                "r_plus at p = {p}, mu = {mu}: expected {rp_ref}, got {rp}"
            );
        }
    }

    #[test]
    fn level_roots_conjugate_identity() {
        // The left root of p mirrors the right root of q across r = 1/2.
        for p in [1.5, 3.0, 5.0] {
            let ep = e(p);
            let eq = ep.conjugate();
            for mu in [0.1, 0.4, 0.9] {
                let (rm_p, _) = level_roots(&ep, mu).unwrap();
                let (_, rp_q) = level_roots(&eq, mu).unwrap();
                assert!(
                    (rm_p - (1.0 - rp_q)).abs() < 1e-13,
                    "reflection at p = {p}, mu = {mu}: {rm_p} vs {}",
                    1.0 - rp_q
                );
            }
        }
    }

    #[test]
    fn generalized_cosine_matches_circular_case() {
        let e2 = e(2.0);
        let amp = 2.0f64.sqrt();
        for t in [0.0, 0.3, 1.1, 2.0, PI, 4.4, 6.0, -1.7, 12.9] {
            let (x, dx) = cos_p(&e2, t).unwrap();
            assert!(
                (x - amp * t.cos()).abs() < 1e-10,
                "value at t = {t}: expected {}, got {x}",
                amp * t.cos()
            );
            assert!(
                (dx + amp * t.sin()).abs() < 1e-10,
                "derivative at t = {t}: expected {}, got {dx}",
                -amp * t.sin()
            );
        }
    }

    #[test]
    fn generalized_cosine_energy_and_symmetry() {
        for p in [1.5, 3.0] {
            let ex = e(p);
            let tp = ex.pi_p();
            for i in 0..12 {
                let t = -1.3 + 0.47 * i as f64;
                let (x, dx) = cos_p(&ex, t).unwrap();
                let energy = x.abs().powf(p) / p + dx.abs().powf(p) / ex.q();
                assert!(
                    (energy - 1.0).abs() < 5e-10,
                    "energy at p = {p}, t = {t}: got {energy}"
                );
                let (x_shift, _) = cos_p(&ex, t + tp).unwrap();
                assert!(
                    (x_shift + x).abs() < 1e-10,
                    "half-period shift at p = {p}, t = {t}: {x_shift} vs {}",
                    -x
                );
                let (x_neg, dx_neg) = cos_p(&ex, -t).unwrap();
                assert!((x_neg - x).abs() < 1e-10, "evenness at p = {p}, t = {t}");
                assert!(
                    (dx_neg + dx).abs() < 1e-10,
                    "odd derivative at p = {p}, t = {t}"
                );
            }
            let (quarter, _) = cos_p(&ex, 0.5 * tp).unwrap();
            assert!(
                quarter.abs() < 1e-9,
                "quarter-period zero at p = {p}: got {quarter}"
            );
        }
    }

    proptest! {
        #[test]
        fn prop_roots_always_bracket(p in 1.05f64..8.0, mu in 1e-3f64..1.0) {
            let ex = make_exponent(p).unwrap();
            let (left, right) = level_splits(&ex, mu).unwrap();
            prop_assert!(left.r <= 1.0 / p && 1.0 / p <= right.r && right.r <= 1.0);
            prop_assert!((q_of_split(&ex, &left) - mu).abs() <= 1e-10);
            prop_assert!((q_of_split(&ex, &right) - mu).abs() <= 1e-10);
        }

        #[test]
        fn prop_level_bounded_and_advection_positive(p in 1.05f64..8.0, r in 1e-6f64..0.999999) {
            let ex = make_exponent(p).unwrap();
            let qv = q_func(&ex, r).unwrap();
            prop_assert!(qv > 0.0 && qv <= 1.0 + 1e-14);
            prop_assert!(f_func(&ex, r).unwrap() > 0.0);
        }

        #[test]
        fn prop_angular_sign_change(p in 1.05f64..8.0, r in 1e-6f64..0.999999) {
            let ex = make_exponent(p).unwrap();
            let g = g_func(&ex, r).unwrap();
            let side = r - 1.0 / p;
            prop_assert!(
                g == 0.0 && side == 0.0 || g.signum() == side.signum(),
                "G sign at p = {}, r = {}: g = {}", p, r, g
            );
        }
    }
}
