//! Gauss–Legendre quadrature nodes on [-1, 1].
//!
//! Nodes are the roots of the Legendre polynomial P_n, found by Newton
//! iteration from the Tricomi cosine initial guess; weights follow from the
//! derivative. Rules for the doubling ladder used by the period integrals are
//! computed once per process and cached.

use std::sync::OnceLock;

/// Node counts tried in order by the adaptive period-integral quadrature.
pub const LADDER: [usize; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

static CACHE: [OnceLock<Vec<(f64, f64)>>; 7] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Returns the cached `(node, weight)` pairs for one of the ladder sizes.
///
/// Panics if `n` is not a ladder entry; the ladder is the only consumer.
pub fn ladder_rule(n: usize) -> &'static [(f64, f64)] {
    let idx = LADDER
        .iter()
        .position(|&m| m == n)
        .unwrap_or_else(|| panic!("{n} is not a Gauss-Legendre ladder size"));
    CACHE[idx].get_or_init(|| compute_rule(n))
}

/// Evaluates (P_n(x), P_{n-1}(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    (p, p_prev)
}

/// Computes the n-point rule. O(n^2); amortized by the cache.
fn compute_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = vec![(0.0f64, 0.0f64); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess for the i-th root in descending order.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
                // One final polish keeps the residual at rounding level.
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                x -= p / dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (x, w);
        rule[n - 1 - i] = (-x, w);
    }
    if n % 2 == 1 {
        // Central node of odd rules sits exactly at zero.
        let (_, p_prev) = legendre_pair(n, 0.0);
        let dp = nf * (-p_prev) / (-1.0);
        rule[n / 2] = (0.0, 2.0 / (dp * dp));
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent 5-point reference values (Abramowitz & Stegun table 25.4).
    const FIVE_POINT: [(f64, f64); 5] = [
        (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    ];

    #[test]
    fn five_point_rule_matches_reference() {
        let rule = compute_rule(5);
        for (computed, reference) in rule.iter().zip(FIVE_POINT.iter()) {
            assert!(
                (computed.0 - reference.0).abs() < 1e-15,
                "node: expected {}, got {}",
                reference.0,
                computed.0
            );
            assert!(
                (computed.1 - reference.1).abs() < 1e-15,
                "weight: expected {}, got {}",
                reference.1,
                computed.1
            );
        }
    }

    #[test]
    fn ladder_rules_integrate_polynomials_exactly() {
        for &n in &LADDER[..3] {
            let rule = ladder_rule(n);
            // Exactness degree is 2n-1; x^8 is far inside for every ladder size.
            let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(8)).sum();
            assert!(
                (integral - 2.0 / 9.0).abs() < 1e-14,
                "n={n}: integral of x^8 expected 2/9, got {integral}"
            );
            let weight_sum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!(
                (weight_sum - 2.0).abs() < 1e-13,
                "n={n}: weights must sum to 2, got {weight_sum}"
            );
        }
    }

    #[test]
    fn large_rule_handles_analytic_integrand() {
        let rule = ladder_rule(256);
        let integral: f64 = rule.iter().map(|&(x, w)| w * (3.0 * x).cos()).sum();
        let exact = 2.0 * (3.0f64).sin() / 3.0;
        assert!(
            (integral - exact).abs() < 1e-14,
            "cos(3x) on [-1,1]: expected {exact}, got {integral}"
        );
    }
}
