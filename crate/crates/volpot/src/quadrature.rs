//! Double-exponential quadrature on `(0, infinity)` and the lattice
//! coefficient integrals built on it.
//!
//! The substitution `t = Phi(u)` with
//!
//! ```text
//! Phi(u) = exp(alpha beta (u - e^{-u}) + alpha exp(beta (u - e^{-u})))
//! ```
//!
//! maps the real line onto `(0, infinity)` with doubly-exponential decay of
//! the transformed integrand toward both ends, so the plain trapezoidal rule
//! with step `tau` converges at rate `exp(-C/tau)`. A rule is the node set
//! `t_s = Phi(tau s)`, `w_s = tau Phi'(tau s)` for integer `s` in
//! `[s_min, s_max]`, with the window checked at construction: the lower
//! endpoint must reach `Phi <= 1e-10`, and the upper endpoint must reach
//! either `Phi >= 1e10` or — when the integrand carries a damping envelope
//! `e^{-c t}` — `c Phi >= 745`, at which point the envelope alone has
//! extinguished the tail below the double-precision floor. Trailing nodes
//! whose weighted contribution cannot exceed `exp(-760)` are trimmed.

use alloc::vec::Vec;

use crate::cubature::RunParams;
use crate::geometry::LocalFrame;
use crate::kernels::{freespace_integrand, halfspace_integrand, ScaledPoint};

/// Largest argument for which `exp` stays finite in double precision.
const EXP_OVERFLOW: f64 = 709.0;
/// Log-scale floor below which a weighted node contribution is dropped.
const CONTRIBUTION_FLOOR: f64 = -760.0;

/// Errors reported by the quadrature layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureError {
    /// A transform or rule parameter is out of range.
    InvalidParams(&'static str),
    /// `Phi(u)` or `Phi'(u)` overflows double precision at this `u`.
    Saturated {
        /// Offending transform argument.
        u: f64,
    },
    /// `Phi(tau s_min)` exceeds `1e-10`: the window misses the origin.
    LowerEndpointTooHigh {
        /// Value of `Phi` at the lower endpoint.
        phi: f64,
    },
    /// Neither `Phi(tau s_max) >= 1e10` nor `damping * Phi >= 745`: the
    /// window truncates the tail.
    UpperEndpointTooLow {
        /// Value of `Phi` at the upper endpoint.
        phi: f64,
    },
    /// The integrand returned a non-finite value at a quadrature node.
    NonFiniteIntegrand {
        /// Lattice index `s` of the node.
        s: i64,
        /// Node abscissa `t = Phi(tau s)`.
        t: f64,
    },
}

impl core::fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadratureError::InvalidParams(what) => write!(f, "invalid parameter: {what}"),
            QuadratureError::Saturated { u } => {
                write!(f, "double-exponential transform overflows at u = {u}")
            }
            QuadratureError::LowerEndpointTooHigh { phi } => {
                write!(f, "lower endpoint Phi = {phi:e} exceeds 1e-10")
            }
            QuadratureError::UpperEndpointTooLow { phi } => {
                write!(
                    f,
                    "upper endpoint Phi = {phi:e} reaches neither 1e10 nor the damping cutoff"
                )
            }
            QuadratureError::NonFiniteIntegrand { s, t } => {
                write!(f, "integrand is not finite at node s = {s}, t = {t:e}")
            }
        }
    }
}

impl core::error::Error for QuadratureError {}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x + libm::exp(-x)
    } else if x < -36.0 {
        libm::exp(x)
    } else {
        libm::log1p(libm::exp(x))
    }
}

/// `ln Phi(u)` and `ln Phi'(u)`, exact in log scale (no intermediate
/// overflow; the results themselves may be infinite for extreme `u`).
fn de_log(u: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let v = u - libm::exp(-u);
    let bv = beta * v;
    let ln_phi = alpha * beta * v
        + alpha
            * if bv > EXP_OVERFLOW {
                f64::INFINITY
            } else {
                libm::exp(bv)
            };
    // Phi' = Phi alpha beta (1 + e^{-u}) (1 + e^{beta v})
    let ln_dphi = ln_phi + libm::log(alpha * beta) + softplus(-u) + softplus(bv);
    (ln_phi, ln_dphi)
}

/// The double-exponential transform `(Phi(u), Phi'(u))`.
///
/// # Errors
///
/// Rejects non-finite `u` and non-positive `alpha`, `beta`; reports
/// saturation when either value overflows double precision.
pub fn de_transform(u: f64, alpha: f64, beta: f64) -> Result<(f64, f64), QuadratureError> {
    if !(alpha > 0.0) || !alpha.is_finite() || !(beta > 0.0) || !beta.is_finite() {
        return Err(QuadratureError::InvalidParams(
            "alpha and beta must be positive",
        ));
    }
    if !u.is_finite() {
        return Err(QuadratureError::InvalidParams("u must be finite"));
    }
    let (ln_phi, ln_dphi) = de_log(u, alpha, beta);
    if ln_phi > EXP_OVERFLOW || ln_dphi > EXP_OVERFLOW {
        return Err(QuadratureError::Saturated { u });
    }
    Ok((libm::exp(ln_phi), libm::exp(ln_dphi)))
}

/// Transform parameters and lattice window of a double-exponential rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleSettings {
    /// Transform parameter `alpha` (default 4).
    pub alpha: f64,
    /// Transform parameter `beta` (default 2).
    pub beta: f64,
    /// Trapezoidal step `tau`.
    pub tau: f64,
    /// Lower lattice index (negative).
    pub s_min: i64,
    /// Upper lattice index (positive).
    pub s_max: i64,
}

impl RuleSettings {
    /// The standard window: `tau = 0.01`, `s` in `[-80, 100]`. Resolves
    /// relative errors down to about `1e-9`.
    pub fn standard() -> Self {
        Self {
            alpha: 4.0,
            beta: 2.0,
            tau: 0.01,
            s_min: -80,
            s_max: 100,
        }
    }

    /// The fine window: `tau = 0.006`, `s` in `[-160, 200]`. Resolves
    /// relative errors down to the rounding floor.
    pub fn fine() -> Self {
        Self {
            alpha: 4.0,
            beta: 2.0,
            tau: 0.006,
            s_min: -160,
            s_max: 200,
        }
    }

    /// Builds the rule for an integrand damped by `e^{-damping * t}`.
    ///
    /// # Errors
    ///
    /// See [`QuadratureRule::new`].
    pub fn build(&self, damping: f64) -> Result<QuadratureRule, QuadratureError> {
        QuadratureRule::new(
            self.alpha, self.beta, self.tau, self.s_min, self.s_max, damping,
        )
    }
}

impl Default for RuleSettings {
    fn default() -> Self {
        Self::standard()
    }
}

/// One node of a double-exponential rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeNode {
    /// Lattice index.
    pub s: i64,
    /// Abscissa `t = Phi(tau s)`.
    pub t: f64,
    /// Weight `w = tau Phi'(tau s)`.
    pub w: f64,
}

/// A validated double-exponential trapezoidal rule on `(0, infinity)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    settings: RuleSettings,
    damping: f64,
    nodes: Vec<DeNode>,
    trimmed_lower: usize,
    trimmed_upper: usize,
}

impl QuadratureRule {
    /// Builds the rule `t_s = Phi(tau s)`, `w_s = tau Phi'(tau s)` for
    /// `s = s_min..=s_max` and validates the window for integrands damped
    /// by `e^{-damping * t}` (pass `damping = 0` for undamped integrands).
    ///
    /// Nodes are kept in ascending order of `s`. A node is dropped when its
    /// abscissa or weight is not a positive finite number, or when the bound
    /// `ln w - damping * t < -760` shows its weighted contribution is below
    /// the double-precision floor; dropped leading/trailing runs are counted
    /// in the diagnostics.
    ///
    /// # Errors
    ///
    /// Rejects invalid parameters, a lower endpoint with
    /// `Phi(tau s_min) > 1e-10`, and an upper endpoint reaching neither
    /// `Phi >= 1e10` nor `damping * Phi >= 745`.
    pub fn new(
        alpha: f64,
        beta: f64,
        tau: f64,
        s_min: i64,
        s_max: i64,
        damping: f64,
    ) -> Result<Self, QuadratureError> {
        if !(alpha > 0.0) || !alpha.is_finite() || !(beta > 0.0) || !beta.is_finite() {
            return Err(QuadratureError::InvalidParams(
                "alpha and beta must be positive",
            ));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(QuadratureError::InvalidParams("tau must be positive"));
        }
        if s_min >= 0 || s_max <= 0 {
            return Err(QuadratureError::InvalidParams(
                "window must satisfy s_min < 0 < s_max",
            ));
        }
        if !(damping >= 0.0) || !damping.is_finite() {
            return Err(QuadratureError::InvalidParams(
                "damping must be non-negative",
            ));
        }

        let (ln_phi_lo, _) = de_log(tau * s_min as f64, alpha, beta);
        let phi_lo = libm::exp(ln_phi_lo);
        if !(phi_lo <= 1e-10) {
            return Err(QuadratureError::LowerEndpointTooHigh { phi: phi_lo });
        }
        let (ln_phi_hi, _) = de_log(tau * s_max as f64, alpha, beta);
        let reaches_infinity = ln_phi_hi >= libm::log(1e10);
        let damped_out = damping > 0.0 && libm::log(damping) + ln_phi_hi >= libm::log(745.0);
        if !(reaches_infinity || damped_out) {
            return Err(QuadratureError::UpperEndpointTooLow {
                phi: libm::exp(ln_phi_hi),
            });
        }

        let ln_tau = libm::log(tau);
        let mut nodes = Vec::with_capacity((s_max - s_min + 1) as usize);
        let mut trimmed_lower = 0usize;
        let mut trimmed_upper = 0usize;
        for s in s_min..=s_max {
            let (ln_phi, ln_dphi) = de_log(tau * s as f64, alpha, beta);
            let t = libm::exp(ln_phi);
            let w = tau * libm::exp(ln_dphi);
            let usable = ln_phi <= EXP_OVERFLOW
                && ln_dphi <= EXP_OVERFLOW
                && t > 0.0
                && w > 0.0
                && ln_dphi + ln_tau - damping * t >= CONTRIBUTION_FLOOR;
            if usable {
                nodes.push(DeNode { s, t, w });
            } else if nodes.is_empty() {
                trimmed_lower += 1;
            } else {
                trimmed_upper += 1;
            }
        }
        if nodes.len() < 2 {
            return Err(QuadratureError::InvalidParams(
                "window leaves fewer than two usable nodes",
            ));
        }
        // The usability criterion is single-peaked over the window, so the
        // dropped nodes form leading/trailing runs; a hole would mean some
        // kept node follows a dropped one non-contiguously.
        debug_assert_eq!(nodes.last().unwrap().s - nodes[0].s + 1, nodes.len() as i64);
        Ok(Self {
            settings: RuleSettings {
                alpha,
                beta,
                tau,
                s_min,
                s_max,
            },
            damping,
            nodes,
            trimmed_lower,
            trimmed_upper,
        })
    }

    /// The settings the rule was built from.
    #[inline]
    pub fn settings(&self) -> &RuleSettings {
        &self.settings
    }

    /// The damping coefficient the window was validated against.
    #[inline]
    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// The usable nodes in ascending order of `s`.
    #[inline]
    pub fn nodes(&self) -> &[DeNode] {
        &self.nodes
    }

    /// Number of usable nodes.
    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the rule has no nodes (never true for a constructed rule).
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Range `(t_first, t_last)` of the node abscissas.
    #[inline]
    pub fn t_range(&self) -> (f64, f64) {
        (self.nodes[0].t, self.nodes[self.nodes.len() - 1].t)
    }

    /// Nodes dropped at the lower end of the window (underflowed weights).
    #[inline]
    pub fn trimmed_lower(&self) -> usize {
        self.trimmed_lower
    }

    /// Nodes dropped at the upper end of the window (overflowing abscissas
    /// or contributions extinguished by the damping envelope).
    #[inline]
    pub fn trimmed_upper(&self) -> usize {
        self.trimmed_upper
    }
}

/// The trapezoidal sum `sum_s w_s f(t_s)` over the rule's nodes, in
/// ascending node order.
///
/// The infinite trapezoidal sum needs no endpoint correction: the window
/// validation guarantees that the omitted tails are below the resolution of
/// the rule.
///
/// # Errors
///
/// Reports the node at which `f` first returns a non-finite value.
pub fn trapezoid_de<F: FnMut(f64) -> f64>(
    mut f: F,
    rule: &QuadratureRule,
) -> Result<f64, QuadratureError> {
    let mut sum = 0.0;
    for node in rule.nodes() {
        let val = f(node.t);
        if !val.is_finite() {
            return Err(QuadratureError::NonFiniteIntegrand {
                s: node.s,
                t: node.t,
            });
        }
        sum += node.w * val;
    }
    Ok(sum)
}

/// Interior lattice coefficient
///
/// ```text
/// a(ksq) = 1/4 int_0^infty e^{-lambda^2 h^2 D t / 4} e^{-q/(1+t)} P_M dt,
/// q = ksq / D,
/// ```
///
/// for integer squared lattice distance `ksq = |k - m|^2`. The rule must
/// have been built with `damping = params.damping()`.
pub fn a_coeff(m: u32, n: u32, ksq: i64, params: &RunParams, rule: &QuadratureRule) -> f64 {
    debug_assert!(ksq >= 0);
    a_coeff_scaled(m, n, ksq as f64 / params.d(), params.lam2h2d(), rule)
}

pub(crate) fn a_coeff_scaled(
    m: u32,
    n: u32,
    normsq: f64,
    lam2h2d: f64,
    rule: &QuadratureRule,
) -> f64 {
    let mut sum = 0.0;
    for node in rule.nodes() {
        sum += node.w * freespace_integrand(m, n, normsq, node.t, lam2h2d);
    }
    0.25 * sum
}

/// Boundary-strip lattice coefficient: the half-space counterpart of
/// [`a_coeff`] for the evaluation node `k` and strip node `m`, whose local
/// frame supplies the signed boundary distance and the inner normal. Deep
/// inside the domain (`rho << -h sqrt(D)`) it collapses to `a_coeff` of the
/// same squared distance; far outside it vanishes.
pub fn b_coeff(
    m: u32,
    n: u32,
    k: [i64; 2],
    mnode: [i64; 2],
    frame: &LocalFrame,
    params: &RunParams,
    rule: &QuadratureRule,
) -> f64 {
    let dk = [k[0] - mnode[0], k[1] - mnode[1]];
    b_coeff_grid(m, n, dk, frame, params, rule)
}

/// [`b_coeff`] in terms of the integer offset `dk = k - m`. Shared by the
/// public entry point and the grid evaluator so that both produce bitwise
/// identical scaled arguments.
pub(crate) fn b_coeff_grid(
    m: u32,
    n: u32,
    dk: [i64; 2],
    frame: &LocalFrame,
    params: &RunParams,
    rule: &QuadratureRule,
) -> f64 {
    let ksq = dk[0] * dk[0] + dk[1] * dk[1];
    let dkf = [dk[0] as f64, dk[1] as f64];
    let xs = ScaledPoint {
        normsq: ksq as f64 / params.d(),
        xn: (frame.nu[0] * dkf[0] + frame.nu[1] * dkf[1]) / params.sqrt_d(),
    };
    let a = frame.rho / params.hsd();
    b_coeff_scaled(m, n, xs, a, params.lam2h2d(), rule)
}

pub(crate) fn b_coeff_scaled(
    m: u32,
    n: u32,
    xs: ScaledPoint,
    a: f64,
    lam2h2d: f64,
    rule: &QuadratureRule,
) -> f64 {
    let mut sum = 0.0;
    for node in rule.nodes() {
        sum += node.w * halfspace_integrand(m, n, &xs, node.t, a, lam2h2d);
    }
    0.125 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::RunParams;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let scale = libm::fabs(expected).max(1e-300);
        let err = libm::fabs(actual - expected) / scale;
        assert!(
            err <= tol,
            "actual {actual:e}, expected {expected:e}, rel err {err:e}"
        );
    }

    #[test]
    fn transform_matches_reference_values() {
        // high-precision reference values for alpha = 4, beta = 2
        let cases = [
            (0.0, 5.764287208746087e-4, 1.047103784127828e-2),
            (0.5, 10.80685931800221, 251.13227477746307),
            (-0.5, 3.6158385623162894e-8, 7.766105679248913e-7),
            (-0.8, 3.106602996281388e-11, 8.035261170829250e-10),
            (1.0, 2.2208801670731658e8, 1.103462363567790e10),
        ];
        for &(u, phi, dphi) in &cases {
            let (p, dp) = de_transform(u, 4.0, 2.0).unwrap();
            assert_rel(p, phi, 1e-14);
            assert_rel(dp, dphi, 1e-14);
        }
    }

    #[test]
    fn transform_saturates() {
        assert_eq!(
            de_transform(3.0, 4.0, 2.0),
            Err(QuadratureError::Saturated { u: 3.0 })
        );
        assert!(de_transform(f64::NAN, 4.0, 2.0).is_err());
        assert!(de_transform(0.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn standard_window_requires_damping() {
        // Phi(1.0) = 2.2e8 < 1e10: the standard window relies on the
        // damping envelope to exhaust the tail.
        let undamped = RuleSettings::standard().build(0.0);
        assert!(matches!(
            undamped,
            Err(QuadratureError::UpperEndpointTooLow { .. })
        ));
        // lambda^2 = 2, h = 2^-7, D = 3
        let damping = 2.0 * (1.0 / 128.0f64).powi(2) * 3.0 / 4.0;
        let rule = RuleSettings::standard().build(damping).unwrap();
        assert!(rule.len() > 150);
        for pair in rule.nodes().windows(2) {
            assert!(pair[0].t < pair[1].t);
            assert!(pair[0].w > 0.0 && pair[0].t > 0.0);
        }
        // ten times weaker damping still passes
        RuleSettings::standard().build(damping / 10.0).unwrap();
    }

    #[test]
    fn fine_window_needs_no_damping() {
        // Phi(1.2) = 4e13 >= 1e10
        let rule = RuleSettings::fine().build(0.0).unwrap();
        assert!(rule.len() > 300);
        assert_eq!(rule.trimmed_lower(), 0);
        let (t_lo, t_hi) = rule.t_range();
        assert!(t_lo < 1e-12 && t_hi > 1e10);
    }

    #[test]
    fn window_validation_rejects_bad_parameters() {
        assert!(QuadratureRule::new(4.0, 2.0, 0.0, -80, 100, 1.0).is_err());
        assert!(QuadratureRule::new(4.0, 2.0, 0.01, 80, 100, 1.0).is_err());
        assert!(QuadratureRule::new(4.0, 2.0, 0.01, -80, -10, 1.0).is_err());
        assert!(QuadratureRule::new(4.0, 2.0, 0.01, -80, 100, f64::NAN).is_err());
        // window misses the origin
        assert!(matches!(
            QuadratureRule::new(4.0, 2.0, 0.01, -10, 100, 1.0),
            Err(QuadratureError::LowerEndpointTooHigh { .. })
        ));
        // window misses the tail
        assert!(matches!(
            QuadratureRule::new(4.0, 2.0, 0.01, -80, 10, 0.0),
            Err(QuadratureError::UpperEndpointTooLow { .. })
        ));
    }

    #[test]
    fn strong_damping_trims_the_tail() {
        // With damping 3e5 the short window is admissible because the
        // envelope extinguishes the integrand well before t = Phi(0.1),
        // and the top nodes fall below the contribution floor.
        let rule = QuadratureRule::new(4.0, 2.0, 0.01, -80, 10, 3e5).unwrap();
        assert!(rule.trimmed_upper() >= 1);
        assert!(rule.len() >= 2);
    }

    #[test]
    fn trapezoid_integrates_exponentials() {
        // the standard window resolves roughly ten digits ...
        let rule = RuleSettings::standard().build(1.0).unwrap();
        let total = trapezoid_de(|t| libm::exp(-t), &rule).unwrap();
        assert_rel(total, 1.0, 1e-9);
        // ... and the fine window comes within a digit of the rounding floor
        let rule = RuleSettings::fine().build(1.0).unwrap();
        let total = trapezoid_de(|t| libm::exp(-t), &rule).unwrap();
        assert_rel(total, 1.0, 1e-12);
        // int_0^infty e^{-t}/(1+t) dt = e E_1(1)
        let total = trapezoid_de(|t| libm::exp(-t) / (1.0 + t), &rule).unwrap();
        assert_rel(total, 0.5963473623231941, 1e-12);
    }

    #[test]
    fn trapezoid_reports_offending_node() {
        let rule = RuleSettings::standard().build(1.0).unwrap();
        let bad = rule.nodes()[7];
        let err = trapezoid_de(|t| 1.0 / (t - bad.t), &rule).unwrap_err();
        assert_eq!(
            err,
            QuadratureError::NonFiniteIntegrand { s: bad.s, t: bad.t }
        );
    }

    #[test]
    fn a_coeff_matches_exponential_integral() {
        // For M = 1, n = 2, ksq = 0 the integrand is e^{-ct}/(1+t), so
        // a(0) = e^c E_1(c) / 4; reference values from 40-digit arithmetic.
        let params = RunParams::new(1.0 / 128.0, 3.0, 1, 6.0, 2.0).unwrap();
        let rule = RuleSettings::standard().build(params.damping()).unwrap();
        let got = a_coeff(1, 2, 0, &params, &rule);
        assert_rel(got, 8.722269816566647 / 4.0, 1e-11);

        let params = RunParams::new(1.0 / 128.0, 3.0, 1, 6.0, 0.2).unwrap();
        let rule = RuleSettings::standard().build(params.damping()).unwrap();
        let got = a_coeff(1, 2, 0, &params, &rule);
        assert_rel(got, 11.024074931034442 / 4.0, 1e-11);
    }

    #[test]
    fn a_coeff_is_positive_and_decays_for_first_order() {
        let params = RunParams::new(0.0625, 2.0, 1, 6.0, 1.0).unwrap();
        let rule = RuleSettings::standard().build(params.damping()).unwrap();
        let mut prev = f64::INFINITY;
        for ksq in 0..60 {
            let a = a_coeff(1, 2, ksq, &params, &rule);
            assert!(a > 0.0, "a({ksq}) = {a}");
            assert!(a < prev, "a({ksq}) = {a} did not decay");
            prev = a;
        }
    }

    #[test]
    fn coefficients_are_converged_in_the_rule() {
        // Halving tau while doubling the window leaves the coefficients
        // unchanged to the rounding floor.
        let lam2h2d = 2.0 * (1.0 / 128.0f64).powi(2) * 3.0;
        let damping = 0.25 * lam2h2d;
        let coarse = QuadratureRule::new(4.0, 2.0, 0.01, -80, 100, damping).unwrap();
        let fine = QuadratureRule::new(4.0, 2.0, 0.005, -160, 200, damping).unwrap();
        let a_c = a_coeff_scaled(3, 2, 7.3 / 3.0, lam2h2d, &coarse);
        let a_f = a_coeff_scaled(3, 2, 7.3 / 3.0, lam2h2d, &fine);
        assert_rel(a_c, a_f, 1e-12);

        let xs = ScaledPoint {
            normsq: 4.0,
            xn: -0.3,
        };
        let b_c = b_coeff_scaled(3, 2, xs, -0.25, lam2h2d, &coarse);
        let b_f = b_coeff_scaled(3, 2, xs, -0.25, lam2h2d, &fine);
        assert_rel(b_c, b_f, 1e-12);
    }

    #[test]
    fn b_coeff_collapses_away_from_the_boundary() {
        // Deep inside the domain the half-space correction sees no
        // boundary: b equals a at the same squared distance. Far outside,
        // it vanishes.
        let lam2h2d = 2.0 * (1.0 / 128.0f64).powi(2) * 3.0;
        let rule = RuleSettings::standard().build(0.25 * lam2h2d).unwrap();
        for m in 1..=3u32 {
            let xs = ScaledPoint {
                normsq: 2.5,
                xn: 0.7,
            };
            let deep = b_coeff_scaled(m, 2, xs, -6.0, lam2h2d, &rule);
            let free = a_coeff_scaled(m, 2, 2.5, lam2h2d, &rule);
            assert_rel(deep, free, 1e-11);
            let outside = b_coeff_scaled(m, 2, xs, 6.0, lam2h2d, &rule);
            assert!(libm::fabs(outside) <= 1e-12, "m={m}: {outside:e}");
        }
    }
}
