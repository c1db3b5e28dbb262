//! One-dimensional integrands for the heat-kernel representation of the
//! modified Helmholtz volume potential.
//!
//! Acting on a generating function `eta_2M`, the potential of the operator
//! `(-Delta + lambda^2)` collapses to a single integral over the heat-kernel
//! time `t`. Over all of space the integrand is
//! `e^{-lambda^2 t/4} e^{-|x|^2/(1+t)} P_M(x, t)`; over a half-space
//! `{x_n > a}` it picks up the boundary-layer correction
//!
//! ```text
//! erfc(F(t, x_n, a)) P_M(x, t) + e^{-F^2} / sqrt(pi) * Q_M(x, t, a),
//! ```
//!
//! where `F(t, x, a) = sqrt((1+t)/t) (a - x/(1+t))`. `P_M` and `Q_M` are
//! short Hermite–Laguerre sums; they are what this module evaluates, in both
//! a plain form (matching the printed low-order formulas) and a log-space
//! tempered form that stays finite for the extremely small `t` produced by
//! double-exponential quadrature nodes.
//!
//! The building block behind the half-space formula is the one-dimensional
//! integral `phi_k(x, t, p) = int_p^inf e^{-(x-y)^2/t} (d^{2k}/dy^{2k}) e^{-y^2} dy`,
//! exposed here in closed form ([`phi_k_closed`]) together with a direct
//! adaptive quadrature ([`phi_k_oracle`]) used to validate it.

use crate::specfun::{erfc, hermite, laguerre, PolyDegree};

const SQRT_PI: f64 = 1.772_453_850_905_516;
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Errors reported by the kernel layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelError {
    /// The heat-kernel time `t` must be strictly positive.
    NonPositiveTime,
    /// The adaptive oracle quadrature failed to meet its tolerance.
    OracleNoConvergence,
}

impl core::fmt::Display for KernelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KernelError::NonPositiveTime => write!(f, "heat-kernel time t must be positive"),
            KernelError::OracleNoConvergence => {
                write!(f, "adaptive oracle quadrature did not converge")
            }
        }
    }
}

impl core::error::Error for KernelError {}

/// A point seen from a lattice node, rescaled by `h sqrt(D)` and rotated into
/// the local boundary frame: only the squared norm and the normal component
/// enter the kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPoint {
    /// Squared norm `|x|^2` of the scaled offset (rotation invariant).
    pub normsq: f64,
    /// Component of the scaled offset along the inner normal.
    pub xn: f64,
}

impl ScaledPoint {
    /// Squared norm of the tangential part, `|x'|^2 = |x|^2 - x_n^2`,
    /// clamped at zero against rounding.
    #[inline]
    pub fn xprime_normsq(&self) -> f64 {
        let v = self.normsq - self.xn * self.xn;
        if v > 0.0 {
            v
        } else {
            0.0
        }
    }
}

/// Boundary-layer argument `F(t, x, a) = sqrt((1+t)/t) * (a - x/(1+t))`.
///
/// # Errors
///
/// Rejects `t <= 0` (and non-finite `t`).
#[inline]
pub fn big_f(t: f64, xn: f64, a: f64) -> Result<f64, KernelError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(KernelError::NonPositiveTime);
    }
    Ok(big_f_raw(t, xn, a))
}

#[inline]
fn big_f_raw(t: f64, xn: f64, a: f64) -> f64 {
    let one_t = 1.0 + t;
    libm::sqrt(one_t / t) * (a - xn / one_t)
}

#[inline]
fn binom(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..k {
        num *= (n - i) as f64;
        den *= (i + 1) as f64;
    }
    num / den
}

/// Free-space Hermite–Laguerre sum
///
/// ```text
/// P_M(x, t) = sum_{k=0}^{M-1} (1+t)^{-k-n/2} L_k^{(n/2-1)}(|x|^2/(1+t)).
/// ```
///
/// `normsq` is `|x|^2`; the value depends on `x` only through it.
pub fn p_poly(m: u32, n: u32, normsq: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    let one_t = 1.0 + t;
    let y = normsq / one_t;
    let gamma = 0.5 * n as f64 - 1.0;
    let mut factor = if n == 2 {
        1.0 / one_t
    } else {
        libm::pow(one_t, -0.5 * n as f64)
    };
    let mut sum = 0.0;
    for k in 0..m {
        sum += factor * laguerre(k, gamma, y);
        factor /= one_t;
    }
    sum
}

/// How the `t^{-j/2}` growth of the individual half-space terms is handled.
enum QScale {
    /// Plain evaluation, exactly as the closed forms are printed. Individual
    /// terms overflow for very small `t`.
    Plain,
    /// Each term is assembled as `exp(-F^2 - (j/2) ln t) * polynomial`, with
    /// the damping factor `e^{-F^2}` folded in; exponents below `-700` are
    /// short-circuited to zero. The result is `e^{-F^2} Q_M`.
    Tempered { f_squared: f64 },
}

/// Shared assembler for the half-space correction sum `Q_M`.
fn q_sum(m: u32, n: u32, xprime_normsq: f64, xn: f64, t: f64, a: f64, scale: QScale) -> f64 {
    let one_t = 1.0 + t;
    let sqrt_one_t = libm::sqrt(one_t);
    let f_val = big_f_raw(t, xn, a);
    let ln_t = libm::log(t);
    let gamma = 0.5 * (n as f64 - 3.0);
    let yprime = xprime_normsq / one_t;
    let xn_scaled = xn / sqrt_one_t;
    let z = (a - xn) / libm::sqrt(t);
    let prefactor = if n == 2 {
        2.0 / sqrt_one_t
    } else {
        2.0 * libm::pow(one_t, -0.5 * (n as f64 - 1.0))
    };

    let mut total = 0.0;
    for k in 0..m {
        let pow_k_half = libm::pow(one_t, -(k as f64 + 0.5));
        for l in 0..=k {
            let kap = k - l;
            if kap == 0 {
                continue;
            }
            let mut fact = 1.0;
            for i in 1..=kap {
                fact *= 4.0 * i as f64;
            }
            let sign = if kap % 2 == 0 { 1.0 } else { -1.0 };
            let coef = sign / fact * laguerre(l, gamma, yprime);
            let pow_l = libm::pow(one_t, -(l as f64));
            let two_kap = 2 * kap;
            let mut inner = 0.0;
            for j in 1..=two_kap {
                let step = match scale {
                    QScale::Plain => libm::pow(t, -0.5 * j as f64),
                    QScale::Tempered { f_squared } => {
                        let exponent = -f_squared - 0.5 * j as f64 * ln_t;
                        if exponent < -700.0 {
                            continue;
                        }
                        libm::exp(exponent)
                    }
                };
                let piece_f = binom(two_kap, j)
                    * hermite(two_kap - j, xn_scaled)
                    * hermite(j - 1, f_val)
                    * pow_k_half;
                let piece_p = hermite(j - 1, z) * hermite(two_kap - j, a) * pow_l;
                let jsign = if j % 2 == 0 { 1.0 } else { -1.0 };
                inner += jsign * step * (piece_f - piece_p);
            }
            total += coef * inner;
        }
    }
    prefactor * total
}

/// Half-space correction sum
///
/// ```text
/// Q_M(x, t, a) = 2 (1+t)^{-(n-1)/2} sum_{k=0}^{M-1} sum_{l=0}^{k}
///     (-1)^{k-l} / ((k-l)! 4^{k-l}) L_l^{((n-3)/2)}(|x'|^2/(1+t))
///     sum_{j=1}^{2(k-l)} (-1)^j t^{-j/2} [ C(2(k-l), j)
///         H_{2(k-l)-j}(x_n/sqrt(1+t)) H_{j-1}(F) (1+t)^{-k-1/2}
///         - H_{j-1}((a-x_n)/sqrt(t)) H_{2(k-l)-j}(a) (1+t)^{-l} ].
/// ```
///
/// This is the plain form; the `t^{-j/2}` factors overflow for very small
/// `t`, which is fine for direct comparison against the printed low-order
/// formulas but not inside quadrature loops — [`halfspace_integrand`] uses a
/// log-space tempered assembly instead. `Q_1` is identically zero.
///
/// # Panics
///
/// Panics if `t <= 0`.
pub fn q_poly(m: u32, n: u32, xprime_normsq: f64, xn: f64, t: f64, a: f64) -> f64 {
    assert!(t > 0.0, "q_poly requires t > 0");
    q_sum(m, n, xprime_normsq, xn, t, a, QScale::Plain)
}

/// Closed form of `phi_k(x, t, p) = int_p^inf e^{-(x-y)^2/t} (d^{2k}/dy^{2k}) e^{-y^2} dy`:
///
/// ```text
/// phi_k = e^{-x^2/(1+t)} [ erfc(F) H_{2k}(x/sqrt(1+t)) sqrt(pi t) / (2 (1+t)^{k+1/2})
///   + e^{-F^2} sum_{l=1}^{2k} (-1)^l t^{-(l-1)/2} ( C(2k, l)
///       H_{2k-l}(x/sqrt(1+t)) H_{l-1}(F) / (1+t)^{k+1/2}
///       - H_{l-1}((p-x)/sqrt(t)) H_{2k-l}(p) ) ]
/// ```
///
/// with `F = F(t, x, p)`. Intended for moderate `t`; the individual terms
/// grow like `t^{-(l-1)/2}` as `t -> 0`.
///
/// # Panics
///
/// Panics if `t <= 0`.
pub fn phi_k_closed(k: PolyDegree, x: f64, t: f64, p: f64) -> f64 {
    assert!(t > 0.0, "phi_k_closed requires t > 0");
    let one_t = 1.0 + t;
    let sqrt_one_t = libm::sqrt(one_t);
    let f_val = big_f_raw(t, x, p);
    let x_scaled = x / sqrt_one_t;
    let pow_k_half = libm::pow(one_t, -(k as f64 + 0.5));

    let leading =
        erfc(f_val) * hermite(2 * k, x_scaled) * SQRT_PI * libm::sqrt(t) * 0.5 * pow_k_half;

    let z = (p - x) / libm::sqrt(t);
    let mut sum = 0.0;
    for l in 1..=(2 * k) {
        let lsign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let step = libm::pow(t, -0.5 * (l as f64 - 1.0));
        let piece_f =
            binom(2 * k, l) * hermite(2 * k - l, x_scaled) * hermite(l - 1, f_val) * pow_k_half;
        let piece_p = hermite(l - 1, z) * hermite(2 * k - l, p);
        sum += lsign * step * (piece_f - piece_p);
    }
    libm::exp(-x * x / one_t) * (leading + libm::exp(-f_val * f_val) * sum)
}

/// Direct adaptive-Simpson evaluation of the `phi_k` integral, used as an
/// independent oracle for [`phi_k_closed`]. Converges to an absolute
/// tolerance of `1e-13`; intended for moderate arguments (`k <= 4`,
/// `|x| <~ 3`, `t <~ 100`).
///
/// # Errors
///
/// Rejects `t <= 0` and reports failure to converge.
pub fn phi_k_oracle(k: PolyDegree, x: f64, t: f64, p: f64) -> Result<f64, KernelError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(KernelError::NonPositiveTime);
    }
    const TOL: f64 = 1e-13;
    // The integrand is bounded by |H_2k(y)| e^{-y^2}; beyond |y| = 9 its
    // contribution is far below the tolerance for the supported degrees.
    let upper = 9.0f64.max(x + 1.0);
    if p >= upper {
        return Ok(0.0);
    }
    let f = |y: f64| libm::exp(-(x - y) * (x - y) / t - y * y) * hermite(2 * k, y);
    adaptive_simpson(&f, p, upper, TOL)
}

/// Recursive adaptive Simpson quadrature with an absolute tolerance.
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, KernelError> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 45)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, KernelError> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if libm::fabs(delta) <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(KernelError::OracleNoConvergence);
    }
    let half_tol = 0.5 * tol;
    let l = simpson_step(f, a, fa, m, fm, lm, flm, left, half_tol, depth - 1)?;
    let r = simpson_step(f, m, fm, b, fb, rm, frm, right, half_tol, depth - 1)?;
    Ok(l + r)
}

/// Half-space integrand of the heat-kernel time integral,
///
/// ```text
/// e^{-lam2h2d * t / 4} e^{-|x|^2/(1+t)}
///     [ erfc(F(t, x_n, a)) P_M(x, t) + e^{-F^2}/sqrt(pi) Q_M(x, t, a) ],
/// ```
///
/// evaluated with the tempered `Q_M` assembly so that double-exponential
/// quadrature nodes with `t` as small as `1e-11` are handled without
/// overflow. `lam2h2d` is the combined damping coefficient `lambda^2 h^2 D`
/// of the rescaled problem.
///
/// # Panics
///
/// Panics if `t <= 0`.
pub fn halfspace_integrand(m: u32, n: u32, xs: &ScaledPoint, t: f64, a: f64, lam2h2d: f64) -> f64 {
    assert!(t > 0.0, "halfspace_integrand requires t > 0");
    let one_t = 1.0 + t;
    let envelope = libm::exp(-0.25 * lam2h2d * t - xs.normsq / one_t);
    if envelope == 0.0 {
        return 0.0;
    }
    let f_val = big_f_raw(t, xs.xn, a);
    let p_term = erfc(f_val) * p_poly(m, n, xs.normsq, t);
    let q_term = INV_SQRT_PI
        * q_sum(
            m,
            n,
            xs.xprime_normsq(),
            xs.xn,
            t,
            a,
            QScale::Tempered {
                f_squared: f_val * f_val,
            },
        );
    envelope * (p_term + q_term)
}

/// Free-space integrand `e^{-lam2h2d * t / 4} e^{-|x|^2/(1+t)} P_M(x, t)`.
///
/// # Panics
///
/// Panics if `t <= 0`.
pub fn freespace_integrand(m: u32, n: u32, normsq: f64, t: f64, lam2h2d: f64) -> f64 {
    assert!(t > 0.0, "freespace_integrand requires t > 0");
    let envelope = libm::exp(-0.25 * lam2h2d * t - normsq / (1.0 + t));
    if envelope == 0.0 {
        return 0.0;
    }
    envelope * p_poly(m, n, normsq, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let scale = libm::fabs(expected).max(1e-300);
        let err = libm::fabs(actual - expected) / scale;
        assert!(
            err <= tol,
            "actual {actual:e}, expected {expected:e}, rel err {err:e} > {tol:e}"
        );
    }

    #[test]
    fn big_f_domain_and_values() {
        assert_eq!(big_f(0.0, 0.1, 0.2), Err(KernelError::NonPositiveTime));
        assert_eq!(big_f(-1.0, 0.1, 0.2), Err(KernelError::NonPositiveTime));
        assert_eq!(big_f(1.0, 0.5, 0.25).unwrap(), 0.0);
        let want = libm::sqrt(4.0 / 3.0) * (0.7 - (-0.4) / 4.0);
        assert_rel(big_f(3.0, -0.4, 0.7).unwrap(), want, 1e-15);
    }

    /// Printed two-dimensional closed forms of `P_M` for M = 1, 2, 3.
    fn p_printed(m: u32, q: f64, t: f64) -> f64 {
        let s = 1.0 + t;
        match m {
            1 => 1.0 / s,
            2 => (1.0 + 1.0 / s - q / (s * s)) / s,
            3 => {
                (1.0 + 1.0 / s - q / (s * s) + 1.0 / (s * s) - 2.0 * q / (s * s * s)
                    + q * q / (2.0 * s * s * s * s))
                    / s
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn p_poly_matches_printed_forms() {
        for m in 1..=3u32 {
            for &q in &[0.0, 0.3, 2.5, 8.0] {
                for &t in &[0.05, 1.0, 7.0, 300.0] {
                    assert_rel(p_poly(m, 2, q, t), p_printed(m, q, t), 1e-13);
                }
            }
        }
        // spot value: P_2 at |x|^2 = 1, t = 1
        assert_rel(p_poly(2, 2, 1.0, 1.0), 0.625, 1e-15);
    }

    /// Printed two-dimensional closed forms of `Q_M` for M = 2, 3.
    fn q_printed(m: u32, x1sq: f64, x2: f64, t: f64, a: f64) -> f64 {
        let s = 1.0 + t;
        let rt = libm::sqrt(t);
        match m {
            1 => 0.0,
            2 => -rt / libm::pow(s, 1.5) * (a + x2 / s),
            3 => {
                0.25 * rt / libm::pow(s, 1.5)
                    * (-2.0 * a * t / s
                        + (a + x2 / s)
                            * ((4.0 * (x1sq + x2 * x2) - 2.0 * x2 * x2) / (s * s) - 7.0 / s
                                + 2.0 * a * a
                                - 5.0))
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn q_poly_matches_printed_forms() {
        for &x1sq in &[0.0, 0.49, 2.2] {
            for &x2 in &[-1.3, 0.0, 0.25, 0.8] {
                for &t in &[0.07, 1.0, 4.5, 60.0] {
                    for &a in &[-0.9, 0.0, 0.5, 1.4] {
                        let q1 = q_poly(1, 2, x1sq, x2, t, a);
                        assert_eq!(q1, 0.0);
                        for m in 2..=3u32 {
                            let got = q_poly(m, 2, x1sq, x2, t, a);
                            let want = q_printed(m, x1sq, x2, t, a);
                            // Both routes assemble terms of size ~ t^{-j/2}
                            // that cancel down to O(sqrt(t)); for small t the
                            // comparison is limited by that roundoff, not by
                            // the formulas.
                            let rel = if t >= 0.5 { 1e-12 } else { 1e-9 };
                            let tol = rel * (1.0 + libm::fabs(want));
                            assert!(
                                libm::fabs(got - want) <= tol,
                                "M={m} x1sq={x1sq} x2={x2} t={t} a={a}: got {got:e}, want {want:e}"
                            );
                        }
                    }
                }
            }
        }
        // spot value from the printed Q_2
        assert_rel(
            q_poly(2, 2, 0.0, 0.25, 1.0, 0.5),
            -0.625 / (2.0 * libm::sqrt(2.0)),
            1e-14,
        );
    }

    #[test]
    fn tempered_q_matches_plain_at_moderate_t() {
        // halfspace_integrand assembles e^{-F^2} Q in log-space; at moderate
        // t this must agree with the plain printed route.
        for &t in &[0.3, 1.0, 5.0] {
            for &a in &[-0.6, 0.2, 1.1] {
                for &xn in &[-0.8, 0.0, 0.9] {
                    let xs = ScaledPoint {
                        normsq: xn * xn + 0.6,
                        xn,
                    };
                    let lam2h2d = 0.37;
                    let got = halfspace_integrand(3, 2, &xs, t, a, lam2h2d);
                    let f_val = big_f(t, xn, a).unwrap();
                    let envelope = libm::exp(-0.25 * lam2h2d * t - xs.normsq / (1.0 + t));
                    let want = envelope
                        * (erfc(f_val) * p_poly(3, 2, xs.normsq, t)
                            + libm::exp(-f_val * f_val) / SQRT_PI
                                * q_poly(3, 2, xs.xprime_normsq(), xn, t, a));
                    assert_rel(got, want, 1e-12);
                }
            }
        }
    }

    #[test]
    fn deep_halfspace_limits() {
        // a <= -r: the half-space contains the whole effective support, so
        // the integrand must collapse to twice the free-space one.
        for m in 1..=3u32 {
            for &t in &[1e-6, 0.02, 1.0, 40.0, 1e4] {
                for &xn in &[-0.9, 0.0, 1.2] {
                    let xs = ScaledPoint {
                        normsq: xn * xn + 1.3,
                        xn,
                    };
                    let half = halfspace_integrand(m, 2, &xs, t, -6.0, 0.8);
                    let free = freespace_integrand(m, 2, xs.normsq, t, 0.8);
                    assert!(
                        libm::fabs(half - 2.0 * free) <= 1e-14 * (1.0 + libm::fabs(free)),
                        "m={m} t={t} xn={xn}: half {half:e} vs 2*free {:e}",
                        2.0 * free
                    );
                }
            }
        }
    }

    #[test]
    fn far_halfspace_vanishes() {
        // a >= r: the node is far outside the half-space and the integrand
        // is exponentially negligible.
        for m in 1..=3u32 {
            for &t in &[1e-6, 0.5, 3.0, 200.0] {
                for &xn in &[-0.9, 0.0, 1.0] {
                    let xs = ScaledPoint {
                        normsq: xn * xn + 0.4,
                        xn,
                    };
                    let v = halfspace_integrand(m, 2, &xs, t, 6.0, 0.1);
                    assert!(
                        libm::fabs(v) <= 1e-12,
                        "m={m} t={t} xn={xn}: integrand {v:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn tiny_t_nodes_are_finite() {
        // Double-exponential rules produce t ~ 3e-11; the tempered assembly
        // must stay finite and the limits must still hold there.
        for &t in &[3.1e-11, 1e-9, 1e-7] {
            for &a in &[-0.4, 0.0, 0.3] {
                for &xn in &[-0.5, 0.0, 0.45] {
                    let xs = ScaledPoint {
                        normsq: xn * xn + 0.2,
                        xn,
                    };
                    let v = halfspace_integrand(3, 2, &xs, t, a, 1.0);
                    assert!(v.is_finite(), "t={t} a={a} xn={xn}: {v}");
                }
            }
        }
    }

    #[test]
    fn phi_closed_reference_values() {
        // Reference values computed with 30-digit adaptive quadrature.
        let cases = [
            (0u32, 0.3, 1.7, -0.2, 0.9663381626355053),
            (1u32, 0.3, 1.7, -0.2, -0.7609232670020640),
            (2u32, 0.3, 1.7, -0.2, 2.4171055577611022),
            (1u32, -0.6, 0.4, 0.35, -0.014176587361525730),
            (2u32, 1.1, 3.0, 0.8, -3.2079459994169983),
        ];
        for &(k, x, t, p, want) in &cases {
            assert_rel(phi_k_closed(k, x, t, p), want, 1e-12);
        }
        // phi_0 with the boundary far to the left reduces to the full
        // Gaussian integral sqrt(pi/2) (for x = 0, t = 1).
        assert_rel(
            phi_k_closed(0, 0.0, 1.0, -12.0),
            libm::sqrt(core::f64::consts::PI / 2.0),
            1e-14,
        );
    }

    #[test]
    fn phi_closed_matches_oracle() {
        for k in 0..=2u32 {
            for &x in &[-0.6, 0.3, 1.1] {
                for &t in &[0.4, 1.7, 3.0] {
                    for &p in &[-0.7, 0.0, 0.35] {
                        let oracle = phi_k_oracle(k, x, t, p).unwrap();
                        let closed = phi_k_closed(k, x, t, p);
                        assert!(
                            libm::fabs(oracle - closed) <= 1e-10,
                            "k={k} x={x} t={t} p={p}: oracle {oracle:e} vs closed {closed:e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_rejects_bad_time() {
        assert_eq!(
            phi_k_oracle(1, 0.0, 0.0, 0.0),
            Err(KernelError::NonPositiveTime)
        );
        assert_eq!(
            phi_k_oracle(1, 0.0, -2.0, 0.0),
            Err(KernelError::NonPositiveTime)
        );
    }
}
