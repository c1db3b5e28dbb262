//! Gaussian–Laguerre generating functions and quasi-interpolation.
//!
//! The generating function of order `2M` in dimension `n`,
//!
//! ```text
//! eta_2M(x) = pi^{-n/2} L_{M-1}^{(n/2)}(|x|^2) exp(-|x|^2),
//! ```
//!
//! satisfies discrete moment conditions of order `2M`: its lattice shifts
//! reproduce polynomials up to degree `2M - 1`. The quasi-interpolant built
//! from scaled shifts of `eta_2M`,
//!
//! ```text
//! M_h f(x) = D^{-n/2} sum_m f(hm) eta_2M((x - hm) / (h sqrt(D))),
//! ```
//!
//! approximates smooth `f` to order `O((h sqrt(D))^{2M})` up to a saturation
//! term that decays like `exp(-pi^2 D)` in the shape parameter `D`.

use alloc::vec::Vec;

use crate::specfun::laguerre;

/// Maximum space dimension supported by the dense tensor quadratures here.
const MAX_DIM: usize = 3;

/// Errors reported by the generating-function layer.
#[derive(Debug, Clone, PartialEq)]
pub enum GenfunError {
    /// Order or dimension outside the supported range.
    InvalidOrder(&'static str),
    /// Step, shape or truncation parameter outside its domain.
    InvalidParams(&'static str),
    /// A point or multi-index of the wrong length for the dimension.
    DimensionMismatch {
        /// Dimension the operation was configured for.
        expected: usize,
        /// Length actually supplied.
        got: usize,
    },
    /// Moment order at or above `2M`, where no cancellation is guaranteed.
    MultiIndexTooHigh {
        /// Total order of the supplied multi-index.
        total: u32,
        /// Exclusive order limit `2M`.
        limit: u32,
    },
    /// The sample source had no value for a lattice node inside the
    /// truncation ball.
    MissingSample(Vec<i64>),
}

impl core::fmt::Display for GenfunError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GenfunError::InvalidOrder(what) => write!(f, "invalid generating order: {what}"),
            GenfunError::InvalidParams(what) => {
                write!(f, "invalid quasi-interpolation parameters: {what}")
            }
            GenfunError::DimensionMismatch { expected, got } => {
                write!(f, "expected a length-{expected} tuple, got length {got}")
            }
            GenfunError::MultiIndexTooHigh { total, limit } => write!(
                f,
                "moment order {total} is not below the vanishing-moment bound {limit}"
            ),
            GenfunError::MissingSample(m) => {
                write!(f, "no sample available at lattice node {m:?}")
            }
        }
    }
}

impl core::error::Error for GenfunError {}

/// Smoothing order `M` and space dimension `n` of a generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratingOrder {
    m: u32,
    n: u32,
}

impl GeneratingOrder {
    /// Creates an order descriptor; `m >= 1` and `1 <= n <= 3`.
    pub fn new(m: u32, n: u32) -> Result<Self, GenfunError> {
        if m == 0 {
            return Err(GenfunError::InvalidOrder("smoothing order M must be >= 1"));
        }
        if n == 0 || n as usize > MAX_DIM {
            return Err(GenfunError::InvalidOrder("dimension n must be 1, 2 or 3"));
        }
        Ok(Self { m, n })
    }

    /// Smoothing order `M` (the moment conditions hold up to order `2M`).
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Space dimension `n`.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Step, shape and truncation parameters of a quasi-interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiInterpParams {
    h: f64,
    d: f64,
    r: f64,
}

impl QuasiInterpParams {
    /// Creates a parameter set; requires `h > 0`, `d >= 1`, `r >= 1`.
    pub fn new(h: f64, d: f64, r: f64) -> Result<Self, GenfunError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GenfunError::InvalidParams("step h must be positive"));
        }
        if !(d >= 1.0) || !d.is_finite() {
            return Err(GenfunError::InvalidParams("shape parameter D must be >= 1"));
        }
        if !(r >= 1.0) || !r.is_finite() {
            return Err(GenfunError::InvalidParams(
                "truncation radius r must be >= 1",
            ));
        }
        Ok(Self { h, d, r })
    }

    /// Lattice step `h`.
    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Shape parameter `D` (the Gaussians are scaled by `h sqrt(D)`).
    #[inline]
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Truncation radius `r` in units of `h sqrt(D)`.
    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }
}

#[inline]
fn normsq(x: &[f64]) -> f64 {
    x.iter().map(|&v| v * v).sum()
}

#[inline]
fn pi_pow_neg_half_n(n: u32) -> f64 {
    libm::pow(core::f64::consts::PI, -0.5 * n as f64)
}

/// Generating function `eta_2M(x) = pi^{-n/2} L_{M-1}^{(n/2)}(|x|^2) e^{-|x|^2}`.
///
/// # Panics
///
/// Panics if `x.len() != order.n()`.
pub fn eta_2m(order: GeneratingOrder, x: &[f64]) -> f64 {
    assert_eq!(
        x.len(),
        order.n as usize,
        "point dimension must match the generating order"
    );
    let q = normsq(x);
    pi_pow_neg_half_n(order.n) * laguerre(order.m - 1, 0.5 * order.n as f64, q) * libm::exp(-q)
}

/// The same generating function assembled from iterated Laplacians of the
/// Gaussian,
///
/// ```text
/// eta_2M(x) = pi^{-n/2} sum_{j=0}^{M-1} (-1)^j / (j! 4^j) Delta^j e^{-|x|^2},
/// ```
///
/// expanded with `Delta^j e^{-|x|^2} = (-1)^j j! 4^j L_j^{(n/2-1)}(|x|^2) e^{-|x|^2}`.
/// Kept as an independent evaluation route for cross-checking [`eta_2m`].
///
/// # Panics
///
/// Panics if `x.len() != order.n()`.
pub fn eta_2m_laplacian_form(order: GeneratingOrder, x: &[f64]) -> f64 {
    assert_eq!(
        x.len(),
        order.n as usize,
        "point dimension must match the generating order"
    );
    let q = normsq(x);
    let gamma = 0.5 * order.n as f64 - 1.0;
    let mut sum = 0.0;
    for j in 0..order.m {
        sum += laguerre(j, gamma, q);
    }
    pi_pow_neg_half_n(order.n) * libm::exp(-q) * sum
}

/// Absolute defect of the moment condition `int eta_2M(x) x^alpha dx = delta_{alpha,0}`
/// for a multi-index `alpha` with `|alpha| < 2M`.
///
/// The integral is evaluated by a tensor trapezoid rule on `[-12, 12]^n`;
/// the integrand decays like `e^{-144}` at the boundary, so the rule is
/// accurate far beyond the `1e-10` level the moment test requires.
pub fn moment_defect(order: GeneratingOrder, alpha: &[u32]) -> Result<f64, GenfunError> {
    let n = order.n as usize;
    if alpha.len() != n {
        return Err(GenfunError::DimensionMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    let total: u32 = alpha.iter().sum();
    if total >= 2 * order.m {
        return Err(GenfunError::MultiIndexTooHigh {
            total,
            limit: 2 * order.m,
        });
    }

    const HALF_WIDTH: f64 = 12.0;
    const STEPS: usize = 192;
    let dx = 2.0 * HALF_WIDTH / STEPS as f64;

    let mut idx = [0usize; MAX_DIM];
    let mut x = [0.0f64; MAX_DIM];
    let mut sum = 0.0;
    'outer: loop {
        let mut weight = 1.0;
        let mut mono = 1.0;
        for dim in 0..n {
            let xi = -HALF_WIDTH + idx[dim] as f64 * dx;
            x[dim] = xi;
            if idx[dim] == 0 || idx[dim] == STEPS {
                weight *= 0.5;
            }
            for _ in 0..alpha[dim] {
                mono *= xi;
            }
        }
        sum += weight * mono * eta_2m(order, &x[..n]);

        for slot in idx.iter_mut().take(n) {
            *slot += 1;
            if *slot <= STEPS {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    let integral = sum * libm::pow(dx, n as f64);
    let target = if total == 0 { 1.0 } else { 0.0 };
    Ok(libm::fabs(integral - target))
}

/// Truncated quasi-interpolant
///
/// ```text
/// M_h f(x) = D^{-n/2} sum_{|x - hm| <= r h sqrt(D)} f(hm) eta_2M((x - hm)/(h sqrt(D)))
/// ```
///
/// where the lattice values `f(hm)` are drawn from `samples`. The lattice is
/// anchored at the global origin for every step `h`, and nodes are visited in
/// lexicographic order of `m`, so results are bitwise reproducible.
///
/// # Errors
///
/// Returns [`GenfunError::MissingSample`] if `samples` has no value for a
/// node inside the truncation ball, and [`GenfunError::DimensionMismatch`]
/// if `x.len() != order.n()`.
pub fn quasi_interpolant<S>(
    params: QuasiInterpParams,
    order: GeneratingOrder,
    samples: S,
    x: &[f64],
) -> Result<f64, GenfunError>
where
    S: Fn(&[i64]) -> Option<f64>,
{
    let n = order.n as usize;
    if x.len() != n {
        return Err(GenfunError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let h = params.h;
    let scale = h * libm::sqrt(params.d);
    let radius = params.r * scale;
    let radius_sq = radius * radius;

    let mut lo = [0i64; MAX_DIM];
    let mut hi = [0i64; MAX_DIM];
    for dim in 0..n {
        lo[dim] = libm::ceil((x[dim] - radius) / h) as i64;
        hi[dim] = libm::floor((x[dim] + radius) / h) as i64;
    }

    let mut m = lo;
    let mut sum = 0.0;
    'outer: loop {
        let mut dist_sq = 0.0;
        let mut scaled = [0.0f64; MAX_DIM];
        for dim in 0..n {
            let diff = x[dim] - h * m[dim] as f64;
            dist_sq += diff * diff;
            scaled[dim] = diff / scale;
        }
        if dist_sq <= radius_sq {
            let value =
                samples(&m[..n]).ok_or_else(|| GenfunError::MissingSample(m[..n].to_vec()))?;
            sum += value * eta_2m(order, &scaled[..n]);
        }

        for dim in (0..n).rev() {
            m[dim] += 1;
            if m[dim] <= hi[dim] {
                continue 'outer;
            }
            m[dim] = lo[dim];
        }
        break;
    }
    Ok(sum * libm::pow(params.d, -0.5 * n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            libm::fabs(actual - expected) <= tol,
            "actual {actual:e}, expected {expected:e}, diff {:e} > {tol:e}",
            libm::fabs(actual - expected)
        );
    }

    #[test]
    fn order_and_params_validation() {
        assert!(GeneratingOrder::new(0, 2).is_err());
        assert!(GeneratingOrder::new(1, 0).is_err());
        assert!(GeneratingOrder::new(1, 4).is_err());
        assert!(GeneratingOrder::new(3, 2).is_ok());
        assert!(QuasiInterpParams::new(0.0, 3.0, 6.0).is_err());
        assert!(QuasiInterpParams::new(0.1, 0.5, 6.0).is_err());
        assert!(QuasiInterpParams::new(0.1, 3.0, 0.5).is_err());
        assert!(QuasiInterpParams::new(0.1, 3.0, 6.0).is_ok());
    }

    #[test]
    fn eta_value_at_origin() {
        // eta_4(0) in the plane: pi^{-1} L_1^{(1)}(0) = 2/pi.
        let order = GeneratingOrder::new(2, 2).unwrap();
        assert_close(
            eta_2m(order, &[0.0, 0.0]),
            core::f64::consts::FRAC_2_PI,
            1e-15,
        );
    }

    #[test]
    fn eta_routes_agree() {
        for n in 1..=3u32 {
            for m in 1..=3u32 {
                let order = GeneratingOrder::new(m, n).unwrap();
                let coords = [-2.1, -0.6, 0.0, 0.45, 1.3, 2.8];
                for &c0 in &coords {
                    let x = [c0, 0.7 * c0 - 0.2, -0.3 * c0 + 0.9];
                    let direct = eta_2m(order, &x[..n as usize]);
                    let lap = eta_2m_laplacian_form(order, &x[..n as usize]);
                    assert_close(lap, direct, 1e-13 * (1.0 + libm::fabs(direct)));
                }
            }
        }
    }

    #[test]
    fn eta_is_radial() {
        let order = GeneratingOrder::new(3, 2).unwrap();
        let r = 1.1f64;
        let reference = eta_2m(order, &[r, 0.0]);
        for &angle in &[0.3, 1.2, 2.9, 4.4] {
            let x = [r * libm::cos(angle), r * libm::sin(angle)];
            assert_close(eta_2m(order, &x), reference, 1e-14);
        }
    }

    #[test]
    fn moments_vanish_below_order() {
        for m in 1..=3u32 {
            let order = GeneratingOrder::new(m, 2).unwrap();
            let bound = 2 * m;
            for a0 in 0..bound {
                for a1 in 0..bound {
                    if a0 + a1 >= bound {
                        continue;
                    }
                    let defect = moment_defect(order, &[a0, a1]).unwrap();
                    assert!(
                        defect <= 1e-10,
                        "M={m}, alpha=({a0},{a1}): defect {defect:e}"
                    );
                }
            }
        }
        // one-dimensional smoke check
        let order = GeneratingOrder::new(2, 1).unwrap();
        for a in 0..4u32 {
            assert!(moment_defect(order, &[a]).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn moment_rejects_high_index() {
        let order = GeneratingOrder::new(2, 2).unwrap();
        assert!(matches!(
            moment_defect(order, &[3, 1]),
            Err(GenfunError::MultiIndexTooHigh { total: 4, limit: 4 })
        ));
        assert!(matches!(
            moment_defect(order, &[0]),
            Err(GenfunError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn reproduces_constants() {
        let order = GeneratingOrder::new(1, 2).unwrap();
        for &h in &[0.25, 0.1] {
            let params = QuasiInterpParams::new(h, 3.0, 6.0).unwrap();
            let v = quasi_interpolant(params, order, |_: &[i64]| Some(1.0), &[0.3, -0.45]).unwrap();
            assert_close(v, 1.0, 1e-8);
        }
    }

    #[test]
    fn interpolates_smooth_density_at_center() {
        // f(x) = sin((1 - x1^2/a^2 - x2^2/b^2)^2) on the disk a = b = 1.5;
        // f(0,0) = sin 1.
        let a = 1.5f64;
        let f = move |m: &[i64], h: f64| {
            let x1 = h * m[0] as f64;
            let x2 = h * m[1] as f64;
            let w = 1.0 - (x1 / a) * (x1 / a) - (x2 / a) * (x2 / a);
            libm::sin(w * w)
        };
        let order = GeneratingOrder::new(3, 2).unwrap();
        let h = 1.0 / 128.0;
        let params = QuasiInterpParams::new(h, 3.0, 6.0).unwrap();
        let v = quasi_interpolant(params, order, |m: &[i64]| Some(f(m, h)), &[0.0, 0.0]).unwrap();
        assert_close(v, 0.8414709848078965, 1e-9);
    }

    #[test]
    fn convergence_order_two_for_m1() {
        let a = 1.5f64;
        let point = [0.1, -0.05];
        let exact = {
            let w = 1.0 - (point[0] / a) * (point[0] / a) - (point[1] / a) * (point[1] / a);
            libm::sin(w * w)
        };
        let order = GeneratingOrder::new(1, 2).unwrap();
        let mut errors = std::vec::Vec::new();
        for p in 4..=7 {
            let h = libm::pow(2.0, -(p as f64));
            let params = QuasiInterpParams::new(h, 3.0, 6.0).unwrap();
            let f = move |m: &[i64]| {
                let x1 = h * m[0] as f64;
                let x2 = h * m[1] as f64;
                let w = 1.0 - (x1 / a) * (x1 / a) - (x2 / a) * (x2 / a);
                Some(libm::sin(w * w))
            };
            let v = quasi_interpolant(params, order, f, &point).unwrap();
            errors.push(libm::fabs(v - exact));
        }
        for pair in errors.windows(2) {
            let rate = libm::log2(pair[0] / pair[1]);
            assert!(
                (rate - 2.0).abs() <= 0.3,
                "observed rate {rate} outside 2.0 +/- 0.3 (errors {errors:?})"
            );
        }
    }

    #[test]
    fn missing_sample_is_reported() {
        let order = GeneratingOrder::new(1, 2).unwrap();
        let params = QuasiInterpParams::new(0.25, 3.0, 6.0).unwrap();
        let res = quasi_interpolant(
            params,
            order,
            |m: &[i64]| if m[0] >= 0 { Some(1.0) } else { None },
            &[0.3, -0.45],
        );
        assert!(matches!(res, Err(GenfunError::MissingSample(_))));
    }
}
