//! Special functions underlying the cubature kernels.
//!
//! Provides physicists' Hermite polynomials, generalized Laguerre polynomials
//! and the complementary error function together with its scaled variant
//! `erfcx(x) = exp(x^2) erfc(x)`. All routines are pure `f64` and free of
//! allocation, so they are usable from `no_std` builds.
//!
//! The polynomial evaluations use the standard three-term recurrences, which
//! are numerically benign for the small degrees required here (smoothing
//! orders up to `M = 8`, i.e. degrees up to 16). The error functions follow
//! the classical rational minimax approximations over three ranges, keeping
//! the relative error at or below a few units in the last place for
//! `|x| <= 6` and degrading gracefully beyond.

/// Degree of a polynomial in the Hermite/Laguerre families.
pub type PolyDegree = u32;

/// Physicists' Hermite polynomial `H_k(x)`.
///
/// Defined by `H_k(x) = (-1)^k e^{x^2} d^k/dx^k e^{-x^2}` and computed with
/// the recurrence `H_{k+1}(x) = 2x H_k(x) - 2k H_{k-1}(x)`.
#[inline]
pub fn hermite(k: PolyDegree, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for i in 1..k {
        let next = 2.0 * x * cur - 2.0 * (i as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^{(gamma)}(x)` for real `gamma > -1`.
///
/// Computed with the recurrence
/// `(k+1) L_{k+1}^{(gamma)} = (2k + 1 + gamma - x) L_k^{(gamma)} - (k + gamma) L_{k-1}^{(gamma)}`.
#[inline]
pub fn laguerre(k: PolyDegree, gamma: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + gamma - x;
    for i in 1..k {
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + gamma - x) * cur - (i + gamma) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

// Rational coefficients for the three-range complementary error function
// (minimax fits over [0, 0.46875], [0.46875, 4] and the 1/x^2 tail).
const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERFC_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERFC_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERFCX_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERFCX_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `erf(x)` on the central range `|x| <= 0.46875`.
#[inline]
fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut num = ERF_A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + ERF_A[i]) * z;
        den = (den + ERF_B[i]) * z;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

/// `erfcx(y)` for `0.46875 <= y <= 4`.
#[inline]
fn erfcx_mid(y: f64) -> f64 {
    let mut num = ERFC_C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + ERFC_C[i]) * y;
        den = (den + ERFC_D[i]) * y;
    }
    (num + ERFC_C[7]) / (den + ERFC_D[7])
}

/// `erfcx(y)` for `y >= 4` via the asymptotic rational fit in `1/y^2`.
#[inline]
fn erfcx_tail(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = ERFCX_P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + ERFCX_P[i]) * z;
        den = (den + ERFCX_Q[i]) * z;
    }
    let r = z * (num + ERFCX_P[4]) / (den + ERFCX_Q[4]);
    (INV_SQRT_PI - r) / y
}

/// `exp(-y^2)` with the argument split so the result keeps full relative
/// accuracy (a plain `exp(-y*y)` loses up to `y^2` ulps).
#[inline]
fn exp_neg_square(y: f64) -> f64 {
    let ysq = libm::trunc(y * 16.0) / 16.0;
    let del = (y - ysq) * (y + ysq);
    libm::exp(-ysq * ysq) * libm::exp(-del)
}

/// Complementary error function `erfc(x) = 1 - erf(x)`.
///
/// Relative error stays at the level of a few ulp for `|x| <= 6`; for large
/// positive arguments the result underflows cleanly to `0` (near
/// `x ~ 26.5`), and for large negative arguments it saturates at `2`.
pub fn erfc(x: f64) -> f64 {
    let y = libm::fabs(x);
    let res = if y <= 0.46875 {
        return 1.0 - erf_small(x);
    } else if y <= 4.0 {
        exp_neg_square(y) * erfcx_mid(y)
    } else if y < 26.6 {
        exp_neg_square(y) * erfcx_tail(y)
    } else {
        0.0
    };
    if x < 0.0 {
        2.0 - res
    } else {
        res
    }
}

/// Scaled complementary error function `erfcx(x) = exp(x^2) erfc(x)`.
///
/// Well-behaved for large positive `x` (tends to `1/(x sqrt(pi))` without
/// underflow). For negative `x` it grows like `2 exp(x^2)` and overflows to
/// `+inf` near `x ~ -26.6`.
pub fn erfcx(x: f64) -> f64 {
    if x >= 0.0 {
        if x <= 0.46875 {
            libm::exp(x * x) * (1.0 - erf_small(x))
        } else if x <= 4.0 {
            erfcx_mid(x)
        } else {
            erfcx_tail(x)
        }
    } else {
        let y = -x;
        let e = libm::exp(x * x);
        if y <= 0.46875 {
            e * (1.0 + erf_small(y))
        } else {
            2.0 * e - erfcx(y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let err = libm::fabs(actual - expected) / libm::fabs(expected).max(f64::MIN_POSITIVE);
        assert!(
            err <= tol,
            "actual {actual:e}, expected {expected:e}, rel err {err:e} > {tol:e}"
        );
    }

    #[test]
    fn hermite_closed_forms() {
        for &x in &[-2.5, -0.7, 0.0, 0.3, 1.9, 4.2] {
            assert_eq!(hermite(0, x), 1.0);
            assert_eq!(hermite(1, x), 2.0 * x);
            assert_rel(hermite(2, x), 4.0 * x * x - 2.0, 1e-15);
            assert_rel(hermite(3, x), 8.0 * x * x * x - 12.0 * x, 1e-14);
            assert_rel(
                hermite(5, x),
                32.0 * libm::pow(x, 5.0) - 160.0 * x * x * x + 120.0 * x,
                1e-13,
            );
        }
    }

    #[test]
    fn hermite_parity() {
        for k in 0..=10 {
            for &x in &[0.25, 1.0, 2.75] {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert_rel(hermite(k, -x), sign * hermite(k, x), 1e-13);
            }
        }
    }

    #[test]
    fn laguerre_closed_forms() {
        for &g in &[-0.5, 0.0, 0.5, 1.0] {
            for &x in &[0.0, 0.4, 1.7, 6.3] {
                assert_eq!(laguerre(0, g, x), 1.0);
                assert_rel(laguerre(1, g, x), 1.0 + g - x, 1e-14);
                let l2 = (2.0 + g) * (1.0 + g) / 2.0 - (2.0 + g) * x + x * x / 2.0;
                assert_rel(laguerre(2, g, x), l2, 1e-13);
            }
        }
    }

    #[test]
    fn laguerre_index_shift_sum() {
        // sum_{j=0}^{M-1} L_j^{(g)}(x) = L_{M-1}^{(g+1)}(x)
        for m in 1..=6u32 {
            for &g in &[-0.5, 0.0, 1.0] {
                for &x in &[0.0, 0.9, 3.3] {
                    let sum: f64 = (0..m).map(|j| laguerre(j, g, x)).sum();
                    assert_rel(sum, laguerre(m - 1, g + 1.0, x), 1e-13);
                }
            }
        }
    }

    #[test]
    fn hermite_laguerre_identity() {
        // H_{2j}(x) = (-1)^j 4^j j! L_j^{(-1/2)}(x^2)
        for j in 0..=4u32 {
            for &x in &[0.0, 0.35, 1.2, 2.6] {
                let mut fact = 1.0;
                for i in 1..=j {
                    fact *= i as f64;
                }
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = sign * libm::pow(4.0, j as f64) * fact * laguerre(j, -0.5, x * x);
                assert_rel(hermite(2 * j, x), rhs, 1e-12);
            }
        }
    }

    #[test]
    fn erfc_reference_values() {
        // Reference values computed with 40-digit arithmetic.
        let cases = [
            (0.0625, 0.9295680222776129),
            (0.25, 0.7236736098317631),
            (0.46, 0.5153446099983203),
            (0.46875, 0.5073865267820620),
            (0.48, 0.4972503293052351),
            (0.5, 0.4795001221869535),
            (1.0, 0.15729920705028513),
            (1.5, 0.033894853524689273),
            (2.0, 0.004677734981047266),
            (3.0, 2.209049699858544e-5),
            (3.9, 3.479224859723177e-8),
            (4.0, 1.5417257900280019e-8),
            (4.5, 1.9661604415428875e-10),
            (5.0, 1.5374597944280349e-12),
            (6.0, 2.1519736712498913e-17),
        ];
        for &(x, want) in &cases {
            assert_rel(erfc(x), want, 1e-15);
        }
        let tail = [
            (8.0, 1.1224297172982927e-29),
            (10.0, 2.0884875837625448e-45),
            (15.0, 7.212994172451207e-100),
            (20.0, 5.395865611607901e-176),
            (25.5, 8.801662690727951e-285),
        ];
        for &(x, want) in &tail {
            assert_rel(erfc(x), want, 1e-13);
        }
        assert_eq!(erfc(27.0), 0.0);
        assert_eq!(erfc(1e9), 0.0);
    }

    #[test]
    fn erfc_negative_and_symmetry() {
        let cases = [
            (-0.25, 1.2763263901682369),
            (-1.0, 1.8427007929497149),
            (-2.0, 1.9953222650189527),
            (-4.0, 1.9999999845827421),
            (-5.5, 1.9999999999999926),
        ];
        for &(x, want) in &cases {
            assert_rel(erfc(x), want, 1e-15);
        }
        for &x in &[0.1, 0.46875, 0.9, 2.2, 3.8, 5.1] {
            let s = erfc(x) + erfc(-x);
            assert_rel(s, 2.0, 1e-15);
        }
        assert_eq!(erfc(-28.0), 2.0);
        assert_eq!(erfc(0.0), 1.0);
    }

    #[test]
    fn erfcx_reference_values() {
        let cases = [
            (0.0625, 0.9332062486492741),
            (0.25, 0.7703465477309967),
            (0.5, 0.6156903441929259),
            (1.0, 0.42758357615580700),
            (2.0, 0.25539567631050574),
            (3.9, 0.14031418160068974),
            (4.0, 0.13699945762506139),
            (5.0, 0.11070463773306863),
            (10.0, 0.056140992743822586),
            (50.0, 0.011281536265323773),
            (1000.0, 5.641893014533877e-4),
            (1e6, 5.641895835474742e-7),
            (-0.25, 1.3586423701047221),
            (-1.0, 5.008980080762283),
            (-2.0, 108.94090438997797),
            (-4.0, 1.7772220904016288e7),
            (-5.5, 2.7443409954929707e13),
        ];
        for &(x, want) in &cases {
            assert_rel(erfcx(x), want, 2e-15);
        }
    }

    #[test]
    fn erfcx_consistency_with_erfc() {
        for &x in &[0.3, 0.46875, 1.1, 2.0, 3.5, 4.7, 5.9] {
            let direct = erfcx(x);
            let via_erfc = libm::exp(x * x) * erfc(x);
            assert_rel(direct, via_erfc, 5e-15);
        }
    }
}
