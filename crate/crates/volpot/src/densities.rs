//! Built-in densities with closed-form potentials for validation.
//!
//! For a density of the form `f = (-Delta + lambda^2) u` where `u` and its
//! gradient vanish on the boundary of `Omega`, the volume potential of
//! `f` restricted to `Omega` is exactly `u` inside the domain and zero
//! outside: the zero extension of `u` is then `C^1` across the boundary and
//! satisfies the same equation distributionally. The two families below are
//! built this way from `w(x) = 1 - x1^2/a^2 - x2^2/b^2`, which vanishes on
//! the ellipse with semi-axes `(a, b)`; `w >= 0` exactly on the closed
//! domain. A third, highly oscillatory density has no closed-form potential
//! and is used for self-convergence checks.
//!
//! `value` evaluates the globally smooth formula, so it extends the density
//! beyond the boundary; the cubature relies on this when it samples near-
//! boundary nodes slightly outside the domain.

use crate::geometry::EllipseDomain;

/// A source density, optionally with a known exact potential.
pub trait Density {
    /// The density value at `x` (smooth extension beyond the domain).
    fn value(&self, x: [f64; 2]) -> f64;

    /// The exact volume potential at `x`, when known in closed form; it is
    /// zero outside the closed domain.
    fn exact_potential(&self, _x: [f64; 2]) -> Option<f64> {
        None
    }
}

impl<T: Density + ?Sized> Density for &T {
    fn value(&self, x: [f64; 2]) -> f64 {
        (**self).value(x)
    }

    fn exact_potential(&self, x: [f64; 2]) -> Option<f64> {
        (**self).exact_potential(x)
    }
}

#[derive(Debug, Clone, Copy)]
struct EllipseWeight {
    a: f64,
    b: f64,
}

impl EllipseWeight {
    #[inline]
    fn w(&self, x: [f64; 2]) -> f64 {
        1.0 - (x[0] / self.a) * (x[0] / self.a) - (x[1] / self.b) * (x[1] / self.b)
    }

    /// `|grad w|^2 = 4 x1^2/a^4 + 4 x2^2/b^4`.
    #[inline]
    fn grad_sq(&self, x: [f64; 2]) -> f64 {
        let a2 = self.a * self.a;
        let b2 = self.b * self.b;
        4.0 * x[0] * x[0] / (a2 * a2) + 4.0 * x[1] * x[1] / (b2 * b2)
    }

    /// `Delta w = -2/a^2 - 2/b^2`.
    #[inline]
    fn laplacian(&self) -> f64 {
        -2.0 / (self.a * self.a) - 2.0 / (self.b * self.b)
    }
}

/// Density whose exact potential is `sin(w^2)` inside the ellipse.
#[derive(Debug, Clone, Copy)]
pub struct DensityF {
    weight: EllipseWeight,
    lambda2: f64,
}

/// Creates [`DensityF`] for the given ellipse.
///
/// # Panics
///
/// Panics unless `lambda2` is finite and positive.
pub fn density_f(dom: &EllipseDomain, lambda2: f64) -> DensityF {
    assert!(
        lambda2.is_finite() && lambda2 > 0.0,
        "lambda2 must be finite and positive"
    );
    DensityF {
        weight: EllipseWeight {
            a: dom.a(),
            b: dom.b(),
        },
        lambda2,
    }
}

impl Density for DensityF {
    fn value(&self, x: [f64; 2]) -> f64 {
        // u = sin(w^2):
        // Delta u = -4 w^2 sin(w^2) |grad w|^2 + 2 cos(w^2) |grad w|^2
        //           + 2 w cos(w^2) Delta w
        let w = self.weight.w(x);
        let gsq = self.weight.grad_sq(x);
        let lw = self.weight.laplacian();
        let sw = libm::sin(w * w);
        let cw = libm::cos(w * w);
        let lap_u = -4.0 * w * w * sw * gsq + 2.0 * cw * gsq + 2.0 * w * cw * lw;
        -lap_u + self.lambda2 * sw
    }

    fn exact_potential(&self, x: [f64; 2]) -> Option<f64> {
        let w = self.weight.w(x);
        Some(if w >= 0.0 { libm::sin(w * w) } else { 0.0 })
    }
}

/// Density whose exact potential is `w^2 / (1 + |x|^2)` inside the ellipse.
#[derive(Debug, Clone, Copy)]
pub struct DensityG {
    weight: EllipseWeight,
    lambda2: f64,
}

/// Creates [`DensityG`] for the given ellipse.
///
/// # Panics
///
/// Panics unless `lambda2` is finite and positive.
pub fn density_g(dom: &EllipseDomain, lambda2: f64) -> DensityG {
    assert!(
        lambda2.is_finite() && lambda2 > 0.0,
        "lambda2 must be finite and positive"
    );
    DensityG {
        weight: EllipseWeight {
            a: dom.a(),
            b: dom.b(),
        },
        lambda2,
    }
}

impl Density for DensityG {
    fn value(&self, x: [f64; 2]) -> f64 {
        // u = w^2 / s with s = 1 + |x|^2:
        // Delta u = (2 |grad w|^2 + 2 w Delta w)/s - 4 w (grad w . grad s)/s^2
        //           + w^2 (-4/s^2 + 8 (s - 1)/s^3)
        // using Delta(1/s) = -4/s^2 + 8 |x|^2/s^3 and |x|^2 = s - 1.
        let w = self.weight.w(x);
        let gsq = self.weight.grad_sq(x);
        let lw = self.weight.laplacian();
        let s = 1.0 + x[0] * x[0] + x[1] * x[1];
        let a2 = self.weight.a * self.weight.a;
        let b2 = self.weight.b * self.weight.b;
        let dot = -4.0 * x[0] * x[0] / a2 - 4.0 * x[1] * x[1] / b2;
        let lap_u = (2.0 * gsq + 2.0 * w * lw) / s - 4.0 * w * dot / (s * s)
            + w * w * (-4.0 / (s * s) + 8.0 * (s - 1.0) / (s * s * s));
        -lap_u + self.lambda2 * w * w / s
    }

    fn exact_potential(&self, x: [f64; 2]) -> Option<f64> {
        let w = self.weight.w(x);
        Some(if w >= 0.0 {
            w * w / (1.0 + x[0] * x[0] + x[1] * x[1])
        } else {
            0.0
        })
    }
}

/// Highly oscillatory density `(1800 pi^2 + lambda^2) cos(30 pi x1) cos(30 pi x2)`.
///
/// Its volume potential over a bounded domain has no closed form; studies
/// with this density compare against a fine-step reference solution instead.
#[derive(Debug, Clone, Copy)]
pub struct DensityOscill {
    amplitude: f64,
}

/// Creates [`DensityOscill`].
///
/// # Panics
///
/// Panics unless `lambda2` is finite and positive.
pub fn density_oscill(lambda2: f64) -> DensityOscill {
    assert!(
        lambda2.is_finite() && lambda2 > 0.0,
        "lambda2 must be finite and positive"
    );
    let pi = core::f64::consts::PI;
    DensityOscill {
        amplitude: 1800.0 * pi * pi + lambda2,
    }
}

impl Density for DensityOscill {
    fn value(&self, x: [f64; 2]) -> f64 {
        let pi = core::f64::consts::PI;
        self.amplitude * libm::cos(30.0 * pi * x[0]) * libm::cos(30.0 * pi * x[1])
    }
}
