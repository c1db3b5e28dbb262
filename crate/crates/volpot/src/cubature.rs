//! Semi-analytic cubature of the volume potential over a planar domain.
//!
//! The potential of a density `f` over `Omega` is approximated by replacing
//! `f` with its Gaussian-Laguerre quasi-interpolant on the lattice `h Z^2`
//! and integrating the generating function against the kernel analytically.
//! Interior nodes (farther than `delta = r h sqrt(D)` from the boundary)
//! contribute free-space coefficients `a(|k - m|^2)`; nodes in the boundary
//! strip contribute half-space coefficients `b` that integrate the
//! generating function over the tangential half-plane at the node's nearest
//! boundary point, which corrects the quasi-interpolant's overshoot across
//! the boundary. The result at an evaluation point `x` is
//!
//! ```text
//! u(x) ~ h^2/pi ( sum_int f(hm) a + sum_strip f(hm) b ).
//! ```
//!
//! Both coefficient families are one-dimensional integrals evaluated with a
//! shared double-exponential rule; the interior family depends only on the
//! integer squared distance `|k - m|^2` and is cached.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::densities::Density;
use crate::geometry::{classify_nodes, Domain, GeometryError, NodeSet};
use crate::kernels::ScaledPoint;
use crate::quadrature::{
    a_coeff_scaled, b_coeff_scaled, QuadratureError, QuadratureRule, RuleSettings,
};

/// Errors reported by the cubature layer.
#[derive(Debug, Clone, PartialEq)]
pub enum CubatureError {
    /// A run parameter is out of range.
    InvalidParams(&'static str),
    /// Node classification or frame construction failed.
    Geometry(GeometryError),
    /// The quadrature rule could not be built.
    Quadrature(QuadratureError),
    /// A study point does not lie on the lattice of some step size.
    OffGridPoint {
        /// The offending point.
        point: [f64; 2],
        /// The step size whose lattice misses it.
        h: f64,
    },
    /// The density has no closed-form potential to compare against.
    NoExactPotential,
}

impl core::fmt::Display for CubatureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CubatureError::InvalidParams(what) => write!(f, "invalid parameter: {what}"),
            CubatureError::Geometry(e) => write!(f, "geometry: {e}"),
            CubatureError::Quadrature(e) => write!(f, "quadrature: {e}"),
            CubatureError::OffGridPoint { point, h } => write!(
                f,
                "point ({}, {}) is not a lattice point of step {h}",
                point[0], point[1]
            ),
            CubatureError::NoExactPotential => {
                write!(f, "density has no closed-form potential")
            }
        }
    }
}

impl core::error::Error for CubatureError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            CubatureError::Geometry(e) => Some(e),
            CubatureError::Quadrature(e) => Some(e),
            _ => None,
        }
    }
}

impl From<GeometryError> for CubatureError {
    fn from(e: GeometryError) -> Self {
        CubatureError::Geometry(e)
    }
}

impl From<QuadratureError> for CubatureError {
    fn from(e: QuadratureError) -> Self {
        CubatureError::Quadrature(e)
    }
}

/// Parameters of one cubature run.
///
/// `h` is the lattice step, `d` the Gaussian width parameter, `m` the
/// generating-function order (approximation order `2m`), `r` the support
/// radius of the quasi-interpolant in units of `h sqrt(D)`, and `lambda2`
/// the (positive) coefficient `lambda^2` of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    h: f64,
    d: f64,
    m: u32,
    r: f64,
    lambda2: f64,
}

impl RunParams {
    /// Validates and stores run parameters.
    ///
    /// # Errors
    ///
    /// Requires `h > 0`, `d >= 1`, `m` in `1..=3`, `r >= 1`, and
    /// `lambda2 > 0`, all finite.
    pub fn new(h: f64, d: f64, m: u32, r: f64, lambda2: f64) -> Result<Self, CubatureError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(CubatureError::InvalidParams("h must be positive"));
        }
        if !(d >= 1.0) || !d.is_finite() {
            return Err(CubatureError::InvalidParams("d must be at least 1"));
        }
        if !(1..=3).contains(&m) {
            return Err(CubatureError::InvalidParams("m must be 1, 2, or 3"));
        }
        if !(r >= 1.0) || !r.is_finite() {
            return Err(CubatureError::InvalidParams("r must be at least 1"));
        }
        if !(lambda2 > 0.0) || !lambda2.is_finite() {
            return Err(CubatureError::InvalidParams("lambda2 must be positive"));
        }
        Ok(Self {
            h,
            d,
            m,
            r,
            lambda2,
        })
    }

    /// The same parameters with a different lattice step.
    ///
    /// # Errors
    ///
    /// Rejects a non-positive or non-finite step.
    pub fn with_h(&self, h: f64) -> Result<Self, CubatureError> {
        Self::new(h, self.d, self.m, self.r, self.lambda2)
    }

    /// Lattice step `h`.
    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Width parameter `D`.
    #[inline]
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Generating-function order `M`.
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Support radius `r` of the quasi-interpolant.
    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Operator coefficient `lambda^2`.
    #[inline]
    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    /// `sqrt(D)`.
    #[inline]
    pub fn sqrt_d(&self) -> f64 {
        libm::sqrt(self.d)
    }

    /// Scaled lattice step `h sqrt(D)`.
    #[inline]
    pub fn hsd(&self) -> f64 {
        self.h * self.sqrt_d()
    }

    /// Boundary-strip half-width `delta = r h sqrt(D)`.
    #[inline]
    pub fn strip_halfwidth(&self) -> f64 {
        self.r * self.hsd()
    }

    /// Combined damping coefficient `lambda^2 h^2 D` of the rescaled kernel.
    #[inline]
    pub fn lam2h2d(&self) -> f64 {
        self.lambda2 * self.h * self.h * self.d
    }

    /// Damping rate `lambda^2 h^2 D / 4` of the coefficient integrands.
    #[inline]
    pub fn damping(&self) -> f64 {
        0.25 * self.lam2h2d()
    }

    /// The lattice index of `x` when `x` lies on the lattice `h Z^2`
    /// (within `1e-9` of an integer in index space), `None` otherwise.
    pub fn grid_index(&self, x: [f64; 2]) -> Option<[i64; 2]> {
        let mut k = [0i64; 2];
        for i in 0..2 {
            let s = x[i] / self.h;
            let r = libm::round(s);
            if libm::fabs(s - r) > 1e-9 || libm::fabs(r) > 9.0e15 {
                return None;
            }
            k[i] = r as i64;
        }
        Some(k)
    }
}

/// A computed potential value with optional error information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialResult {
    /// The cubature value.
    pub value: f64,
    /// The closed-form potential, when the density provides one.
    pub exact: Option<f64>,
    /// `|value - exact|`, when the exact potential is known.
    pub abs_error: Option<f64>,
    /// `|value - exact| / |exact|`, when the exact potential is known and
    /// nonzero.
    pub rel_error: Option<f64>,
}

impl PotentialResult {
    fn new(value: f64, exact: Option<f64>) -> Self {
        let abs_error = exact.map(|e| libm::fabs(value - e));
        let rel_error = match (exact, abs_error) {
            (Some(e), Some(a)) if e != 0.0 => Some(a / libm::fabs(e)),
            _ => None,
        };
        Self {
            value,
            exact,
            abs_error,
            rel_error,
        }
    }
}

/// Evaluates the volume potential of one density over one domain at a fixed
/// lattice step.
///
/// Construction classifies the lattice nodes and builds the
/// double-exponential rule; evaluation then costs one pass over the nodes
/// per point. Interior coefficients depend only on the integer squared
/// distance to the evaluation point and are cached across points; strip
/// coefficients depend on the local boundary frame of their node and admit
/// no such reuse, so they are always computed directly.
pub struct PotentialEvaluator<'a, F: Density + ?Sized> {
    density: &'a F,
    params: RunParams,
    rule: QuadratureRule,
    nodes: NodeSet,
    a_cache: HashMap<i64, f64>,
    cache_enabled: bool,
}

impl<'a, F: Density + ?Sized> PotentialEvaluator<'a, F> {
    /// Builds an evaluator: classifies the lattice against `domain` and
    /// constructs the rule from `settings` with the run's damping rate.
    ///
    /// # Errors
    ///
    /// Propagates rule-window and node-classification failures.
    pub fn new<D: Domain + ?Sized>(
        domain: &D,
        density: &'a F,
        params: RunParams,
        settings: &RuleSettings,
    ) -> Result<Self, CubatureError> {
        let rule = settings.build(params.damping())?;
        Self::with_rule(domain, density, params, rule)
    }

    /// Builds an evaluator around an existing rule.
    ///
    /// # Errors
    ///
    /// Rejects a rule whose damping differs from the run's damping rate;
    /// propagates node-classification failures.
    pub fn with_rule<D: Domain + ?Sized>(
        domain: &D,
        density: &'a F,
        params: RunParams,
        rule: QuadratureRule,
    ) -> Result<Self, CubatureError> {
        if rule.damping() != params.damping() {
            return Err(CubatureError::InvalidParams(
                "rule damping does not match the run",
            ));
        }
        let nodes = classify_nodes(domain, &params)?;
        Ok(Self {
            density,
            params,
            rule,
            nodes,
            a_cache: HashMap::new(),
            cache_enabled: true,
        })
    }

    /// The run parameters.
    #[inline]
    pub fn params(&self) -> &RunParams {
        &self.params
    }

    /// The classified lattice nodes.
    #[inline]
    pub fn node_set(&self) -> &NodeSet {
        &self.nodes
    }

    /// The quadrature rule in use.
    #[inline]
    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// Enables or disables the interior-coefficient cache. Cached and
    /// uncached evaluation produce identical values; the cache only avoids
    /// recomputing integrals.
    pub fn set_cache_enabled(&mut self, enabled: bool) {
        self.cache_enabled = enabled;
    }

    /// Number of cached interior coefficients.
    #[inline]
    pub fn cache_len(&self) -> usize {
        self.a_cache.len()
    }

    /// Potential at the lattice point `h k`.
    pub fn potential_at_grid(&mut self, k: [i64; 2]) -> PotentialResult {
        let h = self.params.h;
        let d = self.params.d;
        let m_order = self.params.m;
        let lam2h2d = self.params.lam2h2d();
        let sqrt_d = self.params.sqrt_d();
        let hsd = self.params.hsd();

        let mut interior = 0.0;
        for run in self.nodes.interior_runs() {
            let dk2 = k[1] - run.m2;
            let x2 = h * run.m2 as f64;
            for m1 in run.m1_start..=run.m1_end {
                let dk1 = k[0] - m1;
                let ksq = dk1 * dk1 + dk2 * dk2;
                let a = if self.cache_enabled {
                    match self.a_cache.get(&ksq) {
                        Some(&v) => v,
                        None => {
                            let v = a_coeff_scaled(m_order, 2, ksq as f64 / d, lam2h2d, &self.rule);
                            self.a_cache.insert(ksq, v);
                            v
                        }
                    }
                } else {
                    a_coeff_scaled(m_order, 2, ksq as f64 / d, lam2h2d, &self.rule)
                };
                interior += self.density.value([h * m1 as f64, x2]) * a;
            }
        }

        let mut strip = 0.0;
        for node in self.nodes.strip() {
            let dk = [k[0] - node.m[0], k[1] - node.m[1]];
            let ksq = dk[0] * dk[0] + dk[1] * dk[1];
            let dkf = [dk[0] as f64, dk[1] as f64];
            let xs = ScaledPoint {
                normsq: ksq as f64 / d,
                xn: (node.frame.nu[0] * dkf[0] + node.frame.nu[1] * dkf[1]) / sqrt_d,
            };
            let b = b_coeff_scaled(m_order, 2, xs, node.frame.rho / hsd, lam2h2d, &self.rule);
            strip += self
                .density
                .value([h * node.m[0] as f64, h * node.m[1] as f64])
                * b;
        }

        let x = [h * k[0] as f64, h * k[1] as f64];
        let value = h * h / core::f64::consts::PI * (interior + strip);
        PotentialResult::new(value, self.density.exact_potential(x))
    }

    /// Potential at an arbitrary point.
    ///
    /// For a point that lies exactly on the lattice (and a step that is a
    /// power of two, so the offsets scale exactly), this reproduces
    /// [`Self::potential_at_grid`] bitwise: the scaled arguments of every
    /// coefficient integral are computed from the same floating-point
    /// quantities in the same order.
    pub fn potential_at_point(&mut self, x: [f64; 2]) -> PotentialResult {
        let h = self.params.h;
        let d = self.params.d;
        let m_order = self.params.m;
        let lam2h2d = self.params.lam2h2d();
        let sqrt_d = self.params.sqrt_d();
        let hsd = self.params.hsd();
        let h2d = h * h * d;

        let mut interior = 0.0;
        for run in self.nodes.interior_runs() {
            let dy2 = x[1] - h * run.m2 as f64;
            let x2 = h * run.m2 as f64;
            for m1 in run.m1_start..=run.m1_end {
                let dy1 = x[0] - h * m1 as f64;
                let normsq = (dy1 * dy1 + dy2 * dy2) / h2d;
                let a = a_coeff_scaled(m_order, 2, normsq, lam2h2d, &self.rule);
                interior += self.density.value([h * m1 as f64, x2]) * a;
            }
        }

        let mut strip = 0.0;
        for node in self.nodes.strip() {
            let dy = [x[0] - h * node.m[0] as f64, x[1] - h * node.m[1] as f64];
            let xs = ScaledPoint {
                normsq: (dy[0] * dy[0] + dy[1] * dy[1]) / h2d,
                xn: (node.frame.nu[0] * dy[0] + node.frame.nu[1] * dy[1]) / (h * sqrt_d),
            };
            let b = b_coeff_scaled(m_order, 2, xs, node.frame.rho / hsd, lam2h2d, &self.rule);
            strip += self
                .density
                .value([h * node.m[0] as f64, h * node.m[1] as f64])
                * b;
        }

        let value = h * h / core::f64::consts::PI * (interior + strip);
        PotentialResult::new(value, self.density.exact_potential(x))
    }

    /// Potential at `x`, routed through the lattice path when `x` lies on
    /// the lattice (so repeated coefficients are cached) and through the
    /// direct path otherwise.
    pub fn evaluate(&mut self, x: [f64; 2]) -> PotentialResult {
        match self.params.grid_index(x) {
            Some(k) => self.potential_at_grid(k),
            None => self.potential_at_point(x),
        }
    }
}

/// One row of a convergence study: the potential at one point for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// Lattice step of this row.
    pub h: f64,
    /// Evaluation point.
    pub point: [f64; 2],
    /// Cubature value.
    pub value: f64,
    /// Comparison target: the closed-form potential, or the fine-step
    /// reference value in a reference study.
    pub reference: f64,
    /// Error against the target: relative when the target is nonzero,
    /// absolute otherwise (and always absolute in a reference study).
    pub error: f64,
    /// Observed rate `log(e_prev / e) / log(h_prev / h)` against the
    /// previous step at the same point; `None` on the first step.
    pub rate: Option<f64>,
}

fn study_rows(
    values: &[Vec<f64>],
    references: &[f64],
    relative: bool,
    points: &[[f64; 2]],
    h_list: &[f64],
) -> Vec<ConvergenceRow> {
    let mut rows = Vec::with_capacity(h_list.len() * points.len());
    for (li, &h) in h_list.iter().enumerate() {
        for (pi, &point) in points.iter().enumerate() {
            let reference = references[pi];
            let mut error = libm::fabs(values[li][pi] - reference);
            if relative && reference != 0.0 {
                error /= libm::fabs(reference);
            }
            let rate = if li > 0 {
                let prev: &ConvergenceRow = &rows[(li - 1) * points.len() + pi];
                if prev.error > 0.0 && error > 0.0 {
                    Some(libm::log(prev.error / error) / libm::log(h_list[li - 1] / h))
                } else {
                    None
                }
            } else {
                None
            };
            rows.push(ConvergenceRow {
                h,
                point,
                value: values[li][pi],
                reference,
                error,
                rate,
            });
        }
    }
    rows
}

fn study_values<D: Domain + ?Sized, F: Density + ?Sized>(
    domain: &D,
    density: &F,
    points: &[[f64; 2]],
    h_list: &[f64],
    template: &RunParams,
    settings: &RuleSettings,
) -> Result<Vec<Vec<f64>>, CubatureError> {
    let mut values = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let params = template.with_h(h)?;
        let mut eval = PotentialEvaluator::new(domain, density, params, settings)?;
        let mut level = Vec::with_capacity(points.len());
        for &point in points {
            let k = params
                .grid_index(point)
                .ok_or(CubatureError::OffGridPoint { point, h })?;
            level.push(eval.potential_at_grid(k).value);
        }
        values.push(level);
    }
    Ok(values)
}

/// Convergence study against the closed-form potential.
///
/// Evaluates the potential at every point for every step in `h_list`
/// (steps are taken in the given order; rates compare consecutive steps)
/// and reports errors relative to the exact potential. Every point must lie
/// on the lattice of every step.
///
/// # Errors
///
/// Rejects empty inputs, off-lattice points, and densities without a
/// closed-form potential; propagates evaluator-construction failures.
pub fn convergence_study<D: Domain + ?Sized, F: Density + ?Sized>(
    domain: &D,
    density: &F,
    points: &[[f64; 2]],
    h_list: &[f64],
    template: &RunParams,
    settings: &RuleSettings,
) -> Result<Vec<ConvergenceRow>, CubatureError> {
    if points.is_empty() || h_list.is_empty() {
        return Err(CubatureError::InvalidParams(
            "study needs at least one point and one step",
        ));
    }
    let references: Vec<f64> = points
        .iter()
        .map(|&p| {
            density
                .exact_potential(p)
                .ok_or(CubatureError::NoExactPotential)
        })
        .collect::<Result<_, _>>()?;
    let values = study_values(domain, density, points, h_list, template, settings)?;
    Ok(study_rows(&values, &references, true, points, h_list))
}

/// Convergence study against a fine-step reference solution, for densities
/// without a closed-form potential.
///
/// The potential is first computed at the reference step `h_ref`, which
/// must be strictly smaller than every study step; errors are then the
/// absolute differences from the reference values. With a reference a few
/// halvings below the finest study step, the reference's own error biases
/// the observed rates only mildly.
///
/// # Errors
///
/// Rejects empty inputs, off-lattice points, and a reference step that is
/// not below all study steps; propagates evaluator-construction failures.
pub fn convergence_study_vs_reference<D: Domain + ?Sized, F: Density + ?Sized>(
    domain: &D,
    density: &F,
    points: &[[f64; 2]],
    h_list: &[f64],
    h_ref: f64,
    template: &RunParams,
    settings: &RuleSettings,
) -> Result<Vec<ConvergenceRow>, CubatureError> {
    if points.is_empty() || h_list.is_empty() {
        return Err(CubatureError::InvalidParams(
            "study needs at least one point and one step",
        ));
    }
    if !h_list.iter().all(|&h| h_ref < h) {
        return Err(CubatureError::InvalidParams(
            "reference step must be smaller than every study step",
        ));
    }
    let reference_values = study_values(domain, density, points, &[h_ref], template, settings)?;
    let values = study_values(domain, density, points, h_list, template, settings)?;
    Ok(study_rows(
        &values,
        &reference_values[0],
        false,
        points,
        h_list,
    ))
}
