//! Planar domains, boundary projection and lattice-node classification.
//!
//! The cubature splits the lattice into three classes relative to a domain
//! `Omega`: *interior* nodes farther than `r h sqrt(D)` inside, *strip*
//! nodes within `r h sqrt(D)` of the boundary (on either side), and
//! *excluded* nodes far outside. Strip nodes carry a local boundary frame:
//! the signed distance `rho` to the boundary (negative inside, positive
//! outside, zero on the boundary) and the rotation taking global offsets
//! into coordinates aligned with the inner normal, in which the domain is
//! locally the half-plane `{xi_n > rho}`.

use alloc::vec::Vec;

use crate::cubature::RunParams;

/// Errors reported by the geometry layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryError {
    /// Semi-axes must satisfy `a >= b > 0` and be finite.
    InvalidAxes,
    /// The query point must be finite.
    InvalidPoint,
    /// Every boundary point of a circle is nearest to its center; the
    /// projection is undefined there.
    DegenerateCenter,
    /// The projection iteration failed to reach its tolerance.
    NoConvergence,
}

impl core::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeometryError::InvalidAxes => write!(f, "semi-axes must satisfy a >= b > 0"),
            GeometryError::InvalidPoint => write!(f, "query point must be finite"),
            GeometryError::DegenerateCenter => {
                write!(
                    f,
                    "nearest boundary point is undefined at the center of a circle"
                )
            }
            GeometryError::NoConvergence => {
                write!(f, "boundary projection did not converge")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

/// A smooth bounded planar domain.
pub trait Domain {
    /// Whether `x` lies in the closed domain (boundary included).
    fn contains(&self, x: [f64; 2]) -> bool;

    /// The boundary point nearest to `x`.
    ///
    /// # Errors
    ///
    /// May be undefined at isolated degenerate points (e.g. the center of a
    /// circle).
    fn nearest_boundary_point(&self, x: [f64; 2]) -> Result<[f64; 2], GeometryError>;

    /// Distance from `x` to the boundary. Well-defined everywhere, including
    /// points where the nearest boundary point is not unique.
    fn boundary_distance(&self, x: [f64; 2]) -> f64;

    /// Unit normal at a boundary point `q`, pointing into the domain.
    fn inner_normal(&self, q: [f64; 2]) -> [f64; 2];

    /// Axis-aligned bounding box `(lower corner, upper corner)`.
    fn bounding_box(&self) -> ([f64; 2], [f64; 2]);
}

/// The ellipse `x1^2/a^2 + x2^2/b^2 <= 1` with `a >= b > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseDomain {
    a: f64,
    b: f64,
}

impl EllipseDomain {
    /// Creates the ellipse with semi-axes `a >= b > 0`.
    pub fn new(a: f64, b: f64) -> Result<Self, GeometryError> {
        if !(b > 0.0) || !(a >= b) || !a.is_finite() {
            return Err(GeometryError::InvalidAxes);
        }
        Ok(Self { a, b })
    }

    /// Major semi-axis.
    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Minor semi-axis.
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
}

impl Domain for EllipseDomain {
    #[inline]
    fn contains(&self, x: [f64; 2]) -> bool {
        let u = x[0] / self.a;
        let v = x[1] / self.b;
        u * u + v * v <= 1.0
    }

    fn nearest_boundary_point(&self, x: [f64; 2]) -> Result<[f64; 2], GeometryError> {
        project_to_ellipse(self.a, self.b, x)
    }

    fn boundary_distance(&self, x: [f64; 2]) -> f64 {
        if self.a == self.b {
            // circle: well-defined even at the center
            let r = libm::sqrt(x[0] * x[0] + x[1] * x[1]);
            return libm::fabs(self.a - r);
        }
        // The projection is defined everywhere on a proper ellipse.
        let q = project_to_ellipse(self.a, self.b, x)
            .expect("projection on a non-circular ellipse cannot degenerate");
        let dx = x[0] - q[0];
        let dy = x[1] - q[1];
        libm::sqrt(dx * dx + dy * dy)
    }

    fn inner_normal(&self, q: [f64; 2]) -> [f64; 2] {
        // The outward direction is the gradient of x1^2/a^2 + x2^2/b^2.
        let gx = q[0] / (self.a * self.a);
        let gy = q[1] / (self.b * self.b);
        let norm = libm::sqrt(gx * gx + gy * gy);
        [-gx / norm, -gy / norm]
    }

    fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        ([-self.a, -self.b], [self.a, self.b])
    }
}

/// Nearest point on the ellipse `x1^2/a^2 + x2^2/b^2 = 1` to `p`.
///
/// Reduces to the first quadrant, handles the axis cases directly (on the
/// major axis the nearest point leaves the axis inside the evolute), and
/// otherwise solves
///
/// ```text
/// g(s) = (a p1 / (s + a^2))^2 + (b p2 / (s + b^2))^2 = 1
/// ```
///
/// for the unique root `s* in [-b^2 + b p2, -b^2 + sqrt((a p1)^2 + (b p2)^2)]`
/// by a bisection-safeguarded Newton iteration (relative step tolerance
/// `1e-14`, at most 60 iterations); the projection is then
/// `(a^2 p1/(s*+a^2), b^2 p2/(s*+b^2))`.
///
/// For a point on the major axis the two symmetric off-axis projections are
/// equidistant; the one with non-negative `x2` is returned.
///
/// # Errors
///
/// Rejects invalid axes, non-finite points, and the center of a circle
/// (`a == b`), where every boundary point is nearest.
pub fn project_to_ellipse(a: f64, b: f64, p: [f64; 2]) -> Result<[f64; 2], GeometryError> {
    if !(b > 0.0) || !(a >= b) || !a.is_finite() {
        return Err(GeometryError::InvalidAxes);
    }
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(GeometryError::InvalidPoint);
    }
    let p1 = libm::fabs(p[0]);
    let p2 = libm::fabs(p[1]);
    let sx = if p[0] < 0.0 { -1.0 } else { 1.0 };
    let sy = if p[1] < 0.0 { -1.0 } else { 1.0 };

    if a == b {
        let r = libm::sqrt(p1 * p1 + p2 * p2);
        if r == 0.0 {
            return Err(GeometryError::DegenerateCenter);
        }
        let scale = a / r;
        return Ok([p[0] * scale, p[1] * scale]);
    }

    if p1 == 0.0 {
        // On the minor axis the nearest point is the minor vertex.
        return Ok([0.0, sy * b]);
    }
    if p2 == 0.0 {
        // On the major axis the projection leaves the axis inside the
        // evolute cusp |x1| < (a^2 - b^2)/a.
        let cusp = (a * a - b * b) / a;
        if p1 >= cusp {
            return Ok([sx * a, 0.0]);
        }
        let qx = a * a * p1 / (a * a - b * b);
        let qy = b * libm::sqrt(1.0 - (qx / a) * (qx / a));
        return Ok([sx * qx, qy]);
    }

    let ap1 = a * p1;
    let bp2 = b * p2;
    let mut lo = -b * b + bp2;
    let mut hi = -b * b + libm::sqrt(ap1 * ap1 + bp2 * bp2);
    let g = |s: f64| {
        let u = ap1 / (s + a * a);
        let v = bp2 / (s + b * b);
        u * u + v * v - 1.0
    };
    let mut s = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..60 {
        let u = ap1 / (s + a * a);
        let v = bp2 / (s + b * b);
        let gs = u * u + v * v - 1.0;
        if gs > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let dg = -2.0 * (u * u / (s + a * a) + v * v / (s + b * b));
        let mut next = s - gs / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = libm::fabs(next - s);
        s = next;
        if step <= 1e-14 * libm::fabs(s).max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged && libm::fabs(g(s)) > 1e-11 {
        return Err(GeometryError::NoConvergence);
    }
    Ok([sx * a * a * p1 / (s + a * a), sy * b * b * p2 / (s + b * b)])
}

/// Local boundary frame of a lattice node near the boundary.
///
/// `rho` is the signed distance to the boundary (negative inside the
/// domain, zero on the boundary, positive outside), and `nu` the unit inner
/// normal at the nearest boundary point. In the rotated coordinates
/// `xi = omega^T (y - hm)`, with `omega = [tau | nu]` and the tangent
/// `tau = (nu_2, -nu_1)` chosen so that `det(omega) = +1`, the domain is
/// locally the half-plane `{xi_2 > rho}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    /// Signed distance to the boundary; `|rho| <= r h sqrt(D)` for strip nodes.
    pub rho: f64,
    /// Unit inner normal at the nearest boundary point.
    pub nu: [f64; 2],
}

impl LocalFrame {
    /// Tangential unit vector `tau = (nu_2, -nu_1)`.
    #[inline]
    pub fn tau(&self) -> [f64; 2] {
        [self.nu[1], -self.nu[0]]
    }

    /// Rotation `omega` with columns `(tau, nu)`; `det(omega) = +1`.
    #[inline]
    pub fn omega(&self) -> [[f64; 2]; 2] {
        [[self.nu[1], self.nu[0]], [-self.nu[0], self.nu[1]]]
    }

    /// Applies `omega^{-1} = omega^T` to a global offset, returning
    /// `(tangential, normal)` components.
    #[inline]
    pub fn to_local(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.nu[1] * v[0] - self.nu[0] * v[1],
            self.nu[0] * v[0] + self.nu[1] * v[1],
        ]
    }
}

/// Builds the local boundary frame of a node.
///
/// A node equidistant from the entire boundary (the disk's center, on very
/// coarse lattices with wide strips) has no unique nearest point; every
/// tangent half-plane is equally valid there, and the frame of the
/// boundary point straight above the node is used so the choice is
/// deterministic.
///
/// # Errors
///
/// Propagates projection failures (non-convergence).
pub fn local_frame<D: Domain + ?Sized>(
    dom: &D,
    node: [f64; 2],
) -> Result<LocalFrame, GeometryError> {
    let q = match dom.nearest_boundary_point(node) {
        Ok(q) => q,
        Err(GeometryError::DegenerateCenter) => {
            let d = dom.boundary_distance(node);
            [node[0], node[1] + d]
        }
        Err(e) => return Err(e),
    };
    let dx = node[0] - q[0];
    let dy = node[1] - q[1];
    let d = libm::sqrt(dx * dx + dy * dy);
    let rho = if d == 0.0 {
        0.0
    } else if dom.contains(node) {
        -d
    } else {
        d
    };
    Ok(LocalFrame {
        rho,
        nu: dom.inner_normal(q),
    })
}

/// A maximal run of consecutive interior nodes within one lattice row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorRun {
    /// Row index (second lattice coordinate).
    pub m2: i64,
    /// First column index of the run.
    pub m1_start: i64,
    /// Last column index of the run (inclusive).
    pub m1_end: i64,
}

/// A boundary-strip node together with its local frame.
#[derive(Debug, Clone, PartialEq)]
pub struct StripNode {
    /// Lattice index of the node.
    pub m: [i64; 2],
    /// Local boundary frame at the node.
    pub frame: LocalFrame,
}

/// Classified lattice nodes for one step size.
///
/// Interior nodes are stored as per-row runs (they are contiguous within a
/// row for convex domains, and runs cost no generality otherwise); strip
/// nodes are stored individually with their frames. Both sequences are
/// ordered row-major, i.e. lexicographically by `(m2, m1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    interior_runs: Vec<InteriorRun>,
    strip: Vec<StripNode>,
    interior_count: usize,
    excluded_count: usize,
}

impl NodeSet {
    /// Per-row runs of interior nodes.
    #[inline]
    pub fn interior_runs(&self) -> &[InteriorRun] {
        &self.interior_runs
    }

    /// Strip nodes with their local frames.
    #[inline]
    pub fn strip(&self) -> &[StripNode] {
        &self.strip
    }

    /// Number of interior nodes.
    #[inline]
    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    /// Number of strip nodes.
    #[inline]
    pub fn strip_count(&self) -> usize {
        self.strip.len()
    }

    /// Number of index-box nodes excluded as far outside the domain.
    #[inline]
    pub fn excluded_count(&self) -> usize {
        self.excluded_count
    }

    /// Iterates interior node indices in row-major order.
    pub fn interior_nodes(&self) -> impl Iterator<Item = [i64; 2]> + '_ {
        self.interior_runs
            .iter()
            .flat_map(|run| (run.m1_start..=run.m1_end).map(move |m1| [m1, run.m2]))
    }
}

/// Classifies every lattice node of the bounding box of `Omega` inflated by
/// the strip half-width `delta = r h sqrt(D)`.
///
/// A node `hm` is *interior* when it lies in the closed domain at boundary
/// distance `>= delta` (a node exactly at distance `delta` inside counts as
/// interior), *strip* when its boundary distance is `< delta` — or exactly
/// `delta` outside the domain, so that no node within reach of the domain is
/// ever dropped — and *excluded* otherwise.
///
/// # Errors
///
/// Propagates frame-construction failures for strip nodes.
pub fn classify_nodes<D: Domain + ?Sized>(
    dom: &D,
    params: &RunParams,
) -> Result<NodeSet, GeometryError> {
    let h = params.h();
    let delta = params.strip_halfwidth();
    let (lo, hi) = dom.bounding_box();
    let m1_lo = libm::floor((lo[0] - delta) / h) as i64;
    let m1_hi = libm::ceil((hi[0] + delta) / h) as i64;
    let m2_lo = libm::floor((lo[1] - delta) / h) as i64;
    let m2_hi = libm::ceil((hi[1] + delta) / h) as i64;

    let mut runs = Vec::new();
    let mut strip = Vec::new();
    let mut interior_count = 0usize;
    let mut excluded_count = 0usize;

    for m2 in m2_lo..=m2_hi {
        let x2 = h * m2 as f64;
        let mut open: Option<InteriorRun> = None;
        for m1 in m1_lo..=m1_hi {
            let x1 = h * m1 as f64;
            let node = [x1, x2];
            let inside = dom.contains(node);
            let dist = dom.boundary_distance(node);
            let interior = inside && dist >= delta;
            if interior {
                interior_count += 1;
                match open.as_mut() {
                    Some(run) if run.m1_end + 1 == m1 => run.m1_end = m1,
                    _ => {
                        if let Some(run) = open.take() {
                            runs.push(run);
                        }
                        open = Some(InteriorRun {
                            m2,
                            m1_start: m1,
                            m1_end: m1,
                        });
                    }
                }
            } else {
                if dist < delta || (!inside && dist == delta) {
                    strip.push(StripNode {
                        m: [m1, m2],
                        frame: local_frame(dom, node)?,
                    });
                } else {
                    excluded_count += 1;
                }
            }
        }
        if let Some(run) = open.take() {
            runs.push(run);
        }
    }

    Ok(NodeSet {
        interior_runs: runs,
        strip,
        interior_count,
        excluded_count,
    })
}
