//! Boundary-condition parameters of the point interaction, the fixed-gamma
//! slice, polar coordinates about the slice singularity and parameter paths.
//!
//! The point interaction at `x = 0` is fixed by four reals through
//!
//! ```text
//! psi'(0+) + alpha psi'(0-) = -beta  psi(0-)
//! psi(0+)  + gamma psi(0-)  = -delta psi'(0-)
//! ```
//!
//! with `alpha gamma - beta delta = 1`. On a slice `gamma = gamma0` the pair
//! `(alpha, beta)` determines `delta = (alpha gamma0 - 1) / beta`, which is
//! indefinite at `(1/gamma0, 0)`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Relative tolerance on `alpha gamma - beta delta = 1`.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Minimal distance a path segment may keep from the singular point.
pub const WINDING_EPS: f64 = 1e-12;

/// The four matching parameters `(alpha, beta, gamma, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BCParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl BCParams {
    /// Validated constructor; rejects non-finite values and constraint violations.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::with_tolerance(alpha, beta, gamma, delta, CONSTRAINT_TOL)
    }

    pub fn with_tolerance(alpha: f64, beta: f64, gamma: f64, delta: f64, tol: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        let p = Self { alpha, beta, gamma, delta };
        let residual = p.constraint_residual();
        if residual.abs() > tol * (alpha * gamma).abs().max(1.0) {
            return Err(Error::ConstraintViolation { residual });
        }
        Ok(p)
    }

    /// The free particle: `psi` and `psi'` continuous at the origin.
    pub fn free() -> Self {
        Self { alpha: -1.0, beta: 0.0, gamma: -1.0, delta: 0.0 }
    }

    /// A textbook delta potential `v delta(x)` for the Hamiltonian `-(1/2) d^2/dx^2`.
    pub fn delta_potential(strength: f64) -> Self {
        Self { alpha: -1.0, beta: -2.0 * strength, gamma: -1.0, delta: 0.0 }
    }

    pub fn constraint_residual(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.delta - 1.0
    }
}

/// Free function form of [`BCParams::new`].
pub fn make_params(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<BCParams> {
    BCParams::new(alpha, beta, gamma, delta)
}

/// A point `(alpha, beta)` on the slice `gamma = gamma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCoords {
    pub gamma0: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SliceCoords {
    pub fn new(gamma0: f64, alpha: f64, beta: f64) -> Result<Self> {
        if gamma0 == 0.0 {
            return Err(Error::InvalidGamma0);
        }
        if !alpha.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        if !beta.is_finite() {
            return Err(Error::NonFinite("beta"));
        }
        Ok(Self { gamma0, alpha, beta })
    }

    /// True exactly at `(1/gamma0, 0)`, where neither `delta` nor the spectrum is defined.
    pub fn is_singular(&self) -> bool {
        self.beta == 0.0 && self.alpha * self.gamma0 - 1.0 == 0.0
    }
}

/// Full parameters of a slice point; fails on the `beta = 0` line.
pub fn from_slice(slice: SliceCoords) -> Result<BCParams> {
    if slice.gamma0 == 0.0 {
        return Err(Error::InvalidGamma0);
    }
    if slice.beta == 0.0 {
        return Err(Error::DegenerateDelta);
    }
    let delta = (slice.alpha * slice.gamma0 - 1.0) / slice.beta;
    BCParams::new(slice.alpha, slice.beta, slice.gamma0, delta)
}

/// Polar coordinates `(rho, theta)` about the singular point of a slice.
///
/// `theta` is kept unreduced so that multi-turn loops stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCoords {
    pub gamma0: f64,
    pub rho: f64,
    pub theta: f64,
}

impl PolarCoords {
    pub fn to_slice(&self) -> SliceCoords {
        // Trig is evaluated on the reduced angle so whole turns map to one point.
        // Rounding residue at quarter turns is snapped to zero.
        let th = self.theta.rem_euclid(TAU);
        let snap = |v: f64| if v.abs() <= 4.0 * f64::EPSILON { 0.0 } else { v };
        SliceCoords {
            gamma0: self.gamma0,
            alpha: 1.0 / self.gamma0 - self.rho * snap(th.sin()),
            beta: self.rho * snap(th.cos()),
        }
    }
}

pub fn from_polar(polar: PolarCoords) -> Result<BCParams> {
    if polar.gamma0 == 0.0 {
        return Err(Error::InvalidGamma0);
    }
    if polar.rho == 0.0 {
        return Err(Error::SingularPoint);
    }
    if !(polar.rho > 0.0) || !polar.theta.is_finite() {
        return Err(Error::InvalidArgument(format!("bad polar coordinates ({}, {})", polar.rho, polar.theta)));
    }
    from_slice(polar.to_slice())
}

pub fn singular_point(gamma0: f64) -> Result<(f64, f64)> {
    if gamma0 == 0.0 {
        return Err(Error::InvalidGamma0);
    }
    Ok((1.0 / gamma0, 0.0))
}

/// Matching conditions in homogeneous form,
///
/// ```text
/// psi'(0+) + alpha psi'(0-) + beta psi(0-) = 0
/// w psi(0+) + (w gamma) psi(0-) + (w delta) psi'(0-) = 0
/// ```
///
/// `w = 1` for full parameters; on a slice `w = beta`, which keeps every
/// coefficient finite across `beta = 0`. Only the singular point itself
/// leaves the second row identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub alpha: f64,
    pub beta: f64,
    pub weight: f64,
    pub weight_gamma: f64,
    pub weight_delta: f64,
}

impl Coupling {
    pub fn from_slice(slice: SliceCoords) -> Result<Self> {
        if slice.gamma0 == 0.0 {
            return Err(Error::InvalidGamma0);
        }
        if slice.is_singular() {
            return Err(Error::SingularPoint);
        }
        Ok(Self {
            alpha: slice.alpha,
            beta: slice.beta,
            weight: slice.beta,
            weight_gamma: slice.beta * slice.gamma0,
            weight_delta: slice.alpha * slice.gamma0 - 1.0,
        })
    }

    /// Recover full parameters where the weight is non-zero.
    pub fn params(&self) -> Option<BCParams> {
        if self.weight == 0.0 {
            return None;
        }
        Some(BCParams {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.weight_gamma / self.weight,
            delta: self.weight_delta / self.weight,
        })
    }
}

impl From<BCParams> for Coupling {
    fn from(p: BCParams) -> Self {
        Self { alpha: p.alpha, beta: p.beta, weight: 1.0, weight_gamma: p.gamma, weight_delta: p.delta }
    }
}

impl TryFrom<SliceCoords> for Coupling {
    type Error = Error;
    fn try_from(s: SliceCoords) -> Result<Self> {
        Coupling::from_slice(s)
    }
}

/// A polygonal path in the `(alpha, beta)` plane of one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPath {
    gamma0: f64,
    points: Vec<(f64, f64)>,
    closed: bool,
}

/// Description of a circle (or several turns of one) in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarLoop {
    pub gamma0: f64,
    pub rho: f64,
    pub theta0: f64,
    /// Signed number of turns; positive runs counterclockwise.
    pub turns: f64,
    pub steps: usize,
    /// Shift of the circle centre away from the singular point.
    pub center_offset: (f64, f64),
}

impl PolarLoop {
    pub fn around_singularity(gamma0: f64, rho: f64, turns: f64, steps: usize) -> Self {
        Self { gamma0, rho, theta0: 0.0, turns, steps, center_offset: (0.0, 0.0) }
    }
}

impl ParameterPath {
    pub fn new(gamma0: f64, points: Vec<(f64, f64)>, closed: bool) -> Result<Self> {
        if gamma0 == 0.0 {
            return Err(Error::InvalidGamma0);
        }
        if points.is_empty() {
            return Err(Error::InvalidPath("no points".into()));
        }
        if points.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidPath("non-finite point".into()));
        }
        if closed && points.first() != points.last() {
            return Err(Error::InvalidPath("closed path must end on its first point".into()));
        }
        let star = (1.0 / gamma0, 0.0);
        if points.contains(&star) {
            return Err(Error::PathThroughSingularity { eps: 0.0 });
        }
        Ok(Self { gamma0, points, closed })
    }

    pub fn open(gamma0: f64, points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(gamma0, points, false)
    }

    pub fn closed(gamma0: f64, points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(gamma0, points, true)
    }

    /// Sample a polar loop; whole-turn loops are closed exactly.
    pub fn polar_loop(spec: PolarLoop) -> Result<Self> {
        if spec.steps == 0 {
            return Err(Error::InvalidPath("steps must be positive".into()));
        }
        if !(spec.rho > 0.0) {
            return Err(Error::InvalidPath("rho must be positive".into()));
        }
        if spec.gamma0 == 0.0 {
            return Err(Error::InvalidGamma0);
        }
        let (da, db) = spec.center_offset;
        let mut points: Vec<(f64, f64)> = (0..=spec.steps)
            .map(|j| {
                let theta = spec.theta0 + TAU * spec.turns * j as f64 / spec.steps as f64;
                let s = PolarCoords { gamma0: spec.gamma0, rho: spec.rho, theta }.to_slice();
                (s.alpha + da, s.beta + db)
            })
            .collect();
        let closed = spec.turns.fract() == 0.0;
        if closed {
            let first = points[0];
            *points.last_mut().unwrap() = first;
        }
        Self::new(spec.gamma0, points, closed)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// Linear interpolation at `t` in `[0, 1]`, uniform in segment index.
    pub fn point_at(&self, t: f64) -> (f64, f64) {
        let n = self.segments();
        if n == 0 {
            return self.points[0];
        }
        let u = (t.clamp(0.0, 1.0) * n as f64).min(n as f64);
        let i = (u.floor() as usize).min(n - 1);
        let f = u - i as f64;
        let (a0, b0) = self.points[i];
        let (a1, b1) = self.points[i + 1];
        if f == 0.0 {
            return (a0, b0);
        }
        if f == 1.0 {
            return (a1, b1);
        }
        (a0 + f * (a1 - a0), b0 + f * (b1 - b0))
    }

    pub fn slice_at(&self, t: f64) -> SliceCoords {
        let (alpha, beta) = self.point_at(t);
        SliceCoords { gamma0: self.gamma0, alpha, beta }
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { gamma0: self.gamma0, points, closed: self.closed }
    }

    /// Join two paths end to start.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.gamma0 != other.gamma0 {
            return Err(Error::InvalidPath("paths live on different slices".into()));
        }
        if self.points.last() != other.points.first() {
            return Err(Error::InvalidPath("paths do not join".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        let closed = points.first() == points.last() && self.closed && other.closed;
        Self::new(self.gamma0, points, closed)
    }
}

/// Total signed angle (radians) swept about the singular point.
pub fn swept_angle(path: &ParameterPath) -> Result<f64> {
    let (ax, ay) = singular_point(path.gamma0)?;
    let mut total = 0.0;
    for w in path.points.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (ux, uy) = (p.0 - ax, p.1 - ay);
        let (vx, vy) = (q.0 - ax, q.1 - ay);
        if segment_distance((ux, uy), (vx, vy)) <= WINDING_EPS {
            return Err(Error::PathThroughSingularity { eps: WINDING_EPS });
        }
        total += (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
    }
    Ok(total)
}

/// Signed winding about `(1/gamma0, 0)`; counterclockwise in `(alpha, beta)` is positive.
///
/// Open paths report the nearest integer of their swept angle.
pub fn winding_number(path: &ParameterPath) -> Result<i64> {
    Ok((swept_angle(path)? / TAU).round() as i64)
}

// distance from the origin to the segment u-v
fn segment_distance(u: (f64, f64), v: (f64, f64)) -> f64 {
    let (dx, dy) = (v.0 - u.0, v.1 - u.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (-(u.0 * dx + u.1 * dy) / len2).clamp(0.0, 1.0) };
    let (px, py) = (u.0 + t * dx, u.1 + t * dy);
    px.hypot(py)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn make_params_examples() {
        assert!(make_params(-1.0, 0.0, -1.0, 0.0).is_ok());
        assert!(make_params(2.0, 1.0, 1.0, 1.0).is_ok());
        assert!(matches!(make_params(1.0, 1.0, 1.0, 1.0), Err(Error::ConstraintViolation { .. })));
        assert!(matches!(make_params(f64::NAN, 1.0, 1.0, 1.0), Err(Error::NonFinite("alpha"))));
    }

    #[test]
    fn constraint_tolerance_is_relative() {
        // alpha*gamma = 1e8, absolute residual 1e-5 is within 1e-12 relative
        let p = make_params(1e4, 1e4, 1e4, (1e8 - 1.0 + 1e-5) / 1e4);
        assert!(p.is_ok());
    }

    #[test]
    fn from_slice_examples() {
        let p = from_slice(SliceCoords { gamma0: -1.0, alpha: -1.0, beta: 0.5 }).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma, p.delta), (-1.0, 0.5, -1.0, 0.0));
        let p = from_slice(SliceCoords { gamma0: -1.0, alpha: 0.0, beta: 1.0 }).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma, p.delta), (0.0, 1.0, -1.0, -1.0));
        assert_eq!(
            from_slice(SliceCoords { gamma0: -1.0, alpha: -1.0, beta: 0.0 }),
            Err(Error::DegenerateDelta)
        );
    }

    #[test]
    fn from_polar_examples() {
        let p = from_polar(PolarCoords { gamma0: -1.0, rho: 0.5, theta: 0.0 }).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma, p.delta), (-1.0, 0.5, -1.0, 0.0));
        let p = from_polar(PolarCoords { gamma0: -1.0, rho: 0.5, theta: PI }).unwrap();
        assert!((p.alpha + 1.0).abs() < 1e-15);
        assert_eq!(p.beta, -0.5);
        assert!(p.delta.abs() < 1e-15);
        assert_eq!(from_polar(PolarCoords { gamma0: -1.0, rho: 0.0, theta: 1.0 }), Err(Error::SingularPoint));
        assert_eq!(
            from_polar(PolarCoords { gamma0: -1.0, rho: 0.5, theta: PI / 2.0 }),
            Err(Error::DegenerateDelta)
        );
    }

    #[test]
    fn singular_point_examples() {
        assert_eq!(singular_point(-1.0), Ok((-1.0, 0.0)));
        assert_eq!(singular_point(2.0), Ok((0.5, 0.0)));
        assert_eq!(singular_point(0.0), Err(Error::InvalidGamma0));
    }

    fn circle(cx: f64, cy: f64, r: f64, n: usize, ccw: bool) -> Vec<(f64, f64)> {
        let sign = if ccw { 1.0 } else { -1.0 };
        let mut pts: Vec<_> = (0..=n)
            .map(|j| {
                let t = sign * TAU * j as f64 / n as f64;
                (cx + r * t.cos(), cy + r * t.sin())
            })
            .collect();
        pts[n] = pts[0];
        pts
    }

    #[test]
    fn winding_examples() {
        let ccw = ParameterPath::closed(-1.0, circle(-1.0, 0.0, 0.5, 100, true)).unwrap();
        assert_eq!(winding_number(&ccw), Ok(1));
        let outside = ParameterPath::closed(-1.0, circle(0.0, 0.0, 0.1, 100, true)).unwrap();
        assert_eq!(winding_number(&outside), Ok(0));
        let cw = ParameterPath::closed(-1.0, circle(-1.0, 0.0, 0.5, 100, false)).unwrap();
        assert_eq!(winding_number(&cw), Ok(-1));
        assert_eq!(winding_number(&ccw.reversed()), Ok(-1));
    }

    #[test]
    fn winding_rejects_segment_through_singularity() {
        let p = ParameterPath::open(-1.0, vec![(-2.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(matches!(winding_number(&p), Err(Error::PathThroughSingularity { .. })));
        assert!(ParameterPath::open(-1.0, vec![(-1.0, 0.0)]).is_err());
    }

    #[test]
    fn polar_loop_orientation_is_counterclockwise() {
        let path = ParameterPath::polar_loop(PolarLoop::around_singularity(-1.0, 0.5, 1.0, 64)).unwrap();
        assert!(path.is_closed());
        assert_eq!(winding_number(&path), Ok(1));
        let two = ParameterPath::polar_loop(PolarLoop::around_singularity(2.0, 0.1, 2.0, 128)).unwrap();
        assert_eq!(winding_number(&two), Ok(2));
        let back = ParameterPath::polar_loop(PolarLoop::around_singularity(-1.0, 0.5, -1.0, 64)).unwrap();
        assert_eq!(winding_number(&back), Ok(-1));
        let mut off = PolarLoop::around_singularity(-1.0, 0.5, 1.0, 64);
        off.center_offset = (5.0, 5.0);
        assert_eq!(winding_number(&ParameterPath::polar_loop(off).unwrap()), Ok(0));
    }

    #[test]
    fn slice_coupling_stays_finite_on_beta_zero() {
        let c = Coupling::from_slice(SliceCoords { gamma0: -1.0, alpha: -0.5, beta: 0.0 }).unwrap();
        assert_eq!(c.weight, 0.0);
        assert_eq!(c.weight_delta, -0.5);
        assert!(c.params().is_none());
        assert_eq!(
            Coupling::from_slice(SliceCoords { gamma0: -1.0, alpha: -1.0, beta: 0.0 }),
            Err(Error::SingularPoint)
        );
    }

    #[test]
    fn path_interpolation_hits_vertices() {
        let p = ParameterPath::open(-1.0, vec![(0.0, 1.0), (1.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(p.point_at(0.0), (0.0, 1.0));
        assert_eq!(p.point_at(0.5), (1.0, 1.0));
        assert_eq!(p.point_at(0.25), (0.5, 1.0));
        assert_eq!(p.point_at(1.0), (1.0, 2.0));
    }
}
