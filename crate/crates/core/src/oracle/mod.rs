//! Upper half-plane model of the hyperbolic plane.
//!
//! This module is a brute-force coordinate model used to check the closed
//! forms elsewhere in the crate: polygons are built from explicit geodesics and
//! isometries, then sides and angles are measured. Nothing here calls into
//! [`crate::trig`].

mod construct;
pub mod equivalence;

pub use construct::{
    construct_hat_quadrilateral, construct_hexagon, construct_hexagon_from_alternate,
    construct_trirectangle, construct_vpiece_pentagon, sample_convex_polygon,
    trirectangle_from_legs, MeasuredHat, MeasuredHexagon, MeasuredPentagon, MeasuredTrirectangle,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Distances below this count as "on the geodesic" for perpendicular feet.
pub const DEGENERATE_DISTANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::Domain {
                what: "half-plane point (needs y > 0)",
                value: y,
            })
        }
    }

    /// `i * e^t`, the point at signed distance `t` from `i` on the imaginary axis.
    pub fn on_axis(t: f64) -> Self {
        Self { x: 0.0, y: t.exp() }
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    pub fn mirror(self) -> Self {
        Self {
            x: -self.x,
            y: self.y,
        }
    }
}

/// A point of the ideal boundary `R ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ideal {
    Real(f64),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HGeodesic {
    Vertical { foot: f64 },
    Circle { center: f64, radius: f64 },
}

impl HGeodesic {
    pub fn imaginary_axis() -> Self {
        Self::Vertical { foot: 0.0 }
    }

    pub fn unit_circle() -> Self {
        Self::Circle {
            center: 0.0,
            radius: 1.0,
        }
    }

    pub fn from_ideal(u: Ideal, v: Ideal) -> Result<Self> {
        match (u, v) {
            (Ideal::Real(f), Ideal::Infinity) | (Ideal::Infinity, Ideal::Real(f)) => {
                Ok(Self::Vertical { foot: f })
            }
            (Ideal::Real(a), Ideal::Real(b)) if a != b => Ok(Self::Circle {
                center: (a + b) / 2.0,
                radius: (a - b).abs() / 2.0,
            }),
            _ => Err(GeometryError::Degenerate(
                "geodesic endpoints coincide".into(),
            )),
        }
    }

    /// The geodesic through two distinct points.
    pub fn through(p: HPoint, q: HPoint) -> Result<Self> {
        let dx = p.x - q.x;
        let scale = p.x.abs().max(q.x.abs()).max(p.y).max(q.y);
        if dx.abs() <= 1e-15 * scale {
            if (p.y - q.y).abs() <= 1e-15 * scale {
                return Err(GeometryError::Degenerate("points coincide".into()));
            }
            return Ok(Self::Vertical {
                foot: (p.x + q.x) / 2.0,
            });
        }
        let center = ((p.x + q.x) * dx + (p.y - q.y) * (p.y + q.y)) / (2.0 * dx);
        let radius = (p.x - center).hypot(p.y);
        Ok(Self::Circle { center, radius })
    }

    pub fn ideal_endpoints(self) -> (Ideal, Ideal) {
        match self {
            Self::Vertical { foot } => (Ideal::Real(foot), Ideal::Infinity),
            Self::Circle { center, radius } => {
                (Ideal::Real(center - radius), Ideal::Real(center + radius))
            }
        }
    }

    /// Euclidean residual of `p` against the curve, relative to its scale.
    pub fn residual(self, p: HPoint) -> f64 {
        match self {
            Self::Vertical { foot } => (p.x - foot).abs() / p.y,
            Self::Circle { center, radius } => ((p.x - center).hypot(p.y) - radius).abs() / radius,
        }
    }
}

/// Orientation-preserving isometry `z -> (a z + b) / (c z + d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HIsometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl HIsometry {
    /// Normalizes any real matrix with positive determinant.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(GeometryError::Domain {
                what: "isometry determinant (must be positive)",
                value: det,
            });
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Hyperbolic translation by `t` along the imaginary axis (`z -> e^t z`).
    pub fn dilation(t: f64) -> Self {
        let h = (t / 2.0).exp();
        Self {
            a: h,
            b: 0.0,
            c: 0.0,
            d: 1.0 / h,
        }
    }

    /// Hyperbolic translation by `t` along the unit circle, moving `i` towards `+1`.
    pub fn slide(t: f64) -> Self {
        let (s, c) = ((t / 2.0).sinh(), (t / 2.0).cosh());
        Self {
            a: c,
            b: s,
            c: s,
            d: c,
        }
    }

    /// Isometry carrying `p` to `i`.
    pub fn centering(p: HPoint) -> Self {
        let s = p.y.sqrt();
        Self {
            a: 1.0 / s,
            b: -p.x / s,
            c: 0.0,
            d: s,
        }
    }

    /// Isometry carrying `g` onto the imaginary axis.
    pub fn to_axis(g: HGeodesic) -> Self {
        match g {
            HGeodesic::Vertical { foot } => Self {
                a: 1.0,
                b: -foot,
                c: 0.0,
                d: 1.0,
            },
            HGeodesic::Circle { center, radius } => {
                let (u, v) = (center - radius, center + radius);
                Self::new(1.0, -u, -1.0, v).expect("v > u")
            }
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn apply(&self, p: HPoint) -> HPoint {
        let z = p.to_complex();
        let w = (z * self.a + self.b) / (z * self.c + self.d);
        // Im w = Im z / |cz + d|^2 exactly; use it to keep y positive and accurate.
        let den = z * self.c + self.d;
        HPoint {
            x: w.re,
            y: p.y / den.norm_sqr(),
        }
    }

    pub fn apply_ideal(&self, u: Ideal) -> Ideal {
        match u {
            Ideal::Real(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real((self.a * x + self.b) / den)
                }
            }
            Ideal::Infinity => {
                if self.c == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real(self.a / self.c)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: HGeodesic) -> HGeodesic {
        let (u, v) = g.ideal_endpoints();
        HGeodesic::from_ideal(self.apply_ideal(u), self.apply_ideal(v))
            .expect("isometries keep endpoints distinct")
    }
}

impl Default for HIsometry {
    fn default() -> Self {
        Self::identity()
    }
}

/// Hyperbolic distance, `2 asinh(|p - q| / (2 sqrt(y_p y_q)))`.
pub fn hdist(p: HPoint, q: HPoint) -> f64 {
    let chord = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Distance from `p` to the geodesic `g` (zero when `p` lies on it).
pub fn distance_to_geodesic(p: HPoint, g: HGeodesic) -> f64 {
    let z = HIsometry::to_axis(g).apply(p);
    (z.x.abs() / z.y).asinh()
}

/// Foot of the perpendicular from `p` to `g`, with the distance.
pub fn perpendicular_foot(p: HPoint, g: HGeodesic) -> Result<(HPoint, f64)> {
    let m = HIsometry::to_axis(g);
    let z = m.apply(p);
    let foot = HPoint {
        x: 0.0,
        y: z.x.hypot(z.y),
    };
    let d = hdist(z, foot);
    if d < DEGENERATE_DISTANCE {
        return Err(GeometryError::Degenerate(
            "point lies on the geodesic".into(),
        ));
    }
    Ok((m.inverse().apply(foot), d))
}

/// Intersection point of two geodesics, if they cross.
pub fn intersect(g1: HGeodesic, g2: HGeodesic) -> Option<HPoint> {
    let m = HIsometry::to_axis(g1);
    match m.apply_geodesic(g2) {
        HGeodesic::Vertical { .. } => None,
        HGeodesic::Circle { center, radius } => {
            let c = center.abs();
            if c >= radius {
                return None;
            }
            let y = ((radius - c) * (radius + c)).sqrt();
            if !(y > 0.0) {
                return None;
            }
            Some(m.inverse().apply(HPoint { x: 0.0, y }))
        }
    }
}

/// Feet of the common perpendicular of two ultraparallel geodesics.
///
/// Each foot is computed in the frame where its own geodesic is the imaginary
/// axis, so it lies on that geodesic to working precision even when the two
/// geodesics are far apart in half-plane coordinates.
pub fn common_perpendicular(g1: HGeodesic, g2: HGeodesic) -> Option<(HPoint, HPoint)> {
    Some((
        perpendicular_foot_on(g1, g2)?,
        perpendicular_foot_on(g2, g1)?,
    ))
}

/// Foot on `g` of the common perpendicular with `other`.
fn perpendicular_foot_on(g: HGeodesic, other: HGeodesic) -> Option<HPoint> {
    let m = HIsometry::to_axis(g);
    match m.apply_geodesic(other) {
        HGeodesic::Vertical { .. } => None,
        HGeodesic::Circle { center, radius } => {
            let c = center.abs();
            if c <= radius {
                return None;
            }
            let rho = ((c - radius) * (c + radius)).sqrt();
            Some(m.inverse().apply(HPoint { x: 0.0, y: rho }))
        }
    }
}

/// Unit tangent at `p` of the geodesic segment from `p` to `q`, expressed in
/// the frame where `p` sits at `i` (angles are preserved by that move).
fn unit_tangent(p: HPoint, q: HPoint) -> (f64, f64) {
    let w = HIsometry::centering(p).apply(q);
    let c = (w.x * w.x + w.y * w.y - 1.0) / (2.0 * w.x);
    if w.x == 0.0 || !c.is_finite() {
        return (0.0, (w.y - 1.0).signum());
    }
    let n = c.hypot(1.0);
    let (tx, ty) = (1.0 / n, c / n);
    if tx * w.x + ty * (w.y - 1.0) >= 0.0 {
        (tx, ty)
    } else {
        (-tx, -ty)
    }
}

/// Angle at `p` between the geodesic segments `p q1` and `p q2`, in `[0, pi]`.
pub fn interior_angle(p: HPoint, q1: HPoint, q2: HPoint) -> f64 {
    let (ax, ay) = unit_tangent(p, q1);
    let (bx, by) = unit_tangent(p, q2);
    (ax * by - ay * bx).abs().atan2(ax * bx + ay * by)
}

/// Angle in `[0, pi/2]` at which two geodesics cross, `None` if they do not.
pub fn crossing_angle(g1: HGeodesic, g2: HGeodesic) -> Option<f64> {
    match HIsometry::to_axis(g1).apply_geodesic(g2) {
        HGeodesic::Circle { center, radius } if center.abs() < radius => {
            Some((center.abs() / radius).acos())
        }
        _ => None,
    }
}

/// Oriented angle at `p` from the direction of `q1` to the direction of `q2`.
pub fn signed_angle(p: HPoint, q1: HPoint, q2: HPoint) -> f64 {
    let (ax, ay) = unit_tangent(p, q1);
    let (bx, by) = unit_tangent(p, q2);
    (ax * by - ay * bx).atan2(ax * bx + ay * by)
}

/// Cayley map from the half-plane to the Poincaré disk, `w = (z - i) / (z + i)`.
pub fn to_disk(p: HPoint) -> (f64, f64) {
    let z = p.to_complex();
    let i = Complex64::i();
    let w = (z - i) / (z + i);
    (w.re, w.im)
}

/// Inverse of [`to_disk`].
pub fn from_disk(x: f64, y: f64) -> HPoint {
    let w = Complex64::new(x, y);
    let i = Complex64::i();
    HPoint::from_complex(i * (Complex64::new(1.0, 0.0) + w) / (Complex64::new(1.0, 0.0) - w))
}
