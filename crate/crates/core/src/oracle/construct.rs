//! Polygon constructions by explicit geodesics, followed by measurement.
//!
//! Frames used throughout: the imaginary axis and the unit circle are
//! perpendicular at `i`. [`HIsometry::dilation`] moves along the axis and
//! [`HIsometry::slide`] along the circle, so a right-angled corner at `i` with
//! prescribed side lengths is obtained without any trigonometry.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    common_perpendicular, crossing_angle, distance_to_geodesic, from_disk, hdist, interior_angle,
    intersect, perpendicular_foot, signed_angle, to_disk, HGeodesic, HIsometry, HPoint,
};
use crate::error::{GeometryError, Result};

use std::f64::consts::FRAC_PI_2;

const MAX_BISECTION_STEPS: usize = 2_000;
const MAX_DOUBLINGS: usize = 200;

/// Shrinks `(lo, hi)` around the switch point of a monotone predicate until
/// the midpoint is no longer representable strictly inside the bracket.
fn bisect(mut lo: f64, mut hi: f64, mut too_big: impl FnMut(f64) -> bool) -> f64 {
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if too_big(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Doubles `start` until `too_big` holds.
fn upper_bracket(start: f64, mut too_big: impl FnMut(f64) -> bool) -> Result<f64> {
    let mut hi = start;
    for _ in 0..MAX_DOUBLINGS {
        if too_big(hi) {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(GeometryError::Nonexistent(
        "bisection bracket not found".into(),
    ))
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::Nonexistent(format!(
            "{what} must be positive, got {x}"
        )))
    }
}

fn check_acute(what: &'static str, phi: f64) -> Result<()> {
    if phi > 0.0 && phi < FRAC_PI_2 {
        Ok(())
    } else {
        Err(GeometryError::Nonexistent(format!(
            "{what} must lie in (0, pi/2), got {phi}"
        )))
    }
}

/// A trirectangle realized in the half-plane.
///
/// `vertices` are, in cyclic order: the right-angled corner opposite the acute
/// angle (always `i`), the far end of `leg_a`, the acute corner, the far end of
/// `leg_b`. Every field is measured from coordinates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasuredTrirectangle {
    pub vertices: [HPoint; 4],
    pub leg_a: f64,
    pub leg_b: f64,
    pub arm_a: f64,
    pub arm_b: f64,
    pub angle: f64,
    pub right_angles: [f64; 3],
}

impl MeasuredTrirectangle {
    pub fn max_right_angle_error(&self) -> f64 {
        self.right_angles
            .iter()
            .map(|a| (a - FRAC_PI_2).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the trirectangle whose legs have lengths `a` and `b`, or `None` when
/// the two perpendiculars erected at the leg ends do not meet.
pub fn trirectangle_from_legs(a: f64, b: f64) -> Option<MeasuredTrirectangle> {
    let o = HPoint::i();
    let end_a = HPoint::on_axis(a);
    let slide = HIsometry::slide(b);
    let end_b = slide.apply(o);
    let perp_a = HGeodesic::Circle {
        center: 0.0,
        radius: a.exp(),
    };
    let perp_b = slide.apply_geodesic(HGeodesic::imaginary_axis());
    let acute = intersect(perp_a, perp_b)?;
    Some(MeasuredTrirectangle {
        vertices: [o, end_a, acute, end_b],
        leg_a: hdist(o, end_a),
        leg_b: hdist(o, end_b),
        arm_a: hdist(acute, end_b),
        arm_b: hdist(end_a, acute),
        angle: interior_angle(acute, end_a, end_b),
        right_angles: [
            interior_angle(o, end_a, end_b),
            interior_angle(end_a, o, acute),
            interior_angle(end_b, o, acute),
        ],
    })
}

/// Trirectangle with leg `side_a` and acute angle `phi`, the other leg found by
/// bisection on the measured angle (which decreases as the leg grows).
pub fn construct_trirectangle(side_a: f64, phi: f64) -> Result<MeasuredTrirectangle> {
    check_positive("leg", side_a)?;
    check_acute("acute angle", phi)?;
    let too_big = |b: f64| trirectangle_from_legs(side_a, b).is_none_or(|t| t.angle < phi);
    let hi = upper_bracket(1.0, too_big)?;
    let b = bisect(0.0, hi, too_big);
    trirectangle_from_legs(side_a, b)
        .ok_or_else(|| GeometryError::Nonexistent("trirectangle did not close".into()))
}

/// A right-angled hexagon. `sides[k]` joins `vertices[k]` and `vertices[k + 1]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasuredHexagon {
    pub vertices: [HPoint; 6],
    pub sides: [f64; 6],
    /// Crossing angle at `vertices[k]` of the geodesics carrying sides `k - 1`
    /// and `k`, folded into `[0, pi/2]`.
    ///
    /// Angles are taken between carrying geodesics rather than from vertex
    /// coordinates: next to a very short side a vertex position error of one
    /// ulp already tilts the measured direction by more than the tolerance.
    pub angles: [f64; 6],
    /// Largest distance from a vertex to the geodesics it should lie on.
    pub incidence_error: f64,
}

impl MeasuredHexagon {
    pub fn max_right_angle_error(&self) -> f64 {
        self.angles
            .iter()
            .map(|a| (a - FRAC_PI_2).abs())
            .fold(0.0, f64::max)
    }
}

/// Right-angled hexagon with consecutive sides `a`, `gamma`, `b`.
///
/// `sides` come out as `[gamma, b, _, opposite, _, a]`: side 3 is opposite
/// `gamma`. The last two perpendiculars are closed by the common perpendicular
/// of two ultraparallel geodesics, which fails to exist for invalid data.
pub fn construct_hexagon(a: f64, b: f64, gamma: f64) -> Result<MeasuredHexagon> {
    for (what, x) in [("side a", a), ("side b", b), ("side gamma", gamma)] {
        check_positive(what, x)?;
    }
    // side gamma is centred on i to keep coordinates small
    let down = HIsometry::dilation(-gamma / 2.0);
    let lift = HIsometry::dilation(gamma / 2.0);
    let p0 = down.apply(HPoint::i());
    let p1 = lift.apply(HPoint::i());
    let to_q0 = down.compose(&HIsometry::slide(a));
    let q0 = to_q0.apply(HPoint::i());
    let to_q1 = lift.compose(&HIsometry::slide(b));
    let q1 = to_q1.apply(HPoint::i());
    let line0 = to_q0.apply_geodesic(HGeodesic::imaginary_axis());
    let line1 = to_q1.apply_geodesic(HGeodesic::imaginary_axis());
    let (x0, x1) = common_perpendicular(line0, line1).ok_or_else(|| {
        GeometryError::Nonexistent(
            "closing perpendiculars do not have a common perpendicular".into(),
        )
    })?;
    let vertices = [p0, p1, q1, x1, x0, q0];
    let closing = HGeodesic::through(x0, x1)
        .map_err(|_| GeometryError::Nonexistent("closing side has zero length".into()))?;
    let lines = [
        HGeodesic::imaginary_axis(),
        lift.apply_geodesic(HGeodesic::unit_circle()),
        line1,
        closing,
        line0,
        down.apply_geodesic(HGeodesic::unit_circle()),
    ];
    let mut sides = [0.0; 6];
    let mut angles = [0.0; 6];
    let mut incidence_error: f64 = 0.0;
    for k in 0..6 {
        let next = vertices[(k + 1) % 6];
        sides[k] = hdist(vertices[k], next);
        angles[k] = crossing_angle(lines[(k + 5) % 6], lines[k]).unwrap_or(f64::NAN);
        incidence_error = incidence_error
            .max(distance_to_geodesic(vertices[k], lines[k]))
            .max(distance_to_geodesic(next, lines[k]));
    }
    // a crossed closing configuration also has right angles but is not embedded
    if !is_convex(&vertices) {
        return Err(GeometryError::Nonexistent(
            "closing perpendiculars cross the hexagon".into(),
        ));
    }
    // a collapsed closing side means the data sits on the existence boundary
    if sides[3] <= 0.0 {
        return Err(GeometryError::Nonexistent(
            "closing side has zero length".into(),
        ));
    }
    Ok(MeasuredHexagon {
        vertices,
        sides,
        angles,
        incidence_error,
    })
}

/// Right-angled hexagon with alternate sides `a1`, `a2`, `a3`, built by
/// bisecting on the side between `a1` and `a2` until the side opposite it
/// measures `a3`. That middle side is `sides[0]` of the result.
pub fn construct_hexagon_from_alternate(a1: f64, a2: f64, a3: f64) -> Result<MeasuredHexagon> {
    for (what, x) in [("side a1", a1), ("side a2", a2), ("side a3", a3)] {
        check_positive(what, x)?;
    }
    let too_big = |s: f64| construct_hexagon(a1, a2, s).is_ok_and(|h| h.sides[3] > a3);
    let hi = upper_bracket(1.0, too_big)?;
    let s = bisect(0.0, hi, too_big);
    construct_hexagon(a1, a2, s)
}

/// The half of a V-piece cut along its seams: a pentagon with four right
/// angles and the cone point as fifth vertex.
///
/// `vertices` are the cone point, the foot on boundary 1 of the perpendicular
/// from the cone, the seam end on boundary 1, the seam end on boundary 2, and
/// the cone foot on boundary 2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasuredPentagon {
    pub vertices: [HPoint; 5],
    pub cone_angle: f64,
    pub right_angles: [f64; 4],
    /// Measured halves of the two boundary lengths.
    pub half_lengths: [f64; 2],
    pub seam: f64,
    pub cone_distances: [f64; 2],
    /// Seam pieces on either side of the foot of the perpendicular from the cone.
    pub seam_split: [f64; 2],
    /// The cone angle split by that perpendicular.
    pub angle_split: [f64; 2],
}

/// For the second trirectangle of a V-piece half: the seam piece `c2` whose
/// trirectangle over `a2` has arm `t` opposite `a2`, with its acute angle.
fn matching_partner(a2: f64, t: f64) -> Option<MeasuredTrirectangle> {
    if t <= a2 {
        return None;
    }
    let too_big = |c: f64| trirectangle_from_legs(a2, c).is_none_or(|q| q.arm_a > t);
    let hi = upper_bracket(1.0, too_big).ok()?;
    trirectangle_from_legs(a2, bisect(0.0, hi, too_big))
}

/// V-piece half with cone half-angle `phi` and boundary half-lengths `a1`, `a2`.
///
/// Two trirectangles sit over the seam, glued along the perpendicular from the
/// cone point. The outer bisection varies the first seam piece. The inner one
/// matches the shared arm. The sum of the two acute angles is driven to `phi`.
pub fn construct_vpiece_pentagon(a1: f64, a2: f64, phi: f64) -> Result<MeasuredPentagon> {
    check_positive("half-length a1", a1)?;
    check_positive("half-length a2", a2)?;
    check_acute("cone half-angle", phi)?;
    let too_big = |c1: f64| match trirectangle_from_legs(a1, c1) {
        None => true,
        Some(q1) => matching_partner(a2, q1.arm_a).is_some_and(|q2| q1.angle + q2.angle < phi),
    };
    let hi = upper_bracket(1.0, too_big)?;
    let c1 = bisect(0.0, hi, too_big);
    let q1 = trirectangle_from_legs(a1, c1)
        .ok_or_else(|| GeometryError::Nonexistent("first trirectangle collapsed".into()))?;
    let q2 = matching_partner(a2, q1.arm_a)
        .ok_or_else(|| GeometryError::Nonexistent("second trirectangle did not close".into()))?;

    let seam_move = HIsometry::slide(c1 + q2.leg_b);
    let b1 = HPoint::i();
    let f1 = HPoint::on_axis(a1);
    let b2 = seam_move.apply(b1);
    let f2 = seam_move.apply(HPoint::on_axis(a2));
    let perp1 = HGeodesic::Circle {
        center: 0.0,
        radius: a1.exp(),
    };
    let perp2 = seam_move.apply_geodesic(HGeodesic::Circle {
        center: 0.0,
        radius: a2.exp(),
    });
    let cone = intersect(perp1, perp2)
        .ok_or_else(|| GeometryError::Nonexistent("cone perpendiculars do not meet".into()))?;
    let (foot, _) = perpendicular_foot(cone, HGeodesic::unit_circle())?;
    Ok(MeasuredPentagon {
        vertices: [cone, f1, b1, b2, f2],
        cone_angle: interior_angle(cone, f1, f2),
        right_angles: [
            interior_angle(f1, cone, b1),
            interior_angle(b1, f1, b2),
            interior_angle(b2, b1, f2),
            interior_angle(f2, b2, cone),
        ],
        half_lengths: [hdist(f1, b1), hdist(b2, f2)],
        seam: hdist(b1, b2),
        cone_distances: [hdist(cone, f1), hdist(cone, f2)],
        seam_split: [hdist(b1, foot), hdist(foot, b2)],
        angle_split: [
            interior_angle(cone, f1, foot),
            interior_angle(cone, foot, f2),
        ],
    })
}

/// Half of a joker's hat: the quadrilateral with the two cone points and the
/// feet of their perpendiculars on the boundary geodesic.
///
/// `vertices` are cone 1, cone 2, foot of cone 2, foot of cone 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasuredHat {
    pub vertices: [HPoint; 4],
    pub cone_angles: [f64; 2],
    pub right_angles: [f64; 2],
    /// Distance between the feet, half the boundary length.
    pub base: f64,
    /// Length of the common perpendicular of the cone-cone line and the boundary.
    pub height: f64,
    pub cone_distances: [f64; 2],
    pub cone_to_cone: f64,
}

fn leg_for_angle(height: f64, phi: f64) -> Result<f64> {
    let too_big = |y: f64| trirectangle_from_legs(height, y).is_none_or(|q| q.angle < phi);
    let hi = upper_bracket(1.0, too_big)?;
    Ok(bisect(0.0, hi, too_big))
}

/// Joker's hat half with cone half-angles `phi1`, `phi2` and boundary half
/// length `half_len`. The common perpendicular of the cone-cone line and the
/// boundary splits it into two trirectangles sharing a leg. The shared leg is
/// bisected until the other two legs add up to `half_len`.
pub fn construct_hat_quadrilateral(phi1: f64, phi2: f64, half_len: f64) -> Result<MeasuredHat> {
    check_acute("cone half-angle 1", phi1)?;
    check_acute("cone half-angle 2", phi2)?;
    check_positive("half-length", half_len)?;
    let base_at =
        |h: f64| -> Result<(f64, f64)> { Ok((leg_for_angle(h, phi1)?, leg_for_angle(h, phi2)?)) };
    let too_big = |h: f64| base_at(h).is_ok_and(|(y1, y2)| y1 + y2 < half_len);
    let hi = upper_bracket(1.0, too_big)?;
    let height = bisect(0.0, hi, too_big);
    let (y1, y2) = base_at(height)?;
    let collapse = || GeometryError::Nonexistent("hat trirectangle collapsed".into());
    let q1 = trirectangle_from_legs(height, y1).ok_or_else(collapse)?;
    let q2 = trirectangle_from_legs(height, y2).ok_or_else(collapse)?;
    let (p1, f1) = (q1.vertices[2].mirror(), q1.vertices[3].mirror());
    let (p2, f2) = (q2.vertices[2], q2.vertices[3]);
    let top = HGeodesic::through(p1, p2)?;
    let (top_foot, base_foot) = common_perpendicular(top, HGeodesic::unit_circle())
        .ok_or_else(|| GeometryError::Nonexistent("cone line meets the boundary".into()))?;
    Ok(MeasuredHat {
        vertices: [p1, p2, f2, f1],
        cone_angles: [interior_angle(p1, f1, p2), interior_angle(p2, p1, f2)],
        right_angles: [interior_angle(f1, p1, f2), interior_angle(f2, f1, p2)],
        base: hdist(f1, f2),
        height: hdist(top_foot, base_foot),
        cone_distances: [hdist(p1, f1), hdist(p2, f2)],
        cone_to_cone: hdist(p1, p2),
    })
}

fn to_klein(p: HPoint) -> (f64, f64) {
    let (x, y) = to_disk(p);
    let s = 2.0 / (1.0 + x * x + y * y);
    (s * x, s * y)
}

fn from_klein(x: f64, y: f64) -> HPoint {
    let s = 1.0 / (1.0 + (1.0 - x * x - y * y).max(0.0).sqrt());
    from_disk(s * x, s * y)
}

/// Every corner turns the same way. For polygons whose consecutive sides meet
/// at angles below pi this rules out the crossed configurations.
pub fn is_convex(vertices: &[HPoint]) -> bool {
    let n = vertices.len();
    let turns: Vec<f64> = (0..n)
        .map(|j| {
            signed_angle(
                vertices[j],
                vertices[(j + n - 1) % n],
                vertices[(j + 1) % n],
            )
        })
        .collect();
    turns.iter().all(|t| *t > 0.0) || turns.iter().all(|t| *t < 0.0)
}

/// Random points inside a convex geodesic polygon.
///
/// Geodesics are straight in the Klein model, so the polygon is a Euclidean
/// convex polygon there and a fan triangulation covers it exactly. Points are
/// uniform with respect to Klein-model Euclidean area.
pub fn sample_convex_polygon<R: Rng + ?Sized>(
    vertices: &[HPoint],
    count: usize,
    rng: &mut R,
) -> Vec<HPoint> {
    if vertices.len() < 3 {
        return Vec::new();
    }
    let k: Vec<(f64, f64)> = vertices.iter().copied().map(to_klein).collect();
    // Klein-model fan triangles with their Euclidean areas
    type Triangle = ((f64, f64), (f64, f64), (f64, f64), f64);
    let fan: Vec<Triangle> = (1..k.len() - 1)
        .map(|j| {
            let (a, b, c) = (k[0], k[j], k[j + 1]);
            let area = ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs() / 2.0;
            (a, b, c, area)
        })
        .collect();
    let total: f64 = fan.iter().map(|t| t.3).sum();
    (0..count)
        .map(|_| {
            let mut pick = rng.random::<f64>() * total;
            let mut tri = fan[fan.len() - 1];
            for t in &fan {
                if pick < t.3 {
                    tri = *t;
                    break;
                }
                pick -= t.3;
            }
            let (mut r1, mut r2) = (rng.random::<f64>(), rng.random::<f64>());
            if r1 + r2 > 1.0 {
                r1 = 1.0 - r1;
                r2 = 1.0 - r2;
            }
            let (a, b, c, _) = tri;
            let x = a.0 + r1 * (b.0 - a.0) + r2 * (c.0 - a.0);
            let y = a.1 + r1 * (b.1 - a.1) + r2 * (c.1 - a.1);
            from_klein(x, y)
        })
        .collect()
}
