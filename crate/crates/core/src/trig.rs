//! Scalar hyperbolic trigonometry for the polygons that pants decompose into.
//!
//! Every pants computation in this crate is routed through trirectangles
//! (hyperbolic quadrilaterals with three right angles and one acute angle).
//! Labeling convention:
//!
//! ```text
//!            arm_b
//!   acute *---------* right
//!         |         |
//!   arm_a |         | leg_a
//!         |         |
//!   right *---------* right (opposite the acute angle)
//!            leg_b
//! ```
//!
//! The legs meet at the right-angled vertex opposite the acute angle; the arms
//! meet at the acute angle. `arm_a` is opposite `leg_a`, `arm_b` is opposite
//! `leg_b` (so `arm_b` and `leg_a` share a vertex). With acute angle `phi`:
//!
//! ```text
//! cos phi       = sinh(leg_a) sinh(leg_b)
//! cosh(leg_a)   = cosh(arm_a) sin phi
//! cot phi       = tanh(leg_a) sinh(arm_b)
//! ```
//!
//! and the same with `a` and `b` exchanged.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Below this excess `x - 1`, `acosh` switches to a series in `sqrt(2 (x - 1))`.
const ACOSH_SERIES_CUTOFF: f64 = 1e-8;

/// A half cone angle (or acute polygon angle), strictly inside `(0, pi/2)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < FRAC_PI_2 {
            Ok(Self(value))
        } else {
            Err(GeometryError::Domain {
                what: "angle (must lie in (0, pi/2))",
                value,
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    #[inline]
    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    #[inline]
    pub fn cot(self) -> f64 {
        self.0.cos() / self.0.sin()
    }
}

impl TryFrom<f64> for Angle {
    type Error = GeometryError;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// A hyperbolic length, strictly positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Length(f64);

impl Length {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(GeometryError::Domain {
                what: "length (must be positive and finite)",
                value,
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Half of this length; stays positive for every representable length.
    pub fn half(self) -> Self {
        Self(self.0 / 2.0)
    }
}

impl TryFrom<f64> for Length {
    type Error = GeometryError;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Length> for f64 {
    fn from(l: Length) -> f64 {
        l.0
    }
}

/// `arccosh(x)` for `x >= 1`, accurate near the branch point.
pub fn acosh_guarded(x: f64) -> Result<f64> {
    if x.is_nan() || x < 1.0 {
        return Err(GeometryError::Domain {
            what: "acosh (argument below 1)",
            value: x,
        });
    }
    let excess = x - 1.0;
    if excess < ACOSH_SERIES_CUTOFF {
        // acosh(1 + e) = sqrt(2e) (1 - e/12 + 3e^2/160 - ...)
        let root = (2.0 * excess).sqrt();
        return Ok(root * (1.0 - excess / 12.0 + 3.0 * excess * excess / 160.0));
    }
    if x > 1e150 {
        return Ok(std::f64::consts::LN_2 + x.ln());
    }
    Ok((excess + (excess * (x + 1.0)).sqrt()).ln_1p())
}

/// `arcsinh(x)` restricted to `x >= 0`.
pub fn asinh_guarded(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(GeometryError::Domain {
            what: "asinh (negative argument)",
            value: x,
        });
    }
    Ok(x.asinh())
}

/// Arm opposite a leg: `cosh(arm) = cosh(leg) / sin(phi)`.
///
/// In a joker's hat this is the distance from a cone point to the boundary
/// geodesic, with `leg` the height of the hat; it always exceeds
/// `arccosh(1 / sin phi)`.
pub fn tri_cone_to_side(leg: Length, phi: Angle) -> f64 {
    // cosh(leg) >= 1 and sin(phi) <= 1 keep the quotient >= 1 in floating point.
    acosh_guarded(leg.value().cosh() / phi.sin()).expect("quotient is at least 1")
}

/// Second leg from the first: `sinh(leg_b) = cos(phi) / sinh(leg_a)`.
///
/// With `leg_a = l/2` this is the half-collar width of a boundary geodesic of
/// length `l` seen from an angle `phi`.
pub fn tri_half_collar(half_len: Length, phi: Angle) -> f64 {
    (phi.cos() / half_len.value().sinh()).asinh()
}

/// Arm adjacent to a leg: `sinh(arm_b) = coth(leg_a) cot(phi)`.
///
/// With `leg_a = l/4` this is the cone-to-boundary distance in the symmetric
/// joker's hat with half-angles `phi` and boundary length `l`.
pub fn tri_joker_perp(quarter_len: Length, phi: Angle) -> f64 {
    (phi.cot() / quarter_len.value().tanh()).asinh()
}

/// Same quantity as [`tri_joker_perp`] written with the full boundary length:
/// `sinh(c) = (cosh(l/2) + 1) / sinh(l/2) * cot(phi)`.
pub fn joker_perp_from_length(len: Length, phi: Angle) -> f64 {
    let half = len.value() / 2.0;
    ((half.cosh() + 1.0) / half.sinh() * phi.cot()).asinh()
}

/// Side of a right-angled hexagon opposite `gamma`, where `a`, `gamma`, `b`
/// are consecutive sides: `cosh c = sinh a sinh b cosh gamma - cosh a cosh b`.
pub fn hexagon_opposite_side(a: Length, b: Length, gamma: Length) -> Result<f64> {
    let (a, b, g) = (a.value(), b.value(), gamma.value());
    let rhs = a.sinh() * b.sinh() * g.cosh() - a.cosh() * b.cosh();
    if !(rhs > 1.0) {
        return Err(GeometryError::InvalidHexagon { rhs });
    }
    acosh_guarded(rhs)
}

/// Side between `a` and `b` in a right-angled hexagon, given the side opposite
/// it. This is the hexagon law solved the other way:
/// `cosh(mid) = (cosh(opposite) + cosh a cosh b) / (sinh a sinh b)`.
///
/// For a Y-piece with half-lengths `a`, `b`, `opposite` this is the seam between
/// the boundaries of half-lengths `a` and `b`.
pub fn hexagon_alternate_side(a: Length, b: Length, opposite: Length) -> f64 {
    let (a, b, o) = (a.value(), b.value(), opposite.value());
    // coth a coth b + cosh o / (sinh a sinh b) > 1 always.
    let rhs = 1.0 / (a.tanh() * b.tanh()) + o.cosh() / (a.sinh() * b.sinh());
    acosh_guarded(rhs).expect("right-angled hexagon side exceeds 1")
}

/// Closed form for `sinh(w + v)` with `w` the geodesic collar width of a curve
/// of length `len` and `v` the cone collar width, both at half-angle `phi`.
pub fn collar_sum_sinh(len: Length, phi: Angle) -> f64 {
    let s = (len.value() / 2.0).sinh();
    let c = phi.cos();
    (1.0 + (c * c + s * s).sqrt()) / s * phi.cot()
}

/// A trirectangle described by its acute angle and four sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trirectangle {
    pub angle: Angle,
    pub leg_a: f64,
    pub leg_b: f64,
    /// Opposite `leg_a`.
    pub arm_a: f64,
    /// Opposite `leg_b`.
    pub arm_b: f64,
}

impl Trirectangle {
    /// The unique trirectangle with the given leg and acute angle.
    pub fn from_leg_and_angle(leg_a: Length, angle: Angle) -> Self {
        Self {
            angle,
            leg_a: leg_a.value(),
            leg_b: tri_half_collar(leg_a, angle),
            arm_a: tri_cone_to_side(leg_a, angle),
            arm_b: tri_joker_perp(leg_a, angle),
        }
    }

    /// Relative residuals of the defining relations, their mirror images and
    /// the arm product `tanh(arm_a) tanh(arm_b) = cos phi`.
    pub fn residuals(&self) -> [f64; 6] {
        let phi = self.angle;
        let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        [
            rel(self.leg_a.sinh() * self.leg_b.sinh(), phi.cos()),
            rel(self.arm_a.cosh() * phi.sin(), self.leg_a.cosh()),
            rel(self.arm_b.cosh() * phi.sin(), self.leg_b.cosh()),
            rel(self.leg_a.tanh() * self.arm_b.sinh(), phi.cot()),
            rel(self.leg_b.tanh() * self.arm_a.sinh(), phi.cot()),
            rel(self.arm_a.tanh() * self.arm_b.tanh(), phi.cos()),
        ]
    }

    pub fn is_consistent(&self, rel_tol: f64) -> bool {
        self.leg_a > 0.0
            && self.leg_b > 0.0
            && self.arm_a > 0.0
            && self.arm_b > 0.0
            && self.residuals().iter().all(|r| *r <= rel_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn len(v: f64) -> Length {
        Length::new(v).unwrap()
    }
    fn ang(v: f64) -> Angle {
        Angle::new(v).unwrap()
    }

    // Reference values below were evaluated at 40 significant digits.
    const ACOSH_2: f64 = 1.316_957_896_924_816_7;
    const ACOSH_5: f64 = 2.292_431_669_561_177_7;
    const ASINH_1: f64 = 0.881_373_587_019_543;

    #[test]
    fn acosh_guarded_values() {
        assert_eq!(acosh_guarded(1.0).unwrap(), 0.0);
        assert!((acosh_guarded(2.0).unwrap() - ACOSH_2).abs() < 1e-15);
        assert!((acosh_guarded(5.0).unwrap() - ACOSH_5).abs() < 1e-15);
        assert!(matches!(
            acosh_guarded(0.999),
            Err(GeometryError::Domain { .. })
        ));
        assert!(acosh_guarded(f64::NAN).is_err());
    }

    #[test]
    fn acosh_guarded_near_branch_point() {
        // acosh(1 + e) ~ sqrt(2e) for tiny e; the series and log forms agree across the cutoff
        for e in [1e-14f64, 1e-12, 1e-10, 0.99e-8, 1.01e-8, 1e-6] {
            let x = 1.0 + e;
            let exact_excess = x - 1.0;
            let approx = (2.0 * exact_excess).sqrt() * (1.0 - exact_excess / 12.0);
            let got = acosh_guarded(x).unwrap();
            assert!(
                (got - approx).abs() <= 1e-12 * approx,
                "e={e} got={got} approx={approx}"
            );
        }
        assert!((acosh_guarded(1e200).unwrap() - (2e200f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn asinh_guarded_values() {
        assert_eq!(asinh_guarded(0.0).unwrap(), 0.0);
        assert!((asinh_guarded(1.0).unwrap() - ASINH_1).abs() < 1e-15);
        assert!((asinh_guarded(2.163_953_4).unwrap() - 1.514_642_202_337_804_3).abs() < 1e-14);
        assert!(asinh_guarded(-1e-300).is_err());
    }

    #[test]
    fn cone_to_side_values() {
        // h -> 0 forces cosh c -> 1 / sin(phi)
        let c = tri_cone_to_side(len(1e-9), ang(PI / 6.0));
        assert!((c - ACOSH_2).abs() < 1e-12);
        assert!(
            (tri_cone_to_side(len(1.0), ang(PI / 4.0)) - 1.416_310_241_539_371_3).abs() < 1e-14
        );
        assert!(
            (tri_cone_to_side(len(0.5), ang(PI / 3.0)) - 0.758_920_425_629_491_7).abs() < 1e-14
        );
    }

    #[test]
    fn cone_to_side_exceeds_cone_collar() {
        for &phi in &[0.05, 0.4, 1.0, 1.5] {
            for &h in &[1e-6, 0.1, 1.0, 4.0] {
                let c = tri_cone_to_side(len(h), ang(phi));
                assert!(c > acosh_guarded(1.0 / phi.sin()).unwrap());
            }
        }
    }

    #[test]
    fn half_collar_values() {
        let near_right = tri_half_collar(len(1.0), ang(FRAC_PI_2 - 1e-12));
        assert!(near_right < 1e-11);
        assert!((tri_half_collar(len(1.0), ang(PI / 3.0)) - 0.413_568_450_819_278_4).abs() < 1e-14);
        // phi -> 0 reduces to the classical half collar, here sinh(l/2) = 1
        let classical = tri_half_collar(len(ASINH_1), ang(1e-9));
        assert!((classical - ASINH_1).abs() < 1e-12);
    }

    #[test]
    fn half_collar_strictly_decreasing_on_grid() {
        let phis: Vec<f64> = (0..40)
            .map(|i| 0.01 + i as f64 * (FRAC_PI_2 - 0.02) / 39.0)
            .collect();
        let lens: Vec<f64> = (0..40)
            .map(|i| 0.01 * (1000.0f64).powf(i as f64 / 39.0))
            .collect();
        for &phi in &phis {
            for pair in lens.windows(2) {
                assert!(
                    tri_half_collar(len(pair[1]), ang(phi))
                        < tri_half_collar(len(pair[0]), ang(phi))
                );
            }
        }
        for &l in &lens {
            for pair in phis.windows(2) {
                assert!(
                    tri_half_collar(len(l), ang(pair[1])) < tri_half_collar(len(l), ang(pair[0]))
                );
            }
        }
    }

    #[test]
    fn joker_perp_values() {
        let c = tri_joker_perp(len(0.5), ang(PI / 4.0));
        assert!((c - 1.514_642_208_101_048_2).abs() < 1e-14);
        let alt = joker_perp_from_length(len(2.0), ang(PI / 4.0));
        assert!((c - alt).abs() <= 1e-12 * c);
        let far = tri_joker_perp(len(40.0), ang(PI / 4.0));
        assert!((far - ASINH_1).abs() < 1e-14);
    }

    #[test]
    fn hexagon_values() {
        let s = len(ACOSH_2);
        let c = hexagon_opposite_side(s, s, s).unwrap();
        assert!((c - ACOSH_2).abs() < 1e-14);
        assert!(matches!(
            hexagon_opposite_side(len(1.0), len(1.0), len(0.1)),
            Err(GeometryError::InvalidHexagon { .. })
        ));
        let c = hexagon_opposite_side(len(2.0), len(2.0), len(1.0)).unwrap();
        assert!((c - 2.501_891_743_572_441).abs() < 1e-13);
    }

    #[test]
    fn hexagon_alternate_side_inverts_opposite_side() {
        for &(a, b, g) in &[(0.3, 0.7, 3.5), (2.0, 2.0, 1.0), (0.05, 3.0, 4.0)] {
            let c = hexagon_opposite_side(len(a), len(b), len(g)).unwrap();
            let back = hexagon_alternate_side(len(a), len(b), len(c));
            assert!((back - g).abs() < 1e-10 * g.max(1.0), "{a} {b} {g}: {back}");
        }
    }

    #[test]
    fn collar_sum_values() {
        let v = collar_sum_sinh(len(2.0), ang(PI / 4.0));
        assert!((v - 2.017_978_893_788_037_6).abs() < 1e-14);
        // len -> infinity: ratio -> 1, leaving cot(phi)
        let far = collar_sum_sinh(len(80.0), ang(0.7));
        assert!((far - ang(0.7).cot()).abs() < 1e-14);
        assert!(collar_sum_sinh(len(2.0), ang(FRAC_PI_2 - 1e-12)) < 1e-11);
    }

    #[test]
    fn trirectangle_relations_hold() {
        for &(a, phi) in &[(0.1, 0.2), (1.0, PI / 4.0), (5.0, 1.4), (0.02, 1.5)] {
            let t = Trirectangle::from_leg_and_angle(len(a), ang(phi));
            assert!(t.is_consistent(1e-12), "{a} {phi}: {:?}", t.residuals());
        }
    }

    #[test]
    fn domain_gates() {
        assert!(Angle::new(0.0).is_err());
        assert!(Angle::new(FRAC_PI_2).is_err());
        assert!(Angle::new(f64::NAN).is_err());
        assert!(Length::new(0.0).is_err());
        assert!(Length::new(f64::INFINITY).is_err());
        let a: Angle = serde_json::from_str("0.5").unwrap();
        assert_eq!(a.value(), 0.5);
        assert!(serde_json::from_str::<Angle>("2.0").is_err());
    }
}
