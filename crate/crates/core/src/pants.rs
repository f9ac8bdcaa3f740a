//! Pairs of pants with geodesic and cone boundaries.
//!
//! A V-piece is cut by its seam and the perpendiculars from its cone point
//! into two trirectangles per half. The cone half-angle is split between them
//! as `phi1 + phi2 = phi`, with the split fixed by requiring the shared arm
//! (the perpendicular from the cone to the seam) to match. A joker's hat is cut
//! the same way, along the common perpendicular of the cone-cone segment and
//! the boundary.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::trig::{hexagon_alternate_side, tri_cone_to_side, tri_half_collar, Angle, Length};

/// Boundary lengths below this are rejected as cusp-like.
pub const MIN_PANTS_LENGTH: f64 = 1e-8;
/// Half-angles closer than this to `0` or `pi/2` are rejected.
pub const ANGLE_MARGIN: f64 = 1e-8;

fn check_length(l: Length) -> Result<()> {
    if l.value() < MIN_PANTS_LENGTH {
        return Err(GeometryError::DegeneratePants(format!(
            "boundary length {} is below {MIN_PANTS_LENGTH}",
            l.value()
        )));
    }
    Ok(())
}

fn check_angle(a: Angle) -> Result<()> {
    let v = a.value();
    if !(ANGLE_MARGIN..=FRAC_PI_2 - ANGLE_MARGIN).contains(&v) {
        return Err(GeometryError::DegeneratePants(format!(
            "half-angle {v} is within {ANGLE_MARGIN} of the domain boundary"
        )));
    }
    Ok(())
}

/// `ln cosh x` without overflow for large `x`.
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

fn bisect_decreasing(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..2_000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YPiece {
    pub lengths: [Length; 3],
}

impl YPiece {
    pub fn new(l1: Length, l2: Length, l3: Length) -> Result<Self> {
        for l in [l1, l2, l3] {
            check_length(l)?;
        }
        Ok(Self {
            lengths: [l1, l2, l3],
        })
    }

    /// Length of the seam joining boundaries `i` and `j`.
    pub fn seam_length(&self, i: usize, j: usize) -> Result<f64> {
        if i == j || i > 2 || j > 2 {
            return Err(GeometryError::Domain {
                what: "Y-piece seam needs two distinct boundaries in 0..3",
                value: i.max(j) as f64,
            });
        }
        let k = 3 - i - j;
        Ok(hexagon_alternate_side(
            self.lengths[i].half(),
            self.lengths[j].half(),
            self.lengths[k].half(),
        ))
    }

    /// Classical half-collar widths `arcsinh(1 / sinh(l/2))`.
    pub fn half_collar_widths(&self) -> [f64; 3] {
        self.lengths
            .map(|l| (1.0 / (l.value() / 2.0).sinh()).asinh())
    }
}

/// The split of a V-piece cone angle by the perpendicular to the seam.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VSplit {
    /// Angles at the cone in the trirectangles over boundary 1 and 2.
    pub angles: [f64; 2],
    /// Seam pieces adjacent to boundary 1 and 2.
    pub seam_pieces: [f64; 2],
    /// The perpendicular from the cone point to the seam.
    pub shared_arm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VPiece {
    pub phi: Angle,
    pub lengths: [Length; 2],
}

impl VPiece {
    pub fn new(phi: Angle, l1: Length, l2: Length) -> Result<Self> {
        check_angle(phi)?;
        check_length(l1)?;
        check_length(l2)?;
        Ok(Self {
            phi,
            lengths: [l1, l2],
        })
    }

    /// Solves `cosh(a1) / sin(phi1) = cosh(a2) / sin(phi - phi1)` for `phi1` by
    /// bisection on the log form; the left side falls and the right side rises
    /// with `phi1`.
    pub fn split(&self) -> VSplit {
        let phi = self.phi.value();
        let (a1, a2) = (self.lengths[0].half(), self.lengths[1].half());
        let gap = ln_cosh(a1.value()) - ln_cosh(a2.value());
        let phi1 = bisect_decreasing(0.0, phi, |p| gap - p.sin().ln() + (phi - p).sin().ln());
        let phi2 = phi - phi1;
        let piece = |a: Length, p: f64| {
            Angle::new(p).map_or((1.0 / a.value().sinh()).asinh(), |p| tri_half_collar(a, p))
        };
        let shared =
            |a: Length, p: f64| Angle::new(p).map_or(f64::INFINITY, |p| tri_cone_to_side(a, p));
        VSplit {
            angles: [phi1, phi2],
            seam_pieces: [piece(a1, phi1), piece(a2, phi2)],
            shared_arm: shared(a1, phi1),
        }
    }

    /// The seam between the two geodesic boundaries.
    pub fn seam_length(&self) -> f64 {
        let s = self.split();
        s.seam_pieces[0] + s.seam_pieces[1]
    }

    /// Distance from the cone point to boundary `k` along its perpendicular.
    pub fn cone_to_boundary_distance(&self, k: usize) -> f64 {
        let s = self.split();
        let piece = Length::new(s.seam_pieces[k]).expect("seam pieces are positive");
        let angle = Angle::new(s.angles[k]).expect("split angles lie in (0, phi)");
        tri_cone_to_side(piece, angle)
    }

    /// Half-collar widths of the two boundaries: the seam pieces.
    pub fn half_collar_widths(&self) -> [f64; 2] {
        self.split().seam_pieces
    }
}

/// Solved dimensions of a joker's hat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HatGeometry {
    /// Distance between the boundary and the geodesic through both cone points.
    pub height: f64,
    /// Pieces of the half boundary cut off by the feet of the cone perpendiculars.
    pub base_pieces: [f64; 2],
    pub cone_to_boundary: [f64; 2],
    pub cone_to_cone: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JokersHat {
    pub phis: [Angle; 2],
    pub length: Length,
}

impl JokersHat {
    pub fn new(phi1: Angle, phi2: Angle, length: Length) -> Result<Self> {
        check_angle(phi1)?;
        check_angle(phi2)?;
        check_length(length)?;
        Ok(Self {
            phis: [phi1, phi2],
            length,
        })
    }

    pub fn geometry(&self) -> HatGeometry {
        let half = self.length.value() / 2.0;
        let base = |h: f64| self.phis.map(|p| (p.cos() / h.sinh()).asinh());
        let excess = |h: f64| {
            let [y1, y2] = base(h);
            y1 + y2 - half
        };
        let mut hi = 1.0;
        while excess(hi) > 0.0 {
            hi *= 2.0;
        }
        let height = bisect_decreasing(0.0, hi, excess);
        let h = Length::new(height).expect("hat height is positive");
        let base_pieces = base(height);
        let mut cone_to_cone = 0.0;
        for (y, p) in base_pieces.iter().zip(self.phis) {
            cone_to_cone += tri_cone_to_side(Length::new(*y).expect("positive"), p);
        }
        HatGeometry {
            height,
            base_pieces,
            cone_to_boundary: self.phis.map(|p| tri_cone_to_side(h, p)),
            cone_to_cone,
        }
    }

    pub fn cone_to_boundary_distance(&self, cone: usize) -> f64 {
        self.geometry().cone_to_boundary[cone]
    }

    pub fn cone_to_cone_distance(&self) -> f64 {
        self.geometry().cone_to_cone
    }

    /// Half-collar width of the boundary: the hat height.
    pub fn half_collar_widths(&self) -> [f64; 1] {
        [self.geometry().height]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pants {
    Y(YPiece),
    V(VPiece),
    Hat(JokersHat),
}

impl Pants {
    /// Gauss-Bonnet area: `2 pi` minus twice the sum of the cone half-angles.
    pub fn area(&self) -> f64 {
        2.0 * PI - 2.0 * self.cone_half_angles().iter().sum::<f64>()
    }

    pub fn cone_half_angles(&self) -> Vec<f64> {
        match self {
            Pants::Y(_) => vec![],
            Pants::V(v) => vec![v.phi.value()],
            Pants::Hat(h) => h.phis.iter().map(|p| p.value()).collect(),
        }
    }

    pub fn geodesic_lengths(&self) -> Vec<f64> {
        match self {
            Pants::Y(y) => y.lengths.iter().map(|l| l.value()).collect(),
            Pants::V(v) => v.lengths.iter().map(|l| l.value()).collect(),
            Pants::Hat(h) => vec![h.length.value()],
        }
    }

    pub fn half_collar_widths(&self) -> Vec<f64> {
        match self {
            Pants::Y(y) => y.half_collar_widths().to_vec(),
            Pants::V(v) => v.half_collar_widths().to_vec(),
            Pants::Hat(h) => h.half_collar_widths().to_vec(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pants::Y(_) => "Y-piece",
            Pants::V(_) => "V-piece",
            Pants::Hat(_) => "joker's hat",
        }
    }
}
