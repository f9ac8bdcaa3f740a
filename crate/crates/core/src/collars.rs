//! Collars around partition geodesics and cone points.
//!
//! Geodesic collars use one surface-wide width parameter, the largest cone
//! half-angle `phi_max` (or `cos phi_max = 1` when there are no cones). Cone
//! collars use the cone's own half-angle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::pants::{Pants, VPiece};
use crate::surface::{BoundaryRef, ConeSurface};
use crate::trig::{Angle, Length};

/// Margins below this are flagged as near-degenerate.
pub const NEAR_DEGENERATE_MARGIN: f64 = 1e-10;

/// `arcsinh(cos(phi_max) / sinh(len / 2))`.
pub fn geodesic_collar_width(len: Length, phi_max: Angle) -> f64 {
    width_with_cos(len, phi_max.cos())
}

/// `arcsinh(1 / sinh(len / 2))`, the width on a surface without cone points.
pub fn classical_collar_width(len: Length) -> f64 {
    width_with_cos(len, 1.0)
}

fn width_with_cos(len: Length, cos_phi: f64) -> f64 {
    (cos_phi / (len.value() / 2.0).sinh()).asinh()
}

/// `arccosh(1 / sin(phi))`, evaluated as `arcsinh(cot(phi))`.
pub fn cone_collar_width(phi: Angle) -> f64 {
    phi.cot().asinh()
}

/// Sharp cone collar on a torus with one cone point: `arccosh(1 / sin(phi / 2))`.
pub fn torus_sharp_width(phi: Angle) -> f64 {
    let half = phi.value() / 2.0;
    (half.cos() / half.sin()).asinh()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollarKind {
    Geodesic,
    Cone,
}

/// A collar around curve `owner` (geodesic) or cone `owner` (cone).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Collar {
    pub kind: CollarKind,
    pub owner: usize,
    pub width: f64,
    /// Curve length for a geodesic collar, half-angle for a cone collar.
    pub core: f64,
}

impl Collar {
    pub fn geodesic(owner: usize, len: Length, cos_phi_max: f64) -> Self {
        Self {
            kind: CollarKind::Geodesic,
            owner,
            width: width_with_cos(len, cos_phi_max),
            core: len.value(),
        }
    }

    pub fn cone(owner: usize, phi: Angle) -> Self {
        Self {
            kind: CollarKind::Cone,
            owner,
            width: cone_collar_width(phi),
            core: phi.value(),
        }
    }
}

/// Fermi coordinates `ds^2 = d rho^2 + l^2 cosh^2(rho) dt^2` (t mod 1, rho in
/// [-w, w]) around a geodesic, polar coordinates
/// `ds^2 = d rho^2 + (phi/pi)^2 sinh^2(rho) dt^2` (t mod 2 pi, rho in [0, v])
/// around a cone point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollarMetric {
    pub kind: CollarKind,
    pub core: f64,
    pub width: f64,
}

// 5-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];
const PANELS: usize = 64;

impl CollarMetric {
    /// The `dt^2` coefficient at distance `rho` from the core.
    pub fn coefficient(&self, rho: f64) -> f64 {
        match self.kind {
            CollarKind::Geodesic => (self.core * rho.cosh()).powi(2),
            CollarKind::Cone => (self.core / PI * rho.sinh()).powi(2),
        }
    }

    pub fn t_period(&self) -> f64 {
        match self.kind {
            CollarKind::Geodesic => 1.0,
            CollarKind::Cone => 2.0 * PI,
        }
    }

    pub fn rho_range(&self) -> (f64, f64) {
        match self.kind {
            CollarKind::Geodesic => (-self.width, self.width),
            CollarKind::Cone => (0.0, self.width),
        }
    }

    /// Length of the equidistant curve at `rho`.
    pub fn circumference(&self, rho: f64) -> f64 {
        self.coefficient(rho).sqrt() * self.t_period()
    }

    /// Area from integrating the circumference over `rho` (composite Gauss-Legendre).
    pub fn integrated_area(&self) -> f64 {
        let (a, b) = self.rho_range();
        let h = (b - a) / PANELS as f64;
        (0..PANELS)
            .map(|k| {
                let mid = a + (k as f64 + 0.5) * h;
                GL_NODES
                    .iter()
                    .zip(GL_WEIGHTS)
                    .map(|(x, w)| w * self.circumference(mid + 0.5 * h * x))
                    .sum::<f64>()
                    * 0.5
                    * h
            })
            .sum()
    }

    /// `2 l sinh(w)` for a geodesic collar, `2 phi (cosh(v) - 1)` for a cone collar.
    pub fn closed_form_area(&self) -> f64 {
        match self.kind {
            CollarKind::Geodesic => 2.0 * self.core * self.width.sinh(),
            // cosh v - 1 = 2 sinh^2(v/2), exact near v = 0
            CollarKind::Cone => 4.0 * self.core * (self.width / 2.0).sinh().powi(2),
        }
    }
}

pub fn collar_metric(c: &Collar) -> CollarMetric {
    CollarMetric {
        kind: c.kind,
        core: c.core,
        width: c.width,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    ConeCone,
    GeodesicGeodesic,
    ConeGeodesic,
}

/// One checked inequality `separation > required`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pants: usize,
    pub kind: PairKind,
    pub first: BoundaryRef,
    pub second: BoundaryRef,
    pub inequality: String,
    pub separation: f64,
    pub required: f64,
    pub margin: f64,
    pub passed: bool,
    pub near_degenerate: bool,
}

impl PairRecord {
    fn new(
        pants: usize,
        kind: PairKind,
        (first, second): (BoundaryRef, BoundaryRef),
        inequality: &str,
        separation: f64,
        required: f64,
    ) -> Self {
        let margin = separation - required;
        Self {
            pants,
            kind,
            first,
            second,
            inequality: inequality.to_string(),
            separation,
            required,
            margin,
            passed: margin > 0.0,
            near_degenerate: margin < NEAR_DEGENERATE_MARGIN,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessCertificate {
    pub records: Vec<PairRecord>,
}

impl DisjointnessCertificate {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.records.iter().map(|r| r.margin).reduce(f64::min)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| r.near_degenerate)
    }
}

/// All collars of a surface plus their certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollarAtlas {
    pub phi_max: Option<f64>,
    pub geodesic: Vec<Collar>,
    pub cone: Vec<Collar>,
    pub certificate: DisjointnessCertificate,
}

impl CollarAtlas {
    pub fn build(s: &ConeSurface) -> Result<Self> {
        let cos_max = surface_cos_phi_max(s)?;
        let geodesic = s
            .curve_lengths
            .iter()
            .enumerate()
            .map(|(i, l)| Ok(Collar::geodesic(i, Length::new(*l)?, cos_max)))
            .collect::<Result<Vec<_>>>()?;
        let cone = s
            .cone_half_angles
            .iter()
            .enumerate()
            .map(|(l, phi)| Ok(Collar::cone(l, Angle::new(*phi)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            phi_max: s.phi_max(),
            geodesic,
            cone,
            certificate: certify_disjoint(s)?,
        })
    }

    pub fn total_area(&self) -> f64 {
        self.geodesic
            .iter()
            .chain(&self.cone)
            .map(|c| collar_metric(c).closed_form_area())
            .sum()
    }
}

fn surface_cos_phi_max(s: &ConeSurface) -> Result<f64> {
    match s.phi_max() {
        None => Ok(1.0),
        Some(phi) => Ok(Angle::new(phi)?.cos()),
    }
}

/// Checks, pants by pants, that the geodesic and cone collars are pairwise disjoint.
///
/// The separations come from the pants solvers: seams for two geodesics, the
/// perpendicular from a cone to a boundary, and the cone-to-cone segment of a
/// joker's hat. Every geodesic collar uses `phi_max`; cone collars use their
/// own angle.
pub fn certify_disjoint(s: &ConeSurface) -> Result<DisjointnessCertificate> {
    let cos_max = surface_cos_phi_max(s)?;
    let w = |i: usize| -> Result<f64> {
        let l = s
            .curve_lengths
            .get(i)
            .ok_or_else(|| GeometryError::InvalidSurface(format!("missing curve {i}")))?;
        Ok(width_with_cos(Length::new(*l)?, cos_max))
    };
    let v = |l: usize| -> Result<f64> {
        let phi = s
            .cone_half_angles
            .get(l)
            .ok_or_else(|| GeometryError::InvalidSurface(format!("missing cone {l}")))?;
        Ok(cone_collar_width(Angle::new(*phi)?))
    };
    let mut records = Vec::new();
    for (k, slots) in s.pants.iter().enumerate() {
        let curves: Vec<(usize, BoundaryRef)> = slots
            .iter()
            .filter_map(|b| match *b {
                BoundaryRef::Curve(i) => Some((i, *b)),
                BoundaryRef::Cone(_) => None,
            })
            .collect();
        let cones: Vec<(usize, BoundaryRef)> = slots
            .iter()
            .filter_map(|b| match *b {
                BoundaryRef::Cone(l) => Some((l, *b)),
                BoundaryRef::Curve(_) => None,
            })
            .collect();
        match s.pants_geometry(k)? {
            Pants::Y(y) => {
                for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                    records.push(PairRecord::new(
                        k,
                        PairKind::GeodesicGeodesic,
                        (curves[i].1, curves[j].1),
                        "seam > w_i + w_j",
                        y.seam_length(i, j)?,
                        w(curves[i].0)? + w(curves[j].0)?,
                    ));
                }
            }
            Pants::V(vp) => {
                let split = vp.split();
                let (c1, c2) = (curves[0], curves[1]);
                let (cone, cref) = cones[0];
                records.push(PairRecord::new(
                    k,
                    PairKind::GeodesicGeodesic,
                    (c1.1, c2.1),
                    "c_1 + c_2 > w_i + w_j",
                    split.seam_pieces[0] + split.seam_pieces[1],
                    w(c1.0)? + w(c2.0)?,
                ));
                for (slot, c) in [c1, c2].into_iter().enumerate() {
                    records.push(PairRecord::new(
                        k,
                        PairKind::ConeGeodesic,
                        (cref, c.1),
                        "d(p, gamma) > w + v",
                        vp.cone_to_boundary_distance(slot),
                        w(c.0)? + v(cone)?,
                    ));
                }
            }
            Pants::Hat(hat) => {
                let g = hat.geometry();
                let (curve, gref) = curves[0];
                records.push(PairRecord::new(
                    k,
                    PairKind::ConeCone,
                    (cones[0].1, cones[1].1),
                    "d(p, p') > v + v'",
                    g.cone_to_cone,
                    v(cones[0].0)? + v(cones[1].0)?,
                ));
                for (slot, (cone, cref)) in cones.iter().enumerate() {
                    records.push(PairRecord::new(
                        k,
                        PairKind::ConeGeodesic,
                        (*cref, gref),
                        "d(p, gamma) > w + v",
                        g.cone_to_boundary[slot],
                        w(curve)? + v(*cone)?,
                    ));
                }
            }
        }
    }
    Ok(DisjointnessCertificate { records })
}

/// Necessary condition for two closed geodesics to cross transversally:
/// `sinh(l_gamma / 2) sinh(l_delta / 2) > cos(phi_max)`. Returns the bound
/// `cos(phi_max)` and whether the condition holds.
pub fn intersection_inequality(
    len_gamma: Length,
    len_delta: Length,
    phi_max: Angle,
) -> (f64, bool) {
    let bound = phi_max.cos();
    let product = (len_gamma.value() / 2.0).sinh() * (len_delta.value() / 2.0).sinh();
    (bound, product > bound)
}

/// Distance from the boundary `gamma'` of a V-piece to the collar of its other
/// boundary `gamma`: the seam minus `w(len_gamma, phi)`.
pub fn optimality_probe(phi: f64, len_gamma: f64, len_gamma_prime: f64) -> Result<f64> {
    let phi = Angle::new(phi)?;
    let len = Length::new(len_gamma)?;
    let v = VPiece::new(phi, len, Length::new(len_gamma_prime)?)?;
    Ok(v.seam_length() - geodesic_collar_width(len, phi))
}

/// Infimum of [`optimality_probe`] over `len_gamma_prime`, reached as it
/// grows without bound: the seam tends to the classical width of `gamma`.
pub fn optimality_probe_limit(phi: f64, len_gamma: f64) -> Result<f64> {
    let phi = Angle::new(phi)?;
    let len = Length::new(len_gamma)?;
    Ok(classical_collar_width(len) - geodesic_collar_width(len, phi))
}

/// Smallest `len_gamma_prime` in `[start, cap]` with probe gap below `eps`, by
/// doubling then bisection; `None` if the gap at `cap` is still `>= eps`.
pub fn optimality_search(
    phi: f64,
    len_gamma: f64,
    eps: f64,
    start: f64,
    cap: f64,
) -> Result<Option<f64>> {
    let below = |lp: f64| optimality_probe(phi, len_gamma, lp).map(|g| g < eps);
    if below(start)? {
        return Ok(Some(start));
    }
    let (mut lo, mut hi) = (start, start);
    while !below(hi)? {
        if hi >= cap {
            return Ok(None);
        }
        lo = hi;
        hi = (hi * 2.0).min(cap);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::validate_surface;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
    use BoundaryRef::{Cone, Curve};

    fn len(v: f64) -> Length {
        Length::new(v).unwrap()
    }
    fn ang(v: f64) -> Angle {
        Angle::new(v).unwrap()
    }

    const ACOSH_2: f64 = 1.316_957_896_924_816_7;
    const ASINH_1: f64 = 0.881_373_587_019_543;

    #[test]
    fn width_values() {
        let w = geodesic_collar_width(len(2.0 * ASINH_1), ang(FRAC_PI_3));
        assert!((w - 0.481_211_825_059_603_4).abs() < 1e-15);
        assert!((cone_collar_width(ang(FRAC_PI_6)) - ACOSH_2).abs() < 1e-15);
        assert!((cone_collar_width(ang(FRAC_PI_3)) - 0.549_306_144_334_054_8).abs() < 1e-15);
        assert!((torus_sharp_width(ang(FRAC_PI_3)) - ACOSH_2).abs() < 1e-15);
        assert!((geodesic_collar_width(len(2.0), ang(FRAC_PI_4)) - 0.570_273_503_2).abs() < 1e-10);
    }

    #[test]
    fn widths_vanish_towards_right_angle() {
        let phi = ang(FRAC_PI_2 - 1e-9);
        assert!(geodesic_collar_width(len(1.0), phi) < 1e-8);
        assert!(cone_collar_width(phi) < 1e-8);
        // the torus constant stays at arccosh(sqrt 2)
        assert!((torus_sharp_width(phi) - 2f64.sqrt().acosh()).abs() < 1e-8);
    }

    #[test]
    fn cone_collar_area_at_pi_over_six() {
        let m = collar_metric(&Collar::cone(0, ang(FRAC_PI_6)));
        assert!((m.closed_form_area() - PI / 3.0).abs() < 1e-14);
        assert!((m.integrated_area() - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_collar_area_integrates() {
        let c = Collar::geodesic(0, len(0.3), 0.7);
        let m = collar_metric(&c);
        let rel = (m.integrated_area() - m.closed_form_area()).abs() / m.closed_form_area();
        assert!(rel < 1e-12);
        let thin = collar_metric(&Collar::geodesic(0, len(1.0), 1e-12));
        assert!(thin.closed_form_area() < 1e-11);
    }

    #[test]
    fn symmetric_hat_margin() {
        let s = ConeSurface {
            genus: 0,
            cone_half_angles: vec![FRAC_PI_4; 4],
            curve_lengths: vec![2.0],
            pants: vec![[Cone(0), Cone(1), Curve(0)], [Cone(2), Cone(3), Curve(0)]],
        };
        assert!(validate_surface(&s).passed());
        let cert = certify_disjoint(&s).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.records.len(), 6);
        let cone_geo: Vec<_> = cert
            .records
            .iter()
            .filter(|r| r.kind == PairKind::ConeGeodesic)
            .collect();
        // 1.5146422081 - (0.5702735032 + 0.8813735870), evaluated at 40 digits
        for r in cone_geo {
            assert!((r.margin - 0.062_995_117_9).abs() < 1e-10, "{}", r.margin);
        }
    }

    #[test]
    fn classical_genus_two() {
        let s = ConeSurface {
            genus: 2,
            cone_half_angles: vec![],
            curve_lengths: vec![0.5, 1.5, 4.0],
            pants: vec![
                [Curve(0), Curve(1), Curve(2)],
                [Curve(0), Curve(1), Curve(2)],
            ],
        };
        let atlas = CollarAtlas::build(&s).unwrap();
        assert_eq!(atlas.phi_max, None);
        assert!(atlas.certificate.passed());
        assert_eq!(atlas.certificate.records.len(), 6);
        assert!((atlas.geodesic[0].width - classical_collar_width(len(0.5))).abs() < 1e-15);
    }

    #[test]
    fn intersection_inequality_values() {
        let l = len(2.0 * ASINH_1);
        let (bound, holds) = intersection_inequality(l, l, ang(FRAC_PI_3));
        assert!((bound - 0.5).abs() < 1e-15 && holds);
        assert!(!intersection_inequality(len(1e-3), len(1e-3), ang(0.7)).1);
        assert!(intersection_inequality(len(1e-3), len(1e-3), ang(FRAC_PI_2 - 1e-12)).1);
    }

    #[test]
    fn probe_decreases_towards_limit() {
        let mut last = f64::INFINITY;
        for lp in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
            let g = optimality_probe(FRAC_PI_4, 2.0, lp).unwrap();
            assert!(g > 0.0 && g < last);
            last = g;
        }
        let limit = optimality_probe_limit(FRAC_PI_4, 2.0).unwrap();
        assert!(last > limit && last - limit < 1e-6);
        assert!(optimality_search(FRAC_PI_4, 2.0, limit * 1.01, 1.0, 1e4)
            .unwrap()
            .is_some());
        assert!(optimality_search(FRAC_PI_4, 2.0, limit, 1.0, 1e4)
            .unwrap()
            .is_none());
    }
}
