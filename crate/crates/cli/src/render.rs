//! Poincaré-disk SVG figures of pants pieces built in the half-plane model.
//!
//! Geodesic sides are drawn as arcs of circles orthogonal to the unit circle.
//! Collars are sampled as closed polylines and clipped to the piece.

use std::fmt::Write as _;

use conecollar::collars::{classical_collar_width, cone_collar_width, geodesic_collar_width};
use conecollar::oracle::{
    common_perpendicular, construct_hat_quadrilateral, construct_hexagon_from_alternate, construct_trirectangle,
    construct_vpiece_pentagon, distance_to_geodesic, from_disk, hdist, interior_angle, to_disk,
    HGeodesic, HIsometry, HPoint,
};
use conecollar::trig::{Angle, Length};
use conecollar::GeometryError;

const SIZE: f64 = 440.0;
const RADIUS: f64 = 200.0;
const BAND_SAMPLES: usize = 400;
const CIRCLE_SAMPLES: usize = 180;
const PALETTE: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Trirectangle,
    YPiece,
    VPiece,
    JokersHat,
}

impl PieceKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "trirectangle" => Some(Self::Trirectangle),
            "ypiece" => Some(Self::YPiece),
            "vpiece" => Some(Self::VPiece),
            "jokershat" => Some(Self::JokersHat),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::Trirectangle => 2,
            _ => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Trirectangle => "trirectangle",
            Self::YPiece => "ypiece",
            Self::VPiece => "vpiece",
            Self::JokersHat => "jokershat",
        }
    }
}

enum Region {
    /// Points within `width` of a geodesic.
    Band { line: HGeodesic, width: f64 },
    /// Metric disk around a cone point.
    Disk { center: HPoint, radius: f64 },
}

struct Piece {
    kind: PieceKind,
    params: Vec<f64>,
    vertices: Vec<HPoint>,
    /// Sides lying on geodesic boundaries of the pants, with the boundary length.
    boundary_sides: Vec<(usize, f64)>,
    /// Cone vertices with their half-angles.
    cones: Vec<(usize, f64)>,
}

fn angle(v: f64) -> Result<Angle, GeometryError> {
    Angle::new(v)
}

fn length(v: f64) -> Result<Length, GeometryError> {
    Length::new(v)
}

fn build(kind: PieceKind, p: &[f64]) -> Result<Piece, GeometryError> {
    let piece = |vertices: Vec<HPoint>, boundary_sides, cones| Piece {
        kind,
        params: p.to_vec(),
        vertices,
        boundary_sides,
        cones,
    };
    Ok(match kind {
        PieceKind::Trirectangle => {
            let t = construct_trirectangle(p[0], p[1])?;
            piece(t.vertices.to_vec(), vec![], vec![])
        }
        PieceKind::YPiece => {
            for &l in p {
                length(l)?;
            }
            let h = construct_hexagon_from_alternate(p[0] / 2.0, p[1] / 2.0, p[2] / 2.0)?;
            piece(h.vertices.to_vec(), vec![(5, p[0]), (1, p[1]), (3, p[2])], vec![])
        }
        PieceKind::VPiece => {
            angle(p[0])?;
            length(p[1])?;
            length(p[2])?;
            let v = construct_vpiece_pentagon(p[1] / 2.0, p[2] / 2.0, p[0])?;
            piece(v.vertices.to_vec(), vec![(1, p[1]), (3, p[2])], vec![(0, p[0])])
        }
        PieceKind::JokersHat => {
            angle(p[0])?;
            angle(p[1])?;
            length(p[2])?;
            let h = construct_hat_quadrilateral(p[0], p[1], p[2] / 2.0)?;
            piece(h.vertices.to_vec(), vec![(2, p[2])], vec![(0, p[0]), (1, p[1])])
        }
    })
}

fn side_line(v: &[HPoint], k: usize) -> Result<HGeodesic, GeometryError> {
    HGeodesic::through(v[k], v[(k + 1) % v.len()])
}

impl Piece {
    /// Collars with the cone-surface widths, `phi_max` taken over the
    /// cones of this piece.
    fn collars(&self) -> Result<Vec<(String, Region)>, GeometryError> {
        let phi_max = self.cones.iter().map(|c| c.1).reduce(f64::max);
        let mut out = Vec::new();
        for &(k, l) in &self.boundary_sides {
            let w = match phi_max {
                Some(phi) => geodesic_collar_width(length(l)?, angle(phi)?),
                None => classical_collar_width(length(l)?),
            };
            out.push((
                format!("geodesic collar on side {k}, length {l}, width {w}"),
                Region::Band {
                    line: side_line(&self.vertices, k)?,
                    width: w,
                },
            ));
        }
        for &(k, phi) in &self.cones {
            let v = cone_collar_width(angle(phi)?);
            out.push((
                format!("cone collar at vertex {k}, half-angle {phi}, width {v}"),
                Region::Disk {
                    center: self.vertices[k],
                    radius: v,
                },
            ));
        }
        Ok(out)
    }

    /// Measured separation minus the sum of the two widths, for every pair of
    /// collars, in the piece's own geometry.
    fn margins(&self, collars: &[(String, Region)]) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..collars.len() {
            for j in i + 1..collars.len() {
                let gap = match (&collars[i].1, &collars[j].1) {
                    (Region::Band { line, width }, Region::Disk { center, radius })
                    | (Region::Disk { center, radius }, Region::Band { line, width }) => {
                        distance_to_geodesic(*center, *line) - width - radius
                    }
                    (
                        Region::Disk { center: a, radius: ra },
                        Region::Disk { center: b, radius: rb },
                    ) => hdist(*a, *b) - ra - rb,
                    (Region::Band { line: a, width: wa }, Region::Band { line: b, width: wb }) => {
                        match common_perpendicular(*a, *b) {
                            Some((p, q)) => hdist(p, q) - wa - wb,
                            None => continue,
                        }
                    }
                };
                out.push(format!("margin between collars {i} and {j}: {gap}"));
            }
        }
        out
    }
}

/// Map from the half-plane to screen coordinates, with the piece centred.
struct View {
    recentre: HIsometry,
}

impl View {
    fn new(vertices: &[HPoint]) -> Self {
        // Klein-model centroid: vertex average there lies inside the convex piece
        let (mut x, mut y) = (0.0, 0.0);
        for &p in vertices {
            let (u, v) = to_disk(p);
            let s = 2.0 / (1.0 + u * u + v * v);
            x += s * u;
            y += s * v;
        }
        let n = vertices.len() as f64;
        let (x, y) = (x / n, y / n);
        let s = 1.0 / (1.0 + (1.0 - x * x - y * y).max(0.0).sqrt());
        Self {
            recentre: HIsometry::centering(from_disk(s * x, s * y)),
        }
    }

    fn disk(&self, p: HPoint) -> (f64, f64) {
        to_disk(self.recentre.apply(p))
    }

    fn screen(&self, p: HPoint) -> (f64, f64) {
        screen(self.disk(p))
    }
}

fn screen((x, y): (f64, f64)) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * x, SIZE / 2.0 - RADIUS * y)
}

/// SVG path segment continuing from disk point `p` to disk point `q` along
/// the geodesic joining them.
fn geodesic_segment(p: (f64, f64), q: (f64, f64)) -> String {
    let (px, py) = p;
    let (qx, qy) = q;
    let det = px * qy - py * qx;
    let (sx, sy) = screen(q);
    if det.abs() < 1e-12 {
        return format!(" L {sx:.4} {sy:.4}");
    }
    // centre c of the orthogonal circle: c.p = (|p|^2 + 1) / 2, same for q
    let bp = (px * px + py * py + 1.0) / 2.0;
    let bq = (qx * qx + qy * qy + 1.0) / 2.0;
    let cx = (bp * qy - bq * py) / det;
    let cy = (px * bq - qx * bp) / det;
    let r = (cx * cx + cy * cy - 1.0).sqrt() * RADIUS;
    let cross = (px - cx) * (qy - cy) - (py - cy) * (qx - cx);
    let sweep = if cross > 0.0 { 0 } else { 1 };
    format!(" A {r:.4} {r:.4} 0 0 {sweep} {sx:.4} {sy:.4}")
}

fn polygon_path(view: &View, vertices: &[HPoint]) -> String {
    let pts: Vec<(f64, f64)> = vertices.iter().map(|&p| view.disk(p)).collect();
    let (x0, y0) = screen(pts[0]);
    let mut d = format!("M {x0:.4} {y0:.4}");
    for k in 0..pts.len() {
        d.push_str(&geodesic_segment(pts[k], pts[(k + 1) % pts.len()]));
    }
    d.push_str(" Z");
    d
}

fn polyline_path(points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut d = String::new();
    for (k, (x, y)) in points.into_iter().enumerate() {
        let _ = write!(d, "{} {x:.4} {y:.4} ", if k == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

fn region_path(view: &View, region: &Region) -> String {
    match *region {
        Region::Band { line, width } => {
            // in the frame where the line is the imaginary axis the band is the
            // wedge |x| < sinh(width) y
            let back = HIsometry::to_axis(line).inverse();
            let s = width.sinh();
            let ts = (0..BAND_SAMPLES).map(|k| -15.0 + 30.0 * k as f64 / (BAND_SAMPLES - 1) as f64);
            let ray = |sign: f64, t: f64| {
                let y = t.exp();
                view.screen(back.apply(HPoint { x: sign * s * y, y }))
            };
            let up: Vec<_> = ts.clone().map(|t| ray(1.0, t)).collect();
            let down: Vec<_> = ts.rev().map(|t| ray(-1.0, t)).collect();
            polyline_path(up.into_iter().chain(down))
        }
        Region::Disk { center, radius } => {
            let back = HIsometry::centering(center).inverse();
            let rho = (radius / 2.0).tanh();
            polyline_path((0..CIRCLE_SAMPLES).map(|k| {
                let t = std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64;
                view.screen(back.apply(from_disk(rho * t.cos(), rho * t.sin())))
            }))
        }
    }
}

/// Renders `kind` with `params` (half-angles, then lengths as listed in the
/// command help). With `shade_collars` the collar regions are drawn too.
pub fn render(kind: PieceKind, params: &[f64], shade_collars: bool) -> Result<String, GeometryError> {
    let piece = build(kind, params)?;
    let view = View::new(&piece.vertices);
    let v = &piece.vertices;
    let n = v.len();
    let mut svg = String::new();
    let _ = writeln!(svg, r##"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"##);
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"##
    );
    let _ = writeln!(svg, "<title>{} {:?}</title>", piece.kind.name(), piece.params);
    let _ = writeln!(svg, "<!-- Poincare disk model; half-angles in radians -->");
    for k in 0..n {
        let a = interior_angle(v[k], v[(k + n - 1) % n], v[(k + 1) % n]);
        let side = hdist(v[k], v[(k + 1) % n]);
        let _ = writeln!(svg, "<!-- vertex {k}: measured angle {a} ({} deg); side {k} length {side} -->", a.to_degrees());
    }
    let outline = polygon_path(&view, v);
    let _ = writeln!(
        svg,
        r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#888888" stroke-width="1"/>"##,
        c = SIZE / 2.0
    );
    if shade_collars {
        let collars = piece.collars()?;
        for (label, _) in &collars {
            let _ = writeln!(svg, "<!-- {label} -->");
        }
        for line in piece.margins(&collars) {
            let _ = writeln!(svg, "<!-- {line} -->");
        }
        let _ = writeln!(svg, r##"<defs><clipPath id="piece"><path d="{outline}"/></clipPath></defs>"##);
        let _ = writeln!(svg, r##"<g clip-path="url(#piece)">"##);
        for (k, (_, region)) in collars.iter().enumerate() {
            let _ = writeln!(
                svg,
                r##"<path d="{}" fill="{}" fill-opacity="0.35" stroke="none"/>"##,
                region_path(&view, region),
                PALETTE[k % PALETTE.len()]
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(svg, r##"<path d="{outline}" fill="none" stroke="black" stroke-width="1.5"/>"##);
    for (k, p) in v.iter().enumerate() {
        let (x, y) = view.screen(*p);
        let _ = writeln!(svg, r##"<circle cx="{x:.4}" cy="{y:.4}" r="2.5" fill="black"><title>vertex {k}</title></circle>"##);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
