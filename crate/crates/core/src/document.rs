//! JSON documents for surfaces and certificates.
//!
//! Surface documents give full cone angles `2 phi` and name curves by string
//! ids. Pants boundaries refer to a curve id or to `cone:<index>`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collars::{CollarAtlas, DisjointnessCertificate};
use crate::surface::{validate_surface, BoundaryRef, ConeSurface, PartitionCheckReport};

#[derive(Debug, Error)]
pub enum DocumentError {
    /// Not JSON, or JSON of the wrong shape.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    /// Well-formed but does not describe an admissible partitioned cone-surface.
    #[error("invalid surface: {}", summarize(.0))]
    Invalid(PartitionCheckReport),
}

fn summarize(report: &PartitionCheckReport) -> String {
    report
        .failures()
        .map(|e| match &e.location {
            Some(loc) => format!("{} ({loc}): {}", e.constraint, e.detail),
            None => format!("{}: {}", e.constraint, e.detail),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub id: String,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PantsEntry {
    pub boundaries: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub genus: u32,
    /// Full cone angles in radians.
    pub cone_angles: Vec<f64>,
    pub curves: Vec<CurveEntry>,
    pub pants: Vec<PantsEntry>,
}

const CONE_PREFIX: &str = "cone:";

impl SurfaceDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Curves are named `c0`, `c1`, ... in index order.
    pub fn from_surface(s: &ConeSurface) -> Self {
        let name = |b: &BoundaryRef| match *b {
            BoundaryRef::Curve(i) => format!("c{i}"),
            BoundaryRef::Cone(l) => format!("{CONE_PREFIX}{l}"),
        };
        Self {
            genus: s.genus,
            cone_angles: s.cone_half_angles.iter().map(|p| 2.0 * p).collect(),
            curves: s
                .curve_lengths
                .iter()
                .enumerate()
                .map(|(i, &length)| CurveEntry {
                    id: format!("c{i}"),
                    length,
                })
                .collect(),
            pants: s
                .pants
                .iter()
                .map(|p| PantsEntry {
                    boundaries: p.iter().map(name).collect(),
                })
                .collect(),
        }
    }

    /// Resolves ids and validates. Reference problems that prevent building a
    /// [`ConeSurface`] at all are reported in the same format as
    /// [`validate_surface`] failures.
    pub fn to_surface(&self) -> Result<ConeSurface, DocumentError> {
        let mut report = PartitionCheckReport::default();
        let mut fail = |constraint: &str, location: String, detail: String| {
            report.entries.push(crate::surface::CheckEntry {
                constraint: constraint.into(),
                passed: false,
                location: Some(location),
                detail,
            });
        };
        let mut index = HashMap::new();
        for (i, c) in self.curves.iter().enumerate() {
            if c.id.starts_with(CONE_PREFIX) {
                fail(
                    "curve id",
                    format!("curve {i}"),
                    format!("id {:?} is reserved for cones", c.id),
                );
            }
            if index.insert(c.id.as_str(), i).is_some() {
                fail(
                    "curve id",
                    format!("curve {i}"),
                    format!("duplicate id {:?}", c.id),
                );
            }
        }
        let mut pants = Vec::with_capacity(self.pants.len());
        for (k, p) in self.pants.iter().enumerate() {
            if p.boundaries.len() != 3 {
                fail(
                    "three boundaries",
                    format!("pants {k}"),
                    format!("has {} boundaries", p.boundaries.len()),
                );
                continue;
            }
            let mut slots = [BoundaryRef::Curve(0); 3];
            let mut ok = true;
            for (slot, name) in slots.iter_mut().zip(&p.boundaries) {
                let resolved = match name.strip_prefix(CONE_PREFIX) {
                    Some(l) => l.parse::<usize>().ok().map(BoundaryRef::Cone),
                    None => index.get(name.as_str()).map(|&i| BoundaryRef::Curve(i)),
                };
                match resolved {
                    Some(r) => *slot = r,
                    None => {
                        ok = false;
                        fail(
                            "boundary reference",
                            format!("pants {k}"),
                            format!("unknown boundary {name:?}"),
                        );
                    }
                }
            }
            if ok {
                pants.push(slots);
            }
        }
        if !report.passed() {
            return Err(DocumentError::Invalid(report));
        }
        let surface = ConeSurface {
            genus: self.genus,
            cone_half_angles: self.cone_angles.iter().map(|a| a / 2.0).collect(),
            curve_lengths: self.curves.iter().map(|c| c.length).collect(),
            pants,
        };
        let report = validate_surface(&surface);
        if report.passed() {
            Ok(surface)
        } else {
            Err(DocumentError::Invalid(report))
        }
    }

    /// Curve id for a curve index, as written in this document.
    pub fn curve_id(&self, index: usize) -> Option<&str> {
        self.curves.get(index).map(|c| c.id.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicWidth {
    pub id: String,
    pub length: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeWidth {
    pub index: usize,
    /// Full cone angle.
    pub angle: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthsTable {
    /// Largest cone half-angle; absent without cones.
    pub phi_max: Option<f64>,
    pub geodesics: Vec<GeodesicWidth>,
    pub cones: Vec<ConeWidth>,
}

impl WidthsTable {
    pub fn new(doc: &SurfaceDocument, atlas: &CollarAtlas) -> Self {
        Self {
            phi_max: atlas.phi_max,
            geodesics: atlas
                .geodesic
                .iter()
                .map(|c| GeodesicWidth {
                    id: doc.curve_id(c.owner).unwrap_or_default().to_string(),
                    length: c.core,
                    width: c.width,
                })
                .collect(),
            cones: atlas
                .cone
                .iter()
                .map(|c| ConeWidth {
                    index: c.owner,
                    angle: 2.0 * c.core,
                    width: c.width,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub passed: bool,
    pub min_margin: Option<f64>,
    pub widths: WidthsTable,
    pub certificate: DisjointnessCertificate,
}

impl CertificateDocument {
    pub fn new(doc: &SurfaceDocument, atlas: &CollarAtlas) -> Self {
        Self {
            passed: atlas.certificate.passed(),
            min_margin: atlas.certificate.min_margin(),
            widths: WidthsTable::new(doc, atlas),
            certificate: atlas.certificate.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{random_signature, random_surface, SamplingRanges};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SPHERE: &str = r#"{
        "genus": 0,
        "cone_angles": [1.5707963267948966, 1.5707963267948966, 1.5707963267948966, 1.5707963267948966],
        "curves": [{"id": "gamma", "length": 2.0}],
        "pants": [
            {"boundaries": ["cone:0", "cone:1", "gamma"]},
            {"boundaries": ["cone:2", "cone:3", "gamma"]}
        ]
    }"#;

    #[test]
    fn parses_sample() {
        let doc = SurfaceDocument::from_json(SPHERE).unwrap();
        let s = doc.to_surface().unwrap();
        assert_eq!(s.cone_half_angles, vec![std::f64::consts::FRAC_PI_4; 4]);
        assert_eq!(
            s.pants[0],
            [
                BoundaryRef::Cone(0),
                BoundaryRef::Cone(1),
                BoundaryRef::Curve(0)
            ]
        );
    }

    #[test]
    fn parse_and_invalid_are_distinguished() {
        assert!(matches!(
            SurfaceDocument::from_json("{"),
            Err(DocumentError::Parse(_))
        ));
        assert!(matches!(
            SurfaceDocument::from_json(r#"{"genus": 0}"#),
            Err(DocumentError::Parse(_))
        ));
        let bad = SPHERE.replacen("1.5707963267948966", "3.2", 1);
        let err = SurfaceDocument::from_json(&bad)
            .unwrap()
            .to_surface()
            .unwrap_err();
        assert!(matches!(err, DocumentError::Invalid(_)));
        assert!(err.to_string().contains("cone angle out of range"));
        let unknown = SPHERE.replacen("\"gamma\"]", "\"delta\"]", 1);
        let err = SurfaceDocument::from_json(&unknown)
            .unwrap()
            .to_surface()
            .unwrap_err();
        assert!(err.to_string().contains("unknown boundary"), "{err}");
    }

    #[test]
    fn surfaces_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let sig = random_signature(&mut rng, 3, 6);
            let s = random_surface(sig, &SamplingRanges::default(), &mut rng).unwrap();
            let doc = SurfaceDocument::from_surface(&s);
            let back = SurfaceDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let s2 = back.to_surface().unwrap();
            assert_eq!(s2.pants, s.pants);
            assert_eq!(s2.curve_lengths, s.curve_lengths);
            // halving a doubled float is exact
            assert_eq!(s2.cone_half_angles, s.cone_half_angles);
        }
    }

    #[test]
    fn certificate_round_trip() {
        let doc = SurfaceDocument::from_json(SPHERE).unwrap();
        let atlas = CollarAtlas::build(&doc.to_surface().unwrap()).unwrap();
        let cert = CertificateDocument::new(&doc, &atlas);
        assert!(cert.passed);
        assert_eq!(cert.widths.geodesics.len(), 1);
        assert_eq!(cert.widths.cones.len(), 4);
        assert_eq!(cert.widths.geodesics[0].id, "gamma");
        assert_eq!(
            CertificateDocument::from_json(&cert.to_json()).unwrap(),
            cert
        );
    }
}
