//! Length bookkeeping for building a short partition.
//!
//! Neighbourhoods of the cone points are grown until their boundaries touch
//! themselves, each other, or an already found boundary geodesic. Each such
//! event yields one or two geodesics whose lengths are bounded in terms of
//! `U = 2 pi (2g - 2 + n)`, after which a piece containing the cone(s) is cut
//! away. Once the cones are gone, the remaining geodesics come from an
//! induction whose boundary bound grows by `2U` per step.
//!
//! The ledger tracks only bounds and topology (genus, cones, and boundary
//! geodesics of the remaining surface). Events are supplied by the caller; a
//! seeded generator of legal sequences is provided for testing.
//!
//! Bounds stored here are right-hand sides of strict inequalities: a bound `b`
//! for a geodesic means its length is `< b`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::surface::{partition_size, Signature};
use crate::trig::Angle;

/// A metric disk of radius `radius` around a cone point of half-angle `phi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeNeighborhood {
    pub phi: Angle,
    pub radius: f64,
}

impl ConeNeighborhood {
    pub fn new(phi: Angle, radius: f64) -> Result<Self> {
        if radius.is_finite() && radius >= 0.0 {
            Ok(Self { phi, radius })
        } else {
            Err(GeometryError::Domain {
                what: "neighbourhood radius (must be >= 0)",
                value: radius,
            })
        }
    }
}

/// `2 phi (cosh r - 1)`.
pub fn zone_area(z: &ConeNeighborhood) -> f64 {
    4.0 * z.phi.value() * (z.radius / 2.0).sinh().powi(2)
}

/// `2 phi sinh r`.
pub fn zone_boundary_length(z: &ConeNeighborhood) -> f64 {
    2.0 * z.phi.value() * z.radius.sinh()
}

/// Radius at which the neighbourhood area reaches `surface_area`:
/// `arccosh(1 + A / (2 phi))`.
pub fn max_radius(phi: Angle, surface_area: f64) -> Result<f64> {
    if !(surface_area.is_finite() && surface_area > 0.0) {
        return Err(GeometryError::Domain {
            what: "surface area (must be positive)",
            value: surface_area,
        });
    }
    let t = surface_area / (2.0 * phi.value());
    // arccosh(1 + t) = ln(1 + t + sqrt(t (t + 2)))
    Ok((t + (t * (t + 2.0)).sqrt()).ln_1p())
}

/// `4 pi (3g - 3 + n)(2g - 2 + n)`.
pub fn bers_bound(sig: Signature) -> Result<f64> {
    let (m, p) = partition_size(sig)?;
    Ok(4.0 * PI * f64::from(m * p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Case1,
    Case2,
    Case3,
}

/// Bound for a geodesic produced by one event. `incoming` is the bound of the
/// boundary geodesic met in case 3 and is ignored otherwise.
pub fn case_bound(kind: CaseKind, sig: Signature, incoming: f64) -> Result<f64> {
    let (_, p) = partition_size(sig)?;
    let unit = 2.0 * PI * f64::from(p);
    Ok(match kind {
        CaseKind::Case1 => unit,
        CaseKind::Case2 => 2.0 * unit,
        CaseKind::Case3 => incoming + unit,
    })
}

/// One step of the partition procedure. Cones are numbered from 0, geodesics
/// in the order they are found starting from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LedgerEvent {
    /// The neighbourhood boundary of `cone` stops being simple. Without a
    /// partner, the two loops give two geodesics bounding a V-piece around
    /// `cone`. With a partner, one loop is homotopic to the partner cone and
    /// the other gives a geodesic bounding a joker's hat.
    Case1 {
        cone: usize,
        #[serde(default)]
        partner: Option<usize>,
    },
    /// Two neighbourhood boundaries meet; the geodesic bounds a joker's hat.
    Case2 { cones: [usize; 2] },
    /// A neighbourhood boundary meets boundary geodesic `boundary`; the new
    /// geodesic and `boundary` bound a V-piece around `cone`.
    Case3 { cone: usize, boundary: usize },
    /// A geodesic found once all cones are gone. Without `boundaries` it is
    /// non-separating; with them, it cuts off a Y-piece with those two
    /// boundary geodesics.
    Induction {
        #[serde(default)]
        boundaries: Option<[usize; 2]>,
    },
}

impl std::fmt::Display for LedgerEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LedgerEvent::Case1 {
                cone,
                partner: None,
            } => write!(f, "case 1 (cone {cone})"),
            LedgerEvent::Case1 {
                cone,
                partner: Some(q),
            } => {
                write!(f, "case 1 (cone {cone}, loop around cone {q})")
            }
            LedgerEvent::Case2 { cones: [a, b] } => write!(f, "case 2 (cones {a}, {b})"),
            LedgerEvent::Case3 { cone, boundary } => {
                write!(f, "case 3 (cone {cone}, geodesic {boundary})")
            }
            LedgerEvent::Induction { boundaries: None } => write!(f, "induction"),
            LedgerEvent::Induction {
                boundaries: Some([a, b]),
            } => {
                write!(f, "induction (Y-piece with {a}, {b})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicBound {
    /// Position `k` in the order of discovery, from 1.
    pub index: usize,
    /// The bound as a multiple of `U`.
    pub units: u64,
    pub bound: f64,
    /// `4 pi k (2g - 2 + n)`.
    pub allowance: f64,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerStep {
    /// Step number `j`, from 1.
    pub step: usize,
    pub event: LedgerEvent,
    /// Bound on the boundary length of the remaining surface after this step,
    /// as a multiple of `U` and as a length.
    pub boundary_units: u64,
    pub boundary_bound: f64,
    /// `4 pi j (2g - 2 + n)`.
    pub boundary_allowance: f64,
    pub new_geodesics: Vec<usize>,
    /// Existing geodesics that the event's curve turned out to coincide with.
    pub merged_with: Vec<usize>,
    pub removed: String,
}

/// Topology of the surface still to be cut.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Remaining {
    pub genus: u32,
    pub cones: Vec<usize>,
    /// Boundary geodesics; a geodesic with both sides on the surface is listed twice.
    pub boundary: Vec<usize>,
}

impl Remaining {
    /// Curves still needed inside: `3h - 3 + |cones| + |boundary|`.
    pub fn interior_curves(&self) -> i64 {
        3 * i64::from(self.genus) - 3 + self.cones.len() as i64 + self.boundary.len() as i64
    }

    pub fn pants(&self) -> i64 {
        2 * i64::from(self.genus) - 2 + self.cones.len() as i64 + self.boundary.len() as i64
    }

    fn is_one_cone_torus(&self) -> bool {
        self.genus == 1 && self.cones.len() == 1 && self.boundary.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub signature: Signature,
    /// `U = 2 pi (2g - 2 + n)`.
    pub unit: f64,
    pub steps: Vec<LedgerStep>,
    pub geodesics: Vec<GeodesicBound>,
    /// Current boundary bound in multiples of `U`. Every bound in the ledger is
    /// an integer multiple of `U`, so comparisons are exact.
    pub boundary_units: u64,
    pub remaining: Remaining,
    /// Geodesics found while cones were still present.
    pub cone_phase_geodesics: usize,
    pub cone_phase_steps: usize,
    /// Set once the remaining surface is a single pants.
    pub complete: bool,
}

impl Ledger {
    pub fn new(sig: Signature) -> Result<Self> {
        let (_, p) = partition_size(sig)?;
        Ok(Self {
            signature: sig,
            unit: 2.0 * PI * f64::from(p),
            steps: Vec::new(),
            geodesics: Vec::new(),
            boundary_units: 0,
            remaining: Remaining {
                genus: sig.genus,
                cones: (0..sig.cones as usize).collect(),
                boundary: Vec::new(),
            },
            cone_phase_geodesics: 0,
            cone_phase_steps: 0,
            complete: false,
        })
    }

    /// All partition geodesics have been found: what is left is one pants.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn geodesic_bound(&self, k: usize) -> Option<f64> {
        self.geodesics.get(k.checked_sub(1)?).map(|g| g.bound)
    }

    pub fn max_geodesic_bound(&self) -> f64 {
        self.geodesics.iter().map(|g| g.bound).fold(0.0, f64::max)
    }

    /// Allowance at `k = 3g - 3 + n`, the partition constant.
    pub fn partition_bound(&self) -> f64 {
        2.0 * self.unit * f64::from(self.signature.curve_count())
    }

    pub fn boundary_bound(&self) -> f64 {
        self.boundary_units as f64 * self.unit
    }

    /// Every recorded bound within its allowance: `2j U` for the boundary
    /// after step `j`, `2k U` for the `k`-th geodesic.
    pub fn bounds_hold(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.boundary_units <= 2 * s.step as u64)
            && self.geodesics.iter().all(|g| g.units <= 2 * g.index as u64)
    }

    fn invalid(&self, reason: impl Into<String>) -> GeometryError {
        GeometryError::InvalidEvent {
            step: self.steps.len() + 1,
            reason: reason.into(),
        }
    }

    fn take_cone(&mut self, cone: usize) -> Result<()> {
        let pos = self
            .remaining
            .cones
            .iter()
            .position(|c| *c == cone)
            .ok_or_else(|| self.invalid(format!("cone {cone} is not on the remaining surface")))?;
        self.remaining.cones.remove(pos);
        Ok(())
    }

    fn take_boundary(&mut self, k: usize) -> Result<u64> {
        let pos = self
            .remaining
            .boundary
            .iter()
            .position(|b| *b == k)
            .ok_or_else(|| {
                self.invalid(format!(
                    "geodesic {k} is not a boundary of the remaining surface"
                ))
            })?;
        self.remaining.boundary.remove(pos);
        Ok(self.geodesics[k - 1].units)
    }

    fn push_geodesic(&mut self, units: u64) -> usize {
        let index = self.geodesics.len() + 1;
        self.geodesics.push(GeodesicBound {
            index,
            units,
            bound: units as f64 * self.unit,
            allowance: 2.0 * self.unit * index as f64,
            step: self.steps.len() + 1,
        });
        index
    }

    fn record(&mut self, event: LedgerEvent, new: Vec<usize>, merged: Vec<usize>, removed: String) {
        let step = self.steps.len() + 1;
        self.steps.push(LedgerStep {
            step,
            event,
            boundary_units: self.boundary_units,
            boundary_bound: self.boundary_bound(),
            boundary_allowance: 2.0 * self.unit * step as f64,
            new_geodesics: new,
            merged_with: merged,
            removed,
        });
    }

    fn two_distinct_cones(&self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(self.invalid(format!("cone {a} cannot pair with itself")));
        }
        for c in [a, b] {
            if !self.remaining.cones.contains(&c) {
                return Err(self.invalid(format!("cone {c} is not on the remaining surface")));
            }
        }
        Ok(())
    }

    /// Handles events arriving after completion. They may only re-find a
    /// boundary of the final pants while removing its cones.
    fn apply_merge(&mut self, event: LedgerEvent) -> Result<()> {
        let r = self.remaining.clone();
        let merged = match event {
            LedgerEvent::Case1 {
                cone,
                partner: Some(q),
            }
            | LedgerEvent::Case2 { cones: [cone, q] }
                if r.cones.len() == 2 && r.boundary.len() == 1 =>
            {
                self.two_distinct_cones(cone, q)?;
                r.boundary.clone()
            }
            LedgerEvent::Case1 {
                cone,
                partner: None,
            } if r.cones == [cone] => r.boundary.clone(),
            LedgerEvent::Case3 { cone, boundary }
                if r.cones == [cone] && r.boundary.contains(&boundary) =>
            {
                r.boundary
                    .iter()
                    .copied()
                    .filter(|b| *b != boundary)
                    .collect()
            }
            _ => {
                return Err(self.invalid(format!(
                "all partition geodesics are already found; {event} does not match the final pants"
            )))
            }
        };
        self.remaining.cones.clear();
        self.record(
            event,
            vec![],
            merged,
            "final pants (curve already found)".into(),
        );
        Ok(())
    }

    /// Applies one event, updating bounds and the remaining topology.
    pub fn apply(&mut self, event: LedgerEvent) -> Result<()> {
        if self.is_complete() {
            return self.apply_merge(event);
        }
        let pants_left = self.remaining.pants();
        let cone_event = !matches!(event, LedgerEvent::Induction { .. });
        if cone_event && pants_left < 2 && !self.remaining.is_one_cone_torus() {
            return Err(self.invalid("remaining surface is a single pants"));
        }
        let (new, removed) = match event {
            LedgerEvent::Case1 {
                cone,
                partner: None,
            } => {
                if self.remaining.is_one_cone_torus() {
                    if self.remaining.cones != [cone] {
                        return Err(
                            self.invalid(format!("cone {cone} is not on the remaining surface"))
                        );
                    }
                    // the V-piece is the whole surface; it stays as the final pants
                    self.remaining.genus = 0;
                    let g = self.push_geodesic(1);
                    self.remaining.boundary.extend([g, g]);
                    self.boundary_units += 2;
                    (vec![g], format!("V-piece with cone {cone} glued to itself"))
                } else {
                    if self.remaining.genus == 0 {
                        return Err(self.invalid(
                            "case 1 with two geodesics needs positive genus on the remaining surface",
                        ));
                    }
                    self.take_cone(cone)?;
                    self.remaining.genus -= 1;
                    let g1 = self.push_geodesic(1);
                    let g2 = self.push_geodesic(1);
                    self.remaining.boundary.extend([g1, g2]);
                    self.boundary_units += 2;
                    (vec![g1, g2], format!("V-piece with cone {cone}"))
                }
            }
            LedgerEvent::Case1 {
                cone,
                partner: Some(q),
            }
            | LedgerEvent::Case2 { cones: [cone, q] } => {
                self.two_distinct_cones(cone, q)?;
                self.take_cone(cone)?;
                self.take_cone(q)?;
                let units = if matches!(event, LedgerEvent::Case2 { .. }) {
                    2
                } else {
                    1
                };
                let g = self.push_geodesic(units);
                self.remaining.boundary.push(g);
                self.boundary_units += units;
                (vec![g], format!("joker's hat with cones {cone}, {q}"))
            }
            LedgerEvent::Case3 { cone, boundary } => {
                if !self.remaining.cones.contains(&cone) {
                    return Err(
                        self.invalid(format!("cone {cone} is not on the remaining surface"))
                    );
                }
                let incoming = self.take_boundary(boundary)?.min(self.boundary_units);
                self.take_cone(cone)?;
                let g = self.push_geodesic(incoming + 1);
                self.remaining.boundary.push(g);
                self.boundary_units += 1;
                (
                    vec![g],
                    format!("V-piece with cone {cone} and geodesic {boundary}"),
                )
            }
            LedgerEvent::Induction { boundaries } => {
                if !self.remaining.cones.is_empty() {
                    return Err(self.invalid("induction before all cones are removed"));
                }
                let removed = match boundaries {
                    None => {
                        if self.remaining.genus == 0 {
                            return Err(self.invalid("no non-separating curve on a planar surface"));
                        }
                        self.remaining.genus -= 1;
                        "nothing (non-separating cut)".to_string()
                    }
                    Some([a, b]) => {
                        if pants_left < 2 {
                            return Err(self.invalid("remaining surface is a single pants"));
                        }
                        self.take_boundary(a)?;
                        self.take_boundary(b)?;
                        format!("Y-piece with geodesics {a}, {b}")
                    }
                };
                self.boundary_units += 2;
                let g = self.push_geodesic(self.boundary_units);
                match boundaries {
                    None => self.remaining.boundary.extend([g, g]),
                    Some(_) => self.remaining.boundary.push(g),
                }
                (vec![g], removed)
            }
        };
        if cone_event {
            self.cone_phase_geodesics += new.len();
            self.cone_phase_steps += 1;
        }
        self.complete = self.remaining.interior_curves() == 0;
        self.record(event, new, vec![], removed);
        Ok(())
    }

    /// Every event that [`Ledger::apply`] would accept next, excluding the
    /// merge events accepted after completion.
    pub fn legal_events(&self) -> Vec<LedgerEvent> {
        let mut out = Vec::new();
        if self.is_complete() {
            return out;
        }
        let r = &self.remaining;
        let mut distinct_boundary = r.boundary.clone();
        distinct_boundary.sort_unstable();
        distinct_boundary.dedup();
        if !r.cones.is_empty() {
            if r.is_one_cone_torus() {
                out.push(LedgerEvent::Case1 {
                    cone: r.cones[0],
                    partner: None,
                });
                return out;
            }
            for (i, &a) in r.cones.iter().enumerate() {
                if r.genus > 0 {
                    out.push(LedgerEvent::Case1 {
                        cone: a,
                        partner: None,
                    });
                }
                for &b in &r.cones[i + 1..] {
                    out.push(LedgerEvent::Case1 {
                        cone: a,
                        partner: Some(b),
                    });
                    out.push(LedgerEvent::Case2 { cones: [a, b] });
                }
                for &k in &distinct_boundary {
                    out.push(LedgerEvent::Case3 {
                        cone: a,
                        boundary: k,
                    });
                }
            }
        } else {
            if r.genus > 0 {
                out.push(LedgerEvent::Induction { boundaries: None });
            }
            for i in 0..r.boundary.len() {
                for j in i + 1..r.boundary.len() {
                    let pair = [r.boundary[i], r.boundary[j]];
                    let ev = LedgerEvent::Induction {
                        boundaries: Some(pair),
                    };
                    if !out.contains(&ev) {
                        out.push(ev);
                    }
                }
            }
        }
        out
    }
}

/// Runs a full event list. Fails on the first illegal event, or at the end if
/// geodesics are still missing.
pub fn run_ledger(sig: Signature, events: &[LedgerEvent]) -> Result<Ledger> {
    let mut ledger = Ledger::new(sig)?;
    for ev in events {
        ledger.apply(*ev)?;
    }
    if !ledger.is_complete() {
        return Err(GeometryError::InvalidEvent {
            step: events.len(),
            reason: format!(
                "run ended with {} of {} geodesics found",
                ledger.geodesics.len(),
                sig.curve_count()
            ),
        });
    }
    Ok(ledger)
}

/// A random legal event sequence, choosing uniformly among legal events.
pub fn random_events<R: Rng + ?Sized>(sig: Signature, rng: &mut R) -> Result<Vec<LedgerEvent>> {
    let mut ledger = Ledger::new(sig)?;
    let mut events = Vec::new();
    while !ledger.is_complete() {
        let legal = ledger.legal_events();
        let ev = legal[rng.random_range(0..legal.len())];
        ledger.apply(ev)?;
        events.push(ev);
    }
    Ok(events)
}
