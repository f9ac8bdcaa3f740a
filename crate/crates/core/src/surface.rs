//! Cone-surfaces described by a pants decomposition.
//!
//! Curves and cones are identified by index. A curve glued to one pants along
//! two of its boundary slots appears twice in that pants. Twist parameters are
//! not stored since nothing computed here depends on them.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::pants::{JokersHat, Pants, VPiece, YPiece};
use crate::trig::{Angle, Length};

/// Genus and number of cone points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub genus: u32,
    pub cones: u32,
}

impl Signature {
    /// An admissible signature: `(g, n) >= (0, 4)` lexicographically and not `(1, 0)`.
    pub fn new(genus: u32, cones: u32) -> Result<Self> {
        let sig = Self { genus, cones };
        if sig.is_admissible() {
            Ok(sig)
        } else {
            Err(GeometryError::InadmissibleSignature { genus, cones })
        }
    }

    pub fn is_admissible(&self) -> bool {
        (self.genus, self.cones) >= (0, 4) && (self.genus, self.cones) != (1, 0)
    }

    /// `2g - 2 + n`, which is also the number of pants.
    pub fn complexity(&self) -> u32 {
        2 * self.genus + self.cones - 2
    }

    /// Number of partition curves `3g - 3 + n`.
    pub fn curve_count(&self) -> u32 {
        3 * self.genus + self.cones - 3
    }

    /// Flagged because their optimal collars behave differently from the rest.
    pub fn is_special(&self) -> bool {
        matches!((self.genus, self.cones), (1, 1) | (0, 4))
    }
}

/// `(3g - 3 + n, 2g - 2 + n)`: partition curves and pants.
pub fn partition_size(sig: Signature) -> Result<(u32, u32)> {
    if !sig.is_admissible() {
        return Err(GeometryError::InadmissibleSignature {
            genus: sig.genus,
            cones: sig.cones,
        });
    }
    Ok((sig.curve_count(), sig.complexity()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryRef {
    Curve(usize),
    Cone(usize),
}

impl std::fmt::Display for BoundaryRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryRef::Curve(i) => write!(f, "curve {i}"),
            BoundaryRef::Cone(l) => write!(f, "cone {l}"),
        }
    }
}

/// A cone-surface cut into pants. Fields are raw so that invalid input can be
/// represented and reported on by [`validate_surface`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSurface {
    pub genus: u32,
    /// Half cone angles.
    pub cone_half_angles: Vec<f64>,
    pub curve_lengths: Vec<f64>,
    pub pants: Vec<[BoundaryRef; 3]>,
}

impl ConeSurface {
    pub fn signature(&self) -> Signature {
        Signature {
            genus: self.genus,
            cones: self.cone_half_angles.len() as u32,
        }
    }

    /// Largest cone half-angle, if there are cones.
    pub fn phi_max(&self) -> Option<f64> {
        self.cone_half_angles.iter().copied().reduce(f64::max)
    }

    /// Geometry of pants `index`, with its geodesic boundaries in slot order.
    pub fn pants_geometry(&self, index: usize) -> Result<Pants> {
        let slots = self
            .pants
            .get(index)
            .ok_or_else(|| GeometryError::InvalidSurface(format!("no pants {index}")))?;
        let mut lengths = Vec::new();
        let mut angles = Vec::new();
        for slot in slots {
            match *slot {
                BoundaryRef::Curve(i) => {
                    let l = self.curve_lengths.get(i).ok_or_else(|| {
                        GeometryError::InvalidSurface(format!(
                            "pants {index} refers to missing curve {i}"
                        ))
                    })?;
                    lengths.push(Length::new(*l)?);
                }
                BoundaryRef::Cone(l) => {
                    let phi = self.cone_half_angles.get(l).ok_or_else(|| {
                        GeometryError::InvalidSurface(format!(
                            "pants {index} refers to missing cone {l}"
                        ))
                    })?;
                    angles.push(Angle::new(*phi)?);
                }
            }
        }
        match (angles.as_slice(), lengths.as_slice()) {
            ([], [a, b, c]) => Ok(Pants::Y(YPiece::new(*a, *b, *c)?)),
            ([phi], [a, b]) => Ok(Pants::V(VPiece::new(*phi, *a, *b)?)),
            ([p, q], [l]) => Ok(Pants::Hat(JokersHat::new(*p, *q, *l)?)),
            _ => Err(GeometryError::InvalidSurface(format!(
                "pants {index} has three cone boundaries"
            ))),
        }
    }

    pub fn all_pants(&self) -> Result<Vec<Pants>> {
        (0..self.pants.len())
            .map(|i| self.pants_geometry(i))
            .collect()
    }
}

/// `2 pi (2g - 2 + n) - 2 sum(phi_i)`.
pub fn gauss_bonnet_area(s: &ConeSurface) -> f64 {
    let n = s.cone_half_angles.len() as f64;
    2.0 * PI * (2.0 * s.genus as f64 - 2.0 + n) - 2.0 * s.cone_half_angles.iter().sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub constraint: String,
    pub passed: bool,
    /// Offending object, e.g. `curve 3` or `pants 1`.
    pub location: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PartitionCheckReport {
    pub entries: Vec<CheckEntry>,
    /// Informational notes that do not affect `passed`.
    pub flags: Vec<String>,
}

impl PartitionCheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    fn record(&mut self, constraint: &str, passed: bool, location: Option<String>, detail: String) {
        self.entries.push(CheckEntry {
            constraint: constraint.to_string(),
            passed,
            location,
            detail,
        });
    }
}

/// Checks every structural and geometric constraint of a cone-surface. Each
/// violated constraint gets its own entry, so a report can hold many failures.
pub fn validate_surface(s: &ConeSurface) -> PartitionCheckReport {
    let mut report = PartitionCheckReport::default();
    let sig = s.signature();
    let admissible = sig.is_admissible();
    report.record(
        "admissible signature",
        admissible,
        None,
        format!("(g, n) = ({}, {})", sig.genus, sig.cones),
    );
    if sig.is_special() {
        report.flags.push(format!(
            "signature ({}, {}) has special collar optimality behaviour",
            sig.genus, sig.cones
        ));
    }

    for (l, phi) in s.cone_half_angles.iter().enumerate() {
        if !(*phi > 0.0 && *phi < FRAC_PI_2) {
            report.record(
                "cone angle range",
                false,
                Some(format!("cone {l}")),
                format!(
                    "cone angle out of range: 2*phi = {} is not in (0, pi)",
                    2.0 * phi
                ),
            );
        }
    }
    for (i, len) in s.curve_lengths.iter().enumerate() {
        if !(len.is_finite() && *len > 0.0) {
            report.record(
                "curve length",
                false,
                Some(format!("curve {i}")),
                format!("length {len} is not positive"),
            );
        }
    }

    if admissible {
        let (m, p) = (sig.curve_count() as usize, sig.complexity() as usize);
        report.record(
            "curve count",
            s.curve_lengths.len() == m,
            None,
            format!("{} curves, expected 3g-3+n = {m}", s.curve_lengths.len()),
        );
        report.record(
            "pants count",
            s.pants.len() == p,
            None,
            format!("{} pants, expected 2g-2+n = {p}", s.pants.len()),
        );
    }

    let mut curve_uses = vec![0usize; s.curve_lengths.len()];
    let mut cone_uses = vec![0usize; s.cone_half_angles.len()];
    for (k, slots) in s.pants.iter().enumerate() {
        for slot in slots {
            let known = match *slot {
                BoundaryRef::Curve(i) => curve_uses.get_mut(i).map(|c| *c += 1).is_some(),
                BoundaryRef::Cone(l) => cone_uses.get_mut(l).map(|c| *c += 1).is_some(),
            };
            if !known {
                report.record(
                    "boundary reference",
                    false,
                    Some(format!("pants {k}")),
                    format!("{slot} does not exist"),
                );
            }
        }
    }
    for (i, uses) in curve_uses.iter().enumerate() {
        if *uses != 2 {
            report.record(
                "curve glued twice",
                false,
                Some(format!("curve {i}")),
                format!("appears on {uses} pants boundaries"),
            );
        }
    }
    for (l, uses) in cone_uses.iter().enumerate() {
        if *uses != 1 {
            report.record(
                "cone used once",
                false,
                Some(format!("cone {l}")),
                format!("appears on {uses} pants boundaries"),
            );
        }
    }

    for k in 0..s.pants.len() {
        if let Err(e) = s.pants_geometry(k) {
            report.record(
                "pants geometry",
                false,
                Some(format!("pants {k}")),
                e.to_string(),
            );
        }
    }

    if !s.pants.is_empty() {
        let connected = is_connected(s);
        report.record(
            "connected",
            connected,
            None,
            if connected {
                "pants graph is connected".into()
            } else {
                "pants graph is disconnected".into()
            },
        );
    }

    if report.passed() {
        let area = gauss_bonnet_area(s);
        if area < 1e-6 {
            report.flags.push(format!("near-zero area {area:e}"));
        }
    }
    report
}

fn is_connected(s: &ConeSurface) -> bool {
    let p = s.pants.len();
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); s.curve_lengths.len()];
    for (k, slots) in s.pants.iter().enumerate() {
        for slot in slots {
            if let BoundaryRef::Curve(i) = *slot {
                if let Some(o) = owners.get_mut(i) {
                    o.push(k);
                }
            }
        }
    }
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(k) = stack.pop() {
        for slot in &s.pants[k] {
            if let BoundaryRef::Curve(i) = *slot {
                for &other in owners.get(i).into_iter().flatten() {
                    if seen.insert(other) {
                        stack.push(other);
                    }
                }
            }
        }
    }
    seen.len() == p
}

/// Ranges used when sampling random geometry, matching the oracle tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingRanges {
    /// Lengths are log-uniform on this interval.
    pub length: (f64, f64),
    /// Half-angles are uniform on this interval.
    pub angle: (f64, f64),
}

impl Default for SamplingRanges {
    fn default() -> Self {
        Self {
            length: (0.05, 8.0),
            angle: (0.05, FRAC_PI_2 - 0.05),
        }
    }
}

impl SamplingRanges {
    pub fn length<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.length.0.ln()..self.length.1.ln())
            .exp()
    }

    pub fn angle<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.angle.0..self.angle.1)
    }
}

/// Uniformly random admissible signature with `g <= max_genus`, `n <= max_cones`.
pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, max_genus: u32, max_cones: u32) -> Signature {
    let all: Vec<Signature> = (0..=max_genus)
        .flat_map(|g| (0..=max_cones).map(move |n| Signature { genus: g, cones: n }))
        .filter(Signature::is_admissible)
        .collect();
    assert!(!all.is_empty(), "no admissible signature within the bounds");
    all[rng.random_range(0..all.len())]
}

/// Random cone-surface with the given signature.
///
/// The pants are first joined along a random tree of curves (every pants
/// keeps at most three neighbours), the cones are dropped onto free slots, and
/// the `2g` slots left over are paired up into the remaining curves.
pub fn random_surface<R: Rng + ?Sized>(
    sig: Signature,
    ranges: &SamplingRanges,
    rng: &mut R,
) -> Result<ConeSurface> {
    let (m, p) = partition_size(sig)?;
    let (m, p) = (m as usize, p as usize);
    let mut slots: Vec<Vec<Option<BoundaryRef>>> = vec![vec![None; 3]; p];
    let mut next_curve = 0usize;
    let free_slot =
        |slots: &Vec<Vec<Option<BoundaryRef>>>, k: usize| slots[k].iter().position(Option::is_none);
    for k in 1..p {
        let open: Vec<usize> = (0..k).filter(|&j| free_slot(&slots, j).is_some()).collect();
        let parent = open[rng.random_range(0..open.len())];
        let a = free_slot(&slots, parent).expect("open pants");
        slots[parent][a] = Some(BoundaryRef::Curve(next_curve));
        slots[k][0] = Some(BoundaryRef::Curve(next_curve));
        next_curve += 1;
    }
    let mut free: Vec<(usize, usize)> = (0..p)
        .flat_map(|k| (0..3).map(move |j| (k, j)))
        .filter(|&(k, j)| slots[k][j].is_none())
        .collect();
    free.shuffle(rng);
    let mut cone_ids: Vec<usize> = (0..sig.cones as usize).collect();
    cone_ids.shuffle(rng);
    // a pants with three free slots only occurs when there is a single pants,
    // where one cone leaves two slots to glue together
    for l in cone_ids {
        let (k, j) = free.pop().expect("enough free slots for cones");
        slots[k][j] = Some(BoundaryRef::Cone(l));
    }
    while let (Some((k1, j1)), Some((k2, j2))) = (free.pop(), free.pop()) {
        slots[k1][j1] = Some(BoundaryRef::Curve(next_curve));
        slots[k2][j2] = Some(BoundaryRef::Curve(next_curve));
        next_curve += 1;
    }
    debug_assert_eq!(next_curve, m);
    let pants = slots
        .into_iter()
        .map(|s| [s[0], s[1], s[2]].map(|b| b.expect("every slot filled")))
        .collect();
    Ok(ConeSurface {
        genus: sig.genus,
        cone_half_angles: (0..sig.cones).map(|_| ranges.angle(rng)).collect(),
        curve_lengths: (0..m).map(|_| ranges.length(rng)).collect(),
        pants,
    })
}
