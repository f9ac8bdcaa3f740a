//! Python bindings for `conecollar`.
//!
//! Angles passed in and out are half cone angles in radians, except in surface
//! documents, which carry full cone angles. Structured results (certificates,
//! ledgers, verification reports) come back as plain dicts and lists.

use conecollar::bers::{self, LedgerEvent};
use conecollar::collars::{self, CollarAtlas};
use conecollar::document::{CertificateDocument, SurfaceDocument, WidthsTable};
use conecollar::oracle::equivalence::{self, EquivalenceConfig};
use conecollar::pants;
use conecollar::surface::{self, ConeSurface, SamplingRanges, Signature};
use conecollar::trig::{self, Angle, Length};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn as_angle(v: f64) -> PyResult<Angle> {
    Angle::new(v).map_err(err)
}

fn as_length(v: f64) -> PyResult<Length> {
    Length::new(v).map_err(err)
}

fn signature(genus: u32, cones: u32) -> PyResult<Signature> {
    Signature::new(genus, cones).map_err(err)
}

/// Hands a serializable value to Python as the matching dict/list structure.
fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyfunction]
fn geodesic_collar_width(length: f64, phi_max: f64) -> PyResult<f64> {
    Ok(collars::geodesic_collar_width(as_length(length)?, as_angle(phi_max)?))
}

#[pyfunction]
fn classical_collar_width(length: f64) -> PyResult<f64> {
    Ok(collars::classical_collar_width(as_length(length)?))
}

#[pyfunction]
fn cone_collar_width(phi: f64) -> PyResult<f64> {
    Ok(collars::cone_collar_width(as_angle(phi)?))
}

#[pyfunction]
fn torus_sharp_width(phi: f64) -> PyResult<f64> {
    Ok(collars::torus_sharp_width(as_angle(phi)?))
}

#[pyfunction]
fn optimality_probe(phi: f64, len_gamma: f64, len_gamma_prime: f64) -> PyResult<f64> {
    collars::optimality_probe(phi, len_gamma, len_gamma_prime).map_err(err)
}

#[pyfunction]
fn optimality_probe_limit(phi: f64, len_gamma: f64) -> PyResult<f64> {
    collars::optimality_probe_limit(phi, len_gamma).map_err(err)
}

/// `cosh` of the third side of a right-angled hexagon from the two sides next to it
/// and the side opposite.
#[pyfunction]
fn hexagon_opposite_side(a: f64, b: f64, gamma: f64) -> PyResult<f64> {
    trig::hexagon_opposite_side(as_length(a)?, as_length(b)?, as_length(gamma)?).map_err(err)
}

#[pyfunction]
fn bers_bound(genus: u32, cones: u32) -> PyResult<f64> {
    bers::bers_bound(signature(genus, cones)?).map_err(err)
}

#[pyfunction]
fn partition_size(genus: u32, cones: u32) -> PyResult<(u32, u32)> {
    surface::partition_size(signature(genus, cones)?).map_err(err)
}

/// Replays a ledger. `events` is a JSON array of events; without it a random
/// legal sequence is drawn from `seed`.
#[pyfunction]
#[pyo3(signature = (genus, cones, events=None, seed=0))]
fn ledger(py: Python<'_>, genus: u32, cones: u32, events: Option<&str>, seed: u64) -> PyResult<Py<PyAny>> {
    let sig = signature(genus, cones)?;
    let events: Vec<LedgerEvent> = match events {
        Some(text) => serde_json::from_str(text).map_err(err)?,
        None => bers::random_events(sig, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?,
    };
    to_python(py, &bers::run_ledger(sig, &events).map_err(err)?)
}

/// Runs the coordinate-model cross-checks and returns the report.
#[pyfunction]
#[pyo3(signature = (seed=EquivalenceConfig::default().seed, count=1000))]
fn verify(py: Python<'_>, seed: u64, count: usize) -> PyResult<Py<PyAny>> {
    let config = EquivalenceConfig {
        seed,
        trirectangles: count,
        hexagons: count,
        pentagons: count / 5,
        hats: count / 5,
    };
    let report = py.detach(|| equivalence::run(&config));
    to_python(py, &report)
}

#[pyclass(name = "Trirectangle", frozen)]
struct PyTrirectangle(trig::Trirectangle);

#[pymethods]
impl PyTrirectangle {
    #[new]
    fn new(leg: f64, phi: f64) -> PyResult<Self> {
        Ok(Self(trig::Trirectangle::from_leg_and_angle(as_length(leg)?, as_angle(phi)?)))
    }

    #[getter]
    fn angle(&self) -> f64 {
        self.0.angle.value()
    }

    /// `(leg_a, leg_b, arm_a, arm_b)`; each arm is opposite the leg of the same name.
    #[getter]
    fn sides(&self) -> (f64, f64, f64, f64) {
        (self.0.leg_a, self.0.leg_b, self.0.arm_a, self.0.arm_b)
    }

    fn residuals(&self) -> [f64; 6] {
        self.0.residuals()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "YPiece", frozen)]
struct PyYPiece(pants::YPiece);

#[pymethods]
impl PyYPiece {
    #[new]
    fn new(l1: f64, l2: f64, l3: f64) -> PyResult<Self> {
        pants::YPiece::new(as_length(l1)?, as_length(l2)?, as_length(l3)?).map(Self).map_err(err)
    }

    /// Length of the seam joining boundaries `i` and `j` (0-based).
    fn seam_length(&self, i: usize, j: usize) -> PyResult<f64> {
        self.0.seam_length(i, j).map_err(err)
    }

    fn half_collar_widths(&self) -> [f64; 3] {
        self.0.half_collar_widths()
    }

    fn area(&self) -> f64 {
        pants::Pants::Y(self.0).area()
    }
}

#[pyclass(name = "VPiece", frozen)]
struct PyVPiece(pants::VPiece);

#[pymethods]
impl PyVPiece {
    #[new]
    fn new(phi: f64, l1: f64, l2: f64) -> PyResult<Self> {
        pants::VPiece::new(as_angle(phi)?, as_length(l1)?, as_length(l2)?).map(Self).map_err(err)
    }

    fn seam_length(&self) -> f64 {
        self.0.seam_length()
    }

    /// `(angles, seam_pieces, shared_arm)` of the split along the perpendicular to the seam.
    fn split(&self) -> ((f64, f64), (f64, f64), f64) {
        let s = self.0.split();
        (
            (s.angles[0], s.angles[1]),
            (s.seam_pieces[0], s.seam_pieces[1]),
            s.shared_arm,
        )
    }

    fn cone_to_boundary_distance(&self, k: usize) -> PyResult<f64> {
        if k > 1 {
            return Err(PyValueError::new_err("boundary index must be 0 or 1"));
        }
        Ok(self.0.cone_to_boundary_distance(k))
    }

    fn area(&self) -> f64 {
        pants::Pants::V(self.0).area()
    }
}

#[pyclass(name = "JokersHat", frozen)]
struct PyJokersHat(pants::JokersHat);

#[pymethods]
impl PyJokersHat {
    #[new]
    fn new(phi1: f64, phi2: f64, length: f64) -> PyResult<Self> {
        pants::JokersHat::new(as_angle(phi1)?, as_angle(phi2)?, as_length(length)?).map(Self).map_err(err)
    }

    fn geometry(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &self.0.geometry())
    }

    fn cone_to_cone_distance(&self) -> f64 {
        self.0.cone_to_cone_distance()
    }

    fn cone_to_boundary_distance(&self, cone: usize) -> PyResult<f64> {
        if cone > 1 {
            return Err(PyValueError::new_err("cone index must be 0 or 1"));
        }
        Ok(self.0.cone_to_boundary_distance(cone))
    }

    fn area(&self) -> f64 {
        pants::Pants::Hat(self.0).area()
    }
}

/// A cone-surface with a pants decomposition, kept with its document form so
/// that curve ids survive a round trip.
#[pyclass(name = "Surface", frozen)]
struct PySurface {
    doc: SurfaceDocument,
    surface: ConeSurface,
}

impl PySurface {
    fn atlas(&self) -> PyResult<CollarAtlas> {
        CollarAtlas::build(&self.surface).map_err(err)
    }
}

#[pymethods]
impl PySurface {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = SurfaceDocument::from_json(text).map_err(err)?;
        let surface = doc.to_surface().map_err(err)?;
        Ok(Self { doc, surface })
    }

    /// A random surface of signature `(genus, cones)` with lengths and angles
    /// drawn from the default sampling ranges.
    #[staticmethod]
    fn random(genus: u32, cones: u32, seed: u64) -> PyResult<Self> {
        let sig = signature(genus, cones)?;
        let surface = surface::random_surface(sig, &SamplingRanges::default(), &mut ChaCha8Rng::seed_from_u64(seed))
            .map_err(err)?;
        Ok(Self { doc: SurfaceDocument::from_surface(&surface), surface })
    }

    fn to_json(&self) -> String {
        self.doc.to_json()
    }

    #[getter]
    fn signature(&self) -> (u32, u32) {
        let s = self.surface.signature();
        (s.genus, s.cones)
    }

    #[getter]
    fn phi_max(&self) -> Option<f64> {
        self.surface.phi_max()
    }

    fn area(&self) -> f64 {
        surface::gauss_bonnet_area(&self.surface)
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &surface::validate_surface(&self.surface))
    }

    fn widths(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &WidthsTable::new(&self.doc, &self.atlas()?))
    }

    fn certify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &CertificateDocument::new(&self.doc, &self.atlas()?))
    }

    fn collar_area(&self) -> PyResult<f64> {
        Ok(self.atlas()?.total_area())
    }

    fn __repr__(&self) -> String {
        let (g, n) = self.signature();
        format!("Surface(genus={g}, cones={n}, curves={})", self.surface.curve_lengths.len())
    }
}

#[pymodule]
fn conecollar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(geodesic_collar_width, m)?)?;
    m.add_function(wrap_pyfunction!(classical_collar_width, m)?)?;
    m.add_function(wrap_pyfunction!(cone_collar_width, m)?)?;
    m.add_function(wrap_pyfunction!(torus_sharp_width, m)?)?;
    m.add_function(wrap_pyfunction!(optimality_probe, m)?)?;
    m.add_function(wrap_pyfunction!(optimality_probe_limit, m)?)?;
    m.add_function(wrap_pyfunction!(hexagon_opposite_side, m)?)?;
    m.add_function(wrap_pyfunction!(bers_bound, m)?)?;
    m.add_function(wrap_pyfunction!(partition_size, m)?)?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PyTrirectangle>()?;
    m.add_class::<PyYPiece>()?;
    m.add_class::<PyVPiece>()?;
    m.add_class::<PyJokersHat>()?;
    m.add_class::<PySurface>()?;
    Ok(())
}
