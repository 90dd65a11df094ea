//! Python bindings. Exact values cross the boundary as strings such as
//! `"1/2"`; structured results are returned as plain dicts and lists.

use polycomplex::catalog::Catalog as CoreCatalog;
use polycomplex::export;
use polycomplex::geometry::{IntBox, Isometry as CoreIsometry, RationalVec3};
use polycomplex::verify::Verifier;
use polycomplex::wythoff::{self, GeneratorSet as CoreGeneratorSet, GeneratorSetSpec};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_point(coords: [String; 3]) -> PyResult<RationalVec3> {
    let parsed = coords
        .iter()
        .map(|c| polycomplex::geometry::parse_rational(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_error)?;
    RationalVec3::from_rationals([parsed[0], parsed[1], parsed[2]]).map_err(value_error)
}

fn cube(lo: i64, hi: i64) -> PyResult<IntBox> {
    IntBox::cube(lo, hi).map_err(value_error)
}

/// An isometry `x -> xM + t` with signed permutation linear part.
#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Isometry(CoreIsometry);

#[pymethods]
impl Isometry {
    /// Parses a coordinate formula such as `"(-x,z,y)+(1,0,1/2)"`.
    #[new]
    fn new(formula: &str) -> PyResult<Self> {
        formula.parse().map(Isometry).map_err(value_error)
    }

    /// Applies `self`, then `other`.
    fn then(&self, other: &Isometry) -> Isometry {
        Isometry(self.0.then(&other.0))
    }

    fn inverse(&self) -> Isometry {
        Isometry(self.0.inverse())
    }

    fn apply(&self, point: [String; 3]) -> PyResult<[String; 3]> {
        let image = self.0.apply(parse_point(point)?);
        Ok(image.coords().map(polycomplex::geometry::format_rational))
    }

    fn order(&self) -> Option<usize> {
        self.0.order()
    }

    fn is_involution(&self) -> bool {
        self.0.is_involution()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Isometry('{}')", self.0)
    }
}

/// Distinguished generators `R0`, `R1` and the edge stabilizer `G2`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct GeneratorSet(CoreGeneratorSet);

#[pymethods]
impl GeneratorSet {
    /// Builds a generator set from its JSON form.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: GeneratorSetSpec = serde_json::from_str(text).map_err(value_error)?;
        CoreGeneratorSet::from_spec(&spec).map(GeneratorSet).map_err(value_error)
    }

    #[getter]
    fn r0(&self) -> Isometry {
        Isometry(*self.0.r0())
    }

    #[getter]
    fn r1(&self) -> Isometry {
        Isometry(*self.0.r1())
    }

    #[getter]
    fn g2(&self) -> Vec<(String, Isometry)> {
        self.0.g2_names().iter().map(|(k, v)| (k.clone(), Isometry(*v))).collect()
    }

    fn base_vertex(&self) -> [String; 3] {
        self.0.base_vertex().coords().map(polycomplex::geometry::format_rational)
    }

    fn mirror_vector(&self) -> PyResult<(usize, usize)> {
        polycomplex::point_groups::mirror_vector(&self.0).map_err(value_error)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.0.to_spec())
    }
}

/// The catalog of regular polygonal complexes.
#[pyclass(frozen)]
struct Catalog(CoreCatalog);

#[pymethods]
impl Catalog {
    /// The bundled catalog, or the JSON file at `path`.
    #[new]
    #[pyo3(signature = (path = None))]
    fn new(path: Option<&str>) -> PyResult<Self> {
        match path {
            Some(p) => CoreCatalog::load_path(p),
            None => CoreCatalog::load_default(),
        }
        .map(Catalog)
        .map_err(value_error)
    }

    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    fn resolve(&self, name: &str) -> PyResult<GeneratorSet> {
        self.0.resolve(name).map(GeneratorSet).map_err(value_error)
    }

    /// Verifies an entry on the cube `[lo, hi]^3` and returns the report.
    #[pyo3(signature = (name, lo = -3, hi = 3))]
    fn verify<'py>(&self, py: Python<'py>, name: &str, lo: i64, hi: i64) -> PyResult<Bound<'py, PyAny>> {
        let verifier = Verifier::new(&self.0, cube(lo, hi)?).map_err(value_error)?;
        let report = verifier.verify(name).map_err(value_error)?;
        let out = to_python(py, &report)?;
        out.set_item("passed", report.passed())?;
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Builds the region of a complex inside `[lo, hi]^3` and returns its
/// interior as vertices, edges and faces.
#[pyfunction]
#[pyo3(signature = (generators, lo = -2, hi = 2, scale = 1))]
fn build<'py>(py: Python<'py>, generators: &GeneratorSet, lo: i64, hi: i64, scale: i64) -> PyResult<Bound<'py, PyAny>> {
    if scale < 1 {
        return Err(value_error("scale must be at least 1"));
    }
    let region = wythoff::build_complex(&generators.0, cube(lo, hi)?).map_err(value_error)?;
    let sidecar = export::sidecar("", generators.0.to_spec(), &region, scale);
    to_python(py, &sidecar)
}

/// OFF text for the finite faces of a region.
#[pyfunction]
#[pyo3(signature = (generators, lo = -2, hi = 2, scale = 1))]
fn to_off(generators: &GeneratorSet, lo: i64, hi: i64, scale: i64) -> PyResult<String> {
    if scale < 1 {
        return Err(value_error("scale must be at least 1"));
    }
    let region = wythoff::build_complex(&generators.0, cube(lo, hi)?).map_err(value_error)?;
    Ok(export::sidecar("", generators.0.to_spec(), &region, scale).to_off())
}

#[pymodule]
#[pyo3(name = "polycomplex")]
fn polycomplex_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Isometry>()?;
    m.add_class::<GeneratorSet>()?;
    m.add_class::<Catalog>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(to_off, m)?)?;
    Ok(())
}
