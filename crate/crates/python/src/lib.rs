//! Python bindings for `trop_morse`.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`, big integers
//! as `int`, and structured reports as plain dicts.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use trop_morse::compose::{self, IndexedPointSet};
use trop_morse::curve::{self, CurveDivisor, RandomCurveParams, TropicalCurve};
use trop_morse::exact::{format_rational, Rational};
use trop_morse::fixtures::{self, Fixture};
use trop_morse::toric::{self, LatticePolytope};
use trop_morse::torus::{self, Lattice, TorusQuadraticDivisor};
use trop_morse::{graded, GradedModule};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON and loads the result with the `json` module.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, value: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(value),))
}

#[pyclass(name = "GradedModule", module = "trop_morse_py", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyGradedModule(GradedModule);

#[pymethods]
impl PyGradedModule {
    /// Free module from `(degree, rank)` pairs.
    #[new]
    #[pyo3(signature = (pairs=Vec::new()))]
    fn new(pairs: Vec<(i64, u64)>) -> Self {
        Self(GradedModule::from_pairs(pairs))
    }

    #[staticmethod]
    fn free(degree: i64, rank: u64) -> Self {
        Self(GradedModule::free(degree, rank))
    }

    fn euler(&self) -> i64 {
        self.0.euler()
    }

    fn rank(&self, degree: i64) -> u64 {
        self.0.rank(degree)
    }

    fn pairs(&self) -> Vec<(i64, u64)> {
        self.0.to_pairs()
    }

    fn tensor(&self, other: &Self) -> Self {
        Self(self.0.tensor(&other.0))
    }

    fn shift(&self, by: i64) -> Self {
        Self(self.0.shift(by))
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0.direct_sum(&other.0))
    }

    fn __mul__(&self, other: &Self) -> Self {
        self.tensor(other)
    }

    fn __repr__(&self) -> String {
        format!("GradedModule({})", self.0)
    }
}

#[pyclass(name = "TropicalCurve", module = "trop_morse_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCurve(TropicalCurve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TropicalCurve::from_json(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_spec()).map_err(value_error)
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    #[getter]
    fn chi_top(&self) -> i64 {
        curve::chi_top(&self.0)
    }

    fn vertex_ids(&self) -> Vec<String> {
        self.0.vertices().iter().map(|v| v.id.clone()).collect()
    }

    fn edge_ids(&self) -> Vec<String> {
        self.0.edges().iter().map(|e| e.id.clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "TropicalCurve(vertices={}, edges={}, genus={})",
            self.0.vertices().len(),
            self.0.edges().len(),
            self.0.genus()
        )
    }
}

#[pyclass(name = "CurveDivisor", module = "trop_morse_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDivisor(CurveDivisor);

#[pymethods]
impl PyDivisor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CurveDivisor::from_json(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_spec()).map_err(value_error)
    }

    fn negated(&self) -> Self {
        Self(self.0.negated())
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("CurveDivisor({:?})", self.0.curve)
    }
}

#[pyclass(name = "TorusDivisor", module = "trop_morse_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTorus(TorusQuadraticDivisor);

#[pymethods]
impl PyTorus {
    /// `matrix` symmetric; `shift` entries are anything `Fraction` accepts.
    #[new]
    #[pyo3(signature = (matrix, shift=Vec::new()))]
    fn new(matrix: Vec<Vec<i64>>, shift: Vec<String>) -> PyResult<Self> {
        let shift = shift.iter().map(|s| trop_morse::exact::parse_rational(s)).collect::<Result<Vec<_>, _>>().map_err(value_error)?;
        TorusQuadraticDivisor::new(matrix, shift).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TorusQuadraticDivisor::from_json(text).map(Self).map_err(value_error)
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<i64>> {
        self.0.matrix().to_vec()
    }

    fn block_sum(&self, other: &Self) -> Self {
        Self(self.0.block_sum(&other.0))
    }

    /// `{count, index, lmd, euler, chern_volume, degenerate}`.
    fn lmd<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &torus::lmd(&self.0).map_err(value_error)?)
    }

    fn verify_hesse_rr<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &torus::verify_hesse_rr(&self.0).map_err(value_error)?)
    }

    /// Points of `[0,1)ⁿ` as tuples of fractions.
    fn intersection_points<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let points = torus::intersection_points(&self.0).map_err(value_error)?;
        points.iter().map(|x| x.iter().map(|v| fraction(py, v)).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("TorusDivisor({:?})", self.0.matrix())
    }
}

#[pyclass(name = "Polytope", module = "trop_morse_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope(LatticePolytope);

#[pymethods]
impl PyPolytope {
    /// Vertices and facets `(a, b)` meaning `⟨a, x⟩ ≤ b`.
    #[new]
    fn new(vertices: Vec<Vec<i64>>, facets: Vec<(Vec<i64>, i64)>) -> PyResult<Self> {
        let facets = facets.into_iter().map(|(a, b)| toric::Facet { a, b }).collect();
        LatticePolytope::new(vertices, facets).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        LatticePolytope::from_json(text).map(Self).map_err(value_error)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[pyo3(signature = (k=1))]
    fn lattice_points(&self, k: i64) -> PyResult<Vec<Vec<i64>>> {
        self.0.lattice_points(k).map_err(value_error)
    }

    #[pyo3(signature = (k=1))]
    fn interior_lattice_points(&self, k: i64) -> PyResult<Vec<Vec<i64>>> {
        self.0.interior_lattice_points(k).map_err(value_error)
    }

    /// Coefficients of the Ehrhart polynomial, constant term first.
    fn ehrhart<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let poly = toric::ehrhart(&self.0).map_err(value_error)?;
        poly.coefficients.iter().map(|c| fraction(py, c)).collect()
    }

    #[pyo3(signature = (kmax=4))]
    fn verify_reciprocity<'py>(&self, py: Python<'py>, kmax: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &toric::verify_reciprocity(&self.0, kmax).map_err(value_error)?)
    }

    /// Local Morse data of `s_P` (`sign=1`) or `-s_P` (`sign=-1`).
    #[pyo3(signature = (sign=1))]
    fn toric_lmd<'py>(&self, py: Python<'py>, sign: i8) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &toric::toric_lmd(&self.0, sign).map_err(value_error)?)
    }

    fn is_delzant(&self) -> PyResult<bool> {
        toric::delzant_check(&self.0).map_err(value_error)
    }

    fn potential(&self, x: Vec<f64>) -> PyResult<f64> {
        Ok(toric::potential(&self.0).map_err(value_error)?.eval(&x))
    }

    fn moment_map(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(toric::potential(&self.0).map_err(value_error)?.moment_map(&x))
    }

    fn hessian(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(toric::potential(&self.0).map_err(value_error)?.hessian(&x))
    }

    fn __repr__(&self) -> String {
        format!("Polytope(n={}, vertices={})", self.0.n(), self.0.vertices().len())
    }
}

#[pyclass(name = "PointSet", module = "trop_morse_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPointSet(IndexedPointSet);

#[pymethods]
impl PyPointSet {
    #[staticmethod]
    fn from_curve(curve: &PyCurve, divisor: &PyDivisor) -> PyResult<Self> {
        IndexedPointSet::from_curve(&curve.0, &divisor.0).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_torus(divisor: &PyTorus) -> PyResult<Self> {
        IndexedPointSet::from_torus(&divisor.0).map(Self).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (polytope, sign=1))]
    fn from_toric(polytope: &PyPolytope, sign: i8) -> PyResult<Self> {
        IndexedPointSet::from_toric(&polytope.0, sign).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        IndexedPointSet::from_json(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(value_error)
    }

    fn euler(&self) -> i64 {
        self.0.euler()
    }

    fn total(&self) -> PyGradedModule {
        PyGradedModule(self.0.total())
    }

    fn labels(&self) -> Vec<String> {
        self.0.points().iter().map(|p| p.label.clone()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(compose::kunneth(&self.0, &other.0))
    }

    fn __repr__(&self) -> String {
        format!("PointSet(points={}, euler={})", self.0.len(), self.0.euler())
    }
}

/// Built-in example by id, e.g. `elliptic:3`, `diag:2,-1` or `cube:2`.
/// Curve fixtures come back as a `(curve, divisor)` pair.
#[pyfunction]
fn fixture(py: Python<'_>, id: &str) -> PyResult<Py<PyAny>> {
    Ok(match fixtures::lookup(id).map_err(value_error)? {
        Fixture::Curve(c, d) => (PyCurve(c), PyDivisor(d)).into_pyobject(py)?.into_any().unbind(),
        Fixture::Torus(d) => Py::new(py, PyTorus(d))?.into_any(),
        Fixture::Polytope(p) => Py::new(py, PyPolytope(p))?.into_any(),
    })
}

/// Points, local data, rotation number, degree and `chi_top` as a dict.
#[pyfunction]
fn analyze<'py>(py: Python<'py>, curve: &PyCurve, divisor: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &curve::analyze(&curve.0, &divisor.0).map_err(value_error)?)
}

#[pyfunction]
fn validate(curve: &PyCurve, divisor: &PyDivisor) -> PyResult<Vec<String>> {
    let report = curve::validate(&curve.0, &divisor.0).map_err(value_error)?;
    Ok(report.violations.iter().map(|v| v.to_string()).collect())
}

#[pyfunction]
fn verify_rr<'py>(py: Python<'py>, curve: &PyCurve, divisor: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &curve::verify_rr(&curve.0, &divisor.0).map_err(value_error)?)
}

/// Cuts at the points with the given labels (`v:id` or `e:id@pos`).
#[pyfunction]
fn split_verify<'py>(py: Python<'py>, curve: &PyCurve, divisor: &PyDivisor, cuts: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let points = curve::intersection_points(&curve.0, &divisor.0).map_err(value_error)?;
    let locations = cuts
        .iter()
        .map(|label| {
            points
                .iter()
                .find(|p| p.location.to_string() == *label)
                .map(|p| p.location.clone())
                .ok_or_else(|| PyValueError::new_err(format!("`{label}` is not an intersection point")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    to_py(py, &curve::split_verify(&curve.0, &divisor.0, &locations).map_err(value_error)?)
}

#[pyfunction]
#[pyo3(signature = (genus, leaves, seed, max_edges=12, max_slope=5, breakpoints=3))]
fn random_instance(
    genus: usize,
    leaves: usize,
    seed: u64,
    max_edges: usize,
    max_slope: i64,
    breakpoints: usize,
) -> PyResult<(PyCurve, PyDivisor)> {
    let c = curve::random_curve(&RandomCurveParams { genus, leaves, max_edges }, seed).map_err(value_error)?;
    let d = curve::random_divisor(&c, seed, max_slope, breakpoints).map_err(value_error)?;
    Ok((PyCurve(c), PyDivisor(d)))
}

#[pyfunction]
fn bohr_sommerfeld_count(lattice: Vec<Vec<i64>>) -> PyResult<BigInt> {
    let l = Lattice::new(lattice).map_err(value_error)?;
    torus::bohr_sommerfeld_count(&l).map_err(value_error)
}

#[pyfunction]
fn smith_diagonal(matrix: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    torus::smith_normal_form(&matrix).diagonal
}

#[pyfunction]
fn cover(base: &PyPointSet, degree: usize) -> PyResult<PyPointSet> {
    compose::etale_disjoint(&base.0, degree).map(PyPointSet).map_err(value_error)
}

#[pyfunction]
fn cyclic_cover(curve: &PyCurve, divisor: &PyDivisor, degree: usize) -> PyResult<PyPointSet> {
    compose::etale_cyclic(&curve.0, &divisor.0, degree).map(PyPointSet).map_err(value_error)
}

#[pyfunction]
fn sym_euler(chi: i64, n: u64) -> BigInt {
    graded::sym_euler(chi, n)
}

#[pyfunction]
fn verify_sym<'py>(py: Python<'py>, points: &PyPointSet, n: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &compose::verify_sym(&points.0, n))
}

#[pymodule]
fn trop_morse_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGradedModule>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyDivisor>()?;
    m.add_class::<PyTorus>()?;
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyPointSet>()?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rr, m)?)?;
    m.add_function(wrap_pyfunction!(split_verify, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(bohr_sommerfeld_count, m)?)?;
    m.add_function(wrap_pyfunction!(smith_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_cover, m)?)?;
    m.add_function(wrap_pyfunction!(sym_euler, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sym, m)?)?;
    Ok(())
}
