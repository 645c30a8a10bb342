//! Python bindings: `import bordism`.
//!
//! Reports come back as plain dicts and lists with the same shape as the
//! CLI's JSON output.

use std::sync::Arc;

use bordism_core::gf2ring::{self, GeneratorSpec, Gf2Poly, Monomial, RingPresentation};
use bordism_core::theorems::{self, FamilyTag, Nu2};
use bordism_core::{bordism as bd, Error, ManifoldExpr, Partition, ProfileCache};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &json)
}

/// Truncated polynomial ring over GF(2).
#[pyclass(name = "Ring", module = "bordism", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRing(Arc<RingPresentation>);

#[pymethods]
impl PyRing {
    /// `generators` is a list of `(name, degree, truncation)`.
    #[new]
    fn new(generators: Vec<(String, u32, u32)>, degree_cap: u32) -> PyResult<Self> {
        let specs = generators
            .into_iter()
            .map(|(name, d, t)| GeneratorSpec::new(name, d, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        RingPresentation::new(specs, degree_cap)
            .map(Self)
            .map_err(err)
    }

    fn zero(&self) -> PyPoly {
        PyPoly(Gf2Poly::zero(&self.0))
    }

    fn one(&self) -> PyPoly {
        PyPoly(Gf2Poly::one(&self.0))
    }

    fn generator(&self, name: &str) -> PyResult<PyPoly> {
        let idx = self
            .0
            .generator_index(name)
            .ok_or_else(|| PyValueError::new_err(format!("no generator named {name}")))?;
        Gf2Poly::generator(&self.0, idx).map(PyPoly).map_err(err)
    }

    fn monomial(&self, exponents: Vec<u32>) -> PyResult<PyPoly> {
        Gf2Poly::monomial(&self.0, &Monomial::new(exponents))
            .map(PyPoly)
            .map_err(err)
    }

    #[getter]
    fn degree_cap(&self) -> u32 {
        self.0.degree_cap()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Ring {}>", self.0)
    }
}

/// Element of a `Ring`.
#[pyclass(name = "Poly", module = "bordism", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly(Gf2Poly);

#[pymethods]
impl PyPoly {
    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.0.add(&other.0).map(PyPoly).map_err(err)
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.0.mul(&other.0).map(PyPoly).map_err(err)
    }

    fn __pow__(&self, k: u64, modulo: Option<u64>) -> PyResult<PyPoly> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular exponent is not supported"));
        }
        Ok(PyPoly(self.0.pow(k)))
    }

    fn __bool__(&self) -> bool {
        !self.0.is_zero()
    }

    fn inverse(&self) -> PyResult<PyPoly> {
        self.0.inverse_unit().map(PyPoly).map_err(err)
    }

    fn graded(&self, degree: u32) -> PyPoly {
        PyPoly(self.0.graded_component(degree))
    }

    fn coefficient(&self, exponents: Vec<u32>) -> PyResult<bool> {
        self.0.coefficient(&Monomial::new(exponents)).map_err(err)
    }

    /// Exponent vectors of the nonzero terms in lex order.
    fn terms(&self) -> Vec<Vec<u32>> {
        self.0.terms().into_iter().map(|m| m.exponents).collect()
    }

    #[getter]
    fn ring(&self) -> PyRing {
        PyRing(self.0.ring().clone())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Poly {}>", self.0)
    }
}

/// A closed manifold built from projective spaces, Dold and Milnor manifolds.
#[pyclass(
    name = "Manifold",
    module = "bordism",
    frozen,
    eq,
    hash,
    from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyManifold(ManifoldExpr);

#[pymethods]
impl PyManifold {
    /// Parse a descriptor such as `"H(2,4)"` or `"RP(2) X CP(3)"`.
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        descriptor.parse().map(Self).map_err(err)
    }

    #[staticmethod]
    fn real_proj(n: u32) -> PyResult<Self> {
        ManifoldExpr::real_proj(n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn cplx_proj(n: u32) -> PyResult<Self> {
        ManifoldExpr::cplx_proj(n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn dold(m: u32, n: u32) -> Self {
        Self(ManifoldExpr::dold(m, n))
    }

    #[staticmethod]
    fn milnor(m: u32, n: u32) -> PyResult<Self> {
        ManifoldExpr::milnor(m, n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn product(factors: Vec<PyManifold>) -> PyResult<Self> {
        ManifoldExpr::product(factors.into_iter().map(|f| f.0).collect())
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.0.dimension()
    }

    fn total_sw_class(&self) -> PyPoly {
        PyPoly(self.0.total_sw_class())
    }

    fn sw_number(&self, partition: Vec<u32>) -> PyResult<bool> {
        let omega = Partition::new(partition).map_err(err)?;
        bd::sw_number(&self.0, &omega).map_err(err)
    }

    /// `{"manifold", "dim", "partitions", "bits"}`, as printed by `sw-numbers`.
    fn sw_numbers<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let profile = py.detach(|| bd::sw_profile(&self.0));
        report(py, &profile.report(&self.0))
    }

    fn bounds(&self, py: Python<'_>) -> bool {
        py.detach(|| bd::bounds(&self.0))
    }

    fn bordant(&self, py: Python<'_>, other: &PyManifold) -> bool {
        py.detach(|| bd::bordant(&self.0, &other.0))
    }

    fn euler_mod2(&self) -> bool {
        self.0.euler_mod2()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Manifold('{}')", self.0)
    }
}

#[pyfunction]
fn binom_mod2(r: u64, s: i64) -> bool {
    gf2ring::binom_mod2(r, s)
}

/// Partitions of `d` in canonical (descending lexicographic) order.
#[pyfunction]
fn partitions(d: u32) -> Vec<Vec<u32>> {
    bd::partitions(d)
        .into_iter()
        .map(|p| p.parts().to_vec())
        .collect()
}

/// 2-adic valuation; `None` stands for infinity at 0.
#[pyfunction]
fn nu2(x: u64) -> Option<u32> {
    match theorems::nu2(x) {
        Nu2::Finite(v) => Some(v),
        Nu2::Infinite => None,
    }
}

#[pyfunction]
fn milnor_bounds_predicate(m: u32, n: u32) -> PyResult<bool> {
    theorems::milnor_bounds_predicate(m, n).map_err(err)
}

#[pyfunction]
fn dold_bounds_predicate(m: u32, n: u32) -> bool {
    theorems::dold_bounds_predicate(m, n)
}

#[pyfunction]
fn milnor_generators(max_dim: u32) -> Vec<PyManifold> {
    theorems::milnor_generators(max_dim)
        .into_iter()
        .map(PyManifold)
        .collect()
}

fn family(name: &str) -> PyResult<FamilyTag> {
    name.parse().map_err(err)
}

#[pyfunction]
fn family_pairs<'py>(
    py: Python<'py>,
    family_tag: &str,
    max_dim: u32,
) -> PyResult<Bound<'py, PyAny>> {
    report(
        py,
        &theorems::enumerate_family_pairs(family(family_tag)?, max_dim),
    )
}

#[pyfunction]
fn verify_family<'py>(
    py: Python<'py>,
    family_tag: &str,
    max_dim: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let tag = family(family_tag)?;
    let r = py.detach(|| theorems::verify_family(tag, max_dim, &ProfileCache::new()));
    report(py, &r)
}

#[pyfunction]
fn check_milnor_predicate<'py>(py: Python<'py>, max_dim: u32) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| theorems::check_milnor_predicate(max_dim, &ProfileCache::new()));
    report(py, &r)
}

#[pyfunction]
fn check_dold_predicate<'py>(py: Python<'py>, max_dim: u32) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| theorems::check_dold_predicate(max_dim, &ProfileCache::new()));
    report(py, &r)
}

#[pyfunction]
fn prop5_check<'py>(py: Python<'py>, max_dim: u32) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| theorems::prop5_check(max_dim, &ProfileCache::new()));
    report(py, &r)
}

#[pyfunction]
fn conjecture_scan<'py>(py: Python<'py>, max_dim: u32) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| theorems::conjecture_scan(max_dim, &ProfileCache::new()));
    report(py, &r)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyManifold>()?;
    m.add_function(wrap_pyfunction!(binom_mod2, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(nu2, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_bounds_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(dold_bounds_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_generators, m)?)?;
    m.add_function(wrap_pyfunction!(family_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family, m)?)?;
    m.add_function(wrap_pyfunction!(check_milnor_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(check_dold_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(prop5_check, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_scan, m)?)?;
    Ok(())
}

#[pymodule]
fn bordism(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
