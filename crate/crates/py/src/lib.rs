//! Python bindings. The module mirrors the toolkit's main entry points:
//! exact Eisenstein numbers, group elements, cover genera and characters,
//! surface invariants, invariant 2-forms, canonical-map degrees, and the
//! scenario pipeline.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pqsurf::chars::decompose;
use pqsurf::cli::{emit, report_passes, run_pipeline, JobConfig, OutputFormat};
use pqsurf::covers::{canonical_character, curve1, curve2, fixed_point_count, genus_rh, CoverDescriptor};
use pqsurf::exactnum::{ratq, Zeta3};
use pqsurf::forms::{invariant_tensors, table_basis};
use pqsurf::group::{enumerate_automorphisms, g_inv, g_mul, g_order, FiniteGroup, GElem};
use pqsurf::intersect;
use pqsurf::prodquot::{
    pg_by_characters, singularity_profile, surface_invariants, LambdaRegime, SurfaceSpec,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn curve(name: &str) -> PyResult<&'static CoverDescriptor> {
    match name {
        "C1" => Ok(curve1()),
        "C2" => Ok(curve2()),
        _ => Err(value_err(format!("unknown curve '{name}', expected C1 or C2"))),
    }
}

fn regime(lambda: &str) -> PyResult<LambdaRegime> {
    match lambda {
        "generic" => Ok(LambdaRegime::Generic),
        "zero" => Ok(LambdaRegime::Zero),
        _ => Err(value_err(format!("unknown regime '{lambda}', expected generic or zero"))),
    }
}

fn builtin_spec(n: usize, lambda: &str) -> PyResult<SurfaceSpec> {
    if !(1..=4).contains(&n) {
        return Err(value_err(format!("surface index {n} out of range 1..=4")));
    }
    Ok(SurfaceSpec::builtin(n, regime(lambda)?))
}

/// An exact number a + b·ζ3 with rational a, b.
#[pyclass(name = "Eisenstein", frozen, eq)]
#[derive(PartialEq, Clone)]
struct PyEisenstein(Zeta3);

#[pymethods]
impl PyEisenstein {
    #[new]
    #[pyo3(signature = (a_num=0, a_den=1, b_num=0, b_den=1))]
    fn new(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> PyResult<Self> {
        if a_den == 0 || b_den == 0 {
            return Err(value_err("zero denominator"));
        }
        Ok(PyEisenstein(Zeta3::new(ratq(a_num, a_den), ratq(b_num, b_den))))
    }

    /// ζ3^k.
    #[staticmethod]
    fn zeta(k: i64) -> Self {
        PyEisenstein(Zeta3::zeta3_pow(k))
    }

    fn __add__(&self, rhs: &Self) -> Self {
        PyEisenstein(self.0.clone() + rhs.0.clone())
    }

    fn __sub__(&self, rhs: &Self) -> Self {
        PyEisenstein(self.0.clone() - rhs.0.clone())
    }

    fn __mul__(&self, rhs: &Self) -> Self {
        PyEisenstein(self.0.clone() * rhs.0.clone())
    }

    fn __neg__(&self) -> Self {
        PyEisenstein(-self.0.clone())
    }

    fn conj(&self) -> Self {
        PyEisenstein(self.0.conj())
    }

    fn inv(&self) -> PyResult<Self> {
        Ok(PyEisenstein(self.0.inv().map_err(value_err)?))
    }

    fn pow(&self, e: u64) -> Self {
        PyEisenstein(self.0.pow(e))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// An element of the order-54 group, written (i, j, a, b) for σ^i τ^j e1^a e2^b.
#[pyclass(name = "Element", frozen, eq)]
#[derive(PartialEq, Clone)]
struct PyElement(GElem);

#[pymethods]
impl PyElement {
    #[new]
    #[pyo3(signature = (i=0, j=0, a=0, b=0))]
    fn new(i: i64, j: i64, a: i64, b: i64) -> Self {
        PyElement(GElem::new(i, j, a, b))
    }

    fn __mul__(&self, rhs: &Self) -> Self {
        PyElement(g_mul(self.0, rhs.0))
    }

    fn inverse(&self) -> Self {
        PyElement(g_inv(self.0))
    }

    fn order(&self) -> u32 {
        g_order(self.0)
    }

    fn index(&self) -> usize {
        self.0.idx()
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Genus of a builtin cover ("C1" or "C2").
#[pyfunction]
fn genus(name: &str) -> PyResult<u64> {
    genus_rh(curve(name)?).map_err(value_err)
}

/// Decomposition of the cover's 1-form character as (label, multiplicity) pairs.
#[pyfunction]
fn canonical_character_decomposition(name: &str) -> PyResult<Vec<(String, u64)>> {
    let chi = canonical_character(curve(name)?).map_err(value_err)?;
    let decomp = decompose(&chi, FiniteGroup::builtin()).map_err(value_err)?;
    Ok(decomp.into_iter().map(|(irrep, m)| (irrep.label(), m)).collect())
}

/// Number of points of the cover fixed by the given element.
#[pyfunction]
fn fixed_points(name: &str, g: &PyElement) -> PyResult<u64> {
    fixed_point_count(curve(name)?, g.0).map_err(value_err)
}

/// Number of automorphisms of the group.
#[pyfunction]
fn automorphism_count() -> usize {
    enumerate_automorphisms(FiniteGroup::builtin()).len()
}

/// Singularity profile of builtin surface n as a dict.
#[pyfunction]
fn singularities<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let spec = builtin_spec(n, "generic")?;
    let profile = singularity_profile(&spec);
    let d = PyDict::new(py);
    d.set_item("node_count", profile.node_count)?;
    d.set_item("only_nodes", profile.only_nodes)?;
    Ok(d)
}

/// Numerical invariants of builtin surface n as a dict.
#[pyfunction]
#[pyo3(signature = (n, lam="generic"))]
fn invariants<'py>(py: Python<'py>, n: usize, lam: &str) -> PyResult<Bound<'py, PyDict>> {
    let spec = builtin_spec(n, lam)?;
    let inv = surface_invariants(&spec).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("k_squared", inv.k_squared)?;
    d.set_item("chi", inv.chi.to_string())?;
    d.set_item("p_g", inv.p_g)?;
    d.set_item("q", inv.q)?;
    d.set_item("p_g_by_characters", pg_by_characters(&spec).map_err(value_err)?)?;
    Ok(d)
}

/// Number of invariant 2-forms on builtin surface n.
#[pyfunction]
fn invariant_form_count(n: usize) -> PyResult<usize> {
    let spec = builtin_spec(n, "generic")?;
    Ok(invariant_tensors(&spec.psi).map_err(value_err)?.len())
}

/// The published 2-form basis of builtin surface n, in six-index notation.
#[pyfunction]
fn canonical_basis(n: usize) -> PyResult<Vec<String>> {
    if !(1..=4).contains(&n) {
        return Err(value_err(format!("surface index {n} out of range 1..=4")));
    }
    Ok(table_basis(n).iter().map(|f| f.six_index_string()).collect())
}

/// The same basis written out in the curve monomials.
#[pyfunction]
fn canonical_map(n: usize) -> PyResult<Vec<String>> {
    if !(1..=4).contains(&n) {
        return Err(value_err(format!("surface index {n} out of range 1..=4")));
    }
    Ok(table_basis(n).iter().map(|f| f.monomial_string()).collect())
}

/// Canonical-map degree data of builtin surface n as a dict.
#[pyfunction]
#[pyo3(signature = (n, lam="generic"))]
fn canonical_degree<'py>(py: Python<'py>, n: usize, lam: &str) -> PyResult<Bound<'py, PyDict>> {
    let spec = builtin_spec(n, lam)?;
    let report = intersect::canonical_degree(&spec).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("certificate", report.certificate)?;
    d.set_item("t_squared", report.t_squared)?;
    d.set_item("total_correction", report.total_correction)?;
    d.set_item("m_hat_squared", report.m_hat_squared)?;
    d.set_item("degree", report.degree)?;
    Ok(d)
}

/// Self-intersection drop for the local model (aH, bK, cH+dK).
#[pyfunction]
fn local_correction(a: u64, b: u64, c: u64, d: u64) -> PyResult<u64> {
    intersect::local_correction(a, b, c, d).map_err(value_err)
}

/// Degree bound 9 + (27 − 9q)/(p_g − 2) for a two-dimensional canonical image.
#[pyfunction]
fn beauville_bound(p_g: i64, q: i64) -> i64 {
    intersect::beauville_bound(p_g, q)
}

/// Runs the scenario pipeline and returns the rendered report.
#[pyfunction]
#[pyo3(signature = (scenario, lam="generic", format="table"))]
fn run_scenario(scenario: &str, lam: &str, format: &str) -> PyResult<String> {
    let format = match format {
        "table" => OutputFormat::Table,
        "json" => OutputFormat::Json,
        _ => return Err(value_err(format!("unknown format '{format}', expected table or json"))),
    };
    let cfg = JobConfig {
        scenario: scenario.into(),
        commands: None,
        format,
        lambda: regime(lam)?,
    };
    let report = run_pipeline(&cfg).map_err(value_err)?;
    Ok(emit(&report, format))
}

/// Runs the scenario pipeline and reports whether every oracle check passed.
#[pyfunction]
#[pyo3(signature = (scenario, lam="generic"))]
fn scenario_passes(scenario: &str, lam: &str) -> PyResult<bool> {
    let cfg = JobConfig {
        scenario: scenario.into(),
        commands: None,
        format: OutputFormat::Table,
        lambda: regime(lam)?,
    };
    Ok(report_passes(&run_pipeline(&cfg).map_err(value_err)?))
}

#[pymodule]
fn pqsurf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEisenstein>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(genus, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_character_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(automorphism_count, m)?)?;
    m.add_function(wrap_pyfunction!(singularities, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_form_count, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_basis, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_map, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_degree, m)?)?;
    m.add_function(wrap_pyfunction!(local_correction, m)?)?;
    m.add_function(wrap_pyfunction!(beauville_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_passes, m)?)?;
    Ok(())
}
