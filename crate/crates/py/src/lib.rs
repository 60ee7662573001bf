//! Python bindings: signatures, multivectors, γ-matrices, the expression
//! language and the batch commands.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use maggeo_core::clifford::{self, Multivector};
use maggeo_core::expr::{parse_expression, Expression};
use maggeo_core::geometry::Jet2;
use maggeo_core::linalg::CMatrix;
use maggeo_core::spin;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

/// Diagonal metric with m entries +1 followed by k entries -1.
#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Signature(clifford::Signature);

#[pymethods]
impl Signature {
    #[new]
    fn new(m: usize, k: usize) -> PyResult<Self> {
        clifford::Signature::new(m, k).map(Self).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn eta(&self, a: usize, b: usize) -> f64 {
        self.0.eta_ab(a, b)
    }

    fn __repr__(&self) -> String {
        format!("Signature({}, {})", self.0.m(), self.0.k())
    }
}

/// Element of the complexified Clifford algebra.
#[pyclass(frozen, name = "Multivector", skip_from_py_object)]
#[derive(Clone)]
struct Mv(Multivector);

#[pymethods]
impl Mv {
    /// Basis generator v^{a+1}.
    #[staticmethod]
    fn generator(sig: &Signature, a: usize) -> PyResult<Self> {
        if a >= sig.0.n() {
            return Err(err(format!("generator index {a} out of range")));
        }
        Ok(Self(Multivector::generator(sig.0, a)))
    }

    #[staticmethod]
    fn scalar(sig: &Signature, c: Complex64) -> Self {
        Self(Multivector::scalar(sig.0, c))
    }

    /// Basis blade given as a bitmask of generators.
    #[staticmethod]
    fn blade(sig: &Signature, blade: u32, c: Complex64) -> Self {
        Self(Multivector::blade(sig.0, blade, c))
    }

    #[getter]
    fn signature(&self) -> Signature {
        Signature(self.0.signature())
    }

    fn coeff(&self, blade: u32) -> Complex64 {
        self.0.coeff(blade)
    }

    /// Non-zero `(blade, coefficient)` pairs.
    fn terms(&self) -> Vec<(u32, Complex64)> {
        self.0.terms().collect()
    }

    fn grade(&self, r: usize) -> Self {
        Self(self.0.grade_project(r))
    }

    fn reverse(&self) -> Self {
        Self(self.0.reverse())
    }

    fn star(&self) -> Self {
        Self(self.0.star())
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(Self).map_err(err)
    }

    fn exp(&self) -> Self {
        Self(self.0.exp())
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_add(&(-&other.0)).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.geometric_product(&other.0).map(Self).map_err(err)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
fn relation_defect(sig: &Signature) -> f64 {
    clifford::relation_defect(sig.0, &clifford::construct_algebra(sig.0))
}

/// Multiplication table of basis blades as `(sign, blade)` entries.
#[pyfunction]
fn multiplication_table(sig: &Signature) -> Vec<Vec<(i8, u32)>> {
    clifford::multiplication_table(sig.0)
}

/// γ-matrices of an even-dimensional signature as nested lists.
#[pyfunction]
fn gamma_matrices(sig: &Signature) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let rep = spin::gamma_matrices(sig.0).map_err(err)?;
    Ok(rep.gammas().iter().map(rows).collect())
}

#[pyfunction]
fn commutant_dimension(sig: &Signature) -> PyResult<usize> {
    let rep = spin::gamma_matrices(sig.0).map_err(err)?;
    Ok(spin::commutant_dimension(rep.gammas()))
}

/// Dimension of the intertwiners between the left-ideal representation and
/// the γ-matrices.
#[pyfunction]
fn ideal_intertwiner_dimension(sig: &Signature) -> PyResult<usize> {
    let rep = spin::gamma_matrices(sig.0).map_err(err)?;
    let ideal = spin::left_ideal_representation(sig.0).map_err(err)?;
    Ok(spin::intertwiner_space(&ideal, rep.gammas()).map_err(err)?.dimension)
}

/// Parsed expression over named coordinates and parameters.
#[pyclass(frozen, name = "Expression")]
struct PyExpression(Expression);

#[pymethods]
impl PyExpression {
    #[new]
    #[pyo3(signature = (text, coords, params = Vec::new()))]
    fn new(text: &str, coords: Vec<String>, params: Vec<String>) -> PyResult<Self> {
        let c: Vec<&str> = coords.iter().map(String::as_str).collect();
        let p: Vec<&str> = params.iter().map(String::as_str).collect();
        parse_expression(text, &c, &p).map(Self).map_err(err)
    }

    #[pyo3(signature = (x, params = Vec::new()))]
    fn eval(&self, x: Vec<f64>, params: Vec<f64>) -> PyResult<f64> {
        self.check(&x, &params)?;
        Ok(self.0.eval(&x, &params))
    }

    /// Value, gradient and Hessian at `x`.
    #[pyo3(signature = (x, params = Vec::new()))]
    fn jet(&self, x: Vec<f64>, params: Vec<f64>) -> PyResult<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        self.check(&x, &params)?;
        let j = self.0.eval(&Jet2::variables(&x), &params);
        let n = x.len();
        let hess = (0..n).map(|i| (0..n).map(|k| j.hess(i, k)).collect()).collect();
        Ok((j.value(), j.grad().to_vec(), hess))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression({:?})", self.0.to_string())
    }
}

impl PyExpression {
    fn check(&self, x: &[f64], params: &[f64]) -> PyResult<()> {
        if x.len() != self.0.coords.len() || params.len() != self.0.params.len() {
            return Err(err(format!(
                "expected {} coordinates and {} parameters",
                self.0.coords.len(),
                self.0.params.len()
            )));
        }
        Ok(())
    }
}

/// Runs a command with command-line style arguments and returns
/// `(exit_code, report_json)`. Configuration errors raise ValueError.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    let argv = std::iter::once("maggeo".to_string()).chain(args);
    let parsed = maggeo_cli::Args::from_argv(argv).map_err(err)?;
    let cfg = parsed.to_config().map_err(err)?;
    let report = maggeo_cli::run(&cfg).map_err(err)?;
    Ok((if report.summary.pass { 0 } else { 1 }, report.to_json()))
}

#[pymodule]
fn maggeo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Signature>()?;
    m.add_class::<Mv>()?;
    m.add_class::<PyExpression>()?;
    m.add_function(wrap_pyfunction!(relation_defect, m)?)?;
    m.add_function(wrap_pyfunction!(multiplication_table, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_matrices, m)?)?;
    m.add_function(wrap_pyfunction!(commutant_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_intertwiner_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
