//! Python bindings. Ordinals, formulas and sets cross the boundary as small
//! wrapper classes; reports cross as JSON text.

use pyo3::basic::CompareOp;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ordforge::analysis::analyze_sigma;
use ordforge::calculus::{check, parse_proof, print_proof};
use ordforge::cli::analyze_report;
use ordforge::collapse::{self, ControlledOperator};
use ordforge::hierarchy::{Assignment, HFSet, Hierarchy};
use ordforge::ord::{self, OrdTerm};
use ordforge::syntax::{self, classify, parse_formula, print_formula, System, Theory};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn theory(name: &str) -> PyResult<Theory> {
    Theory::from_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown theory {:?}", name)))
}

/// An ordinal below ε_{Ω+1} in normal form.
#[pyclass(name = "Ordinal", frozen, from_py_object, module = "ordforge")]
#[derive(Clone)]
pub struct PyOrdinal(OrdTerm);

#[pymethods]
impl PyOrdinal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        ord::parse(text).map(PyOrdinal).map_err(err)
    }

    #[staticmethod]
    fn nat(n: u64) -> Self {
        PyOrdinal(OrdTerm::nat(n))
    }

    fn pretty(&self) -> String {
        self.0.pretty()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    fn __richcmp__(&self, other: &Self, op: CompareOp) -> bool {
        op.matches(self.0.cmp(&other.0))
    }

    fn __add__(&self, other: &Self) -> Self {
        PyOrdinal(ord::add(&self.0, &other.0))
    }

    /// Natural (Hessenberg) sum.
    fn nat_sum(&self, other: &Self) -> Self {
        PyOrdinal(self.0.nat_sum(&other.0))
    }
}

#[pyfunction]
fn veblen(a: &PyOrdinal, b: &PyOrdinal) -> PyOrdinal {
    PyOrdinal(ord::veblen(&a.0, &b.0))
}

#[pyfunction]
fn omega_pow(a: &PyOrdinal) -> PyOrdinal {
    PyOrdinal(ord::omega_pow(&a.0))
}

#[pyfunction]
fn psi(a: &PyOrdinal) -> PyResult<PyOrdinal> {
    collapse::psi(&a.0).map(PyOrdinal).map_err(err)
}

#[pyfunction]
fn in_b(alpha: &PyOrdinal, x: &PyOrdinal) -> bool {
    collapse::in_b(&alpha.0, &x.0)
}

#[pyfunction]
#[pyo3(signature = (x, eta, params = Vec::new()))]
fn h_contains(x: &PyOrdinal, eta: &PyOrdinal, params: Vec<PyOrdinal>) -> bool {
    let ps: Vec<OrdTerm> = params.into_iter().map(|p| p.0).collect();
    ControlledOperator::with_params(eta.0.clone(), &ps).contains(&x.0)
}

#[pyfunction]
fn hat(eta: &PyOrdinal, alpha: &PyOrdinal) -> PyOrdinal {
    PyOrdinal(collapse::hat(&eta.0, &alpha.0))
}

/// A formula of one of the three languages.
#[pyclass(name = "Formula", frozen, module = "ordforge")]
pub struct PyFormula {
    f: syntax::Formula,
    theory: Theory,
}

#[pymethods]
impl PyFormula {
    #[new]
    #[pyo3(signature = (text, theory = "ikp"))]
    fn new(text: &str, theory: &str) -> PyResult<Self> {
        let th = self::theory(theory)?;
        Ok(PyFormula { f: parse_formula(text, th).map_err(err)?, theory: th })
    }

    fn __str__(&self) -> String {
        print_formula(&self.f)
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}', '{}')", print_formula(&self.f), self.theory.name())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.f == other.f
    }

    fn is_sigma(&self) -> bool {
        classify(&self.f, self.theory).sigma
    }

    fn is_pi(&self) -> bool {
        classify(&self.f, self.theory).pi
    }

    fn is_delta0(&self) -> bool {
        syntax::classify::is_delta0(&self.f)
    }

    /// Rank in the matching infinitary system; IRS^E uses the all-zero assignment.
    fn rank(&self) -> PyOrdinal {
        PyOrdinal(syntax::rank(&self.f, System::of(self.theory)))
    }
}

/// Checks a proof; returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (src, theory = "ikp"))]
fn check_proof(src: &str, theory: &str) -> PyResult<String> {
    let th = self::theory(theory)?;
    let d = parse_proof(src, th).map_err(err)?;
    serde_json::to_string(&check(&d, th)).map_err(err)
}

/// Parses and reprints a proof in canonical layout.
#[pyfunction]
#[pyo3(signature = (src, theory = "ikp"))]
fn normalize_proof(src: &str, theory: &str) -> PyResult<String> {
    parse_proof(src, self::theory(theory)?).map(|d| print_proof(&d)).map_err(err)
}

/// The full analysis report as JSON text.
#[pyfunction]
#[pyo3(signature = (src, theory = "ikp"))]
fn analyze(src: &str, theory: &str) -> PyResult<String> {
    let report = analyze_report(src, self::theory(theory)?).map_err(PyValueError::new_err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Final bound only; raises when the pipeline refuses the proof.
#[pyfunction]
#[pyo3(signature = (src, theory = "ikp"))]
fn final_bound(src: &str, theory: &str) -> PyResult<PyOrdinal> {
    let th = self::theory(theory)?;
    let d = parse_proof(src, th).map_err(err)?;
    analyze_sigma(&d, th).map(|r| PyOrdinal(r.final_bound)).map_err(err)
}

/// Members of stage n, in brace syntax.
#[pyfunction]
fn stage(n: usize) -> PyResult<Vec<String>> {
    let h = Hierarchy::from_env().map_err(err)?;
    Ok(h.stage(n).map_err(err)?.elems().iter().map(|x| x.to_string()).collect())
}

/// Truth of a bounded formula; `assign` maps names to sets in brace syntax.
#[pyfunction]
#[pyo3(signature = (formula, assign = Vec::new()))]
fn eval_bounded(formula: &PyFormula, assign: Vec<(String, String)>) -> PyResult<bool> {
    let mut v = Assignment::new();
    for (name, set) in assign {
        v.insert(name, HFSet::parse(&set).map_err(err)?);
    }
    Hierarchy::from_env().map_err(err)?.eval_bounded(&formula.f, &v, formula.theory).map_err(err)
}

#[pyfunction]
fn sat_stage(formula: &PyFormula, n: usize) -> PyResult<bool> {
    Hierarchy::from_env().map_err(err)?.sat_stage(&formula.f, n, formula.theory).map_err(err)
}

#[pymodule(name = "ordforge")]
fn ordforge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrdinal>()?;
    m.add_class::<PyFormula>()?;
    m.add_function(wrap_pyfunction!(veblen, m)?)?;
    m.add_function(wrap_pyfunction!(omega_pow, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(in_b, m)?)?;
    m.add_function(wrap_pyfunction!(h_contains, m)?)?;
    m.add_function(wrap_pyfunction!(hat, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_proof, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(final_bound, m)?)?;
    m.add_function(wrap_pyfunction!(stage, m)?)?;
    m.add_function(wrap_pyfunction!(eval_bounded, m)?)?;
    m.add_function(wrap_pyfunction!(sat_stage, m)?)?;
    Ok(())
}
