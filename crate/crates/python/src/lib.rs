//! Python bindings: representations, verifiers, layer extraction,
//! constructions and the search harness.

use heisenrep::format::{read_rep, write_rep};
use heisenrep::generators::{direct_sum, monomial_coalgebra_rep, tensor_product};
use heisenrep::linalg::ExactMatrix;
use heisenrep::poly::GroupKind;
use heisenrep::rep::{
    check_layer_relations, extract_layers, verify_comodule_axioms, verify_fundamental_relation, CheckMode,
    CoefficientFamily, LayerTriple, Site, VerificationReport,
};
use heisenrep::scalars::{FieldSpec, Prime, Scalar};
use heisenrep::search::{run_conjecture_search, GeneratorMix, SearchConfig};
use heisenrep::structure::{construct_h1_charp, exponential_form_h1, LieLayerData};
use heisenrep::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

create_exception!(pyheisenrep, HypothesisError, PyValueError, "A construction hypothesis failed.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Hypothesis(_) | Error::NotNilpotent | Error::FactorialNotInvertible(..) => {
            HypothesisError::new_err(e.to_string())
        }
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field_from(p: Option<u64>) -> PyResult<FieldSpec> {
    match p {
        Some(p) => FieldSpec::prime(p).map_err(py_err),
        None => Ok(FieldSpec::Rational),
    }
}

fn scalar_from(field: FieldSpec, v: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    if let Ok(n) = v.extract::<i64>() {
        return Ok(field.from_i64(n));
    }
    let s: String = v.extract()?;
    match s.split_once('/') {
        Some((a, b)) => {
            let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| PyValueError::new_err(format!("bad scalar {s:?}")));
            field.ratio(parse(a)?, parse(b)?).map_err(py_err)
        }
        None => {
            let n = s.trim().parse::<i64>().map_err(|_| PyValueError::new_err(format!("bad scalar {s:?}")))?;
            Ok(field.from_i64(n))
        }
    }
}

fn matrix_from(field: FieldSpec, rows: &Bound<'_, PyAny>) -> PyResult<ExactMatrix> {
    let mut out = Vec::new();
    for row in rows.try_iter()? {
        let row = row?;
        let mut r = Vec::new();
        for v in row.try_iter()? {
            r.push(scalar_from(field, &v?)?);
        }
        out.push(r);
    }
    ExactMatrix::from_rows(field, out).map_err(py_err)
}

fn matrix_to(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()
}

fn violations(r: &VerificationReport) -> Vec<String> {
    r.violations().iter().map(|v| format!("{}: {}", v.site, v.description)).collect()
}

fn lie_from(p: u64, layers: &Bound<'_, PyAny>) -> PyResult<LieLayerData> {
    let prime = Prime::new(p).map_err(py_err)?;
    let field = FieldSpec::Prime(prime);
    let mut triples = Vec::new();
    for layer in layers.try_iter()? {
        let (x, y, z): (Bound<'_, PyAny>, Bound<'_, PyAny>, Bound<'_, PyAny>) = layer?.extract()?;
        triples.push(LayerTriple {
            x: matrix_from(field, &x)?,
            y: matrix_from(field, &y)?,
            z: matrix_from(field, &z)?,
        });
    }
    let dim = triples
        .first()
        .map(|t| t.x.dim())
        .ok_or_else(|| PyValueError::new_err("at least one layer is required"))?;
    LieLayerData::new(prime, dim, triples).map_err(py_err)
}

/// A finite-dimensional representation stored as its coefficient matrices.
#[pyclass(frozen, skip_from_py_object, module = "pyheisenrep")]
pub struct Representation {
    inner: CoefficientFamily,
}

#[pymethods]
impl Representation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        read_rep(text).map(|inner| Representation { inner }).map_err(py_err)
    }

    fn to_json(&self) -> String {
        write_rep(&self.inner)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn group(&self) -> String {
        self.inner.group().to_string()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    /// Exponents with a nonzero coefficient matrix, in increasing order.
    fn support(&self) -> Vec<Vec<u32>> {
        self.inner.support().cloned().collect()
    }

    fn coefficient(&self, exponent: Vec<u32>) -> PyResult<Vec<Vec<String>>> {
        if exponent.len() != self.inner.group().arity() {
            return Err(py_err(Error::ArityMismatch { expected: self.inner.group().arity(), found: exponent.len() }));
        }
        Ok(matrix_to(&self.inner.coeff(&exponent)))
    }

    /// Entries of the matrix of polynomials, rendered as strings.
    fn polynomial_matrix(&self) -> Vec<Vec<String>> {
        let m = self.inner.to_polynomial_matrix();
        (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j).to_string()).collect()).collect()
    }

    fn verify_axioms(&self) -> Vec<String> {
        violations(&verify_comodule_axioms(&self.inner))
    }

    fn verify_relation(&self) -> Vec<String> {
        violations(&verify_fundamental_relation(&self.inner))
    }

    fn is_valid(&self) -> bool {
        verify_comodule_axioms(&self.inner).ok()
    }

    /// Frobenius layers as dictionaries with keys `X`, `Y`, `Z`.
    fn layers(&self) -> PyResult<Vec<std::collections::BTreeMap<String, Vec<Vec<String>>>>> {
        let layers = extract_layers(&self.inner).map_err(py_err)?;
        Ok(layers
            .layers
            .iter()
            .map(|t| {
                [("X", &t.x), ("Y", &t.y), ("Z", &t.z)]
                    .into_iter()
                    .map(|(k, m)| (k.to_string(), matrix_to(m)))
                    .collect()
            })
            .collect())
    }

    /// Failed layer conditions as `(condition, left, right, description)`.
    fn check_layers(&self) -> PyResult<Vec<(String, String, String, String)>> {
        let layers = extract_layers(&self.inner).map_err(py_err)?;
        let report = check_layer_relations(&layers, CheckMode::Report);
        Ok(report
            .violations()
            .iter()
            .filter_map(|v| match &v.site {
                Site::Layer { condition, left, right } => Some((
                    condition.id().to_string(),
                    left.to_string(),
                    right.to_string(),
                    v.description.clone(),
                )),
                _ => None,
            })
            .collect())
    }

    fn tensor(&self, other: &Representation) -> PyResult<Self> {
        tensor_product(&self.inner, &other.inner).map(|inner| Representation { inner }).map_err(py_err)
    }

    fn direct_sum(&self, other: &Representation) -> PyResult<Self> {
        direct_sum(&self.inner, &other.inner).map(|inner| Representation { inner }).map_err(py_err)
    }

    fn __eq__(&self, other: &Representation) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Representation(group={}, field={}, dim={}, coefficients={})",
            self.inner.group(),
            self.inner.field(),
            self.inner.dim(),
            self.inner.len()
        )
    }
}

/// Representation on all monomials of degree at most `max_degree`; `p=None`
/// means the rationals.
#[pyfunction]
#[pyo3(signature = (group, max_degree, p=None))]
fn coalgebra(group: &str, max_degree: u32, p: Option<u64>) -> PyResult<Representation> {
    let g = GroupKind::parse(group).map_err(py_err)?;
    monomial_coalgebra_rep(field_from(p)?, g, max_degree).map(|inner| Representation { inner }).map_err(py_err)
}

/// Builds the representation from layer data `[(X0, Y0, Z0), ...]`.
#[pyfunction]
fn construct(p: u64, layers: &Bound<'_, PyAny>) -> PyResult<Representation> {
    let lie = lie_from(p, layers)?;
    construct_h1_charp(&lie).map(|inner| Representation { inner }).map_err(py_err)
}

/// The same representation as `construct`, via layered exponentials.
#[pyfunction]
fn exponential_form(p: u64, layers: &Bound<'_, PyAny>) -> PyResult<Representation> {
    let lie = lie_from(p, layers)?;
    let m = exponential_form_h1(&lie).map_err(py_err)?;
    CoefficientFamily::from_polynomial_matrix(&m, GroupKind::H1).map(|inner| Representation { inner }).map_err(py_err)
}

fn residue(s: Scalar) -> u32 {
    match s {
        Scalar::Mod { value, .. } => value,
        Scalar::Rational(_) => unreachable!("prime field"),
    }
}

#[pyfunction]
fn lucas_binomial(n: u64, r: u64, p: u64) -> PyResult<u32> {
    Ok(residue(heisenrep::scalars::lucas_binomial(n, r, Prime::new(p).map_err(py_err)?)))
}

#[pyfunction]
fn gamma(n: u64, p: u64) -> PyResult<u32> {
    Ok(residue(heisenrep::scalars::gamma(n, Prime::new(p).map_err(py_err)?)))
}

#[pyfunction]
fn p_digits(n: u64, p: u64) -> PyResult<Vec<u32>> {
    Ok(heisenrep::scalars::p_digits(n, Prime::new(p).map_err(py_err)?).digits().to_vec())
}

/// Runs the seeded search and returns its report as a JSON string.
#[pyfunction]
#[pyo3(signature = (p, target_dim=None, budget=1000, seed=0, mix=None, fail_fast=false))]
fn search(
    p: u64,
    target_dim: Option<usize>,
    budget: usize,
    seed: u64,
    mix: Option<&str>,
    fail_fast: bool,
) -> PyResult<String> {
    let mut cfg = SearchConfig::new(Prime::new(p).map_err(py_err)?);
    if let Some(d) = target_dim {
        cfg.target_dim = d;
    }
    if let Some(m) = mix {
        cfg.mix = GeneratorMix::parse(m).map_err(py_err)?;
    }
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.fail_fast = fail_fast;
    let report = run_conjecture_search(&cfg).map_err(py_err)?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

#[pymodule]
fn pyheisenrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Representation>()?;
    m.add("HypothesisError", m.py().get_type::<HypothesisError>())?;
    m.add_function(wrap_pyfunction!(coalgebra, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(exponential_form, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(p_digits, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
