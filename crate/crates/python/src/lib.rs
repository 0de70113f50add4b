//! Python bindings for `jp_toric`.

use jp_toric::bratteli::{to_dot, BratteliDiagram};
use jp_toric::jp::{
    self, convergent_matrix, digit_matrix, jp_expand_sources, DigitBlock, ExpandConfig, ThetaVector,
};
use jp_toric::json::{from_json, to_json, DigitsDoc, VectorInput};
use jp_toric::numerics::rational::pow10;
use jp_toric::numerics::UnimodularMatrix;
use jp_toric::repr::{self, OrbitData, Presentation};
use jp_toric::toric::{self, TailWitness};
use jp_toric::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(jp_toric_py, JpToricError, PyException);
create_exception!(jp_toric_py, PrecisionExhaustedError, JpToricError);
create_exception!(jp_toric_py, NotTailEquivalentError, JpToricError);
create_exception!(jp_toric_py, UndecidableError, JpToricError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::PrecisionExhausted { .. } => PrecisionExhaustedError::new_err(msg),
        Error::NotTailEquivalent { .. } => NotTailEquivalentError::new_err(msg),
        Error::Undecidable => UndecidableError::new_err(msg),
        _ => JpToricError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for jp_toric::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn blocks_of(seq: &jp::DigitSequence) -> Vec<Vec<BigInt>> {
    seq.blocks().iter().map(|b| b.digits().to_vec()).collect()
}

#[pyclass(name = "DigitSequence", module = "jp_toric_py", eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyDigitSequence {
    inner: jp::DigitSequence,
}

#[pymethods]
impl PyDigitSequence {
    #[new]
    #[pyo3(signature = (dimension, blocks, terminated = false))]
    fn new(dimension: usize, blocks: Vec<Vec<BigInt>>, terminated: bool) -> PyResult<Self> {
        let blocks = blocks.into_iter().map(DigitBlock::new).collect::<jp_toric::Result<Vec<_>>>().py()?;
        Ok(Self {
            inner: jp::DigitSequence::new(dimension, blocks, terminated).py()?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: DigitsDoc = from_json(text).py()?;
        Ok(Self {
            inner: doc.to_sequence().py()?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&DigitsDoc::from_sequence(&self.inner)).py()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<BigInt>> {
        blocks_of(&self.inner)
    }

    #[getter]
    fn terminated(&self) -> bool {
        self.inner.is_terminated()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn prefix(&self, len: usize) -> Self {
        Self {
            inner: self.inner.prefix(len),
        }
    }

    fn suffix(&self, start: usize) -> Self {
        Self {
            inner: self.inner.suffix(start),
        }
    }

    /// Product of the first `k` digit matrices.
    fn convergent_matrix(&self, k: usize) -> PyResult<PyUnimodularMatrix> {
        Ok(PyUnimodularMatrix {
            inner: convergent_matrix(&self.inner, k).py()?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "DigitSequence(dimension={}, len={}, terminated={})",
            self.inner.dimension(),
            self.inner.len(),
            if self.inner.is_terminated() { "True" } else { "False" }
        )
    }
}

#[pyclass(name = "UnimodularMatrix", module = "jp_toric_py", eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyUnimodularMatrix {
    inner: UnimodularMatrix,
}

#[pymethods]
impl PyUnimodularMatrix {
    #[new]
    fn new(rows: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Ok(Self {
            inner: UnimodularMatrix::new(rows).py()?,
        })
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<BigInt>> {
        self.inner.to_rows()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn determinant(&self) -> BigInt {
        self.inner.determinant()
    }

    fn inverse(&self) -> Self {
        Self {
            inner: self.inner.inverse(),
        }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.mul(&other.inner).py()?,
        })
    }

    fn __pow__(&self, k: i64, _modulo: Option<i64>) -> Self {
        Self {
            inner: self.inner.pow(k),
        }
    }

    fn __repr__(&self) -> String {
        format!("UnimodularMatrix({:?})", self.inner.to_rows())
    }
}

#[pyclass(name = "ToricAFAlgebra", module = "jp_toric_py", from_py_object)]
#[derive(Clone)]
pub struct PyToricAlgebra {
    inner: toric::ToricAFAlgebra,
}

fn witness_dict<'py>(py: Python<'py>, w: &TailWitness) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("offsets", w.offsets.clone())?;
    d.set_item("window", w.window)?;
    d.set_item("tail", PyDigitSequence { inner: w.tail.clone() })?;
    Ok(d)
}

#[pymethods]
impl PyToricAlgebra {
    #[new]
    #[pyo3(signature = (digits, genus = None))]
    fn new(digits: PyDigitSequence, genus: Option<i64>) -> PyResult<Self> {
        let mut inner = toric::ToricAFAlgebra::new(digits.inner).py()?;
        if let Some(g) = genus {
            inner = inner.with_genus(g).py()?;
        }
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: DigitsDoc = from_json(text).py()?;
        Ok(Self {
            inner: doc.to_algebra().py()?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&DigitsDoc::from_algebra(&self.inner)).py()
    }

    #[getter]
    fn digits(&self) -> PyDigitSequence {
        PyDigitSequence {
            inner: self.inner.digits().clone(),
        }
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn genus(&self) -> Option<u32> {
        self.inner.genus()
    }

    /// Tail-equivalence witness as a dict, or `None` within `horizon`.
    #[pyo3(signature = (other, horizon = toric::DEFAULT_HORIZON))]
    fn stably_isomorphic<'py>(
        &self,
        py: Python<'py>,
        other: &Self,
        horizon: usize,
    ) -> PyResult<Option<Bound<'py, PyDict>>> {
        toric::stably_isomorphic(&self.inner, &other.inner, horizon)
            .py()?
            .map(|w| witness_dict(py, &w))
            .transpose()
    }

    fn head_matrix(&self, offset: usize) -> PyResult<PyUnimodularMatrix> {
        Ok(PyUnimodularMatrix {
            inner: toric::head_matrix(&self.inner, offset).py()?,
        })
    }

    /// Graphviz source for the first `levels` levels of the Bratteli diagram.
    #[pyo3(signature = (levels = 3))]
    fn to_dot(&self, levels: usize) -> PyResult<String> {
        let diagram: BratteliDiagram = self.inner.diagram().py()?;
        to_dot(&diagram, levels).py()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ToricAFAlgebra(dimension={}, len={})",
            self.inner.dimension(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "Representation", module = "jp_toric_py", from_py_object)]
#[derive(Clone)]
pub struct PyRepresentation {
    inner: repr::Representation,
}

#[pymethods]
impl PyRepresentation {
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.presentation().generators().to_vec()
    }

    #[getter]
    fn matrices(&self) -> Vec<PyUnimodularMatrix> {
        self.inner
            .matrices()
            .iter()
            .map(|m| PyUnimodularMatrix { inner: m.clone() })
            .collect()
    }

    #[getter]
    fn offsets(&self) -> Option<Vec<usize>> {
        self.inner.witness().map(|w| w.offsets.clone())
    }

    /// Image of a signed 1-based word.
    fn evaluate(&self, word: Vec<i64>) -> PyResult<PyUnimodularMatrix> {
        Ok(PyUnimodularMatrix {
            inner: repr::evaluate_word(&self.inner, &word).py()?,
        })
    }

    /// `(relator, passed)` for every relator.
    fn verify_relators(&self) -> PyResult<Vec<(Vec<i64>, bool)>> {
        let report = repr::verify_relators(&self.inner).py()?;
        Ok(report.relators.into_iter().map(|r| (r.relator, r.pass)).collect())
    }

    /// Number of failing samples out of `count` random word pairs.
    #[pyo3(signature = (count = 500, max_len = 6, seed = 0))]
    fn homomorphism_failures(&self, count: usize, max_len: usize, seed: u64) -> PyResult<usize> {
        let report = repr::homomorphism_samples(&self.inner, count, max_len, seed).py()?;
        Ok(report.homomorphism.iter().filter(|h| !h.pass).count())
    }
}

/// Builds the representation read off the heads of `images` before their
/// common tail with `base`.
#[pyfunction]
#[pyo3(signature = (generators, relators, base, images, horizon = toric::DEFAULT_HORIZON))]
fn build_representation(
    generators: Vec<String>,
    relators: Vec<Vec<i64>>,
    base: PyToricAlgebra,
    images: Vec<PyToricAlgebra>,
    horizon: usize,
) -> PyResult<PyRepresentation> {
    let presentation = Presentation::new(generators, relators).py()?;
    let orbit = OrbitData {
        base: base.inner,
        images: images.into_iter().map(|a| a.inner).collect(),
    };
    Ok(PyRepresentation {
        inner: repr::build_representation(presentation, &orbit, horizon).py()?,
    })
}

/// Expands a vector given as JSON-style values: ints, `"p/q"` or decimal
/// strings, or `{"poly": [...], "lower": ..., "upper": ...}` /
/// `{"quadratic": [a, b, d, c]}` dicts.
#[pyfunction]
#[pyo3(signature = (values, depth = 32, mode = "theta", exact = false, precision = 256, max_precision = 16384))]
fn expand(
    py: Python<'_>,
    values: Bound<'_, PyAny>,
    depth: usize,
    mode: &str,
    exact: bool,
    precision: u32,
    max_precision: u32,
) -> PyResult<PyDigitSequence> {
    let text: String = py.import("json")?.call_method1("dumps", (values,))?.extract()?;
    let values: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| JpToricError::new_err(e.to_string()))?;
    let input: VectorInput = serde_json::from_value(serde_json::json!({
        "mode": mode,
        "values": values,
        "exact": exact,
    }))
    .map_err(|e| JpToricError::new_err(e.to_string()))?;
    let resolved = input.resolve().py()?;
    let config = ExpandConfig {
        precision,
        max_precision,
    };
    let inner = py
        .detach(|| jp_expand_sources(&resolved.sources, depth, config))
        .py()?;
    Ok(PyDigitSequence { inner })
}

/// Encloses `θ` from its digits; returns `(lower, upper)` fractions.
#[pyfunction]
#[pyo3(signature = (digits, tolerance_exp10 = -12))]
fn reconstruct<'py>(
    py: Python<'py>,
    digits: &PyDigitSequence,
    tolerance_exp10: i64,
) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
    let theta = jp::reconstruct_theta(&digits.inner, &pow10(tolerance_exp10)).py()?;
    match &theta {
        ThetaVector::Exact(v) => v
            .iter()
            .map(|x| Ok((fraction(py, x)?, fraction(py, x)?)))
            .collect(),
        ThetaVector::Guarded(v) => v
            .iter()
            .map(|g| Ok((fraction(py, g.lower())?, fraction(py, g.upper())?)))
            .collect(),
    }
}

/// Least `(preperiod, period)` within the bounds, or `None`.
#[pyfunction]
fn detect_periodicity(
    digits: &PyDigitSequence,
    max_preperiod: usize,
    max_period: usize,
) -> PyResult<Option<(usize, usize)>> {
    jp::detect_periodicity(&digits.inner, max_preperiod, max_period).py()
}

#[pyfunction(name = "digit_matrix")]
fn py_digit_matrix(block: Vec<BigInt>) -> PyResult<PyUnimodularMatrix> {
    Ok(PyUnimodularMatrix {
        inner: digit_matrix(&DigitBlock::new(block).py()?),
    })
}

#[pyfunction]
fn theta_from_lambda(py: Python<'_>, lambda: Vec<(BigInt, BigInt)>) -> PyResult<Vec<Bound<'_, PyAny>>> {
    let lambda: Vec<BigRational> = lambda
        .into_iter()
        .map(|(p, q)| {
            if q == BigInt::from(0) {
                Err(JpToricError::new_err("zero denominator"))
            } else {
                Ok(BigRational::new(p, q))
            }
        })
        .collect::<PyResult<_>>()?;
    let theta = toric::theta_from_lambda(&lambda).py()?;
    let exact = theta.as_exact().expect("rational input stays exact");
    exact.iter().map(|x| fraction(py, x)).collect()
}

/// Witness for a family of algebras sharing one tail.
#[pyfunction]
#[pyo3(signature = (algebras, horizon = toric::DEFAULT_HORIZON))]
fn maximal_common_tail<'py>(
    py: Python<'py>,
    algebras: Vec<PyToricAlgebra>,
    horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let algebras: Vec<_> = algebras.into_iter().map(|a| a.inner).collect();
    let w = toric::maximal_common_tail(&algebras, horizon).py()?;
    witness_dict(py, &w)
}

/// Runs the command line with `args` (without the program name).
#[pyfunction]
fn cli(py: Python<'_>, args: Vec<String>) -> i32 {
    let argv: Vec<String> = std::iter::once("jp-toric".to_string()).chain(args).collect();
    py.detach(|| jp_toric::cli::run(argv))
}

#[pymodule]
fn jp_toric_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("JpToricError", py.get_type::<JpToricError>())?;
    m.add("PrecisionExhaustedError", py.get_type::<PrecisionExhaustedError>())?;
    m.add("NotTailEquivalentError", py.get_type::<NotTailEquivalentError>())?;
    m.add("UndecidableError", py.get_type::<UndecidableError>())?;
    m.add_class::<PyDigitSequence>()?;
    m.add_class::<PyUnimodularMatrix>()?;
    m.add_class::<PyToricAlgebra>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(detect_periodicity, m)?)?;
    m.add_function(wrap_pyfunction!(py_digit_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(theta_from_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_common_tail, m)?)?;
    m.add_function(wrap_pyfunction!(build_representation, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
