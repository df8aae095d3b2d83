//! Python bindings: morphisms, morphic words, antipower detection,
//! classification, exact golden-ratio arithmetic and verification suites.

use std::sync::Arc;

use antipower_core::antipower::{self as ap, Strategy};
use antipower_core::classifier;
use antipower_core::golden::{self, GoldenNumber};
use antipower_core::suites::{self, Suite, SuiteOptions};
use antipower_core::word::{Alphabet, FiniteWord};
use antipower_core::Error;
use num_bigint::BigInt;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    if e.is_resource_cap() {
        PyMemoryError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn strategy(name: &str) -> PyResult<Strategy> {
    match name {
        "naive" => Ok(Strategy::Naive),
        "accelerated" => Ok(Strategy::Accelerated),
        _ => Err(PyValueError::new_err(format!("unknown strategy '{name}'"))),
    }
}

/// A letter-to-word substitution.
#[pyclass(name = "Morphism", frozen)]
struct PyMorphism {
    inner: Arc<antipower_core::Morphism>,
}

#[pymethods]
impl PyMorphism {
    #[new]
    fn new(rules: &str) -> PyResult<Self> {
        let inner = antipower_core::Morphism::parse(rules).map_err(err)?;
        Ok(Self {
            inner: Arc::new(inner),
        })
    }

    #[staticmethod]
    fn thue_morse() -> Self {
        Self {
            inner: Arc::new(antipower_core::Morphism::thue_morse()),
        }
    }

    #[staticmethod]
    fn fibonacci() -> Self {
        Self {
            inner: Arc::new(antipower_core::Morphism::fibonacci()),
        }
    }

    #[getter]
    fn alphabet(&self) -> String {
        self.inner.alphabet().symbols().iter().collect()
    }

    #[getter]
    fn uniform_radius(&self) -> Option<usize> {
        self.inner.uniform_radius()
    }

    fn image(&self, letter: char) -> PyResult<String> {
        let a = self.inner.letter(letter).map_err(err)?;
        Ok(self.render(self.inner.image(a)))
    }

    fn is_prolongable(&self, seed: char) -> PyResult<bool> {
        Ok(self
            .inner
            .is_prolongable(self.inner.letter(seed).map_err(err)?))
    }

    fn apply(&self, word: &str) -> PyResult<String> {
        let w = self.inner.word(word).map_err(err)?;
        Ok(self.inner.apply(&w).map_err(err)?.to_string())
    }

    #[pyo3(signature = (seed, n, cap = 1 << 24))]
    fn iterate(&self, seed: char, n: u32, cap: u64) -> PyResult<String> {
        let a = self.inner.letter(seed).map_err(err)?;
        Ok(self.inner.iterate(a, n, cap).map_err(err)?.to_string())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Morphism('{}')", self.inner)
    }
}

impl PyMorphism {
    fn render(&self, letters: &[u8]) -> String {
        letters
            .iter()
            .map(|&l| self.inner.alphabet().symbol(l))
            .collect()
    }
}

/// The fixed point of a prolongable morphism, expanded lazily.
#[pyclass(name = "MorphicWord", frozen)]
struct PyMorphicWord {
    inner: antipower_core::MorphicWord,
}

#[pymethods]
impl PyMorphicWord {
    #[new]
    #[pyo3(signature = (morphism, seed = None, cap = None))]
    fn new(morphism: &PyMorphism, seed: Option<char>, cap: Option<u64>) -> PyResult<Self> {
        let seed = match seed {
            Some(c) => morphism.inner.letter(c).map_err(err)?,
            None => 0,
        };
        let mut inner =
            antipower_core::MorphicWord::shared(morphism.inner.clone(), seed).map_err(err)?;
        if let Some(cap) = cap {
            inner = inner.with_cap(cap);
        }
        Ok(Self { inner })
    }

    #[staticmethod]
    fn fibonacci() -> Self {
        Self {
            inner: antipower_core::MorphicWord::fibonacci(),
        }
    }

    #[staticmethod]
    fn thue_morse() -> Self {
        Self {
            inner: antipower_core::MorphicWord::thue_morse(),
        }
    }

    fn prefix(&self, py: Python<'_>, length: usize) -> PyResult<String> {
        let w = py.detach(|| self.inner.prefix(length)).map_err(err)?;
        Ok(w.to_string())
    }

    fn letter_at(&self, index: usize) -> PyResult<char> {
        let l = self.inner.letter_at(index).map_err(err)?;
        Ok(self.inner.morphism().alphabet().symbol(l))
    }

    #[pyo3(signature = (i, k, cap, strategy = "accelerated"))]
    fn gamma(
        &self,
        py: Python<'_>,
        i: usize,
        k: usize,
        cap: usize,
        strategy: &str,
    ) -> PyResult<Option<usize>> {
        let s = self::strategy(strategy)?;
        py.detach(|| ap::gamma_with(&self.inner, i, k, cap, s))
            .map_err(err)
    }

    #[getter]
    fn materialized_len(&self) -> usize {
        self.inner.materialized_len()
    }
}

fn plain_word(text: &str) -> PyResult<FiniteWord> {
    let mut symbols: Vec<char> = text.chars().collect();
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.is_empty() {
        symbols.push('0');
    }
    let alphabet = Arc::new(Alphabet::new(symbols).map_err(err)?);
    FiniteWord::parse(alphabet, text).map_err(err)
}

/// True iff `word` splits into `k` pairwise distinct equal-length blocks.
#[pyfunction]
fn is_antipower(word: &str, k: usize) -> PyResult<bool> {
    ap::is_antipower(&plain_word(word)?, k).map_err(err)
}

/// The canonical equal block pair among `k` blocks of length `m` at `start`.
#[pyfunction]
#[pyo3(signature = (word, start, m, k, strategy = "accelerated"))]
fn first_equal_blocks(
    word: &str,
    start: usize,
    m: usize,
    k: usize,
    strategy: &str,
) -> PyResult<Option<(usize, usize)>> {
    let w = plain_word(word)?;
    if start + k * m > w.len() {
        return Err(PyValueError::new_err(
            "blocks extend past the end of the word",
        ));
    }
    Ok(ap::first_equal_blocks(
        w.letters(),
        start,
        m,
        k,
        self::strategy(strategy)?,
    ))
}

/// Classification verdict as a JSON string.
#[pyfunction]
#[pyo3(signature = (morphism, seed = None, prefix_length = 4096))]
fn classify(morphism: &PyMorphism, seed: Option<char>, prefix_length: usize) -> PyResult<String> {
    let seed = match seed {
        Some(c) => morphism.inner.letter(c).map_err(err)?,
        None => 0,
    };
    let verdict = classifier::classify(&morphism.inner, seed, prefix_length).map_err(err)?;
    serde_json::to_string(&verdict).map_err(|e| err(e.into()))
}

#[pyfunction]
fn fib(n: usize) -> BigInt {
    golden::fib(n)
}

#[pyfunction]
fn fib_digit(n: u64) -> u8 {
    golden::fib_digit(n)
}

/// `floor(k phi)`, exactly.
#[pyfunction]
fn floor_phi_multiple(k: BigInt) -> BigInt {
    golden::floor_phi_multiple(&k)
}

/// Sign of `a + b phi`, exactly.
#[pyfunction]
fn golden_sign(a: BigInt, b: BigInt) -> i8 {
    GoldenNumber::new(a, b).signum()
}

/// Coefficients of the fractional part of `a + b phi`.
#[pyfunction]
fn golden_frac(a: BigInt, b: BigInt) -> (BigInt, BigInt) {
    let f = GoldenNumber::new(a, b).frac();
    (f.a().clone(), f.b().clone())
}

#[pyfunction]
fn fib_antipower_k(n: u32) -> PyResult<BigInt> {
    golden::fib_antipower_k(n).map_err(err)
}

/// `(n, block, certified)` for the smallest block length found for `k`.
#[pyfunction]
fn fib_block_bound(k: u64) -> PyResult<(u32, BigInt, bool)> {
    let b = golden::fib_block_bound(k).map_err(err)?;
    Ok((b.n, b.block, b.ratio_ok))
}

/// Runs a named verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (
    suite, morphism = None, seed = None, n = None, k = None, kmax = None,
    indices = None, limit = None, prefix_length = None, strategy = "accelerated"
))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    suite: &str,
    morphism: Option<&PyMorphism>,
    seed: Option<char>,
    n: Option<Vec<usize>>,
    k: Option<(usize, usize)>,
    kmax: Option<u64>,
    indices: Option<(usize, usize)>,
    limit: Option<usize>,
    prefix_length: Option<usize>,
    strategy: &str,
) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(err)?;
    let seed = match (morphism, seed) {
        (Some(m), Some(c)) => Some(m.inner.letter(c).map_err(err)?),
        _ => None,
    };
    let opts = SuiteOptions {
        morphism: morphism.map(|m| m.inner.clone()),
        seed,
        n,
        k: k.map(|(a, b)| a..b),
        k_max: kmax,
        indices: indices.map(|(a, b)| a..b),
        limit,
        prefix_length,
        strategy: self::strategy(strategy)?,
        ..Default::default()
    };
    let report = py.detach(|| suites::run_suite(suite, &opts)).map_err(err)?;
    report.to_json().map_err(err)
}

#[pymodule]
fn antipower(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMorphism>()?;
    m.add_class::<PyMorphicWord>()?;
    m.add_function(wrap_pyfunction!(is_antipower, m)?)?;
    m.add_function(wrap_pyfunction!(first_equal_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(fib, m)?)?;
    m.add_function(wrap_pyfunction!(fib_digit, m)?)?;
    m.add_function(wrap_pyfunction!(floor_phi_multiple, m)?)?;
    m.add_function(wrap_pyfunction!(golden_sign, m)?)?;
    m.add_function(wrap_pyfunction!(golden_frac, m)?)?;
    m.add_function(wrap_pyfunction!(fib_antipower_k, m)?)?;
    m.add_function(wrap_pyfunction!(fib_block_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SCHEMA_VERSION", antipower_core::report::SCHEMA_VERSION)?;
    Ok(())
}
