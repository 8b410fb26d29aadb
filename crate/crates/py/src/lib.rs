//! Python bindings: a `Poly` class over the sparse Laurent-polynomial core
//! plus module-level functions for product expansion, sign checking,
//! threshold search, multisum construction, and identity verification.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyType;

use borwein_lab_core::analysis::{
    check_iks_even as core_check_iks_even, check_iks_odd as core_check_iks_odd,
    check_pattern as core_check_pattern, dissect as core_dissect, reproduce_counterexamples,
    threshold_row as core_threshold_row, tridissect_borwein, ThresholdProduct,
};
use borwein_lab_core::modular::{default_prime, eval_mod};
use borwein_lab_core::multisum::{
    andrews_abc as core_andrews_abc, general_multisum as core_general_multisum,
    kaneko_product_lhs, kaneko_sum_rhs, q_binomial as core_q_binomial,
    theorem_multisum as core_theorem_multisum, verify_andrews_exact, verify_general_exact,
    verify_general_modular, verify_lemma_exact, verify_lemma_modular, verify_theorem_exact,
    verify_theorem_modular, MultisumParams,
};
use borwein_lab_core::poly::{LaurentPoly, Var};
use borwein_lab_core::qseries::{conj1_spec, conj3_spec, expand_with_jobs, iks_spec};

fn parse_var(name: &str) -> PyResult<Var> {
    match name {
        "p" => Ok(Var::P),
        "q" => Ok(Var::Q),
        "z" => Ok(Var::Z),
        "t" => Ok(Var::T),
        other => Err(PyValueError::new_err(format!(
            "unknown variable {other:?}; expected one of p, q, z, t"
        ))),
    }
}

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Sparse Laurent polynomial in up to four variables (p, q, z, t) with
/// arbitrary-precision integer coefficients.
#[pyclass(frozen)]
#[derive(Clone)]
struct Poly {
    inner: LaurentPoly,
}

#[pymethods]
impl Poly {
    /// The zero polynomial.
    #[staticmethod]
    fn zero() -> Self {
        Poly { inner: LaurentPoly::zero() }
    }

    /// A single term `c * var1^e1 * var2^e2 * ...`; exps is a dict like
    /// {"q": 3, "p": -1}.
    #[staticmethod]
    #[pyo3(signature = (c, exps=None))]
    fn monomial(c: i64, exps: Option<std::collections::HashMap<String, i64>>) -> PyResult<Self> {
        let mut pairs = Vec::new();
        for (name, e) in exps.unwrap_or_default() {
            pairs.push((parse_var(&name)?, e));
        }
        Ok(Poly { inner: LaurentPoly::monomial(c, &pairs) })
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
        Ok(Poly { inner: LaurentPoly::from_json(&v).map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Coefficient of the monomial with the given exponents (dict as in
    /// `monomial`), as a decimal string.
    #[pyo3(signature = (exps=None))]
    fn coeff(&self, exps: Option<std::collections::HashMap<String, i64>>) -> PyResult<String> {
        let mut pairs = Vec::new();
        for (name, e) in exps.unwrap_or_default() {
            pairs.push((parse_var(&name)?, e));
        }
        Ok(self.inner.coeff(&pairs).to_string())
    }

    /// Map var -> var^d (d may be negative).
    fn substitute_power(&self, var: &str, d: i64) -> PyResult<Self> {
        let v = parse_var(var)?;
        Ok(Poly { inner: self.inner.substitute_power(v, d).map_err(value_err)? })
    }

    /// Exact division; raises if the divisor does not divide exactly.
    fn exact_div(&self, other: &Poly) -> PyResult<Self> {
        self.inner
            .exact_div(&other.inner)
            .map(|inner| Poly { inner })
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    /// Evaluate modulo `prime` at the point {"p": 3, "q": 5, ...}.
    #[pyo3(signature = (point, prime=None))]
    fn eval_mod(
        &self,
        point: std::collections::HashMap<String, u64>,
        prime: Option<u64>,
    ) -> PyResult<u64> {
        let mut pt = std::collections::BTreeMap::new();
        for (name, x) in point {
            pt.insert(parse_var(&name)?, x);
        }
        eval_mod(&self.inner, &pt, prime.unwrap_or_else(default_prime)).map_err(value_err)
    }

    fn __add__(&self, other: &Poly) -> Self {
        Poly { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &Poly) -> Self {
        Poly { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &Poly) -> Self {
        Poly { inner: self.inner.mul(&other.inner) }
    }

    fn __neg__(&self) -> Self {
        Poly { inner: self.inner.neg() }
    }

    fn __eq__(&self, other: &Poly) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// p-graded slices of the first-conjecture product for (m, n), as a list of
/// Poly (index = power of p). kmax defaults to the proven degree bound.
#[pyfunction]
#[pyo3(signature = (m, n, kmax=None))]
fn expand_conj1(m: u32, n: u32, kmax: Option<usize>) -> Vec<Poly> {
    let spec = conj1_spec(m, n);
    let kmax = kmax.unwrap_or(spec.p_degree_bound().max(0) as usize);
    expand_with_jobs(&spec, kmax, 1)
        .slices()
        .iter()
        .map(|s| Poly { inner: s.clone() })
        .collect()
}

/// p-graded slices of the general (K) product.
#[pyfunction]
#[pyo3(signature = (m1, m2, n1, n2, n3, big_k, kmax=None))]
fn expand_conj3(
    m1: u32,
    m2: u32,
    n1: u32,
    n2: u32,
    n3: u32,
    big_k: u32,
    kmax: Option<usize>,
) -> Vec<Poly> {
    let spec = conj3_spec(m1, m2, n1, n2, n3, big_k);
    let kmax = kmax.unwrap_or(spec.p_degree_bound().max(0) as usize);
    expand_with_jobs(&spec, kmax, 1)
        .slices()
        .iter()
        .map(|s| Poly { inner: s.clone() })
        .collect()
}

/// Expansion of (q^a; q^K)_n (q^{K-a}; q^K)_n.
#[pyfunction]
fn expand_iks(a: u32, big_k: u32, n: u32) -> PyResult<Poly> {
    let spec = iks_spec(a, big_k, n).map_err(value_err)?;
    Ok(Poly { inner: expand_with_jobs(&spec, 0, 1).slice(0).clone() })
}

/// The three single sums (A_n, B_n, C_n) of the tridissection identity.
#[pyfunction]
fn andrews_abc(n: usize) -> (Poly, Poly, Poly) {
    let (a, b, c) = core_andrews_abc(n);
    (Poly { inner: a }, Poly { inner: b }, Poly { inner: c })
}

/// Gaussian binomial coefficient [m, j] as a polynomial in q.
#[pyfunction]
fn q_binomial(m: usize, j: usize) -> Poly {
    Poly { inner: core_q_binomial(m, j) }
}

/// Residue components of f mod `modulus` (list of length `modulus`).
#[pyfunction]
fn dissect(f: &Poly, modulus: u32) -> Vec<Poly> {
    core_dissect(&f.inner, modulus).components.into_iter().map(|c| Poly { inner: c }).collect()
}

/// The split f = A(q^3) - q B(q^3) - q^2 C(q^3).
#[pyfunction]
fn tridissect(f: &Poly) -> (Poly, Poly, Poly) {
    let (a, b, c) = tridissect_borwein(&f.inner);
    (Poly { inner: a }, Poly { inner: b }, Poly { inner: c })
}

/// The multisum F^l for residue class l (bivariate in p and q).
#[pyfunction]
fn theorem_multisum(m: u32, n: u32, l: u8) -> PyResult<Poly> {
    if l > 2 {
        return Err(PyValueError::new_err("l must be 0, 1 or 2"));
    }
    core_theorem_multisum(MultisumParams::new(m, n, l))
        .map(|inner| Poly { inner })
        .map_err(value_err)
}

/// The general-(a, K) multisum; equals the general product expansion.
#[pyfunction]
fn general_multisum(m: u32, n: u32, a: u32, big_k: u32) -> PyResult<Poly> {
    core_general_multisum(m, n, a, big_k).map(|inner| Poly { inner }).map_err(value_err)
}

/// Principal-specialization product side (variables z, q).
#[pyfunction]
fn kaneko_lhs(n_vars: u32, big_n: u32) -> Poly {
    Poly { inner: kaneko_product_lhs(n_vars, big_n) }
}

/// Principal-specialization sum side; equals `kaneko_lhs`.
#[pyfunction]
fn kaneko_rhs(n_vars: u32, big_n: u32) -> PyResult<Poly> {
    kaneko_sum_rhs(n_vars, big_n).map(|inner| Poly { inner }).map_err(value_err)
}

/// Violations of the sign pattern mod 2K+1, as a JSON string.
#[pyfunction]
fn check_pattern(f: &Poly, big_k: u32) -> String {
    let v: Vec<_> = core_check_pattern(&f.inner, big_k).iter().map(|x| x.to_json()).collect();
    serde_json::Value::Array(v).to_string()
}

/// Violations of the odd-modulus residue-class prediction, as JSON.
#[pyfunction]
fn check_iks_odd(f: &Poly, a: u32, big_k: u32) -> PyResult<String> {
    let v: Vec<_> = core_check_iks_odd(&f.inner, a, big_k)
        .map_err(value_err)?
        .iter()
        .map(|x| x.to_json())
        .collect();
    Ok(serde_json::Value::Array(v).to_string())
}

/// Violations of the even-modulus alternating-sign theorem, as JSON.
#[pyfunction]
fn check_iks_even(f: &Poly) -> String {
    let v: Vec<_> = core_check_iks_even(&f.inner).iter().map(|x| x.to_json()).collect();
    serde_json::Value::Array(v).to_string()
}

/// One row of the threshold table: least n from which each p^k slice keeps
/// the sign pattern through the ceiling; None where even the ceiling fails.
#[pyfunction]
#[pyo3(signature = (m, kmax, ceiling=25, big_k=1))]
fn threshold_row(m: u32, kmax: usize, ceiling: u32, big_k: u32) -> Vec<Option<u32>> {
    let product = if big_k == 1 { ThresholdProduct::Conj1 } else { ThresholdProduct::Conj3Diagonal };
    core_threshold_row(m, kmax, ceiling, big_k, product)
        .into_iter()
        .map(|r| r.n_threshold)
        .collect()
}

/// Run one identity verification; returns the full report as a JSON string
/// with a "status" field of "pass" or "fail".
#[pyfunction]
#[pyo3(signature = (identity, mode="exact", m=None, n=None, a=None, big_k=None, trials=20, prime=None, seed=1))]
#[allow(clippy::too_many_arguments)]
fn verify(
    identity: &str,
    mode: &str,
    m: Option<u32>,
    n: Option<u32>,
    a: Option<u32>,
    big_k: Option<u32>,
    trials: u32,
    prime: Option<u64>,
    seed: u64,
) -> PyResult<String> {
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| PyValueError::new_err(format!("{name} is required for this identity")))
    };
    let prime = prime.unwrap_or_else(default_prime);
    let report = match (identity, mode) {
        ("andrews", "exact") => verify_andrews_exact(need(n, "n")?),
        ("theorem", "exact") => verify_theorem_exact(need(m, "m")?, need(n, "n")?).map_err(value_err)?,
        ("theorem", "modular") => {
            verify_theorem_modular(need(m, "m")?, need(n, "n")?, trials, prime, seed).map_err(value_err)?
        }
        ("kaneko", "exact") => verify_lemma_exact(need(m, "m")?, need(n, "n")?).map_err(value_err)?,
        ("kaneko", "modular") => {
            verify_lemma_modular(need(m, "m")?, need(n, "n")?, trials, prime, seed).map_err(value_err)?
        }
        ("general", "exact") => {
            verify_general_exact(need(m, "m")?, need(n, "n")?, need(a, "a")?, need(big_k, "K")?)
                .map_err(value_err)?
        }
        ("general", "modular") => verify_general_modular(
            need(m, "m")?,
            need(n, "n")?,
            need(a, "a")?,
            need(big_k, "K")?,
            trials,
            prime,
            seed,
        )
        .map_err(value_err)?,
        (id, md) => {
            return Err(PyValueError::new_err(format!(
                "unknown identity/mode {id:?}/{md:?}"
            )))
        }
    };
    Ok(report.to_json().to_string())
}

/// Reproduce the two published counterexamples; JSON report.
#[pyfunction]
fn counterexamples() -> String {
    reproduce_counterexamples().to_json().to_string()
}

#[pymodule]
fn borwein_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_function(wrap_pyfunction!(expand_conj1, m)?)?;
    m.add_function(wrap_pyfunction!(expand_conj3, m)?)?;
    m.add_function(wrap_pyfunction!(expand_iks, m)?)?;
    m.add_function(wrap_pyfunction!(andrews_abc, m)?)?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(dissect, m)?)?;
    m.add_function(wrap_pyfunction!(tridissect, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_multisum, m)?)?;
    m.add_function(wrap_pyfunction!(general_multisum, m)?)?;
    m.add_function(wrap_pyfunction!(kaneko_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(kaneko_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(check_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(check_iks_odd, m)?)?;
    m.add_function(wrap_pyfunction!(check_iks_even, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_row, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(counterexamples, m)?)?;
    m.add("DEFAULT_PRIME", default_prime())?;
    Ok(())
}
