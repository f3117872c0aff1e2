//! Python bindings for `monarith`.
//!
//! Words cross the boundary as dotted strings (`"x1.x2^2"`), tuples as
//! lists of ints, and every library error becomes a `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use monarith::check::{self, Assignment};
use monarith::coding::{self, SeqCode};
use monarith::formula::{classify, prenex};
use monarith::gadgets::{self, Gens};
use monarith::interp;

fn err(e: monarith::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A free, trace or Baumslag-Solitar monoid given by a spec string such as
/// `"free:x1,x2"`, `"trace:a,b,c;edges=a-c"` or `"bs:3,4"`.
#[pyclass(name = "Monoid", frozen)]
struct PyMonoid {
    model: monarith::MonoidModel,
}

impl PyMonoid {
    fn assignment(&self, values: Option<Vec<(String, String)>>) -> PyResult<Assignment> {
        values
            .unwrap_or_default()
            .into_iter()
            .map(|(k, v)| Ok((k, self.model.word(&v).map_err(err)?)))
            .collect()
    }
}

#[pymethods]
impl PyMonoid {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self {
            model: monarith::MonoidModel::parse_spec(spec).map_err(err)?,
        })
    }

    fn generators(&self) -> Vec<String> {
        self.model.alphabet().names().to_vec()
    }

    fn normal_form(&self, word: &str) -> PyResult<String> {
        let w = self.model.word(word).map_err(err)?;
        Ok(self.model.normal_form(&w).map_err(err)?.to_string())
    }

    fn equal(&self, u: &str, v: &str) -> PyResult<bool> {
        let (u, v) = (
            self.model.word(u).map_err(err)?,
            self.model.word(v).map_err(err)?,
        );
        self.model.equal(&u, &v).map_err(err)
    }

    fn is_irreducible(&self, word: &str) -> PyResult<bool> {
        let w = self.model.word(word).map_err(err)?;
        self.model.is_irreducible(&w).map_err(err)
    }

    /// Bounded truth of `formula` with free variables set by `values`,
    /// a list of `(name, word)` pairs.
    #[pyo3(signature = (formula, bound, values=None))]
    fn eval(
        &self,
        formula: &Formula,
        bound: usize,
        values: Option<Vec<(String, String)>>,
    ) -> PyResult<bool> {
        check::eval(
            &self.model,
            &formula.inner,
            &self.assignment(values)?,
            bound,
        )
        .map_err(err)
    }

    /// All assignments to `vars` (each of length at most `bound`) that
    /// satisfy `formula`, in shortlex order.
    fn solutions(
        &self,
        formula: &Formula,
        vars: Vec<String>,
        bound: usize,
    ) -> PyResult<Vec<Vec<String>>> {
        let sols = check::solutions(&self.model, &formula.inner, &vars, check::Bound::new(bound))
            .map_err(err)?;
        Ok(sols
            .into_iter()
            .map(|t| t.iter().map(ToString::to_string).collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Monoid('{}')", self.model)
    }
}

#[pyclass(frozen)]
struct Formula {
    inner: monarith::Formula,
}

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: monarith::parse(text).map_err(err)?,
        })
    }

    fn prenex(&self) -> Formula {
        Formula {
            inner: prenex(&self.inner),
        }
    }

    /// `"QF"`, `"Sigma<n>"` or `"Pi<n>"`.
    fn level(&self) -> String {
        classify(&self.inner).to_string()
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", self.inner)
    }
}

/// A catalogue gadget as a dict with `word`, `witness_bound`, `level`,
/// `vars` and `formula` (the last two may be `None`).
#[pyfunction]
#[pyo3(signature = (name, params, monoid="free:x1,x2"))]
fn gadget(py: Python<'_>, name: &str, params: Vec<String>, monoid: &str) -> PyResult<Py<PyAny>> {
    let model = monarith::MonoidModel::parse_spec(monoid).map_err(err)?;
    let names = model.alphabet().names();
    if names.len() < 2 {
        return Err(PyValueError::new_err(
            "gadgets need at least two generators",
        ));
    }
    let g = Gens::new(model.alphabet().clone(), &names[0], &names[1]).map_err(err)?;
    let inst = gadgets::instance(&g, name, &params).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("word", inst.word.as_ref().map(ToString::to_string))?;
    d.set_item("witness_bound", inst.witness_bound)?;
    d.set_item("level", inst.level().map(|l| l.to_string()))?;
    d.set_item("vars", inst.vars.clone())?;
    d.set_item("formula", inst.formula.map(|f| Formula { inner: f }))?;
    Ok(d.into_any().unbind())
}

/// Translates `formula` along a named interpretation and returns the
/// target formula with the level before and after.
#[pyfunction]
#[pyo3(signature = (interpretation, formula, monoid="free:x1,x2"))]
fn translate(
    interpretation: &str,
    formula: &Formula,
    monoid: &str,
) -> PyResult<(Formula, String, String)> {
    let model = monarith::MonoidModel::parse_spec(monoid).map_err(err)?;
    let i = interp::bundle(interpretation, &model).map_err(err)?;
    let out = interp::translate(&formula.inner, &i).map_err(err)?;
    let before = classify(&prenex(&formula.inner)).to_string();
    let after = classify(&prenex(&out)).to_string();
    Ok((Formula { inner: out }, before, after))
}

/// Least factorization of `word` over `gens` as generator indices, or
/// `None` when `word` is not in the submonoid.
#[pyfunction]
#[pyo3(signature = (word, gens, monoid="free:x1,x2"))]
fn member(word: &str, gens: Vec<String>, monoid: &str) -> PyResult<Option<Vec<usize>>> {
    let model = monarith::MonoidModel::parse_spec(monoid).map_err(err)?;
    let w = model.word(word).map_err(err)?;
    let gs = gens
        .iter()
        .map(|h| model.word(h))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(coding::submonoid_member(&w, &gs).map_err(err)?.witness)
}

#[pyfunction]
fn pair(a: u128, b: u128) -> PyResult<u128> {
    coding::pair(a, b).map_err(err)
}

#[pyfunction]
fn unpair(p: u128) -> (u128, u128) {
    coding::unpair(p)
}

#[pyfunction]
fn encode_tuple(t: Vec<u128>) -> PyResult<u128> {
    Ok(coding::encode_tuple(&t).map_err(err)?.0)
}

#[pyfunction]
fn decode_tuple(code: u128) -> PyResult<Vec<u128>> {
    coding::decode_tuple(SeqCode(code)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (word, monoid="free:x1,x2"))]
fn word_code(word: &str, monoid: &str) -> PyResult<u128> {
    let model = monarith::MonoidModel::parse_spec(monoid).map_err(err)?;
    Ok(coding::word_code(&model.word(word).map_err(err)?)
        .map_err(err)?
        .0)
}

/// Runs the command line with `args` (without the program name) and
/// returns the exit code and output.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    monarith::cli::run(std::iter::once("monarith".to_string()).chain(args))
}

#[pymodule]
fn monarith_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMonoid>()?;
    m.add_class::<Formula>()?;
    m.add_function(wrap_pyfunction!(gadget, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(unpair, m)?)?;
    m.add_function(wrap_pyfunction!(encode_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(decode_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(word_code, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
