//! Python bindings. Structured results are returned as JSON strings.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use mgcat::cmg::cmg_derive;
use mgcat::lexicon::{parse_term_file, Grammar as CoreGrammar, LexiconError};
use mgcat::mg::mg_derive;
use mgcat::semantics::{analyze, internalize, reduction_graph, LmuTerm};
use mgcat::translate::check_equivalence;

const DEFAULT_BOUND: usize = 10_000;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// A lexicon file: `[mg]`, `[cmg]` and `[semantics]` sections.
#[pyclass(frozen)]
struct Grammar {
    inner: CoreGrammar,
}

#[pymethods]
impl Grammar {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        match CoreGrammar::load(path) {
            Ok(inner) => Ok(Grammar { inner }),
            Err(e @ LexiconError::Io { .. }) => Err(PyIOError::new_err(e.to_string())),
            Err(e) => Err(value_err(e)),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CoreGrammar::parse(text).map(|inner| Grammar { inner }).map_err(value_err)
    }

    /// The lexicon translated to the given formalism (`"mg"` or `"cmg"`).
    fn translate(&self, to: &str) -> PyResult<String> {
        match to {
            "mg" => self.inner.render_mg(),
            "cmg" => self.inner.render_cmg(),
            other => return Err(value_err(format!("unknown target `{other}`"))),
        }
        .map_err(value_err)
    }

    /// JSON list of analyses: derivation, raw and internalized terms, readings.
    #[pyo3(signature = (sentence, max_steps = DEFAULT_BOUND))]
    fn analyze(&self, sentence: &str, max_steps: usize) -> PyResult<String> {
        let sem = self.inner.sem.as_ref().ok_or_else(|| value_err("the lexicon has no [semantics] section"))?;
        let cmg = self.inner.cmg().map_err(value_err)?;
        let analyses = analyze(&cmg, sem, &words(sentence), max_steps).map_err(value_err)?;
        let v: Vec<serde_json::Value> = analyses.iter().map(|a| a.to_json()).collect();
        Ok(serde_json::Value::from(v).to_string())
    }

    /// First-order renderings of every reading of every derivation.
    #[pyo3(signature = (sentence, max_steps = DEFAULT_BOUND))]
    fn readings(&self, sentence: &str, max_steps: usize) -> PyResult<Vec<String>> {
        let sem = self.inner.sem.as_ref().ok_or_else(|| value_err("the lexicon has no [semantics] section"))?;
        let cmg = self.inner.cmg().map_err(value_err)?;
        let analyses = analyze(&cmg, sem, &words(sentence), max_steps).map_err(value_err)?;
        Ok(analyses.iter().flat_map(|a| a.readings.iter().map(|r| r.fol.clone())).collect())
    }

    /// JSON list of derivations in the chosen engine (`"cmg"` or `"mg"`).
    #[pyo3(signature = (sentence, engine = "cmg", max_steps = DEFAULT_BOUND))]
    fn derive(&self, sentence: &str, engine: &str, max_steps: usize) -> PyResult<String> {
        let ws = words(sentence);
        let v = match engine {
            "cmg" => {
                let ds = cmg_derive(&self.inner.cmg().map_err(value_err)?, &ws, max_steps).map_err(value_err)?;
                serde_json::Value::from(ds.iter().map(|d| d.to_json()).collect::<Vec<_>>())
            }
            "mg" => {
                let ds = mg_derive(&self.inner.mg().map_err(value_err)?, &ws, max_steps).map_err(value_err)?;
                serde_json::to_value(ds).map_err(value_err)?
            }
            other => return Err(value_err(format!("unknown engine `{other}`"))),
        };
        Ok(v.to_string())
    }

    /// JSON report of strings generated by one engine only.
    #[pyo3(signature = (max_words = 6, max_steps = DEFAULT_BOUND))]
    fn check_equiv(&self, max_words: usize, max_steps: usize) -> PyResult<String> {
        let mg = self.inner.mg().map_err(value_err)?;
        let cmg = self.inner.cmg().map_err(value_err)?;
        serde_json::to_string(&check_equivalence(&mg, &cmg, max_words, max_steps)).map_err(value_err)
    }
}

/// A λμ-DRS term read from a term file (`#pred` headers and one term).
#[pyclass(frozen)]
struct Term {
    inner: LmuTerm,
}

#[pymethods]
impl Term {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_term_file(text).map(|inner| Term { inner }).map_err(value_err)
    }

    fn internalize(&self) -> PyResult<Term> {
        internalize(&self.inner).map(|inner| Term { inner }).map_err(value_err)
    }

    /// Normal forms of the internalized term.
    #[pyo3(signature = (max_steps = DEFAULT_BOUND))]
    fn normal_forms(&self, max_steps: usize) -> PyResult<Vec<String>> {
        let t = internalize(&self.inner).map_err(value_err)?;
        let g = reduction_graph(&t, max_steps).map_err(value_err)?;
        Ok(g.normal.iter().map(|i| g.nodes[*i].to_string()).collect())
    }

    fn type_of(&self) -> PyResult<String> {
        self.inner.typecheck().map(|t| t.to_string()).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({})", self.inner)
    }
}

#[pymodule]
fn pymgcat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Grammar>()?;
    m.add_class::<Term>()?;
    Ok(())
}
