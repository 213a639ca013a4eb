//! Python bindings: `import stitkit`.

use pyo3::create_exception;
use pyo3::exceptions::{PyTimeoutError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use stitkit::bridge;
use stitkit::btac::{self, BtacModel as CoreBtac};
use stitkit::logic::{self, AxiomSchema, FrameClass, FuzzConfig, SearchBounds, SearchOutcome};
use stitkit::mc;
use stitkit::morphism;
use stitkit::nbhd::NbhdModel as CoreNbhd;
use stitkit::syntax;
use stitkit::{AgentId, CheckReport, Error};

create_exception!(stitkit, StitError, PyValueError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Timeout { .. } => PyTimeoutError::new_err(e.to_string()),
        other => StitError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
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
            for (k, v) in map {
                dict.set_item(k, to_py(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(r).map_err(|e| StitError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn agent(name: &str) -> PyResult<AgentId> {
    AgentId::new(name).map_err(err)
}

/// A formula of the strategic or classical language.
#[pyclass(module = "stitkit", name = "Formula", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Formula(syntax::Formula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        syntax::parse(text).map(Formula).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.to_string())
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    fn normalize(&self) -> Formula {
        Formula(self.0.normalize())
    }

    /// The classical translation.
    fn translate(&self) -> PyResult<Formula> {
        syntax::translate_tr(&self.0).map(Formula).map_err(err)
    }

    fn vars(&self) -> Vec<String> {
        self.0.vars().into_iter().collect()
    }

    fn agents(&self) -> Vec<String> {
        self.0.agents().into_iter().map(|a| a.to_string()).collect()
    }

    fn modal_depth(&self) -> usize {
        self.0.modal_depth()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn is_strategic(&self) -> bool {
        self.0.is_osstit_pure()
    }

    fn is_classical(&self) -> bool {
        self.0.is_cstit_pure()
    }
}

fn formula_arg(obj: &Bound<'_, PyAny>) -> PyResult<syntax::Formula> {
    if let Ok(f) = obj.cast::<Formula>() {
        return Ok(f.get().0.clone());
    }
    let text: String = obj.extract()?;
    syntax::parse(&text).map_err(err)
}

#[pyfunction]
fn parse(text: &str) -> PyResult<Formula> {
    Formula::new(text)
}

#[pyfunction]
fn render(f: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(formula_arg(f)?.to_string())
}

/// Axiom schema instance, e.g. `instantiate("Ind", ["p", "q"], ["a", "b"])`.
#[pyfunction]
fn instantiate(schema: &str, formulas: Vec<Bound<'_, PyAny>>, agents: Vec<String>) -> PyResult<Formula> {
    let schema: AxiomSchema = schema.parse().map_err(err)?;
    let fs = formulas.iter().map(formula_arg).collect::<PyResult<Vec<_>>>()?;
    let ags = agents.iter().map(|a| agent(a)).collect::<PyResult<Vec<_>>>()?;
    logic::instantiate(schema, &fs, &ags).map(Formula).map_err(err)
}

/// A neighbourhood model read from the JSON model file format.
#[pyclass(module = "stitkit", name = "NbhdModel", frozen)]
struct NbhdModel(CoreNbhd);

#[pymethods]
impl NbhdModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreNbhd::from_json_str(text).map(NbhdModel).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.0.frame.states().names().to_vec()
    }

    #[getter]
    fn agents(&self) -> Vec<String> {
        self.0.frame.agents().iter().map(|a| a.to_string()).collect()
    }

    fn eval(&self, state: &str, formula: &Bound<'_, PyAny>) -> PyResult<bool> {
        mc::eval(&self.0, state, &formula_arg(formula)?).map_err(err)
    }

    fn extension(&self, formula: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
        let ext = mc::extension(&self.0, &formula_arg(formula)?).map_err(err)?;
        Ok(self.0.frame.states().names_of(ext))
    }

    fn is_class_c<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &self.0.frame.is_class_c())
    }

    fn is_class_p<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &self.0.frame.is_class_p())
    }

    /// One of `"ind"`, `"nec"`, `"un"`, `"partition"`.
    fn check<'py>(&self, py: Python<'py>, condition: &str) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.0.frame;
        let r = match condition {
            "ind" => f.check_ind(),
            "nec" => f.check_nec(),
            "un" => f.check_un(),
            "partition" => f.check_partition_cores(),
            other => return Err(StitError::new_err(format!("unknown condition `{other}`"))),
        };
        report(py, &r)
    }
}

/// A BT+AC model read from the JSON BT model format.
#[pyclass(module = "stitkit", name = "BtacModel", frozen)]
struct BtacModel(CoreBtac);

#[pymethods]
impl BtacModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreBtac::from_json_str(text).map(BtacModel).map_err(err)
    }

    /// Index names `m/h`.
    #[getter]
    fn indices(&self) -> Vec<String> {
        self.0.indices().into_iter().map(|i| self.0.index_name(i)).collect()
    }

    fn eval(&self, index: &str, formula: &Bound<'_, PyAny>) -> PyResult<bool> {
        let idx = self.0.parse_index(index).map_err(err)?;
        btac::eval_cstit(&self.0, idx, &formula_arg(formula)?).map_err(err)
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &btac::validate_btac(&self.0))
    }

    /// The one-shot model at a moment.
    fn moment_model(&self, moment: &str) -> PyResult<NbhdModel> {
        bridge::bt_to_osstit(&self.0, moment).map(NbhdModel).map_err(err)
    }

    fn translation_check<'py>(&self, py: Python<'py>, formula: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let r = bridge::check_translation_equiv(&self.0, &formula_arg(formula)?).map_err(err)?;
        report(py, &r)
    }
}

#[pyfunction]
#[pyo3(signature = (formula, max_states = 3, agents = 2, atoms = 3, max_seconds = 120.0))]
fn validity_search<'py>(
    py: Python<'py>,
    formula: &Bound<'_, PyAny>,
    max_states: usize,
    agents: usize,
    atoms: usize,
    max_seconds: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let f = formula_arg(formula)?;
    let bounds = SearchBounds {
        max_states,
        agent_count: agents,
        atom_count: atoms,
        max_seconds,
    };
    let r = py.detach(|| logic::validity_search(&f, &bounds)).map_err(err)?;
    let mut value = serde_json::json!({
        "statesExplored": r.states_explored,
        "modelsExplored": r.models_explored,
    });
    match r.outcome {
        SearchOutcome::ValidUpToBound => value["verdict"] = "valid-up-to-bound".into(),
        SearchOutcome::Countermodel(c) => {
            value["verdict"] = "countermodel".into();
            value["witness"] = c.to_json();
        }
    }
    to_py(py, &value)
}

#[pyfunction]
#[pyo3(signature = (models = 500, seed = 0, max_states = 5, agents = 3, atoms = 3, schemas = "all", monotone = false))]
#[allow(clippy::too_many_arguments)]
fn soundness_fuzz<'py>(
    py: Python<'py>,
    models: usize,
    seed: u64,
    max_states: usize,
    agents: usize,
    atoms: usize,
    schemas: &str,
    monotone: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let config = FuzzConfig {
        models,
        seed,
        max_states,
        max_agents: agents,
        max_atoms: atoms,
        schemas: logic::parse_schema_list(schemas).map_err(err)?,
        frame_class: if monotone { FrameClass::Monotone } else { FrameClass::ClassC },
        ..FuzzConfig::default()
    };
    let out = py.detach(|| logic::soundness_fuzz(&config)).map_err(err)?;
    let mut value = serde_json::json!({
        "verdict": if out.report.holds { "no-counterexample" } else { "counterexample" },
        "statesExplored": out.stats.states_explored,
        "models": out.stats.models,
        "instances": out.stats.instances,
    });
    if let Some(c) = out.counterexample {
        value["witness"] = c.to_json();
    }
    to_py(py, &value)
}

/// Checks the facts about the two fixture frames and the map between them.
#[pyfunction]
fn fixture_check<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    let (f1, f2, f) = morphism::fixture_theorem3();
    let surjective = if morphism::is_surjective(&f) {
        CheckReport::pass("surjective")
    } else {
        CheckReport::fail("surjective", stitkit::Witness::detail("map misses a target state"))
    };
    let f2_overlap = {
        let r = f2.check_partition_cores();
        if r.holds {
            CheckReport::fail("F2 overlapping cores", stitkit::Witness::detail("F2 cores are partitions"))
        } else {
            CheckReport::pass("F2 overlapping cores")
        }
    };
    let r = CheckReport::all(
        "fixture",
        [
            CheckReport { label: "F1 partition cores".into(), ..f1.check_partition_cores() },
            f2_overlap,
            surjective,
            morphism::is_bounded_core_morphism(&f),
        ],
    );
    report(py, &r)
}

#[pymodule]
#[pyo3(name = "stitkit")]
fn stitkit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<NbhdModel>()?;
    m.add_class::<BtacModel>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(instantiate, m)?)?;
    m.add_function(wrap_pyfunction!(validity_search, m)?)?;
    m.add_function(wrap_pyfunction!(soundness_fuzz, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_check, m)?)?;
    m.add("StitError", m.py().get_type::<StitError>())?;
    Ok(())
}
