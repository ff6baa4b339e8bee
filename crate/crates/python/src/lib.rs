//! Python bindings: expose network parsing, the structural homeostasis
//! verdict, the associated-network transform, DSR/injectivity reports and
//! numeric sweeps. Structured results are returned as JSON strings so the
//! Python side can `json.loads` them without bespoke conversion code.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use crn_core::dsr::{self, DsrOptions};
use crn_core::homeostasis;
use crn_core::injectivity;
use crn_core::massaction;
use crn_core::model::ReactionNetwork;
use crn_core::numeric;
use crn_core::parser;
use crn_core::CrnError;

fn err(e: CrnError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn rate_overrides(rates: Option<HashMap<String, f64>>) -> Vec<(String, f64)> {
    let mut v: Vec<(String, f64)> = rates.unwrap_or_default().into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// A mass-action reaction network with designated input and output species.
#[pyclass(frozen)]
struct Network {
    inner: ReactionNetwork,
}

#[pymethods]
impl Network {
    /// Parse the text format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Network {
            inner: parser::parse_network(text).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(species={}, reactions={}, input='{}', output='{}')",
            self.inner.n_species(),
            self.inner.n_reactions(),
            self.inner.species()[self.inner.input_species()].name,
            self.inner.species()[self.inner.output_species()].name,
        )
    }

    #[getter]
    fn n_species(&self) -> usize {
        self.inner.n_species()
    }

    #[getter]
    fn n_reactions(&self) -> usize {
        self.inner.n_reactions()
    }

    fn species(&self) -> Vec<String> {
        self.inner
            .species()
            .iter()
            .map(|s| s.name.clone())
            .collect()
    }

    /// Canonical text form; parsing it back reproduces this network.
    fn format(&self) -> String {
        parser::format_network(&self.inner)
    }

    /// Copy with different input/output species (by name).
    fn with_io(&self, input: &str, output: &str) -> PyResult<Network> {
        let i = self
            .inner
            .species_index(input)
            .ok_or_else(|| PyValueError::new_err(format!("unknown species `{input}`")))?;
        let o = self
            .inner
            .species_index(output)
            .ok_or_else(|| PyValueError::new_err(format!("unknown species `{output}`")))?;
        Ok(Network {
            inner: self.inner.with_io(i, o).map_err(err)?,
        })
    }

    /// Rows are species, columns reactions; entry = target - source.
    fn stoichiometric_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.stoichiometric_matrix()
    }

    /// Exact rank of the stoichiometric matrix over the rationals.
    fn stoich_rank(&self) -> usize {
        self.inner.stoich_subspace_dim()
    }

    /// The mass-action differential equations, one string per species.
    fn odes(&self) -> Vec<String> {
        let field = massaction::build_rhs(&self.inner, true);
        let names: Vec<&str> = self
            .inner
            .species()
            .iter()
            .map(|s| s.name.as_str())
            .collect();
        let mut rate_names: Vec<&str> = self
            .inner
            .reactions()
            .iter()
            .map(|r| r.rate.name.as_str())
            .collect();
        if matches!(field.input_form, massaction::InputForm::Additive { .. }) {
            rate_names.push("zeta");
        }
        field
            .components
            .iter()
            .enumerate()
            .map(|(i, p)| format!("d{}/dt = {}", names[i], p.display_with(&names, &rate_names)))
            .collect()
    }

    /// The homeostasis-associated network.
    fn transform(&self) -> PyResult<Network> {
        Ok(Network {
            inner: homeostasis::associated_network(&self.inner)
                .map_err(err)?
                .network,
        })
    }

    /// Structural verdict: one of NO_INFINITESIMAL_HOMEOSTASIS,
    /// PERFECT_HOMEOSTASIS or UNDETERMINED.
    fn verdict(&self) -> PyResult<String> {
        let v = homeostasis::structural_verdict(&self.inner, DsrOptions::default()).map_err(err)?;
        Ok(match v.kind {
            homeostasis::VerdictKind::NoInfinitesimalHomeostasis => {
                "NO_INFINITESIMAL_HOMEOSTASIS".to_string()
            }
            homeostasis::VerdictKind::PerfectHomeostasis => "PERFECT_HOMEOSTASIS".to_string(),
            homeostasis::VerdictKind::Undetermined => "UNDETERMINED".to_string(),
        })
    }

    /// Full structural verdict with evidence, as JSON.
    fn analyze_json(&self) -> PyResult<String> {
        let v = homeostasis::structural_verdict(&self.inner, DsrOptions::default()).map_err(err)?;
        to_json(&v)
    }

    /// Exact injectivity report for this network, as JSON.
    fn injectivity_json(&self) -> PyResult<String> {
        let report = injectivity::injectivity_verdict(&self.inner, injectivity::DEFAULT_SUBSET_CAP)
            .map_err(err)?;
        to_json(&report)
    }

    /// DSR criterion report for this network, as JSON.
    #[pyo3(signature = (split_reversible=false))]
    fn dsr_json(&self, split_reversible: bool) -> PyResult<String> {
        let report = dsr::dsr_criterion(
            &self.inner,
            DsrOptions {
                split_reversible,
                ..DsrOptions::default()
            },
        )
        .map_err(err)?;
        to_json(&report)
    }

    /// Equilibria at one value of the input parameter, as JSON.
    #[pyo3(signature = (zeta, rates=None, default_rate=1.0, attempts=64, seed=1))]
    fn find_equilibria_json(
        &self,
        zeta: f64,
        rates: Option<HashMap<String, f64>>,
        default_rate: f64,
        attempts: usize,
        seed: u64,
    ) -> PyResult<String> {
        let overrides = rate_overrides(rates);
        let eqs = numeric::find_equilibria(
            &self.inner,
            &overrides,
            Some(default_rate),
            zeta,
            attempts,
            seed,
        )
        .map_err(err)?;
        to_json(&eqs)
    }

    /// Branch sweep plus located homeostasis points, as JSON with keys
    /// `samples`, `gaps`, `breaks`, `points`, `diagnostics`.
    #[pyo3(signature = (zeta_lo, zeta_hi, steps, rates=None, default_rate=1.0, seed=1))]
    fn sweep_json(
        &self,
        zeta_lo: f64,
        zeta_hi: f64,
        steps: usize,
        rates: Option<HashMap<String, f64>>,
        default_rate: f64,
        seed: u64,
    ) -> PyResult<String> {
        let overrides = rate_overrides(rates);
        let sweep = numeric::branch_sweep(
            &self.inner,
            &overrides,
            Some(default_rate),
            zeta_lo,
            zeta_hi,
            steps,
            numeric::SweepOptions { attempts: 64, seed },
        )
        .map_err(err)?;
        let (points, diagnostics) =
            numeric::locate_homeostasis_points(&self.inner, &overrides, Some(default_rate), &sweep)
                .map_err(err)?;
        #[derive(serde::Serialize)]
        struct SweepOut {
            samples: Vec<numeric::BranchSample>,
            gaps: Vec<numeric::BranchGap>,
            breaks: Vec<numeric::BranchGap>,
            points: Vec<numeric::HomeostasisPoint>,
            diagnostics: Vec<String>,
        }
        to_json(&SweepOut {
            samples: sweep.samples,
            gaps: sweep.gaps,
            breaks: sweep.breaks,
            points,
            diagnostics,
        })
    }
}

/// Parse a network from its text form.
#[pyfunction]
fn parse(text: &str) -> PyResult<Network> {
    Network::new(text)
}

/// Read and parse a network file.
#[pyfunction]
fn load(path: &str) -> PyResult<Network> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PyValueError::new_err(format!("reading {path}: {e}")))?;
    Network::new(&text)
}

#[pymodule]
fn crnpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    Ok(())
}
