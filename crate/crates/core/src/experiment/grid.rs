use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diffusion::Protocol;
use crate::error::{Error, Result};
use crate::seeding::Method;

/// Grid specification as read from JSON. Every field is optional and
/// defaults to the study's parameter table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub mu_values: Vec<f64>,
    pub budgets_or: Vec<f64>,
    pub budgets_and: Vec<f64>,
    pub protocols: Vec<Protocol>,
    pub methods: Vec<Method>,
    /// Network names; empty means every network handed to the runner.
    pub networks: Vec<String>,
    pub random_repetitions: usize,
    pub rng_seed: u64,
    pub katz_alpha: f64,
    pub damping: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            mu_values: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            budgets_or: vec![
                1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 15.0, 20.0, 25.0, 30.0,
            ],
            budgets_and: vec![
                15.0, 20.0, 25.0, 30.0, 31.0, 32.0, 33.0, 34.0, 35.0, 36.0, 37.0, 38.0, 39.0, 40.0,
            ],
            protocols: Protocol::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            networks: Vec::new(),
            random_repetitions: 20,
            rng_seed: crate::DEFAULT_SEED,
            katz_alpha: 0.1,
            damping: 0.85,
        }
    }
}

impl GridSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::GridConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn budgets(&self, protocol: Protocol) -> &[f64] {
        match protocol {
            Protocol::Or => &self.budgets_or,
            Protocol::And => &self.budgets_and,
        }
    }

    pub fn repetitions(&self, method: Method) -> usize {
        if method == Method::Random {
            self.random_repetitions
        } else {
            1
        }
    }
}

/// One simulation to run.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub network: String,
    pub method: Method,
    pub protocol: Protocol,
    pub mu: f64,
    pub s: f64,
    pub repetition: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterGrid {
    pub spec: GridSpec,
    pub cells: Vec<Cell>,
}

impl ParameterGrid {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Expands the spec over `networks` (used when the spec names none).
pub fn build_grid(spec: &GridSpec, networks: &[String]) -> Result<ParameterGrid> {
    let mut spec = spec.clone();
    if spec.networks.is_empty() {
        spec.networks = networks.to_vec();
    }
    let empty = [
        ("mu_values", spec.mu_values.is_empty()),
        ("protocols", spec.protocols.is_empty()),
        ("methods", spec.methods.is_empty()),
        ("networks", spec.networks.is_empty()),
    ];
    if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
        return Err(Error::GridConfig(format!("`{name}` is empty")));
    }
    for &p in &spec.protocols {
        if spec.budgets(p).is_empty() {
            return Err(Error::GridConfig(format!("no budgets for protocol {p}")));
        }
    }
    if let Some(mu) = spec.mu_values.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::GridConfig(format!("mu {mu} outside [0, 1]")));
    }
    let budgets = spec.budgets_or.iter().chain(&spec.budgets_and);
    if let Some(s) = budgets.into_iter().find(|&&s| !(s > 0.0 && s < 100.0)) {
        return Err(Error::GridConfig(format!("budget {s}% must lie in (0, 100)")));
    }
    if spec.random_repetitions == 0 && spec.methods.contains(&Method::Random) {
        return Err(Error::GridConfig("random_repetitions must be at least 1".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = spec.networks.iter().find(|n| !seen.insert(n.as_str())) {
        return Err(Error::GridConfig(format!("network `{dup}` listed twice")));
    }

    let mut cells = Vec::new();
    for network in &spec.networks {
        for &method in &spec.methods {
            for &protocol in &spec.protocols {
                for &mu in &spec.mu_values {
                    for &s in spec.budgets(protocol) {
                        for repetition in 0..spec.repetitions(method) {
                            cells.push(Cell {
                                network: network.clone(),
                                method,
                                protocol,
                                mu,
                                s,
                                repetition,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(ParameterGrid { spec, cells })
}
