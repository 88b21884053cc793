//! Multilayer linear threshold diffusion.
//!
//! A node signals when the weighted fraction of its active neighbours in its
//! layer strictly exceeds `mu` (every neighbour weighs `1 / degree`). An
//! actor's input is the mean signal over the layers it is present in, and
//! the protocol turns that input into activation: `OR` needs at least
//! `1 / |L|`, `AND` needs all of the actor's layers. Updates are synchronous
//! and activation is irreversible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;
use crate::scalar::Threshold;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "OR", alias = "or")]
    Or,
    #[serde(rename = "AND", alias = "and")]
    And,
}

impl Protocol {
    pub const ALL: [Protocol; 2] = [Protocol::Or, Protocol::And];

    /// Protocol threshold for a network with `layer_count` layers.
    pub fn delta<T: Threshold>(self, layer_count: usize) -> T {
        match self {
            Protocol::Or => T::ratio(1, layer_count),
            Protocol::And => T::one(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Or => "OR",
            Protocol::And => "AND",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "or" => Ok(Protocol::Or),
            "and" => Ok(Protocol::And),
            _ => Err(Error::InvalidConfig(format!("unknown protocol `{s}`"))),
        }
    }
}

/// Activation rule: irreversible, and non-strict against the protocol threshold.
pub fn protocol_apply<T: Threshold>(
    actor_input: T,
    previously_active: bool,
    protocol: Protocol,
    layer_count: usize,
) -> bool {
    previously_active || actor_input >= protocol.delta(layer_count)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig<T = f64> {
    pub mu: T,
    pub protocol: Protocol,
    /// Step bound; `None` means twice the actor count.
    pub max_steps: Option<usize>,
}

impl<T: Threshold> SimulationConfig<T> {
    pub fn new(mu: T, protocol: Protocol) -> Result<Self> {
        let cfg = Self {
            mu,
            protocol,
            max_steps: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_steps(mut self, steps: usize) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu >= T::zero() && self.mu <= T::one()) {
            return Err(Error::InvalidConfig(format!("mu {:?} outside [0, 1]", self.mu)));
        }
        if self.max_steps == Some(0) {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn step_limit(&self, actor_count: usize) -> usize {
        self.max_steps.unwrap_or(2 * actor_count).max(1)
    }
}

/// Active actors after `step` synchronous updates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemState {
    pub active: Vec<bool>,
    pub step: usize,
}

impl SystemState {
    pub fn seeded(net: &MultilayerNetwork, seeds: &[usize]) -> Self {
        let mut active = vec![false; net.actor_count()];
        for &s in seeds {
            active[s] = true;
        }
        Self { active, step: 0 }
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn active_actors(&self) -> Vec<usize> {
        self.active
            .iter()
            .enumerate()
            .filter_map(|(a, &on)| on.then_some(a))
            .collect()
    }
}

/// Signal of the node of `actor` in `layer` against the current state.
pub fn node_signal<T: Threshold>(
    net: &MultilayerNetwork,
    state: &SystemState,
    actor: usize,
    layer: usize,
    mu: T,
) -> bool {
    let layer = net.layer(layer);
    let degree = layer.degree(actor);
    if degree == 0 {
        return false;
    }
    let active = layer.neighbours(actor).iter().filter(|&&u| state.active[u]).count();
    signals(active, degree, mu)
}

fn signals<T: Threshold>(active_neighbours: usize, degree: usize, mu: T) -> bool {
    degree > 0 && T::ratio(active_neighbours, degree) > mu
}

/// Mean node signal over the layers where the actor is present.
pub fn actor_input<T: Threshold>(net: &MultilayerNetwork, state: &SystemState, actor: usize, mu: T) -> T {
    let layers = net.layers_of(actor);
    let on = layers
        .iter()
        .filter(|&&l| node_signal(net, state, actor, l, mu))
        .count();
    T::ratio(on, layers.len())
}

/// One synchronous update evaluated from scratch on every actor.
pub fn step<T: Threshold>(net: &MultilayerNetwork, state: &SystemState, config: &SimulationConfig<T>) -> SystemState {
    let layer_count = net.layer_count();
    let active = (0..net.actor_count())
        .map(|a| {
            state.active[a]
                || protocol_apply(
                    actor_input(net, state, a, config.mu),
                    false,
                    config.protocol,
                    layer_count,
                )
        })
        .collect();
    SystemState {
        active,
        step: state.step + 1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionResult {
    /// Seed actors, ascending.
    pub seeds: Vec<usize>,
    /// Active actors at the steady state, ascending.
    pub final_active: Vec<usize>,
    pub actor_count: usize,
    pub gain: f64,
    pub diffusion_length: usize,
    /// Actors activated at steps `1..=diffusion_length`; the last entry is
    /// empty unless the run was truncated.
    pub trace: Vec<Vec<usize>>,
    pub truncated: bool,
}

impl DiffusionResult {
    /// Number of actors active at the end, seeds included.
    pub fn spread(&self) -> usize {
        self.final_active.len()
    }

    pub fn to_record(&self, net: &MultilayerNetwork) -> DiffusionRecord {
        let names = |ixs: &[usize]| ixs.iter().map(|&a| net.actor(a).to_string()).collect::<Vec<_>>();
        DiffusionRecord {
            seeds: names(&self.seeds),
            final_active: names(&self.final_active),
            gain: self.gain,
            diffusion_length: self.diffusion_length,
            trace: self.trace.iter().map(|s| names(s)).collect(),
            truncated: self.truncated,
        }
    }
}

/// Serialised form of a [`DiffusionResult`] with actor names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionRecord {
    pub seeds: Vec<String>,
    #[serde(rename = "final")]
    pub final_active: Vec<String>,
    pub gain: f64,
    pub diffusion_length: usize,
    pub trace: Vec<Vec<String>>,
    pub truncated: bool,
}

/// Percentage of initially inactive actors that ended up active.
pub fn gain(final_active: usize, seeds: usize, actors: usize) -> Result<f64> {
    if seeds >= actors {
        return Err(Error::DegenerateSeedSet { actors });
    }
    Ok(100.0 * (final_active - seeds) as f64 / (actors - seeds) as f64)
}

/// Runs the diffusion from `seeds` until a step changes nothing.
///
/// Only actors adjacent to the previous step's activations are re-evaluated;
/// everything else has unchanged inputs. The result is identical to iterating
/// [`step`] and is what the tests check it against.
pub fn simulate<T: Threshold>(
    net: &MultilayerNetwork,
    seeds: &[usize],
    config: &SimulationConfig<T>,
) -> Result<DiffusionResult> {
    config.validate()?;
    let n = net.actor_count();
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    if let Some(&bad) = seeds.iter().find(|&&s| s >= n) {
        return Err(Error::UnknownActor(format!("#{bad}")));
    }
    if seeds.len() == n {
        return Err(Error::DegenerateSeedSet { actors: n });
    }

    let layer_count = net.layer_count();
    let mut active = vec![false; n];
    let mut counts: Vec<Vec<usize>> = vec![vec![0; n]; layer_count];
    let mut stamp = vec![usize::MAX; n];
    let activate = |a: usize, counts: &mut Vec<Vec<usize>>| {
        for &l in net.layers_of(a) {
            for &b in net.layer(l).neighbours(a) {
                counts[l][b] += 1;
            }
        }
    };
    for &s in &seeds {
        active[s] = true;
        activate(s, &mut counts);
    }

    let limit = config.step_limit(n);
    let mut frontier = seeds.clone();
    let mut trace = Vec::new();
    let mut truncated = false;
    let mut t = 0;
    loop {
        t += 1;
        let mut candidates = Vec::new();
        for &a in &frontier {
            for &l in net.layers_of(a) {
                for &b in net.layer(l).neighbours(a) {
                    if !active[b] && stamp[b] != t {
                        stamp[b] = t;
                        candidates.push(b);
                    }
                }
            }
        }
        let mut newly: Vec<usize> = candidates
            .into_iter()
            .filter(|&c| {
                let layers = net.layers_of(c);
                let on = layers
                    .iter()
                    .filter(|&&l| signals(counts[l][c], net.layer(l).degree(c), config.mu))
                    .count();
                protocol_apply(T::ratio(on, layers.len()), false, config.protocol, layer_count)
            })
            .collect();
        newly.sort_unstable();
        for &a in &newly {
            active[a] = true;
            activate(a, &mut counts);
        }
        let settled = newly.is_empty();
        trace.push(newly.clone());
        if settled {
            break;
        }
        if t >= limit {
            truncated = true;
            break;
        }
        frontier = newly;
    }

    let final_active: Vec<usize> = (0..n).filter(|&a| active[a]).collect();
    let gain = gain(final_active.len(), seeds.len(), n)?;
    Ok(DiffusionResult {
        seeds,
        final_active,
        actor_count: n,
        gain,
        diffusion_length: t,
        trace,
        truncated,
    })
}

/// Runs the diffusion by repeatedly applying the full-sweep [`step`].
pub fn simulate_by_sweeps<T: Threshold>(
    net: &MultilayerNetwork,
    seeds: &[usize],
    config: &SimulationConfig<T>,
) -> Result<DiffusionResult> {
    config.validate()?;
    let n = net.actor_count();
    if let Some(&bad) = seeds.iter().find(|&&s| s >= n) {
        return Err(Error::UnknownActor(format!("#{bad}")));
    }
    let mut state = SystemState::seeded(net, seeds);
    let seeds = state.active_actors();
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    if seeds.len() == n {
        return Err(Error::DegenerateSeedSet { actors: n });
    }
    let limit = config.step_limit(n);
    let mut trace = Vec::new();
    let mut truncated = false;
    loop {
        let next = step(net, &state, config);
        let newly: Vec<usize> = (0..n).filter(|&a| next.active[a] && !state.active[a]).collect();
        let settled = newly.is_empty();
        trace.push(newly);
        state = next;
        if settled {
            break;
        }
        if state.step >= limit {
            truncated = true;
            break;
        }
    }
    let final_active = state.active_actors();
    let gain = gain(final_active.len(), seeds.len(), n)?;
    Ok(DiffusionResult {
        seeds,
        final_active,
        actor_count: n,
        gain,
        diffusion_length: state.step,
        trace,
        truncated,
    })
}
