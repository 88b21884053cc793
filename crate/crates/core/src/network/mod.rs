//! Multilayer network data model.
//!
//! A network is a set of actors, an ordered list of layers and, per layer, an
//! undirected simple graph over the actors present in it. Actors and layers
//! are kept in lexicographic order of their identifiers and addressed by
//! dense indices; index order is therefore also the universal tie-break order
//! used by the ranking methods.

mod flatten;
mod io;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use flatten::FlattenedGraph;
pub use io::{load_network, read_network, save_network, write_network, LoadReport, NetworkFormat};

macro_rules! string_id {
    ($name:ident, $what:literal) => {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Result<Self> {
                let id = id.into();
                if id.is_empty() || id.chars().any(char::is_whitespace) {
                    return Err(Error::Format(format!(
                        concat!($what, " id `{}` must be non-empty and contain no whitespace"),
                        id
                    )));
                }
                Ok(Self(id))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(ActorId, "actor");
string_id!(LayerId, "layer");

/// How far [`MultilayerNetwork::neighbourhood`] reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hops {
    One,
    Two,
}

/// Basic size parameters of a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkStats {
    pub layer_count: usize,
    pub actor_count: usize,
    pub node_count: usize,
    pub edge_count: usize,
}

impl fmt::Display for NetworkStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.layer_count, self.actor_count, self.node_count, self.edge_count
        )
    }
}

/// One layer: presence flags and sorted adjacency lists indexed by actor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    id: LayerId,
    present: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    node_count: usize,
    edge_count: usize,
}

impl Layer {
    pub fn id(&self) -> &LayerId {
        &self.id
    }

    pub fn contains(&self, actor: usize) -> bool {
        self.present[actor]
    }

    /// Degree of the actor's node in this layer, 0 when absent.
    pub fn degree(&self, actor: usize) -> usize {
        self.adjacency[actor].len()
    }

    pub fn neighbours(&self, actor: usize) -> &[usize] {
        &self.adjacency[actor]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Actors with a node in this layer, ascending.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.present.iter().enumerate().filter_map(|(a, &p)| p.then_some(a))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn mean_degree(&self) -> f64 {
        if self.node_count == 0 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.node_count as f64
        }
    }
}

/// Immutable multilayer network. Construct with [`NetworkBuilder`] or
/// [`load_network`].
#[derive(Clone, Debug)]
pub struct MultilayerNetwork {
    actors: Vec<ActorId>,
    index: HashMap<ActorId, usize>,
    layers: Vec<Layer>,
    presence: Vec<Vec<usize>>,
}

impl PartialEq for MultilayerNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.actors == other.actors && self.layers == other.layers
    }
}

impl Eq for MultilayerNetwork {}

impl MultilayerNetwork {
    pub fn actor_count(&self) -> usize {
        self.actors.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn actors(&self) -> &[ActorId] {
        &self.actors
    }

    pub fn actor(&self, ix: usize) -> &ActorId {
        &self.actors[ix]
    }

    pub fn actor_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownActor(id.to_owned()))
    }

    /// Resolves a list of actor names to indices, rejecting unknown names.
    pub fn actor_indices<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|id| self.actor_index(id.as_ref())).collect()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, ix: usize) -> &Layer {
        &self.layers[ix]
    }

    pub fn layer_index(&self, id: &str) -> Result<usize> {
        self.layers
            .iter()
            .position(|l| l.id.as_str() == id)
            .ok_or_else(|| Error::UnknownLayer(id.to_owned()))
    }

    /// Layer indices where the actor has a node; never empty.
    pub fn layers_of(&self, actor: usize) -> &[usize] {
        &self.presence[actor]
    }

    pub fn actor_layers(&self, id: &str) -> Result<BTreeSet<LayerId>> {
        let a = self.actor_index(id)?;
        Ok(self.presence[a].iter().map(|&l| self.layers[l].id.clone()).collect())
    }

    pub fn is_multiplex(&self) -> bool {
        self.presence.iter().all(|p| p.len() == self.layers.len())
    }

    pub fn stats(&self) -> NetworkStats {
        NetworkStats {
            layer_count: self.layers.len(),
            actor_count: self.actors.len(),
            node_count: self.presence.iter().map(Vec::len).sum(),
            edge_count: self.layers.iter().map(Layer::edge_count).sum(),
        }
    }

    /// Sum of the actor's node degrees over all layers.
    pub fn degree(&self, actor: usize) -> usize {
        self.layers.iter().map(|l| l.degree(actor)).sum()
    }

    pub fn degree_centrality(&self, id: &str) -> Result<usize> {
        Ok(self.degree(self.actor_index(id)?))
    }

    /// Deduplicated neighbours across layers, ascending, excluding the actor.
    pub fn neighbourhood_of(&self, actor: usize, hops: Hops) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        for layer in &self.layers {
            seen.extend(layer.neighbours(actor).iter().copied());
        }
        if hops == Hops::Two {
            let first: Vec<usize> = seen.iter().copied().collect();
            for b in first {
                for layer in &self.layers {
                    seen.extend(layer.neighbours(b).iter().copied());
                }
            }
        }
        seen.remove(&actor);
        seen.into_iter().collect()
    }

    pub fn neighbourhood(&self, id: &str, hops: Hops) -> Result<BTreeSet<ActorId>> {
        let a = self.actor_index(id)?;
        Ok(self
            .neighbourhood_of(a, hops)
            .into_iter()
            .map(|b| self.actors[b].clone())
            .collect())
    }

    pub fn neighbourhood_size(&self, actor: usize, hops: Hops) -> usize {
        self.neighbourhood_of(actor, hops).len()
    }

    /// Single-layer projection: an actor pair is linked when any layer links it.
    pub fn squeeze(&self) -> FlattenedGraph {
        FlattenedGraph::from_network(self)
    }
}

/// Accumulates nodes and edges by name and normalises them into a
/// [`MultilayerNetwork`]. Self-loops and duplicate edges are dropped and
/// counted in the [`LoadReport`].
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    edges: BTreeMap<LayerId, BTreeSet<(ActorId, ActorId)>>,
    nodes: BTreeMap<LayerId, BTreeSet<ActorId>>,
    report: LoadReport,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_edge(&mut self, layer: &str, a: &str, b: &str) -> Result<&mut Self> {
        let layer = LayerId::new(layer)?;
        let a = ActorId::new(a)?;
        let b = ActorId::new(b)?;
        let nodes = self.nodes.entry(layer.clone()).or_default();
        nodes.insert(a.clone());
        nodes.insert(b.clone());
        if a == b {
            self.report.self_loops += 1;
            return Ok(self);
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !self.edges.entry(layer).or_default().insert(key) {
            self.report.duplicate_edges += 1;
        }
        Ok(self)
    }

    pub fn add_node(&mut self, layer: &str, actor: &str) -> Result<&mut Self> {
        let layer = LayerId::new(layer)?;
        let actor = ActorId::new(actor)?;
        self.nodes.entry(layer).or_default().insert(actor);
        Ok(self)
    }

    pub fn report(&self) -> LoadReport {
        self.report
    }

    pub fn build(self) -> Result<MultilayerNetwork> {
        let actors: Vec<ActorId> = self
            .nodes
            .values()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if actors.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let index: HashMap<ActorId, usize> = actors.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let n = actors.len();
        let mut presence = vec![Vec::new(); n];
        let mut layers = Vec::with_capacity(self.nodes.len());
        for (l, (layer_id, members)) in self.nodes.into_iter().enumerate() {
            let mut present = vec![false; n];
            for m in &members {
                let a = index[m];
                present[a] = true;
                presence[a].push(l);
            }
            let mut adjacency = vec![Vec::new(); n];
            let mut edge_count = 0;
            if let Some(edges) = self.edges.get(&layer_id) {
                for (a, b) in edges {
                    let (ia, ib) = (index[a], index[b]);
                    adjacency[ia].push(ib);
                    adjacency[ib].push(ia);
                    edge_count += 1;
                }
            }
            for nbrs in &mut adjacency {
                nbrs.sort_unstable();
            }
            layers.push(Layer {
                id: layer_id,
                present,
                adjacency,
                node_count: members.len(),
                edge_count,
            });
        }
        Ok(MultilayerNetwork {
            actors,
            index,
            layers,
            presence,
        })
    }
}

/// Builds a network from `(layer, actor, actor)` triples.
pub fn network_from_edges(edges: &[(&str, &str, &str)]) -> Result<MultilayerNetwork> {
    let mut b = NetworkBuilder::new();
    for (l, u, v) in edges {
        b.add_edge(l, u, v)?;
    }
    b.build()
}


#[cfg(test)]
mod tests {
    use super::fixtures::fix_a;
    use super::*;

    fn names(net: &MultilayerNetwork, ixs: &[usize]) -> Vec<String> {
        ixs.iter().map(|&i| net.actor(i).to_string()).collect()
    }

    #[test]
    fn fix_a_counts_match_hand_count() {
        let net = fix_a();
        assert_eq!(
            net.stats(),
            NetworkStats {
                layer_count: 2,
                actor_count: 4,
                node_count: 7,
                edge_count: 5
            }
        );
        assert!(!net.is_multiplex());
    }

    /// Brute-force oracle: count incident edges straight from the triple list.
    #[test]
    fn degrees_match_edge_list_oracle() {
        let triples = [
            ("l1", "a1", "a2"),
            ("l1", "a2", "a3"),
            ("l1", "a1", "a3"),
            ("l2", "a1", "a2"),
            ("l2", "a3", "a4"),
        ];
        let net = fix_a();
        for a in ["a1", "a2", "a3", "a4"] {
            let oracle = triples.iter().filter(|(_, u, v)| *u == a || *v == a).count();
            assert_eq!(net.degree_centrality(a).unwrap(), oracle, "{a}");
        }
        assert_eq!(net.degree_centrality("a1").unwrap(), 3);
        assert_eq!(net.degree_centrality("a4").unwrap(), 1);
    }

    #[test]
    fn neighbourhoods() {
        let net = fix_a();
        let a3 = net.actor_index("a3").unwrap();
        assert_eq!(names(&net, &net.neighbourhood_of(a3, Hops::One)), ["a1", "a2", "a4"]);
        let a4 = net.actor_index("a4").unwrap();
        assert_eq!(names(&net, &net.neighbourhood_of(a4, Hops::One)), ["a3"]);
        assert_eq!(names(&net, &net.neighbourhood_of(a4, Hops::Two)), ["a1", "a2", "a3"]);
    }

    #[test]
    fn isolated_actor_has_empty_neighbourhood() {
        let mut b = NetworkBuilder::new();
        b.add_edge("l", "x", "y").unwrap();
        b.add_node("l", "lonely").unwrap();
        let net = b.build().unwrap();
        assert!(net.neighbourhood("lonely", Hops::Two).unwrap().is_empty());
        assert_eq!(net.degree_centrality("lonely").unwrap(), 0);
    }

    #[test]
    fn actor_layers_follow_presence() {
        let net = fix_a();
        let l = |id: &str| {
            net.actor_layers(id)
                .unwrap()
                .into_iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(l("a4"), ["l2"]);
        assert_eq!(l("a1"), ["l1", "l2"]);
    }

    #[test]
    fn unknown_actor_is_lookup_error() {
        let net = fix_a();
        assert!(matches!(net.degree_centrality("zz"), Err(Error::UnknownActor(_))));
        assert!(matches!(
            net.neighbourhood("zz", Hops::One),
            Err(Error::UnknownActor(_))
        ));
        assert!(matches!(net.actor_layers("zz"), Err(Error::UnknownActor(_))));
    }

    #[test]
    fn multiplex_gets_all_layers() {
        let net = network_from_edges(&[("x", "a", "b"), ("y", "a", "b")]).unwrap();
        assert!(net.is_multiplex());
        assert_eq!(net.actor_layers("a").unwrap().len(), 2);
    }

    #[test]
    fn builder_drops_loops_and_duplicates() {
        let mut b = NetworkBuilder::new();
        b.add_edge("l1", "a", "a").unwrap();
        b.add_edge("l1", "a", "b").unwrap();
        b.add_edge("l1", "b", "a").unwrap();
        assert_eq!(b.report().self_loops, 1);
        assert_eq!(b.report().duplicate_edges, 1);
        let net = b.build().unwrap();
        assert_eq!(net.stats().edge_count, 1);
    }

    #[test]
    fn empty_builder_is_structural_error() {
        assert!(matches!(NetworkBuilder::new().build(), Err(Error::EmptyNetwork)));
    }

    #[test]
    fn rejects_blank_ids() {
        assert!(ActorId::new("").is_err());
        assert!(LayerId::new("a b").is_err());
    }
}
