use crate::network::{FlattenedGraph, Layer};

/// Compact undirected graph over a subset of actors.
///
/// `nodes[i]` is the actor index of local vertex `i`; nodes are ascending so
/// local index order is the actor tie-break order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGraph {
    pub nodes: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

impl LocalGraph {
    pub fn from_layer(layer: &Layer) -> Self {
        let nodes: Vec<usize> = layer.nodes().collect();
        let mut local = vec![usize::MAX; layer_width(layer, &nodes)];
        for (i, &a) in nodes.iter().enumerate() {
            local[a] = i;
        }
        let adj = nodes
            .iter()
            .map(|&a| layer.neighbours(a).iter().map(|&b| local[b]).collect())
            .collect();
        Self { nodes, adj }
    }

    pub fn from_flattened(flat: &FlattenedGraph) -> Self {
        Self {
            nodes: (0..flat.vertex_count()).collect(),
            adj: flat.adjacency_lists(),
        }
    }

    /// Subgraph induced by local vertices `members` (ascending).
    pub fn induced(&self, members: &[usize]) -> LocalGraph {
        let mut local = vec![usize::MAX; self.len()];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let adj = members
            .iter()
            .map(|&m| {
                self.adj[m]
                    .iter()
                    .filter(|&&b| local[b] != usize::MAX)
                    .map(|&b| local[b])
                    .collect()
            })
            .collect();
        LocalGraph {
            nodes: members.iter().map(|&m| self.nodes[m]).collect(),
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn to_actors(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&i| self.nodes[i]).collect()
    }
}

fn layer_width(layer: &Layer, nodes: &[usize]) -> usize {
    nodes
        .iter()
        .flat_map(|&a| std::iter::once(a).chain(layer.neighbours(a).iter().copied()))
        .max()
        .map_or(0, |m| m + 1)
}
