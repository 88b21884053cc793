//! Deterministic Louvain modularity optimisation.

use super::graph::LocalGraph;

const MIN_GAIN: f64 = 1e-12;

struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    total: f64,
}

impl WeightedGraph {
    fn from_local(g: &LocalGraph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = g
            .adj
            .iter()
            .map(|row| row.iter().map(|&v| (v, 1.0)).collect())
            .collect();
        let total = g.edge_count() as f64;
        Self {
            self_loops: vec![0.0; adj.len()],
            adj,
            total,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Weighted degree, counting a self-loop twice.
    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }

    /// One local-moving phase; returns compacted labels and whether any
    /// vertex moved.
    fn local_moves(&self) -> (Vec<usize>, bool) {
        let n = self.len();
        let m2 = 2.0 * self.total;
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let mut label: Vec<usize> = (0..n).collect();
        let mut tot = strength.clone();
        let mut moved_any = false;
        let mut link = vec![0.0; n];
        let mut touched = Vec::new();
        loop {
            let mut moved = false;
            for v in 0..n {
                let own = label[v];
                for &(u, w) in &self.adj[v] {
                    if link[label[u]] == 0.0 {
                        touched.push(label[u]);
                    }
                    link[label[u]] += w;
                }
                tot[own] -= strength[v];
                let gain = |c: usize, link_c: f64| link_c - tot[c] * strength[v] / m2;
                let mut best = own;
                let mut best_gain = gain(own, link[own]);
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += strength[v];
                if best != own {
                    label[v] = best;
                    moved = true;
                    moved_any = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        (compact(&label), moved_any)
    }

    fn aggregate(&self, label: &[usize]) -> Self {
        let k = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut self_loops = vec![0.0; k];
        let mut rows: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for v in 0..self.len() {
            let cv = label[v];
            self_loops[cv] += self.self_loops[v];
            for &(u, w) in &self.adj[v] {
                let cu = label[u];
                if cu == cv {
                    // Each internal edge is seen from both ends.
                    self_loops[cv] += w / 2.0;
                } else {
                    *rows[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        Self {
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            self_loops,
            total: self.total,
        }
    }
}

fn compact(label: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; label.len()];
    let mut next = 0;
    label
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// Community label per vertex, labels numbered by first appearance.
///
/// Vertices are visited in index order and only strict improvements move a
/// vertex, so the result is deterministic.
pub fn louvain(g: &LocalGraph) -> Vec<usize> {
    let n = g.len();
    if g.edge_count() == 0 {
        return (0..n).collect();
    }
    let mut membership: Vec<usize> = (0..n).collect();
    let mut graph = WeightedGraph::from_local(g);
    loop {
        let (labels, moved) = graph.local_moves();
        if !moved {
            break;
        }
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        graph = graph.aggregate(&labels);
    }
    compact(&membership)
}

/// Newman modularity of a partition.
pub fn modularity(g: &LocalGraph, labels: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = labels.iter().copied().max().map_or(0, |x| x + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for v in 0..g.len() {
        degree[labels[v]] += g.degree(v) as f64;
        for &u in &g.adj[v] {
            if labels[u] == labels[v] {
                internal[labels[v]] += 0.5;
            }
        }
    }
    (0..k).map(|c| internal[c] / m - (degree[c] / (2.0 * m)).powi(2)).sum()
}
