//! K-shell decomposition rankings (nodewise, actorwise) and K++ shell.

use std::cmp::Ordering;

use crate::network::MultilayerNetwork;

use super::community::louvain;
use super::graph::LocalGraph;
use super::{aggregate_layer_rankings, layer_sizes, ActorRanking, Method};

/// Core number of every vertex (Batagelj–Zaversnik bucket peeling).
pub fn core_numbers(g: &LocalGraph) -> Vec<usize> {
    let n = g.len();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut bins = vec![0usize; max_deg + 2];
    for &d in &degree {
        bins[d] += 1;
    }
    let mut start = 0;
    for b in bins.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bins[degree[v]];
        vert[pos[v]] = v;
        bins[degree[v]] += 1;
    }
    for d in (1..bins.len()).rev() {
        bins[d] = bins[d - 1];
    }
    bins[0] = 0;
    for i in 0..n {
        let v = vert[i];
        for &u in &g.adj[v] {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bins[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bins[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

fn shell_degree_order(g: &LocalGraph, shells: &[usize], degree: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| {
        shells[b]
            .cmp(&shells[a])
            .then(degree(b).cmp(&degree(a)))
            .then(a.cmp(&b))
    });
    order
}

pub fn rank_k_sh(net: &MultilayerNetwork) -> ActorRanking {
    let orders: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            let shells = core_numbers(&g);
            g.to_actors(&shell_degree_order(&g, &shells, |v| g.degree(v)))
        })
        .collect();
    aggregate_layer_rankings(net, Method::KSh, &orders, &layer_sizes(net)).expect("layer orders cover each layer")
}

/// Actorwise shells on the flattened neighbour relation, ordered by shell and
/// then by multilayer degree.
pub fn rank_k_sh_m(net: &MultilayerNetwork) -> ActorRanking {
    let g = LocalGraph::from_flattened(&net.squeeze());
    let shells = core_numbers(&g);
    let order = shell_degree_order(&g, &shells, |a| net.degree(a));
    let scores = order.iter().map(|&a| shells[a] as f64).collect();
    ActorRanking::new(Method::KShM, order, Some(scores))
}

/// Per-vertex `(shell, reward points, degree)` from K++ pruning.
///
/// Pruning proceeds like k-shell peeling in batches; every surviving
/// neighbour of a pruned vertex earns one reward point per pruned neighbour.
pub fn kpp_shell_keys(g: &LocalGraph) -> Vec<(usize, usize, usize)> {
    let n = g.len();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut shell = vec![0usize; n];
    let mut reward = vec![0usize; n];
    let mut remaining = n;
    let mut k = 0;
    while remaining > 0 {
        loop {
            let batch: Vec<usize> = (0..n).filter(|&v| alive[v] && degree[v] <= k).collect();
            if batch.is_empty() {
                break;
            }
            for &v in &batch {
                alive[v] = false;
                shell[v] = k;
            }
            remaining -= batch.len();
            for &v in &batch {
                for &u in &g.adj[v] {
                    if alive[u] {
                        degree[u] -= 1;
                        reward[u] += 1;
                    }
                }
            }
        }
        k += 1;
    }
    (0..n).map(|v| (shell[v], reward[v], g.degree(v))).collect()
}

/// Interleaves communities round-robin: largest community first, each
/// contributing its next best vertex per round.
fn round_robin(mut communities: Vec<Vec<usize>>, rank_of: &[usize]) -> Vec<usize> {
    for c in &mut communities {
        c.sort_by_key(|&v| rank_of[v]);
    }
    communities.sort_by(|a, b| b.len().cmp(&a.len()).then(rank_of[a[0]].cmp(&rank_of[b[0]])));
    let longest = communities.first().map_or(0, Vec::len);
    (0..longest)
        .flat_map(|r| communities.iter().filter_map(move |c| c.get(r).copied()))
        .collect()
}

pub(crate) fn communities_from_labels(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        out[c].push(v);
    }
    out.retain(|c| !c.is_empty());
    out
}

fn kpp_layer_order(g: &LocalGraph) -> Vec<usize> {
    let keys = kpp_shell_keys(g);
    let mut by_key: Vec<usize> = (0..g.len()).collect();
    by_key.sort_by(|&a, &b| match keys[b].cmp(&keys[a]) {
        Ordering::Equal => a.cmp(&b),
        other => other,
    });
    let mut rank_of = vec![0; g.len()];
    for (r, &v) in by_key.iter().enumerate() {
        rank_of[v] = r;
    }
    let communities = communities_from_labels(&louvain(g));
    round_robin(communities, &rank_of)
}

pub fn rank_kpp_sh(net: &MultilayerNetwork) -> ActorRanking {
    let orders: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            g.to_actors(&kpp_layer_order(&g))
        })
        .collect();
    aggregate_layer_rankings(net, Method::KppSh, &orders, &layer_sizes(net)).expect("layer orders cover each layer")
}
