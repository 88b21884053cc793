//! Clique-based ranking.

use crate::network::MultilayerNetwork;

use super::graph::LocalGraph;
use super::{aggregate_layer_rankings, layer_sizes, ActorRanking, Method};

/// Maximal cliques by Bron–Kerbosch with Tomita pivoting; each clique is
/// returned sorted ascending.
pub fn maximal_cliques(g: &LocalGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, (0..g.len()).collect(), Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out
}

fn bron_kerbosch(g: &LocalGraph, r: &mut Vec<usize>, p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
        .expect("p is non-empty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    let mut p = p;
    for v in candidates {
        r.push(v);
        let np = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let nx = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

fn cim_layer_order(g: &LocalGraph) -> Vec<usize> {
    let mut cliques: Vec<Vec<usize>> = maximal_cliques(g).into_iter().filter(|c| c.len() >= 2).collect();
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    for c in &mut cliques {
        c.sort_by(|&u, &v| g.degree(v).cmp(&g.degree(u)).then(u.cmp(&v)));
    }
    let mut taken = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    loop {
        let mut progressed = false;
        for c in &cliques {
            if let Some(&v) = c.iter().find(|&&v| !taken[v]) {
                taken[v] = true;
                order.push(v);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    let mut rest: Vec<usize> = (0..g.len()).filter(|&v| !taken[v]).collect();
    rest.sort_by(|&u, &v| g.degree(v).cmp(&g.degree(u)).then(u.cmp(&v)));
    order.extend(rest);
    order
}

pub fn rank_cim(net: &MultilayerNetwork) -> ActorRanking {
    let orders: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            g.to_actors(&cim_layer_order(&g))
        })
        .collect();
    aggregate_layer_rankings(net, Method::Cim, &orders, &layer_sizes(net)).expect("layer orders cover each layer")
}
