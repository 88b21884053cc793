//! VoteRank, per layer and actorwise.

use crate::network::MultilayerNetwork;

use super::graph::LocalGraph;
use super::{aggregate_layer_rankings, layer_sizes, ActorRanking, Method};

/// Elected vertices in election order.
///
/// Every vertex starts with voting ability 1 and votes for each neighbour;
/// the unelected vertex with the most votes is elected (lowest index on
/// ties), stops voting, and its neighbours lose `decrement` ability. Voting
/// ends when no candidate receives a vote.
pub fn vote_rank(g: &LocalGraph, decrement: f64) -> Vec<usize> {
    let n = g.len();
    let mut ability = vec![1.0f64; n];
    let mut elected = vec![false; n];
    let mut order = Vec::new();
    while order.len() < n {
        let mut best: Option<(i64, usize)> = None;
        for v in (0..n).filter(|&v| !elected[v]) {
            let votes: f64 = g.adj[v].iter().map(|&u| ability[u]).sum();
            // Votes agree on a 1e-12 grid so rounding order cannot split ties.
            let key = (votes * 1e12).round() as i64;
            if best.is_none_or(|(b, _)| key > b) {
                best = Some((key, v));
            }
        }
        let Some((key, v)) = best else { break };
        if key <= 0 {
            break;
        }
        elected[v] = true;
        ability[v] = 0.0;
        order.push(v);
        for &u in &g.adj[v] {
            ability[u] = (ability[u] - decrement).max(0.0);
        }
    }
    order
}

fn extend_unvoted(len: usize, mut elected: Vec<usize>, size: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut seen = vec![false; len];
    for &v in &elected {
        seen[v] = true;
    }
    let mut rest: Vec<usize> = (0..len).filter(|&v| !seen[v]).collect();
    rest.sort_by(|&a, &b| size(b).cmp(&size(a)).then(a.cmp(&b)));
    elected.extend(rest);
    elected
}

fn mean_degree_decrement(g: &LocalGraph) -> f64 {
    let mean = 2.0 * g.edge_count() as f64 / g.len().max(1) as f64;
    if mean > 0.0 {
        1.0 / mean
    } else {
        0.0
    }
}

pub fn rank_v_rnk(net: &MultilayerNetwork) -> ActorRanking {
    let orders: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            let elected = vote_rank(&g, mean_degree_decrement(&g));
            g.to_actors(&extend_unvoted(g.len(), elected, |v| g.degree(v)))
        })
        .collect();
    aggregate_layer_rankings(net, Method::VRnk, &orders, &layer_sizes(net)).expect("layer orders cover each layer")
}

/// Actorwise VoteRank on the flattened neighbour relation.
/// `exact_prefix` marks the elected part of the order.
pub fn rank_v_rnk_m(net: &MultilayerNetwork) -> ActorRanking {
    let g = LocalGraph::from_flattened(&net.squeeze());
    let elected = vote_rank(&g, mean_degree_decrement(&g));
    let prefix = elected.len();
    let order = extend_unvoted(g.len(), elected, |v| g.degree(v));
    let mut r = ActorRanking::new(Method::VRnkM, order, None);
    r.exact_prefix = Some(prefix);
    r
}
