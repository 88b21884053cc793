//! PageRank rankings, per layer and on the squeezed graph.

use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;
use crate::scalar::Scalar;

use super::graph::LocalGraph;
use super::{aggregate_layer_rankings, ActorRanking, Method};

const TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 1000;

/// Power-iteration PageRank with uniform teleport; the mass of dangling
/// vertices is spread uniformly. Scores sum to one.
pub fn pagerank<T: Scalar>(g: &LocalGraph, damping: T) -> Result<Vec<T>> {
    if !(damping >= T::zero() && damping < T::one()) {
        return Err(Error::InvalidConfig(format!("damping {damping} must lie in [0, 1)")));
    }
    let n = g.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = T::count(n);
    let tol = T::lit(TOLERANCE).max(T::epsilon() * nf * T::lit(4.0));
    let mut x = vec![T::one() / nf; n];
    for _ in 0..MAX_ITERATIONS {
        let dangling: T = (0..n).filter(|&v| g.degree(v) == 0).map(|v| x[v]).sum();
        let base = (T::one() - damping) / nf + damping * dangling / nf;
        let share: Vec<T> = (0..n)
            .map(|v| match g.degree(v) {
                0 => T::zero(),
                d => x[v] / T::count(d),
            })
            .collect();
        let next: Vec<T> = (0..n)
            .map(|v| base + damping * g.adj[v].iter().map(|&u| share[u]).sum::<T>())
            .collect();
        let change: T = next.iter().zip(&x).map(|(&a, &b)| (a - b).abs()).sum();
        x = next;
        if change < tol {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        solver: "pagerank",
        iterations: MAX_ITERATIONS,
    })
}

/// Local vertices by descending score. Scores are compared on a 1e-10 grid
/// so that values equal up to rounding noise fall back to index order.
fn descending_order(scores: &[f64]) -> Vec<usize> {
    let key = |v: usize| (scores[v] * 1e10).round() as i64;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));
    order
}

pub fn rank_p_rnk(net: &MultilayerNetwork, damping: f64) -> Result<ActorRanking> {
    let orders = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            Ok(g.to_actors(&descending_order(&pagerank(&g, damping)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = vec![1.0; net.layer_count()];
    aggregate_layer_rankings(net, Method::PRnk, &orders, &weights)
}

pub fn rank_p_rnk_m(net: &MultilayerNetwork, damping: f64) -> Result<ActorRanking> {
    let g = LocalGraph::from_flattened(&net.squeeze());
    let scores = pagerank(&g, damping)?;
    let order = descending_order(&scores);
    let sorted = order.iter().map(|&a| scores[a]).collect();
    Ok(ActorRanking::new(Method::PRnkM, order, Some(sorted)))
}
