//! Community-based ranking: Dice-similarity communities, Katz scores inside
//! each community and quota-proportional interleaving.

use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;
use crate::scalar::Scalar;

use super::graph::LocalGraph;
use super::{aggregate_layer_rankings, layer_sizes, ActorRanking, Method};

const DICE_MERGE_THRESHOLD: f64 = 0.5;

/// Dice similarity of closed neighbourhoods.
fn dice(g: &LocalGraph, u: usize, v: usize) -> f64 {
    let closed = |x: usize| {
        let mut s = g.adj[x].clone();
        let at = s.binary_search(&x).unwrap_or_else(|e| e);
        s.insert(at, x);
        s
    };
    let (a, b) = (closed(u), closed(v));
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    2.0 * common as f64 / (a.len() + b.len()) as f64
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Community label per vertex after similarity seeding and consolidation.
pub(crate) fn dice_communities(g: &LocalGraph) -> Vec<usize> {
    let n = g.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut weights: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for u in 0..n {
        for &v in &g.adj[u] {
            if u < v {
                let s = dice(g, u, v);
                weights[u].push((v, s));
                weights[v].push((u, s));
                if s > DICE_MERGE_THRESHOLD {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut label: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();

    let min_size = (n as f64).sqrt().ceil() as usize;
    loop {
        let mut size = vec![0usize; n];
        for &c in &label {
            size[c] += 1;
        }
        // Connection strength between communities, summed Dice over edges.
        let mut best_merge: Option<(usize, usize, usize)> = None;
        let mut communities: Vec<usize> = (0..n).filter(|&c| size[c] > 0 && size[c] < min_size).collect();
        communities.sort_by_key(|&c| (size[c], c));
        for c in communities {
            let mut link = std::collections::BTreeMap::<usize, f64>::new();
            for v in (0..n).filter(|&v| label[v] == c) {
                for &(u, w) in &weights[v] {
                    if label[u] != c {
                        *link.entry(label[u]).or_insert(0.0) += w;
                    }
                }
            }
            let target = link
                .into_iter()
                .max_by(|(ca, wa), (cb, wb)| wa.total_cmp(wb).then(size[*ca].cmp(&size[*cb])).then(cb.cmp(ca)));
            if let Some((t, _)) = target {
                best_merge = Some((c, t, size[c]));
                break;
            }
        }
        let Some((from, into, _)) = best_merge else {
            break;
        };
        for l in label.iter_mut() {
            if *l == from {
                *l = into;
            }
        }
    }
    label
}

/// Largest adjacency eigenvalue by power iteration on `A + I`.
pub fn spectral_radius<T: Scalar>(g: &LocalGraph) -> T {
    let n = g.len();
    if n == 0 || g.edge_count() == 0 {
        return T::zero();
    }
    let mut x = vec![T::one(); n];
    let mut lambda = T::zero();
    for _ in 0..10_000 {
        let y: Vec<T> = (0..n)
            .map(|v| x[v] + g.adj[v].iter().map(|&u| x[u]).sum::<T>())
            .collect();
        let norm = y.iter().map(|&v| v * v).sum::<T>().sqrt();
        let next: Vec<T> = y.iter().map(|&v| v / norm).collect();
        // Rayleigh quotient of A + I.
        let rq = (0..n)
            .map(|v| next[v] * (next[v] + g.adj[v].iter().map(|&u| next[u]).sum::<T>()))
            .sum::<T>();
        let done = (rq - lambda).abs() <= T::lit(1e-12) * rq;
        lambda = rq;
        x = next;
        if done {
            break;
        }
    }
    lambda - T::one()
}

/// Katz centrality `x = alpha * A x + 1` by fixed-point iteration.
pub fn katz_centrality<T: Scalar>(g: &LocalGraph, alpha: T) -> Result<Vec<T>> {
    let n = g.len();
    let max_deg = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    if alpha * T::count(max_deg) >= T::one() {
        let rho: T = spectral_radius(g);
        if alpha * rho >= T::one() - T::lit(1e-9) {
            return Err(Error::KatzDivergence {
                alpha: alpha.to_f64_lossy(),
                spectral_radius: rho.to_f64_lossy(),
            });
        }
    }
    let mut x = vec![T::one(); n];
    for _ in 0..10_000 {
        let next: Vec<T> = (0..n)
            .map(|v| alpha * g.adj[v].iter().map(|&u| x[u]).sum::<T>() + T::one())
            .collect();
        let err = next
            .iter()
            .zip(&x)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        x = next;
        if err < T::lit(1e-12) {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        solver: "katz",
        iterations: 10_000,
    })
}

/// Katz with `alpha` halved until it converges on `g`.
fn katz_with_fallback(g: &LocalGraph, mut alpha: f64) -> Vec<f64> {
    loop {
        match katz_centrality(g, alpha) {
            Ok(x) => return x,
            Err(_) => {
                log::debug!("katz alpha {alpha} diverges, halving");
                alpha /= 2.0;
            }
        }
    }
}

fn cbim_layer_order(g: &LocalGraph, alpha: f64) -> Vec<usize> {
    let labels = dice_communities(g);
    let mut communities = super::kshell::communities_from_labels(&labels);
    for members in &mut communities {
        let sub = g.induced(members);
        let katz = katz_with_fallback(&sub, alpha);
        let mut local: Vec<usize> = (0..members.len()).collect();
        local.sort_by(|&a, &b| {
            katz[b]
                .total_cmp(&katz[a])
                .then(g.degree(members[b]).cmp(&g.degree(members[a])))
                .then(a.cmp(&b))
        });
        *members = local.into_iter().map(|i| members[i]).collect();
    }
    communities.sort_by(|a, b| b.len().cmp(&a.len()).then(a.iter().min().cmp(&b.iter().min())));
    quota_interleave(&communities)
}

/// Repeatedly serves the community with the smallest taken fraction; ties go
/// to the earlier (larger) community.
fn quota_interleave(communities: &[Vec<usize>]) -> Vec<usize> {
    let total: usize = communities.iter().map(Vec::len).sum();
    let mut taken = vec![0usize; communities.len()];
    let mut out = Vec::with_capacity(total);
    while out.len() < total {
        let pick = (0..communities.len())
            .filter(|&c| taken[c] < communities[c].len())
            .min_by(|&a, &b| {
                let fa = taken[a] * communities[b].len();
                let fb = taken[b] * communities[a].len();
                fa.cmp(&fb).then(a.cmp(&b))
            })
            .expect("some community has nodes left");
        out.push(communities[pick][taken[pick]]);
        taken[pick] += 1;
    }
    out
}

pub fn rank_cbim(net: &MultilayerNetwork, katz_alpha: f64) -> Result<ActorRanking> {
    if !(katz_alpha > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "katz alpha {katz_alpha} must be positive"
        )));
    }
    let orders: Vec<Vec<usize>> = net
        .layers()
        .iter()
        .map(|layer| {
            let g = LocalGraph::from_layer(layer);
            g.to_actors(&cbim_layer_order(&g, katz_alpha))
        })
        .collect();
    aggregate_layer_rankings(net, Method::Cbim, &orders, &layer_sizes(net))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::fix_a;
    use crate::network::network_from_edges;

    fn graph(edges: &[(usize, usize)], n: usize) -> LocalGraph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        LocalGraph {
            nodes: (0..n).collect(),
            adj,
        }
    }

    #[test]
    fn dice_of_clique_edge_is_one() {
        let g = graph(&[(0, 1), (1, 2), (0, 2)], 3);
        assert_eq!(dice(&g, 0, 1), 1.0);
        let path = graph(&[(0, 1), (1, 2), (2, 3)], 4);
        // N[0] = {0,1}, N[1] = {0,1,2}.
        assert!((dice(&path, 0, 1) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_of_known_graphs() {
        let k4 = graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4);
        assert!((spectral_radius::<f64>(&k4) - 3.0).abs() < 1e-9);
        let star = graph(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5);
        assert!((spectral_radius::<f64>(&star) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn katz_closed_form_on_edge() {
        // x = a*x + 1 on K2 gives 1 / (1 - a).
        let k2 = graph(&[(0, 1)], 2);
        let x = katz_centrality(&k2, 0.25f64).unwrap();
        assert!((x[0] - 1.0 / 0.75).abs() < 1e-10);
        let x32 = katz_centrality(&k2, 0.25f32).unwrap();
        assert!((x32[1] - 1.0 / 0.75).abs() < 1e-5);
    }

    #[test]
    fn katz_divergence_detected() {
        let k4 = graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4);
        assert!(matches!(
            katz_centrality(&k4, 0.5f64),
            Err(Error::KatzDivergence { .. })
        ));
        assert!(katz_with_fallback(&k4, 0.5).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn single_clique_degree_then_lexicographic() {
        let net = network_from_edges(&[("l", "c", "b"), ("l", "b", "a"), ("l", "a", "c")]).unwrap();
        assert_eq!(rank_cbim(&net, 0.1).unwrap().names(&net), ["a", "b", "c"]);
    }

    #[test]
    fn quota_spreads_over_cliques() {
        let net = network_from_edges(&[("l", "a", "b"), ("l", "b", "c"), ("l", "a", "c"), ("l", "x", "y")]).unwrap();
        let names = rank_cbim(&net, 0.1).unwrap().names(&net).join("");
        let tri = |c: &str| "abc".contains(c);
        assert_ne!(tri(&names[0..1]), tri(&names[1..2]));
    }

    #[test]
    fn quota_interleave_is_proportional() {
        let order = quota_interleave(&[vec![0, 1, 2, 3], vec![4, 5]]);
        assert_eq!(order, vec![0, 4, 1, 2, 5, 3]);
    }

    #[test]
    fn undersized_communities_merge_into_a_neighbour() {
        // Path of five: every community is undersized until merged.
        let g = graph(&[(0, 1), (1, 2), (2, 3), (3, 4)], 5);
        let labels = dice_communities(&g);
        let count = super::super::kshell::communities_from_labels(&labels).len();
        assert!(count < 5);
    }

    #[test]
    fn fix_a_total_and_bad_alpha() {
        let net = fix_a();
        assert!(rank_cbim(&net, 0.1).unwrap().is_permutation_of(4));
        assert!(rank_cbim(&net, 0.0).is_err());
    }
}
