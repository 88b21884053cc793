//! Rank-refining seed selection.
//!
//! Every method orders all actors from most to least promising; a seed set
//! for budget `s` is the first `s` actors of that order. Ties are broken by
//! actor id (index order) everywhere except in the greedy method, which draws
//! among equally good candidates with a seeded generator.
//!
//! Methods that work on nodes rank each layer separately and combine the
//! layer positions with [`aggregate_layer_rankings`].

mod cbim;
mod cim;
mod community;
mod degree;
mod graph;
mod greedy;
mod kshell;
mod pagerank;
mod random;
mod voterank;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffusion::SimulationConfig;
use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;

pub use cbim::{katz_centrality, rank_cbim, spectral_radius};
pub use cim::{maximal_cliques, rank_cim};
pub use community::{louvain, modularity};
pub use degree::{rank_deg_c, rank_deg_c_d, rank_nghb_1s, rank_nghb_2s, rank_nghb_sd};
pub use graph::LocalGraph;
pub use greedy::rank_greedy;
pub use kshell::{core_numbers, kpp_shell_keys, rank_k_sh, rank_k_sh_m, rank_kpp_sh};
pub use pagerank::{pagerank, rank_p_rnk, rank_p_rnk_m};
pub use random::rank_random;
pub use voterank::{rank_v_rnk, rank_v_rnk_m, vote_rank};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Cbim,
    Cim,
    DegC,
    DegCD,
    Greedy,
    KSh,
    KShM,
    KppSh,
    Nghb1s,
    Nghb2s,
    NghbSd,
    PRnk,
    PRnkM,
    Random,
    VRnk,
    VRnkM,
}

impl Method {
    pub const ALL: [Method; 16] = [
        Method::Cbim,
        Method::Cim,
        Method::DegC,
        Method::DegCD,
        Method::Greedy,
        Method::KSh,
        Method::KShM,
        Method::KppSh,
        Method::Nghb1s,
        Method::Nghb2s,
        Method::NghbSd,
        Method::PRnk,
        Method::PRnkM,
        Method::Random,
        Method::VRnk,
        Method::VRnkM,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cbim => "cbim",
            Method::Cim => "cim",
            Method::DegC => "deg-c",
            Method::DegCD => "deg-c-d",
            Method::Greedy => "greedy",
            Method::KSh => "k-sh",
            Method::KShM => "k-sh-m",
            Method::KppSh => "kpp-sh",
            Method::Nghb1s => "nghb-1s",
            Method::Nghb2s => "nghb-2s",
            Method::NghbSd => "nghb-sd",
            Method::PRnk => "p-rnk",
            Method::PRnkM => "p-rnk-m",
            Method::Random => "random",
            Method::VRnk => "v-rnk",
            Method::VRnkM => "v-rnk-m",
        }
    }

    /// Whether the ranking depends on the random seed.
    pub fn is_stochastic(self) -> bool {
        matches!(self, Method::Random | Method::Greedy)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_owned()))
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.as_str().to_owned()
    }
}

/// A total order over all actors of a network.
#[derive(Clone, Debug, PartialEq)]
pub struct ActorRanking {
    pub method: Method,
    /// Actor indices, best first.
    pub order: Vec<usize>,
    /// Method-specific score per position, when the method has one.
    pub scores: Option<Vec<f64>>,
    /// Length of the prefix computed by the method itself; positions beyond
    /// it were filled by a fallback order. `None` means the whole order.
    pub exact_prefix: Option<usize>,
}

impl ActorRanking {
    pub(crate) fn new(method: Method, order: Vec<usize>, scores: Option<Vec<f64>>) -> Self {
        Self {
            method,
            order,
            scores,
            exact_prefix: None,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_permutation_of(&self, actor_count: usize) -> bool {
        let mut seen = vec![false; actor_count];
        self.order.len() == actor_count
            && self
                .order
                .iter()
                .all(|&a| a < actor_count && !std::mem::replace(&mut seen[a], true))
    }

    pub fn names<'a>(&self, net: &'a MultilayerNetwork) -> Vec<&'a str> {
        self.order.iter().map(|&a| net.actor(a).as_str()).collect()
    }

    /// Top `budget.count` actors.
    pub fn seeds(&self, budget: &Budget) -> Result<Vec<usize>> {
        seeds_from_ranking(self, budget)
    }

    /// Writes `position,actor,score,method,network` rows, limited to `limit`
    /// positions when given.
    pub fn write_csv<W: Write>(
        &self,
        net: &MultilayerNetwork,
        network_name: &str,
        limit: Option<usize>,
        out: W,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["position", "actor", "score", "method", "network"])?;
        let n = limit.unwrap_or(self.order.len()).min(self.order.len());
        for (pos, &a) in self.order.iter().take(n).enumerate() {
            let score = self.scores.as_ref().map(|s| s[pos].to_string()).unwrap_or_default();
            w.write_record([
                (pos + 1).to_string(),
                net.actor(a).to_string(),
                score,
                self.method.to_string(),
                network_name.to_owned(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seeding budget as a percentage of actors, resolved to a seed count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    pub percent: f64,
    pub count: usize,
}

impl Budget {
    /// `count = max(1, round_half_up(percent * actors / 100))`, which must
    /// leave at least one activatable actor.
    pub fn resolve(percent: f64, actors: usize) -> Result<Self> {
        if !(percent > 0.0 && percent <= 100.0) {
            return Err(Error::InvalidBudget(percent));
        }
        // The epsilon keeps exact halves such as 2.5 from rounding down after
        // the multiplication.
        let raw = percent * actors as f64 / 100.0;
        let count = ((raw + 0.5 + 1e-9).floor() as usize).max(1);
        if count >= actors {
            return Err(Error::DegenerateBudget { seeds: count, actors });
        }
        Ok(Self { percent, count })
    }

    pub fn from_count(count: usize, actors: usize) -> Result<Self> {
        if count == 0 || count >= actors {
            return Err(Error::DegenerateBudget { seeds: count, actors });
        }
        Ok(Self {
            percent: 100.0 * count as f64 / actors as f64,
            count,
        })
    }
}

pub fn seeds_from_ranking(ranking: &ActorRanking, budget: &Budget) -> Result<Vec<usize>> {
    if budget.count == 0 || budget.count >= ranking.len() {
        return Err(Error::DegenerateBudget {
            seeds: budget.count,
            actors: ranking.len(),
        });
    }
    Ok(ranking.order[..budget.count].to_vec())
}

/// Weighted mean 1-based position of every actor over the layer orders that
/// contain it; `None` for actors in no order.
pub fn weighted_positions(actor_count: usize, layers: &[(f64, &[usize])]) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; actor_count];
    let mut weight = vec![0.0; actor_count];
    for &(w, order) in layers {
        for (pos, &a) in order.iter().enumerate() {
            sum[a] += w * (pos + 1) as f64;
            weight[a] += w;
        }
    }
    sum.into_iter()
        .zip(weight)
        .map(|(s, w)| (w > 0.0).then(|| s / w))
        .collect()
}

/// Combines per-layer node orders (one per layer, each covering exactly the
/// layer's nodes) into an actor ranking by ascending weighted mean position.
pub fn aggregate_layer_rankings(
    net: &MultilayerNetwork,
    method: Method,
    layer_orders: &[Vec<usize>],
    weights: &[f64],
) -> Result<ActorRanking> {
    if layer_orders.len() != net.layer_count() || weights.len() != net.layer_count() {
        return Err(Error::Consistency(format!(
            "expected {} layer rankings and weights, got {} and {}",
            net.layer_count(),
            layer_orders.len(),
            weights.len()
        )));
    }
    for (l, order) in layer_orders.iter().enumerate() {
        let layer = net.layer(l);
        let mut seen = vec![false; net.actor_count()];
        for &a in order {
            if a >= net.actor_count() || !layer.contains(a) || std::mem::replace(&mut seen[a], true) {
                return Err(Error::Consistency(format!(
                    "layer `{}` ranking has a foreign or repeated entry",
                    layer.id()
                )));
            }
        }
        if order.len() != layer.node_count() {
            let missing = layer.nodes().find(|&a| !seen[a]).unwrap_or_default();
            return Err(Error::Consistency(format!(
                "actor `{}` missing from layer `{}` ranking",
                net.actor(missing),
                layer.id()
            )));
        }
    }
    let layers: Vec<(f64, &[usize])> = weights
        .iter()
        .copied()
        .zip(layer_orders.iter().map(Vec::as_slice))
        .collect();
    let positions = weighted_positions(net.actor_count(), &layers);
    let positions: Vec<f64> = positions
        .into_iter()
        .enumerate()
        .map(|(a, p)| p.ok_or_else(|| Error::Consistency(format!("actor `{}` is in no layer ranking", net.actor(a)))))
        .collect::<Result<_>>()?;
    Ok(ranking_by_score(method, &positions, Direction::Ascending))
}

/// Layer node counts, the weights used by the nodewise methods.
pub(crate) fn layer_sizes(net: &MultilayerNetwork) -> Vec<f64> {
    net.layers().iter().map(|l| l.node_count() as f64).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Ascending,
    Descending,
}

/// Sorts all actors by score, ties by index.
pub(crate) fn ranking_by_score(method: Method, scores: &[f64], dir: Direction) -> ActorRanking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let c = scores[a].total_cmp(&scores[b]);
        let c = if dir == Direction::Descending { c.reverse() } else { c };
        c.then(a.cmp(&b))
    });
    let sorted = order.iter().map(|&a| scores[a]).collect();
    ActorRanking::new(method, order, Some(sorted))
}

/// Tunables shared by the methods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankingParams {
    pub katz_alpha: f64,
    pub damping: f64,
    pub rng_seed: u64,
    /// Required by [`Method::Greedy`]: diffusion settings and how many seeds
    /// to choose greedily.
    pub greedy: Option<(SimulationConfig<f64>, usize)>,
}

impl Default for RankingParams {
    fn default() -> Self {
        Self {
            katz_alpha: 0.1,
            damping: 0.85,
            rng_seed: crate::DEFAULT_SEED,
            greedy: None,
        }
    }
}

pub fn rank(net: &MultilayerNetwork, method: Method, params: &RankingParams) -> Result<ActorRanking> {
    Ok(match method {
        Method::Cbim => rank_cbim(net, params.katz_alpha)?,
        Method::Cim => rank_cim(net),
        Method::DegC => rank_deg_c(net),
        Method::DegCD => rank_deg_c_d(net),
        Method::Greedy => {
            let (config, budget) = params
                .greedy
                .ok_or_else(|| Error::InvalidConfig("greedy ranking needs a simulation config and budget".into()))?;
            rank_greedy(net, &config, budget, params.rng_seed)?
        }
        Method::KSh => rank_k_sh(net),
        Method::KShM => rank_k_sh_m(net),
        Method::KppSh => rank_kpp_sh(net),
        Method::Nghb1s => rank_nghb_1s(net),
        Method::Nghb2s => rank_nghb_2s(net),
        Method::NghbSd => rank_nghb_sd(net),
        Method::PRnk => rank_p_rnk(net, params.damping)?,
        Method::PRnkM => rank_p_rnk_m(net, params.damping)?,
        Method::Random => rank_random(net, params.rng_seed),
        Method::VRnk => rank_v_rnk(net),
        Method::VRnkM => rank_v_rnk_m(net),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::fix_a;
    use crate::network::network_from_edges;

    #[test]
    fn method_ids_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!(matches!("bogus".parse::<Method>(), Err(Error::UnknownMethod(_))));
        assert_eq!(serde_json::to_string(&Method::KppSh).unwrap(), "\"kpp-sh\"");
    }

    #[test]
    fn budget_resolution() {
        assert_eq!(Budget::resolve(25.0, 4).unwrap().count, 1);
        assert_eq!(Budget::resolve(50.0, 4).unwrap().count, 2);
        assert_eq!(Budget::resolve(1.0, 61).unwrap().count, 1);
        assert_eq!(Budget::resolve(10.0, 25).unwrap().count, 3);
        assert_eq!(Budget::resolve(15.0, 61).unwrap().count, 9);
        assert!(matches!(Budget::resolve(0.0, 10), Err(Error::InvalidBudget(_))));
        assert!(matches!(
            Budget::resolve(100.0, 10),
            Err(Error::DegenerateBudget { .. })
        ));
        assert!(matches!(Budget::resolve(90.0, 4), Err(Error::DegenerateBudget { .. })));
    }

    #[test]
    fn seeds_are_prefix() {
        let net = fix_a();
        let ranking = ActorRanking::new(
            Method::Nghb1s,
            net.actor_indices(&["a3", "a1", "a2", "a4"]).unwrap(),
            None,
        );
        let seeds = ranking.seeds(&Budget::resolve(25.0, 4).unwrap()).unwrap();
        assert_eq!(seeds, vec![net.actor_index("a3").unwrap()]);
        let top2 = ranking.seeds(&Budget::resolve(50.0, 4).unwrap()).unwrap();
        assert_eq!(top2.len(), 2);
        let too_many = Budget {
            percent: 100.0,
            count: 4,
        };
        assert!(seeds_from_ranking(&ranking, &too_many).is_err());
    }

    #[test]
    fn weighted_position_arithmetic() {
        let x = 0;
        let l1 = [x, 1, 2];
        let l2 = [3, 4, 5, x];
        let p = weighted_positions(6, &[(3.0, &l1), (1.0, &l2)]);
        assert_eq!(p[x], Some(1.75));
        assert_eq!(p[3], Some(1.0));
        assert_eq!(weighted_positions(7, &[(1.0, &l1)])[6], None);
    }

    #[test]
    fn aggregation_of_identical_and_single_layers() {
        let net = network_from_edges(&[("x", "a", "b"), ("x", "b", "c"), ("y", "a", "b"), ("y", "b", "c")]).unwrap();
        let order = vec![1, 2, 0];
        let r = aggregate_layer_rankings(&net, Method::KSh, &[order.clone(), order.clone()], &[3.0, 3.0]).unwrap();
        assert_eq!(r.order, order);

        let single = network_from_edges(&[("x", "a", "b"), ("x", "b", "c")]).unwrap();
        let r = aggregate_layer_rankings(&single, Method::KSh, &[vec![2, 0, 1]], &[3.0]).unwrap();
        assert_eq!(r.order, vec![2, 0, 1]);
    }

    #[test]
    fn aggregation_rejects_missing_actor() {
        let net = fix_a();
        let l1 = vec![0, 1];
        let l2 = vec![0, 1, 2, 3];
        assert!(matches!(
            aggregate_layer_rankings(&net, Method::KSh, &[l1, l2.clone()], &[3.0, 4.0]),
            Err(Error::Consistency(_))
        ));
        // a4 is absent from l1.
        assert!(aggregate_layer_rankings(&net, Method::KSh, &[vec![0, 1, 3], l2], &[3.0, 4.0]).is_err());
    }

    #[test]
    fn greedy_needs_settings() {
        assert!(rank(&fix_a(), Method::Greedy, &RankingParams::default()).is_err());
    }

    #[test]
    fn csv_rows() {
        let net = fix_a();
        let r = rank_nghb_1s(&net);
        let mut buf = Vec::new();
        r.write_csv(&net, "fix-a", Some(2), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "position,actor,score,method,network\n1,a3,3,nghb-1s,fix-a\n2,a1,2,nghb-1s,fix-a\n"
        );
    }
}
