use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffusion::{simulate, SimulationConfig};
use crate::error::{Error, Result};
use crate::network::MultilayerNetwork;

use super::{rank_deg_c, ActorRanking, Method};

/// Greedy seed set growth under a fixed diffusion setting.
///
/// Each step adds the actor giving the largest final spread, preferring the
/// shorter diffusion on equal spread and drawing uniformly (seeded) among
/// what is still tied. Only the first `max_budget` positions are greedy; the
/// rest follow degree order and `exact_prefix` says so.
pub fn rank_greedy(
    net: &MultilayerNetwork,
    config: &SimulationConfig<f64>,
    max_budget: usize,
    rng_seed: u64,
) -> Result<ActorRanking> {
    let n = net.actor_count();
    if max_budget == 0 || max_budget >= n {
        return Err(Error::DegenerateBudget {
            seeds: max_budget,
            actors: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut chosen = vec![false; n];
    let mut seeds: Vec<usize> = Vec::with_capacity(max_budget);
    let mut gains = Vec::with_capacity(max_budget);
    while seeds.len() < max_budget {
        let mut best: Option<(usize, usize)> = None;
        let mut ties: Vec<(usize, f64)> = Vec::new();
        for c in (0..n).filter(|&c| !chosen[c]) {
            seeds.push(c);
            let r = simulate(net, &seeds, config)?;
            seeds.pop();
            // Larger spread wins, then shorter diffusion.
            let key = (r.spread(), usize::MAX - r.diffusion_length);
            match best {
                Some(b) if key < b => {}
                Some(b) if key == b => ties.push((c, r.gain)),
                _ => {
                    best = Some(key);
                    ties.clear();
                    ties.push((c, r.gain));
                }
            }
        }
        let (pick, g) = ties[rng.random_range(0..ties.len())];
        log::trace!(
            "greedy step {}: {} ({} tied)",
            seeds.len() + 1,
            net.actor(pick),
            ties.len()
        );
        chosen[pick] = true;
        seeds.push(pick);
        gains.push(g);
    }
    let mut order = seeds;
    order.extend(rank_deg_c(net).order.into_iter().filter(|&a| !chosen[a]));
    let mut r = ActorRanking::new(Method::Greedy, order, None);
    r.exact_prefix = Some(max_budget);
    log::debug!("greedy gains along the prefix: {gains:?}");
    Ok(r)
}
