use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::network::MultilayerNetwork;

use super::{ActorRanking, Method};

/// Uniform random permutation of the actors.
pub fn rank_random(net: &MultilayerNetwork, rng_seed: u64) -> ActorRanking {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut order: Vec<usize> = (0..net.actor_count()).collect();
    order.shuffle(&mut rng);
    ActorRanking::new(Method::Random, order, None)
}
