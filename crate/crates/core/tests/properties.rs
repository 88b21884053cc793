mod common;

use std::collections::BTreeSet;

use mltm::analysis::{fractional_ranks_desc, wilcoxon_signed_rank};
use mltm::diffusion::{simulate_by_sweeps, SimulationConfig};
use mltm::network::{read_network, write_network, Hops};
use mltm::seeding::{rank_greedy, rank_p_rnk, rank_p_rnk_m};
use mltm::{rank, simulate, Budget, Method, MultilayerNetwork, Protocol, RankingParams};
use proptest::prelude::*;

use common::{is_subset, random_network, random_seeds, rng};

fn cfg(mu: f64, protocol: Protocol) -> SimulationConfig<f64> {
    SimulationConfig::new(mu, protocol).unwrap()
}

fn arb_protocol() -> impl Strategy<Value = Protocol> {
    prop_oneof![Just(Protocol::Or), Just(Protocol::And)]
}

/// Network on 3..=30 actors over `layers` layers plus a seed set.
fn case(layers: usize) -> impl Strategy<Value = (MultilayerNetwork, Vec<usize>, u64)> {
    (any::<u64>(), 3usize..=30, 0.4f64..=1.0, 0.05f64..=0.5).prop_map(move |(seed, n, presence, p)| {
        let mut r = rng(seed);
        let net = random_network(&mut r, n, layers, presence, p);
        let seeds = random_seeds(&mut r, n, (n / 3).max(1));
        (net, seeds, seed)
    })
}

fn edges(net: &MultilayerNetwork) -> BTreeSet<(String, String, String)> {
    net.layers()
        .iter()
        .flat_map(|l| {
            l.edges().map(move |(u, v)| {
                let (a, b) = (net.actor(u).to_string(), net.actor(v).to_string());
                (l.id().to_string(), a.clone().min(b.clone()), a.max(b))
            })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn save_load_round_trip((net, _, _) in case(3)) {
        let mut buf = Vec::new();
        write_network(&net, &mut buf).unwrap();
        let (back, report) = read_network(buf.as_slice()).unwrap();
        prop_assert_eq!(report.warnings(), 0);
        prop_assert_eq!(back.stats(), net.stats());
        prop_assert_eq!(edges(&back), edges(&net));
        let ids = |n: &MultilayerNetwork| n.actors().iter().map(|a| a.to_string()).collect::<BTreeSet<_>>();
        prop_assert_eq!(ids(&back), ids(&net));
    }

    #[test]
    fn size_parameters_agree((net, _, _) in case(3)) {
        let stats = net.stats();
        let presence: usize = (0..net.actor_count()).map(|a| net.layers_of(a).len()).sum();
        prop_assert_eq!(stats.node_count, presence);
        prop_assert_eq!(stats.edge_count, net.layers().iter().map(|l| l.edge_count()).sum::<usize>());
        let flat = net.squeeze();
        prop_assert_eq!(flat.vertex_count(), net.actor_count());
        prop_assert!(flat.edge_count() <= stats.edge_count);
        for (u, v) in flat.edges() {
            prop_assert!(net.layers().iter().any(|l| l.has_edge(u, v)));
        }
    }

    #[test]
    fn single_layer_degree_is_neighbourhood_size((net, _, _) in case(1)) {
        for a in 0..net.actor_count() {
            prop_assert_eq!(net.degree(a), net.neighbourhood_size(a, Hops::One));
        }
    }

    #[test]
    fn diffusion_invariants((net, seeds, _) in case(3), mu in 0.0f64..=1.0, protocol in arb_protocol()) {
        let config = cfg(mu, protocol);
        let r = simulate(&net, &seeds, &config).unwrap();
        prop_assert_eq!(&r, &simulate(&net, &seeds, &config).unwrap());
        prop_assert_eq!(&r, &simulate_by_sweeps(&net, &seeds, &config).unwrap());
        prop_assert!(is_subset(&seeds, &r.final_active));
        let n = net.actor_count();
        let expected = 100.0 * (r.spread() - seeds.len()) as f64 / (n - seeds.len()) as f64;
        prop_assert_eq!(r.gain, expected);
        prop_assert_eq!(r.trace.len(), r.diffusion_length);
        prop_assert!(r.trace.last().unwrap().is_empty());
        let activated: usize = r.trace.iter().map(Vec::len).sum();
        prop_assert_eq!(activated + seeds.len(), r.spread());
        prop_assert!(!r.truncated);
    }

    #[test]
    fn protocol_and_threshold_dominance((net, seeds, _) in case(3), mu in 0.0f64..=0.9, dmu in 0.0f64..=0.3) {
        let or = simulate(&net, &seeds, &cfg(mu, Protocol::Or)).unwrap().final_active;
        let and = simulate(&net, &seeds, &cfg(mu, Protocol::And)).unwrap().final_active;
        prop_assert!(is_subset(&and, &or));
        for protocol in Protocol::ALL {
            let lo = simulate(&net, &seeds, &cfg(mu, protocol)).unwrap().final_active;
            let hi = simulate(&net, &seeds, &cfg((mu + dmu).min(1.0), protocol)).unwrap().final_active;
            prop_assert!(is_subset(&hi, &lo));
        }
    }

    #[test]
    fn seed_monotonicity((net, seeds, seed) in case(3), mu in 0.0f64..=1.0, protocol in arb_protocol()) {
        let mut more = seeds.clone();
        more.extend(random_seeds(&mut rng(seed ^ 1), net.actor_count(), 3));
        more.sort_unstable();
        more.dedup();
        prop_assume!(more.len() < net.actor_count());
        let small = simulate(&net, &seeds, &cfg(mu, protocol)).unwrap().final_active;
        let big = simulate(&net, &more, &cfg(mu, protocol)).unwrap().final_active;
        prop_assert!(is_subset(&small, &big));
    }

    #[test]
    fn single_layer_protocols_coincide((net, seeds, _) in case(1), mu in 0.0f64..=1.0) {
        let or = simulate(&net, &seeds, &cfg(mu, Protocol::Or)).unwrap();
        let and = simulate(&net, &seeds, &cfg(mu, Protocol::And)).unwrap();
        prop_assert_eq!(or, and);
    }

    #[test]
    fn rankings_are_deterministic_permutations((net, _, seed) in case(3)) {
        let params = RankingParams { rng_seed: seed, ..RankingParams::default() };
        for method in Method::ALL.into_iter().filter(|&m| m != Method::Greedy) {
            let r = rank(&net, method, &params).unwrap();
            prop_assert!(r.is_permutation_of(net.actor_count()), "{}", method);
            prop_assert_eq!(&r, &rank(&net, method, &params).unwrap());
        }
    }

    #[test]
    fn single_layer_pagerank_methods_coincide((net, _, _) in case(1)) {
        prop_assert_eq!(rank_p_rnk(&net, 0.85).unwrap().order, rank_p_rnk_m(&net, 0.85).unwrap().order);
    }

    #[test]
    fn budget_resolution(percent in 0.01f64..=100.0, actors in 2usize..=500) {
        let raw = percent * actors as f64 / 100.0;
        let expected = ((raw + 0.5 + 1e-9).floor() as usize).max(1);
        match Budget::resolve(percent, actors) {
            Ok(b) => prop_assert!(b.count == expected && b.count < actors),
            Err(_) => prop_assert!(expected >= actors),
        }
    }

    #[test]
    fn wilcoxon_is_symmetric(pairs in prop::collection::vec((0u8..6, 0u8..6), 5..40)) {
        let x: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
        let y: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        let a = wilcoxon_signed_rank(&x, &y).unwrap();
        let b = wilcoxon_signed_rank(&y, &x).unwrap();
        prop_assert_eq!(a.p_value, b.p_value);
        prop_assert!((0.0..=1.0).contains(&a.p_value));
        prop_assert_eq!(wilcoxon_signed_rank(&x, &x).unwrap().p_value, 1.0);
    }

    #[test]
    fn fractional_ranks_sum(values in prop::collection::vec(0u8..5, 1..20)) {
        let v: Vec<f64> = values.iter().map(|&x| f64::from(x)).collect();
        let m = v.len() as f64;
        prop_assert_eq!(fractional_ranks_desc(&v).iter().sum::<f64>(), m * (m + 1.0) / 2.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn greedy_prefix_property((net, _, seed) in case(2), mu in 0.1f64..=0.9, protocol in arb_protocol()) {
        let n = net.actor_count();
        let config = cfg(mu, protocol);
        let k = (n - 1).min(4);
        let full = rank_greedy(&net, &config, k, seed).unwrap();
        for b in 1..k {
            let shorter = rank_greedy(&net, &config, b, seed).unwrap();
            prop_assert_eq!(&shorter.order[..b], &full.order[..b]);
        }
    }
}
