#![allow(dead_code)]

use std::path::PathBuf;

use mltm::network::{network_from_edges, NetworkBuilder};
use mltm::{load_network, MultilayerNetwork, NetworkFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two layers over four actors: a triangle on `l1` and edges a1-a2, a3-a4
/// on `l2`.
pub fn fix_a() -> MultilayerNetwork {
    network_from_edges(&[
        ("l1", "a1", "a2"),
        ("l1", "a2", "a3"),
        ("l1", "a1", "a3"),
        ("l2", "a1", "a2"),
        ("l2", "a3", "a4"),
    ])
    .unwrap()
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn aucs() -> MultilayerNetwork {
    load_network(data_path("aucs.edges"), NetworkFormat::LayerEdgeList).unwrap()
}

/// Random network: every actor sits on each layer with probability
/// `presence` (and on at least one), edges appear with probability `p`.
pub fn random_network(rng: &mut impl Rng, actors: usize, layers: usize, presence: f64, p: f64) -> MultilayerNetwork {
    let mut b = NetworkBuilder::new();
    let names: Vec<String> = (0..actors).map(|i| format!("v{i:02}")).collect();
    let mut on = vec![vec![false; actors]; layers];
    for a in 0..actors {
        let forced = if a < layers { a } else { rng.random_range(0..layers) };
        for (l, row) in on.iter_mut().enumerate() {
            row[a] = l == forced || rng.random_bool(presence);
        }
    }
    for (l, row) in on.iter().enumerate() {
        let layer = format!("L{l}");
        for a in 0..actors {
            if !row[a] {
                continue;
            }
            b.add_node(&layer, &names[a]).unwrap();
            for c in a + 1..actors {
                if row[c] && rng.random_bool(p) {
                    b.add_edge(&layer, &names[a], &names[c]).unwrap();
                }
            }
        }
    }
    b.build().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Non-empty random subset of `0..n` with at most `max` members, ascending.
pub fn random_seeds(rng: &mut impl Rng, n: usize, max: usize) -> Vec<usize> {
    let k = rng.random_range(1..=max.min(n - 1).max(1));
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}
