//! Degree and neighbourhood-size rankings, plain and discounted.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::network::{Hops, MultilayerNetwork};

use super::{ranking_by_score, ActorRanking, Direction, Method};

pub fn rank_deg_c(net: &MultilayerNetwork) -> ActorRanking {
    let scores: Vec<f64> = (0..net.actor_count()).map(|a| net.degree(a) as f64).collect();
    ranking_by_score(Method::DegC, &scores, Direction::Descending)
}

pub fn rank_nghb_1s(net: &MultilayerNetwork) -> ActorRanking {
    rank_nghb(net, Hops::One, Method::Nghb1s)
}

pub fn rank_nghb_2s(net: &MultilayerNetwork) -> ActorRanking {
    rank_nghb(net, Hops::Two, Method::Nghb2s)
}

fn rank_nghb(net: &MultilayerNetwork, hops: Hops, method: Method) -> ActorRanking {
    let scores: Vec<f64> = (0..net.actor_count())
        .map(|a| net.neighbourhood_size(a, hops) as f64)
        .collect();
    ranking_by_score(method, &scores, Direction::Descending)
}

/// Degree discount: selecting `u` lowers each neighbour's score by the number
/// of layers in which they are linked.
pub fn rank_deg_c_d(net: &MultilayerNetwork) -> ActorRanking {
    let flat = net.squeeze();
    let initial = (0..net.actor_count()).map(|a| net.degree(a) as i64).collect();
    discount_order(Method::DegCD, initial, |u| {
        flat.weighted_neighbours(u)
            .iter()
            .map(|&(v, m)| (v, m as i64))
            .collect()
    })
}

/// Neighbourhood-size discount: each selected neighbour costs exactly 1.
pub fn rank_nghb_sd(net: &MultilayerNetwork) -> ActorRanking {
    let flat = net.squeeze();
    let initial = (0..net.actor_count()).map(|a| flat.degree(a) as i64).collect();
    discount_order(Method::NghbSd, initial, |u| {
        flat.neighbours(u).map(|v| (v, 1)).collect()
    })
}

fn discount_order<F>(method: Method, mut score: Vec<i64>, discounts: F) -> ActorRanking
where
    F: Fn(usize) -> Vec<(usize, i64)>,
{
    let n = score.len();
    let mut heap: BinaryHeap<(i64, Reverse<usize>)> = score.iter().enumerate().map(|(a, &s)| (s, Reverse(a))).collect();
    let mut taken = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut picked_scores = Vec::with_capacity(n);
    while let Some((s, Reverse(u))) = heap.pop() {
        if taken[u] || s != score[u] {
            continue;
        }
        taken[u] = true;
        order.push(u);
        picked_scores.push(s as f64);
        for (v, d) in discounts(u) {
            if !taken[v] {
                score[v] -= d;
                heap.push((score[v], Reverse(v)));
            }
        }
    }
    ActorRanking::new(method, order, Some(picked_scores))
}
