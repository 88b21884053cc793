//! Cross-method comparisons: Wilcoxon similarity counts, rank tensors and
//! seed set overlap.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use ordered_float::OrderedFloat;

use crate::diffusion::Protocol;
use crate::error::{Error, Result};
use crate::experiment::ExperimentRecord;
use crate::seeding::{ActorRanking, Budget, Method};

use super::heatmap::{mean_heatmaps, Group};
use super::wilcoxon::{average_ranks, wilcoxon_signed_rank};

pub const SIGNIFICANCE: f64 = 0.05;

type CellKey = (OrderedFloat<f64>, OrderedFloat<f64>);

/// Mean gain per (mu, s) cell for every (network, method) under `protocol`.
fn gain_series(
    records: &[ExperimentRecord],
    protocol: Protocol,
) -> BTreeMap<String, BTreeMap<Method, BTreeMap<CellKey, f64>>> {
    let mut sums: BTreeMap<(String, Method, CellKey), (f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.protocol == protocol) {
        let e = sums
            .entry((r.network.clone(), r.method, (OrderedFloat(r.mu), OrderedFloat(r.s))))
            .or_default();
        e.0 += r.gain;
        e.1 += 1;
    }
    let mut out: BTreeMap<String, BTreeMap<Method, BTreeMap<CellKey, f64>>> = BTreeMap::new();
    for ((net, m, cell), (sum, n)) in sums {
        out.entry(net)
            .or_default()
            .entry(m)
            .or_default()
            .insert(cell, sum / n as f64);
    }
    out
}

/// Per-pair count of networks on which the two methods' gain series are
/// not significantly different (`p > 0.05`).
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    pub protocol: Protocol,
    pub methods: Vec<Method>,
    pub networks: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl SimilarityMatrix {
    pub fn count(&self, a: Method, b: Method) -> Option<usize> {
        let i = self.methods.iter().position(|&m| m == a)?;
        let j = self.methods.iter().position(|&m| m == b)?;
        Some(self.counts[i][j])
    }

    /// `method_a,method_b,count` for every ordered pair.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["method_a", "method_b", "count"])?;
        for (i, a) in self.methods.iter().enumerate() {
            for (j, b) in self.methods.iter().enumerate() {
                w.write_record([a.as_str(), b.as_str(), &self.counts[i][j].to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn similarity_matrix(records: &[ExperimentRecord], protocol: Protocol) -> Result<SimilarityMatrix> {
    let series = gain_series(records, protocol);
    let methods: Vec<Method> = series
        .values()
        .flat_map(|per| per.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if methods.len() < 2 {
        return Err(Error::Aggregation(format!(
            "similarity needs at least 2 methods under {protocol}, got {}",
            methods.len()
        )));
    }
    let m = methods.len();
    let mut counts = vec![vec![0; m]; m];
    for (net, per) in &series {
        let mut flat = Vec::with_capacity(m);
        for method in &methods {
            let cells = per
                .get(method)
                .ok_or_else(|| Error::Coverage(format!("method {method} has no {protocol} results on `{net}`")))?;
            flat.push(cells);
        }
        let keys: Vec<&CellKey> = flat[0].keys().collect();
        if let Some((k, _)) = methods
            .iter()
            .zip(&flat)
            .find(|(_, c)| c.keys().collect::<Vec<_>>() != keys)
        {
            return Err(Error::Coverage(format!("method {k} covers different cells on `{net}`")));
        }
        let values: Vec<Vec<f64>> = flat.iter().map(|c| c.values().copied().collect()).collect();
        for i in 0..m {
            for j in i..m {
                let p = wilcoxon_signed_rank(&values[i], &values[j])?.p_value;
                if p > SIGNIFICANCE {
                    counts[i][j] += 1;
                    if i != j {
                        counts[j][i] += 1;
                    }
                }
            }
        }
    }
    Ok(SimilarityMatrix {
        protocol,
        methods,
        networks: series.into_keys().collect(),
        counts,
    })
}

/// Fractional ranks of methods by mean gain, one entry per
/// (network, protocol, mu, s) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct RankingTensor {
    pub methods: Vec<Method>,
    pub cells: Vec<TensorCell>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorCell {
    pub network: String,
    pub protocol: Protocol,
    pub mu: f64,
    pub s: f64,
    /// Aligned with `RankingTensor::methods`; rank 1 is the highest gain.
    pub ranks: Vec<f64>,
}

/// Mean rank of a method within a group of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMean {
    pub method: Method,
    /// `PROTOCOL/NETWORK` where either part may be `all`.
    pub group: String,
    pub mean_rank: f64,
}

/// Fractional ranking of `values` in descending order.
pub fn fractional_ranks_desc(values: &[f64]) -> Vec<f64> {
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    average_ranks(&neg)
}

pub fn ranking_tensor(records: &[ExperimentRecord]) -> Result<RankingTensor> {
    let methods: Vec<Method> = records
        .iter()
        .map(|r| r.method)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if methods.is_empty() {
        return Err(Error::Aggregation("no records to rank".into()));
    }
    let mut cells = Vec::new();
    for protocol in Protocol::ALL {
        for (network, per) in gain_series(records, protocol) {
            let keys: BTreeSet<CellKey> = per.values().flat_map(|c| c.keys().copied()).collect();
            for key in keys {
                let gains = methods
                    .iter()
                    .map(|m| {
                        per.get(m).and_then(|c| c.get(&key)).copied().ok_or_else(|| {
                            Error::Coverage(format!(
                                "method {m} missing at {network} {protocol} mu={} s={}",
                                key.0, key.1
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                cells.push(TensorCell {
                    network: network.clone(),
                    protocol,
                    mu: key.0 .0,
                    s: key.1 .0,
                    ranks: fractional_ranks_desc(&gains),
                });
            }
        }
    }
    Ok(RankingTensor { methods, cells })
}

impl RankingTensor {
    /// Mean rank per method over the cells passing the filters.
    pub fn mean_ranks(&self, protocol: Option<Protocol>, network: Option<&str>) -> Option<Vec<f64>> {
        let chosen: Vec<&TensorCell> = self
            .cells
            .iter()
            .filter(|c| protocol.is_none_or(|p| c.protocol == p))
            .filter(|c| network.is_none_or(|n| c.network == n))
            .collect();
        if chosen.is_empty() {
            return None;
        }
        Some(
            (0..self.methods.len())
                .map(|k| chosen.iter().map(|c| c.ranks[k]).sum::<f64>() / chosen.len() as f64)
                .collect(),
        )
    }

    /// Means for every protocol (and both together) crossed with every
    /// network (and all together).
    pub fn group_means(&self) -> Vec<GroupMean> {
        let networks: BTreeSet<&str> = self.cells.iter().map(|c| c.network.as_str()).collect();
        let protocols = [None, Some(Protocol::Or), Some(Protocol::And)];
        let mut out = Vec::new();
        for p in protocols {
            for n in std::iter::once(None).chain(networks.iter().map(|n| Some(*n))) {
                if let Some(means) = self.mean_ranks(p, n) {
                    let group = format!("{}/{}", p.map_or("all", Protocol::as_str), n.unwrap_or("all"));
                    for (k, &mean_rank) in means.iter().enumerate() {
                        out.push(GroupMean {
                            method: self.methods[k],
                            group: group.clone(),
                            mean_rank,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn write_group_means<W: Write>(means: &[GroupMean], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "group", "mean_rank"])?;
    for g in means {
        w.write_record([g.method.as_str(), &g.group, &g.mean_rank.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JaccardPoint {
    pub percent: f64,
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation over method pairs.
    pub std: f64,
}

pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let a: BTreeSet<usize> = a.iter().copied().collect();
    let b: BTreeSet<usize> = b.iter().copied().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Mean and spread of pairwise Jaccard similarity of the seed sets at each
/// budget.
pub fn jaccard_similarity_curve(rankings: &[ActorRanking], budgets: &[Budget]) -> Result<Vec<JaccardPoint>> {
    if rankings.len() < 2 {
        return Err(Error::InsufficientSample {
            required: 2,
            got: rankings.len(),
        });
    }
    if rankings.iter().any(|r| r.len() != rankings[0].len()) {
        return Err(Error::Shape("rankings cover different actor counts".into()));
    }
    budgets
        .iter()
        .map(|b| {
            let seeds = rankings.iter().map(|r| r.seeds(b)).collect::<Result<Vec<_>>>()?;
            let mut values = Vec::new();
            for i in 0..seeds.len() {
                for j in i + 1..seeds.len() {
                    values.push(jaccard(&seeds[i], &seeds[j]));
                }
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
            Ok(JaccardPoint {
                percent: b.percent,
                count: b.count,
                mean,
                std: var.sqrt(),
            })
        })
        .collect()
}

pub fn write_jaccard_curve<W: Write>(points: &[JaccardPoint], network: &str, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["network", "s", "seed_count", "mean", "std"])?;
    for p in points {
        w.write_record([
            network.to_owned(),
            p.percent.to_string(),
            p.count.to_string(),
            p.mean.to_string(),
            p.std.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Summary gain per group, the scalar used for the per-method overview.
pub fn group_summaries(records: &[ExperimentRecord]) -> Result<Vec<(Group, f64, f64)>> {
    super::heatmap::groups(records)
        .into_iter()
        .map(|g| {
            let (gain, length) = mean_heatmaps(records, &g)?;
            Ok((g, gain.summary()?, length.summary()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::network_from_edges;

    fn rec(network: &str, method: Method, mu: f64, s: f64, gain: f64) -> ExperimentRecord {
        ExperimentRecord {
            network: network.into(),
            method,
            protocol: Protocol::Or,
            mu,
            s,
            repetition: 0,
            seed_count: 1,
            gain,
            diffusion_length: 1,
            truncated: false,
            rng_seed: 0,
        }
    }

    fn grid(network: &str, method: Method, f: impl Fn(usize) -> f64) -> Vec<ExperimentRecord> {
        (0..12)
            .map(|k| rec(network, method, 0.1 * (1 + k / 4) as f64, (1 + k % 4) as f64, f(k)))
            .collect()
    }

    #[test]
    fn similarity_is_symmetric_with_full_diagonal() {
        let mut records = Vec::new();
        for net in ["n1", "n2"] {
            records.extend(grid(net, Method::DegC, |k| k as f64));
            records.extend(grid(net, Method::Cim, |k| k as f64 + 0.5 * (k % 2) as f64));
            records.extend(grid(net, Method::Random, |k| 100.0 - k as f64));
        }
        let m = similarity_matrix(&records, Protocol::Or).unwrap();
        assert_eq!(m.networks, ["n1", "n2"]);
        for i in 0..3 {
            assert_eq!(m.counts[i][i], 2);
            for j in 0..3 {
                assert_eq!(m.counts[i][j], m.counts[j][i]);
            }
        }
        // Shifted by a constant 0..100 reversal: clearly different.
        assert_eq!(m.count(Method::DegC, Method::Random), Some(0));
        assert!(similarity_matrix(&records, Protocol::And).is_err());
    }

    #[test]
    fn similarity_requires_coverage() {
        let mut records = grid("n1", Method::DegC, |k| k as f64);
        records.extend(grid("n1", Method::Cim, |k| k as f64));
        records.extend(grid("n2", Method::DegC, |k| k as f64));
        assert!(matches!(
            similarity_matrix(&records, Protocol::Or),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn fractional_ranks() {
        assert_eq!(fractional_ranks_desc(&[100.0, 50.0, 50.0]), vec![1.0, 2.5, 2.5]);
        assert_eq!(fractional_ranks_desc(&[7.0; 4]), vec![2.5; 4]);
    }

    #[test]
    fn tensor_means_by_hand() {
        // Two cells; methods (cim, deg-c):
        // cell 1 gains (10, 20) -> ranks (2, 1); cell 2 gains (5, 5) -> (1.5, 1.5).
        let records = vec![
            rec("n", Method::Cim, 0.1, 1.0, 10.0),
            rec("n", Method::DegC, 0.1, 1.0, 20.0),
            rec("n", Method::Cim, 0.2, 1.0, 5.0),
            rec("n", Method::DegC, 0.2, 1.0, 5.0),
        ];
        let t = ranking_tensor(&records).unwrap();
        assert_eq!(t.methods, [Method::Cim, Method::DegC]);
        for c in &t.cells {
            assert_eq!(c.ranks.iter().sum::<f64>(), 3.0);
        }
        assert_eq!(t.mean_ranks(None, None).unwrap(), vec![1.75, 1.25]);
        assert_eq!(t.mean_ranks(Some(Protocol::And), None), None);
        let groups = t.group_means();
        assert!(groups
            .iter()
            .any(|g| g.group == "OR/n" && g.method == Method::DegC && g.mean_rank == 1.25));
        assert!(groups.iter().any(|g| g.group == "all/all"));
    }

    #[test]
    fn tensor_requires_every_method() {
        let records = vec![
            rec("n", Method::Cim, 0.1, 1.0, 10.0),
            rec("n", Method::DegC, 0.1, 1.0, 20.0),
            rec("n", Method::Cim, 0.2, 1.0, 5.0),
        ];
        assert!(matches!(ranking_tensor(&records), Err(Error::Coverage(_))));
    }

    #[test]
    fn jaccard_curves() {
        let net = network_from_edges(&[("l", "a", "b"), ("l", "b", "c"), ("l", "c", "d")]).unwrap();
        let fwd = ActorRanking {
            method: Method::DegC,
            order: vec![0, 1, 2, 3],
            scores: None,
            exact_prefix: None,
        };
        let rev = ActorRanking {
            method: Method::Cim,
            order: vec![3, 2, 1, 0],
            ..fwd.clone()
        };
        let b2 = Budget::from_count(2, net.actor_count()).unwrap();
        let b3 = Budget::from_count(3, net.actor_count()).unwrap();
        let same = jaccard_similarity_curve(&[fwd.clone(), fwd.clone()], &[b2, b3]).unwrap();
        assert!(same.iter().all(|p| p.mean == 1.0 && p.std == 0.0));
        let opposite = jaccard_similarity_curve(&[fwd.clone(), rev], &[b2, b3]).unwrap();
        assert_eq!(opposite[0].mean, 0.0);
        // Near the cap the overlap is forced: |A| = 4, 3 seeds -> J >= 2/4.
        assert!(opposite[1].mean >= 0.5);
        assert!(jaccard_similarity_curve(&[fwd], &[b2]).is_err());
    }
}
