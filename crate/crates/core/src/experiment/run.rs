use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diffusion::{simulate, Protocol, SimulationConfig};
use crate::error::{Error, Result};
use crate::network::{load_network, MultilayerNetwork, NetworkFormat};
use crate::seeding::{rank, ActorRanking, Budget, Method, RankingParams};

use super::grid::{Cell, GridSpec, ParameterGrid};
use super::records::{canonical_sort, ExperimentRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    pub cell: Cell,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    /// Canonically sorted.
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<CellFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum RankKey {
    Fixed(String, Method),
    Random(String, usize),
    Greedy(String, Protocol, u64),
}

fn rank_key(cell: &Cell) -> RankKey {
    match cell.method {
        Method::Random => RankKey::Random(cell.network.clone(), cell.repetition),
        Method::Greedy => RankKey::Greedy(cell.network.clone(), cell.protocol, cell.mu.to_bits()),
        m => RankKey::Fixed(cell.network.clone(), m),
    }
}

fn cell_seed(spec: &GridSpec, repetition: usize) -> u64 {
    spec.rng_seed.wrapping_add(repetition as u64)
}

fn compute_ranking(key: &RankKey, spec: &GridSpec, net: &MultilayerNetwork) -> Result<ActorRanking> {
    let mut params = RankingParams {
        katz_alpha: spec.katz_alpha,
        damping: spec.damping,
        rng_seed: spec.rng_seed,
        greedy: None,
    };
    let method = match key {
        RankKey::Fixed(_, m) => *m,
        RankKey::Random(_, rep) => {
            params.rng_seed = cell_seed(spec, *rep);
            Method::Random
        }
        RankKey::Greedy(_, protocol, mu_bits) => {
            // One greedy run at the largest budget serves every smaller one.
            let n = net.actor_count();
            let max_budget = spec
                .budgets(*protocol)
                .iter()
                .filter_map(|&s| Budget::resolve(s, n).ok())
                .map(|b| b.count)
                .max()
                .ok_or(Error::DegenerateBudget { seeds: 0, actors: n })?;
            let config = SimulationConfig::new(f64::from_bits(*mu_bits), *protocol)?;
            params.greedy = Some((config, max_budget));
            Method::Greedy
        }
    };
    rank(net, method, &params)
}

fn run_cell(
    cell: &Cell,
    spec: &GridSpec,
    net: &MultilayerNetwork,
    ranking: &std::result::Result<ActorRanking, String>,
) -> std::result::Result<ExperimentRecord, String> {
    let ranking = ranking.as_ref().map_err(Clone::clone)?;
    let inner = || -> Result<ExperimentRecord> {
        let budget = Budget::resolve(cell.s, net.actor_count())?;
        let seeds = ranking.seeds(&budget)?;
        let config = SimulationConfig::new(cell.mu, cell.protocol)?;
        let result = simulate(net, &seeds, &config)?;
        Ok(ExperimentRecord {
            network: cell.network.clone(),
            method: cell.method,
            protocol: cell.protocol,
            mu: cell.mu,
            s: cell.s,
            repetition: cell.repetition,
            seed_count: budget.count,
            gain: result.gain,
            diffusion_length: result.diffusion_length,
            truncated: result.truncated,
            rng_seed: cell_seed(spec, cell.repetition),
        })
    };
    inner().map_err(|e| e.to_string())
}

/// Executes every cell of `grid` on `parallelism` worker threads.
///
/// Rankings are computed once per network and method (per repetition for
/// `random`, per mu and protocol for `greedy`) and sliced per budget. A
/// failing cell is reported in `failures` and does not stop the run.
pub fn run_grid(
    grid: &ParameterGrid,
    networks: &BTreeMap<String, MultilayerNetwork>,
    parallelism: usize,
) -> Result<RunOutcome> {
    if parallelism == 0 {
        return Err(Error::InvalidConfig("parallelism must be at least 1".into()));
    }
    if let Some(missing) = grid.spec.networks.iter().find(|n| !networks.contains_key(*n)) {
        return Err(Error::GridConfig(format!("network `{missing}` was not loaded")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let keys: Vec<RankKey> = grid
        .cells
        .iter()
        .map(rank_key)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    log::info!("computing {} rankings for {} cells", keys.len(), grid.len());
    let spec = &grid.spec;
    let rankings: BTreeMap<RankKey, std::result::Result<ActorRanking, String>> = pool.install(|| {
        keys.into_par_iter()
            .map(|key| {
                let name = match &key {
                    RankKey::Fixed(n, _) | RankKey::Random(n, _) | RankKey::Greedy(n, _, _) => n,
                };
                let r = compute_ranking(&key, spec, &networks[name]).map_err(|e| e.to_string());
                (key, r)
            })
            .collect()
    });

    let outcomes: Vec<std::result::Result<ExperimentRecord, CellFailure>> = pool.install(|| {
        grid.cells
            .par_iter()
            .map(|cell| {
                let net = &networks[&cell.network];
                run_cell(cell, spec, net, &rankings[&rank_key(cell)]).map_err(|message| CellFailure {
                    cell: cell.clone(),
                    message,
                })
            })
            .collect()
    });
    let mut records = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => {
                log::warn!(
                    "cell {} {} {} mu={} s={} rep={} failed: {}",
                    f.cell.network,
                    f.cell.method,
                    f.cell.protocol,
                    f.cell.mu,
                    f.cell.s,
                    f.cell.repetition,
                    f.message
                );
                failures.push(f);
            }
        }
    }
    canonical_sort(&mut records);
    log::info!("{} records, {} failures", records.len(), failures.len());
    Ok(RunOutcome { records, failures })
}

/// Loads the named networks from `dir`, trying `NAME` and then
/// `NAME.edges`. With no names, every `*.edges` file is loaded under its
/// file stem.
pub fn load_network_dir(dir: &Path, names: &[String]) -> Result<BTreeMap<String, MultilayerNetwork>> {
    let mut paths: Vec<(String, PathBuf)> = Vec::new();
    if names.is_empty() {
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "edges") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    paths.push((stem.to_owned(), path.clone()));
                }
            }
        }
        if paths.is_empty() {
            return Err(Error::GridConfig(format!("no .edges files in {}", dir.display())));
        }
    } else {
        for name in names {
            let plain = dir.join(name);
            let path = if plain.is_file() {
                plain
            } else {
                dir.join(format!("{name}.edges"))
            };
            paths.push((name.clone(), path));
        }
    }
    paths
        .into_iter()
        .map(|(name, path)| Ok((name, load_network(&path, NetworkFormat::LayerEdgeList)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::build_grid;
    use crate::network::fixtures::fix_a;

    fn nets() -> BTreeMap<String, MultilayerNetwork> {
        BTreeMap::from([("fix-a".to_owned(), fix_a())])
    }

    fn spec(methods: Vec<Method>) -> GridSpec {
        GridSpec {
            methods,
            ..GridSpec::default()
        }
    }

    #[test]
    fn one_cell_composition() {
        let s = GridSpec {
            mu_values: vec![0.4],
            budgets_or: vec![25.0],
            protocols: vec![Protocol::Or],
            ..spec(vec![Method::DegC])
        };
        let grid = build_grid(&s, &["fix-a".to_owned()]).unwrap();
        let out = run_grid(&grid, &nets(), 1).unwrap();
        assert!(out.failures.is_empty());
        let r = &out.records[0];
        assert_eq!((r.gain, r.diffusion_length, r.seed_count), (100.0, 3, 1));
    }

    #[test]
    fn full_table_on_fix_a() {
        let grid = build_grid(&spec(vec![Method::NghbSd]), &["fix-a".to_owned()]).unwrap();
        let out = run_grid(&grid, &nets(), 2).unwrap();
        assert_eq!(out.records.len(), 252);
        assert!(out.failures.is_empty());
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let grid = build_grid(
            &spec(vec![Method::Random, Method::Greedy, Method::Cbim]),
            &["fix-a".to_owned()],
        )
        .unwrap();
        let a = run_grid(&grid, &nets(), 1).unwrap();
        let b = run_grid(&grid, &nets(), 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 252 * 22);
        let reps: std::collections::BTreeSet<u64> = a
            .records
            .iter()
            .filter(|r| r.method == Method::Random)
            .map(|r| r.rng_seed)
            .collect();
        assert_eq!(reps.len(), 20);
    }

    #[test]
    fn cache_matches_fresh_ranking() {
        let net = fix_a();
        let s = spec(vec![Method::KppSh]);
        let cached = compute_ranking(&RankKey::Fixed("fix-a".into(), Method::KppSh), &s, &net).unwrap();
        for pct in [25.0, 50.0, 75.0] {
            let b = Budget::resolve(pct, 4).unwrap();
            let fresh = rank(&net, Method::KppSh, &RankingParams::default()).unwrap();
            assert_eq!(cached.seeds(&b).unwrap(), fresh.seeds(&b).unwrap());
        }
    }

    #[test]
    fn failing_cells_are_quarantined() {
        let s = GridSpec {
            mu_values: vec![0.4],
            budgets_or: vec![1.0, 90.0],
            protocols: vec![Protocol::Or],
            ..spec(vec![Method::DegC])
        };
        let grid = build_grid(&s, &["fix-a".to_owned()]).unwrap();
        let out = run_grid(&grid, &nets(), 1).unwrap();
        assert_eq!(out.records.len() + out.failures.len(), grid.len());
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].cell.s, 90.0);
    }

    #[test]
    fn unknown_network_is_config_error() {
        let grid = build_grid(&spec(vec![Method::DegC]), &["nowhere".to_owned()]).unwrap();
        assert!(matches!(run_grid(&grid, &nets(), 1), Err(Error::GridConfig(_))));
        assert!(run_grid(&grid, &nets(), 0).is_err());
    }
}
