use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mltm::analysis::{
    extract_regions_and_boundary, fit_log_curve, group_summaries, groups, jaccard_similarity_curve, mean_heatmaps,
    ranking_tensor, similarity_matrix, write_curves, write_group_means, write_heatmap_svg, write_jaccard_curve,
    BoundaryKind, CurveRow, GRADIENT_THRESHOLD,
};
use mltm::diffusion::SimulationConfig;
use mltm::experiment::{build_grid, load_network_dir, load_records, persist, run_grid, GridSpec};
use mltm::{load_network, rank as rank_actors, Budget, Error, Method, MultilayerNetwork, NetworkFormat, RankingParams};

use super::{AnalyzeArgs, Artifact, GridArgs, RankArgs, SimulateArgs};

/// Error with the process exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let runtime = matches!(
            error,
            Error::NonConvergence { .. }
                | Error::KatzDivergence { .. }
                | Error::Consistency(_)
                | Error::Aggregation(_)
                | Error::InsufficientSample { .. }
                | Error::Shape(_)
                | Error::NoBoundary(_)
                | Error::Fit(_)
                | Error::Coverage(_)
        );
        Failure {
            code: if runtime { 1 } else { 2 },
            error,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("network")
        .to_owned()
}

fn load(path: &Path) -> Result<MultilayerNetwork, Failure> {
    Ok(load_network(path, NetworkFormat::LayerEdgeList)?)
}

pub fn net_info(network: &Path) -> CmdResult {
    println!("{}", load(network)?.stats());
    Ok(())
}

pub fn rank(args: RankArgs, seed: Option<u64>) -> CmdResult {
    let net = load(&args.network)?;
    let method: Method = args.method.parse()?;
    let seed = seed.unwrap_or(mltm::DEFAULT_SEED);
    let budget = args
        .budget
        .map(|pct| Budget::resolve(pct, net.actor_count()))
        .transpose()?;
    let mut params = RankingParams {
        katz_alpha: args.katz_alpha,
        damping: args.damping,
        rng_seed: seed,
        greedy: None,
    };
    if method == Method::Greedy {
        let (Some(mu), Some(b)) = (args.mu, budget) else {
            return Err(Error::InvalidConfig("greedy needs --mu and --budget".into()).into());
        };
        params.greedy = Some((SimulationConfig::new(mu, args.protocol.into())?, b.count));
    }
    if method.is_stochastic() {
        eprintln!("seed: {seed}");
    }
    let ranking = rank_actors(&net, method, &params)?;
    let name = stem(&args.network);
    let limit = budget.map(|b| b.count);
    match &args.out {
        Some(path) => ranking.write_csv(&net, &name, limit, fs::File::create(path)?)?,
        None => ranking.write_csv(&net, &name, limit, std::io::stdout().lock())?,
    }
    Ok(())
}

pub fn simulate(args: SimulateArgs, seed: Option<u64>) -> CmdResult {
    let net = load(&args.network)?;
    let seeds = net.actor_indices(&args.seeds)?;
    let mut config = SimulationConfig::new(args.mu, args.protocol.into())?;
    config.max_steps = args.max_steps;
    config.validate()?;
    let result = mltm::simulate(&net, &seeds, &config)?;
    let mut value = serde_json::to_value(result.to_record(&net)).map_err(Error::from)?;
    if let Some(obj) = value.as_object_mut() {
        obj.insert("network".into(), stem(&args.network).into());
        obj.insert("mu".into(), args.mu.into());
        obj.insert("protocol".into(), mltm::Protocol::from(args.protocol).as_str().into());
        obj.insert("rng_seed".into(), seed.unwrap_or(mltm::DEFAULT_SEED).into());
    }
    println!("{}", serde_json::to_string_pretty(&value).map_err(Error::from)?);
    Ok(())
}

fn collect_networks(
    nets: Option<&Path>,
    files: &[PathBuf],
    names: &[String],
) -> Result<BTreeMap<String, MultilayerNetwork>, Failure> {
    let mut out = BTreeMap::new();
    for f in files {
        out.insert(stem(f), load(f)?);
    }
    if let Some(dir) = nets {
        let wanted: Vec<String> = names.iter().filter(|n| !out.contains_key(*n)).cloned().collect();
        if names.is_empty() || !wanted.is_empty() {
            out.extend(load_network_dir(dir, &wanted)?);
        }
    }
    Ok(out)
}

pub fn grid(args: GridArgs, seed: Option<u64>) -> CmdResult {
    let mut spec = match &args.grid {
        Some(path) => GridSpec::load(path)?,
        None => GridSpec::default(),
    };
    if let Some(s) = seed {
        spec.rng_seed = s;
    }
    if args.nets.is_none() && args.network.is_empty() {
        return Err(Error::GridConfig("give --nets DIR or --network PATH".into()).into());
    }
    let networks = collect_networks(args.nets.as_deref(), &args.network, &spec.networks)?;
    let names: Vec<String> = networks.keys().cloned().collect();
    let grid = build_grid(&spec, &names)?;
    eprintln!("seed: {}", grid.spec.rng_seed);
    eprintln!(
        "running {} cells over {} network(s)",
        grid.len(),
        grid.spec.networks.len()
    );
    let outcome = run_grid(&grid, &networks, args.parallel)?;

    fs::create_dir_all(&args.out)?;
    persist(&outcome.records, &args.out.join("results.csv"))?;
    fs::write(
        args.out.join("grid.json"),
        serde_json::to_string_pretty(&grid.spec).map_err(Error::from)? + "\n",
    )?;
    let mut w = csv::Writer::from_path(args.out.join("failures.csv")).map_err(Error::from)?;
    w.write_record(["network", "method", "protocol", "mu", "s", "repetition", "message"])
        .map_err(Error::from)?;
    for f in &outcome.failures {
        let c = &f.cell;
        w.write_record([
            c.network.clone(),
            c.method.to_string(),
            c.protocol.to_string(),
            c.mu.to_string(),
            c.s.to_string(),
            c.repetition.to_string(),
            f.message.clone(),
        ])
        .map_err(Error::from)?;
    }
    w.flush()?;
    eprintln!(
        "{} records written, {} failed cells",
        outcome.records.len(),
        outcome.failures.len()
    );
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> mltm::Result<()>) -> CmdResult {
    let mut buf = Vec::new();
    f(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn analyze(args: AnalyzeArgs, seed: Option<u64>) -> CmdResult {
    let records = load_records(&args.results)?;
    if records.is_empty() {
        return Err(Error::Format(format!("{} holds no records", args.results.display())).into());
    }
    let mut which = args.which.clone();
    let explicit_jaccard = which.contains(&Artifact::Jaccard);
    if which.is_empty() {
        which = vec![
            Artifact::Heatmaps,
            Artifact::Wilcoxon,
            Artifact::Rankings,
            Artifact::Curves,
            Artifact::Jaccard,
        ];
    }
    which.sort();
    which.dedup();
    fs::create_dir_all(&args.out)?;
    let mut failed: Option<Failure> = None;
    for artifact in which {
        let outcome = match artifact {
            Artifact::Heatmaps => heatmaps(&records, &args.out),
            Artifact::Wilcoxon => wilcoxon(&records, &args.out),
            Artifact::Rankings => rankings(&records, &args.out),
            Artifact::Curves => curves(&records, &args.out),
            Artifact::Jaccard => jaccard(&records, &args, seed, explicit_jaccard),
        };
        if let Err(e) = outcome {
            eprintln!("{artifact:?} failed: {}", e.error);
            if failed.as_ref().is_none_or(|f| e.code > f.code) {
                failed = Some(e);
            }
        }
    }
    failed.map_or(Ok(()), Err)
}

fn group_stem(g: &mltm::analysis::Group) -> String {
    format!("{}_{}_{}", g.network, g.method, g.protocol)
}

fn heatmaps(records: &[mltm::experiment::ExperimentRecord], out: &Path) -> CmdResult {
    let dir = out.join("heatmaps");
    fs::create_dir_all(&dir)?;
    for g in groups(records) {
        let (gain, length) = mean_heatmaps(records, &g)?;
        let base = group_stem(&g);
        write_file(&dir.join(format!("{base}_gain.csv")), |w| gain.write_csv(w))?;
        write_file(&dir.join(format!("{base}_dl.csv")), |w| length.write_csv(w))?;
        write_heatmap_svg(
            &gain,
            &format!("G: {base}"),
            Some((0.0, 100.0)),
            &dir.join(format!("{base}_gain.svg")),
        )?;
        write_heatmap_svg(
            &length,
            &format!("DL: {base}"),
            None,
            &dir.join(format!("{base}_dl.svg")),
        )?;
    }
    let summaries = group_summaries(records)?;
    write_file(&out.join("summary.csv"), |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["network", "method", "protocol", "mean_gain", "mean_dl"])?;
        for (g, gain, dl) in &summaries {
            w.write_record([
                g.network.clone(),
                g.method.to_string(),
                g.protocol.to_string(),
                gain.to_string(),
                dl.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })
}

fn wilcoxon(records: &[mltm::experiment::ExperimentRecord], out: &Path) -> CmdResult {
    for protocol in mltm::Protocol::ALL {
        if !records.iter().any(|r| r.protocol == protocol) {
            continue;
        }
        let m = similarity_matrix(records, protocol)?;
        let name = format!("wilcoxon_{}.csv", protocol.as_str().to_lowercase());
        write_file(&out.join(name), |w| m.write_csv(w))?;
    }
    Ok(())
}

fn rankings(records: &[mltm::experiment::ExperimentRecord], out: &Path) -> CmdResult {
    let tensor = ranking_tensor(records)?;
    write_file(&out.join("rankings.csv"), |w| {
        write_group_means(&tensor.group_means(), w)
    })
}

fn curves(records: &[mltm::experiment::ExperimentRecord], out: &Path) -> CmdResult {
    let mut rows = Vec::new();
    for g in groups(records) {
        let (gain, _) = mean_heatmaps(records, &g)?;
        let regions = match extract_regions_and_boundary(&gain, GRADIENT_THRESHOLD) {
            Ok(r) => r,
            Err(e @ (Error::NoBoundary(_) | Error::Shape(_))) => {
                eprintln!("{}: {e}", group_stem(&g));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for kind in [
            BoundaryKind::EffectiveTransitional,
            BoundaryKind::TransitionalIneffective,
        ] {
            let points = regions.boundary(kind);
            match fit_log_curve(points, kind) {
                Ok(curve) => rows.push(CurveRow {
                    method: g.method.to_string(),
                    network: g.network.clone(),
                    protocol: g.protocol.to_string(),
                    curve,
                }),
                Err(e) if !points.is_empty() => eprintln!("{} {kind}: {e}", group_stem(&g)),
                Err(_) => {}
            }
        }
    }
    eprintln!("{} efficiency curve(s) fitted", rows.len());
    write_file(&out.join("curves.csv"), |w| write_curves(&rows, w))
}

fn jaccard(
    records: &[mltm::experiment::ExperimentRecord],
    args: &AnalyzeArgs,
    seed: Option<u64>,
    explicit: bool,
) -> CmdResult {
    if args.nets.is_none() && args.network.is_empty() {
        if explicit {
            return Err(Error::InvalidConfig("jaccard needs --nets DIR or --network PATH".into()).into());
        }
        eprintln!("jaccard skipped: no networks given");
        return Ok(());
    }
    let names: Vec<String> = records
        .iter()
        .map(|r| r.network.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let networks = collect_networks(args.nets.as_deref(), &args.network, &names)?;
    let seed = seed.unwrap_or(mltm::DEFAULT_SEED);
    eprintln!("seed: {seed}");
    let mut buf = Vec::new();
    let mut header = true;
    for (name, net) in &networks {
        let here: Vec<_> = records.iter().filter(|r| &r.network == name).collect();
        let methods: std::collections::BTreeSet<Method> =
            here.iter().map(|r| r.method).filter(|&m| m != Method::Greedy).collect();
        let mut budgets: Vec<f64> = here.iter().map(|r| r.s).collect();
        budgets.sort_by(f64::total_cmp);
        budgets.dedup();
        let budgets: Vec<Budget> = budgets
            .into_iter()
            .filter_map(|s| Budget::resolve(s, net.actor_count()).ok())
            .collect();
        let params = RankingParams {
            rng_seed: seed,
            ..RankingParams::default()
        };
        let rankings = methods
            .iter()
            .map(|&m| rank_actors(net, m, &params))
            .collect::<mltm::Result<Vec<_>>>()?;
        let points = jaccard_similarity_curve(&rankings, &budgets)?;
        let mut part = Vec::new();
        write_jaccard_curve(&points, name, &mut part)?;
        let text = String::from_utf8_lossy(&part);
        let body = if header {
            &text[..]
        } else {
            text.split_once('\n').map_or("", |(_, b)| b)
        };
        buf.write_all(body.as_bytes())?;
        header = false;
    }
    fs::write(args.out.join("jaccard.csv"), buf)?;
    Ok(())
}
