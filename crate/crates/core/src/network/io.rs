//! Layer-edge-list text format.
//!
//! ```text
//! # comment
//! #node <layer> <actor>
//! <layer> <actor> <actor> [ignored trailing tokens]
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{MultilayerNetwork, NetworkBuilder};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NetworkFormat {
    #[default]
    LayerEdgeList,
}

/// Normalisations applied while loading.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

impl LoadReport {
    pub fn warnings(&self) -> usize {
        self.self_loops + self.duplicate_edges
    }
}

pub fn read_network<R: BufRead>(reader: R) -> Result<(MultilayerNetwork, LoadReport)> {
    let mut builder = NetworkBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        let mut tokens = line.split_whitespace();
        let Some(first) = tokens.next() else {
            continue;
        };
        let malformed = |message: &str| Error::Parse {
            line: line_no,
            message: message.to_owned(),
        };
        if first == "#node" {
            let (Some(layer), Some(actor)) = (tokens.next(), tokens.next()) else {
                return Err(malformed("expected `#node <layer> <actor>`"));
            };
            builder.add_node(layer, actor).map_err(|e| malformed(&e.to_string()))?;
            continue;
        }
        if first.starts_with('#') {
            continue;
        }
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(malformed("expected `<layer> <actor> <actor>`"));
        };
        builder.add_edge(first, a, b).map_err(|e| malformed(&e.to_string()))?;
    }
    let report = builder.report();
    Ok((builder.build()?, report))
}

pub fn load_network(path: impl AsRef<Path>, format: NetworkFormat) -> Result<MultilayerNetwork> {
    let path = path.as_ref();
    let NetworkFormat::LayerEdgeList = format;
    let (net, report) = read_network(BufReader::new(File::open(path)?))?;
    if report.warnings() > 0 {
        log::warn!(
            "{}: dropped {} self-loops and {} duplicate edges",
            path.display(),
            report.self_loops,
            report.duplicate_edges
        );
    }
    Ok(net)
}

/// Writes edges per layer followed by `#node` lines for isolated nodes.
pub fn write_network<W: Write>(net: &MultilayerNetwork, mut out: W) -> Result<()> {
    for layer in net.layers() {
        for (u, v) in layer.edges() {
            writeln!(out, "{} {} {}", layer.id(), net.actor(u), net.actor(v))?;
        }
        for a in layer.nodes().filter(|&a| layer.degree(a) == 0) {
            writeln!(out, "#node {} {}", layer.id(), net.actor(a))?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn save_network(net: &MultilayerNetwork, path: impl AsRef<Path>) -> Result<()> {
    write_network(net, BufWriter::new(File::create(path)?))
}
