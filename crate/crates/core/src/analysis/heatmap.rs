use std::collections::BTreeMap;
use std::io::{Read, Write};

use ordered_float::OrderedFloat;

use crate::diffusion::Protocol;
use crate::error::{Error, Result};
use crate::experiment::ExperimentRecord;
use crate::scalar::Scalar;
use crate::seeding::Method;

/// Values over the (mu, s) plane; `cells[i][j]` belongs to `mu_axis[i]` and
/// `s_axis[j]`, `None` marks a missing cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap<T = f64> {
    pub mu_axis: Vec<f64>,
    pub s_axis: Vec<f64>,
    pub cells: Vec<Vec<Option<T>>>,
}

fn strictly_ascending(axis: &[f64]) -> bool {
    axis.windows(2).all(|w| w[0] < w[1]) && axis.iter().all(|v| v.is_finite())
}

impl<T: Scalar> Heatmap<T> {
    pub fn new(mu_axis: Vec<f64>, s_axis: Vec<f64>, cells: Vec<Vec<Option<T>>>) -> Result<Self> {
        if !strictly_ascending(&mu_axis) || !strictly_ascending(&s_axis) {
            return Err(Error::Shape("heatmap axes must be strictly ascending".into()));
        }
        if cells.len() != mu_axis.len() || cells.iter().any(|row| row.len() != s_axis.len()) {
            return Err(Error::Shape(format!(
                "cells do not form a {}x{} grid",
                mu_axis.len(),
                s_axis.len()
            )));
        }
        Ok(Self { mu_axis, s_axis, cells })
    }

    pub fn from_fn(mu_axis: Vec<f64>, s_axis: Vec<f64>, f: impl Fn(f64, f64) -> T) -> Result<Self> {
        let cells = mu_axis
            .iter()
            .map(|&mu| s_axis.iter().map(|&s| Some(f(mu, s))).collect())
            .collect();
        Self::new(mu_axis, s_axis, cells)
    }

    pub fn rows(&self) -> usize {
        self.mu_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.s_axis.len()
    }

    pub fn get(&self, mu_index: usize, s_index: usize) -> Option<T> {
        self.cells[mu_index][s_index]
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().flatten().all(Option::is_some)
    }

    /// Cell values without holes, or a shape error.
    pub fn dense(&self) -> Result<Vec<Vec<T>>> {
        self.cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.ok_or_else(|| Error::Shape("heatmap has missing cells".into())))
                    .collect()
            })
            .collect()
    }

    /// Values in row-major (mu, then s) order, skipping holes.
    pub fn values(&self) -> Vec<T> {
        self.cells.iter().flatten().flatten().copied().collect()
    }

    /// Mean over the present cells.
    pub fn summary(&self) -> Result<T> {
        let v = self.values();
        if v.is_empty() {
            return Err(Error::Aggregation("heatmap has no cells".into()));
        }
        Ok(v.iter().copied().sum::<T>() / T::count(v.len()))
    }

    /// `mu,s,value` rows in row-major order; holes are left out.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["mu", "s", "value"])?;
        for (i, &mu) in self.mu_axis.iter().enumerate() {
            for (j, &s) in self.s_axis.iter().enumerate() {
                if let Some(v) = self.cells[i][j] {
                    w.write_record([mu.to_string(), s.to_string(), v.to_string()])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        if rd.headers()?.iter().ne(["mu", "s", "value"]) {
            return Err(Error::Format("heatmap CSV must have header mu,s,value".into()));
        }
        let mut values = BTreeMap::new();
        for row in rd.records() {
            let row = row?;
            let num = |i: usize| -> Result<f64> {
                row[i]
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("`{}`: {e}", &row[i])))
            };
            values.insert((OrderedFloat(num(0)?), OrderedFloat(num(1)?)), T::lit(num(2)?));
        }
        from_cell_map(&values)
    }
}

fn from_cell_map<T: Scalar>(values: &BTreeMap<(OrderedFloat<f64>, OrderedFloat<f64>), T>) -> Result<Heatmap<T>> {
    let mut mu_axis: Vec<f64> = values.keys().map(|k| k.0 .0).collect();
    mu_axis.dedup();
    let mut s_axis: Vec<f64> = values.keys().map(|k| k.1 .0).collect();
    s_axis.sort_by(f64::total_cmp);
    s_axis.dedup();
    let cells = mu_axis
        .iter()
        .map(|&mu| {
            s_axis
                .iter()
                .map(|&s| values.get(&(OrderedFloat(mu), OrderedFloat(s))).copied())
                .collect()
        })
        .collect();
    Heatmap::new(mu_axis, s_axis, cells)
}

/// A (network, method, protocol) slice of the results.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group {
    pub network: String,
    pub method: Method,
    pub protocol: Protocol,
}

impl Group {
    pub fn of(r: &ExperimentRecord) -> Self {
        Self {
            network: r.network.clone(),
            method: r.method,
            protocol: r.protocol,
        }
    }

    pub fn matches(&self, r: &ExperimentRecord) -> bool {
        r.network == self.network && r.method == self.method && r.protocol == self.protocol
    }
}

/// Distinct groups, sorted.
pub fn groups(records: &[ExperimentRecord]) -> Vec<Group> {
    let set: std::collections::BTreeSet<Group> = records.iter().map(Group::of).collect();
    set.into_iter().collect()
}

/// Mean gain and mean diffusion length per (mu, s) over the group's
/// repetitions.
pub fn mean_heatmaps(records: &[ExperimentRecord], group: &Group) -> Result<(Heatmap<f64>, Heatmap<f64>)> {
    let mut sums: BTreeMap<(OrderedFloat<f64>, OrderedFloat<f64>), (f64, f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| group.matches(r)) {
        let e = sums.entry((OrderedFloat(r.mu), OrderedFloat(r.s))).or_default();
        e.0 += r.gain;
        e.1 += r.diffusion_length as f64;
        e.2 += 1;
    }
    if sums.is_empty() {
        return Err(Error::Aggregation(format!(
            "no records for {} / {} / {}",
            group.network, group.method, group.protocol
        )));
    }
    let gain = sums.iter().map(|(k, v)| (*k, v.0 / v.2 as f64)).collect();
    let length = sums.iter().map(|(k, v)| (*k, v.1 / v.2 as f64)).collect();
    Ok((from_cell_map(&gain)?, from_cell_map(&length)?))
}

/// Central differences on cell indices (one-sided at the borders); returns
/// the Euclidean norm of the two partials per cell.
pub fn gradient_magnitude<T: Scalar>(h: &Heatmap<T>) -> Result<Vec<Vec<T>>> {
    let (rows, cols) = (h.rows(), h.cols());
    if rows < 2 || cols < 2 {
        return Err(Error::Shape(format!(
            "gradient needs at least 2x2 cells, got {rows}x{cols}"
        )));
    }
    let c = h.dense()?;
    let diff = |lo: T, hi: T, span: usize| (hi - lo) / T::count(span);
    let partial = |len: usize, k: usize, at: &dyn Fn(usize) -> T| match k {
        0 => diff(at(0), at(1), 1),
        k if k == len - 1 => diff(at(k - 1), at(k), 1),
        k => diff(at(k - 1), at(k + 1), 2),
    };
    Ok((0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let d_mu = partial(rows, i, &|r| c[r][j]);
                    let d_s = partial(cols, j, &|col| c[i][col]);
                    (d_mu * d_mu + d_s * d_s).sqrt()
                })
                .collect()
        })
        .collect())
}
