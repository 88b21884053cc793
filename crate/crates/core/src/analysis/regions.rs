//! Plateau regions of a gain heatmap, their boundaries, and the
//! logarithmic efficiency curve fitted to a boundary.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::heatmap::{gradient_magnitude, Heatmap};

pub const GRADIENT_THRESHOLD: f64 = 10.0;
pub const EFFECTIVE_MIN: f64 = 90.0;
pub const INEFFECTIVE_MAX: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionClass {
    Effective,
    Transitional,
    Ineffective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryKind {
    EffectiveTransitional,
    TransitionalIneffective,
}

impl BoundaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::EffectiveTransitional => "effective-transitional",
            BoundaryKind::TransitionalIneffective => "transitional-ineffective",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Region labelling of a heatmap. Cells with a steep gradient are left
/// unlabelled (`None`).
#[derive(Clone, Debug, PartialEq)]
pub struct RegionMap {
    pub labels: Vec<Vec<Option<RegionClass>>>,
    pub component: Vec<Vec<Option<usize>>>,
    pub component_count: usize,
    /// `(s, mu)` boundary points.
    pub effective_transitional: Vec<(f64, f64)>,
    pub transitional_ineffective: Vec<(f64, f64)>,
}

impl RegionMap {
    pub fn boundary(&self, kind: BoundaryKind) -> &[(f64, f64)] {
        match kind {
            BoundaryKind::EffectiveTransitional => &self.effective_transitional,
            BoundaryKind::TransitionalIneffective => &self.transitional_ineffective,
        }
    }

    pub fn classes(&self) -> std::collections::BTreeSet<RegionClass> {
        self.labels.iter().flatten().flatten().copied().collect()
    }
}

fn classify<T: Scalar>(mean_gain: T) -> RegionClass {
    if mean_gain >= T::lit(EFFECTIVE_MIN) {
        RegionClass::Effective
    } else if mean_gain <= T::lit(INEFFECTIVE_MAX) {
        RegionClass::Ineffective
    } else {
        RegionClass::Transitional
    }
}

/// Masks cells whose gradient magnitude exceeds `grad_threshold`, labels the
/// 4-connected low-gradient components by their mean gain and collects, per
/// s column, the mu midpoints between consecutive labelled cells of
/// different class.
///
/// A direct effective/ineffective transition (no transitional cells in
/// between) is reported with the effective-transitional points, since it
/// is the boundary of the effective region.
pub fn extract_regions_and_boundary<T: Scalar>(h: &Heatmap<T>, grad_threshold: T) -> Result<RegionMap> {
    let grad = gradient_magnitude(h)?;
    let values = h.dense()?;
    let (rows, cols) = (h.rows(), h.cols());
    let low = |i: usize, j: usize| grad[i][j] <= grad_threshold;

    let mut component = vec![vec![None; cols]; rows];
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if !low(i, j) || component[i][j].is_some() {
                continue;
            }
            let id = members.len();
            let mut stack = vec![(i, j)];
            let mut cells = Vec::new();
            component[i][j] = Some(id);
            while let Some((a, b)) = stack.pop() {
                cells.push((a, b));
                let mut next = Vec::with_capacity(4);
                if a > 0 {
                    next.push((a - 1, b));
                }
                if a + 1 < rows {
                    next.push((a + 1, b));
                }
                if b > 0 {
                    next.push((a, b - 1));
                }
                if b + 1 < cols {
                    next.push((a, b + 1));
                }
                for (x, y) in next {
                    if low(x, y) && component[x][y].is_none() {
                        component[x][y] = Some(id);
                        stack.push((x, y));
                    }
                }
            }
            members.push(cells);
        }
    }
    let class_of: Vec<RegionClass> = members
        .iter()
        .map(|cells| {
            let sum: T = cells.iter().map(|&(a, b)| values[a][b]).sum();
            classify(sum / T::count(cells.len()))
        })
        .collect();
    let labels: Vec<Vec<Option<RegionClass>>> = component
        .iter()
        .map(|row| row.iter().map(|c| c.map(|id| class_of[id])).collect())
        .collect();

    let distinct: std::collections::BTreeSet<RegionClass> = class_of.iter().copied().collect();
    if distinct.len() < 2 {
        return Err(Error::NoBoundary(format!(
            "only {} region class(es) found",
            distinct.len()
        )));
    }

    let mut et = Vec::new();
    let mut ti = Vec::new();
    for j in 0..cols {
        let labelled: Vec<(usize, RegionClass)> = (0..rows).filter_map(|i| labels[i][j].map(|c| (i, c))).collect();
        for w in labelled.windows(2) {
            let ((i0, c0), (i1, c1)) = (w[0], w[1]);
            if c0 == c1 {
                continue;
            }
            let point = (h.s_axis[j], (h.mu_axis[i0] + h.mu_axis[i1]) / 2.0);
            let pair = if c0 < c1 { (c0, c1) } else { (c1, c0) };
            match pair {
                (RegionClass::Transitional, RegionClass::Ineffective) => ti.push(point),
                _ => et.push(point),
            }
        }
    }
    Ok(RegionMap {
        labels,
        component,
        component_count: members.len(),
        effective_transitional: et,
        transitional_ineffective: ti,
    })
}

/// `mu = alpha * ln(s) + beta` fitted by least squares.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyCurve<T = f64> {
    pub alpha: T,
    pub alpha_se: T,
    pub beta: T,
    pub beta_se: T,
    /// Root mean squared residual.
    pub rms_error: T,
    pub boundary: BoundaryKind,
    pub points: usize,
}

impl<T: Scalar> EfficiencyCurve<T> {
    pub fn predict(&self, s: T) -> T {
        self.alpha * s.ln() + self.beta
    }
}

/// Ordinary least squares of mu on ln(s) over `(s, mu)` points. Standard
/// errors use the residual variance with `n - 2` degrees of freedom.
pub fn fit_log_curve<T: Scalar>(points: &[(T, T)], boundary: BoundaryKind) -> Result<EfficiencyCurve<T>> {
    if points.len() < 3 {
        return Err(Error::InsufficientSample {
            required: 3,
            got: points.len(),
        });
    }
    if let Some((s, _)) = points
        .iter()
        .find(|(s, mu)| !(*s > T::zero()) || !mu.is_finite() || !s.is_finite())
    {
        return Err(Error::Fit(format!("budget {s} must be positive and finite")));
    }
    let n = T::count(points.len());
    let xs: Vec<T> = points.iter().map(|(s, _)| s.ln()).collect();
    let ys: Vec<T> = points.iter().map(|&(_, mu)| mu).collect();
    let x_mean = xs.iter().copied().sum::<T>() / n;
    let y_mean = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(&x, &y)| (x - x_mean) * (y - y_mean)).sum();
    if sxx <= T::epsilon() * n {
        return Err(Error::Fit("all budgets are equal; the slope is undetermined".into()));
    }
    let alpha = sxy / sxx;
    let beta = y_mean - alpha * x_mean;
    let rss: T = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (alpha * x + beta);
            r * r
        })
        .sum();
    let sigma2 = rss / (n - T::lit(2.0));
    Ok(EfficiencyCurve {
        alpha,
        alpha_se: (sigma2 / sxx).sqrt(),
        beta,
        beta_se: (sigma2 * (T::one() / n + x_mean * x_mean / sxx)).sqrt(),
        rms_error: (rss / n).sqrt(),
        boundary,
        points: points.len(),
    })
}

/// One fitted curve with the group it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub method: String,
    pub network: String,
    pub protocol: String,
    pub curve: EfficiencyCurve<f64>,
}

pub fn write_curves<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method", "network", "protocol", "boundary", "alpha", "alpha_se", "beta", "beta_se", "rms",
    ])?;
    for r in rows {
        let c = &r.curve;
        w.write_record([
            r.method.clone(),
            r.network.clone(),
            r.protocol.clone(),
            c.boundary.to_string(),
            c.alpha.to_string(),
            c.alpha_se.to_string(),
            c.beta.to_string(),
            c.beta_se.to_string(),
            c.rms_error.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
