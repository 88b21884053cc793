use std::cmp::Ordering;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MIN_SAMPLE: usize = 5;

/// Berry–Esseen constant for sums of independent, non-identically
/// distributed summands (Shevtsova, 2010).
const BERRY_ESSEEN: f64 = 0.56;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WilcoxonResult<T = f64> {
    /// `min(R+, R-)` with the ranks of zero differences split evenly.
    pub statistic: T,
    pub z: T,
    /// Two-sided, in `[0, 1]`.
    pub p_value: T,
    pub n: usize,
}

fn cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| cmp(&values[a], &values[b]));
    let mut ranks = vec![T::zero(); values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j share rank (i + j) / 2 + 1.
        let rank = T::count(i + j + 2) / T::lit(2.0);
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn abs_differences<T: Scalar>(x: &[T], y: &[T]) -> Result<Vec<T>> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "paired samples differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < MIN_SAMPLE {
        return Err(Error::InsufficientSample {
            required: MIN_SAMPLE,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Aggregation("samples must be finite".into()));
    }
    Ok(x.iter().zip(y).map(|(&a, &b)| a - b).collect())
}

/// Wilcoxon signed-rank test keeping zero differences: their ranks count
/// half towards each signed sum. The p-value is two-sided and uses the
/// normal approximation with the tie-corrected variance.
pub fn wilcoxon_signed_rank<T: Scalar>(x: &[T], y: &[T]) -> Result<WilcoxonResult<T>> {
    let d = abs_differences(x, y)?;
    let n = d.len();
    let abs: Vec<T> = d.iter().map(|v| v.abs()).collect();
    let ranks = average_ranks(&abs);
    let half = T::lit(0.5);
    let (mut plus, mut minus) = (T::zero(), T::zero());
    for (&v, &r) in d.iter().zip(&ranks) {
        match cmp(&v, &T::zero()) {
            Ordering::Greater => plus = plus + r,
            Ordering::Less => minus = minus + r,
            Ordering::Equal => {
                plus = plus + r * half;
                minus = minus + r * half;
            }
        }
    }
    let statistic = plus.min(minus);

    let nf = T::count(n);
    let mean = nf * (nf + T::one()) / T::lit(4.0);
    let mut sorted = abs.clone();
    sorted.sort_by(cmp);
    let mut tie_term = T::zero();
    let mut i = 0;
    while i < n {
        let j = (i..n).take_while(|&k| sorted[k] == sorted[i]).count();
        let t = T::count(j);
        tie_term = tie_term + t * (t * t - T::one());
        i += j;
    }
    let var = (nf * (nf + T::one()) * (T::lit(2.0) * nf + T::one()) - half * tie_term) / T::lit(24.0);
    let z = if statistic == mean || var <= T::zero() {
        T::zero()
    } else {
        (statistic - mean) / var.sqrt()
    };
    let p_value = if z == T::zero() {
        T::one()
    } else {
        T::lit(erfc(z.abs().to_f64_lossy() / std::f64::consts::SQRT_2))
            .max(T::zero())
            .min(T::one())
    };
    Ok(WilcoxonResult {
        statistic,
        z,
        p_value,
        n,
    })
}

/// Worst-case gap between the normal-approximation p-value and the exact
/// p-value of the signed-rank permutation distribution, where every rank
/// (zero differences included) carries an independent fair sign.
///
/// The signed sum is a sum of independent summands `r_i * (e_i - 1/2)`, so
/// the Berry–Esseen bound `C * sum r^3 / (sum r^2)^(3/2)` applies to each
/// tail; the two-sided p-value doubles it.
pub fn normal_approximation_bound<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    let d = abs_differences(x, y)?;
    let abs: Vec<T> = d.iter().map(|v| v.abs()).collect();
    let ranks = average_ranks(&abs);
    let cubes: T = ranks.iter().map(|&r| r * r * r).sum();
    let squares: T = ranks.iter().map(|&r| r * r).sum();
    let bound = T::lit(2.0 * BERRY_ESSEEN) * cubes / squares.powf(T::lit(1.5));
    Ok(bound.min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(average_ranks(&[0.0f64; 4]), vec![2.5; 4]);
    }

    #[test]
    fn identical_samples_give_p_one() {
        let x = [1.0, 5.0, 2.0, 2.0, 9.0, 3.0];
        let r = wilcoxon_signed_rank(&x, &x).unwrap();
        assert_eq!(r.z, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.statistic, 21.0 / 2.0);
    }

    #[test]
    fn shifted_samples_are_significant() {
        let x: Vec<f64> = (1..=8).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| v + 10.0).collect();
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.p_value < 0.05);
        // Exact: both extreme sign patterns out of 2^8.
        assert!((r.p_value - 2.0 / 256.0).abs() <= normal_approximation_bound(&x, &y).unwrap());
    }

    #[test]
    fn symmetric_in_argument_order() {
        let x = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0];
        let y = [2.0, 1.0, 2.0, 3.0, 9.0, 1.0, 0.0];
        let a = wilcoxon_signed_rank(&x, &y).unwrap();
        let b = wilcoxon_signed_rank(&y, &x).unwrap();
        assert_eq!(a.statistic, b.statistic);
        assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn matches_reference_normal_approximation() {
        // Reference computed by hand: d = [1,-2,3,4,5,0], |d| ranks
        // [2,3,4,5,6,1]; R+ = 2+4+5+6+0.5 = 17.5, R- = 3+0.5 = 3.5.
        let x = [2.0, 0.0, 6.0, 8.0, 10.0, 1.0];
        let y = [1.0, 2.0, 3.0, 4.0, 5.0, 1.0];
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.statistic, 3.5);
        let se = (6.0f64 * 7.0 * 13.0 / 24.0).sqrt();
        assert!((r.z - (3.5 - 10.5) / se).abs() < 1e-12);
        assert!((r.p_value - erfc((7.0 / se) / std::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_or_ragged_samples() {
        assert!(matches!(
            wilcoxon_signed_rank(&[1.0; 4], &[2.0; 4]),
            Err(Error::InsufficientSample { required: 5, got: 4 })
        ));
        assert!(matches!(
            wilcoxon_signed_rank(&[1.0; 6], &[2.0; 5]),
            Err(Error::Shape(_))
        ));
        assert!(wilcoxon_signed_rank(&[f64::NAN; 5], &[2.0; 5]).is_err());
    }

    #[test]
    fn f32_agrees() {
        let x = [2.0f32, 0.0, 6.0, 8.0, 10.0, 1.0];
        let y = [1.0f32, 2.0, 3.0, 4.0, 5.0, 1.0];
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.statistic, 3.5);
    }
}
