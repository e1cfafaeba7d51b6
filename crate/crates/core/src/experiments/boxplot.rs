use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Quartiles interpolate linearly between order statistics at position
/// `(n - 1)·q`. NaNs sort last.
pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats> {
    if values.is_empty() {
        return Err(LabError::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = (v.len() - 1) as f64 * p;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        if lo == hi {
            v[lo]
        } else {
            v[lo] + (v[hi] - v[lo]) * frac
        }
    };
    Ok(BoxplotStats {
        n: v.len(),
        min: v[0],
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: v[v.len() - 1],
        mean: v.iter().sum::<f64>() / v.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_count() {
        let s = boxplot_stats(&[5.0, 3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.n, 5);
    }

    #[test]
    fn single_value() {
        let s = boxplot_stats(&[7.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max, s.mean),
            (7.0, 7.0, 7.0, 7.0, 7.0, 7.0)
        );
    }

    #[test]
    fn interpolated_quartiles() {
        let s = boxplot_stats(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(boxplot_stats(&[]), Err(LabError::EmptyInput)));
    }

    #[test]
    fn infinite_values_sort_last() {
        let s = boxplot_stats(&[1.0, f64::INFINITY, 2.0]).unwrap();
        assert_eq!(s.median, 2.0);
        assert_eq!(s.max, f64::INFINITY);
    }
}
