//! Edge-burst quantifiers computed from a decay distribution.

use crate::dynamics::DecayDistribution;
use crate::error::{Error, Result};

/// Default cut on `P_1 / P_min` separating an edge burst from its absence.
pub const EDGE_BURST_THRESHOLD: f64 = 5.0;

const PMIN_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBurstMetrics {
    /// `P_1 / min{P_1, ..., P_S}`; at least 1 since `P_1` is in the set.
    pub p1_over_pmin: f64,
    pub p1_over_ps: f64,
    /// `P_1` itself: the share of the walker lost through the left edge.
    pub edge_fraction: f64,
    /// 1-based cell attaining the minimum; the smallest index wins ties.
    pub pmin_index: usize,
}

impl EdgeBurstMetrics {
    pub fn has_edge_burst(&self) -> bool {
        self.p1_over_pmin >= EDGE_BURST_THRESHOLD
    }
}

pub fn edge_burst_metrics(dist: &DecayDistribution) -> Result<EdgeBurstMetrics> {
    let s = dist.start;
    if s == 0 || s > dist.p.len() {
        return Err(Error::InvalidParameter(format!(
            "starting cell {s} outside 1..={}",
            dist.p.len()
        )));
    }
    let window = &dist.p[..s];
    let (mut pmin_index, mut pmin) = (1, window[0]);
    for (i, &v) in window.iter().enumerate().skip(1) {
        if v < pmin {
            pmin = v;
            pmin_index = i + 1;
        }
    }
    if pmin.is_nan() || pmin <= PMIN_FLOOR {
        return Err(Error::DegenerateDistribution { pmin });
    }
    let p1 = window[0];
    Ok(EdgeBurstMetrics {
        p1_over_pmin: p1 / pmin,
        p1_over_ps: p1 / window[s - 1],
        edge_fraction: p1,
        pmin_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(p: Vec<f64>, start: usize) -> DecayDistribution {
        DecayDistribution { p, start, residual: 0.0 }
    }

    #[test]
    fn flat_distribution() {
        let n = 8;
        let m = edge_burst_metrics(&dist(vec![1.0 / n as f64; n], 5)).unwrap();
        assert_eq!(m.p1_over_pmin, 1.0);
        assert_eq!(m.p1_over_ps, 1.0);
        assert_eq!(m.pmin_index, 1);
        assert_eq!(m.edge_fraction, 0.125);
        assert!(!m.has_edge_burst());
    }

    #[test]
    fn minimum_ignores_cells_right_of_start() {
        let m = edge_burst_metrics(&dist(vec![0.3, 0.02, 0.05, 0.6, 0.0001], 4)).unwrap();
        assert_eq!(m.pmin_index, 2);
        assert!((m.p1_over_pmin - 15.0).abs() < 1e-12);
        assert!((m.p1_over_ps - 0.5).abs() < 1e-12);
        assert!(m.has_edge_burst());
    }

    #[test]
    fn ties_go_to_smallest_index() {
        let m = edge_burst_metrics(&dist(vec![0.4, 0.1, 0.1, 0.4], 4)).unwrap();
        assert_eq!(m.pmin_index, 2);
    }

    #[test]
    fn degenerate_and_invalid() {
        assert!(matches!(
            edge_burst_metrics(&dist(vec![0.5, 0.0, 0.5], 3)),
            Err(Error::DegenerateDistribution { .. })
        ));
        assert!(edge_burst_metrics(&dist(vec![0.5, 0.5], 3)).is_err());
        assert!(edge_burst_metrics(&dist(vec![0.5, 0.5], 0)).is_err());
    }

    #[test]
    fn start_at_left_edge() {
        let m = edge_burst_metrics(&dist(vec![1.0], 1)).unwrap();
        assert_eq!((m.p1_over_pmin, m.p1_over_ps, m.edge_fraction), (1.0, 1.0, 1.0));
    }

    proptest! {
        #[test]
        fn ratio_at_least_one_and_scale_invariant(
            p in proptest::collection::vec(1e-6f64..1.0, 2..40),
            start_frac in 0.0f64..1.0,
            scale in 1e-3f64..1e3,
        ) {
            let start = 1 + ((p.len() - 1) as f64 * start_frac) as usize;
            let base = edge_burst_metrics(&dist(p.clone(), start)).unwrap();
            prop_assert!(base.p1_over_pmin >= 1.0);
            let scaled = edge_burst_metrics(&dist(p.iter().map(|x| x * scale).collect(), start)).unwrap();
            prop_assert!((scaled.p1_over_pmin - base.p1_over_pmin).abs() <= 1e-12 * base.p1_over_pmin);
            prop_assert!((scaled.p1_over_ps - base.p1_over_ps).abs() <= 1e-12 * base.p1_over_ps);
            prop_assert_eq!(scaled.pmin_index, base.pmin_index);
        }
    }
}
