//! Shared plumbing for the acceptance report: fixed-parameter lattices,
//! closed-form walks and a pass/fail line printer.

use edgeburst_core::{
    build_hamiltonian, decay_distribution_closed_form, edge_burst_metrics, eigensystem, BoundaryCondition,
    DecayDistribution, DecayRoute, EdgeBurstMetrics, LatticeParams, LossProfile, Spectrum, StartCell,
};

/// Inter-cell hopping used by every acceptance configuration.
pub const T2: f64 = 0.5;

#[derive(Debug, Default)]
pub struct Report {
    failed: Vec<u32>,
    total: u32,
}

impl Report {
    /// Prints `PASS criterion k: ...` or `FAIL criterion k: ...`.
    pub fn line(&mut self, k: u32, ok: bool, detail: impl AsRef<str>) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {k}: {}", detail.as_ref());
        self.total += 1;
        if !ok {
            self.failed.push(k);
        }
    }

    pub fn failed(&self) -> &[u32] {
        &self.failed
    }

    pub fn total(&self) -> u32 {
        self.total
    }
}

pub fn params(t1: f64, n: usize, loss: LossProfile) -> LatticeParams {
    LatticeParams::new(t1, T2, n, loss).expect("valid lattice")
}

/// Lattice that may be lossless, for spectral checks.
pub fn diagnostic(t1: f64, n: usize, loss: LossProfile) -> LatticeParams {
    LatticeParams::diagnostic(t1, T2, n, loss).expect("valid lattice")
}

pub fn closed_form(p: &LatticeParams, s: usize) -> (DecayDistribution, DecayRoute) {
    decay_distribution_closed_form(p, StartCell::new(s, p).expect("start cell")).expect("closed-form decay")
}

pub fn metrics(p: &LatticeParams, s: usize) -> EdgeBurstMetrics {
    edge_burst_metrics(&closed_form(p, s).0).expect("metrics")
}

pub fn spectrum(p: &LatticeParams, bc: BoundaryCondition) -> Spectrum {
    eigensystem(&build_hamiltonian(p, bc)).expect("spectrum")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_tracks_failures() {
        let mut r = Report::default();
        r.line(1, true, "ok");
        r.line(2, false, "bad");
        assert_eq!(r.failed(), &[2]);
        assert_eq!(r.total(), 2);
    }

    #[test]
    fn helpers() {
        assert_eq!(max_abs_diff(&[1.0, 2.0], &[1.5, 1.0]), 1.0);
        assert_eq!(fmt_list(&[1.0, 0.12345]), "1.0000, 0.1235");
        let p = params(0.3, 1, LossProfile::Uniform { gamma: 1.0 });
        assert!((closed_form(&p, 1).0.p[0] - 1.0).abs() < 1e-12);
    }
}
