//! Lattice parameters, loss profiles and the real-space Hamiltonian.
//!
//! The chain has `N` unit cells, each with an `A` site and a lossy `B` site.
//! Sites are interleaved in the state vector: cell `n` (1-based) occupies
//! index `2(n-1)` on `A` and `2(n-1)+1` on `B`. With this ordering the
//! Hamiltonian is banded for open boundaries.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sublattice {
    A,
    B,
}

/// Index of `(cell, sublattice)` in the state vector. `cell` is 1-based.
#[inline]
pub fn site_index(cell: usize, sub: Sublattice) -> usize {
    debug_assert!(cell >= 1);
    match sub {
        Sublattice::A => 2 * (cell - 1),
        Sublattice::B => 2 * (cell - 1) + 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossProfile {
    /// `γ_n = γ` on every B site.
    Uniform { gamma: f64 },
    /// `γ_n = γ n`, growing from the left edge.
    Linear { gamma: f64 },
    /// `γ_n` drawn independently and uniformly from `(0, γ_max]`.
    Random { gamma_max: f64, seed: u64 },
}

impl LossProfile {
    /// Resolves the profile into per-cell loss rates `γ_1..γ_N`.
    pub fn rates(&self, cells: usize) -> Vec<f64> {
        match *self {
            LossProfile::Uniform { gamma } => vec![gamma; cells],
            LossProfile::Linear { gamma } => (1..=cells).map(|n| gamma * n as f64).collect(),
            LossProfile::Random { gamma_max, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // 1 - u with u in [0, 1) lands in (0, 1].
                (0..cells)
                    .map(|_| gamma_max * (1.0 - rng.random::<f64>()))
                    .collect()
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, LossProfile::Uniform { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryCondition {
    #[default]
    Open,
    /// Periodic: cell `N+1` is cell `1` and cell `0` is cell `N`.
    Ring,
}

/// Physical parameters of the lattice with the loss profile already resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    t1: f64,
    t2: f64,
    cells: usize,
    loss: LossProfile,
    rates: Vec<f64>,
    relaxed: bool,
}

impl LatticeParams {
    /// Validated parameters for a walk: every `γ_n` must be strictly positive.
    pub fn new(t1: f64, t2: f64, cells: usize, loss: LossProfile) -> Result<Self> {
        Self::build(t1, t2, cells, loss, false)
    }

    /// Like [`LatticeParams::new`] but admits `γ_n = 0` (the Hermitian
    /// limit) and `t1 = 0` (intra-cell loop broken). Meant for diagnostics;
    /// a walk with a lossless site never fully decays.
    pub fn diagnostic(t1: f64, t2: f64, cells: usize, loss: LossProfile) -> Result<Self> {
        Self::build(t1, t2, cells, loss, true)
    }

    fn build(t1: f64, t2: f64, cells: usize, loss: LossProfile, relaxed: bool) -> Result<Self> {
        let t1_ok = if relaxed { t1 >= 0.0 } else { t1 > 0.0 };
        if !(t1.is_finite() && t1_ok) {
            return Err(Error::InvalidParameter(format!("t1 must be positive, got {t1}")));
        }
        if !(t2.is_finite() && t2 > 0.0) {
            return Err(Error::InvalidParameter(format!("t2 must be positive, got {t2}")));
        }
        if cells == 0 {
            return Err(Error::InvalidParameter("lattice needs at least one unit cell".into()));
        }
        match loss {
            LossProfile::Uniform { gamma } | LossProfile::Linear { gamma } => {
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
                }
            }
            LossProfile::Random { gamma_max, .. } => {
                if !(gamma_max.is_finite() && gamma_max > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "gamma_max must be positive, got {gamma_max}"
                    )));
                }
            }
        }
        let rates = loss.rates(cells);
        if !relaxed {
            if let Some(i) = rates.iter().position(|&g| g <= 0.0) {
                return Err(Error::LosslessSite { cell: i + 1 });
            }
        }
        Ok(Self { t1, t2, cells, loss, rates, relaxed })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Number of unit cells `N`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn loss(&self) -> LossProfile {
        self.loss
    }

    /// Loss rates `γ_1..γ_N`; entry `n-1` belongs to cell `n`.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }

    /// Whether this was built with [`LatticeParams::diagnostic`].
    pub fn is_diagnostic(&self) -> bool {
        self.relaxed
    }

    pub fn dim(&self) -> usize {
        2 * self.cells
    }
}

/// Dense `2N × 2N` generator of `i dψ/dt = Hψ`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: DMatrix<C64>,
    bc: BoundaryCondition,
    params: LatticeParams,
}

impl Hamiltonian {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }
}

/// Builds the real-space Hamiltonian.
///
/// Row `(n,A)`: `t1` at `(n,B)`, `+i t2/2` at `(n-1,A)`, `-i t2/2` at
/// `(n+1,A)`, `t2/2` at `(n±1,B)`. Row `(n,B)`: `t1` at `(n,A)`, `-i t2/2` at
/// `(n-1,B)`, `+i t2/2` at `(n+1,B)`, `t2/2` at `(n±1,A)` and `-iγ_n` on the
/// diagonal. Neighbours outside `1..=N` are dropped for open boundaries and
/// wrapped for the ring. Entries accumulate, so a ring with `N ≤ 2` folds
/// both neighbours onto the same cell.
pub fn build_hamiltonian(params: &LatticeParams, bc: BoundaryCondition) -> Hamiltonian {
    let n = params.cells;
    let dim = 2 * n;
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    let t1 = C64::new(params.t1, 0.0);
    let half = 0.5 * params.t2;
    let real_hop = C64::new(half, 0.0);
    let imag_hop = C64::new(0.0, half);

    let neighbour = |cell: usize, step: isize| -> Option<usize> {
        let target = cell as isize + step;
        if (1..=n as isize).contains(&target) {
            Some(target as usize)
        } else {
            match bc {
                BoundaryCondition::Open => None,
                BoundaryCondition::Ring => Some((target - 1).rem_euclid(n as isize) as usize + 1),
            }
        }
    };

    for cell in 1..=n {
        let a = site_index(cell, Sublattice::A);
        let b = site_index(cell, Sublattice::B);
        h[(a, b)] += t1;
        h[(b, a)] += t1;

        if let Some(left) = neighbour(cell, -1) {
            h[(a, site_index(left, Sublattice::A))] += imag_hop;
            h[(b, site_index(left, Sublattice::B))] -= imag_hop;
            h[(a, site_index(left, Sublattice::B))] += real_hop;
            h[(b, site_index(left, Sublattice::A))] += real_hop;
        }
        if let Some(right) = neighbour(cell, 1) {
            h[(a, site_index(right, Sublattice::A))] -= imag_hop;
            h[(b, site_index(right, Sublattice::B))] += imag_hop;
            h[(a, site_index(right, Sublattice::B))] += real_hop;
            h[(b, site_index(right, Sublattice::A))] += real_hop;
        }
    }
    // After the hops, so folded ±i t2/2 on a one-cell ring cancel to exactly 0.
    for (cell, &gamma) in (1..=n).zip(&params.rates) {
        let b = site_index(cell, Sublattice::B);
        h[(b, b)] += C64::new(0.0, -gamma);
    }

    Hamiltonian { matrix: h, bc, params: params.clone() }
}

/// Momentum-space `2×2` Hamiltonian for a uniform loss rate, obtained from
/// the plane-wave ansatz `ψ_n ∝ e^{ikn}`:
///
/// ```text
/// [[ t2 sin k,       t1 + t2 cos k       ],
///  [ t1 + t2 cos k, -t2 sin k - iγ       ]]
/// ```
pub fn bloch_matrix(params: &LatticeParams, k: f64) -> Result<Matrix2<C64>> {
    let LossProfile::Uniform { gamma } = params.loss else {
        return Err(Error::InvalidParameter(
            "Bloch matrix requires a uniform loss profile".into(),
        ));
    };
    let (t1, t2) = (params.t1, params.t2);
    let (s, c) = k.sin_cos();
    let off = C64::new(t1 + t2 * c, 0.0);
    Ok(Matrix2::new(
        C64::new(t2 * s, 0.0),
        off,
        off,
        C64::new(-t2 * s, -gamma),
    ))
}

/// Eigenvalues of a `2×2` complex matrix from its characteristic polynomial.
pub fn eigenvalues_2x2(m: &Matrix2<C64>) -> [C64; 2] {
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let half_diff = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let root = (half_diff * half_diff + m[(0, 1)] * m[(1, 0)]).sqrt();
    [half_tr - root, half_tr + root]
}

/// Union of Bloch eigenvalues over the `N` quantized momenta `k = 2πm/N`.
pub fn bloch_spectrum(params: &LatticeParams) -> Result<Vec<C64>> {
    let n = params.cells;
    let mut out = Vec::with_capacity(2 * n);
    for m in 0..n {
        let k = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        out.extend(eigenvalues_2x2(&bloch_matrix(params, k)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn uniform(t1: f64, t2: f64, n: usize, gamma: f64) -> LatticeParams {
        LatticeParams::diagnostic(t1, t2, n, LossProfile::Uniform { gamma }).unwrap()
    }

    #[test]
    fn single_cell_open() {
        let h = build_hamiltonian(&uniform(0.3, 0.5, 1, 1.0), BoundaryCondition::Open);
        let expect = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0.3, 0.), c(0.3, 0.), c(0., -1.)]);
        assert_eq!(h.matrix(), &expect);
    }

    #[test]
    fn two_cell_hand_transcription() {
        let h = build_hamiltonian(&uniform(0.3, 0.5, 2, 1.0), BoundaryCondition::Open);
        let m = h.matrix();
        let (a1, b1) = (site_index(1, Sublattice::A), site_index(1, Sublattice::B));
        let (a2, b2) = (site_index(2, Sublattice::A), site_index(2, Sublattice::B));
        assert_eq!(m[(a1, a2)], c(0., -0.25));
        assert_eq!(m[(a2, a1)], c(0., 0.25));
        assert_eq!(m[(b1, b2)], c(0., 0.25));
        assert_eq!(m[(b2, b1)], c(0., -0.25));
        assert_eq!(m[(a1, b2)], c(0.25, 0.));
        assert_eq!(m[(b2, a1)], c(0.25, 0.));
        assert_eq!(m[(b1, a2)], c(0.25, 0.));
        assert_eq!(m[(a1, b1)], c(0.3, 0.));
        assert_eq!(m[(b2, b2)], c(0., -1.));
    }

    #[test]
    fn diagonal_pattern() {
        let p = LatticeParams::new(0.3, 0.5, 7, LossProfile::Linear { gamma: 0.4 }).unwrap();
        let h = build_hamiltonian(&p, BoundaryCondition::Ring);
        for cell in 1..=7 {
            let a = site_index(cell, Sublattice::A);
            let b = site_index(cell, Sublattice::B);
            assert_eq!(h.matrix()[(a, a)], C64::new(0.0, 0.0));
            assert_eq!(h.matrix()[(b, b)], C64::new(0.0, -0.4 * cell as f64));
        }
    }

    #[test]
    fn ring_differs_from_open_in_eight_entries() {
        let p = LatticeParams::new(0.3, 0.5, 6, LossProfile::Uniform { gamma: 1.0 }).unwrap();
        let open = build_hamiltonian(&p, BoundaryCondition::Open);
        let ring = build_hamiltonian(&p, BoundaryCondition::Ring);
        let diff = ring.matrix() - open.matrix();
        let mut changed = Vec::new();
        for i in 0..12 {
            for j in 0..12 {
                if diff[(i, j)] != C64::new(0.0, 0.0) {
                    changed.push((i / 2 + 1, j / 2 + 1));
                }
            }
        }
        assert_eq!(changed.len(), 8);
        assert!(changed.iter().all(|&(r, s)| (r, s) == (1, 6) || (r, s) == (6, 1)));
    }

    #[test]
    fn ring_with_one_cell_folds_neighbours() {
        let h = build_hamiltonian(&uniform(0.3, 0.5, 1, 1.0), BoundaryCondition::Ring);
        // ±i t2/2 cancel on A and B, t2/2 from both sides doubles onto t1.
        let expect = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0.8, 0.), c(0.8, 0.), c(0., -1.)]);
        assert_eq!(h.matrix(), &expect);
    }

    #[test]
    fn validation() {
        assert!(LatticeParams::new(0.0, 0.5, 3, LossProfile::Uniform { gamma: 1.0 }).is_err());
        assert!(LatticeParams::new(0.3, -0.5, 3, LossProfile::Uniform { gamma: 1.0 }).is_err());
        assert!(LatticeParams::new(0.3, 0.5, 0, LossProfile::Uniform { gamma: 1.0 }).is_err());
        assert!(matches!(
            LatticeParams::new(0.3, 0.5, 3, LossProfile::Uniform { gamma: 0.0 }),
            Err(Error::LosslessSite { cell: 1 })
        ));
        assert!(LatticeParams::diagnostic(0.3, 0.5, 3, LossProfile::Uniform { gamma: 0.0 }).is_ok());
        assert!(LatticeParams::diagnostic(0.0, 0.5, 3, LossProfile::Uniform { gamma: 1.0 }).is_ok());
        assert!(LatticeParams::diagnostic(-0.1, 0.5, 3, LossProfile::Uniform { gamma: 1.0 }).is_err());
        assert!(LatticeParams::diagnostic(0.3, 0.5, 3, LossProfile::Linear { gamma: -1.0 }).is_err());
        assert!(LatticeParams::new(0.3, 0.5, 3, LossProfile::Random { gamma_max: 0.0, seed: 1 }).is_err());
    }

    #[test]
    fn random_profile_is_reproducible_and_in_range() {
        let p = LossProfile::Random { gamma_max: 2.0, seed: 42 };
        let a = p.rates(500);
        assert_eq!(a, p.rates(500));
        assert!(a.iter().all(|&g| g > 0.0 && g <= 2.0));
        let other = LossProfile::Random { gamma_max: 2.0, seed: 43 }.rates(500);
        assert_ne!(a, other);
    }

    #[test]
    fn bloch_matrix_values() {
        let p = uniform(0.3, 0.5, 4, 1.0);
        let m0 = bloch_matrix(&p, 0.0).unwrap();
        assert_eq!(m0, Matrix2::new(c(0., 0.), c(0.8, 0.), c(0.8, 0.), c(0., -1.)));
        let mpi = bloch_matrix(&p, std::f64::consts::PI).unwrap();
        let expect = Matrix2::new(c(0., 0.), c(-0.2, 0.), c(-0.2, 0.), c(0., -1.));
        assert!((mpi - expect).norm() < 1e-15);
        let lin = LatticeParams::new(0.3, 0.5, 4, LossProfile::Linear { gamma: 1.0 }).unwrap();
        assert!(bloch_matrix(&lin, 0.0).is_err());
    }

    #[test]
    fn bloch_matrix_hermitian_without_loss() {
        let p = uniform(0.3, 0.5, 4, 0.0);
        for i in 0..16 {
            let m = bloch_matrix(&p, i as f64 * 0.4).unwrap();
            assert!((m - m.adjoint()).norm() == 0.0);
        }
    }

    #[test]
    fn bloch_matrix_matches_plane_wave_action() {
        // Apply the ring Hamiltonian to a plane wave and read off the 2x2 block.
        let n = 8;
        let p = uniform(0.3, 0.5, n, 0.7);
        let h = build_hamiltonian(&p, BoundaryCondition::Ring);
        let k = 2.0 * std::f64::consts::PI * 3.0 / n as f64;
        let bloch = bloch_matrix(&p, k).unwrap();
        for (ua, ub) in [(C64::new(1., 0.), C64::new(0., 0.)), (C64::new(0., 0.), C64::new(1., 0.))] {
            let psi = nalgebra::DVector::from_fn(2 * n, |i, _| {
                let phase = C64::from_polar(1.0, k * (i / 2 + 1) as f64);
                phase * if i % 2 == 0 { ua } else { ub }
            });
            let hpsi = h.matrix() * &psi;
            let u = nalgebra::Vector2::new(ua, ub);
            let bu = bloch * u;
            for cell in 1..=n {
                let phase = C64::from_polar(1.0, k * cell as f64);
                assert!((hpsi[site_index(cell, Sublattice::A)] - phase * bu[0]).norm() < 1e-14);
                assert!((hpsi[site_index(cell, Sublattice::B)] - phase * bu[1]).norm() < 1e-14);
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn lossless_hamiltonian_is_hermitian(t1 in 0.01f64..2.0, t2 in 0.01f64..2.0, n in 1usize..20, ring: bool) {
            let p = uniform(t1, t2, n, 0.0);
            let bc = if ring { BoundaryCondition::Ring } else { BoundaryCondition::Open };
            let h = build_hamiltonian(&p, bc);
            prop_assert_eq!((h.matrix() - h.matrix().adjoint()).norm(), 0.0);
        }

        #[test]
        fn trace_is_total_loss(t1 in 0.01f64..2.0, t2 in 0.01f64..2.0, n in 1usize..20, g in 0.01f64..3.0, seed: u64, kind in 0u8..3) {
            let loss = match kind {
                0 => LossProfile::Uniform { gamma: g },
                1 => LossProfile::Linear { gamma: g },
                _ => LossProfile::Random { gamma_max: g, seed },
            };
            let p = LatticeParams::new(t1, t2, n, loss).unwrap();
            let total: f64 = p.rates().iter().sum();
            for bc in [BoundaryCondition::Open, BoundaryCondition::Ring] {
                let tr = build_hamiltonian(&p, bc).trace();
                prop_assert_eq!(tr.re, 0.0);
                prop_assert_eq!(tr.im, -total);
            }
        }
    }
}
