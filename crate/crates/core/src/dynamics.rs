//! Time evolution of the walker and the decay distribution
//! `P_n = 2γ_n ∫₀^∞ |ψ_n^B(t)|² dt`.
//!
//! [`decay_distribution_ode`] runs fixed-step RK4 on the Schrödinger
//! equation augmented with one accumulator per lossy site. The closed-form
//! routes do the time integral exactly: [`decay_distribution_spectral`]
//! expands the initial state in right eigenvectors, and
//! [`decay_distribution_schur`] solves the equivalent Sylvester equation in
//! the Schur basis, which survives the exponentially ill-conditioned
//! eigenvectors of skin-localized lattices.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, site_index, BoundaryCondition, Hamiltonian, LatticeParams, Sublattice};
use crate::spectral::{eigensystem, Spectrum};

/// Starting unit cell `S` (1-based). The walker starts as `ψ_n^A = δ_{n,S}`,
/// `ψ^B = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartCell(usize);

impl StartCell {
    pub fn new(cell: usize, params: &LatticeParams) -> Result<Self> {
        if cell == 0 || cell > params.cells() {
            return Err(Error::InvalidParameter(format!(
                "starting cell must lie in 1..={}, got {cell}",
                params.cells()
            )));
        }
        Ok(Self(cell))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    pub t: f64,
    /// Amplitudes in interleaved `(A_1, B_1, A_2, ...)` order.
    pub amps: Vec<C64>,
    /// Running `2γ_n ∫₀^t |ψ_n^B|²`, one entry per cell.
    pub accumulated: Vec<f64>,
}

impl WalkerState {
    pub fn localized(cells: usize, start: StartCell) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 2 * cells];
        amps[site_index(start.get(), Sublattice::A)] = C64::new(1.0, 0.0);
        Self { t: 0.0, amps, accumulated: vec![0.0; cells] }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖ψ‖² + Σ accumulated`; stays at 1 up to integration error.
    pub fn total_probability(&self) -> f64 {
        self.norm_sqr() + self.accumulated.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Stop once `‖ψ‖²` drops below this.
    pub eps_stop: f64,
}

impl IntegratorConfig {
    pub const DEFAULT_T_MAX: f64 = 1e4;
    pub const DEFAULT_EPS_STOP: f64 = 1e-10;

    /// `dt = 0.01 / max(1, max γ_n)` with the default cap and threshold.
    pub fn for_params(params: &LatticeParams) -> Self {
        Self {
            dt: Self::default_dt(params),
            t_max: Self::DEFAULT_T_MAX,
            eps_stop: Self::DEFAULT_EPS_STOP,
        }
    }

    pub fn default_dt(params: &LatticeParams) -> f64 {
        0.01 / params.max_rate().max(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidParameter(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.eps_stop > 0.0 && self.eps_stop < 1.0) {
            return Err(Error::InvalidParameter(format!("eps_stop must lie in (0, 1), got {}", self.eps_stop)));
        }
        Ok(())
    }
}

/// Decay probabilities `P_1..P_N` for a walk started at `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayDistribution {
    pub p: Vec<f64>,
    pub start: usize,
    /// Probability not accounted for in `p` when the computation stopped.
    pub residual: f64,
}

impl DecayDistribution {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn cells(&self) -> usize {
        self.p.len()
    }
}

/// Row-compressed copy of the Hamiltonian used by the integrator. The lattice
/// has at most six couplings per row, so dense products waste most of their
/// work.
#[derive(Debug, Clone)]
struct Propagator {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    /// `2γ_n` per cell, read off the B diagonal.
    twice_rates: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Scratch {
    k: [Vec<C64>; 4],
    stage: Vec<C64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Self { k: [z.clone(), z.clone(), z.clone(), z.clone()], stage: z }
    }
}

impl Propagator {
    fn new(h: &DMatrix<C64>) -> Self {
        let dim = h.nrows();
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for r in 0..dim {
            for c in 0..dim {
                let v = h[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_start.push(cols.len());
        }
        let twice_rates = (0..dim / 2).map(|c| -2.0 * h[(2 * c + 1, 2 * c + 1)].im).collect();
        Self { row_start, cols, vals, twice_rates }
    }

    fn dim(&self) -> usize {
        self.row_start.len() - 1
    }

    /// `out = -i H psi`.
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for idx in self.row_start[r]..self.row_start[r + 1] {
                acc += self.vals[idx] * psi[self.cols[idx]];
            }
            *o = C64::new(acc.im, -acc.re);
        }
    }

    /// One classical RK4 step of the augmented system
    /// `dψ/dt = -iHψ`, `dP_n/dt = 2γ_n |ψ_n^B|²`.
    fn step(&self, state: &mut WalkerState, dt: f64, scratch: &mut Scratch) {
        if dt == 0.0 {
            return;
        }
        let Scratch { k, stage } = scratch;
        let cells = self.twice_rates.len();
        let mut dp = vec![0.0; cells];
        let weights = [1.0, 2.0, 2.0, 1.0];
        let offsets = [0.0, 0.5, 0.5, 1.0];

        for s in 0..4 {
            if s == 0 {
                stage.copy_from_slice(&state.amps);
            } else {
                let h = offsets[s] * dt;
                for ((y, x), kp) in stage.iter_mut().zip(&state.amps).zip(&k[s - 1]) {
                    *y = x + kp * h;
                }
            }
            for (cell, d) in dp.iter_mut().enumerate() {
                *d += weights[s] * self.twice_rates[cell] * stage[2 * cell + 1].norm_sqr();
            }
            let (_, rest) = k.split_at_mut(s);
            self.apply(stage, &mut rest[0]);
        }

        let sixth = dt / 6.0;
        for (i, y) in state.amps.iter_mut().enumerate() {
            *y += (k[0][i] + (k[1][i] + k[2][i]) * 2.0 + k[3][i]) * sixth;
        }
        for (acc, d) in state.accumulated.iter_mut().zip(&dp) {
            *acc += d * sixth;
        }
        state.t += dt;
    }
}

/// Advances `state` by one RK4 step of size `dt`.
pub fn evolve_step(h: &Hamiltonian, state: &WalkerState, dt: f64) -> Result<WalkerState> {
    let dim = h.dim();
    if state.amps.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: state.amps.len() });
    }
    if state.accumulated.len() != dim / 2 {
        return Err(Error::DimensionMismatch { expected: dim / 2, actual: state.accumulated.len() });
    }
    let prop = Propagator::new(h.matrix());
    let mut next = state.clone();
    prop.step(&mut next, dt, &mut Scratch::new(dim));
    Ok(next)
}

/// Integrates the walk on the open lattice until `‖ψ‖² < eps_stop` and
/// reports the accumulated decay probabilities.
pub fn decay_distribution_ode(params: &LatticeParams, start: StartCell, cfg: &IntegratorConfig) -> Result<DecayDistribution> {
    cfg.validate()?;
    check_walk_params(params, start)?;
    let h = build_hamiltonian(params, BoundaryCondition::Open);
    let prop = Propagator::new(h.matrix());
    let mut scratch = Scratch::new(prop.dim());
    let mut state = WalkerState::localized(params.cells(), start);

    let mut remaining = state.norm_sqr();
    while remaining >= cfg.eps_stop && state.t < cfg.t_max {
        prop.step(&mut state, cfg.dt, &mut scratch);
        remaining = state.norm_sqr();
    }

    let dist = DecayDistribution { p: state.accumulated, start: start.get(), residual: remaining };
    if remaining >= cfg.eps_stop {
        return Err(Error::NonConvergence { residual: remaining, t: state.t, partial: Box::new(dist) });
    }
    Ok(dist)
}

fn check_walk_params(params: &LatticeParams, start: StartCell) -> Result<()> {
    if start.get() == 0 || start.get() > params.cells() {
        return Err(Error::InvalidParameter(format!("starting cell {} outside lattice", start.get())));
    }
    if let Some(i) = params.rates().iter().position(|&g| g <= 0.0) {
        return Err(Error::LosslessSite { cell: i + 1 });
    }
    Ok(())
}

/// Bound on the 1-norm condition estimate of the eigenvector matrix beyond
/// which the eigen-expansion is refused.
pub const DEFAULT_MAX_CONDITION: f64 = 1e8;

/// Overlaps `|c_j|` below this are treated as absent.
const OVERLAP_FLOOR: f64 = 1e-12;

/// Decay threshold: modes with `Im E ≥ -1e-12` are considered non-decaying.
const DECAY_FLOOR: f64 = 1e-12;

/// Closed-form decay distribution from the open-lattice spectrum.
///
/// With `ψ(0) = Σ_j c_j v_j`, the integral `∫₀^∞ e^{-i(E_j - Ē_k)t} dt`
/// equals `1 / (i(E_j - Ē_k))`, giving
/// `P_n = 2γ_n Σ_{jk} c_j c̄_k v_{j,nB} v̄_{k,nB} / (i(E_j - Ē_k))`.
pub fn decay_distribution_spectral(params: &LatticeParams, start: StartCell, spec: &Spectrum) -> Result<DecayDistribution> {
    decay_distribution_spectral_with_bound(params, start, spec, DEFAULT_MAX_CONDITION)
}

pub fn decay_distribution_spectral_with_bound(
    params: &LatticeParams,
    start: StartCell,
    spec: &Spectrum,
    max_condition: f64,
) -> Result<DecayDistribution> {
    let dim = params.dim();
    if spec.eigenvectors().nrows() != dim || spec.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: spec.len() });
    }
    if spec.bc() != BoundaryCondition::Open {
        return Err(Error::InvalidParameter("decay distribution is defined on the open lattice".into()));
    }
    let vecs = spec.eigenvectors();
    let condition = condition_number(vecs);
    if condition.is_nan() || condition > max_condition {
        return Err(Error::IllConditioned { condition });
    }
    let inverse = vecs.clone().lu().try_inverse().ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    let rates = params.rates();

    let coeffs = inverse.column(site_index(start.get(), Sublattice::A)).into_owned();
    let eigenvalues = spec.eigenvalues();
    let active: Vec<usize> = (0..dim).filter(|&j| coeffs[j].norm() > OVERLAP_FLOOR).collect();
    for &j in &active {
        if eigenvalues[j].im >= -DECAY_FLOOR {
            return Err(Error::NonDecayingMode { re: eigenvalues[j].re, im: eigenvalues[j].im });
        }
    }

    let m = active.len();
    // kernel[j][k] = 1 / (i (E_j - conj E_k)); Hermitian in (j, k).
    let kernel = DMatrix::from_fn(m, m, |a, b| {
        let (ej, ek) = (eigenvalues[active[a]], eigenvalues[active[b]]);
        let z = C64::new(0.0, 1.0) * (ej - ek.conj());
        z.inv()
    });

    let cells = params.cells();
    let mut p = Vec::with_capacity(cells);
    let mut w = vec![C64::new(0.0, 0.0); m];
    for cell in 1..=cells {
        let row = site_index(cell, Sublattice::B);
        for (slot, &j) in w.iter_mut().zip(&active) {
            *slot = coeffs[j] * vecs[(row, j)];
        }
        let mut sum = C64::new(0.0, 0.0);
        for a in 0..m {
            let mut inner = C64::new(0.0, 0.0);
            for b in 0..m {
                inner += kernel[(a, b)] * w[b].conj();
            }
            sum += w[a] * inner;
        }
        p.push((2.0 * rates[cell - 1] * sum.re).max(0.0));
    }
    let total: f64 = p.iter().sum();
    Ok(DecayDistribution { p, start: start.get(), residual: (1.0 - total).abs() })
}

/// 2-norm condition number from the singular values. A numerically
/// singular matrix reports at least ~1/ε, unlike estimates built from a
/// computed inverse.
fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let (max, min) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &x| (hi.max(x), lo.min(x)));
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Largest `|1 − Σ P_n|` accepted from the eigen-expansion before the
/// closed-form route switches to the Schur solver.
const EXPANSION_RESIDUAL_TOL: f64 = 1e-8;

/// Closed-form decay distribution through the Schur form `H = Q T Q†`.
///
/// `X = ∫₀^∞ ψ(t) ψ(t)† dt` solves the Sylvester equation
/// `H X − X H† = −i ψ(0) ψ(0)†`, and `P_n = 2γ_n X_{nB,nB}`. The equation is
/// solved column by column in the triangular basis, so no eigenvector
/// matrix is inverted and strongly non-normal lattices stay accurate.
pub fn decay_distribution_schur(params: &LatticeParams, start: StartCell) -> Result<DecayDistribution> {
    check_walk_params(params, start)?;
    let h = build_hamiltonian(params, BoundaryCondition::Open);
    let dim = h.dim();
    let schur = nalgebra::Schur::try_new(h.into_matrix(), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();

    for i in 0..dim {
        if t[(i, i)].im >= -DECAY_FLOOR {
            return Err(Error::NonDecayingMode { re: t[(i, i)].re, im: t[(i, i)].im });
        }
    }

    // u = Q† ψ(0); the right-hand side in the Schur basis is −i u u†.
    let src = site_index(start.get(), Sublattice::A);
    let u: Vec<C64> = (0..dim).map(|a| q[(src, a)].conj()).collect();
    let minus_i = C64::new(0.0, -1.0);

    // T Y − Y T† = D. Column k couples only to columns j > k through
    // conj(T_kj), so sweep k downwards with a back-substitution each.
    let mut y = DMatrix::<C64>::zeros(dim, dim);
    let mut rhs = vec![C64::new(0.0, 0.0); dim];
    for k in (0..dim).rev() {
        let shift = t[(k, k)].conj();
        for (i, r) in rhs.iter_mut().enumerate() {
            let mut acc = minus_i * u[i] * u[k].conj();
            for j in k + 1..dim {
                acc += t[(k, j)].conj() * y[(i, j)];
            }
            *r = acc;
        }
        for i in (0..dim).rev() {
            let mut acc = rhs[i];
            for j in i + 1..dim {
                acc -= t[(i, j)] * y[(j, k)];
            }
            y[(i, k)] = acc / (t[(i, i)] - shift);
        }
    }

    let qy = &q * &y;
    let rates = params.rates();
    let p: Vec<f64> = (1..=params.cells())
        .map(|cell| {
            let row = site_index(cell, Sublattice::B);
            let mut x = C64::new(0.0, 0.0);
            for b in 0..dim {
                x += qy[(row, b)] * q[(row, b)].conj();
            }
            (2.0 * rates[cell - 1] * x.re).max(0.0)
        })
        .collect();
    let total: f64 = p.iter().sum();
    Ok(DecayDistribution { p, start: start.get(), residual: (1.0 - total).abs() })
}

/// Which computation produced a decay distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayRoute {
    Ode,
    Spectral,
    Schur,
}

impl DecayRoute {
    pub fn name(self) -> &'static str {
        match self {
            DecayRoute::Ode => "ode",
            DecayRoute::Spectral => "spectral",
            DecayRoute::Schur => "schur",
        }
    }
}

/// Closed-form evaluation: the eigen-expansion when its eigenvector matrix
/// is well conditioned, the Schur/Sylvester route otherwise.
pub fn decay_distribution_closed_form(params: &LatticeParams, start: StartCell) -> Result<(DecayDistribution, DecayRoute)> {
    check_walk_params(params, start)?;
    let spectral = eigensystem(&build_hamiltonian(params, BoundaryCondition::Open))
        .and_then(|spec| decay_distribution_spectral(params, start, &spec));
    match spectral {
        Ok(d) if d.residual <= EXPANSION_RESIDUAL_TOL => Ok((d, DecayRoute::Spectral)),
        Ok(_) | Err(Error::IllConditioned { .. } | Error::EigenResidual { .. }) => {
            Ok((decay_distribution_schur(params, start)?, DecayRoute::Schur))
        }
        Err(e) => Err(e),
    }
}

/// How to evaluate the decay distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayMethod {
    Ode(IntegratorConfig),
    /// Eigen-expansion only; fails on ill-conditioned eigenvector matrices.
    Spectral,
    Schur,
    /// Closed form (eigen-expansion, then Schur), falling back to the
    /// integrator if both fail.
    Auto(IntegratorConfig),
}

impl DecayMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DecayMethod::Ode(_) => "ode",
            DecayMethod::Spectral => "spectral",
            DecayMethod::Schur => "schur",
            DecayMethod::Auto(_) => "auto",
        }
    }
}

/// Decay distribution by the chosen method, plus the route that produced it.
pub fn decay_distribution(params: &LatticeParams, start: StartCell, method: DecayMethod) -> Result<(DecayDistribution, DecayRoute)> {
    match method {
        DecayMethod::Ode(cfg) => Ok((decay_distribution_ode(params, start, &cfg)?, DecayRoute::Ode)),
        DecayMethod::Spectral => {
            check_walk_params(params, start)?;
            let spec = eigensystem(&build_hamiltonian(params, BoundaryCondition::Open))?;
            Ok((decay_distribution_spectral(params, start, &spec)?, DecayRoute::Spectral))
        }
        DecayMethod::Schur => Ok((decay_distribution_schur(params, start)?, DecayRoute::Schur)),
        DecayMethod::Auto(cfg) => match decay_distribution_closed_form(params, start) {
            Ok(found) => Ok(found),
            Err(Error::NoConvergence | Error::IllConditioned { .. }) => {
                Ok((decay_distribution_ode(params, start, &cfg)?, DecayRoute::Ode))
            }
            Err(e) => Err(e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LossProfile;

    fn params(t1: f64, t2: f64, n: usize, loss: LossProfile) -> LatticeParams {
        LatticeParams::new(t1, t2, n, loss).unwrap()
    }

    #[test]
    fn zero_step_is_identity() {
        let p = params(0.3, 0.5, 5, LossProfile::Uniform { gamma: 1.0 });
        let h = build_hamiltonian(&p, BoundaryCondition::Open);
        let s0 = WalkerState::localized(5, StartCell::new(3, &p).unwrap());
        assert_eq!(evolve_step(&h, &s0, 0.0).unwrap(), s0);
    }

    #[test]
    fn dimension_mismatch() {
        let p = params(0.3, 0.5, 5, LossProfile::Uniform { gamma: 1.0 });
        let h = build_hamiltonian(&p, BoundaryCondition::Open);
        let bad = WalkerState::localized(4, StartCell(1));
        assert!(matches!(evolve_step(&h, &bad, 0.1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unitary_limit_conserves_norm() {
        let p = LatticeParams::diagnostic(0.3, 0.5, 10, LossProfile::Uniform { gamma: 0.0 }).unwrap();
        let h = build_hamiltonian(&p, BoundaryCondition::Open);
        let mut s = WalkerState::localized(10, StartCell::new(5, &p).unwrap());
        let dt = 0.05;
        for _ in 0..200 {
            let next = evolve_step(&h, &s, dt).unwrap();
            // Local error of RK4 for a Hermitian generator with ‖H‖ ~ 1.
            assert!((next.norm_sqr() - s.norm_sqr()).abs() < 10.0 * dt.powi(5));
            s = next;
        }
    }

    /// Exact two-level solution: for H = [[0, t1], [t1, -iγ]] with ψ(0) = e_A,
    /// ψ(t) = e^{-iHt} e_A from the spectral decomposition of the 2x2 matrix.
    fn two_level_exact(t1: f64, gamma: f64, t: f64) -> [C64; 2] {
        let i = C64::new(0.0, 1.0);
        let half = C64::new(0.0, -0.5 * gamma);
        let root = (half * half + t1 * t1).sqrt();
        let (l1, l2) = (half + root, half - root);
        // e^{-iHt} = Σ_k e^{-iλ_k t} Π_k with Π_1 = (H - λ_2)/(λ_1 - λ_2).
        let (e1, e2) = ((-i * l1 * t).exp(), (-i * l2 * t).exp());
        let d = l1 - l2;
        let a = (e1 * (-l2) - e2 * (-l1)) / d;
        let b = (e1 - e2) * t1 / d;
        [a, b]
    }

    #[test]
    fn two_level_matches_closed_form_to_fourth_order() {
        let p = params(0.3, 0.5, 1, LossProfile::Uniform { gamma: 1.0 });
        let h = build_hamiltonian(&p, BoundaryCondition::Open);
        let horizon = 4.0;
        let err = |dt: f64| {
            let steps = (horizon / dt).round() as usize;
            let mut s = WalkerState::localized(1, StartCell(1));
            for _ in 0..steps {
                s = evolve_step(&h, &s, dt).unwrap();
            }
            let exact = two_level_exact(0.3, 1.0, horizon);
            (s.amps[0] - exact[0]).norm().max((s.amps[1] - exact[1]).norm())
        };
        let (coarse, fine) = (err(0.2), err(0.1));
        assert!(coarse < 1e-4, "coarse error {coarse}");
        let ratio = coarse / fine;
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }

    #[test]
    fn single_cell_decays_fully_through_its_only_site() {
        for t1 in [0.15, 0.3, 1.5] {
            for gamma in [0.2, 1.0, 4.0] {
                let p = params(t1, 0.5, 1, LossProfile::Uniform { gamma });
                let s = StartCell::new(1, &p).unwrap();
                let d = decay_distribution_ode(&p, s, &IntegratorConfig::for_params(&p)).unwrap();
                assert!((d.p[0] - 1.0).abs() < 1e-6, "t1={t1} γ={gamma}: {}", d.p[0]);
                let sp = decay_distribution(&p, s, DecayMethod::Spectral).unwrap().0;
                assert!((sp.p[0] - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exceptional_point_uses_schur_route() {
        // t1 = γ/2 makes the single-cell matrix defective.
        let p = params(0.5, 0.5, 1, LossProfile::Uniform { gamma: 1.0 });
        let s = StartCell::new(1, &p).unwrap();
        let r = decay_distribution(&p, s, DecayMethod::Spectral);
        assert!(matches!(r, Err(Error::IllConditioned { .. })), "{r:?}");
        let (d, route) = decay_distribution_closed_form(&p, s).unwrap();
        assert_eq!(route, DecayRoute::Schur);
        assert!((d.p[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn schur_matches_eigen_expansion_when_well_conditioned() {
        let p = params(0.7, 0.5, 16, LossProfile::Linear { gamma: 0.5 });
        let s = StartCell::new(12, &p).unwrap();
        let a = decay_distribution(&p, s, DecayMethod::Spectral).unwrap().0;
        let b = decay_distribution_schur(&p, s).unwrap();
        let diff = a.p.iter().zip(&b.p).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{diff}");
        assert!(b.residual < 1e-10);
    }

    #[test]
    fn schur_matches_integrator_on_skin_localized_lattice() {
        // Uniform loss with t1 < t2: eigenvectors are exponentially
        // non-orthogonal and the eigen-expansion is refused.
        let p = params(0.3, 0.5, 24, LossProfile::Uniform { gamma: 0.5 });
        let s = StartCell::new(18, &p).unwrap();
        assert!(matches!(decay_distribution(&p, s, DecayMethod::Spectral), Err(Error::IllConditioned { .. })));
        let (closed, route) = decay_distribution_closed_form(&p, s).unwrap();
        assert_eq!(route, DecayRoute::Schur);
        let ode = decay_distribution_ode(&p, s, &IntegratorConfig::for_params(&p)).unwrap();
        let diff = closed.p.iter().zip(&ode.p).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn non_convergence_is_reported_with_partial_result() {
        let p = params(0.3, 0.5, 10, LossProfile::Uniform { gamma: 1.0 });
        let cfg = IntegratorConfig { dt: 0.01, t_max: 1.0, eps_stop: 1e-10 };
        match decay_distribution_ode(&p, StartCell::new(5, &p).unwrap(), &cfg) {
            Err(Error::NonConvergence { residual, partial, .. }) => {
                assert!(residual > 0.1);
                assert!((partial.total() + residual - 1.0).abs() < 1e-8);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn lossless_spectrum_is_non_decaying() {
        let p = LatticeParams::diagnostic(0.3, 0.5, 6, LossProfile::Uniform { gamma: 0.0 }).unwrap();
        let spec = eigensystem(&build_hamiltonian(&p, BoundaryCondition::Open)).unwrap();
        let r = decay_distribution_spectral(&p, StartCell::new(3, &p).unwrap(), &spec);
        assert!(matches!(r, Err(Error::NonDecayingMode { .. })), "{r:?}");
        let cfg = IntegratorConfig::for_params(&p);
        assert!(matches!(decay_distribution_ode(&p, StartCell(3), &cfg), Err(Error::LosslessSite { .. })));
    }

    #[test]
    fn tight_condition_bound_is_reported() {
        let p = params(0.3, 0.5, 20, LossProfile::Uniform { gamma: 2.0 });
        let spec = eigensystem(&build_hamiltonian(&p, BoundaryCondition::Open)).unwrap();
        let r = decay_distribution_spectral_with_bound(&p, StartCell(10), &spec, 1.0);
        assert!(matches!(r, Err(Error::IllConditioned { condition }) if condition > 1.0));
    }

    #[test]
    fn ring_spectrum_rejected() {
        let p = params(0.3, 0.5, 6, LossProfile::Uniform { gamma: 1.0 });
        let spec = eigensystem(&build_hamiltonian(&p, BoundaryCondition::Ring)).unwrap();
        assert!(decay_distribution_spectral(&p, StartCell(3), &spec).is_err());
    }

    #[test]
    fn start_cell_bounds() {
        let p = params(0.3, 0.5, 6, LossProfile::Uniform { gamma: 1.0 });
        assert!(StartCell::new(0, &p).is_err());
        assert!(StartCell::new(7, &p).is_err());
        assert_eq!(StartCell::new(6, &p).unwrap().get(), 6);
    }

    #[test]
    fn bookkeeping_and_monotone_decay() {
        let p = params(0.7, 0.5, 12, LossProfile::Linear { gamma: 0.3 });
        let h = build_hamiltonian(&p, BoundaryCondition::Open);
        let prop = Propagator::new(h.matrix());
        let mut scratch = Scratch::new(24);
        let mut s = WalkerState::localized(12, StartCell(9));
        let dt = IntegratorConfig::default_dt(&p);
        let mut last_norm = s.norm_sqr();
        let mut last_acc = s.accumulated.clone();
        for _ in 0..20_000 {
            prop.step(&mut s, dt, &mut scratch);
            assert!((s.total_probability() - 1.0).abs() <= 1e-8);
            let norm = s.norm_sqr();
            assert!(norm <= last_norm + 1e-15);
            assert!(s.accumulated.iter().zip(&last_acc).all(|(a, b)| a >= b));
            last_norm = norm;
            last_acc.clone_from(&s.accumulated);
        }
    }
}
