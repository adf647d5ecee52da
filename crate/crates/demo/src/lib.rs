//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain-Rust twin (the `*_impl` functions) so
//! the logic can be tested natively without a JS runtime.

use edgeburst_core::{
    build_hamiltonian, decay_distribution, edge_burst_metrics, eigensystem, imaginary_gap, mean_displacement,
    spectra_compare, BoundaryCondition, DecayMethod, IntegratorConfig, LatticeParams, LossProfile, StartCell,
};
use wasm_bindgen::prelude::*;

/// Larger lattices make the dense eigensolver sluggish in a browser tab.
pub const MAX_CELLS: usize = 150;

fn loss(profile: &str, gamma: f64, seed: u32) -> Result<LossProfile, String> {
    match profile {
        "uniform" => Ok(LossProfile::Uniform { gamma }),
        "linear" => Ok(LossProfile::Linear { gamma }),
        "random" => Ok(LossProfile::Random { gamma_max: gamma, seed: seed.into() }),
        other => Err(format!("unknown loss profile `{other}`")),
    }
}

fn check_cells(n: usize) -> Result<(), String> {
    if n > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} cells in the demo, got {n}"));
    }
    Ok(())
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Walk {
    decay: Vec<f64>,
    rates: Vec<f64>,
    p1_over_pmin: f64,
    p1_over_ps: f64,
    edge_fraction: f64,
    route: String,
}

#[wasm_bindgen]
impl Walk {
    /// P_n for n = 1..=N.
    #[wasm_bindgen(getter)]
    pub fn decay(&self) -> Vec<f64> {
        self.decay.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn rates(&self) -> Vec<f64> {
        self.rates.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn p1_over_pmin(&self) -> f64 {
        self.p1_over_pmin
    }
    #[wasm_bindgen(getter)]
    pub fn p1_over_ps(&self) -> f64 {
        self.p1_over_ps
    }
    #[wasm_bindgen(getter)]
    pub fn edge_fraction(&self) -> f64 {
        self.edge_fraction
    }
    #[wasm_bindgen(getter)]
    pub fn route(&self) -> String {
        self.route.clone()
    }
}

pub fn walk_impl(t1: f64, t2: f64, n: usize, s: usize, profile: &str, gamma: f64, seed: u32) -> Result<Walk, String> {
    check_cells(n)?;
    let p = LatticeParams::new(t1, t2, n, loss(profile, gamma, seed)?).map_err(|e| e.to_string())?;
    let start = StartCell::new(s, &p).map_err(|e| e.to_string())?;
    let (dist, route) = decay_distribution(&p, start, DecayMethod::Auto(IntegratorConfig::for_params(&p)))
        .map_err(|e| e.to_string())?;
    let m = edge_burst_metrics(&dist).map_err(|e| e.to_string())?;
    Ok(Walk {
        rates: p.rates().to_vec(),
        decay: dist.p,
        p1_over_pmin: m.p1_over_pmin,
        p1_over_ps: m.p1_over_ps,
        edge_fraction: m.edge_fraction,
        route: route.name().to_string(),
    })
}

/// Decay distribution of a walker started on site A of cell `s`.
#[wasm_bindgen]
pub fn walk(t1: f64, t2: f64, n: usize, s: usize, profile: &str, gamma: f64, seed: u32) -> Result<Walk, JsError> {
    walk_impl(t1, t2, n, s, profile, gamma, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Spectra {
    open: Vec<f64>,
    ring: Vec<f64>,
    gap_open: f64,
    gap_ring: f64,
    distance: f64,
}

#[wasm_bindgen]
impl Spectra {
    /// Open-chain eigenvalues as interleaved `re, im` pairs.
    #[wasm_bindgen(getter)]
    pub fn open(&self) -> Vec<f64> {
        self.open.clone()
    }
    /// Ring eigenvalues as interleaved `re, im` pairs.
    #[wasm_bindgen(getter)]
    pub fn ring(&self) -> Vec<f64> {
        self.ring.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn gap_open(&self) -> f64 {
        self.gap_open
    }
    #[wasm_bindgen(getter)]
    pub fn gap_ring(&self) -> f64 {
        self.gap_ring
    }
    #[wasm_bindgen(getter)]
    pub fn distance(&self) -> f64 {
        self.distance
    }
}

pub fn spectra_impl(t1: f64, t2: f64, n: usize, profile: &str, gamma: f64, seed: u32) -> Result<Spectra, String> {
    check_cells(n)?;
    let p = LatticeParams::diagnostic(t1, t2, n, loss(profile, gamma, seed)?).map_err(|e| e.to_string())?;
    let solve = |bc| eigensystem(&build_hamiltonian(&p, bc)).map_err(|e| e.to_string());
    let (open, ring) = (solve(BoundaryCondition::Open)?, solve(BoundaryCondition::Ring)?);
    let flat = |s: &edgeburst_core::Spectrum| s.eigenvalues().iter().flat_map(|e| [e.re, e.im]).collect();
    Ok(Spectra {
        open: flat(&open),
        ring: flat(&ring),
        gap_open: imaginary_gap(&open),
        gap_ring: imaginary_gap(&ring),
        distance: spectra_compare(&open, &ring),
    })
}

/// Open and ring spectra with their imaginary gaps and Hausdorff distance.
#[wasm_bindgen]
pub fn spectra(t1: f64, t2: f64, n: usize, profile: &str, gamma: f64, seed: u32) -> Result<Spectra, JsError> {
    spectra_impl(t1, t2, n, profile, gamma, seed).map_err(|e| JsError::new(&e))
}

pub fn displacement_sweep_impl(t1: f64, t2: f64, n: usize, profile: &str, gammas: &[f64], seed: u32) -> Result<Vec<f64>, String> {
    check_cells(n)?;
    let mut out = Vec::with_capacity(2 * gammas.len());
    for &g in gammas {
        let p = LatticeParams::diagnostic(t1, t2, n, loss(profile, g, seed)?).map_err(|e| e.to_string())?;
        let spec = eigensystem(&build_hamiltonian(&p, BoundaryCondition::Open)).map_err(|e| e.to_string())?;
        let d = mean_displacement(&spec);
        out.extend([d.mean_a, d.mean_b]);
    }
    Ok(out)
}

/// Averaged mean displacement per sublattice over a list of loss
/// strengths, returned as interleaved `mean_A, mean_B` pairs.
#[wasm_bindgen]
pub fn displacement_sweep(t1: f64, t2: f64, n: usize, profile: &str, gammas: &[f64], seed: u32) -> Result<Vec<f64>, JsError> {
    displacement_sweep_impl(t1, t2, n, profile, gammas, seed).map_err(|e| JsError::new(&e))
}
