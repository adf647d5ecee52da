//! The `simulate`, `spectrum` and `sweep` subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use edgeburst_core::{
    build_hamiltonian, decay_distribution, edge_burst_metrics, eigensystem, imaginary_gap, mean_displacement,
    spectra_compare, BoundaryCondition, DecayDistribution, EdgeBurstMetrics, Error as CoreError, Spectrum,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Profile, RunConfig};

/// What a command run produced on disk and whether it fully succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub converged: bool,
    pub messages: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ResolvedConfig<'a> {
    #[serde(flatten)]
    cfg: &'a RunConfig,
    dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_n: Option<Vec<f64>>,
}

fn resolved(cfg: &RunConfig) -> Result<ResolvedConfig<'_>> {
    let params = cfg.spectral_params()?;
    let gamma_n = (cfg.profile == Profile::Random).then(|| params.rates().to_vec());
    Ok(ResolvedConfig { cfg, dt: cfg.integrator(&params).dt, gamma_n })
}

/// Shortest decimal that round-trips to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir, name, &text)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

#[derive(Debug, Serialize)]
struct MetricsFile<'a> {
    p1_over_pmin: Option<f64>,
    p1_over_ps: Option<f64>,
    edge_fraction: Option<f64>,
    pmin_index: Option<usize>,
    residual: f64,
    partial: bool,
    config: ResolvedConfig<'a>,
}

/// Walk outcome for one configuration: a finished or partial distribution.
struct WalkRun {
    dist: DecayDistribution,
    error: Option<String>,
    partial: bool,
}

fn run_walk(cfg: &RunConfig) -> Result<WalkRun> {
    let params = cfg.walk_params()?;
    let start = cfg.start(&params)?;
    match decay_distribution(&params, start, cfg.decay_method(&params)) {
        Ok((dist, _)) => Ok(WalkRun { dist, error: None, partial: false }),
        Err(e @ CoreError::NonConvergence { .. }) => {
            let msg = e.to_string();
            let CoreError::NonConvergence { partial, .. } = e else { unreachable!() };
            Ok(WalkRun { dist: *partial, error: Some(msg), partial: true })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn decay_csv(cfg: &RunConfig, dist: &DecayDistribution) -> Result<String> {
    let params = cfg.walk_params()?;
    let mut out = String::from("n,gamma_n,P_n\n");
    for (i, (g, p)) in params.rates().iter().zip(&dist.p).enumerate() {
        writeln!(out, "{},{},{}", i + 1, num(*g), num(*p))?;
    }
    Ok(out)
}

/// Writes `decay.csv` and `metrics.json`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.boundary() != BoundaryCondition::Open {
        bail!("the walk is defined on the open lattice; use --bc open (ring spectra: `spectrum`)");
    }
    fs::create_dir_all(&cfg.out_dir)?;
    let walk = run_walk(cfg)?;
    let mut messages = Vec::new();
    let mut error = walk.error.clone();
    let metrics = match edge_burst_metrics(&walk.dist) {
        Ok(m) => Some(m),
        Err(e) => {
            error.get_or_insert_with(|| e.to_string());
            None
        }
    };
    write_file(&cfg.out_dir, "decay.csv", &decay_csv(cfg, &walk.dist)?)?;
    let file = MetricsFile {
        p1_over_pmin: metrics.map(|m| m.p1_over_pmin),
        p1_over_ps: metrics.map(|m| m.p1_over_ps),
        edge_fraction: metrics.map(|m| m.edge_fraction),
        pmin_index: metrics.map(|m| m.pmin_index),
        residual: walk.dist.residual,
        partial: walk.partial,
        config: resolved(cfg)?,
    };
    write_json(&cfg.out_dir, "metrics.json", &file)?;
    if let Some(e) = error {
        messages.push(e);
    }
    Ok(Outcome { converged: !walk.partial, messages })
}

#[derive(Debug, Serialize)]
struct DisplacementJson {
    mean_a: f64,
    mean_b: f64,
}

#[derive(Debug, Serialize)]
struct SpectralFile<'a> {
    imaginary_gap_open: f64,
    imaginary_gap_ring: f64,
    hausdorff_distance: f64,
    mean_displacement: DisplacementJson,
    config: ResolvedConfig<'a>,
}

fn spectrum_csv(spec: &Spectrum) -> Result<String> {
    let mut out = String::from("re,im\n");
    for e in spec.eigenvalues() {
        writeln!(out, "{},{}", num(e.re), num(e.im))?;
    }
    Ok(out)
}

fn open_and_ring(cfg: &RunConfig) -> Result<(Spectrum, Spectrum)> {
    let params = cfg.spectral_params()?;
    let (open, ring) = pool(cfg.jobs)?.join(
        || eigensystem(&build_hamiltonian(&params, BoundaryCondition::Open)),
        || eigensystem(&build_hamiltonian(&params, BoundaryCondition::Ring)),
    );
    Ok((open?, ring?))
}

/// Writes `spectrum_open.csv`, `spectrum_ring.csv` and `spectral.json`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    fs::create_dir_all(&cfg.out_dir)?;
    let (open, ring) = open_and_ring(cfg)?;
    write_file(&cfg.out_dir, "spectrum_open.csv", &spectrum_csv(&open)?)?;
    write_file(&cfg.out_dir, "spectrum_ring.csv", &spectrum_csv(&ring)?)?;
    let d = mean_displacement(&open);
    let file = SpectralFile {
        imaginary_gap_open: imaginary_gap(&open),
        imaginary_gap_ring: imaginary_gap(&ring),
        hausdorff_distance: spectra_compare(&open, &ring),
        mean_displacement: DisplacementJson { mean_a: d.mean_a, mean_b: d.mean_b },
        config: resolved(cfg)?,
    };
    write_json(&cfg.out_dir, "spectral.json", &file)?;
    Ok(Outcome { converged: true, messages: Vec::new() })
}

/// Parameter a sweep varies. Only the loss strength is supported: `gamma`
/// for uniform and linear profiles, `gamma_max` for random ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Gamma,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: RunConfig,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, values: Vec<f64>, base: RunConfig) -> Result<Self> {
        if values.is_empty() {
            bail!("sweep needs at least one value");
        }
        if values.iter().any(|v| !v.is_finite()) {
            bail!("sweep values must be finite");
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            bail!("sweep values must be strictly increasing");
        }
        Ok(Self { parameter, values, base })
    }
}

/// One row of `sweep.csv`; NaN marks quantities that could not be computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub metrics: Option<EdgeBurstMetrics>,
}

fn sweep_point(cfg: &RunConfig, gamma: f64) -> (SweepRow, Vec<String>) {
    let mut warnings = Vec::new();
    let mut row = SweepRow { gamma, mean_a: f64::NAN, mean_b: f64::NAN, metrics: None };

    let spectral = cfg
        .spectral_params()
        .and_then(|p| Ok(eigensystem(&build_hamiltonian(&p, BoundaryCondition::Open))?));
    match spectral {
        Ok(open) => {
            let d = mean_displacement(&open);
            row.mean_a = d.mean_a;
            row.mean_b = d.mean_b;
        }
        Err(e) => warnings.push(format!("gamma={}: spectrum: {e}", num(gamma))),
    }

    match run_walk(cfg) {
        Ok(walk) if !walk.partial => match edge_burst_metrics(&walk.dist) {
            Ok(m) => row.metrics = Some(m),
            Err(e) => warnings.push(format!("gamma={}: metrics: {e}", num(gamma))),
        },
        Ok(walk) => warnings.push(format!("gamma={}: walk: {}", num(gamma), walk.error.unwrap_or_default())),
        Err(e) => warnings.push(format!("gamma={}: walk: {e}", num(gamma))),
    }
    (row, warnings)
}

pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<(SweepRow, Vec<String>)>> {
    let pool = pool(spec.base.jobs)?;
    Ok(pool.install(|| {
        spec.values
            .par_iter()
            .map(|&g| sweep_point(&spec.base.with_gamma(g), g))
            .collect()
    }))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut out = String::from("gamma,mean_A,mean_B,p1_over_pmin,p1_over_ps,edge_fraction\n");
    for r in rows {
        let (a, b, c) = r
            .metrics
            .map_or((f64::NAN, f64::NAN, f64::NAN), |m| (m.p1_over_pmin, m.p1_over_ps, m.edge_fraction));
        writeln!(out, "{},{},{},{},{},{}", num(r.gamma), num(r.mean_a), num(r.mean_b), num(a), num(b), num(c))?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SweepFile<'a> {
    parameter: SweepParameter,
    values: &'a [f64],
    warnings: Vec<String>,
    config: ResolvedConfig<'a>,
}

/// Writes `sweep.csv` and `sweep.json`.
pub fn cmd_sweep(spec: &SweepSpec) -> Result<Outcome> {
    fs::create_dir_all(&spec.base.out_dir)?;
    let results = sweep_rows(spec)?;
    let rows: Vec<SweepRow> = results.iter().map(|(r, _)| *r).collect();
    let warnings: Vec<String> = results.into_iter().flat_map(|(_, w)| w).collect();
    write_file(&spec.base.out_dir, "sweep.csv", &sweep_csv(&rows)?)?;
    let file = SweepFile {
        parameter: spec.parameter,
        values: &spec.values,
        warnings: warnings.clone(),
        config: resolved(&spec.base)?,
    };
    write_json(&spec.base.out_dir, "sweep.json", &file)?;
    Ok(Outcome { converged: warnings.is_empty(), messages: warnings })
}
