//! Run configuration: defaults, flat `key = value` config files and
//! command-line overrides, resolved in that order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use edgeburst_core::{BoundaryCondition, DecayMethod, IntegratorConfig, LatticeParams, LossProfile, StartCell};
use serde::Serialize;

pub const OUT_ENV: &str = "EDGEBURST_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Uniform,
    Linear,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Open,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed form (eigen-expansion, then Schur), integrator as last resort.
    Auto,
    Ode,
    Spectral,
    Schur,
}

macro_rules! impl_parse_via_value_enum {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = anyhow::Error;
            fn from_str(s: &str) -> Result<Self> {
                <$t as ValueEnum>::from_str(s, true).map_err(|e| anyhow!(e))
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let v = self.to_possible_value().expect("no skipped variants");
                f.write_str(v.get_name())
            }
        }
    )*};
}
impl_parse_via_value_enum!(Profile, Bc, Method);

/// Flags shared by every subcommand. Everything is optional so that a
/// config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    /// Number of unit cells N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Starting unit cell S (defaults to N - N/6).
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, value_enum)]
    pub profile: Option<Profile>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "gamma-max")]
    pub gamma_max: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub bc: Option<Bc>,
    /// RK4 step (defaults to 0.01 / max(1, max γ_n)).
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long = "eps-stop")]
    pub eps_stop: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Output directory (defaults to $EDGEBURST_OUT, then the current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for independent computations.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Fully resolved configuration, echoed into the JSON outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub t1: f64,
    pub t2: f64,
    pub n: usize,
    pub s: usize,
    pub profile: Profile,
    pub gamma: f64,
    pub gamma_max: f64,
    pub seed: u64,
    pub bc: Bc,
    /// Explicit RK4 step; the JSON echo carries the resolved value instead.
    #[serde(skip)]
    pub dt: Option<f64>,
    pub t_max: f64,
    pub eps_stop: f64,
    pub method: Method,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t1: 0.3,
            t2: 0.5,
            n: 60,
            s: 50,
            profile: Profile::Uniform,
            gamma: 1.0,
            gamma_max: 2.0,
            seed: 0,
            bc: Bc::Open,
            dt: None,
            t_max: IntegratorConfig::DEFAULT_T_MAX,
            eps_stop: IntegratorConfig::DEFAULT_EPS_STOP,
            method: Method::Auto,
            out_dir: PathBuf::from("."),
            jobs: 1,
        }
    }
}

impl RunConfig {
    /// Defaults, then `$EDGEBURST_OUT`, then the config file, then flags.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut file = RunArgs::default();
        let mut extra = Vec::new();
        if let Some(path) = &args.config {
            extra = read_config_file(path, &mut file)?;
        }
        if let Some((key, _)) = extra.first() {
            bail!("unknown config key `{key}`");
        }
        Self::merge(args, &file)
    }

    pub(crate) fn merge(args: &RunArgs, file: &RunArgs) -> Result<Self> {
        let d = Self::default();
        macro_rules! pick {
            ($f:ident) => {
                args.$f.or(file.$f)
            };
        }
        let n = pick!(n).unwrap_or(d.n);
        let out_dir = args
            .out
            .clone()
            .or_else(|| file.out.clone())
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or(d.out_dir);
        let cfg = Self {
            t1: pick!(t1).unwrap_or(d.t1),
            t2: pick!(t2).unwrap_or(d.t2),
            n,
            s: pick!(s).unwrap_or(n - n / 6),
            profile: pick!(profile).unwrap_or(d.profile),
            gamma: pick!(gamma).unwrap_or(d.gamma),
            gamma_max: pick!(gamma_max).unwrap_or(d.gamma_max),
            seed: pick!(seed).unwrap_or(d.seed),
            bc: pick!(bc).unwrap_or(d.bc),
            dt: pick!(dt),
            t_max: pick!(t_max).unwrap_or(d.t_max),
            eps_stop: pick!(eps_stop).unwrap_or(d.eps_stop),
            method: pick!(method).unwrap_or(d.method),
            out_dir,
            jobs: pick!(jobs).unwrap_or(d.jobs).max(1),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("n must be at least 1");
        }
        if self.s == 0 || self.s > self.n {
            bail!("s must lie in 1..={}, got {}", self.n, self.s);
        }
        self.integrator_for(self.max_rate_hint()).validate()?;
        Ok(())
    }

    fn max_rate_hint(&self) -> f64 {
        match self.profile {
            Profile::Uniform => self.gamma,
            Profile::Linear => self.gamma * self.n as f64,
            Profile::Random => self.gamma_max,
        }
    }

    pub fn loss(&self) -> LossProfile {
        match self.profile {
            Profile::Uniform => LossProfile::Uniform { gamma: self.gamma },
            Profile::Linear => LossProfile::Linear { gamma: self.gamma },
            Profile::Random => LossProfile::Random { gamma_max: self.gamma_max, seed: self.seed },
        }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        let mut c = self.clone();
        match c.profile {
            Profile::Random => c.gamma_max = gamma,
            _ => c.gamma = gamma,
        }
        c
    }

    /// Lattice for a walk: every loss rate must be positive.
    pub fn walk_params(&self) -> Result<LatticeParams> {
        Ok(LatticeParams::new(self.t1, self.t2, self.n, self.loss())?)
    }

    /// Lattice for spectral diagnostics, where γ = 0 is allowed.
    pub fn spectral_params(&self) -> Result<LatticeParams> {
        Ok(LatticeParams::diagnostic(self.t1, self.t2, self.n, self.loss())?)
    }

    pub fn start(&self, params: &LatticeParams) -> Result<StartCell> {
        Ok(StartCell::new(self.s, params)?)
    }

    pub fn boundary(&self) -> BoundaryCondition {
        match self.bc {
            Bc::Open => BoundaryCondition::Open,
            Bc::Ring => BoundaryCondition::Ring,
        }
    }

    fn integrator_for(&self, max_rate: f64) -> IntegratorConfig {
        IntegratorConfig {
            dt: self.dt.unwrap_or(0.01 / max_rate.max(1.0)),
            t_max: self.t_max,
            eps_stop: self.eps_stop,
        }
    }

    pub fn integrator(&self, params: &LatticeParams) -> IntegratorConfig {
        self.integrator_for(params.max_rate())
    }

    pub fn decay_method(&self, params: &LatticeParams) -> DecayMethod {
        let integ = self.integrator(params);
        match self.method {
            Method::Auto => DecayMethod::Auto(integ),
            Method::Ode => DecayMethod::Ode(integ),
            Method::Spectral => DecayMethod::Spectral,
            Method::Schur => DecayMethod::Schur,
        }
    }
}

/// Reads a flat config file into `into`. Blank lines and `#` comments are
/// skipped; keys may use `-` or `_`. Unrecognised keys are returned.
pub fn read_config_file(path: &Path, into: &mut RunArgs) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text, into).with_context(|| format!("in config {}", path.display()))
}

pub fn parse_config(text: &str, into: &mut RunArgs) -> Result<Vec<(String, String)>> {
    fn val<T: FromStr>(key: &str, raw: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        raw.parse::<T>().map_err(|e| anyhow!("bad value `{raw}` for `{key}`: {e}"))
    }

    let mut unknown = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, raw) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let raw = raw.trim();
        match key.as_str() {
            "t1" => into.t1 = Some(val(&key, raw)?),
            "t2" => into.t2 = Some(val(&key, raw)?),
            "n" => into.n = Some(val(&key, raw)?),
            "s" => into.s = Some(val(&key, raw)?),
            "profile" => into.profile = Some(val(&key, raw)?),
            "gamma" => into.gamma = Some(val(&key, raw)?),
            "gamma-max" => into.gamma_max = Some(val(&key, raw)?),
            "seed" => into.seed = Some(val(&key, raw)?),
            "bc" => into.bc = Some(val(&key, raw)?),
            "dt" => into.dt = Some(val(&key, raw)?),
            "t-max" => into.t_max = Some(val(&key, raw)?),
            "eps-stop" => into.eps_stop = Some(val(&key, raw)?),
            "method" => into.method = Some(val(&key, raw)?),
            "out" => into.out = Some(PathBuf::from(raw)),
            "jobs" => into.jobs = Some(val(&key, raw)?),
            _ => unknown.push((key, raw.to_string())),
        }
    }
    Ok(unknown)
}
