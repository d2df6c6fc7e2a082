//! JSON run configuration, command-line overrides and system resolution.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use gkmn::solutions::{default_system, PhaseSource, SolutionFamily};
use gkmn::verify::Tolerances;
use gkmn::wavesystems::{
    derive_alpha, derive_system1, AlphaCoefficients, GkmnCoefficients, SystemICoefficients, TypeIIWaveParams,
    TypeIWaveParams, WaveSystem,
};

use crate::exit::{Exit, ExitResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Equation {
    pub a: Option<f64>,
    pub b: Option<f64>,
}

/// Physical wave parameters; which fields are needed depends on the mode.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wave {
    pub m: Option<f64>,
    pub kappa: Option<f64>,
    pub omega: Option<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub c: Option<f64>,
    pub mu: Option<f64>,
    pub e: Option<f64>,
}

/// Reduced-system coefficients given directly.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub linear: Option<f64>,
    pub cubic: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub alpha3: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub equation: Option<Equation>,
    pub mode: Option<Mode>,
    pub wave: Option<Wave>,
    pub coefficients: Option<Coefficients>,
    pub energy: Option<f64>,
    pub family: Option<String>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub samples: Option<usize>,
    pub phase: Option<PhaseSource>,
    pub grid: Option<usize>,
    pub levels: Option<Vec<f64>>,
    pub bounds: Option<[f64; 4]>,
    pub output: Option<PathBuf>,
    pub tolerances: Option<Tolerances>,
}

/// Flags shared by every subcommand that needs a system. Flags win over the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Linear coefficient of the Type I system
    #[arg(long = "A", allow_hyphen_values = true)]
    pub linear: Option<f64>,
    /// Cubic coefficient of the Type I system
    #[arg(long = "B", allow_hyphen_values = true)]
    pub cubic: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha3: Option<f64>,
    /// Equation coefficient of q_xy
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Equation coefficient of the nonlinear term
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<f64>,
}

fn over(slot: &mut Option<f64>, flag: Option<f64>) {
    if flag.is_some() {
        *slot = flag;
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> ExitResult<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| Exit::io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Exit::config(format!("{}: {e}", path.display())))
    }

    /// Loads the config named by `args` and applies the flag overrides.
    pub fn from_args(args: &SystemArgs) -> ExitResult<Self> {
        let mut cfg = Self::load(args.config.as_deref())?;
        if args.mode.is_some() {
            cfg.mode = args.mode;
        }
        let direct = [args.linear, args.cubic, args.alpha1, args.alpha2, args.alpha3];
        if direct.iter().any(Option::is_some) {
            let co = cfg.coefficients.get_or_insert_with(Default::default);
            over(&mut co.linear, args.linear);
            over(&mut co.cubic, args.cubic);
            over(&mut co.alpha1, args.alpha1);
            over(&mut co.alpha2, args.alpha2);
            over(&mut co.alpha3, args.alpha3);
        }
        if args.a.is_some() || args.b.is_some() {
            let eq = cfg.equation.get_or_insert_with(Default::default);
            over(&mut eq.a, args.a);
            over(&mut eq.b, args.b);
        }
        let physical = [args.m, args.kappa, args.omega, args.r, args.theta, args.c, args.mu, args.e];
        if physical.iter().any(Option::is_some) {
            let w = cfg.wave.get_or_insert_with(Default::default);
            over(&mut w.m, args.m);
            over(&mut w.kappa, args.kappa);
            over(&mut w.omega, args.omega);
            over(&mut w.r, args.r);
            over(&mut w.theta, args.theta);
            over(&mut w.c, args.c);
            over(&mut w.mu, args.mu);
            over(&mut w.e, args.e);
        }
        Ok(cfg)
    }

    pub fn has_system(&self) -> bool {
        self.coefficients.is_some() || self.wave.is_some()
    }

    /// The reduced system, from direct coefficients or from physical parameters.
    pub fn system(&self) -> ExitResult<WaveSystem> {
        match (&self.coefficients, &self.wave) {
            (Some(_), Some(_)) => Err(Exit::config("give either physical wave parameters or direct coefficients, not both")),
            (Some(co), None) => self.direct(co),
            (None, Some(_)) => match self.physical()? {
                Physical::TypeI(eq, w) => Ok(WaveSystem::TypeI(derive_system1(&eq, &w)?)),
                Physical::TypeII(eq, w) => Ok(WaveSystem::TypeII(derive_alpha(&eq, &w)?)),
            },
            (None, None) => Err(Exit::config("no system given: pass --A/--B, --alpha1..3, or physical parameters")),
        }
    }

    /// The system of `family`: the configured one when present, else the catalog default.
    pub fn system_for(&self, family: SolutionFamily) -> ExitResult<WaveSystem> {
        if self.has_system() {
            self.system()
        } else {
            Ok(default_system(family))
        }
    }

    fn direct(&self, co: &Coefficients) -> ExitResult<WaveSystem> {
        let t1 = co.linear.is_some() || co.cubic.is_some();
        let t2 = co.alpha1.is_some() || co.alpha2.is_some() || co.alpha3.is_some();
        let system = match (t1, t2) {
            (true, true) => return Err(Exit::config("mixes Type I (A, B) and Type II (alpha) coefficients")),
            (true, false) => {
                let (Some(lin), Some(cub)) = (co.linear, co.cubic) else {
                    return Err(Exit::config("Type I needs both A and B"));
                };
                WaveSystem::TypeI(SystemICoefficients::new(lin, cub))
            }
            (false, true) => {
                let (Some(a1), Some(a2), Some(a3)) = (co.alpha1, co.alpha2, co.alpha3) else {
                    return Err(Exit::config("Type II needs alpha1, alpha2 and alpha3"));
                };
                WaveSystem::TypeII(AlphaCoefficients::new(a1, a2, a3)?)
            }
            (false, false) => return Err(Exit::config("coefficients block is empty")),
        };
        match (self.mode, system.is_type_ii()) {
            (Some(Mode::Type1), true) | (Some(Mode::Type2), false) => {
                Err(Exit::config("mode does not match the kind of coefficients given"))
            }
            _ => Ok(system),
        }
    }

    pub fn physical(&self) -> ExitResult<Physical> {
        let w = self.wave.clone().unwrap_or_default();
        let eq = self.equation.clone().unwrap_or_default();
        let (Some(a), Some(b)) = (eq.a, eq.b) else {
            return Err(Exit::config("physical parameters need the equation coefficients a and b"));
        };
        let eq = GkmnCoefficients::new(a, b)?;
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Exit::config(format!("missing wave parameter {name}")));
        match self.mode {
            Some(Mode::Type1) => Ok(Physical::TypeI(
                eq,
                TypeIWaveParams::new(
                    &eq,
                    need(w.m, "m")?,
                    need(w.kappa, "kappa")?,
                    need(w.omega, "omega")?,
                    need(w.r, "r")?,
                    w.theta.unwrap_or(0.0),
                ),
            )),
            Some(Mode::Type2) => Ok(Physical::TypeII(
                eq,
                TypeIIWaveParams { m: need(w.m, "m")?, c: need(w.c, "c")?, mu: need(w.mu, "mu")?, e: need(w.e, "e")? },
            )),
            None => Err(Exit::config("physical parameters need --mode type1 or type2")),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }
}

pub enum Physical {
    TypeI(GkmnCoefficients, TypeIWaveParams),
    TypeII(GkmnCoefficients, TypeIIWaveParams),
}
