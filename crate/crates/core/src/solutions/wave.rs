use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{eval_phase_closed, phase_rate_along, PhaseParams};
use super::profile::{eval_amplitude, eval_amplitude_raw, ProfileSpec};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::wavesystems::{derive_alpha, derive_system1, GkmnCoefficients, TypeIIWaveParams, TypeIWaveParams, WaveSystem};

const CONSISTENCY_TOL: f64 = 1e-12;

/// Anything that can be sampled as a complex field `q(x, y, t)`.
pub trait Wave: Sync {
    fn q(&self, x: f64, y: f64, t: f64) -> Result<Complex64>;
}

/// The zero solution.
pub struct ZeroWave;

impl Wave for ZeroWave {
    fn q(&self, _x: f64, _y: f64, _t: f64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
}

fn amplitude(spec: &ProfileSpec, xi: f64) -> Result<f64> {
    if spec.family.is_periodic() {
        eval_amplitude_raw(spec, xi)
    } else {
        eval_amplitude(spec, xi)
    }
}

fn agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONSISTENCY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// `q = p(x + m y - c t) exp(i(kappa x + omega y - r t + theta))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeIWave {
    pub amplitude: ProfileSpec,
    pub eq: GkmnCoefficients,
    pub params: TypeIWaveParams,
}

impl TypeIWave {
    pub fn new(amplitude: ProfileSpec, eq: GkmnCoefficients, params: TypeIWaveParams) -> Result<Self> {
        let derived = derive_system1(&eq, &params)?;
        let WaveSystem::TypeI(s) = amplitude.system else {
            return Err(Error::Domain(format!("{} is not a Type I family", amplitude.family)));
        };
        if !agree(s.linear, derived.linear) || !agree(s.cubic, derived.cubic) {
            return Err(Error::Constraint(format!(
                "wave parameters give (linear, cubic) = ({}, {}), profile uses ({}, {})",
                derived.linear, derived.cubic, s.linear, s.cubic
            )));
        }
        Ok(Self { amplitude, eq, params })
    }

    pub fn xi(&self, x: f64, y: f64, t: f64) -> f64 {
        x + self.params.m * y - self.params.c() * t
    }
}

impl Wave for TypeIWave {
    fn q(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        let w = &self.params;
        let p = amplitude(&self.amplitude, self.xi(x, y, t))?;
        Ok(Complex64::from_polar(1.0, w.kappa * x + w.omega * y - w.r * t + w.theta) * p)
    }
}

/// Builds a Type I wave from a profile and the carrier parameters.
pub fn assemble_type1(
    spec: ProfileSpec,
    eq: GkmnCoefficients,
    m: f64,
    kappa: f64,
    omega: f64,
    r: f64,
    theta: f64,
) -> Result<TypeIWave> {
    TypeIWave::new(spec, eq, TypeIWaveParams::new(&eq, m, kappa, omega, r, theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSource {
    Printed,
    Quadrature,
}

/// `q = phi(xi) exp(i(Phi(xi) - mu t))`, `xi = x + m y - c t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeIIWave {
    pub amplitude: ProfileSpec,
    pub eq: GkmnCoefficients,
    pub params: TypeIIWaveParams,
    pub constant: f64,
    pub source: PhaseSource,
    /// Reference point `(xi, Phi(xi))` for quadrature phases.
    anchor: (f64, f64),
}

impl TypeIIWave {
    /// Checks `alpha1` and `alpha3` against the physical parameters; `alpha2` may be overridden.
    pub fn new(amplitude: ProfileSpec, eq: GkmnCoefficients, params: TypeIIWaveParams, source: PhaseSource) -> Result<Self> {
        let derived = derive_alpha(&eq, &params)?;
        let WaveSystem::TypeII(al) = amplitude.system else {
            return Err(Error::Domain(format!("{} is not a Type II family", amplitude.family)));
        };
        if !agree(al.alpha1, derived.alpha1) || !agree(al.alpha3, derived.alpha3) {
            return Err(Error::Constraint(format!(
                "wave parameters give (alpha1, alpha3) = ({}, {}), profile uses ({}, {})",
                derived.alpha1, derived.alpha3, al.alpha1, al.alpha3
            )));
        }
        if source == PhaseSource::Printed && amplitude.family.phase_family().is_none() {
            return Err(Error::Domain(format!("{} has no printed phase", amplitude.family)));
        }
        Ok(Self { amplitude, eq, params, constant: 0.0, source, anchor: (0.0, 0.0) })
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.anchor.1 += constant - self.constant;
        self.constant = constant;
        self
    }

    /// Moves the quadrature reference point to `xi`, so nearby phases need
    /// only short integrals.
    pub fn anchored_at(mut self, xi: f64) -> Result<Self> {
        let value = self.phase(xi)?;
        self.anchor = (xi, value);
        Ok(self)
    }

    pub fn phase_params(&self) -> PhaseParams {
        PhaseParams { e: self.params.e, c: self.params.c, am: self.eq.a * self.params.m, constant: self.constant }
    }

    pub fn xi(&self, x: f64, y: f64, t: f64) -> f64 {
        x + self.params.m * y - self.params.c * t
    }

    pub fn phase(&self, xi: f64) -> Result<f64> {
        let p = self.phase_params();
        match self.source {
            PhaseSource::Printed => eval_phase_closed(&self.amplitude, &p, xi),
            PhaseSource::Quadrature => {
                let (x0, v0) = self.anchor;
                let mut failure = None;
                let value = integrate(
                    |s| {
                        phase_rate_along(&self.amplitude, &p, s).unwrap_or_else(|e| {
                            failure.get_or_insert(e);
                            f64::NAN
                        })
                    },
                    x0,
                    xi,
                    1e-13,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                Ok(v0 + value?)
            }
        }
    }
}

impl Wave for TypeIIWave {
    fn q(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
        let xi = self.xi(x, y, t);
        let phi = amplitude(&self.amplitude, xi)?;
        let theta = self.phase(xi)? - self.params.mu * t;
        Ok(Complex64::from_polar(1.0, theta) * phi)
    }
}
