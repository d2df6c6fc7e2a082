use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::family::{PhaseFamily, SolutionFamily};
use super::profile::{eval_amplitude_raw, phib1_parts, phib3_parts, ProfileSpec};
use crate::elliptic::{complete_k, incomplete_pi, jacobi, jacobi_cd, jacobi_epsilon, jacobi_ratios, jacobi_sd};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::wavesystems::{AlphaCoefficients, WaveSystem};

/// Constants entering the phase rate `e/(am phi^2) + c/(2am)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub e: f64,
    pub c: f64,
    pub am: f64,
    /// Integration constant added to every phase.
    pub constant: f64,
}

impl PhaseParams {
    pub fn rate(&self, phi: f64) -> f64 {
        self.e / (self.am * phi * phi) + self.c / (2.0 * self.am)
    }
}

const QUAD_TOL: f64 = 1e-13;

fn alphas(spec: &ProfileSpec) -> Result<AlphaCoefficients> {
    match spec.system {
        WaveSystem::TypeII(al) => Ok(al),
        WaveSystem::TypeI(_) => Err(Error::Domain(format!("{} has no Type II phase", spec.family))),
    }
}

/// Phase rate along the profile; `None` where the profile is at its blow-up.
fn rate_at(spec: &ProfileSpec, p: &PhaseParams, xi: f64) -> Result<f64> {
    match eval_amplitude_raw(spec, xi) {
        Ok(phi) if phi == 0.0 => Err(Error::Singular(format!("amplitude vanishes at xi = {xi}"))),
        Ok(phi) => Ok(p.rate(phi)),
        // phi -> inf leaves only the asymptotic rate.
        Err(Error::Blowup { .. }) => Ok(p.c / (2.0 * p.am)),
        Err(e) => Err(e),
    }
}

/// Phase rate of the wave at `xi`, from the amplitude.
pub fn phase_rate_along(spec: &ProfileSpec, p: &PhaseParams, xi: f64) -> Result<f64> {
    rate_at(spec, p, xi)
}

/// `C + ∫_0^xi rate(phi(s)) ds` by adaptive quadrature.
pub fn eval_phase_quadrature(spec: &ProfileSpec, p: &PhaseParams, xi: f64) -> Result<f64> {
    alphas(spec)?;
    let mut failure = None;
    let value = integrate(
        |s| match rate_at(spec, p, s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        xi,
        QUAD_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(p.constant + value?)
}

/// Continuous branch of `atan(coef * tn(u) ...)` across the poles of `tn`.
fn atan_tn_branch(value: f64, coef: f64, u: f64, k2: f64) -> Result<f64> {
    let kk = complete_k(k2)?;
    Ok(value.atan() + coef.signum() * PI * (u / (2.0 * kk)).round())
}

fn sign_check(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(Error::Domain(format!("printed phase needs {what} >= 0, got {x}")))
    }
}

/// The printed antiderivative for families that have one, plus `C`.
pub fn eval_phase_closed(spec: &ProfileSpec, p: &PhaseParams, xi: f64) -> Result<f64> {
    let al = alphas(spec)?;
    let Some(which) = spec.family.phase_family() else {
        return Err(Error::Domain(format!("{} has no printed phase", spec.family)));
    };
    let (a1, a2) = (al.alpha1, al.alpha2);
    let (e, c, am) = (p.e, p.c, p.am);
    let r = &spec.roots;
    let h = spec.energy;
    let v = match which {
        PhaseFamily::S1 => {
            let (r1, r2, r3) = (r[0], r[1], r[2]);
            let (lam, k2) = phib1_parts(&al, r);
            let u = lam * xi;
            let jr = jacobi_ratios(u, k2)?;
            let coef = r2 / r1;
            let t = atan_tn_branch(coef * jr.tn * jr.nd, coef, u, k2)?;
            (e + c * r1) / (2.0 * am * r1) * xi + r1 / (2.0 * r2) * (2.0 / (a1 * (r3 - r1))).sqrt() * t
        }
        PhaseFamily::S2 => {
            let (r4, r5) = (r[0], r[1]);
            let sq = (2.0 * a1 * (r5 - r4)).sqrt();
            let x = sq * xi;
            let root = sign_check(r4 * (r5 - r4), "r4 (r5 - r4)")?.sqrt();
            let w = (r5 - r4) / (2.0 * root);
            (2.0 * e * sq + c * r5) / (2.0 * am * r5) * xi
                + (r5 - r4) * e / (8.0 * am * r5 * root) * (w * x.exp() + w - r5 / (2.0 * r4)).atan()
        }
        PhaseFamily::S3 => {
            let (r6, r7) = (r[0], r[1]);
            let (lam, k2, d, _) = phib3_parts(&al, r);
            let t = 3.0 * a1 * r6 + a1 * r7 + 2.0 * a2;
            let u = lam * xi;
            let lin = e * a1 / (am * t) * sign_check(-2.0 / d, "-2/D")?.sqrt() + c / (2.0 * am);
            let coef = e * (t - a1) * sign_check(-2.0 * d, "-2D")?.sqrt() / (am * t * (2.0 * a1 * r6 + a1 * r7 + 2.0 * a2));
            let tail = jacobi_epsilon(u, k2)? + sign_check((a1 * r7 - a1 * r6) / d, "(a1 r7 - a1 r6)/D")?.sqrt() * jacobi_cd(u, k2)?;
            lin * xi + coef * tail
        }
        PhaseFamily::S4 => {
            let rr = r[0];
            let x = (2.0 * a1 * rr * rr + (a1 + 2.0 * a2) * rr + 4.0 * h) / a1;
            let q = sign_check(x, "A^2")?.powf(0.25);
            let w = sign_check(8.0 * a1 * a1 * rr * rr + 4.0 * a1 * (a1 + 2.0 * a2) * rr + 16.0 * a1 * h, "W^4")?.powf(0.25);
            let num = (8.0 * a1 * a1 * rr * rr + 4.0 * a1 * (a1 + 2.0 * a2) * rr + 16.0 * a1 * h).sqrt() - (2.0 * a2 + 3.0 * a1 * rr);
            let den = (32.0 * a1 * a1 * rr * rr + 16.0 * a1 * (a1 + a2) * rr + 64.0 * a1 * h).sqrt();
            let k2 = num / den;
            let n = -(q - rr).powi(2) / (4.0 * q * rr);
            let amp = jacobi(w * xi, k2)?.am;
            let pi3 = incomplete_pi(amp, n, k2)?;
            let inner = sign_check(k2 + (q - rr).powi(2) / (4.0 * q * rr), "atan scale")?.sqrt();
            let outer = sign_check(q * rr / (4.0 * rr * k2 * q + (q - rr).powi(2)), "atan coefficient")?.sqrt();
            (e / (am * (rr - q)) + c / (2.0 * am)) * xi + e * (q + rr) / (2.0 * am * rr * w * (q - rr)) * pi3
                - e / (am * rr * w) * outer * (inner * jacobi_sd(w * xi, k2)?).atan()
        }
        PhaseFamily::S5 => {
            let (r2, r3) = (r[0], r[1]);
            let sq = (2.0 * a1 * (r3 - r2)).sqrt();
            let log_arg = r3 * sq * xi + r3 - 2.0 * r2;
            if !(log_arg > 0.0) {
                return Err(Error::NotReal { xi });
            }
            4.0 * e * (r2 - r3) / (am * r3 * sq) * log_arg.ln()
                + 4.0 * e * (r2 - r3).powi(2) / (am * r3 * sq * (r3 * (sq * xi).exp() + r3 - 2.0 * r2))
                + c * xi / (2.0 * am)
        }
        PhaseFamily::S6 => {
            let (r4, r6) = (r[0], r[2]);
            let (lam, k2) = phib1_parts(&al, r);
            let u = lam * xi;
            let jr = jacobi_ratios(u, k2)?;
            let coef = r6 / (r6 - r4);
            let t = atan_tn_branch(coef * jr.tn * jr.nd, coef, u, k2)?;
            (e + c * r4) / (2.0 * am * r4) * xi
                - e * (r6 - r4) / (4.0 * am * r4 * r4 * r6) * (2.0 / (a1 * (r6 - r4))).sqrt() * t
        }
        PhaseFamily::S7 => {
            let (r7, r8) = (r[0], r[1]);
            let l = (a1 * (r8 - r7) / 2.0).sqrt();
            let u = l * xi;
            let t = ((r8 / (r8 - r7)).sqrt() * u.tan()).atan() + PI * (u / PI).round();
            (2.0 * e + c * r7) / (2.0 * am * r7) * xi - e / (am * r7) * (2.0 / (a1 * r8)).sqrt() * t
        }
        PhaseFamily::S8 => {
            (c * a2 - 3.0 * e * a1) / (2.0 * am * a2) * xi
                - 9.0 * e * a1 * a1 / (4.0 * am * a2 * a2) * sign_check(-3.0 / a2, "-3/alpha2")?.sqrt()
                    * (sign_check(-a2 / 3.0, "-alpha2/3")?.sqrt() * xi).atan()
        }
    };
    if !v.is_finite() {
        return Err(Error::NotReal { xi });
    }
    Ok(p.constant + v)
}

/// Printed phase when available, otherwise quadrature.
pub fn eval_phase(spec: &ProfileSpec, p: &PhaseParams, xi: f64) -> Result<f64> {
    if spec.family.phase_family().is_some() {
        eval_phase_closed(spec, p, xi)
    } else {
        eval_phase_quadrature(spec, p, xi)
    }
}

/// Families whose phase is only available by quadrature.
pub fn quadrature_only(family: SolutionFamily) -> bool {
    family.is_type_ii() && family.phase_family().is_none()
}
