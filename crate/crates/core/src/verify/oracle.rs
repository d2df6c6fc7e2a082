//! Reference values for the elliptic kernel from the defining Legendre integrals.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::integrate;

const TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// `args = [phi, k2]`
    F,
    /// `args = [phi, k2]`
    E,
    /// `args = [phi, n, k2]`
    Pi,
    /// `args = [u, k2]`
    Sn,
}

fn legendre_f(phi: f64, k2: f64) -> Result<f64> {
    integrate(|t| 1.0 / (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, TOL)
}

fn legendre_e(phi: f64, k2: f64) -> Result<f64> {
    integrate(|t| (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, TOL)
}

fn legendre_pi(phi: f64, n: f64, k2: f64) -> Result<f64> {
    integrate(
        |t| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - k2 * s2).sqrt())
        },
        0.0,
        phi,
        TOL,
    )
}

/// `sn(u)` as `sin(phi)` where `F(phi) = u`, solved by safeguarded Newton.
fn sn_by_inversion(u: f64, k2: f64) -> Result<f64> {
    let kk = legendre_f(FRAC_PI_2, k2)?;
    // Reduce to [-2K, 2K], where F is a bijection onto [-pi, pi].
    let period = 4.0 * kk;
    let ur = u - period * (u / period).round();
    let (mut lo, mut hi) = (-std::f64::consts::PI, std::f64::consts::PI);
    let mut phi = ur / kk * FRAC_PI_2;
    for _ in 0..100 {
        let g = legendre_f(phi, k2)? - ur;
        if g > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let step = g * (1.0 - k2 * phi.sin().powi(2)).sqrt();
        let mut next = phi - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - phi).abs() <= 1e-15 * phi.abs().max(1.0) {
            phi = next;
            break;
        }
        phi = next;
    }
    Ok(phi.sin())
}

/// Reference value of F, E, Pi or sn by adaptive quadrature.
pub fn elliptic_oracle(kind: OracleKind, args: &[f64]) -> Result<f64> {
    let need = if kind == OracleKind::Pi { 3 } else { 2 };
    if args.len() != need {
        return Err(domain(format!("{kind:?} oracle takes {need} arguments, got {}", args.len())));
    }
    let k2 = args[need - 1];
    if !(0.0..1.0).contains(&k2) {
        return Err(domain(format!("k^2 = {k2} outside [0, 1)")));
    }
    match kind {
        OracleKind::F => legendre_f(args[0], k2),
        OracleKind::E => legendre_e(args[0], k2),
        OracleKind::Pi => legendre_pi(args[0], args[1], k2),
        OracleKind::Sn => sn_by_inversion(args[0], k2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic;

    #[test]
    fn reference_values() {
        let k = elliptic_oracle(OracleKind::F, &[FRAC_PI_2, 0.5]).unwrap();
        assert!((k - 1.854_074_677_301_372).abs() < 1e-12);
        let f = elliptic_oracle(OracleKind::F, &[0.6, 0.3]).unwrap();
        let p = elliptic_oracle(OracleKind::Pi, &[0.6, 0.0, 0.3]).unwrap();
        assert!((f - p).abs() < 1e-14);
        for &u in &[-7.3, -0.4, 0.0, 1.2, 3.9, 11.0] {
            let s = elliptic_oracle(OracleKind::Sn, &[u, 0.7]).unwrap();
            assert!((s - elliptic::jacobi(u, 0.7).unwrap().sn).abs() < 1e-10, "{u}");
        }
    }
}
