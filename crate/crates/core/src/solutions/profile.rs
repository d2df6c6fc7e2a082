use serde::{Deserialize, Serialize};

use super::family::SolutionFamily::{self, *};
use crate::bifurcation::{equilibria_type2, EquilibriumKind};
use crate::elliptic::{complete_k, jacobi};
use crate::error::{Error, Result};
use crate::wavesystems::{AlphaCoefficients, SystemICoefficients, WaveSystem};

/// Unbounded profiles raise [`Error::Blowup`] once `|value|` reaches this bound.
pub const CLIP: f64 = 1e8;
/// Relative slack when checking ordering chains and equalities between roots.
pub const ROOT_TOL: f64 = 1e-8;
/// Relative bound on the energy spread across the turning points of one orbit.
pub const ENERGY_TOL: f64 = 1e-8;

/// A validated instance of one closed-form family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub family: SolutionFamily,
    pub roots: Vec<f64>,
    pub system: WaveSystem,
    pub energy: f64,
    /// Open validity interval of `xi`; infinite ends are allowed.
    pub domain: (f64, f64),
    /// Full period for periodic families.
    pub period: Option<f64>,
    /// Points where `|value| -> inf`: domain endpoints and interior poles.
    pub blowup: Vec<f64>,
    /// The first pole strictly inside the domain, if any.
    pub interior_pole: Option<f64>,
    /// Amplitude interval stated for the family.
    pub amplitude_range: (f64, f64),
}

/// Domain, period and blow-up points of a validated profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub domain: (f64, f64),
    pub period: Option<f64>,
    pub blowup: Vec<f64>,
}

fn tol_of(scale: f64) -> f64 {
    ROOT_TOL * scale.abs().max(1.0)
}

fn constraint(family: SolutionFamily, msg: impl Into<String>) -> Error {
    Error::Constraint(format!("{}: {}", family.tag(), msg.into()))
}

fn require(cond: bool, family: SolutionFamily, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(constraint(family, msg))
    }
}

fn strictly_increasing(vals: &[f64]) -> bool {
    vals.windows(2).all(|w| w[0] < w[1])
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol_of(a.abs().max(b.abs()))
}

fn modulus_ok(k2: f64) -> bool {
    (0.0..1.0).contains(&k2)
}

fn check_energy(family: SolutionFamily, levels: &[f64], given: Option<f64>) -> Result<f64> {
    let mut all: Vec<f64> = levels.to_vec();
    all.extend(given);
    let Some(&h) = all.first() else {
        return Err(constraint(family, "energy level required"));
    };
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    if !(spread <= ENERGY_TOL * h.abs().max(1.0)) {
        return Err(Error::EnergyMismatch { spread });
    }
    Ok(given.unwrap_or(h))
}

fn type1_parts(family: SolutionFamily, system: &WaveSystem) -> Result<SystemICoefficients> {
    match system {
        WaveSystem::TypeI(s) => Ok(*s),
        WaveSystem::TypeII(_) => Err(family.inadmissible(system)),
    }
}

fn type2_parts(family: SolutionFamily, system: &WaveSystem) -> Result<AlphaCoefficients> {
    match system {
        WaveSystem::TypeII(al) => Ok(*al),
        WaveSystem::TypeI(_) => Err(family.inadmissible(system)),
    }
}

/// Center and saddle `psi` locations of a Type II system (positive side).
fn type2_critical(al: &AlphaCoefficients) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let eqs = equilibria_type2(al)?;
    let pick = |kind: EquilibriumKind| -> Vec<f64> {
        eqs.iter().filter(|e| e.kind == kind && e.location > 0.0).map(|e| e.location * e.location).collect()
    };
    Ok((pick(EquilibriumKind::Center), pick(EquilibriumKind::Saddle), pick(EquilibriumKind::Cusp)))
}

fn energy2_at(al: &AlphaCoefficients, psi: f64) -> Result<f64> {
    if !(psi > 0.0) {
        return Err(Error::Domain(format!("psi root {psi} must be positive")));
    }
    al.energy(psi.sqrt(), 0.0)
}

/// Checks ordering chains, energy consistency and admissibility, then fills in
/// the domain, period and blow-up data.
pub fn validate_profile(
    family: SolutionFamily,
    roots: &[f64],
    system: &WaveSystem,
    energy: Option<f64>,
) -> Result<ProfileSpec> {
    if !family.admissible(system) {
        return Err(family.inadmissible(system));
    }
    if roots.len() != family.root_count() {
        return Err(constraint(
            family,
            format!("expected {} roots, got {}", family.root_count(), roots.len()),
        ));
    }
    if roots.iter().any(|r| !r.is_finite()) || energy.is_some_and(|h| !h.is_finite()) {
        return Err(Error::Domain("roots and energy must be finite".into()));
    }
    let r = roots;
    let h = if family.is_type_ii() {
        validate_type2(family, r, &type2_parts(family, system)?, energy)?
    } else {
        validate_type1(family, r, &type1_parts(family, system)?, energy)?
    };
    let mut spec = ProfileSpec {
        family,
        roots: roots.to_vec(),
        system: *system,
        energy: h,
        domain: (f64::NEG_INFINITY, f64::INFINITY),
        period: None,
        blowup: Vec::new(),
        interior_pole: None,
        amplitude_range: (f64::NEG_INFINITY, f64::INFINITY),
    };
    let extent = compute_extent(&spec)?;
    spec.interior_pole = extent.blowup.iter().copied().find(|&x| x > extent.domain.0 && x < extent.domain.1);
    spec.domain = extent.domain;
    spec.period = extent.period;
    spec.blowup = extent.blowup;
    spec.amplitude_range = amplitude_range(&spec);
    Ok(spec)
}

fn validate_type1(family: SolutionFamily, r: &[f64], s: &SystemICoefficients, energy: Option<f64>) -> Result<f64> {
    let (lin, cub) = (s.linear, s.cubic);
    let level = |p: f64| s.energy(p, 0.0);
    let ps = if lin * cub > 0.0 { (lin / (2.0 * cub)).sqrt() } else { f64::NAN };
    let saddle_energy = -lin * lin / (8.0 * cub);
    match family {
        Pb1 | Pu2 | Pu2p => {
            require(strictly_increasing(r), family, "roots must be strictly increasing")?;
            require(r[0] < -ps && -ps < r[1] && r[2] < ps && ps < r[3], family, "roots must interleave the saddles")?;
            check_energy(family, &r.iter().map(|&p| level(p)).collect::<Vec<_>>(), energy)
        }
        Pb2 | Pb2p => {
            require(close(r[0], -ps) && close(r[1], ps), family, "roots must be the saddle locations")?;
            check_energy(family, &[level(r[0]), level(r[1]), saddle_energy], energy)
        }
        Pb3 | Pb3p => {
            require(strictly_increasing(r), family, "roots must be strictly increasing")?;
            require(
                r[0] < -ps && -ps < r[1] && r[1] < 0.0 && 0.0 < r[2] && r[2] < ps && ps < r[3],
                family,
                "roots must interleave the centers",
            )?;
            check_energy(family, &r.iter().map(|&p| level(p)).collect::<Vec<_>>(), energy)
        }
        Pb4 | Pb4p => {
            require(0.0 < ps && ps < r[0], family, "need 0 < ps < p11")?;
            check_energy(family, &[level(r[0]), 0.0], energy)
        }
        Pb5 | Pb6 | Pb7 => {
            require(r[0] > 0.0, family, "the turning point must be positive")?;
            let h = check_energy(family, &[level(r[0])], energy)?;
            require(h > 0.0, family, "orbit must enclose the origin (h > 0)")?;
            Ok(h)
        }
        Pu0 => {
            let h = check_energy(family, &[], energy)?;
            require(h > saddle_energy, family, "energy must exceed the saddle energy")?;
            Ok(h)
        }
        Pu1 | Pu1p => check_energy(family, &[saddle_energy], energy),
        Pu3 | Pu3p => {
            let sign = if family == Pu3 { 1.0 } else { -1.0 };
            require(sign * r[0] > ps, family, "need |p5'| beyond the saddle on the family's side")?;
            check_energy(family, &[level(r[0]), 0.0], energy)
        }
        Pu4 | Pu4p | Pu8 | Pu8p | Pu9 | Pu9p => {
            let positive = matches!(family, Pu4 | Pu8 | Pu9);
            require(if positive { r[0] > 0.0 } else { r[0] < 0.0 }, family, "turning point on the wrong side")?;
            let h = check_energy(family, &[level(r[0])], energy)?;
            require(h < 0.0, family, "energy must be negative")?;
            if matches!(family, Pu4 | Pu4p) {
                require(r[0].abs() > ps, family, "turning point must lie beyond the saddle")?;
            }
            Ok(h)
        }
        Pu5 | Pu5p => {
            let h = check_energy(family, &[], energy)?;
            require(h > 0.0, family, "energy must be positive")?;
            Ok(h)
        }
        Pu6 | Pu6p | Pu7 | Pu7p => check_energy(family, &[0.0], energy),
        _ => Err(constraint(family, "not a Type I family")),
    }
}

fn validate_type2(family: SolutionFamily, r: &[f64], al: &AlphaCoefficients, energy: Option<f64>) -> Result<f64> {
    require(r.iter().all(|&x| x > 0.0), family, "psi roots must be positive")?;
    let (centers, saddles, cusps) = type2_critical(al)?;
    let levels: Vec<f64> = r.iter().map(|&x| energy2_at(al, x)).collect::<Result<_>>()?;
    match family {
        PhiB1 | PhiU3 => {
            require(strictly_increasing(r), family, "roots must be strictly increasing")?;
            let (c, s) = (centers[0], saddles[0]);
            require(r[0] < c && c < r[1] && r[1] < s && s < r[2], family, "roots must interleave center and saddle")?;
            check_energy(family, &levels, energy)
        }
        PhiB2 | PhiU2 => {
            require(r[0] < r[1], family, "roots must be increasing")?;
            require(close(r[1], saddles[0]), family, "second root must be the saddle")?;
            require(r[0] < centers[0], family, "first root must lie below the center")?;
            check_energy(family, &levels, energy)
        }
        PhiU4 => {
            require(r[0] < r[1], family, "roots must be increasing")?;
            require(close(r[0], centers[0]), family, "first root must be the center")?;
            require(r[1] > saddles[0], family, "second root must lie beyond the saddle")?;
            check_energy(family, &levels, energy)
        }
        PhiB3 => {
            require(r[0] < r[1], family, "roots must be increasing")?;
            require(r[0] < centers[0] && centers[0] < r[1], family, "roots must straddle the center")?;
            check_energy(family, &levels, energy)
        }
        PhiU1 | PhiU5 | PhiU7 | PhiU8 => {
            let h = check_energy(family, &levels, energy)?;
            match family {
                PhiU1 => require(h > energy2_at(al, saddles[0])?, family, "energy must exceed the saddle energy")?,
                PhiU5 => require(h < energy2_at(al, centers[0])?, family, "energy must lie below the center energy")?,
                PhiU7 => require(h > energy2_at(al, cusps[0])?, family, "energy must exceed the cusp energy")?,
                _ => {}
            }
            // The root must be the largest one, bounding the unbounded branch.
            let cubic = al.psi_cubic(h);
            let tail = crate::poly::real_roots(&cubic);
            let largest = tail.last().map_or(f64::NAN, |x| x.value);
            require(close(r[0], largest), family, "root must be the largest level-set root")?;
            Ok(h)
        }
        PhiU6 => {
            let hc = energy2_at(al, cusps[0])?;
            check_energy(family, &[hc], energy)
        }
        _ => Err(constraint(family, "not a Type II family")),
    }
}

/// Parameters shared by the Pu0 and Pu5 evaluators.
fn pu0_parts(s: &SystemICoefficients, h: f64) -> (f64, f64, f64) {
    let q = (-2.0 * s.cubic * h).powf(0.25);
    let scale = (-2.0 * h / s.cubic).powf(0.25);
    let k2 = 0.5 + s.linear / (4.0 * (-2.0 * s.cubic * h).sqrt());
    (q, scale, k2)
}

/// Parameters shared by PhiU1, PhiU5, PhiU7 and PhiU8: `(Q, k², rate)`.
fn phiu1_parts(al: &AlphaCoefficients, r: f64, h: f64) -> (f64, f64, f64) {
    let a1 = al.alpha1;
    let a2 = al.alpha2;
    let x = (2.0 * a1 * r * r + (a1 + 2.0 * a2) * r + 4.0 * h) / a1;
    let q = x.powf(0.25);
    let num = (8.0 * a1 * a1 * r * r + 4.0 * a1 * (a1 + 2.0 * a2) * r + 16.0 * a1 * h).sqrt() - (2.0 * a2 + 3.0 * a1 * r);
    let den = (32.0 * a1 * a1 * r * r + 16.0 * a1 * (a1 + a2) * r + 64.0 * a1 * h).sqrt();
    (q, num / den, (2.0 * a1).sqrt() * q)
}

fn bad_modulus(family: SolutionFamily, k2: f64) -> Error {
    Error::Domain(format!("{}: printed modulus k^2 = {k2} outside [0, 1)", family.tag()))
}

fn checked_k(family: SolutionFamily, k2: f64) -> Result<f64> {
    if !modulus_ok(k2) {
        return Err(bad_modulus(family, k2));
    }
    complete_k(k2)
}

fn positive(family: SolutionFamily, v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{}: {what} = {v} must be positive", family.tag())))
    }
}

/// Domain, period and blow-up points as printed for each family.
pub fn domain_and_period(spec: &ProfileSpec) -> Extent {
    Extent { domain: spec.domain, period: spec.period, blowup: spec.blowup.clone() }
}

fn compute_extent(spec: &ProfileSpec) -> Result<Extent> {
    let f = spec.family;
    let r = &spec.roots;
    let h = spec.energy;
    let full = (f64::NEG_INFINITY, f64::INFINITY);
    let half = (0.0, f64::INFINITY);
    let periodic = |t: f64| Extent { domain: (-t, t), period: Some(2.0 * t), blowup: vec![] };
    let lobe = |end: f64, pole: Option<f64>| {
        let mut blowup = vec![0.0];
        blowup.extend(pole);
        blowup.push(end);
        Extent { domain: (0.0, end), period: None, blowup }
    };
    let at_zero = |domain| Extent { domain, period: None, blowup: vec![0.0] };
    if let WaveSystem::TypeI(s) = spec.system {
        let (lin, cub) = (s.linear, s.cubic);
        return Ok(match f {
            Pb1 => {
                let (k2, sc) = pb1_parts(r, cub);
                periodic(checked_k(f, k2)? / sc)
            }
            Pb3 | Pb3p => {
                let (k2, sc) = pb3_parts(r, cub);
                periodic(checked_k(f, k2)? / sc)
            }
            Pb5 | Pb6 | Pb7 => {
                let q = r[0] * r[0];
                let k2 = cub * q / (2.0 * cub * q - lin);
                let sc = positive(f, 2.0 * cub * q - lin, "2Bq - A")?.sqrt();
                periodic(checked_k(f, k2)? / sc)
            }
            Pb2 | Pb2p | Pb4 | Pb4p => Extent { domain: full, period: None, blowup: vec![] },
            Pu0 | Pu5 => {
                let (q, _, k2) = pu0_parts(&s, h);
                let end = 2.0 * checked_k(f, k2)? / positive(f, q, "fourth root")?;
                Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
            }
            Pu5p => {
                let end = complete_k(0.5)? / (2.0 * h);
                Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
            }
            Pu1 | Pu1p | Pu6 | Pu6p | Pu7 | Pu7p => at_zero(half),
            Pu2 | Pu2p => {
                let p = if f == Pu2 { r[3] } else { r[0] };
                let other = if f == Pu2 { r[2] } else { r[1] };
                let k2 = other * other / (p * p);
                let sc = (p * (-cub).sqrt()).abs();
                let kk = checked_k(f, k2)?;
                lobe(4.0 * kk / sc, Some(2.0 * kk / sc))
            }
            Pu3 | Pu3p => {
                let sc = (r[0] * (-cub).sqrt()).abs();
                lobe(2.0 * std::f64::consts::PI / sc, Some(std::f64::consts::PI / sc))
            }
            Pu4 | Pu4p | Pu8 | Pu8p | Pu9 | Pu9p => {
                let q = r[0] * r[0];
                let k2 = (cub * q - lin) / (2.0 * cub * q - lin);
                let sc = positive(f, -(2.0 * cub * q - lin), "A - 2Bq")?.sqrt();
                let end = 2.0 * checked_k(f, k2)? / sc;
                Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
            }
            _ => unreachable!("Type II family on a Type I system"),
        });
    }
    let WaveSystem::TypeII(al) = spec.system else { unreachable!() };
    let a1 = al.alpha1;
    Ok(match f {
        PhiB1 => {
            let (lam, k2) = phib1_parts(&al, r);
            periodic(checked_k(f, k2)? / positive(f, lam, "rate")?)
        }
        PhiB3 => {
            let (lam, k2, _, _) = phib3_parts(&al, r);
            periodic(checked_k(f, k2)? / positive(f, lam, "rate")?)
        }
        PhiB2 => Extent { domain: full, period: None, blowup: vec![] },
        PhiU1 | PhiU5 | PhiU7 | PhiU8 => {
            let (_, k2, rate) = phiu1_parts(&al, r[0], h);
            let end = 4.0 * checked_k(f, k2)? / positive(f, rate, "cn rate")?;
            Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
        }
        PhiU2 | PhiU6 => at_zero(half),
        PhiU3 => {
            let (lam, k2) = phib1_parts(&al, r);
            let end = 2.0 * checked_k(f, k2)? / positive(f, lam, "rate")?;
            Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
        }
        PhiU4 => {
            let l = positive(f, a1 * (r[1] - r[0]) / 2.0, "rate")?.sqrt();
            let end = std::f64::consts::PI / l;
            Extent { domain: (0.0, end), period: None, blowup: vec![0.0, end] }
        }
        _ => unreachable!("Type I family on a Type II system"),
    })
}

fn pb1_parts(r: &[f64], cub: f64) -> (f64, f64) {
    let (p1, p2, p3, p4) = (r[0], r[1], r[2], r[3]);
    let k2 = (p3 - p2) * (p4 - p1) / ((p4 - p2) * (p3 - p1));
    let sc = (-cub * (p4 - p2) * (p3 - p1) / 4.0).sqrt();
    (k2, sc)
}

fn pb3_parts(r: &[f64], cub: f64) -> (f64, f64) {
    let (p7, p8, p9, p10) = (r[0], r[1], r[2], r[3]);
    let k2 = (p8 - p7) * (p10 - p9) / ((p10 - p8) * (p9 - p7));
    let sc = cub.sqrt() * ((p10 - p8) * (p9 - p7)).sqrt() / 2.0;
    (k2, sc)
}

/// `(lambda, k²)` for PhiB1 and PhiU3.
pub(crate) fn phib1_parts(al: &AlphaCoefficients, r: &[f64]) -> (f64, f64) {
    let lam = (al.alpha1 * (r[2] - r[0]) / 2.0).sqrt();
    (lam, (r[1] - r[0]) / (r[2] - r[0]))
}

/// `(lambda, k², D, N)` for PhiB3.
pub(crate) fn phib3_parts(al: &AlphaCoefficients, r: &[f64]) -> (f64, f64, f64, f64) {
    let (a1, a2) = (al.alpha1, al.alpha2);
    let (r6, r7) = (r[0], r[1]);
    let d = 2.0 * a1 * r7 + a1 * r6 + 2.0 * a2;
    let n = (2.0 * a1 * r6 + a1 * r7 + 2.0 * a2) * (r7 - r6);
    let k2 = (r7 - r6) / (2.0 * r7 + r6 + 2.0 * a2 / a1);
    ((-d / 2.0).sqrt(), k2, d, n)
}

fn amplitude_range(spec: &ProfileSpec) -> (f64, f64) {
    let r = &spec.roots;
    let inf = f64::INFINITY;
    let ps = match spec.system {
        WaveSystem::TypeI(s) if s.linear * s.cubic > 0.0 => (s.linear / (2.0 * s.cubic)).sqrt(),
        _ => f64::NAN,
    };
    let sq = |x: f64| x.sqrt();
    match spec.family {
        Pb1 => (r[1], r[2]),
        Pb2 | Pb2p => (-ps, ps),
        Pb3 => (r[0], r[1]),
        Pb3p => (r[2], r[3]),
        Pb4 => (-r[0], 0.0),
        Pb4p => (0.0, r[0]),
        Pb5 | Pb6 | Pb7 => (-r[0], r[0]),
        Pu0 | Pu5 | Pu5p => (-inf, inf),
        Pu1 => (ps, inf),
        Pu1p => (-inf, -ps),
        Pu2 => (r[3], inf),
        Pu2p => (-inf, r[0]),
        Pu3 | Pu4 | Pu8 | Pu9 => (r[0], inf),
        Pu3p | Pu4p | Pu8p | Pu9p => (-inf, r[0]),
        Pu6 | Pu7 => (0.0, inf),
        Pu6p | Pu7p => (-inf, 0.0),
        PhiB1 => (sq(r[0]), sq(r[1])),
        PhiB2 => (sq(r[0]), sq(r[1])),
        PhiB3 => (sq(r[0]), sq(r[1])),
        PhiU1 | PhiU5 | PhiU7 | PhiU8 => (sq(r[0]), inf),
        PhiU2 => (sq(r[1]), inf),
        PhiU3 => (sq(r[2]), inf),
        PhiU4 => (sq(r[1]), inf),
        PhiU6 => {
            let WaveSystem::TypeII(al) = spec.system else { unreachable!() };
            (sq(-2.0 * al.alpha2 / (3.0 * al.alpha1)), inf)
        }
    }
}

/// Scale used to make amplitude tolerances relative.
pub fn amplitude_scale(spec: &ProfileSpec) -> f64 {
    let (lo, hi) = spec.amplitude_range;
    let mut scale = spec.roots.iter().fold(1.0f64, |m, r| m.max(r.abs().sqrt().max(r.abs())));
    for v in [lo, hi] {
        if v.is_finite() {
            scale = scale.max(v.abs());
        }
    }
    scale
}

fn sqrt_checked(x: f64, xi: f64, scale: f64) -> Result<f64> {
    if x.is_nan() || x < -1e-12 * scale.max(1.0) {
        return Err(Error::NotReal { xi });
    }
    Ok(x.max(0.0).sqrt())
}

fn sn(u: f64, k2: f64) -> Result<f64> {
    Ok(jacobi(u, k2)?.sn)
}

fn nearest_blowup(spec: &ProfileSpec, xi: f64) -> Option<f64> {
    spec.blowup.iter().copied().min_by(|a, b| (a - xi).abs().total_cmp(&(b - xi).abs()))
}

/// The printed amplitude at `xi`, which must lie inside the validity domain.
pub fn eval_amplitude(spec: &ProfileSpec, xi: f64) -> Result<f64> {
    let (lo, hi) = spec.domain;
    if !(xi > lo && xi < hi) {
        return Err(Error::Domain(format!("xi = {xi} outside the domain ({lo}, {hi}) of {}", spec.family)));
    }
    eval_amplitude_raw(spec, xi)
}

/// As [`eval_amplitude`], but without the domain check. Periodic families
/// extend to the whole line this way.
pub fn eval_amplitude_raw(spec: &ProfileSpec, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!("non-finite xi = {xi}")));
    }
    if let Some(pole) = spec.interior_pole {
        if (xi - pole).abs() <= 1e-9 * pole.abs().max(1.0) {
            return Err(Error::Pole { what: spec.family.tag().into(), location: pole });
        }
    }
    let v = printed_value(spec, xi)?;
    if v.is_nan() {
        return Err(Error::NotReal { xi });
    }
    if v.abs() >= CLIP {
        return Err(Error::Blowup { xi, pole: nearest_blowup(spec, xi) });
    }
    Ok(v)
}

fn printed_value(spec: &ProfileSpec, xi: f64) -> Result<f64> {
    match spec.system {
        WaveSystem::TypeI(s) => type1_value(spec, &s, xi),
        WaveSystem::TypeII(al) => type2_value(spec, &al, xi),
    }
}

fn type1_value(spec: &ProfileSpec, s: &SystemICoefficients, xi: f64) -> Result<f64> {
    let r = &spec.roots;
    let (lin, cub) = (s.linear, s.cubic);
    let h = spec.energy;
    let scale = amplitude_scale(spec);
    Ok(match spec.family {
        Pb1 => {
            let (p1, p2, p3) = (r[0], r[1], r[2]);
            let (k2, sc) = pb1_parts(r, cub);
            let s2 = sn(sc * xi, k2)?.powi(2);
            p1 + (p2 - p1) * (p3 - p1) / ((p3 - p1) - (p3 - p2) * s2)
        }
        Pb2 | Pb2p => {
            let w = (r[1] - r[0]) / 2.0;
            let sign = if spec.family == Pb2 { 1.0 } else { -1.0 };
            w * (sign * w * (-cub).sqrt() * xi).tanh()
        }
        Pb3 => {
            let (p7, p8, p10) = (r[0], r[1], r[3]);
            let (k2, sc) = pb3_parts(r, cub);
            let s2 = sn(sc * xi, k2)?.powi(2);
            p10 - (p10 - p8) * (p10 - p7) / ((p10 - p8) + (p8 - p7) * s2)
        }
        Pb3p => {
            let (p8, p9, p10) = (r[1], r[2], r[3]);
            let (k2, sc) = pb3_parts(r, cub);
            let s2 = sn(sc * xi, k2)?.powi(2);
            p8 + (p9 - p8) * (p10 - p8) / ((p10 - p8) - (p10 - p9) * s2)
        }
        Pb4 | Pb4p => {
            let p11 = r[0];
            let x = cub.sqrt() * p11 * xi.abs();
            let sech = 2.0 * (-x).exp() / (1.0 + (-2.0 * x).exp());
            if spec.family == Pb4 {
                -p11 * sech
            } else {
                p11 * sech
            }
        }
        Pb5 | Pb6 | Pb7 => {
            let q = r[0] * r[0];
            let d = 2.0 * cub * q - lin;
            let k2 = cub * q / d;
            let s2 = sn(d.sqrt() * xi, k2)?.powi(2);
            if spec.family == Pb7 {
                sqrt_checked(q * s2 / (2.0 - s2), xi, scale)?
            } else {
                sqrt_checked((cub * q - lin) * q * s2 / (d - cub * q * s2), xi, scale)?
            }
        }
        Pu0 | Pu5 => {
            let (q, amp, k2) = pu0_parts(s, h);
            if !modulus_ok(k2) {
                return Err(bad_modulus(spec.family, k2));
            }
            let c = jacobi(2.0 * q * xi, k2)?.cn;
            amp * sqrt_checked(-1.0 + 2.0 / (1.0 - c), xi, scale)?
        }
        Pu5p => {
            let c = jacobi(8.0 * h * xi, 0.5)?.cn;
            sqrt_checked(2.0 / (1.0 - c) - 1.0, xi, scale)?
        }
        Pu1 | Pu1p => {
            let ps = (lin / (2.0 * cub)).sqrt();
            let v = ps * (1.0 + 2.0 / (((-2.0 * lin).sqrt() * xi).exp_m1()));
            if spec.family == Pu1 {
                v
            } else {
                -v
            }
        }
        Pu2 | Pu2p => {
            let (p, other) = if spec.family == Pu2 { (r[3], r[2]) } else { (r[0], r[1]) };
            let k2 = other * other / (p * p);
            p / sn(p * (-cub).sqrt() * xi, k2)?
        }
        Pu3 => r[0] / (r[0] * (-cub).sqrt() * xi).sin(),
        Pu3p => r[0] / (-r[0] * (-cub).sqrt() * xi).sin(),
        Pu4 | Pu4p | Pu8 | Pu8p | Pu9 | Pu9p => {
            let q = r[0] * r[0];
            let d = 2.0 * cub * q - lin;
            let k2 = (cub * q - lin) / d;
            let s2 = sn((-d).sqrt() * xi, k2)?.powi(2);
            let v = sqrt_checked(-(cub * q - lin) / cub + d / (cub * s2), xi, scale)?;
            if matches!(spec.family, Pu4 | Pu8 | Pu9) {
                v
            } else {
                -v
            }
        }
        Pu6 | Pu6p => {
            let x = lin.sqrt() * xi;
            let amp = 2.0 * (-lin / cub).sqrt();
            // e^x / (e^{2x} - 1) rewritten as 1 / (2 sinh x) to avoid overflow.
            let v = amp / (2.0 * x.sinh());
            if spec.family == Pu6 {
                v
            } else {
                -v
            }
        }
        Pu7 => (-1.0 / cub).sqrt() / xi,
        Pu7p => -(-1.0 / cub).sqrt() / xi,
        _ => unreachable!("Type II family on a Type I system"),
    })
}

fn type2_value(spec: &ProfileSpec, al: &AlphaCoefficients, xi: f64) -> Result<f64> {
    let r = &spec.roots;
    let (a1, a2) = (al.alpha1, al.alpha2);
    let h = spec.energy;
    let scale = amplitude_scale(spec);
    let psi = match spec.family {
        PhiB1 => {
            let (lam, k2) = phib1_parts(al, r);
            r[0] + (r[1] - r[0]) * sn(lam * xi, k2)?.powi(2)
        }
        PhiB2 => {
            let x = (2.0 * a1 * (r[1] - r[0])).sqrt() * xi;
            // (1 - e^X)^2 / (1 + e^X)^2 = tanh^2(X/2)
            r[0] + (r[1] - r[0]) * (x / 2.0).tanh().powi(2)
        }
        PhiB3 => {
            let (lam, k2, d, n) = phib3_parts(al, r);
            let s2 = sn(lam * xi, k2)?.powi(2);
            r[0] + n * s2 / (a1 * (r[1] - r[0]) * s2 - d)
        }
        PhiU1 | PhiU5 | PhiU7 | PhiU8 => {
            let (q, k2, rate) = phiu1_parts(al, r[0], h);
            if !modulus_ok(k2) {
                return Err(bad_modulus(spec.family, k2));
            }
            let c = jacobi(rate * xi, k2)?.cn;
            r[0] - q + 2.0 * q / (1.0 - c)
        }
        PhiU2 => {
            let x = (2.0 * a1 * (r[1] - r[0])).sqrt() * xi;
            // (1 + e^X)^2 / (1 - e^X)^2 = coth^2(X/2)
            r[0] + (r[1] - r[0]) / (x / 2.0).tanh().powi(2)
        }
        PhiU3 => {
            let (lam, k2) = phib1_parts(al, r);
            r[0] + (r[2] - r[0]) / sn(lam * xi, k2)?.powi(2)
        }
        PhiU4 => {
            let l = (a1 * (r[1] - r[0]) / 2.0).sqrt();
            r[1] + (r[1] - r[0]) / (l * xi).tan().powi(2)
        }
        PhiU6 => -2.0 * a2 / (3.0 * a1) + 2.0 / (a1 * xi * xi),
        _ => unreachable!("Type I family on a Type II system"),
    };
    sqrt_checked(psi, xi, scale * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case1() -> WaveSystem {
        WaveSystem::TypeI(SystemICoefficients::new(-4.0, -0.5))
    }

    fn pb1_roots() -> Vec<f64> {
        let (a, b) = ((4.0 - 8f64.sqrt()).sqrt(), (4.0 + 8f64.sqrt()).sqrt());
        vec![-b, -a, a, b]
    }

    #[test]
    fn pb1_validates_and_starts_at_p2() {
        let spec = validate_profile(Pb1, &pb1_roots(), &case1(), None).unwrap();
        assert!((spec.energy - 2.0).abs() < 1e-12);
        assert!(spec.period.is_some());
        assert!((eval_amplitude(&spec, 0.0).unwrap() - pb1_roots()[1]).abs() < 1e-14);
    }

    #[test]
    fn ordering_and_constraint_errors() {
        let mut r = pb1_roots();
        r.swap(1, 2);
        assert!(matches!(validate_profile(Pb1, &r, &case1(), None), Err(Error::Constraint(_))));
        let case2 = WaveSystem::TypeI(SystemICoefficients::new(4.0, 0.5));
        assert!(matches!(validate_profile(Pb4, &[1.5], &case2, None), Err(Error::Constraint(_))));
        assert!(matches!(validate_profile(Pb1, &pb1_roots(), &case2, None), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn energy_mismatch_is_reported() {
        let mut r = pb1_roots();
        r[3] += 0.01;
        assert!(matches!(validate_profile(Pb1, &r, &case1(), None), Err(Error::EnergyMismatch { .. })));
    }

    #[test]
    fn simple_point_values() {
        let spec = validate_profile(Pb2, &[-2.0, 2.0], &case1(), None).unwrap();
        assert_eq!(eval_amplitude(&spec, 0.0).unwrap(), 0.0);
        let case2 = WaveSystem::TypeI(SystemICoefficients::new(4.0, 0.5));
        let spec = validate_profile(Pb4, &[8f64.sqrt()], &case2, None).unwrap();
        assert_eq!(eval_amplitude(&spec, 0.0).unwrap(), -8f64.sqrt());
        let deg = WaveSystem::TypeI(SystemICoefficients::new(0.0, -2.0));
        let spec = validate_profile(Pu7, &[], &deg, None).unwrap();
        assert!((eval_amplitude(&spec, 1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let cusp = WaveSystem::TypeII(AlphaCoefficients::new(1.0, -4.0, 256.0 / 27.0).unwrap());
        let spec = validate_profile(PhiU6, &[], &cusp, None).unwrap();
        assert!((eval_amplitude(&spec, 1.0).unwrap() - (14.0f64 / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poles_domain_and_blowup() {
        let spec = validate_profile(Pu3, &[8f64.sqrt()], &case1(), Some(0.0)).unwrap();
        let pole = spec.interior_pole.unwrap();
        assert!(matches!(eval_amplitude(&spec, pole), Err(Error::Pole { .. })));
        assert!(matches!(eval_amplitude(&spec, -0.1), Err(Error::Domain(_))));
        assert!(matches!(eval_amplitude(&spec, 1e-12), Err(Error::Blowup { .. })));
        let end = spec.domain.1;
        assert!((end - 2.0 * pole).abs() < 1e-12);
    }
}
