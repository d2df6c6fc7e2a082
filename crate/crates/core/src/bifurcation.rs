//! Equilibria, regime classification and orbit inventories of both systems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, Root, CLUSTER_TOL};
use crate::wavesystems::{AlphaCoefficients, SystemICoefficients, WaveSystem};

/// Relative tolerance on `alpha3` for the cusp case.
pub const CUSP_REL_TOL: f64 = 1e-12;
const MIN_PSI: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Saddle,
    Center,
    DegenerateSaddle,
    DegenerateCenter,
    Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub location: f64,
    pub y: f64,
    pub kind: EquilibriumKind,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeITag {
    Case1,
    Case2,
    Case3Unbounded,
    Case3Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeI {
    pub tag: RegimeITag,
    /// `linear * cubic`, whose sign is that of `kappa b (a kappa omega - r)`.
    pub discriminant: f64,
    pub cubic_sign: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeIITag {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeII {
    pub tag: RegimeIITag,
    pub cusp_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitClass {
    Periodic,
    Homoclinic,
    Heteroclinic,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Upper,
    Lower,
    Both,
}

/// One connected orbit component of the level set `H = h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub h: f64,
    pub class: OrbitClass,
    /// Amplitude range; infinite ends are `±inf`.
    pub interval: (f64, f64),
    /// Level-set roots bounding the interval (in `psi` for Type II).
    pub roots: Vec<Root>,
    pub branch: Branch,
    pub through_cusp: bool,
}

/// Roots of `y^2` on a level set, with the sign of `y^2` on each gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub roots: Vec<Root>,
    /// `signs[i]` is the sign of `y^2` on the gap left of `roots[i]`; the last
    /// entry is the gap right of the last root.
    pub signs: Vec<f64>,
    /// Ascending polynomial coefficients whose zero set is the level set.
    pub coefficients: Vec<f64>,
}

fn kind_from_curvature(curvature: f64) -> EquilibriumKind {
    // u'' = f(u) linearizes to a saddle when f'(u) > 0.
    if curvature > 0.0 {
        EquilibriumKind::Saddle
    } else {
        EquilibriumKind::Center
    }
}

pub fn equilibria_type1(s: &SystemICoefficients) -> Vec<Equilibrium> {
    let (lin, cub) = (s.linear, s.cubic);
    let origin = |kind| Equilibrium { location: 0.0, y: 0.0, kind, energy: 0.0 };
    if lin == 0.0 {
        let kind = if cub < 0.0 { EquilibriumKind::DegenerateSaddle } else { EquilibriumKind::DegenerateCenter };
        return vec![origin(kind)];
    }
    let origin_kind = kind_from_curvature(lin);
    if lin * cub <= 0.0 {
        return vec![origin(origin_kind)];
    }
    let ps = (lin / (2.0 * cub)).sqrt();
    let outer_energy = -lin * lin / (8.0 * cub);
    let outer_kind = kind_from_curvature(lin - 6.0 * cub * ps * ps);
    vec![
        Equilibrium { location: -ps, y: 0.0, kind: outer_kind, energy: outer_energy },
        origin(origin_kind),
        Equilibrium { location: ps, y: 0.0, kind: outer_kind, energy: outer_energy },
    ]
}

pub fn classify_type1(s: &SystemICoefficients) -> Result<RegimeI> {
    if s.cubic == 0.0 {
        return Err(Error::OutOfScope("cubic coefficient is zero (linear system)".into()));
    }
    let discriminant = s.linear * s.cubic;
    let tag = match (discriminant > 0.0, s.cubic < 0.0) {
        (true, true) => RegimeITag::Case1,
        (true, false) => RegimeITag::Case2,
        (false, true) => RegimeITag::Case3Unbounded,
        (false, false) => RegimeITag::Case3Bounded,
    };
    Ok(RegimeI { tag, discriminant, cubic_sign: s.cubic.signum() })
}

fn is_cusp(al: &AlphaCoefficients) -> bool {
    if al.alpha1 <= 0.0 || al.alpha2 >= 0.0 {
        return false;
    }
    let t = al.cusp_threshold();
    (al.alpha3 - t).abs() <= CUSP_REL_TOL * t
}

pub fn classify_type2(al: &AlphaCoefficients) -> Result<RegimeII> {
    if !(al.alpha3 > 0.0) {
        return Err(Error::Domain(format!("alpha3 must be positive, got {}", al.alpha3)));
    }
    if al.alpha1 == 0.0 {
        return Err(Error::OutOfScope("alpha1 = 0".into()));
    }
    let cusp_threshold = if al.alpha1 != 0.0 { al.cusp_threshold() } else { f64::NAN };
    let tag = if al.alpha1 < 0.0 {
        RegimeIITag::CaseIV
    } else if al.alpha2 >= 0.0 {
        RegimeIITag::CaseIII
    } else if is_cusp(al) {
        RegimeIITag::CaseII
    } else if al.alpha3 < cusp_threshold {
        RegimeIITag::CaseI
    } else {
        RegimeIITag::CaseIII
    };
    Ok(RegimeII { tag, cusp_threshold })
}

/// Positive roots of `alpha1 psi^3 + alpha2 psi^2 + alpha3`.
fn equilibrium_psis(al: &AlphaCoefficients) -> Vec<Root> {
    if is_cusp(al) {
        let psi = -2.0 * al.alpha2 / (3.0 * al.alpha1);
        return vec![Root { value: psi, multiplicity: 2 }];
    }
    poly::real_roots(&[al.alpha3, 0.0, al.alpha2, al.alpha1])
        .into_iter()
        .filter(|r| r.value > MIN_PSI)
        .collect()
}

pub fn equilibria_type2(al: &AlphaCoefficients) -> Result<Vec<Equilibrium>> {
    if !(al.alpha3 > 0.0) {
        return Err(Error::Domain(format!("alpha3 must be positive, got {}", al.alpha3)));
    }
    let mut out = Vec::new();
    for root in equilibrium_psis(al) {
        let phi = root.value.sqrt();
        let kind = if root.multiplicity >= 2 {
            EquilibriumKind::Cusp
        } else {
            // d/dphi of the force at an equilibrium reduces to phi^{-3} g'(psi) * 2 phi.
            let slope = 3.0 * al.alpha1 * root.value * root.value + 2.0 * al.alpha2 * root.value;
            kind_from_curvature(slope)
        };
        let energy = al.energy(phi, 0.0)?;
        out.push(Equilibrium { location: -phi, y: 0.0, kind, energy });
        out.push(Equilibrium { location: phi, y: 0.0, kind, energy });
    }
    out.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(out)
}

/// Distinct energies of the saddles, centers and cusps, ascending.
pub fn critical_energies(system: &WaveSystem) -> Result<Vec<f64>> {
    let eqs = match system {
        WaveSystem::TypeI(s) => equilibria_type1(s),
        WaveSystem::TypeII(al) => equilibria_type2(al)?,
    };
    let mut hs: Vec<f64> = eqs.iter().map(|e| e.energy).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    Ok(hs)
}

fn sign_at(coeffs: &[f64], x: f64) -> f64 {
    let v = poly::eval(coeffs, x);
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn gap_signs(coeffs: &[f64], roots: &[Root], lower: Option<f64>) -> Vec<f64> {
    let mut signs = Vec::with_capacity(roots.len() + 1);
    let span = roots.iter().fold(1.0f64, |m, r| m.max(r.value.abs()));
    let mut left = lower;
    for r in roots {
        let probe = match left {
            Some(l) => 0.5 * (l + r.value),
            None => r.value - span,
        };
        signs.push(sign_at(coeffs, probe));
        left = Some(r.value);
    }
    let probe = left.map_or(0.0, |l| l + span);
    signs.push(sign_at(coeffs, probe));
    signs
}

/// Roots of `y^2(p) = 2h + linear p^2 - cubic p^4`.
pub fn levelset_roots_type1(s: &SystemICoefficients, h: f64) -> Result<LevelSet> {
    if s.cubic == 0.0 {
        return Err(Error::OutOfScope("cubic coefficient is zero (linear system)".into()));
    }
    let coefficients = vec![2.0 * h, 0.0, s.linear, 0.0, -s.cubic];
    let roots = poly::real_roots(&coefficients);
    let signs = gap_signs(&coefficients, &roots, None);
    Ok(LevelSet { roots, signs, coefficients })
}

/// Positive roots in `psi` of `(alpha1/2) psi^3 + alpha2 psi^2 + 2 h psi - alpha3`.
pub fn levelset_roots_type2(al: &AlphaCoefficients, h: f64) -> Result<LevelSet> {
    if !(al.alpha3 > 0.0) {
        return Err(Error::Domain(format!("alpha3 must be positive, got {}", al.alpha3)));
    }
    let coefficients = al.psi_cubic(h).to_vec();
    let roots: Vec<Root> = poly::real_roots(&coefficients)
        .into_iter()
        .filter(|r| r.value > MIN_PSI)
        .collect();
    let signs = gap_signs(&coefficients, &roots, Some(0.0));
    Ok(LevelSet { roots, signs, coefficients })
}

fn classify_gap(lo: Option<&Root>, hi: Option<&Root>, saddle_at: impl Fn(f64) -> bool) -> (OrbitClass, bool) {
    let cusp = lo.is_some_and(|r| r.multiplicity >= 3) || hi.is_some_and(|r| r.multiplicity >= 3);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return (OrbitClass::Unbounded, cusp);
    };
    let double_lo = lo.multiplicity == 2 && saddle_at(lo.value);
    let double_hi = hi.multiplicity == 2 && saddle_at(hi.value);
    let class = match (double_lo, double_hi) {
        (true, true) => OrbitClass::Heteroclinic,
        (true, false) | (false, true) => OrbitClass::Homoclinic,
        (false, false) => OrbitClass::Periodic,
    };
    (class, cusp)
}

/// Orbit components at energy `h`, one per maximal amplitude interval with `y^2 > 0`.
pub fn orbit_inventory(system: &WaveSystem, h: f64) -> Result<Vec<OrbitSpec>> {
    match system {
        WaveSystem::TypeI(s) => {
            let level = levelset_roots_type1(s, h)?;
            let saddle_at = |p: f64| s.linear - 6.0 * s.cubic * p * p > 0.0;
            let mut out = Vec::new();
            let n = level.roots.len();
            for gap in 0..=n {
                if level.signs[gap] <= 0.0 {
                    continue;
                }
                let lo = if gap == 0 { None } else { Some(&level.roots[gap - 1]) };
                let hi = level.roots.get(gap);
                let (class, through_cusp) = classify_gap(lo, hi, saddle_at);
                out.push(OrbitSpec {
                    h,
                    class,
                    interval: (lo.map_or(f64::NEG_INFINITY, |r| r.value), hi.map_or(f64::INFINITY, |r| r.value)),
                    roots: lo.into_iter().chain(hi).copied().collect(),
                    branch: Branch::Both,
                    through_cusp,
                });
            }
            Ok(out)
        }
        WaveSystem::TypeII(al) => {
            let level = levelset_roots_type2(al, h)?;
            let saddle_at = |psi: f64| 3.0 * al.alpha1 * psi * psi + 2.0 * al.alpha2 * psi > 0.0;
            let mut out = Vec::new();
            let n = level.roots.len();
            for gap in 0..=n {
                if level.signs[gap] <= 0.0 {
                    continue;
                }
                let lo = if gap == 0 { None } else { Some(&level.roots[gap - 1]) };
                let hi = level.roots.get(gap);
                // The first gap starts at psi = 0, where y^2 -> -inf; it never qualifies.
                let (class, through_cusp) = classify_gap(lo, hi, saddle_at);
                let lo_phi = lo.map_or(0.0, |r| r.value.sqrt());
                let hi_phi = hi.map_or(f64::INFINITY, |r| r.value.sqrt());
                let roots: Vec<Root> = lo.into_iter().chain(hi).copied().collect();
                for interval in [(lo_phi, hi_phi), (-hi_phi, -lo_phi)] {
                    out.push(OrbitSpec {
                        h,
                        class,
                        interval,
                        roots: roots.clone(),
                        branch: Branch::Both,
                        through_cusp,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Scale used to make level-set tolerances relative.
pub fn level_scale(roots: &[Root]) -> f64 {
    roots.iter().fold(1.0f64, |m, r| m.max(r.value.abs()))
}

/// Multiplicity clustering threshold for a given root scale.
pub fn cluster_threshold(scale: f64) -> f64 {
    CLUSTER_TOL * scale
}
