//! Fixed regime-valid instances of every family, used by sweeps and the CLI.

use super::family::PhaseFamily;
use super::family::SolutionFamily::{self, *};
use super::profile::{validate_profile, ProfileSpec};
use super::wave::{PhaseSource, TypeIIWave, TypeIWave};
use crate::bifurcation::{equilibria_type2, levelset_roots_type1, levelset_roots_type2, EquilibriumKind};
use crate::error::{Error, Result};
use crate::wavesystems::{
    AlphaCoefficients, GkmnCoefficients, SystemICoefficients, TypeIIWaveParams, TypeIWaveParams, WaveSystem,
};

/// The coefficient set each family is instantiated on by default.
pub fn default_system(family: SolutionFamily) -> WaveSystem {
    let t1 = |lin, cub| WaveSystem::TypeI(SystemICoefficients::new(lin, cub));
    let t2 = |a1, a2, a3| WaveSystem::TypeII(AlphaCoefficients { alpha1: a1, alpha2: a2, alpha3: a3 });
    match family {
        Pb1 | Pb2 | Pb2p | Pu0 | Pu1 | Pu1p | Pu2 | Pu2p | Pu3 | Pu3p | Pu4 | Pu4p => t1(-4.0, -0.5),
        Pb3 | Pb3p | Pb4 | Pb4p | Pb5 => t1(4.0, 0.5),
        Pu5 | Pu6 | Pu6p | Pu8 | Pu8p => t1(4.0, -2.0),
        Pu5p | Pu7 | Pu7p | Pu9 | Pu9p => t1(0.0, -0.5),
        Pb6 => t1(-4.0, 2.0),
        Pb7 => t1(0.0, 0.5),
        PhiB1 | PhiB2 | PhiU1 | PhiU2 | PhiU3 | PhiU4 | PhiU5 => t2(1.0, -4.0, 0.1),
        PhiU6 | PhiU7 => t2(1.0, -4.0, 256.0 / 27.0),
        PhiU8 => t2(1.0, 0.0, 0.1),
        PhiB3 => t2(-1.0, 0.0, 0.1),
    }
}

struct Type2Levels {
    center: f64,
    saddle: f64,
    cusp: f64,
}

fn type2_levels(al: &AlphaCoefficients) -> Result<Type2Levels> {
    let eqs = equilibria_type2(al)?;
    let energy_of = |kind| eqs.iter().find(|e| e.kind == kind).map_or(f64::NAN, |e| e.energy);
    Ok(Type2Levels {
        center: energy_of(EquilibriumKind::Center),
        saddle: energy_of(EquilibriumKind::Saddle),
        cusp: energy_of(EquilibriumKind::Cusp),
    })
}

/// Energy level each family is instantiated at by default.
pub fn default_energy(family: SolutionFamily) -> Result<f64> {
    if let WaveSystem::TypeII(al) = default_system(family) {
        let lv = type2_levels(&al)?;
        return Ok(match family {
            PhiB1 | PhiU3 => 0.5 * (lv.center + lv.saddle),
            PhiB2 | PhiU2 => lv.saddle,
            PhiU4 => lv.center,
            PhiU1 => lv.saddle + 1.0,
            PhiU5 => 0.5 * lv.center,
            PhiU6 => lv.cusp,
            PhiU7 => lv.cusp + 1.0,
            PhiU8 => 1.0,
            PhiB3 => lv.center + 0.5,
            _ => unreachable!(),
        });
    }
    Ok(match family {
        Pb1 | Pu2 | Pu2p | Pb5 | Pu5 => 2.0,
        Pb2 | Pb2p | Pu1 | Pu1p => 4.0,
        Pu0 => 6.0,
        Pu3 | Pu3p | Pb4 | Pb4p | Pu6 | Pu6p | Pu7 | Pu7p => 0.0,
        Pu4 | Pu4p | Pb3 | Pb3p => -2.0,
        Pu8 | Pu8p | Pu9 | Pu9p => -1.0,
        Pu5p | Pb6 | Pb7 => 1.0,
        _ => unreachable!(),
    })
}

fn missing(family: SolutionFamily) -> Error {
    Error::Constraint(format!("{}: level set lacks the expected roots", family.tag()))
}

/// Roots of the family's level set at energy `h`, in the family's order.
pub fn roots_at(family: SolutionFamily, system: &WaveSystem, h: f64) -> Result<Vec<f64>> {
    match system {
        WaveSystem::TypeI(s) => {
            let level = levelset_roots_type1(s, h)?;
            // Expand multiplicities so double roots appear twice.
            let vals: Vec<f64> = level.roots.iter().flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity)).collect();
            let n = vals.len();
            let largest = || vals.last().copied().ok_or_else(|| missing(family));
            let smallest = || vals.first().copied().ok_or_else(|| missing(family));
            Ok(match family {
                Pb1 | Pu2 | Pu2p | Pb3 | Pb3p if n == 4 => vals,
                Pb2 | Pb2p if n == 4 => vec![vals[0], vals[3]],
                Pb4 | Pb4p | Pu3 | Pb5 | Pb6 | Pb7 | Pu4 | Pu8 | Pu9 => vec![largest()?],
                Pu3p | Pu4p | Pu8p | Pu9p => vec![smallest()?],
                f if f.root_count() == 0 => vec![],
                _ => return Err(missing(family)),
            })
        }
        WaveSystem::TypeII(al) => {
            let level = levelset_roots_type2(al, h)?;
            let simple: Vec<f64> = level.roots.iter().filter(|r| r.multiplicity == 1).map(|r| r.value).collect();
            let double: Vec<f64> = level.roots.iter().filter(|r| r.multiplicity == 2).map(|r| r.value).collect();
            let all: Vec<f64> = level.roots.iter().map(|r| r.value).collect();
            Ok(match family {
                PhiB1 | PhiU3 if simple.len() == 3 => simple,
                PhiB2 | PhiU2 if simple.len() == 1 && double.len() == 1 => vec![simple[0], double[0]],
                PhiU4 if simple.len() == 1 && double.len() == 1 => vec![double[0], simple[0]],
                PhiB3 if simple.len() == 2 => simple,
                PhiU1 | PhiU5 | PhiU7 | PhiU8 if !all.is_empty() => vec![*all.last().unwrap()],
                PhiU6 => vec![],
                _ => return Err(missing(family)),
            })
        }
    }
}

/// Physical parameters with `a = m = kappa = omega = 1` that reduce to `s`.
pub fn type1_physical(s: &SystemICoefficients) -> Result<(GkmnCoefficients, TypeIWaveParams)> {
    let eq = GkmnCoefficients::new(1.0, s.cubic)?;
    Ok((eq, TypeIWaveParams::new(&eq, 1.0, 1.0, 1.0, 1.0 - s.linear, 0.0)))
}

/// Physical parameters with `a = m = c = 1` that reduce to `al`.
pub fn type2_physical(al: &AlphaCoefficients) -> Result<(GkmnCoefficients, TypeIIWaveParams)> {
    let eq = GkmnCoefficients::new(1.0, -al.alpha1)?;
    let e = al.alpha3.sqrt();
    let mu = -al.alpha2 - (1.0 + 8.0 * eq.b * e) / 4.0;
    Ok((eq, TypeIIWaveParams { m: 1.0, c: 1.0, mu, e }))
}

/// The Type I wave carrying `spec`, with the parameters of [`type1_physical`].
pub fn type1_wave(spec: ProfileSpec) -> Result<TypeIWave> {
    let WaveSystem::TypeI(s) = spec.system else {
        return Err(Error::Domain(format!("{} is not a Type I family", spec.family)));
    };
    let (eq, params) = type1_physical(&s)?;
    TypeIWave::new(spec, eq, params)
}

/// The Type II wave carrying `spec`, with the parameters of [`type2_physical`].
pub fn type2_wave(spec: ProfileSpec, source: PhaseSource) -> Result<TypeIIWave> {
    let WaveSystem::TypeII(al) = spec.system else {
        return Err(Error::Domain(format!("{} is not a Type II family", spec.family)));
    };
    let (eq, params) = type2_physical(&al)?;
    TypeIIWave::new(spec, eq, params, source)
}

/// The amplitude family a printed phase belongs to.
pub fn amplitude_of(phase: PhaseFamily) -> SolutionFamily {
    SolutionFamily::ALL
        .into_iter()
        .find(|f| f.phase_family() == Some(phase))
        .expect("every phase family has an amplitude")
}

/// A validated default instance of `family`.
pub fn catalog_instance(family: SolutionFamily) -> Result<ProfileSpec> {
    let system = default_system(family);
    let h = default_energy(family)?;
    let roots = roots_at(family, &system, h)?;
    let energy = if roots.is_empty() { Some(h) } else { None };
    validate_profile(family, &roots, &system, energy)
}

/// Default instances of every family, paired with any construction error.
pub fn catalog() -> Vec<(SolutionFamily, Result<ProfileSpec>)> {
    SolutionFamily::ALL.iter().map(|&f| (f, catalog_instance(f))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_instantiates() {
        for (f, spec) in catalog() {
            let spec = spec.unwrap_or_else(|e| panic!("{f}: {e}"));
            assert_eq!(spec.family, f);
        }
    }
}
