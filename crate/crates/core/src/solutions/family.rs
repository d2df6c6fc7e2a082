use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bifurcation::{classify_type1, classify_type2, RegimeIITag, RegimeITag};
use crate::error::{Error, Result};
use crate::wavesystems::WaveSystem;

/// Every amplitude family of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SolutionFamily {
    Pb1,
    Pb2,
    Pb2p,
    Pb3,
    Pb3p,
    Pb4,
    Pb4p,
    Pb5,
    Pb6,
    Pb7,
    Pu0,
    Pu1,
    Pu1p,
    Pu2,
    Pu2p,
    Pu3,
    Pu3p,
    Pu4,
    Pu4p,
    Pu5,
    Pu5p,
    Pu6,
    Pu6p,
    Pu7,
    Pu7p,
    Pu8,
    Pu8p,
    Pu9,
    Pu9p,
    PhiB1,
    PhiB2,
    PhiB3,
    PhiU1,
    PhiU2,
    PhiU3,
    PhiU4,
    PhiU5,
    PhiU6,
    PhiU7,
    PhiU8,
}

/// Printed phase antiderivatives for the Type II families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseFamily {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
}

use SolutionFamily::*;

impl SolutionFamily {
    pub const ALL: [SolutionFamily; 40] = [
        Pb1, Pb2, Pb2p, Pb3, Pb3p, Pb4, Pb4p, Pb5, Pb6, Pb7, Pu0, Pu1, Pu1p, Pu2, Pu2p, Pu3, Pu3p, Pu4,
        Pu4p, Pu5, Pu5p, Pu6, Pu6p, Pu7, Pu7p, Pu8, Pu8p, Pu9, Pu9p, PhiB1, PhiB2, PhiB3, PhiU1, PhiU2,
        PhiU3, PhiU4, PhiU5, PhiU6, PhiU7, PhiU8,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Pb1 => "p_b1",
            Pb2 => "p_b2",
            Pb2p => "p_b2p",
            Pb3 => "p_b3",
            Pb3p => "p_b3p",
            Pb4 => "p_b4",
            Pb4p => "p_b4p",
            Pb5 => "p_b5",
            Pb6 => "p_b6",
            Pb7 => "p_b7",
            Pu0 => "p_u0",
            Pu1 => "p_u1",
            Pu1p => "p_u1p",
            Pu2 => "p_u2",
            Pu2p => "p_u2p",
            Pu3 => "p_u3",
            Pu3p => "p_u3p",
            Pu4 => "p_u4",
            Pu4p => "p_u4p",
            Pu5 => "p_u5",
            Pu5p => "p_u5p",
            Pu6 => "p_u6",
            Pu6p => "p_u6p",
            Pu7 => "p_u7",
            Pu7p => "p_u7p",
            Pu8 => "p_u8",
            Pu8p => "p_u8p",
            Pu9 => "p_u9",
            Pu9p => "p_u9p",
            PhiB1 => "phi_b1",
            PhiB2 => "phi_b2",
            PhiB3 => "phi_b3",
            PhiU1 => "phi_u1",
            PhiU2 => "phi_u2",
            PhiU3 => "phi_u3",
            PhiU4 => "phi_u4",
            PhiU5 => "phi_u5",
            PhiU6 => "phi_u6",
            PhiU7 => "phi_u7",
            PhiU8 => "phi_u8",
        }
    }

    pub fn is_type_ii(self) -> bool {
        matches!(self, PhiB1 | PhiB2 | PhiB3 | PhiU1 | PhiU2 | PhiU3 | PhiU4 | PhiU5 | PhiU6 | PhiU7 | PhiU8)
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Pb1 | Pb2 | Pb2p | Pb3 | Pb3p | Pb4 | Pb4p | Pb5 | Pb6 | Pb7 | PhiB1 | PhiB2 | PhiB3)
    }

    pub fn is_periodic(self) -> bool {
        matches!(self, Pb1 | Pb3 | Pb3p | Pb5 | Pb6 | Pb7 | PhiB1 | PhiB3)
    }

    /// Number of level-set roots the family is parameterized by.
    pub fn root_count(self) -> usize {
        match self {
            Pb1 | Pb3 | Pb3p | Pu2 | Pu2p => 4,
            PhiB1 | PhiU3 => 3,
            Pb2 | Pb2p | PhiB2 | PhiB3 | PhiU2 | PhiU4 => 2,
            Pb4 | Pb4p | Pb5 | Pb6 | Pb7 | Pu3 | Pu3p | Pu4 | Pu4p | Pu8 | Pu8p | Pu9 | Pu9p | PhiU1
            | PhiU5 | PhiU7 | PhiU8 => 1,
            Pu0 | Pu1 | Pu1p | Pu5 | Pu5p | Pu6 | Pu6p | Pu7 | Pu7p | PhiU6 => 0,
        }
    }

    /// The printed phase antiderivative, where one exists.
    pub fn phase_family(self) -> Option<PhaseFamily> {
        match self {
            PhiB1 => Some(PhaseFamily::S1),
            PhiB2 => Some(PhaseFamily::S2),
            PhiB3 => Some(PhaseFamily::S3),
            PhiU1 => Some(PhaseFamily::S4),
            PhiU2 => Some(PhaseFamily::S5),
            PhiU3 => Some(PhaseFamily::S6),
            PhiU4 => Some(PhaseFamily::S7),
            PhiU6 => Some(PhaseFamily::S8),
            _ => None,
        }
    }

    /// Whether the family belongs to the regime of `system`.
    pub fn admissible(self, system: &WaveSystem) -> bool {
        match system {
            WaveSystem::TypeI(s) => {
                let Ok(regime) = classify_type1(s) else { return false };
                let lin = s.linear;
                match self {
                    Pb1 | Pb2 | Pb2p | Pu0 | Pu1 | Pu1p | Pu2 | Pu2p | Pu3 | Pu3p | Pu4 | Pu4p => {
                        regime.tag == RegimeITag::Case1
                    }
                    Pb3 | Pb3p | Pb4 | Pb4p | Pb5 => regime.tag == RegimeITag::Case2,
                    Pu5 | Pu6 | Pu6p | Pu8 | Pu8p => regime.tag == RegimeITag::Case3Unbounded && lin > 0.0,
                    Pu5p | Pu7 | Pu7p | Pu9 | Pu9p => regime.tag == RegimeITag::Case3Unbounded && lin == 0.0,
                    Pb6 => regime.tag == RegimeITag::Case3Bounded && lin < 0.0,
                    Pb7 => regime.tag == RegimeITag::Case3Bounded && lin == 0.0,
                    _ => false,
                }
            }
            WaveSystem::TypeII(al) => {
                let Ok(regime) = classify_type2(al) else { return false };
                match self {
                    PhiB1 | PhiB2 | PhiU1 | PhiU2 | PhiU3 | PhiU4 | PhiU5 => regime.tag == RegimeIITag::CaseI,
                    PhiU6 | PhiU7 => regime.tag == RegimeIITag::CaseII,
                    PhiU8 => regime.tag == RegimeIITag::CaseIII,
                    PhiB3 => regime.tag == RegimeIITag::CaseIV,
                    _ => false,
                }
            }
        }
    }

    /// Families admissible for `system`, in catalog order.
    pub fn admissible_for(system: &WaveSystem) -> Vec<SolutionFamily> {
        Self::ALL.iter().copied().filter(|f| f.admissible(system)).collect()
    }

    pub(crate) fn inadmissible(self, system: &WaveSystem) -> Error {
        let list: Vec<&str> = Self::admissible_for(system).iter().map(|f| f.tag()).collect();
        Error::Inadmissible {
            family: self.tag().to_string(),
            admissible: if list.is_empty() { "none".into() } else { list.join(", ") },
        }
    }
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SolutionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('\'', "p");
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.tag() == norm)
            .ok_or_else(|| Error::Domain(format!("unknown family tag '{s}'")))
    }
}

impl TryFrom<String> for SolutionFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SolutionFamily> for String {
    fn from(f: SolutionFamily) -> String {
        f.tag().to_string()
    }
}
