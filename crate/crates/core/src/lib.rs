pub mod bifurcation;
pub mod elliptic;
pub mod error;
pub mod poly;
pub mod portrait;
pub mod quadrature;
pub mod solutions;
pub mod verify;
pub mod wavesystems;

pub use elliptic::{JacobiRatios, JacobiTriple, Modulus};
pub use error::{Error, Result};
pub use wavesystems::{
    AlphaCoefficients, GkmnCoefficients, SystemICoefficients, TypeIIWaveParams, TypeIWaveParams,
    WaveSystem,
};
