//! Parameter records and the two traveling-wave reductions of the equation
//! `i q_t + a q_xy + i b q (q q*_x - q* q_x) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|phi|` the singular Type II field is not evaluated.
pub const SINGULAR_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkmnCoefficients {
    pub a: f64,
    pub b: f64,
}

impl GkmnCoefficients {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::Degenerate(format!("need a != 0 and b != 0, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b })
    }
}

/// Type I ansatz `q = p(x + m y - c t) exp(i(kappa x + omega y - r t + theta))`.
///
/// The velocity is always derived as `c = a m kappa + a omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeIWaveParams {
    pub m: f64,
    pub kappa: f64,
    pub omega: f64,
    pub r: f64,
    pub theta: f64,
    c: f64,
}

impl TypeIWaveParams {
    pub fn new(eq: &GkmnCoefficients, m: f64, kappa: f64, omega: f64, r: f64, theta: f64) -> Self {
        let c = eq.a * m * kappa + eq.a * omega;
        Self { m, kappa, omega, r, theta, c }
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Type II ansatz `q = phi(xi) exp(i(varphi(xi) - mu t))`, `xi = x + m y - c t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeIIWaveParams {
    pub m: f64,
    pub c: f64,
    pub mu: f64,
    pub e: f64,
}

/// Coefficients of `p'' = linear * p - 2 * cubic * p^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemICoefficients {
    pub linear: f64,
    pub cubic: f64,
}

impl SystemICoefficients {
    pub fn new(linear: f64, cubic: f64) -> Self {
        Self { linear, cubic }
    }

    pub fn field(&self, p: f64, y: f64) -> (f64, f64) {
        (y, self.force(p))
    }

    pub fn force(&self, p: f64) -> f64 {
        self.linear * p - 2.0 * self.cubic * p * p * p
    }

    pub fn energy(&self, p: f64, y: f64) -> f64 {
        let p2 = p * p;
        0.5 * y * y - 0.5 * self.linear * p2 + 0.5 * self.cubic * p2 * p2
    }
}

/// Coefficients of `phi'' = (alpha1 phi^6 + alpha2 phi^4 + alpha3) / phi^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl AlphaCoefficients {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        if alpha3 == 0.0 {
            return Err(Error::Degenerate("alpha3 = 0: the Type II system reduces to Type I".into()));
        }
        if !(alpha3 > 0.0) {
            return Err(Error::Domain(format!("alpha3 must be positive, got {alpha3}")));
        }
        Ok(Self { alpha1, alpha2, alpha3 })
    }

    fn numerator(&self, phi: f64) -> f64 {
        let p2 = phi * phi;
        let p4 = p2 * p2;
        self.alpha1 * p4 * p2 + self.alpha2 * p4 + self.alpha3
    }

    pub fn field_singular(&self, phi: f64, y: f64) -> Result<(f64, f64)> {
        Ok((y, self.force(phi)?))
    }

    pub fn force(&self, phi: f64) -> Result<f64> {
        if phi.abs() < SINGULAR_GUARD {
            return Err(Error::Singular(format!("phi = {phi} on the singular line")));
        }
        Ok(self.numerator(phi) / (phi * phi * phi))
    }

    /// Regularized field, obtained by the time change `d xi = phi^3 d zeta`.
    pub fn field_regular(&self, phi: f64, y: f64) -> (f64, f64) {
        (phi * phi * phi * y, self.numerator(phi))
    }

    pub fn energy(&self, phi: f64, y: f64) -> Result<f64> {
        if phi.abs() < SINGULAR_GUARD {
            return Err(Error::Singular(format!("energy undefined at phi = {phi}")));
        }
        let p2 = phi * phi;
        Ok(0.5 * y * y - 0.25 * self.alpha1 * p2 * p2 - 0.5 * self.alpha2 * p2 + 0.5 * self.alpha3 / p2)
    }

    /// The cubic `(alpha1/2) psi^3 + alpha2 psi^2 + 2 h psi - alpha3` in `psi = phi^2`,
    /// as ascending coefficients; `(psi')^2 = 4 G(psi)`.
    pub fn psi_cubic(&self, h: f64) -> [f64; 4] {
        [-self.alpha3, 2.0 * h, self.alpha2, 0.5 * self.alpha1]
    }

    /// Threshold of `alpha3` at which the two equilibrium pairs merge into cusps.
    pub fn cusp_threshold(&self) -> f64 {
        -4.0 * self.alpha2.powi(3) / (27.0 * self.alpha1 * self.alpha1)
    }
}

/// Either reduced system, as consumed by the bifurcation and verification code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveSystem {
    TypeI(SystemICoefficients),
    #[serde(rename = "type_ii")]
    TypeII(AlphaCoefficients),
}

impl WaveSystem {
    /// Right-hand side of `u'' = force(u)`.
    pub fn force(&self, u: f64) -> Result<f64> {
        match self {
            WaveSystem::TypeI(s) => Ok(s.force(u)),
            WaveSystem::TypeII(al) => al.force(u),
        }
    }

    pub fn energy(&self, u: f64, y: f64) -> Result<f64> {
        match self {
            WaveSystem::TypeI(s) => Ok(s.energy(u, y)),
            WaveSystem::TypeII(al) => al.energy(u, y),
        }
    }

    pub fn is_type_ii(&self) -> bool {
        matches!(self, WaveSystem::TypeII(_))
    }
}

/// Reduces the Type I ansatz to `(linear, cubic) = ((a kappa omega - r)/(am), kappa b/(am))`.
pub fn derive_system1(eq: &GkmnCoefficients, w: &TypeIWaveParams) -> Result<SystemICoefficients> {
    let am = eq.a * w.m;
    if am == 0.0 {
        return Err(Error::Degenerate("a*m = 0".into()));
    }
    Ok(SystemICoefficients {
        linear: (eq.a * w.kappa * w.omega - w.r) / am,
        cubic: w.kappa * eq.b / am,
    })
}

/// Reduces the Type II ansatz with `alpha2 = -mu/(am) - (c^2 + 8 b e)/4`.
pub fn derive_alpha(eq: &GkmnCoefficients, w: &TypeIIWaveParams) -> Result<AlphaCoefficients> {
    let am = eq.a * w.m;
    if am == 0.0 {
        return Err(Error::Degenerate("a*m = 0".into()));
    }
    let alpha2 = -w.mu / am - (w.c * w.c + 8.0 * eq.b * w.e) / 4.0;
    derive_alpha_with_override(eq, w, alpha2)
}

/// As [`derive_alpha`], but with `alpha2` supplied by the caller.
pub fn derive_alpha_with_override(
    eq: &GkmnCoefficients,
    w: &TypeIIWaveParams,
    alpha2: f64,
) -> Result<AlphaCoefficients> {
    let am = eq.a * w.m;
    if am == 0.0 {
        return Err(Error::Degenerate("a*m = 0".into()));
    }
    if w.e == 0.0 {
        return Err(Error::Degenerate(
            "e = 0: the Type II system reduces to the Type I system; use the Type I reduction".into(),
        ));
    }
    let am2 = am * am;
    Ok(AlphaCoefficients { alpha1: -w.c * eq.b / am2, alpha2, alpha3: w.e * w.e / am2 })
}

/// `varphi'(xi) = e/(am phi^2) + c/(2am)`.
pub fn phase_rate(eq: &GkmnCoefficients, w: &TypeIIWaveParams, phi: f64) -> Result<f64> {
    let am = eq.a * w.m;
    if phi.abs() < SINGULAR_GUARD {
        return Err(Error::Singular(format!("phase rate undefined at phi = {phi}")));
    }
    Ok(w.e / (am * phi * phi) + w.c / (2.0 * am))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system1_from_physical() {
        let eq = GkmnCoefficients::new(2.0, 1.0).unwrap();
        let w = TypeIWaveParams::new(&eq, 0.5, 1.0, 3.0, 1.0, 0.0);
        let s = derive_system1(&eq, &w).unwrap();
        assert_eq!((s.linear, s.cubic), (5.0, 1.0));
        assert_eq!(w.c(), 2.0 * 0.5 + 2.0 * 3.0);

        let eq = GkmnCoefficients::new(1.0, -0.5).unwrap();
        let w = TypeIWaveParams::new(&eq, 1.0, 1.0, 1.0, 5.0, 0.0);
        let s = derive_system1(&eq, &w).unwrap();
        assert_eq!((s.linear, s.cubic), (-4.0, -0.5));

        let w = TypeIWaveParams::new(&eq, 1.0, 0.0, 1.0, 3.0, 0.0);
        let s = derive_system1(&eq, &w).unwrap();
        assert_eq!((s.linear, s.cubic), (-3.0, 0.0));

        let w = TypeIWaveParams::new(&eq, 0.0, 1.0, 1.0, 3.0, 0.0);
        assert!(matches!(derive_system1(&eq, &w), Err(Error::Degenerate(_))));
    }

    #[test]
    fn field1_and_energy1() {
        let s = SystemICoefficients::new(-4.0, -0.5);
        assert_eq!(s.field(0.0, 0.0), (0.0, 0.0));
        assert_eq!(s.field(2.0, 0.0), (0.0, 0.0));
        assert_eq!(s.field(1.0, 3.0), (3.0, -3.0));
        assert_eq!(s.energy(0.0, 0.0), 0.0);
        assert_eq!(s.energy(2.0, 0.0), 4.0);
        assert_eq!(s.energy(1.3, 0.4), s.energy(-1.3, -0.4));
    }

    #[test]
    fn alpha_from_physical() {
        let eq = GkmnCoefficients::new(1.0, 1.0).unwrap();
        let w = TypeIIWaveParams { m: 1.0, c: -1.0, mu: 0.0, e: 1.0 };
        let al = derive_alpha(&eq, &w).unwrap();
        assert_eq!((al.alpha1, al.alpha2, al.alpha3), (1.0, -2.25, 1.0));
        let w0 = TypeIIWaveParams { c: 0.0, ..w };
        assert_eq!(derive_alpha(&eq, &w0).unwrap().alpha1, 0.0);
        let we = TypeIIWaveParams { e: 0.0, ..w };
        assert!(matches!(derive_alpha(&eq, &we), Err(Error::Degenerate(_))));
        let over = derive_alpha_with_override(&eq, &w, -4.0).unwrap();
        assert_eq!(over.alpha2, -4.0);
    }

    #[test]
    fn type2_fields() {
        let al = AlphaCoefficients::new(1.0, -4.0, 0.1).unwrap();
        let (_, dy) = al.field_singular(1.0, 0.0).unwrap();
        assert!((dy + 2.9).abs() < 1e-15);
        assert!(al.field_singular(0.0, 1.0).is_err());
        assert_eq!(al.field_regular(0.0, 5.0), (0.0, 0.1));
        let (u, v) = al.field_regular(1.0, 2.0);
        assert!((u - 2.0).abs() < 1e-15 && (v + 2.9).abs() < 1e-15);
        let (sp, sy) = al.field_singular(0.7, 1.3).unwrap();
        let (rp, ry) = al.field_regular(0.7, 1.3);
        let c = 0.7f64.powi(3);
        assert!((rp - c * sp).abs() < 1e-13 * rp.abs() && (ry - c * sy).abs() < 1e-13 * ry.abs());
        assert!((al.energy(1.0, 0.0).unwrap() - 1.8).abs() < 1e-14);
        assert!(al.energy(0.0, 1.0).is_err());
        assert!(matches!(AlphaCoefficients::new(1.0, 0.0, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn phase_rate_values() {
        let eq = GkmnCoefficients::new(1.0, 1.0).unwrap();
        let w = TypeIIWaveParams { m: 1.0, c: 0.0, mu: 0.0, e: 1.0 };
        assert_eq!(phase_rate(&eq, &w, 1.0).unwrap(), 1.0);
        let w = TypeIIWaveParams { c: -1.0, ..w };
        assert_eq!(phase_rate(&eq, &w, 2.0).unwrap(), -0.25);
        assert!((phase_rate(&eq, &w, 1e6).unwrap() + 0.5).abs() < 1e-11);
        assert!(phase_rate(&eq, &w, 0.0).is_err());
    }
}
