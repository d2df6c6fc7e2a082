use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solutions::Wave;
use crate::wavesystems::GkmnCoefficients;

/// A uniform cube of nodes `origin + h * (i, j, k)`, `0 <= i, j, k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: [f64; 3],
    pub step: f64,
    pub n: usize,
}

impl GridSpec {
    /// Grid covering `[origin, origin + size]` on each axis with spacing `step`.
    pub fn cube(origin: [f64; 3], size: f64, step: f64) -> Result<Self> {
        let n = (size / step).round() as usize + 1;
        if n < 5 || !(step > 0.0) {
            return Err(Error::Domain(format!("grid needs at least 5 points per axis, got {n}")));
        }
        Ok(Self { origin, step, n })
    }
}

/// Max-norm of the central-difference residual on interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    pub step: f64,
    pub norm: f64,
    /// Interior nodes skipped because a stencil point failed to evaluate.
    pub excluded: usize,
}

/// Evaluates `i q_t + a q_xy + i b q (q conj(q)_x - conj(q) q_x)` with
/// second-order central differences.
pub fn pde_residual(wave: &dyn Wave, eq: &GkmnCoefficients, grid: &GridSpec) -> Result<PdeResidual> {
    let n = grid.n;
    if n < 5 {
        return Err(Error::Domain("grid needs at least 5 points per axis".into()));
    }
    let h = grid.step;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let values: Vec<Option<Complex64>> = (0..n * n * n)
        .into_par_iter()
        .map(|m| {
            let (i, j, k) = (m / (n * n), (m / n) % n, m % n);
            let [x0, y0, t0] = grid.origin;
            wave.q(x0 + i as f64 * h, y0 + j as f64 * h, t0 + k as f64 * h).ok()
        })
        .collect();
    let im = Complex64::new(0.0, 1.0);
    let mut norm = 0.0f64;
    let mut excluded = 0;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            for k in 1..n - 1 {
                let get = |a, b, c| values[idx(a, b, c)];
                let stencil = (
                    get(i, j, k),
                    get(i, j, k + 1),
                    get(i, j, k - 1),
                    get(i + 1, j, k),
                    get(i - 1, j, k),
                    get(i + 1, j + 1, k),
                    get(i + 1, j - 1, k),
                    get(i - 1, j + 1, k),
                    get(i - 1, j - 1, k),
                );
                let (Some(q), Some(tp), Some(tm), Some(xp), Some(xm), Some(pp), Some(pm), Some(mp), Some(mm)) = stencil
                else {
                    excluded += 1;
                    continue;
                };
                let q_t = (tp - tm) / (2.0 * h);
                let q_x = (xp - xm) / (2.0 * h);
                let q_xy = (pp - pm - mp + mm) / (4.0 * h * h);
                let r = im * q_t + eq.a * q_xy + im * eq.b * q * (q * q_x.conj() - q.conj() * q_x);
                norm = norm.max(r.norm());
            }
        }
    }
    Ok(PdeResidual { step: h, norm, excluded })
}

/// Residuals on the nested grids `steps` over the cube `[origin, origin + size]`.
pub fn pde_convergence(
    wave: &dyn Wave,
    eq: &GkmnCoefficients,
    origin: [f64; 3],
    size: f64,
    steps: &[f64],
) -> Result<Vec<PdeResidual>> {
    steps.iter().map(|&h| pde_residual(wave, eq, &GridSpec::cube(origin, size, h)?)).collect()
}

/// Observed orders `log2(r_i / r_{i+1})` for successive halvings of the step.
pub fn convergence_orders(residuals: &[PdeResidual]) -> Vec<f64> {
    residuals
        .windows(2)
        .map(|w| (w[0].norm / w[1].norm).ln() / (w[0].step / w[1].step).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::ZeroWave;

    struct PlaneWave {
        kappa: f64,
        omega: f64,
        r: f64,
        amp: f64,
    }

    impl Wave for PlaneWave {
        fn q(&self, x: f64, y: f64, t: f64) -> Result<Complex64> {
            Ok(Complex64::from_polar(self.amp, self.kappa * x + self.omega * y - self.r * t))
        }
    }

    #[test]
    fn zero_wave_has_zero_residual() {
        let eq = GkmnCoefficients::new(1.0, -0.5).unwrap();
        let g = GridSpec::cube([0.0; 3], 0.5, 0.05).unwrap();
        assert_eq!(pde_residual(&ZeroWave, &eq, &g).unwrap().norm, 0.0);
    }

    #[test]
    fn plane_wave_converges_at_second_order() {
        // A constant amplitude P solves the reduction when r = a kappa omega - 2 kappa b P^2.
        let eq = GkmnCoefficients::new(1.3, -0.7).unwrap();
        let (kappa, omega, amp) = (1.1, 0.9, 0.8);
        let r = eq.a * kappa * omega - 2.0 * kappa * eq.b * amp * amp;
        let wave = PlaneWave { kappa, omega, r, amp };
        let res = pde_convergence(&wave, &eq, [1.0; 3], 0.5, &[0.05, 0.025, 0.0125]).unwrap();
        for o in convergence_orders(&res) {
            assert!((o - 2.0).abs() < 0.2, "{o}");
        }
    }
}
