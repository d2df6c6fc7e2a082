//! Real roots of small polynomials via companion-matrix eigenvalues.

use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

/// Relative threshold for merging eigenvalues into one multiple root and for
/// treating a cluster as real. A triple root perturbed by rounding spreads by
/// about `eps^(1/3)`, so the threshold sits well above that.
pub const CLUSTER_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: f64,
    pub multiplicity: usize,
}

/// Evaluates the polynomial with ascending coefficients at `x`.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Ascending coefficients of the derivative.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect()
}

/// Largest coefficient magnitude, used to scale residual checks.
pub fn coefficient_scale(coeffs: &[f64]) -> f64 {
    coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

fn newton(coeffs: &[f64], mut x: f64) -> f64 {
    let d = derivative(coeffs);
    for _ in 0..8 {
        let fp = eval(&d, x);
        if fp == 0.0 {
            break;
        }
        let step = eval(coeffs, x) / fp;
        let next = x - step;
        if !next.is_finite() || (eval(coeffs, next).abs() > eval(coeffs, x).abs()) {
            break;
        }
        x = next;
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Real roots with multiplicities, sorted ascending.
///
/// Eigenvalues with `|im| <= CLUSTER_TOL * scale` count as real; real values
/// closer than `CLUSTER_TOL * scale` merge into one root whose multiplicity is
/// the cluster size. A cluster of size `m` is polished by Newton steps on the
/// `(m-1)`-th derivative.
pub fn real_roots(coeffs: &[f64]) -> Vec<Root> {
    let c = trimmed(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    // Factor out roots at zero exactly.
    let zeros = c.iter().take_while(|&&v| v == 0.0).count();
    let reduced = &c[zeros..];
    let deg = reduced.len() - 1;
    let mut values: Vec<(f64, f64)> = Vec::new();
    if deg > 0 {
        let lead = reduced[deg];
        let mut comp = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -reduced[i] / lead;
        }
        // The QR sweep stalls on some spectra (one orientation of (x^2-4)^2, or
        // symmetric double pairs {a, a, -a, -a}); a real shift breaks the symmetry.
        let bound = 1.0 + (0..deg).map(|i| (reduced[i] / lead).abs()).fold(0.0, f64::max);
        let sigma = std::f64::consts::FRAC_1_PI * bound;
        let eig = |m: DMatrix<f64>, shift: f64| {
            Schur::try_new(m, f64::EPSILON, 10_000)
                .map(|s| s.complex_eigenvalues().iter().map(|z| (z.re - shift, z.im)).collect::<Vec<_>>())
        };
        let found = eig(comp.clone(), 0.0)
            .or_else(|| eig(comp.transpose(), 0.0))
            .or_else(|| eig(&comp + DMatrix::<f64>::identity(deg, deg) * sigma, sigma));
        values.extend(found.unwrap_or_default());
    }
    values.extend(std::iter::repeat((0.0, 0.0)).take(zeros));
    let scale = values.iter().fold(1.0f64, |m, &(re, im)| m.max(re.hypot(im)));
    let tol = CLUSTER_TOL * scale;

    // Single-linkage clustering in the complex plane.
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (values[i], values[j]);
            if (a.0 - b.0).hypot(a.1 - b.1) <= tol {
                let (old, new) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == old {
                        *l = new;
                    }
                }
            }
        }
    }
    let mut roots: Vec<Root> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<(f64, f64)> = (0..n).filter(|&j| label[j] == label[i]).map(|j| values[j]).collect();
        let multiplicity = members.len();
        let re = members.iter().map(|m| m.0).sum::<f64>() / multiplicity as f64;
        let im = members.iter().map(|m| m.1).sum::<f64>() / multiplicity as f64;
        if im.abs() > tol {
            continue;
        }
        let mut target = c.to_vec();
        for _ in 1..multiplicity {
            target = derivative(&target);
        }
        let exact_zero = zeros >= multiplicity && members.iter().all(|m| m.0 == 0.0 && m.1 == 0.0);
        let value = if exact_zero { 0.0 } else { newton(&target, re) };
        roots.push(Root { value, multiplicity });
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_and_double_roots() {
        // (x - 1)(x + 2)(x - 3)
        let r = real_roots(&[6.0, -5.0, -2.0, 1.0]);
        let v: Vec<f64> = r.iter().map(|x| x.value).collect();
        assert_eq!(r.len(), 3);
        for (got, want) in v.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        // (x - 2)^2 (x + 2)^2 = x^4 - 8x^2 + 16
        let r = real_roots(&[16.0, 0.0, -8.0, 0.0, 1.0]);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 2));
        assert!((r[0].value + 2.0).abs() < 1e-14 && (r[1].value - 2.0).abs() < 1e-14);
        // separatrix level of p'' = -p + 2(1.9066)p^3, where both companion orientations stall
        let cubic = 1.9065762336506091;
        let r = real_roots(&[1.0 / (4.0 * cubic), 0.0, -1.0, 0.0, cubic]);
        let a = (0.5 / cubic).sqrt();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 2));
        assert!((r[0].value + a).abs() < 1e-12 && (r[1].value - a).abs() < 1e-12);
    }

    #[test]
    fn exact_zero_roots_and_complex_pairs() {
        // x^2 (x^2 - 8)
        let r = real_roots(&[0.0, 0.0, -8.0, 0.0, 1.0]);
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], Root { value: 0.0, multiplicity: 2 });
        assert!((r[2].value - 8f64.sqrt()).abs() < 1e-14);
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
        assert!(real_roots(&[3.0]).is_empty());
    }

    #[test]
    fn triple_root() {
        // (x - 4/3)^3
        let c = [-64.0 / 27.0, 16.0 / 3.0, -4.0, 1.0];
        let r = real_roots(&c);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].value - 4.0 / 3.0).abs() < 1e-12);
    }
}
