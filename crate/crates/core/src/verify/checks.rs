use serde::{Deserialize, Serialize};

use super::rk::{rk_integrate, State};
use crate::error::Result;
use crate::quadrature::integrate;
use crate::solutions::{
    amplitude_scale, eval_amplitude, eval_amplitude_raw, eval_phase_closed, phase_rate_along, PhaseParams,
    ProfileSpec, SolutionFamily,
};
use crate::wavesystems::WaveSystem;

/// Finite-difference step for profile derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Number of interior samples per check.
pub const SAMPLES: usize = 100;
/// RK tolerance used by the closed-form comparison.
pub const RK_TOL: f64 = 1e-12;

/// Tolerances applied by the verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub ode_residual: f64,
    /// Applied to [`energy_spread`], which is already relative.
    pub energy_spread: f64,
    pub oracle: f64,
    pub oracle_singular: f64,
    /// Relative slack of the amplitude-interval check.
    pub branch: f64,
    pub period: f64,
    pub phase: f64,
    pub phase_rate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode_residual: 1e-6,
            energy_spread: 1e-7,
            oracle: 1e-6,
            oracle_singular: 1e-5,
            branch: 1e-9,
            period: 1e-6,
            phase: 1e-8,
            phase_rate: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn oracle_for(&self, family: SolutionFamily) -> f64 {
        if family.is_type_ii() && !family.is_bounded() {
            self.oracle_singular
        } else {
            self.oracle
        }
    }
}

/// An amplitude to verify against the ODE of `spec().system`.
///
/// Validated specs implement this directly; [`FnProfile`] wraps an arbitrary
/// function so that deliberately broken formulas can be checked too.
pub trait AmplitudeProfile: Sync {
    fn spec(&self) -> &ProfileSpec;
    fn value(&self, xi: f64) -> Result<f64>;
}

impl AmplitudeProfile for ProfileSpec {
    fn spec(&self) -> &ProfileSpec {
        self
    }

    fn value(&self, xi: f64) -> Result<f64> {
        if self.family.is_periodic() {
            eval_amplitude_raw(self, xi)
        } else {
            eval_amplitude(self, xi)
        }
    }
}

/// A profile function checked against the metadata of `spec`.
pub struct FnProfile<F> {
    pub spec: ProfileSpec,
    pub f: F,
}

impl<F: Fn(f64) -> Result<f64> + Sync> FnProfile<F> {
    pub fn new(spec: ProfileSpec, f: F) -> Self {
        Self { spec, f }
    }
}

impl<F: Fn(f64) -> Result<f64> + Sync> AmplitudeProfile for FnProfile<F> {
    fn spec(&self) -> &ProfileSpec {
        &self.spec
    }

    fn value(&self, xi: f64) -> Result<f64> {
        (self.f)(xi)
    }
}

fn force(system: &WaveSystem, u: f64) -> Result<f64> {
    system.force(u)
}

/// Rate at which a full-line orbit approaches its limit equilibrium, the
/// unstable eigenvalue there. Used to size the sampling windows.
fn decay_rate(spec: &ProfileSpec) -> f64 {
    use SolutionFamily::*;
    let r = &spec.roots;
    let limit = match spec.family {
        Pb2 | Pb2p => r[1].abs(),
        Pb4 | Pb4p => 0.0,
        PhiB2 => r[1].sqrt(),
        _ => return 1.0,
    };
    let d = 1e-5 * limit.abs().max(1.0);
    match (spec.system.force(limit + d), spec.system.force(limit - d)) {
        (Ok(a), Ok(b)) if a > b => ((a - b) / (2.0 * d)).sqrt(),
        _ => 1.0,
    }
}

fn within_cap(profile: &dyn AmplitudeProfile, xi: f64, cap: f64) -> bool {
    matches!(profile.value(xi), Ok(v) if v.abs() <= cap)
}

fn bisect_edge(profile: &dyn AmplitudeProfile, mut inside: f64, mut outside: f64, cap: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (inside + outside);
        if within_cap(profile, mid, cap) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// The `xi` interval every metric samples.
///
/// Periodic families use one period; full-line families use ten decay
/// lengths each side; unbounded families use the part of the first pole-free
/// lobe where `|p|` stays below four amplitude scales.
pub fn sample_window(profile: &dyn AmplitudeProfile) -> (f64, f64) {
    let spec = profile.spec();
    let (lo, hi) = spec.domain;
    if spec.family.is_periodic() && lo.is_finite() && hi.is_finite() {
        return (lo, hi);
    }
    if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
        let l = 10.0 / decay_rate(spec);
        return (-l, l);
    }
    let cap = 4.0 * amplitude_scale(spec);
    let end = spec.interior_pole.unwrap_or(hi);
    if end.is_infinite() {
        let mut prev = lo;
        let mut step = 1e-3;
        for _ in 0..60 {
            let x = lo + step;
            if within_cap(profile, x, cap) {
                let a = bisect_edge(profile, x, prev, cap);
                let a = a + 1e-9 * a.abs().max(1e-9);
                return (a, a + 20.0 * (a - lo).max(0.05));
            }
            prev = x;
            step *= 2.0;
        }
        return (lo + 1.0, lo + 2.0);
    }
    const GRID: usize = 400;
    let at = |i: usize| lo + (end - lo) * (i as f64 + 0.5) / GRID as f64;
    let inside: Vec<bool> = (0..GRID).map(|i| within_cap(profile, at(i), cap)).collect();
    let mut best = (0, 0);
    let mut i = 0;
    while i < GRID {
        if inside[i] {
            let start = i;
            while i < GRID && inside[i] {
                i += 1;
            }
            if i - start > best.1 - best.0 {
                best = (start, i);
            }
        } else {
            i += 1;
        }
    }
    if best.1 == best.0 {
        let w = end - lo;
        return (lo + 0.25 * w, end - 0.25 * w);
    }
    let left_out = if best.0 == 0 { lo } else { at(best.0 - 1) };
    let right_out = if best.1 == GRID { end } else { at(best.1) };
    let a = bisect_edge(profile, at(best.0), left_out, cap);
    let b = bisect_edge(profile, at(best.1 - 1), right_out, cap);
    (a, b)
}

/// `n` evenly spaced interior points of `(a, b)`.
pub fn sample_points(window: (f64, f64), n: usize) -> Vec<f64> {
    let (a, b) = window;
    (1..=n).map(|i| a + (b - a) * i as f64 / (n + 1) as f64).collect()
}

/// Value, first and second derivative by 5-point central differences.
pub fn fd_derivatives(profile: &dyn AmplitudeProfile, xi: f64) -> Result<(f64, f64, f64)> {
    let d = FD_STEP;
    let pm2 = profile.value(xi - 2.0 * d)?;
    let pm1 = profile.value(xi - d)?;
    let p0 = profile.value(xi)?;
    let pp1 = profile.value(xi + d)?;
    let pp2 = profile.value(xi + 2.0 * d)?;
    let p1 = (pm2 - 8.0 * pm1 + 8.0 * pp1 - pp2) / (12.0 * d);
    let p2 = (-pm2 + 16.0 * pm1 - 30.0 * p0 + 16.0 * pp1 - pp2) / (12.0 * d * d);
    Ok((p0, p1, p2))
}

/// Largest `|p'' - f(p)| / max(1, |f(p)|)` over the samples.
pub fn ode_residual(profile: &dyn AmplitudeProfile) -> Result<f64> {
    let system = profile.spec().system;
    let mut worst = 0.0f64;
    for xi in sample_points(sample_window(profile), SAMPLES) {
        let (p, _, p2) = fd_derivatives(profile, xi)?;
        let f = force(&system, p)?;
        worst = worst.max((p2 - f).abs() / f.abs().max(1.0));
    }
    Ok(worst)
}

/// Spread of the energy along the samples, each deviation from the family's
/// energy taken relative to the largest term of the energy at that sample.
pub fn energy_spread(profile: &dyn AmplitudeProfile) -> Result<f64> {
    let spec = profile.spec();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for xi in sample_points(sample_window(profile), SAMPLES) {
        let (p, p1, _) = fd_derivatives(profile, xi)?;
        let h = spec.system.energy(p, p1)?;
        let kinetic = 0.5 * p1 * p1;
        let scale = kinetic.max(spec.energy.abs()).max(1.0);
        let dev = (h - spec.energy) / scale;
        lo = lo.min(dev);
        hi = hi.max(dev);
    }
    Ok(hi - lo)
}

/// Largest distance of the samples from the family's amplitude interval,
/// relative to the amplitude scale.
pub fn branch_violation(profile: &dyn AmplitudeProfile) -> Result<f64> {
    let spec = profile.spec();
    let (lo, hi) = spec.amplitude_range;
    let scale = amplitude_scale(spec);
    let mut worst = 0.0f64;
    for xi in sample_points(sample_window(profile), SAMPLES) {
        let p = profile.value(xi)?;
        let out = (lo - p).max(p - hi).max(0.0);
        worst = worst.max(out / scale);
    }
    Ok(worst)
}

fn field_of(system: WaveSystem) -> impl Fn(f64, &State) -> Result<State> {
    move |_, y| Ok([y[1], system.force(y[0])?])
}

/// Sup-norm comparison of the closed form with a DOPRI5 solution started
/// from the closed form's own state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub sup_error: f64,
    pub start: f64,
    pub compared: usize,
    pub note: Option<String>,
}

/// Replaces an FD slope by the energy-consistent one when the two agree.
///
/// Near a saddle the orbit amplifies initial errors by roughly `e^20` over the
/// sampling window, so FD roundoff alone would exceed the oracle tolerance.
fn refine_slope(spec: &ProfileSpec, p: f64, fd: f64) -> Result<f64> {
    let y2 = 2.0 * (spec.energy - spec.system.energy(p, 0.0)?);
    if y2 <= 0.0 {
        return Ok(fd);
    }
    let y = y2.sqrt().copysign(fd);
    Ok(if (y - fd).abs() <= 1e-6 * y.abs().max(1.0) { y } else { fd })
}

/// Starts at `xi = 0` when the window contains it, otherwise at the window
/// midpoint, and integrates both ways across the window.
pub fn closed_vs_numeric(profile: &dyn AmplitudeProfile) -> Result<OracleComparison> {
    let spec = profile.spec();
    let window = sample_window(profile);
    let start = if window.0 < 0.0 && window.1 > 0.0 { 0.0 } else { 0.5 * (window.0 + window.1) };
    let (p0, p1, _) = fd_derivatives(profile, start)?;
    let p1 = refine_slope(spec, p0, p1)?;
    let field = field_of(spec.system);
    let fwd = rk_integrate(&field, [p0, p1], start, window.1, RK_TOL);
    let bwd = rk_integrate(&field, [p0, p1], start, window.0, RK_TOL);
    let mut note = fwd.stopped.clone().or(bwd.stopped.clone());
    let mut sup = 0.0f64;
    let mut compared = 0;
    for xi in sample_points(window, SAMPLES) {
        let traj = if xi >= start { &fwd } else { &bwd };
        let Ok(y) = traj.eval(xi) else { continue };
        let p = profile.value(xi)?;
        sup = sup.max((p - y[0]).abs() / p.abs().max(1.0));
        compared += 1;
    }
    if compared < SAMPLES {
        note.get_or_insert_with(|| "comparison truncated".into());
    }
    Ok(OracleComparison { sup_error: sup, start, compared, note })
}

/// Relative difference between the spec's period and the RK return time.
pub fn period_error(profile: &dyn AmplitudeProfile) -> Result<Option<f64>> {
    let spec = profile.spec();
    let Some(period) = spec.period else { return Ok(None) };
    let (lo, hi) = spec.amplitude_range;
    let level = 0.5 * (lo + hi);
    let (p0, p1, _) = fd_derivatives(profile, 0.0)?;
    let traj = rk_integrate(field_of(spec.system), [p0, p1], 0.0, 2.5 * period, RK_TOL);
    let ups = traj.crossings(0, level, 1.0);
    if ups.len() < 2 {
        return Ok(Some(f64::INFINITY));
    }
    Ok(Some(((ups[1] - ups[0]) - period).abs() / period))
}

/// Closed-form phase against quadrature of the phase rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseComparison {
    /// Largest mismatch of phase increments from the first sample.
    pub sup_error: f64,
    /// Largest relative mismatch of the FD derivative with the phase rate.
    pub rate_error: f64,
}

/// Compares increments of the printed phase with quadrature over the sample window.
pub fn phase_vs_quadrature(spec: &ProfileSpec, params: &PhaseParams, n: usize) -> Result<PhaseComparison> {
    let pts = sample_points(sample_window(spec), n);
    let closed: Vec<f64> = pts.iter().map(|&x| eval_phase_closed(spec, params, x)).collect::<Result<_>>()?;
    let mut failure = None;
    let mut acc = 0.0;
    let mut sup = 0.0f64;
    for i in 1..pts.len() {
        acc += integrate(
            |s| {
                phase_rate_along(spec, params, s).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    f64::NAN
                })
            },
            pts[i - 1],
            pts[i],
            1e-13,
        )?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        sup = sup.max(((closed[i] - closed[0]) - acc).abs());
    }
    let d = 1e-3;
    let mut rate_error = 0.0f64;
    for &x in &pts {
        let f = |t: f64| eval_phase_closed(spec, params, t);
        let fd = (f(x - 2.0 * d)? - 8.0 * f(x - d)? + 8.0 * f(x + d)? - f(x + 2.0 * d)?) / (12.0 * d);
        let rate = phase_rate_along(spec, params, x)?;
        rate_error = rate_error.max((fd - rate).abs() / rate.abs().max(1.0));
    }
    Ok(PhaseComparison { sup_error: sup, rate_error })
}
