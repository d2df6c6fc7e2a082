//! Independent numerical oracles and verdicts for the closed-form catalog.

mod checks;
mod oracle;
mod pde;
mod rk;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::{
    branch_violation, closed_vs_numeric, energy_spread, fd_derivatives, ode_residual, period_error,
    phase_vs_quadrature, sample_points, sample_window, AmplitudeProfile, FnProfile, OracleComparison,
    PhaseComparison, Tolerances, FD_STEP, RK_TOL, SAMPLES,
};
pub use oracle::{elliptic_oracle, OracleKind};
pub use pde::{convergence_orders, pde_convergence, pde_residual, GridSpec, PdeResidual};
pub use rk::{rk_integrate, State, Step, Trajectory};

use crate::elliptic::jacobi;
use crate::error::Result;
use crate::solutions::{catalog_instance, PhaseParams, ProfileSpec, SolutionFamily};
use crate::wavesystems::WaveSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    AsPrintedDiscrepancy,
    Fail,
}

/// Metrics and verdict for one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: String,
    pub ode_residual_max: Option<f64>,
    pub energy_spread: Option<f64>,
    pub oracle_sup_error: Option<f64>,
    pub branch_violation: Option<f64>,
    pub period_error: Option<f64>,
    pub phase_error: Option<f64>,
    pub phase_rate_error: Option<f64>,
    /// `(grid step, residual norm)` pairs.
    pub pde_residual_orders: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn empty(target: String, tolerances: Tolerances) -> Self {
        Self {
            target,
            ode_residual_max: None,
            energy_spread: None,
            oracle_sup_error: None,
            branch_violation: None,
            period_error: None,
            phase_error: None,
            phase_rate_error: None,
            pde_residual_orders: Vec::new(),
            verdict: Verdict::Fail,
            tolerances,
            notes: Vec::new(),
        }
    }

    fn fail(mut self, note: String) -> Self {
        self.verdict = Verdict::Fail;
        self.notes.push(note);
        self
    }

    /// Largest ratio metric/tolerance over the populated amplitude metrics.
    pub fn worst_ratio(&self) -> f64 {
        let t = &self.tolerances;
        [
            self.ode_residual_max.map(|v| v / t.ode_residual),
            self.energy_spread.map(|v| v / t.energy_spread),
            self.branch_violation.map(|v| v / t.branch),
            self.period_error.map(|v| v / t.period),
            self.phase_error.map(|v| v / t.phase),
        ]
        .into_iter()
        .flatten()
        .fold(0.0f64, f64::max)
    }
}

/// Pass / discrepancy / fail counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub as_printed_discrepancy: usize,
    pub fail: usize,
}

pub fn summarize(reports: &[VerificationReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::AsPrintedDiscrepancy => s.as_printed_discrepancy += 1,
            Verdict::Fail => s.fail += 1,
        }
    }
    s
}

fn exceeds(value: f64, tol: f64, label: &str, notes: &mut Vec<String>) -> bool {
    if value <= tol {
        return false;
    }
    notes.push(format!("{label} {value:.3e} exceeds {tol:.0e}"));
    true
}

/// Runs every amplitude check on `profile` and assigns a verdict.
///
/// A profile that does not evaluate to finite real values on its domain is a
/// Fail; one that evaluates but misses any tolerance is an
/// AsPrintedDiscrepancy with the magnitudes recorded.
pub fn verify_profile(profile: &dyn AmplitudeProfile, tolerances: &Tolerances) -> VerificationReport {
    let spec = profile.spec();
    let mut report = VerificationReport::empty(spec.family.tag().to_string(), *tolerances);
    macro_rules! metric {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) => return report.fail(format!("not finite on its domain: {e}")),
            }
        };
    }
    let ode = metric!(ode_residual(profile));
    let spread = metric!(energy_spread(profile));
    let oracle = metric!(closed_vs_numeric(profile));
    let branch = metric!(branch_violation(profile));
    let period = metric!(period_error(profile));
    report.ode_residual_max = Some(ode);
    report.energy_spread = Some(spread);
    report.oracle_sup_error = Some(oracle.sup_error);
    report.branch_violation = Some(branch);
    report.period_error = period;
    if let Some(n) = &oracle.note {
        report.notes.push(format!("RK: {n}"));
    }
    let mut notes = Vec::new();
    let mut bad = false;
    bad |= exceeds(ode, tolerances.ode_residual, "ODE residual", &mut notes);
    bad |= exceeds(spread, tolerances.energy_spread, "energy spread", &mut notes);
    bad |= exceeds(oracle.sup_error, tolerances.oracle_for(spec.family), "RK sup error", &mut notes);
    bad |= exceeds(branch, tolerances.branch, "branch violation", &mut notes);
    if let Some(p) = period {
        bad |= exceeds(p, tolerances.period, "period error", &mut notes);
    }
    report.notes.extend(notes);
    report.verdict = if bad { Verdict::AsPrintedDiscrepancy } else { Verdict::Pass };
    report
}

/// Checks the printed phase of `spec` against quadrature.
pub fn verify_phase(spec: &ProfileSpec, params: &PhaseParams, tolerances: &Tolerances) -> VerificationReport {
    let target = match spec.family.phase_family() {
        Some(p) => format!("{p:?}/{}", spec.family),
        None => format!("phase/{}", spec.family),
    };
    let mut report = VerificationReport::empty(target, *tolerances);
    if spec.family.phase_family().is_none() {
        return report.fail("no printed phase; quadrature is the only phase".into());
    }
    match phase_vs_quadrature(spec, params, 50) {
        Ok(cmp) => {
            report.phase_error = Some(cmp.sup_error);
            report.phase_rate_error = Some(cmp.rate_error);
            let mut notes = Vec::new();
            let mut bad = exceeds(cmp.sup_error, tolerances.phase, "phase error", &mut notes);
            bad |= exceeds(cmp.rate_error, tolerances.phase_rate, "phase rate error", &mut notes);
            report.notes.extend(notes);
            report.verdict = if bad { Verdict::AsPrintedDiscrepancy } else { Verdict::Pass };
            report
        }
        Err(e) => report.fail(format!("phase not evaluable: {e}")),
    }
}

/// Phase constants used by the catalog phase sweep.
pub const SWEEP_PHASE: PhaseParams = PhaseParams { e: 1.0, c: 0.5, am: 1.0, constant: 0.0 };

/// Verifies the default instance of each family in `families`, in parallel.
pub fn verify_catalog(families: &[SolutionFamily], tolerances: &Tolerances) -> Vec<VerificationReport> {
    families
        .par_iter()
        .map(|&f| match catalog_instance(f) {
            Ok(spec) => verify_profile(&spec, tolerances),
            Err(e) => VerificationReport::empty(f.tag().to_string(), *tolerances)
                .fail(format!("could not instantiate: {e}")),
        })
        .collect()
}

/// Verifies the printed phase of every Type II family that has one.
pub fn verify_phase_catalog(tolerances: &Tolerances) -> Vec<VerificationReport> {
    let families: Vec<SolutionFamily> =
        SolutionFamily::ALL.iter().copied().filter(|f| f.phase_family().is_some()).collect();
    families
        .par_iter()
        .map(|&f| match catalog_instance(f) {
            Ok(spec) => verify_phase(&spec, &SWEEP_PHASE, tolerances),
            Err(e) => VerificationReport::empty(f.tag().to_string(), *tolerances)
                .fail(format!("could not instantiate: {e}")),
        })
        .collect()
}

/// The Pb1 formula with `cn` in place of `sn`, for negative controls.
pub fn pb1_with_cn(spec: &ProfileSpec) -> FnProfile<impl Fn(f64) -> Result<f64> + Sync> {
    let WaveSystem::TypeI(s) = spec.system else { panic!("pb1_with_cn needs a Type I spec") };
    let r = spec.roots.clone();
    let (p1, p2, p3, p4) = (r[0], r[1], r[2], r[3]);
    let k2 = (p3 - p2) * (p4 - p1) / ((p4 - p2) * (p3 - p1));
    let sc = (-s.cubic * (p4 - p2) * (p3 - p1) / 4.0).sqrt();
    FnProfile::new(spec.clone(), move |xi| {
        let c2 = jacobi(sc * xi, k2)?.cn.powi(2);
        Ok(p1 + (p2 - p1) * (p3 - p1) / ((p3 - p1) - (p3 - p2) * c2))
    })
}

/// Checks `spec`'s own formula against the system with `alpha2` negated.
pub fn with_flipped_alpha2(spec: &ProfileSpec) -> FnProfile<impl Fn(f64) -> Result<f64> + Sync> {
    let mut mutated = spec.clone();
    if let WaveSystem::TypeII(al) = &mut mutated.system {
        al.alpha2 = -al.alpha2;
    }
    let original = spec.clone();
    FnProfile::new(mutated, move |xi| original.value(xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kink_passes_and_cn_mutation_fails() {
        let spec = catalog_instance(SolutionFamily::Pb2).unwrap();
        let r = verify_profile(&spec, &Tolerances::default());
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let pb1 = catalog_instance(SolutionFamily::Pb1).unwrap();
        assert!(ode_residual(&pb1_with_cn(&pb1)).unwrap() > 1e-2);
    }

    #[test]
    fn constant_equilibrium_profile_has_zero_residual() {
        let spec = catalog_instance(SolutionFamily::Pb2).unwrap();
        let flat = FnProfile::new(spec, |_| Ok(2.0));
        assert_eq!(ode_residual(&flat).unwrap(), 0.0);
    }
}
