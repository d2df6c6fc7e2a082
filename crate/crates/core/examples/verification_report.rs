//! Prints every catalog verdict with its diagnostics.

use gkmn::solutions::SolutionFamily;
use gkmn::verify::{summarize, verify_catalog, verify_phase_catalog, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let reports = verify_catalog(&SolutionFamily::ALL, &tol);
    let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1e}"));
    for r in &reports {
        println!(
            "{:8} {:?} ode={} spread={} oracle={} period={} {:?}",
            r.target,
            r.verdict,
            show(r.ode_residual_max),
            show(r.energy_spread),
            show(r.oracle_sup_error),
            show(r.period_error),
            r.notes
        );
    }
    println!("{:?}", summarize(&reports));
    for r in verify_phase_catalog(&tol) {
        println!(
            "{:12} {:?} error={} rate={} {:?}",
            r.target,
            r.verdict,
            show(r.phase_error),
            show(r.phase_rate_error),
            r.notes
        );
    }
}
