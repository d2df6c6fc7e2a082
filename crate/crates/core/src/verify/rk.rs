//! Dormand-Prince 5(4) with dense output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 200_000;

pub type State = [f64; 2];

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One accepted step with its interpolation coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub t0: f64,
    pub h: f64,
    cont: [State; 5],
}

impl Step {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let f = |i: usize| c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        [f(0), f(1)]
    }
}

/// Accepted steps of one integration run, in integration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t0: f64,
    pub y0: State,
    pub steps: Vec<Step>,
    /// Why integration stopped before the requested end, if it did.
    pub stopped: Option<String>,
}

impl Trajectory {
    pub fn t_end(&self) -> f64 {
        self.steps.last().map_or(self.t0, Step::t1)
    }

    pub fn y_end(&self) -> State {
        match self.steps.last() {
            Some(s) => s.eval(s.t1()),
            None => self.y0,
        }
    }

    fn covers(&self, t: f64) -> bool {
        let (a, b) = (self.t0.min(self.t_end()), self.t0.max(self.t_end()));
        t >= a && t <= b
    }

    /// Dense-output state at `t`, which must lie inside the integrated span.
    pub fn eval(&self, t: f64) -> Result<State> {
        if !self.covers(t) {
            return Err(Error::Domain(format!("t = {t} outside the integrated span [{}, {}]", self.t0, self.t_end())));
        }
        if t == self.t0 {
            return Ok(self.y0);
        }
        let forward = self.steps.first().is_none_or(|s| s.h > 0.0);
        let idx = self.steps.partition_point(|s| if forward { s.t1() < t } else { s.t1() > t });
        let step = &self.steps[idx.min(self.steps.len() - 1)];
        Ok(step.eval(t))
    }

    /// Times where component `i` crosses `level` moving upward (`dir > 0`) or downward.
    pub fn crossings(&self, i: usize, level: f64, dir: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for s in &self.steps {
            let (a, b) = (s.eval(s.t0)[i] - level, s.eval(s.t1())[i] - level);
            let time_sign = s.h.signum();
            let rising = (b - a) * time_sign * dir > 0.0;
            if a * b > 0.0 || a == 0.0 || !rising {
                continue;
            }
            let (mut lo, mut hi) = (s.t0, s.t1());
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (s.eval(mid)[i] - level) * a > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }
}

fn error_norm(y0: &State, y1: &State, err: &State, tol: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..2 {
        let sc = tol + tol * y0[i].abs().max(y1[i].abs());
        sum += (err[i] / sc).powi(2);
    }
    (sum / 2.0).sqrt()
}

/// Integrates `y' = field(t, y)` from `t0` to `t1` (either direction) with
/// mixed absolute/relative tolerance `tol`.
///
/// Failures of the field and step-size underflow end the run early; the
/// partial trajectory is returned with `stopped` set.
pub fn rk_integrate<F>(field: F, y0: State, t0: f64, t1: f64, tol: f64) -> Trajectory
where
    F: Fn(f64, &State) -> Result<State>,
{
    let mut traj = Trajectory { t0, y0, steps: Vec::new(), stopped: None };
    if t1 == t0 {
        return traj;
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = match field(t, &y) {
        Ok(k) => k,
        Err(e) => {
            traj.stopped = Some(e.to_string());
            return traj;
        }
    };
    let scale = y.iter().fold(tol, |m, v| m.max(tol * v.abs()));
    let slope = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = dir * (0.01 * (scale / slope.max(1e-300)).powf(0.2)).min(0.01 * span).max(1e-6 * span);
    for _ in 0..MAX_STEPS {
        if (t1 - t) * dir <= 0.0 {
            return traj;
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            traj.stopped = Some(format!("step size underflow at t = {t}"));
            return traj;
        }
        let stages = (|| -> Result<[State; 7]> {
            let k2 = field(t + C2 * h, &axpy(&y, &[(A21, &k1)], h))?;
            let k3 = field(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h))?;
            let k4 = field(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h))?;
            let k5 = field(t + C5 * h, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h))?;
            let k6 = field(t + h, &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h))?;
            let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
            let k7 = field(t + h, &y_new)?;
            Ok([k1, k2, k3, k4, k5, k6, k7])
        })();
        let [_, _, k3, k4, k5, k6, k7] = match stages {
            Ok(s) => s,
            Err(_) => {
                // Retreat from whatever the field could not evaluate.
                h *= 0.25;
                continue;
            }
        };
        let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
        let err_vec = {
            let z = [0.0, 0.0];
            axpy(&z, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)], h)
        };
        let err = error_norm(&y, &y_new, &err_vec, tol);
        if !err.is_finite() {
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            let mut cont = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            traj.steps.push(Step { t0: t, h, cont });
            t += h;
            y = y_new;
            k1 = k7;
        }
        let fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
        h *= fac;
    }
    traj.stopped = Some(format!("step limit reached at t = {t}"));
    traj
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_dense_output() {
        let traj = rk_integrate(|_, y| Ok([y[1], -y[0]]), [1.0, 0.0], 0.0, 10.0, 1e-12);
        assert!(traj.stopped.is_none());
        for i in 0..=100 {
            let t = 0.1 * i as f64;
            let y = traj.eval(t).unwrap();
            assert!((y[0] - t.cos()).abs() < 1e-9, "{t}");
        }
        let ups = traj.crossings(0, 0.0, 1.0);
        assert!((ups[0] - 1.5 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let traj = rk_integrate(|_, y| Ok([y[0], 0.0]), [1.0, 0.0], 0.0, -2.0, 1e-12);
        assert!((traj.y_end()[0] - (-2.0f64).exp()).abs() < 1e-11);
        assert!((traj.eval(-1.0).unwrap()[0] - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn blowup_reports_partial_trajectory() {
        // y' = y^2 from y(0) = 1 blows up at t = 1.
        let traj = rk_integrate(
            |_, y| {
                if y[0].abs() > 1e12 {
                    Err(Error::Singular("overflow".into()))
                } else {
                    Ok([y[0] * y[0], 0.0])
                }
            },
            [1.0, 0.0],
            0.0,
            2.0,
            1e-10,
        );
        assert!(traj.stopped.is_some());
        assert!(traj.t_end() < 1.0 && traj.t_end() > 0.99);
    }
}
