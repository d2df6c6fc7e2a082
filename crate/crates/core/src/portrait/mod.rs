//! Phase portraits: contoured level sets, traced separatrices, SVG and CSV output.

mod contour;
mod render;

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bifurcation::{
    critical_energies, equilibria_type1, equilibria_type2, orbit_inventory, Equilibrium, EquilibriumKind, OrbitClass,
};
use crate::error::{Error, Result};
use crate::verify::rk_integrate;
use crate::wavesystems::WaveSystem;

pub use render::render_svg;

use contour::{contour, Grid};

/// Grid resolution used when none is given.
pub const DEFAULT_GRID: usize = 512;
/// Half-width of the band around `phi = 0` left out of Type II portraits.
pub const SINGULAR_BAND: f64 = 0.02;
const SEPARATRIX_OFFSET: f64 = 1e-6;
const TRACE_TOL: f64 = 1e-11;

/// Axis-aligned rectangle in the `(u, y)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub u_min: f64,
    pub u_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn new(u_min: f64, u_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [u_min, u_max, y_min, y_max].iter().all(|v| v.is_finite()) && u_max > u_min && y_max > y_min;
        if !ok {
            return Err(Error::Domain(format!("empty bounds [{u_min}, {u_max}] x [{y_min}, {y_max}]")));
        }
        Ok(Self { u_min, u_max, y_min, y_max })
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.u_min && p[0] <= self.u_max && p[1] >= self.y_min && p[1] <= self.y_max
    }

    fn grown(&self, frac: f64) -> Self {
        let (du, dy) = (frac * (self.u_max - self.u_min), frac * (self.y_max - self.y_min));
        Self { u_min: self.u_min - du, u_max: self.u_max + du, y_min: self.y_min - dy, y_max: self.y_max + dy }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Levels {
    Auto,
    Explicit(Vec<f64>),
}

/// How a curve was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    Contour,
    Traced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitCurve {
    pub id: usize,
    pub class: OrbitClass,
    pub source: CurveSource,
    /// Lies on a saddle or cusp energy level.
    pub separatrix: bool,
    pub h: f64,
    pub closed: bool,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub system: WaveSystem,
    pub bounds: Bounds,
    pub levels: Vec<f64>,
    pub curves: Vec<PortraitCurve>,
    pub equilibria: Vec<Equilibrium>,
    pub warnings: Vec<String>,
}

/// Equilibrium and connection counts read off a portrait.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub saddles: usize,
    pub centers: usize,
    pub degenerate_saddles: usize,
    pub degenerate_centers: usize,
    pub cusps: usize,
    pub homoclinic_loops: usize,
    pub heteroclinic_orbits: usize,
    /// Distinct sets of equilibria enclosed by closed level curves.
    pub periodic_families: usize,
    pub unbounded_curves: usize,
}

pub fn equilibria(system: &WaveSystem) -> Result<Vec<Equilibrium>> {
    match system {
        WaveSystem::TypeI(s) => Ok(equilibria_type1(s)),
        WaveSystem::TypeII(al) => equilibria_type2(al),
    }
}

fn is_separatrix_kind(kind: EquilibriumKind) -> bool {
    matches!(kind, EquilibriumKind::Saddle | EquilibriumKind::DegenerateSaddle | EquilibriumKind::Cusp)
}

fn energy_at(system: &WaveSystem, u: f64, y: f64) -> f64 {
    if system.is_type_ii() && u.abs() < SINGULAR_BAND {
        return f64::NAN;
    }
    system.energy(u, y).unwrap_or(f64::NAN)
}

fn gap(critical: &[f64]) -> f64 {
    match (critical.first(), critical.last()) {
        (Some(lo), Some(hi)) => (0.5 * (hi - lo)).max(1.0),
        _ => 1.0,
    }
}

/// Separatrix energies, midpoints between consecutive critical energies and one
/// level beyond each end of the critical range.
pub fn auto_levels(system: &WaveSystem) -> Result<Vec<f64>> {
    let critical = critical_energies(system)?;
    let eqs = equilibria(system)?;
    let mut levels: Vec<f64> = eqs.iter().filter(|e| is_separatrix_kind(e.kind)).map(|e| e.energy).collect();
    for w in critical.windows(2) {
        levels.push(0.5 * (w[0] + w[1]));
    }
    let d = gap(&critical);
    match (critical.first(), critical.last()) {
        (Some(&lo), Some(&hi)) => levels.extend([lo - d, hi + d]),
        _ => {
            let reference = energy_at(system, 1.0, 0.0);
            levels.extend([reference - d, reference, reference + d]);
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    Ok(levels)
}

/// Bounds that contain the equilibria and the bounded orbits at `levels`.
pub fn default_bounds(system: &WaveSystem, levels: &[f64]) -> Result<Bounds> {
    let mut u_max = 1.0f64;
    for e in equilibria(system)? {
        u_max = u_max.max(e.location.abs());
    }
    for &h in levels {
        for orbit in orbit_inventory(system, h)? {
            for end in [orbit.interval.0, orbit.interval.1] {
                if end.is_finite() {
                    u_max = u_max.max(end.abs());
                }
            }
        }
    }
    u_max *= 1.25;
    let h_max = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut y_max = 1.0f64;
    for i in 0..=400 {
        let u = -u_max + 2.0 * u_max * i as f64 / 400.0;
        let v = energy_at(system, u, 0.0);
        if v.is_finite() && h_max > v {
            y_max = y_max.max((2.0 * (h_max - v)).sqrt());
        }
    }
    y_max = (1.1 * y_max).min(4.0 * u_max.max(y_max.sqrt()));
    Bounds::new(-u_max, u_max, -y_max, y_max)
}

fn project(system: &WaveSystem, h: f64, mut p: [f64; 2]) -> [f64; 2] {
    for _ in 0..4 {
        let Ok(e) = system.energy(p[0], p[1]) else { return p };
        let Ok(f) = system.force(p[0]) else { return p };
        // dH/du = -force, dH/dy = y.
        let (gu, gy) = (-f, p[1]);
        let g2 = gu * gu + gy * gy;
        let r = e - h;
        if r.abs() <= 1e-14 * (1.0 + h.abs()) || g2 < 1e-24 {
            return p;
        }
        p = [p[0] - r * gu / g2, p[1] - r * gy / g2];
    }
    p
}

fn classify_component(system: &WaveSystem, h: f64, points: &[[f64; 2]], closed: bool) -> Result<OrbitClass> {
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    let mid = 0.5 * (lo + hi);
    let found = orbit_inventory(system, h)?
        .into_iter()
        .find(|o| o.interval.0 <= mid && mid <= o.interval.1)
        .map(|o| o.class);
    Ok(found.unwrap_or(if closed { OrbitClass::Periodic } else { OrbitClass::Unbounded }))
}

fn is_critical_level(eqs: &[Equilibrium], h: f64) -> bool {
    eqs.iter().any(|e| is_separatrix_kind(e.kind) && (e.energy - h).abs() <= 1e-9 * (1.0 + h.abs()))
}

/// Builds the portrait of `system` on `bounds` (or default bounds) with a
/// `grid x grid` contouring mesh.
pub fn build_portrait(system: &WaveSystem, bounds: Option<Bounds>, levels: &Levels, grid: usize) -> Result<PhasePortrait> {
    if grid < 8 {
        return Err(Error::Domain(format!("grid of {grid} nodes per axis is too coarse")));
    }
    let levels = match levels {
        Levels::Auto => auto_levels(system)?,
        Levels::Explicit(v) => v.clone(),
    };
    if let Some(h) = levels.iter().find(|h| !h.is_finite()) {
        return Err(Error::Domain(format!("level {h} is not finite")));
    }
    let bounds = match bounds {
        Some(b) => Bounds::new(b.u_min, b.u_max, b.y_min, b.y_max)?,
        None => default_bounds(system, &levels)?,
    };
    let eqs = equilibria(system)?;
    let sys = *system;
    let mesh = Grid::sample(
        move |u, y| energy_at(&sys, u, y),
        (bounds.u_min, bounds.u_max),
        (bounds.y_min, bounds.y_max),
        grid,
        grid,
    );
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for &h in &levels {
        let found = contour(&mesh, h);
        if found.is_empty() {
            warnings.push(format!("no real level set at h = {h} inside the bounds"));
            continue;
        }
        let separatrix = is_critical_level(&eqs, h);
        for line in found {
            let points: Vec<[f64; 2]> = line.points.iter().map(|&p| project(system, h, p)).collect();
            let class = classify_component(system, h, &points, line.closed)?;
            curves.push(PortraitCurve {
                id: curves.len(),
                class,
                source: CurveSource::Contour,
                separatrix,
                h,
                closed: line.closed,
                points,
            });
        }
    }
    for traced in trace_separatrices(system, &eqs, &bounds) {
        curves.push(PortraitCurve { id: curves.len(), ..traced });
    }
    Ok(PhasePortrait { system: *system, bounds, levels, curves, equilibria: eqs, warnings })
}

/// Follows both unstable branches of every hyperbolic saddle until they leave
/// the bounds or reach a saddle.
fn trace_separatrices(system: &WaveSystem, eqs: &[Equilibrium], bounds: &Bounds) -> Vec<PortraitCurve> {
    let saddles: Vec<&Equilibrium> = eqs.iter().filter(|e| e.kind == EquilibriumKind::Saddle).collect();
    let scale = (bounds.u_max - bounds.u_min).max(bounds.y_max - bounds.y_min);
    let outer = bounds.grown(0.05);
    let mut out = Vec::new();
    for s in &saddles {
        let d = 1e-6 * s.location.abs().max(1.0);
        let slope = match (system.force(s.location + d), system.force(s.location - d)) {
            (Ok(a), Ok(b)) => (a - b) / (2.0 * d),
            _ => continue,
        };
        if !(slope > 0.0) {
            continue;
        }
        let lambda = slope.sqrt();
        let norm = (1.0 + lambda * lambda).sqrt();
        let settle = (1.0 / SEPARATRIX_OFFSET).ln() / lambda;
        let near = 1e-3 * scale.min(1.0);
        for sign in [1.0, -1.0] {
            let start = [
                s.location + sign * SEPARATRIX_OFFSET / norm,
                sign * SEPARATRIX_OFFSET * lambda / norm,
            ];
            let sys = *system;
            let field = |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
                if !outer.contains(*y) {
                    return Err(Error::Domain("left the portrait".into()));
                }
                if t > settle {
                    for other in &saddles {
                        if (y[0] - other.location).hypot(y[1]) < near {
                            return Err(Error::Domain("reached a saddle".into()));
                        }
                    }
                }
                Ok([y[1], sys.force(y[0])?])
            };
            let traj = rk_integrate(field, start, 0.0, 200.0 / lambda, TRACE_TOL);
            let end = traj.y_end();
            let target = saddles.iter().find(|o| (end[0] - o.location).hypot(end[1]) < 2.0 * near);
            let class = match target {
                Some(o) if (o.location - s.location).abs() < 1e-9 * s.location.abs().max(1.0) => OrbitClass::Homoclinic,
                Some(_) => OrbitClass::Heteroclinic,
                None => OrbitClass::Unbounded,
            };
            let mut points = vec![[s.location, 0.0]];
            for step in &traj.steps {
                for k in 0..4 {
                    let p = step.eval(step.t0 + step.h * k as f64 / 4.0);
                    if bounds.contains(p) {
                        points.push(p);
                    }
                }
            }
            if bounds.contains(end) {
                points.push(end);
            }
            if let Some(o) = target {
                points.push([o.location, 0.0]);
            }
            out.push(PortraitCurve {
                id: 0,
                class,
                source: CurveSource::Traced,
                separatrix: true,
                h: s.energy,
                closed: class == OrbitClass::Homoclinic,
                points,
            });
        }
    }
    out
}

fn encloses(poly: &[[f64; 2]], q: [f64; 2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        if (a[1] > q[1]) != (b[1] > q[1]) && q[0] < (b[0] - a[0]) * (q[1] - a[1]) / (b[1] - a[1]) + a[0] {
            inside = !inside;
        }
    }
    inside
}

impl PhasePortrait {
    pub fn topology(&self) -> Topology {
        let mut t = Topology::default();
        for e in &self.equilibria {
            match e.kind {
                EquilibriumKind::Saddle => t.saddles += 1,
                EquilibriumKind::Center => t.centers += 1,
                EquilibriumKind::DegenerateSaddle => t.degenerate_saddles += 1,
                EquilibriumKind::DegenerateCenter => t.degenerate_centers += 1,
                EquilibriumKind::Cusp => t.cusps += 1,
            }
        }
        let mut families = BTreeSet::new();
        for c in &self.curves {
            match (c.source, c.class) {
                (CurveSource::Traced, OrbitClass::Homoclinic) => t.homoclinic_loops += 1,
                (CurveSource::Traced, OrbitClass::Heteroclinic) => t.heteroclinic_orbits += 1,
                (CurveSource::Contour, OrbitClass::Unbounded) => t.unbounded_curves += 1,
                (CurveSource::Contour, OrbitClass::Periodic) if c.closed && !c.separatrix => {
                    let enclosed: Vec<usize> = self
                        .equilibria
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| encloses(&c.points, [e.location, 0.0]))
                        .map(|(i, _)| i)
                        .collect();
                    families.insert(enclosed);
                }
                _ => {}
            }
        }
        t.periodic_families = families.len();
        t
    }

    /// Total number of polyline points, the CSV row count.
    pub fn point_count(&self) -> usize {
        self.curves.iter().map(|c| c.points.len()).sum()
    }

    /// Largest `|H - h| / (1 + |h|)` over the contoured points.
    pub fn max_level_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for c in self.curves.iter().filter(|c| c.source == CurveSource::Contour) {
            for p in &c.points {
                if let Ok(e) = self.system.energy(p[0], p[1]) {
                    worst = worst.max((e - c.h).abs() / (1.0 + c.h.abs()));
                }
            }
        }
        worst
    }

    /// Writes `curve_id,class,h,u,y` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Domain(format!("CSV output failed: {e}"));
        w.write_record(["curve_id", "class", "h", "u", "y"]).map_err(io)?;
        for c in &self.curves {
            let class = serde_json::to_value(c.class).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
            for p in &c.points {
                w.write_record([c.id.to_string(), class.clone(), c.h.to_string(), p[0].to_string(), p[1].to_string()])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Domain(format!("CSV output failed: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavesystems::{AlphaCoefficients, SystemICoefficients};

    fn type1(linear: f64, cubic: f64) -> WaveSystem {
        WaveSystem::TypeI(SystemICoefficients::new(linear, cubic))
    }

    #[test]
    fn heteroclinic_pair_between_two_saddles() {
        let pp = build_portrait(&type1(-4.0, -0.5), None, &Levels::Auto, 256).unwrap();
        assert!(pp.levels.contains(&4.0));
        let t = pp.topology();
        assert_eq!((t.saddles, t.centers, t.heteroclinic_orbits, t.homoclinic_loops), (2, 1, 2, 0));
        assert_eq!(t.periodic_families, 1);
        assert!(pp.max_level_error() <= 1e-6);
    }

    #[test]
    fn negative_alpha1_has_two_periodic_families() {
        let al = AlphaCoefficients::new(-1.0, 0.0, 0.1).unwrap();
        let pp = build_portrait(&WaveSystem::TypeII(al), None, &Levels::Auto, 256).unwrap();
        let t = pp.topology();
        assert_eq!((t.saddles, t.centers, t.periodic_families, t.unbounded_curves), (0, 2, 2, 0));
    }

    #[test]
    fn empty_level_warns() {
        let pp = build_portrait(&type1(-4.0, 2.0), None, &Levels::Explicit(vec![-1.0]), 64).unwrap();
        assert!(pp.curves.iter().all(|c| c.source == CurveSource::Traced));
        assert_eq!(pp.warnings.len(), 1);
    }

    #[test]
    fn empty_bounds_rejected() {
        assert!(Bounds::new(1.0, 1.0, -1.0, 1.0).is_err());
    }
}
