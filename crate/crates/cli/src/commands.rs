use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use gkmn::bifurcation::{classify_type1, classify_type2, critical_energies, orbit_inventory, OrbitClass};
use gkmn::elliptic::{complete_e, complete_k, incomplete_e, incomplete_f, incomplete_pi, jacobi};
use gkmn::portrait::{build_portrait, equilibria, render_svg, Bounds, Levels, DEFAULT_GRID};
use gkmn::solutions::{
    amplitude_of, default_energy, default_system, roots_at, type1_wave, type2_wave, PhaseFamily, PhaseSource,
    ProfileSpec, SolutionFamily, TypeIIWave, TypeIWave, Wave,
};
use gkmn::solutions::validate_profile;
use gkmn::verify::{
    sample_window, summarize, verify_catalog, verify_phase, verify_phase_catalog, verify_profile,
    AmplitudeProfile, Verdict, VerificationReport, SWEEP_PHASE,
};
use gkmn::WaveSystem;

use crate::config::{Mode, Physical, RunConfig};
use crate::exit::{Exit, ExitResult};
use crate::{ClassifyArgs, EllipticArgs, EllipticFn, PhaseArg, PortraitArgs, SolveArgs, VerifyArgs};

const DEFAULT_SAMPLES: usize = 201;

fn create(path: &Path) -> ExitResult<File> {
    File::create(path).map_err(|e| Exit::io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> ExitResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Exit::io(e.to_string()))?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Exit::io(format!("{}: {e}", p.display()))),
        None => writeln!(io::stdout(), "{text}").map_err(|e| Exit::io(e.to_string())),
    }
}

pub fn classify(args: ClassifyArgs) -> ExitResult<()> {
    let cfg = RunConfig::from_args(&args.system)?;
    let system = cfg.system()?;
    let regime = match &system {
        WaveSystem::TypeI(s) => serde_json::to_value(classify_type1(s)?),
        WaveSystem::TypeII(al) => serde_json::to_value(classify_type2(al)?),
    }
    .map_err(|e| Exit::io(e.to_string()))?;
    let admissible: Vec<&str> = SolutionFamily::admissible_for(&system).iter().map(|f| f.tag()).collect();
    let report = json!({
        "system": system,
        "regime": regime,
        "equilibria": equilibria(&system)?,
        "critical_energies": critical_energies(&system)?,
        "admissible_families": admissible,
    });
    write_json(&report, args.output.as_deref().or(cfg.output.as_deref()))
}

/// A family argument: an amplitude family or an assembled Type II wave `q_k`.
enum Target {
    Amplitude(SolutionFamily),
    Assembled(SolutionFamily),
}

fn parse_target(tag: &str) -> ExitResult<Target> {
    const PHASES: [PhaseFamily; 8] = [
        PhaseFamily::S1,
        PhaseFamily::S2,
        PhaseFamily::S3,
        PhaseFamily::S4,
        PhaseFamily::S5,
        PhaseFamily::S6,
        PhaseFamily::S7,
        PhaseFamily::S8,
    ];
    let norm = tag.trim().to_ascii_lowercase();
    if let Some(k) = norm.strip_prefix("q_").or_else(|| norm.strip_prefix('q')) {
        let k: usize = k.parse().map_err(|_| Exit::config(format!("unknown wave '{tag}'; use q_1..q_8")))?;
        return match k {
            1..=8 => Ok(Target::Assembled(amplitude_of(PHASES[k - 1]))),
            _ => Err(Exit::config(format!("unknown wave '{tag}'; use q_1..q_8"))),
        };
    }
    tag.parse().map(Target::Amplitude).map_err(|e: gkmn::Error| Exit::config(e.to_string()))
}

/// Validates `family` on the configured system at the configured energy.
fn instance(cfg: &RunConfig, family: SolutionFamily) -> ExitResult<ProfileSpec> {
    let system = cfg.system_for(family)?;
    if !family.admissible(&system) {
        let list: Vec<&str> = SolutionFamily::admissible_for(&system).iter().map(|f| f.tag()).collect();
        return Err(Exit::config(format!("{family} is not admissible here; admissible: {}", list.join(", "))));
    }
    let h = match cfg.energy {
        Some(h) => h,
        None if near(&system, &default_system(family)) => default_energy(family)?,
        None => return Err(Exit::config(format!("{family} on a custom system needs --energy"))),
    };
    let roots = roots_at(family, &system, h)?;
    Ok(validate_profile(family, &roots, &system, Some(h))?)
}

/// Coefficient-wise agreement to a relative 1e-12, so derived systems match the catalog.
fn near(a: &WaveSystem, b: &WaveSystem) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    match (a, b) {
        (WaveSystem::TypeI(s), WaveSystem::TypeI(t)) => close(s.linear, t.linear) && close(s.cubic, t.cubic),
        (WaveSystem::TypeII(s), WaveSystem::TypeII(t)) => {
            close(s.alpha1, t.alpha1) && close(s.alpha2, t.alpha2) && close(s.alpha3, t.alpha3)
        }
        _ => false,
    }
}

fn phase_source(arg: Option<PhaseArg>, cfg: &RunConfig) -> PhaseSource {
    match arg {
        Some(PhaseArg::Printed) => PhaseSource::Printed,
        Some(PhaseArg::Quadrature) => PhaseSource::Quadrature,
        None => cfg.phase.unwrap_or(PhaseSource::Quadrature),
    }
}

enum Assembled {
    TypeI(TypeIWave),
    TypeII(TypeIIWave),
}

fn assemble(cfg: &RunConfig, spec: &ProfileSpec, source: PhaseSource) -> ExitResult<Assembled> {
    let physical = if cfg.wave.is_some() { Some(cfg.physical()?) } else { None };
    Ok(match (spec.system.is_type_ii(), physical) {
        (false, Some(Physical::TypeI(eq, w))) => Assembled::TypeI(TypeIWave::new(spec.clone(), eq, w)?),
        (true, Some(Physical::TypeII(eq, w))) => Assembled::TypeII(TypeIIWave::new(spec.clone(), eq, w, source)?),
        (false, None) => Assembled::TypeI(type1_wave(spec.clone())?),
        (true, None) => Assembled::TypeII(type2_wave(spec.clone(), source)?),
        _ => return Err(Exit::config("physical parameters do not match the family's system")),
    })
}

fn orbit_class(system: &WaveSystem, h: f64, amplitude: f64) -> Option<(OrbitClass, (f64, f64))> {
    let orbits = orbit_inventory(system, h).ok()?;
    let slack = 1e-9 * amplitude.abs().max(1.0);
    orbits
        .iter()
        .find(|o| amplitude >= o.interval.0 - slack && amplitude <= o.interval.1 + slack)
        .map(|o| (o.class, o.interval))
}

pub fn solve(args: SolveArgs) -> ExitResult<()> {
    let mut cfg = RunConfig::from_args(&args.system)?;
    if args.family.is_some() {
        cfg.family.clone_from(&args.family);
    }
    if args.energy.is_some() {
        cfg.energy = args.energy;
    }
    let tag = cfg.family.clone().ok_or_else(|| Exit::config("solve needs --family"))?;
    let target = parse_target(&tag)?;
    let (family, want_wave) = match target {
        Target::Amplitude(f) => (f, args.wave),
        Target::Assembled(f) => (f, true),
    };
    let spec = instance(&cfg, family)?;
    let source = phase_source(args.phase, &cfg);
    let wave = if want_wave { Some(assemble(&cfg, &spec, source)?) } else { None };

    let window = sample_window(&spec);
    let lo = args.xi_min.or(cfg.xi_min).unwrap_or(window.0);
    let hi = args.xi_max.or(cfg.xi_max).unwrap_or(window.1);
    if !(lo < hi) {
        return Err(Exit::config(format!("empty sample interval [{lo}, {hi}]")));
    }
    let n = args.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    if n < 2 {
        return Err(Exit::config("need at least 2 samples"));
    }
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();

    let mut header = vec!["xi", "amplitude"];
    match &wave {
        Some(Assembled::TypeII(_)) => header.extend(["phase", "re", "im"]),
        Some(Assembled::TypeI(_)) => header.extend(["re", "im"]),
        None => {}
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut skipped = 0usize;
    for &xi in &xs {
        let row = (|| -> gkmn::Result<Vec<f64>> {
            let mut row = vec![xi, AmplitudeProfile::value(&spec, xi)?];
            match &wave {
                Some(Assembled::TypeII(w)) => {
                    let q = w.q(xi, 0.0, 0.0)?;
                    row.extend([w.phase(xi)?, q.re, q.im]);
                }
                Some(Assembled::TypeI(w)) => {
                    let q = w.q(xi, 0.0, 0.0)?;
                    row.extend([q.re, q.im]);
                }
                None => {}
            }
            Ok(row)
        })();
        match row {
            Ok(r) if r.iter().all(|v| v.is_finite()) => rows.push(r),
            _ => skipped += 1,
        }
    }

    let csv_path = args.output.clone().or(cfg.output.clone());
    let sink: Box<dyn Write> = match &csv_path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Exit::io(e.to_string());
    writer.write_record(&header).map_err(csv_err)?;
    for r in &rows {
        writer.write_record(r.iter().map(|v| format!("{v:.17e}"))).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Exit::io(e.to_string()))?;

    let probe = rows.get(rows.len() / 2).map(|r| r[1]);
    let orbit = probe.and_then(|a| orbit_class(&spec.system, spec.energy, a));
    let meta = json!({
        "family": family.tag(),
        "target": tag,
        "system": spec.system,
        "energy": spec.energy,
        "roots": spec.roots,
        "domain": [spec.domain.0, spec.domain.1],
        "period": spec.period,
        "interior_pole": spec.interior_pole,
        "orbit_class": orbit.map(|o| o.0),
        "orbit_interval": orbit.map(|o| [o.1 .0, o.1 .1]),
        "xi_range": [lo, hi],
        "samples": rows.len(),
        "skipped": skipped,
        "columns": header,
        "wave": wave_meta(&wave),
    });
    let meta_path = args.meta.clone().or_else(|| csv_path.as_ref().map(|p| p.with_extension("json")));
    match meta_path {
        Some(p) => write_json(&meta, Some(&p)),
        None => {
            eprintln!("{}", serde_json::to_string_pretty(&meta).map_err(|e| Exit::io(e.to_string()))?);
            Ok(())
        }
    }
}

fn wave_meta(wave: &Option<Assembled>) -> Value {
    match wave {
        None => Value::Null,
        Some(Assembled::TypeI(w)) => json!({ "equation": w.eq, "params": w.params }),
        Some(Assembled::TypeII(w)) => json!({ "equation": w.eq, "params": w.params, "phase_source": w.source }),
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    reports: Vec<VerificationReport>,
    phase_reports: Vec<VerificationReport>,
    summary: gkmn::verify::Summary,
}

pub fn verify(args: VerifyArgs) -> ExitResult<()> {
    let mut cfg = RunConfig::from_args(&args.system)?;
    if args.family.is_some() {
        cfg.family.clone_from(&args.family);
    }
    if args.energy.is_some() {
        cfg.energy = args.energy;
    }
    let tol = cfg.tolerances();
    let (reports, phase_reports) = if args.all {
        let families: Vec<SolutionFamily> = SolutionFamily::ALL
            .into_iter()
            .filter(|f| match cfg.mode {
                Some(Mode::Type1) => !f.is_type_ii(),
                Some(Mode::Type2) => f.is_type_ii(),
                None => true,
            })
            .collect();
        let phases =
            if cfg.mode == Some(Mode::Type1) { Vec::new() } else { verify_phase_catalog(&tol) };
        (verify_catalog(&families, &tol), phases)
    } else {
        let tag = cfg.family.clone().ok_or_else(|| Exit::config("verify needs --family or --all"))?;
        let family = match parse_target(&tag)? {
            Target::Amplitude(f) | Target::Assembled(f) => f,
        };
        let spec = instance(&cfg, family)?;
        let mut phases = Vec::new();
        if family.phase_family().is_some() {
            let params = match assemble(&cfg, &spec, PhaseSource::Quadrature) {
                Ok(Assembled::TypeII(w)) if cfg.wave.is_some() => w.phase_params(),
                _ => SWEEP_PHASE,
            };
            phases.push(verify_phase(&spec, &params, &tol));
        }
        (vec![verify_profile(&spec, &tol)], phases)
    };
    let all: Vec<VerificationReport> = reports.iter().chain(&phase_reports).cloned().collect();
    let out = VerifyOutput { summary: summarize(&all), reports, phase_reports };
    for r in &all {
        eprintln!("{:<14} {:?}", r.target, r.verdict);
    }
    write_json(&out, args.output.as_deref().or(cfg.output.as_deref()))?;
    let failed: Vec<&str> = all.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.target.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Exit::verification(format!("verification failed: {}", failed.join(", "))))
    }
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn portrait(args: PortraitArgs) -> ExitResult<()> {
    let cfg = RunConfig::from_args(&args.system)?;
    let system = cfg.system()?;
    let grid = args.grid.or(cfg.grid).unwrap_or(DEFAULT_GRID);
    if grid < 16 {
        return Err(Exit::config("grid must have at least 16 nodes per axis"));
    }
    let levels = match args.levels.or(cfg.levels.clone()) {
        Some(l) if l.is_empty() => return Err(Exit::config("empty level list")),
        Some(l) => Levels::Explicit(l),
        None => Levels::Auto,
    };
    let bounds = match args.bounds.map(|b| b.to_vec()).or(cfg.bounds.map(|b| b.to_vec())) {
        Some(b) if b.len() == 4 => Some(Bounds::new(b[0], b[1], b[2], b[3]).map_err(|e| Exit::config(e.to_string()))?),
        Some(_) => return Err(Exit::config("bounds take four numbers: u_min,u_max,y_min,y_max")),
        None => None,
    };
    let pp = build_portrait(&system, bounds, &levels, grid)?;
    let prefix = args.out.or(cfg.output.clone()).unwrap_or_else(|| PathBuf::from("portrait"));
    let svg = with_ext(&prefix, "svg");
    std::fs::write(&svg, render_svg(&pp)).map_err(|e| Exit::io(format!("{}: {e}", svg.display())))?;
    let csv_path = with_ext(&prefix, "csv");
    pp.write_csv(create(&csv_path)?).map_err(|e| Exit::io(format!("{}: {e}", csv_path.display())))?;
    let topology = pp.topology();
    let json_path = with_ext(&prefix, "json");
    write_json(&json!({ "portrait": pp, "topology": topology }), Some(&json_path))?;
    for w in &pp.warnings {
        eprintln!("warning: {w}");
    }
    write_json(
        &json!({
            "svg": svg,
            "csv": csv_path,
            "json": json_path,
            "curves": pp.curves.len(),
            "points": pp.point_count(),
            "max_level_error": pp.max_level_error(),
            "topology": topology,
        }),
        None,
    )
}

pub fn elliptic(args: EllipticArgs) -> ExitResult<()> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Exit::config(format!("{:?} needs --{name}", args.function)));
    let k2 = args.k2;
    let value = match args.function {
        EllipticFn::Sn | EllipticFn::Cn | EllipticFn::Dn | EllipticFn::Am => {
            let t = jacobi(need(args.u, "u")?, k2)?;
            match args.function {
                EllipticFn::Sn => t.sn,
                EllipticFn::Cn => t.cn,
                EllipticFn::Dn => t.dn,
                _ => t.am,
            }
        }
        EllipticFn::K => complete_k(k2)?,
        EllipticFn::E => complete_e(k2)?,
        EllipticFn::F => incomplete_f(need(args.phi, "phi")?, k2)?,
        EllipticFn::EInc => incomplete_e(need(args.phi, "phi")?, k2)?,
        EllipticFn::Pi => incomplete_pi(need(args.phi, "phi")?, need(args.n, "n")?, k2)?,
    };
    write_json(
        &json!({
            "function": format!("{:?}", args.function).to_lowercase(),
            "k2": k2,
            "u": args.u,
            "phi": args.phi,
            "n": args.n,
            "value": value,
        }),
        None,
    )
}
