use gkmn::bifurcation::{orbit_inventory, OrbitClass};
use gkmn::portrait::{build_portrait, render_svg, Bounds, CurveSource, Levels};
use gkmn::{AlphaCoefficients, SystemICoefficients, WaveSystem};

fn double_well() -> WaveSystem {
    WaveSystem::TypeI(SystemICoefficients::new(4.0, 0.5))
}

#[test]
fn rebuilds_are_byte_identical() {
    let run = || {
        let pp = build_portrait(&double_well(), None, &Levels::Auto, 200).unwrap();
        let mut csv = Vec::new();
        pp.write_csv(&mut csv).unwrap();
        (render_svg(&pp), csv)
    };
    assert_eq!(run(), run());
}

#[test]
fn csv_has_one_row_per_point() {
    let pp = build_portrait(&double_well(), None, &Levels::Auto, 200).unwrap();
    let mut csv = Vec::new();
    pp.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("curve_id,class,h,u,y"));
    assert_eq!(lines.count(), pp.point_count());
}

#[test]
fn contour_points_lie_on_their_level() {
    for system in [
        double_well(),
        WaveSystem::TypeI(SystemICoefficients::new(-4.0, -0.5)),
        WaveSystem::TypeII(AlphaCoefficients::new(1.0, -4.0, 0.1).unwrap()),
    ] {
        let pp = build_portrait(&system, None, &Levels::Auto, 256).unwrap();
        assert!(pp.max_level_error() <= 1e-6, "{system:?}: {}", pp.max_level_error());
    }
}

fn closed_contours(system: &WaveSystem, h: f64, bounds: Bounds) -> usize {
    let pp = build_portrait(system, Some(bounds), &Levels::Explicit(vec![h]), 256).unwrap();
    pp.curves.iter().filter(|c| c.source == CurveSource::Contour && c.closed && c.h == h).count()
}

fn bounded_components(system: &WaveSystem, h: f64) -> usize {
    orbit_inventory(system, h).unwrap().iter().filter(|o| o.class == OrbitClass::Periodic).count()
}

#[test]
fn closed_curves_match_bounded_inventory_components() {
    let wide = Bounds::new(-5.0, 5.0, -8.0, 8.0).unwrap();
    let cases = [
        (double_well(), -2.0, wide),
        (double_well(), 2.0, wide),
        (WaveSystem::TypeI(SystemICoefficients::new(-4.0, -0.5)), 2.0, wide),
        (WaveSystem::TypeI(SystemICoefficients::new(-4.0, 2.0)), 1.0, wide),
        (WaveSystem::TypeII(AlphaCoefficients::new(-1.0, 0.0, 0.1).unwrap()), 1.0, Bounds::new(-3.0, 3.0, -3.0, 3.0).unwrap()),
    ];
    for (system, h, bounds) in cases {
        let expected = bounded_components(&system, h);
        assert!(expected > 0);
        assert_eq!(closed_contours(&system, h, bounds), expected, "{system:?} at h = {h}");
    }
}

#[test]
fn svg_marks_every_equilibrium() {
    let pp = build_portrait(&double_well(), None, &Levels::Auto, 128).unwrap();
    let svg = render_svg(&pp);
    assert!(svg.starts_with("<svg"));
    let markers = svg.matches("<circle").count() + svg.matches(r##"stroke="#000000" stroke-width="2""##).count();
    assert_eq!(markers, pp.equilibria.len());
}
