use artgallery_core::gadgets::{generate_family, generate_family_with, Family, FamilyOptions};
use artgallery_core::geometry::{rat, Point};
use artgallery_core::solver::GuardPlacement;
use artgallery_workbench::render::{parse_layers, render_svg, Layer, RenderError, RenderOptions};

fn opts(layers: &str) -> RenderOptions {
    RenderOptions { layers: parse_layers(layers).unwrap(), ..Default::default() }
}

#[test]
fn circle_polygon_and_segments() {
    let inst = generate_family(&Family::Circle).unwrap();
    let svg = render_svg(&inst, &opts("polygon,segments")).unwrap();
    assert_eq!(svg.matches(r#"<path class="polygon""#).count(), 1);
    assert_eq!(svg.matches(r#"<path class="segment""#).count(), 3);
    assert_eq!(svg.matches("stroke-dasharray").count(), 3);
    assert_eq!(svg.matches("<path").count(), 4);
}

#[test]
fn placement_discs() {
    let inst = generate_family(&Family::Circle).unwrap();
    let mut o = opts("polygon,placement");
    o.placement = Some(GuardPlacement::new(vec![Point::from_ints(0, 0), Point::from_ints(4, 0)]));
    let svg = render_svg(&inst, &o).unwrap();
    assert_eq!(svg.matches(r#"<circle class="guard""#).count(), 2);
    assert_eq!(render_svg(&inst, &opts("placement")), Err(RenderError::MissingInput("placement", "a guard placement")));
}

#[test]
fn unknown_layers_are_errors() {
    assert_eq!(parse_layers("polygon,heatmap"), Err(RenderError::UnknownLayer("heatmap".into())));
    assert_eq!(parse_layers("segments, polygon,segments").unwrap(), vec![Layer::Polygon, Layer::Segments]);
}

#[test]
fn output_is_deterministic_with_a_padded_viewport() {
    let inst = generate_family(&Family::Torus).unwrap();
    let a = render_svg(&inst, &opts("polygon,segments,sausages")).unwrap();
    let b = render_svg(&inst, &opts("polygon,segments,sausages")).unwrap();
    assert_eq!(a, b);
    let (x0, y0, x1, y1) = inst.polygon.bbox_f64();
    let vb = format!(
        r#"viewBox="{} {} {} {}""#,
        x0 - 0.05 * (x1 - x0),
        -(y1 + 0.05 * (y1 - y0)),
        1.1 * (x1 - x0),
        1.1 * (y1 - y0)
    );
    let got = a.split("viewBox=").nth(1).unwrap().split('"').nth(1).unwrap();
    let want: Vec<f64> = vb.split('"').nth(1).unwrap().split(' ').map(|v| v.parse().unwrap()).collect();
    let got: Vec<f64> = got.split(' ').map(|v| v.parse().unwrap()).collect();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-5, "{got:?} vs {want:?}");
    }
}

/// Summed shoelace area of the wedge paths in a render.
fn wedge_area(svg: &str) -> f64 {
    svg.lines()
        .filter(|l| l.contains(r#"class="wedge""#))
        .map(|l| {
            let d = l.split("d=\"").nth(1).unwrap().trim_end_matches("\"/>");
            let pts: Vec<(f64, f64)> = d
                .trim_end_matches('Z')
                .split(['M', 'L'])
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let mut it = s.split_whitespace().map(|v| v.parse::<f64>().unwrap());
                    (it.next().unwrap(), it.next().unwrap())
                })
                .collect();
            let n = pts.len();
            (0..n).map(|i| pts[i].0 * pts[(i + 1) % n].1 - pts[(i + 1) % n].0 * pts[i].1).sum::<f64>().abs() / 2.0
        })
        .sum()
}

#[test]
fn sausages_thin_with_the_aperture() {
    let render = |a| {
        let o = FamilyOptions { aperture: rat(1, a), shrink_rounds: 0, ..Default::default() };
        let svg = render_svg(&generate_family_with(&Family::Circle, &o).unwrap(), &opts("sausages")).unwrap();
        assert_eq!(svg.matches(r#"class="wedge""#).count(), 12);
        wedge_area(&svg)
    };
    let areas: Vec<f64> = [16, 32, 64, 128].into_iter().map(render).collect();
    assert!(areas.windows(2).all(|w| w[1] < w[0]), "{areas:?}");
}

#[test]
fn visibility_layer() {
    let inst = generate_family(&Family::Circle).unwrap();
    let mut o = opts("visibility-of");
    o.visibility_of = Some(Point::from_ints(2, 1));
    let svg = render_svg(&inst, &o).unwrap();
    assert_eq!(svg.matches(r#"class="visibility""#).count(), 1);
    o.visibility_of = Some(Point::from_ints(100, 100));
    assert!(matches!(render_svg(&inst, &o), Err(RenderError::Core(artgallery_core::Error::ExteriorPoint(_)))));
}
