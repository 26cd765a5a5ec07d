//! SVG rendering of galleries with toggleable layers.

use std::fmt::Write as _;
use std::str::FromStr;

use artgallery_core::gadgets::GalleryInstance;
use artgallery_core::geometry::Point;
use artgallery_core::solver::GuardPlacement;
use artgallery_core::visibility::visibility_polygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    Polygon,
    Segments,
    Sausages,
    Placement,
    VisibilityOf,
}

impl Layer {
    pub const ALL: [Layer; 5] = [Layer::Polygon, Layer::Segments, Layer::Sausages, Layer::Placement, Layer::VisibilityOf];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Polygon => "polygon",
            Layer::Segments => "segments",
            Layer::Sausages => "sausages",
            Layer::Placement => "placement",
            Layer::VisibilityOf => "visibility-of",
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("unknown layer {0:?} (known: polygon, segments, sausages, placement, visibility-of)")]
    UnknownLayer(String),
    #[error("layer {0} needs {1}")]
    MissingInput(&'static str, &'static str),
    #[error(transparent)]
    Core(#[from] artgallery_core::Error),
}

impl FromStr for Layer {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, RenderError> {
        Layer::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| RenderError::UnknownLayer(s.into()))
    }
}

/// Comma-separated layer names.
pub fn parse_layers(s: &str) -> Result<Vec<Layer>, RenderError> {
    let mut out: Vec<Layer> = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct RenderOptions {
    pub layers: Vec<Layer>,
    pub placement: Option<GuardPlacement>,
    pub visibility_of: Option<Point>,
}

/// Fixed-precision coordinate text, so equal inputs give equal bytes.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn path_d(pts: &[Point]) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = p.to_f64();
        let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(x), num(y));
    }
    d.push('Z');
    d
}

/// Renders the chosen layers. The viewport is the polygon's bounding box
/// grown by 5% on each side; y points up.
pub fn render_svg(inst: &GalleryInstance, opts: &RenderOptions) -> Result<String, RenderError> {
    let poly = &inst.polygon;
    let (x0, y0, x1, y1) = poly.bbox_f64();
    let (mx, my) = ((x1 - x0) * 0.05, (y1 - y0) * 0.05);
    let (w, h) = (x1 - x0 + 2.0 * mx, y1 - y0 + 2.0 * my);
    let unit = w.max(h) / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(x0 - mx),
        num(-(y1 + my)),
        num(w),
        num(h),
        num((800.0 * h / w).round())
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="{}">"#, num(unit));
    for layer in &opts.layers {
        match layer {
            Layer::Polygon => {
                let _ = writeln!(out, r##"<path class="polygon" fill="#f4f1e8" stroke="#222" d="{}"/>"##, path_d(poly.vertices()));
            }
            Layer::Segments => {
                for (i, s) in inst.segments().iter().enumerate() {
                    let ((ax, ay), (bx, by)) = (s.a.to_f64(), s.b.to_f64());
                    let _ = writeln!(
                        out,
                        r##"<path class="segment" data-site="{i}" stroke="#1f5fbf" stroke-dasharray="{} {}" fill="none" d="M{} {} L{} {}"/>"##,
                        num(4.0 * unit),
                        num(2.0 * unit),
                        num(ax),
                        num(ay),
                        num(bx),
                        num(by)
                    );
                }
                for p in &inst.guard_points {
                    let (x, y) = p.to_f64();
                    let r = 3.0 * unit;
                    let _ = writeln!(
                        out,
                        r##"<rect class="guard-point" fill="#1f5fbf" x="{}" y="{}" width="{}" height="{}"/>"##,
                        num(x - r),
                        num(y - r),
                        num(2.0 * r),
                        num(2.0 * r)
                    );
                }
            }
            Layer::Sausages => {
                for (i, g) in inst.guard_segments.iter().enumerate() {
                    let _ = writeln!(out, r##"<g class="sausage" data-site="{i}" fill="#e0702a" fill-opacity="0.15" stroke="none">"##);
                    for p in &g.pockets {
                        let reg = visibility_polygon(poly, &p.apex)?;
                        let _ = writeln!(out, r#"<path class="wedge" d="{}"/>"#, path_d(reg.region.vertices()));
                    }
                    out.push_str("</g>\n");
                }
            }
            Layer::Placement => {
                let g = opts.placement.as_ref().ok_or(RenderError::MissingInput("placement", "a guard placement"))?;
                for q in g.guards() {
                    let (x, y) = q.to_f64();
                    let _ = writeln!(out, r##"<circle class="guard" fill="#c0142b" cx="{}" cy="{}" r="{}"/>"##, num(x), num(y), num(4.0 * unit));
                }
            }
            Layer::VisibilityOf => {
                let p = opts.visibility_of.as_ref().ok_or(RenderError::MissingInput("visibility-of", "a point"))?;
                let reg = visibility_polygon(poly, p)?;
                let (x, y) = p.to_f64();
                let _ = writeln!(
                    out,
                    r##"<path class="visibility" fill="#ffd84d" fill-opacity="0.5" stroke="#b08900" d="{}"/>"##,
                    path_d(reg.region.vertices())
                );
                let _ = writeln!(out, r##"<circle class="viewpoint" fill="#b08900" cx="{}" cy="{}" r="{}"/>"##, num(x), num(y), num(3.0 * unit));
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
