//! On-disk formats: gallery files, face unions and solution clouds.
//!
//! Gallery geometry is stored only as exact rationals in `p/q` strings. A
//! file written by [`GalleryFile::from_instance`] reads back to an equal
//! instance, and serialising is deterministic, so generated files can be
//! kept as goldens.

use std::collections::BTreeMap;

use artgallery_core::compiler::{
    face_to_string, parse_faces, rewrite_with_satisfiers, CompiledGallery, DisjunctionGadget, Face, FacialFormula,
    HypercubeFaceUnion, LayoutParams, VarConstraint,
};
use artgallery_core::gadgets::{Family, GalleryInstance, GuardSegmentSpec, Pocket, Side};
use artgallery_core::geometry::{Point, Segment, SimplePolygon};
use artgallery_core::solver::{GuardPlacement, SegmentInterval};
use artgallery_core::topology::{CloudPoint, SolutionCloud};
use serde::{Deserialize, Serialize};

use crate::exact::{format_point, format_rational, parse_exact, parse_point, ParseRationalError};

pub const GALLERY_VERSION: &str = "artgallery-gallery/1";
pub const CLOUD_VERSION: &str = "artgallery-cloud/1";

pub type PointText = [String; 2];

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Rational { path: String, source: ParseRationalError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Core(#[from] artgallery_core::Error),
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.into(), message: message.into() }
}

/// Parse JSON into `T`, reporting the path of the offending field.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Json {
        path: e.path().to_string(),
        source: e.into_inner(),
    })
}

fn rat_at(path: &str, s: &str) -> Result<artgallery_core::geometry::Rational, FormatError> {
    parse_exact(s).map_err(|source| FormatError::Rational { path: path.into(), source })
}

fn point_at(path: &str, p: &PointText) -> Result<Point, FormatError> {
    parse_point(p).map_err(|source| FormatError::Rational { path: path.into(), source })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryFile {
    pub version: String,
    pub family: String,
    pub expected_k: usize,
    /// Counter-clockwise polygon boundary.
    pub vertices: Vec<PointText>,
    pub core: Vec<PointText>,
    pub segments: Vec<SegmentEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guard_points: Vec<PointText>,
    /// Pockets not tied to a guard segment.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pockets: Vec<PocketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compiled: Option<CompiledEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEntry {
    pub a: PointText,
    pub b: PointText,
    pub pocket_side: SideText,
    pub aperture: String,
    /// Upper, middle, lower, left.
    pub pockets: Vec<PocketEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideText {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PocketEntry {
    pub name: String,
    pub tip: usize,
    pub apex: PointText,
    pub aperture: [PointText; 2],
    pub targets: [PointText; 2],
}

/// What the compiler knows beyond the polygon: enough to rebuild the
/// [`CompiledGallery`] without recompiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompiledEntry {
    pub dimension: usize,
    /// One face per conjunction, written like `X1=0 & X3=1`.
    pub conjunctions: Vec<String>,
    pub auxiliary_point: PointText,
    pub layout: LayoutEntry,
    pub gadgets: Vec<GadgetEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutEntry {
    pub pocket_depth: String,
    pub pinhole: String,
    pub corridor_depth: String,
    pub spacing: String,
    pub shrink_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetEntry {
    pub helper: usize,
    pub corridor_tips: [usize; 2],
    pub i1: IntervalEntry,
    pub i2: Vec<IntervalEntry>,
    pub helper_windows: [[String; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalEntry {
    pub site: usize,
    pub lo: String,
    pub hi: String,
}

fn pocket_entry(p: &Pocket) -> PocketEntry {
    PocketEntry {
        name: p.name.clone(),
        tip: p.tip,
        apex: format_point(&p.apex),
        aperture: [format_point(&p.aperture.0), format_point(&p.aperture.1)],
        targets: [format_point(&p.targets.0), format_point(&p.targets.1)],
    }
}

fn pocket_from(path: &str, e: &PocketEntry) -> Result<Pocket, FormatError> {
    Ok(Pocket {
        name: e.name.clone(),
        apex: point_at(&format!("{path}.apex"), &e.apex)?,
        tip: e.tip,
        aperture: (
            point_at(&format!("{path}.aperture[0]"), &e.aperture[0])?,
            point_at(&format!("{path}.aperture[1]"), &e.aperture[1])?,
        ),
        targets: (
            point_at(&format!("{path}.targets[0]"), &e.targets[0])?,
            point_at(&format!("{path}.targets[1]"), &e.targets[1])?,
        ),
    })
}

fn interval_entry(iv: &SegmentInterval) -> IntervalEntry {
    IntervalEntry { site: iv.site, lo: format_rational(&iv.lo), hi: format_rational(&iv.hi) }
}

fn interval_from(path: &str, e: &IntervalEntry) -> Result<SegmentInterval, FormatError> {
    Ok(SegmentInterval {
        site: e.site,
        lo: rat_at(&format!("{path}.lo"), &e.lo)?,
        hi: rat_at(&format!("{path}.hi"), &e.hi)?,
    })
}

impl GalleryFile {
    pub fn from_instance(inst: &GalleryInstance) -> Self {
        GalleryFile {
            version: GALLERY_VERSION.into(),
            family: inst.family.to_string(),
            expected_k: inst.expected_k,
            vertices: inst.polygon.vertices().iter().map(format_point).collect(),
            core: inst.core.iter().map(format_point).collect(),
            segments: inst
                .guard_segments
                .iter()
                .map(|g| SegmentEntry {
                    a: format_point(&g.segment.a),
                    b: format_point(&g.segment.b),
                    pocket_side: match g.pocket_side {
                        Side::Left => SideText::Left,
                        Side::Right => SideText::Right,
                    },
                    aperture: format_rational(&g.aperture),
                    pockets: g.pockets.iter().map(pocket_entry).collect(),
                })
                .collect(),
            guard_points: inst.guard_points.iter().map(format_point).collect(),
            pockets: inst.extra_pockets.iter().map(pocket_entry).collect(),
            compiled: None,
        }
    }

    pub fn from_compiled(cg: &CompiledGallery) -> Self {
        let mut f = Self::from_instance(&cg.instance);
        let p = &cg.params;
        f.compiled = Some(CompiledEntry {
            dimension: cg.n(),
            conjunctions: cg.conjunctions.iter().map(face_to_string).collect(),
            auxiliary_point: format_point(&cg.auxiliary_point),
            layout: LayoutEntry {
                pocket_depth: format_rational(&p.pocket_depth),
                pinhole: format_rational(&p.pinhole),
                corridor_depth: format_rational(&p.corridor_depth),
                spacing: format_rational(&p.spacing),
                shrink_rounds: p.shrink_rounds,
            },
            gadgets: cg
                .gadgets
                .iter()
                .map(|g| GadgetEntry {
                    helper: g.helper,
                    corridor_tips: g.corridor_tips,
                    i1: interval_entry(&g.i1),
                    i2: g.i2.iter().map(interval_entry).collect(),
                    helper_windows: g.helper_windows.clone().map(|(lo, hi)| [format_rational(&lo), format_rational(&hi)]),
                })
                .collect(),
        });
        f
    }

    /// Rebuilds and checks the instance: the polygon must be simple and
    /// every pocket tip must be the vertex it names.
    pub fn to_instance(&self) -> Result<GalleryInstance, FormatError> {
        if self.version != GALLERY_VERSION {
            return Err(invalid("version", format!("unsupported version {:?}", self.version)));
        }
        let pts = |path: &str, v: &[PointText]| -> Result<Vec<Point>, FormatError> {
            v.iter().enumerate().map(|(i, p)| point_at(&format!("{path}[{i}]"), p)).collect()
        };
        let vertices = pts("vertices", &self.vertices)?;
        // rejects clockwise boundaries too
        let polygon = SimplePolygon::new(vertices)?;
        let mut guard_segments = Vec::with_capacity(self.segments.len());
        for (i, s) in self.segments.iter().enumerate() {
            let path = format!("segments[{i}]");
            let a = point_at(&format!("{path}.a"), &s.a)?;
            let b = point_at(&format!("{path}.b"), &s.b)?;
            let pockets: Vec<Pocket> = s
                .pockets
                .iter()
                .enumerate()
                .map(|(j, p)| pocket_from(&format!("{path}.pockets[{j}]"), p))
                .collect::<Result<_, _>>()?;
            let pockets: [Pocket; 4] =
                pockets.try_into().map_err(|_| invalid(format!("{path}.pockets"), "a guard segment has exactly four pockets"))?;
            guard_segments.push(GuardSegmentSpec {
                segment: Segment::new(a, b)?,
                pocket_side: match s.pocket_side {
                    SideText::Left => Side::Left,
                    SideText::Right => Side::Right,
                },
                aperture: rat_at(&format!("{path}.aperture"), &s.aperture)?,
                pockets,
            });
        }
        let extra_pockets = self
            .pockets
            .iter()
            .enumerate()
            .map(|(j, p)| pocket_from(&format!("pockets[{j}]"), p))
            .collect::<Result<_, _>>()?;
        let family = self.family.parse::<Family>().unwrap_or_else(|_| Family::Custom(self.family.clone()));
        let inst = GalleryInstance {
            polygon,
            core: pts("core", &self.core)?,
            guard_segments,
            guard_points: pts("guard_points", &self.guard_points)?,
            extra_pockets,
            family,
            expected_k: self.expected_k,
        };
        inst.check_pockets().map_err(|e| invalid("pockets", e.to_string()))?;
        Ok(inst)
    }

    /// The compiled gallery, for files written by [`Self::from_compiled`].
    pub fn to_compiled(&self) -> Result<Option<CompiledGallery>, FormatError> {
        let Some(c) = &self.compiled else { return Ok(None) };
        let instance = self.to_instance()?;
        let mut conjunctions: Vec<Face> = Vec::with_capacity(c.conjunctions.len());
        for (i, text) in c.conjunctions.iter().enumerate() {
            let u = parse_faces(c.dimension, text).map_err(|e| invalid(format!("compiled.conjunctions[{i}]"), e.to_string()))?;
            match <[Face; 1]>::try_from(u.faces) {
                Ok([f]) => conjunctions.push(f),
                Err(_) => return Err(invalid(format!("compiled.conjunctions[{i}]"), "expected exactly one face")),
            }
        }
        let formula = rewrite_with_satisfiers(&FacialFormula { n: c.dimension, conjunctions: conjunctions.clone() });
        let (n, d, g) = (c.dimension, conjunctions.len().saturating_sub(1), formula.g());
        let segs = instance.segments();
        if segs.len() != n + d + g || c.gadgets.len() != g {
            return Err(invalid("compiled", format!("expected {} segments and {g} gadgets", n + d + g)));
        }
        let mut gadgets = Vec::with_capacity(g);
        for (k, e) in c.gadgets.iter().enumerate() {
            let path = format!("compiled.gadgets[{k}]");
            let window = |s: usize| -> Result<_, FormatError> {
                let [lo, hi] = &e.helper_windows[s];
                Ok((rat_at(&format!("{path}.helper_windows[{s}][0]"), lo)?, rat_at(&format!("{path}.helper_windows[{s}][1]"), hi)?))
            };
            gadgets.push(DisjunctionGadget {
                clause: formula.two_clauses[k],
                helper: e.helper,
                corridor_tips: e.corridor_tips,
                i1: interval_from(&format!("{path}.i1"), &e.i1)?,
                i2: e.i2.iter().enumerate().map(|(j, iv)| interval_from(&format!("{path}.i2[{j}]"), iv)).collect::<Result<_, _>>()?,
                helper_windows: [window(0)?, window(1)?],
            });
        }
        let l = &c.layout;
        let params = LayoutParams {
            pocket_depth: rat_at("compiled.layout.pocket_depth", &l.pocket_depth)?,
            pinhole: rat_at("compiled.layout.pinhole", &l.pinhole)?,
            corridor_depth: rat_at("compiled.layout.corridor_depth", &l.corridor_depth)?,
            spacing: rat_at("compiled.layout.spacing", &l.spacing)?,
            shrink_rounds: l.shrink_rounds,
        };
        Ok(Some(CompiledGallery {
            variable_segments: segs[..n].to_vec(),
            dummy_segments: segs[n..n + d].to_vec(),
            helper_segments: segs[n + d..].to_vec(),
            auxiliary_point: point_at("compiled.auxiliary_point", &c.auxiliary_point)?,
            instance,
            formula,
            conjunctions,
            gadgets,
            params,
        }))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("gallery files always serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        from_json(text)
    }
}

/// A face union on disk: `{"dimension": 3, "faces": [{"1": 0}, {"2": 1, "3": 0}]}`
/// with 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacesFile {
    pub dimension: usize,
    pub faces: Vec<BTreeMap<String, u8>>,
}

impl FacesFile {
    pub fn to_union(&self) -> Result<HypercubeFaceUnion, FormatError> {
        let mut faces = Vec::with_capacity(self.faces.len());
        for (i, f) in self.faces.iter().enumerate() {
            let mut face = Vec::with_capacity(f.len());
            for (k, &v) in f {
                let path = format!("faces[{i}].{k}");
                let var: usize = k.trim_start_matches(['X', 'x']).parse().map_err(|_| invalid(&path, "variable index must be a positive integer"))?;
                if var == 0 {
                    return Err(invalid(&path, "variable indices start at 1"));
                }
                if v > 1 {
                    return Err(invalid(&path, "value must be 0 or 1"));
                }
                face.push(VarConstraint { var: var - 1, value: v == 1 });
            }
            faces.push(face);
        }
        Ok(HypercubeFaceUnion::new(self.dimension, faces)?)
    }
}

/// A sampled solution space. Placements are exact; distances are
/// recomputed from them on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudFile {
    pub version: String,
    pub family: String,
    pub resolution: usize,
    pub guards: usize,
    pub grid_step: f64,
    pub points: Vec<CloudPointEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudPointEntry {
    /// `(site, parameter)` per guard.
    pub sites: Vec<(usize, String)>,
    pub placement: Vec<PointText>,
}

impl CloudFile {
    pub fn from_cloud(family: &Family, cloud: &SolutionCloud) -> Self {
        CloudFile {
            version: CLOUD_VERSION.into(),
            family: family.to_string(),
            resolution: cloud.resolution,
            guards: cloud.guards,
            grid_step: cloud.grid_step,
            points: cloud
                .points
                .iter()
                .map(|p| CloudPointEntry {
                    sites: p.guards.iter().map(|(s, t)| (*s, format_rational(t))).collect(),
                    placement: p.placement.guards().iter().map(format_point).collect(),
                })
                .collect(),
        }
    }

    pub fn to_cloud(&self) -> Result<SolutionCloud, FormatError> {
        if self.version != CLOUD_VERSION {
            return Err(invalid("version", format!("unsupported version {:?}", self.version)));
        }
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let guards = p
                .sites
                .iter()
                .enumerate()
                .map(|(j, (s, t))| Ok((*s, rat_at(&format!("points[{i}].sites[{j}]"), t)?)))
                .collect::<Result<_, FormatError>>()?;
            let pts: Vec<Point> = p
                .placement
                .iter()
                .enumerate()
                .map(|(j, q)| point_at(&format!("points[{i}].placement[{j}]"), q))
                .collect::<Result<_, _>>()?;
            let coords = pts.iter().map(Point::to_f64).collect();
            points.push(CloudPoint { guards, placement: GuardPlacement::new(pts), coords });
        }
        Ok(SolutionCloud { resolution: self.resolution, guards: self.guards, points, grid_step: self.grid_step })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("clouds always serialise");
        s.push('\n');
        s
    }
}
