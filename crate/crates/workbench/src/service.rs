//! HTTP query service over one loaded gallery.
//!
//! The instance is immutable after load, so handlers share it without
//! locking; only the per-client placements sit behind a mutex. Answers
//! depend on the request body alone.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use artgallery_core::compiler::{placement_to_point, project_placement, site_parameters, CompiledGallery};
use artgallery_core::gadgets::GalleryInstance;
use artgallery_core::geometry::{Containment, Point, Rational};
use artgallery_core::solver::{check_placement, GuardPlacement};
use artgallery_core::visibility::visibility_polygon;
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{Any, CorsLayer};

use crate::exact::{approx, format_point, format_rational, parse_lenient, snap};
use crate::format::{FormatError, GalleryFile, PointText};

/// Header naming the client whose placement a request updates.
pub const CLIENT_HEADER: &str = "x-client-token";

pub struct Loaded {
    pub file: GalleryFile,
    pub instance: GalleryInstance,
    pub compiled: Option<CompiledGallery>,
    /// Pocket name per tip vertex.
    tip_names: HashMap<usize, String>,
}

#[derive(Default)]
pub struct Session {
    loaded: Option<Loaded>,
    placements: Mutex<HashMap<String, Vec<PointText>>>,
}

impl Session {
    pub fn empty() -> Self {
        Session::default()
    }

    pub fn load(file: GalleryFile) -> Result<Self, FormatError> {
        let instance = file.to_instance()?;
        let compiled = file.to_compiled()?;
        let tip_names = instance.pockets().map(|p| (p.tip, p.name.clone())).collect();
        Ok(Session { loaded: Some(Loaded { file, instance, compiled, tip_names }), placements: Mutex::default() })
    }

    pub fn loaded(&self) -> Option<&Loaded> {
        self.loaded.as_ref()
    }
}

pub fn router(session: Arc<Session>) -> Router {
    let cors = CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any);
    Router::new()
        .route("/instance", get(instance))
        .route("/check", post(check))
        .route("/visibility", post(visibility))
        .route("/placement", get(placement))
        .layer(cors)
        .with_state(session)
}

struct ApiError {
    status: StatusCode,
    message: String,
    path: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>, path: Option<String>) -> Self {
        ApiError { status, message: message.into(), path }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "path": self.path }))).into_response()
    }
}

fn no_instance() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "no gallery loaded", None)
}

/// A coordinate as sent by a client: exact text, decimal text or a JSON
/// number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Coord {
    Text(String),
    Number(f64),
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::new(StatusCode::BAD_REQUEST, e.into_inner().to_string(), Some(path))
    })
}

fn to_rational(c: &Coord, path: String) -> Result<Rational, ApiError> {
    let r = match c {
        Coord::Text(s) => parse_lenient(s).map_err(|e| e.to_string()),
        Coord::Number(v) => snap(*v).ok_or_else(|| format!("{v} is not finite")),
    };
    r.map_err(|m| ApiError::new(StatusCode::BAD_REQUEST, m, Some(path)))
}

fn to_point(c: &[Coord; 2], path: &str) -> Result<Point, ApiError> {
    Ok(Point::new(to_rational(&c[0], format!("{path}[0]"))?, to_rational(&c[1], format!("{path}[1]"))?))
}

async fn instance(State(s): State<Arc<Session>>) -> Result<Json<GalleryFile>, ApiError> {
    s.loaded().map(|l| Json(l.file.clone())).ok_or_else(no_instance)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckRequest {
    guards: Vec<[Coord; 2]>,
}

#[derive(Serialize)]
struct GuardReport {
    point: PointText,
    /// Guard sites (segments, then guard points) the guard stands on.
    sites: Vec<usize>,
    visible_vertices: usize,
}

#[derive(Serialize)]
struct CompiledReport {
    /// Variable guard parameters after moving dummies and helpers to their
    /// left ends; `None` when the placement does not hold one guard per site.
    point: Option<Vec<String>>,
    point_approx: Option<Vec<f64>>,
    in_union: Option<bool>,
    projected_guards: Option<Vec<PointText>>,
    reason: Option<String>,
}

#[derive(Serialize)]
struct CheckResponse {
    fully_covered: bool,
    unseen_vertices: Vec<usize>,
    unseen_pockets: Vec<String>,
    guards: Vec<GuardReport>,
    /// Per guard segment, whether some guard stands on it.
    occupied_segments: Vec<bool>,
    /// Every site occupied by exactly one guard and no guard off the sites.
    on_sites: bool,
    compiled: Option<CompiledReport>,
}

fn sites_of(inst: &GalleryInstance, p: &Point) -> Vec<usize> {
    let n = inst.guard_segments.len();
    let mut out: Vec<usize> = (0..n).filter(|&i| inst.guard_segments[i].segment.contains(p)).collect();
    out.extend(inst.guard_points.iter().enumerate().filter(|(_, q)| *q == p).map(|(j, _)| n + j));
    out
}

fn compiled_report(cg: &CompiledGallery, g: &GuardPlacement) -> CompiledReport {
    let projected = site_parameters(cg, g).and_then(|_| project_placement(cg, g));
    match projected.and_then(|pr| placement_to_point(cg, &pr).map(|x| (pr, x))) {
        Ok((pr, x)) => CompiledReport {
            in_union: Some(cg.in_union(&x)),
            point_approx: Some(x.iter().map(approx).collect()),
            point: Some(x.iter().map(format_rational).collect()),
            projected_guards: Some(pr.guards().iter().map(format_point).collect()),
            reason: None,
        },
        Err(e) => CompiledReport { point: None, point_approx: None, in_union: None, projected_guards: None, reason: Some(e.to_string()) },
    }
}

async fn check(State(s): State<Arc<Session>>, headers: HeaderMap, body: Bytes) -> Result<Json<CheckResponse>, ApiError> {
    let l = s.loaded().ok_or_else(no_instance)?;
    let req: CheckRequest = parse_body(&body)?;
    let pts: Vec<Point> = req.guards.iter().enumerate().map(|(i, c)| to_point(c, &format!("guards[{i}]"))).collect::<Result<_, _>>()?;
    let inst = &l.instance;
    for (i, p) in pts.iter().enumerate() {
        if inst.polygon.contains(p) == Containment::Exterior {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, format!("guard {p} lies outside the polygon"), Some(format!("guards[{i}]"))));
        }
    }
    let placement = GuardPlacement::new(pts.clone());
    let report = check_placement(&inst.polygon, &placement)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string(), None))?;
    let sites: Vec<Vec<usize>> = pts.iter().map(|p| sites_of(inst, p)).collect();
    let site_count = inst.guard_segments.len() + inst.guard_points.len();
    let mut per_site = vec![0usize; site_count];
    for s in sites.iter().flatten() {
        per_site[*s] += 1;
    }
    let on_sites = sites.iter().all(|s| !s.is_empty()) && per_site.iter().all(|&c| c == 1);
    // per_guard_visibility follows the placement's own (sorted) order
    let guards = placement
        .guards()
        .iter()
        .zip(&report.per_guard_visibility)
        .map(|(p, m)| GuardReport { point: format_point(p), sites: sites_of(inst, p), visible_vertices: m.count() })
        .collect();
    let unseen_pockets = report.unseen_vertices.iter().filter_map(|v| l.tip_names.get(v).cloned()).collect();
    if let Some(token) = headers.get(CLIENT_HEADER).and_then(|v| v.to_str().ok()) {
        let mut map = s.placements.lock().expect("placement map poisoned");
        map.insert(token.to_string(), pts.iter().map(format_point).collect());
    }
    Ok(Json(CheckResponse {
        fully_covered: report.fully_covered,
        unseen_vertices: report.unseen_vertices.clone(),
        unseen_pockets,
        guards,
        occupied_segments: per_site[..inst.guard_segments.len()].iter().map(|&c| c > 0).collect(),
        on_sites,
        compiled: l.compiled.as_ref().map(|cg| compiled_report(cg, &placement)),
    }))
}

/// The last placement this client sent to `/check`.
async fn placement(State(s): State<Arc<Session>>, headers: HeaderMap) -> Result<Json<serde_json::Value>, ApiError> {
    s.loaded().ok_or_else(no_instance)?;
    let token = headers
        .get(CLIENT_HEADER)
        .and_then(|v| v.to_str().ok())
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, format!("missing {CLIENT_HEADER} header"), None))?;
    let map = s.placements.lock().expect("placement map poisoned");
    Ok(Json(json!({ "guards": map.get(token).cloned().unwrap_or_default() })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VisibilityRequest {
    point: [Coord; 2],
}

#[derive(Serialize)]
struct RegionVertex {
    exact: PointText,
    approx: [f64; 2],
}

async fn visibility(State(s): State<Arc<Session>>, body: Bytes) -> Result<Json<serde_json::Value>, ApiError> {
    let l = s.loaded().ok_or_else(no_instance)?;
    let req: VisibilityRequest = parse_body(&body)?;
    let p = to_point(&req.point, "point")?;
    let reg = visibility_polygon(&l.instance.polygon, &p)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string(), Some("point".into())))?;
    let vertices: Vec<RegionVertex> = reg
        .region
        .vertices()
        .iter()
        .map(|v| RegionVertex { exact: format_point(v), approx: [approx(v.x()), approx(v.y())] })
        .collect();
    Ok(Json(json!({ "point": format_point(&p), "vertices": vertices, "antenna": reg.has_antenna() })))
}
