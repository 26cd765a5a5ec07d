//! The `artgallery` command line. Exit codes: 0 success, 2 infeasible (no
//! guard set within the bound, or a placement that leaves vertices
//! unseen), 1 any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use artgallery_core::compiler::{certify, compile_gallery, formula_from_faces, rewrite_with_satisfiers, LayoutParams};
use artgallery_core::gadgets::{generate_family_with, validate_sausages, Family, FamilyOptions, GalleryInstance};
use artgallery_core::geometry::Point;
use artgallery_core::solver::{check_placement, min_vertex_guard_set_with_stats, GuardPlacement, GuardSolution};
use artgallery_core::topology::{cloud_betti, sample_family, SampleOptions};
use clap::{Parser, Subcommand};

use crate::exact::{format_rational, parse_exact, parse_point_text};
use crate::format::{from_json, CloudFile, FacesFile, GalleryFile};
use crate::render::{parse_layers, render_svg, RenderOptions};
use crate::service::{router, Session};

#[derive(Parser, Debug)]
#[command(name = "artgallery", version, about = "Exact art-gallery workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a gadget family, e.g. `circle`, `clover --k 3`, `grid --h 3 --v 2`.
    Generate {
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        v: Option<usize>,
        /// Initial pocket aperture, exact (`1/64`).
        #[arg(long)]
        aperture: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a faces file into a gallery.
    Compile {
        faces: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum number of guards seeing every vertex, with a witness.
    Solve {
        gallery: PathBuf,
        /// Give up above this many guards (default: a third of the vertices,
        /// which always suffices).
        #[arg(long)]
        kmax: Option<usize>,
        /// Accepted for scripts; the solver is always deterministic.
        #[arg(long)]
        deterministic: bool,
    },
    /// Check a placement, guards as `x,y;x,y` with exact or decimal coordinates.
    Check {
        gallery: PathBuf,
        #[arg(long)]
        guards: String,
    },
    /// Sample the optimal placements on a grid of guard positions.
    Sample {
        gallery: PathBuf,
        #[arg(short, long)]
        resolution: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Betti numbers of a sampled cloud's Rips complex.
    Betti {
        cloud: PathBuf,
        /// Highest Betti number reported.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Rips scale (default 1.5 grid steps).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Pocket, sausage and (for compiled galleries) construction checks.
    Validate {
        gallery: PathBuf,
        #[arg(short, long, default_value_t = 8)]
        resolution: usize,
    },
    /// Render to SVG.
    Render {
        gallery: PathBuf,
        #[arg(long, default_value = "polygon,segments")]
        layers: String,
        #[arg(long)]
        guards: Option<String>,
        #[arg(long)]
        visibility_of: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Serve the query API for one gallery.
    Serve {
        gallery: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

const INFEASIBLE: u8 = 2;

fn read_gallery(path: &Path) -> Result<GalleryFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GalleryFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<(GalleryFile, GalleryInstance)> {
    let file = read_gallery(path)?;
    let inst = file.to_instance().with_context(|| format!("loading {}", path.display()))?;
    Ok((file, inst))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_guards(s: &str) -> Result<Vec<Point>> {
    s.split(';')
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(|g| parse_point_text(g).with_context(|| format!("guard {g:?}")))
        .collect()
}

fn show(p: &Point) -> String {
    format!("{},{}", format_rational(p.x()), format_rational(p.y()))
}

fn family_from(name: &str, k: Option<usize>, h: Option<usize>, v: Option<usize>) -> Result<Family> {
    let fam = match (name.to_ascii_lowercase().as_str(), k, h, v) {
        ("clover" | "chain" | "necklace", Some(k), None, None) => format!("{name}({k})").parse()?,
        ("grid", None, Some(h), Some(v)) => Family::Grid { h, v },
        (_, None, None, None) => name.parse()?,
        _ => bail!("parameters do not fit family {name:?} (clover/chain/necklace take --k, grid takes --h and --v)"),
    };
    Ok(fam)
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { family, k, h, v, aperture, output } => {
            let fam = family_from(&family, k, h, v)?;
            let mut opts = FamilyOptions::default();
            if let Some(a) = aperture {
                opts.aperture = parse_exact(&a)?;
            }
            let inst = generate_family_with(&fam, &opts)?;
            emit(output.as_deref(), &GalleryFile::from_instance(&inst).to_json())?;
        }
        Command::Compile { faces, output } => {
            let text = fs::read_to_string(&faces).with_context(|| format!("reading {}", faces.display()))?;
            let ff: FacesFile = from_json(&text)?;
            let phi = formula_from_faces(&ff.to_union()?)?;
            let cg = compile_gallery(&rewrite_with_satisfiers(&phi), &LayoutParams::default())?;
            eprintln!("compiled {phi}: {} vertices, {} guards", cg.instance.polygon.len(), cg.guard_count());
            emit(output.as_deref(), &GalleryFile::from_compiled(&cg).to_json())?;
        }
        Command::Solve { gallery, kmax, deterministic: _ } => {
            let (_, inst) = load_instance(&gallery)?;
            let kmax = kmax.unwrap_or((inst.polygon.len() / 3).max(1));
            let (sol, stats) = min_vertex_guard_set_with_stats(&inst.polygon, kmax)?;
            match sol {
                GuardSolution::Optimal { k, witness } => {
                    println!("optimal {k} (expected {})", inst.expected_k);
                    for g in witness.guards() {
                        println!("{}", show(g));
                    }
                    eprintln!("{} rounds, {} candidates, {} vertices constrained", stats.rounds, stats.candidates, stats.elements);
                }
                GuardSolution::InfeasibleWithinBound { lower_bound } => {
                    println!("infeasible with at most {kmax} guards (needs at least {lower_bound})");
                    return Ok(ExitCode::from(INFEASIBLE));
                }
            }
        }
        Command::Check { gallery, guards } => {
            let (_, inst) = load_instance(&gallery)?;
            let placement = GuardPlacement::new(parse_guards(&guards)?);
            let report = check_placement(&inst.polygon, &placement)?;
            let names: Vec<String> = inst
                .pockets()
                .filter(|p| report.unseen_vertices.contains(&p.tip))
                .map(|p| p.name.clone())
                .collect();
            println!("fully covered: {}", report.fully_covered);
            if !report.fully_covered {
                println!("unseen vertices: {:?}", report.unseen_vertices);
                println!("unseen pockets: {}", names.join(", "));
                return Ok(ExitCode::from(INFEASIBLE));
            }
        }
        Command::Sample { gallery, resolution, output } => {
            let (_, inst) = load_instance(&gallery)?;
            let mut opts = SampleOptions::for_family(&inst.family);
            if let Some(r) = resolution {
                opts.resolution = r;
            }
            let cloud = sample_family(&inst, &opts)?;
            eprintln!("{} optimal placements of {} guards at resolution {}", cloud.points.len(), cloud.guards, cloud.resolution);
            emit(output.as_deref(), &CloudFile::from_cloud(&inst.family, &cloud).to_json())?;
        }
        Command::Betti { cloud, dim, eps } => {
            let text = fs::read_to_string(&cloud).with_context(|| format!("reading {}", cloud.display()))?;
            let file: CloudFile = from_json(&text)?;
            let cloud = file.to_cloud()?;
            let eps = eps.unwrap_or_else(|| cloud.default_epsilon());
            let b = cloud_betti(&cloud, eps, dim)?;
            let parts: Vec<String> = b.iter().enumerate().map(|(i, v)| format!("b{i}={v}")).collect();
            println!("{} (eps {eps}, {} points)", parts.join(" "), cloud.points.len());
        }
        Command::Validate { gallery, resolution } => {
            let (file, inst) = load_instance(&gallery)?;
            let r = validate_sausages(&inst, resolution)?;
            println!("pockets: ok");
            println!("sausage nerve matches segment nerve: {}", r.nerve_matches());
            if !r.nerve_matches() {
                println!("extra sausage edges: {:?}", r.extra_edges());
            }
            let unrefuted = r.spurious_candidates.iter().filter(|s| !s.refuted).count();
            println!("pseudo-solutions: {} found, {unrefuted} unrefuted", r.spurious_candidates.len());
            let mut ok = unrefuted == 0;
            if let Some(cg) = file.to_compiled()? {
                match certify(&cg) {
                    Ok(()) => println!("compiler certificate: ok"),
                    Err(e) => {
                        println!("compiler certificate: {e}");
                        ok = false;
                    }
                }
            }
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render { gallery, layers, guards, visibility_of, output } => {
            let (_, inst) = load_instance(&gallery)?;
            let opts = RenderOptions {
                layers: parse_layers(&layers)?,
                placement: guards.as_deref().map(parse_guards).transpose()?.map(GuardPlacement::new),
                visibility_of: visibility_of.as_deref().map(parse_point_text).transpose()?,
            };
            emit(output.as_deref(), &render_svg(&inst, &opts)?)?;
        }
        Command::Serve { gallery, port, host } => {
            let session = match gallery {
                Some(p) => Session::load(read_gallery(&p)?)?,
                None => Session::empty(),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                axum::serve(listener, router(Arc::new(session))).await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
