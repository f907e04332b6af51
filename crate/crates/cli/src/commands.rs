use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use convex_rounder::body::DEFAULT_RECENTER_FRACTION;
use convex_rounder::certificates::{
    smooth_certificate_with, strict_certificate_with, SmoothParams, StrictParams,
    DEFAULT_FD_STEP, DEFAULT_SMOOTH_CEILING, DEFAULT_STRICT_FLOOR,
};
use convex_rounder::grid::default_size;
use convex_rounder::io::{body_from_json, body_to_json, energy_to_json};
use convex_rounder::rounding::{smoothify_with, strictify_with, MAX_HALVINGS};
use convex_rounder::{
    asplund_round, hausdorff, presets, Body, CertificateReport, DirectionGrid, Error, GridSpec,
    QuadGauge, RoundingConfig,
};
use serde_json::{json, Value};

use crate::output::{read_text, write_atomic, Failure, Outcome, EXIT_CERTIFICATE, EXIT_INPUT};
use crate::svg;

/// Flags shared by every command.
#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Directions in the sampling grid [default: 720 in the plane, 2048 above].
    #[arg(long, global = true, env = "CONVEX_ROUNDER_GRID_N")]
    pub grid_n: Option<usize>,
    /// Seed of the sampling grid (used for d >= 3).
    #[arg(long, global = true, default_value_t = 0)]
    pub grid_seed: u64,
    /// Convergence tolerance of the averaging iteration.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Seed for random presets and certificate sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Global {
    fn spec(&self, dim: usize) -> GridSpec {
        GridSpec::new(self.grid_n.unwrap_or_else(|| default_size(dim)), self.grid_seed)
    }

    fn grid(&self, dim: usize) -> Result<DirectionGrid, Failure> {
        Ok(self.spec(dim).build(dim)?)
    }
}

#[derive(Args, Debug)]
pub struct MakeArgs {
    /// Named preset.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec",
          value_parser = ["ball", "square", "cross", "cube", "simplex", "random-polytope"])]
    pub preset: Option<String>,
    /// Body JSON file to normalize.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Vertex count for random-polytope.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Radius for ball.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Output file; the body is embedded in stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Strictify,
    Smoothify,
    Asplund,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Strict,
    Smooth,
}

#[derive(Args, Clone, Debug)]
pub struct CertFlags {
    /// Boundary pairs for the strict certificate.
    #[arg(long, default_value_t = 512)]
    pub pairs: usize,
    /// Minimum pair separation [default: a tenth of the diameter].
    #[arg(long)]
    pub min_separation: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STRICT_FLOOR)]
    pub floor: f64,
    /// Boundary points for the smooth certificate.
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Probe directions per point.
    #[arg(long, default_value_t = 4)]
    pub probe_dirs: usize,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub fd_step: f64,
    #[arg(long, default_value_t = DEFAULT_SMOOTH_CEILING)]
    pub ceiling: f64,
}

impl CertFlags {
    fn run(&self, b: &Body, kind: Kind, seed: u64) -> Result<CertificateReport, Failure> {
        Ok(match kind {
            Kind::Strict => strict_certificate_with(
                b,
                &StrictParams {
                    n_pairs: self.pairs,
                    min_separation: self.min_separation,
                    seed,
                    floor: self.floor,
                },
            )?,
            Kind::Smooth => smooth_certificate_with(
                b,
                &SmoothParams {
                    n_points: self.points,
                    n_probe_dirs: self.probe_dirs,
                    fd_step: self.fd_step,
                    seed,
                    ceiling: self.ceiling,
                    ..Default::default()
                },
            )?,
        })
    }
}

#[derive(Args, Debug)]
pub struct RoundArgs {
    /// Body JSON file.
    pub body: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    /// Hausdorff budget.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Fixed regularization weight; halved from 0.1 until the budget holds when omitted.
    #[arg(long)]
    pub reg_weight: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Angular table nodes per grid direction (asplund).
    #[arg(long, default_value_t = 8)]
    pub table_factor: usize,
    /// Rounded body JSON.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Iteration trace CSV (asplund) [default: next to --out].
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub cert: CertFlags,
}

#[derive(Args, Debug)]
pub struct CertArgs {
    pub body: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[command(flatten)]
    pub cert: CertFlags,
    /// Also write the report as a CSV row with header.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualOp {
    Polar,
    Fenchel,
}

#[derive(Args, Debug)]
pub struct DualArgs {
    pub body: PathBuf,
    #[arg(long, value_enum)]
    pub op: DualOp,
    /// Weight w of the energy (w/2) p² (fenchel).
    #[arg(long, default_value_t = 1.0)]
    pub weight: f64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// Planar body JSON files.
    #[arg(required = true)]
    pub bodies: Vec<PathBuf>,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Width and height in pixels.
    #[arg(long, default_value_t = 512)]
    pub size: u32,
}

fn load(path: &Path) -> Result<Body, Failure> {
    body_from_json(&read_text(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn kind_name(b: &Body) -> &'static str {
    match b {
        Body::Polytope(_) => "polytope",
        Body::Ball { .. } => "ball",
        Body::SupportSampled(_) => "support",
        Body::LevelSet(_) => "level_set",
        Body::PolarOf(_) => "polar",
    }
}

fn json_value(s: &str) -> Value {
    serde_json::from_str(s).expect("serialized documents parse")
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn report_value(r: &CertificateReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn describe(out: &mut Outcome, b: &Body, grid: &DirectionGrid) {
    out.set("kind", kind_name(b));
    out.set("dim", b.dim());
    out.set("inradius", b.inradius(grid));
    out.set("circumradius", b.circumradius(grid));
}

fn emit_body(out: &mut Outcome, b: &Body, path: Option<&Path>) -> Result<(), Failure> {
    let text = body_to_json(b)?;
    match path {
        Some(p) => {
            write_atomic(p, &(text + "\n"))?;
            out.artifacts.push(path_string(p));
        }
        None => out.set("body", json_value(&text)),
    }
    Ok(())
}

pub fn body_make(g: &Global, a: &MakeArgs) -> Result<Outcome, Failure> {
    let body = match (&a.preset, &a.spec) {
        (Some(name), _) => presets::preset(name, a.dim, g.seed, a.vertices, a.radius)?,
        (None, Some(p)) => load(p)?,
        (None, None) => return Err(Failure::input("either --preset or --spec is required")),
    };
    let r = body.recenter(DEFAULT_RECENTER_FRACTION)?;
    r.body.check_interior()?;
    let grid = g.grid(r.body.dim())?;
    let mut out = Outcome::new("");
    describe(&mut out, &r.body, &grid);
    out.set("offset", r.offset.clone());
    if let Body::Polytope(p) = &r.body {
        out.set("vertices", p.vertices().len());
    }
    emit_body(&mut out, &r.body, a.out.as_deref())?;
    out.summary = format!(
        "{} in dimension {}: inradius {:.6}, circumradius {:.6}",
        kind_name(&r.body),
        r.body.dim(),
        r.body.inradius(&grid),
        r.body.circumradius(&grid)
    );
    Ok(out)
}

/// Applies `op` at weights 0.1, 0.05, ... until `d_H(b, op(b)) < epsilon`.
fn within_budget(
    b: &Body,
    epsilon: f64,
    grid: &DirectionGrid,
    op: fn(&Body, f64) -> convex_rounder::Result<Body>,
) -> Result<(Body, f64, usize), Failure> {
    let mut reg = RoundingConfig::default().reg_weight;
    let mut achieved = f64::INFINITY;
    for halvings in 0..=MAX_HALVINGS {
        let r = op(b, reg)?;
        achieved = hausdorff(b, &r, grid)?;
        if achieved < epsilon {
            return Ok((r, reg, halvings));
        }
        reg *= 0.5;
    }
    Err(Error::Budget {
        epsilon,
        achieved,
        halvings: MAX_HALVINGS,
    }
    .into())
}

pub fn round(g: &Global, a: &RoundArgs) -> Result<Outcome, Failure> {
    if !(a.epsilon > 0.0 && a.epsilon.is_finite()) {
        return Err(Failure::input(format!("--epsilon must be positive, got {}", a.epsilon)));
    }
    let input = load(&a.body)?;
    input.check_interior()?;
    let dim = input.dim();
    let grid = g.grid(dim)?;
    let mut out = Outcome::new("");
    let (body, trace) = match a.algorithm {
        Algorithm::Strictify | Algorithm::Smoothify => {
            let op = if a.algorithm == Algorithm::Strictify {
                strictify_with
            } else {
                smoothify_with
            };
            let (body, reg, halvings) = match a.reg_weight {
                Some(w) => (op(&input, w)?, w, 0),
                None => within_budget(&input, a.epsilon, &grid, op)?,
            };
            out.set("reg_weight", reg);
            out.set("halvings", halvings);
            (body, None)
        }
        Algorithm::Asplund => {
            let cfg = RoundingConfig {
                epsilon: a.epsilon,
                reg_weight: a.reg_weight.unwrap_or(RoundingConfig::default().reg_weight),
                tol: g.tol,
                max_iter: a.max_iter,
                grid: g.spec(dim),
                table_factor: a.table_factor,
            };
            let res = asplund_round(&input, &cfg)?;
            let t = &res.trace;
            out.set("reg_weight", t.reg_weight);
            out.set("halvings", t.halvings);
            out.set("iterations", t.steps.len().saturating_sub(1));
            out.set("converged", t.converged);
            out.set("final_gap", t.final_gap);
            out.set("flags_ok", t.all_flags_ok());
            out.set("gaps_non_increasing", t.gaps_non_increasing(0.0));
            out.set("empirical_rate", t.empirical_rate);
            out.set("d_inner_outer", hausdorff(&res.inner, &res.outer, &grid)?);
            (res.body, Some(res.trace))
        }
    };
    let strict = a.cert.run(&body, Kind::Strict, g.seed)?;
    let smooth = a.cert.run(&body, Kind::Smooth, g.seed)?;
    let d = hausdorff(&input, &body, &grid)?;
    let certified = match a.algorithm {
        Algorithm::Strictify => strict.pass,
        Algorithm::Smoothify => smooth.pass,
        Algorithm::Asplund => strict.pass && smooth.pass,
    };
    let within = d < a.epsilon;

    write_atomic(&a.out, &(body_to_json(&body)? + "\n"))?;
    out.artifacts.push(path_string(&a.out));
    if let Some(t) = &trace {
        let path = a.trace.clone().unwrap_or_else(|| a.out.with_extension("trace.csv"));
        write_atomic(&path, &t.to_csv())?;
        out.artifacts.push(path_string(&path));
    }

    out.set("algorithm", format!("{:?}", a.algorithm).to_lowercase());
    out.set("hausdorff", d);
    out.set("epsilon", a.epsilon);
    out.set("within_budget", within);
    out.set("strict", report_value(&strict));
    out.set("smooth", report_value(&smooth));
    out.set("certified", certified);
    if !(certified && within) {
        out.code = EXIT_CERTIFICATE;
    }
    out.summary = format!(
        "{}: d_H = {d:.6e} (budget {}), strict {:.3e} [{}], smooth {:.3e} [{}]",
        format!("{:?}", a.algorithm).to_lowercase(),
        a.epsilon,
        strict.value,
        if strict.pass { "pass" } else { "fail" },
        smooth.value,
        if smooth.pass { "pass" } else { "fail" },
    );
    Ok(out)
}

pub fn cert(g: &Global, a: &CertArgs) -> Result<Outcome, Failure> {
    let body = load(&a.body)?;
    let r = a.cert.run(&body, a.kind, g.seed)?;
    let mut out = Outcome::new(format!(
        "{:?} certificate: value {:.6e}, threshold {:.1e}, {}",
        a.kind,
        r.value,
        r.threshold,
        if r.pass { "pass" } else { "fail" }
    ));
    if let Some(p) = &a.csv {
        write_atomic(p, &format!("{}\n{}\n", CertificateReport::CSV_HEADER, r.csv_row()))?;
        out.artifacts.push(path_string(p));
    }
    if !r.pass {
        out.code = EXIT_CERTIFICATE;
    }
    out.set("report", report_value(&r));
    Ok(out)
}

pub fn dual(g: &Global, a: &DualArgs) -> Result<Outcome, Failure> {
    let body = load(&a.body)?;
    let grid = g.grid(body.dim())?;
    let mut out = Outcome::new("");
    out.set("op", format!("{:?}", a.op).to_lowercase());
    match a.op {
        DualOp::Polar => {
            let p = body.polar()?;
            describe(&mut out, &p, &grid);
            emit_body(&mut out, &p, a.out.as_deref())?;
            out.summary = format!(
                "polar: {} with inradius {:.6}, circumradius {:.6}",
                kind_name(&p),
                p.inradius(&grid),
                p.circumradius(&grid)
            );
        }
        DualOp::Fenchel => {
            let f = QuadGauge::squared_gauge(body, a.weight)?.fenchel()?;
            let text = energy_to_json(&f)?;
            match &a.out {
                Some(p) => {
                    write_atomic(p, &(text + "\n"))?;
                    out.artifacts.push(path_string(p));
                }
                None => out.set("energy", json_value(&text)),
            }
            out.set("dim", f.dim());
            out.summary = format!("conjugate energy in dimension {}", f.dim());
        }
    }
    Ok(out)
}

pub fn dist(g: &Global, a: &DistArgs) -> Result<Outcome, Failure> {
    let (x, y) = (load(&a.a)?, load(&a.b)?);
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        }
        .into());
    }
    let grid = g.grid(x.dim())?;
    let d = hausdorff(&x, &y, &grid)?;
    let mut out = Outcome::new(format!("d_H = {d:.12}"));
    out.set("hausdorff", d);
    out.set("grid", json!({ "n": grid.len(), "seed": grid.seed() }));
    Ok(out)
}

pub fn export(g: &Global, a: &ExportArgs) -> Result<Outcome, Failure> {
    let mut bodies = Vec::with_capacity(a.bodies.len());
    for p in &a.bodies {
        let b = load(p)?;
        if b.dim() != 2 {
            return Err(Failure {
                code: EXIT_INPUT,
                kind: "dimension",
                message: format!("{}: svg export needs a planar body, got dimension {}", p.display(), b.dim()),
            });
        }
        bodies.push((path_string(p), b));
    }
    let grid = g.grid(2)?;
    write_atomic(&a.out, &svg::render(&bodies, &grid, a.size))?;
    let mut out = Outcome::new(format!("{} curves written to {}", bodies.len(), a.out.display()));
    out.artifacts.push(path_string(&a.out));
    out.set("curves", bodies.len());
    Ok(out)
}

