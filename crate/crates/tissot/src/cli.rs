//! Command-line surface.
//!
//! Subcommands: `analyze`, `field`, `render`, `report`, `chebyshev`,
//! `darboux`, `qc`, `grotzsch`. Angles on the command line and in config
//! files are degrees; everything internal is radians. Exit status: 0 on
//! success, 1 on usage/config errors, 2 on domain or convergence errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::distortion::{distortion_report, ellipse_boundary_check, fit_darboux_conic};
use crate::error::{Error, Result};
use crate::field::{GridSpec, RegionConfig, RegionSpec, ScalarField};
use crate::indicatrix::{distortion_ellipse, jacobian, DiffMode};
use crate::projection::{
    tissot_projection, PlanePoint, ProjectionConfig, ProjectionDef, ProjectionKind,
};
use crate::qc::{characteristics, sup_dilatation, GrotzschOptions, PlanarMap, PlanarMapConfig};
use crate::render::{export_csv, fmt_fixed, render_svg, sample_field, GraticuleSpec};
use crate::solver::{chebyshev_solve, SolverOptions};
use crate::surface::{normalize_lon, GeoPoint, Surface, SurfaceConfig};

#[derive(Parser)]
#[command(
    name = "tissot",
    version,
    about = "Map-projection distortion analysis",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the distortion ellipse at one point
    Analyze(AnalyzeArgs),
    /// Emit an indicatrix field as CSV
    Field(FieldArgs),
    /// Emit an indicatrix field as SVG
    Render(FieldArgs),
    /// Distortion summary over a region (JSON)
    Report(ReportArgs),
    /// Solve the constant-boundary magnification problem over a region
    Chebyshev(ChebyshevArgs),
    /// Fit the quadratic scale-error model over a region
    Darboux(DarbouxArgs),
    /// Dilatation analysis of a planar map
    Qc(QcArgs),
    /// Rectangle extremal experiment
    Grotzsch(GrotzschArgs),
}

#[derive(Args)]
struct ProjOpts {
    /// Catalog kind (plate_carree | mercator | sinusoidal | cassini |
    /// stereographic | tissot) or a projection config JSON path
    #[arg(long)]
    projection: String,
    /// sphere | sphere:<radius> | ellipsoid:<inv_f> | ellipsoid:<radius>:<inv_f> | JSON path
    #[arg(long, default_value = "sphere")]
    surface: String,
    /// Central latitude in degrees (mean parallel)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center_lat: f64,
    /// Central longitude in degrees (mean meridian)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center_lon: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    proj: ProjOpts,
    /// Latitude of the probe point (degrees)
    #[arg(long, allow_negative_numbers = true)]
    lat: f64,
    /// Longitude of the probe point (degrees)
    #[arg(long, allow_negative_numbers = true)]
    lon: f64,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    proj: ProjOpts,
    /// Graticule as lat0:lat1:step,lon0:lon1:step (degrees)
    #[arg(long, default_value = "-60:60:15,-180:180:15", allow_hyphen_values = true)]
    grid: String,
    /// Sample the indicatrix at every k-th intersection
    #[arg(long, default_value_t = 1)]
    every: usize,
    /// Ellipse display scale (map lengths per unit scale factor)
    #[arg(long)]
    scale: Option<f64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    proj: ProjOpts,
    /// Region polygon JSON path
    #[arg(long)]
    region: PathBuf,
    /// Evaluation grid as lat0:lat1:step,lon0:lon1:step (degrees)
    #[arg(long, default_value = "-60:60:5,-180:180:5", allow_hyphen_values = true)]
    grid: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChebyshevArgs {
    /// Region polygon JSON path
    #[arg(long)]
    region: PathBuf,
    /// Surface spec (see --surface of analyze)
    #[arg(long, default_value = "sphere")]
    surface: String,
    /// Nodes per grid axis
    #[arg(long, default_value_t = 129)]
    n: usize,
    /// Dirichlet boundary value for the log-magnification
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    boundary: f64,
    /// Constant source term; defaults to the Gaussian curvature at the center
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Residual tolerance (infinity norm)
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the solved field as CSV (x,y,u,magnification)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DarbouxArgs {
    /// Projection to analyze (defaults to the minimal-distortion series)
    #[arg(long, default_value = "tissot")]
    projection: String,
    /// Surface spec
    #[arg(long, default_value = "sphere")]
    surface: String,
    /// Region polygon JSON path; its center is the expansion point
    #[arg(long)]
    region: PathBuf,
    /// Nodes per plane-grid axis
    #[arg(long, default_value_t = 65)]
    n: usize,
    /// Level for the boundary-constancy check (default: max fitted value in region)
    #[arg(long, allow_negative_numbers = true)]
    level: Option<f64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QcArgs {
    /// Planar map JSON path
    #[arg(long)]
    map: PathBuf,
    /// Plane grid as x0:x1:nx,y0:y1:ny (defaults to the map domain, 17x17)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GrotzschArgs {
    /// Source rectangle as WxH, e.g. 1x1
    #[arg(long)]
    src: String,
    /// Target rectangle as WxH, e.g. 2x1
    #[arg(long)]
    dst: String,
    /// Perturbed trials to sample (0 = affine map only)
    #[arg(long, default_value_t = 0)]
    trials: usize,
    /// Seed for the trial generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dilatation evaluation grid (per axis)
    #[arg(long, default_value_t = 33)]
    grid_n: usize,
}

/// Run the CLI against explicit arguments and streams; returns the exit code.
pub fn dispatch<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let mut argv = Vec::with_capacity(args.len() + 1);
    argv.push("tissot".to_string());
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{rendered}");
                return 0;
            }
            let _ = write!(err, "{rendered}");
            return 1;
        }
    };
    match run(cli.cmd, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::OutOfDomain(_)
                | Error::Degenerate(_)
                | Error::NonConvergence { .. }
                | Error::RankDeficient(_)
                | Error::EmptyRegion(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Entry point for the binary: real process arguments and streams.
pub fn dispatch_env() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch(&args, &mut stdout.lock(), &mut stderr.lock())
}

fn run<W: Write, E: Write>(cmd: Cmd, out: &mut W, err: &mut E) -> Result<()> {
    match cmd {
        Cmd::Analyze(a) => analyze(a, out, err),
        Cmd::Field(a) => field(a, out, err, Emit::Csv),
        Cmd::Render(a) => field(a, out, err, Emit::Svg),
        Cmd::Report(a) => report(a, out),
        Cmd::Chebyshev(a) => chebyshev(a, out, err),
        Cmd::Darboux(a) => darboux(a, out),
        Cmd::Qc(a) => qc(a, out),
        Cmd::Grotzsch(a) => grotzsch(a, out),
    }
}

fn f12(v: f64) -> String {
    fmt_fixed(v, 12)
}

fn analyze<W: Write, E: Write>(a: AnalyzeArgs, out: &mut W, err: &mut E) -> Result<()> {
    let def = load_projection(&a.proj)?;
    let p = GeoPoint::from_degrees(a.lat, a.lon)?;
    if def.kind() == ProjectionKind::Tissot {
        let m = normalize_lon(p.lon() - def.center().lon());
        if m.abs() > 15f64.to_radians() {
            let _ = writeln!(
                err,
                "note: point lies {:.1} deg from the mean meridian; the series \
                 truncation is only accurate in a narrow lune",
                m.to_degrees().abs()
            );
        }
    }
    let plane = def.project(p)?;
    let ind = distortion_ellipse(&def, p)?;
    writeln!(out, "projection = {}", def.id())?;
    writeln!(out, "lat_deg = {}", f12(a.lat))?;
    writeln!(out, "lon_deg = {}", f12(a.lon))?;
    writeln!(out, "x = {}", f12(plane.x))?;
    writeln!(out, "y = {}", f12(plane.y))?;
    writeln!(out, "a = {}", f12(ind.a))?;
    writeln!(out, "b = {}", f12(ind.b))?;
    writeln!(out, "theta_rad = {}", f12(ind.theta))?;
    writeln!(out, "omega_rad = {}", f12(ind.omega))?;
    writeln!(out, "area_scale = {}", f12(ind.area_scale))?;
    writeln!(out, "axes_unique = {}", ind.axes_unique)?;
    Ok(())
}

enum Emit {
    Csv,
    Svg,
}

fn field<W: Write, E: Write>(a: FieldArgs, out: &mut W, err: &mut E, emit: Emit) -> Result<()> {
    let def = load_projection(&a.proj)?;
    let mut grat = parse_graticule(&a.grid, a.every)?;
    if let Some(s) = a.scale {
        grat = grat.with_scale(s);
    }
    let sampled = sample_field(&def, &grat)?;
    let text = match emit {
        Emit::Csv => export_csv(&sampled.samples),
        Emit::Svg => render_svg(&sampled, &def, &grat)?,
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            let _ = writeln!(
                err,
                "wrote {}: {} samples, {} degenerate, {} skipped",
                path.display(),
                sampled.samples.len(),
                sampled.degenerate.len(),
                sampled.skipped
            );
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report<W: Write>(a: ReportArgs, out: &mut W) -> Result<()> {
    let def = load_projection(&a.proj)?;
    let region = load_region(&a.region)?;
    let grat = parse_graticule(&a.grid, 1)?;
    let grid = graticule_to_grid(&grat)?;
    let rep = distortion_report(&def, &region, grid)?;
    emit_json(&rep, a.out.as_deref(), out)
}

fn chebyshev<W: Write, E: Write>(a: ChebyshevArgs, out: &mut W, err: &mut E) -> Result<()> {
    let surface = parse_surface(&a.surface)?;
    let region_geo = load_region(&a.region)?;
    let center = region_geo.center();
    let center_lat = center[1];

    // local plane chart about the region center via the series projection
    let to_plane = |lon: f64, lat: f64| -> Result<PlanePoint> {
        let m = normalize_lon(lon - center[0]);
        tissot_projection(&surface, center_lat, GeoPoint::new(lat, m)?)
    };
    let mut vertices = Vec::with_capacity(region_geo.vertices().len());
    for v in region_geo.vertices() {
        let p = to_plane(v[0], v[1])?;
        vertices.push([p.x, p.y]);
    }
    let region = RegionSpec::new(vertices, [0.0, 0.0])?;
    let grid = padded_grid(&region, a.n)?;

    let k = a.k.unwrap_or_else(|| surface.gaussian_curvature(center_lat));
    let opts = SolverOptions {
        tol: a.tol,
        ..Default::default()
    };
    let sol = chebyshev_solve(&region, grid, |_, _| k, a.boundary, &opts)?;

    let (u_min, u_max) = sol.u.min_max().unwrap();
    let center_value = value_nearest(&sol.u, 0.0, 0.0);
    #[derive(serde::Serialize)]
    struct Summary {
        source_term: f64,
        boundary_value: f64,
        interior_nodes: usize,
        ring_nodes: usize,
        disconnected_nodes: usize,
        sweeps: usize,
        residual: f64,
        u_min: f64,
        u_max: f64,
        u_center: Option<f64>,
    }
    let summary = Summary {
        source_term: k,
        boundary_value: a.boundary,
        interior_nodes: sol.interior_nodes,
        ring_nodes: sol.ring_nodes,
        disconnected_nodes: sol.disconnected_nodes,
        sweeps: sol.sweeps,
        residual: sol.residual,
        u_min,
        u_max,
        u_center: center_value,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&summary).unwrap())?;
    if let Some(path) = &a.out {
        let mut csv = String::from("x,y,u,magnification\n");
        for (i, j, x, y, u) in sol.u.iter_set() {
            let mag = sol.magnification.get(i, j).unwrap();
            csv.push_str(&format!(
                "{},{},{},{}\n",
                f12(x),
                f12(y),
                f12(u),
                f12(mag)
            ));
        }
        std::fs::write(path, csv)?;
        let _ = writeln!(err, "wrote {}", path.display());
    }
    Ok(())
}

fn darboux<W: Write>(a: DarbouxArgs, out: &mut W) -> Result<()> {
    let region_geo = load_region(&a.region)?;
    let center = region_geo.center();
    let def = load_projection(&ProjOpts {
        projection: a.projection.clone(),
        surface: a.surface.clone(),
        center_lat: center[1].to_degrees(),
        center_lon: center[0].to_degrees(),
    })?;
    let c_geo = GeoPoint::new(center[1], center[0])?;
    let origin = def.project(c_geo)?;

    // region polygon in plane coordinates about the projected center
    let mut vertices = Vec::with_capacity(region_geo.vertices().len());
    for v in region_geo.vertices() {
        let p = def.project(GeoPoint::new(v[1], v[0])?)?;
        vertices.push([p.x - origin.x, p.y - origin.y]);
    }
    let region = RegionSpec::new(vertices, [0.0, 0.0])?;
    let grid = padded_grid(&region, a.n)?;

    // scale error as a function of plane position, by local inversion
    let mut lam = ScalarField::empty(grid);
    let mut solved = 0usize;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let (x, y) = (grid.x(i), grid.y(j));
            if !region.contains(x, y) {
                continue;
            }
            if let Some(p) = invert_projection(&def, c_geo, x + origin.x, y + origin.y) {
                if let Ok(ind) = distortion_ellipse(&def, p) {
                    lam.set(i, j, (ind.a * ind.b).sqrt() - 1.0);
                    solved += 1;
                }
            }
        }
    }
    if solved == 0 {
        return Err(Error::EmptyRegion(
            "no plane node could be matched to a surface point".into(),
        ));
    }
    let r1 = def.surface().meridian_curvature_radius(c_geo.lat());
    let r2 = def.surface().prime_vertical_radius(c_geo.lat());
    let conic = fit_darboux_conic(&lam, r1, r2)?;

    let level = a.level.unwrap_or_else(|| {
        let mut best = 0.0f64;
        for (_, _, x, y, _) in lam.iter_set() {
            best = best.max(conic.eval(x, y));
        }
        best
    });
    let boundary = if level > 0.0 {
        Some(ellipse_boundary_check(&conic, level)?)
    } else {
        None
    };

    #[derive(serde::Serialize)]
    struct Report {
        projection: String,
        diff_coef: f64,
        cross_coef: f64,
        radial_coef: f64,
        meridian_radius: f64,
        prime_vertical_radius: f64,
        nodes_used: usize,
        level: f64,
        boundary: Option<crate::distortion::BoundaryReport>,
    }
    let rep = Report {
        projection: def.id().to_string(),
        diff_coef: conic.diff_coef,
        cross_coef: conic.cross_coef,
        radial_coef: conic.radial_coef,
        meridian_radius: r1,
        prime_vertical_radius: r2,
        nodes_used: solved,
        level,
        boundary,
    };
    emit_json(&rep, a.out.as_deref(), out)
}

fn qc<W: Write>(a: QcArgs, out: &mut W) -> Result<()> {
    let map = load_planar_map(&a.map)?;
    let grid = match &a.grid {
        Some(spec) => parse_plane_grid(spec)?,
        None => map.domain().grid(17, 17)?,
    };
    let sup = sup_dilatation(&map, grid)?;
    let d = map.domain();
    let c = characteristics(&map, 0.5 * (d.x0 + d.x1), 0.5 * (d.y0 + d.y1))?;
    #[derive(serde::Serialize)]
    struct Report {
        sup_dilatation: f64,
        p_center: f64,
        theta_center: f64,
        center_unique: bool,
        grid_nx: usize,
        grid_ny: usize,
    }
    let rep = Report {
        sup_dilatation: sup,
        p_center: c.p,
        theta_center: c.theta,
        center_unique: c.unique,
        grid_nx: grid.nx(),
        grid_ny: grid.ny(),
    };
    emit_json(&rep, a.out.as_deref(), out)
}

fn grotzsch<W: Write>(a: GrotzschArgs, out: &mut W) -> Result<()> {
    let (sw, sh) = parse_rect(&a.src)?;
    let (dw, dh) = parse_rect(&a.dst)?;
    let pair = crate::qc::RectanglePair::new(sw, sh, dw, dh)?;
    let (_, k) = crate::qc::grotzsch_affine(&pair);
    writeln!(out, "K = {}", f12(k))?;
    if a.trials > 0 {
        let rep = crate::qc::grotzsch_experiment(
            &pair,
            &GrotzschOptions {
                trials: a.trials,
                seed: a.seed,
                grid_n: a.grid_n,
                ..Default::default()
            },
        )?;
        writeln!(out, "trials = {}", rep.trials)?;
        writeln!(out, "accepted = {}", rep.accepted)?;
        writeln!(out, "rejected = {}", rep.rejected)?;
        if let Some(min) = rep.min_sup_dilatation {
            writeln!(out, "min_sup_dilatation = {}", f12(min))?;
            writeln!(out, "min_trial = {}", rep.min_trial.unwrap())?;
        }
        writeln!(out, "seed = {}", rep.seed)?;
    }
    Ok(())
}

// ---- shared plumbing ----

fn looks_like_path(spec: &str) -> bool {
    spec.ends_with(".json") || Path::new(spec).exists()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn load_projection(opts: &ProjOpts) -> Result<ProjectionDef> {
    if looks_like_path(&opts.projection) {
        let cfg: ProjectionConfig = read_json(Path::new(&opts.projection))?;
        return ProjectionDef::from_config(&cfg);
    }
    let Some(kind) = ProjectionKind::from_name(&opts.projection) else {
        return Err(Error::Config(format!(
            "unknown projection `{}` (not a catalog kind or a config file)",
            opts.projection
        )));
    };
    if kind == ProjectionKind::Custom {
        return Err(Error::Config(
            "custom projections need a JSON config with expressions".into(),
        ));
    }
    let surface = parse_surface(&opts.surface)?;
    let center = GeoPoint::from_degrees(opts.center_lat, opts.center_lon)?;
    ProjectionDef::catalog(kind, surface, center)
}

fn parse_surface(spec: &str) -> Result<Surface> {
    if looks_like_path(spec) {
        let cfg: SurfaceConfig = read_json(Path::new(spec))?;
        return Surface::from_config(&cfg);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Config(format!("bad number `{s}` in surface spec `{spec}`")))
    };
    match parts.as_slice() {
        ["sphere"] => Ok(Surface::unit_sphere()),
        ["sphere", r] => Surface::sphere(num(r)?),
        ["ellipsoid", inv_f] => Surface::ellipsoid(1.0, 1.0 / num(inv_f)?),
        ["ellipsoid", r, inv_f] => Surface::ellipsoid(num(r)?, 1.0 / num(inv_f)?),
        _ => Err(Error::Config(format!("unrecognized surface spec `{spec}`"))),
    }
}

fn load_region(path: &Path) -> Result<RegionSpec> {
    let cfg: RegionConfig = read_json(path)?;
    RegionSpec::from_geo_config(&cfg)
}

fn load_planar_map(path: &Path) -> Result<PlanarMap> {
    let cfg: PlanarMapConfig = read_json(path)?;
    PlanarMap::from_config(&cfg)
}

fn parse_graticule(spec: &str, every: usize) -> Result<GraticuleSpec> {
    let err = || Error::Config(format!("bad grid `{spec}`; expected lat0:lat1:step,lon0:lon1:step"));
    let (lat, lon) = spec.split_once(',').ok_or_else(err)?;
    let triple = |s: &str| -> Result<(f64, f64, f64)> {
        let v: Vec<&str> = s.split(':').collect();
        if v.len() != 3 {
            return Err(err());
        }
        let p = |t: &str| t.parse::<f64>().map_err(|_| err());
        Ok((p(v[0])?, p(v[1])?, p(v[2])?))
    };
    let (lat0, lat1, lat_step) = triple(lat)?;
    let (lon0, lon1, lon_step) = triple(lon)?;
    GraticuleSpec::new((lat0, lat1), lat_step, (lon0, lon1), lon_step, every)
}

fn graticule_to_grid(grat: &GraticuleSpec) -> Result<GridSpec> {
    let lats = grat.lat_values_deg();
    let lons = grat.lon_values_deg();
    if lats.len() < 2 || lons.len() < 2 {
        return Err(Error::Config(
            "report grids need at least 2 values per axis".into(),
        ));
    }
    GridSpec::new(
        lons[0].to_radians(),
        lons[lons.len() - 1].to_radians(),
        lons.len(),
        lats[0].to_radians(),
        lats[lats.len() - 1].to_radians(),
        lats.len(),
    )
}

fn parse_plane_grid(spec: &str) -> Result<GridSpec> {
    let err = || Error::Config(format!("bad grid `{spec}`; expected x0:x1:nx,y0:y1:ny"));
    let (xs, ys) = spec.split_once(',').ok_or_else(err)?;
    let triple = |s: &str| -> Result<(f64, f64, usize)> {
        let v: Vec<&str> = s.split(':').collect();
        if v.len() != 3 {
            return Err(err());
        }
        Ok((
            v[0].parse().map_err(|_| err())?,
            v[1].parse().map_err(|_| err())?,
            v[2].parse().map_err(|_| err())?,
        ))
    };
    let (x0, x1, nx) = triple(xs)?;
    let (y0, y1, ny) = triple(ys)?;
    GridSpec::new(x0, x1, nx, y0, y1, ny)
}

fn parse_rect(spec: &str) -> Result<(f64, f64)> {
    let err = || Error::Config(format!("bad rectangle `{spec}`; expected WxH like 2x1"));
    let (w, h) = spec.split_once('x').ok_or_else(err)?;
    Ok((w.parse().map_err(|_| err())?, h.parse().map_err(|_| err())?))
}

/// Square grid covering the region bounding box with a 3% margin.
fn padded_grid(region: &RegionSpec, n: usize) -> Result<GridSpec> {
    let (lo, hi) = region.bbox();
    let pad = 0.03 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    GridSpec::new(lo[0] - pad, hi[0] + pad, n, lo[1] - pad, hi[1] + pad, n)
}

fn value_nearest(field: &ScalarField, x: f64, y: f64) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for (_, _, nx, ny, v) in field.iter_set() {
        let d = (nx - x).hypot(ny - y);
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Newton solve for the surface point mapping to `(tx, ty)`; `None` when the
/// iteration leaves the domain or fails to converge.
fn invert_projection(def: &ProjectionDef, start: GeoPoint, tx: f64, ty: f64) -> Option<GeoPoint> {
    let mut lat = start.lat();
    let mut lon = start.lon();
    let scale = def.surface().equatorial_radius();
    for _ in 0..30 {
        let p = GeoPoint::new(lat, lon).ok()?;
        let here = def.project(p).ok()?;
        let (fx, fy) = (here.x - tx, here.y - ty);
        if fx.hypot(fy) < 1e-13 * scale.max(1.0) {
            return Some(p);
        }
        let j = jacobian(def, p, DiffMode::Auto).ok()?;
        let det = j.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dl = (fx * j.dydm - fy * j.dxdm) / det;
        let dm = (fy * j.dxdl - fx * j.dydl) / det;
        lat -= dl;
        lon -= dm;
        if !lat.is_finite() || !lon.is_finite() || lat.abs() > std::f64::consts::FRAC_PI_2 {
            return None;
        }
    }
    None
}

fn emit_json<T: serde::Serialize, W: Write>(
    value: &T,
    path: Option<&Path>,
    out: &mut W,
) -> Result<()> {
    let text = serde_json::to_string_pretty(value).unwrap();
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}
