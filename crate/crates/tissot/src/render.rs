//! Graticule sampling, distortion-ellipse field assembly, and CSV/SVG
//! emission.
//!
//! All numeric output goes through one fixed-precision formatter so identical
//! inputs produce byte-identical files.

use crate::error::{Error, Result};
use crate::indicatrix::{distortion_ellipse, Indicatrix};
use crate::projection::{PlanePoint, ProjectionDef};
use crate::surface::GeoPoint;

/// Graticule layout: degree ranges and steps for parallels and meridians,
/// indicatrix sampling density (`every` k-th intersection), and the ellipse
/// display scale (`None` = 0.25x the smaller graticule step projected at the
/// central point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraticuleSpec {
    pub lat_min_deg: f64,
    pub lat_max_deg: f64,
    pub lat_step_deg: f64,
    pub lon_min_deg: f64,
    pub lon_max_deg: f64,
    pub lon_step_deg: f64,
    pub every: usize,
    pub ellipse_scale: Option<f64>,
}

impl GraticuleSpec {
    pub fn new(
        lat_range_deg: (f64, f64),
        lat_step_deg: f64,
        lon_range_deg: (f64, f64),
        lon_step_deg: f64,
        every: usize,
    ) -> Result<GraticuleSpec> {
        let (lat0, lat1) = lat_range_deg;
        let (lon0, lon1) = lon_range_deg;
        if !(lat_step_deg > 0.0) || !(lon_step_deg > 0.0) {
            return Err(Error::InvalidArgument("graticule steps must be positive".into()));
        }
        if !(-90.0..=90.0).contains(&lat0)
            || !(-90.0..=90.0).contains(&lat1)
            || !(-180.0..=180.0).contains(&lon0)
            || !(-180.0..=180.0).contains(&lon1)
            || lat0 > lat1
            || lon0 > lon1
        {
            return Err(Error::InvalidArgument(format!(
                "graticule ranges must be ordered and within the globe, got \
                 lat [{lat0}, {lat1}], lon [{lon0}, {lon1}]"
            )));
        }
        if every < 1 {
            return Err(Error::InvalidArgument("`every` must be at least 1".into()));
        }
        Ok(GraticuleSpec {
            lat_min_deg: lat0,
            lat_max_deg: lat1,
            lat_step_deg,
            lon_min_deg: lon0,
            lon_max_deg: lon1,
            lon_step_deg,
            every,
            ellipse_scale: None,
        })
    }

    pub fn with_scale(mut self, scale: f64) -> GraticuleSpec {
        self.ellipse_scale = Some(scale);
        self
    }

    pub fn lat_values_deg(&self) -> Vec<f64> {
        steps(self.lat_min_deg, self.lat_max_deg, self.lat_step_deg)
    }

    pub fn lon_values_deg(&self) -> Vec<f64> {
        steps(self.lon_min_deg, self.lon_max_deg, self.lon_step_deg)
    }
}

fn steps(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| min + step * k as f64).collect()
}

/// One graticule intersection with its projected position and indicatrix.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub geo: GeoPoint,
    pub plane: PlanePoint,
    pub ind: Indicatrix,
}

/// A sampled indicatrix field. `degenerate` holds intersections that project
/// fine but have no usable indicatrix (poles, vanishing determinant);
/// `skipped` counts intersections outside the projection domain.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub samples: Vec<FieldSample>,
    pub degenerate: Vec<(GeoPoint, PlanePoint)>,
    pub skipped: usize,
}

/// Sample the indicatrix at every `every`-th graticule intersection,
/// row-major (latitude outer, longitude inner), ascending.
pub fn sample_field(def: &ProjectionDef, grat: &GraticuleSpec) -> Result<SampledField> {
    let lats = grat.lat_values_deg();
    let lons = grat.lon_values_deg();
    let mut samples = Vec::new();
    let mut degenerate = Vec::new();
    let mut skipped = 0usize;
    for (j, lat) in lats.iter().enumerate() {
        if j % grat.every != 0 {
            continue;
        }
        for (i, lon) in lons.iter().enumerate() {
            if i % grat.every != 0 {
                continue;
            }
            let geo = match GeoPoint::from_degrees(*lat, *lon) {
                Ok(g) => g,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let plane = match def.project(geo) {
                Ok(p) => p,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            match distortion_ellipse(def, geo) {
                Ok(ind) => samples.push(FieldSample { geo, plane, ind }),
                Err(Error::Degenerate(_)) => degenerate.push((geo, plane)),
                Err(_) => skipped += 1,
            }
        }
    }
    if samples.is_empty() && degenerate.is_empty() {
        return Err(Error::EmptyRegion(
            "no graticule intersection lies in the projection domain".into(),
        ));
    }
    Ok(SampledField {
        samples,
        degenerate,
        skipped,
    })
}

/// Fixed-precision decimal formatting shared by all emitters; negative zero
/// and values rounding to it come out unsigned.
pub fn fmt_fixed(v: f64, places: usize) -> String {
    let s = format!("{:.*}", places, v);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn f12(v: f64) -> String {
    fmt_fixed(v, 12)
}

fn f6(v: f64) -> String {
    fmt_fixed(v, 6)
}

/// CSV with header `lat_deg,lon_deg,x,y,a,b,theta_rad,omega_rad,area_scale`,
/// one row per sample, 12 decimal places, `\n` line endings.
pub fn export_csv(samples: &[FieldSample]) -> String {
    let mut out = String::from("lat_deg,lon_deg,x,y,a,b,theta_rad,omega_rad,area_scale\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            f12(s.geo.lat_deg()),
            f12(s.geo.lon_deg()),
            f12(s.plane.x),
            f12(s.plane.y),
            f12(s.ind.a),
            f12(s.ind.b),
            f12(s.ind.theta),
            f12(s.ind.omega),
            f12(s.ind.area_scale)
        ));
    }
    out
}

/// Default display scale: 0.25x the smaller graticule step projected at the
/// central point, with a plain fallback if the center cannot be projected.
fn default_ellipse_scale(def: &ProjectionDef, grat: &GraticuleSpec) -> f64 {
    let c = def.center();
    let dlat = grat.lat_step_deg.to_radians();
    let dlon = grat.lon_step_deg.to_radians();
    let fallback = 0.25 * dlat.min(dlon) * def.surface().equatorial_radius();
    let Ok(pc) = def.project(c) else {
        return fallback;
    };
    let towards = |lat: f64, lon: f64| -> Option<f64> {
        let lat = lat.clamp(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        let g = GeoPoint::new(lat, lon).ok()?;
        let p = def.project(g).ok()?;
        Some((p.x - pc.x).hypot(p.y - pc.y))
    };
    match (
        towards(c.lat() + dlat, c.lon()),
        towards(c.lat(), c.lon() + dlon),
    ) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => 0.25 * a.min(b),
        _ => fallback,
    }
}

/// Render the field as a standalone SVG document: graticule polylines
/// (sampled at 1 degree or finer and projected) underneath one ellipse per
/// sample; degenerate intersections come out as cross markers. The viewBox
/// covers the sample extent plus a 5% margin. Byte-stable for equal inputs.
pub fn render_svg(
    field: &SampledField,
    def: &ProjectionDef,
    grat: &GraticuleSpec,
) -> Result<String> {
    if field.samples.is_empty() && field.degenerate.is_empty() {
        return Err(Error::EmptyRegion("nothing to render".into()));
    }
    let scale = grat
        .ellipse_scale
        .unwrap_or_else(|| default_ellipse_scale(def, grat));

    // screen coordinates: y flipped so north points up
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut cover = |x: f64, y: f64| {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(-y);
        max_y = max_y.max(-y);
    };
    for s in &field.samples {
        cover(s.plane.x, s.plane.y);
    }
    for (_, p) in &field.degenerate {
        cover(p.x, p.y);
    }
    let pad_floor = (2.5 * scale).max(1e-3);
    let mut w = max_x - min_x;
    let mut h = max_y - min_y;
    if w < pad_floor {
        min_x -= 0.5 * (pad_floor - w);
        w = pad_floor;
    }
    if h < pad_floor {
        min_y -= 0.5 * (pad_floor - h);
        h = pad_floor;
    }
    let margin = 0.05 * w.max(h);
    min_x -= margin;
    min_y -= margin;
    w += 2.0 * margin;
    h += 2.0 * margin;
    let stroke = 0.004 * w.max(h);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        f6(min_x),
        f6(min_y),
        f6(w),
        f6(h)
    ));

    // graticule
    svg.push_str(&format!(
        "  <g fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"{}\">\n",
        f6(stroke * 0.6)
    ));
    let fine_lat = grat.lat_step_deg.min(1.0);
    let fine_lon = grat.lon_step_deg.min(1.0);
    for lon in grat.lon_values_deg() {
        let pts = polyline_points(def, steps(grat.lat_min_deg, grat.lat_max_deg, fine_lat), |lat| {
            (lat, lon)
        });
        push_polylines(&mut svg, &pts);
    }
    for lat in grat.lat_values_deg() {
        let pts = polyline_points(def, steps(grat.lon_min_deg, grat.lon_max_deg, fine_lon), |lon| {
            (lat, lon)
        });
        push_polylines(&mut svg, &pts);
    }
    svg.push_str("  </g>\n");

    // indicatrix ellipses
    svg.push_str(&format!(
        "  <g fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"{}\">\n",
        f6(stroke)
    ));
    for s in &field.samples {
        let cx = s.plane.x;
        let cy = -s.plane.y;
        // map-plane rotation is counterclockwise; screen y points down
        let rot_deg = -s.ind.theta.to_degrees();
        svg.push_str(&format!(
            "    <ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {} {})\"/>\n",
            f6(cx),
            f6(cy),
            f6(scale * s.ind.a),
            f6(scale * s.ind.b),
            f6(rot_deg),
            f6(cx),
            f6(cy)
        ));
    }
    svg.push_str("  </g>\n");

    // degenerate intersections as crosses
    svg.push_str(&format!(
        "  <g stroke=\"#c23a2f\" stroke-width=\"{}\">\n",
        f6(stroke)
    ));
    for (_, p) in &field.degenerate {
        let (cx, cy) = (p.x, -p.y);
        let r = 0.5 * scale;
        svg.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            f6(cx - r),
            f6(cy - r),
            f6(cx + r),
            f6(cy + r)
        ));
        svg.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            f6(cx - r),
            f6(cy + r),
            f6(cx + r),
            f6(cy - r)
        ));
    }
    svg.push_str("  </g>\n</svg>\n");
    Ok(svg)
}

/// Project a parameterized run of graticule points; domain breaks split the
/// run into separate polylines.
fn polyline_points(
    def: &ProjectionDef,
    params: Vec<f64>,
    to_geo: impl Fn(f64) -> (f64, f64),
) -> Vec<Vec<(f64, f64)>> {
    let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for t in params {
        let (lat, lon) = to_geo(t);
        let projected = GeoPoint::from_degrees(lat, lon)
            .ok()
            .and_then(|g| def.project(g).ok());
        match projected {
            Some(p) => current.push((p.x, -p.y)),
            None => {
                if current.len() >= 2 {
                    runs.push(std::mem::take(&mut current));
                } else {
                    current.clear();
                }
            }
        }
    }
    if current.len() >= 2 {
        runs.push(current);
    }
    runs
}

fn push_polylines(svg: &mut String, runs: &[Vec<(f64, f64)>]) {
    for run in runs {
        let pts: Vec<String> = run
            .iter()
            .map(|(x, y)| format!("{},{}", f6(*x), f6(*y)))
            .collect();
        svg.push_str(&format!("    <polyline points=\"{}\"/>\n", pts.join(" ")));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::ProjectionKind;
    use crate::surface::Surface;

    fn unit(kind: ProjectionKind) -> ProjectionDef {
        ProjectionDef::catalog(kind, Surface::unit_sphere(), GeoPoint::new(0.0, 0.0).unwrap())
            .unwrap()
    }

    fn grat(
        lat: (f64, f64),
        lat_step: f64,
        lon: (f64, f64),
        lon_step: f64,
        every: usize,
    ) -> GraticuleSpec {
        GraticuleSpec::new(lat, lat_step, lon, lon_step, every).unwrap()
    }

    #[test]
    fn sample_counts() {
        let def = unit(ProjectionKind::PlateCarree);
        let g = grat((-60.0, 60.0), 30.0, (-90.0, 90.0), 30.0, 1);
        let f = sample_field(&def, &g).unwrap();
        assert_eq!(f.samples.len(), 35);
        assert_eq!(f.skipped, 0);
        assert!(f.degenerate.is_empty());

        // sparse sampling: lat rows 0,2,4 x lon cols 0,2,4,6
        let g = grat((-60.0, 60.0), 30.0, (-90.0, 90.0), 30.0, 2);
        let f = sample_field(&def, &g).unwrap();
        assert_eq!(f.samples.len(), 12);
    }

    #[test]
    fn polar_rows_are_skipped_under_mercator() {
        let def = unit(ProjectionKind::Mercator);
        let g = grat((-90.0, 90.0), 30.0, (-60.0, 60.0), 30.0, 1);
        let f = sample_field(&def, &g).unwrap();
        assert_eq!(f.skipped, 2 * 5);
        assert_eq!(f.samples.len(), 5 * 5);
    }

    #[test]
    fn poles_become_degenerate_crosses_under_plate_carree() {
        let def = unit(ProjectionKind::PlateCarree);
        let g = grat((-90.0, 90.0), 45.0, (0.0, 90.0), 45.0, 1);
        let f = sample_field(&def, &g).unwrap();
        assert_eq!(f.degenerate.len(), 2 * 3); // both polar rows project fine
        assert_eq!(f.samples.len(), 3 * 3);
        let svg = render_svg(&f, &def, &g).unwrap();
        assert_eq!(svg.matches("<ellipse ").count(), f.samples.len());
        assert_eq!(svg.matches("<line ").count(), 2 * f.degenerate.len());
    }

    #[test]
    fn csv_schema_and_values() {
        assert_eq!(
            export_csv(&[]),
            "lat_deg,lon_deg,x,y,a,b,theta_rad,omega_rad,area_scale\n"
        );
        let def = unit(ProjectionKind::PlateCarree);
        let g = grat((-60.0, 60.0), 30.0, (-90.0, 90.0), 30.0, 1);
        let f = sample_field(&def, &g).unwrap();
        let csv = export_csv(&f.samples);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 36);
        // equator row: a = b = 1 to full precision
        let equator: Vec<&&str> = lines
            .iter()
            .filter(|l| l.starts_with("0.000000000000,"))
            .collect();
        assert_eq!(equator.len(), 7);
        for row in equator {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols[4], "1.000000000000");
            assert_eq!(cols[5], "1.000000000000");
        }
    }

    #[test]
    fn single_sample_renders_a_circle() {
        let def = unit(ProjectionKind::PlateCarree);
        let g = grat((0.0, 0.0), 10.0, (0.0, 0.0), 10.0, 1).with_scale(0.1);
        let f = sample_field(&def, &g).unwrap();
        assert_eq!(f.samples.len(), 1);
        let svg = render_svg(&f, &def, &g).unwrap();
        assert!(svg.contains("rx=\"0.100000\""));
        assert!(svg.contains("ry=\"0.100000\""));
    }

    #[test]
    fn svg_is_deterministic_for_equal_inputs() {
        let def = unit(ProjectionKind::Sinusoidal);
        let g = grat((-45.0, 45.0), 15.0, (-60.0, 60.0), 15.0, 1);
        let a = render_svg(&sample_field(&def, &g).unwrap(), &def, &g).unwrap();
        let b = render_svg(&sample_field(&def, &g).unwrap(), &def, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn formatter_normalizes_negative_zero() {
        assert_eq!(fmt_fixed(-0.0, 6), "0.000000");
        assert_eq!(fmt_fixed(-1e-9, 6), "0.000000");
        assert_eq!(fmt_fixed(-1e-3, 6), "-0.001000");
        assert_eq!(fmt_fixed(1.5, 2), "1.50");
    }

    #[test]
    fn graticule_validation() {
        assert!(GraticuleSpec::new((-100.0, 0.0), 10.0, (0.0, 10.0), 10.0, 1).is_err());
        assert!(GraticuleSpec::new((0.0, 10.0), -1.0, (0.0, 10.0), 10.0, 1).is_err());
        assert!(GraticuleSpec::new((0.0, 10.0), 1.0, (0.0, 10.0), 10.0, 0).is_err());
        assert!(GraticuleSpec::new((10.0, 0.0), 1.0, (0.0, 10.0), 10.0, 1).is_err());
    }
}
