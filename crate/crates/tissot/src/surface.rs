//! Surface models: the sphere and the ellipsoid of revolution.
//!
//! All lengths are in units of the equatorial radius unless a different
//! radius is set; callers scale externally. Latitude is geodetic throughout.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere,
    Ellipsoid,
}

/// Sphere or ellipsoid of revolution, defined by equatorial radius and
/// flattening (`0 <= f < 1`, `f = 0` for the sphere).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Surface {
    kind: SurfaceKind,
    equatorial_radius: f64,
    flattening: f64,
}

impl Surface {
    pub fn sphere(radius: f64) -> Result<Surface> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        Ok(Surface {
            kind: SurfaceKind::Sphere,
            equatorial_radius: radius,
            flattening: 0.0,
        })
    }

    pub fn unit_sphere() -> Surface {
        Surface {
            kind: SurfaceKind::Sphere,
            equatorial_radius: 1.0,
            flattening: 0.0,
        }
    }

    pub fn ellipsoid(equatorial_radius: f64, flattening: f64) -> Result<Surface> {
        if !(equatorial_radius > 0.0) || !equatorial_radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "equatorial radius must be positive, got {equatorial_radius}"
            )));
        }
        if !(0.0..1.0).contains(&flattening) {
            return Err(Error::InvalidArgument(format!(
                "flattening must lie in [0, 1), got {flattening}"
            )));
        }
        Ok(Surface {
            kind: SurfaceKind::Ellipsoid,
            equatorial_radius,
            flattening,
        })
    }

    pub fn from_config(cfg: &SurfaceConfig) -> Result<Surface> {
        let radius = cfg.radius.unwrap_or(1.0);
        match cfg.kind.as_str() {
            "sphere" => Surface::sphere(radius),
            "ellipsoid" => {
                let f = match (cfg.flattening, cfg.inverse_flattening) {
                    (Some(f), None) => f,
                    (None, Some(inv)) if inv != 0.0 => 1.0 / inv,
                    (None, None) => {
                        return Err(Error::Config(
                            "ellipsoid needs flattening or inverse_flattening".into(),
                        ))
                    }
                    _ => {
                        return Err(Error::Config(
                            "give either flattening or inverse_flattening, not both".into(),
                        ))
                    }
                };
                Surface::ellipsoid(radius, f)
            }
            other => Err(Error::Config(format!("unknown surface kind `{other}`"))),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn equatorial_radius(&self) -> f64 {
        self.equatorial_radius
    }

    pub fn flattening(&self) -> f64 {
        self.flattening
    }

    pub fn polar_radius(&self) -> f64 {
        self.equatorial_radius * (1.0 - self.flattening)
    }

    /// First eccentricity squared, `e^2 = f (2 - f)`.
    pub fn eccentricity_squared(&self) -> f64 {
        self.flattening * (2.0 - self.flattening)
    }

    /// Prime-vertical curvature radius `N(lat) = a / sqrt(1 - e^2 sin^2 lat)`.
    pub fn prime_vertical_radius(&self, lat: f64) -> f64 {
        let e2 = self.eccentricity_squared();
        let s = lat.sin();
        self.equatorial_radius / (1.0 - e2 * s * s).sqrt()
    }

    /// Meridian curvature radius `M(lat) = a (1 - e^2) / (1 - e^2 sin^2 lat)^{3/2}`.
    pub fn meridian_curvature_radius(&self, lat: f64) -> f64 {
        let e2 = self.eccentricity_squared();
        let s = lat.sin();
        let w2 = 1.0 - e2 * s * s;
        self.equatorial_radius * (1.0 - e2) / (w2 * w2.sqrt())
    }

    /// Gaussian curvature `1 / (M N)`.
    pub fn gaussian_curvature(&self, lat: f64) -> f64 {
        1.0 / (self.meridian_curvature_radius(lat) * self.prime_vertical_radius(lat))
    }

    /// Radius of the parallel at `lat`; exactly 0 at the poles.
    pub fn parallel_radius(&self, lat: f64) -> f64 {
        if lat.abs() >= FRAC_PI_2 {
            return 0.0;
        }
        self.prime_vertical_radius(lat) * lat.cos()
    }

    /// Signed meridian arc from `lat0` to `lat1`. Closed form on the sphere,
    /// adaptive quadrature of the meridian curvature radius on the ellipsoid
    /// (relative tolerance 1e-12).
    pub fn meridian_arc(&self, lat0: f64, lat1: f64) -> f64 {
        if self.flattening == 0.0 {
            return self.equatorial_radius * (lat1 - lat0);
        }
        if lat0 == lat1 {
            return 0.0;
        }
        adaptive_simpson(
            &|t| self.meridian_curvature_radius(t),
            lat0,
            lat1,
            1e-12 * self.equatorial_radius * (lat1 - lat0).abs().max(1e-3),
        )
    }

    /// First fundamental form in (lat, lon) coordinates:
    /// `E = M^2`, `F = 0`, `G = r^2`. `G = 0` at the poles is legal output.
    pub fn fundamental_form(&self, p: GeoPoint) -> FirstFundamentalForm {
        let m = self.meridian_curvature_radius(p.lat());
        let r = self.parallel_radius(p.lat());
        FirstFundamentalForm {
            e: m * m,
            f: 0.0,
            g: r * r,
        }
    }

    /// Geodetic embedding into 3-space; the point satisfies the quadric
    /// `(X^2 + Y^2)/a^2 + Z^2/b^2 = 1`.
    pub fn embed(&self, p: GeoPoint) -> [f64; 3] {
        let r = self.parallel_radius(p.lat());
        let n = self.prime_vertical_radius(p.lat());
        let z = n * (1.0 - self.eccentricity_squared()) * p.lat().sin();
        [r * p.lon().cos(), r * p.lon().sin(), z]
    }

    /// Partials of the embedding with respect to lat and lon:
    /// `d/dlat = (-M sin l cos m, -M sin l sin m, M cos l)`,
    /// `d/dlon = (-r sin m, r cos m, 0)`.
    pub fn embed_partials(&self, p: GeoPoint) -> ([f64; 3], [f64; 3]) {
        let (sl, cl) = p.lat().sin_cos();
        let (sm, cm) = p.lon().sin_cos();
        let m = self.meridian_curvature_radius(p.lat());
        let r = self.parallel_radius(p.lat());
        (
            [-m * sl * cm, -m * sl * sm, m * cl],
            [-r * sm, r * cm, 0.0],
        )
    }
}

/// Geodetic point: latitude in `[-pi/2, pi/2]`, longitude normalized
/// to `(-pi, pi]`. Radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<GeoPoint> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinates ({lat}, {lon})"
            )));
        }
        if lat.abs() > FRAC_PI_2 {
            return Err(Error::InvalidArgument(format!(
                "latitude {lat} outside [-pi/2, pi/2]"
            )));
        }
        Ok(GeoPoint {
            lat,
            lon: normalize_lon(lon),
        })
    }

    pub fn from_degrees(lat_deg: f64, lon_deg: f64) -> Result<GeoPoint> {
        GeoPoint::new(lat_deg.to_radians(), lon_deg.to_radians())
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat.to_degrees()
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon.to_degrees()
    }
}

/// `E du^2 + 2F du dv + G dv^2` coefficients of the line element, with
/// `u = lat`, `v = lon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstFundamentalForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Fold a longitude into `(-pi, pi]`.
pub fn normalize_lon(lon: f64) -> f64 {
    let mut x = lon % TAU;
    if x <= -PI {
        x += TAU;
    } else if x > PI {
        x -= TAU;
    }
    x
}

/// Config record for a surface: `{kind, radius?, flattening? | inverse_flattening?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flattening: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_flattening: Option<f64>,
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    /// Romberg integration, used as an independent quadrature for the
    /// meridian arc (the implementation path is adaptive Simpson).
    fn romberg(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut h = b - a;
        rows.push(vec![0.5 * h * (f(a) + f(b))]);
        for k in 1..=20 {
            h *= 0.5;
            let n = 1usize << (k - 1);
            let sum: f64 = (0..n).map(|i| f(a + h * (2 * i + 1) as f64)).sum();
            let mut row = vec![0.5 * rows[k - 1][0] + h * sum];
            for j in 1..=k {
                let v = row[j - 1] + (row[j - 1] - rows[k - 1][j - 1]) / ((4f64.powi(j as i32)) - 1.0);
                row.push(v);
            }
            if k > 3 {
                let prev = rows[k - 1][k - 1];
                let cur = row[k];
                if (cur - prev).abs() <= 1e-15 * cur.abs().max(1.0) {
                    return cur;
                }
            }
            rows.push(row);
        }
        *rows.last().unwrap().last().unwrap()
    }

    fn airy() -> Surface {
        Surface::ellipsoid(1.0, 1.0 / 297.0).unwrap()
    }

    #[test]
    fn parallel_radius_examples() {
        let s = Surface::unit_sphere();
        assert_abs_diff_eq!(s.parallel_radius(0.0), 1.0);
        assert_abs_diff_eq!(s.parallel_radius(FRAC_PI_3), 0.5, epsilon = 1e-15);
        // independent: N(l) cos(l) with e^2 = f(2 - f), checked against a
        // frozen high-precision evaluation
        let e = airy();
        let e2 = (1.0 / 297.0) * (2.0 - 1.0 / 297.0);
        let oracle = (1.0 / (1.0 - e2 * FRAC_PI_4.sin().powi(2)).sqrt()) * FRAC_PI_4.cos();
        assert_abs_diff_eq!(oracle, 0.7082981969801284, epsilon = 1e-15);
        assert_abs_diff_eq!(e.parallel_radius(FRAC_PI_4), oracle, epsilon = 1e-15);
    }

    #[test]
    fn parallel_radius_vanishes_only_at_poles() {
        let s = airy();
        assert_eq!(s.parallel_radius(FRAC_PI_2), 0.0);
        assert_eq!(s.parallel_radius(-FRAC_PI_2), 0.0);
        for k in 1..90 {
            let lat = FRAC_PI_2 * (k as f64) / 90.0;
            assert!(s.parallel_radius(lat) > 0.0);
        }
    }

    #[test]
    fn meridian_arc_examples() {
        let s = Surface::unit_sphere();
        assert_eq!(s.meridian_arc(0.0, 0.0), 0.0);
        assert_abs_diff_eq!(s.meridian_arc(0.0, FRAC_PI_2), FRAC_PI_2);

        // quadrature oracle (Romberg) frozen at 1e-14, implementation at 1e-10
        let e = airy();
        let oracle = romberg(|t| e.meridian_curvature_radius(t), 0.0, FRAC_PI_4);
        assert_abs_diff_eq!(oracle, 0.7815512535584448, epsilon = 1e-14);
        assert_abs_diff_eq!(e.meridian_arc(0.0, FRAC_PI_4), oracle, epsilon = 1e-10);
    }

    #[test]
    fn fundamental_form_examples() {
        let s = Surface::unit_sphere();
        let f0 = s.fundamental_form(GeoPoint::new(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(f0.e, 1.0);
        assert_abs_diff_eq!(f0.f, 0.0);
        assert_abs_diff_eq!(f0.g, 1.0);
        let f1 = s.fundamental_form(GeoPoint::new(FRAC_PI_3, 0.0).unwrap());
        assert_abs_diff_eq!(f1.g, 0.25, epsilon = 1e-15);
        let fp = s.fundamental_form(GeoPoint::new(FRAC_PI_2, 0.0).unwrap());
        assert_eq!(fp.g, 0.0);
    }

    #[test]
    fn sphere_form_equals_flattening_zero_closed_form() {
        let s = Surface::ellipsoid(2.5, 0.0).unwrap();
        for k in 0..10 {
            let lat = -1.4 + 0.3 * k as f64;
            let f = s.fundamental_form(GeoPoint::new(lat, 0.0).unwrap());
            assert_eq!(f.e, 2.5 * 2.5);
            assert_eq!(f.g, (2.5 * lat.cos()).powi(2).max(0.0));
        }
    }

    #[test]
    fn embed_examples() {
        let s = Surface::unit_sphere();
        let p = s.embed(GeoPoint::new(0.0, 0.0).unwrap());
        assert_eq!(p, [1.0, 0.0, 0.0]);
        let p = s.embed(GeoPoint::new(FRAC_PI_2, 1.3).unwrap());
        assert_eq!(p[0], 0.0);
        assert_eq!(p[1], 0.0);
        assert_abs_diff_eq!(p[2], 1.0, epsilon = 1e-15);
        let e = Surface::ellipsoid(1.0, 0.5).unwrap();
        let p = e.embed(GeoPoint::new(FRAC_PI_2, 0.0).unwrap());
        assert_abs_diff_eq!(p[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn embed_satisfies_quadric() {
        let e = airy();
        let a2 = 1.0f64;
        let b2 = e.polar_radius().powi(2);
        for k in 0..40 {
            let lat = -1.5 + 0.077 * k as f64;
            let lon = -3.0 + 0.15 * k as f64;
            let p = e.embed(GeoPoint::new(lat, lon).unwrap());
            let q = (p[0] * p[0] + p[1] * p[1]) / a2 + p[2] * p[2] / b2;
            assert_abs_diff_eq!(q, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn finite_difference_lengths_match_form() {
        let e = airy();
        let p = GeoPoint::new(0.6, 1.1).unwrap();
        let form = e.fundamental_form(p);
        let h = 1e-5;
        let diff = |a: [f64; 3], b: [f64; 3]| {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        };
        let dl = diff(
            e.embed(GeoPoint::new(p.lat() + h, p.lon()).unwrap()),
            e.embed(GeoPoint::new(p.lat() - h, p.lon()).unwrap()),
        ) / (2.0 * h);
        let dm = diff(
            e.embed(GeoPoint::new(p.lat(), p.lon() + h).unwrap()),
            e.embed(GeoPoint::new(p.lat(), p.lon() - h).unwrap()),
        ) / (2.0 * h);
        assert_abs_diff_eq!(dl, form.e.sqrt(), epsilon = 1e-8);
        assert_abs_diff_eq!(dm, form.g.sqrt(), epsilon = 1e-8);

        // analytic partials agree too
        let (pl, pm) = e.embed_partials(p);
        assert_abs_diff_eq!(
            (pl[0] * pl[0] + pl[1] * pl[1] + pl[2] * pl[2]).sqrt(),
            form.e.sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            (pm[0] * pm[0] + pm[1] * pm[1] + pm[2] * pm[2]).sqrt(),
            form.g.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn lon_normalization() {
        assert_abs_diff_eq!(normalize_lon(PI + 0.1), -PI + 0.1, epsilon = 1e-12);
        assert_eq!(normalize_lon(PI), PI);
        assert_abs_diff_eq!(normalize_lon(-PI), PI);
        let p = GeoPoint::from_degrees(10.0, 370.0).unwrap();
        assert_abs_diff_eq!(p.lon_deg(), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn constructors_validate() {
        assert!(Surface::sphere(0.0).is_err());
        assert!(Surface::ellipsoid(1.0, 1.0).is_err());
        assert!(Surface::ellipsoid(1.0, -0.1).is_err());
        assert!(GeoPoint::new(2.0, 0.0).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn surface_from_config() {
        let cfg: SurfaceConfig =
            serde_json::from_str(r#"{"kind":"ellipsoid","inverse_flattening":297.0}"#).unwrap();
        let s = Surface::from_config(&cfg).unwrap();
        assert_abs_diff_eq!(s.flattening(), 1.0 / 297.0);
        assert_eq!(s.equatorial_radius(), 1.0);
        let bad: SurfaceConfig = serde_json::from_str(r#"{"kind":"torus"}"#).unwrap();
        assert!(Surface::from_config(&bad).is_err());
    }

    proptest! {
        #[test]
        fn meridian_arc_antisymmetric_and_additive(
            a in -1.5f64..1.5, b in -1.5f64..1.5, c in -1.5f64..1.5
        ) {
            let s = airy();
            let ab = s.meridian_arc(a, b);
            let ba = s.meridian_arc(b, a);
            prop_assert!((ab + ba).abs() < 1e-12);
            let ac = s.meridian_arc(a, c);
            let bc = s.meridian_arc(b, c);
            prop_assert!((ab + bc - ac).abs() < 1e-12);
        }
    }
}
