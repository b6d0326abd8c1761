//! Projection catalog, the minimal-distortion series projection, and
//! expression-defined custom projections.
//!
//! Axis conventions differ per projection and are documented on
//! [`ProjectionKind`]. Catalog formulas are spherical except `plate_carree`
//! and `tissot`, which are written in terms of the meridian arc and the
//! parallel radius and therefore work on the ellipsoid as well.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ExprMap2;
use crate::indicatrix::Jacobian2;
use crate::surface::{normalize_lon, GeoPoint, Surface, SurfaceConfig};

/// A point in the map plane, same length units as the surface radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

/// Catalog membership.
///
/// Conventions: `plate_carree`, `mercator`, `sinusoidal`, `cassini` and
/// `stereographic` put `x` east-ish and `y` north-ish. `tissot` instead puts
/// `x` along the meridian arc from the central parallel and `y` along the
/// parallel, matching the series it truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionKind {
    PlateCarree,
    Mercator,
    Sinusoidal,
    Cassini,
    Stereographic,
    Tissot,
    Custom,
}

impl ProjectionKind {
    pub fn name(self) -> &'static str {
        match self {
            ProjectionKind::PlateCarree => "plate_carree",
            ProjectionKind::Mercator => "mercator",
            ProjectionKind::Sinusoidal => "sinusoidal",
            ProjectionKind::Cassini => "cassini",
            ProjectionKind::Stereographic => "stereographic",
            ProjectionKind::Tissot => "tissot",
            ProjectionKind::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<ProjectionKind> {
        Some(match name {
            "plate_carree" => ProjectionKind::PlateCarree,
            "mercator" => ProjectionKind::Mercator,
            "sinusoidal" => ProjectionKind::Sinusoidal,
            "cassini" => ProjectionKind::Cassini,
            "stereographic" => ProjectionKind::Stereographic,
            "tissot" => ProjectionKind::Tissot,
            "custom" => ProjectionKind::Custom,
            _ => return None,
        })
    }

    fn sphere_only(self) -> bool {
        matches!(
            self,
            ProjectionKind::Mercator
                | ProjectionKind::Sinusoidal
                | ProjectionKind::Cassini
                | ProjectionKind::Stereographic
        )
    }
}

/// An immutable, evaluable projection: surface, central point, and either a
/// catalog formula or a parsed expression pair over `l` (latitude) and
/// `m` (longitude from the mean meridian).
#[derive(Debug, Clone)]
pub struct ProjectionDef {
    id: String,
    kind: ProjectionKind,
    surface: Surface,
    center: GeoPoint,
    custom: Option<ExprMap2>,
}

impl ProjectionDef {
    /// A catalog projection. Longitudes are measured from `center.lon()`;
    /// `center.lat()` is the mean parallel (used by `tissot`).
    pub fn catalog(kind: ProjectionKind, surface: Surface, center: GeoPoint) -> Result<ProjectionDef> {
        if kind == ProjectionKind::Custom {
            return Err(Error::InvalidArgument(
                "custom projections need expressions; use ProjectionDef::custom".into(),
            ));
        }
        if kind.sphere_only() && surface.flattening() != 0.0 {
            return Err(Error::Unsupported(format!(
                "{} is implemented for spheres only",
                kind.name()
            )));
        }
        Ok(ProjectionDef {
            id: kind.name().to_string(),
            kind,
            surface,
            center,
        custom: None,
        })
    }

    /// A custom projection from already-parsed expressions.
    pub fn custom(
        id: impl Into<String>,
        surface: Surface,
        center: GeoPoint,
        exprs: ExprMap2,
    ) -> ProjectionDef {
        ProjectionDef {
            id: id.into(),
            kind: ProjectionKind::Custom,
            surface,
            center,
            custom: Some(exprs),
        }
    }

    /// Build from a JSON config record.
    pub fn from_config(cfg: &ProjectionConfig) -> Result<ProjectionDef> {
        let kind = ProjectionKind::from_name(&cfg.kind)
            .ok_or_else(|| Error::Config(format!("unknown projection kind `{}`", cfg.kind)))?;
        let surface = match &cfg.surface {
            Some(sc) => Surface::from_config(sc)?,
            None => Surface::unit_sphere(),
        };
        let center = match &cfg.center {
            Some(c) => GeoPoint::from_degrees(c.lat_deg, c.lon_deg)?,
            None => GeoPoint::new(0.0, 0.0).unwrap(),
        };
        let mut def = if kind == ProjectionKind::Custom {
            let ex = cfg.expressions.as_ref().ok_or_else(|| {
                Error::Config("custom projection config needs `expressions`".into())
            })?;
            let exprs = ExprMap2::from_parts(&ex.x, &ex.y, ["x", "y"], ["l", "m"])?;
            ProjectionDef::custom("custom", surface, center, exprs)
        } else {
            if cfg.expressions.is_some() {
                return Err(Error::Config(format!(
                    "`expressions` only apply to kind `custom`, not `{}`",
                    cfg.kind
                )));
            }
            ProjectionDef::catalog(kind, surface, center)?
        };
        if let Some(id) = &cfg.id {
            def.id = id.clone();
        }
        Ok(def)
    }

    pub fn to_config(&self) -> ProjectionConfig {
        ProjectionConfig {
            id: Some(self.id.clone()),
            kind: self.kind.name().to_string(),
            center: Some(CenterConfig {
                lat_deg: self.center.lat_deg(),
                lon_deg: self.center.lon_deg(),
            }),
            surface: Some(SurfaceConfig {
                kind: match self.surface.kind() {
                    crate::surface::SurfaceKind::Sphere => "sphere".into(),
                    crate::surface::SurfaceKind::Ellipsoid => "ellipsoid".into(),
                },
                radius: Some(self.surface.equatorial_radius()),
                flattening: (self.surface.flattening() != 0.0).then(|| self.surface.flattening()),
                inverse_flattening: None,
            }),
            expressions: self.custom.as_ref().map(|c| {
                let vars = c.var_names();
                ExpressionsConfig {
                    x: c.first.to_text(&[vars[0], vars[1]]),
                    y: c.second.to_text(&[vars[0], vars[1]]),
                }
            }),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> ProjectionKind {
        self.kind
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn center(&self) -> GeoPoint {
        self.center
    }

    /// Custom expression pair, if this is a custom projection.
    pub fn expressions(&self) -> Option<&ExprMap2> {
        self.custom.as_ref()
    }

    /// Order at which the series projection truncates; `None` for exact maps.
    pub fn series_truncation_order(&self) -> Option<u32> {
        (self.kind == ProjectionKind::Tissot).then_some(2)
    }

    /// Angle-preserving by construction?
    pub fn is_conformal_catalog(&self) -> bool {
        matches!(
            self.kind,
            ProjectionKind::Mercator | ProjectionKind::Stereographic
        )
    }

    /// Longitude of `p` measured from the mean meridian, in `(-pi, pi]`.
    pub fn lon_from_center(&self, p: GeoPoint) -> f64 {
        normalize_lon(p.lon() - self.center.lon())
    }

    /// Forward projection. Domain violations are reported as errors, never
    /// as non-finite coordinates.
    pub fn project(&self, p: GeoPoint) -> Result<PlanePoint> {
        self.eval_raw(p.lat(), self.lon_from_center(p))
    }

    /// True if `(l, m)` (latitude, longitude-from-center) is inside the
    /// projection's open domain.
    pub(crate) fn domain_contains(&self, l: f64, m: f64) -> bool {
        if !l.is_finite() || !m.is_finite() || l.abs() > FRAC_PI_2 {
            return false;
        }
        match self.kind {
            ProjectionKind::PlateCarree | ProjectionKind::Sinusoidal | ProjectionKind::Custom => {
                true
            }
            ProjectionKind::Mercator => l.abs() < FRAC_PI_2,
            ProjectionKind::Cassini => m.abs() < FRAC_PI_2,
            ProjectionKind::Stereographic => l > -FRAC_PI_2,
            ProjectionKind::Tissot => m.abs() <= FRAC_PI_2,
        }
    }

    /// Evaluate at raw `(l, m)` without longitude re-wrapping; used by the
    /// forward path and by finite-difference stencils (which must see a
    /// continuous function of `m` even across the antimeridian).
    pub(crate) fn eval_raw(&self, l: f64, m: f64) -> Result<PlanePoint> {
        if !self.domain_contains(l, m) {
            return Err(Error::OutOfDomain(format!(
                "({l}, {m}) outside the {} domain",
                self.id
            )));
        }
        let a = self.surface.equatorial_radius();
        let (x, y) = match self.kind {
            ProjectionKind::PlateCarree => (a * m, self.surface.meridian_arc(0.0, l)),
            ProjectionKind::Mercator => (a * m, a * l.tan().asinh()),
            ProjectionKind::Sinusoidal => (a * m * l.cos(), a * l),
            ProjectionKind::Cassini => {
                let b = l.cos() * m.sin();
                (a * b.asin(), a * l.tan().atan2(m.cos()))
            }
            ProjectionKind::Stereographic => {
                let rho = 2.0 * a * (FRAC_PI_4 - 0.5 * l).tan();
                (rho * m.sin(), -rho * m.cos())
            }
            ProjectionKind::Tissot => {
                let p = tissot_projection_raw(&self.surface, self.center.lat(), l, m);
                (p.x, p.y)
            }
            ProjectionKind::Custom => self.custom.as_ref().unwrap().eval(l, m),
        };
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "{} evaluates to a non-finite point at ({l}, {m})",
                self.id
            )));
        }
        Ok(PlanePoint { x, y })
    }

    /// Closed-form partials where the catalog provides them; `None` for
    /// custom projections.
    pub(crate) fn analytic_jacobian(&self, l: f64, m: f64) -> Option<Result<Jacobian2>> {
        if self.kind == ProjectionKind::Custom {
            return None;
        }
        if !self.domain_contains(l, m) {
            return Some(Err(Error::OutOfDomain(format!(
                "({l}, {m}) outside the {} domain",
                self.id
            ))));
        }
        let a = self.surface.equatorial_radius();
        let (sl, cl) = l.sin_cos();
        let (sm, cm) = m.sin_cos();
        let j = match self.kind {
            ProjectionKind::PlateCarree => Jacobian2 {
                dxdl: 0.0,
                dxdm: a,
                dydl: self.surface.meridian_curvature_radius(l),
                dydm: 0.0,
            },
            ProjectionKind::Mercator => Jacobian2 {
                dxdl: 0.0,
                dxdm: a,
                dydl: a / cl,
                dydm: 0.0,
            },
            ProjectionKind::Sinusoidal => Jacobian2 {
                dxdl: -a * m * sl,
                dxdm: a * cl,
                dydl: a,
                dydm: 0.0,
            },
            ProjectionKind::Cassini => {
                let b = cl * sm;
                let w = (1.0 - b * b).sqrt();
                let denom = sl * sl + cl * cl * cm * cm;
                Jacobian2 {
                    dxdl: -a * sl * sm / w,
                    dxdm: a * cl * cm / w,
                    dydl: a * cm / denom,
                    dydm: a * sl * cl * sm / denom,
                }
            }
            ProjectionKind::Stereographic => {
                let t = FRAC_PI_4 - 0.5 * l;
                let rho = 2.0 * a * t.tan();
                let drho = -a / (t.cos() * t.cos());
                Jacobian2 {
                    dxdl: drho * sm,
                    dxdm: rho * cm,
                    dydl: -drho * cm,
                    dydm: rho * sm,
                }
            }
            ProjectionKind::Tissot => {
                let mer = self.surface.meridian_curvature_radius(l);
                let r = self.surface.parallel_radius(l);
                let cos2l = (2.0 * l).cos();
                let sin2l = (2.0 * l).sin();
                Jacobian2 {
                    dxdl: mer + 0.5 * m * m * (r * cl - mer * sl * sl),
                    dxdm: r * m * sl,
                    dydl: m * (-mer * sl * (1.0 + m * m / 6.0 * cos2l) - r * m * m / 3.0 * sin2l),
                    dydm: r * (1.0 + 0.5 * m * m * cos2l),
                }
            }
            ProjectionKind::Custom => unreachable!(),
        };
        Some(Ok(j))
    }
}

/// Second-order series projection about the mean parallel `center_lat`:
/// `x = s + r m^2 sin(l) / 2`, `y = r m (1 + m^2 cos(2l) / 6)`, with `s` the
/// meridian arc from the mean parallel and `r` the parallel radius. The mean
/// meridian (`m = 0`) maps isometrically to the x-axis. Longitudes beyond
/// `pi/2` from the mean meridian are out of domain; accuracy is only adequate
/// in a narrow lune around it.
pub fn tissot_projection(surface: &Surface, center_lat: f64, p: GeoPoint) -> Result<PlanePoint> {
    if center_lat.abs() > FRAC_PI_2 || !center_lat.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "central latitude {center_lat} outside [-pi/2, pi/2]"
        )));
    }
    if p.lon().abs() > FRAC_PI_2 {
        return Err(Error::OutOfDomain(format!(
            "longitude {} exceeds pi/2 from the mean meridian",
            p.lon()
        )));
    }
    Ok(tissot_projection_raw(surface, center_lat, p.lat(), p.lon()))
}

fn tissot_projection_raw(surface: &Surface, center_lat: f64, l: f64, m: f64) -> PlanePoint {
    let s = surface.meridian_arc(center_lat, l);
    let r = surface.parallel_radius(l);
    PlanePoint {
        x: s + 0.5 * r * m * m * l.sin(),
        y: r * m * (1.0 + m * m / 6.0 * (2.0 * l).cos()),
    }
}

/// Parse the compact custom-projection form `x = <expr>; y = <expr>` over
/// variables `l`, `m`, on the unit sphere with the central point at the
/// origin. Use [`ProjectionDef::from_config`] for full control.
pub fn parse_custom_projection(text: &str) -> Result<ProjectionDef> {
    let exprs = ExprMap2::parse(text, ["x", "y"], ["l", "m"])?;
    Ok(ProjectionDef::custom(
        "custom",
        Surface::unit_sphere(),
        GeoPoint::new(0.0, 0.0).unwrap(),
        exprs,
    ))
}

/// JSON config record:
/// `{id?, kind, center?: {lat_deg, lon_deg}, surface?, expressions?: {x, y}}`.
/// Angles in config files are degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expressions: Option<ExpressionsConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CenterConfig {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpressionsConfig {
    pub x: String,
    pub y: String,
}
