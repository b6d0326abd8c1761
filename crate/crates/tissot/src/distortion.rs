//! Scale-error fields and distortion-minimization diagnostics: the lambda
//! field of a projection over a region, the quadratic (conic) model fitted by
//! least squares on its gradient, level-set boundary checks, and summary
//! reports.
//!
//! The scale error at a point is `lambda = sqrt(a b) - 1`: for maps that are
//! first-order similarities (`a = b`) this is the plain scale deviation, and
//! the geometric mean is the symmetric extension everywhere else.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{GridSpec, RegionSpec, ScalarField};
use crate::indicatrix::distortion_ellipse;
use crate::projection::ProjectionDef;
use crate::surface::GeoPoint;

/// Lambda field plus the companion per-axis deviations.
#[derive(Debug, Clone)]
pub struct LambdaField {
    /// `sqrt(a b) - 1` per in-region node.
    pub lambda: ScalarField,
    /// `a - 1` per node.
    pub a_minus_1: ScalarField,
    /// `b - 1` per node.
    pub b_minus_1: ScalarField,
    /// In-region nodes masked out because the differential degenerates there.
    pub degenerate_nodes: usize,
}

/// Scale-error field of `def` over `region` on a geographic grid
/// (x = longitude, y = latitude, radians). Degenerate nodes are masked out
/// and counted, never silently zeroed.
pub fn lambda_field(
    def: &ProjectionDef,
    region: &RegionSpec,
    grid: GridSpec,
) -> Result<LambdaField> {
    let mut lambda = ScalarField::empty(grid);
    let mut a1 = ScalarField::empty(grid);
    let mut b1 = ScalarField::empty(grid);
    let mut degenerate = 0usize;
    let mut in_region = 0usize;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let (lon, lat) = (grid.x(i), grid.y(j));
            if !region.contains(lon, lat) {
                continue;
            }
            in_region += 1;
            let p = match GeoPoint::new(lat, lon) {
                Ok(p) => p,
                Err(_) => {
                    degenerate += 1;
                    continue;
                }
            };
            match distortion_ellipse(def, p) {
                Ok(ind) => {
                    lambda.set(i, j, (ind.a * ind.b).sqrt() - 1.0);
                    a1.set(i, j, ind.a - 1.0);
                    b1.set(i, j, ind.b - 1.0);
                }
                Err(_) => degenerate += 1,
            }
        }
    }
    if in_region == 0 {
        return Err(Error::EmptyRegion(
            "no grid nodes fall inside the region".into(),
        ));
    }
    Ok(LambdaField {
        lambda,
        a_minus_1: a1,
        b_minus_1: b1,
        degenerate_nodes: degenerate,
    })
}

/// Quadratic scale-error model about the central point:
/// `lambda0(x, y) = radial_coef (x^2 + y^2) + A (x^2 - y^2) + 2 B x y`
/// with `radial_coef = 1 / (4 R R')` fixed by the principal curvature radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarbouxConic {
    /// Coefficient `A` of `x^2 - y^2`.
    pub diff_coef: f64,
    /// Coefficient `B` of `2 x y`.
    pub cross_coef: f64,
    /// `1 / (4 R R')`.
    pub radial_coef: f64,
}

impl DarbouxConic {
    pub fn new(diff_coef: f64, cross_coef: f64, r1: f64, r2: f64) -> Result<DarbouxConic> {
        if !(r1 > 0.0) || !(r2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "curvature radii must be positive, got ({r1}, {r2})"
            )));
        }
        Ok(DarbouxConic {
            diff_coef,
            cross_coef,
            radial_coef: 1.0 / (4.0 * r1 * r2),
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.radial_coef * (x * x + y * y)
            + self.diff_coef * (x * x - y * y)
            + 2.0 * self.cross_coef * x * y
    }

    /// Entries of the symmetric quadratic-form matrix `[[q11, q12], [q12, q22]]`.
    pub fn quadratic_form(&self) -> (f64, f64, f64) {
        (
            self.radial_coef + self.diff_coef,
            self.cross_coef,
            self.radial_coef - self.diff_coef,
        )
    }
}

/// Least-squares fit of the conic coefficients `A`, `B` minimizing the mean
/// squared gradient of `lambda - lambda0` over the field's interior nodes
/// (gradients by central differences; the radial term is fixed by `r1`, `r2`).
pub fn fit_darboux_conic(lam: &ScalarField, r1: f64, r2: f64) -> Result<DarbouxConic> {
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "curvature radii must be positive, got ({r1}, {r2})"
        )));
    }
    let grid = lam.grid();
    let base2 = 1.0 / (2.0 * r1 * r2); // gradient coefficient of the radial term
    let (mut paa, mut pab, mut pbb) = (0.0f64, 0.0f64, 0.0f64);
    let (mut ra, mut rb) = (0.0f64, 0.0f64);
    let mut nodes = 0usize;
    for j in 1..grid.ny().saturating_sub(1) {
        for i in 1..grid.nx().saturating_sub(1) {
            let (Some(ve), Some(vw), Some(vn), Some(vs)) = (
                lam.get(i + 1, j),
                lam.get(i - 1, j),
                lam.get(i, j + 1),
                lam.get(i, j - 1),
            ) else {
                continue;
            };
            if !lam.is_set(i, j) {
                continue;
            }
            let x = grid.x(i);
            let y = grid.y(j);
            let gx = (ve - vw) / (2.0 * grid.dx());
            let gy = (vn - vs) / (2.0 * grid.dy());
            // target gradient after removing the fixed radial part
            let tx = gx - base2 * x;
            let ty = gy - base2 * y;
            // basis gradients: d(x^2 - y^2) = (2x, -2y), d(2xy) = (2y, 2x)
            let (ax, ay) = (2.0 * x, -2.0 * y);
            let (bx, by) = (2.0 * y, 2.0 * x);
            paa += ax * ax + ay * ay;
            pab += ax * bx + ay * by;
            pbb += bx * bx + by * by;
            ra += ax * tx + ay * ty;
            rb += bx * tx + by * ty;
            nodes += 1;
        }
    }
    if nodes == 0 {
        return Err(Error::RankDeficient(
            "no interior nodes with a full gradient stencil".into(),
        ));
    }
    let det = paa * pbb - pab * pab;
    if det.abs() <= 1e-12 * paa.abs().max(pbb.abs()).max(1e-300) {
        return Err(Error::RankDeficient(
            "gradient normal equations are singular (nodes collinear)".into(),
        ));
    }
    let a = (ra * pbb - rb * pab) / det;
    let b = (rb * paa - ra * pab) / det;
    DarbouxConic::new(a, b, r1, r2)
}

/// Class of a conic level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicClass {
    Ellipse,
    Hyperbola,
    Degenerate,
}

/// Level-set diagnostics when the set is an ellipse.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EllipseCheck {
    /// Major and minor semi-axes of the level ellipse.
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Axis direction of the major semi-axis (radians from the x-axis).
    pub axis_angle: f64,
    pub boundary_min: f64,
    pub boundary_max: f64,
    /// `boundary_max - boundary_min`; zero up to rounding by construction.
    pub boundary_spread: f64,
    /// Largest model value strictly inside the ellipse.
    pub interior_max: f64,
    /// Whether the interior maximum stays at or below the boundary value.
    pub max_on_boundary: bool,
}

/// Boundary-constancy report for the level set `lambda0 = level`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryReport {
    pub class: ConicClass,
    pub level: f64,
    pub ellipse: Option<EllipseCheck>,
}

/// Sample the level set `lambda0 = level` and the region it bounds. An
/// indefinite form is classified, not treated as a failure; only a
/// non-positive level is rejected.
pub fn ellipse_boundary_check(conic: &DarbouxConic, level: f64) -> Result<BoundaryReport> {
    if !(level > 0.0) || !level.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "level must be positive, got {level}"
        )));
    }
    let (q11, q12, q22) = conic.quadratic_form();
    let det = q11 * q22 - q12 * q12;
    let class = if det > 0.0 {
        ConicClass::Ellipse
    } else if det < 0.0 {
        ConicClass::Hyperbola
    } else {
        ConicClass::Degenerate
    };
    if class != ConicClass::Ellipse {
        return Ok(BoundaryReport {
            class,
            level,
            ellipse: None,
        });
    }

    let mean = 0.5 * (q11 + q22);
    let spread = 0.5 * (q11 - q22);
    let r = spread.hypot(q12);
    let d1 = mean + r; // eigenvalue on the axis at `psi`
    let d2 = mean - r;
    let psi = 0.5 * (2.0 * q12).atan2(q11 - q22);
    let (sp, cp) = psi.sin_cos();
    let e1 = (level / d1).sqrt(); // semi-axis along psi (short)
    let e2 = (level / d2).sqrt(); // semi-axis perpendicular (long)

    const N_ANGLE: usize = 720;
    let boundary_point = |t: f64| -> (f64, f64) {
        let (st, ct) = t.sin_cos();
        let u = e1 * ct;
        let v = e2 * st;
        (cp * u - sp * v, sp * u + cp * v)
    };
    let mut bmin = f64::INFINITY;
    let mut bmax = f64::NEG_INFINITY;
    for k in 0..N_ANGLE {
        let t = std::f64::consts::TAU * k as f64 / N_ANGLE as f64;
        let (x, y) = boundary_point(t);
        let v = conic.eval(x, y);
        bmin = bmin.min(v);
        bmax = bmax.max(v);
    }
    let mut interior_max = conic.eval(0.0, 0.0);
    for kr in 1..20 {
        let rho = kr as f64 / 20.0;
        for k in 0..72 {
            let t = std::f64::consts::TAU * k as f64 / 72.0;
            let (x, y) = boundary_point(t);
            interior_max = interior_max.max(conic.eval(rho * x, rho * y));
        }
    }
    let tol = 1e-12 * level.abs().max(1.0);
    Ok(BoundaryReport {
        class,
        level,
        ellipse: Some(EllipseCheck {
            semi_major: e2.max(e1),
            semi_minor: e2.min(e1),
            axis_angle: if e2 >= e1 {
                crate::linalg::normalize_axis_angle(psi + std::f64::consts::FRAC_PI_2)
            } else {
                crate::linalg::normalize_axis_angle(psi)
            },
            boundary_min: bmin,
            boundary_max: bmax,
            boundary_spread: bmax - bmin,
            interior_max,
            max_on_boundary: interior_max <= bmin + tol,
        }),
    })
}

/// Field-wide distortion summary over a region.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    pub projection: String,
    pub nodes: usize,
    pub degenerate_nodes: usize,
    pub sup_abs_lambda: f64,
    pub mean_abs_lambda: f64,
    pub sup_omega: f64,
    pub sup_a: f64,
    pub area_scale_min: f64,
    pub area_scale_max: f64,
}

/// Deterministic summary of `def`'s distortion over the in-region nodes of a
/// geographic grid.
pub fn distortion_report(
    def: &ProjectionDef,
    region: &RegionSpec,
    grid: GridSpec,
) -> Result<DistortionReport> {
    let mut nodes = 0usize;
    let mut degenerate = 0usize;
    let mut sup_abs_lambda = 0.0f64;
    let mut sum_abs_lambda = 0.0f64;
    let mut sup_omega = 0.0f64;
    let mut sup_a = 0.0f64;
    let mut area_min = f64::INFINITY;
    let mut area_max = f64::NEG_INFINITY;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let (lon, lat) = (grid.x(i), grid.y(j));
            if !region.contains(lon, lat) {
                continue;
            }
            let ind = match GeoPoint::new(lat, lon).and_then(|p| distortion_ellipse(def, p)) {
                Ok(ind) => ind,
                Err(_) => {
                    degenerate += 1;
                    continue;
                }
            };
            let lambda = (ind.a * ind.b).sqrt() - 1.0;
            nodes += 1;
            sup_abs_lambda = sup_abs_lambda.max(lambda.abs());
            sum_abs_lambda += lambda.abs();
            sup_omega = sup_omega.max(ind.omega);
            sup_a = sup_a.max(ind.a);
            area_min = area_min.min(ind.area_scale);
            area_max = area_max.max(ind.area_scale);
        }
    }
    if nodes == 0 {
        return Err(Error::EmptyRegion(
            "no usable grid nodes inside the region".into(),
        ));
    }
    Ok(DistortionReport {
        projection: def.id().to_string(),
        nodes,
        degenerate_nodes: degenerate,
        sup_abs_lambda,
        mean_abs_lambda: sum_abs_lambda / nodes as f64,
        sup_omega,
        sup_a,
        area_scale_min: area_min,
        area_scale_max: area_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::ProjectionKind;
    use crate::surface::Surface;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::FRAC_PI_3;

    fn unit(kind: ProjectionKind) -> ProjectionDef {
        ProjectionDef::catalog(kind, Surface::unit_sphere(), GeoPoint::new(0.0, 0.0).unwrap())
            .unwrap()
    }

    fn rect_region(x0: f64, x1: f64, y0: f64, y1: f64) -> RegionSpec {
        RegionSpec::new(
            vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
            [(x0 + x1) / 2.0, (y0 + y1) / 2.0],
        )
        .unwrap()
    }

    #[test]
    fn plate_carree_equator_row_is_isometric() {
        let def = unit(ProjectionKind::PlateCarree);
        let region = rect_region(-1.0, 1.0, -0.02, 0.02);
        let grid = GridSpec::new(-0.9, 0.9, 7, -0.01, 0.01, 3).unwrap();
        let f = lambda_field(&def, &region, grid).unwrap();
        for i in 0..7 {
            let v = f.lambda.get(i, 1).unwrap(); // middle row sits on the equator
            assert!(v.abs() < 1e-14, "lambda at equator = {v}");
        }
        assert_eq!(f.degenerate_nodes, 0);
    }

    #[test]
    fn mercator_lambda_matches_secant() {
        let def = unit(ProjectionKind::Mercator);
        let region = rect_region(-1.0, 1.0, FRAC_PI_3 - 0.02, FRAC_PI_3 + 0.02);
        let grid = GridSpec::new(-0.5, 0.5, 3, FRAC_PI_3 - 0.01, FRAC_PI_3 + 0.01, 3).unwrap();
        let f = lambda_field(&def, &region, grid).unwrap();
        let v = f.lambda.get(1, 1).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10); // sec(pi/3) - 1

        // conformal: lambda = a - 1 = b - 1 pointwise
        for (i, j, _, _, lam) in f.lambda.iter_set() {
            assert_abs_diff_eq!(lam, f.a_minus_1.get(i, j).unwrap(), epsilon = 1e-10);
            assert_abs_diff_eq!(lam, f.b_minus_1.get(i, j).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn degenerate_nodes_are_masked_not_zeroed() {
        let def = unit(ProjectionKind::PlateCarree);
        let region = rect_region(-1.0, 1.0, 1.0, 1.6);
        // top row lands exactly on the pole
        let grid = GridSpec::new(-0.5, 0.5, 3, 1.17, std::f64::consts::FRAC_PI_2, 3).unwrap();
        let f = lambda_field(&def, &region, grid).unwrap();
        assert_eq!(f.degenerate_nodes, 3);
        for i in 0..3 {
            assert_eq!(f.lambda.get(i, 2), None);
        }
    }

    fn planted_field(a: f64, b: f64, noise: f64, seed: u64) -> ScalarField {
        let grid = GridSpec::new(-1.0, 1.0, 41, -1.0, 1.0, 41).unwrap();
        let conic = DarbouxConic::new(a, b, 1.0, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        ScalarField::from_fn(grid, |x, y| {
            let n = if noise > 0.0 {
                rng.random_range(-noise..noise)
            } else {
                0.0
            };
            Some(conic.eval(x, y) + n)
        })
    }

    #[test]
    fn fit_recovers_base_term_alone() {
        let f = planted_field(0.0, 0.0, 0.0, 0);
        let c = fit_darboux_conic(&f, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.diff_coef, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.cross_coef, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.radial_coef, 0.25);
    }

    #[test]
    fn fit_recovers_planted_coefficients() {
        let f = planted_field(0.1, 0.0, 0.0, 0);
        let c = fit_darboux_conic(&f, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.diff_coef, 0.1, epsilon = 1e-10);
        assert_abs_diff_eq!(c.cross_coef, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn fit_survives_noise() {
        let f = planted_field(-0.05, 0.02, 1e-6, 42);
        let c = fit_darboux_conic(&f, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.diff_coef, -0.05, epsilon = 1e-4);
        assert_abs_diff_eq!(c.cross_coef, 0.02, epsilon = 1e-4);
    }

    #[test]
    fn fit_rejects_degenerate_geometry() {
        let grid = GridSpec::new(-1.0, 1.0, 11, -1.0, 1.0, 11).unwrap();
        let mut f = ScalarField::empty(grid);
        for i in 0..11 {
            f.set(i, 5, 0.1); // single row: no full stencils
        }
        assert!(matches!(
            fit_darboux_conic(&f, 1.0, 1.0),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn boundary_check_on_the_round_model() {
        let conic = DarbouxConic::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let rep = ellipse_boundary_check(&conic, 0.01).unwrap();
        assert_eq!(rep.class, ConicClass::Ellipse);
        let e = rep.ellipse.unwrap();
        assert_abs_diff_eq!(e.semi_major, 0.2, epsilon = 1e-14);
        assert_abs_diff_eq!(e.semi_minor, 0.2, epsilon = 1e-14);
        assert!(e.boundary_spread < 1e-12);
        assert!(e.max_on_boundary);
        assert!(e.interior_max <= 0.01 + 1e-12);
    }

    #[test]
    fn indefinite_form_is_classified() {
        let conic = DarbouxConic::new(0.5, 0.0, 1.0, 1.0).unwrap();
        let rep = ellipse_boundary_check(&conic, 0.01).unwrap();
        assert_eq!(rep.class, ConicClass::Hyperbola);
        assert!(rep.ellipse.is_none());
    }

    #[test]
    fn planted_conic_has_constant_boundary() {
        let conic = DarbouxConic::new(0.1, 0.05, 1.0, 1.0).unwrap();
        let rep = ellipse_boundary_check(&conic, 0.02).unwrap();
        let e = rep.ellipse.unwrap();
        assert!(e.boundary_spread < 1e-12, "spread {}", e.boundary_spread);
        assert!(e.max_on_boundary);
    }

    #[test]
    fn report_on_conformal_band() {
        let def = unit(ProjectionKind::Mercator);
        let region = rect_region(-3.0, 3.0, -0.1, 0.1);
        let grid = GridSpec::new(-2.9, 2.9, 13, -0.09, 0.09, 5).unwrap();
        let rep = distortion_report(&def, &region, grid).unwrap();
        assert!(rep.sup_omega < 1e-9);
        assert!(rep.nodes > 0);
    }

    #[test]
    fn report_peaks_at_band_edge() {
        let def = unit(ProjectionKind::PlateCarree);
        let region = rect_region(-3.0, 3.0, -FRAC_PI_3 - 0.01, FRAC_PI_3 + 0.01);
        let grid = GridSpec::new(-2.0, 2.0, 9, -FRAC_PI_3, FRAC_PI_3, 9).unwrap();
        let rep = distortion_report(&def, &region, grid).unwrap();
        assert_abs_diff_eq!(rep.sup_a, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.area_scale_max, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn report_errors_on_empty_region() {
        let def = unit(ProjectionKind::PlateCarree);
        let region = rect_region(2.0, 2.1, 0.4, 0.5);
        let grid = GridSpec::new(-1.0, 1.0, 5, -1.0, 1.0, 5).unwrap();
        assert!(matches!(
            distortion_report(&def, &region, grid),
            Err(Error::EmptyRegion(_))
        ));
    }
}
