//! The distortion engine: projection differentials, ground-normalized scale
//! analysis, distortion ellipses, principal tangents, and the net-ratio
//! formulas for maps given by corresponding parallelogram meshes.
//!
//! Scale factors are image length per unit ground length: the differential is
//! normalized by the inverse metric square root so that a unit circle in the
//! tangent plane of the surface maps to an ellipse with semi-axes `a >= b`.

use crate::error::{Error, Result};
use crate::linalg::{normalize_axis_angle, Mat2};
use crate::projection::ProjectionDef;
use crate::surface::GeoPoint;

/// Two points count as equally stretched when `a/b - 1` falls below this.
pub const CONFORMAL_TOL: f64 = 1e-9;

/// Default finite-difference step (radians).
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Partials of the map coordinates with respect to latitude `l` and
/// longitude `m` (map length per radian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2 {
    pub dxdl: f64,
    pub dxdm: f64,
    pub dydl: f64,
    pub dydm: f64,
}

impl Jacobian2 {
    pub fn det(&self) -> f64 {
        self.dxdl * self.dydm - self.dxdm * self.dydl
    }

    pub fn is_degenerate(&self) -> bool {
        self.det() == 0.0 || !self.det().is_finite()
    }

    /// Column order: (d/dl, d/dm).
    pub fn as_mat(&self) -> Mat2 {
        Mat2::new(self.dxdl, self.dxdm, self.dydl, self.dydm)
    }
}

/// How to differentiate a projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffMode {
    /// Closed form when the catalog provides one, central differences otherwise.
    Auto,
    /// Closed form only; errors for custom projections.
    Analytic,
    /// Central differences with the given step (radians). The stencil shrinks
    /// near domain edges.
    Numeric { step: f64 },
}

impl Default for DiffMode {
    fn default() -> Self {
        DiffMode::Numeric {
            step: DEFAULT_FD_STEP,
        }
    }
}

/// Jacobian of `def` at `p`.
pub fn jacobian(def: &ProjectionDef, p: GeoPoint, mode: DiffMode) -> Result<Jacobian2> {
    let l = p.lat();
    let m = def.lon_from_center(p);
    match mode {
        DiffMode::Auto => match def.analytic_jacobian(l, m) {
            Some(j) => j,
            None => numeric_jacobian(def, l, m, DEFAULT_FD_STEP),
        },
        DiffMode::Analytic => def.analytic_jacobian(l, m).unwrap_or_else(|| {
            Err(Error::Unsupported(format!(
                "no closed-form partials for `{}`",
                def.id()
            )))
        }),
        DiffMode::Numeric { step } => numeric_jacobian(def, l, m, step),
    }
}

fn numeric_jacobian(def: &ProjectionDef, l: f64, m: f64, step: f64) -> Result<Jacobian2> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let fit = |along_l: bool| -> Result<f64> {
        let mut h = step;
        for _ in 0..28 {
            let ok = if along_l {
                def.domain_contains(l + h, m) && def.domain_contains(l - h, m)
            } else {
                def.domain_contains(l, m + h) && def.domain_contains(l, m - h)
            };
            if ok {
                return Ok(h);
            }
            h *= 0.5;
        }
        Err(Error::OutOfDomain(format!(
            "stencil around ({l}, {m}) leaves the {} domain",
            def.id()
        )))
    };
    let hl = fit(true)?;
    let hm = fit(false)?;
    let pl = def.eval_raw(l + hl, m)?;
    let ml = def.eval_raw(l - hl, m)?;
    let pm = def.eval_raw(l, m + hm)?;
    let mm = def.eval_raw(l, m - hm)?;
    Ok(Jacobian2 {
        dxdl: (pl.x - ml.x) / (2.0 * hl),
        dxdm: (pm.x - mm.x) / (2.0 * hm),
        dydl: (pl.y - ml.y) / (2.0 * hl),
        dydm: (pm.y - mm.y) / (2.0 * hm),
    })
}

/// Ground-normalized differential `S = J * G^{-1/2}`: it maps components in
/// the orthonormal (meridian, parallel) tangent frame to map displacements.
pub fn normalized_differential(def: &ProjectionDef, p: GeoPoint) -> Result<Mat2> {
    let form = def.surface().fundamental_form(p);
    if form.g <= 0.0 {
        return Err(Error::Degenerate(format!(
            "parallel radius vanishes at latitude {}",
            p.lat()
        )));
    }
    let metric = Mat2::new(form.e, form.f, form.f, form.g);
    let root = metric
        .sqrt_spd()
        .ok_or_else(|| Error::Degenerate("metric is not positive definite".into()))?;
    let inv = root
        .inverse()
        .ok_or_else(|| Error::Degenerate("metric square root is singular".into()))?;
    let j = jacobian(def, p, DiffMode::Auto)?;
    Ok(j.as_mat().mul(&inv))
}

/// Per-point distortion record: extreme scale factors, ellipse orientation,
/// angular deformation, areal scale, and the principal directions on the
/// surface (components in the normalized meridian/parallel frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indicatrix {
    /// Largest scale factor.
    pub a: f64,
    /// Smallest scale factor.
    pub b: f64,
    /// Major-axis direction of the image ellipse in the map plane,
    /// `(-pi/2, pi/2]`; 0 when the axes are not unique.
    pub theta: f64,
    /// Greatest angular deformation, `2 asin((a-b)/(a+b))`.
    pub omega: f64,
    /// `a * b`.
    pub area_scale: f64,
    /// Surface direction stretched by `a`.
    pub dir_major_domain: [f64; 2],
    /// Surface direction stretched by `b`.
    pub dir_minor_domain: [f64; 2],
    /// False when the point is conformal (`a/b - 1 <` [`CONFORMAL_TOL`]) and
    /// every orthogonal pair works.
    pub axes_unique: bool,
}

fn canonical_axis(v: [f64; 2]) -> [f64; 2] {
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Distortion ellipse of `def` at `p`.
pub fn distortion_ellipse(def: &ProjectionDef, p: GeoPoint) -> Result<Indicatrix> {
    let s = normalized_differential(def, p)?;
    let svd = s.svd();
    let (a, b) = (svd.s[0], svd.s[1]);
    if !(b > 0.0) || !a.is_finite() {
        return Err(Error::Degenerate(format!(
            "differential of `{}` has vanishing determinant at ({}, {})",
            def.id(),
            p.lat(),
            p.lon()
        )));
    }
    let axes_unique = a / b - 1.0 >= CONFORMAL_TOL;
    let theta = if axes_unique {
        normalize_axis_angle(svd.u.m[1][0].atan2(svd.u.m[0][0]))
    } else {
        0.0
    };
    Ok(Indicatrix {
        a,
        b,
        theta,
        omega: max_angle_deformation(a, b)?,
        area_scale: a * b,
        dir_major_domain: canonical_axis(svd.v.column(0)),
        dir_minor_domain: canonical_axis(svd.v.column(1)),
        axes_unique,
    })
}

/// Orthogonal direction pairs preserved by the map at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalTangents {
    /// Orthogonal surface directions (normalized meridian/parallel frame).
    pub domain: [[f64; 2]; 2],
    /// Their images in the map plane, unit length.
    pub image: [[f64; 2]; 2],
    /// False when the point is conformal and the pair is one of infinitely many.
    pub unique: bool,
}

/// The orthogonal surface directions whose images stay orthogonal. At
/// conformal points (within [`CONFORMAL_TOL`]) the meridian/parallel frame is
/// returned and `unique` is false.
pub fn principal_tangents(def: &ProjectionDef, p: GeoPoint) -> Result<PrincipalTangents> {
    let s = normalized_differential(def, p)?;
    let svd = s.svd();
    if !(svd.s[1] > 0.0) {
        return Err(Error::Degenerate(format!(
            "differential of `{}` has vanishing determinant at ({}, {})",
            def.id(),
            p.lat(),
            p.lon()
        )));
    }
    let unique = svd.s[0] / svd.s[1] - 1.0 >= CONFORMAL_TOL;
    let domain = if unique {
        [canonical_axis(svd.v.column(0)), canonical_axis(svd.v.column(1))]
    } else {
        [[1.0, 0.0], [0.0, 1.0]]
    };
    let image = [unit(s.mul_vec(domain[0])), unit(s.mul_vec(domain[1]))];
    Ok(PrincipalTangents {
        domain,
        image,
        unique,
    })
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Greatest angular deformation for extreme scale factors `a`, `b`:
/// `2 asin(|a - b| / (a + b))`.
pub fn max_angle_deformation(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale factors must be positive, got ({a}, {b})"
        )));
    }
    Ok(2.0 * ((a - b).abs() / (a + b)).asin())
}

/// Side ratios and angles of the corresponding infinitesimal parallelograms
/// cut by the coordinate curves on the surface and on the map.
///
/// `h` and `k` are source-over-image, matching the net formulas they come
/// from; the indicatrix scale factors are image-over-source, so the
/// reciprocals are exposed as methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelogramRatios {
    /// `L / L'`: meridian-side ratio, source over image.
    pub h: f64,
    /// `M / M'`: parallel-side ratio, source over image.
    pub k: f64,
    /// Angle of the source parallelogram, `(0, pi)`.
    pub theta_src: f64,
    /// Angle of the image parallelogram, `(0, pi)`.
    pub theta_img: f64,
}

impl ParallelogramRatios {
    pub fn h_image_over_source(&self) -> f64 {
        1.0 / self.h
    }

    pub fn k_image_over_source(&self) -> f64 {
        1.0 / self.k
    }
}

/// Net ratios at `p`: sides from the embedded-surface partials, image sides
/// from the map partials with the plane embedded at `z = 0`.
pub fn parallelogram_ratios(def: &ProjectionDef, p: GeoPoint) -> Result<ParallelogramRatios> {
    let (dl, dm) = def.surface().embed_partials(p);
    let len = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let l_src = len(&dl);
    let m_src = len(&dm);
    if l_src == 0.0 || m_src == 0.0 {
        return Err(Error::Degenerate(format!(
            "surface net collapses at latitude {}",
            p.lat()
        )));
    }
    let j = jacobian(def, p, DiffMode::Auto)?;
    let l_img = j.dxdl.hypot(j.dydl);
    let m_img = j.dxdm.hypot(j.dydm);
    if l_img == 0.0 || m_img == 0.0 {
        return Err(Error::Degenerate(format!(
            "image net collapses at ({}, {})",
            p.lat(),
            p.lon()
        )));
    }
    let cos_src = (dl[0] * dm[0] + dl[1] * dm[1] + dl[2] * dm[2]) / (l_src * m_src);
    let cos_img = (j.dxdl * j.dxdm + j.dydl * j.dydm) / (l_img * m_img);
    if cos_src.abs() >= 1.0 - 1e-12 || cos_img.abs() >= 1.0 - 1e-12 {
        return Err(Error::Degenerate("net angle collapsed to 0 or pi".into()));
    }
    Ok(ParallelogramRatios {
        h: l_src / l_img,
        k: m_src / m_img,
        theta_src: cos_src.clamp(-1.0, 1.0).acos(),
        theta_img: cos_img.clamp(-1.0, 1.0).acos(),
    })
}

/// Ellipse semi-axes for a map whose two net directions share the stretch
/// `h`, with net angles `theta_src` on the surface and `theta_img` on the
/// map: `h cos(theta_img/2)/cos(theta_src/2)` and
/// `h sin(theta_img/2)/sin(theta_src/2)`, sorted so `a >= b`.
pub fn special_case_axes(h: f64, theta_src: f64, theta_img: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "common ratio must be positive, got {h}"
        )));
    }
    for t in [theta_src, theta_img] {
        if !(t > 0.0 && t < std::f64::consts::PI) {
            return Err(Error::InvalidArgument(format!(
                "net angle {t} outside (0, pi)"
            )));
        }
    }
    let a = h * (theta_img / 2.0).cos() / (theta_src / 2.0).cos();
    let b = h * (theta_img / 2.0).sin() / (theta_src / 2.0).sin();
    Ok((a.max(b), a.min(b)))
}
