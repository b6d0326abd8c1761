//! Quasiconformal analysis of plane maps: characteristic functions `p` and
//! `theta`, grid sup-dilatation, and the rectangle extremal experiment.
//!
//! `p >= 1` is the ratio of the largest to the smallest directional stretch.
//! `theta` here is the direction of maximal stretch in the source plane,
//! folded to `(-pi/2, pi/2]`; note this is the perpendicular complement of
//! the axis convention that describes the source ellipse mapped onto a
//! circle, and differs from the image-plane `theta` of the indicatrix.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ExprMap2;
use crate::field::GridSpec;
use crate::linalg::{normalize_axis_angle, Mat2};

/// Dilatation below which a point counts as conformal.
pub const CONFORMAL_TOL: f64 = 1e-9;

/// Axis-aligned rectangle domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectDomain {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl RectDomain {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<RectDomain> {
        if !(x0 < x1) || !(y0 < y1) {
            return Err(Error::InvalidArgument(format!(
                "rectangle must have positive extent, got [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(RectDomain { x0, x1, y0, y1 })
    }

    pub fn unit() -> RectDomain {
        RectDomain {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    pub fn grid(&self, nx: usize, ny: usize) -> Result<GridSpec> {
        GridSpec::new(self.x0, self.x1, nx, self.y0, self.y1, ny)
    }
}

#[derive(Debug, Clone)]
enum MapKind {
    Affine { m: Mat2, offset: [f64; 2] },
    Exprs(ExprMap2),
}

/// Differentiable map of a plane rectangle into the plane, either affine or
/// defined by expressions `u(x, y)`, `v(x, y)`.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    kind: MapKind,
    domain: RectDomain,
}

impl PlanarMap {
    pub fn affine(m: Mat2, offset: [f64; 2], domain: RectDomain) -> Result<PlanarMap> {
        for row in m.m {
            for v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidArgument("non-finite affine matrix".into()));
                }
            }
        }
        Ok(PlanarMap {
            kind: MapKind::Affine { m, offset },
            domain,
        })
    }

    /// Parse the compact `u = <expr>; v = <expr>` form over variables `x`, `y`.
    pub fn parse(text: &str, domain: RectDomain) -> Result<PlanarMap> {
        Ok(PlanarMap {
            kind: MapKind::Exprs(ExprMap2::parse(text, ["u", "v"], ["x", "y"])?),
            domain,
        })
    }

    pub fn from_config(cfg: &PlanarMapConfig) -> Result<PlanarMap> {
        let domain = match &cfg.domain {
            Some(d) => RectDomain::new(d.x0, d.x1, d.y0, d.y1)?,
            None => RectDomain::unit(),
        };
        match (&cfg.expressions, &cfg.affine) {
            (Some(e), None) => Ok(PlanarMap {
                kind: MapKind::Exprs(ExprMap2::from_parts(
                    &e.u,
                    &e.v,
                    ["u", "v"],
                    ["x", "y"],
                )?),
                domain,
            }),
            (None, Some(a)) => {
                let offset = cfg.offset.unwrap_or([0.0, 0.0]);
                PlanarMap::affine(
                    Mat2::new(a[0][0], a[0][1], a[1][0], a[1][1]),
                    offset,
                    domain,
                )
            }
            _ => Err(Error::Config(
                "planar map config needs exactly one of `expressions` or `affine`".into(),
            )),
        }
    }

    pub fn domain(&self) -> RectDomain {
        self.domain
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutOfDomain(format!(
                "({x}, {y}) outside the map rectangle"
            )));
        }
        let (u, v) = match &self.kind {
            MapKind::Affine { m, offset } => {
                let w = m.mul_vec([x, y]);
                (w[0] + offset[0], w[1] + offset[1])
            }
            MapKind::Exprs(e) => e.eval(x, y),
        };
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "map evaluates to a non-finite point at ({x}, {y})"
            )));
        }
        Ok((u, v))
    }

    /// Jacobian at an interior point: exact for affine maps, central
    /// differences (step 1e-6, shrunk near the rectangle edge) otherwise.
    pub fn jacobian(&self, x: f64, y: f64) -> Result<Mat2> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutOfDomain(format!(
                "({x}, {y}) outside the map rectangle"
            )));
        }
        match &self.kind {
            MapKind::Affine { m, .. } => Ok(*m),
            MapKind::Exprs(e) => {
                let eval = |x: f64, y: f64| -> Result<(f64, f64)> {
                    let (u, v) = e.eval(x, y);
                    if !u.is_finite() || !v.is_finite() {
                        return Err(Error::OutOfDomain(format!(
                            "map evaluates to a non-finite point at ({x}, {y})"
                        )));
                    }
                    Ok((u, v))
                };
                let (du_dx, dv_dx) =
                    diff_axis(|t| eval(t, y), x, self.domain.x0, self.domain.x1)?;
                let (du_dy, dv_dy) =
                    diff_axis(|t| eval(x, t), y, self.domain.y0, self.domain.y1)?;
                Ok(Mat2::new(du_dx, du_dy, dv_dx, dv_dy))
            }
        }
    }
}

/// Second-order partial along one axis: central differences in the interior,
/// 3-point one-sided stencils at the rectangle edge.
fn diff_axis(
    f: impl Fn(f64) -> Result<(f64, f64)>,
    t: f64,
    lo: f64,
    hi: f64,
) -> Result<(f64, f64)> {
    let h = 1e-6f64.min((hi - lo) / 4.0);
    if t - h >= lo && t + h <= hi {
        let (u1, v1) = f(t + h)?;
        let (u0, v0) = f(t - h)?;
        Ok(((u1 - u0) / (2.0 * h), (v1 - v0) / (2.0 * h)))
    } else if t + 2.0 * h <= hi {
        let (u0, v0) = f(t)?;
        let (u1, v1) = f(t + h)?;
        let (u2, v2) = f(t + 2.0 * h)?;
        Ok((
            (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h),
            (-3.0 * v0 + 4.0 * v1 - v2) / (2.0 * h),
        ))
    } else if t - 2.0 * h >= lo {
        let (u0, v0) = f(t)?;
        let (u1, v1) = f(t - h)?;
        let (u2, v2) = f(t - 2.0 * h)?;
        Ok((
            (3.0 * u0 - 4.0 * u1 + u2) / (2.0 * h),
            (3.0 * v0 - 4.0 * v1 + v2) / (2.0 * h),
        ))
    } else {
        Err(Error::OutOfDomain(format!(
            "stencil around {t} leaves the rectangle [{lo}, {hi}]"
        )))
    }
}

/// Characteristic pair of a plane map at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Characteristics {
    /// Dilatation `p >= 1`.
    pub p: f64,
    /// Maximal-stretch direction in the source plane, `(-pi/2, pi/2]`;
    /// 0 when not unique.
    pub theta: f64,
    /// False at conformal points (`p - 1 <` [`CONFORMAL_TOL`]), where every
    /// direction stretches alike.
    pub unique: bool,
}

/// Characteristics of a plain matrix (the Jacobian of some map).
pub fn characteristics_of(j: &Mat2) -> Result<Characteristics> {
    let det = j.det();
    if !(det > 0.0) {
        return Err(Error::Degenerate(format!(
            "jacobian determinant {det} is not positive (orientation-reversing or singular)"
        )));
    }
    let svd = j.svd();
    let p = svd.s[0] / svd.s[1];
    let unique = p - 1.0 >= CONFORMAL_TOL;
    let theta = if unique {
        normalize_axis_angle(svd.v.m[1][0].atan2(svd.v.m[0][0]))
    } else {
        0.0
    };
    Ok(Characteristics { p, theta, unique })
}

/// Characteristics of `map` at an interior point.
pub fn characteristics(map: &PlanarMap, x: f64, y: f64) -> Result<Characteristics> {
    characteristics_of(&map.jacobian(x, y)?)
}

/// Maximum dilatation over the grid nodes; fails if any node does.
pub fn sup_dilatation(map: &PlanarMap, grid: GridSpec) -> Result<f64> {
    let mut sup = 1.0f64;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let c = characteristics(map, grid.x(i), grid.y(j))?;
            sup = sup.max(c.p);
        }
    }
    Ok(sup)
}

/// Source and target rectangle dimensions for the extremal problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RectanglePair {
    pub src_w: f64,
    pub src_h: f64,
    pub dst_w: f64,
    pub dst_h: f64,
}

impl RectanglePair {
    pub fn new(src_w: f64, src_h: f64, dst_w: f64, dst_h: f64) -> Result<RectanglePair> {
        for v in [src_w, src_h, dst_w, dst_h] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "rectangle dimensions must be positive, got {v}"
                )));
            }
        }
        Ok(RectanglePair {
            src_w,
            src_h,
            dst_w,
            dst_h,
        })
    }
}

/// The corner-respecting affine map `(x, y) -> (x w'/w, y h'/h)` between the
/// rectangles and its dilatation `K = max(r, 1/r)`, `r = (w'/w)/(h'/h)`.
/// `K = 1` exactly when the aspect ratios agree.
pub fn grotzsch_affine(pair: &RectanglePair) -> (PlanarMap, f64) {
    let sx = pair.dst_w / pair.src_w;
    let sy = pair.dst_h / pair.src_h;
    let r = sx / sy;
    let k = r.max(1.0 / r);
    let map = PlanarMap::affine(
        Mat2::diagonal(sx, sy),
        [0.0, 0.0],
        RectDomain {
            x0: 0.0,
            x1: pair.src_w,
            y0: 0.0,
            y1: pair.src_h,
        },
    )
    .expect("finite scales");
    (map, k)
}

/// Controls for [`grotzsch_experiment`].
#[derive(Debug, Clone, Copy)]
pub struct GrotzschOptions {
    pub trials: usize,
    pub seed: u64,
    /// Bump-coefficient bound; `None` picks 0.2x the evaluation cell size.
    pub amplitude: Option<f64>,
    /// Evaluation grid is `grid_n x grid_n`.
    pub grid_n: usize,
    /// Bump modes per axis.
    pub modes: usize,
}

impl Default for GrotzschOptions {
    fn default() -> Self {
        GrotzschOptions {
            trials: 100,
            seed: 0,
            amplitude: None,
            grid_n: 33,
            modes: 3,
        }
    }
}

/// Outcome of the rectangle extremal experiment.
#[derive(Debug, Clone, Serialize)]
pub struct GrotzschReport {
    pub pair: RectanglePair,
    pub affine_k: f64,
    pub trials: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub min_sup_dilatation: Option<f64>,
    /// Trial index attaining the minimum (first on ties).
    pub min_trial: Option<usize>,
    pub seed: u64,
    pub amplitude: f64,
    pub grid_n: usize,
}

/// Sample corner-fixing perturbations of the affine map (tensor-product sine
/// bumps vanishing on the boundary frame), evaluate each trial's grid
/// sup-dilatation, and report the minimum. Trials whose perturbation breaks
/// injectivity (non-positive determinant on the check grid) are rejected and
/// counted. Every reported minimum satisfies `min >= K` up to rounding.
pub fn grotzsch_experiment(pair: &RectanglePair, opts: &GrotzschOptions) -> Result<GrotzschReport> {
    if opts.trials < 1 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if opts.grid_n < 3 || opts.modes < 1 {
        return Err(Error::InvalidArgument(
            "need grid_n >= 3 and modes >= 1".into(),
        ));
    }
    let (w, h) = (pair.src_w, pair.src_h);
    let sx = pair.dst_w / w;
    let sy = pair.dst_h / h;
    let affine_k = (sx / sy).max(sy / sx);
    let cell = w.min(h) / (opts.grid_n - 1) as f64;
    let amplitude = opts.amplitude.unwrap_or(0.2 * cell);
    if amplitude < 0.0 || !amplitude.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be non-negative, got {amplitude}"
        )));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let n_coeff = opts.modes * opts.modes;
    let mut min_sup: Option<f64> = None;
    let mut min_trial: Option<usize> = None;
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    for trial in 0..opts.trials {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            (0..n_coeff)
                .map(|_| {
                    if amplitude > 0.0 {
                        rng.random_range(-amplitude..amplitude)
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let cu = draw(&mut rng);
        let cv = draw(&mut rng);
        let bump = BumpMap {
            sx,
            sy,
            w,
            h,
            modes: opts.modes,
            cu,
            cv,
        };

        // injectivity: positive determinant on a finer check grid
        let check_n = 2 * opts.grid_n - 1;
        let mut injective = true;
        'check: for j in 0..check_n {
            for i in 0..check_n {
                let x = w * i as f64 / (check_n - 1) as f64;
                let y = h * j as f64 / (check_n - 1) as f64;
                if bump.jacobian(x, y).det() <= 0.0 {
                    injective = false;
                    break 'check;
                }
            }
        }
        if !injective {
            rejected += 1;
            continue;
        }
        accepted += 1;

        let mut sup = 1.0f64;
        for j in 0..opts.grid_n {
            for i in 0..opts.grid_n {
                let x = w * i as f64 / (opts.grid_n - 1) as f64;
                let y = h * j as f64 / (opts.grid_n - 1) as f64;
                let c = characteristics_of(&bump.jacobian(x, y))?;
                sup = sup.max(c.p);
            }
        }
        if min_sup.map_or(true, |cur| sup < cur) {
            min_sup = Some(sup);
            min_trial = Some(trial);
        }
    }

    Ok(GrotzschReport {
        pair: *pair,
        affine_k,
        trials: opts.trials,
        accepted,
        rejected,
        min_sup_dilatation: min_sup,
        min_trial,
        seed: opts.seed,
        amplitude,
        grid_n: opts.grid_n,
    })
}

/// Affine map plus tensor-product sine bumps that vanish on the boundary
/// frame of the source rectangle; partials are exact.
struct BumpMap {
    sx: f64,
    sy: f64,
    w: f64,
    h: f64,
    modes: usize,
    cu: Vec<f64>,
    cv: Vec<f64>,
}

impl BumpMap {
    fn jacobian(&self, x: f64, y: f64) -> Mat2 {
        let mut dudx = self.sx;
        let mut dudy = 0.0;
        let mut dvdx = 0.0;
        let mut dvdy = self.sy;
        for i in 1..=self.modes {
            for j in 1..=self.modes {
                let k = (i - 1) * self.modes + (j - 1);
                let ax = i as f64 * std::f64::consts::PI / self.w;
                let ay = j as f64 * std::f64::consts::PI / self.h;
                let (sxi, cxi) = (ax * x).sin_cos();
                let (syj, cyj) = (ay * y).sin_cos();
                dudx += self.cu[k] * ax * cxi * syj;
                dudy += self.cu[k] * ay * sxi * cyj;
                dvdx += self.cv[k] * ax * cxi * syj;
                dvdy += self.cv[k] * ay * sxi * cyj;
            }
        }
        Mat2::new(dudx, dudy, dvdx, dvdy)
    }
}

/// JSON planar-map record:
/// `{expressions: {u, v}, domain?: {x0, x1, y0, y1}}` or
/// `{affine: [[m11, m12], [m21, m22]], offset?: [tx, ty], domain?: {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanarMapConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expressions: Option<UvExpressions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<RectDomain>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UvExpressions {
    pub u: String,
    pub v: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn wide() -> RectDomain {
        RectDomain::new(-2.0, 2.0, -2.0, 2.0).unwrap()
    }

    #[test]
    fn identity_and_rotation_are_conformal() {
        let id = PlanarMap::affine(Mat2::identity(), [0.0, 0.0], wide()).unwrap();
        let c = characteristics(&id, 0.3, -0.7).unwrap();
        assert_eq!(c.p, 1.0);
        assert!(!c.unique);
        assert_eq!(c.theta, 0.0);

        let rot = PlanarMap::affine(Mat2::rotation(0.83), [1.0, 2.0], wide()).unwrap();
        let c = characteristics(&rot, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(c.p, 1.0, epsilon = 1e-12);
        assert!(!c.unique);
    }

    #[test]
    fn axis_stretch_characteristics() {
        let m = PlanarMap::affine(Mat2::diagonal(2.0, 1.0), [0.0, 0.0], wide()).unwrap();
        let c = characteristics(&m, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(c.p, 2.0, epsilon = 1e-14);
        assert_eq!(c.theta, 0.0);
        assert!(c.unique);
    }

    #[test]
    fn orientation_reversal_is_rejected() {
        let m = PlanarMap::affine(Mat2::diagonal(-1.0, 1.0), [0.0, 0.0], wide()).unwrap();
        assert!(matches!(
            characteristics(&m, 0.0, 0.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn rotation_invariance_of_p_and_theta_shift() {
        let base = Mat2::new(1.7, 0.3, -0.2, 0.9);
        let c0 = characteristics_of(&base).unwrap();
        for phi in [0.3, -0.9, 1.2] {
            // pre-composition with a source rotation
            let pre = base.mul(&Mat2::rotation(phi));
            let c = characteristics_of(&pre).unwrap();
            assert_abs_diff_eq!(c.p, c0.p, epsilon = 1e-10);
            let expect = normalize_axis_angle(c0.theta - phi);
            assert_abs_diff_eq!(c.theta, expect, epsilon = 1e-10);
            // post-composition with a rotation and a scaling
            let post = Mat2::rotation(phi).mul(&base);
            let c = characteristics_of(&post).unwrap();
            assert_abs_diff_eq!(c.p, c0.p, epsilon = 1e-10);
            assert_abs_diff_eq!(c.theta, c0.theta, epsilon = 1e-10);
            let scaled = Mat2::diagonal(3.0, 3.0).mul(&base);
            let c = characteristics_of(&scaled).unwrap();
            assert_abs_diff_eq!(c.p, c0.p, epsilon = 1e-10);
        }
    }

    #[test]
    fn expression_map_dilatation_field() {
        // u = x + 0.1 x^2: p = 1 + 0.2 x on the unit square
        let m = PlanarMap::parse("u = x + 0.1 * x^2; v = y", RectDomain::unit()).unwrap();
        let grid = RectDomain::unit().grid(11, 11).unwrap();
        let sup = sup_dilatation(&m, grid).unwrap();
        assert_abs_diff_eq!(sup, 1.2, epsilon = 1e-6);
        let c = characteristics(&m, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(c.p, 1.1, epsilon = 1e-6);
    }

    #[test]
    fn sup_dilatation_of_affine_is_grid_independent() {
        let m = PlanarMap::affine(Mat2::diagonal(3.0, 1.0), [0.0, 0.0], wide()).unwrap();
        for n in [5usize, 9, 17] {
            let grid = wide().grid(n, n).unwrap();
            assert_abs_diff_eq!(sup_dilatation(&m, grid).unwrap(), 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn grotzsch_affine_examples() {
        let k = |a, b, c, d| grotzsch_affine(&RectanglePair::new(a, b, c, d).unwrap()).1;
        assert_eq!(k(1.0, 1.0, 2.0, 2.0), 1.0);
        assert_eq!(k(1.0, 1.0, 2.0, 1.0), 2.0);
        assert_eq!(k(2.0, 1.0, 1.0, 2.0), 4.0);
        assert_eq!(k(1.0, 1.0, 3.0, 2.0), 1.5);
    }

    #[test]
    fn zero_amplitude_experiment_reduces_to_affine() {
        let pair = RectanglePair::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let opts = GrotzschOptions {
            trials: 3,
            amplitude: Some(0.0),
            grid_n: 9,
            ..Default::default()
        };
        let rep = grotzsch_experiment(&pair, &opts).unwrap();
        assert_eq!(rep.accepted, 3);
        assert_eq!(rep.min_sup_dilatation, Some(2.0));
        assert_eq!(rep.min_trial, Some(0));
    }

    #[test]
    fn matching_aspect_ratio_attains_one() {
        let pair = RectanglePair::new(1.0, 1.0, 2.0, 2.0).unwrap();
        let opts = GrotzschOptions {
            trials: 10,
            seed: 7,
            grid_n: 17,
            ..Default::default()
        };
        let rep = grotzsch_experiment(&pair, &opts).unwrap();
        assert_eq!(rep.affine_k, 1.0);
        assert!(rep.min_sup_dilatation.unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn perturbed_trials_never_beat_the_affine_map() {
        let pair = RectanglePair::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let opts = GrotzschOptions {
            trials: 40,
            seed: 42,
            grid_n: 25,
            ..Default::default()
        };
        let rep = grotzsch_experiment(&pair, &opts).unwrap();
        assert!(rep.accepted > 0);
        assert!(rep.min_sup_dilatation.unwrap() >= rep.affine_k - 1e-9);
    }

    #[test]
    fn config_forms() {
        let j = r#"{"affine": [[2.0, 0.0], [0.0, 1.0]], "offset": [1.0, 0.0]}"#;
        let cfg: PlanarMapConfig = serde_json::from_str(j).unwrap();
        let m = PlanarMap::from_config(&cfg).unwrap();
        assert_eq!(m.eval(0.5, 0.5).unwrap(), (2.0, 0.5));

        let j = r#"{"expressions": {"u": "2 * x", "v": "y"},
                    "domain": {"x0": 0.0, "x1": 1.0, "y0": 0.0, "y1": 1.0}}"#;
        let cfg: PlanarMapConfig = serde_json::from_str(j).unwrap();
        let m = PlanarMap::from_config(&cfg).unwrap();
        let c = characteristics(&m, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(c.p, 2.0, epsilon = 1e-6);

        let bad: PlanarMapConfig = serde_json::from_str("{}").unwrap();
        assert!(PlanarMap::from_config(&bad).is_err());
    }

    #[test]
    fn dilatation_agrees_with_indicatrix_axes() {
        use crate::indicatrix::{distortion_ellipse, normalized_differential};
        use crate::projection::{ProjectionDef, ProjectionKind};
        use crate::surface::{GeoPoint, Surface};
        let origin = GeoPoint::new(0.0, 0.0).unwrap();
        for kind in [
            ProjectionKind::PlateCarree,
            ProjectionKind::Sinusoidal,
            ProjectionKind::Cassini,
        ] {
            let def = ProjectionDef::catalog(kind, Surface::unit_sphere(), origin).unwrap();
            for k in 0..6 {
                let p = GeoPoint::new(-1.0 + 0.37 * k as f64, 0.2 + 0.19 * k as f64).unwrap();
                let mut s = normalized_differential(&def, p).unwrap();
                if s.det() < 0.0 {
                    // orient the source frame; p is reflection-invariant
                    s = s.mul(&Mat2::new(0.0, 1.0, 1.0, 0.0));
                }
                let c = characteristics_of(&s).unwrap();
                let ind = distortion_ellipse(&def, p).unwrap();
                assert!((c.p - ind.a / ind.b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn theta_range_is_half_open() {
        let m = Mat2::rotation(FRAC_PI_2).mul(&Mat2::diagonal(2.0, 1.0));
        let c = characteristics_of(&m).unwrap();
        // major stretch direction is still the x-axis (post-rotation)
        assert_abs_diff_eq!(c.theta, 0.0, epsilon = 1e-12);
    }
}
