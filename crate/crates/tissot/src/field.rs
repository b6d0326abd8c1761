//! Rectangular grids, masked scalar fields, and polygonal regions.
//!
//! The same machinery serves geographic grids (x = longitude, y = latitude,
//! radians) and plane grids (x, y map lengths); which one is meant follows
//! from context.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform rectangular grid: `nx` nodes spanning `[x0, x1]`, `ny` nodes
/// spanning `[y0, y1]`, at least 2 per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x0: f64,
    x1: f64,
    nx: usize,
    y0: f64,
    y1: f64,
    ny: usize,
}

impl GridSpec {
    pub fn new(x0: f64, x1: f64, nx: usize, y0: f64, y1: f64, ny: usize) -> Result<GridSpec> {
        if !(x0 < x1) || !(y0 < y1) || !x0.is_finite() || !x1.is_finite() || !y0.is_finite() || !y1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid ranges must be finite and increasing, got [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grids need at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(GridSpec {
            x0,
            x1,
            nx,
            y0,
            y1,
            ny,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx() * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + self.dy() * j as f64
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y0, self.y1)
    }

    /// Row-major index, y outer.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

/// Scalar values on a grid with an in-region mask; a value is present exactly
/// where the mask is set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl ScalarField {
    pub fn empty(grid: GridSpec) -> ScalarField {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
            mask: vec![false; grid.len()],
        }
    }

    /// Evaluate `f` at every node; `None` leaves the node masked out.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> Option<f64>) -> ScalarField {
        let mut field = ScalarField::empty(grid);
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                if let Some(v) = f(grid.x(i), grid.y(j)) {
                    field.set(i, j, v);
                }
            }
        }
        field
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
        self.mask[k] = true;
    }

    pub fn clear(&mut self, i: usize, j: usize) {
        let k = self.grid.idx(i, j);
        self.values[k] = 0.0;
        self.mask[k] = false;
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.grid.idx(i, j);
        self.mask[k].then(|| self.values[k])
    }

    pub fn is_set(&self, i: usize, j: usize) -> bool {
        self.mask[self.grid.idx(i, j)]
    }

    pub fn count_set(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// All set nodes as `(i, j, x, y, value)`, row-major.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        let grid = self.grid;
        (0..grid.ny()).flat_map(move |j| {
            (0..grid.nx()).filter_map(move |i| {
                self.get(i, j).map(|v| (i, j, grid.x(i), grid.y(j), v))
            })
        })
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (_, _, _, _, v) in self.iter_set() {
            out = Some(match out {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        out
    }
}

/// Closed polygonal region with a distinguished central point. Coordinates
/// are `(x, y)`; for geographic regions that is `(lon, lat)` in radians.
/// Vertices must describe a simple polygon; containment uses the even-odd
/// rule on the closed vertex cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    vertices: Vec<[f64; 2]>,
    center: [f64; 2],
}

impl RegionSpec {
    pub fn new(vertices: Vec<[f64; 2]>, center: [f64; 2]) -> Result<RegionSpec> {
        if vertices.len() < 3 {
            return Err(Error::EmptyRegion(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for v in &vertices {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(Error::InvalidArgument("non-finite polygon vertex".into()));
            }
        }
        if !center[0].is_finite() || !center[1].is_finite() {
            return Err(Error::InvalidArgument("non-finite region center".into()));
        }
        Ok(RegionSpec { vertices, center })
    }

    /// Regular `n`-gon approximation of a circle.
    pub fn circle(cx: f64, cy: f64, radius: f64, n: usize) -> Result<RegionSpec> {
        if !(radius > 0.0) || n < 3 {
            return Err(Error::InvalidArgument(format!(
                "circle needs positive radius and n >= 3, got r={radius}, n={n}"
            )));
        }
        let vertices = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                [cx + radius * t.cos(), cy + radius * t.sin()]
            })
            .collect();
        RegionSpec::new(vertices, [cx, cy])
    }

    /// Geographic region from a degree-valued config record; vertices become
    /// `(lon, lat)` radians.
    pub fn from_geo_config(cfg: &RegionConfig) -> Result<RegionSpec> {
        let vertices = cfg
            .vertices
            .iter()
            .map(|v| [v.lon_deg.to_radians(), v.lat_deg.to_radians()])
            .collect();
        RegionSpec::new(
            vertices,
            [cfg.center.lon_deg.to_radians(), cfg.center.lat_deg.to_radians()],
        )
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Even-odd containment test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let [xi, yi] = self.vertices[i];
            let [xj, yj] = self.vertices[j];
            if (yi > y) != (yj > y) {
                let xc = xi + (y - yi) / (yj - yi) * (xj - xi);
                if x < xc {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// First crossing of the open segment from `p` toward `q` with the
    /// polygon boundary, as a fraction of `|q - p|` in `(0, 1]`.
    pub fn crossing_fraction(&self, p: [f64; 2], q: [f64; 2]) -> Option<f64> {
        let d = [q[0] - p[0], q[1] - p[1]];
        let n = self.vertices.len();
        let mut best: Option<f64> = None;
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[j];
            let b = self.vertices[i];
            j = i;
            let e = [b[0] - a[0], b[1] - a[1]];
            let denom = d[0] * e[1] - d[1] * e[0];
            if denom == 0.0 {
                continue;
            }
            let w = [a[0] - p[0], a[1] - p[1]];
            let t = (w[0] * e[1] - w[1] * e[0]) / denom;
            let u = (w[0] * d[1] - w[1] * d[0]) / denom;
            if t > 0.0 && t <= 1.0 && (0.0..=1.0).contains(&u) {
                best = Some(match best {
                    None => t,
                    Some(cur) => cur.min(t),
                });
            }
        }
        best
    }

    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }
}

/// JSON region record: `{vertices: [{lat_deg, lon_deg}], center: {lat_deg, lon_deg}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionConfig {
    pub vertices: Vec<GeoVertex>,
    pub center: GeoVertex,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeoVertex {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_nodes_and_spacing() {
        let g = GridSpec::new(-1.0, 1.0, 5, 0.0, 2.0, 3).unwrap();
        assert_abs_diff_eq!(g.dx(), 0.5);
        assert_abs_diff_eq!(g.dy(), 1.0);
        assert_abs_diff_eq!(g.x(0), -1.0);
        assert_abs_diff_eq!(g.x(4), 1.0);
        assert_abs_diff_eq!(g.y(2), 2.0);
        assert!(GridSpec::new(0.0, 1.0, 1, 0.0, 1.0, 4).is_err());
        assert!(GridSpec::new(1.0, 0.0, 4, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn field_mask_tracks_values() {
        let g = GridSpec::new(0.0, 1.0, 3, 0.0, 1.0, 3).unwrap();
        let mut f = ScalarField::empty(g);
        assert_eq!(f.get(1, 1), None);
        f.set(1, 1, 2.5);
        assert_eq!(f.get(1, 1), Some(2.5));
        assert_eq!(f.count_set(), 1);
        f.clear(1, 1);
        assert_eq!(f.get(1, 1), None);
    }

    #[test]
    fn polygon_containment() {
        let square = RegionSpec::new(
            vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]],
            [1.0, 1.0],
        )
        .unwrap();
        assert!(square.contains(1.0, 1.0));
        assert!(!square.contains(3.0, 1.0));
        assert!(!square.contains(-0.1, 1.0));
        assert!(RegionSpec::new(vec![[0.0, 0.0], [1.0, 0.0]], [0.0, 0.0]).is_err());
    }

    #[test]
    fn circle_contains_and_crossing() {
        let c = RegionSpec::circle(0.0, 0.0, 1.0, 256).unwrap();
        assert!(c.contains(0.0, 0.0));
        assert!(c.contains(0.69, 0.69));
        assert!(!c.contains(0.72, 0.72));
        // the ray along the x-axis meets the polygon exactly at the vertex (1, 0)
        let t = c
            .crossing_fraction([0.9, 0.0], [1.1, 0.0])
            .expect("segment crosses the boundary");
        assert_abs_diff_eq!(0.9 + t * 0.2, 1.0, epsilon = 1e-12);
        // between two vertices the chord sags to cos(pi/n)
        let half = std::f64::consts::PI / 256.0;
        let dir = [half.cos(), half.sin()];
        let t = c
            .crossing_fraction([0.0, 0.0], [1.1 * dir[0], 1.1 * dir[1]])
            .expect("radial segment crosses the boundary");
        assert_abs_diff_eq!(1.1 * t, half.cos(), epsilon = 1e-12);
        assert!(c.crossing_fraction([0.0, 0.0], [0.5, 0.0]).is_none());
    }

    #[test]
    fn geo_config_converts_degrees() {
        let json = r#"{
            "vertices": [
                {"lat_deg": 0.0, "lon_deg": 0.0},
                {"lat_deg": 0.0, "lon_deg": 10.0},
                {"lat_deg": 10.0, "lon_deg": 0.0}
            ],
            "center": {"lat_deg": 3.0, "lon_deg": 3.0}
        }"#;
        let cfg: RegionConfig = serde_json::from_str(json).unwrap();
        let r = RegionSpec::from_geo_config(&cfg).unwrap();
        assert!(r.contains(3f64.to_radians(), 3f64.to_radians()));
        assert_abs_diff_eq!(r.center()[0], 3f64.to_radians());
    }
}
