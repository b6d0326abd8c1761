//! Small dense 2x2 helpers: closed-form SVD, SPD square root, inverses.
//!
//! Everything here is branch-light and allocation-free; the SVD is the
//! rotation form built from the sum/difference angles of the matrix, which is
//! exact for every finite input including rank-deficient ones.

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

/// Result of [`Mat2::svd`]: `self == u * diag(s) * v^T`, with `s[0] >= s[1] >= 0`,
/// `u` a rotation and `v` orthogonal (a reflection exactly when `det < 0`).
#[derive(Debug, Clone, Copy)]
pub struct Svd2 {
    pub u: Mat2,
    pub s: [f64; 2],
    pub v: Mat2,
}

impl Mat2 {
    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2 {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diagonal(d0: f64, d1: f64) -> Self {
        Mat2::new(d0, 0.0, 0.0, d1)
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn column(&self, j: usize) -> [f64; 2] {
        [self.m[0][j], self.m[1][j]]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Closed-form SVD via the sum/difference rotation angles.
    pub fn svd(&self) -> Svd2 {
        let e = (self.m[0][0] + self.m[1][1]) / 2.0;
        let f = (self.m[0][0] - self.m[1][1]) / 2.0;
        let g = (self.m[1][0] + self.m[0][1]) / 2.0;
        let h = (self.m[1][0] - self.m[0][1]) / 2.0;

        let q = e.hypot(h);
        let r = f.hypot(g);
        let sx = q + r;
        let sy = q - r; // negative iff det < 0

        let a1 = g.atan2(f);
        let a2 = h.atan2(e);
        let gamma = (a1 + a2) / 2.0; // left rotation
        let beta = (a1 - a2) / 2.0; // right rotation

        let u = Mat2::rotation(gamma);
        let mut v = Mat2::rotation(beta);
        let s2 = sy.abs();
        if sy < 0.0 {
            v.m[0][1] = -v.m[0][1];
            v.m[1][1] = -v.m[1][1];
        }
        Svd2 {
            u,
            s: [sx, s2],
            v,
        }
    }

    /// Matrix square root of a symmetric positive-definite matrix.
    pub fn sqrt_spd(&self) -> Option<Mat2> {
        let d = self.det();
        let t = self.m[0][0] + self.m[1][1];
        if d <= 0.0 || t <= 0.0 {
            return None;
        }
        let sq = d.sqrt();
        let denom = (t + 2.0 * sq).sqrt();
        Some(Mat2::new(
            (self.m[0][0] + sq) / denom,
            self.m[0][1] / denom,
            self.m[1][0] / denom,
            (self.m[1][1] + sq) / denom,
        ))
    }
}

/// Fold an axis direction into `(-pi/2, pi/2]`.
pub fn normalize_axis_angle(angle: f64) -> f64 {
    let mut a = angle % std::f64::consts::PI;
    if a <= -std::f64::consts::FRAC_PI_2 {
        a += std::f64::consts::PI;
    } else if a > std::f64::consts::FRAC_PI_2 {
        a -= std::f64::consts::PI;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reconstruct(svd: &Svd2) -> Mat2 {
        svd.u
            .mul(&Mat2::diagonal(svd.s[0], svd.s[1]))
            .mul(&svd.v.transpose())
    }

    fn assert_orthogonal(m: &Mat2) {
        let p = m.mul(&m.transpose());
        assert_abs_diff_eq!(p.m[0][0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.m[1][1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.m[0][1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn svd_known_values() {
        // singular values of [[1,2],[3,4]]
        let s = Mat2::new(1.0, 2.0, 3.0, 4.0).svd();
        assert_abs_diff_eq!(s.s[0], 5.464985704219043, epsilon = 1e-12);
        assert_abs_diff_eq!(s.s[1], 0.3659661906262575, epsilon = 1e-12);
    }

    #[test]
    fn svd_reconstructs_and_is_orthogonal() {
        let cases = [
            Mat2::new(1.0, 2.0, 3.0, 4.0),
            Mat2::new(0.0, 2.0, 1.0, 0.0),
            Mat2::new(2.0, 0.0, 0.0, 2.0),
            Mat2::new(1.0, 0.0, 0.0, -3.0),
            Mat2::new(0.0, 0.0, 0.0, 0.0),
            Mat2::new(1e-9, 5.0, -5.0, 1e-9),
        ];
        for m in cases {
            let svd = m.svd();
            assert!(svd.s[0] >= svd.s[1] && svd.s[1] >= 0.0);
            assert_orthogonal(&svd.u);
            assert_orthogonal(&svd.v);
            let r = reconstruct(&svd);
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(r.m[i][j], m.m[i][j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn svd_singular_values_match_direction_sweep() {
        // brute-force |M u| extremes over a fine fan of unit directions
        let m = Mat2::new(0.3, -1.7, 2.2, 0.9);
        let svd = m.svd();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for k in 0..20_000 {
            let t = std::f64::consts::PI * (k as f64) / 20_000.0;
            let v = m.mul_vec([t.cos(), t.sin()]);
            let n = v[0].hypot(v[1]);
            lo = lo.min(n);
            hi = hi.max(n);
        }
        assert_abs_diff_eq!(hi, svd.s[0], epsilon = 1e-6);
        assert_abs_diff_eq!(lo, svd.s[1], epsilon = 1e-6);
    }

    #[test]
    fn sqrt_spd_squares_back() {
        let a = Mat2::new(4.0, 1.0, 1.0, 3.0);
        let s = a.sqrt_spd().unwrap();
        let sq = s.mul(&s);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(sq.m[i][j], a.m[i][j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn axis_angle_range() {
        use std::f64::consts::{FRAC_PI_2, PI};
        assert_abs_diff_eq!(normalize_axis_angle(PI), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(normalize_axis_angle(-FRAC_PI_2), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(normalize_axis_angle(0.3 + PI), 0.3, epsilon = 1e-12);
    }
}
