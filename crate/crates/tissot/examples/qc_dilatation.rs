//! Characteristic functions p and theta of plane maps, and grid
//! sup-dilatation.
//!
//! ```bash
//! cargo run --example qc_dilatation
//! ```

use tissot::linalg::Mat2;
use tissot::prelude::*;
use tissot::qc::characteristics_of;

fn main() -> tissot::Result<()> {
    let wide = RectDomain::new(-2.0, 2.0, -2.0, 2.0)?;

    // affine maps have constant characteristics
    let stretch = PlanarMap::affine(Mat2::diagonal(2.0, 1.0), [0.0, 0.0], wide)?;
    let c = characteristics(&stretch, 0.0, 0.0)?;
    println!("diag(2,1):     p = {:.6}, theta = {:+.6}", c.p, c.theta);

    let rotated = Mat2::rotation(0.6).mul(&Mat2::diagonal(2.0, 1.0));
    let c = characteristics_of(&rotated)?;
    println!("rotated copy:  p = {:.6}, theta = {:+.6} (p is rotation-invariant)", c.p, c.theta);

    // an expression-defined map with a varying dilatation field
    let map = PlanarMap::parse("u = x + 0.1 * x^2; v = y", RectDomain::unit())?;
    println!("\nu = x + 0.1 x^2, v = y on the unit square:");
    for x in [0.0, 0.5, 1.0] {
        let c = characteristics(&map, x, 0.5)?;
        println!("  p({x:.1}, 0.5) = {:.6}", c.p);
    }
    let sup = sup_dilatation(&map, RectDomain::unit().grid(21, 21)?)?;
    println!("  sup over a 21x21 grid = {sup:.6}");

    // cross-check against the surface machinery: the local normalized
    // differential of a projection has p = a/b
    let def = ProjectionDef::catalog(
        ProjectionKind::PlateCarree,
        Surface::unit_sphere(),
        GeoPoint::new(0.0, 0.0)?,
    )?;
    let p0 = GeoPoint::from_degrees(60.0, 0.0)?;
    let mut s = normalized_differential(&def, p0)?;
    if s.det() < 0.0 {
        // swap the source frame to a positively oriented pair; p is
        // reflection-invariant, only theta's reference changes
        s = s.mul(&Mat2::new(0.0, 1.0, 1.0, 0.0));
    }
    let c = characteristics_of(&s)?;
    let ind = distortion_ellipse(&def, p0)?;
    println!(
        "\nplate carree at 60N: p = {:.12} vs a/b = {:.12}",
        c.p,
        ind.a / ind.b
    );
    Ok(())
}
