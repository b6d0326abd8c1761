//! Distortion ellipse at a single point, for a few catalog projections.
//!
//! ```bash
//! cargo run --example analyze_point
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let p = GeoPoint::from_degrees(60.0, 15.0)?;
    for kind in [
        ProjectionKind::PlateCarree,
        ProjectionKind::Mercator,
        ProjectionKind::Sinusoidal,
        ProjectionKind::Cassini,
        ProjectionKind::Stereographic,
    ] {
        let def = ProjectionDef::catalog(kind, Surface::unit_sphere(), GeoPoint::new(0.0, 0.0)?)?;
        let ind = distortion_ellipse(&def, p)?;
        println!(
            "{:14} a={:.6} b={:.6} theta={:+.4} rad omega={:.6} rad area={:.6}{}",
            def.id(),
            ind.a,
            ind.b,
            ind.theta,
            ind.omega,
            ind.area_scale,
            if ind.axes_unique { "" } else { "  (conformal here)" }
        );
    }

    // the same machinery on the ellipsoid
    let airy = Surface::ellipsoid(1.0, 1.0 / 297.0)?;
    let def = ProjectionDef::catalog(ProjectionKind::PlateCarree, airy, GeoPoint::new(0.0, 0.0)?)?;
    let ind = distortion_ellipse(&def, p)?;
    println!(
        "{:14} a={:.6} b={:.6} (ellipsoid, 1/f = 297)",
        "plate_carree", ind.a, ind.b
    );
    Ok(())
}
