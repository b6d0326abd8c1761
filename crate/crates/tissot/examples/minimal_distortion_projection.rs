//! The second-order minimal-distortion series projection: isometric mean
//! meridian, quadratic scale-error growth, and a comparison against plain
//! plate carree over a lune-shaped country.
//!
//! ```bash
//! cargo run --example minimal_distortion_projection
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let surface = Surface::unit_sphere();

    // the mean meridian maps isometrically onto the x-axis
    for lat_deg in [0.0, 15.0, 30.0, 45.0] {
        let p = tissot_projection(&surface, 0.0, GeoPoint::from_degrees(lat_deg, 0.0)?)?;
        let arc = surface.meridian_arc(0.0, lat_deg.to_radians());
        println!("lat {lat_deg:>4}: x = {:.12} (meridian arc {arc:.12}), y = {}", p.x, p.y);
    }

    // scale error lambda = sqrt(ab) - 1 grows like the square of the distance
    let def = ProjectionDef::catalog(ProjectionKind::Tissot, surface, GeoPoint::new(0.0, 0.0)?)?;
    println!("\nrho      lambda(equator)   lambda/rho^2");
    for k in 0..5 {
        let rho = 0.02 * 2f64.powi(k);
        let ind = distortion_ellipse(&def, GeoPoint::new(0.0, rho)?)?;
        let lambda = (ind.a * ind.b).sqrt() - 1.0;
        println!("{rho:.2}     {lambda:.10}      {:.6}", lambda / (rho * rho));
    }

    // against plate carree over a 20-degree-wide lune: the series projection
    // keeps both the scale error and the angular deformation far smaller
    let region = RegionSpec::new(
        vec![
            [-10f64.to_radians(), -30f64.to_radians()],
            [10f64.to_radians(), -30f64.to_radians()],
            [10f64.to_radians(), 30f64.to_radians()],
            [-10f64.to_radians(), 30f64.to_radians()],
        ],
        [0.0, 0.0],
    )?;
    let grid = GridSpec::new(
        -9f64.to_radians(),
        9f64.to_radians(),
        13,
        -29f64.to_radians(),
        29f64.to_radians(),
        21,
    )?;
    println!("\nprojection     sup|lambda|   sup omega");
    for kind in [ProjectionKind::Tissot, ProjectionKind::PlateCarree] {
        let d = ProjectionDef::catalog(kind, surface, GeoPoint::new(0.0, 0.0)?)?;
        let rep = distortion_report(&d, &region, grid)?;
        println!(
            "{:14} {:.6}      {:.6}",
            d.id(),
            rep.sup_abs_lambda,
            rep.sup_omega
        );
    }
    Ok(())
}
