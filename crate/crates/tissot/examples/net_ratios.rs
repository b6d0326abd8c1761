//! Side ratios and angles of corresponding coordinate parallelograms, and the
//! ellipse axes recovered from them in the equal-stretch special case.
//!
//! ```bash
//! cargo run --example net_ratios
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let def = ProjectionDef::catalog(
        ProjectionKind::Mercator,
        Surface::unit_sphere(),
        GeoPoint::new(0.0, 0.0)?,
    )?;
    println!("mercator net ratios (source over image):");
    println!("lat     h          k          theta     theta'");
    for lat_deg in [0.0, 20.0, 40.0, 60.0] {
        let p = GeoPoint::from_degrees(lat_deg, 0.0)?;
        let r = parallelogram_ratios(&def, p)?;
        println!(
            "{lat_deg:>4}  {:.6}   {:.6}   {:.6}  {:.6}",
            r.h, r.k, r.theta_src, r.theta_img
        );
        // conformal maps stretch both net directions alike, so the
        // special-case axis formulas apply directly
        let (a, b) = special_case_axes(r.h_image_over_source(), r.theta_src, r.theta_img)?;
        let ind = distortion_ellipse(&def, p)?;
        assert!((a - ind.a).abs() < 1e-9 && (b - ind.b).abs() < 1e-9);
    }

    // a synthetic net: both directions stretched by h, angles pi/2 -> pi/3
    let (a, b) = special_case_axes(1.0, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_3)?;
    println!("\nsquare net sheared to 60 degrees at unit stretch: a = {a:.8}, b = {b:.8}");
    Ok(())
}
