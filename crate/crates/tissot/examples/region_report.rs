//! Scale-error field and distortion summary of a projection over a polygonal
//! region.
//!
//! ```bash
//! cargo run --example region_report
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    // a lune-ish hexagon around (10N, 20E)
    let deg = |lat: f64, lon: f64| [lon.to_radians(), lat.to_radians()];
    let region = RegionSpec::new(
        vec![
            deg(-5.0, 12.0),
            deg(0.0, 28.0),
            deg(12.0, 30.0),
            deg(25.0, 24.0),
            deg(22.0, 12.0),
            deg(8.0, 8.0),
        ],
        deg(10.0, 20.0),
    )?;
    let grid = GridSpec::new(
        6f64.to_radians(),
        32f64.to_radians(),
        40,
        -7f64.to_radians(),
        27f64.to_radians(),
        40,
    )?;

    // the two classical tradeoffs over the same region: the equal-area map
    // has zero scale error and pays in angles, the conformal map is the
    // reverse
    for kind in [ProjectionKind::Sinusoidal, ProjectionKind::Mercator] {
        let def = ProjectionDef::catalog(
            kind,
            Surface::unit_sphere(),
            GeoPoint::from_degrees(10.0, 20.0)?,
        )?;
        let field = lambda_field(&def, &region, grid)?;
        let (lo, hi) = field.lambda.min_max().unwrap();
        println!(
            "{}: lambda in [{lo:.6}, {hi:.6}] over {} nodes ({} degenerate)",
            def.id(),
            field.lambda.count_set(),
            field.degenerate_nodes
        );
        let rep = distortion_report(&def, &region, grid)?;
        println!("{}\n", serde_json::to_string_pretty(&rep).unwrap());
    }
    Ok(())
}
