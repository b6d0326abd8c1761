//! Sample an indicatrix field over a graticule and emit it as CSV.
//!
//! ```bash
//! cargo run --example indicatrix_field_csv > field.csv
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let def = ProjectionDef::catalog(
        ProjectionKind::Mercator,
        Surface::unit_sphere(),
        GeoPoint::new(0.0, 0.0)?,
    )?;
    let grat = GraticuleSpec::new((-75.0, 75.0), 15.0, (-180.0, 180.0), 30.0, 1)?;
    let field = sample_field(&def, &grat)?;
    eprintln!(
        "{} samples, {} degenerate, {} skipped",
        field.samples.len(),
        field.degenerate.len(),
        field.skipped
    );
    print!("{}", export_csv(&field.samples));
    Ok(())
}
