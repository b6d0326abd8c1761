//! Render indicatrix-field SVG plots for a handful of projections.
//!
//! ```bash
//! cargo run --example render_field_svg
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let out_dir = std::env::temp_dir();
    for kind in [
        ProjectionKind::Cassini,
        ProjectionKind::Mercator,
        ProjectionKind::Sinusoidal,
    ] {
        let def = ProjectionDef::catalog(kind, Surface::unit_sphere(), GeoPoint::new(0.0, 0.0)?)?;
        let grat = match kind {
            // stay inside the Cassini lune
            ProjectionKind::Cassini => GraticuleSpec::new((-60.0, 60.0), 15.0, (-75.0, 75.0), 15.0, 1)?,
            ProjectionKind::Mercator => GraticuleSpec::new((-75.0, 75.0), 15.0, (-180.0, 180.0), 15.0, 1)?,
            _ => GraticuleSpec::new((-75.0, 75.0), 15.0, (-180.0, 180.0), 15.0, 1)?,
        };
        let field = sample_field(&def, &grat)?;
        let svg = render_svg(&field, &def, &grat)?;
        let path = out_dir.join(format!("indicatrix_{}.svg", def.id()));
        std::fs::write(&path, svg)?;
        println!("wrote {} ({} ellipses)", path.display(), field.samples.len());
    }
    Ok(())
}
