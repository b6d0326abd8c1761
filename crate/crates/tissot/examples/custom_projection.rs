//! Define a projection by expressions, compare it with a catalog twin, and
//! show how parse errors are reported.
//!
//! ```bash
//! cargo run --example custom_projection
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    // same closed form as the sinusoidal projection
    let custom = parse_custom_projection("x = m * cos(l); y = l")?;
    let sinusoidal = ProjectionDef::catalog(
        ProjectionKind::Sinusoidal,
        Surface::unit_sphere(),
        GeoPoint::new(0.0, 0.0)?,
    )?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let p = GeoPoint::from_degrees(-60.0 + 30.0 * i as f64, -120.0 + 60.0 * j as f64)?;
            let a = custom.project(p)?;
            let b = sinusoidal.project(p)?;
            worst = worst.max((a.x - b.x).abs().max((a.y - b.y).abs()));
        }
    }
    println!("custom vs catalog sinusoidal, 5x5 grid: max |diff| = {worst:e}");

    // round-trip through the canonical serialization
    let text = custom.expressions().unwrap().to_text();
    println!("canonical form: {text}");
    let again = parse_custom_projection(&text)?;
    let p = GeoPoint::from_degrees(37.0, -12.0)?;
    assert_eq!(custom.project(p)?, again.project(p)?);

    // a slightly warped net, analyzed like any catalog projection
    let warped = parse_custom_projection("x = m + 0.2 * sin(l) * cos(m); y = l + 0.1 * sin(m)")?;
    let ind = distortion_ellipse(&warped, p)?;
    println!(
        "warped net at (37N, 12W): a={:.6} b={:.6} omega={:.6}",
        ind.a, ind.b, ind.omega
    );

    // errors carry a byte offset into the input
    match parse_custom_projection("x = q*") {
        Err(e) => println!("as expected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
