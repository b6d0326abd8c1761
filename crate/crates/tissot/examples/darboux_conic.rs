//! Fit the quadratic scale-error model to a field by least squares on its
//! gradient, and verify the level-set boundary behavior.
//!
//! ```bash
//! cargo run --example darboux_conic
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    // plant a model with known coefficients and recover them
    let planted = DarbouxConic::new(0.08, -0.02, 1.0, 1.0)?;
    let grid = GridSpec::new(-1.0, 1.0, 61, -1.0, 1.0, 61)?;
    let field = ScalarField::from_fn(grid, |x, y| Some(planted.eval(x, y)));
    let fit = fit_darboux_conic(&field, 1.0, 1.0)?;
    println!(
        "planted A = 0.08, B = -0.02; recovered A = {:.12}, B = {:.12}",
        fit.diff_coef, fit.cross_coef
    );

    // positive-definite model: the level set is an ellipse, the model value
    // is constant on it and maximal there
    let report = ellipse_boundary_check(&fit, 0.05)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    // an indefinite model is classified rather than rejected
    let steep = DarbouxConic::new(0.6, 0.0, 1.0, 1.0)?;
    let report = ellipse_boundary_check(&steep, 0.05)?;
    println!("steep model level set: {:?}", report.class);
    Ok(())
}
