//! Constant-boundary magnification solve on the unit disk, with a grid
//! refinement study against the exact radial solution.
//!
//! The log-magnification u solves laplacian(u) = K with u constant on the
//! region boundary; for K = 1 on the unit disk with u = 0 on the rim the
//! exact solution is u(r) = (r^2 - 1) / 4.
//!
//! ```bash
//! cargo run --release --example chebyshev_disk
//! ```

use tissot::prelude::*;

fn main() -> tissot::Result<()> {
    let disk = RegionSpec::circle(0.0, 0.0, 1.0, 4096)?;
    println!("grid      u(0)          error      sweeps  residual");
    let mut last_err = None;
    for n in [33usize, 65, 129, 257] {
        let grid = GridSpec::new(-1.0, 1.0, n, -1.0, 1.0, n)?;
        let sol = chebyshev_solve(&disk, grid, |_, _| 1.0, 0.0, &SolverOptions::default())?;
        let center = sol.u.get(n / 2, n / 2).unwrap();
        let err = (center + 0.25).abs();
        let factor = last_err
            .map(|e: f64| format!("  ({:.2}x down)", e / err))
            .unwrap_or_default();
        println!(
            "{n:>4}^2   {center:+.8}   {err:.2e}   {:>5}   {:.2e}{factor}",
            sol.sweeps, sol.residual
        );
        last_err = Some(err);
    }

    // the magnification field exp(u - c) is 1 on the rim, smallest mid-disk
    let grid = GridSpec::new(-1.0, 1.0, 65, -1.0, 1.0, 65)?;
    let sol = chebyshev_solve(&disk, grid, |_, _| 1.0, 0.0, &SolverOptions::default())?;
    let (lo, hi) = sol.magnification.min_max().unwrap();
    println!("magnification range: [{lo:.6}, {hi:.6}]");
    Ok(())
}
