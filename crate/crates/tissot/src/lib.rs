//! Distortion analysis for maps of the sphere and the spheroid.
//!
//! The crate computes, for a differentiable projection, the field of
//! infinitesimal ellipses that images of infinitesimal ground circles trace
//! on the map — extreme scale factors, ellipse orientation, angular and areal
//! deformation, and the principal tangent directions — plus the machinery
//! built on top of it: the second-order minimal-distortion series projection,
//! quadratic scale-error models fitted over a region, the constant-boundary
//! magnification solve, and quasiconformal dilatation of plane maps.
//!
//! ```
//! use tissot::prelude::*;
//!
//! let def = ProjectionDef::catalog(
//!     ProjectionKind::Mercator,
//!     Surface::unit_sphere(),
//!     GeoPoint::new(0.0, 0.0).unwrap(),
//! )
//! .unwrap();
//! let p = GeoPoint::from_degrees(60.0, 0.0).unwrap();
//! let ind = distortion_ellipse(&def, p).unwrap();
//! assert!((ind.a - 2.0).abs() < 1e-12 && (ind.a - ind.b).abs() < 1e-12);
//! ```
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `tissot` binary for the file-emitting command line.

pub mod cli;
pub mod distortion;
pub mod error;
pub mod expr;
pub mod field;
pub mod indicatrix;
pub mod linalg;
pub mod projection;
pub mod qc;
pub mod render;
pub mod solver;
pub mod surface;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::distortion::{
        distortion_report, ellipse_boundary_check, fit_darboux_conic, lambda_field, DarbouxConic,
    };
    pub use crate::error::{Error, Result};
    pub use crate::field::{GridSpec, RegionSpec, ScalarField};
    pub use crate::indicatrix::{
        distortion_ellipse, jacobian, max_angle_deformation, normalized_differential,
        parallelogram_ratios, principal_tangents, special_case_axes, DiffMode, Indicatrix,
    };
    pub use crate::projection::{
        parse_custom_projection, tissot_projection, PlanePoint, ProjectionDef, ProjectionKind,
    };
    pub use crate::qc::{
        characteristics, grotzsch_affine, grotzsch_experiment, sup_dilatation, GrotzschOptions,
        PlanarMap, RectDomain, RectanglePair,
    };
    pub use crate::render::{export_csv, render_svg, sample_field, GraticuleSpec};
    pub use crate::solver::{chebyshev_solve, SolverOptions};
    pub use crate::surface::{GeoPoint, Surface};
}
