//! Complex linear algebra in C^2, model domains, boundary frames, planar
//! grids and deterministic random streams.

mod domain;
mod frame;
mod grid;
mod point;
pub mod rng;

pub use domain::{DomainModel, LeviMatrix};
pub use frame::{boundary_frame, levi_form, levi_value, tangency_residual, BoundaryFrame, BOUNDARY_TOL};
pub use grid::PlanarGrid;
pub use point::{CVec2, PointC2};
