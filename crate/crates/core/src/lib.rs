//! Numerical laboratory for the dynamics of proper holomorphic self-maps in
//! C^2: basins of the skew family `f_alpha`, conformal radii of fiber
//! slices, CR distances on strictly pseudoconvex hypersurfaces, Kobayashi
//! distance brackets, boundary derivative rates, the Hopf fibration of
//! circled domains, and entropy of Blaschke circle maps.

pub mod basin;
pub mod cr;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod fibration;
pub mod geometry;
pub mod kobayashi;
pub mod maps;
pub mod radius;
pub mod rates;
pub mod slice;

pub use error::{Error, Result};
pub use exec::Exec;
