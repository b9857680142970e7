//! Conformal radii of fiber slices of the basin.
//!
//! The fiber radius `r(alpha, w)` is realized as the conformal radius at 0
//! of the slice component containing 0 (for a planar domain the supremum
//! over normalized holomorphic disks is the classical conformal radius).
//! Estimates come with a Koebe sandwich `d <= r <= 4 d` from the inradius.

mod green;
mod scan;

pub use green::{green_radius, green_solve, origin_component, GreenSolution, GREEN_TOL};
pub use scan::{
    julia_escape_flags, julia_origin_escape, rotation_scan, rotation_scan_with, Monotonicity, Rational, ScanReport,
    ScanRow, SCAN_CSV_HEADER,
};

use crate::basin::{render_slice_with, AlphaMap};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::PlanarGrid;
use crate::slice::{CellState, SliceDomain};
use num_complex::Complex64;

/// Half width of the window used for fiber slices.
pub const FIBER_WINDOW: f64 = 2.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inradius {
    pub radius: f64,
    /// No blocking cell exists; `radius` is the distance to the window edge.
    pub truncated: bool,
}

/// Certified lower bound for the distance from 0 to the complement.
///
/// Distance to the nearest outside or undecided cell center, minus half a
/// cell diagonal.
pub fn inner_radius(slice: &SliceDomain) -> Result<Inradius> {
    if !slice.origin_inside {
        return Err(Error::OriginOutside);
    }
    Ok(inradius_where(slice, |s| s != CellState::Inside))
}

/// Same as [`inner_radius`] with undecided cells counted as inside.
pub fn inner_radius_upper(slice: &SliceDomain) -> Result<Inradius> {
    if !slice.origin_inside {
        return Err(Error::OriginOutside);
    }
    Ok(inradius_where(slice, |s| s == CellState::Outside))
}

fn inradius_where(slice: &SliceDomain, blocking: impl Fn(CellState) -> bool) -> Inradius {
    let grid = &slice.grid;
    let nearest = slice
        .cells
        .iter()
        .enumerate()
        .filter(|(_, s)| blocking(**s))
        .map(|(i, _)| grid.point_at(i).norm())
        .fold(f64::INFINITY, f64::min);
    let half_diag = grid.cell_size() * std::f64::consts::FRAC_1_SQRT_2;
    if nearest.is_finite() {
        Inradius { radius: (nearest - half_diag).max(0.0), truncated: false }
    } else {
        let c = grid.center;
        let hw = grid.half_width;
        let edge = (hw - c.re).min(hw + c.re).min(hw - c.im).min(hw + c.im);
        Inradius { radius: edge.max(0.0), truncated: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusEstimate {
    pub inner_d: f64,
    pub koebe_low: f64,
    /// `4 d` with undecided cells counted as inside.
    pub koebe_high: f64,
    pub green_r: Option<f64>,
    /// Grid error bar on `green_r`: `green_r * cell_diagonal / d`.
    pub grid_error: f64,
    pub resolution: usize,
    pub undecided: usize,
}

impl RadiusEstimate {
    pub fn from_slice(slice: &SliceDomain) -> Result<Self> {
        let d = inner_radius(slice)?;
        let d_hi = inner_radius_upper(slice)?;
        let green_r = match green_solve(slice, GREEN_TOL) {
            Ok(s) => Some(s.radius),
            Err(Error::Truncated | Error::NoConvergence(_)) => None,
            Err(e) => return Err(e),
        };
        let diag = slice.grid.cell_size() * std::f64::consts::SQRT_2;
        let grid_error = match green_r {
            Some(r) if d.radius > 0.0 => r * diag / d.radius,
            _ => f64::INFINITY,
        };
        Ok(Self {
            inner_d: d.radius,
            koebe_low: d.radius,
            koebe_high: 4.0 * d_hi.radius,
            green_r,
            grid_error,
            resolution: slice.grid.resolution,
            undecided: slice.undecided_count,
        })
    }

    /// Best available point estimate: the Green radius, else the inradius.
    pub fn value(&self) -> f64 {
        self.green_r.unwrap_or(self.inner_d)
    }
}

/// Radius estimate of the fiber over `w0`, rendered on `[-2.2, 2.2]^2`.
pub fn fiber_radius(map: &AlphaMap, w0: Complex64, resolution: usize, max_iter: usize) -> Result<RadiusEstimate> {
    fiber_radius_with(map, w0, resolution, max_iter, Exec::default())
}

pub fn fiber_radius_with(
    map: &AlphaMap,
    w0: Complex64,
    resolution: usize,
    max_iter: usize,
    exec: Exec,
) -> Result<RadiusEstimate> {
    if !(w0.norm() < 1.0) {
        return Err(Error::DomainError(format!("fiber base |w0| = {} must be < 1", w0.norm())));
    }
    let grid = PlanarGrid::centered(FIBER_WINDOW, resolution)?;
    let slice = render_slice_with(map, w0, grid, max_iter, exec)?;
    RadiusEstimate::from_slice(&slice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(radius: f64, center: f64, half_width: f64, n: usize) -> SliceDomain {
        let g = PlanarGrid::centered(half_width, n).unwrap();
        SliceDomain::from_predicate(g, |z| (z - Complex64::new(center, 0.0)).norm() < radius)
    }

    #[test]
    fn inradius_of_a_disk() {
        let s = disk(0.5, 0.0, 0.6, 1024);
        let h = s.grid.cell_size();
        let d = inner_radius(&s).unwrap();
        assert!(!d.truncated);
        assert!((d.radius - 0.5).abs() <= 2.0 * h);
        assert!(d.radius <= 0.5);
    }

    #[test]
    fn full_grid_is_truncated_at_the_window_edge() {
        let g = PlanarGrid::centered(1.0, 16).unwrap();
        let s = SliceDomain::from_predicate(g, |_| true);
        let d = inner_radius(&s).unwrap();
        assert!(d.truncated);
        assert_eq!(d.radius, 1.0);
        assert_eq!(green_radius(&s, GREEN_TOL), Err(Error::Truncated));
    }

    #[test]
    fn origin_outside_is_an_error() {
        let s = disk(0.5, 2.0, 3.0, 64);
        assert_eq!(inner_radius(&s), Err(Error::OriginOutside));
        assert_eq!(green_radius(&s, GREEN_TOL), Err(Error::OriginOutside));
    }

    #[test]
    fn green_radius_of_a_centered_disk() {
        let s = disk(0.5, 0.0, 0.6, 256);
        let r = green_radius(&s, GREEN_TOL).unwrap();
        assert!((r - 0.5).abs() < 0.005, "{r}");
    }

    #[test]
    fn green_radius_of_an_off_center_disk() {
        // Exact value (R^2 - c^2) / R for the disk of radius R about c.
        let s = disk(1.0, 0.3, 1.4, 256);
        let r = green_radius(&s, GREEN_TOL).unwrap();
        assert!((0.7..=2.8).contains(&r));
        assert!((r - 0.91).abs() < 0.01 * 0.91, "{r}");
    }

    #[test]
    fn estimate_brackets() {
        let s = disk(0.5, 0.0, 0.6, 128);
        let e = RadiusEstimate::from_slice(&s).unwrap();
        let r = e.green_r.unwrap();
        assert!(e.koebe_low <= r + e.grid_error && r <= e.koebe_high + e.grid_error);
        assert!(e.grid_error > 0.0 && e.grid_error.is_finite());
    }
}
