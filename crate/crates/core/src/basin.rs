//! The skew family `f_alpha(w, z) = (w e^{2 pi i alpha}, w z + z^2)`, its
//! basin of attraction of the origin and the retraction onto `z = 0`.
//!
//! Orbit verdicts are certified: an orbit is `Converged` once it enters the
//! forward-invariant triangle `|w| + |z| < 1`, and `Escaped` once
//! `|z| > 2`, after which `|z_{n+1}| >= |z_n| (|z_n| - 1) > |z_n|` forces
//! divergence. Everything else stays `Undecided`.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{PlanarGrid, PointC2};
use crate::slice::{CellState, SliceDomain};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Escape radius in the fiber coordinate.
pub const ESCAPE_RADIUS: f64 = 2.0;
/// Default iteration budget for renders.
pub const RENDER_MAX_ITER: usize = 2000;
/// Default iteration budget for conformal-radius scans.
pub const SCAN_MAX_ITER: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMap {
    /// Rotation number in turns.
    pub alpha: f64,
    /// Cached `e^{2 pi i alpha}`.
    pub rotation: Complex64,
}

impl AlphaMap {
    pub fn new(alpha: f64) -> Self {
        Self { alpha, rotation: Complex64::from_polar(1.0, TAU * alpha) }
    }

    /// Golden-ratio rotation number `(sqrt 5 - 1) / 2`.
    pub fn golden() -> Self {
        Self::new((5f64.sqrt() - 1.0) / 2.0)
    }

    pub fn step(&self, p: PointC2) -> PointC2 {
        step(self, p)
    }
}

pub fn step(map: &AlphaMap, p: PointC2) -> PointC2 {
    PointC2::new(p.w * map.rotation, p.w * p.z + p.z * p.z)
}

/// The retraction `(w, z) -> (w, 0)`.
pub fn retract(p: PointC2) -> PointC2 {
    PointC2::new(p.w, Complex64::new(0.0, 0.0))
}

/// Whether `p` lies in the absorbing triangle `|w| + |z| < 1`.
pub fn in_triangle(p: PointC2) -> bool {
    p.w.norm() + p.z.norm() < 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitStatus {
    Converged,
    Escaped,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitVerdict {
    pub status: OrbitStatus,
    /// First hitting time of the verdict region, or `max_iter`.
    pub steps: usize,
    pub last: PointC2,
}

fn check_fiber_base(w: Complex64) -> Result<()> {
    if !(w.norm() <= 1.0 + 1e-12) {
        return Err(Error::DomainError(format!("|w| = {} exceeds 1", w.norm())));
    }
    Ok(())
}

pub fn classify(map: &AlphaMap, p: PointC2, max_iter: usize) -> Result<OrbitVerdict> {
    check_fiber_base(p.w)?;
    Ok(classify_unchecked(map, p, max_iter))
}

pub(crate) fn classify_unchecked(map: &AlphaMap, p: PointC2, max_iter: usize) -> OrbitVerdict {
    let mut q = p;
    let w_mod = p.w.norm();
    for n in 0..=max_iter {
        let z_mod = q.z.norm();
        if w_mod + z_mod < 1.0 {
            return OrbitVerdict { status: OrbitStatus::Converged, steps: n, last: q };
        }
        if z_mod > ESCAPE_RADIUS {
            return OrbitVerdict { status: OrbitStatus::Escaped, steps: n, last: q };
        }
        if n == max_iter {
            break;
        }
        q = step(map, q);
    }
    OrbitVerdict { status: OrbitStatus::Undecided, steps: max_iter, last: q }
}

/// Renders the fiber slice `{z : (w0, z) in B_alpha}` over `grid`.
///
/// With `max_iter = 0` no iteration is performed and every cell is
/// undecided, even where the starting point already satisfies a criterion.
pub fn render_slice(map: &AlphaMap, w0: Complex64, grid: PlanarGrid, max_iter: usize) -> Result<SliceDomain> {
    render_slice_with(map, w0, grid, max_iter, Exec::default())
}

pub fn render_slice_with(
    map: &AlphaMap,
    w0: Complex64,
    grid: PlanarGrid,
    max_iter: usize,
    exec: Exec,
) -> Result<SliceDomain> {
    check_fiber_base(w0)?;
    let n = grid.resolution;
    let rows = exec.map_range(n, |row| {
        (0..n)
            .map(|col| {
                if max_iter == 0 {
                    return CellState::Undecided;
                }
                let p = PointC2::new(w0, grid.point(row, col));
                match classify_unchecked(map, p, max_iter).status {
                    OrbitStatus::Converged => CellState::Inside,
                    OrbitStatus::Escaped => CellState::Outside,
                    OrbitStatus::Undecided => CellState::Undecided,
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(SliceDomain::from_cells(grid, rows.into_iter().flatten().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rng::stream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn step_examples() {
        let p = step(&AlphaMap::new(0.0), PointC2::real(0.5, 0.0));
        assert_eq!(p, PointC2::real(0.5, 0.0));

        let p = step(&AlphaMap::new(0.5), PointC2::real(0.5, 0.1));
        assert!((p.w - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((p.z - c(0.06, 0.0)).norm() < 1e-15);

        let p = step(&AlphaMap::new(0.25), PointC2::new(c(0.0, 1.0), c(0.0, 0.0)));
        assert!((p.w - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(p.z, c(0.0, 0.0));
    }

    #[test]
    fn classify_examples() {
        for alpha in [0.0, 0.25, 0.5, 0.618] {
            let m = AlphaMap::new(alpha);
            let v = classify(&m, PointC2::real(0.3, 0.3), 100).unwrap();
            assert_eq!(v.status, OrbitStatus::Converged);
            let v = classify(&m, PointC2::real(0.5, 3.0), 100).unwrap();
            assert_eq!((v.status, v.steps), (OrbitStatus::Escaped, 0));
        }
        let v = classify(&AlphaMap::new(0.0), PointC2::real(0.0, 1.001), 10_000).unwrap();
        assert_eq!(v.status, OrbitStatus::Escaped);
        assert!(matches!(
            classify(&AlphaMap::new(0.0), PointC2::real(1.1, 0.0), 10),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn verdict_invariants() {
        let m = AlphaMap::new(0.3);
        let mut rng = stream(3, 0);
        for _ in 0..500 {
            let w = Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..TAU));
            let z = c(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
            let v = classify(&m, PointC2::new(w, z), 200).unwrap();
            match v.status {
                OrbitStatus::Converged => assert!(v.last.w.norm() + v.last.z.norm() < 1.0),
                OrbitStatus::Escaped => assert!(v.last.z.norm() > 2.0),
                OrbitStatus::Undecided => assert_eq!(v.steps, 200),
            }
        }
    }

    #[test]
    fn retraction_is_idempotent_and_commutes() {
        assert_eq!(retract(PointC2::real(0.3, 0.7)), PointC2::real(0.3, 0.0));
        assert_eq!(retract(PointC2::ORIGIN), PointC2::ORIGIN);
        let m = AlphaMap::new(0.37);
        let mut rng = stream(9, 0);
        for _ in 0..1000 {
            let p = PointC2::from_r4(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            let lhs = retract(step(&m, p));
            let rhs = step(&m, retract(p));
            assert!((lhs - rhs).norm() < 1e-14);
            assert_eq!(retract(retract(p)), retract(p));
        }
    }

    #[test]
    fn zero_budget_leaves_everything_undecided() {
        let g = PlanarGrid::centered(1.5, 16).unwrap();
        let s = render_slice(&AlphaMap::new(0.2), c(0.1, 0.0), g, 0).unwrap();
        assert_eq!(s.undecided_count, 256);
        assert!(!s.origin_inside);
    }

    #[test]
    fn render_rejects_bases_outside_the_disk() {
        let g = PlanarGrid::centered(1.5, 8).unwrap();
        assert!(render_slice(&AlphaMap::new(0.0), c(1.5, 0.0), g, 10).is_err());
    }
}
