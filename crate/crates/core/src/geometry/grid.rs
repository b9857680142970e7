use crate::error::{Error, Result};
use num_complex::Complex64;

/// Square lattice of `resolution x resolution` cells over a planar window.
///
/// Cells are row-major with row 0 at the top (largest imaginary part),
/// matching image orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarGrid {
    pub center: Complex64,
    pub half_width: f64,
    pub resolution: usize,
}

impl PlanarGrid {
    pub fn new(center: Complex64, half_width: f64, resolution: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("half width {half_width} must be positive")));
        }
        if resolution < 2 {
            return Err(Error::InvalidParameter(format!("resolution {resolution} must be at least 2")));
        }
        Ok(Self { center, half_width, resolution })
    }

    /// Window `[-half_width, half_width]^2` about the origin.
    pub fn centered(half_width: f64, resolution: usize) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), half_width, resolution)
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    pub fn len(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn is_empty(&self) -> bool {
        self.resolution == 0
    }

    /// Sample point at the center of cell `(row, col)`.
    pub fn point(&self, row: usize, col: usize) -> Complex64 {
        let h = self.cell_size();
        self.center
            + Complex64::new(
                -self.half_width + (col as f64 + 0.5) * h,
                self.half_width - (row as f64 + 0.5) * h,
            )
    }

    pub fn point_at(&self, index: usize) -> Complex64 {
        self.point(index / self.resolution, index % self.resolution)
    }

    /// Cell containing `z`, if `z` lies in the window.
    pub fn index_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let h = self.cell_size();
        let d = z - self.center;
        let col = ((d.re + self.half_width) / h).floor();
        let row = ((self.half_width - d.im) / h).floor();
        let n = self.resolution as f64;
        (col >= 0.0 && row >= 0.0 && col < n && row < n).then(|| (row as usize, col as usize))
    }

    pub fn is_edge(&self, row: usize, col: usize) -> bool {
        let last = self.resolution - 1;
        row == 0 || col == 0 || row == last || col == last
    }
}
