//! Discretized planar slices and their file formats.

use crate::error::{Error, Result};
use crate::geometry::PlanarGrid;
use num_complex::Complex64;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Inside,
    Outside,
    Undecided,
}

impl CellState {
    fn symbol(self) -> char {
        match self {
            CellState::Inside => 'C',
            CellState::Outside => 'E',
            CellState::Undecided => 'U',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'C' => Some(CellState::Inside),
            'E' => Some(CellState::Outside),
            'U' => Some(CellState::Undecided),
            _ => None,
        }
    }

    /// PPM gray level: inside black, outside white, undecided gray.
    fn gray(self) -> u8 {
        match self {
            CellState::Inside => 0,
            CellState::Outside => 255,
            CellState::Undecided => 128,
        }
    }
}

/// Membership lattice of a planar region.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceDomain {
    pub grid: PlanarGrid,
    pub cells: Vec<CellState>,
    /// The cell containing 0 exists and is inside.
    pub origin_inside: bool,
    pub undecided_count: usize,
}

impl SliceDomain {
    pub fn from_cells(grid: PlanarGrid, cells: Vec<CellState>) -> Self {
        assert_eq!(cells.len(), grid.len(), "cell count does not match the grid");
        let undecided_count = cells.iter().filter(|c| **c == CellState::Undecided).count();
        let origin_inside = grid
            .index_of(Complex64::new(0.0, 0.0))
            .is_some_and(|(r, c)| cells[r * grid.resolution + c] == CellState::Inside);
        Self { grid, cells, origin_inside, undecided_count }
    }

    /// Slice of an analytic region given by a membership predicate.
    pub fn from_predicate(grid: PlanarGrid, inside: impl Fn(Complex64) -> bool) -> Self {
        let cells = (0..grid.len())
            .map(|i| if inside(grid.point_at(i)) { CellState::Inside } else { CellState::Outside })
            .collect();
        Self::from_cells(grid, cells)
    }

    pub fn is_inside(&self, index: usize) -> bool {
        self.cells[index] == CellState::Inside
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|c| **c == state).count()
    }

    /// Binary PPM (P6, maxval 255). Each comment line is written as `# ...`.
    pub fn to_ppm(&self, comments: &[String]) -> Vec<u8> {
        let n = self.grid.resolution;
        let mut header = String::from("P6\n");
        for c in comments {
            for line in c.lines() {
                let _ = writeln!(header, "# {line}");
            }
        }
        let _ = write!(header, "{n} {n}\n255\n");
        let mut out = header.into_bytes();
        out.reserve(3 * self.cells.len());
        for cell in &self.cells {
            let g = cell.gray();
            out.extend_from_slice(&[g, g, g]);
        }
        out
    }

    /// Run-length text: a `RLE <resolution>` line, then one line per row
    /// of `<count><C|E|U>` runs.
    pub fn to_rle(&self) -> String {
        let n = self.grid.resolution;
        let mut out = format!("RLE {n}\n");
        for row in self.cells.chunks(n) {
            let mut iter = row.iter().peekable();
            let mut first = true;
            while let Some(&state) = iter.next() {
                let mut run = 1;
                while iter.peek() == Some(&&state) {
                    iter.next();
                    run += 1;
                }
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{run}{}", state.symbol());
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`SliceDomain::to_rle`] output back onto `grid`.
    pub fn from_rle(grid: PlanarGrid, text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("malformed RLE: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let n: usize = header
            .strip_prefix("RLE ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("header"))?;
        if n != grid.resolution {
            return Err(bad("resolution does not match the grid"));
        }
        let mut cells = Vec::with_capacity(n * n);
        for line in lines.take(n) {
            let start = cells.len();
            for token in line.split_whitespace() {
                let (count, sym) = token.split_at(token.len() - 1);
                let state = sym.chars().next().and_then(CellState::from_symbol).ok_or_else(|| bad(token))?;
                let count: usize = count.parse().map_err(|_| bad(token))?;
                cells.extend(std::iter::repeat_n(state, count));
            }
            if cells.len() - start != n {
                return Err(bad("row length"));
            }
        }
        if cells.len() != n * n {
            return Err(bad("row count"));
        }
        Ok(Self::from_cells(grid, cells))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ppm_layout() {
        let g = PlanarGrid::centered(1.0, 2).unwrap();
        let s = SliceDomain::from_cells(
            g,
            vec![CellState::Inside, CellState::Outside, CellState::Undecided, CellState::Inside],
        );
        let ppm = s.to_ppm(&["seed=1".into()]);
        let header = b"P6\n# seed=1\n2 2\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        assert_eq!(&ppm[header.len()..], &[0, 0, 0, 255, 255, 255, 128, 128, 128, 0, 0, 0]);
    }

    #[test]
    fn origin_flag_follows_the_origin_cell() {
        let g = PlanarGrid::centered(1.0, 9).unwrap();
        let s = SliceDomain::from_predicate(g, |z| z.norm() < 0.5);
        assert!(s.origin_inside);
        let s = SliceDomain::from_predicate(g, |z| z.norm() > 0.5);
        assert!(!s.origin_inside);
    }

    proptest! {
        #[test]
        fn rle_round_trip(seed in proptest::collection::vec(0u8..3, 36)) {
            let g = PlanarGrid::centered(1.0, 6).unwrap();
            let cells = seed.iter().map(|b| match b {
                0 => CellState::Inside,
                1 => CellState::Outside,
                _ => CellState::Undecided,
            }).collect();
            let s = SliceDomain::from_cells(g, cells);
            prop_assert_eq!(SliceDomain::from_rle(g, &s.to_rle()).unwrap(), s);
        }
    }
}
