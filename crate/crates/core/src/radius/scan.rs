use super::{fiber_radius_with, RadiusEstimate};
use crate::basin::{step, AlphaMap, ESCAPE_RADIUS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::PointC2;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Rotation number `num / den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: u32,
}

impl Rational {
    pub fn new(num: i64, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let g = gcd(num.unsigned_abs(), den as u64).max(1);
        Ok(Self { num: num / g as i64, den: (den as u64 / g) as u32 })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Escape flags of the probe circle `|z| = probe_radius` in the fiber over
/// `w0` under the `q`-fold iterate of `f_{p/q}`, with `budget` applications
/// of the `q`-fold iterate. Sample `k` sits at angle `2 pi k / samples`.
pub fn julia_escape_flags(
    alpha: Rational,
    w0: Complex64,
    probe_radius: f64,
    samples: usize,
    budget: usize,
) -> Result<Vec<bool>> {
    if alpha.den > 12 {
        return Err(Error::InvalidParameter(format!("denominator {} exceeds 12", alpha.den)));
    }
    if (w0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!("|w0| = {} is not 1", w0.norm())));
    }
    if !(probe_radius > 0.0) || samples == 0 {
        return Err(Error::InvalidParameter("probe radius and sample count must be positive".into()));
    }
    let map = AlphaMap::new(alpha.value());
    let q = alpha.den as usize;
    Ok(Exec::default().map_range(samples, |k| {
        let z = Complex64::from_polar(probe_radius, TAU * k as f64 / samples as f64);
        let mut p = PointC2::new(w0, z);
        for _ in 0..budget * q {
            p = step(&map, p);
            if p.z.norm() > ESCAPE_RADIUS {
                return true;
            }
        }
        false
    }))
}

/// Fraction of the probe circle that escapes (see [`julia_escape_flags`]).
///
/// A positive fraction certifies that the fiber over the root of unity
/// `w0` has no disk of radius `probe_radius` staying bounded.
pub fn julia_origin_escape(
    alpha: Rational,
    w0: Complex64,
    probe_radius: f64,
    samples: usize,
    budget: usize,
) -> Result<f64> {
    let flags = julia_escape_flags(alpha, w0, probe_radius, samples, budget)?;
    Ok(flags.iter().filter(|&&f| f).count() as f64 / samples as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub w: Complex64,
    pub estimate: RadiusEstimate,
}

/// Orbit monotonicity `r(w) <= r(w e^{2 pi i alpha})` over the scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monotonicity {
    pub pairs: usize,
    /// Pairs where the radius drops by more than the sum of both error bars.
    pub violations: usize,
    /// Largest drop relative to the combined error bar.
    pub worst_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub alpha: f64,
    pub delta: f64,
    pub rows: Vec<ScanRow>,
    pub r_low: f64,
    pub r_high: f64,
    /// Present for rotation numbers with no denominator up to 1000.
    pub monotonicity: Option<Monotonicity>,
}

pub const SCAN_CSV_HEADER: &str = "alpha,delta,w_re,w_im,inner_d,koebe_low,koebe_high,green_r,resolution,undecided";

impl ScanReport {
    /// `(max - min) / max` of the radius estimates.
    pub fn spread(&self) -> f64 {
        if self.r_high > 0.0 {
            (self.r_high - self.r_low) / self.r_high
        } else {
            0.0
        }
    }

    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "{SCAN_CSV_HEADER}");
        for row in &self.rows {
            let e = &row.estimate;
            let green = e.green_r.map(|r| r.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                self.alpha,
                self.delta,
                row.w.re,
                row.w.im,
                e.inner_d,
                e.koebe_low,
                e.koebe_high,
                green,
                e.resolution,
                e.undecided
            );
        }
        out
    }
}

fn looks_rational(alpha: f64) -> bool {
    (1..=1000).any(|q| {
        let x = alpha * q as f64;
        (x - x.round()).abs() < 1e-9
    })
}

/// Radius estimates on the circle `|w| = 1 - delta` at `w_samples` equally
/// spaced points.
pub fn rotation_scan(
    map: &AlphaMap,
    w_samples: usize,
    resolution: usize,
    delta: f64,
    max_iter: usize,
) -> Result<ScanReport> {
    rotation_scan_with(map, w_samples, resolution, delta, max_iter, Exec::default())
}

pub fn rotation_scan_with(
    map: &AlphaMap,
    w_samples: usize,
    resolution: usize,
    delta: f64,
    max_iter: usize,
    exec: Exec,
) -> Result<ScanReport> {
    if w_samples < 8 {
        return Err(Error::InvalidParameter(format!("{w_samples} samples; at least 8 required")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} must lie in (0, 1)")));
    }
    let check_orbit = !looks_rational(map.alpha);
    let ws: Vec<Complex64> =
        (0..w_samples).map(|k| Complex64::from_polar(1.0 - delta, TAU * k as f64 / w_samples as f64)).collect();
    let mut bases = ws.clone();
    if check_orbit {
        bases.extend(ws.iter().map(|w| w * map.rotation));
    }
    // Each fiber is rendered sequentially; the scan parallelizes over fibers.
    let estimates =
        exec.map_range(bases.len(), |i| fiber_radius_with(map, bases[i], resolution, max_iter, Exec::Sequential));
    let estimates = estimates.into_iter().collect::<Result<Vec<_>>>()?;

    let rows: Vec<ScanRow> =
        ws.iter().zip(&estimates).map(|(&w, &estimate)| ScanRow { w, estimate }).collect();
    let values = rows.iter().map(|r| r.estimate.value());
    let r_low = values.clone().fold(f64::INFINITY, f64::min);
    let r_high = values.fold(0.0, f64::max);

    let monotonicity = check_orbit.then(|| {
        let mut m = Monotonicity { pairs: 0, violations: 0, worst_ratio: 0.0 };
        for k in 0..w_samples {
            let (a, b) = (&estimates[k], &estimates[k + w_samples]);
            let (Some(ra), Some(rb)) = (a.green_r, b.green_r) else { continue };
            let bar = a.grid_error + b.grid_error;
            m.pairs += 1;
            let drop = ra - rb;
            m.worst_ratio = m.worst_ratio.max(drop / bar);
            if drop > bar {
                m.violations += 1;
            }
        }
        m
    });
    Ok(ScanReport { alpha: map.alpha, delta, rows, r_low, r_high, monotonicity })
}
