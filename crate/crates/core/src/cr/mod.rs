//! CR distance on the sphere and ellipsoid boundaries: lengths of complex
//! tangential paths, the `eps`-`tau` boxes around a boundary point, the
//! anisotropy of CR balls, and the dilation property of CR maps.

mod band;
mod dilation;
mod path;

pub use dilation::{dilation_check, measure_dilation, DilationReport, DILATION_MARGIN, DILATION_SEGMENTS};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{boundary_frame, rng::halton, BoundaryFrame, CVec2, DomainModel, PointC2, BOUNDARY_TOL};
use num_complex::Complex64;
use std::f64::consts::TAU;

pub const DEFAULT_SEGMENTS: usize = 64;
pub const DEFAULT_ROUNDS: usize = 20;
/// Largest horizontality residual accepted for an upper-bound path.
pub const RESIDUAL_TARGET: f64 = 1e-3;

/// Discretized complex tangential path.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalPath {
    pub nodes: Vec<PointC2>,
    /// Euclidean length of the polygon.
    pub length: f64,
    /// `max |<d rho(mid), dP>| / |dP|` over the segments.
    pub residual: f64,
    /// `length * residual`, the allowance for the remaining non-horizontality.
    pub residual_correction: f64,
}

/// Euclidean distance, a lower bound for the CR distance.
pub fn cr_lower(x: PointC2, y: PointC2) -> f64 {
    x.distance(y)
}

fn check_boundary(domain: &DomainModel, p: PointC2) -> Result<()> {
    let residual = domain.rho(p).abs();
    if residual >= BOUNDARY_TOL || !p.is_finite() {
        return Err(Error::PointNotOnBoundary { residual });
    }
    Ok(())
}

/// Shortest horizontal path found from `x` to `y`; its length bounds the CR
/// distance from above.
///
/// Candidates are the projected chord and the chord with a loop of either
/// orientation sized to cancel its holonomy; each is optimized for `rounds`
/// penalty rounds and the shortest with residual below [`RESIDUAL_TARGET`]
/// wins.
pub fn cr_upper(domain: &DomainModel, x: PointC2, y: PointC2, segments: usize, rounds: usize) -> Result<HorizontalPath> {
    let a = domain.hermitian_weights().ok_or(Error::UnsupportedDomain(domain.name()))?;
    if segments < 4 {
        return Err(Error::InvalidParameter(format!("{segments} segments; at least 4 required")));
    }
    check_boundary(domain, x)?;
    check_boundary(domain, y)?;
    let (x, y) = (path::radial_project(a, x), path::radial_project(a, y));
    if x.distance(y) < 1e-15 {
        return Ok(HorizontalPath { nodes: vec![x; segments + 1], length: 0.0, residual: 0.0, residual_correction: 0.0 });
    }
    let base = path::chord(domain, x, y, segments)?;
    let mut candidates = vec![base.clone()];
    for sign in [1.0, -1.0] {
        if let Some(c) = path::looped(domain, &base, sign)? {
            candidates.push(c);
        }
    }
    let mut best: Option<HorizontalPath> = None;
    let mut worst_residual: f64 = 0.0;
    for init in candidates {
        let nodes = path::optimize(domain, init, rounds)?;
        let (length, residual) = path::path_stats(domain, &nodes)?;
        if residual < RESIDUAL_TARGET {
            if best.as_ref().is_none_or(|b| length < b.length) {
                best = Some(HorizontalPath { nodes, length, residual, residual_correction: length * residual });
            }
        } else {
            worst_residual = worst_residual.max(residual);
        }
    }
    best.ok_or_else(|| Error::NoConvergence(format!("horizontality residual {worst_residual:.3e}")))
}

/// The box `F = p_eps + B^C(tau sqrt eps) x B^R(tau eps)` and its normal
/// projection `U` onto the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CrProbe {
    pub frame: BoundaryFrame,
    pub eps: f64,
    pub tau: f64,
    pub f_samples: Vec<PointC2>,
    pub u_samples: Vec<PointC2>,
}

/// Adapted coordinates of sample `k` of the box: `(s, t)` with `|s| <= 1`
/// complex and `|t| <= 1`; sample 0 is the center.
fn box_coords(k: usize) -> (Complex64, f64) {
    if k == 0 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let h = halton::<3>(k as u64);
    (Complex64::from_polar(h[0].sqrt(), TAU * h[1]), 2.0 * h[2] - 1.0)
}

/// Deterministic low-discrepancy samples of the boxes at `p`.
pub fn probe_boxes(domain: &DomainModel, p: PointC2, eps: f64, tau: f64, samples: usize) -> Result<CrProbe> {
    if !(eps > 0.0 && eps <= domain.eps0()) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside (0, {}]", domain.eps0())));
    }
    if !(0.0..=0.5).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau {tau} outside [0, 0.5]")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample required".into()));
    }
    let frame = boundary_frame(domain, p)?;
    let center = frame.offset(eps);
    let (rc, rr) = (tau * eps.sqrt(), tau * eps);
    let mut f_samples = Vec::with_capacity(samples);
    let mut u_samples = Vec::with_capacity(samples);
    for k in 0..samples {
        let (s, t) = box_coords(k);
        let f = center + frame.tang_c.scale(s * rc) + frame.tang_r * (t * rr);
        let u = domain.project_along(f, frame.normal * -1.0)?;
        f_samples.push(f);
        u_samples.push(u);
    }
    Ok(CrProbe { frame, eps, tau, f_samples, u_samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitDirection {
    /// The real tangent direction `i N` missing from the complex tangent line.
    Real,
    /// The complex tangent direction.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyRow {
    pub delta: f64,
    pub upper: f64,
    pub lower: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyFit {
    pub direction: FitDirection,
    pub rows: Vec<AnisotropyRow>,
    /// Least-squares slope of `log d_CR` against `log delta`.
    pub slope: f64,
}

/// Boundary point displaced from the frame origin by `delta` along `dir`.
pub fn displaced_target(domain: &DomainModel, frame: &BoundaryFrame, dir: FitDirection, delta: f64) -> Result<PointC2> {
    let v = match dir {
        FitDirection::Real => frame.tang_r,
        FitDirection::Complex => frame.tang_c,
    };
    domain.project_along(frame.p + v * delta, frame.normal)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Scaling exponent of the CR distance from `p` along `dir`.
pub fn anisotropy_fit(
    domain: &DomainModel,
    p: PointC2,
    deltas: &[f64],
    dir: FitDirection,
    segments: usize,
) -> Result<AnisotropyFit> {
    let mut distinct = deltas.to_vec();
    distinct.dedup();
    if deltas.len() < 4 || distinct.len() < 2 {
        return Err(Error::InsufficientData(format!("{} distinct of {} deltas; 4 required", distinct.len(), deltas.len())));
    }
    if distinct.len() != deltas.len() || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("deltas must be strictly decreasing".into()));
    }
    if deltas.iter().any(|&d| !(d > 0.0 && d <= 0.3)) {
        return Err(Error::InvalidParameter("deltas must lie in (0, 0.3]".into()));
    }
    let frame = boundary_frame(domain, p)?;
    let rows = Exec::default().map_slice(deltas, |&delta| -> Result<AnisotropyRow> {
        let q = displaced_target(domain, &frame, dir, delta)?;
        let path = cr_upper(domain, frame.p, q, segments, DEFAULT_ROUNDS)?;
        Ok(AnisotropyRow { delta, upper: path.length, lower: cr_lower(frame.p, q), residual: path.residual })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.delta.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.upper.ln()).collect();
    Ok(AnisotropyFit { direction: dir, slope: ls_slope(&xs, &ys), rows })
}

/// Offsets of `U` from `p` measured along the complex tangent plane and the
/// real tangent direction: `(max |<u - p, e>|, max |Re <u - p, i N>|)`.
pub fn probe_extents(probe: &CrProbe) -> (f64, f64) {
    let f = &probe.frame;
    probe.u_samples.iter().fold((0.0, 0.0), |(c, r), &u| {
        let d: CVec2 = u - f.p;
        (f64::max(c, d.hdot(f.tang_c).norm()), f64::max(r, d.rdot(f.tang_r).abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rng::stream;

    const BALL: DomainModel = DomainModel::UnitBall2;

    #[test]
    fn identical_endpoints_have_zero_length() {
        let p = PointC2::real(1.0, 0.0);
        assert_eq!(cr_upper(&BALL, p, p, 16, 20).unwrap().length, 0.0);
    }

    #[test]
    fn great_circles_are_horizontal() {
        for theta in [0.2, 0.4, 0.8] {
            let y = PointC2::real(f64::cos(theta), f64::sin(theta));
            let path = cr_upper(&BALL, PointC2::real(1.0, 0.0), y, DEFAULT_SEGMENTS, DEFAULT_ROUNDS).unwrap();
            assert!(path.length <= theta + 1e-2, "{theta}: {}", path.length);
            assert!(path.residual < RESIDUAL_TARGET);
        }
    }

    #[test]
    fn vertical_displacement_needs_a_loop() {
        let x = PointC2::real(1.0, 0.0);
        let y = PointC2::new(Complex64::cis(0.1), Complex64::new(0.0, 0.0));
        let path = cr_upper(&BALL, x, y, DEFAULT_SEGMENTS, DEFAULT_ROUNDS).unwrap();
        assert!(path.length >= 0.0999);
        assert!(path.length < 2.0);
        assert!(path.residual < RESIDUAL_TARGET);
        for p in &path.nodes {
            assert!(BALL.rho(*p).abs() < 1e-7);
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert!((cr_lower(PointC2::real(1.0, 0.0), PointC2::real(0.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_pairs_are_bracketed_and_roughly_symmetric() {
        let mut rng = stream(11, 0);
        for _ in 0..6 {
            let x = BALL.sample_boundary(&mut rng);
            let y = BALL.sample_boundary(&mut rng);
            let xy = cr_upper(&BALL, x, y, 32, DEFAULT_ROUNDS).unwrap();
            let yx = cr_upper(&BALL, y, x, 32, DEFAULT_ROUNDS).unwrap();
            assert!(cr_lower(x, y) <= xy.length);
            assert!(xy.length <= 10.0);
            assert!((xy.length - yx.length).abs() <= 0.05 * xy.length.max(yx.length), "{} {}", xy.length, yx.length);
        }
    }

    #[test]
    fn ellipsoid_paths_converge() {
        let e = DomainModel::ellipsoid(2.0).unwrap();
        let x = PointC2::real(2.0, 0.0);
        let y = e.project_along(PointC2::new(Complex64::new(1.9, 0.3), Complex64::new(0.2, 0.1)), CVec2::real(1.0, 0.0)).unwrap();
        let path = cr_upper(&e, x, y, 32, DEFAULT_ROUNDS).unwrap();
        assert!(path.length >= cr_lower(x, y));
    }

    #[test]
    fn probe_box_examples() {
        let p = PointC2::real(1.0, 0.0);
        let probe = probe_boxes(&BALL, p, 0.01, 0.1, 200).unwrap();
        assert!(probe.f_samples.iter().all(|f| BALL.rho(*f) < 0.0));
        assert!(probe.u_samples.iter().all(|u| BALL.rho(*u).abs() < 1e-7));
        let flat = probe_boxes(&BALL, p, 0.01, 0.0, 20).unwrap();
        assert!(flat.f_samples.iter().all(|f| f.distance(flat.frame.offset(0.01)) < 1e-15));
        assert!(flat.u_samples.iter().all(|u| u.distance(p) < 1e-9));
        assert_eq!(probe_boxes(&BALL, p, 0.01, 0.1, 1).unwrap().f_samples.len(), 1);
        assert!(probe_boxes(&BALL, p, 0.6, 0.1, 1).is_err());
    }

    #[test]
    fn probe_boxes_are_anisotropic() {
        let p = PointC2::real(1.0, 0.0);
        for (eps, tau) in [(0.01, 0.1), (0.04, 0.2), (0.001, 0.3)] {
            let probe = probe_boxes(&BALL, p, eps, tau, 400).unwrap();
            let (c, r) = probe_extents(&probe);
            let (c0, r0) = (tau * f64::sqrt(eps), tau * eps);
            assert!(c >= c0 / 3.0 && c <= 3.0 * c0, "{c} vs {c0}");
            assert!(r >= r0 / 3.0 && r <= 3.0 * r0, "{r} vs {r0}");
        }
    }

    #[test]
    fn anisotropy_rejects_repeated_deltas() {
        let p = PointC2::real(1.0, 0.0);
        assert!(matches!(
            anisotropy_fit(&BALL, p, &[0.1; 4], FitDirection::Real, 16),
            Err(Error::InsufficientData(_))
        ));
    }
}
