use super::{cr_upper, DEFAULT_ROUNDS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{boundary_frame, DomainModel, PointC2};
use crate::maps::{derivative, BoundaryMap};
use num_complex::Complex64;
use std::collections::HashMap;

/// Relative shrink of the target ball.
pub const DILATION_MARGIN: f64 = 0.1;
/// Segments of the membership paths.
pub const DILATION_SEGMENTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    /// Every sampled point of the target ball lies within `tolerance` of an image.
    pub holds: bool,
    pub source_members: usize,
    pub target_members: usize,
    pub uncovered: usize,
    pub tolerance: f64,
    /// Smallest `|F'(q) e_q|` over the source samples.
    pub measured_dilation: f64,
    /// `measured_dilation >= C`, the hypothesis of the dilation property.
    pub hypothesis_holds: bool,
}

type Member = ([usize; 3], PointC2);

/// Lattice points of the CR ball `B(center, radius)`, sampled on an
/// `n x n x n` lattice of adapted coordinates `center + s e + t i N`
/// (projected along the normal) with `|Re s|, |Im s| <= radius` and
/// `|t| <= radius^2 / 2`. Membership is `cr_upper <= radius`.
fn ball_members(domain: &DomainModel, center: PointC2, radius: f64, n: usize) -> Result<Vec<Member>> {
    let frame = boundary_frame(domain, center)?;
    let rs = radius.min(0.95);
    let rt = (0.5 * radius * radius).min(0.95);
    let coord = |i: usize, half: f64| half * (2.0 * i as f64 / (n - 1) as f64 - 1.0);
    let total = n * n * n;
    let members = Exec::default().map_range(total, |k| {
        let idx = [k / (n * n), (k / n) % n, k % n];
        let s = Complex64::new(coord(idx[0], rs), coord(idx[1], rs));
        let t = coord(idx[2], rt);
        let q0 = frame.p + frame.tang_c.scale(s) + frame.tang_r * t;
        let q = domain.project_along(q0, frame.normal).ok()?;
        let q = domain.newton_project(q).ok()?;
        let path = cr_upper(domain, frame.p, q, DILATION_SEGMENTS, DEFAULT_ROUNDS).ok()?;
        (path.length <= radius).then_some((idx, q))
    });
    Ok(members.into_iter().flatten().collect())
}

fn min_dilation(domain: &DomainModel, f: &dyn BoundaryMap, members: &[Member]) -> Result<f64> {
    let mut m = f64::INFINITY;
    for (_, q) in members {
        let e = boundary_frame(domain, *q)?.tang_c;
        m = m.min(derivative(f, *q, e).norm());
    }
    Ok(m)
}

/// Smallest tangential derivative norm `|F'(q) e_q|` over lattice samples of
/// the CR ball `B(x, r)`.
pub fn measure_dilation(domain: &DomainModel, f: &dyn BoundaryMap, x: PointC2, r: f64, n: usize) -> Result<f64> {
    let members = ball_members(domain, x, r, n)?;
    if members.is_empty() {
        return Err(Error::SamplingTooCoarse("no lattice point inside the ball".into()));
    }
    min_dilation(domain, f, &members)
}

/// Checks `F(B_CR(x, r)) ⊃ B_CR(F(x), C r)` on lattices of `n^3` points.
///
/// The target ball is shrunk by [`DILATION_MARGIN`]. A target sample is
/// covered when it lies within the tolerance of an image of a source sample;
/// the tolerance is the largest image distance between lattice neighbors.
pub fn dilation_check(
    domain: &DomainModel,
    f: &dyn BoundaryMap,
    x: PointC2,
    r: f64,
    c: f64,
    n: usize,
) -> Result<DilationReport> {
    if n < 3 {
        return Err(Error::SamplingTooCoarse(format!("{n} lattice points per axis; at least 3 required")));
    }
    if !(r > 0.0 && c > 0.0) {
        return Err(Error::InvalidParameter("radius and dilation constant must be positive".into()));
    }
    let source = ball_members(domain, x, r, n)?;
    if source.len() < 8 {
        return Err(Error::SamplingTooCoarse(format!("{} source samples", source.len())));
    }
    let images: HashMap<[usize; 3], PointC2> = source.iter().map(|(i, q)| (*i, f.apply(*q))).collect();
    let fx = f.apply(x);
    for p in images.values().chain(std::iter::once(&fx)) {
        let residual = domain.rho(*p).abs();
        if residual >= 1e-6 {
            return Err(Error::Inapplicable(format!("map leaves the boundary (|rho| = {residual:.2e})")));
        }
    }
    let measured = min_dilation(domain, f, &source)?;

    let mut tolerance: f64 = 0.0;
    for (idx, img) in &images {
        for axis in 0..3 {
            let mut nb = *idx;
            nb[axis] += 1;
            if let Some(other) = images.get(&nb) {
                tolerance = tolerance.max(img.distance(*other));
            }
        }
    }
    let image_list: Vec<PointC2> = images.values().copied().collect();
    let target = ball_members(domain, domain.newton_project(fx)?, c * r * (1.0 - DILATION_MARGIN), n)?;
    if target.is_empty() {
        return Err(Error::SamplingTooCoarse("no target sample".into()));
    }
    let uncovered = target
        .iter()
        .filter(|(_, y)| image_list.iter().map(|p| p.distance(*y)).fold(f64::INFINITY, f64::min) > tolerance)
        .count();
    Ok(DilationReport {
        holds: uncovered == 0,
        source_members: source.len(),
        target_members: target.len(),
        uncovered,
        tolerance,
        measured_dilation: measured,
        hypothesis_holds: measured >= c * (1.0 - 1e-9),
    })
}
