//! Quantitative Hopf lemma by Poisson quadrature, normal escape rates of
//! boundary maps, and the normal-to-tangential derivative transfer.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{boundary_frame, levi_value, rng::stream, DomainModel, PointC2, BOUNDARY_TOL};
use crate::maps::{derivative, BoundaryMap, FD_STEP};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

pub const DEFAULT_ORDER: usize = 4096;
pub const MIN_ORDER: usize = 2048;

pub type BoundaryData = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary data on the circle of radius `r`, `<= -1` on the arc
/// `|theta| <= arc_half_angle` and `<= 0` elsewhere.
#[derive(Clone)]
pub struct HarmonicProbe {
    pub radius: f64,
    pub arc_half_angle: f64,
    pub data: BoundaryData,
    /// Angles in `(-pi, pi]` where the data may jump.
    pub breakpoints: Vec<f64>,
    pub order: usize,
}

impl std::fmt::Debug for HarmonicProbe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HarmonicProbe")
            .field("radius", &self.radius)
            .field("arc_half_angle", &self.arc_half_angle)
            .field("breakpoints", &self.breakpoints)
            .field("order", &self.order)
            .finish()
    }
}

impl HarmonicProbe {
    /// `-1` on `|theta| <= arc_half_angle`, `0` elsewhere.
    pub fn arc_indicator(radius: f64, arc_half_angle: f64, order: usize) -> Result<Self> {
        let a = arc_half_angle;
        let data: BoundaryData = Arc::new(move |theta: f64| if theta.abs() <= a { -1.0 } else { 0.0 });
        let breakpoints = if a < PI { vec![-a, a] } else { Vec::new() };
        Self::new(radius, a, data, breakpoints, order)
    }

    pub fn new(radius: f64, arc_half_angle: f64, data: BoundaryData, breakpoints: Vec<f64>, order: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("radius {radius} must be positive")));
        }
        if !(arc_half_angle > 0.0 && arc_half_angle <= PI) {
            return Err(Error::InvalidParameter(format!("arc half-angle {arc_half_angle} outside (0, pi]")));
        }
        if order < MIN_ORDER {
            return Err(Error::InvalidParameter(format!("quadrature order {order} below {MIN_ORDER}")));
        }
        let probe = Self { radius, arc_half_angle, data, breakpoints, order };
        for k in 0..order {
            let theta = -PI + TAU * (k as f64 + 0.5) / order as f64;
            let g = (probe.data)(theta);
            let cap = if theta.abs() <= arc_half_angle { -1.0 } else { 0.0 };
            if !(g <= cap) {
                return Err(Error::InvalidParameter(format!("boundary data {g} exceeds {cap} at theta = {theta}")));
            }
        }
        Ok(probe)
    }

    /// Value at `theta`.
    pub fn boundary_value(&self, theta: f64) -> f64 {
        (self.data)(wrap(theta))
    }

    /// Poisson integral at the point `x` of the real diameter, `|x| < r`.
    ///
    /// With `a = x / r`, the substitution `e^{i theta} = (e^{i phi} + a) / (1 + a e^{i phi})`
    /// turns the Poisson integral into the mean of the data over `phi`.
    /// The `phi` circle is cut at the images of the breakpoints and each
    /// piece integrated by the composite trapezoid rule with one-sided end
    /// values.
    pub fn poisson(&self, x: f64) -> f64 {
        let a = x / self.radius;
        let to_theta = |phi: f64| {
            let e = Complex64::cis(phi);
            ((e + a) / (1.0 + a * e)).arg()
        };
        let to_phi = |theta: f64| {
            let e = Complex64::cis(theta);
            ((e - a) / (1.0 - a * e)).arg()
        };
        let mut cuts: Vec<f64> = self.breakpoints.iter().map(|&t| to_phi(t)).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        if cuts.is_empty() {
            cuts.push(-PI);
        }
        let m = cuts.len();
        let mut total = 0.0;
        for j in 0..m {
            let lo = cuts[j];
            let hi = if j + 1 < m { cuts[j + 1] } else { cuts[0] + TAU };
            let len = hi - lo;
            if len <= 0.0 {
                continue;
            }
            let nodes = ((self.order as f64 * len / TAU).ceil() as usize).max(2);
            let h = len / nodes as f64;
            let inset = 1e-12 * len;
            let g = |phi: f64| self.boundary_value(to_theta(phi));
            let mut s = 0.5 * (g(lo + inset) + g(hi - inset));
            for k in 1..nodes {
                s += g(lo + h * k as f64);
            }
            total += s * h;
        }
        total / TAU
    }
}

fn wrap(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t == -PI {
        PI
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfCheck {
    pub u_val: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `u(-r + t) <= -alpha t / (4 pi r)` for the Poisson extension `u`.
pub fn hopf_bound_check(probe: &HarmonicProbe, t: f64) -> Result<HopfCheck> {
    if t < 1e-8 {
        return Err(Error::QuadratureUnderflow { t });
    }
    if t > probe.radius {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds the radius {}", probe.radius)));
    }
    let r = probe.radius;
    let u_val = probe.poisson(-r + t);
    let bound = -probe.arc_half_angle * t / (4.0 * PI * r);
    Ok(HopfCheck { u_val, bound, ok: u_val <= bound + 1e-6 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    /// `(u(-r) - u(-r + t)) / t`.
    pub slope: f64,
    /// `alpha / (4 pi r)`.
    pub bound: f64,
    pub ok: bool,
}

/// Normal derivative at `-r` against `alpha / (4 pi r)`, with `1e-3` slack.
///
/// Requires the data to vanish at `theta = pi`, the point where the
/// subharmonic function reaches the boundary value 0.
pub fn hopf_gradient_check(probe: &HarmonicProbe, t: f64) -> Result<GradientCheck> {
    let edge = probe.boundary_value(PI);
    if edge != 0.0 {
        return Err(Error::Inapplicable(format!("data equal {edge} at theta = pi, not 0")));
    }
    let check = hopf_bound_check(probe, t)?;
    let slope = (edge - check.u_val) / t;
    let bound = probe.arc_half_angle / (4.0 * PI * probe.radius);
    Ok(GradientCheck { slope, bound, ok: slope >= bound - 1e-3 })
}

/// Tolerance on `|rho(F(q))|` for boundary maps.
pub const MAP_BOUNDARY_TOL: f64 = 1e-6;
/// Largest disagreement between the steps `h` and `2h`.
pub const RICHARDSON_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalRate {
    pub q: PointC2,
    pub value: f64,
    pub fd_step: f64,
    /// `|n(h) - n(2h)|`.
    pub richardson_gap: f64,
    pub flagged: bool,
}

fn image_on_boundary(domain: &DomainModel, f: &dyn BoundaryMap, q: PointC2) -> Result<PointC2> {
    let fq = f.apply(q);
    let residual = domain.rho(fq).abs();
    if !(residual < MAP_BOUNDARY_TOL) {
        return Err(Error::MapsOffBoundary { residual });
    }
    domain.newton_project(fq)
}

/// `n_q(F) = <F'(q) N(q), N(F(q))>` by central differences along the normal.
pub fn normal_rate(domain: &DomainModel, f: &dyn BoundaryMap, q: PointC2, fd_step: f64) -> Result<NormalRate> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidParameter(format!("finite-difference step {fd_step} must be positive")));
    }
    let frame = boundary_frame(domain, q)?;
    let fq = image_on_boundary(domain, f, frame.p)?;
    let target_normal = boundary_frame(domain, fq)?.normal;
    let rate = |h: f64| {
        let d = (f.apply(frame.p + frame.normal * h) - f.apply(frame.p - frame.normal * h)) * (0.5 / h);
        d.rdot(target_normal)
    };
    let value = rate(fd_step);
    let gap = (value - rate(2.0 * fd_step)).abs();
    Ok(NormalRate { q: frame.p, value, fd_step, richardson_gap: gap, flagged: gap > RICHARDSON_TOL })
}

/// Extremes `(c1, c2)` of `L(e) / |d rho|` over `samples` boundary points.
pub fn levi_constants(domain: &DomainModel, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = stream(seed, 0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..samples.max(1) {
        let p = domain.sample_boundary(&mut rng);
        let frame = boundary_frame(domain, p)?;
        let v = levi_value(&domain.levi_matrix(frame.p)?, frame.tang_c) / domain.d_rho(frame.p)?.norm();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Relative slack for finite-difference error in the transfer inequality.
pub const TRANSFER_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    /// `sqrt(c1 / c2)`.
    pub c: f64,
    /// Normal rate used in the inequality (after inflation).
    pub n_q: f64,
    /// Smallest `|F'(q) u| / (c sqrt(n_q))` over the trials.
    pub min_ratio: f64,
    pub holds: bool,
}

/// Checks `|F'(q) u| >= c n_q^{1/2} |u|` for `trials` random unit complex
/// tangent vectors `u`, with 5% slack. `n_inflation` multiplies the measured
/// `n_q` (1 for the plain check).
pub fn tangential_transfer_check(
    domain: &DomainModel,
    f: &dyn BoundaryMap,
    q: PointC2,
    trials: usize,
    seed: u64,
    n_inflation: f64,
) -> Result<TransferReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial required".into()));
    }
    let residual = domain.rho(q).abs();
    if residual >= BOUNDARY_TOL {
        return Err(Error::PointNotOnBoundary { residual });
    }
    let (c1, c2) = levi_constants(domain, 256, seed)?;
    let c = (c1 / c2).sqrt();
    let n_q = normal_rate(domain, f, q, FD_STEP)?.value * n_inflation;
    if !(n_q > 0.0) {
        return Err(Error::Inapplicable(format!("normal rate {n_q} is not positive")));
    }
    let frame = boundary_frame(domain, q)?;
    let scale = c * n_q.sqrt();
    let ratios = Exec::default().map_range(trials, |k| {
        let mut rng = stream(seed, 1 + k as u64);
        let u = frame.tang_c.scale(Complex64::cis(rng.random_range(0.0..TAU)));
        derivative(f, frame.p, u).norm() / (scale * u.norm())
    });
    let min_ratio = ratios.into_iter().fold(f64::INFINITY, f64::min);
    Ok(TransferReport { c, n_q, min_ratio, holds: min_ratio >= 1.0 - TRANSFER_SLACK })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{BallAutomorphism, Identity, Rotation};

    const BALL: DomainModel = DomainModel::UnitBall2;

    #[test]
    fn constant_data() {
        let p = HarmonicProbe::arc_indicator(1.0, PI, DEFAULT_ORDER).unwrap();
        let c = hopf_bound_check(&p, 0.5).unwrap();
        assert!((c.u_val + 1.0).abs() < 1e-12);
        assert!((c.bound + 0.125).abs() < 1e-15);
        assert!(c.ok);
    }

    #[test]
    fn half_circle_data() {
        let p = HarmonicProbe::arc_indicator(1.0, PI / 2.0, DEFAULT_ORDER).unwrap();
        let c = hopf_bound_check(&p, 0.1).unwrap();
        assert!(c.u_val <= -0.0125 && c.ok);
        // Harmonic measure of the right half circle at x is 1/2 + atan(2x / (1 - x^2)) / pi.
        let x: f64 = -0.9;
        let exact = -(0.5 + (2.0 * x / (1.0 - x * x)).atan() / PI);
        assert!((c.u_val - exact).abs() < 1e-9, "{} {exact}", c.u_val);
    }

    #[test]
    fn mean_value_property() {
        for a in [PI / 8.0, PI / 4.0, PI / 2.0, PI] {
            let p = HarmonicProbe::arc_indicator(2.0, a, DEFAULT_ORDER).unwrap();
            assert!((p.poisson(0.0) + a / PI).abs() < 1e-8);
        }
    }

    #[test]
    fn gradient_version() {
        let p = HarmonicProbe::arc_indicator(1.0, PI / 4.0, DEFAULT_ORDER).unwrap();
        let g = hopf_gradient_check(&p, 1e-4).unwrap();
        assert!(g.ok, "{g:?}");
        let full = HarmonicProbe::arc_indicator(1.0, PI, DEFAULT_ORDER).unwrap();
        assert!(matches!(hopf_gradient_check(&full, 1e-4), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn probe_validation() {
        assert!(matches!(hopf_bound_check(&HarmonicProbe::arc_indicator(1.0, 1.0, 4096).unwrap(), 1e-9), Err(Error::QuadratureUnderflow { .. })));
        assert!(HarmonicProbe::arc_indicator(1.0, 1.0, 100).is_err());
        let bad: BoundaryData = Arc::new(|_| -0.5);
        assert!(HarmonicProbe::new(1.0, 1.0, bad, vec![], 4096).is_err());
    }

    #[test]
    fn normal_rate_examples() {
        let q = PointC2::real(1.0, 0.0);
        assert!((normal_rate(&BALL, &Identity, q, 1e-5).unwrap().value - 1.0).abs() < 1e-8);
        let rot = Rotation { theta_w: 0.7, theta_z: 0.0 };
        assert!((normal_rate(&BALL, &rot, q, 1e-5).unwrap().value - 1.0).abs() < 1e-8);
        let phi = BallAutomorphism::involution(PointC2::real(0.5, 0.0));
        let a = normal_rate(&BALL, &phi, q, 1e-4).unwrap();
        let b = normal_rate(&BALL, &phi, q, 1e-5).unwrap();
        assert!(a.value > 0.0 && (a.value - b.value).abs() < 1e-3 && !b.flagged);
        // Boundary derivative of (a - w) / (1 - a w) at w = 1 is (1 - a^2) / (1 - a)^2.
        assert!((b.value - 3.0).abs() < 1e-6, "{}", b.value);
    }

    #[test]
    fn maps_off_the_boundary_are_rejected() {
        let shrink = crate::maps::FnMap(|p: PointC2| p.scale_real(0.5));
        assert!(matches!(normal_rate(&BALL, &shrink, PointC2::real(1.0, 0.0), 1e-5), Err(Error::MapsOffBoundary { .. })));
    }

    #[test]
    fn transfer_examples() {
        let q = PointC2::real(1.0, 0.0);
        let id = tangential_transfer_check(&BALL, &Identity, q, 20, 1, 1.0).unwrap();
        assert!(id.holds && (id.c - 1.0).abs() < 1e-12);
        let phi = BallAutomorphism::involution(PointC2::real(0.5, 0.0));
        assert!(tangential_transfer_check(&BALL, &phi, q, 100, 2, 1.0).unwrap().holds);
        assert!(!tangential_transfer_check(&BALL, &phi, q, 100, 2, 100.0).unwrap().holds);
    }
}
