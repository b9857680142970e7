//! Kobayashi distances: exact formulas on the disk, ball and bidisc,
//! brackets by inclusion between Euclidean balls, diameters of the
//! `F_{eps,tau}` boxes after anisotropic rescaling, and the Hausdorff
//! convergence of rescaled model balls to the Siegel domain.
//!
//! Normalization: `d(0, x) = artanh |x|` on the unit disk.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{boundary_frame, levi_value, rng::stream, CVec2, DomainModel, PointC2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KobayashiMethod {
    ExactDisk,
    ExactBall,
    ExactPolydisc,
    ChainUpper,
    MonotoneLower,
}

impl KobayashiMethod {
    pub fn name(self) -> &'static str {
        match self {
            KobayashiMethod::ExactDisk => "exact_disk",
            KobayashiMethod::ExactBall => "exact_ball",
            KobayashiMethod::ExactPolydisc => "exact_polydisc",
            KobayashiMethod::ChainUpper => "chain_upper",
            KobayashiMethod::MonotoneLower => "monotone_bracket",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KobayashiValue {
    pub lower: f64,
    pub upper: f64,
    pub method: KobayashiMethod,
}

impl KobayashiValue {
    fn exact(v: f64, method: KobayashiMethod) -> Self {
        Self { lower: v, upper: v, method }
    }
}

/// Poincare distance on the unit disk.
pub fn disk_distance(a: Complex64, b: Complex64) -> f64 {
    let m = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    m.min(1.0).atanh()
}

/// Kobayashi distance on the unit ball of C^2.
///
/// Uses `|1 - <a,b>|^2 - (1-|a|^2)(1-|b|^2) = |a-b|^2 - |a_w b_z - a_z b_w|^2`,
/// which avoids cancellation for nearby points.
pub fn ball_distance(a: PointC2, b: PointC2) -> f64 {
    let d2 = (a - b).norm_sqr();
    let cross = (a.w * b.z - a.z * b.w).norm_sqr();
    let den = (Complex64::new(1.0, 0.0) - a.to_vec().hdot(b.to_vec())).norm_sqr();
    let m2 = ((d2 - cross) / den).clamp(0.0, 1.0);
    m2.sqrt().atanh()
}

pub fn kobayashi_exact(domain: &DomainModel, a: PointC2, b: PointC2) -> Result<KobayashiValue> {
    for p in [a, b] {
        if !domain.contains(p) {
            return Err(Error::OutsideDomain);
        }
    }
    match domain {
        DomainModel::UnitDisk => Ok(KobayashiValue::exact(disk_distance(a.w, b.w), KobayashiMethod::ExactDisk)),
        DomainModel::UnitBall2 => Ok(KobayashiValue::exact(ball_distance(a, b), KobayashiMethod::ExactBall)),
        DomainModel::Polydisc2 => Ok(KobayashiValue::exact(
            disk_distance(a.w, b.w).max(disk_distance(a.z, b.z)),
            KobayashiMethod::ExactPolydisc,
        )),
        DomainModel::SiegelModelBall => {
            let to_ball = |p: PointC2| PointC2::new((p.w - 0.5) * 2.0, p.z * 2.0);
            Ok(KobayashiValue::exact(ball_distance(to_ball(a), to_ball(b)), KobayashiMethod::ExactBall))
        }
        other => Err(Error::UnsupportedDomain(other.name())),
    }
}

/// Euclidean ball `B(center, radius)` in C^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclidBall {
    pub center: PointC2,
    pub radius: f64,
}

impl EuclidBall {
    pub fn new(center: PointC2, radius: f64) -> Self {
        Self { center, radius }
    }

    fn to_unit(&self, p: PointC2) -> PointC2 {
        (p - self.center).to_point().scale_real(1.0 / self.radius)
    }

    pub fn contains(&self, p: PointC2) -> bool {
        p.distance(self.center) < self.radius
    }

    pub fn distance(&self, a: PointC2, b: PointC2) -> f64 {
        ball_distance(self.to_unit(a), self.to_unit(b))
    }
}

const INCLUSION_SAMPLES: usize = 1000;

fn unit_directions(seed: u64, n: usize) -> Vec<CVec2> {
    let mut rng = stream(seed, 0);
    (0..n)
        .map(|_| {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            CVec2::from_r4(v).normalized().unwrap_or(CVec2::real(1.0, 0.0))
        })
        .collect()
}

/// Bracket `d_outer <= d_domain <= d_inner` for `inner ⊂ domain ⊂ outer`.
///
/// Both inclusions are checked on 1000 sampled points: the sphere of
/// `inner` must lie in the closed domain and boundary points of the domain
/// in the closed `outer`.
pub fn kobayashi_bounds(
    domain: &DomainModel,
    a: PointC2,
    b: PointC2,
    inner: EuclidBall,
    outer: EuclidBall,
) -> Result<KobayashiValue> {
    if !(inner.contains(a) && inner.contains(b)) {
        return Err(Error::InclusionViolated("points must lie in the inner ball".into()));
    }
    let tol = 1e-12;
    for u in unit_directions(0x6b6f, INCLUSION_SAMPLES) {
        let p = inner.center + u * inner.radius;
        if domain.rho(p) > tol {
            return Err(Error::InclusionViolated(format!("inner ball leaves the {}", domain.name())));
        }
    }
    let mut rng = stream(0x6b70, 0);
    for _ in 0..INCLUSION_SAMPLES {
        let p = domain.sample_boundary(&mut rng);
        if p.distance(outer.center) > outer.radius * (1.0 + tol) {
            return Err(Error::InclusionViolated(format!("the {} leaves the outer ball", domain.name())));
        }
    }
    Ok(KobayashiValue { lower: outer.distance(a, b), upper: inner.distance(a, b), method: KobayashiMethod::MonotoneLower })
}

/// Largest `eps` accepted by [`feps_diameter`].
pub const FEPS_EPS0: f64 = 0.1;
/// Largest `tau` accepted by [`feps_diameter`].
pub const FEPS_TAU2: f64 = 0.2;

/// The ball `B((1,0), 1/2)` inscribed in every rescaled domain.
pub const INSCRIBED: EuclidBall = EuclidBall {
    center: PointC2 { w: Complex64 { re: 1.0, im: 0.0 }, z: Complex64 { re: 0.0, im: 0.0 } },
    radius: 0.5,
};

/// Points of `F_{1,tau} = {Re w = 1, |Im w| <= tau, |z| <= tau}` used for
/// its diameter: 9 heights times 49 points of the disk `|z| <= tau`.
fn f1_lattice(tau: f64) -> Vec<PointC2> {
    let mut pts = Vec::new();
    for i in 0..9 {
        let t = tau * (i as f64 / 4.0 - 1.0);
        pts.push(PointC2::new(Complex64::new(1.0, t), Complex64::new(0.0, 0.0)));
        for ring in 1..=3 {
            for k in 0..16 {
                let z = Complex64::from_polar(tau * ring as f64 / 3.0, std::f64::consts::TAU * k as f64 / 16.0);
                pts.push(PointC2::new(Complex64::new(1.0, t), z));
            }
        }
    }
    pts
}

fn diameter(points: &[PointC2], metric: impl Fn(PointC2, PointC2) -> f64 + Sync) -> f64 {
    Exec::default()
        .map_range(points.len(), |i| points[i + 1..].iter().map(|&q| metric(points[i], q)).fold(0.0, f64::max))
        .into_iter()
        .fold(0.0, f64::max)
}

/// `psi_1(tau)`, the Kobayashi diameter of `F_{1,tau}` in `B((1,0), 1/2)`.
pub fn psi1(tau: f64) -> f64 {
    diameter(&f1_lattice(tau), |a, b| INSCRIBED.distance(a, b))
}

/// Upper estimate of the Kobayashi diameter of `F_{eps,tau}` at `p`.
///
/// A point `p + W N + Z e` is sent to `(W / eps, sqrt(c_L / eps) Z)` with
/// `c_L = L(e) / (2 |d rho|)`, a biholomorphism onto a domain containing
/// `B((1,0), 1/2)` (checked on 1000 points), whose distance bounds the
/// distance in the domain from above.
pub fn feps_diameter(domain: &DomainModel, p: PointC2, eps: f64, tau: f64, samples: usize) -> Result<f64> {
    if !(eps > 0.0 && eps <= FEPS_EPS0) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside (0, {FEPS_EPS0}]")));
    }
    if !(0.0..=FEPS_TAU2).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau {tau} outside [0, {FEPS_TAU2}]")));
    }
    let frame = boundary_frame(domain, p)?;
    let p = frame.p;
    let levi = levi_value(&domain.levi_matrix(p)?, frame.tang_c);
    let c_l = levi / (2.0 * domain.d_rho(p)?.norm());
    if !(c_l > 0.0) {
        return Err(Error::Inapplicable("Levi form is not positive".into()));
    }
    let unscale = |q: PointC2| p + frame.normal.scale(q.w * eps) + frame.tang_c.scale(q.z * (eps / c_l).sqrt());
    for u in unit_directions(0x6665, INCLUSION_SAMPLES) {
        let q = INSCRIBED.center + u * INSCRIBED.radius;
        if domain.rho(unscale(q)) >= 0.0 {
            return Err(Error::InclusionViolated("B((1,0),1/2) is not inside the rescaled domain".into()));
        }
    }
    let probe = crate::cr::probe_boxes(domain, p, eps, tau, samples.max(1))?;
    let rescaled: Vec<PointC2> = probe
        .f_samples
        .iter()
        .map(|&f| {
            let d = f - p;
            PointC2::new(d.hdot(frame.normal) / eps, d.hdot(frame.tang_c) * (c_l / eps).sqrt())
        })
        .collect();
    Ok(diameter(&rescaled, |a, b| INSCRIBED.distance(a, b)))
}

/// `psi_2(alpha)`, the Poincare diameter of the disk `D_alpha` in the unit disk.
pub fn arc_diameter(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 1)")));
    }
    Ok((2.0 * alpha / (1.0 + alpha * alpha)).atanh())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffEstimate {
    pub value: f64,
    pub lattice_spacing: f64,
}

/// Lattice points per axis of [`rescale_hausdorff`].
pub const HAUSDORFF_LATTICE: usize = 64;

/// Distance from `(u, v, r)` (meaning `w = u + iv`, `|z| = r`) to the
/// ellipsoid `eps |w - 1/(2 eps)|^2 + |z|^2 <= 1/(4 eps)`.
fn distance_to_rescaled(eps: f64, u: f64, v: f64, r: f64) -> f64 {
    let c = 0.5 / eps;
    let rhs = 0.25 / eps;
    let y = [u - c, v, r];
    let a = [eps, eps, 1.0];
    let g = |lam: f64| (0..3).map(|i| a[i] * (y[i] / (1.0 + lam * a[i])).powi(2)).sum::<f64>() - rhs;
    if g(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let lam = hi;
    (0..3).map(|i| (y[i] * lam * a[i] / (1.0 + lam * a[i])).powi(2)).sum::<f64>().sqrt()
}

/// Hausdorff distance over the window `[-W, W]^2 x {|z| <= W}` between the
/// rescaled Siegel model ball `{Re w > eps |w|^2 + |z|^2}` and
/// `Sigma = {Re w >= |z|^2}`.
///
/// The rescaled ball lies in `Sigma`, so only the distance from lattice
/// points of `Sigma` to the rescaled ball contributes; it is computed
/// exactly for each point of a `64^3` lattice in `(Re w, Im w, |z|)`.
pub fn rescale_hausdorff(eps: f64, window: f64) -> Result<HausdorffEstimate> {
    if !(eps >= 0.0 && eps <= 0.5) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside [0, 0.5]")));
    }
    if !(window > 0.0 && window <= 3.0) {
        return Err(Error::InvalidParameter(format!("window {window} outside (0, 3]")));
    }
    let n = HAUSDORFF_LATTICE;
    let spacing = 2.0 * window / (n - 1) as f64;
    if eps == 0.0 {
        return Ok(HausdorffEstimate { value: 0.0, lattice_spacing: spacing });
    }
    let coord = |i: usize| -window + spacing * i as f64;
    let slabs = Exec::default().map_range(n, |i| {
        let u = coord(i);
        let mut m: f64 = 0.0;
        for j in 0..n {
            let v = coord(j);
            for k in 0..n {
                let r = window * k as f64 / (n - 1) as f64;
                if u >= r * r {
                    m = m.max(distance_to_rescaled(eps, u, v, r));
                }
            }
        }
        m
    });
    Ok(HausdorffEstimate { value: slabs.into_iter().fold(0.0, f64::max), lattice_spacing: spacing })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let d = DomainModel::UnitDisk;
        let k = kobayashi_exact(&d, PointC2::ORIGIN, PointC2::real(0.5, 0.0)).unwrap();
        assert!((k.upper - 0.5f64.atanh()).abs() < 1e-15);
        let k = kobayashi_exact(&DomainModel::UnitBall2, PointC2::ORIGIN, PointC2::real(0.5, 0.0)).unwrap();
        assert!((k.upper - 0.5f64.atanh()).abs() < 1e-15);
        let k = kobayashi_exact(&DomainModel::Polydisc2, PointC2::ORIGIN, PointC2::real(0.5, 0.3)).unwrap();
        assert!((k.upper - 0.5f64.atanh()).abs() < 1e-15);
        assert_eq!(kobayashi_exact(&d, PointC2::ORIGIN, PointC2::real(1.5, 0.0)), Err(Error::OutsideDomain));
    }

    #[test]
    fn ball_distance_matches_the_involution_oracle() {
        use crate::maps::{BallAutomorphism, BoundaryMap};
        let a = PointC2::new(Complex64::new(0.3, -0.1), Complex64::new(0.2, 0.4));
        let b = PointC2::new(Complex64::new(-0.5, 0.2), Complex64::new(0.1, -0.3));
        let m = BallAutomorphism::involution(a).apply(b).norm();
        assert!((ball_distance(a, b) - m.atanh()).abs() < 1e-13);
    }

    #[test]
    fn bounds_examples() {
        let ball = DomainModel::UnitBall2;
        let unit = EuclidBall::new(PointC2::ORIGIN, 1.0);
        let (a, b) = (PointC2::real(0.2, 0.1), PointC2::real(-0.3, 0.4));
        let k = kobayashi_bounds(&ball, a, b, unit, unit).unwrap();
        assert!((k.lower - ball_distance(a, b)).abs() < 1e-15 && k.lower == k.upper);
        let k = kobayashi_bounds(&ball, a, a, unit, unit).unwrap();
        assert_eq!((k.lower, k.upper), (0.0, 0.0));
        let too_big = EuclidBall::new(PointC2::ORIGIN, 1.2);
        assert!(matches!(kobayashi_bounds(&ball, a, b, too_big, unit), Err(Error::InclusionViolated(_))));
    }

    #[test]
    fn siegel_model_bracket() {
        let s = DomainModel::SiegelModelBall;
        let (a, b) = (PointC2::real(0.5, 0.05), PointC2::real(0.45, -0.1));
        let inner = EuclidBall::new(PointC2::real(0.5, 0.0), 0.4);
        let outer = EuclidBall::new(PointC2::real(0.5, 0.0), 0.6);
        let k = kobayashi_bounds(&s, a, b, inner, outer).unwrap();
        let exact = kobayashi_exact(&s, a, b).unwrap().upper;
        assert!(k.lower <= exact && exact <= k.upper && k.upper.is_finite());
    }

    #[test]
    fn arc_diameter_matches_pair_maximization() {
        for alpha in [0.1, 0.5] {
            let mut best: f64 = 0.0;
            for i in 0..64 {
                for j in 0..64 {
                    let a = Complex64::from_polar(alpha, std::f64::consts::TAU * i as f64 / 64.0);
                    let b = Complex64::from_polar(alpha, std::f64::consts::TAU * j as f64 / 64.0);
                    best = best.max(disk_distance(a, b));
                }
            }
            assert!((arc_diameter(alpha).unwrap() - best).abs() < 1e-12);
        }
        assert!((arc_diameter(0.5).unwrap() - 0.8f64.atanh()).abs() < 1e-15);
    }

    #[test]
    fn feps_examples() {
        let ball = DomainModel::UnitBall2;
        let p = PointC2::real(1.0, 0.0);
        let d1 = feps_diameter(&ball, p, 0.01, 0.1, 200).unwrap();
        assert!(d1 <= psi1(0.1));
        let d2 = feps_diameter(&ball, p, 0.005, 0.1, 200).unwrap();
        assert!((d1 - d2).abs() < 0.1 * d1);
        assert!(feps_diameter(&ball, p, 0.01, 1e-6, 50).unwrap() < 1e-4);
    }

    #[test]
    fn hausdorff_decreases() {
        let h1 = rescale_hausdorff(0.1, 2.0).unwrap();
        assert!(h1.value <= 0.1 * 8.0 + h1.lattice_spacing);
        let h2 = rescale_hausdorff(0.05, 2.0).unwrap();
        assert!(h2.value <= h1.value + h1.lattice_spacing);
        assert_eq!(rescale_hausdorff(0.0, 2.0).unwrap().value, 0.0);
    }
}
