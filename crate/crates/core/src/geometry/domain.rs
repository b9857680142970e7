use super::{CVec2, PointC2};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Built-in model domains with exact quadratic defining functions.
///
/// The defining function `rho` is negative inside and vanishes on the
/// boundary. `UnitDisk` is the planar disk embedded as `{(w, 0)}`; its
/// points must have `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainModel {
    /// `|w|^2 + |z|^2 < 1`.
    UnitBall2,
    /// `|w|^2 / a^2 + |z|^2 < 1`.
    Ellipsoid { a: f64 },
    /// `Re w > |w|^2 + |z|^2`, the ball of radius 1/2 about `(1/2, 0)`.
    SiegelModelBall,
    /// `|w| < 1` in the line `z = 0`.
    UnitDisk,
    /// `max(|w|, |z|) < 1`.
    Polydisc2,
}

/// Complex Hessian `H[j][k] = d^2 rho / dz_j dzbar_k`.
pub type LeviMatrix = [[Complex64; 2]; 2];

impl DomainModel {
    pub fn ellipsoid(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(DomainModel::Ellipsoid { a })
        } else {
            Err(Error::InvalidParameter(format!("ellipsoid semi-axis {a} must be positive")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainModel::UnitBall2 => "unit ball",
            DomainModel::Ellipsoid { .. } => "ellipsoid",
            DomainModel::SiegelModelBall => "Siegel model ball",
            DomainModel::UnitDisk => "unit disk",
            DomainModel::Polydisc2 => "bidisc",
        }
    }

    /// Defining function.
    pub fn rho(&self, p: PointC2) -> f64 {
        let (w2, z2) = (p.w.norm_sqr(), p.z.norm_sqr());
        match *self {
            DomainModel::UnitBall2 => w2 + z2 - 1.0,
            DomainModel::Ellipsoid { a } => w2 / (a * a) + z2 - 1.0,
            DomainModel::SiegelModelBall => w2 + z2 - p.w.re,
            DomainModel::UnitDisk => w2 - 1.0,
            DomainModel::Polydisc2 => w2.max(z2) - 1.0,
        }
    }

    pub fn contains(&self, p: PointC2) -> bool {
        match self {
            DomainModel::UnitDisk => p.z == Complex64::new(0.0, 0.0) && self.rho(p) < 0.0,
            _ => self.rho(p) < 0.0,
        }
    }

    /// Holomorphic differential `(d rho / dw, d rho / dz)` as a covector.
    pub fn d_rho(&self, p: PointC2) -> Result<CVec2> {
        let c = |x: f64| Complex64::new(x, 0.0);
        Ok(match *self {
            DomainModel::UnitBall2 => CVec2::new(p.w.conj(), p.z.conj()),
            DomainModel::Ellipsoid { a } => CVec2::new(p.w.conj() / (a * a), p.z.conj()),
            DomainModel::SiegelModelBall => CVec2::new(p.w.conj() - c(0.5), p.z.conj()),
            DomainModel::UnitDisk => CVec2::new(p.w.conj(), c(0.0)),
            DomainModel::Polydisc2 => {
                let (w2, z2) = (p.w.norm_sqr(), p.z.norm_sqr());
                if (w2 - z2).abs() < 1e-12 {
                    return Err(Error::NonSmoothBoundary);
                }
                if w2 > z2 {
                    CVec2::new(p.w.conj(), c(0.0))
                } else {
                    CVec2::new(c(0.0), p.z.conj())
                }
            }
        })
    }

    /// Euclidean gradient of `rho` in C^2 = R^4, i.e. `2 conj(d rho)`.
    pub fn real_gradient(&self, p: PointC2) -> Result<CVec2> {
        Ok(self.d_rho(p)?.conj() * 2.0)
    }

    /// Analytic complex Hessian of `rho`.
    pub fn levi_matrix(&self, p: PointC2) -> Result<LeviMatrix> {
        let zero = Complex64::new(0.0, 0.0);
        let diag = |a: f64, b: f64| [[Complex64::new(a, 0.0), zero], [zero, Complex64::new(b, 0.0)]];
        Ok(match *self {
            DomainModel::UnitBall2 | DomainModel::SiegelModelBall => diag(1.0, 1.0),
            DomainModel::Ellipsoid { a } => diag(1.0 / (a * a), 1.0),
            DomainModel::UnitDisk => diag(1.0, 0.0),
            DomainModel::Polydisc2 => {
                let (w2, z2) = (p.w.norm_sqr(), p.z.norm_sqr());
                if (w2 - z2).abs() < 1e-12 {
                    return Err(Error::NonSmoothBoundary);
                }
                if w2 > z2 {
                    diag(1.0, 0.0)
                } else {
                    diag(0.0, 1.0)
                }
            }
        })
    }

    /// Diagonal weights `(a_w, a_z)` when `rho = a_w |w|^2 + a_z |z|^2 - 1`.
    ///
    /// These are the circled strictly pseudoconvex models on which the
    /// CR-path machinery runs.
    pub fn hermitian_weights(&self) -> Option<[f64; 2]> {
        match *self {
            DomainModel::UnitBall2 => Some([1.0, 1.0]),
            DomainModel::Ellipsoid { a } => Some([1.0 / (a * a), 1.0]),
            _ => None,
        }
    }

    /// Whether `e^{it} D = D` (the model is circled about the origin).
    pub fn is_circled(&self) -> bool {
        !matches!(self, DomainModel::SiegelModelBall)
    }

    /// Largest normal offset `eps` for which the box constructions are used.
    pub fn eps0(&self) -> f64 {
        match *self {
            DomainModel::UnitBall2 => 0.5,
            DomainModel::Ellipsoid { a } => 0.5 * a.min(1.0 / a).min(1.0),
            DomainModel::SiegelModelBall => 0.25,
            DomainModel::UnitDisk | DomainModel::Polydisc2 => 0.0,
        }
    }

    /// One Newton step of `p` onto the zero set of `rho` along its gradient.
    pub fn newton_project(&self, p: PointC2) -> Result<PointC2> {
        let g = self.real_gradient(p)?;
        let n2 = g.norm_sqr();
        if n2 < 1e-18 {
            return Err(Error::DegenerateGradient { norm: n2.sqrt() });
        }
        Ok(p - g * (self.rho(p) / n2))
    }

    /// Boundary point `q + lambda * dir` with `|lambda|` smallest, found by
    /// bracketing on both sides of `lambda = 0` and bisecting to `1e-10`.
    pub fn project_along(&self, q: PointC2, dir: CVec2) -> Result<PointC2> {
        let len = dir.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::ProjectionFailure);
        }
        let dir = dir * (1.0 / len);
        let f = |t: f64| self.rho(q + dir * t);
        let f0 = f(0.0);
        if f0 == 0.0 {
            return Ok(q);
        }
        let mut step = 1e-6;
        while step < 8.0 {
            for sign in [1.0, -1.0] {
                let t = sign * step;
                if f(t).signum() != f0.signum() {
                    let (mut lo, mut hi) = if sign > 0.0 { (0.0, t) } else { (t, 0.0) };
                    let flo = f(lo);
                    while hi - lo > 1e-10 {
                        let mid = 0.5 * (lo + hi);
                        if f(mid).signum() == flo.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    return Ok(q + dir * (0.5 * (lo + hi)));
                }
            }
            step *= 2.0;
        }
        Err(Error::ProjectionFailure)
    }

    /// Random boundary point drawn from `rng`.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> PointC2 {
        let mut gauss = || -> f64 { rng.sample(StandardNormal) };
        let v = PointC2::from_r4([gauss(), gauss(), gauss(), gauss()]);
        let n = v.norm().max(1e-300);
        match *self {
            DomainModel::UnitBall2 | DomainModel::Ellipsoid { .. } => {
                let u = v.scale_real(1.0 / n);
                let q = self.rho(u) + 1.0;
                u.scale_real(1.0 / q.sqrt())
            }
            DomainModel::SiegelModelBall => {
                let u = v.scale_real(0.5 / n);
                PointC2::new(u.w + 0.5, u.z)
            }
            DomainModel::UnitDisk => {
                let w = Complex64::new(v.w.re, v.w.im);
                PointC2::new(w / w.norm().max(1e-300), Complex64::new(0.0, 0.0))
            }
            DomainModel::Polydisc2 => {
                let m = v.w.norm().max(v.z.norm()).max(1e-300);
                v.scale_real(1.0 / m)
            }
        }
    }

    /// Random interior point drawn uniformly from the domain.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> PointC2 {
        loop {
            let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let p = match *self {
                DomainModel::Ellipsoid { a } => PointC2::from_r4([a * x[0], a * x[1], x[2], x[3]]),
                DomainModel::SiegelModelBall => {
                    PointC2::from_r4([0.5 + 0.5 * x[0], 0.5 * x[1], 0.5 * x[2], 0.5 * x[3]])
                }
                DomainModel::UnitDisk => PointC2::from_r4([x[0], x[1], 0.0, 0.0]),
                _ => PointC2::from_r4(x),
            };
            if self.contains(p) {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rng::stream;

    #[test]
    fn siegel_model_is_the_ball_about_one_half() {
        let m = DomainModel::SiegelModelBall;
        assert!(m.rho(PointC2::real(1.0, 0.0)).abs() < 1e-15);
        assert!(m.rho(PointC2::ORIGIN).abs() < 1e-15);
        assert!(m.contains(PointC2::real(0.5, 0.0)));
        assert!(!m.contains(PointC2::real(0.5, 0.6)));
    }

    #[test]
    fn boundary_samples_lie_on_the_boundary() {
        let mut rng = stream(1, 0);
        for m in [
            DomainModel::UnitBall2,
            DomainModel::Ellipsoid { a: 2.0 },
            DomainModel::SiegelModelBall,
            DomainModel::Polydisc2,
        ] {
            for _ in 0..200 {
                let p = m.sample_boundary(&mut rng);
                assert!(m.rho(p).abs() < 1e-12, "{m:?} {p:?}");
            }
        }
    }

    #[test]
    fn projection_finds_the_nearest_crossing() {
        let m = DomainModel::UnitBall2;
        let q = PointC2::real(0.5, 0.0);
        let p = m.project_along(q, CVec2::real(1.0, 0.0)).unwrap();
        assert!((p.w.re - 1.0).abs() < 1e-9);
        let p = m.project_along(q, CVec2::real(-1.0, 0.0)).unwrap();
        assert!((p.w.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn polydisc_corner_is_not_smooth() {
        let m = DomainModel::Polydisc2;
        assert_eq!(m.d_rho(PointC2::real(1.0, 1.0)), Err(Error::NonSmoothBoundary));
    }
}
