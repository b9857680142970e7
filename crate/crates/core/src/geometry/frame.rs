use super::{CVec2, DomainModel, PointC2};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Tolerance on `|rho(p)|` for a point to count as a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Orthonormal frame of a boundary point.
///
/// `T_p = span_C(tang_c) + span_R(tang_r)` with `tang_r = i * normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFrame {
    pub p: PointC2,
    /// Inward unit normal.
    pub normal: CVec2,
    /// Unit vector spanning the complex tangent line.
    pub tang_c: CVec2,
    /// The real tangent direction missing from the complex tangent line.
    pub tang_r: CVec2,
}

impl BoundaryFrame {
    /// `p + eps * normal`.
    pub fn offset(&self, eps: f64) -> PointC2 {
        self.p + self.normal * eps
    }

    /// Largest violation of orthonormality among the frame relations.
    pub fn orthonormality_residual(&self) -> f64 {
        [
            self.normal.hdot(self.tang_c).norm(),
            self.normal.rdot(self.tang_r).abs(),
            (self.normal.norm() - 1.0).abs(),
            (self.tang_c.norm() - 1.0).abs(),
            (self.tang_r.norm() - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn check_on_boundary(domain: &DomainModel, p: PointC2) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::DomainError("non-finite point".into()));
    }
    let residual = domain.rho(p).abs();
    if residual >= BOUNDARY_TOL {
        return Err(Error::PointNotOnBoundary { residual });
    }
    Ok(())
}

/// Rotates `v` by a unit phase so its largest component is real positive.
fn canonical_phase(v: CVec2) -> CVec2 {
    let lead = if v.dw.norm() >= v.dz.norm() { v.dw } else { v.dz };
    if lead.norm() == 0.0 {
        return v;
    }
    v.scale(lead.conj() / lead.norm())
}

/// Frame of the boundary of `domain` at `p`.
pub fn boundary_frame(domain: &DomainModel, p: PointC2) -> Result<BoundaryFrame> {
    if matches!(domain, DomainModel::UnitDisk) {
        return Err(Error::UnsupportedDomain(domain.name()));
    }
    check_on_boundary(domain, p)?;
    let p = domain.newton_project(p)?;
    let g = domain.real_gradient(p)?;
    let gn = g.norm();
    if gn < 1e-9 {
        return Err(Error::DegenerateGradient { norm: gn });
    }
    let normal = g * (-1.0 / gn);
    let tang_c = canonical_phase(CVec2::new(normal.dz.conj(), -normal.dw.conj()));
    let tang_r = normal.scale(Complex64::i());
    Ok(BoundaryFrame { p, normal, tang_c, tang_r })
}

/// Complex tangent condition `|<d rho(p), u>| < 1e-9 max(1, |u|)`.
pub fn tangency_residual(domain: &DomainModel, p: PointC2, u: CVec2) -> Result<f64> {
    Ok(u.pair(domain.d_rho(p)?).norm())
}

/// Levi form `sum_jk H_jk u_j conj(u_k)` of `rho` at a boundary point.
pub fn levi_form(domain: &DomainModel, p: PointC2, u: CVec2) -> Result<f64> {
    check_on_boundary(domain, p)?;
    let p = domain.newton_project(p)?;
    let residual = tangency_residual(domain, p, u)?;
    if residual >= BOUNDARY_TOL * u.norm().max(1.0) {
        return Err(Error::NotComplexTangent { residual });
    }
    Ok(levi_value(&domain.levi_matrix(p)?, u))
}

pub fn levi_value(h: &crate::geometry::LeviMatrix, u: CVec2) -> f64 {
    let x = [u.dw, u.dz];
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..2 {
        for k in 0..2 {
            acc += h[j][k] * x[j] * x[k].conj();
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rng::stream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sphere_frame_at_the_poles() {
        let f = boundary_frame(&DomainModel::UnitBall2, PointC2::real(1.0, 0.0)).unwrap();
        assert!((f.normal - CVec2::real(-1.0, 0.0)).norm() < 1e-15);
        assert!((f.tang_c - CVec2::real(0.0, 1.0)).norm() < 1e-15);
        let f = boundary_frame(&DomainModel::UnitBall2, PointC2::real(0.0, 1.0)).unwrap();
        assert!((f.normal - CVec2::real(0.0, -1.0)).norm() < 1e-15);
        assert!((f.tang_c - CVec2::real(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ellipsoid_frame_from_the_gradient() {
        let m = DomainModel::Ellipsoid { a: 2.0 };
        let f = boundary_frame(&m, PointC2::real(2.0, 0.0)).unwrap();
        assert!((f.normal - CVec2::real(-1.0, 0.0)).norm() < 1e-12);
        assert!(f.orthonormality_residual() < 1e-12);
        assert!(m.rho(f.offset(1e-3)) < 0.0);
    }

    #[test]
    fn frame_errors() {
        let m = DomainModel::UnitBall2;
        assert!(matches!(
            boundary_frame(&m, PointC2::real(0.5, 0.0)),
            Err(Error::PointNotOnBoundary { .. })
        ));
        assert!(matches!(
            boundary_frame(&DomainModel::SiegelModelBall, PointC2::real(0.5, 0.5)),
            Ok(_)
        ));
    }

    #[test]
    fn frames_of_random_boundary_points_are_orthonormal() {
        let mut rng = stream(11, 0);
        for m in [
            DomainModel::UnitBall2,
            DomainModel::Ellipsoid { a: 2.0 },
            DomainModel::Ellipsoid { a: 0.7 },
            DomainModel::SiegelModelBall,
            DomainModel::Polydisc2,
        ] {
            for _ in 0..1000 {
                let p = m.sample_boundary(&mut rng);
                let f = boundary_frame(&m, p).unwrap();
                assert!(f.orthonormality_residual() < 1e-10, "{m:?}");
                assert!(m.rho(f.offset(1e-4)) < 0.0, "{m:?} normal not inward");
            }
        }
    }

    #[test]
    fn sphere_levi_form_values() {
        let m = DomainModel::UnitBall2;
        let p = PointC2::real(1.0, 0.0);
        assert_eq!(levi_form(&m, p, CVec2::real(0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(levi_form(&m, p, CVec2::real(0.0, 2.0)).unwrap(), 4.0);
        assert!(matches!(
            levi_form(&m, p, CVec2::real(1.0, 0.0)),
            Err(Error::NotComplexTangent { .. })
        ));
    }

    /// Central finite-difference complex Hessian, step 1e-5.
    fn fd_levi(m: &DomainModel, p: PointC2, u: CVec2) -> f64 {
        // L(u) = (1/4) (d^2/ds^2 + d^2/dt^2) rho(p + (s + i t) u) at 0.
        let h = 1e-5;
        let f = |s: f64, t: f64| m.rho(p + u.scale(c(s, t)));
        let dss = (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
        let dtt = (f(0.0, h) - 2.0 * f(0.0, 0.0) + f(0.0, -h)) / (h * h);
        0.25 * (dss + dtt)
    }

    #[test]
    fn ellipsoid_levi_form_matches_finite_differences() {
        let m = DomainModel::Ellipsoid { a: 2.0 };
        let p = PointC2::real(2.0, 0.0);
        let u = CVec2::real(0.0, 1.0);
        let analytic = levi_form(&m, p, u).unwrap();
        assert!(analytic > 0.0);
        assert!((analytic - fd_levi(&m, p, u)).abs() < 1e-4);

        let mut rng = stream(5, 1);
        for _ in 0..50 {
            let p = m.sample_boundary(&mut rng);
            let f = boundary_frame(&m, p).unwrap();
            let u = f.tang_c.scale(c(0.3, -1.1));
            let analytic = levi_form(&m, f.p, u).unwrap();
            assert!((analytic - fd_levi(&m, f.p, u)).abs() < 1e-4);
        }
    }
}
