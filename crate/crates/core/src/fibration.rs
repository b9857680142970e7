//! Hopf fibration of the boundary of a circled domain: the equivariant map
//! `h(eta) = eta / |eta|` onto the unit sphere, the projection to the
//! Riemann sphere, and Gauss linking numbers of fiber circles.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{rng::halton, DomainModel, PointC2, BOUNDARY_TOL};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

fn check_disked(domain: &DomainModel, eta: PointC2) -> Result<()> {
    if !domain.is_circled() || matches!(domain, DomainModel::UnitDisk) {
        return Err(Error::UnsupportedDomain(domain.name()));
    }
    if eta.norm() == 0.0 {
        return Err(Error::ZeroPoint);
    }
    let residual = domain.rho(eta).abs();
    if residual >= BOUNDARY_TOL {
        return Err(Error::PointNotOnBoundary { residual });
    }
    Ok(())
}

/// `eta / R(eta)` with `R(eta) = |eta|`, the radius of the disk `{zeta eta}`.
pub fn hopf_map(domain: &DomainModel, eta: PointC2) -> Result<PointC2> {
    check_disked(domain, eta)?;
    Ok(eta.scale_real(1.0 / eta.norm()))
}

/// Circle `{e^{i theta} eta}` in the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberCircle {
    pub base: PointC2,
    /// `R(eta) = |eta|`.
    pub radius: f64,
}

impl FiberCircle {
    pub fn new(domain: &DomainModel, eta: PointC2) -> Result<Self> {
        check_disked(domain, eta)?;
        Ok(Self { base: eta, radius: eta.norm() })
    }

    pub fn point(&self, theta: f64) -> PointC2 {
        self.base.scale(Complex64::cis(theta))
    }

    /// The image great circle of the sphere.
    fn unit_base(&self) -> PointC2 {
        self.base.scale_real(1.0 / self.radius)
    }
}

/// Point `[w : z]` of the projective line, stored as the unit representative
/// whose larger component is real positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    pub w: Complex64,
    pub z: Complex64,
}

impl ProjectivePoint {
    /// Coordinates on the unit sphere of R^3.
    pub fn sphere(&self) -> [f64; 3] {
        let c = self.w * self.z.conj();
        [2.0 * c.re, 2.0 * c.im, self.w.norm_sqr() - self.z.norm_sqr()]
    }

    /// Chordal distance between the sphere images.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let (a, b) = (self.sphere(), other.sphere());
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

pub fn fibration_project(eta: PointC2) -> Result<ProjectivePoint> {
    let n = eta.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroPoint);
    }
    let lead = if eta.w.norm() >= eta.z.norm() { eta.w } else { eta.z };
    let phase = lead.conj() / lead.norm();
    Ok(ProjectivePoint { w: eta.w * phase / n, z: eta.z * phase / n })
}

const POLE_CANDIDATES: usize = 32;
pub const MIN_QUAD_ORDER: usize = 64;

fn r4_dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Unit point of S^3 farthest from both great circles among 32 candidates.
fn pick_pole(x1: PointC2, x2: PointC2) -> (PointC2, f64) {
    let mut best = (PointC2::ORIGIN, -1.0);
    for k in 1..=POLE_CANDIDATES {
        let h = halton::<3>(k as u64);
        // Uniform point of S^3 from three uniforms (Hopf coordinates).
        let a = h[0].sqrt();
        let b = (1.0 - h[0]).sqrt();
        let u = PointC2::new(Complex64::from_polar(a, TAU * h[1]), Complex64::from_polar(b, TAU * h[2]));
        let d = |x: PointC2| (2.0 - 2.0 * u.to_vec().hdot(x.to_vec()).norm()).max(0.0).sqrt();
        let m = d(x1).min(d(x2));
        if m > best.1 {
            best = (u, m);
        }
    }
    best
}

/// Orthonormal basis of the orthogonal complement of `p` in R^4, oriented
/// so that `(p, b1, b2, b3)` is positive.
fn complement_basis(p: [f64; 4]) -> [[f64; 4]; 3] {
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for i in 0..4 {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        let c = r4_dot(v, p);
        for t in 0..4 {
            v[t] -= c * p[t];
        }
        for b in &basis {
            let c = r4_dot(v, *b);
            for t in 0..4 {
                v[t] -= c * b[t];
            }
        }
        let n = r4_dot(v, v).sqrt();
        if n > 1e-6 {
            basis.push(v.map(|x| x / n));
        }
        if basis.len() == 3 {
            break;
        }
    }
    let mut b = [basis[0], basis[1], basis[2]];
    if det4([p, b[0], b[1], b[2]]) < 0.0 {
        b[2] = b[2].map(|x| -x);
    }
    b
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mut a = m;
    let mut det = 1.0;
    for c in 0..4 {
        let piv = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

struct Stereo {
    pole: [f64; 4],
    basis: [[f64; 4]; 3],
}

impl Stereo {
    /// Image and derivative of `theta -> e^{i theta} x` at `theta`.
    fn curve(&self, x: PointC2, theta: f64) -> ([f64; 3], [f64; 3]) {
        let e = Complex64::cis(theta);
        let p = x.scale(e).to_r4();
        let v = x.scale(e * Complex64::i()).to_r4();
        let den = 1.0 - r4_dot(p, self.pole);
        let dden = -r4_dot(v, self.pole);
        let mut pos = [0.0; 3];
        let mut tan = [0.0; 3];
        for i in 0..3 {
            let pc = r4_dot(p, self.basis[i]);
            let vc = r4_dot(v, self.basis[i]);
            pos[i] = pc / den;
            tan[i] = vc / den - pc * dden / (den * den);
        }
        (pos, tan)
    }
}

/// Gauss linking integral of two fiber circles, computed on their images in
/// the unit sphere after stereographic projection to R^3.
///
/// Oriented so that two distinct Hopf fibers link `+1`.
pub fn linking_number(c1: &FiberCircle, c2: &FiberCircle, quad_order: usize) -> Result<f64> {
    if quad_order < MIN_QUAD_ORDER {
        return Err(Error::InvalidParameter(format!("quadrature order {quad_order} below {MIN_QUAD_ORDER}")));
    }
    let (x1, x2) = (c1.unit_base(), c2.unit_base());
    if fibration_project(x1)?.distance(&fibration_project(x2)?) < 1e-9 {
        return Err(Error::FibersCoincide);
    }
    let (pole, clearance) = pick_pole(x1, x2);
    if clearance < 1e-6 {
        return Err(Error::ProjectionPoleOnCircle);
    }
    let st = Stereo { pole: pole.to_r4(), basis: complement_basis(pole.to_r4()) };
    let n = quad_order;
    let h = TAU / n as f64;
    let second: Vec<([f64; 3], [f64; 3])> = (0..n).map(|j| st.curve(x2, h * j as f64)).collect();
    let rows = Exec::default().map_range(n, |i| {
        let (r1, t1) = st.curve(x1, h * i as f64);
        let mut s = 0.0;
        for (r2, t2) in &second {
            let d = [r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]];
            let cross = [t1[1] * t2[2] - t1[2] * t2[1], t1[2] * t2[0] - t1[0] * t2[2], t1[0] * t2[1] - t1[1] * t2[0]];
            let dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            s += (d[0] * cross[0] + d[1] * cross[1] + d[2] * cross[2]) / dist.powi(3);
        }
        s
    });
    let total: f64 = rows.iter().sum();
    Ok(ORIENTATION * total * h * h / (4.0 * PI))
}

/// Sign making the Hopf fibers link positively in the chart above.
const ORIENTATION: f64 = -1.0;
