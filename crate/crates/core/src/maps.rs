//! Holomorphic self-maps of the model domains, used by the dilation and
//! derivative-rate checks.

use crate::geometry::{CVec2, PointC2};
use num_complex::Complex64;

/// `J[i][j] = d F_i / d z_j` in the coordinates `(w, z)`.
pub type Jacobian = [[Complex64; 2]; 2];

/// Default central finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// A holomorphic map defined near the closure of a model domain.
pub trait BoundaryMap: Sync {
    fn apply(&self, p: PointC2) -> PointC2;

    /// Analytic complex Jacobian, if known.
    fn jacobian(&self, _p: PointC2) -> Option<Jacobian> {
        None
    }
}

/// Wraps a closure as a [`BoundaryMap`] with finite-difference derivatives.
pub struct FnMap<F>(pub F);

impl<F: Fn(PointC2) -> PointC2 + Sync> BoundaryMap for FnMap<F> {
    fn apply(&self, p: PointC2) -> PointC2 {
        (self.0)(p)
    }
}

/// Complex Jacobian by central differences along `e_w` and `e_z`.
pub fn fd_jacobian(f: &dyn BoundaryMap, p: PointC2, h: f64) -> Jacobian {
    let col = |e: CVec2| {
        let d = f.apply(p + e * h) - f.apply(p - e * h);
        d * (0.5 / h)
    };
    let cw = col(CVec2::real(1.0, 0.0));
    let cz = col(CVec2::real(0.0, 1.0));
    [[cw.dw, cz.dw], [cw.dz, cz.dz]]
}

pub fn jacobian_of(f: &dyn BoundaryMap, p: PointC2) -> Jacobian {
    f.jacobian(p).unwrap_or_else(|| fd_jacobian(f, p, FD_STEP))
}

pub fn apply_jacobian(j: &Jacobian, u: CVec2) -> CVec2 {
    CVec2::new(j[0][0] * u.dw + j[0][1] * u.dz, j[1][0] * u.dw + j[1][1] * u.dz)
}

/// `F'(p) u`.
pub fn derivative(f: &dyn BoundaryMap, p: PointC2, u: CVec2) -> CVec2 {
    apply_jacobian(&jacobian_of(f, p), u)
}

fn matmul(a: &Jacobian, b: &Jacobian) -> Jacobian {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity;

impl BoundaryMap for Identity {
    fn apply(&self, p: PointC2) -> PointC2 {
        p
    }

    fn jacobian(&self, _p: PointC2) -> Option<Jacobian> {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Some([[l, o], [o, l]])
    }
}

/// Diagonal unitary map `(w, z) -> (e^{i theta_w} w, e^{i theta_z} z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub theta_w: f64,
    pub theta_z: f64,
}

impl BoundaryMap for Rotation {
    fn apply(&self, p: PointC2) -> PointC2 {
        PointC2::new(p.w * Complex64::cis(self.theta_w), p.z * Complex64::cis(self.theta_z))
    }

    fn jacobian(&self, _p: PointC2) -> Option<Jacobian> {
        let o = Complex64::new(0.0, 0.0);
        Some([[Complex64::cis(self.theta_w), o], [o, Complex64::cis(self.theta_z)]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusKind {
    /// The involution exchanging `0` and `a`.
    Involution,
    /// The map sending `0` to `a`, equal to the involution composed with `-id`.
    Translation,
}

/// Automorphism of the unit ball associated with a point `a`, `|a| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallAutomorphism {
    pub a: CVec2,
    pub kind: MobiusKind,
}

impl BallAutomorphism {
    pub fn involution(a: PointC2) -> Self {
        Self { a: a.to_vec(), kind: MobiusKind::Involution }
    }

    pub fn translation(a: PointC2) -> Self {
        Self { a: a.to_vec(), kind: MobiusKind::Translation }
    }

    fn sign(&self) -> f64 {
        match self.kind {
            MobiusKind::Involution => -1.0,
            MobiusKind::Translation => 1.0,
        }
    }

    /// `P_a v + s_a Q_a v` with `s_a = sqrt(1 - |a|^2)`.
    fn linear(&self, v: CVec2) -> CVec2 {
        let a2 = self.a.norm_sqr();
        let s = (1.0 - a2).sqrt();
        if a2 == 0.0 {
            return v;
        }
        let pa = self.a.scale(v.hdot(self.a) / a2);
        pa + (v - pa) * s
    }
}

impl BoundaryMap for BallAutomorphism {
    fn apply(&self, p: PointC2) -> PointC2 {
        let sg = self.sign();
        let v = p.to_vec();
        let num = self.a + self.linear(v) * sg;
        let den = Complex64::new(1.0, 0.0) + v.hdot(self.a) * sg;
        num.scale(den.inv()).to_point()
    }

    fn jacobian(&self, p: PointC2) -> Option<Jacobian> {
        let sg = self.sign();
        let v = p.to_vec();
        let num = self.a + self.linear(v) * sg;
        let den = Complex64::new(1.0, 0.0) + v.hdot(self.a) * sg;
        let mut j = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (col, e) in [CVec2::real(1.0, 0.0), CVec2::real(0.0, 1.0)].into_iter().enumerate() {
            let dden = e.hdot(self.a) * sg;
            let d = (self.linear(e) * sg).scale(den) - num.scale(dden);
            let d = d.scale((den * den).inv());
            j[0][col] = d.dw;
            j[1][col] = d.dz;
        }
        Some(j)
    }
}

/// `outer o inner`.
pub struct Compose<'a> {
    pub outer: &'a dyn BoundaryMap,
    pub inner: &'a dyn BoundaryMap,
}

impl BoundaryMap for Compose<'_> {
    fn apply(&self, p: PointC2) -> PointC2 {
        self.outer.apply(self.inner.apply(p))
    }

    fn jacobian(&self, p: PointC2) -> Option<Jacobian> {
        let ji = self.inner.jacobian(p)?;
        let jo = self.outer.jacobian(self.inner.apply(p))?;
        Some(matmul(&jo, &ji))
    }
}
