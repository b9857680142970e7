use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A point of C^2 with coordinates `(w, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointC2 {
    pub w: Complex64,
    pub z: Complex64,
}

/// A tangent vector of C^2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec2 {
    pub dw: Complex64,
    pub dz: Complex64,
}

impl PointC2 {
    pub const ORIGIN: PointC2 = PointC2 {
        w: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub fn new(w: Complex64, z: Complex64) -> Self {
        Self { w, z }
    }

    pub fn real(w: f64, z: f64) -> Self {
        Self::new(Complex64::new(w, 0.0), Complex64::new(z, 0.0))
    }

    pub fn from_r4(x: [f64; 4]) -> Self {
        Self::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    pub fn to_r4(self) -> [f64; 4] {
        [self.w.re, self.w.im, self.z.re, self.z.im]
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.z.is_finite()
    }

    /// Position vector of the point.
    pub fn to_vec(self) -> CVec2 {
        CVec2::new(self.w, self.z)
    }

    /// Euclidean norm of the position vector.
    pub fn norm(self) -> f64 {
        self.to_vec().norm()
    }

    /// Complex scalar multiple `lambda * p`.
    pub fn scale(self, lambda: Complex64) -> Self {
        Self::new(self.w * lambda, self.z * lambda)
    }

    pub fn scale_real(self, t: f64) -> Self {
        Self::new(self.w * t, self.z * t)
    }

    pub fn distance(self, other: PointC2) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: PointC2) -> Self {
        Self::new((self.w + other.w) * 0.5, (self.z + other.z) * 0.5)
    }
}

impl CVec2 {
    pub const ZERO: CVec2 = CVec2 {
        dw: Complex64::new(0.0, 0.0),
        dz: Complex64::new(0.0, 0.0),
    };

    pub fn new(dw: Complex64, dz: Complex64) -> Self {
        Self { dw, dz }
    }

    pub fn real(dw: f64, dz: f64) -> Self {
        Self::new(Complex64::new(dw, 0.0), Complex64::new(dz, 0.0))
    }

    pub fn from_r4(x: [f64; 4]) -> Self {
        Self::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    pub fn to_r4(self) -> [f64; 4] {
        [self.dw.re, self.dw.im, self.dz.re, self.dz.im]
    }

    pub fn norm_sqr(self) -> f64 {
        self.dw.norm_sqr() + self.dz.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_j * conj(other_j)`.
    pub fn hdot(self, other: CVec2) -> Complex64 {
        self.dw * other.dw.conj() + self.dz * other.dz.conj()
    }

    /// Real inner product in R^4, `Re <self, other>`.
    pub fn rdot(self, other: CVec2) -> f64 {
        self.hdot(other).re
    }

    /// Bilinear pairing `sum a_j v_j` with a covector given in coordinates.
    pub fn pair(self, covector: CVec2) -> Complex64 {
        self.dw * covector.dw + self.dz * covector.dz
    }

    pub fn conj(self) -> Self {
        Self::new(self.dw.conj(), self.dz.conj())
    }

    pub fn scale(self, lambda: Complex64) -> Self {
        Self::new(self.dw * lambda, self.dz * lambda)
    }

    /// Unit vector in the same direction; `None` for (numerically) zero vectors.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 1e-300 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn to_point(self) -> PointC2 {
        PointC2::new(self.dw, self.dz)
    }
}

impl Sub for PointC2 {
    type Output = CVec2;
    fn sub(self, rhs: PointC2) -> CVec2 {
        CVec2::new(self.w - rhs.w, self.z - rhs.z)
    }
}

impl Add<CVec2> for PointC2 {
    type Output = PointC2;
    fn add(self, rhs: CVec2) -> PointC2 {
        PointC2::new(self.w + rhs.dw, self.z + rhs.dz)
    }
}

impl Sub<CVec2> for PointC2 {
    type Output = PointC2;
    fn sub(self, rhs: CVec2) -> PointC2 {
        PointC2::new(self.w - rhs.dw, self.z - rhs.dz)
    }
}

impl Add for CVec2 {
    type Output = CVec2;
    fn add(self, rhs: CVec2) -> CVec2 {
        CVec2::new(self.dw + rhs.dw, self.dz + rhs.dz)
    }
}

impl AddAssign for CVec2 {
    fn add_assign(&mut self, rhs: CVec2) {
        self.dw += rhs.dw;
        self.dz += rhs.dz;
    }
}

impl Sub for CVec2 {
    type Output = CVec2;
    fn sub(self, rhs: CVec2) -> CVec2 {
        CVec2::new(self.dw - rhs.dw, self.dz - rhs.dz)
    }
}

impl SubAssign for CVec2 {
    fn sub_assign(&mut self, rhs: CVec2) {
        self.dw -= rhs.dw;
        self.dz -= rhs.dz;
    }
}

impl Neg for CVec2 {
    type Output = CVec2;
    fn neg(self) -> CVec2 {
        CVec2::new(-self.dw, -self.dz)
    }
}

impl Mul<f64> for CVec2 {
    type Output = CVec2;
    fn mul(self, rhs: f64) -> CVec2 {
        CVec2::new(self.dw * rhs, self.dz * rhs)
    }
}

impl Mul<Complex64> for CVec2 {
    type Output = CVec2;
    fn mul(self, rhs: Complex64) -> CVec2 {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_norm_and_products() {
        let v = CVec2::new(Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0));
        assert_eq!(v.norm(), 5.0);
        assert_eq!(v.hdot(v).re, 25.0);
        let iv = v.scale(Complex64::i());
        assert!(v.rdot(iv).abs() < 1e-15);
        assert!(CVec2::ZERO.normalized().is_none());
    }

    #[test]
    fn point_vector_arithmetic() {
        let p = PointC2::real(1.0, 2.0);
        let q = PointC2::real(0.5, -1.0);
        assert_eq!(q + (p - q), p);
        assert_eq!(PointC2::from_r4(p.to_r4()), p);
        assert_eq!(p.midpoint(q), PointC2::real(0.75, 0.5));
    }
}
