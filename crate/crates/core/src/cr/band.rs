/// Symmetric band matrix, lower storage: `data[i][d] = A[i][i - d]`.
pub(crate) struct BandMatrix {
    n: usize,
    kd: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kd: usize) -> Self {
        Self { n, kd, data: vec![0.0; n * (kd + 1)] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.kd);
        i * (self.kd + 1) + (i - j)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    /// Adds `v` at `(i, j)` with `j <= i`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Solves `A x = b` by banded Cholesky; `None` if `A` is not positive definite.
    pub fn cholesky_solve(mut self, mut b: Vec<f64>) -> Option<Vec<f64>> {
        let (n, kd) = (self.n, self.kd);
        for j in 0..n {
            let lo = j.saturating_sub(kd);
            let mut d = self.get(j, j);
            for k in lo..j {
                d -= self.get(j, k).powi(2);
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            let k = self.idx(j, j);
            self.data[k] = d;
            for i in j + 1..(j + kd + 1).min(n) {
                let mut s = self.get(i, j);
                for k in i.saturating_sub(kd).max(lo)..j {
                    s -= self.get(i, k) * self.get(j, k);
                }
                let k = self.idx(i, j);
                self.data[k] = s / d;
            }
        }
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(kd)..i {
                s -= self.get(i, k) * b[k];
            }
            b[i] = s / self.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..(i + kd + 1).min(n) {
                s -= self.get(k, i) * b[k];
            }
            b[i] = s / self.get(i, i);
        }
        Some(b)
    }
}
