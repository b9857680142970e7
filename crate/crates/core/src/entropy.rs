//! Topological entropy of finite Blaschke products on the unit circle,
//! estimated from greedy `(n, eps)`-spanning sets.

use crate::error::{Error, Result};
use crate::exec::Exec;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Samples used for the winding number in [`BlaschkeProduct::circle_degree`].
pub const DEGREE_SAMPLES: usize = 4096;
pub const SPAN_BUDGET: usize = 10_000_000;
/// Largest zero modulus accepted by [`entropy_spanning`].
pub const MAX_ZERO_MODULUS: f64 = 0.8;
pub const MAX_NMAX: usize = 16;
/// Independent sweeps the circle is cut into.
pub const SWEEP_BLOCKS: usize = 64;

/// `rotation * prod (z - a) / (1 - conj(a) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    rotation: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::MinZeros);
        }
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidParameter(format!("zero {a} is not inside the unit disk")));
        }
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("rotation {rotation} is not unimodular")));
        }
        Ok(Self { zeros, rotation })
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d], Complex64::new(1.0, 0.0))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.rotation, |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
    }

    /// Conjugate `omega f(conj(omega) z)` by the rotation `z -> omega z`.
    pub fn conjugated(&self, omega: Complex64) -> Result<Self> {
        let d = self.zeros.len() as i32;
        Self::new(self.zeros.iter().map(|a| omega * a).collect(), self.rotation * omega.powi(1 - d))
    }

    /// Angular derivative `d arg f(e^{i theta}) / d theta`, which is positive.
    pub fn circle_derivative(&self, theta: f64) -> f64 {
        let z = Complex64::cis(theta);
        self.zeros.iter().map(|a| (1.0 - a.norm_sqr()) / (z - a).norm_sqr()).sum()
    }

    /// Upper bound of the angular derivative over the circle.
    pub fn lipschitz(&self) -> f64 {
        self.zeros.iter().map(|a| (1.0 + a.norm()) / (1.0 - a.norm())).sum()
    }

    /// Winding number of `theta -> f(e^{i theta})`, by phase unwrapping.
    pub fn circle_degree(&self) -> Result<i64> {
        let mut prev = self.eval(Complex64::new(1.0, 0.0));
        let mut total = 0.0;
        for j in 1..=DEGREE_SAMPLES {
            let next = self.eval(Complex64::cis(TAU * j as f64 / DEGREE_SAMPLES as f64));
            let jump = (next * prev.conj()).arg();
            if jump.abs() > 0.5 * std::f64::consts::PI {
                return Err(Error::PhaseJumpTooLarge { jump });
            }
            total += jump;
            prev = next;
        }
        Ok((total / TAU).round() as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub n_values: Vec<usize>,
    pub eps: f64,
    pub span_counts: Vec<usize>,
    /// Nats per iterate.
    pub slope: f64,
    pub degree: i64,
    pub log_degree: f64,
}

impl EntropyEstimate {
    /// `n,count` rows followed by the `slope,log_degree` summary.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count\n");
        for (n, c) in self.n_values.iter().zip(&self.span_counts) {
            out.push_str(&format!("{n},{c}\n"));
        }
        out.push_str("slope,log_degree\n");
        out.push_str(&format!("{:.6},{:.6}\n", self.slope, self.log_degree));
        out
    }
}

fn unit(z: Complex64) -> Complex64 {
    z / z.norm()
}

/// Largest `s` (up to a relative 1e-9) such that every `f^k`, `k < n`, maps
/// the arc `[theta, theta + s]` onto an arc of length at most `eps`.
fn bowen_step(f: &BlaschkeProduct, theta: f64, n: usize, eps: f64) -> f64 {
    let mut orbit = Vec::with_capacity(n);
    let mut z = Complex64::cis(theta);
    let mut slope = 1.0;
    let mut s0 = eps;
    for k in 0..n {
        orbit.push(z);
        if k > 0 {
            s0 = s0.min(eps / slope);
        }
        slope *= f.circle_derivative(z.arg());
        z = unit(f.eval(z));
    }
    // Largest image length relative to eps, scanning k upwards and stopping
    // at the first excess. Each length is below L eps < 2 pi, so reducing the
    // phase difference mod 2 pi recovers the lifted length.
    let ratio = |s: f64| -> f64 {
        let mut worst = s / eps;
        if worst > 1.0 {
            return worst;
        }
        let mut w = Complex64::cis(theta + s);
        for zk in &orbit[1..] {
            w = unit(f.eval(w));
            let len = (w * zk.conj()).arg().rem_euclid(TAU);
            worst = worst.max(len / eps);
            if worst > 1.0 {
                break;
            }
        }
        worst
    };
    let mut best = None;
    let mut s = s0;
    for _ in 0..6 {
        let r = ratio(s);
        if r <= 1.0 {
            best = Some(best.map_or(s, |b: f64| b.max(s)));
            if 1.0 - r < 1e-9 {
                break;
            }
        }
        s /= r;
    }
    if let Some(b) = best {
        return b;
    }
    loop {
        let r = ratio(s);
        if r <= 1.0 {
            return s;
        }
        s *= 0.99 / r;
    }
}

/// Greedy forward sweep of `[start, end)`; each center `c` covers
/// `[c, c + s(c)]` and the next center is `c + s(c)`.
fn sweep(f: &BlaschkeProduct, start: f64, end: f64, n: usize, eps: f64, total: &AtomicUsize, budget: usize) -> Option<usize> {
    let mut c = start;
    let mut count = 0;
    loop {
        count += 1;
        if count % 1024 == 0 && total.fetch_add(1024, Ordering::Relaxed) + 1024 > budget {
            return None;
        }
        c += bowen_step(f, c, n, eps);
        if c >= end {
            total.fetch_add(count % 1024, Ordering::Relaxed);
            return Some(count);
        }
    }
}

/// Sizes of greedy `(n, eps)`-spanning sets for `n = 1..=n_max` under the
/// orbit metric `max_{k<n} |f^k(x) - f^k(y)|` (arc length).
///
/// No degree or zero-modulus restriction is applied. The circle is cut into
/// [`SWEEP_BLOCKS`] arcs swept independently, the first one starting at the
/// point 1.
pub fn spanning_counts(f: &BlaschkeProduct, n_max: usize, eps: f64, budget: usize) -> Result<Vec<usize>> {
    spanning_counts_with(f, n_max, eps, budget, Exec::default())
}

pub fn spanning_counts_with(f: &BlaschkeProduct, n_max: usize, eps: f64, budget: usize, exec: Exec) -> Result<Vec<usize>> {
    if n_max == 0 || !(eps > 0.0) {
        return Err(Error::InvalidParameter("n_max and eps must be positive".into()));
    }
    if f.lipschitz() * eps >= TAU {
        return Err(Error::InvalidParameter(format!(
            "eps {eps} too large for derivative bound {:.3}",
            f.lipschitz()
        )));
    }
    let block = TAU / SWEEP_BLOCKS as f64;
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let total = AtomicUsize::new(0);
        let parts = exec.map_range(SWEEP_BLOCKS, |b| {
            sweep(f, block * b as f64, block * (b + 1) as f64, n, eps, &total, budget)
        });
        let count = parts.into_iter().sum::<Option<usize>>().filter(|&c| c <= budget);
        counts.push(count.ok_or(Error::BudgetExceeded { budget })?);
    }
    Ok(counts)
}

/// Least-squares slope of `log counts` against `n` over `n > n_max / 2`.
pub fn tail_slope(n_values: &[usize], counts: &[usize]) -> f64 {
    let n_max = n_values.last().copied().unwrap_or(0);
    let pts: Vec<(f64, f64)> = n_values
        .iter()
        .zip(counts)
        .filter(|(n, _)| **n > n_max / 2)
        .map(|(n, c)| (*n as f64, (*c as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Entropy estimate of `f` on the circle from spanning-set growth.
pub fn entropy_spanning(f: &BlaschkeProduct, n_max: usize, eps: f64) -> Result<EntropyEstimate> {
    let degree = f.circle_degree()?;
    if degree < 2 {
        return Err(Error::InvalidParameter(format!("circle degree {degree}; at least 2 required")));
    }
    if f.zeros.iter().any(|a| a.norm() > MAX_ZERO_MODULUS) {
        return Err(Error::InvalidParameter(format!("zeros must satisfy |a| <= {MAX_ZERO_MODULUS}")));
    }
    if !(1e-3..=1e-1).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside [1e-3, 1e-1]")));
    }
    if !(4..=MAX_NMAX).contains(&n_max) {
        return Err(Error::InvalidParameter(format!("n_max {n_max} outside [4, {MAX_NMAX}]")));
    }
    let span_counts = spanning_counts(f, n_max, eps, SPAN_BUDGET)?;
    let n_values: Vec<usize> = (1..=n_max).collect();
    let slope = tail_slope(&n_values, &span_counts);
    Ok(EntropyEstimate { n_values, eps, span_counts, slope, degree, log_degree: (degree as f64).ln() })
}
