//! Horizontal path optimizer on the circled quadric models
//! `rho = a_w |w|^2 + a_z |z|^2 - 1`.
//!
//! Nodes `P_0 .. P_N` with fixed ends. The segment `P_k P_{k+1}` is
//! complex tangential iff `Im(P_k^* A P_{k+1}) = 0`, exactly, because `rho`
//! is a Hermitian quadratic form. The energy `N sum |P_{k+1} - P_k|^2` is
//! minimized under these constraints by an augmented Lagrangian whose
//! penalty grows by 1.5 per round. Each round runs damped Gauss-Newton
//! steps in the tangent coordinates of the free nodes; after every step the
//! nodes are projected radially back onto the hypersurface.

use super::band::BandMatrix;
use crate::error::{Error, Result};
use crate::geometry::{boundary_frame, CVec2, DomainModel, PointC2};
use num_complex::Complex64;
use std::f64::consts::TAU;

const INNER_STEPS: usize = 40;
const PENALTY_START: f64 = 1.0;
const PENALTY_GROWTH: f64 = 1.5;

/// Weighted Hermitian product `P^* A Q`.
pub(crate) fn hprod(a: [f64; 2], p: PointC2, q: PointC2) -> Complex64 {
    p.w.conj() * q.w * a[0] + p.z.conj() * q.z * a[1]
}

fn hprod_v(a: [f64; 2], p: PointC2, v: CVec2) -> Complex64 {
    p.w.conj() * v.dw * a[0] + p.z.conj() * v.dz * a[1]
}

pub(crate) fn radial_project(a: [f64; 2], p: PointC2) -> PointC2 {
    let q = hprod(a, p, p).re;
    p.scale_real(1.0 / q.sqrt())
}

struct Problem<'a> {
    domain: &'a DomainModel,
    a: [f64; 2],
    n: usize,
}

impl Problem<'_> {
    fn constraints(&self, nodes: &[PointC2]) -> Vec<f64> {
        let n = self.n as f64;
        nodes.windows(2).map(|s| n * hprod(self.a, s[0], s[1]).im).collect()
    }

    fn energy(&self, nodes: &[PointC2]) -> f64 {
        self.n as f64 * nodes.windows(2).map(|s| (s[1] - s[0]).norm_sqr()).sum::<f64>()
    }

    fn merit(&self, nodes: &[PointC2], mu: f64, lambda: &[f64]) -> f64 {
        let c = self.constraints(nodes);
        let pen: f64 = c.iter().zip(lambda).map(|(c, l)| (c + l / mu).powi(2)).sum();
        0.5 * self.energy(nodes) + 0.5 * mu * pen
    }

    /// Tangent basis `(e, i e, i N)` of each free node.
    fn bases(&self, nodes: &[PointC2]) -> Result<Vec<[CVec2; 3]>> {
        nodes[1..self.n]
            .iter()
            .map(|&p| {
                let f = boundary_frame(self.domain, p)?;
                Ok([f.tang_c, f.tang_c.scale(Complex64::i()), f.tang_r])
            })
            .collect()
    }

    /// One damped Gauss-Newton solve; returns the trial nodes.
    fn gauss_newton(
        &self,
        nodes: &[PointC2],
        bases: &[[CVec2; 3]],
        mu: f64,
        lambda: &[f64],
        damping: f64,
    ) -> Result<Vec<PointC2>> {
        let nf = self.n - 1;
        let mut h = BandMatrix::zeros(3 * nf, 5);
        let mut g = vec![0.0; 3 * nf];
        let nn = self.n as f64;
        let sq_n = nn.sqrt();
        let sq_mu = mu.sqrt();
        let free = |i: usize| (i >= 1 && i < self.n).then(|| i - 1);

        for k in 0..self.n {
            let (p, q) = (nodes[k], nodes[k + 1]);
            let mut cols: Vec<(usize, [f64; 4], f64)> = Vec::with_capacity(6);
            // Columns of node k (sign -1) and node k + 1 (sign +1).
            for (node, sign) in [(k, -1.0), (k + 1, 1.0)] {
                if let Some(f) = free(node) {
                    for j in 0..3 {
                        let b = bases[f][j];
                        let dc = if sign > 0.0 {
                            nn * hprod_v(self.a, p, b).im
                        } else {
                            -nn * hprod_v(self.a, q, b).im
                        };
                        cols.push((3 * f + j, (b * (sign * sq_n)).to_r4(), dc * sq_mu));
                    }
                }
            }
            let r_e = ((q - p) * sq_n).to_r4();
            let c = nn * hprod(self.a, p, q).im;
            let r_c = sq_mu * (c + lambda[k] / mu);
            for &(ci, ji, di) in &cols {
                let mut gi = di * r_c;
                for t in 0..4 {
                    gi += ji[t] * r_e[t];
                }
                g[ci] += gi;
                for &(cj, jj, dj) in &cols {
                    if cj <= ci {
                        let mut v = di * dj;
                        for t in 0..4 {
                            v += ji[t] * jj[t];
                        }
                        h.add(ci, cj, v);
                    }
                }
            }
        }
        for i in 0..3 * nf {
            let d = h.get(i, i);
            h.add(i, i, damping * d + 1e-14);
        }
        for x in g.iter_mut() {
            *x = -*x;
        }
        let step = h.cholesky_solve(g).ok_or_else(|| Error::NoConvergence("singular normal equations".into()))?;
        let mut out = nodes.to_vec();
        for f in 0..nf {
            let b = &bases[f];
            let d = b[0] * step[3 * f] + b[1] * step[3 * f + 1] + b[2] * step[3 * f + 2];
            out[f + 1] = radial_project(self.a, out[f + 1] + d);
        }
        Ok(out)
    }
}

/// Path statistics: length, horizontality residual.
pub(crate) fn path_stats(domain: &DomainModel, nodes: &[PointC2]) -> Result<(f64, f64)> {
    let mut len = 0.0;
    let mut res: f64 = 0.0;
    for s in nodes.windows(2) {
        let d = s[1] - s[0];
        let l = d.norm();
        len += l;
        if l > 0.0 {
            let g = domain.d_rho(s[0].midpoint(s[1]))?;
            res = res.max(d.pair(g).norm() / l);
        }
    }
    Ok((len, res))
}

/// Optimizes `init` (endpoints fixed) for `rounds` penalty rounds.
pub(crate) fn optimize(domain: &DomainModel, init: Vec<PointC2>, rounds: usize) -> Result<Vec<PointC2>> {
    let a = domain.hermitian_weights().ok_or(Error::UnsupportedDomain(domain.name()))?;
    let n = init.len() - 1;
    let prob = Problem { domain, a, n };
    let mut nodes = init;
    let mut lambda = vec![0.0; n];
    let mut mu = PENALTY_START;
    for _ in 0..rounds {
        let mut damping = 1e-3;
        let mut merit = prob.merit(&nodes, mu, &lambda);
        for _ in 0..INNER_STEPS {
            let bases = prob.bases(&nodes)?;
            let mut accepted = false;
            for _ in 0..12 {
                let trial = prob.gauss_newton(&nodes, &bases, mu, &lambda, damping)?;
                let m = prob.merit(&trial, mu, &lambda);
                if m <= merit {
                    let gain = merit - m;
                    nodes = trial;
                    merit = m;
                    damping = (damping / 3.0).max(1e-9);
                    accepted = gain > 1e-13 * merit.max(1e-300);
                    break;
                }
                damping *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        let c = prob.constraints(&nodes);
        for (l, c) in lambda.iter_mut().zip(&c) {
            *l += mu * c;
        }
        mu *= PENALTY_GROWTH;
    }
    Ok(nodes)
}

/// Chord from `x` to `y` projected onto the hypersurface. A chord through
/// the origin is bent along the complex tangent of `x`.
pub(crate) fn chord(domain: &DomainModel, x: PointC2, y: PointC2, n: usize) -> Result<Vec<PointC2>> {
    let a = domain.hermitian_weights().ok_or(Error::UnsupportedDomain(domain.name()))?;
    let mid = x.midpoint(y);
    let bend = if mid.norm() < 1e-3 {
        boundary_frame(domain, x)?.tang_c * (x.distance(y) * 0.5)
    } else {
        CVec2::ZERO
    };
    Ok((0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            if k == 0 {
                x
            } else if k == n {
                y
            } else {
                let p = x + (y - x) * s + bend * (std::f64::consts::PI * s).sin();
                radial_project(a, p)
            }
        })
        .collect())
}

/// `chord` with a loop `l (1 - e^{sign 2 pi i s})` along the complex
/// tangent of each node, sized to cancel the chord's holonomy.
pub(crate) fn looped(domain: &DomainModel, base: &[PointC2], sign: f64) -> Result<Option<Vec<PointC2>>> {
    let a = domain.hermitian_weights().ok_or(Error::UnsupportedDomain(domain.name()))?;
    let holonomy: f64 = base.windows(2).map(|s| hprod(a, s[0], s[1]).im).sum();
    if holonomy.abs() < 1e-14 {
        return Ok(None);
    }
    let size = (holonomy.abs() / TAU).sqrt();
    let n = base.len() - 1;
    let mut out = base.to_vec();
    for k in 1..n {
        let p = base[k];
        let e = CVec2::new(p.z.conj() * a[1], -p.w.conj() * a[0]);
        let Some(e) = e.normalized() else { return Ok(None) };
        let s = k as f64 / n as f64;
        let zeta = (Complex64::new(1.0, 0.0) - Complex64::cis(sign * TAU * s)) * size;
        out[k] = radial_project(a, p + e.scale(zeta));
    }
    Ok(Some(out))
}
