//! Exact panel propagation of dI/dt = τ[g - (μ + i(ε - ω))I].
//!
//! Over a panel [t0, t1] the homogeneous part is exp(-τ∫z) and the source is
//! τ∫ F(s) e^{c(1-x)} ds with an ω-independent amplitude F, so the ω-dependence
//! sits in closed-form moments and each frequency costs O(panels).

use num_complex::Complex64;

use crate::control::Protocol;

const NODES: [f64; 5] =
    [-0.906_179_845_938_664, -0.538_469_310_105_683_1, 0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];

// 8-point Gauss–Legendre for the ω-independent exponents
const GL8_X: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL8_W: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

fn gl8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..4 {
        s += GL8_W[k] * (f(m - r * GL8_X[k]) + f(m + r * GL8_X[k]));
    }
    s * r
}

/// Monomial coefficients of the Lagrange basis on [`NODES`].
fn lagrange_coefficients() -> [[f64; 5]; 5] {
    let mut out = [[0.0; 5]; 5];
    for (j, row) in out.iter_mut().enumerate() {
        let mut poly = vec![1.0];
        let mut den = 1.0;
        for (i, &xi) in NODES.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![0.0; poly.len() + 1];
            for (k, &p) in poly.iter().enumerate() {
                next[k + 1] += p;
                next[k] -= xi * p;
            }
            poly = next;
            den *= NODES[j] - xi;
        }
        for (k, p) in poly.iter().enumerate() {
            row[k] = p / den;
        }
    }
    out
}

/// n_k(c) = ∫_{-1}^{1} x^k e^{c(1-x)} dx for k = 0..5, given e^{2c}.
#[inline]
fn moments(c: Complex64, e2: Complex64) -> [Complex64; 5] {
    let mut n = [Complex64::new(0.0, 0.0); 5];
    if c.norm_sqr() < 0.25 {
        // e^{c} Σ_j (-c)^j/j! ∫ x^{k+j}
        let mut q = [Complex64::new(0.0, 0.0); 18];
        q[0] = Complex64::new(1.0, 0.0);
        for j in 1..18 {
            q[j] = q[j - 1] * (-c) / j as f64;
        }
        let ec = c.exp();
        for (k, nk) in n.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut j = k % 2;
            while j < 18 {
                acc += q[j] * (2.0 / (k + j + 1) as f64);
                j += 2;
            }
            *nk = ec * acc;
        }
        return n;
    }
    let inv = c.inv();
    n[0] = (e2 - 1.0) * inv;
    let mut sign = 1.0;
    for k in 1..5 {
        sign = -sign;
        n[k] = (sign * e2 - 1.0 + (k as f64) * n[k - 1]) * inv;
    }
    n
}

/// ω-independent panel data for one protocol and time grid.
pub(crate) struct PanelPlan {
    tau: f64,
    h: Vec<f64>,
    eps_mid: Vec<f64>,
    /// τ∫μ and τ∫ε over each panel
    decay: Vec<f64>,
    phase: Vec<f64>,
    /// exp(-τ∫(μ + i(ε - ε_mid))) and exp(-iτε_mid h) per panel
    hom_rest: Vec<Complex64>,
    mid_rot: Vec<Complex64>,
    /// panels share e^{iτωh} within a width class
    width_class: Vec<usize>,
    widths: Vec<f64>,
    /// monomial coefficients of F on the panel
    coef: Vec<[Complex64; 5]>,
    /// panel index after which each requested output is taken
    output_after: Vec<Option<usize>>,
}

impl PanelPlan {
    /// Panels cover the union of `outputs`, the protocol knots and a uniform
    /// grid of spacing at most `h_max`.
    pub fn new(proto: &Protocol, outputs: &[f64], h_max: f64) -> Self {
        let mut pts: Vec<f64> = outputs.to_vec();
        pts.extend(proto.knots.iter().copied());
        pts.push(0.0);
        pts.push(1.0);
        pts.retain(|t| (0.0..=1.0).contains(t));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut grid = vec![pts[0]];
        for w in pts.windows(2) {
            let m = ((w[1] - w[0]) / h_max).ceil().max(1.0) as usize;
            for i in 1..=m {
                grid.push(if i == m { w[1] } else { w[0] + (w[1] - w[0]) * i as f64 / m as f64 });
            }
        }
        let lag = lagrange_coefficients();
        let tau = proto.tau;
        let np = grid.len() - 1;
        let mut h = Vec::with_capacity(np);
        let mut eps_mid = Vec::with_capacity(np);
        let mut decay = Vec::with_capacity(np);
        let mut phase = Vec::with_capacity(np);
        let mut coef = Vec::with_capacity(np);
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let hp = b - a;
            let em = proto.sample(0.5 * (a + b)).eps;
            let mu = |r: f64| proto.sample(r).mu;
            let de = |r: f64| proto.sample(r).eps - em;
            let dm = gl8(mu, a, b);
            let dphi = gl8(de, a, b);
            let mut f = [Complex64::new(0.0, 0.0); 5];
            for (j, &x) in NODES.iter().enumerate() {
                let s = 0.5 * (a + b) + 0.5 * hp * x;
                let g = proto.sample(s).g;
                let m_rest = gl8(mu, s, b);
                let r_rest = gl8(de, s, b);
                f[j] = Complex64::new(-tau * m_rest, -tau * r_rest).exp() * g;
            }
            let mut c = [Complex64::new(0.0, 0.0); 5];
            for (j, fj) in f.iter().enumerate() {
                for k in 0..5 {
                    c[k] += fj * lag[j][k];
                }
            }
            h.push(hp);
            eps_mid.push(em);
            decay.push(tau * dm);
            phase.push(tau * (dphi + em * hp));
            coef.push(c);
        }
        let hom_rest = decay
            .iter()
            .zip(&phase)
            .zip(eps_mid.iter().zip(&h))
            .map(|((d, ph), (em, hp))| Complex64::new(-d, -(ph - tau * em * hp)).exp())
            .collect();
        let mid_rot = eps_mid.iter().zip(&h).map(|(em, hp)| Complex64::new(0.0, -tau * em * hp).exp()).collect();
        let mut widths: Vec<f64> = Vec::new();
        let width_class = h
            .iter()
            .map(|&hp| match widths.iter().position(|&w| (w - hp).abs() <= 1e-13 * w) {
                Some(i) => i,
                None => {
                    widths.push(hp);
                    widths.len() - 1
                }
            })
            .collect();
        let output_after =
            outputs
                .iter()
                .map(|&t| {
                    if t <= grid[0] {
                        None
                    } else {
                        Some(grid.partition_point(|&g| g < t).saturating_sub(1).min(np - 1))
                    }
                })
                .collect();
        Self { tau, h, eps_mid, decay, phase, hom_rest, mid_rot, width_class, widths, coef, output_after }
    }

    /// ln G(t, 0) = -τ∫₀^t (μ + iε) at the requested outputs.
    pub fn log_propagator_at_outputs(&self) -> Vec<Complex64> {
        let mut cum = Vec::with_capacity(self.decay.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, ph) in self.decay.iter().zip(&self.phase) {
            acc -= Complex64::new(*d, *ph);
            cum.push(acc);
        }
        self.output_after.iter().map(|o| o.map(|p| cum[p]).unwrap_or_default()).collect()
    }

    pub fn panels(&self) -> usize {
        self.h.len()
    }

    /// I(t, ω) at the requested outputs.
    pub fn noise_integral(&self, omega: f64) -> Vec<Complex64> {
        let rot: Vec<Complex64> = self.widths.iter().map(|w| Complex64::new(0.0, self.tau * omega * w).exp()).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.output_after.len()];
        let mut next = 0;
        while next < out.len() && self.output_after[next].is_none() {
            next += 1;
        }
        let mut i = Complex64::new(0.0, 0.0);
        for p in 0..self.h.len() {
            let hp = self.h[p];
            let c = Complex64::new(0.0, -self.tau * (self.eps_mid[p] - omega) * 0.5 * hp);
            // e^{2c} = e^{-iτε_mid h} e^{iτωh}
            let e2 = self.mid_rot[p] * rot[self.width_class[p]];
            let n = moments(c, e2);
            let cf = &self.coef[p];
            let src =
                (cf[0] * n[0] + cf[1] * n[1] + cf[2] * n[2] + cf[3] * n[3] + cf[4] * n[4]) * (self.tau * 0.5 * hp);
            i = self.hom_rest[p] * e2 * i + src;
            while next < out.len() && self.output_after[next] == Some(p) {
                out[next] = i;
                next += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_series_at_switch() {
        for &c in &[
            Complex64::new(0.0, 0.499),
            Complex64::new(0.0, 0.501),
            Complex64::new(0.0, -3.0),
            Complex64::new(0.0, 40.0),
        ] {
            let n = moments(c, (2.0 * c).exp());
            // direct Simpson with many points
            let m = 20000;
            for k in 0..5 {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..=m {
                    let x = -1.0 + 2.0 * i as f64 / m as f64;
                    let w = if i == 0 || i == m {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    s += (c * (1.0 - x)).exp() * x.powi(k as i32) * w;
                }
                s *= 2.0 / (3.0 * m as f64);
                assert!((s - n[k]).norm() < 1e-10, "k={k} c={c}");
            }
        }
    }

    #[test]
    fn lagrange_reproduces_nodes() {
        let l = lagrange_coefficients();
        for (j, row) in l.iter().enumerate() {
            for (i, &x) in NODES.iter().enumerate() {
                let v: f64 = row.iter().enumerate().map(|(k, a)| a * x.powi(k as i32)).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
