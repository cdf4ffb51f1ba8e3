//! Globally adaptive Gauss–Kronrod (10/21) quadrature with tail maps for
//! semi-infinite ranges, and the Fermi-weighted frequency integral built on it.

use rayon::prelude::*;

use super::fermi;
use crate::error::{Error, Result};

/// Tolerances for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Lower frequency cutoff `Ω_max` for regulated (log-divergent) integrals.
    pub cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 4000, cutoff: None }
    }
}

impl QuadratureSpec {
    pub fn with_cutoff(mut self, omega_max: f64) -> Self {
        self.cutoff = Some(omega_max);
        self
    }

    pub fn with_tol(mut self, rel: f64, abs: f64) -> Self {
        self.rel_tol = rel;
        self.abs_tol = abs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::invalid("quadrature spec needs rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1"));
        }
        if let Some(c) = self.cutoff {
            if !(c > 0.0) {
                return Err(Error::invalid("cutoff must be positive"));
            }
        }
        Ok(())
    }
}

/// Values that can be integrated: scalars and fixed or variable-length vectors.
pub trait QuadValue: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, a: f64, x: &Self);
    fn max_abs(&self) -> f64;
    /// max_i |a_i - b_i|
    fn max_diff(&self, other: &Self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn max_abs(&self) -> f64 {
        self.abs()
    }
    fn max_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero_like(&self) -> Self {
        [0.0; N]
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn max_diff(&self, other: &Self) -> f64 {
        self.iter().zip(other).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl QuadValue for Vec<f64> {
    fn zero_like(&self) -> Self {
        vec![0.0; self.len()]
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn max_diff(&self, other: &Self) -> f64 {
        self.iter().zip(other).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadResult<V> {
    pub value: V,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub converged: bool,
}

impl<V: QuadValue> QuadResult<V> {
    fn into_checked(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNonConvergence {
                estimate: self.value.max_abs(),
                error: self.abs_error,
                subdivisions: self.subdivisions,
            })
        }
    }
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208392869949,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Change of variables for one segment of the integration domain.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = a + s (1-u)/u on u ∈ (0, 1]
    Upper {
        a: f64,
        s: f64,
    },
    /// x = b - s (1-u)/u on u ∈ (0, 1]
    Lower {
        b: f64,
        s: f64,
    },
}

impl Map {
    #[inline]
    fn apply(&self, u: f64) -> (f64, f64) {
        match *self {
            Map::Identity => (u, 1.0),
            Map::Upper { a, s } => (a + s * (1.0 - u) / u, s / (u * u)),
            Map::Lower { b, s } => (b - s * (1.0 - u) / u, s / (u * u)),
        }
    }
}

#[derive(Clone)]
struct Segment<V> {
    map: Map,
    lo: f64,
    hi: f64,
    value: V,
    err: f64,
}

/// The 21 abscissae of a segment in x-space and their Jacobians.
fn nodes(map: Map, lo: f64, hi: f64) -> [(f64, f64); 21] {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut out = [(0.0, 0.0); 21];
    for j in 0..10 {
        out[2 * j] = map.apply(c - h * XGK[j]);
        out[2 * j + 1] = map.apply(c + h * XGK[j]);
    }
    out[20] = map.apply(c);
    out
}

fn combine<V: QuadValue>(lo: f64, hi: f64, jac: &[(f64, f64); 21], fv: &[V]) -> (V, f64) {
    let h = 0.5 * (hi - lo);
    let mut k = fv[20].zero_like();
    let mut g = fv[20].zero_like();
    k.add_scaled(WGK[10] * jac[20].1, &fv[20]);
    for j in 0..10 {
        let wk = WGK[j];
        k.add_scaled(wk * jac[2 * j].1, &fv[2 * j]);
        k.add_scaled(wk * jac[2 * j + 1].1, &fv[2 * j + 1]);
        if j % 2 == 1 {
            let wg = WG[j / 2];
            g.add_scaled(wg * jac[2 * j].1, &fv[2 * j]);
            g.add_scaled(wg * jac[2 * j + 1].1, &fv[2 * j + 1]);
        }
    }
    let mut kv = k.zero_like();
    kv.add_scaled(h, &k);
    let err = (h * k.max_diff(&g)).abs();
    (kv, err)
}

/// Core adaptive loop. `batch` evaluates the integrand at a list of x values.
fn adapt<V, B>(segments: Vec<(Map, f64, f64)>, batch: B, spec: &QuadratureSpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    B: Fn(&[f64]) -> Vec<V>,
{
    spec.validate()?;
    let eval = |segs: &[(Map, f64, f64)]| -> Vec<Segment<V>> {
        let all: Vec<[(f64, f64); 21]> = segs.iter().map(|&(m, lo, hi)| nodes(m, lo, hi)).collect();
        let xs: Vec<f64> = all.iter().flat_map(|n| n.iter().map(|p| p.0)).collect();
        let fv = batch(&xs);
        segs.iter()
            .zip(all.iter())
            .enumerate()
            .map(|(i, (&(map, lo, hi), jac))| {
                let (value, err) = combine(lo, hi, jac, &fv[21 * i..21 * (i + 1)]);
                Segment { map, lo, hi, value, err }
            })
            .collect()
    };
    let mut pool = eval(&segments);
    let mut evaluations = 21 * pool.len();
    let mut subdivisions = 0;
    loop {
        let mut total = pool[0].value.zero_like();
        let mut err = 0.0;
        for s in &pool {
            total.add_scaled(1.0, &s.value);
            err += s.err;
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.max_abs());
        let all_finite = !err.is_nan();
        if err <= tol || subdivisions >= spec.max_subdivisions || !all_finite {
            let converged = err <= tol && all_finite;
            let res = QuadResult { value: total, abs_error: err, evaluations, subdivisions, converged };
            return res.into_checked();
        }
        // Bisect the worst segment, plus any segment whose error alone exceeds
        // the tolerance by a wide margin, so batches stay reasonably large.
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&a, &b| pool[b].err.total_cmp(&pool[a].err).then(a.cmp(&b)));
        let mut chosen = vec![order[0]];
        for &i in order.iter().skip(1).take(7) {
            if pool[i].err > 0.25 * pool[order[0]].err {
                chosen.push(i);
            }
        }
        let mut halves = Vec::with_capacity(2 * chosen.len());
        let mut stuck = Vec::new();
        for &i in &chosen {
            let s = &pool[i];
            let mid = 0.5 * (s.lo + s.hi);
            if !(mid > s.lo && mid < s.hi) || (s.hi - s.lo) < 1e-15 * (s.lo.abs() + s.hi.abs()) {
                stuck.push(i);
                continue;
            }
            halves.push((s.map, s.lo, mid));
            halves.push((s.map, mid, s.hi));
        }
        if halves.is_empty() {
            let res = QuadResult { value: total, abs_error: err, evaluations, subdivisions, converged: false };
            return res.into_checked();
        }
        let new = eval(&halves);
        evaluations += 21 * new.len();
        subdivisions += new.len() / 2;
        let mut chosen_sorted: Vec<usize> = chosen.into_iter().filter(|i| !stuck.contains(i)).collect();
        chosen_sorted.sort_unstable_by(|a, b| b.cmp(a));
        for i in chosen_sorted {
            pool.swap_remove(i);
        }
        pool.extend(new);
    }
}

fn segments_for(points: &[f64]) -> Result<Vec<(Map, f64, f64)>> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| !p.is_nan()).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    if pts.len() < 2 {
        return Err(Error::invalid("integration range needs two distinct endpoints"));
    }
    let finite: Vec<f64> = pts.iter().copied().filter(|p| p.is_finite()).collect();
    let spread = if finite.len() >= 2 { finite[finite.len() - 1] - finite[0] } else { 0.0 };
    let mut segs = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (a.is_finite(), b.is_finite()) {
            (true, true) => segs.push((Map::Identity, a, b)),
            (true, false) => {
                let s = tail_scale(a, spread);
                segs.push((Map::Upper { a, s }, 0.0, 1.0));
            }
            (false, true) => {
                let s = tail_scale(b, spread);
                segs.push((Map::Lower { b, s }, 0.0, 1.0));
            }
            (false, false) => {
                segs.push((Map::Lower { b: 0.0, s: 1.0 }, 0.0, 1.0));
                segs.push((Map::Upper { a: 0.0, s: 1.0 }, 0.0, 1.0));
            }
        }
    }
    Ok(segs)
}

fn tail_scale(anchor: f64, spread: f64) -> f64 {
    let s = anchor.abs().max(spread);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// ∫ f over `[a, b]`; either bound may be infinite.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0, subdivisions: 0, converged: true });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut r = integrate_points(f, &[lo, hi], spec)?;
    r.value *= sign;
    Ok(r)
}

/// ∫ f over `[points[0], points[last]]`, splitting at every interior point.
pub fn integrate_points<V, F>(f: F, points: &[f64], spec: &QuadratureSpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let segs = segments_for(points)?;
    adapt(segs, |xs: &[f64]| xs.iter().map(|&x| f(x)).collect(), spec)
}

/// Splits the real line for a Fermi-weighted integral and returns the
/// segments together with the weight function.
fn fermi_layout(beta: f64, points: &[f64], spec: &QuadratureSpec) -> Result<Vec<(Map, f64, f64)>> {
    spec.validate()?;
    if !(beta > 0.0) {
        return Err(Error::invalid("beta must be positive"));
    }
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    let width = if beta.is_finite() { 40.0 / beta } else { 0.0 };
    if beta.is_finite() {
        pts.extend([-width, 0.0, width]);
    } else {
        pts.push(0.0);
        pts.retain(|&p| p <= 0.0);
    }
    if let Some(c) = spec.cutoff {
        pts.retain(|&p| p > -c);
        // geometric breakpoints keep a wide regulated step region well resolved
        let inner = pts.iter().fold(f64::INFINITY, |m: f64, &p| m.min(p)).min(0.0);
        let mut x = inner.abs().max(width).max(1e-300) * 4.0;
        if inner.abs().max(width) == 0.0 {
            x = 1.0;
        }
        while x < c {
            pts.push(-x);
            x *= 4.0;
        }
        pts.push(-c);
    } else {
        pts.push(f64::NEG_INFINITY);
    }
    if beta.is_finite() {
        pts.push(f64::INFINITY);
    }
    segments_for(&pts)
}

#[inline]
fn fermi_weight(beta: f64, omega: f64) -> f64 {
    if beta.is_finite() {
        let x = beta * omega;
        if x < -40.0 {
            1.0
        } else {
            fermi(x)
        }
    } else if omega < 0.0 {
        1.0
    } else {
        0.0
    }
}

/// ∫ dω f_β(ω) kernel(ω). The weight is split into the step Θ(-ω), integrated
/// over (-∞, 0] (or (-Ω_max, 0] when `spec.cutoff` is set), plus the correction
/// f_β - Θ(-ω), confined to |βω| ≤ 40. `beta = ∞` is allowed. `points` are
/// kernel features (poles' real parts, widths) used as breakpoints.
pub fn quad_fermi<V, F>(kernel: F, beta: f64, points: &[f64], spec: &QuadratureSpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let segs = fermi_layout(beta, points, spec)?;
    adapt(
        segs,
        |xs: &[f64]| {
            xs.iter()
                .map(|&x| {
                    let w = fermi_weight(beta, x);
                    let mut v = kernel(x);
                    if w != 1.0 {
                        let z = v.zero_like();
                        let mut out = z;
                        out.add_scaled(w, &v);
                        v = out;
                    }
                    v
                })
                .collect()
        },
        spec,
    )
}

/// Like [`quad_fermi`] but evaluates the kernel nodes of each refinement batch
/// in parallel. Results do not depend on the worker count.
pub fn quad_fermi_par<V, F>(kernel: F, beta: f64, points: &[f64], spec: &QuadratureSpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    let segs = fermi_layout(beta, points, spec)?;
    adapt(
        segs,
        |xs: &[f64]| {
            xs.par_iter()
                .map(|&x| {
                    let w = fermi_weight(beta, x);
                    let v = kernel(x);
                    let mut out = v.zero_like();
                    out.add_scaled(w, &v);
                    out
                })
                .collect()
        },
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_tails() {
        let s = QuadratureSpec::default();
        let r = integrate(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, &s).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let r = integrate(|x| 1.0 / (1.0 + x * x), 0.0, f64::INFINITY, &s).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let r = integrate(|x| x.sin(), 1.0, 0.0, &s).unwrap();
        assert!((r.value + (1.0 - 1f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn fermi_moments() {
        // ∫ f(ω) ω dω over (−Ω, ∞) = −Ω²/2 + π²/(6β²) for Ω ≫ 1/β
        let beta = 2.0;
        let om = 100.0;
        let s = QuadratureSpec::default().with_cutoff(om);
        let r: QuadResult<f64> = quad_fermi(|w| w, beta, &[], &s).unwrap();
        let exact = -om * om / 2.0 + std::f64::consts::PI.powi(2) / (6.0 * beta * beta);
        assert!((r.value - exact).abs() < 1e-9 * om * om, "{} vs {}", r.value, exact);
    }
}
