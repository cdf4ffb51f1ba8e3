//! Control points and driving protocols λ(t) = (ε(t), μ(t)) on t ∈ [0, 1].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in control space: level energy ε and μ = g²/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub eps: f64,
    pub mu: f64,
}

impl ControlPoint {
    pub fn new(eps: f64, mu: f64) -> Result<Self> {
        if !eps.is_finite() || !mu.is_finite() || mu < 0.0 {
            return Err(Error::invalid(format!("control point needs finite eps and mu >= 0, got ({eps}, {mu})")));
        }
        Ok(Self { eps, mu })
    }

    /// Coupling g = √(2μ).
    pub fn g(&self) -> f64 {
        (2.0 * self.mu).sqrt()
    }

    /// z = μ + iε.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.mu, self.eps)
    }
}

/// Protocol value and normalized-time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSample {
    pub eps: f64,
    pub mu: f64,
    pub g: f64,
    pub deps: f64,
    pub dmu: f64,
    pub dg: f64,
}

/// Radial profile r(t) for zero-temperature geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    Constant(f64),
    /// r0 + (r1 - r0) t
    Linear(f64, f64),
    /// r0 (1 + amp sin²(πt))
    Bump(f64, f64),
}

impl RadialProfile {
    pub fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            RadialProfile::Constant(r) => (r, 0.0),
            RadialProfile::Linear(a, b) => (a + (b - a) * t, b - a),
            RadialProfile::Bump(r0, amp) => {
                let s = (PI * t).sin();
                (r0 * (1.0 + amp * s * s), r0 * amp * PI * (2.0 * PI * t).sin())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadialProfile::Constant(r) => r > 0.0,
            RadialProfile::Linear(a, b) => a > 0.0 && b > 0.0,
            RadialProfile::Bump(r0, amp) => r0 > 0.0 && amp > -1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("radial profile must stay positive"))
        }
    }
}

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialProfile::Constant(r) => write!(f, "constant:{r}"),
            RadialProfile::Linear(a, b) => write!(f, "linear:{a}:{b}"),
            RadialProfile::Bump(a, b) => write!(f, "bump:{a}:{b}"),
        }
    }
}

impl FromStr for RadialProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::Schema(format!("radial profile '{s}' is missing a value")))?
                .parse::<f64>()
                .map_err(|e| Error::Schema(format!("radial profile '{s}': {e}")))
        };
        let r = match parts[0] {
            "constant" => RadialProfile::Constant(num(1)?),
            "linear" => RadialProfile::Linear(num(1)?, num(2)?),
            "bump" => RadialProfile::Bump(num(1)?, num(2)?),
            other => return Err(Error::Schema(format!("unknown radial profile '{other}'"))),
        };
        r.validate().map_err(|e| Error::Schema(e.to_string()))?;
        Ok(r)
    }
}

/// Closed-form protocol families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticPath {
    /// ε = ε*(t - sin(2kπt)/(2kπ)), μ = (ε*/kπ) sin²(kπt)
    HtGeodesic { eps_star: f64, k: u32 },
    /// Constant coupling μ*, ε(t) = 2β⁻¹ ln tan(π/4 + t(θ₁ - π/4)), θ₁ = atan(e^{βε₁/2}).
    WeakOptimal { beta: f64, mu_star: f64, eps_final: f64 },
    /// ε = r cos φ, μ = r sin φ with φ linear from φ₀ to φ₁.
    ZeroT { phi0: f64, phi1: f64, r: RadialProfile },
}

impl AnalyticPath {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticPath::HtGeodesic { .. } => "ht_geodesic",
            AnalyticPath::WeakOptimal { .. } => "weak_optimal",
            AnalyticPath::ZeroT { .. } => "zero_t",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticPath::HtGeodesic { eps_star, k } => {
                if !(eps_star > 0.0 && eps_star.is_finite()) || k == 0 {
                    return Err(Error::invalid("ht_geodesic needs eps_star > 0 and k >= 1"));
                }
            }
            AnalyticPath::WeakOptimal { beta, mu_star, eps_final } => {
                if !(beta > 0.0 && beta.is_finite() && mu_star > 0.0 && eps_final > 0.0 && eps_final.is_finite()) {
                    return Err(Error::invalid("weak_optimal needs beta, mu_star, eps_final > 0 and finite"));
                }
            }
            AnalyticPath::ZeroT { phi0, phi1, r } => {
                if !(phi0.is_finite() && phi1.is_finite()) || !(0.0..=PI).contains(&phi0) || !(0.0..=PI).contains(&phi1)
                {
                    return Err(Error::invalid("zero_t angles must lie in [0, π]"));
                }
                r.validate()?;
            }
        }
        Ok(())
    }

    pub fn sample(&self, t: f64) -> ProtocolSample {
        match *self {
            AnalyticPath::HtGeodesic { eps_star, k } => {
                let kp = k as f64 * PI;
                let s = (kp * t).sin();
                let c = (kp * t).cos();
                let eps = eps_star * (t - (2.0 * kp * t).sin() / (2.0 * kp));
                let mu = eps_star / kp * s * s;
                let dmu = eps_star * (2.0 * kp * t).sin();
                let deps = 2.0 * kp * mu;
                // g = √(2ε*/kπ) |sin kπt|; sign kept so ġ is continuous through zeros
                let a = (2.0 * eps_star / kp).sqrt();
                ProtocolSample { eps, mu, g: a * s.abs(), deps, dmu, dg: a * kp * c * if s < 0.0 { -1.0 } else { 1.0 } }
            }
            AnalyticPath::WeakOptimal { beta, mu_star, eps_final } => {
                let th1 = (0.5 * beta * eps_final).exp().atan();
                let rate = th1 - PI / 4.0;
                let th = PI / 4.0 + t * rate;
                let eps = 2.0 / beta * th.tan().ln();
                let deps = 2.0 / beta * rate / (th.sin() * th.cos());
                let g = (2.0 * mu_star).sqrt();
                ProtocolSample { eps, mu: mu_star, g, deps, dmu: 0.0, dg: 0.0 }
            }
            AnalyticPath::ZeroT { phi0, phi1, r } => {
                let (rr, dr) = r.eval(t);
                let dphi = phi1 - phi0;
                let phi = phi0 + dphi * t;
                let (s, c) = phi.sin_cos();
                let eps = rr * c;
                let mu = (rr * s).max(0.0);
                let deps = dr * c - rr * s * dphi;
                let dmu = dr * s + rr * c * dphi;
                let g = (2.0 * mu).sqrt();
                let dg = if g > 0.0 { dmu / g } else { 0.0 };
                ProtocolSample { eps, mu, g, deps, dmu, dg }
            }
        }
    }
}

fn parse_kv(body: &str) -> Result<Vec<(String, String)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Schema(format!("expected key=value in '{kv}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

impl fmt::Display for AnalyticPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticPath::HtGeodesic { eps_star, k } => write!(f, "ht_geodesic(eps_star={eps_star},k={k})"),
            AnalyticPath::WeakOptimal { beta, mu_star, eps_final } => {
                write!(f, "weak_optimal(beta={beta},mu_star={mu_star},eps_final={eps_final})")
            }
            AnalyticPath::ZeroT { phi0, phi1, r } => write!(f, "zero_t(phi0={phi0},phi1={phi1},r={r})"),
        }
    }
}

impl FromStr for AnalyticPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once('(').ok_or_else(|| {
            Error::Schema(format!("analytic tag '{s}' needs parameters, e.g. ht_geodesic(eps_star=1,k=1)"))
        })?;
        let body = rest.strip_suffix(')').ok_or_else(|| Error::Schema(format!("analytic tag '{s}' is missing ')'")))?;
        let kv = parse_kv(body)?;
        let get = |key: &str| -> Result<&str> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Schema(format!("analytic tag '{s}' lacks '{key}'")))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?.parse::<f64>().map_err(|e| Error::Schema(format!("'{key}' in '{s}': {e}")))
        };
        let path = match name.trim() {
            "ht_geodesic" => AnalyticPath::HtGeodesic {
                eps_star: num("eps_star")?,
                k: get("k")?.parse().map_err(|e| Error::Schema(format!("'k' in '{s}': {e}")))?,
            },
            "weak_optimal" => {
                AnalyticPath::WeakOptimal { beta: num("beta")?, mu_star: num("mu_star")?, eps_final: num("eps_final")? }
            }
            "zero_t" => AnalyticPath::ZeroT { phi0: num("phi0")?, phi1: num("phi1")?, r: get("r")?.parse()? },
            other => return Err(Error::Schema(format!("unknown analytic protocol '{other}'"))),
        };
        path.validate().map_err(|e| Error::Schema(e.to_string()))?;
        Ok(path)
    }
}

/// How a protocol is evaluated between knots.
#[derive(Debug, Clone, PartialEq)]
pub enum Interpolation {
    MonotoneCubic,
    Analytic(AnalyticPath),
}

impl fmt::Display for Interpolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpolation::MonotoneCubic => write!(f, "monotone-cubic"),
            Interpolation::Analytic(a) => write!(f, "analytic:{a}"),
        }
    }
}

impl FromStr for Interpolation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "monotone-cubic" {
            Ok(Interpolation::MonotoneCubic)
        } else if let Some(rest) = s.strip_prefix("analytic:") {
            Ok(Interpolation::Analytic(rest.parse()?))
        } else {
            Err(Error::Schema(format!("interpolation must be 'monotone-cubic' or 'analytic:<name>', got '{s}'")))
        }
    }
}

/// Piecewise-cubic Hermite interpolant with Fritsch–Butland slopes, which
/// never overshoots monotone data.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut d = vec![0.0; n];
        if n == 2 {
            let s = (y[1] - y[0]) / (x[1] - x[0]);
            d = vec![s, s];
        } else if n > 2 {
            let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
            let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
            for i in 1..n - 1 {
                if del[i - 1] * del[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], del[0], del[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Self { x: x.to_vec(), y: y.to_vec(), d }
    }

    /// Value, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        if n == 1 {
            return (self.y[0], 0.0, 0.0);
        }
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i] * h, self.d[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1;
        let dv = (6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1;
        let ddv = (12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * d0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * d1;
        (v, dv / h, ddv / (h * h))
    }
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// A driving protocol on normalized time t ∈ [0, 1] with physical duration τ.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub tau: f64,
    /// Inverse temperature the protocol was designed for (echoed in files).
    pub beta: f64,
    pub knots: Vec<f64>,
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub interpolation: Interpolation,
    splines: Option<[Pchip; 3]>,
}

impl Protocol {
    /// Sampled protocol interpolated by monotone cubics in ε, μ and g = √(2μ).
    pub fn sampled(tau: f64, beta: f64, knots: Vec<f64>, eps: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let mut p = Self { tau, beta, knots, eps, mu, interpolation: Interpolation::MonotoneCubic, splines: None };
        p.validate()?;
        p.build_splines();
        Ok(p)
    }

    /// Analytic protocol with knots sampled on a uniform grid of `n` panels.
    pub fn analytic(path: AnalyticPath, tau: f64, beta: f64, n: usize) -> Result<Self> {
        path.validate()?;
        let n = n.max(1);
        let knots: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let samples: Vec<ProtocolSample> = knots.iter().map(|&t| path.sample(t)).collect();
        let p = Self {
            tau,
            beta,
            eps: samples.iter().map(|s| s.eps).collect(),
            mu: samples.iter().map(|s| s.mu).collect(),
            knots,
            interpolation: Interpolation::Analytic(path),
            splines: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same protocol, different physical duration.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        let mut p = self.clone();
        p.tau = tau;
        p.validate()?;
        Ok(p)
    }

    fn build_splines(&mut self) {
        if matches!(self.interpolation, Interpolation::MonotoneCubic) {
            let g: Vec<f64> = self.mu.iter().map(|&m| (2.0 * m).sqrt()).collect();
            self.splines = Some([
                Pchip::new(&self.knots, &self.eps),
                Pchip::new(&self.knots, &self.mu),
                Pchip::new(&self.knots, &g),
            ]);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Schema(format!("tau must be positive and finite, got {}", self.tau)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::Schema(format!("beta must be positive, got {}", self.beta)));
        }
        let n = self.knots.len();
        if n < 2 || self.eps.len() != n || self.mu.len() != n {
            return Err(Error::Schema("knots, eps and mu must have equal length >= 2".into()));
        }
        if self.knots[0] != 0.0 || self.knots[n - 1] != 1.0 {
            return Err(Error::Schema("knots must start at 0 and end at 1".into()));
        }
        if self.knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Schema("knots must be strictly increasing".into()));
        }
        if self.eps.iter().chain(&self.mu).any(|v| !v.is_finite()) {
            return Err(Error::Schema("eps and mu values must be finite".into()));
        }
        if self.mu.iter().any(|&m| m < 0.0) {
            return Err(Error::Schema("mu values must be >= 0".into()));
        }
        Ok(())
    }

    /// Values and derivatives at normalized time `t` (clamped to [0, 1]).
    pub fn sample(&self, t: f64) -> ProtocolSample {
        let t = t.clamp(0.0, 1.0);
        match (&self.interpolation, &self.splines) {
            (Interpolation::Analytic(a), _) => a.sample(t),
            (_, Some([se, sm, sg])) => {
                let (eps, deps, _) = se.eval(t);
                let (mu, dmu, _) = sm.eval(t);
                let (g, dg, _) = sg.eval(t);
                ProtocolSample { eps, mu: mu.max(0.0), g: g.max(0.0), deps, dmu, dg }
            }
            _ => unreachable!("sampled protocol without splines"),
        }
    }

    pub fn point(&self, t: f64) -> ControlPoint {
        let s = self.sample(t);
        ControlPoint { eps: s.eps, mu: s.mu }
    }

    pub fn start(&self) -> ControlPoint {
        ControlPoint { eps: self.eps[0], mu: self.mu[0] }
    }

    pub fn end(&self) -> ControlPoint {
        let n = self.knots.len() - 1;
        ControlPoint { eps: self.eps[n], mu: self.mu[n] }
    }

    /// A sampled (monotone-cubic) copy on a new grid.
    pub fn resample(&self, knots: Vec<f64>) -> Result<Self> {
        let s: Vec<ProtocolSample> = knots.iter().map(|&t| self.sample(t)).collect();
        Protocol::sampled(
            self.tau,
            self.beta,
            knots,
            s.iter().map(|v| v.eps).collect(),
            s.iter().map(|v| v.mu).collect(),
        )
    }

    /// Γ = 2∫₀¹ μ dt, the mean relaxation rate.
    pub fn gamma(&self) -> f64 {
        let n = 2048;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * self.sample(i as f64 * h).mu;
        }
        2.0 * s * h / 3.0
    }

    pub fn to_file(&self) -> ProtocolFile {
        ProtocolFile {
            tau: self.tau,
            beta: self.beta,
            knots: self.knots.clone(),
            eps: self.eps.clone(),
            mu: self.mu.clone(),
            interpolation: self.interpolation.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("protocol serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ProtocolFile = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Protocol::try_from(f)
    }
}

/// On-disk protocol schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub tau: f64,
    pub beta: f64,
    pub knots: Vec<f64>,
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub interpolation: String,
}

impl TryFrom<ProtocolFile> for Protocol {
    type Error = Error;
    fn try_from(f: ProtocolFile) -> Result<Self> {
        let interpolation: Interpolation = f.interpolation.parse()?;
        let mut p =
            Protocol { tau: f.tau, beta: f.beta, knots: f.knots, eps: f.eps, mu: f.mu, interpolation, splines: None };
        p.validate()?;
        p.build_splines();
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pchip_reproduces_linear_data() {
        let x = [0.0, 0.3, 0.5, 1.0];
        let y = [1.0, 1.6, 2.0, 3.0];
        let p = Pchip::new(&x, &y);
        for t in [0.1, 0.4, 0.77] {
            let (v, d, _) = p.eval(t);
            assert!((v - (1.0 + 2.0 * t)).abs() < 1e-14);
            assert!((d - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tag_round_trip() {
        let tags = [
            AnalyticPath::HtGeodesic { eps_star: 0.1, k: 2 },
            AnalyticPath::WeakOptimal { beta: 1.5, mu_star: 0.005, eps_final: 30.0 },
            AnalyticPath::ZeroT { phi0: 0.0, phi1: 1.2, r: RadialProfile::Bump(2.0, 0.5) },
        ];
        for a in tags {
            let s = Interpolation::Analytic(a).to_string();
            assert_eq!(s.parse::<Interpolation>().unwrap(), Interpolation::Analytic(a));
        }
    }
}
