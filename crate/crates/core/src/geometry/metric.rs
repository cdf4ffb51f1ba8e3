//! The thermodynamic metric and its analytic derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::dd::{dd, polygamma123_dd, ComplexDd, Dd};
use crate::special::{quad_fermi, QuadratureSpec};

/// Symmetric 2×2 metric in control coordinates (ε, μ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub m_ee: f64,
    pub m_em: f64,
    pub m_mm: f64,
}

impl MetricTensor {
    pub fn new(m_ee: f64, m_em: f64, m_mm: f64) -> Self {
        Self { m_ee, m_em, m_mm }
    }

    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.m_ee, self.m_em], [self.m_em, self.m_mm]]
    }

    pub fn trace(&self) -> f64 {
        self.m_ee + self.m_mm
    }

    pub fn det(&self) -> f64 {
        self.m_ee * self.m_mm - self.m_em * self.m_em
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let h = 0.5 * (self.m_ee - self.m_mm);
        let r = h.hypot(self.m_em);
        let c = 0.5 * (self.m_ee + self.m_mm);
        let big = c + r;
        // small eigenvalue through det/big avoids cancellation
        let small = if big != 0.0 { self.det() / big } else { c - r };
        [small, big]
    }

    /// λmax/λmin, infinite if singular.
    pub fn condition_number(&self) -> f64 {
        let [lo, hi] = self.eigenvalues();
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// λ̇ᵀ m λ̇ for velocity (ε̇, μ̇).
    pub fn quadratic_form(&self, de: f64, dm: f64) -> f64 {
        self.m_ee * de * de + 2.0 * self.m_em * de * dm + self.m_mm * dm * dm
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.m_ee.powi(2) + 2.0 * self.m_em.powi(2) + self.m_mm.powi(2)).sqrt()
    }

    /// Frobenius-norm relative distance to `other`.
    pub fn rel_diff(&self, other: &MetricTensor) -> f64 {
        let d = MetricTensor::new(self.m_ee - other.m_ee, self.m_em - other.m_em, self.m_mm - other.m_mm);
        d.norm() / other.norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.m_ee * s, self.m_em * s, self.m_mm * s)
    }

    /// Inverse matrix entries (i_ee, i_em, i_mm).
    pub fn inverse(&self) -> [f64; 3] {
        let d = self.det();
        [self.m_mm / d, -self.m_em / d, self.m_ee / d]
    }
}

/// Metric components together with their first derivatives in ε and μ.
#[derive(Debug, Clone, Copy)]
pub struct MetricJet {
    pub m: MetricTensor,
    /// ∂_ε of the components
    pub d_eps: MetricTensor,
    /// ∂_μ of the components
    pub d_mu: MetricTensor,
}

/// Which computation produced a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricMethod {
    Polygamma,
    Quadrature,
    HighT,
    ZeroT,
}

impl MetricMethod {
    pub fn name(&self) -> &'static str {
        match self {
            MetricMethod::Polygamma => "polygamma",
            MetricMethod::Quadrature => "quadrature",
            MetricMethod::HighT => "high_t",
            MetricMethod::ZeroT => "zero_t",
        }
    }
}

impl std::str::FromStr for MetricMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "polygamma" => Ok(MetricMethod::Polygamma),
            "quadrature" => Ok(MetricMethod::Quadrature),
            "high-t" => Ok(MetricMethod::HighT),
            "zero-t" => Ok(MetricMethod::ZeroT),
            other => Err(Error::invalid(format!("unknown metric method '{other}'"))),
        }
    }
}

fn check_point(eps: f64, mu: f64, beta: f64) -> Result<()> {
    if !(beta > 0.0) || !eps.is_finite() || !mu.is_finite() {
        return Err(Error::invalid(format!("need finite (eps, mu) and beta > 0, got ({eps}, {mu}, {beta})")));
    }
    if !(mu > 0.0) {
        return Err(Error::Singular(format!("metric is singular at mu = {mu} (needs mu > 0)")));
    }
    Ok(())
}

/// Metric jet in double-double precision (components ordered ee, em, mm).
///
/// The entries are small differences of O(1/|λ|²) terms once β|λ| is large,
/// and the determinant cancels further, so the extra precision is needed for
/// the Christoffel symbols far from the origin.
#[derive(Debug, Clone, Copy)]
pub(crate) struct JetDd {
    pub m: [Dd; 3],
    pub d_eps: [Dd; 3],
    pub d_mu: [Dd; 3],
}

impl JetDd {
    pub fn to_f64(&self) -> MetricJet {
        let t = |v: &[Dd; 3]| MetricTensor::new(v[0].to_f64(), v[1].to_f64(), v[2].to_f64());
        MetricJet { m: t(&self.m), d_eps: t(&self.d_eps), d_mu: t(&self.d_mu) }
    }
}

pub(crate) fn jet_dd(eps: f64, mu: f64, beta: f64) -> Result<JetDd> {
    check_point(eps, mu, beta)?;
    if !beta.is_finite() {
        return Err(Error::invalid("the closed form needs finite beta"));
    }
    let pi = Dd::PI;
    let two_pi = pi * dd(2.0);
    let bt = dd(beta);
    let c = bt / two_pi;
    let w = ComplexDd::new(dd(0.5) + c * dd(mu), c * dd(eps));
    let [p1, p2, p3] = polygamma123_dd(w);
    let a = bt / (dd(4.0) * pi * pi * dd(mu));
    let b = bt * bt / (dd(8.0) * pi * pi * pi);
    let ar = a * p1.re;
    let br = b * p2.re;
    let m = [ar - br, -(b * p2.im), ar + br];
    let ar_mu = ar / dd(mu);
    let acr = a * c * p2.re;
    let aci = a * c * p2.im;
    let bcr = b * c * p3.re;
    let bci = b * c * p3.im;
    let d_mu = [acr - ar_mu - bcr, -bci, acr - ar_mu + bcr];
    let d_eps = [bci - aci, -bcr, -aci - bci];
    Ok(JetDd { m, d_eps, d_mu })
}

/// Closed form through ψ^(1) and ψ^(2) at w = 1/2 + β(μ + iε)/(2π).
pub fn metric_polygamma(eps: f64, mu: f64, beta: f64) -> Result<MetricTensor> {
    check_point(eps, mu, beta)?;
    if !beta.is_finite() {
        return metric_zero_t(eps, mu);
    }
    Ok(jet_dd(eps, mu, beta)?.to_f64().m)
}

/// Metric and its first derivatives, differentiating the closed form.
pub fn metric_jet(eps: f64, mu: f64, beta: f64) -> Result<MetricJet> {
    Ok(jet_dd(eps, mu, beta)?.to_f64())
}

/// Frequency-resolved metric kernel m_ω(x, μ) with x = ε - ω (before the 1/π).
#[inline]
pub fn metric_kernel(x: f64, mu: f64) -> [f64; 3] {
    let d = mu * mu + x * x;
    let d3 = d * d * d;
    [4.0 * x * mu * mu / d3, mu * (mu * mu - 3.0 * x * x) / d3, 2.0 * x * (x * x - mu * mu) / d3]
}

/// (1/π) ∫ dω f_β(ω) m_ω(ε - ω, μ), by adaptive quadrature.
pub fn metric_quadrature(eps: f64, mu: f64, beta: f64) -> Result<MetricTensor> {
    metric_quadrature_with(eps, mu, beta, &QuadratureSpec::default().with_tol(1e-11, 0.0))
}

pub fn metric_quadrature_with(eps: f64, mu: f64, beta: f64, spec: &QuadratureSpec) -> Result<MetricTensor> {
    check_point(eps, mu, beta)?;
    let mut pts = vec![eps];
    for k in [0.25, 1.0, 4.0] {
        pts.push(eps - k * mu);
        pts.push(eps + k * mu);
    }
    let r = quad_fermi(|w| metric_kernel(eps - w, mu), beta, &pts, spec)?;
    let [a, b, c] = r.value;
    Ok(MetricTensor::new(a / PI, b / PI, c / PI))
}

/// m_HT = β/(8μ) 𝟙.
pub fn metric_high_t(mu: f64, beta: f64) -> Result<MetricTensor> {
    check_point(0.0, mu, beta)?;
    let v = beta / (8.0 * mu);
    Ok(MetricTensor::new(v, 0.0, v))
}

/// Zero-temperature limit (1/π)(μ²+ε²)^{-2} [[μ², -εμ], [-εμ, ε²]].
pub fn metric_zero_t(eps: f64, mu: f64) -> Result<MetricTensor> {
    if !eps.is_finite() || !mu.is_finite() {
        return Err(Error::invalid("non-finite control point"));
    }
    let r2 = eps * eps + mu * mu;
    if r2 == 0.0 {
        return Err(Error::Singular("zero-temperature metric undefined at the origin".into()));
    }
    let s = 1.0 / (PI * r2 * r2);
    Ok(MetricTensor::new(s * mu * mu, -s * eps * mu, s * eps * eps))
}

/// Dispatches on `method`.
pub fn metric(eps: f64, mu: f64, beta: f64, method: MetricMethod) -> Result<MetricTensor> {
    match method {
        MetricMethod::Polygamma => metric_polygamma(eps, mu, beta),
        MetricMethod::Quadrature => metric_quadrature(eps, mu, beta),
        MetricMethod::HighT => metric_high_t(mu, beta),
        MetricMethod::ZeroT => metric_zero_t(eps, mu),
    }
}
