//! Fermi weight, complex polygamma functions and adaptive quadrature.

pub(crate) mod dd;
mod polygamma;
mod quad;

pub use polygamma::{polygamma, polygamma_all, polygamma_pair};
pub use quad::{integrate, integrate_points, quad_fermi, quad_fermi_par, QuadResult, QuadValue, QuadratureSpec};

pub use num_complex::Complex64;

/// `1/(1+e^x)` without overflow for large `|x|`.
#[inline]
pub fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `f(x)(1 - f(x))`, evaluated symmetrically so it stays accurate in both tails.
#[inline]
pub fn fermi_variance(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}
