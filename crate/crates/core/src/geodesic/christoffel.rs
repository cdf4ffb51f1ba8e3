use crate::error::{Error, Result};
use crate::geometry::{jet_dd, MetricTensor};
use crate::special::dd::{dd, Dd};

/// Christoffel symbols of the second kind: `gamma[i][j][k]` = Γ^i_jk with
/// index 0 = ε and 1 = μ.
pub type Christoffel = [[[f64; 2]; 2]; 2];

/// Condition number above which the metric is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Γ^i_jk = ½ m^{il}(∂_j m_kl + ∂_k m_jl - ∂_l m_jk) from the analytic jet.
pub fn christoffel(eps: f64, mu: f64, beta: f64) -> Result<Christoffel> {
    christoffel_with_limit(eps, mu, beta, MAX_CONDITION)
}

/// [`christoffel`] with a caller-chosen condition-number limit. The jet and the
/// inversion are carried in double-double, so limits well above 1e12 still
/// give symbols accurate to double precision.
pub fn christoffel_with_limit(eps: f64, mu: f64, beta: f64, max_condition: f64) -> Result<Christoffel> {
    let jet = jet_dd(eps, mu, beta)?;
    let [ee, em, mm] = jet.m;
    let det = ee * mm - em * em;
    let tr = (ee + mm).to_f64();
    let d = det.to_f64();
    // λmax ≈ tr when ill-conditioned, λmin = det/λmax
    let big = 0.5 * tr + (0.25 * tr * tr - d).max(0.0).sqrt();
    let cond = if d > 0.0 { big * big / d } else { f64::INFINITY };
    if !(cond <= max_condition) {
        return Err(Error::NearSingularMetric { eps, mu, cond });
    }
    let inv = [[mm / det, -em / det], [-em / det, ee / det]];
    let val = |v: &[Dd; 3], a: usize, b: usize| v[a + b];
    let dm = [&jet.d_eps, &jet.d_mu];
    let mut g = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut s = dd(0.0);
                for l in 0..2 {
                    let first = val(dm[j], k, l) + val(dm[k], j, l) - val(dm[l], j, k);
                    s += inv[i][l] * first;
                }
                g[i][j][k] = 0.5 * s.to_f64();
            }
        }
    }
    Ok(g)
}

/// Assembles Γ from a metric and its partial derivatives `dm[l][a][b] = ∂_l m_ab`.
pub fn from_derivatives(m: &MetricTensor, dm: &[[[f64; 2]; 2]; 2]) -> Christoffel {
    let [i_ee, i_em, i_mm] = m.inverse();
    let inv = [[i_ee, i_em], [i_em, i_mm]];
    let mut first = [[[0.0; 2]; 2]; 2];
    for l in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                first[l][j][k] = 0.5 * (dm[j][k][l] + dm[k][j][l] - dm[l][j][k]);
            }
        }
    }
    let mut g = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                g[i][j][k] = inv[i][0] * first[0][j][k] + inv[i][1] * first[1][j][k];
            }
        }
    }
    g
}

/// High-temperature limit: Γ^ε = -(1/2μ)[[0,1],[1,0]], Γ^μ = (1/2μ)[[1,0],[0,-1]].
pub fn christoffel_high_t(mu: f64) -> Christoffel {
    let h = 0.5 / mu;
    [[[0.0, -h], [-h, 0.0]], [[h, 0.0], [0.0, -h]]]
}
