use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_2, B_4, ..., B_24.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const SHIFT_THRESHOLD: f64 = 10.0;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ψ^(m)(w) for m = 0..=3 in one pass, sharing the recurrence shift.
pub fn polygamma_all(w: Complex64) -> Result<[Complex64; 4]> {
    polygamma_upto::<4>(w)
}

/// ψ^(1)(w) and ψ^(2)(w).
pub fn polygamma_pair(w: Complex64) -> Result<[Complex64; 2]> {
    let all = polygamma_upto::<3>(w)?;
    Ok([all[1], all[2]])
}

/// ψ^(m)(w) for `m` in {0, 1, 2, 3} and `Re w > 0`.
pub fn polygamma(m: usize, w: Complex64) -> Result<Complex64> {
    if m > 3 {
        return Err(Error::invalid(format!("polygamma order {m} not supported (0..=3)")));
    }
    Ok(polygamma_upto::<4>(w)?[m])
}

fn polygamma_upto<const M: usize>(w: Complex64) -> Result<[Complex64; M]> {
    if !(w.re > 0.0) || !w.im.is_finite() || !w.re.is_finite() {
        return Err(Error::invalid(format!("polygamma needs finite w with Re w > 0, got {w}")));
    }
    let mut out = [Complex64::new(0.0, 0.0); M];
    // ψ^(m)(w) = ψ^(m)(w+n) - (-1)^m m! Σ_{j<n} (w+j)^{-(m+1)}
    let mut u = w;
    while u.re < SHIFT_THRESHOLD {
        let inv = u.inv();
        let mut p = inv;
        for (m, o) in out.iter_mut().enumerate() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            *o -= p * (sign * factorial(m));
            p *= inv;
        }
        u += 1.0;
    }
    let inv = u.inv();
    let inv2 = inv * inv;
    for (m, o) in out.iter_mut().enumerate() {
        *o += asymptotic(m, u, inv, inv2);
    }
    Ok(out)
}

fn asymptotic(m: usize, u: Complex64, inv: Complex64, inv2: Complex64) -> Complex64 {
    if m == 0 {
        let mut s = u.ln() - inv * 0.5;
        let mut p = inv2;
        let mut prev = f64::INFINITY;
        for (k, b) in BERNOULLI.iter().enumerate() {
            let n = 2 * (k + 1);
            let term = p * (b / n as f64);
            let mag = term.norm();
            if mag > prev {
                break;
            }
            s -= term;
            if mag <= 1e-17 * s.norm() {
                break;
            }
            prev = mag;
            p *= inv2;
        }
        return s;
    }
    // (-1)^{m+1} [ (m-1)!/u^m + m!/(2u^{m+1}) + Σ B_2k (2k+m-1)!/((2k)! u^{2k+m}) ]
    let mut um = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        um *= inv;
    }
    let mut s = um * factorial(m - 1) + um * inv * (0.5 * factorial(m));
    let mut p = um * inv2;
    let mut prev = f64::INFINITY;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let n = 2 * (k + 1);
        // (n+m-1)!/n! as a running product
        let ratio: f64 = (n + 1..n + m).map(|j| j as f64).product();
        let term = p * (b * ratio);
        let mag = term.norm();
        if mag > prev {
            break;
        }
        s += term;
        if mag <= 1e-17 * s.norm() {
            break;
        }
        prev = mag;
        p *= inv2;
    }
    if m % 2 == 1 {
        s
    } else {
        -s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_values() {
        let w = Complex64::new(0.5, 0.0);
        let z3 = 1.202_056_903_159_594_2;
        let v = polygamma_all(w).unwrap();
        // ψ(1/2) = -γ - 2 ln 2
        let gamma = 0.577_215_664_901_532_9;
        assert!((v[0].re + gamma + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((v[1].re - PI * PI / 2.0).abs() < 1e-13);
        assert!((v[2].re + 14.0 * z3).abs() < 1e-12);
        // ψ3(1/2) = π^4
        assert!((v[3].re - PI.powi(4)).abs() < 1e-11);
    }

    #[test]
    fn order_rejected() {
        assert!(polygamma(4, Complex64::new(1.0, 0.0)).is_err());
        assert!(polygamma(1, Complex64::new(0.0, 1.0)).is_err());
    }
}
