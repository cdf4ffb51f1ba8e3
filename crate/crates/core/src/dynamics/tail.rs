//! Closed-form oscillatory integrals ∫ e^{iωT} (ω - w)^{-k} dω over a real
//! interval with the pole w off the interval, through the exponential
//! integral E₁. They absorb the boundary transients of I(t, ω) deep below
//! the Fermi level, where ω-quadrature of e^{iωT} would need to resolve
//! ~ΩT oscillations.

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^{z} E₁(z) for |z| ≥ 2 off the negative real axis (continued fraction).
fn e1_scaled_cf(z: Complex64) -> Complex64 {
    let mut b = z + 1.0;
    let mut c = Complex64::new(1e300, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..5000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * an + b);
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// E₁(z) by its power series, for small |z|.
fn e1_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..200 {
        term *= -z / k as f64;
        let add = term / k as f64;
        sum -= add;
        if add.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() + sum
}

/// F(ω) = e^{iwT} E₁(-iT(ω - w)), an antiderivative of -e^{iωT}/(ω - w).
fn antiderivative(t: f64, w: Complex64, omega: f64) -> Complex64 {
    let s = Complex64::new(0.0, -t) * (omega - w);
    if s.norm() < 2.0 {
        (Complex64::new(0.0, t) * w).exp() * e1_series(s)
    } else {
        // e^{iwT - s} = e^{iTω}
        Complex64::new(0.0, t * omega).exp() * e1_scaled_cf(s)
    }
}

/// J_1..J_kmax with J_k = ∫_a^b e^{iωT} (ω - w)^{-k} dω, w ∉ [a, b].
fn pole_integrals(kmax: usize, t: f64, w: Complex64, a: f64, b: f64) -> Vec<Complex64> {
    let j1 = if t == 0.0 { (b - w).ln() - (a - w).ln() } else { antiderivative(t, w, a) - antiderivative(t, w, b) };
    let (ea, eb) = (Complex64::new(0.0, t * a).exp(), Complex64::new(0.0, t * b).exp());
    let (ra, rb) = ((a - w).inv(), (b - w).inv());
    let (mut pa, mut pb) = (ea, eb);
    let mut out = Vec::with_capacity(kmax);
    out.push(j1);
    for m in 2..=kmax {
        let m1 = (m - 1) as f64;
        pa *= ra;
        pb *= rb;
        let prev = out[m - 2];
        out.push(-(pb - pa) / m1 + Complex64::new(0.0, t / m1) * prev);
    }
    out
}

/// ∫_Ω^∞ e^{iuT} u⁻² du for T ≥ 0 and Ω > 0.
pub(crate) fn inverse_square_tail(t: f64, omega: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0 / omega, 0.0);
    }
    Complex64::new(0.0, t * omega).exp() / omega
        + Complex64::new(0.0, t) * antiderivative(t, Complex64::new(0.0, 0.0), omega)
}

/// J_k = ∫_a^b e^{iωT} (ω - w)^{-k} dω for k ≥ 1, w ∉ [a, b].
pub(crate) fn pole_integral(k: usize, t: f64, w: Complex64, a: f64, b: f64) -> Complex64 {
    assert!(k >= 1);
    pole_integrals(k, t, w, a, b)[k - 1]
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn distance_to_interval(w: Complex64, a: f64, b: f64) -> f64 {
    let x = w.re.clamp(a, b);
    (w - x).norm()
}

/// ∫_a^b e^{iωT} (ω - p)^{-j} (ω - q)^{-k} dω.
///
/// Well separated poles go through partial fractions. Close poles would make
/// those cancel catastrophically, so (ω - p)^{-j} is expanded about q instead.
pub(crate) fn pair_integral(j: usize, k: usize, t: f64, p: Complex64, q: Complex64, a: f64, b: f64) -> Complex64 {
    let d = p - q;
    let dist = distance_to_interval(q, a, b);
    if d.norm() < 0.25 * dist && t.abs() * d.norm() < 0.5 {
        // (ω - q - d)^{-j} = Σ_m C(j+m-1, m) d^m (ω - q)^{-j-m}
        let ratio = d.norm() / dist;
        let mut terms = 1;
        let mut size = 1.0;
        while terms < 200 {
            size *= ratio * (j + terms) as f64 / terms as f64;
            terms += 1;
            if size < 1e-18 {
                break;
            }
        }
        let js = pole_integrals(j + k + terms, t, q, a, b);
        let mut out = Complex64::new(0.0, 0.0);
        let mut dm = Complex64::new(1.0, 0.0);
        for m in 0..terms {
            out += dm * binom(j + m - 1, m) * js[j + k + m - 1];
            dm *= d;
        }
        return out;
    }
    let jp = pole_integrals(j, t, p, a, b);
    let jq = pole_integrals(k, t, q, a, b);
    let mut out = Complex64::new(0.0, 0.0);
    for m in 1..=j {
        let sign = if (j - m) % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom(j + k - m - 1, k - 1) / d.powi((j + k - m) as i32);
        out += c * jp[m - 1];
    }
    for m in 1..=k {
        let sign = if (k - m) % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom(j + k - m - 1, j - 1) / (-d).powi((j + k - m) as i32);
        out += c * jq[m - 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{integrate_points, QuadratureSpec};

    fn numeric(a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let n = 64;
        let pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let spec = QuadratureSpec::default().with_tol(1e-13, 1e-16);
        let r = integrate_points(
            |x| {
                let v = f(x);
                [v.re, v.im]
            },
            &pts,
            &spec,
        )
        .unwrap();
        Complex64::new(r.value[0], r.value[1])
    }

    #[test]
    fn poles_match_quadrature() {
        let cases = [
            (0.0, Complex64::new(1.0, -0.5)),
            (0.3, Complex64::new(1.0, -0.5)),
            (2.0, Complex64::new(-0.2, 0.0)),
            (-1.5, Complex64::new(0.5, 2.0)),
            (7.0, Complex64::new(3.0, -0.01)),
        ];
        for &(t, w) in &cases {
            for k in 1..=4 {
                let exact = pole_integral(k, t, w, -60.0, -5.0);
                let num = numeric(-60.0, -5.0, |x| Complex64::new(0.0, t * x).exp() * (x - w).powi(-(k as i32)));
                assert!((exact - num).norm() < 1e-11 * (1.0 + num.norm()), "k={k} t={t} w={w}: {exact} vs {num}");
            }
        }
    }

    #[test]
    fn pairs_match_quadrature() {
        let p = Complex64::new(1.0, -0.4);
        let q = Complex64::new(-0.5, 0.7);
        for &t in &[0.0, -2.5, 4.0] {
            for j in 1..=3 {
                for k in 1..=3 {
                    let exact = pair_integral(j, k, t, p, q, -40.0, -3.0);
                    let num = numeric(-40.0, -3.0, |x| {
                        Complex64::new(0.0, t * x).exp() * (x - p).powi(-(j as i32)) * (x - q).powi(-(k as i32))
                    });
                    assert!((exact - num).norm() < 1e-11 * (1.0 + num.norm()), "j={j} k={k} t={t}");
                }
            }
        }
        // nearly coincident poles, as at the start of a protocol
        let q0 = Complex64::new(0.0, 0.0);
        for &(d, t) in &[(1e-7, 4e-3), (1e-3, 0.1), (0.3, 1.0), (2.0, 0.2)] {
            let p1 = Complex64::new(d, -0.5 * d);
            for j in 1..=3 {
                let exact = pair_integral(j, 2, -t, p1, q0, -40.0, -3.0);
                let num = numeric(-40.0, -3.0, |x| {
                    Complex64::new(0.0, -t * x).exp() * (x - p1).powi(-(j as i32)) * (x - q0).powi(-2)
                });
                assert!((exact - num).norm() < 1e-13, "near j={j} d={d}: {exact} vs {num}");
            }
        }
        // coincident poles
        let e = pair_integral(1, 2, 1.0, p, p, -40.0, -3.0);
        let n = numeric(-40.0, -3.0, |x| Complex64::new(0.0, x).exp() * (x - p).powi(-3));
        assert!((e - n).norm() < 1e-11);
    }

    #[test]
    fn inverse_square_tail_matches_truncated_integral() {
        for &(t, om) in &[(0.0, 3.0), (1e-4, 50.0), (0.7, 2.0), (5.0, 100.0)] {
            let far = 1e7;
            let mut finite = pole_integral(2, t, Complex64::new(0.0, 0.0), om, far);
            if t == 0.0 {
                finite += 1.0 / far;
            }
            let e = inverse_square_tail(t, om);
            assert!(
                (e - finite).norm() < 1e-9 / om + 2.0 / (t.max(1e-300) * far * far).min(1e300),
                "t={t}: {e} vs {finite}"
            );
        }
    }
}
