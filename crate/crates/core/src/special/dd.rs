//! Polygamma functions in double-double arithmetic, for quantities that are
//! small differences of the closed-form terms.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline]
pub fn dd(x: f64) -> Dd {
    Dd { hi: x, lo: 0.0 }
}

impl Dd {
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * dd(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * dd(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + dd(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, o: Dd) {
        *self = *self - o;
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDd {
    pub re: Dd,
    pub im: Dd,
}

impl ComplexDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }
}

impl Add for ComplexDd {
    type Output = ComplexDd;
    fn add(self, o: ComplexDd) -> ComplexDd {
        ComplexDd::new(self.re + o.re, self.im + o.im)
    }
}

impl Mul for ComplexDd {
    type Output = ComplexDd;
    fn mul(self, o: ComplexDd) -> ComplexDd {
        ComplexDd::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl AddAssign for ComplexDd {
    fn add_assign(&mut self, o: ComplexDd) {
        *self = *self + o;
    }
}

impl SubAssign for ComplexDd {
    fn sub_assign(&mut self, o: ComplexDd) {
        *self = ComplexDd::new(self.re - o.re, self.im - o.im);
    }
}

impl MulAssign for ComplexDd {
    fn mul_assign(&mut self, o: ComplexDd) {
        *self = *self * o;
    }
}

const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

const SHIFT_THRESHOLD: f64 = 30.0;

fn scale(z: ComplexDd, s: Dd) -> ComplexDd {
    ComplexDd::new(z.re * s, z.im * s)
}

fn inv(z: ComplexDd) -> ComplexDd {
    let n = z.re * z.re + z.im * z.im;
    ComplexDd::new(z.re / n, -z.im / n)
}

fn norm2(z: ComplexDd) -> f64 {
    z.re.hi * z.re.hi + z.im.hi * z.im.hi
}

/// [ψ^(1), ψ^(2), ψ^(3)](w) for Re w > 0, accurate to roughly 1e-30 relative.
pub fn polygamma123_dd(w: ComplexDd) -> [ComplexDd; 3] {
    let mut out = [ComplexDd::default(); 3];
    // ψ^(m)(w) = ψ^(m)(w+1) + (-1)^{m+1} m! / w^{m+1}
    let mut u = w;
    while u.re.hi < SHIFT_THRESHOLD {
        let i = inv(u);
        let i2 = i * i;
        let i3 = i2 * i;
        out[0] += i2;
        out[1] -= scale(i3, dd(2.0));
        out[2] += scale(i3 * i, dd(6.0));
        u.re += dd(1.0);
    }
    let i = inv(u);
    let i2 = i * i;
    let fact = [1.0, 1.0, 2.0, 6.0];
    let mut um = i;
    for (idx, o) in out.iter_mut().enumerate() {
        let m = idx + 1;
        // (-1)^{m+1} [ (m-1)!/u^m + m!/(2u^{m+1}) + Σ B_2k (2k+m-1)!/((2k)! u^{2k+m}) ]
        let mut s = scale(um, dd(fact[m - 1])) + scale(um * i, dd(0.5 * fact[m]));
        let mut p = um * i2;
        let mut prev = f64::INFINITY;
        for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
            let n = 2 * (k + 1);
            let ratio: f64 = (n + 1..n + m).map(|j| j as f64).product();
            let term = scale(p, dd(num) * dd(ratio) / dd(den));
            let mag = norm2(term);
            if mag > prev {
                break;
            }
            s += term;
            if mag <= 1e-66 * norm2(s) {
                break;
            }
            prev = mag;
            p *= i2;
        }
        if m % 2 == 1 {
            *o += s;
        } else {
            *o -= s;
        }
        um *= i;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::polygamma_all;
    use num_complex::Complex64;

    #[test]
    fn division_is_double_double() {
        let r = dd(1.0) / dd(3.0) * dd(3.0) - dd(1.0);
        assert!(r.to_f64().abs() < 1e-31);
    }

    #[test]
    fn agrees_with_double_precision() {
        for &(a, b) in &[(0.5, 0.0), (0.7, 3.0), (2.0, -11.0), (40.0, 5.0)] {
            let v = polygamma_all(Complex64::new(a, b)).unwrap();
            let d = polygamma123_dd(ComplexDd::new(dd(a), dd(b)));
            for m in 0..3 {
                let re = d[m].re.to_f64();
                let im = d[m].im.to_f64();
                let e = Complex64::new(re, im) - v[m + 1];
                assert!(e.norm() <= 1e-13 * v[m + 1].norm(), "m={} w=({a},{b})", m + 1);
            }
        }
    }

    #[test]
    fn trigamma_half_beyond_double() {
        // ψ1(1/2) = π²/2
        let d = polygamma123_dd(ComplexDd::new(dd(0.5), dd(0.0)));
        let pi = Dd::PI;
        let err = (d[0].re - pi * pi / dd(2.0)).to_f64();
        assert!(err.abs() < 1e-28, "{err}");
    }
}
