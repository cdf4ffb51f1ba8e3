//! Explicit Dormand–Prince 8(5,3) integrator with dense output.
//!
//! The stepper is generic over the state dimension. Drivers on top of it
//! ([`integrate`]) handle output grids and scalar stop events.
#![allow(clippy::excessive_precision, clippy::too_many_arguments)]

use crate::error::{Error, Result};

/// Tolerances and step limits for [`Dop853`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, h0: None, h_max: f64::INFINITY, max_steps: 2_000_000 }
    }
}

/// Dense-output coefficients of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 8],
}

impl<const N: usize> DenseStep<N> {
    /// Interpolated state at `t` in `[t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let mut y = [0.0; N];
        for i in 0..N {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            y[i] = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s;
        }
        y
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }
}

/// Statistics reported by the drivers.
#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// DOP853 stepper state.
pub struct Dop853<const N: usize, F> {
    f: F,
    opts: OdeOptions,
    pub t: f64,
    pub y: [f64; N],
    k1: [f64; N],
    h: f64,
    dir: f64,
    facold: f64,
    last_rejected: bool,
    pub stats: OdeStats,
}

#[inline]
fn lin<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (a, k) in terms {
        let ah = a * h;
        for i in 0..N {
            out[i] += ah * k[i];
        }
    }
    out
}

#[inline]
fn comb<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = [0.0; N];
    for (a, k) in terms {
        for i in 0..N {
            out[i] += a * k[i];
        }
    }
    out
}

impl<const N: usize, F> Dop853<N, F>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    pub fn new(mut f: F, t0: f64, y0: [f64; N], t_end: f64, opts: OdeOptions) -> Result<Self> {
        if !(opts.rtol > 0.0 && opts.atol >= 0.0) {
            return Err(Error::invalid("ODE tolerances must be positive"));
        }
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite initial state"));
        }
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let mut k1 = [0.0; N];
        f(t0, &y0, &mut k1);
        let mut s = Self {
            f,
            opts,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            dir,
            facold: 1e-4,
            last_rejected: false,
            stats: OdeStats { evaluations: 1, ..Default::default() },
        };
        s.h = match opts.h0 {
            Some(h) => h.abs().min(opts.h_max) * dir,
            None => s.initial_step(t_end),
        };
        Ok(s)
    }

    fn sk(&self, a: f64, b: f64) -> f64 {
        self.opts.atol + self.opts.rtol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self, t_end: f64) -> f64 {
        let span = (t_end - self.t).abs();
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for i in 0..N {
            let sk = self.sk(self.y[i], 0.0);
            dnf += (self.k1[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
        h = h.min(self.opts.h_max).min(span);
        let y1 = lin(&self.y, h * self.dir, &[(1.0, &self.k1)]);
        let mut k2 = [0.0; N];
        (self.f)(self.t + h * self.dir, &y1, &mut k2);
        self.stats.evaluations += 1;
        let mut der2 = 0.0;
        for i in 0..N {
            let sk = self.sk(self.y[i], 0.0);
            der2 += ((k2[i] - self.k1[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(1.0 / 8.0) };
        (100.0 * h).min(h1).min(self.opts.h_max).min(span).max(1e-300) * self.dir
    }

    /// Advances one accepted step, never passing `t_end`. Returns the
    /// dense-output record for the step when `dense` is set.
    pub fn step(&mut self, t_end: f64, dense: bool) -> Result<Option<DenseStep<N>>> {
        loop {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::OdeStepLimit { t: self.t, steps: self.opts.max_steps });
            }
            let remaining = (t_end - self.t) * self.dir;
            if remaining <= 0.0 {
                return Ok(None);
            }
            let mut h = self.h;
            if h.abs() >= remaining {
                h = remaining * self.dir;
            }
            // Guard against floating-point overshoot when very close to the end.
            if (h.abs() - remaining).abs() <= 1e-14 * self.t.abs().max(1.0) {
                h = t_end - self.t;
            }
            if h.abs() <= 1e-14 * self.t.abs().max(1e-300) {
                return Err(Error::OdeStepUnderflow { t: self.t, h });
            }
            let t = self.t;
            let y = self.y;
            let k1 = self.k1;
            let f = &mut self.f;
            let mut k2 = [0.0; N];
            let mut k3 = [0.0; N];
            let mut k4 = [0.0; N];
            let mut k5 = [0.0; N];
            let mut k6 = [0.0; N];
            let mut k7 = [0.0; N];
            let mut k8 = [0.0; N];
            let mut k9 = [0.0; N];
            let mut k10 = [0.0; N];
            f(t + C2 * h, &lin(&y, h, &[(A21, &k1)]), &mut k2);
            f(t + C3 * h, &lin(&y, h, &[(A31, &k1), (A32, &k2)]), &mut k3);
            f(t + C4 * h, &lin(&y, h, &[(A41, &k1), (A43, &k3)]), &mut k4);
            f(t + C5 * h, &lin(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]), &mut k5);
            f(t + C6 * h, &lin(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]), &mut k6);
            f(t + C7 * h, &lin(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]), &mut k7);
            f(t + C8 * h, &lin(&y, h, &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]), &mut k8);
            f(
                t + C9 * h,
                &lin(&y, h, &[(A91, &k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)]),
                &mut k9,
            );
            f(
                t + C10 * h,
                &lin(
                    &y,
                    h,
                    &[(A101, &k1), (A104, &k4), (A105, &k5), (A106, &k6), (A107, &k7), (A108, &k8), (A109, &k9)],
                ),
                &mut k10,
            );
            let mut k11 = [0.0; N];
            f(
                t + C11 * h,
                &lin(
                    &y,
                    h,
                    &[
                        (A111, &k1),
                        (A114, &k4),
                        (A115, &k5),
                        (A116, &k6),
                        (A117, &k7),
                        (A118, &k8),
                        (A119, &k9),
                        (A1110, &k10),
                    ],
                ),
                &mut k11,
            );
            let t_new = t + h;
            let yy1 = lin(
                &y,
                h,
                &[
                    (A121, &k1),
                    (A124, &k4),
                    (A125, &k5),
                    (A126, &k6),
                    (A127, &k7),
                    (A128, &k8),
                    (A129, &k9),
                    (A1210, &k10),
                    (A1211, &k11),
                ],
            );
            let mut k12 = [0.0; N];
            f(t_new, &yy1, &mut k12);
            self.stats.evaluations += 11;
            let kb =
                comb(&[(B1, &k1), (B6, &k6), (B7, &k7), (B8, &k8), (B9, &k9), (B10, &k10), (B11, &k11), (B12, &k12)]);
            let y_new = lin(&y, h, &[(1.0, &kb)]);
            if y_new.iter().any(|v| !v.is_finite()) {
                // Treat as a rejected step with strong reduction.
                self.h = h * 0.1;
                self.stats.rejected += 1;
                self.last_rejected = true;
                continue;
            }

            let mut err = 0.0;
            let mut err2 = 0.0;
            for i in 0..N {
                let sk = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                let e2 = kb[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
                err2 += (e2 / sk).powi(2);
                let e1 = ER1 * k1[i]
                    + ER6 * k6[i]
                    + ER7 * k7[i]
                    + ER8 * k8[i]
                    + ER9 * k9[i]
                    + ER10 * k10[i]
                    + ER11 * k11[i]
                    + ER12 * k12[i];
                err += (e1 / sk).powi(2);
            }
            let mut deno = err + 0.01 * err2;
            if deno <= 0.0 {
                deno = 1.0;
            }
            let err = h.abs() * err * (1.0 / (deno * N as f64)).sqrt();

            let fac11 = err.powf(1.0 / 8.0);
            let fac = (1.0 / 6.0_f64).max((1.0 / 0.333_f64).min(fac11 / 0.9));
            let mut h_new = h / fac;

            if err <= 1.0 {
                self.facold = err.max(1e-4);
                let mut k_new = [0.0; N];
                f(t_new, &y_new, &mut k_new);
                self.stats.evaluations += 1;
                self.stats.accepted += 1;

                let dense_step = if dense {
                    let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
                    let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
                    let mut cont = [[0.0; N]; 8];
                    cont[0] = y;
                    cont[1] = ydiff;
                    cont[2] = bspl;
                    cont[3] = std::array::from_fn(|i| ydiff[i] - h * k_new[i] - bspl[i]);
                    cont[4] = comb(&[
                        (D41, &k1),
                        (D46, &k6),
                        (D47, &k7),
                        (D48, &k8),
                        (D49, &k9),
                        (D410, &k10),
                        (D411, &k11),
                        (D412, &k12),
                    ]);
                    cont[5] = comb(&[
                        (D51, &k1),
                        (D56, &k6),
                        (D57, &k7),
                        (D58, &k8),
                        (D59, &k9),
                        (D510, &k10),
                        (D511, &k11),
                        (D512, &k12),
                    ]);
                    cont[6] = comb(&[
                        (D61, &k1),
                        (D66, &k6),
                        (D67, &k7),
                        (D68, &k8),
                        (D69, &k9),
                        (D610, &k10),
                        (D611, &k11),
                        (D612, &k12),
                    ]);
                    cont[7] = comb(&[
                        (D71, &k1),
                        (D76, &k6),
                        (D77, &k7),
                        (D78, &k8),
                        (D79, &k9),
                        (D710, &k10),
                        (D711, &k11),
                        (D712, &k12),
                    ]);
                    let mut k14 = [0.0; N];
                    let mut k15 = [0.0; N];
                    let mut k16 = [0.0; N];
                    f(
                        t + C14 * h,
                        &lin(
                            &y,
                            h,
                            &[
                                (A141, &k1),
                                (A147, &k7),
                                (A148, &k8),
                                (A149, &k9),
                                (A1410, &k10),
                                (A1411, &k11),
                                (A1412, &k12),
                                (A1413, &k_new),
                            ],
                        ),
                        &mut k14,
                    );
                    f(
                        t + C15 * h,
                        &lin(
                            &y,
                            h,
                            &[
                                (A151, &k1),
                                (A156, &k6),
                                (A157, &k7),
                                (A158, &k8),
                                (A1511, &k11),
                                (A1512, &k12),
                                (A1513, &k_new),
                                (A1514, &k14),
                            ],
                        ),
                        &mut k15,
                    );
                    f(
                        t + C16 * h,
                        &lin(
                            &y,
                            h,
                            &[
                                (A161, &k1),
                                (A166, &k6),
                                (A167, &k7),
                                (A168, &k8),
                                (A169, &k9),
                                (A1613, &k_new),
                                (A1614, &k14),
                                (A1615, &k15),
                            ],
                        ),
                        &mut k16,
                    );
                    self.stats.evaluations += 3;
                    let tail = [
                        (D413, D414, D415, D416),
                        (D513, D514, D515, D516),
                        (D613, D614, D615, D616),
                        (D713, D714, D715, D716),
                    ];
                    for (j, (a, b, c, d)) in tail.iter().enumerate() {
                        for i in 0..N {
                            let v = cont[4 + j][i] + a * k_new[i] + b * k14[i] + c * k15[i] + d * k16[i];
                            cont[4 + j][i] = v * h;
                        }
                    }
                    Some(DenseStep { t0: t, h, cont })
                } else {
                    None
                };

                if self.last_rejected {
                    h_new = if self.dir > 0.0 { h_new.min(h) } else { h_new.max(h) };
                }
                self.last_rejected = false;
                self.t = t_new;
                self.y = y_new;
                self.k1 = k_new;
                self.h = clamp_h(h_new, self.opts.h_max);
                return Ok(dense_step);
            } else {
                h_new = h / (1.0 / 0.333_f64).min(fac11 / 0.9);
                self.last_rejected = true;
                self.stats.rejected += 1;
                self.h = clamp_h(h_new, self.opts.h_max);
            }
        }
    }
}

fn clamp_h(h: f64, h_max: f64) -> f64 {
    if h.abs() > h_max {
        h_max * h.signum()
    } else {
        h
    }
}

/// Result of [`integrate`].
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    /// States at the requested output times (only those reached).
    pub outputs: Vec<[f64; N]>,
    /// Final time reached (`t_end` unless an event fired).
    pub t_final: f64,
    pub y_final: [f64; N],
    /// Whether the stop event fired.
    pub event: bool,
    /// Every accepted step's dense record, when requested.
    pub dense: Vec<DenseStep<N>>,
    pub stats: OdeStats,
}

impl<const N: usize> Trajectory<N> {
    /// Evaluates the stored dense output at `t`.
    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        if self.dense.is_empty() {
            return None;
        }
        let idx = self.dense.partition_point(|s| s.t1() < t);
        let step = self.dense.get(idx).or(self.dense.last())?;
        Some(step.eval(t))
    }
}

/// Integrates from `t0` to `t_end`, sampling at the increasing grid
/// `outputs`. If `event` is given, integration stops at the first root of
/// the scalar function (sign change from positive to non-positive),
/// located on the dense output by bisection.
pub fn integrate<const N: usize, F, E>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    outputs: &[f64],
    opts: OdeOptions,
    keep_dense: bool,
    mut event: Option<E>,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
    E: FnMut(f64, &[f64; N]) -> f64,
{
    let mut solver = Dop853::new(f, t0, y0, t_end, opts)?;
    let mut out = Vec::with_capacity(outputs.len());
    let mut next = 0;
    while next < outputs.len() && outputs[next] <= t0 {
        out.push(y0);
        next += 1;
    }
    let mut dense = Vec::new();
    let need_dense = keep_dense || !outputs.is_empty() || event.is_some();
    let mut g_prev = event.as_mut().map(|e| e(t0, &y0));
    while solver.t < t_end {
        let step = solver.step(t_end, need_dense)?;
        let Some(step) = step else { break };
        let mut t_stop = None;
        if let (Some(e), Some(gp)) = (event.as_mut(), g_prev) {
            let g1 = e(solver.t, &solver.y);
            if gp > 0.0 && g1 <= 0.0 {
                let (mut a, mut b) = (step.t0, step.t1());
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if e(m, &step.eval(m)) > 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                t_stop = Some(b);
            }
            g_prev = Some(g1);
        }
        let t_hi = t_stop.unwrap_or(step.t1());
        while next < outputs.len() && outputs[next] <= t_hi {
            let tq = outputs[next];
            out.push(if tq == step.t1() && t_stop.is_none() { solver.y } else { step.eval(tq) });
            next += 1;
        }
        if keep_dense {
            dense.push(step);
        }
        if let Some(ts) = t_stop {
            let y = step.eval(ts);
            return Ok(Trajectory { outputs: out, t_final: ts, y_final: y, event: true, dense, stats: solver.stats });
        }
    }
    while next < outputs.len() && outputs[next] <= solver.t {
        out.push(solver.y);
        next += 1;
    }
    Ok(Trajectory { outputs: out, t_final: solver.t, y_final: solver.y, event: false, dense, stats: solver.stats })
}

/// Convenience wrapper without a stop event.
pub fn integrate_grid<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: OdeOptions,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    let t_end = outputs.last().copied().unwrap_or(t0).max(t0);
    integrate(f, t0, y0, t_end, outputs, opts, false, None::<fn(f64, &[f64; N]) -> f64>)
}

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;

const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;

const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;

const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;

const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;

const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;

const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;
