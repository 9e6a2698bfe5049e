//! Adaptive Gauss–Kronrod quadrature for complex integrands, infinite
//! ranges by tangent substitution, oscillatory tails by half-period
//! partitioning with Wynn ε acceleration, and tensor Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Tolerances and budgets for one (possibly nested) quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of interval bisections per 1-d integral.
    pub max_depth: usize,
    /// Scale s of the substitution u = s·tan θ on half-lines.
    pub tan_scale: f64,
    /// Maximum number of half-period pieces on an oscillatory tail.
    pub max_pieces: usize,
    /// Points per axis of tensor Gauss–Legendre rules (4-d integrals).
    pub tensor_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_depth: 2000,
            tan_scale: 1.0,
            max_pieces: 2000,
            tensor_points: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Invalid("quadrature tolerances must be positive".into()));
        }
        if self.max_depth == 0 || !(self.tan_scale > 0.0) {
            return Err(Error::Invalid("quadrature budget and scale must be positive".into()));
        }
        Ok(())
    }

    /// The same settings with tolerances tightened by `factor`, for inner
    /// integrals of a nested scheme.
    pub fn tighter(&self, factor: f64) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Seg {
    a: f64,
    b: f64,
    val: C64,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// ∫_a^b f with global adaptive bisection.
pub fn integrate(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, val: v, err: e });
    let (mut total, mut err) = (v, e);
    let mut evals = 15;
    let mut splits = 0;
    while err > spec.abs_tol.max(spec.rel_tol * total.norm()) {
        if splits >= spec.max_depth {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] after {splits} bisections (error {err:.3e})"
            )));
        }
        let s = heap.pop().expect("heap is nonempty");
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        evals += 30;
        splits += 1;
        total += v1 + v2 - s.val;
        err += e1 + e2 - s.err;
        heap.push(Seg { a: s.a, b: m, val: v1, err: e1 });
        heap.push(Seg { a: m, b: s.b, val: v2, err: e2 });
        if splits % 64 == 0 {
            // refresh the running sums against drift
            total = heap.iter().map(|s| s.val).sum();
            err = heap.iter().map(|s| s.err).sum();
        }
    }
    Ok(QuadResult { value: total, error: err, evals })
}

/// ∫_0^∞ f via u = s·tan θ.
pub fn half_line(mut f: impl FnMut(f64) -> C64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let s = spec.tan_scale;
    integrate(
        |th| {
            if th >= PI / 2.0 {
                return C64::new(0.0, 0.0);
            }
            let c = th.cos();
            f(s * th.tan()) * (s / (c * c))
        },
        0.0,
        PI / 2.0,
        spec,
    )
}

/// ∫_ℝ f as two half-lines.
pub fn real_line(mut f: impl FnMut(f64) -> C64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let r1 = half_line(&mut f, spec)?;
    let r2 = half_line(|u| f(-u), spec)?;
    Ok(combine(r1, r2))
}

/// ∫_ℝ f with the substitution centred at `center` with width `scale`.
pub fn real_line_at(
    mut f: impl FnMut(f64) -> C64,
    center: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let s = QuadratureSpec {
        tan_scale: scale,
        ..*spec
    };
    let r1 = half_line(|u| f(center + u), &s)?;
    let r2 = half_line(|u| f(center - u), &s)?;
    Ok(combine(r1, r2))
}

fn combine(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult {
        value: a.value + b.value,
        error: a.error + b.error,
        evals: a.evals + b.evals,
    }
}

/// Wynn ε table over a growing sequence; returns the latest even-column
/// estimate and the change from the previous one.
#[derive(Default)]
struct Wynn {
    rows: Vec<Vec<C64>>,
    last: Option<C64>,
}

impl Wynn {
    fn push(&mut self, s: C64) -> (C64, f64) {
        let mut new_row = vec![s];
        if let Some(prev) = self.rows.last() {
            for j in 0..prev.len() {
                let before = if j == 0 { C64::new(0.0, 0.0) } else { prev[j - 1] };
                let diff = new_row[j] - prev[j];
                if diff.norm() == 0.0 {
                    break;
                }
                new_row.push(before + C64::new(1.0, 0.0) / diff);
            }
        }
        // estimate from the highest even column available
        let k = (new_row.len() - 1) & !1;
        let est = new_row[k];
        self.rows.push(new_row);
        if self.rows.len() > 60 {
            self.rows.remove(0);
        }
        let change = self.last.map(|l| (est - l).norm()).unwrap_or(f64::INFINITY);
        self.last = Some(est);
        (est, change)
    }
}

/// ∫_0^∞ f(u) e(−t u) du for an algebraically decaying f.
pub fn oscillatory_half_line(mut f: impl FnMut(f64) -> C64, t: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    if t == 0.0 {
        return half_line(f, spec);
    }
    let h = 0.5 / t.abs();
    let mut g = |u: f64| f(u) * C64::from_polar(1.0, -2.0 * PI * t * u);
    let mut wynn = Wynn::default();
    let mut partial = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    let mut hits = 0;
    for k in 0..spec.max_pieces {
        let r = integrate(&mut g, k as f64 * h, (k + 1) as f64 * h, &spec.tighter(10.0))?;
        partial += r.value;
        err += r.error;
        evals += r.evals;
        let (est, change) = wynn.push(partial);
        let tol = spec.abs_tol.max(spec.rel_tol * est.norm());
        if k >= 6 && change <= tol {
            hits += 1;
            if hits >= 3 {
                return Ok(QuadResult { value: est, error: err + change, evals });
            }
        } else {
            hits = 0;
        }
    }
    Err(Error::Quadrature(format!(
        "oscillatory tail did not settle after {} pieces",
        spec.max_pieces
    )))
}

/// ∫_ℝ f(u) e(−t u) du.
pub fn oscillatory_real_line(mut f: impl FnMut(f64) -> C64, t: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let r1 = oscillatory_half_line(&mut f, t, spec)?;
    let r2 = oscillatory_half_line(|u| f(-u), -t, spec)?;
    Ok(combine(r1, r2))
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes and weights of an n-point rule on ℝ through u = s·tan(πx/2).
pub fn tan_mapped_rule(n: usize, scale: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    x.iter()
        .zip(w.iter())
        .map(|(&xi, &wi)| {
            let th = xi * PI / 2.0;
            let c = th.cos();
            (scale * th.tan(), wi * PI / 2.0 * scale / (c * c))
        })
        .unzip()
}
