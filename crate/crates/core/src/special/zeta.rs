//! Riemann zeta (Euler–Maclaurin with reflection), completed zeta Λ and
//! complex divisor sums.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::gamma::gamma;
use crate::arith::divisors;
use crate::{Error, Result, C64};

/// Term counts for the Euler–Maclaurin evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaConfig {
    /// Direct terms beyond |Im s|.
    pub direct: usize,
    /// Bernoulli correction terms (at most 30).
    pub corrections: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            direct: 30,
            corrections: 20,
        }
    }
}

/// B_{2k}/(2k)! for k = 1..=30.
fn bernoulli_ratios() -> &'static [f64] {
    static CELL: OnceLock<Vec<f64>> = OnceLock::new();
    CELL.get_or_init(|| {
        // Akiyama–Tanigawa for B_0..B_60
        let n = 61usize;
        let mut a: Vec<BigRational> = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for m in 0..n {
            a.push(BigRational::new(1.into(), (m as i64 + 1).into()));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer((j as i64).into());
            }
            b.push(a[0].clone());
        }
        let mut fact = BigRational::from_integer(1.into());
        let mut out = Vec::new();
        for (m, bm) in b.iter().enumerate().skip(1) {
            fact *= BigRational::from_integer((m as i64).into());
            if m % 2 == 0 {
                let r = if bm.is_zero() {
                    0.0
                } else {
                    (bm / &fact).to_f64().unwrap_or(0.0)
                };
                out.push(r);
            }
        }
        out
    })
}

pub fn zeta(s: C64) -> Result<C64> {
    zeta_with(s, ZetaConfig::default())
}

pub fn zeta_with(s: C64, cfg: ZetaConfig) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    if s.re < -0.5 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let one = C64::new(1.0, 0.0);
        let r = C64::new(2.0, 0.0).powc(s)
            * C64::new(PI, 0.0).powc(s - 1.0)
            * (s * (PI / 2.0)).sin()
            * gamma(one - s)
            * zeta_with(one - s, cfg)?;
        return Ok(r);
    }
    Ok(euler_maclaurin(s, cfg))
}

fn euler_maclaurin(s: C64, cfg: ZetaConfig) -> C64 {
    let n = cfg.direct + s.im.abs().ceil() as usize;
    let mut sum = C64::new(0.0, 0.0);
    for k in (1..n).rev() {
        sum += C64::new(k as f64, 0.0).powc(-s);
    }
    let nf = C64::new(n as f64, 0.0);
    let n_s = nf.powc(-s);
    sum += n_s * 0.5 + n_s * nf / (s - 1.0);
    let bern = bernoulli_ratios();
    // rising factorial s(s+1)…(s+2k−2) times N^{−s−2k+1}
    let mut term = n_s / nf * s;
    for (k, &b) in bern.iter().enumerate().take(cfg.corrections.min(bern.len())) {
        if k > 0 {
            let j = 2.0 * k as f64;
            term = term * (s + (j - 1.0)) * (s + j) / (nf * nf);
        }
        sum += term * b;
    }
    sum
}

pub fn zeta_real(s: f64) -> Result<f64> {
    zeta(C64::new(s, 0.0)).map(|z| z.re)
}

/// Λ(s) = π^{−s/2} Γ(s/2) ζ(s).
pub fn lambda_completed(s: C64) -> Result<C64> {
    if s == C64::new(0.0, 0.0) || s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(format!("Λ at s = {s}")));
    }
    Ok(C64::new(PI, 0.0).powc(-s / 2.0) * gamma(s / 2.0) * zeta(s)?)
}

/// σ_s(n) = Σ_{d|n} d^s.
pub fn divisor_sigma(s: C64, n: u64) -> C64 {
    assert!(n >= 1, "divisor_sigma needs n ≥ 1");
    divisors(n)
        .into_iter()
        .map(|d| C64::new(d as f64, 0.0).powc(s))
        .sum()
}
