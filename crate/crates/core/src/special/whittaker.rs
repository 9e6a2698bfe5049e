//! The classical Whittaker integral, the eight Jacquet integrals W_w in
//! their explicit coordinates, closed forms and the invariant-operator
//! eigenvalues.

use serde::{Deserialize, Serialize};

use super::gamma::beta;
use super::quad::{
    oscillatory_real_line, real_line, real_line_at, tan_mapped_rule, QuadResult, QuadratureSpec,
};
use crate::symplectic::{IwasawaPoint, WeylWord};
use crate::{Error, Result, C64};

/// Character χ_{t1,t5}(η) = e(t1·n1 + t5·n5) of N0(ℤ)\N0(ℝ).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniChar {
    pub t1: i64,
    pub t5: i64,
}

impl UniChar {
    pub fn new(t1: i64, t5: i64) -> Self {
        UniChar { t1, t5 }
    }

    pub fn is_trivial(&self) -> bool {
        self.t1 == 0 && self.t5 == 0
    }

    /// χ at a point with unipotent coordinates n1, n5.
    pub fn eval(&self, n1: f64, n5: f64) -> C64 {
        e(self.t1 as f64 * n1 + self.t5 as f64 * n5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub nu1: C64,
    pub nu2: C64,
}

impl SpectralParam {
    pub fn new(nu1: C64, nu2: C64) -> Self {
        SpectralParam { nu1, nu2 }
    }

    pub fn real(nu1: f64, nu2: f64) -> Self {
        SpectralParam {
            nu1: C64::new(nu1, 0.0),
            nu2: C64::new(nu2, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.nu1, self.nu2].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("spectral parameter must be finite".into()))
        }
    }
}

/// e(x) = exp(2πi x).
pub fn e(x: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

/// x^c for x > 0 and complex c.
pub fn rpow(x: f64, c: C64) -> C64 {
    if c.im == 0.0 {
        return C64::new(x.powf(c.re), 0.0);
    }
    (c * x.ln()).exp()
}

/// W(y, ν, ψ_t) = ∫ (y/(y²+u²))^ν e(−tu) du, absolutely convergent for
/// Re ν > 1/2.
pub fn classical_whittaker(y: f64, nu: C64, t: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    if !(y > 0.0) {
        return Err(Error::Invalid(format!("classical Whittaker needs y > 0, got {y}")));
    }
    if nu.re <= 0.5 {
        return Err(Error::Region(format!("classical Whittaker needs Re ν > 1/2, got {nu}")));
    }
    let s = QuadratureSpec {
        tan_scale: y,
        ..*spec
    };
    oscillatory_real_line(|u| rpow(y / (y * y + u * u), nu), t, &s)
}

/// Value of W(y, ν, ψ_0) by the Beta reduction.
pub fn classical_whittaker_t0(y: f64, nu: C64) -> C64 {
    rpow(y, C64::new(1.0, 0.0) - nu) * beta(C64::new(0.5, 0.0), nu - 0.5)
}

/// Whether χ is compatible with the cell; W_w vanishes identically otherwise.
pub fn character_supported(w: WeylWord, chi: UniChar) -> bool {
    match w {
        WeylWord::Id => chi.is_trivial(),
        WeylWord::A | WeylWord::BA | WeylWord::ABA => chi.t5 == 0,
        WeylWord::B | WeylWord::AB | WeylWord::BAB => chi.t1 == 0,
        WeylWord::ABAB => true,
    }
}

/// Strict inequalities on Re ν under which the integral for W_w converges
/// absolutely: every Beta argument and every classical Whittaker parameter
/// minus 1/2 has positive real part.
pub fn convergence_conditions(w: WeylWord) -> &'static [&'static str] {
    match w {
        WeylWord::Id => &[],
        WeylWord::A => &["Re(nu1 - nu2) > 0"],
        WeylWord::B => &["Re(nu2 - nu1/2) > 0"],
        WeylWord::AB => &["Re(nu1 - nu2) > 0", "Re(nu1) > 0"],
        WeylWord::BA => &["Re(nu2 - nu1/2) > 0", "Re(nu2) > 0"],
        WeylWord::ABA => &["Re(nu1 - nu2) > 0", "Re(nu1) > 0", "Re(nu2) > 0"],
        WeylWord::BAB => &["Re(nu2 - nu1/2) > 0", "Re(nu2) > 0", "Re(nu1) > 0"],
        WeylWord::ABAB => &[
            "Re(nu1 - nu2) > 0",
            "Re(nu2 - nu1/2) > 0",
            "Re(nu1) > 0",
            "Re(nu2) > 0",
        ],
    }
}

pub fn check_region(w: WeylWord, nu: &SpectralParam) -> Result<()> {
    let (a, b) = (nu.nu1.re, nu.nu2.re);
    let ok = match w {
        WeylWord::Id => true,
        WeylWord::A => a - b > 0.0,
        WeylWord::B => b - a / 2.0 > 0.0,
        WeylWord::AB => a - b > 0.0 && a > 0.0,
        WeylWord::BA => b - a / 2.0 > 0.0 && b > 0.0,
        WeylWord::ABA => a - b > 0.0 && a > 0.0 && b > 0.0,
        WeylWord::BAB => b - a / 2.0 > 0.0 && b > 0.0 && a > 0.0,
        WeylWord::ABAB => a - b > 0.0 && b - a / 2.0 > 0.0 && a > 0.0 && b > 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Region(format!(
            "W_{} needs {}",
            w.name(),
            convergence_conditions(w).join(", ")
        )))
    }
}

struct Exps {
    /// y1^{ν1+2} y2^{ν1+2}
    pre: C64,
    /// ν1/2 − ν2 − 1/2
    a: C64,
    /// ν2 − ν1 − 1/2
    b: C64,
}

fn exps(y1: f64, y2: f64, nu: &SpectralParam) -> Exps {
    let (n1, n2) = (nu.nu1, nu.nu2);
    Exps {
        pre: rpow(y1, n1 + 2.0) * rpow(y2, n1 + 2.0),
        a: n1 / 2.0 - n2 - 0.5,
        b: n2 - n1 - 0.5,
    }
}

fn scaled(r: QuadResult, c: C64) -> QuadResult {
    QuadResult {
        value: r.value * c,
        error: r.error * c.norm(),
        evals: r.evals,
    }
}

/// The explicit integrands of W_w at the torus point diag(y1, y2, ·, ·),
/// as functions of the N_w coordinates (n1, n2, n4, n5) (unused entries
/// ignored), without the prefactor.
pub fn jacquet_integrand(w: WeylWord, y1: f64, y2: f64, nu: &SpectralParam, n: [f64; 4]) -> C64 {
    let Exps { a, b, .. } = exps(y1, y2, nu);
    let [n1, n2, n4, n5] = n;
    let (y1s, y2s) = (y1 * y1, y2 * y2);
    match w {
        WeylWord::Id => C64::new(1.0, 0.0),
        WeylWord::A => rpow(n1 * n1 * y2s + y1s, b),
        WeylWord::B => rpow(y2s * y2s + n5 * n5, a),
        WeylWord::AB => {
            let q = y2s * y2s + n5 * n5;
            rpow(q, a) * rpow(q * y1s + y2s * n4 * n4, b)
        }
        WeylWord::BA => {
            let q = n1 * n1 * y2s + y1s;
            rpow(q, b) * rpow(n2 * n2 + q * q, a)
        }
        WeylWord::ABA => {
            let q = y1s + n1 * n1 * y2s;
            let s = n2 + n1 * n4;
            rpow(q * q + s * s, a)
                * rpow(
                    y1s * y1s * y2s + n2 * n2 * y2s + n1 * n1 * y1s * y2s * y2s + n4 * n4 * y1s,
                    b,
                )
        }
        WeylWord::BAB => {
            let s = n1 * n4 - n2;
            let t = n2 * n5 - n4 * n4 - n1 * n4 * n5;
            rpow(
                y1s * y1s * y2s * y2s
                    + n5 * n5 * y1s * y1s
                    + 2.0 * n4 * n4 * y1s * y2s
                    + s * s * y2s * y2s
                    + t * t,
                a,
            ) * rpow(y1s * y2s * y2s + n5 * n5 * y1s + n4 * n4 * y2s, b)
        }
        WeylWord::ABAB => {
            let n3 = n1 * n5 + n4;
            let (y14, y24) = (y1s * y1s, y2s * y2s);
            let qa = n1 * n1 * n4 * n4 * y24 + y14 * y24 - 2.0 * n1 * n5 * n4 * y1s * y2s
                - 2.0 * n1 * n2 * n4 * y24
                + n5 * n5 * y14
                + 2.0 * n3 * n4 * y1s * y2s
                + n2 * n2 * y24
                + n2 * n2 * n5 * n5
                - 2.0 * n3 * n2 * n5 * n4
                + n3 * n3 * n4 * n4;
            let qb = n1 * n1 * y1s * y24 + y14 * y2s + n3 * n3 * y1s + n2 * n2 * y2s;
            rpow(qa, a) * rpow(qb, b)
        }
    }
}

/// The prefactor multiplying the integral of [`jacquet_integrand`].
pub fn jacquet_prefactor(w: WeylWord, y1: f64, y2: f64, nu: &SpectralParam) -> C64 {
    match w {
        WeylWord::Id | WeylWord::B => {
            rpow(y1, nu.nu1 + 2.0) * rpow(y2, 2.0 * nu.nu2 - nu.nu1 + 1.0)
        }
        _ => exps(y1, y2, nu).pre,
    }
}

/// W_w(g, ν, χ) from the explicit 0–4 dimensional integral. The long element
/// uses a tensor Gauss–Legendre rule and reports the difference to a coarser
/// rule as its error.
pub fn whittaker_w(
    w: WeylWord,
    g: &IwasawaPoint,
    nu: &SpectralParam,
    chi: UniChar,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    g.validate()?;
    nu.validate()?;
    spec.validate()?;
    let zero = QuadResult {
        value: C64::new(0.0, 0.0),
        error: 0.0,
        evals: 0,
    };
    if !character_supported(w, chi) {
        return Ok(zero);
    }
    check_region(w, nu)?;
    if w == WeylWord::ABAB && (chi.t1 == 0) != (chi.t5 == 0) {
        return long_degenerate(g, nu, chi, spec);
    }
    let (y1, y2) = (g.y1, g.y2);
    let phase = chi.eval(g.n1, g.n5);
    let pre = jacquet_prefactor(w, y1, y2, nu) * phase;
    let (t1, t5) = (chi.t1 as f64, chi.t5 as f64);
    let inner = spec.tighter(10.0);
    let f = |n: [f64; 4]| jacquet_integrand(w, y1, y2, nu, n);
    // outer widths: y1/y2 for n1, y2² for n5
    let s1 = QuadratureSpec {
        tan_scale: y1 / y2,
        ..*spec
    };
    let s5 = QuadratureSpec {
        tan_scale: y2 * y2,
        ..*spec
    };
    let r = match w {
        WeylWord::Id => QuadResult {
            value: C64::new(1.0, 0.0),
            error: 0.0,
            evals: 0,
        },
        WeylWord::A => oscillatory_real_line(|n1| f([n1, 0.0, 0.0, 0.0]), t1, &s1)?,
        WeylWord::B => oscillatory_real_line(|n5| f([0.0, 0.0, 0.0, n5]), t5, &s5)?,
        WeylWord::AB => nested_2d(
            |n5, n4| f([0.0, 0.0, n4, n5]),
            |n5| (0.0, y1 * (y2.powi(4) + n5 * n5).sqrt() / y2),
            t5,
            &s5,
            &inner,
        )?,
        WeylWord::BA => nested_2d(
            |n1, n2| f([n1, n2, 0.0, 0.0]),
            |n1| (0.0, n1 * n1 * y2 * y2 + y1 * y1),
            t1,
            &s1,
            &inner,
        )?,
        WeylWord::ABA => nested_3d(
            |n1, n4, n2| f([n1, n2, n4, 0.0]),
            |n1| (0.0, y2 * (y1 * y1 + n1 * n1 * y2 * y2).sqrt()),
            |n1, n4| {
                let q = y1 * y1 + n1 * n1 * y2 * y2;
                (-0.5 * n1 * n4, q + 0.5 * (n1 * n4).abs())
            },
            t1,
            &s1,
            &inner,
        )?,
        WeylWord::BAB => nested_3d(
            |n5, n4, n2| f([0.0, n2, n4, n5]),
            |n5| (0.0, y1 * (y2.powi(4) + n5 * n5).sqrt() / y2),
            |n5, n4| {
                let c = y2.powi(4) + n5 * n5;
                let rest = y1.powi(4) * c + 2.0 * n4 * n4 * y1 * y1 * y2 * y2 + n4.powi(4);
                (n4 * n4 * n5 / c, (rest / c).sqrt())
            },
            t5,
            &s5,
            &inner,
        )?,
        WeylWord::ABAB => tensor_4d(&f, chi, spec)?,
    };
    Ok(scaled(r, pre))
}

/// Reduction of the long element when χ is trivial on one simple root:
/// the integral over that root subgroup is the rank-one intertwining
/// integral ∫ (1 + u²)^{−x−1/2} du = B(1/2, x), leaving the length-3
/// Whittaker function at the reflected parameter
///   χ_{t1,0}: W_long(ν) = B(1/2, ν2 − ν1/2) · W_aba(ν1, ν1 − ν2),
///   χ_{0,t5}: W_long(ν) = B(1/2, ν1 − ν2) · W_bab(2ν2 − ν1, ν2).
fn long_reduction(nu: &SpectralParam, chi: UniChar) -> (C64, WeylWord, SpectralParam) {
    if chi.t5 == 0 {
        (
            nu.nu2 - nu.nu1 / 2.0,
            WeylWord::ABA,
            SpectralParam::new(nu.nu1, nu.nu1 - nu.nu2),
        )
    } else {
        (
            nu.nu1 - nu.nu2,
            WeylWord::BAB,
            SpectralParam::new(2.0 * nu.nu2 - nu.nu1, nu.nu2),
        )
    }
}

fn long_degenerate(
    g: &IwasawaPoint,
    nu: &SpectralParam,
    chi: UniChar,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let (x, w, nu2) = long_reduction(nu, chi);
    let c = real_line(|u| rpow(1.0 + u * u, -x - 0.5), spec)?;
    let r = whittaker_w(w, g, &nu2, chi, spec)?;
    Ok(QuadResult {
        value: c.value * r.value,
        error: c.value.norm() * r.error + c.error * r.value.norm(),
        evals: c.evals + r.evals,
    })
}

type Fail = std::cell::Cell<Option<Error>>;

fn take_inner(res: Result<QuadResult>, fail: &Fail) -> C64 {
    match res {
        Ok(r) => r.value,
        Err(e) => {
            fail.set(Some(e));
            C64::new(0.0, 0.0)
        }
    }
}

/// ∫ dx e(−t x) ∫ dy f(x, y), the oscillation carried by the outer
/// variable; `sy(x)` gives the centre and width of the inner integrand.
fn nested_2d(
    f: impl Fn(f64, f64) -> C64,
    sy: impl Fn(f64) -> (f64, f64),
    t: f64,
    outer: &QuadratureSpec,
    inner: &QuadratureSpec,
) -> Result<QuadResult> {
    let fail: Fail = Default::default();
    let r = oscillatory_real_line(
        |x| {
            let (c, s) = sy(x);
            take_inner(real_line_at(|y| f(x, y), c, s, inner), &fail)
        },
        t,
        outer,
    )?;
    match fail.take() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

fn nested_3d(
    f: impl Fn(f64, f64, f64) -> C64,
    sy: impl Fn(f64) -> (f64, f64),
    sz: impl Fn(f64, f64) -> (f64, f64),
    t: f64,
    outer: &QuadratureSpec,
    inner: &QuadratureSpec,
) -> Result<QuadResult> {
    let fail: Fail = Default::default();
    let r = oscillatory_real_line(
        |x| {
            let (cy, wy) = sy(x);
            take_inner(
                real_line_at(
                    |y| {
                        let (cz, wz) = sz(x, y);
                        take_inner(real_line_at(|z| f(x, y, z), cz, wz, inner), &fail)
                    },
                    cy,
                    wy,
                    inner,
                ),
                &fail,
            )
        },
        t,
        outer,
    )?;
    match fail.take() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

fn tensor_sum(f: &impl Fn([f64; 4]) -> C64, chi: UniChar, n: usize) -> C64 {
    let (u, wt) = tan_mapped_rule(n, 1.0);
    let mut total = C64::new(0.0, 0.0);
    for i in 0..n {
        let ph1 = e(-(chi.t1 as f64) * u[i]);
        let mut s1 = C64::new(0.0, 0.0);
        for j in 0..n {
            let mut s2 = C64::new(0.0, 0.0);
            for k in 0..n {
                let mut s3 = C64::new(0.0, 0.0);
                for l in 0..n {
                    let ph5 = e(-(chi.t5 as f64) * u[l]);
                    s3 += f([u[i], u[j], u[k], u[l]]) * ph5 * wt[l];
                }
                s2 += s3 * wt[k];
            }
            s1 += s2 * wt[j];
        }
        total += s1 * ph1 * wt[i];
    }
    total
}

fn tensor_4d(f: &impl Fn([f64; 4]) -> C64, chi: UniChar, spec: &QuadratureSpec) -> Result<QuadResult> {
    let n = spec.tensor_points;
    if n < 4 || n > 160 {
        return Err(Error::Budget(format!(
            "tensor rule with {n} points per axis is outside 4..=160"
        )));
    }
    let fine = tensor_sum(f, chi, n);
    let coarse = tensor_sum(f, chi, (3 * n) / 4);
    Ok(QuadResult {
        value: fine,
        error: (fine - coarse).norm(),
        evals: n.pow(4) + ((3 * n) / 4).pow(4),
    })
}

/// Closed forms of W_w in terms of Beta values and the classical
/// Whittaker function, except the long element at a character with
/// t1 t5 ≠ 0. The s_β line uses the parameter
/// ν2 − ν1/2 + 1/2, which is what the s_β integral evaluates to.
pub fn whittaker_closed(
    w: WeylWord,
    g: &IwasawaPoint,
    nu: &SpectralParam,
    chi: UniChar,
    spec: &QuadratureSpec,
) -> Result<C64> {
    g.validate()?;
    nu.validate()?;
    if w == WeylWord::ABAB && chi.t1 != 0 && chi.t5 != 0 {
        return Err(Error::Invalid(
            "no closed form for the long element at a nondegenerate character".into(),
        ));
    }
    if w == WeylWord::ABAB && !chi.is_trivial() {
        check_region(w, nu)?;
        let (x, w2, nu2) = long_reduction(nu, chi);
        return Ok(beta(C64::new(0.5, 0.0), x) * whittaker_closed(w2, g, &nu2, chi, spec)?);
    }
    if !character_supported(w, chi) {
        return Ok(C64::new(0.0, 0.0));
    }
    check_region(w, nu)?;
    let (y1, y2) = (g.y1, g.y2);
    let (n1, n2) = (nu.nu1, nu.nu2);
    let half = C64::new(0.5, 0.0);
    let bh = |x: C64| beta(half, x);
    let cw = |y: f64, v: C64, t: f64| -> Result<C64> {
        if t == 0.0 {
            Ok(classical_whittaker_t0(y, v))
        } else {
            classical_whittaker(y, v, t, spec).map(|r| r.value)
        }
    };
    let (t1, t5) = (chi.t1 as f64, chi.t5 as f64);
    let v = match w {
        WeylWord::Id => rpow(y1, n1 + 2.0) * rpow(y2, 2.0 * n2 - n1 + 1.0),
        WeylWord::A => {
            rpow(y1, n2 + 1.5) * rpow(y2, n1 + 1.0) * cw(y1, n1 - n2 + 0.5, t1 / y2)?
        }
        WeylWord::B => rpow(y1, n1 + 2.0) * cw(y2 * y2, n2 - n1 / 2.0 + 0.5, t5)?,
        WeylWord::AB => {
            rpow(y1, 2.0 * n2 - n1 + 2.0) * bh(n1 - n2) * cw(y2 * y2, n1 / 2.0 + 0.5, t5)?
        }
        WeylWord::BA => {
            rpow(y1, n1 - n2 + 1.5)
                * rpow(y2, n1 + 1.0)
                * bh(n2 - n1 / 2.0)
                * cw(y1, n2 + 0.5, t1 / y2)?
        }
        WeylWord::ABA => {
            rpow(y1, n2 - n1 + 1.5)
                * rpow(y2, 2.0 * n2 - n1 + 1.0)
                * bh(n1 / 2.0)
                * bh(n1 - n2)
                * cw(y1, n2 + 0.5, t1 / y2)?
        }
        WeylWord::BAB => {
            rpow(y1, n1 - 2.0 * n2 + 2.0)
                * bh(n2 - n1 / 2.0)
                * bh(n2)
                * cw(y2 * y2, n1 / 2.0 + 0.5, t5)?
        }
        WeylWord::ABAB => {
            rpow(y1, 2.0 - n1)
                * rpow(y2, n1 - 2.0 * n2 + 1.0)
                * bh(n2 - n1 / 2.0)
                * bh(n2)
                * bh(n1 / 2.0)
                * bh(n1 - n2)
        }
    };
    Ok(v * chi.eval(g.n1, g.n5))
}

/// Eigenvalues of Δ1 and Δ2 on I0(·, ν).
pub fn eigenvalues(nu: &SpectralParam) -> (C64, C64) {
    let (a, b) = (nu.nu1, nu.nu2);
    let d1 = (4.0 * a * a + 16.0 * a * b + 4.0 * b * b + 40.0 * a + 36.0 * b + 61.0) / 64.0;
    let d2 = (2.0 * a * b + a + 4.0) * (a + 2.0) * (2.0 * b + 5.0) / 1024.0;
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tol(1e-12, 1e-9)
    }

    #[test]
    fn classical_beta_reduction() {
        let r = classical_whittaker(1.3, C64::new(2.2, 0.0), 0.0, &spec()).unwrap();
        let want = classical_whittaker_t0(1.3, C64::new(2.2, 0.0));
        assert!((r.value - want).norm() < 1e-8 * want.norm());
    }

    #[test]
    fn identity_and_vanishing() {
        let g = IwasawaPoint::diagonal(1.2, 0.7);
        let nu = SpectralParam::real(3.0, 2.0);
        let r = whittaker_w(WeylWord::Id, &g, &nu, UniChar::new(0, 0), &spec()).unwrap();
        let want = 1.2f64.powf(5.0) * 0.7f64.powf(2.0);
        assert!((r.value.re - want).abs() < 1e-13);
        let z = whittaker_w(WeylWord::A, &g, &nu, UniChar::new(2, 1), &spec()).unwrap();
        assert_eq!(z.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn long_degenerate_reduction_agrees_with_tensor_rule() {
        let g = IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9);
        let nu = SpectralParam::real(8.0, 6.0);
        let q = QuadratureSpec {
            tensor_points: 90,
            ..QuadratureSpec::with_tol(1e-12, 1e-9)
        };
        for chi in [UniChar::new(1, 0), UniChar::new(0, 1)] {
            let red = whittaker_w(WeylWord::ABAB, &g, &nu, chi, &q).unwrap().value;
            let closed = whittaker_closed(WeylWord::ABAB, &g, &nu, chi, &q).unwrap();
            assert!((red - closed).norm() < 1e-8 * closed.norm());
            let f = |n: [f64; 4]| jacquet_integrand(WeylWord::ABAB, g.y1, g.y2, &nu, n);
            let pre = jacquet_prefactor(WeylWord::ABAB, g.y1, g.y2, &nu) * chi.eval(g.n1, g.n5);
            let tensor = tensor_sum(&f, chi, 90) * pre;
            assert!((tensor - red).norm() < 3e-2 * red.norm(), "{chi:?}: {tensor} {red}");
        }
    }

    #[test]
    fn region_guard() {
        let g = IwasawaPoint::diagonal(1.0, 1.0);
        let nu = SpectralParam::real(1.0, 2.0);
        assert!(matches!(
            whittaker_w(WeylWord::A, &g, &nu, UniChar::default(), &spec()),
            Err(Error::Region(_))
        ));
    }

    #[test]
    fn eigenvalues_at_origin() {
        let (d1, d2) = eigenvalues(&SpectralParam::real(0.0, 0.0));
        assert_eq!(d1.re, 61.0 / 64.0);
        assert_eq!(d2.re, 40.0 / 1024.0);
    }
}
