//! Constant terms along P0, Pα and Pβ: closed forms and numerical routes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gl2::gl2_eisenstein_fourier;
use super::series::{CosetTable, PsiTable};
use super::{
    check_convergence, lratio, term, Along, Breakdown, NumericMethod, Params, SeriesId, Term,
    TruncationSpec,
};
use crate::arith::ComplexSum;
use crate::cosets::{bruhat_summary, enumerate_r};
use crate::special::whittaker::{e, whittaker_w, SpectralParam, UniChar};
use crate::symplectic::{embed_iwasawa, mat_mul, unipotent_f64, IwasawaPoint, WeylWord};
use crate::{Error, Result, C64};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ypow(g: &IwasawaPoint, a: C64, b: C64) -> C64 {
    (a * g.y1.ln() + b * g.y2.ln()).exp()
}

/// GL(2) variable of the Levi of Pα.
fn z_alpha(g: &IwasawaPoint) -> C64 {
    C64::new(-g.n1, g.y1 / g.y2)
}

/// GL(2) variable of the Levi of Pβ.
fn z_beta(g: &IwasawaPoint) -> C64 {
    C64::new(-g.n5, g.y2 * g.y2)
}

/// Closed-form constant term with its labelled summands.
pub fn constant_term_closed(
    id: SeriesId,
    along: Along,
    g: &IwasawaPoint,
    params: &Params,
) -> Result<Breakdown> {
    g.validate()?;
    let terms = match id {
        SeriesId::E0 => e0_terms(along, g, &params.minimal()?)?,
        SeriesId::Ealpha => ealpha_terms(along, g, params.maximal()?)?,
        SeriesId::Ebeta => ebeta_terms(along, g, params.maximal()?)?,
    };
    Ok(Breakdown::from_terms(terms))
}

fn e0_terms(along: Along, g: &IwasawaPoint, nu: &SpectralParam) -> Result<Vec<Term>> {
    nu.validate()?;
    let (n1, n2) = (nu.nu1, nu.nu2);
    let la = lratio(2.0 * n1 - 2.0 * n2)?;
    let lb = lratio(2.0 * n2 - n1)?;
    let l1 = lratio(n1)?;
    let l2 = lratio(2.0 * n2)?;
    let y = |a: C64, b: C64| ypow(g, a, b);
    let one = c(1.0);
    Ok(match along {
        Along::P0 => {
            let v = [
                one * y(n1 + 2.0, 2.0 * n2 - n1 + 1.0),
                la * y(2.0 * n2 - n1 + 2.0, n1 + 1.0),
                lb * y(n1 + 2.0, n1 - 2.0 * n2 + 1.0),
                l1 * la * y(2.0 * n2 - n1 + 2.0, 1.0 - n1),
                l2 * lb * y(n1 - 2.0 * n2 + 2.0, n1 + 1.0),
                l2 * l1 * la * y(2.0 - n1, 2.0 * n2 - n1 + 1.0),
                l1 * l2 * lb * y(n1 - 2.0 * n2 + 2.0, 1.0 - n1),
                la * lb * l1 * l2 * y(2.0 - n1, n1 - 2.0 * n2 + 1.0),
            ];
            WeylWord::ALL.iter().zip(v).map(|(w, x)| term(w.name(), x)).collect()
        }
        Along::Pa => {
            let z = z_alpha(g);
            let ea = gl2_eisenstein_fourier(z, n1 - n2)?;
            let eb = gl2_eisenstein_fourier(z, n2)?;
            let h = |e: C64| y(e, e);
            vec![
                term("id", ea * h(n2 + 1.5)),
                term("s_beta", lb * eb * h(n1 - n2 + 1.5)),
                term("s_beta_s_alpha", l1 * la * eb * h(n2 - n1 + 1.5)),
                term("s_beta_s_alpha_s_beta", l1 * l2 * lb * ea * h(1.5 - n2)),
            ]
        }
        Along::Pb => {
            let z = z_beta(g);
            let ea = gl2_eisenstein_fourier(z, n2 - n1 / 2.0)?;
            let eb = gl2_eisenstein_fourier(z, n1 / 2.0)?;
            let h = |e: C64| y(e, c(0.0));
            vec![
                term("id", ea * h(n1 + 2.0)),
                term("s_alpha", la * eb * h(2.0 * n2 - n1 + 2.0)),
                term("s_alpha_s_beta", l2 * lb * eb * h(n1 - 2.0 * n2 + 2.0)),
                term("s_alpha_s_beta_s_alpha", l2 * l1 * la * ea * h(2.0 - n1)),
            ]
        }
    })
}

fn ealpha_terms(along: Along, g: &IwasawaPoint, nu: C64) -> Result<Vec<Term>> {
    let y = |a: C64, b: C64| ypow(g, a, b);
    let l_half = lratio(nu + 0.5)?;
    let l_2 = lratio(2.0 * nu)?;
    let l_mhalf = lratio(nu - 0.5)?;
    Ok(match along {
        Along::P0 => vec![
            term("id", y(nu + 1.5, nu + 1.5)),
            term("s_beta", l_half * y(nu + 1.5, 0.5 - nu)),
            term("s_beta_s_alpha", l_2 * l_half * y(1.5 - nu, nu + 0.5)),
            term("s_beta_s_alpha_s_beta", l_mhalf * l_2 * l_half * y(1.5 - nu, 1.5 - nu)),
        ],
        Along::Pa => {
            let e = gl2_eisenstein_fourier(z_alpha(g), nu)?;
            vec![
                term("id", y(nu + 1.5, nu + 1.5)),
                term("s_beta_s_alpha", l_half * e * y(c(1.0), c(1.0))),
                term("s_beta_s_alpha_s_beta", l_mhalf * l_2 * l_half * y(1.5 - nu, 1.5 - nu)),
            ]
        }
        Along::Pb => {
            let z = z_beta(g);
            let e1 = gl2_eisenstein_fourier(z, nu / 2.0 + 0.25)?;
            let e2 = gl2_eisenstein_fourier(z, nu / 2.0 - 0.25)?;
            vec![
                term("s_beta", e1 * y(nu + 1.5, c(0.0))),
                term("s_beta_s_alpha_s_beta", l_2 * l_half * e2 * y(1.5 - nu, c(0.0))),
            ]
        }
    })
}

fn ebeta_terms(along: Along, g: &IwasawaPoint, nu: C64) -> Result<Vec<Term>> {
    let y = |a: C64, b: C64| ypow(g, a, b);
    let l0 = lratio(nu)?;
    let l1 = lratio(nu + 1.0)?;
    let lm = lratio(nu - 1.0)?;
    Ok(match along {
        Along::P0 => vec![
            term("id", y(nu + 2.0, c(0.0))),
            term("s_alpha", l1 * y(c(1.0), nu + 1.0)),
            term("s_alpha_s_beta", l0 * l1 * y(c(1.0), 1.0 - nu)),
            term("s_alpha_s_beta_s_alpha", lm * l0 * l1 * y(2.0 - nu, c(0.0))),
        ],
        Along::Pa => {
            let z = z_alpha(g);
            let e1 = gl2_eisenstein_fourier(z, (nu + 1.0) / 2.0)?;
            let e2 = gl2_eisenstein_fourier(z, (nu - 1.0) / 2.0)?;
            vec![
                term("s_beta", e1 * y(nu / 2.0 + 1.0, nu / 2.0 + 1.0)),
                term("s_beta_s_alpha_s_beta", l0 * l1 * e2 * y(1.0 - nu / 2.0, 1.0 - nu / 2.0)),
            ]
        }
        Along::Pb => {
            let e = gl2_eisenstein_fourier(z_beta(g), nu / 2.0)?;
            vec![
                term("id", y(nu + 2.0, c(0.0))),
                term("s_alpha_s_beta", l1 * e * y(c(1.0), c(0.0))),
                term("s_alpha_s_beta_s_alpha", lm * l0 * l1 * y(2.0 - nu, c(0.0))),
            ]
        }
    })
}

// ---------------------------------------------------------------------------
// Numerical routes

/// e(t·p/q) with the product reduced mod q first.
fn e_frac(t: i64, (p, q): (i128, i128)) -> C64 {
    let r = (t as i128 * p).rem_euclid(q);
    e(r as f64 / q as f64)
}

/// S_w(χ) = Σ_{r ∈ R_w, moduli ≤ B} χ(b2(r)) Ψ_w(|D(r)|) for each character.
pub(crate) fn cell_sums(
    w: WeylWord,
    bound: i64,
    chis: &[UniChar],
    nu: &SpectralParam,
) -> Vec<C64> {
    let table = PsiTable::new(nu);
    let reps = enumerate_r(w, bound);
    let parts: Vec<Vec<ComplexSum>> = reps
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = vec![ComplexSum::default(); chis.len()];
            for (p, _) in chunk {
                let s = bruhat_summary(w, p);
                let psi = table.eval(w, s.abs_d1, s.abs_d2);
                for (a, chi) in acc.iter_mut().zip(chis) {
                    a.add(psi * e_frac(chi.t1, s.n1) * e_frac(chi.t5, s.n5));
                }
            }
            acc
        })
        .collect();
    (0..chis.len())
        .map(|k| {
            let mut s = ComplexSum::default();
            for p in &parts {
                s.add(p[k].value());
            }
            s.value()
        })
        .collect()
}

/// Cell pairs making up each Levi class; the second cell carries the
/// nonconstant Fourier modes in the Levi variable.
const PA_CLASSES: [(&str, WeylWord, WeylWord); 4] = [
    ("id", WeylWord::Id, WeylWord::A),
    ("s_beta", WeylWord::B, WeylWord::BA),
    ("s_beta_s_alpha", WeylWord::AB, WeylWord::ABA),
    ("s_beta_s_alpha_s_beta", WeylWord::BAB, WeylWord::ABAB),
];

const PB_CLASSES: [(&str, WeylWord, WeylWord); 4] = [
    ("id", WeylWord::Id, WeylWord::B),
    ("s_alpha", WeylWord::A, WeylWord::AB),
    ("s_alpha_s_beta", WeylWord::BA, WeylWord::BAB),
    ("s_alpha_s_beta_s_alpha", WeylWord::ABA, WeylWord::ABAB),
];

/// Number of Levi Fourier modes needed: e^{-2π M h} below 1e-17.
fn levi_modes(h: f64) -> Result<i64> {
    let m = (39.1 / (2.0 * std::f64::consts::PI * h)).ceil() as i64;
    if m > 200 {
        return Err(Error::Budget(format!("{m} Levi Fourier modes needed")));
    }
    Ok(m.max(1))
}

/// Numerical constant term. `Unfolded` (E0 only) sums coset data per
/// Bruhat cell against Jacquet integrals and returns a per-cell or
/// per-class breakdown; `Grid` averages the truncated series over a
/// midpoint grid on the unipotent radical and returns the total.
pub fn constant_term_numeric(
    id: SeriesId,
    along: Along,
    g: &IwasawaPoint,
    params: &Params,
    t: &TruncationSpec,
) -> Result<Breakdown> {
    g.validate()?;
    t.validate()?;
    check_convergence(id, params)?;
    match (t.method, id) {
        (NumericMethod::Unfolded, SeriesId::E0) => {
            unfolded_constant(along, g, &params.minimal()?, t)
        }
        (NumericMethod::Unfolded, _) => Err(Error::Invalid(
            "the unfolded method is available for E0 only; use the grid".into(),
        )),
        (NumericMethod::Grid, _) => {
            let table = CosetTable::build(id, params, t.height_bound, t.max_terms)?;
            grid_average(&table, g, along, UniChar::default(), t.grid)
        }
    }
}

fn unfolded_constant(
    along: Along,
    g: &IwasawaPoint,
    nu: &SpectralParam,
    t: &TruncationSpec,
) -> Result<Breakdown> {
    let b = t.height_bound;
    let zero = UniChar::default();
    let cell_term = |w: WeylWord| -> Result<(C64, f64)> {
        let s = cell_sums(w, b, &[zero], nu)[0];
        let j = whittaker_w(w, g, nu, zero, &t.quad)?;
        Ok((s * j.value, s.norm() * j.error))
    };
    if along == Along::P0 {
        let mut terms = Vec::new();
        for w in WeylWord::ALL {
            let (v, err) = cell_term(w)?;
            terms.push(Term {
                label: w.name().into(),
                value: v,
                error: err,
            });
        }
        return Ok(Breakdown::from_terms(terms));
    }
    let (classes, h) = match along {
        Along::Pa => (PA_CLASSES, g.y1 / g.y2),
        _ => (PB_CLASSES, g.y2 * g.y2),
    };
    let m_max = levi_modes(h)?;
    let mut terms = Vec::new();
    for (label, w0, w1) in classes {
        let (v0, e0) = cell_term(w0)?;
        let chis: Vec<UniChar> = (-m_max..=m_max)
            .map(|m| match along {
                Along::Pa => UniChar::new(m, 0),
                _ => UniChar::new(0, m),
            })
            .collect();
        let sums = cell_sums(w1, b, &chis, nu);
        let mut acc = ComplexSum::default();
        let mut err = e0;
        acc.add(v0);
        for (chi, s) in chis.iter().zip(sums) {
            let j = whittaker_w(w1, g, nu, *chi, &t.quad)?;
            acc.add(s * j.value);
            err += s.norm() * j.error;
        }
        terms.push(Term {
            label: label.into(),
            value: acc.value(),
            error: err,
        });
    }
    Ok(Breakdown::from_terms(terms))
}

/// Midpoint-grid average of table(N g)·χ̄(N) over the unipotent radical.
pub(crate) fn grid_average(
    table: &CosetTable,
    g: &IwasawaPoint,
    along: Along,
    chi: UniChar,
    grid: usize,
) -> Result<Breakdown> {
    let fine = grid_sum(table, g, along, chi, grid);
    let error = if grid >= 4 && grid % 2 == 0 {
        (fine - grid_sum(table, g, along, chi, grid / 2)).norm()
    } else {
        0.0
    };
    Ok(Breakdown {
        total: fine,
        terms: vec![Term {
            label: "grid".into(),
            value: fine,
            error,
        }],
        error,
    })
}

fn grid_sum(table: &CosetTable, g: &IwasawaPoint, along: Along, chi: UniChar, grid: usize) -> C64 {
    let gm = embed_iwasawa(g);
    let x = |k: usize| (k as f64 + 0.5) / grid as f64;
    // (n1, n2, n4, n5) from three or four grid indices
    let dims: usize = if along == Along::P0 { 4 } else { 3 };
    let coords = move |i: [usize; 4]| -> [f64; 4] {
        match along {
            Along::P0 => [x(i[0]), x(i[1]), x(i[2]), x(i[3])],
            Along::Pa => [0.0, x(i[0]), x(i[1]), x(i[2])],
            Along::Pb => [x(i[0]), x(i[1]), x(i[2]), 0.0],
        }
    };
    let rest = grid.pow(dims as u32 - 1);
    let slices: Vec<C64> = (0..grid)
        .into_par_iter()
        .map(|i0| {
            let mut acc = ComplexSum::default();
            for r in 0..rest {
                let mut idx = [i0, 0, 0, 0];
                let mut q = r;
                for slot in idx.iter_mut().take(dims).skip(1) {
                    *slot = q % grid;
                    q /= grid;
                }
                let n = coords(idx);
                let u = unipotent_f64(n[0], n[1], n[2], n[3]);
                let v = table.eval(&mat_mul(&u, &gm));
                acc.add(v * chi.eval(n[0], n[3]).conj());
            }
            acc.value()
        })
        .collect();
    let mut total = ComplexSum::default();
    for s in slices {
        total.add(s);
    }
    total.value() / (grid as f64).powi(dims as i32)
}

/// Log-linear fit of |term| ≈ C y1^a y2^b for one labelled term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub label: String,
    pub a: f64,
    pub b: f64,
    /// Largest residual of the fit in log space.
    pub residual: f64,
}

/// Fit the y-exponents of every term of the numerical constant term of E0
/// along P0 over the sample points. Exponents are real parts.
pub fn fit_exponents(
    nu: &SpectralParam,
    points: &[(f64, f64)],
    t: &TruncationSpec,
) -> Result<Vec<ExponentFit>> {
    if points.len() < 3 {
        return Err(Error::Invalid("need at least three sample points".into()));
    }
    let params = Params::Minimal(*nu);
    let mut samples = Vec::new();
    for &(y1, y2) in points {
        let g = IwasawaPoint::diagonal(y1, y2);
        samples.push(constant_term_numeric(SeriesId::E0, Along::P0, &g, &params, t)?);
    }
    let mut out = Vec::new();
    for (k, w) in WeylWord::ALL.iter().enumerate() {
        // normal equations for log|v| = c + a ln y1 + b ln y2
        let rows: Vec<[f64; 4]> = points
            .iter()
            .zip(&samples)
            .map(|(&(y1, y2), s)| [1.0, y1.ln(), y2.ln(), s.terms[k].value.norm().ln()])
            .collect();
        let mut m = [[0.0f64; 3]; 3];
        let mut rhs = [0.0f64; 3];
        for r in &rows {
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += r[i] * r[j];
                }
                rhs[i] += r[i] * r[3];
            }
        }
        let sol = solve3(m, rhs).ok_or_else(|| {
            Error::Degenerate("sample points do not determine the exponents".into())
        })?;
        let residual = rows
            .iter()
            .map(|r| (sol[0] + sol[1] * r[1] + sol[2] * r[2] - r[3]).abs())
            .fold(0.0, f64::max);
        out.push(ExponentFit {
            label: w.name().into(),
            a: sol[1],
            b: sol[2],
            residual,
        });
    }
    Ok(out)
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in 0..3 {
                    m[r][k] -= f * m[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some([b[0] / m[0][0], b[1] / m[1][1], b[2] / m[2][2]])
}

/// Real y-exponents of each closed-form P0 term of E0, in cell order.
pub fn p0_exponents(nu: &SpectralParam) -> [(f64, f64); 8] {
    let (a, b) = (nu.nu1.re, nu.nu2.re);
    [
        (a + 2.0, 2.0 * b - a + 1.0),
        (2.0 * b - a + 2.0, a + 1.0),
        (a + 2.0, a - 2.0 * b + 1.0),
        (2.0 * b - a + 2.0, 1.0 - a),
        (a - 2.0 * b + 2.0, a + 1.0),
        (2.0 - a, 2.0 * b - a + 1.0),
        (a - 2.0 * b + 2.0, 1.0 - a),
        (2.0 - a, a - 2.0 * b + 1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn levi_pairs_reproduce_p0_terms() {
        // the y^{s+1/2} and y^{1/2-s} parts of each GL(2) factor give the
        // P0 terms of the two cells of the class
        let nu = SpectralParam::new(C64::new(7.1, 0.2), C64::new(5.3, -0.1));
        let g = IwasawaPoint::diagonal(1.2, 0.8);
        let p0 = e0_terms(Along::P0, &g, &nu).unwrap();
        let (n1, n2) = (nu.nu1, nu.nu2);
        let lb = lratio(2.0 * n2 - n1).unwrap();
        let l1 = lratio(n1).unwrap();
        let la = lratio(2.0 * n1 - 2.0 * n2).unwrap();
        let l2 = lratio(2.0 * n2).unwrap();
        let (y1, y2) = (g.y1, g.y2);
        let pa_coef = [c(1.0), lb, l1 * la, l1 * l2 * lb];
        let pa_s = [n1 - n2, n2, n2, n1 - n2];
        let pa_h = [n2 + 1.5, n1 - n2 + 1.5, n2 - n1 + 1.5, 1.5 - n2];
        for (k, (_, w0, w1)) in PA_CLASSES.iter().enumerate() {
            let (a, b) = super::super::gl2::gl2_constant_term(y1 / y2, pa_s[k]).unwrap();
            let h = ((y1 * y2).ln() * pa_h[k]).exp();
            let i0 = WeylWord::ALL.iter().position(|x| x == w0).unwrap();
            let i1 = WeylWord::ALL.iter().position(|x| x == w1).unwrap();
            assert!(rel(pa_coef[k] * a * h, p0[i0].value) < 1e-12);
            assert!(rel(pa_coef[k] * b * h, p0[i1].value) < 1e-12);
        }
    }

    #[test]
    fn unfolded_p0_matches_closed() {
        let nu = SpectralParam::real(8.0, 6.0);
        let g = IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9);
        let p = Params::Minimal(nu);
        let t = TruncationSpec::new(30, 16);
        let num = constant_term_numeric(SeriesId::E0, Along::P0, &g, &p, &t).unwrap();
        let cl = constant_term_closed(SeriesId::E0, Along::P0, &g, &p).unwrap();
        for (a, b) in num.terms.iter().zip(&cl.terms) {
            assert_eq!(a.label, b.label);
            assert!(rel(a.value, b.value) < 5e-3, "{}: {} {}", a.label, a.value, b.value);
        }
    }

    #[test]
    fn exponent_fit_recovers_closed_exponents() {
        let nu = SpectralParam::real(8.0, 6.0);
        let t = TruncationSpec::new(6, 4);
        let pts = [(1.0, 1.0), (1.3, 0.9), (0.9, 1.2), (1.1, 1.4)];
        let fit = fit_exponents(&nu, &pts, &t).unwrap();
        for (f, (a, b)) in fit.iter().zip(p0_exponents(&nu)) {
            assert!((f.a - a).abs() < 1e-4 && (f.b - b).abs() < 1e-4, "{f:?} vs {a} {b}");
        }
    }
}
