//! Power functions, the Ψ_w table, and truncated evaluation of the series
//! by coset sums (direct) and by Epstein sums over primitive points (alt).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_convergence, Params, SeriesId, TruncationSpec};
use crate::arith::ComplexSum;
use crate::cosets::{
    complete_alpha, complete_beta, complete_integral, enumerate_r, for_each_primitive_v0,
    for_each_primitive_va, for_each_primitive_vb, for_each_translate, row_times_unipotent,
};
use crate::special::whittaker::SpectralParam;
use crate::symplectic::{
    embed_iwasawa, exterior_square_f64, iwasawa_y, mat_mul, IwasawaPoint, Mat4, PlueckerVec,
    WeylWord,
};
use crate::{Error, Result, C64};

/// I0(g, ν) = y1^{ν1+2} y2^{2ν2−ν1+1}.
pub fn i0(y1: f64, y2: f64, nu: &SpectralParam) -> C64 {
    let (a, b) = i0_exponents(nu);
    (a * y1.ln() + b * y2.ln()).exp()
}

fn i0_exponents(nu: &SpectralParam) -> (C64, C64) {
    (nu.nu1 + 2.0, 2.0 * nu.nu2 - nu.nu1 + 1.0)
}

/// Exponents of Ψ_w(D) = |D1|^{a} |D2|^{b}, so that
/// I0(w D η g) = Ψ_w(D) I0(w η g) for D = diag(D1, D2, 1/D1, 1/D2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiTable {
    exps: [(C64, C64); 8],
}

impl PsiTable {
    pub fn new(nu: &SpectralParam) -> PsiTable {
        let p = nu.nu1 + 2.0;
        let q = 2.0 * nu.nu2 - nu.nu1 + 1.0;
        let r = nu.nu1 - 2.0 * nu.nu2 - 1.0;
        let exps = WeylWord::ALL.map(|w| match w {
            WeylWord::Id => (p, q),
            WeylWord::A => (q, p),
            WeylWord::B => (p, r),
            WeylWord::AB => (q, -p),
            WeylWord::BA => (r, p),
            WeylWord::ABA => (-p, q),
            WeylWord::BAB => (r, -p),
            WeylWord::ABAB => (-p, r),
        });
        PsiTable { exps }
    }

    pub fn exponents(&self, w: WeylWord) -> (C64, C64) {
        self.exps[index(w)]
    }

    pub fn eval(&self, w: WeylWord, abs_d1: f64, abs_d2: f64) -> C64 {
        let (a, b) = self.exponents(w);
        (a * abs_d1.ln() + b * abs_d2.ln()).exp()
    }
}

pub(crate) fn index(w: WeylWord) -> usize {
    WeylWord::ALL.iter().position(|&x| x == w).expect("word in ALL")
}

pub fn psi_w(w: WeylWord, d1: f64, d2: f64, nu: &SpectralParam) -> Result<C64> {
    if d1 == 0.0 || d2 == 0.0 || !d1.is_finite() || !d2.is_finite() {
        return Err(Error::Degenerate("D must be invertible".into()));
    }
    Ok(PsiTable::new(nu).eval(w, d1.abs(), d2.abs()))
}

/// Which exponent pair the Epstein form of E0 uses. `Displayed` uses the
/// alternative exponent −ν1/2 − 1 on the vβ norm; it is retained only so the
/// discrepancy can be demonstrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsteinConvention {
    Resolved,
    Displayed,
}

/// Exponents (eβ, eα) with E0 term |vβ g|^{2eβ} |vα ∧²g|^{2eα}.
pub fn epstein_exponents(nu: &SpectralParam, conv: EpsteinConvention) -> (C64, C64) {
    let ea = nu.nu1 / 2.0 - nu.nu2 - 0.5;
    let eb = match conv {
        EpsteinConvention::Resolved => nu.nu2 - nu.nu1 - 0.5,
        EpsteinConvention::Displayed => -nu.nu1 / 2.0 - 1.0,
    };
    (eb, ea)
}

fn norm_sq_beta(vb: &[i64], g: &Mat4) -> f64 {
    (0..4)
        .map(|j| {
            let x: f64 = (0..4).map(|i| vb[i] as f64 * g[i][j]).sum();
            x * x
        })
        .sum()
}

fn norm_sq_alpha(va: &[i64], g2: &[[f64; 6]; 6]) -> f64 {
    (0..6)
        .map(|j| {
            let x: f64 = (0..6).map(|i| va[i] as f64 * g2[i][j]).sum();
            x * x
        })
        .sum()
}

/// One Epstein term of the requested series at the point `p` of the
/// relevant primitive variety. For E0 `p` is a V0 point; for Eα only the
/// vα part is used and for Eβ only vβ.
pub fn epstein_term(
    id: SeriesId,
    p: &PlueckerVec,
    g: &Mat4,
    g2: &[[f64; 6]; 6],
    params: &Params,
    conv: EpsteinConvention,
) -> Result<C64> {
    let nb = || norm_sq_beta(&p.v[..4], g);
    let na = || norm_sq_alpha(&p.v[4..], g2);
    let v = match id {
        SeriesId::E0 => {
            let (eb, ea) = epstein_exponents(&params.minimal()?, conv);
            (eb * nb().ln() + ea * na().ln()).exp()
        }
        SeriesId::Ealpha => {
            let nu = params.maximal()?;
            ((-nu / 2.0 - 0.75) * na().ln()).exp()
        }
        SeriesId::Ebeta => {
            let nu = params.maximal()?;
            ((-nu / 2.0 - 1.0) * nb().ln()).exp()
        }
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Degenerate("zero norm in Epstein term".into()));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: C64,
    /// Number of cosets (direct) or primitive points (alt) summed.
    pub terms: u64,
    pub bound: i64,
    /// Contribution of the outermost height shell, a crude tail indicator.
    pub last_shell: C64,
}

/// Power function on the Iwasawa y-part of a matrix for each series.
#[derive(Clone, Copy, Debug)]
struct Power {
    a: C64,
    b: C64,
}

impl Power {
    fn new(id: SeriesId, params: &Params) -> Result<Power> {
        Ok(match id {
            SeriesId::E0 => {
                let (a, b) = i0_exponents(&params.minimal()?);
                Power { a, b }
            }
            SeriesId::Ealpha => {
                let e = params.maximal()? + 1.5;
                Power { a: e, b: e }
            }
            SeriesId::Ebeta => Power {
                a: params.maximal()? + 2.0,
                b: C64::new(0.0, 0.0),
            },
        })
    }

    #[inline]
    fn at(&self, y1: f64, y2: f64) -> C64 {
        (self.a * y1.ln() + self.b * y2.ln()).exp()
    }

    #[inline]
    fn real(&self) -> Option<(f64, f64)> {
        (self.a.im == 0.0 && self.b.im == 0.0).then_some((self.a.re, self.b.re))
    }
}

fn to_i64(m: &[[i128; 4]; 4]) -> Result<[[i64; 4]; 4]> {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = i64::try_from(m[i][j]).map_err(|_| Error::Overflow)?;
        }
    }
    Ok(out)
}

fn first_nonzero(v: &[i64]) -> i64 {
    v.iter().copied().find(|&x| x != 0).unwrap_or(0)
}

type IMat64 = [[i64; 4]; 4];

/// Cell representatives of P0∩Γ\Γ/N_w(ℤ) for E0, completed to integral
/// symplectic matrices.
fn e0_reps(bound: i64) -> Result<Vec<(WeylWord, IMat64)>> {
    let mut out = Vec::new();
    for w in WeylWord::ALL {
        let reps = enumerate_r(w, bound);
        let gammas: Vec<Result<IMat64>> = reps
            .par_iter()
            .map(|(p, _)| to_i64(&complete_integral(p)?))
            .collect();
        for gm in gammas {
            out.push((w, gm?));
        }
    }
    Ok(out)
}

/// Visit the translates γη (η ∈ N_w(ℤ)) of one representative whose
/// Plücker data has sup-norm ≤ bound, with their height.
fn e0_translates(w: WeylWord, gm: &IMat64, bound: i64, f: &mut impl FnMut(i64, &IMat64)) {
    for_each_translate(w, &gm[2], &gm[3], bound, &mut |n, a, b| {
        let h = PlueckerVec::from_rows(a, b).sup_norm();
        let m = [
            row_times_unipotent(&gm[0], n),
            row_times_unipotent(&gm[1], n),
            *a,
            *b,
        ];
        f(h, &m);
    });
}

/// Coset representatives of Pα∩Γ\Γ or Pβ∩Γ\Γ (one per sign class of vα
/// or vβ) with their heights.
fn maximal_cosets(id: SeriesId, bound: i64, max_terms: u64) -> Result<Vec<(i64, IMat64)>> {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    let mut over = false;
    let mut keep = |v: &[i64]| {
        if first_nonzero(v) > 0 {
            if pts.len() as u64 >= max_terms {
                over = true;
            } else {
                pts.push(v.to_vec());
            }
        }
    };
    match id {
        SeriesId::Ealpha => for_each_primitive_va(bound, |v| keep(v)),
        SeriesId::Ebeta => for_each_primitive_vb(bound, |v| keep(v)),
        SeriesId::E0 => return Err(Error::Invalid("E0 uses cell representatives".into())),
    }
    if over {
        return Err(Error::Budget(format!("more than {max_terms} cosets")));
    }
    pts.par_iter()
        .map(|v| {
            let m = if id == SeriesId::Ealpha {
                complete_alpha(&[v[0], v[1], v[2], v[3], v[4], v[5]])?
            } else {
                complete_beta(&[v[0], v[1], v[2], v[3]])?
            };
            let h = v.iter().map(|x| x.abs()).max().unwrap_or(0);
            Ok((h, to_i64(&m)?))
        })
        .collect()
}

const CHUNK: usize = 64;

struct Shells {
    b: Vec<ComplexSum>,
    count: u64,
}

impl Shells {
    fn new(bound: i64) -> Shells {
        Shells {
            b: vec![ComplexSum::default(); bound as usize + 1],
            count: 0,
        }
    }

    fn add(&mut self, h: i64, v: C64) {
        self.b[h as usize].add(v);
        self.count += 1;
    }

    /// Merge partial shell sums in the given order; the order is fixed by
    /// the chunking, not by the thread schedule.
    fn merge(bound: i64, parts: &[Shells]) -> (C64, C64, u64) {
        let mut shells = vec![ComplexSum::default(); bound as usize + 1];
        let mut count = 0;
        for p in parts {
            for (s, x) in shells.iter_mut().zip(&p.b) {
                s.add(x.value());
            }
            count += p.count;
        }
        let mut total = ComplexSum::default();
        for s in &shells {
            total.add(s.value());
        }
        (total.value(), shells[bound as usize].value(), count)
    }
}

/// Truncated coset sum Σ_{γ ∈ P∩Γ\Γ, ht γ ≤ B} I(γ g). Each γ is an
/// integral symplectic matrix and I is read off the Iwasawa form of γg.
pub fn eval_direct(
    id: SeriesId,
    g: &IwasawaPoint,
    params: &Params,
    t: &TruncationSpec,
) -> Result<SeriesValue> {
    g.validate()?;
    t.validate()?;
    check_convergence(id, params)?;
    let power = Power::new(id, params)?;
    let gm = embed_iwasawa(g);
    let bound = t.height_bound;
    let term = |m: &IMat64| {
        let mf: Mat4 = m.map(|r| r.map(|x| x as f64));
        let (y1, y2) = iwasawa_y(&mat_mul(&mf, &gm));
        power.at(y1, y2)
    };
    let parts: Vec<Shells> = if id == SeriesId::E0 {
        let reps = e0_reps(bound)?;
        reps.par_chunks(CHUNK)
            .map(|chunk| {
                let mut s = Shells::new(bound);
                for (w, gmat) in chunk {
                    e0_translates(*w, gmat, bound, &mut |h, m| s.add(h, term(m)));
                }
                s
            })
            .collect()
    } else {
        let reps = maximal_cosets(id, bound, t.max_terms)?;
        reps.par_chunks(CHUNK * 64)
            .map(|chunk| {
                let mut s = Shells::new(bound);
                for (h, m) in chunk {
                    s.add(*h, term(m));
                }
                s
            })
            .collect()
    };
    let (value, last_shell, terms) = Shells::merge(bound, &parts);
    if terms > t.max_terms {
        return Err(Error::Budget(format!("more than {} cosets", t.max_terms)));
    }
    Ok(SeriesValue {
        value,
        terms,
        bound,
        last_shell,
    })
}

/// Epstein form: ¼ Σ over all primitive V0 points for E0, ½ Σ over ±vα
/// or ±vβ for the maximal series. Points are enumerated one per sign
/// class and expanded to the whole class here.
pub fn eval_alt(
    id: SeriesId,
    g: &IwasawaPoint,
    params: &Params,
    t: &TruncationSpec,
    conv: EpsteinConvention,
) -> Result<SeriesValue> {
    g.validate()?;
    t.validate()?;
    check_convergence(id, params)?;
    let gm = embed_iwasawa(g);
    let g2 = exterior_square_f64(&gm);
    let bound = t.height_bound;
    let mut s = Shells::new(bound);
    let mut err = None;
    let mut visit = |p: &PlueckerVec, variants: &[PlueckerVec]| {
        for v in variants {
            match epstein_term(id, v, &gm, &g2, params, conv) {
                Ok(x) => s.add(p.sup_norm(), x),
                Err(e) => err = Some(e),
            }
        }
    };
    let weight = match id {
        SeriesId::E0 => {
            for_each_primitive_v0(bound, true, |p| {
                let nb = p.neg_beta();
                visit(p, &[*p, nb, p.neg_alpha(), nb.neg_alpha()]);
            });
            0.25
        }
        SeriesId::Ealpha => {
            for_each_primitive_va(bound, |v| {
                if first_nonzero(v) > 0 {
                    let mut a = [0i64; 10];
                    a[4..].copy_from_slice(v);
                    let p = PlueckerVec::new(a);
                    visit(&p, &[p, p.neg_alpha()]);
                }
            });
            0.5
        }
        SeriesId::Ebeta => {
            for_each_primitive_vb(bound, |v| {
                if first_nonzero(v) > 0 {
                    let mut a = [0i64; 10];
                    a[..4].copy_from_slice(v);
                    let p = PlueckerVec::new(a);
                    visit(&p, &[p, p.neg_beta()]);
                }
            });
            0.5
        }
    };
    if let Some(e) = err {
        return Err(e);
    }
    let (sum, last, terms) = Shells::merge(bound, &[s]);
    Ok(SeriesValue {
        value: sum * weight,
        terms,
        bound,
        last_shell: last * weight,
    })
}


/// Bottom rows of the truncated coset list as floats, for evaluating the
/// truncated series at many points.
#[derive(Clone, Debug)]
pub struct CosetTable {
    rows: Vec<[f64; 8]>,
    power: Power,
}

impl CosetTable {
    pub fn build(id: SeriesId, params: &Params, bound: i64, max_terms: u64) -> Result<CosetTable> {
        check_convergence(id, params)?;
        let power = Power::new(id, params)?;
        let mats: Vec<IMat64> = if id == SeriesId::E0 {
            let mut v = Vec::new();
            for (w, gm) in e0_reps(bound)? {
                e0_translates(w, &gm, bound, &mut |_, m| v.push(*m));
                if v.len() as u64 > max_terms {
                    return Err(Error::Budget(format!("more than {max_terms} cosets")));
                }
            }
            v
        } else {
            maximal_cosets(id, bound, max_terms)?.into_iter().map(|(_, m)| m).collect()
        };
        let rows = mats
            .into_iter()
            .map(|m| {
                let mut r = [0.0; 8];
                for j in 0..4 {
                    r[j] = m[2][j] as f64;
                    r[4 + j] = m[3][j] as f64;
                }
                r
            })
            .collect();
        Ok(CosetTable { rows, power })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Truncated series at the matrix h.
    pub fn eval(&self, h: &Mat4) -> C64 {
        let real = self.power.real();
        let mut acc = ComplexSum::default();
        let mut racc = crate::arith::KahanSum::default();
        for r in &self.rows {
            let mut a = [0.0; 4];
            let mut b = [0.0; 4];
            for j in 0..4 {
                for k in 0..4 {
                    a[j] += r[k] * h[k][j];
                    b[j] += r[4 + k] * h[k][j];
                }
            }
            let s33: f64 = a.iter().map(|x| x * x).sum();
            let s44: f64 = b.iter().map(|x| x * x).sum();
            let s34: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let wedge = s33 * s44 - s34 * s34;
            // y1 = s33^{-1/2}, y1 y2 = wedge^{-1/2}
            match real {
                Some((pa, pb)) => {
                    racc.add((-0.5 * ((pa - pb) * s33.ln() + pb * wedge.ln())).exp())
                }
                None => {
                    let (y1, y12) = (1.0 / s33.sqrt(), 1.0 / wedge.sqrt());
                    acc.add(self.power.at(y1, y12 / y1))
                }
            }
        }
        acc.value() + racc.value()
    }
}
