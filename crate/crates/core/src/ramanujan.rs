//! Sp(4) Ramanujan sums over long-cell Plücker residues, the local counts
//! |S|, symplectic Schur functions and the associated Dirichlet series.
//!
//! Local count case tree. Three branches of the usual case analysis list
//! a pair of prime powers instead of one value. Exhaustive comparison with
//! direct enumeration shows the count is the smaller of the two in every
//! instance, so [`local_count_closed`] uses
//!
//! * w1 ≤ w12, 2w1 − 2w2 ≤ w14, 2w1 − w2 − w12 < 0, x ≥ 1, w2 + w14 < w12:
//!   min(p^{w2+w14}, p^{w1+d})
//! * same, −2 ≥ x, w2 + w14 > w12: min(p^{⌊(w1+w12+d)/2⌋}, p^{w1+d})
//!
//! with d = min(w1, w14) and x = d + w1 + w12 − 2w2 − 2w14.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, gcd, gcd_all, valuation, ComplexSum};
use crate::cosets::long_family;
use crate::special::whittaker::e;
use crate::special::zeta::{divisor_sigma, zeta};
use crate::{Error, Result, C64};

/// Default cap on v1²·v12² enumerated tuples.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamanujanQuery {
    pub v1: i64,
    pub v12: i64,
    pub n1: i64,
    pub n2: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamanujanValue {
    pub value: C64,
    /// Number of residue tuples contributing.
    pub terms: u64,
    /// Tuples examined, counted against the budget.
    pub budget_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCountInput {
    pub p: u64,
    pub w1: u32,
    pub w12: u32,
    pub w2: u32,
    pub w14: u32,
}

impl LocalCountInput {
    pub fn validate(&self) -> Result<()> {
        if !crate::arith::is_prime(self.p) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        if self.w2 > self.w1 || self.w14 > self.w12 {
            return Err(Error::Invalid("need w2 ≤ w1 and w14 ≤ w12".into()));
        }
        Ok(())
    }
}

/// e(a/b) with the numerator reduced first.
fn e_frac(a: i64, b: i64) -> C64 {
    e(a.rem_euclid(b) as f64 / b as f64)
}

/// R_{v1,v12}(n1, n2): the exponential sum over the long-cell residue data.
pub fn r_bruteforce(q: &RamanujanQuery, budget: u64) -> Result<RamanujanValue> {
    let RamanujanQuery { v1, v12, n1, n2 } = *q;
    if v1 < 1 || v12 < 1 {
        return Err(Error::Invalid("v1 and v12 must be positive".into()));
    }
    let used = (v1 as u64).pow(2).saturating_mul((v12 as u64).pow(2));
    if used > budget {
        return Err(Error::Budget(format!(
            "R_bruteforce at ({v1}, {v12}) needs {used} tuples, budget {budget}"
        )));
    }
    let mut acc = ComplexSum::default();
    let mut terms = 0u64;
    long_family(v1, v12, |p| {
        acc.add(e_frac(n1 * p.v[1], v1) * e_frac(n2 * p.v[6], v12));
        terms += 1;
    });
    Ok(RamanujanValue {
        value: acc.value(),
        terms,
        budget_used: used,
    })
}

/// Size of S(p^{w1}, p^{w12}, p^{w2}, p^{w14}) by enumeration.
pub fn local_count_bruteforce(i: &LocalCountInput) -> u64 {
    let p = i.p as i64;
    let (v1, v12, v2, v14) = (p.pow(i.w1), p.pow(i.w12), p.pow(i.w2), p.pow(i.w14));
    s_count(v1, v12, v2, v14)
}

/// |S(v1, v12, v2, v14)| for arbitrary residues v2, v14.
pub fn s_count(v1: i64, v12: i64, v2: i64, v14: i64) -> u64 {
    let mut c = 0;
    for v13 in 0..v12 {
        let num = v1 * v13 + v2 * v14;
        if num % v12 != 0 {
            continue;
        }
        let v4 = num / v12;
        for v3 in 0..v1 {
            if (v2 * v13 - v3 * v12) % v1 == 0 && (v3 * v14 - v4 * v13) % v1 == 0 {
                c += 1;
            }
        }
    }
    c
}

/// |S| from the case tree (see the module docs for the reconciled branches).
pub fn local_count_closed(i: &LocalCountInput) -> u64 {
    let (w1, w12, w2, w14) = (i.w1 as i64, i.w12 as i64, i.w2 as i64, i.w14 as i64);
    let pw = |k: i64| i.p.pow(k as u32);
    if w2 + w14 < w1.min(w12) {
        return 0;
    }
    let d = w1.min(w14);
    if w1 <= w12 {
        if 2 * w1 - 2 * w2 > w14 {
            return if w12 > w2 + w14 { 0 } else { pw(w2 + w14) };
        }
        let x = d + w1 + w12 - 2 * w2 - 2 * w14;
        let half = (w1 + w12 + d).div_euclid(2);
        if 2 * w1 - w2 - w12 >= 0 {
            if x >= 1 {
                2 * pw(w2 + w14)
            } else if x >= -1 {
                pw(w1 + w12 - w2 - w14 + d)
            } else {
                pw(half)
            }
        } else if x >= 1 {
            if w2 + w14 >= w12 {
                2 * pw(w2 + w14)
            } else {
                pw(w2 + w14).min(pw(w1 + d))
            }
        } else if x >= -1 {
            if w2 + w14 >= w12 {
                pw(w1 + w12 - w2 - w14 + d)
            } else {
                pw(w1 + d)
            }
        } else if w2 + w14 > w12 {
            pw(half).min(pw(w1 + d))
        } else if w2 + w14 == w12 {
            pw(w1 + w12 - w2 - w14 + d)
        } else {
            pw(w1 + d)
        }
    } else if w12 >= w2 && w14 <= 2 * w12 - 2 * w2 {
        pw(w2 + w14)
    } else {
        pw(w12 + w14 / 2)
    }
}

/// r_{v1,v12} = Σ_{u1|v1, u12|v12} R_{u1,u12}.
pub fn r_sum(v1: i64, v12: i64, n1: i64, n2: i64, budget: u64) -> Result<C64> {
    let mut acc = ComplexSum::default();
    for u1 in divisors(v1 as u64) {
        for u12 in divisors(v12 as u64) {
            let q = RamanujanQuery {
                v1: u1 as i64,
                v12: u12 as i64,
                n1,
                n2,
            };
            acc.add(r_bruteforce(&q, budget)?.value);
        }
    }
    Ok(acc.value())
}

/// r_{v1,v12} as the gcd-free sum Σ_{v2, v14} |S(v1, v12, v2, v14)| e(·).
pub fn r_unconstrained(v1: i64, v12: i64, n1: i64, n2: i64) -> C64 {
    let mut acc = ComplexSum::default();
    for v2 in 0..v1 {
        for v14 in 0..v12 {
            let s = s_count(v1, v12, v2, v14);
            if s > 0 {
                acc.add(e_frac(n1 * v2, v1) * e_frac(n2 * v14, v12) * s as f64);
            }
        }
    }
    acc.value()
}

/// Σ over v mod p^w with ord_p(v) = w' of e(v·n/p^w), where ord_p(n) = e
/// (e = None for n = 0).
fn charsum(p: i64, w: i64, wp: i64, e: Option<i64>) -> i64 {
    let full = |wp: i64| if wp == w { 1 } else { p.pow((w - wp - 1) as u32) * (p - 1) };
    match e {
        None => full(wp),
        Some(e) if e >= w => full(wp),
        Some(e) => {
            if wp == w {
                1
            } else if wp >= w - e {
                p.pow((w - wp - 1) as u32) * (p - 1)
            } else if wp == w - e - 1 {
                -p.pow((w - wp - 1) as u32)
            } else {
                0
            }
        }
    }
}

/// r_{p^{w1}, p^{w12}}(n1, n2) from the closed local counts.
pub fn r_local_closed(p: u64, w1: u32, w12: u32, n1: i64, n2: i64) -> i64 {
    let pi = p as i64;
    let ord = |n: i64| (n != 0).then(|| valuation(pi, n, 64) as i64);
    let (e1, e2) = (ord(n1), ord(n2));
    let mut total = 0i64;
    for w2 in 0..=w1 {
        for w14 in 0..=w12 {
            let s = local_count_closed(&LocalCountInput { p, w1, w12, w2, w14 }) as i64;
            if s == 0 {
                continue;
            }
            total += s
                * charsum(pi, w1 as i64, w2 as i64, e1)
                * charsum(pi, w12 as i64, w14 as i64, e2);
        }
    }
    total
}

/// r_{v1,v12}(n1, n2) as a product of local factors.
pub fn r_closed(v1: i64, v12: i64, n1: i64, n2: i64) -> i64 {
    let mut primes: Vec<u64> = factorize(v1 as u64)
        .into_iter()
        .chain(factorize(v12 as u64))
        .map(|(p, _)| p)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let w1 = valuation(p as i64, v1, 64);
            let w12 = valuation(p as i64, v12, 64);
            r_local_closed(p, w1, w12, n1, n2)
        })
        .product()
}

// ---------------------------------------------------------------------------
// Symplectic Schur functions

type Laurent = BTreeMap<(i32, i32), i64>;

fn antisym(l1: i32, l2: i32) -> Laurent {
    // (x1^a − x1^−a)(x2^b − x2^−b) − (x2^a − x2^−a)(x1^b − x1^−b)
    let mut m = Laurent::new();
    let mut add = |k: (i32, i32), c: i64| {
        *m.entry(k).or_insert(0) += c;
    };
    let (a, b) = (l1 + 2, l2 + 1);
    for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let c = sa * sb;
        add((sa as i32 * a, sb as i32 * b), c);
        add((sb as i32 * b, sa as i32 * a), -c);
    }
    m.retain(|_, c| *c != 0);
    m
}

/// Weight multiplicities of Sp_{λ1,λ2} as a Laurent polynomial in (x1, x2),
/// by exact division of the two alternants.
pub fn schur_expansion(l1: u32, l2: u32) -> Vec<((i32, i32), i64)> {
    assert!(l1 >= l2, "need λ1 ≥ λ2");
    let den = antisym(0, 0);
    let (&lead, &lc) = den.iter().next_back().expect("nonzero denominator");
    let mut rem = antisym(l1 as i32, l2 as i32);
    let mut quot = Laurent::new();
    while let Some((&k, &c)) = rem.iter().next_back() {
        assert!(c % lc == 0, "alternant division is exact");
        let qk = (k.0 - lead.0, k.1 - lead.1);
        let qc = c / lc;
        *quot.entry(qk).or_insert(0) += qc;
        for (&dk, &dc) in &den {
            let key = (dk.0 + qk.0, dk.1 + qk.1);
            let v = rem.entry(key).or_insert(0);
            *v -= qc * dc;
            if *v == 0 {
                rem.remove(&key);
            }
        }
    }
    quot.retain(|_, c| *c != 0);
    quot.into_iter().collect()
}

/// Sp_{λ1,λ2}(x1, x2) as the ratio of alternants, falling back to the
/// monomial expansion where the denominator degenerates.
pub fn symplectic_schur(l1: u32, l2: u32, x1: C64, x2: C64) -> Result<C64> {
    if l1 < l2 {
        return Err(Error::Invalid("need λ1 ≥ λ2 ≥ 0".into()));
    }
    if x1.norm() == 0.0 || x2.norm() == 0.0 {
        return Err(Error::Invalid("Schur arguments must be nonzero".into()));
    }
    let f = |x: C64, k: i32| x.powi(k) - x.powi(-k);
    let den = f(x1, 2) * f(x2, 1) - f(x2, 2) * f(x1, 1);
    let scale = (x1.norm().max(1.0 / x1.norm()) * x2.norm().max(1.0 / x2.norm())).powi(3);
    if den.norm() > 1e-6 * scale {
        let (a, b) = (l1 as i32 + 2, l2 as i32 + 1);
        let num = f(x1, a) * f(x2, b) - f(x2, a) * f(x1, b);
        return Ok(num / den);
    }
    Ok(schur_expansion(l1, l2)
        .into_iter()
        .map(|((a, b), c)| x1.powi(a) * x2.powi(b) * c as f64)
        .sum())
}

/// σ_{a,b}(n1, n2) = Π_p p^{(e1+e2)a + e1 b} Sp_{e1+e2, e1}(p^a, p^b).
pub fn sigma_pair(a: C64, b: C64, n1: u64, n2: u64) -> Result<C64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Invalid("σ needs positive arguments".into()));
    }
    let mut primes: Vec<u64> = factorize(n1)
        .into_iter()
        .chain(factorize(n2))
        .map(|(p, _)| p)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut out = C64::new(1.0, 0.0);
    for p in primes {
        let e1 = valuation(p as i64, n1 as i64, 64);
        let e2 = valuation(p as i64, n2 as i64, 64);
        let pf = C64::new(p as f64, 0.0);
        let pa = pf.powc(a);
        let pb = pf.powc(b);
        let pre = pf.powc(a * (e1 + e2) as f64 + b * e1 as f64);
        out *= pre * symplectic_schur(e1 + e2, e1, pa, pb)?;
    }
    Ok(out)
}

/// The Dirichlet series Σ v1^{−ν1} v12^{−ν2} R_{v1,v12}(n1, n2) in closed
/// form. Arguments of ζ within `eps` of 1 are rejected.
pub fn dirichlet_closed(nu1: C64, nu2: C64, n1: i64, n2: i64, eps: f64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let guard = |s: C64| -> Result<C64> {
        if (s - one).norm() < eps {
            return Err(Error::Pole(format!("ζ argument {s} is within {eps} of 1")));
        }
        zeta(s)
    };
    let den = guard(nu1)? * guard(nu2)? * guard(nu1 + nu2 - 1.0)? * guard(nu1 + 2.0 * nu2 - 2.0)?;
    let tail = |x: C64| -> Result<C64> {
        Ok(x * guard(nu1 + nu2 - 2.0)? * guard(nu1 + 2.0 * nu2 - 3.0)?)
    };
    let num = match (n1 != 0, n2 != 0) {
        (true, true) => sigma_pair(
            1.5 - nu1 / 2.0 - nu2,
            0.5 - nu1 / 2.0,
            n1.unsigned_abs(),
            n2.unsigned_abs(),
        )?,
        (true, false) => tail(divisor_sigma(one - nu1, n1.unsigned_abs()) * guard(nu2 - 1.0)?)?,
        (false, true) => tail(divisor_sigma(one - nu2, n2.unsigned_abs()) * guard(nu1 - 1.0)?)?,
        (false, false) => tail(guard(nu1 - 1.0)? * guard(nu2 - 1.0)?)?,
    };
    Ok(num / den)
}

/// Σ_{v1, v12 ≤ N} v1^{−ν1} v12^{−ν2} R_{v1,v12}(n1, n2), rows evaluated in
/// parallel and reduced in ascending (v1, v12) order.
pub fn dirichlet_truncated(nu1: C64, nu2: C64, n1: i64, n2: i64, n: i64, budget: u64) -> Result<C64> {
    if n < 1 {
        return Err(Error::Invalid("truncation N must be positive".into()));
    }
    let rows: Vec<Result<Vec<C64>>> = (1..=n)
        .into_par_iter()
        .map(|v1| {
            (1..=n)
                .map(|v12| {
                    let r = r_bruteforce(&RamanujanQuery { v1, v12, n1, n2 }, budget)?;
                    let w = C64::new(v1 as f64, 0.0).powc(-nu1) * C64::new(v12 as f64, 0.0).powc(-nu2);
                    Ok(r.value * w)
                })
                .collect()
        })
        .collect();
    let mut acc = ComplexSum::default();
    for row in rows {
        for t in row? {
            acc.add(t);
        }
    }
    Ok(acc.value())
}

/// Local side of the Dirichlet identity at one prime:
/// Σ_{w1, w12 ≤ wmax} r_{p^{w1}, p^{w12}}(p^{e1}, p^{e2}) p^{−w1ν1 − w12ν2}.
pub fn local_dirichlet(p: u64, e1: u32, e2: u32, nu1: C64, nu2: C64, wmax: u32) -> C64 {
    let pf = C64::new(p as f64, 0.0);
    let (n1, n2) = ((p as i64).pow(e1), (p as i64).pow(e2));
    let mut acc = ComplexSum::default();
    for w1 in 0..=wmax {
        for w12 in 0..=wmax {
            let r = r_local_closed(p, w1, w12, n1, n2) as f64;
            acc.add(pf.powc(-(nu1 * w1 as f64 + nu2 * w12 as f64)) * r);
        }
    }
    acc.value()
}

/// Whether (m1·m2, v1·v12) = 1, the hypothesis of the frequency invariance.
pub fn coprime_frequencies(m1: i64, m2: i64, v1: i64, v12: i64) -> bool {
    gcd(m1 * m2, v1 * v12) == 1
}

/// gcd conditions of a long-cell residue tuple, exposed for diagnostics.
pub fn tuple_is_primitive(v: &[i64; 10]) -> bool {
    gcd_all(&v[..4]) == 1 && gcd_all(&[v[4], v[5], v[6], v[7], v[9]]) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trivial_sum() {
        let q = RamanujanQuery { v1: 1, v12: 1, n1: 5, n2: -3 };
        let r = r_bruteforce(&q, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, c(1.0));
        assert_eq!(r.terms, 1);
    }

    #[test]
    fn budget_guard() {
        let q = RamanujanQuery { v1: 200, v12: 200, n1: 0, n2: 0 };
        assert!(matches!(r_bruteforce(&q, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn schur_small_characters() {
        let (x1, x2) = (c(1.7), C64::new(0.4, 0.3));
        let s10 = symplectic_schur(1, 0, x1, x2).unwrap();
        let want = x1 + 1.0 / x1 + x2 + 1.0 / x2;
        assert!((s10 - want).norm() < 1e-12);
        let s11 = symplectic_schur(1, 1, x1, x2).unwrap();
        let want = x1 * x2 + x1 / x2 + x2 / x1 + 1.0 / (x1 * x2) + 1.0;
        assert!((s11 - want).norm() < 1e-12);
        assert!((symplectic_schur(0, 0, x1, x2).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn schur_dimension_at_identity() {
        // dimensions 1, 4, 5, 10, 16
        for ((l1, l2), dim) in [((0, 0), 1.0), ((1, 0), 4.0), ((1, 1), 5.0), ((2, 0), 10.0), ((2, 1), 16.0)] {
            let v = symplectic_schur(l1, l2, c(1.0), c(1.0)).unwrap();
            assert_eq!(v, c(dim));
        }
    }

    #[test]
    fn local_count_examples() {
        let i = |p, w1, w12, w2, w14| LocalCountInput { p, w1, w12, w2, w14 };
        assert_eq!(local_count_closed(&i(2, 0, 0, 0, 0)), 1);
        assert_eq!(local_count_closed(&i(3, 1, 1, 0, 0)), 0);
        assert_eq!(local_count_bruteforce(&i(2, 2, 1, 1, 1)), 2);
        assert_eq!(local_count_closed(&i(2, 2, 1, 1, 1)), 2);
    }

    #[test]
    fn r_sum_agrees_with_gcd_free_sum() {
        for v1 in 1..=6 {
            for v12 in 1..=6 {
                let a = r_sum(v1, v12, 2, 3, DEFAULT_BUDGET).unwrap();
                let b = r_unconstrained(v1, v12, 2, 3);
                assert!((a - b).norm() < 1e-9, "{v1} {v12}");
                assert!((a.re - r_closed(v1, v12, 2, 3) as f64).abs() < 1e-9);
            }
        }
    }
}
