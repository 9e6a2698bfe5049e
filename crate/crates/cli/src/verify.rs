//! Verification suites. Every check compares two independent routes
//! computed in the same run; nothing is read from stored goldens.

use clap::Args;
use serde_json::{json, Value};

use sp4::arith::gcd;
use sp4::cosets::{
    bruhat_factor, cell_of_int, complete_integral, complete_to_gamma, enumerate_r,
    for_each_primitive_v0, for_each_translate, primitive_v0, primitive_vb,
};
use sp4::eisenstein::{
    constant_term_closed, constant_term_numeric, fourier_closed, fourier_numeric,
    fourier_residue_construction, residue_check, residue_construction, Along, NumericMethod,
    Params, SeriesId, TruncationSpec,
};
use sp4::ramanujan::{
    dirichlet_closed, dirichlet_truncated, local_count_bruteforce, local_count_closed,
    local_dirichlet, r_bruteforce, r_closed, r_sum, sigma_pair, LocalCountInput, RamanujanQuery,
};
use sp4::special::whittaker::{whittaker_closed, whittaker_w, SpectralParam, UniChar};
use sp4::symplectic::{pluecker, IwasawaPoint, PlueckerVec, WeylWord};
use sp4::C64;

use crate::config::RunConfig;
use crate::{Failure, Output};

pub const SUITES: [&str; 6] = ["cosets", "ramanujan", "whittaker", "constterm", "fourier", "residue"];

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// cosets, ramanujan, whittaker, constterm, fourier, residue or all
    #[arg(long, default_value = "all")]
    suite: String,
}

struct Check {
    name: String,
    got: Value,
    want: Value,
    /// Relative error, or 0/1 for exact comparisons.
    metric: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.metric <= self.tol
    }

    fn json(&self) -> Value {
        json!({"name": self.name, "got": self.got, "want": self.want,
               "metric": self.metric, "tol": self.tol, "pass": self.pass()})
    }
}

fn exact<T: PartialEq + serde::Serialize>(name: impl Into<String>, got: T, want: T) -> Check {
    Check {
        name: name.into(),
        metric: if got == want { 0.0 } else { 1.0 },
        got: json!(got),
        want: json!(want),
        tol: 0.0,
    }
}

fn close(name: impl Into<String>, r: sp4::Result<(C64, C64)>, tol: f64) -> Check {
    compare(name.into(), r, tol, false)
}

/// Absolute error, for integer-valued quantities that may vanish.
fn close_abs(name: impl Into<String>, r: sp4::Result<(C64, C64)>, tol: f64) -> Check {
    compare(name.into(), r, tol, true)
}

fn compare(name: String, r: sp4::Result<(C64, C64)>, tol: f64, absolute: bool) -> Check {
    match r {
        Ok((got, want)) => Check {
            name,
            got: json!([got.re, got.im]),
            want: json!([want.re, want.im]),
            metric: (got - want).norm() / if absolute { 1.0 } else { want.norm() },
            tol,
        },
        Err(e) => Check {
            name,
            got: json!({"error": e.to_string()}),
            want: Value::Null,
            metric: f64::INFINITY,
            tol,
        },
    }
}

pub fn run(a: &VerifyArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let names: Vec<&str> = match a.suite.as_str() {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Failure::invalid(format!("unknown suite '{s}'"))),
    };
    let mut suites = Vec::new();
    let (mut passed, mut failed) = (0usize, 0usize);
    for name in names {
        let checks = match name {
            "cosets" => cosets(),
            "ramanujan" => ramanujan(cfg),
            "whittaker" => whittaker(cfg),
            "constterm" => constterm(cfg),
            "fourier" => fourier(cfg),
            _ => residue(cfg),
        };
        let p = checks.iter().filter(|c| c.pass()).count();
        let f = checks.len() - p;
        passed += p;
        failed += f;
        suites.push(json!({
            "suite": name,
            "passed": p,
            "failed": f,
            "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
        }));
    }
    let report = Output::Doc(json!({
        "command": "verify",
        "suite": a.suite,
        "passed": passed,
        "failed": failed,
        "suites": suites,
    }));
    if failed > 0 {
        Err(Failure::verification(report, format!("{failed} check(s) failed")))
    } else {
        Ok(report)
    }
}

// ---------------------------------------------------------------------------

fn cosets() -> Vec<Check> {
    let mut out = Vec::new();
    // φ summed by direct gcd counting
    let phi_sum: usize = (1..=5i64).map(|m| (0..m).filter(|&r| gcd(r, m) == 1).count()).sum();
    out.push(exact("s_alpha count at bound 5", enumerate_r(WeylWord::A, 5).len(), phi_sum));
    out.push(exact("id cell", enumerate_r(WeylWord::Id, 4).len(), 1));
    for w in WeylWord::ALL {
        let reps = enumerate_r(w, 6);
        let (mut trip, mut cell, mut fact) = (0, 0, 0);
        for (v, _) in &reps {
            match complete_to_gamma(v, true).and_then(|m| pluecker(&m).map(|p| (m, p))) {
                Ok((m, p)) => {
                    trip += usize::from(p != *v);
                    fact += usize::from(bruhat_factor(&m).map(|f| f.w) != Ok(w));
                }
                Err(_) => trip += 1,
            }
            cell += usize::from(cell_of_int(v) != w);
        }
        let mut sorted: Vec<PlueckerVec> = reps.iter().map(|r| r.0).collect();
        sorted.sort();
        sorted.dedup();
        out.push(exact(format!("{} round trip failures", w.name()), trip, 0));
        out.push(exact(format!("{} cell mismatches", w.name()), cell, 0));
        out.push(exact(format!("{} bruhat mismatches", w.name()), fact, 0));
        out.push(exact(format!("{} duplicates", w.name()), reps.len() - sorted.len(), 0));
    }
    out.push(exact("vb points at bound 1", primitive_vb(1).len(), 80));
    // V0 at bound 1 against a search of the whole box
    let mut brute = Vec::new();
    for code in 0..3i64.pow(10) {
        let mut c = code;
        let v: [i64; 10] = std::array::from_fn(|_| {
            let d = c % 3 - 1;
            c /= 3;
            d
        });
        let p = PlueckerVec::new(v);
        if p.v[..4].iter().any(|&x| x != 0) && p.is_valid() && p.is_primitive() {
            brute.push(p);
        }
    }
    let mut pts = primitive_v0(1);
    pts.sort();
    brute.sort();
    out.push(exact("v0 at bound 1 equals box search", pts.len(), brute.len()));
    out.push(exact("v0 at bound 1 same points", usize::from(pts != brute), 0));
    // cell representatives and their translates tile the canonical V0 set
    let bound = 3;
    let mut tiles = Vec::new();
    for w in WeylWord::ALL {
        for (p, _) in enumerate_r(w, bound) {
            let Ok(m) = complete_integral(&p) else {
                tiles.push(PlueckerVec::new([0; 10]));
                continue;
            };
            let r3 = m[2].map(|x| x as i64);
            let r4 = m[3].map(|x| x as i64);
            for_each_translate(w, &r3, &r4, bound, &mut |_, a, b| {
                tiles.push(canonical_sign(&PlueckerVec::from_rows(a, b)));
            });
        }
    }
    let mut canon = Vec::new();
    for_each_primitive_v0(bound, true, |p| canon.push(*p));
    tiles.sort();
    canon.sort();
    out.push(exact("translates tile canonical v0 at bound 3", usize::from(tiles != canon), 0));
    out
}

fn first_nonzero(x: &[i64]) -> i64 {
    x.iter().copied().find(|&v| v != 0).unwrap_or(0)
}

fn canonical_sign(p: &PlueckerVec) -> PlueckerVec {
    let mut q = *p;
    if first_nonzero(&q.v[..4]) < 0 {
        q = q.neg_beta();
    }
    if first_nonzero(&q.v[4..]) < 0 {
        q = q.neg_alpha();
    }
    q
}

// ---------------------------------------------------------------------------

fn ramanujan(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let one = r_bruteforce(&RamanujanQuery { v1: 1, v12: 1, n1: 0, n2: 0 }, cfg.ramanujan_budget);
    out.push(close("R(1,1;0,0) = 1", one.map(|r| (r.value, C64::new(1.0, 0.0))), 1e-15));
    let mut bad = 0;
    let mut cases = 0;
    for p in [2u64, 3] {
        for w1 in 0..=3 {
            for w12 in 0..=3 {
                for w2 in 0..=w1 {
                    for w14 in 0..=w12 {
                        let i = LocalCountInput { p, w1, w12, w2, w14 };
                        cases += 1;
                        bad += usize::from(local_count_closed(&i) != local_count_bruteforce(&i));
                    }
                }
            }
        }
    }
    out.push(exact(format!("local counts closed vs enumeration ({cases} cases)"), bad, 0));
    for (v1, v12, n1, n2) in [(4, 6, 2, 3), (6, 4, 0, 5), (5, 3, 1, 0), (6, 6, 0, 0)] {
        let r = r_sum(v1, v12, n1, n2, cfg.ramanujan_budget)
            .map(|s| (s, C64::new(r_closed(v1, v12, n1, n2) as f64, 0.0)));
        out.push(close_abs(format!("divisor sum r({v1},{v12};{n1},{n2})"), r, 1e-9));
    }
    let nu = C64::new(6.0, 0.0);
    for p in [2u64, 3] {
        for (e1, e2) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            let r = local_closed(p, e1, e2, nu, nu).map(|c| (local_dirichlet(p, e1, e2, nu, nu, 10), c));
            out.push(close(format!("local identity p={p} e=({e1},{e2})"), r, 1e-8));
        }
    }
    for (n1, n2) in [(0, 0), (1, 1), (2, 3)] {
        let r = dirichlet_truncated(nu, nu, n1, n2, 12, cfg.ramanujan_budget)
            .and_then(|t| Ok((t, dirichlet_closed(nu, nu, n1, n2, cfg.pole_eps)?)));
        out.push(close(format!("dirichlet series N=12 n=({n1},{n2})"), r, 1e-4));
    }
    out
}

/// Euler factor at p of Σ r_{v1,v12}(p^e1, p^e2) v1^−ν1 v12^−ν2, from the
/// divisor-function side: σ at p times the two non-ζ(ν1)ζ(ν2) denominators.
pub fn local_closed(p: u64, e1: u32, e2: u32, nu1: C64, nu2: C64) -> sp4::Result<C64> {
    let pf = C64::new(p as f64, 0.0);
    let s = sigma_pair(1.5 - nu1 / 2.0 - nu2, 0.5 - nu1 / 2.0, p.pow(e1), p.pow(e2))?;
    Ok(s * (1.0 - pf.powc(1.0 - nu1 - nu2)) * (1.0 - pf.powc(2.0 - nu1 - 2.0 * nu2)))
}

// ---------------------------------------------------------------------------

fn test_point() -> IwasawaPoint {
    IwasawaPoint::new(0.1, 0.2, -0.3, 0.15, 1.1, 0.9)
}

fn whittaker(cfg: &RunConfig) -> Vec<Check> {
    use WeylWord::*;
    let q = cfg.quad();
    let g = test_point();
    let nu = SpectralParam::new(C64::new(8.0, 0.5), C64::new(6.0, -0.25));
    let cases = [
        (Id, UniChar::new(0, 0), 1e-10),
        (A, UniChar::new(1, 0), 1e-5),
        (B, UniChar::new(0, 1), 1e-5),
        (AB, UniChar::new(0, 2), 1e-5),
        (BA, UniChar::new(-1, 0), 1e-5),
        (ABA, UniChar::new(1, 0), 1e-4),
        (BAB, UniChar::new(0, 1), 1e-4),
        (A, UniChar::new(0, 0), 1e-5),
        (ABA, UniChar::new(0, 0), 1e-4),
    ];
    cases
        .iter()
        .map(|&(w, chi, tol)| {
            let r = whittaker_w(w, &g, &nu, chi, &q)
                .and_then(|i| Ok((i.value, whittaker_closed(w, &g, &nu, chi, &q)?)));
            close(format!("W_{} chi=({},{}) integral vs closed", w.name(), chi.t1, chi.t5), r, tol)
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn truncation(cfg: &RunConfig, bound: i64, grid: usize, method: NumericMethod) -> TruncationSpec {
    let mut t = TruncationSpec::new(bound, grid).with_method(method);
    // the checked tolerances are ≥ 5e-3, far above this quadrature floor
    t.quad = cfg.quad();
    t.quad.abs_tol = t.quad.abs_tol.max(1e-10);
    t.quad.rel_tol = t.quad.rel_tol.max(1e-6);
    t.max_terms = cfg.max_terms;
    t
}

fn constterm(cfg: &RunConfig) -> Vec<Check> {
    let g = test_point();
    let p = Params::Minimal(SpectralParam::real(8.0, 6.0));
    let mut out = Vec::new();
    for (along, bound) in [(Along::P0, 20), (Along::Pa, 8), (Along::Pb, 8)] {
        let t = truncation(cfg, bound, 16, NumericMethod::Unfolded);
        let r = constant_term_numeric(SeriesId::E0, along, &g, &p, &t)
            .and_then(|n| Ok((n.total, constant_term_closed(SeriesId::E0, along, &g, &p)?.total)));
        out.push(close(format!("e0 along {} unfolded B={bound}", along.name()), r, 5e-3));
    }
    let t = truncation(cfg, 6, 8, NumericMethod::Grid);
    let pb = Params::Maximal(C64::new(6.0, 0.0));
    let r = constant_term_numeric(SeriesId::Ebeta, Along::P0, &g, &pb, &t)
        .and_then(|n| Ok((n.total, constant_term_closed(SeriesId::Ebeta, Along::P0, &g, &pb)?.total)));
    out.push(close("eb along p0 grid B=6 G=8", r, 5e-3));
    out
}

fn fourier(cfg: &RunConfig) -> Vec<Check> {
    let g = test_point();
    let p = Params::Minimal(SpectralParam::real(8.0, 6.0));
    let q = cfg.quad();
    let mut out = Vec::new();
    for chi in [UniChar::new(1, 0), UniChar::new(0, 1)] {
        let t = truncation(cfg, 15, 16, NumericMethod::Unfolded);
        let r = fourier_numeric(SeriesId::E0, chi, &g, &p, &t)
            .and_then(|n| Ok((n.total, fourier_closed(SeriesId::E0, chi, &g, &p, &q)?.total)));
        out.push(close(format!("e0 chi=({},{}) unfolded B=15", chi.t1, chi.t5), r, 1e-2));
    }
    // trivial character against the constant term, term by term
    let r = fourier_closed(SeriesId::E0, UniChar::default(), &g, &p, &q).and_then(|f| {
        let c = constant_term_closed(SeriesId::E0, Along::P0, &g, &p)?;
        Ok(f.terms.iter().zip(&c.terms).map(|(a, b)| (a.value, b.value)).collect::<Vec<_>>())
    });
    match r {
        Ok(pairs) => {
            for (k, (a, b)) in pairs.into_iter().enumerate() {
                out.push(close(format!("trivial character term {}", WeylWord::ALL[k].name()), Ok((a, b)), 1e-11));
            }
        }
        Err(e) => out.push(close("trivial character", Err(e), 1e-11)),
    }
    out
}

fn residue(cfg: &RunConfig) -> Vec<Check> {
    let g = test_point();
    let nu = C64::new(4.0, 0.0);
    let eps = cfg.residue_eps;
    let mut out = Vec::new();
    match residue_check(&g, nu, eps) {
        Ok(r) => {
            out.push(close("alpha residue at nu=4", Ok((r.alpha_residue, r.alpha_expected)), 1e-4));
            out.push(close("beta residue at nu=4", Ok((r.beta_residue, r.beta_expected)), 1e-4));
        }
        Err(e) => out.push(close("residues at nu=4", Err(e), 1e-4)),
    }
    for id in [SeriesId::Ealpha, SeriesId::Ebeta] {
        for along in [Along::P0, Along::Pa, Along::Pb] {
            let r = residue_construction(id, along, &g, nu, eps).and_then(|b| {
                Ok((b.total, constant_term_closed(id, along, &g, &Params::Maximal(nu))?.total))
            });
            out.push(close(format!("{} along {} as residue", id.name(), along.name()), r, 1e-4));
        }
        for chi in [UniChar::new(2, 0), UniChar::new(0, 3)] {
            let q = cfg.quad();
            let r = fourier_residue_construction(id, chi, &g, nu, eps, &q).and_then(|b| {
                Ok((b.total, fourier_closed(id, chi, &g, &Params::Maximal(nu), &q)?.total))
            });
            out.push(close(format!("{} chi=({},{}) as residue", id.name(), chi.t1, chi.t5), r, 1e-4));
        }
    }
    out
}
