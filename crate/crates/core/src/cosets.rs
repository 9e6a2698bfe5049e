//! Coset representatives for P∩Γ\Γ via Plücker coordinates, completion of
//! Plücker data to integral symplectic matrices, and Bruhat factorisation.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{egcd, egcd_vec, gcd, gcd_all, mod_inv, ColumnEchelon};
use crate::symplectic::{
    is_symplectic, pluecker_q, q, unipotent_q, PlueckerVec, RationalMat4, WeylWord, Q,
};
use crate::{Error, Result};

type IMat = [[i128; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parabolic {
    P0,
    Palpha,
    Pbeta,
}

/// Auxiliary divisor data attached to a representative. Fields that do not
/// occur in a cell's conditions are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RwConstraintWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dq: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
}

// ---------------------------------------------------------------------------
// Completion

fn omega(x: &[i128; 4], y: &[i128; 4]) -> i128 {
    x[0] * y[2] + x[1] * y[3] - x[2] * y[0] - x[3] * y[1]
}

fn check_relations(v: &PlueckerVec) -> Result<()> {
    if v.v.iter().all(|&x| x == 0) {
        return Err(Error::Degenerate("all Plücker coordinates vanish".into()));
    }
    if v.relations().iter().any(|&r| r != 0) {
        return Err(Error::Invalid(format!("{v} violates the V0 relations")));
    }
    if v.v[..4].iter().all(|&x| x == 0) {
        return Err(Error::Degenerate(format!("{v} has vanishing bottom row")));
    }
    Ok(())
}

/// Rows 1 and 2 completing isotropic integral rows (r3, r4) with
/// ω(r3, r4) = 0 to a symplectic basis, when (r3, r4) is saturated.
fn complete_top_rows(r3: [i128; 4], r4: [i128; 4]) -> Result<IMat> {
    // ω(x, r) = x · (r3_3, r3_4, −r3_1, −r3_2)
    let c = |r: &[i128; 4]| vec![r[2], r[3], -r[0], -r[1]];
    let a = vec![c(&r3), c(&r4)];
    let ech = ColumnEchelon::new(&a, 4).ok_or(Error::Overflow)?;
    let to4 = |x: Vec<i128>| -> [i128; 4] { [x[0], x[1], x[2], x[3]] };
    let mut r1 = to4(
        ech.solve(&[1, 0])
            .ok_or_else(|| Error::NotPrimitive("bottom rows are not saturated".into()))?,
    );
    let r2 = to4(
        ech.solve(&[0, 1])
            .ok_or_else(|| Error::NotPrimitive("bottom rows are not saturated".into()))?,
    );
    let lam = omega(&r1, &r2);
    for i in 0..4 {
        r1[i] = r1[i]
            .checked_add(lam.checked_mul(r4[i]).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
    }
    Ok([r1, r2, r3, r4])
}

/// Integral fourth row for primitive Plücker data (ξ-combination on the
/// first nonvanishing block of v1..v3, then the n/d shear).
fn integral_row4(v: &PlueckerVec) -> Result<[i128; 4]> {
    let w: [i128; 10] = std::array::from_fn(|i| v.v[i] as i128);
    let (v1, v2, v3, v4) = (w[0], w[1], w[2], w[3]);
    let (v12, v13, v14, v23, v24, v34) = (w[4], w[5], w[6], w[7], w[8], w[9]);
    let (d, x) = egcd_vec(&[v1, v2, v3]);
    if d == 0 {
        // v1 = v2 = v3 = 0 forces v4 = ±1
        if v4.abs() != 1 {
            return Err(Error::NotPrimitive(format!("{v}")));
        }
        return Ok([-v14 / v4, -v24 / v4, -v34 / v4, 0]);
    }
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let a = [
        -x3 * v13 - x2 * v12,
        x1 * v12 - x3 * v23,
        x2 * v23 + x1 * v13,
        x1 * v14 + x2 * v24 + x3 * v34,
    ];
    // a/d is a rational row 4; shear by n/d · row3 to clear denominators
    let n = if d == 1 {
        0
    } else {
        let inv = mod_inv((v4.rem_euclid(d)) as i64, d as i64)
            .ok_or_else(|| Error::NotPrimitive(format!("{v}")))? as i128;
        (-a[3] * inv).rem_euclid(d)
    };
    let row3 = [v1, v2, v3, v4];
    let mut r4 = [0i128; 4];
    for i in 0..4 {
        let num = a[i] + n * row3[i];
        if num % d != 0 {
            return Err(Error::NotPrimitive(format!("{v}")));
        }
        r4[i] = num / d;
    }
    Ok(r4)
}

/// Integral symplectic matrix with the given primitive Plücker data.
pub fn complete_integral(v: &PlueckerVec) -> Result<IMat> {
    check_relations(v)?;
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(format!("{v}")));
    }
    let r3: [i128; 4] = std::array::from_fn(|i| v.v[i] as i128);
    let r4 = integral_row4(v)?;
    complete_top_rows(r3, r4)
}

/// Rational completion for arbitrary nonzero V0 data.
fn complete_rational(v: &PlueckerVec) -> Result<RationalMat4> {
    check_relations(v)?;
    let w: Vec<Q> = v.v.iter().map(|&x| q(x)).collect();
    let (v12, v13, v14, v23, v24, v34) = (&w[4], &w[5], &w[6], &w[7], &w[8], &w[9]);
    let r3: Vec<Q> = w[..4].to_vec();
    let r4: Vec<Q> = if let Some(k) = (0..3).find(|&k| v.v[k] != 0) {
        let mut xi = [Q::zero(), Q::zero(), Q::zero()];
        xi[k] = Q::one() / &w[k];
        let [x1, x2, x3] = xi;
        vec![
            -(&x3 * v13) - &x2 * v12,
            &x1 * v12 - &x3 * v23,
            &x2 * v23 + &x1 * v13,
            &x1 * v14 + &x2 * v24 + &x3 * v34,
        ]
    } else {
        let v4 = &w[3];
        vec![-(v14 / v4), -(v24 / v4), -(v34 / v4), Q::zero()]
    };
    // rows 1,2: solve ω(r1, r3) = 1, ω(r1, r4) = 0, ω(r2, r3) = 0, ω(r2, r4) = 1
    let c = |r: &[Q]| [r[2].clone(), r[3].clone(), -r[0].clone(), -r[1].clone()];
    let (c3, c4) = (c(&r3), c(&r4));
    let (i, j) = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .find(|&(i, j)| !(&c3[i] * &c4[j] - &c3[j] * &c4[i]).is_zero())
        .ok_or_else(|| Error::Degenerate("bottom rows are dependent".into()))?;
    let det = &c3[i] * &c4[j] - &c3[j] * &c4[i];
    let solve = |b3: Q, b4: Q| -> [Q; 4] {
        let mut x: [Q; 4] = std::array::from_fn(|_| Q::zero());
        x[i] = (&b3 * &c4[j] - &b4 * &c3[j]) / &det;
        x[j] = (&c3[i] * &b4 - &c4[i] * &b3) / &det;
        x
    };
    let mut r1 = solve(Q::one(), Q::zero());
    let r2 = solve(Q::zero(), Q::one());
    let om = |x: &[Q], y: &[Q]| &x[0] * &y[2] + &x[1] * &y[3] - &x[2] * &y[0] - &x[3] * &y[1];
    let lam = om(&r1, &r2);
    for (k, r) in r1.iter_mut().enumerate() {
        *r += &lam * &r4[k];
    }
    let mut m = RationalMat4::zero();
    for k in 0..4 {
        m.e[0][k] = r1[k].clone();
        m.e[1][k] = r2[k].clone();
        m.e[2][k] = r3[k].clone();
        m.e[3][k] = r4[k].clone();
    }
    Ok(m)
}

/// A symplectic matrix whose Plücker data is `v`; integral when
/// `require_integral` (which needs both gcd conditions).
pub fn complete_to_gamma(v: &PlueckerVec, require_integral: bool) -> Result<RationalMat4> {
    if require_integral {
        Ok(RationalMat4::from_i128(complete_integral(v)?))
    } else {
        complete_rational(v)
    }
}

/// Integral symplectic matrix whose bottom wedge r3∧r4 equals the primitive
/// vα (a point of Vα).
pub fn complete_alpha(va: &[i64; 6]) -> Result<IMat> {
    let [v12, v13, v14, v23, v24, v34] = va.map(|x| x as i128);
    if v13 + v24 != 0 || v12 * v34 - v13 * v24 + v14 * v23 != 0 {
        return Err(Error::Invalid(format!("{va:?} is not in V_alpha")));
    }
    if gcd_all(va) != 1 {
        return Err(Error::NotPrimitive(format!("{va:?}")));
    }
    // x lies in the plane iff x ∧ vα = 0 in Λ³
    let rows = vec![
        vec![v23, -v13, v12, 0],
        vec![v24, -v14, 0, v12],
        vec![v34, 0, -v14, v13],
        vec![0, v34, -v24, v23],
    ];
    let ech = ColumnEchelon::new(&rows, 4).ok_or(Error::Overflow)?;
    let k = ech.kernel();
    if k.len() != 2 {
        return Err(Error::Invalid("plane of v_alpha has wrong rank".into()));
    }
    let b1: [i128; 4] = [k[0][0], k[0][1], k[0][2], k[0][3]];
    let mut b2: [i128; 4] = [k[1][0], k[1][1], k[1][2], k[1][3]];
    let wedge: Vec<i128> = crate::symplectic::PAIRS
        .iter()
        .map(|&(i, j)| b1[i] * b2[j] - b1[j] * b2[i])
        .collect();
    let vv = [v12, v13, v14, v23, v24, v34];
    if wedge.iter().zip(vv.iter()).all(|(a, b)| a == &-b) {
        b2 = b2.map(|x| -x);
    } else if wedge.iter().zip(vv.iter()).any(|(a, b)| a != b) {
        return Err(Error::Invalid("plane basis does not reproduce v_alpha".into()));
    }
    let pv = PlueckerVec::from_rows(
        &b1.map(|x| x as i64),
        &b2.map(|x| x as i64),
    );
    complete_integral(&pv)
}

/// Integral symplectic matrix with bottom row 3 equal to the primitive vβ.
pub fn complete_beta(vb: &[i64; 4]) -> Result<IMat> {
    if gcd_all(vb) != 1 {
        return Err(Error::NotPrimitive(format!("{vb:?}")));
    }
    let r3 = vb.map(|x| x as i128);
    let c3 = vec![r3[2], r3[3], -r3[0], -r3[1]];
    let e1 = ColumnEchelon::new(&[c3.clone()], 4).ok_or(Error::Overflow)?;
    let x = e1.solve(&[1]).ok_or(Error::Overflow)?;
    let r1 = [x[0], x[1], x[2], x[3]];
    let c1 = vec![r1[2], r1[3], -r1[0], -r1[1]];
    let e2 = ColumnEchelon::new(&[c3, c1], 4).ok_or(Error::Overflow)?;
    let k = e2.kernel();
    let u = [k[0][0], k[0][1], k[0][2], k[0][3]];
    let pv = PlueckerVec::from_rows(vb, &u.map(|x| x as i64));
    complete_integral(&pv)
}

// ---------------------------------------------------------------------------
// Cell of a Plücker vector and the R_w families

/// Bruhat cell from the zero pattern of the Plücker data.
pub fn cell_of(v: &[Q; 10]) -> WeylWord {
    let nz = |i: usize| !v[i].is_zero();
    use PlueckerVec as P;
    if nz(P::V1) {
        if nz(P::V12) {
            WeylWord::ABAB
        } else {
            WeylWord::ABA
        }
    } else if nz(P::V2) {
        if nz(P::V12) {
            WeylWord::BAB
        } else {
            WeylWord::AB
        }
    } else if nz(P::V4) {
        if nz(P::V14) {
            WeylWord::BA
        } else {
            WeylWord::A
        }
    } else if nz(P::V23) {
        WeylWord::B
    } else {
        WeylWord::Id
    }
}

pub fn cell_of_int(v: &PlueckerVec) -> WeylWord {
    let w: [Q; 10] = std::array::from_fn(|i| q(v.v[i]));
    cell_of(&w)
}

/// Governing modulus (or moduli) of a representative, as in the height
/// convention: the second entry is used only by the long cell.
pub fn governing_moduli(cell: WeylWord, v: &PlueckerVec) -> (i64, i64) {
    use PlueckerVec as P;
    match cell {
        WeylWord::Id => (1, 0),
        WeylWord::A => (v.v[P::V4], 0),
        WeylWord::B => (v.v[P::V23], 0),
        WeylWord::AB => (v.v[P::V2], 0),
        WeylWord::BA => (v.v[P::V14], 0),
        WeylWord::ABA => (v.v[P::V1], 0),
        WeylWord::BAB => (v.v[P::V12], 0),
        WeylWord::ABAB => (v.v[P::V1], v.v[P::V12]),
    }
}

/// Representatives of R_cell whose governing moduli are ≤ bound, in
/// lexicographic order of (modulus, residues).
pub fn enumerate_r(cell: WeylWord, bound: i64) -> Vec<(PlueckerVec, RwConstraintWitness)> {
    assert!(bound >= 1, "bound must be positive");
    let mut out = Vec::new();
    let nw = RwConstraintWitness::default();
    let pv = PlueckerVec::new;
    match cell {
        WeylWord::Id => out.push((pv([0, 0, 1, 0, 0, 0, 0, 0, 0, 1]), nw)),
        WeylWord::A => {
            for v4 in 1..=bound {
                for v3 in 0..v4 {
                    if gcd(v3, v4) == 1 {
                        out.push((pv([0, 0, v3, v4, 0, 0, 0, 0, 0, 1]), nw));
                    }
                }
            }
        }
        WeylWord::B => {
            for v23 in 1..=bound {
                for v34 in 0..v23 {
                    if gcd(v23, v34) == 1 {
                        out.push((pv([0, 0, 1, 0, 0, 0, 0, v23, 0, v34]), nw));
                    }
                }
            }
        }
        WeylWord::AB => {
            for v2 in 1..=bound {
                for v3 in 0..v2 {
                    for v4 in 0..v2 {
                        if gcd_all(&[v2, v3, v4]) != 1 {
                            continue;
                        }
                        let d = gcd(v2, v4);
                        let w = RwConstraintWitness {
                            d: Some(d),
                            ..nw
                        };
                        out.push((pv([0, v2, v3, v4, 0, 0, 0, v2 / d, 0, -v4 / d]), w));
                    }
                }
            }
        }
        WeylWord::BA => {
            for v14 in 1..=bound {
                for v24 in 0..v14 {
                    let d = gcd(v14, v24);
                    if (d * d) % v14 != 0 {
                        continue;
                    }
                    let dd = d * d / v14;
                    for v34 in 0..v14 {
                        if gcd(dd, v34) != 1 {
                            continue;
                        }
                        let w = RwConstraintWitness {
                            d: Some(d),
                            ..nw
                        };
                        out.push((
                            pv([
                                0,
                                0,
                                -v24 / d,
                                v14 / d,
                                0,
                                -v24,
                                v14,
                                -v24 * v24 / v14,
                                v24,
                                v34,
                            ]),
                            w,
                        ));
                    }
                }
            }
        }
        WeylWord::ABA => {
            for v1 in 1..=bound {
                for v2 in 0..v1 {
                    let d = gcd(v1, v2);
                    let (p1, p2) = (v1 / d, v2 / d);
                    for v3 in 0..v1 {
                        for v4 in 0..v1 {
                            if gcd_all(&[v1, v2, v3, v4]) != 1 {
                                continue;
                            }
                            let delta = gcd(d, p1 * v3 + p2 * v4);
                            let dd = d * delta;
                            let w = RwConstraintWitness {
                                d: Some(d),
                                delta: Some(delta),
                                ..nw
                            };
                            out.push((
                                pv([
                                    v1,
                                    v2,
                                    v3,
                                    v4,
                                    0,
                                    -v1 * v2 / dd,
                                    v1 * v1 / dd,
                                    -v2 * v2 / dd,
                                    v1 * v2 / dd,
                                    (v1 * v3 + v2 * v4) / dd,
                                ]),
                                w,
                            ));
                        }
                    }
                }
            }
        }
        WeylWord::BAB => {
            for v12 in 1..=bound {
                for v13 in 0..v12 {
                    for v14 in 0..v12 {
                        out.extend(bab_family(v12, v13, v14));
                    }
                }
            }
        }
        WeylWord::ABAB => {
            for v1 in 1..=bound {
                for v12 in 1..=bound {
                    long_family(v1, v12, |p| out.push((p, nw)));
                }
            }
        }
    }
    out
}

/// All long-cell representatives with the given moduli.
pub fn long_family(v1: i64, v12: i64, mut f: impl FnMut(PlueckerVec)) {
    for v2 in 0..v1 {
        for v3 in 0..v1 {
            for v13 in 0..v12 {
                for v14 in 0..v12 {
                    let num = v1 * v13 + v2 * v14;
                    if num % v12 != 0 {
                        continue;
                    }
                    let v4 = num / v12;
                    let a = v2 * v13 - v3 * v12;
                    let b = v3 * v14 - v4 * v13;
                    if a % v1 != 0 || b % v1 != 0 {
                        continue;
                    }
                    let (v23, v34) = (a / v1, b / v1);
                    if gcd_all(&[v1, v2, v3, v4]) != 1 || gcd_all(&[v12, v13, v14, v23, v34]) != 1 {
                        continue;
                    }
                    f(PlueckerVec::new([v1, v2, v3, v4, v12, v13, v14, v23, -v13, v34]));
                }
            }
        }
    }
}

/// sβsαsβ representatives for fixed (v12, v13, v14), via the two-step
/// particular solution a and the residues r coprime to t.
fn bab_family(v12: i64, v13: i64, v14: i64) -> Vec<(PlueckerVec, RwConstraintWitness)> {
    let d1 = gcd(v12, v14);
    if (v13 * v13) % d1 != 0 {
        return Vec::new();
    }
    let k = v13 * v13 / d1;
    let d0 = gcd_all(&[v12, v13, v14]);
    let dq = d1 / d0;
    let t = d0 / dq;
    debug_assert_eq!(t, gcd(k, d1));
    let (p12, p14) = (v12 / d1, v14 / d1);
    let inv = mod_inv(p14, p12).expect("v'14 is a unit mod v'12");
    // any solution of a·v'14 ≡ −k (mod v'12), then shift by −u·v'12
    let a0 = (-k * inv).rem_euclid(p12);
    let u = (a0 + k * inv) / p12;
    let a1 = a0 - u * p12;
    // shift by n·t/f·v'12 so that t | (a + k/v'14)/v'12
    let f = gcd(t, p12);
    let u1 = (a1 + k * inv) / p12;
    let step = t / f;
    let n = (0..t.max(1))
        .find(|&n| (u1 + n * step) % t == 0)
        .expect("a shift exists");
    let a = a1 + n * step * p12;
    debug_assert!(a % t == 0 && ((a * p14 + k) / p12) % t == 0);
    let mut reps = Vec::new();
    for r in 0..d1 {
        if gcd(r, t) != 1 {
            continue;
        }
        let v23 = (a + r * p12).rem_euclid(v12);
        let num = v13 * v13 + v14 * v23;
        debug_assert_eq!(num % v12, 0);
        let v34 = -num / v12;
        let w = RwConstraintWitness {
            d0: Some(d0),
            d1: Some(d1),
            dq: Some(dq),
            t: Some(t),
            a: Some(a),
            r: Some(r),
            ..Default::default()
        };
        reps.push((
            PlueckerVec::new([0, v12 / d0, v13 / d0, v14 / d0, v12, v13, v14, v23, -v13, v34]),
            w,
        ));
    }
    reps.sort_by_key(|(p, _)| p.v[PlueckerVec::V23]);
    reps
}

// ---------------------------------------------------------------------------
// Translates by Γ_w = N_w(Z)

/// The N_w coordinates of the cell, with the Plücker coordinate used to bound
/// each one (in enumeration order). Coordinates index [n1, n2, n4, n5].
pub fn translate_plan(cell: WeylWord) -> &'static [(usize, usize)] {
    use PlueckerVec as P;
    match cell {
        WeylWord::Id => &[],
        WeylWord::A => &[(0, P::V3)],
        WeylWord::B => &[(3, P::V34)],
        WeylWord::AB => &[(2, P::V3), (3, P::V4)],
        WeylWord::BA => &[(0, P::V3), (1, P::V34)],
        WeylWord::ABA => &[(0, P::V2), (2, P::V4), (1, P::V3)],
        WeylWord::BAB => &[(3, P::V14), (2, P::V3), (1, P::V23)],
        WeylWord::ABAB => &[(0, P::V2), (3, P::V14), (2, P::V13), (1, P::V3)],
    }
}

/// Row vector times N(n1, n2, n4, n5).
pub fn row_times_unipotent(x: &[i64; 4], n: &[i64; 4]) -> [i64; 4] {
    let [n1, n2, n4, n5] = *n;
    let n3 = n1 * n5 + n4;
    [
        x[0],
        x[0] * n1 + x[1],
        x[0] * n2 + x[1] * n4 + x[2] - x[3] * n1,
        x[0] * n3 + x[1] * n5 + x[3],
    ]
}

/// Visit every translate η ∈ N_w(Z) of the rows (r3, r4) whose Plücker data
/// has sup-norm ≤ bound. The callback receives the η coordinates and the
/// translated rows.
pub fn for_each_translate(
    cell: WeylWord,
    r3: &[i64; 4],
    r4: &[i64; 4],
    bound: i64,
    f: &mut impl FnMut(&[i64; 4], &[i64; 4], &[i64; 4]),
) {
    let plan = translate_plan(cell);
    let mut n = [0i64; 4];
    translate_rec(plan, 0, r3, r4, bound, &mut n, f);
}

fn translate_rec(
    plan: &[(usize, usize)],
    level: usize,
    r3: &[i64; 4],
    r4: &[i64; 4],
    bound: i64,
    n: &mut [i64; 4],
    f: &mut impl FnMut(&[i64; 4], &[i64; 4], &[i64; 4]),
) {
    let coord = |n: &[i64; 4], idx: usize| -> i64 {
        let a = row_times_unipotent(r3, n);
        let b = row_times_unipotent(r4, n);
        PlueckerVec::from_rows(&a, &b).v[idx]
    };
    if level == plan.len() {
        let a = row_times_unipotent(r3, n);
        let b = row_times_unipotent(r4, n);
        if PlueckerVec::from_rows(&a, &b).sup_norm() <= bound {
            f(n, &a, &b);
        }
        return;
    }
    let (c, idx) = plan[level];
    n[c] = 0;
    let p0 = coord(n, idx);
    n[c] = 1;
    let s = coord(n, idx) - p0;
    assert!(s != 0, "translate plan has zero slope");
    let (lo, hi) = if s > 0 {
        (div_ceil(-bound - p0, s), div_floor(bound - p0, s))
    } else {
        (div_ceil(bound - p0, s), div_floor(-bound - p0, s))
    };
    for m in lo..=hi {
        n[c] = m;
        translate_rec(plan, level + 1, r3, r4, bound, n, f);
    }
    n[c] = 0;
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

// ---------------------------------------------------------------------------
// Primitive points of V0, Vα, Vβ

/// Visit primitive points of Vβ with sup-norm ≤ bound (both signs).
pub fn for_each_primitive_vb(bound: i64, mut f: impl FnMut(&[i64; 4])) {
    let r = -bound..=bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let v = [a, b, c, d];
                    if v != [0; 4] && gcd_all(&v) == 1 {
                        f(&v);
                    }
                }
            }
        }
    }
}

pub fn primitive_vb(bound: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for_each_primitive_vb(bound, |v| out.push(*v));
    out
}

/// Visit primitive points of Vα with sup-norm ≤ bound (both signs).
pub fn for_each_primitive_va(bound: i64, mut f: impl FnMut(&[i64; 6])) {
    let r = -bound..=bound;
    for v12 in r.clone() {
        for v13 in r.clone() {
            for v14 in r.clone() {
                for v23 in r.clone() {
                    let v24 = -v13;
                    let rhs = -v13 * v13 - v14 * v23;
                    if v12 != 0 {
                        if rhs % v12 != 0 {
                            continue;
                        }
                        let v34 = rhs / v12;
                        if v34.abs() > bound {
                            continue;
                        }
                        let v = [v12, v13, v14, v23, v24, v34];
                        if gcd_all(&v) == 1 {
                            f(&v);
                        }
                    } else if rhs == 0 {
                        for v34 in r.clone() {
                            let v = [v12, v13, v14, v23, v24, v34];
                            if gcd_all(&v) == 1 {
                                f(&v);
                            }
                        }
                    }
                }
            }
        }
    }
}

pub fn primitive_va(bound: i64) -> Vec<[i64; 6]> {
    let mut out = Vec::new();
    for_each_primitive_va(bound, |v| out.push(*v));
    out
}

fn wedge_with(vb: &[i128; 4], x: &[i128; 4]) -> [i128; 6] {
    std::array::from_fn(|k| {
        let (i, j) = crate::symplectic::PAIRS[k];
        vb[i] * x[j] - vb[j] * x[i]
    })
}

/// Visit primitive V0 points with sup-norm ≤ bound. With `canonical`, only
/// one point of each sign class (vβ, vα) ~ (±vβ, ±vα) is visited: the first
/// nonzero entry of vβ and of vα is positive.
pub fn for_each_primitive_v0(bound: i64, canonical: bool, mut f: impl FnMut(&PlueckerVec)) {
    let r = -bound..=bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let vb = [a, b, c, d];
                    if vb == [0; 4] || gcd_all(&vb) != 1 {
                        continue;
                    }
                    if canonical && first_nonzero(&vb) < 0 {
                        continue;
                    }
                    alpha_points(&vb, bound, canonical, &mut f);
                }
            }
        }
    }
}

fn first_nonzero(v: &[i64]) -> i64 {
    v.iter().copied().find(|&x| x != 0).unwrap_or(0)
}

fn alpha_points(vb: &[i64; 4], bound: i64, canonical: bool, f: &mut impl FnMut(&PlueckerVec)) {
    let b128 = vb.map(|x| x as i128);
    // {x : ω(vβ, x) = 0}
    let c = vec![-b128[2], -b128[3], b128[0], b128[1]];
    let ech = ColumnEchelon::new(&[c], 4).expect("small entries");
    let ker = ech.kernel();
    let cols: Vec<[i128; 6]> = ker
        .iter()
        .map(|x| wedge_with(&b128, &[x[0], x[1], x[2], x[3]]))
        .collect();
    // basis of the rank-2 image lattice
    let m: Vec<Vec<i128>> = (0..6).map(|i| cols.iter().map(|col| col[i]).collect()).collect();
    let e2 = ColumnEchelon::new(&m, cols.len()).expect("small entries");
    if e2.rank() != 2 {
        return;
    }
    let mut u: [f64; 6] = std::array::from_fn(|i| e2.h[i][0] as f64);
    let mut w: [f64; 6] = std::array::from_fn(|i| e2.h[i][1] as f64);
    let mut bu: [i128; 6] = std::array::from_fn(|i| e2.h[i][0]);
    let mut bw: [i128; 6] = std::array::from_fn(|i| e2.h[i][1]);
    // Lagrange–Gauss reduction
    let dot6 = |x: &[f64; 6], y: &[f64; 6]| (0..6).map(|i| x[i] * y[i]).sum::<f64>();
    loop {
        if dot6(&u, &u) > dot6(&w, &w) {
            std::mem::swap(&mut u, &mut w);
            std::mem::swap(&mut bu, &mut bw);
        }
        let (uw, uu) = (dot6(&u, &w), dot6(&u, &u));
        if 2.0 * uw.abs() <= uu {
            break;
        }
        let mu = (uw / uu).round();
        let mi = mu as i128;
        for i in 0..6 {
            bw[i] -= mi * bu[i];
            w[i] = bw[i] as f64;
        }
    }
    let radius = (bound as f64) * 6f64.sqrt();
    let m1max = (radius * 2f64.sqrt() / dot6(&u, &u).sqrt()).floor() as i128 + 1;
    let m2max = (radius * 2f64.sqrt() / dot6(&w, &w).sqrt()).floor() as i128 + 1;
    let b = bound as i128;
    for m1 in -m1max..=m1max {
        for m2 in -m2max..=m2max {
            let va: [i128; 6] = std::array::from_fn(|i| m1 * bu[i] + m2 * bw[i]);
            if va.iter().any(|x| x.abs() > b) || va == [0; 6] {
                continue;
            }
            let va64 = va.map(|x| x as i64);
            if gcd_all(&va64) != 1 {
                continue;
            }
            if canonical && first_nonzero(&va64) < 0 {
                continue;
            }
            let mut v = [0i64; 10];
            v[..4].copy_from_slice(vb);
            v[4..].copy_from_slice(&va64);
            f(&PlueckerVec::new(v));
        }
    }
}

pub fn primitive_v0(bound: i64) -> Vec<PlueckerVec> {
    let mut out = Vec::new();
    for_each_primitive_v0(bound, false, |p| out.push(*p));
    out
}

/// The three primitive varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimitiveSpace {
    V0,
    Va,
    Vb,
}

/// Primitive points of the chosen variety as plain integer vectors.
pub fn enumerate_primitive(space: PrimitiveSpace, bound: i64) -> Vec<Vec<i64>> {
    match space {
        PrimitiveSpace::V0 => primitive_v0(bound).into_iter().map(|p| p.v.to_vec()).collect(),
        PrimitiveSpace::Va => primitive_va(bound).into_iter().map(|p| p.to_vec()).collect(),
        PrimitiveSpace::Vb => primitive_vb(bound).into_iter().map(|p| p.to_vec()).collect(),
    }
}

// ---------------------------------------------------------------------------
// Bruhat factorisation

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruhatFactors {
    pub b1: RationalMat4,
    pub w: WeylWord,
    #[serde(rename = "D")]
    pub d: RationalMat4,
    pub b2: RationalMat4,
}

/// D = diag(D1, D2, 1/D1, 1/D2) and the N_w coordinates (n1, n2, n4, n5) of
/// b2, solved from the Plücker data of w·D·b2.
pub fn bruhat_parameters(cell: WeylWord, v: &[Q; 10]) -> Result<(Q, Q, [Q; 4])> {
    use PlueckerVec as P;
    let g = |i: usize| v[i].clone();
    let z = Q::zero;
    let nz = |x: &Q| -> Result<()> {
        if x.is_zero() {
            Err(Error::Invalid("Bruhat pivot vanishes".into()))
        } else {
            Ok(())
        }
    };
    let res = match cell {
        WeylWord::Id => {
            nz(&g(P::V3))?;
            nz(&g(P::V34))?;
            (Q::one() / g(P::V3), g(P::V3) / g(P::V34), [z(), z(), z(), z()])
        }
        WeylWord::A => {
            nz(&g(P::V4))?;
            nz(&g(P::V34))?;
            let d2 = Q::one() / g(P::V4);
            let n1 = -g(P::V3) / g(P::V4);
            (-g(P::V4) / g(P::V34), d2, [n1, z(), z(), z()])
        }
        WeylWord::B => {
            nz(&g(P::V3))?;
            nz(&g(P::V23))?;
            let n5 = -g(P::V34) / g(P::V23);
            (Q::one() / g(P::V3), g(P::V23) / g(P::V3), [z(), z(), z(), n5])
        }
        WeylWord::AB => {
            nz(&g(P::V2))?;
            nz(&g(P::V23))?;
            let n4 = g(P::V3) / g(P::V2);
            let n5 = g(P::V4) / g(P::V2);
            (g(P::V2) / g(P::V23), -g(P::V2), [z(), z(), n4, n5])
        }
        WeylWord::BA => {
            nz(&g(P::V4))?;
            nz(&g(P::V14))?;
            let n1 = -g(P::V3) / g(P::V4);
            let n2 = g(P::V34) / g(P::V14);
            (g(P::V14) / g(P::V4), Q::one() / g(P::V4), [n1, n2, z(), z()])
        }
        WeylWord::ABA => {
            nz(&g(P::V1))?;
            nz(&g(P::V14))?;
            let n1 = g(P::V2) / g(P::V1);
            let n2 = g(P::V3) / g(P::V1);
            let n4 = g(P::V4) / g(P::V1);
            (-g(P::V1), g(P::V1) / g(P::V14), [n1, n2, n4, z()])
        }
        WeylWord::BAB => {
            nz(&g(P::V2))?;
            nz(&g(P::V12))?;
            let n4 = g(P::V3) / g(P::V2);
            let n5 = g(P::V4) / g(P::V2);
            let n2 = -g(P::V23) / g(P::V12);
            (g(P::V12) / g(P::V2), -g(P::V2), [z(), n2, n4, n5])
        }
        WeylWord::ABAB => {
            nz(&g(P::V1))?;
            nz(&g(P::V12))?;
            let n1 = g(P::V2) / g(P::V1);
            let n2 = g(P::V3) / g(P::V1);
            let n5 = g(P::V14) / g(P::V12);
            let n4 = g(P::V4) / g(P::V1) - &n1 * &n5;
            (-g(P::V1), -g(P::V12) / g(P::V1), [n1, n2, n4, n5])
        }
    };
    Ok(res)
}

/// γ = b1·w·D·b2 with b1 ∈ N0, D diagonal and b2 ∈ N_w.
pub fn bruhat_factor(gamma: &RationalMat4) -> Result<BruhatFactors> {
    if !is_symplectic(gamma) {
        return Err(Error::NotSymplectic);
    }
    let v = pluecker_q(gamma);
    if v[..4].iter().all(|x| x.is_zero()) {
        return Err(Error::Degenerate("bottom row vanishes".into()));
    }
    let w = cell_of(&v);
    let (d1, d2, n) = bruhat_parameters(w, &v)?;
    let d = RationalMat4::diag([
        d1.clone(),
        d2.clone(),
        Q::one() / &d1,
        Q::one() / &d2,
    ]);
    let b2 = unipotent_q(&n[0], &n[1], &n[2], &n[3]);
    let wd_b2 = w.matrix().mul(&d).mul(&b2);
    if pluecker_q(&wd_b2) != v {
        return Err(Error::Invalid(
            "Plücker data inconsistent with its Bruhat cell".into(),
        ));
    }
    let b1 = gamma.mul(&crate::symplectic::symplectic_inverse(&wd_b2));
    if !b1.is_upper_unipotent() || !is_symplectic(&b1) {
        return Err(Error::Invalid("left factor is not unipotent".into()));
    }
    Ok(BruhatFactors { b1, w, d, b2 })
}

/// Data of a rational point needed by the unfolded series: |D1|, |D2| and
/// the exact n1, n5 coordinates of b2 as reduced fractions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruhatSummary {
    pub abs_d1: f64,
    pub abs_d2: f64,
    pub n1: (i128, i128),
    pub n5: (i128, i128),
}

fn frac(p: i128, qd: i128) -> (i128, i128) {
    let g = crate::arith::gcd_i128(p, qd);
    let s = if qd < 0 { -1 } else { 1 };
    (s * p / g, s * qd / g)
}

/// Fast integer version of [`bruhat_parameters`] for a representative.
pub fn bruhat_summary(cell: WeylWord, p: &PlueckerVec) -> BruhatSummary {
    use PlueckerVec as P;
    let v = |i: usize| p.v[i] as i128;
    let f = |a: i128, b: i128| (a as f64 / b as f64).abs();
    let zero = (0, 1);
    let (abs_d1, abs_d2, n1, n5) = match cell {
        WeylWord::Id => (f(1, v(P::V3)), f(v(P::V3), v(P::V34)), zero, zero),
        WeylWord::A => (
            f(v(P::V4), v(P::V34)),
            f(1, v(P::V4)),
            frac(-v(P::V3), v(P::V4)),
            zero,
        ),
        WeylWord::B => (
            f(1, v(P::V3)),
            f(v(P::V23), v(P::V3)),
            zero,
            frac(-v(P::V34), v(P::V23)),
        ),
        WeylWord::AB => (
            f(v(P::V2), v(P::V23)),
            f(v(P::V2), 1),
            zero,
            frac(v(P::V4), v(P::V2)),
        ),
        WeylWord::BA => (
            f(v(P::V14), v(P::V4)),
            f(1, v(P::V4)),
            frac(v(P::V24), v(P::V14)),
            zero,
        ),
        WeylWord::ABA => (
            f(v(P::V1), 1),
            f(v(P::V1), v(P::V14)),
            frac(v(P::V2), v(P::V1)),
            zero,
        ),
        WeylWord::BAB => (
            f(v(P::V12), v(P::V2)),
            f(v(P::V2), 1),
            zero,
            frac(v(P::V14), v(P::V12)),
        ),
        WeylWord::ABAB => (
            f(v(P::V1), 1),
            f(v(P::V12), v(P::V1)),
            frac(v(P::V2), v(P::V1)),
            frac(v(P::V14), v(P::V12)),
        ),
    };
    BruhatSummary {
        abs_d1,
        abs_d2,
        n1,
        n5,
    }
}

/// Exact D entries of [`bruhat_parameters`] for integral data.
pub fn bruhat_d_exact(cell: WeylWord, p: &PlueckerVec) -> Result<(Q, Q)> {
    let v: [Q; 10] = std::array::from_fn(|i| q(p.v[i]));
    let (d1, d2, _) = bruhat_parameters(cell, &v)?;
    Ok((d1.abs(), d2.abs()))
}

/// Rational number a/b as a BigRational.
pub fn ratio(a: i128, b: i128) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Solve x·(a, b) = gcd(a, b), exposed for the CLI's diagnostics.
pub fn bezout(a: i64, b: i64) -> (i64, i64, i64) {
    let (g, x, y) = egcd(a as i128, b as i128);
    (g as i64, x as i64, y as i64)
}
