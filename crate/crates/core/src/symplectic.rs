//! Sp(4) matrices over Q and R, Weyl embeddings, Plücker coordinates,
//! exterior squares and the Iwasawa decomposition.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Q = BigRational;

/// Real 4×4 matrix, row major.
pub type Mat4 = [[f64; 4]; 4];

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn q_to_f64(x: &Q) -> f64 {
    // numerator/denominator may be huge; ratio of f64s is fine here
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMat4 {
    pub e: [[Q; 4]; 4],
}

impl RationalMat4 {
    pub fn zero() -> Self {
        RationalMat4 {
            e: std::array::from_fn(|_| std::array::from_fn(|_| Q::zero())),
        }
    }

    pub fn identity() -> Self {
        Self::diag([q(1), q(1), q(1), q(1)])
    }

    pub fn diag(d: [Q; 4]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.e[i][i] = x;
        }
        m
    }

    pub fn from_i64(a: [[i64; 4]; 4]) -> Self {
        RationalMat4 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| q(a[i][j]))),
        }
    }

    pub fn from_i128(a: [[i128; 4]; 4]) -> Self {
        RationalMat4 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| Q::from_integer(BigInt::from(a[i][j])))
            }),
        }
    }

    pub fn mul(&self, o: &RationalMat4) -> RationalMat4 {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = Q::zero();
                for k in 0..4 {
                    if !self.e[i][k].is_zero() && !o.e[k][j].is_zero() {
                        s += &self.e[i][k] * &o.e[k][j];
                    }
                }
                m.e[i][j] = s;
            }
        }
        m
    }

    pub fn transpose(&self) -> RationalMat4 {
        RationalMat4 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[j][i].clone())),
        }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RationalMat4> {
        let mut a = self.clone();
        let mut inv = Self::identity();
        for c in 0..4 {
            let p = (c..4).find(|&r| !a.e[r][c].is_zero())?;
            a.e.swap(c, p);
            inv.e.swap(c, p);
            let piv = a.e[c][c].clone();
            for j in 0..4 {
                a.e[c][j] = &a.e[c][j] / &piv;
                inv.e[c][j] = &inv.e[c][j] / &piv;
            }
            for r in 0..4 {
                if r != c && !a.e[r][c].is_zero() {
                    let f = a.e[r][c].clone();
                    for j in 0..4 {
                        let t = &f * &a.e[c][j];
                        a.e[r][j] -= t;
                        let t = &f * &inv.e[c][j];
                        inv.e[r][j] -= t;
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_upper_unipotent(&self) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                let x = &self.e[i][j];
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => x.is_one(),
                    std::cmp::Ordering::Greater => {
                        // N0 has the (4,3) entry -n1 below the diagonal
                        x.is_zero() || (i == 3 && j == 2)
                    }
                    std::cmp::Ordering::Less => true,
                }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.e[i][j].is_zero()))
    }

    pub fn to_f64(&self) -> Mat4 {
        std::array::from_fn(|i| std::array::from_fn(|j| q_to_f64(&self.e[i][j])))
    }

    /// Integer entries, if all entries are integers fitting in i128.
    pub fn to_i128(&self) -> Option<[[i128; 4]; 4]> {
        let mut out = [[0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if !self.e[i][j].is_integer() {
                    return None;
                }
                out[i][j] = self.e[i][j].to_integer().to_i128()?;
            }
        }
        Some(out)
    }
}

impl Serialize for RationalMat4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .e
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMat4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(serde::de::Error::custom("expected a 4x4 array"));
        }
        let mut m = RationalMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = Q::from_str(rows[i][j].trim())
                    .map_err(|_| serde::de::Error::custom("bad rational entry"))?;
            }
        }
        Ok(m)
    }
}

pub fn j_matrix() -> RationalMat4 {
    RationalMat4::from_i64([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
}

/// Exact test MᵀJM = J.
pub fn is_symplectic(m: &RationalMat4) -> bool {
    let j = j_matrix();
    m.transpose().mul(&j).mul(m) == j
}

/// Inverse of a symplectic matrix: J⁻¹MᵀJ.
pub fn symplectic_inverse(m: &RationalMat4) -> RationalMat4 {
    let j = j_matrix();
    let jinv = RationalMat4::from_i64([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]);
    jinv.mul(&m.transpose()).mul(&j)
}

/// The unipotent N(n1,n2,n4,n5) with n3 = n1 n5 + n4.
pub fn unipotent_q(n1: &Q, n2: &Q, n4: &Q, n5: &Q) -> RationalMat4 {
    let n3 = n1 * n5 + n4;
    let mut m = RationalMat4::identity();
    m.e[0][1] = n1.clone();
    m.e[0][2] = n2.clone();
    m.e[0][3] = n3;
    m.e[1][2] = n4.clone();
    m.e[1][3] = n5.clone();
    m.e[3][2] = -n1.clone();
    m
}

// ---------------------------------------------------------------------------
// Weyl group

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeylWord {
    Id,
    A,
    B,
    AB,
    BA,
    ABA,
    BAB,
    ABAB,
}

impl WeylWord {
    pub const ALL: [WeylWord; 8] = [
        WeylWord::Id,
        WeylWord::A,
        WeylWord::B,
        WeylWord::AB,
        WeylWord::BA,
        WeylWord::ABA,
        WeylWord::BAB,
        WeylWord::ABAB,
    ];

    /// Reduced word as a string over {a, b}, read left to right.
    pub fn letters(self) -> &'static str {
        match self {
            WeylWord::Id => "",
            WeylWord::A => "a",
            WeylWord::B => "b",
            WeylWord::AB => "ab",
            WeylWord::BA => "ba",
            WeylWord::ABA => "aba",
            WeylWord::BAB => "bab",
            WeylWord::ABAB => "abab",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeylWord::Id => "id",
            WeylWord::A => "s_alpha",
            WeylWord::B => "s_beta",
            WeylWord::AB => "s_alpha_s_beta",
            WeylWord::BA => "s_beta_s_alpha",
            WeylWord::ABA => "s_alpha_s_beta_s_alpha",
            WeylWord::BAB => "s_beta_s_alpha_s_beta",
            WeylWord::ABAB => "long",
        }
    }

    pub fn from_letters(s: &str) -> Option<WeylWord> {
        WeylWord::ALL.into_iter().find(|w| w.letters() == s)
    }

    pub fn len(self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(self) -> bool {
        self == WeylWord::Id
    }

    pub fn int_matrix(self) -> [[i64; 4]; 4] {
        let sa = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        let sb = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]];
        let mut m = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for c in self.letters().chars() {
            let g = if c == 'a' { sa } else { sb };
            m = mul_i64(&m, &g);
        }
        m
    }

    pub fn matrix(self) -> RationalMat4 {
        RationalMat4::from_i64(self.int_matrix())
    }

    pub fn matrix_f64(self) -> Mat4 {
        let m = self.int_matrix();
        std::array::from_fn(|i| std::array::from_fn(|j| m[i][j] as f64))
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeylWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if let Some(w) = WeylWord::ALL.into_iter().find(|w| w.name() == t) {
            return Ok(w);
        }
        let spelled = t
            .replace("s_alpha", "a")
            .replace("s_beta", "b")
            .replace("alpha", "a")
            .replace("beta", "b");
        if t.is_empty() || spelled.chars().any(|c| !matches!(c, 'a' | 'b' | '_' | '-' | ' ' | '.' | '*')) {
            return Err(Error::Invalid(format!("unknown Weyl word '{s}'")));
        }
        let compact: String = spelled.chars().filter(|c| *c == 'a' || *c == 'b').collect();
        match t.as_str() {
            "id" | "identity" | "e" | "1" => return Ok(WeylWord::Id),
            "long" | "w0" => return Ok(WeylWord::ABAB),
            _ => {}
        }
        if compact == "baba" {
            // the longest element has both reduced words
            return Ok(WeylWord::ABAB);
        }
        WeylWord::from_letters(&compact)
            .ok_or_else(|| Error::Invalid(format!("unknown Weyl word '{s}'")))
    }
}

impl Serialize for WeylWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for WeylWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn weyl_matrix(w: WeylWord) -> RationalMat4 {
    w.matrix()
}

pub fn mul_i64(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mul_i128(a: &[[i128; 4]; 4], b: &[[i128; 4]; 4]) -> [[i128; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

// ---------------------------------------------------------------------------
// Plücker coordinates

/// Index pairs of the six wedge coordinates, in the order 12,13,14,23,24,34.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// (v1, v2, v3, v4; v12, v13, v14, v23, v24, v34).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlueckerVec {
    pub v: [i64; 10],
}

impl PlueckerVec {
    pub const V1: usize = 0;
    pub const V2: usize = 1;
    pub const V3: usize = 2;
    pub const V4: usize = 3;
    pub const V12: usize = 4;
    pub const V13: usize = 5;
    pub const V14: usize = 6;
    pub const V23: usize = 7;
    pub const V24: usize = 8;
    pub const V34: usize = 9;

    pub fn new(v: [i64; 10]) -> Self {
        PlueckerVec { v }
    }

    /// From the bottom rows of a matrix.
    pub fn from_rows(r3: &[i64; 4], r4: &[i64; 4]) -> Self {
        let mut v = [0i64; 10];
        v[..4].copy_from_slice(r3);
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            v[4 + k] = r3[i] * r4[j] - r3[j] * r4[i];
        }
        PlueckerVec { v }
    }

    pub fn beta(&self) -> [i64; 4] {
        [self.v[0], self.v[1], self.v[2], self.v[3]]
    }

    pub fn alpha(&self) -> [i64; 6] {
        [self.v[4], self.v[5], self.v[6], self.v[7], self.v[8], self.v[9]]
    }

    pub fn sup_norm(&self) -> i64 {
        self.v.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn neg_beta(&self) -> Self {
        let mut v = self.v;
        for x in v.iter_mut().take(4) {
            *x = -*x;
        }
        PlueckerVec { v }
    }

    pub fn neg_alpha(&self) -> Self {
        let mut v = self.v;
        for x in v.iter_mut().skip(4) {
            *x = -*x;
        }
        PlueckerVec { v }
    }

    /// Residuals of the four incidence relations, the symplectic relation
    /// and the Plücker quadric, as i128.
    pub fn relations(&self) -> [i128; 6] {
        let v: [i128; 10] = std::array::from_fn(|i| self.v[i] as i128);
        let (v1, v2, v3, v4) = (v[0], v[1], v[2], v[3]);
        let (v12, v13, v14, v23, v24, v34) = (v[4], v[5], v[6], v[7], v[8], v[9]);
        [
            v1 * v23 - v2 * v13 + v3 * v12,
            v1 * v24 - v2 * v14 + v4 * v12,
            v1 * v34 - v3 * v14 + v4 * v13,
            v2 * v34 - v3 * v24 + v4 * v23,
            v13 + v24,
            v12 * v34 - v13 * v24 + v14 * v23,
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.relations().iter().all(|&r| r == 0) && self.v.iter().any(|&x| x != 0)
    }

    pub fn is_primitive(&self) -> bool {
        crate::arith::gcd_all(&self.v[..4]) == 1 && crate::arith::gcd_all(&self.v[4..]) == 1
    }
}

impl fmt::Display for PlueckerVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.v;
        write!(
            f,
            "({},{},{},{};{},{},{},{},{},{})",
            v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]
        )
    }
}

/// Exact Plücker data of any matrix: bottom row 3 and the 2×2 minors of
/// rows 3–4.
pub fn pluecker_q(m: &RationalMat4) -> [Q; 10] {
    let r3 = &m.e[2];
    let r4 = &m.e[3];
    std::array::from_fn(|k| {
        if k < 4 {
            r3[k].clone()
        } else {
            let (i, j) = PAIRS[k - 4];
            &r3[i] * &r4[j] - &r3[j] * &r4[i]
        }
    })
}

/// Integral Plücker coordinates of a symplectic matrix.
pub fn pluecker(m: &RationalMat4) -> Result<PlueckerVec> {
    if !is_symplectic(m) {
        return Err(Error::NotSymplectic);
    }
    let pq = pluecker_q(m);
    if pq.iter().all(|x| x.is_zero()) {
        return Err(Error::Degenerate("bottom rows vanish".into()));
    }
    let mut v = [0i64; 10];
    for (k, x) in pq.iter().enumerate() {
        if !x.is_integer() {
            return Err(Error::Invalid(format!(
                "Plücker coordinate {k} is not an integer: {x}"
            )));
        }
        v[k] = x.to_integer().to_i64().ok_or(Error::Overflow)?;
    }
    Ok(PlueckerVec { v })
}

/// Exterior square in the basis order 12,13,14,23,24,34:
/// (g∧g)_{ij,kl} = g_ik g_jl − g_il g_jk.
pub fn exterior_square(m: &RationalMat4) -> [[Q; 6]; 6] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let (i, j) = PAIRS[a];
            let (k, l) = PAIRS[b];
            &m.e[i][k] * &m.e[j][l] - &m.e[i][l] * &m.e[j][k]
        })
    })
}

pub fn exterior_square_f64(m: &Mat4) -> [[f64; 6]; 6] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let (i, j) = PAIRS[a];
            let (k, l) = PAIRS[b];
            m[i][k] * m[j][l] - m[i][l] * m[j][k]
        })
    })
}

// ---------------------------------------------------------------------------
// Real matrices and Iwasawa coordinates

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat_transpose(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn mat_identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

/// max |MᵀJM − J| for a real matrix.
pub fn symplectic_defect(m: &Mat4) -> f64 {
    let j = j_matrix().to_f64();
    let p = mat_mul(&mat_mul(&mat_transpose(m), &j), m);
    let mut d = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            d = d.max((p[r][c] - j[r][c]).abs());
        }
    }
    d
}

pub fn symplectic_inverse_f64(m: &Mat4) -> Mat4 {
    // J⁻¹ Mᵀ J
    let t = mat_transpose(m);
    let j = j_matrix().to_f64();
    let jinv: Mat4 = std::array::from_fn(|r| std::array::from_fn(|c| -j[r][c]));
    mat_mul(&mat_mul(&jinv, &t), &j)
}

pub fn unipotent_f64(n1: f64, n2: f64, n4: f64, n5: f64) -> Mat4 {
    let n3 = n1 * n5 + n4;
    [
        [1.0, n1, n2, n3],
        [0.0, 1.0, n4, n5],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, -n1, 1.0],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwasawaPoint {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub n4: f64,
    pub n5: f64,
    pub y1: f64,
    pub y2: f64,
}

impl IwasawaPoint {
    /// Point with n3 = n1 n5 + n4 filled in.
    pub fn new(n1: f64, n2: f64, n4: f64, n5: f64, y1: f64, y2: f64) -> Self {
        IwasawaPoint {
            n1,
            n2,
            n3: n1 * n5 + n4,
            n4,
            n5,
            y1,
            y2,
        }
    }

    pub fn diagonal(y1: f64, y2: f64) -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, y1, y2)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.n1, self.n2, self.n3, self.n4, self.n5, self.y1, self.y2];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite Iwasawa coordinate".into()));
        }
        if self.y1 <= 0.0 || self.y2 <= 0.0 {
            return Err(Error::Invalid("y1 and y2 must be positive".into()));
        }
        let expect = self.n1 * self.n5 + self.n4;
        if (self.n3 - expect).abs() > 1e-9 * (1.0 + expect.abs()) {
            return Err(Error::Invalid("n3 must equal n1*n5 + n4".into()));
        }
        Ok(())
    }
}

/// N(n)·diag(y1, y2, 1/y1, 1/y2).
pub fn embed_iwasawa(p: &IwasawaPoint) -> Mat4 {
    let IwasawaPoint {
        n1,
        n2,
        n3,
        n4,
        n5,
        y1,
        y2,
    } = *p;
    [
        [y1, n1 * y2, n2 / y1, n3 / y2],
        [0.0, y2, n4 / y1, n5 / y2],
        [0.0, 0.0, 1.0 / y1, 0.0],
        [0.0, 0.0, -n1 / y1, 1.0 / y2],
    ]
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Iwasawa coordinates without the symplecticity check (hot loops).
///
/// Row inner products are K-invariant; with rows r_i of G:
/// y1 = 1/|r3|, y1 y2 = 1/|r3 ∧ r4|, then n1, n4, n5, n2, n3 in turn.
pub fn iwasawa_unchecked(g: &Mat4) -> IwasawaPoint {
    let (r1, r2, r3, r4) = (&g[0], &g[1], &g[2], &g[3]);
    let s33 = dot(r3, r3);
    let s34 = dot(r3, r4);
    let s44 = dot(r4, r4);
    let y1sq = 1.0 / s33;
    let wedge = s33 * s44 - s34 * s34;
    let y1y2 = 1.0 / wedge.sqrt();
    let y1 = y1sq.sqrt();
    let y2 = y1y2 / y1;
    let y2sq = y2 * y2;
    let n1 = -s34 * y1sq;
    let n4 = dot(r2, r3) * y1sq;
    let n5 = y2sq * (dot(r2, r4) + n1 * n4 / y1sq);
    let n2 = dot(r1, r3) * y1sq;
    let n3 = y2sq * (dot(r1, r4) + n1 * n2 / y1sq);
    IwasawaPoint {
        n1,
        n2,
        n3,
        n4,
        n5,
        y1,
        y2,
    }
}

/// Only the (y1, y2) part, which is all the power functions need.
#[inline]
pub fn iwasawa_y(g: &Mat4) -> (f64, f64) {
    let s33 = dot(&g[2], &g[2]);
    let s34 = dot(&g[2], &g[3]);
    let s44 = dot(&g[3], &g[3]);
    let y1 = 1.0 / s33.sqrt();
    let y1y2 = 1.0 / (s33 * s44 - s34 * s34).sqrt();
    (y1, y1y2 / y1)
}

pub fn iwasawa(g: &Mat4) -> Result<IwasawaPoint> {
    let scale = g.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    if g.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("non-finite matrix entry".into()));
    }
    if symplectic_defect(g) > 1e-9 * scale * scale {
        return Err(Error::NotSymplectic);
    }
    if dot(&g[2], &g[2]) == 0.0 {
        return Err(Error::Degenerate("row 3 vanishes".into()));
    }
    Ok(iwasawa_unchecked(g))
}

/// Whether k = [[A, B], [−B, A]] with A + Bi unitary, to `tol`.
pub fn is_in_k(k: &Mat4, tol: f64) -> bool {
    for i in 0..2 {
        for j in 0..2 {
            let (a, b) = (k[i][j], k[i][j + 2]);
            if (k[i + 2][j] + b).abs() > tol || (k[i + 2][j + 2] - a).abs() > tol {
                return false;
            }
        }
    }
    // U = A + iB; check U U* = I
    for i in 0..2 {
        for j in 0..2 {
            let (mut re, mut im) = (0.0, 0.0);
            for l in 0..2 {
                let (ar, ai) = (k[i][l], k[i][l + 2]);
                let (br, bi) = (k[j][l], -k[j][l + 2]);
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            let target = if i == j { 1.0 } else { 0.0 };
            if (re - target).abs() > tol || im.abs() > tol {
                return false;
            }
        }
    }
    true
}

/// The element of K attached to a 2×2 unitary A + Bi.
pub fn k_from_unitary(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> Mat4 {
    let mut k = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            k[i][j] = a[i][j];
            k[i][j + 2] = b[i][j];
            k[i + 2][j] = -b[i][j];
            k[i + 2][j + 2] = a[i][j];
        }
    }
    k
}

/// Quasi-character y1^{a} y2^{b} via real logs.
pub fn y_power(y1: f64, y2: f64, a: crate::C64, b: crate::C64) -> crate::C64 {
    (a * y1.ln() + b * y2.ln()).exp()
}

/// Rational helper: absolute value of a Q as f64.
pub fn q_abs_f64(x: &Q) -> f64 {
    q_to_f64(&x.abs())
}

pub fn q_f64(x: &Q) -> f64 {
    q_to_f64(x)
}
