//! Small exact integer helpers: gcds, factorization, divisor sums and
//! column-style Hermite reduction used for lattice completions.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// gcd of a nonempty slice; `gcd(0, n) = |n|`.
pub fn gcd_all(xs: &[i64]) -> i64 {
    assert!(!xs.is_empty(), "gcd of an empty set is undefined");
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Coefficients x with x·v = gcd(v) for a vector of any length.
pub fn egcd_vec(v: &[i128]) -> (i128, Vec<i128>) {
    let mut g = 0i128;
    let mut coef = vec![0i128; v.len()];
    for (i, &vi) in v.iter().enumerate() {
        let (ng, a, b) = egcd(g, vi);
        for c in coef.iter_mut().take(i) {
            *c *= a;
        }
        coef[i] = b;
        g = ng;
    }
    (g, coef)
}

/// Inverse of a modulo m (m >= 1), if it exists; result in [0, m).
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a.rem_euclid(m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as i64)
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// p-adic valuation of x, capped at `cap` (x = 0 gives `cap`).
pub fn valuation(p: i64, x: i64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut x = x;
    let mut k = 0;
    while x % p == 0 && k < cap {
        x /= p;
        k += 1;
    }
    k
}

/// Column Hermite-style reduction A·U = H with U unimodular and H in
/// column echelon form (pivot of column j in row `pivots[j]`).
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub h: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn new(a: &[Vec<i128>], ncols: usize) -> Option<ColumnEchelon> {
        let m = a.len();
        let mut h: Vec<Vec<i128>> = a.to_vec();
        let mut u: Vec<Vec<i128>> = (0..ncols)
            .map(|i| (0..ncols).map(|j| (i == j) as i128).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut col = 0usize;
        for row in 0..m {
            if col >= ncols {
                break;
            }
            // fold all entries of this row in columns col.. into column col
            for j in col + 1..ncols {
                let a0 = h[row][col];
                let b0 = h[row][j];
                if b0 == 0 {
                    continue;
                }
                let (g, x, y) = egcd(a0, b0);
                let (p, q) = (a0 / g, b0 / g);
                // [col, j] <- [col, j] * [[x, -q], [y, p]]
                col_combine(&mut h, col, j, x, y, -q, p)?;
                col_combine(&mut u, col, j, x, y, -q, p)?;
            }
            if h[row][col] != 0 {
                if h[row][col] < 0 {
                    for r in h.iter_mut() {
                        r[col] = -r[col];
                    }
                    for r in u.iter_mut() {
                        r[col] = -r[col];
                    }
                }
                pivots.push(row);
                col += 1;
            }
        }
        Some(ColumnEchelon { h, u, pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Saturated basis of the integer kernel of A.
    pub fn kernel(&self) -> Vec<Vec<i128>> {
        let n = self.u.len();
        (self.rank()..n)
            .map(|j| (0..n).map(|i| self.u[i][j]).collect())
            .collect()
    }

    /// Some integer solution of A·x = b, if one exists.
    pub fn solve(&self, b: &[i128]) -> Option<Vec<i128>> {
        let n = self.u.len();
        let m = self.h.len();
        let mut y = vec![0i128; n];
        let mut resid: Vec<i128> = b.to_vec();
        for (j, &prow) in self.pivots.iter().enumerate() {
            let piv = self.h[prow][j];
            if resid[prow] % piv != 0 {
                return None;
            }
            y[j] = resid[prow] / piv;
            for (i, r) in resid.iter_mut().enumerate().take(m) {
                *r = r.checked_sub(self.h[i][j].checked_mul(y[j])?)?;
            }
        }
        if resid.iter().any(|&r| r != 0) {
            return None;
        }
        let mut x = vec![0i128; n];
        for (i, xi) in x.iter_mut().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                *xi = xi.checked_add(self.u[i][j].checked_mul(yj)?)?;
            }
        }
        Some(x)
    }
}

fn col_combine(
    m: &mut [Vec<i128>],
    c1: usize,
    c2: usize,
    a: i128,
    b: i128,
    c: i128,
    d: i128,
) -> Option<()> {
    for r in m.iter_mut() {
        let (x, y) = (r[c1], r[c2]);
        r[c1] = x.checked_mul(a)?.checked_add(y.checked_mul(b)?)?;
        r[c2] = x.checked_mul(c)?.checked_add(y.checked_mul(d)?)?;
    }
    Some(())
}

/// Divisor power sum σ_s(n) = Σ_{d|n} d^s for real exponent.
pub fn divisor_sum_f64(s: f64, n: u64) -> f64 {
    divisors(n).iter().map(|&d| (d as f64).powf(s)).sum()
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: num_complex::Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }
    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients_and_divisors() {
        assert_eq!((1..=5).map(totient).sum::<u64>(), 10);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_sum_f64(1.0, 6), 12.0);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }

    #[test]
    fn egcd_vec_combines() {
        let v = [6i128, 10, 15];
        let (g, c) = egcd_vec(&v);
        assert_eq!(g, 1);
        assert_eq!(c.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<i128>(), 1);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = vec![vec![2i128, 4, 6, 0]];
        let e = ColumnEchelon::new(&a, 4).unwrap();
        let k = e.kernel();
        assert_eq!(k.len(), 3);
        for v in &k {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        // unimodular U means the kernel lattice is saturated: solving for
        // the primitive kernel vector (0,0,0,1) must succeed
        assert!(e.solve(&[2]).is_some());
        assert!(e.solve(&[3]).is_none());
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(mod_inv(5, 1), Some(0));
    }
}
