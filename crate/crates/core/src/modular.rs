//! Arithmetic and linear algebra over a prime field F_q.
//!
//! The character table is first computed modulo a prime q chosen so that
//! q ≡ 1 (mod e) for the group exponent e (so F_q contains the e-th roots of
//! unity) and q > 2|G| (so small integers lift uniquely).  Everything here is
//! plain u64 arithmetic; q stays far below 2^32 so products never overflow.

use crate::error::{Error, Result};

/// Deterministic trial-division primality test; adequate for the sizes used
/// here (q stays below 10^7).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime q with q ≡ 1 (mod exponent) and q > 2·order.
pub fn dixon_prime(exponent: u64, order: u64) -> Result<u64> {
    if exponent == 0 || order == 0 {
        return Err(Error::Domain("exponent and order must be positive".into()));
    }
    // Start at the least q ≡ 1 (mod e) strictly above 2·order.
    let floor = 2 * order;
    let mut q = floor / exponent * exponent + 1;
    while q <= floor {
        q += exponent;
    }
    loop {
        if is_prime(q) {
            return Ok(q);
        }
        q = q
            .checked_add(exponent)
            .ok_or_else(|| Error::Internal("prime search overflowed".into()))?;
    }
}

/// The prime field F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<PrimeField> {
        if !is_prime(q) {
            return Err(Error::Domain(format!("{} is not prime", q)));
        }
        Ok(PrimeField { q })
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a % self.q * (b % self.q) % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.q;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.q == 0 {
            return Err(Error::Internal("division by zero in F_q".into()));
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// A generator of the multiplicative group F_q^*.
    pub fn primitive_root(&self) -> Result<u64> {
        let phi = self.q - 1;
        let factors = distinct_prime_factors(phi);
        'candidate: for g in 2..self.q {
            for &p in &factors {
                if self.pow(g, phi / p) == 1 {
                    continue 'candidate;
                }
            }
            return Ok(g);
        }
        Err(Error::Internal(format!("no primitive root mod {}", self.q)))
    }

    /// A primitive e-th root of unity; requires e | q - 1.
    pub fn root_of_unity(&self, e: u64) -> Result<u64> {
        if e == 0 || (self.q - 1) % e != 0 {
            return Err(Error::Domain(format!(
                "{} does not divide q - 1 = {}",
                e,
                self.q - 1
            )));
        }
        let g = self.primitive_root()?;
        Ok(self.pow(g, (self.q - 1) / e))
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense matrix over F_q, stored as rows.
pub type ModMatrix = Vec<Vec<u64>>;

pub fn mat_vec(f: &PrimeField, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        })
        .collect()
}

/// Rank of a matrix (rows are destroyed by elimination on a copy).
pub fn rank(f: &PrimeField, m: &[Vec<u64>]) -> usize {
    let mut a: ModMatrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                let (head, tail) = if i < r {
                    let (h, t) = a.split_at_mut(r);
                    (&mut h[i], &t[0])
                } else {
                    let (h, t) = a.split_at_mut(i);
                    (&mut t[0], &h[r])
                };
                for (x, &y) in head.iter_mut().zip(tail.iter()) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Basis of the kernel {x : M x = 0} of a matrix whose rows are equations.
pub fn kernel_basis(f: &PrimeField, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    if cols == 0 {
        return Vec::new();
    }
    let mut a: ModMatrix = m.to_vec();
    // Reduced row echelon form, tracking pivot columns.
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                let row_r = a[r].clone();
                for (x, &y) in a[i].iter_mut().zip(row_r.iter()) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row_idx, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(a[row_idx][free]);
        }
        basis.push(v);
    }
    basis
}

/// Determinant by Gaussian elimination.
pub fn determinant(f: &PrimeField, m: &[Vec<u64>]) -> u64 {
    let n = m.len();
    let mut a: ModMatrix = m.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(c, piv);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        let inv = f.inv(a[c][c]).expect("pivot is nonzero");
        for i in (c + 1)..n {
            if a[i][c] != 0 {
                let factor = f.mul(a[i][c], inv);
                let row_c = a[c].clone();
                for (x, &y) in a[i].iter_mut().zip(row_c.iter()) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
    }
    det
}

/// Characteristic polynomial det(xI - A), monic, as coefficients
/// `[c_0, ..., c_n]` with `c_n = 1`.  Computed by evaluating the determinant
/// at n+1 sample points and interpolating (requires q > n).
pub fn char_poly(f: &PrimeField, a: &[Vec<u64>]) -> Result<Vec<u64>> {
    let n = a.len();
    if f.q <= n as u64 {
        return Err(Error::Internal(
            "field too small for characteristic-polynomial interpolation".into(),
        ));
    }
    let points: Vec<u64> = (0..=n as u64).collect();
    let values: Vec<u64> = points
        .iter()
        .map(|&x| {
            let mut shifted = a.to_vec();
            for (i, row) in shifted.iter_mut().enumerate() {
                // xI - A
                for entry in row.iter_mut() {
                    *entry = f.neg(*entry);
                }
                row[i] = f.add(row[i], x);
            }
            determinant(f, &shifted)
        })
        .collect();
    lagrange_interpolate(f, &points, &values)
}

/// Coefficients of the unique polynomial of degree < points.len() through the
/// given (point, value) pairs.
fn lagrange_interpolate(f: &PrimeField, points: &[u64], values: &[u64]) -> Result<Vec<u64>> {
    let n = points.len();
    let mut coeffs = vec![0u64; n];
    for i in 0..n {
        // Numerator polynomial prod_{j != i} (x - x_j), built incrementally.
        let mut num = vec![0u64; n];
        num[0] = 1;
        let mut deg = 0;
        let mut denom = 1u64;
        for j in 0..n {
            if j == i {
                continue;
            }
            denom = f.mul(denom, f.sub(points[i], points[j]));
            // num *= (x - x_j)
            for k in (0..=deg).rev() {
                let c = num[k];
                num[k + 1] = f.add(num[k + 1], c);
                num[k] = f.mul(c, f.neg(points[j]));
            }
            deg += 1;
        }
        let scale = f.mul(values[i], f.inv(denom)?);
        for k in 0..n {
            coeffs[k] = f.add(coeffs[k], f.mul(scale, num[k]));
        }
    }
    Ok(coeffs)
}

/// All distinct roots in F_q of a polynomial given by coefficients
/// `[c_0, ..., c_n]`, found by direct scan (q is small).
pub fn poly_roots(f: &PrimeField, coeffs: &[u64]) -> Vec<u64> {
    (0..f.q)
        .filter(|&x| {
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| f.add(f.mul(acc, x), c))
                == 0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_primes_for_known_groups() {
        // (exponent, order) -> least prime ≡ 1 mod exponent exceeding 2·order.
        for (e, n, expected) in [
            (12, 24, 61),     // S4
            (30, 60, 151),    // A5
            (3, 3, 7),        // C3
            (168, 336, 673),  // SL2(7)
            (330, 660, 1321), // PSL2(11)
            (60, 360, 1021),  // A6
            (420, 2520, 5881),// A7
            (1, 1, 3),        // C1
        ] {
            assert_eq!(dixon_prime(e, n).unwrap(), expected, "e={} n={}", e, n);
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        let f = PrimeField::new(61).unwrap();
        let z = f.root_of_unity(12).unwrap();
        let mut pow = 1u64;
        for k in 1..=12u64 {
            pow = f.mul(pow, z);
            if k < 12 {
                assert_ne!(pow, 1, "order divides {}", k);
            }
        }
        assert_eq!(pow, 1);
        assert!(f.root_of_unity(7).is_err());
    }

    #[test]
    fn primitive_root_generates() {
        for q in [7u64, 61, 151, 673] {
            let f = PrimeField::new(q).unwrap();
            let g = f.primitive_root().unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut pow = 1u64;
            for _ in 0..(q - 1) {
                pow = f.mul(pow, g);
                seen.insert(pow);
            }
            assert_eq!(seen.len() as u64, q - 1, "g={} mod {}", g, q);
        }
    }

    #[test]
    fn kernel_and_rank() {
        let f = PrimeField::new(7).unwrap();
        // Rank-1 matrix: rows proportional.
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        assert_eq!(rank(&f, &m), 1);
        let ker = kernel_basis(&f, &m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let img = mat_vec(&f, &m, v);
            assert!(img.iter().all(|&x| x == 0));
        }
        // Invertible matrix has trivial kernel.
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rank(&f, &id), 2);
        assert!(kernel_basis(&f, &id).is_empty());
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        let f = PrimeField::new(61).unwrap();
        // Companion matrix of x^3 - 2x - 5.
        let a = vec![
            vec![0, 0, 5],
            vec![1, 0, 2],
            vec![0, 1, 0],
        ];
        let cp = char_poly(&f, &a).unwrap();
        // x^3 + 0x^2 - 2x - 5 -> coefficients [-5, -2, 0, 1] mod 61.
        assert_eq!(cp, vec![f.reduce_i64(-5), f.reduce_i64(-2), 0, 1]);
    }

    #[test]
    fn char_poly_of_diagonal_matrix_and_roots() {
        let f = PrimeField::new(61).unwrap();
        let a = vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 9]];
        let cp = char_poly(&f, &a).unwrap();
        let roots = poly_roots(&f, &cp);
        assert_eq!(roots, vec![3, 9]);
        // Eigenspace dimensions via kernels.
        let shift = |lambda: u64| -> Vec<Vec<u64>> {
            a.iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r[i] = f.sub(r[i], lambda);
                    r
                })
                .collect()
        };
        assert_eq!(kernel_basis(&f, &shift(3)).len(), 2);
        assert_eq!(kernel_basis(&f, &shift(9)).len(), 1);
    }

    #[test]
    fn determinant_values() {
        let f = PrimeField::new(11).unwrap();
        assert_eq!(determinant(&f, &[vec![2, 1], vec![1, 2]]), 3);
        assert_eq!(determinant(&f, &[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(determinant(&f, &[vec![0, 1], vec![1, 0]]), f.neg(1));
    }
}
