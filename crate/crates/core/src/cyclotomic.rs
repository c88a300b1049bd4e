//! Exact arithmetic with sums of roots of unity.
//!
//! Character values are stored unreduced, as integer combinations
//! `Σ_j c_j ζ_e^j` over all e residues — the form in which eigenvalue
//! multiplicities naturally arrive.  Semantic questions (equality, is this an
//! integer?) go through [`CycloCtx`], which reduces against the e-th
//! cyclotomic polynomial.

use crate::error::{Error, Result};

/// An element of Z[ζ_e] as an unreduced coefficient vector of length e:
/// `Σ_j coeffs[j] · ζ_e^j`.
///
/// Note that equality of coefficient vectors is *not* semantic equality
/// (e.g. `1 + ζ_3 + ζ_3^2` has nonzero coefficients but is zero); use
/// [`CycloCtx::eq`] and friends.
#[derive(Clone, Debug)]
pub struct Cyclo {
    e: u64,
    coeffs: Vec<i128>,
}

impl Cyclo {
    pub fn new(e: u64, coeffs: Vec<i128>) -> Result<Cyclo> {
        if e == 0 || coeffs.len() != e as usize {
            return Err(Error::Internal(format!(
                "coefficient vector of length {} does not match root order {}",
                coeffs.len(),
                e
            )));
        }
        Ok(Cyclo { e, coeffs })
    }

    pub fn zero(e: u64) -> Cyclo {
        Cyclo {
            e,
            coeffs: vec![0; e as usize],
        }
    }

    pub fn integer(e: u64, n: i128) -> Cyclo {
        let mut c = Cyclo::zero(e);
        c.coeffs[0] = n;
        c
    }

    /// ζ_e^j.
    pub fn root_power(e: u64, j: u64) -> Cyclo {
        let mut c = Cyclo::zero(e);
        c.coeffs[(j % e) as usize] = 1;
        c
    }

    pub fn order(&self) -> u64 {
        self.e
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Nonzero coefficients as (exponent, coefficient) pairs.
    pub fn sparse_coeffs(&self) -> Vec<(u64, i128)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j as u64, c))
            .collect()
    }

    fn check_same_order(&self, other: &Cyclo) -> Result<()> {
        if self.e != other.e {
            return Err(Error::Internal(format!(
                "mixed root orders {} and {}",
                self.e, other.e
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Cyclo { e: self.e, coeffs })
    }

    pub fn sub(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Cyclo { e: self.e, coeffs })
    }

    pub fn scale(&self, k: i128) -> Cyclo {
        Cyclo {
            e: self.e,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Product, as cyclic convolution of coefficient vectors (ζ^e = 1).
    pub fn mul(&self, other: &Cyclo) -> Result<Cyclo> {
        self.check_same_order(other)?;
        let e = self.e as usize;
        let mut out = vec![0i128; e];
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[(j + k) % e] += a * b;
            }
        }
        Ok(Cyclo {
            e: self.e,
            coeffs: out,
        })
    }

    /// Complex conjugate: ζ ↦ ζ^{-1}, i.e. coefficient index negation mod e.
    pub fn conj(&self) -> Cyclo {
        let e = self.e as usize;
        let mut out = vec![0i128; e];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(e - j) % e] += c;
        }
        Cyclo {
            e: self.e,
            coeffs: out,
        }
    }
}

/// Reduction context for Z[ζ_e]: the e-th cyclotomic polynomial and the
/// canonical (power-basis) forms of ζ^0, ..., ζ^{e-1}.
#[derive(Clone, Debug)]
pub struct CycloCtx {
    e: u64,
    /// Coefficients of Φ_e, degree φ(e), monic: `[c_0, ..., c_{φ(e)}]`.
    phi: Vec<i128>,
    /// `reduced_powers[k]` = coefficients of x^k mod Φ_e, length φ(e).
    reduced_powers: Vec<Vec<i128>>,
}

impl CycloCtx {
    pub fn new(e: u64) -> Result<CycloCtx> {
        if e == 0 {
            return Err(Error::Domain("root order must be positive".into()));
        }
        let phi = cyclotomic_polynomial(e)?;
        let deg = phi.len() - 1;
        let mut reduced_powers: Vec<Vec<i128>> = Vec::with_capacity(e as usize);
        let mut current = vec![0i128; deg.max(1)];
        if deg == 0 {
            return Err(Error::Internal("cyclotomic polynomial has degree 0".into()));
        }
        current[0] = 1;
        for _k in 0..e {
            reduced_powers.push(current.clone());
            // Multiply by x and reduce mod the monic Φ_e.
            let spill = current[deg - 1];
            for i in (1..deg).rev() {
                current[i] = current[i - 1];
            }
            current[0] = 0;
            if spill != 0 {
                for i in 0..deg {
                    current[i] -= spill * phi[i];
                }
            }
        }
        Ok(CycloCtx {
            e,
            phi,
            reduced_powers,
        })
    }

    pub fn order(&self) -> u64 {
        self.e
    }

    /// Degree of Φ_e, i.e. φ(e).
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi_coeffs(&self) -> &[i128] {
        &self.phi
    }

    /// Canonical power-basis form (length φ(e)); two values are equal iff
    /// their canonical forms agree.
    pub fn canonical(&self, c: &Cyclo) -> Result<Vec<i128>> {
        if c.e != self.e {
            return Err(Error::Internal(format!(
                "value has root order {}, context has {}",
                c.e, self.e
            )));
        }
        let deg = self.degree();
        let mut out = vec![0i128; deg];
        for (j, &coeff) in c.coeffs.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            for (i, &p) in self.reduced_powers[j].iter().enumerate() {
                out[i] += coeff * p;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, c: &Cyclo) -> Result<bool> {
        Ok(self.canonical(c)?.iter().all(|&x| x == 0))
    }

    pub fn eq(&self, a: &Cyclo, b: &Cyclo) -> Result<bool> {
        Ok(self.canonical(a)? == self.canonical(b)?)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self, c: &Cyclo) -> Result<Option<i128>> {
        let can = self.canonical(c)?;
        if can[1..].iter().all(|&x| x == 0) {
            Ok(Some(can[0]))
        } else {
            Ok(None)
        }
    }
}

/// Coefficients of the e-th cyclotomic polynomial, monic, low degree first.
///
/// Built from x^e - 1 = Π_{d | e} Φ_d by exact division: Φ_e is (x^e - 1)
/// divided by all Φ_d for proper divisors d.
fn cyclotomic_polynomial(e: u64) -> Result<Vec<i128>> {
    let mut memo: Vec<(u64, Vec<i128>)> = Vec::new();
    for d in 1..=e {
        if e % d != 0 {
            continue;
        }
        // x^d - 1
        let mut num = vec![0i128; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        let mut quot = num;
        for (dd, poly) in &memo {
            if d % dd == 0 {
                quot = poly_div_exact(&quot, poly)?;
            }
        }
        memo.push((d, quot));
    }
    Ok(memo.pop().expect("e divides e").1)
}

/// Exact division of integer polynomials (den monic); errors if the division
/// leaves a remainder.
fn poly_div_exact(num: &[i128], den: &[i128]) -> Result<Vec<i128>> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    if den[dd] != 1 {
        return Err(Error::Internal("divisor must be monic".into()));
    }
    if dn < dd {
        return Err(Error::Internal("polynomial division underflow".into()));
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; dn - dd + 1];
    for k in (0..=(dn - dd)).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &dci) in den.iter().enumerate() {
                rem[k + i] -= c * dci;
            }
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::Internal("inexact polynomial division".into()));
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_match_known_values() {
        let cases: &[(u64, &[i128])] = &[
            (1, &[-1, 1]),
            (2, &[1, 1]),
            (3, &[1, 1, 1]),
            (4, &[1, 0, 1]),
            (6, &[1, -1, 1]),
            (12, &[1, 0, -1, 0, 1]),
            (5, &[1, 1, 1, 1, 1]),
            (8, &[1, 0, 0, 0, 1]),
        ];
        for (e, expected) in cases {
            let ctx = CycloCtx::new(*e).unwrap();
            assert_eq!(ctx.phi_coeffs(), *expected, "phi_{}", e);
        }
        // Degrees are Euler phi values.
        for (e, phi) in [(9u64, 6usize), (30, 8), (60, 16), (168, 48), (420, 96)] {
            assert_eq!(CycloCtx::new(e).unwrap().degree(), phi, "phi({})", e);
        }
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let ctx = CycloCtx::new(4).unwrap();
        let i = Cyclo::root_power(4, 1);
        let sq = i.mul(&i).unwrap();
        assert!(ctx.eq(&sq, &Cyclo::integer(4, -1)).unwrap());
        assert_eq!(ctx.as_integer(&sq).unwrap(), Some(-1));
        assert_eq!(ctx.as_integer(&i).unwrap(), None);
    }

    #[test]
    fn root_sums_vanish() {
        for e in [2u64, 3, 5, 6, 12, 30] {
            let ctx = CycloCtx::new(e).unwrap();
            let mut sum = Cyclo::zero(e);
            for j in 0..e {
                sum = sum.add(&Cyclo::root_power(e, j)).unwrap();
            }
            assert!(ctx.is_zero(&sum).unwrap(), "sum of {}-th roots", e);
        }
    }

    #[test]
    fn conjugation_inverts_roots() {
        let ctx = CycloCtx::new(5).unwrap();
        let z = Cyclo::root_power(5, 1);
        let prod = z.mul(&z.conj()).unwrap();
        assert_eq!(ctx.as_integer(&prod).unwrap(), Some(1));
    }

    #[test]
    fn real_quadratic_value_squares() {
        // (ζ_8 + ζ_8^{-1})^2 = 2.
        let s = Cyclo::root_power(8, 1).add(&Cyclo::root_power(8, 7)).unwrap();
        let ctx = CycloCtx::new(8).unwrap();
        assert_eq!(ctx.as_integer(&s.mul(&s).unwrap()).unwrap(), Some(2));
        // ζ_5 + ζ_5^4 satisfies x^2 + x - 1 = 0 (golden-ratio conjugate).
        let g = Cyclo::root_power(5, 1).add(&Cyclo::root_power(5, 4)).unwrap();
        let ctx5 = CycloCtx::new(5).unwrap();
        let expr = g
            .mul(&g)
            .unwrap()
            .add(&g)
            .unwrap()
            .sub(&Cyclo::integer(5, 1))
            .unwrap();
        assert!(ctx5.is_zero(&expr).unwrap());
    }

    #[test]
    fn trivial_order_one_context() {
        let ctx = CycloCtx::new(1).unwrap();
        let c = Cyclo::integer(1, 7);
        assert_eq!(ctx.as_integer(&c).unwrap(), Some(7));
        assert!(ctx.eq(&Cyclo::root_power(1, 0), &Cyclo::integer(1, 1)).unwrap());
    }

    #[test]
    fn mixed_orders_are_rejected() {
        let a = Cyclo::root_power(4, 1);
        let b = Cyclo::root_power(6, 1);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
        let ctx = CycloCtx::new(4).unwrap();
        assert!(ctx.canonical(&b).is_err());
    }
}
