//! Permutations of `{0, .., degree-1}` in image form, with 1-based cycle
//! notation at the text boundary.

use crate::error::{Error, Result};
use std::fmt;

/// A permutation stored as its image vector: `images[i]` is the image of `i`.
///
/// Points are 0-based internally.  Cycle notation in parsing and display is
/// 1-based, matching the textual group grammar.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: u16) -> Perm {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Build from an image vector, checking that it is a bijection.
    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if (img as usize) >= n || seen[img as usize] {
                return Err(Error::Parse(format!(
                    "image vector {:?} is not a permutation of 0..{}",
                    images, n
                )));
            }
            seen[img as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> u16 {
        self.images.len() as u16
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// Product acting as a function composition: `(self * other)(x) = self(other(x))`.
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u16;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u16 == img)
    }

    /// Conjugate of `self` by `g`, i.e. `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.mul(self).mul(&g.inverse())
    }

    pub fn pow(&self, mut k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = base.mul(&acc);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, len| num::integer::lcm(acc, len as u64))
    }

    /// Number of fixed points.
    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i as u16 == img)
            .count()
    }

    fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// Nontrivial cycles, each rotated to start at its minimal point and the
    /// list sorted by first point.  Points are 0-based.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur as u16);
                cur = self.images[cur] as usize;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Parse 1-based cycle notation like `(1 2 3)(4 5)` against a fixed degree.
    /// The empty string and `()` both denote the identity.
    pub fn parse_cycles(degree: u16, text: &str) -> Result<Perm> {
        let text = text.trim();
        let mut images: Vec<u16> = (0..degree).collect();
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in cycle list at {:?}", rest)));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {:?}", text)))?;
            let inner = &rest[1..close];
            rest = rest[close + 1..].trim_start();
            let points: Vec<u16> = inner
                .split_whitespace()
                .map(|tok| {
                    let p: u16 = tok
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad point {:?} in cycle list", tok)))?;
                    if p == 0 || p > degree {
                        return Err(Error::Parse(format!(
                            "point {} out of range 1..={} in cycle list",
                            p, degree
                        )));
                    }
                    Ok(p - 1)
                })
                .collect::<Result<_>>()?;
            if points.is_empty() {
                continue; // "()" is the identity factor
            }
            let mut in_cycle = std::collections::HashSet::new();
            for &p in &points {
                if !in_cycle.insert(p) {
                    return Err(Error::Parse(format!("repeated point {} in a cycle", p + 1)));
                }
            }
            // The cycle maps each listed point to its successor.  Compose onto
            // the partial permutation built so far (disjointness not required,
            // successive cycles act right-to-left as usual).
            let cycle_perm = {
                let mut imgs: Vec<u16> = (0..degree).collect();
                for w in 0..points.len() {
                    imgs[points[w] as usize] = points[(w + 1) % points.len()];
                }
                Perm { images: imgs }
            };
            let current = Perm { images };
            images = current.mul(&cycle_perm).images;
        }
        Ok(Perm { images })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Perm::parse_cycles(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        let id = Perm::parse_cycles(4, "").unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), "()");
        assert!(Perm::parse_cycles(3, "(1 4)").is_err());
        assert!(Perm::parse_cycles(3, "(1 1)").is_err());
    }

    #[test]
    fn composition_order_is_right_to_left() {
        // (1 2) * (2 3) maps 3 -> 2 -> 1.
        let a = Perm::parse_cycles(3, "(1 2)").unwrap();
        let b = Perm::parse_cycles(3, "(2 3)").unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.apply(2), 0);
        assert_eq!(ab.to_string(), "(1 2 3)");
        // Parsing adjacent cycles matches multiplying them in the same order.
        let parsed = Perm::parse_cycles(3, "(1 2)(2 3)").unwrap();
        assert_eq!(parsed, ab);
    }

    #[test]
    fn orders() {
        assert_eq!(Perm::parse_cycles(5, "(1 2 3)(4 5)").unwrap().order(), 6);
        assert_eq!(Perm::identity(4).order(), 1);
        assert_eq!(Perm::parse_cycles(7, "(1 2 3 4 5 6 7)").unwrap().order(), 7);
    }

    fn arb_perm(degree: u16) -> impl Strategy<Value = Perm> {
        Just(())
            .prop_perturb(move |_, mut rng| {
                let mut images: Vec<u16> = (0..degree).collect();
                for i in (1..images.len()).rev() {
                    let j = (rng.next_u32() as usize) % (i + 1);
                    images.swap(i, j);
                }
                Perm { images }
            })
    }

    proptest! {
        #[test]
        fn inverse_round_trip(p in arb_perm(8)) {
            prop_assert!(p.mul(&p.inverse()).is_identity());
            prop_assert!(p.inverse().mul(&p).is_identity());
        }

        #[test]
        fn mul_is_associative(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn pow_matches_repeated_mul(p in arb_perm(6), k in 0u64..20) {
            let mut acc = Perm::identity(6);
            for _ in 0..k {
                acc = p.mul(&acc);
            }
            prop_assert_eq!(p.pow(k), acc);
        }
    }
}
