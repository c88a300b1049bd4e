//! Exact complex character tables of finite groups.
//!
//! The table is computed modulo a prime q ≡ 1 (mod e) with q > 2|G| (e the
//! group exponent): the class-sum multiplication coefficients give r commuting
//! r×r matrices over F_q whose common eigenvectors are the central character
//! vectors, one per irreducible.  Degrees are recovered from the second
//! orthogonality of the eigenvectors, and the actual character values are
//! lifted to exact cyclotomic integers by an inverse DFT over the power map
//! (the lifted coefficients are eigenvalue multiplicities, which are small
//! non-negative integers, so the modular lift is exact).  Full row and column
//! orthogonality are then verified in exact cyclotomic arithmetic.

use crate::classes::ClassData;
use crate::cyclotomic::{Cyclo, CycloCtx};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modular::{self, PrimeField};

/// One irreducible complex character, as exact values per conjugacy class.
#[derive(Clone, Debug)]
pub struct Character {
    degree: u64,
    /// Value on each class, in class order.
    values: Vec<Cyclo>,
    /// Canonical (power-basis) form of each value; rows are sorted and
    /// compared by these.
    canonical: Vec<Vec<i128>>,
    is_trivial: bool,
}

impl Character {
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclo {
        &self.values[class]
    }

    pub fn canonical_value(&self, class: usize) -> &[i128] {
        &self.canonical[class]
    }

    pub fn is_trivial(&self) -> bool {
        self.is_trivial
    }
}

/// The full character table of a finite group, with its class data and the
/// cyclotomic reduction context for the group exponent.
#[derive(Debug)]
pub struct CharacterTable {
    group: FiniteGroup,
    classes: ClassData,
    ctx: CycloCtx,
    chars: Vec<Character>,
    prime: u64,
}

impl CharacterTable {
    pub fn build(group: FiniteGroup) -> Result<CharacterTable> {
        let classes = ClassData::new(&group)?;
        let e = classes.exponent();
        let order = group.order() as u64;
        let prime = modular::dixon_prime(e, order)?;
        let f = PrimeField::new(prime)?;
        let r = classes.count();

        // Class matrices M_i with (M_i)[j][k] = a_{ijk}; the vector
        // w = (|K_k| χ(g_k) / χ(1))_k of any irreducible satisfies
        // M_i w = w_i w, so the r common eigenvectors enumerate the
        // irreducibles.
        let a = classes.multiplication_coefficients(&group)?;
        let mats: Vec<Vec<Vec<u64>>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| a[i][j][k] % prime).collect())
                    .collect()
            })
            .collect();

        let eigenvectors = common_eigenbasis(&f, &mats)?;

        let size_inv: Vec<u64> = classes
            .sizes()
            .iter()
            .map(|&s| f.inv(s as u64 % prime))
            .collect::<Result<Vec<_>>>()?;

        // Per character: degree, then values mod q.
        let mut mod_rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(r);
        for v in &eigenvectors {
            if v[0] == 0 {
                return Err(Error::Internal(
                    "central character vanishes on the identity class".into(),
                ));
            }
            let norm = f.inv(v[0])?;
            let w: Vec<u64> = v.iter().map(|&x| f.mul(x, norm)).collect();
            // 1/d^2 = (1/|G|) Σ_k w_k w_{k*} / |K_k|.
            let mut s = 0u64;
            for k in 0..r {
                let term = f.mul(f.mul(w[k], w[classes.inverse_class(k)]), size_inv[k]);
                s = f.add(s, term);
            }
            if s == 0 {
                return Err(Error::Internal("degenerate norm in degree recovery".into()));
            }
            let d_sq = f.mul(order % prime, f.inv(s)?);
            // q > 2|G| ≥ 2d^2, so the residue is d^2 itself.
            let d = exact_sqrt(d_sq).ok_or_else(|| {
                Error::Internal(format!("recovered degree^2 = {} is not a square", d_sq))
            })?;
            let row: Vec<u64> = (0..r)
                .map(|k| f.mul(f.mul(d % prime, w[k]), size_inv[k]))
                .collect();
            mod_rows.push((d, row));
        }

        let degree_check: u64 = mod_rows.iter().map(|(d, _)| d * d).sum();
        if degree_check != order {
            return Err(Error::Internal(format!(
                "degrees square-sum to {}, group order is {}",
                degree_check, order
            )));
        }

        // Lift to cyclotomic integers: the coefficient of ζ^j in χ(g_k) is the
        // multiplicity m_{k,j} = (1/e) Σ_t χ(g_k^t) z^{-jt}, a non-negative
        // integer ≤ deg χ < q, recovered exactly from its residue.
        let ctx = CycloCtx::new(e)?;
        let z = f.root_of_unity(e)?;
        let zpow: Vec<u64> = {
            let mut acc = 1u64;
            let mut v = Vec::with_capacity(e as usize);
            for _ in 0..e {
                v.push(acc);
                acc = f.mul(acc, z);
            }
            v
        };
        let e_inv = f.inv(e % prime)?;

        let mut chars = Vec::with_capacity(r);
        for (d, row) in &mod_rows {
            let mut values = Vec::with_capacity(r);
            let mut canonical = Vec::with_capacity(r);
            for k in 0..r {
                let powers: Vec<u64> = (0..e).map(|t| row[classes.power_class(k, t)]).collect();
                let mut coeffs = vec![0i128; e as usize];
                let mut total = 0u64;
                for (j, slot) in coeffs.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for (t, &chi_t) in powers.iter().enumerate() {
                        let idx = (e as usize - (j * t) % e as usize) % e as usize;
                        acc = f.add(acc, f.mul(chi_t, zpow[idx]));
                    }
                    let m = f.mul(acc, e_inv);
                    if m > *d {
                        return Err(Error::Internal(format!(
                            "lifted multiplicity {} exceeds degree {}",
                            m, d
                        )));
                    }
                    total += m;
                    *slot = m as i128;
                }
                if total != *d {
                    return Err(Error::Internal(format!(
                        "eigenvalue multiplicities sum to {}, degree is {}",
                        total, d
                    )));
                }
                let value = Cyclo::new(e, coeffs)?;
                canonical.push(ctx.canonical(&value)?);
                values.push(value);
            }
            let is_trivial = values
                .iter()
                .map(|v| ctx.as_integer(v))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|x| *x == Some(1));
            chars.push(Character {
                degree: *d,
                values,
                canonical,
                is_trivial,
            });
        }

        // Deterministic row order: by degree, then by canonical value tuple.
        chars.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then_with(|| a.canonical.cmp(&b.canonical))
        });

        let table = CharacterTable {
            group,
            classes,
            ctx,
            chars,
            prime,
        };
        table.verify_orthogonality()?;
        Ok(table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn cyclo_ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    /// The modulus the table was computed under before lifting.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn count(&self) -> usize {
        self.chars.len()
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.chars[i]
    }

    pub fn trivial_index(&self) -> usize {
        self.chars
            .iter()
            .position(|c| c.is_trivial)
            .expect("every table contains the trivial character")
    }

    /// Exact first and second orthogonality relations.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let r = self.chars.len();
        let order = self.group.order() as i128;
        if r != self.classes.count() {
            return Err(Error::Internal(format!(
                "{} characters but {} classes",
                r,
                self.classes.count()
            )));
        }
        let e = self.classes.exponent();
        // Rows: Σ_k |K_k| χ_i(g_k) χ_j(g_k^{-1}) = δ_ij |G|.
        for i in 0..r {
            for j in i..r {
                let mut sum = Cyclo::zero(e);
                for k in 0..r {
                    let prod = self.chars[i].values[k]
                        .mul(&self.chars[j].values[self.classes.inverse_class(k)])?;
                    sum = sum.add(&prod.scale(self.classes.sizes()[k] as i128))?;
                }
                let expected = if i == j { order } else { 0 };
                if self.ctx.as_integer(&sum)? != Some(expected) {
                    return Err(Error::Internal(format!(
                        "row orthogonality fails for characters {} and {}",
                        i, j
                    )));
                }
            }
        }
        // Columns: Σ_χ χ(g_j) χ(g_k^{-1}) = δ_jk |G| / |K_j|.
        for j in 0..r {
            for k in j..r {
                let mut sum = Cyclo::zero(e);
                for chi in &self.chars {
                    let prod = chi.values[j].mul(&chi.values[self.classes.inverse_class(k)])?;
                    sum = sum.add(&prod)?;
                }
                let expected = if j == k {
                    order / self.classes.sizes()[j] as i128
                } else {
                    0
                };
                if self.ctx.as_integer(&sum)? != Some(expected) {
                    return Err(Error::Internal(format!(
                        "column orthogonality fails for classes {} and {}",
                        j, k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the H-fixed subspace in a representation with character
    /// χ_i: (1/|H|) Σ_{h ∈ H} χ_i(h).  H must be a subgroup of this table's
    /// group.
    pub fn fixed_dim(&self, i: usize, subgroup: &FiniteGroup) -> Result<u64> {
        let e = self.classes.exponent();
        let mut sum = Cyclo::zero(e);
        for h in subgroup.elements() {
            let k = self.classes.class_of(&self.group, h)?;
            sum = sum.add(&self.chars[i].values[k])?;
        }
        let n = self
            .ctx
            .as_integer(&sum)?
            .ok_or_else(|| Error::Integrality("character sum over subgroup is not rational".into()))?;
        let h_order = subgroup.order() as i128;
        if n < 0 || n % h_order != 0 {
            return Err(Error::Integrality(format!(
                "character sum {} over subgroup of order {} is not a non-negative multiple",
                n, h_order
            )));
        }
        Ok((n / h_order) as u64)
    }

    /// All fixed-subspace dimensions for one subgroup, in character order.
    pub fn fixed_dims(&self, subgroup: &FiniteGroup) -> Result<Vec<u64>> {
        (0..self.count()).map(|i| self.fixed_dim(i, subgroup)).collect()
    }
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let mut d = 0u64;
    while d * d < n {
        d += 1;
    }
    (d * d == n).then_some(d)
}

/// A subspace of F_q^r kept in reduced row echelon form: `basis[l]` has a 1 at
/// `pivots[l]` and zeros at the other pivot positions, so the coordinates of
/// any member vector can be read off at the pivots.
struct Subspace {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn echelonize(f: &PrimeField, vectors: Vec<Vec<u64>>) -> Result<Subspace> {
    let expect = vectors.len();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut v in vectors {
        // Reduce against current basis.
        for (b, &p) in basis.iter().zip(&pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b.iter()) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = f.inv(v[p])?;
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // Clear the new pivot from existing rows.
        for b in basis.iter_mut() {
            let c = b[p];
            if c != 0 {
                for (x, &y) in b.iter_mut().zip(v.iter()) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        basis.push(v);
        pivots.push(p);
    }
    if basis.len() != expect {
        return Err(Error::Internal("eigenspace basis was not independent".into()));
    }
    Ok(Subspace { basis, pivots })
}

/// Split F_q^r into the common one-dimensional eigenspaces of the commuting
/// class matrices, by refining invariant subspaces against each matrix in
/// turn.
fn common_eigenbasis(f: &PrimeField, mats: &[Vec<Vec<u64>>]) -> Result<Vec<Vec<u64>>> {
    let r = mats.len();
    if r == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut active: Vec<Subspace> = vec![{
        let mut basis = vec![vec![0u64; r]; r];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = 1;
        }
        Subspace {
            basis,
            pivots: (0..r).collect(),
        }
    }];
    // mats[0] is the identity (class of the identity element); start at 1.
    for mi in mats.iter().skip(1) {
        if active.is_empty() {
            break;
        }
        let mut next: Vec<Subspace> = Vec::new();
        for w in std::mem::take(&mut active) {
            let d = w.basis.len();
            let images: Vec<Vec<u64>> = w
                .basis
                .iter()
                .map(|b| modular::mat_vec(f, mi, b))
                .collect();
            // Matrix of the restriction in the subspace basis, read off at
            // the pivot coordinates.
            let mut rest = vec![vec![0u64; d]; d];
            for j in 0..d {
                for l in 0..d {
                    rest[l][j] = images[j][w.pivots[l]];
                }
            }
            // Invariance check: the image must reconstruct from those
            // coordinates.
            for j in 0..d {
                let mut recon = vec![0u64; r];
                for l in 0..d {
                    let c = rest[l][j];
                    if c != 0 {
                        for (x, &y) in recon.iter_mut().zip(&w.basis[l]) {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                }
                if recon != images[j] {
                    return Err(Error::Internal(
                        "class matrix does not preserve a candidate subspace".into(),
                    ));
                }
            }
            let cp = modular::char_poly(f, &rest)?;
            let roots = modular::poly_roots(f, &cp);
            let mut found = 0usize;
            for lambda in roots {
                let mut shifted = rest.clone();
                for (l, row) in shifted.iter_mut().enumerate() {
                    row[l] = f.sub(row[l], lambda);
                }
                let kernel = modular::kernel_basis(f, &shifted);
                found += kernel.len();
                let ambient: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|coord| {
                        let mut v = vec![0u64; r];
                        for (l, &c) in coord.iter().enumerate() {
                            if c != 0 {
                                for (x, &y) in v.iter_mut().zip(&w.basis[l]) {
                                    *x = f.add(*x, f.mul(c, y));
                                }
                            }
                        }
                        v
                    })
                    .collect();
                if ambient.len() == 1 {
                    done.push(ambient.into_iter().next().expect("one vector"));
                } else {
                    next.push(echelonize(f, ambient)?);
                }
            }
            if found != d {
                return Err(Error::Internal(
                    "class matrix is not diagonalizable on an invariant subspace".into(),
                ));
            }
        }
        active = next;
    }
    if !active.is_empty() {
        return Err(Error::Internal(
            "class matrices failed to separate the characters".into(),
        ));
    }
    if done.len() != r {
        return Err(Error::Internal(format!(
            "found {} common eigenvectors, expected {}",
            done.len(),
            r
        )));
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: &str) -> CharacterTable {
        CharacterTable::build(FiniteGroup::from_spec(spec).unwrap()).unwrap()
    }

    fn degrees(t: &CharacterTable) -> Vec<u64> {
        t.characters().iter().map(|c| c.degree()).collect()
    }

    #[test]
    fn table_moduli_for_known_groups() {
        assert_eq!(table("S4").prime(), 61);
        assert_eq!(table("A5").prime(), 151);
        assert_eq!(table("C3").prime(), 7);
    }

    #[test]
    fn degree_multisets() {
        let cases: &[(&str, &[u64])] = &[
            ("C1", &[1]),
            ("C5", &[1, 1, 1, 1, 1]),
            ("S3", &[1, 1, 2]),
            ("S4", &[1, 1, 2, 3, 3]),
            ("A4", &[1, 1, 1, 3]),
            ("A5", &[1, 3, 3, 4, 5]),
            ("D4", &[1, 1, 1, 1, 2]),
            ("D6", &[1, 1, 1, 1, 2, 2]),
            ("SL2(3)", &[1, 1, 1, 2, 2, 2, 3]),
            ("SL2(5)", &[1, 2, 2, 3, 3, 4, 4, 5, 6]),
            ("perm degree=7 gens=[(1 2 3 4 5 6 7), (2 3 5)(4 7 6)]", &[1, 1, 1, 3, 3]),
        ];
        for (spec, expected) in cases {
            let t = table(spec);
            assert_eq!(degrees(&t), *expected, "degrees of {}", spec);
        }
    }

    #[test]
    fn exactly_one_trivial_character() {
        for spec in ["C6", "S4", "A5", "D4", "SL2(3)"] {
            let t = table(spec);
            let trivials = t.characters().iter().filter(|c| c.is_trivial()).count();
            assert_eq!(trivials, 1, "{}", spec);
            assert_eq!(t.character(t.trivial_index()).degree(), 1, "{}", spec);
        }
    }

    #[test]
    fn s3_rows_in_canonical_order() {
        // Classes: identity, 3-cycles, transpositions.  Rows sort by degree
        // then value tuple, putting the sign character before the trivial one.
        let t = table("S3");
        let ctx = t.cyclo_ctx();
        let ints = |i: usize| -> Vec<i128> {
            (0..3)
                .map(|k| ctx.as_integer(t.character(i).value(k)).unwrap().unwrap())
                .collect()
        };
        assert_eq!(ints(0), vec![1, 1, -1]);
        assert!(!t.character(0).is_trivial());
        assert_eq!(ints(1), vec![1, 1, 1]);
        assert!(t.character(1).is_trivial());
        assert_eq!(t.character(2).degree(), 2);
        assert_eq!(ints(2), vec![2, -1, 0]);
    }

    #[test]
    fn s4_fixed_dims_under_point_stabilizer() {
        // H = <(2 3), (2 3 4)> is the copy of S3 fixing the point 1.
        let t = table("S4");
        let h = t.group().subgroup_from_cycles(&["(2 3)", "(2 3 4)"]).unwrap();
        assert_eq!(h.order(), 6);
        let dims = t.fixed_dims(&h).unwrap();
        // The permutation module on 4 points is trivial + standard, so the
        // standard degree-3 character gets fixed dimension 1; the trivial
        // character always gets 1; everything else restricts without trivial
        // constituents.
        let ctx = t.cyclo_ctx();
        for (i, c) in t.characters().iter().enumerate() {
            let expected = if c.is_trivial() {
                1
            } else if c.degree() == 3 {
                // Distinguish the standard character (value +1 on
                // transpositions, the first size-6 class) from its twist by
                // sign (value -1 there).
                let v = ctx.as_integer(c.value(2)).unwrap().unwrap();
                u64::from(v == 1)
            } else {
                0
            };
            assert_eq!(dims[i], expected, "character {}", i);
        }
    }

    #[test]
    fn s3_fixed_dims_under_transposition() {
        let t = table("S3");
        let h = t.group().subgroup_from_cycles(&["(2 3)"]).unwrap();
        // [sign, trivial, standard] -> [0, 1, 1].
        assert_eq!(t.fixed_dims(&h).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn regular_module_fixed_dims_count_cosets() {
        // Σ_χ deg(χ) · fixed_dim(χ, H) = |G| / |H| (the regular module's
        // H-fixed subspace counts right cosets).
        let pairs: &[(&str, &[&str])] = &[
            ("S4", &["(1 2 3)", "(1 2)(3 4)"]), // A4 inside S4
            ("S4", &["(1 2 3 4)"]),
            ("A5", &["(1 2 3)", "(1 2)(3 4)"]), // A4 inside A5
            ("D4", &["(1 3)"]),
        ];
        for (spec, gens) in pairs {
            let t = table(spec);
            let h = t.group().subgroup_from_cycles(gens).unwrap();
            let total: u64 = t
                .characters()
                .iter()
                .enumerate()
                .map(|(i, c)| c.degree() * t.fixed_dim(i, &h).unwrap())
                .sum();
            assert_eq!(total as usize, t.group().order() / h.order(), "{}", spec);
        }
    }

    #[test]
    fn full_group_fixes_only_trivial() {
        let t = table("A5");
        let g = FiniteGroup::from_spec("A5").unwrap();
        let dims = t.fixed_dims(&g).unwrap();
        for (i, c) in t.characters().iter().enumerate() {
            assert_eq!(dims[i], u64::from(c.is_trivial()), "character {}", i);
        }
    }

    #[test]
    fn quintic_table_has_irrational_entries() {
        // The degree-3 characters of A5 take the two golden-ratio conjugates
        // on the 5-cycle classes.
        let t = table("A5");
        let ctx = t.cyclo_ctx();
        let deg3: Vec<_> = t
            .characters()
            .iter()
            .filter(|c| c.degree() == 3)
            .collect();
        assert_eq!(deg3.len(), 2);
        let mut irrational = 0;
        for c in &deg3 {
            for k in 0..t.count() {
                if ctx.as_integer(c.value(k)).unwrap().is_none() {
                    irrational += 1;
                }
            }
        }
        // Two irrational entries per degree-3 row (the two 5-cycle classes).
        assert_eq!(irrational, 4);
    }

    #[test]
    fn binary_icosahedral_table() {
        let t = table("SL2(5)");
        assert_eq!(t.count(), 9);
        t.verify_orthogonality().unwrap();
        // Central element: the unique non-identity singleton class is class 1.
        assert_eq!(t.classes().sizes()[1], 1);
        // Faithful characters see the center as -identity: χ(z) = -deg.
        let ctx = t.cyclo_ctx();
        let central: Vec<i128> = (0..9)
            .map(|i| ctx.as_integer(t.character(i).value(1)).unwrap().unwrap())
            .collect();
        let degs: Vec<i128> = t.characters().iter().map(|c| c.degree() as i128).collect();
        for i in 0..9 {
            assert!(central[i] == degs[i] || central[i] == -degs[i]);
        }
        // Degrees 2, 2, 4, 6 are the faithful (z ↦ -1) ones.
        let faithful: Vec<i128> = (0..9)
            .filter(|&i| central[i] == -degs[i])
            .map(|i| degs[i])
            .collect();
        assert_eq!(faithful, vec![2, 2, 4, 6]);
    }
}
