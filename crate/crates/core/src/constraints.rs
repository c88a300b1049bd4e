//! Rank-jump arithmetic on the rational character table.
//!
//! For a Galois extension with group G, the rational vector space spanned by
//! the new points of an abelian variety is a G-module with no nonzero fixed
//! vectors, so the rank jump between the base field and the top field is a
//! nonnegative integer combination of the dimensions of the nontrivial
//! rational irreducible G-modules.  Everything in this module is elementary
//! arithmetic on those dimensions: minima, gcd congruences, realizable jump
//! sets, relative growth multipliers over an intermediate field, and the
//! index-2 dichotomy gate.

use std::fmt;

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modular::is_prime;
use crate::oracle;
use crate::rational::{
    schur_lower_bounds, schur_overrides, RationalStructure, SchurIndexValue, SchurPolicy,
};

/// Exactness marker for a reported numeric claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMode {
    /// The value is the true one.
    Exact,
    /// The true value is at least the reported one.
    LowerBound,
}

impl fmt::Display for ValueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueMode::Exact => write!(f, "exact"),
            ValueMode::LowerBound => write!(f, "lower bound"),
        }
    }
}

/// Resolve Schur-index annotations for the orbits of `rs` under a policy.
///
/// `seed` feeds the random candidate search of the oracle policy and is
/// ignored by the other two.
pub fn schur_annotations(
    table: &CharacterTable,
    rs: &RationalStructure,
    policy: SchurPolicy,
    seed: u64,
) -> Result<Vec<SchurIndexValue>> {
    match policy {
        SchurPolicy::LowerBound => Ok(schur_lower_bounds(rs)),
        SchurPolicy::Oracle => oracle::schur_indices_oracle(table, rs, seed),
        SchurPolicy::Override => schur_overrides(table.group(), rs),
    }
}

/// Dimension of the rational irreducible module attached to each nontrivial
/// orbit (Schur index × orbit-sum degree), with an exactness flag, as
/// `(orbit index, dimension, exact)`.
///
/// A lower-bound annotation is always 1, or 2 forced by an indicator of -1;
/// in both cases the true Schur index is a multiple of it, so the annotated
/// dimension divides the true dimension.  Minima computed from these
/// dimensions are therefore valid lower bounds and gcds remain divisors of
/// every true jump, even in lower-bound mode.
fn nontrivial_module_dims(
    rs: &RationalStructure,
    annotations: &[SchurIndexValue],
) -> Result<Vec<(usize, u64, bool)>> {
    if annotations.len() != rs.count() {
        return Err(Error::Internal(format!(
            "{} Schur annotations supplied for {} orbits",
            annotations.len(),
            rs.count()
        )));
    }
    Ok(rs
        .orbits()
        .iter()
        .zip(annotations)
        .enumerate()
        .filter(|(_, (o, _))| !o.contains_trivial())
        .map(|(j, (o, a))| (j, a.value() * o.q_degree(), a.is_exact()))
        .collect())
}

/// Minimal nonzero jump, its exactness, and the gcd of all module
/// dimensions, straight from the annotated nontrivial orbits.
///
/// The minimum is exact as soon as one orbit of minimal annotated dimension
/// carries an exact annotation: no other orbit can fall below it, because
/// annotated dimensions never exceed true dimensions.
fn min_and_gcd(
    rs: &RationalStructure,
    annotations: &[SchurIndexValue],
) -> Result<(u64, ValueMode, u64)> {
    let dims = nontrivial_module_dims(rs, annotations)?;
    let min = dims
        .iter()
        .map(|&(_, d, _)| d)
        .min()
        .ok_or_else(|| Error::Domain("the trivial group admits no nonzero rank jump".into()))?;
    let min_mode = if dims.iter().any(|&(_, d, exact)| d == min && exact) {
        ValueMode::Exact
    } else {
        ValueMode::LowerBound
    };
    let g = dims.iter().fold(0u64, |acc, &(_, d, _)| gcd(acc, d));
    Ok((min, min_mode, g))
}

/// All values ≤ `bound` representable as nonnegative integer combinations of
/// `generators`: the numerical semigroup they generate, truncated.
pub fn semigroup_up_to(generators: &[u64], bound: u64) -> Vec<u64> {
    let b = bound as usize;
    let mut reachable = vec![false; b + 1];
    reachable[0] = true;
    for &g in generators {
        let g = g as usize;
        if g == 0 || g > b {
            continue;
        }
        for i in g..=b {
            if reachable[i - g] {
                reachable[i] = true;
            }
        }
    }
    reachable
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(i, _)| i as u64)
        .collect()
}

/// The realizable rank jumps up to a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AchievableJumps {
    pub bound: u64,
    /// Sorted; always starts with 0.
    pub values: Vec<u64>,
}

/// How the rank can jump across the full extension: minimal nonzero jump,
/// universal congruence modulus, and (when the Schur data is exact) the
/// whole realizable jump set up to a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpAnalysis {
    pub group: String,
    pub group_order: usize,
    /// Dimensions of the nontrivial rational irreducible modules, sorted and
    /// deduplicated; these generate the jump semigroup.
    pub module_dims: Vec<u64>,
    /// Whether every underlying Schur index is exact.
    pub dims_exact: bool,
    pub min_nonzero_jump: u64,
    pub min_mode: ValueMode,
    /// Divides every realizable jump, in both modes.
    pub jump_gcd: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub achievable: Option<AchievableJumps>,
    pub notes: Vec<String>,
}

impl JumpAnalysis {
    /// The realizable jump set; demanding it under lower-bound Schur data is
    /// a mode error.
    pub fn achievable(&self) -> Result<&AchievableJumps> {
        self.achievable.as_ref().ok_or_else(|| {
            Error::Mode(
                "the exact jump set requires exact Schur indices for every nontrivial orbit; \
                 the current annotations include lower bounds"
                    .into(),
            )
        })
    }
}

/// Analyze the possible rank jumps for the group of `table`, enumerating the
/// realizable set up to `bound` when the annotations allow it.
pub fn jump_analysis(
    table: &CharacterTable,
    rs: &RationalStructure,
    annotations: &[SchurIndexValue],
    bound: u64,
) -> Result<JumpAnalysis> {
    let dims = nontrivial_module_dims(rs, annotations)?;
    let (min_nonzero_jump, min_mode, jump_gcd) = min_and_gcd(rs, annotations)?;
    let dims_exact = dims.iter().all(|&(_, _, exact)| exact);

    let mut module_dims: Vec<u64> = dims.iter().map(|&(_, d, _)| d).collect();
    module_dims.sort_unstable();
    module_dims.dedup();

    let mut notes = Vec::new();
    let achievable = if dims_exact {
        let values = semigroup_up_to(&module_dims, bound);
        if let Some(v) = values.iter().find(|&&v| v % jump_gcd != 0) {
            return Err(Error::Internal(format!(
                "achievable jump {} escapes the gcd {}",
                v, jump_gcd
            )));
        }
        Some(AchievableJumps { bound, values })
    } else {
        let inexact: Vec<String> = dims
            .iter()
            .filter(|&&(_, _, exact)| !exact)
            .map(|&(j, d, _)| format!("orbit {} (dim ≥ {})", j, d))
            .collect();
        notes.push(format!(
            "Schur indices are lower bounds for {}; the minimum stays a valid lower bound and \
             the gcd a valid divisor, but the exact jump set is suppressed",
            inexact.join(", ")
        ));
        None
    };
    if jump_gcd > 1 {
        notes.push(format!(
            "every rank jump across the full extension is divisible by {}",
            jump_gcd
        ));
    }

    Ok(JumpAnalysis {
        group: table.group().name().to_string(),
        group_order: table.group().order(),
        module_dims,
        dims_exact,
        min_nonzero_jump,
        min_mode,
        jump_gcd,
        achievable,
        notes,
    })
}

/// Which matrix group over F_p a division-field layer realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixVariant {
    #[serde(rename = "SL2")]
    Sl2,
    #[serde(rename = "PSL2")]
    Psl2,
}

impl fmt::Display for MatrixVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixVariant::Sl2 => write!(f, "SL2"),
            MatrixVariant::Psl2 => write!(f, "PSL2"),
        }
    }
}

/// Verification record for the (p−1)/2 lower bound on jumps across an
/// SL2(p)- or PSL2(p)-extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlPslCheck {
    pub p: u64,
    pub variant: MatrixVariant,
    pub group: String,
    pub group_order: usize,
    /// (p − 1)/2.
    pub required_min: u64,
    pub min_jump: u64,
    pub min_mode: ValueMode,
    pub pass: bool,
}

/// Check that the minimal nonzero jump for SL2(p) or PSL2(p) is at least
/// (p−1)/2, reporting the actual minimum under the chosen policy.
pub fn min_jump_check_slpsl(
    p: u64,
    variant: MatrixVariant,
    policy: SchurPolicy,
    seed: u64,
) -> Result<SlPslCheck> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain(format!("p = {} must be an odd prime", p)));
    }
    let spec = format!("{}({})", variant, p);
    let group = FiniteGroup::from_spec(&spec)?;
    let table = CharacterTable::build(group)?;
    let rs = RationalStructure::from_table(&table)?;
    let annotations = schur_annotations(&table, &rs, policy, seed)?;
    let (min_jump, min_mode, _) = min_and_gcd(&rs, &annotations)?;
    let required_min = (p - 1) / 2;
    Ok(SlPslCheck {
        p,
        variant,
        group: table.group().name().to_string(),
        group_order: table.group().order(),
        required_min,
        min_jump,
        min_mode,
        pass: min_jump >= required_min,
    })
}

/// Verification record for the least-prime-factor bound on jumps across an
/// odd-order extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddOrderCheck {
    pub group: String,
    pub group_order: usize,
    pub least_prime_factor: u64,
    /// p − 1 for p the least prime factor of the order.
    pub required_min: u64,
    pub min_jump: u64,
    pub min_mode: ValueMode,
    pub pass: bool,
}

/// Check that a nontrivial odd-order group forces jumps of size at least
/// p − 1, where p is the least prime dividing the group order.
pub fn odd_order_corollary_check(
    table: &CharacterTable,
    rs: &RationalStructure,
    annotations: &[SchurIndexValue],
) -> Result<OddOrderCheck> {
    let group = table.group();
    let n = group.order() as u64;
    if n % 2 == 0 {
        return Err(Error::Domain(format!(
            "{} has even order {}; the bound needs an odd-order group",
            group.name(),
            n
        )));
    }
    if n == 1 {
        return Err(Error::Domain(
            "the trivial group has no least prime factor".into(),
        ));
    }
    let least_prime_factor = (3..=n)
        .step_by(2)
        .find(|d| n % d == 0)
        .expect("an odd integer > 1 has an odd prime factor");
    let (min_jump, min_mode, _) = min_and_gcd(rs, annotations)?;
    let required_min = least_prime_factor - 1;
    Ok(OddOrderCheck {
        group: group.name().to_string(),
        group_order: group.order(),
        least_prime_factor,
        required_min,
        min_jump,
        min_mode,
        pass: min_jump >= required_min,
    })
}

/// An exact nonnegative rational, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Fraction {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Strict comparison by cross multiplication.
    fn lt(&self, other: &Fraction) -> bool {
        (self.num as u128) * (other.den as u128) < (other.num as u128) * (self.den as u128)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// One rational orbit's contribution to a relative growth analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeRow {
    pub orbit: usize,
    pub q_dimension: u64,
    pub fixed_dimension: u64,
    pub trivial: bool,
}

/// Growth comparison between the full extension and the intermediate field
/// fixed by a subgroup H: the jump over the full field is at least
/// `multiplier` times the jump over the fixed field, and the two top-field
/// quantities agree modulo `parity_gcd`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeAnalysis {
    pub group: String,
    pub subgroup_order: usize,
    pub subgroup_index: usize,
    pub rows: Vec<RelativeRow>,
    /// None when no nontrivial orbit has H-fixed vectors; then the fixed
    /// field can never see a rank jump at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<Fraction>,
    pub parity_gcd: u64,
    pub statement: String,
}

/// Compare rank growth over the full extension against growth over the
/// field fixed by `subgroup`.
///
/// The multiplier is the minimum of q-dimension / fixed-dimension over
/// nontrivial orbits with fixed vectors; Schur indices cancel in that ratio,
/// so the result is exact under every annotation policy.  The parity gcd of
/// the per-orbit differences (q-dimension − fixed dimension) divides the
/// difference between the two jumps for the same reason gcds survive
/// lower-bound mode: true contributions are integer multiples of the
/// annotated ones.
pub fn relative_analysis(
    table: &CharacterTable,
    rs: &RationalStructure,
    subgroup: &FiniteGroup,
) -> Result<RelativeAnalysis> {
    let group = table.group();
    if subgroup.order() >= group.order() {
        return Err(Error::Domain(format!(
            "the subgroup has order {}, but only proper subgroups of {} (order {}) cut out a \
             strictly smaller field",
            subgroup.order(),
            group.name(),
            group.order()
        )));
    }
    let fixed = rs.fixed_dims(table, subgroup)?;
    let trivial = rs.trivial_orbit();

    let mut rows = Vec::with_capacity(rs.count());
    let mut multiplier: Option<Fraction> = None;
    let mut parity_gcd = 0u64;
    for (j, orbit) in rs.orbits().iter().enumerate() {
        let q = orbit.q_degree();
        let d = fixed[j];
        if d > q {
            return Err(Error::Internal(format!(
                "orbit {} has fixed dimension {} exceeding its degree {}",
                j, d, q
            )));
        }
        rows.push(RelativeRow {
            orbit: j,
            q_dimension: q,
            fixed_dimension: d,
            trivial: j == trivial,
        });
        if j != trivial {
            if d > 0 {
                let ratio = Fraction::new(q, d);
                if multiplier.map_or(true, |m| ratio.lt(&m)) {
                    multiplier = Some(ratio);
                }
            }
            parity_gcd = gcd(parity_gcd, q - d);
        }
    }
    // A proper subgroup always leaves fixed vectors in the coset module, so
    // some nontrivial orbit has d > 0; the degenerate arm stays for safety.
    let statement = match multiplier {
        Some(c) => {
            let mut s = format!(
                "rk A(M) − rk A(K) ≥ {}·(rk A(L) − rk A(K)) for every abelian variety A, where M \
                 is the full extension and L the field fixed by the subgroup",
                c
            );
            if parity_gcd > 1 {
                s.push_str(&format!("; moreover rk A(M) ≡ rk A(L) (mod {})", parity_gcd));
            }
            s
        }
        None => "no nontrivial rational character has fixed vectors under the subgroup, so \
                 rk A(L) = rk A(K) unconditionally"
            .to_string(),
    };
    if let Some(c) = multiplier {
        if c.lt(&Fraction::new(1, 1)) {
            return Err(Error::Internal(format!(
                "relative multiplier {} fell below 1",
                c
            )));
        }
    }

    Ok(RelativeAnalysis {
        group: group.name().to_string(),
        subgroup_order: subgroup.order(),
        subgroup_index: group.order() / subgroup.order(),
        rows,
        multiplier,
        parity_gcd: parity_gcd.max(1),
        statement,
    })
}

/// Dichotomy record: groups without index-2 subgroups force every nonzero
/// jump to be at least 2 (and in fact at least the group's minimal
/// nontrivial module dimension); an index-2 subgroup is an obstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTwoGate {
    pub group: String,
    pub has_index_two: bool,
    /// Minimal q-dimension over nontrivial orbits; None for the trivial
    /// group.
    pub min_nontrivial_q_dimension: Option<u64>,
    pub statement: String,
}

/// Decide the index-2 dichotomy for a group, cross-checking the
/// group-theoretic test (even abelianization) against the character-table
/// test (a nontrivial rational character of dimension 1).
pub fn index_two_gate(table: &CharacterTable, rs: &RationalStructure) -> Result<IndexTwoGate> {
    let group = table.group();
    let via_abelianization = group.has_index_two_subgroup()?;
    let trivial = rs.trivial_orbit();
    let min_nontrivial_q_dimension = rs
        .orbits()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != trivial)
        .map(|(_, o)| o.q_degree())
        .min();
    let via_table = min_nontrivial_q_dimension == Some(1);
    if via_abelianization != via_table {
        return Err(Error::Internal(format!(
            "index-2 detection disagrees for {}: abelianization says {}, character table says {}",
            group.name(),
            via_abelianization,
            via_table
        )));
    }
    let statement = if via_abelianization {
        "the group has an index-2 subgroup, so the extension contains a quadratic subfield \
         K(√d); rk A(K(√d)) = rk A(K) + rk A^d(K) and the twist rank is unconstrained, so rank \
         jumps of size 1 cannot be ruled out"
            .to_string()
    } else {
        match min_nontrivial_q_dimension {
            Some(m) => format!(
                "no index-2 subgroup: every nontrivial rational character has dimension ≥ 2, so \
                 for every abelian variety A either rk A(L) = rk A(K) or \
                 rk A(L) ≥ rk A(K) + {}",
                m.max(2)
            ),
            None => "the extension is trivial, so rk A(L) = rk A(K)".to_string(),
        }
    };
    Ok(IndexTwoGate {
        group: group.name().to_string(),
        has_index_two: via_abelianization,
        min_nontrivial_q_dimension,
        statement,
    })
}

/// Rendered dichotomy for a layer of the p-division field of an elliptic
/// curve with surjective mod-p representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionFieldCorollary {
    pub p: u64,
    pub full_division_field: bool,
    pub check: SlPslCheck,
    /// (p − 1)/2 = 1, i.e. p = 3: the dichotomy says nothing beyond
    /// monotonicity.
    pub degenerate: bool,
    pub statement: String,
}

/// Rank dichotomy over fields between K(ζ_p) and the p-division field
/// K(E[p]): the Galois group is SL2(F_p) for the full field and PSL2(F_p)
/// for its index-2 subfield, so jumps of size < (p−1)/2 are impossible.
pub fn division_field_corollary(
    p: u64,
    full_division_field: bool,
    policy: SchurPolicy,
    seed: u64,
) -> Result<DivisionFieldCorollary> {
    let variant = if full_division_field {
        MatrixVariant::Sl2
    } else {
        MatrixVariant::Psl2
    };
    let check = min_jump_check_slpsl(p, variant, policy, seed)?;
    let degenerate = check.required_min == 1;
    let field = if full_division_field {
        "L = K(E[p])".to_string()
    } else {
        "L inside K(E[p]) with [K(E[p]) : L] = 2".to_string()
    };
    let mut statement = format!(
        "for an elliptic curve E/K whose mod-{} representation is surjective and {}, the group \
         Gal(L/K(ζ_{})) is {}(F_{}), so either rk E(L) = rk E(K(ζ_{})) or \
         rk E(L) ≥ rk E(K(ζ_{})) + {}",
        p, field, p, variant, p, p, p, check.required_min
    );
    if degenerate {
        statement.push_str(" (degenerate: the bound 1 adds nothing)");
    }
    Ok(DivisionFieldCorollary {
        p,
        full_division_field,
        check,
        degenerate,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn structure(spec: &str) -> (CharacterTable, RationalStructure) {
        let t = CharacterTable::build(FiniteGroup::from_spec(spec).unwrap()).unwrap();
        let rs = RationalStructure::from_table(&t).unwrap();
        (t, rs)
    }

    fn lower_bound_jumps(spec: &str, bound: u64) -> JumpAnalysis {
        let (t, rs) = structure(spec);
        let ann = schur_lower_bounds(&rs);
        jump_analysis(&t, &rs, &ann, bound).unwrap()
    }

    #[test]
    fn cyclic_prime_jump_analysis() {
        for p in [3u64, 5, 7] {
            let ja = lower_bound_jumps(&format!("C{}", p), 30);
            assert_eq!(ja.min_nonzero_jump, p - 1);
            assert_eq!(ja.min_mode, ValueMode::Exact);
            assert_eq!(ja.jump_gcd, p - 1);
            let set = ja.achievable().unwrap();
            let expected: Vec<u64> = (0..=30).filter(|v| v % (p - 1) == 0).collect();
            assert_eq!(set.values, expected);
        }
    }

    #[test]
    fn quartic_alternating_exact_set_has_gap_at_one() {
        let (t, rs) = structure("A4");
        let ann = schur_overrides(t.group(), &rs).unwrap();
        let ja = jump_analysis(&t, &rs, &ann, 20).unwrap();
        assert_eq!(ja.min_nonzero_jump, 2);
        assert_eq!(ja.jump_gcd, 1);
        let mut expected: Vec<u64> = vec![0];
        expected.extend(2..=20);
        assert_eq!(ja.achievable().unwrap().values, expected);
    }

    #[test]
    fn lower_bound_mode_suppresses_the_set() {
        // The quaternion-like orbits of SL2(5) stay lower bounds under the
        // indicator policy, so the exact set must be refused.
        let (t, rs) = structure("SL2(5)");
        let ann = schur_lower_bounds(&rs);
        let ja = jump_analysis(&t, &rs, &ann, 20).unwrap();
        assert!(!ja.dims_exact);
        assert!(ja.achievable.is_none());
        assert!(matches!(ja.achievable().unwrap_err(), Error::Mode(_)));
    }

    #[test]
    fn trivial_group_jump_analysis_is_domain_error() {
        let (t, rs) = structure("C1");
        let ann = schur_lower_bounds(&rs);
        assert!(matches!(
            jump_analysis(&t, &rs, &ann, 10).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn semigroup_edges() {
        assert_eq!(semigroup_up_to(&[], 5), vec![0]);
        assert_eq!(semigroup_up_to(&[2, 3], 7), vec![0, 2, 3, 4, 5, 6, 7]);
        assert_eq!(semigroup_up_to(&[4], 10), vec![0, 4, 8]);
        assert_eq!(semigroup_up_to(&[7], 3), vec![0]);
    }

    proptest! {
        #[test]
        fn semigroup_is_closed_under_addition(
            gens in proptest::collection::vec(1u64..12, 1..4),
            bound in 10u64..60,
        ) {
            let set = semigroup_up_to(&gens, bound);
            for &a in &set {
                for &b in &set {
                    if a + b <= bound {
                        prop_assert!(set.binary_search(&(a + b)).is_ok());
                    }
                }
            }
            for &g in &gens {
                if g <= bound {
                    prop_assert!(set.binary_search(&g).is_ok());
                }
            }
        }
    }

    #[test]
    fn slpsl_checks_match_frozen_minima() {
        let c = min_jump_check_slpsl(5, MatrixVariant::Sl2, SchurPolicy::Override, 0).unwrap();
        assert_eq!((c.min_jump, c.required_min, c.pass), (4, 2, true));
        assert_eq!(c.min_mode, ValueMode::Exact);
        let c = min_jump_check_slpsl(5, MatrixVariant::Psl2, SchurPolicy::Override, 0).unwrap();
        assert_eq!((c.min_jump, c.required_min, c.pass), (4, 2, true));
        let c = min_jump_check_slpsl(7, MatrixVariant::Psl2, SchurPolicy::Override, 0).unwrap();
        assert_eq!((c.min_jump, c.required_min, c.pass), (6, 3, true));
    }

    #[test]
    fn slpsl_rejects_bad_primes() {
        for p in [2u64, 4, 9] {
            assert!(matches!(
                min_jump_check_slpsl(p, MatrixVariant::Sl2, SchurPolicy::LowerBound, 0)
                    .unwrap_err(),
                Error::Domain(_)
            ));
        }
    }

    #[test]
    fn odd_order_examples_pass() {
        for (spec, lpf, min) in [
            ("C9", 3, 2),
            ("C15", 3, 2),
            ("C27", 3, 2),
            ("perm degree=7 gens=[(1 2 3 4 5 6 7)]", 7, 6),
        ] {
            let (t, rs) = structure(spec);
            let ann = schur_lower_bounds(&rs);
            let c = odd_order_corollary_check(&t, &rs, &ann).unwrap();
            assert_eq!(c.least_prime_factor, lpf, "{}", spec);
            assert_eq!(c.min_jump, min, "{}", spec);
            assert!(c.pass, "{}", spec);
        }
    }

    #[test]
    fn odd_order_rejects_even_and_trivial() {
        let (t, rs) = structure("S3");
        let ann = schur_lower_bounds(&rs);
        assert!(matches!(
            odd_order_corollary_check(&t, &rs, &ann).unwrap_err(),
            Error::Domain(_)
        ));
        let (t, rs) = structure("C1");
        let ann = schur_lower_bounds(&rs);
        assert!(matches!(
            odd_order_corollary_check(&t, &rs, &ann).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn relative_triple_matches_frozen_values() {
        // (group, point/subgroup generators, multiplier, parity gcd)
        let cases: [(&str, &[&str], u64, u64); 3] = [
            ("S3", &["(1 2)"], 2, 1),
            ("A4", &["(2 3 4)"], 3, 2),
            ("S4", &["(1 2)", "(1 2 3)"], 3, 1),
        ];
        for (spec, gens, mult, parity) in cases {
            let (t, rs) = structure(spec);
            let h = t.group().subgroup_from_cycles(gens).unwrap();
            let ra = relative_analysis(&t, &rs, &h).unwrap();
            assert_eq!(ra.multiplier, Some(Fraction::new(mult, 1)), "{}", spec);
            assert_eq!(ra.parity_gcd, parity, "{}", spec);
        }
    }

    #[test]
    fn relative_fixed_dims_match_hand_computation() {
        // S4 over its point stabilizer: trivial and standard rows have one
        // fixed dimension each, the other three none.
        let (t, rs) = structure("S4");
        let h = t.group().subgroup_from_cycles(&["(1 2)", "(1 2 3)"]).unwrap();
        let ra = relative_analysis(&t, &rs, &h).unwrap();
        let dims: Vec<u64> = ra.rows.iter().map(|r| r.fixed_dimension).collect();
        assert_eq!(dims, vec![0, 1, 0, 0, 1]);
    }

    #[test]
    fn relative_rejects_improper_subgroup() {
        let (t, rs) = structure("S3");
        let whole = t
            .group()
            .subgroup_from_cycles(&["(1 2)", "(1 2 3)"])
            .unwrap();
        assert!(matches!(
            relative_analysis(&t, &rs, &whole).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn index_two_gate_cross_checks() {
        for (spec, has_two) in [
            ("C1", false),
            ("C2", true),
            ("C3", false),
            ("S3", true),
            ("A4", false),
            ("A5", false),
            ("S4", true),
            ("D4", true),
            ("SL2(5)", false),
            ("C15", false),
        ] {
            let (t, rs) = structure(spec);
            let gate = index_two_gate(&t, &rs).unwrap();
            assert_eq!(gate.has_index_two, has_two, "{}", spec);
            if !has_two && spec != "C1" {
                assert!(gate.min_nontrivial_q_dimension.unwrap() >= 2, "{}", spec);
            }
        }
    }

    #[test]
    fn division_field_corollary_dispatches() {
        let c = division_field_corollary(5, true, SchurPolicy::Override, 0).unwrap();
        assert_eq!(c.check.variant, MatrixVariant::Sl2);
        assert_eq!(c.check.required_min, 2);
        assert!(c.check.pass);
        assert!(!c.degenerate);

        let c = division_field_corollary(7, false, SchurPolicy::Override, 0).unwrap();
        assert_eq!(c.check.variant, MatrixVariant::Psl2);
        assert_eq!(c.check.min_jump, 6);

        // SL2(3) carries no pinned Schur data, but the indicator policy is
        // already exact for its minimal orbit (a pair of linear characters).
        let c = division_field_corollary(3, true, SchurPolicy::LowerBound, 0).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.check.required_min, 1);
        assert_eq!(c.check.min_jump, 2);
        assert_eq!(c.check.min_mode, ValueMode::Exact);
    }

    #[test]
    fn fraction_reduction_and_ordering() {
        assert_eq!(Fraction::new(6, 4), Fraction::new(3, 2));
        assert_eq!(Fraction::new(3, 1).to_string(), "3");
        assert_eq!(Fraction::new(7, 2).to_string(), "7/2");
        assert!(Fraction::new(3, 2).lt(&Fraction::new(2, 1)));
        assert!(!Fraction::new(2, 1).lt(&Fraction::new(2, 1)));
    }
}
