//! Module-decomposition oracle: an independent check on the character-side
//! computations, working directly with explicit group actions on `Q`-vector
//! spaces.
//!
//! The oracle builds permutation actions (the regular action, natural point
//! actions, coset actions), forms the scaled central projector attached to
//! each orbit of Galois-conjugate characters, and verifies idempotency and
//! the partition of unity exactly in integer arithmetic. Inside each
//! isotypic component of the regular module it then searches for a minimal
//! invariant subspace by intersecting with kernels of cyclotomic polynomials
//! evaluated at right-translation operators (which commute with the left
//! action). The dimension found is always a multiple of the true minimal
//! dimension, never smaller than it; certification rules promote it to an
//! exact endomorphism-width statement where the arithmetic allows.

use num::integer::gcd;
use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::cyclotomic::CycloCtx;
use crate::exact::{self, rat, Rat, RowSpace};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::rational::{RationalStructure, SchurIndexValue};
use crate::{Error, Result};

/// Largest group order for which the regular-module oracle will run.
pub const ORACLE_ORDER_BOUND: usize = 360;

/// Number of seeded random element candidates tried by the minimal-subspace
/// search after the conjugacy-class representatives are exhausted.
const RANDOM_CANDIDATES: usize = 16;

/// An explicit permutation action of a group on a finite basis, defining a
/// `Q`-linear module structure. `action[x][j]` is the image of basis point
/// `j` under the element with index `x` in the group's element list.
pub struct ActionModule {
    dim: usize,
    action: Vec<Vec<u32>>,
    /// For the regular module only: `right_action[x][j] = j * x`, the
    /// right-translation tables used by the minimal-subspace search.
    right_action: Option<Vec<Vec<u32>>>,
}

impl ActionModule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Action table of the element with the given index.
    pub fn action_of(&self, element_index: usize) -> &[u32] {
        &self.action[element_index]
    }

    fn right_of(&self, element_index: usize) -> Result<&[u32]> {
        self.right_action
            .as_ref()
            .map(|t| t[element_index].as_slice())
            .ok_or_else(|| {
                Error::internal("right-translation tables are only available on the regular module")
            })
    }

    /// Verifies `action[x] . action[y] == action[x*y]` on a strided sample of
    /// triples, as a self-check of the constructed tables.
    fn spot_check(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        let stride = (n / 7).max(1);
        for x in (0..n).step_by(stride) {
            for y in (0..n).step_by(stride) {
                let xy = group.elements()[x].mul(&group.elements()[y]);
                let xy_idx = group
                    .element_index(&xy)
                    .ok_or_else(|| Error::internal("product escaped the group"))?;
                for j in (0..self.dim).step_by((self.dim / 5).max(1)) {
                    let via_pair = self.action[x][self.action[y][j] as usize];
                    let direct = self.action[xy_idx][j];
                    if via_pair != direct {
                        return Err(Error::internal(
                            "action table fails the composition spot check",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the regular module of `group`: basis indexed by group elements,
/// left translation as the action. Errors with a resource bound if the group
/// order exceeds [`ORACLE_ORDER_BOUND`].
pub fn regular_module(group: &FiniteGroup) -> Result<ActionModule> {
    let n = group.order();
    if n > ORACLE_ORDER_BOUND {
        return Err(Error::ResourceBound(format!(
            "group order {} exceeds the module-oracle bound {}",
            n, ORACLE_ORDER_BOUND
        )));
    }
    let elements = group.elements();
    let mut left = vec![vec![0u32; n]; n];
    let mut right = vec![vec![0u32; n]; n];
    for (x, ex) in elements.iter().enumerate() {
        for (g, eg) in elements.iter().enumerate() {
            let lp = ex.mul(eg);
            let rp = eg.mul(ex);
            left[x][g] = group
                .element_index(&lp)
                .ok_or_else(|| Error::internal("left translation escaped the group"))?
                as u32;
            right[x][g] = group
                .element_index(&rp)
                .ok_or_else(|| Error::internal("right translation escaped the group"))?
                as u32;
        }
    }
    let module = ActionModule {
        dim: n,
        action: left,
        right_action: Some(right),
    };
    module.spot_check(group)?;
    Ok(module)
}

/// Builds the natural module: the group acting on its permutation points.
pub fn natural_module(group: &FiniteGroup) -> Result<ActionModule> {
    let dim = usize::from(group.degree());
    let action = group
        .elements()
        .iter()
        .map(|e| (0..dim).map(|p| u32::from(e.apply(p as u16))).collect())
        .collect();
    let module = ActionModule {
        dim,
        action,
        right_action: None,
    };
    module.spot_check(group)?;
    Ok(module)
}

/// Builds the module of left cosets of `sub` in `group`, with the left
/// translation action on cosets.
pub fn coset_module(group: &FiniteGroup, sub: &FiniteGroup) -> Result<ActionModule> {
    let n = group.order();
    let h = sub.order();
    if n % h != 0 {
        return Err(Error::internal("subgroup order does not divide group order"));
    }
    let sub_indices = element_indices(group, sub)?;
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &hidx in &sub_indices {
            let member = group.elements()[x].mul(&group.elements()[hidx]);
            let idx = group
                .element_index(&member)
                .ok_or_else(|| Error::internal("coset member escaped the group"))?;
            if coset_of[idx] != usize::MAX && coset_of[idx] != c {
                return Err(Error::internal("inconsistent coset assignment"));
            }
            coset_of[idx] = c;
        }
    }
    let dim = reps.len();
    if dim != n / h {
        return Err(Error::internal("coset count does not match the index"));
    }
    let mut action = vec![vec![0u32; dim]; n];
    for (g, row) in action.iter_mut().enumerate() {
        for (c, &r) in reps.iter().enumerate() {
            let moved = group.elements()[g].mul(&group.elements()[r]);
            let idx = group
                .element_index(&moved)
                .ok_or_else(|| Error::internal("coset image escaped the group"))?;
            row[c] = coset_of[idx] as u32;
        }
    }
    let module = ActionModule {
        dim,
        action,
        right_action: None,
    };
    module.spot_check(group)?;
    Ok(module)
}

/// Indices in `group`'s element list of all elements of `sub`.
fn element_indices(group: &FiniteGroup, sub: &FiniteGroup) -> Result<Vec<usize>> {
    sub.elements()
        .iter()
        .map(|p| {
            group
                .element_index(p)
                .ok_or_else(|| Error::Membership("subgroup element not in ambient group".into()))
        })
        .collect()
}

/// Number of orbits of the whole group on the module's basis points.
pub fn orbit_count(group: &FiniteGroup, module: &ActionModule) -> usize {
    let gen_indices: Vec<usize> = group
        .generators()
        .iter()
        .filter_map(|g| group.element_index(g))
        .collect();
    let mut seen = vec![false; module.dim];
    let mut orbits = 0;
    for start in 0..module.dim {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            for &g in &gen_indices {
                let q = module.action[g][p] as usize;
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    orbits
}

/// The scaled projector `|G| * e` attached to one orbit of conjugate
/// characters, as an integer matrix acting on the module. Its entries are
/// `d * (orbit character sum)(x^{-1})` accumulated over the action.
fn scaled_projector(
    table: &CharacterTable,
    rs: &RationalStructure,
    orbit: usize,
    module: &ActionModule,
) -> Vec<Vec<i64>> {
    let classes = table.classes();
    let ob = &rs.orbits()[orbit];
    let d = ob.degree() as i64;
    let n = table.group().order();
    let mut m = vec![vec![0i64; module.dim]; module.dim];
    for x in 0..n {
        let cls = classes.class_of_index(x);
        let inv_cls = classes.inverse_class(cls);
        let coeff = d * ob.values()[inv_cls] as i64;
        if coeff == 0 {
            continue;
        }
        let row = &module.action[x];
        for j in 0..module.dim {
            m[row[j] as usize][j] += coeff;
        }
    }
    m
}

/// Verifies `M * M == order * M` exactly in integer arithmetic.
fn check_idempotent(m: &[Vec<i64>], order: i64) -> Result<()> {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc: i64 = 0;
            for k in 0..n {
                acc += m[i][k] * m[k][j];
            }
            if acc != order * m[i][j] {
                return Err(Error::internal("projector fails the idempotency check"));
            }
        }
    }
    Ok(())
}

/// Report for a single isotypic component of the regular module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Index of the character orbit this component belongs to.
    pub orbit: usize,
    /// Dimension of the isotypic component (projector rank).
    pub isotypic_dimension: usize,
    /// Smallest invariant-subspace dimension found by the search. Always a
    /// multiple of the true minimal dimension and never smaller than it.
    pub minimal_dimension: usize,
    /// `isotypic_dimension / minimal_dimension` when that ratio is an
    /// integer; absent when the search plateaued at a non-divisor.
    pub multiplicity: Option<usize>,
    /// `minimal_dimension / (orbit size * degree)`: the candidate value for
    /// the endomorphism width of the orbit's simple module.
    pub width_candidate: u64,
    /// The certified exact width, when a certification rule applies:
    /// a candidate of 1 is always exact, and a candidate of 2 together with
    /// indicator -1 is exact.
    pub width_certified: Option<u64>,
    /// True when the search ran out of candidates while the component could
    /// conceivably still split further.
    pub search_exhausted: bool,
}

/// Full decomposition report for the regular module of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub group_order: usize,
    pub components: Vec<ComponentReport>,
}

impl Decomposition {
    /// Sum of the isotypic dimensions; checked to equal the group order.
    pub fn isotypic_sum(&self) -> usize {
        self.components.iter().map(|c| c.isotypic_dimension).sum()
    }

    pub fn component(&self, orbit: usize) -> &ComponentReport {
        &self.components[orbit]
    }
}

/// Decomposes the regular module of `table`'s group into isotypic
/// components, with exact integer verification of every projector identity,
/// and searches each component for a minimal invariant subspace.
pub fn decompose_regular(
    table: &CharacterTable,
    rs: &RationalStructure,
    seed: u64,
) -> Result<Decomposition> {
    let group = table.group();
    let module = regular_module(group)?;
    let n = group.order();
    let order = n as i64;

    let projectors: Vec<Vec<Vec<i64>>> = (0..rs.count())
        .map(|ob| scaled_projector(table, rs, ob, &module))
        .collect();

    // Partition of unity: the scaled projectors sum to order * identity.
    for i in 0..n {
        for j in 0..n {
            let total: i64 = projectors.iter().map(|m| m[i][j]).sum();
            let expect = if i == j { order } else { 0 };
            if total != expect {
                return Err(Error::internal("projectors fail the partition of unity"));
            }
        }
    }

    let mut components = Vec::with_capacity(rs.count());
    for (ob, proj) in projectors.iter().enumerate() {
        check_idempotent(proj, order)?;
        let trace: i64 = (0..n).map(|i| proj[i][i]).sum();
        if trace < 0 || trace % order != 0 {
            return Err(Error::internal(
                "projector trace is not a multiple of the group order",
            ));
        }
        let iso_dim = (trace / order) as usize;
        let basis = column_space_basis(proj, iso_dim)?;
        let report = minimal_subspace(table, &module, rs, ob, basis, iso_dim, seed)?;
        components.push(report);
    }

    let total: usize = components.iter().map(|c| c.isotypic_dimension).sum();
    if total != n {
        return Err(Error::internal(
            "isotypic dimensions do not sum to the group order",
        ));
    }
    Ok(Decomposition {
        group_order: n,
        components,
    })
}

/// Extracts a basis of the column space of an idempotent-scaled integer
/// matrix whose rank is known from its trace.
fn column_space_basis(m: &[Vec<i64>], expected_rank: usize) -> Result<RowSpace> {
    let n = m.len();
    let mut space = RowSpace::new(n);
    for j in 0..n {
        if space.rank() == expected_rank {
            break;
        }
        let col: Vec<Rat> = (0..n).map(|i| rat(m[i][j])).collect();
        space.insert(col);
    }
    if space.rank() != expected_rank {
        return Err(Error::internal(
            "projector rank does not match its scaled trace",
        ));
    }
    Ok(space)
}

/// Applies the right-translation operator of element `t` to a vector.
fn right_translate(module: &ActionModule, t: usize, v: &[Rat]) -> Result<Vec<Rat>> {
    let tab = module.right_of(t)?;
    let mut out = vec![Rat::zero(); v.len()];
    for (j, val) in v.iter().enumerate() {
        if !val.is_zero() {
            out[tab[j] as usize] = val.clone();
        }
    }
    Ok(out)
}

/// Evaluates a cyclotomic polynomial at the right-translation operator of
/// `t`, applied to `v`, by Horner's rule on vectors.
fn cyclotomic_image(
    module: &ActionModule,
    t: usize,
    phi: &[i128],
    v: &[Rat],
) -> Result<Vec<Rat>> {
    let top = *phi.last().expect("nonempty polynomial");
    let mut acc: Vec<Rat> = v.iter().map(|x| x * rat(top as i64)).collect();
    for &c in phi.iter().rev().skip(1) {
        acc = right_translate(module, t, &acc)?;
        if c != 0 {
            let cr = rat(c as i64);
            for (a, b) in acc.iter_mut().zip(v) {
                if !b.is_zero() {
                    *a += b * &cr;
                }
            }
        }
    }
    Ok(acc)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Searches one isotypic component for a minimal invariant subspace by
/// intersecting with kernels of cyclotomic polynomials in right
/// translations, then certifies the endomorphism-width candidate.
fn minimal_subspace(
    table: &CharacterTable,
    module: &ActionModule,
    rs: &RationalStructure,
    orbit: usize,
    iso_basis: RowSpace,
    iso_dim: usize,
    seed: u64,
) -> Result<ComponentReport> {
    let group = table.group();
    let ob = &rs.orbits()[orbit];
    let floor = ob.orbit_size() * ob.degree() as usize;
    let n = group.order();

    // Candidate elements: class representatives ordered by class size, then
    // seeded random draws. The identity is useless and skipped.
    let identity_idx = group
        .element_index(&group.identity())
        .ok_or_else(|| Error::internal("identity missing from element list"))?;
    let mut candidates: Vec<usize> = Vec::new();
    {
        let classes = crate::classes::ClassData::new(group)?;
        for rep in classes.reps() {
            let idx = group
                .element_index(rep)
                .ok_or_else(|| Error::internal("class representative escaped the group"))?;
            if idx != identity_idx {
                candidates.push(idx);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_CANDIDATES {
            let idx = rng.gen_range(0..n);
            if idx != identity_idx && !candidates.contains(&idx) {
                candidates.push(idx);
            }
        }
    }

    let mut basis: Vec<Vec<Rat>> = iso_basis.rows().to_vec();
    let mut exhausted = false;
    while basis.len() > floor {
        let mut improved = false;
        'candidates: for &t in &candidates {
            let ord = group.elements()[t].order();
            for d in divisors(ord) {
                let phi = CycloCtx::new(d)?.phi_coeffs().to_vec();
                let images: Vec<Vec<Rat>> = basis
                    .iter()
                    .map(|w| cyclotomic_image(module, t, &phi, w))
                    .collect::<Result<_>>()?;
                // Solve sum_i c_i * images[i] = 0 over the coefficients.
                let rows: Vec<Vec<Rat>> = (0..module.dim)
                    .map(|a| images.iter().map(|im| im[a].clone()).collect())
                    .collect();
                let ker = exact::kernel(&rows, basis.len());
                if !ker.is_empty() && ker.len() < basis.len() {
                    let mut next: Vec<Vec<Rat>> = Vec::with_capacity(ker.len());
                    for c in &ker {
                        let mut v = vec![Rat::zero(); module.dim];
                        for (ci, w) in c.iter().zip(&basis) {
                            if !ci.is_zero() {
                                for (vj, wj) in v.iter_mut().zip(w) {
                                    if !wj.is_zero() {
                                        *vj += ci * wj;
                                    }
                                }
                            }
                        }
                        next.push(v);
                    }
                    basis = next;
                    improved = true;
                    break 'candidates;
                }
            }
        }
        if !improved {
            exhausted = true;
            break;
        }
    }

    // The subspace found must be invariant under the left action.
    let mut span = RowSpace::new(module.dim);
    for v in &basis {
        span.insert(v.clone());
    }
    if span.rank() != basis.len() {
        return Err(Error::internal("minimal-subspace basis lost independence"));
    }
    for g in group.generators() {
        let gi = group
            .element_index(g)
            .ok_or_else(|| Error::internal("generator missing from element list"))?;
        let tab = module.action_of(gi);
        for v in &basis {
            let mut moved = vec![Rat::zero(); module.dim];
            for (j, val) in v.iter().enumerate() {
                if !val.is_zero() {
                    moved[tab[j] as usize] = val.clone();
                }
            }
            if !span.contains(&moved) {
                return Err(Error::internal(
                    "candidate subspace is not invariant under the left action",
                ));
            }
        }
    }

    let min_dim = basis.len();
    if floor == 0 || min_dim % floor != 0 {
        return Err(Error::internal(
            "invariant subspace dimension is not a multiple of the orbit base dimension",
        ));
    }
    let width_candidate = (min_dim / floor) as u64;
    let fs = ob.fs_indicator();
    if fs == -1 && width_candidate % 2 != 0 {
        return Err(Error::internal(
            "indicator -1 forces an even width, but the candidate is odd",
        ));
    }
    let width_certified = width_certificate(table, rs, orbit, Some(width_candidate))?;
    let multiplicity = if min_dim > 0 && iso_dim % min_dim == 0 {
        Some(iso_dim / min_dim)
    } else {
        None
    };
    Ok(ComponentReport {
        orbit,
        isotypic_dimension: iso_dim,
        minimal_dimension: min_dim,
        multiplicity,
        width_candidate,
        width_certified,
        search_exhausted: exhausted,
    })
}

/// Greatest common divisor of the positive multiplicities of the orbit's
/// characters in a family of coset permutation modules.
///
/// Every coset module is realizable over `Q`, and the multiplicity of an
/// irreducible character in any rationally realizable module is divisible
/// by its endomorphism width; so the width divides this gcd. The
/// multiplicity in the module of cosets of `H` equals the `H`-fixed
/// dimension of the character, read off from the table. The family scanned
/// is: the trivial subgroup (multiplicity = degree), every cyclic subgroup
/// generated by a class representative, and every subgroup generated by a
/// pair of class representatives.
fn multiplicity_gcd(table: &CharacterTable, member: usize) -> Result<u64> {
    let group = table.group();
    let classes = table.classes();
    let mut g = table.character(member).degree();
    if g == 1 {
        return Ok(1);
    }
    let mut seen = std::collections::HashSet::new();
    let reps = classes.reps().to_vec();
    // Conjugating the second generator varies the relative position of the
    // pair, reaching subgroups (such as exceptional small-index ones) that
    // fixed representatives alone would miss.
    let conjugators: Vec<Perm> = {
        let stride = (group.order() / 7).max(1);
        group.elements().iter().step_by(stride).cloned().collect()
    };
    for i in 0..reps.len() {
        for j in i..reps.len() {
            for c in &conjugators {
                let gens = if i == j {
                    vec![reps[i].clone()]
                } else {
                    vec![reps[i].clone(), reps[j].conjugate_by(c)]
                };
                let sub = group.subgroup(gens)?;
                let fresh = seen.insert(sub.canonical_content());
                if sub.order() == group.order() || !fresh {
                    if i == j {
                        break;
                    }
                    continue;
                }
                let d = table.fixed_dim(member, &sub)?;
                if d > 0 {
                    g = gcd(g, d);
                    if g == 1 {
                        return Ok(1);
                    }
                }
                if i == j {
                    break;
                }
            }
        }
    }
    Ok(g)
}

/// Attempts to certify the exact endomorphism width of an orbit's simple
/// module from divisibility constraints alone.
///
/// `known_multiple` is an optional positive multiple of the width (such as
/// the ratio found by the invariant-subspace search). The width also
/// divides the multiplicity gcd over coset modules, and a real-valued
/// character (indicator +1 or -1) has width at most 2, while indicator -1
/// forces an even width. When these constraints pin the width to a single
/// value, that value is returned.
pub fn width_certificate(
    table: &CharacterTable,
    rs: &RationalStructure,
    orbit: usize,
    known_multiple: Option<u64>,
) -> Result<Option<u64>> {
    let ob = &rs.orbits()[orbit];
    let fs = ob.fs_indicator();
    // `pin` is maintained as a positive integer divisible by the width;
    // gcd(0, x) = x makes 0 the neutral starting value.
    let mut pin = known_multiple.unwrap_or(0);
    if pin == 1 {
        return Ok(Some(1));
    }
    if pin == 2 && fs == -1 {
        return Ok(Some(2));
    }
    pin = gcd(pin, multiplicity_gcd(table, ob.members()[0])?);
    if fs != 0 {
        // Real-valued characters have width dividing 2.
        pin = gcd(pin, 2);
    }
    if fs == -1 && pin % 2 != 0 {
        return Err(Error::internal(
            "indicator -1 forces an even width, but divisibility pins an odd value",
        ));
    }
    Ok(if pin == 1 {
        Some(1)
    } else if pin == 2 && fs == -1 {
        Some(2)
    } else {
        None
    })
}

/// Per-orbit isotypic dimensions of an arbitrary permutation module, with
/// the same exact projector verifications as the regular decomposition,
/// plus the check that the trivial component's dimension equals the number
/// of group orbits on the basis points.
pub fn decompose_permutation(
    table: &CharacterTable,
    rs: &RationalStructure,
    module: &ActionModule,
) -> Result<Vec<usize>> {
    let group = table.group();
    let order = group.order() as i64;
    let projectors: Vec<Vec<Vec<i64>>> = (0..rs.count())
        .map(|ob| scaled_projector(table, rs, ob, module))
        .collect();
    for i in 0..module.dim {
        for j in 0..module.dim {
            let total: i64 = projectors.iter().map(|m| m[i][j]).sum();
            let expect = if i == j { order } else { 0 };
            if total != expect {
                return Err(Error::internal("projectors fail the partition of unity"));
            }
        }
    }
    let mut dims = Vec::with_capacity(rs.count());
    for proj in &projectors {
        check_idempotent(proj, order)?;
        let trace: i64 = (0..module.dim).map(|i| proj[i][i]).sum();
        if trace < 0 || trace % order != 0 {
            return Err(Error::internal(
                "projector trace is not a multiple of the group order",
            ));
        }
        dims.push((trace / order) as usize);
    }
    if dims.iter().sum::<usize>() != module.dim {
        return Err(Error::internal(
            "isotypic dimensions do not sum to the module dimension",
        ));
    }
    if dims[rs.trivial_orbit()] != orbit_count(group, module) {
        return Err(Error::internal(
            "trivial component dimension disagrees with the orbit count",
        ));
    }
    Ok(dims)
}

/// Dimension of the subspace fixed by every element of `sub`, computed by
/// exact rank arithmetic on `sum_h action(h) - |H| * I`.
pub fn fixed_dimension(
    group: &FiniteGroup,
    module: &ActionModule,
    sub: &FiniteGroup,
) -> Result<usize> {
    let indices = element_indices(group, sub)?;
    let h = indices.len() as i64;
    let mut s = vec![vec![0i64; module.dim]; module.dim];
    for &hidx in &indices {
        let row = &module.action[hidx];
        for j in 0..module.dim {
            s[row[j] as usize][j] += 1;
        }
    }
    for j in 0..module.dim {
        s[j][j] -= h;
    }
    let rows: Vec<Vec<Rat>> = s
        .iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    Ok(module.dim - exact::rank(&rows))
}

/// Endomorphism-width annotations derived from the regular-module oracle:
/// certified components give exact values, everything else falls back to
/// the sound lower bound implied by the indicator.
pub fn schur_indices_oracle(
    table: &CharacterTable,
    rs: &RationalStructure,
    seed: u64,
) -> Result<Vec<SchurIndexValue>> {
    let decomposition = decompose_regular(table, rs, seed)?;
    Ok(annotations_from_decomposition(&decomposition, rs))
}

/// Width annotations read off an existing decomposition: certified
/// components are exact, the rest fall back to the indicator bound.
pub fn annotations_from_decomposition(
    decomposition: &Decomposition,
    rs: &RationalStructure,
) -> Vec<SchurIndexValue> {
    decomposition
        .components
        .iter()
        .zip(rs.orbits())
        .map(|(comp, ob)| match comp.width_certified {
            Some(m) => SchurIndexValue::Exact(m),
            None => {
                if ob.fs_indicator() == -1 {
                    SchurIndexValue::LowerBound(2)
                } else {
                    SchurIndexValue::LowerBound(1)
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::CharacterTable;
    use crate::rational::RationalStructure;

    fn setup(spec: &str) -> (CharacterTable, RationalStructure) {
        let g = FiniteGroup::from_spec(spec).unwrap();
        let t = CharacterTable::build(g).unwrap();
        let r = RationalStructure::from_table(&t).unwrap();
        (t, r)
    }

    #[test]
    fn s3_regular_module_splits_into_expected_pieces() {
        let (t, r) = setup("S3");
        let d = decompose_regular(&t, &r, 0).unwrap();
        assert_eq!(d.group_order, 6);
        // Orbit order: sign, trivial, two-dimensional.
        let iso: Vec<usize> = d.components.iter().map(|c| c.isotypic_dimension).collect();
        assert_eq!(iso, vec![1, 1, 4]);
        let min: Vec<usize> = d.components.iter().map(|c| c.minimal_dimension).collect();
        assert_eq!(min, vec![1, 1, 2]);
        let mult: Vec<usize> = d
            .components
            .iter()
            .map(|c| c.multiplicity.unwrap())
            .collect();
        assert_eq!(mult, vec![1, 1, 2]);
        for c in &d.components {
            assert_eq!(c.width_certified, Some(1));
        }
    }

    #[test]
    fn a4_regular_module_splits_into_expected_pieces() {
        let (t, r) = setup("A4");
        let d = decompose_regular(&t, &r, 0).unwrap();
        // Orbit order: fused linear pair, trivial, three-dimensional.
        let iso: Vec<usize> = d.components.iter().map(|c| c.isotypic_dimension).collect();
        assert_eq!(iso, vec![2, 1, 9]);
        let min: Vec<usize> = d.components.iter().map(|c| c.minimal_dimension).collect();
        assert_eq!(min, vec![2, 1, 3]);
        let mult: Vec<usize> = d
            .components
            .iter()
            .map(|c| c.multiplicity.unwrap())
            .collect();
        assert_eq!(mult, vec![1, 1, 3]);
        for c in &d.components {
            assert_eq!(c.width_certified, Some(1));
        }
    }

    #[test]
    fn sl2_5_quaternionic_components_have_width_two() {
        let (t, r) = setup("SL2(5)");
        let d = decompose_regular(&t, &r, 0).unwrap();
        assert_eq!(d.isotypic_sum(), 120);
        // The fused pair of degree-2 characters: isotypic 8, minimal 8.
        let pair = r
            .orbits()
            .iter()
            .position(|o| o.degree() == 2 && o.orbit_size() == 2)
            .expect("fused degree-2 orbit");
        assert_eq!(d.component(pair).isotypic_dimension, 8);
        assert_eq!(d.component(pair).minimal_dimension, 8);
        assert_eq!(d.component(pair).width_certified, Some(2));
        // The faithful degree-4 singleton: isotypic 16, minimal 8.
        let four = r
            .orbits()
            .iter()
            .position(|o| o.degree() == 4 && o.orbit_size() == 1 && o.fs_indicator() == -1)
            .expect("quaternionic degree-4 orbit");
        assert_eq!(d.component(four).isotypic_dimension, 16);
        assert_eq!(d.component(four).minimal_dimension, 8);
        assert_eq!(d.component(four).width_certified, Some(2));
        // The faithful degree-6 singleton: isotypic 36, minimal 12.
        let six = r
            .orbits()
            .iter()
            .position(|o| o.degree() == 6 && o.fs_indicator() == -1)
            .expect("quaternionic degree-6 orbit");
        assert_eq!(d.component(six).minimal_dimension, 12);
        assert_eq!(d.component(six).width_certified, Some(2));
    }

    #[test]
    fn psl2_7_minimal_dimensions() {
        let (t, r) = setup("PSL2(7)");
        let d = decompose_regular(&t, &r, 0).unwrap();
        assert_eq!(d.isotypic_sum(), 168);
        let mut min: Vec<usize> = d.components.iter().map(|c| c.minimal_dimension).collect();
        min.sort_unstable();
        assert_eq!(min, vec![1, 6, 6, 7, 8]);
        for c in &d.components {
            assert_eq!(c.width_certified, Some(1));
        }
    }

    #[test]
    fn s4_natural_module_contains_trivial_and_standard() {
        let (t, r) = setup("S4");
        let module = natural_module(t.group()).unwrap();
        let dims = decompose_permutation(&t, &r, &module).unwrap();
        assert_eq!(dims.iter().sum::<usize>(), 4);
        assert_eq!(dims[r.trivial_orbit()], 1);
        // The other nonzero component is the standard three-dimensional one,
        // identified by its value +1 on the transposition class.
        let std_orbit = r
            .orbits()
            .iter()
            .position(|o| o.degree() == 3 && o.values()[2] == 1)
            .expect("standard orbit");
        assert_eq!(dims[std_orbit], 3);
        for (i, &dim) in dims.iter().enumerate() {
            if i != r.trivial_orbit() && i != std_orbit {
                assert_eq!(dim, 0);
            }
        }
    }

    #[test]
    fn coset_module_of_point_stabilizer_matches_natural_module() {
        let (t, r) = setup("S4");
        let g = t.group();
        // Stabilizer of the point 4: an S3 on the first three points.
        let sub = g
            .subgroup_from_cycles(&["(1 2)", "(1 2 3)"])
            .unwrap();
        let cosets = coset_module(g, &sub).unwrap();
        assert_eq!(cosets.dim(), 4);
        let natural = natural_module(g).unwrap();
        let a = decompose_permutation(&t, &r, &cosets).unwrap();
        let b = decompose_permutation(&t, &r, &natural).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_dimensions_by_rank_arithmetic() {
        let (t, _) = setup("S3");
        let g = t.group();
        let module = regular_module(g).unwrap();
        let sub = g.subgroup_from_cycles(&["(1 2)"]).unwrap();
        // The fixed space of a subgroup acting on the regular module has
        // dimension equal to the number of its right cosets.
        assert_eq!(fixed_dimension(g, &module, &sub).unwrap(), 3);

        let (t4, _) = setup("S4");
        let g4 = t4.group();
        let natural = natural_module(g4).unwrap();
        let cyc = g4.subgroup_from_cycles(&["(1 2 3 4)"]).unwrap();
        assert_eq!(fixed_dimension(g4, &natural, &cyc).unwrap(), 1);
        let pair = g4.subgroup_from_cycles(&["(1 2)"]).unwrap();
        assert_eq!(fixed_dimension(g4, &natural, &pair).unwrap(), 3);
    }

    #[test]
    fn oracle_schur_annotations_for_small_groups() {
        let (t, r) = setup("C5");
        let ann = schur_indices_oracle(&t, &r, 0).unwrap();
        assert!(ann.iter().all(|a| *a == SchurIndexValue::Exact(1)));

        let (t2, r2) = setup("SL2(5)");
        let ann2 = schur_indices_oracle(&t2, &r2, 0).unwrap();
        for (a, o) in ann2.iter().zip(r2.orbits()) {
            if o.fs_indicator() == -1 {
                assert_eq!(*a, SchurIndexValue::Exact(2));
            } else {
                assert_eq!(*a, SchurIndexValue::Exact(1));
            }
        }
    }

    #[test]
    fn oracle_bound_is_enforced() {
        let g = FiniteGroup::from_spec("PSL2(11)").unwrap();
        assert!(matches!(
            regular_module(&g),
            Err(Error::ResourceBound(_))
        ));
    }
}
