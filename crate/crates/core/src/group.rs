//! Finite permutation groups: construction from a textual grammar, element
//! enumeration, subgroups, and abelianization.

use crate::error::{Error, Result};
use crate::perm::Perm;
use std::collections::{HashMap, HashSet, VecDeque};

/// Hard cap on full element enumeration.  Exceeding it is a resource error,
/// not a panic.
pub const ELEMENT_BOUND: usize = 100_000;

/// A finite permutation group with its elements fully enumerated and sorted.
///
/// The element list is sorted lexicographically by image vector; this fixed
/// ordering makes every derived object (conjugacy classes, character rows)
/// deterministic for a given construction.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    degree: u16,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl FiniteGroup {
    /// Build a group from explicit generators, enumerating all elements.
    pub fn from_generators(name: impl Into<String>, degree: u16, generators: Vec<Perm>) -> Result<FiniteGroup> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Parse(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
        }
        let elements = closure(degree, &generators, ELEMENT_BOUND)?;
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(FiniteGroup {
            name: name.into(),
            degree,
            generators,
            elements,
            index,
        })
    }

    /// Parse the group grammar:
    ///
    /// * `C<n>`, `D<n>`, `A<n>`, `S<n>` — cyclic, dihedral (order 2n),
    ///   alternating, symmetric;
    /// * `SL2(<p>)`, `PSL2(<p>)` — for an odd prime p, acting on the nonzero
    ///   vectors of F_p^2 (degree p^2-1) resp. the projective line (degree p+1);
    /// * `perm degree=<d> gens=[(1 2 3)(4 5), ...]` — explicit generators in
    ///   1-based cycle notation.
    pub fn from_spec(spec: &str) -> Result<FiniteGroup> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("perm ") {
            return parse_perm_spec(spec, rest);
        }
        if let Some(p) = parse_family(spec, "SL2(", ")")? {
            return sl2(p);
        }
        if let Some(p) = parse_family(spec, "PSL2(", ")")? {
            return psl2(p);
        }
        for (prefix, builder) in [
            ("C", cyclic as fn(u16) -> Result<FiniteGroup>),
            ("D", dihedral),
            ("A", alternating),
            ("S", symmetric),
        ] {
            if let Some(n) = spec.strip_prefix(prefix) {
                if let Ok(n) = n.parse::<u16>() {
                    return builder(n);
                }
            }
        }
        Err(Error::Parse(format!(
            "unrecognized group spec {:?} (expected C<n>, D<n>, A<n>, S<n>, SL2(p), PSL2(p), or perm degree=.. gens=[..])",
            spec
        )))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in the fixed lexicographic ordering.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    /// Index of an element in the fixed ordering.
    pub fn element_index(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Exponent: lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1u64, |acc, g| num::integer::lcm(acc, g.order()))
    }

    /// The subgroup generated by `gens`, which must all lie in this group.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<FiniteGroup> {
        for g in &gens {
            if !self.contains(g) {
                return Err(Error::Membership(format!(
                    "{} is not an element of {}",
                    g, self.name
                )));
            }
        }
        let gen_names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        let sub = FiniteGroup::from_generators(
            format!("{}<{}>", self.name, gen_names.join(", ")),
            self.degree,
            gens,
        )?;
        debug_assert_eq!(self.order() % sub.order(), 0);
        Ok(sub)
    }

    /// Subgroup from 1-based cycle strings, e.g. `["(2 3)"]`.
    pub fn subgroup_from_cycles(&self, cycle_strs: &[&str]) -> Result<FiniteGroup> {
        let gens = cycle_strs
            .iter()
            .map(|s| Perm::parse_cycles(self.degree, s))
            .collect::<Result<Vec<_>>>()?;
        self.subgroup(gens)
    }

    /// The commutator subgroup `[G, G]` as the normal closure of the
    /// generator commutators.
    pub fn commutator_subgroup(&self) -> Result<FiniteGroup> {
        let mut seeds: Vec<Perm> = Vec::new();
        let mut seen: HashSet<Perm> = HashSet::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.mul(b).mul(&a.inverse()).mul(&b.inverse());
                if !c.is_identity() && seen.insert(c.clone()) {
                    seeds.push(c);
                }
            }
        }
        // Normal closure: repeatedly close under the subgroup operation and
        // conjugation by the ambient generators until stable.
        loop {
            let sub_elems = closure(self.degree, &seeds, ELEMENT_BOUND)?;
            let sub_set: HashSet<&Perm> = sub_elems.iter().collect();
            let mut new_seed = None;
            'outer: for h in &sub_elems {
                for g in &self.generators {
                    let c = h.conjugate_by(g);
                    if !sub_set.contains(&c) {
                        new_seed = Some(c);
                        break 'outer;
                    }
                }
            }
            match new_seed {
                Some(c) => seeds.push(c),
                None => {
                    return FiniteGroup::from_generators(
                        format!("[{0}, {0}]", self.name),
                        self.degree,
                        seeds,
                    )
                }
            }
        }
    }

    /// Order of the abelianization `G / [G, G]`.
    pub fn abelianization_order(&self) -> Result<usize> {
        Ok(self.order() / self.commutator_subgroup()?.order())
    }

    /// Whether the group has a subgroup of index 2, i.e. whether the
    /// abelianization has even order.
    pub fn has_index_two_subgroup(&self) -> Result<bool> {
        Ok(self.abelianization_order()? % 2 == 0)
    }

    /// Canonical content string identifying the construction: degree plus the
    /// sorted generator image vectors.  Used as the cache and override-table
    /// identity.
    pub fn canonical_content(&self) -> String {
        let mut gens: Vec<Vec<u16>> = self
            .generators
            .iter()
            .map(|g| g.images().to_vec())
            .collect();
        gens.sort();
        let gen_strs: Vec<String> = gens
            .iter()
            .map(|imgs| {
                imgs.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("degree={};gens=[{}]", self.degree, gen_strs.join("|"))
    }
}

/// BFS closure of a generator set inside Sym(degree), sorted lexicographically.
fn closure(degree: u16, gens: &[Perm], bound: usize) -> Result<Vec<Perm>> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue: VecDeque<Perm> = VecDeque::new();
    let id = Perm::identity(degree);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(cur) = queue.pop_front() {
        for g in gens {
            let next = g.mul(&cur);
            if !seen.contains(&next) {
                if seen.len() >= bound {
                    return Err(Error::ResourceBound(format!(
                        "group closure exceeded the element bound {}",
                        bound
                    )));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Ok(elements)
}

fn parse_family(spec: &str, prefix: &str, suffix: &str) -> Result<Option<u16>> {
    if let Some(rest) = spec.strip_prefix(prefix) {
        if let Some(num) = rest.strip_suffix(suffix) {
            let p: u16 = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter in {:?}", spec)))?;
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn parse_perm_spec(full: &str, rest: &str) -> Result<FiniteGroup> {
    let rest = rest.trim();
    let rest = rest
        .strip_prefix("degree=")
        .ok_or_else(|| Error::Parse(format!("expected degree=<d> in {:?}", full)))?;
    let (deg_str, rest) = rest
        .split_once(' ')
        .ok_or_else(|| Error::Parse(format!("expected gens=[..] in {:?}", full)))?;
    let degree: u16 = deg_str
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree {:?}", deg_str)))?;
    if degree == 0 {
        return Err(Error::Parse("degree must be at least 1".into()));
    }
    let rest = rest.trim();
    let inner = rest
        .strip_prefix("gens=[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected gens=[..] in {:?}", full)))?;
    let mut gens = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        gens.push(Perm::parse_cycles(degree, part)?);
    }
    FiniteGroup::from_generators(full, degree, gens)
}

fn cyclic(n: u16) -> Result<FiniteGroup> {
    let degree = n.max(1);
    let gens = if n >= 2 {
        vec![full_cycle(n)]
    } else {
        vec![]
    };
    FiniteGroup::from_generators(format!("C{}", n), degree, gens)
}

fn dihedral(n: u16) -> Result<FiniteGroup> {
    let name = format!("D{}", n);
    match n {
        0 => Err(Error::Parse("D0 is not a group spec".into())),
        // Degenerate small cases get faithful degree-2 and degree-4 models.
        1 => FiniteGroup::from_generators(name, 2, vec![full_cycle(2)]),
        2 => {
            let a = Perm::parse_cycles(4, "(1 2)")?;
            let b = Perm::parse_cycles(4, "(3 4)")?;
            FiniteGroup::from_generators(name, 4, vec![a, b])
        }
        _ => {
            let r = full_cycle(n);
            let s = Perm::from_images((0..n).rev().collect())?;
            FiniteGroup::from_generators(name, n, vec![r, s])
        }
    }
}

fn alternating(n: u16) -> Result<FiniteGroup> {
    let name = format!("A{}", n);
    let degree = n.max(1);
    if n < 3 {
        return FiniteGroup::from_generators(name, degree, vec![]);
    }
    let mut gens = Vec::new();
    for i in 0..=(n - 3) {
        let mut images: Vec<u16> = (0..n).collect();
        images[i as usize] = i + 1;
        images[(i + 1) as usize] = i + 2;
        images[(i + 2) as usize] = i;
        gens.push(Perm::from_images(images)?);
    }
    FiniteGroup::from_generators(name, degree, gens)
}

fn symmetric(n: u16) -> Result<FiniteGroup> {
    let name = format!("S{}", n);
    let degree = n.max(1);
    if n < 2 {
        return FiniteGroup::from_generators(name, degree, vec![]);
    }
    let mut transposition: Vec<u16> = (0..n).collect();
    transposition.swap(0, 1);
    let gens = vec![Perm::from_images(transposition)?, full_cycle(n)];
    FiniteGroup::from_generators(name, degree, gens)
}

fn full_cycle(n: u16) -> Perm {
    let images: Vec<u16> = (0..n).map(|i| (i + 1) % n).collect();
    Perm::from_images(images).expect("rotation is a permutation")
}

fn check_odd_prime(p: u16) -> Result<u64> {
    let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !is_prime || p == 2 {
        return Err(Error::Domain(format!("{} is not an odd prime", p)));
    }
    Ok(p as u64)
}

/// SL2(p) acting on the p^2 - 1 nonzero vectors of F_p^2.
///
/// Vectors (x, y) != (0, 0) are indexed lexicographically; the generators are
/// the standard unipotent T = [[1,1],[0,1]] and the Weyl element
/// S = [[0,-1],[1,0]].
fn sl2(p: u16) -> Result<FiniteGroup> {
    let pv = check_odd_prime(p)?;
    let expected_order = pv * (pv * pv - 1);
    if expected_order as usize > ELEMENT_BOUND {
        return Err(Error::ResourceBound(format!(
            "SL2({}) has order {}, beyond the element bound {}",
            p, expected_order, ELEMENT_BOUND
        )));
    }
    let degree = p * p - 1;
    let vec_index = |x: u16, y: u16| -> u16 {
        // (0,0) excluded; lexicographic rank among nonzero vectors.
        let rank = x * p + y;
        rank - 1
    };
    let mat_perm = |a: i64, b: i64, c: i64, d: i64| -> Result<Perm> {
        let m = |v: i64| -> u16 { (v.rem_euclid(p as i64)) as u16 };
        let mut images = vec![0u16; degree as usize];
        for x in 0..p {
            for y in 0..p {
                if x == 0 && y == 0 {
                    continue;
                }
                let nx = m(a * x as i64 + b * y as i64);
                let ny = m(c * x as i64 + d * y as i64);
                images[vec_index(x, y) as usize] = vec_index(nx, ny);
            }
        }
        Perm::from_images(images)
    };
    let t = mat_perm(1, 1, 0, 1)?;
    let s = mat_perm(0, -1, 1, 0)?;
    let group = FiniteGroup::from_generators(format!("SL2({})", p), degree, vec![t, s])?;
    if group.order() as u64 != expected_order {
        return Err(Error::Internal(format!(
            "SL2({}) construction has order {}, expected {}",
            p,
            group.order(),
            expected_order
        )));
    }
    Ok(group)
}

/// PSL2(p) acting on the p + 1 points of the projective line over F_p.
///
/// Points [x : 1] for x in 0..p are indexed 0..p, and [1 : 0] is index p.
fn psl2(p: u16) -> Result<FiniteGroup> {
    let pv = check_odd_prime(p)?;
    let expected_order = pv * (pv * pv - 1) / 2;
    if expected_order as usize > ELEMENT_BOUND {
        return Err(Error::ResourceBound(format!(
            "PSL2({}) has order {}, beyond the element bound {}",
            p, expected_order, ELEMENT_BOUND
        )));
    }
    let degree = p + 1;
    let mat_perm = |a: i64, b: i64, c: i64, d: i64| -> Result<Perm> {
        let pi = p as i64;
        let mut images = vec![0u16; degree as usize];
        let project = |x: i64, y: i64| -> u16 {
            let (x, y) = (x.rem_euclid(pi), y.rem_euclid(pi));
            if y == 0 {
                p
            } else {
                // Normalize to [x/y : 1] via Fermat inversion.
                let mut inv = 1i64;
                let mut base = y;
                let mut exp = pi - 2;
                while exp > 0 {
                    if exp & 1 == 1 {
                        inv = inv * base % pi;
                    }
                    base = base * base % pi;
                    exp >>= 1;
                }
                ((x * inv).rem_euclid(pi)) as u16
            }
        };
        for idx in 0..degree {
            let (x, y) = if idx == p { (1i64, 0i64) } else { (idx as i64, 1i64) };
            images[idx as usize] = project(a * x + b * y, c * x + d * y);
        }
        Perm::from_images(images)
    };
    let t = mat_perm(1, 1, 0, 1)?;
    let s = mat_perm(0, -1, 1, 0)?;
    let group = FiniteGroup::from_generators(format!("PSL2({})", p), degree, vec![t, s])?;
    if group.order() as u64 != expected_order {
        return Err(Error::Internal(format!(
            "PSL2({}) construction has order {}, expected {}",
            p,
            group.order(),
            expected_order
        )));
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_group_orders() {
        for (spec, order) in [
            ("C1", 1),
            ("C6", 6),
            ("C12", 12),
            ("D1", 2),
            ("D2", 4),
            ("D4", 8),
            ("S1", 1),
            ("S3", 6),
            ("S4", 24),
            ("A2", 1),
            ("A3", 3),
            ("A4", 12),
            ("A5", 60),
            ("A6", 360),
            ("SL2(3)", 24),
            ("SL2(5)", 120),
            ("SL2(7)", 336),
            ("PSL2(5)", 60),
            ("PSL2(7)", 168),
            ("PSL2(11)", 660),
        ] {
            let g = FiniteGroup::from_spec(spec).unwrap();
            assert_eq!(g.order(), order, "order of {}", spec);
        }
    }

    #[test]
    fn perm_spec_grammar() {
        let g = FiniteGroup::from_spec("perm degree=7 gens=[(1 2 3 4 5 6 7), (2 3 5)(4 7 6)]")
            .unwrap();
        assert_eq!(g.order(), 21);
        let trivial = FiniteGroup::from_spec("perm degree=3 gens=[]").unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(FiniteGroup::from_spec("perm degree=3 gens=[(1 4)]").is_err());
        assert!(FiniteGroup::from_spec("Q8").is_err());
        assert!(FiniteGroup::from_spec("SL2(4)").is_err());
        assert!(FiniteGroup::from_spec("SL2(2)").is_err());
    }

    #[test]
    fn subgroup_closure_and_membership() {
        let s3 = FiniteGroup::from_spec("S3").unwrap();
        let h = s3.subgroup_from_cycles(&["(2 3)"]).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(s3.order() / h.order(), 3);

        let a4 = FiniteGroup::from_spec("A4").unwrap();
        let h3 = a4.subgroup_from_cycles(&["(2 3 4)"]).unwrap();
        assert_eq!(h3.order(), 3);
        assert_eq!(a4.order() / h3.order(), 4);

        let trivial = s3.subgroup(vec![]).unwrap();
        assert_eq!(trivial.order(), 1);

        // A transposition is not in A4.
        let odd = Perm::parse_cycles(4, "(1 2)").unwrap();
        assert!(matches!(a4.subgroup(vec![odd]), Err(Error::Membership(_))));
    }

    #[test]
    fn abelianization_orders() {
        for (spec, ab) in [("A5", 1), ("S4", 2), ("C6", 6), ("A4", 3), ("D4", 4)] {
            let g = FiniteGroup::from_spec(spec).unwrap();
            assert_eq!(g.abelianization_order().unwrap(), ab, "abelianization of {}", spec);
        }
    }

    #[test]
    fn index_two_detection() {
        for (spec, expected) in [("SL2(5)", false), ("S4", true), ("C2", true), ("A5", false)] {
            let g = FiniteGroup::from_spec(spec).unwrap();
            assert_eq!(g.has_index_two_subgroup().unwrap(), expected, "{}", spec);
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(FiniteGroup::from_spec("S4").unwrap().exponent(), 12);
        assert_eq!(FiniteGroup::from_spec("A5").unwrap().exponent(), 30);
        assert_eq!(FiniteGroup::from_spec("C12").unwrap().exponent(), 12);
    }

    #[test]
    fn element_bound_is_enforced() {
        // S9 has order 362880 > 100000.
        let res = FiniteGroup::from_spec("S9");
        assert!(matches!(res, Err(Error::ResourceBound(_))));
    }

    #[test]
    fn canonical_content_ignores_generator_order() {
        let a = FiniteGroup::from_spec("perm degree=3 gens=[(1 2), (1 2 3)]").unwrap();
        let b = FiniteGroup::from_spec("perm degree=3 gens=[(1 2 3), (1 2)]").unwrap();
        assert_eq!(a.canonical_content(), b.canonical_content());
    }
}
