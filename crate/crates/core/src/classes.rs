//! Conjugacy classes, class multiplication coefficients, and the power map
//! used when lifting eigenvalue data back to character values.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;

/// Conjugacy class structure of a finite group.
///
/// Classes are sorted by (size, lexicographically smallest member), which puts
/// the identity class first and fixes a deterministic ordering for everything
/// downstream.
#[derive(Clone, Debug)]
pub struct ClassData {
    /// Smallest member of each class, in class order.
    reps: Vec<Perm>,
    /// Class sizes, in class order.
    sizes: Vec<usize>,
    /// Class index of each group element, indexed by element index.
    class_of_element: Vec<usize>,
    /// `inverse_class[k]` is the class containing the inverses of class `k`.
    inverse_class: Vec<usize>,
    /// `power_class[k][t]` is the class of `rep_k^t`, for `t` in `0..e` where
    /// `e` is the group exponent.
    power_class: Vec<Vec<usize>>,
    /// Order of each class representative.
    rep_orders: Vec<u64>,
    exponent: u64,
}

impl ClassData {
    pub fn new(group: &FiniteGroup) -> Result<ClassData> {
        let elements = group.elements();
        let n = elements.len();
        let mut class_of_element = vec![usize::MAX; n];
        // Orbits of the conjugation action, found by BFS from each unvisited
        // element; each orbit is one conjugacy class.
        let mut raw_classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of_element[start] != usize::MAX {
                continue;
            }
            let class_id = raw_classes.len();
            let mut members = vec![start];
            class_of_element[start] = class_id;
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for g in group.generators() {
                    let conj = elements[i].conjugate_by(g);
                    let j = group
                        .element_index(&conj)
                        .ok_or_else(|| Error::Internal("conjugate left the group".into()))?;
                    if class_of_element[j] == usize::MAX {
                        class_of_element[j] = class_id;
                        members.push(j);
                        frontier.push(j);
                    }
                }
            }
            raw_classes.push(members);
        }

        // Sort classes by (size, smallest member).  Element order is
        // lexicographic, so min element index = lexicographically smallest.
        let mut order: Vec<usize> = (0..raw_classes.len()).collect();
        let min_member: Vec<usize> = raw_classes
            .iter()
            .map(|c| *c.iter().min().expect("classes are nonempty"))
            .collect();
        order.sort_by_key(|&c| (raw_classes[c].len(), min_member[c]));
        let mut relabel = vec![0usize; raw_classes.len()];
        for (new_id, &old_id) in order.iter().enumerate() {
            relabel[old_id] = new_id;
        }
        for slot in class_of_element.iter_mut() {
            *slot = relabel[*slot];
        }
        let reps: Vec<Perm> = order
            .iter()
            .map(|&old_id| elements[min_member[old_id]].clone())
            .collect();
        let sizes: Vec<usize> = order.iter().map(|&old_id| raw_classes[old_id].len()).collect();

        let exponent = group.exponent();
        let r = reps.len();
        let mut inverse_class = vec![0usize; r];
        let mut power_class = vec![Vec::with_capacity(exponent as usize); r];
        let mut rep_orders = vec![0u64; r];
        for k in 0..r {
            let inv_idx = group
                .element_index(&reps[k].inverse())
                .ok_or_else(|| Error::Internal("inverse left the group".into()))?;
            inverse_class[k] = class_of_element[inv_idx];
            rep_orders[k] = reps[k].order();
            let mut power = group.identity();
            for _t in 0..exponent {
                let idx = group
                    .element_index(&power)
                    .ok_or_else(|| Error::Internal("power left the group".into()))?;
                power_class[k].push(class_of_element[idx]);
                power = reps[k].mul(&power);
            }
        }

        Ok(ClassData {
            reps,
            sizes,
            class_of_element,
            inverse_class,
            power_class,
            rep_orders,
            exponent,
        })
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Perm] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Class index of the group element with the given element index.
    pub fn class_of_index(&self, element_index: usize) -> usize {
        self.class_of_element[element_index]
    }

    /// Class index of an arbitrary element of the group.
    pub fn class_of(&self, group: &FiniteGroup, p: &Perm) -> Result<usize> {
        group
            .element_index(p)
            .map(|i| self.class_of_element[i])
            .ok_or_else(|| Error::Membership(format!("{} is not in the group", p)))
    }

    pub fn inverse_class(&self, k: usize) -> usize {
        self.inverse_class[k]
    }

    /// Class of `rep_k^t` (t taken mod the group exponent).
    pub fn power_class(&self, k: usize, t: u64) -> usize {
        self.power_class[k][(t % self.exponent) as usize]
    }

    pub fn rep_order(&self, k: usize) -> u64 {
        self.rep_orders[k]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Class multiplication coefficients: `a[i][j][k]` counts pairs
    /// (x, y) with x in class i, y in class j, and x·y equal to a fixed
    /// element of class k.
    ///
    /// Computed by one sweep per class k: for each group element x and the
    /// fixed representative z of class k, the pair (x, x^{-1} z) contributes
    /// to `a[class(x)][class(x^{-1}z)][k]`.
    pub fn multiplication_coefficients(&self, group: &FiniteGroup) -> Result<Vec<Vec<Vec<u64>>>> {
        let r = self.count();
        let mut a = vec![vec![vec![0u64; r]; r]; r];
        for k in 0..r {
            let z = &self.reps[k];
            for (xi, x) in group.elements().iter().enumerate() {
                let y = x.inverse().mul(z);
                let yi = group
                    .element_index(&y)
                    .ok_or_else(|| Error::Internal("product left the group".into()))?;
                a[self.class_of_element[xi]][self.class_of_element[yi]][k] += 1;
            }
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn classes_of(spec: &str) -> (FiniteGroup, ClassData) {
        let g = FiniteGroup::from_spec(spec).unwrap();
        let c = ClassData::new(&g).unwrap();
        (g, c)
    }

    #[test]
    fn class_sizes_match_known_groups() {
        let cases: &[(&str, &[usize])] = &[
            ("C5", &[1, 1, 1, 1, 1]),
            ("S3", &[1, 2, 3]),
            ("S4", &[1, 3, 6, 6, 8]),
            ("A4", &[1, 3, 4, 4]),
            ("A5", &[1, 12, 12, 15, 20]),
            ("D4", &[1, 1, 2, 2, 2]),
            ("SL2(5)", &[1, 1, 12, 12, 12, 12, 20, 20, 30]),
        ];
        for (spec, expected) in cases {
            let (_, c) = classes_of(spec);
            assert_eq!(c.sizes(), *expected, "class sizes of {}", spec);
        }
    }

    #[test]
    fn identity_class_is_first() {
        for spec in ["C6", "S4", "A5", "D4", "SL2(3)"] {
            let (g, c) = classes_of(spec);
            assert!(c.reps()[0].is_identity(), "{}", spec);
            assert_eq!(c.sizes()[0], 1, "{}", spec);
            assert_eq!(c.class_of(&g, &g.identity()).unwrap(), 0, "{}", spec);
        }
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for spec in ["S4", "A5", "D6", "SL2(5)", "PSL2(7)"] {
            let (g, c) = classes_of(spec);
            assert_eq!(c.sizes().iter().sum::<usize>(), g.order(), "{}", spec);
            // Each class size divides the group order.
            for &s in c.sizes() {
                assert_eq!(g.order() % s, 0, "{}", spec);
            }
        }
    }

    #[test]
    fn inverse_and_power_maps_are_consistent() {
        for spec in ["S4", "A5", "D4", "C7"] {
            let (g, c) = classes_of(spec);
            for k in 0..c.count() {
                // power t=0 is the identity class, t=1 is the class itself.
                assert_eq!(c.power_class(k, 0), 0, "{}", spec);
                assert_eq!(c.power_class(k, 1), k, "{}", spec);
                // rep^(order-1) is the inverse.
                let ord = c.rep_order(k);
                assert_eq!(c.power_class(k, ord - 1 + ord), c.inverse_class(k), "{}", spec);
                // Direct check against the actual inverse element.
                let inv = c.reps()[k].inverse();
                assert_eq!(c.class_of(&g, &inv).unwrap(), c.inverse_class(k), "{}", spec);
            }
        }
    }

    #[test]
    fn multiplication_coefficients_are_symmetric_counts() {
        let (g, c) = classes_of("S3");
        let a = c.multiplication_coefficients(&g).unwrap();
        let r = c.count();
        // Sum over k of a[i][j][k] * |class k| = |class i| * |class j|.
        for i in 0..r {
            for j in 0..r {
                let total: u64 = (0..r).map(|k| a[i][j][k] * c.sizes()[k] as u64).sum();
                assert_eq!(total, (c.sizes()[i] * c.sizes()[j]) as u64);
            }
        }
        // Identity class acts as the unit: the only pair with x = 1 and
        // x*y = z_k has y = z_k, so a[0][j][k] = 1 exactly when j = k.
        for j in 0..r {
            for k in 0..r {
                assert_eq!(a[0][j][k], u64::from(j == k), "unit law");
            }
        }
    }

    #[test]
    fn rational_class_structure_of_c7_semidirect_c3() {
        // Frobenius group of order 21: classes 1, 3, 3, 7, 7.
        let (_, c) = classes_of("perm degree=7 gens=[(1 2 3 4 5 6 7), (2 3 5)(4 7 6)]");
        assert_eq!(c.sizes(), &[1, 3, 3, 7, 7]);
        assert_eq!(c.exponent(), 21);
    }
}
