use std::collections::{HashMap, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};

use super::element::Perm;
use super::subgroup::Subgroup;
use crate::arith::numtheory::lcm;
use crate::error::{Error, Result};

/// Default bound on the order of groups whose elements get enumerated.
pub const DEFAULT_CAP: usize = 2000;

/// A permutation group with its full element list and Cayley table.
///
/// Elements are sorted lexicographically by images, so the identity has
/// index 0. All subgroup machinery works with these indices.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    mult: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u32>,
    gen_idx: Vec<u32>,
    key: String,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree {}, order {})",
            self.degree,
            self.order()
        )
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        let generators: Vec<Perm> = generators
            .into_iter()
            .map(|g| {
                if g.degree() < degree {
                    g.extend(degree)
                } else {
                    g
                }
            })
            .collect();
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidArgument(format!(
                "generator {g} moves points beyond degree {degree}"
            )));
        }
        // BFS, remembering for each new element x = g∘parent the pair (gen, parent)
        let id = Perm::identity(degree);
        let mut found: HashMap<Perm, u32> = HashMap::new();
        let mut list = vec![id.clone()];
        let mut how: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX)];
        found.insert(id, 0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let y = g.compose(&list[x as usize]);
                if !found.contains_key(&y) {
                    if list.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "group".into(),
                            cap,
                        });
                    }
                    let j = list.len() as u32;
                    found.insert(y.clone(), j);
                    list.push(y);
                    how.push((k as u32, x));
                    queue.push_back(j);
                }
            }
        }
        let n = list.len();
        let mut order_idx: Vec<u32> = (0..n as u32).collect();
        order_idx.sort_by(|&a, &b| list[a as usize].cmp(&list[b as usize]));
        let mut pos = vec![0u32; n];
        for (new, &old) in order_idx.iter().enumerate() {
            pos[old as usize] = new as u32;
        }
        let elements: Vec<Perm> = order_idx
            .iter()
            .map(|&o| list[o as usize].clone())
            .collect();
        let index: HashMap<Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let gen_idx: Vec<u32> = generators.iter().map(|g| index[g]).collect();

        // a∘g for generators, by lookup; then a∘(g∘b') = (a∘g)∘b' in BFS order of b
        let mut mult = vec![u32::MAX; n * n];
        let mut right_gen = vec![0u32; n * generators.len()];
        for a in 0..n {
            for (k, g) in generators.iter().enumerate() {
                right_gen[a * generators.len() + k] = index[&elements[a].compose(g)];
            }
            mult[a * n] = a as u32;
        }
        for (old_b, &(k, parent)) in how.iter().enumerate().skip(1) {
            let b = pos[old_b] as usize;
            let bp = pos[parent as usize] as usize;
            for a in 0..n {
                let ag = right_gen[a * generators.len() + k as usize] as usize;
                mult[a * n + b] = mult[ag * n + bp];
            }
        }
        // the identity is index 0 and BFS root, so column 0 is filled above
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = index[&elements[a].inverse()];
        }
        let mut orders = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = mult[x * n + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        let mut h = Sha256::new();
        h.update((degree as u64).to_le_bytes());
        for e in &elements {
            for &i in e.images() {
                h.update(i.to_le_bytes());
            }
        }
        let key = hex::encode(&h.finalize()[..16]);
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            mult,
            inv,
            orders,
            gen_idx,
            key,
        })
    }

    /// The group generated by the given perms on their common degree.
    pub fn from_perms(generators: Vec<Perm>, cap: usize) -> Result<Self> {
        let degree = generators
            .iter()
            .map(|g| g.degree())
            .max()
            .unwrap_or(1)
            .max(1);
        Self::new(degree, generators, cap)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn gen_indices(&self) -> &[u32] {
        &self.gen_idx
    }

    pub fn element(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Stable hash of the element set; equal for equal permutation groups.
    pub fn canonical_key(&self) -> &str {
        &self.key
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn order_of(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: u32, k: i64) -> u32 {
        let o = self.orders[a as usize] as i64;
        let k = k.rem_euclid(o);
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o as u64))
    }

    pub fn is_p_element(&self, x: u32, p: u64) -> bool {
        let mut o = self.order_of(x) as u64;
        while o % p == 0 {
            o /= p;
        }
        o == 1
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            self.order(),
            (0..self.order() as u32).collect(),
            self.gen_idx.clone(),
        )
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order(), vec![0], vec![])
    }

    /// Closure of a set of elements.
    pub fn generate(&self, gens: &[u32]) -> Subgroup {
        self.extend_closure(&[0], gens)
    }

    /// Closure of `base ∪ gens`; `base` must lie in `⟨gens⟩`.
    fn extend_closure(&self, base: &[u32], gens: &[u32]) -> Subgroup {
        let n = self.order();
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut mask = vec![false; n];
        let mut elems: Vec<u32> = base.to_vec();
        for &e in base {
            mask[e as usize] = true;
        }
        let mut queue: VecDeque<u32> = elems.iter().copied().collect();
        // right-multiplying every element by the generators reaches the closure
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        Subgroup::from_sorted_unchecked(n, elems, gens)
    }

    /// Validates a subset as a subgroup.
    pub fn subgroup_from_elements(&self, mut elems: Vec<u32>) -> Result<Subgroup> {
        elems.sort_unstable();
        elems.dedup();
        let n = self.order();
        if elems.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        if elems.iter().any(|&e| e as usize >= n) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        if n % elems.len() != 0 {
            return Err(Error::NotASubgroup(format!(
                "order {} does not divide {n}",
                elems.len()
            )));
        }
        let mut mask = vec![false; n];
        for &e in &elems {
            mask[e as usize] = true;
        }
        for &a in &elems {
            if !mask[self.inv(a) as usize] {
                return Err(Error::NotASubgroup("not closed under inverses".into()));
            }
            for &b in &elems {
                if !mask[self.mul(a, b) as usize] {
                    return Err(Error::NotASubgroup("not closed under products".into()));
                }
            }
        }
        let gens = self.greedy_generators(&elems);
        Ok(Subgroup::from_sorted_unchecked(n, elems, gens))
    }

    /// Builds a subgroup from a sorted element list known to be closed.
    pub(crate) fn subgroup_trusted(&self, elems: Vec<u32>) -> Subgroup {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        let gens = self.greedy_generators(&elems);
        Subgroup::from_sorted_unchecked(self.order(), elems, gens)
    }

    fn greedy_generators(&self, elems: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for &x in elems.iter().rev() {
            if cur.order() == elems.len() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.extend_closure(cur.elements(), &gens);
            }
        }
        gens
    }

    pub fn contains_subgroup(&self, big: &Subgroup, small: &Subgroup) -> bool {
        small.elements().iter().all(|&x| big.contains(x))
    }

    /// `C_H(S) = {h ∈ H : hs = sh for all s ∈ S}`.
    pub fn centralizer_in(&self, h: &Subgroup, s: &Subgroup) -> Subgroup {
        let elems: Vec<u32> = h
            .elements()
            .iter()
            .copied()
            .filter(|&x| {
                s.generators()
                    .iter()
                    .all(|&g| self.mul(x, g) == self.mul(g, x))
            })
            .collect();
        self.subgroup_trusted(elems)
    }

    pub fn centralizer(&self, s: &Subgroup) -> Subgroup {
        self.centralizer_in(&self.whole(), s)
    }

    /// `N_H(K) = {h ∈ H : hKh⁻¹ = K}`.
    pub fn normalizer_in(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let elems: Vec<u32> = h
            .elements()
            .iter()
            .copied()
            .filter(|&x| k.generators().iter().all(|&g| k.contains(self.conj(x, g))))
            .collect();
        self.subgroup_trusted(elems)
    }

    pub fn normalizer(&self, k: &Subgroup) -> Subgroup {
        self.normalizer_in(&self.whole(), k)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if self.contains_subgroup(a, b) {
            return a.clone();
        }
        if self.contains_subgroup(b, a) {
            return b.clone();
        }
        let gens: Vec<u32> = a
            .generators()
            .iter()
            .chain(b.generators())
            .copied()
            .collect();
        self.extend_closure(a.elements(), &gens)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let elems: Vec<u32> = a
            .elements()
            .iter()
            .copied()
            .filter(|&x| b.contains(x))
            .collect();
        self.subgroup_trusted(elems)
    }

    /// `g H g⁻¹`.
    pub fn conjugate_subgroup(&self, g: u32, h: &Subgroup) -> Subgroup {
        let mut elems: Vec<u32> = h.elements().iter().map(|&x| self.conj(g, x)).collect();
        elems.sort_unstable();
        let gens = h.generators().iter().map(|&x| self.conj(g, x)).collect();
        Subgroup::from_sorted_unchecked(self.order(), elems, gens)
    }

    /// Some `g ∈ A` with `g H g⁻¹ = K`.
    pub fn is_conjugate_in(&self, a: &Subgroup, h: &Subgroup, k: &Subgroup) -> Option<u32> {
        if h.order() != k.order() {
            return None;
        }
        a.elements()
            .iter()
            .copied()
            .find(|&g| h.generators().iter().all(|&x| k.contains(self.conj(g, x))))
    }

    pub fn is_conjugate(&self, h: &Subgroup, k: &Subgroup) -> Option<u32> {
        self.is_conjugate_in(&self.whole(), h, k)
    }

    /// The subgroup as a permutation group in its own right.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<PermGroup> {
        let gens: Vec<Perm> = h
            .generators()
            .iter()
            .map(|&g| self.element(g).clone())
            .collect();
        PermGroup::new(self.degree, gens, usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::dsl::parse_group_spec;

    #[test]
    fn cayley_table_matches_composition() {
        let g = parse_group_spec("S(4)").unwrap();
        for a in 0..g.order() as u32 {
            for b in 0..g.order() as u32 {
                let c = g.element(a).compose(g.element(b));
                assert_eq!(g.index_of(&c), Some(g.mul(a, b)));
            }
        }
        assert!(g.element(0).is_identity());
        assert_eq!(g.exponent(), 12);
    }

    #[test]
    fn cap_is_enforced() {
        let r = PermGroup::new(
            5,
            vec![
                Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap(),
                Perm::from_cycles(5, &[vec![0, 1]]).unwrap(),
            ],
            100,
        );
        assert!(matches!(r, Err(Error::CapExceeded { cap: 100, .. })));
    }

    #[test]
    fn centralizer_normalizer_s3() {
        let g = parse_group_spec("S(3)").unwrap();
        let a3 = g.generate(&[g
            .index_of(&Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap())
            .unwrap()]);
        assert_eq!(g.centralizer(&a3).order(), 3);
        let t = g.generate(&[g
            .index_of(&Perm::from_cycles(3, &[vec![0, 1]]).unwrap())
            .unwrap()]);
        assert_eq!(g.normalizer(&t), t);
        assert_eq!(g.normalizer(&g.whole()).order(), 6);
    }

    #[test]
    fn join_meet_conjugacy() {
        let g = parse_group_spec("S(3)").unwrap();
        let el = |c: Vec<u32>| g.index_of(&Perm::from_cycles(3, &[c]).unwrap()).unwrap();
        let a = g.generate(&[el(vec![0, 1])]);
        let b = g.generate(&[el(vec![0, 2])]);
        let c = g.generate(&[el(vec![1, 2])]);
        assert_eq!(g.join(&a, &b).order(), 6);
        assert_eq!(g.intersection(&a, &a), a);
        assert_eq!(g.intersection(&a, &b).order(), 1);
        let w = g.is_conjugate(&a, &c).unwrap();
        assert_eq!(g.conjugate_subgroup(w, &a), c);
        assert!(g
            .is_conjugate(&a, &g.generate(&[el(vec![0, 1, 2])]))
            .is_none());
    }

    #[test]
    fn subgroup_validation() {
        let g = parse_group_spec("S(3)").unwrap();
        let c3 = (0..6).find(|&x| g.order_of(x) == 3).unwrap();
        assert!(matches!(
            g.subgroup_from_elements(vec![0, c3]),
            Err(Error::NotASubgroup(_))
        ));
        let h = g
            .subgroup_from_elements(g.whole().elements().to_vec())
            .unwrap();
        assert_eq!(h.order(), 6);
    }
}
