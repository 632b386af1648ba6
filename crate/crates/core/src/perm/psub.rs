use std::collections::HashMap;
use std::sync::OnceLock;

use super::group::PermGroup;
use super::subgroup::Subgroup;

/// One `G`-conjugacy class of p-subgroups.
#[derive(Clone, Debug)]
pub struct PSubgroupOrbit {
    /// Id of the representative (the least member in the poset order).
    pub rep: usize,
    pub members: Vec<usize>,
    pub normalizer: Subgroup,
}

/// All p-subgroups of a group, numbered by (order, element list), with their
/// conjugacy classes and a lazily filled conjugation action.
pub struct PSubgroupPoset {
    pub p: u64,
    subs: Vec<Subgroup>,
    index: HashMap<Vec<u32>, usize>,
    orbit_of: Vec<usize>,
    orbits: Vec<PSubgroupOrbit>,
    conj_rows: Vec<OnceLock<Vec<u32>>>,
}

impl PSubgroupPoset {
    /// Enumerates every p-subgroup of `g`.
    ///
    /// Each nontrivial p-subgroup `Q` has a normal subgroup `K` of index `p`,
    /// so `Q = K⟨x⟩` for a p-element `x ∈ N(K) \ K`. Growing from the trivial
    /// subgroup this way reaches every p-subgroup.
    pub fn new(g: &PermGroup, p: u64) -> Self {
        let p_elems: Vec<u32> = (1..g.order() as u32)
            .filter(|&x| g.is_p_element(x, p))
            .collect();
        let mut subs = vec![g.trivial()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(vec![0u32], 0usize)]);
        let mut i = 0;
        while i < subs.len() {
            let k = subs[i].clone();
            let mut covered = vec![false; g.order()];
            for &x in &p_elems {
                if covered[x as usize] || k.contains(x) {
                    continue;
                }
                if !k.generators().iter().all(|&s| k.contains(g.conj(x, s))) {
                    continue;
                }
                // x normalizes K, so K⟨x⟩ = ∪ K x^j
                // cosets K x^j with p ∤ j generate the same K⟨x⟩ and are skipped later
                let mut elems: Vec<u32> = k.elements().to_vec();
                let mut xp = x;
                let mut j = 1u64;
                while !k.contains(xp) {
                    for &a in k.elements() {
                        let y = g.mul(a, xp);
                        elems.push(y);
                        if j % p != 0 {
                            covered[y as usize] = true;
                        }
                    }
                    xp = g.mul(xp, x);
                    j += 1;
                }
                elems.sort_unstable();
                if !index.contains_key(&elems) {
                    let mut gens = k.generators().to_vec();
                    gens.push(x);
                    let q = g.generate(&gens);
                    debug_assert_eq!(q.elements(), &elems[..]);
                    index.insert(elems, subs.len());
                    subs.push(q);
                }
            }
            i += 1;
        }
        // renumber by (order, elements)
        subs.sort();
        let index: HashMap<Vec<u32>, usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elements().to_vec(), i))
            .collect();

        let mut orbit_of = vec![usize::MAX; subs.len()];
        let mut orbits = Vec::new();
        for start in 0..subs.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let oid = orbits.len();
            orbit_of[start] = oid;
            let mut members = vec![start];
            let mut j = 0;
            while j < members.len() {
                for &s in g.gen_indices() {
                    let c = g.conjugate_subgroup(s, &subs[members[j]]);
                    let cid = index[c.elements()];
                    if orbit_of[cid] == usize::MAX {
                        orbit_of[cid] = oid;
                        members.push(cid);
                    }
                }
                j += 1;
            }
            members.sort_unstable();
            let normalizer = g.normalizer(&subs[start]);
            assert_eq!(
                members.len() * normalizer.order(),
                g.order(),
                "orbit-stabilizer"
            );
            orbits.push(PSubgroupOrbit {
                rep: start,
                members,
                normalizer,
            });
        }
        let conj_rows = (0..g.order()).map(|_| OnceLock::new()).collect();
        PSubgroupPoset {
            p,
            subs,
            index,
            orbit_of,
            orbits,
            conj_rows,
        }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn get(&self, id: usize) -> &Subgroup {
        &self.subs[id]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn id_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s.elements()).copied()
    }

    pub fn orbits(&self) -> &[PSubgroupOrbit] {
        &self.orbits
    }

    pub fn orbit_of(&self, id: usize) -> usize {
        self.orbit_of[id]
    }

    /// Id of `g S_id g⁻¹`.
    pub fn conj(&self, g: &PermGroup, elt: u32, id: usize) -> usize {
        let row = self.conj_rows[elt as usize].get_or_init(|| {
            self.subs
                .iter()
                .map(|s| {
                    let mut e: Vec<u32> = s.elements().iter().map(|&x| g.conj(elt, x)).collect();
                    e.sort_unstable();
                    self.index[&e] as u32
                })
                .collect()
        });
        row[id] as usize
    }

    /// Partition of the p-subgroups contained in `h` into `h`-classes. Each
    /// class is sorted and the classes are ordered by their least member.
    pub fn classes_under(&self, g: &PermGroup, h: &Subgroup) -> Vec<Vec<usize>> {
        let inside: Vec<usize> = (0..self.subs.len())
            .filter(|&i| self.subs[i].is_subgroup_of(h))
            .collect();
        let mut seen = vec![false; self.subs.len()];
        let mut out = Vec::new();
        for &s in &inside {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut cls = vec![s];
            let mut j = 0;
            while j < cls.len() {
                for &x in h.generators() {
                    let c = self.conj(g, x, cls[j]);
                    if !seen[c] {
                        seen[c] = true;
                        cls.push(c);
                    }
                }
                j += 1;
            }
            cls.sort_unstable();
            out.push(cls);
        }
        out
    }
}

impl PermGroup {
    /// The p-subgroups of `self` grouped into conjugacy classes.
    pub fn p_subgroups(&self, p: u64) -> PSubgroupPoset {
        PSubgroupPoset::new(self, p)
    }
}

#[cfg(test)]
mod tests {
    use crate::perm::dsl::parse_group_spec;

    /// Brute force over all 2-generated subgroups; every subgroup of the
    /// groups used below is 2-generated.
    fn brute_count(spec: &str, p: u64) -> usize {
        let g = parse_group_spec(spec).unwrap();
        let n = g.order() as u32;
        let mut set = std::collections::HashSet::new();
        for a in 0..n {
            for b in 0..n {
                let s = g.generate(&[a, b]);
                let mut o = s.order();
                while o % p as usize == 0 {
                    o /= p as usize;
                }
                if o == 1 {
                    set.insert(s.elements().to_vec());
                }
            }
        }
        set.len()
    }

    #[test]
    fn s3_examples() {
        let g = parse_group_spec("S(3)").unwrap();
        let p3 = g.p_subgroups(3);
        assert_eq!(p3.orbits().len(), 2);
        assert_eq!(p3.get(p3.orbits()[1].rep).order(), 3);
        let p2 = g.p_subgroups(2);
        let sizes: Vec<usize> = p2.orbits().iter().map(|o| o.members.len()).collect();
        assert_eq!(sizes, vec![1, 3]);
        let t = parse_group_spec("C(1)").unwrap();
        assert_eq!(t.p_subgroups(5).orbits().len(), 1);
    }

    #[test]
    fn counts_match_brute_force() {
        // all subgroups of these are 2-generated
        for (spec, p) in [
            ("S(4)", 2),
            ("S(4)", 3),
            ("D(16)", 2),
            ("Q(8) x C(3)", 2),
            ("C(4) x C(4)", 2),
            ("A(5)", 2),
        ] {
            let g = parse_group_spec(spec).unwrap();
            let poset = g.p_subgroups(p);
            assert_eq!(poset.len(), brute_count(spec, p), "{spec} p={p}");
            let total: usize = poset.orbits().iter().map(|o| o.members.len()).sum();
            assert_eq!(total, poset.len());
            for o in poset.orbits() {
                assert_eq!(o.members.len() * o.normalizer.order(), g.order());
            }
        }
    }
}
