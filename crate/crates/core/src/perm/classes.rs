use std::collections::HashMap;

use super::group::PermGroup;
use super::subgroup::Subgroup;

/// Conjugacy classes of a subgroup `H` (under `H`-conjugation), in parent
/// indices. Classes are sorted by size, then order of the representative,
/// then the representative's index; each representative is the least index
/// in its class.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    pub reps: Vec<u32>,
    pub classes: Vec<Vec<u32>>,
    pub sizes: Vec<usize>,
    class_of: HashMap<u32, usize>,
}

impl ConjClassTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, x: u32) -> Option<usize> {
        self.class_of.get(&x).copied()
    }
}

impl PermGroup {
    pub fn conjugacy_classes(&self, h: &Subgroup) -> ConjClassTable {
        let mut class_of: HashMap<u32, usize> = HashMap::with_capacity(h.order());
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for &x in h.elements() {
            if class_of.contains_key(&x) {
                continue;
            }
            let id = raw.len();
            let mut members = vec![x];
            class_of.insert(x, id);
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for &g in h.generators() {
                    let z = self.conj(g, y);
                    if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(z) {
                        e.insert(id);
                        members.push(z);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            raw.push(members);
        }
        raw.sort_by_key(|c| (c.len(), self.order_of(c[0]), c[0]));
        let mut class_of = HashMap::with_capacity(h.order());
        for (i, c) in raw.iter().enumerate() {
            for &x in c {
                class_of.insert(x, i);
            }
        }
        ConjClassTable {
            reps: raw.iter().map(|c| c[0]).collect(),
            sizes: raw.iter().map(|c| c.len()).collect(),
            classes: raw,
            class_of,
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::perm::dsl::parse_group_spec;
    use proptest::prelude::*;

    fn brute_sizes(spec: &str) -> Vec<usize> {
        let g = parse_group_spec(spec).unwrap();
        let n = g.order() as u32;
        let mut seen = vec![false; n as usize];
        let mut sizes = Vec::new();
        for x in 0..n {
            if seen[x as usize] {
                continue;
            }
            let mut c: Vec<u32> = (0..n).map(|y| g.conj(y, x)).collect();
            c.sort();
            c.dedup();
            for &y in &c {
                seen[y as usize] = true;
            }
            sizes.push(c.len());
        }
        sizes.sort();
        sizes
    }

    #[test]
    fn class_sizes() {
        for (spec, mut expect) in [
            ("S(3)", vec![1, 3, 2]),
            ("C(1)", vec![1]),
            ("S(4)", vec![1, 6, 3, 8, 6]),
            ("D(12)", vec![1, 1, 2, 2, 3, 3]),
        ] {
            let g = parse_group_spec(spec).unwrap();
            let t = g.conjugacy_classes(&g.whole());
            assert!(t.sizes.windows(2).all(|w| w[0] <= w[1]));
            expect.sort();
            assert_eq!(t.sizes, expect, "{spec}");
            assert_eq!(t.sizes, brute_sizes(spec));
            assert_eq!(t.sizes.iter().sum::<usize>(), g.order());
        }
    }

    proptest! {
        #[test]
        fn classes_are_conjugation_closed(idx in 0usize..6) {
            let specs = ["S(4)", "A(5)", "D(16)", "Q(8)", "S(3) x C(3)", "C(2) x C(2) x C(2)"];
            let g = parse_group_spec(specs[idx]).unwrap();
            let t = g.conjugacy_classes(&g.whole());
            for c in &t.classes {
                for &x in c {
                    for &s in g.gen_indices() {
                        prop_assert_eq!(t.class_of(g.conj(s, x)), t.class_of(x));
                    }
                }
            }
            // a generator-invariant function (cycle type) is constant on classes
            for c in &t.classes {
                let mut ct: Vec<usize> = g.element(c[0]).cycles().iter().map(|v| v.len()).collect();
                ct.sort();
                for &x in c {
                    let mut cx: Vec<usize> = g.element(x).cycles().iter().map(|v| v.len()).collect();
                    cx.sort();
                    prop_assert_eq!(&cx, &ct);
                }
            }
        }
    }
}
