use std::hash::{Hash, Hasher};

/// A subgroup of some [`PermGroup`](super::PermGroup), as a sorted list of
/// the parent's element indices together with a membership bitset and a
/// generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elems: Vec<u32>,
    mask: Vec<u64>,
    gens: Vec<u32>,
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(
        parent_order: usize,
        elems: Vec<u32>,
        gens: Vec<u32>,
    ) -> Self {
        let mut mask = vec![0u64; parent_order.div_ceil(64)];
        for &e in &elems {
            mask[e as usize / 64] |= 1 << (e % 64);
        }
        debug_assert!(parent_order % elems.len() == 0, "Lagrange");
        Subgroup { elems, mask, gens }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elems.len() <= other.elems.len()
            && self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elems.hash(state)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Order first, then element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elems
            .len()
            .cmp(&other.elems.len())
            .then_with(|| self.elems.cmp(&other.elems))
    }
}
