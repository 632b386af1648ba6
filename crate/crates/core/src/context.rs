//! Shared per-(G, p) state: the reduction map, the p-subgroup poset and a
//! memo of character tables and blocks for the subgroups that show up as
//! stabilizers, centralizers and normalizers.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::numtheory::split_p_part;
use crate::arith::redmap::build_redmap_with_factor;
use crate::arith::RedMap;
use crate::blocks::{
    brauer_map, p_blocks, BlockPartition, BlockPartitionRepr, CentralElement, ClassView,
};
use crate::chartable::{
    class_algebra_constants, subgroup_key, CharTableRepr, CharacterTable, ClassConstants,
};
use crate::error::Result;
use crate::perm::{PSubgroupPoset, PermGroup, Subgroup};

/// Persistent storage for tables and block partitions. Whatever comes back
/// from `load_*` is re-verified before use.
pub trait TableStore: Send + Sync {
    fn load_table(&self, key: &str) -> Option<CharTableRepr>;
    fn save_table(&self, key: &str, repr: &CharTableRepr);
    fn load_blocks(&self, key: &str) -> Option<BlockPartitionRepr>;
    fn save_blocks(&self, key: &str, repr: &BlockPartitionRepr);
}

/// Everything block-theoretic about one subgroup `H` of the ambient group.
pub struct LocalData {
    pub sub: Subgroup,
    pub table: CharacterTable,
    pub consts: ClassConstants,
    pub blocks: BlockPartition,
}

impl LocalData {
    pub fn view(&self) -> ClassView<'_> {
        ClassView {
            sub: &self.sub,
            table: &self.table,
        }
    }

    pub fn key(&self) -> &str {
        &self.table.group_key
    }

    pub fn one(&self, rm: &RedMap) -> CentralElement {
        CentralElement::one(self.key(), rm, self.table.num_classes())
    }

    pub fn zero(&self, rm: &RedMap) -> CentralElement {
        CentralElement::zero(self.key(), rm, self.table.num_classes())
    }

    /// `h e h⁻¹` for `h` normalizing `H`.
    pub fn conjugate(&self, g: &PermGroup, h: u32, z: &CentralElement) -> CentralElement {
        let cl = &self.table.classes;
        let hinv = g.inv(h);
        let coeffs = (0..cl.len())
            .map(|k| z.coeffs[cl.class_of(g.conj(hinv, cl.reps[k])).unwrap()].clone())
            .collect();
        CentralElement {
            group_key: z.group_key.clone(),
            coeffs,
        }
    }
}

#[derive(Default, Debug)]
pub struct CacheStats {
    pub computed: AtomicUsize,
    pub loaded: AtomicUsize,
    pub rejected: AtomicUsize,
}

type Slot = Arc<OnceLock<Result<Arc<LocalData>>>>;

pub struct Ambient {
    group: Arc<PermGroup>,
    pub p: u64,
    pub redmap: RedMap,
    locals: Mutex<HashMap<Vec<u32>, Slot>>,
    poset: OnceLock<PSubgroupPoset>,
    store: Option<Arc<dyn TableStore>>,
    pub stats: CacheStats,
}

impl Ambient {
    pub fn new(group: Arc<PermGroup>, p: u64) -> Self {
        Self::with_factor(group, p, 0)
    }

    /// Uses the `factor`-th irreducible factor of the cyclotomic polynomial
    /// for the residue field; all block data must be independent of it.
    pub fn with_factor(group: Arc<PermGroup>, p: u64, factor: usize) -> Self {
        let (_, e_prime) = split_p_part(group.exponent(), p);
        let redmap = build_redmap_with_factor(e_prime, p, factor);
        Ambient {
            group,
            p,
            redmap,
            locals: Mutex::new(HashMap::new()),
            poset: OnceLock::new(),
            store: None,
            stats: CacheStats::default(),
        }
    }

    pub fn with_store(mut self, store: Arc<dyn TableStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn poset(&self) -> &PSubgroupPoset {
        self.poset.get_or_init(|| self.group.p_subgroups(self.p))
    }

    pub fn whole(&self) -> Result<Arc<LocalData>> {
        self.local(&self.group.whole())
    }

    /// Table, class constants and blocks of `h`, computed once.
    pub fn local(&self, h: &Subgroup) -> Result<Arc<LocalData>> {
        let slot = {
            let mut m = self.locals.lock().unwrap();
            m.entry(h.elements().to_vec()).or_default().clone()
        };
        slot.get_or_init(|| self.build_local(h).map(Arc::new))
            .clone()
    }

    fn build_local(&self, h: &Subgroup) -> Result<LocalData> {
        let g = &*self.group;
        let key = subgroup_key(g, h);
        let table = match self.store.as_ref().and_then(|s| s.load_table(&key)) {
            Some(repr) => match CharacterTable::from_repr(g, h, repr) {
                Ok(t) => {
                    self.stats.loaded.fetch_add(1, Ordering::Relaxed);
                    Some(t)
                }
                Err(_) => {
                    self.stats.rejected.fetch_add(1, Ordering::Relaxed);
                    None
                }
            },
            None => None,
        };
        let (table, consts) = match table {
            Some(t) => {
                let consts = class_algebra_constants(g, h, &t.classes);
                (t, consts)
            }
            None => {
                let classes = g.conjugacy_classes(h);
                let consts = class_algebra_constants(g, h, &classes);
                let t = crate::chartable::character_table_with(g, h, classes, &consts)?;
                self.stats.computed.fetch_add(1, Ordering::Relaxed);
                if let Some(s) = &self.store {
                    s.save_table(&key, &t.to_repr(g));
                }
                (t, consts)
            }
        };
        let bkey = format!(
            "{key}-p{}-{}",
            self.p,
            self.redmap
                .field
                .modulus
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("_")
        );
        let stored = self.store.as_ref().and_then(|s| s.load_blocks(&bkey));
        let blocks =
            match stored.map(|r| BlockPartition::from_repr(&table, &consts, &self.redmap, r)) {
                Some(Ok(b)) => {
                    self.stats.loaded.fetch_add(1, Ordering::Relaxed);
                    b
                }
                other => {
                    if matches!(other, Some(Err(_))) {
                        self.stats.rejected.fetch_add(1, Ordering::Relaxed);
                    }
                    let b = p_blocks(&table, &consts, &self.redmap)?;
                    self.stats.computed.fetch_add(1, Ordering::Relaxed);
                    if let Some(s) = &self.store {
                        s.save_blocks(&bkey, &b.to_repr(&key, &self.redmap));
                    }
                    b
                }
            };
        Ok(LocalData {
            sub: h.clone(),
            table,
            consts,
            blocks,
        })
    }

    pub fn brauer(
        &self,
        src: &LocalData,
        z: &CentralElement,
        p_sub: &Subgroup,
        dst: &LocalData,
    ) -> Result<CentralElement> {
        brauer_map(&self.group, src.view(), z, p_sub, dst.view(), &self.redmap)
    }
}
