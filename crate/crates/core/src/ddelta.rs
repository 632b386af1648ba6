//! Pairs `(L, u)` of a p-group `L` and an automorphism `u` of p′-order,
//! their isomorphism classes, and the groups `Aut(L,u)` and `Out(L,u)`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::numtheory::gcd;
use crate::chartable::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::perm::hom::{
    automorphism_group, extend_hom, find_isomorphism, iso_invariant, perm_group_from_maps,
    regular_group, regular_index, search_injective, small_generators,
};
use crate::perm::{Perm, PermGroup};

/// Largest `|L|` handled.
pub const PAIR_L_CAP: usize = 64;
/// Largest `|L ⋊ ⟨u⟩|` and `|Aut|` handled.
pub const PAIR_CAP: usize = 2000;

/// One isomorphism class of p-groups of a given order, realized regularly.
#[derive(Clone, Debug)]
pub struct PGroupClass {
    pub key: String,
    pub group: Arc<PermGroup>,
}

type Catalog = Arc<Vec<PGroupClass>>;

fn catalog_cache() -> &'static Mutex<HashMap<(u64, usize), Catalog>> {
    static C: OnceLock<Mutex<HashMap<(u64, usize), Catalog>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn check_p_power(p: u64, order: usize) -> Result<()> {
    let mut n = order;
    while n > 1 && n as u64 % p == 0 {
        n /= p as usize;
    }
    if n != 1 {
        return Err(Error::InvalidArgument(format!(
            "{order} is not a power of {p}"
        )));
    }
    Ok(())
}

/// The p-groups of order `order` up to isomorphism.
///
/// Every group of order `p^n` contains a normal subgroup `N` of index `p`, so
/// it is `N⟨x⟩` with `x^p = z ∈ N` and `x` acting on `N` by some `α` with
/// `α(z) = z` and `α^p = (conjugation by z)`. All such data over all `N` of
/// order `p^{n-1}` are built and then sorted out up to isomorphism.
pub fn p_group_catalog(p: u64, order: usize) -> Result<Catalog> {
    check_p_power(p, order)?;
    if let Some(c) = catalog_cache().lock().unwrap().get(&(p, order)) {
        return Ok(c.clone());
    }
    let built = if order == 1 {
        vec![Arc::new(PermGroup::new(1, vec![], 1)?)]
    } else {
        let mut found: Vec<(Vec<(u32, u32)>, Arc<PermGroup>)> = Vec::new();
        for base in p_group_catalog(p, order / p as usize)?.iter() {
            for g in cyclic_extensions(&base.group, p)? {
                let inv = iso_invariant(&g);
                if !found
                    .iter()
                    .any(|(i, h)| *i == inv && find_isomorphism(&g, h).is_some())
                {
                    found.push((inv, Arc::new(g)));
                }
            }
        }
        let max_order = |g: &PermGroup| {
            (0..g.order() as u32)
                .map(|x| g.order_of(x))
                .max()
                .unwrap_or(1)
        };
        found.sort_by(|(ia, a), (ib, b)| max_order(b).cmp(&max_order(a)).then_with(|| ia.cmp(ib)));
        found.into_iter().map(|(_, g)| g).collect()
    };
    let cat: Catalog = Arc::new(
        built
            .into_iter()
            .enumerate()
            .map(|(i, group)| PGroupClass {
                key: format!("{order}#{i}"),
                group,
            })
            .collect(),
    );
    catalog_cache()
        .lock()
        .unwrap()
        .insert((p, order), cat.clone());
    Ok(cat)
}

/// All groups `N⟨x⟩` of order `p|N|` as above, realized on `N × Z/p`.
fn cyclic_extensions(n: &PermGroup, p: u64) -> Result<Vec<PermGroup>> {
    let aut = automorphism_group(n, PAIR_CAP)?;
    let size = n.order();
    let p = p as usize;
    let ngens = small_generators(n);
    let mut out = Vec::new();
    for a in 0..aut.order() as u32 {
        let alpha = aut.element(a).images();
        // powers α^0 … α^p
        let mut pows: Vec<Vec<u32>> = vec![(0..size as u32).collect()];
        for i in 0..p {
            pows.push(pows[i].iter().map(|&x| alpha[x as usize]).collect());
        }
        for z in 0..size as u32 {
            if alpha[z as usize] != z || !ngens.iter().all(|&x| pows[p][x as usize] == n.conj(z, x))
            {
                continue;
            }
            // (a, i) ↦ i·|N| + a stands for a·x^i
            let mul = |s: u32, t: u32| -> u32 {
                let (a, i) = ((s as usize % size) as u32, s as usize / size);
                let (b, j) = ((t as usize % size) as u32, t as usize / size);
                let mut c = n.mul(a, pows[i][b as usize]);
                if i + j >= p {
                    c = n.mul(c, z);
                }
                (((i + j) % p) * size) as u32 + c
            };
            let mut gens: Vec<u32> = ngens.clone();
            gens.push(size as u32);
            let g = regular_group(p * size, mul, &gens, PAIR_CAP)?;
            if g.order() != p * size {
                return Err(Error::InvalidArgument(
                    "cyclic extension data did not give a group".into(),
                ));
            }
            out.push(g);
        }
    }
    Ok(out)
}

/// Catalog key of a p-group, or `None` if the catalog of its order is out
/// of reach.
pub fn catalog_key(p: u64, l: &PermGroup) -> Option<String> {
    let cat = p_group_catalog(p, l.order()).ok()?;
    let inv = iso_invariant(l);
    cat.iter()
        .find(|c| iso_invariant(&c.group) == inv && find_isomorphism(l, &c.group).is_some())
        .map(|c| c.key.clone())
}

/// A pair `(L, u)` with `L` a p-group and `u ∈ Aut(L)` of p′-order, with
/// `L ⋊ ⟨u⟩` realized regularly on `{(a, u^i)}`.
#[derive(Clone, Debug)]
pub struct DDeltaPair {
    pub p: u64,
    pub l: Arc<PermGroup>,
    pub l_key: String,
    /// Images of `L`'s element indices under `u`.
    pub u: Vec<u32>,
    pub u_order: usize,
    /// Position of `u`'s class among the p′-classes of `Aut(L)`.
    pub u_class: usize,
    pub semidirect: PermGroup,
    /// `L`-index ↦ index in `semidirect`.
    pub l_in_s: Vec<u32>,
    pub u_in_s: u32,
}

impl DDeltaPair {
    pub fn new(p: u64, l: Arc<PermGroup>, l_key: String, u: Vec<u32>) -> Result<Self> {
        let n = l.order();
        if n > PAIR_L_CAP {
            return Err(Error::CapExceeded {
                what: "pair group L".into(),
                cap: PAIR_L_CAP,
            });
        }
        check_p_power(p, n)?;
        let lgens = small_generators(&l);
        let u_img: Vec<u32> = lgens.iter().map(|&x| u[x as usize]).collect();
        match extend_hom(&l, &l, &lgens, &u_img, true) {
            Some(m) if m == u => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "u is not an automorphism of L".into(),
                ))
            }
        }
        let mut pows: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        loop {
            let next: Vec<u32> = pows
                .last()
                .unwrap()
                .iter()
                .map(|&x| u[x as usize])
                .collect();
            if next == pows[0] {
                break;
            }
            pows.push(next);
        }
        let k = pows.len();
        if gcd(k as u64, p) != 1 {
            return Err(Error::InvalidArgument(format!(
                "u has order {k}, not prime to {p}"
            )));
        }
        if k * n > PAIR_CAP {
            return Err(Error::CapExceeded {
                what: "L ⋊ <u>".into(),
                cap: PAIR_CAP,
            });
        }
        let mul = |s: u32, t: u32| -> u32 {
            let (a, i) = (s as usize % n, s as usize / n);
            let (b, j) = (t as usize % n, t as usize / n);
            (((i + j) % k) * n) as u32 + l.mul(a as u32, pows[i][b])
        };
        let mut gens = lgens.clone();
        gens.push(n as u32 % (n * k) as u32);
        let s = regular_group(n * k, mul, &gens, PAIR_CAP)?;
        assert_eq!(s.order(), n * k, "|L ⋊ <u>| = |L| ord(u)");
        let l_in_s: Vec<u32> = (0..n as u32)
            .map(|a| regular_index(&s, n * k, mul, a))
            .collect();
        let u_in_s = regular_index(&s, n * k, mul, (n % (n * k)) as u32);
        // L is the normal Sylow p-subgroup
        let l_set: HashSet<u32> = l_in_s.iter().copied().collect();
        assert!(s
            .gen_indices()
            .iter()
            .all(|&x| l_in_s.iter().all(|&y| l_set.contains(&s.conj(x, y)))));
        Ok(DDeltaPair {
            p,
            l,
            l_key,
            u,
            u_order: k,
            u_class: 0,
            semidirect: s,
            l_in_s,
            u_in_s,
        })
    }

    /// The conjugacy class of `u` in `L ⋊ ⟨u⟩`.
    pub fn u_conjugates(&self) -> HashSet<u32> {
        let s = &self.semidirect;
        (0..s.order() as u32)
            .map(|x| s.conj(x, self.u_in_s))
            .collect()
    }

    fn s_generators(&self) -> Vec<u32> {
        let mut g = vec![self.u_in_s];
        g.extend(
            small_generators(&self.l)
                .iter()
                .map(|&x| self.l_in_s[x as usize]),
        );
        g
    }
}

/// Serializable summary of a pair class.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PairSummary {
    pub p: u64,
    #[serde(rename = "L_order")]
    pub l_order: usize,
    #[serde(rename = "L_id_key")]
    pub l_id_key: String,
    pub u_order: usize,
    pub u_class: usize,
    pub out_order: usize,
}

/// The pairs `(L, u)` with `L` fixed, one per `Aut(L)`-class of p′-elements
/// `u`, in the order of the classes of `Aut(L)`.
pub fn pairs_over(p: u64, l: Arc<PermGroup>, l_key: &str) -> Result<Vec<DDeltaPair>> {
    if l.order() > PAIR_L_CAP {
        return Err(Error::CapExceeded {
            what: "pair group L".into(),
            cap: PAIR_L_CAP,
        });
    }
    let aut = automorphism_group(&l, PAIR_CAP)?;
    let classes = aut.conjugacy_classes(&aut.whole());
    classes
        .reps
        .iter()
        .filter(|&&r| gcd(aut.order_of(r) as u64, p) == 1)
        .enumerate()
        .map(|(i, &r)| {
            let mut pair = DDeltaPair::new(
                p,
                l.clone(),
                l_key.to_string(),
                aut.element(r).images().to_vec(),
            )?;
            pair.u_class = i;
            Ok(pair)
        })
        .collect()
}

/// One pair per isomorphism class with `|L| ≤ max_order`.
///
/// `(L, u) ≅ (L, v)` exactly when `u` and `v` are conjugate in `Aut(L)`:
/// an isomorphism of semidirect products restricts to `L` (the normal Sylow
/// subgroup), and sending `u` into the class of `v` forces the restriction
/// to conjugate the actions.
pub fn enumerate_ddelta_pairs(p: u64, max_order: usize) -> Result<Vec<DDeltaPair>> {
    if !crate::arith::numtheory::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let mut out = Vec::new();
    let mut order = 1usize;
    while order <= max_order {
        for cls in p_group_catalog(p, order)?.iter() {
            out.extend(pairs_over(p, cls.group.clone(), &cls.key)?);
        }
        order *= p as usize;
    }
    Ok(out)
}

/// An isomorphism `L⋊⟨u⟩ → M⋊⟨v⟩` sending `u` to a conjugate of `v`.
pub fn pair_isomorphic(a: &DDeltaPair, b: &DDeltaPair) -> Option<Vec<u32>> {
    if a.p != b.p || a.semidirect.order() != b.semidirect.order() || a.l.order() != b.l.order() {
        return None;
    }
    let (sa, sb) = (&a.semidirect, &b.semidirect);
    let gens = a.s_generators();
    let mut cands: Vec<Vec<u32>> = vec![{
        let mut c: Vec<u32> = b.u_conjugates().into_iter().collect();
        c.sort_unstable();
        c
    }];
    for &x in &gens[1..] {
        cands.push(
            (0..sb.order() as u32)
                .filter(|&y| sb.order_of(y) == sa.order_of(x))
                .collect(),
        );
    }
    let mut found = None;
    search_injective(sa, sb, &gens, &cands, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// `Aut(L,u)`, its inner part, and `Out(L,u)` with its character table.
#[derive(Clone, Debug)]
pub struct PairAutData {
    /// Automorphisms of `L⋊⟨u⟩` sending `u` into its class, sorted.
    pub auts: Vec<Vec<u32>>,
    /// The same automorphisms restricted to `L` (on `L`'s indices).
    pub restricted: Vec<Vec<u32>>,
    /// Indices into `auts` of the inner automorphisms.
    pub inner: Vec<usize>,
    pub out: PermGroup,
    /// `auts` index ↦ element of `out`.
    pub out_of: Vec<u32>,
    pub out_table: CharacterTable,
}

impl PairAutData {
    pub fn order(&self) -> usize {
        self.auts.len()
    }

    pub fn index_of_restricted(&self, m: &[u32]) -> Option<usize> {
        self.restricted.iter().position(|r| r == m)
    }
}

/// `Aut(L,u)` by the factored search: since `L` is characteristic, a pair
/// automorphism is fixed by `α = φ|_L ∈ Aut(L)` and `φ(u) = c·u` with
/// `c ∈ L` (the image of `u` mod `L` must be `u`).
pub fn pair_automorphisms(pair: &DDeltaPair) -> Result<Vec<Vec<u32>>> {
    let s = &pair.semidirect;
    let l = &pair.l;
    let aut_l = automorphism_group(l, PAIR_CAP)?;
    let lgens = small_generators(l);
    let mut gens = vec![pair.u_in_s];
    gens.extend(lgens.iter().map(|&x| pair.l_in_s[x as usize]));
    let cls = pair.u_conjugates();
    let mut out = Vec::new();
    for a in 0..aut_l.order() as u32 {
        let alpha = aut_l.element(a).images();
        for c in 0..l.order() {
            let uc = s.mul(pair.l_in_s[c], pair.u_in_s);
            if !cls.contains(&uc) {
                continue;
            }
            let mut imgs = vec![uc];
            imgs.extend(
                lgens
                    .iter()
                    .map(|&x| pair.l_in_s[alpha[x as usize] as usize]),
            );
            if let Some(m) = extend_hom(s, s, &gens, &imgs, true) {
                if m.iter().all(|&v| v != u32::MAX) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn pair_aut_data(pair: &DDeltaPair) -> Result<PairAutData> {
    let s = &pair.semidirect;
    let auts = pair_automorphisms(pair)?;
    let idx: HashMap<&[u32], usize> = auts
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let mut inner: Vec<usize> = Vec::new();
    for x in 0..s.order() as u32 {
        let m: Vec<u32> = (0..s.order() as u32).map(|y| s.conj(x, y)).collect();
        match idx.get(m.as_slice()) {
            Some(&i) => inner.push(i),
            None => {
                return Err(Error::InvalidArgument(
                    "an inner automorphism does not preserve the class of u".into(),
                ))
            }
        }
    }
    inner.sort_unstable();
    inner.dedup();
    let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { b.iter().map(|&x| a[x as usize]).collect() };
    // cosets φ·Inn
    let mut coset_of = vec![usize::MAX; auts.len()];
    let mut reps = Vec::new();
    for i in 0..auts.len() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for &j in &inner {
            coset_of[idx[compose(&auts[i], &auts[j]).as_slice()]] = c;
        }
    }
    assert_eq!(
        reps.len() * inner.len(),
        auts.len(),
        "|Out| = |Aut(L,u)| / |Inn|"
    );
    let action = |i: usize| -> Vec<u32> {
        reps.iter()
            .map(|&r| coset_of[idx[compose(&auts[i], &auts[r]).as_slice()]] as u32)
            .collect()
    };
    let aut_group = perm_group_from_maps(&auts, PAIR_CAP)?;
    let gen_perms = aut_group
        .generators()
        .iter()
        .map(|g| Perm::from_images(action(idx[g.images()])))
        .collect::<Result<Vec<_>>>()?;
    let out = PermGroup::new(reps.len(), gen_perms, PAIR_CAP)?;
    assert_eq!(out.order(), reps.len());
    let out_of = (0..auts.len())
        .map(|i| {
            out.index_of(&Perm::from_images(action(i)).unwrap())
                .expect("action lands in Out")
        })
        .collect();
    let out_table = character_table(&out, &out.whole())?;
    let s_to_l: HashMap<u32, u32> = pair
        .l_in_s
        .iter()
        .enumerate()
        .map(|(a, &x)| (x, a as u32))
        .collect();
    let restricted = auts
        .iter()
        .map(|m| {
            pair.l_in_s
                .iter()
                .map(|&x| s_to_l[&m[x as usize]])
                .collect()
        })
        .collect();
    Ok(PairAutData {
        auts,
        restricted,
        inner,
        out,
        out_of,
        out_table,
    })
}

pub fn pair_summary(pair: &DDeltaPair, data: &PairAutData) -> PairSummary {
    PairSummary {
        p: pair.p,
        l_order: pair.l.order(),
        l_id_key: pair.l_key.clone(),
        u_order: pair.u_order,
        u_class: pair.u_class,
        out_order: data.out.order(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::dsl::parse_group_spec;

    /// Generic oracle: every automorphism of the semidirect product sending
    /// `u` into its class, by unconstrained backtracking.
    fn brute_pair_auts(pair: &DDeltaPair) -> Vec<Vec<u32>> {
        let s = &pair.semidirect;
        let gens = small_generators(s);
        let cands: Vec<Vec<u32>> = gens
            .iter()
            .map(|&x| {
                (0..s.order() as u32)
                    .filter(|&y| s.order_of(y) == s.order_of(x))
                    .collect()
            })
            .collect();
        let cls = pair.u_conjugates();
        let mut out = Vec::new();
        search_injective(s, s, &gens, &cands, &mut |m| {
            if cls.contains(&m[pair.u_in_s as usize]) {
                out.push(m.to_vec());
            }
            true
        });
        out.sort();
        out
    }

    /// Every p′-element of every `Aut(L)`, partitioned by exhaustive pair
    /// isomorphism search.
    fn brute_class_count(p: u64, max_order: usize) -> usize {
        let mut all: Vec<DDeltaPair> = Vec::new();
        let mut order = 1;
        while order <= max_order {
            for cls in p_group_catalog(p, order).unwrap().iter() {
                let aut = automorphism_group(&cls.group, PAIR_CAP).unwrap();
                for a in 0..aut.order() as u32 {
                    if gcd(aut.order_of(a) as u64, p) == 1 {
                        all.push(
                            DDeltaPair::new(
                                p,
                                cls.group.clone(),
                                cls.key.clone(),
                                aut.element(a).images().to_vec(),
                            )
                            .unwrap(),
                        );
                    }
                }
            }
            order *= p as usize;
        }
        let mut reps: Vec<&DDeltaPair> = Vec::new();
        for x in &all {
            if !reps.iter().any(|r| pair_isomorphic(r, x).is_some()) {
                reps.push(x);
            }
        }
        reps.len()
    }

    #[test]
    fn catalog_sizes() {
        let n = |p, o| p_group_catalog(p, o).unwrap().len();
        assert_eq!(n(2, 1), 1);
        assert_eq!(n(2, 2), 1);
        assert_eq!(n(2, 4), 2);
        assert_eq!(n(2, 8), 5);
        assert_eq!(n(3, 9), 2);
        assert_eq!(n(3, 27), 5);
        assert_eq!(n(5, 25), 2);
        assert!(p_group_catalog(2, 6).is_err());
        let c4 = &p_group_catalog(2, 4).unwrap()[0];
        assert_eq!(c4.key, "4#0");
        assert!(find_isomorphism(&c4.group, &parse_group_spec("C(4)").unwrap()).is_some());
    }

    #[test]
    fn catalog_sixteen() {
        assert_eq!(p_group_catalog(2, 16).unwrap().len(), 14);
    }

    #[test]
    fn catalog_lookup() {
        let d8 = parse_group_spec("D(8)").unwrap();
        let q8 = parse_group_spec("Q(8)").unwrap();
        let kd = catalog_key(2, &d8).unwrap();
        let kq = catalog_key(2, &q8).unwrap();
        assert_ne!(kd, kq);
        assert!(kd.starts_with("8#"));
    }

    #[test]
    fn p2_up_to_four() {
        let pairs = enumerate_ddelta_pairs(2, 4).unwrap();
        let summary: Vec<(usize, usize, usize)> = pairs
            .iter()
            .map(|x| {
                (
                    x.l.order(),
                    x.u_order,
                    pair_aut_data(x).unwrap().out.order(),
                )
            })
            .collect();
        assert_eq!(
            summary,
            vec![(1, 1, 1), (2, 1, 1), (4, 1, 2), (4, 1, 6), (4, 3, 1)]
        );
        assert_eq!(brute_class_count(2, 4), 5);
        for (i, a) in pairs.iter().enumerate() {
            for (j, b) in pairs.iter().enumerate() {
                assert_eq!(pair_isomorphic(a, b).is_some(), i == j);
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (p, m) in [(2, 8), (3, 9), (5, 5), (7, 7)] {
            assert_eq!(
                enumerate_ddelta_pairs(p, m).unwrap().len(),
                brute_class_count(p, m),
                "p={p} max={m}"
            );
        }
    }

    #[test]
    fn c3_pairs() {
        let pairs = enumerate_ddelta_pairs(3, 3).unwrap();
        let u: Vec<usize> = pairs.iter().map(|x| x.u_order).collect();
        assert_eq!(u, vec![1, 1, 2]);
        assert!(pair_isomorphic(&pairs[1], &pairs[2]).is_none());
        assert!(pair_isomorphic(&pairs[2], &pairs[2]).is_some());
        assert_eq!(enumerate_ddelta_pairs(5, 1).unwrap().len(), 1);
    }

    #[test]
    fn v4_u_and_u_squared() {
        let v4 = p_group_catalog(2, 4).unwrap()[1].group.clone();
        let aut = automorphism_group(&v4, PAIR_CAP).unwrap();
        let u = (0..6).find(|&a| aut.order_of(a) == 3).unwrap();
        let a = DDeltaPair::new(
            2,
            v4.clone(),
            "4#1".into(),
            aut.element(u).images().to_vec(),
        )
        .unwrap();
        let b = DDeltaPair::new(
            2,
            v4,
            "4#1".into(),
            aut.element(aut.mul(u, u)).images().to_vec(),
        )
        .unwrap();
        assert!(pair_isomorphic(&a, &b).is_some());
        assert_eq!(a.semidirect.order(), 12);
    }

    #[test]
    fn factored_search_matches_generic() {
        for (p, m) in [(2, 8), (3, 9)] {
            for pair in enumerate_ddelta_pairs(p, m).unwrap() {
                let d = pair_aut_data(&pair).unwrap();
                assert_eq!(
                    d.auts,
                    brute_pair_auts(&pair),
                    "{} u_order {}",
                    pair.l_key,
                    pair.u_order
                );
                assert_eq!(d.out.order() * d.inner.len(), d.auts.len());
                let degs: u64 = d.out_table.degrees.iter().map(|x| x * x).sum();
                assert_eq!(degs as usize, d.out.order());
            }
        }
    }

    #[test]
    fn out_examples() {
        let pairs = enumerate_ddelta_pairs(2, 4).unwrap();
        // (V4, 1): Out = Aut(V4) ≅ S3
        let d = pair_aut_data(&pairs[3]).unwrap();
        assert_eq!(d.out_table.degrees, vec![1, 1, 2]);
        // (V4, u): only inner automorphisms of A4 fix the class of u
        let d = pair_aut_data(&pairs[4]).unwrap();
        assert_eq!((d.auts.len(), d.inner.len()), (12, 12));
        assert_eq!(pair_summary(&pairs[4], &d).out_order, 1);
    }

    #[test]
    fn rejects_bad_input() {
        let c2 = p_group_catalog(2, 2).unwrap()[0].group.clone();
        assert!(DDeltaPair::new(2, c2.clone(), "2#0".into(), vec![1, 0]).is_err());
        let c4 = p_group_catalog(2, 4).unwrap()[0].group.clone();
        let aut = automorphism_group(&c4, PAIR_CAP).unwrap();
        // the inversion of C4 has order 2
        assert!(DDeltaPair::new(2, c4, "4#0".into(), aut.element(1).images().to_vec()).is_err());
        assert!(enumerate_ddelta_pairs(4, 4).is_err());
    }
}
