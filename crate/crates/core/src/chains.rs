//! Strictly ascending chains `1 = P_0 < P_1 < … < P_n` of p-subgroups, their
//! orbits under conjugation, the alternating sum over chain orbits, and the
//! Knörr–Robinson pairing of chains.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::{decompose_into_blocks, CentralElement};
use crate::context::{Ambient, LocalData};
use crate::error::{Error, Result};
use crate::perm::{PSubgroupPoset, PermGroup, Subgroup};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A chain as poset ids; entry 0 is always the trivial subgroup (id 0).
pub type Chain = Vec<usize>;

#[derive(Clone, Debug)]
pub struct ChainOrbit {
    pub chain: Chain,
    /// `G_σ = ∩ N_G(P_i)`.
    pub stabilizer: Subgroup,
    pub orbit_size: usize,
}

impl ChainOrbit {
    pub fn len(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.chain.len() == 1
    }

    pub fn sign(&self) -> i64 {
        if self.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// How orbit representatives are picked when extending chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepChoice {
    /// The member with the least poset id.
    Canonical,
    /// A pseudo-random member, for checking independence of the choice.
    Shuffled(u64),
}

/// One representative per `G`-orbit on chains.
///
/// A chain orbit with stabilizer `G_σ` is extended by one representative of
/// each `G_σ`-orbit of p-subgroups strictly containing the top member; the
/// new stabilizer is `G_σ ∩ N_G(Q)`. Distinct choices give distinct
/// `G`-orbits, so no deduplication is needed.
pub fn chain_orbits(amb: &Ambient, budget: u64, choice: RepChoice) -> Result<Vec<ChainOrbit>> {
    let g = amb.group();
    let poset = amb.poset();
    let mut rng = match choice {
        RepChoice::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RepChoice::Canonical => None,
    };
    let mut out = Vec::new();
    let mut raw = 0u64;
    let mut stack = vec![(vec![0usize], g.whole())];
    while let Some((chain, stab)) = stack.pop() {
        raw += (g.order() / stab.order()) as u64;
        if raw > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let top = *chain.last().unwrap();
        let top_sub = poset.get(top);
        let above: Vec<usize> = (top + 1..poset.len())
            .filter(|&q| {
                poset.get(q).order() > top_sub.order() && top_sub.is_subgroup_of(poset.get(q))
            })
            .collect();
        for orbit in orbits_of(g, poset, &stab, &above) {
            let q = match rng.as_mut() {
                Some(r) => *orbit.choose(r).unwrap(),
                None => orbit[0],
            };
            let new_stab = g.normalizer_in(&stab, poset.get(q));
            let mut c = chain.clone();
            c.push(q);
            stack.push((c, new_stab));
        }
        out.push(ChainOrbit {
            orbit_size: g.order() / stab.order(),
            chain,
            stabilizer: stab,
        });
    }
    out.sort_by(|a, b| {
        a.chain
            .len()
            .cmp(&b.chain.len())
            .then_with(|| a.chain.cmp(&b.chain))
    });
    Ok(out)
}

/// Orbits of `h` on the given set of poset ids (assumed `h`-stable), each
/// sorted, ordered by least member.
fn orbits_of(
    g: &PermGroup,
    poset: &PSubgroupPoset,
    h: &Subgroup,
    set: &[usize],
) -> Vec<Vec<usize>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &s in set {
        if !seen.insert(s) {
            continue;
        }
        let mut orb = vec![s];
        let mut j = 0;
        while j < orb.len() {
            for &x in h.generators() {
                let c = poset.conj(g, x, orb[j]);
                if seen.insert(c) {
                    orb.push(c);
                }
            }
            j += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

/// Every chain, for cross-checks on small groups.
pub fn all_chains(amb: &Ambient, budget: u64) -> Result<Vec<Chain>> {
    let poset = amb.poset();
    let mut out = Vec::new();
    let mut stack = vec![vec![0usize]];
    while let Some(chain) = stack.pop() {
        if out.len() as u64 >= budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let top = poset.get(*chain.last().unwrap());
        for q in 0..poset.len() {
            let qs = poset.get(q);
            if qs.order() > top.order() && top.is_subgroup_of(qs) {
                let mut c = chain.clone();
                c.push(q);
                stack.push(c);
            }
        }
        out.push(chain);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// `∩ N_G(P_i)`.
pub fn stabilizer(g: &PermGroup, poset: &PSubgroupPoset, chain: &[usize]) -> Subgroup {
    chain
        .iter()
        .fold(g.whole(), |s, &id| g.normalizer_in(&s, poset.get(id)))
}

/// `g σ g⁻¹`.
pub fn conjugate_chain(g: &PermGroup, poset: &PSubgroupPoset, x: u32, chain: &[usize]) -> Chain {
    chain.iter().map(|&id| poset.conj(g, x, id)).collect()
}

/// `b_σ` together with its block decomposition in `kG_σ`.
pub struct ChainBlock {
    pub local: Arc<LocalData>,
    pub b_sigma: CentralElement,
    pub constituents: Vec<usize>,
    pub l: usize,
}

/// `b_σ = Br_{P_n}(b) ∈ Z(kG_σ)`, decomposed into block idempotents of `kG_σ`.
pub fn chain_block(
    amb: &Ambient,
    b: &CentralElement,
    chain: &[usize],
    stab: &Subgroup,
) -> Result<ChainBlock> {
    let whole = amb.whole()?;
    let local = amb.local(stab)?;
    let top = amb.poset().get(*chain.last().unwrap());
    let b_sigma = amb.brauer(&whole, b, top, &local)?;
    let constituents = decompose_into_blocks(&b_sigma, &local.blocks, &local.consts, &amb.redmap)?;
    let l = constituents
        .iter()
        .map(|&c| local.blocks.blocks[c].num_simples)
        .sum();
    Ok(ChainBlock {
        local,
        b_sigma,
        constituents,
        l,
    })
}

/// Human-readable subgroup: `1` or `<gen, gen, …>` in cycle notation.
pub fn describe_subgroup(g: &PermGroup, s: &Subgroup) -> String {
    if s.is_trivial() {
        return "1".into();
    }
    let gens: Vec<String> = s
        .generators()
        .iter()
        .map(|&x| g.element(x).to_string())
        .collect();
    format!("<{}>", gens.join(", "))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LedgerEntry {
    pub chain: Vec<String>,
    pub length: usize,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
    pub constituents: Vec<usize>,
    pub l: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AwcReport {
    pub group: String,
    pub p: u64,
    pub block: usize,
    pub defect: u32,
    pub sum: i64,
    pub verdict: String,
    pub ledger: Vec<LedgerEntry>,
}

impl AwcReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// `Σ_{σ ∈ G\S_p(G)} (−1)^{|σ|} l(kG_σ b_σ)` for block `block` of `G`,
/// compared against 1 for defect zero and 0 otherwise.
pub fn awc_sum(
    amb: &Ambient,
    group_name: &str,
    block: usize,
    orbits: &[ChainOrbit],
) -> Result<AwcReport> {
    let whole = amb.whole()?;
    let blk = whole
        .blocks
        .blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?;
    let g = amb.group();
    let poset = amb.poset();
    let mut sum = 0i64;
    let mut ledger = Vec::with_capacity(orbits.len());
    for o in orbits {
        let cb = chain_block(amb, &blk.idempotent, &o.chain, &o.stabilizer)?;
        sum += o.sign() * cb.l as i64;
        ledger.push(LedgerEntry {
            chain: o
                .chain
                .iter()
                .map(|&id| describe_subgroup(g, poset.get(id)))
                .collect(),
            length: o.len(),
            stabilizer_order: o.stabilizer.order(),
            orbit_size: o.orbit_size,
            constituents: cb.constituents,
            l: cb.l,
        });
    }
    let expected = if blk.defect == 0 { 1 } else { 0 };
    Ok(AwcReport {
        group: group_name.to_string(),
        p: amb.p,
        block,
        defect: blk.defect,
        sum,
        verdict: if sum == expected { "pass" } else { "fail" }.into(),
        ledger,
    })
}

/// The pairing `σ ↦ σ'` attached to a nontrivial p-subgroup `P ≤ G_σ`: with
/// `i` largest such that `P ⊄ P_i`, insert `PP_i` when `i = n` or
/// `PP_i < P_{i+1}`, and otherwise delete `P_{i+1} = PP_i`.
pub fn kr_involution(
    g: &PermGroup,
    poset: &PSubgroupPoset,
    chain: &[usize],
    p_id: usize,
) -> Result<Chain> {
    let p = poset.get(p_id);
    if p.is_trivial() {
        return Err(Error::PTrivial);
    }
    for &id in chain {
        let m = poset.get(id);
        if !p
            .generators()
            .iter()
            .all(|&x| m.generators().iter().all(|&y| m.contains(g.conj(x, y))))
        {
            return Err(Error::PNotInStabilizer);
        }
    }
    let n = chain.len() - 1;
    let i = (0..=n)
        .rev()
        .find(|&i| !p.is_subgroup_of(poset.get(chain[i])))
        .expect("P_0 = 1 does not contain P");
    let pp = g.join(p, poset.get(chain[i]));
    let pp_id = poset
        .id_of(&pp)
        .ok_or_else(|| Error::InvolutionFailure("PP_i is not a p-subgroup".into()))?;
    let mut out = chain.to_vec();
    if i == n || pp_id != chain[i + 1] {
        out.insert(i + 1, pp_id);
    } else {
        out.remove(i + 1);
    }
    Ok(out)
}

/// Checks the properties of the pairing at `(σ, P)`: it is an involution,
/// changes the length by one, keeps `P` in the stabilizer, preserves
/// `N_{G_σ}(P)` and `Br_P(b_σ)` for every block `b` of `G`.
pub fn involution_check(amb: &Ambient, chain: &[usize], p_id: usize) -> Result<Chain> {
    let g = amb.group();
    let poset = amb.poset();
    let fail = |m: &str| Error::InvolutionFailure(format!("chain {chain:?}, P = {p_id}: {m}"));
    let sigma2 = kr_involution(g, poset, chain, p_id)?;
    if kr_involution(g, poset, &sigma2, p_id)? != chain {
        return Err(fail("not an involution"));
    }
    if sigma2.len().abs_diff(chain.len()) != 1 {
        return Err(fail("length does not change by one"));
    }
    let p = poset.get(p_id);
    let s1 = stabilizer(g, poset, chain);
    let s2 = stabilizer(g, poset, &sigma2);
    if !p.is_subgroup_of(&s2) {
        return Err(fail("P leaves the stabilizer"));
    }
    let n1 = g.normalizer_in(&s1, p);
    let n2 = g.normalizer_in(&s2, p);
    if n1 != n2 {
        return Err(fail("normalizers of P differ"));
    }
    let c = g.centralizer_in(&s1, p);
    let whole = amb.whole()?;
    let lc = amb.local(&c)?;
    for blk in &whole.blocks.blocks {
        let cb1 = chain_block(amb, &blk.idempotent, chain, &s1)?;
        let br1 = amb.brauer(&cb1.local, &cb1.b_sigma, p, &lc)?;
        let cb2 = chain_block(amb, &blk.idempotent, &sigma2, &s2)?;
        let br2 = amb.brauer(&cb2.local, &cb2.b_sigma, p, &lc)?;
        if br1 != br2 {
            return Err(fail("Br_P(b_σ) differs"));
        }
    }
    Ok(sigma2)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::perm::{parse_group_spec, Perm};

    fn amb(spec: &str, p: u64) -> Ambient {
        Ambient::new(Arc::new(parse_group_spec(spec).unwrap()), p)
    }

    fn orders(a: &Ambient, o: &ChainOrbit) -> Vec<usize> {
        o.chain
            .iter()
            .map(|&id| a.poset().get(id).order())
            .collect()
    }

    #[test]
    fn orbit_examples() {
        let a = amb("S(3)", 3);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        assert_eq!(
            os.iter().map(|o| orders(&a, o)).collect::<Vec<_>>(),
            vec![vec![1], vec![1, 3]]
        );
        let a = amb("S(3)", 2);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        assert_eq!(
            os.iter().map(|o| orders(&a, o)).collect::<Vec<_>>(),
            vec![vec![1], vec![1, 2]]
        );
        assert_eq!(os[1].orbit_size, 3);
        let a = amb("C(1)", 5);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        assert_eq!(os.len(), 1);
        assert_eq!(os[0].len(), 0);
    }

    #[test]
    fn orbit_sizes_match_raw_enumeration() {
        for (spec, p) in [
            ("S(4)", 2),
            ("S(4)", 3),
            ("D(8) x C(2)", 2),
            ("A(5)", 2),
            ("Q(8) x C(3)", 2),
        ] {
            let a = amb(spec, p);
            let g = a.group();
            let poset = a.poset();
            let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
            let raw = all_chains(&a, DEFAULT_BUDGET).unwrap();
            let total: usize = os.iter().map(|o| o.orbit_size).sum();
            assert_eq!(total, raw.len(), "{spec}");
            // every raw chain is conjugate to exactly one representative
            let reps: std::collections::HashSet<Chain> =
                os.iter().map(|o| o.chain.clone()).collect();
            for c in &raw {
                let hits: std::collections::HashSet<Chain> = (0..g.order() as u32)
                    .map(|x| conjugate_chain(g, poset, x, c))
                    .filter(|d| reps.contains(d))
                    .collect();
                assert_eq!(hits.len(), 1, "{spec} {c:?}");
            }
            for o in &os {
                assert_eq!(o.stabilizer, stabilizer(g, poset, &o.chain));
                assert_eq!(o.orbit_size * o.stabilizer.order(), g.order());
            }
        }
    }

    #[test]
    fn budget() {
        let a = amb("S(4)", 2);
        assert!(matches!(
            chain_orbits(&a, 10, RepChoice::Canonical),
            Err(Error::BudgetExceeded { budget: 10 })
        ));
    }

    #[test]
    fn awc_examples() {
        let a = amb("S(3)", 3);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        let r = awc_sum(&a, "S(3)", 0, &os).unwrap();
        assert_eq!((r.sum, r.defect, r.passed()), (0, 1, true));
        assert_eq!(r.ledger.iter().map(|e| e.l).collect::<Vec<_>>(), vec![2, 2]);

        let a = amb("S(3)", 2);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        let r = awc_sum(&a, "S(3)", 1, &os).unwrap();
        assert_eq!((r.sum, r.defect, r.passed()), (1, 0, true));
        assert_eq!(r.ledger.iter().map(|e| e.l).collect::<Vec<_>>(), vec![1, 0]);

        let a = amb("C(2)", 2);
        let os = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        let r = awc_sum(&a, "C(2)", 0, &os).unwrap();
        assert_eq!((r.sum, r.passed()), (0, true));
    }

    #[test]
    fn chain_block_trivial_chain() {
        let a = amb("S(4)", 2);
        let w = a.whole().unwrap();
        let b = &w.blocks.blocks[0].idempotent;
        let cb = chain_block(&a, b, &[0], &a.group().whole()).unwrap();
        assert_eq!(&cb.b_sigma, b);
        assert_eq!(cb.constituents, vec![0]);
    }

    #[test]
    fn involution_examples() {
        let a = amb("S(3)", 3);
        let g = a.group();
        let poset = a.poset();
        let c3 = poset.len() - 1;
        assert_eq!(kr_involution(g, poset, &[0], c3).unwrap(), vec![0, c3]);
        assert_eq!(kr_involution(g, poset, &[0, c3], c3).unwrap(), vec![0]);
        assert!(matches!(
            kr_involution(g, poset, &[0], 0),
            Err(Error::PTrivial)
        ));

        let a = amb("S(3)", 2);
        let g = a.group();
        let poset = a.poset();
        // two different transposition subgroups: one does not normalize the other
        assert!(matches!(
            kr_involution(g, poset, &[0, 1], 2),
            Err(Error::PNotInStabilizer)
        ));
    }

    #[test]
    fn middle_insertion_in_s4() {
        // σ = (1 < Z < D) inside a Sylow D₈ of S₄ with P ⊄ Z and PZ < D
        let a = amb("S(4)", 2);
        let g = a.group();
        let poset = a.poset();
        let el = |c: Vec<Vec<u32>>| g.index_of(&Perm::from_cycles(4, &c).unwrap()).unwrap();
        let z = g.generate(&[el(vec![vec![0, 2], vec![1, 3]])]);
        let d = g.generate(&[el(vec![vec![0, 1, 2, 3]]), el(vec![vec![0, 2]])]);
        let p = g.generate(&[el(vec![vec![0, 2]])]);
        let (zi, di, pi) = (
            poset.id_of(&z).unwrap(),
            poset.id_of(&d).unwrap(),
            poset.id_of(&p).unwrap(),
        );
        let s = kr_involution(g, poset, &[0, zi, di], pi).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(poset.get(s[2]).order(), 4);
        assert_eq!(kr_involution(g, poset, &s, pi).unwrap(), vec![0, zi, di]);
        involution_check(&a, &[0, zi, di], pi).unwrap();
    }
}
