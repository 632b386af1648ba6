//! p-blocks: the partition of Irr(H), defects, numbers of simple modules,
//! block idempotents in `Z(kH)`, and the Brauer homomorphism.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::ff::{FFElem, FFElemRepr};
use crate::arith::linalg::rank;
use crate::arith::numtheory::valuation;
use crate::arith::{Cyclotomic, Rational, RedMap};
use crate::chartable::{central_character_value, CharacterTable, ClassConstants};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Subgroup};

/// An element of `Z(kH)` in the class-sum basis of `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralElement {
    pub group_key: String,
    pub coeffs: Vec<FFElem>,
}

impl CentralElement {
    pub fn zero(group_key: &str, rm: &RedMap, r: usize) -> Self {
        CentralElement {
            group_key: group_key.to_string(),
            coeffs: vec![FFElem::zero(&rm.field); r],
        }
    }

    /// The identity, i.e. the class sum of `{1}` (always class 0).
    pub fn one(group_key: &str, rm: &RedMap, r: usize) -> Self {
        let mut z = Self::zero(group_key, rm, r);
        z.coeffs[0] = FFElem::one(&rm.field);
        z
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Classes with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.group_key, o.group_key);
        CentralElement {
            group_key: self.group_key.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Product in `Z(kH)` via `K_i K_j = Σ_k a_{ijk} K_k`.
    pub fn mul(&self, o: &Self, consts: &ClassConstants) -> Self {
        debug_assert_eq!(self.group_key, o.group_key);
        let r = self.coeffs.len();
        let field = self.coeffs[0].field().clone();
        let mut out = vec![FFElem::zero(&field); r];
        let si = self.support();
        let sj = o.support();
        for &i in &si {
            for &j in &sj {
                let xy = &self.coeffs[i] * &o.coeffs[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    let a = consts.get(i, j, k);
                    if a != 0 {
                        *slot = &*slot + &xy.scale(a as i64);
                    }
                }
            }
        }
        CentralElement {
            group_key: self.group_key.clone(),
            coeffs: out,
        }
    }
}

/// A p-block of a group `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub irr_indices: Vec<usize>,
    pub defect: u32,
    pub num_simples: usize,
    pub idempotent: CentralElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition {
    pub p: u64,
    pub blocks: Vec<Block>,
    /// Irr row → block index.
    pub block_of: Vec<usize>,
}

/// Per-class flag: the class consists of p-regular elements.
pub fn p_regular_classes(t: &CharacterTable, p: u64) -> Vec<bool> {
    t.class_orders.iter().map(|&o| o as u64 % p != 0).collect()
}

/// Rank over `Q(ζ)` of the characters of a block restricted to p-regular
/// classes, which equals the number of simple modules in the block.
pub fn num_simples(t: &CharacterTable, irr: &[usize], p_regular: &[bool]) -> Result<usize> {
    let m: Vec<Vec<Cyclotomic>> = irr
        .iter()
        .map(|&i| {
            (0..t.num_classes())
                .filter(|&k| p_regular[k])
                .map(|k| t.irr[i][k].clone())
                .collect()
        })
        .collect();
    rank(&m)
}

/// Osima's formula: the coefficient on class `k` is the reduction of
/// `(1/|H|) Σ_{χ∈B} χ(1) χ(g_k⁻¹)`.
pub fn block_idempotent(t: &CharacterTable, irr: &[usize], rm: &RedMap) -> Result<CentralElement> {
    let inv_order = Rational::new(BigInt::from(1), BigInt::from(t.order));
    let coeffs = (0..t.num_classes())
        .map(|k| {
            let kinv = t.inverse_class[k];
            let mut s = Cyclotomic::zero(1);
            for &i in irr {
                s = &s + &t.irr[i][kinv].scale(&Rational::from_integer(BigInt::from(t.degrees[i])));
            }
            rm.reduce(&s.scale(&inv_order))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralElement {
        group_key: t.group_key.clone(),
        coeffs,
    })
}

/// The p-blocks of the group of `t`.
pub fn p_blocks(
    t: &CharacterTable,
    consts: &ClassConstants,
    rm: &RedMap,
) -> Result<BlockPartition> {
    let p = rm.p;
    let n = t.irr.len();
    let r = t.num_classes();
    let mut keys: Vec<Vec<FFElem>> = Vec::with_capacity(n);
    for i in 0..n {
        keys.push(
            (0..r)
                .map(|k| rm.reduce(&central_character_value(t, i, k)))
                .collect::<Result<_>>()?,
        );
    }
    let mut block_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if block_of[i] != usize::MAX {
            continue;
        }
        let b = groups.len();
        let members: Vec<usize> = (i..n)
            .filter(|&j| block_of[j] == usize::MAX && keys[j] == keys[i])
            .collect();
        for &j in &members {
            block_of[j] = b;
        }
        groups.push(members);
    }
    let preg = p_regular_classes(t, p);
    let vg = valuation(t.order as u64, p);
    let mut blocks = Vec::with_capacity(groups.len());
    for irr in groups {
        let min_v = irr
            .iter()
            .map(|&i| valuation(t.degrees[i], p))
            .min()
            .unwrap();
        blocks.push(Block {
            defect: vg - min_v,
            num_simples: num_simples(t, &irr, &preg)?,
            idempotent: block_idempotent(t, &irr, rm)?,
            irr_indices: irr,
        });
    }
    let bp = BlockPartition {
        p,
        blocks,
        block_of,
    };
    verify_blocks(t, consts, rm, &bp)?;
    Ok(bp)
}

/// Idempotent axioms, orthogonality, sum to one, p-regular support and
/// `Σ l = #p-regular classes`, plus consistency of the partition itself.
pub fn verify_blocks(
    t: &CharacterTable,
    consts: &ClassConstants,
    rm: &RedMap,
    bp: &BlockPartition,
) -> Result<()> {
    let bad = |m: String| Error::InvalidArgument(format!("block axioms fail: {m}"));
    let r = t.num_classes();
    let preg = p_regular_classes(t, rm.p);
    let mut seen = vec![false; t.irr.len()];
    for (b, blk) in bp.blocks.iter().enumerate() {
        for &i in &blk.irr_indices {
            if i >= seen.len() || seen[i] || bp.block_of[i] != b {
                return Err(bad(format!("irreducible {i} assigned inconsistently")));
            }
            seen[i] = true;
        }
        if blk.num_simples == 0 || blk.num_simples > blk.irr_indices.len() {
            return Err(bad(format!("block {b} has l = {}", blk.num_simples)));
        }
        if blk.idempotent.coeffs.len() != r || blk.idempotent.group_key != t.group_key {
            return Err(bad(format!("block {b} idempotent has the wrong shape")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(bad("blocks do not cover Irr".into()));
    }
    let mut sum = CentralElement::zero(&t.group_key, rm, r);
    for (b, blk) in bp.blocks.iter().enumerate() {
        let e = &blk.idempotent;
        if e.is_zero() {
            return Err(bad(format!("block {b} idempotent is zero")));
        }
        if e.support().iter().any(|&k| !preg[k]) {
            return Err(bad(format!(
                "block {b} idempotent meets a p-singular class"
            )));
        }
        if e.mul(e, consts) != *e {
            return Err(bad(format!("block {b} idempotent is not idempotent")));
        }
        for (c, other) in bp.blocks.iter().enumerate().skip(b + 1) {
            if !e.mul(&other.idempotent, consts).is_zero() {
                return Err(bad(format!("blocks {b} and {c} are not orthogonal")));
            }
        }
        sum = sum.add(e);
    }
    if sum != CentralElement::one(&t.group_key, rm, r) {
        return Err(bad("idempotents do not sum to 1".into()));
    }
    let total: usize = bp.blocks.iter().map(|b| b.num_simples).sum();
    if total != preg.iter().filter(|&&x| x).count() {
        return Err(bad(format!(
            "Σ l = {total} differs from the number of p-regular classes"
        )));
    }
    Ok(())
}

/// Serialized block partition for the disk cache.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockPartitionRepr {
    pub group_key: String,
    pub p: u64,
    pub modulus: Vec<u64>,
    pub blocks: Vec<BlockRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockRepr {
    pub irr_indices: Vec<usize>,
    pub defect: u32,
    pub l: usize,
    pub idempotent: Vec<FFElemRepr>,
}

impl BlockPartition {
    pub fn to_repr(&self, group_key: &str, rm: &RedMap) -> BlockPartitionRepr {
        BlockPartitionRepr {
            group_key: group_key.to_string(),
            p: self.p,
            modulus: rm.field.modulus.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockRepr {
                    irr_indices: b.irr_indices.clone(),
                    defect: b.defect,
                    l: b.num_simples,
                    idempotent: b.idempotent.coeffs.iter().map(|c| c.to_repr()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a stored partition and re-verifies the block axioms and the
    /// defects against the character table.
    pub fn from_repr(
        t: &CharacterTable,
        consts: &ClassConstants,
        rm: &RedMap,
        repr: BlockPartitionRepr,
    ) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("stored block partition rejected: {m}"));
        if repr.group_key != t.group_key || repr.p != rm.p || repr.modulus != rm.field.modulus {
            return Err(bad("key mismatch"));
        }
        let mut block_of = vec![usize::MAX; t.irr.len()];
        let mut blocks = Vec::new();
        for (b, br) in repr.blocks.into_iter().enumerate() {
            for &i in &br.irr_indices {
                if i >= block_of.len() {
                    return Err(bad("irreducible index out of range"));
                }
                block_of[i] = b;
            }
            let coeffs = br
                .idempotent
                .iter()
                .map(|c| FFElem::from_repr(&rm.field, c))
                .collect::<Result<Vec<_>>>()?;
            let min_v = br
                .irr_indices
                .iter()
                .map(|&i| valuation(t.degrees[i], rm.p))
                .min()
                .ok_or_else(|| bad("empty block"))?;
            if br.defect != valuation(t.order as u64, rm.p) - min_v {
                return Err(bad("defect mismatch"));
            }
            blocks.push(Block {
                irr_indices: br.irr_indices,
                defect: br.defect,
                num_simples: br.l,
                idempotent: CentralElement {
                    group_key: t.group_key.clone(),
                    coeffs,
                },
            });
        }
        let bp = BlockPartition {
            p: rm.p,
            blocks,
            block_of,
        };
        verify_blocks(t, consts, rm, &bp).map_err(|e| bad(&e.to_string()))?;
        Ok(bp)
    }
}

/// Class-sum data of one group, needed to move central elements around.
pub struct ClassView<'a> {
    pub sub: &'a Subgroup,
    pub table: &'a CharacterTable,
}

/// The Brauer homomorphism `Br_P : Z(kX) → Z(kH)` for `C_X(P) ≤ H ≤ N_X(P)`:
/// keep the coefficients of elements centralizing `P`, drop the rest, and
/// read the result in the class-sum basis of `H`.
pub fn brauer_map(
    g: &PermGroup,
    src: ClassView<'_>,
    z: &CentralElement,
    p_sub: &Subgroup,
    dst: ClassView<'_>,
    rm: &RedMap,
) -> Result<CentralElement> {
    if z.group_key != src.table.group_key {
        return Err(Error::InvalidArgument(
            "central element does not belong to the source group".into(),
        ));
    }
    if !p_sub.is_subgroup_of(src.sub) || !dst.sub.is_subgroup_of(src.sub) {
        return Err(Error::InvalidArgument(
            "Brauer map needs P, H inside the source group".into(),
        ));
    }
    if !dst.sub.generators().iter().all(|&h| {
        p_sub
            .generators()
            .iter()
            .all(|&x| p_sub.contains(g.conj(h, x)))
    }) {
        return Err(Error::InvalidArgument(
            "target group does not normalize P".into(),
        ));
    }
    let cent = |x: u32| {
        p_sub
            .generators()
            .iter()
            .all(|&y| g.mul(x, y) == g.mul(y, x))
    };
    if !src
        .sub
        .elements()
        .iter()
        .all(|&x| !cent(x) || dst.sub.contains(x))
    {
        return Err(Error::InvalidArgument(
            "target group does not contain C(P)".into(),
        ));
    }
    let zero = FFElem::zero(&rm.field);
    let coeff = |x: u32| -> FFElem {
        if cent(x) {
            z.coeffs[src.table.classes.class_of(x).unwrap()].clone()
        } else {
            zero.clone()
        }
    };
    let mut coeffs = Vec::with_capacity(dst.table.num_classes());
    for cls in &dst.table.classes.classes {
        let c = coeff(cls[0]);
        if cls.iter().any(|&x| coeff(x) != c) {
            return Err(Error::NotClassConstant(format!(
                "class of element {}",
                g.element(cls[0])
            )));
        }
        coeffs.push(c);
    }
    Ok(CentralElement {
        group_key: dst.table.group_key.clone(),
        coeffs,
    })
}

/// Writes a central idempotent of `kH` as a sum of block idempotents;
/// returns the block indices (possibly none, when `z = 0`).
pub fn decompose_into_blocks(
    z: &CentralElement,
    bp: &BlockPartition,
    consts: &ClassConstants,
    rm: &RedMap,
) -> Result<Vec<usize>> {
    let r = z.coeffs.len();
    let mut picked = Vec::new();
    let mut sum = CentralElement::zero(&z.group_key, rm, r);
    for (b, blk) in bp.blocks.iter().enumerate() {
        let e = &blk.idempotent;
        if e.mul(z, consts) == *e {
            picked.push(b);
            sum = sum.add(e);
        }
    }
    if sum != *z {
        return Err(Error::DecompositionFailure(format!(
            "{} does not match the chosen blocks {picked:?}",
            z.group_key
        )));
    }
    Ok(picked)
}
