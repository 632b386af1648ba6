//! Coordinates of the alternating sum `Σ_σ (−1)^{|σ|} [[G_σ, b_σ]]` in the
//! Grothendieck group of diagonal p-permutation functors, at the simple
//! functors `S_{L,u,V}`, together with the virtual permutation character
//! whose fixed points must vanish and the sign-reversing pairing behind it.
//!
//! Local points of `(kH c)^P` are read off as blocks of `kC_H(P)Br_P(c)`;
//! this identification needs every such block to have a single simple
//! module and is refused otherwise.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{Cyclotomic, Rational};
use crate::blocks::{decompose_into_blocks, CentralElement};
use crate::chains::{all_chains, chain_block, chain_orbits, kr_involution, stabilizer, RepChoice};
use crate::context::{Ambient, LocalData};
use crate::ddelta::{catalog_key, pair_aut_data, pairs_over, DDeltaPair, PairAutData, PAIR_CAP};
use crate::error::{Error, Result};
use crate::perm::hom::{automorphism_group, find_isomorphism, iso_invariant};
use crate::perm::{Perm, PermGroup, Subgroup};

/// The coordinate at `S_{1,1,F}`: the number of simple modules of the block.
pub fn s111_coordinate(amb: &Ambient, block: usize) -> Result<usize> {
    let whole = amb.whole()?;
    whole
        .blocks
        .blocks
        .get(block)
        .map(|b| b.num_simples)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))
}

/// A point: a block of `kC_H(P)` (and, for `P = 1`, one of its simple
/// modules).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub block: usize,
    pub simple: usize,
}

/// The local points of `(kH c)^P` with the conjugation action of `N_H(P)`.
pub struct LocalPointSet {
    pub p_sub: Subgroup,
    pub centralizer: Arc<LocalData>,
    pub normalizer: Subgroup,
    pub points: Vec<Point>,
    /// Per element of `normalizer` (in its sorted order), the induced
    /// permutation of `points`.
    action: Vec<Vec<u32>>,
}

impl LocalPointSet {
    fn pos(&self, h: u32) -> usize {
        self.normalizer
            .elements()
            .binary_search(&h)
            .expect("element of N_H(P)")
    }

    /// `h·γ` for `h ∈ N_H(P)`.
    pub fn act(&self, h: u32, pt: usize) -> usize {
        self.action[self.pos(h)][pt] as usize
    }

    /// `N_H(P_γ)`: the elements of `N_H(P)` fixing the point.
    pub fn stabilizer(&self, pt: usize) -> Vec<u32> {
        self.normalizer
            .elements()
            .iter()
            .copied()
            .filter(|&h| self.act(h, pt) == pt)
            .collect()
    }
}

/// Local points of `(kH c)^P` for a central idempotent `c` of `kH`.
pub fn local_points(
    amb: &Ambient,
    h: &LocalData,
    c: &CentralElement,
    p_sub: &Subgroup,
) -> Result<LocalPointSet> {
    let g = amb.group();
    if !p_sub.is_subgroup_of(&h.sub) {
        return Err(Error::InvalidArgument("P does not lie in H".into()));
    }
    let normalizer = g.normalizer_in(&h.sub, p_sub);
    let cent_sub = g.centralizer_in(&h.sub, p_sub);
    let centralizer = amb.local(&cent_sub)?;
    let rm = &amb.redmap;
    if p_sub.is_trivial() {
        // points of kHc are its simple modules, all fixed by inner conjugation
        let blocks = decompose_into_blocks(c, &h.blocks, &h.consts, rm)?;
        let points: Vec<Point> = blocks
            .iter()
            .flat_map(|&b| {
                (0..h.blocks.blocks[b].num_simples).map(move |s| Point {
                    block: b,
                    simple: s,
                })
            })
            .collect();
        let id: Vec<u32> = (0..points.len() as u32).collect();
        let action = vec![id; normalizer.order()];
        return Ok(LocalPointSet {
            p_sub: p_sub.clone(),
            centralizer,
            normalizer,
            points,
            action,
        });
    }
    let br = amb.brauer(h, c, p_sub, &centralizer)?;
    let blocks = decompose_into_blocks(&br, &centralizer.blocks, &centralizer.consts, rm)?;
    if let Some(&b) = blocks
        .iter()
        .find(|&&b| centralizer.blocks.blocks[b].num_simples > 1)
    {
        return Err(Error::UnsupportedPointStructure(format!(
            "block {b} of the centralizer of a subgroup of order {} has {} simple modules",
            p_sub.order(),
            centralizer.blocks.blocks[b].num_simples
        )));
    }
    let points: Vec<Point> = blocks
        .iter()
        .map(|&b| Point {
            block: b,
            simple: 0,
        })
        .collect();
    let mut action = Vec::with_capacity(normalizer.order());
    for &x in normalizer.elements() {
        let row = points
            .iter()
            .map(|pt| {
                let e =
                    centralizer.conjugate(g, x, &centralizer.blocks.blocks[pt.block].idempotent);
                points
                    .iter()
                    .position(|q| centralizer.blocks.blocks[q.block].idempotent == e)
                    .map(|i| i as u32)
                    .ok_or_else(|| {
                        Error::DecompositionFailure("conjugate of a point is not a point".into())
                    })
            })
            .collect::<Result<Vec<u32>>>()?;
        action.push(row);
    }
    Ok(LocalPointSet {
        p_sub: p_sub.clone(),
        centralizer,
        normalizer,
        points,
        action,
    })
}

/// One isomorphism type `L` of p-group, with `Aut(L)` and a memo of
/// isomorphisms onto p-subgroups of the ambient group.
pub struct LClass {
    pub key: String,
    pub group: Arc<PermGroup>,
    pub aut: PermGroup,
    invariant: Vec<(u32, u32)>,
    isos: Mutex<HashMap<usize, Option<Arc<Vec<u32>>>>>,
}

impl LClass {
    pub fn new(p: u64, group: Arc<PermGroup>) -> Result<Self> {
        let aut = automorphism_group(&group, PAIR_CAP)?;
        let key = catalog_key(p, &group).unwrap_or_else(|| format!("{}#?", group.order()));
        let invariant = iso_invariant(&group);
        Ok(LClass {
            key,
            group,
            aut,
            invariant,
            isos: Mutex::new(HashMap::new()),
        })
    }

    /// An isomorphism `L → P` (L-index ↦ ambient index) for poset id `id`.
    pub fn iso_to(&self, amb: &Ambient, id: usize) -> Result<Option<Arc<Vec<u32>>>> {
        if let Some(v) = self.isos.lock().unwrap().get(&id) {
            return Ok(v.clone());
        }
        let g = amb.group();
        let sub = amb.poset().get(id);
        let res = if sub.order() != self.group.order() {
            None
        } else {
            let pg = g.subgroup_as_group(sub)?;
            if iso_invariant(&pg) != self.invariant {
                None
            } else {
                find_isomorphism(&self.group, &pg).map(|m| {
                    Arc::new(
                        m.iter()
                            .map(|&i| g.index_of(pg.element(i)).unwrap())
                            .collect(),
                    )
                })
            }
        };
        self.isos.lock().unwrap().insert(id, res.clone());
        Ok(res)
    }

    fn aut_index(&self, map: &[u32]) -> u32 {
        self.aut
            .index_of(&Perm::from_images(map.to_vec()).expect("bijection"))
            .expect("automorphism of L")
    }
}

/// A pair `(L, u)` with its automorphism data, expressed inside `Aut(L)`.
pub struct PairContext {
    pub lclass: Arc<LClass>,
    pub pair: DDeltaPair,
    pub data: PairAutData,
    /// `u` as an element of `Aut(L)`.
    pub u_aut: u32,
    /// `φ|_L ∈ Aut(L)` for each `φ ∈ Aut(L,u)`.
    pub restricted_aut: Vec<u32>,
}

impl PairContext {
    pub fn new(lclass: Arc<LClass>, pair: DDeltaPair) -> Result<Self> {
        let data = pair_aut_data(&pair)?;
        let u_aut = lclass.aut_index(&pair.u);
        let restricted_aut = data
            .restricted
            .iter()
            .map(|m| lclass.aut_index(m))
            .collect();
        Ok(PairContext {
            lclass,
            pair,
            data,
            u_aut,
            restricted_aut,
        })
    }

    pub fn key(&self) -> String {
        format!("{}/u{}", self.lclass.key, self.pair.u_class)
    }

    pub fn is_trivial(&self) -> bool {
        self.pair.l.order() == 1
    }

    /// All pairs over `L`.
    pub fn all_over(lclass: Arc<LClass>, p: u64) -> Result<Vec<PairContext>> {
        pairs_over(p, lclass.group.clone(), &lclass.key)?
            .into_iter()
            .map(|pair| PairContext::new(lclass.clone(), pair))
            .collect()
    }

    /// `χ_V(φ)` for `V` inflated from `Out(L,u)`.
    fn chi(&self, v: usize, phi: usize) -> &Cyclotomic {
        let t = &self.data.out_table;
        &t.irr[v][t.classes.class_of(self.data.out_of[phi]).unwrap()]
    }

    pub fn num_v(&self) -> usize {
        self.data.out_table.irr.len()
    }
}

/// The chain data needed by the functorial computations at one `σ`.
pub struct ChainContext<'a> {
    pub amb: &'a Ambient,
    pub local: Arc<LocalData>,
    pub c: CentralElement,
    points: Mutex<HashMap<usize, Arc<Result<LocalPointSet>>>>,
}

impl<'a> ChainContext<'a> {
    pub fn new(amb: &'a Ambient, local: Arc<LocalData>, c: CentralElement) -> Self {
        ChainContext {
            amb,
            local,
            c,
            points: Mutex::new(HashMap::new()),
        }
    }

    pub fn points(&self, p_id: usize) -> Arc<Result<LocalPointSet>> {
        if let Some(v) = self.points.lock().unwrap().get(&p_id) {
            return v.clone();
        }
        let v = Arc::new(local_points(
            self.amb,
            &self.local,
            &self.c,
            self.amb.poset().get(p_id),
        ));
        self.points.lock().unwrap().insert(p_id, v.clone());
        v
    }
}

/// `β_h = π₀⁻¹ ∘ i_h ∘ π₀ ∈ Aut(L)` for each `h ∈ N_H(P)`.
fn induced_auts(g: &PermGroup, pts: &LocalPointSet, lc: &LClass, pi0: &[u32]) -> Vec<u32> {
    let inv0: HashMap<u32, u32> = pi0
        .iter()
        .enumerate()
        .map(|(a, &x)| (x, a as u32))
        .collect();
    pts.normalizer
        .elements()
        .iter()
        .map(|&h| {
            let m: Vec<u32> = pi0.iter().map(|&x| inv0[&g.conj(h, x)]).collect();
            lc.aut_index(&m)
        })
        .collect()
}

/// The pairs `(γ, π₀∘α)` at one p-subgroup `P ≅ L` satisfying the
/// condition that `π u π⁻¹` is induced by some element of `N_H(P_γ)`.
struct XAtP {
    entries: Vec<(usize, u32)>,
    index: HashMap<(usize, u32), usize>,
    betas: Vec<u32>,
}

fn x_at_p(g: &PermGroup, pts: &LocalPointSet, ctx: &PairContext, pi0: &[u32]) -> XAtP {
    let al = &ctx.lclass.aut;
    let betas = induced_auts(g, pts, &ctx.lclass, pi0);
    let mut entries = Vec::new();
    for pt in 0..pts.points.len() {
        let realized: HashSet<u32> = pts
            .normalizer
            .elements()
            .iter()
            .enumerate()
            .filter(|&(_, &h)| pts.act(h, pt) == pt)
            .map(|(i, _)| betas[i])
            .collect();
        for a in 0..al.order() as u32 {
            let target = al.mul(al.mul(a, ctx.u_aut), al.inv(a));
            if realized.contains(&target) {
                entries.push((pt, a));
            }
        }
    }
    let index = entries.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    XAtP {
        entries,
        index,
        betas,
    }
}

/// Left `G_σ`-orbits on `L_{b_σ}(G_σ, L, u)` with the right action of
/// `Aut(L,u)` on them.
#[derive(Clone, Debug, Default)]
pub struct LPairOrbitData {
    /// For each left orbit: the subgroup (poset id), point and `α` of a
    /// representative `(P_γ, π₀∘α)`.
    pub orbit_reps: Vec<(usize, Point, u32)>,
    /// `perms[φ][O]`: the left orbit `O·φ`.
    pub perms: Vec<Vec<u32>>,
}

impl LPairOrbitData {
    pub fn num_orbits(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Left orbits fixed by `φ`.
    pub fn fixed(&self, phi: usize) -> usize {
        self.perms[phi]
            .iter()
            .enumerate()
            .filter(|&(o, &t)| o == t as usize)
            .count()
    }

    /// `Aut(L,u)_O`.
    pub fn stabilizer(&self, orbit: usize) -> Vec<usize> {
        (0..self.perms.len())
            .filter(|&f| self.perms[f][orbit] as usize == orbit)
            .collect()
    }

    /// One left orbit from each `Aut(L,u)`-orbit.
    pub fn double_coset_reps(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_orbits()];
        let mut reps = Vec::new();
        for o in 0..self.num_orbits() {
            if !seen[o] {
                reps.push(o);
                for perm in &self.perms {
                    seen[perm[o] as usize] = true;
                }
            }
        }
        reps
    }

    /// Inner automorphisms fix every left orbit.
    pub fn inner_acts_trivially(&self, ctx: &PairContext) -> bool {
        ctx.data
            .inner
            .iter()
            .all(|&f| self.fixed(f) == self.num_orbits())
    }

    /// `Σ_O dim V^{Aut(L,u)_O}` over double coset representatives, with
    /// `dim V^S = (1/|S|) Σ_{s∈S} χ_V(s)`.
    pub fn multiplicity(&self, ctx: &PairContext, v: usize) -> Result<i64> {
        let mut total = 0i64;
        for o in self.double_coset_reps() {
            let stab = self.stabilizer(o);
            let mut s = Cyclotomic::zero(1);
            for &f in &stab {
                s = &s + ctx.chi(v, f);
            }
            let s = s.scale(&Rational::new(BigInt::from(1), BigInt::from(stab.len())));
            total += to_i64(&s)?;
        }
        Ok(total)
    }
}

fn to_i64(c: &Cyclotomic) -> Result<i64> {
    c.as_integer()
        .and_then(|v| v.to_i64())
        .ok_or_else(|| Error::InvalidArgument(format!("expected an integer, got {c}")))
}

/// Left orbits for the chain context `cc` and pair `ctx`, running over one
/// representative `P` of each `G_σ`-class of subgroups isomorphic to `L`.
pub fn l_pair_orbits(cc: &ChainContext<'_>, ctx: &PairContext) -> Result<LPairOrbitData> {
    let amb = cc.amb;
    let g = amb.group();
    let poset = amb.poset();
    let al = &ctx.lclass.aut;
    let nphi = ctx.data.auts.len();
    let mut out = LPairOrbitData {
        orbit_reps: Vec::new(),
        perms: vec![Vec::new(); nphi],
    };
    if g.order() % ctx.pair.l.order() != 0 || cc.local.sub.order() % ctx.pair.l.order() != 0 {
        return Ok(out);
    }
    for cls in poset.classes_under(g, &cc.local.sub) {
        let p_id = cls[0];
        let Some(pi0) = ctx.lclass.iso_to(amb, p_id)? else {
            continue;
        };
        let pts_arc = cc.points(p_id);
        let pts = match &*pts_arc {
            Ok(p) => p,
            Err(e) => return Err(e.clone()),
        };
        let x = x_at_p(g, pts, ctx, &pi0);
        // left orbits under the generators of N_H(P)
        let ngens: Vec<(usize, u32)> = pts
            .normalizer
            .generators()
            .iter()
            .map(|&h| (pts.pos(h), h))
            .collect();
        let mut orbit_of = vec![usize::MAX; x.entries.len()];
        let base = out.orbit_reps.len();
        for start in 0..x.entries.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let oid = out.orbit_reps.len();
            let (pt, a) = x.entries[start];
            out.orbit_reps.push((p_id, pts.points[pt], a));
            orbit_of[start] = oid;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let (pt, a) = x.entries[i];
                for &(pos, h) in &ngens {
                    let y = (pts.act(h, pt), al.mul(x.betas[pos], a));
                    let j = *x.index.get(&y).ok_or_else(|| {
                        Error::InvalidArgument("left action leaves the set of local pairs".into())
                    })?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = oid;
                        stack.push(j);
                    }
                }
            }
        }
        for (f, &r) in ctx.restricted_aut.iter().enumerate() {
            let mut perm = vec![u32::MAX; out.orbit_reps.len() - base];
            for (i, &(pt, a)) in x.entries.iter().enumerate() {
                let j = *x.index.get(&(pt, al.mul(a, r))).ok_or_else(|| {
                    Error::InvalidArgument("right action leaves the set of local pairs".into())
                })?;
                let (from, to) = (orbit_of[i] - base, orbit_of[j] as u32);
                if perm[from] == u32::MAX {
                    perm[from] = to;
                } else if perm[from] != to {
                    return Err(Error::InvalidArgument(
                        "right action is not defined on left orbits".into(),
                    ));
                }
            }
            out.perms[f].extend(perm);
        }
    }
    Ok(out)
}

/// The coordinate of `[[G, b]]` at `S_{L,u,V}`.
pub fn multiplicity(amb: &Ambient, block: usize, ctx: &PairContext, v: usize) -> Result<i64> {
    let whole = amb.whole()?;
    let b = whole
        .blocks
        .blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?
        .idempotent
        .clone();
    let cc = ChainContext::new(amb, whole, b);
    l_pair_orbits(&cc, ctx)?.multiplicity(ctx, v)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct K0Label {
    #[serde(rename = "L_key")]
    pub l_key: String,
    pub u_order: usize,
    pub u_class: usize,
    #[serde(rename = "V_index")]
    pub v_index: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WCheck {
    pub pair: String,
    pub phi_class: usize,
    pub value: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UnsupportedPair {
    pub pair: String,
    #[serde(rename = "L_order")]
    pub l_order: usize,
    pub u_order: usize,
    pub labels: usize,
    pub reason: String,
}

/// Everything computed for one pair over the chain orbits.
#[derive(Clone, Debug)]
pub struct PairResult {
    pub key: String,
    pub l_order: usize,
    /// `|W(G,L,u)^φ|` for each `φ ∈ Aut(L,u)`.
    pub w: Vec<i64>,
    /// `Σ_σ (−1)^{|σ|} m_{L,u,V}(G_σ, b_σ)` per `V`.
    pub coordinates: Vec<i64>,
    /// `⟨W, χ_V⟩` per `V`.
    pub character_side: Vec<i64>,
    pub inner_trivial: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FawcReport {
    pub group: String,
    pub p: u64,
    pub block: usize,
    pub defect: u32,
    pub labels: Vec<K0Label>,
    pub coordinates: Vec<i64>,
    pub w_checks: Vec<WCheck>,
    pub unsupported: Vec<UnsupportedPair>,
    pub routes_agree: bool,
    pub inner_trivial: bool,
    pub verdict: String,
}

impl FawcReport {
    /// No supported coordinate contradicts the prediction.
    pub fn consistent(&self) -> bool {
        self.verdict == "pass" || self.verdict == "partial"
    }
}

/// Iso types of the p-subgroups of `G` of order at most `max_l`.
pub fn l_classes(amb: &Ambient, max_l: usize) -> Result<Vec<Arc<LClass>>> {
    let g = amb.group();
    let poset = amb.poset();
    let mut out: Vec<Arc<LClass>> = Vec::new();
    for orbit in poset.orbits() {
        let sub = poset.get(orbit.rep);
        if sub.order() > max_l {
            continue;
        }
        let pg = Arc::new(g.subgroup_as_group(sub)?);
        let inv = iso_invariant(&pg);
        if out
            .iter()
            .any(|c| c.invariant == inv && find_isomorphism(&pg, &c.group).is_some())
        {
            continue;
        }
        out.push(Arc::new(LClass::new(amb.p, pg)?));
    }
    Ok(out)
}

/// The functorial refinement for one block: for each pair `(L, u)` with `L`
/// isomorphic to a p-subgroup of order at most `max_l`, the coordinates at
/// every `S_{L,u,V}` (two ways) and the fixed points of `W(G,L,u)`.
pub fn functorial_pairs(
    amb: &Ambient,
    block: usize,
    pairs: &[PairContext],
    budget: u64,
    choice: RepChoice,
) -> Result<Vec<std::result::Result<PairResult, String>>> {
    let whole = amb.whole()?;
    let b = whole
        .blocks
        .blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?
        .idempotent
        .clone();
    let orbits = chain_orbits(amb, budget, choice)?;
    let mut w: Vec<Vec<i64>> = pairs.iter().map(|c| vec![0; c.data.auts.len()]).collect();
    let mut coords: Vec<Vec<i64>> = pairs.iter().map(|c| vec![0; c.num_v()]).collect();
    let mut inner = vec![true; pairs.len()];
    let mut unsupported: Vec<Option<String>> = vec![None; pairs.len()];
    for o in &orbits {
        let cb = chain_block(amb, &b, &o.chain, &o.stabilizer)?;
        let cc = ChainContext::new(amb, cb.local, cb.b_sigma);
        for (i, ctx) in pairs.iter().enumerate() {
            if unsupported[i].is_some() {
                continue;
            }
            let data = match l_pair_orbits(&cc, ctx) {
                Ok(d) => d,
                Err(Error::UnsupportedPointStructure(m)) => {
                    unsupported[i] = Some(m);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let sign = o.sign();
            for (f, wf) in w[i].iter_mut().enumerate() {
                *wf += sign * data.fixed(f) as i64;
            }
            for (v, cv) in coords[i].iter_mut().enumerate() {
                *cv += sign * data.multiplicity(ctx, v)?;
            }
            inner[i] &= data.inner_acts_trivially(ctx);
        }
    }
    let mut out = Vec::with_capacity(pairs.len());
    for (i, ctx) in pairs.iter().enumerate() {
        if let Some(m) = unsupported[i].take() {
            out.push(Err(m));
            continue;
        }
        // ⟨W, χ_V⟩ over Aut(L,u)
        let n = ctx.data.auts.len();
        let character_side = (0..ctx.num_v())
            .map(|v| {
                let mut s = Cyclotomic::zero(1);
                for (f, &wf) in w[i].iter().enumerate() {
                    s = &s
                        + &ctx
                            .chi(v, f)
                            .conj()
                            .scale(&Rational::from_integer(BigInt::from(wf)));
                }
                to_i64(&s.scale(&Rational::new(BigInt::from(1), BigInt::from(n))))
            })
            .collect::<Result<Vec<i64>>>()?;
        out.push(Ok(PairResult {
            key: ctx.key(),
            l_order: ctx.pair.l.order(),
            w: w[i].clone(),
            coordinates: coords[i].clone(),
            character_side,
            inner_trivial: inner[i],
        }));
    }
    Ok(out)
}

/// Options for [`functorial_report`].
#[derive(Clone, Copy, Debug)]
pub struct FunctorialOptions {
    pub max_l: usize,
    pub budget: u64,
    pub choice: RepChoice,
}

impl Default for FunctorialOptions {
    fn default() -> Self {
        FunctorialOptions {
            max_l: 16,
            budget: crate::chains::DEFAULT_BUDGET,
            choice: RepChoice::Canonical,
        }
    }
}

/// All pairs over the iso types of p-subgroups of order at most `max_l`.
pub fn pair_contexts(amb: &Ambient, max_l: usize) -> Result<Vec<PairContext>> {
    let mut out = Vec::new();
    for lc in l_classes(amb, max_l)? {
        out.extend(PairContext::all_over(lc, amb.p)?);
    }
    Ok(out)
}

pub fn functorial_report(
    amb: &Ambient,
    group_name: &str,
    block: usize,
    opts: FunctorialOptions,
) -> Result<FawcReport> {
    let whole = amb.whole()?;
    let blk = whole
        .blocks
        .blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?;
    let defect = blk.defect;
    let pairs = pair_contexts(amb, opts.max_l)?;
    let results = functorial_pairs(amb, block, &pairs, opts.budget, opts.choice)?;
    let expected_awc = if defect == 0 { 1 } else { 0 };
    let mut labels = Vec::new();
    let mut coordinates = Vec::new();
    let mut w_checks = Vec::new();
    let mut unsupported = Vec::new();
    let mut routes_agree = true;
    let mut inner_trivial = true;
    let mut ok = true;
    for (ctx, res) in pairs.iter().zip(results) {
        let r = match res {
            Ok(r) => r,
            Err(reason) => {
                unsupported.push(UnsupportedPair {
                    pair: ctx.key(),
                    l_order: ctx.pair.l.order(),
                    u_order: ctx.pair.u_order,
                    labels: ctx.num_v(),
                    reason,
                });
                continue;
            }
        };
        routes_agree &= r.coordinates == r.character_side;
        inner_trivial &= r.inner_trivial;
        for (v, &c) in r.coordinates.iter().enumerate() {
            labels.push(K0Label {
                l_key: ctx.lclass.key.clone(),
                u_order: ctx.pair.u_order,
                u_class: ctx.pair.u_class,
                v_index: v,
            });
            coordinates.push(c);
            let expected = if ctx.is_trivial() { expected_awc } else { 0 };
            ok &= c == expected;
        }
        // one φ per class of Out(L,u)
        let out_classes = &ctx.data.out_table.classes;
        let mut seen = BTreeMap::new();
        for (f, &o) in ctx.data.out_of.iter().enumerate() {
            seen.entry(out_classes.class_of(o).unwrap()).or_insert(f);
        }
        for (cls, f) in seen {
            let value = r.w[f];
            let expected = if ctx.is_trivial() { expected_awc } else { 0 };
            ok &= value == expected;
            w_checks.push(WCheck {
                pair: r.key.clone(),
                phi_class: cls,
                value,
            });
        }
        ok &=
            r.w.iter()
                .all(|&x| x == if ctx.is_trivial() { expected_awc } else { 0 });
    }
    let verdict = if !inner_trivial {
        "review"
    } else if !ok || !routes_agree {
        "fail"
    } else if !unsupported.is_empty() {
        "partial"
    } else {
        "pass"
    };
    Ok(FawcReport {
        group: group_name.to_string(),
        p: amb.p,
        block,
        defect,
        labels,
        coordinates,
        w_checks,
        unsupported,
        routes_agree,
        inner_trivial,
        verdict: verdict.into(),
    })
}

/// Outcome of the quintuple pairing for one `(L, u)` and `φ`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuintupleReport {
    pub size: usize,
    /// Distinct `(σ, P, γ, π)` occurring in some quintuple.
    pub local_pairs: usize,
    pub signed_total: i64,
    /// `(σ, P)` classes of quintuples matched with their partners.
    pub matched_pairs: usize,
    /// `Σ_σ (−1)^{|σ|} |𝕊_σ| / |G|`, which must equal `W(G,L,u)(φ)`.
    pub w_from_quintuples: i64,
}

/// Materializes the set of quintuples `(σ, P, γ, π, g)` over all chains `σ`
/// (not just orbit representatives), with `P ≤ G_σ`, `P ≅ L`, `γ` a local
/// point, `(P_γ, π)` a local pair and `g ∈ N_{G_σ}(P_γ)` with
/// `i_g ∘ π = π ∘ φ`, and checks that `σ ↦ σ'` pairs them off with opposite
/// signs while keeping `P`, `γ`, `π` and `g`.
pub fn quintuple_involution_check(
    amb: &Ambient,
    block: usize,
    ctx: &PairContext,
    phi: usize,
    budget: u64,
) -> Result<QuintupleReport> {
    Ok(quintuple_involution_checks(amb, block, ctx, &[phi], budget)?.remove(0))
}

/// One `(σ, P)` with `P ≤ G_σ` and `P ≅ L`.
struct Site {
    chain: usize,
    p_id: usize,
    blocks: Vec<usize>,
    /// `(block of γ, α, [(β_h, h)])` for `(γ, π₀∘α)` in the local pair set,
    /// `h` running over `N_{G_σ}(P)` fixing `γ`.
    cands: Vec<(usize, u32, Vec<(u32, u32)>)>,
}

/// [`quintuple_involution_check`] for several `φ` at once; the chains,
/// local points and the pairing itself are only examined once.
pub fn quintuple_involution_checks(
    amb: &Ambient,
    block: usize,
    ctx: &PairContext,
    phis: &[usize],
    budget: u64,
) -> Result<Vec<QuintupleReport>> {
    if ctx.is_trivial() {
        return Err(Error::PTrivial);
    }
    let g = amb.group();
    let poset = amb.poset();
    let al = &ctx.lclass.aut;
    let whole = amb.whole()?;
    let b = whole
        .blocks
        .blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?
        .idempotent
        .clone();
    let fail = |m: String| Error::InvolutionFailure(m);
    let chains = all_chains(amb, budget)?;
    let chain_index: HashMap<&Vec<usize>, usize> =
        chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut sites: Vec<Site> = Vec::new();
    let mut site_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut chain_data = Vec::with_capacity(chains.len());
    for (ci, chain) in chains.iter().enumerate() {
        let h = stabilizer(g, poset, chain);
        let cb = chain_block(amb, &b, chain, &h)?;
        let cc = ChainContext::new(amb, cb.local.clone(), cb.b_sigma.clone());
        let first = sites.len();
        for p_id in 1..poset.len() {
            if !poset.get(p_id).is_subgroup_of(&h) {
                continue;
            }
            let Some(pi0) = ctx.lclass.iso_to(amb, p_id)? else {
                continue;
            };
            let pts_arc = cc.points(p_id);
            let pts = match &*pts_arc {
                Ok(p) => p,
                Err(e) => return Err(e.clone()),
            };
            let x = x_at_p(g, pts, ctx, &pi0);
            let cent = &pts.centralizer.sub;
            let mut cands = Vec::with_capacity(x.entries.len());
            for &(pt, a) in &x.entries {
                // left stabilizer, directly and as C_{G_σ}(P) ∩ N_{G_σ}(P_γ)
                let direct: Vec<u32> = pts
                    .normalizer
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|&(i, &hh)| pts.act(hh, pt) == pt && al.mul(x.betas[i], a) == a)
                    .map(|(_, &hh)| hh)
                    .collect();
                let via_c: Vec<u32> = cent
                    .elements()
                    .iter()
                    .copied()
                    .filter(|&hh| pts.act(hh, pt) == pt)
                    .collect();
                if direct != via_c {
                    return Err(fail(format!(
                        "left stabilizer mismatch at chain {chain:?}, P = {p_id}"
                    )));
                }
                let fixing: Vec<(u32, u32)> = pts
                    .normalizer
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &hh)| pts.act(hh, pt) == pt)
                    .map(|(i, &hh)| (x.betas[i], hh))
                    .collect();
                cands.push((pts.points[pt].block, a, fixing));
            }
            site_of.insert((ci, p_id), sites.len());
            sites.push(Site {
                chain: ci,
                p_id,
                blocks: pts.points.iter().map(|p| p.block).collect(),
                cands,
            });
        }
        chain_data.push((first..sites.len(), h.order(), l_pair_orbits(&cc, ctx)?));
    }

    // the pairing, independent of φ
    let mut partner_of = vec![0usize; sites.len()];
    for (si, s) in sites.iter().enumerate() {
        let chain = &chains[s.chain];
        let partner = kr_involution(g, poset, chain, s.p_id)?;
        let &pci = chain_index
            .get(&partner)
            .ok_or_else(|| fail(format!("partner of {chain:?} is not a chain")))?;
        if kr_involution(g, poset, &partner, s.p_id)? != *chain {
            return Err(fail(format!("pairing is not an involution at {chain:?}")));
        }
        if partner.len().abs_diff(chain.len()) != 1 {
            return Err(fail(format!("pairing keeps the length of {chain:?}")));
        }
        let &psi = site_of
            .get(&(pci, s.p_id))
            .ok_or_else(|| fail(format!("no quintuple data for the partner of {chain:?}")))?;
        if s.blocks != sites[psi].blocks {
            return Err(fail(format!(
                "Br_P(b_σ) differs between {chain:?} and its partner"
            )));
        }
        let p = poset.get(s.p_id);
        let (s1, s2) = (stabilizer(g, poset, chain), stabilizer(g, poset, &partner));
        if g.normalizer_in(&s1, p) != g.normalizer_in(&s2, p)
            || g.centralizer_in(&s1, p) != g.centralizer_in(&s2, p)
        {
            return Err(fail(format!("N(P) or C(P) differ at {chain:?}")));
        }
        partner_of[si] = psi;
    }

    let mut out = Vec::with_capacity(phis.len());
    for &phi in phis {
        let r_phi = ctx.restricted_aut[phi];
        let recs: Vec<Vec<(usize, u32, u32)>> = sites
            .iter()
            .map(|s| {
                let mut r: Vec<(usize, u32, u32)> = Vec::new();
                for (blk, a, fixing) in &s.cands {
                    let target = al.mul(al.mul(*a, r_phi), al.inv(*a));
                    r.extend(
                        fixing
                            .iter()
                            .filter(|f| f.0 == target)
                            .map(|f| (*blk, *a, f.1)),
                    );
                }
                r.sort_unstable();
                r
            })
            .collect();
        let (mut signed, mut size, mut local_pairs, mut matched) = (0i64, 0usize, 0usize, 0usize);
        for (ci, (range, order, orbits)) in chain_data.iter().enumerate() {
            let count: usize = recs[range.clone()].iter().map(|r| r.len()).sum();
            // each fixed left orbit contributes |G_σ| quintuples
            let fixed = orbits.fixed(phi);
            if count != fixed * order {
                return Err(fail(format!(
                    "chain {:?}: {count} quintuples, {fixed} fixed orbits",
                    chains[ci]
                )));
            }
            size += count;
            signed += if (chains[ci].len() - 1) % 2 == 0 {
                1
            } else {
                -1
            } * count as i64;
        }
        for (si, r) in recs.iter().enumerate() {
            let mut heads: Vec<(usize, u32)> = r.iter().map(|x| (x.0, x.1)).collect();
            heads.dedup();
            local_pairs += heads.len();
            if *r != recs[partner_of[si]] {
                return Err(fail(format!(
                    "quintuples at {:?} and its partner differ",
                    chains[sites[si].chain]
                )));
            }
            if !r.is_empty() {
                matched += 1;
            }
        }
        if signed != 0 {
            return Err(fail(format!("signed total {signed}")));
        }
        out.push(QuintupleReport {
            size,
            local_pairs,
            signed_total: signed,
            matched_pairs: matched / 2,
            w_from_quintuples: signed / g.order() as i64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::perm::parse_group_spec;

    fn amb(spec: &str, p: u64) -> Ambient {
        Ambient::new(Arc::new(parse_group_spec(spec).unwrap()), p)
    }

    fn ctx_for(a: &Ambient, order: usize, u_order: usize) -> PairContext {
        pair_contexts(a, order)
            .unwrap()
            .into_iter()
            .find(|c| c.pair.l.order() == order && c.pair.u_order == u_order)
            .unwrap()
    }

    #[test]
    fn s111_examples() {
        assert_eq!(s111_coordinate(&amb("S(3)", 3), 0).unwrap(), 2);
        let a = amb("S(3)", 2);
        let w = a.whole().unwrap();
        let principal = w.blocks.blocks.iter().position(|b| b.defect > 0).unwrap();
        let zero = w.blocks.blocks.iter().position(|b| b.defect == 0).unwrap();
        assert_eq!(s111_coordinate(&a, principal).unwrap(), 1);
        assert_eq!(s111_coordinate(&a, zero).unwrap(), 1);
    }

    #[test]
    fn local_points_examples() {
        let a = amb("C(2)", 2);
        let w = a.whole().unwrap();
        let one = w.one(&a.redmap);
        let pts = local_points(&a, &w, &one, &a.group().whole()).unwrap();
        assert_eq!(pts.points.len(), 1);
        assert_eq!(pts.stabilizer(0).len(), 2);

        let a = amb("S(3)", 3);
        let w = a.whole().unwrap();
        let one = w.one(&a.redmap);
        let a3 = a.poset().get(a.poset().orbits()[1].rep).clone();
        let pts = local_points(&a, &w, &one, &a3).unwrap();
        assert_eq!(pts.points.len(), 1);
        assert_eq!(pts.normalizer.order(), 6);
        assert_eq!(pts.stabilizer(0).len(), 6);
        // Br_P of the zero idempotent
        let zero = w.zero(&a.redmap);
        assert!(local_points(&a, &w, &zero, &a3).unwrap().points.is_empty());
        // P = 1: the simple modules
        assert_eq!(
            local_points(&a, &w, &one, &a.group().trivial())
                .unwrap()
                .points
                .len(),
            2
        );
    }

    #[test]
    fn unsupported_is_reported() {
        // C_{S4}(⟨(12)⟩) = ⟨(12),(34)⟩ is a 2-group: fine. In S4 at p = 3 the
        // centralizer of a 3-cycle is cyclic of order 3: fine too. A case with
        // two simples: C3 x S3 at p = 3 with P = C3 central in the first factor.
        let a = amb("C(3) x S(3)", 3);
        let w = a.whole().unwrap();
        let one = w.one(&a.redmap);
        let poset = a.poset();
        let g = a.group();
        let central = (1..poset.len())
            .find(|&i| poset.get(i).order() == 3 && g.centralizer(poset.get(i)).order() == 18)
            .unwrap();
        let r = local_points(&a, &w, &one, poset.get(central));
        assert!(matches!(r, Err(Error::UnsupportedPointStructure(_))));
    }

    #[test]
    fn l_pair_orbit_examples() {
        let a = amb("C(2)", 2);
        let ctx = ctx_for(&a, 2, 1);
        let w = a.whole().unwrap();
        let cc = ChainContext::new(&a, w.clone(), w.one(&a.redmap));
        let d = l_pair_orbits(&cc, &ctx).unwrap();
        assert_eq!(d.num_orbits(), 1);
        assert_eq!(d.double_coset_reps(), vec![0]);
        assert_eq!(d.stabilizer(0).len(), ctx.data.auts.len());
        assert_eq!(multiplicity(&a, 0, &ctx, 0).unwrap(), 1);

        // |L| = 4 does not divide |C2|
        let b = amb("C(4)", 2);
        let big = ctx_for(&b, 4, 1);
        assert_eq!(l_pair_orbits(&cc, &big).unwrap().num_orbits(), 0);

        // S3 at p = 3 with the inversion of C3: a transposition realizes it
        let a = amb("S(3)", 3);
        let ctx = ctx_for(&a, 3, 2);
        let w = a.whole().unwrap();
        let cc = ChainContext::new(&a, w.clone(), w.blocks.blocks[0].idempotent.clone());
        let d = l_pair_orbits(&cc, &ctx).unwrap();
        assert!(d.num_orbits() > 0);
    }

    #[test]
    fn trivial_label_is_l() {
        for (spec, p) in [
            ("S(3)", 3),
            ("S(3)", 2),
            ("S(4)", 2),
            ("A(4)", 2),
            ("C(6)", 3),
        ] {
            let a = amb(spec, p);
            let ctx = ctx_for(&a, 1, 1);
            for blk in 0..a.whole().unwrap().blocks.blocks.len() {
                assert_eq!(
                    multiplicity(&a, blk, &ctx, 0).unwrap() as usize,
                    s111_coordinate(&a, blk).unwrap()
                );
            }
        }
    }

    #[test]
    fn c2_report() {
        let a = amb("C(2)", 2);
        let r = functorial_report(&a, "C(2)", 0, FunctorialOptions::default()).unwrap();
        assert_eq!(r.verdict, "pass");
        assert_eq!(r.coordinates, vec![0, 0]);
        assert!(r.w_checks.iter().all(|w| w.value == 0));
        let ctx = ctx_for(&a, 2, 1);
        let q = quintuple_involution_check(&a, 0, &ctx, 0, 1000).unwrap();
        assert_eq!(
            (q.size, q.local_pairs, q.signed_total, q.matched_pairs),
            (4, 2, 0, 1)
        );
        let triv = ctx_for(&a, 1, 1);
        assert_eq!(
            quintuple_involution_check(&a, 0, &triv, 0, 1000),
            Err(Error::PTrivial)
        );
    }

    #[test]
    fn s3_p3_report() {
        let a = amb("S(3)", 3);
        let r = functorial_report(&a, "S(3)", 0, FunctorialOptions::default()).unwrap();
        assert_eq!(r.verdict, "pass", "{r:?}");
        assert!(r.coordinates.iter().all(|&c| c == 0));
        let ctx = ctx_for(&a, 3, 2);
        for f in 0..ctx.data.auts.len() {
            let q = quintuple_involution_check(&a, 0, &ctx, f, 1000).unwrap();
            assert_eq!(q.signed_total, 0);
            assert!(q.size > 0);
        }
        let all: Vec<usize> = (0..ctx.data.auts.len()).collect();
        let batch = quintuple_involution_checks(&a, 0, &ctx, &all, 1000).unwrap();
        for f in all {
            assert_eq!(
                batch[f],
                quintuple_involution_check(&a, 0, &ctx, f, 1000).unwrap()
            );
        }
    }

    #[test]
    fn defect_zero_report() {
        let a = amb("S(3)", 2);
        let w = a.whole().unwrap();
        let zero = w.blocks.blocks.iter().position(|b| b.defect == 0).unwrap();
        let r = functorial_report(&a, "S(3)", zero, FunctorialOptions::default()).unwrap();
        assert_eq!(r.verdict, "pass");
        let one = r.labels.iter().position(|l| l.l_key == "1#0").unwrap();
        assert_eq!(r.coordinates[one], 1);
        assert!(r
            .coordinates
            .iter()
            .enumerate()
            .all(|(i, &c)| i == one || c == 0));
    }

    #[test]
    fn small_groups_vanish() {
        for (spec, p) in [
            ("S(4)", 2),
            ("S(4)", 3),
            ("A(4)", 2),
            ("D(8)", 2),
            ("Q(8)", 2),
            ("A(5)", 2),
            ("D(12)", 2),
        ] {
            let a = amb(spec, p);
            for blk in 0..a.whole().unwrap().blocks.blocks.len() {
                let r = functorial_report(&a, spec, blk, FunctorialOptions::default()).unwrap();
                assert!(r.consistent(), "{spec} p={p} block {blk}: {r:?}");
                assert!(r.routes_agree);
            }
        }
    }
}
