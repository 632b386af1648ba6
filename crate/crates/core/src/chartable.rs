//! Ordinary character tables by the Dixon–Schneider method.
//!
//! Central characters are common eigenvectors of the class-sum
//! multiplication matrices. They are found over a prime field `F_q` with
//! `q ≡ 1 (mod exp)`, then lifted to cyclotomic values by counting the
//! eigenvalue multiplicities of each element.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::numtheory::{inv_mod, is_prime, pow_mod, prime_divisors, primitive_root};
use crate::arith::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::perm::{ConjClassTable, PermGroup, Subgroup};

/// `a_{ijk} = #{(x, y) ∈ C_i × C_j : xy = z}` for a fixed `z ∈ C_k`.
#[derive(Clone, Debug)]
pub struct ClassConstants {
    r: usize,
    data: Vec<u32>,
}

impl ClassConstants {
    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.r + j) * self.r + k]
    }
}

pub fn class_algebra_constants(
    g: &PermGroup,
    h: &Subgroup,
    classes: &ConjClassTable,
) -> ClassConstants {
    let r = classes.len();
    let mut data = vec![0u32; r * r * r];
    for (k, &z) in classes.reps.iter().enumerate() {
        for &x in h.elements() {
            let i = classes.class_of(x).unwrap();
            let y = g.mul(g.inv(x), z);
            let j = classes.class_of(y).unwrap();
            data[(i * r + j) * r + k] += 1;
        }
    }
    ClassConstants { r, data }
}

/// Stable key for a subgroup, equal to [`PermGroup::canonical_key`] of the
/// subgroup viewed as a permutation group.
pub fn subgroup_key(g: &PermGroup, h: &Subgroup) -> String {
    let mut s = Sha256::new();
    s.update((g.degree() as u64).to_le_bytes());
    for &x in h.elements() {
        for &i in g.element(x).images() {
            s.update(i.to_le_bytes());
        }
    }
    hex::encode(&s.finalize()[..16])
}

/// The irreducible characters of a group `H` (a subgroup of some ambient
/// permutation group), with classes in the ambient group's element indices.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group_key: String,
    pub order: usize,
    pub exponent: u64,
    pub classes: ConjClassTable,
    pub class_orders: Vec<u32>,
    /// `irr[i][j] = χ_i(g_j)`, all of conductor `exponent`.
    pub irr: Vec<Vec<Cyclotomic>>,
    pub degrees: Vec<u64>,
    /// For each prime dividing the exponent, class `j ↦` class of `g_j^q`.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    /// Class of `g_j⁻¹`.
    pub inverse_class: Vec<usize>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn centralizer_order(&self, j: usize) -> usize {
        self.order / self.classes.sizes[j]
    }

    /// `(1/|H|) Σ_j |C_j| a(g_j) conj(b(g_j))`.
    pub fn schur_inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Result<Cyclotomic> {
        let r = self.num_classes();
        for v in [a, b] {
            if v.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: v.len(),
                });
            }
        }
        let mut acc = Cyclotomic::zero(1);
        for j in 0..r {
            let t = (&a[j] * &b[j].conj())
                .scale(&Rational::from_integer(BigInt::from(self.classes.sizes[j])));
            acc = &acc + &t;
        }
        Ok(acc.scale(&Rational::new(BigInt::from(1), BigInt::from(self.order))))
    }

    /// Checks both orthogonality relations, `Σ d² = |H|` and `d | |H|`, in
    /// exact integer arithmetic over `Z[ζ_e]`.
    pub fn verify(&self) -> Result<()> {
        let r = self.num_classes();
        let e = self.exponent as u32;
        if self.irr.len() != r || self.irr.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidArgument(
                "character table is not square".into(),
            ));
        }
        let sparse: Vec<Vec<Vec<(u32, i64)>>> = self
            .irr
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| int_sparse(v, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let inner = |terms: &mut dyn Iterator<Item = (i64, &Vec<(u32, i64)>, &Vec<(u32, i64)>)>| {
            let mut acc = vec![0i64; e as usize];
            for (w, x, y) in terms {
                for &(a, u) in x.iter() {
                    for &(b, v) in y.iter() {
                        acc[((a + e - b) % e) as usize] += w * u * v;
                    }
                }
            }
            Cyclotomic::from_exponent_counts(e, &acc)
        };
        for i in 0..r {
            for i2 in i..r {
                let s = inner(
                    &mut (0..r)
                        .map(|j| (self.classes.sizes[j] as i64, &sparse[i][j], &sparse[i2][j])),
                );
                let expect = if i == i2 { self.order as i64 } else { 0 };
                if s != Cyclotomic::from_int(1, expect) {
                    return Err(Error::InvalidArgument(format!(
                        "row orthogonality fails for characters {i}, {i2}"
                    )));
                }
            }
        }
        for j in 0..r {
            for j2 in j..r {
                let s = inner(&mut (0..r).map(|i| (1, &sparse[i][j], &sparse[i][j2])));
                let expect = if j == j2 {
                    self.centralizer_order(j) as i64
                } else {
                    0
                };
                if s != Cyclotomic::from_int(1, expect) {
                    return Err(Error::InvalidArgument(format!(
                        "column orthogonality fails for classes {j}, {j2}"
                    )));
                }
            }
        }
        let mut total = 0u64;
        for (i, &d) in self.degrees.iter().enumerate() {
            if self.irr[i][0] != Cyclotomic::from_int(1, d as i64)
                || d == 0
                || self.order as u64 % d != 0
            {
                return Err(Error::InvalidArgument(format!(
                    "bad degree for character {i}"
                )));
            }
            total += d * d;
        }
        if total != self.order as u64 {
            return Err(Error::InvalidArgument(
                "sum of squared degrees differs from the group order".into(),
            ));
        }
        Ok(())
    }

    pub fn to_repr(&self, g: &PermGroup) -> CharTableRepr {
        CharTableRepr {
            group_key: self.group_key.clone(),
            e: self.exponent,
            classes: self
                .classes
                .reps
                .iter()
                .zip(&self.classes.sizes)
                .map(|(&rep, &size)| ClassRepr {
                    rep_cycles: g.element(rep).to_string(),
                    size,
                })
                .collect(),
            irr: self.irr.clone(),
        }
    }

    /// Rebuilds a table from its serialized form. The classes are recomputed
    /// and matched, and the table is re-verified; any mismatch is an error.
    pub fn from_repr(g: &PermGroup, h: &Subgroup, repr: CharTableRepr) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("stored character table rejected: {m}"));
        if repr.group_key != subgroup_key(g, h) {
            return Err(bad("group key mismatch"));
        }
        let classes = g.conjugacy_classes(h);
        if repr.classes.len() != classes.len() {
            return Err(bad("class count mismatch"));
        }
        for (j, c) in repr.classes.iter().enumerate() {
            if c.size != classes.sizes[j] || c.rep_cycles != g.element(classes.reps[j]).to_string()
            {
                return Err(bad("class mismatch"));
            }
        }
        let exponent = h.elements().iter().fold(1u64, |a, &x| {
            crate::arith::numtheory::lcm(a, g.order_of(x) as u64)
        });
        if repr.e != exponent {
            return Err(bad("exponent mismatch"));
        }
        let mut degrees = Vec::new();
        for row in &repr.irr {
            let d = row
                .first()
                .and_then(|v| v.as_integer())
                .and_then(|d| d.to_u64())
                .ok_or_else(|| bad("degree"))?;
            degrees.push(d);
        }
        let mut irr = repr.irr;
        for row in irr.iter_mut() {
            for v in row.iter_mut() {
                if exponent as u32 % v.conductor() != 0 {
                    return Err(bad("value outside Q(ζ_e)"));
                }
                *v = v.embed(exponent as u32);
            }
        }
        let (class_orders, power_maps, inverse_class) = class_maps(g, &classes, exponent);
        let t = CharacterTable {
            group_key: repr.group_key,
            order: h.order(),
            exponent,
            classes,
            class_orders,
            irr,
            degrees,
            power_maps,
            inverse_class,
        };
        t.verify().map_err(|e| bad(&e.to_string()))?;
        Ok(t)
    }
}

/// Serialized table: `{group_key, e, classes[{rep_cycles, size}], irr}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CharTableRepr {
    pub group_key: String,
    pub e: u64,
    pub classes: Vec<ClassRepr>,
    pub irr: Vec<Vec<Cyclotomic>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassRepr {
    pub rep_cycles: String,
    pub size: usize,
}

fn int_sparse(v: &Cyclotomic, e: u32) -> Result<Vec<(u32, i64)>> {
    if e % v.conductor() != 0 {
        return Err(Error::InvalidArgument(
            "character value outside Q(ζ_e)".into(),
        ));
    }
    let v = v.embed(e);
    v.sparse()
        .into_iter()
        .map(|(k, c)| {
            if !c.is_integer() {
                return Err(Error::InvalidArgument(
                    "character value is not an algebraic integer".into(),
                ));
            }
            Ok((
                k,
                c.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::InvalidArgument("value too large".into()))?,
            ))
        })
        .collect()
}

type ClassMaps = (Vec<u32>, BTreeMap<u64, Vec<usize>>, Vec<usize>);

fn class_maps(g: &PermGroup, classes: &ConjClassTable, exponent: u64) -> ClassMaps {
    let class_orders: Vec<u32> = classes.reps.iter().map(|&x| g.order_of(x)).collect();
    let mut power_maps = BTreeMap::new();
    for q in prime_divisors(exponent) {
        let m = classes
            .reps
            .iter()
            .map(|&x| classes.class_of(g.pow(x, q as i64)).unwrap())
            .collect();
        power_maps.insert(q, m);
    }
    let inverse_class = classes
        .reps
        .iter()
        .map(|&x| classes.class_of(g.inv(x)).unwrap())
        .collect();
    (class_orders, power_maps, inverse_class)
}

/// Smallest prime `q ≡ 1 (mod e)` with `q > 2√n`.
pub fn dixon_prime(e: u64, n: u64) -> u64 {
    let mut q = e + 1;
    loop {
        if is_prime(q) && q * q > 4 * n {
            return q;
        }
        q += e;
    }
}

/// Character table of `h`, computed from scratch and verified.
pub fn character_table(g: &PermGroup, h: &Subgroup) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes(h);
    let consts = class_algebra_constants(g, h, &classes);
    character_table_with(g, h, classes, &consts)
}

pub fn character_table_with(
    g: &PermGroup,
    h: &Subgroup,
    classes: ConjClassTable,
    consts: &ClassConstants,
) -> Result<CharacterTable> {
    let n = h.order() as u64;
    let r = classes.len();
    let exponent = h.elements().iter().fold(1u64, |a, &x| {
        crate::arith::numtheory::lcm(a, g.order_of(x) as u64)
    });
    let q = dixon_prime(exponent, n);
    let sizes: Vec<u64> = classes.sizes.iter().map(|&s| s as u64).collect();
    let (class_orders, power_maps, inverse_class) = class_maps(g, &classes, exponent);

    let omegas = central_characters(consts, q)?;
    if omegas.len() != r {
        return Err(Error::InvalidArgument(format!(
            "found {} central characters for {r} classes",
            omegas.len()
        )));
    }
    let omega_root = primitive_root(q);
    let mut rows: Vec<(u64, Vec<Cyclotomic>)> = Vec::with_capacity(r);
    for w in &omegas {
        // |H| / d² = Σ_k ω_k ω_{k*} / |C_k|
        let mut s = 0u64;
        for k in 0..r {
            let t = w[k] * w[inverse_class[k]] % q * inv_mod(sizes[k] % q, q).unwrap() % q;
            s = (s + t) % q;
        }
        let d2 = n % q * inv_mod(s, q).ok_or(Error::DivisionByZero)? % q;
        let d = (1..=((n as f64).sqrt() as u64 + 1))
            .find(|&d| d * d % q == d2 && n % d == 0)
            .ok_or_else(|| Error::InvalidArgument("no admissible character degree".into()))?;
        let chi_mod: Vec<u64> = (0..r)
            .map(|k| d % q * w[k] % q * inv_mod(sizes[k] % q, q).unwrap() % q)
            .collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = class_orders[k] as u64;
            let x = classes.reps[k];
            let eps = pow_mod(omega_root, (q - 1) / o, q);
            let eps_inv = inv_mod(eps, q).unwrap();
            let o_inv = inv_mod(o % q, q).unwrap();
            let vals: Vec<u64> = (0..o)
                .map(|j| chi_mod[classes.class_of(g.pow(x, j as i64)).unwrap()])
                .collect();
            let mut counts = vec![0i64; o as usize];
            for (l, c) in counts.iter_mut().enumerate() {
                let step = pow_mod(eps_inv, l as u64, q);
                let mut z = 1u64;
                let mut acc = 0u64;
                for &v in &vals {
                    acc = (acc + v * z) % q;
                    z = z * step % q;
                }
                let m = acc * o_inv % q;
                if m > d {
                    return Err(Error::InvalidArgument(
                        "eigenvalue multiplicity out of range".into(),
                    ));
                }
                *c = m as i64;
            }
            row.push(Cyclotomic::from_exponent_counts(o as u32, &counts).embed(exponent as u32));
        }
        rows.push((d, row));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let t = CharacterTable {
        group_key: subgroup_key(g, h),
        order: h.order(),
        exponent,
        classes,
        class_orders,
        degrees: rows.iter().map(|r| r.0).collect(),
        irr: rows.into_iter().map(|r| r.1).collect(),
        power_maps,
        inverse_class,
    };
    t.verify()?;
    Ok(t)
}

/// Common eigenvectors `w` (normalized `w_0 = 1`) of the matrices
/// `(A_i)_{jk} = a_{ijk}` over `F_q`.
fn central_characters(consts: &ClassConstants, q: u64) -> Result<Vec<Vec<u64>>> {
    let r = consts.len();
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as u64).collect())
        .collect();
    let mut work: Vec<(Vec<Vec<u64>>, usize)> = vec![(identity, 1)];
    let mut done = Vec::new();
    while let Some((basis, i)) = work.pop() {
        if basis.len() == 1 {
            let v = &basis[0];
            let inv = inv_mod(v[0], q).ok_or(Error::DivisionByZero)?;
            done.push(v.iter().map(|&x| x * inv % q).collect());
            continue;
        }
        if i >= r {
            return Err(Error::InvalidArgument(
                "class sums do not separate central characters".into(),
            ));
        }
        match split_space(consts, i, &basis, q)? {
            Some(parts) => work.extend(parts.into_iter().map(|b| (b, i + 1))),
            None => work.push((basis, i + 1)),
        }
    }
    done.sort();
    Ok(done)
}

/// Splits the invariant subspace spanned by `basis` (rows, reduced echelon
/// form) into eigenspaces of `A_i`; `None` if `A_i` is scalar on it.
fn split_space(
    consts: &ClassConstants,
    i: usize,
    basis: &[Vec<u64>],
    q: u64,
) -> Result<Option<Vec<Vec<Vec<u64>>>>> {
    let r = consts.len();
    let d = basis.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).unwrap())
        .collect();
    // rm[s][t] = s-th coordinate of A_i b_t
    let mut rm = vec![vec![0u64; d]; d];
    for (t, b) in basis.iter().enumerate() {
        for (s, &j) in pivots.iter().enumerate() {
            let mut acc = 0u64;
            for (k, &bk) in b.iter().enumerate() {
                if bk != 0 {
                    acc = (acc + consts.get(i, j, k) as u64 % q * bk) % q;
                }
            }
            rm[s][t] = acc;
        }
    }
    let cp = charpoly_mod(&rm, q);
    let roots: Vec<u64> = (0..q).filter(|&x| eval_mod(&cp, x, q) == 0).collect();
    if roots.len() == 1 {
        return Ok(None);
    }
    let mut parts = Vec::new();
    let mut total = 0;
    for lam in roots {
        let mut m: Vec<Vec<u64>> = rm.clone();
        for (s, row) in m.iter_mut().enumerate() {
            row[s] = (row[s] + q - lam) % q;
        }
        let ker = kernel_mod(&m, q);
        total += ker.len();
        let mut vecs: Vec<Vec<u64>> = ker
            .iter()
            .map(|x| {
                let mut v = vec![0u64; r];
                for (t, &c) in x.iter().enumerate() {
                    if c != 0 {
                        for (k, &bk) in basis[t].iter().enumerate() {
                            v[k] = (v[k] + c * bk) % q;
                        }
                    }
                }
                v
            })
            .collect();
        rref_mod(&mut vecs, q);
        parts.push(vecs);
    }
    if total != d {
        return Err(Error::InvalidArgument(
            "class multiplication matrix is not diagonalizable".into(),
        ));
    }
    Ok(Some(parts))
}

fn eval_mod(p: &[u64], x: u64, q: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (acc * x + c) % q)
}

/// Characteristic polynomial, lowest degree first, via Hessenberg form.
fn charpoly_mod(a: &[Vec<u64>], q: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], q).unwrap();
        for i in m + 1..n {
            let u = h[i][m - 1] * inv % q;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + q - u * h[m][j] % q) % q;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % q;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        // (x - h[m-1][m-1]) p_{m-1}
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % q;
            next[k] = (next[k] + q - c * h[m - 1][m - 1] % q) % q;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % q;
            let coef = t * h[m - i - 1][m - 1] % q;
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = (next[k] + q - coef * c % q) % q;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn rref_mod(m: &mut Vec<Vec<u64>>, q: u64) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = inv_mod(m[row][c], q).unwrap();
        for x in m[row].iter_mut() {
            *x = *x * inv % q;
        }
        for i in 0..m.len() {
            if i != row && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    m[i][k] = (m[i][k] + q - f * m[row][k] % q) % q;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    m.truncate(row);
    pivots
}

fn kernel_mod(m: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = rref_mod(&mut a, q);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (q - a[r][free]) % q;
            }
            v
        })
        .collect()
}

/// `|C| χ(g_C) / χ(1)`, an algebraic integer.
pub fn central_character_value(t: &CharacterTable, i: usize, k: usize) -> Cyclotomic {
    let f = Rational::new(BigInt::from(t.classes.sizes[k]), BigInt::from(t.degrees[i]));
    t.irr[i][k].scale(&f)
}

impl CharacterTable {
    /// The value vector of the regular character.
    pub fn regular_character(&self) -> Vec<Cyclotomic> {
        (0..self.num_classes())
            .map(|j| Cyclotomic::from_int(1, if j == 0 { self.order as i64 } else { 0 }))
            .collect()
    }

    pub fn trivial_character(&self) -> Vec<Cyclotomic> {
        vec![Cyclotomic::one(1); self.num_classes()]
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        self.irr
            .iter()
            .position(|row| row.iter().all(|v| v.is_one()))
            .expect("trivial character present")
    }

    /// Decomposes a class function into irreducible constituents.
    pub fn decompose(&self, f: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        self.irr
            .iter()
            .map(|chi| self.schur_inner_product(f, chi))
            .collect()
    }

    pub fn is_zero_class_function(f: &[Cyclotomic]) -> bool {
        f.iter().all(|v| v.is_zero())
    }
}
