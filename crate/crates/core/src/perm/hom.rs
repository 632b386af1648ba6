//! Homomorphisms between small groups given by generator images, and the
//! backtracking searches built on them.

use super::element::Perm;
use super::group::PermGroup;
use crate::error::{Error, Result};

/// A short generating set: greedily adds elements of largest order not yet
/// in the span.
pub fn small_generators(g: &PermGroup) -> Vec<u32> {
    let mut cand: Vec<u32> = (1..g.order() as u32).collect();
    cand.sort_by_key(|&x| (std::cmp::Reverse(g.order_of(x)), x));
    let mut gens = Vec::new();
    let mut cur = g.trivial();
    for x in cand {
        if cur.order() == g.order() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = g.generate(&gens);
        }
    }
    gens
}

/// Extends `gens[i] ↦ imgs[i]` along the Cayley graph of `⟨gens⟩ ≤ a`.
/// Returns the partial map (`u32::MAX` outside `⟨gens⟩`), or `None` if the
/// assignment does not define a homomorphism, or is not injective when
/// `injective` is set.
pub fn extend_hom(
    a: &PermGroup,
    b: &PermGroup,
    gens: &[u32],
    imgs: &[u32],
    injective: bool,
) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; a.order()];
    let mut used = if injective {
        vec![false; b.order()]
    } else {
        Vec::new()
    };
    map[0] = 0;
    if injective {
        used[0] = true;
    }
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = a.mul(x, s);
            let fy = b.mul(fx, t);
            match map[y as usize] {
                u32::MAX => {
                    if injective {
                        if used[fy as usize] {
                            return None;
                        }
                        used[fy as usize] = true;
                    }
                    map[y as usize] = fy;
                    queue.push(y);
                }
                v if v != fy => return None,
                _ => {}
            }
        }
        i += 1;
    }
    Some(map)
}

/// Depth-first search over injective homomorphisms `a → b` determined by
/// images of `gens`, image `i` drawn from `cands[i]`. `visit` receives each
/// complete map on `⟨gens⟩` and returns `false` to stop.
pub fn search_injective(
    a: &PermGroup,
    b: &PermGroup,
    gens: &[u32],
    cands: &[Vec<u32>],
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    fn rec(
        a: &PermGroup,
        b: &PermGroup,
        gens: &[u32],
        cands: &[Vec<u32>],
        imgs: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        let k = imgs.len();
        if k == gens.len() {
            let map = extend_hom(a, b, gens, imgs, true).expect("checked at the previous level");
            return visit(&map);
        }
        for &c in &cands[k] {
            imgs.push(c);
            if extend_hom(a, b, &gens[..=k], imgs, true).is_some()
                && !rec(a, b, gens, cands, imgs, visit)
            {
                imgs.pop();
                return false;
            }
            imgs.pop();
        }
        true
    }
    rec(
        a,
        b,
        gens,
        cands,
        &mut Vec::with_capacity(gens.len()),
        visit,
    )
}

fn same_order_cands(a: &PermGroup, b: &PermGroup, gens: &[u32]) -> Vec<Vec<u32>> {
    gens.iter()
        .map(|&s| {
            (0..b.order() as u32)
                .filter(|&y| b.order_of(y) == a.order_of(s))
                .collect()
        })
        .collect()
}

/// Invariant used to rule out isomorphism cheaply: the sorted list of
/// `(element order, centralizer order)` pairs.
pub fn iso_invariant(g: &PermGroup) -> Vec<(u32, u32)> {
    let n = g.order() as u32;
    let mut v: Vec<(u32, u32)> = (0..n)
        .map(|x| {
            (
                g.order_of(x),
                (0..n).filter(|&y| g.mul(x, y) == g.mul(y, x)).count() as u32,
            )
        })
        .collect();
    v.sort_unstable();
    v
}

/// An isomorphism `a → b` as an element-index map, if one exists.
pub fn find_isomorphism(a: &PermGroup, b: &PermGroup) -> Option<Vec<u32>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = small_generators(a);
    let cands = same_order_cands(a, b, &gens);
    let mut found = None;
    search_injective(a, b, &gens, &cands, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// All automorphisms of `g`, as a permutation group on its element indices.
pub fn automorphism_group(g: &PermGroup, cap: usize) -> Result<PermGroup> {
    let gens = small_generators(g);
    let cands = same_order_cands(g, g, &gens);
    let mut maps: Vec<Vec<u32>> = Vec::new();
    let mut over = false;
    search_injective(g, g, &gens, &cands, &mut |m| {
        maps.push(m.to_vec());
        over = maps.len() > cap;
        !over
    });
    if over {
        return Err(Error::CapExceeded {
            what: "automorphism group".into(),
            cap,
        });
    }
    perm_group_from_maps(&maps, cap)
}

/// The group formed by a list of permutations already closed under
/// composition, with a small generating set picked greedily.
pub fn perm_group_from_maps(maps: &[Vec<u32>], cap: usize) -> Result<PermGroup> {
    let degree = maps.first().map_or(1, |m| m.len()).max(1);
    let mut gens: Vec<Perm> = Vec::new();
    let mut cur = PermGroup::new(degree, vec![], cap)?;
    for m in maps {
        let p = Perm::from_images(m.clone())?;
        if cur.index_of(&p).is_none() {
            gens.push(p);
            cur = PermGroup::new(degree, gens.clone(), cap)?;
        }
    }
    if cur.order() != maps.len().max(1) {
        return Err(Error::InvalidArgument(format!(
            "{} maps do not form a group",
            maps.len()
        )));
    }
    Ok(cur)
}

/// The left regular representation of an abstract group on `{0, …, n-1}`
/// given by its multiplication, generated by the listed elements.
pub fn regular_group(
    n: usize,
    mul: impl Fn(u32, u32) -> u32,
    gens: &[u32],
    cap: usize,
) -> Result<PermGroup> {
    let perms = gens
        .iter()
        .map(|&s| Perm::from_images((0..n as u32).map(|y| mul(s, y)).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(n.max(1), perms, cap)
}

/// Index in `reg` of the left multiplication by `x`.
pub fn regular_index(reg: &PermGroup, n: usize, mul: impl Fn(u32, u32) -> u32, x: u32) -> u32 {
    let p = Perm::from_images((0..n as u32).map(|y| mul(x, y)).collect())
        .expect("left multiplication is a bijection");
    reg.index_of(&p).expect("element lies in the regular group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::dsl::parse_group_spec;

    /// All bijections of a tiny group that respect the multiplication table.
    fn brute_aut_order(spec: &str) -> usize {
        let g = parse_group_spec(spec).unwrap();
        let n = g.order();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut count = 0;
        loop {
            if perm[0] == 0
                && (0..n as u32).all(|a| {
                    (0..n as u32).all(|b| {
                        perm[g.mul(a, b) as usize] == g.mul(perm[a as usize], perm[b as usize])
                    })
                })
            {
                count += 1;
            }
            // next permutation
            let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        count
    }

    #[test]
    fn automorphism_group_examples() {
        let ord = |s: &str| {
            automorphism_group(&parse_group_spec(s).unwrap(), 2000)
                .unwrap()
                .order()
        };
        assert_eq!(ord("C(2)"), 1);
        assert_eq!(ord("C(2) x C(2)"), 6);
        assert_eq!(ord("C(4)"), 2);
        assert_eq!(ord("C(1)"), 1);
        assert_eq!(ord("Q(8)"), 24);
        assert_eq!(ord("D(8)"), 8);
        assert_eq!(ord("C(2) x C(2) x C(2)"), 168);
        assert_eq!(ord("S(3)"), 6);
        for s in [
            "C(2) x C(2)",
            "C(4)",
            "S(3)",
            "C(5)",
            "C(6)",
            "D(8)",
            "Q(8)",
        ] {
            assert_eq!(ord(s), brute_aut_order(s), "{s}");
        }
    }

    #[test]
    fn automorphism_cap() {
        let g = parse_group_spec("C(2) x C(2) x C(2)").unwrap();
        assert!(matches!(
            automorphism_group(&g, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn isomorphism_search() {
        let a = parse_group_spec("D(8)").unwrap();
        let b = parse_group_spec("perm[4; (1 2 3 4); (1 3)]").unwrap();
        let m = find_isomorphism(&a, &b).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(m[a.mul(x, y) as usize], b.mul(m[x as usize], m[y as usize]));
            }
        }
        let q = parse_group_spec("Q(8)").unwrap();
        assert!(find_isomorphism(&a, &q).is_none());
        let v = parse_group_spec("C(2) x C(2)").unwrap();
        assert!(find_isomorphism(&v, &parse_group_spec("C(4)").unwrap()).is_none());
        assert_ne!(iso_invariant(&a), iso_invariant(&q));
    }

    #[test]
    fn regular_representation() {
        let n = 6;
        let r = regular_group(n, |a, b| (a + b) % 6, &[1], 100).unwrap();
        assert_eq!(r.order(), 6);
        let x = regular_index(&r, n, |a, b| (a + b) % 6, 2);
        assert_eq!(r.order_of(x), 3);
    }
}
