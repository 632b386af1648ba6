//! Dense polynomials over the prime field `F_p`, lowest degree first.
//!
//! Used to build the extension fields `F_{p^m}` and to split cyclotomic
//! polynomials modulo `p` (equal-degree factorization).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::numtheory::inv_mod;

pub type PolyFp = Vec<u64>;

pub fn trim(mut a: PolyFp) -> PolyFp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (PolyFp, PolyFp) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = dr - db;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let t = (c as u128 * bj as u128 % p as u128) as u64;
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    divrem(a, b, p).1
}

pub fn make_monic(a: &[u64], p: u64) -> PolyFp {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = inv_mod(lead, p).expect("invertible");
            a.iter()
                .map(|&c| (c as u128 * inv as u128 % p as u128) as u64)
                .collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> PolyFp {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], e: &BigUint, m: &[u64], p: u64) -> PolyFp {
    let mut result: PolyFp = vec![1];
    let mut base = rem(a, m, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = mulmod(&result, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
    }
    rem(&result, m, p)
}

/// Splits a squarefree monic `f` all of whose irreducible factors have degree
/// `m` (Cantor–Zassenhaus). Factors are returned monic, sorted by their
/// coefficient sequences read from the constant term upward.
pub fn equal_degree_factors(f: &[u64], m: usize, p: u64, seed: u64) -> Vec<PolyFp> {
    let f = make_monic(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    split(&f, m, p, &mut rng, &mut out);
    out.sort();
    out
}

fn split(f: &[u64], m: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<PolyFp>) {
    let d = degree(f).unwrap_or(0);
    if d == 0 {
        return;
    }
    if d == m {
        out.push(f.to_vec());
        return;
    }
    loop {
        let a: PolyFp = trim((0..d).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g0 = gcd(&a, f, p);
        let g = if degree(&g0).unwrap_or(0) > 0 {
            g0
        } else if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(m-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..m {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            gcd(&acc, f, p)
        } else {
            let q = BigUint::from(p).pow(m as u32);
            let e = (q - BigUint::one()) / BigUint::from(2u32);
            let h = powmod(&a, &e, f, p);
            let h1 = sub(&h, &[1], p);
            if h1.is_empty() {
                continue;
            }
            gcd(&h1, f, p)
        };
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < d {
            let (q, r) = divrem(f, &g, p);
            debug_assert!(r.is_empty());
            split(&g, m, p, rng, out);
            split(&make_monic(&q, p), m, p, rng, out);
            return;
        }
    }
}

/// `Φ_n` reduced modulo `p`.
pub fn cyclotomic_mod_p(n: u64, p: u64) -> PolyFp {
    // x^n - 1 divided by Φ_d for proper divisors d, computed mod p
    fn rec(n: u64, p: u64, memo: &mut std::collections::HashMap<u64, PolyFp>) -> PolyFp {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut num = vec![0u64; n as usize + 1];
        num[0] = p - 1;
        num[n as usize] = 1;
        let mut num = trim(num);
        if p == 2 {
            num[0] = 1;
        }
        for d in 1..n {
            if n % d == 0 {
                let pd = rec(d, p, memo);
                let (q, r) = divrem(&num, &pd, p);
                debug_assert!(r.is_empty());
                num = q;
            }
        }
        memo.insert(n, num.clone());
        num
    }
    let mut memo = std::collections::HashMap::new();
    rec(n, p, &mut memo)
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|c| c.is_zero())
}
