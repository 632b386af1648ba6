//! Exact elements of the cyclotomic fields `Q(ζ_n)`.
//!
//! An element of conductor `n` is stored by its coordinates in the power
//! basis `1, ζ, …, ζ^{φ(n)-1}`, i.e. as a polynomial reduced modulo the
//! cyclotomic polynomial `Φ_n`. The power basis is an integral basis of
//! `Z[ζ_n]`, so the representation is canonical and algebraic integers have
//! integer coordinates. Values of different conductors are compared and
//! combined by embedding both into the lcm conductor.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::numtheory::{euler_phi, lcm};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `Φ_n` and the power-basis images of `x^k` for `φ(n) ≤ k < n`.
struct CycloData {
    phi: usize,
    /// Monic `Φ_n`, lowest degree first.
    poly: Vec<i64>,
    /// `high[k - φ]` is `x^k mod Φ_n`.
    high: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclo_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclo_poly(d, memo);
            num = poly_div_exact(&num, &pd);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn cyclo_data(n: u32) -> Arc<CycloData> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    static POLYS: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&n) {
        return d.clone();
    }
    let poly = {
        let mut memo = POLYS
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .unwrap();
        cyclo_poly(n as u64, &mut memo)
    };
    let phi = euler_phi(n as u64) as usize;
    debug_assert_eq!(poly.len(), phi + 1);
    let mut high = Vec::with_capacity(n as usize - phi);
    // x^φ = -(Φ_n - x^φ)
    let mut cur: Vec<i64> = poly[..phi].iter().map(|c| -c).collect();
    for _ in phi..n as usize {
        high.push(cur.clone());
        // multiply by x and reduce
        let top = if phi > 0 { cur[phi - 1] } else { 0 };
        let mut next = vec![0i64; phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1];
        }
        if top != 0 {
            for i in 0..phi {
                next[i] = next[i]
                    .checked_sub(
                        top.checked_mul(poly[i])
                            .expect("cyclotomic reduction overflow"),
                    )
                    .expect("cyclotomic reduction overflow");
            }
        }
        cur = next;
    }
    let data = Arc::new(CycloData { phi, poly, high });
    cache.lock().unwrap().insert(n, data.clone());
    data
}

/// An element of `Q(ζ_n)` in canonical power-basis form.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let phi = cyclo_data(n).phi;
        Cyclotomic {
            conductor: n,
            coeffs: vec![Rational::zero(); phi],
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u32, v: Rational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    /// `ζ_n^k`.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut full = vec![Rational::zero(); n as usize];
        full[e] = Rational::one();
        Self::from_full(n, full)
    }

    pub fn zeta(n: u32) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Builds `Σ c_k ζ_n^k` from integer multiplicities indexed by `k < n`.
    pub fn from_exponent_counts(n: u32, counts: &[i64]) -> Self {
        let mut full = vec![Rational::zero(); n as usize];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                full[k % n as usize] += Rational::from_integer(BigInt::from(c));
            }
        }
        Self::from_full(n, full)
    }

    /// Builds an element from coordinates in the power basis.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let phi = cyclo_data(n).phi;
        if coeffs.len() != phi {
            return Err(Error::DimensionMismatch {
                expected: phi,
                got: coeffs.len(),
            });
        }
        Ok(Cyclotomic {
            conductor: n,
            coeffs,
        })
    }

    /// Reduces a vector indexed by exponents `0..n` into power-basis form.
    fn from_full(n: u32, mut full: Vec<Rational>) -> Self {
        let data = cyclo_data(n);
        let phi = data.phi;
        debug_assert_eq!(full.len(), n as usize);
        let high: Vec<Rational> = full.drain(phi..).collect();
        for (k, c) in high.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in data.high[k].iter().enumerate() {
                if r != 0 {
                    full[i] += &c * Rational::from_integer(BigInt::from(r));
                }
            }
        }
        Cyclotomic {
            conductor: n,
            coeffs: full,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates, `φ(n)` of them.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// The integer value, if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// True when every power-basis coordinate is an integer.
    pub fn has_integral_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Re-expresses the element in `Q(ζ_m)` for a multiple `m` of the conductor.
    pub fn embed(&self, m: u32) -> Self {
        assert!(
            m % self.conductor == 0,
            "conductor {} does not divide {}",
            self.conductor,
            m
        );
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut full = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[i * step] = c.clone();
            }
        }
        Self::from_full(m, full)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.conductor as u64, b.conductor as u64) as u32;
        (a.embed(m), b.embed(m))
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The Galois automorphism `ζ_n ↦ ζ_n^k` (`gcd(k, n) = 1`).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor as i64;
        let mut full = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (i as i64 * k).rem_euclid(n) as usize;
                full[e] += c;
            }
        }
        Self::from_full(self.conductor, full)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm against `Φ_n`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.conductor, r.recip()));
        }
        let data = cyclo_data(self.conductor);
        let modulus: Vec<Rational> = data
            .poly
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let s = qpoly::inverse_mod(&self.coeffs, &modulus);
        let mut coeffs = vec![Rational::zero(); data.phi];
        for (i, c) in s.into_iter().enumerate() {
            coeffs[i] = c;
        }
        Ok(Cyclotomic {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sparse `(exponent, coefficient)` pairs of the nonzero coordinates.
    pub fn sparse(&self) -> Vec<(u32, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c.clone()))
            .collect()
    }
}

mod qpoly {
    use super::Rational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<Rational>) {
        while p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let c = r.last().unwrap() / &lead;
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] -= &c * bj;
            }
            q[shift] = c;
            r.pop();
            trim(&mut r);
        }
        (q, r)
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// `s` with `s·a ≡ 1 (mod m)`, assuming `gcd(a, m) = 1`.
    pub fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let mut r0 = m.to_vec();
        trim(&mut r0);
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while r1.len() > 1 {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant
        let c = r1[0].clone();
        let mut s: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        let (_, rem) = divrem(&s, m);
        s = rem;
        s
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Ord for Cyclotomic {
    /// Lexicographic on power-basis coordinates in the common conductor.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = Self::common(self, other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.conductor == rhs.conductor {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect();
            return Cyclotomic {
                conductor: self.conductor,
                coeffs,
            };
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.conductor == rhs.conductor {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect();
            return Cyclotomic {
                conductor: self.conductor,
                coeffs,
            };
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        &a - &b
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.conductor != rhs.conductor {
            let (a, b) = Cyclotomic::common(self, rhs);
            return &a * &b;
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r);
        }
        let n = self.conductor as usize;
        let mut full = vec![Rational::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    full[(i + j) % n] += x * y;
                }
            }
        }
        Cyclotomic::from_full(self.conductor, full)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sparse();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match *e {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if *e == 1 {
                        write!(f, "E({})", self.conductor)?;
                    } else {
                        write!(f, "E({})^{}", self.conductor, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u32,
    coeffs: Vec<(u32, String)>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            conductor: self.conductor,
            coeffs: self
                .sparse()
                .into_iter()
                .map(|(e, c)| (e, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CycloRepr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut z = Cyclotomic::zero(r.conductor);
        for (e, c) in r.coeffs {
            let slot = z
                .coeffs
                .get_mut(e as usize)
                .ok_or_else(|| D::Error::custom(format!("exponent {e} out of range")))?;
            *slot = c
                .parse::<Rational>()
                .map_err(|_| D::Error::custom(format!("bad rational {c}")))?;
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::zeta_pow(n, k)
    }

    #[test]
    fn zeta3_plus_square_is_minus_one() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(3, -1));
    }

    #[test]
    fn conj_zeta5() {
        assert_eq!(z(5, 1).conj(), z(5, 4));
    }

    #[test]
    fn gaussian_product() {
        let one = Cyclotomic::one(4);
        let i = z(4, 1);
        assert_eq!(&(&one + &i) * &(&one - &i), Cyclotomic::from_int(4, 2));
    }

    #[test]
    fn embedding_and_mixed_conductors() {
        // ζ_6 = -ζ_3^2
        let lhs = z(6, 1);
        let rhs = -z(3, 2);
        assert_eq!(lhs, rhs);
        assert_eq!((&z(4, 1) * &z(3, 1)).conductor(), 12);
        assert_eq!(z(12, 3), z(4, 1));
    }

    #[test]
    fn inverse_of_nonrational() {
        let x = &Cyclotomic::from_int(7, 2) + &z(7, 3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::from_int(3, -1).to_string(), "-1");
        assert_eq!(z(5, 2).to_string(), "E(5)^2");
    }
}
