//! The finite fields `F_{p^m} = F_p[x]/(f)` for a fixed irreducible `f`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use super::numtheory::inv_mod;
use super::polyfp;
use crate::error::{Error, Result};

/// `F_p[x]/(modulus)`; the modulus is monic and irreducible of degree `m`.
#[derive(Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaloisField {
    pub p: u64,
    pub m: usize,
    /// Monic, lowest degree first, length `m + 1`.
    pub modulus: Vec<u64>,
}

impl GaloisField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Arc<Self> {
        let modulus = polyfp::make_monic(&modulus, p);
        let m = modulus.len() - 1;
        Arc::new(GaloisField { p, m, modulus })
    }

    pub fn prime(p: u64) -> Arc<Self> {
        Self::new(p, vec![0, 1])
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.m as u32)
    }
}

/// An element of a [`GaloisField`], stored by coordinates in the basis
/// `1, x, …, x^{m-1}`.
#[derive(Clone, Debug)]
pub struct FFElem {
    field: Arc<GaloisField>,
    coords: Vec<u64>,
}

impl FFElem {
    pub fn zero(field: &Arc<GaloisField>) -> Self {
        FFElem {
            field: field.clone(),
            coords: vec![0; field.m],
        }
    }

    pub fn one(field: &Arc<GaloisField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<GaloisField>, v: i64) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = v.rem_euclid(field.p as i64) as u64;
        z
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(field: &Arc<GaloisField>) -> Self {
        if field.m == 1 {
            // x ≡ -f(0)
            return Self::from_int(field, -(field.modulus[0] as i64));
        }
        let mut z = Self::zero(field);
        z.coords[1] = 1;
        z
    }

    pub fn from_poly(field: &Arc<GaloisField>, poly: &[u64]) -> Self {
        let r = polyfp::rem(poly, &field.modulus, field.p);
        let mut coords = vec![0; field.m];
        for (i, c) in r.into_iter().enumerate() {
            coords[i] = c;
        }
        FFElem {
            field: field.clone(),
            coords,
        }
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Multiplication by an integer scalar.
    pub fn scale(&self, k: i64) -> Self {
        let p = self.field.p;
        let k = k.rem_euclid(p as i64) as u64;
        FFElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .map(|&c| (c as u128 * k as u128 % p as u128) as u64)
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field.m == 1 {
            let v = inv_mod(self.coords[0], self.field.p).ok_or(Error::DivisionByZero)?;
            return Ok(Self::from_int(&self.field, v as i64));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p as u128)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self) -> u128 {
        assert!(!self.is_zero());
        let mut x = self.clone();
        let mut k = 1u128;
        while !x.is_one() {
            x = &x * self;
            k += 1;
        }
        k
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "mixing elements of different fields"
        );
    }
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FFElem {}

impl<'a> Add<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn add(self, rhs: &'a FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.p;
        FFElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &'a FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.p;
        FFElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &'a FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.p;
        if self.field.m == 1 {
            return FFElem {
                field: self.field.clone(),
                coords: vec![(self.coords[0] as u128 * rhs.coords[0] as u128 % p as u128) as u64],
            };
        }
        let prod = polyfp::mul(&self.coords, &rhs.coords, p);
        FFElem::from_poly(&self.field, &prod)
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        let p = self.field.p;
        FFElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&c| (p - c) % p).collect(),
        }
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// JSON form `{p, m, coords, modulus}`.
#[derive(Serialize, serde::Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FFElemRepr {
    pub p: u64,
    pub m: usize,
    pub coords: Vec<u64>,
    pub modulus: Vec<u64>,
}

impl FFElem {
    pub fn to_repr(&self) -> FFElemRepr {
        FFElemRepr {
            p: self.field.p,
            m: self.field.m,
            coords: self.coords.clone(),
            modulus: self.field.modulus.clone(),
        }
    }

    /// Rebuilds an element inside `field`, checking that the representation
    /// refers to the same field.
    pub fn from_repr(field: &Arc<GaloisField>, r: &FFElemRepr) -> Result<Self> {
        if r.p != field.p || r.m != field.m || r.modulus != field.modulus {
            return Err(Error::InvalidArgument(
                "field element belongs to a different field".into(),
            ));
        }
        if r.coords.len() != field.m || r.coords.iter().any(|&c| c >= field.p) {
            return Err(Error::InvalidArgument("malformed field element".into()));
        }
        Ok(FFElem {
            field: field.clone(),
            coords: r.coords.clone(),
        })
    }
}

impl Serialize for FFElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = GaloisField::new(2, vec![1, 1, 1]);
        let w = FFElem::generator(&f);
        assert_eq!(w.mult_order(), 3);
        let w2 = &w * &w;
        // w^2 = w + 1
        assert_eq!(w2, &w + &FFElem::one(&f));
        assert!((&w * &w.inv().unwrap()).is_one());
        assert_eq!(w.frobenius(), w2);
    }

    #[test]
    fn prime_field() {
        let f = GaloisField::prime(3);
        let two = FFElem::from_int(&f, 2);
        assert_eq!(FFElem::from_int(&f, -1), two);
        assert_eq!(two.inv().unwrap(), two);
        assert!(FFElem::from_int(&f, 3).is_zero());
    }
}
