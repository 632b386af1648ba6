//! Reduction of p-integral cyclotomic numbers to `F_{p^m}`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cyclotomic::{Cyclotomic, Rational};
use super::ff::{FFElem, GaloisField};
use super::numtheory::{gcd, inv_mod, mult_order, split_p_part};
use super::polyfp;
use crate::error::{Error, Result};

/// A ring homomorphism `Z_(p)[ζ_n] → F_{p^m}` for every conductor `n` whose
/// p′-part divides `e_prime`. Roots of unity of p-power order go to 1.
#[derive(Debug, Clone)]
pub struct RedMap {
    pub p: u64,
    pub e_prime: u64,
    pub field: Arc<GaloisField>,
    /// Image of the distinguished primitive `e_prime`-th root of unity.
    pub root: FFElem,
    /// Which irreducible factor of `Φ_{e'}` mod p was used as modulus.
    pub factor_index: usize,
    pub factor_count: usize,
}

/// Builds the reduction map using the first irreducible factor of `Φ_{e'}`
/// modulo `p` (factors ordered by coefficient sequence, constant term first).
pub fn build_redmap(e_prime: u64, p: u64) -> RedMap {
    build_redmap_with_factor(e_prime, p, 0)
}

/// As [`build_redmap`] but selecting factor `index` (taken modulo the number
/// of factors), used to check that results do not depend on the choice.
pub fn build_redmap_with_factor(e_prime: u64, p: u64, index: usize) -> RedMap {
    assert!(
        e_prime >= 1 && gcd(e_prime, p) == 1,
        "e' must be coprime to p"
    );
    let m = mult_order(p % e_prime.max(1), e_prime) as usize;
    let phi_mod_p = polyfp::cyclotomic_mod_p(e_prime, p);
    let factors = if m == polyfp::degree(&phi_mod_p).unwrap_or(0) {
        vec![polyfp::make_monic(&phi_mod_p, p)]
    } else {
        polyfp::equal_degree_factors(&phi_mod_p, m, p, 0x5eed ^ e_prime ^ (p << 20))
    };
    let factor_index = index % factors.len();
    let field = GaloisField::new(p, factors[factor_index].clone());
    let root = FFElem::generator(&field);
    RedMap {
        p,
        e_prime,
        field,
        root,
        factor_index,
        factor_count: factors.len(),
    }
}

impl RedMap {
    pub fn m(&self) -> usize {
        self.field.m
    }

    pub fn reduce_rational(&self, q: &Rational) -> Result<FFElem> {
        let p = BigInt::from(self.p);
        if q.denom().mod_floor(&p).is_zero() {
            return Err(Error::NotPIntegral { p: self.p });
        }
        let num = q.numer().mod_floor(&p).to_u64().unwrap();
        let den = q.denom().mod_floor(&p).to_u64().unwrap();
        let v = (num as u128 * inv_mod(den, self.p).unwrap() as u128 % self.p as u128) as i64;
        Ok(FFElem::from_int(&self.field, v))
    }

    /// Image of `ζ_n` (the p-part of the root of unity is sent to 1).
    pub fn zeta_image(&self, n: u64) -> Result<FFElem> {
        let (pa, np) = split_p_part(n, self.p);
        if self.e_prime % np != 0 {
            return Err(Error::InvalidArgument(format!(
                "conductor {n} is not compatible with reduction map for e' = {}",
                self.e_prime
            )));
        }
        if np == 1 {
            return Ok(FFElem::one(&self.field));
        }
        let s = inv_mod(pa % np, np).expect("p-part invertible modulo p'-part");
        let exp = (self.e_prime / np) * s % self.e_prime;
        Ok(self.root.pow(exp as u128))
    }

    pub fn reduce(&self, x: &Cyclotomic) -> Result<FFElem> {
        let base = self.zeta_image(x.conductor() as u64)?;
        let mut acc = FFElem::zero(&self.field);
        let mut pw = FFElem::one(&self.field);
        for c in x.coeffs() {
            if !c.is_zero() {
                let r = self.reduce_rational(c)?;
                acc = &acc + &(&r * &pw);
            }
            pw = &pw * &base;
        }
        Ok(acc)
    }

    /// Reduction of an integer.
    pub fn reduce_int(&self, v: i64) -> FFElem {
        FFElem::from_int(&self.field, v)
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> FFElem {
        let p = BigInt::from(self.p);
        let r = v.mod_floor(&p);
        let r = if r.is_negative() { r + &p } else { r };
        FFElem::from_int(&self.field, r.to_i64().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_conductor() {
        let r = build_redmap(1, 5);
        assert_eq!(r.m(), 1);
        assert!(r.root.is_one());
    }

    #[test]
    fn minus_one_mod_3() {
        let r = build_redmap(2, 3);
        assert_eq!(r.m(), 1);
        assert_eq!(r.root, FFElem::from_int(&r.field, 2));
    }

    #[test]
    fn degree_for_e4_p3() {
        assert_eq!(build_redmap(4, 3).m(), 2);
    }

    #[test]
    fn examples() {
        let r3 = build_redmap(2, 3);
        assert!(r3.reduce(&Cyclotomic::from_int(1, 3)).unwrap().is_zero());
        let half = Cyclotomic::from_rational(1, Rational::new(1.into(), 2.into()));
        assert_eq!(r3.reduce(&half).unwrap(), FFElem::from_int(&r3.field, 2));
        let r2 = build_redmap(3, 2);
        let w = r2.reduce(&Cyclotomic::zeta(3)).unwrap();
        assert_eq!(w.mult_order(), 3);
        assert_eq!(r2.field.m, 2);
        let third = Cyclotomic::from_rational(1, Rational::new(1.into(), 3.into()));
        assert_eq!(r3.reduce(&third), Err(Error::NotPIntegral { p: 3 }));
    }

    #[test]
    fn p_part_goes_to_one() {
        let r = build_redmap(3, 2);
        // ζ_12 = ζ_4^a ζ_3^b; its image is a primitive cube root of unity
        let z12 = r.reduce(&Cyclotomic::zeta(12)).unwrap();
        assert_eq!(z12.mult_order(), 3);
        assert!(r.reduce(&Cyclotomic::zeta(8)).unwrap().is_one());
        // compatible with embedding ζ_3 = ζ_12^4
        assert_eq!(r.reduce(&Cyclotomic::zeta(3)).unwrap(), z12.pow(4));
    }
}
