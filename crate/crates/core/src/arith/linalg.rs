//! Dense Gaussian elimination over any exact field.

use super::cyclotomic::{Cyclotomic, Rational};
use super::ff::FFElem;
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// The field operations needed by the elimination routines. Zero and one are
/// produced from an existing element so that elements carrying their field
/// (finite fields) work the same way as ones that do not.
pub trait FieldOps: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elt(&self) -> bool;
    fn add_elt(&self, o: &Self) -> Self;
    fn sub_elt(&self, o: &Self) -> Self;
    fn mul_elt(&self, o: &Self) -> Self;
    fn inv_elt(&self) -> Result<Self>;
}

impl FieldOps for Cyclotomic {
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(1)
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one(1)
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn add_elt(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elt(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elt(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_elt(&self) -> Result<Self> {
        self.inv()
    }
}

impl FieldOps for FFElem {
    fn zero_like(&self) -> Self {
        FFElem::zero(self.field())
    }
    fn one_like(&self) -> Self {
        FFElem::one(self.field())
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn add_elt(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elt(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elt(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_elt(&self) -> Result<Self> {
        self.inv()
    }
}

impl FieldOps for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn add_elt(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elt(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elt(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_elt(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

fn check_rect<T>(m: &[Vec<T>]) -> Result<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    for r in m {
        if r.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: r.len(),
            });
        }
    }
    Ok(cols)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: FieldOps>(m: &mut Vec<Vec<T>>) -> Result<Vec<usize>> {
    let cols = check_rect(m)?;
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(piv) = (row..m.len()).find(|&r| !m[r][c].is_zero_elt()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = m[row][c].inv_elt()?;
        for x in m[row].iter_mut() {
            *x = x.mul_elt(&inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero_elt() {
                let f = m[r][c].clone();
                for k in c..cols {
                    let t = f.mul_elt(&m[row][k]);
                    m[r][k] = m[r][k].sub_elt(&t);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    m.truncate(row.max(0));
    Ok(pivots)
}

pub fn rank<T: FieldOps>(m: &[Vec<T>]) -> Result<usize> {
    let mut a = m.to_vec();
    Ok(rref(&mut a)?.len())
}

/// Basis of the right kernel `{x : M x = 0}`; `cols` is needed when `m` has
/// no rows.
pub fn kernel<T: FieldOps>(m: &[Vec<T>], cols: usize, proto: &T) -> Result<Vec<Vec<T>>> {
    let mut a = m.to_vec();
    if check_rect(&a)? != cols && !a.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: cols,
            got: a[0].len(),
        });
    }
    let pivots = rref(&mut a)?;
    let zero = proto.zero_like();
    let one = proto.one_like();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = zero.sub_elt(&a[r][free]);
        }
        out.push(v);
    }
    Ok(out)
}

/// One solution of `M x = b`, or `None` if the system is inconsistent.
pub fn solve<T: FieldOps>(m: &[Vec<T>], b: &[T], proto: &T) -> Result<Option<Vec<T>>> {
    if m.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            got: b.len(),
        });
    }
    let cols = check_rect(m)?;
    let mut aug: Vec<Vec<T>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug)?;
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![proto.zero_like(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Ok(Some(x))
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|c| m.iter().map(|r| r[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ff::GaloisField;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ];
        assert_eq!(rank(&m).unwrap(), 2);
        let k = kernel(&m, 3, &q(0)).unwrap();
        assert_eq!(k.len(), 1);
        for row in &m {
            let s = row.iter().zip(&k[0]).fold(q(0), |a, (x, y)| a + x * y);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&m, &[q(1), q(3)], &q(0)).unwrap().is_none());
        let x = solve(&m, &[q(1), q(2)], &q(0)).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], q(1));
    }

    #[test]
    fn cyclotomic_rank() {
        // rows (1, ζ3) and (ζ3^2, 1) are dependent since ζ3^2 · ζ3 = 1
        let z = Cyclotomic::zeta(3);
        let m = vec![
            vec![Cyclotomic::one(1), z.clone()],
            vec![z.pow(2), Cyclotomic::one(1)],
        ];
        assert_eq!(rank(&m).unwrap(), 1);
    }

    #[test]
    fn ragged_rejected() {
        let m = vec![vec![q(1), q(1)], vec![q(2)]];
        assert!(matches!(rank(&m), Err(Error::DimensionMismatch { .. })));
    }

    proptest! {
        #[test]
        fn rank_transpose_invariant(entries in proptest::collection::vec(0u64..3, 12)) {
            let f = GaloisField::prime(3);
            let m: Vec<Vec<FFElem>> = entries
                .chunks(4)
                .map(|r| r.iter().map(|&v| FFElem::from_int(&f, v as i64)).collect())
                .collect();
            prop_assert_eq!(rank(&m).unwrap(), rank(&transpose(&m)).unwrap());
        }

        #[test]
        fn rank_row_shuffle_invariant(entries in proptest::collection::vec(-3i64..4, 12), rot in 0usize..3) {
            let m: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let mut s = m.clone();
            s.rotate_left(rot);
            prop_assert_eq!(rank(&m).unwrap(), rank(&s).unwrap());
        }
    }
}
