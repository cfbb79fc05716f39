use std::fmt;
use std::hash::Hash;

use crate::matrix::{mat_mul, mat_mul_is_zero, Mat2, MatRing};
use crate::quaternion::{hamilton, hamilton_is_zero, QuatRing, Quaternion};

/// A finite ring whose elements can be enumerated by index.
pub trait FiniteRing: Sync {
    type Elem: Copy + Eq + Ord + Hash + Send + Sync + fmt::Debug + fmt::Display;

    /// Short name such as `Z_4[i,j,k]` or `M_2(Z_9)`.
    fn name(&self) -> String;
    fn modulus(&self) -> u64;
    fn size(&self) -> u64;
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, x: &Self::Elem) -> u64;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn product_is_zero(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Coefficients (quaternion) or row-major entries (matrix).
    fn coords(&self, a: &Self::Elem) -> [u64; 4];
}

impl FiniteRing for QuatRing {
    type Elem = Quaternion;

    fn name(&self) -> String {
        format!("Z_{}[i,j,k]", self.n())
    }
    fn modulus(&self) -> u64 {
        self.n()
    }
    fn size(&self) -> u64 {
        QuatRing::size(self)
    }
    fn element(&self, index: u64) -> Quaternion {
        QuatRing::element(self, index)
    }
    fn index_of(&self, x: &Quaternion) -> u64 {
        QuatRing::index_of(self, x)
    }
    fn mul(&self, a: &Quaternion, b: &Quaternion) -> Quaternion {
        Quaternion::from_raw(hamilton(&a.coeffs(), &b.coeffs(), self.n()), self.n())
    }
    fn product_is_zero(&self, a: &Quaternion, b: &Quaternion) -> bool {
        hamilton_is_zero(&a.coeffs(), &b.coeffs(), self.n())
    }
    fn is_zero(&self, a: &Quaternion) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &Quaternion) -> bool {
        a.is_unit()
    }
    fn coords(&self, a: &Quaternion) -> [u64; 4] {
        a.coeffs()
    }
}

impl FiniteRing for MatRing {
    type Elem = Mat2;

    fn name(&self) -> String {
        format!("M_2(Z_{})", self.n())
    }
    fn modulus(&self) -> u64 {
        self.n()
    }
    fn size(&self) -> u64 {
        MatRing::size(self)
    }
    fn element(&self, index: u64) -> Mat2 {
        MatRing::element(self, index)
    }
    fn index_of(&self, x: &Mat2) -> u64 {
        MatRing::index_of(self, x)
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        Mat2::from_raw(mat_mul(&a.entries(), &b.entries(), self.n()), self.n())
    }
    fn product_is_zero(&self, a: &Mat2, b: &Mat2) -> bool {
        mat_mul_is_zero(&a.entries(), &b.entries(), self.n())
    }
    fn is_zero(&self, a: &Mat2) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &Mat2) -> bool {
        a.is_unit()
    }
    fn coords(&self, a: &Mat2) -> [u64; 4] {
        a.entries()
    }
}

/// Left and right annihilators of `a` over the whole ring:
/// `({b : b a = 0}, {b : a b = 0})`.
pub fn annihilators<R: FiniteRing>(ring: &R, a: &R::Elem) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for idx in 0..ring.size() {
        let b = ring.element(idx);
        if ring.product_is_zero(&b, a) {
            left.push(b);
        }
        if ring.product_is_zero(a, &b) {
            right.push(b);
        }
    }
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilator_examples() {
        let ring = MatRing::new(3, 1).unwrap();
        let (l, r) = annihilators(&ring, &Mat2::zero(3));
        assert_eq!((l.len(), r.len()), (81, 81));
        let (l, r) = annihilators(&ring, &Mat2::identity(3));
        assert_eq!((l, r), (vec![Mat2::zero(3)], vec![Mat2::zero(3)]));

        let e11 = Mat2::unit_matrix(1, 1, 3);
        let (_, r) = annihilators(&ring, &e11);
        let restricted: Vec<_> = r.iter().filter(|b| !b.is_zero() && !b.is_unit()).collect();
        assert_eq!(restricted.len(), 8);
        assert!(restricted.iter().all(|b| b.entry(0, 0) == 0 && b.entry(0, 1) == 0));
    }

    #[test]
    fn trait_mul_agrees_with_checked() {
        let q = QuatRing::new(6).unwrap();
        let a = q.element(1234);
        let b = q.element(777);
        assert_eq!(FiniteRing::mul(&q, &a, &b), a * b);
        let m = MatRing::new(5, 1).unwrap();
        let a = m.element(321);
        let b = m.element(99);
        assert_eq!(FiniteRing::mul(&m, &a, &b), a * b);
    }
}
