//! Lipschitz quaternions modulo `n`: arithmetic, unit test via the norm,
//! the 2-adic factorisation `x = 2^l * pi * u` and right-unit orbits.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::solve_mod_prime_power;
use crate::modular::{crt_join, Modulus, Residue};

/// `a + b i + c j + d k` with coefficients in `Z/nZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion {
    c: [u64; 4],
    n: u64,
}

impl Quaternion {
    pub fn new(coeffs: [i64; 4], n: u64) -> Result<Self> {
        if !(2..=(1u64 << 30)).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "quaternion modulus must be in [2, 2^30], got {n}"
            )));
        }
        Ok(Self::from_signed(coeffs, n))
    }

    pub(crate) fn from_signed(coeffs: [i64; 4], n: u64) -> Self {
        Quaternion {
            c: coeffs.map(|x| x.rem_euclid(n as i64) as u64),
            n,
        }
    }

    pub(crate) fn from_raw(c: [u64; 4], n: u64) -> Self {
        Quaternion { c, n }
    }

    pub fn zero(n: u64) -> Self {
        Quaternion { c: [0; 4], n }
    }

    pub fn one(n: u64) -> Self {
        Quaternion { c: [1 % n, 0, 0, 0], n }
    }

    pub fn coeffs(&self) -> [u64; 4] {
        self.c
    }

    pub fn coefficient(&self, k: usize) -> Residue {
        Residue::new(self.c[k], self.n).expect("modulus >= 2")
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; 4]
    }

    pub fn norm(&self) -> Residue {
        let n = self.n as u128;
        let sum: u128 = self.c.iter().map(|&x| x as u128 * x as u128 % n).sum();
        Residue::new((sum % n) as u64, self.n).expect("modulus >= 2")
    }

    /// `x` is a unit iff its norm is a unit, since `x * conj(x) = N(x)` is
    /// central.
    pub fn is_unit(&self) -> bool {
        self.norm().is_unit()
    }

    pub fn conj(&self) -> Self {
        let n = self.n;
        let neg = |x: u64| (n - x) % n;
        Quaternion {
            c: [self.c[0], neg(self.c[1]), neg(self.c[2]), neg(self.c[3])],
            n,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Quaternion {
            c: hamilton(&self.c, &other.c, self.n),
            n: self.n,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut c = [0; 4];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = (self.c[k] + other.c[k]) % self.n;
        }
        Ok(Quaternion { c, n: self.n })
    }

    pub fn scale(&self, k: u64) -> Self {
        let n = self.n as u128;
        Quaternion {
            c: self.c.map(|x| (x as u128 * (k as u128 % n) % n) as u64),
            n: self.n,
        }
    }

    /// Reduce coefficients into `Z/mZ` for a divisor `m` of the modulus.
    pub fn reduce(&self, m: u64) -> Result<Self> {
        if m < 2 || self.n % m != 0 {
            return Err(Error::InvalidInput(format!(
                "{m} does not divide modulus {}",
                self.n
            )));
        }
        Ok(Quaternion {
            c: self.c.map(|x| x % m),
            n: m,
        })
    }

    /// Inverse when `x` is a unit: `conj(x) * N(x)^{-1}`.
    pub fn inverse(&self) -> Option<Self> {
        let inv = self.norm().inverse()?;
        Some(self.conj().scale(inv.value()))
    }
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        match self.checked_mul(&rhs) {
            Ok(q) => q,
            Err(e) => panic!("{e}"),
        }
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        match self.checked_add(&rhs) {
            Ok(q) => q,
            Err(e) => panic!("{e}"),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.c;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(serializer)
    }
}

/// Hamilton product of coefficient vectors modulo `n <= 2^30`.
#[inline]
pub(crate) fn hamilton(x: &[u64; 4], y: &[u64; 4], n: u64) -> [u64; 4] {
    let [a1, b1, c1, d1] = x.map(|v| v as i64);
    let [a2, b2, c2, d2] = y.map(|v| v as i64);
    let n = n as i64;
    [
        (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2).rem_euclid(n) as u64,
        (a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2).rem_euclid(n) as u64,
        (a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2).rem_euclid(n) as u64,
        (a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2).rem_euclid(n) as u64,
    ]
}

/// True iff the Hamilton product vanishes; skips the final reductions
/// when a component is already non-zero.
#[inline]
pub(crate) fn hamilton_is_zero(x: &[u64; 4], y: &[u64; 4], n: u64) -> bool {
    let [a1, b1, c1, d1] = x.map(|v| v as i64);
    let [a2, b2, c2, d2] = y.map(|v| v as i64);
    let n = n as i64;
    (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2) % n == 0
        && (a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2) % n == 0
        && (a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2) % n == 0
        && (a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2) % n == 0
}

/// Coefficient matrix of `z -> q z`.
fn left_mul_matrix(q: &Quaternion) -> Vec<Vec<u64>> {
    let n = q.n;
    let [a, b, c, d] = q.c;
    let neg = |x: u64| (n - x) % n;
    vec![
        vec![a, neg(b), neg(c), neg(d)],
        vec![b, a, neg(d), c],
        vec![c, d, a, neg(b)],
        vec![d, neg(c), b, a],
    ]
}

/// The six prime-power shapes of the 2-adic factorisation, in the fixed
/// search order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PiTag {
    One,
    OnePlusI,
    OnePlusJ,
    OnePlusK,
    /// `(1+i)(1+j) = 1+i+j+k`
    OnePlusIJK,
    /// `(1+i)(1-k) = 1+i+j-k`
    OnePlusIJMinusK,
}

impl PiTag {
    pub const ALL: [PiTag; 6] = [
        PiTag::One,
        PiTag::OnePlusI,
        PiTag::OnePlusJ,
        PiTag::OnePlusK,
        PiTag::OnePlusIJK,
        PiTag::OnePlusIJMinusK,
    ];

    pub fn coeffs(self) -> [i64; 4] {
        match self {
            PiTag::One => [1, 0, 0, 0],
            PiTag::OnePlusI => [1, 1, 0, 0],
            PiTag::OnePlusJ => [1, 0, 1, 0],
            PiTag::OnePlusK => [1, 0, 0, 1],
            PiTag::OnePlusIJK => [1, 1, 1, 1],
            PiTag::OnePlusIJMinusK => [1, 1, 1, -1],
        }
    }

    pub fn quaternion(self, n: u64) -> Quaternion {
        Quaternion::from_signed(self.coeffs(), n)
    }

    pub fn is_d1(self) -> bool {
        matches!(self, PiTag::OnePlusI | PiTag::OnePlusJ | PiTag::OnePlusK)
    }

    pub fn is_d2(self) -> bool {
        matches!(self, PiTag::OnePlusIJK | PiTag::OnePlusIJMinusK)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PiTag::One => "1",
            PiTag::OnePlusI => "1+i",
            PiTag::OnePlusJ => "1+j",
            PiTag::OnePlusK => "1+k",
            PiTag::OnePlusIJK => "1+i+j+k",
            PiTag::OnePlusIJMinusK => "1+i+j-k",
        }
    }
}

/// `x = 2^l * pi * alpha0` with `alpha0` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuatFactorization {
    pub l: u32,
    pub pi: PiTag,
    pub alpha0: Quaternion,
}

impl QuatFactorization {
    pub fn reconstruct(&self) -> Quaternion {
        let n = self.alpha0.n;
        self.pi.quaternion(n).scale(1u64 << self.l) * self.alpha0
    }
}

fn two_adic_exponent(n: u64) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() || n > (1 << 30) {
        return Err(Error::InvalidInput(format!(
            "2-adic factorisation needs modulus 2^s, got {n}"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Unit solutions `z` of `q z = x`, searched over the particular solution
/// plus 0/1 combinations of kernel generators (unit-ness only depends on
/// `z mod 2`). Returns the first unit found.
fn unit_solution(q: &Quaternion, x: &Quaternion, s: u32) -> Option<Quaternion> {
    let sol = solve_mod_prime_power(&left_mul_matrix(q), &x.c, 2, s)?;
    let n = x.n;
    let k = sol.kernel.len();
    for mask in 0u32..(1 << k) {
        let mut z = sol.particular.clone();
        for (bit, g) in sol.kernel.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                for (zi, gi) in z.iter_mut().zip(g) {
                    *zi = (*zi + gi) % n;
                }
            }
        }
        let cand = Quaternion::from_raw([z[0], z[1], z[2], z[3]], n);
        if cand.is_unit() {
            return Some(cand);
        }
    }
    None
}

/// Every `(l, pi)` for which `2^l pi z = x` has a unit solution `z`.
pub fn dyadic_shapes(x: &Quaternion) -> Result<Vec<QuatFactorization>> {
    let s = two_adic_exponent(x.n)?;
    if x.is_zero() {
        return Err(Error::InvalidInput("zero has no 2-adic factorisation".into()));
    }
    let mut out = Vec::new();
    for l in 0..s {
        for pi in PiTag::ALL {
            let q = pi.quaternion(x.n).scale(1u64 << l);
            if let Some(alpha0) = unit_solution(&q, x, s) {
                out.push(QuatFactorization { l, pi, alpha0 });
            }
        }
    }
    Ok(out)
}

/// First `(l, pi)` in search order admitting a unit cofactor.
pub fn factorize_2adic(x: &Quaternion) -> Result<QuatFactorization> {
    let s = two_adic_exponent(x.n)?;
    if x.is_zero() {
        return Err(Error::InvalidInput("zero has no 2-adic factorisation".into()));
    }
    for l in 0..s {
        for pi in PiTag::ALL {
            let q = pi.quaternion(x.n).scale(1u64 << l);
            if let Some(alpha0) = unit_solution(&q, x, s) {
                return Ok(QuatFactorization { l, pi, alpha0 });
            }
        }
    }
    Err(Error::InvalidInput(format!("no 2-adic factorisation for {x}")))
}

/// `Z/nZ[i,j,k]` as an enumerable ring, elements in lexicographic order of
/// their coefficient tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatRing {
    modulus: Modulus,
}

impl QuatRing {
    pub fn new(n: u64) -> Result<Self> {
        if n > 1 << 30 {
            return Err(Error::InvalidInput(format!("modulus {n} too large")));
        }
        Ok(QuatRing {
            modulus: Modulus::new(n)?,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn n(&self) -> u64 {
        self.modulus.value()
    }

    pub fn size(&self) -> u64 {
        self.n().saturating_pow(4)
    }

    pub fn element(&self, index: u64) -> Quaternion {
        let n = self.n();
        Quaternion {
            c: [index / (n * n * n), index / (n * n) % n, index / n % n, index % n],
            n,
        }
    }

    pub fn index_of(&self, x: &Quaternion) -> u64 {
        let n = self.n();
        ((x.c[0] * n + x.c[1]) * n + x.c[2]) * n + x.c[3]
    }

    pub fn elements(&self) -> impl Iterator<Item = Quaternion> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    pub fn units(&self) -> Vec<Quaternion> {
        self.elements().filter(Quaternion::is_unit).collect()
    }
}

/// An orbit `x U` of right multiplication by units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivClassId {
    /// Lexicographically smallest member.
    pub representative: Quaternion,
    pub size: u64,
}

/// Partition of the non-zero elements of `Z/2^s[i,j,k]` into orbits under
/// right multiplication by units (the unit group itself is one orbit).
/// Returned in ascending order of representative.
pub fn equivalence_classes(s: u32) -> Result<Vec<EquivClassId>> {
    if s == 0 || s > 5 {
        return Err(Error::InvalidInput(format!(
            "orbit enumeration supports 1 <= s <= 5, got {s}"
        )));
    }
    let ring = QuatRing::new(1 << s)?;
    orbit_partition(&ring)
}

pub(crate) fn orbit_partition(ring: &QuatRing) -> Result<Vec<EquivClassId>> {
    let units = ring.units();
    let size = ring.size() as usize;
    let mut seen = FixedBitSet::with_capacity(size);
    seen.insert(0);
    let mut out = Vec::new();
    for idx in 1..size {
        if seen.contains(idx) {
            continue;
        }
        let x = ring.element(idx as u64);
        let mut count = 0u64;
        for u in &units {
            let y = ring.index_of(&(x * *u)) as usize;
            if !seen.put(y) {
                count += 1;
            }
        }
        out.push(EquivClassId {
            representative: x,
            size: count,
        });
    }
    Ok(out)
}

pub fn crt_split_quat(x: &Quaternion) -> Result<Vec<Quaternion>> {
    let m = Modulus::new(x.n)?;
    m.prime_power_parts().into_iter().map(|q| x.reduce(q)).collect()
}

pub fn crt_join_quat(parts: &[Quaternion]) -> Result<Quaternion> {
    let mut c = [0u64; 4];
    let mut n = 0;
    for (k, slot) in c.iter_mut().enumerate() {
        let residues: Vec<Residue> = parts.iter().map(|q| q.coefficient(k)).collect();
        let joined = crt_join(&residues)?;
        *slot = joined.value();
        n = joined.modulus();
    }
    Quaternion::new([c[0] as i64, c[1] as i64, c[2] as i64, c[3] as i64], n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: [i64; 4], n: u64) -> Quaternion {
        Quaternion::new(c, n).unwrap()
    }

    #[test]
    fn defining_relations() {
        for n in [2, 3, 7, 8] {
            let i = q([0, 1, 0, 0], n);
            let j = q([0, 0, 1, 0], n);
            let k = q([0, 0, 0, 1], n);
            let minus_one = q([-1, 0, 0, 0], n);
            assert_eq!(i * j, k);
            assert_eq!(j * i, q([0, 0, 0, -1], n));
            assert_eq!(i * i, minus_one);
            assert_eq!(j * j, minus_one);
            assert_eq!(k * k, minus_one);
            assert_eq!(j * k, i);
            assert_eq!(k * i, j);
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(q([1, 1, 0, 0], 8) * q([1, -1, 0, 0], 8), q([2, 0, 0, 0], 8));
        assert!((q([1, 1, 1, 1], 2) * q([1, 1, 1, 1], 2)).is_zero());
        assert!(q([1, 0, 0, 0], 4).checked_mul(&q([1, 0, 0, 0], 3)).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q([1, 1, 0, 0], 8).norm().value(), 2);
        assert_eq!(q([0, 0, 0, 0], 8).norm().value(), 0);
        assert_eq!(q([1, 1, 1, 1], 4).norm().value(), 0);
    }

    #[test]
    fn unit_examples() {
        assert!(q([0, 1, 0, 0], 4).is_unit());
        assert!(!q([1, 1, 0, 0], 4).is_unit());
        assert!(q([1, 1, 0, 0], 9).is_unit());
    }

    #[test]
    fn norm_unit_criterion_matches_inverse_search() {
        for n in [2u64, 3, 4] {
            let ring = QuatRing::new(n).unwrap();
            let all: Vec<Quaternion> = ring.elements().collect();
            let one = Quaternion::one(n);
            for x in &all {
                let has_inverse = all.iter().any(|y| *x * *y == one && *y * *x == one);
                assert_eq!(x.is_unit(), has_inverse, "{x} mod {n}");
                if let Some(inv) = x.inverse() {
                    assert_eq!(*x * inv, one);
                }
            }
        }
        // mod 9 spot check for the example 1+i, found by scanning
        let ring = QuatRing::new(9).unwrap();
        let x = q([1, 1, 0, 0], 9);
        assert!(ring.elements().any(|y| x * y == Quaternion::one(9)));
    }

    #[test]
    fn norm_is_multiplicative_small() {
        for n in [2u64, 3, 4] {
            let ring = QuatRing::new(n).unwrap();
            for x in ring.elements() {
                for y in ring.elements() {
                    assert_eq!((x * y).norm(), x.norm() * y.norm());
                }
            }
        }
    }

    #[test]
    fn fast_zero_test_agrees() {
        let ring = QuatRing::new(6).unwrap();
        for x in ring.elements().step_by(7) {
            for y in ring.elements().step_by(3) {
                assert_eq!(hamilton_is_zero(&x.c, &y.c, 6), (x * y).is_zero());
            }
        }
    }

    #[test]
    fn factorize_examples() {
        let f = factorize_2adic(&q([2, 0, 0, 0], 8)).unwrap();
        assert_eq!((f.l, f.pi, f.alpha0), (1, PiTag::One, Quaternion::one(8)));

        let f = factorize_2adic(&q([1, 1, 0, 0], 8)).unwrap();
        assert_eq!((f.l, f.pi), (0, PiTag::OnePlusI));
        assert_eq!(f.reconstruct(), q([1, 1, 0, 0], 8));

        let f = factorize_2adic(&q([0, 2, 0, 0], 8)).unwrap();
        assert_eq!((f.l, f.pi), (1, PiTag::One));
        assert_eq!(f.reconstruct(), q([0, 2, 0, 0], 8));

        assert!(factorize_2adic(&Quaternion::zero(8)).is_err());
        assert!(factorize_2adic(&q([1, 0, 0, 0], 6)).is_err());
    }

    #[test]
    fn pi_products() {
        let n = 16;
        let i1 = PiTag::OnePlusI.quaternion(n);
        assert_eq!(i1 * PiTag::OnePlusJ.quaternion(n), PiTag::OnePlusIJK.quaternion(n));
        assert_eq!(i1 * q([1, 0, 0, -1], n), PiTag::OnePlusIJMinusK.quaternion(n));
    }

    #[test]
    fn orbit_examples() {
        let c1 = equivalence_classes(1).unwrap();
        // unit class plus four zero-divisor classes
        assert_eq!(c1.len(), 5);
        assert_eq!(c1.iter().map(|c| c.size).sum::<u64>(), 15);
        let c2 = equivalence_classes(2).unwrap();
        assert_eq!(c2.len(), 11);
        for s in 1..=3 {
            let classes = equivalence_classes(s).unwrap();
            let unit = classes.iter().find(|c| c.representative.is_unit()).unwrap();
            assert_eq!(unit.size, 1 << (4 * s - 1));
            // lexicographic minimum of the unit group
            assert_eq!(unit.representative, q([0, 0, 0, 1], 1 << s));
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(
            crt_split_quat(&q([1, 1, 0, 0], 6)).unwrap(),
            vec![q([1, 1, 0, 0], 2), q([1, 1, 0, 0], 3)]
        );
        assert_eq!(
            crt_split_quat(&Quaternion::zero(6)).unwrap(),
            vec![Quaternion::zero(2), Quaternion::zero(3)]
        );
        assert_eq!(
            crt_split_quat(&q([5, 3, 0, 0], 6)).unwrap(),
            vec![q([1, 1, 0, 0], 2), q([2, 0, 0, 0], 3)]
        );
        let x = q([5, 3, 11, 7], 12);
        assert_eq!(crt_join_quat(&crt_split_quat(&x).unwrap()).unwrap(), x);
    }
}
