//! `M_2(Z/p^s)`: arithmetic, the normalised row vectors `(1 a)` / `(b 1)`,
//! their orthogonal partners, the unit-equivalence type `diag(p^i, p^j)`,
//! the canonical rank decomposition, and an explicit isomorphism from
//! `Z/p^s[i,j,k]` for odd `p`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{lift_sum_of_squares, mod_inverse, valuation, Modulus, Residue, SumOfSquaresRoot};
use crate::quaternion::Quaternion;

/// A 2x2 matrix over `Z/nZ`, entries row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    e: [u64; 4],
    n: u64,
}

impl Mat2 {
    pub fn new(rows: [[i64; 2]; 2], n: u64) -> Result<Self> {
        if !(2..=(1u64 << 30)).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "matrix modulus must be in [2, 2^30], got {n}"
            )));
        }
        Ok(Self::from_signed([rows[0][0], rows[0][1], rows[1][0], rows[1][1]], n))
    }

    pub(crate) fn from_signed(e: [i64; 4], n: u64) -> Self {
        Mat2 {
            e: e.map(|x| x.rem_euclid(n as i64) as u64),
            n,
        }
    }

    pub(crate) fn from_raw(e: [u64; 4], n: u64) -> Self {
        Mat2 { e, n }
    }

    pub fn zero(n: u64) -> Self {
        Mat2 { e: [0; 4], n }
    }

    pub fn identity(n: u64) -> Self {
        Mat2 { e: [1, 0, 0, 1], n }
    }

    /// `E_mn` with 1-based indices.
    pub fn unit_matrix(m: usize, col: usize, n: u64) -> Self {
        let mut e = [0; 4];
        e[(m - 1) * 2 + (col - 1)] = 1;
        Mat2 { e, n }
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.e[row * 2 + col]
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.e == [0; 4]
    }

    pub fn det(&self) -> Residue {
        let n = self.n as i128;
        let [a, b, c, d] = self.e.map(|x| x as i128);
        Residue::new((a * d - b * c).rem_euclid(n) as u64, self.n).expect("modulus >= 2")
    }

    pub fn is_unit(&self) -> bool {
        self.det().is_unit()
    }

    pub fn checked_mul(&self, other: &Mat2) -> Result<Mat2> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Mat2 {
            e: mat_mul(&self.e, &other.e, self.n),
            n: self.n,
        })
    }

    pub fn checked_add(&self, other: &Mat2) -> Result<Mat2> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut e = [0; 4];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = (self.e[k] + other.e[k]) % self.n;
        }
        Ok(Mat2 { e, n: self.n })
    }

    pub fn scale(&self, k: u64) -> Mat2 {
        let n = self.n as u128;
        Mat2 {
            e: self.e.map(|x| (x as u128 * (k as u128 % n) % n) as u64),
            n: self.n,
        }
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det().inverse()?.value();
        let [a, b, c, dd] = self.e.map(|x| x as i64);
        Some(Mat2::from_signed([dd, -b, -c, a], self.n).scale(d))
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        match self.checked_mul(&rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        match self.checked_add(&rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.e[0], self.e[1]], [self.e[2], self.e[3]]].serialize(serializer)
    }
}

#[inline]
pub(crate) fn mat_mul(x: &[u64; 4], y: &[u64; 4], n: u64) -> [u64; 4] {
    [
        (x[0] * y[0] + x[1] * y[2]) % n,
        (x[0] * y[1] + x[1] * y[3]) % n,
        (x[2] * y[0] + x[3] * y[2]) % n,
        (x[2] * y[1] + x[3] * y[3]) % n,
    ]
}

#[inline]
pub(crate) fn mat_mul_is_zero(x: &[u64; 4], y: &[u64; 4], n: u64) -> bool {
    (x[0] * y[0] + x[1] * y[2]) % n == 0
        && (x[0] * y[1] + x[1] * y[3]) % n == 0
        && (x[2] * y[0] + x[3] * y[2]) % n == 0
        && (x[2] * y[1] + x[3] * y[3]) % n == 0
}

/// `M_2(Z/p^s)` as an enumerable ring, lexicographic in the row-major entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatRing {
    p: u64,
    s: u32,
    n: u64,
}

impl MatRing {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        let m = Modulus::prime_power(p, s)?;
        if m.value() > 1 << 30 {
            return Err(Error::InvalidInput(format!("{p}^{s} too large")));
        }
        Ok(MatRing { p, s, n: m.value() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.n.saturating_pow(4)
    }

    pub fn element(&self, index: u64) -> Mat2 {
        let n = self.n;
        Mat2 {
            e: [index / (n * n * n), index / (n * n) % n, index / n % n, index % n],
            n,
        }
    }

    pub fn index_of(&self, m: &Mat2) -> u64 {
        let n = self.n;
        ((m.e[0] * n + m.e[1]) * n + m.e[2]) * n + m.e[3]
    }

    pub fn elements(&self) -> impl Iterator<Item = Mat2> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    /// `|GL_2(Z/p^s)| = p^{4(s-1)} (p^2 - 1)(p^2 - p)`.
    pub fn unit_count(&self) -> u64 {
        let p = self.p;
        p.pow(4 * (self.s - 1)) * (p * p - 1) * (p * p - p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum M1Kind {
    /// `(1 a)`, any `a`
    FirstUnit,
    /// `(b 1)` with `b` a non-unit
    SecondUnit,
}

/// A row vector whose first unit coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vec2M1 {
    pub kind: M1Kind,
    pub free: Residue,
}

impl Vec2M1 {
    pub fn first_unit(a: Residue) -> Self {
        Vec2M1 {
            kind: M1Kind::FirstUnit,
            free: a,
        }
    }

    pub fn second_unit(b: Residue, p: u64) -> Result<Self> {
        if b.value() % p != 0 {
            return Err(Error::InvalidInput(format!("{b} is a unit")));
        }
        Ok(Vec2M1 {
            kind: M1Kind::SecondUnit,
            free: b,
        })
    }

    pub fn coords(&self) -> [u64; 2] {
        match self.kind {
            M1Kind::FirstUnit => [1, self.free.value()],
            M1Kind::SecondUnit => [self.free.value(), 1],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.free.modulus()
    }

    pub fn dot(&self, other: &Vec2M1) -> u64 {
        let n = self.modulus();
        let [a0, a1] = self.coords();
        let [b0, b1] = other.coords();
        (a0 * b0 + a1 * b1) % n
    }

    /// `alpha^t beta`.
    pub fn outer(&self, other: &Vec2M1) -> Mat2 {
        let n = self.modulus();
        let [a0, a1] = self.coords();
        let [b0, b1] = other.coords();
        Mat2::from_raw([a0 * b0 % n, a0 * b1 % n, a1 * b0 % n, a1 * b1 % n], n)
    }
}

impl fmt::Display for Vec2M1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.coords();
        write!(f, "({a} {b})")
    }
}

/// All `(1 a)` then all `(b 1)` with `p | b`; `p^s + p^{s-1}` vectors.
pub fn enumerate_m1(p: u64, s: u32) -> Result<Vec<Vec2M1>> {
    let m = Modulus::prime_power(p, s)?;
    let n = m.value();
    let mut out: Vec<Vec2M1> = (0..n).map(|a| Vec2M1::first_unit(m.residue(a))).collect();
    out.extend((0..n).step_by(p as usize).map(|b| Vec2M1 {
        kind: M1Kind::SecondUnit,
        free: m.residue(b),
    }));
    Ok(out)
}

/// The unique `beta` in the normalised family with `alpha beta^t = 0`.
pub fn orthogonal_partner(alpha: &Vec2M1) -> Vec2M1 {
    let n = alpha.modulus();
    let a = alpha.free;
    let partner = match alpha.kind {
        // 1 + a*b = 0 needs a unit a; otherwise b' + a = 0 with b' = -a in D
        M1Kind::FirstUnit => match a.inverse() {
            Some(inv) => Vec2M1::first_unit(-inv),
            None => Vec2M1 {
                kind: M1Kind::SecondUnit,
                free: -a,
            },
        },
        M1Kind::SecondUnit => Vec2M1::first_unit(-a),
    };
    assert_eq!(alpha.dot(&partner), 0, "partner of {alpha} mod {n}");
    partner
}

/// Exponents `(i, j)` of the unit-equivalent form `diag(p^i, p^j)`;
/// `j = None` when the second diagonal entry is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SmithType {
    pub i: u32,
    pub j: Option<u32>,
}

struct PivotReduction {
    p: u64,
    s: u32,
    i: u32,
    pivot: (usize, usize),
    /// `A / p^i`, representatives reduced mod `p^s`
    scaled: [u64; 4],
    pivot_inv: u64,
    /// `p^i * delta`, the residual at the entry opposite the pivot
    residual: u64,
}

fn pivot_reduce(a: &Mat2) -> Result<PivotReduction> {
    let (p, s) = Modulus::new(a.n)?
        .as_prime_power()
        .ok_or_else(|| Error::InvalidInput(format!("modulus {} is not a prime power", a.n)))?;
    if a.is_zero() {
        return Err(Error::InvalidInput("zero matrix".into()));
    }
    if a.is_unit() {
        return Err(Error::InvalidInput(format!("{a} is invertible")));
    }
    let n = a.n;
    let i = a.e.iter().map(|&x| valuation(x, p, s)).min().expect("4 entries");
    let pi = p.pow(i);
    let scaled = a.e.map(|x| x / pi);
    let k = scaled
        .iter()
        .position(|&x| x % p != 0)
        .expect("minimal valuation entry is a unit after scaling");
    let (r0, c0) = (k / 2, k % 2);
    let (r1, c1) = (1 - r0, 1 - c0);
    let at = |r: usize, c: usize| scaled[r * 2 + c] as u128;
    let pivot_inv = mod_inverse(scaled[k], n).expect("unit pivot");
    let n128 = n as u128;
    let cross = at(r1, c0) * at(r0, c1) % n128 * pivot_inv as u128 % n128;
    let delta = (at(r1, c1) + n128 - cross) % n128;
    let residual = (delta * pi as u128 % n128) as u64;
    Ok(PivotReduction {
        p,
        s,
        i,
        pivot: (r0, c0),
        scaled,
        pivot_inv,
        residual,
    })
}

/// Unit-equivalence type of a non-zero zero divisor.
pub fn smith_type(a: &Mat2) -> Result<SmithType> {
    let red = pivot_reduce(a)?;
    let j = (red.residual != 0).then(|| valuation(red.residual, red.p, red.s));
    Ok(SmithType { i: red.i, j })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SecondTerm {
    pub u2: Residue,
    pub j: u32,
    /// 1-based row of `E_mn`
    pub m: usize,
    /// 1-based column of `E_mn`
    pub n: usize,
}

/// `A = u1 p^i alpha^t beta + u2 p^j E_mn`, with `u1`, the free coordinates
/// of `alpha`, `beta` reduced mod `p^{s-i}` and `u2` reduced mod `p^{s-j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalFactorization {
    pub p: u64,
    pub u1: Residue,
    pub i: u32,
    pub alpha: Vec2M1,
    pub beta: Vec2M1,
    pub second: Option<SecondTerm>,
}

impl CanonicalFactorization {
    pub fn reconstruct(&self) -> Mat2 {
        let n = self.u1.modulus();
        let first = self
            .alpha
            .outer(&self.beta)
            .scale(self.u1.value())
            .scale(self.p.pow(self.i));
        match self.second {
            None => first,
            Some(t) => first + Mat2::unit_matrix(t.m, t.n, n).scale(t.u2.value() * self.p.pow(t.j) % n),
        }
    }

    pub fn smith_type(&self) -> SmithType {
        SmithType {
            i: self.i,
            j: self.second.map(|t| t.j),
        }
    }
}

/// Canonical decomposition of a non-zero zero divisor: pivot on the first
/// (row-major) unit entry of `A / p^i`, split off the rank-one part through
/// the pivot, and put the remainder on the entry opposite the pivot.
pub fn canonical_factorize(a: &Mat2) -> Result<CanonicalFactorization> {
    let red = pivot_reduce(a)?;
    let (p, s, i) = (red.p, red.s, red.i);
    let n = a.n;
    let n128 = n as u128;
    let head = Modulus::prime_power(p, s)?;
    let low = p.pow(s - i);
    let (r0, c0) = red.pivot;
    let at = |r: usize, c: usize| red.scaled[r * 2 + c] as u128;
    let inv = red.pivot_inv as u128;

    // column through the pivot, scaled by the pivot inverse
    let col_other = (at(1 - r0, c0) * inv % n128) as u64 % low;
    let alpha = if r0 == 0 {
        Vec2M1::first_unit(head.residue(col_other))
    } else {
        Vec2M1 {
            kind: M1Kind::SecondUnit,
            free: head.residue(col_other),
        }
    };
    let row_other = (at(r0, 1 - c0) * inv % n128) as u64 % low;
    let beta = if c0 == 0 {
        Vec2M1::first_unit(head.residue(row_other))
    } else {
        Vec2M1 {
            kind: M1Kind::SecondUnit,
            free: head.residue(row_other),
        }
    };
    let u1 = head.residue(red.scaled[r0 * 2 + c0] % low);

    let second = (red.residual != 0).then(|| {
        let j = valuation(red.residual, p, s);
        let u2 = red.residual / p.pow(j) % p.pow(s - j);
        SecondTerm {
            u2: head.residue(u2),
            j,
            m: 2 - r0,
            n: 2 - c0,
        }
    });
    let f = CanonicalFactorization {
        p,
        u1,
        i,
        alpha,
        beta,
        second,
    };
    debug_assert_eq!(f.reconstruct(), *a);
    Ok(f)
}

/// Preimage counts of `(u1, i, alpha, beta, u2, j, m, n) -> A` over the
/// canonical parameter ranges (`u1`, free coordinates mod `p^{s-i}`, `u2`
/// mod `p^{s-j}`, `1 <= j`, `i <= j`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationMultiplicity {
    pub zero_divisors: u64,
    pub tuples: u64,
    /// tuples landing on zero or on a unit
    pub tuples_outside: u64,
    pub unique: u64,
    pub multiple: u64,
    pub missing: u64,
    pub max_preimages: u64,
}

pub fn factorization_multiplicity(p: u64, s: u32) -> Result<FactorizationMultiplicity> {
    let ring = MatRing::new(p, s)?;
    let mut counts = vec![0u64; ring.size() as usize];
    let head = Modulus::prime_power(p, s)?;
    let mut tuples = 0;
    let mut outside = 0;
    let vectors = |low: u64| -> Vec<Vec2M1> {
        let mut v: Vec<Vec2M1> = (0..low).map(|a| Vec2M1::first_unit(head.residue(a))).collect();
        v.extend((0..low).step_by(p as usize).map(|b| Vec2M1 {
            kind: M1Kind::SecondUnit,
            free: head.residue(b),
        }));
        v
    };
    let mut seconds: Vec<Option<(u64, u32, usize, usize)>> = vec![None];
    for j in 1..s {
        for u2 in (1..p.pow(s - j)).filter(|u| u % p != 0) {
            for (m, c) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                seconds.push(Some((u2, j, m, c)));
            }
        }
    }
    for i in 0..s {
        let low = p.pow(s - i);
        let vs = vectors(low);
        for u1 in (1..low).filter(|u| u % p != 0) {
            for alpha in &vs {
                for beta in &vs {
                    for sec in seconds.iter().filter(|t| t.is_none_or(|t| t.1 >= i)) {
                        let f = CanonicalFactorization {
                            p,
                            u1: head.residue(u1),
                            i,
                            alpha: *alpha,
                            beta: *beta,
                            second: sec.map(|(u2, j, m, c)| SecondTerm {
                                u2: head.residue(u2),
                                j,
                                m,
                                n: c,
                            }),
                        };
                        let a = f.reconstruct();
                        tuples += 1;
                        if a.is_zero() || a.is_unit() {
                            outside += 1;
                        } else {
                            counts[ring.index_of(&a) as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    let mut out = FactorizationMultiplicity {
        zero_divisors: 0,
        tuples,
        tuples_outside: outside,
        unique: 0,
        multiple: 0,
        missing: 0,
        max_preimages: 0,
    };
    for (idx, &c) in counts.iter().enumerate() {
        let a = ring.element(idx as u64);
        if a.is_zero() || a.is_unit() {
            continue;
        }
        out.zero_divisors += 1;
        out.max_preimages = out.max_preimages.max(c);
        match c {
            0 => out.missing += 1,
            1 => out.unique += 1,
            _ => out.multiple += 1,
        }
    }
    Ok(out)
}

/// `a + b i + c j + d k -> a Id + b I + c J + d K` with
/// `I = [[x, y], [y, -x]]`, `J = [[0, 1], [-1, 0]]`, `K = I J`, where
/// `x^2 + y^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuatMatIso {
    pub root: SumOfSquaresRoot,
    pub p: u64,
    pub s: u32,
}

impl QuatMatIso {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        let root = lift_sum_of_squares(p, s)?;
        Ok(QuatMatIso { root, p, s })
    }

    fn n(&self) -> u64 {
        self.root.x.modulus()
    }

    pub fn image_i(&self) -> Mat2 {
        let (x, y) = (self.root.x.value() as i64, self.root.y.value() as i64);
        Mat2::from_signed([x, y, y, -x], self.n())
    }

    pub fn image_j(&self) -> Mat2 {
        Mat2::from_signed([0, 1, -1, 0], self.n())
    }

    pub fn image_k(&self) -> Mat2 {
        self.image_i() * self.image_j()
    }

    pub fn quat_to_mat(&self, q: &Quaternion) -> Result<Mat2> {
        let n = self.n();
        if q.modulus() != n {
            return Err(Error::ModulusMismatch {
                left: q.modulus(),
                right: n,
            });
        }
        let [a, b, c, d] = q.coeffs();
        Ok(Mat2::identity(n).scale(a)
            + self.image_i().scale(b)
            + self.image_j().scale(c)
            + self.image_k().scale(d))
    }

    pub fn mat_to_quat(&self, m: &Mat2) -> Result<Quaternion> {
        let n = self.n();
        if m.modulus() != n {
            return Err(Error::ModulusMismatch {
                left: m.modulus(),
                right: n,
            });
        }
        let md = Modulus::prime_power(self.p, self.s)?;
        let r = |v: u64| md.residue(v);
        let [m00, m01, m10, m11] = m.entries().map(r);
        let half = r(2).inverse().expect("p odd");
        let a = (m00 + m11) * half;
        let c = (m01 - m10) * half;
        let e = (m00 - m11) * half;
        let f = (m01 + m10) * half;
        // [[x, -y], [y, x]] (b, d) = (e, f), determinant x^2 + y^2 = -1
        let (x, y) = (self.root.x, self.root.y);
        let b = -(x * e + y * f);
        let d = y * e - x * f;
        Quaternion::new(
            [a, b, c, d].map(|v| v.value() as i64),
            n,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::QuatRing;

    fn m(rows: [[i64; 2]; 2], n: u64) -> Mat2 {
        Mat2::new(rows, n).unwrap()
    }

    #[test]
    fn m1_enumeration() {
        let v = enumerate_m1(3, 1).unwrap();
        let coords: Vec<[u64; 2]> = v.iter().map(Vec2M1::coords).collect();
        assert_eq!(coords, vec![[1, 0], [1, 1], [1, 2], [0, 1]]);
        assert_eq!(enumerate_m1(3, 2).unwrap().len(), 12);
        assert_eq!(enumerate_m1(5, 1).unwrap().len(), 6);
    }

    #[test]
    fn partner_examples() {
        let m3 = Modulus::new(3).unwrap();
        let m9 = Modulus::new(9).unwrap();
        assert_eq!(
            orthogonal_partner(&Vec2M1::first_unit(m3.residue(0))).coords(),
            [0, 1]
        );
        assert_eq!(
            orthogonal_partner(&Vec2M1::first_unit(m3.residue(1))).coords(),
            [1, 2]
        );
        assert_eq!(
            orthogonal_partner(&Vec2M1::first_unit(m9.residue(1))).coords(),
            [1, 8]
        );
    }

    #[test]
    fn partner_is_unique_by_scan() {
        for (p, s) in [(3, 1), (3, 2), (5, 1), (2, 2), (2, 3)] {
            let fam = enumerate_m1(p, s).unwrap();
            for a in &fam {
                let hits: Vec<&Vec2M1> = fam.iter().filter(|b| a.dot(b) == 0).collect();
                assert_eq!(hits.len(), 1, "{a} mod {p}^{s}");
                assert_eq!(*hits[0], orthogonal_partner(a));
            }
        }
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_type(&Mat2::unit_matrix(1, 2, 9)).unwrap(),
            SmithType { i: 0, j: None }
        );
        assert_eq!(
            smith_type(&m([[3, 0], [0, 3]], 9)).unwrap(),
            SmithType { i: 1, j: Some(1) }
        );
        assert_eq!(
            smith_type(&m([[1, 0], [0, 3]], 9)).unwrap(),
            SmithType { i: 0, j: Some(1) }
        );
        assert!(smith_type(&Mat2::identity(9)).is_err());
        assert!(smith_type(&Mat2::zero(9)).is_err());
    }

    #[test]
    fn factorize_examples() {
        let f = canonical_factorize(&m([[3, 0], [0, 0]], 9)).unwrap();
        assert_eq!((f.u1.value(), f.i), (1, 1));
        assert_eq!(f.alpha.coords(), [1, 0]);
        assert_eq!(f.beta.coords(), [1, 0]);
        assert_eq!(f.second, None);

        let f = canonical_factorize(&m([[1, 0], [0, 3]], 9)).unwrap();
        assert_eq!((f.u1.value(), f.i), (1, 0));
        assert_eq!(f.alpha.coords(), [1, 0]);
        assert_eq!(f.beta.coords(), [1, 0]);
        let t = f.second.unwrap();
        assert_eq!((t.u2.value(), t.j, t.m, t.n), (1, 1, 2, 2));

        let e12 = Mat2::unit_matrix(1, 2, 3);
        let f = canonical_factorize(&e12).unwrap();
        assert_eq!(f.i, 0);
        assert_eq!(f.reconstruct(), e12);
        assert!(f.second.is_none());

        assert!(canonical_factorize(&Mat2::identity(3)).is_err());
    }

    #[test]
    fn off_diagonal_pivot_uses_other_unit_matrix() {
        // 3 * [[0,1],[1,0]] over Z/9 has no factorisation with E_22
        let a = m([[0, 3], [3, 0]], 9);
        let f = canonical_factorize(&a).unwrap();
        assert_eq!(f.reconstruct(), a);
        let t = f.second.unwrap();
        assert_eq!((t.m, t.n), (2, 1));
        assert_eq!(f.smith_type(), SmithType { i: 1, j: Some(1) });
    }

    #[test]
    fn non_reversibility_witness() {
        let e11 = Mat2::unit_matrix(1, 1, 3);
        let e12 = Mat2::unit_matrix(1, 2, 3);
        assert!((e12 * e11).is_zero());
        assert!(!(e11 * e12).is_zero());
    }

    #[test]
    fn iso_images() {
        for (p, s) in [(3, 1), (3, 2), (5, 2), (7, 1)] {
            let iso = QuatMatIso::new(p, s).unwrap();
            let n = p.pow(s);
            let minus_id = Mat2::identity(n).scale(n - 1);
            let (i, j, k) = (iso.image_i(), iso.image_j(), iso.image_k());
            assert_eq!(i * i, minus_id);
            assert_eq!(j * j, minus_id);
            assert_eq!(k * k, minus_id);
            assert_eq!(j * i, k.scale(n - 1));
            assert_eq!(j, m([[0, 1], [-1, 0]], n));
            assert_eq!(iso.quat_to_mat(&Quaternion::one(n)).unwrap(), Mat2::identity(n));
        }
        assert!(QuatMatIso::new(2, 2).is_err());
    }

    #[test]
    fn iso_round_trip_mod_3() {
        let iso = QuatMatIso::new(3, 1).unwrap();
        for x in QuatRing::new(3).unwrap().elements() {
            let mx = iso.quat_to_mat(&x).unwrap();
            assert_eq!(iso.mat_to_quat(&mx).unwrap(), x);
        }
    }

    #[test]
    fn gl2_count() {
        let ring = MatRing::new(3, 1).unwrap();
        let units = ring.elements().filter(Mat2::is_unit).count() as u64;
        assert_eq!(units, 48);
        assert_eq!(ring.unit_count(), 48);
    }
}
