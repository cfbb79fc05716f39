//! Residue arithmetic in `Z/nZ`, factorisation of the modulus, CRT split and
//! join, and Hensel lifting of `x^2 + y^2 = -1` modulo odd prime powers.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A modulus `n >= 2` together with its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        let factors = factorize(n)?;
        Ok(Modulus { n, factors })
    }

    /// `p^s` without re-running trial division.
    pub fn prime_power(p: u64, s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("exponent must be at least 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let n = p
            .checked_pow(s)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{s} overflows u64")))?;
        Ok(Modulus {
            n,
            factors: vec![(p, s)],
        })
    }

    pub fn value(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The prime-power moduli `p_l^{s_l}`, ascending by prime.
    pub fn prime_power_parts(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    /// `Some((p, s))` when the modulus is a prime power.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: value % self.n,
            n: self.n,
        }
    }

    pub fn residue_signed(&self, value: i64) -> Residue {
        Residue {
            value: value.rem_euclid(self.n as i64) as u64,
            n: self.n,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Trial-division factorisation, ascending primes.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "modulus must be at least 2, got {n}"
        )));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

pub fn is_prime(p: u64) -> bool {
    matches!(factorize(p).as_deref(), Ok([(q, 1)]) if *q == p)
}

/// An element of `Z/nZ`. Operators panic when the moduli differ; the
/// `checked_*` methods return [`Error::ModulusMismatch`] instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Residue {
    value: u64,
    n: u64,
}

impl Residue {
    pub fn new(value: u64, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} < 2")));
        }
        Ok(Residue { value: value % n, n })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.n
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        self.value.gcd(&self.n) == 1
    }

    fn same_modulus(self, other: Residue) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn checked_add(self, other: Residue) -> Result<Residue> {
        self.same_modulus(other)?;
        Ok(Residue {
            value: ((self.value as u128 + other.value as u128) % self.n as u128) as u64,
            n: self.n,
        })
    }

    pub fn checked_sub(self, other: Residue) -> Result<Residue> {
        self.same_modulus(other)?;
        Ok(Residue {
            value: ((self.value as u128 + (self.n - other.value) as u128) % self.n as u128) as u64,
            n: self.n,
        })
    }

    pub fn checked_mul(self, other: Residue) -> Result<Residue> {
        self.same_modulus(other)?;
        Ok(Residue {
            value: ((self.value as u128 * other.value as u128) % self.n as u128) as u64,
            n: self.n,
        })
    }

    pub fn inverse(self) -> Option<Residue> {
        mod_inverse(self.value, self.n).map(|value| Residue { value, n: self.n })
    }

    pub fn pow(self, mut e: u64) -> Residue {
        let mut base = self;
        let mut acc = Residue {
            value: 1 % self.n,
            n: self.n,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Reduce into `Z/mZ` for a divisor `m` of the modulus.
    pub fn reduce(self, m: u64) -> Result<Residue> {
        if m < 2 || self.n % m != 0 {
            return Err(Error::InvalidInput(format!(
                "{m} does not divide modulus {}",
                self.n
            )));
        }
        Ok(Residue {
            value: self.value % m,
            n: m,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.n)
    }
}

macro_rules! residue_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr for Residue {
            type Output = Residue;
            fn $method(self, rhs: Residue) -> Residue {
                match self.$checked(rhs) {
                    Ok(r) => r,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

residue_op!(Add, add, checked_add);
residue_op!(Sub, sub, checked_sub);
residue_op!(Mul, mul, checked_mul);

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.n - self.value) % self.n,
            n: self.n,
        }
    }
}

pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(n as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(n as i128) as u64)
}

/// `p`-adic valuation of `x` in `Z/p^s`, with `v(0) = s`.
pub fn valuation(mut x: u64, p: u64, s: u32) -> u32 {
    let n = p.pow(s);
    x %= n;
    if x == 0 {
        return s;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Componentwise reduction modulo each prime-power factor of the modulus.
pub fn crt_split(r: Residue, modulus: &Modulus) -> Result<Vec<Residue>> {
    if r.n != modulus.value() {
        return Err(Error::ModulusMismatch {
            left: r.n,
            right: modulus.value(),
        });
    }
    modulus
        .prime_power_parts()
        .into_iter()
        .map(|q| r.reduce(q))
        .collect()
}

/// Inverse of [`crt_split`]: recombine residues modulo pairwise coprime moduli.
pub fn crt_join(parts: &[Residue]) -> Result<Residue> {
    let mut acc_value: u128 = 0;
    let mut acc_mod: u128 = 1;
    for part in parts {
        let m = part.n as u128;
        if (acc_mod as u64).gcd(&part.n) != 1 {
            return Err(Error::InvalidInput(format!(
                "CRT moduli not coprime: {acc_mod} and {m}"
            )));
        }
        // acc_value + acc_mod * t = part.value (mod m)
        let inv = mod_inverse((acc_mod % m) as u64, part.n).unwrap_or(0) as u128;
        let diff = (part.value as u128 + m - acc_value % m) % m;
        let t = diff * inv % m;
        acc_value += acc_mod * t;
        acc_mod *= m;
    }
    if acc_mod < 2 || acc_mod > u64::MAX as u128 {
        return Err(Error::InvalidInput("CRT product out of range".into()));
    }
    Residue::new(acc_value as u64, acc_mod as u64)
}

/// A pair `(x, y)` with `x^2 + y^2 = -1 (mod p^s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumOfSquaresRoot {
    pub x: Residue,
    pub y: Residue,
}

impl SumOfSquaresRoot {
    pub fn holds(&self) -> bool {
        let sum = self.x * self.x + self.y * self.y;
        (sum + Residue { value: 1, n: sum.n }).is_zero()
    }
}

/// Solve `x^2 + y^2 = -1 (mod p^s)` for odd prime `p`: take the
/// lexicographically smallest solution mod `p`, then Newton-lift whichever
/// coordinate is a unit while holding the other fixed.
pub fn lift_sum_of_squares(p: u64, s: u32) -> Result<SumOfSquaresRoot> {
    if p == 2 {
        return Err(Error::Unsupported(
            "sum-of-squares lift needs an odd prime".into(),
        ));
    }
    let modulus = Modulus::prime_power(p, s)?;
    let (x0, y0) = (0..p)
        .flat_map(|x| (0..p).map(move |y| (x, y)))
        .find(|&(x, y)| (x * x + y * y + 1) % p == 0)
        .ok_or_else(|| Error::InvalidInput(format!("no solution mod {p}")))?;

    let mut x = modulus.residue(x0);
    let mut y = modulus.residue(y0);
    // one of x, y is a unit mod p since x^2 + y^2 = -1 is not 0 mod p
    let lift_x = x0 % p != 0;
    let one = modulus.residue(1);
    let two = modulus.residue(2);
    // Newton doubles the p-adic precision per step.
    let mut precision = 1u32;
    while precision < s {
        let f = x * x + y * y + one;
        if lift_x {
            let d = (two * x).inverse().expect("2x is a unit");
            x = x - f * d;
        } else {
            let d = (two * y).inverse().expect("2y is a unit");
            y = y - f * d;
        }
        precision *= 2;
    }
    let root = SumOfSquaresRoot { x, y };
    debug_assert!(root.holds());
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(9).unwrap(), vec![(3, 2)]);
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(2).unwrap(), vec![(2, 1)]);
        assert!(matches!(factorize(1), Err(Error::InvalidInput(_))));
        assert!(matches!(factorize(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn factorization_multiplies_back() {
        for n in 2..2000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        }
    }

    #[test]
    fn unit_examples() {
        assert!(!Residue::new(3, 9).unwrap().is_unit());
        assert!(Residue::new(2, 9).unwrap().is_unit());
        assert!(!Residue::new(0, 4).unwrap().is_unit());
    }

    #[test]
    fn units_and_zero_divisors_partition() {
        for n in 2..=1000u64 {
            for v in 0..n {
                let r = Residue::new(v, n).unwrap();
                let zero_or_zd = v == 0 || (1..n).any(|w| (v * w) % n == 0);
                assert!(r.is_unit() ^ zero_or_zd, "{v} mod {n}");
            }
        }
    }

    #[test]
    fn crt_split_examples() {
        let m12 = Modulus::new(12).unwrap();
        let parts = crt_split(m12.residue(7), &m12).unwrap();
        assert_eq!(parts, vec![Residue::new(3, 4).unwrap(), Residue::new(1, 3).unwrap()]);
        let m6 = Modulus::new(6).unwrap();
        assert_eq!(
            crt_split(m6.residue(0), &m6).unwrap(),
            vec![Residue::new(0, 2).unwrap(), Residue::new(0, 3).unwrap()]
        );
        assert_eq!(
            crt_split(m6.residue(5), &m6).unwrap(),
            vec![Residue::new(1, 2).unwrap(), Residue::new(2, 3).unwrap()]
        );
    }

    #[test]
    fn crt_round_trip_exhaustive() {
        for n in 2..=1000u64 {
            let m = Modulus::new(n).unwrap();
            for v in 0..n {
                let r = m.residue(v);
                assert_eq!(crt_join(&crt_split(r, &m).unwrap()).unwrap(), r);
            }
        }
    }

    #[test]
    fn mismatched_moduli_are_errors() {
        let a = Residue::new(1, 4).unwrap();
        let b = Residue::new(1, 3).unwrap();
        assert_eq!(
            a.checked_mul(b),
            Err(Error::ModulusMismatch { left: 4, right: 3 })
        );
        let m = Modulus::new(12).unwrap();
        assert!(crt_split(a, &m).is_err());
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn operator_panics_on_mismatch() {
        let _ = Residue::new(1, 4).unwrap() + Residue::new(1, 3).unwrap();
    }

    #[test]
    fn sum_of_squares_small_cases() {
        let r = lift_sum_of_squares(3, 1).unwrap();
        assert!(r.holds());
        assert_eq!((r.x.value(), r.y.value()), (1, 1));

        let r = lift_sum_of_squares(5, 1).unwrap();
        assert!(r.holds());
        assert_eq!((r.x.value() * r.x.value() + r.y.value() * r.y.value()) % 5, 4);

        assert!(matches!(lift_sum_of_squares(2, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sum_of_squares_mod_9_against_scan() {
        // exhaustive scan: the solution set mod 9 is non-empty and contains
        // the lifted pair
        let solutions: Vec<(u64, u64)> = (0..9)
            .flat_map(|x| (0..9).map(move |y| (x, y)))
            .filter(|&(x, y)| (x * x + y * y) % 9 == 8)
            .collect();
        assert!(!solutions.is_empty());
        let r = lift_sum_of_squares(3, 2).unwrap();
        assert!(solutions.contains(&(r.x.value(), r.y.value())));
    }

    #[test]
    fn sum_of_squares_lifts_are_valid_and_deterministic() {
        for p in [3u64, 5, 7, 11, 13] {
            for s in 1..=6 {
                let r = lift_sum_of_squares(p, s).unwrap();
                assert!(r.holds(), "p={p} s={s}");
                assert_eq!(r, lift_sum_of_squares(p, s).unwrap());
            }
        }
    }

    #[test]
    fn valuation_basics() {
        assert_eq!(valuation(0, 3, 2), 2);
        assert_eq!(valuation(3, 3, 2), 1);
        assert_eq!(valuation(4, 3, 2), 0);
        assert_eq!(valuation(12, 2, 4), 2);
    }
}
