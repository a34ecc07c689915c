//! Exact arithmetic in the prime field `Z_d` and in arbitrary-precision
//! rationals.
//!
//! [`FpElem`] carries its [`Modulus`]; combining elements of different
//! moduli panics, since that can only be a programming error. The
//! [`Coefficient`] trait abstracts over the two coefficient domains used by
//! the polynomial engine.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// An odd prime `d < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct Modulus(u32);

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        Modulus::new(d)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if !(3..(1 << 31)).contains(&d) || !is_prime(d) {
            return Err(Error::NotOddPrime(d));
        }
        Ok(Modulus(d as u32))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn elem(self, v: i64) -> FpElem {
        FpElem { value: self.reduce_i64(v), modulus: self }
    }

    #[inline]
    pub fn zero(self) -> FpElem {
        FpElem { value: 0, modulus: self }
    }

    #[inline]
    pub fn one(self) -> FpElem {
        FpElem { value: 1, modulus: self }
    }

    /// Iterates over all field elements in increasing order of representative.
    pub fn elements(self) -> impl Iterator<Item = FpElem> {
        (0..self.0).map(move |value| FpElem { value, modulus: self })
    }

    #[inline]
    pub fn reduce_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn reduce_u64(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    pub fn reduce_bigint(self, v: &BigInt) -> u32 {
        let r = v.mod_floor(&BigInt::from(self.0));
        r.to_u32().expect("residue fits in u32")
    }

    // Raw helpers on reduced representatives, used by hot loops.

    #[inline]
    pub fn add_raw(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.0 as u64 {
            (s - self.0 as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub_raw(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow_raw(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a reduced nonzero representative by the extended Euclidean
    /// algorithm.
    pub fn inv_raw(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i64(t0))
    }

    #[inline]
    pub fn half_raw(self, a: u32) -> u32 {
        // (d + 1) / 2 is the inverse of 2 for odd d.
        self.mul_raw(a, self.0.div_ceil(2))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `Z_d`, stored as its representative in `[0, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    modulus: Modulus,
}

impl FpElem {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(self) -> Result<FpElem> {
        self.modulus
            .inv_raw(self.value)
            .map(|value| FpElem { value, modulus: self.modulus })
            .ok_or(Error::ZeroInverse(self.modulus.0))
    }

    /// The unique `h` with `2h = self`; exists because `d` is odd.
    pub fn half(self) -> FpElem {
        FpElem { value: self.modulus.half_raw(self.value), modulus: self.modulus }
    }

    pub fn pow(self, exp: u64) -> FpElem {
        FpElem { value: self.modulus.pow_raw(self.value, exp), modulus: self.modulus }
    }

    /// Representative in `(-d/2, d/2]`.
    pub fn signed(self) -> i64 {
        let v = self.value as i64;
        let d = self.modulus.0 as i64;
        if v > d / 2 {
            v - d
        } else {
            v
        }
    }

    #[inline]
    fn check(self, other: FpElem) {
        assert!(self.modulus == other.modulus, "{}", Error::ModulusMismatch(self.modulus.0, other.modulus.0));
    }

    pub fn try_add(self, other: FpElem) -> Result<FpElem> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0));
        }
        Ok(self + other)
    }

    pub fn try_mul(self, other: FpElem) -> Result<FpElem> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0));
        }
        Ok(self * other)
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpElem {
    type Output = FpElem;
    #[inline]
    fn add(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        FpElem { value: self.modulus.add_raw(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    #[inline]
    fn sub(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        FpElem { value: self.modulus.sub_raw(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    #[inline]
    fn mul(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        FpElem { value: self.modulus.mul_raw(self.value, rhs.value), modulus: self.modulus }
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    #[inline]
    fn neg(self) -> FpElem {
        FpElem { value: self.modulus.neg_raw(self.value), modulus: self.modulus }
    }
}

impl AddAssign for FpElem {
    fn add_assign(&mut self, rhs: FpElem) {
        *self = *self + rhs;
    }
}

impl SubAssign for FpElem {
    fn sub_assign(&mut self, rhs: FpElem) {
        *self = *self - rhs;
    }
}

impl MulAssign for FpElem {
    fn mul_assign(&mut self, rhs: FpElem) {
        *self = *self * rhs;
    }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[FpElem], b: &[FpElem]) -> FpElem {
    assert_eq!(a.len(), b.len());
    let m = a.first().map(|x| x.modulus()).expect("nonempty vectors");
    a.iter().zip(b).fold(m.zero(), |acc, (&x, &y)| acc + x * y)
}

/// Marker for the rational field `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

/// Coefficient domain tag, as recorded in reports and JSON documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffDomain {
    Rational,
    Prime(Modulus),
}

impl fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffDomain::Rational => write!(f, "Q"),
            CoeffDomain::Prime(m) => write!(f, "Z_{m}"),
        }
    }
}

/// Field operations needed by the polynomial engine.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Domain: Clone + Copy + PartialEq + fmt::Debug + Send + Sync;

    fn domain(&self) -> Self::Domain;
    fn tag(dom: Self::Domain) -> CoeffDomain;
    fn zero(dom: Self::Domain) -> Self;
    fn one(dom: Self::Domain) -> Self;
    fn from_i64(dom: Self::Domain, v: i64) -> Self;
    fn from_rational(dom: Self::Domain, v: &BigRational) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        self.sub(&Self::one(self.domain())).is_zero()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Coefficient for BigRational {
    type Domain = Rationals;

    fn domain(&self) -> Rationals {
        Rationals
    }
    fn tag(_: Rationals) -> CoeffDomain {
        CoeffDomain::Rational
    }
    fn zero(_: Rationals) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: Rationals) -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(_: Rationals, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(_: Rationals, v: &BigRational) -> Result<Self> {
        Ok(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Coefficient for FpElem {
    type Domain = Modulus;

    fn domain(&self) -> Modulus {
        self.modulus
    }
    fn tag(dom: Modulus) -> CoeffDomain {
        CoeffDomain::Prime(dom)
    }
    fn zero(dom: Modulus) -> Self {
        dom.zero()
    }
    fn one(dom: Modulus) -> Self {
        dom.one()
    }
    fn from_i64(dom: Modulus, v: i64) -> Self {
        dom.elem(v)
    }
    fn from_rational(dom: Modulus, v: &BigRational) -> Result<Self> {
        rational_mod(v, dom)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn inv(&self) -> Option<Self> {
        FpElem::inv(*self).ok()
    }
}

/// Image of a rational number in `Z_d`.
pub fn rational_mod(v: &BigRational, m: Modulus) -> Result<FpElem> {
    let num = m.reduce_bigint(v.numer());
    let den = m.reduce_bigint(v.denom());
    let inv = m.inv_raw(den).ok_or_else(|| Error::NonInvertibleDenominator { coeff: v.to_string(), p: m.value() })?;
    Ok(FpElem { value: m.mul_raw(num, inv), modulus: m })
}

/// Formats a rational as `"num/den"`, omitting the denominator when it is 1.
pub fn rational_to_string(v: &BigRational) -> String {
    v.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// True if `n` is `±2^k` for some `k ≥ 0`.
pub fn is_power_of_two(n: &BigInt) -> bool {
    let a = n.abs();
    !a.is_zero() && (&a & (&a - BigInt::one())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    /// Independent inverse oracle: brute-force search.
    fn inv_by_search(a: u32, d: u32) -> u32 {
        (1..d).find(|x| (a as u64 * *x as u64) % d as u64 == 1).unwrap()
    }

    #[test]
    fn modulus_rejects_even_and_composite() {
        assert!(Modulus::new(2).is_err());
        assert!(Modulus::new(4).is_err());
        assert!(Modulus::new(9).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1u64 << 31).is_err());
        assert_eq!(m(3).value(), 3);
        assert_eq!(m(2147483647).value(), 2147483647);
    }

    #[test]
    fn inverse_examples() {
        for d in [3, 5, 7, 11] {
            assert_eq!(m(d).one().inv().unwrap(), m(d).one());
        }
        assert_eq!(m(3).elem(2).inv().unwrap().value(), 2);
        assert_eq!(m(7).elem(3).inv().unwrap().value(), 5);
        assert_eq!(inv_by_search(3, 7), 5);
        assert!(matches!(m(5).zero().inv(), Err(Error::ZeroInverse(5))));
    }

    #[test]
    fn half_examples() {
        for d in [3, 5, 7] {
            assert_eq!(m(d).zero().half(), m(d).zero());
        }
        assert_eq!(m(3).elem(1).half().value(), 2);
        assert_eq!(m(5).elem(2).half().value(), 1);
    }

    #[test]
    fn inverse_matches_search_oracle() {
        for d in [3u64, 5, 7, 11, 13, 101] {
            for a in 1..d as u32 {
                assert_eq!(m(d).elem(a as i64).inv().unwrap().value(), inv_by_search(a, d as u32));
            }
        }
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn mixed_moduli_panic() {
        let _ = m(3).one() + m(5).one();
    }

    #[test]
    fn mixed_moduli_checked() {
        assert!(matches!(m(3).one().try_add(m(5).one()), Err(Error::ModulusMismatch(3, 5))));
    }

    #[test]
    fn rational_strings() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&r), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_mod(&r, m(7)).unwrap().value(), 2); // -3 * 4 = -12 = 2
        assert!(rational_mod(&parse_rational("1/3").unwrap(), m(3)).is_err());
    }

    #[test]
    fn powers_of_two() {
        assert!(is_power_of_two(&BigInt::from(1)));
        assert!(is_power_of_two(&BigInt::from(-8)));
        assert!(!is_power_of_two(&BigInt::from(6)));
        assert!(!is_power_of_two(&BigInt::from(0)));
    }

    proptest! {
        #[test]
        fn inverse_is_involutive(d in prop::sample::select(vec![3u64, 5, 7, 11, 13, 65537]), a in 1u64..1_000_000) {
            let x = m(d).elem(a as i64);
            prop_assume!(!x.is_zero());
            let i = x.inv().unwrap();
            prop_assert_eq!(x * i, m(d).one());
            prop_assert_eq!(i.inv().unwrap(), x);
        }

        #[test]
        fn half_doubles_back(d in prop::sample::select(vec![3u64, 5, 7, 11, 13, 65537]), a in 0i64..1_000_000) {
            let x = m(d).elem(a);
            prop_assert_eq!(x.half() + x.half(), x);
        }

        #[test]
        fn rational_addition_is_exact(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, e in 1i64..10_000) {
            let x = BigRational::new(a.into(), b.into());
            let y = BigRational::new(c.into(), e.into());
            let lhs = (x + y) * BigRational::from_integer((b * e).into());
            prop_assert!(lhs.is_integer());
            prop_assert_eq!(lhs.to_integer(), BigInt::from(a * e + c * b));
        }
    }
}
