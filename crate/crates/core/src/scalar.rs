//! Exact scalar backends: arbitrary-precision rationals and prime fields.
//!
//! Everything downstream (validators, differentials, elimination) is generic
//! over [`Scalar`]. No floating point exists anywhere in this crate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field element.
///
/// Implementations must satisfy the field axioms exactly; equality is
/// decidable and exact. `from_i64` embeds integer constants (structure
/// constants, signs) into the field.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
    /// Rough size measure; the eliminator prefers pivots of low complexity.
    fn complexity(&self) -> u64;
    /// Canonical string form, re-parseable by the I/O layer.
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// Exact rational numbers with arbitrary-precision integer parts.
///
/// Values are kept in lowest terms with positive denominator (the underlying
/// representation reduces on construction).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }

    fn neg(&self) -> Self {
        Rational(-self.0.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn complexity(&self) -> u64 {
        (self.0.numer().abs().bits() + self.0.denom().bits()) as u64
    }
}

/// Default prime modulus: the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// An element of a prime field `Z/p`, or an as-yet unbound integer literal.
///
/// Contextless constructors (`zero`, `one`, `from_i64`) cannot know the
/// modulus, so they produce integer literals that reduce on first contact
/// with a bound residue. Parsed instances bind every coefficient, so any
/// computation rooted in file data is fully reduced mod `p`. Mixing residues
/// of different moduli is a programming error and panics.
#[derive(Clone, Debug)]
pub struct PrimeField {
    value: i128,
    /// 0 marks an unbound integer literal.
    modulus: u64,
}

impl PrimeField {
    /// A residue `v mod p`. `p` must be an odd prime; primality of small
    /// factors is checked cheaply, full primality is the caller's contract.
    pub fn new(v: i64, p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        let m = p as i128;
        let mut r = (v as i128) % m;
        if r < 0 {
            r += m;
        }
        PrimeField {
            value: r,
            modulus: p,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        if self.modulus == 0 {
            None
        } else {
            Some(self.modulus)
        }
    }

    /// Canonical residue in `[0, p)`, reducing a literal against `p`.
    pub fn residue(&self, p: u64) -> u64 {
        if self.modulus != 0 {
            assert_eq!(self.modulus, p, "mixed prime moduli");
            self.value as u64
        } else {
            let m = p as i128;
            let mut r = self.value % m;
            if r < 0 {
                r += m;
            }
            r as u64
        }
    }

    fn unify(&self, rhs: &Self) -> u64 {
        match (self.modulus, rhs.modulus) {
            (0, m) | (m, 0) => m,
            (a, b) => {
                assert_eq!(a, b, "mixed prime moduli {a} and {b}");
                a
            }
        }
    }

    fn bound(&self, m: u64) -> i128 {
        if m == 0 {
            return self.value;
        }
        let mm = m as i128;
        let mut r = self.value % mm;
        if r < 0 {
            r += mm;
        }
        r
    }

    fn make(v: i128, m: u64) -> Self {
        if m == 0 {
            PrimeField { value: v, modulus: 0 }
        } else {
            let mm = m as i128;
            let mut r = v % mm;
            if r < 0 {
                r += mm;
            }
            PrimeField { value: r, modulus: m }
        }
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        let m = self.unify(other);
        self.bound(m) == other.bound(m)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for PrimeField {
    fn zero() -> Self {
        PrimeField { value: 0, modulus: 0 }
    }

    fn one() -> Self {
        PrimeField { value: 1, modulus: 0 }
    }

    fn from_i64(n: i64) -> Self {
        PrimeField { value: n as i128, modulus: 0 }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        let m = self.unify(rhs);
        Self::make(
            self.bound(m)
                .checked_add(rhs.bound(m))
                .expect("integer literal overflow"),
            m,
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        let m = self.unify(rhs);
        Self::make(
            self.bound(m)
                .checked_sub(rhs.bound(m))
                .expect("integer literal overflow"),
            m,
        )
    }

    fn mul(&self, rhs: &Self) -> Self {
        let m = self.unify(rhs);
        Self::make(
            self.bound(m)
                .checked_mul(rhs.bound(m))
                .expect("integer literal overflow"),
            m,
        )
    }

    fn neg(&self) -> Self {
        Self::make(-self.value, self.modulus)
    }

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        if self.modulus == 0 {
            // Only units of Z are invertible without a modulus.
            return match self.value {
                1 => Some(Self::from_i64(1)),
                -1 => Some(Self::from_i64(-1)),
                _ => panic!("prime modulus required to invert literal {}", self.value),
            };
        }
        let p = self.modulus as i128;
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (p, self.value);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        assert!(r == 1, "modulus is not prime: gcd {r}");
        Some(Self::make(t, self.modulus))
    }

    fn complexity(&self) -> u64 {
        if self.modulus == 0 {
            self.value.unsigned_abs().max(1).ilog2() as u64 + 1
        } else {
            1
        }
    }
}
