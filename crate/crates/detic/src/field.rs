//! Exact scalar arithmetic over the rationals and prime fields.
//!
//! Every value is either an arbitrary-precision rational or a residue
//! modulo a prime `p < 2^61`, so all downstream linear algebra is exact.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The coefficient field a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The rational numbers.
    Rational,
    /// Integers modulo a prime `p`, residues stored in `[0, p)`.
    Prime(u64),
}

/// A single field element. The variant must match the owning [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Ratio(BigRational),
    Mod(u64),
}

impl FieldSpec {
    /// Builds a prime field, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 61 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// Re-checks the construction invariant; used when a field description
    /// arrives from untrusted input (files, CLI flags).
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => FieldSpec::prime(p).map(|_| ()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Ratio(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Ratio(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Mod(1),
        }
    }

    /// Embeds a signed integer, reducing modulo `p` for prime fields.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Ratio(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Mod(v.rem_euclid(p as i64) as u64),
        }
    }

    /// Embeds the fraction `num/den`; in a prime field this is `num * den^{-1}`.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        match *self {
            FieldSpec::Rational => Ok(Scalar::Ratio(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldSpec::Prime(_) => {
                let d = self.from_i64(den);
                let inv = self.inv(&d).ok_or_else(|| {
                    Error::InvalidInput(format!("denominator {den} is zero in the field"))
                })?;
                Ok(self.mul(&self.from_i64(num), &inv))
            }
        }
    }

    /// Parses either a plain integer or an `a/b` fraction.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = |_| Error::InvalidInput(format!("cannot parse scalar {s:?}"));
        match s.split_once('/') {
            None => {
                let v = i64::from_str(s).map_err(bad)?;
                Ok(self.from_i64(v))
            }
            Some((a, b)) => {
                let num = i64::from_str(a.trim()).map_err(bad)?;
                let den = i64::from_str(b.trim()).map_err(bad)?;
                self.from_fraction(num, den)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Ratio(r) => r.is_zero(),
            Scalar::Mod(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Ratio(x), Scalar::Ratio(y)) => Scalar::Ratio(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(addmod(*x, *y, *p)),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Ratio(x)) => Scalar::Ratio(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Ratio(x), Scalar::Ratio(y)) => Scalar::Ratio(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mulmod(*x, *y, *p)),
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Ratio(x)) => {
                (!x.is_zero()).then(|| Scalar::Ratio(x.recip()))
            }
            (FieldSpec::Prime(p), Scalar::Mod(x)) => {
                (*x != 0).then(|| Scalar::Mod(powmod(*x, p - 2, *p)))
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Uniform sample for prime fields. For the rationals (where no uniform
    /// distribution exists) this draws small fractions, which is what the
    /// randomized suites need.
    pub fn random_scalar<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            FieldSpec::Rational => {
                let num = rng.gen_range(-8i64..=8);
                let den = rng.gen_range(1i64..=4);
                Scalar::Ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            FieldSpec::Prime(p) => Scalar::Mod(rng.gen_range(0..p)),
        }
    }
}

impl Scalar {
    /// The exact rational value, for prime fields the canonical residue.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Ratio(r) => r.clone(),
            Scalar::Mod(v) => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod(v) => Some(*v),
            Scalar::Ratio(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Ratio(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // both < 2^61, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is complete for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
