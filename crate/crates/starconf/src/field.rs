//! Exact coefficient fields: a word-sized prime field and arbitrary-precision
//! rationals.
//!
//! Every computation in this crate is exact. The prime field is the workhorse
//! (maximal rank over F_p lifts to maximal rank in characteristic zero by
//! semicontinuity); the rational field exists to cross-check verdicts without
//! any modular reduction.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus: the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// The deterministic generator used wherever randomness is needed; its
/// stream is stable across releases and platforms, which keeps certificates
/// and table output reproducible from a seed.
pub type SeededRng = rand_chacha::ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

/// Smallest modulus accepted for certification work. Tiny fields make
/// spurious rank drops too likely.
pub const MIN_PRIME: u64 = 32003;

/// Which coefficient field a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    PrimeField,
    Rational,
}

/// Runtime-selectable field description, embedded in certificates so they
/// can be re-verified later.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub prime: u64,
}

impl FieldConfig {
    pub fn prime_field(prime: u64) -> Self {
        FieldConfig { kind: FieldKind::PrimeField, prime }
    }

    pub fn rational() -> Self {
        FieldConfig { kind: FieldKind::Rational, prime: DEFAULT_PRIME }
    }

    /// Checks the modulus constraints. The prime is validated even in
    /// rational mode since it is carried along in serialized records.
    pub fn validate(&self) -> Result<()> {
        if self.prime < MIN_PRIME || self.prime >= (1 << 62) {
            return Err(Error::PrimeOutOfRange(self.prime));
        }
        if !is_prime_u64(self.prime) {
            return Err(Error::NotPrime(self.prime));
        }
        Ok(())
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::prime_field(DEFAULT_PRIME)
    }
}

/// Context object for exact field arithmetic.
///
/// Elements do not carry their field; all operations go through the context,
/// so a prime-field element stays a bare `u64`. Implementations must be pure
/// and deterministic, which makes them safe to share across threads.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn from_int(&self, v: i64) -> Self::Elem;

    /// Builds an element from decimal strings `num` and optional `den`,
    /// as they appear in the polynomial text grammar (`coeff = integer or
    /// "a/b"`). Arbitrary-length digit strings are accepted.
    fn from_decimal(&self, num: &str, den: Option<&str>) -> Result<Self::Elem>;

    /// Draws one element. Uniform over a prime field; small integers over
    /// the rationals (generic enough for general-position sampling).
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn format(&self, a: &Self::Elem) -> String;

    /// `dst[k] <- dst[k] - factor * src[k]` over a whole row slice. The
    /// default loops over scalar ops; `Fp` overrides it with a fused kernel
    /// since this is the hot path of every elimination.
    fn row_axpy_sub(&self, dst: &mut [Self::Elem], src: &[Self::Elem], factor: &Self::Elem) {
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            let t = self.mul(factor, s);
            *d = self.sub(d, &t);
        }
    }
}

/// The prime field F_p for a word-sized prime p, 32003 <= p < 2^62.
///
/// Elements are canonical residues in `[0, p)`. For p < 2^32 (which covers
/// the default modulus) multiplication uses Barrett reduction with a
/// precomputed reciprocal; larger primes fall back to 128-bit remainders.
#[derive(Clone, Debug)]
pub struct Fp {
    p: u64,
    /// floor(2^64 / p); only meaningful when `small`.
    magic: u64,
    small: bool,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        FieldConfig::prime_field(p).validate()?;
        let small = p < (1 << 32);
        let magic = if small { ((1u128 << 64) / p as u128) as u64 } else { 0 };
        Ok(Fp { p, magic, small })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary `u64` modulo p via Barrett. Requires `small`.
    #[inline(always)]
    fn reduce_small(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.magic as u128) >> 64) as u64;
        let r = x.wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline(always)]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.small {
            // a, b < p < 2^32, so the product fits in a u64.
            self.reduce_small(a.wrapping_mul(b))
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }
}

impl Field for Fp {
    type Elem = u64;

    #[inline(always)]
    fn zero(&self) -> u64 {
        0
    }

    #[inline(always)]
    fn one(&self) -> u64 {
        1
    }

    #[inline(always)]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline(always)]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid in signed 128-bit; p < 2^62 keeps everything in range.
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1, "modulus must be prime");
        Some(t.rem_euclid(self.p as i128) as u64)
    }

    fn from_int(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_decimal(&self, num: &str, den: Option<&str>) -> Result<u64> {
        let n = fold_decimal_mod(num, self.p)?;
        match den {
            None => Ok(n),
            Some(d) => {
                let d = fold_decimal_mod(d, self.p)?;
                let inv = self
                    .inv(&d)
                    .ok_or_else(|| Error::Parse(format!("denominator {d} is zero mod {}", self.p)))?;
                Ok(self.mul(&n, &inv))
            }
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        // Unbiased rejection sampling, independent of rand's distribution
        // internals so seeded streams stay stable.
        let zone = (u64::MAX / self.p) * self.p;
        loop {
            let v = rng.next_u64();
            if v < zone {
                return v % self.p;
            }
        }
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn row_axpy_sub(&self, dst: &mut [u64], src: &[u64], factor: &u64) {
        if *factor == 0 {
            return;
        }
        // Subtract by adding the complement, fusing mul+add before one
        // reduction per element.
        let f = self.p - factor;
        if self.small {
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d = self.reduce_small(*d + f.wrapping_mul(*s));
            }
        } else {
            let p = self.p as u128;
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d = ((*d as u128 + f as u128 * *s as u128) % p) as u64;
            }
        }
    }
}

/// Exact rational numbers with arbitrary-precision integer parts.
#[derive(Clone, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_int(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_decimal(&self, num: &str, den: Option<&str>) -> Result<BigRational> {
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer literal: {num:?}")))?;
        let d: BigInt = match den {
            None => BigInt::one(),
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer literal: {d:?}")))?,
        };
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        // Small integers in [-10, 10].
        let v = (rng.next_u64() % 21) as i64 - 10;
        self.from_int(v)
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Splits a coefficient literal that may look like `a/b` and formats it via
/// the field; used by both the parser and tests.
pub(crate) fn parse_coefficient<F: Field>(field: &F, text: &str) -> Result<F::Elem> {
    let (num, den, rest): (&str, Option<&str>, bool);
    match text.split_once('/') {
        None => {
            num = text;
            den = None;
            rest = false;
        }
        Some((a, b)) => {
            num = a;
            den = Some(b);
            rest = b.contains('/');
        }
    }
    if rest {
        return Err(Error::Parse(format!("malformed coefficient: {text:?}")));
    }
    field.from_decimal(num, den)
}

fn fold_decimal_mod(digits: &str, p: u64) -> Result<u64> {
    let (neg, body) = match digits.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, digits),
    };
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer literal: {digits:?}")));
    }
    let p128 = p as u128;
    let mut acc: u128 = 0;
    for b in body.bytes() {
        acc = (acc * 10 + (b - b'0') as u128) % p128;
    }
    let acc = acc as u64;
    Ok(if neg && acc != 0 { p - acc } else { acc })
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    // This base set decides primality exactly below 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(32003));
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(32001));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn config_validation() {
        assert!(FieldConfig::prime_field(DEFAULT_PRIME).validate().is_ok());
        assert!(matches!(
            FieldConfig::prime_field(32001).validate(),
            Err(Error::PrimeOutOfRange(_))
        ));
        assert!(matches!(
            FieldConfig::prime_field(32005).validate(),
            Err(Error::NotPrime(_))
        ));
        assert!(matches!(
            FieldConfig::prime_field(1 << 62).validate(),
            Err(Error::PrimeOutOfRange(_))
        ));
    }

    #[test]
    fn fp_arithmetic_matches_naive() {
        let f = Fp::new(DEFAULT_PRIME).unwrap();
        let p = DEFAULT_PRIME as u128;
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = f.sample(&mut rng);
            let b = f.sample(&mut rng);
            assert_eq!(f.add(&a, &b) as u128, (a as u128 + b as u128) % p);
            assert_eq!(f.mul(&a, &b) as u128, (a as u128 * b as u128) % p);
            assert_eq!(f.add(&f.sub(&a, &b), &b), a);
            if a != 0 {
                let inv = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), 1);
            }
        }
    }

    #[test]
    fn fp_large_prime_path() {
        // A 40-bit prime exercises the non-Barrett branch.
        let p = 1_099_511_627_791u64; // 2^40 + 15
        assert!(is_prime_u64(p));
        let f = Fp::new(p).unwrap();
        let a = p - 1;
        assert_eq!(f.mul(&a, &a), 1); // (-1)^2
        assert_eq!(f.inv(&a).unwrap(), a);
        let mut row = vec![1u64, 2, 3];
        let src = vec![a, a, a];
        f.row_axpy_sub(&mut row, &src, &1);
        assert_eq!(row, vec![2, 3, 4]); // x - (p-1) = x + 1
    }

    #[test]
    fn fp_row_kernel_matches_scalar_ops() {
        let f = Fp::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let factor = f.sample(&mut rng);
        let src: Vec<u64> = (0..64).map(|_| f.sample(&mut rng)).collect();
        let dst0: Vec<u64> = (0..64).map(|_| f.sample(&mut rng)).collect();
        let mut fast = dst0.clone();
        f.row_axpy_sub(&mut fast, &src, &factor);
        let slow: Vec<u64> = dst0
            .iter()
            .zip(src.iter())
            .map(|(d, s)| f.sub(d, &f.mul(&factor, s)))
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn rational_parsing_and_format() {
        let q = Rationals;
        let half = parse_coefficient(&q, "1/2").unwrap();
        assert_eq!(q.format(&half), "1/2");
        let neg = parse_coefficient(&q, "-3/6").unwrap();
        assert_eq!(q.format(&neg), "-1/2");
        assert_eq!(q.add(&half, &neg), q.zero());
        assert!(parse_coefficient(&q, "1/0").is_err());
        assert!(parse_coefficient(&q, "a").is_err());
    }

    #[test]
    fn fp_fractional_coefficient() {
        let f = Fp::new(DEFAULT_PRIME).unwrap();
        let half = parse_coefficient(&f, "1/2").unwrap();
        assert_eq!(f.add(&half, &half), 1);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let f = Fp::new(DEFAULT_PRIME).unwrap();
        let draw = |seed: u64| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..32).map(|_| f.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }
}
