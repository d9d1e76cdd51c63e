//! Arithmetic in a prime field `F_p` for an odd prime `p < 2^62`.
//!
//! Elements are plain `u64` residues in `[0, p)`; the [`Fp`] context carries
//! the modulus. Everything is exact: no coefficient growth, no rounding, and
//! every nonzero element is invertible.

use crate::rng::SeedStream;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// Prime field context. All element operations reduce into `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Field with the given modulus.
    ///
    /// Panics unless `p` is an odd prime in `[3, 2^62)`; callers validating
    /// user input should check with [`is_prime_u64`] first.
    pub fn new(p: u64) -> Self {
        assert!(p >= 3 && p < (1 << 62) && p % 2 == 1, "modulus out of range");
        assert!(is_prime_u64(p), "modulus {p} is not prime");
        Fp { p }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // p < 2^62, no overflow
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { self.p - (b - a) }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat: `a^(p-2)`.
    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a % self.p == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn elem(&self, c: i128) -> u64 {
        let p = self.p as i128;
        let mut r = c % p;
        if r < 0 {
            r += p;
        }
        r as u64
    }

    /// Uniform residue.
    pub fn random_elem(&self, stream: &mut SeedStream) -> u64 {
        stream.below(self.p)
    }

    /// Uniform nonzero residue.
    pub fn random_nonzero(&self, stream: &mut SeedStream) -> u64 {
        stream.below_nonzero(self.p)
    }
}

/// One strong-probable-prime round: does `n` pass base `a`?
///
/// `n` must be odd and `> 2`. Witness arithmetic runs in `u128`, so any
/// `u64` modulus is handled exactly.
pub fn strong_probable_prime(n: u64, a: u64) -> bool {
    debug_assert!(n > 2 && n % 2 == 1);
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = powmod(a, d);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod(x, x);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic Miller-Rabin, valid for every `n < 2^64` with the first
/// twelve prime bases.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    BASES.iter().all(|&b| strong_probable_prime(n, b))
}

/// Deterministic random prime with exactly `bits` bits, `3 <= bits <= 62`.
///
/// Draws odd candidates in `[2^(bits-1), 2^bits)` from the stream until one
/// passes [`is_prime_u64`]; by Bertrand there is always one to find.
pub fn random_prime(bits: u32, stream: &mut SeedStream) -> u64 {
    assert!((3..=62).contains(&bits), "prime size out of range");
    let lo = 1u64 << (bits - 1);
    loop {
        let c = lo + stream.below(lo) | 1;
        if is_prime_u64(c) {
            return c;
        }
    }
}
