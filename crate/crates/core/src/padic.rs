//! Exact p-adic bookkeeping on top of arbitrary-precision rationals.
//!
//! Every congruence in this crate is a statement about rationals: `a ≡ b (mod p^e)`
//! means `v_p(a - b) >= e`. Sides are never reduced to residues before they are
//! compared, because sub-terms of the sums carry powers of `p` in their
//! denominators that only cancel in the total.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::format_rational;

/// Witnesses that make Miller–Rabin deterministic for every `u64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Fails unless `p` is an odd prime.
pub fn ensure_odd_prime(p: u64) -> Result<()> {
    if p >= 3 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// An odd prime together with the exponent of the modulus `p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    e: u32,
}

impl PrimeContext {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        ensure_odd_prime(p)?;
        if e == 0 {
            return Err(Error::InvalidExponent);
        }
        Ok(Self { p, e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// `p^e` as a big integer.
    pub fn modulus(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.e as usize)
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, e: u32) -> Result<Self> {
        Self::new(self.p, e)
    }
}

impl fmt::Display for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

/// A value in `[0, p^e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    ctx: PrimeContext,
}

impl Residue {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    fn from_int(n: &BigInt, ctx: PrimeContext) -> Self {
        let r = n.mod_floor(&ctx.modulus());
        Residue {
            value: r.to_biguint().expect("mod_floor is nonnegative"),
            ctx,
        }
    }

    /// Sum in `Z/p^eZ`. Panics if the contexts differ.
    pub fn add(&self, other: &Residue) -> Residue {
        assert_eq!(self.ctx, other.ctx, "residues from different contexts");
        let sum = BigInt::from(&self.value + &other.value);
        Residue::from_int(&sum, self.ctx)
    }

    /// Product in `Z/p^eZ`. Panics if the contexts differ.
    pub fn mul(&self, other: &Residue) -> Residue {
        assert_eq!(self.ctx, other.ctx, "residues from different contexts");
        let prod = BigInt::from(&self.value * &other.value);
        Residue::from_int(&prod, self.ctx)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.ctx)
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational; negative when `p` divides the denominator.
pub fn vp(q: &BigRational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let num = vp_int(q.numer(), p)? as i64;
    let den = vp_int(q.denom(), p)? as i64;
    Ok(num - den)
}

/// Reduce a `p`-integral rational modulo `p^e`.
pub fn residue(q: &BigRational, ctx: PrimeContext) -> Result<Residue> {
    if q.is_zero() {
        return Ok(Residue {
            value: BigUint::zero(),
            ctx,
        });
    }
    let v = vp(q, ctx.p())?;
    if v < 0 {
        return Err(Error::NegativeValuation {
            value: format_rational(q),
            p: ctx.p(),
            valuation: v,
        });
    }
    let m = ctx.modulus();
    let inv = q
        .denom()
        .mod_floor(&m)
        .modinv(&m)
        .expect("denominator is a unit once v_p >= 0");
    Ok(Residue::from_int(&(q.numer() * inv), ctx))
}

/// `a ≡ b (mod p^e)` in the rational sense: `a == b` or `v_p(a - b) >= e`.
pub fn congruent(a: &BigRational, b: &BigRational, ctx: PrimeContext) -> bool {
    if a == b {
        return true;
    }
    let diff = a - b;
    vp(&diff, ctx.p()).map(|v| v >= ctx.exponent() as i64).unwrap_or(true)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// `x = residue_part + p·m` with `residue_part = ⟨x⟩_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub residue_part: u64,
    pub m: BigRational,
}

pub fn decompose(x: &BigRational, p: u64) -> Result<CanonicalDecomposition> {
    ensure_odd_prime(p)?;
    let pb = BigInt::from(p);
    if x.denom().is_multiple_of(&pb) {
        return Err(Error::NotPAdicInteger {
            x: format_rational(x),
            p,
        });
    }
    let inv = x
        .denom()
        .mod_floor(&pb)
        .modinv(&pb)
        .expect("denominator coprime to p");
    let r = (x.numer() * inv).mod_floor(&pb);
    let residue_part = r.to_u64().expect("residue below p fits in u64");
    let m = (x - BigRational::from_integer(r)) / BigRational::from_integer(pb);
    Ok(CanonicalDecomposition { residue_part, m })
}

/// True when `q` is nonzero with `v_p(q) = 0`.
pub fn is_unit(q: &BigRational, p: u64) -> bool {
    matches!(vp(q, p), Ok(0))
}

/// Small helper: `p^k` as a rational (`k` may be negative).
pub fn p_power(p: u64, k: i32) -> BigRational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// The unit part `q·p^{-v_p(q)}` of a nonzero rational.
pub fn unit_part(q: &BigRational, p: u64) -> Result<BigRational> {
    let v = vp(q, p)?;
    Ok(q * p_power(p, -(v as i32)))
}
