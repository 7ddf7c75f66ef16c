//! Generalized binomial coefficients and the weighted sums built from
//! `t_k(x, d) = d^{-k} C(x,k) C(x+k,k) / C(2k,k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, rat};
use crate::special::binomial_int;

/// `C(x, k) = x(x−1)⋯(x−k+1)/k!` for rational `x`.
pub fn gen_binom(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (x - int(i)) / int(i + 1);
    }
    acc
}

/// The four central-binomial families reachable from `x ∈ {−1/2, −1/3, −1/4, −1/6}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Two,
    Three,
    Four,
    Six,
}

/// Which binomial product the SIX family uses on a corollary's left side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Reading {
    /// `C(4k,2k) C(6k,3k) / C(2k,k)`, as typeset in the corollaries.
    Printed,
    /// `C(6k,3k) C(3k,k) / C(2k,k)`, the product the `x = −1/6` bridge produces.
    Bridge,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Two, Family::Three, Family::Four, Family::Six];

    /// `x₀` with `C(x₀,k) C(x₀+k,k) scale^k / C(2k,k)` equal to the family product.
    pub fn base_point(self) -> BigRational {
        match self {
            Family::Two => rat(-1, 2),
            Family::Three => rat(-1, 3),
            Family::Four => rat(-1, 4),
            Family::Six => rat(-1, 6),
        }
    }

    pub fn scale(self) -> BigRational {
        match self {
            Family::Two => int(-16),
            Family::Three => int(-27),
            Family::Four => int(-64),
            Family::Six => int(-432),
        }
    }

    /// The family's integer-binomial product at `k`.
    pub fn product(self, k: u64, reading: Reading) -> BigRational {
        let b = |n, m| BigRational::from_integer(binomial_int(n, m));
        match (self, reading) {
            (Family::Two, _) => b(2 * k, k),
            (Family::Three, _) => b(3 * k, k),
            (Family::Four, _) => b(4 * k, 2 * k),
            (Family::Six, Reading::Printed) => b(4 * k, 2 * k) * b(6 * k, 3 * k) / b(2 * k, k),
            (Family::Six, Reading::Bridge) => b(6 * k, 3 * k) * b(3 * k, k) / b(2 * k, k),
        }
    }

    /// Coefficients `(c₀, c₂, c₁)` of the corollary weight `c₀ + c₂k² + c₁k`.
    pub fn weight(self, d: &BigRational) -> (BigRational, BigRational, BigRational) {
        let one = BigRational::one();
        match self {
            Family::Two => (one, int(4) - d, (int(8) + d) / int(2)),
            Family::Three => (one, (int(27) - int(4) * d) / int(6), (int(27) + int(2) * d) / int(6)),
            Family::Four => (one, (int(16) - d) / int(3), (int(32) + d) / int(6)),
            Family::Six => (one, (int(108) - d) / int(15), (int(216) + d) / int(30)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Two => "TWO",
            Family::Three => "THREE",
            Family::Four => "FOUR",
            Family::Six => "SIX",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TWO" => Ok(Family::Two),
            "THREE" => Ok(Family::Three),
            "FOUR" => Ok(Family::Four),
            "SIX" => Ok(Family::Six),
            _ => Err(Error::UnknownStatement(s.to_string())),
        }
    }
}

/// `(family product, C(x₀,k) C(x₀+k,k) scale^k / C(2k,k))`.
///
/// For [`Family::Six`] the product side uses the bridge reading.
pub fn bridge(f: Family, k: u64) -> (BigRational, BigRational) {
    let x = f.base_point();
    let gen = gen_binom(&x, k) * gen_binom(&(&x + int(k)), k) * num_traits::pow(f.scale(), k as usize)
        / BigRational::from_integer(binomial_int(2 * k, k));
    (f.product(k, Reading::Bridge), gen)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SumVariant {
    /// weight `x²+x−(1+4d)k²−(1−2d)k`, denominator `C(2k,k)`
    Full,
    /// weight `x²+x−(1+4d)k²−(1+2d)k`, denominator `(2k+1)C(2k,k)`
    Odd,
    /// weight `x²+x+2d−(1+4d)k²−(1+2d)k`, denominator `(k+1)C(2k,k)`
    Catalan,
}

impl SumVariant {
    pub const ALL: [SumVariant; 3] = [SumVariant::Full, SumVariant::Odd, SumVariant::Catalan];

    fn weight(self, x: &BigRational, d: &BigRational, k: u64) -> BigRational {
        let k = int(k);
        let base = x * x + x - (int(1) + int(4) * d) * &k * &k;
        match self {
            SumVariant::Full => base - (int(1) - int(2) * d) * k,
            SumVariant::Odd => base - (int(1) + int(2) * d) * k,
            SumVariant::Catalan => base + int(2) * d - (int(1) + int(2) * d) * k,
        }
    }

    fn extra_denominator(self, k: u64) -> BigRational {
        match self {
            SumVariant::Full => BigRational::one(),
            SumVariant::Odd => int(2 * k + 1),
            SumVariant::Catalan => int(k + 1),
        }
    }
}

fn nonzero(d: &BigRational) -> Result<()> {
    if d.is_zero() {
        Err(Error::ZeroD)
    } else {
        Ok(())
    }
}

/// Iterator over `t_k = d^{-k} C(x,k) C(x+k,k) / C(2k,k)` for `k = 0, 1, …`,
/// advanced with `t_{k+1} = t_k (x−k)(x+k+1) / ((2k+1)(2k+2) d)`.
struct TermRatio<'a> {
    x: &'a BigRational,
    d: &'a BigRational,
    k: u64,
    term: BigRational,
}

impl<'a> TermRatio<'a> {
    fn new(x: &'a BigRational, d: &'a BigRational) -> Self {
        TermRatio {
            x,
            d,
            k: 0,
            term: BigRational::one(),
        }
    }
}

impl Iterator for TermRatio<'_> {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        let out = self.term.clone();
        let k = self.k;
        if !self.term.is_zero() {
            let num = (self.x - int(k)) * (self.x + int(k + 1));
            let den = int((2 * k + 1) * (2 * k + 2)) * self.d;
            self.term = &self.term * num / den;
        }
        self.k += 1;
        Some(out)
    }
}

/// `Σ_{k=0}^{n−1} weight_v(k) · t_k / extra_v(k)`.
pub fn weighted_sum(v: SumVariant, x: &BigRational, d: &BigRational, n: u64) -> Result<BigRational> {
    nonzero(d)?;
    let mut acc = BigRational::zero();
    for (k, t) in TermRatio::new(x, d).take(n as usize).enumerate() {
        let k = k as u64;
        if t.is_zero() {
            continue;
        }
        acc += v.weight(x, d, k) * t / v.extra_denominator(k);
    }
    Ok(acc)
}

/// FULL, ODD and CATALAN sums (in [`SumVariant::ALL`] order) for every upper
/// limit in `limits`, from one pass over the terms. `limits` must be ascending.
pub fn weighted_sums_at(x: &BigRational, d: &BigRational, limits: &[u64]) -> Result<Vec<[BigRational; 3]>> {
    nonzero(d)?;
    debug_assert!(limits.windows(2).all(|w| w[0] <= w[1]));
    let mut acc: [BigRational; 3] = Default::default();
    let mut out = Vec::with_capacity(limits.len());
    let mut pending = limits.iter().peekable();
    let last = limits.last().copied().unwrap_or(0);
    let mut terms = TermRatio::new(x, d);
    for k in 0..=last {
        while pending.next_if(|&&n| n == k).is_some() {
            out.push(acc.clone());
        }
        if k == last {
            break;
        }
        let t = terms.next().expect("endless iterator");
        if t.is_zero() {
            continue;
        }
        for (slot, v) in acc.iter_mut().zip(SumVariant::ALL) {
            *slot += v.weight(x, d, k) * &t / v.extra_denominator(k);
        }
    }
    Ok(out)
}

/// Unweighted `Σ_{k=0}^{n−1} t_k`.
pub fn plain_sum(x: &BigRational, d: &BigRational, n: u64) -> Result<BigRational> {
    nonzero(d)?;
    Ok(TermRatio::new(x, d)
        .take(n as usize)
        .fold(BigRational::zero(), |acc, t| acc + t))
}

/// Closed form of [`weighted_sum`]:
/// FULL `2n(2n−1)·P`, ODD `2n·P`, CATALAN `2d + 2(2n−1)·P`, with
/// `P = C(x,n) C(x+n,n) / (d^{n−1} C(2n,n))`.
pub fn closed_form(v: SumVariant, x: &BigRational, d: &BigRational, n: u64) -> Result<BigRational> {
    nonzero(d)?;
    let d_pow = if n >= 1 {
        num_traits::pow(d.clone(), (n - 1) as usize)
    } else {
        d.recip()
    };
    let p = gen_binom(x, n) * gen_binom(&(x + int(n)), n)
        / (d_pow * BigRational::from_integer(binomial_int(2 * n, n)));
    let n2 = BigRational::from_integer(BigInt::from(2 * n));
    Ok(match v {
        SumVariant::Full => &n2 * (&n2 - int(1)) * p,
        SumVariant::Odd => n2 * p,
        SumVariant::Catalan => int(2) * d + int(2) * (n2 - int(1)) * p,
    })
}

/// `Σ_{k=0}^{n−1} (c₀ + c₂k² + c₁k) · product_f(k) / d^k`.
pub fn corollary_lhs(f: Family, d: &BigRational, n: u64, reading: Reading) -> Result<BigRational> {
    nonzero(d)?;
    let (c0, c2, c1) = f.weight(d);
    let inv_d = d.recip();
    let mut d_pow = BigRational::one();
    let mut acc = BigRational::zero();
    for k in 0..n {
        let kk = int(k);
        let w = &c0 + &c2 * &kk * &kk + &c1 * &kk;
        acc += w * f.product(k, reading) * &d_pow;
        d_pow *= &inv_d;
    }
    Ok(acc)
}
