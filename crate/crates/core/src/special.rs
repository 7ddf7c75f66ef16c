//! Harmonic numbers, Fermat quotients, Bernoulli and Euler numbers and
//! polynomials, all as exact rationals.
//!
//! Bernoulli and Euler numbers live in process-wide tables that only ever
//! grow. Reads take a shared lock; a miss takes the write lock once and
//! extends the table up to the requested index. [`warm_up`] lets a caller
//! build the tables single-threaded before fanning out.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::ensure_odd_prime;

/// `Σ_{k=1}^{n} 1/k^order`; the empty sum is zero.
pub fn harmonic(n: u64, order: u32) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, k| {
        let kp = num_traits::pow(BigInt::from(k), order as usize);
        acc + BigRational::new(BigInt::one(), kp)
    })
}

/// `H(1,1;n) = Σ_{k=1}^{n} H_{k-1}/k`.
pub fn h11(n: u64) -> BigRational {
    let mut h = BigRational::zero();
    let mut acc = BigRational::zero();
    for k in 1..=n {
        let inv = BigRational::new(BigInt::one(), BigInt::from(k));
        acc += &h * &inv;
        h += inv;
    }
    acc
}

/// `H_k`, `H_k^{(2)}` and `H(1,1;k)` for every `0 <= k <= n`.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    h1: Vec<BigRational>,
    h2: Vec<BigRational>,
    h11: Vec<BigRational>,
}

impl HarmonicTable {
    pub fn new(n: u64) -> Self {
        let len = n as usize + 1;
        let mut h1 = Vec::with_capacity(len);
        let mut h2 = Vec::with_capacity(len);
        let mut h11 = Vec::with_capacity(len);
        h1.push(BigRational::zero());
        h2.push(BigRational::zero());
        h11.push(BigRational::zero());
        for k in 1..=n {
            let inv = BigRational::new(BigInt::one(), BigInt::from(k));
            let prev = &h1[h1.len() - 1];
            h11.push(&h11[h11.len() - 1] + prev * &inv);
            h2.push(&h2[h2.len() - 1] + &inv * &inv);
            h1.push(prev + inv);
        }
        HarmonicTable { h1, h2, h11 }
    }

    pub fn upper(&self) -> u64 {
        (self.h1.len() - 1) as u64
    }

    pub fn h(&self, k: u64) -> &BigRational {
        &self.h1[k as usize]
    }

    pub fn h2(&self, k: u64) -> &BigRational {
        &self.h2[k as usize]
    }

    pub fn h11(&self, k: u64) -> &BigRational {
        &self.h11[k as usize]
    }
}

static HARMONIC: RwLock<Option<Arc<HarmonicTable>>> = RwLock::new(None);

/// A process-wide [`HarmonicTable`] covering at least `0..=n`.
pub fn shared_harmonic(n: u64) -> Arc<HarmonicTable> {
    if let Some(t) = HARMONIC.read().expect("harmonic lock").as_ref() {
        if t.upper() >= n {
            return Arc::clone(t);
        }
    }
    let mut slot = HARMONIC.write().expect("harmonic lock");
    match slot.as_ref() {
        Some(t) if t.upper() >= n => Arc::clone(t),
        current => {
            let upper = current.map_or(n, |t| n.max(2 * t.upper()));
            let t = Arc::new(HarmonicTable::new(upper));
            *slot = Some(Arc::clone(&t));
            t
        }
    }
}

/// `q_p(a) = (a^{p-1} - 1)/p`.
pub fn fermat_quotient(a: i64, p: u64) -> Result<BigInt> {
    ensure_odd_prime(p)?;
    if (a as i128).rem_euclid(p as i128) == 0 {
        return Err(Error::NotCoprime { a, p });
    }
    let pow: BigInt = num_traits::pow(BigInt::from(a), (p - 1) as usize);
    let (q, r) = (pow - BigInt::one()).div_rem(&BigInt::from(p));
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Integer binomial `C(n, k)`, zero when `k > n`.
pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());
static EULER: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

fn extend_bernoulli(table: &mut Vec<BigRational>, n: usize) {
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= n {
        // Σ_{k=0}^{m} C(m+1,k) B_k = 0, solved for B_m.
        let m = table.len() as u64;
        if m >= 3 && m % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        let mut binom = BigInt::one();
        let mut sum = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            let k = k as u64;
            if !b.is_zero() {
                sum += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        table.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
}

fn extend_euler(table: &mut Vec<BigInt>, n: usize) {
    while table.len() <= n {
        let m = table.len() as u64;
        if m == 0 {
            table.push(BigInt::one());
            continue;
        }
        if m % 2 == 1 {
            table.push(BigInt::zero());
            continue;
        }
        // Σ_{j=0}^{m/2} C(m,2j) E_{2j} = 0, solved for E_m.
        let mut binom = BigInt::one();
        let mut sum = BigInt::zero();
        for (k, e) in table.iter().enumerate() {
            let k = k as u64;
            if k.is_multiple_of(2) {
                sum += e * &binom;
            }
            binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
        }
        table.push(-sum);
    }
}

/// Build the shared Bernoulli and Euler tables up to `n`.
pub fn warm_up(n: u64) {
    shared_harmonic(2 * n);
    bernoulli(n);
    euler_number(n);
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: u64) -> BigRational {
    let idx = n as usize;
    if let Some(b) = BERNOULLI.read().expect("bernoulli lock").get(idx) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().expect("bernoulli lock");
    extend_bernoulli(&mut table, idx);
    table[idx].clone()
}

/// `B_0 … B_n` as an owned table.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(n: u64) -> Self {
        bernoulli(n);
        let table = BERNOULLI.read().expect("bernoulli lock");
        BernoulliTable {
            values: table[..=n as usize].to_vec(),
        }
    }

    pub fn get(&self, k: u64) -> &BigRational {
        &self.values[k as usize]
    }

    pub fn upper(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// Re-checks `Σ_{k<m} C(m,k) B_k = 0` for `2 <= m <= n+1`.
    pub fn recurrence_holds(&self) -> bool {
        let n = self.upper();
        (2..=n + 1).all(|m| {
            (0..m)
                .map(|k| self.get(k) * BigRational::from_integer(binomial_int(m, k)))
                .fold(BigRational::zero(), |a, b| a + b)
                .is_zero()
        })
    }
}

/// `B_n(x) = Σ_{k=0}^{n} C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: u64, x: &BigRational) -> BigRational {
    bernoulli(n);
    let table = BERNOULLI.read().expect("bernoulli lock");
    let mut binom = BigInt::one();
    let mut acc = BigRational::zero();
    // Horner in x: start from the k = 0 coefficient.
    for k in 0..=n {
        acc = acc * x + &table[k as usize] * BigRational::from_integer(binom.clone());
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    acc
}

/// Euler number `E_n`, i.e. `n!·[t^n] sech t`.
pub fn euler_number(n: u64) -> BigInt {
    let idx = n as usize;
    if let Some(e) = EULER.read().expect("euler lock").get(idx) {
        return e.clone();
    }
    let mut table = EULER.write().expect("euler lock");
    extend_euler(&mut table, idx);
    table[idx].clone()
}

#[derive(Debug, Clone)]
pub struct EulerTable {
    values: Vec<BigInt>,
}

impl EulerTable {
    pub fn new(n: u64) -> Self {
        euler_number(n);
        let table = EULER.read().expect("euler lock");
        EulerTable {
            values: table[..=n as usize].to_vec(),
        }
    }

    pub fn get(&self, k: u64) -> &BigInt {
        &self.values[k as usize]
    }
}

/// Euler polynomial through the half-shift expansion
/// `E_n(x) = Σ C(n,k) (E_k / 2^k) (x − 1/2)^{n−k}`.
pub fn euler_poly(n: u64, x: &BigRational) -> BigRational {
    euler_number(n);
    let table = EULER.read().expect("euler lock");
    let shift = x - BigRational::new(BigInt::one(), BigInt::from(2));
    let mut binom = BigInt::one();
    let mut acc = BigRational::zero();
    for k in 0..=n {
        let e = &table[k as usize];
        let coeff = if e.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(e * &binom, BigInt::one() << k as usize)
        };
        acc = acc * &shift + coeff;
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{congruent, PrimeContext};
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    /// Akiyama–Tanigawa; yields B_1 = +1/2, identical elsewhere.
    fn bernoulli_oracle(n: usize) -> BigRational {
        let mut a: Vec<BigRational> = (0..=n).map(|j| rat(1, j as i64 + 1)).collect();
        for m in 1..=n {
            for j in 0..=(n - m) {
                a[j] = int(j as i64 + 1) * (&a[j] - &a[j + 1]);
            }
        }
        a[0].clone()
    }

    /// `n!·[t^n]` of `2e^t / (1 + e^{2t})` by truncated power-series division.
    fn euler_series_oracle(n: usize) -> Vec<BigRational> {
        let mut fact = vec![BigInt::one()];
        for j in 1..=n {
            let next = &fact[j - 1] * BigInt::from(j);
            fact.push(next);
        }
        let num: Vec<BigRational> = (0..=n)
            .map(|j| BigRational::new(BigInt::from(2), fact[j].clone()))
            .collect();
        let den: Vec<BigRational> = (0..=n)
            .map(|j| {
                let two_j = BigRational::new(BigInt::one() << j, fact[j].clone());
                if j == 0 {
                    two_j + int(1)
                } else {
                    two_j
                }
            })
            .collect();
        let mut q: Vec<BigRational> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut s = num[j].clone();
            for i in 0..j {
                s -= &q[i] * &den[j - i];
            }
            q.push(s / &den[0]);
        }
        q.into_iter()
            .enumerate()
            .map(|(j, c)| c * BigRational::from_integer(fact[j].clone()))
            .collect()
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0, 1), int(0));
        assert_eq!(harmonic(4, 1), rat(25, 12));
        assert_eq!(harmonic(3, 2), rat(49, 36));
    }

    #[test]
    fn h11_examples() {
        assert_eq!(h11(1), int(0));
        assert_eq!(h11(3), int(1));
        let h = harmonic(10, 1);
        let closed = (&h * &h - harmonic(10, 2)) / int(2);
        assert_eq!(h11(10), closed);
        assert_eq!(closed, rat(177_133, 50_400));
    }

    #[test]
    fn harmonic_table_invariants() {
        let t = HarmonicTable::new(40);
        assert_eq!(t.upper(), 40);
        assert!(t.h(0).is_zero() && t.h2(0).is_zero() && t.h11(0).is_zero());
        for k in 1..=40 {
            assert_eq!(t.h(k) - t.h(k - 1), rat(1, k as i64));
            assert_eq!(t.h11(k), &((t.h(k) * t.h(k) - t.h2(k)) / int(2)));
            assert_eq!(t.h2(k), &harmonic(k, 2));
        }
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(fermat_quotient(1, 7).unwrap(), BigInt::zero());
        assert_eq!(fermat_quotient(2, 5).unwrap(), BigInt::from(3));
        assert_eq!(fermat_quotient(2, 3).unwrap(), BigInt::from(1));
        assert_eq!(fermat_quotient(10, 5), Err(Error::NotCoprime { a: 10, p: 5 }));
        assert_eq!(fermat_quotient(-3, 5).unwrap(), BigInt::from(16));
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for n in 2..=30 {
            assert_eq!(bernoulli(n), bernoulli_oracle(n as usize), "B_{n}");
        }
    }

    #[test]
    fn bernoulli_table_recurrence() {
        let t = BernoulliTable::new(21);
        assert!(t.recurrence_holds());
        for j in 1..=10 {
            assert!(t.get(2 * j + 1).is_zero());
        }
    }

    #[test]
    fn bernoulli_poly_examples() {
        for n in 0..=12 {
            assert_eq!(bernoulli_poly(n, &int(0)), bernoulli(n));
        }
        assert_eq!(bernoulli_poly(1, &rat(1, 3)), rat(-1, 6));
        assert_eq!(bernoulli_poly(2, &rat(1, 6)), rat(1, 36));
    }

    #[test]
    fn euler_numbers_match_series_division() {
        let oracle = euler_series_oracle(16);
        for (n, e) in oracle.iter().enumerate() {
            assert_eq!(&BigRational::from_integer(euler_number(n as u64)), e, "E_{n}");
        }
        assert_eq!(euler_number(2), BigInt::from(-1));
        assert_eq!(euler_number(6), BigInt::from(-61));
        let t = EulerTable::new(26);
        for j in 0..=6u64 {
            assert!(t.get(4 * j) > &BigInt::zero());
            assert!(t.get(4 * j + 2) < &BigInt::zero());
            assert!(t.get(2 * j + 1).is_zero());
        }
    }

    #[test]
    fn euler_poly_examples() {
        assert_eq!(euler_poly(0, &rat(5, 7)), int(1));
        assert_eq!(euler_poly(1, &rat(3, 4)), rat(1, 4));
        for n in 0..=8 {
            let expect = BigRational::new(euler_number(n), BigInt::one() << n as usize);
            assert_eq!(euler_poly(n, &rat(1, 2)), expect);
        }
        // E_2(x) = x^2 - x
        assert_eq!(euler_poly(2, &rat(3, 5)), rat(-6, 25));
    }

    #[test]
    fn harmonic_reflection_mod_p2() {
        for p in [5u64, 7, 11, 13, 17] {
            let t = HarmonicTable::new(p - 1);
            let c2 = PrimeContext::new(p, 2).unwrap();
            let c1 = PrimeContext::new(p, 1).unwrap();
            for k in 0..p {
                let rhs = t.h(k) + int(p as i64) * t.h2(k);
                assert!(congruent(t.h(p - 1 - k), &rhs, c2), "p={p} k={k}");
                assert!(congruent(t.h2(p - 1 - k), &-t.h2(k), c1), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn bernoulli_denominators_avoid_small_p() {
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            for n in 0..=p - 2 {
                let b = bernoulli(n);
                assert!(!b.denom().is_multiple_of(&BigInt::from(p)), "B_{n} at p={p}");
            }
        }
    }

    proptest! {
        #[test]
        fn bernoulli_difference(n in 1u64..=10, a in -40i64..40, b in 1i64..20) {
            let x = rat(a, b);
            let lhs = bernoulli_poly(n, &(&x + int(1))) - bernoulli_poly(n, &x);
            let rhs = int(n as i64) * num_traits::pow(x, (n - 1) as usize);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_reflection(n in 0u64..=10, a in -40i64..40, b in 1i64..20) {
            let x = rat(a, b);
            let lhs = euler_poly(n, &(int(1) - &x));
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(lhs, sign * euler_poly(n, &x));
        }
    }
}
