//! One executable check per statement.
//!
//! Congruence statements evaluate both sides as exact rationals into an
//! [`Evaluation`], which is then reduced to residue evidence in a
//! [`VerificationRecord`]. Exact identities produce an [`IdentityRecord`]
//! carrying the rationals themselves. Moduli come from the statement's
//! [`ExponentRule`] and never from what the data happens to satisfy.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::binomial::{closed_form, corollary_lhs, gen_binom, plain_sum, weighted_sum, weighted_sums_at, Family, Reading, SumVariant};
use crate::error::{Error, Result};
use crate::padic::{decompose, ensure_odd_prime, is_unit, p_power, residue, unit_part, vp, PrimeContext};
use crate::rational::{int, rat, serde_rational};
use crate::special::{bernoulli, bernoulli_poly, binomial_int, euler_number, euler_poly, fermat_quotient, shared_harmonic};

macro_rules! statements {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Every statement the verifier knows how to check.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum StatementId {
            $($variant),*
        }

        impl StatementId {
            pub const ALL: &'static [StatementId] = &[$(StatementId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(StatementId::$variant => $name),*
                }
            }
        }

        impl FromStr for StatementId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok(StatementId::$variant),)*
                    other => Err(Error::UnknownStatement(other.to_string())),
                }
            }
        }
    };
}

statements! {
    Lemma2_1 => "LEMMA_2_1",
    Theorem1_1 => "THEOREM_1_1",
    Theorem1_3 => "THEOREM_1_3",
    Theorem1_5 => "THEOREM_1_5",
    CorC1 => "COR_C1",
    CorC2 => "COR_C2",
    CorC3 => "COR_C3",
    CorC4 => "COR_C4",
    CorC5 => "COR_C5",
    CorC6 => "COR_C6",
    CorC7 => "COR_C7",
    CorC8 => "COR_C8",
    AuxWolstenholme => "AUX_WOLSTENHOLME",
    AuxCarlitz => "AUX_CARLITZ",
    AuxHalfHarmonic => "AUX_HALF_HARMONIC",
    AuxHalfHarmonic2 => "AUX_HALF_HARMONIC2",
    AuxLemma31H3 => "AUX_LEMMA31_H3",
    AuxLemma31H4 => "AUX_LEMMA31_H4",
    AuxLemma31H6 => "AUX_LEMMA31_H6",
    AuxLemma31H3_2 => "AUX_LEMMA31_H3_2",
    AuxLemma31H4_2 => "AUX_LEMMA31_H4_2",
    AuxLemma31H6_2 => "AUX_LEMMA31_H6_2",
    AuxProductL1 => "AUX_PRODUCT_L1",
    AuxSpecializationL3 => "AUX_SPECIALIZATION_L3",
    AuxReflectH => "AUX_REFLECT_H",
    AuxReflectH2 => "AUX_REFLECT_H2",
    AuxH2p3 => "AUX_H_2P3",
    AuxH2p3_2 => "AUX_H_2P3_2",
    BgZps => "BG_ZPS",
    BgSunD0 => "BG_SUN_D0",
    BgSunD1 => "BG_SUN_D1",
    BgSunDm1 => "BG_SUN_DM1",
    BgMt => "BG_MT",
    BgWangHan => "BG_WANG_HAN",
    BgMao => "BG_MAO",
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for StatementId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for StatementId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How a statement picks its modulus exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentRule {
    /// Exact rational equality.
    Exact,
    Fixed(u32),
    /// `p⁴` if `⟨x⟩_p < (p−1)/2`, `p⁵` if equal, `p²` if greater.
    HalfRangeTrichotomy,
    /// `p⁴` when `p ≡ 1 (mod modulus)`, `p²` otherwise.
    ResidueClass { modulus: u64 },
}

/// Which optional inputs a statement consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamNeeds {
    pub prime: bool,
    pub x: bool,
    pub d: bool,
    pub k: bool,
    pub n: bool,
}

impl StatementId {
    pub fn exponent_rule(self) -> ExponentRule {
        use StatementId::*;
        match self {
            Lemma2_1 | Theorem1_5 | AuxSpecializationL3 => ExponentRule::Exact,
            Theorem1_1 | CorC1 | CorC2 | CorC3 | CorC4 | AuxCarlitz => ExponentRule::Fixed(4),
            Theorem1_3 => ExponentRule::HalfRangeTrichotomy,
            CorC5 => ExponentRule::Fixed(5),
            CorC6 => ExponentRule::ResidueClass { modulus: 3 },
            CorC7 => ExponentRule::ResidueClass { modulus: 4 },
            CorC8 => ExponentRule::ResidueClass { modulus: 6 },
            AuxWolstenholme | AuxProductL1 | BgMt => ExponentRule::Fixed(3),
            AuxHalfHarmonic | AuxLemma31H3 | AuxLemma31H4 | AuxLemma31H6 | AuxReflectH | AuxH2p3 | BgWangHan
            | BgMao => ExponentRule::Fixed(2),
            AuxHalfHarmonic2 | AuxLemma31H3_2 | AuxLemma31H4_2 | AuxLemma31H6_2 | AuxReflectH2 | AuxH2p3_2
            | BgZps | BgSunD0 | BgSunD1 | BgSunDm1 => ExponentRule::Fixed(1),
        }
    }

    pub fn needs(self) -> ParamNeeds {
        use StatementId::*;
        let none = ParamNeeds {
            prime: true,
            x: false,
            d: false,
            k: false,
            n: false,
        };
        match self {
            Lemma2_1 | Theorem1_5 => ParamNeeds {
                prime: false,
                x: true,
                d: true,
                n: true,
                ..none
            },
            Theorem1_1 | Theorem1_3 | AuxSpecializationL3 => ParamNeeds { x: true, d: true, ..none },
            CorC1 | CorC2 | CorC3 | CorC4 | CorC5 | CorC6 | CorC7 | CorC8 => ParamNeeds { d: true, ..none },
            AuxProductL1 | BgWangHan | BgMao => ParamNeeds { x: true, ..none },
            AuxReflectH | AuxReflectH2 => ParamNeeds { k: true, ..none },
            _ => none,
        }
    }

    pub fn is_identity(self) -> bool {
        self.exponent_rule() == ExponentRule::Exact
    }

    /// Smallest prime the statement is checked at.
    pub fn min_prime(self) -> u64 {
        use StatementId::*;
        match self {
            Lemma2_1 | Theorem1_5 => 0,
            Theorem1_1 | Theorem1_3 | AuxCarlitz | AuxHalfHarmonic | AuxSpecializationL3 | BgWangHan | BgMao => 3,
            CorC1 | CorC2 | CorC3 | CorC5 | CorC6 | CorC7 | AuxLemma31H4 | AuxLemma31H6 | AuxLemma31H4_2
            | AuxLemma31H6_2 => 5,
            AuxWolstenholme | AuxHalfHarmonic2 | AuxProductL1 | AuxReflectH | AuxReflectH2 | BgSunD0
            | BgSunD1 | BgSunDm1 | BgMt => 5,
            CorC4 | CorC8 | AuxLemma31H3 | AuxLemma31H3_2 | AuxH2p3 | AuxH2p3_2 | BgZps => 7,
        }
    }

    fn range_reason(self) -> &'static str {
        use StatementId::*;
        match self {
            CorC4 | CorC8 => "weight coefficients have denominators 15 and 30",
            AuxLemma31H3 | AuxLemma31H3_2 | AuxH2p3 | AuxH2p3_2 => "constants 1/10, 1/15, 1/30 are not p-integral",
            BgZps => "right side divides by 5",
            BgSunD0 | BgSunD1 | BgSunDm1 => "(4/27)^k needs 3 invertible",
            CorC1 | CorC2 | CorC3 | CorC5 | CorC6 | CorC7 => "stated for p > 3",
            AuxLemma31H4 | AuxLemma31H6 | AuxLemma31H4_2 | AuxLemma31H6_2 => "stated for p > 3",
            _ => "needs H_{p-1} ≡ 0 (mod p^2), i.e. p >= 5",
        }
    }

    /// Errors with `OutOfRangePrime` / `WrongResidueClass` when `p` is outside the statement's domain.
    pub fn check_prime(self, p: u64) -> Result<()> {
        ensure_odd_prime(p)?;
        if p < self.min_prime() {
            return Err(Error::OutOfRangePrime {
                statement: self.name().to_string(),
                p,
                reason: self.range_reason().to_string(),
            });
        }
        if matches!(self, StatementId::AuxH2p3 | StatementId::AuxH2p3_2) && p % 3 != 2 {
            return Err(Error::WrongResidueClass {
                statement: self.name().to_string(),
                p,
                reason: "(2p-1)/3 is an integer only when p ≡ 2 (mod 3)".to_string(),
            });
        }
        Ok(())
    }
}

/// Optional inputs to a check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub x: Option<BigRational>,
    pub d: Option<BigRational>,
    pub k: Option<u64>,
    pub n: Option<u64>,
}

impl Params {
    fn x(&self, id: StatementId) -> Result<&BigRational> {
        self.x.as_ref().ok_or(Error::MissingParameter {
            statement: id.name().to_string(),
            param: "x",
        })
    }

    fn d(&self, id: StatementId) -> Result<&BigRational> {
        self.d.as_ref().ok_or(Error::MissingParameter {
            statement: id.name().to_string(),
            param: "d",
        })
    }
}

/// Both sides of a congruence, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub statement: StatementId,
    pub p: u64,
    pub exponent: u32,
    pub case: Option<String>,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// A second reading of the same statement (e.g. the typeset formula when it differs).
    pub alternate: Option<AlternateSides>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternateSides {
    pub reading: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

fn diff_valuation(a: &BigRational, b: &BigRational, p: u64) -> Option<i64> {
    if a == b {
        None
    } else {
        Some(vp(&(a - b), p).expect("nonzero difference"))
    }
}

fn passes(valuation: Option<i64>, e: u32) -> bool {
    valuation.is_none_or(|v| v >= e as i64)
}

impl Evaluation {
    pub fn context(&self) -> PrimeContext {
        PrimeContext::new(self.p, self.exponent).expect("validated prime")
    }

    pub fn holds(&self) -> bool {
        passes(diff_valuation(&self.lhs, &self.rhs, self.p), self.exponent)
    }

    /// The same claim with `p^{e−1}` added to the right side.
    pub fn perturbed(&self) -> Evaluation {
        let mut out = self.clone();
        out.rhs += p_power(self.p, self.exponent as i32 - 1);
        out.alternate = None;
        out
    }

    pub fn into_record(self, params: &Params) -> VerificationRecord {
        let ctx = self.context();
        let side = |q: &BigRational| match residue(q, ctx) {
            Ok(r) => SideResidue::Residue(r.value().clone()),
            Err(_) => SideResidue::NonIntegral,
        };
        let dv = diff_valuation(&self.lhs, &self.rhs, self.p);
        let unit = if dv.is_some() {
            let u = unit_part(&(&self.lhs - &self.rhs), self.p).expect("nonzero");
            Some(residue(&u, ctx).expect("unit part is integral").value().clone())
        } else {
            None
        };
        let alternate = self.alternate.as_ref().map(|alt| {
            let v = diff_valuation(&alt.lhs, &alt.rhs, self.p);
            AlternateVerdict {
                reading: alt.reading.clone(),
                pass: passes(v, self.exponent),
                difference_valuation: v,
            }
        });
        VerificationRecord {
            statement: self.statement,
            p: self.p,
            x: params.x.clone(),
            d: params.d.clone(),
            k: params.k,
            case: self.case.clone(),
            modulus_exponent: self.exponent,
            lhs: side(&self.lhs),
            rhs: side(&self.rhs),
            difference_valuation: dv,
            difference_unit_residue: unit,
            pass: passes(dv, self.exponent),
            alternate,
            elapsed_micros: None,
        }
    }
}

/// A side reduced mod `p^e`, or the marker for a side with negative valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideResidue {
    Residue(BigUint),
    NonIntegral,
}

const NONINTEGRAL: &str = "nonintegral-side";

impl fmt::Display for SideResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideResidue::Residue(r) => write!(f, "{r}"),
            SideResidue::NonIntegral => f.write_str(NONINTEGRAL),
        }
    }
}

impl Serialize for SideResidue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SideResidue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == NONINTEGRAL {
            return Ok(SideResidue::NonIntegral);
        }
        parse_decimal(&s).map(SideResidue::Residue).map_err(serde::de::Error::custom)
    }
}

fn parse_decimal(s: &str) -> std::result::Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a decimal residue: {s:?}"));
    }
    s.parse::<BigUint>().map_err(|e| e.to_string())
}

mod decimal_option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_decimal(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternateVerdict {
    pub reading: String,
    pub pass: bool,
    pub difference_valuation: Option<i64>,
}

/// Evidence for one congruence instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub statement: StatementId,
    pub p: u64,
    #[serde(with = "serde_rational::option")]
    pub x: Option<BigRational>,
    #[serde(with = "serde_rational::option")]
    pub d: Option<BigRational>,
    pub k: Option<u64>,
    pub case: Option<String>,
    pub modulus_exponent: u32,
    pub lhs: SideResidue,
    pub rhs: SideResidue,
    /// `v_p(lhs − rhs)`; absent when the sides are equal.
    pub difference_valuation: Option<i64>,
    /// Unit part of `lhs − rhs` reduced mod `p^e`.
    #[serde(with = "decimal_option")]
    pub difference_unit_residue: Option<BigUint>,
    pub pass: bool,
    pub alternate: Option<AlternateVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub lhs: BigRational,
    #[serde(with = "serde_rational")]
    pub rhs: BigRational,
}

impl Equation {
    fn new(label: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        Equation {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evidence for one exact-identity instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub statement: StatementId,
    pub p: Option<u64>,
    #[serde(with = "serde_rational")]
    pub x: BigRational,
    #[serde(with = "serde_rational")]
    pub d: BigRational,
    pub n: u64,
    pub equations: Vec<Equation>,
    pub pass: bool,
    pub alternate: Option<AlternateVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u64>,
}

impl IdentityRecord {
    fn new(statement: StatementId, p: Option<u64>, x: &BigRational, d: &BigRational, n: u64, equations: Vec<Equation>) -> Self {
        let pass = equations.iter().all(Equation::holds);
        IdentityRecord {
            statement,
            p,
            x: x.clone(),
            d: d.clone(),
            n,
            equations,
            pass,
            alternate: None,
            elapsed_micros: None,
        }
    }

    /// Every right side shifted by one; an honest identity must then fail.
    pub fn perturbed(&self) -> IdentityRecord {
        let equations: Vec<Equation> = self
            .equations
            .iter()
            .map(|e| Equation::new(e.label.clone(), e.lhs.clone(), &e.rhs + int(1)))
            .collect();
        IdentityRecord::new(self.statement, self.p, &self.x, &self.d, self.n, equations)
    }
}

/// Output of [`check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Record {
    Congruence(VerificationRecord),
    Identity(IdentityRecord),
}

impl Record {
    pub fn pass(&self) -> bool {
        match self {
            Record::Congruence(r) => r.pass,
            Record::Identity(r) => r.pass,
        }
    }

    pub fn statement(&self) -> StatementId {
        match self {
            Record::Congruence(r) => r.statement,
            Record::Identity(r) => r.statement,
        }
    }

    pub fn set_elapsed(&mut self, micros: Option<u64>) {
        match self {
            Record::Congruence(r) => r.elapsed_micros = micros,
            Record::Identity(r) => r.elapsed_micros = micros,
        }
    }
}

fn nonzero_d(d: &BigRational) -> Result<()> {
    if d.is_zero() {
        Err(Error::ZeroD)
    } else {
        Ok(())
    }
}

fn unit_d(d: &BigRational, p: u64) -> Result<()> {
    nonzero_d(d)?;
    if is_unit(d, p) {
        Ok(())
    } else {
        Err(Error::DNotUnit {
            d: crate::rational::format_rational(d),
            p,
        })
    }
}

fn pow(q: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

fn sign(e: u64) -> BigRational {
    if e.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn binom(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

fn fq(a: i64, p: u64) -> BigRational {
    BigRational::from_integer(fermat_quotient(a, p).expect("a coprime to p"))
}

fn jac(a: i64, n: u64) -> BigRational {
    int(crate::padic::jacobi(a, n).expect("odd modulus"))
}

fn eval(
    statement: StatementId,
    p: u64,
    exponent: u32,
    case: Option<&str>,
    lhs: BigRational,
    rhs: BigRational,
) -> Evaluation {
    Evaluation {
        statement,
        p,
        exponent,
        case: case.map(str::to_string),
        lhs,
        rhs,
        alternate: None,
    }
}

fn fixed(id: StatementId) -> u32 {
    match id.exponent_rule() {
        ExponentRule::Fixed(e) => e,
        other => unreachable!("{id} has rule {other:?}"),
    }
}

/// Exponent and case label for a [`ExponentRule::ResidueClass`] statement.
fn class_exponent(id: StatementId, p: u64) -> (u32, bool, String) {
    match id.exponent_rule() {
        ExponentRule::ResidueClass { modulus } => {
            let one = p % modulus == 1;
            let label = format!("p≡{} (mod {modulus})", p % modulus);
            (if one { 4 } else { 2 }, one, label)
        }
        other => unreachable!("{id} has rule {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// exact identities

/// All three finite identities with closed right sides.
pub fn check_lemma_2_1(x: &BigRational, d: &BigRational, n: u64) -> Result<IdentityRecord> {
    nonzero_d(d)?;
    let [sums] = weighted_sums_at(x, d, &[n])?.try_into().expect("one limit");
    let mut eqs = Vec::with_capacity(3);
    for (v, sum) in SumVariant::ALL.into_iter().zip(sums) {
        let label = match v {
            SumVariant::Full => "full",
            SumVariant::Odd => "odd",
            SumVariant::Catalan => "catalan",
        };
        eqs.push(Equation::new(label, sum, closed_form(v, x, d, n)?));
    }
    Ok(IdentityRecord::new(StatementId::Lemma2_1, None, x, d, n, eqs))
}

/// The chains linking FULL, CATALAN and ODD sums; the half-range chain too when `n` is odd.
pub fn check_theorem_1_5(x: &BigRational, d: &BigRational, n: u64) -> Result<IdentityRecord> {
    nonzero_d(d)?;
    let nn = int(n);
    let half = n.div_ceil(2);
    let mut sums = weighted_sums_at(x, d, &[half, n])?;
    let [full, odd, cat] = sums.pop().expect("two limits");
    let mut eqs = vec![
        Equation::new("full = -2nd + n·catalan", full.clone(), int(-2) * &nn * d + &nn * cat),
        Equation::new("full = (2n-1)·odd", full, (int(2) * &nn - int(1)) * odd),
    ];
    if n % 2 == 1 {
        let [full, odd, cat] = sums.pop().expect("two limits");
        let n1 = int(n + 1);
        eqs.push(Equation::new(
            "half: full = -d(n+1) + (n+1)/2·catalan",
            full.clone(),
            -d * &n1 + &n1 / int(2) * cat,
        ));
        eqs.push(Equation::new("half: full = n·odd", full, nn * odd));
    }
    Ok(IdentityRecord::new(StatementId::Theorem1_5, None, x, d, n, eqs))
}

/// `Σ_{k≤(p−1)/2}` FULL sum against its `n = (p+1)/2` closed form written via `C(p−1,(p−1)/2)`.
fn specialization_l3(x: &BigRational, d: &BigRational, p: u64) -> Result<IdentityRecord> {
    let id = StatementId::AuxSpecializationL3;
    id.check_prime(p)?;
    nonzero_d(d)?;
    let h = (p - 1) / 2;
    let lhs = weighted_sum(SumVariant::Full, x, d, h + 1)?;
    let core = gen_binom(x, h + 1) * gen_binom(&(x + int(h + 1)), h + 1) / (pow(d, h as i64) * binom(p - 1, h));
    let corrected = int((p + 1) * (p + 1)) / int(4) * &core;
    let printed = int(6 * p) / int(p * p - 1) * core;
    let mut rec = IdentityRecord::new(
        id,
        Some(p),
        x,
        d,
        h + 1,
        vec![Equation::new("(p+1)^2/4 coefficient", lhs.clone(), corrected)],
    );
    rec.alternate = Some(AlternateVerdict {
        reading: "printed 6p/(p^2-1) coefficient".to_string(),
        pass: lhs == printed,
        difference_valuation: diff_valuation(&lhs, &printed, p),
    });
    Ok(rec)
}

// ---------------------------------------------------------------------------
// theorems

fn theorem_prelude(id: StatementId, x: &BigRational, d: &BigRational, p: u64) -> Result<(u64, BigRational)> {
    id.check_prime(p)?;
    let dec = decompose(x, p)?;
    unit_d(d, p)?;
    Ok((dec.residue_part, dec.m))
}

fn theorem_1_1(x: &BigRational, d: &BigRational, p: u64) -> Result<Evaluation> {
    let id = StatementId::Theorem1_1;
    let (r, m) = theorem_prelude(id, x, d, p)?;
    let pp = int(p);
    let t = shared_harmonic(r);
    let (h, h2) = (t.h(r).clone(), t.h2(r).clone());
    let p2 = &pp * &pp;
    let p3 = &p2 * &pp;
    let bracket = int(2) * &p2 - &pp - int(2) * &p2 * (int(1) - int(2) * &pp) * &h + int(2) * &p3 * &m * h2
        - int(2) * &p3 * &h * &h;
    let rhs = pow(d, 1 - p as i64) * &m * (int(1) + &m) * bracket;
    let lhs = weighted_sum(SumVariant::Full, x, d, p)?;
    Ok(eval(id, p, fixed(id), None, lhs, rhs))
}

fn theorem_1_3(x: &BigRational, d: &BigRational, p: u64) -> Result<Evaluation> {
    let id = StatementId::Theorem1_3;
    let (r, m) = theorem_prelude(id, x, d, p)?;
    let half = (p - 1) / 2;
    let pp = int(p);
    let p2 = &pp * &pp;
    let lhs = weighted_sum(SumVariant::Full, x, d, half + 1)?;
    let (rhs, e, case) = match r.cmp(&half) {
        std::cmp::Ordering::Less => {
            let rr = int(r);
            let t = shared_harmonic(2 * r);
            let h2 = t.h2(r) - int(4) * t.h2(2 * r);
            let bracket = &pp + int(2) * &rr * &pp + (int(1) + int(2) * &m) * &p2
                + (int(1) + int(2) * &rr) * &m * &p2 * &pp * h2;
            let lead = sign(r) * &m * pow(&(-d.recip()), half as i64) / (int(2) * binom(p - 1, r + half));
            (lead * bracket, 4, "less")
        }
        std::cmp::Ordering::Equal => {
            let q = fq(2, p);
            let tail = int(1) + int(2) * &pp * &q + &p2 * &q * &q;
            let rhs = &m * (int(1) + &m) * &p2 / (pow(&int(4), p as i64 - 1) * pow(d, half as i64)) * tail;
            (rhs, 5, "equal")
        }
        std::cmp::Ordering::Greater => {
            let rhs = (int(1) + &m) * &pp / pow(d, half as i64) * binom(r + half + 1, p + 1);
            (rhs, 2, "greater")
        }
    };
    Ok(eval(id, p, e, Some(case), lhs, rhs))
}

// ---------------------------------------------------------------------------
// corollaries

fn corollary(id: StatementId, d: &BigRational, p: u64) -> Result<Evaluation> {
    use StatementId::*;
    id.check_prime(p)?;
    unit_d(d, p)?;
    let pp = int(p);
    let p2 = &pp * &pp;
    let p3 = &p2 * &pp;
    let h = (p - 1) / 2;
    let full = p;
    let half_n = h + 1;
    let twop1 = int(2) * &pp - int(1);
    let scaled = |c: i64, e: i64| pow(&(int(c) / d), e);
    let b6 = || bernoulli_poly(p - 2, &rat(1, 6));
    let legendre_p3 = || jac(p as i64, 3);

    let (family, n, rhs, e, case): (Family, u64, BigRational, u32, Option<String>) = match id {
        CorC1 => {
            let q = fq(2, p);
            let rhs = scaled(16, p as i64 - 1)
                * (&pp * &twop1 * (int(1) - int(4) * &pp * &q) - int(10) * &p3 * &q * &q);
            (Family::Two, full, rhs, 4, None)
        }
        CorC2 => {
            let q = fq(3, p);
            let rhs = scaled(-27, p as i64 - 1)
                * &pp
                * (&twop1 * (int(1) - int(3) * &pp * &q) - int(6) * &p2 * &q * &q);
            (Family::Three, full, rhs, 4, None)
        }
        CorC3 => {
            let q = fq(2, p);
            let rhs = scaled(-64, p as i64 - 1)
                * &pp
                * (&twop1 * (int(1) - int(6) * &pp * &q) - int(21) * &p2 * &q * &q);
            (Family::Four, full, rhs, 4, None)
        }
        CorC4 => {
            let q2 = fq(2, p);
            let q3 = fq(3, p);
            let quad = int(5) * &q2 * &q2 + int(6) * &q2 * &q3 + int(3) * &q3 * &q3;
            let rhs = scaled(-432, p as i64 - 1)
                * &pp
                * (&twop1 * (int(1) - int(4) * &pp * &q2 - int(3) * &pp * &q3) - int(2) * &p2 * quad);
            (Family::Six, full, rhs, 4, None)
        }
        CorC5 => {
            let q = fq(2, p);
            let rhs = scaled(-1, h as i64) * &p2 * (int(1) + int(2) * &pp * &q + &p2 * &q * &q);
            (Family::Two, half_n, rhs, 5, None)
        }
        CorC6 | CorC7 | CorC8 => {
            let (e, one, label) = class_exponent(id, p);
            let rhs = match (id, one) {
                (CorC6, true) => {
                    sign((p - 1) / 3) * scaled(27, h as i64) / (int(4) * binom(p - 1, (5 * p - 5) / 6))
                        * (&pp + int(3) * &p2 - &p3 / int(6) * legendre_p3() * b6())
                }
                (CorC6, false) => {
                    rat(-3, 2) * scaled(-27, h as i64) * &pp * gen_binom(&rat(7 * p as i64 + 1, 6), p + 1)
                }
                (CorC7, true) => {
                    let e3 = BigRational::from_integer(euler_number(p - 3));
                    sign((p - 1) / 4) * scaled(64, h as i64) / (int(3) * binom(p - 1, (3 * p - 3) / 4))
                        * (&pp + int(2) * &p2 - sign(h) * &p3 * e3)
                }
                (CorC7, false) => {
                    rat(-4, 3) * scaled(-64, h as i64) * &pp * gen_binom(&rat(5 * p as i64 + 1, 4), p + 1)
                }
                (CorC8, true) => {
                    sign((p - 1) / 6) * scaled(432, h as i64) / (int(5) * binom(p - 1, (2 * p - 2) / 3))
                        * (int(2) * &pp + int(3) * &p2 - &p3 / int(30) * legendre_p3() * b6())
                }
                (CorC8, false) => {
                    rat(-6, 5) * scaled(-432, h as i64) * &pp * gen_binom(&rat(4 * p as i64 + 1, 3), p + 1)
                }
                _ => unreachable!(),
            };
            let family = match id {
                CorC6 => Family::Three,
                CorC7 => Family::Four,
                _ => Family::Six,
            };
            (family, half_n, rhs, e, Some(label))
        }
        _ => unreachable!("{id} is not a corollary"),
    };
    let lhs = corollary_lhs(family, d, n, Reading::Bridge)?;
    let mut out = Evaluation {
        statement: id,
        p,
        exponent: e,
        case,
        lhs,
        rhs: rhs.clone(),
        alternate: None,
    };
    if family == Family::Six {
        out.alternate = Some(AlternateSides {
            reading: "printed C(4k,2k)C(6k,3k)/C(2k,k)".to_string(),
            lhs: corollary_lhs(family, d, n, Reading::Printed)?,
            rhs,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// auxiliary congruences

fn auxiliary(id: StatementId, p: u64, params: &Params) -> Result<Evaluation> {
    use StatementId::*;
    id.check_prime(p)?;
    let pp = int(p);
    let h = (p - 1) / 2;
    let e = fixed(id);
    let b6 = || bernoulli_poly(p - 2, &rat(1, 6));
    let lp3 = || jac(p as i64, 3);
    let harm = |n: u64, r: u32| {
        let t = shared_harmonic(n);
        if r == 1 {
            t.h(n).clone()
        } else {
            t.h2(n).clone()
        }
    };
    let mk = |lhs, rhs| Ok(eval(id, p, e, None, lhs, rhs));
    match id {
        AuxWolstenholme => mk(binom(2 * p - 1, p - 1), int(1)),
        AuxCarlitz => {
            let p3 = num_traits::pow(pp.clone(), 3);
            let lhs = binom(p - 1, h);
            let with = |b: BigRational| sign(h) * (pow(&int(4), p as i64 - 1) + &p3 / int(12) * b);
            let mut out = eval(id, p, e, None, lhs.clone(), with(bernoulli(p - 3)));
            out.alternate = Some(AlternateSides {
                reading: "printed B_{p-1}".to_string(),
                lhs,
                rhs: with(bernoulli(p - 1)),
            });
            Ok(out)
        }
        AuxHalfHarmonic => {
            let q = fq(2, p);
            mk(harm(h, 1), int(-2) * &q + &pp * &q * &q)
        }
        AuxHalfHarmonic2 => mk(harm(h, 2), int(0)),
        AuxLemma31H3 => {
            let q = fq(3, p);
            let rhs = rat(-3, 2) * &q + rat(3, 4) * &pp * &q * &q - &pp / int(30) * lp3() * b6();
            mk(harm(p / 3, 1), rhs)
        }
        AuxLemma31H4 => {
            let q = fq(2, p);
            let e3 = BigRational::from_integer(euler_number(p - 3));
            let rhs = int(-3) * &q + rat(3, 2) * &pp * &q * &q - sign(h) * &pp * e3;
            mk(harm(p / 4, 1), rhs)
        }
        AuxLemma31H6 => {
            let q2 = fq(2, p);
            let q3 = fq(3, p);
            let rhs = int(-2) * &q2 - rat(3, 2) * &q3 + &pp * &q2 * &q2 + rat(3, 4) * &pp * &q3 * &q3
                - &pp / int(12) * lp3() * b6();
            mk(harm(p / 6, 1), rhs)
        }
        AuxLemma31H3_2 => mk(harm(p / 3, 2), rat(1, 10) * lp3() * b6()),
        AuxLemma31H4_2 => {
            let e3 = BigRational::from_integer(euler_number(p - 3));
            mk(harm(p / 4, 2), sign(h) * int(4) * e3)
        }
        AuxLemma31H6_2 => mk(harm(p / 6, 2), rat(1, 2) * lp3() * b6()),
        AuxProductL1 => {
            let x = params.x(id)?;
            let dec = decompose(x, p)?;
            let (r, m) = (dec.residue_part, dec.m);
            let lhs = gen_binom(x, p) * gen_binom(&(x + &pp), p);
            let hr = harm(r, 1);
            let p2 = &pp * &pp;
            let rhs = &m
                * (&m + int(1))
                * (int(1) + int(2) * &pp * &hr - int(2) * &m * &p2 * harm(r, 2) + int(2) * &p2 * &hr * &hr);
            mk(lhs, rhs)
        }
        AuxReflectH | AuxReflectH2 => {
            let k = params.k.ok_or(Error::MissingParameter {
                statement: id.name().to_string(),
                param: "k",
            })?;
            if k >= p {
                return Err(Error::OutOfRangePrime {
                    statement: id.name().to_string(),
                    p,
                    reason: format!("k = {k} must lie in 0..=p-1"),
                });
            }
            let t = shared_harmonic(p - 1);
            if id == AuxReflectH {
                mk(t.h(p - 1 - k).clone(), t.h(k) + &pp * t.h2(k))
            } else {
                mk(t.h2(p - 1 - k).clone(), -t.h2(k))
            }
        }
        AuxH2p3 => {
            let q = fq(3, p);
            let rhs = rat(-3, 2) * &q + rat(3, 4) * &pp * &q * &q + &pp / int(15) * lp3() * b6();
            mk(harm((2 * p - 1) / 3, 1), rhs)
        }
        AuxH2p3_2 => mk(harm((2 * p - 1) / 3, 2), rat(-1, 10) * lp3() * b6()),
        _ => unreachable!("{id} is not an auxiliary congruence"),
    }
}

// ---------------------------------------------------------------------------
// background congruences

fn background(id: StatementId, p: u64, x: Option<&BigRational>) -> Result<Evaluation> {
    use StatementId::*;
    id.check_prime(p)?;
    let e = fixed(id);
    let pp = int(p);
    let h = (p - 1) / 2;
    let shifted = |k: u64, delta: i64| -> BigRational {
        let j = k as i64 + delta;
        if j < 0 {
            int(0)
        } else {
            binom(3 * k, j as u64)
        }
    };
    let mk = |lhs, rhs, case: Option<&str>| Ok(eval(id, p, e, case, lhs, rhs));
    match id {
        BgZps => {
            let lhs = (0..p).fold(int(0), |acc, k| acc + binom(3 * k, k) * pow(&int(2), k as i64));
            mk(lhs, (int(6) * sign(h) - int(1)) / int(5), None)
        }
        BgSunD0 | BgSunD1 | BgSunDm1 => {
            let (delta, target) = match id {
                BgSunD0 => (0, rat(1, 9)),
                BgSunD1 => (1, rat(-16, 9)),
                _ => (-1, rat(-4, 9)),
            };
            let ratio = rat(4, 27);
            let lhs = (0..p).fold(int(0), |acc, k| acc + shifted(k, delta) * pow(&ratio, k as i64));
            mk(lhs, target, None)
        }
        BgMt => {
            let lhs = (0..p).fold(int(0), |acc, k| acc + binom(2 * k, k));
            let rhs = jac(p as i64, 3) - &pp * &pp / int(3) * bernoulli_poly(p - 2, &rat(1, 3));
            mk(lhs, rhs, None)
        }
        BgWangHan | BgMao => {
            let x = x.ok_or(Error::MissingParameter {
                statement: id.name().to_string(),
                param: "x",
            })?;
            let dec = decompose(x, p)?;
            let (r, t) = (dec.residue_part, dec.m);
            let d = rat(-1, 2);
            if id == BgWangHan {
                let lhs = plain_sum(x, &d, p)?;
                let lead = sign(r.div_ceil(2)) * (int(1) + &t - sign(r) * jac(-1, p) * &t);
                let euler = euler_poly(p - 2, &((x + int(1)) / int(2))) + euler_poly(p - 2, &(-x / int(2)));
                let rhs = lead - &pp * &t * (&t + int(1)) / int(2) * euler;
                mk(lhs, rhs, None)
            } else {
                let lhs = plain_sum(x, &d, h + 1)?;
                let euler = euler_poly(p - 2, &((int(2) * x + int(3)) / int(4)));
                let j = jac(-2, p);
                if r <= h {
                    let rhs = sign(r.div_ceil(2)) + &pp * &t / int(2) * j * euler;
                    mk(lhs, rhs, Some("<x> <= (p-1)/2"))
                } else {
                    let rhs = jac(-1, p) * sign(r / 2) + &pp * (int(1) + &t) / int(2) * j * euler;
                    mk(lhs, rhs, Some("<x> > (p-1)/2"))
                }
            }
        }
        _ => unreachable!("{id} is not a background congruence"),
    }
}

// ---------------------------------------------------------------------------
// public entry points

pub fn check_theorem_1_1(x: &BigRational, d: &BigRational, p: u64) -> Result<VerificationRecord> {
    let params = Params {
        x: Some(x.clone()),
        d: Some(d.clone()),
        ..Params::default()
    };
    Ok(theorem_1_1(x, d, p)?.into_record(&params))
}

pub fn check_theorem_1_3(x: &BigRational, d: &BigRational, p: u64) -> Result<VerificationRecord> {
    let params = Params {
        x: Some(x.clone()),
        d: Some(d.clone()),
        ..Params::default()
    };
    Ok(theorem_1_3(x, d, p)?.into_record(&params))
}

pub fn check_corollary(id: StatementId, d: &BigRational, p: u64) -> Result<VerificationRecord> {
    let params = Params {
        d: Some(d.clone()),
        ..Params::default()
    };
    Ok(corollary(id, d, p)?.into_record(&params))
}

pub fn check_auxiliary(id: StatementId, p: u64, params: &Params) -> Result<Record> {
    if id == StatementId::AuxSpecializationL3 {
        let x = params.x(id)?;
        let d = params.d(id)?;
        return Ok(Record::Identity(specialization_l3(x, d, p)?));
    }
    Ok(Record::Congruence(auxiliary(id, p, params)?.into_record(params)))
}

pub fn check_background(id: StatementId, p: u64, x: Option<&BigRational>) -> Result<VerificationRecord> {
    let params = Params {
        x: x.cloned(),
        ..Params::default()
    };
    Ok(background(id, p, x)?.into_record(&params))
}

/// Both sides of any congruence statement (identities are rejected).
pub fn evaluate(id: StatementId, p: u64, params: &Params) -> Result<Evaluation> {
    use StatementId::*;
    match id {
        Lemma2_1 | Theorem1_5 | AuxSpecializationL3 => Err(Error::InvalidConfig(vec![format!(
            "{id} is an exact identity, not a congruence"
        )])),
        Theorem1_1 => theorem_1_1(params.x(id)?, params.d(id)?, p),
        Theorem1_3 => theorem_1_3(params.x(id)?, params.d(id)?, p),
        CorC1 | CorC2 | CorC3 | CorC4 | CorC5 | CorC6 | CorC7 | CorC8 => corollary(id, params.d(id)?, p),
        BgZps | BgSunD0 | BgSunD1 | BgSunDm1 | BgMt | BgWangHan | BgMao => background(id, p, params.x.as_ref()),
        _ => auxiliary(id, p, params),
    }
}

/// Run one statement instance. `p` is ignored by the prime-free identities.
pub fn check(id: StatementId, p: Option<u64>, params: &Params) -> Result<Record> {
    let started = Instant::now();
    let mut record = match id {
        StatementId::Lemma2_1 | StatementId::Theorem1_5 => {
            let n = params.n.ok_or(Error::MissingParameter {
                statement: id.name().to_string(),
                param: "n",
            })?;
            let (x, d) = (params.x(id)?, params.d(id)?);
            let rec = if id == StatementId::Lemma2_1 {
                check_lemma_2_1(x, d, n)?
            } else {
                check_theorem_1_5(x, d, n)?
            };
            Record::Identity(rec)
        }
        _ => {
            let p = p.ok_or(Error::MissingParameter {
                statement: id.name().to_string(),
                param: "p",
            })?;
            match id {
                StatementId::AuxSpecializationL3 => check_auxiliary(id, p, params)?,
                _ => Record::Congruence(evaluate(id, p, params)?.into_record(params)),
            }
        }
    };
    record.set_elapsed(Some(started.elapsed().as_micros() as u64));
    Ok(record)
}

/// Whether `v_p(lhs − rhs) >= e`.
pub fn holds_at(ev: &Evaluation, e: u32) -> bool {
    let v = diff_valuation(&ev.lhs, &ev.rhs, ev.p);
    passes(v, e)
}
