//! The family f = x^(2p) + a x^p + b^p with p an odd prime: its discriminant,
//! irreducibility, Galois class, case label and monogenicity.
//!
//! Monogenicity is decided three ways when p | delta: a closed-form membership
//! test, the composition criterion for g(x^p) with g = x^2 + a x + b^p, and the
//! generic prime-square scan over the discriminant. [`classify`] insists that
//! all three agree.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    ceil_root, exact_square_root, is_prime_u64, is_squarefree, valuation_unchecked, FactorBudget,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::indexcheck::{
    is_unit, jks_index_free_assuming_irreducible, trinomial_is_monogenic_assuming_irreducible,
    GeneralTrinomial, IndexVerdict,
};
use crate::poly::{is_irreducible_over_q, IntPolynomial};

/// Upper limit on the number of candidate quadratics the power-sum
/// irreducibility search will examine.
const POWER_SUM_SEARCH_LIMIT: u64 = 1 << 24;

/// (p, a, b) describing x^(2p) + a x^p + b^p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrinomialFamily {
    p: u64,
    a: BigInt,
    b: BigInt,
}

impl TrinomialFamily {
    pub fn new(p: u64, a: BigInt, b: BigInt) -> Result<Self> {
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::InvalidFamily(format!("p = {p} is not an odd prime")));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidFamily("a and b must be nonzero".into()));
        }
        Ok(TrinomialFamily { p, a, b })
    }

    pub fn from_i64(p: u64, a: i64, b: i64) -> Result<Self> {
        Self::new(p, BigInt::from(a), BigInt::from(b))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// The same family with a replaced by -a.
    pub fn negate_a(&self) -> Self {
        TrinomialFamily {
            p: self.p,
            a: -&self.a,
            b: self.b.clone(),
        }
    }

    fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    fn p_exp(&self) -> u32 {
        u32::try_from(self.p).expect("p fits in u32")
    }

    /// b^p, the constant term of f.
    pub fn b_pow_p(&self) -> BigInt {
        if is_unit(&self.b) {
            return self.b.clone();
        }
        self.b.pow(self.p_exp())
    }

    /// x^(2p) + a x^p + b^p as a general trinomial.
    pub fn trinomial(&self) -> GeneralTrinomial {
        let p = self.p as usize;
        GeneralTrinomial::new(2 * p, p, self.a.clone(), self.b_pow_p()).expect("2p > p >= 3")
    }

    pub fn polynomial(&self) -> IntPolynomial {
        self.trinomial().polynomial()
    }

    fn p_divides_delta(&self) -> bool {
        delta(self).is_multiple_of(&self.p_big())
    }
}

impl fmt::Display for TrinomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.a, self.b)
    }
}

/// a^2 - 4 b^p.
pub fn delta(fam: &TrinomialFamily) -> BigInt {
    &fam.a * &fam.a - 4 * fam.b_pow_p()
}

/// b^(p(p-1)) p^(2p) delta^p.
pub fn swan_disc_f(fam: &TrinomialFamily) -> BigInt {
    let p = fam.p_exp();
    let b_part = if is_unit(&fam.b) {
        // p(p - 1) is even
        BigInt::one()
    } else {
        fam.b.pow(p * (p - 1))
    };
    b_part * fam.p_big().pow(2 * p) * delta(fam).pow(p)
}

/// (-1)^(p(p-1)/2) for odd p: +1 when p = 1 mod 4, -1 when p = 3 mod 4.
fn galois_sign(p: u64) -> i32 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// y >= 0 with delta = sign * p * y^2, if one exists.
pub fn signed_square_witness(delta: &BigInt, p: u64, sign: i32) -> Option<BigInt> {
    if delta.is_zero() {
        return Some(BigInt::zero());
    }
    if (delta.is_positive()) != (sign > 0) {
        return None;
    }
    let pb = BigUint::from(p);
    if valuation_unchecked(delta, &pb) % 2 == 0 {
        return None;
    }
    let (quot, rem) = delta.div_rem(&BigInt::from(p));
    if !rem.is_zero() {
        return None;
    }
    exact_square_root(&quot.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GaloisKind {
    /// C_p ⋊ C_(p-1), order p(p-1).
    #[serde(rename = "Frobenius_p_pminus1")]
    Frobenius,
    /// (C_p ⋊ C_((p-1)/2)) × C_2, order p(p-1).
    #[serde(rename = "Half_times_C2")]
    HalfTimesC2,
    /// (C_p ⋊ C_(p-1)) × C_2, order 2p(p-1).
    #[serde(rename = "Full_times_C2")]
    FullTimesC2,
}

impl GaloisKind {
    pub const ALL: [GaloisKind; 3] = [
        GaloisKind::Frobenius,
        GaloisKind::HalfTimesC2,
        GaloisKind::FullTimesC2,
    ];

    pub fn identifier(self) -> &'static str {
        match self {
            GaloisKind::Frobenius => "Frobenius_p_pminus1",
            GaloisKind::HalfTimesC2 => "Half_times_C2",
            GaloisKind::FullTimesC2 => "Full_times_C2",
        }
    }
}

impl std::str::FromStr for GaloisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GaloisKind::ALL
            .into_iter()
            .find(|k| k.identifier().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidFamily(format!("unknown Galois class {s:?}")))
    }
}

/// One of the three candidate groups, instantiated at a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GaloisClass {
    pub kind: GaloisKind,
    pub p: u64,
}

impl GaloisClass {
    pub fn new(kind: GaloisKind, p: u64) -> Self {
        GaloisClass { kind, p }
    }

    pub fn order(&self) -> u128 {
        let base = self.p as u128 * (self.p as u128 - 1);
        match self.kind {
            GaloisKind::Frobenius | GaloisKind::HalfTimesC2 => base,
            GaloisKind::FullTimesC2 => 2 * base,
        }
    }

    /// Order of the complement C_k acting on C_p.
    pub fn complement_order(&self) -> u64 {
        match self.kind {
            GaloisKind::HalfTimesC2 => (self.p - 1) / 2,
            _ => self.p - 1,
        }
    }

    pub fn has_c2_factor(&self) -> bool {
        self.kind != GaloisKind::Frobenius
    }
}

impl fmt::Display for GaloisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, k) = (self.p, self.complement_order());
        if self.has_c2_factor() {
            write!(f, "(C{p}⋊C{k})×C2")
        } else {
            write!(f, "C{p}⋊C{k}")
        }
    }
}

/// Galois class of f, which must be irreducible.
pub fn galois_group(fam: &TrinomialFamily, cfg: &Config) -> Result<GaloisClass> {
    if !family_irreducibility(fam, cfg)?.irreducible {
        return Err(Error::Reducible);
    }
    Ok(galois_class_assuming_irreducible(fam))
}

pub fn galois_class_assuming_irreducible(fam: &TrinomialFamily) -> GaloisClass {
    let d = delta(fam);
    let sign = galois_sign(fam.p);
    let kind = match signed_square_witness(&d, fam.p, sign) {
        Some(_) if sign > 0 => GaloisKind::Frobenius,
        Some(_) => GaloisKind::HalfTimesC2,
        None => GaloisKind::FullTimesC2,
    };
    GaloisClass::new(kind, fam.p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseKind {
    #[serde(rename = "Gamma1_b1")]
    Gamma1B1,
    #[serde(rename = "Gamma2_b1")]
    Gamma2B1,
    #[serde(rename = "Gamma1_bneg1")]
    Gamma1BNeg1,
    #[serde(rename = "Omega_b1")]
    OmegaB1,
    #[serde(rename = "Omega_bneg1")]
    OmegaBNeg1,
    PNotDividingDelta,
}

impl CaseKind {
    pub fn identifier(self) -> &'static str {
        match self {
            CaseKind::Gamma1B1 => "Gamma1_b1",
            CaseKind::Gamma2B1 => "Gamma2_b1",
            CaseKind::Gamma1BNeg1 => "Gamma1_bneg1",
            CaseKind::OmegaB1 => "Omega_b1",
            CaseKind::OmegaBNeg1 => "Omega_bneg1",
            CaseKind::PNotDividingDelta => "PNotDividingDelta",
        }
    }
}

impl std::str::FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            CaseKind::Gamma1B1,
            CaseKind::Gamma2B1,
            CaseKind::Gamma1BNeg1,
            CaseKind::OmegaB1,
            CaseKind::OmegaBNeg1,
            CaseKind::PNotDividingDelta,
        ]
        .into_iter()
        .find(|k| k.identifier().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::InvalidFamily(format!("unknown case label {s:?}")))
    }
}

/// Which of delta = p y^2 (Gamma1), delta = -p y^2 (Gamma2) or neither (Omega)
/// holds when p | delta, split by the sign of b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub kind: CaseKind,
    #[serde(serialize_with = "crate::report::serialize_option_display")]
    pub y_witness: Option<BigInt>,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.y_witness {
            Some(y) => write!(f, "{} (y = {y})", self.kind.identifier()),
            None => f.write_str(self.kind.identifier()),
        }
    }
}

pub fn case_label(fam: &TrinomialFamily) -> Result<CaseLabel> {
    if !fam.p_divides_delta() {
        return Ok(CaseLabel {
            kind: CaseKind::PNotDividingDelta,
            y_witness: None,
        });
    }
    if !is_unit(&fam.b) {
        return Err(Error::UnsupportedB(fam.b.to_string()));
    }
    let d = delta(fam);
    let b_positive = fam.b.is_positive();
    if let Some(y) = signed_square_witness(&d, fam.p, 1) {
        let kind = if b_positive {
            CaseKind::Gamma1B1
        } else {
            CaseKind::Gamma1BNeg1
        };
        return Ok(CaseLabel {
            kind,
            y_witness: Some(y),
        });
    }
    // b = -1 gives delta = a^2 + 4 > 0, so only b = 1 reaches Gamma2
    if let Some(y) = signed_square_witness(&d, fam.p, -1) {
        return Ok(CaseLabel {
            kind: CaseKind::Gamma2B1,
            y_witness: Some(y),
        });
    }
    let kind = if b_positive {
        CaseKind::OmegaB1
    } else {
        CaseKind::OmegaBNeg1
    };
    Ok(CaseLabel {
        kind,
        y_witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityMethod {
    /// delta is a square, so x^2 + a x + b^p already splits.
    DeltaSquare,
    /// Modular factorization with Hensel lifting on the expanded polynomial.
    Hensel,
    /// Search for a quadratic x^2 + u x + b whose roots have p-th power sum -a.
    PowerSum,
}

impl fmt::Display for IrreducibilityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrreducibilityMethod::DeltaSquare => "delta square",
            IrreducibilityMethod::Hensel => "Hensel",
            IrreducibilityMethod::PowerSum => "power sum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityVerdict {
    pub irreducible: bool,
    pub method: IrreducibilityMethod,
    /// For the power-sum route, the u with x^2 + u x + b giving a factor.
    #[serde(serialize_with = "crate::report::serialize_option_display")]
    pub witness: Option<BigInt>,
}

/// Irreducibility of f over Q. Uses Hensel lifting up to the configured degree
/// bound and the power-sum criterion beyond it.
pub fn family_irreducibility(fam: &TrinomialFamily, cfg: &Config) -> Result<IrreducibilityVerdict> {
    let d = delta(fam);
    if d.is_zero() || exact_square_root(&d).is_some() {
        return Ok(IrreducibilityVerdict {
            irreducible: false,
            method: IrreducibilityMethod::DeltaSquare,
            witness: None,
        });
    }
    if 2 * fam.p as usize <= cfg.irreducibility.degree_bound {
        let irreducible = is_irreducible_over_q(&fam.polynomial(), &cfg.irreducibility)?;
        return Ok(IrreducibilityVerdict {
            irreducible,
            method: IrreducibilityMethod::Hensel,
            witness: None,
        });
    }
    power_sum_irreducibility(fam)
}

/// For irreducible g = x^2 + a x + b^p with root alpha, g(x^p) is reducible
/// exactly when alpha = beta^p for some beta in Q(alpha). Such a beta is a
/// root of some x^2 + u x + b with beta^p + beta'^p = -a, and |u| <= 2R where
/// R^p bounds the roots of g.
pub fn power_sum_irreducibility(fam: &TrinomialFamily) -> Result<IrreducibilityVerdict> {
    let d = delta(fam);
    if d.is_zero() || exact_square_root(&d).is_some() {
        return Ok(IrreducibilityVerdict {
            irreducible: false,
            method: IrreducibilityMethod::DeltaSquare,
            witness: None,
        });
    }
    let p = fam.p_exp();
    let b_pow_p = fam.b_pow_p();
    let root_bound: BigUint = fam.a.magnitude().max(b_pow_p.magnitude()).clone() + 1u32;
    let span = BigInt::from(ceil_root(&root_bound, p)) * 2u32;
    let candidates: BigInt = &span * 2u32 + 1u32;
    let count = candidates
        .to_u64()
        .filter(|&c| c <= POWER_SUM_SEARCH_LIMIT)
        .ok_or_else(|| {
            Error::SearchBudgetExceeded(format!("power-sum search over |u| <= {span}"))
        })?;
    let target = -&fam.a;
    let mut u = -span;
    for _ in 0..count {
        if power_sum_matches(&u, &fam.b, fam.p, &target) {
            return Ok(IrreducibilityVerdict {
                irreducible: false,
                method: IrreducibilityMethod::PowerSum,
                witness: Some(u),
            });
        }
        u += 1;
    }
    Ok(IrreducibilityVerdict {
        irreducible: true,
        method: IrreducibilityMethod::PowerSum,
        witness: None,
    })
}

/// beta^k + beta'^k for the roots of x^2 + u x + b.
pub fn power_sum(u: &BigInt, b: &BigInt, k: u64) -> BigInt {
    let (mut prev, mut cur) = (BigInt::from(2), -u);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = -u * &cur - b * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

const SIEVE_MODULI: [u64; 2] = [(1 << 61) - 1, 0xffff_ffff_ffff_ffc5];

fn power_sum_mod(u: &BigInt, b: &BigInt, k: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let red = |x: &BigInt| x.mod_floor(&BigInt::from(m)).to_u64().expect("reduced") as u128;
    let neg_u = red(&-u);
    let neg_b = red(&-b);
    let (mut prev, mut cur) = (2u128 % m128, neg_u);
    if k == 0 {
        return prev as u64;
    }
    for _ in 1..k {
        let next = (neg_u * cur % m128 + neg_b * prev % m128) % m128;
        prev = cur;
        cur = next;
    }
    cur as u64
}

fn power_sum_matches(u: &BigInt, b: &BigInt, p: u64, target: &BigInt) -> bool {
    let sieved = SIEVE_MODULI.iter().all(|&m| {
        let t = target.mod_floor(&BigInt::from(m)).to_u64().expect("reduced");
        power_sum_mod(u, b, p, m) == t
    });
    sieved && power_sum(u, b, p) == *target
}

/// Monogenicity of an irreducible x^2 + a x + b with b = 1 or -1:
/// W = (a^2 - 4b) / gcd(a, 2)^2 squarefree, with 4 | a whenever 2 | a and
/// b = 1, and 4 not dividing a when b = -1.
pub fn quadratic_is_monogenic(a: &BigInt, b: &BigInt, budget: &FactorBudget) -> Result<bool> {
    if !is_unit(b) {
        return Err(Error::UnsupportedB(b.to_string()));
    }
    let disc = a * a - 4 * b;
    if exact_square_root(&disc).is_some() {
        return Err(Error::Reducible);
    }
    let g = a.gcd(&BigInt::from(2));
    let w = &disc / (&g * &g);
    let four_divides_a = a.is_multiple_of(&BigInt::from(4));
    let parity_ok = if b.is_positive() {
        a.is_odd() || four_divides_a
    } else {
        !four_divides_a
    };
    Ok(parity_ok && is_squarefree(&w, budget)?)
}

/// Outcome of the composition criterion for f = g(x^p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KkrVerdict {
    pub monogenic: bool,
    /// g(0) = b^p squarefree, i.e. |b| = 1.
    pub g0_squarefree: bool,
    /// Index verdict at the single prime dividing p.
    pub index_at_p: Option<IndexVerdict>,
    /// g = x^2 + a x + b^p monogenic.
    pub quadratic_monogenic: Option<bool>,
}

impl fmt::Display for KkrVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "composition: g(0) squarefree = {}", self.g0_squarefree)?;
        if let Some(v) = &self.index_at_p {
            write!(
                f,
                ", p {} the index ({})",
                if v.divides_index { "divides" } else { "does not divide" },
                v.condition_used
            )?;
        }
        if let Some(q) = self.quadratic_monogenic {
            write!(f, ", g monogenic = {q}")?;
        }
        write!(f, " => {}", self.monogenic)
    }
}

pub fn kkr_monogenic(fam: &TrinomialFamily, cfg: &Config) -> Result<KkrVerdict> {
    if !family_irreducibility(fam, cfg)?.irreducible {
        return Err(Error::Reducible);
    }
    kkr_monogenic_assuming_irreducible(fam, &cfg.factor)
}

pub fn kkr_monogenic_assuming_irreducible(
    fam: &TrinomialFamily,
    budget: &FactorBudget,
) -> Result<KkrVerdict> {
    if !is_unit(&fam.b) {
        return Ok(KkrVerdict {
            monogenic: false,
            g0_squarefree: false,
            index_at_p: None,
            quadratic_monogenic: None,
        });
    }
    let index = jks_index_free_assuming_irreducible(&fam.trinomial(), &BigUint::from(fam.p))?;
    let quadratic = quadratic_is_monogenic(&fam.a, &fam.b, budget)?;
    Ok(KkrVerdict {
        monogenic: !index.divides_index && quadratic,
        g0_squarefree: true,
        index_at_p: Some(index),
        quadratic_monogenic: Some(quadratic),
    })
}

/// The exceptional sets of monogenic families attached to each Galois class
/// when p | delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalSet {
    /// Class C_p ⋊ C_(p-1): (5, ±3, 1) and (a^2 + 4, a, -1).
    Frobenius,
    /// Class (C_p ⋊ C_((p-1)/2)) × C_2: (3, ±1, 1).
    Half,
    /// Class (C_p ⋊ C_(p-1)) × C_2 with delta = (-1)^(p(p+1)/2) p y^2: (3, ±4, 1).
    FullSignedSquare,
}

impl fmt::Display for ExceptionalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExceptionalSet::Frobenius => "frobenius",
            ExceptionalSet::Half => "half",
            ExceptionalSet::FullSignedSquare => "full_signed_square",
        })
    }
}

/// One squarefreeness check in the full-class criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeCheck {
    pub label: &'static str,
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub value: BigInt,
    pub squarefree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormRule {
    /// Membership in one of the finite exceptional sets.
    Exceptional { set: ExceptionalSet, member: bool },
    /// Full class without the signed-square condition: squarefreeness of
    /// a - 2 and a + 2 (b = 1) or of (a^2 + 4)/gcd(2, a)^2 with 4 not
    /// dividing a (b = -1).
    FullSquarefree {
        checks: Vec<SquarefreeCheck>,
        four_divides_a: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormVerdict {
    pub rule: ClosedFormRule,
    pub monogenic: bool,
}

impl fmt::Display for ClosedFormVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            ClosedFormRule::Exceptional { set, member } => write!(
                f,
                "closed form: {} exceptional set {}",
                if *member { "in" } else { "not in" },
                set
            ),
            ClosedFormRule::FullSquarefree {
                checks,
                four_divides_a,
            } => {
                f.write_str("closed form: full class")?;
                if let Some(four) = four_divides_a {
                    write!(f, ", 4 {} a", if *four { "divides" } else { "does not divide" })?;
                }
                for c in checks {
                    write!(
                        f,
                        ", {} = {} {}",
                        c.label,
                        c.value,
                        if c.squarefree { "squarefree" } else { "not squarefree" }
                    )?;
                }
                write!(f, " => {}", self.monogenic)
            }
        }
    }
}

/// Closed-form monogenicity for irreducible f with p | delta.
pub fn closed_form_monogenic(fam: &TrinomialFamily, cfg: &Config) -> Result<ClosedFormVerdict> {
    if !family_irreducibility(fam, cfg)?.irreducible {
        return Err(Error::Reducible);
    }
    closed_form_monogenic_assuming_irreducible(fam, &cfg.factor)
}

pub fn closed_form_monogenic_assuming_irreducible(
    fam: &TrinomialFamily,
    budget: &FactorBudget,
) -> Result<ClosedFormVerdict> {
    if !fam.p_divides_delta() {
        return Err(Error::InvalidFamily(format!(
            "{fam}: the closed form needs p | delta"
        )));
    }
    let (p, a, b) = (fam.p, &fam.a, &fam.b);
    let b_one = b.is_one();
    let b_neg_one = *b == BigInt::from(-1);
    let abs_a = a.magnitude();
    let class = galois_class_assuming_irreducible(fam);
    let exceptional = |set, member: bool| ClosedFormVerdict {
        rule: ClosedFormRule::Exceptional { set, member },
        monogenic: member,
    };
    let verdict = match class.kind {
        GaloisKind::Frobenius => {
            let member = (p == 5 && *abs_a == BigUint::from(3u32) && b_one)
                || (b_neg_one && BigUint::from(p) == abs_a * abs_a + 4u32);
            exceptional(ExceptionalSet::Frobenius, member)
        }
        GaloisKind::HalfTimesC2 => {
            let member = p == 3 && abs_a.is_one() && b_one;
            exceptional(ExceptionalSet::Half, member)
        }
        GaloisKind::FullTimesC2 if signed_square_witness(&delta(fam), p, -galois_sign(p)).is_some() => {
            let member = p == 3 && *abs_a == BigUint::from(4u32) && b_one;
            exceptional(ExceptionalSet::FullSignedSquare, member)
        }
        GaloisKind::FullTimesC2 => full_squarefree_rule(a, b, budget)?,
    };
    Ok(verdict)
}

fn full_squarefree_rule(a: &BigInt, b: &BigInt, budget: &FactorBudget) -> Result<ClosedFormVerdict> {
    let check = |label: &'static str, value: BigInt| -> Result<SquarefreeCheck> {
        let squarefree = is_squarefree(&value, budget)?;
        Ok(SquarefreeCheck {
            label,
            value,
            squarefree,
        })
    };
    let (checks, four_divides_a, monogenic) = if b.is_one() {
        let checks = vec![check("a-2", a - 2)?, check("a+2", a + 2)?];
        let ok = checks.iter().all(|c| c.squarefree);
        (checks, None, ok)
    } else if *b == BigInt::from(-1) {
        let g = a.gcd(&BigInt::from(2));
        let four = a.is_multiple_of(&BigInt::from(4));
        let checks = vec![check("(a^2+4)/gcd(2,a)^2", (a * a + 4) / (&g * &g))?];
        let ok = !four && checks[0].squarefree;
        (checks, Some(four), ok)
    } else {
        (Vec::new(), None, false)
    };
    Ok(ClosedFormVerdict {
        rule: ClosedFormRule::FullSquarefree {
            checks,
            four_divides_a,
        },
        monogenic,
    })
}

/// One step of a classification, in the order applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    Irreducibility(IrreducibilityVerdict),
    Galois {
        #[serde(serialize_with = "crate::report::serialize_display")]
        class: GaloisClass,
    },
    /// |b| != 1 with p | delta: g(0) = b^p is not squarefree.
    NonUnitB,
    ClosedForm(ClosedFormVerdict),
    Composition(KkrVerdict),
    /// Prime-square scan over the discriminant of f.
    GenericScan {
        monogenic: bool,
        trace: Vec<IndexVerdict>,
    },
    Unknown {
        error: String,
    },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Irreducibility(v) => {
                write!(f, "{} by {}", if v.irreducible { "irreducible" } else { "reducible" }, v.method)?;
                if let Some(u) = &v.witness {
                    write!(f, " (u = {u})")?;
                }
                Ok(())
            }
            Rule::Galois { class } => write!(f, "Galois group {class}"),
            Rule::NonUnitB => f.write_str("g(0) = b^p not squarefree"),
            Rule::ClosedForm(v) => write!(f, "{v}"),
            Rule::Composition(v) => write!(f, "{v}"),
            Rule::GenericScan { monogenic, trace } => {
                f.write_str("generic JKS scan:")?;
                if trace.is_empty() {
                    f.write_str(" squarefree discriminant")?;
                }
                for v in trace {
                    write!(
                        f,
                        " q = {} {} ({});",
                        v.q,
                        if v.divides_index { "divides index" } else { "index-free" },
                        v.condition_used
                    )?;
                }
                write!(f, " => {monogenic}")
            }
            Rule::Unknown { error } => write!(f, "unknown: {error}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub family: TrinomialFamily,
    pub delta: BigInt,
    pub disc_f: BigInt,
    pub irreducible: bool,
    /// None when |b| != 1 and p | delta, where no label applies.
    pub case: Option<CaseLabel>,
    pub galois: Option<GaloisClass>,
    /// None when f is reducible or the verdict could not be reached.
    pub monogenic: Option<bool>,
    /// Equals disc_f exactly when f is monogenic.
    pub field_discriminant: Option<BigInt>,
    pub reason: Vec<Rule>,
}

impl Classification {
    /// Irreducible, but the monogenicity verdict hit a budget.
    pub fn is_unknown(&self) -> bool {
        self.irreducible && self.monogenic.is_none()
    }
}

/// Full classification of one family.
pub fn classify(fam: &TrinomialFamily, cfg: &Config) -> Result<Classification> {
    let mut out = Classification {
        family: fam.clone(),
        delta: delta(fam),
        disc_f: swan_disc_f(fam),
        irreducible: false,
        case: case_label(fam).ok(),
        galois: None,
        monogenic: None,
        field_discriminant: None,
        reason: Vec::new(),
    };
    let irr = match family_irreducibility(fam, cfg) {
        Ok(v) => v,
        Err(e) if e.is_unknown() => {
            out.reason.push(Rule::Unknown { error: e.to_string() });
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.irreducible = irr.irreducible;
    out.reason.push(Rule::Irreducibility(irr));
    if !out.irreducible {
        return Ok(out);
    }
    let class = galois_class_assuming_irreducible(fam);
    out.galois = Some(class);
    out.reason.push(Rule::Galois { class });

    match monogenicity_rules(fam, cfg) {
        Ok((monogenic, rules)) => {
            out.monogenic = Some(monogenic);
            out.reason.extend(rules);
        }
        Err(e) if e.is_unknown() => out.reason.push(Rule::Unknown { error: e.to_string() }),
        Err(e) => return Err(e),
    }
    if out.monogenic == Some(true) {
        out.field_discriminant = Some(out.disc_f.clone());
    }
    Ok(out)
}

fn monogenicity_rules(fam: &TrinomialFamily, cfg: &Config) -> Result<(bool, Vec<Rule>)> {
    if !fam.p_divides_delta() {
        let (monogenic, rule) = generic_scan(fam, &cfg.factor)?;
        return Ok((monogenic, vec![rule]));
    }
    if !is_unit(&fam.b) {
        return Ok((false, vec![Rule::NonUnitB]));
    }
    let closed = closed_form_monogenic_assuming_irreducible(fam, &cfg.factor)?;
    let kkr = kkr_monogenic_assuming_irreducible(fam, &cfg.factor)?;
    let (generic, generic_rule) = generic_scan(fam, &cfg.factor)?;
    if closed.monogenic != kkr.monogenic || kkr.monogenic != generic {
        return Err(Error::Inconsistent(format!(
            "{fam}: closed form {}, composition {}, generic scan {generic}",
            closed.monogenic, kkr.monogenic
        )));
    }
    Ok((
        generic,
        vec![Rule::ClosedForm(closed), Rule::Composition(kkr), generic_rule],
    ))
}

fn generic_scan(fam: &TrinomialFamily, budget: &FactorBudget) -> Result<(bool, Rule)> {
    let report = trinomial_is_monogenic_assuming_irreducible(&fam.trinomial(), budget)?;
    Ok((
        report.monogenic,
        Rule::GenericScan {
            monogenic: report.monogenic,
            trace: report.trace,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalEntry {
    pub set: ExceptionalSet,
    pub p: u64,
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub b: BigInt,
}

/// Monogenic families with p | delta falling in a finite exceptional set,
/// for primes 3 <= p <= p_max, 0 < |a| <= a_max and b = ±1. Sorted by set,
/// then (p, a, b).
pub fn exceptional_sets(p_max: u64, a_max: u64, cfg: &Config) -> Result<Vec<ExceptionalEntry>> {
    let mut out = Vec::new();
    for p in (3..=p_max).filter(|&p| is_prime_u64(p)) {
        for a in 1..=a_max {
            for a in [-BigInt::from(a), BigInt::from(a)] {
                for b in [-1i64, 1] {
                    let fam = TrinomialFamily::new(p, a.clone(), BigInt::from(b))?;
                    if !fam.p_divides_delta() {
                        continue;
                    }
                    let c = classify(&fam, cfg)?;
                    if c.monogenic != Some(true) {
                        continue;
                    }
                    let set = c.reason.iter().find_map(|r| match r {
                        Rule::ClosedForm(ClosedFormVerdict {
                            rule: ClosedFormRule::Exceptional { set, .. },
                            ..
                        }) => Some(*set),
                        _ => None,
                    });
                    if let Some(set) = set {
                        out.push(ExceptionalEntry {
                            set,
                            p,
                            a: a.clone(),
                            b: BigInt::from(b),
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| (x.set, x.p, &x.a, &x.b).cmp(&(y.set, y.p, &y.a, &y.b)));
    Ok(out)
}
