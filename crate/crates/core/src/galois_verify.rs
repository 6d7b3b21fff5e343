//! Frobenius sampling as an independent check on the claimed Galois class:
//! the lcm of the factor degrees of f mod l is the order of a Frobenius
//! element, and complete splitting happens with density 1/|G|.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::classify::{
    family_irreducibility, galois_class_assuming_irreducible, GaloisClass, GaloisKind,
    TrinomialFamily,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::degree_pattern;

/// At and above this many sampled primes every sufficiently common element
/// order of the claimed group must have been observed.
pub const FULL_COVERAGE_PRIMES: usize = 2000;

/// An element order counts as sufficiently common when its Chebotarev
/// density times the sample size reaches this many primes.
pub const COVERAGE_MIN_EXPECTED: f64 = 20.0;

/// The split-fraction band is never narrower than this many binomial
/// standard errors around 1/|G|.
pub const SPLIT_SIGMA_FLOOR: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSpectrum {
    pub group: GaloisKind,
    pub p: u64,
    pub orders: BTreeSet<u64>,
    /// Number of group elements of each order.
    pub counts: BTreeMap<u64, u64>,
}

impl OrderSpectrum {
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| acc.lcm(&o))
    }
}

fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut prime_factors = Vec::new();
    let mut rest = phi;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            prime_factors.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        prime_factors.push(rest);
    }
    (2..p)
        .find(|&g| prime_factors.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .unwrap_or(1)
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Element orders of the group, found by running through every element.
///
/// The groups are realized as affine maps x -> u x + t of F_p with u in the
/// subgroup of order k of F_p^*, optionally times C_2. For each u the
/// iterates (u^n, 1 + u + ... + u^(n-1)) are walked once; the map (u, t)
/// has order n at the first n with u^n = 1 and t (1 + ... + u^(n-1)) = 0.
pub fn element_order_spectrum(group: GaloisKind, p: u64) -> Result<OrderSpectrum> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let class = GaloisClass::new(group, p);
    let k = class.complement_order();
    let h = pow_mod(primitive_root(p), (p - 1) / k, p);
    let mut counts = BTreeMap::new();
    let mut u = 1u64;
    for _ in 0..k {
        // first n with u^n = 1, and first n with u^n = 1 and the sum vanishing
        let (mut un, mut sum) = (1u64, 0u64);
        let mut order_t0 = None;
        let mut order_t = None;
        let mut n = 0u64;
        while order_t.is_none() {
            sum = (sum + un) % p;
            un = ((un as u128 * u as u128) % p as u128) as u64;
            n += 1;
            if un == 1 {
                order_t0.get_or_insert(n);
                if sum == 0 {
                    order_t = Some(n);
                }
            }
        }
        let (order_t0, order_t) = (order_t0.unwrap(), order_t.unwrap());
        for t in 0..p {
            let o = if t == 0 { order_t0 } else { order_t };
            *counts.entry(o).or_insert(0) += 1;
            if class.has_c2_factor() {
                *counts.entry(o.lcm(&2)).or_insert(0) += 1;
            }
        }
        u = ((u as u128 * h as u128) % p as u128) as u64;
    }
    Ok(OrderSpectrum {
        group,
        p,
        orders: counts.keys().copied().collect(),
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    #[serde(skip)]
    pub family: TrinomialFamily,
    /// The class the family is assigned by its delta.
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub claimed: GaloisClass,
    pub primes_used: usize,
    pub largest_prime: u64,
    /// Frobenius order -> number of primes.
    pub observed_orders: BTreeMap<u64, usize>,
    /// Degree pattern -> number of primes.
    pub patterns: BTreeMap<Vec<usize>, usize>,
    pub split_count: usize,
    pub split_fraction: f64,
    /// Result of [`consistency_check`] against `claimed`.
    pub verdict: Verdict,
}

impl SampleReport {
    pub fn observed_order_set(&self) -> BTreeSet<u64> {
        self.observed_orders.keys().copied().collect()
    }
}

/// Degree patterns of f modulo the first `prime_budget` unramified primes.
pub fn frobenius_sample(
    fam: &TrinomialFamily,
    prime_budget: usize,
    cfg: &Config,
) -> Result<SampleReport> {
    if !family_irreducibility(fam, cfg)?.irreducible {
        return Err(Error::Reducible);
    }
    let f = fam.polynomial();
    let mut patterns_in_order: Vec<(u64, Vec<usize>)> = Vec::with_capacity(prime_budget);
    let mut next = 2u64;
    while patterns_in_order.len() < prime_budget {
        let want = prime_budget - patterns_in_order.len();
        let mut batch = Vec::with_capacity(want + 16);
        while batch.len() < want + 16 {
            if is_prime_u64(next) {
                batch.push(next);
            }
            next += 1;
        }
        let results: Vec<Result<Option<(u64, Vec<usize>)>>> = batch
            .par_iter()
            .map(|&l| match degree_pattern(&f, &BigUint::from(l)) {
                Ok(pattern) => Ok(Some((l, pattern))),
                Err(Error::RamifiedPrime(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect();
        for r in results {
            if patterns_in_order.len() == prime_budget {
                break;
            }
            if let Some(entry) = r? {
                patterns_in_order.push(entry);
            }
        }
    }

    let mut observed_orders = BTreeMap::new();
    let mut patterns = BTreeMap::new();
    let mut split_count = 0;
    for (_, pattern) in &patterns_in_order {
        let order = pattern.iter().fold(1u64, |acc, &d| acc.lcm(&(d as u64)));
        *observed_orders.entry(order).or_insert(0) += 1;
        if pattern.iter().all(|&d| d == 1) {
            split_count += 1;
        }
        *patterns.entry(pattern.clone()).or_insert(0) += 1;
    }
    let primes_used = patterns_in_order.len();
    let claimed = galois_class_assuming_irreducible(fam);
    let mut report = SampleReport {
        family: fam.clone(),
        claimed,
        primes_used,
        largest_prime: patterns_in_order.last().map_or(0, |(l, _)| *l),
        observed_orders,
        patterns,
        split_count,
        split_fraction: if primes_used == 0 {
            0.0
        } else {
            split_count as f64 / primes_used as f64
        },
        verdict: Verdict::Inconclusive,
    };
    report.verdict = consistency_check(fam, &claimed, &report, cfg)?;
    Ok(report)
}

/// Tests a claimed class against a sample. Observed orders must lie in the
/// spectrum. On large samples every common order must appear. The split
/// fraction must lie within the configured relative tolerance of 1/|G|, or
/// within [`SPLIT_SIGMA_FLOOR`] standard errors when that is wider.
pub fn consistency_check(
    fam: &TrinomialFamily,
    claimed: &GaloisClass,
    report: &SampleReport,
    cfg: &Config,
) -> Result<Verdict> {
    if report.family != *fam || claimed.p != fam.p() {
        return Err(Error::InvalidFamily(format!(
            "report for {} does not match {fam}",
            report.family
        )));
    }
    if report.primes_used < cfg.min_sample_primes {
        return Ok(Verdict::Inconclusive);
    }
    let spectrum = element_order_spectrum(claimed.kind, claimed.p)?;
    let observed = report.observed_order_set();
    if !observed.is_subset(&spectrum.orders) {
        return Ok(Verdict::Inconsistent);
    }
    let n = report.primes_used as f64;
    let group_order = claimed.order() as f64;
    if report.primes_used >= FULL_COVERAGE_PRIMES {
        let missing = spectrum
            .counts
            .iter()
            .any(|(o, &c)| c as f64 / group_order * n >= COVERAGE_MIN_EXPECTED && !observed.contains(o));
        if missing {
            return Ok(Verdict::Inconsistent);
        }
    }
    let expected = 1.0 / group_order;
    let standard_error = (expected * (1.0 - expected) / n).sqrt();
    let band = (cfg.sampling_tolerance * expected).max(SPLIT_SIGMA_FLOOR * standard_error);
    if (report.split_fraction - expected).abs() > band {
        return Ok(Verdict::Inconsistent);
    }
    Ok(Verdict::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    /// Brute-force element orders of (Z/p) ⋊ H (× C2) using explicit
    /// composition of affine maps.
    fn brute_spectrum(kind: GaloisKind, p: u64) -> BTreeMap<u64, u64> {
        let class = GaloisClass::new(kind, p);
        let k = class.complement_order();
        let units: Vec<u64> = (1..p).filter(|&u| pow_mod(u, k, p) == 1).collect();
        assert_eq!(units.len() as u64, k);
        let mut out = BTreeMap::new();
        for &u in &units {
            for t in 0..p {
                let (mut cu, mut ct, mut n) = (u, t, 1u64);
                while !(cu == 1 && ct == 0) {
                    // (u, t) after (cu, ct): x -> u (cu x + ct) + t
                    ct = (u * ct + t) % p;
                    cu = cu * u % p;
                    n += 1;
                }
                for c in 0..if class.has_c2_factor() { 2 } else { 1 } {
                    *out.entry(if c == 0 { n } else { n.lcm(&2) }).or_insert(0) += 1;
                }
            }
        }
        out
    }

    #[test]
    fn spectra_examples() {
        assert_eq!(element_order_spectrum(GaloisKind::Frobenius, 5).unwrap().orders, set(&[1, 2, 4, 5]));
        assert_eq!(element_order_spectrum(GaloisKind::HalfTimesC2, 3).unwrap().orders, set(&[1, 2, 3, 6]));
        assert_eq!(element_order_spectrum(GaloisKind::FullTimesC2, 3).unwrap().orders, set(&[1, 2, 3, 6]));
        assert!(element_order_spectrum(GaloisKind::Frobenius, 9).is_err());
    }

    #[test]
    fn spectra_match_brute_force_and_exponent() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for kind in GaloisKind::ALL {
                let s = element_order_spectrum(kind, p).unwrap();
                let brute = brute_spectrum(kind, p);
                assert_eq!(s.counts, brute, "{kind:?} at {p}");
                assert_eq!(s.orders, brute.keys().copied().collect::<BTreeSet<_>>());
                let class = GaloisClass::new(kind, p);
                assert_eq!(s.counts.values().sum::<u64>() as u128, class.order());
                let mut exponent = p.lcm(&class.complement_order());
                if class.has_c2_factor() {
                    exponent = exponent.lcm(&2);
                }
                assert_eq!(s.exponent(), exponent);
                let order = class.order() as u64;
                assert!(s.orders.iter().all(|o| order % o == 0));
            }
        }
    }

    #[test]
    fn small_sample_is_inconclusive() {
        let cfg = Config::default();
        let fam = TrinomialFamily::from_i64(5, 3, 1).unwrap();
        let r = frobenius_sample(&fam, 50, &cfg).unwrap();
        assert_eq!(r.primes_used, 50);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn large_group_small_sample_is_not_inconsistent() {
        // order 84: about 3.6 complete splittings expected in 300 primes
        let cfg = Config::default();
        let fam = TrinomialFamily::from_i64(7, 1, -1).unwrap();
        let r = frobenius_sample(&fam, 300, &cfg).unwrap();
        assert_eq!(r.claimed.order(), 84);
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn reducible_family_is_rejected() {
        let fam = TrinomialFamily::from_i64(3, 2, 1).unwrap();
        assert_eq!(frobenius_sample(&fam, 100, &Config::default()), Err(Error::Reducible));
    }

    #[test]
    fn sample_skips_ramified_primes() {
        let cfg = Config::default();
        // discriminant 3^9 (up to sign): 3 is the only ramified prime
        let fam = TrinomialFamily::from_i64(3, 1, 1).unwrap();
        let r = frobenius_sample(&fam, 120, &cfg).unwrap();
        assert_eq!(r.primes_used, 120);
        let total: usize = r.observed_orders.values().sum();
        assert_eq!(total, 120);
        // the 121st prime is 661; skipping 3 makes the 120th sampled prime 661
        assert_eq!(r.largest_prime, 661);
    }
}
