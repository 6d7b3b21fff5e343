//! Batch drivers behind the command-line tool: grid enumeration, the scan over
//! primes of the form z^2 + 4, and the JKS/Dedekind cross-check.

use std::fmt;

use num_bigint::BigInt;
#[cfg(test)]
use num_bigint::BigUint;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::classify::{
    classify, delta, family_irreducibility, galois_class_assuming_irreducible, CaseKind,
    Classification, GaloisClass, GaloisKind, TrinomialFamily,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::indexcheck::{dedekind_divides_index, jks_index_free_assuming_irreducible, GeneralTrinomial};
use crate::poly::is_irreducible_over_q;
use crate::report::{serialize_option_display, Record};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerateFilter {
    pub monogenic_only: bool,
    pub p_divides_delta_only: bool,
    pub case: Option<CaseKind>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateGrid {
    pub primes: Vec<u64>,
    pub a_min: i64,
    pub a_max: i64,
    pub b_values: Vec<i64>,
    pub filter: EnumerateFilter,
}

/// A family that could not be classified, e.g. because the monogenicity
/// routes disagreed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedRow {
    pub family: TrinomialFamily,
    pub error: Error,
}

pub type Row = std::result::Result<Classification, FailedRow>;

/// Classifies every (p, a, b) in the grid (a and b nonzero), in (p, a, b)
/// order, keeping rows that pass the filter. Failed rows are always kept.
pub fn enumerate(grid: &EnumerateGrid, cfg: &Config) -> Result<Vec<Row>> {
    if grid.a_min > grid.a_max {
        return Err(Error::InvalidFamily(format!(
            "empty a range [{}, {}]",
            grid.a_min, grid.a_max
        )));
    }
    let mut primes = grid.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    let mut bs = grid.b_values.clone();
    bs.sort_unstable();
    bs.dedup();
    let mut families = Vec::new();
    for &p in &primes {
        for a in grid.a_min..=grid.a_max {
            for &b in &bs {
                if a != 0 && b != 0 {
                    families.push(TrinomialFamily::from_i64(p, a, b)?);
                }
            }
        }
    }
    let rows: Vec<Row> = families
        .par_iter()
        .map(|fam| {
            classify(fam, cfg).map_err(|error| FailedRow {
                family: fam.clone(),
                error,
            })
        })
        .collect();
    Ok(rows
        .into_iter()
        .filter(|row| match row {
            Ok(c) => keep(c, &grid.filter),
            Err(_) => true,
        })
        .collect())
}

fn keep(c: &Classification, filter: &EnumerateFilter) -> bool {
    if filter.monogenic_only && c.monogenic != Some(true) {
        return false;
    }
    if filter.p_divides_delta_only && (delta(&c.family) % BigInt::from(c.family.p())) != BigInt::from(0) {
        return false;
    }
    if let Some(kind) = filter.case {
        if c.case.as_ref().map(|l| l.kind) != Some(kind) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Unknown,
    Inconsistent,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Unknown => "unknown",
            RowStatus::Inconsistent => "inconsistent",
        })
    }
}

/// One z of the scan over p = z^2 + 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub z: u64,
    pub p: u64,
    pub p_is_prime: bool,
    /// (z^2 + 4, z, -1) when p is prime.
    #[serde(serialize_with = "serialize_option_display")]
    pub family: Option<TrinomialFamily>,
    pub monogenic: Option<bool>,
    #[serde(serialize_with = "serialize_option_display")]
    pub galois: Option<GaloisClass>,
    /// No other a in [1, floor(sqrt p)] gives a monogenic (p, a, -1) of the
    /// same Galois class.
    pub unique: Option<bool>,
    pub status: RowStatus,
    pub note: Option<String>,
}

pub const SCAN_FIELDS: [&str; 9] = [
    "z",
    "p",
    "p_is_prime",
    "family",
    "monogenic",
    "galois",
    "unique",
    "status",
    "note",
];

fn cell<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl Record for ScanRow {
    fn headers() -> &'static [&'static str] {
        &SCAN_FIELDS
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.z.to_string(),
            self.p.to_string(),
            self.p_is_prime.to_string(),
            cell(&self.family),
            cell(&self.monogenic),
            cell(&self.galois),
            cell(&self.unique),
            self.status.to_string(),
            cell(&self.note),
        ]
    }
}

/// For z = 1..=z_max and each prime p = z^2 + 4: (p, z, -1) must be monogenic
/// with Galois group C_p ⋊ C_(p-1), and no other a in [1, floor(sqrt p)] may
/// give a monogenic (p, a, -1) with that group.
pub fn corollary_scan(z_max: u64, cfg: &Config) -> Result<Vec<ScanRow>> {
    if z_max == 0 {
        return Err(Error::InvalidFamily("z_max must be at least 1".into()));
    }
    if z_max > 65_000 {
        return Err(Error::InvalidFamily(format!("z_max = {z_max} is too large")));
    }
    (1..=z_max)
        .into_par_iter()
        .map(|z| scan_row(z, cfg))
        .collect()
}

fn scan_row(z: u64, cfg: &Config) -> Result<ScanRow> {
    let p = z * z + 4;
    let mut row = ScanRow {
        z,
        p,
        p_is_prime: is_prime_u64(p),
        family: None,
        monogenic: None,
        galois: None,
        unique: None,
        status: RowStatus::Ok,
        note: None,
    };
    if !row.p_is_prime {
        return Ok(row);
    }
    let fam = TrinomialFamily::from_i64(p, z as i64, -1)?;
    row.family = Some(fam.clone());
    let c = match classify(&fam, cfg) {
        Ok(c) => c,
        Err(e) if e.is_unknown() => {
            row.status = RowStatus::Unknown;
            row.note = Some(e.to_string());
            return Ok(row);
        }
        Err(e) => {
            row.status = RowStatus::Inconsistent;
            row.note = Some(e.to_string());
            return Ok(row);
        }
    };
    row.monogenic = c.monogenic;
    row.galois = c.galois;
    if c.is_unknown() {
        row.status = RowStatus::Unknown;
        row.note = Some("monogenicity undecided within budget".into());
        return Ok(row);
    }
    let mut problems = Vec::new();
    if c.monogenic != Some(true) {
        problems.push("family is not monogenic".to_string());
    }
    if c.galois.map(|g| g.kind) != Some(GaloisKind::Frobenius) {
        problems.push("Galois group is not C_p ⋊ C_(p-1)".to_string());
    }
    let rivals = rival_values(p, z, cfg)?;
    row.unique = Some(rivals.is_empty());
    if !rivals.is_empty() {
        problems.push(format!("other monogenic a: {rivals:?}"));
    }
    if !problems.is_empty() {
        row.status = RowStatus::Inconsistent;
        row.note = Some(problems.join("; "));
    }
    Ok(row)
}

/// a in [1, floor(sqrt p)], a != z, with (p, a, -1) monogenic of Frobenius class.
fn rival_values(p: u64, z: u64, cfg: &Config) -> Result<Vec<u64>> {
    let mut rivals = Vec::new();
    for a in (1..=p.sqrt()).filter(|&a| a != z) {
        let fam = TrinomialFamily::from_i64(p, a as i64, -1)?;
        if !family_irreducibility(&fam, cfg)?.irreducible {
            continue;
        }
        if galois_class_assuming_irreducible(&fam).kind != GaloisKind::Frobenius {
            continue;
        }
        if classify(&fam, cfg)?.monogenic == Some(true) {
            rivals.push(a);
        }
    }
    Ok(rivals)
}

/// Which trinomials the cross-check runs over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corpus {
    /// Irreducible x^n + A x^m + B with 2 <= n <= max_degree and
    /// 0 < |A|, |B| <= coeff_bound, drawn from a seeded generator.
    Random {
        instances: usize,
        max_degree: usize,
        coeff_bound: i64,
    },
    /// x^(2p) + a x^p + b^p over the given primes, 0 < |a| <= a_max, b = ±1.
    FamilyGrid { primes: Vec<u64>, a_max: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckSummary {
    pub corpus: String,
    /// Irreducible trinomials examined.
    pub instances: usize,
    /// (trinomial, prime) pairs compared.
    pub total: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Trinomials whose discriminant could not be factored within budget.
    pub skipped_unknown: usize,
    pub disagreement_details: Vec<String>,
}

pub const CROSSCHECK_FIELDS: [&str; 7] = [
    "corpus",
    "instances",
    "total",
    "agreements",
    "disagreements",
    "skipped_unknown",
    "disagreement_details",
];

impl Record for CrosscheckSummary {
    fn headers() -> &'static [&'static str] {
        &CROSSCHECK_FIELDS
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.corpus.clone(),
            self.instances.to_string(),
            self.total.to_string(),
            self.agreements.to_string(),
            self.disagreements.to_string(),
            self.skipped_unknown.to_string(),
            self.disagreement_details.join("; "),
        ]
    }
}

/// Draws the random corpus: `instances` distinct irreducible trinomials.
pub fn random_corpus(
    instances: usize,
    max_degree: usize,
    coeff_bound: i64,
    cfg: &Config,
) -> Result<Vec<GeneralTrinomial>> {
    if max_degree < 2 || coeff_bound < 1 {
        return Err(Error::InvalidTrinomial(
            "need max_degree >= 2 and coeff_bound >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(instances);
    let max_attempts = 200 * instances.max(1);
    for _ in 0..max_attempts {
        if out.len() == instances {
            break;
        }
        let n = rng.gen_range(2..=max_degree);
        let m = rng.gen_range(1..n);
        let a = nonzero(&mut rng, coeff_bound);
        let b = nonzero(&mut rng, coeff_bound);
        let t = GeneralTrinomial::from_i64(n, m, a, b)?;
        if !seen.insert(t.clone()) || t.swan_discriminant().is_zero() {
            continue;
        }
        if is_irreducible_over_q(&t.polynomial(), &cfg.irreducibility)? {
            out.push(t);
        }
    }
    Ok(out)
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

fn family_corpus(primes: &[u64], a_max: i64, cfg: &Config) -> Result<Vec<GeneralTrinomial>> {
    let mut out = Vec::new();
    for &p in primes {
        for a in (-a_max..=a_max).filter(|&a| a != 0) {
            for b in [-1i64, 1] {
                let fam = TrinomialFamily::from_i64(p, a, b)?;
                if family_irreducibility(&fam, cfg)?.irreducible {
                    out.push(fam.trinomial());
                }
            }
        }
    }
    Ok(out)
}

enum InstanceOutcome {
    Unknown,
    Checked {
        agreements: usize,
        disagreements: Vec<String>,
    },
}

fn check_instance(t: &GeneralTrinomial, cfg: &Config) -> Result<InstanceOutcome> {
    let disc = match t.swan_discriminant().factored(&cfg.factor) {
        Ok(d) => d,
        Err(e) if e.is_unknown() => return Ok(InstanceOutcome::Unknown),
        Err(e) => return Err(e),
    };
    let f = t.polynomial();
    let mut agreements = 0;
    let mut disagreements = Vec::new();
    for q in disc.primes() {
        let jks = jks_index_free_assuming_irreducible(t, q)?;
        let dedekind = dedekind_divides_index(&f, q, cfg)?;
        if jks.divides_index == dedekind {
            agreements += 1;
        } else {
            disagreements.push(format!(
                "{t} at q = {q}: JKS ({}) says {}, Dedekind says {}",
                jks.condition_used, jks.divides_index, dedekind
            ));
        }
    }
    Ok(InstanceOutcome::Checked {
        agreements,
        disagreements,
    })
}

/// Compares the JKS verdict with Dedekind's criterion at every prime dividing
/// the discriminant of every trinomial in the corpus.
pub fn crosscheck(corpus: &Corpus, cfg: &Config) -> Result<CrosscheckSummary> {
    let (label, trinomials) = match corpus {
        Corpus::Random {
            instances,
            max_degree,
            coeff_bound,
        } => (
            format!("random n<={max_degree} |A|,|B|<={coeff_bound} seed={}", cfg.seed),
            random_corpus(*instances, *max_degree, *coeff_bound, cfg)?,
        ),
        Corpus::FamilyGrid { primes, a_max } => (
            format!("family grid p in {primes:?} |a|<={a_max} b=±1"),
            family_corpus(primes, *a_max, cfg)?,
        ),
    };
    let outcomes: Vec<Result<InstanceOutcome>> =
        trinomials.par_iter().map(|t| check_instance(t, cfg)).collect();
    let mut summary = CrosscheckSummary {
        corpus: label,
        instances: trinomials.len(),
        total: 0,
        agreements: 0,
        disagreements: 0,
        skipped_unknown: 0,
        disagreement_details: Vec::new(),
    };
    for outcome in outcomes {
        match outcome? {
            InstanceOutcome::Unknown => summary.skipped_unknown += 1,
            InstanceOutcome::Checked {
                agreements,
                disagreements,
            } => {
                summary.agreements += agreements;
                summary.disagreements += disagreements.len();
                summary.total += agreements + disagreements.len();
                summary.disagreement_details.extend(disagreements);
            }
        }
    }
    Ok(summary)
}

/// Exit status for a batch: 3 if anything was inconsistent, 2 if anything was
/// undecided, 0 otherwise.
pub fn exit_status(inconsistent: bool, unknown: bool) -> i32 {
    if inconsistent {
        3
    } else if unknown {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_p3_monogenic_with_p_dividing_delta() {
        let grid = EnumerateGrid {
            primes: vec![3],
            a_min: -5,
            a_max: 5,
            b_values: vec![1],
            filter: EnumerateFilter {
                monogenic_only: true,
                p_divides_delta_only: true,
                case: None,
            },
        };
        let rows = enumerate(&grid, &Config::default()).unwrap();
        let a: Vec<i64> = rows
            .iter()
            .map(|r| i64::try_from(r.as_ref().unwrap().family.a()).unwrap())
            .collect();
        assert_eq!(a, vec![-5, -4, -1, 1, 4, 5]);
    }

    #[test]
    fn enumerate_p5_monogenic_with_p_dividing_delta() {
        let grid = EnumerateGrid {
            primes: vec![5],
            a_min: -10,
            a_max: 10,
            b_values: vec![1],
            filter: EnumerateFilter {
                monogenic_only: true,
                p_divides_delta_only: true,
                case: None,
            },
        };
        let rows = enumerate(&grid, &Config::default()).unwrap();
        let a: Vec<i64> = rows
            .iter()
            .map(|r| i64::try_from(r.as_ref().unwrap().family.a()).unwrap())
            .collect();
        assert_eq!(a, vec![-8, -3, 3, 8]);
    }

    #[test]
    fn enumerate_non_unit_b_never_monogenic() {
        let grid = EnumerateGrid {
            primes: vec![3],
            a_min: -5,
            a_max: 5,
            b_values: vec![2],
            filter: EnumerateFilter::default(),
        };
        let rows = enumerate(&grid, &Config::default()).unwrap();
        assert_eq!(rows.len(), 10);
        for r in rows {
            let c = r.unwrap();
            assert_ne!(c.monogenic, Some(true), "{}", c.family);
        }
    }

    #[test]
    fn enumerate_case_filter() {
        let grid = EnumerateGrid {
            primes: vec![3],
            a_min: -9,
            a_max: 9,
            b_values: vec![1],
            filter: EnumerateFilter {
                case: Some(CaseKind::OmegaB1),
                ..Default::default()
            },
        };
        let rows = enumerate(&grid, &Config::default()).unwrap();
        assert!(!rows.is_empty());
        assert!(rows
            .iter()
            .all(|r| r.as_ref().unwrap().case.as_ref().unwrap().kind == CaseKind::OmegaB1));
    }

    #[test]
    fn corollary_scan_small() {
        let rows = corollary_scan(20, &Config::default()).unwrap();
        let primes: Vec<u64> = rows.iter().filter(|r| r.p_is_prime).map(|r| r.z).collect();
        assert_eq!(primes, vec![1, 3, 5, 7, 13, 15, 17]);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok, "{r:?}");
        }
        let z9 = &rows[8];
        assert_eq!((z9.p, z9.p_is_prime, z9.family.is_none()), (85, false, true));
        let z1 = &rows[0];
        assert_eq!(z1.monogenic, Some(true));
        assert_eq!(z1.unique, Some(true));
    }

    #[test]
    fn crosscheck_corpora() {
        let cfg = Config::default();
        let empty = crosscheck(
            &Corpus::Random {
                instances: 0,
                max_degree: 12,
                coeff_bound: 20,
            },
            &cfg,
        )
        .unwrap();
        assert_eq!((empty.instances, empty.total), (0, 0));
        let grid = crosscheck(
            &Corpus::FamilyGrid {
                primes: vec![3, 5],
                a_max: 12,
            },
            &cfg,
        )
        .unwrap();
        assert!(grid.instances > 0);
        assert_eq!(grid.disagreements, 0);
        assert_eq!(grid.agreements, grid.total);
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let cfg = Config::default();
        let a = random_corpus(40, 12, 20, &cfg).unwrap();
        let b = random_corpus(40, 12, 20, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        assert!(a.iter().all(|t| t.n() <= 12 && t.a().magnitude() <= &BigUint::from(20u32)));
    }

    #[test]
    fn exit_status_priority() {
        assert_eq!(exit_status(true, true), 3);
        assert_eq!(exit_status(false, true), 2);
        assert_eq!(exit_status(false, false), 0);
    }
}
