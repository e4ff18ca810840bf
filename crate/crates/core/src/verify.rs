//! The acceptance checks, shared by `census verify` and the acceptance test
//! target. Each check is deterministic for its fixed seed.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::complexity;
use crate::error::Error;
use crate::genericity::{self, DensitySeries, Lambda};
use crate::presentations::{self, CandidatePool, ClassParams, Presentation, SearchBudget};
use crate::symmetry::{self, all_relabelings, OrbitMethod, Relabeling};
use crate::words::{self, trial_rng, Letter, Word, WordSet, DEFAULT_ENUMERATION_CAP};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub type Check = fn(u64) -> CriterionResult;

/// `(id, name, check)` for every criterion, in order.
pub const CRITERIA: [(u8, &str, Check); 12] = [
    (1, "rivin-exactness", rivin_exactness),
    (2, "free-count-exactness", free_count_exactness),
    (3, "orbit-census", orbit_census),
    (4, "y-set-cardinality", y_set_cardinality),
    (5, "genericity-decay", genericity_decay),
    (6, "small-cancellation-density", small_cancellation_density),
    (7, "dehn-oracle", dehn_oracle),
    (8, "relator-recovery", relator_recovery),
    (9, "encoding", encoding),
    (10, "tietze-cleanup", tietze),
    (11, "kraft", kraft),
    (12, "incompressibility", incompressibility),
];

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(_, _, f)| f(seed)).collect()
}

pub fn run_one(id: u8, seed: u64) -> Option<CriterionResult> {
    CRITERIA.iter().find(|c| c.0 == id).map(|c| (c.2)(seed))
}

fn result(id: u8, passed: bool, detail: String) -> CriterionResult {
    CriterionResult {
        id,
        name: CRITERIA[id as usize - 1].1,
        passed,
        detail,
    }
}

fn count_by_enumeration(k: u32, n: usize, set: WordSet) -> BigUint {
    BigUint::from(words::par_count(k, n, set, DEFAULT_ENUMERATION_CAP, |_| 1).expect("within cap"))
}

fn grid() -> impl Iterator<Item = (u32, usize)> {
    (1..=13).map(|n| (2, n)).chain((1..=8).map(|n| (3, n)))
}

pub fn rivin_exactness(_seed: u64) -> CriterionResult {
    let bad: Vec<String> = grid()
        .filter(|&(k, n)| {
            count_by_enumeration(k, n, WordSet::CyclicallyReduced) != words::rivin_formula(k, n)
        })
        .map(|(k, n)| format!("k={k} n={n}"))
        .collect();
    result(
        1,
        bad.is_empty(),
        if bad.is_empty() {
            "21 (k, n) cells match exactly".into()
        } else {
            format!("mismatch at {}", bad.join(", "))
        },
    )
}

pub fn free_count_exactness(_seed: u64) -> CriterionResult {
    let bad: Vec<String> = grid()
        .filter(|&(k, n)| {
            let closed = BigUint::from(2 * k) * BigUint::from(2 * k - 1).pow(n as u32 - 1);
            count_by_enumeration(k, n, WordSet::Free) != closed
        })
        .map(|(k, n)| format!("k={k} n={n}"))
        .collect();
    result(
        2,
        bad.is_empty(),
        if bad.is_empty() {
            "21 (k, n) cells match exactly".into()
        } else {
            format!("mismatch at {}", bad.join(", "))
        },
    )
}

pub fn orbit_census(_seed: u64) -> CriterionResult {
    let cap = DEFAULT_ENUMERATION_CAP;
    let mut problems = Vec::new();
    let small: Vec<BigUint> = (1..=3)
        .map(|n| symmetry::count_orbits(2, n, OrbitMethod::Canonicalize, cap).unwrap())
        .collect();
    if small != [1u32, 2, 2].map(BigUint::from) {
        problems.push(format!("small orbit counts {small:?}"));
    }
    let mut ratios = Vec::new();
    for n in 1..=13 {
        let burnside = symmetry::count_orbits(2, n, OrbitMethod::Burnside, cap).unwrap();
        if n <= 10 || n == 13 {
            let canon = symmetry::count_orbits(2, n, OrbitMethod::Canonicalize, cap).unwrap();
            if canon != burnside {
                problems.push(format!("methods disagree at n={n}: {canon} vs {burnside}"));
            }
        }
        let ratio = symmetry::ratio_from_orbits(2, n, &burnside);
        if ratio < BigRational::one() {
            problems.push(format!("ratio below 1 at n={n}"));
        }
        ratios.push(ratio);
    }
    let r = |n: usize| ratios[n - 1].clone();
    if !(r(7) > r(10) && r(10) > r(13)) {
        problems.push("ratio does not decrease along 7, 10, 13".into());
    }
    if r(13) > BigRational::new(5.into(), 4.into()) {
        problems.push("ratio(13) exceeds 1.25".into());
    }
    let f = |q: BigRational| num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN);
    result(
        3,
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "O_1..3 = 1,2,2; methods agree; ratio(7,10,13) = {:.4}, {:.4}, {:.4}",
                f(r(7)),
                f(r(10)),
                f(r(13))
            )
        } else {
            problems.join("; ")
        },
    )
}

/// The first `count` sampled words (trial order) satisfying `keep`.
fn seeded_words<F: Fn(&Word) -> bool>(
    k: u32,
    n: usize,
    seed: u64,
    count: usize,
    keep: F,
) -> Vec<Word> {
    (0..)
        .map(|t| words::sample_cyclically_reduced(k, n, &mut trial_rng(seed, t)))
        .filter(|x| keep(x))
        .take(count)
        .collect()
}

fn sixth() -> Lambda {
    Lambda::new(1, 6).unwrap()
}

pub fn y_set_cardinality(seed: u64) -> CriterionResult {
    let rel = all_relabelings(2).unwrap();
    let xs = seeded_words(2, 60, seed ^ 4, 100, |x| {
        genericity::in_e_with(x, sixth(), &rel)
    });
    let bad: Vec<String> = xs
        .iter()
        .filter_map(|x| {
            let y = symmetry::y_set(x, 2).unwrap().len();
            let o = symmetry::orbit(x, 2).unwrap().len();
            (y != 959 || o != 960).then(|| format!("{x}: |Y| = {y}, orbit = {o}"))
        })
        .collect();
    result(
        4,
        bad.is_empty(),
        if bad.is_empty() {
            "100/100 words: |Y| = 959, orbit = 960".into()
        } else {
            format!("{} failures, first {}", bad.len(), bad[0])
        },
    )
}

pub fn genericity_decay(seed: u64) -> CriterionResult {
    let rel = all_relabelings(2).unwrap();
    let outside = |x: &Word| !genericity::in_e_with(x, sixth(), &rel);
    let estimate =
        |n: usize| genericity::density_estimate(2, n, 20_000, seed ^ 5, 0, outside).unwrap();
    let d60 = estimate(60);
    let d120 = estimate(120);
    let fit_points: Vec<_> = [30, 40, 50]
        .into_iter()
        .map(estimate)
        .chain([d60.clone()])
        .collect();
    let series = DensitySeries::from_estimates(&fit_points, seed ^ 5);
    let slope = genericity::decay_fit(&series);
    let passed = d60.density <= 0.2
        && d120.density <= 0.05
        && d120.density < d60.density
        && matches!(slope, Ok(s) if s < 0.0);
    result(
        5,
        passed,
        format!(
            "complement density n=60 {:.4}, n=120 {:.4}; slope over 30..60 {}",
            d60.density,
            d120.density,
            match slope {
                Ok(s) => format!("{s:.5}"),
                Err(e) => e.to_string(),
            }
        ),
    )
}

pub fn small_cancellation_density(seed: u64) -> CriterionResult {
    let pred = |x: &Word| genericity::satisfies_c_prime(x, sixth()).unwrap().satisfied;
    let d = genericity::density_estimate(2, 100, 10_000, seed ^ 6, 0, pred).unwrap();
    result(
        6,
        d.density >= 0.9,
        format!(
            "C'(1/6) density at n=100: {:.4} ± {:.4}",
            d.density, d.ci_halfwidth
        ),
    )
}

fn c6_relators(seed: u64, count: usize) -> Vec<Word> {
    seeded_words(2, 60, seed, count, |x| {
        genericity::satisfies_c_prime(x, sixth()).unwrap().satisfied
    })
}

pub fn dehn_oracle(seed: u64) -> CriterionResult {
    let rels = c6_relators(seed ^ 7, 100);
    let a = Word::from_letters(vec![Letter::new(1, false)]).unwrap();
    let mut members = 0;
    let mut rejects_a = 0;
    for (i, r) in rels.iter().enumerate() {
        let oracle = presentations::DehnOracle::new(r).unwrap();
        let mut rng = trial_rng(seed ^ 0x70, i as u64);
        let factors = rng.gen_range(1..=5);
        let mut w = Word::empty();
        for _ in 0..factors {
            let len = rng.gen_range(0..=20);
            let u = words::sample_reduced(2, len, &mut rng);
            let f = if rng.gen_bool(0.5) {
                r.clone()
            } else {
                r.inverse()
            };
            w = w.mul(&f.conjugate_by(&u));
        }
        if oracle.contains(&w) {
            members += 1;
        }
        if !oracle.reduce(&a).0.is_empty() {
            rejects_a += 1;
        }
    }
    result(
        7,
        members == 100 && rejects_a == 100,
        format!("products reduced to 1: {members}/100; a1 nonempty: {rejects_a}/100"),
    )
}

/// A random element of the symmetry group applied to `r`.
fn orbit_mate(r: &Word, rel: &[Relabeling], rng: &mut impl Rng) -> Word {
    let tau = rel.choose(rng).unwrap();
    let base = if rng.gen_bool(0.5) {
        r.inverse()
    } else {
        r.clone()
    };
    tau.apply(&base).rotate(rng.gen_range(0..r.len()))
}

pub fn relator_recovery(seed: u64) -> CriterionResult {
    let rel = all_relabelings(2).unwrap();
    let generic = seeded_words(2, 60, seed ^ 8, 100, |x| {
        genericity::in_e_with(x, sixth(), &rel)
            && genericity::satisfies_c_prime(x, sixth()).unwrap().satisfied
    });
    let class = ClassParams {
        k: 2,
        lambda: sixth(),
        max_len: 60,
        pool: CandidatePool::Images,
    };
    let budget = SearchBudget {
        map_len: 1,
        depth: 1,
        ..SearchBudget::default()
    };
    let mut direct = 0;
    let mut searched = 0;
    let mut first_failure = None;
    for (i, r) in generic.iter().enumerate() {
        let mut rng = trial_rng(seed ^ 0x80, i as u64);
        let v = orbit_mate(r, &rel, &mut rng);
        let u = Word::from_letters(r[..10].to_vec()).unwrap();
        match presentations::recover_from_candidate(&v, &u, 2) {
            Ok(x) if &x == r => direct += 1,
            other => {
                first_failure.get_or_insert(format!("{r}: {other:?}"));
            }
        }
        let pi = Presentation::new(2, vec![v]).unwrap();
        match presentations::recover_relator(&pi, &u, &class, &budget) {
            Ok(x) if &x == r => searched += 1,
            other => {
                first_failure.get_or_insert(format!("{r} via search: {other:?}"));
            }
        }
    }
    result(
        8,
        direct == 100 && searched == 100,
        match first_failure {
            None => {
                "recovered exactly 100/100 from the orbit-mate, 100/100 through the search".into()
            }
            Some(f) => format!("direct {direct}/100, search {searched}/100; {f}"),
        },
    )
}

fn random_presentation(rng: &mut impl Rng) -> Presentation {
    let m = rng.gen_range(1..=64);
    let t = rng.gen_range(0..=5);
    let rels = (0..t)
        .map(|_| {
            let n = rng.gen_range(1..=30);
            words::sample_reduced(m, n, rng)
        })
        .collect();
    Presentation::new(m, rels).unwrap()
}

pub fn encoding(seed: u64) -> CriterionResult {
    let mut round_trip = 0;
    let mut within_bound = 0;
    for t in 0..10_000 {
        let p = random_presentation(&mut trial_rng(seed ^ 9, t));
        let e = presentations::encode(&p).unwrap();
        if presentations::decode(&e.six_letter).as_ref() == Ok(&p)
            && presentations::decode_binary(&e.binary).as_ref() == Ok(&p)
            && e.binary.len() == 3 * e.six_letter.len()
        {
            round_trip += 1;
        }
        if e.six_letter.len() <= presentations::encoding_length_bound(&p) {
            within_bound += 1;
        }
    }
    // fixed shape [b_m, b_{m-1}]² on m = 2^j generators
    let family: Vec<(f64, f64)> = (2..=16)
        .map(|j| {
            let m = 1u32 << j;
            let x = Letter::new(m, false);
            let y = Letter::new(m - 1, false);
            let r = Word::from_letters(vec![
                x,
                y,
                x.inverse(),
                y.inverse(),
                x,
                y,
                x.inverse(),
                y.inverse(),
            ])
            .unwrap();
            let p = Presentation::new(m, vec![r]).unwrap();
            let size = presentations::encode(&p).unwrap().six_letter.len() as f64;
            (p.ell_1() as f64 * (m as f64).log2(), size)
        })
        .collect();
    let c = family.iter().map(|(x, y)| x * y).sum::<f64>()
        / family.iter().map(|(x, _)| x * x).sum::<f64>();
    let growth_ok = family
        .iter()
        .all(|(x, y)| *y <= 2.0 * c * x && *y >= c * x / 2.0);
    result(
        9,
        round_trip == 10_000 && within_bound == 10_000 && growth_ok,
        format!(
            "round trips {round_trip}/10000; bound holds {within_bound}/10000; |W| ~ {c:.3} l1 log2 m on m = 2^2..2^16 ({})",
            if growth_ok { "all within factor 2" } else { "outside factor 2" }
        ),
    )
}

pub fn tietze(seed: u64) -> CriterionResult {
    let mut ok = 0;
    let mut first_failure = None;
    for t in 0..50 {
        let mut rng = trial_rng(seed ^ 10, t);
        let m = rng.gen_range(2..=5);
        let mut rels: Vec<Word> = (0..rng.gen_range(1..=4))
            .map(|_| loop {
                let x = words::sample_cyclically_reduced(m, rng.gen_range(3..=8), &mut rng);
                if !x.is_empty() {
                    break x;
                }
            })
            .collect();
        for _ in 0..rng.gen_range(1..=3) {
            let x = Letter::from_code(rng.gen_range(0..2 * m));
            let planted = match rng.gen_range(0..3) {
                0 => vec![x],
                1 => {
                    let other = loop {
                        let y = Letter::from_code(rng.gen_range(0..2 * m));
                        if y.generator() != x.generator() {
                            break y;
                        }
                    };
                    vec![x, other]
                }
                _ => vec![x, x],
            };
            let at = rng.gen_range(0..=rels.len());
            rels.insert(at, Word::from_letters(planted).unwrap());
        }
        let p = Presentation::new(m, rels).unwrap();
        match presentations::tietze_cleanup(&p, true) {
            Ok(out) => {
                let q = &out.presentation;
                if q.relators().iter().all(|r| r.len() >= 3) && q.ell() <= p.ell() {
                    ok += 1;
                } else {
                    first_failure.get_or_insert(format!("{p} -> {q}"));
                }
            }
            Err(e) => {
                first_failure.get_or_insert(format!("{p}: {e}"));
            }
        }
    }
    let ab = Presentation::new(2, vec![Word::parse("ab", false).unwrap()]).unwrap();
    let example = presentations::tietze_cleanup(&ab, false)
        .map(|o| o.presentation == Presentation::new(1, vec![]).unwrap())
        .unwrap_or(false);
    result(
        10,
        ok == 50 && example,
        match first_failure {
            None if example => "50/50 cleaned with l non-increasing; <a,b|ab> -> <a|>".into(),
            None => "<a,b|ab> did not clean to <a|>".into(),
            Some(f) => format!("{ok}/50; {f}"),
        },
    )
}

/// Leaves of a random binary tree, with some leaves dropped.
fn random_prefix_code(rng: &mut impl Rng) -> Vec<String> {
    let mut leaves = vec![String::new()];
    for _ in 0..rng.gen_range(1..=30) {
        let i = rng.gen_range(0..leaves.len());
        let p = leaves.swap_remove(i);
        leaves.push(format!("{p}0"));
        leaves.push(format!("{p}1"));
    }
    leaves.retain(|_| rng.gen_bool(0.8));
    if leaves.is_empty() {
        leaves.push("0".into());
    }
    leaves.shuffle(rng);
    leaves
}

fn random_bits(rng: &mut impl Rng, len: usize) -> String {
    (0..len)
        .map(|_| if rng.gen_bool(0.5) { '1' } else { '0' })
        .collect()
}

pub fn kraft(seed: u64) -> CriterionResult {
    let mut sums_ok = 0;
    let mut witnesses_ok = 0;
    for t in 0..1000 {
        let mut rng = trial_rng(seed ^ 11, t);
        let code = random_prefix_code(&mut rng);
        if complexity::kraft_sum(&code).is_ok_and(|s| s <= BigRational::one()) {
            sums_ok += 1;
        }
        let mut bad = code.clone();
        let p = code.choose(&mut rng).unwrap().clone();
        let extra = if p.is_empty() || rng.gen_bool(0.5) {
            let tail_len = rng.gen_range(1..=4);
            format!("{p}{}", random_bits(&mut rng, tail_len))
        } else {
            p[..rng.gen_range(0..p.len())].to_string()
        };
        bad.insert(rng.gen_range(0..=bad.len()), extra);
        let members: BTreeSet<&String> = bad.iter().collect();
        if let Err(Error::NotPrefixFree { shorter, longer }) = complexity::kraft_sum(&bad) {
            if members.contains(&shorter)
                && members.contains(&longer)
                && shorter != longer
                && longer.starts_with(shorter.as_str())
            {
                witnesses_ok += 1;
            }
        }
    }
    result(
        11,
        sums_ok == 1000 && witnesses_ok == 1000,
        format!("Kraft sum <= 1 on {sums_ok}/1000 codes; correct witness on {witnesses_ok}/1000 corrupted codes"),
    )
}

pub fn incompressibility(seed: u64) -> CriterionResult {
    let report = complexity::incompressibility_experiment(2, 400, 4, 2000, seed ^ 12).unwrap();
    let periodic = Word::parse(&"ab".repeat(200), false).unwrap();
    let control = complexity::c_est(&periodic, 2).unwrap().bits;
    let passed = report.fraction >= 0.99
        && report.fraction >= report.paper_bound
        && (control as f64) < 0.25 * report.median_bits as f64;
    result(
        12,
        passed,
        format!(
            "fraction {:.4} (bound {:.4}, threshold {} bits); c_est((ab)^200) = {control} vs median {}",
            report.fraction, report.paper_bound, report.threshold_bits, report.median_bits
        ),
    )
}
