//! Overlap tests for the sets `S(λ,τ)`, `S'(λ,τ)`, `E(λ)`, the `C'(λ)` small
//! cancellation condition, and Monte Carlo density estimation.
//!
//! Every `λ·|x|` threshold is floored and then raised to at least 1, so a
//! zero-length overlap never counts as a witness.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{all_relabelings, Relabeling};
use crate::words::{self, gamma, sample_cyclically_reduced, trial_rng, Letter, Word, WordSet};

/// An exact positive rational `p/q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lambda {
    num: u64,
    den: u64,
}

impl Lambda {
    pub fn new(num: u64, den: u64) -> Result<Lambda> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidArgument(format!(
                "lambda {num}/{den} must be positive"
            )));
        }
        let g = num_integer::gcd(num, den);
        Ok(Lambda {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    /// `⌊λ·n⌋`.
    pub fn floor_times(self, n: usize) -> usize {
        (n as u128 * self.num as u128 / self.den as u128) as usize
    }

    /// `max(1, ⌊λ·n⌋)`.
    pub fn threshold(self, n: usize) -> usize {
        self.floor_times(n).max(1)
    }

    /// `0 < λ < 1/3`.
    pub fn below_one_third(self) -> bool {
        3 * self.num < self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn require_below_one_third(self) -> Result<()> {
        if !self.below_one_third() {
            return Err(Error::InvalidArgument(format!(
                "lambda {self} must lie in (0, 1/3)"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Lambda {
    type Err = Error;
    fn from_str(s: &str) -> Result<Lambda> {
        let bad = || Error::Parse(format!("bad rational {s:?}, expected p/q"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        Lambda::new(
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        )
    }
}

/// Length of the longest common prefix.
pub fn lcp(x: &[Letter], y: &[Letter]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

/// lcp of `x` with the rotation of `v` starting at `start`.
#[inline]
fn lcp_rotation(x: &[Letter], v: &[Letter], start: usize) -> usize {
    let n = v.len();
    let mut i = 0;
    while i < x.len() && i < n && x[i] == v[(start + i) % n] {
        i += 1;
    }
    i
}

/// Largest overlap found and where.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapReport {
    pub witness: Option<String>,
    pub lcp_length: usize,
    pub threshold: usize,
}

fn require_cyclic(x: &Word) -> Result<()> {
    if x.is_empty() || !x.is_cyclically_reduced() {
        return Err(Error::InvalidArgument(format!(
            "{x} is not a nonempty cyclically reduced word"
        )));
    }
    Ok(())
}

/// Best overlap of `x` with any rotation of `v`.
fn best_rotation_overlap(x: &Word, v: &Word) -> (usize, usize) {
    (0..v.len())
        .map(|s| (lcp_rotation(x, v, s), s))
        .fold((0, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
}

fn overlap_test(x: &Word, v: &Word, lambda: Lambda) -> (bool, OverlapReport) {
    let threshold = lambda.threshold(x.len());
    let (len, s) = best_rotation_overlap(x, v);
    (
        len >= threshold,
        OverlapReport {
            witness: Some(v.rotate(s).to_string()),
            lcp_length: len,
            threshold,
        },
    )
}

/// `x ∈ S(λ,τ)`: some rotation of `τ(x)` shares a prefix of length at least
/// the threshold with `x`.
pub fn in_s(x: &Word, lambda: Lambda, tau: &Relabeling) -> Result<(bool, OverlapReport)> {
    require_cyclic(x)?;
    lambda.require_below_one_third()?;
    if tau.is_identity() {
        return Err(Error::InvalidArgument(
            "tau must be a nontrivial relabeling".into(),
        ));
    }
    Ok(overlap_test(x, &tau.apply(x), lambda))
}

/// `x ∈ S'(λ,τ)`: as [`in_s`] with `τ(x⁻¹)`; `τ` may be trivial.
pub fn in_s_prime(x: &Word, lambda: Lambda, tau: &Relabeling) -> Result<(bool, OverlapReport)> {
    require_cyclic(x)?;
    lambda.require_below_one_third()?;
    Ok(overlap_test(x, &tau.apply(&x.inverse()), lambda))
}

/// Largest lcp of `x` with any member of `𝒴(x)`, without building the set.
pub fn max_y_overlap(x: &Word, relabelings: &[Relabeling]) -> (usize, Word) {
    let n = x.len();
    let inv = x.inverse();
    let mut best = (0usize, x.rotate(1));
    let mut img = Vec::with_capacity(n);
    for tau in relabelings {
        for (inverted, base) in [(false, x), (true, &inv)] {
            img.clear();
            img.extend(base.iter().map(|&l| tau.apply_letter(l)));
            for s in 0..n {
                if !inverted && s == 0 && tau.is_identity() {
                    continue;
                }
                let len = lcp_rotation(x, &img, s);
                if len > best.0 {
                    let mut v = img.clone();
                    v.rotate_left(s);
                    best = (len, Word::from_reduced_unchecked(v));
                    if len == n {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// `x ∈ E(λ)`: `x` is not a proper power and every member of `𝒴(x)` agrees
/// with `x` on fewer than `threshold` initial letters.
pub fn in_e(x: &Word, lambda: Lambda, k: u32) -> Result<bool> {
    require_cyclic(x)?;
    lambda.require_below_one_third()?;
    if words::is_proper_power(x) {
        return Ok(false);
    }
    let rel = all_relabelings(k)?;
    Ok(in_e_with(x, lambda, &rel))
}

/// [`in_e`] with a precomputed relabeling list; `x` must be cyclically reduced.
pub fn in_e_with(x: &Word, lambda: Lambda, relabelings: &[Relabeling]) -> bool {
    if x.is_empty() || words::is_proper_power(x) {
        return false;
    }
    max_y_overlap(x, relabelings).0 < lambda.threshold(x.len())
}

/// Result of the small cancellation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CPrimeReport {
    pub satisfied: bool,
    pub max_piece: usize,
    pub threshold: usize,
}

/// All rotations of `x` and `x⁻¹`, deduplicated and sorted.
pub fn symmetrized_set(x: &Word) -> Vec<Word> {
    let inv = x.inverse();
    let mut out: Vec<Word> = (0..x.len())
        .flat_map(|s| [x.rotate(s), inv.rotate(s)])
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Longest common prefix over distinct members of the symmetrized set.
pub fn max_piece(x: &Word) -> usize {
    // in sorted order the longest common prefix of any pair is attained by a
    // pair of neighbours
    symmetrized_set(x)
        .windows(2)
        .map(|p| lcp(&p[0], &p[1]))
        .max()
        .unwrap_or(0)
}

/// `C'(λ)`: every piece is shorter than `max(1, ⌊λ|x|⌋)` and `x` is not a
/// proper power.
pub fn satisfies_c_prime(x: &Word, lambda: Lambda) -> Result<CPrimeReport> {
    require_cyclic(x)?;
    let piece = max_piece(x);
    let threshold = lambda.threshold(x.len());
    Ok(CPrimeReport {
        satisfied: piece < threshold && !words::is_proper_power(x),
        max_piece: piece,
        threshold,
    })
}

/// Two-sided Wilson score half-width at `z`.
pub fn wilson_halfwidth(hits: u64, samples: u64, z: f64) -> f64 {
    if samples == 0 {
        return 1.0;
    }
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Density of a predicate among length-`n` cyclically reduced words.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub n: usize,
    pub samples: u64,
    pub hits: u64,
    pub density: f64,
    pub ci_halfwidth: f64,
    pub exact: bool,
}

/// Estimates `γ(n, {x : pred(x)}) / γ(n, CR)`. Enumerates exactly when
/// `γ(n, CR) ≤ cap`; otherwise draws `samples` uniform words, trial `t` using
/// the stream derived from `(seed, t)`.
pub fn density_estimate<P>(
    k: u32,
    n: usize,
    samples: u64,
    seed: u64,
    cap: u64,
    pred: P,
) -> Result<DensityEstimate>
where
    P: Fn(&Word) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let total = gamma(k, n, WordSet::CyclicallyReduced);
    if total <= num_bigint::BigUint::from(cap) {
        let support: u64 = total.try_into().expect("bounded by cap");
        let hits = words::par_count(k, n, WordSet::CyclicallyReduced, u64::MAX, |x| {
            pred(&Word::from_reduced_unchecked(x.to_vec())) as u64
        })?;
        return Ok(DensityEstimate {
            n,
            samples: support,
            hits,
            density: hits as f64 / support as f64,
            ci_halfwidth: 0.0,
            exact: true,
        });
    }
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|t| pred(&sample_cyclically_reduced(k, n, &mut trial_rng(seed, t))) as u64)
        .sum();
    Ok(DensityEstimate {
        n,
        samples,
        hits,
        density: hits as f64 / samples as f64,
        ci_halfwidth: wilson_halfwidth(hits, samples, Z95),
        exact: false,
    })
}

/// Densities at increasing lengths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySeries {
    pub lengths: Vec<usize>,
    pub fractions: Vec<f64>,
    pub ci_halfwidths: Vec<f64>,
    pub sample_counts: Vec<u64>,
    pub seed: u64,
}

impl DensitySeries {
    pub fn from_estimates(estimates: &[DensityEstimate], seed: u64) -> DensitySeries {
        DensitySeries {
            lengths: estimates.iter().map(|e| e.n).collect(),
            fractions: estimates.iter().map(|e| e.density).collect(),
            ci_halfwidths: estimates.iter().map(|e| e.ci_halfwidth).collect(),
            sample_counts: estimates.iter().map(|e| e.samples).collect(),
            seed,
        }
    }
}

/// Least-squares slope of `ln(density)` against `n`.
pub fn decay_fit(series: &DensitySeries) -> Result<f64> {
    let pts = &series.lengths;
    if pts.len() < 3 || pts.len() != series.fractions.len() {
        return Err(Error::InvalidArgument(
            "decay fit needs at least 3 points".into(),
        ));
    }
    if !pts.windows(2).all(|p| p[0] < p[1]) {
        return Err(Error::InvalidArgument("lengths must increase".into()));
    }
    if let Some(i) = series.fractions.iter().position(|&f| f <= 0.0) {
        return Err(Error::BelowResolution(format!(
            "zero density at n = {}",
            pts[i]
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = series.fractions.iter().map(|f| f.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// A thread-safe membership test.
pub type Evaluator = Box<dyn Fn(&Word) -> bool + Sync + Send>;

/// Predicates selectable by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    ESet,
    SSet(Relabeling),
    SPrime(Relabeling),
    CPrime,
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::ESet => "e-set",
            Predicate::SSet(_) => "s-set",
            Predicate::SPrime(_) => "s-prime",
            Predicate::CPrime => "cprime",
        }
    }

    /// A membership closure over cyclically reduced words.
    pub fn evaluator(&self, k: u32, lambda: Lambda) -> Result<Evaluator> {
        match self {
            Predicate::ESet => {
                lambda.require_below_one_third()?;
                let rel = all_relabelings(k)?;
                Ok(Box::new(move |x| in_e_with(x, lambda, &rel)))
            }
            Predicate::SSet(tau) => {
                lambda.require_below_one_third()?;
                if tau.is_identity() {
                    return Err(Error::InvalidArgument("tau must be nontrivial".into()));
                }
                let tau = tau.clone();
                Ok(Box::new(move |x| overlap_test(x, &tau.apply(x), lambda).0))
            }
            Predicate::SPrime(tau) => {
                lambda.require_below_one_third()?;
                let tau = tau.clone();
                Ok(Box::new(move |x| {
                    overlap_test(x, &tau.apply(&x.inverse()), lambda).0
                }))
            }
            Predicate::CPrime => Ok(Box::new(move |x| {
                max_piece(x) < lambda.threshold(x.len()) && !words::is_proper_power(x)
            })),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::y_set;
    use crate::words::{Enumeration, DEFAULT_ENUMERATION_CAP};

    fn w(s: &str) -> Word {
        Word::parse(s, false).unwrap()
    }

    fn sixth() -> Lambda {
        Lambda::new(1, 6).unwrap()
    }

    fn brute_max_piece(x: &Word) -> usize {
        let set = symmetrized_set(x);
        let mut best = 0;
        for (i, a) in set.iter().enumerate() {
            for b in &set[i + 1..] {
                best = best.max(lcp(a, b));
            }
        }
        best
    }

    #[test]
    fn lambda_parsing_and_floor() {
        let l: Lambda = "2/12".parse().unwrap();
        assert_eq!(l, sixth());
        assert_eq!(l.floor_times(60), 10);
        assert_eq!(l.threshold(3), 1);
        assert!(l.below_one_third());
        assert!(!Lambda::new(1, 3).unwrap().below_one_third());
        assert!("1".parse::<Lambda>().is_err());
        assert!("0/3".parse::<Lambda>().is_err());
    }

    #[test]
    fn lcp_examples() {
        assert_eq!(lcp(&w("abab"), &w("abAb")), 2);
        assert_eq!(lcp(&w("abab"), &w("abab")), 4);
        assert_eq!(lcp(&w("ab"), &w("ba")), 0);
    }

    #[test]
    fn in_s_examples() {
        let swap = Relabeling::parse(2, "1:2+,2:1+").unwrap();
        let x = w("abababab");
        assert_eq!(swap.apply(&x).rotate(1), x);
        let (hit, rep) = in_s(&x, sixth(), &swap).unwrap();
        assert!(hit);
        assert_eq!(rep.lcp_length, 8);
        let (hit, _) = in_s(&w("a"), Lambda::new(1, 10).unwrap(), &swap).unwrap();
        assert!(!hit);
        assert!(in_s(&x, sixth(), &Relabeling::identity(2)).is_err());
        assert!(in_s(&x, Lambda::new(1, 2).unwrap(), &swap).is_err());
    }

    #[test]
    fn in_s_rare_for_random_long_words() {
        let tau = Relabeling::parse(2, "1:2+,2:1-").unwrap();
        let mut hits = 0;
        for t in 0..1000 {
            let x = sample_cyclically_reduced(2, 200, &mut trial_rng(21, t));
            hits += in_s(&x, sixth(), &tau).unwrap().0 as u32;
        }
        assert!(hits <= 10, "{hits}");
    }

    #[test]
    fn in_s_prime_examples() {
        let x = w("abAB");
        let id = Relabeling::identity(2);
        let inv = x.inverse();
        assert_eq!(inv, w("baBA"));
        assert_eq!(inv.rotate(3), w("AbaB"));
        let brute = (0..4).map(|s| lcp(&x, &inv.rotate(s))).max().unwrap();
        let (_, rep) = in_s_prime(&x, sixth(), &id).unwrap();
        assert_eq!(rep.lcp_length, brute);
        // τ inverting both generators sends x⁻¹ to the reversal of x, so a
        // palindrome u·rev(u) is its own image
        let tau = Relabeling::parse(2, "1:1-,2:2-").unwrap();
        for t in 0..20 {
            let u = words::sample_reduced(2, 10, &mut trial_rng(31, t));
            let mut letters = u.letters().to_vec();
            letters.extend(u.iter().rev());
            let x = Word::from_letters(letters).unwrap();
            assert_eq!(tau.apply(&x.inverse()), x);
            let (hit, rep) = in_s_prime(&x, sixth(), &tau).unwrap();
            assert!(hit);
            assert_eq!(rep.lcp_length, 20);
        }
    }

    #[test]
    fn in_s_prime_is_monotone_in_lambda() {
        let lambdas = [(1u64, 4u64), (1, 6), (1, 10), (1, 20)];
        for t in 0..300 {
            let x = sample_cyclically_reduced(2, 24, &mut trial_rng(17, t));
            let tau = &all_relabelings(2).unwrap()[(t % 8) as usize];
            let hits: Vec<bool> = lambdas
                .iter()
                .map(|&(p, q)| in_s_prime(&x, Lambda::new(p, q).unwrap(), tau).unwrap().0)
                .collect();
            for i in 1..hits.len() {
                assert!(!hits[i - 1] || hits[i]);
            }
        }
    }

    #[test]
    fn c_prime_examples() {
        let x = w("abAB");
        assert_eq!(brute_max_piece(&x), 1);
        let r = satisfies_c_prime(&x, Lambda::new(1, 3).unwrap()).unwrap();
        assert_eq!((r.satisfied, r.max_piece, r.threshold), (false, 1, 1));
        assert!(
            satisfies_c_prime(&x, Lambda::new(1, 2).unwrap())
                .unwrap()
                .satisfied
        );
        let r = satisfies_c_prime(&w("aab"), Lambda::new(1, 3).unwrap()).unwrap();
        assert!(!r.satisfied);
        assert_eq!(brute_max_piece(&w("aab")), r.max_piece);
    }

    #[test]
    fn max_piece_matches_pairwise_brute_force() {
        for t in 0..200 {
            let n = 2 + (t % 40) as usize;
            let x = sample_cyclically_reduced(2, n, &mut trial_rng(8, t));
            assert_eq!(max_piece(&x), brute_max_piece(&x), "{x}");
        }
    }

    #[test]
    fn e_set_examples() {
        assert!(!in_e(&w("aaa"), sixth(), 2).unwrap());
        assert!(!in_e(&w("abababab"), sixth(), 2).unwrap());
    }

    #[test]
    fn max_y_overlap_matches_y_set() {
        let rel = all_relabelings(2).unwrap();
        for t in 0..100 {
            let x = sample_cyclically_reduced(2, 9, &mut trial_rng(4, t));
            if words::is_proper_power(&x) {
                continue;
            }
            let brute = y_set(&x, 2)
                .unwrap()
                .iter()
                .map(|y| lcp(&x, y))
                .max()
                .unwrap();
            assert_eq!(max_y_overlap(&x, &rel).0, brute);
        }
    }

    #[test]
    fn exact_density_equals_brute_force_fraction() {
        let rel = all_relabelings(2).unwrap();
        let lambda = Lambda::new(1, 4).unwrap();
        for n in 1..=8 {
            let all: Vec<Word> =
                Enumeration::new(2, n, WordSet::CyclicallyReduced, DEFAULT_ENUMERATION_CAP)
                    .unwrap()
                    .collect();
            let hits = all.iter().filter(|x| in_e_with(x, lambda, &rel)).count() as u64;
            let est = density_estimate(2, n, 10, 1, DEFAULT_ENUMERATION_CAP, |x| {
                in_e_with(x, lambda, &rel)
            })
            .unwrap();
            assert!(est.exact);
            assert_eq!((est.hits, est.samples), (hits, all.len() as u64));
        }
        let all = density_estimate(2, 7, 10, 1, DEFAULT_ENUMERATION_CAP, |_| true).unwrap();
        assert_eq!(all.density, 1.0);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = density_estimate(2, 40, 500, 9, 0, |x| x[0] == x[1]).unwrap();
        let b = density_estimate(2, 40, 500, 9, 0, |x| x[0] == x[1]).unwrap();
        assert_eq!(a, b);
        assert!(!a.exact);
        assert!(a.ci_halfwidth > 0.0);
    }

    #[test]
    fn wilson_is_sane_at_the_edges() {
        assert!(wilson_halfwidth(0, 100, Z95) > 0.0);
        assert!(wilson_halfwidth(100, 100, Z95) > 0.0);
        let mid = wilson_halfwidth(50, 100, Z95);
        assert!((mid - 0.0962).abs() < 1e-3, "{mid}");
    }

    #[test]
    fn decay_fit_examples() {
        let lengths = vec![1usize, 2, 3, 4, 5];
        let geo = DensitySeries {
            fractions: lengths.iter().map(|&n| 2f64.powi(-(n as i32))).collect(),
            ci_halfwidths: vec![0.0; 5],
            sample_counts: vec![1; 5],
            lengths: lengths.clone(),
            seed: 0,
        };
        assert!((decay_fit(&geo).unwrap() + std::f64::consts::LN_2).abs() < 1e-9);
        let flat = DensitySeries {
            fractions: vec![0.3; 5],
            ..geo.clone()
        };
        assert!(decay_fit(&flat).unwrap().abs() < 1e-12);
        let zero = DensitySeries {
            fractions: vec![0.3, 0.0, 0.1, 0.1, 0.1],
            ..geo
        };
        assert!(matches!(decay_fit(&zero), Err(Error::BelowResolution(_))));
    }
}
