//! Prefix codes, the Kraft sum, a self-delimiting compression estimator for
//! words and the incompressibility experiment.
//!
//! Every number here is an upper estimate produced by a concrete encoder.
//! The true complexities are not computable and are never reported.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{self, Letter, Word};

/// A finite prefix-free set of binary strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixCode {
    members: Vec<String>,
}

impl PrefixCode {
    /// Validates and stores `members` (duplicates collapse).
    pub fn new<S: AsRef<str>>(members: &[S]) -> Result<PrefixCode> {
        let mut sorted: Vec<String> = members.iter().map(|m| m.as_ref().to_string()).collect();
        if let Some(bad) = sorted
            .iter()
            .find(|m| m.chars().any(|c| c != '0' && c != '1'))
        {
            return Err(Error::InvalidArgument(format!(
                "{bad:?} is not a binary string"
            )));
        }
        sorted.sort();
        sorted.dedup();
        // a member that prefixes anything prefixes its sorted successor
        for pair in sorted.windows(2) {
            if pair[1].starts_with(pair[0].as_str()) {
                return Err(Error::NotPrefixFree {
                    shorter: pair[0].clone(),
                    longer: pair[1].clone(),
                });
            }
        }
        Ok(PrefixCode { members: sorted })
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn kraft_sum(&self) -> BigRational {
        let mut sum = BigRational::zero();
        for m in &self.members {
            sum += BigRational::new(BigUint::one().into(), (BigUint::one() << m.len()).into());
        }
        sum
    }
}

/// `Σ 2^{-|p|}` over a prefix-free code, exactly.
pub fn kraft_sum<S: AsRef<str>>(members: &[S]) -> Result<BigRational> {
    Ok(PrefixCode::new(members)?.kraft_sum())
}

/// `min(1, mean/δ)`.
pub fn markov_bound(mean: &BigRational, delta: &BigRational) -> Result<BigRational> {
    if mean < &BigRational::zero() || delta <= &BigRational::zero() {
        return Err(Error::InvalidArgument(
            "need mean >= 0 and delta > 0".into(),
        ));
    }
    Ok((mean / delta).min(BigRational::one()))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Empty,
    Direct,
    Repetition,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Empty => "empty",
            Scheme::Direct => "direct",
            Scheme::Repetition => "repetition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityEstimate {
    pub word: String,
    pub bits: usize,
    pub scheme: Scheme,
}

fn push_gamma(out: &mut Vec<bool>, n: u64) {
    debug_assert!(n >= 1);
    let width = 64 - n.leading_zeros() as usize;
    out.extend(std::iter::repeat_n(false, width - 1));
    out.extend((0..width).rev().map(|i| (n >> i) & 1 == 1));
}

fn read_gamma(bits: &mut impl Iterator<Item = bool>) -> Result<u64> {
    let eof = || Error::Parse("truncated code".into());
    let mut zeros = 0;
    loop {
        match bits.next() {
            Some(false) => zeros += 1,
            Some(true) => break,
            None => return Err(eof()),
        }
        if zeros > 63 {
            return Err(Error::Parse("gamma header too long".into()));
        }
    }
    let mut n = 1u64;
    for _ in 0..zeros {
        n = (n << 1) | bits.next().ok_or_else(eof)? as u64;
    }
    Ok(n)
}

/// Bits needed to write any rank below `γ(n, F)`.
fn rank_width(k: u32, n: usize) -> usize {
    let total = words::gamma(k, n, words::WordSet::Free);
    (total - 1u32).bits() as usize
}

/// Mixed-radix rank of a reduced word: the first letter in base `2k`, each
/// later one in base `2k-1` among the letters that do not cancel.
fn rank(x: &[Letter], k: u32) -> BigUint {
    let mut r = BigUint::zero();
    let mut prev: Option<Letter> = None;
    for &l in x {
        r = match prev {
            None => r * (2 * k) + l.code(),
            Some(p) => {
                let banned = p.inverse().code();
                let digit = if l.code() < banned {
                    l.code()
                } else {
                    l.code() - 1
                };
                r * (2 * k - 1) + digit
            }
        };
        prev = Some(l);
    }
    r
}

fn unrank(mut r: BigUint, k: u32, n: usize) -> Result<Vec<Letter>> {
    let mut digits = vec![0u32; n];
    for i in (0..n).rev() {
        let base = if i == 0 { 2 * k } else { 2 * k - 1 };
        digits[i] = (&r % base).to_u32().unwrap();
        r /= base;
    }
    if !r.is_zero() {
        return Err(Error::Parse("rank out of range".into()));
    }
    let mut out: Vec<Letter> = Vec::with_capacity(n);
    for (i, d) in digits.into_iter().enumerate() {
        let code = if i == 0 {
            d
        } else {
            let banned = out[i - 1].inverse().code();
            if d < banned {
                d
            } else {
                d + 1
            }
        };
        out.push(Letter::from_code(code));
    }
    Ok(out)
}

fn push_uint(out: &mut Vec<bool>, v: &BigUint, width: usize) {
    out.extend((0..width).rev().map(|i| v.bit(i as u64)));
}

fn read_uint(bits: &mut impl Iterator<Item = bool>, width: usize) -> Result<BigUint> {
    let mut v = BigUint::zero();
    for _ in 0..width {
        let b = bits
            .next()
            .ok_or_else(|| Error::Parse("truncated code".into()))?;
        v = (v << 1u32) | BigUint::from(b as u8);
    }
    Ok(v)
}

fn push_word_body(out: &mut Vec<bool>, x: &[Letter], k: u32) {
    push_uint(out, &rank(x, k), rank_width(k, x.len()));
}

fn direct_code(x: &Word, k: u32) -> Vec<bool> {
    let mut out = vec![true];
    push_gamma(&mut out, x.len() as u64);
    push_word_body(&mut out, x, k);
    out
}

/// Smallest `p` with `x[i] = x[i+p]` wherever both exist.
fn linear_period(x: &[Letter]) -> usize {
    let n = x.len();
    let mut fail = vec![0usize; n];
    let mut j = 0;
    for i in 1..n {
        while j > 0 && x[i] != x[j] {
            j = fail[j - 1];
        }
        if x[i] == x[j] {
            j += 1;
        }
        fail[i] = j;
    }
    n - fail[n - 1]
}

fn repetition_code(x: &Word, k: u32) -> Vec<bool> {
    let n = x.len();
    let p = linear_period(x);
    let mut out = vec![false, true];
    push_gamma(&mut out, p as u64);
    push_gamma(&mut out, (n / p) as u64);
    push_gamma(&mut out, (n % p) as u64 + 1);
    push_word_body(&mut out, &x[..p], k);
    out
}

fn check_alphabet(x: &Word, k: u32) -> Result<()> {
    if k == 0 || x.max_generator() > k {
        return Err(Error::InvalidArgument(format!(
            "{x} is not a word over {k} generators"
        )));
    }
    Ok(())
}

/// The shorter of the two self-delimiting codewords for `x` over `k`
/// generators (direct on ties), with its scheme.
pub fn encode_word(x: &Word, k: u32) -> Result<(Vec<bool>, Scheme)> {
    check_alphabet(x, k)?;
    if x.is_empty() {
        return Ok((vec![false, false], Scheme::Empty));
    }
    let direct = direct_code(x, k);
    let rep = repetition_code(x, k);
    Ok(if rep.len() < direct.len() {
        (rep, Scheme::Repetition)
    } else {
        (direct, Scheme::Direct)
    })
}

/// Reads one codeword from `bits`, leaving the rest of the stream untouched.
pub fn decode_word(bits: &mut impl Iterator<Item = bool>, k: u32) -> Result<Word> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let eof = || Error::Parse("truncated code".into());
    if bits.next().ok_or_else(eof)? {
        let n = read_gamma(bits)? as usize;
        let r = read_uint(bits, rank_width(k, n))?;
        return Ok(Word::from_reduced_unchecked(unrank(r, k, n)?));
    }
    if !bits.next().ok_or_else(eof)? {
        return Ok(Word::empty());
    }
    let p = read_gamma(bits)? as usize;
    let e = read_gamma(bits)? as usize;
    let rem = read_gamma(bits)? as usize - 1;
    if rem >= p {
        return Err(Error::Parse("remainder exceeds period".into()));
    }
    let r = read_uint(bits, rank_width(k, p))?;
    let period = unrank(r, k, p)?;
    let letters: Vec<Letter> = period.iter().copied().cycle().take(e * p + rem).collect();
    Word::from_letters(letters).map_err(|_| Error::Parse("decoded word is not reduced".into()))
}

/// `c_est(x)`: length of the emitted codeword.
pub fn c_est(x: &Word, k: u32) -> Result<ComplexityEstimate> {
    let (code, scheme) = encode_word(x, k)?;
    Ok(ComplexityEstimate {
        word: x.to_string(),
        bits: code.len(),
        scheme,
    })
}

/// `3 + 2⌈log₂ n⌉ + ⌈log₂(2k) + (n-1) log₂(2k-1)⌉`, the direct scheme ceiling.
pub fn direct_bound(k: u32, n: usize) -> usize {
    if n == 0 {
        return 3;
    }
    let ceil_log = |v: usize| {
        if v <= 1 {
            0
        } else {
            (v - 1).ilog2() as usize + 1
        }
    };
    3 + 2 * ceil_log(n) + rank_width(k, n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncompressibilityReport {
    pub k: u32,
    pub n: usize,
    pub c: u32,
    pub samples: u64,
    pub seed: u64,
    /// `⌊-c/2 + n log₂(2k-1)/2⌋`.
    pub threshold_bits: i64,
    pub incompressible: u64,
    pub fraction: f64,
    /// `1 - 2^{-c}`.
    pub paper_bound: f64,
    /// `μ(x) = 1/γ(n, CR)` as `-log₂ μ`.
    pub minus_log2_mu: f64,
    /// `δ = 2^c`.
    pub delta: f64,
    pub median_bits: usize,
    pub scheme_histogram: BTreeMap<String, u64>,
}

pub fn incompressibility_threshold(k: u32, n: usize, c: u32) -> i64 {
    (-(c as f64) / 2.0 + n as f64 * ((2 * k - 1) as f64).log2() / 2.0).floor() as i64
}

/// Samples uniform cyclically reduced words and counts those whose estimate
/// reaches the threshold.
pub fn incompressibility_experiment(
    k: u32,
    n: usize,
    c: u32,
    samples: u64,
    seed: u64,
) -> Result<IncompressibilityReport> {
    if k == 0 || n == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "need k, n and samples positive".into(),
        ));
    }
    let threshold = incompressibility_threshold(k, n, c);
    let results: Vec<(usize, Scheme)> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let x = words::sample_cyclically_reduced(k, n, &mut words::trial_rng(seed, t));
            let (code, scheme) = encode_word(&x, k).expect("sampled word is over k generators");
            (code.len(), scheme)
        })
        .collect();
    let incompressible = results
        .iter()
        .filter(|(b, _)| *b as i64 >= threshold)
        .count() as u64;
    let mut histogram = BTreeMap::new();
    for (_, s) in &results {
        *histogram.entry(s.name().to_string()).or_insert(0) += 1;
    }
    let mut bits: Vec<usize> = results.iter().map(|r| r.0).collect();
    bits.sort_unstable();
    let gamma_cr = words::gamma(k, n, words::WordSet::CyclicallyReduced);
    Ok(IncompressibilityReport {
        k,
        n,
        c,
        samples,
        seed,
        threshold_bits: threshold,
        incompressible,
        fraction: incompressible as f64 / samples as f64,
        paper_bound: 1.0 - 0.5f64.powi(c as i32),
        minus_log2_mu: log2_big(&gamma_cr),
        delta: 2f64.powi(c as i32),
        median_bits: bits[bits.len() / 2],
        scheme_histogram: histogram,
    })
}

fn log2_big(v: &BigUint) -> f64 {
    let b = v.bits();
    if b <= 64 {
        return v.to_f64().unwrap().log2();
    }
    let shift = b - 64;
    (v >> shift).to_f64().unwrap().log2() + shift as f64
}
