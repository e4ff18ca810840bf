//! Letters, freely and cyclically reduced words, exact counts, lexicographic
//! enumeration and uniform sampling.
//!
//! Letters are totally ordered `a1 < A1 < a2 < A2 < ...` (a generator sorts
//! immediately before its inverse). All canonical forms and enumerations use
//! this order.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default refusal threshold for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// A signed generator `a_i^{±1}`, stored as `2(i-1) + [inverse]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: u32, inverse: bool) -> Letter {
        assert!(generator >= 1, "generator indices start at 1");
        Letter(2 * (generator - 1) + inverse as u32)
    }

    pub fn from_code(code: u32) -> Letter {
        Letter(code)
    }

    /// Position of the letter in the fixed total order.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn generator(self) -> u32 {
        self.0 / 2 + 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// All `2k` letters in order.
    pub fn alphabet(k: u32) -> impl Iterator<Item = Letter> {
        (0..2 * k).map(Letter)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        if g <= 26 {
            let c = (b'a' + (g - 1) as u8) as char;
            if self.is_inverse() {
                write!(f, "{}", c.to_ascii_uppercase())
            } else {
                write!(f, "{c}")
            }
        } else if self.is_inverse() {
            write!(f, "X{g}")
        } else {
            write!(f, "x{g}")
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Wraps letters that are already freely reduced.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Word> {
        if let Some(position) = letters.windows(2).position(|p| p[0] == p[1].inverse()) {
            return Err(Error::NotReduced { position });
        }
        Ok(Word(letters))
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word(letters)
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        Word::free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `u · self · u⁻¹`, reduced.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.mul(self).mul(&u.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => self.0.len() == 1 || a != b.inverse(),
            _ => true,
        }
    }

    /// Splits `self = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.0[i] == self.0[n - 1 - i].inverse() {
            i += 1;
        }
        (Word(self.0[i..n - i].to_vec()), Word(self.0[..i].to_vec()))
    }

    /// Left rotation by `s` places. Only reduced when `self` is cyclically reduced.
    pub fn rotate(&self, s: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let s = s % v.len();
            v.rotate_left(s);
        }
        Word(v)
    }

    /// Parses the text format: lowercase letter `g` is a generator, uppercase
    /// its inverse; or the numeric form `x3 X3` when the text contains digits.
    /// `""` and `"1"` denote the empty word. Non-reduced input is rejected
    /// unless `reduce` is set.
    pub fn parse(text: &str, reduce: bool) -> Result<Word> {
        let text = text.trim();
        let raw = if text.is_empty() || text == "1" {
            Vec::new()
        } else if text.chars().any(|c| c.is_ascii_digit()) {
            parse_numeric(text)?
        } else {
            parse_alpha(text)?
        };
        if reduce {
            Ok(Word::free_reduce(raw))
        } else {
            Word::from_letters(raw)
        }
    }

    /// Numeric text form: `x1 X2 ...`.
    pub fn to_numeric(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.is_inverse() {
                    format!("X{}", l.generator())
                } else {
                    format!("x{}", l.generator())
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Alphabetic form when every generator is at most 26, numeric otherwise.
    pub fn to_text(&self, numeric: bool) -> String {
        if numeric || self.max_generator() > 26 {
            self.to_numeric()
        } else {
            self.0.iter().map(|l| l.to_string()).collect()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.to_text(false))
    }
}

impl std::ops::Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

fn parse_alpha(text: &str) -> Result<Vec<Letter>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok(Letter::new(c as u32 - 'a' as u32 + 1, false))
            } else if c.is_ascii_uppercase() {
                Ok(Letter::new(c as u32 - 'A' as u32 + 1, true))
            } else {
                Err(Error::Parse(format!("unexpected character {c:?}")))
            }
        })
        .collect()
}

fn parse_numeric(text: &str) -> Result<Vec<Letter>> {
    text.split_whitespace()
        .map(|tok| {
            let (inverse, digits) = match tok.as_bytes().first() {
                Some(b'x') => (false, &tok[1..]),
                Some(b'X') => (true, &tok[1..]),
                _ => return Err(Error::Parse(format!("bad token {tok:?}"))),
            };
            let g: u32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in {tok:?}")))?;
            if g == 0 {
                return Err(Error::Parse("generator indices start at 1".into()));
            }
            Ok(Letter::new(g, inverse))
        })
        .collect()
}

/// Booth's least-rotation algorithm; returns the start index of the
/// lexicographically least rotation (the first one on ties).
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k
}

/// Smallest `p` with `s[i] == s[(i + p) % n]` for all `i` and `p | n`.
pub fn cyclic_period(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    // KMP failure function
    let mut fail = vec![0usize; n + 1];
    let mut j = 0;
    for i in 1..n {
        while j > 0 && s[i] != s[j] {
            j = fail[j];
        }
        if s[i] == s[j] {
            j += 1;
        }
        fail[i + 1] = j;
    }
    let p = n - fail[n];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// A nonempty-or-empty cyclically reduced word stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn new(w: &Word) -> Result<CyclicWord> {
        if !w.is_cyclically_reduced() {
            return Err(Error::InvalidArgument(format!(
                "{w} is not cyclically reduced"
            )));
        }
        Ok(CyclicWord(w.rotate(least_rotation(w))))
    }

    /// The cyclic reduction of `w`, as a cyclic word.
    pub fn from_word(w: &Word) -> CyclicWord {
        let (core, _) = w.cyclic_reduce();
        CyclicWord(core.rotate(least_rotation(&core)))
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `true` iff the cyclic word is `u^m` for some `m ≥ 2`.
    pub fn is_proper_power(&self) -> bool {
        is_proper_power(&self.0)
    }

    /// Inversion at the orbit level: invert, then take the least rotation.
    pub fn inverse(&self) -> CyclicWord {
        let inv = self.0.inverse();
        CyclicWord(inv.rotate(least_rotation(&inv)))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Proper-power test on (a rotation of) a cyclic word.
pub fn is_proper_power(w: &[Letter]) -> bool {
    !w.is_empty() && cyclic_period(w) < w.len()
}

/// The two ambient word sets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WordSet {
    /// All freely reduced words.
    Free,
    /// Cyclically reduced words.
    CyclicallyReduced,
}

impl WordSet {
    pub fn contains(self, w: &[Letter]) -> bool {
        match self {
            WordSet::Free => true,
            WordSet::CyclicallyReduced => match (w.first(), w.last()) {
                (Some(&a), Some(&b)) => w.len() == 1 || a != b.inverse(),
                _ => true,
            },
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            WordSet::Free => "F",
            WordSet::CyclicallyReduced => "CR",
        }
    }
}

fn pow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `(2k-1)^n + 1 + (k-1)(1 + (-1)^n)` for `n ≥ 1`.
pub fn rivin_formula(k: u32, n: usize) -> BigUint {
    assert!(n >= 1, "the closed form is stated for n >= 1");
    let even = if n.is_multiple_of(2) { 2u64 } else { 0 };
    pow(2 * k as u64 - 1, n) + BigUint::one() + BigUint::from((k as u64 - 1) * even)
}

/// Exact `γ(n, S)`; `γ(0, ·) = 1` counts the empty word.
pub fn gamma(k: u32, n: usize, set: WordSet) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    match set {
        WordSet::Free => BigUint::from(2 * k as u64) * pow(2 * k as u64 - 1, n - 1),
        WordSet::CyclicallyReduced => rivin_formula(k, n),
    }
}

/// Exact `ρ(n, S) = Σ_{i ≤ n} γ(i, S)`.
pub fn rho(k: u32, n: usize, set: WordSet) -> BigUint {
    (0..=n).map(|i| gamma(k, i, set)).sum()
}

/// `γ(n, {x ∈ set : pred(x)})` by exhaustive enumeration.
pub fn gamma_filtered<P>(k: u32, n: usize, set: WordSet, cap: u64, pred: P) -> Result<BigUint>
where
    P: Fn(&[Letter]) -> bool + Sync,
{
    let mut total = 0u64;
    for_each_word(k, n, set, cap, |w| {
        if pred(w) {
            total += 1;
        }
    })?;
    Ok(BigUint::from(total))
}

/// `ρ` for a filtered set.
pub fn rho_filtered<P>(k: u32, n: usize, set: WordSet, cap: u64, pred: P) -> Result<BigUint>
where
    P: Fn(&[Letter]) -> bool + Sync,
{
    let mut acc = BigUint::zero();
    for i in 0..=n {
        acc += gamma_filtered(k, i, set, cap, &pred)?;
    }
    Ok(acc)
}

/// Exact counts keyed by `(set, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub k: u32,
    pub entries: std::collections::BTreeMap<(WordSet, usize), BigUint>,
}

impl CountTable {
    pub fn closed_form(k: u32, n_max: usize) -> CountTable {
        let mut entries = std::collections::BTreeMap::new();
        for n in 0..=n_max {
            for set in [WordSet::Free, WordSet::CyclicallyReduced] {
                entries.insert((set, n), gamma(k, n, set));
            }
        }
        CountTable { k, entries }
    }

    pub fn get(&self, set: WordSet, n: usize) -> Option<&BigUint> {
        self.entries.get(&(set, n))
    }
}

/// Refuses enumerations whose `(2k-1)^n` exceeds `cap`.
pub fn check_cap(k: u32, n: usize, cap: u64) -> Result<()> {
    let size = pow(2 * k as u64 - 1, n);
    if size > BigUint::from(cap) {
        return Err(Error::BudgetExceeded {
            what: "enumeration",
            needed: size.to_string(),
            cap: cap.to_string(),
        });
    }
    Ok(())
}

/// Odometer over reduced words of a fixed length sharing a fixed prefix, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Enumeration {
    k: u32,
    set: WordSet,
    fixed: usize,
    cur: Vec<Letter>,
    state: State,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl Enumeration {
    /// All members of `set` of length `n`.
    pub fn new(k: u32, n: usize, set: WordSet, cap: u64) -> Result<Enumeration> {
        Enumeration::with_prefix(k, n, set, &Word::empty(), cap)
    }

    /// The shard of members of `set` of length `n` that begin with `prefix`.
    pub fn with_prefix(
        k: u32,
        n: usize,
        set: WordSet,
        prefix: &Word,
        cap: u64,
    ) -> Result<Enumeration> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if prefix.max_generator() > k {
            return Err(Error::InvalidArgument(format!(
                "prefix {prefix} uses generators beyond k = {k}"
            )));
        }
        check_cap(k, n, cap)?;
        let mut e = Enumeration {
            k,
            set,
            fixed: prefix.len(),
            cur: prefix.letters().to_vec(),
            state: State::Fresh,
        };
        if prefix.len() > n {
            e.state = State::Done;
        } else {
            while e.cur.len() < n {
                let next = e.least_after(e.cur.len(), None);
                e.cur.push(next.expect("2k >= 2 leaves a choice"));
            }
        }
        Ok(e)
    }

    /// Least allowed letter at `pos` strictly greater than `after`.
    fn least_after(&self, pos: usize, after: Option<Letter>) -> Option<Letter> {
        let start = after.map_or(0, |l| l.code() + 1);
        let forbidden = if pos == 0 {
            None
        } else {
            Some(self.cur[pos - 1].inverse())
        };
        (start..2 * self.k)
            .map(Letter::from_code)
            .find(|&l| Some(l) != forbidden)
    }

    fn step(&mut self) -> bool {
        let n = self.cur.len();
        let mut pos = n;
        while pos > self.fixed {
            pos -= 1;
            if let Some(l) = self.least_after(pos, Some(self.cur[pos])) {
                self.cur[pos] = l;
                for p in pos + 1..n {
                    self.cur[p] = self.least_after(p, None).unwrap();
                }
                return true;
            }
        }
        false
    }

    /// Advances to the next member and exposes it without allocating.
    pub fn next_slice(&mut self) -> Option<&[Letter]> {
        loop {
            match self.state {
                State::Done => return None,
                State::Fresh => self.state = State::Running,
                State::Running => {
                    if !self.step() {
                        self.state = State::Done;
                        return None;
                    }
                }
            }
            if self.set.contains(&self.cur) {
                return Some(&self.cur);
            }
        }
    }
}

impl Iterator for Enumeration {
    type Item = Word;
    fn next(&mut self) -> Option<Word> {
        self.next_slice()
            .map(|s| Word::from_reduced_unchecked(s.to_vec()))
    }
}

/// All reduced prefixes of length `depth`, in order; the shards they define
/// partition the set of words of any length `≥ depth`.
pub fn shard_prefixes(k: u32, depth: usize) -> Vec<Word> {
    Enumeration::new(k, depth, WordSet::Free, u64::MAX)
        .map(|e| e.collect())
        .unwrap_or_default()
}

/// Visits every member of `set` of length `n` in lexicographic order.
pub fn for_each_word<F: FnMut(&[Letter])>(
    k: u32,
    n: usize,
    set: WordSet,
    cap: u64,
    mut f: F,
) -> Result<()> {
    let mut e = Enumeration::new(k, n, set, cap)?;
    while let Some(w) = e.next_slice() {
        f(w);
    }
    Ok(())
}

/// Parallel fold over prefix shards of depth `min(n, 2)`; the closure maps a
/// member to a count contribution.
pub fn par_count<F>(k: u32, n: usize, set: WordSet, cap: u64, f: F) -> Result<u64>
where
    F: Fn(&[Letter]) -> u64 + Sync,
{
    use rayon::prelude::*;
    check_cap(k, n, cap)?;
    let prefixes = shard_prefixes(k, n.min(2));
    prefixes
        .par_iter()
        .map(|p| {
            let mut e = Enumeration::with_prefix(k, n, set, p, cap)?;
            let mut acc = 0u64;
            while let Some(w) = e.next_slice() {
                acc += f(w);
            }
            Ok(acc)
        })
        .sum()
}

/// A uniformly random freely reduced word of length `n`.
pub fn sample_reduced<R: Rng + ?Sized>(k: u32, n: usize, rng: &mut R) -> Word {
    let mut v = Vec::with_capacity(n);
    if n == 0 {
        return Word::empty();
    }
    v.push(Letter::from_code(rng.gen_range(0..2 * k)));
    for _ in 1..n {
        let forbidden = v.last().unwrap().inverse().code();
        let d = rng.gen_range(0..2 * k - 1);
        v.push(Letter::from_code(if d < forbidden { d } else { d + 1 }));
    }
    Word(v)
}

/// A uniformly random cyclically reduced word of length `n ≥ 1`, by rejection
/// from uniform freely reduced words.
pub fn sample_cyclically_reduced<R: Rng + ?Sized>(k: u32, n: usize, rng: &mut R) -> Word {
    loop {
        let w = sample_reduced(k, n, rng);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}

/// Per-trial generator derived from `(seed, trial)`; independent of the order
/// in which trials run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Deterministic sample for a given seed.
pub fn sample_cyclically_reduced_seeded(k: u32, n: usize, seed: u64) -> Word {
    sample_cyclically_reduced(k, n, &mut ChaCha8Rng::seed_from_u64(seed))
}
