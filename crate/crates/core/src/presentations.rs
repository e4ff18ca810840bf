//! Finite presentations: length functionals, Tietze cleanup of short
//! relators, the six-letter encoding, Dehn's algorithm, bounded isomorphism
//! search and relator recovery.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::genericity::{self, Lambda};
use crate::symmetry::{self, all_relabelings, Relabeling};
use crate::words::{least_rotation, Enumeration, Letter, Word, WordSet};

/// `⟨b_1, …, b_m | r_1, …, r_t⟩` with nonempty freely reduced relators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: u32,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: u32, relators: Vec<Word>) -> Result<Presentation> {
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidArgument("relators must be nonempty".into()));
            }
            if r.max_generator() > generators {
                return Err(Error::InvalidArgument(format!(
                    "relator {r} uses a generator beyond {generators}"
                )));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    pub fn generators(&self) -> u32 {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `ℓ(Π) = Σ max(|r| - 2, 0)`.
    pub fn ell(&self) -> usize {
        self.relators
            .iter()
            .map(|r| r.len().saturating_sub(2))
            .sum()
    }

    /// `ℓ₁(Π) = Σ |r|`.
    pub fn ell_1(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Parses the text file format: `gens: <m>` then `rel: <word>` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str, reduce: bool) -> Result<Presentation> {
        let mut gens: Option<u32> = None;
        let mut relators = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| bad("expected key: value"))?;
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(bad("duplicate gens line"));
                    }
                    gens = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| bad("bad generator count"))?,
                    );
                }
                "rel" => relators.push(Word::parse(value, reduce)?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let gens = gens.ok_or_else(|| Error::Parse("missing gens line".into()))?;
        let relators = relators.into_iter().filter(|r| !r.is_empty()).collect();
        Presentation::new(gens, relators)
    }

    pub fn to_file_string(&self, numeric: bool) -> String {
        let mut s = format!("gens: {}\n", self.generators);
        for r in &self.relators {
            s.push_str(&format!("rel: {}\n", r.to_text(numeric)));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generators)
            .map(|g| Letter::new(g, false).to_string())
            .collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "<{} | {}>", gens.join(","), rels.join(", "))
    }
}

/// `ℓ(Π)`.
pub fn ell(p: &Presentation) -> usize {
    p.ell()
}

/// `ℓ₁(Π)`.
pub fn ell_1(p: &Presentation) -> usize {
    p.ell_1()
}

/// Replaces generator `g` (1-based) by `images[g-1]`, then reduces.
fn substitute(w: &Word, images: &[Word]) -> Word {
    Word::free_reduce(w.iter().flat_map(|l| {
        let img = &images[l.generator() as usize - 1];
        if l.is_inverse() {
            img.inverse().into_letters()
        } else {
            img.letters().to_vec()
        }
    }))
}

/// One elimination performed by [`tietze_cleanup`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TietzeStep {
    pub relator: String,
    pub eliminated_generator: u32,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeOutcome {
    pub presentation: Presentation,
    pub steps: Vec<TietzeStep>,
}

/// Removes every relator of length at most two by Tietze moves: `x` kills its
/// generator, `xy` with `x ≠ y` eliminates `y`'s generator via `y = x⁻¹`, and
/// `x²` deletes `x` (valid only without 2-torsion, which the caller asserts).
/// Relators are cyclically reduced along the way and trivial ones dropped.
pub fn tietze_cleanup(p: &Presentation, no_two_torsion: bool) -> Result<TietzeOutcome> {
    let mut gens = p.generators;
    let mut rels: Vec<Word> = p.relators.clone();
    let mut steps = Vec::new();
    loop {
        rels = rels
            .into_iter()
            .map(|r| r.cyclic_reduce().0)
            .filter(|r| !r.is_empty())
            .collect();
        let pick = rels
            .iter()
            .position(|r| r.len() == 1)
            .or_else(|| rels.iter().position(|r| r.len() == 2));
        let Some(idx) = pick else { break };
        let r = rels.remove(idx);
        let (target, replacement) = match r.letters() {
            [x] => (x.generator(), Word::empty()),
            [x, y] if x == y => {
                if !no_two_torsion {
                    return Err(Error::TwoTorsionUnasserted);
                }
                (x.generator(), Word::empty())
            }
            [x, y] => {
                // y = x⁻¹, so y's generator becomes x⁻¹ or x
                let img = if y.is_inverse() { *x } else { x.inverse() };
                (y.generator(), Word::from_letters(vec![img]).unwrap())
            }
            _ => unreachable!(),
        };
        // images after deleting `target` and shifting later generators down
        let images: Vec<Word> = (1..=gens)
            .map(|g| {
                let shifted = |l: Letter| {
                    let h = l.generator();
                    Letter::new(if h > target { h - 1 } else { h }, l.is_inverse())
                };
                if g == target {
                    Word::free_reduce(replacement.iter().map(|&l| shifted(l)))
                } else {
                    Word::free_reduce([shifted(Letter::new(g, false))])
                }
            })
            .collect();
        steps.push(TietzeStep {
            relator: r.to_string(),
            eliminated_generator: target,
            replacement: replacement.to_string(),
        });
        rels = rels.iter().map(|w| substitute(w, &images)).collect();
        gens -= 1;
    }
    Ok(TietzeOutcome {
        presentation: Presentation::new(gens, rels)?,
        steps,
    })
}

const CODE_ALPHABET: [char; 6] = ['b', '0', '1', '-', ',', '|'];

/// A presentation as a six-letter string and its 3-bit block code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodedPresentation {
    pub six_letter: String,
    pub binary: String,
}

/// `binary(m) | rel , rel , …` with `b_i ↦ b·binary(i)` and
/// `b_i⁻¹ ↦ -b·binary(i)`, subscripts most significant bit first.
pub fn encode(p: &Presentation) -> Result<EncodedPresentation> {
    if p.generators == 0 {
        return Err(Error::InvalidArgument(
            "encoding needs at least one generator".into(),
        ));
    }
    let mut w = format!("{:b}|", p.generators);
    for (i, r) in p.relators.iter().enumerate() {
        if i > 0 {
            w.push(',');
        }
        for l in r.iter() {
            if l.is_inverse() {
                w.push('-');
            }
            w.push('b');
            w.push_str(&format!("{:b}", l.generator()));
        }
    }
    let binary = block_code(&w);
    Ok(EncodedPresentation {
        six_letter: w,
        binary,
    })
}

fn block_code(w: &str) -> String {
    w.chars()
        .map(|c| {
            let i = CODE_ALPHABET.iter().position(|&a| a == c).unwrap();
            format!("{i:03b}")
        })
        .collect()
}

/// Inverse of the block code.
pub fn decode_binary(bits: &str) -> Result<Presentation> {
    if !bits.len().is_multiple_of(3) {
        return Err(Error::Parse("bit length is not a multiple of 3".into()));
    }
    let mut w = String::with_capacity(bits.len() / 3);
    for chunk in bits.as_bytes().chunks(3) {
        let s = std::str::from_utf8(chunk).map_err(|_| Error::Parse("bad bits".into()))?;
        let i =
            usize::from_str_radix(s, 2).map_err(|_| Error::Parse(format!("bad block {s:?}")))?;
        w.push(
            *CODE_ALPHABET
                .get(i)
                .ok_or_else(|| Error::Parse(format!("unused block {s}")))?,
        );
    }
    decode(&w)
}

fn parse_subscript(bits: &str) -> Result<u32> {
    if bits.is_empty() || bits.starts_with('0') {
        return Err(Error::Parse(format!("bad subscript {bits:?}")));
    }
    u32::from_str_radix(bits, 2).map_err(|_| Error::Parse(format!("subscript {bits:?} overflows")))
}

/// Inverse of [`encode`] on six-letter strings.
pub fn decode(w: &str) -> Result<Presentation> {
    let (head, body) = w
        .split_once('|')
        .ok_or_else(|| Error::Parse("missing '|'".into()))?;
    let m = parse_subscript(head)?;
    let mut relators = Vec::new();
    if !body.is_empty() {
        for rel in body.split(',') {
            let mut letters = Vec::new();
            let bytes = rel.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                let inverse = bytes[i] == b'-';
                if inverse {
                    i += 1;
                }
                if bytes.get(i) != Some(&b'b') {
                    return Err(Error::Parse(format!("expected 'b' in {rel:?}")));
                }
                i += 1;
                let start = i;
                while i < bytes.len() && (bytes[i] == b'0' || bytes[i] == b'1') {
                    i += 1;
                }
                letters.push(Letter::new(parse_subscript(&rel[start..i])?, inverse));
            }
            relators.push(Word::from_letters(letters)?);
        }
    }
    Presentation::new(m, relators)
}

/// `2 + ⌊log₂ m⌋ + (ℓ₁ + t)(⌊log₂ m⌋ + 3)`.
pub fn encoding_length_bound(p: &Presentation) -> usize {
    let lg = p.generators.max(1).ilog2() as usize;
    2 + lg + (p.ell_1() + p.relators.len()) * (lg + 3)
}

/// One replacement performed by Dehn's algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DehnStep {
    pub position: usize,
    pub replaced: String,
    pub replacement: String,
    pub length_before: usize,
    pub length_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DehnTrace {
    pub steps: Vec<DehnStep>,
}

/// Dehn's algorithm for a single `C'(1/6)` relator.
#[derive(Clone, Debug)]
pub struct DehnOracle {
    relator: Word,
    symmetrized: Vec<Word>,
}

impl DehnOracle {
    pub fn new(relator: &Word) -> Result<DehnOracle> {
        let sixth = Lambda::new(1, 6).unwrap();
        if relator.is_empty() || !relator.is_cyclically_reduced() {
            return Err(Error::InvalidArgument(format!(
                "{relator} is not cyclically reduced"
            )));
        }
        if !genericity::satisfies_c_prime(relator, sixth)?.satisfied {
            return Err(Error::SmallCancellation("1/6".into()));
        }
        Ok(DehnOracle {
            relator: relator.clone(),
            symmetrized: genericity::symmetrized_set(relator),
        })
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Leftmost start, then longest match, then first element: the cyclic
    /// subword of `cur` that is more than half of a symmetrized element.
    fn find_match(&self, cur: &[Letter]) -> Option<(usize, usize, usize)> {
        let n = cur.len();
        let r = self.relator.len();
        for start in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for (j, e) in self.symmetrized.iter().enumerate() {
                let mut len = 0;
                while len < n && len < r && cur[(start + len) % n] == e[len] {
                    len += 1;
                }
                if 2 * len > r && best.is_none_or(|(l, _)| len > l) {
                    best = Some((len, j));
                }
            }
            if let Some((len, j)) = best {
                return Some((start, len, j));
            }
        }
        None
    }

    /// Reduces `w` modulo the normal closure; the result is empty iff `w` lies
    /// in it. Works on the cyclic reduction since membership is invariant
    /// under conjugation.
    pub fn reduce(&self, w: &Word) -> (Word, DehnTrace) {
        let mut cur = Word::free_reduce(w.iter().copied()).cyclic_reduce().0;
        let mut trace = DehnTrace::default();
        while let Some((start, len, j)) = self.find_match(&cur) {
            let e = &self.symmetrized[j];
            let rotated = cur.rotate(start);
            let replacement = Word::from_reduced_unchecked(e[len..].to_vec()).inverse();
            let next = Word::free_reduce(
                replacement
                    .iter()
                    .copied()
                    .chain(rotated[len..].iter().copied()),
            )
            .cyclic_reduce()
            .0;
            assert!(next.len() < cur.len(), "Dehn steps strictly shorten");
            trace.steps.push(DehnStep {
                position: start,
                replaced: Word::from_reduced_unchecked(e[..len].to_vec()).to_string(),
                replacement: replacement.to_string(),
                length_before: cur.len(),
                length_after: next.len(),
            });
            cur = next;
        }
        (cur, trace)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.reduce(w).0.is_empty()
    }
}

/// `dehn_reduce(r, w)`.
pub fn dehn_reduce(r: &Word, w: &Word) -> Result<(Word, DehnTrace)> {
    Ok(DehnOracle::new(r)?.reduce(w))
}

/// Semi-decides `w ∈ ncl(R)` for arbitrary `R`: breadth-first search over
/// cyclic words, each step replacing a maximal cyclic subword `s` of the
/// current word by `t⁻¹`, where `st` is a cyclic permutation of a relator or
/// its inverse. Returns the number of steps used, or `None` when `depth`
/// steps (or `state_cap` visited words per level) do not suffice.
pub fn bounded_membership(
    relators: &[Word],
    w: &Word,
    depth: usize,
    state_cap: usize,
) -> Option<usize> {
    let start = w.cyclic_reduce().0;
    if start.is_empty() {
        return Some(0);
    }
    let elements: Vec<Word> = {
        let mut set = BTreeSet::new();
        for r in relators {
            let core = r.cyclic_reduce().0;
            for e in genericity::symmetrized_set(&core) {
                set.insert(e);
            }
        }
        set.into_iter().collect()
    };
    let key = |c: &Word| c.rotate(least_rotation(c));
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(key(&start));
    let mut frontier = vec![start];
    for level in 1..=depth {
        let mut next = Vec::new();
        for cur in &frontier {
            let n = cur.len();
            for s in 0..n {
                for e in &elements {
                    let mut len = 0;
                    while len < n && len < e.len() && cur[(s + len) % n] == e[len] {
                        len += 1;
                    }
                    if len == 0 {
                        continue;
                    }
                    let rotated = cur.rotate(s);
                    let cand = Word::free_reduce(
                        e[len..]
                            .iter()
                            .rev()
                            .map(|l| l.inverse())
                            .chain(rotated[len..].iter().copied()),
                    )
                    .cyclic_reduce()
                    .0;
                    if cand.is_empty() {
                        return Some(level);
                    }
                    if next.len() < state_cap && seen.insert(key(&cand)) {
                        next.push(cand);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

/// Which relators the search proposes for the target class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CandidatePool {
    /// Rotations of the cyclic cores of `h(r)^{±1}` for the input relators.
    Images,
    /// Every class member up to the length cap, in size-then-lex order.
    Exhaustive,
}

/// The class of `k`-generator one-relator presentations whose relator is
/// cyclically reduced, in `E(λ)`, satisfies `C'(1/6)` and has length at most
/// `max_len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassParams {
    pub k: u32,
    pub lambda: Lambda,
    pub max_len: usize,
    pub pool: CandidatePool,
}

impl ClassParams {
    pub fn contains(&self, v: &Word, relabelings: &[Relabeling]) -> bool {
        self.contains_up_to_rotation(v) && genericity::in_e_with(v, self.lambda, relabelings)
    }

    /// The rotation-invariant part of [`ClassParams::contains`].
    fn contains_up_to_rotation(&self, v: &Word) -> bool {
        let sixth = Lambda::new(1, 6).unwrap();
        !v.is_empty()
            && v.len() <= self.max_len
            && v.max_generator() <= self.k
            && v.is_cyclically_reduced()
            && !crate::words::is_proper_power(v)
            && genericity::max_piece(v) < sixth.threshold(v.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Longest image word allowed for either map.
    pub map_len: usize,
    /// Relator applications allowed on the input side.
    pub depth: usize,
    /// Visited-word cap per level of the input-side search.
    pub state_cap: usize,
    /// Refuse when more map pairs than this would be enumerated.
    pub max_map_pairs: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            map_len: 1,
            depth: 2,
            state_cap: 20_000,
            max_map_pairs: 1_000_000,
        }
    }
}

/// A verified tuple `(Π', h, h', d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub presentation: Presentation,
    pub relator: Word,
    /// Images of the input generators in the target free group.
    pub h: Vec<Word>,
    /// Images of the target generators in the input free group.
    pub h_prime: Vec<Word>,
    pub depth: usize,
    pub size: usize,
    pub tuples_checked: u64,
}

fn words_up_to(k: u32, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for n in 0..=max_len {
        out.extend(Enumeration::new(k, n, WordSet::Free, u64::MAX).expect("uncapped"));
    }
    out
}

/// All maps from `domain` generators to words in `pool`, ordered by total
/// length then lexicographically.
fn maps(domain: u32, pool: &[Word]) -> Vec<Vec<Word>> {
    let mut out: Vec<Vec<Word>> = vec![Vec::new()];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |w| {
                    let mut v = prefix.clone();
                    v.push(w.clone());
                    v
                })
            })
            .collect();
    }
    out.sort_by(|a, b| {
        let la: usize = a.iter().map(|w| w.len()).sum();
        let lb: usize = b.iter().map(|w| w.len()).sum();
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    out
}

fn generator(g: u32) -> Word {
    Word::from_letters(vec![Letter::new(g, false)]).unwrap()
}

/// Searches the class for a presentation of the same group as `pi`,
/// enumerating `(v, h, h', d)` by total size `|v| + Σ|h| + Σ|h'| + d` and
/// then lexicographically, and returning the first tuple whose four
/// membership conditions are all witnessed: `h(r) ∈ ncl(v)` and
/// `h h'(x') x'⁻¹ ∈ ncl(v)` by Dehn's algorithm, `h'(v) ∈ ncl(R)` and
/// `h' h(x) x⁻¹ ∈ ncl(R)` by [`bounded_membership`] within `d` steps.
pub fn search_isomorphic(
    pi: &Presentation,
    class: &ClassParams,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    let relabelings = all_relabelings(class.k)?;
    let h_pool = words_up_to(class.k, budget.map_len);
    let hp_pool = words_up_to(pi.generators.max(1), budget.map_len);
    let pairs = (h_pool.len() as f64).powi(pi.generators as i32)
        * (hp_pool.len() as f64).powi(class.k as i32);
    if pairs > budget.max_map_pairs as f64 {
        return Err(Error::BudgetExceeded {
            what: "map pairs",
            needed: format!("{pairs:.0}"),
            cap: budget.max_map_pairs.to_string(),
        });
    }
    let hs = maps(pi.generators, &h_pool);
    let hps = if pi.generators == 0 {
        vec![vec![Word::empty(); class.k as usize]]
    } else {
        maps(class.k, &hp_pool)
    };

    let exhaustive: Vec<Word> = match class.pool {
        CandidatePool::Exhaustive => {
            let mut v = Vec::new();
            for n in 1..=class.max_len {
                v.extend(
                    Enumeration::new(
                        class.k,
                        n,
                        WordSet::CyclicallyReduced,
                        crate::words::DEFAULT_ENUMERATION_CAP,
                    )?
                    .filter(|w| class.contains(w, &relabelings)),
                );
            }
            v
        }
        CandidatePool::Images => Vec::new(),
    };

    let apply_map = |images: &[Word], w: &Word| substitute(w, images);
    let mut membership_cache: HashMap<Word, bool> = HashMap::new();
    let mut c_prime_cache: HashMap<Word, bool> = HashMap::new();
    let mut oracles: HashMap<Word, DehnOracle> = HashMap::new();
    let mut tuples_checked = 0u64;
    // (base size, v, h, h') that pass the candidate-side checks
    let mut survivors: Vec<(usize, Word, Vec<Word>, Vec<Word>)> = Vec::new();

    for h in &hs {
        let candidates: Vec<Word> = match class.pool {
            CandidatePool::Exhaustive => exhaustive.clone(),
            CandidatePool::Images => {
                let mut set = BTreeSet::new();
                for r in pi.relators() {
                    let core = apply_map(h, r).cyclic_reduce().0;
                    if core.is_empty() || core.len() > class.max_len {
                        continue;
                    }
                    // the piece bound does not depend on the rotation, E(λ) does
                    let canon = core.rotate(least_rotation(&core));
                    let small_cancellation = *c_prime_cache
                        .entry(canon)
                        .or_insert_with(|| class.contains_up_to_rotation(&core));
                    if !small_cancellation {
                        continue;
                    }
                    for v in genericity::symmetrized_set(&core) {
                        let ok = *membership_cache.entry(v.clone()).or_insert_with(|| {
                            genericity::in_e_with(&v, class.lambda, &relabelings)
                        });
                        if ok {
                            set.insert(v);
                        }
                    }
                }
                set.into_iter().collect()
            }
        };
        let images: Vec<Word> = pi.relators().iter().map(|r| apply_map(h, r)).collect();
        let mut passing: Vec<&Word> = Vec::new();
        for v in &candidates {
            if !oracles.contains_key(v) {
                oracles.insert(v.clone(), DehnOracle::new(v)?);
            }
            if images.iter().all(|w| oracles[v].contains(w)) {
                passing.push(v);
            }
        }
        if passing.is_empty() {
            continue;
        }
        let h_size: usize = h.iter().map(|w| w.len()).sum();
        for hp in &hps {
            let hp_size: usize = hp.iter().map(|w| w.len()).sum();
            // h h'(x') x'⁻¹ for each target generator
            let round: Vec<Word> = (1..=class.k)
                .map(|g| apply_map(h, &hp[g as usize - 1]).mul(&generator(g).inverse()))
                .collect();
            for &v in &passing {
                tuples_checked += 1;
                if round.iter().all(|w| oracles[v].contains(w)) {
                    survivors.push((v.len() + h_size + hp_size, v.clone(), h.clone(), hp.clone()));
                }
            }
        }
    }
    survivors.sort();

    let mut best: Option<(usize, usize, usize)> = None; // (total, index, depth)
    for (idx, (base, v, h, hp)) in survivors.iter().enumerate() {
        if best.is_some_and(|(total, _, _)| *base > total) {
            break;
        }
        let mut needed = vec![apply_map(hp, v)];
        for g in 1..=pi.generators {
            needed.push(apply_map(hp, &apply_map(h, &generator(g))).mul(&generator(g).inverse()));
        }
        let mut depth = 0;
        let mut ok = true;
        for w in &needed {
            match bounded_membership(pi.relators(), w, budget.depth, budget.state_cap) {
                Some(d) => depth = depth.max(d),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let total = base + depth;
        let better = match best {
            None => true,
            Some((t, j, _)) => {
                let (_, bv, bh, bhp) = &survivors[j];
                (total, v, h, hp) < (t, bv, bh, bhp)
            }
        };
        if better {
            best = Some((total, idx, depth));
        }
    }

    let (size, idx, depth) = best.ok_or(Error::NotFound)?;
    let (_, v, h, hp) = survivors[idx].clone();
    Ok(SearchResult {
        presentation: Presentation::new(class.k, vec![v.clone()])?,
        relator: v,
        h,
        h_prime: hp,
        depth,
        size,
        tuples_checked,
    })
}

/// Every cyclic permutation of `τ(v)` and `τ(v)⁻¹` over all relabelings.
pub fn recovery_candidates(v: &Word, k: u32) -> Result<BTreeSet<Word>> {
    symmetry::orbit(v, k)
}

/// Picks the unique member of the orbit of `v` that starts with `prefix`.
pub fn recover_from_candidate(v: &Word, prefix: &Word, k: u32) -> Result<Word> {
    let matches: Vec<Word> = recovery_candidates(v, k)?
        .into_iter()
        .filter(|x| x.starts_with(prefix))
        .collect();
    match matches.len() {
        0 => Err(Error::NotFound),
        1 => Ok(matches.into_iter().next().unwrap()),
        n => Err(Error::Ambiguous(n)),
    }
}

/// Runs [`search_isomorphic`] and then [`recover_from_candidate`].
pub fn recover_relator(
    pi: &Presentation,
    prefix: &Word,
    class: &ClassParams,
    budget: &SearchBudget,
) -> Result<Word> {
    let found = search_isomorphic(pi, class, budget)?;
    recover_from_candidate(&found.relator, prefix, class.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{sample_cyclically_reduced, sample_reduced, trial_rng};

    fn w(s: &str) -> Word {
        Word::parse(s, false).unwrap()
    }

    fn pres(m: u32, rels: &[&str]) -> Presentation {
        Presentation::new(m, rels.iter().map(|r| w(r)).collect()).unwrap()
    }

    #[test]
    fn length_functionals() {
        let p = pres(2, &["abAB"]);
        assert_eq!((p.ell(), p.ell_1()), (2, 4));
        let e = pres(3, &[]);
        assert_eq!((e.ell(), e.ell_1()), (0, 0));
        let one = pres(1, &["a"]);
        assert_eq!((ell(&one), ell_1(&one)), (0, 1));
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# commutator\ngens: 2\nrel: abAB\n\nrel: x1 x1 x2\n";
        let p = Presentation::parse(text, false).unwrap();
        assert_eq!(p, pres(2, &["abAB", "aab"]));
        assert_eq!(
            Presentation::parse(&p.to_file_string(false), false).unwrap(),
            p
        );
        assert!(Presentation::parse("rel: ab\n", false).is_err());
        assert!(Presentation::parse("gens: 1\nrel: ab\n", false).is_err());
        assert!(Presentation::parse("gens: 2\nrel: aAb\n", false).is_err());
    }

    #[test]
    fn tietze_examples() {
        let out = tietze_cleanup(&pres(2, &["ab"]), false).unwrap();
        assert_eq!(out.presentation, pres(1, &[]));
        let out = tietze_cleanup(&pres(1, &["a"]), false).unwrap();
        assert_eq!(out.presentation, pres(0, &[]));
        let p = pres(2, &["aa", "abab", "bbaab"]);
        assert_eq!(tietze_cleanup(&p, false), Err(Error::TwoTorsionUnasserted));
        // deleting a leaves bb and bbb, and bb then deletes b
        let out = tietze_cleanup(&p, true).unwrap();
        assert_eq!(out.presentation, pres(0, &[]));
        assert_eq!(out.steps.len(), 2);
        let out = tietze_cleanup(&pres(2, &["aa", "abbab"]), true).unwrap();
        assert_eq!(out.presentation, pres(1, &["aaa"]));
    }

    #[test]
    fn tietze_substitution_uses_the_inverse() {
        // ab = 1 gives b = A, so abbbc becomes AAc and c is renumbered
        let out = tietze_cleanup(&pres(3, &["ab", "abbbc", "cacac"]), false).unwrap();
        let p = out.presentation;
        assert_eq!(p.generators(), 2);
        assert_eq!(p.relators()[0], w("AAb"));
        assert_eq!(p.relators()[1], w("babab"));
        // AB = 1 gives b = A, and bbbaaa collapses to the empty word
        let out = tietze_cleanup(&pres(2, &["AB", "bbbaaa"]), false).unwrap();
        assert_eq!(out.presentation, pres(1, &[]));
    }

    #[test]
    fn encode_example() {
        let e = encode(&pres(2, &["abAB"])).unwrap();
        assert_eq!(e.six_letter, "10|b1b10-b1-b10");
        assert_eq!(e.binary.len(), 3 * e.six_letter.len());
        assert_eq!(&e.binary[..6], "010001");
        assert_eq!(decode(&e.six_letter).unwrap(), pres(2, &["abAB"]));
        assert_eq!(decode_binary(&e.binary).unwrap(), pres(2, &["abAB"]));
        assert_eq!(encode(&pres(3, &[])).unwrap().six_letter, "11|");
        assert!(encode(&pres(0, &[])).is_err());
        assert!(decode("10|b01").is_err());
        assert!(decode("10b1").is_err());
        assert!(decode_binary("110").is_err());
    }

    #[test]
    fn encoding_respects_length_bound() {
        for t in 0..300 {
            let mut rng = trial_rng(77, t);
            let m = 1 + (t % 17) as u32;
            let rels = (0..1 + t % 4)
                .map(|_| loop {
                    let x = sample_reduced(m, 1 + (t as usize % 9), &mut rng);
                    if !x.is_empty() {
                        break x;
                    }
                })
                .collect();
            let p = Presentation::new(m, rels).unwrap();
            let e = encode(&p).unwrap();
            assert!(e.six_letter.len() <= encoding_length_bound(&p));
            assert_eq!(decode_binary(&e.binary).unwrap(), p);
        }
    }

    fn generic_c6(n: usize, seed: u64) -> Word {
        let sixth = Lambda::new(1, 6).unwrap();
        (0..)
            .map(|t| sample_cyclically_reduced(2, n, &mut trial_rng(seed, t)))
            .find(|x| genericity::satisfies_c_prime(x, sixth).unwrap().satisfied)
            .unwrap()
    }

    #[test]
    fn dehn_examples() {
        let r = generic_c6(30, 1);
        let (out, trace) = dehn_reduce(&r, &r).unwrap();
        assert!(out.is_empty());
        assert_eq!(trace.steps.len(), 1);
        let a = w("a");
        assert!(!dehn_reduce(&r, &a).unwrap().0.is_empty());
        assert!(matches!(
            dehn_reduce(&w("abAB"), &a),
            Err(Error::SmallCancellation(_))
        ));
    }

    #[test]
    fn dehn_accepts_products_of_conjugates() {
        let r = generic_c6(36, 2);
        let oracle = DehnOracle::new(&r).unwrap();
        for t in 0..50 {
            let mut rng = trial_rng(3, t);
            let u = sample_reduced(2, 7, &mut rng);
            let v = sample_reduced(2, 9, &mut rng);
            let word = r.conjugate_by(&u).mul(&r.inverse().conjugate_by(&v));
            let (out, trace) = oracle.reduce(&word);
            assert!(out.is_empty(), "{word}");
            assert!(trace.steps.iter().all(|s| s.length_after < s.length_before));
            assert!(!oracle.contains(&word.mul(&w("b"))));
        }
    }

    #[test]
    fn bounded_membership_finds_small_areas() {
        let rels = vec![w("abAB")];
        assert_eq!(bounded_membership(&rels, &w("abAB"), 1, 1000), Some(1));
        assert_eq!(bounded_membership(&rels, &w("baBA"), 1, 1000), Some(1));
        assert_eq!(bounded_membership(&rels, &Word::empty(), 0, 1000), Some(0));
        let two = w("abAB").mul(&w("abAB"));
        assert!(bounded_membership(&rels, &two, 2, 1000).is_some());
        assert_eq!(bounded_membership(&rels, &w("a"), 3, 1000), None);
    }

    #[test]
    fn recovery_from_candidate() {
        let lambda = Lambda::new(1, 6).unwrap();
        let rel = all_relabelings(2).unwrap();
        let r = (0..)
            .map(|t| sample_cyclically_reduced(2, 60, &mut trial_rng(12, t)))
            .find(|x| genericity::in_e_with(x, lambda, &rel))
            .unwrap();
        let tau = Relabeling::parse(2, "1:2-,2:1+").unwrap();
        let v = tau.apply(&r.inverse()).rotate(17);
        let u = Word::from_letters(r[..10].to_vec()).unwrap();
        assert_eq!(recover_from_candidate(&v, &u, 2).unwrap(), r);
        // a longer prefix still singles out r
        let u2 = Word::from_letters(r[..25].to_vec()).unwrap();
        assert_eq!(recover_from_candidate(&v, &u2, 2).unwrap(), r);
        assert!(matches!(
            recover_from_candidate(&w("aabab"), &w("a"), 2),
            Err(Error::Ambiguous(_))
        ));
    }

    #[test]
    fn search_rejects_the_trivial_group() {
        let class = ClassParams {
            k: 2,
            lambda: Lambda::new(1, 6).unwrap(),
            max_len: 12,
            pool: CandidatePool::Images,
        };
        let budget = SearchBudget {
            map_len: 2,
            ..SearchBudget::default()
        };
        assert_eq!(
            search_isomorphic(&pres(1, &["a"]), &class, &budget),
            Err(Error::NotFound)
        );
        let exhaustive = ClassParams {
            pool: CandidatePool::Exhaustive,
            ..class
        };
        assert_eq!(
            search_isomorphic(&pres(1, &["a"]), &exhaustive, &budget),
            Err(Error::NotFound)
        );
    }
}
