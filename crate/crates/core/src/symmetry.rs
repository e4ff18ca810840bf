//! Relabeling automorphisms, rotations and inversion acting on cyclic words.
//!
//! For words of length `n` over `k` generators the group generated by the
//! `M = k!·2^k` relabelings, the `n` rotations and inversion has order `2Mn`
//! (relabelings commute with the dihedral part). Orbits of cyclically reduced
//! words under this group are counted two ways: by canonicalizing every word,
//! and by Burnside's lemma with fixed points counted from letter constraints.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{self, gamma, least_rotation, Letter, Word, WordSet};

/// Largest rank for which the full relabeling list is materialized.
pub const MAX_RELABELING_RANK: u32 = 8;

/// A signed permutation of the generators, `a_i ↦ a_{π(i)}^{ε_i}`, stored as
/// its action on letter codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relabeling {
    table: Vec<Letter>,
}

impl Relabeling {
    pub fn identity(k: u32) -> Relabeling {
        Relabeling {
            table: Letter::alphabet(k).collect(),
        }
    }

    /// `perm` is 0-based; `signs[i]` is `true` when `a_i` maps to an inverse.
    pub fn new(perm: &[u32], signs: &[bool]) -> Result<Relabeling> {
        let k = perm.len();
        if signs.len() != k {
            return Err(Error::InvalidArgument(
                "perm and signs differ in length".into(),
            ));
        }
        let mut seen = vec![false; k];
        for &p in perm {
            if p as usize >= k || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let mut table = Vec::with_capacity(2 * k);
        for i in 0..k {
            let img = Letter::new(perm[i] + 1, signs[i]);
            table.push(img);
            table.push(img.inverse());
        }
        Ok(Relabeling { table })
    }

    /// Parses `1:2+,2:1-` (a1 ↦ a2, a2 ↦ a1⁻¹). Unlisted generators are fixed.
    pub fn parse(k: u32, spec: &str) -> Result<Relabeling> {
        let mut perm: Vec<u32> = (0..k).collect();
        let mut signs = vec![false; k as usize];
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::Parse(format!("bad relabeling item {item:?}"));
            let (from, to) = item.split_once(':').ok_or_else(bad)?;
            let (to, inverted) = match to.strip_suffix('-') {
                Some(t) => (t, true),
                None => (to.strip_suffix('+').unwrap_or(to), false),
            };
            let from: u32 = from.trim().parse().map_err(|_| bad())?;
            let to: u32 = to.trim().parse().map_err(|_| bad())?;
            if from == 0 || to == 0 || from > k || to > k {
                return Err(bad());
            }
            perm[from as usize - 1] = to - 1;
            signs[from as usize - 1] = inverted;
        }
        Relabeling::new(&perm, &signs)
    }

    pub fn rank(&self) -> u32 {
        (self.table.len() / 2) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(c, l)| l.code() == c as u32)
    }

    /// Image of a letter; generators beyond the rank are fixed.
    #[inline]
    pub fn apply_letter(&self, l: Letter) -> Letter {
        self.table.get(l.code() as usize).copied().unwrap_or(l)
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::from_reduced_unchecked(w.iter().map(|&l| self.apply_letter(l)).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Relabeling) -> Relabeling {
        Relabeling {
            table: other.table.iter().map(|&l| self.apply_letter(l)).collect(),
        }
    }

    pub fn inverse(&self) -> Relabeling {
        let mut table = self.table.clone();
        for (c, l) in self.table.iter().enumerate() {
            table[l.code() as usize] = Letter::from_code(c as u32);
        }
        Relabeling { table }
    }

    pub fn permutation(&self) -> Vec<u32> {
        self.table
            .iter()
            .step_by(2)
            .map(|l| l.generator() - 1)
            .collect()
    }

    pub fn signs(&self) -> Vec<bool> {
        self.table
            .iter()
            .step_by(2)
            .map(|l| l.is_inverse())
            .collect()
    }

    fn pow(&self, e: usize) -> Relabeling {
        let mut acc = Relabeling::identity(self.rank());
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.table.iter().step_by(2).enumerate().map(|(i, l)| {
            format!(
                "{}:{}{}",
                i + 1,
                l.generator(),
                if l.is_inverse() { '-' } else { '+' }
            )
        });
        write!(f, "{}", items.format(","))
    }
}

/// `k!·2^k`.
pub fn relabeling_count(k: u32) -> BigUint {
    let fact: BigUint = (1..=k as u64).map(BigUint::from).product();
    fact << k as usize
}

/// Every relabeling of rank `k`, identity first.
pub fn all_relabelings(k: u32) -> Result<Vec<Relabeling>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > MAX_RELABELING_RANK {
        return Err(Error::BudgetExceeded {
            what: "relabeling list",
            needed: relabeling_count(k).to_string(),
            cap: relabeling_count(MAX_RELABELING_RANK).to_string(),
        });
    }
    let mut out = Vec::new();
    for perm in (0..k).permutations(k as usize) {
        for mask in 0u32..(1 << k) {
            let signs: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            out.push(Relabeling::new(&perm, &signs)?);
        }
    }
    Ok(out)
}

/// `apply_relabeling(τ, w)`.
pub fn apply_relabeling(tau: &Relabeling, w: &Word) -> Word {
    tau.apply(w)
}

/// One element of the order-`2Mn` group: `w ↦ rot_s(τ(w))` or
/// `w ↦ rot_s(τ(w⁻¹))`, where `rot_s` moves the first `s` letters to the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryElement {
    pub relabeling: Relabeling,
    pub rotation: usize,
    pub inverted: bool,
}

impl SymmetryElement {
    pub fn apply(&self, w: &Word) -> Word {
        let base = if self.inverted {
            w.inverse()
        } else {
            w.clone()
        };
        self.relabeling.apply(&base).rotate(self.rotation)
    }
}

/// All `2Mn` elements acting on words of length `n`.
pub fn symmetry_elements(k: u32, n: usize) -> Result<Vec<SymmetryElement>> {
    let rel = all_relabelings(k)?;
    let mut out = Vec::with_capacity(rel.len() * 2 * n.max(1));
    for inverted in [false, true] {
        for tau in &rel {
            for rotation in 0..n.max(1) {
                out.push(SymmetryElement {
                    relabeling: tau.clone(),
                    rotation,
                    inverted,
                });
            }
        }
    }
    Ok(out)
}

fn require_cyclic(x: &Word) -> Result<()> {
    if x.is_empty() || !x.is_cyclically_reduced() {
        return Err(Error::InvalidArgument(format!(
            "{x} is not a nonempty cyclically reduced word"
        )));
    }
    Ok(())
}

/// The set `𝒴(x)`: rotations of `τ(x)` for nontrivial `τ`, rotations of
/// `τ(x⁻¹)` for every `τ`, and nontrivial rotations of `x`.
pub fn y_set(x: &Word, k: u32) -> Result<BTreeSet<Word>> {
    require_cyclic(x)?;
    if words::is_proper_power(x) {
        return Err(Error::ProperPower);
    }
    let n = x.len();
    let inv = x.inverse();
    let mut out = BTreeSet::new();
    for tau in all_relabelings(k)? {
        let img = tau.apply(x);
        let img_inv = tau.apply(&inv);
        for s in 0..n {
            if !tau.is_identity() || s != 0 {
                out.insert(img.rotate(s));
            }
            out.insert(img_inv.rotate(s));
        }
    }
    Ok(out)
}

/// Lexicographically least image of `x` under the group.
pub fn canonical_form(x: &Word, k: u32) -> Result<Word> {
    if !x.is_cyclically_reduced() {
        return Err(Error::InvalidArgument(format!(
            "{x} is not cyclically reduced"
        )));
    }
    if x.is_empty() {
        return Ok(Word::empty());
    }
    let inv = x.inverse();
    let mut best: Option<Word> = None;
    for tau in all_relabelings(k)? {
        for base in [x, &inv] {
            let img = tau.apply(base);
            let img = img.rotate(least_rotation(&img));
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    Ok(best.unwrap())
}

/// Is the rotation of `v` starting at `start` lexicographically below `x`?
#[inline]
fn rotation_below(v: &[Letter], start: usize, x: &[Letter]) -> bool {
    let n = v.len();
    for i in 0..n {
        let a = v[(start + i) % n];
        let b = x[i];
        if a != b {
            return a < b;
        }
    }
    false
}

/// `x == canonical_form(x)`, with early exit.
pub fn is_canonical(x: &[Letter], relabelings: &[Relabeling], buf: &mut Vec<Letter>) -> bool {
    let n = x.len();
    for tau in relabelings {
        for inverted in [false, true] {
            buf.clear();
            if inverted {
                buf.extend(x.iter().rev().map(|l| tau.apply_letter(l.inverse())));
            } else {
                buf.extend(x.iter().map(|&l| tau.apply_letter(l)));
            }
            if (0..n).any(|s| rotation_below(buf, s, x)) {
                return false;
            }
        }
    }
    true
}

/// Orbit bookkeeping for one cyclic word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub canonical: String,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

/// The full orbit of `x` by applying every group element.
pub fn orbit(x: &Word, k: u32) -> Result<BTreeSet<Word>> {
    require_cyclic(x)?;
    Ok(symmetry_elements(k, x.len())?
        .iter()
        .map(|g| g.apply(x))
        .collect())
}

pub fn orbit_record(x: &Word, k: u32) -> Result<OrbitRecord> {
    let orbit = orbit(x, k)?;
    let group = 2 * relabeling_count(k).to_u64().unwrap() * x.len() as u64;
    let size = orbit.len() as u64;
    assert_eq!(group % size, 0, "orbit size must divide the group order");
    Ok(OrbitRecord {
        canonical: canonical_form(x, k)?.to_string(),
        orbit_size: size,
        stabilizer_order: group / size,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitMethod {
    Canonicalize,
    Burnside,
}

/// Number of orbits of length-`n` cyclically reduced words.
pub fn count_orbits(k: u32, n: usize, method: OrbitMethod, cap: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let relabelings = all_relabelings(k)?;
    match method {
        OrbitMethod::Canonicalize => {
            let c = words::par_count(k, n, WordSet::CyclicallyReduced, cap, |x| {
                let mut buf = Vec::with_capacity(n);
                is_canonical(x, &relabelings, &mut buf) as u64
            })?;
            Ok(BigUint::from(c))
        }
        OrbitMethod::Burnside => {
            let mut total = BigUint::zero();
            for tau in &relabelings {
                for s in 0..n {
                    total += fixed_points(tau, n, s, false);
                    total += fixed_points(tau, n, s, true);
                }
            }
            let group = relabeling_count(k) * BigUint::from(2 * n as u64);
            let (q, r) = total.div_rem(&group);
            assert!(
                r.is_zero(),
                "Burnside sum must be divisible by the group order"
            );
            Ok(q)
        }
    }
}

/// Fixed cyclically reduced words of length `n` under `(τ, s, inverted)`.
pub fn fixed_points(tau: &Relabeling, n: usize, s: usize, inverted: bool) -> BigUint {
    let k = tau.rank();
    let size = 2 * k as usize;
    let s = s % n;
    if !inverted {
        // w_i = τ(w_{i+s})  ⇔  w_{i+s} = ψ(w_i) with ψ = τ⁻¹: the word is
        // u σ(u) σ²(u) … with block length d = gcd(n, s)
        let psi = tau.inverse();
        let d = n.gcd(&s);
        let blocks = n / d;
        let t = if blocks == 1 {
            0
        } else {
            mod_inverse(s / d, blocks)
        };
        let sigma = psi.pow(t);
        let cycle = psi.pow(blocks);
        let allowed: Vec<bool> = (0..size as u32)
            .map(|c| cycle.apply_letter(Letter::from_code(c)).code() == c)
            .collect();
        let mut total = BigUint::zero();
        for first in 0..size {
            if !allowed[first] {
                continue;
            }
            let mut v = vec![BigUint::zero(); size];
            v[first] = BigUint::from(1u32);
            for _ in 1..d {
                v = step(&v, &allowed);
            }
            let img = sigma.apply_letter(Letter::from_code(first as u32));
            for (last, count) in v.iter().enumerate() {
                if !count.is_zero() && Letter::from_code(last as u32) != img.inverse() {
                    total += count;
                }
            }
        }
        total
    } else {
        // w_i = φ(w_{c-i}) with φ = inv∘τ and c = n-1-s: a reflection of the
        // cycle, so the word is determined along a half-path between the axes
        let phi = |l: Letter| tau.apply_letter(l).inverse();
        let c = (n - 1 + n - s) % n;
        let codes = || (0..size as u32).map(Letter::from_code);
        let allowed: Vec<bool> = codes().map(|l| phi(phi(l)) == l).collect();
        let vertex: Vec<bool> = codes().map(|l| phi(l) == l).collect();
        let edge: Vec<bool> = codes()
            .map(|l| allowed[l.code() as usize] && phi(l) != l.inverse())
            .collect();
        let (start, end, positions) = if n % 2 == 1 {
            (&vertex, &edge, n.div_ceil(2))
        } else if c.is_multiple_of(2) {
            (&vertex, &vertex, n / 2 + 1)
        } else {
            (&edge, &edge, n / 2)
        };
        let mut v: Vec<BigUint> = (0..size)
            .map(|i| BigUint::from((allowed[i] && start[i]) as u32))
            .collect();
        for _ in 1..positions {
            v = step(&v, &allowed);
        }
        v.iter()
            .enumerate()
            .filter(|(i, _)| end[*i])
            .map(|(_, c)| c.clone())
            .sum()
    }
}

/// One transfer step of the non-backtracking walk restricted to `allowed`.
fn step(v: &[BigUint], allowed: &[bool]) -> Vec<BigUint> {
    let size = v.len();
    let total: BigUint = v.iter().sum();
    (0..size)
        .map(|y| {
            if !allowed[y] {
                BigUint::zero()
            } else {
                // predecessor x must not be the inverse of y
                &total - &v[y ^ 1]
            }
        })
        .collect()
}

fn mod_inverse(a: usize, m: usize) -> usize {
    (1..m)
        .find(|t| (a * t) % m == 1)
        .expect("a and m are coprime")
}

/// `O_n · 2Mn / γ(n, CR)`.
pub fn census_ratio(k: u32, n: usize, method: OrbitMethod, cap: u64) -> Result<BigRational> {
    let orbits = count_orbits(k, n, method, cap)?;
    Ok(ratio_from_orbits(k, n, &orbits))
}

pub fn ratio_from_orbits(k: u32, n: usize, orbits: &BigUint) -> BigRational {
    let num = orbits * relabeling_count(k) * BigUint::from(2 * n as u64);
    BigRational::new(num.into(), gamma(k, n, WordSet::CyclicallyReduced).into())
}

/// One row of the census table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub gamma_cr: String,
    pub orbit_count: String,
    pub ratio_numerator: String,
    pub ratio_denominator: String,
}

pub fn census_row(k: u32, n: usize, method: OrbitMethod, cap: u64) -> Result<CensusRow> {
    let orbits = count_orbits(k, n, method, cap)?;
    let ratio = ratio_from_orbits(k, n, &orbits);
    Ok(CensusRow {
        n,
        gamma_cr: gamma(k, n, WordSet::CyclicallyReduced).to_string(),
        orbit_count: orbits.to_string(),
        ratio_numerator: ratio.numer().to_string(),
        ratio_denominator: ratio.denom().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Enumeration, DEFAULT_ENUMERATION_CAP};

    fn w(s: &str) -> Word {
        Word::parse(s, false).unwrap()
    }

    #[test]
    fn relabeling_counts() {
        assert_eq!(all_relabelings(2).unwrap().len(), 8);
        assert_eq!(all_relabelings(3).unwrap().len(), 48);
        assert!(all_relabelings(2).unwrap()[0].is_identity());
        assert!(matches!(
            all_relabelings(9),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn relabelings_form_a_group() {
        for k in 1..=3 {
            let all = all_relabelings(k).unwrap();
            let set: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            for a in &all {
                assert!(set.contains(&a.inverse()));
                assert!(a.compose(&a.inverse()).is_identity());
                for b in &all {
                    assert!(set.contains(&a.compose(b)));
                }
            }
        }
    }

    #[test]
    fn apply_relabeling_examples() {
        let swap = Relabeling::parse(2, "1:2+,2:1+").unwrap();
        assert_eq!(apply_relabeling(&swap, &w("aB")), w("bA"));
        assert_eq!(
            apply_relabeling(&Relabeling::identity(2), &w("aB")),
            w("aB")
        );
        let tau = Relabeling::parse(2, "1:2+,2:1-").unwrap();
        assert_eq!(tau.apply(&w("ab")), w("bA"));
        assert_eq!(tau.to_string(), "1:2+,2:1-");
        assert!(Relabeling::parse(2, "1:2+").is_err());
    }

    #[test]
    fn y_set_examples() {
        let ys = y_set(&w("ab"), 2).unwrap();
        assert!(ys.contains(&w("ba")));
        assert_eq!(y_set(&w("aaa"), 2), Err(Error::ProperPower));
    }

    #[test]
    fn canonical_form_examples() {
        let x = w("ab");
        let c = canonical_form(&x, 2).unwrap();
        for g in symmetry_elements(2, 2).unwrap() {
            assert_eq!(canonical_form(&g.apply(&x), 2).unwrap(), c);
        }
        assert_eq!(
            canonical_form(&w("aa"), 2).unwrap(),
            canonical_form(&w("bb"), 2).unwrap()
        );
        assert_eq!(canonical_form(&c, 2).unwrap(), c);
        assert_eq!(c, w("ab"));
    }

    #[test]
    fn orbit_stabilizer() {
        for x in ["abAB", "aab", "ab", "aaa", "abaB"] {
            let r = orbit_record(&w(x), 2).unwrap();
            assert_eq!(r.orbit_size * r.stabilizer_order, 2 * 8 * x.len() as u64);
        }
    }

    fn brute_orbits(k: u32, n: usize) -> usize {
        let mut seen = BTreeSet::new();
        for x in
            Enumeration::new(k, n, WordSet::CyclicallyReduced, DEFAULT_ENUMERATION_CAP).unwrap()
        {
            let o = orbit(&x, k).unwrap();
            seen.insert(o.into_iter().next().unwrap());
        }
        seen.len()
    }

    #[test]
    fn small_orbit_counts_by_brute_force() {
        assert_eq!(brute_orbits(2, 1), 1);
        assert_eq!(brute_orbits(2, 2), 2);
        assert_eq!(brute_orbits(2, 3), 2);
        for n in 1..=3 {
            for m in [OrbitMethod::Canonicalize, OrbitMethod::Burnside] {
                let got = count_orbits(2, n, m, DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(got, BigUint::from(brute_orbits(2, n)), "n={n} {m:?}");
            }
        }
    }

    #[test]
    fn fixed_point_counts_match_enumeration() {
        for k in [1u32, 2, 3] {
            for n in 1..=(if k == 3 { 4 } else { 6 }) {
                let all: Vec<Word> =
                    Enumeration::new(k, n, WordSet::CyclicallyReduced, DEFAULT_ENUMERATION_CAP)
                        .unwrap()
                        .collect();
                for g in symmetry_elements(k, n).unwrap() {
                    let brute = all.iter().filter(|x| g.apply(x) == **x).count();
                    let fast = fixed_points(&g.relabeling, n, g.rotation, g.inverted);
                    assert_eq!(fast, BigUint::from(brute), "k={k} n={n} {g:?}");
                }
            }
        }
    }

    #[test]
    fn census_ratio_example() {
        let r = census_ratio(2, 3, OrbitMethod::Burnside, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r, BigRational::new(24.into(), 7.into()));
    }

    #[test]
    fn methods_agree_for_k3() {
        for n in 1..=5 {
            assert_eq!(
                count_orbits(3, n, OrbitMethod::Canonicalize, DEFAULT_ENUMERATION_CAP).unwrap(),
                count_orbits(3, n, OrbitMethod::Burnside, DEFAULT_ENUMERATION_CAP).unwrap()
            );
        }
    }
}
