//! Verdicts on the hypotheses needed by the uniform-morphism antipower
//! construction: prolongability, reachable letters, uniform recurrence,
//! letter injectivity and periodicity.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphic::MorphicWord;
use crate::morphism::Morphism;
use crate::word::{factor_count, find_occurrences, is_primitive, FiniteWord, Letter};

/// A three-valued answer. `Unknown` is never coerced to `No`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trivalent {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Trivalent {
    fn from(b: bool) -> Self {
        if b {
            Trivalent::Yes
        } else {
            Trivalent::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Periodicity {
    Periodic { unit: String },
    Aperiodic,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub morphism: String,
    pub seed: char,
    pub uniform_radius: Option<usize>,
    pub prolongable: bool,
    pub reachable_letters: Vec<char>,
    pub alphabet_size: usize,
    pub uniformly_recurrent: Trivalent,
    /// Exponent used in the recurrence criterion: reachable letters minus one.
    pub recurrence_exponent: Option<usize>,
    /// The same criterion evaluated with the full alphabet size minus one.
    pub recurrence_with_full_alphabet: Trivalent,
    pub periodicity: Periodicity,
    pub injective_on_letters: bool,
    pub prefix_length: usize,
}

/// Letters occurring in `mu^omega(seed)`: the closure of `{seed}` under
/// "occurs in the image of".
pub fn reachable_letters(mu: &Morphism, seed: Letter) -> BTreeSet<Letter> {
    let mut seen = BTreeSet::from([seed]);
    let mut stack = vec![seed];
    while let Some(a) = stack.pop() {
        for &c in mu.image(a) {
            if seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}

/// Set of letters of `mu^steps(a)`.
fn letters_after(mu: &Morphism, a: Letter, steps: usize) -> BTreeSet<Letter> {
    let mut current = BTreeSet::from([a]);
    for _ in 0..steps {
        current = current
            .iter()
            .flat_map(|&c| mu.image(c).iter().copied())
            .collect();
    }
    current
}

fn check_prolongable(mu: &Morphism, seed: Letter) -> Result<()> {
    if !mu.alphabet().contains(seed) {
        return Err(Error::LetterOutOfRange {
            letter: seed,
            size: mu.alphabet().size(),
        });
    }
    if !mu.is_prolongable(seed) {
        return Err(Error::NotProlongable(mu.alphabet().symbol(seed)));
    }
    Ok(())
}

fn recurrence_with_exponent(mu: &Morphism, seed: Letter, exponent: usize) -> bool {
    reachable_letters(mu, seed)
        .into_iter()
        .all(|a| letters_after(mu, a, exponent).contains(&seed))
}

/// Uniform recurrence of `mu^omega(seed)` for a uniform morphism: every
/// reachable letter `a` has `seed` in `mu^(m'-1)(a)`, with `m'` the number
/// of reachable letters.
pub fn is_uniformly_recurrent(mu: &Morphism, seed: Letter) -> Result<bool> {
    mu.require_uniform()?;
    check_prolongable(mu, seed)?;
    let m = reachable_letters(mu, seed).len();
    Ok(recurrence_with_exponent(mu, seed, m - 1))
}

pub fn is_injective_on_letters(mu: &Morphism) -> bool {
    mu.is_injective_on_letters()
}

/// True iff `t^omega` is a fixed point of `mu`: the image of each `t[i]`
/// equals the periodic extension of `t` read from position `i * r`.
fn unit_is_fixed(mu: &Morphism, unit: &[Letter], r: usize) -> bool {
    let l = unit.len();
    unit.iter().enumerate().all(|(i, &c)| {
        mu.image(c)
            .iter()
            .enumerate()
            .all(|(j, &x)| x == unit[(i * r + j) % l])
    })
}

/// Periodicity of `mu^omega(seed)` for an injective uniform morphism.
///
/// A periodic fixed point of such a morphism has a minimal unit made of
/// distinct letters whose length is coprime to `r`, so the candidates are
/// finite. Each candidate is decided exactly: the unit read from the prefix
/// generates the word iff its periodic extension is fixed by `mu`.
/// Noninjective morphisms yield `Unknown`.
pub fn classify_periodicity(source: &MorphicWord, prefix_length: usize) -> Result<Periodicity> {
    let mu = source.morphism();
    let r = mu.require_uniform()?;
    if !mu.is_injective_on_letters() {
        return Ok(Periodicity::Unknown);
    }
    let m = reachable_letters(mu, source.seed()).len();
    if prefix_length < m {
        return Err(Error::InvalidParameter(format!(
            "prefix of length {prefix_length} is too short to read a unit of up to {m} letters"
        )));
    }
    source.with_prefix(prefix_length, |prefix| {
        for l in 1..=m {
            let unit = &prefix[..l];
            let distinct = unit.iter().enumerate().all(|(i, c)| !unit[..i].contains(c));
            if !distinct || l.gcd(&r) != 1 {
                continue;
            }
            if unit_is_fixed(mu, unit, r) {
                debug_assert!(prefix.iter().enumerate().all(|(i, &c)| c == unit[i % l]));
                let word = FiniteWord::new(mu.alphabet().clone(), unit.to_vec())?;
                return Ok(Periodicity::Periodic {
                    unit: word.to_string(),
                });
            }
        }
        Ok(Periodicity::Aperiodic)
    })?
}

/// Full verdict. Non-uniform or non-prolongable inputs produce a partial
/// verdict with `Unknown` fields instead of an error.
pub fn classify(
    mu: &Morphism,
    seed: Letter,
    prefix_length: usize,
) -> Result<ClassificationVerdict> {
    if !mu.alphabet().contains(seed) {
        return Err(Error::LetterOutOfRange {
            letter: seed,
            size: mu.alphabet().size(),
        });
    }
    let alphabet = mu.alphabet();
    let prolongable = mu.is_prolongable(seed);
    let reachable = reachable_letters(mu, seed);
    let mut verdict = ClassificationVerdict {
        morphism: mu.to_string(),
        seed: alphabet.symbol(seed),
        uniform_radius: mu.uniform_radius(),
        prolongable,
        reachable_letters: reachable.iter().map(|&c| alphabet.symbol(c)).collect(),
        alphabet_size: alphabet.size(),
        uniformly_recurrent: Trivalent::Unknown,
        recurrence_exponent: None,
        recurrence_with_full_alphabet: Trivalent::Unknown,
        periodicity: Periodicity::Unknown,
        injective_on_letters: mu.is_injective_on_letters(),
        prefix_length,
    };
    if !prolongable || mu.uniform_radius().is_none() {
        return Ok(verdict);
    }
    verdict.uniformly_recurrent = is_uniformly_recurrent(mu, seed)?.into();
    verdict.recurrence_exponent = Some(reachable.len() - 1);
    verdict.recurrence_with_full_alphabet =
        recurrence_with_exponent(mu, seed, alphabet.size() - 1).into();
    let source = MorphicWord::new(mu.clone(), seed)?;
    verdict.periodicity = classify_periodicity(&source, prefix_length.max(reachable.len()))?;
    Ok(verdict)
}

/// Minimal window length `y` such that every length-`y` window of `text`
/// contains `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceEstimate {
    pub s: String,
    pub y: usize,
    pub prefix_length: usize,
    pub stabilized: bool,
}

/// `y` over one fixed text, or `None` when `pattern` does not occur.
pub fn window_cover(text: &[Letter], pattern: &[Letter]) -> Option<usize> {
    let hits = find_occurrences(text, pattern);
    if hits.is_empty() {
        return None;
    }
    let (n, s) = (text.len(), pattern.len());
    // need[j]: shortest window starting at j that contains an occurrence
    let mut need = vec![usize::MAX; n - s + 1];
    let mut next = hits.iter().rev().peekable();
    let mut upcoming = usize::MAX;
    for j in (0..=n - s).rev() {
        while let Some(&&h) = next.peek() {
            if h < j {
                break;
            }
            upcoming = h;
            next.next();
        }
        if upcoming != usize::MAX {
            need[j] = upcoming + s - j;
        }
    }
    // running maximum over window starts 0..=j
    for j in 1..need.len() {
        need[j] = need[j].max(need[j - 1]);
    }
    (s..=n).find(|&y| need[n - y] <= y)
}

/// Estimates the recurrence window of `s`, doubling the prefix from
/// `prefix_length` until three consecutive prefixes agree on `y`.
pub fn recurrence_constant(
    source: &MorphicWord,
    s: &FiniteWord,
    prefix_length: usize,
) -> Result<RecurrenceEstimate> {
    if s.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut len = prefix_length.max(s.len());
    let mut history: Vec<usize> = Vec::new();
    loop {
        if len as u64 > source.cap() {
            return Err(Error::NotStabilized { cap: source.cap() });
        }
        let y = source
            .with_prefix(len, |p| window_cover(p, s.letters()))?
            .ok_or(Error::NoOccurrence)?;
        history.push(y);
        if history.len() >= 3 && history[history.len() - 3..].iter().all(|&v| v == y) {
            return Ok(RecurrenceEstimate {
                s: s.to_string(),
                y,
                prefix_length: len,
                stabilized: true,
            });
        }
        len *= 2;
    }
}

/// Factor count of length `n`, doubling the prefix until three consecutive
/// prefixes give the same count. Returns `(count, prefix length used)`.
pub fn stabilized_factor_complexity(source: &MorphicWord, n: usize) -> Result<(usize, usize)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "factor length must be positive".into(),
        ));
    }
    let mut len = (4 * n).max(16);
    let mut history: Vec<usize> = Vec::new();
    loop {
        if len as u64 > source.cap() {
            return Err(Error::NotStabilized { cap: source.cap() });
        }
        let count = source.with_prefix(len, |p| factor_count(p, n))??;
        history.push(count);
        if history.len() >= 3 && history[history.len() - 3..].iter().all(|&v| v == count) {
            return Ok((count, len));
        }
        len *= 2;
    }
}

/// Checks that a periodic verdict certifies itself on `prefix`: the unit is
/// primitive, has distinct letters and generates the prefix.
pub fn periodic_unit_certifies(unit: &FiniteWord, prefix: &[Letter]) -> bool {
    let u = unit.letters();
    !u.is_empty()
        && is_primitive(u).unwrap_or(false)
        && u.iter().enumerate().all(|(i, c)| !u[..i].contains(c))
        && prefix.iter().enumerate().all(|(i, &c)| c == u[i % u.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::Morphism;

    fn periodic_0123() -> Morphism {
        Morphism::parse("0->01230;1->12301;2->23012;3->30123").unwrap()
    }

    fn brute_window(text: &[Letter], pattern: &[Letter]) -> Option<usize> {
        (pattern.len()..=text.len()).find(|&y| {
            (0..=text.len() - y)
                .all(|j| text[j..j + y].windows(pattern.len()).any(|w| w == pattern))
        })
    }

    #[test]
    fn reachable_examples() {
        assert_eq!(
            reachable_letters(&Morphism::thue_morse(), 0),
            BTreeSet::from([0, 1])
        );
        let mu = Morphism::parse("0->00;1->10").unwrap();
        assert_eq!(reachable_letters(&mu, 0), BTreeSet::from([0]));
        assert_eq!(
            reachable_letters(&periodic_0123(), 0),
            BTreeSet::from([0, 1, 2, 3])
        );
    }

    #[test]
    fn uniform_recurrence_examples() {
        assert!(is_uniformly_recurrent(&Morphism::thue_morse(), 0).unwrap());
        let mu = Morphism::parse("0->01;1->11").unwrap();
        assert!(!is_uniformly_recurrent(&mu, 0).unwrap());
        let single = Morphism::parse("0->00;1->10").unwrap();
        assert!(is_uniformly_recurrent(&single, 0).unwrap());
        assert!(matches!(
            is_uniformly_recurrent(&Morphism::fibonacci(), 0),
            Err(Error::NotUniform)
        ));
        assert!(matches!(
            is_uniformly_recurrent(&Morphism::parse("0->0;1->1").unwrap(), 0),
            Err(Error::RadiusTooSmall(1))
        ));
    }

    #[test]
    fn injectivity_examples() {
        assert!(is_injective_on_letters(&Morphism::thue_morse()));
        assert!(!is_injective_on_letters(
            &Morphism::parse("0->01;1->01").unwrap()
        ));
        assert!(is_injective_on_letters(&periodic_0123()));
    }

    #[test]
    fn periodicity_examples() {
        let w = MorphicWord::new(periodic_0123(), 0).unwrap();
        assert_eq!(
            classify_periodicity(&w, 1000).unwrap(),
            Periodicity::Periodic {
                unit: "0123".into()
            }
        );
        assert_eq!(
            classify_periodicity(&MorphicWord::thue_morse(), 1000).unwrap(),
            Periodicity::Aperiodic
        );
        let w = MorphicWord::new(Morphism::parse("0->01;1->01").unwrap(), 0).unwrap();
        assert_eq!(
            classify_periodicity(&w, 1000).unwrap(),
            Periodicity::Unknown
        );
        let w = MorphicWord::new(periodic_0123(), 0).unwrap();
        assert!(classify_periodicity(&w, 2).is_err());
    }

    #[test]
    fn constant_and_alternating_fixed_points() {
        let w = MorphicWord::new(Morphism::parse("0->00").unwrap(), 0).unwrap();
        assert_eq!(
            classify_periodicity(&w, 100).unwrap(),
            Periodicity::Periodic { unit: "0".into() }
        );
        // 0101… is generated by 0->010, 1->101 (r = 3 coprime to 2)
        let w = MorphicWord::new(Morphism::parse("0->010;1->101").unwrap(), 0).unwrap();
        assert_eq!(
            classify_periodicity(&w, 100).unwrap(),
            Periodicity::Periodic { unit: "01".into() }
        );
    }

    #[test]
    fn partial_verdict_for_non_uniform() {
        let v = classify(&Morphism::fibonacci(), 0, 1000).unwrap();
        assert_eq!(v.uniformly_recurrent, Trivalent::Unknown);
        assert_eq!(v.periodicity, Periodicity::Unknown);
        assert!(v.prolongable);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["uniformly_recurrent"], "unknown");
    }

    #[test]
    fn recurrence_examples() {
        let zeros = MorphicWord::new(Morphism::parse("0->00").unwrap(), 0).unwrap();
        let s = zeros.morphism().word("00").unwrap();
        assert_eq!(recurrence_constant(&zeros, &s, 64).unwrap().y, 2);

        let tm = MorphicWord::thue_morse();
        let s = tm.morphism().word("01").unwrap();
        let est = recurrence_constant(&tm, &s, 1 << 10).unwrap();
        assert!(est.stabilized);
        // 1100 occurs at index 7, so windows of length 4 can miss 01
        assert_eq!(est.y, 5);
        let brute = tm
            .with_prefix(1 << 12, |p| brute_window(p, s.letters()))
            .unwrap();
        assert_eq!(brute, Some(5));

        let missing = tm.morphism().word("111").unwrap();
        assert!(matches!(
            recurrence_constant(&tm, &missing, 256),
            Err(Error::NoOccurrence)
        ));
    }

    #[test]
    fn window_cover_matches_brute_force() {
        let fib = MorphicWord::fibonacci();
        let tm = MorphicWord::thue_morse();
        for (source, patterns) in [(&fib, ["00", "010", "1001"]), (&tm, ["00", "0110", "1011"])] {
            for p in patterns {
                let pat = source.morphism().word(p).unwrap();
                for len in [30usize, 64, 200, 513] {
                    let (fast, slow) = source
                        .with_prefix(len, |t| {
                            (
                                window_cover(t, pat.letters()),
                                brute_window(t, pat.letters()),
                            )
                        })
                        .unwrap();
                    assert_eq!(fast, slow, "pattern {p} len {len}");
                }
            }
        }
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(
            stabilized_factor_complexity(&MorphicWord::thue_morse(), 1)
                .unwrap()
                .0,
            2
        );
        let fib = MorphicWord::fibonacci();
        assert_eq!(stabilized_factor_complexity(&fib, 10).unwrap().0, 11);
        assert_eq!(
            stabilized_factor_complexity(&MorphicWord::thue_morse().with_cap(32), 8).ok(),
            None
        );
    }
}
