//! Alphabets and finite words over small alphabets.
//!
//! Letters are byte ids `0..m`. Substring ranges are half-open and
//! 0-indexed: `w[i..j]` starts at `i` and ends one before `j`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingerprint::PrefixHash;

pub type Letter = u8;

pub const MAX_ALPHABET: usize = 255;

/// A finite alphabet of `m` letters with a printable symbol for each id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(symbols.len()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol '{c}' appears twice"
                )));
            }
        }
        Ok(Self { symbols })
    }

    /// The alphabet `0, 1, …, 9, a, …, z, A, …, Z, …` of size `m`.
    pub fn numeric(m: usize) -> Result<Self> {
        if m > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(m));
        }
        let symbols = (0..m)
            .map(|i| match i {
                0..=9 => (b'0' + i as u8) as char,
                10..=35 => (b'a' + (i - 10) as u8) as char,
                36..=61 => (b'A' + (i - 36) as u8) as char,
                _ => char::from_u32(0xC0 + (i - 62) as u32).expect("valid scalar"),
            })
            .collect();
        Self::new(symbols)
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .map(|i| i as Letter)
            .ok_or(Error::UnknownLetter(symbol))
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as usize) < self.symbols.len()
    }
}

/// An immutable finite word. Equality is letterwise.
#[derive(Debug, Clone)]
pub struct FiniteWord {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl PartialEq for FiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for FiniteWord {}

impl FiniteWord {
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&c| !alphabet.contains(c)) {
            return Err(Error::LetterOutOfRange {
                letter: bad,
                size: alphabet.size(),
            });
        }
        Ok(Self { alphabet, letters })
    }

    pub(crate) fn from_trusted(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&c| alphabet.contains(c)));
        Self { alphabet, letters }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Self {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Reads a word written in the alphabet's display symbols.
    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .map(|c| alphabet.letter(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { alphabet, letters })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The factor `w[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> FiniteWord {
        Self::from_trusted(self.alphabet.clone(), self.letters[start..end].to_vec())
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::from_trusted(self.alphabet.clone(), letters)
    }

    pub fn factor_count(&self, n: usize) -> Result<usize> {
        factor_count(&self.letters, n)
    }

    pub fn minimal_period(&self) -> Result<usize> {
        minimal_period(&self.letters)
    }

    pub fn is_primitive(&self) -> Result<bool> {
        is_primitive(&self.letters)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{}", self.alphabet.symbol(c))?;
        }
        Ok(())
    }
}

/// Number of distinct length-`n` factors of `w`.
///
/// Factors are bucketed by fingerprint and each bucket is split by exact
/// comparison.
pub fn factor_count(w: &[Letter], n: usize) -> Result<usize> {
    if n > w.len() {
        return Err(Error::FactorTooLong { n, len: w.len() });
    }
    if n == 0 {
        return Ok(1);
    }
    let hashes = PrefixHash::new(w);
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut count = 0;
    for start in 0..=w.len() - n {
        let factor = &w[start..start + n];
        let bucket = buckets.entry(hashes.get(start, start + n)).or_default();
        if !bucket.iter().any(|&s| &w[s..s + n] == factor) {
            bucket.push(start);
            count += 1;
        }
    }
    Ok(count)
}

/// Failure function: `border[i]` is the length of the longest proper border
/// of `w[..i + 1]`.
pub fn border_array(w: &[Letter]) -> Vec<usize> {
    let mut border = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    border
}

/// Smallest `p >= 1` with `w[i] == w[i + p]` wherever both are defined.
pub fn minimal_period(w: &[Letter]) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.len() - border_array(w)[w.len() - 1])
}

/// True iff `w` equals none of its nontrivial rotations.
pub fn is_primitive(w: &[Letter]) -> Result<bool> {
    let p = minimal_period(w)?;
    Ok(p == w.len() || !w.len().is_multiple_of(p))
}

/// Start positions of every occurrence of `pattern` in `text` (KMP).
pub fn find_occurrences(text: &[Letter], pattern: &[Letter]) -> Vec<usize> {
    if pattern.is_empty() {
        return (0..=text.len()).collect();
    }
    let border = border_array(pattern);
    let mut hits = Vec::new();
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = border[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            hits.push(i + 1 - k);
            k = border[k - 1];
        }
    }
    hits
}

/// Reads a word of display symbols over the numeric alphabet of size `m`.
pub fn numeric_word(m: usize, text: &str) -> Result<FiniteWord> {
    FiniteWord::parse(Arc::new(Alphabet::numeric(m)?), text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn w(s: &str) -> Vec<Letter> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn naive_factor_count(w: &[Letter], n: usize) -> usize {
        (0..=w.len() - n)
            .map(|i| &w[i..i + n])
            .collect::<HashSet<_>>()
            .len()
    }

    fn naive_period(w: &[Letter]) -> usize {
        (1..=w.len())
            .find(|&p| (0..w.len() - p).all(|i| w[i] == w[i + p]))
            .unwrap()
    }

    fn naive_primitive(w: &[Letter]) -> bool {
        (1..w.len()).all(|s| {
            let rotated: Vec<_> = w[s..].iter().chain(&w[..s]).copied().collect();
            rotated != w
        })
    }

    #[test]
    fn alphabet_rejects_duplicates_and_oversize() {
        assert!(Alphabet::new(vec!['a', 'b', 'a']).is_err());
        assert!(Alphabet::new(vec![]).is_err());
        assert!(matches!(
            Alphabet::numeric(256),
            Err(Error::AlphabetTooLarge(256))
        ));
        let a = Alphabet::numeric(255).unwrap();
        assert_eq!(a.size(), 255);
        assert_eq!(a.letter('b').unwrap(), 11);
    }

    #[test]
    fn word_rejects_out_of_range_letters() {
        let a = Arc::new(Alphabet::numeric(2).unwrap());
        assert!(FiniteWord::new(a.clone(), vec![0, 2]).is_err());
        assert!(FiniteWord::parse(a, "012").is_err());
    }

    #[test]
    fn factor_count_examples() {
        assert_eq!(factor_count(&w("0000"), 2).unwrap(), 1);
        assert_eq!(factor_count(&w("0110"), 2).unwrap(), 3);
        assert!(matches!(
            factor_count(&w("01"), 3),
            Err(Error::FactorTooLong { n: 3, len: 2 })
        ));
    }

    #[test]
    fn minimal_period_examples() {
        assert_eq!(minimal_period(&w("010101")).unwrap(), 2);
        // border "0" gives period 5
        assert_eq!(minimal_period(&w("011000")).unwrap(), 5);
        assert_eq!(minimal_period(&w("0")).unwrap(), 1);
        assert!(minimal_period(&[]).is_err());
    }

    #[test]
    fn primitivity_examples() {
        assert!(is_primitive(&w("0123")).unwrap());
        assert!(!is_primitive(&w("0101")).unwrap());
        assert!(is_primitive(&w("001")).unwrap());
    }

    #[test]
    fn occurrences_overlap() {
        assert_eq!(find_occurrences(&w("0000"), &w("00")), vec![0, 1, 2]);
        assert_eq!(find_occurrences(&w("0110100110"), &w("0110")), vec![0, 6]);
        assert!(find_occurrences(&w("01"), &w("11")).is_empty());
    }

    #[test]
    fn exhaustive_small_words_match_oracles() {
        for m in 2..=3u32 {
            for len in 1..=8u32 {
                for code in 0..m.pow(len) {
                    let mut x = code;
                    let word: Vec<Letter> = (0..len)
                        .map(|_| {
                            let c = (x % m) as Letter;
                            x /= m;
                            c
                        })
                        .collect();
                    assert_eq!(minimal_period(&word).unwrap(), naive_period(&word));
                    assert_eq!(is_primitive(&word).unwrap(), naive_primitive(&word));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn factor_count_matches_naive(
            word in prop::collection::vec(0u8..3, 1..=20),
            n in 1usize..=20,
        ) {
            prop_assume!(n <= word.len());
            prop_assert_eq!(factor_count(&word, n).unwrap(), naive_factor_count(&word, n));
        }

        #[test]
        fn period_and_primitivity_match_rotations(word in prop::collection::vec(0u8..2, 1..=16)) {
            let p = minimal_period(&word).unwrap();
            prop_assert_eq!(p, naive_period(&word));
            prop_assert_eq!(is_primitive(&word).unwrap(), naive_primitive(&word));
            // a full power exactly when the period divides the length
            let full_power = word.len() % p == 0 && p < word.len();
            prop_assert_eq!(full_power, !naive_primitive(&word));
        }
    }
}
