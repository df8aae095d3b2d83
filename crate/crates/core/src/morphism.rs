//! Nonerasing morphisms and the rule syntax used to write them.
//!
//! A morphism is written one rule per line or with `;` between rules:
//!
//! ```text
//! # Thue-Morse
//! 0 -> 01 ; 1 -> 10
//! ```
//!
//! The alphabet is the set of left-hand sides, numbered in code point
//! order. Whitespace is ignored and `#` comments run to the end of the line.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{Alphabet, FiniteWord, Letter};

/// Default limit on the length of any materialized word: 2^28 letters.
pub const DEFAULT_CAP: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Arc<Alphabet>,
    images: Vec<Vec<Letter>>,
    uniform_radius: Option<usize>,
}

impl Morphism {
    /// Builds a morphism from one nonempty image per letter.
    pub fn new(alphabet: Arc<Alphabet>, images: Vec<Vec<Letter>>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::InvalidParameter(format!(
                "{} images for an alphabet of {} letters",
                images.len(),
                alphabet.size()
            )));
        }
        for (a, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::EmptyImage(alphabet.symbol(a as Letter)));
            }
            if let Some(&bad) = image.iter().find(|&&c| !alphabet.contains(c)) {
                return Err(Error::LetterOutOfRange {
                    letter: bad,
                    size: alphabet.size(),
                });
            }
        }
        let r = images[0].len();
        let uniform_radius = (r >= 2 && images.iter().all(|im| im.len() == r)).then_some(r);
        Ok(Self {
            alphabet,
            images,
            uniform_radius,
        })
    }

    /// Parses the rule syntax described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules: Vec<(char, Vec<char>)> = Vec::new();
        let statements = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .flat_map(|line| line.split(';'));
        for (index, statement) in statements.enumerate() {
            if statement.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = statement.split_once("->").ok_or_else(|| Error::Syntax {
                rule: index + 1,
                message: format!(
                    "expected '<letter> -> <image>', found '{}'",
                    statement.trim()
                ),
            })?;
            let mut lhs_chars = lhs.trim().chars();
            let letter = match (lhs_chars.next(), lhs_chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(Error::Syntax {
                        rule: index + 1,
                        message: format!("left-hand side '{}' must be one letter", lhs.trim()),
                    })
                }
            };
            if rules.iter().any(|(c, _)| *c == letter) {
                return Err(Error::DuplicateRule(letter));
            }
            let image: Vec<char> = rhs.chars().filter(|c| !c.is_whitespace()).collect();
            if image.is_empty() {
                return Err(Error::EmptyImage(letter));
            }
            rules.push((letter, image));
        }
        if rules.is_empty() {
            return Err(Error::Syntax {
                rule: 0,
                message: "no rules".into(),
            });
        }
        rules.sort_by_key(|(c, _)| *c);
        let alphabet = Arc::new(Alphabet::new(rules.iter().map(|(c, _)| *c).collect())?);
        let mut images = Vec::with_capacity(rules.len());
        for (letter, body) in &rules {
            let image = body
                .iter()
                .map(|&c| {
                    alphabet.letter(c).map_err(|_| Error::UndeclaredLetter {
                        rule: *letter,
                        letter: c,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            images.push(image);
        }
        Self::new(alphabet, images)
    }

    /// `0 -> 01, 1 -> 10`.
    pub fn thue_morse() -> Self {
        Self::parse("0->01;1->10").expect("valid rules")
    }

    /// `0 -> 01, 1 -> 0`.
    pub fn fibonacci() -> Self {
        Self::parse("0->01;1->0").expect("valid rules")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter as usize]
    }

    /// `Some(r)` when every image has the same length `r >= 2`.
    pub fn uniform_radius(&self) -> Option<usize> {
        self.uniform_radius
    }

    /// The uniform radius, or an error distinguishing `r = 1` from
    /// non-uniform morphisms.
    pub fn require_uniform(&self) -> Result<usize> {
        if let Some(r) = self.uniform_radius {
            return Ok(r);
        }
        if self.images.iter().all(|im| im.len() == 1) {
            Err(Error::RadiusTooSmall(1))
        } else {
            Err(Error::NotUniform)
        }
    }

    pub fn is_prolongable(&self, letter: Letter) -> bool {
        self.alphabet.contains(letter) && self.images[letter as usize][0] == letter
    }

    /// Letters are mapped to pairwise distinct images.
    pub fn is_injective_on_letters(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, a)| self.images[..i].iter().all(|b| a != b))
    }

    fn check_word(&self, w: &FiniteWord) -> Result<()> {
        match w.letters().iter().find(|&&c| !self.alphabet.contains(c)) {
            Some(&bad) => Err(Error::LetterOutOfRange {
                letter: bad,
                size: self.alphabet.size(),
            }),
            None => Ok(()),
        }
    }

    /// Image length of a letter sequence, without building it.
    pub fn image_len(&self, letters: &[Letter]) -> u64 {
        letters
            .iter()
            .map(|&c| self.images[c as usize].len() as u64)
            .sum()
    }

    pub(crate) fn apply_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.image_len(letters) as usize);
        for &c in letters {
            out.extend_from_slice(&self.images[c as usize]);
        }
        out
    }

    /// `mu(w)`: the concatenation of the images of the letters of `w`.
    pub fn apply(&self, w: &FiniteWord) -> Result<FiniteWord> {
        self.check_word(w)?;
        Ok(FiniteWord::from_trusted(
            self.alphabet.clone(),
            self.apply_letters(w.letters()),
        ))
    }

    /// `mu^n(w)`, refusing to build anything longer than `cap` letters.
    pub fn iterate_word(&self, w: &FiniteWord, n: u32, cap: u64) -> Result<FiniteWord> {
        self.check_word(w)?;
        let mut current = w.letters().to_vec();
        for _ in 0..n {
            let next_len = self.image_len(&current);
            if next_len > cap {
                return Err(Error::CapExceeded {
                    requested: next_len,
                    cap,
                });
            }
            current = self.apply_letters(&current);
        }
        Ok(FiniteWord::from_trusted(self.alphabet.clone(), current))
    }

    /// `mu^n(a)`.
    pub fn iterate(&self, a: Letter, n: u32, cap: u64) -> Result<FiniteWord> {
        let seed = FiniteWord::new(self.alphabet.clone(), vec![a])?;
        self.iterate_word(&seed, n, cap)
    }

    /// Parses a word over this morphism's alphabet.
    pub fn word(&self, text: &str) -> Result<FiniteWord> {
        FiniteWord::parse(self.alphabet.clone(), text)
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.alphabet.letter(symbol)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, image) in self.images.iter().enumerate() {
            if a > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> ", self.alphabet.symbol(a as Letter))?;
            for &c in image {
                write!(f, "{}", self.alphabet.symbol(c))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_thue_morse_as_two_uniform() {
        let tm = Morphism::parse("0 -> 01 ; 1 -> 10").unwrap();
        assert_eq!(tm.uniform_radius(), Some(2));
        assert_eq!(tm.alphabet().size(), 2);
        assert_eq!(tm.to_string(), "0 -> 01; 1 -> 10");
    }

    #[test]
    fn parses_fibonacci_as_non_uniform() {
        let fib = Morphism::parse("0 -> 01 ; 1 -> 0").unwrap();
        assert_eq!(fib.uniform_radius(), None);
        assert!(matches!(fib.require_uniform(), Err(Error::NotUniform)));
    }

    #[test]
    fn identity_parses_without_radius() {
        let id = Morphism::parse("0 -> 0").unwrap();
        assert_eq!(id.uniform_radius(), None);
        assert!(matches!(
            id.require_uniform(),
            Err(Error::RadiusTooSmall(1))
        ));
    }

    #[test]
    fn parse_accepts_lines_and_comments() {
        let text = "# periodic example\n0 -> 01230\n1 -> 12301 # comment\n2->23012;3->30123\n";
        let mu = Morphism::parse(text).unwrap();
        assert_eq!(mu.uniform_radius(), Some(5));
        assert_eq!(mu.alphabet().size(), 4);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Morphism::parse("0->01;0->1;1->0"),
            Err(Error::DuplicateRule('0'))
        ));
        assert!(matches!(
            Morphism::parse("0->012;1->0"),
            Err(Error::UndeclaredLetter {
                rule: '0',
                letter: '2'
            })
        ));
        assert!(matches!(
            Morphism::parse("0->01;1->"),
            Err(Error::EmptyImage('1'))
        ));
        assert!(matches!(Morphism::parse("0 01"), Err(Error::Syntax { .. })));
        assert!(matches!(
            Morphism::parse("00->0"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            Morphism::parse("  # nothing"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let tm = Morphism::thue_morse();
        assert_eq!(
            tm.apply(&tm.word("01").unwrap()).unwrap().to_string(),
            "0110"
        );
        let fib = Morphism::fibonacci();
        assert_eq!(
            fib.apply(&fib.word("010").unwrap()).unwrap().to_string(),
            "01001"
        );
        assert!(fib.apply(&fib.word("").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn iterate_examples() {
        let tm = Morphism::thue_morse();
        assert_eq!(
            tm.iterate(0, 4, DEFAULT_CAP).unwrap().to_string(),
            "0110100110010110"
        );
        let fib = Morphism::fibonacci();
        let f5 = fib.iterate(0, 5, DEFAULT_CAP).unwrap();
        assert_eq!(f5.to_string(), "0100101001001");
        assert_eq!(f5.len(), 13);
        assert_eq!(fib.iterate(1, 0, DEFAULT_CAP).unwrap().to_string(), "1");
    }

    #[test]
    fn iterate_respects_cap() {
        let tm = Morphism::thue_morse();
        assert!(matches!(
            tm.iterate(0, 11, 1024),
            Err(Error::CapExceeded {
                requested: 2048,
                cap: 1024
            })
        ));
    }

    #[test]
    fn length_laws() {
        let tm = Morphism::thue_morse();
        for n in 0..=16 {
            assert_eq!(tm.iterate(0, n, DEFAULT_CAP).unwrap().len(), 1 << n);
        }
        let fib = Morphism::fibonacci();
        let (mut a, mut b) = (1usize, 1usize); // F_1, F_2
        for n in 0..=25 {
            // |phi^n(0)| = F_{n+2}
            assert_eq!(fib.iterate(0, n, DEFAULT_CAP).unwrap().len(), b);
            (a, b) = (b, a + b);
        }
    }

    #[test]
    fn injectivity_on_letters() {
        assert!(Morphism::thue_morse().is_injective_on_letters());
        assert!(!Morphism::parse("0->01;1->01")
            .unwrap()
            .is_injective_on_letters());
    }

    proptest! {
        #[test]
        fn apply_respects_concatenation(
            word in prop::collection::vec(0u8..2, 0..40),
            split in 0usize..40,
        ) {
            let split = split.min(word.len());
            let tm = Morphism::thue_morse();
            let fib = Morphism::fibonacci();
            for mu in [&tm, &fib] {
                let a = mu.alphabet().clone();
                let whole = FiniteWord::new(a.clone(), word.clone()).unwrap();
                let u = FiniteWord::new(a.clone(), word[..split].to_vec()).unwrap();
                let v = FiniteWord::new(a, word[split..].to_vec()).unwrap();
                let lhs = mu.apply(&whole).unwrap();
                let rhs = mu.apply(&u).unwrap().concat(&mu.apply(&v).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
