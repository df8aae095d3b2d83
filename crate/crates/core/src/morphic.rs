//! Lazily materialized fixed points `mu^omega(a)` of prolongable morphisms,
//! and the binary prefix cache format.

use std::io::{Read, Write};
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use crate::error::{Error, Result};
use crate::morphism::{Morphism, DEFAULT_CAP};
use crate::word::{FiniteWord, Letter};

#[derive(Debug)]
struct Growth {
    letters: Vec<Letter>,
    // letters[..] == mu(letters[..expanded]) as a prefix relation
    expanded: usize,
}

/// The infinite word `mu^omega(seed)`, known through a growing prefix.
///
/// Reads of the materialized prefix may happen concurrently. Growth takes
/// the write lock, so no reader ever sees a partial extension, and existing
/// letters are never rewritten.
#[derive(Debug)]
pub struct MorphicWord {
    morphism: Arc<Morphism>,
    seed: Letter,
    cap: u64,
    state: RwLock<Growth>,
}

impl Clone for MorphicWord {
    fn clone(&self) -> Self {
        let state = self.read();
        Self {
            morphism: self.morphism.clone(),
            seed: self.seed,
            cap: self.cap,
            state: RwLock::new(Growth {
                letters: state.letters.clone(),
                expanded: state.expanded,
            }),
        }
    }
}

impl MorphicWord {
    pub fn new(morphism: Morphism, seed: Letter) -> Result<Self> {
        Self::shared(Arc::new(morphism), seed)
    }

    pub fn shared(morphism: Arc<Morphism>, seed: Letter) -> Result<Self> {
        if !morphism.alphabet().contains(seed) {
            return Err(Error::LetterOutOfRange {
                letter: seed,
                size: morphism.alphabet().size(),
            });
        }
        let symbol = morphism.alphabet().symbol(seed);
        if !morphism.is_prolongable(seed) {
            return Err(Error::NotProlongable(symbol));
        }
        if morphism.image(seed).len() < 2 {
            return Err(Error::NotGrowing(symbol));
        }
        let letters = morphism.image(seed).to_vec();
        Ok(Self {
            morphism,
            seed,
            cap: DEFAULT_CAP,
            state: RwLock::new(Growth {
                letters,
                expanded: 1,
            }),
        })
    }

    /// The Fibonacci word `f = 0100101001001…`.
    pub fn fibonacci() -> Self {
        Self::new(Morphism::fibonacci(), 0).expect("prolongable on 0")
    }

    /// The Thue-Morse word `t = 0110100110010110…`.
    pub fn thue_morse() -> Self {
        Self::new(Morphism::thue_morse(), 0).expect("prolongable on 0")
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn materialized_len(&self) -> usize {
        self.read().letters.len()
    }

    fn read(&self) -> RwLockReadGuard<'_, Growth> {
        self.state.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, Growth> {
        self.state.write().unwrap_or_else(|e| e.into_inner())
    }

    /// Grows the materialized prefix to at least `len` letters.
    pub fn ensure(&self, len: usize) -> Result<()> {
        if len as u64 > self.cap {
            return Err(Error::CapExceeded {
                requested: len as u64,
                cap: self.cap,
            });
        }
        if self.read().letters.len() >= len {
            return Ok(());
        }
        let mut state = self.write();
        let Growth { letters, expanded } = &mut *state;
        while letters.len() < len {
            // expanded < letters.len() because every seed image has length >= 2
            let next = letters[*expanded];
            letters.extend_from_slice(self.morphism.image(next));
            *expanded += 1;
        }
        Ok(())
    }

    /// Runs `f` on the first `len` letters without copying them.
    pub fn with_prefix<R>(&self, len: usize, f: impl FnOnce(&[Letter]) -> R) -> Result<R> {
        self.ensure(len)?;
        let state = self.read();
        Ok(f(&state.letters[..len]))
    }

    /// The first `len` letters of the fixed point.
    pub fn prefix(&self, len: usize) -> Result<FiniteWord> {
        let letters = self.with_prefix(len, |p| p.to_vec())?;
        Ok(FiniteWord::from_trusted(
            self.morphism.alphabet().clone(),
            letters,
        ))
    }

    pub fn letter_at(&self, index: usize) -> Result<Letter> {
        self.with_prefix(index + 1, |p| p[index])
    }
}

pub const CACHE_MAGIC: &[u8; 4] = b"MWPF";
pub const CACHE_VERSION: u8 = 1;

/// Contents of a prefix cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedPrefix {
    pub alphabet_size: u8,
    pub letters: Vec<Letter>,
}

/// Writes `MWPF`, version, alphabet size, little-endian `u64` length, letters.
pub fn write_prefix_cache<W: Write>(
    mut out: W,
    alphabet_size: usize,
    letters: &[Letter],
) -> Result<()> {
    let size = u8::try_from(alphabet_size).map_err(|_| Error::AlphabetTooLarge(alphabet_size))?;
    out.write_all(CACHE_MAGIC)?;
    out.write_all(&[CACHE_VERSION, size])?;
    out.write_all(&(letters.len() as u64).to_le_bytes())?;
    out.write_all(letters)?;
    out.flush()?;
    Ok(())
}

pub fn read_prefix_cache<R: Read>(mut input: R) -> Result<CachedPrefix> {
    let mut header = [0u8; 14];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::Cache("truncated header".into()))?;
    if &header[..4] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic bytes".into()));
    }
    if header[4] != CACHE_VERSION {
        return Err(Error::UnsupportedVersion(header[4]));
    }
    let alphabet_size = header[5];
    let len = u64::from_le_bytes(header[6..14].try_into().expect("8 bytes"));
    let mut letters = Vec::new();
    input.take(len).read_to_end(&mut letters)?;
    if letters.len() as u64 != len {
        return Err(Error::Cache(format!(
            "expected {len} letters, found {}",
            letters.len()
        )));
    }
    if let Some(&bad) = letters.iter().find(|&&c| c >= alphabet_size) {
        return Err(Error::LetterOutOfRange {
            letter: bad,
            size: alphabet_size as usize,
        });
    }
    Ok(CachedPrefix {
        alphabet_size,
        letters,
    })
}
