//! Polynomial rolling fingerprints over a fixed text.
//!
//! Fingerprints are only ever used to bucket candidates. Every caller
//! confirms equality by comparing letters, so a collision costs time but
//! never changes an answer.

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1d6b_3f0a_94c2_e57b % MODULUS;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let product = (a as u128) * (b as u128);
    let low = (product as u64) & MODULUS;
    let high = (product >> 61) as u64;
    let mut sum = low + high;
    while sum >= MODULUS {
        sum -= MODULUS;
    }
    sum
}

/// Prefix fingerprints and base powers for O(1) substring fingerprints.
#[derive(Debug, Clone)]
pub struct PrefixHash {
    prefix: Vec<u64>,
    powers: Vec<u64>,
}

impl PrefixHash {
    pub fn new(text: &[u8]) -> Self {
        let mut prefix = Vec::with_capacity(text.len() + 1);
        let mut powers = Vec::with_capacity(text.len() + 1);
        prefix.push(0);
        powers.push(1);
        let mut h = 0u64;
        let mut p = 1u64;
        for &c in text {
            // +1 keeps letter 0 from hashing like an absent letter
            h = mul_mod(h, BASE) + c as u64 + 1;
            if h >= MODULUS {
                h -= MODULUS;
            }
            p = mul_mod(p, BASE);
            prefix.push(h);
            powers.push(p);
        }
        Self { prefix, powers }
    }

    /// Length of the indexed text.
    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fingerprint of `text[start..end]`.
    #[inline]
    pub fn get(&self, start: usize, end: usize) -> u64 {
        debug_assert!(start <= end && end <= self.len());
        let sub = mul_mod(self.prefix[start], self.powers[end - start]);
        let h = self.prefix[end] + MODULUS - sub;
        if h >= MODULUS {
            h - MODULUS
        } else {
            h
        }
    }
}
