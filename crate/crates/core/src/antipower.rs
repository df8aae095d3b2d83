//! Antipower predicates and searches.
//!
//! A window `w[i..i + k*m]` is a k-antipower when its `k` blocks of length
//! `m` are pairwise distinct. When it is not, the report names the
//! lexicographically smallest pair `(p, q)`, `p < q`, of equal blocks.
//!
//! Two interchangeable kernels decide distinctness: a naive pairwise
//! comparison and a fingerprint kernel that buckets blocks by rolling hash
//! and splits buckets by exact comparison. Both return the same pair.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{self, Periodicity};
use crate::error::{Error, Result};
use crate::fingerprint::PrefixHash;
use crate::morphic::MorphicWord;
use crate::report::{Table, VerificationReport};
use crate::word::{find_occurrences, FiniteWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Naive,
    #[default]
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipowerQuery {
    pub index: usize,
    pub k: usize,
    pub block_length: usize,
}

impl AntipowerQuery {
    pub fn end(&self) -> usize {
        self.index + self.k * self.block_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipowerReport {
    pub query: AntipowerQuery,
    #[serde(rename = "pass")]
    pub is_antipower: bool,
    pub violating_pair: Option<(usize, usize)>,
}

impl AntipowerReport {
    fn new(query: AntipowerQuery, violating_pair: Option<(usize, usize)>) -> Self {
        Self {
            query,
            is_antipower: violating_pair.is_none(),
            violating_pair,
        }
    }

    pub fn table_columns() -> [&'static str; 6] {
        ["index", "k", "block_length", "pass", "p", "q"]
    }

    pub fn table_row(&self) -> Vec<String> {
        let (p, q) = match self.violating_pair {
            Some((p, q)) => (p.to_string(), q.to_string()),
            None => (String::new(), String::new()),
        };
        vec![
            self.query.index.to_string(),
            self.query.k.to_string(),
            self.query.block_length.to_string(),
            self.is_antipower.to_string(),
            p,
            q,
        ]
    }
}

/// Smallest `(p, q)` with equal blocks, by direct comparison.
pub fn first_equal_blocks_naive(
    text: &[Letter],
    start: usize,
    m: usize,
    k: usize,
) -> Option<(usize, usize)> {
    let block = |b: usize| &text[start + b * m..start + (b + 1) * m];
    (0..k).find_map(|p| (p + 1..k).find(|&q| block(p) == block(q)).map(|q| (p, q)))
}

/// Fingerprint index over a text, answering window distinctness queries in
/// `O(k log k)` plus exact checks inside fingerprint buckets.
pub struct BlockIndex<'a> {
    text: &'a [Letter],
    hashes: PrefixHash,
}

impl<'a> BlockIndex<'a> {
    pub fn new(text: &'a [Letter]) -> Self {
        Self {
            text,
            hashes: PrefixHash::new(text),
        }
    }

    pub fn text(&self) -> &'a [Letter] {
        self.text
    }

    pub fn first_equal_blocks(&self, start: usize, m: usize, k: usize) -> Option<(usize, usize)> {
        if k < 2 {
            return None;
        }
        let mut keyed: Vec<(u64, usize)> = (0..k)
            .map(|b| {
                let s = start + b * m;
                (self.hashes.get(s, s + m), b)
            })
            .collect();
        keyed.sort_unstable();
        let block = |b: usize| &self.text[start + b * m..start + (b + 1) * m];
        let mut best: Option<(usize, usize)> = None;
        for bucket in keyed.chunk_by(|a, b| a.0 == b.0) {
            if bucket.len() < 2 {
                continue;
            }
            // exact equivalence classes; members arrive in increasing order
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &(_, b) in bucket {
                match classes.iter_mut().find(|c| block(c[0]) == block(b)) {
                    Some(class) => class.push(b),
                    None => classes.push(vec![b]),
                }
            }
            for class in classes.iter().filter(|c| c.len() >= 2) {
                let pair = (class[0], class[1]);
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            }
        }
        best
    }
}

/// Smallest equal block pair using the chosen kernel.
pub fn first_equal_blocks(
    text: &[Letter],
    start: usize,
    m: usize,
    k: usize,
    strategy: Strategy,
) -> Option<(usize, usize)> {
    match strategy {
        Strategy::Naive => first_equal_blocks_naive(text, start, m, k),
        Strategy::Accelerated => {
            BlockIndex::new(&text[start..start + k * m]).first_equal_blocks(0, m, k)
        }
    }
}

/// True iff `w` splits into `k` pairwise distinct blocks of length `|w|/k`.
pub fn is_antipower(w: &FiniteWord, k: usize) -> Result<bool> {
    if k == 0 || !w.len().is_multiple_of(k) {
        return Err(Error::NotDivisible { len: w.len(), k });
    }
    let m = w.len() / k;
    Ok(first_equal_blocks(w.letters(), 0, m, k, Strategy::Accelerated).is_none())
}

fn check_query(k: usize, m: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter(
            "block length must be positive".into(),
        ));
    }
    Ok(())
}

/// Antipower report for the window of `k` blocks of length `m` at `i`.
pub fn blocks_distinct(
    source: &MorphicWord,
    i: usize,
    m: usize,
    k: usize,
) -> Result<AntipowerReport> {
    blocks_distinct_with(source, i, m, k, Strategy::Accelerated)
}

pub fn blocks_distinct_with(
    source: &MorphicWord,
    i: usize,
    m: usize,
    k: usize,
    strategy: Strategy,
) -> Result<AntipowerReport> {
    check_query(k, m)?;
    let query = AntipowerQuery {
        index: i,
        k,
        block_length: m,
    };
    let pair = source.with_prefix(query.end(), |p| first_equal_blocks(p, i, m, k, strategy))?;
    Ok(AntipowerReport::new(query, pair))
}

/// Antipower reports for every start index in `indices`, computed in
/// parallel against one shared fingerprint index.
pub fn sweep_windows(
    source: &MorphicWord,
    indices: Range<usize>,
    m: usize,
    k: usize,
) -> Result<Vec<AntipowerReport>> {
    check_query(k, m)?;
    if indices.is_empty() {
        return Ok(Vec::new());
    }
    let len = indices.end - 1 + k * m;
    source.with_prefix(len, |prefix| {
        let index = BlockIndex::new(prefix);
        indices
            .into_par_iter()
            .map(|i| {
                let query = AntipowerQuery {
                    index: i,
                    k,
                    block_length: m,
                };
                AntipowerReport::new(query, index.first_equal_blocks(i, m, k))
            })
            .collect()
    })
}

/// `gamma_i(k)` over a fixed text: the smallest block length `m <= cap`
/// such that `k` distinct blocks of length `m` start at `i`.
pub fn gamma_in(
    text: &[Letter],
    i: usize,
    k: usize,
    cap: usize,
    strategy: Strategy,
) -> Option<usize> {
    if k <= 1 {
        return Some(1);
    }
    match strategy {
        Strategy::Naive => (1..=cap).find(|&m| first_equal_blocks_naive(text, i, m, k).is_none()),
        Strategy::Accelerated => {
            let index = BlockIndex::new(&text[i..i + k * cap]);
            (1..=cap).find(|&m| index.first_equal_blocks(0, m, k).is_none())
        }
    }
}

/// Smallest block length `m <= cap` starting a k-antipower at `i`.
pub fn gamma(source: &MorphicWord, i: usize, k: usize, cap: usize) -> Result<Option<usize>> {
    gamma_with(source, i, k, cap, Strategy::Accelerated)
}

pub fn gamma_with(
    source: &MorphicWord,
    i: usize,
    k: usize,
    cap: usize,
    strategy: Strategy,
) -> Result<Option<usize>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if cap == 0 {
        return Ok(None);
    }
    source.with_prefix(i + k * cap, |p| gamma_in(p, i, k, cap, strategy))
}

/// Shortest factor `t` of the prefix covering every observed length-2
/// factor, and `s = f t g` extending an occurrence of `t` by one letter on
/// each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningFactor {
    pub t: FiniteWord,
    pub s: FiniteWord,
    pub t_position: usize,
    pub s_position: usize,
}

/// Picks the leftmost shortest `t`, then the leftmost occurrence of `t`
/// that can be extended on both sides.
pub fn find_spanning_factor(source: &MorphicWord, prefix_length: usize) -> Result<SpanningFactor> {
    let alphabet = source.morphism().alphabet().clone();
    let size = alphabet.size();
    source.with_prefix(prefix_length, |p| {
        if p.len() < 2 {
            return Err(Error::InvalidParameter(
                "prefix must contain at least one length-2 factor".into(),
            ));
        }
        let pair_id = |j: usize| p[j] as usize * size + p[j + 1] as usize;
        let mut present = vec![false; size * size];
        for j in 0..p.len() - 1 {
            present[pair_id(j)] = true;
        }
        let distinct = present.iter().filter(|&&x| x).count();

        // minimum window over pair positions covering every distinct pair
        let mut counts = vec![0usize; size * size];
        let mut covered = 0;
        let mut lo = 0;
        let mut best: Option<(usize, usize)> = None;
        for hi in 0..p.len() - 1 {
            let id = pair_id(hi);
            counts[id] += 1;
            if counts[id] == 1 {
                covered += 1;
            }
            while covered == distinct {
                let width = hi - lo + 2;
                if best.is_none_or(|(_, w)| width < w) {
                    best = Some((lo, width));
                }
                let id = pair_id(lo);
                counts[id] -= 1;
                if counts[id] == 0 {
                    covered -= 1;
                }
                lo += 1;
            }
        }
        let (t_position, width) = best.expect("a covering window exists");
        let t = &p[t_position..t_position + width];
        let s_position = find_occurrences(p, t)
            .into_iter()
            .find(|&o| o >= 1 && o + width < p.len())
            .ok_or(Error::NoOccurrence)?
            - 1;
        Ok(SpanningFactor {
            t: FiniteWord::from_trusted(alphabet.clone(), t.to_vec()),
            s: FiniteWord::from_trusted(
                alphabet.clone(),
                p[s_position..s_position + width + 2].to_vec(),
            ),
            t_position,
            s_position,
        })
    })?
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueViolation {
    pub position: usize,
    pub residue: u64,
    pub gcd: u64,
}

/// Occurrences of `mu^n(s)` and their residues modulo `r^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueScan {
    pub r: usize,
    pub m: usize,
    pub n: u32,
    pub modulus: u64,
    pub s: String,
    pub pattern_length: usize,
    pub prefix_length: usize,
    pub occurrences: usize,
    /// Distinct residues with their occurrence counts, ascending.
    pub residues: Vec<(u64, usize)>,
    pub violations: Vec<ResidueViolation>,
    /// `r^n <= m^2`: the inequality carries no information for `k >= 2`.
    pub vacuous: bool,
}

impl ResidueScan {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

fn checked_pow(base: usize, exp: u32) -> Result<u64> {
    (base as u64)
        .checked_pow(exp)
        .ok_or_else(|| Error::InvalidParameter(format!("{base}^{exp} overflows")))
}

/// Scans every occurrence `gamma` of `mu^n(s)` in the prefix and checks
/// `gcd(gamma mod r^n, r^n) * m^2 > r^n`, with `gcd(0, x) = x` and `m` the
/// number of letters occurring in the word.
pub fn residue_scan(
    source: &MorphicWord,
    n: u32,
    s: &FiniteWord,
    prefix_length: usize,
) -> Result<ResidueScan> {
    let mu = source.morphism();
    let r = mu.require_uniform()?;
    let m = classifier::reachable_letters(mu, source.seed()).len();
    let modulus = checked_pow(r, n)?;
    let pattern = mu.iterate_word(s, n, source.cap())?;
    if pattern.len() > prefix_length {
        return Err(Error::InvalidParameter(format!(
            "mu^{n}(s) has length {} > prefix length {prefix_length}",
            pattern.len()
        )));
    }
    let hits = source.with_prefix(prefix_length, |p| find_occurrences(p, pattern.letters()))?;
    let m2 = (m * m) as u64;
    let mut residues = std::collections::BTreeMap::new();
    let mut violations = Vec::new();
    for &position in &hits {
        let residue = position as u64 % modulus;
        let g = gcd_u64(residue, modulus);
        *residues.entry(residue).or_insert(0) += 1;
        if g as u128 * m2 as u128 <= modulus as u128 {
            violations.push(ResidueViolation {
                position,
                residue,
                gcd: g,
            });
        }
    }
    Ok(ResidueScan {
        r,
        m,
        n,
        modulus,
        s: s.to_string(),
        pattern_length: pattern.len(),
        prefix_length,
        occurrences: hits.len(),
        residues: residues.into_iter().collect(),
        violations,
        vacuous: modulus <= m2,
    })
}

/// Parameters of the constructive antipower window for a uniform morphism:
/// `k` blocks of size `r^n * y + 2 r^n - 1` with `r^n >= k m^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipowerPlan {
    pub r: usize,
    pub m: usize,
    pub k: usize,
    pub n: u32,
    pub s: String,
    pub y: usize,
    pub block_size: usize,
    /// Prefix length at which `y` stabilized.
    pub prefix_length: usize,
}

/// Builds the plan. Requires a uniformly recurrent aperiodic fixed point.
/// `k = 1` is degenerate: `n = 0`, `y = 0`, blocks of length 1.
pub fn antipower_plan(
    source: &MorphicWord,
    k: usize,
    prefix_length: usize,
) -> Result<AntipowerPlan> {
    let mu = source.morphism();
    let r = mu.require_uniform()?;
    let m = classifier::reachable_letters(mu, source.seed()).len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k == 1 {
        return Ok(AntipowerPlan {
            r,
            m,
            k,
            n: 0,
            s: String::new(),
            y: 0,
            block_size: 1,
            prefix_length: 0,
        });
    }
    if !classifier::is_uniformly_recurrent(mu, source.seed())? {
        return Err(Error::HypothesisFailed(
            "word is not uniformly recurrent".into(),
        ));
    }
    match classifier::classify_periodicity(source, prefix_length.max(m))? {
        Periodicity::Aperiodic => {}
        other => {
            return Err(Error::HypothesisFailed(format!(
                "word is not known to be aperiodic ({other:?})"
            )))
        }
    }
    let target = (k * m * m) as u64;
    let mut n = 0u32;
    while checked_pow(r, n)? < target {
        n += 1;
    }
    let spanning = find_spanning_factor(source, prefix_length)?;
    let estimate = classifier::recurrence_constant(source, &spanning.s, prefix_length)?;
    let rn = checked_pow(r, n)? as usize;
    Ok(AntipowerPlan {
        r,
        m,
        k,
        n,
        s: spanning.s.to_string(),
        y: estimate.y,
        block_size: rn * estimate.y + 2 * rn - 1,
        prefix_length: estimate.prefix_length,
    })
}

/// Checks the planned window at every index of `indices`.
pub fn verify_antipower_plan(
    source: &MorphicWord,
    plan: &AntipowerPlan,
    indices: Range<usize>,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("thm5", true);
    report
        .param("r", plan.r)
        .param("m", plan.m)
        .param("n", plan.n)
        .param("y", plan.y)
        .param("k", plan.k)
        .param("block_size", plan.block_size)
        .param("s", plan.s.clone())
        .param("indices", format!("{}..{}", indices.start, indices.end));
    report.prefix_length = Some(plan.prefix_length as u64);
    report.table = Table::new(AntipowerReport::table_columns());
    for row in sweep_windows(source, indices, plan.block_size, plan.k)? {
        report.record_check();
        report.table.push(row.table_row());
        if !row.is_antipower {
            report.record_failure(row);
        }
    }
    Ok(report)
}
