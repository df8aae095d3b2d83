//! Exact `Z[phi]` arithmetic and antipower bounds for the Fibonacci word.
//!
//! Every floor, fractional part and inequality here is decided on integer
//! coefficients. Floats only appear in `approx` fields of reports.

mod fib;
mod number;

pub use fib::{fib, fib_u64, FibCache};
pub use number::{floor_phi_multiple, floor_phi_multiple_u64, GoldenNumber};

use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::antipower::{self, AntipowerReport, Strategy};
use crate::error::{Error, Result};
use crate::morphic::MorphicWord;
use crate::report::{approx, Table, VerificationReport};
use crate::word::Letter;

/// Letter `n` of the Fibonacci word, `2 - (floor((n+2) phi) - floor((n+1) phi))`.
pub fn fib_digit(n: u64) -> Letter {
    let d = if n < (1 << 61) {
        floor_phi_multiple_u64(n + 2) - floor_phi_multiple_u64(n + 1)
    } else {
        let hi = floor_phi_multiple(&BigInt::from(n + 2));
        let lo = floor_phi_multiple(&BigInt::from(n + 1));
        (hi - lo).to_u64().expect("difference is 1 or 2")
    };
    (2 - d) as Letter
}

/// `-(-phi)^-n`, the residue of `F_n phi` modulo 1.
pub fn fib_phi_residue(n: u32) -> GoldenNumber {
    -GoldenNumber::neg_phi_inverse_pow(n)
}

/// Checks `F_n phi - F_{n+1} = -(-phi)^-n` exactly.
pub fn fib_phi_identity_holds(n: u32) -> bool {
    let lhs = GoldenNumber::new(-fib(n as usize + 1), fib(n as usize));
    lhs == fib_phi_residue(n)
}

/// Exact fractional part.
pub fn frac_golden(x: &GoldenNumber) -> GoldenNumber {
    x.frac()
}

/// Decision of `phi^(1-n) <= min({l 2F_n phi}, 1 - {l 2F_n phi})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftCertificate {
    pub n: u32,
    pub l: u64,
    pub frac: GoldenNumber,
    pub threshold: GoldenNumber,
    pub holds: bool,
}

pub fn shift_separation_holds(n: u32, l: u64) -> Result<ShiftCertificate> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidParameter("n and l must be positive".into()));
    }
    let shift = GoldenNumber::new(0, fib(n as usize) * 2 * l);
    let frac = shift.frac();
    let threshold = GoldenNumber::phi_inverse_pow(n - 1);
    let complement = &GoldenNumber::one() - &frac;
    let holds = threshold <= frac && threshold <= complement;
    Ok(ShiftCertificate {
        n,
        l,
        frac,
        threshold,
        holds,
    })
}

/// `floor(F_n sqrt(5) / 2)`, computed with `sqrt 5 = 2 phi - 1`.
pub fn fib_antipower_k(n: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let f = fib(n as usize);
    let scaled = GoldenNumber::new(-&f, &f * 2);
    let k = scaled.floor().div_floor(&BigInt::from(2));
    debug_assert_eq!(k, half_phi_power_floor(n));
    Ok(k)
}

/// `floor(phi^n / 2)`.
pub fn half_phi_power_floor(n: u32) -> BigInt {
    GoldenNumber::phi()
        .pow(n)
        .floor()
        .div_floor(&BigInt::from(2))
}

fn to_usize(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} = {x} does not fit in memory")))
}

/// Checks that the `fib_antipower_k(n)` blocks of length `2 F_n` at every index in
/// `indices` are pairwise distinct.
pub fn verify_fib_antipowers(
    source: &MorphicWord,
    n: u32,
    indices: Range<usize>,
) -> Result<VerificationReport> {
    let k = to_usize(&fib_antipower_k(n)?, "k")?;
    let block = to_usize(&(fib(n as usize) * 2), "block length")?;
    let mut report = VerificationReport::new("prop17", true);
    report
        .param("n", n)
        .param("k", k)
        .param("block_length", block)
        .param("indices", format!("{}..{}", indices.start, indices.end));
    report.prefix_length = Some((indices.end.saturating_sub(1) + k * block) as u64);
    report.table = Table::new(AntipowerReport::table_columns());
    for row in antipower::sweep_windows(source, indices, block, k)? {
        report.record_check();
        report.table.push(row.table_row());
        if !row.is_antipower {
            report.record_failure(row);
        }
    }
    Ok(report)
}

fn decimal<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Block length from the linear Fibonacci bound for a given `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibBlockBound {
    pub k: u64,
    pub n: u32,
    #[serde(serialize_with = "decimal")]
    pub block: BigInt,
    /// `2 F_n < (4 / sqrt 5) phi k`, decided exactly.
    pub ratio_ok: bool,
}

impl FibBlockBound {
    pub fn ratio(&self) -> f64 {
        self.block.to_f64().unwrap_or(f64::INFINITY) / self.k as f64
    }
}

/// Smallest `n >= 2` with `fib_antipower_k(n) >= k`, block `2 F_n`.
pub fn fib_block_bound(k: u64) -> Result<FibBlockBound> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let target = BigInt::from(k);
    let mut n = 2u32;
    while fib_antipower_k(n)? < target {
        n += 1;
    }
    let f = fib(n as usize);
    // 2F < (4/sqrt5) phi k  <=>  2F (2 phi - 1) < 4 k phi  <=>  0 < 2F + (4k - 4F) phi
    let margin = GoldenNumber::new(&f * 2, (&target - &f) * 4);
    Ok(FibBlockBound {
        k,
        n,
        block: f * 2,
        ratio_ok: margin.signum() > 0,
    })
}

/// Fibonacci-word digits from the floor formula against the morphic
/// expansion for every index below `limit`.
pub fn verify_digit_formula(source: &MorphicWord, limit: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("fact14", true);
    report.param("limit", limit as u64);
    report.prefix_length = Some(limit as u64);
    report.table = Table::new(["index", "morphic", "formula"]);
    let mismatches: Vec<(usize, Letter, Letter)> = source.with_prefix(limit, |p| {
        p.iter()
            .enumerate()
            .filter_map(|(i, &c)| {
                let d = fib_digit(i as u64);
                (c != d).then_some((i, c, d))
            })
            .collect()
    })?;
    report.checked = limit as u64;
    for (i, c, d) in mismatches {
        report
            .table
            .push(vec![i.to_string(), c.to_string(), d.to_string()]);
        report.record_failure(serde_json::json!({"index": i, "morphic": c, "formula": d}));
    }
    Ok(report)
}

/// Identities `F_n phi - F_{n+1} = -(-phi)^{-n}` for `1 <= n <= n_max`.
pub fn verify_fib_phi_identity(n_max: u32) -> VerificationReport {
    let mut report = VerificationReport::new("lemma15", true);
    report.param("n_max", n_max);
    report.table = Table::new(["n", "holds"]);
    for n in 1..=n_max {
        report.record_check();
        let holds = fib_phi_identity_holds(n);
        report.table.push(vec![n.to_string(), holds.to_string()]);
        if !holds {
            report.record_failure(serde_json::json!({ "n": n }));
        }
    }
    report
}

/// For each `n` in `ns`, certifies every `l` in `1..fib_antipower_k(n)`.
pub fn verify_shift_separation(ns: Range<u32>) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("prop16", true);
    report.param("n", format!("{}..{}", ns.start, ns.end));
    report.table = Table::new(["n", "l", "frac_a", "frac_b", "frac_approx", "holds"]);
    for n in ns {
        let k = fib_antipower_k(n)?.to_u64().ok_or_else(|| {
            Error::InvalidParameter(format!("fib_antipower_k({n}) too large to scan"))
        })?;
        for l in 1..k {
            let cert = shift_separation_holds(n, l)?;
            report.record_check();
            report.table.push(vec![
                n.to_string(),
                l.to_string(),
                cert.frac.a().to_string(),
                cert.frac.b().to_string(),
                approx(cert.frac.approx()),
                cert.holds.to_string(),
            ]);
            if !cert.holds {
                report.record_failure(&cert);
            }
        }
    }
    Ok(report)
}

/// Exact ratio checks for `1 <= k <= k_max`, plus the largest observed
/// `2F_n / k`, which must not exceed `10^-4 * ratio_cap_e4`.
pub fn verify_fib_block_bounds(k_max: u64, ratio_cap_e4: u64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("thm6", true);
    report
        .param("kmax", k_max)
        .param("ratio_cap", ratio_cap_e4 as f64 / 1e4);
    report.table = Table::new(["k", "n", "block", "ratio", "ratio_ok"]);
    let mut worst: Option<FibBlockBound> = None;
    for k in 1..=k_max {
        let bound = fib_block_bound(k)?;
        report.record_check();
        report.table.push(vec![
            k.to_string(),
            bound.n.to_string(),
            bound.block.to_string(),
            approx(bound.ratio()),
            bound.ratio_ok.to_string(),
        ]);
        // block / k <= cap / 10^4, in integers
        let within_cap = &bound.block * 10_000u64 <= BigInt::from(ratio_cap_e4) * k;
        if !bound.ratio_ok || !within_cap {
            report.record_failure(&bound);
        }
        // compare block/k fractions exactly: b1 * k2 > b2 * k1
        if worst
            .as_ref()
            .is_none_or(|w| &bound.block * w.k > &w.block * bound.k)
        {
            worst = Some(bound);
        }
    }
    if let Some(w) = worst {
        report
            .note("max_ratio", w.ratio())
            .note("max_ratio_k", w.k)
            .note("max_ratio_block", w.block.to_string());
    }
    Ok(report)
}

/// One row of the minimal-block-length table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaRow {
    pub i: usize,
    pub k: usize,
    pub gamma: Option<usize>,
    pub upper: usize,
}

/// `gamma_i(k)` on the Fibonacci word for every `(i, k)`, asserting
/// `k - 1 <= gamma_i(k) <= 2 F_n` with `n` from [`fib_block_bound`].
pub fn gamma_bounds_report(
    source: &MorphicWord,
    indices: Range<usize>,
    ks: Range<usize>,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gamma", true);
    report
        .param("indices", format!("{}..{}", indices.start, indices.end))
        .param("k", format!("{}..{}", ks.start, ks.end));
    report.table = Table::new(["i", "k", "gamma", "ratio", "lower", "upper"]);
    let uppers = ks
        .clone()
        .map(|k| {
            let b = fib_block_bound(k.max(1) as u64)?;
            to_usize(&b.block, "block")
        })
        .collect::<Result<Vec<_>>>()?;
    let max_len = indices
        .clone()
        .last()
        .zip(ks.clone().last())
        .map(|(i, k)| i + k * uppers.iter().copied().max().unwrap_or(1))
        .unwrap_or(0);
    report.prefix_length = Some(max_len as u64);
    let rows: Vec<GammaRow> = source.with_prefix(max_len, |p| {
        use rayon::prelude::*;
        indices
            .clone()
            .into_par_iter()
            .flat_map_iter(|i| {
                ks.clone()
                    .zip(uppers.iter())
                    .map(move |(k, &upper)| GammaRow {
                        i,
                        k,
                        gamma: antipower::gamma_in(p, i, k, upper, strategy),
                        upper,
                    })
            })
            .collect()
    })?;
    for row in rows {
        report.record_check();
        let lower = row.k.saturating_sub(1);
        report.table.push(vec![
            row.i.to_string(),
            row.k.to_string(),
            row.gamma.map(|g| g.to_string()).unwrap_or_default(),
            row.gamma
                .map(|g| approx(g as f64 / row.k as f64))
                .unwrap_or_default(),
            lower.to_string(),
            row.upper.to_string(),
        ]);
        match row.gamma {
            Some(g) if g >= lower && g <= row.upper => {}
            _ => report.record_failure(&row),
        }
    }
    Ok(report)
}

/// Checks whether the prefix made of `F_n - 1` blocks of length
/// `F_n / 2 + F_{n-1}` is an antipower. The result is informational.
pub fn even_fib_antipower_check(source: &MorphicWord, n: u32) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::InvalidParameter("n must be at least 3".into()));
    }
    let f = fib(n as usize);
    if !f.is_even() {
        return Err(Error::InvalidParameter(format!(
            "F_{n} = {f} is odd; the check needs an even Fibonacci number (3 | n)"
        )));
    }
    let k = to_usize(&(&f - 1), "k")?;
    let block = to_usize(&(&f / 2 + fib(n as usize - 1)), "block length")?;
    let mut report = VerificationReport::new("conj18", false);
    report
        .param("n", n)
        .param("F_n", f.to_string())
        .param("k", k)
        .param("block_length", block);
    report.prefix_length = Some((k * block) as u64);
    report.table = Table::new(AntipowerReport::table_columns());
    let row = antipower::blocks_distinct(source, 0, block, k)?;
    report.record_check();
    report.table.push(row.table_row());
    report.note("verdict", if row.is_antipower { "PASS" } else { "FAIL" });
    if !row.is_antipower {
        report.record_failure(row);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_examples() {
        let first: Vec<Letter> = (0..5).map(fib_digit).collect();
        assert_eq!(first, [0, 1, 0, 0, 1]);
        assert_eq!(fib_digit(1 << 62), {
            let hi = floor_phi_multiple(&BigInt::from((1u64 << 62) + 2));
            let lo = floor_phi_multiple(&BigInt::from((1u64 << 62) + 1));
            (BigInt::from(2) - (hi - lo)).to_u8().unwrap()
        });
    }

    #[test]
    fn fib_phi_identity_examples() {
        // n = 4: 3 phi - 5
        assert_eq!(fib_phi_residue(4), GoldenNumber::new(-5, 3));
        assert_eq!(fib_phi_residue(1), GoldenNumber::new(-1, 1));
        assert!(fib_phi_identity_holds(4));
    }

    #[test]
    fn first_shift_is_separated() {
        let cert = shift_separation_holds(5, 1).unwrap();
        assert!(cert.holds);
        // {10 phi} = 10 phi - 16 and min(frac, 1 - frac) = 2 phi^-5
        assert_eq!(cert.frac, GoldenNumber::new(-16, 10));
        let two_phi5 = &GoldenNumber::integer(2) * &GoldenNumber::phi_inverse_pow(5);
        let complement = &GoldenNumber::one() - &cert.frac;
        assert_eq!(std::cmp::min(cert.frac.clone(), complement), two_phi5);
    }

    #[test]
    fn separation_fails_near_integers() {
        // l * 2 phi^-n close to 1 once l passes phi^n / 2
        let n = 6;
        let k = fib_antipower_k(n).unwrap().to_u64().unwrap();
        let failing = (k..4 * k)
            .filter(|&l| !shift_separation_holds(n, l).unwrap().holds)
            .count();
        assert!(failing > 0);
    }

    #[test]
    fn fib_antipower_k_examples() {
        assert_eq!(fib_antipower_k(5).unwrap(), BigInt::from(5));
        assert_eq!(fib_antipower_k(2).unwrap(), BigInt::from(1));
        assert_eq!(fib_antipower_k(10).unwrap(), BigInt::from(61));
        assert!(fib_antipower_k(1).is_err());
    }

    #[test]
    fn block_bound_examples() {
        let b = fib_block_bound(5).unwrap();
        assert_eq!((b.n, b.block.clone()), (5, BigInt::from(10)));
        assert!(b.ratio_ok);
        let b = fib_block_bound(1).unwrap();
        assert_eq!((b.n, b.block), (2, BigInt::from(2)));
    }

    #[test]
    fn fib_antipower_small_sweeps() {
        let fib = MorphicWord::fibonacci();
        let r = verify_fib_antipowers(&fib, 5, 0..200).unwrap();
        assert!(r.pass);
        assert_eq!(r.checked, 200);
        assert_eq!(r.parameters["k"], 5);
        assert_eq!(r.parameters["block_length"], 10);
        let r = verify_fib_antipowers(&fib, 2, 0..50).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn gamma_table_small() {
        let fib = MorphicWord::fibonacci();
        let r = gamma_bounds_report(&fib, 0..1, 2..11, Strategy::Accelerated).unwrap();
        assert!(r.pass);
        assert_eq!(r.table.rows[0][2], "1");
        assert_eq!(r.table.rows[1][2], "2");
        let empty = gamma_bounds_report(&fib, 0..1, 2..2, Strategy::Accelerated).unwrap();
        assert!(empty.table.rows.is_empty());
    }

    #[test]
    fn even_fib_parameters() {
        let fib = MorphicWord::fibonacci();
        let r = even_fib_antipower_check(&fib, 6).unwrap();
        assert_eq!(r.parameters["k"], 7);
        assert_eq!(r.parameters["block_length"], 9);
        assert_eq!(r.prefix_length, Some(63));
        assert!(!r.hard);
        assert!(even_fib_antipower_check(&fib, 7).is_err());
    }
}
