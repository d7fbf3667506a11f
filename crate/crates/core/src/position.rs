//! Position functions `p_a`, `p_b`, the relative position `r = p_b - p_a`,
//! difference sequences, counting functions and run statistics.
//!
//! Positions are 0-based; every series takes its argument `n >= 1`.

use std::sync::{Mutex, MutexGuard};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Letter, WordStream};

const MIN_CHUNK: usize = 4096;

#[derive(Default)]
struct Scan {
    positions: Vec<usize>,
    scanned: usize,
}

/// `n ↦ p_x(n)`, the position of the `n`-th occurrence of `x`, cached.
pub struct PositionSeries {
    word: WordStream,
    letter: Letter,
    scan: Mutex<Scan>,
}

impl std::fmt::Debug for PositionSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PositionSeries")
            .field("word", &self.word)
            .field("letter", &self.letter)
            .finish()
    }
}

impl PositionSeries {
    pub fn new(word: &WordStream, letter: Letter) -> Self {
        Self {
            word: word.clone(),
            letter,
            scan: Mutex::new(Scan::default()),
        }
    }

    pub fn letter(&self) -> Letter {
        self.letter
    }

    pub fn word(&self) -> &WordStream {
        &self.word
    }

    fn lock(&self) -> MutexGuard<'_, Scan> {
        self.scan.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Scans one more chunk of the word (at most up to `limit`). Returns false when
    /// nothing could be read.
    fn scan_chunk(&self, st: &mut Scan, limit: usize) -> Result<()> {
        let start = st.scanned;
        let end = (start + MIN_CHUNK.max(start / 4)).min(limit);
        if end <= start {
            return Err(Error::ResourceLimit {
                index: start,
                budget: limit,
            });
        }
        let letters = match self.word.slice(start..end) {
            Ok(v) => v,
            Err(e) => {
                let mut v = Vec::new();
                while start + v.len() < end {
                    match self.word.letter_at(start + v.len()) {
                        Ok(x) => v.push(x),
                        Err(_) => break,
                    }
                }
                if v.is_empty() {
                    return Err(e);
                }
                v
            }
        };
        for (i, &x) in letters.iter().enumerate() {
            if x == self.letter {
                st.positions.push(start + i);
            }
        }
        st.scanned = start + letters.len();
        Ok(())
    }

    /// `p_x(n)` for `n >= 1`.
    pub fn get(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::ZeroIndex(n));
        }
        let mut st = self.lock();
        let budget = self.word.budget();
        while st.positions.len() < n {
            if let Err(e) = self.scan_chunk(&mut st, budget) {
                return Err(match e {
                    Error::ResourceLimit { .. } => Error::OccurrenceNotFound {
                        letter: self.letter,
                        n,
                        searched: st.scanned,
                    },
                    other => other,
                });
            }
        }
        Ok(st.positions[n - 1])
    }

    /// `p_x(1), …, p_x(n)`.
    pub fn values(&self, n: usize) -> Result<Vec<usize>> {
        if n > 0 {
            self.get(n)?;
        }
        Ok(self.lock().positions[..n].to_vec())
    }

    /// `Δp_x(n) = p_x(n+1) - p_x(n)`.
    pub fn delta(&self, n: usize) -> Result<i64> {
        Ok(self.get(n + 1)? as i64 - self.get(n)? as i64)
    }

    /// Occurrences of `x` among the first `m` letters.
    pub fn count_below(&self, m: usize) -> Result<usize> {
        let mut st = self.lock();
        while st.scanned < m {
            self.scan_chunk(&mut st, m)?;
        }
        Ok(st.positions.partition_point(|&p| p < m))
    }
}

/// `n ↦ r(n) = p_b(n) - p_a(n)`.
#[derive(Debug)]
pub struct RelativeSeries {
    pa: PositionSeries,
    pb: PositionSeries,
}

impl RelativeSeries {
    pub fn new(word: &WordStream) -> Self {
        Self {
            pa: PositionSeries::new(word, Letter::A),
            pb: PositionSeries::new(word, Letter::B),
        }
    }

    pub fn word(&self) -> &WordStream {
        self.pa.word()
    }

    pub fn p_a(&self) -> &PositionSeries {
        &self.pa
    }

    pub fn p_b(&self) -> &PositionSeries {
        &self.pb
    }

    pub fn positions(&self, x: Letter) -> &PositionSeries {
        match x {
            Letter::A => &self.pa,
            Letter::B => &self.pb,
        }
    }

    pub fn get(&self, n: usize) -> Result<i64> {
        Ok(self.pb.get(n)? as i64 - self.pa.get(n)? as i64)
    }

    pub fn delta(&self, n: usize) -> Result<i64> {
        Ok(self.get(n + 1)? - self.get(n)?)
    }

    /// `r(1), …, r(n)`.
    pub fn values(&self, n: usize) -> Result<Vec<i64>> {
        let a = self.pa.values(n)?;
        let b = self.pb.values(n)?;
        Ok(a.iter().zip(&b).map(|(&x, &y)| y as i64 - x as i64).collect())
    }
}

pub fn p(w: &WordStream, x: Letter, n: usize) -> Result<usize> {
    PositionSeries::new(w, x).get(n)
}

pub fn r(w: &WordStream, n: usize) -> Result<i64> {
    RelativeSeries::new(w).get(n)
}

/// `Δs(n) = s(n+1) - s(n)`.
pub fn delta<E>(s: impl Fn(usize) -> Result<i64, E>, n: usize) -> Result<i64, E> {
    Ok(s(n + 1)? - s(n)?)
}

/// Differences of consecutive entries.
pub fn differences(values: &[i64]) -> Vec<i64> {
    values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Occurrences of `x` among `ℓ_0 … ℓ_{m-1}`.
pub fn counting(w: &WordStream, x: Letter, m: usize) -> Result<usize> {
    w.with_prefix(m, |s| s.iter().filter(|&&y| y == x).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub horizon: usize,
    pub longest_a_run: usize,
    pub longest_b_run: usize,
    /// Largest of both runs and `p_b(1)` when a `b` occurs in the horizon.
    pub c: usize,
}

pub fn runs(w: &WordStream, horizon: usize) -> Result<RunReport> {
    w.with_prefix(horizon, |s| {
        let mut longest = [0usize; 2];
        let mut current = 0;
        for (i, &x) in s.iter().enumerate() {
            current = if i > 0 && s[i - 1] == x { current + 1 } else { 1 };
            let slot = &mut longest[x.index()];
            *slot = (*slot).max(current);
        }
        let first_b = s.iter().position(|&x| x == Letter::B).unwrap_or(0);
        RunReport {
            horizon,
            longest_a_run: longest[0],
            longest_b_run: longest[1],
            c: longest[0].max(longest[1]).max(first_b),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    PaOverN,
    PbOverN,
    ROverN,
    FreqA,
    FreqB,
}

/// The exact value at `n` of one of the ratios whose limits the spectral module predicts.
pub fn empirical_ratio(w: &WordStream, kind: RatioKind, n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::ZeroIndex(n));
    }
    let numer: i64 = match kind {
        RatioKind::PaOverN => p(w, Letter::A, n)? as i64,
        RatioKind::PbOverN => p(w, Letter::B, n)? as i64,
        RatioKind::ROverN => r(w, n)?,
        RatioKind::FreqA => counting(w, Letter::A, n)? as i64,
        RatioKind::FreqB => counting(w, Letter::B, n)? as i64,
    };
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidityFailure {
    /// Fewer than two values were supplied.
    TooShort,
    NotStrictlyIncreasing { n: usize },
    FirstValue { found: i64 },
    /// No gap `Δp > 1` within the horizon; only finite evidence against validity.
    NoGapWithinHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub horizon: usize,
    pub failure: Option<ValidityFailure>,
    /// Smallest `n` with `Δp(n) > 1`, the finite stand-in for "infinitely often".
    pub gap_witness: Option<usize>,
}

impl ValidityReport {
    /// The verdict rests only on the absence of a gap inside the horizon.
    pub fn horizon_caveat(&self) -> bool {
        self.failure == Some(ValidityFailure::NoGapWithinHorizon)
    }
}

fn check_positions(values: &[i64], first_ok: impl Fn(i64) -> bool) -> ValidityReport {
    let horizon = values.len();
    let fail = |failure| ValidityReport {
        valid: false,
        horizon,
        failure: Some(failure),
        gap_witness: None,
    };
    if horizon < 2 {
        return fail(ValidityFailure::TooShort);
    }
    if !first_ok(values[0]) {
        return fail(ValidityFailure::FirstValue { found: values[0] });
    }
    if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
        return fail(ValidityFailure::NotStrictlyIncreasing { n: i + 1 });
    }
    match values.windows(2).position(|w| w[1] - w[0] > 1) {
        Some(i) => ValidityReport {
            valid: true,
            horizon,
            failure: None,
            gap_witness: Some(i + 1),
        },
        None => fail(ValidityFailure::NoGapWithinHorizon),
    }
}

/// Checks `p(1), …, p(horizon)` as candidate `p_a` of a word starting with `a`.
pub fn is_valid_pa(values: &[i64]) -> ValidityReport {
    check_positions(values, |v| v == 0)
}

/// Checks `p(1), …, p(horizon)` as candidate `p_b` of a word starting with `a`.
pub fn is_valid_pb(values: &[i64]) -> ValidityReport {
    check_positions(values, |v| v > 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositionRow {
    pub n: usize,
    pub p_a: usize,
    pub p_b: usize,
    pub r: i64,
    pub delta_pa: i64,
    pub delta_pb: i64,
    pub delta_r: i64,
}

/// Rows `n = 1..=n_max` of positions, `r` and their differences.
pub fn position_rows(w: &WordStream, n_max: usize) -> Result<Vec<PositionRow>> {
    let series = RelativeSeries::new(w);
    let pa = series.p_a().values(n_max + 1)?;
    let pb = series.p_b().values(n_max + 1)?;
    Ok((0..n_max)
        .map(|i| {
            let r = pb[i] as i64 - pa[i] as i64;
            let r_next = pb[i + 1] as i64 - pa[i + 1] as i64;
            PositionRow {
                n: i + 1,
                p_a: pa[i],
                p_b: pb[i],
                r,
                delta_pa: (pa[i + 1] - pa[i]) as i64,
                delta_pb: (pb[i + 1] - pb[i]) as i64,
                delta_r: r_next - r,
            }
        })
        .collect())
}

pub const CSV_HEADER: &str = "n,p_a,p_b,r,delta_pa,delta_pb,delta_r";

pub fn positions_csv(rows: &[PositionRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.n, row.p_a, row.p_b, row.r, row.delta_pa, row.delta_pb, row.delta_r
        ));
    }
    out
}
