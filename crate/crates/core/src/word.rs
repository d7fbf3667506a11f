//! Letters, finite words and lazily generated infinite words.

use std::fmt;
use std::ops::{Deref, Range};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

pub const DEFAULT_INDEX_BUDGET: usize = 10_000_000;

static INDEX_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_INDEX_BUDGET);

/// Budget picked up by streams created from now on.
pub fn index_budget() -> usize {
    INDEX_BUDGET.load(Ordering::Relaxed)
}

pub fn set_index_budget(budget: usize) {
    INDEX_BUDGET.store(budget, Ordering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub const BOTH: [Letter; 2] = [Letter::A, Letter::B];

    pub fn flip(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Letter {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut chars = s.trim().chars();
        match (chars.next().and_then(Letter::from_char), chars.next()) {
            (Some(x), None) => Ok(x),
            _ => Err(ParseError::new("letter", s, "expected `a` or `b`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn repeat(x: Letter, n: usize) -> Self {
        Self(vec![x; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn extend_from(&mut self, other: &FiniteWord) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Self(out)
    }

    /// Number of occurrences of `x`.
    pub fn count(&self, x: Letter) -> usize {
        self.0.iter().filter(|&&y| y == x).count()
    }

    /// Equal numbers of `a` and `b`.
    pub fn is_balanced(&self) -> bool {
        self.count(Letter::A) == self.count(Letter::B)
    }

    pub fn reflect(&self) -> FiniteWord {
        Self(self.0.iter().map(|x| x.flip()).collect())
    }

    pub fn coding(&self, map_a: i64, map_b: i64) -> Vec<i64> {
        self.0.iter().map(|&x| code(x, map_a, map_b)).collect()
    }

    pub fn starts_with(&self, other: &FiniteWord) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl Deref for FiniteWord {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for FiniteWord {
    fn from(v: Vec<Letter>) -> Self {
        Self(v)
    }
}

impl From<&[Letter]> for FiniteWord {
    fn from(v: &[Letter]) -> Self {
        Self(v.to_vec())
    }
}

impl FromIterator<Letter> for FiniteWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = ParseError;

    /// Parses a single line over `{a, b}`; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Letter::from_char(c).ok_or_else(|| {
                    ParseError::new("word", s, format!("invalid letter {c:?} at offset {i}"))
                })
            })
            .collect()
    }
}

pub(crate) fn code(x: Letter, map_a: i64, map_b: i64) -> i64 {
    match x {
        Letter::A => map_a,
        Letter::B => map_b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Periodic,
    SubstitutionFixedPoint,
    Reconstructed,
    OperatorDerived,
    ExplicitRule,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Periodic => "periodic",
            Provenance::SubstitutionFixedPoint => "substitution-fixed-point",
            Provenance::Reconstructed => "reconstructed",
            Provenance::OperatorDerived => "operator-derived",
            Provenance::ExplicitRule => "explicit-rule",
        };
        f.write_str(s)
    }
}

/// Generation rule behind a [`WordStream`].
///
/// `extend` appends letters one at a time (never rewriting `buf`) until
/// `buf.len() >= target` or it fails; letters pushed before a failure stay valid.
pub(crate) trait Rule: Send {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()>;
}

struct Memo {
    buf: Vec<Letter>,
    rule: Box<dyn Rule>,
}

struct Shared {
    memo: Mutex<Memo>,
    provenance: Provenance,
    descriptor: String,
}

/// A one-sided infinite word over `{a, b}`, generated on demand.
///
/// Clones share one memo buffer, so a letter is computed at most once.
/// All methods take `&self` and are safe to call from several threads.
#[derive(Clone)]
pub struct WordStream {
    shared: Arc<Shared>,
    budget: usize,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("provenance", &self.shared.provenance)
            .field("descriptor", &self.shared.descriptor)
            .field("budget", &self.budget)
            .finish()
    }
}

impl WordStream {
    pub(crate) fn from_rule<R: Rule + 'static>(
        provenance: Provenance,
        descriptor: String,
        rule: R,
    ) -> Self {
        Self::with_initial(provenance, descriptor, Vec::new(), rule)
    }

    pub(crate) fn with_initial<R: Rule + 'static>(
        provenance: Provenance,
        descriptor: String,
        initial: Vec<Letter>,
        rule: R,
    ) -> Self {
        Self {
            shared: Arc::new(Shared {
                memo: Mutex::new(Memo {
                    buf: initial,
                    rule: Box::new(rule),
                }),
                provenance,
                descriptor,
            }),
            budget: index_budget(),
        }
    }

    /// `u^ω`.
    pub fn periodic(u: &FiniteWord) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Self::from_rule(
            Provenance::Periodic,
            format!("periodic:{u}"),
            Periodic {
                period: u.letters().to_vec(),
            },
        ))
    }

    /// Word whose letter at index `i` is `f(i)`.
    pub fn from_fn<F>(descriptor: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Letter + Send + 'static,
    {
        Self::from_rule(Provenance::ExplicitRule, descriptor.into(), FnRule(f))
    }

    pub fn provenance(&self) -> Provenance {
        self.shared.provenance
    }

    pub fn descriptor(&self) -> &str {
        &self.shared.descriptor
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Same word and memo, different index budget.
    pub fn with_budget(&self, budget: usize) -> Self {
        Self {
            shared: Arc::clone(&self.shared),
            budget,
        }
    }

    fn lock(&self) -> MutexGuard<'_, Memo> {
        self.shared.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn ensure(&self, memo: &mut Memo, len: usize) -> Result<()> {
        if memo.buf.len() >= len {
            return Ok(());
        }
        if len > self.budget {
            return Err(Error::ResourceLimit {
                index: len - 1,
                budget: self.budget,
            });
        }
        let want = len.max(memo.buf.len().saturating_mul(2).min(self.budget));
        let Memo { buf, rule } = memo;
        match rule.extend(buf, want) {
            Err(_) if buf.len() >= len => Ok(()),
            other => other,
        }
    }

    /// Letter at 0-based index `i`.
    pub fn letter_at(&self, i: usize) -> Result<Letter> {
        let mut memo = self.lock();
        self.ensure(&mut memo, i + 1)?;
        Ok(memo.buf[i])
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        self.with_prefix(n, |s| FiniteWord::from(s))
    }

    pub fn slice(&self, range: Range<usize>) -> Result<Vec<Letter>> {
        let mut memo = self.lock();
        self.ensure(&mut memo, range.end)?;
        Ok(memo.buf[range].to_vec())
    }

    /// Runs `f` on the first `n` letters without copying them.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[Letter]) -> R) -> Result<R> {
        let mut memo = self.lock();
        self.ensure(&mut memo, n)?;
        Ok(f(&memo.buf[..n]))
    }

    /// Number of letters generated so far.
    pub fn memoized_len(&self) -> usize {
        self.lock().buf.len()
    }

    /// Immutable copy of the first `n` letters that can be shared freely.
    pub fn freeze(&self, n: usize) -> Result<FrozenPrefix> {
        let letters = self.with_prefix(n, |s| Arc::<[Letter]>::from(s))?;
        Ok(FrozenPrefix {
            letters,
            provenance: self.provenance(),
            descriptor: self.descriptor().to_string(),
        })
    }

    pub fn reflect(&self) -> WordStream {
        WordStream::from_rule(
            Provenance::OperatorDerived,
            format!("{} | reflect", self.descriptor()),
            Reflect {
                source: self.clone(),
            },
        )
    }

    /// `(ℓ_{2n}, ℓ_{2n+1})`.
    pub fn dimer(&self, n: usize) -> Result<(Letter, Letter)> {
        let pair = self.slice(2 * n..2 * n + 2)?;
        Ok((pair[0], pair[1]))
    }

    pub fn coding(&self, map_a: i64, map_b: i64) -> Coding {
        Coding {
            word: self.clone(),
            map_a,
            map_b,
        }
    }

    pub fn mixedness(&self, horizon: usize) -> Result<MixednessReport> {
        let count_a = self.with_prefix(horizon, |s| s.iter().filter(|&&x| x == Letter::A).count())?;
        Ok(MixednessReport::new(horizon, count_a, horizon - count_a))
    }

    pub fn export(&self, length: usize) -> Result<StreamExport> {
        Ok(StreamExport {
            provenance: self.provenance(),
            descriptor: self.descriptor().to_string(),
            length,
            prefix: self.prefix(length)?.to_string(),
        })
    }
}

/// Integer sequence obtained by relabelling the letters of a word.
#[derive(Debug, Clone)]
pub struct Coding {
    word: WordStream,
    map_a: i64,
    map_b: i64,
}

pub fn apply_coding(w: &WordStream, map_a: i64, map_b: i64) -> Coding {
    w.coding(map_a, map_b)
}

impl Coding {
    pub fn value_at(&self, i: usize) -> Result<i64> {
        Ok(code(self.word.letter_at(i)?, self.map_a, self.map_b))
    }

    /// Values at indices `0..n`.
    pub fn values(&self, n: usize) -> Result<Vec<i64>> {
        self.word
            .with_prefix(n, |s| s.iter().map(|&x| code(x, self.map_a, self.map_b)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixednessVerdict {
    BothSeen,
    OnlyASeen,
    OnlyBSeen,
}

/// Letter counts in a finite prefix: evidence, not proof, that both letters recur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MixednessReport {
    pub horizon: usize,
    pub count_a: usize,
    pub count_b: usize,
    pub verdict: MixednessVerdict,
}

impl MixednessReport {
    fn new(horizon: usize, count_a: usize, count_b: usize) -> Self {
        let verdict = match (count_a, count_b) {
            (_, 0) => MixednessVerdict::OnlyASeen,
            (0, _) => MixednessVerdict::OnlyBSeen,
            _ => MixednessVerdict::BothSeen,
        };
        Self {
            horizon,
            count_a,
            count_b,
            verdict,
        }
    }
}

/// A fixed prefix of a stream, cheap to clone and share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenPrefix {
    letters: Arc<[Letter]>,
    provenance: Provenance,
    descriptor: String,
}

impl FrozenPrefix {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        self.letters.get(i).copied()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn to_word(&self) -> FiniteWord {
        FiniteWord::from(&self.letters[..])
    }
}

/// Serialized form of a stream prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamExport {
    pub provenance: Provenance,
    pub descriptor: String,
    pub length: usize,
    pub prefix: String,
}

impl StreamExport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    /// Parses and checks that `prefix` is a word of exactly `length` letters.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let export: StreamExport = serde_json::from_str(text)
            .map_err(|e| ParseError::new("stream export", text, e.to_string()))?;
        let word: FiniteWord = export.prefix.parse()?;
        if word.len() != export.length {
            return Err(ParseError::new(
                "stream export",
                text,
                format!("prefix has {} letters, length says {}", word.len(), export.length),
            ));
        }
        Ok(export)
    }

    pub fn to_frozen(&self) -> Result<FrozenPrefix, ParseError> {
        let word: FiniteWord = self.prefix.parse()?;
        Ok(FrozenPrefix {
            letters: Arc::from(word.letters()),
            provenance: self.provenance,
            descriptor: self.descriptor.clone(),
        })
    }
}

struct Periodic {
    period: Vec<Letter>,
}

impl Rule for Periodic {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        let p = self.period.len();
        while buf.len() < target {
            let i = buf.len();
            buf.push(self.period[i % p]);
        }
        Ok(())
    }
}

struct FnRule<F>(F);

impl<F: Fn(usize) -> Letter + Send> Rule for FnRule<F> {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while buf.len() < target {
            let i = buf.len();
            buf.push((self.0)(i));
        }
        Ok(())
    }
}

/// Fills `buf` up to `target` with `f(source[i - offset])`.
pub(crate) fn pull_mapped(
    source: &WordStream,
    buf: &mut Vec<Letter>,
    offset: usize,
    target: usize,
    f: impl Fn(Letter) -> Letter,
) -> Result<()> {
    let start = buf.len();
    if start >= target {
        return Ok(());
    }
    match source.slice(start - offset..target - offset) {
        Ok(chunk) => {
            buf.extend(chunk.into_iter().map(f));
            Ok(())
        }
        Err(e) => {
            // salvage whatever the source can still provide
            while buf.len() < target {
                let i = buf.len() - offset;
                match source.letter_at(i) {
                    Ok(x) => buf.push(f(x)),
                    Err(_) => return Err(e),
                }
            }
            Ok(())
        }
    }
}

struct Reflect {
    source: WordStream,
}

impl Rule for Reflect {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        pull_mapped(&self.source, buf, 0, target, Letter::flip)
    }
}
