//! Rebuilding a word from its relative position function.
//!
//! Pairs `(p_a(n), p_b(n))` are placed one at a time: the smaller of the two is
//! the least position not yet used, the other one sits `|r(n)|` further on.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::operators::delete_pow;
use crate::position::RelativeSeries;
use crate::substitution::BinarySubstitution;
use crate::word::{index_budget, FiniteWord, Letter, Provenance, Rule, WordStream};

#[derive(Clone)]
enum Provider {
    Linear { k: i64, j: i64 },
    List(Arc<[i64]>),
    Series(Arc<RelativeSeries>),
    Rule(Arc<dyn Fn(usize) -> i64 + Send + Sync>),
}

/// A candidate relative position function `n ↦ r(n)`, `n >= 1`.
#[derive(Clone)]
pub struct RSpec {
    provider: Provider,
    sign: i64,
    description: String,
}

impl fmt::Debug for RSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RSpec").field("description", &self.description).finish()
    }
}

impl RSpec {
    /// `r(n) = k·n + j`.
    pub fn linear(k: i64, j: i64) -> Self {
        Self {
            provider: Provider::Linear { k, j },
            sign: 1,
            description: format_linear(k, j),
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::linear(0, c)
    }

    /// `r(n) = values[n - 1]`; undefined past the end.
    pub fn from_values(values: Vec<i64>, description: impl Into<String>) -> Self {
        Self {
            provider: Provider::List(values.into()),
            sign: 1,
            description: description.into(),
        }
    }

    pub fn from_fn<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> i64 + Send + Sync + 'static,
    {
        Self {
            provider: Provider::Rule(Arc::new(f)),
            sign: 1,
            description: description.into(),
        }
    }

    /// The `r` of an existing word.
    pub fn relative_of(w: &WordStream) -> Self {
        Self {
            provider: Provider::Series(Arc::new(RelativeSeries::new(w))),
            sign: 1,
            description: format!("r of {}", w.descriptor()),
        }
    }

    /// `-r`.
    pub fn negated(&self) -> Self {
        Self {
            provider: self.provider.clone(),
            sign: -self.sign,
            description: format!("-({})", self.description),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn value(&self, n: usize) -> Result<i64> {
        if n == 0 {
            return Err(Error::ZeroIndex(n));
        }
        let v = match &self.provider {
            Provider::Linear { k, j } => k
                .checked_mul(n as i64)
                .and_then(|kn| kn.checked_add(*j))
                .ok_or_else(|| Error::Parameter(format!("r({n}) overflows i64")))?,
            Provider::List(values) => *values.get(n - 1).ok_or(Error::ProviderExhausted(n))?,
            Provider::Series(series) => series.get(n)?,
            Provider::Rule(f) => f(n),
        };
        v.checked_mul(self.sign)
            .ok_or_else(|| Error::Parameter(format!("-r({n}) overflows i64")))
    }

    /// Newline- or whitespace-separated integers `r(1) r(2) …`; `#` starts a comment.
    pub fn parse_list(text: &str) -> Result<Self, ParseError> {
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                let v = tok.parse().map_err(|_| {
                    ParseError::new("r-spec list", text, format!("`{tok}` is not an integer"))
                })?;
                values.push(v);
            }
        }
        let description = format!("list of {} values", values.len());
        Ok(Self::from_values(values, description))
    }

    /// A closed form `k*n+j` (also `n`, `3n-1`, `-2*n+5`, `7`) or a preset `fib` / `tm`.
    pub fn parse_formula(text: &str) -> Result<Self, ParseError> {
        match text.trim() {
            "fib" => return Ok(Self::linear(1, 0)),
            "tm" => {
                let tm = BinarySubstitution::thue_morse()
                    .fixed_point(Letter::A)
                    .expect("thue-morse has a fixed point");
                return Ok(Self::relative_of(&tm));
            }
            _ => {}
        }
        let (k, j) = parse_linear(text)?;
        Ok(Self::linear(k, j))
    }

    /// Number of values when the provider is a finite list.
    pub fn known_len(&self) -> Option<usize> {
        match &self.provider {
            Provider::List(values) => Some(values.len()),
            _ => None,
        }
    }
}

fn format_linear(k: i64, j: i64) -> String {
    match (k, j) {
        (0, j) => format!("{j}"),
        (k, 0) => format!("{k}*n"),
        (k, j) if j < 0 => format!("{k}*n-{}", j.unsigned_abs()),
        (k, j) => format!("{k}*n+{j}"),
    }
}

fn parse_linear(text: &str) -> Result<(i64, i64), ParseError> {
    let err = |why: &str| ParseError::new("formula", text, why.to_string());
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty formula"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let (mut k, mut j) = (0i64, 0i64);
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, is_n) = if let Some(c) = body.strip_suffix('n') {
            let c = c.strip_suffix('*').unwrap_or(c);
            if c.is_empty() {
                (1, true)
            } else {
                (c.parse::<i128>().map_err(|_| err("bad coefficient"))?, true)
            }
        } else {
            (body.parse::<i128>().map_err(|_| err("bad term"))?, false)
        };
        let coef = i64::try_from(if neg { -coef } else { coef }).map_err(|_| err("overflow"))?;
        let slot = if is_n { &mut k } else { &mut j };
        *slot = slot.checked_add(coef).ok_or_else(|| err("overflow"))?;
    }
    Ok((k, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Placement rule for `r(n) > 0`.
    Alpha,
    /// Placement rule for `r(n) < 0`.
    Beta,
    ZeroValue,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Alpha => "alpha",
            Condition::Beta => "beta",
            Condition::ZeroValue => "zero-value",
        })
    }
}

/// The first `n` at which the pairs cannot be placed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub condition: Condition,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation at n = {}: {}", self.condition, self.n, self.detail)
    }
}

/// Letters placed by the first pairs; positions not yet placed are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialWord {
    cells: Vec<Option<Letter>>,
    determined: usize,
    pa: Vec<usize>,
    pb: Vec<usize>,
}

impl PartialWord {
    /// Length of the prefix in which every position is placed.
    pub fn determined_len(&self) -> usize {
        self.determined
    }

    pub fn determined_prefix(&self) -> FiniteWord {
        self.cells[..self.determined]
            .iter()
            .map(|c| c.expect("determined cells are placed"))
            .collect()
    }

    /// Letter at `i`, if placed (possibly beyond the determined prefix).
    pub fn cell(&self, i: usize) -> Option<Letter> {
        self.cells.get(i).copied().flatten()
    }

    pub fn letter(&self, i: usize) -> Result<Letter> {
        if i < self.determined {
            Ok(self.cells[i].expect("determined cells are placed"))
        } else {
            Err(Error::Undetermined {
                index: i,
                determined: self.determined,
            })
        }
    }

    pub fn positions_a(&self) -> &[usize] {
        &self.pa
    }

    pub fn positions_b(&self) -> &[usize] {
        &self.pb
    }

    /// Stream over the determined prefix; reading past it fails with `Undetermined`.
    pub fn to_stream(&self, description: &str) -> WordStream {
        WordStream::from_rule(
            Provenance::Reconstructed,
            format!("reconstruct({description})"),
            Determined {
                letters: self.determined_prefix().into_letters(),
            },
        )
    }
}

struct Determined {
    letters: Vec<Letter>,
}

impl Rule for Determined {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        let end = target.min(self.letters.len());
        if buf.len() < end {
            let start = buf.len();
            buf.extend_from_slice(&self.letters[start..end]);
        }
        if buf.len() < target {
            return Err(Error::Undetermined {
                index: buf.len(),
                determined: self.letters.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReconstructionOutcome {
    Success(PartialWord),
    Failure(Violation),
}

impl ReconstructionOutcome {
    pub fn word(&self) -> Option<&PartialWord> {
        match self {
            ReconstructionOutcome::Success(w) => Some(w),
            ReconstructionOutcome::Failure(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            ReconstructionOutcome::Success(_) => None,
            ReconstructionOutcome::Failure(v) => Some(v),
        }
    }
}

struct Placement {
    cells: Vec<Option<Letter>>,
    next_free: usize,
    pa: Vec<usize>,
    pb: Vec<usize>,
    budget: usize,
}

impl Placement {
    fn occupied(&self, i: usize) -> bool {
        self.cells.get(i).is_some_and(Option::is_some)
    }

    fn put(&mut self, i: usize, x: Letter) -> Result<()> {
        if i >= self.budget {
            return Err(Error::ResourceLimit {
                index: i,
                budget: self.budget,
            });
        }
        if self.cells.len() <= i {
            self.cells.resize(i + 1, None);
        }
        self.cells[i] = Some(x);
        Ok(())
    }

    fn advance(&mut self) {
        while self.occupied(self.next_free) {
            self.next_free += 1;
        }
    }
}

fn place_pairs(r: &RSpec, n_pairs: usize) -> Result<Result<Placement, Violation>> {
    let mut st = Placement {
        cells: Vec::new(),
        next_free: 0,
        pa: Vec::with_capacity(n_pairs),
        pb: Vec::with_capacity(n_pairs),
        budget: index_budget(),
    };
    for n in 1..=n_pairs {
        let v = r.value(n)?;
        let k = st.next_free;
        let fail = |condition, detail: String| Ok(Err(Violation { n, condition, detail }));
        if v == 0 {
            return fail(Condition::ZeroValue, "r(n) = 0".into());
        }
        let far = k
            .checked_add(v.unsigned_abs() as usize)
            .ok_or(Error::ResourceLimit {
                index: usize::MAX,
                budget: st.budget,
            })?;
        // `near` receives the letter placed at k, `far` the other one
        let (near_letter, condition) = if v > 0 {
            (Letter::A, Condition::Alpha)
        } else {
            (Letter::B, Condition::Beta)
        };
        if n > 1 {
            let (prev_near, prev_far) = match near_letter {
                Letter::A => (st.pa[n - 2], st.pb[n - 2]),
                Letter::B => (st.pb[n - 2], st.pa[n - 2]),
            };
            let (near_name, far_name) = match near_letter {
                Letter::A => ("p_a", "p_b"),
                Letter::B => ("p_b", "p_a"),
            };
            if k <= prev_near {
                return fail(
                    condition,
                    format!("k = {k} does not exceed {near_name}({}) = {prev_near}", n - 1),
                );
            }
            if far <= prev_far {
                return fail(
                    condition,
                    format!("{far_name}({n}) = {far} does not exceed {far_name}({}) = {prev_far}", n - 1),
                );
            }
            if st.occupied(far) {
                return fail(condition, format!("position {far} is already used"));
            }
        }
        st.put(k, near_letter)?;
        st.put(far, near_letter.flip())?;
        let (pa, pb) = if v > 0 { (k, far) } else { (far, k) };
        st.pa.push(pa);
        st.pb.push(pb);
        st.advance();
    }
    Ok(Ok(st))
}

/// Places the first `n_pairs` pairs and returns the resulting partial word,
/// or the first violated placement condition.
pub fn reconstruct(r: &RSpec, n_pairs: usize) -> Result<ReconstructionOutcome> {
    if n_pairs == 0 {
        return Err(Error::Parameter("reconstruction needs at least one pair".into()));
    }
    Ok(match place_pairs(r, n_pairs)? {
        Ok(st) => ReconstructionOutcome::Success(PartialWord {
            determined: st.next_free,
            cells: st.cells,
            pa: st.pa,
            pb: st.pb,
        }),
        Err(v) => ReconstructionOutcome::Failure(v),
    })
}

/// Dry run over `1..=n`; `None` means every pair could be placed.
pub fn validate(r: &RSpec, n: usize) -> Result<Option<Violation>> {
    Ok(reconstruct(r, n)?.violation().cloned())
}

pub fn relative_of(w: &WordStream) -> RSpec {
    RSpec::relative_of(w)
}

/// `(a^j b^j)^ω`, whose `r` is constantly `j`.
pub fn constant_r_word(j: usize) -> Result<WordStream> {
    if j == 0 {
        return Err(Error::Parameter("constant r needs j >= 1".into()));
    }
    let u = FiniteWord::repeat(Letter::A, j).concat(&FiniteWord::repeat(Letter::B, j));
    WordStream::periodic(&u)
}

/// Fixed point of `a → a^{k-j} b a^j, b → a`, whose `r(n) = k·n - j` for `0 <= j < k`.
pub fn linear_r_word(k: usize, j: usize) -> Result<WordStream> {
    if j >= k {
        return Err(Error::Parameter(format!("linear r needs 0 <= j < k, got k = {k}, j = {j}")));
    }
    BinarySubstitution::pisa(k - j, j, 1)?.fixed_point(Letter::A)
}

/// `D^q` of [`linear_r_word`]: `r(n) = k·n + q·k - j` for all large `n`.
pub fn eventually_linear_word(k: usize, j: usize, q: usize) -> Result<WordStream> {
    delete_pow(&linear_r_word(k, j)?, q)
}
