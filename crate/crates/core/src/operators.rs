//! Deletion, prefix and cloning operators on infinite words, and operator pipelines.

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, Result};
use crate::position::PositionSeries;
use crate::substitution::{fibonacci_switch, BinarySubstitution};
use crate::word::{pull_mapped, FiniteWord, Letter, Provenance, Rule, WordStream};

/// `D_x`: removes the first occurrence of `x`.
pub fn delete_first(w: &WordStream, x: Letter) -> Result<WordStream> {
    match x {
        Letter::A => delete_counts(w, 1, 0),
        Letter::B => delete_counts(w, 0, 1),
    }
}

/// `D = D_a ∘ D_b`.
pub fn delete(w: &WordStream) -> Result<WordStream> {
    delete_pow(w, 1)
}

/// `D^k`: removes the first `k` occurrences of each letter.
pub fn delete_pow(w: &WordStream, k: usize) -> Result<WordStream> {
    delete_counts(w, k, k)
}

/// Removes the first `count_a` letters `a` and the first `count_b` letters `b`.
pub fn delete_counts(w: &WordStream, count_a: usize, count_b: usize) -> Result<WordStream> {
    let mut deleted = Vec::with_capacity(count_a + count_b);
    for (x, count) in [(Letter::A, count_a), (Letter::B, count_b)] {
        if count > 0 {
            deleted.extend(PositionSeries::new(w, x).values(count)?);
        }
    }
    deleted.sort_unstable();
    let label = match (count_a, count_b) {
        (0, 0) => return Ok(w.clone()),
        (a, b) if a == b => format!("delete^{a}"),
        (a, 0) => format!("delete_a^{a}"),
        (0, b) => format!("delete_b^{b}"),
        (a, b) => format!("delete_a^{a} | delete_b^{b}"),
    };
    Ok(WordStream::from_rule(
        Provenance::OperatorDerived,
        format!("{} | {label}", w.descriptor()),
        Deletion {
            source: w.clone(),
            deleted,
            next_deleted: 0,
            src: 0,
        },
    ))
}

/// Output index `i` reads source index `i + #{deleted positions <= that index}`.
struct Deletion {
    source: WordStream,
    deleted: Vec<usize>,
    next_deleted: usize,
    src: usize,
}

impl Rule for Deletion {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while buf.len() < target {
            if self.deleted.get(self.next_deleted) == Some(&self.src) {
                self.next_deleted += 1;
            } else {
                buf.push(self.source.letter_at(self.src)?);
            }
            self.src += 1;
        }
        Ok(())
    }
}

/// `Pre_u(w) = u w`.
pub fn prefix_op(u: &FiniteWord, w: &WordStream) -> WordStream {
    WordStream::with_initial(
        Provenance::OperatorDerived,
        format!("{} | prefix:{u}", w.descriptor()),
        u.letters().to_vec(),
        Prepend {
            source: w.clone(),
            offset: u.len(),
        },
    )
}

struct Prepend {
    source: WordStream,
    offset: usize,
}

impl Rule for Prepend {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        pull_mapped(&self.source, buf, self.offset, target, |x| x)
    }
}

/// `φ_k(w)`.
pub fn clone_word(w: &WordStream, k: usize) -> Result<WordStream> {
    Ok(BinarySubstitution::clone_k(k)?.apply_stream(w))
}

/// One step of an operator pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operator {
    Reflect,
    /// `D^k`
    Delete(usize),
    /// `D_a^k`
    DeleteA(usize),
    /// `D_b^k`
    DeleteB(usize),
    Prefix(FiniteWord),
    Clone(usize),
    Apply(BinarySubstitution),
    /// Fibonacci tile switch.
    Switch,
}

impl Operator {
    pub fn apply(&self, w: &WordStream) -> Result<WordStream> {
        match self {
            Operator::Reflect => Ok(w.reflect()),
            Operator::Delete(k) => delete_pow(w, *k),
            Operator::DeleteA(k) => delete_counts(w, *k, 0),
            Operator::DeleteB(k) => delete_counts(w, 0, *k),
            Operator::Prefix(u) => Ok(prefix_op(u, w)),
            Operator::Clone(k) => clone_word(w, *k),
            Operator::Apply(s) => Ok(s.apply_stream(w)),
            Operator::Switch => Ok(fibonacci_switch(w)),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Reflect => write!(f, "reflect"),
            Operator::Delete(k) => write!(f, "delete^{k}"),
            Operator::DeleteA(k) => write!(f, "delete_a^{k}"),
            Operator::DeleteB(k) => write!(f, "delete_b^{k}"),
            Operator::Prefix(u) => write!(f, "prefix:{u}"),
            Operator::Clone(k) => write!(f, "clone:{k}"),
            Operator::Apply(s) => write!(f, "apply:{s}"),
            Operator::Switch => write!(f, "switch"),
        }
    }
}

const MAX_DELETIONS: usize = 1 << 20;

fn parse_count(input: &str, t: &str) -> Result<usize, ParseError> {
    let k: usize = t
        .trim()
        .parse()
        .map_err(|_| ParseError::new("operator", input, format!("bad count `{t}`")))?;
    if k > MAX_DELETIONS {
        return Err(ParseError::new("operator", input, "count too large"));
    }
    Ok(k)
}

impl FromStr for Operator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        if let Some(u) = t.strip_prefix("prefix:") {
            return Ok(Operator::Prefix(u.parse()?));
        }
        if let Some(spec) = t.strip_prefix("apply:") {
            return Ok(Operator::Apply(spec.parse()?));
        }
        if let Some(k) = t.strip_prefix("clone:") {
            let k = parse_count(s, k)?;
            if k < 2 {
                return Err(ParseError::new("operator", s, "cloning needs k >= 2"));
            }
            return Ok(Operator::Clone(k));
        }
        let (name, count) = match t.split_once('^') {
            Some((name, k)) => (name.trim(), parse_count(s, k)?),
            None => (t, 1),
        };
        match name {
            "reflect" if count == 1 => Ok(Operator::Reflect),
            "switch" if count == 1 => Ok(Operator::Switch),
            "delete" => Ok(Operator::Delete(count)),
            "delete_a" => Ok(Operator::DeleteA(count)),
            "delete_b" => Ok(Operator::DeleteB(count)),
            _ => Err(ParseError::new("operator", s, "unknown operator")),
        }
    }
}

/// Operators applied left to right, written `op | op | …`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pipeline(pub Vec<Operator>);

impl Pipeline {
    pub fn apply(&self, w: &WordStream) -> Result<WordStream> {
        self.0.iter().try_fold(w.clone(), |acc, op| op.apply(&acc))
    }
}

impl FromStr for Pipeline {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        if s.trim().is_empty() {
            return Ok(Pipeline::default());
        }
        s.split('|').map(str::parse).collect::<Result<_, _>>().map(Pipeline)
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Result of scanning an eventual identity over `1..=horizon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    /// Largest `n` where the identity fails, or 0.
    pub threshold: usize,
    pub horizon: usize,
}

impl Threshold {
    /// The identity held on at least `factor` times as many terms past the threshold
    /// as there are up to it.
    pub fn stable_for(&self, factor: usize) -> bool {
        self.horizon - self.threshold >= factor * self.threshold.max(1)
    }
}

pub fn locate_threshold(
    horizon: usize,
    mut holds: impl FnMut(usize) -> Result<bool>,
) -> Result<Threshold> {
    let mut threshold = 0;
    for n in 1..=horizon {
        if !holds(n)? {
            threshold = n;
        }
    }
    Ok(Threshold { threshold, horizon })
}

/// The `k` with `p_b(k) > p_a(1)` minimal, which splits how `D_a` shifts `p_b`.
pub fn first_b_after_first_a(w: &WordStream) -> Result<usize> {
    let pa1 = PositionSeries::new(w, Letter::A).get(1)?;
    let pb = PositionSeries::new(w, Letter::B);
    let mut k = 1;
    while pb.get(k)? <= pa1 {
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::position::RelativeSeries;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn periodic(s: &str) -> WordStream {
        WordStream::periodic(&w(s)).unwrap()
    }

    fn fib() -> WordStream {
        BinarySubstitution::fibonacci().fixed_point(Letter::A).unwrap()
    }

    #[test]
    fn delete_first_letters() {
        let ab = periodic("ab");
        assert_eq!(delete_first(&ab, Letter::A).unwrap().prefix(5).unwrap(), w("babab"));
        let f = fib();
        let ab_first = delete_first(&delete_first(&f, Letter::A).unwrap(), Letter::B).unwrap();
        let ba_first = delete_first(&delete_first(&f, Letter::B).unwrap(), Letter::A).unwrap();
        assert_eq!(ab_first.prefix(500).unwrap(), ba_first.prefix(500).unwrap());
        assert_eq!(delete(&f).unwrap().prefix(500).unwrap(), ab_first.prefix(500).unwrap());
    }

    #[test]
    fn delete_on_periodic_ab_is_identity() {
        let ab = periodic("ab");
        assert_eq!(delete(&ab).unwrap().prefix(100).unwrap(), ab.prefix(100).unwrap());
    }

    #[test]
    fn delete_shifts_positions() {
        let f = fib();
        let d = delete_first(&f, Letter::A).unwrap();
        let pa = PositionSeries::new(&f, Letter::A);
        let pd = PositionSeries::new(&d, Letter::A);
        for n in 1..500 {
            assert_eq!(pd.get(n).unwrap() + 1, pa.get(n + 1).unwrap());
        }
    }

    #[test]
    fn deleted_fibonacci_has_r_plus_one() {
        let r = RelativeSeries::new(&delete(&fib()).unwrap());
        assert_eq!(r.values(200).unwrap(), (2..=201).collect::<Vec<i64>>());
    }

    #[test]
    fn missing_letter_is_reported() {
        let a = periodic("a").with_budget(1000);
        assert!(matches!(
            delete_first(&a, Letter::B),
            Err(Error::OccurrenceNotFound { .. })
        ));
    }

    #[test]
    fn prefix_then_delete_is_identity() {
        let f = fib();
        for u in ["ab", "ba"] {
            let back = delete(&prefix_op(&w(u), &f)).unwrap();
            assert_eq!(back.prefix(300).unwrap(), f.prefix(300).unwrap());
        }
        let p = prefix_op(&w("abba"), &f);
        assert_eq!(p.prefix(6).unwrap(), w("abbaab"));
    }

    #[test]
    fn prefix_a_raises_r() {
        let f = fib();
        let r = RelativeSeries::new(&f);
        let ra = RelativeSeries::new(&prefix_op(&w("a"), &f));
        for n in 1..300 {
            assert!(ra.get(n).unwrap() > r.get(n).unwrap());
        }
    }

    #[test]
    fn clone_examples() {
        let tm = BinarySubstitution::thue_morse().fixed_point(Letter::A).unwrap();
        assert_eq!(clone_word(&tm, 2).unwrap().prefix(8).unwrap(), w("aabbbbaa"));
        assert!(clone_word(&tm, 1).is_err());
    }

    #[test]
    fn pipeline_parse_and_apply() {
        let p: Pipeline = "delete^3 | prefix:abba | reflect".parse().unwrap();
        assert_eq!(
            p.0,
            vec![Operator::Delete(3), Operator::Prefix(w("abba")), Operator::Reflect]
        );
        assert_eq!(p.to_string().parse::<Pipeline>().unwrap(), p);
        let out = p.apply(&fib()).unwrap();
        assert_eq!(out.prefix(4).unwrap(), w("baab"));
        assert!("".parse::<Pipeline>().unwrap().0.is_empty());
        for bad in ["delete^x", "reflect^2", "clone:1", "prefix:abc", "bogus", "apply:a->c;b->a"] {
            assert!(bad.parse::<Pipeline>().is_err(), "{bad}");
        }
    }

    #[test]
    fn thresholds() {
        let t = locate_threshold(100, |n| Ok(n > 7)).unwrap();
        assert_eq!(t.threshold, 7);
        assert!(t.stable_for(10));
        assert!(!locate_threshold(10, |n| Ok(n != 5)).unwrap().stable_for(10));
    }

    #[test]
    fn first_b_after_first_a_example() {
        // b a a b: p_a(1) = 1, p_b = 0, 3
        let x = periodic("baab");
        assert_eq!(first_b_after_first_a(&x).unwrap(), 2);
    }
}
