//! Text descriptions of words: a source followed by an operator pipeline.
//!
//! ```text
//! periodic:aab
//! fib
//! tm | clone:2
//! fixed:a->aab;b->ba@a | delete^2 | prefix:ab
//! pisa:2,0,2@a
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, Result};
use crate::operators::Pipeline;
use crate::substitution::BinarySubstitution;
use crate::word::{FiniteWord, Letter, WordStream};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Periodic(FiniteWord),
    FixedPoint { substitution: BinarySubstitution, seed: Letter },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSpec {
    pub source: Source,
    pub pipeline: Pipeline,
}

impl WordSpec {
    pub fn build(&self) -> Result<WordStream> {
        let base = match &self.source {
            Source::Periodic(u) => WordStream::periodic(u)?,
            Source::FixedPoint { substitution, seed } => substitution.fixed_point(*seed)?,
        };
        self.pipeline.apply(&base)
    }
}

fn parse_source(input: &str, s: &str) -> Result<Source, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseError::new("word spec", input, "missing source"));
    }
    if let Some(u) = s.strip_prefix("periodic:") {
        return Ok(Source::Periodic(u.parse()?));
    }
    let body = s.strip_prefix("fixed:").unwrap_or(s);
    let (subst, seed) = match body.rsplit_once('@') {
        Some((subst, seed)) => (subst, seed.parse()?),
        None => (body, Letter::A),
    };
    Ok(Source::FixedPoint {
        substitution: subst.parse()?,
        seed,
    })
}

impl FromStr for WordSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (source, rest) = match s.split_once('|') {
            Some((_, rest)) if rest.trim().is_empty() => {
                return Err(ParseError::new("word spec", s, "empty operator after `|`"));
            }
            Some((source, rest)) => (source, rest),
            None => (s, ""),
        };
        let source = parse_source(s, source)?;
        Ok(WordSpec {
            source,
            pipeline: rest.parse()?,
        })
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Periodic(u) => write!(f, "periodic:{u}")?,
            Source::FixedPoint { substitution, seed } => write!(f, "fixed:{substitution}@{seed}")?,
        }
        if !self.pipeline.0.is_empty() {
            write!(f, " | {}", self.pipeline)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(spec: &str, n: usize) -> String {
        spec.parse::<WordSpec>().unwrap().build().unwrap().prefix(n).unwrap().to_string()
    }

    #[test]
    fn sources() {
        assert_eq!(gen("fib", 8), "abaababa");
        assert_eq!(gen("periodic:aab", 6), "aabaab");
        assert_eq!(gen("tm", 8), "abbabaab");
        assert_eq!(gen("fixed:a->ab;b->a@a", 5), "abaab");
        assert_eq!(gen("tm@b", 4), "baab");
        assert_eq!(gen("pd", 12), "abaaabababaa");
    }

    #[test]
    fn pipelines() {
        assert_eq!(gen("tm | clone:2", 8), "aabbbbaa");
        assert_eq!(gen("fib | prefix:ab", 6), "ababaa");
        assert_eq!(gen("periodic:ab | reflect", 4), "baba");
    }

    #[test]
    fn errors() {
        for bad in ["", "periodic:", "nope", "fib |", "fib | explode", "fib@c", "iccanobif"] {
            let parsed = bad.parse::<WordSpec>();
            let built = parsed.as_ref().map(|w| w.build());
            assert!(
                parsed.is_err() || matches!(built, Ok(Err(_))),
                "`{bad}` should be rejected"
            );
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["fib", "periodic:abba | delete^2", "pisa:2,0,2 | clone:3 | switch"] {
            let w: WordSpec = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<WordSpec>().unwrap(), w);
        }
    }
}
