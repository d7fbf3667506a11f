//! Exhaustive searches over finite words with constraint pruning.
//!
//! Both searches decide properties of infinite words through finite
//! prefixes, so their acceptance conditions are chosen to reject prefixes that
//! only satisfy the constraint because the word is too short to contradict it.

use std::collections::BTreeSet;

use crate::word::{FiniteWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    /// Distinct surviving prefixes, sorted.
    pub survivors: Vec<FiniteWord>,
    /// Search-tree nodes visited.
    pub nodes: usize,
}

/// Partial map `letter -> Δp_x(n)` read off `x`, or `None` when `Δp_x(n)` is
/// not a function of `x[n-1]`.
fn difference_coding(x: &[Letter], target: Letter) -> Option<[Option<usize>; 2]> {
    let mut code = [None; 2];
    let positions: Vec<usize> = (0..x.len()).filter(|&i| x[i] == target).collect();
    for (n, pair) in positions.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        let slot = &mut code[x[n].index()];
        match *slot {
            Some(v) if v != gap => return None,
            _ => *slot = Some(gap),
        }
    }
    Some(code)
}

fn fib_uni_dfs(x: &mut Vec<Letter>, len: usize, out: &mut BTreeSet<Vec<Letter>>, nodes: &mut usize) {
    *nodes += 1;
    let Some(ca) = difference_coding(x, Letter::A) else { return };
    let Some(cb) = difference_coding(x, Letter::B) else { return };
    if x.len() == len {
        let usable = |c: [Option<usize>; 2]| {
            c.iter().all(Option::is_some) && c.iter().any(|v| *v != Some(1))
        };
        if usable(ca) && usable(cb) {
            out.insert(x.clone());
        }
        return;
    }
    for next in Letter::BOTH {
        x.push(next);
        fib_uni_dfs(x, len, out, nodes);
        x.pop();
    }
}

/// Words of length `len` starting with `a` whose `Δp_a` and `Δp_b` are both
/// codings of the word itself (`Δp_x(n)` depends only on the `n`-th letter).
///
/// A survivor must have seen both letters in both codings and neither coding
/// may be constantly 1, which rules out prefixes such as `a^len` or `a^(len-1)b`
/// that carry too few occurrences to be constrained.
pub fn fib_uni_survivors(len: usize) -> SearchReport {
    let mut out = BTreeSet::new();
    let mut nodes = 0;
    if len > 0 {
        fib_uni_dfs(&mut vec![Letter::A], len, &mut out, &mut nodes);
    }
    SearchReport {
        survivors: out.into_iter().map(FiniteWord::from_letters).collect(),
        nodes,
    }
}

struct SelfR {
    len: usize,
    k: i64,
    cap: usize,
    pa: Vec<usize>,
    pb: Vec<usize>,
    x: Vec<Letter>,
    out: BTreeSet<Vec<Letter>>,
    nodes: usize,
}

impl SelfR {
    fn expected(&self, n: usize) -> i64 {
        match self.x[n] {
            Letter::A => self.k,
            Letter::B => -self.k,
        }
    }

    /// Checks the pair that the last letter completed, if any.
    fn last_pair_ok(&self) -> bool {
        let n = self.pa.len().min(self.pb.len());
        if n == 0 || n > self.len {
            return true;
        }
        let just_completed = match self.x.last() {
            Some(Letter::A) => self.pa.len() == n,
            Some(Letter::B) => self.pb.len() == n,
            None => false,
        };
        if !just_completed {
            return true;
        }
        let i = n - 1;
        self.pb[i] as i64 - self.pa[i] as i64 == self.expected(i)
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if !self.last_pair_ok() {
            return;
        }
        if self.pa.len() >= self.len && self.pb.len() >= self.len {
            self.out.insert(self.x[..self.len].to_vec());
            return;
        }
        if self.x.len() >= self.cap {
            return;
        }
        for next in Letter::BOTH {
            let i = self.x.len();
            self.x.push(next);
            match next {
                Letter::A => self.pa.push(i),
                Letter::B => self.pb.push(i),
            }
            self.dfs();
            match next {
                Letter::A => self.pa.pop(),
                Letter::B => self.pb.pop(),
            };
            self.x.pop();
        }
    }
}

/// Prefixes of length `len` (starting with `a`) of words `x` with
/// `r(n) = k` when `x[n-1] = a` and `r(n) = -k` when `x[n-1] = b`, for all
/// `n <= len`.
///
/// A branch is accepted once it has `len` occurrences of each letter, so the
/// first `len` values of `r` are all checked; branches longer than `4·len·k`
/// letters are abandoned.
pub fn self_r_survivors(len: usize, k: usize) -> SearchReport {
    let mut s = SelfR {
        len,
        k: k as i64,
        cap: 4 * len * k.max(1),
        pa: vec![0],
        pb: Vec::new(),
        x: vec![Letter::A],
        out: BTreeSet::new(),
        nodes: 0,
    };
    if len > 0 {
        s.dfs();
    }
    SearchReport {
        survivors: s.out.into_iter().map(FiniteWord::from_letters).collect(),
        nodes: s.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn fib_uni_small() {
        let report = fib_uni_survivors(12);
        assert_eq!(report.survivors, vec![w("abaababaabaa"), w("abababababab")]);
    }

    #[test]
    fn tm_self_r_small() {
        let report = self_r_survivors(8, 1);
        assert_eq!(report.survivors, vec![w("abbabaab")]);
        let cloned = self_r_survivors(8, 2);
        assert_eq!(cloned.survivors, vec![w("aabbbbaa")]);
    }

    #[test]
    fn coding_detects_conflicts() {
        let x: Vec<Letter> = w("aab").letters().to_vec();
        // Δp_a(1) = 1 follows x[0] = a; no conflict yet
        assert_eq!(difference_coding(&x, Letter::A), Some([Some(1), None]));
        let y: Vec<Letter> = w("aaba").letters().to_vec();
        // Δp_a(2) = 2 follows x[1] = a, contradicting Δp_a(1) = 1
        assert_eq!(difference_coding(&y, Letter::A), None);
    }
}
