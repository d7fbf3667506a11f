//! Binary substitutions, their matrices, fixed points and named families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::word::{index_budget, FiniteWord, Letter, Provenance, Rule, WordStream};

/// Homomorphism of words over `{a, b}` given by the images of `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinarySubstitution {
    image_a: FiniteWord,
    image_b: FiniteWord,
}

/// Letter-count matrix; column `j` counts the letters of the image of letter `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SubstitutionMatrix {
    pub m11: u64,
    pub m12: u64,
    pub m21: u64,
    pub m22: u64,
}

fn word(s: &str) -> FiniteWord {
    s.parse().expect("literal word")
}

fn power_word(x: Letter, n: usize) -> FiniteWord {
    FiniteWord::repeat(x, n)
}

fn check_image_len(len: u128) -> Result<usize> {
    let budget = index_budget() as u128;
    if len > budget {
        return Err(Error::Parameter(format!(
            "image of {len} letters exceeds the index budget of {budget}"
        )));
    }
    Ok(len as usize)
}

impl BinarySubstitution {
    pub fn new(image_a: FiniteWord, image_b: FiniteWord) -> Self {
        Self { image_a, image_b }
    }

    pub fn identity() -> Self {
        Self::new(word("a"), word("b"))
    }

    /// a → ab, b → a
    pub fn fibonacci() -> Self {
        Self::new(word("ab"), word("a"))
    }

    /// a → ba, b → a
    pub fn iccanobif() -> Self {
        Self::new(word("ba"), word("a"))
    }

    /// a → ab, b → ba
    pub fn thue_morse() -> Self {
        Self::new(word("ab"), word("ba"))
    }

    /// a → ab, b → aa
    pub fn period_doubling() -> Self {
        Self::pisa(1, 0, 2).expect("valid parameters")
    }

    /// a → a^k b, b → a
    pub fn noble_means(k: usize) -> Result<Self> {
        Self::pisa(k, 0, 1)
    }

    /// a → a^k, b → b^k
    pub fn clone_k(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("cloning needs k >= 2, got {k}")));
        }
        let k = check_image_len(k as u128)?;
        Ok(Self::new(power_word(Letter::A, k), power_word(Letter::B, k)))
    }

    /// a → a^k b a^l, b → a^m
    pub fn pisa(k: usize, l: usize, m: usize) -> Result<Self> {
        if k < 1 || m < 1 {
            return Err(Error::Parameter(format!(
                "pisa parameters need k >= 1 and m >= 1, got ({k}, {l}, {m})"
            )));
        }
        check_image_len(k as u128 + l as u128 + 1)?;
        check_image_len(m as u128)?;
        let mut a = power_word(Letter::A, k);
        a.push(Letter::B);
        a.extend_from(&power_word(Letter::A, l));
        Ok(Self::new(a, power_word(Letter::A, m)))
    }

    /// a → a^{m+n} b^m, b → a^m b^n
    pub fn golden_family(m: usize, n: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::Parameter(format!("golden family needs m >= 1, got {m}")));
        }
        check_image_len(2 * m as u128 + n as u128)?;
        check_image_len(m as u128 + n as u128)?;
        let a = power_word(Letter::A, m + n).concat(&power_word(Letter::B, m));
        let b = power_word(Letter::A, m).concat(&power_word(Letter::B, n));
        Ok(Self::new(a, b))
    }

    pub fn image(&self, x: Letter) -> &FiniteWord {
        match x {
            Letter::A => &self.image_a,
            Letter::B => &self.image_b,
        }
    }

    pub fn apply_word(&self, u: &[Letter]) -> FiniteWord {
        let mut out = Vec::new();
        for &x in u {
            out.extend_from_slice(self.image(x));
        }
        FiniteWord::from(out)
    }

    /// Lazy image of an infinite word.
    pub fn apply_stream(&self, w: &WordStream) -> WordStream {
        WordStream::from_rule(
            Provenance::OperatorDerived,
            format!("{} | apply:{}", w.descriptor(), self),
            ApplyRule {
                source: w.clone(),
                images: self.images(),
                cursor: 0,
            },
        )
    }

    fn images(&self) -> [Vec<Letter>; 2] {
        [self.image_a.to_vec(), self.image_b.to_vec()]
    }

    pub fn matrix(&self) -> SubstitutionMatrix {
        let a = &self.image_a;
        let b = &self.image_b;
        SubstitutionMatrix {
            m11: a.count(Letter::A) as u64,
            m21: a.count(Letter::B) as u64,
            m12: b.count(Letter::A) as u64,
            m22: b.count(Letter::B) as u64,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &BinarySubstitution) -> BinarySubstitution {
        Self::new(
            self.apply_word(&other.image_a),
            self.apply_word(&other.image_b),
        )
    }

    /// `t`-fold composition, by repeated squaring.
    pub fn power(&self, t: usize) -> Result<BinarySubstitution> {
        if t == 0 {
            return Err(Error::Parameter("power needs t >= 1".into()));
        }
        let mut acc: Option<BinarySubstitution> = None;
        let mut base = self.clone();
        let mut t = t;
        loop {
            if t & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(acc) => acc.checked_compose(&base)?,
                });
            }
            t >>= 1;
            if t == 0 {
                return Ok(acc.expect("t >= 1 has a set bit"));
            }
            base = base.checked_compose(&base)?;
        }
    }

    fn checked_compose(&self, other: &BinarySubstitution) -> Result<BinarySubstitution> {
        check_image_len(self.image_len_after(&other.image_a))?;
        check_image_len(self.image_len_after(&other.image_b))?;
        Ok(self.compose(other))
    }

    fn image_len_after(&self, u: &[Letter]) -> u128 {
        let la = self.image_a.len() as u128;
        let lb = self.image_b.len() as u128;
        u.iter()
            .map(|&x| if x == Letter::A { la } else { lb })
            .sum()
    }

    /// `σ^n(x)`.
    pub fn supertile(&self, n: usize, x: Letter) -> Result<FiniteWord> {
        let mut w = FiniteWord::from(vec![x]);
        for _ in 0..n {
            check_image_len(self.image_len_after(&w))?;
            w = self.apply_word(&w);
        }
        Ok(w)
    }

    /// The substitution `x ↦ reflect(σ(reflect(x)))`.
    pub fn conjugate_tilde(&self) -> BinarySubstitution {
        Self::new(self.image_b.reflect(), self.image_a.reflect())
    }

    /// Limit of `σ^n(seed)`.
    pub fn fixed_point(&self, seed: Letter) -> Result<WordStream> {
        let img = self.image(seed);
        let usable = img.len() >= 2
            && img[0] == seed
            && !self.image_a.is_empty()
            && !self.image_b.is_empty();
        if !usable {
            return Err(Error::NoFixedPoint {
                substitution: self.to_string(),
                seed,
            });
        }
        Ok(WordStream::with_initial(
            Provenance::SubstitutionFixedPoint,
            format!("fixed:{self}@{seed}"),
            img.to_vec(),
            FixedPointRule {
                images: self.images(),
                cursor: 1,
            },
        ))
    }

    /// `(k, l, m)` when this is `a → a^k b a^l, b → a^m`.
    pub fn as_pisa(&self) -> Option<(usize, usize, usize)> {
        let m = self.image_b.len();
        if m == 0 || self.image_b.count(Letter::A) != m || self.image_a.count(Letter::B) != 1 {
            return None;
        }
        let k = self.image_a.iter().position(|&x| x == Letter::B)?;
        let l = self.image_a.len() - k - 1;
        (k >= 1).then_some((k, l, m))
    }
}

impl fmt::Display for BinarySubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a->{};b->{}", self.image_a, self.image_b)
    }
}

fn parse_params<const N: usize>(input: &str, body: &str) -> Result<[usize; N], ParseError> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(ParseError::new(
            "substitution",
            input,
            format!("expected {N} comma-separated parameters"),
        ));
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| ParseError::new("substitution", input, format!("bad parameter `{p}`")))?;
    }
    Ok(out)
}

fn parse_explicit(input: &str, body: &str) -> Result<BinarySubstitution, ParseError> {
    let mut a = None;
    let mut b = None;
    for rule in body.split(';') {
        let (lhs, rhs) = rule
            .split_once("->")
            .ok_or_else(|| ParseError::new("substitution", input, "expected `x->WORD`"))?;
        let image: FiniteWord = rhs.parse()?;
        let slot = match lhs.trim() {
            "a" => &mut a,
            "b" => &mut b,
            other => {
                return Err(ParseError::new(
                    "substitution",
                    input,
                    format!("unknown letter `{other}`"),
                ))
            }
        };
        if slot.replace(image).is_some() {
            return Err(ParseError::new("substitution", input, "letter defined twice"));
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok(BinarySubstitution::new(a, b)),
        _ => Err(ParseError::new("substitution", input, "both `a` and `b` need an image")),
    }
}

fn parse_base(input: &str, body: &str) -> Result<BinarySubstitution, ParseError> {
    let param_err = |e: Error| ParseError::new("substitution", input, e.to_string());
    if body.contains("->") {
        return parse_explicit(input, body);
    }
    let (name, params) = match body.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p)),
        None => (body.trim(), None),
    };
    match (name, params) {
        ("fibonacci" | "fib", None) => Ok(BinarySubstitution::fibonacci()),
        ("thue_morse" | "tm", None) => Ok(BinarySubstitution::thue_morse()),
        ("period_doubling" | "pd", None) => Ok(BinarySubstitution::period_doubling()),
        ("iccanobif", None) => Ok(BinarySubstitution::iccanobif()),
        ("identity", None) => Ok(BinarySubstitution::identity()),
        ("pisa", Some(p)) => {
            let [k, l, m] = parse_params(input, p)?;
            BinarySubstitution::pisa(k, l, m).map_err(param_err)
        }
        ("noble", Some(p)) => {
            let [k] = parse_params(input, p)?;
            BinarySubstitution::noble_means(k).map_err(param_err)
        }
        ("clone", Some(p)) => {
            let [k] = parse_params(input, p)?;
            BinarySubstitution::clone_k(k).map_err(param_err)
        }
        ("golden", Some(p)) => {
            let [m, n] = parse_params(input, p)?;
            BinarySubstitution::golden_family(m, n).map_err(param_err)
        }
        _ => Err(ParseError::new("substitution", input, "unknown substitution")),
    }
}

impl FromStr for BinarySubstitution {
    type Err = ParseError;

    /// Accepts `a->WORD;b->WORD` or a named family, optionally followed by `^t`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let trimmed = s.trim();
        let (body, exponent) = match trimmed.rsplit_once('^') {
            Some((body, t)) => {
                let t: usize = t
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new("substitution", s, "bad exponent"))?;
                (body, t)
            }
            None => (trimmed, 1),
        };
        let base = parse_base(s, body)?;
        base.power(exponent)
            .map_err(|e| ParseError::new("substitution", s, e.to_string()))
    }
}

impl SubstitutionMatrix {
    pub fn new(m11: u64, m12: u64, m21: u64, m22: u64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn rows(&self) -> [[u64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn trace(&self) -> i128 {
        self.m11 as i128 + self.m22 as i128
    }

    pub fn det(&self) -> i128 {
        self.m11 as i128 * self.m22 as i128 - self.m12 as i128 * self.m21 as i128
    }

    /// Image lengths `(|σ(a)|, |σ(b)|)`.
    pub fn column_sums(&self) -> (u64, u64) {
        (self.m11 + self.m21, self.m12 + self.m22)
    }

    pub fn checked_mul(&self, o: &SubstitutionMatrix) -> Option<SubstitutionMatrix> {
        let dot = |a: u64, b: u64, c: u64, d: u64| a.checked_mul(b)?.checked_add(c.checked_mul(d)?);
        Some(SubstitutionMatrix {
            m11: dot(self.m11, o.m11, self.m12, o.m21)?,
            m12: dot(self.m11, o.m12, self.m12, o.m22)?,
            m21: dot(self.m21, o.m11, self.m22, o.m21)?,
            m22: dot(self.m21, o.m12, self.m22, o.m22)?,
        })
    }

    /// Some power has all entries positive.
    pub fn is_primitive(&self) -> bool {
        let pattern = |m: &SubstitutionMatrix| {
            SubstitutionMatrix::new(
                (m.m11 > 0) as u64,
                (m.m12 > 0) as u64,
                (m.m21 > 0) as u64,
                (m.m22 > 0) as u64,
            )
        };
        let base = pattern(self);
        let mut p = base;
        for _ in 0..4 {
            if p.m11 > 0 && p.m12 > 0 && p.m21 > 0 && p.m22 > 0 {
                return true;
            }
            p = pattern(&p.checked_mul(&base).expect("0/1 entries"));
        }
        false
    }
}

impl std::ops::Mul for SubstitutionMatrix {
    type Output = SubstitutionMatrix;

    fn mul(self, rhs: SubstitutionMatrix) -> SubstitutionMatrix {
        self.checked_mul(&rhs).expect("matrix product overflows u64")
    }
}

impl fmt::Display for SubstitutionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m11, self.m12, self.m21, self.m22)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PisotStatus {
    /// `m < k + l + 1`
    Pisot,
    /// `m = k + l + 1`: eigenvalues `k + l + 1` and `-1`.
    UnitConjugate,
    NotPisot,
}

fn check_pisa(k: usize, m: usize) -> Result<()> {
    if k < 1 || m < 1 {
        return Err(Error::Parameter(format!(
            "pisa parameters need k >= 1 and m >= 1, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

/// `m < k + l + 1`.
pub fn pisa_is_pisot(k: usize, l: usize, m: usize) -> Result<bool> {
    Ok(pisa_pisot_status(k, l, m)? == PisotStatus::Pisot)
}

pub fn pisa_pisot_status(k: usize, l: usize, m: usize) -> Result<PisotStatus> {
    check_pisa(k, m)?;
    let j = k as u128 + l as u128 + 1;
    Ok(match (m as u128).cmp(&j) {
        std::cmp::Ordering::Less => PisotStatus::Pisot,
        std::cmp::Ordering::Equal => PisotStatus::UnitConjugate,
        std::cmp::Ordering::Greater => PisotStatus::NotPisot,
    })
}

struct FixedPointRule {
    images: [Vec<Letter>; 2],
    cursor: usize,
}

impl Rule for FixedPointRule {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        // buf is the image of buf[..cursor]; reading ahead keeps it a prefix of the fixed point
        while buf.len() < target {
            let x = buf[self.cursor];
            buf.extend_from_slice(&self.images[x.index()]);
            self.cursor += 1;
        }
        Ok(())
    }
}

struct ApplyRule {
    source: WordStream,
    images: [Vec<Letter>; 2],
    cursor: usize,
}

impl Rule for ApplyRule {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while buf.len() < target {
            let x = self.source.letter_at(self.cursor)?;
            buf.extend_from_slice(&self.images[x.index()]);
            self.cursor += 1;
        }
        Ok(())
    }
}

/// Re-tiles the Fibonacci word: each `aba = σ²(a)` becomes `aab`, each `ab = σ²(b)` stays `ab`.
pub fn fibonacci_switch(f: &WordStream) -> WordStream {
    WordStream::from_rule(
        Provenance::OperatorDerived,
        format!("{} | switch", f.descriptor()),
        SwitchRule {
            source: f.clone(),
            pos: 0,
        },
    )
}

struct SwitchRule {
    source: WordStream,
    pos: usize,
}

impl Rule for SwitchRule {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        use Letter::{A, B};
        while buf.len() < target {
            let p = self.pos;
            let window = self.source.slice(p..p + 4)?;
            let malformed = Error::MalformedSupertile { position: p };
            if window[0] != A || window[1] != B {
                return Err(malformed);
            }
            // both tiles start with `ab`, so one letter past the longer tile decides
            match (window[2], window[3]) {
                (A, A) => {
                    buf.extend_from_slice(&[A, A, B]);
                    self.pos += 3;
                }
                (A, B) => {
                    buf.extend_from_slice(&[A, B]);
                    self.pos += 2;
                }
                _ => return Err(malformed),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    fn sub(s: &str) -> BinarySubstitution {
        s.parse().unwrap()
    }

    #[test]
    fn apply_on_words() {
        assert_eq!(BinarySubstitution::thue_morse().apply_word(&w("ab")), w("abba"));
        assert_eq!(BinarySubstitution::fibonacci().apply_word(&w("a")), w("ab"));
        let id = BinarySubstitution::identity();
        assert_eq!(id.apply_word(&w("abbab")), w("abbab"));
    }

    #[test]
    fn matrices() {
        assert_eq!(
            BinarySubstitution::fibonacci().matrix(),
            SubstitutionMatrix::new(1, 1, 1, 0)
        );
        let (k, l, m) = (2, 3, 4);
        let p = BinarySubstitution::pisa(k, l, m).unwrap().matrix();
        assert_eq!(p, SubstitutionMatrix::new((k + l) as u64, m as u64, 1, 0));
        assert_eq!(
            BinarySubstitution::clone_k(3).unwrap().matrix(),
            SubstitutionMatrix::new(3, 0, 0, 3)
        );
        assert_eq!(
            BinarySubstitution::golden_family(2, 1).unwrap().matrix(),
            SubstitutionMatrix::new(3, 2, 2, 1)
        );
    }

    #[test]
    fn primitivity() {
        assert!(SubstitutionMatrix::new(1, 1, 1, 0).is_primitive());
        assert!(!SubstitutionMatrix::new(2, 0, 0, 2).is_primitive());
        assert!(SubstitutionMatrix::new(1, 1, 1, 1).is_primitive());
        assert!(!SubstitutionMatrix::new(1, 1, 0, 1).is_primitive());
        assert!(SubstitutionMatrix::new(0, 1, 1, 1).is_primitive());
    }

    #[test]
    fn fixed_points() {
        let f = BinarySubstitution::fibonacci().fixed_point(Letter::A).unwrap();
        assert_eq!(f.prefix(8).unwrap(), w("abaababa"));
        assert_eq!(f.letter_at(3).unwrap(), Letter::A);
        let tm = BinarySubstitution::thue_morse().fixed_point(Letter::A).unwrap();
        assert_eq!(tm.prefix(8).unwrap(), w("abbabaab"));
        let pd = BinarySubstitution::period_doubling().fixed_point(Letter::A).unwrap();
        assert_eq!(pd.prefix(12).unwrap(), w("abaaabababaa"));
        assert!(matches!(
            BinarySubstitution::iccanobif().fixed_point(Letter::A),
            Err(Error::NoFixedPoint { .. })
        ));
        assert!(BinarySubstitution::fibonacci().fixed_point(Letter::B).is_err());
    }

    #[test]
    fn fixed_point_matches_iterated_images() {
        let s = sub("a->aab;b->ba");
        let fp = s.fixed_point(Letter::A).unwrap();
        let a6 = s.supertile(6, Letter::A).unwrap();
        assert_eq!(fp.prefix(a6.len()).unwrap(), a6);
    }

    #[test]
    fn powers_and_supertiles() {
        let f = BinarySubstitution::fibonacci();
        assert_eq!(f.power(2).unwrap().image(Letter::A), &w("aba"));
        assert_eq!(f.power(1).unwrap(), f);
        assert!(f.power(0).is_err());
        assert_eq!(f.power(7).unwrap(), (1..7).fold(f.clone(), |acc, _| acc.compose(&f)));
        // erasing images never trip the length guard, so large exponents must stay cheap
        let erasing = sub("a->bbb;b->^8555555124");
        assert!(erasing.image(Letter::A).is_empty());
        assert!("a->ab;b->a^100".parse::<BinarySubstitution>().is_err());
        assert_eq!(f.supertile(2, Letter::B).unwrap(), w("ab"));
        assert_eq!(f.supertile(1, Letter::B).unwrap(), w("a"));
        assert_eq!(f.supertile(0, Letter::A).unwrap(), w("a"));
        let sq = BinarySubstitution::iccanobif().power(2).unwrap();
        let fp = sq.fixed_point(Letter::A).unwrap();
        let fib = f.fixed_point(Letter::A).unwrap();
        assert_eq!(
            fp.prefix(200).unwrap(),
            w("ab").concat(&fib.prefix(198).unwrap())
        );
    }

    #[test]
    fn conjugate_tilde_examples() {
        let tm = BinarySubstitution::thue_morse();
        assert_eq!(tm.conjugate_tilde(), tm);
        let f = BinarySubstitution::fibonacci();
        assert_eq!(f.conjugate_tilde(), sub("a->b;b->ba"));
        assert_eq!(f.conjugate_tilde().conjugate_tilde(), f);
    }

    #[test]
    fn named_families() {
        assert_eq!(BinarySubstitution::pisa(1, 0, 1).unwrap(), BinarySubstitution::fibonacci());
        assert_eq!(BinarySubstitution::period_doubling(), sub("a->ab;b->aa"));
        assert_eq!(BinarySubstitution::pisa(2, 0, 2).unwrap().image(Letter::A), &w("aab"));
        assert_eq!(BinarySubstitution::golden_family(1, 0).unwrap(), BinarySubstitution::fibonacci());
        assert_eq!(BinarySubstitution::noble_means(3).unwrap(), sub("a->aaab;b->a"));
        assert_eq!(BinarySubstitution::clone_k(3).unwrap().image(Letter::A), &w("aaa"));
        assert!(BinarySubstitution::clone_k(1).is_err());
        assert!(BinarySubstitution::pisa(0, 1, 1).is_err());
        assert!(BinarySubstitution::pisa(1, 1, 0).is_err());
        assert!(BinarySubstitution::golden_family(0, 1).is_err());
    }

    #[test]
    fn clone_doubles_periodic_word() {
        let ab = WordStream::periodic(&w("ab")).unwrap();
        let c = BinarySubstitution::clone_k(2).unwrap().apply_stream(&ab);
        let aabb = WordStream::periodic(&w("aabb")).unwrap();
        assert_eq!(c.prefix(400).unwrap(), aabb.prefix(400).unwrap());
    }

    #[test]
    fn pisot_predicate() {
        assert!(pisa_is_pisot(1, 0, 1).unwrap());
        assert!(!pisa_is_pisot(1, 0, 2).unwrap());
        assert_eq!(pisa_pisot_status(1, 0, 2).unwrap(), PisotStatus::UnitConjugate);
        assert!(pisa_is_pisot(3, 1, 2).unwrap());
        assert_eq!(pisa_pisot_status(1, 0, 5).unwrap(), PisotStatus::NotPisot);
    }

    #[test]
    fn parse_formats() {
        assert_eq!(sub("a->ab;b->a"), BinarySubstitution::fibonacci());
        assert_eq!(sub(" b -> ba ; a -> ab "), BinarySubstitution::thue_morse());
        assert_eq!(sub("fibonacci"), BinarySubstitution::fibonacci());
        assert_eq!(sub("pisa:1,0,2"), BinarySubstitution::period_doubling());
        assert_eq!(sub("noble:2"), BinarySubstitution::noble_means(2).unwrap());
        assert_eq!(sub("golden:1,1"), BinarySubstitution::golden_family(1, 1).unwrap());
        assert_eq!(sub("iccanobif^2"), BinarySubstitution::iccanobif().power(2).unwrap());
        assert_eq!(sub("a->;b->b").image(Letter::A), &FiniteWord::new());
        for bad in ["", "a->ab", "a->ab;a->b", "c->a;b->a", "pisa:1,2", "fib^0", "clone:1", "a->abc;b->a"] {
            assert!(bad.parse::<BinarySubstitution>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["fibonacci", "tm", "pisa:2,1,3", "golden:2,1", "a->;b->ab"] {
            let x = sub(s);
            assert_eq!(sub(&x.to_string()), x);
        }
    }

    #[test]
    fn as_pisa_detects_shape() {
        assert_eq!(BinarySubstitution::pisa(2, 1, 3).unwrap().as_pisa(), Some((2, 1, 3)));
        assert_eq!(BinarySubstitution::thue_morse().as_pisa(), None);
        assert_eq!(sub("a->ba;b->a").as_pisa(), None);
    }

    #[test]
    fn switch_on_fibonacci() {
        let f = BinarySubstitution::fibonacci().fixed_point(Letter::A).unwrap();
        let s = fibonacci_switch(&f);
        assert_eq!(s.prefix(12).unwrap(), w("aababaabaaba"));
        let bad = WordStream::periodic(&w("abb")).unwrap();
        assert!(matches!(
            fibonacci_switch(&bad).letter_at(0),
            Err(Error::MalformedSupertile { position: 0 })
        ));
    }

    #[test]
    fn golden_products_stay_golden() {
        let g = |m, n| BinarySubstitution::golden_family(m, n).unwrap();
        let p = g(2, 1).compose(&g(1, 3)).matrix();
        let (m, n) = (p.m12, p.m22);
        assert_eq!(p.m21, m);
        assert_eq!(p.m11, m + n);
    }
}
