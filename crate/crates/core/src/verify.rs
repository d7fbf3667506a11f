//! Registry of checkable identities, each run at a chosen scale and reported
//! as a [`Certificate`].

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::operators::{delete, delete_first, delete_pow, first_b_after_first_a, locate_threshold, prefix_op};
use crate::position::{empirical_ratio, runs, PositionSeries, RatioKind, RelativeSeries};
use crate::reconstruct::{
    constant_r_word, eventually_linear_word, linear_r_word, reconstruct, RSpec, ReconstructionOutcome,
};
use crate::search::{fib_uni_survivors, self_r_survivors};
use crate::spectral::{
    classify_golden, classify_linear_limit, classify_tau_jm, classify_tau_k, freq_transfer,
    freq_transfer_inverse, is_right_eigenvector, pf_data, pisa_closed_form, predicted_limits, tau_jm,
    tau_k, QuadraticNumber,
};
use crate::substitution::{fibonacci_switch, BinarySubstitution, SubstitutionMatrix};
use crate::word::{FiniteWord, Letter, WordStream};

/// Size knobs; `None` picks each check's default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    /// Number of series terms.
    pub n: Option<usize>,
    /// Word length for exhaustive searches.
    pub len: Option<usize>,
    pub seed: u64,
}

impl Default for Scale {
    fn default() -> Self {
        Scale {
            n: None,
            len: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub id: &'static str,
    pub passed: bool,
    /// Number of individual equalities or instances checked.
    pub checked: usize,
    pub detail: String,
}

pub struct Theorem {
    pub id: &'static str,
    pub statement: &'static str,
    run: fn(&Scale) -> Result<Tally>,
}

impl Theorem {
    pub fn run(&self, scale: &Scale) -> Result<Certificate> {
        let tally = (self.run)(scale)?;
        Ok(Certificate {
            id: self.id,
            passed: tally.failure.is_none(),
            checked: tally.checked,
            detail: tally.failure.unwrap_or(tally.note),
        })
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failure: Option<String>,
    note: String,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, || format!("{what}: got {got:?}, expected {want:?}"));
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

pub static THEOREMS: &[Theorem] = &[
    Theorem { id: "fib-law", statement: "Fibonacci word: r(n) = n, Δp_a is the coding a→2, b→1 and Δp_b the coding a→3, b→2", run: fib_law },
    Theorem { id: "tm-fixed-point", statement: "Thue–Morse word: r(n) = +1 if the (n-1)-th letter is a, else -1", run: tm_fixed_point },
    Theorem { id: "tm-clone", statement: "φ_k(Thue–Morse), k = 2, 3: r(n) = ±k according to the (n-1)-th letter", run: tm_clone },
    Theorem { id: "fib-uni", statement: "only the Fibonacci and (ab)^ω prefixes have Δp_a and Δp_b as codings of themselves", run: fib_uni },
    Theorem { id: "tm-uni", statement: "only the Thue–Morse prefix equals its own ±1 relative position sequence", run: tm_uni },
    Theorem { id: "periodic-differences", statement: "difference sequences of (ab)^ω, (aab)^ω, (abba)^ω, (aabb)^ω", run: periodic_differences },
    Theorem { id: "pisa-closed-form", statement: "σ_{k,l,m} fixed point: p_b(n) = m·p_a(n) + (k+l+1-m)·n + m-l-1", run: pisa_closed },
    Theorem { id: "pisa-equivalence", statement: "σ_{k,l,m}: frequencies and slopes agree with the τ_{k+l,m} formulas", run: pisa_equivalence },
    Theorem { id: "fib-plus-one", statement: "r_{D(f)}(n) = n + 1", run: fib_plus_one },
    Theorem { id: "fib-k", statement: "r_{D^k(f)}(n) = n + k for large n, k <= 5", run: fib_k },
    Theorem { id: "iccanobif", statement: "iccanobiF conjugations and the fixed points Pre_ab(f), Pre_ba(f) of its square", run: iccanobif },
    Theorem { id: "fib-switch", statement: "switching level-2 Fibonacci tiles aba→aab, ab→ab yields D(f)", run: fib_switch },
    Theorem { id: "linear-r", statement: "exact and eventual linear relative position functions r(n) = kn + c", run: linear_r },
    Theorem { id: "reconstruct-roundtrip", statement: "reconstructing from r recovers the determined prefix of the word", run: reconstruct_roundtrip },
    Theorem { id: "deletion-positions", statement: "D_a shifts p_a by one index and p_b by one position from the first b after the first a", run: deletion_positions },
    Theorem { id: "shift-law", statement: "r_{D^k(w)}(n) = r_w(n+k) eventually, and for all n with k = 1 when w starts ab or ba", run: shift_law },
    Theorem { id: "balanced-prefix", statement: "balanced u of length 2k: r_{uw}(n+k) = r_w(n); D^k∘Pre_u = Id iff u is balanced", run: balanced_prefix },
    Theorem { id: "cloning", statement: "r_{φ_k(w)}(mk+j) = k·r_w(m+1) for 1 <= j <= k", run: cloning },
    Theorem { id: "reflection", statement: "r of the reflected word is -r, and D commutes with reflection", run: reflection },
    Theorem { id: "run-bounds", statement: "runs at most c: c(1-n)+1 <= r(n) <= cn, p_a(n) <= (c+1)(n-1), p_b(n) <= (c+1)n-1; no bb gives Δr >= 0", run: run_bounds },
    Theorem { id: "periodicity", statement: "u^ω with k a's and j b's: Δp_a is k-periodic, Δp_b j-periodic, Δr lcm(k,j)-periodic", run: periodicity },
    Theorem { id: "dimer", statement: "words built from dimers ab, ba: r(n) = 1 iff the (n-1)-th dimer is ab", run: dimer },
    Theorem { id: "spectral-eigen", statement: "M·[u 1]ᵀ = λ·[u 1]ᵀ exactly and λ² = tr·λ - det for primitive M", run: spectral_eigen },
    Theorem { id: "freq-transfer", statement: "letter frequencies of σ(w) follow M_σ·f, and the inverse map recovers f", run: freq_transfer_check },
    Theorem { id: "classification", statement: "matrix-form classifiers agree with exact eigenvector checks", run: classification },
];

pub fn find(id: &str) -> Option<&'static Theorem> {
    THEOREMS.iter().find(|t| t.id == id)
}

fn rng(scale: &Scale) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(scale.seed)
}

fn fib() -> Result<WordStream> {
    BinarySubstitution::fibonacci().fixed_point(Letter::A)
}

fn tm() -> Result<WordStream> {
    BinarySubstitution::thue_morse().fixed_point(Letter::A)
}

fn rvals(w: &WordStream, n: usize) -> Result<Vec<i64>> {
    RelativeSeries::new(w).values(n)
}

fn positions(w: &WordStream, x: Letter, n: usize) -> Result<Vec<i64>> {
    Ok(PositionSeries::new(w, x).values(n)?.into_iter().map(|p| p as i64).collect())
}

fn diffs(v: &[i64]) -> Vec<i64> {
    v.windows(2).map(|p| p[1] - p[0]).collect()
}

fn random_letters(rng: &mut ChaCha8Rng, len: usize) -> FiniteWord {
    (0..len).map(|_| if rng.gen_bool(0.5) { Letter::A } else { Letter::B }).collect()
}

/// Random word with both letters: a random period containing both, or the
/// fixed point of a random substitution `a → a…b…`, `b → …a…`.
fn random_word(rng: &mut ChaCha8Rng) -> Result<WordStream> {
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(2..=8);
        let mut u = random_letters(rng, len).into_letters();
        let i = rng.gen_range(0..len);
        let x = u[i];
        u[(i + 1) % len] = x.flip();
        WordStream::periodic(&FiniteWord::from_letters(u))
    } else {
        random_fixed_point(rng)
    }
}

fn random_fixed_point(rng: &mut ChaCha8Rng) -> Result<WordStream> {
    let tail_len = rng.gen_range(1..=4);
    let mut tail = random_letters(rng, tail_len).into_letters();
    let i = rng.gen_range(0..tail_len);
    tail[i] = Letter::B;
    let mut image_a = vec![Letter::A];
    image_a.extend(tail);
    let b_len = rng.gen_range(1..=4);
    let mut image_b = random_letters(rng, b_len).into_letters();
    let i = rng.gen_range(0..b_len);
    image_b[i] = Letter::A;
    let image_b = FiniteWord::from_letters(image_b);
    BinarySubstitution::new(FiniteWord::from_letters(image_a), image_b).fixed_point(Letter::A)
}

fn random_word_starting_a(rng: &mut ChaCha8Rng) -> Result<WordStream> {
    let w = random_word(rng)?;
    Ok(if w.letter_at(0)? == Letter::A { w } else { w.reflect() })
}

fn fib_law(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(100_000);
    let f = fib()?;
    let mut t = Tally::default();
    let r = rvals(&f, n)?;
    let expected: Vec<i64> = (1..=n as i64).collect();
    t.eq("r(1..=n)", r == expected, true);
    let x = f.prefix(n)?;
    let da = diffs(&positions(&f, Letter::A, n + 1)?);
    let db = diffs(&positions(&f, Letter::B, n + 1)?);
    t.eq("Δp_a vs coding a→2, b→1", da, x.coding(2, 1));
    t.eq("Δp_b vs coding a→3, b→2", db, x.coding(3, 2));
    Ok(t.note(format!("{n} terms of r, Δp_a and Δp_b")))
}

fn self_r_check(t: &mut Tally, w: &WordStream, k: i64, n: usize) -> Result<()> {
    let r = rvals(w, n)?;
    let code = w.prefix(n)?.coding(k, -k);
    let at = r.iter().zip(&code).position(|(x, y)| x != y);
    t.check(at.is_none(), || format!("r({}) differs from the ±{k} coding", at.unwrap_or(0) + 1));
    Ok(())
}

fn tm_fixed_point(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(100_000);
    let mut t = Tally::default();
    self_r_check(&mut t, &tm()?, 1, n)?;
    Ok(t.note(format!("{n} terms")))
}

fn tm_clone(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(10_000);
    let mut t = Tally::default();
    for k in [2usize, 3] {
        let w = crate::operators::clone_word(&tm()?, k)?;
        self_r_check(&mut t, &w, k as i64, n)?;
    }
    Ok(t.note(format!("{n} terms for k = 2, 3")))
}

fn fib_uni(scale: &Scale) -> Result<Tally> {
    let len = scale.len.unwrap_or(30);
    let report = fib_uni_survivors(len);
    let mut expected = vec![fib()?.prefix(len)?, WordStream::periodic(&"ab".parse()?)?.prefix(len)?];
    expected.sort();
    expected.dedup();
    let mut t = Tally::default();
    t.eq("survivors", &report.survivors, &expected);
    Ok(t.note(format!("length {len}: {} survivors, {} nodes", report.survivors.len(), report.nodes)))
}

fn tm_uni(scale: &Scale) -> Result<Tally> {
    let len = scale.len.unwrap_or(20);
    let report = self_r_survivors(len, 1);
    let mut t = Tally::default();
    t.eq("survivors", report.survivors, vec![tm()?.prefix(len)?]);
    Ok(t.note(format!("length {len}: {} nodes", report.nodes)))
}

pub type DifferenceRow = (&'static str, &'static [i64], &'static [i64], &'static [i64]);

/// Rows of the small-period table: word, Δp_a period, Δp_b period, Δr period.
pub const PERIODIC_DIFFERENCES: [DifferenceRow; 4] = [
    ("ab", &[2], &[2], &[0]),
    ("aab", &[1, 2], &[3], &[2, 1]),
    ("abba", &[3, 1], &[1, 3], &[-2, 2]),
    ("aabb", &[1, 3], &[1, 3], &[0]),
];

fn periodic_differences(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(20);
    let mut t = Tally::default();
    for (u, da, db, dr) in PERIODIC_DIFFERENCES {
        let w = WordStream::periodic(&u.parse()?)?;
        let cycle = |p: &[i64]| p.iter().copied().cycle().take(n).collect::<Vec<_>>();
        t.eq(&format!("Δp_a of ({u})^ω"), diffs(&positions(&w, Letter::A, n + 1)?), cycle(da));
        t.eq(&format!("Δp_b of ({u})^ω"), diffs(&positions(&w, Letter::B, n + 1)?), cycle(db));
        t.eq(&format!("Δr of ({u})^ω"), diffs(&rvals(&w, n + 1)?), cycle(dr));
    }
    Ok(t.note(format!("{n} terms per row")))
}

fn pisa_closed(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(10_000);
    let mut t = Tally::default();
    for k in 1..=3u64 {
        for l in 0..=2u64 {
            for m in 1..=3u64 {
                let w = BinarySubstitution::pisa(k as usize, l as usize, m as usize)?.fixed_point(Letter::A)?;
                let form = pisa_closed_form(k, l, m)?;
                let pa = positions(&w, Letter::A, n)?;
                let pb = positions(&w, Letter::B, n)?;
                let bad = (0..n).find(|&i| pb[i] != form.p_b(pa[i], i as i64 + 1));
                t.check(bad.is_none(), || format!("σ_{{{k},{l},{m}}} fails at n = {}", bad.unwrap_or(0) + 1));
            }
        }
    }
    Ok(t.note(format!("27 substitutions, {n} terms each")))
}

fn pisa_equivalence(scale: &Scale) -> Result<Tally> {
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..20 {
        let (k, l, m) = (rng.gen_range(1..=5u64), rng.gen_range(0..=4u64), rng.gen_range(1..=6u64));
        let j = k + l;
        let s = BinarySubstitution::pisa(k as usize, l as usize, m as usize)?;
        let lim = predicted_limits(&s.matrix())?;
        let tau = tau_jm(j, m);
        let q = |x: u64| QuadraticNumber::integer(x as i64);
        let one = QuadraticNumber::one();
        let ctx = format!("σ_{{{k},{l},{m}}}");
        if j + 1 != m {
            let denom = q(j + 1) - q(m);
            t.eq(&format!("{ctx} Freq(a)"), &lim.freq_a, &((&tau - q(m)) / &denom));
            t.eq(&format!("{ctx} Freq(b)"), &lim.freq_b, &((q(j + 1) - &tau) / &denom));
        }
        t.eq(&format!("{ctx} lim p_a/n"), &lim.lim_pa_over_n, &(&one + (&tau - q(j)) / q(m)));
        t.eq(&format!("{ctx} lim p_b/n"), &lim.lim_pb_over_n, &(&tau + &one));
        let slope = (q(m) - &one) * &tau + q(j);
        t.eq(&format!("{ctx} lim r/n"), &lim.lim_r_over_n, &(slope / q(m)));
        let via_pa = (q(m) - &one) * &lim.lim_pa_over_n + q(j + 1) - q(m);
        t.eq(&format!("{ctx} lim r/n via p_a"), &lim.lim_r_over_n, &via_pa);
        let lambda = q(1) * &tau + q(0);
        t.check(is_right_eigenvector(&s.matrix(), &tau, &lambda), || format!("{ctx}: [τ 1]ᵀ is not an eigenvector"));
    }
    Ok(t.note("20 random (k, l, m)"))
}

fn fib_plus_one(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(10_000);
    let w = delete(&fib()?)?;
    let mut t = Tally::default();
    let expected: Vec<i64> = (2..=n as i64 + 1).collect();
    t.check(rvals(&w, n)? == expected, || "r_{D(f)}(n) != n + 1".into());
    Ok(t.note(format!("{n} terms")))
}

fn fib_k(scale: &Scale) -> Result<Tally> {
    let stable = scale.n.unwrap_or(10_000);
    let f = fib()?;
    let mut t = Tally::default();
    let mut found = Vec::new();
    for k in 1..=5usize {
        let w = delete_pow(&f, k)?;
        let horizon = stable + 1000;
        let r = rvals(&w, horizon)?;
        let th = locate_threshold(horizon, |n| Ok(r[n - 1] == (n + k) as i64))?;
        t.check(th.horizon - th.threshold >= stable, || {
            format!("k = {k}: threshold {} leaves fewer than {stable} stable terms", th.threshold)
        });
        found.push(th.threshold);
    }
    Ok(t.note(format!("thresholds for k = 1..5: {found:?}, each stable for at least {stable} terms")))
}

fn iccanobif(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(10_000);
    let mut t = Tally::default();
    let rho = BinarySubstitution::fibonacci();
    let rev = BinarySubstitution::iccanobif();
    let w = |s: &str| s.parse::<FiniteWord>();
    let (ab, ba) = (w("ab")?, w("ba")?);
    for i in 1..=8usize {
        for (x, even, odd) in [(Letter::A, &ab, &ba), (Letter::B, &ba, &ab)] {
            // x = a: ab·ρ^{2i}(a) = ρ'^{2i}(a)·ba and ba·ρ^{2i-1}(a) = ρ'^{2i-1}(a)·ab
            // x = b: ba·ρ^{2i}(b) = ρ'^{2i}(b)·ab and ab·ρ^{2i+1}(b) = ρ'^{2i+1}(b)·ba
            let pairs = match x {
                Letter::A => [(2 * i, even, odd), (2 * i - 1, odd, even)],
                Letter::B => [(2 * i, even, odd), (2 * i + 1, odd, even)],
            };
            for (p, left, right) in pairs {
                let lhs = left.concat(&rho.supertile(p, x)?);
                let rhs = rev.supertile(p, x)?.concat(right);
                t.check(lhs == rhs, || format!("conjugation fails for {x} at power {p}"));
            }
        }
    }
    let square = rev.power(2)?;
    let f = fib()?;
    for (seed, u, r1) in [(Letter::A, &ab, 1i64), (Letter::B, &ba, -1)] {
        let fixed = square.fixed_point(seed)?;
        let pre = prefix_op(u, &f);
        t.eq(&format!("fixed point of ρ'² from {seed}"), fixed.prefix(n)?, pre.prefix(n)?);
        let mut expected = vec![r1];
        expected.extend(1..n as i64);
        t.eq(&format!("r of Pre_{u}(f)"), rvals(&fixed, n)?, expected);
    }
    Ok(t.note(format!("conjugations up to power 17, fixed points over {n} letters")))
}

fn fib_switch(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(10_000);
    let f = fib()?;
    let mut t = Tally::default();
    t.eq("switch(f) vs D(f)", fibonacci_switch(&f).prefix(n)?, delete(&f)?.prefix(n)?);
    Ok(t.note(format!("{n} letters")))
}

fn linear_r(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(2_000);
    let mut t = Tally::default();
    let mut thresholds = Vec::new();
    for k in 1..=5usize {
        let c = constant_r_word(k)?;
        t.check(rvals(&c, n)?.iter().all(|&v| v == k as i64), || format!("(a^{k}b^{k})^ω: r is not {k}"));
        for j in 0..k {
            let w = linear_r_word(k, j)?;
            let r = rvals(&w, n)?;
            let bad = (1..=n).find(|&i| r[i - 1] != (k * i) as i64 - j as i64);
            t.check(bad.is_none(), || format!("r = {k}n - {j} fails at n = {}", bad.unwrap_or(0)));
            for q in 1..=3usize {
                let w = eventually_linear_word(k, j, q)?;
                let r = rvals(&w, n)?;
                let target = |i: usize| (k * i + q * k) as i64 - j as i64;
                let th = locate_threshold(n, |i| Ok(r[i - 1] == target(i)))?;
                t.check(th.stable_for(10), || {
                    format!("D^{q}: r = {k}n + {} not stable (threshold {})", (q * k) as i64 - j as i64, th.threshold)
                });
                thresholds.push(th.threshold);
            }
        }
    }
    let worst = thresholds.iter().max().copied().unwrap_or(0);
    Ok(t.note(format!("k <= 5, q <= 3 over {n} terms; largest threshold {worst}")))
}

fn reconstruct_roundtrip(scale: &Scale) -> Result<Tally> {
    let pairs = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for i in 0..200 {
        let w = random_word(&mut rng)?;
        match reconstruct(&RSpec::relative_of(&w), pairs)? {
            ReconstructionOutcome::Success(pw) => {
                let m = pw.determined_len();
                t.check(m >= pairs && pw.determined_prefix() == w.prefix(m)?, || {
                    format!("instance {i} ({}) is not reproduced", w.descriptor())
                });
            }
            ReconstructionOutcome::Failure(v) => t.check(false, || format!("instance {i}: {v}")),
        }
    }
    Ok(t.note(format!("200 random words, {pairs} pairs each")))
}

fn deletion_positions(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..100 {
        let w = random_word(&mut rng)?;
        let d = delete_first(&w, Letter::A)?;
        let k = first_b_after_first_a(&w)?;
        let (pa, pb) = (positions(&w, Letter::A, n + 1)?, positions(&w, Letter::B, n)?);
        let (qa, qb) = (positions(&d, Letter::A, n)?, positions(&d, Letter::B, n)?);
        let ok_a = (1..=n).all(|i| qa[i - 1] == pa[i] - 1);
        let ok_b = (1..=n).all(|i| qb[i - 1] == pb[i - 1] - if i < k { 0 } else { 1 });
        t.check(ok_a && ok_b, || format!("{}: D_a position law fails", w.descriptor()));
        let ab = delete_first(&d, Letter::B)?.prefix(n)?;
        let ba = delete_first(&delete_first(&w, Letter::B)?, Letter::A)?.prefix(n)?;
        t.check(ab == ba, || format!("{}: D_a and D_b do not commute", w.descriptor()));
    }
    Ok(t.note(format!("100 random words, {n} terms")))
}

fn shift_law(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let mut worst = 0;
    for _ in 0..100 {
        let w = random_word(&mut rng)?;
        let r = rvals(&w, n + 3)?;
        let head = w.prefix(2)?;
        if head[0] != head[1] {
            let rd = rvals(&delete(&w)?, n)?;
            t.check(rd[..] == r[1..=n], || format!("{}: r_D(n) != r(n+1)", w.descriptor()));
        }
        for k in 1..=3usize {
            let rd = rvals(&delete_pow(&w, k)?, n)?;
            let th = locate_threshold(n, |i| Ok(rd[i - 1] == r[i - 1 + k]))?;
            t.check(th.stable_for(10), || {
                format!("{}: D^{k} shift not stable (threshold {})", w.descriptor(), th.threshold)
            });
            worst = worst.max(th.threshold);
        }
    }
    Ok(t.note(format!("100 random words, k <= 3; largest threshold {worst}")))
}

fn balanced_word(rng: &mut ChaCha8Rng, k: usize) -> FiniteWord {
    let mut u: Vec<Letter> = [Letter::A, Letter::B].iter().flat_map(|&x| std::iter::repeat_n(x, k)).collect();
    u.shuffle(rng);
    FiniteWord::from_letters(u)
}

fn balanced_prefix(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let f = fib()?;
    for _ in 0..100 {
        let w = random_word(&mut rng)?;
        let k = rng.gen_range(1..=10);
        let u = balanced_word(&mut rng, k);
        let r = rvals(&w, n)?;
        let ru = rvals(&prefix_op(&u, &w), n + k)?;
        t.check(ru[k..] == r[..], || format!("u = {u}: r_uw(n+k) != r_w(n)"));

        let v = random_letters(&mut rng, 2 * k);
        let identity = |x: &WordStream| -> Result<bool> {
            Ok(delete_pow(&prefix_op(&v, x), k)?.prefix(200)? == x.prefix(200)?)
        };
        let holds = identity(&w)? && identity(&w.reflect())?;
        t.eq(&format!("D^{k}∘Pre_{v} = Id"), holds, v.is_balanced());

        let rf = rvals(&prefix_op(&u, &f), n)?;
        let bad = (k + 1..=n).find(|&i| rf[i - 1] != (i - k) as i64);
        t.check(bad.is_none(), || format!("Pre_{u}(f): r(n) != n - {k}"));
    }
    for j in 1..=10usize {
        let u: FiniteWord = "ab".repeat(j).parse()?;
        let rf = rvals(&prefix_op(&u, &f), n)?;
        t.check(rf[..j].iter().all(|&v| v == 1), || format!("Pre_(ab)^{j}(f): r(1..={j}) != 1"));
    }
    Ok(t.note(format!("100 random instances, {n} terms")))
}

fn cloning(scale: &Scale) -> Result<Tally> {
    let m_max = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..100 {
        let w = random_word(&mut rng)?;
        let k = rng.gen_range(2..=4usize);
        let r = rvals(&w, m_max + 1)?;
        let rc = rvals(&crate::operators::clone_word(&w, k)?, (m_max + 1) * k)?;
        let ok = (0..=m_max).all(|m| (1..=k).all(|j| rc[m * k + j - 1] == k as i64 * r[m]));
        t.check(ok, || format!("{} with k = {k}", w.descriptor()));
    }
    Ok(t.note(format!("100 random instances, m <= {m_max}")))
}

fn reflection(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..100 {
        let w = random_word(&mut rng)?;
        let r = rvals(&w, n)?;
        let rr = rvals(&w.reflect(), n)?;
        t.check(r.iter().zip(&rr).all(|(x, y)| *x == -y), || format!("{}: r of reflection", w.descriptor()));
        let lhs = delete(&w.reflect())?.prefix(n)?;
        let rhs = delete(&w)?.reflect().prefix(n)?;
        t.check(lhs == rhs, || format!("{}: D and reflection do not commute", w.descriptor()));
    }
    Ok(t.note(format!("100 random words, {n} terms")))
}

fn run_bounds(scale: &Scale) -> Result<Tally> {
    let horizon = scale.n.unwrap_or(4_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..100 {
        let w = random_word_starting_a(&mut rng)?;
        let c = runs(&w, horizon)?.c as i64;
        let count = |x: Letter| -> Result<usize> { Ok(w.prefix(horizon)?.count(x)) };
        let n = count(Letter::A)?.min(count(Letter::B)?);
        let (pa, pb) = (positions(&w, Letter::A, n)?, positions(&w, Letter::B, n)?);
        #[allow(clippy::int_plus_one)]
        let ok = (1..=n as i64).all(|i| {
            let (a, b) = (pa[i as usize - 1], pb[i as usize - 1]);
            let r = b - a;
            a <= (c + 1) * (i - 1) && b <= (c + 1) * i - 1 && c * (1 - i) + 1 <= r && r <= c * i
        });
        t.check(ok, || format!("{}: bounds with c = {c}", w.descriptor()));
        let x = w.prefix(horizon)?;
        if !x.windows(2).any(|p| p == [Letter::B, Letter::B]) {
            let r = rvals(&w, n)?;
            t.check(diffs(&r).iter().all(|&d| d >= 0), || format!("{}: no bb but Δr < 0", w.descriptor()));
        }
    }
    Ok(t.note(format!("100 random words in aW, horizon {horizon}")))
}

fn periodicity(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    for _ in 0..100 {
        let len = rng.gen_range(2..=10);
        let mut u = random_letters(&mut rng, len).into_letters();
        u[0] = Letter::A;
        u[len - 1] = Letter::B;
        let u = FiniteWord::from_letters(u);
        let (k, j) = (u.count(Letter::A), u.count(Letter::B));
        let w = WordStream::periodic(&u)?;
        let l = k.lcm(&j);
        let da = diffs(&positions(&w, Letter::A, n + k + 1)?);
        let db = diffs(&positions(&w, Letter::B, n + j + 1)?);
        let dr = diffs(&rvals(&w, n + l + 1)?);
        let periodic = |s: &[i64], p: usize| (0..n).all(|i| s[i] == s[i + p]);
        t.check(periodic(&da, k) && periodic(&db, j) && periodic(&dr, l), || format!("({u})^ω"));
    }
    Ok(t.note(format!("100 random periods, {n} terms")))
}

fn dimer(scale: &Scale) -> Result<Tally> {
    let n = scale.n.unwrap_or(1_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let tm_sub = BinarySubstitution::thue_morse();
    let mut words = vec![tm()?];
    for _ in 0..20 {
        words.push(tm_sub.apply_stream(&random_word(&mut rng)?));
    }
    for w in &words {
        let r = rvals(w, n)?;
        for i in 1..=n {
            let (x, y) = w.dimer(i - 1)?;
            let ab = (x, y) == (Letter::A, Letter::B);
            t.check((r[i - 1] == 1) == ab, || format!("{}: r({i}) vs dimer", w.descriptor()));
        }
    }
    Ok(t.note(format!("{} words built from dimers, {n} terms", words.len())))
}

fn random_matrix(rng: &mut ChaCha8Rng, max: u64) -> SubstitutionMatrix {
    let mut e = || rng.gen_range(0..=max);
    SubstitutionMatrix::new(e(), e(), e(), e())
}

fn random_primitive(rng: &mut ChaCha8Rng) -> SubstitutionMatrix {
    loop {
        let m = random_matrix(rng, 9);
        if m.is_primitive() {
            return m;
        }
    }
}

fn spectral_eigen(scale: &Scale) -> Result<Tally> {
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let mut mats = vec![
        BinarySubstitution::fibonacci().matrix(),
        BinarySubstitution::thue_morse().matrix(),
        BinarySubstitution::period_doubling().matrix(),
    ];
    mats.extend((0..200).map(|_| random_primitive(&mut rng)));
    for m in &mats {
        let pf = pf_data(m)?;
        t.check(pf.satisfies_eigen_equation(m), || format!("{m}: eigen equation"));
        let tr = QuadraticNumber::integer(m.trace() as i64);
        let det = QuadraticNumber::integer(m.det() as i64);
        let l = &pf.lambda_pf;
        t.check(l * l == &tr * l - &det, || format!("{m}: characteristic equation"));
        t.check(pf.u.signum() > 0 && pf.lambda_pf >= pf.conjugate.abs(), || format!("{m}: positivity"));
    }
    let fib_lim = predicted_limits(&mats[0])?.lim_r_over_n;
    t.eq("Fibonacci lim r/n", fib_lim, QuadraticNumber::one());
    t.eq("Thue–Morse lim r/n", predicted_limits(&mats[1])?.lim_r_over_n, QuadraticNumber::zero());
    Ok(t.note(format!("{} primitive matrices", mats.len())))
}

fn freq_transfer_check(scale: &Scale) -> Result<Tally> {
    let horizon = scale.n.unwrap_or(100_000);
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let mut worst = 0f64;
    for _ in 0..20 {
        let len = rng.gen_range(2..=8);
        let mut u = random_letters(&mut rng, len).into_letters();
        u[0] = Letter::A;
        u[1] = Letter::B;
        let u = FiniteWord::from_letters(u);
        let w = WordStream::periodic(&u)?;
        let fa = QuadraticNumber::ratio(u.count(Letter::A) as i64, len as i64);
        let fb = QuadraticNumber::one() - &fa;
        let image = |rng: &mut ChaCha8Rng| {
            let l = rng.gen_range(1..=5);
            random_letters(rng, l)
        };
        let sigma = BinarySubstitution::new(image(&mut rng), image(&mut rng));
        let (ga, _) = freq_transfer(&sigma, &fa, &fb)?;
        let empirical = empirical_ratio(&sigma.apply_stream(&w), RatioKind::FreqA, horizon)?;
        let err = (empirical.to_f64().unwrap_or(f64::NAN) - ga.to_f64()).abs();
        worst = worst.max(err);
        t.check(err < 1e-2, || format!("{sigma} on ({u})^ω: error {err}"));
    }
    for _ in 0..200 {
        let sigma = loop {
            let m = random_matrix(&mut rng, 5);
            let (ca, cb) = m.column_sums();
            if m.det() != 0 && ca > 0 && cb > 0 {
                let word = |x: u64, y: u64| FiniteWord::repeat(Letter::A, x as usize).concat(&FiniteWord::repeat(Letter::B, y as usize));
                break BinarySubstitution::new(word(m.m11, m.m21), word(m.m12, m.m22));
            }
        };
        let d = rng.gen_range(1..=20);
        let fa = QuadraticNumber::ratio(rng.gen_range(0..=d), d);
        let fb = QuadraticNumber::one() - &fa;
        let (ga, gb) = freq_transfer(&sigma, &fa, &fb)?;
        t.eq(&format!("inverse roundtrip for {sigma}"), freq_transfer_inverse(&sigma, &ga, &gb)?, (fa, fb));
    }
    Ok(t.note(format!("20 empirical pairs at horizon {horizon} (max error {worst:.2e}), 200 exact inversions")))
}

/// `[u 1]ᵀ` is a right eigenvector of `M` (for the eigenvalue forced by the second row).
fn eigen_oracle(m: &SubstitutionMatrix, u: &QuadraticNumber) -> bool {
    let lambda = QuadraticNumber::integer(m.m21 as i64) * u + QuadraticNumber::integer(m.m22 as i64);
    is_right_eigenvector(m, u, &lambda)
}

fn classification(scale: &Scale) -> Result<Tally> {
    let mut rng = rng(scale);
    let mut t = Tally::default();
    let jm = [(1u64, 1u64), (2, 1), (1, 3), (3, 2), (1, 2), (3, 4), (2, 3), (4, 5)];
    for _ in 0..500 {
        let m = random_matrix(&mut rng, 9);
        t.eq(&format!("{m} golden"), classify_golden(&m).is_some(), eigen_oracle(&m, &tau_k(1)));
        for k in 1..=4 {
            t.eq(&format!("{m} τ_{k}"), classify_tau_k(&m, k).is_some(), eigen_oracle(&m, &tau_k(k)));
        }
        for (j, mm) in jm {
            let verdict = classify_tau_jm(&m, j, mm)?;
            t.eq(&format!("{m} τ_({j},{mm})"), verdict.matches(), eigen_oracle(&m, &tau_jm(j, mm)));
        }
        if m.is_primitive() {
            let lim = predicted_limits(&m)?.lim_r_over_n;
            let want = lim.as_integer().and_then(|k| i64::try_from(k).ok());
            t.eq(&format!("{m} linear class"), classify_linear_limit(&m)?, want);
        }
    }
    Ok(t.note("500 random matrices with entries in [0, 9]"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = THEOREMS.iter().map(|t| t.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), THEOREMS.len());
        assert!(find("fib-law").is_some());
        assert!(find("nope").is_none());
    }

    #[test]
    fn all_pass_at_small_scale() {
        let scale = Scale {
            n: Some(300),
            len: Some(12),
            seed: 7,
        };
        for th in THEOREMS {
            let scale = match th.id {
                // needs enough letters for the empirical error bound
                "freq-transfer" => Scale { n: Some(20_000), ..scale },
                _ => scale,
            };
            let cert = th.run(&scale).unwrap_or_else(|e| panic!("{}: {e}", th.id));
            assert!(cert.passed, "{}: {}", cert.id, cert.detail);
            assert!(cert.checked > 0, "{}", cert.id);
        }
    }
}
