//! Naive string-level reference implementations shared by the integration tests.
//!
//! Everything here works on plain `Vec<u8>` words over `b'a'`/`b'b'` and
//! never calls into the library.

#![allow(dead_code)]

use rand::Rng;

pub type Bytes = Vec<u8>;

pub fn apply(img_a: &[u8], img_b: &[u8], w: &[u8]) -> Bytes {
    let mut out = Vec::new();
    for &c in w {
        out.extend_from_slice(if c == b'a' { img_a } else { img_b });
    }
    out
}

pub fn count(w: &[u8], c: u8) -> usize {
    w.iter().filter(|&&x| x == c).count()
}

/// Iterates `σ` from `seed` until the word holds at least `need` of each letter
/// (or `len` letters, whichever comes later).
pub fn fixed_point(img_a: &[u8], img_b: &[u8], seed: u8, need: usize, len: usize) -> Bytes {
    let mut w = vec![seed];
    while w.len() < len || count(&w, b'a') < need || count(&w, b'b') < need {
        let next = apply(img_a, img_b, &w);
        assert!(next.len() > w.len(), "substitution does not grow");
        w = next;
    }
    w
}

pub fn fibonacci(need: usize) -> Bytes {
    fixed_point(b"ab", b"a", b'a', need, 0)
}

/// Thue–Morse through the parity of the binary digit sum.
pub fn thue_morse(len: usize) -> Bytes {
    (0..len as u64)
        .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect()
}

pub fn periodic(u: &[u8], need: usize) -> Bytes {
    let per = count(u, b'a').min(count(u, b'b'));
    assert!(per > 0, "period must contain both letters");
    u.repeat(need.div_ceil(per).max(1))
}

/// 1-based `n` ↦ 0-based position of the `n`-th `c`.
pub fn positions(w: &[u8], c: u8) -> Vec<usize> {
    (0..w.len()).filter(|&i| w[i] == c).collect()
}

/// `r(1..=n)`; panics if the word is too short.
pub fn r(w: &[u8], n: usize) -> Vec<i64> {
    let pa = positions(w, b'a');
    let pb = positions(w, b'b');
    assert!(pa.len() >= n && pb.len() >= n, "oracle word too short for {n} terms");
    (0..n).map(|i| pb[i] as i64 - pa[i] as i64).collect()
}

pub fn diff(s: &[i64]) -> Vec<i64> {
    s.windows(2).map(|p| p[1] - p[0]).collect()
}

pub fn remove_first(w: &[u8], c: u8) -> Bytes {
    let mut out = w.to_vec();
    if let Some(i) = out.iter().position(|&x| x == c) {
        out.remove(i);
    }
    out
}

/// Removes the first `a` and the first `b`.
pub fn delete(w: &[u8]) -> Bytes {
    remove_first(&remove_first(w, b'a'), b'b')
}

pub fn clone_k(w: &[u8], k: usize) -> Bytes {
    w.iter().flat_map(|&c| std::iter::repeat_n(c, k)).collect()
}

pub fn reflect(w: &[u8]) -> Bytes {
    w.iter().map(|&c| if c == b'a' { b'b' } else { b'a' }).collect()
}

pub fn to_string(w: &[u8]) -> String {
    String::from_utf8(w.to_vec()).unwrap()
}

pub fn random_letters<R: Rng>(rng: &mut R, len: usize) -> Bytes {
    (0..len).map(|_| if rng.gen_bool(0.5) { b'a' } else { b'b' }).collect()
}

/// Random word of length `len` containing both letters.
pub fn random_mixed<R: Rng>(rng: &mut R, len: usize) -> Bytes {
    assert!(len >= 2);
    loop {
        let w = random_letters(rng, len);
        if w.contains(&b'a') && w.contains(&b'b') {
            return w;
        }
    }
}

/// A random test word: its description for the library plus an oracle copy
/// holding at least `need` occurrences of each letter.
#[derive(Debug, Clone)]
pub struct Sample {
    pub spec: String,
    pub word: Bytes,
}

pub fn random_periodic<R: Rng>(rng: &mut R, need: usize) -> Sample {
    let len = rng.gen_range(2..=8);
    let u = random_mixed(rng, len);
    Sample {
        spec: format!("periodic:{}", to_string(&u)),
        word: periodic(&u, need),
    }
}

/// Fixed point from `a` of a random substitution whose images mix both letters
/// (`σ(a)` starts with `a` and contains `b`; `σ(b)` contains `a`).
pub fn random_fixed<R: Rng>(rng: &mut R, need: usize) -> Sample {
    let la = rng.gen_range(2..=4);
    let mut img_a = random_letters(rng, la);
    img_a[0] = b'a';
    if !img_a.contains(&b'b') {
        img_a[la - 1] = b'b';
    }
    let lb = rng.gen_range(1..=3);
    let mut img_b = random_letters(rng, lb);
    if !img_b.contains(&b'a') {
        let i = rng.gen_range(0..lb);
        img_b[i] = b'a';
    }
    Sample {
        spec: format!("fixed:a->{};b->{}@a", to_string(&img_a), to_string(&img_b)),
        word: fixed_point(&img_a, &img_b, b'a', need, 0),
    }
}

pub fn random_sample<R: Rng>(rng: &mut R, need: usize) -> Sample {
    if rng.gen_bool(0.5) {
        random_periodic(rng, need)
    } else {
        random_fixed(rng, need)
    }
}

/// `M` is primitive iff `M²` is entrywise positive (2×2 case).
pub fn primitive(m: [[u64; 2]; 2]) -> bool {
    let sq = |i: usize, j: usize| m[i][0] * m[0][j] + m[i][1] * m[1][j];
    (0..2).all(|i| (0..2).all(|j| sq(i, j) > 0))
}

/// Whether `[x 1]ᵀ` is a right eigenvector of `m` for `x` the positive root of
/// `X² - jX - mm`, decided with integer arithmetic only.
///
/// `m11·x + m12 = x·(m21·x + m22)` reduces through `x² = jx + mm` to
/// `(m11 - m21·j - m22)·x + (m12 - m21·mm) = 0`.
pub fn eigen_root(m: [[u64; 2]; 2], j: u64, mm: u64) -> bool {
    let [[m11, m12], [m21, m22]] = m.map(|row| row.map(|v| v as i128));
    let (j, mm) = (j as i128, mm as i128);
    let lin = m11 - m21 * j - m22;
    let cst = m12 - m21 * mm;
    let disc = j * j + 4 * mm;
    let s = (disc as f64).sqrt().round() as i128;
    if s * s == disc {
        // x = (j + s) / 2
        lin * (j + s) + 2 * cst == 0
    } else {
        lin == 0 && cst == 0
    }
}
