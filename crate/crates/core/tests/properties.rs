mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use relpos::expr::WordSpec;
use relpos::operators::{clone_word, delete, delete_first, delete_pow, prefix_op, Pipeline};
use relpos::position::{counting, p, runs};
use relpos::reconstruct::{reconstruct, RSpec};
use relpos::spectral::{freq_transfer, freq_transfer_inverse};
use relpos::{
    BinarySubstitution, FiniteWord, Letter, QuadraticNumber, RelativeSeries, WordStream,
};

const N: usize = 200;

fn word_bytes(min: usize, max: usize) -> impl Strategy<Value = Bytes> {
    prop::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], min..=max)
}

fn mixed_word(min: usize, max: usize) -> impl Strategy<Value = Bytes> {
    word_bytes(min.max(2), max).prop_filter("both letters", |w| w.contains(&b'a') && w.contains(&b'b'))
}

fn finite(w: &[u8]) -> FiniteWord {
    to_string(w).parse().unwrap()
}

/// A periodic or substitutive word with an oracle copy holding `need` of each letter.
fn sample(need: usize) -> impl Strategy<Value = Sample> {
    let periodic_case = mixed_word(2, 8).prop_map(move |u| Sample {
        spec: format!("periodic:{}", to_string(&u)),
        word: periodic(&u, need),
    });
    let fixed_case = (word_bytes(1, 3), word_bytes(1, 3)).prop_map(move |(mut tail_a, mut img_b)| {
        if !tail_a.contains(&b'b') {
            tail_a.push(b'b');
        }
        if !img_b.contains(&b'a') {
            img_b.insert(0, b'a');
        }
        let img_a = [&b"a"[..], &tail_a].concat();
        Sample {
            spec: format!("fixed:a->{};b->{}@a", to_string(&img_a), to_string(&img_b)),
            word: fixed_point(&img_a, &img_b, b'a', need, 0),
        }
    });
    prop_oneof![periodic_case, fixed_case]
}

fn stream(s: &Sample) -> WordStream {
    s.spec.parse::<WordSpec>().unwrap().build().unwrap()
}

fn lib_r(w: &WordStream, n: usize) -> Vec<i64> {
    RelativeSeries::new(w).values(n).unwrap()
}

fn quadratic_in(d: i64) -> impl Strategy<Value = QuadraticNumber> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6).prop_map(move |(xn, xd, yn, yd)| {
        let (x, y) = (BigRational::new(xn.into(), xd.into()), BigRational::new(yn.into(), yd.into()));
        QuadraticNumber::new(x, y, BigInt::from(d)).unwrap()
    })
}

/// Three numbers from one field `Q(√d)`.
fn quadratic_triple() -> impl Strategy<Value = [QuadraticNumber; 3]> {
    prop_oneof![Just(2i64), Just(3), Just(5), Just(6)]
        .prop_flat_map(|d| [quadratic_in(d), quadratic_in(d), quadratic_in(d)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_matches_oracle(s in sample(N)) {
        prop_assert_eq!(lib_r(&stream(&s), N), r(&s.word, N));
    }

    #[test]
    fn reflection_negates_r(s in sample(N)) {
        let w = stream(&s);
        let neg: Vec<i64> = lib_r(&w, N).iter().map(|v| -v).collect();
        prop_assert_eq!(lib_r(&w.reflect(), N), neg);
        prop_assert_eq!(lib_r(&w.reflect(), N), r(&reflect(&s.word), N));
    }

    #[test]
    fn counting_and_positions_are_adjoint(s in sample(N), m in 1usize..300) {
        let w = stream(&s);
        for x in Letter::BOTH {
            for n in [1, 7, N] {
                let pos = p(&w, x, n).unwrap();
                prop_assert_eq!(counting(&w, x, pos + 1).unwrap(), n);
            }
            let c = counting(&w, x, m).unwrap();
            if c >= 1 {
                prop_assert!(p(&w, x, c).unwrap() < m);
            }
        }
    }

    #[test]
    fn delete_after_two_letter_prefix_is_identity(s in sample(N)) {
        let w = stream(&s);
        let original = w.prefix(2 * N).unwrap();
        for u in ["ab", "ba"] {
            let back = delete(&prefix_op(&u.parse().unwrap(), &w)).unwrap();
            prop_assert_eq!(back.prefix(2 * N).unwrap(), original.clone());
        }
        let starts_ab = s.word.starts_with(b"ab");
        let redo = prefix_op(&"ab".parse().unwrap(), &delete(&w).unwrap());
        prop_assert_eq!(redo.prefix(2 * N).unwrap() == original, starts_ab);
    }

    #[test]
    fn balanced_prefix_classification(s in sample(N), u in word_bytes(2, 20).prop_filter("even", |u| u.len() % 2 == 0)) {
        let w = stream(&s);
        let k = u.len() / 2;
        let back = delete_pow(&prefix_op(&finite(&u), &w), k).unwrap();
        let identity = back.prefix(2 * N).unwrap() == w.prefix(2 * N).unwrap();
        prop_assert_eq!(identity, count(&u, b'a') == k);
    }

    #[test]
    fn delete_commutes_with_reflection(s in sample(N)) {
        let w = stream(&s);
        let lhs = delete(&w.reflect()).unwrap().prefix(2 * N).unwrap();
        let rhs = delete(&w).unwrap().reflect().prefix(2 * N).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delete_first_matches_oracle(s in sample(N)) {
        let w = stream(&s);
        for (x, c) in [(Letter::A, b'a'), (Letter::B, b'b')] {
            let got = delete_first(&w, x).unwrap().prefix(N).unwrap().to_string();
            prop_assert_eq!(got.as_bytes(), &remove_first(&s.word, c)[..N]);
        }
    }

    #[test]
    fn cloning_scales_r(s in sample(N), k in 2usize..=4) {
        let w = stream(&s);
        let rw = lib_r(&w, N);
        let rc = lib_r(&clone_word(&w, k).unwrap(), N * k);
        for m in 0..N {
            for j in 1..=k {
                prop_assert_eq!(rc[m * k + j - 1], k as i64 * rw[m]);
            }
        }
    }

    #[test]
    #[allow(clippy::int_plus_one)]
    fn run_bounds(s in sample(N)) {
        let w = stream(&s);
        prop_assume!(s.word[0] == b'a');
        let horizon = 3 * N;
        let c = runs(&w, horizon).unwrap().c as i64;
        let pa = positions(&s.word, b'a');
        let pb = positions(&s.word, b'b');
        for n in 1..=N as i64 {
            let (a, b) = (pa[n as usize - 1] as i64, pb[n as usize - 1] as i64);
            if a.max(b) >= horizon as i64 {
                break;
            }
            prop_assert!(c * (1 - n) + 1 <= b - a && b - a <= c * n, "c = {}, n = {}, r = {}", c, n, b - a);
            prop_assert!(a <= (c + 1) * (n - 1));
            prop_assert!(b <= (c + 1) * n - 1);
        }
    }

    #[test]
    fn periodic_differences_have_letter_count_periods(u in mixed_word(2, 8)) {
        let w = WordStream::periodic(&finite(&u)).unwrap();
        let (k, j) = (count(&u, b'a'), count(&u, b'b'));
        let rs = RelativeSeries::new(&w);
        let da = relpos::position::differences(&rs.p_a().values(N + 1).unwrap().iter().map(|&v| v as i64).collect::<Vec<_>>());
        let db = relpos::position::differences(&rs.p_b().values(N + 1).unwrap().iter().map(|&v| v as i64).collect::<Vec<_>>());
        let dr = relpos::position::differences(&rs.values(N + 1).unwrap());
        let l = num_integer::lcm(k, j);
        prop_assert!((k..N).all(|i| da[i] == da[i - k]));
        prop_assert!((j..N).all(|i| db[i] == db[i - j]));
        prop_assert!((l..N).all(|i| dr[i] == dr[i - l]));
    }

    #[test]
    fn reconstruction_roundtrip(s in sample(N + 1)) {
        let w = stream(&s);
        let outcome = reconstruct(&RSpec::relative_of(&w), N).unwrap();
        let pw = outcome.word().expect("a word's own r is valid");
        let got = pw.determined_prefix().to_string();
        prop_assert_eq!(got.as_bytes(), &s.word[..got.len()]);
    }

    #[test]
    fn word_and_substitution_text_roundtrip(a in word_bytes(1, 6), b in word_bytes(1, 6)) {
        let w = finite(&a);
        prop_assert_eq!(w.to_string().parse::<FiniteWord>().unwrap(), w);
        let sigma = BinarySubstitution::new(finite(&a), finite(&b));
        prop_assert_eq!(sigma.to_string().parse::<BinarySubstitution>().unwrap(), sigma);
    }

    #[test]
    fn pipeline_text_roundtrip(ops in prop::collection::vec((0usize..6, 1usize..4, word_bytes(1, 4)), 0..5)) {
        let text: Vec<String> = ops
            .iter()
            .map(|(kind, k, u)| match kind {
                0 => "reflect".to_string(),
                1 => format!("delete^{k}"),
                2 => format!("delete_a^{k}"),
                3 => format!("prefix:{}", to_string(u)),
                4 => format!("clone:{}", k + 1),
                _ => "switch".to_string(),
            })
            .collect();
        let pipeline: Pipeline = text.join(" | ").parse().unwrap();
        prop_assert_eq!(pipeline.0.len(), ops.len());
        prop_assert_eq!(pipeline.to_string().parse::<Pipeline>().unwrap(), pipeline);
    }

    #[test]
    fn quadratic_field_laws([x, y, z] in quadratic_triple()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        prop_assert_eq!(QuadraticNumber::from(x.norm()), &x * &x.conjugate());
        let approx = x.to_f64() - y.to_f64();
        if approx.abs() > 1e-9 {
            prop_assert_eq!(x.compare(&y).unwrap(), approx.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn frequency_transfer_inverts(a in word_bytes(1, 5), b in word_bytes(1, 5), num in 0i64..=12, den in 1i64..=12) {
        prop_assume!(num <= den);
        let sigma = BinarySubstitution::new(finite(&a), finite(&b));
        let fa = QuadraticNumber::from(BigRational::new(num.into(), den.into()));
        let fb = QuadraticNumber::one() - &fa;
        let (ga, gb) = freq_transfer(&sigma, &fa, &fb).unwrap();
        let image = apply(&a, &b, &periodic_fraction(num, den));
        let expected = BigRational::new((count(&image, b'a') as i64).into(), (image.len() as i64).into());
        prop_assert_eq!(ga.clone(), QuadraticNumber::from(expected));
        if sigma.matrix().det() != 0 {
            prop_assert_eq!(freq_transfer_inverse(&sigma, &ga, &gb).unwrap(), (fa, fb));
        }
    }
}

/// One period of a word with `Freq(a) = num/den`.
fn periodic_fraction(num: i64, den: i64) -> Bytes {
    (0..den).map(|i| if i < num { b'a' } else { b'b' }).collect()
}

#[test]
#[allow(clippy::int_plus_one)]
fn run_lower_bound_needs_the_factor_c() {
    // (abb)^ω: runs of length at most 2, r(4) = p_b(4) - p_a(4) = 5 - 9
    let w = WordStream::periodic(&"abb".parse().unwrap()).unwrap();
    let c = runs(&w, 60).unwrap().c as i64;
    let r4 = RelativeSeries::new(&w).get(4).unwrap();
    assert_eq!((c, r4), (2, -4));
    assert!(r4 < (1 - c) * 4 + 1, "the bound (1-c)n+1 does not hold here");
    assert!(r4 >= c * (1 - 4) + 1);
}
