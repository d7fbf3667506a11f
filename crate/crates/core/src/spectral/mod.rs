//! Perron–Frobenius data and asymptotic predictions for 2×2 substitution matrices.
//!
//! Everything is computed exactly in `Q(√D)`. The only approximate output is
//! the certified rational bracket returned when a frequency or slope leaves the
//! quadratic field of its input.

mod quadratic;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::{pisa_pisot_status, BinarySubstitution, PisotStatus, SubstitutionMatrix};

pub use quadratic::QuadraticNumber;

/// Default bracket width for non-quadratic evaluations: 2^-64.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

fn q(n: u64) -> QuadraticNumber {
    QuadraticNumber::from(BigRational::from_integer(BigInt::from(n)))
}

fn qi(n: i128) -> QuadraticNumber {
    QuadraticNumber::from(BigRational::from_integer(BigInt::from(n)))
}

/// A limit that may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtendedReal {
    NegInfinity,
    Finite(QuadraticNumber),
    PosInfinity,
}

impl ExtendedReal {
    pub fn finite(&self) -> Option<&QuadraticNumber> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl From<QuadraticNumber> for ExtendedReal {
    fn from(x: QuadraticNumber) -> Self {
        ExtendedReal::Finite(x)
    }
}

/// Result of evaluating a closed form: exact, or a rational bracket `[lower, upper]`
/// known to contain the true value.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Exact(ExtendedReal),
    Bracket { lower: BigRational, upper: BigRational },
}

impl Evaluation {
    pub fn exact(&self) -> Option<&QuadraticNumber> {
        match self {
            Evaluation::Exact(ExtendedReal::Finite(x)) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PFData {
    pub lambda_pf: QuadraticNumber,
    pub conjugate: QuadraticNumber,
    /// First coordinate of the right eigenvector `[u 1]ᵀ`.
    pub u: QuadraticNumber,
}

impl PFData {
    /// `M·[u 1]ᵀ = λ·[u 1]ᵀ`, checked exactly.
    pub fn satisfies_eigen_equation(&self, m: &SubstitutionMatrix) -> bool {
        is_right_eigenvector(m, &self.u, &self.lambda_pf)
    }
}

/// `M·[u 1]ᵀ = λ·[u 1]ᵀ`; false when `u` and `λ` live in different fields.
pub fn is_right_eigenvector(m: &SubstitutionMatrix, u: &QuadraticNumber, lambda: &QuadraticNumber) -> bool {
    let check = || -> Result<bool> {
        let top = q(m.m11).checked_mul(u)?.checked_add(&q(m.m12))?;
        let bottom = q(m.m21).checked_mul(u)?.checked_add(&q(m.m22))?;
        Ok(top == lambda.checked_mul(u)? && bottom == *lambda)
    };
    check().unwrap_or(false)
}

fn require_primitive(m: &SubstitutionMatrix) -> Result<()> {
    if m.is_primitive() {
        Ok(())
    } else {
        Err(Error::NonPrimitive(m.to_string()))
    }
}

pub fn pf_data(m: &SubstitutionMatrix) -> Result<PFData> {
    require_primitive(m)?;
    let tr = m.trace();
    let disc = tr * tr - 4 * m.det();
    let root = QuadraticNumber::sqrt_of_rational(&BigRational::from_integer(BigInt::from(disc)))
        .expect("discriminant of a nonnegative matrix is nonnegative");
    let half = QuadraticNumber::ratio(1, 2);
    let mid = &qi(tr) * &half;
    let spread = &root * &half;
    let lambda_pf = &mid + &spread;
    let conjugate = &mid - &spread;
    let u = (&lambda_pf - q(m.m22)) / q(m.m21);
    Ok(PFData {
        lambda_pf,
        conjugate,
        u,
    })
}

/// Letter frequencies and slopes of `p_a`, `p_b` and `r` for fixed points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub freq_a: QuadraticNumber,
    pub freq_b: QuadraticNumber,
    pub lim_pa_over_n: QuadraticNumber,
    pub lim_pb_over_n: QuadraticNumber,
    pub lim_r_over_n: QuadraticNumber,
}

pub fn predicted_limits(m: &SubstitutionMatrix) -> Result<LimitReport> {
    limits_from_u(&pf_data(m)?.u)
}

/// Limits for a word whose frequency ratio `Freq(a)/Freq(b)` is `u > 0`.
pub fn limits_from_u(u: &QuadraticNumber) -> Result<LimitReport> {
    if u.signum() <= 0 {
        return Err(Error::Parameter(format!("eigenvector entry {u} is not positive")));
    }
    let one = QuadraticNumber::one();
    let u1 = u + &one;
    let inv = u.recip().expect("u > 0");
    Ok(LimitReport {
        freq_a: u / &u1,
        freq_b: u1.recip().expect("u + 1 > 0"),
        lim_pa_over_n: &one + &inv,
        lim_pb_over_n: u1.clone(),
        lim_r_over_n: u - &inv,
    })
}

/// `g(d) = r·d² - (2 + r)·d + 1`; its root in `(0, 1)` is `Freq(b)`.
fn freq_poly_sign(r: &QuadraticNumber, d: &BigRational) -> i32 {
    let d = QuadraticNumber::from(d.clone());
    let two = QuadraticNumber::integer(2);
    let g = r * &d * &d - (&two + r) * &d + QuadraticNumber::one();
    g.signum()
}

/// Shrinks a bracket around `Freq(b)` until `done(lower, upper)` holds.
fn bisect_freq(r: &QuadraticNumber, done: impl Fn(&BigRational, &BigRational) -> bool) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    while !done(&lo, &hi) {
        let mid = (&lo + &hi) / &two;
        match freq_poly_sign(r, &mid) {
            0 => return (mid.clone(), mid),
            s if s > 0 => lo = mid,
            _ => hi = mid,
        }
    }
    (lo, hi)
}

fn width_at_most(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// `√(4 + r²)` when it lies in the field of `r`.
fn freq_surd(r: &QuadraticNumber) -> Option<QuadraticNumber> {
    let s = (QuadraticNumber::integer(4) + r * r).sqrt()?;
    let same_field = r.is_rational() || s.is_rational() || s.discriminant() == r.discriminant();
    same_field.then_some(s)
}

/// `Freq(b)` of a word with `lim r(n)/n = r`.
///
/// Falls back to a bracket of width at most `2^-bits` when `√(4 + r²)` is not in
/// the field of `r`.
pub fn freq_from_r_limit(r: &ExtendedReal, bits: u32) -> Evaluation {
    let r = match r {
        ExtendedReal::PosInfinity => return Evaluation::Exact(QuadraticNumber::zero().into()),
        ExtendedReal::NegInfinity => return Evaluation::Exact(QuadraticNumber::one().into()),
        ExtendedReal::Finite(r) => r,
    };
    if r.is_zero() {
        return Evaluation::Exact(QuadraticNumber::ratio(1, 2).into());
    }
    if let Some(s) = freq_surd(r) {
        let two = QuadraticNumber::integer(2);
        let d = (&two + r - s) / (&two * r);
        return Evaluation::Exact(d.into());
    }
    let eps = width_at_most(bits);
    let (lower, upper) = bisect_freq(r, |lo, hi| hi - lo <= eps);
    Evaluation::Bracket { lower, upper }
}

/// `(p, q)` with `p = lim p_b(n)/n`, `q = lim p_a(n)/n` and `1/p + 1/q = 1`.
pub fn pq_from_r(r: &ExtendedReal, bits: u32) -> (Evaluation, Evaluation) {
    let fin = |x: QuadraticNumber| Evaluation::Exact(x.into());
    let r = match r {
        ExtendedReal::PosInfinity => return (Evaluation::Exact(ExtendedReal::PosInfinity), fin(QuadraticNumber::one())),
        ExtendedReal::NegInfinity => return (fin(QuadraticNumber::one()), Evaluation::Exact(ExtendedReal::PosInfinity)),
        ExtendedReal::Finite(r) => r,
    };
    if let Some(s) = freq_surd(r) {
        let two = QuadraticNumber::integer(2);
        let p = (&two + r + &s) / &two;
        let q = (&two - r + &s) / &two;
        return (fin(p), fin(q));
    }
    // p = 1/d and q = 1/(1 - d) for d = Freq(b) in (0, 1)
    let eps = width_at_most(bits);
    let one = BigRational::one();
    let (lo, hi) = bisect_freq(r, |lo, hi| {
        if !lo.is_positive() || hi >= &one {
            return false;
        }
        let p_width = lo.recip() - hi.recip();
        let q_width = (&one - hi).recip() - (&one - lo).recip();
        p_width <= eps && q_width <= eps
    });
    let p = Evaluation::Bracket {
        lower: hi.recip(),
        upper: lo.recip(),
    };
    let q = Evaluation::Bracket {
        lower: (&one - &lo).recip(),
        upper: (&one - &hi).recip(),
    };
    (p, q)
}

fn check_frequencies(fa: &QuadraticNumber, fb: &QuadraticNumber) -> Result<()> {
    let sum = fa.checked_add(fb)?;
    if sum != QuadraticNumber::one() || fa.signum() < 0 || fb.signum() < 0 {
        return Err(Error::InvalidFrequencies(format!("({fa}, {fb})")));
    }
    Ok(())
}

/// Letter frequencies of `σ(w)` given those of `w`.
pub fn freq_transfer(
    sigma: &BinarySubstitution,
    fa: &QuadraticNumber,
    fb: &QuadraticNumber,
) -> Result<(QuadraticNumber, QuadraticNumber)> {
    check_frequencies(fa, fb)?;
    let m = sigma.matrix();
    let xa = q(m.m11).checked_mul(fa)?.checked_add(&q(m.m12).checked_mul(fb)?)?;
    let xb = q(m.m21).checked_mul(fa)?.checked_add(&q(m.m22).checked_mul(fb)?)?;
    let (la, lb) = m.column_sums();
    let norm = q(la).checked_mul(fa)?.checked_add(&q(lb).checked_mul(fb)?)?;
    if norm.is_zero() {
        return Err(Error::DegenerateNormalizer);
    }
    Ok((xa.checked_div(&norm)?, xb.checked_div(&norm)?))
}

/// Letter frequencies of `w` recovered from those of `σ(w)`.
pub fn freq_transfer_inverse(
    sigma: &BinarySubstitution,
    fa: &QuadraticNumber,
    fb: &QuadraticNumber,
) -> Result<(QuadraticNumber, QuadraticNumber)> {
    check_frequencies(fa, fb)?;
    let m = sigma.matrix();
    let det = m.det();
    if det == 0 {
        return Err(Error::SingularMatrix(m.to_string()));
    }
    let det = qi(det);
    let ya = q(m.m22).checked_mul(fa)?.checked_sub(&q(m.m12).checked_mul(fb)?)?.checked_div(&det)?;
    let yb = q(m.m11).checked_mul(fb)?.checked_sub(&q(m.m21).checked_mul(fa)?)?.checked_div(&det)?;
    let sum = ya.checked_add(&yb)?;
    if sum.is_zero() {
        return Err(Error::DegenerateNormalizer);
    }
    let (ga, gb) = (ya.checked_div(&sum)?, yb.checked_div(&sum)?);
    if ga.signum() < 0 || gb.signum() < 0 {
        return Err(Error::InvalidFrequencies(format!(
            "({fa}, {fb}) is not the image of any frequency vector under {m}"
        )));
    }
    Ok((ga, gb))
}

/// Positive root of `X² - jX - m`.
pub fn tau_jm(j: u64, m: u64) -> QuadraticNumber {
    let disc = BigRational::from_integer(BigInt::from(j) * BigInt::from(j) + BigInt::from(4u8) * BigInt::from(m));
    let root = QuadraticNumber::sqrt_of_rational(&disc).expect("nonnegative");
    (q(j) + root) * QuadraticNumber::ratio(1, 2)
}

/// Positive root of `X² - kX - 1`; `tau_k(1)` is the golden ratio.
pub fn tau_k(k: u64) -> QuadraticNumber {
    tau_jm(k, 1)
}

/// `(m, n)` when `M = [[m+n, m], [m, n]]`.
pub fn classify_golden(m: &SubstitutionMatrix) -> Option<(u64, u64)> {
    classify_tau_k(m, 1)
}

/// `(m, n)` when `M = [[km+n, m], [m, n]]`, i.e. `[τ_k 1]ᵀ` is a right eigenvector.
pub fn classify_tau_k(mat: &SubstitutionMatrix, k: u64) -> Option<(u64, u64)> {
    if k == 0 || mat.m12 != mat.m21 {
        return None;
    }
    let (m, n) = (mat.m21, mat.m22);
    let diag = (k as u128) * (m as u128) + n as u128;
    (mat.m11 as u128 == diag).then_some((m, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum TauJmVerdict {
    /// `j² + 4m` is not a square; `M` matched `[[t+sj, ms], [s, t]]` or did not.
    Irrational { decomposition: Option<(u64, u64)> },
    /// `j² + 4m = root²`; `residual = u(j+root)² + 2(v-s)(j+root) - 4t` for
    /// `M = [[s, t], [u, v]]`, zero exactly on a match.
    Rational { root: u64, residual: i128 },
}

impl TauJmVerdict {
    pub fn matches(&self) -> bool {
        match self {
            TauJmVerdict::Irrational { decomposition } => decomposition.is_some(),
            TauJmVerdict::Rational { residual, .. } => *residual == 0,
        }
    }
}

/// Whether `[τ_{j,m} 1]ᵀ` is a right eigenvector of `M`, by the matrix-form criterion.
pub fn classify_tau_jm(mat: &SubstitutionMatrix, j: u64, m: u64) -> Result<TauJmVerdict> {
    if j < 1 || m < 1 {
        return Err(Error::Parameter(format!("need j, m >= 1, got j = {j}, m = {m}")));
    }
    let disc = (j as u128) * (j as u128) + 4 * m as u128;
    let root = disc.isqrt();
    if root * root != disc {
        let (s, t) = (mat.m21 as u128, mat.m22 as u128);
        let ok = mat.m11 as u128 == t + s * j as u128 && mat.m12 as u128 == m as u128 * s;
        return Ok(TauJmVerdict::Irrational {
            decomposition: ok.then_some((mat.m21, mat.m22)),
        });
    }
    let [[s, t], [u, v]] = mat.rows().map(|row| row.map(i128::from));
    let jr = j as i128 + root as i128;
    Ok(TauJmVerdict::Rational {
        root: root as u64,
        residual: u * jr * jr + 2 * (v - s) * jr - 4 * t,
    })
}

/// Integer `k` with `lim r(n)/n = k` decided from the matrix shape:
/// `+k` for `[[km+n, m], [m, n]]`, `-k` for `[[n, m], [m, km+n]]`, `0` for
/// equal row sums, `None` otherwise.
pub fn classify_linear_limit(mat: &SubstitutionMatrix) -> Result<Option<i64>> {
    require_primitive(mat)?;
    if mat.m11 + mat.m12 == mat.m21 + mat.m22 {
        return Ok(Some(0));
    }
    if mat.m12 != mat.m21 {
        return Ok(None);
    }
    let m = mat.m12;
    let (hi, lo, sign) = if mat.m11 > mat.m22 {
        (mat.m11, mat.m22, 1)
    } else {
        (mat.m22, mat.m11, -1)
    };
    let gap = hi - lo;
    if gap % m != 0 {
        return Ok(None);
    }
    Ok(i64::try_from(gap / m).ok().map(|k| sign * k))
}

/// `p_b(n) = a·p_a(n) + b·n + c` for the fixed point of `σ_{k,l,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PisaClosedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl PisaClosedForm {
    pub fn p_b(&self, p_a: i64, n: i64) -> i64 {
        self.a * p_a + self.b * n + self.c
    }

    /// `r(n) = (a-1)·p_a(n) + b·n + c`.
    pub fn r(&self, p_a: i64, n: i64) -> i64 {
        (self.a - 1) * p_a + self.b * n + self.c
    }

    /// `r(n)` written through `p_b`: `((a-1)/a)·p_b(n) + (b/a)·n + c/a`.
    pub fn r_from_pb(&self, p_b: i64, n: i64) -> BigRational {
        let frac = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(self.a));
        frac(self.a - 1) * BigRational::from_integer(p_b.into())
            + frac(self.b) * BigRational::from_integer(n.into())
            + frac(self.c)
    }
}

pub fn pisa_closed_form(k: u64, l: u64, m: u64) -> Result<PisaClosedForm> {
    pisa_pisot_status(k as usize, l as usize, m as usize)?;
    let to_i = |x: i128| i64::try_from(x).map_err(|_| Error::Parameter(format!("pisa parameter overflow: {x}")));
    let (k, l, m) = (k as i128, l as i128, m as i128);
    Ok(PisaClosedForm {
        a: to_i(m)?,
        b: to_i(k + l + 1 - m)?,
        c: to_i(m - l - 1)?,
    })
}

/// Serializable summary of one substitution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub substitution: String,
    pub matrix: SubstitutionMatrix,
    pub primitive: bool,
    pub perron_frobenius: Option<PFData>,
    pub limits: Option<LimitReport>,
    pub golden_form: Option<(u64, u64)>,
    pub linear_class: Option<i64>,
    pub pisa: Option<PisaReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PisaReport {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub pisot: PisotStatus,
    pub closed_form: PisaClosedForm,
}

pub fn analyze(sigma: &BinarySubstitution) -> Result<SpectralReport> {
    let matrix = sigma.matrix();
    let primitive = matrix.is_primitive();
    let (perron_frobenius, limits, linear_class) = if primitive {
        let pf = pf_data(&matrix)?;
        let limits = limits_from_u(&pf.u)?;
        (Some(pf), Some(limits), classify_linear_limit(&matrix)?)
    } else {
        (None, None, None)
    };
    let pisa = match sigma.as_pisa() {
        Some((k, l, m)) => Some(PisaReport {
            k,
            l,
            m,
            pisot: pisa_pisot_status(k, l, m)?,
            closed_form: pisa_closed_form(k as u64, l as u64, m as u64)?,
        }),
        None => None,
    };
    Ok(SpectralReport {
        substitution: sigma.to_string(),
        matrix,
        primitive,
        perron_frobenius,
        limits,
        golden_form: classify_golden(&matrix),
        linear_class,
        pisa,
    })
}
