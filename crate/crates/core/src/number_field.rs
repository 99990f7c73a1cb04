//! Exact linear arithmetic over square roots of squarefree integers.
//!
//! A [`CircleNumber`] is `q0 + q1*sqrt(d1) + ... + qm*sqrt(dm)` with rational
//! coefficients and distinct squarefree `d_j >= 2`. Because `{1, sqrt(d1), ...}`
//! is linearly independent over the rationals, equality and the zero test are
//! purely syntactic on the canonical form. Ordering is decided by certified
//! dyadic enclosures of each square root, refined by precision doubling until
//! the enclosure excludes zero.
//!
//! Only the operations needed for circle maps are provided: addition,
//! subtraction, negation, scaling by rationals, floor and reduction mod 1.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Fractional bits of the first enclosure tried by [`CircleNumber::sign`].
pub const INITIAL_PRECISION: u32 = 32;

/// Fractional bits of the enclosure cached on every number for fast ordering.
const CACHE_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("cannot parse number `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("{0} is not a squarefree integer >= 2")]
    NotSquarefree(u64),
    #[error("duplicate basis element {0}")]
    DuplicateBasis(u64),
}

/// Result of an exact sign test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Exact number `q0 + sum_j q_j * sqrt(d_j)` in canonical form.
pub struct CircleNumber {
    rational: BigRational,
    /// Sorted by radicand, coefficients nonzero.
    surds: Vec<(u64, BigRational)>,
    approx: OnceLock<Option<(i128, i128)>>,
}

impl Clone for CircleNumber {
    fn clone(&self) -> Self {
        CircleNumber {
            rational: self.rational.clone(),
            surds: self.surds.clone(),
            approx: self.approx.clone(),
        }
    }
}

impl fmt::Debug for CircleNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircleNumber({self})")
    }
}

impl PartialEq for CircleNumber {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational && self.surds == other.surds
    }
}

impl Eq for CircleNumber {}

impl Hash for CircleNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rational.hash(state);
        self.surds.hash(state);
    }
}

impl Default for CircleNumber {
    fn default() -> Self {
        Self::zero()
    }
}

/// Returns `true` when `n >= 2` has no repeated prime factor.
pub fn is_squarefree(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Splits `n` into `(s, d)` with `n = s^2 * d` and `d` squarefree (or 1).
fn square_part(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut d = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    (s, d * m)
}

fn floor_div(num: &BigInt, den: &BigInt) -> BigInt {
    num.div_floor(den)
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    -((-num).div_floor(den))
}

impl CircleNumber {
    fn from_parts(rational: BigRational, mut surds: Vec<(u64, BigRational)>) -> Self {
        surds.retain(|(_, c)| !c.is_zero());
        CircleNumber {
            rational,
            surds,
            approx: OnceLock::new(),
        }
    }

    pub fn zero() -> Self {
        Self::from_parts(BigRational::zero(), Vec::new())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_parts(q, Vec::new())
    }

    /// `p/q` as a number. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(n)`, with square factors pulled out (`sqrt(8) = 2*sqrt(2)`).
    pub fn sqrt(n: u64) -> Self {
        let (s, d) = square_part(n);
        let coeff = BigRational::from_integer(BigInt::from(s));
        if n == 0 {
            Self::zero()
        } else if d == 1 {
            Self::from_rational(coeff)
        } else {
            Self::from_parts(BigRational::zero(), vec![(d, coeff)])
        }
    }

    /// `coeff * sqrt(d)` for an already squarefree `d`.
    pub fn surd(d: u64, coeff: BigRational) -> Result<Self, NumberError> {
        if !is_squarefree(d) {
            return Err(NumberError::NotSquarefree(d));
        }
        Ok(Self::from_parts(BigRational::zero(), vec![(d, coeff)]))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    /// Nonzero surd coefficients, ordered by radicand.
    pub fn surd_coeffs(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.surds.iter().map(|(d, c)| (*d, c))
    }

    pub fn surd_coeff(&self, d: u64) -> Option<&BigRational> {
        self.surds
            .binary_search_by_key(&d, |(k, _)| *k)
            .ok()
            .map(|i| &self.surds[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.surds.is_empty() && self.rational.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surds.is_empty()
    }

    pub fn is_integer(&self) -> bool {
        self.surds.is_empty() && self.rational.is_integer()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self::from_parts(
            &self.rational * q,
            self.surds.iter().map(|(d, c)| (*d, c * q)).collect(),
        )
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self.clone()
        }
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let rational = if negate_other {
            &self.rational - &other.rational
        } else {
            &self.rational + &other.rational
        };
        let mut surds = Vec::with_capacity(self.surds.len() + other.surds.len());
        let (mut i, mut j) = (0, 0);
        while i < self.surds.len() || j < other.surds.len() {
            let take_left = j >= other.surds.len()
                || (i < self.surds.len() && self.surds[i].0 < other.surds[j].0);
            let take_right = i >= self.surds.len()
                || (j < other.surds.len() && other.surds[j].0 < self.surds[i].0);
            if take_left {
                surds.push(self.surds[i].clone());
                i += 1;
            } else if take_right {
                let (d, c) = &other.surds[j];
                surds.push((*d, if negate_other { -c } else { c.clone() }));
                j += 1;
            } else {
                let (d, a) = &self.surds[i];
                let b = &other.surds[j].1;
                surds.push((*d, if negate_other { a - b } else { a + b }));
                i += 1;
                j += 1;
            }
        }
        Self::from_parts(rational, surds)
    }

    /// Certified integer bounds `lo <= self * 2^p <= hi`.
    pub fn dyadic_bounds(&self, p: u32) -> (BigInt, BigInt) {
        let scale = BigInt::one() << p;
        let num = self.rational.numer() * &scale;
        let den = self.rational.denom();
        let mut lo = floor_div(&num, den);
        let mut hi = ceil_div(&num, den);
        for (d, c) in &self.surds {
            let n = c.numer();
            let den = c.denom();
            let radicand = ((n * n) * BigInt::from(*d)) << (2 * p);
            let s = radicand.sqrt();
            // |n| sqrt(d) 2^p lies in [s, s + 1)
            let t_lo = floor_div(&s, den);
            let t_hi = ceil_div(&(s + 1u32), den);
            if n.is_negative() {
                lo -= t_hi;
                hi -= t_lo;
            } else {
                lo += t_lo;
                hi += t_hi;
            }
        }
        (lo, hi)
    }

    fn cached_bounds(&self) -> Option<(i128, i128)> {
        *self.approx.get_or_init(|| {
            let (lo, hi) = self.dyadic_bounds(CACHE_BITS);
            Some((lo.to_i128()?, hi.to_i128()?))
        })
    }

    /// Exact sign; purely syntactic for zero, enclosure-refined otherwise.
    pub fn sign(&self) -> Sign {
        if self.surds.is_empty() {
            return match self.rational.numer().sign() {
                num_bigint::Sign::Minus => Sign::Negative,
                num_bigint::Sign::NoSign => Sign::Zero,
                num_bigint::Sign::Plus => Sign::Positive,
            };
        }
        if let Some((lo, hi)) = self.cached_bounds() {
            if lo > 0 {
                return Sign::Positive;
            }
            if hi < 0 {
                return Sign::Negative;
            }
        }
        let mut p = INITIAL_PRECISION;
        loop {
            let (lo, hi) = self.dyadic_bounds(p);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            p *= 2;
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        if self.surds.is_empty() {
            return self.rational.floor().to_integer();
        }
        let mut p = INITIAL_PRECISION;
        loop {
            let (lo, hi) = self.dyadic_bounds(p);
            let f_lo = lo >> p;
            let f_hi = hi >> p;
            if f_lo == f_hi {
                return f_lo;
            }
            p *= 2;
        }
    }

    /// `self - k` for the unique integer `k` putting the result in `[0, 1)`.
    pub fn reduce_mod1(&self) -> Self {
        let k = self.floor();
        if k.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.rational -= BigRational::from_integer(k);
        out.approx = OnceLock::new();
        out
    }

    /// Interval of width at most `2^-precision` containing `self`.
    ///
    /// Rational inputs give the degenerate interval `[q, q]`. Otherwise the
    /// result is the dyadic cell `[floor(x 2^p), floor(x 2^p) + 1] / 2^p`,
    /// so enclosures are nested as the precision grows.
    pub fn enclose(&self, precision: u32) -> RationalInterval {
        if self.surds.is_empty() {
            return RationalInterval {
                lo: self.rational.clone(),
                hi: self.rational.clone(),
            };
        }
        let scaled = self.scale(&BigRational::from_integer(BigInt::one() << precision));
        let f = scaled.floor();
        let den = BigInt::one() << precision;
        RationalInterval {
            lo: BigRational::new(f.clone(), den.clone()),
            hi: BigRational::new(f + 1u32, den),
        }
    }

    /// Decimal bounds `(lo, hi)` with `digits` fractional digits enclosing `self`.
    pub fn decimal_enclosure(&self, digits: u32) -> (String, String) {
        let ten = BigInt::from(10u32).pow(digits);
        let scaled = self.scale(&BigRational::from_integer(ten));
        let lo = scaled.floor();
        let hi = if scaled.is_integer() {
            lo.clone()
        } else {
            &lo + 1u32
        };
        (format_decimal(&lo, digits), format_decimal(&hi, digits))
    }

    /// Truncated decimal rendering (lower end of [`Self::decimal_enclosure`]).
    pub fn to_decimal(&self, digits: u32) -> String {
        self.decimal_enclosure(digits).0
    }

    /// Floating value, for diagnostics and Monte Carlo oracles only.
    pub fn to_f64(&self) -> f64 {
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (d, c) in &self.surds {
            v += c.to_f64().unwrap_or(f64::NAN) * (*d as f64).sqrt();
        }
        v
    }
}

fn format_decimal(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.is_negative();
    let mag = scaled.abs().to_string();
    let digits = digits as usize;
    let padded = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = padded.split_at(padded.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl PartialOrd for CircleNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CircleNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        if let (Some((al, ah)), Some((bl, bh))) = (self.cached_bounds(), other.cached_bounds()) {
            if ah < bl {
                return Ordering::Less;
            }
            if bh < al {
                return Ordering::Greater;
            }
        }
        (self - other).sign().to_ordering()
    }
}

impl<'a> Add<&'a CircleNumber> for &'a CircleNumber {
    type Output = CircleNumber;
    fn add(self, rhs: &CircleNumber) -> CircleNumber {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a CircleNumber> for &'a CircleNumber {
    type Output = CircleNumber;
    fn sub(self, rhs: &CircleNumber) -> CircleNumber {
        self.combine(rhs, true)
    }
}

impl Add for CircleNumber {
    type Output = CircleNumber;
    fn add(self, rhs: CircleNumber) -> CircleNumber {
        self.combine(&rhs, false)
    }
}

impl Sub for CircleNumber {
    type Output = CircleNumber;
    fn sub(self, rhs: CircleNumber) -> CircleNumber {
        self.combine(&rhs, true)
    }
}

impl Neg for &CircleNumber {
    type Output = CircleNumber;
    fn neg(self) -> CircleNumber {
        CircleNumber::from_parts(
            -&self.rational,
            self.surds.iter().map(|(d, c)| (*d, -c)).collect(),
        )
    }
}

impl Neg for CircleNumber {
    type Output = CircleNumber;
    fn neg(self) -> CircleNumber {
        -&self
    }
}

impl std::iter::Sum for CircleNumber {
    fn sum<I: Iterator<Item = CircleNumber>>(iter: I) -> Self {
        iter.fold(CircleNumber::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for CircleNumber {
    fn from(n: i64) -> Self {
        CircleNumber::from_integer(n)
    }
}

impl From<BigRational> for CircleNumber {
    fn from(q: BigRational) -> Self {
        CircleNumber::from_rational(q)
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CircleNumber {
    /// Surd terms by increasing radicand, then the rational constant:
    /// `2*sqrt(5) - 4`, `-3/2*sqrt(2) + 1/3`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let write_sign = |f: &mut fmt::Formatter<'_>, negative: bool, first: &mut bool| {
            let r = match (*first, negative) {
                (true, true) => write!(f, "-"),
                (true, false) => Ok(()),
                (false, true) => write!(f, " - "),
                (false, false) => write!(f, " + "),
            };
            *first = false;
            r
        };
        for (d, c) in &self.surds {
            write_sign(f, c.is_negative(), &mut first)?;
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{}*sqrt({d})", format_rational(&mag))?;
            }
        }
        if !self.rational.is_zero() {
            write_sign(f, self.rational.is_negative(), &mut first)?;
            write!(f, "{}", format_rational(&self.rational.abs()))?;
        }
        Ok(())
    }
}

/// Parses a plain rational literal: `3`, `-2/7`, `0.125`, `1e-6`, `2.5E3`.
pub fn parse_rational(input: &str) -> Result<BigRational, NumberError> {
    let err = |reason: &str| NumberError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(p / q);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = body[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("missing digits"));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err("unexpected character"));
    }
    let digits: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| err("bad digits"))?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut q = BigRational::from_integer(digits);
    if shift >= 0 {
        q *= BigRational::from_integer(ten.pow(shift as u32));
    } else {
        q /= BigRational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(if neg { -q } else { q })
}

impl FromStr for CircleNumber {
    type Err = NumberError;

    /// Accepts sums of terms `c`, `c*sqrt(n)`, `sqrt(n)`, `c sqrt(n)` with
    /// rational or decimal `c`; `n` need not be squarefree.
    fn from_str(input: &str) -> Result<Self, NumberError> {
        let err = |reason: &str| NumberError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        // Split into signed terms, keeping exponent signs (`1e-6`) attached.
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            let c = bytes[i];
            if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'(' | b'/' | b'*')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut total = CircleNumber::zero();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let value = match body.find("sqrt(") {
                Some(pos) => {
                    let close = body[pos..].find(')').ok_or_else(|| err("unclosed sqrt("))? + pos;
                    if close + 1 != body.len() {
                        return Err(err("trailing characters after sqrt(...)"));
                    }
                    let radicand: u64 = body[pos + 5..close]
                        .parse()
                        .map_err(|_| err("sqrt argument must be a nonnegative integer"))?;
                    let coeff = body[..pos].trim_end_matches('*');
                    let coeff = if coeff.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(coeff)?
                    };
                    CircleNumber::sqrt(radicand).scale(&coeff)
                }
                None => CircleNumber::from_rational(parse_rational(body)?),
            };
            total = if neg { total - value } else { total + value };
        }
        Ok(total)
    }
}

/// Ordered list of distinct squarefree radicands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IrrationalBasis(Vec<u64>);

impl IrrationalBasis {
    pub fn new(mut radicands: Vec<u64>) -> Result<Self, NumberError> {
        for &d in &radicands {
            if !is_squarefree(d) {
                return Err(NumberError::NotSquarefree(d));
            }
        }
        radicands.sort_unstable();
        for w in radicands.windows(2) {
            if w[0] == w[1] {
                return Err(NumberError::DuplicateBasis(w[0]));
            }
        }
        Ok(IrrationalBasis(radicands))
    }

    /// Smallest basis covering every surd that appears in `numbers`.
    pub fn spanning<'a>(numbers: impl IntoIterator<Item = &'a CircleNumber>) -> Self {
        let mut ds: Vec<u64> = numbers
            .into_iter()
            .flat_map(|x| x.surd_coeffs().map(|(d, _)| d))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        IrrationalBasis(ds)
    }

    pub fn radicands(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Surd coordinates of `x`; `None` if `x` uses a radicand outside the basis.
    pub fn coordinates(&self, x: &CircleNumber) -> Option<Vec<BigRational>> {
        if x.surd_coeffs()
            .any(|(d, _)| self.0.binary_search(&d).is_err())
        {
            return None;
        }
        Some(
            self.0
                .iter()
                .map(|d| x.surd_coeff(*d).cloned().unwrap_or_else(BigRational::zero))
                .collect(),
        )
    }
}

/// Rank of a rational matrix given as rows, by exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.resize(cols, BigRational::zero());
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for c in col..cols {
                    row[c] -= &factor * &pivot_row[c];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True when `1, xs[0], ..., xs[n-1]` are linearly independent over the
/// rationals, i.e. the surd parts of the `xs` are independent vectors.
pub fn independent_with_one(xs: &[CircleNumber]) -> bool {
    let basis = IrrationalBasis::spanning(xs);
    let rows: Vec<Vec<BigRational>> = xs
        .iter()
        .map(|x| basis.coordinates(x).expect("basis spans inputs"))
        .collect();
    rational_rank(&rows) == xs.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> CircleNumber {
        s.parse().unwrap()
    }

    #[test]
    fn additive_examples() {
        assert!((n("sqrt(2) - 1") + n("1 - sqrt(2)")).is_zero());
        assert_eq!(n("sqrt(2) - 1") + n("sqrt(2) - 1"), n("2*sqrt(2) - 2"));
        let s = n("sqrt(5) - 2") + n("sqrt(2) - 1");
        assert_eq!(s, n("sqrt(2) + sqrt(5) - 3"));
        // high-precision oracle: 0.650281539872884745...
        assert!((s.to_f64() - 0.650_281_539_872_884_7).abs() < 1e-12);
    }

    #[test]
    fn zero_test_is_syntactic() {
        assert!(CircleNumber::zero().is_zero());
        assert!((n("sqrt(2) - 1") - n("sqrt(2) - 1")).is_zero());
        let a = n("sqrt(2) - 1").scale_int(7);
        let b = n("5 - 7 + 7*sqrt(2) - 5");
        assert!((a - b).is_zero());
        assert!(!n("sqrt(8) - 2*sqrt(2) + 1/1000000000000").is_zero());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(n("sqrt(2) - 1").sign(), Sign::Positive);
        // oracle: -0.178145584873305...
        assert_eq!((n("sqrt(5) - 2") - n("sqrt(2) - 1")).sign(), Sign::Negative);
        // 12*sqrt(2) = 16.9705627..., so this Pell residual is negative
        assert_eq!(n("12*sqrt(2) - 17").sign(), Sign::Negative);
        assert_eq!(n("17 - 12*sqrt(2)").sign(), Sign::Positive);
        // deep Pell convergent: |665857 - 470832 sqrt(2)| ~ 7.5e-13
        assert_eq!(n("665857 - 470832*sqrt(2)").sign(), Sign::Positive);
        assert_eq!(n("470832*sqrt(2) - 665857").sign(), Sign::Negative);
    }

    #[test]
    fn reduce_mod1_examples() {
        let r = n("sqrt(2) - 1").scale_int(5).reduce_mod1();
        assert_eq!(r, n("5*sqrt(2) - 7"));
        assert!((r.to_f64() - 0.071_067_811_865_475_24).abs() < 1e-12);
        assert_eq!(CircleNumber::zero().reduce_mod1(), CircleNumber::zero());
        let r = (-n("sqrt(2) - 1")).reduce_mod1();
        assert_eq!(r, n("2 - sqrt(2)"));
        assert_eq!(n("-3").reduce_mod1(), CircleNumber::zero());
        assert_eq!(n("-1/3").reduce_mod1(), n("2/3"));
    }

    #[test]
    fn enclose_examples() {
        let z = CircleNumber::zero().enclose(50);
        assert!(z.lo.is_zero() && z.hi.is_zero());
        // integer-sqrt oracle: floor(1024 * 0.41421356...) = 424
        let e = n("sqrt(2) - 1").enclose(10);
        assert_eq!(e.lo, BigRational::new(424.into(), 1024.into()));
        assert_eq!(e.width(), BigRational::new(1.into(), 1024.into()));
        // floor(2^20 * 0.2360679774997...) = 247535
        let e = n("sqrt(5) - 2").enclose(20);
        assert_eq!(e.lo, BigRational::new(247_535.into(), (1 << 20).into()));
        assert!(e.width() <= BigRational::new(1.into(), (1 << 20).into()));
    }

    #[test]
    fn enclosures_are_nested() {
        let x = n("3/7*sqrt(3) - 5/11*sqrt(13) + 1/9");
        let mut prev = x.enclose(1);
        for p in 2..80 {
            let cur = x.enclose(p);
            assert!(prev.contains_interval(&cur), "precision {p}");
            prev = cur;
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(n("2*sqrt(5) - 4").to_string(), "2*sqrt(5) - 4");
        assert_eq!(n("-4 + 2 sqrt(5)").to_string(), "2*sqrt(5) - 4");
        assert_eq!(n("1 - sqrt(2)").to_string(), "-sqrt(2) + 1");
        assert_eq!(n("0.1").to_string(), "1/10");
        assert_eq!(n("1e-6").to_string(), "1/1000000");
        assert_eq!(n("sqrt(8)").to_string(), "2*sqrt(2)");
        assert_eq!(n("sqrt(9)").to_string(), "3");
        assert_eq!(n("3/2*sqrt(2) - 1/3").to_string(), "3/2*sqrt(2) - 1/3");
        assert_eq!(n("sqrt(2) + 1e-6").to_string(), "sqrt(2) + 1/1000000");
        assert!("sqrt(2".parse::<CircleNumber>().is_err());
        assert!("abc".parse::<CircleNumber>().is_err());
        assert!("1/0".parse::<CircleNumber>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        let x = n("2*sqrt(5) - 4");
        assert_eq!(
            x.decimal_enclosure(12),
            ("0.472135954999".to_string(), "0.472135955000".to_string())
        );
        assert_eq!(
            n("1/4").decimal_enclosure(3),
            ("0.250".into(), "0.250".into())
        );
        assert_eq!(n("-1/4").to_decimal(2), "-0.25");
    }

    #[test]
    fn squarefree_helpers() {
        assert!(is_squarefree(2) && is_squarefree(30) && !is_squarefree(12) && !is_squarefree(1));
        assert_eq!(square_part(72), (6, 2));
        assert!(IrrationalBasis::new(vec![5, 2]).is_ok());
        assert!(IrrationalBasis::new(vec![4]).is_err());
        assert!(IrrationalBasis::new(vec![2, 2]).is_err());
    }

    #[test]
    fn independence() {
        assert!(independent_with_one(&[n("sqrt(2) - 1"), n("sqrt(3) - 1")]));
        assert!(!independent_with_one(&[
            n("sqrt(2) - 1"),
            n("2*sqrt(2) - 1/2")
        ]));
        assert!(!independent_with_one(&[n("1/2")]));
        assert!(independent_with_one(&[
            n("sqrt(2) + sqrt(3)"),
            n("sqrt(2) - sqrt(3)")
        ]));
    }
}
