//! Certified Diophantine approximation for rotation amounts.
//!
//! The scans are exhaustive in `|k|`, ordered `1, -1, 2, -2, ...`, so the
//! returned `k` is the minimal one (positive on ties). A 128-bit fixed-point
//! filter decides most candidates; anything it cannot separate from the
//! tolerance is settled with exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::number_field::{independent_with_one, CircleNumber, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("no k with 1 <= |k| <= {k_max} reaches the tolerance")]
    NotFound { k_max: u64 },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("{alphas} rotation amount(s) but {targets} target(s)")]
    DimensionMismatch { alphas: usize, targets: usize },
    #[error("rotation amounts are not linearly independent over the rationals together with 1")]
    Dependent,
}

/// A certified hit: `max_j ‖k·alpha_j − target_j‖ = achieved < tol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    pub k: i64,
    pub achieved: CircleNumber,
    /// Candidates examined in scan order up to and including `k`.
    pub evaluations: u64,
}

/// Distance from `x` to the nearest integer.
pub fn circle_distance(x: &CircleNumber) -> CircleNumber {
    let f = x.reduce_mod1();
    let g = &CircleNumber::one() - &f;
    if g < f {
        g
    } else {
        f
    }
}

fn quotients_of_rational(mut q: BigRational, depth: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    while out.len() < depth && !q.is_zero() {
        let r = q.recip();
        let a = r.floor();
        out.push(a.to_integer());
        q = r - a;
    }
    out
}

/// First `depth` partial quotients `a_1, a_2, ...` of `a = [0; a_1, a_2, ...]`.
///
/// Rational inputs may terminate early. Irrational inputs are expanded from
/// dyadic enclosures; a quotient is reported only once both endpoints of
/// the enclosure agree on it and continue past it.
pub fn continued_fraction(a: &CircleNumber, depth: usize) -> Vec<u64> {
    let frac = a.reduce_mod1();
    let to_u64 = |v: Vec<BigInt>| {
        v.into_iter()
            .map(|x| x.to_u64().expect("partial quotient fits in u64"))
            .collect()
    };
    if frac.is_rational() {
        return to_u64(quotients_of_rational(frac.rational_part().clone(), depth));
    }
    let mut precision = 64;
    loop {
        let cell = frac.enclose(precision);
        let lo = quotients_of_rational(cell.lo, depth + 1);
        let hi = quotients_of_rational(cell.hi, depth + 1);
        let common = lo.iter().zip(&hi).take_while(|(x, y)| x == y).count();
        let safe = common
            .min(lo.len().saturating_sub(1))
            .min(hi.len().saturating_sub(1));
        if safe >= depth {
            return to_u64(lo[..depth].to_vec());
        }
        precision *= 2;
    }
}

/// Distinct gap lengths between consecutive points of `{j·alpha mod 1 : 0 <= j <= k}`.
pub fn three_distance_gaps(alpha: &CircleNumber, k: u64) -> Vec<CircleNumber> {
    let mut points: Vec<CircleNumber> = (0..=k as i64)
        .map(|j| alpha.scale_int(j).reduce_mod1())
        .collect();
    points.sort();
    let mut gaps: Vec<CircleNumber> = points.windows(2).map(|w| &w[1] - &w[0]).collect();
    gaps.push(&(&points[0] + &CircleNumber::one()) - points.last().expect("k >= 0"));
    gaps.sort();
    gaps.dedup();
    gaps
}

const FIXED_BITS: u32 = 128;
const BLOCK: u64 = 4096;

/// `floor(x 2^128)` of `x` in `[0, 1)`.
fn fixed_floor(x: &CircleNumber) -> u128 {
    x.scale(&BigRational::from_integer(BigInt::one() << FIXED_BITS))
        .floor()
        .to_u128()
        .expect("value in [0, 1)")
}

/// Precomputed data for scanning `max_j ‖k·alpha_j − target_j‖ < tol`.
pub struct Scanner {
    alphas: Vec<CircleNumber>,
    targets: Vec<CircleNumber>,
    tol: CircleNumber,
    fixed: Vec<(u128, u128)>,
    tol_lo: u128,
    tol_hi: u128,
}

enum Verdict {
    Yes,
    No,
    Unsure,
}

impl Scanner {
    pub fn new(
        alphas: &[CircleNumber],
        targets: &[CircleNumber],
        tol: &CircleNumber,
    ) -> Result<Self, DiophantineError> {
        if alphas.len() != targets.len() {
            return Err(DiophantineError::DimensionMismatch {
                alphas: alphas.len(),
                targets: targets.len(),
            });
        }
        if tol.sign() != Sign::Positive {
            return Err(DiophantineError::BadTolerance);
        }
        if !independent_with_one(alphas) {
            return Err(DiophantineError::Dependent);
        }
        let alphas: Vec<CircleNumber> = alphas.iter().map(CircleNumber::reduce_mod1).collect();
        let targets: Vec<CircleNumber> = targets.iter().map(CircleNumber::reduce_mod1).collect();
        let fixed = alphas
            .iter()
            .zip(&targets)
            .map(|(a, t)| (fixed_floor(a), fixed_floor(t)))
            .collect();
        // distances never exceed 1/2, so a larger tolerance accepts everything
        let half = CircleNumber::ratio(1, 2);
        let (tol_lo, tol_hi) = if *tol > half {
            (1u128 << 127, u128::MAX)
        } else {
            let f = fixed_floor(tol);
            (f, f.saturating_add(1))
        };
        Ok(Scanner {
            alphas,
            targets,
            tol: tol.clone(),
            fixed,
            tol_lo,
            tol_hi,
        })
    }

    fn quick(&self, k: i64) -> Verdict {
        let km = k as i128 as u128;
        // each fixed-point distance is within |k| + 1 units of the true one
        let err = k.unsigned_abs() as u128 + 1;
        let mut all_yes = true;
        for &(a, t) in &self.fixed {
            let diff = km.wrapping_mul(a).wrapping_sub(t);
            let d = diff.min(diff.wrapping_neg());
            if d.saturating_sub(err) > self.tol_hi {
                return Verdict::No;
            }
            if d.saturating_add(err) >= self.tol_lo {
                all_yes = false;
            }
        }
        if all_yes {
            Verdict::Yes
        } else {
            Verdict::Unsure
        }
    }

    /// Exact `max_j ‖k·alpha_j − target_j‖`.
    pub fn distance(&self, k: i64) -> CircleNumber {
        self.alphas
            .iter()
            .zip(&self.targets)
            .map(|(a, t)| circle_distance(&(&a.scale_int(k) - t)))
            .max()
            .expect("at least one component")
    }

    fn check(&self, k: i64) -> Option<CircleNumber> {
        match self.quick(k) {
            Verdict::No => None,
            Verdict::Yes | Verdict::Unsure => {
                let d = self.distance(k);
                (d < self.tol).then_some(d)
            }
        }
    }

    fn scan_block(&self, from: u64, to: u64) -> Option<(i64, CircleNumber)> {
        (from..=to).find_map(|m| {
            let k = m as i64;
            if let Some(d) = self.check(k) {
                return Some((k, d));
            }
            self.check(-k).map(|d| (-k, d))
        })
    }

    /// Minimal `k` with `from <= |k| <= to`, in scan order.
    pub fn scan(&self, from: u64, to: u64) -> Option<ApproxResult> {
        let from = from.max(1);
        if from > to {
            return None;
        }
        let blocks = (to - from) / BLOCK + 1;
        let hit = (0..blocks).into_par_iter().find_map_first(|b| {
            let lo = from + b * BLOCK;
            let hi = (lo + BLOCK - 1).min(to);
            self.scan_block(lo, hi)
        })?;
        let (k, achieved) = hit;
        let evaluations = 2 * (k.unsigned_abs() - 1) + if k > 0 { 1 } else { 2 };
        Some(ApproxResult {
            k,
            achieved,
            evaluations,
        })
    }
}

/// Smallest `|k| <= k_max`, `k != 0`, with `‖k·alpha − target‖ < tol`.
pub fn best_mod1_approx(
    alpha: &CircleNumber,
    target: &CircleNumber,
    tol: &CircleNumber,
    k_max: u64,
) -> Result<ApproxResult, DiophantineError> {
    simultaneous_approx(
        std::slice::from_ref(alpha),
        std::slice::from_ref(target),
        tol,
        k_max,
    )
}

/// Smallest `|k| <= k_max`, `k != 0`, with `max_j ‖k·alpha_j − target_j‖ < tol`.
pub fn simultaneous_approx(
    alphas: &[CircleNumber],
    targets: &[CircleNumber],
    tol: &CircleNumber,
    k_max: u64,
) -> Result<ApproxResult, DiophantineError> {
    Scanner::new(alphas, targets, tol)?
        .scan(1, k_max)
        .ok_or(DiophantineError::NotFound { k_max })
}

/// Like [`simultaneous_approx`], doubling `k_max` after each miss up to
/// `k_cap`. Already scanned ranges are not repeated.
pub fn simultaneous_approx_growing(
    alphas: &[CircleNumber],
    targets: &[CircleNumber],
    tol: &CircleNumber,
    k_max: u64,
    k_cap: u64,
) -> Result<ApproxResult, DiophantineError> {
    let scanner = Scanner::new(alphas, targets, tol)?;
    let mut from = 1;
    let mut to = k_max.min(k_cap).max(1);
    loop {
        if let Some(hit) = scanner.scan(from, to) {
            return Ok(hit);
        }
        if to >= k_cap {
            return Err(DiophantineError::NotFound { k_max: to });
        }
        from = to + 1;
        to = to.saturating_mul(2).min(k_cap);
    }
}
