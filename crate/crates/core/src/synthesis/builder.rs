use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::circle_maps::{ArcSet, PiecewiseRotation, RotationSystem};
use crate::diophantine::{
    circle_distance, simultaneous_approx_growing, ApproxResult, DiophantineError,
};
use crate::number_field::{CircleNumber, Sign};

use super::certificate::{certify, BudgetLine, SynthesisCertificate};
use super::word::{GeneratorWord, Token};
use super::SynthesisError;

/// Diophantine search limits: scans start at `k_max` and double up to `k_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisParams {
    pub k_max: u64,
    pub k_cap: u64,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        SynthesisParams {
            k_max: 10_000,
            k_cap: 1 << 31,
        }
    }
}

/// Each failed certification halves every Diophantine tolerance; this many
/// attempts are made before giving up.
const ATTEMPTS: u32 = 6;

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn times(x: &CircleNumber, p: i64, q: i64) -> CircleNumber {
    x.scale(&ratio(p, q))
}

fn min(a: CircleNumber, b: CircleNumber) -> CircleNumber {
    if b < a {
        b
    } else {
        a
    }
}

fn smallness_violation(
    system: &RotationSystem,
    i: usize,
    eps: &CircleNumber,
) -> Option<&'static str> {
    let alpha = system.alpha(i);
    let beta = system.beta();
    let one = CircleNumber::one();
    if eps.sign() != Sign::Positive {
        Some("eps > 0")
    } else if eps.scale_int(2) >= *beta {
        Some("2 eps < beta")
    } else if &(eps + beta) >= alpha {
        Some("eps + beta < alpha_i")
    } else if &(alpha + beta) + eps >= one {
        Some("alpha_i + beta + eps < 1")
    } else if eps.scale_int(4) >= *alpha {
        Some("4 eps < alpha_i")
    } else {
        None
    }
}

/// The block preconditions on circle `i`: `2ε < β`, `ε + β < α_i`,
/// `α_i + β + ε < 1` and `4ε < α_i`.
pub fn check_smallness(
    system: &RotationSystem,
    i: usize,
    eps: &CircleNumber,
) -> Result<(), SynthesisError> {
    check_circle(system, i)?;
    match smallness_violation(system, i, eps) {
        None => Ok(()),
        Some(condition) => Err(SynthesisError::Smallness {
            eps: eps.to_string(),
            condition: condition.to_string(),
        }),
    }
}

/// `1/20`, halved until the smallness conditions hold on circle `i`.
pub fn auto_eps(system: &RotationSystem, i: usize) -> CircleNumber {
    let mut eps = CircleNumber::ratio(1, 20);
    while smallness_violation(system, i, &eps).is_some() {
        eps = times(&eps, 1, 2);
    }
    eps
}

fn check_circle(system: &RotationSystem, i: usize) -> Result<(), SynthesisError> {
    if i >= system.circles() {
        return Err(crate::circle_maps::CircleMapError::CircleIndex {
            index: i,
            circles: system.circles(),
        }
        .into());
    }
    Ok(())
}

fn check_delta(delta: &CircleNumber) -> Result<(), SynthesisError> {
    if delta.sign() != Sign::Positive {
        return Err(SynthesisError::BadDelta);
    }
    Ok(())
}

fn search(
    stage: &str,
    alphas: &[CircleNumber],
    targets: &[CircleNumber],
    tol: &CircleNumber,
    params: &SynthesisParams,
) -> Result<ApproxResult, SynthesisError> {
    simultaneous_approx_growing(alphas, targets, tol, params.k_max, params.k_cap).map_err(|e| {
        match e {
            DiophantineError::NotFound { k_max } => SynthesisError::NotFound {
                stage: stage.to_string(),
                k_max,
            },
            DiophantineError::Dependent => SynthesisError::Independence,
            other => SynthesisError::Certificate(other.to_string()),
        }
    })
}

/// The telescoping factor `T_{i × ([(j-1)β, (j-1)β + ε) ∪ [jβ, jβ + ε))}`.
pub fn telescoping_factor(
    system: &RotationSystem,
    i: usize,
    eps: &CircleNumber,
    j: i64,
) -> Result<PiecewiseRotation, SynthesisError> {
    let n = system.circles();
    let beta = system.beta();
    let a = ArcSet::arc(n, i, &beta.scale_int(j - 1), eps)?;
    let b = ArcSet::arc(n, i, &beta.scale_int(j), eps)?;
    Ok(system.make_involution(&a.union(&b))?)
}

struct Plan {
    word: GeneratorWord,
    trace: Vec<BudgetLine>,
}

impl Plan {
    fn prefixed(self, prefix: &str) -> Vec<BudgetLine> {
        self.trace
            .into_iter()
            .map(|mut l| {
                l.stage = format!("{prefix}{}", l.stage);
                l
            })
            .collect()
    }
}

/// Block word for `T_{i × [0, 2ε)}` within `budget`; tolerances are
/// multiplied by `factor` (a power of 1/2).
fn block_plan(
    system: &RotationSystem,
    i: usize,
    eps: &CircleNumber,
    budget: &CircleNumber,
    factor: &BigRational,
    params: &SynthesisParams,
) -> Result<Plan, SynthesisError> {
    check_smallness(system, i, eps)?;
    let n = system.circles() as i64;
    let alphas = system.alphas();
    let alpha = system.alpha(i);
    let beta = system.beta();

    let close_alloc = times(budget, 1, 2);
    let close_tol = times(budget, n, 8).scale(factor);
    let close = search(
        "close",
        std::slice::from_ref(beta),
        std::slice::from_ref(eps),
        &close_tol,
        params,
    )?;
    let big_k = close.k;
    let mut trace = vec![BudgetLine {
        stage: "close".into(),
        k: big_k,
        allocated: close_alloc,
        achieved: times(&close.achieved, 4, n),
    }];

    // base: k alpha ≈ eps e_i, retried with a tighter tolerance while the
    // resulting block length fails the smallness conditions
    let base_alloc = times(budget, 1, 4);
    let spread = 1 + big_k.unsigned_abs() as i64 * (n - 1);
    let mut base_tol = times(budget, n, 16 * spread).scale(factor);
    if n > 1 {
        let gap = alphas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| min(&(&CircleNumber::one() - a) - beta, a - beta))
            .min()
            .expect("n > 1");
        base_tol = min(base_tol, times(&gap, 1, 2));
    }
    let targets: Vec<CircleNumber> = (0..alphas.len())
        .map(|j| {
            if j == i {
                eps.clone()
            } else {
                CircleNumber::zero()
            }
        })
        .collect();
    let base = loop {
        let hit = search("base", alphas, &targets, &base_tol, params)?;
        let eps_actual = alpha.scale_int(hit.k).reduce_mod1();
        if smallness_violation(system, i, &eps_actual).is_none() {
            break hit;
        }
        base_tol = times(&base_tol, 1, 2);
    };
    let k1 = base.k;
    let eps_actual = alpha.scale_int(k1).reduce_mod1();
    let off_component: CircleNumber = alphas
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, a)| circle_distance(&a.scale_int(k1)))
        .sum();
    let base_bound = &circle_distance(&(&eps_actual - eps)) + &off_component.scale_int(big_k.abs());
    trace.push(BudgetLine {
        stage: "base".into(),
        k: k1,
        allocated: base_alloc,
        achieved: times(&base_bound, 4, n),
    });

    // telescoping offsets; for K > 0 the first factor sits at 0 and needs no shift
    let offsets: Vec<(i64, CircleNumber)> = if big_k > 0 {
        (2..=big_k).map(|j| (j, beta.scale_int(j - 1))).collect()
    } else {
        (1..=-big_k).map(|j| (j, beta.scale_int(-j))).collect()
    };
    let v = GeneratorWord::new([Token::Inv, Token::Rot(k1), Token::Inv, Token::Rot(-k1)]);
    let mut word = if big_k > 0 {
        v.clone()
    } else {
        GeneratorWord::empty()
    };
    if !offsets.is_empty() {
        let s = offsets.len() as i64;
        let shift_alloc = times(budget, 1, 4 * s);
        let shift_tol = times(budget, n, 32 * s).scale(factor);
        for (j, t) in &offsets {
            let hit = search(
                &format!("shift{j}"),
                std::slice::from_ref(alpha),
                std::slice::from_ref(t),
                &shift_tol,
                params,
            )?;
            word = word.then(&v.conjugate(hit.k));
            trace.push(BudgetLine {
                stage: format!("shift{j}"),
                k: hit.k,
                allocated: shift_alloc.clone(),
                achieved: times(&hit.achieved, 8, n),
            });
        }
    }
    Ok(Plan { word, trace })
}

/// Word for `T_{i × [x, x + len)}`: a block conjugated into position.
fn interval_plan(
    system: &RotationSystem,
    i: usize,
    x: &CircleNumber,
    len: &CircleNumber,
    budget: &CircleNumber,
    factor: &BigRational,
    params: &SynthesisParams,
) -> Result<Plan, SynthesisError> {
    let eps = times(len, 1, 2);
    check_smallness(system, i, &eps)?;
    let x = x.reduce_mod1();
    if x.is_zero() {
        return block_plan(system, i, &eps, budget, factor, params);
    }
    let n = system.circles() as i64;
    let tol = times(budget, n, 16).scale(factor);
    let hit = search(
        "position",
        std::slice::from_ref(system.alpha(i)),
        std::slice::from_ref(&x),
        &tol,
        params,
    )?;
    let block = block_plan(system, i, &eps, &times(budget, 3, 4), factor, params)?;
    let mut trace = vec![BudgetLine {
        stage: "position".into(),
        k: hit.k,
        allocated: times(budget, 1, 4),
        achieved: times(&hit.achieved, 4, n),
    }];
    let word = block.word.conjugate(hit.k);
    trace.extend(block.prefixed("block/"));
    Ok(Plan { word, trace })
}

/// Builds with successively tighter tolerances until the exact distance to
/// `target` drops below `delta`.
fn certified<F>(
    system: &RotationSystem,
    target: &ArcSet,
    delta: &CircleNumber,
    mut plan: F,
) -> Result<SynthesisCertificate, SynthesisError>
where
    F: FnMut(&BigRational) -> Result<Plan, SynthesisError>,
{
    let involution = system.make_involution(target)?;
    let mut factor = BigRational::one();
    let mut best: Option<CircleNumber> = None;
    for _ in 0..ATTEMPTS {
        let Plan { word, trace } = plan(&factor)?;
        let achieved = word.evaluate(system).uniform_distance(&involution)?;
        if achieved < *delta {
            return Ok(SynthesisCertificate {
                system: system.clone(),
                word,
                target: target.clone(),
                delta: delta.clone(),
                achieved_distance: achieved,
                budget_trace: trace,
            });
        }
        if best.as_ref().is_none_or(|b| achieved < *b) {
            best = Some(achieved);
        }
        factor /= BigInt::from(2);
    }
    Err(SynthesisError::NotCertified {
        delta: delta.to_string(),
        achieved: best.map_or_else(String::new, |b| b.to_string()),
    })
}

/// Certified word for `T_{[0, 2ε)}` on a single circle.
pub fn synth_block(
    system: &RotationSystem,
    eps: &CircleNumber,
    delta: &CircleNumber,
    params: &SynthesisParams,
) -> Result<SynthesisCertificate, SynthesisError> {
    if system.circles() != 1 {
        return Err(SynthesisError::CircleCount {
            expected: "1".into(),
            actual: system.circles(),
        });
    }
    synth_multi(system, 0, eps, delta, params)
}

/// Certified word for `T_{{i} × [0, 2ε)}`; on one circle this is [`synth_block`].
pub fn synth_multi(
    system: &RotationSystem,
    i: usize,
    eps: &CircleNumber,
    delta: &CircleNumber,
    params: &SynthesisParams,
) -> Result<SynthesisCertificate, SynthesisError> {
    check_delta(delta)?;
    check_smallness(system, i, eps)?;
    let target = ArcSet::arc(
        system.circles(),
        i,
        &CircleNumber::zero(),
        &eps.scale_int(2),
    )?;
    certified(system, &target, delta, |f| {
        block_plan(system, i, eps, delta, f, params)
    })
}

/// Certified word for `T_{{i} × [x, x + len)}`, where `len / 2` must meet
/// the smallness conditions.
pub fn synth_interval(
    system: &RotationSystem,
    i: usize,
    x: &CircleNumber,
    len: &CircleNumber,
    delta: &CircleNumber,
    params: &SynthesisParams,
) -> Result<SynthesisCertificate, SynthesisError> {
    check_delta(delta)?;
    check_smallness(system, i, &times(len, 1, 2))?;
    let target = ArcSet::arc(system.circles(), i, x, len)?;
    certified(system, &target, delta, |f| {
        interval_plan(system, i, x, len, delta, f, params)
    })
}

/// Smallest `m >= 1` with `len / m <= 2ε`.
fn piece_count(len: &CircleNumber, eps: &CircleNumber) -> i64 {
    let q = eps.rational_part().recip() / BigInt::from(2);
    let ratio = len.scale(&q);
    let f = ratio.floor().to_i64().expect("piece count fits in i64");
    let m = if CircleNumber::from_integer(f) == ratio {
        f
    } else {
        f + 1
    };
    m.max(1)
}

/// Certified word for `T_A`. Arcs longer than `2ε` are cut into equal
/// pieces, each built by [`synth_interval`] with an equal share of `delta`.
///
/// An arc that is too long for its own involution gives `Smallness`; arcs
/// that are individually fine but collide under `T` give `Separation`.
pub fn synth_set(
    system: &RotationSystem,
    target: &ArcSet,
    eps: &CircleNumber,
    delta: &CircleNumber,
    params: &SynthesisParams,
) -> Result<SynthesisCertificate, SynthesisError> {
    check_delta(delta)?;
    let n = system.circles();
    if target.circle_count() != n {
        return Err(crate::circle_maps::CircleMapError::SystemMismatch.into());
    }
    if !eps.is_rational() {
        return Err(SynthesisError::Smallness {
            eps: eps.to_string(),
            condition: "eps rational".into(),
        });
    }
    let mut pieces = Vec::new();
    for (c, arc) in target.iter() {
        check_smallness(system, c, eps)?;
        let single = ArcSet::arc(n, c, &arc.start, &arc.length())?;
        if system.make_involution(&single).is_err() {
            return Err(SynthesisError::Smallness {
                eps: eps.to_string(),
                condition: format!("arc {c}:[{}, {}) is too long for T_A", arc.start, arc.end),
            });
        }
        let m = piece_count(&arc.length(), eps);
        let piece_len = arc.length().scale(&ratio(1, m));
        for p in 0..m {
            pieces.push((c, &arc.start + &piece_len.scale_int(p), piece_len.clone()));
        }
    }
    if system.make_involution(target).is_err() {
        return Err(SynthesisError::Separation(format!(
            "A = {target} meets T(A), so T_A is undefined"
        )));
    }
    if pieces.is_empty() {
        return certified(system, target, delta, |_| {
            Ok(Plan {
                word: GeneratorWord::empty(),
                trace: Vec::new(),
            })
        });
    }
    let share = delta.scale(&ratio(1, pieces.len() as i64));
    certified(system, target, delta, |f| {
        let mut word = GeneratorWord::empty();
        let mut trace = Vec::new();
        for (idx, (c, x, len)) in pieces.iter().enumerate() {
            let plan = interval_plan(system, *c, x, len, &share, f, params)?;
            word = word.then(&plan.word);
            trace.extend(plan.prefixed(&format!("piece{idx}/")));
        }
        Ok(Plan { word, trace })
    })
}

/// Exact residuals `(d(W^p, T^p_A), d(W^p', T^p'_A))` of one word in two
/// systems with the same number of circles.
pub fn residual_stability(
    word: &GeneratorWord,
    target: &ArcSet,
    system: &RotationSystem,
    perturbed: &RotationSystem,
) -> Result<(CircleNumber, CircleNumber), SynthesisError> {
    if system.circles() != perturbed.circles() {
        return Err(crate::circle_maps::CircleMapError::SystemMismatch.into());
    }
    Ok((
        certify(system, word, target)?,
        certify(perturbed, word, target)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> CircleNumber {
        s.parse().unwrap()
    }

    #[test]
    fn smallness_conditions() {
        let s = RotationSystem::default_single();
        assert!(check_smallness(&s, 0, &n("1/20")).is_ok());
        assert!(matches!(
            check_smallness(&s, 0, &n("2/5")),
            Err(SynthesisError::Smallness { .. })
        ));
        assert!(matches!(
            check_smallness(&s, 0, &n("0")),
            Err(SynthesisError::Smallness { .. })
        ));
        let two = RotationSystem::with_default_circles(2);
        assert_eq!(auto_eps(&two, 0), n("1/20"));
        assert_eq!(auto_eps(&two, 1), n("1/40"));
    }

    #[test]
    fn piece_counts() {
        assert_eq!(piece_count(&n("1/10"), &n("1/20")), 1);
        assert_eq!(piece_count(&n("11/100"), &n("1/20")), 2);
        assert_eq!(piece_count(&n("sqrt(2) - 1"), &n("1/20")), 5);
    }

    #[test]
    fn block_certifies() {
        let s = RotationSystem::default_single();
        let cert = synth_block(&s, &n("1/20"), &n("1/5"), &SynthesisParams::default()).unwrap();
        assert!(cert.achieved_distance < n("1/5"));
        assert_eq!(
            certify(&s, &cert.word, &cert.target).unwrap(),
            cert.achieved_distance
        );
        for line in &cert.budget_trace {
            assert!(line.achieved <= line.allocated, "{line:?}");
        }
    }
}
