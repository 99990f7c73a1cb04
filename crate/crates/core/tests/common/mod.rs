#![allow(dead_code)]

use fullgroup::circle_maps::{ArcSet, PiecewiseRotation, RotationSystem};
use fullgroup::number_field::CircleNumber;
use rand::Rng;

pub fn num(s: &str) -> CircleNumber {
    s.parse().unwrap()
}

/// One factor of a random map, kept in a form a float simulator can replay.
#[derive(Debug, Clone)]
pub enum Factor {
    Rot(i64),
    U,
    Inv(ArcSet),
}

/// Random valid `A` (every arc has endpoints in `(1/1000)Z`), retried until
/// `A ∩ T(A) = ∅`.
pub fn random_set<R: Rng>(
    rng: &mut R,
    system: &RotationSystem,
    max_arcs: usize,
    max_len: u32,
) -> ArcSet {
    let n = system.circles();
    loop {
        let arcs = rng.gen_range(1..=max_arcs);
        let mut set = ArcSet::empty(n);
        for _ in 0..arcs {
            let c = rng.gen_range(0..n);
            let start = CircleNumber::ratio(rng.gen_range(0..1000), 1000);
            let len = CircleNumber::ratio(rng.gen_range(1..=max_len) as i64, 1000);
            set = set.union(&ArcSet::arc(n, c, &start, &len).unwrap());
        }
        if system.make_involution(&set).is_ok() {
            return set;
        }
    }
}

pub fn random_factors<R: Rng>(rng: &mut R, system: &RotationSystem, max_len: usize) -> Vec<Factor> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Factor::Rot(rng.gen_range(-6..=6)),
            1 => Factor::U,
            _ => Factor::Inv(random_set(rng, system, 2, 150)),
        })
        .collect()
}

pub fn build(system: &RotationSystem, factors: &[Factor]) -> PiecewiseRotation {
    let mut acc = system.identity();
    for f in factors {
        let g = match f {
            Factor::Rot(m) => system.rotation(*m),
            Factor::U => system.generator_u(),
            Factor::Inv(a) => system.make_involution(a).unwrap(),
        };
        acc = acc.compose(&g).unwrap();
    }
    acc
}

pub fn random_map<R: Rng>(rng: &mut R, system: &RotationSystem) -> PiecewiseRotation {
    let f = random_factors(rng, system, 4);
    build(system, &f)
}

/// Float replay of a factor list: the rightmost factor acts first.
pub struct FloatMap {
    alphas: Vec<f64>,
    factors: Vec<FloatFactor>,
}

enum FloatFactor {
    Rot(i64),
    Swap(Vec<Vec<(f64, f64)>>),
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn inside(arcs: &[(f64, f64)], x: f64) -> bool {
    arcs.iter().any(|&(a, b)| a <= x && x < b)
}

impl FloatMap {
    pub fn new(system: &RotationSystem, factors: &[Factor]) -> Self {
        let to_float = |set: &ArcSet| -> Vec<Vec<(f64, f64)>> {
            (0..set.circle_count())
                .map(|c| {
                    set.arcs(c)
                        .iter()
                        .map(|a| (a.start.to_f64(), a.end.to_f64()))
                        .collect()
                })
                .collect()
        };
        FloatMap {
            alphas: system.alphas().iter().map(CircleNumber::to_f64).collect(),
            factors: factors
                .iter()
                .map(|f| match f {
                    Factor::Rot(m) => FloatFactor::Rot(*m),
                    Factor::U => FloatFactor::Swap(to_float(&system.base_set())),
                    Factor::Inv(a) => FloatFactor::Swap(to_float(a)),
                })
                .collect(),
        }
    }

    pub fn apply(&self, circle: usize, x: f64) -> f64 {
        let alpha = self.alphas[circle];
        let mut x = x;
        for f in self.factors.iter().rev() {
            x = match f {
                FloatFactor::Rot(m) => frac(x + *m as f64 * alpha),
                FloatFactor::Swap(sets) => {
                    let arcs = &sets[circle];
                    if inside(arcs, x) {
                        frac(x + alpha)
                    } else if inside(arcs, frac(x - alpha)) {
                        frac(x - alpha)
                    } else {
                        x
                    }
                }
            };
        }
        x
    }
}

/// Circle distance between two float points.
pub fn float_gap(x: f64, y: f64) -> f64 {
    let d = frac(x - y);
    d.min(1.0 - d)
}
