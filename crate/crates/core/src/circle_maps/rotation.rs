use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::number_field::CircleNumber;

use super::{ArcSet, CircleArc, CircleMapError};

/// Start of a piece of a partition; the piece runs to the next start (or 1)
/// and maps `x` to `x + power * alpha` mod 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub start: CircleNumber,
    pub power: i64,
}

/// Element of the full group of the rotation system: on every circle a
/// partition of `[0, 1)` into half-open arcs, each translated by an integer
/// power of that circle's rotation.
///
/// Canonical form: the first piece starts at 0, starts strictly increase,
/// and adjacent pieces have different powers.
#[derive(Debug, Clone)]
pub struct PiecewiseRotation {
    alphas: Arc<[CircleNumber]>,
    circles: Vec<Vec<Piece>>,
}

impl PartialEq for PiecewiseRotation {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alphas, &other.alphas) || self.alphas == other.alphas)
            && self.circles == other.circles
    }
}

impl Eq for PiecewiseRotation {}

fn canonicalize(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if out.last().is_some_and(|l| l.power == p.power) {
            continue;
        }
        out.push(p);
    }
    out
}

/// `frac(k * alpha)`, memoized per power.
struct Offsets<'a> {
    alpha: &'a CircleNumber,
    cache: HashMap<i64, CircleNumber>,
}

impl<'a> Offsets<'a> {
    fn new(alpha: &'a CircleNumber) -> Self {
        Offsets {
            alpha,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, k: i64) -> &CircleNumber {
        let alpha = self.alpha;
        self.cache
            .entry(k)
            .or_insert_with(|| alpha.scale_int(k).reduce_mod1())
    }
}

/// Splits the image of `[a, b)` under translation by `offset` (in `[0,1)`)
/// into non-wrapping arcs: `(domain_start, image_start, image_end, shift)`
/// where `image = domain + shift` on that part.
fn image_parts(
    a: &CircleNumber,
    b: &CircleNumber,
    offset: &CircleNumber,
) -> Vec<(CircleNumber, CircleNumber, CircleNumber, CircleNumber)> {
    if offset.is_zero() {
        return vec![(a.clone(), a.clone(), b.clone(), CircleNumber::zero())];
    }
    let one = CircleNumber::one();
    let threshold = &one - offset;
    let wrapped_shift = offset - &one;
    if *a >= threshold {
        vec![(
            a.clone(),
            a + &wrapped_shift,
            b + &wrapped_shift,
            wrapped_shift,
        )]
    } else if *b <= threshold {
        vec![(a.clone(), a + offset, b + offset, offset.clone())]
    } else {
        vec![
            (a.clone(), a + offset, one.clone(), offset.clone()),
            (
                threshold.clone(),
                CircleNumber::zero(),
                b + &wrapped_shift,
                wrapped_shift,
            ),
        ]
    }
}

fn compose_circle(outer: &[Piece], inner: &[Piece], alpha: &CircleNumber) -> Vec<Piece> {
    let one = CircleNumber::one();
    let mut offsets = Offsets::new(alpha);
    let mut out = Vec::with_capacity(outer.len() + 2 * inner.len());
    for (idx, piece) in inner.iter().enumerate() {
        let end = inner.get(idx + 1).map_or(&one, |p| &p.start);
        let offset = offsets.get(piece.power).clone();
        for (dom_start, img_start, img_end, shift) in image_parts(&piece.start, end, &offset) {
            // outer pieces meeting [img_start, img_end)
            let first = outer.partition_point(|p| p.start <= img_start) - 1;
            let last = if img_end == one {
                outer.len()
            } else {
                outer.partition_point(|p| p.start < img_end)
            };
            out.push(Piece {
                start: dom_start,
                power: piece.power + outer[first].power,
            });
            for p in &outer[first + 1..last] {
                out.push(Piece {
                    start: &p.start - &shift,
                    power: piece.power + p.power,
                });
            }
        }
    }
    canonicalize(out)
}

impl PiecewiseRotation {
    pub(crate) fn identity(alphas: Arc<[CircleNumber]>) -> Self {
        Self::rotation(alphas, 0)
    }

    pub(crate) fn rotation(alphas: Arc<[CircleNumber]>, m: i64) -> Self {
        let circles = vec![
            vec![Piece {
                start: CircleNumber::zero(),
                power: m
            }];
            alphas.len()
        ];
        PiecewiseRotation { alphas, circles }
    }

    pub(crate) fn from_involution(
        alphas: Arc<[CircleNumber]>,
        set: &ArcSet,
        image: &ArcSet,
    ) -> Self {
        let one = CircleNumber::one();
        let circles = (0..alphas.len())
            .map(|c| {
                let mut marked: Vec<(&CircleArc, i64)> = set
                    .arcs(c)
                    .iter()
                    .map(|a| (a, 1))
                    .chain(image.arcs(c).iter().map(|a| (a, -1)))
                    .collect();
                marked.sort_by(|x, y| x.0.start.cmp(&y.0.start));
                let mut pieces = Vec::with_capacity(2 * marked.len() + 1);
                let mut pos = CircleNumber::zero();
                for (arc, power) in marked {
                    if arc.start > pos {
                        pieces.push(Piece {
                            start: pos,
                            power: 0,
                        });
                    }
                    pieces.push(Piece {
                        start: arc.start.clone(),
                        power,
                    });
                    pos = arc.end.clone();
                }
                if pos < one {
                    pieces.push(Piece {
                        start: pos,
                        power: 0,
                    });
                }
                canonicalize(pieces)
            })
            .collect();
        PiecewiseRotation { alphas, circles }
    }

    /// Builds a map from raw per-circle pieces, checking it is a bijection.
    pub fn from_pieces(
        alphas: &[CircleNumber],
        circles: Vec<Vec<Piece>>,
    ) -> Result<Self, CircleMapError> {
        let bad = || CircleMapError::InvalidSystem("pieces do not define a bijection".into());
        if circles.len() != alphas.len() {
            return Err(CircleMapError::SystemMismatch);
        }
        let mut out = Vec::with_capacity(circles.len());
        for pieces in circles {
            if pieces.first().is_none_or(|p| !p.start.is_zero()) {
                return Err(bad());
            }
            if pieces.windows(2).any(|w| w[0].start >= w[1].start)
                || pieces.last().unwrap().start >= CircleNumber::one()
            {
                return Err(bad());
            }
            out.push(canonicalize(pieces));
        }
        let map = PiecewiseRotation {
            alphas: alphas.to_vec().into(),
            circles: out,
        };
        if map.is_bijective() {
            Ok(map)
        } else {
            Err(bad())
        }
    }

    pub fn circles(&self) -> usize {
        self.circles.len()
    }

    pub fn alphas(&self) -> &[CircleNumber] {
        &self.alphas
    }

    pub fn pieces(&self, circle: usize) -> &[Piece] {
        &self.circles[circle]
    }

    /// `(start, end, power)` for each piece of one circle.
    pub fn segments(
        &self,
        circle: usize,
    ) -> impl Iterator<Item = (&CircleNumber, CircleNumber, i64)> + '_ {
        let pieces = &self.circles[circle];
        pieces.iter().enumerate().map(move |(i, p)| {
            let end = pieces
                .get(i + 1)
                .map_or_else(CircleNumber::one, |q| q.start.clone());
            (&p.start, end, p.power)
        })
    }

    pub fn piece_count(&self) -> usize {
        self.circles.iter().map(Vec::len).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.support().is_empty()
    }

    fn check_same_system(&self, other: &Self) -> Result<(), CircleMapError> {
        if Arc::ptr_eq(&self.alphas, &other.alphas) || self.alphas == other.alphas {
            Ok(())
        } else {
            Err(CircleMapError::SystemMismatch)
        }
    }

    /// Image of the point `x` on `circle`.
    pub fn apply(&self, circle: usize, x: &CircleNumber) -> CircleNumber {
        let x = x.reduce_mod1();
        let pieces = &self.circles[circle];
        let idx = pieces.partition_point(|p| p.start <= x) - 1;
        (&x + &self.alphas[circle].scale_int(pieces[idx].power)).reduce_mod1()
    }

    /// Power of the rotation applied at `x` (reduced mod 1) on `circle`.
    pub fn power_at(&self, circle: usize, x: &CircleNumber) -> i64 {
        let x = x.reduce_mod1();
        let pieces = &self.circles[circle];
        pieces[pieces.partition_point(|p| p.start <= x) - 1].power
    }

    /// `self(x) == other(x)` for the point `x` of `circle`.
    pub fn agrees_at(&self, other: &Self, circle: usize, x: &CircleNumber) -> bool {
        self.acts_trivially(circle, self.power_at(circle, x) - other.power_at(circle, x))
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, CircleMapError> {
        self.check_same_system(inner)?;
        let circles = (0..self.circles.len())
            .map(|c| compose_circle(&self.circles[c], &inner.circles[c], &self.alphas[c]))
            .collect();
        Ok(PiecewiseRotation {
            alphas: self.alphas.clone(),
            circles,
        })
    }

    pub fn inverse(&self) -> Self {
        let one = CircleNumber::one();
        let circles = (0..self.circles.len())
            .map(|c| {
                let mut offsets = Offsets::new(&self.alphas[c]);
                let pieces = &self.circles[c];
                let mut images = Vec::with_capacity(pieces.len() + 1);
                for (i, p) in pieces.iter().enumerate() {
                    let end = pieces.get(i + 1).map_or(&one, |q| &q.start);
                    let offset = offsets.get(p.power).clone();
                    for (_, img_start, _, _) in image_parts(&p.start, end, &offset) {
                        images.push(Piece {
                            start: img_start,
                            power: -p.power,
                        });
                    }
                }
                images.sort_by(|a, b| a.start.cmp(&b.start));
                canonicalize(images)
            })
            .collect();
        PiecewiseRotation {
            alphas: self.alphas.clone(),
            circles,
        }
    }

    /// `true` when a piece of power `k` acts as the identity on `circle`.
    fn acts_trivially(&self, circle: usize, k: i64) -> bool {
        k == 0 || self.alphas[circle].scale_int(k).is_integer()
    }

    /// `d(S, R) = μ{x : S(x) ≠ R(x)}` with the uniform product measure.
    pub fn uniform_distance(&self, other: &Self) -> Result<CircleNumber, CircleMapError> {
        self.check_same_system(other)?;
        let one = CircleNumber::one();
        let mut total = CircleNumber::zero();
        for c in 0..self.circles.len() {
            let (p, q) = (&self.circles[c], &other.circles[c]);
            let (mut i, mut j) = (0, 0);
            let mut pos = CircleNumber::zero();
            let mut trivial: HashMap<i64, bool> = HashMap::new();
            while pos < one {
                let end_p = p.get(i + 1).map_or(&one, |x| &x.start);
                let end_q = q.get(j + 1).map_or(&one, |x| &x.start);
                let ord = end_p.cmp(end_q);
                let seg_end = if ord.is_le() {
                    end_p.clone()
                } else {
                    end_q.clone()
                };
                let dk = p[i].power - q[j].power;
                let agrees = *trivial
                    .entry(dk)
                    .or_insert_with(|| self.acts_trivially(c, dk));
                if !agrees {
                    total = total + (&seg_end - &pos);
                }
                if ord.is_le() {
                    i += 1;
                }
                if ord.is_ge() {
                    j += 1;
                }
                pos = seg_end;
            }
        }
        let n = BigRational::new(1.into(), (self.circles.len() as i64).into());
        Ok(total.scale(&n))
    }

    /// `{x : S(x) ≠ x}` in canonical form.
    pub fn support(&self) -> ArcSet {
        let mut arcs = Vec::new();
        for c in 0..self.circles.len() {
            for (start, end, k) in self.segments(c) {
                if !self.acts_trivially(c, k) {
                    arcs.push((c, start.clone(), end));
                }
            }
        }
        ArcSet::from_arcs(self.circles.len(), arcs).expect("pieces are valid arcs")
    }

    /// Checks that the images of the pieces tile every circle exactly.
    pub fn is_bijective(&self) -> bool {
        let one = CircleNumber::one();
        (0..self.circles.len()).all(|c| {
            let mut offsets = Offsets::new(&self.alphas[c]);
            let pieces = &self.circles[c];
            let mut images = Vec::new();
            for (i, p) in pieces.iter().enumerate() {
                let end = pieces.get(i + 1).map_or(&one, |q| &q.start);
                let offset = offsets.get(p.power).clone();
                for (_, s, e, _) in image_parts(&p.start, end, &offset) {
                    images.push((s, e));
                }
            }
            images.sort_by(|a, b| a.0.cmp(&b.0));
            let mut pos = CircleNumber::zero();
            for (s, e) in images {
                if s != pos {
                    return false;
                }
                pos = e;
            }
            pos == one
        })
    }
}

impl fmt::Display for PiecewiseRotation {
    /// `c:[a, b)->k` for every piece, joined by `; `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in 0..self.circles.len() {
            for (start, end, k) in self.segments(c) {
                if !first {
                    write!(f, "; ")?;
                }
                first = false;
                write!(f, "{c}:[{start}, {end})->{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::RotationSystem;
    use super::*;

    fn n(s: &str) -> CircleNumber {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_examples() {
        let s = RotationSystem::default_single();
        assert!(s.rotation(0).is_identity());
        assert_eq!(
            s.rotation(1).apply(0, &CircleNumber::zero()),
            n("sqrt(2) - 1")
        );
        let x = s.rotation(5).apply(0, &CircleNumber::zero());
        assert_eq!(x, n("5*sqrt(2) - 7"));
        assert!((x.to_f64() - 0.071_067_811_865_475).abs() < 1e-12);
    }

    #[test]
    fn inverse_and_identity() {
        let s = RotationSystem::default_single();
        let u = s.generator_u();
        let t3 = s.rotation(3);
        let m = t3.compose(&u).unwrap().compose(&s.rotation(-7)).unwrap();
        assert!(m.compose(&m.inverse()).unwrap().is_identity());
        assert!(m.inverse().compose(&m).unwrap().is_identity());
        assert_eq!(m.compose(&m.inverse()).unwrap(), s.identity());
        assert!(u.compose(&u).unwrap().is_identity());
        assert!(m.is_bijective());
    }

    #[test]
    fn conjugation_moves_involution() {
        let s = RotationSystem::default_single();
        let lhs = s
            .rotation(1)
            .compose(&s.generator_u())
            .unwrap()
            .compose(&s.rotation(-1))
            .unwrap();
        let rhs = s.make_involution(&s.image(&s.base_set(), 1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn distances() {
        let s = RotationSystem::default_single();
        let u = s.generator_u();
        assert!(u.uniform_distance(&u).unwrap().is_zero());
        assert_eq!(
            s.rotation(1).uniform_distance(&s.rotation(2)).unwrap(),
            CircleNumber::one()
        );
        let d = u.uniform_distance(&s.identity()).unwrap();
        assert_eq!(d, n("2*sqrt(5) - 4"));
        assert!((d.to_f64() - 0.472_135_954_999_579).abs() < 1e-12);
    }

    #[test]
    fn support_of_u() {
        let s = RotationSystem::default_single();
        let u = s.generator_u();
        assert!(s.identity().support().is_empty());
        let expected = ArcSet::parse(
            "[0, sqrt(5) - 2) U [sqrt(2) - 1, sqrt(2) + sqrt(5) - 3)",
            1,
            0,
        )
        .unwrap();
        assert_eq!(u.support(), expected);
        assert_eq!(u.support().measure(), s.beta().scale_int(2));
    }

    #[test]
    fn rational_rotation_agreement() {
        // alpha = 1/2: powers 0 and 2 act identically
        let s = RotationSystem::perturbation(vec![n("1/2")], n("sqrt(5) - 2")).unwrap();
        assert!(s
            .rotation(2)
            .uniform_distance(&s.identity())
            .unwrap()
            .is_zero());
        assert!(s.rotation(2).is_identity());
        assert_eq!(
            s.rotation(1).uniform_distance(&s.identity()).unwrap(),
            CircleNumber::one()
        );
    }

    #[test]
    fn from_pieces_validates() {
        let s = RotationSystem::default_single();
        let alpha = s.alpha(0).clone();
        let ok = PiecewiseRotation::from_pieces(
            s.alphas(),
            vec![vec![Piece {
                start: CircleNumber::zero(),
                power: 4,
            }]],
        );
        assert!(ok.is_ok());
        // [0, 1/2) -> +1 and [1/2, 1) -> 0 overlaps near alpha + 1/2
        let bad = PiecewiseRotation::from_pieces(
            s.alphas(),
            vec![vec![
                Piece {
                    start: CircleNumber::zero(),
                    power: 1,
                },
                Piece {
                    start: n("1/2"),
                    power: 0,
                },
            ]],
        );
        assert!(bad.is_err());
        let _ = alpha;
    }

    #[test]
    fn display_is_canonical() {
        let s = RotationSystem::default_single();
        assert_eq!(s.rotation(2).to_string(), "0:[0, 1)->2");
        assert_eq!(
            s.generator_u().to_string(),
            "0:[0, sqrt(5) - 2)->1; 0:[sqrt(5) - 2, sqrt(2) - 1)->0; \
             0:[sqrt(2) - 1, sqrt(2) + sqrt(5) - 3)->-1; 0:[sqrt(2) + sqrt(5) - 3, 1)->0"
        );
    }
}
