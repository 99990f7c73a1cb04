use std::fmt;

use crate::number_field::CircleNumber;

use super::CircleMapError;

/// Half-open arc `[start, end)` with `0 <= start < end <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleArc {
    pub start: CircleNumber,
    pub end: CircleNumber,
}

impl CircleArc {
    pub fn length(&self) -> CircleNumber {
        &self.end - &self.start
    }
}

/// Finite union of disjoint half-open arcs on `n` labeled circles.
///
/// Canonical form: per circle, arcs sorted, nonempty, pairwise disjoint, and
/// never touching (touching arcs are merged). Arcs that cross 0 are stored
/// split at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    circles: Vec<Vec<CircleArc>>,
}

fn push_merged(out: &mut Vec<CircleArc>, start: CircleNumber, end: CircleNumber) {
    if let Some(last) = out.last_mut() {
        if last.end == start {
            last.end = end;
            return;
        }
    }
    out.push(CircleArc { start, end });
}

/// Sorted, deduplicated union of two sorted breakpoint lists.
fn merge_points<'a>(a: &[&'a CircleNumber], b: &[&'a CircleNumber]) -> Vec<&'a CircleNumber> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() {
            i += 1;
            a[i - 1]
        } else if i >= a.len() {
            j += 1;
            b[j - 1]
        } else {
            match a[i].cmp(b[j]) {
                std::cmp::Ordering::Less => {
                    i += 1;
                    a[i - 1]
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    b[j - 1]
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    a[i - 1]
                }
            }
        };
        if out.last().is_none_or(|l: &&CircleNumber| *l != next) {
            out.push(next);
        }
    }
    out
}

fn combine_circle(
    a: &[CircleArc],
    b: &[CircleArc],
    keep: impl Fn(bool, bool) -> bool,
) -> Vec<CircleArc> {
    let pa: Vec<&CircleNumber> = a.iter().flat_map(|x| [&x.start, &x.end]).collect();
    let pb: Vec<&CircleNumber> = b.iter().flat_map(|x| [&x.start, &x.end]).collect();
    let points = merge_points(&pa, &pb);
    let mut out = Vec::new();
    let (mut ia, mut ib) = (0, 0);
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        while ia < a.len() && a[ia].end <= *lo {
            ia += 1;
        }
        while ib < b.len() && b[ib].end <= *lo {
            ib += 1;
        }
        let in_a = ia < a.len() && a[ia].start <= *lo;
        let in_b = ib < b.len() && b[ib].start <= *lo;
        if keep(in_a, in_b) {
            push_merged(&mut out, lo.clone(), hi.clone());
        }
    }
    out
}

impl ArcSet {
    pub fn empty(circles: usize) -> Self {
        ArcSet {
            circles: vec![Vec::new(); circles],
        }
    }

    /// The whole space `n × [0, 1)`.
    pub fn full(circles: usize) -> Self {
        Self::uniform(circles, &CircleNumber::zero(), &CircleNumber::one())
            .expect("full circle is a valid arc")
    }

    /// The same arc `[start, start + length)` on every circle.
    pub fn uniform(
        circles: usize,
        start: &CircleNumber,
        length: &CircleNumber,
    ) -> Result<Self, CircleMapError> {
        let mut set = Self::empty(circles);
        for c in 0..circles {
            set = set.union(&Self::arc(circles, c, start, length)?);
        }
        Ok(set)
    }

    /// `{circle} × [start, start + length)`, reduced mod 1 and split at 0.
    pub fn arc(
        circles: usize,
        circle: usize,
        start: &CircleNumber,
        length: &CircleNumber,
    ) -> Result<Self, CircleMapError> {
        if circle >= circles {
            return Err(CircleMapError::CircleIndex {
                index: circle,
                circles,
            });
        }
        let one = CircleNumber::one();
        if length.sign() != crate::number_field::Sign::Positive || *length > one {
            return Err(CircleMapError::BadArc {
                start: start.to_string(),
                end: (start + length).to_string(),
            });
        }
        let mut set = Self::empty(circles);
        let s = start.reduce_mod1();
        let e = &s + length;
        let arcs = &mut set.circles[circle];
        if e <= one {
            arcs.push(CircleArc { start: s, end: e });
        } else {
            let wrapped = &e - &one;
            if !wrapped.is_zero() {
                arcs.push(CircleArc {
                    start: CircleNumber::zero(),
                    end: wrapped,
                });
            }
            push_merged(arcs, s, one);
            // [0, w) followed by [s, 1) may cover everything when length == 1
            if arcs.len() == 2 && arcs[0].end == arcs[1].start {
                let end = arcs.pop().unwrap().end;
                arcs[0].end = end;
            }
        }
        Ok(set)
    }

    /// Builds from `(circle, start, end)` triples where `start < end <= start + 1`.
    pub fn from_arcs<I>(circles: usize, arcs: I) -> Result<Self, CircleMapError>
    where
        I: IntoIterator<Item = (usize, CircleNumber, CircleNumber)>,
    {
        let mut set = Self::empty(circles);
        for (c, s, e) in arcs {
            let len = &e - &s;
            set = set.union(&Self::arc(circles, c, &s, &len)?);
        }
        Ok(set)
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn arcs(&self, circle: usize) -> &[CircleArc] {
        &self.circles[circle]
    }

    /// `(circle, arc)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &CircleArc)> {
        self.circles
            .iter()
            .enumerate()
            .flat_map(|(c, arcs)| arcs.iter().map(move |a| (c, a)))
    }

    pub fn arc_count(&self) -> usize {
        self.circles.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.iter().all(Vec::is_empty)
    }

    pub fn contains(&self, circle: usize, x: &CircleNumber) -> bool {
        self.circles[circle]
            .iter()
            .any(|a| a.start <= *x && *x < a.end)
    }

    /// Normalized measure `(1/n) Σ lengths`.
    pub fn measure(&self) -> CircleNumber {
        let total: CircleNumber = self.iter().map(|(_, a)| a.length()).sum();
        total.scale(&num_rational::BigRational::new(
            1.into(),
            (self.circles.len() as i64).into(),
        ))
    }

    /// Unnormalized length of the part on one circle.
    pub fn circle_length(&self, circle: usize) -> CircleNumber {
        self.circles[circle].iter().map(CircleArc::length).sum()
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool + Copy) -> Self {
        assert_eq!(
            self.circles.len(),
            other.circles.len(),
            "arc sets on different circle counts"
        );
        ArcSet {
            circles: self
                .circles
                .iter()
                .zip(&other.circles)
                .map(|(a, b)| combine_circle(a, b, keep))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a != b)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Only the part on `circle`; other circles emptied.
    pub fn restrict_to_circle(&self, circle: usize) -> Self {
        let mut out = Self::empty(self.circles.len());
        out.circles[circle] = self.circles[circle].clone();
        out
    }

    /// Everything except the part on `circle`.
    pub fn without_circle(&self, circle: usize) -> Self {
        let mut out = self.clone();
        out.circles[circle].clear();
        out
    }

    /// Rotates every circle by the same amount.
    pub fn translate(&self, by: &CircleNumber) -> Self {
        let shifts = vec![by.clone(); self.circles.len()];
        self.translate_each(&shifts)
    }

    /// Rotates circle `i` by `by[i]`.
    pub fn translate_each(&self, by: &[CircleNumber]) -> Self {
        assert_eq!(by.len(), self.circles.len());
        let mut out = Self::empty(self.circles.len());
        for (c, arcs) in self.circles.iter().enumerate() {
            let shift = by[c].reduce_mod1();
            if shift.is_zero() {
                out.circles[c] = arcs.clone();
                continue;
            }
            let one = CircleNumber::one();
            let threshold = &one - &shift;
            // arcs starting at or after 1 - shift wrap to the front
            let mut front = Vec::new();
            let mut back = Vec::new();
            for a in arcs {
                if a.start >= threshold {
                    front.push(CircleArc {
                        start: &(&a.start + &shift) - &one,
                        end: &(&a.end + &shift) - &one,
                    });
                } else if a.end <= threshold {
                    back.push(CircleArc {
                        start: &a.start + &shift,
                        end: &a.end + &shift,
                    });
                } else {
                    front.insert(
                        0,
                        CircleArc {
                            start: CircleNumber::zero(),
                            end: &(&a.end + &shift) - &one,
                        },
                    );
                    back.push(CircleArc {
                        start: &a.start + &shift,
                        end: one.clone(),
                    });
                }
            }
            let mut merged = Vec::with_capacity(front.len() + back.len());
            for a in front.into_iter().chain(back) {
                push_merged(&mut merged, a.start, a.end);
            }
            out.circles[c] = merged;
        }
        out
    }

    /// Parses the canonical text form, e.g. `0:[0, 1/10) U 1:[sqrt(2) - 1, 1/2)`.
    ///
    /// `empty` denotes the empty set. An arc without an `i:` prefix lands on
    /// `default_circle`. Arcs are unioned, so overlapping input is allowed.
    pub fn parse(
        text: &str,
        circles: usize,
        default_circle: usize,
    ) -> Result<Self, CircleMapError> {
        let perr = |reason: &str| CircleMapError::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        let mut set = Self::empty(circles);
        if trimmed.is_empty() || trimmed == "empty" {
            return Ok(set);
        }
        let mut rest = trimmed;
        loop {
            rest = rest.trim_start();
            let open = rest.find('[').ok_or_else(|| perr("expected `[`"))?;
            let prefix = rest[..open].trim();
            let circle = if prefix.is_empty() {
                default_circle
            } else {
                prefix
                    .strip_suffix(':')
                    .ok_or_else(|| perr("expected `i:` before `[`"))?
                    .trim()
                    .parse()
                    .map_err(|_| perr("bad circle index"))?
            };
            let close = closing_paren(rest, open).ok_or_else(|| perr("expected `)`"))?;
            let inner = &rest[open + 1..close];
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| perr("expected `a, b` inside arc"))?;
            let a: CircleNumber = a
                .parse()
                .map_err(|e: crate::number_field::NumberError| perr(&e.to_string()))?;
            let b: CircleNumber = b
                .parse()
                .map_err(|e: crate::number_field::NumberError| perr(&e.to_string()))?;
            set = set.union(&Self::from_arcs(circles, [(circle, a, b)])?);
            rest = rest[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix('U')
                .or_else(|| rest.strip_prefix('u'))
                .or_else(|| rest.strip_prefix('∪'))
                .or_else(|| rest.strip_prefix(','))
                .unwrap_or(rest);
        }
        Ok(set)
    }
}

/// Index of the `)` closing the arc opened at `open`, skipping nested
/// parentheses such as `sqrt(5)`.
fn closing_paren(text: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in text[open..].char_indices() {
        match ch {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(open + i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        let mut first = true;
        for (c, a) in self.iter() {
            if !first {
                write!(f, " U ")?;
            }
            first = false;
            write!(f, "{c}:[{}, {})", a.start, a.end)?;
        }
        Ok(())
    }
}
