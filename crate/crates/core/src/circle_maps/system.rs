use std::sync::Arc;

use crate::number_field::{
    independent_with_one, is_squarefree, CircleNumber, IrrationalBasis, Sign,
};

use super::{ArcSet, CircleMapError, PiecewiseRotation};

/// `sqrt(5) - 2`, the default length of the base arc of `U`.
pub fn default_beta() -> CircleNumber {
    CircleNumber::sqrt(5) - CircleNumber::from_integer(2)
}

/// `frac(sqrt(d))` for the first `n` squarefree `d >= 2` with
/// `beta < frac(sqrt(d))` and `frac(sqrt(d)) + beta < 1`.
///
/// For the default `beta` this is `sqrt(2) - 1, sqrt(3) - 1, sqrt(6) - 2,
/// sqrt(7) - 2, sqrt(11) - 3, ...`.
pub fn default_alphas(n: usize, beta: &CircleNumber) -> Vec<CircleNumber> {
    let one = CircleNumber::one();
    let mut out = Vec::with_capacity(n);
    let mut d = 2u64;
    while out.len() < n {
        if is_squarefree(d) {
            let a = CircleNumber::sqrt(d).reduce_mod1();
            if a > *beta && &a + beta < one && !beta.surd_coeffs().any(|(b, _)| b == d) {
                out.push(a);
            }
        }
        d += 1;
    }
    out
}

/// Rotations `T(i, x) = (i, x + alpha_i)` on `n` circles together with the
/// base length `beta` of the involution `U = T_{n × [0, beta)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    alphas: Arc<[CircleNumber]>,
    beta: CircleNumber,
    basis: IrrationalBasis,
}

impl RotationSystem {
    /// Validated system: every `alpha_i` irrational with `0 < beta < alpha_i`
    /// and `alpha_i + beta <= 1`, `beta` irrational, and `1, alpha_0, ...`
    /// linearly independent over the rationals.
    pub fn new(alphas: Vec<CircleNumber>, beta: CircleNumber) -> Result<Self, CircleMapError> {
        if alphas.is_empty() {
            return Err(CircleMapError::InvalidSystem(
                "at least one circle is required".into(),
            ));
        }
        for (i, a) in alphas.iter().enumerate() {
            if a.is_rational() {
                return Err(CircleMapError::InvalidSystem(format!(
                    "alpha_{i} = {a} is rational"
                )));
            }
        }
        if beta.is_rational() {
            return Err(CircleMapError::InvalidSystem(format!(
                "beta = {beta} is rational"
            )));
        }
        let system = Self::perturbation(alphas, beta)?;
        if !independent_with_one(&system.alphas) {
            return Err(CircleMapError::Dependent);
        }
        Ok(system)
    }

    /// Relaxed constructor for perturbation studies: rotation amounts may be
    /// rational or dependent; only `0 < beta < alpha_i < 1` and
    /// `alpha_i + beta <= 1` are enforced, since `U` needs them.
    pub fn perturbation(
        alphas: Vec<CircleNumber>,
        beta: CircleNumber,
    ) -> Result<Self, CircleMapError> {
        if alphas.is_empty() {
            return Err(CircleMapError::InvalidSystem(
                "at least one circle is required".into(),
            ));
        }
        let one = CircleNumber::one();
        if beta.sign() != Sign::Positive || beta >= one {
            return Err(CircleMapError::InvalidSystem(format!(
                "beta = {beta} is not in (0, 1)"
            )));
        }
        for (i, a) in alphas.iter().enumerate() {
            if *a >= one {
                return Err(CircleMapError::InvalidSystem(format!(
                    "alpha_{i} = {a} is not in (0, 1)"
                )));
            }
            if *a <= beta || (a + &beta) > one {
                return Err(CircleMapError::Overlap);
            }
        }
        let basis = IrrationalBasis::spanning(alphas.iter().chain(std::iter::once(&beta)));
        Ok(RotationSystem {
            alphas: alphas.into(),
            beta,
            basis,
        })
    }

    /// One circle, `alpha = sqrt(2) - 1`, `beta = sqrt(5) - 2`.
    pub fn default_single() -> Self {
        Self::with_default_circles(1)
    }

    pub fn with_default_circles(n: usize) -> Self {
        let beta = default_beta();
        Self::new(default_alphas(n, &beta), beta).expect("default system is valid")
    }

    /// Same `beta`, new rotation amounts (relaxed validation).
    pub fn perturbed(&self, alphas: Vec<CircleNumber>) -> Result<Self, CircleMapError> {
        if alphas.len() != self.alphas.len() {
            return Err(CircleMapError::SystemMismatch);
        }
        Self::perturbation(alphas, self.beta.clone())
    }

    pub fn circles(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, i: usize) -> &CircleNumber {
        &self.alphas[i]
    }

    pub fn alphas(&self) -> &[CircleNumber] {
        &self.alphas
    }

    pub(crate) fn shared_alphas(&self) -> Arc<[CircleNumber]> {
        self.alphas.clone()
    }

    pub fn beta(&self) -> &CircleNumber {
        &self.beta
    }

    pub fn basis(&self) -> &IrrationalBasis {
        &self.basis
    }

    pub fn min_alpha(&self) -> &CircleNumber {
        self.alphas.iter().min().expect("nonempty")
    }

    pub fn identity(&self) -> PiecewiseRotation {
        PiecewiseRotation::identity(self.shared_alphas())
    }

    /// `T^m`.
    pub fn rotation(&self, m: i64) -> PiecewiseRotation {
        PiecewiseRotation::rotation(self.shared_alphas(), m)
    }

    /// `T^k(A)`.
    pub fn image(&self, set: &ArcSet, k: i64) -> ArcSet {
        let shifts: Vec<CircleNumber> = self.alphas.iter().map(|a| a.scale_int(k)).collect();
        set.translate_each(&shifts)
    }

    /// The base set `n × [0, beta)` of `U`.
    pub fn base_set(&self) -> ArcSet {
        ArcSet::uniform(self.circles(), &CircleNumber::zero(), &self.beta).expect("0 < beta < 1")
    }

    /// `U = T_{n × [0, beta)}`.
    pub fn generator_u(&self) -> PiecewiseRotation {
        self.make_involution(&self.base_set())
            .expect("system invariants make U well defined")
    }

    /// `T_A`: `T` on `A`, `T^-1` on `T(A)`, identity elsewhere.
    pub fn make_involution(&self, set: &ArcSet) -> Result<PiecewiseRotation, CircleMapError> {
        if set.circle_count() != self.circles() {
            return Err(CircleMapError::SystemMismatch);
        }
        let image = self.image(set, 1);
        if !set.is_disjoint(&image) {
            return Err(CircleMapError::Overlap);
        }
        Ok(PiecewiseRotation::from_involution(
            self.shared_alphas(),
            set,
            &image,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> CircleNumber {
        s.parse().unwrap()
    }

    #[test]
    fn defaults() {
        let s = RotationSystem::default_single();
        assert_eq!(s.alpha(0), &n("sqrt(2) - 1"));
        assert_eq!(s.beta(), &n("sqrt(5) - 2"));
        assert_eq!(s.basis().radicands(), &[2, 5]);
        let four = default_alphas(6, &default_beta());
        let texts: Vec<String> = four.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            texts,
            [
                "sqrt(2) - 1",
                "sqrt(3) - 1",
                "sqrt(6) - 2",
                "sqrt(7) - 2",
                "sqrt(11) - 3",
                "sqrt(13) - 3"
            ]
        );
        assert_eq!(RotationSystem::with_default_circles(4).circles(), 4);
    }

    #[test]
    fn invariants_enforced() {
        let beta = default_beta();
        assert!(matches!(
            RotationSystem::new(vec![n("1/2")], beta.clone()),
            Err(CircleMapError::InvalidSystem(_))
        ));
        assert!(matches!(
            RotationSystem::new(vec![n("sqrt(2) - 1"), n("3*sqrt(2) - 4")], beta.clone()),
            Err(CircleMapError::Dependent)
        ));
        // beta above alpha
        assert!(matches!(
            RotationSystem::new(vec![n("sqrt(5) - 2")], n("sqrt(2) - 1")),
            Err(CircleMapError::Overlap)
        ));
        // alpha + beta > 1
        assert!(matches!(
            RotationSystem::new(vec![n("sqrt(15) - 3")], beta.clone()),
            Err(CircleMapError::Overlap)
        ));
        assert!(RotationSystem::perturbation(vec![n("1/2")], beta).is_ok());
    }

    #[test]
    fn involution_overlap() {
        let s = RotationSystem::default_single();
        let a = ArcSet::parse("[0, 1/2)", 1, 0).unwrap();
        assert_eq!(s.make_involution(&a), Err(CircleMapError::Overlap));
        assert!(s.make_involution(&ArcSet::empty(1)).unwrap().is_identity());
    }

    #[test]
    fn u_piece_layout() {
        let s = RotationSystem::default_single();
        let u = s.generator_u();
        let layout: Vec<(String, String, i64)> = u
            .segments(0)
            .map(|(a, b, k)| (a.to_string(), b.to_string(), k))
            .collect();
        assert_eq!(
            layout,
            vec![
                ("0".into(), "sqrt(5) - 2".into(), 1),
                ("sqrt(5) - 2".into(), "sqrt(2) - 1".into(), 0),
                ("sqrt(2) - 1".into(), "sqrt(2) + sqrt(5) - 3".into(), -1),
                ("sqrt(2) + sqrt(5) - 3".into(), "1".into(), 0),
            ]
        );
    }
}
