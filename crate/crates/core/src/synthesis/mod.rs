//! Words in `T` and `U` approximating involutions `T_A`, with exact
//! certificates.
//!
//! A block word approximates `T_{i × [0, 2ε)}` in three stages:
//!
//! * `close`: `K` with `Kβ ≈ ε` (mod 1), fixing the number of telescoping factors;
//! * `base`: `k` with `kα ≈ ε e_i`, so `V = U · T^k U T^-k` is close to
//!   `T_{[0,ε) ∪ [β,β+ε)}` on circle `i` and to the identity elsewhere;
//! * `shift j`: `m_j` with `m_j α_i ≈ t_j`, moving copies of `V` to the
//!   telescoping offsets `t_j`.
//!
//! Intervals at other positions conjugate a block by one more power of `T`;
//! general arc sets are cut into short arcs and the interval words multiplied.
//! Every returned certificate carries the exact distance recomputed from the
//! word, and that distance is below the requested `δ`.

mod builder;
mod certificate;
mod word;

pub use builder::{
    auto_eps, check_smallness, residual_stability, synth_block, synth_interval, synth_multi,
    synth_set, telescoping_factor, SynthesisParams,
};
pub use certificate::{
    certify, verify_record, BudgetLine, BudgetRecord, CertificateRecord, SynthesisCertificate,
    SystemRecord, CERTIFICATE_FORMAT,
};
pub use word::{conjugate_word, evaluate, GeneratorWord, Token};

use thiserror::Error;

use crate::circle_maps::CircleMapError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("eps = {eps} is not small enough: {condition}")]
    Smallness { eps: String, condition: String },
    #[error("stage `{stage}`: no k with 1 <= |k| <= {k_max} reaches the tolerance")]
    NotFound { stage: String, k_max: u64 },
    #[error("target cannot be assembled from separate arcs: {0}")]
    Separation(String),
    #[error("rotation amounts are not linearly independent over the rationals together with 1")]
    Independence,
    #[error("operation needs {expected} circle(s), the system has {actual}")]
    CircleCount { expected: String, actual: usize },
    #[error("delta must be positive")]
    BadDelta,
    #[error("no certified word within delta = {delta} (best achieved {achieved})")]
    NotCertified { delta: String, achieved: String },
    #[error("cannot parse word: {0}")]
    WordParse(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    CircleMap(CircleMapError),
}

impl From<CircleMapError> for SynthesisError {
    fn from(e: CircleMapError) -> Self {
        match e {
            CircleMapError::Dependent => SynthesisError::Independence,
            other => SynthesisError::CircleMap(other),
        }
    }
}
