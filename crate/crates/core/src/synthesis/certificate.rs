use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circle_maps::{ArcSet, RotationSystem};
use crate::number_field::CircleNumber;

use super::word::GeneratorWord;
use super::SynthesisError;

pub const CERTIFICATE_FORMAT: &str = "fullgroup-certificate/1";

const DECIMAL_DIGITS: u32 = 12;

/// One approximation stage: the Diophantine `k` it chose, its share of the
/// error budget, and the exact error bound implied by the residual of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetLine {
    pub stage: String,
    pub k: i64,
    pub allocated: CircleNumber,
    pub achieved: CircleNumber,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisCertificate {
    pub system: RotationSystem,
    pub word: GeneratorWord,
    pub target: ArcSet,
    pub delta: CircleNumber,
    /// `d(word, T_target)`, computed exactly from the word.
    pub achieved_distance: CircleNumber,
    pub budget_trace: Vec<BudgetLine>,
}

/// Exact `d(W, T_A)` recomputed from scratch.
pub fn certify(
    system: &RotationSystem,
    word: &GeneratorWord,
    target: &ArcSet,
) -> Result<CircleNumber, SynthesisError> {
    let involution = system.make_involution(target)?;
    Ok(word.evaluate(system).uniform_distance(&involution)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub circles: usize,
    pub alphas: Vec<String>,
    pub beta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub stage: String,
    pub k: i64,
    pub allocated: String,
    pub achieved: String,
}

/// Serialized certificate; every number is in exact text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub format: String,
    pub system: SystemRecord,
    pub target: String,
    pub delta: String,
    pub word: String,
    pub word_tokens: usize,
    pub word_length: u64,
    pub achieved_distance: String,
    pub achieved_decimal: String,
    pub budget_trace: Vec<BudgetRecord>,
    pub certified: bool,
}

fn decimal(x: &CircleNumber) -> String {
    x.to_decimal(DECIMAL_DIGITS)
}

impl SynthesisCertificate {
    pub fn is_certified(&self) -> bool {
        self.achieved_distance < self.delta
    }

    pub fn to_record(&self) -> CertificateRecord {
        CertificateRecord {
            format: CERTIFICATE_FORMAT.to_string(),
            system: SystemRecord {
                circles: self.system.circles(),
                alphas: self
                    .system
                    .alphas()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                beta: self.system.beta().to_string(),
            },
            target: self.target.to_string(),
            delta: self.delta.to_string(),
            word: self.word.to_string(),
            word_tokens: self.word.token_count(),
            word_length: self.word.letter_length(),
            achieved_distance: self.achieved_distance.to_string(),
            achieved_decimal: decimal(&self.achieved_distance),
            budget_trace: self
                .budget_trace
                .iter()
                .map(|l| BudgetRecord {
                    stage: l.stage.clone(),
                    k: l.k,
                    allocated: l.allocated.to_string(),
                    achieved: l.achieved.to_string(),
                })
                .collect(),
            certified: self.is_certified(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    /// Line-oriented `key: value` rendering with one `budget:` line per stage.
    pub fn to_text(&self) -> String {
        let r = self.to_record();
        let mut out = String::new();
        let _ = writeln!(out, "format: {}", r.format);
        let _ = writeln!(out, "circles: {}", r.system.circles);
        for (i, a) in r.system.alphas.iter().enumerate() {
            let _ = writeln!(out, "alpha{i}: {a}");
        }
        let _ = writeln!(out, "beta: {}", r.system.beta);
        let _ = writeln!(out, "target: {}", r.target);
        let _ = writeln!(out, "delta: {}", r.delta);
        let _ = writeln!(out, "word: {}", r.word);
        let _ = writeln!(out, "word_tokens: {}", r.word_tokens);
        let _ = writeln!(out, "word_length: {}", r.word_length);
        let _ = writeln!(out, "achieved_distance: {}", r.achieved_distance);
        let _ = writeln!(out, "achieved_decimal: {}", r.achieved_decimal);
        for b in &r.budget_trace {
            let _ = writeln!(
                out,
                "budget: {} k={} allocated={} achieved={}",
                b.stage, b.k, b.allocated, b.achieved
            );
        }
        let _ = writeln!(out, "certified: {}", r.certified);
        out
    }
}

fn number(field: &str, text: &str) -> Result<CircleNumber, SynthesisError> {
    text.parse()
        .map_err(|e| SynthesisError::Certificate(format!("{field}: {e}")))
}

/// Rebuilds the certificate from its record, recomputing the distance from
/// the word alone. Fails if the record's claims do not match.
pub fn verify_record(record: &CertificateRecord) -> Result<SynthesisCertificate, SynthesisError> {
    let bad = |msg: String| SynthesisError::Certificate(msg);
    if record.format != CERTIFICATE_FORMAT {
        return Err(bad(format!("unknown format `{}`", record.format)));
    }
    if record.system.alphas.len() != record.system.circles {
        return Err(bad("alphas do not match circles".into()));
    }
    let alphas = record
        .system
        .alphas
        .iter()
        .map(|a| number("alpha", a))
        .collect::<Result<Vec<_>, _>>()?;
    let system = RotationSystem::new(alphas, number("beta", &record.system.beta)?)?;
    let target = ArcSet::parse(&record.target, system.circles(), 0)?;
    let delta = number("delta", &record.delta)?;
    let word: GeneratorWord = record.word.parse()?;
    let budget_trace = record
        .budget_trace
        .iter()
        .map(|b| {
            Ok(BudgetLine {
                stage: b.stage.clone(),
                k: b.k,
                allocated: number("allocated", &b.allocated)?,
                achieved: number("achieved", &b.achieved)?,
            })
        })
        .collect::<Result<Vec<_>, SynthesisError>>()?;
    let achieved_distance = certify(&system, &word, &target)?;
    let cert = SynthesisCertificate {
        system,
        word,
        target,
        delta,
        achieved_distance,
        budget_trace,
    };
    let claimed = number("achieved_distance", &record.achieved_distance)?;
    if claimed != cert.achieved_distance {
        return Err(bad(format!(
            "claimed distance {claimed} but the word achieves {}",
            cert.achieved_distance
        )));
    }
    if !cert.is_certified() {
        return Err(bad(format!(
            "distance {claimed} is not below delta {}",
            cert.delta
        )));
    }
    Ok(cert)
}
