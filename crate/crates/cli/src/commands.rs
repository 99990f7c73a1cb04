use std::fmt::Write as _;
use std::io::Read as _;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use fullgroup::circle_maps::ArcSet;
use fullgroup::diophantine::{continued_fraction, simultaneous_approx, three_distance_gaps};
use fullgroup::number_field::CircleNumber;
use fullgroup::synthesis::{
    auto_eps, synth_multi, synth_set, verify_record, CertificateRecord, SynthesisCertificate,
    SynthesisError,
};

use crate::config::{Format, RunConfig};
use crate::maps::parse_map;
use crate::CliError;

const DIGITS: u32 = 12;
const DEFAULT_SEED: u64 = 1;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_certificate(cert: &SynthesisCertificate, format: Format) -> String {
    match format {
        Format::Json => json(&cert.to_record()),
        Format::Text => cert.to_text(),
        Format::Csv => {
            let r = cert.to_record();
            format!(
                "target,delta,word_tokens,word_length,achieved_distance,achieved_decimal,certified\n{},{},{},{},{},{},{}\n",
                csv_field(&r.target),
                csv_field(&r.delta),
                r.word_tokens,
                r.word_length,
                csv_field(&r.achieved_distance),
                r.achieved_decimal,
                r.certified
            )
        }
    }
}

fn first_delta(cfg: &RunConfig) -> CircleNumber {
    cfg.delta
        .as_ref()
        .and_then(|d| d.first().cloned())
        .unwrap_or_else(|| CircleNumber::ratio(1, 10))
}

pub fn synth(cfg: &RunConfig, target: &str) -> Result<String, CliError> {
    let system = cfg.system()?;
    let set = ArcSet::parse(target, system.circles(), cfg.component)?;
    let delta = first_delta(cfg);
    let eps = match cfg.eps.as_ref().and_then(|e| e.first()) {
        Some(e) => e.clone(),
        None => {
            let mut circles: Vec<usize> = set.iter().map(|(c, _)| c).collect();
            circles.push(cfg.component);
            circles
                .into_iter()
                .map(|c| auto_eps(&system, c))
                .min()
                .expect("at least one circle")
        }
    };
    let cert = synth_set(&system, &set, &eps, &delta, &cfg.params())?;
    Ok(render_certificate(&cert, cfg.format_or(Format::Json)))
}

#[derive(Serialize)]
struct DistReport {
    distance: String,
    decimal_lo: String,
    decimal_hi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    disagreements: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

pub fn dist(cfg: &RunConfig, a: &str, b: &str, samples: Option<u64>) -> Result<String, CliError> {
    let system = cfg.system()?;
    let s = parse_map(a, &system, cfg.component)?;
    let r = parse_map(b, &system, cfg.component)?;
    let d = s.uniform_distance(&r)?;
    let (lo, hi) = d.decimal_enclosure(DIGITS);
    let mut report = DistReport {
        distance: d.to_string(),
        decimal_lo: lo,
        decimal_hi: hi,
        samples: None,
        disagreements: None,
        seed: None,
    };
    if let Some(count) = samples {
        let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
        eprintln!("seed: {seed}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = BigRational::from_integer(num_traits::One::one())
            / BigRational::from_integer((1u128 << 64).into());
        let mut hits = 0;
        for _ in 0..count {
            let circle = rng.gen_range(0..system.circles());
            let x = CircleNumber::from_rational(
                BigRational::from_integer(rng.gen::<u64>().into()) * &scale,
            );
            if !s.agrees_at(&r, circle, &x) {
                hits += 1;
            }
        }
        report.samples = Some(count);
        report.disagreements = Some(hits);
        report.seed = Some(seed);
    }
    Ok(match cfg.format_or(Format::Text) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("distance,decimal_lo,decimal_hi");
            if report.samples.is_some() {
                out.push_str(",samples,disagreements,seed");
            }
            let _ = write!(
                out,
                "\n{},{},{}",
                csv_field(&report.distance),
                report.decimal_lo,
                report.decimal_hi
            );
            if let (Some(n), Some(k), Some(seed)) =
                (report.samples, report.disagreements, report.seed)
            {
                let _ = write!(out, ",{n},{k},{seed}");
            }
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = format!(
                "distance: {}\ndecimal: [{}, {}]\n",
                report.distance, report.decimal_lo, report.decimal_hi
            );
            if let (Some(n), Some(k), Some(seed)) =
                (report.samples, report.disagreements, report.seed)
            {
                let _ = writeln!(
                    out,
                    "sampled: {k}/{n} = {:.6} (seed {seed})",
                    k as f64 / n as f64
                );
            }
            out
        }
    })
}

pub fn verify(cfg: &RunConfig, path: &str) -> Result<String, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
    };
    let record: CertificateRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{path}: not a certificate: {e}")))?;
    let cert = verify_record(&record).map_err(|e| CliError::Verify(e.to_string()))?;
    if cert.to_record() != record {
        return Err(CliError::Verify(
            "recorded fields differ from the recomputed certificate".into(),
        ));
    }
    Ok(render_certificate(&cert, cfg.format_or(Format::Json)))
}

fn error_kind(e: &SynthesisError) -> &'static str {
    match e {
        SynthesisError::Smallness { .. } => "Smallness",
        SynthesisError::NotFound { .. } => "NotFound",
        SynthesisError::NotCertified { .. } => "NotCertified",
        SynthesisError::Separation(_) => "Separation",
        SynthesisError::Independence => "Independence",
        _ => "Error",
    }
}

#[derive(Serialize)]
struct TableRow {
    eps: String,
    delta: String,
    word_tokens: Option<usize>,
    word_length: Option<u64>,
    achieved_distance: Option<String>,
    achieved_decimal: Option<String>,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

pub fn table(cfg: &RunConfig, timing: bool) -> Result<String, CliError> {
    let system = cfg.system()?;
    let eps = cfg
        .eps
        .clone()
        .unwrap_or_else(|| vec![auto_eps(&system, cfg.component)]);
    let deltas = cfg
        .delta
        .clone()
        .ok_or_else(|| CliError::Usage("table needs --delta".into()))?;
    if eps.is_empty() || deltas.is_empty() {
        return Err(CliError::Usage(
            "eps and delta lists must be nonempty".into(),
        ));
    }
    let params = cfg.params();
    let cells: Vec<(CircleNumber, CircleNumber)> = eps
        .iter()
        .flat_map(|e| deltas.iter().map(move |d| (e.clone(), d.clone())))
        .collect();
    let rows: Vec<TableRow> = cells
        .par_iter()
        .map(|(e, d)| {
            let start = Instant::now();
            let result = synth_multi(&system, cfg.component, e, d, &params);
            let wall_ms = timing.then(|| start.elapsed().as_millis());
            match result {
                Ok(cert) => TableRow {
                    eps: e.to_string(),
                    delta: d.to_string(),
                    word_tokens: Some(cert.word.token_count()),
                    word_length: Some(cert.word.letter_length()),
                    achieved_decimal: Some(cert.achieved_distance.to_decimal(DIGITS)),
                    achieved_distance: Some(cert.achieved_distance.to_string()),
                    status: "certified".into(),
                    wall_ms,
                },
                Err(err) => TableRow {
                    eps: e.to_string(),
                    delta: d.to_string(),
                    word_tokens: None,
                    word_length: None,
                    achieved_distance: None,
                    achieved_decimal: None,
                    status: format!("{}: {err}", error_kind(&err)),
                    wall_ms,
                },
            }
        })
        .collect();
    Ok(match cfg.format_or(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv | Format::Text => {
            let sep = if cfg.format_or(Format::Csv) == Format::Csv {
                ","
            } else {
                "\t"
            };
            let mut header = vec![
                "eps",
                "delta",
                "word_tokens",
                "word_length",
                "achieved_distance",
                "achieved_decimal",
                "status",
            ];
            if timing {
                header.push("wall_ms");
            }
            let mut out = header.join(sep);
            out.push('\n');
            for r in &rows {
                let opt = |v: Option<String>| v.unwrap_or_default();
                let mut fields = vec![
                    csv_field(&r.eps),
                    csv_field(&r.delta),
                    opt(r.word_tokens.map(|v| v.to_string())),
                    opt(r.word_length.map(|v| v.to_string())),
                    csv_field(&opt(r.achieved_distance.clone())),
                    opt(r.achieved_decimal.clone()),
                    csv_field(&r.status),
                ];
                if let Some(ms) = r.wall_ms {
                    fields.push(ms.to_string());
                }
                out.push_str(&fields.join(sep));
                out.push('\n');
            }
            out
        }
    })
}

#[derive(Serialize)]
struct DiophReport {
    k: i64,
    achieved: String,
    achieved_decimal: String,
    evaluations: u64,
}

pub fn dioph(
    cfg: &RunConfig,
    goals: &[CircleNumber],
    tol: Option<CircleNumber>,
    cf: Option<usize>,
    three: Option<u64>,
) -> Result<String, CliError> {
    let system = cfg.system()?;
    let format = cfg.format_or(Format::Text);
    if let Some(depth) = cf {
        let rows: Vec<(String, Vec<u64>)> = system
            .alphas()
            .iter()
            .map(|a| (a.to_string(), continued_fraction(a, depth)))
            .collect();
        return Ok(match format {
            Format::Json => json(&rows),
            _ => rows
                .iter()
                .map(|(a, q)| {
                    let q: Vec<String> = q.iter().map(ToString::to_string).collect();
                    format!("{}: [{}]\n", a, q.join(", "))
                })
                .collect(),
        });
    }
    if let Some(k) = three {
        let rows: Vec<(String, Vec<String>)> = system
            .alphas()
            .iter()
            .map(|a| {
                (
                    a.to_string(),
                    three_distance_gaps(a, k)
                        .iter()
                        .map(ToString::to_string)
                        .collect(),
                )
            })
            .collect();
        return Ok(match format {
            Format::Json => json(&rows),
            _ => rows
                .iter()
                .map(|(a, g)| format!("{}: {} gap length(s): {}\n", a, g.len(), g.join("; ")))
                .collect(),
        });
    }
    let tol = tol
        .ok_or_else(|| CliError::Usage("dioph needs --tol (or --cf / --three-distance)".into()))?;
    let targets: Vec<CircleNumber> = if goals.is_empty() {
        vec![CircleNumber::zero(); system.circles()]
    } else {
        goals.to_vec()
    };
    let hit = simultaneous_approx(system.alphas(), &targets, &tol, cfg.params().k_max)?;
    let report = DiophReport {
        k: hit.k,
        achieved_decimal: hit.achieved.to_decimal(DIGITS),
        achieved: hit.achieved.to_string(),
        evaluations: hit.evaluations,
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => format!(
            "k,achieved,achieved_decimal,evaluations\n{},{},{},{}\n",
            report.k,
            csv_field(&report.achieved),
            report.achieved_decimal,
            report.evaluations
        ),
        Format::Text => format!(
            "k: {}\nachieved: {}\nachieved_decimal: {}\nevaluations: {}\n",
            report.k, report.achieved, report.achieved_decimal, report.evaluations
        ),
    })
}
