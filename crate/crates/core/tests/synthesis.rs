mod common;

use common::num;
use fullgroup::circle_maps::{ArcSet, RotationSystem};
use fullgroup::number_field::CircleNumber;
use fullgroup::synthesis::*;

fn params() -> SynthesisParams {
    SynthesisParams::default()
}

fn check_budget(cert: &SynthesisCertificate) {
    let mut total = CircleNumber::zero();
    for line in &cert.budget_trace {
        assert!(line.achieved <= line.allocated, "{line:?}");
        total = total + line.allocated.clone();
    }
    assert!(
        total <= cert.delta,
        "allocations {total} exceed delta {}",
        cert.delta
    );
}

fn check_sound(cert: &SynthesisCertificate) {
    let c = cert.clone();
    // the certifier shares nothing with the builder
    let recomputed = std::thread::spawn(move || certify(&c.system, &c.word, &c.target).unwrap())
        .join()
        .unwrap();
    assert_eq!(recomputed, cert.achieved_distance);
    assert!(cert.achieved_distance < cert.delta);
    check_budget(cert);
}

#[test]
fn evaluate_examples() {
    let s = RotationSystem::default_single();
    assert!(evaluate(&GeneratorWord::empty(), &s).is_identity());
    assert!(evaluate(&"U U".parse().unwrap(), &s).is_identity());
    let w = GeneratorWord::new([Token::Rot(1), Token::Inv, Token::Rot(-1)]);
    assert_eq!(
        evaluate(&w, &s),
        s.make_involution(&s.image(&s.base_set(), 1)).unwrap()
    );
    assert_eq!(conjugate_word(&GeneratorWord::inv(), 1), w);
}

#[test]
fn block_examples() {
    let s = RotationSystem::default_single();
    let wide = synth_block(&s, &num("1/20"), &num("1/5"), &params()).unwrap();
    check_sound(&wide);
    assert_eq!(wide.target, ArcSet::parse("[0, 1/10)", 1, 0).unwrap());
    let narrow = synth_block(&s, &num("1/20"), &num("1/10"), &params()).unwrap();
    check_sound(&narrow);
    assert!(narrow.word.letter_length() >= wide.word.letter_length());
    assert!(matches!(
        synth_block(&s, &num("2/5"), &num("1/5"), &params()),
        Err(SynthesisError::Smallness { .. })
    ));
    assert_eq!(
        synth_block(&s, &num("1/20"), &num("0"), &params()),
        Err(SynthesisError::BadDelta)
    );
}

#[test]
fn block_is_deterministic() {
    let s = RotationSystem::default_single();
    let a = synth_block(&s, &num("1/20"), &num("1/10"), &params()).unwrap();
    let b = synth_block(&s, &num("1/20"), &num("1/10"), &params()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn interval_examples() {
    let s = RotationSystem::default_single();
    let at_zero = synth_interval(
        &s,
        0,
        &CircleNumber::zero(),
        &num("1/10"),
        &num("1/5"),
        &params(),
    )
    .unwrap();
    let block = synth_block(&s, &num("1/20"), &num("1/5"), &params()).unwrap();
    assert_eq!(at_zero, block);
    let half = synth_interval(&s, 0, &num("1/2"), &num("1/10"), &num("1/10"), &params()).unwrap();
    check_sound(&half);
    assert_eq!(half.target, ArcSet::parse("[1/2, 3/5)", 1, 0).unwrap());
    assert!(synth_interval(&s, 0, &num("1/3"), &num("1/2"), &num("1/10"), &params()).is_err());
}

#[test]
fn set_examples() {
    let s = RotationSystem::default_single();
    let empty = synth_set(&s, &ArcSet::empty(1), &num("1/20"), &num("1/5"), &params()).unwrap();
    assert!(empty.word.is_empty());
    assert!(empty.achieved_distance.is_zero());
    let two = ArcSet::parse("[0, 1/10) U [1/5, 1/4)", 1, 0).unwrap();
    let cert = synth_set(&s, &two, &num("1/20"), &num("1/5"), &params()).unwrap();
    check_sound(&cert);
    // T([0, 1/10)) = [sqrt(2) - 1, sqrt(2) - 9/10) runs into [1/2, 3/5)
    let clash = ArcSet::parse("[0, 1/10) U [1/2, 3/5)", 1, 0).unwrap();
    assert!(matches!(
        synth_set(&s, &clash, &num("1/20"), &num("1/5"), &params()),
        Err(SynthesisError::Separation(_))
    ));
    let long = ArcSet::parse("[0, 9/10)", 1, 0).unwrap();
    assert!(matches!(
        synth_set(&s, &long, &num("1/20"), &num("1/5"), &params()),
        Err(SynthesisError::Smallness { .. })
    ));
}

#[test]
fn set_with_long_arc_is_cut_into_pieces() {
    let s = RotationSystem::default_single();
    let a = ArcSet::parse("[3/5, 3/4)", 1, 0).unwrap();
    let cert = synth_set(&s, &a, &num("1/20"), &num("1/5"), &params()).unwrap();
    check_sound(&cert);
    assert!(cert
        .budget_trace
        .iter()
        .any(|l| l.stage.starts_with("piece1/")));
}

#[test]
fn multi_examples() {
    let two = RotationSystem::with_default_circles(2);
    let cert = synth_multi(&two, 0, &num("1/20"), &num("1/5"), &params()).unwrap();
    check_sound(&cert);
    let w = cert.word.evaluate(&two);
    let off = w.support().without_circle(0).measure();
    let base = cert
        .budget_trace
        .iter()
        .find(|l| l.stage == "base")
        .unwrap();
    assert!(off <= base.allocated, "off-component {off}");
    assert!(off < num("1/5"));

    let one = RotationSystem::default_single();
    assert_eq!(
        synth_multi(&one, 0, &num("1/20"), &num("1/5"), &params()).unwrap(),
        synth_block(&one, &num("1/20"), &num("1/5"), &params()).unwrap()
    );

    let dependent = RotationSystem::perturbation(
        vec![num("sqrt(2) - 1"), num("3*sqrt(2) - 4")],
        num("sqrt(5) - 2"),
    )
    .unwrap();
    assert_eq!(
        synth_multi(&dependent, 0, &num("1/20"), &num("1/5"), &params()),
        Err(SynthesisError::Independence)
    );
    assert!(matches!(
        synth_block(&two, &num("1/20"), &num("1/5"), &params()),
        Err(SynthesisError::CircleCount { .. })
    ));
}

#[test]
fn residual_examples() {
    let s = RotationSystem::default_single();
    let cert = synth_block(&s, &num("1/20"), &num("1/10"), &params()).unwrap();
    let (a, b) = residual_stability(&cert.word, &cert.target, &s, &s).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, cert.achieved_distance);
    let near = s
        .perturbed(vec![s.alpha(0) + &CircleNumber::ratio(1, 1_000_000)])
        .unwrap();
    let (a, b) = residual_stability(&cert.word, &cert.target, &s, &near).unwrap();
    assert_eq!(a, cert.achieved_distance);
    assert!(b.sign() != fullgroup::number_field::Sign::Negative);
    let rational = s.perturbed(vec![num("1/2")]).unwrap();
    let (_, far) = residual_stability(&cert.word, &cert.target, &s, &rational).unwrap();
    assert!(far <= CircleNumber::one());
}

#[test]
fn telescoping_identity() {
    let s = RotationSystem::default_single();
    let eps = num("1/20");
    let head = s
        .make_involution(&ArcSet::arc(1, 0, &CircleNumber::zero(), &eps).unwrap())
        .unwrap();
    let mut product = s.identity();
    for k in 1..=50 {
        product = product
            .compose(&telescoping_factor(&s, 0, &eps, k).unwrap())
            .unwrap();
        let tail = s
            .make_involution(&ArcSet::arc(1, 0, &s.beta().scale_int(k), &eps).unwrap())
            .unwrap();
        assert_eq!(product, head.compose(&tail).unwrap(), "k = {k}");
    }
}

#[test]
fn certificate_round_trip() {
    let s = RotationSystem::default_single();
    let cert = synth_interval(&s, 0, &num("1/2"), &num("1/10"), &num("1/10"), &params()).unwrap();
    let record = cert.to_record();
    let text = serde_json::to_string_pretty(&record).unwrap();
    let back: CertificateRecord = serde_json::from_str(&text).unwrap();
    let again = verify_record(&back).unwrap();
    assert_eq!(again, cert);
    assert_eq!(
        serde_json::to_string_pretty(&again.to_record()).unwrap(),
        text
    );
    assert!(cert.to_text().contains("certified: true"));
}

#[test]
fn schema_matches_record_fields() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../docs/certificate.schema.json")).unwrap();
    let s = RotationSystem::with_default_circles(2);
    let cert = synth_multi(&s, 1, &num("1/40"), &num("1/5"), &params()).unwrap();
    let record = serde_json::to_value(cert.to_record()).unwrap();
    let keys = |v: &serde_json::Value| {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let required = |v: &serde_json::Value| {
        let mut k: Vec<String> = v["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap().to_owned())
            .collect();
        k.sort();
        k
    };
    assert_eq!(keys(&record), required(&schema));
    assert_eq!(
        keys(&record["system"]),
        required(&schema["properties"]["system"])
    );
    assert_eq!(
        keys(&record["budget_trace"][0]),
        required(&schema["$defs"]["budget"])
    );
    assert_eq!(schema["properties"]["format"]["const"], CERTIFICATE_FORMAT);
}
