use rpm_core::hankel::HankelProblem;
use rpm_core::models::{v2_resonance, ResonanceModel, ResonanceProblem};
use rpm_core::solver::{find_root, run_sequence, seed_scan, RootProblem, ScanRegion};
use rpm_core::{DecimalValue, MpComplex, RpmError, SolveOptions};
use rug::Float;

fn resonance(lambda: &str) -> ResonanceModel {
    ResonanceModel {
        lambda: DecimalValue::parse(lambda).unwrap(),
    }
}

fn c(re: &str, im: &str, prec: u32) -> MpComplex {
    MpComplex::parse(re, im, prec).unwrap()
}

#[test]
fn starved_precision_escalates() {
    let model = resonance("0.08");
    let opts = SolveOptions {
        precision_bits: 128,
        ..SolveOptions::default()
    };
    let seed = c("-0.3110518647", "2.09e-11", 128);
    let est = find_root(&model, 20, 0, &seed, &opts).unwrap();
    assert!(est.precision_bits > 128, "stayed at {} bits", est.precision_bits);
    let (re, im) = est.root.to_f64_pair();
    assert!(
        (re + 0.311051864692925).abs() < 1e-12 && (im - 2.0948588e-11).abs() < 1e-17,
        "{re} {im}"
    );
}

#[test]
fn precision_cap_is_an_error() {
    let model = resonance("0.08");
    let opts = SolveOptions {
        precision_bits: 64,
        precision_max: 64,
        ..SolveOptions::default()
    };
    let seed = c("-0.3110518647", "2.09e-11", 64);
    let err = find_root(&model, 20, 0, &seed, &opts).unwrap_err();
    assert!(matches!(err, RpmError::Precision { .. }), "{err}");
}

#[test]
fn rectangle_scan_finds_the_resonance() {
    let model = resonance("0.10");
    let prec = 256;
    let region = ScanRegion::Rectangle {
        re_lo: Float::with_val(prec, -0.35),
        re_hi: Float::with_val(prec, -0.2),
        im_lo: Float::new(prec),
        im_hi: Float::with_val(prec, 1e-6),
    };
    let hp = HankelProblem::new(10, 0).unwrap();
    let found = seed_scan(&model.grid(prec).unwrap(), &hp, &region, 48, prec).unwrap();
    assert!(
        found
            .iter()
            .take(6)
            .any(|s| (s.location.re().to_f64() + 0.27519).abs() < 0.01),
        "deepest minima: {:?}",
        found
            .iter()
            .take(6)
            .map(|s| s.location.to_f64_pair())
            .collect::<Vec<_>>()
    );
}

#[test]
fn newton_commutes_with_conjugation() {
    let model = resonance("0.10");
    let opts = SolveOptions::default();
    let seed = c("-0.2752", "1.4e-8", 512);
    let up = find_root(&model, 12, 0, &seed, &opts).unwrap();
    let down = find_root(&model, 12, 0, &seed.conj(), &opts).unwrap();
    assert_eq!(down.root, up.root.conj());
}

#[test]
fn residual_drops_ten_orders() {
    let model = resonance("0.10");
    let opts = SolveOptions::default();
    let seed = c("-0.27519", "1.39e-8", 512);
    let est = find_root(&model, 20, 1, &seed, &opts).unwrap();
    assert!(
        est.residual_log10 <= est.seed_residual_log10 - 10.0,
        "{} vs {}",
        est.residual_log10,
        est.seed_residual_log10
    );
}

#[test]
fn repeated_runs_are_bit_identical() {
    let model = resonance("0.09");
    let opts = SolveOptions {
        d_min: 10,
        d_max: 14,
        ..SolveOptions::default()
    };
    let seed = c("-0.2926579589", "7.92e-10", 512);
    let a = run_sequence(&model, 0, &opts, &seed).unwrap();
    let b = run_sequence(&model, 0, &opts, &seed).unwrap();
    assert_eq!(a, b);
}

#[test]
fn explicit_resonance_seed() {
    let problem = ResonanceProblem {
        seed: Some(c("-0.2752", "1e-8", 512)),
        ..ResonanceProblem::new(
            DecimalValue::parse("0.10").unwrap(),
            SolveOptions {
                d_min: 12,
                ..SolveOptions::default()
            },
        )
    };
    let out = v2_resonance(&problem).unwrap();
    let (re, im) = out.report.value.to_f64_pair();
    assert!((re + 0.275192333308285).abs() < 1e-13 && im > 0.0, "{re} {im}");
    assert!(out.report.certified_digits >= 15);
}
