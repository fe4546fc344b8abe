//! Jobs: one per lambda in the model modes, a single one for a user potential.

use rayon::prelude::*;
use rpm_core::hankel::HankelProblem;
use rpm_core::models::{
    v1_shift, v2_resonance, validate_exact_model, ModelOutcome, MultiplicityMode, ResonanceProblem, ShiftModel,
    ShiftProblem,
};
use rpm_core::solver::{seed_scan, solve_sequences, Domain, PotentialProblem, RootProblem, ScanRegion, Spacing};
use rpm_core::{ConvergenceReport, DecimalValue, MpComplex, RootSequence, RpmError};
use rug::Float;

use crate::config::{Mode, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    /// One root `E^[D,d]` of a sequence, or one scan candidate.
    Entry,
    /// Converged value for a job.
    Summary,
}

#[derive(Clone, Debug)]
pub struct Record {
    pub kind: RecordKind,
    pub mode: Mode,
    pub lambda: Option<DecimalValue>,
    pub d: Option<usize>,
    pub dimension: Option<usize>,
    pub value: MpComplex,
    pub residual_log10: f64,
    pub iterations: usize,
    pub precision_bits: u32,
    pub certified_digits: Option<u32>,
}

#[derive(Debug)]
pub struct JobOutput {
    pub label: String,
    pub records: Vec<Record>,
    pub failure: Option<RpmError>,
}

/// Exit status for a failed job: 4 for precision exhaustion, 3 for configuration, else 2.
pub fn exit_code(err: &RpmError) -> i32 {
    match err.root_cause() {
        RpmError::Precision { .. } => 4,
        RpmError::Config(_) | RpmError::UnsupportedSingularity { .. } => 3,
        _ => 2,
    }
}

/// Worst exit status over all jobs.
pub fn overall_exit_code(outputs: &[JobOutput]) -> i32 {
    let codes: Vec<i32> = outputs
        .iter()
        .filter_map(|o| o.failure.as_ref())
        .map(exit_code)
        .collect();
    [4, 3, 2].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

fn entry_records(mode: Mode, lambda: Option<&DecimalValue>, seq: &RootSequence) -> Vec<Record> {
    seq.entries
        .iter()
        .map(|e| Record {
            kind: RecordKind::Entry,
            mode,
            lambda: lambda.cloned(),
            d: Some(seq.d),
            dimension: Some(e.dimension),
            value: e.root.clone(),
            residual_log10: e.residual_log10,
            iterations: e.iterations,
            precision_bits: e.precision_bits,
            certified_digits: None,
        })
        .collect()
}

fn summary_record(
    mode: Mode,
    lambda: Option<&DecimalValue>,
    sequences: &[RootSequence],
    report: &ConvergenceReport,
) -> Record {
    let primary = sequences
        .iter()
        .filter_map(RootSequence::last)
        .find(|e| e.root == report.value);
    Record {
        kind: RecordKind::Summary,
        mode,
        lambda: lambda.cloned(),
        d: None,
        dimension: None,
        value: report.value.clone(),
        residual_log10: primary.map_or(f64::NAN, |e| e.residual_log10),
        iterations: sequences.iter().flat_map(|s| &s.entries).map(|e| e.iterations).sum(),
        precision_bits: report.precision_used,
        certified_digits: Some(report.certified_digits),
    }
}

fn outcome_records(mode: Mode, lambda: Option<&DecimalValue>, outcome: &ModelOutcome) -> Vec<Record> {
    let mut records: Vec<Record> = outcome
        .sequences
        .iter()
        .flat_map(|s| entry_records(mode, lambda, s))
        .collect();
    records.push(summary_record(mode, lambda, &outcome.sequences, &outcome.report));
    records
}

/// Entries of the sequence that was cut short, in the reported coordinate.
fn partial_records(
    mode: Mode,
    lambda: Option<&DecimalValue>,
    err: &RpmError,
    to_reported: impl Fn(&MpComplex) -> MpComplex,
) -> Vec<Record> {
    match err {
        RpmError::Sequence { partial, .. } => entry_records(mode, lambda, &partial.map_roots(to_reported)),
        _ => Vec::new(),
    }
}

fn shift_job(cfg: &RunConfig, lambda: &DecimalValue) -> JobOutput {
    let mut problem = ShiftProblem::new(lambda.clone(), cfg.options.clone());
    problem.seed = cfg.seed.as_ref().map(|s| s.re.at(cfg.options.precision_bits));
    let label = format!("shift lambda={lambda}");
    match v1_shift(&problem) {
        Ok(outcome) => JobOutput {
            label,
            records: outcome_records(Mode::Shift, Some(lambda), &outcome),
            failure: None,
        },
        Err(err) => {
            let model = ShiftModel {
                lambda: lambda.clone(),
                multiplicity: MultiplicityMode::Asserted,
            };
            let to_delta = |root: &MpComplex| root - &model.spurious_at(root.prec());
            JobOutput {
                label,
                records: partial_records(Mode::Shift, Some(lambda), &err, to_delta),
                failure: Some(err),
            }
        }
    }
}

fn resonance_job(cfg: &RunConfig, lambda: &DecimalValue) -> JobOutput {
    let prec = cfg.options.precision_bits;
    let mut problem = ResonanceProblem::new(lambda.clone(), cfg.options.clone());
    if let Some(s) = &cfg.seed {
        problem.seed = Some(MpComplex::new(s.re.at(prec), s.im.at(prec)));
    }
    let label = format!("resonance lambda={lambda}");
    match v2_resonance(&problem) {
        Ok(outcome) => JobOutput {
            label,
            records: outcome_records(Mode::Resonance, Some(lambda), &outcome),
            failure: None,
        },
        Err(err) => JobOutput {
            label,
            records: partial_records(Mode::Resonance, Some(lambda), &err, MpComplex::clone),
            failure: Some(err),
        },
    }
}

fn validate_job(cfg: &RunConfig, lambda: &DecimalValue) -> JobOutput {
    let prec = cfg.options.precision_bits;
    let label = format!("validate lambda={lambda}");
    match validate_exact_model(lambda, cfg.options.d_max, prec) {
        Ok(max) => {
            let failure = (!max.is_zero()).then(|| {
                RpmError::Invalid(format!(
                    "exact-model determinants do not vanish: max |H| = {}",
                    rpm_core::mp::to_decimal(&max, 12)
                ))
            });
            let residual_log10 = if max.is_zero() {
                f64::NEG_INFINITY
            } else {
                max.clone().log10().to_f64()
            };
            JobOutput {
                label,
                records: vec![Record {
                    kind: RecordKind::Summary,
                    mode: Mode::Validate,
                    lambda: Some(lambda.clone()),
                    d: None,
                    dimension: None,
                    value: MpComplex::from_real(max),
                    residual_log10,
                    iterations: 0,
                    precision_bits: prec,
                    certified_digits: None,
                }],
                failure,
            }
        }
        Err(err) => JobOutput {
            label,
            records: Vec::new(),
            failure: Some(err),
        },
    }
}

fn solve_job(cfg: &RunConfig) -> JobOutput {
    let prec = cfg.options.precision_bits;
    let potential = cfg.potential.clone().expect("solve mode has a potential");
    let seed = cfg.seed.as_ref().expect("solve mode has a seed");
    let seed = MpComplex::new(seed.re.at(prec), seed.im.at(prec));
    let domain = if seed.im().is_zero() {
        Domain::Real
    } else {
        Domain::Complex
    };
    let problem = PotentialProblem { potential, domain };
    let label = "solve".to_string();
    match solve_sequences(&problem, &cfg.options, &seed) {
        Ok((sequences, report)) => {
            let mut records: Vec<Record> = sequences
                .iter()
                .flat_map(|s| entry_records(Mode::Solve, None, s))
                .collect();
            records.push(summary_record(Mode::Solve, None, &sequences, &report));
            JobOutput {
                label,
                records,
                failure: None,
            }
        }
        Err(err) => JobOutput {
            label,
            records: partial_records(Mode::Solve, None, &err, MpComplex::clone),
            failure: Some(err),
        },
    }
}

fn scan_job(cfg: &RunConfig) -> JobOutput {
    let prec = cfg.options.precision_bits;
    let spec = cfg.scan.as_ref().expect("scan mode has a region");
    let potential = cfg.potential.clone().expect("scan mode has a potential");
    let region = match &spec.im {
        None => ScanRegion::Interval {
            lo: spec.re_lo.at(prec),
            hi: spec.re_hi.at(prec),
            spacing: Spacing::Linear,
        },
        Some((lo, hi)) => ScanRegion::Rectangle {
            re_lo: spec.re_lo.at(prec),
            re_hi: spec.re_hi.at(prec),
            im_lo: lo.at(prec),
            im_hi: hi.at(prec),
        },
    };
    let problem = PotentialProblem {
        potential,
        domain: if spec.im.is_some() {
            Domain::Complex
        } else {
            Domain::Real
        },
    };
    let mut out = JobOutput {
        label: "scan".to_string(),
        records: Vec::new(),
        failure: None,
    };
    let grid = match problem.grid(prec) {
        Ok(g) => g,
        Err(err) => {
            out.failure = Some(err);
            return out;
        }
    };
    for dim in cfg.options.d_min..=cfg.options.d_max {
        for &d in &cfg.options.d_values {
            let found = HankelProblem::new(dim, d).and_then(|hp| seed_scan(&grid, &hp, &region, spec.points, prec));
            match found {
                Ok(candidates) => out.records.extend(candidates.into_iter().map(|c| Record {
                    kind: RecordKind::Entry,
                    mode: Mode::Scan,
                    lambda: None,
                    d: Some(d),
                    dimension: Some(dim),
                    value: c.location,
                    residual_log10: c.log10_abs,
                    iterations: 0,
                    precision_bits: prec,
                    certified_digits: None,
                })),
                Err(err) => {
                    out.failure = Some(err);
                    return out;
                }
            }
        }
    }
    out
}

/// Runs every job, concurrently across lambda values; results come back in input order.
pub fn run_jobs(cfg: &RunConfig) -> Vec<JobOutput> {
    match cfg.mode {
        Mode::Solve => vec![solve_job(cfg)],
        Mode::Scan => vec![scan_job(cfg)],
        mode => cfg
            .lambda
            .par_iter()
            .map(|lambda| match mode {
                Mode::Shift => shift_job(cfg, lambda),
                Mode::Resonance => resonance_job(cfg, lambda),
                _ => validate_job(cfg, lambda),
            })
            .collect(),
    }
}

/// `value` of a record as decimal text that reads back to the same float.
pub fn exact_digits(x: &Float) -> usize {
    rpm_core::mp::decimal_digits(x.prec()) as usize + 2
}
