//! Root finding on Hankel determinants: Newton at fixed `(D, d)`, seed chaining
//! over increasing `D`, precision escalation and convergence estimates.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Result, RpmError};
use crate::hankel::{assemble, deflated_log10, determinant, newton_step, Deflation, DetValue, HankelProblem};
use crate::mp::{decimal_digits, MpComplex, MIN_PRECISION};
use crate::series::{build_qgrid, riccati_coefficients, DecimalPotential, QGrid};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub d_min: usize,
    pub d_max: usize,
    pub d_values: Vec<usize>,
    pub precision_bits: u32,
    pub precision_max: u32,
    /// Relative step tolerance; `None` means `10^-(0.9 * decimal digits)` at the working precision.
    pub newton_tol: Option<Float>,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            d_min: 2,
            d_max: 20,
            d_values: vec![0, 1],
            precision_bits: 512,
            precision_max: 8192,
            newton_tol: None,
            max_iter: 60,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.d_min < 2 {
            return Err(RpmError::Config(format!("D_min = {} must be >= 2", self.d_min)));
        }
        if self.d_max < self.d_min {
            return Err(RpmError::Config(format!(
                "D_max = {} is below D_min = {}",
                self.d_max, self.d_min
            )));
        }
        if self.precision_bits < MIN_PRECISION {
            return Err(RpmError::Config(format!(
                "precision_bits = {} is below {MIN_PRECISION}",
                self.precision_bits
            )));
        }
        if self.precision_bits > self.precision_max {
            return Err(RpmError::Config(format!(
                "precision_bits = {} exceeds precision_max = {}",
                self.precision_bits, self.precision_max
            )));
        }
        if self.d_values.is_empty() {
            return Err(RpmError::Config("d_values must not be empty".into()));
        }
        if self.max_iter == 0 {
            return Err(RpmError::Config("max_iter must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, prec: u32) -> Float {
        match &self.newton_tol {
            Some(t) => Float::with_val(prec, t),
            None => {
                let exp = -((0.9 * f64::from(decimal_digits(prec))).floor() as i32);
                Float::with_val(prec, 10).pow(exp)
            }
        }
    }
}

/// Whether roots are sought on the real line or in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    Complex,
}

/// A root-finding target that can be rebuilt at any working precision.
pub trait RootProblem: Sync {
    fn grid(&self, prec: u32) -> Result<QGrid>;

    fn deflation(&self, _dimension: usize, _displacement: usize, _prec: u32) -> Result<Option<Deflation>> {
        Ok(None)
    }

    fn domain(&self) -> Domain {
        Domain::Real
    }

    fn hankel(&self, dimension: usize, displacement: usize, prec: u32) -> Result<HankelProblem> {
        HankelProblem::new(dimension, displacement)?.with_deflation(self.deflation(dimension, displacement, prec)?)
    }
}

/// A grid that does not change with precision, with an optional fixed deflation.
#[derive(Clone, Debug)]
pub struct FixedProblem {
    pub grid: QGrid,
    pub deflation: Option<Deflation>,
    pub domain: Domain,
}

impl FixedProblem {
    pub fn new(grid: QGrid) -> Self {
        Self {
            grid,
            deflation: None,
            domain: Domain::Real,
        }
    }
}

impl RootProblem for FixedProblem {
    fn grid(&self, _prec: u32) -> Result<QGrid> {
        Ok(self.grid.clone())
    }

    fn deflation(&self, _dimension: usize, _displacement: usize, _prec: u32) -> Result<Option<Deflation>> {
        Ok(self.deflation.clone())
    }

    fn domain(&self) -> Domain {
        self.domain
    }
}

/// A user-supplied potential, rebuilt from its literals at every precision.
#[derive(Clone, Debug)]
pub struct PotentialProblem {
    pub potential: DecimalPotential,
    pub domain: Domain,
}

impl RootProblem for PotentialProblem {
    fn grid(&self, prec: u32) -> Result<QGrid> {
        build_qgrid(&self.potential.at(prec))
    }

    fn domain(&self) -> Domain {
        self.domain
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonStatus {
    Converged,
    /// Steps stopped shrinking near a root while still above tolerance.
    Stagnated,
    /// The coefficient magnitudes span more than half the working digits.
    CoefficientSpread,
}

#[derive(Clone, Debug)]
pub struct NewtonRun {
    pub status: NewtonStatus,
    pub root: MpComplex,
    pub residual_log10: f64,
    pub seed_residual_log10: f64,
    pub iterations: usize,
}

/// `log10` spread between the largest and smallest nonzero `|f_j|`, `j = 1..=order`.
pub fn coefficient_spread_digits(f: &[MpComplex], order: usize) -> f64 {
    let logs: Vec<f64> = f[1..=order]
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.ln_abs().to_f64() / std::f64::consts::LN_10)
        .collect();
    match (
        logs.iter().cloned().reduce(f64::max),
        logs.iter().cloned().reduce(f64::min),
    ) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => 0.0,
    }
}

fn det_at(grid: &QGrid, hp: &HankelProblem, energy: &MpComplex, prec: u32) -> Result<DetValue> {
    let coeffs = riccati_coefficients(grid, energy, hp.required_order(), false, prec)?;
    Ok(determinant(&assemble(&coeffs, hp)?))
}

/// Detects linear convergence onto a real root of multiplicity `m` and switches to `m`-fold
/// steps. With steps scaled by `k`, successive plain steps shrink by `1 - k/m`.
#[derive(Default)]
struct OrderTracker {
    last_step: Option<(f64, f64)>,
    last_ln: f64,
    last_estimate: Option<f64>,
    factor: u32,
}

impl OrderTracker {
    /// Takes the plain Newton step; returns the factor to apply to it.
    fn observe(&mut self, step: &MpComplex) -> u32 {
        let k = f64::from(self.factor.max(1));
        // the ratio is scale free, so normalize by the current step to stay inside f64 range
        let size = step.abs();
        let here = if size.is_zero() {
            (0.0, 0.0)
        } else {
            let unit = step.div_real(&size);
            (unit.re().to_f64(), unit.im().to_f64())
        };
        let ln_size = if size.is_zero() {
            f64::NEG_INFINITY
        } else {
            size.ln().to_f64()
        };
        let previous = self.last_step.replace(here);
        let previous_ln = std::mem::replace(&mut self.last_ln, ln_size);
        let Some(prev) = previous else {
            return self.factor.max(1);
        };
        // Re(step / prev) from unit directions and the log-size difference
        let cos = here.0 * prev.0 + here.1 * prev.1;
        let ratio = cos * (ln_size - previous_ln).exp();
        if self.factor > 1 && ratio < -0.5 {
            // scaled steps bounce across a cluster of simple roots
            self.factor = 1;
            self.last_estimate = None;
            return 1;
        }
        let estimate = k / (1.0 - ratio);
        let settled = self
            .last_estimate
            .replace(estimate)
            .is_some_and(|e| (e - estimate).abs() < 0.1);
        let m = estimate.round();
        if settled && m >= 1.0 && (estimate - m).abs() < 0.1 && m as u32 != self.factor.max(1) {
            self.factor = m as u32;
            self.last_estimate = None;
        }
        self.factor.max(1)
    }
}

/// Consecutive non-improving steps, near a root, that count as stagnation. Newton may
/// wander for a few steps inside a tight cluster of roots before it settles on one.
const STALL_WINDOW: usize = 20;

/// Newton iteration at fixed `(D, d)` and fixed precision.
pub fn newton_solve(
    grid: &QGrid,
    hp: &HankelProblem,
    seed: &MpComplex,
    prec: u32,
    opts: &SolveOptions,
) -> Result<NewtonRun> {
    if !seed.is_finite() {
        return Err(RpmError::Invalid("seed must be finite".into()));
    }
    let tol = opts.tolerance(prec);
    let near_root = Float::with_val(prec, 1e-6);
    let mut energy = seed.with_prec(prec);
    let mut seed_residual = f64::NAN;
    let mut best: Option<Float> = None;
    let mut stalled = 0usize;
    let mut order = OrderTracker::default();

    for iter in 0..opts.max_iter {
        let coeffs = riccati_coefficients(grid, &energy, hp.required_order(), true, prec)?;
        if iter == 0 {
            let spread = coefficient_spread_digits(&coeffs.f, hp.required_order());
            if spread > 0.5 * f64::from(decimal_digits(prec)) {
                return Ok(NewtonRun {
                    status: NewtonStatus::CoefficientSpread,
                    root: energy,
                    residual_log10: f64::NAN,
                    seed_residual_log10: f64::NAN,
                    iterations: 0,
                });
            }
        }
        let eval = newton_step(&coeffs, hp, &energy)?;
        if iter == 0 {
            seed_residual = eval.det.log10_abs();
        }
        let Some(step) = eval.step else {
            return Ok(NewtonRun {
                status: NewtonStatus::Converged,
                root: energy,
                residual_log10: f64::NEG_INFINITY,
                seed_residual_log10: seed_residual,
                iterations: iter,
            });
        };
        // real multiple roots (exactly solvable levels) only; complex clusters need plain steps
        let factor = if energy.im().is_zero() { order.observe(&step) } else { 1 };
        let step = match factor {
            1 => step,
            m => step.scale(&Float::with_val(prec, m)),
        };
        let next = &energy + &step;
        let rel = energy.relative_distance(&next);
        energy = next;

        if rel < tol {
            let residual = det_at(grid, hp, &energy, prec)?.log10_abs();
            return Ok(NewtonRun {
                status: NewtonStatus::Converged,
                root: energy,
                residual_log10: residual,
                seed_residual_log10: seed_residual,
                iterations: iter + 1,
            });
        }

        match &best {
            Some(b) if rel >= *b => stalled += 1,
            _ => {
                best = Some(rel);
                stalled = 0;
            }
        }
        if stalled >= STALL_WINDOW && best.as_ref().is_some_and(|b| *b < near_root) {
            return Ok(NewtonRun {
                status: NewtonStatus::Stagnated,
                root: energy,
                residual_log10: f64::NAN,
                seed_residual_log10: seed_residual,
                iterations: iter + 1,
            });
        }
    }
    Err(RpmError::NonConvergence {
        iterations: opts.max_iter,
        last: energy,
    })
}

/// Doubles the working precision, refusing to pass `precision_max`.
pub fn adapt_precision(current: u32, precision_max: u32) -> Result<u32> {
    let requested = current.saturating_mul(2);
    if requested > precision_max {
        return Err(RpmError::Precision {
            requested,
            max: precision_max,
        });
    }
    Ok(requested)
}

#[derive(Clone, Debug)]
pub struct RootEstimate {
    pub root: MpComplex,
    pub residual_log10: f64,
    pub seed_residual_log10: f64,
    pub iterations: usize,
    pub precision_bits: u32,
}

/// Newton at `(D, d)` from `seed`, restarting from the seed at doubled precision on
/// stagnation or excessive coefficient spread.
pub fn find_root<P: RootProblem + ?Sized>(
    problem: &P,
    dimension: usize,
    displacement: usize,
    seed: &MpComplex,
    opts: &SolveOptions,
) -> Result<RootEstimate> {
    let mut prec = opts.precision_bits;
    loop {
        let grid = problem.grid(prec)?;
        let hp = problem.hankel(dimension, displacement, prec)?;
        let run = newton_solve(&grid, &hp, seed, prec, opts)?;
        match run.status {
            NewtonStatus::Converged => {
                return Ok(RootEstimate {
                    root: run.root,
                    residual_log10: run.residual_log10,
                    seed_residual_log10: run.seed_residual_log10,
                    iterations: run.iterations,
                    precision_bits: prec,
                })
            }
            NewtonStatus::Stagnated | NewtonStatus::CoefficientSpread => {
                prec = adapt_precision(prec, opts.precision_max)?;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceEntry {
    pub dimension: usize,
    pub root: MpComplex,
    pub residual_log10: f64,
    pub iterations: usize,
    pub precision_bits: u32,
}

/// Roots `E^[D,d]` for increasing `D` at one displacement.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSequence {
    pub d: usize,
    pub entries: Vec<SequenceEntry>,
}

impl RootSequence {
    pub fn last(&self) -> Option<&SequenceEntry> {
        self.entries.last()
    }

    /// Same sequence with every root mapped through `f`.
    pub fn map_roots(&self, f: impl Fn(&MpComplex) -> MpComplex) -> Self {
        Self {
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|e| SequenceEntry {
                    root: f(&e.root),
                    ..e.clone()
                })
                .collect(),
        }
    }

    /// Highest working precision used by any entry.
    pub fn precision_used(&self) -> u32 {
        self.entries.iter().map(|e| e.precision_bits).max().unwrap_or(0)
    }
}

/// Imaginary part given to a seed that has collapsed onto the real axis in complex mode.
pub fn complex_seed_offset(re: &Float) -> Float {
    let mut im = Float::with_val(re.prec(), re.abs_ref());
    if im.is_zero() {
        im = Float::with_val(re.prec(), 1);
    }
    im * Float::with_val(re.prec(), Float::parse("1e-6").unwrap())
}

/// `seed` with a nonzero imaginary part restored when it is real to within `2^-(prec/2)`.
pub fn complexify_seed(seed: &MpComplex) -> MpComplex {
    lift_seed(seed, &complex_seed_offset(seed.re()))
}

/// Gives a (numerically) real seed the imaginary part `offset`; other seeds are unchanged.
pub fn lift_seed(seed: &MpComplex, offset: &Float) -> MpComplex {
    let prec = seed.prec();
    let floor = Float::with_val(
        prec,
        Float::with_val(prec, 2).pow(-(prec as i32) / 2) * Float::with_val(prec, seed.re().abs_ref()),
    );
    if Float::with_val(prec, seed.im().abs_ref()) <= floor {
        MpComplex::new(seed.re().clone(), Float::with_val(prec, offset))
    } else {
        seed.clone()
    }
}

fn retryable(attempt: &Result<RootEstimate>) -> bool {
    matches!(
        attempt,
        Err(RpmError::NonConvergence { .. } | RpmError::Precision { .. })
    )
}

/// Roots for `D = d_min..=d_max`, each seeded by the previous one. In the complex domain a
/// (nearly) real seed gets an imaginary part first. A failed solve is retried from the
/// unperturbed seed, then once at doubled precision.
pub fn run_sequence<P: RootProblem + ?Sized>(
    problem: &P,
    d: usize,
    opts: &SolveOptions,
    seed: &MpComplex,
) -> Result<RootSequence> {
    opts.validate()?;
    let mut seq = RootSequence { d, entries: Vec::new() };
    let mut current = seed.clone();
    let mut local = opts.clone();

    for dimension in opts.d_min..=opts.d_max {
        let previous = current.clone();
        if problem.domain() == Domain::Complex {
            // lift off the axis by the current D-to-D movement, the scale the root is known to
            current = match seq.entries.as_slice() {
                [.., a, b] if a.root != b.root => {
                    let moved = (&b.root - &a.root).abs().min(&complex_seed_offset(current.re()));
                    lift_seed(&current, &moved)
                }
                _ => complexify_seed(&current),
            };
        }
        let mut attempt = find_root(problem, dimension, d, &current, &local);
        if retryable(&attempt) && current != previous {
            // an imaginary part far below resolution: continue from the unperturbed root
            attempt = find_root(problem, dimension, d, &previous, &local);
            if attempt.is_ok() {
                current = previous;
            }
        }
        if retryable(&attempt) {
            attempt = adapt_precision(local.precision_bits, local.precision_max).and_then(|p| {
                let mut widened = local.clone();
                widened.precision_bits = p;
                find_root(problem, dimension, d, &current, &widened)
            });
        }
        let est = attempt.map_err(|err| wrap(err, d, dimension, seq.clone()))?;
        // later dimensions never drop below a precision that was needed here
        local.precision_bits = local.precision_bits.max(est.precision_bits);
        current = est.root.clone();
        seq.entries.push(SequenceEntry {
            dimension,
            root: est.root,
            residual_log10: est.residual_log10,
            iterations: est.iterations,
            precision_bits: est.precision_bits,
        });
    }
    Ok(seq)
}

fn wrap(err: RpmError, d: usize, dimension: usize, partial: RootSequence) -> RpmError {
    RpmError::Sequence {
        d,
        dimension,
        partial: Box::new(partial),
        source: Box::new(err),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub value: MpComplex,
    /// Agreement of the last two roots of the primary sequence.
    pub stable_digits: u32,
    /// Agreement of the last two roots of the secondary sequence.
    pub secondary_stable_digits: u32,
    /// Agreement between the final roots of the two sequences.
    pub d_agreement_digits: u32,
    /// `min(stable_digits, d_agreement_digits)`.
    pub certified_digits: u32,
    pub precision_used: u32,
}

/// Significant digits on which `a` and `b` agree, relative to `|a|` (floored at 1e-30).
pub fn agreement_digits(a: &MpComplex, b: &MpComplex, cap: u32) -> u32 {
    let prec = a.prec().max(b.prec());
    let diff = (a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let mut scale = a.abs();
    let floor = Float::with_val(prec, Float::parse("1e-30").unwrap());
    if scale < floor {
        scale = floor;
    }
    let rel = Float::with_val(prec, diff / scale);
    let digits = -(rel.ln().to_f64() / std::f64::consts::LN_10);
    if digits <= 0.0 {
        0
    } else {
        (digits.floor() as u32).min(cap)
    }
}

fn within_sequence_digits(seq: &RootSequence, cap: u32) -> u32 {
    match seq.entries.as_slice() {
        [.., prev, last] => agreement_digits(&last.root, &prev.root, cap),
        _ => 0,
    }
}

/// Certified digits from the primary sequence `seq0` and a cross-check `seq1`.
pub fn estimate_converged(seq0: &RootSequence, seq1: &RootSequence) -> Result<ConvergenceReport> {
    let (Some(last0), Some(last1)) = (seq0.last(), seq1.last()) else {
        return Err(RpmError::Invalid(
            "convergence estimate needs non-empty sequences".into(),
        ));
    };
    let precision_used = seq0.precision_used().max(seq1.precision_used());
    let cap = decimal_digits(precision_used.max(MIN_PRECISION));
    let stable_digits = within_sequence_digits(seq0, cap);
    let secondary_stable_digits = within_sequence_digits(seq1, cap);
    let d_agreement_digits = agreement_digits(&last0.root, &last1.root, cap);
    Ok(ConvergenceReport {
        value: last0.root.clone(),
        stable_digits,
        secondary_stable_digits,
        d_agreement_digits,
        certified_digits: stable_digits.min(d_agreement_digits),
        precision_used,
    })
}

/// `ln` of the relative change between the last two roots; `+inf` with fewer than two.
fn last_relative_change(seq: &RootSequence) -> f64 {
    match seq.entries.as_slice() {
        [.., prev, last] => {
            let diff = (&last.root - &prev.root).abs();
            if diff.is_zero() {
                return f64::NEG_INFINITY;
            }
            (diff.ln() - last.root.ln_abs()).to_f64()
        }
        _ => f64::INFINITY,
    }
}

/// Orders two sequences so the one whose last two roots agree better comes first.
pub fn order_by_stability(a: RootSequence, b: RootSequence) -> (RootSequence, RootSequence) {
    if last_relative_change(&b) < last_relative_change(&a) {
        (b, a)
    } else {
        (a, b)
    }
}

/// Report over the most stable sequence, cross-checked against the other (or itself when
/// only one displacement was run).
pub fn report_for(sequences: &[RootSequence]) -> Result<ConvergenceReport> {
    let first = sequences
        .first()
        .ok_or_else(|| RpmError::Invalid("no displacement values requested".into()))?;
    let second = sequences.get(1).unwrap_or(first);
    let (primary, secondary) = order_by_stability(first.clone(), second.clone());
    estimate_converged(&primary, &secondary)
}

/// One sequence per displacement in `opts.d_values`, all from `seed`.
pub fn solve_sequences<P: RootProblem + ?Sized>(
    problem: &P,
    opts: &SolveOptions,
    seed: &MpComplex,
) -> Result<(Vec<RootSequence>, ConvergenceReport)> {
    let sequences = opts
        .d_values
        .iter()
        .map(|&d| run_sequence(problem, d, opts, seed))
        .collect::<Result<Vec<_>>>()?;
    let report = report_for(&sequences)?;
    Ok((sequences, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanRegion {
    /// Real interval; `Logarithmic` needs `0 < lo < hi`.
    Interval { lo: Float, hi: Float, spacing: Spacing },
    Rectangle {
        re_lo: Float,
        re_hi: Float,
        im_lo: Float,
        im_hi: Float,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedCandidate {
    pub location: MpComplex,
    /// `log10` of the deflated `|H|` at the candidate (smaller is better).
    pub log10_abs: f64,
}

fn axis(lo: &Float, hi: &Float, n: usize, spacing: Spacing, prec: u32) -> Vec<Float> {
    (0..n)
        .map(|i| {
            let t = Float::with_val(prec, i as u32) / (n as u32 - 1);
            match spacing {
                Spacing::Linear => {
                    let span = Float::with_val(prec, hi - lo);
                    Float::with_val(prec, lo + span * t)
                }
                Spacing::Logarithmic => {
                    let ratio = Float::with_val(prec, hi / lo).ln();
                    Float::with_val(prec, lo * Float::with_val(prec, ratio * t).exp())
                }
            }
        })
        .collect()
}

/// Seeds from sign changes and same-sign dips of `H` on a real grid, or from local minima of the deflated
/// `log|H|` on a complex grid, sorted by `|H|` ascending.
pub fn seed_scan(
    grid: &QGrid,
    hp: &HankelProblem,
    region: &ScanRegion,
    grid_points: usize,
    prec: u32,
) -> Result<Vec<SeedCandidate>> {
    if grid_points < 8 {
        return Err(RpmError::Invalid(format!(
            "seed scan needs >= 8 grid points, got {grid_points}"
        )));
    }
    let mut found = match region {
        ScanRegion::Interval { lo, hi, spacing } => {
            if *spacing == Spacing::Logarithmic && !(*lo > 0) {
                return Err(RpmError::Invalid(
                    "logarithmic scan needs a positive lower bound".into(),
                ));
            }
            scan_interval(grid, hp, &axis(lo, hi, grid_points, *spacing, prec), prec)?
        }
        ScanRegion::Rectangle {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => {
            let re = axis(re_lo, re_hi, grid_points, Spacing::Linear, prec);
            let im = axis(im_lo, im_hi, grid_points, Spacing::Linear, prec);
            scan_rectangle(grid, hp, &re, &im, prec)?
        }
    };
    found.sort_by(|a, b| a.log10_abs.total_cmp(&b.log10_abs));
    Ok(found)
}

fn scan_interval(grid: &QGrid, hp: &HankelProblem, xs: &[Float], prec: u32) -> Result<Vec<SeedCandidate>> {
    let mut samples = Vec::with_capacity(xs.len());
    for x in xs {
        let e = MpComplex::from_real(x.clone());
        if hp.deflation.as_ref().is_some_and(|d| d.location == e) {
            continue;
        }
        let det = det_at(grid, hp, &e, prec)?;
        let sign = if det.is_zero() {
            0
        } else if det.value.re().is_sign_negative() {
            -1
        } else {
            1
        };
        let mag = deflated_log10(&det, hp, &e);
        samples.push((e, sign, mag));
    }
    let mut out = Vec::new();
    for (i, (e, sign, mag)) in samples.iter().enumerate() {
        if *sign == 0 {
            out.push(SeedCandidate {
                location: e.clone(),
                log10_abs: f64::NEG_INFINITY,
            });
            continue;
        }
        if let Some((next, nsign, nmag)) = samples.get(i + 1) {
            if *nsign != 0 && nsign != sign {
                let mid = (e + next).div_real(&Float::with_val(prec, 2));
                out.push(SeedCandidate {
                    location: mid,
                    log10_abs: mag.min(*nmag),
                });
            }
        }
        // roots of even multiplicity touch zero without a sign change
        if i > 0 && i + 1 < samples.len() {
            let (prev, next) = (&samples[i - 1], &samples[i + 1]);
            let same_sign = prev.1 == *sign && next.1 == *sign;
            if same_sign && *mag < prev.2 && *mag < next.2 {
                out.push(SeedCandidate {
                    location: e.clone(),
                    log10_abs: *mag,
                });
            }
        }
    }
    Ok(out)
}

fn scan_rectangle(
    grid: &QGrid,
    hp: &HankelProblem,
    re: &[Float],
    im: &[Float],
    prec: u32,
) -> Result<Vec<SeedCandidate>> {
    let n = re.len();
    let m = im.len();
    let mut mags = vec![f64::INFINITY; n * m];
    let mut points = Vec::with_capacity(n * m);
    for (i, x) in re.iter().enumerate() {
        for (j, y) in im.iter().enumerate() {
            let e = MpComplex::new(x.clone(), y.clone());
            let det = det_at(grid, hp, &e, prec)?;
            mags[i * m + j] = deflated_log10(&det, hp, &e);
            points.push(e);
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let here = mags[i * m + j];
            if here.is_nan() {
                continue;
            }
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= n as i64 || nj >= m as i64 {
                        continue;
                    }
                    if mags[ni as usize * m + nj as usize] <= here {
                        is_min = false;
                    }
                }
            }
            if is_min {
                out.push(SeedCandidate {
                    location: points[i * m + j].clone(),
                    log10_abs: here,
                });
            }
        }
    }
    Ok(out)
}
