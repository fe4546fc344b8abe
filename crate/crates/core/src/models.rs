//! The two perturbed Coulomb models and the exactly solvable family behind them.
//!
//! * `V1(r) = -1/r - 2 lambda r + 2 lambda^2 r^2` has bound states. Its Hankel
//!   determinants carry an exact multiple root at `e(lambda) = -1/2 - 3 lambda`
//!   (a non-normalizable solution with rational log-derivative), so the ground
//!   state is sought as a shift `Delta = E - e(lambda)` with that root deflated.
//! * `V2(r) = -1/r + 2 lambda r - 2 lambda^2 r^2` is unbounded below; its
//!   eigenvalues are complex resonances.
//! * `V(r) = -1/r + 2 lambda r + 2 lambda^2 r^2` has the exact eigenpair
//!   `psi = r exp(-r - lambda r^2)`, `E = -1/2 + 3 lambda`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Result, RpmError};
use crate::hankel::{assemble, determinant, Deflation, HankelProblem};
use crate::mp::{exact_product, exact_sum, DecimalValue, MpComplex};
use crate::series::{build_qgrid, riccati_coefficients, PotentialSpec, QGrid};
use crate::solver::{
    find_root, report_for, run_sequence, seed_scan, ConvergenceReport, Domain, RootProblem, RootSequence, ScanRegion,
    SolveOptions, Spacing,
};

/// Sign pattern of the non-Coulomb terms `c1 * 2 lambda r + c2 * 2 lambda^2 r^2`.
fn perturbed_coulomb(lambda: &Float, linear_sign: i32, quadratic_sign: i32) -> PotentialSpec {
    let prec = lambda.prec();
    // round(lambda^2) once so that 2*lambda^2 and (2*lambda)^2 agree bit for bit
    let lambda_sq = Float::with_val(prec, lambda.square_ref());
    let mut v = vec![
        Float::new(prec),
        Float::with_val(prec, -1),
        Float::new(prec),
        Float::with_val(prec, lambda * (2 * linear_sign)),
        Float::with_val(prec, &lambda_sq * (2 * quadratic_sign)),
    ];
    while v.last().is_some_and(Float::is_zero) {
        v.pop();
    }
    PotentialSpec::radial(v)
}

pub fn v1_potential(lambda: &Float) -> PotentialSpec {
    perturbed_coulomb(lambda, -1, 1)
}

pub fn v2_potential(lambda: &Float) -> PotentialSpec {
    perturbed_coulomb(lambda, 1, -1)
}

pub fn exact_model_potential(lambda: &Float) -> PotentialSpec {
    perturbed_coulomb(lambda, 1, 1)
}

/// `-1/2 + k lambda`, without rounding.
fn half_plus(lambda: &Float, k: i32) -> Float {
    let scaled = exact_product(lambda, &Float::with_val(8, k));
    exact_sum(&Float::with_val(8, -0.5), &scaled)
}

/// The spurious root `e(lambda) = -1/2 - 3 lambda` of every V1 Hankel determinant.
pub fn spurious_energy(lambda: &Float) -> Float {
    half_plus(lambda, -3)
}

/// The exact eigenvalue `-1/2 + 3 lambda` of the solvable family.
pub fn exact_energy(lambda: &Float) -> Float {
    half_plus(lambda, 3)
}

fn positive_lambda(lambda: &DecimalValue) -> Result<()> {
    if lambda.at(64) > 0 {
        Ok(())
    } else {
        Err(RpmError::Invalid(format!("lambda must be positive, got {lambda}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityFit {
    pub multiplicity: u32,
    pub slope: f64,
}

/// Offsets `10^-6 .. 10^-10` used for the log-log fit.
const FIT_DECADES: std::ops::RangeInclusive<i32> = 6..=10;

/// Multiplicity of the root at `location`, from the least-squares slope of
/// `log|H|` against `log|E - location|` over five decades of real offsets.
pub fn detect_multiplicity(
    grid: &QGrid,
    hp: &HankelProblem,
    location: &MpComplex,
    prec: u32,
) -> Result<MultiplicityFit> {
    let undeflated = HankelProblem::new(hp.dimension, hp.displacement)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in FIT_DECADES {
        let offset = Float::with_val(prec, 10).pow(-k);
        let e = location + &MpComplex::from_real(offset);
        let coeffs = riccati_coefficients(grid, &e, undeflated.required_order(), false, prec)?;
        let det = determinant(&assemble(&coeffs, &undeflated)?);
        let y = det.log10_abs();
        if !y.is_finite() {
            return Err(RpmError::Structure { slope: f64::NAN });
        }
        xs.push(-f64::from(k));
        ys.push(y);
    }
    let slope = least_squares_slope(&xs, &ys);
    let nearest = slope.round();
    if (slope - nearest).abs() > 0.2 || nearest < 0.0 {
        return Err(RpmError::Structure { slope });
    }
    Ok(MultiplicityFit {
        multiplicity: nearest as u32,
        slope,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// How the `d = 0` deflation multiplicity is chosen. `d >= 1` is always measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MultiplicityMode {
    /// `D - 1`, from the factorization `H_D^0 = Delta^(D-1) P_D`.
    #[default]
    Asserted,
    Measured,
}

/// V1 in energy coordinates with the spurious root deflated.
#[derive(Clone, Debug)]
pub struct ShiftModel {
    pub lambda: DecimalValue,
    pub multiplicity: MultiplicityMode,
}

impl ShiftModel {
    pub fn spurious_at(&self, prec: u32) -> MpComplex {
        MpComplex::from_real(spurious_energy(&self.lambda.at(prec)))
    }

    pub fn multiplicity_for(&self, dimension: usize, displacement: usize, prec: u32) -> Result<u32> {
        let asserted = dimension as u32 - 1;
        if displacement == 0 && self.multiplicity == MultiplicityMode::Asserted {
            return Ok(asserted);
        }
        let grid = self.grid(prec)?;
        let hp = HankelProblem::new(dimension, displacement)?;
        let fit = detect_multiplicity(&grid, &hp, &self.spurious_at(prec), prec)?;
        if displacement == 0 && fit.multiplicity != asserted {
            return Err(RpmError::Structure { slope: fit.slope });
        }
        Ok(fit.multiplicity)
    }
}

impl RootProblem for ShiftModel {
    fn grid(&self, prec: u32) -> Result<QGrid> {
        build_qgrid(&v1_potential(&self.lambda.at(prec)))
    }

    fn deflation(&self, dimension: usize, displacement: usize, prec: u32) -> Result<Option<Deflation>> {
        Ok(Some(Deflation {
            location: self.spurious_at(prec),
            multiplicity: self.multiplicity_for(dimension, displacement, prec)?,
        }))
    }
}

/// V2, searched in the complex plane.
#[derive(Clone, Debug)]
pub struct ResonanceModel {
    pub lambda: DecimalValue,
}

impl RootProblem for ResonanceModel {
    fn grid(&self, prec: u32) -> Result<QGrid> {
        build_qgrid(&v2_potential(&self.lambda.at(prec)))
    }

    fn domain(&self) -> Domain {
        Domain::Complex
    }
}

#[derive(Clone, Debug)]
pub struct ShiftProblem {
    pub lambda: DecimalValue,
    pub options: SolveOptions,
    /// Starting shift `Delta`; found by scanning when absent.
    pub seed: Option<Float>,
    pub multiplicity: MultiplicityMode,
}

impl ShiftProblem {
    pub fn new(lambda: DecimalValue, options: SolveOptions) -> Self {
        Self {
            lambda,
            options,
            seed: None,
            multiplicity: MultiplicityMode::Asserted,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResonanceProblem {
    pub lambda: DecimalValue,
    pub options: SolveOptions,
    /// Starting energy, `Im != 0`; found by scanning when absent.
    pub seed: Option<MpComplex>,
}

impl ResonanceProblem {
    pub fn new(lambda: DecimalValue, options: SolveOptions) -> Self {
        Self {
            lambda,
            options,
            seed: None,
        }
    }
}

/// Sequences and their convergence report for one model run.
#[derive(Clone, Debug)]
pub struct ModelOutcome {
    pub report: ConvergenceReport,
    /// One per displacement, in the order of `options.d_values`, in the reported coordinate.
    pub sequences: Vec<RootSequence>,
    /// Dimension at which the sequences start.
    pub start_dimension: usize,
}

impl ModelOutcome {
    /// `|value|·10^-certified`: the size below which digits are not certified.
    pub fn certified_floor(&self) -> Float {
        let prec = self.report.value.prec();
        let scale = self.report.value.abs();
        scale * Float::with_val(prec, 10).pow(-(self.report.certified_digits as i32))
    }
}

/// Window of dimensions tried when no seed is given.
const SEED_DIMENSIONS: [usize; 6] = [6, 8, 10, 12, 14, 16];
/// Seeding runs at this precision, independent of the production precision.
const SEED_PRECISION: u32 = 256;

/// Relative change over `D+1`, `D+2` below which a polished candidate counts as converging.
const STABLE_SEED: f64 = 1e-4;

/// Newton-polished scan candidates at several `D`, each continued to `D+1` and `D+2`.
/// Picks the lowest-lying candidate that moves by less than `STABLE_SEED`, preferring
/// the starting `D` where it moves least; falls back to the least-moving candidate.
fn lowest_stable_root<P: RootProblem>(
    problem: &P,
    candidates_at: impl Fn(usize) -> Result<Vec<MpComplex>>,
    accept: impl Fn(&MpComplex) -> bool,
    opts: &SolveOptions,
    dimensions: &[usize],
) -> Result<Option<(usize, MpComplex)>> {
    let mut seed_opts = opts.clone();
    seed_opts.precision_bits = SEED_PRECISION.min(opts.precision_max);
    seed_opts.max_iter = opts.max_iter.max(60);
    seed_opts.precision_max = opts.precision_max.min(4 * SEED_PRECISION);
    let mut found: Vec<(f64, usize, MpComplex)> = Vec::new();
    for &dim in dimensions {
        for cand in candidates_at(dim)? {
            let Ok(first) = find_root(problem, dim, 0, &cand, &seed_opts) else {
                continue;
            };
            if !accept(&first.root) {
                continue;
            }
            let mut worst = 0.0f64;
            let mut prev = first.root.clone();
            let mut ok = true;
            for next_dim in dim + 1..=dim + 2 {
                let seed = if problem.domain() == Domain::Complex {
                    crate::solver::complexify_seed(&prev)
                } else {
                    prev.clone()
                };
                match find_root(problem, next_dim, 0, &seed, &seed_opts) {
                    Ok(est) if accept(&est.root) => {
                        let rel = Float::with_val(SEED_PRECISION, (&est.root - &prev).abs() / prev.abs());
                        worst = worst.max(rel.to_f64());
                        prev = est.root;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            found.push((worst, dim, first.root));
        }
    }
    let least_moving = |pool: Vec<&(f64, usize, MpComplex)>| {
        pool.into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, dim, root)| (*dim, root.clone()))
    };
    let stable: Vec<_> = found.iter().filter(|c| c.0 < STABLE_SEED).collect();
    let Some(lowest) = stable.iter().map(|c| c.2.re().clone()).reduce(|a, b| a.min(&b)) else {
        return Ok(least_moving(found.iter().collect()));
    };
    let same_level = stable
        .into_iter()
        .filter(|c| {
            let gap = Float::with_val(SEED_PRECISION, c.2.re() - &lowest).abs();
            gap <= Float::with_val(SEED_PRECISION, lowest.abs_ref()) * STABLE_SEED
        })
        .collect();
    Ok(least_moving(same_level))
}

/// Seed energy and starting dimension for the V1 shift.
pub fn default_shift_seed(model: &ShiftModel, opts: &SolveOptions) -> Result<(usize, MpComplex)> {
    let prec = SEED_PRECISION;
    let lambda = model.lambda.at(prec);
    let e = model.spurious_at(prec);
    let hi = Float::with_val(prec, &lambda * 12u32);
    let lo = Float::with_val(prec, &hi * Float::with_val(prec, 10).pow(-6));
    // the shift spans decades, so scan Delta logarithmically in the shifted coordinate
    let shifted = shift_energy_origin(&model.grid(prec)?, &e);
    let region = ScanRegion::Interval {
        lo,
        hi: hi.clone(),
        spacing: Spacing::Logarithmic,
    };
    let candidates = |dim: usize| -> Result<Vec<MpComplex>> {
        let hp = HankelProblem::new(dim, 0)?.with_deflation(Some(Deflation {
            location: MpComplex::zero(prec),
            multiplicity: dim as u32 - 1,
        }))?;
        Ok(seed_scan(&shifted, &hp, &region, 120, prec)?
            .into_iter()
            .map(|c| &c.location + &e)
            .collect())
    };
    let upper = Float::with_val(prec, &hi * 2u32);
    let accept = |root: &MpComplex| {
        let delta = Float::with_val(prec, root.re() - e.re());
        delta > 0 && delta < upper
    };
    lowest_stable_root(model, candidates, accept, opts, &SEED_DIMENSIONS)?
        .ok_or_else(|| RpmError::Invalid(format!("no shift seed found for lambda = {}", model.lambda)))
}

/// The same grid with the energy measured from `origin`: `Q` gains `mu * origin` at the
/// energy slot.
fn shift_energy_origin(grid: &QGrid, origin: &MpComplex) -> QGrid {
    let mut shifted = grid.clone();
    let add = exact_product(&grid.mu, origin.re());
    let slot = &mut shifted.q_const[grid.e_slot];
    *slot = exact_sum(slot, &add);
    shifted
}

/// Ground-state shift `Delta(lambda)` of V1.
pub fn v1_shift(p: &ShiftProblem) -> Result<ModelOutcome> {
    positive_lambda(&p.lambda)?;
    p.options.validate()?;
    let model = ShiftModel {
        lambda: p.lambda.clone(),
        multiplicity: p.multiplicity,
    };
    let prec = p.options.precision_bits;
    let (start, seed) = match &p.seed {
        Some(delta) => {
            let e = model.spurious_at(prec);
            (
                p.options.d_min,
                &e + &MpComplex::from_real(Float::with_val(prec, delta)),
            )
        }
        None => default_shift_seed(&model, &p.options)?,
    };
    let start = start.max(p.options.d_min).min(p.options.d_max);
    let mut opts = p.options.clone();
    opts.d_min = start;

    let mut sequences = Vec::new();
    for &d in &p.options.d_values {
        let seq = run_sequence(&model, d, &opts, &seed)?;
        let origin_prec = seq.precision_used().max(prec);
        let e = model.spurious_at(origin_prec);
        sequences.push(seq.map_roots(|root| root - &e));
    }
    let report = report_for(&sequences)?;
    Ok(ModelOutcome {
        report,
        sequences,
        start_dimension: start,
    })
}

/// Seed energy and starting dimension for a V2 resonance.
pub fn default_resonance_seed(model: &ResonanceModel, opts: &SolveOptions) -> Result<(usize, MpComplex)> {
    let prec = SEED_PRECISION;
    let grid = model.grid(prec)?;
    let region = ScanRegion::Rectangle {
        re_lo: Float::with_val(prec, -0.5),
        re_hi: Float::with_val(prec, -0.2),
        im_lo: Float::new(prec),
        im_hi: Float::with_val(prec, Float::parse("1e-6").unwrap()),
    };
    let candidates = |dim: usize| -> Result<Vec<MpComplex>> {
        let hp = HankelProblem::new(dim, 0)?;
        Ok(seed_scan(&grid, &hp, &region, 48, prec)?
            .into_iter()
            .take(6)
            .map(|c| crate::solver::complexify_seed(&MpComplex::from_real(c.location.re().clone())))
            .collect())
    };
    let accept = |root: &MpComplex| *root.re() > -0.6 && *root.re() < -0.1;
    lowest_stable_root(model, candidates, accept, opts, &[8, 10, 12])?
        .ok_or_else(|| RpmError::Invalid(format!("no resonance seed found for lambda = {}", model.lambda)))
}

/// Complex resonance of V2, reported with `Im E >= 0`.
pub fn v2_resonance(p: &ResonanceProblem) -> Result<ModelOutcome> {
    positive_lambda(&p.lambda)?;
    p.options.validate()?;
    let model = ResonanceModel {
        lambda: p.lambda.clone(),
    };
    let (start, seed) = match &p.seed {
        Some(s) => {
            if s.im().is_zero() {
                return Err(RpmError::Invalid(
                    "resonance seed needs a nonzero imaginary part".into(),
                ));
            }
            (p.options.d_min, s.clone())
        }
        None => default_resonance_seed(&model, &p.options)?,
    };
    let start = start.max(p.options.d_min).min(p.options.d_max);
    let mut opts = p.options.clone();
    opts.d_min = start;

    let mut sequences = Vec::new();
    for &d in &p.options.d_values {
        let seq = run_sequence(&model, d, &opts, &seed)?;
        let flip = seq.last().is_some_and(|e| e.root.im().is_sign_negative());
        sequences.push(if flip { seq.map_roots(MpComplex::conj) } else { seq });
    }
    let report = report_for(&sequences)?;
    Ok(ModelOutcome {
        report,
        sequences,
        start_dimension: start,
    })
}

/// Largest `|H_D^d|` over `D = 2..=d_max`, `d in {0, 1}` for the solvable family at its
/// exact energy. Zero means every determinant vanished exactly.
pub fn validate_exact_model(lambda: &DecimalValue, d_max: usize, prec: u32) -> Result<Float> {
    let l = lambda.at(prec);
    let grid = build_qgrid(&exact_model_potential(&l))?;
    let energy = MpComplex::from_real(exact_energy(&l));
    let coeffs = riccati_coefficients(&grid, &energy, 2 * d_max + 1, false, prec)?;
    let mut worst = Float::new(prec);
    for d in 0..=1 {
        for dim in 2..=d_max {
            let hp = HankelProblem::new(dim, d)?;
            let det = determinant(&assemble(&coeffs, &hp)?);
            let mag = det.value.abs();
            if mag > worst {
                worst = mag;
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StationaryKind {
    Minimum,
    Maximum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `lambda < 2/27`: three stationary points.
    BelowThreshold,
    /// `lambda > 2/27`: one stationary point at negative `r`.
    AboveThreshold,
}

#[derive(Clone, Debug)]
pub struct StationaryPointReport {
    pub points: Vec<(Float, StationaryKind)>,
    pub regime: Regime,
}

/// Roots of `V1'(r) = 0`, i.e. `4 lambda^2 r^3 - 2 lambda r^2 + 1 = 0`, classified by `V1''`.
pub fn stationary_points(lambda: &Float) -> Result<StationaryPointReport> {
    let prec = lambda.prec().max(128);
    if !(*lambda > 0) {
        return Err(RpmError::Invalid("lambda must be positive".into()));
    }
    // the cubic's positive local minimum is 1 - 2/(27 lambda)
    let gap = Float::with_val(prec, Float::with_val(prec, lambda * 27u32) - 2u32);
    let resolution = Float::with_val(prec, Float::with_val(prec, 2).pow(-(prec as i32) + 8));
    if Float::with_val(prec, gap.abs_ref()) <= resolution {
        return Err(RpmError::Boundary {
            lambda: lambda.to_string_radix(10, Some(20)),
        });
    }
    let l = Float::with_val(prec, lambda);
    let l2 = Float::with_val(prec, l.square_ref());
    let cubic = |r: &Float| -> Float {
        let r2 = Float::with_val(prec, r.square_ref());
        let r3 = Float::with_val(prec, &r2 * r);
        Float::with_val(prec, Float::with_val(prec, &l2 * 4u32) * &r3)
            - Float::with_val(prec, Float::with_val(prec, &l * 2u32) * &r2)
            + 1u32
    };
    let curvature = |r: &Float| -> StationaryKind {
        let r3 = Float::with_val(prec, r.square_ref()) * r;
        let v2 = Float::with_val(prec, &l2 * 4u32) - Float::with_val(prec, 2) / r3;
        if v2 > 0 {
            StationaryKind::Minimum
        } else {
            StationaryKind::Maximum
        }
    };

    let mut points = Vec::new();
    let mut far = Float::with_val(prec, -1);
    while cubic(&far) >= 0 {
        far *= 2u32;
    }
    points.push(bisect(&cubic, far, Float::new(prec), prec));

    let regime = if gap < 0 {
        let turn = Float::with_val(prec, Float::with_val(prec, 1) / Float::with_val(prec, &l * 3u32));
        let mut far = Float::with_val(prec, &turn * 2u32);
        while cubic(&far) <= 0 {
            far *= 2u32;
        }
        points.push(bisect(&cubic, Float::new(prec), turn.clone(), prec));
        points.push(bisect(&cubic, turn, far, prec));
        Regime::BelowThreshold
    } else {
        Regime::AboveThreshold
    };

    Ok(StationaryPointReport {
        points: points
            .into_iter()
            .map(|r| {
                let kind = curvature(&r);
                (r, kind)
            })
            .collect(),
        regime,
    })
}

fn bisect(f: &impl Fn(&Float) -> Float, mut lo: Float, mut hi: Float, prec: u32) -> Float {
    let lo_sign = f(&lo).is_sign_negative();
    for _ in 0..(prec + 64) {
        let mid = Float::with_val(prec, Float::with_val(prec, &lo + &hi) / 2u32);
        if mid == lo || mid == hi {
            break;
        }
        if f(&mid).is_sign_negative() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Float::with_val(prec, Float::with_val(prec, &lo + &hi) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(s: &str) -> DecimalValue {
        DecimalValue::parse(s).unwrap()
    }

    #[test]
    fn spurious_energy_is_exact() {
        let l = dv("0.1").at(256);
        let e = spurious_energy(&l);
        let back = Float::with_val(e.prec() + 8, &e + 0.5) / -3i32;
        assert_eq!(Float::with_val(256, back), l);
    }

    #[test]
    fn exact_model_null_at_sample_lambdas() {
        for l in ["0.3", "0", "-0.1", "0.5"] {
            let worst = validate_exact_model(&dv(l), 8, 256).unwrap();
            assert!(worst.is_zero(), "lambda = {l}: {worst}");
        }
    }

    #[test]
    fn v1_spurious_root_is_exact() {
        let model = ShiftModel {
            lambda: dv("0.1"),
            multiplicity: MultiplicityMode::Asserted,
        };
        let grid = model.grid(256).unwrap();
        let e = model.spurious_at(256);
        let c = riccati_coefficients(&grid, &e, 20, false, 256).unwrap();
        assert!(c.f[2..].iter().all(MpComplex::is_zero));
    }

    #[test]
    fn multiplicity_d0_is_dimension_minus_one() {
        let model = ShiftModel {
            lambda: dv("0.1"),
            multiplicity: MultiplicityMode::Measured,
        };
        assert_eq!(model.multiplicity_for(4, 0, 256).unwrap(), 3);
    }

    #[test]
    fn stationary_regimes() {
        let below = stationary_points(&dv("0.05").at(256)).unwrap();
        assert_eq!(below.regime, Regime::BelowThreshold);
        let kinds: Vec<_> = below.points.iter().map(|p| p.1).collect();
        assert_eq!(
            kinds,
            vec![
                StationaryKind::Minimum,
                StationaryKind::Maximum,
                StationaryKind::Minimum
            ]
        );
        assert!(below.points[0].0 < 0);
        assert!(below.points[1].0 >= 4);
        assert!(below.points[2].0 > 4);

        let above = stationary_points(&dv("0.1").at(256)).unwrap();
        assert_eq!(above.regime, Regime::AboveThreshold);
        assert_eq!(above.points.len(), 1);
        assert!(above.points[0].0 < 0);
        assert_eq!(above.points[0].1, StationaryKind::Minimum);
    }

    #[test]
    fn stationary_boundary() {
        let l = Float::with_val(256, 2) / 27u32;
        assert!(matches!(stationary_points(&l), Err(RpmError::Boundary { .. })));
    }

    #[test]
    fn zero_lambda_rejected() {
        let p = ShiftProblem::new(dv("0"), SolveOptions::default());
        assert!(matches!(v1_shift(&p), Err(RpmError::Invalid(_))));
    }

    #[test]
    fn real_resonance_seed_rejected() {
        let mut p = ResonanceProblem::new(dv("0.1"), SolveOptions::default());
        p.seed = Some(MpComplex::parse("-0.27", "0", 128).unwrap());
        assert!(v2_resonance(&p).is_err());
    }
}
