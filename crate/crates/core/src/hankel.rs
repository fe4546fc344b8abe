//! Hankel determinants of Riccati coefficients and Newton steps on their roots.
//!
//! `H_D^d(E) = det[f_{i+j+d-1}]_{i,j=1..D}`. Derivatives come from
//! `H'/H = tr(M^{-1} M')`, where `M'` is the same Hankel pattern filled with
//! `df_j/dE`, so no numerical differentiation is involved.

use rug::Float;

use crate::error::{Result, RpmError};
use crate::mp::MpComplex;
use crate::series::RiccatiCoefficients;

/// A known root `location` of multiplicity `multiplicity`, divided out before Newton.
#[derive(Clone, Debug, PartialEq)]
pub struct Deflation {
    pub location: MpComplex,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelProblem {
    pub dimension: usize,
    pub displacement: usize,
    pub deflation: Option<Deflation>,
}

impl HankelProblem {
    pub fn new(dimension: usize, displacement: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(RpmError::Invalid(format!(
                "Hankel dimension must be at least 2, got {dimension}"
            )));
        }
        Ok(Self {
            dimension,
            displacement,
            deflation: None,
        })
    }

    pub fn with_deflation(mut self, deflation: Option<Deflation>) -> Result<Self> {
        if let Some(def) = &deflation {
            if def.multiplicity < 1 {
                return Err(RpmError::Invalid("deflation multiplicity must be >= 1".into()));
            }
        }
        self.deflation = deflation;
        Ok(self)
    }

    /// Highest coefficient index the matrix touches: `2D + d - 1`.
    pub fn required_order(&self) -> usize {
        2 * self.dimension + self.displacement - 1
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<MpComplex>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> MpComplex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(entry(i, j));
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &MpComplex {
        &self.data[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j).conj())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

fn hankel_from(seq: &[MpComplex], hp: &HankelProblem) -> Result<SquareMatrix> {
    let needed = hp.required_order();
    if seq.len() <= needed {
        return Err(RpmError::Length {
            needed,
            available: seq.len().saturating_sub(1),
        });
    }
    // 1-based element f_{i+j+d-1} is 0-based f[i + j + d + 1]
    Ok(SquareMatrix::from_fn(hp.dimension, |i, j| {
        seq[i + j + hp.displacement + 1].clone()
    }))
}

/// Hankel matrix `M[i][j] = f_{i+j+d-1}` (1-based `i, j`).
pub fn assemble(coeffs: &RiccatiCoefficients, hp: &HankelProblem) -> Result<SquareMatrix> {
    hankel_from(&coeffs.f, hp)
}

/// The same index pattern filled with `df_j/dE`.
pub fn assemble_derivative(coeffs: &RiccatiCoefficients, hp: &HankelProblem) -> Result<SquareMatrix> {
    let g = coeffs
        .g
        .as_ref()
        .ok_or_else(|| RpmError::Invalid("energy derivatives were not computed".into()))?;
    hankel_from(g, hp)
}

/// Determinant as phase and log-magnitude, with the plain value alongside.
#[derive(Clone, Debug)]
pub struct DetValue {
    /// Unit modulus, or exactly zero for a singular matrix.
    pub sign_phase: MpComplex,
    /// `ln |det|`; `-inf` when singular.
    pub log_magnitude: Float,
    pub value: MpComplex,
}

impl DetValue {
    pub fn is_zero(&self) -> bool {
        self.sign_phase.is_zero()
    }

    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.log_magnitude.to_f64() / std::f64::consts::LN_10
    }
}

/// `PA = LU` with partial pivoting on modulus. Unit lower triangle is stored below the diagonal.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<MpComplex>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl LuFactors {
    pub fn factor(m: &SquareMatrix) -> Self {
        let n = m.n;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;

        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &b| {
                    let na = lu[a * n + col].norm_sqr();
                    let nb = lu[b * n + col].norm_sqr();
                    // first maximal row wins, for determinism
                    na.partial_cmp(&nb).unwrap().then(b.cmp(&a))
                })
                .unwrap();
            if lu[pivot_row * n + col].is_zero() {
                singular = true;
                continue;
            }
            if pivot_row != col {
                for k in 0..n {
                    lu.swap(pivot_row * n + k, col * n + k);
                }
                perm.swap(pivot_row, col);
                swaps += 1;
            }
            let pivot = lu[col * n + col].clone();
            for r in col + 1..n {
                if lu[r * n + col].is_zero() {
                    continue;
                }
                let l = &lu[r * n + col] / &pivot;
                for k in col + 1..n {
                    let (upper, lower) = lu.split_at_mut(r * n);
                    lower[k].sub_mul_assign(&l, &upper[col * n + k]);
                }
                lu[r * n + col] = l;
            }
        }
        Self {
            n,
            lu,
            perm,
            swaps,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> DetValue {
        let prec = self.lu.first().map(MpComplex::prec).unwrap_or(64);
        if self.singular {
            return DetValue {
                sign_phase: MpComplex::zero(prec),
                log_magnitude: Float::with_val(prec, f64::NEG_INFINITY),
                value: MpComplex::zero(prec),
            };
        }
        let mut value = MpComplex::one(prec);
        let mut phase = MpComplex::one(prec);
        let mut log_mag = Float::new(prec);
        for i in 0..self.n {
            let p = &self.lu[i * self.n + i];
            value = value * p;
            phase = phase * p.phase();
            log_mag += p.ln_abs();
        }
        if self.swaps % 2 == 1 {
            value = -value;
            phase = -phase;
        }
        DetValue {
            sign_phase: phase,
            log_magnitude: log_mag,
            value,
        }
    }

    /// Solves `A x = b` for one right-hand side.
    pub fn solve_vec(&self, b: &[MpComplex]) -> Vec<MpComplex> {
        assert!(!self.singular, "solve on a singular factorization");
        let n = self.n;
        let mut y: Vec<MpComplex> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for k in 0..i {
                let (head, tail) = y.split_at_mut(i);
                tail[0].sub_mul_assign(&self.lu[i * n + k], &head[k]);
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let (head, tail) = y.split_at_mut(i + 1);
                head[i].sub_mul_assign(&self.lu[i * n + k], &tail[k - i - 1]);
            }
            y[i] = &y[i] / &self.lu[i * n + i];
        }
        y
    }

    /// `tr(A^{-1} B)`.
    pub fn trace_solve(&self, b: &SquareMatrix) -> MpComplex {
        let n = self.n;
        let prec = b.data.first().map(MpComplex::prec).unwrap_or(64);
        let mut trace = MpComplex::zero(prec);
        for j in 0..n {
            let column: Vec<MpComplex> = (0..n).map(|i| b.get(i, j).clone()).collect();
            let x = self.solve_vec(&column);
            trace = trace + &x[j];
        }
        trace
    }
}

/// Extra bits carried through the elimination in [`determinant`].
const DET_GUARD_BITS: u32 = 32;

/// Determinant via LU with guard bits, rounded once back to the matrix precision.
pub fn determinant(m: &SquareMatrix) -> DetValue {
    let prec = m.data.first().map(MpComplex::prec).unwrap_or(64);
    let wide = SquareMatrix {
        n: m.n,
        data: m.data.iter().map(|x| x.with_prec(prec + DET_GUARD_BITS)).collect(),
    };
    let det = LuFactors::factor(&wide).determinant();
    DetValue {
        sign_phase: det.sign_phase.with_prec(prec),
        log_magnitude: Float::with_val(prec, &det.log_magnitude),
        value: det.value.with_prec(prec),
    }
}

/// Result of one Newton evaluation.
#[derive(Clone, Debug)]
pub struct NewtonEval {
    /// `None` when `M` is exactly singular: the trial energy is a root.
    pub step: Option<MpComplex>,
    pub det: DetValue,
}

/// Newton step `-1 / (tr(M^{-1} M') - m / (E - E_defl))` for the deflated determinant.
pub fn newton_step(coeffs: &RiccatiCoefficients, hp: &HankelProblem, energy: &MpComplex) -> Result<NewtonEval> {
    let m = assemble(coeffs, hp)?;
    let dm = assemble_derivative(coeffs, hp)?;
    let lu = LuFactors::factor(&m);
    let det = lu.determinant();
    if lu.is_singular() {
        return Ok(NewtonEval { step: None, det });
    }
    let mut log_derivative = lu.trace_solve(&dm);
    if let Some(def) = &hp.deflation {
        let offset = energy - &def.location;
        if offset.is_zero() {
            return Err(RpmError::DeflationPoint {
                location: format!("{:.30}", def.location),
            });
        }
        let mult = Float::with_val(64, def.multiplicity);
        log_derivative = log_derivative - offset.recip().scale(&mult);
    }
    if log_derivative.is_zero() {
        return Err(RpmError::NonConvergence {
            iterations: 0,
            last: energy.clone(),
        });
    }
    let step = -log_derivative.recip();
    Ok(NewtonEval { step: Some(step), det })
}

/// `log10 |H(E) / (E - E_defl)^m|`.
pub fn deflated_log10(det: &DetValue, hp: &HankelProblem, energy: &MpComplex) -> f64 {
    let raw = det.log10_abs();
    match &hp.deflation {
        Some(def) if raw.is_finite() => {
            let offset = (energy - &def.location).ln_abs().to_f64() / std::f64::consts::LN_10;
            raw - f64::from(def.multiplicity) * offset
        }
        _ => raw,
    }
}
