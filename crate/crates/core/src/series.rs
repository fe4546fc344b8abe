//! Series data for the regularized logarithmic derivative.
//!
//! A potential `V(x) = sum_j v_j x^(beta*j - 2)` and coupling `mu` give
//! `Q(x) = mu (E - V(x))` on the same exponent lattice. With
//! `f(x) = s/x - psi'/psi` and `s(s-1) = mu v_0`, the Riccati equation
//! `f' + 2s f/x - f^2 - Q - s(s-1)/x^2 = 0` has the regular solution
//! `f(x) = x^(beta-1) sum_j f_j x^(beta*j)` whose coefficients obey
//!
//! ```text
//! f_m (beta*m + beta - 1 + 2s) = sum_{k<m} f_k f_{m-1-k} + Q_{m-1}
//! ```
//!
//! where `Q_{m-1}` is the coefficient of `x^(beta(m+1)-2)`.

use rug::Float;

use crate::error::{Result, RpmError};
use crate::mp::{exact_product, exact_sum, DecimalValue, MpComplex, MIN_PRECISION};

/// Laurent-polynomial potential on the `x^(beta*j - 2)` lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub beta: u32,
    pub mu: Float,
    /// `v[0]` multiplies `x^-2`.
    pub v: Vec<Float>,
}

impl PotentialSpec {
    pub fn new(beta: u32, mu: Float, v: Vec<Float>) -> Self {
        Self { beta, mu, v }
    }

    /// Radial form with `mu = 2`, `beta = 1`.
    pub fn radial(v: Vec<Float>) -> Self {
        let prec = v.iter().map(Float::prec).max().unwrap_or(MIN_PRECISION);
        Self::new(1, Float::with_val(prec, 2), v)
    }

    pub fn precision(&self) -> u32 {
        self.v
            .iter()
            .map(Float::prec)
            .chain(std::iter::once(self.mu.prec()))
            .max()
            .unwrap_or(MIN_PRECISION)
    }

    /// Lattice index at which the energy enters `Q`.
    pub fn energy_slot(&self) -> Result<usize> {
        match self.beta {
            1 => Ok(2),
            2 => Ok(1),
            b => Err(RpmError::Config(format!(
                "potential.beta = {b}: the exponent 0 must lie on the lattice, so beta must be 1 or 2"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.energy_slot()?;
        if !(self.mu > 0) {
            return Err(RpmError::Config("potential.mu must be positive".into()));
        }
        if self.v.len() < 2 {
            return Err(RpmError::Config(
                "potential.v needs at least two coefficients (v_0 and a nonzero tail)".into(),
            ));
        }
        if self.v.iter().any(|x| !x.is_finite()) {
            return Err(RpmError::Config("potential.v has a non-finite entry".into()));
        }
        if self.v.last().is_some_and(Float::is_zero) {
            return Err(RpmError::Config("potential.v: last coefficient must be nonzero".into()));
        }
        Ok(())
    }

    /// `1 + 4 mu v_0`, exactly.
    fn discriminant(&self) -> Float {
        let four_mu_v0 = exact_product(&exact_product(&self.mu, &self.v[0]), &Float::with_val(8, 4));
        exact_sum(&Float::with_val(8, 1), &four_mu_v0)
    }
}

/// A potential kept as decimal literals, materialized at any working precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalPotential {
    pub beta: u32,
    pub mu: DecimalValue,
    pub v: Vec<DecimalValue>,
}

impl DecimalPotential {
    pub fn at(&self, prec: u32) -> PotentialSpec {
        PotentialSpec::new(self.beta, self.mu.at(prec), self.v.iter().map(|x| x.at(prec)).collect())
    }
}

/// Constant part of `Q` on the lattice plus the slot where `mu*E` is added.
#[derive(Clone, Debug, PartialEq)]
pub struct QGrid {
    pub beta: u32,
    pub mu: Float,
    /// `q_const[j] = -mu v_j`, the constant part of `Q_{j-2}`.
    pub q_const: Vec<Float>,
    pub e_slot: usize,
    /// Regularizing exponent, larger root of `s(s-1) = mu v_0`.
    pub s: Float,
    discriminant: Float,
}

impl QGrid {
    /// `s` evaluated at `prec` bits (exact whenever the discriminant is a perfect square).
    pub fn s_at(&self, prec: u32) -> Float {
        let root = Float::with_val(prec + 16, self.discriminant.sqrt_ref());
        Float::with_val(prec, (root + 1u32) / 2u32)
    }

    /// Constant part of `Q_{j-2}`; zero beyond the potential tail.
    pub fn q(&self, j: usize) -> Option<&Float> {
        self.q_const.get(j)
    }
}

pub fn build_qgrid(p: &PotentialSpec) -> Result<QGrid> {
    p.validate()?;
    let e_slot = p.energy_slot()?;
    let discriminant = p.discriminant();
    if discriminant < 0 {
        return Err(RpmError::UnsupportedSingularity {
            discriminant: discriminant.to_string_radix(10, Some(12)),
        });
    }
    let mut q_const: Vec<Float> = p.v.iter().map(|vj| -exact_product(&p.mu, vj)).collect();
    let prec = p.precision();
    while q_const.len() <= e_slot {
        q_const.push(Float::new(prec));
    }
    let mut grid = QGrid {
        beta: p.beta,
        mu: p.mu.clone(),
        q_const,
        e_slot,
        s: Float::new(prec),
        discriminant,
    };
    grid.s = grid.s_at(prec.max(MIN_PRECISION));
    Ok(grid)
}

/// Coefficients `f_0..f_N` at one trial energy.
#[derive(Clone, Debug)]
pub struct RiccatiCoefficients {
    pub energy: MpComplex,
    pub f: Vec<MpComplex>,
    /// `g_j = d f_j / dE`, when requested.
    pub g: Option<Vec<MpComplex>>,
    pub precision_bits: u32,
}

impl RiccatiCoefficients {
    /// Highest available index `N`.
    pub fn order(&self) -> usize {
        self.f.len() - 1
    }
}

/// `sum_{k<m} a_k b_{m-1-k}` accumulated at `prec` bits.
fn convolution(a: &[MpComplex], b: &[MpComplex], m: usize, prec: u32) -> MpComplex {
    let mut acc = MpComplex::zero(prec);
    for k in 0..m {
        acc.add_mul_assign(&a[k], &b[m - 1 - k]);
    }
    acc
}

pub fn riccati_coefficients(
    grid: &QGrid,
    energy: &MpComplex,
    n: usize,
    with_derivative: bool,
    precision_bits: u32,
) -> Result<RiccatiCoefficients> {
    if n < 1 {
        return Err(RpmError::Invalid("need at least f_0 and f_1 (N >= 1)".into()));
    }
    if precision_bits < MIN_PRECISION {
        return Err(RpmError::Invalid(format!(
            "precision {precision_bits} bits is below the {MIN_PRECISION}-bit floor"
        )));
    }
    let prec = precision_bits;
    let two_s = Float::with_val(prec, grid.s_at(prec) * 2u32);
    let beta = grid.beta;
    // mu*E exactly, so that the energy slot is rounded only once
    let mu_e = MpComplex::new(
        exact_product(&grid.mu, energy.re()),
        exact_product(&grid.mu, energy.im()),
    );

    let mut f: Vec<MpComplex> = Vec::with_capacity(n + 1);
    let mut g: Vec<MpComplex> = Vec::with_capacity(if with_derivative { n + 1 } else { 0 });

    for m in 0..=n {
        let slot = m + 1;
        // beta*m + beta - 1 + 2s
        let divisor = Float::with_val(prec, &two_s + (beta * (m as u32 + 1) - 1));
        assert!(!divisor.is_zero(), "recurrence divisor vanished at m = {m}");

        let mut rhs = convolution(&f, &f, m, prec);
        let q = grid.q(slot);
        let numerator = if slot == grid.e_slot {
            // rhs + q + mu*E, rounded once
            let wide = prec + mu_e.prec() + 2;
            let mut re = Float::with_val(wide, rhs.re());
            if let Some(q) = q {
                re += q;
            }
            re += mu_e.re();
            let im = Float::with_val(wide, rhs.im() + mu_e.im());
            MpComplex::new(re, im)
        } else {
            if let Some(q) = q {
                rhs = rhs + MpComplex::from_real(q.clone());
            }
            rhs
        };
        f.push(numerator.div_real(&divisor).with_prec(prec));

        if with_derivative {
            let mut drhs = convolution(&f, &g, m, prec);
            drhs = drhs.scale(&Float::with_val(prec, 2));
            if slot == grid.e_slot {
                drhs = drhs + MpComplex::from_real(Float::with_val(prec, &grid.mu));
            }
            g.push(drhs.div_real(&divisor).with_prec(prec));
        }
    }

    Ok(RiccatiCoefficients {
        energy: energy.clone(),
        f,
        g: with_derivative.then_some(g),
        precision_bits: prec,
    })
}

/// `f_m (beta m + beta - 1 + 2s) - sum f_k f_{m-1-k} - Q_{m-1}` for every `m`, recomputed
/// at twice the working precision.
pub fn recurrence_residuals(grid: &QGrid, coeffs: &RiccatiCoefficients) -> Vec<MpComplex> {
    let prec = 2 * coeffs.precision_bits;
    let two_s = Float::with_val(prec, grid.s_at(prec) * 2u32);
    let wide: Vec<MpComplex> = coeffs.f.iter().map(|c| c.with_prec(prec)).collect();
    let e = coeffs.energy.with_prec(prec);
    (0..wide.len())
        .map(|m| {
            let slot = m + 1;
            let divisor = Float::with_val(prec, &two_s + (grid.beta * (m as u32 + 1) - 1));
            let mut res = wide[m].scale(&divisor) - convolution(&wide, &wide, m, prec);
            if let Some(q) = grid.q(slot) {
                res = res - MpComplex::from_real(Float::with_val(prec, q));
            }
            if slot == grid.e_slot {
                res = res - e.scale(&grid.mu);
            }
            res
        })
        .collect()
}
