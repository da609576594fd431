//! Segal-Bargmann picture of the lowest Landau level.
//!
//! A lowest-level state `ψ(x) = f(z) φ0(x)`, `z = x1 + i x2`, is represented by
//! the entire function `f`, here truncated to a polynomial. The inner product
//! uses the weight `dμ = (b/2π) e^{-(b/2)|z|²} d²z`, which is the normalization
//! that makes `U: ψ ↦ f` unitary against `|φ0|²`. Monomials are orthogonal with
//! `⟨z^m, z^n⟩ = δ_mn n! (2/b)^n`.
//!
//! In this picture `B ↦ √(2/b) d/dz` and `B* ↦ √(b/2) z`.

use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};
use crate::operators::LADDER_DEGREE_CAP;
use crate::states::{GaussTerm, MagneticField, Poly, QuantumState};

/// Largest polynomial degree accepted for Segal-Bargmann functions.
pub const SB_MAX_DEGREE: usize = 24;

/// Residual (relative to `max(1, ‖ψ‖)`) allowed when projecting onto the lowest level.
pub const LLL_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Projected components below this fraction of `‖ψ‖` are set to zero.
pub const PROJECTION_NOISE: f64 = 1e-14;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Polynomial `Σ c_k z^k` in the Segal-Bargmann space.
#[derive(Clone, Debug, PartialEq)]
pub struct BargmannPoly {
    coeffs: Vec<Complex>,
    field: MagneticField,
}

impl BargmannPoly {
    pub fn new(field: MagneticField, coeffs: Vec<Complex>) -> Result<Self> {
        let mut p = Self { coeffs, field };
        p.trim();
        if p.coeffs.len() > SB_MAX_DEGREE + 1 {
            return Err(Error::DegreeCap { requested: p.coeffs.len() - 1, cap: SB_MAX_DEGREE });
        }
        Ok(p)
    }

    pub fn monomial(field: MagneticField, k: usize, c: Complex) -> Result<Self> {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == ZERO) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> MagneticField {
        self.field
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, z: Complex) -> Complex {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_fields(self, other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.field, (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut p = Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect(), field: self.field };
        p.trim();
        p
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect();
        let mut p = Self { coeffs, field: self.field };
        p.trim();
        p
    }

    /// Multiplication by `z`.
    pub fn times_z(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.field, coeffs)
    }
}

fn check_fields(f: &BargmannPoly, g: &BargmannPoly) -> Result<()> {
    if f.field == g.field {
        Ok(())
    } else {
        Err(Error::IncompatibleFields { left: f.field.strength(), right: g.field.strength() })
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `⟨z^n, z^n⟩_SB = n! (2/b)^n`, accumulated in log space.
pub fn monomial_norm_sqr(field: MagneticField, n: usize) -> f64 {
    (ln_factorial(n) + n as f64 * (2.0 / field.strength()).ln()).exp()
}

/// `⟨f, g⟩_SB = ∫ conj(f) g dμ`.
pub fn sb_inner(f: &BargmannPoly, g: &BargmannPoly) -> Result<Complex> {
    check_fields(f, g)?;
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .enumerate()
        .map(|(k, (a, c))| a.conj() * c * monomial_norm_sqr(f.field, k))
        .sum())
}

/// Coefficients of `(x1 + i x2)^k` as a polynomial in `(x1, x2)`.
fn z_power(k: usize) -> Poly {
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut binom = 1.0_f64;
    for j in 0..=k {
        // C(k, j) x1^{k-j} (i x2)^j
        let ij = match j % 4 {
            0 => Complex::new(1.0, 0.0),
            1 => Complex::new(0.0, 1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, -1.0),
        };
        coeffs.push((((k - j) as u32, j as u32), ij * binom));
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    Poly::from_coefficients(coeffs)
}

/// `U*`: the state `f(z) φ0(x)`.
pub fn from_bargmann(f: &BargmannPoly) -> QuantumState {
    let norm = (f.field.strength() / (2.0 * std::f64::consts::PI)).sqrt();
    let mut poly = Poly::zero();
    for (k, &c) in f.coeffs.iter().enumerate() {
        if c != ZERO {
            poly.add_scaled(&z_power(k), c * norm);
        }
    }
    QuantumState::from_terms(f.field, [GaussTerm::new(poly, [ZERO; 2])])
}

/// `U` with the default projection degree [`LADDER_DEGREE_CAP`].
pub fn to_bargmann(psi: &QuantumState) -> Result<BargmannPoly> {
    to_bargmann_with_degree(psi, LADDER_DEGREE_CAP)
}

/// Projects `ψ` onto `span{z^k φ0 : k ≤ degree}` and returns the coefficients.
///
/// Fails with [`Error::OutsideLowestLevel`] if the projection residual exceeds
/// [`LLL_RESIDUAL_TOLERANCE`] relative to `max(1, ‖ψ‖)`.
pub fn to_bargmann_with_degree(psi: &QuantumState, degree: usize) -> Result<BargmannPoly> {
    if degree > SB_MAX_DEGREE {
        return Err(Error::DegreeCap { requested: degree, cap: SB_MAX_DEGREE });
    }
    let field = psi.field();
    let mut coeffs = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let basis = from_bargmann(&BargmannPoly::monomial(field, k, Complex::new(1.0, 0.0))?);
        coeffs.push(basis.inner(psi)? / monomial_norm_sqr(field, k));
    }
    // drop round-off contributions so the degree is meaningful
    let floor = PROJECTION_NOISE * psi.norm();
    for (k, c) in coeffs.iter_mut().enumerate() {
        if c.norm() * monomial_norm_sqr(field, k).sqrt() < floor {
            *c = Complex::new(0.0, 0.0);
        }
    }
    let f = BargmannPoly::new(field, coeffs)?;
    let residual = psi.distance(&from_bargmann(&f))?;
    if residual > LLL_RESIDUAL_TOLERANCE * psi.norm().max(1.0) {
        return Err(Error::OutsideLowestLevel { residual });
    }
    Ok(f)
}

/// Ladder operators transported to the Segal-Bargmann space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbOperator {
    /// `√(2/b) d/dz`.
    B,
    /// `√(b/2) z`.
    BDag,
}

pub fn sb_apply(f: &BargmannPoly, which: SbOperator) -> Result<BargmannPoly> {
    let b = f.field.strength();
    match which {
        SbOperator::B => Ok(f.derivative().scale(Complex::new((2.0 / b).sqrt(), 0.0))),
        SbOperator::BDag => Ok(f.times_z()?.scale(Complex::new((b / 2.0).sqrt(), 0.0))),
    }
}

/// `U √(2b) G1 U* = (1/√(2b)) (2 d/dz + b z)`.
pub fn sb_scaled_g1(f: &BargmannPoly) -> Result<BargmannPoly> {
    let b = f.field.strength();
    let s = 1.0 / (2.0 * b).sqrt();
    let d = f.derivative().scale(Complex::new(2.0 * s, 0.0));
    let z = f.times_z()?.scale(Complex::new(b * s, 0.0));
    d.add(&z)
}

/// `U i√(2b) G2 U* = (1/√(2b)) (b z - 2 d/dz)`.
pub fn sb_scaled_g2(f: &BargmannPoly) -> Result<BargmannPoly> {
    let b = f.field.strength();
    let s = 1.0 / (2.0 * b).sqrt();
    let d = f.derivative().scale(Complex::new(-2.0 * s, 0.0));
    let z = f.times_z()?.scale(Complex::new(b * s, 0.0));
    d.add(&z)
}
