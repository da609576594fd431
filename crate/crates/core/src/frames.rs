//! Generalized Gabor frames for the Landau model.
//!
//! A lattice `Γ = {m a + n b}` in the plane of the Weyl map `T(z)` generates
//! the family `T_{m,n} φ = T(a)^m T(b)^n φ`. Finite windows `|m|, |n| ≤ R` are
//! analysed through their Gram matrices and orthonormalized with the symmetric
//! (Löwdin) construction `S^{-1/2}`.
//!
//! The Balian-Low sweep is a finite-window diagnostic, not a proof: at the
//! critical density the Gram matrix of the infinite system loses its lower
//! frame bound, and the central orthonormalized vector spreads out further as
//! the window grows. Below the critical density the same quantities converge.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, HermitianEigen};
use crate::operators::GaborPair;
use crate::states::{Axis, QuantumState};

/// Eigenvalues at or below this are discarded by [`lowdin_orthonormalize`].
pub const DEFAULT_RANK_EPSILON: f64 = 1e-10;

/// Relative increase that counts as growth in [`BalianLowReport::monotone_growth`].
pub const GROWTH_TOLERANCE: f64 = 1e-6;

/// Lattice `Γ` spanned by `a` and `b` in the `z = t + i s` plane of `T(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    a: [f64; 2],
    b: [f64; 2],
}

impl LatticeSpec {
    pub fn new(a: [f64; 2], b: [f64; 2]) -> Result<Self> {
        let lattice = Self { a, b };
        let area = lattice.cell_area();
        if !(area.is_finite() && area > 0.0 && area > 1e-12 * norm2(a) * norm2(b)) {
            return Err(Error::InvalidParameter(format!(
                "lattice generators ({}, {}) and ({}, {}) are not independent",
                a[0], a[1], b[0], b[1]
            )));
        }
        Ok(lattice)
    }

    /// Square lattice whose density relative to critical is `ratio`.
    pub fn square_with_density(ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidParameter(format!("density ratio must be positive, got {ratio}")));
        }
        let side = (2.0 * PI / ratio).sqrt();
        Self::new([side, 0.0], [0.0, side])
    }

    pub fn a_vec(&self) -> [f64; 2] {
        self.a
    }

    pub fn b_vec(&self) -> [f64; 2] {
        self.b
    }

    pub fn cell_area(&self) -> f64 {
        (self.a[0] * self.b[1] - self.a[1] * self.b[0]).abs()
    }

    /// `2π / cell_area`: 1 at the critical (von Neumann) density.
    ///
    /// `T(z)` moves the orbit centre by `(Im z / b, Re z)`, so a cell of area
    /// `A` in this plane encloses flux `b · A / b = A`; criticality is one flux
    /// quantum per cell whatever the field strength.
    pub fn density_ratio(&self) -> f64 {
        2.0 * PI / self.cell_area()
    }

    pub fn point(&self, m: i32, n: i32) -> Complex {
        let (m, n) = (m as f64, n as f64);
        Complex::new(m * self.a[0] + n * self.b[0], m * self.a[1] + n * self.b[1])
    }

    /// `ω(m a, n b)`, the phase in `T*_{m,n} = e^{iω} T_{-m,-n}`.
    pub fn cocycle(&self, m: i32, n: i32) -> f64 {
        (m as f64) * (n as f64) * (self.a[0] * self.b[1] - self.a[1] * self.b[0])
    }
}

fn norm2(v: [f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// `T_{m,n} ψ = T(a)^m T(b)^n ψ`, using `T(a)^m = T(m a)`.
pub fn lattice_action(pair: &GaborPair, lattice: &LatticeSpec, m: i32, n: i32, psi: &QuantumState) -> QuantumState {
    let b_part = pair.weyl_t(lattice.point(0, n), psi);
    pair.weyl_t(lattice.point(m, 0), &b_part)
}

/// Window `{T_{m,n} φ : |m|, |n| ≤ R}` in row-major `(m, n)` order.
#[derive(Clone, Debug)]
pub struct FrameWindow {
    pub generator: QuantumState,
    pub lattice: LatticeSpec,
    pub radius: usize,
    pub labels: Vec<(i32, i32)>,
    pub states: Vec<QuantumState>,
}

impl FrameWindow {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Position of `(m, n)` in the window.
    pub fn index_of(&self, m: i32, n: i32) -> Option<usize> {
        let r = self.radius as i32;
        if m.abs() > r || n.abs() > r {
            return None;
        }
        Some(((m + r) as usize) * self.side() + (n + r) as usize)
    }

    pub fn central_index(&self) -> usize {
        self.index_of(0, 0).expect("origin is always in the window")
    }
}

pub fn generate_ggf(
    pair: &GaborPair,
    generator: &QuantumState,
    lattice: &LatticeSpec,
    radius: usize,
) -> Result<FrameWindow> {
    if generator.is_zero() {
        return Err(Error::ZeroState);
    }
    if generator.field() != pair.field() {
        return Err(Error::IncompatibleFields {
            left: generator.field().strength(),
            right: pair.field().strength(),
        });
    }
    let r = radius as i32;
    let labels: Vec<(i32, i32)> = (-r..=r).flat_map(|m| (-r..=r).map(move |n| (m, n))).collect();
    let states = labels
        .par_iter()
        .map(|&(m, n)| lattice_action(pair, lattice, m, n, generator))
        .collect();
    Ok(FrameWindow { generator: generator.clone(), lattice: *lattice, radius, labels, states })
}

/// Overlap matrix of a family of states with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub entries: DMatrix<Complex>,
    pub eigen: HermitianEigen,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigen.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigen.values.last().expect("nonempty Gram matrix")
    }
}

/// Exact overlaps `⟨ψ_i, ψ_j⟩`; entries are computed independently in parallel.
pub fn overlap_matrix(states: &[QuantumState]) -> Result<DMatrix<Complex>> {
    let n = states.len();
    if n == 0 {
        return Err(Error::BadShape { rows: 0, cols: 0 });
    }
    let upper: Vec<Result<Complex>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if j < i {
                Ok(Complex::new(0.0, 0.0))
            } else {
                states[i].inner(&states[j])
            }
        })
        .collect();
    let upper = upper.into_iter().collect::<Result<Vec<_>>>()?;
    let mut m = DMatrix::from_row_slice(n, n, &upper);
    for i in 0..n {
        m[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    Ok(m)
}

pub fn gram_matrix(window: &FrameWindow) -> Result<GramMatrix> {
    gram_of_states(&window.states)
}

pub fn gram_of_states(states: &[QuantumState]) -> Result<GramMatrix> {
    let entries = overlap_matrix(states)?;
    let eigen = hermitian_eig(&entries)?;
    Ok(GramMatrix { entries, eigen })
}

/// Finite-window frame bound estimates `(λ_min, λ_max)`.
pub fn frame_bounds(gram: &GramMatrix) -> (f64, f64) {
    (gram.lambda_min(), gram.lambda_max())
}

/// Symmetrically orthonormalized window.
#[derive(Clone, Debug)]
pub struct LowdinSystem {
    /// `ψ_j = Σ_k C_{kj} T_k φ`.
    pub states: Vec<QuantumState>,
    /// `C = S^{-1/2}` on the retained spectral subspace.
    pub coefficients: DMatrix<Complex>,
    pub retained_rank: usize,
    pub lambda_min: f64,
    /// `max |(C* S C - I)_{jk}|`.
    pub defect: f64,
}

/// `S^{-1/2}` orthonormalization with the default rank threshold.
pub fn lowdin_orthonormalize(window: &FrameWindow, gram: &GramMatrix) -> Result<LowdinSystem> {
    lowdin_with_threshold(&window.states, gram, DEFAULT_RANK_EPSILON)
}

/// Eigenvalues `≤ epsilon` are dropped; the outputs then span the retained
/// subspace and the defect reports how far they are from orthonormal.
pub fn lowdin_with_threshold(states: &[QuantumState], gram: &GramMatrix, epsilon: f64) -> Result<LowdinSystem> {
    let n = gram.dim();
    if states.len() != n {
        return Err(Error::BadShape { rows: states.len(), cols: n });
    }
    let values = gram.eigenvalues();
    let vectors = &gram.eigen.vectors;
    let retained: Vec<usize> = (0..n).filter(|&k| values[k] > epsilon).collect();
    if retained.is_empty() {
        return Err(Error::SingularGram { lambda_min: gram.lambda_min() });
    }
    let mut coefficients = DMatrix::<Complex>::zeros(n, n);
    for &k in &retained {
        let w = 1.0 / values[k].sqrt();
        let v = vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                coefficients[(i, j)] += v[i] * v[j].conj() * w;
            }
        }
    }
    let check = coefficients.adjoint() * &gram.entries * &coefficients - DMatrix::<Complex>::identity(n, n);
    let defect = check.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let field = states[0].field();
    let outputs = (0..n)
        .into_par_iter()
        .map(|j| {
            let parts: Vec<(Complex, &QuantumState)> =
                states.iter().enumerate().map(|(k, s)| (coefficients[(k, j)], s)).collect();
            QuantumState::combine(field, &parts)
        })
        .collect();
    Ok(LowdinSystem {
        states: outputs,
        coefficients,
        retained_rank: retained.len(),
        lambda_min: gram.lambda_min(),
        defect,
    })
}

/// `⟨𝔛ψ, 𝔓φ⟩ - ⟨𝔓ψ, 𝔛φ⟩ - i⟨ψ, φ⟩`, zero for a Weyl pair.
pub fn weak_ccr_check(pair: &GaborPair, psi: &QuantumState, phi: &QuantumState) -> Result<Complex> {
    let xp = pair.apply_x(psi).inner(&pair.apply_p(phi))?;
    let px = pair.apply_p(psi).inner(&pair.apply_x(phi))?;
    Ok(xp - px - Complex::new(0.0, 1.0) * psi.inner(phi)?)
}

/// Norms and centred spreads of a vector under the pair and positions.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Localization {
    pub norm_x_pair: f64,
    pub norm_p_pair: f64,
    pub norm_x1: f64,
    pub norm_x2: f64,
    pub spread_x_pair: f64,
    pub spread_p_pair: f64,
    pub spread_x1: f64,
    pub spread_x2: f64,
}

impl Localization {
    pub fn of(pair: &GaborPair, psi: &QuantumState) -> Result<Self> {
        let norm_sqr = psi.norm_sqr();
        if norm_sqr == 0.0 {
            return Err(Error::ZeroState);
        }
        let measure = |image: QuantumState| -> Result<(f64, f64)> {
            let n2 = image.norm_sqr();
            let mean = psi.inner(&image)? / norm_sqr;
            let spread = (n2 / norm_sqr - mean.norm_sqr()).max(0.0).sqrt();
            Ok((n2.sqrt(), spread))
        };
        let (norm_x_pair, spread_x_pair) = measure(pair.apply_x(psi))?;
        let (norm_p_pair, spread_p_pair) = measure(pair.apply_p(psi))?;
        let (norm_x1, spread_x1) = measure(psi.times_coordinate(Axis::X1))?;
        let (norm_x2, spread_x2) = measure(psi.times_coordinate(Axis::X2))?;
        Ok(Self {
            norm_x_pair,
            norm_p_pair,
            norm_x1,
            norm_x2,
            spread_x_pair,
            spread_p_pair,
            spread_x1,
            spread_x2,
        })
    }

    /// `‖𝔛ψ‖ · ‖𝔓ψ‖`.
    pub fn pair_product(&self) -> f64 {
        self.norm_x_pair * self.norm_p_pair
    }

    /// `‖X1ψ‖ · ‖X2ψ‖`.
    pub fn position_product(&self) -> f64 {
        self.norm_x1 * self.norm_x2
    }
}

/// One window radius of a Balian-Low sweep.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BalianLowRecord {
    pub radius: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub retained_rank: usize,
    pub defect: f64,
    /// Central Löwdin vector.
    pub central: Localization,
    /// Corner `(R, R)` vector, kept out of the headline products (edge effects).
    pub corner: Localization,
}

impl BalianLowRecord {
    pub fn loc_xp(&self) -> f64 {
        self.central.pair_product()
    }

    pub fn loc_x1x2(&self) -> f64 {
        self.central.position_product()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BalianLowReport {
    pub density_ratio: f64,
    pub records: Vec<BalianLowRecord>,
}

impl BalianLowReport {
    /// Both headline products increase by more than [`GROWTH_TOLERANCE`]
    /// (relative) between every pair of consecutive radii.
    pub fn monotone_growth(&self) -> bool {
        let grows = |a: f64, b: f64| b > a * (1.0 + GROWTH_TOLERANCE);
        self.records.len() >= 2
            && self.records.windows(2).all(|w| {
                grows(w[0].loc_xp(), w[1].loc_xp()) && grows(w[0].loc_x1x2(), w[1].loc_x1x2())
            })
    }
}

pub fn balian_low_sweep(
    pair: &GaborPair,
    generator: &QuantumState,
    lattice: &LatticeSpec,
    radii: &[usize],
) -> Result<BalianLowReport> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("at least one window radius is required".into()));
    }
    let mut records = Vec::with_capacity(radii.len());
    for &radius in radii {
        let window = generate_ggf(pair, generator, lattice, radius)?;
        let gram = gram_matrix(&window)?;
        let system = lowdin_orthonormalize(&window, &gram)?;
        let central = Localization::of(pair, &system.states[window.central_index()])?;
        let r = radius as i32;
        let corner_index = window.index_of(r, r).expect("corner is in the window");
        let corner = Localization::of(pair, &system.states[corner_index])?;
        records.push(BalianLowRecord {
            radius,
            lambda_min: gram.lambda_min(),
            lambda_max: gram.lambda_max(),
            retained_rank: system.retained_rank,
            defect: system.defect,
            central,
            corner,
        });
    }
    Ok(BalianLowReport { density_ratio: lattice.density_ratio(), records })
}
