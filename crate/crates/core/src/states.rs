//! Exact Landau-model wavefunctions.
//!
//! A [`QuantumState`] is a finite sum of [`GaussTerm`]s
//!
//! ```text
//! p(x - c) * exp(-(b/4)|x|^2 + l1*x1 + l2*x2),   c = 2 Re l / b
//! ```
//!
//! where `p` is a sparse complex polynomial and `(l1, l2)` a complex linear
//! exponent. The quadratic part is fixed by the [`MagneticField`] and never
//! stored per term. Constant prefactors are folded into the polynomial
//! coefficients.
//!
//! Inner products reduce to products of one-dimensional moments
//! `I_n(mu) = ∫ t^n exp(-(b/2) t^2 + mu t) dt`, evaluated by the upward
//! recursion in [`gaussian_moments`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as Complex;
use rand::Rng;

use crate::error::{Error, Result};

/// Monomials whose coefficient, weighted by the size `e^{|Re ℓ|²/b}` of their
/// Gaussian factor, falls below this are dropped after every state operation.
pub const PRUNE_TOLERANCE: f64 = 1e-15;

/// Terms whose linear exponents agree to this relative tolerance are merged.
const LINEAR_MERGE_TOLERANCE: f64 = 1e-12;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Uniform field strength `b > 0` (unit mass and charge absorbed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagneticField(f64);

impl MagneticField {
    pub fn new(b: f64) -> Result<Self> {
        if b.is_finite() && b > 0.0 {
            Ok(Self(b))
        } else {
            Err(Error::InvalidField(b))
        }
    }

    #[inline]
    pub fn strength(self) -> f64 {
        self.0
    }

    /// Energy `b (n + 1/2)` of the `n`-th Landau level.
    pub fn landau_energy(self, n: usize) -> f64 {
        self.0 * (n as f64 + 0.5)
    }
}

/// Cartesian direction in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }

    /// Maps the 1-based labels used for operator indices.
    pub fn from_label(label: usize) -> Result<Self> {
        match label {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            other => Err(Error::InvalidIndex(other)),
        }
    }
}

/// Sparse polynomial in two variables: exponent pair `(m, n)` to coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: BTreeMap<(u32, u32), Complex>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(m: u32, n: u32, c: Complex) -> Self {
        let mut p = Self::zero();
        p.add_to(m, n, c);
        p.prune();
        p
    }

    pub fn from_coefficients<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Complex)>,
    {
        let mut p = Self::zero();
        for ((m, n), c) in coeffs {
            p.add_to(m, n, c);
        }
        p.prune();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> Complex {
        self.coeffs.get(&(m, n)).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), Complex)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(m, n)| m + n).max()
    }

    /// Largest exponent of each variable separately.
    pub fn max_powers(&self) -> (u32, u32) {
        self.coeffs
            .keys()
            .fold((0, 0), |(a, b), &(m, n)| (a.max(m), b.max(n)))
    }

    pub fn evaluate(&self, x: [f64; 2]) -> Complex {
        self.coeffs
            .iter()
            .map(|(&(m, n), &c)| c * x[0].powi(m as i32) * x[1].powi(n as i32))
            .sum()
    }

    fn add_to(&mut self, m: u32, n: u32, c: Complex) {
        *self.coeffs.entry((m, n)).or_insert(ZERO) += c;
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != ZERO);
    }

    /// Drops coefficients with modulus below `tolerance`.
    pub fn prune_below(&mut self, tolerance: f64) {
        // NaN moduli compare false and are kept so they surface downstream
        self.coeffs.retain(|_, c| !(c.norm() < tolerance));
    }

    /// `self += scale * other`, dropping exact zeros.
    pub fn add_scaled(&mut self, other: &Poly, scale: Complex) {
        for (&(m, n), &c) in &other.coeffs {
            self.add_to(m, n, scale * c);
        }
        self.prune();
    }

    pub fn scaled(&self, scale: Complex) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(self, scale);
        out
    }

    /// Multiplication by the coordinate `x_axis`.
    pub fn times_coordinate(&self, axis: Axis) -> Poly {
        let coeffs = self.coeffs.iter().map(|(&(m, n), &c)| match axis {
            Axis::X1 => ((m + 1, n), c),
            Axis::X2 => ((m, n + 1), c),
        });
        Poly::from_coefficients(coeffs)
    }

    pub fn derivative(&self, axis: Axis) -> Poly {
        let coeffs = self.coeffs.iter().filter_map(|(&(m, n), &c)| match axis {
            Axis::X1 if m > 0 => Some(((m - 1, n), c * m as f64)),
            Axis::X2 if n > 0 => Some(((m, n - 1), c * n as f64)),
            _ => None,
        });
        Poly::from_coefficients(coeffs)
    }

    /// The polynomial `x -> p(x + d)`.
    pub fn shifted(&self, d: [f64; 2]) -> Poly {
        let mut out = Poly::zero();
        for (&(m, n), &c) in &self.coeffs {
            let row1 = binomial_expansion(m, d[0]);
            let row2 = binomial_expansion(n, d[1]);
            for (i, &w1) in row1.iter().enumerate() {
                if w1 == 0.0 {
                    continue;
                }
                for (j, &w2) in row2.iter().enumerate() {
                    if w2 != 0.0 {
                        out.add_to(i as u32, j as u32, c * (w1 * w2));
                    }
                }
            }
        }
        out.prune();
        out
    }
}

/// Coefficients of `(x + d)^n` in powers of `x`.
fn binomial_expansion(n: u32, d: f64) -> Vec<f64> {
    let n = n as usize;
    let mut row = vec![0.0; n + 1];
    let mut binom = 1.0_f64;
    for k in 0..=n {
        // coefficient of x^k is C(n, k) d^(n-k)
        row[k] = binom * d.powi((n - k) as i32);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    row
}

/// One term `p(x - c) exp(-(b/4)|x|² + ℓ·x)`.
///
/// The polynomial is expanded about `c = 2 Re ℓ / b`, where the Gaussian
/// factor peaks. Translations then leave `p` unchanged, and states far from
/// the origin keep their precision.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTerm {
    poly: Poly,
    linear: [Complex; 2],
}

impl GaussTerm {
    /// Term whose polynomial is already expanded about `2 Re ℓ / b`.
    pub fn new(poly: Poly, linear: [Complex; 2]) -> Self {
        Self { poly, linear }
    }

    /// Term `p(x) exp(-(b/4)|x|² + ℓ·x)` with `p` given in powers of `x`.
    pub fn about_origin(field: MagneticField, poly: Poly, linear: [Complex; 2]) -> Self {
        let b = field.strength();
        let c = [2.0 * linear[0].re / b, 2.0 * linear[1].re / b];
        Self::new(poly.shifted(c), linear)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn linear(&self) -> [Complex; 2] {
        self.linear
    }

    /// Expansion point `c = 2 Re ℓ / b`.
    pub fn center(&self, field: MagneticField) -> [f64; 2] {
        let b = field.strength();
        [2.0 * self.linear[0].re / b, 2.0 * self.linear[1].re / b]
    }

    pub fn evaluate(&self, field: MagneticField, x: [f64; 2]) -> Complex {
        let c = self.center(field);
        let quad = -0.25 * field.strength() * (x[0] * x[0] + x[1] * x[1]);
        let exponent = self.linear[0] * x[0] + self.linear[1] * x[1] + quad;
        self.poly.evaluate([x[0] - c[0], x[1] - c[1]]) * exponent.exp()
    }

    fn merges_with(&self, linear: &[Complex; 2]) -> bool {
        let scale = 1.0 + self.linear[0].norm().max(self.linear[1].norm());
        (self.linear[0] - linear[0]).norm() <= LINEAR_MERGE_TOLERANCE * scale
            && (self.linear[1] - linear[1]).norm() <= LINEAR_MERGE_TOLERANCE * scale
    }
}

/// Finite sum of [`GaussTerm`]s in a common field.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    field: MagneticField,
    terms: Vec<GaussTerm>,
}

impl QuantumState {
    pub fn zero(field: MagneticField) -> Self {
        Self { field, terms: Vec::new() }
    }

    /// Ground state `(b/2π)^{1/2} exp(-(b/4)|x|^2)`.
    pub fn phi0(field: MagneticField) -> Self {
        let norm = (field.strength() / (2.0 * PI)).sqrt();
        Self::from_terms(
            field,
            vec![GaussTerm::new(Poly::constant(Complex::new(norm, 0.0)), [ZERO; 2])],
        )
    }

    /// Builds a state, merging terms with matching linear exponents.
    pub fn from_terms(field: MagneticField, terms: impl IntoIterator<Item = GaussTerm>) -> Self {
        let mut state = Self::zero(field);
        for term in terms {
            state.accumulate(&term.poly, term.linear, Complex::new(1.0, 0.0));
        }
        state.drop_empty();
        state
    }

    pub fn field(&self) -> MagneticField {
        self.field
    }

    pub fn terms(&self) -> &[GaussTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, poly: &Poly, linear: [Complex; 2], scale: Complex) {
        if let Some(existing) = self.terms.iter_mut().find(|t| t.merges_with(&linear)) {
            existing.poly.add_scaled(poly, scale);
        } else {
            self.terms.push(GaussTerm::new(poly.scaled(scale), linear));
        }
    }

    fn drop_empty(&mut self) {
        let b = self.field.strength();
        for t in &mut self.terms {
            let re_sq = t.linear[0].re.powi(2) + t.linear[1].re.powi(2);
            t.poly.prune_below(PRUNE_TOLERANCE * (-re_sq / b).exp());
        }
        self.terms.retain(|t| !t.poly.is_zero());
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::IncompatibleFields {
                left: self.field.strength(),
                right: other.field.strength(),
            })
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = Self::zero(self.field);
        for t in &self.terms {
            out.accumulate(&t.poly, t.linear, c);
        }
        out.drop_empty();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(Self::combine(self.field, &[(Complex::new(1.0, 0.0), self), (Complex::new(1.0, 0.0), other)]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(Self::combine(self.field, &[(Complex::new(1.0, 0.0), self), (Complex::new(-1.0, 0.0), other)]))
    }

    /// Linear combination `Σ c_i ψ_i`; all parts must live in `field`.
    pub fn combine(field: MagneticField, parts: &[(Complex, &QuantumState)]) -> Self {
        let mut out = Self::zero(field);
        for (c, psi) in parts {
            debug_assert_eq!(psi.field, field);
            for t in &psi.terms {
                out.accumulate(&t.poly, t.linear, *c);
            }
        }
        out.drop_empty();
        out
    }

    /// Applies `f` to every term; the results are re-merged.
    pub(crate) fn map_terms(&self, f: impl Fn(&GaussTerm) -> GaussTerm) -> Self {
        Self::from_terms(self.field, self.terms.iter().map(f))
    }

    /// L² scalar product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        self.check_field(other)?;
        let mut total = ZERO;
        for s in &self.terms {
            for t in &other.terms {
                total += term_overlap(self.field, s, t);
            }
        }
        Ok(total)
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut total = ZERO;
        for s in &self.terms {
            for t in &self.terms {
                total += term_overlap(self.field, s, t);
            }
        }
        total.re.max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(Complex::new(1.0 / n, 0.0)))
    }

    /// `‖ψ - φ‖`, computed from the symbolic difference.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn evaluate(&self, x: [f64; 2]) -> Complex {
        self.terms.iter().map(|t| t.evaluate(self.field, x)).sum()
    }

    /// `x_axis ψ` as a new state.
    pub fn times_coordinate(&self, axis: Axis) -> Self {
        self.map_terms(|t| {
            // x p(x - c) = (y + c) p(y)
            let mut poly = t.poly.times_coordinate(axis);
            poly.add_scaled(&t.poly, Complex::new(t.center(self.field)[axis.index()], 0.0));
            GaussTerm::new(poly, t.linear)
        })
    }

    /// `‖X_axis ψ‖²`.
    pub fn position_second_moment(&self, axis: Axis) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(self.times_coordinate(axis).norm_sqr())
    }
}

/// `make_phi0` in functional form.
pub fn make_phi0(field: MagneticField) -> QuantumState {
    QuantumState::phi0(field)
}

fn term_overlap(field: MagneticField, s: &GaussTerm, t: &GaussTerm) -> Complex {
    // expand both polynomials about the midpoint of the two centres, where the
    // product Gaussian peaks; only Im μ is left in the exponent
    let b = field.strength();
    let (cs, ct) = (s.center(field), t.center(field));
    let mid = [0.5 * (cs[0] + ct[0]), 0.5 * (cs[1] + ct[1])];
    let half = [0.5 * (ct[0] - cs[0]), 0.5 * (ct[1] - cs[1])];
    let (sp, tp) = if half == [0.0, 0.0] {
        (s.poly.clone(), t.poly.clone())
    } else {
        (s.poly.shifted(half), t.poly.shifted([-half[0], -half[1]]))
    };
    let nu1 = (s.linear[0].conj() + t.linear[0]).im;
    let nu2 = (s.linear[1].conj() + t.linear[1]).im;
    let (sm, sn) = sp.max_powers();
    let (tm, tn) = tp.max_powers();
    let i1 = gaussian_moments(b, Complex::new(0.0, nu1), (sm + tm) as usize);
    let i2 = gaussian_moments(b, Complex::new(0.0, nu2), (sn + tn) as usize);
    let mut total = ZERO;
    for ((m, n), c) in sp.iter() {
        let c = c.conj();
        for ((mp, np), cp) in tp.iter() {
            total += c * cp * i1[(m + mp) as usize] * i2[(n + np) as usize];
        }
    }
    let constant = Complex::new(
        0.5 * b * (mid[0] * mid[0] + mid[1] * mid[1]),
        nu1 * mid[0] + nu2 * mid[1],
    );
    total * constant.exp()
}

/// Moments `I_k(mu) = ∫ t^k exp(-(b/2) t^2 + mu t) dt` for `k = 0..=n_max`.
///
/// `I_0 = (2π/b)^{1/2} e^{mu²/(2b)}`, `I_1 = (mu/b) I_0`,
/// `I_k = ((k-1) I_{k-2} + mu I_{k-1}) / b`.
pub fn gaussian_moments(b: f64, mu: Complex, n_max: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n_max + 1);
    let i0 = (2.0 * PI / b).sqrt() * (mu * mu / (2.0 * b)).exp();
    out.push(i0);
    if n_max >= 1 {
        out.push(mu / b * i0);
    }
    for k in 2..=n_max {
        let next = ((k - 1) as f64 * out[k - 2] + mu * out[k - 1]) / b;
        out.push(next);
    }
    out
}

/// Shape of randomly drawn test states.
#[derive(Clone, Copy, Debug)]
pub struct RandomStateSpec {
    pub terms: usize,
    pub max_degree: u32,
    /// Bound on the Euclidean norm of the complex linear exponent.
    pub max_linear: f64,
}

impl Default for RandomStateSpec {
    fn default() -> Self {
        Self { terms: 2, max_degree: 4, max_linear: 2.0 }
    }
}

/// Draws a unit-norm state with random polynomial and linear parts.
pub fn random_state<R: Rng + ?Sized>(
    field: MagneticField,
    rng: &mut R,
    spec: RandomStateSpec,
) -> QuantumState {
    loop {
        let mut terms = Vec::with_capacity(spec.terms.max(1));
        for _ in 0..spec.terms.max(1) {
            let degree = rng.gen_range(0..=spec.max_degree);
            let mut coeffs = Vec::new();
            for total in 0..=degree {
                for m in 0..=total {
                    let c = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    coeffs.push(((m, total - m), c));
                }
            }
            let linear = loop {
                let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if r <= 1.0 {
                    let s = spec.max_linear;
                    break [Complex::new(s * v[0], s * v[1]), Complex::new(s * v[2], s * v[3])];
                }
            };
            terms.push(GaussTerm::about_origin(field, Poly::from_coefficients(coeffs), linear));
        }
        let state = QuantumState::from_terms(field, terms);
        if let Ok(unit) = state.normalized() {
            return unit;
        }
    }
}
