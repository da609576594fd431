//! Landau-model operators acting exactly on [`QuantumState`].
//!
//! With `P = -i∇`:
//!
//! ```text
//! K1 = (1/b)(P1 + (b/2)X2)     K2 = P2 - (b/2)X1
//! G1 = (1/b)(P2 + (b/2)X1)     G2 = (1/b)(-P1 + (b/2)X2)
//! H_L = (1/2)(K2² + b² K1²)
//! ```
//!
//! The unitary groups generated by `G1`, `G2` and the magnetic translations act
//! as a shift combined with a linear phase, which keeps the Gaussian class
//! closed and is applied in closed form.

use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};
use crate::states::{Axis, GaussTerm, MagneticField, QuantumState};

/// Maximal `n + m` accepted by [`landau_state`].
pub const LADDER_DEGREE_CAP: usize = 12;

const I: Complex = Complex::new(0.0, 1.0);

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Multiplication by `x_axis`.
pub fn apply_position(psi: &QuantumState, axis: Axis) -> QuantumState {
    psi.times_coordinate(axis)
}

/// `-i ∂_axis`, term by term.
pub fn apply_momentum(psi: &QuantumState, axis: Axis) -> QuantumState {
    let half_b = 0.5 * psi.field().strength();
    psi.map_terms(|t| {
        // ∂(p(x - c) e^E) = (∂p + ℓ p - (b/2)(y + c) p) e^E with (b/2) c = Re ℓ
        let mut poly = t.poly().derivative(axis);
        poly.add_scaled(t.poly(), I * t.linear()[axis.index()].im);
        poly.add_scaled(&t.poly().times_coordinate(axis), re(-half_b));
        GaussTerm::new(poly.scaled(-I), t.linear())
    })
}

/// `c_p P_axis ψ + c_x X_other ψ`, the shape shared by all of `K` and `G`.
fn momentum_plus_position(
    psi: &QuantumState,
    p_axis: Axis,
    p_coeff: f64,
    x_axis: Axis,
    x_coeff: f64,
) -> QuantumState {
    let p = apply_momentum(psi, p_axis);
    let x = apply_position(psi, x_axis);
    QuantumState::combine(psi.field(), &[(re(p_coeff), &p), (re(x_coeff), &x)])
}

pub(crate) fn k1(psi: &QuantumState) -> QuantumState {
    let b = psi.field().strength();
    momentum_plus_position(psi, Axis::X1, 1.0 / b, Axis::X2, 0.5)
}

pub(crate) fn k2(psi: &QuantumState) -> QuantumState {
    let b = psi.field().strength();
    momentum_plus_position(psi, Axis::X2, 1.0, Axis::X1, -0.5 * b)
}

pub(crate) fn g1(psi: &QuantumState) -> QuantumState {
    let b = psi.field().strength();
    momentum_plus_position(psi, Axis::X2, 1.0 / b, Axis::X1, 0.5)
}

pub(crate) fn g2(psi: &QuantumState) -> QuantumState {
    let b = psi.field().strength();
    momentum_plus_position(psi, Axis::X1, -1.0 / b, Axis::X2, 0.5)
}

/// Dynamical coordinate `K_index`, `index ∈ {1, 2}`.
pub fn apply_k(psi: &QuantumState, index: usize) -> Result<QuantumState> {
    match index {
        1 => Ok(k1(psi)),
        2 => Ok(k2(psi)),
        other => Err(Error::InvalidIndex(other)),
    }
}

/// Orbit-centre coordinate `G_index`, `index ∈ {1, 2}`.
pub fn apply_g(psi: &QuantumState, index: usize) -> Result<QuantumState> {
    match index {
        1 => Ok(g1(psi)),
        2 => Ok(g2(psi)),
        other => Err(Error::InvalidIndex(other)),
    }
}

/// Landau Hamiltonian `(1/2)(K2² + b² K1²)`.
pub fn apply_hamiltonian(psi: &QuantumState) -> QuantumState {
    let b = psi.field().strength();
    let kk2 = k2(&k2(psi));
    let kk1 = k1(&k1(psi));
    QuantumState::combine(psi.field(), &[(re(0.5), &kk2), (re(0.5 * b * b), &kk1)])
}

/// Ladder operators of the two commuting oscillators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// `(1/√(2b))(b K1 + i K2)`, lowers the Landau level.
    A,
    /// `(1/√(2b))(b K1 - i K2)`.
    ADag,
    /// `√(b/2)(G1 - i G2)`, lowers the degeneracy index.
    B,
    /// `√(b/2)(G1 + i G2)`.
    BDag,
}

pub fn apply_ladder(psi: &QuantumState, which: Ladder) -> QuantumState {
    let b = psi.field().strength();
    let field = psi.field();
    match which {
        Ladder::A | Ladder::ADag => {
            let sign = if which == Ladder::A { 1.0 } else { -1.0 };
            let s = 1.0 / (2.0 * b).sqrt();
            let a = k1(psi);
            let c = k2(psi);
            QuantumState::combine(field, &[(re(s * b), &a), (I * (sign * s), &c)])
        }
        Ladder::B | Ladder::BDag => {
            let sign = if which == Ladder::B { -1.0 } else { 1.0 };
            let s = (0.5 * b).sqrt();
            let a = g1(psi);
            let c = g2(psi);
            QuantumState::combine(field, &[(re(s), &a), (I * (sign * s), &c)])
        }
    }
}

/// Normalized joint eigenstate `(A*)^n (B*)^m φ0`.
///
/// Energy `b(n + 1/2)`, number operator `B*B` eigenvalue `m`.
pub fn landau_state(field: MagneticField, n: usize, m: usize) -> Result<QuantumState> {
    if n + m > LADDER_DEGREE_CAP {
        return Err(Error::DegreeCap { requested: n + m, cap: LADDER_DEGREE_CAP });
    }
    let mut psi = QuantumState::phi0(field);
    for _ in 0..m {
        psi = apply_ladder(&psi, Ladder::BDag);
    }
    for _ in 0..n {
        psi = apply_ladder(&psi, Ladder::ADag);
    }
    psi.normalized()
}

/// `ψ ↦ e^{i k·x} ψ(x + d)`.
pub fn shift_with_phase(psi: &QuantumState, shift: [f64; 2], wave: [f64; 2]) -> QuantumState {
    let b = psi.field().strength();
    psi.map_terms(|t| {
        let l = t.linear();
        // p(x + d - c) e^{-(b/4)|x+d|² + ℓ·(x+d)}: the centre moves to c - d,
        // so the polynomial in y = x - c + d is unchanged
        let constant = (l[0] * shift[0] + l[1] * shift[1]
            - re(0.25 * b * (shift[0] * shift[0] + shift[1] * shift[1])))
        .exp();
        let linear = [
            l[0] - re(0.5 * b * shift[0]) + I * wave[0],
            l[1] - re(0.5 * b * shift[1]) + I * wave[1],
        ];
        GaussTerm::new(t.poly().scaled(constant), linear)
    })
}

/// `e^{i t G_index} ψ`.
///
/// `(e^{iαG1}ψ)(x) = e^{iαx1/2} ψ(x1, x2 + α/b)` and
/// `(e^{iαG2}ψ)(x) = e^{iαx2/2} ψ(x1 - α/b, x2)`.
pub fn exp_g(psi: &QuantumState, index: usize, t: f64) -> Result<QuantumState> {
    let b = psi.field().strength();
    match index {
        1 => Ok(shift_with_phase(psi, [0.0, t / b], [0.5 * t, 0.0])),
        2 => Ok(shift_with_phase(psi, [-t / b, 0.0], [0.0, 0.5 * t])),
        other => Err(Error::InvalidIndex(other)),
    }
}

/// Magnetic translation `τ_α = e^{i b (α1 G2 - α2 G1)}`.
///
/// The two pieces `-α·P` and `(b/2)(α1 X2 - α2 X1)` of the generator commute,
/// so `(τ_α ψ)(x) = e^{i(b/2)(α1 x2 - α2 x1)} ψ(x - α)` with no extra constant
/// phase, and `τ_{-α} = τ_α^{-1}` holds exactly.
pub fn magnetic_translate(psi: &QuantumState, alpha: [f64; 2]) -> QuantumState {
    let half_b = 0.5 * psi.field().strength();
    shift_with_phase(psi, [-alpha[0], -alpha[1]], [-half_b * alpha[1], half_b * alpha[0]])
}

/// The concrete Weyl pair acting on the Landau model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaborPairKind {
    /// `(𝔛, 𝔓) = (-b G1, G2)`.
    LandauLevelPair,
}

/// Pair of generators obeying `e^{it𝔛} e^{is𝔓} = e^{-ist} e^{is𝔓} e^{it𝔛}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaborPair {
    kind: GaborPairKind,
    field: MagneticField,
}

impl GaborPair {
    pub fn landau(field: MagneticField) -> Self {
        Self { kind: GaborPairKind::LandauLevelPair, field }
    }

    pub fn kind(&self) -> GaborPairKind {
        self.kind
    }

    pub fn field(&self) -> MagneticField {
        self.field
    }

    /// `𝔛ψ = -b G1 ψ`.
    pub fn apply_x(&self, psi: &QuantumState) -> QuantumState {
        match self.kind {
            GaborPairKind::LandauLevelPair => g1(psi).scale(re(-self.field.strength())),
        }
    }

    /// `𝔓ψ = G2 ψ`.
    pub fn apply_p(&self, psi: &QuantumState) -> QuantumState {
        match self.kind {
            GaborPairKind::LandauLevelPair => g2(psi),
        }
    }

    /// `e^{it𝔛} ψ`.
    pub fn exp_x(&self, t: f64, psi: &QuantumState) -> QuantumState {
        match self.kind {
            GaborPairKind::LandauLevelPair => {
                let b = self.field.strength();
                shift_with_phase(psi, [0.0, -t], [-0.5 * b * t, 0.0])
            }
        }
    }

    /// `e^{is𝔓} ψ`.
    pub fn exp_p(&self, s: f64, psi: &QuantumState) -> QuantumState {
        match self.kind {
            GaborPairKind::LandauLevelPair => {
                let b = self.field.strength();
                shift_with_phase(psi, [-s / b, 0.0], [0.0, 0.5 * s])
            }
        }
    }

    /// `T(z) = e^{i Re z Im z / 2} e^{i Re z 𝔛} e^{i Im z 𝔓}`.
    pub fn weyl_t(&self, z: Complex, psi: &QuantumState) -> QuantumState {
        let inner = self.exp_p(z.im, psi);
        let outer = self.exp_x(z.re, &inner);
        outer.scale(Complex::from_polar(1.0, 0.5 * z.re * z.im))
    }
}

/// Functional form of [`GaborPair::weyl_t`].
pub fn weyl_t(pair: &GaborPair, z: Complex, psi: &QuantumState) -> QuantumState {
    pair.weyl_t(z, psi)
}

/// `ω(z, z') = Re z Im z' - Re z' Im z`, the imaginary part of `z ∧ z'`.
pub fn symplectic_form(z: Complex, w: Complex) -> f64 {
    z.re * w.im - w.re * z.im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_phi0, random_state, RandomStateSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(b: f64) -> MagneticField {
        MagneticField::new(b).unwrap()
    }

    fn commutator(
        psi: &QuantumState,
        f: impl Fn(&QuantumState) -> QuantumState,
        g: impl Fn(&QuantumState) -> QuantumState,
    ) -> QuantumState {
        f(&g(psi)).sub(&g(&f(psi))).unwrap()
    }

    #[test]
    fn bad_indices_are_rejected() {
        let phi = make_phi0(field(1.0));
        assert_eq!(apply_k(&phi, 0), Err(Error::InvalidIndex(0)));
        assert_eq!(apply_g(&phi, 3), Err(Error::InvalidIndex(3)));
        assert!(exp_g(&phi, 5, 1.0).is_err());
    }

    #[test]
    fn momentum_of_phi0_vanishes_at_origin_and_in_mean() {
        let phi = make_phi0(field(1.0));
        let p = apply_momentum(&phi, Axis::X1);
        assert!(p.evaluate([0.0, 0.0]).norm() < 1e-16);
        assert!(phi.inner(&p).unwrap().norm() < 1e-15);
        let x = apply_position(&phi, Axis::X1);
        assert!((x.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn momentum_matches_finite_difference() {
        let f = field(1.4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let h = 1e-5;
        for axis in Axis::BOTH {
            let p = apply_momentum(&psi, axis);
            for x in [[0.3, -0.2], [1.1, 0.7]] {
                let mut xp = x;
                let mut xm = x;
                xp[axis.index()] += h;
                xm[axis.index()] -= h;
                let fd = (psi.evaluate(xp) - psi.evaluate(xm)) / (2.0 * h) * (-I);
                assert!((fd - p.evaluate(x)).norm() < 1e-7 * (1.0 + fd.norm()));
            }
        }
    }

    #[test]
    fn canonical_commutators_on_random_states() {
        for b in [0.5, 1.0, 2.5] {
            let f = field(b);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..5 {
                let psi = random_state(f, &mut rng, RandomStateSpec::default());
                let c = commutator(&psi, k1, k2).sub(&psi.scale(I)).unwrap();
                assert!(c.norm() < 1e-11, "[K1,K2] residual {}", c.norm());
                let c = commutator(&psi, g1, g2).add(&psi.scale(I / b)).unwrap();
                assert!(c.norm() < 1e-11, "[G1,G2] residual {}", c.norm());
                for kf in [k1, k2] {
                    for gf in [g1, g2] {
                        assert!(commutator(&psi, kf, gf).norm() < 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_annihilates_phi0() {
        for b in [0.7, 1.0, 3.0] {
            let phi = make_phi0(field(b));
            assert!(apply_ladder(&phi, Ladder::A).norm() < 1e-14);
            assert!(apply_ladder(&phi, Ladder::B).norm() < 1e-14);
        }
    }

    #[test]
    fn raising_b_multiplies_by_z() {
        let f = field(2.0);
        let phi = make_phi0(f);
        let raised = apply_ladder(&phi, Ladder::BDag);
        for x in [[0.4, -0.3], [1.0, 1.0]] {
            let z = Complex::new(x[0], x[1]);
            let want = z * phi.evaluate(x) * (1.0_f64).sqrt();
            assert!((raised.evaluate(x) - want).norm() < 1e-14);
        }
        let twice = apply_ladder(&raised, Ladder::BDag);
        assert!((twice.norm_sqr() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn hamiltonian_spectrum() {
        let f = field(1.0);
        let phi = make_phi0(f);
        let r = apply_hamiltonian(&phi).sub(&phi.scale(re(0.5))).unwrap();
        assert!(r.norm() < 1e-12);

        let f2 = field(2.0);
        let psi = landau_state(f2, 3, 0).unwrap();
        let r = apply_hamiltonian(&psi).sub(&psi.scale(re(7.0))).unwrap();
        assert!(r.norm() < 1e-12, "residual {}", r.norm());
    }

    #[test]
    fn landau_state_degree_cap() {
        assert_eq!(
            landau_state(field(1.0), 7, 6),
            Err(Error::DegreeCap { requested: 13, cap: LADDER_DEGREE_CAP })
        );
        assert!(landau_state(field(1.0), 6, 6).is_ok());
    }

    #[test]
    fn lowest_level_states_are_orthonormal() {
        let f = field(1.0);
        let states: Vec<_> = (0..=5).map(|m| landau_state(f, 0, m).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, c) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(c).unwrap() - re(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn raised_states_remain_in_lowest_level() {
        let f = field(1.0);
        let mut psi = make_phi0(f);
        for _ in 0..4 {
            psi = apply_ladder(&psi, Ladder::BDag);
            let n = apply_ladder(&apply_ladder(&psi, Ladder::A), Ladder::ADag);
            assert!(n.norm() < 1e-12);
        }
    }

    #[test]
    fn translation_overlap_and_unitarity() {
        let f = field(1.0);
        let phi = make_phi0(f);
        let t = magnetic_translate(&phi, [1.3, -0.7]);
        assert!((t.norm() - 1.0).abs() < 1e-13);
        let t = magnetic_translate(&phi, [2.0, 0.0]);
        let ov = phi.inner(&t).unwrap();
        // e^{-b|α|²/4}: half from the shift, half from the gauge phase
        assert!((ov.norm() - (-1.0_f64).exp()).abs() < 1e-13);
        let m = t.position_second_moment(Axis::X1).unwrap();
        assert!((m - 5.0).abs() < 1e-12);
        let t3 = magnetic_translate(&phi, [3.0, 0.0]);
        assert!((t3.position_second_moment(Axis::X1).unwrap() - 10.0).abs() < 1e-11);
    }

    #[test]
    fn translation_inverse_is_exact() {
        let f = field(1.7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let a = [0.8, -1.1];
        let back = magnetic_translate(&magnetic_translate(&psi, a), [-a[0], -a[1]]);
        assert!(back.distance(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn translation_commutes_with_hamiltonian() {
        let f = field(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let psi = random_state(f, &mut rng, RandomStateSpec::default());
            let a = [rng_f(&mut rng), rng_f(&mut rng)];
            let lhs = magnetic_translate(&apply_hamiltonian(&psi), a);
            let rhs = apply_hamiltonian(&magnetic_translate(&psi, a));
            assert!(lhs.distance(&rhs).unwrap() < 1e-11);
        }
    }

    fn rng_f(rng: &mut ChaCha8Rng) -> f64 {
        use rand::Rng;
        rng.gen_range(-2.0..2.0)
    }

    #[test]
    fn exp_g_matches_pointwise_formula() {
        let f = field(2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let alpha = 0.9;
        let e1 = exp_g(&psi, 1, alpha).unwrap();
        let e2 = exp_g(&psi, 2, alpha).unwrap();
        for x in [[0.2, 0.5], [-1.0, 0.3]] {
            let w1 = Complex::from_polar(1.0, alpha * x[0] / 2.0) * psi.evaluate([x[0], x[1] + alpha / 2.0]);
            assert!((e1.evaluate(x) - w1).norm() < 1e-13);
            let w2 = Complex::from_polar(1.0, alpha * x[1] / 2.0) * psi.evaluate([x[0] - alpha / 2.0, x[1]]);
            assert!((e2.evaluate(x) - w2).norm() < 1e-13);
        }
    }

    #[test]
    fn guiding_centre_weyl_relation() {
        let b = 1.6;
        let f = field(b);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let (t, s) = (0.8, -1.3);
        let lhs = exp_g(&exp_g(&psi, 2, s).unwrap(), 1, t).unwrap();
        let rhs = exp_g(&exp_g(&psi, 1, t).unwrap(), 2, s)
            .unwrap()
            .scale(Complex::from_polar(1.0, t * s / b));
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn pair_weyl_relation_on_phi0() {
        let f = field(1.0);
        let pair = GaborPair::landau(f);
        let phi = make_phi0(f);
        let (t, s) = (0.7, -1.2);
        let lhs = pair.exp_x(t, &pair.exp_p(s, &phi));
        let rhs = pair.exp_p(s, &pair.exp_x(t, &phi)).scale(Complex::from_polar(1.0, -s * t));
        assert!(lhs.distance(&rhs).unwrap() < 1e-11);
    }

    #[test]
    fn pair_exponentials_match_scaled_g_groups() {
        let b = 2.3;
        let f = field(b);
        let pair = GaborPair::landau(f);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let t = 0.6;
        let via_g = exp_g(&psi, 1, -b * t).unwrap();
        assert!(pair.exp_x(t, &psi).distance(&via_g).unwrap() < 1e-12);
        assert!(pair.exp_p(t, &psi).distance(&exp_g(&psi, 2, t).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn weyl_t_identity_and_inverse() {
        let f = field(1.0);
        let pair = GaborPair::landau(f);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let id = pair.weyl_t(Complex::new(0.0, 0.0), &psi);
        assert!(id.distance(&psi).unwrap() < 1e-14);
        let z = Complex::new(1.1, -0.4);
        let back = pair.weyl_t(-z, &pair.weyl_t(z, &psi));
        let ov = psi.inner(&back).unwrap();
        assert!((ov.norm() - psi.norm_sqr()).abs() < 1e-12);
        assert!(back.distance(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn weyl_t_is_a_magnetic_translation() {
        let b = 1.5;
        let f = field(b);
        let pair = GaborPair::landau(f);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let z = Complex::new(0.9, 1.7);
        let tz = pair.weyl_t(z, &psi);
        let tau = magnetic_translate(&psi, [z.im / b, z.re]);
        assert!(tz.distance(&tau).unwrap() < 1e-12);
    }
}
