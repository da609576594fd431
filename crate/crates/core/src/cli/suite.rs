//! Named invariant checks behind `verify` and `sb-verify`.

use num_complex::Complex64 as Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::commands::lattice_adjoint_residual;
use super::RunConfig;
use crate::bargmann::{sb_apply, sb_inner, sb_scaled_g1, sb_scaled_g2, to_bargmann_with_degree, BargmannPoly, SbOperator};
use crate::classical::{
    classical_energy, cyclotron_period, orbit_center, poisson_bracket_fd, simulate_orbit, ClassicalState,
    DEFAULT_FD_STEP,
};
use crate::error::Result;
use crate::frames::{generate_ggf, gram_matrix, gram_of_states, lowdin_orthonormalize, weak_ccr_check, LatticeSpec};
use crate::numerics::{grid_hamiltonian_residual, quad_inner, Grid2D};
use crate::operators::{
    apply_g, apply_hamiltonian, apply_k, apply_ladder, landau_state, magnetic_translate, GaborPair, Ladder,
};
use crate::states::{make_phi0, random_state, MagneticField, QuantumState, RandomStateSpec};

/// Names of the checks produced by [`verify_suite`], in report order.
pub const VERIFY_CHECKS: &[&str] = &[
    "commutator_k1_k2",
    "commutator_g1_g2",
    "commutator_k_g",
    "commutator_a_adag",
    "commutator_b_bdag",
    "spectrum_residual",
    "weyl_phase",
    "weak_ccr",
    "translation_commutes_with_hamiltonian",
    "projective_composition",
    "lattice_adjoint",
    "sb_gram",
    "sb_lowering",
    "sb_raising",
    "sb_g1",
    "sb_g2",
    "oracle_agreement",
    "hamiltonian_grid_residual",
    "hamiltonian_grid_order",
    "classical_center_conservation",
    "classical_center_brackets",
    "lowdin_orthonormality",
    "lowdin_level_preservation",
];

const ALGEBRA_TOLERANCE: f64 = 1e-11;
const WEAK_CCR_TOLERANCE: f64 = 1e-10;
const SB_TOLERANCE: f64 = 1e-10;
const ORACLE_TOLERANCE: f64 = 1e-7;
const GRID_TOLERANCE: f64 = 5e-4;
/// Halving `h` must divide the residual by 4 ± 0.5.
const GRID_ORDER_TOLERANCE: f64 = 0.5;
const CENTER_TOLERANCE: f64 = 1e-8;
const BRACKET_TOLERANCE: f64 = 1e-6;
const LOWDIN_TOLERANCE: f64 = 1e-8;
const LEVEL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), passed: residual <= tolerance, residual, tolerance }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that it fails the comparison
    values.into_iter().fold(0.0, |a, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v) })
}

fn commutator_residual(
    psi: &QuantumState,
    f: impl Fn(&QuantumState) -> QuantumState,
    g: impl Fn(&QuantumState) -> QuantumState,
    expected: Complex,
) -> Result<f64> {
    let c = f(&g(psi)).sub(&g(&f(psi)))?;
    Ok(c.sub(&psi.scale(expected))?.norm() / psi.norm())
}

fn k(i: usize) -> impl Fn(&QuantumState) -> QuantumState {
    move |psi| apply_k(psi, i).expect("valid index")
}

fn g(i: usize) -> impl Fn(&QuantumState) -> QuantumState {
    move |psi| apply_g(psi, i).expect("valid index")
}

fn ladder(which: Ladder) -> impl Fn(&QuantumState) -> QuantumState {
    move |psi| apply_ladder(psi, which)
}

fn sb_norm(f: &BargmannPoly) -> Result<f64> {
    Ok(sb_inner(f, f)?.re.max(0.0).sqrt())
}

/// Unitarity of `U` on `span{(B*)^m φ0 : m ≤ m_max}` and its intertwining of
/// `B`, `B*`, `√(2b) G1` and `i√(2b) G2` with operators on polynomials.
pub fn segal_bargmann_checks(field: MagneticField, m_max: usize) -> Result<Vec<Check>> {
    let b = field.strength();
    let degree = m_max + 1;
    let mut basis = vec![make_phi0(field)];
    for _ in 0..m_max {
        let next = apply_ladder(basis.last().expect("nonempty"), Ladder::BDag);
        basis.push(next);
    }
    let images = basis.iter().map(|s| to_bargmann_with_degree(s, degree)).collect::<Result<Vec<_>>>()?;

    let mut gram_error: f64 = 0.0;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let l2 = basis[i].inner(&basis[j])?;
            let sb = sb_inner(&images[i], &images[j])?;
            let scale = (basis[i].norm_sqr() * basis[j].norm_sqr()).sqrt();
            gram_error = gram_error.max((l2 - sb).norm() / scale);
        }
    }

    let mut lowering: f64 = 0.0;
    let mut raising: f64 = 0.0;
    let mut g1_error: f64 = 0.0;
    let mut g2_error: f64 = 0.0;
    let c1 = Complex::new((2.0 * b).sqrt(), 0.0);
    let c2 = Complex::new(0.0, (2.0 * b).sqrt());
    for (s, u) in basis.iter().zip(&images) {
        let norm = s.norm();
        let err = |lhs: &QuantumState, rhs: BargmannPoly| -> Result<f64> {
            let image = to_bargmann_with_degree(lhs, degree)?;
            Ok(sb_norm(&image.add(&rhs.scale(Complex::new(-1.0, 0.0)))?)? / norm)
        };
        lowering = lowering.max(err(&apply_ladder(s, Ladder::B), sb_apply(u, SbOperator::B)?)?);
        raising = raising.max(err(&apply_ladder(s, Ladder::BDag), sb_apply(u, SbOperator::BDag)?)?);
        g1_error = g1_error.max(err(&apply_g(s, 1)?.scale(c1), sb_scaled_g1(u)?)?);
        g2_error = g2_error.max(err(&apply_g(s, 2)?.scale(c2), sb_scaled_g2(u)?)?);
    }
    Ok(vec![
        Check::new("sb_gram", gram_error, SB_TOLERANCE),
        Check::new("sb_lowering", lowering, SB_TOLERANCE),
        Check::new("sb_raising", raising, SB_TOLERANCE),
        Check::new("sb_g1", g1_error, SB_TOLERANCE),
        Check::new("sb_g2", g2_error, SB_TOLERANCE),
    ])
}

fn uniform_pair<R: Rng>(rng: &mut R, half_width: f64) -> [f64; 2] {
    [rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width)]
}

pub fn verify_suite(config: &RunConfig, samples: usize, oracle_pairs: usize) -> Result<Vec<Check>> {
    let field = config.field();
    let b = field.strength();
    let pair = GaborPair::landau(field);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let spec = RandomStateSpec::default();
    let states: Vec<QuantumState> = (0..samples).map(|_| random_state(field, &mut rng, spec)).collect();
    let partners: Vec<QuantumState> = (0..samples).map(|_| random_state(field, &mut rng, spec)).collect();
    let i = Complex::new(0.0, 1.0);
    let mut checks = Vec::with_capacity(VERIFY_CHECKS.len());

    let algebra = |f: &(dyn Fn(&QuantumState) -> Result<f64> + Sync)| -> Result<f64> {
        Ok(max_of(states.par_iter().map(f).collect::<Result<Vec<_>>>()?))
    };
    checks.push(Check::new(
        "commutator_k1_k2",
        algebra(&|s| commutator_residual(s, k(1), k(2), i))?,
        ALGEBRA_TOLERANCE,
    ));
    checks.push(Check::new(
        "commutator_g1_g2",
        algebra(&|s| commutator_residual(s, g(1), g(2), -i / b))?,
        ALGEBRA_TOLERANCE,
    ));
    checks.push(Check::new(
        "commutator_k_g",
        algebra(&|s| {
            let mut worst: f64 = 0.0;
            for a in 1..=2 {
                for c in 1..=2 {
                    worst = worst.max(commutator_residual(s, k(a), g(c), Complex::new(0.0, 0.0))?);
                }
            }
            Ok(worst)
        })?,
        ALGEBRA_TOLERANCE,
    ));
    let one = Complex::new(1.0, 0.0);
    checks.push(Check::new(
        "commutator_a_adag",
        algebra(&|s| commutator_residual(s, ladder(Ladder::A), ladder(Ladder::ADag), one))?,
        ALGEBRA_TOLERANCE,
    ));
    checks.push(Check::new(
        "commutator_b_bdag",
        algebra(&|s| commutator_residual(s, ladder(Ladder::B), ladder(Ladder::BDag), one))?,
        ALGEBRA_TOLERANCE,
    ));

    let labels: Vec<(usize, usize)> = (0..=5).flat_map(|n| (0..=5).map(move |m| (n, m))).collect();
    let spectrum = labels
        .par_iter()
        .map(|&(n, m)| {
            let psi = landau_state(field, n, m)?;
            let e = Complex::new(field.landau_energy(n), 0.0);
            Ok(apply_hamiltonian(&psi).sub(&psi.scale(e))?.norm())
        })
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new("spectrum_residual", max_of(spectrum), ALGEBRA_TOLERANCE));

    let mut weyl: f64 = 0.0;
    for psi in states.iter().take(10) {
        let [t, s] = uniform_pair(&mut rng, 2.0);
        let lhs = pair.exp_x(t, &pair.exp_p(s, psi));
        let rhs = pair.exp_p(s, &pair.exp_x(t, psi)).scale(Complex::from_polar(1.0, -s * t));
        weyl = weyl.max(lhs.distance(&rhs)?);
    }
    checks.push(Check::new("weyl_phase", weyl, ALGEBRA_TOLERANCE));

    let ccr = states
        .par_iter()
        .zip(&partners)
        .map(|(a, c)| Ok(weak_ccr_check(&pair, a, c)?.norm() / (a.norm() * c.norm())))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new("weak_ccr", max_of(ccr), WEAK_CCR_TOLERANCE));

    let mut translation: f64 = 0.0;
    for psi in &states {
        let alpha = uniform_pair(&mut rng, 2.0);
        let h = apply_hamiltonian(psi);
        let lhs = magnetic_translate(&h, alpha);
        let rhs = apply_hamiltonian(&magnetic_translate(psi, alpha));
        translation = translation.max(lhs.distance(&rhs)? / h.norm().max(1.0));
    }
    checks.push(Check::new("translation_commutes_with_hamiltonian", translation, ALGEBRA_TOLERANCE));

    let mut projective: f64 = 0.0;
    for psi in &states {
        let [a, c] = uniform_pair(&mut rng, 2.0);
        let [d, e] = uniform_pair(&mut rng, 2.0);
        let (z, w) = (Complex::new(a, c), Complex::new(d, e));
        let lhs = pair.weyl_t(z, &pair.weyl_t(w, psi));
        let omega = z.re * w.im - w.re * z.im;
        let rhs = pair.weyl_t(z + w, psi).scale(Complex::from_polar(1.0, -0.5 * omega));
        projective = projective.max(lhs.distance(&rhs)?);
    }
    checks.push(Check::new("projective_composition", projective, ALGEBRA_TOLERANCE));

    let mut adjoint: f64 = 0.0;
    for (psi, phi) in states.iter().zip(&partners).take(5) {
        for (m, n) in [(1, 1), (2, -1), (-1, 2)] {
            adjoint = adjoint.max(lattice_adjoint_residual(&pair, config, phi, psi, m, n)?);
        }
    }
    checks.push(Check::new("lattice_adjoint", adjoint, ALGEBRA_TOLERANCE));

    checks.extend(segal_bargmann_checks(field, 8)?);

    let grid = config.grid();
    let mut oracle_inputs = Vec::with_capacity(oracle_pairs);
    for k in 0..oracle_pairs {
        let alpha = uniform_pair(&mut rng, 1.5);
        let psi = states[k % samples].clone();
        let phi = magnetic_translate(&partners[k % samples], alpha);
        oracle_inputs.push((psi, phi));
    }
    let oracle = oracle_inputs
        .par_iter()
        .map(|(psi, phi)| Ok((psi.inner(phi)? - quad_inner(psi, phi, &grid)?).norm() / (psi.norm() * phi.norm())))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new("oracle_agreement", max_of(oracle), ORACLE_TOLERANCE));

    // h√b is held fixed, so residuals in units of b are comparable across fields
    let coarse = Grid2D::new(8.0 / b.sqrt(), 257)?;
    let fine = Grid2D::new(8.0 / b.sqrt(), 513)?;
    let phi0_residual = grid_hamiltonian_residual(&make_phi0(field), 0, &coarse) / b;
    checks.push(Check::new("hamiltonian_grid_residual", phi0_residual, GRID_TOLERANCE));
    let excited = landau_state(field, 1, 0)?;
    let ratio = grid_hamiltonian_residual(&excited, 1, &coarse) / grid_hamiltonian_residual(&excited, 1, &fine);
    checks.push(Check::new("hamiltonian_grid_order", (ratio - 4.0).abs(), GRID_ORDER_TOLERANCE));

    let s0 = ClassicalState::new([0.3, -0.2], [1.1, 0.4], field);
    let dt = cyclotron_period(field) / 1000.0;
    let traj = simulate_orbit(&s0, dt, 10_000)?;
    let c0 = orbit_center(&s0);
    let drift = max_of(traj.states.iter().map(|s| {
        let c = orbit_center(s);
        (c[0] - c0[0]).abs().max((c[1] - c0[1]).abs())
    }));
    checks.push(Check::new("classical_center_conservation", drift, CENTER_TOLERANCE));
    let center = |i: usize| move |s: &ClassicalState| orbit_center(s)[i];
    let brackets = max_of([
        poisson_bracket_fd(classical_energy, center(0), &s0, DEFAULT_FD_STEP).abs(),
        poisson_bracket_fd(classical_energy, center(1), &s0, DEFAULT_FD_STEP).abs(),
    ]);
    checks.push(Check::new("classical_center_brackets", brackets, BRACKET_TOLERANCE));

    let subcritical = LatticeSpec::square_with_density(0.5)?;
    let window = generate_ggf(&pair, &landau_state(field, config.level, 0)?, &subcritical, 2)?;
    let system = lowdin_orthonormalize(&window, &gram_matrix(&window)?)?;
    let out = gram_of_states(&system.states)?;
    let n = out.dim();
    let identity_error = max_of((0..n * n).map(|k| {
        let target = if k / n == k % n { 1.0 } else { 0.0 };
        (out.entries[(k / n, k % n)] - target).norm()
    }));
    checks.push(Check::new("lowdin_orthonormality", identity_error, LOWDIN_TOLERANCE));
    let e = Complex::new(field.landau_energy(config.level), 0.0);
    let level = system
        .states
        .par_iter()
        .map(|s| Ok(apply_hamiltonian(s).sub(&s.scale(e))?.norm()))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::new("lowdin_level_preservation", max_of(level), LEVEL_TOLERANCE));

    debug_assert_eq!(checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), VERIFY_CHECKS);
    Ok(checks)
}
