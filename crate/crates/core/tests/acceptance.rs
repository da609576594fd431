//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::Command as Process;
use std::time::{Duration, Instant};

use landau_core::classical::{
    classical_energy, cyclotron_period, orbit_center, poisson_bracket_fd, simulate_orbit, ClassicalState,
    DEFAULT_FD_STEP,
};
use landau_core::bargmann::{sb_apply, sb_inner, to_bargmann_with_degree, SbOperator};
use landau_core::cli::{run_config, validate, Cli};
use landau_core::frames::{balian_low_sweep, weak_ccr_check, LatticeSpec};
use landau_core::numerics::{quad_inner, Grid2D};
use landau_core::operators::{
    apply_g, apply_hamiltonian, apply_k, apply_ladder, exp_g, landau_state, magnetic_translate, GaborPair, Ladder,
};
use landau_core::states::{make_phi0, random_state, RandomStateSpec};
use landau_core::{Complex, MagneticField, QuantumState};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn field(b: f64) -> MagneticField {
    MagneticField::new(b).unwrap()
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn commutator(
    psi: &QuantumState,
    f: &dyn Fn(&QuantumState) -> QuantumState,
    g: &dyn Fn(&QuantumState) -> QuantumState,
    expected: Complex,
) -> f64 {
    let comm = f(&g(psi)).sub(&g(&f(psi))).unwrap();
    comm.sub(&psi.scale(expected)).unwrap().norm() / psi.norm()
}

fn spectrum() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for b in [0.5, 1.0, 2.0] {
        let f = field(b);
        for n in 0..=5 {
            for m in 0..=5 {
                let psi = landau_state(f, n, m).unwrap();
                let e = b * (n as f64 + 0.5);
                let r = apply_hamiltonian(&psi).sub(&psi.scale(c(e, 0.0))).unwrap().norm();
                worst = worst.max(r);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-11 && elapsed < Duration::from_secs(1),
        format!("max residual {worst:.3e} (< 1e-11), {elapsed:.2?} (< 1 s)"),
    )
}

fn algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spec = RandomStateSpec { terms: 2, max_degree: 4, max_linear: 2.0 };
    let mut worst: f64 = 0.0;
    let k = |i: usize| move |s: &QuantumState| apply_k(s, i).unwrap();
    let g = |i: usize| move |s: &QuantumState| apply_g(s, i).unwrap();
    let l = |w: Ladder| move |s: &QuantumState| apply_ladder(s, w);
    for trial in 0..20 {
        let b = [0.5, 1.0, 2.5][trial % 3];
        let psi = random_state(field(b), &mut rng, spec);
        let i = c(0.0, 1.0);
        worst = worst.max(commutator(&psi, &k(1), &k(2), i));
        worst = worst.max(commutator(&psi, &g(1), &g(2), -i / b));
        for a in 1..=2 {
            for d in 1..=2 {
                worst = worst.max(commutator(&psi, &k(a), &g(d), c(0.0, 0.0)));
            }
        }
        worst = worst.max(commutator(&psi, &l(Ladder::A), &l(Ladder::ADag), c(1.0, 0.0)));
        worst = worst.max(commutator(&psi, &l(Ladder::B), &l(Ladder::BDag), c(1.0, 0.0)));
    }
    outcome(worst < 1e-11, format!("max commutator residual {worst:.3e} over 20 states (< 1e-11)"))
}

fn weyl_phase() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let b = [1.0, 0.7, 1.9][trial % 3];
        let psi = random_state(field(b), &mut rng, RandomStateSpec::default());
        let t: f64 = rng.gen_range(-2.0..2.0);
        let s: f64 = rng.gen_range(-2.0..2.0);
        // e^{itG̃1} = e^{i(-bt)G1}
        let x = |phi: &QuantumState| exp_g(phi, 1, -b * t).unwrap();
        let p = |phi: &QuantumState| exp_g(phi, 2, s).unwrap();
        let lhs = x(&p(&psi));
        let rhs = p(&x(&psi)).scale(Complex::from_polar(1.0, -s * t));
        worst = worst.max(lhs.distance(&rhs).unwrap());
    }
    outcome(worst < 1e-11, format!("max residual {worst:.3e} over 10 (t, s) (< 1e-11)"))
}

fn weak_ccr() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let f = field([1.0, 0.6, 2.2, 1.3][trial % 4]);
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let phi = random_state(f, &mut rng, RandomStateSpec::default());
        let r = weak_ccr_check(&GaborPair::landau(f), &psi, &phi).unwrap().norm() / (psi.norm() * phi.norm());
        worst = worst.max(r);
    }
    outcome(worst < 1e-10, format!("max residual {worst:.3e} over 20 pairs (< 1e-10)"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let b = [1.0, 0.5, 2.0][trial % 3];
        let f = field(b);
        let grid = Grid2D::new(10.0 / b.sqrt(), 401).unwrap();
        let psi = random_state(f, &mut rng, RandomStateSpec::default());
        let mut phi = random_state(f, &mut rng, RandomStateSpec::default());
        if trial % 2 == 0 {
            let alpha = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            phi = magnetic_translate(&phi, alpha);
        }
        let exact = psi.inner(&phi).unwrap();
        let quad = quad_inner(&psi, &phi, &grid).unwrap();
        worst = worst.max((exact - quad).norm() / (psi.norm() * phi.norm()));
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-7 && elapsed < Duration::from_secs(30),
        format!("max relative error {worst:.3e} over 50 pairs (< 1e-7), {elapsed:.2?} (< 30 s)"),
    )
}

fn classical() -> Outcome {
    let mut drift: f64 = 0.0;
    let mut bracket: f64 = 0.0;
    for (b, q, p) in [(1.0, [0.0, 0.0], [1.0, 0.0]), (2.0, [0.3, -0.2], [1.1, 0.4]), (0.5, [-1.0, 2.0], [0.2, -0.7])] {
        let f = field(b);
        let s0 = ClassicalState::new(q, p, f);
        let dt = cyclotron_period(f) / 1000.0;
        let traj = simulate_orbit(&s0, dt, 10_000).unwrap();
        let c0 = orbit_center(&s0);
        for s in &traj.states {
            let cc = orbit_center(s);
            drift = drift.max((cc[0] - c0[0]).abs().max((cc[1] - c0[1]).abs()));
        }
        let c1 = |s: &ClassicalState| orbit_center(s)[0];
        let c2 = |s: &ClassicalState| orbit_center(s)[1];
        bracket = bracket.max(poisson_bracket_fd(classical_energy, c1, &s0, DEFAULT_FD_STEP).abs());
        bracket = bracket.max(poisson_bracket_fd(classical_energy, c2, &s0, DEFAULT_FD_STEP).abs());
    }
    outcome(
        drift < 1e-8 && bracket < 1e-6,
        format!("centre drift {drift:.3e} over 10 periods (< 1e-8), max |{{H, centre}}| {bracket:.3e} (< 1e-6)"),
    )
}

fn segal_bargmann() -> Outcome {
    let mut gram: f64 = 0.0;
    let mut intertwining: f64 = 0.0;
    for b in [1.0, 0.8, 2.0] {
        let f = field(b);
        let mut basis = vec![make_phi0(f)];
        for _ in 0..8 {
            let next = apply_ladder(basis.last().unwrap(), Ladder::BDag).normalized().unwrap();
            basis.push(next);
        }
        let images: Vec<_> = basis.iter().map(|s| to_bargmann_with_degree(s, 9).unwrap()).collect();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let d = basis[i].inner(&basis[j]).unwrap() - sb_inner(&images[i], &images[j]).unwrap();
                gram = gram.max(d.norm());
            }
            for (op, sb) in [(Ladder::B, SbOperator::B), (Ladder::BDag, SbOperator::BDag)] {
                let lhs = to_bargmann_with_degree(&apply_ladder(&basis[i], op), 9).unwrap();
                let rhs = sb_apply(&images[i], sb).unwrap();
                let diff = lhs.add(&rhs.scale(c(-1.0, 0.0))).unwrap();
                intertwining = intertwining.max(sb_inner(&diff, &diff).unwrap().re.max(0.0).sqrt());
            }
        }
    }
    outcome(
        gram < 1e-10 && intertwining < 1e-10,
        format!("Gram mismatch {gram:.3e}, intertwining residual {intertwining:.3e} (both < 1e-10)"),
    )
}

struct Sweeps {
    critical: landau_core::frames::BalianLowReport,
    subcritical: landau_core::frames::BalianLowReport,
    elapsed: Duration,
}

fn sweeps() -> Sweeps {
    let start = Instant::now();
    let f = field(1.0);
    let pair = GaborPair::landau(f);
    let phi = make_phi0(f);
    let radii = [1, 2, 3, 4];
    let critical = balian_low_sweep(&pair, &phi, &LatticeSpec::square_with_density(1.0).unwrap(), &radii).unwrap();
    let subcritical = balian_low_sweep(&pair, &phi, &LatticeSpec::square_with_density(0.5).unwrap(), &radii).unwrap();
    Sweeps { critical, subcritical, elapsed: start.elapsed() }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn balian_low(s: &Sweeps) -> Outcome {
    let xp: Vec<f64> = s.critical.records.iter().map(|r| r.loc_xp()).collect();
    let x12: Vec<f64> = s.critical.records.iter().map(|r| r.loc_x1x2()).collect();
    let sub = &s.subcritical.records;
    let dxp = (sub[3].loc_xp() - sub[2].loc_xp()).abs();
    let dx12 = (sub[3].loc_x1x2() - sub[2].loc_x1x2()).abs();
    let passed = strictly_increasing(&xp)
        && strictly_increasing(&x12)
        && dxp < 1e-3
        && dx12 < 1e-3
        && s.elapsed < Duration::from_secs(300);
    outcome(
        passed,
        format!(
            "critical locXP {xp:.4?}, locX1X2 {x12:.4?} increasing; half density R=3->4 changes {dxp:.2e}, {dx12:.2e} (< 1e-3); {:.2?} (< 5 min)",
            s.elapsed
        ),
    )
}

fn gram_spectrum(s: &Sweeps) -> Outcome {
    let crit: Vec<f64> = s.critical.records.iter().map(|r| r.lambda_min).collect();
    let sub: Vec<f64> = s.subcritical.records.iter().map(|r| r.lambda_min).collect();
    let decreasing = crit.windows(2).all(|w| w[1] < w[0]);
    let stable = sub[3] > 0.5 * sub[0];
    outcome(
        decreasing && stable,
        format!("critical lambda_min {crit:.4?} decreasing; half density lambda_min(4)/lambda_min(1) = {:.4}", sub[3] / sub[0]),
    )
}

fn determinism() -> Outcome {
    let mut identical = true;
    for args in [&["landau", "verify", "--seed", "11"][..], &["landau", "balian-low", "--seed", "11"]] {
        let config = validate(&Cli::try_parse_from(args).unwrap()).unwrap();
        let a = run_config(&config).unwrap();
        let b = run_config(&config).unwrap();
        identical &= a == b;
    }
    let dir = std::env::temp_dir().join(format!("landau-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for cmd in ["verify", "balian-low"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{cmd}-{run}.json"));
            let status = Process::new(env!("CARGO_BIN_EXE_landau"))
                .args([cmd, "--seed", "11", "--out"])
                .arg(&path)
                .status()
                .unwrap();
            identical &= status.success();
            outputs.push(std::fs::read(&path).unwrap());
        }
        identical &= outputs[0] == outputs[1];
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(identical, "verify and balian-low reports byte-identical across runs".into())
}

fn main() {
    let sweeps = sweeps();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("spectrum", spectrum()),
        ("algebra", algebra()),
        ("weyl phase", weyl_phase()),
        ("weak CCR", weak_ccr()),
        ("oracle equivalence", oracle_equivalence()),
        ("classical-quantum correspondence", classical()),
        ("Segal-Bargmann", segal_bargmann()),
        ("Balian-Low", balian_low(&sweeps)),
        ("Gram spectrum", gram_spectrum(&sweeps)),
        ("determinism", determinism()),
    ];
    let mut failures = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, o.detail);
        failures += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
