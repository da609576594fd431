//! Brute-force numerics used as independent oracles, plus the dense Hermitian
//! eigensolver shared with the frame analysis.

use nalgebra::DMatrix;
use num_complex::Complex64 as Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::states::QuantumState;

/// Uniform grid on `[-L, L]²` with `N` points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2D {
    extent: f64,
    points: usize,
}

impl Grid2D {
    /// Requires `N ≥ 16`, odd `N` (composite Simpson), and spacing below 1.
    pub fn new(extent: f64, points: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidParameter(format!("grid extent must be positive, got {extent}")));
        }
        if points < 16 {
            return Err(Error::InvalidParameter(format!("grid needs at least 16 points per axis, got {points}")));
        }
        if points % 2 == 0 {
            return Err(Error::InvalidParameter(format!("Simpson's rule needs an odd point count, got {points}")));
        }
        let grid = Self { extent, points };
        if grid.spacing() >= 1.0 {
            return Err(Error::InvalidParameter(format!("grid spacing {} is not below 1", grid.spacing())));
        }
        Ok(grid)
    }

    /// Default oracle grid for field `b`: `L = 10/√b`, `N = 401`.
    pub fn default_for(b: f64) -> Self {
        Self { extent: 10.0 / b.sqrt(), points: 401 }
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.points - 1) as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.extent + i as f64 * self.spacing()
    }

    fn simpson_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.points - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    }
}

/// Fixed-shape pairwise summation, independent of thread count.
fn pairwise_sum(values: &[Complex]) -> Complex {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Composite Simpson approximation of `∫∫ f` over the grid.
pub fn quad2d<F>(f: F, grid: &Grid2D) -> Result<Complex>
where
    F: Fn([f64; 2]) -> Complex + Sync,
{
    let n = grid.points;
    let rows: Vec<Result<Complex>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = grid.coordinate(i);
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let v = f([x1, grid.coordinate(j)]);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite(format!("integrand at ({x1}, {})", grid.coordinate(j))));
                }
                row.push(v * grid.simpson_weight(j));
            }
            Ok(pairwise_sum(&row) * grid.simpson_weight(i))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let h = grid.spacing();
    Ok(pairwise_sum(&rows) * (h * h / 9.0))
}

/// Quadrature estimate of `⟨ψ, φ⟩` from pointwise values.
pub fn quad_inner(psi: &QuantumState, phi: &QuantumState, grid: &Grid2D) -> Result<Complex> {
    quad2d(|x| psi.evaluate(x).conj() * phi.evaluate(x), grid)
}

/// Discrete L² norm of `(H_grid - E_level) ψ` over interior grid points.
///
/// `H = (1/2)[-Δ - i b (x2 ∂1 - x1 ∂2) + (b²/4)|x|²]`, with the five-point
/// Laplacian and central first differences, both second order in `h`.
pub fn grid_hamiltonian_residual(psi: &QuantumState, level: usize, grid: &Grid2D) -> f64 {
    let b = psi.field().strength();
    let energy = psi.field().landau_energy(level);
    let n = grid.points;
    let h = grid.spacing();
    let values: Vec<Complex> = (0..n * n)
        .into_par_iter()
        .map(|k| psi.evaluate([grid.coordinate(k / n), grid.coordinate(k % n)]))
        .collect();
    let at = |i: usize, j: usize| values[i * n + j];
    let rows: Vec<f64> = (1..n - 1)
        .into_par_iter()
        .map(|i| {
            let x1 = grid.coordinate(i);
            let mut acc = 0.0;
            for j in 1..n - 1 {
                let x2 = grid.coordinate(j);
                let c = at(i, j);
                let lap = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * c) / (h * h);
                let d1 = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
                let d2 = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
                let rotation = Complex::new(0.0, -b) * (x2 * d1 - x1 * d2);
                let hpsi = 0.5 * (-lap + rotation + 0.25 * b * b * (x1 * x1 + x2 * x2) * c);
                acc += (hpsi - energy * c).norm_sqr();
            }
            acc
        })
        .collect();
    (rows.iter().sum::<f64>() * h * h).sqrt()
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, phase-fixed so the first significant
    /// component is real and positive.
    pub vectors: DMatrix<Complex>,
}

const JACOBI_MAX_SWEEPS: usize = 100;
const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Cyclic Jacobi diagonalization of a dense Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies the
/// real symmetric Jacobi rotation. Sweeps run in fixed row-major pivot order.
pub fn hermitian_eig(m: &DMatrix<Complex>) -> Result<HermitianEigen> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::BadShape { rows: m.nrows(), cols: m.ncols() });
    }
    let scale = m.norm().max(1.0);
    let deviation = (m - m.adjoint()).norm();
    if !deviation.is_finite() || deviation > HERMITIAN_TOLERANCE * scale {
        return Err(Error::NonHermitian { deviation });
    }

    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, 0.0);
    }
    let mut v = DMatrix::<Complex>::identity(n, n);
    let target = f64::EPSILON * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE || r < 1e-3 * target / n as f64 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let w_pp = Complex::new(c, 0.0);
                let w_pq = Complex::new(s, 0.0);
                let w_qp = -phase.conj() * s;
                let w_qq = phase.conj() * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * w_pp + aiq * w_qp;
                    a[(i, q)] = aip * w_pq + aiq * w_qq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = w_pp.conj() * apj + w_qp.conj() * aqj;
                    a[(q, j)] = w_pq.conj() * apj + w_qq.conj() * aqj;
                }
                a[(p, q)] = Complex::new(0.0, 0.0);
                a[(q, p)] = Complex::new(0.0, 0.0);
                a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * w_pp + viq * w_qp;
                    v[(i, q)] = vip * w_pq + viq * w_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = DMatrix::<Complex>::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let column = v.column(src);
        let pivot = column.iter().copied().find(|z| z.norm() > 1e-8).unwrap_or(Complex::new(1.0, 0.0));
        let fix = pivot.conj() / pivot.norm();
        for i in 0..n {
            vectors[(i, col)] = column[i] * fix;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{landau_state, magnetic_translate};
    use crate::states::{make_phi0, MagneticField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid2D::new(10.0, 401).is_ok());
        assert!(Grid2D::new(10.0, 400).is_err());
        assert!(Grid2D::new(10.0, 15).is_err());
        assert!(Grid2D::new(100.0, 101).is_err());
        assert!(Grid2D::new(-1.0, 101).is_err());
    }

    #[test]
    fn phi0_normalization_by_quadrature() {
        let f = MagneticField::new(1.0).unwrap();
        let phi = make_phi0(f);
        let grid = Grid2D::new(10.0, 401).unwrap();
        let v = quad_inner(&phi, &phi, &grid).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-9);
        let odd = quad2d(|x| x[0] * phi.evaluate(x).norm_sqr() * c(1.0, 0.0), &grid).unwrap();
        assert!(odd.norm() < 1e-12);
    }

    #[test]
    fn translated_overlap_by_quadrature() {
        let f = MagneticField::new(1.0).unwrap();
        let phi = make_phi0(f);
        let t = magnetic_translate(&phi, [2.0, 0.0]);
        let grid = Grid2D::new(10.0, 401).unwrap();
        let v = quad_inner(&phi, &t, &grid).unwrap();
        assert!((v.norm() - (-1.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let grid = Grid2D::new(2.0, 17).unwrap();
        let r = quad2d(|x| if x[0] == 0.0 { c(f64::NAN, 0.0) } else { c(1.0, 0.0) }, &grid);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn grid_residual_converges_at_second_order() {
        let f = MagneticField::new(1.0).unwrap();
        for (psi, level) in [(make_phi0(f), 0), (landau_state(f, 1, 0).unwrap(), 1)] {
            let coarse = grid_hamiltonian_residual(&psi, level, &Grid2D::new(8.0, 257).unwrap());
            let fine = grid_hamiltonian_residual(&psi, level, &Grid2D::new(8.0, 513).unwrap());
            if level == 0 {
                assert!(coarse < 5e-4, "coarse residual {coarse}");
            }
            let ratio = coarse / fine;
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        }
        let zero = QuantumState::zero(f);
        assert_eq!(grid_hamiltonian_residual(&zero, 0, &Grid2D::new(8.0, 33).unwrap()), 0.0);
    }

    #[test]
    fn eig_small_cases() {
        let id = DMatrix::<Complex>::identity(4, 4);
        let e = hermitian_eig(&id).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));

        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let e = hermitian_eig(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NonHermitian { .. })));
        let m = DMatrix::<Complex>::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m), Err(Error::BadShape { .. })));
    }

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&g + g.adjoint()) * c(0.5, 0.0)
    }

    #[test]
    fn eig_random_reconstruction() {
        let m = random_hermitian(20, 42);
        let e = hermitian_eig(&m).unwrap();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            20,
            e.values.iter().map(|&v| c(v, 0.0)),
        ));
        let resid = (&m * &e.vectors - &e.vectors * &lambda).norm();
        assert!(resid < 1e-10 * m.norm(), "residual {resid}");
        let unit = (e.vectors.adjoint() * &e.vectors - DMatrix::identity(20, 20)).norm();
        assert!(unit < 1e-10);
        let trace: f64 = (0..20).map(|i| m[(i, i)].re).sum();
        let sum: f64 = e.values.iter().sum();
        assert!((trace - sum).abs() < 1e-11 * trace.abs().max(1.0));
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eig_agrees_with_nalgebra() {
        let m = random_hermitian(12, 7);
        let ours = hermitian_eig(&m).unwrap();
        let mut theirs: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.values.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_is_deterministic() {
        let m = random_hermitian(15, 3);
        assert_eq!(hermitian_eig(&m).unwrap(), hermitian_eig(&m).unwrap());
    }
}
