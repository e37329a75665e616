//! Explicit dense operators assembled from trigonometric sums, independent of
//! the fast transforms.

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;

use crate::basis::{BasisKind, SpectralBasis};
use crate::grid2d::Grid2D;
use crate::space::SpectralSpace;

/// Unitary eigenvector matrix `E` with `D2 = E diag(lambda) E^H`.
pub fn eigenvectors(basis: &SpectralBasis) -> DMatrix<Complex64> {
    let m = basis.size();
    let n = basis.n();
    match basis.kind() {
        BasisKind::Periodic => {
            let mu = basis.mu();
            let xs = basis.points();
            let s = 1.0 / (n as f64).sqrt();
            DMatrix::from_fn(m, m, |j, k| {
                let freq = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                Complex64::from_polar(s, mu * freq * (xs[j] - basis.domain().0))
            })
        }
        BasisKind::Dirichlet => {
            let s = (2.0 / n as f64).sqrt();
            DMatrix::from_fn(m, m, |l, k| {
                let arg = std::f64::consts::PI * ((k + 1) * (l + 1)) as f64 / n as f64;
                Complex64::new(s * arg.sin(), 0.0)
            })
        }
    }
}

fn real_part(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    m.map(|z| z.re)
}

fn assemble(e: &DMatrix<Complex64>, vals: &[f64]) -> DMatrix<f64> {
    let d = DMatrix::from_fn(vals.len(), vals.len(), |i, j| {
        if i == j {
            Complex64::new(vals[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    real_part(&(e * d * e.adjoint()))
}

/// Dense `f(D2)` on a 1D basis.
pub fn spectral_function_matrix<F: Fn(f64) -> f64>(basis: &SpectralBasis, f: F) -> DMatrix<f64> {
    let vals: Vec<f64> = basis.lambda().iter().map(|&l| f(l)).collect();
    assemble(&eigenvectors(basis), &vals)
}

/// Dense second-derivative matrix `D2` from explicit trigonometric sums.
///
/// Periodic: `(D2)_{jl} = (1/N) sum_k lambda_k cos(mu k (x_j - x_l))`.
/// Dirichlet: `(D2)_{jl} = (2/N) sum_k lambda_k sin(pi k j / N) sin(pi k l / N)`.
pub fn second_derivative_matrix(basis: &SpectralBasis) -> DMatrix<f64> {
    let m = basis.size();
    let n = basis.n();
    let lam = basis.lambda();
    match basis.kind() {
        BasisKind::Periodic => {
            let xs = basis.points();
            let mu = basis.mu();
            DMatrix::from_fn(m, m, |j, l| {
                (0..n)
                    .map(|k| {
                        let freq = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                        lam[k] * (mu * freq * (xs[j] - xs[l])).cos()
                    })
                    .sum::<f64>()
                    / n as f64
            })
        }
        BasisKind::Dirichlet => {
            let pi = std::f64::consts::PI;
            DMatrix::from_fn(m, m, |j, l| {
                (1..n)
                    .map(|k| {
                        let a = pi * (k * (j + 1)) as f64 / n as f64;
                        let b = pi * (k * (l + 1)) as f64 / n as f64;
                        lam[k - 1] * a.sin() * b.sin()
                    })
                    .sum::<f64>()
                    * 2.0
                    / n as f64
            })
        }
    }
}

/// `I_y (x) D2_x + D2_y (x) I_x` on column-major 2D fields.
pub fn second_derivative_matrix_2d(grid: &Grid2D) -> DMatrix<f64> {
    let dx = second_derivative_matrix(grid.basis_x());
    let dy = second_derivative_matrix(grid.basis_y());
    let ix = DMatrix::<f64>::identity(grid.nx(), grid.nx());
    let iy = DMatrix::<f64>::identity(grid.ny(), grid.ny());
    iy.kronecker(&dx) + dy.kronecker(&ix)
}

/// Dense `f(D)` for the 2D Laplacian-type operator via the Kronecker eigenbasis.
pub fn spectral_function_matrix_2d<F: Fn(f64) -> f64>(grid: &Grid2D, f: F) -> DMatrix<f64> {
    let e = eigenvectors(grid.basis_y()).kronecker(&eigenvectors(grid.basis_x()));
    let vals: Vec<f64> = grid.lambda().iter().map(|&l| f(l)).collect();
    assemble(&e, &vals)
}
