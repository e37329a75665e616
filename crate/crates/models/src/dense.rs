//! Dense assembled semi-discretizations, independent of the spectral
//! transforms, for cross-checking the matrix-free models on small grids.

use epavf_core::{BlockState, BlockSystem, Component};
use epavf_spectral::dense::{second_derivative_matrix, second_derivative_matrix_2d};
use epavf_spectral::SpectralGrid;
use nalgebra::DMatrix;

use crate::error::Result;
use crate::kgs::KgsModel;
use crate::kgz::KgzModel;

/// Dense `D2` on a 1D or 2D grid.
pub fn dense_d2(grid: &SpectralGrid) -> DMatrix<f64> {
    match grid {
        SpectralGrid::OneD(b) => second_derivative_matrix(b),
        SpectralGrid::TwoD(g) => second_derivative_matrix_2d(g),
    }
}

fn pair(a: DMatrix<f64>, b: DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&a);
    m.view_mut((n, n), (n, n)).copy_from(&b);
    m
}

/// `s [[0, I], [-I, 0]]`.
fn scaled_j(n: usize, s: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(j, n + j)] = s;
        m[(n + j, j)] = -s;
    }
    m
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// KGS system with `L1 = diag(-2 beta D2, -2 beta D2)`, `L2 = diag(-D2 + I/eps^2, eps^2 I)`.
pub fn kgs_dense_system(model: &KgsModel) -> Result<BlockSystem> {
    let d2 = symmetrize(dense_d2(model.grid()));
    let n = d2.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let p = model.params();
    let e2 = p.eps * p.eps;
    let l1 = &d2 * (-2.0 * p.beta);
    let c1 = Component::new(scaled_j(n, 0.5), pair(l1.clone(), l1))?;
    let c2 = Component::new(scaled_j(n, 1.0 / e2), pair(&id / e2 - &d2, &id * e2))?;
    Ok(BlockSystem::from_fns(
        vec![c1, c2],
        move |y: &BlockState| {
            let (qp, uv) = (y.block(0), y.block(1));
            -(0..n).map(|j| (qp[j].powi(2) + qp[n + j].powi(2)) * uv[j]).sum::<f64>()
        },
        move |i, y: &BlockState| {
            let (qp, uv) = (y.block(0), y.block(1));
            let mut g = vec![0.0; 2 * n];
            for j in 0..n {
                if i == 0 {
                    g[j] = -2.0 * qp[j] * uv[j];
                    g[n + j] = -2.0 * qp[n + j] * uv[j];
                } else {
                    g[j] = -(qp[j].powi(2) + qp[n + j].powi(2));
                }
            }
            g
        },
    )?)
}

/// KGZ system with `L1 = diag(2/eps^2 - 2 D2, 2 eps^2)`, `L2 = diag(I, -D2)`.
pub fn kgz_dense_system(model: &KgzModel) -> Result<BlockSystem> {
    let d2 = symmetrize(dense_d2(model.grid()));
    let n = d2.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let e2 = model.params().eps.powi(2);
    let c1 = Component::new(
        scaled_j(n, 0.5 / e2),
        pair(&id * (2.0 / e2) - &d2 * 2.0, &id * (2.0 * e2)),
    )?;
    let c2 = Component::new(scaled_j(n, -1.0), pair(id.clone(), -&d2))?;
    Ok(BlockSystem::from_fns(
        vec![c1, c2],
        move |y: &BlockState| {
            let (ef, mn) = (y.block(0), y.block(1));
            (0..n).map(|j| mn[j] * ef[j] * ef[j]).sum::<f64>()
        },
        move |i, y: &BlockState| {
            let (ef, mn) = (y.block(0), y.block(1));
            let mut g = vec![0.0; 2 * n];
            for j in 0..n {
                g[j] = if i == 0 { 2.0 * mn[j] * ef[j] } else { ef[j] * ef[j] };
            }
            g
        },
    )?)
}
