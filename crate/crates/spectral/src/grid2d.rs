use rustfft::num_complex::Complex64;

use crate::basis::SpectralBasis;
use crate::error::Result;
use crate::space::SpectralSpace;

/// Tensor-product grid of two 1D bases, possibly with different boundary
/// conditions per axis.
///
/// Fields are stored column-major, `index = i + nx * j` with `i` along `x`,
/// and the eigenvalues are `lambda[i + nx * j] = lambda_x[i] + lambda_y[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    bx: SpectralBasis,
    by: SpectralBasis,
    lambda: Vec<f64>,
}

impl Grid2D {
    pub fn new(bx: SpectralBasis, by: SpectralBasis) -> Result<Self> {
        let (lx, ly) = (bx.lambda(), by.lambda());
        let mut lambda = Vec::with_capacity(lx.len() * ly.len());
        for &b in ly {
            for &a in lx {
                lambda.push(a + b);
            }
        }
        Ok(Self { bx, by, lambda })
    }

    /// Same basis along both axes.
    pub fn square(basis: SpectralBasis) -> Self {
        Self::new(basis.clone(), basis).expect("identical axes")
    }

    pub fn basis_x(&self) -> &SpectralBasis {
        &self.bx
    }

    pub fn basis_y(&self) -> &SpectralBasis {
        &self.by
    }

    pub fn nx(&self) -> usize {
        self.bx.size()
    }

    pub fn ny(&self) -> usize {
        self.by.size()
    }

    /// `lambda_x[i] + lambda_y[j]` at `(i, j)`.
    pub fn lambda_sum(&self, i: usize, j: usize) -> f64 {
        self.lambda[i + self.nx() * j]
    }

    /// Stored points in storage order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let xs = self.bx.points();
        let ys = self.by.points();
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                out.push((x, y));
            }
        }
        out
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let (nx, ny) = (self.nx(), self.ny());
        self.bx.transform_lines(data, inverse);
        let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
        for j in 0..ny {
            for i in 0..nx {
                t[j + ny * i] = data[i + nx * j];
            }
        }
        self.by.transform_lines(&mut t, inverse);
        for j in 0..ny {
            for i in 0..nx {
                data[i + nx * j] = t[j + ny * i];
            }
        }
    }
}

impl SpectralSpace for Grid2D {
    fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    fn weight(&self) -> f64 {
        self.bx.h() * self.by.h()
    }

    fn forward_complex_inplace(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    fn inverse_complex_inplace(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn partner(&self, k: usize) -> usize {
        let nx = self.nx();
        let (i, j) = (k % nx, k / nx);
        self.bx.partner(i) + nx * self.by.partner(j)
    }
}
