use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SpectralError};
use crate::space::SpectralSpace;

/// Boundary condition of a 1D spectral basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Fourier basis on `N` equispaced points `x_j = a + j h`, `j = 0..N-1`.
    Periodic,
    /// Sine basis on the `N - 1` interior points `x_l = a + l h`, `l = 1..N-1`.
    Dirichlet,
}

/// Eigenvalues of the spectral second-derivative operator.
///
/// Periodic: `-(mu k)^2` for `k = 0, 1, .., N/2, -N/2+1, .., -1`.
/// Dirichlet: `-(mu k / 2)^2` for `k = 1, .., N-1`. Here `mu = 2 pi / (b - a)`.
pub fn second_derivative_eigenvalues(kind: BasisKind, n: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    if n < 4 {
        return Err(SpectralError::InvalidGrid(format!("N = {n} is below 4")));
    }
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(SpectralError::InvalidGrid(format!("degenerate domain ({a}, {b})")));
    }
    let mu = 2.0 * PI / (b - a);
    Ok(match kind {
        BasisKind::Periodic => {
            if n % 2 != 0 {
                return Err(SpectralError::InvalidGrid(format!("periodic N = {n} must be even")));
            }
            (0..n)
                .map(|j| {
                    let k = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                    -(mu * k).powi(2)
                })
                .collect()
        }
        BasisKind::Dirichlet => (1..n).map(|k| -(0.5 * mu * k as f64).powi(2)).collect(),
    })
}

/// One-dimensional Fourier or sine basis with its transform plans.
///
/// The periodic forward transform is the unnormalized DFT and the inverse
/// carries the `1/N`. The Dirichlet transform is the orthonormal DST-I
/// `sqrt(2/N) sum_l v_l sin(pi k l / N)`, which is its own inverse; it is
/// evaluated through a length-`2N` FFT of the odd extension.
#[derive(Clone)]
pub struct SpectralBasis {
    kind: BasisKind,
    n: usize,
    a: f64,
    b: f64,
    lambda: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralBasis")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

impl PartialEq for SpectralBasis {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n && self.a == other.a && self.b == other.b
    }
}

impl SpectralBasis {
    pub fn new(kind: BasisKind, n: usize, a: f64, b: f64) -> Result<Self> {
        let lambda = second_derivative_eigenvalues(kind, n, a, b)?;
        let mut planner = FftPlanner::new();
        let len = match kind {
            BasisKind::Periodic => n,
            BasisKind::Dirichlet => 2 * n,
        };
        Ok(Self {
            kind,
            n,
            a,
            b,
            lambda,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn periodic(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(BasisKind::Periodic, n, a, b)
    }

    pub fn dirichlet(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(BasisKind::Dirichlet, n, a, b)
    }

    /// Basis with spacing `h`, requiring `(b - a) / h` to be an integer.
    pub fn with_spacing(kind: BasisKind, h: f64, a: f64, b: f64) -> Result<Self> {
        let ratio = (b - a) / h;
        let n = ratio.round();
        if !(h > 0.0) || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(SpectralError::InvalidGrid(format!(
                "spacing {h} does not divide ({a}, {b})"
            )));
        }
        Self::new(kind, n as usize, a, b)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Number of intervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn mu(&self) -> f64 {
        2.0 * PI / (self.b - self.a)
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Stored grid points.
    pub fn points(&self) -> Vec<f64> {
        let h = self.h();
        match self.kind {
            BasisKind::Periodic => (0..self.n).map(|j| self.a + j as f64 * h).collect(),
            BasisKind::Dirichlet => (1..self.n).map(|l| self.a + l as f64 * h).collect(),
        }
    }

    /// Number of stored values.
    pub fn size(&self) -> usize {
        match self.kind {
            BasisKind::Periodic => self.n,
            BasisKind::Dirichlet => self.n - 1,
        }
    }

    /// Transforms every contiguous line of `size()` values in `data`.
    pub(crate) fn transform_lines(&self, data: &mut [Complex64], inverse: bool) {
        let m = self.size();
        debug_assert_eq!(data.len() % m, 0);
        match self.kind {
            BasisKind::Periodic => {
                if inverse {
                    self.inverse.process(data);
                    let s = 1.0 / self.n as f64;
                    data.iter_mut().for_each(|z| *z *= s);
                } else {
                    self.forward.process(data);
                }
            }
            BasisKind::Dirichlet => {
                let n2 = 2 * self.n;
                let lines = data.len() / m;
                let mut ext = vec![Complex64::new(0.0, 0.0); n2 * lines];
                for (line, e) in data.chunks(m).zip(ext.chunks_mut(n2)) {
                    for (l, &v) in line.iter().enumerate() {
                        e[l + 1] = v;
                        e[n2 - l - 1] = -v;
                    }
                }
                self.forward.process(&mut ext);
                // sum_l v_l sin(pi k l / N) = (i / 2) Y_k.
                let scale = 0.5 * (2.0 / self.n as f64).sqrt();
                for (line, e) in data.chunks_mut(m).zip(ext.chunks(n2)) {
                    for (k, out) in line.iter_mut().enumerate() {
                        let y = e[k + 1];
                        *out = Complex64::new(-y.im, y.re) * scale;
                    }
                }
            }
        }
    }
}

impl SpectralSpace for SpectralBasis {
    fn len(&self) -> usize {
        self.size()
    }

    fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    fn weight(&self) -> f64 {
        self.h()
    }

    fn forward_complex_inplace(&self, data: &mut [Complex64]) {
        self.transform_lines(data, false);
    }

    fn inverse_complex_inplace(&self, data: &mut [Complex64]) {
        self.transform_lines(data, true);
    }

    fn partner(&self, k: usize) -> usize {
        match self.kind {
            BasisKind::Periodic => (self.n - k) % self.n,
            BasisKind::Dirichlet => k,
        }
    }
}
