use rustfft::num_complex::Complex64;

use crate::basis::SpectralBasis;
use crate::error::{check_len, Result, SpectralError};
use crate::grid2d::Grid2D;

/// Real-valued grid functions diagonalized by a fast transform, with
/// eigenvalues `lambda()` of the second-derivative operator.
///
/// Spectral multipliers are real functions of `lambda`, so they map real
/// fields to real fields; two real fields can therefore share one complex
/// transform.
pub trait SpectralSpace {
    /// Number of stored grid values (= number of coefficients).
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lambda(&self) -> &[f64];

    /// Quadrature weight of the discrete inner product.
    fn weight(&self) -> f64;

    fn forward_complex_inplace(&self, data: &mut [Complex64]);

    fn inverse_complex_inplace(&self, data: &mut [Complex64]);

    /// Index of the coefficient holding the conjugate frequency of a real
    /// field (the index itself along sine axes).
    fn partner(&self, k: usize) -> usize;

    fn forward_complex(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len("forward transform", self.len(), v.len())?;
        let mut d = v.to_vec();
        self.forward_complex_inplace(&mut d);
        Ok(d)
    }

    fn inverse_complex(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len("inverse transform", self.len(), c.len())?;
        let mut d = c.to_vec();
        self.inverse_complex_inplace(&mut d);
        Ok(d)
    }

    fn forward(&self, v: &[f64]) -> Result<Vec<Complex64>> {
        check_len("forward transform", self.len(), v.len())?;
        let mut d: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward_complex_inplace(&mut d);
        Ok(d)
    }

    /// Inverse transform keeping the real part.
    fn inverse(&self, c: &[Complex64]) -> Result<Vec<f64>> {
        check_len("inverse transform", self.len(), c.len())?;
        let mut d = c.to_vec();
        self.inverse_complex_inplace(&mut d);
        Ok(d.into_iter().map(|z| z.re).collect())
    }

    /// Coefficients of two real fields from a single complex transform.
    fn forward_pair(&self, a: &[f64], b: &[f64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        check_len("forward pair", self.len(), a.len())?;
        check_len("forward pair", self.len(), b.len())?;
        let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.forward_complex_inplace(&mut z);
        let n = z.len();
        let mut ah = Vec::with_capacity(n);
        let mut bh = Vec::with_capacity(n);
        for k in 0..n {
            let zk = z[k];
            let zc = z[self.partner(k)].conj();
            ah.push((zk + zc) * 0.5);
            let d = (zk - zc) * 0.5;
            bh.push(Complex64::new(d.im, -d.re));
        }
        Ok((ah, bh))
    }

    /// Real fields from the coefficients of two real fields.
    fn inverse_pair(&self, ah: &[Complex64], bh: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_len("inverse pair", self.len(), ah.len())?;
        check_len("inverse pair", self.len(), bh.len())?;
        let mut z: Vec<Complex64> = ah
            .iter()
            .zip(bh)
            .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
            .collect();
        self.inverse_complex_inplace(&mut z);
        Ok((z.iter().map(|w| w.re).collect(), z.iter().map(|w| w.im).collect()))
    }

    /// `F^{-1} (m . F v)` for a real multiplier `m` indexed like `lambda()`.
    fn apply_multiplier(&self, m: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        check_len("multiplier", self.len(), m.len())?;
        let mut c = self.forward(v)?;
        c.iter_mut().zip(m).for_each(|(z, &s)| *z *= s);
        self.inverse(&c)
    }

    /// The same multiplier applied to two real fields with one transform pair.
    fn apply_multiplier_pair(&self, m: &[f64], a: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_len("multiplier", self.len(), m.len())?;
        check_len("multiplier pair", self.len(), a.len())?;
        check_len("multiplier pair", self.len(), b.len())?;
        let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.forward_complex_inplace(&mut z);
        z.iter_mut().zip(m).for_each(|(w, &s)| *w *= s);
        self.inverse_complex_inplace(&mut z);
        Ok((z.iter().map(|w| w.re).collect(), z.iter().map(|w| w.im).collect()))
    }

    /// `F^{-1} (f(lambda) . F v)`.
    fn apply_spectral_function<F: Fn(f64) -> f64>(&self, f: F, v: &[f64]) -> Result<Vec<f64>>
    where
        Self: Sized,
    {
        let m = multiplier(self, f)?;
        self.apply_multiplier(&m, v)
    }

    /// Applies the 2x2 block of multipliers to the pair `(a, b)`.
    fn apply_block(&self, blk: &Block2, a: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        blk.check(self.len())?;
        let (ah, bh) = self.forward_pair(a, b)?;
        let (oa, ob) = blk.apply_coefficients(&ah, &bh);
        self.inverse_pair(&oa, &ob)
    }

    /// `weight * sum_j a_j b_j`.
    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weight() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }
}

/// `f(lambda_k)` for every eigenvalue, rejecting non-finite values.
pub fn multiplier<S: SpectralSpace + ?Sized, F: Fn(f64) -> f64>(space: &S, f: F) -> Result<Vec<f64>> {
    space
        .lambda()
        .iter()
        .map(|&l| {
            let v = f(l);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(SpectralError::NonFinite(l))
            }
        })
        .collect()
}

/// Per-mode 2x2 matrix `[[m11, m12], [m21, m22]]` of spectral multipliers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Block2 {
    pub m11: Vec<f64>,
    pub m12: Vec<f64>,
    pub m21: Vec<f64>,
    pub m22: Vec<f64>,
}

impl Block2 {
    /// Builds the block from a function of the eigenvalue.
    pub fn from_fn<S, F>(space: &S, f: F) -> Result<Self>
    where
        S: SpectralSpace + ?Sized,
        F: Fn(f64) -> [f64; 4],
    {
        let n = space.len();
        let mut b = Block2 {
            m11: Vec::with_capacity(n),
            m12: Vec::with_capacity(n),
            m21: Vec::with_capacity(n),
            m22: Vec::with_capacity(n),
        };
        for &l in space.lambda() {
            let e = f(l);
            if e.iter().any(|v| !v.is_finite()) {
                return Err(SpectralError::NonFinite(l));
            }
            b.m11.push(e[0]);
            b.m12.push(e[1]);
            b.m21.push(e[2]);
            b.m22.push(e[3]);
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.m11.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m11.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        for m in [&self.m11, &self.m12, &self.m21, &self.m22] {
            check_len("block multiplier", n, m.len())?;
        }
        Ok(())
    }

    /// Mode-wise product on coefficient vectors.
    pub fn apply_coefficients(&self, ah: &[Complex64], bh: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = ah.len();
        let mut oa = Vec::with_capacity(n);
        let mut ob = Vec::with_capacity(n);
        for k in 0..n {
            oa.push(ah[k] * self.m11[k] + bh[k] * self.m12[k]);
            ob.push(ah[k] * self.m21[k] + bh[k] * self.m22[k]);
        }
        (oa, ob)
    }
}

/// A 1D basis or a 2D tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralGrid {
    OneD(SpectralBasis),
    TwoD(Grid2D),
}

impl SpectralGrid {
    pub fn dimension(&self) -> usize {
        match self {
            SpectralGrid::OneD(_) => 1,
            SpectralGrid::TwoD(_) => 2,
        }
    }

    /// Stored grid points as coordinate tuples; `y` is 0 in 1D.
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            SpectralGrid::OneD(b) => b.points().into_iter().map(|x| (x, 0.0)).collect(),
            SpectralGrid::TwoD(g) => g.points(),
        }
    }

    /// Field sampled from `f(x, y)` at the stored points.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.points().into_iter().map(|(x, y)| f(x, y)).collect()
    }

    /// Number of stored points along each axis.
    pub fn shape(&self) -> Vec<usize> {
        match self {
            SpectralGrid::OneD(b) => vec![b.size()],
            SpectralGrid::TwoD(g) => vec![g.basis_x().size(), g.basis_y().size()],
        }
    }
}

impl From<SpectralBasis> for SpectralGrid {
    fn from(b: SpectralBasis) -> Self {
        SpectralGrid::OneD(b)
    }
}

impl From<Grid2D> for SpectralGrid {
    fn from(g: Grid2D) -> Self {
        SpectralGrid::TwoD(g)
    }
}

impl SpectralSpace for SpectralGrid {
    fn len(&self) -> usize {
        match self {
            SpectralGrid::OneD(b) => b.len(),
            SpectralGrid::TwoD(g) => g.len(),
        }
    }

    fn lambda(&self) -> &[f64] {
        match self {
            SpectralGrid::OneD(b) => b.lambda(),
            SpectralGrid::TwoD(g) => g.lambda(),
        }
    }

    fn weight(&self) -> f64 {
        match self {
            SpectralGrid::OneD(b) => SpectralSpace::weight(b),
            SpectralGrid::TwoD(g) => g.weight(),
        }
    }

    fn forward_complex_inplace(&self, data: &mut [Complex64]) {
        match self {
            SpectralGrid::OneD(b) => b.forward_complex_inplace(data),
            SpectralGrid::TwoD(g) => g.forward_complex_inplace(data),
        }
    }

    fn inverse_complex_inplace(&self, data: &mut [Complex64]) {
        match self {
            SpectralGrid::OneD(b) => b.inverse_complex_inplace(data),
            SpectralGrid::TwoD(g) => g.inverse_complex_inplace(data),
        }
    }

    fn partner(&self, k: usize) -> usize {
        match self {
            SpectralGrid::OneD(b) => b.partner(k),
            SpectralGrid::TwoD(g) => g.partner(k),
        }
    }
}
