use crate::error::{CoreError, Result};

/// Stopping rule for Picard iteration.
///
/// Iteration stops once `|x_{k+1} - x_k|_inf <= tol * max(1, |x_{k+1}|_inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_iter: 100,
        }
    }
}

impl FixedPointConfig {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        let cfg = Self { tol, max_iter };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CoreError::InvalidInput(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(CoreError::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointSolution {
    pub x: Vec<f64>,
    /// Number of map evaluations.
    pub iterations: usize,
    pub residual: f64,
}

/// Picard iteration `x <- map(x)` from `init`.
pub fn fixed_point_solve<F>(mut map: F, init: Vec<f64>, cfg: &FixedPointConfig) -> Result<FixedPointSolution>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    try_fixed_point_solve(|x| Ok(map(x)), init, cfg)
}

/// As [`fixed_point_solve`] for a fallible map.
pub fn try_fixed_point_solve<F>(mut map: F, init: Vec<f64>, cfg: &FixedPointConfig) -> Result<FixedPointSolution>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let mut x = init;
    let mut residual = f64::INFINITY;
    for k in 1..=cfg.max_iter {
        let next = map(&x)?;
        if next.len() != x.len() {
            return Err(CoreError::DimensionMismatch {
                context: "fixed-point map output",
                expected: x.len(),
                found: next.len(),
            });
        }
        let mut diff = 0.0f64;
        let mut scale = 1.0f64;
        let mut finite = true;
        for (a, b) in next.iter().zip(&x) {
            if !a.is_finite() {
                finite = false;
                break;
            }
            diff = diff.max((a - b).abs());
            scale = scale.max(a.abs());
        }
        if !finite {
            return Err(CoreError::NonConvergence {
                iterations: k,
                residual: f64::INFINITY,
            });
        }
        residual = diff;
        x = next;
        if diff <= cfg.tol * scale {
            return Ok(FixedPointSolution {
                x,
                iterations: k,
                residual,
            });
        }
    }
    Err(CoreError::NonConvergence {
        iterations: cfg.max_iter,
        residual,
    })
}
