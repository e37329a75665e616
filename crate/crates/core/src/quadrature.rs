use crate::error::{CoreError, Result};

/// Quadrature on `[0, 1]` used for the segment averages of the discrete gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(CoreError::InvalidInput(
                "quadrature needs matching, non-empty node and weight lists".into(),
            ));
        }
        if nodes.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(CoreError::InvalidInput("quadrature nodes must lie in [0, 1]".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(CoreError::InvalidInput("quadrature weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(CoreError::InvalidInput(format!(
                "quadrature weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { nodes, weights })
    }

    /// `n`-point Gauss–Legendre rule mapped to `[0, 1]`; exact for polynomials of degree `2n - 1`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for k in 0..n.div_ceil(2) {
            // Newton iteration on P_n from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // Map [-1, 1] -> [0, 1].
            nodes[k] = 0.5 * (1.0 - x);
            nodes[n - 1 - k] = 0.5 * (1.0 + x);
            weights[k] = 0.5 * w;
            weights[n - 1 - k] = 0.5 * w;
        }
        // Renormalise the last few ulps so the weights sum to one.
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree in the integration variable integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

impl Default for QuadratureRule {
    /// Three-node Gauss–Legendre: exact through degree five.
    fn default() -> Self {
        Self::gauss_legendre(3)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
