use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, CoreError, Result};
use crate::state::BlockState;

/// A system `dy_i/dt = S_i (L_i y_i + grad_{y_i} U(y))` with conserved
/// `H = sum_i y_i^T L_i y_i / 2 + U(y)`.
///
/// Implemented by the dense [`BlockSystem`] and by the spectral model systems,
/// which apply `S_i` and `L_i` matrix-free.
pub trait HamiltonianSystem {
    /// Length of every component vector.
    fn layout(&self) -> Vec<usize>;

    fn apply_s(&self, i: usize, x: &[f64]) -> Vec<f64>;

    fn apply_l(&self, i: usize, x: &[f64]) -> Vec<f64>;

    fn potential(&self, y: &BlockState) -> f64;

    /// `grad_{y_i} U(y)`.
    fn grad(&self, i: usize, y: &BlockState) -> Vec<f64>;

    fn num_components(&self) -> usize {
        self.layout().len()
    }

    fn check_state(&self, y: &BlockState) -> Result<()> {
        y.check_layout(&self.layout())
    }

    /// `sum_i y_i^T L_i y_i / 2 + U(y)`.
    fn energy(&self, y: &BlockState) -> f64 {
        let quadratic: f64 = (0..y.num_blocks())
            .map(|i| {
                let yi = y.block(i);
                0.5 * dot(yi, &self.apply_l(i, yi))
            })
            .sum();
        quadratic + self.potential(y)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Skew `S` and symmetric `L` for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    s: DMatrix<f64>,
    l: DMatrix<f64>,
}

impl Component {
    pub fn new(s: DMatrix<f64>, l: DMatrix<f64>) -> Result<Self> {
        if !s.is_square() || !l.is_square() {
            return Err(CoreError::InvalidInput("S and L must be square".into()));
        }
        check_len("Component L", s.nrows(), l.nrows())?;
        if (&s + s.transpose()).amax() != 0.0 {
            return Err(CoreError::InvalidInput("S is not skew-symmetric".into()));
        }
        if (&l - l.transpose()).amax() != 0.0 {
            return Err(CoreError::InvalidInput("L is not symmetric".into()));
        }
        Ok(Self { s, l })
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }
}

pub type PotentialFn = Arc<dyn Fn(&BlockState) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(usize, &BlockState) -> Vec<f64> + Send + Sync>;

/// Dense multi-component Hamiltonian system with closure-defined potential.
#[derive(Clone)]
pub struct BlockSystem {
    components: Vec<Component>,
    potential: PotentialFn,
    grad: GradientFn,
}

impl std::fmt::Debug for BlockSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockSystem")
            .field("components", &self.components)
            .finish_non_exhaustive()
    }
}

impl BlockSystem {
    pub fn new(components: Vec<Component>, potential: PotentialFn, grad: GradientFn) -> Result<Self> {
        if components.is_empty() {
            return Err(CoreError::InvalidInput("system needs at least one component".into()));
        }
        Ok(Self {
            components,
            potential,
            grad,
        })
    }

    /// Convenience constructor taking plain closures.
    pub fn from_fns<P, G>(components: Vec<Component>, potential: P, grad: G) -> Result<Self>
    where
        P: Fn(&BlockState) -> f64 + Send + Sync + 'static,
        G: Fn(usize, &BlockState) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(components, Arc::new(potential), Arc::new(grad))
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Component {
        &self.components[i]
    }

    /// Single-component system with block-diagonal `S`, `L` over the stacked state.
    pub fn flatten(&self) -> BlockSystem {
        let layout = self.layout();
        let n: usize = layout.iter().sum();
        let mut s = DMatrix::zeros(n, n);
        let mut l = DMatrix::zeros(n, n);
        let mut offset = 0;
        for c in &self.components {
            let d = c.dim();
            s.view_mut((offset, offset), (d, d)).copy_from(c.s());
            l.view_mut((offset, offset), (d, d)).copy_from(c.l());
            offset += d;
        }
        let potential = Arc::clone(&self.potential);
        let grad = Arc::clone(&self.grad);
        let lay_u = layout.clone();
        let lay_g = layout;
        BlockSystem {
            components: vec![Component { s, l }],
            potential: Arc::new(move |y: &BlockState| {
                let split = BlockState::from_flat(&lay_u, y.block(0)).expect("flattened layout");
                potential(&split)
            }),
            grad: Arc::new(move |_i: usize, y: &BlockState| {
                let split = BlockState::from_flat(&lay_g, y.block(0)).expect("flattened layout");
                (0..lay_g.len()).flat_map(|j| grad(j, &split)).collect()
            }),
        }
    }
}

impl HamiltonianSystem for BlockSystem {
    fn layout(&self) -> Vec<usize> {
        self.components.iter().map(Component::dim).collect()
    }

    fn apply_s(&self, i: usize, x: &[f64]) -> Vec<f64> {
        matvec(self.components[i].s(), x)
    }

    fn apply_l(&self, i: usize, x: &[f64]) -> Vec<f64> {
        matvec(self.components[i].l(), x)
    }

    fn potential(&self, y: &BlockState) -> f64 {
        (self.potential)(y)
    }

    fn grad(&self, i: usize, y: &BlockState) -> Vec<f64> {
        (self.grad)(i, y)
    }
}

pub(crate) fn matvec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(x)).as_slice().to_vec()
}

/// `sum_i y_i^T L_i y_i / 2 + U(y)` for any system.
pub fn hamiltonian_energy<S: HamiltonianSystem + ?Sized>(sys: &S, y: &BlockState) -> Result<f64> {
    sys.check_state(y)?;
    Ok(sys.energy(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> BlockSystem {
        let s = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let l = DMatrix::identity(2, 2);
        BlockSystem::from_fns(vec![Component::new(s, l).unwrap()], |_| 0.0, |_, y| vec![0.0; y.block(0).len()])
            .unwrap()
    }

    #[test]
    fn energy_of_zero_state_is_zero() {
        let sys = harmonic();
        assert_eq!(hamiltonian_energy(&sys, &BlockState::zeros(&[2])).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_energy() {
        let sys = harmonic();
        let y = BlockState::new(vec![vec![3.0, 4.0]]);
        assert_eq!(hamiltonian_energy(&sys, &y).unwrap(), 12.5);
    }

    #[test]
    fn rejects_non_skew_and_non_symmetric() {
        let s = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(Component::new(s, DMatrix::identity(2, 2)).is_err());
        let s = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(Component::new(s.clone(), l).is_err());
        assert!(Component::new(s, DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn layout_mismatch_is_reported() {
        let sys = harmonic();
        let y = BlockState::new(vec![vec![1.0, 2.0, 3.0]]);
        assert!(matches!(
            hamiltonian_energy(&sys, &y),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }
}
