//! Averaged-vector-field discrete gradients.
//!
//! The partitioned ("staircase") gradient averages component `i` along the
//! segment between its old and new values while the other components are
//! frozen: in the forward variant components solved earlier sit at the new
//! level and later ones at the old level; the adjoint variant swaps that.
//! Both satisfy `<dG(y', y), y' - y> = U(y') - U(y)` whenever the quadrature
//! integrates the segment integrand exactly.

use crate::error::{check_len, CoreError, Result};
use crate::quadrature::QuadratureRule;
use crate::state::BlockState;
use crate::system::HamiltonianSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DgVariant {
    Forward,
    Adjoint,
}

/// Component ordering plus forward/adjoint choice for the partitioned gradient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgSpec {
    ordering: Vec<usize>,
    variant: DgVariant,
}

impl DgSpec {
    pub fn new(ordering: Vec<usize>, variant: DgVariant) -> Result<Self> {
        let mut seen = vec![false; ordering.len()];
        for &i in &ordering {
            if i >= ordering.len() || seen[i] {
                return Err(CoreError::InvalidInput(format!(
                    "ordering {ordering:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { ordering, variant })
    }

    /// Natural ordering `0, 1, ..., m-1`.
    pub fn natural(m: usize, variant: DgVariant) -> Self {
        Self {
            ordering: (0..m).collect(),
            variant,
        }
    }

    pub fn forward(m: usize) -> Self {
        Self::natural(m, DgVariant::Forward)
    }

    pub fn adjoint(m: usize) -> Self {
        Self::natural(m, DgVariant::Adjoint)
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn variant(&self) -> DgVariant {
        self.variant
    }

    pub fn with_variant(&self, variant: DgVariant) -> Self {
        Self {
            ordering: self.ordering.clone(),
            variant,
        }
    }

    /// Ordering positions in the sequence the implicit equations close.
    pub(crate) fn solve_positions(&self) -> Vec<usize> {
        let m = self.ordering.len();
        match self.variant {
            DgVariant::Forward => (0..m).collect(),
            DgVariant::Adjoint => (0..m).rev().collect(),
        }
    }

    pub(crate) fn check_components(&self, m: usize) -> Result<()> {
        check_len("DgSpec ordering", m, self.ordering.len())
    }
}

/// Quadrature average of `grad_i` along `xi * y_hat_i + (1 - xi) * y_i`, all
/// other components taken from `frame`.
pub fn avf_line_segment<G>(
    grad_i: G,
    frame: &BlockState,
    i: usize,
    y_hat_i: &[f64],
    y_i: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<f64>>
where
    G: Fn(&BlockState) -> Vec<f64>,
{
    if i >= frame.num_blocks() {
        return Err(CoreError::InvalidInput(format!(
            "component {i} outside a {}-component state",
            frame.num_blocks()
        )));
    }
    let d = frame.block(i).len();
    check_len("avf_line_segment y_hat", d, y_hat_i.len())?;
    check_len("avf_line_segment y", d, y_i.len())?;

    let mut point = frame.clone();
    if y_hat_i == y_i {
        point.set_block(i, y_i.to_vec());
        let g = grad_i(&point);
        check_len("gradient output", d, g.len())?;
        return Ok(g);
    }
    let mut acc = vec![0.0; d];
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        {
            let seg = point.block_mut(i);
            for ((s, &a), &b) in seg.iter_mut().zip(y_hat_i).zip(y_i) {
                *s = xi * a + (1.0 - xi) * b;
            }
        }
        let g = grad_i(&point);
        check_len("gradient output", d, g.len())?;
        for (a, gk) in acc.iter_mut().zip(g) {
            *a += w * gk;
        }
    }
    Ok(acc)
}

/// State with the components of `ordering` before `pos` from `before` and
/// after `pos` from `after`; the component at `pos` is taken from `after`.
pub(crate) fn staircase_frame(
    spec: &DgSpec,
    pos: usize,
    y_new: &BlockState,
    y_old: &BlockState,
) -> BlockState {
    let (before, after) = match spec.variant {
        DgVariant::Forward => (y_new, y_old),
        DgVariant::Adjoint => (y_old, y_new),
    };
    let mut frame = after.clone();
    for &j in &spec.ordering[..pos] {
        frame.set_block(j, before.block(j).to_vec());
    }
    frame
}

/// Partitioned AVF discrete gradient `dG(y_new, y_old)` of the potential.
pub fn discrete_gradient<S: HamiltonianSystem + ?Sized>(
    sys: &S,
    y_new: &BlockState,
    y_old: &BlockState,
    spec: &DgSpec,
    rule: &QuadratureRule,
) -> Result<BlockState> {
    sys.check_state(y_new)?;
    sys.check_state(y_old)?;
    spec.check_components(sys.num_components())?;
    let mut out = BlockState::zeros(&sys.layout());
    for pos in 0..spec.ordering.len() {
        let i = spec.ordering[pos];
        let frame = staircase_frame(spec, pos, y_new, y_old);
        let g = avf_line_segment(
            |y| sys.grad(i, y),
            &frame,
            i,
            y_new.block(i),
            y_old.block(i),
            rule,
        )?;
        out.set_block(i, g);
    }
    Ok(out)
}

/// Plain (non-partitioned) AVF gradient: every component averaged along the
/// full segment between `y_old` and `y_new`.
pub fn averaged_gradient<S: HamiltonianSystem + ?Sized>(
    sys: &S,
    y_new: &BlockState,
    y_old: &BlockState,
    rule: &QuadratureRule,
) -> Result<BlockState> {
    sys.check_state(y_new)?;
    sys.check_state(y_old)?;
    let m = sys.num_components();
    let mut out = BlockState::zeros(&sys.layout());
    let mut point = y_old.clone();
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        for j in 0..m {
            let seg = point.block_mut(j);
            for ((s, &a), &b) in seg.iter_mut().zip(y_new.block(j)).zip(y_old.block(j)) {
                *s = xi * a + (1.0 - xi) * b;
            }
        }
        for j in 0..m {
            let g = sys.grad(j, &point);
            for (a, gk) in out.block_mut(j).iter_mut().zip(g) {
                *a += w * gk;
            }
        }
    }
    Ok(out)
}
