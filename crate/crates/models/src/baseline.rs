//! Schemes routed through the generic `epavf-core` steppers on a matrix-free
//! two-component system.

use std::sync::Arc;

use epavf_core::{
    avf_step, eavf_step, epavf_adjoint_step, epavf_c_step, epavf_step, pavf_adjoint_step, pavf_c_step,
    pavf_step, BlockState, DgSpec, HamiltonianSystem, StepOutcome, StepperConfig,
};
use epavf_spectral::SpectralGrid;

use crate::error::{ModelError, Result};
use crate::modes::{LinearBlock, SpectralExp, SpectralMidpoint};
use crate::scheme::Scheme;

#[derive(Debug, Clone)]
enum Props {
    Exp(Vec<SpectralExp>),
    Mid(Vec<SpectralMidpoint>),
}

/// Propagators and settings for one scheme on the generic core.
#[derive(Debug, Clone)]
pub struct CoreRoute {
    scheme: Scheme,
    props: Props,
    spec: DgSpec,
    cfg: StepperConfig,
}

impl CoreRoute {
    pub fn new(
        grid: &Arc<SpectralGrid>,
        blocks: &[LinearBlock],
        scheme: Scheme,
        tau: f64,
        cfg: StepperConfig,
    ) -> Result<Self> {
        let h = match scheme {
            Scheme::EpavfC | Scheme::PavfC => 0.5 * tau,
            _ => tau,
        };
        let props = match scheme {
            Scheme::Epavf | Scheme::EpavfAdjoint | Scheme::EpavfC | Scheme::Eavf => Props::Exp(
                blocks
                    .iter()
                    .map(|b| SpectralExp::new(Arc::clone(grid), b, h))
                    .collect::<Result<_>>()?,
            ),
            Scheme::Avf | Scheme::Pavf | Scheme::PavfAdjoint | Scheme::PavfC => Props::Mid(
                blocks
                    .iter()
                    .map(|b| SpectralMidpoint::new(Arc::clone(grid), b, h))
                    .collect::<Result<_>>()?,
            ),
            Scheme::Cisp | Scheme::Disp => {
                return Err(ModelError::InvalidParams(format!(
                    "{scheme} is not a one-step Hamiltonian scheme"
                )))
            }
        };
        Ok(Self {
            scheme,
            props,
            spec: DgSpec::forward(blocks.len()),
            cfg,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn step<S: HamiltonianSystem + ?Sized>(&self, sys: &S, y: &BlockState) -> Result<StepOutcome> {
        let (spec, cfg) = (&self.spec, &self.cfg);
        Ok(match (&self.props, self.scheme) {
            (Props::Exp(p), Scheme::Epavf) => epavf_step(sys, p, y, spec, cfg)?,
            (Props::Exp(p), Scheme::EpavfAdjoint) => epavf_adjoint_step(sys, p, y, spec, cfg)?,
            (Props::Exp(p), Scheme::EpavfC) => epavf_c_step(sys, p, y, spec, cfg)?,
            (Props::Exp(p), _) => eavf_step(sys, p, y, cfg)?,
            (Props::Mid(p), Scheme::Pavf) => pavf_step(sys, p, y, spec, cfg)?,
            (Props::Mid(p), Scheme::PavfAdjoint) => pavf_adjoint_step(sys, p, y, spec, cfg)?,
            (Props::Mid(p), Scheme::PavfC) => pavf_c_step(sys, p, y, spec, cfg)?,
            (Props::Mid(p), _) => avf_step(sys, p, y, cfg)?,
        })
    }
}
