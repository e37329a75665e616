//! Initial data of the four numerical examples.

use std::fmt;
use std::str::FromStr;

use epavf_spectral::{BasisKind, Grid2D, SpectralBasis, SpectralGrid};

use crate::error::{ModelError, Result};
use crate::kgs::{KgsModel, KgsState};
use crate::kgz::{KgzModel, KgzState};
use crate::scheme::ModelKind;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// 1D KGS on `[-32, 32]`, `beta = 1`.
    KgsExample1,
    /// 2D KGS on `[-64, 64]^2`, `beta = 1`.
    KgsExample2,
    /// 1D KGZ on `[-32, 32]`.
    KgzExample3,
    /// 2D KGZ on `[-32, 32]^2`.
    KgzExample4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::KgsExample1,
        Preset::KgsExample2,
        Preset::KgzExample3,
        Preset::KgzExample4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::KgsExample1 => "kgs-example1",
            Preset::KgsExample2 => "kgs-example2",
            Preset::KgzExample3 => "kgz-example3",
            Preset::KgzExample4 => "kgz-example4",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            Preset::KgsExample1 | Preset::KgsExample2 => ModelKind::Kgs,
            Preset::KgzExample3 | Preset::KgzExample4 => ModelKind::Kgz,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Preset::KgsExample1 | Preset::KgzExample3 => 1,
            Preset::KgsExample2 | Preset::KgzExample4 => 2,
        }
    }

    /// Interval (per axis for 2D).
    pub fn domain(self) -> (f64, f64) {
        match self {
            Preset::KgsExample2 => (-64.0, 64.0),
            _ => (-32.0, 32.0),
        }
    }

    pub fn default_h(self) -> f64 {
        match self.dimension() {
            1 => 0.125,
            _ => 0.25,
        }
    }

    pub fn default_tau(self) -> f64 {
        match self.dimension() {
            1 => 0.0125,
            _ => 0.1,
        }
    }

    pub fn default_t_end(self) -> f64 {
        match self {
            Preset::KgsExample2 => 10.0,
            Preset::KgzExample4 => 4.0,
            _ => 1.0,
        }
    }

    pub fn boundary(self) -> BasisKind {
        match self.model() {
            ModelKind::Kgs => BasisKind::Periodic,
            ModelKind::Kgz => BasisKind::Dirichlet,
        }
    }

    /// Grid with spacing `h` on `domain` (defaults to the example's domain).
    pub fn grid(self, h: f64, domain: Option<(f64, f64)>) -> Result<SpectralGrid> {
        let (a, b) = domain.unwrap_or(self.domain());
        let basis = SpectralBasis::with_spacing(self.boundary(), h, a, b)?;
        Ok(match self.dimension() {
            1 => SpectralGrid::OneD(basis),
            _ => SpectralGrid::TwoD(Grid2D::square(basis)),
        })
    }

    pub fn kgs_state(self, model: &KgsModel) -> Result<KgsState> {
        match self {
            Preset::KgsExample1 => Ok(kgs_example1(model)),
            Preset::KgsExample2 => Ok(kgs_example2(model)),
            _ => Err(ModelError::InvalidParams(format!("{self} is not a KGS preset"))),
        }
    }

    pub fn kgz_state(self, model: &KgzModel) -> Result<KgzState> {
        match self {
            Preset::KgzExample3 => Ok(kgz_example3(model)),
            Preset::KgzExample4 => Ok(kgz_example4(model)),
            _ => Err(ModelError::InvalidParams(format!("{self} is not a KGZ preset"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ModelError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or(ModelError::Unknown {
                kind: "preset",
                name: s.to_string(),
            })
    }
}

/// `psi0 = (1 + i)/2 sech(x^2)`, `u0 = exp(-x^2)/2`, `u1 = exp(-x^2)/sqrt(2)`.
pub fn kgs_example1(model: &KgsModel) -> KgsState {
    model.init(
        |x, _| {
            let s = 0.5 * sech(x * x);
            (s, s)
        },
        |x, _| 0.5 * (-x * x).exp(),
        |x, _| (-x * x).exp() / std::f64::consts::SQRT_2,
    )
}

/// `psi0 = 2 / (e^{x^2+2y^2} + e^{-x^2-2y^2}) exp(5i sech(sqrt(4x^2+y^2)))`,
/// `u0 = exp(-x^2-y^2)`, `u1 = exp(-x^2-y^2)/2`.
pub fn kgs_example2(model: &KgsModel) -> KgsState {
    model.init(
        |x, y| {
            let r = x * x + 2.0 * y * y;
            let amp = 2.0 / (r.exp() + (-r).exp());
            let phase = 5.0 * sech((4.0 * x * x + y * y).sqrt());
            (amp * phase.cos(), amp * phase.sin())
        },
        |x, y| (-x * x - y * y).exp(),
        |x, y| 0.5 * (-x * x - y * y).exp(),
    )
}

/// `E0 = sin(x/2) e^{-x^2}`, `E1 = e^{-sqrt(2) x^2}/2`, `M0 = sech(x^2)`, `M1 = cos(x/3) e^{-x^2}`.
pub fn kgz_example3(model: &KgzModel) -> KgzState {
    model.init(
        |x, _| (0.5 * x).sin() * (-x * x).exp(),
        |x, _| 0.5 * (-std::f64::consts::SQRT_2 * x * x).exp(),
        |x, _| sech(x * x),
        |x, _| (x / 3.0).cos() * (-x * x).exp(),
    )
}

/// Two Gaussians in `E`, two sech bumps in `M`.
pub fn kgz_example4(model: &KgzModel) -> KgzState {
    model.init(
        |x, y| (-(x + 2.0).powi(2) - y * y).exp() + (-(x - 2.0).powi(2) - y * y).exp(),
        |x, y| (-x * x - y * y).exp(),
        |x, y| sech(x * x + (y + 2.0).powi(2)) + sech(x * x + (y - 2.0).powi(2)),
        |x, y| sech(x * x + y * y),
    )
}
