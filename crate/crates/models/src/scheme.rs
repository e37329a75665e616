use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;

/// Time integrators available across the models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Epavf,
    EpavfAdjoint,
    EpavfC,
    Eavf,
    Avf,
    Pavf,
    PavfAdjoint,
    PavfC,
    /// Fully implicit three-level scheme (KGZ only).
    Cisp,
    /// Decoupled explicit three-level scheme (KGZ only).
    Disp,
}

impl Scheme {
    pub const ALL: [Scheme; 10] = [
        Scheme::Epavf,
        Scheme::EpavfAdjoint,
        Scheme::EpavfC,
        Scheme::Eavf,
        Scheme::Avf,
        Scheme::Pavf,
        Scheme::PavfAdjoint,
        Scheme::PavfC,
        Scheme::Cisp,
        Scheme::Disp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Epavf => "epavf",
            Scheme::EpavfAdjoint => "epavf-adjoint",
            Scheme::EpavfC => "epavf-c",
            Scheme::Eavf => "eavf",
            Scheme::Avf => "avf",
            Scheme::Pavf => "pavf",
            Scheme::PavfAdjoint => "pavf-adjoint",
            Scheme::PavfC => "pavf-c",
            Scheme::Cisp => "cisp",
            Scheme::Disp => "disp",
        }
    }

    pub fn is_three_level(self) -> bool {
        matches!(self, Scheme::Cisp | Scheme::Disp)
    }

    /// Whether the scheme conserves the model energy exactly.
    pub fn conserves_energy(self) -> bool {
        !self.is_three_level()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Scheme::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or(ModelError::Unknown {
                kind: "scheme",
                name: s.to_string(),
            })
    }
}

/// The two model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Kgs,
    Kgz,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Kgs => "kgs",
            ModelKind::Kgz => "kgz",
        }
    }

    pub fn supports(self, scheme: Scheme) -> bool {
        self == ModelKind::Kgz || !scheme.is_three_level()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kgs" => Ok(ModelKind::Kgs),
            "kgz" => Ok(ModelKind::Kgz),
            _ => Err(ModelError::Unknown {
                kind: "model",
                name: s.to_string(),
            }),
        }
    }
}
