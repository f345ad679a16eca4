//! Declarative descriptions of spaces and groups fed to the engine.

use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::complex::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupClass {
    Abelian,
    FreeNonabelian,
    Trivial,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub name: String,
    pub class: GroupClass,
    /// Cohomological dimension, when known.
    pub cd: Option<u64>,
}

impl GroupDescriptor {
    pub fn new(name: impl Into<String>, class: GroupClass, cd: Option<u64>) -> Self {
        GroupDescriptor { name: name.into(), class, cd }
    }

    pub fn trivial() -> Self {
        Self::new("1", GroupClass::Trivial, Some(0))
    }

    /// `Z^rank`, free abelian; `cd = rank`.
    pub fn free_abelian(rank: u64) -> Self {
        let name = if rank == 1 { "Z".to_string() } else { format!("Z^{rank}") };
        Self::new(name, GroupClass::Abelian, Some(rank))
    }

    /// Free group of the given rank `>= 2`.
    pub fn free(rank: u64) -> Self {
        Self::new(format!("F{rank}"), GroupClass::FreeNonabelian, Some(1))
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        match (self.class, self.cd) {
            (GroupClass::Trivial, Some(c)) if c != 0 => {
                Err(BoundsError::InvalidDescriptor(format!("trivial group `{}` must have cd 0, got {c}", self.name)))
            }
            (GroupClass::FreeNonabelian, Some(c)) if c != 1 => Err(BoundsError::InvalidDescriptor(format!(
                "free nonabelian group `{}` must have cd 1, got {c}",
                self.name
            ))),
            _ => Ok(()),
        }
    }
}

/// Declared properties of a group action on a space; never inferred.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EquivariantFlags {
    pub free_action: bool,
    pub simply_connected_total: bool,
    pub proper_action: bool,
}

impl EquivariantFlags {
    pub fn all() -> Self {
        EquivariantFlags { free_action: true, simply_connected_total: true, proper_action: true }
    }
}

/// A triangulation attached to a descriptor, with the file it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRef {
    pub path: Option<String>,
    pub complex: SimplicialComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `X = B × F`.
    Product { base: Box<SpaceDescriptor>, fiber: Box<SpaceDescriptor> },
    /// `X` is a twisted product over `B` with fiber `F` and structure group `G`
    /// acting on `F` as described by `F`'s equivariant flags.
    Twisted { base: Box<SpaceDescriptor>, fiber: Box<SpaceDescriptor>, group: GroupDescriptor },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescriptor {
    pub name: String,
    pub dim: Option<u64>,
    /// Fundamental group.
    pub group: GroupDescriptor,
    pub aspherical: bool,
    pub complex: Option<ComplexRef>,
    pub structure: Option<Structure>,
    pub equivariant_flags: Option<EquivariantFlags>,
}

impl SpaceDescriptor {
    pub fn new(name: impl Into<String>, group: GroupDescriptor) -> Self {
        SpaceDescriptor {
            name: name.into(),
            dim: None,
            group,
            aspherical: false,
            complex: None,
            structure: None,
            equivariant_flags: None,
        }
    }

    pub fn with_dim(mut self, dim: u64) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn aspherical(mut self) -> Self {
        self.aspherical = true;
        self
    }

    pub fn with_complex(mut self, complex: SimplicialComplex, path: Option<String>) -> Self {
        self.complex = Some(ComplexRef { path, complex });
        self
    }

    pub fn with_structure(mut self, structure: Structure) -> Self {
        self.structure = Some(structure);
        self
    }

    pub fn with_flags(mut self, flags: EquivariantFlags) -> Self {
        self.equivariant_flags = Some(flags);
        self
    }

    /// Dimension declared or read off the attached complex.
    pub fn effective_dim(&self) -> Option<u64> {
        self.dim.or_else(|| self.complex.as_ref().and_then(|c| c.complex.dimension().ok()).map(|d| d as u64))
    }

    /// Checks local invariants of this descriptor and all nested ones.
    pub fn validate(&self) -> Result<(), BoundsError> {
        self.group.validate()?;
        if let Some(c) = &self.complex {
            let d = c.complex.dimension().map_err(|e| {
                BoundsError::InvalidDescriptor(format!("complex of `{}`: {e}", self.name))
            })? as u64;
            if let Some(declared) = self.dim {
                if declared != d {
                    return Err(BoundsError::InvalidDescriptor(format!(
                        "`{}` declares dimension {declared} but its complex has dimension {d}",
                        self.name
                    )));
                }
            }
        }
        match &self.structure {
            Some(Structure::Product { base, fiber }) => {
                base.validate()?;
                fiber.validate()?;
            }
            Some(Structure::Twisted { base, fiber, group }) => {
                base.validate()?;
                fiber.validate()?;
                group.validate()?;
            }
            None => {}
        }
        Ok(())
    }
}
