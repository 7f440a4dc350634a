use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// The four boundary-condition combinations, in plotting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryLabel {
    #[serde(rename = "PBC")]
    Pbc,
    #[serde(rename = "xOBC")]
    XObc,
    #[serde(rename = "yOBC")]
    YObc,
    #[serde(rename = "xyOBC")]
    XyObc,
}

impl BoundaryLabel {
    pub const ALL: [BoundaryLabel; 4] = [
        BoundaryLabel::Pbc,
        BoundaryLabel::XObc,
        BoundaryLabel::YObc,
        BoundaryLabel::XyObc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryLabel::Pbc => "PBC",
            BoundaryLabel::XObc => "xOBC",
            BoundaryLabel::YObc => "yOBC",
            BoundaryLabel::XyObc => "xyOBC",
        }
    }

    pub fn from_conditions(bc_x: BoundaryCondition, bc_y: BoundaryCondition) -> Self {
        use BoundaryCondition::*;
        match (bc_x, bc_y) {
            (Periodic, Periodic) => BoundaryLabel::Pbc,
            (Open, Periodic) => BoundaryLabel::XObc,
            (Periodic, Open) => BoundaryLabel::YObc,
            (Open, Open) => BoundaryLabel::XyObc,
        }
    }

    pub fn conditions(self) -> (BoundaryCondition, BoundaryCondition) {
        use BoundaryCondition::*;
        match self {
            BoundaryLabel::Pbc => (Periodic, Periodic),
            BoundaryLabel::XObc => (Open, Periodic),
            BoundaryLabel::YObc => (Periodic, Open),
            BoundaryLabel::XyObc => (Open, Open),
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundaryLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pbc" => Ok(BoundaryLabel::Pbc),
            "xobc" => Ok(BoundaryLabel::XObc),
            "yobc" => Ok(BoundaryLabel::YObc),
            "xyobc" | "obc" => Ok(BoundaryLabel::XyObc),
            other => Err(Error::Config(format!("unknown boundary condition `{other}`"))),
        }
    }
}

/// Finite lattice of `nx * ny` unit cells.
///
/// Sites are ordered internal index fastest, then x, then y:
/// `index = a + 4 * (x + nx * y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub nx: usize,
    pub ny: usize,
    pub bc_x: BoundaryCondition,
    pub bc_y: BoundaryCondition,
}

impl LatticeSpec {
    pub fn new(nx: usize, ny: usize, bc_x: BoundaryCondition, bc_y: BoundaryCondition) -> Self {
        Self { nx, ny, bc_x, bc_y }
    }

    pub fn with_label(nx: usize, ny: usize, label: BoundaryLabel) -> Self {
        let (bc_x, bc_y) = label.conditions();
        Self::new(nx, ny, bc_x, bc_y)
    }

    pub fn periodic(nx: usize, ny: usize) -> Self {
        Self::with_label(nx, ny, BoundaryLabel::Pbc)
    }

    pub fn open(nx: usize, ny: usize) -> Self {
        Self::with_label(nx, ny, BoundaryLabel::XyObc)
    }

    pub fn label(&self) -> BoundaryLabel {
        BoundaryLabel::from_conditions(self.bc_x, self.bc_y)
    }

    pub fn dim(&self) -> usize {
        4 * self.nx * self.ny
    }

    pub fn site(&self, a: usize, x: usize, y: usize) -> usize {
        a + 4 * (x + self.nx * y)
    }

    /// Rejects empty lattices and periodic axes with a single cell, where the
    /// forward and backward wrap bonds would land on the same pair of sites.
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidLattice(format!(
                "cell counts must be positive (nx = {}, ny = {})",
                self.nx, self.ny
            )));
        }
        for (n, bc, axis) in [(self.nx, self.bc_x, "x"), (self.ny, self.bc_y, "y")] {
            if bc == BoundaryCondition::Periodic && n < 2 {
                return Err(Error::InvalidLattice(format!(
                    "periodic {axis} axis needs at least 2 cells, got {n}"
                )));
            }
        }
        Ok(())
    }
}
