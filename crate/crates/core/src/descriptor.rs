//! Structured-text descriptors for groups and cocycles:
//!
//! ```json
//! {"group": {"kind": "free_abelian", "params": {"rank": 2}},
//!  "cocycle": {"family": "bicharacter", "params": {"theta": [[0.0, 0.25], [0.0, 0.0]]}}}
//! ```
//!
//! Matrices are row-major arrays of decimal numbers.

use serde::{Deserialize, Serialize};

use crate::cocycle::{Cocycle, CocycleFamily, CyclicRootSource};
use crate::error::Result;
use crate::group::{Group, GroupKind};
use crate::phase::Turn;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    FreeAbelian { rank: usize },
    CyclicProduct { orders: Vec<i64> },
    Heisenberg3,
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupSpec::FreeAbelian { rank } => Group::free_abelian(*rank),
            GroupSpec::CyclicProduct { orders } => Group::cyclic_product(orders.clone()),
            GroupSpec::Heisenberg3 => Ok(Group::heisenberg3()),
        }
    }

    pub fn of(group: &Group) -> Self {
        match group.kind() {
            GroupKind::FreeAbelian { rank } => GroupSpec::FreeAbelian { rank: *rank },
            GroupKind::CyclicProduct { orders } => GroupSpec::CyclicProduct { orders: orders.clone() },
            GroupKind::Heisenberg3 => GroupSpec::Heisenberg3,
        }
    }
}

/// Parameters of a root-of-unity cocycle: either a bilinear exponent form
/// or an explicit table of `[numerator, denominator]` turns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CyclicRootParams {
    Form { numerators: Vec<Vec<i64>>, denominator: i64 },
    Table { table: Vec<Vec<[i64; 2]>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum CocycleSpec {
    Trivial,
    Bicharacter { theta: Vec<Vec<f64>> },
    TimeFrequencyLattice { basis: Vec<Vec<f64>> },
    CyclicRoot(CyclicRootParams),
}

impl CocycleSpec {
    pub fn build(&self, group: &Group) -> Result<Cocycle> {
        match self {
            CocycleSpec::Trivial => Ok(Cocycle::trivial(group)),
            CocycleSpec::Bicharacter { theta } => Cocycle::bicharacter(group, theta.clone()),
            CocycleSpec::TimeFrequencyLattice { basis } => Cocycle::time_frequency_lattice(group, basis.clone()),
            CocycleSpec::CyclicRoot(CyclicRootParams::Form { numerators, denominator }) => {
                Cocycle::cyclic_root_form(group, numerators.clone(), *denominator)
            }
            CocycleSpec::CyclicRoot(CyclicRootParams::Table { table }) => {
                if table.iter().flatten().any(|t| t[1] == 0) {
                    return Err(crate::error::LabError::InvalidCocycle("turn denominator is zero".into()));
                }
                let rows = table.iter().map(|r| r.iter().map(|t| Turn::new(t[0], t[1])).collect()).collect();
                Cocycle::cyclic_root_table(group, rows)
            }
        }
    }

    pub fn of(sigma: &Cocycle) -> Self {
        match sigma.family() {
            CocycleFamily::Trivial => CocycleSpec::Trivial,
            CocycleFamily::Bicharacter { theta } => CocycleSpec::Bicharacter { theta: theta.clone() },
            CocycleFamily::TimeFrequencyLattice { basis } => CocycleSpec::TimeFrequencyLattice { basis: basis.clone() },
            CocycleFamily::CyclicRoot(root) => CocycleSpec::CyclicRoot(match root.source() {
                CyclicRootSource::Form { numerators, denominator } => {
                    CyclicRootParams::Form { numerators: numerators.clone(), denominator: *denominator }
                }
                CyclicRootSource::Table(rows) => CyclicRootParams::Table {
                    table: rows
                        .iter()
                        .map(|r| r.iter().map(|t| [t.numerator(), t.denominator()]).collect())
                        .collect(),
                },
            }),
        }
    }
}

/// A group together with a cocycle on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub group: GroupSpec,
    #[serde(default = "trivial_spec")]
    pub cocycle: CocycleSpec,
}

fn trivial_spec() -> CocycleSpec {
    CocycleSpec::Trivial
}

impl Descriptor {
    pub fn build(&self) -> Result<(Group, Cocycle)> {
        let group = self.group.build()?;
        let sigma = self.cocycle.build(&group)?;
        Ok((group, sigma))
    }

    pub fn of(sigma: &Cocycle) -> Self {
        Self { group: GroupSpec::of(sigma.group()), cocycle: CocycleSpec::of(sigma) }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }
}
