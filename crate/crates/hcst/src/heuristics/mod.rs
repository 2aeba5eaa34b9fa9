//! Second-phase tree builders. Each consumes the [`GrowthState`] of the same
//! instance and returns a [`SteinerTree`].

mod hig;
mod nrbi;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use hig::{maxhig, minhig, mm};
pub use nrbi::nrbi;

use crate::construction::{voss_from_growth, GrowthState};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::tree::SteinerTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Voss,
    MinHig,
    MaxHig,
    Mm,
    Nrbi,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Voss, Algorithm::MinHig, Algorithm::MaxHig, Algorithm::Mm, Algorithm::Nrbi];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Voss => "voss",
            Algorithm::MinHig => "minhig",
            Algorithm::MaxHig => "maxhig",
            Algorithm::Mm => "mm",
            Algorithm::Nrbi => "nrbi",
        }
    }

    pub fn run(self, instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
        match self {
            Algorithm::Voss => voss_from_growth(instance, growth),
            Algorithm::MinHig => minhig(instance, growth),
            Algorithm::MaxHig => maxhig(instance, growth),
            Algorithm::Mm => mm(instance, growth),
            Algorithm::Nrbi => nrbi(instance, growth),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Argument(format!("unknown algorithm `{s}`")))
    }
}

fn ensure_hop_feasible(tree: SteinerTree, instance: &Instance) -> Result<SteinerTree> {
    if tree.max_depth() > instance.hop_limit() {
        return Err(Error::Postcondition {
            message: format!("depth {} exceeds hop limit {}", tree.max_depth(), instance.hop_limit()),
            edges: tree.edges,
        });
    }
    Ok(tree)
}
