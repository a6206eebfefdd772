//! Graph coders: four model families over the cardinality tree, each in a
//! node-by-node (class 1) and level-by-level (class 2) flavor, with either
//! trained parameters or sequential estimates.

mod context;
mod degree;
mod engine;
mod stats;
mod stream;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use context::{bucket_count, UNIVERSAL_CN_CAP};
pub use degree::{
    composition_count, histogram_code_bits, rank_composition, read_histogram, unrank_composition,
    write_histogram,
};
pub use stats::{train_stats, train_stats_with, CoderStats, DegreeHistogram, KtCounter};
pub use stream::{
    codelength, decode_graph, decode_tree, encode_graph, encode_graph_with, labeled_iid_bits,
    read_header, BitReport, Encoded, Header, MAGIC,
};

use crate::error::Error;

/// What a left node's parameter depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// One edge probability for every node.
    Iid,
    /// Whether the node's parent shares an earlier neighbor with the pivot.
    Triangle,
    /// How many earlier neighbors they share.
    CommonNeighbor,
    /// The 4-vertex motif the node's edges would close.
    FourMotif,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Iid,
        Family::Triangle,
        Family::CommonNeighbor,
        Family::FourMotif,
    ];

    fn id(self) -> u8 {
        self as u8
    }

    fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(usize::from(id)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Iid => "iid",
            Family::Triangle => "triangle",
            Family::CommonNeighbor => "common-neighbor",
            Family::FourMotif => "four-motif",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "iid" => Ok(Family::Iid),
            "triangle" | "tri" => Ok(Family::Triangle),
            "common-neighbor" | "cn" => Ok(Family::CommonNeighbor),
            "four-motif" | "motif" | "4-motif" => Ok(Family::FourMotif),
            other => Err(Error::Config(format!("unknown coder family `{other}`"))),
        }
    }
}

/// Node-by-node binomial coding or level-by-level degree coding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Class {
    pub const ALL: [Class; 2] = [Class::One, Class::Two];

    fn id(self) -> u8 {
        match self {
            Class::One => 1,
            Class::Two => 2,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class{}", self.id())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().trim_start_matches("class") {
            "1" => Ok(Class::One),
            "2" => Ok(Class::Two),
            other => Err(Error::Config(format!("unknown coder class `{other}`"))),
        }
    }
}

/// Trained parameters carried in the header, or sequential estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Learned,
    Universal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Learned => "learned",
            Mode::Universal => "universal",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "learned" => Ok(Mode::Learned),
            "universal" => Ok(Mode::Universal),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// A complete coder choice. `(Iid, Two)` codes each picked vertex's degree
/// and then splits it uniformly over the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoderSpec {
    pub family: Family,
    pub class: Class,
    pub mode: Mode,
}

impl CoderSpec {
    pub fn new(family: Family, class: Class, mode: Mode) -> Self {
        Self { family, class, mode }
    }

    pub fn universal(family: Family, class: Class) -> Self {
        Self::new(family, class, Mode::Universal)
    }

    /// All eight family and class combinations in `mode`.
    pub fn all(mode: Mode) -> Vec<CoderSpec> {
        Class::ALL
            .iter()
            .flat_map(|&c| Family::ALL.iter().map(move |&f| CoderSpec::new(f, c, mode)))
            .collect()
    }

    /// Short label such as `triangle/class2/universal`.
    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.family, self.class, self.mode)
    }
}

/// Parses `family/class/mode` as produced by [`CoderSpec::label`]; the mode
/// may be omitted and defaults to universal.
impl FromStr for CoderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split('/').collect();
        let mode = match parts.len() {
            2 => Mode::Universal,
            3 => parts[2].parse()?,
            _ => return Err(Error::Config(format!("expected family/class[/mode], got `{s}`"))),
        };
        Ok(CoderSpec::new(parts[0].parse()?, parts[1].parse()?, mode))
    }
}

impl fmt::Display for CoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests;
