use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Party category a candidate is filed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdeologyClass {
    /// A long-standing party running on its own ticket.
    Traditional,
    /// An independent movement or party.
    Independent,
    /// A coalition of two or more parties.
    Alliance,
}

impl IdeologyClass {
    pub const ALL: [IdeologyClass; 3] = [
        IdeologyClass::Traditional,
        IdeologyClass::Independent,
        IdeologyClass::Alliance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdeologyClass::Traditional => "traditional",
            IdeologyClass::Independent => "independent",
            IdeologyClass::Alliance => "alliance",
        }
    }

    /// Single-letter code used in pair labels (`P`, `I`, `A`).
    pub fn code(self) -> char {
        match self {
            IdeologyClass::Traditional => 'P',
            IdeologyClass::Independent => 'I',
            IdeologyClass::Alliance => 'A',
        }
    }
}

impl fmt::Display for IdeologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown ideology class {0:?} (expected traditional, independent or alliance)")]
pub struct ParseIdeologyError(pub String);

impl FromStr for IdeologyClass {
    type Err = ParseIdeologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "traditional" => Ok(IdeologyClass::Traditional),
            "independent" => Ok(IdeologyClass::Independent),
            "alliance" => Ok(IdeologyClass::Alliance),
            other => Err(ParseIdeologyError(other.into())),
        }
    }
}

/// One politician running in the election.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateProfile {
    pub candidate_id: String,
    pub twitter_username: String,
    pub party_name: String,
    pub ideology_class: IdeologyClass,
    pub department: String,
    pub votes_received: u64,
    pub followers: u64,
}
