use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use super::SeriesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    /// `c_k / k^n`
    S,
    /// `c_k / (2k+1)^n`
    L,
    /// `h_k c_k / k^n`
    V,
    /// `h_k c_k / (2k-1)^n`
    Z,
    /// `h_k² / k^(2n)`
    W,
    /// `H_k / k^n`
    LinH,
    /// `h_k / k^n`
    LinOddH,
    /// `H_k h_k / k³`
    MixHhK3,
    /// `(-1)^(k-1) H_k² / k³`
    AltH2K3,
    /// `H_k H_2k / (2k)³`
    H2kWeighted,
    /// `H_2k² / k³`
    H2kSq,
    /// `h_k² / k³`
    HsqK3,
    /// `H_k² / k³`, the sum whose closed form is never assumed
    HSqK3,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 13] = [
        FamilyTag::S,
        FamilyTag::L,
        FamilyTag::V,
        FamilyTag::Z,
        FamilyTag::W,
        FamilyTag::LinH,
        FamilyTag::LinOddH,
        FamilyTag::MixHhK3,
        FamilyTag::AltH2K3,
        FamilyTag::H2kWeighted,
        FamilyTag::H2kSq,
        FamilyTag::HsqK3,
        FamilyTag::HSqK3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::S => "S",
            FamilyTag::L => "L",
            FamilyTag::V => "V",
            FamilyTag::Z => "Z",
            FamilyTag::W => "W",
            FamilyTag::LinH => "LIN_H",
            FamilyTag::LinOddH => "LIN_h",
            FamilyTag::MixHhK3 => "MIX_Hh_K3",
            FamilyTag::AltH2K3 => "ALT_H2_K3",
            FamilyTag::H2kWeighted => "H2K_WEIGHTED",
            FamilyTag::H2kSq => "H2K_SQ",
            FamilyTag::HsqK3 => "HSQ_K3",
            FamilyTag::HSqK3 => "H_SQ_K3",
        }
    }

    /// Smallest admissible order, or `None` for the fixed-order sums.
    pub fn min_order(self) -> Option<u32> {
        match self {
            FamilyTag::S | FamilyTag::L | FamilyTag::V | FamilyTag::Z | FamilyTag::W => Some(1),
            FamilyTag::LinH | FamilyTag::LinOddH => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(t) = FamilyTag::ALL.iter().find(|t| t.as_str() == s) {
            return Ok(*t);
        }
        // single-letter tags are case-insensitive; LIN_H and LIN_h are not
        match s {
            "s" => Ok(FamilyTag::S),
            "l" => Ok(FamilyTag::L),
            "v" => Ok(FamilyTag::V),
            "z" => Ok(FamilyTag::Z),
            "w" => Ok(FamilyTag::W),
            _ => Err(SeriesError::InvalidFamily(format!("unknown family tag '{s}'"))),
        }
    }
}

/// A validated `(tag, n)` pair, serialized as `TAG:n` or `TAG`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SeriesFamily {
    tag: FamilyTag,
    n: Option<u32>,
}

impl SeriesFamily {
    pub fn new(tag: FamilyTag, n: Option<u32>) -> Result<Self, SeriesError> {
        match (tag.min_order(), n) {
            (Some(min), Some(n)) if n >= min => Ok(Self { tag, n: Some(n) }),
            (Some(min), Some(n)) => Err(SeriesError::InvalidFamily(format!("{tag} requires n >= {min}, got {n}"))),
            (Some(_), None) => Err(SeriesError::InvalidFamily(format!("{tag} requires an order n"))),
            (None, None) => Ok(Self { tag, n: None }),
            (None, Some(_)) => Err(SeriesError::InvalidFamily(format!("{tag} has a fixed order"))),
        }
    }

    /// Shorthand for an indexed family; panics on an invalid order.
    pub fn indexed(tag: FamilyTag, n: u32) -> Self {
        Self::new(tag, Some(n)).expect("invalid family order")
    }

    /// Shorthand for a fixed-order family; panics on an indexed tag.
    pub fn fixed(tag: FamilyTag) -> Self {
        Self::new(tag, None).expect("family requires an order")
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn is_alternating(&self) -> bool {
        self.tag == FamilyTag::AltH2K3
    }

    pub fn kernel(&self) -> Kernel {
        let n = self.n.unwrap_or(0) as i32;
        match self.tag {
            FamilyTag::S => Kernel::central().over(1, 0, n),
            FamilyTag::L => Kernel::central().over(2, 1, n),
            FamilyTag::V => Kernel::central().with_odd_harmonic(1).over(1, 0, n),
            FamilyTag::Z => Kernel::central().with_odd_harmonic(1).over(2, -1, n),
            FamilyTag::W => Kernel::one().with_odd_harmonic(2).over(1, 0, 2 * n),
            FamilyTag::LinH => Kernel::one().with_harmonic(1).over(1, 0, n),
            FamilyTag::LinOddH => Kernel::one().with_odd_harmonic(1).over(1, 0, n),
            FamilyTag::MixHhK3 => Kernel::one().with_harmonic(1).with_odd_harmonic(1).over(1, 0, 3),
            FamilyTag::AltH2K3 => Kernel::one().with_harmonic(2).over(1, 0, 3).alternating(),
            FamilyTag::H2kWeighted => Kernel::one().with_harmonic(1).with_harmonic_double(1).over(2, 0, 3),
            FamilyTag::H2kSq => Kernel::one().with_harmonic_double(2).over(1, 0, 3),
            FamilyTag::HsqK3 => Kernel::one().with_odd_harmonic(2).over(1, 0, 3),
            FamilyTag::HSqK3 => Kernel::one().with_harmonic(2).over(1, 0, 3),
        }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{}:{n}", self.tag),
            None => write!(f, "{}", self.tag),
        }
    }
}

impl From<SeriesFamily> for String {
    fn from(f: SeriesFamily) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for SeriesFamily {
    type Error = SeriesError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for SeriesFamily {
    type Err = SeriesError;

    /// Accepts `TAG:n` or a bare fixed-order `TAG`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().split_once(':') {
            Some((tag, n)) => {
                let n: u32 = n
                    .trim()
                    .parse()
                    .map_err(|_| SeriesError::InvalidFamily(format!("bad order in '{s}'")))?;
                SeriesFamily::new(tag.parse()?, Some(n))
            }
            None => SeriesFamily::new(s.parse()?, None),
        }
    }
}
