use std::fmt;

use serde::{Serialize, Serializer};

use super::ClosedFormError;
use crate::numerics::{const_li_half, const_ln2, const_pi, const_zeta, PrecisionContext, Real};

/// A basis constant. The derived order is the canonical one:
/// `Pi < Ln2 < Zeta(2) < Zeta(3) < … < LiHalf(2) < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstSymbol {
    Pi,
    Ln2,
    Zeta(u32),
    LiHalf(u32),
}

impl ConstSymbol {
    pub fn zeta(m: u32) -> Result<Self, ClosedFormError> {
        match m {
            0 | 1 => Err(ClosedFormError::InvalidSymbol(format!("zeta({m}) diverges"))),
            m => Ok(ConstSymbol::Zeta(m)),
        }
    }

    /// `Li_m(1/2)`; `m = 1` is `ln 2` and must be written that way.
    pub fn li_half(m: u32) -> Result<Self, ClosedFormError> {
        match m {
            0 => Err(ClosedFormError::InvalidSymbol("Li0(1/2) is not a basis constant".into())),
            1 => Err(ClosedFormError::InvalidSymbol("Li1(1/2) equals ln 2; use ln2".into())),
            m => Ok(ConstSymbol::LiHalf(m)),
        }
    }

    pub fn evaluate(self, ctx: PrecisionContext) -> Real {
        match self {
            ConstSymbol::Pi => const_pi(ctx),
            ConstSymbol::Ln2 => const_ln2(ctx),
            ConstSymbol::Zeta(m) => const_zeta(m, ctx).expect("validated zeta index"),
            ConstSymbol::LiHalf(m) => const_li_half(m, ctx).expect("validated polylog index"),
        }
    }
}

impl fmt::Display for ConstSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstSymbol::Pi => f.write_str("pi"),
            ConstSymbol::Ln2 => f.write_str("ln2"),
            ConstSymbol::Zeta(m) => write!(f, "z{m}"),
            ConstSymbol::LiHalf(m) => write!(f, "Li{m}"),
        }
    }
}

impl Serialize for ConstSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
