//! Nonlinear Euler-sum relations from even/odd splitting, and the `w(n)` checks.

use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::closed_form::{catalog_get, ClosedFormError};
use crate::identities::{eval_converged, IdentityError};
use crate::numerics::{const_zeta, PrecisionContext, Real, SequenceTable};
use crate::series::{evaluate_alternating, EvalOptions, FamilyTag, SeriesFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error(transparent)]
    Evaluation(#[from] IdentityError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    /// `ΣH_k²/k³ − Σ(−1)^(k−1)H_k²/k³ = ¼ΣH_{2k}²/k³`
    SplitEq104,
    /// `Σh_k²/k³ = (15/4)ΣH_k²/k³ − 4Σ(−1)^(k−1)H_k²/k³ − ΣH_k h_k/k³`
    AssembleEq105,
    /// `ΣH_k h_k/k³ = 8ΣH_k H_{2k}/(2k)³ − ½ΣH_k²/k³`
    MixFromEq101,
    /// `w(1) = ½(Σh_k c_k/k)²`
    WIdentityEq95,
}

impl RelationId {
    pub const ALL: [RelationId; 4] = [
        RelationId::SplitEq104,
        RelationId::AssembleEq105,
        RelationId::MixFromEq101,
        RelationId::WIdentityEq95,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationId::SplitEq104 => "SPLIT_EQ104",
            RelationId::AssembleEq105 => "ASSEMBLE_EQ105",
            RelationId::MixFromEq101 => "MIX_FROM_EQ101",
            RelationId::WIdentityEq95 => "W_IDENTITY_EQ95",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = EulerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EulerError::InvalidArgument(format!("unknown relation '{s}'")))
    }
}

impl Serialize for RelationId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

fn series(tag: FamilyTag, ctx: PrecisionContext) -> Result<Real, EulerError> {
    Ok(eval_converged(&SeriesFamily::fixed(tag).kernel(), ctx)?)
}

fn alternating(ctx: PrecisionContext) -> Result<Real, EulerError> {
    let fam = SeriesFamily::fixed(FamilyTag::AltH2K3);
    let r = evaluate_alternating(&fam, ctx, &EvalOptions::new(ctx)).map_err(IdentityError::from)?;
    if !r.converged {
        return Err(IdentityError::NotConverged {
            what: fam.to_string(),
            self_error: r.self_error.to_decimal(3),
        }
        .into());
    }
    Ok(r.value)
}

fn catalog_value(fam: SeriesFamily, ctx: PrecisionContext) -> Result<Real, EulerError> {
    Ok(catalog_get(&fam)?.closed_form.evaluate(ctx))
}

fn q(n: i64, d: i64, ctx: PrecisionContext) -> Real {
    Real::from_rational(&Rational::from((n, d)), ctx)
}

fn largest(gaps: Vec<Real>) -> Real {
    gaps.into_iter().map(|g| g.abs()).reduce(|a, b| if b > a { b } else { a }).expect("at least one gap")
}

/// Evaluates every series in the relation independently and returns `|LHS − RHS|`
/// (the largest such gap when the relation also meets a catalogued value).
pub fn relation_residual(id: RelationId, ctx: PrecisionContext) -> Result<Real, EulerError> {
    Ok(match id {
        RelationId::SplitEq104 => {
            let h_sq = series(FamilyTag::HSqK3, ctx)?;
            let alt = alternating(ctx)?;
            let doubled = series(FamilyTag::H2kSq, ctx)?;
            largest(vec![h_sq - alt - q(1, 4, ctx) * doubled])
        }
        RelationId::AssembleEq105 => {
            let odd_sq = series(FamilyTag::HsqK3, ctx)?;
            let h_sq = series(FamilyTag::HSqK3, ctx)?;
            let alt = alternating(ctx)?;
            let mix = series(FamilyTag::MixHhK3, ctx)?;
            let rhs = q(15, 4, ctx) * h_sq - q(4, 1, ctx) * alt - mix;
            let closed = catalog_value(SeriesFamily::fixed(FamilyTag::HsqK3), ctx)?;
            largest(vec![&odd_sq - &rhs, rhs - closed])
        }
        RelationId::MixFromEq101 => {
            let mix = series(FamilyTag::MixHhK3, ctx)?;
            let weighted = series(FamilyTag::H2kWeighted, ctx)?;
            let h_sq = series(FamilyTag::HSqK3, ctx)?;
            let numeric = q(8, 1, ctx) * weighted - q(1, 2, ctx) * &h_sq;
            // the same split applied to the catalogued values; ΣH_k²/k³ stays numeric
            let mix_cf = catalog_value(SeriesFamily::fixed(FamilyTag::MixHhK3), ctx)?;
            let weighted_cf = catalog_value(SeriesFamily::fixed(FamilyTag::H2kWeighted), ctx)?;
            let from_catalog = q(8, 1, ctx) * weighted_cf - q(1, 2, ctx) * &h_sq;
            largest(vec![mix - numeric, mix_cf - from_catalog])
        }
        RelationId::WIdentityEq95 => {
            let w1 = eval_converged(&SeriesFamily::indexed(FamilyTag::W, 1).kernel(), ctx)?;
            let v1 = eval_converged(&SeriesFamily::indexed(FamilyTag::V, 1).kernel(), ctx)?;
            let closed = q(45, 16, ctx) * const_zeta(4, ctx).expect("zeta(4)");
            let half_square = q(1, 2, ctx) * v1.pow(2);
            largest(vec![&w1 - &half_square, w1 - closed])
        }
    })
}

/// `|evaluate(W, n) − closed form|` for `n ∈ {1, 2, 3}`.
pub fn w_closed_form_check(n: u32, ctx: PrecisionContext) -> Result<Real, EulerError> {
    if !(1..=3).contains(&n) {
        return Err(EulerError::InvalidArgument(format!("w(n) closed forms exist for n = 1..3, got {n}")));
    }
    let fam = SeriesFamily::indexed(FamilyTag::W, n);
    let numeric = eval_converged(&fam.kernel(), ctx)?;
    Ok((numeric - catalog_value(fam, ctx)?).abs())
}

/// For each `K = 1..=k_max`, the exact value of
/// `Σ_{k≤2K} H_k²/k³ − Σ_{k≤2K} (−1)^(k−1) H_k²/k³ − ¼ Σ_{k≤K} H_{2k}²/k³`.
pub fn partition_defects(k_max: u64) -> Vec<Rational> {
    let t = SequenceTable::with_max_index(2 * k_max);
    let mut plain = Rational::new();
    let mut signed = Rational::new();
    let mut doubled = Rational::new();
    let mut out = Vec::with_capacity(k_max as usize);
    for kk in 1..=k_max {
        for k in [2 * kk - 1, 2 * kk] {
            let term = Rational::from(t.harmonic(k).square_ref()) / (k * k * k);
            if k % 2 == 1 {
                signed += &term;
            } else {
                signed -= &term;
            }
            plain += term;
        }
        doubled += Rational::from(t.harmonic(2 * kk).square_ref()) / (kk * kk * kk);
        out.push(Rational::from(&plain - &signed) - Rational::from(&doubled / 4u32));
    }
    out
}

/// `H_{2k}² = h_k² + h_k H_k + H_k²/4`, checked exactly.
pub fn double_harmonic_identity(k: u64, table: &SequenceTable) -> bool {
    let big = table.harmonic(k);
    let odd = table.odd_harmonic(k);
    let lhs = Rational::from(table.harmonic(2 * k).square_ref());
    let rhs = Rational::from(odd.square_ref()) + Rational::from(&odd * &big) + Rational::from(big.square_ref()) / 4u32;
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_roundtrip() {
        for id in RelationId::ALL {
            assert_eq!(id.as_str().parse::<RelationId>().unwrap(), id);
        }
        assert!("SPLIT".parse::<RelationId>().is_err());
    }

    #[test]
    fn exact_partition() {
        assert!(partition_defects(60).iter().all(|d| *d == 0));
    }

    #[test]
    fn harmonic_backbone() {
        let t = SequenceTable::new();
        assert!((1..=500).all(|k| double_harmonic_identity(k, &t)));
    }

    #[test]
    fn relations_at_25_digits() {
        let ctx = PrecisionContext::with_digits(25).unwrap();
        for id in RelationId::ALL {
            let r = relation_residual(id, ctx).unwrap();
            assert!(r < 1e-15, "{id}: {r}");
        }
    }

    #[test]
    fn w_checks() {
        let ctx = PrecisionContext::with_digits(25).unwrap();
        for n in 1..=3 {
            assert!(w_closed_form_check(n, ctx).unwrap() < 1e-15, "n={n}");
        }
        assert!(w_closed_form_check(4, ctx).is_err());
    }
}
