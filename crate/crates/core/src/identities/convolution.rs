use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Serialize, Serializer};

use super::IdentityError;
use crate::numerics::{const_ln2, const_pi, const_zeta, PrecisionContext, Real, SequenceTable};
use crate::series::{evaluate_kernel, EvalOptions, FamilyTag, Kernel, SeriesFamily};

/// The derivation chains rebuilt numerically by [`verify_convolution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConvolutionId {
    Eq22_25,
    Eq27_29,
    Eq62_71,
    Eq78_80,
    Eq94_96,
}

impl ConvolutionId {
    pub const ALL: [ConvolutionId; 5] = [
        ConvolutionId::Eq22_25,
        ConvolutionId::Eq27_29,
        ConvolutionId::Eq62_71,
        ConvolutionId::Eq78_80,
        ConvolutionId::Eq94_96,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConvolutionId::Eq22_25 => "EQ22_25",
            ConvolutionId::Eq27_29 => "EQ27_29",
            ConvolutionId::Eq62_71 => "EQ62_71",
            ConvolutionId::Eq78_80 => "EQ78_80",
            ConvolutionId::Eq94_96 => "EQ94_96",
        }
    }
}

impl fmt::Display for ConvolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConvolutionId {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConvolutionId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| IdentityError::InvalidArgument(format!("unknown convolution id '{s}'")))
    }
}

impl Serialize for ConvolutionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Evaluates an auxiliary series and insists on convergence.
pub(crate) fn eval_converged(kernel: &Kernel, ctx: PrecisionContext) -> Result<Real, IdentityError> {
    let r = evaluate_kernel(kernel, ctx, &EvalOptions::new(ctx))?;
    if !r.converged {
        return Err(IdentityError::NotConverged {
            what: kernel.to_string(),
            self_error: r.self_error.to_decimal(3),
        });
    }
    Ok(r.value)
}

fn family(tag: FamilyTag, n: u32, ctx: PrecisionContext) -> Result<Real, IdentityError> {
    eval_converged(&SeriesFamily::indexed(tag, n).kernel(), ctx)
}

fn zeta(m: u32, ctx: PrecisionContext) -> Real {
    const_zeta(m, ctx).expect("zeta argument >= 2")
}

fn q(n: i64, d: i64, ctx: PrecisionContext) -> Real {
    Real::from_rational(&Rational::from((n, d)), ctx)
}

/// Largest absolute gap between consecutive stages of a chain.
fn chain_residual(stages: &[Real]) -> Real {
    stages
        .windows(2)
        .map(|w| (&w[0] - &w[1]).abs())
        .fold(Real::zero(stages[0].ctx()), |a, b| if b > a { b } else { a })
}

/// Rebuilds both sides of a derivation chain from independently evaluated series
/// and returns the largest gap between consecutive stages.
pub fn verify_convolution(id: ConvolutionId, ctx: PrecisionContext) -> Result<Real, IdentityError> {
    let ln2 = const_ln2(ctx);
    let pi = const_pi(ctx);
    let stages = match id {
        ConvolutionId::Eq22_25 => {
            // Σ_i (c_i/i) Σ_k c_k/(k+i)², three ways
            let (s1, s2, s3) = (family(FamilyTag::S, 1, ctx)?, family(FamilyTag::S, 2, ctx)?, family(FamilyTag::S, 3, ctx)?);
            let lin_h = family(FamilyTag::LinH, 2, ctx)?;
            let lin_odd = family(FamilyTag::LinOddH, 2, ctx)?;
            let (z2, z3) = (zeta(2, ctx), zeta(3, ctx));
            let half = q(1, 2, ctx);
            // partial fractions, the swapped copy of the sum, then the first lemma
            let split = &half * &s1 * &s2 - &half * (&z3 - &s3);
            let reduced = &ln2 * &z2 - ln2.pow(3) * q(2, 1, ctx) - &half * &z3 + &half * &s3;
            // inner sum replaced by the second lemma
            let substituted = q(2, 1, ctx) * &lin_odd - &lin_h + &z3 - q(2, 1, ctx) * &ln2 * &z2 - &s3;
            vec![substituted, split, reduced]
        }
        ConvolutionId::Eq27_29 => {
            // after the swap cancels, S2² − 2·S1·S3 + 2(ζ4 − S4) must vanish
            let s: Vec<Real> = (1..=4).map(|n| family(FamilyTag::S, n, ctx)).collect::<Result<_, _>>()?;
            let z4 = zeta(4, ctx);
            let lhs = s[1].pow(2) + q(2, 1, ctx) * (&z4 - &s[3]);
            let rhs = q(2, 1, ctx) * &s[0] * &s[2];
            vec![lhs, rhs]
        }
        ConvolutionId::Eq62_71 => {
            // Σ_k (2k−1)^-2 Σ_i c_i/(2i+2k−1) with the inner sum from the third lemma
            let weighted = eval_converged(&Kernel::central().over(1, 0, -1).over(2, -1, 3), ctx)?;
            let odd_zeta3 = eval_converged(&Kernel::one().over(2, -1, 3), ctx)?;
            let l2 = family(FamilyTag::L, 2, ctx)?;
            let (z2, z3) = (zeta(2, ctx), zeta(3, ctx));
            let s1 = family(FamilyTag::S, 1, ctx)?;
            let odd_zeta2 = eval_converged(&Kernel::one().over(2, -1, 2), ctx)?;
            let v2 = family(FamilyTag::V, 2, ctx)?;
            let seven_eighths = q(7, 8, ctx) * &z3;
            let half_pi = &pi * q(1, 2, ctx);
            let lemma_side = &pi * &weighted - &odd_zeta3;
            let shifted = &half_pi * &l2 - &seven_eighths + &half_pi;
            let closed = pi.pow(2) * q(1, 4, ctx) * &ln2 - &seven_eighths;
            // other order of summation, inner sum by partial fractions
            let swapped = q(1, 2, ctx) * &s1 * &odd_zeta2 - q(1, 4, ctx) * &v2;
            let swapped_closed = q(3, 4, ctx) * &ln2 * &z2 - q(1, 4, ctx) * &v2;
            vec![lemma_side, shifted, closed, swapped_closed, swapped]
        }
        ConvolutionId::Eq78_80 => {
            let hc = Kernel::central().with_odd_harmonic(1);
            let lhs = q(1, 2, ctx) * eval_converged(&hc.clone().over(1, 0, 1).over(2, -1, 2), ctx)?;
            let a = eval_converged(&Kernel::one().over(1, 0, 2).over(2, -1, 1), ctx)?;
            let b = eval_converged(&Kernel::central().over(1, 0, 1).over(2, -1, 2), ctx)?;
            let c = eval_converged(&Kernel::one().over(1, 0, 2).over(2, -1, 2), ctx)?;
            // inner partial fractions leave Σ c_i/(2i−1)² · Σ 1/(2k(2k−1)), the latter being ln 2
            let odd_sq = eval_converged(&Kernel::central().over(2, -1, 2), ctx)?;
            // (πk c_k − 1)/(k²(2k−1)²) split into two convergent pieces
            let swapped = &odd_sq * &ln2 - q(1, 4, ctx) * &a + q(1, 4, ctx) * (&pi * &b - &c);
            let closed = &pi * &ln2 - &pi + q(3, 4, ctx) * zeta(2, ctx);
            // 1/(i(2i−1)²) = 1/i − 2/(2i−1) + 2/(2i−1)²
            let (v1, z1, z2) = (family(FamilyTag::V, 1, ctx)?, family(FamilyTag::Z, 1, ctx)?, family(FamilyTag::Z, 2, ctx)?);
            let by_parts = q(1, 2, ctx) * &v1 - &z1 + &z2;
            vec![lhs, swapped, closed, by_parts]
        }
        ConvolutionId::Eq94_96 => {
            // the fourth lemma turns the double sum into w(1); symmetrizing gives ½·v(1)²
            let w1 = family(FamilyTag::W, 1, ctx)?;
            let v1 = family(FamilyTag::V, 1, ctx)?;
            let half_square = q(1, 2, ctx) * v1.pow(2);
            let closed = q(45, 16, ctx) * zeta(4, ctx);
            vec![w1, half_square, closed]
        }
    };
    Ok(chain_residual(&stages))
}

/// `Σ_{i≤K}(c_i/i²)Σ_{k≤K}c_k/(k+i)² − Σ_{k≤K}(c_k/k²)Σ_{i≤K}c_i/(k+i)²`, exactly.
///
/// The two double sums are accumulated in different orders; the result must be zero.
pub fn antisymmetry(k_max: u64) -> Rational {
    let t = SequenceTable::with_max_index(k_max);
    let c: Vec<Rational> = (0..=k_max).map(|k| t.central(k)).collect();
    let pair = |a: u64, b: u64| Rational::from((1, (a + b) * (a + b)));
    let mut first = Rational::new();
    for i in 1..=k_max {
        let mut inner = Rational::new();
        for k in 1..=k_max {
            inner += &c[k as usize] * pair(k, i) ;
        }
        first += inner * &c[i as usize] / (i * i);
    }
    let mut second = Rational::new();
    for i in 1..=k_max {
        for k in 1..=k_max {
            let w = Rational::from(&c[k as usize] * &c[i as usize]) / (k * k);
            second += w * pair(k, i);
        }
    }
    first - second
}
