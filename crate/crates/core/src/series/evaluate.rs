use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::asymptotic::{kernel_expansion, power_log_tail_raw};
use super::kernel::{ExactState, FloatState, Kernel, Needs};
use super::{SeriesError, SeriesFamily};
use crate::numerics::{pow10_neg, PrecisionContext, Real};

/// Extra working bits on top of the context precision for long direct sums.
const WORK_GUARD_BITS: u32 = 32;

/// Knobs for [`evaluate`]: direct-sum cutoff, correction order and target tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    pub cutoff: u64,
    pub em_order: usize,
    pub tol: Real,
}

impl EvalOptions {
    pub const DEFAULT_CUTOFF: u64 = 10_000;
    pub const DEFAULT_EM_ORDER: usize = 12;
    pub const MIN_CUTOFF: u64 = 100;
    pub const MIN_EM_ORDER: usize = 2;

    /// Defaults for `ctx`: `K0 = 10⁴`, twelve correction terms, `tol = 10^-(digits-5)`.
    pub fn new(ctx: PrecisionContext) -> Self {
        let exp = ctx.digits().saturating_sub(5);
        Self {
            cutoff: Self::DEFAULT_CUTOFF,
            em_order: Self::DEFAULT_EM_ORDER,
            tol: Real::new(pow10_neg(exp, ctx.bits()), ctx),
        }
    }

    pub fn with_cutoff(mut self, cutoff: u64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_em_order(mut self, em_order: usize) -> Self {
        self.em_order = em_order;
        self
    }

    pub fn with_tol(mut self, tol: Real) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.cutoff < Self::MIN_CUTOFF {
            return Err(SeriesError::InvalidOptions(format!("cutoff {} below {}", self.cutoff, Self::MIN_CUTOFF)));
        }
        if self.em_order < Self::MIN_EM_ORDER {
            return Err(SeriesError::InvalidOptions(format!(
                "em_order {} below {}",
                self.em_order,
                Self::MIN_EM_ORDER
            )));
        }
        if self.tol.is_sign_negative() {
            return Err(SeriesError::InvalidOptions("negative tolerance".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Real,
    pub terms_used: u64,
    pub tail_estimate: Real,
    pub converged: bool,
    pub self_error: Real,
}

pub fn term(spec: &SeriesFamily, k: u64) -> Result<Rational, SeriesError> {
    term_kernel(&spec.kernel(), k)
}

pub fn term_kernel(kernel: &Kernel, k: u64) -> Result<Rational, SeriesError> {
    if k == 0 {
        return Err(SeriesError::IndexOutOfRange(k));
    }
    let mut state = ExactState::start(Needs::of(kernel));
    while state.k < k {
        state.advance();
    }
    Ok(kernel.eval_exact(k, &state))
}

pub fn partial_sum(spec: &SeriesFamily, k_max: u64) -> Rational {
    partial_sum_kernel(&spec.kernel(), k_max)
}

pub fn partial_sum_kernel(kernel: &Kernel, k_max: u64) -> Rational {
    let mut state = ExactState::start(Needs::of(kernel));
    let mut sum = Rational::new();
    while state.k < k_max {
        state.advance();
        sum += kernel.eval_exact(state.k, &state);
    }
    sum
}

/// Direct floating sums at each index in `stops` (ascending); returns one sum per stop.
pub(crate) fn float_partial_sums(kernel: &Kernel, stops: &[u64], bits: u32) -> Vec<Float> {
    let mut state = FloatState::start(bits, Needs::of(kernel));
    let mut sum = Float::new(bits);
    let mut out = Vec::with_capacity(stops.len());
    for &stop in stops {
        while state.k < stop {
            state.advance();
            sum += kernel.eval_float(state.k, &state);
        }
        out.push(sum.clone());
    }
    out
}

pub fn evaluate(spec: &SeriesFamily, ctx: PrecisionContext, opts: &EvalOptions) -> Result<EvalResult, SeriesError> {
    if spec.is_alternating() {
        return Err(SeriesError::Alternating(spec.to_string()));
    }
    evaluate_kernel(&spec.kernel(), ctx, opts)
}

/// Direct sum to `K0` plus an Euler–Maclaurin tail, checked against a run at `(2K0, em+2)`.
pub fn evaluate_kernel(kernel: &Kernel, ctx: PrecisionContext, opts: &EvalOptions) -> Result<EvalResult, SeriesError> {
    kernel.validate()?;
    opts.validate()?;
    if kernel.alternating {
        return Err(SeriesError::Alternating(kernel.to_string()));
    }
    let k0 = opts.cutoff;
    if (k0 as f64) < 8.0 * kernel.max_shift() {
        return Err(SeriesError::InvalidOptions(format!(
            "cutoff {k0} too small for shifted kernel {kernel}"
        )));
    }
    let bits = ctx.bits() + WORK_GUARD_BITS;
    let sums = float_partial_sums(kernel, &[k0, 2 * k0], bits);

    let run = |n: u64, order: usize, direct: &Float| -> (Float, Float) {
        let tail = kernel_expansion(kernel, order, bits).tail_sum(n, order);
        (Float::with_val(bits, direct + &tail), tail)
    };
    let (v1, _) = run(k0, opts.em_order, &sums[0]);
    let (v2, tail2) = run(2 * k0, opts.em_order + 2, &sums[1]);
    Ok(finish(v1, v2, tail2, 2 * k0, ctx, opts))
}

fn finish(v1: Float, v2: Float, tail: Float, terms_used: u64, ctx: PrecisionContext, opts: &EvalOptions) -> EvalResult {
    let self_error = Real::new(Float::with_val(v2.prec(), &v2 - &v1).abs(), ctx);
    let converged = self_error <= opts.tol;
    EvalResult {
        value: Real::new(v2, ctx),
        terms_used,
        tail_estimate: Real::new(tail.abs(), ctx),
        converged,
        self_error,
    }
}

/// Repeated averaging of `p+1` consecutive partial sums starting at index `k`.
fn averaged(sums: &[Float], p: usize, bits: u32) -> Float {
    let mut acc = Float::new(bits);
    for (i, s) in sums.iter().take(p + 1).enumerate() {
        let binom = Integer::from(Integer::binomial_u(p as u32, i as u32));
        acc += Float::with_val(bits, s * &binom);
    }
    acc >> p as u32
}

pub fn evaluate_alternating(spec: &SeriesFamily, ctx: PrecisionContext, opts: &EvalOptions) -> Result<EvalResult, SeriesError> {
    if !spec.is_alternating() {
        return Err(SeriesError::NotAlternating(spec.to_string()));
    }
    evaluate_alternating_kernel(&spec.kernel(), ctx, opts)
}

/// Averaged partial sums of order `p` at `K0`, checked against order `2p` at `2K0`.
pub fn evaluate_alternating_kernel(
    kernel: &Kernel,
    ctx: PrecisionContext,
    opts: &EvalOptions,
) -> Result<EvalResult, SeriesError> {
    kernel.validate()?;
    opts.validate()?;
    if !kernel.alternating {
        return Err(SeriesError::NotAlternating(kernel.to_string()));
    }
    let bits = ctx.bits() + WORK_GUARD_BITS;
    let k0 = opts.cutoff;
    let p = opts.em_order;
    let first: Vec<u64> = (0..=p as u64).map(|i| k0 + i).collect();
    let second: Vec<u64> = (0..=2 * p as u64).map(|i| 2 * k0 + i).collect();
    let stops: Vec<u64> = first.iter().chain(second.iter()).copied().collect();
    let sums = float_partial_sums(kernel, &stops, bits);
    let (s1, s2) = sums.split_at(first.len());
    let v1 = averaged(s1, p, bits);
    let v2 = averaged(s2, 2 * p, bits);
    let tail = Float::with_val(bits, &v2 - &s2[0]);
    Ok(finish(v1, v2, tail, 2 * k0 + 2 * p as u64, ctx, opts))
}

/// `Σ_{k>n} (ln k)^m / k^(s_twice/2)` for `s_twice > 2` and `n ≥ 100`.
pub fn power_log_tail(s_twice: u32, log_power: u32, n: u64, ctx: PrecisionContext) -> Result<Real, SeriesError> {
    if s_twice <= 2 {
        return Err(SeriesError::Divergent(format!("k^(-{s_twice}/2) (ln k)^{log_power}")));
    }
    if n < 100 {
        return Err(SeriesError::InvalidOptions(format!("tail start {n} below 100")));
    }
    let bits = ctx.bits() + WORK_GUARD_BITS;
    Ok(Real::new(power_log_tail_raw(s_twice as i64, log_power, n, 30, bits), ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{const_ln2, const_pi, const_zeta};
    use crate::series::FamilyTag;

    fn fam(tag: FamilyTag, n: u32) -> SeriesFamily {
        SeriesFamily::indexed(tag, n)
    }

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::with_digits(d).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(term(&fam(FamilyTag::S, 1), 2).unwrap(), Rational::from((3, 16)));
        assert_eq!(term(&fam(FamilyTag::L, 1), 1).unwrap(), Rational::from((1, 6)));
        assert_eq!(term(&fam(FamilyTag::V, 2), 2).unwrap(), Rational::from((1, 8)));
        assert!(term(&fam(FamilyTag::S, 1), 0).is_err());
    }

    #[test]
    fn alternating_term_signs() {
        let alt = SeriesFamily::fixed(FamilyTag::AltH2K3);
        assert_eq!(term(&alt, 1).unwrap(), 1);
        assert_eq!(term(&alt, 2).unwrap(), Rational::from((-9, 32)));
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sum(&fam(FamilyTag::S, 1), 2), Rational::from((11, 16)));
        assert_eq!(partial_sum(&fam(FamilyTag::S, 3), 0), 0);
        // h_1²/1² + h_2²/2² = 1 + (16/9)/4
        assert_eq!(partial_sum(&fam(FamilyTag::W, 1), 2), Rational::from((13, 9)));
        assert_eq!(partial_sum(&fam(FamilyTag::W, 2), 2), Rational::from((10, 9)));
    }

    #[test]
    fn float_sums_match_exact_sums() {
        let k = fam(FamilyTag::Z, 2).kernel();
        let exact = partial_sum_kernel(&k, 300);
        let approx = &float_partial_sums(&k, &[300], 200)[0];
        let err = Float::with_val(200, approx - &exact).abs();
        assert!(err.to_f64() < 1e-50);
    }

    #[test]
    fn evaluate_s1_is_two_ln2() {
        let c = ctx(30);
        let r = evaluate(&fam(FamilyTag::S, 1), c, &EvalOptions::new(c)).unwrap();
        assert!(r.converged);
        let expected = const_ln2(c) * Real::from_i64(2, c);
        assert!((r.value - expected).abs() < 1e-26);
    }

    #[test]
    fn evaluate_l1_and_z2() {
        let c = ctx(30);
        let opts = EvalOptions::new(c);
        let pi = const_pi(c);
        let half = Real::from_rational(&Rational::from((1, 2)), c);
        let l1 = evaluate(&fam(FamilyTag::L, 1), c, &opts).unwrap();
        assert!((l1.value - (pi.clone() * half.clone() - Real::from_i64(1, c))).abs() < 1e-26);
        let z2 = evaluate(&fam(FamilyTag::Z, 2), c, &opts).unwrap();
        let expected = pi.clone() * const_ln2(c) - pi * half;
        assert!((z2.value - expected).abs() < 1e-26);
    }

    #[test]
    fn evaluate_v1() {
        let c = ctx(30);
        let r = evaluate(&fam(FamilyTag::V, 1), c, &EvalOptions::new(c)).unwrap();
        let expected = const_zeta(2, c).unwrap() * Real::from_rational(&Rational::from((3, 2)), c);
        assert!((r.value - expected).abs() < 1e-26);
    }

    #[test]
    fn evaluate_rejects_alternating_and_bad_options() {
        let c = ctx(20);
        let alt = SeriesFamily::fixed(FamilyTag::AltH2K3);
        assert!(matches!(evaluate(&alt, c, &EvalOptions::new(c)), Err(SeriesError::Alternating(_))));
        let opts = EvalOptions::new(c).with_cutoff(50);
        assert!(evaluate(&fam(FamilyTag::S, 2), c, &opts).is_err());
        let opts = EvalOptions::new(c).with_em_order(1);
        assert!(evaluate(&fam(FamilyTag::S, 2), c, &opts).is_err());
        assert!(evaluate_alternating(&fam(FamilyTag::S, 2), c, &EvalOptions::new(c)).is_err());
    }

    #[test]
    fn tight_tolerance_reports_non_convergence() {
        let c = ctx(30);
        let opts = EvalOptions::new(c).with_cutoff(100).with_em_order(2);
        let r = evaluate(&fam(FamilyTag::S, 1), c, &opts).unwrap();
        assert!(!r.converged);
        assert!(r.self_error > opts.tol);
    }

    #[test]
    fn alternating_matches_split() {
        // Σ(-1)^(k-1) a_k = Σ a_k - 2 Σ a_{2k} with a_k = H_k²/k³, so Σalt = ΣH²/k³ - ¼ΣH_2k²/k³
        let c = ctx(25);
        let opts = EvalOptions::new(c);
        let alt = evaluate_alternating(&SeriesFamily::fixed(FamilyTag::AltH2K3), c, &opts).unwrap();
        assert!(alt.converged);
        let all = evaluate(&SeriesFamily::fixed(FamilyTag::HSqK3), c, &opts).unwrap();
        let even = evaluate(&SeriesFamily::fixed(FamilyTag::H2kSq), c, &opts).unwrap();
        let split = all.value - even.value * Real::from_rational(&Rational::from((1, 4)), c);
        assert!((alt.value - split).abs() < 1e-15);
    }

    #[test]
    fn power_log_tail_of_cubes() {
        let c = ctx(30);
        let tail = power_log_tail(6, 0, 1000, c).unwrap();
        let partial = Real::from_rational(&partial_sum_kernel(&Kernel::one().over(1, 0, 3), 1000), c);
        assert!((partial + tail - const_zeta(3, c).unwrap()).abs() < 1e-28);
        assert!(power_log_tail(2, 0, 1000, c).is_err());
    }
}
