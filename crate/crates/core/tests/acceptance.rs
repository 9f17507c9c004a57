//! Acceptance suite: one printed pass/fail line per criterion.
//!
//! Run with `cargo test -p cbinom-core --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use rug::Rational;

use cbinom::closed_form::{catalog_all, catalog_texts, cf_format, cf_parse, ClosedForm};
use cbinom::euler::{relation_residual, w_closed_form_check, RelationId};
use cbinom::identities::{
    antisymmetry, finite_binom_sum, lemma1_f, lemma2_f, lemma3_g, lemma4_rhs, odd_partial_fraction, verify_convolution,
    ConvolutionId, RecurrenceProblem,
};
use cbinom::logsine::{ls4_check, theorem1_residual};
use cbinom::numerics::{central_ratio, const_zeta, harmonic, odd_harmonic, PrecisionContext, Real, SequenceTable};
use cbinom::series::{evaluate, evaluate_kernel, partial_sum, tail_bracket, EvalOptions, Kernel, SeriesFamily};
use cbinom::verify::{verify_closed_form, verify_targets, DisputedSet, Target, VerifyConfig};

fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::with_digits(digits).unwrap()
}

fn pow10(exp: u32, c: PrecisionContext) -> Real {
    Real::parse_decimal(&format!("1e-{exp}"), c).unwrap()
}

/// Prints the criterion line, then fails the test if any check failed.
fn criterion(n: u32, title: &str, failures: Vec<String>, detail: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} [{status}] {title}: {detail}");
    for f in &failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

#[test]
fn criterion_1_catalog() {
    let c = ctx(40);
    let tol = pow10(25, c);
    let targets: Vec<Target> = catalog_all().iter().map(|e| Target::Catalog(e.family)).collect();
    let started = Instant::now();
    let config = VerifyConfig::new(c, tol.clone());
    let report = verify_targets(&targets, &config, &DisputedSet::default());
    let elapsed = started.elapsed();
    let mut failures = Vec::new();
    if report.records.len() != 31 {
        failures.push(format!("{} catalog entries, expected 31", report.records.len()));
    }
    for r in &report.records {
        let err: f64 = r.abs_error.parse().unwrap_or(f64::INFINITY);
        if !r.pass || err.is_nan() || err >= 1e-25 {
            failures.push(format!("{}: abs_error {} numeric {} closed {}", r.target, r.abs_error, r.numeric_value, r.closed_form_value));
        }
        // diagnostics must carry at least ten significant digits
        let digits = r.numeric_value.chars().take_while(|&ch| ch != 'e').filter(char::is_ascii_digit).count();
        if digits < 10 && r.numeric_value != "0" {
            failures.push(format!("{}: numeric value '{}' too short", r.target, r.numeric_value));
        }
    }
    if elapsed > Duration::from_secs(600) {
        failures.push(format!("runtime {elapsed:?} exceeds 10 minutes"));
    }
    let worst = report
        .records
        .iter()
        .map(|r| r.abs_error.parse::<f64>().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    criterion(
        1,
        "catalog at 40 digits, tol 1e-25",
        failures,
        format!("{} entries, worst abs_error {worst:.3e}, {:.1}s", report.records.len(), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_exact_lemmas() {
    let mut failures = Vec::new();

    // the first lemma against its recurrence (2k−1)f(k) = (2k−2)f(k−1) + 1/k
    let p1 = RecurrenceProblem::lemma1();
    let f: Vec<Rational> = (1..=2000).map(|k| lemma1_f(k).unwrap()).collect();
    if f[0] != 1 {
        failures.push(format!("f(1) = {}", f[0]));
    }
    for k in 2..=2000u64 {
        let (cur, prev) = (&f[k as usize - 1], &f[k as usize - 2]);
        let direct = Rational::from(cur * (2 * k - 1)) - Rational::from(prev * (2 * k - 2)) - Rational::from((1, k));
        let harness = p1.residual(k, &cur.clone().into(), &prev.clone().into());
        if direct != 0 || !harness.is_zero() {
            failures.push(format!("first lemma k={k}: residual {direct}"));
            break;
        }
    }

    // the third lemma, rational and π parts separately
    let p3 = RecurrenceProblem::lemma3();
    let g: Vec<_> = (1..=2000).map(|j| lemma3_g(j).unwrap()).collect();
    for j in 2..=2000u64 {
        let r = p3.residual(j, &g[j as usize - 1], &g[j as usize - 2]);
        if r.rational != 0 || r.pi != 0 || r.ln2 != 0 {
            failures.push(format!("third lemma j={j}: residual {r}"));
            break;
        }
    }

    // finite binomial sum, against a recomputation from the sequence helpers
    let bad = (1..=1000u64).into_par_iter().find_first(|&k| match finite_binom_sum(k) {
        Ok(v) => v != Rational::from(1) - Rational::from(1) / (central_ratio(k) * Rational::from(2 * k + 1)),
        Err(_) => true,
    });
    if let Some(k) = bad {
        failures.push(format!("finite binomial sum k={k}"));
    }

    // odd partial fractions: limit h_i/(2i), and the truncation defect telescopes exactly
    let bad = (1..=1000u64).into_par_iter().find_first(|&i| {
        let kk = 7;
        let (partial, limit) = odd_partial_fraction(i, kk).unwrap();
        let want = odd_harmonic(i) / Rational::from(2 * i);
        let tail: Rational = (kk + 1..=kk + i).map(|k| Rational::from((1, 2 * k - 1))).sum();
        limit != want || partial != (&want - tail / Rational::from(2 * i))
    });
    if let Some(i) = bad {
        failures.push(format!("odd partial fraction i={i}"));
    }

    criterion(
        2,
        "exact lemma suites",
        failures,
        "recurrences k<=2000, finite sum k<=1000, partial-fraction limits i<=1000".into(),
    );
}

#[test]
fn criterion_3_series_oracles() {
    let c = ctx(30);
    let tol = pow10(20, c);
    let mut failures = Vec::new();
    let mut worst = Real::zero(c);
    for k in 1..=20u64 {
        let opts = EvalOptions::new(c);
        let shift = k as i64;
        let checks = [
            (Kernel::central().over(1, shift, 2), lemma2_f(k).unwrap().evaluate(c), "second"),
            (
                Kernel::central().with_odd_harmonic(1).over(1, shift, 1),
                Real::from_rational(&lemma4_rhs(k).unwrap(), c),
                "fourth",
            ),
        ];
        for (kernel, exact, name) in checks {
            let r = evaluate_kernel(&kernel, c, &opts).unwrap();
            let gap = (&r.value - &exact).abs();
            if !r.converged || gap > tol {
                failures.push(format!("{name} lemma k={k}: gap {}", gap.to_decimal(6)));
            }
            if gap > worst {
                worst = gap;
            }
        }
    }

    // evaluate() against an exact partial sum plus the rigorous tail bracket
    const K: u64 = 10_000;
    let families: Vec<SeriesFamily> =
        catalog_all().iter().map(|e| e.family).filter(|f| !f.is_alternating()).collect();
    let outside: Vec<String> = families
        .par_iter()
        .filter_map(|fam| {
            let (r, (lo, hi)) = match (evaluate(fam, c, &EvalOptions::new(c)), tail_bracket(fam, K, c)) {
                (Ok(r), Ok(b)) => (r, b),
                (Err(e), _) | (_, Err(e)) => return Some(format!("{fam}: {e}")),
            };
            let head = Real::from_rational(&partial_sum(fam, K), c);
            let rest = &r.value - &head;
            // one unit in the last place of slack for the rounding of the two values
            let slack = pow10(c.digits() - 1, c) * r.value.abs();
            (rest < &lo - &slack || rest > &hi + &slack).then(|| {
                format!("{fam}: value - partial = {} outside [{}, {}]", rest.to_decimal(8), lo.to_decimal(8), hi.to_decimal(8))
            })
        })
        .collect();
    let bracketed = families.len();
    failures.extend(outside);

    criterion(
        3,
        "series vs lemma oracles at 30 digits",
        failures,
        format!("lemma gaps <= {} for k=1..20; {bracketed} families inside tail brackets at K=10^4", worst.to_decimal(3)),
    );
}

#[test]
fn criterion_4_theorem() {
    let c = ctx(30);
    let tol = pow10(20, c);
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for n in 1..=5 {
        let r = theorem1_residual(n, c).unwrap();
        parts.push(format!("n={n} {}", r.to_decimal(3)));
        if r > tol {
            failures.push(format!("theorem residual n={n}: {}", r.to_decimal(6)));
        }
    }
    let ls4 = ls4_check(c).unwrap();
    if ls4 > tol {
        failures.push(format!("log-sine-cosine check: {}", ls4.to_decimal(6)));
    }
    criterion(4, "log-sine theorem residuals", failures, format!("{}; LS4 {}", parts.join(", "), ls4.to_decimal(3)));
}

#[test]
fn criterion_5_chains() {
    let c = ctx(30);
    let tol = pow10(20, c);
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for id in [ConvolutionId::Eq22_25, ConvolutionId::Eq62_71, ConvolutionId::Eq78_80, ConvolutionId::Eq94_96] {
        let r = verify_convolution(id, c).unwrap();
        parts.push(format!("{id} {}", r.to_decimal(3)));
        if r > tol {
            failures.push(format!("{id}: {}", r.to_decimal(6)));
        }
    }
    if let Some(k) = (1..=12).find(|&k| antisymmetry(k) != 0) {
        failures.push(format!("antisymmetry nonzero at K={k}"));
    }
    criterion(5, "derivation chains", failures, format!("{}; antisymmetry exactly 0 for K=1..12", parts.join(", ")));
}

#[test]
fn criterion_6_euler() {
    let c = ctx(25);
    let tol = pow10(15, c);
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for id in [RelationId::SplitEq104, RelationId::AssembleEq105, RelationId::MixFromEq101] {
        let r = relation_residual(id, c).unwrap();
        parts.push(format!("{id} {}", r.to_decimal(3)));
        if r > tol {
            failures.push(format!("{id}: {}", r.to_decimal(6)));
        }
    }
    for n in 1..=3 {
        let r = w_closed_form_check(n, c).unwrap();
        if r > tol {
            failures.push(format!("w({n}): {}", r.to_decimal(6)));
        }
    }
    // w(1) to 20 digits against 45/16 ζ(4) from the constant library
    let c30 = ctx(30);
    let w1 = evaluate(&SeriesFamily::indexed(cbinom::series::FamilyTag::W, 1), c30, &EvalOptions::new(c30)).unwrap();
    let closed = Real::from_rational(&Rational::from((45, 16)), c30) * const_zeta(4, c30).unwrap();
    if !w1.value.agrees_to(&closed, 20) {
        failures.push(format!("w(1) = {} vs {}", w1.value.to_decimal(25), closed.to_decimal(25)));
    }
    criterion(6, "Euler relations at 25 digits", failures, format!("{}; w(1) = {}", parts.join(", "), w1.value.to_decimal(21)));
}

#[test]
fn criterion_7_properties() {
    let mut failures = Vec::new();

    // sequence recurrences and the harmonic splitting, against standalone helpers
    let t = SequenceTable::with_max_index(4000);
    for k in 1..=2000u64 {
        let c_rec = &t.central(k - 1) * Rational::from((2 * k - 1, 2 * k));
        let h_rec = &t.harmonic(k - 1) + Rational::from((1, k));
        let o_rec = &t.odd_harmonic(k - 1) + Rational::from((1, 2 * k - 1));
        let split = &t.odd_harmonic(k) + Rational::from(&t.harmonic(k) / 2u32);
        if t.central(k) != c_rec || t.harmonic(k) != h_rec || t.odd_harmonic(k) != o_rec || t.harmonic(2 * k) != split {
            failures.push(format!("sequence identity at k={k}"));
            break;
        }
    }
    if t.harmonic(100) != harmonic(100) || t.central(100) != central_ratio(100) {
        failures.push("table disagrees with direct helpers".into());
    }

    // closed-form text survives parse/format for every catalog string
    let mut texts = 0;
    for (fam, text) in catalog_texts() {
        texts += 1;
        match cf_parse(text) {
            Ok(cf) if cf_parse(&cf_format(&cf)).as_ref() == Ok(&cf) => {}
            other => failures.push(format!("{fam}: roundtrip of '{text}' gave {other:?}")),
        }
    }

    // precision doubling
    let (lo, hi) = (ctx(30), ctx(60));
    for e in catalog_all() {
        if !e.closed_form.evaluate(lo).agrees_to(&e.closed_form.evaluate(hi), 28) {
            failures.push(format!("{}: precision doubling disagrees", e.family));
        }
    }

    // harness sensitivity: a closed form off by 1e-10 must fail
    let c = ctx(40);
    let config = VerifyConfig::new(c, pow10(25, c));
    let mut perturbed_errors = Vec::new();
    for e in catalog_all().iter().filter(|e| !e.family.is_alternating()).take(6) {
        let nudged: ClosedForm = e.closed_form.clone() + ClosedForm::from_rational(Rational::from((1, 10_000_000_000u64)));
        let r = verify_closed_form(&e.family, &nudged, &config);
        let err: f64 = r.abs_error.parse().unwrap_or(0.0);
        if r.pass || !(0.99e-10..1.01e-10).contains(&err) {
            failures.push(format!("{}: perturbed fixture pass={} abs_error={}", e.family, r.pass, r.abs_error));
        }
        perturbed_errors.push(err);
    }

    criterion(
        7,
        "property suites",
        failures,
        format!(
            "recurrences k<=2000, {texts} catalog strings roundtrip, doubling 30->60 digits, {} perturbed fixtures rejected",
            perturbed_errors.len()
        ),
    );
}
