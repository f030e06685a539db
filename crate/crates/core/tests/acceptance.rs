//! Acceptance criteria. Runs without the libtest harness so each criterion
//! prints exactly one line; exits nonzero if any criterion fails or runs
//! over its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fkradial::freeproduct::FPWord;
use fkradial::verify::{self, first_failure, SuiteLimits, VerificationReport};
use fkradial::{FPConfig, RecurrenceMatrix, DEFAULT_CAP};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn summarize(reports: &[VerificationReport]) -> Outcome {
    match first_failure(reports) {
        None => Ok(format!("{} checks", reports.len())),
        Some(r) => Err(format!(
            "{} [{}] expected {} got {} {}",
            r.check, r.params, r.expected, r.actual, r.detail
        )),
    }
}

fn collect(parts: Vec<fkradial::Result<Vec<VerificationReport>>>) -> Outcome {
    let mut all = Vec::new();
    for p in parts {
        all.extend(p.map_err(|e| e.to_string())?);
    }
    summarize(&all)
}

fn c1() -> Outcome {
    collect(vec![
        verify::check_radial_recurrence(2, 6, DEFAULT_CAP),
        verify::check_radial_recurrence(3, 6, DEFAULT_CAP),
    ])
}

fn c2() -> Outcome {
    collect(vec![
        verify::check_norm_formula(2, 6, DEFAULT_CAP),
        verify::check_norm_formula(3, 6, DEFAULT_CAP),
    ])
}

fn c3() -> Outcome {
    let mut parts = Vec::new();
    for k in [2, 3] {
        parts.push(verify::check_abc_vs_enumeration(
            k,
            8,
            &RecurrenceMatrix::standard(k),
            DEFAULT_CAP,
        ));
    }
    for k in [2, 3, 5] {
        parts.push(verify::check_closed_form(k, 30));
        parts.push(verify::check_count_identities(k, 30));
    }
    collect(parts)
}

fn c4() -> Outcome {
    collect(vec![verify::check_nu_sets(2, 8, DEFAULT_CAP)])
}

fn c5() -> Outcome {
    collect(vec![verify::check_cancellation_counts(2, 2, 8, DEFAULT_CAP)])
}

fn c6() -> Outcome {
    collect(vec![verify::check_sandwich_expectation(2, 2, 8, DEFAULT_CAP)])
}

fn c7() -> Outcome {
    collect(vec![
        verify::check_deviation_bound(2, 2, 8, DEFAULT_CAP),
        verify::check_series(2, 2, 12, DEFAULT_CAP),
    ])
}

/// Every sample `x` and `y` has a syllable that is not a power of the
/// designated element in its factor.
fn has_non_power(w: &FPWord, cfg: &FPConfig) -> bool {
    w.syllables().iter().any(|s| {
        cfg.reduce([s.clone()])
            .map(|single| cfg.is_in_fk(&single).is_none())
            .unwrap_or(false)
    })
}

fn free_product(powers: (i64, i64)) -> Outcome {
    let cfg = FPConfig::z2_star_z(powers);
    let pairs = verify::fp_sample_words(&cfg).map_err(|e| e.to_string())?;
    if let Some((x, y)) = pairs
        .iter()
        .find(|(x, y)| !has_non_power(x, &cfg) || !has_non_power(y, &cfg))
    {
        return Err(format!("sample pair ({x}, {y}) lacks a non-power syllable"));
    }
    collect(vec![verify::check_free_product(&cfg, &pairs, 8, DEFAULT_CAP)])
}

fn c10() -> Outcome {
    let limits = SuiteLimits {
        alpha_coefficient_shift: 1,
        ..Default::default()
    };
    let reports = verify::check_abc_vs_enumeration(2, 8, &limits.matrix(2), DEFAULT_CAP).map_err(|e| e.to_string())?;
    match first_failure(&reports) {
        Some(r) if r.params == "k=2 n=3" => Ok(format!(
            "perturbed recurrence first fails at n=3: expected {} got {}",
            r.expected, r.actual
        )),
        Some(r) => Err(format!("perturbed recurrence first fails at [{}], not n=3", r.params)),
        None => Err("perturbed recurrence was not detected".into()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "w1 * w_n by convolution", 10, c1),
        (2, "sphere norms", 5, c2),
        (3, "boundary counts, closed form, drift", 30, c3),
        (4, "letter-set count spread", 60, c4),
        (5, "cancellation counts", 60, c5),
        (6, "sandwich expectation", 60, c6),
        (7, "deviation bound and series", 60, c7),
        (8, "free product Z^2 * Z", 120, || free_product((1, 1))),
        (9, "free product Z^2 * Z, powers (2,3)", 120, || free_product((2, 3))),
        (10, "negative control", 60, c10),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, note) = match &outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => ("FAIL", format!("over {limit}s limit")),
            Ok(msg) => ("PASS", msg.clone()),
            Err(msg) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {status} {:>8.2}s (limit {limit}s) {name}: {note}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
