//! Brute-force oracles and the cross-check suite.
//!
//! The oracles enumerate words and convolve explicitly; they never consult
//! the recurrence tables or cancellation formulas they are compared with.
//! Every check reports `expected` and `actual` strings and passes exactly
//! when the two are equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use serde::Serialize;

use crate::counting::{self, CountTable, LetterSet, RecurrenceMatrix};
use crate::error::Result;
use crate::freegroup::{alphabet, enumerate_words, word_count, Letter, ReducedWord, DEFAULT_CAP};
use crate::freeproduct::{self, FPConfig, FPWord};
use crate::group_algebra::{w_n_explicit, AlgebraElement};
use crate::radial::{self, deviation_bound, RadialElement, Sandwich, SandwichPath};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// Measured values behind the verdict; informational only.
    pub detail: String,
}

impl VerificationReport {
    pub fn new(check: &str, params: String, expected: String, actual: String) -> Self {
        let pass = expected == actual;
        VerificationReport {
            check: check.to_string(),
            params,
            expected,
            actual,
            pass,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }

    fn holds(check: &str, params: String, ok: bool, detail: String) -> Self {
        let actual = if ok { "holds" } else { "violated" };
        Self::new(check, params, "holds".into(), actual.into()).with_detail(detail)
    }

    fn tally(check: &str, params: String, matched: usize, total: usize, detail: String) -> Self {
        Self::new(
            check,
            params,
            format!("{total} of {total}"),
            format!("{matched} of {total}"),
        )
        .with_detail(detail)
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn first_failure(reports: &[VerificationReport]) -> Option<&VerificationReport> {
    reports.iter().find(|r| !r.pass)
}

/// Grid sizes for [`run_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteLimits {
    /// Ranks to check; empty means no checks at all.
    pub ranks: Vec<u32>,
    /// Largest word length enumerated by the counting checks.
    pub n_max: usize,
    /// Largest `n` for checks that multiply explicit sphere sums.
    pub explicit_n_max: usize,
    /// Sandwiched words `x`, `y` range over lengths `1..=word_len_max`.
    pub word_len_max: usize,
    pub closed_form_n_max: usize,
    pub series_n_max: usize,
    pub cap: usize,
    /// Added to the top-left transfer matrix entry; nonzero only for negative controls.
    pub alpha_coefficient_shift: i64,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        SuiteLimits {
            ranks: vec![2],
            n_max: 8,
            explicit_n_max: 6,
            word_len_max: 2,
            closed_form_n_max: 30,
            series_n_max: 12,
            cap: DEFAULT_CAP,
            alpha_coefficient_shift: 0,
        }
    }
}

impl SuiteLimits {
    pub fn empty() -> Self {
        SuiteLimits {
            ranks: Vec::new(),
            ..Default::default()
        }
    }

    pub fn matrix(&self, rank: u32) -> RecurrenceMatrix {
        let mut m = RecurrenceMatrix::standard(rank);
        m.entries[0][0] += self.alpha_coefficient_shift;
        m
    }
}

fn q(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

fn kn(k: u32, n: usize) -> String {
    format!("k={k} n={n}")
}

// ---------------------------------------------------------------------------
// oracles

/// `E(x w_n y)` by materializing `w_n`, convolving, and projecting.
pub fn oracle_expect(x: &ReducedWord, y: &ReducedWord, n: usize, cap: usize) -> Result<RadialElement<Rational>> {
    let wn = w_n_explicit::<Rational>(x.rank(), n, cap)?;
    let prod = AlgebraElement::word(x.clone())
        .mul_capped(&wn, cap)?
        .mul_capped(&AlgebraElement::word(y.clone()), cap)?;
    Ok(radial::expect(&prod))
}

/// Counts of length-`n` words by `(first letter, last letter)`, indexed by
/// letter code.
pub fn oracle_first_last(rank: u32, n: usize, cap: usize) -> Result<Vec<Vec<BigInt>>> {
    let a = 2 * rank as usize;
    let mut counts = vec![vec![0u64; a]; a];
    for w in enumerate_words(rank, n, cap)? {
        if let (Some(f), Some(l)) = (w.first(), w.last()) {
            counts[f.code()][l.code()] += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect())
}

pub fn oracle_nu(rank: u32, x: Letter, y: Letter, n: usize, cap: usize) -> Result<BigInt> {
    Ok(BigInt::from(
        enumerate_words(rank, n, cap)?
            .filter(|w| w.first() == Some(x) && w.last() == Some(y))
            .count(),
    ))
}

/// `(alpha_n, beta_n, gamma_n)` read off the enumeration as the counts for
/// `(g1, g2)`, `(g1, g1)`, `(g1, g1^-1)`.
pub fn oracle_abc(rank: u32, n: usize, cap: usize) -> Result<(BigInt, BigInt, BigInt)> {
    let h = oracle_first_last(rank, n, cap)?;
    let (g1, g1i, g2) = (Letter::gen(1).code(), Letter::inv(1).code(), Letter::gen(2).code());
    Ok((h[g1][g2].clone(), h[g1][g1].clone(), h[g1][g1i].clone()))
}

/// `table[r][s]`: words `u` of length `n` with `r` cancellations in `x u`
/// and `s` in `u y`.
pub fn oracle_mu_table(x: &ReducedWord, y: &ReducedWord, n: usize, cap: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut table = vec![vec![0u64; y.len() + 1]; x.len() + 1];
    for u in enumerate_words(x.rank(), n, cap)? {
        let (_, r) = x.concat(&u)?;
        let (_, s) = u.concat(y)?;
        table[r][s] += 1;
    }
    Ok(table
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect())
}

pub fn oracle_mu(r: usize, s: usize, n: usize, x: &ReducedWord, y: &ReducedWord, cap: usize) -> Result<BigInt> {
    let t = oracle_mu_table(x, y, n, cap)?;
    Ok(t.get(r).and_then(|row| row.get(s)).cloned().unwrap_or_default())
}

/// All reduced words with length in `1..=max_len`.
pub fn words_up_to(rank: u32, max_len: usize, cap: usize) -> Result<Vec<ReducedWord>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        out.extend(enumerate_words(rank, len, cap)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// group algebra and radial products

/// `w_1 w_n = w_{n+1} + c w_{n-1}` by explicit convolution, with `c = 2k`
/// at `n = 1` and `2k - 1` after.
pub fn check_radial_recurrence(rank: u32, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let w1 = w_n_explicit::<Rational>(rank, 1, cap)?;
    for n in 1..=n_max {
        let wn = w_n_explicit::<Rational>(rank, n, cap)?;
        let c = BigInt::from(if n == 1 { 2 * rank } else { 2 * rank - 1 });
        let rhs = w_n_explicit::<Rational>(rank, n + 1, cap)?
            .add(&w_n_explicit::<Rational>(rank, n - 1, cap)?.scalar_mul(&q(&c)))?;
        let left = w1.mul_capped(&wn, cap)?;
        let right = wn.mul_capped(&w1, cap)?;
        let verdict = |p: &AlgebraElement<Rational>| {
            if *p == rhs {
                "equal".to_string()
            } else {
                "differs".to_string()
            }
        };
        out.push(VerificationReport::new(
            "radial_recurrence",
            kn(rank, n),
            "equal, equal".into(),
            format!("{}, {}", verdict(&left), verdict(&right)),
        ));
    }
    Ok(out)
}

pub fn check_norm_formula(rank: u32, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let wn = w_n_explicit::<Rational>(rank, n, cap)?;
        let formula = if n == 0 {
            BigInt::from(1)
        } else {
            BigInt::from(2 * rank) * Pow::pow(BigInt::from(2 * rank - 1), (n - 1) as u32)
        };
        out.push(VerificationReport::new(
            "norm_formula",
            kn(rank, n),
            formula.to_string(),
            wn.l2_norm_sq().to_string(),
        ));
    }
    Ok(out)
}

/// Convolution `w_m w_n` with words packed into integers and integer
/// multiplicities, which keeps products of large spheres in memory.
/// Entry `p` maps each multiplicity to the number of length-`p` words
/// carrying it.
pub fn oracle_sphere_product(rank: u32, m: usize, n: usize, cap: usize) -> Result<Vec<BTreeMap<u32, u64>>> {
    let bits = usize::BITS - (2 * rank as usize).leading_zeros();
    if (m + n) as u32 * bits > 120 {
        return Err(crate::Error::CapExceeded {
            what: "packed word length",
            requested: format!("{} letters", m + n),
            cap: (120 / bits) as usize,
        });
    }
    let codes = |len: usize| -> Result<Vec<Vec<u8>>> {
        Ok(enumerate_words(rank, len, cap)?
            .map(|w| w.letters().iter().map(|l| l.code() as u8).collect())
            .collect())
    };
    let (left, right) = (codes(m)?, codes(n)?);
    let mut acc: HashMap<u128, u32> = HashMap::new();
    for u in &left {
        for v in &right {
            let mut c = 0;
            while c < u.len() && c < v.len() && u[u.len() - 1 - c] == v[c] ^ 1 {
                c += 1;
            }
            let mut key: u128 = 0;
            for &l in u[..u.len() - c].iter().chain(&v[c..]) {
                key = key << bits | (l as u128 + 1);
            }
            let len = (u.len() + v.len() - 2 * c) as u128;
            *acc.entry(key << 8 | len).or_insert(0) += 1;
        }
    }
    let mut by_len = vec![BTreeMap::new(); m + n + 1];
    for (key, mult) in acc {
        *by_len[(key & 0xff) as usize].entry(mult).or_insert(0u64) += 1;
    }
    Ok(by_len)
}

/// Radial products of basis elements against explicit convolution.
pub fn check_radial_product(rank: u32, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for m in 0..=n_max {
        let mut matched = 0;
        for n in 0..=n_max {
            let fast = RadialElement::<Rational>::basis(rank, m)?.mul(&RadialElement::basis(rank, n)?)?;
            let conv = oracle_sphere_product(rank, m, n, cap)?;
            let agrees = conv.iter().enumerate().all(|(p, hist)| {
                let c = fast.coeff(p);
                if c.is_zero() {
                    return hist.is_empty();
                }
                hist.len() == 1
                    && hist.iter().all(|(&mult, &count)| {
                        c == Rational::from_integer(BigInt::from(mult)) && BigInt::from(count) == word_count(rank, p)
                    })
            }) && fast.degree().is_none_or(|d| d <= m + n);
            if agrees {
                matched += 1;
            }
        }
        out.push(VerificationReport::tally(
            "radial_product",
            format!("k={rank} m={m} n<={n_max}"),
            matched,
            n_max + 1,
            String::new(),
        ));
    }
    Ok(out)
}

/// Small deterministic sample elements with coefficients in `-3..=3`.
pub fn sample_elements(rank: u32, count: usize, cap: usize) -> Result<Vec<AlgebraElement<Rational>>> {
    let pool = words_up_to(rank, 3, cap)?;
    let mut pool = pool;
    pool.insert(0, ReducedWord::identity(rank)?);
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        // xorshift64
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let size = 1 + (next() % 8) as usize;
        let terms = (0..size).map(|_| {
            let w = pool[(next() % pool.len() as u64) as usize].clone();
            let c = (next() % 7) as i64 - 3;
            (w, Rational::from_integer(BigInt::from(c)))
        });
        out.push(AlgebraElement::from_terms(rank, terms.collect::<Vec<_>>())?);
    }
    Ok(out)
}

/// Projection, trace preservation, and modularity of the expectation on
/// sample elements.
pub fn check_expectation_properties(rank: u32, cap: usize) -> Result<Vec<VerificationReport>> {
    let samples = sample_elements(rank, 24, cap)?;
    let mut proj = 0;
    let mut trace = 0;
    for x in &samples {
        let e = radial::expect(x);
        if radial::expect(&e.embed(cap)?) == e {
            proj += 1;
        }
        if x.trace() == e.coeff(0) {
            trace += 1;
        }
    }
    let radials: Vec<RadialElement<Rational>> = (0..=3)
        .map(|d| {
            let coeffs = (0..=d)
                .map(|i| Rational::from_integer(BigInt::from(i as i64 - 1)))
                .collect();
            RadialElement::from_coeffs(rank, coeffs)
        })
        .chain([RadialElement::basis(rank, 3)])
        .collect::<Result<_>>()?;
    let mut modular = 0;
    let mut total_mod = 0;
    for b in &radials {
        for x in samples.iter().take(8) {
            total_mod += 1;
            let lhs = radial::expect(&b.embed(cap)?.mul_capped(x, cap)?);
            let rhs = b.mul(&radial::expect(x))?;
            if lhs == rhs {
                modular += 1;
            }
        }
    }
    let p = format!("k={rank}");
    Ok(vec![
        VerificationReport::tally("expectation_projection", p.clone(), proj, samples.len(), String::new()),
        VerificationReport::tally("expectation_trace", p.clone(), trace, samples.len(), String::new()),
        VerificationReport::tally("expectation_modularity", p, modular, total_mod, String::new()),
    ])
}

// ---------------------------------------------------------------------------
// counting

fn fmt_abc((a, b, c): &(BigInt, BigInt, BigInt)) -> String {
    format!("({a}, {b}, {c})")
}

/// Recurrence table (possibly perturbed) against enumeration.
pub fn check_abc_vs_enumeration(
    rank: u32,
    n_max: usize,
    matrix: &RecurrenceMatrix,
    cap: usize,
) -> Result<Vec<VerificationReport>> {
    let table = CountTable::with_matrix(rank, n_max.max(2), matrix)?;
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.push(VerificationReport::new(
            "abc_vs_enumeration",
            kn(rank, n),
            fmt_abc(&oracle_abc(rank, n, cap)?),
            fmt_abc(&table.abc(n)?),
        ));
    }
    Ok(out)
}

pub fn check_closed_form(rank: u32, n_max: usize) -> Result<Vec<VerificationReport>> {
    let table = CountTable::new(rank, n_max.max(2))?;
    let cf = counting::ClosedForm::new(rank)?;
    (2..=n_max)
        .map(|n| {
            Ok(VerificationReport::new(
                "closed_form",
                kn(rank, n),
                fmt_abc(&table.abc(n)?),
                fmt_abc(&cf.eval(n)?),
            ))
        })
        .collect()
}

/// The exact relations among `alpha, beta, gamma` and the uniform drift bound.
pub fn check_count_identities(rank: u32, n_max: usize) -> Result<Vec<VerificationReport>> {
    let table = CountTable::new(rank, n_max.max(2))?;
    let c_k = counting::constant_c(rank);
    let base = BigInt::from(2 * rank - 1);
    let mut out = Vec::new();
    for n in 2..=n_max {
        let (a, b, c) = table.abc(n)?;
        let mut failed: Vec<&str> = Vec::new();
        if b != &c + 1 {
            failed.push("beta = gamma + 1");
        }
        let parity = if n % 2 == 0 { 1 } else { 0 };
        if a != &c + parity {
            failed.push("alpha = gamma + parity");
        }
        if (&a - &c).abs() > BigInt::from(1) || (&a - &b).abs() > BigInt::from(2) {
            failed.push("small gaps");
        }
        if counting::total_check(rank, &a, &b, &c) != Pow::pow(&base, (n - 1) as u32) {
            failed.push("level total");
        }
        if counting::scaled_alpha_gap(rank, n, &a) > BigInt::from(3) {
            failed.push("scaled alpha gap <= 3");
        }
        let drifts: Vec<Rational> = [&a, &b, &c].iter().map(|v| counting::alpha_drift(rank, n, v)).collect();
        if drifts.iter().any(|d| d.abs() > c_k) {
            failed.push("drift <= C_k");
        }
        let actual = if failed.is_empty() {
            "all hold".to_string()
        } else {
            format!("fails: {}", failed.join("; "))
        };
        let detail = format!("drifts {} {} {}", drifts[0], drifts[1], drifts[2]);
        out.push(
            VerificationReport::new("count_identities", kn(rank, n), "all hold".into(), actual).with_detail(detail),
        );
    }
    Ok(out)
}

fn subsets(rank: u32) -> Vec<LetterSet> {
    let letters = alphabet(rank);
    (1u64..(1 << letters.len()))
        .map(|mask| {
            LetterSet::new(
                rank,
                letters
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, l)| *l),
            )
            .expect("nonempty mask")
        })
        .collect()
}

fn nu_from_histogram(h: &[Vec<BigInt>], sigma: &LetterSet, tau: &LetterSet) -> BigInt {
    sigma
        .iter()
        .flat_map(|x| tau.iter().map(move |y| (x, y)))
        .map(|(x, y)| h[x.code()][y.code()].clone())
        .sum()
}

/// Set counts from the table agree with enumeration, and sets of equal
/// sizes have counts within `D_k` of each other.
pub fn check_nu_sets(rank: u32, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let table = CountTable::new(rank, n_max.max(2))?;
    let sets = subsets(rank);
    let d_k = counting::constant_d(rank);
    let mut out = Vec::new();
    for n in 2..=n_max {
        let h = oracle_first_last(rank, n, cap)?;
        let mut matched = 0;
        let mut by_size: BTreeMap<(usize, usize), (BigInt, BigInt)> = BTreeMap::new();
        for s in &sets {
            for t in &sets {
                let brute = nu_from_histogram(&h, s, t);
                if counting::nu_sets(&table, s, t, n)? == brute {
                    matched += 1;
                }
                let e = by_size
                    .entry((s.len(), t.len()))
                    .or_insert_with(|| (brute.clone(), brute.clone()));
                if brute < e.0 {
                    e.0 = brute.clone();
                }
                if brute > e.1 {
                    e.1 = brute;
                }
            }
        }
        let spread = by_size.values().map(|(lo, hi)| hi - lo).max().unwrap_or_default();
        out.push(VerificationReport::tally(
            "nu_sets_vs_enumeration",
            kn(rank, n),
            matched,
            sets.len() * sets.len(),
            String::new(),
        ));
        out.push(VerificationReport::holds(
            "nu_spread_within_d",
            kn(rank, n),
            q(&spread) <= d_k,
            format!("max spread {spread}, D_k = {d_k}"),
        ));
    }
    Ok(out)
}

/// Splitting words of length `n+1` by their second letter: the three
/// prefix-by-`g1` decompositions hit exactly the words they
/// should.
pub fn check_sphere_split(rank: u32, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let g1 = Letter::gen(1);
    let g2 = Letter::gen(2);
    let prefix = ReducedWord::letter(g1, rank)?;
    let mut out = Vec::new();
    for n in 2..n_max {
        let words: Vec<ReducedWord> = enumerate_words(rank, n, cap)?.collect();
        let longer: Vec<ReducedWord> = enumerate_words(rank, n + 1, cap)?.collect();
        let mut verdicts = Vec::new();
        for last in [g2, g1, g1.inverse()] {
            // second letters allowed after g1: anything but g1^-1
            let starts: Vec<Letter> = alphabet(rank).into_iter().filter(|l| *l != g1.inverse()).collect();
            let built: BTreeSet<ReducedWord> = words
                .iter()
                .filter(|w| w.last() == Some(last) && starts.contains(&w.first().unwrap()))
                .map(|w| prefix.concat(w))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|(_, c)| *c == 0)
                .map(|(p, _)| p)
                .collect();
            let target: BTreeSet<ReducedWord> = longer
                .iter()
                .filter(|w| w.first() == Some(g1) && w.last() == Some(last))
                .cloned()
                .collect();
            verdicts.push(if built == target { "equal" } else { "differs" });
        }
        out.push(VerificationReport::new(
            "sphere_split",
            kn(rank, n),
            "equal, equal, equal".into(),
            verdicts.join(", "),
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// sandwiches

/// `(|x|, |y|, n)` grid cells with `|x|, |y| <= word_len_max` and
/// `|x| + |y| + 2 <= n <= n_max`.
fn grid(word_len_max: usize, n_max: usize) -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for l in 1..=word_len_max {
        for m in 1..=word_len_max {
            for n in l + m + 2..=n_max {
                cells.push((l, m, n));
            }
        }
    }
    cells
}

fn words_of_len(rank: u32, len: usize, cap: usize) -> Result<Vec<ReducedWord>> {
    Ok(enumerate_words(rank, len, cap)?.collect())
}

/// Cancellation counts from the letter-set formula against direct
/// cancellation tracking.
pub fn check_cancellation_counts(
    rank: u32,
    word_len_max: usize,
    n_max: usize,
    cap: usize,
) -> Result<Vec<VerificationReport>> {
    let table = CountTable::new(rank, n_max.max(2))?;
    let mut out = Vec::new();
    for (l, m, n) in grid(word_len_max, n_max) {
        let (xs, ys) = (words_of_len(rank, l, cap)?, words_of_len(rank, m, cap)?);
        let mut matched = 0;
        let mut total = 0;
        for x in &xs {
            for y in &ys {
                let brute = oracle_mu_table(x, y, n, cap)?;
                let mut sum = BigInt::zero();
                for (r, row) in brute.iter().enumerate() {
                    for (s, b) in row.iter().enumerate() {
                        total += 1;
                        let f = counting::mu(&table, r, s, n, x, y)?;
                        sum += &f;
                        if &f == b {
                            matched += 1;
                        }
                    }
                }
                total += 1;
                if sum == word_count(rank, n) {
                    matched += 1;
                }
            }
        }
        out.push(VerificationReport::tally(
            "cancellation_counts",
            format!("k={rank} |x|={l} |y|={m} n={n}"),
            matched,
            total,
            String::new(),
        ));
    }
    Ok(out)
}

/// `E(x w_n y)` from counts against the explicit oracle.
pub fn check_sandwich_expectation(
    rank: u32,
    word_len_max: usize,
    n_max: usize,
    cap: usize,
) -> Result<Vec<VerificationReport>> {
    let table = CountTable::new(rank, n_max.max(2))?;
    let mut out = Vec::new();
    for (l, m, n) in grid(word_len_max, n_max) {
        let (xs, ys) = (words_of_len(rank, l, cap)?, words_of_len(rank, m, cap)?);
        let mut matched = 0;
        for x in &xs {
            for y in &ys {
                let fast: RadialElement<Rational> = radial::expect_xwny(&table, x, y, n)?;
                if fast == oracle_expect(x, y, n, cap)? {
                    matched += 1;
                }
            }
        }
        out.push(VerificationReport::tally(
            "sandwich_expectation",
            format!("k={rank} |x|={l} |y|={m} n={n}"),
            matched,
            xs.len() * ys.len(),
            String::new(),
        ));
    }
    Ok(out)
}

/// Squared deviation times `|w_n|^2` stays below `H^2`.
pub fn check_deviation_bound(
    rank: u32,
    word_len_max: usize,
    n_max: usize,
    cap: usize,
) -> Result<Vec<VerificationReport>> {
    let sw = Sandwich::new(rank, n_max, cap)?;
    let mut out = Vec::new();
    for (l, m, n) in grid(word_len_max, n_max) {
        let h2 = deviation_bound(l, m, rank);
        let norm = q(&word_count(rank, n));
        let (xs, ys) = (words_of_len(rank, l, cap)?, words_of_len(rank, m, cap)?);
        let mut matched = 0;
        let mut worst = Rational::zero();
        for x in &xs {
            for y in &ys {
                let (d, path) = sw.deviation::<Rational>(x, y, n)?;
                debug_assert_eq!(path, SandwichPath::Counting);
                let scaled = d * &norm;
                if scaled <= h2 {
                    matched += 1;
                }
                if scaled > worst {
                    worst = scaled;
                }
            }
        }
        out.push(VerificationReport::tally(
            "deviation_bound",
            format!("k={rank} |x|={l} |y|={m} n={n}"),
            matched,
            xs.len() * ys.len(),
            format!("max deviation^2 * |w_n|^2 = {worst}, H^2 = {h2}"),
        ));
    }
    Ok(out)
}

/// The series of squared deviations: partial sums are nondecreasing and,
/// past the threshold, each term is below `H^2 / |w_n|^4`.
pub fn check_series(rank: u32, word_len_max: usize, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let sw = Sandwich::new(rank, n_max, cap)?;
    let xs = words_up_to(rank, 1, cap)?;
    let mut pairs: Vec<(ReducedWord, ReducedWord)> = Vec::new();
    for x in &xs {
        for y in &xs {
            pairs.push((x.clone(), y.clone()));
        }
    }
    if word_len_max >= 2 {
        let long = words_of_len(rank, 2, cap)?;
        pairs.push((long[0].clone(), xs[0].clone()));
        pairs.push((long[long.len() - 1].clone(), long[1].clone()));
    }
    let mut out = Vec::new();
    for (x, y) in pairs {
        let rows = sw.series::<Rational>(&x, &y, n_max)?;
        let threshold = x.len() + y.len() + 2;
        let h2 = deviation_bound(x.len(), y.len(), rank);
        let monotone = rows.windows(2).all(|p| p[0].partial_sum <= p[1].partial_sum);
        let mut dominated = true;
        let mut envelope = rows
            .iter()
            .take_while(|r| r.n < threshold)
            .last()
            .map(|r| r.partial_sum.clone())
            .unwrap_or_else(Rational::zero);
        for r in rows.iter().filter(|r| r.n >= threshold) {
            let wc = q(&word_count(rank, r.n));
            let cap_term = &h2 / (&wc * &wc);
            envelope += &cap_term;
            if r.term > cap_term || r.partial_sum > envelope {
                dominated = false;
            }
        }
        let last = rows.last().map(|r| r.partial_sum.to_string()).unwrap_or_default();
        out.push(
            VerificationReport::new(
                "series",
                format!("k={rank} x={x} y={y} n<={n_max}"),
                "monotone, dominated".into(),
                format!(
                    "{}, {}",
                    if monotone { "monotone" } else { "not monotone" },
                    if dominated { "dominated" } else { "not dominated" }
                ),
            )
            .with_detail(format!("S_{n_max} = {last}")),
        );
    }
    Ok(out)
}

/// Summing `E(z w_n y)` over every `z` of length `l` gives `E(w_l w_n y)`.
pub fn check_averaging(rank: u32, word_len_max: usize, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let sw = Sandwich::new(rank, n_max, cap)?;
    let mut out = Vec::new();
    for l in 1..=word_len_max {
        let wl = w_n_explicit::<Rational>(rank, l, cap)?;
        let zs = words_of_len(rank, l, cap)?;
        for n in 0..=n_max {
            let wn = w_n_explicit::<Rational>(rank, n, cap)?;
            let wlwn = wl.mul_capped(&wn, cap)?;
            let ys = words_up_to(rank, word_len_max, cap)?;
            let mut matched = 0;
            for y in &ys {
                let mut sum = RadialElement::<Rational>::zero(rank)?;
                for z in &zs {
                    sum = sum.add(&sw.expect::<Rational>(z, y, n)?.0)?;
                }
                let direct = radial::expect(&wlwn.mul_capped(&AlgebraElement::word(y.clone()), cap)?);
                if sum == direct {
                    matched += 1;
                }
            }
            out.push(VerificationReport::tally(
                "averaging",
                format!("k={rank} |z|={l} n={n}"),
                matched,
                ys.len(),
                String::new(),
            ));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// free products

/// Pairs `(x, y)` in `Z^2 * Z`, each with a syllable outside the embedded
/// free group.
pub const FP_SAMPLE_PAIRS: &[(&str, &str)] = &[
    ("1:0,1", "1:0,-1"),
    ("1:0,1", "1:0,1"),
    ("1:0,1", "2:-1 1:0,-1"),
    ("1:0,1 2:1", "2:-1 1:0,-1"),
    ("1:0,1 2:1", "2:1 1:0,-1"),
    ("1:1,1", "2:1 1:-1,-1"),
    ("2:1 1:0,2 2:-1", "2:1 1:0,-2 2:1"),
    ("1:2,1 2:-1 1:1,0", "1:-1,0 2:2 1:0,-1"),
    ("1:0,1 2:2 1:0,1", "1:0,-1 2:-2 1:0,-1"),
];

pub fn fp_sample_words(cfg: &FPConfig) -> Result<Vec<(FPWord, FPWord)>> {
    FP_SAMPLE_PAIRS
        .iter()
        .map(|(x, y)| {
            Ok((
                freeproduct::parse_fp_word(x, &cfg.factors)?,
                freeproduct::parse_fp_word(y, &cfg.factors)?,
            ))
        })
        .collect()
}

/// `|chi_n| <= (n+1)(2n+1)`, `|E(x w_n y)|^2 <= |chi_n|^2`, and every member
/// of `chi_n` fits one of the two cancellation patterns.
pub fn check_free_product(
    cfg: &FPConfig,
    pairs: &[(FPWord, FPWord)],
    n_max: usize,
    cap: usize,
) -> Result<Vec<VerificationReport>> {
    let powers: Vec<String> = cfg.designated.iter().map(|d| d.power.to_string()).collect();
    let tag = format!("t=({})", powers.join(","));
    let mut out = Vec::new();
    // per pair: running sums of |E|^2/|w_n|^2 and of its bound
    let mut sums = vec![(Rational::zero(), Rational::zero()); pairs.len()];
    for n in 0..=n_max {
        let bound = freeproduct::chi_bound(n);
        let wc = q(&word_count(cfg.rank(), n));
        let mut series_ok = 0;
        let mut chi_ok = 0;
        let mut norm_ok = 0;
        let mut classified = 0;
        let mut members = 0;
        let mut full = 0usize;
        let mut survivor = 0usize;
        let mut biggest = 0;
        for ((x, y), sum) in pairs.iter().zip(sums.iter_mut()) {
            let chi = freeproduct::chi_n(x, y, n, cfg, cap)?;
            let mut e = RadialElement::<Rational>::zero(cfg.rank())?;
            for m in &chi {
                e = e.add(&radial::expect_word(&m.product))?;
                members += 1;
                if let Ok(c) = freeproduct::case_classify(&m.u, x, y, cfg) {
                    classified += 1;
                    match c.case {
                        freeproduct::CaseTag::FullCancellation => full += 1,
                        freeproduct::CaseTag::Survivor => survivor += 1,
                    }
                }
            }
            biggest = biggest.max(chi.len());
            if BigInt::from(chi.len()) <= bound {
                chi_ok += 1;
            }
            let size = Rational::from_integer(BigInt::from(chi.len()));
            let norm = e.norm_sq();
            if norm <= &size * &size {
                norm_ok += 1;
            }
            sum.0 += &norm / &wc;
            sum.1 += q(&(&bound * &bound)) / &wc;
            if sum.0 <= sum.1 {
                series_ok += 1;
            }
        }
        let p = format!("{tag} n={n}");
        out.push(VerificationReport::tally(
            "fp_chi_bound",
            p.clone(),
            chi_ok,
            pairs.len(),
            format!("largest |chi_n| = {biggest}, bound {bound}"),
        ));
        out.push(VerificationReport::tally(
            "fp_norm_bound",
            p.clone(),
            norm_ok,
            pairs.len(),
            String::new(),
        ));
        out.push(VerificationReport::tally(
            "fp_series",
            p.clone(),
            series_ok,
            pairs.len(),
            String::new(),
        ));
        out.push(VerificationReport::tally(
            "fp_cases",
            p,
            classified,
            members,
            format!("full cancellation {full}, survivor {survivor}"),
        ));
    }
    Ok(out)
}

/// Embedding then membership recovers every `F_k` word, and on embedded
/// words the free-product expectation equals the free-group one.
pub fn check_free_product_embedding(cfg: &FPConfig, n_max: usize, cap: usize) -> Result<Vec<VerificationReport>> {
    let rank = cfg.rank();
    let mut total = 0;
    let mut matched = 0;
    for n in 0..=n_max.min(5) {
        for u in enumerate_words(rank, n, cap)? {
            total += 1;
            if cfg.is_in_fk(&cfg.embed_fk_word(&u)?) == Some(u) {
                matched += 1;
            }
        }
    }
    let mut out = vec![VerificationReport::tally(
        "fp_membership",
        format!("k={rank} |u|<=5"),
        matched,
        total,
        String::new(),
    )];
    let sw = Sandwich::new(rank, n_max, cap)?;
    let xs = words_up_to(rank, 1, cap)?;
    let mut agree = 0;
    let mut cases = 0;
    for x in &xs {
        for y in &xs {
            let (fx, fy) = (cfg.embed_fk_word(x)?, cfg.embed_fk_word(y)?);
            for n in 0..=n_max.min(6) {
                cases += 1;
                let (a, _) = freeproduct::expect_fp::<Rational>(&fx, &fy, n, cfg, cap)?;
                if a == sw.expect::<Rational>(x, y, n)?.0 {
                    agree += 1;
                }
            }
        }
    }
    out.push(VerificationReport::tally(
        "fp_fk_agreement",
        format!("k={rank}"),
        agree,
        cases,
        String::new(),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------

/// Runs every cross-check for each configured rank, in a fixed order.
pub fn run_suite(limits: &SuiteLimits) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let cap = limits.cap;
    for &k in &limits.ranks {
        let explicit = limits.explicit_n_max.min(limits.n_max);
        out.extend(check_radial_recurrence(k, explicit, cap)?);
        out.extend(check_norm_formula(k, explicit, cap)?);
        out.extend(check_radial_product(k, 5.min(limits.n_max), cap)?);
        out.extend(check_expectation_properties(k, cap)?);
        out.extend(check_abc_vs_enumeration(k, limits.n_max, &limits.matrix(k), cap)?);
        out.extend(check_closed_form(k, limits.closed_form_n_max)?);
        out.extend(check_count_identities(k, limits.closed_form_n_max)?);
        out.extend(check_nu_sets(k, limits.n_max, cap)?);
        out.extend(check_sphere_split(k, limits.n_max, cap)?);
        out.extend(check_cancellation_counts(k, limits.word_len_max, limits.n_max, cap)?);
        out.extend(check_sandwich_expectation(k, limits.word_len_max, limits.n_max, cap)?);
        out.extend(check_deviation_bound(k, limits.word_len_max, limits.n_max, cap)?);
        out.extend(check_series(k, limits.word_len_max, limits.series_n_max, cap)?);
        out.extend(check_averaging(k, limits.word_len_max, explicit.min(7), cap)?);
        if k == 2 {
            for powers in [(1, 1), (2, 3)] {
                let cfg = FPConfig::z2_star_z(powers);
                let pairs = fp_sample_words(&cfg)?;
                out.extend(check_free_product(&cfg, &pairs, limits.n_max, cap)?);
                out.extend(check_free_product_embedding(&cfg, limits.n_max, cap)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t: &str) -> ReducedWord {
        crate::freegroup::parse_word(t, 2, false).unwrap()
    }

    #[test]
    fn nu_oracle_base_values() {
        assert_eq!(
            oracle_nu(2, Letter::gen(1), Letter::gen(2), 2, DEFAULT_CAP).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            oracle_nu(2, Letter::gen(1), Letter::inv(1), 2, DEFAULT_CAP).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            oracle_nu(2, Letter::gen(1), Letter::gen(1), 3, DEFAULT_CAP).unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            oracle_nu(2, Letter::inv(2), Letter::gen(1), 4, DEFAULT_CAP).unwrap(),
            BigInt::from(7)
        );
    }

    #[test]
    fn abc_oracle_frozen_values() {
        let abc = |a: i64, b: i64, c: i64| (BigInt::from(a), BigInt::from(b), BigInt::from(c));
        assert_eq!(oracle_abc(2, 2, DEFAULT_CAP).unwrap(), abc(1, 1, 0));
        assert_eq!(oracle_abc(2, 3, DEFAULT_CAP).unwrap(), abc(2, 3, 2));
        assert_eq!(oracle_abc(2, 4, DEFAULT_CAP).unwrap(), abc(7, 7, 6));
    }

    #[test]
    fn sphere_product_oracle_small() {
        let h = oracle_sphere_product(2, 1, 1, DEFAULT_CAP).unwrap();
        assert_eq!(h[0], BTreeMap::from([(4, 1)]));
        assert!(h[1].is_empty());
        assert_eq!(h[2], BTreeMap::from([(1, 12)]));
        let h = oracle_sphere_product(2, 1, 2, DEFAULT_CAP).unwrap();
        assert_eq!(h[1], BTreeMap::from([(3, 4)]));
        assert_eq!(h[3], BTreeMap::from([(1, 36)]));
    }

    #[test]
    fn mu_oracle_frozen_values() {
        assert_eq!(
            oracle_mu(0, 0, 4, &w("g1"), &w("g2"), DEFAULT_CAP).unwrap(),
            BigInt::from(61)
        );
        // words g1^-1 v g1 with v of length 2, v not starting with g1 nor ending with g1^-1
        assert_eq!(
            oracle_mu(1, 1, 4, &w("g1"), &w("g1^-1"), DEFAULT_CAP).unwrap(),
            BigInt::from(6)
        );
        let t = oracle_mu_table(&w("g1"), &w("g2"), 4, DEFAULT_CAP).unwrap();
        let total: BigInt = t.iter().flatten().sum();
        assert_eq!(total, BigInt::from(108));
    }

    #[test]
    fn oracle_expect_identity_sandwich() {
        let e = ReducedWord::identity(2).unwrap();
        for n in 0..=4 {
            assert_eq!(
                oracle_expect(&e, &e, n, DEFAULT_CAP).unwrap(),
                RadialElement::basis(2, n).unwrap()
            );
        }
    }

    #[test]
    fn oracle_expect_is_linear() {
        // E(x w_n y) summed over x in {g1, g2} equals the expectation of the summed product
        let n = 3;
        let a = oracle_expect(&w("g1"), &w("g2"), n, DEFAULT_CAP).unwrap();
        let b = oracle_expect(&w("g2"), &w("g2"), n, DEFAULT_CAP).unwrap();
        let x = AlgebraElement::word(w("g1"))
            .add(&AlgebraElement::word(w("g2")))
            .unwrap();
        let wn = w_n_explicit::<Rational>(2, n, DEFAULT_CAP).unwrap();
        let joint = radial::expect(&x.mul(&wn).unwrap().mul(&AlgebraElement::word(w("g2"))).unwrap());
        assert_eq!(a.add(&b).unwrap(), joint);
    }

    #[test]
    fn report_pass_tracks_equality() {
        let r = VerificationReport::new("x", String::new(), "1".into(), "1".into());
        assert!(r.pass);
        let r = VerificationReport::new("x", String::new(), "1".into(), "2".into());
        assert!(!r.pass);
    }

    #[test]
    fn empty_limits_empty_report() {
        assert!(run_suite(&SuiteLimits::empty()).unwrap().is_empty());
    }

    #[test]
    fn perturbed_recurrence_fails_at_three() {
        let limits = SuiteLimits {
            alpha_coefficient_shift: 1,
            ..Default::default()
        };
        let reports = check_abc_vs_enumeration(2, 8, &limits.matrix(2), DEFAULT_CAP).unwrap();
        let first = first_failure(&reports).unwrap();
        assert_eq!(first.params, "k=2 n=3");
        assert!(reports[0].pass);
    }

    #[test]
    fn samples_are_deterministic() {
        let a = sample_elements(2, 5, DEFAULT_CAP).unwrap();
        let b = sample_elements(2, 5, DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
    }
}
