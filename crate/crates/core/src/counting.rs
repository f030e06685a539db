//! Counts of reduced words by first and last letter.
//!
//! For `n >= 2` the number of length-`n` words starting with `x` and ending
//! with `y` depends only on how `x` and `y` are related:
//!
//! * `alpha_n` when `y` is neither `x` nor `x^-1`,
//! * `beta_n` when `y = x`,
//! * `gamma_n` when `y = x^-1`.
//!
//! The triple obeys a linear recurrence with a 3x3 transfer matrix whose
//! eigenvalues are `2k-1`, `1` and `-1`. Everything here stays in exact
//! integer or rational arithmetic.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::{alphabet, check_rank, word_count, Letter, ReducedWord};
use crate::Rational;

/// The transfer matrix acting on `(alpha_n, beta_n, gamma_n)`.
///
/// [`RecurrenceMatrix::standard`] is the only correct one; the entries are
/// public so that verification runs can feed in a deliberately broken matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceMatrix {
    pub entries: [[i64; 3]; 3],
}

impl RecurrenceMatrix {
    pub fn standard(rank: u32) -> Self {
        let k = rank as i64;
        RecurrenceMatrix {
            entries: [[2 * k - 3, 1, 1], [2 * k - 2, 1, 0], [2 * k - 2, 0, 1]],
        }
    }

    fn apply(&self, v: &[BigInt; 3]) -> [BigInt; 3] {
        let row = |r: &[i64; 3]| -> BigInt { r.iter().zip(v).map(|(a, x)| x * *a).sum() };
        [row(&self.entries[0]), row(&self.entries[1]), row(&self.entries[2])]
    }
}

/// `alpha_n, beta_n, gamma_n` for `2 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    rank: u32,
    rows: Vec<[BigInt; 3]>,
}

impl CountTable {
    /// Runs the standard recurrence from `alpha_2 = beta_2 = 1, gamma_2 = 0`.
    pub fn new(rank: u32, n_max: usize) -> Result<Self> {
        Self::with_matrix(rank, n_max, &RecurrenceMatrix::standard(rank))
    }

    pub fn with_matrix(rank: u32, n_max: usize, matrix: &RecurrenceMatrix) -> Result<Self> {
        check_rank(rank)?;
        if n_max < 2 {
            return Err(Error::Precondition(format!(
                "count table needs n_max >= 2, got {n_max}"
            )));
        }
        let mut rows = Vec::with_capacity(n_max - 1);
        rows.push([BigInt::one(), BigInt::one(), BigInt::zero()]);
        for _ in 3..=n_max {
            let next = matrix.apply(rows.last().unwrap());
            rows.push(next);
        }
        Ok(CountTable { rank, rows })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() + 1
    }

    fn row(&self, n: usize) -> Result<&[BigInt; 3]> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "first/last-letter counts are defined for n >= 2, got {n}"
            )));
        }
        self.rows
            .get(n - 2)
            .ok_or_else(|| Error::Precondition(format!("count table covers n <= {}, asked for {n}", self.n_max())))
    }

    pub fn alpha(&self, n: usize) -> Result<&BigInt> {
        Ok(&self.row(n)?[0])
    }

    pub fn beta(&self, n: usize) -> Result<&BigInt> {
        Ok(&self.row(n)?[1])
    }

    pub fn gamma(&self, n: usize) -> Result<&BigInt> {
        Ok(&self.row(n)?[2])
    }

    pub fn abc(&self, n: usize) -> Result<(BigInt, BigInt, BigInt)> {
        let [a, b, c] = self.row(n)?.clone();
        Ok((a, b, c))
    }

    /// Iterates `(n, alpha_n, beta_n, gamma_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt, &BigInt, &BigInt)> {
        self.rows.iter().enumerate().map(|(i, [a, b, c])| (i + 2, a, b, c))
    }
}

pub fn abc_recurrence(rank: u32, n_max: usize) -> Result<CountTable> {
    CountTable::new(rank, n_max)
}

/// Eigen-expansion of the initial vector `(1, 1, 0)` in the eigenbasis of the
/// transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub eigenvalues: [BigInt; 3],
    pub eigenvectors: [[BigInt; 3]; 3],
    pub weights: [Rational; 3],
}

impl ClosedForm {
    pub fn new(rank: u32) -> Result<Self> {
        check_rank(rank)?;
        let k = BigInt::from(rank);
        let one = BigInt::one();
        let eigenvalues = [&k * 2 - 1u32, one.clone(), -one.clone()];
        let km1 = &k - 1u32;
        let eigenvectors = [
            [one.clone(), one.clone(), one.clone()],
            [BigInt::zero(), one.clone(), -one.clone()],
            [-one.clone(), km1.clone(), km1],
        ];
        let start = [one.clone(), one, BigInt::zero()];
        let weights = solve3(&eigenvectors, &start);
        Ok(ClosedForm {
            eigenvalues,
            eigenvectors,
            weights,
        })
    }

    /// `xi_n = sum_i weight_i * lambda_i^(n-2) * v_i`.
    pub fn eval(&self, n: usize) -> Result<(BigInt, BigInt, BigInt)> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "closed form is defined for n >= 2, got {n}"
            )));
        }
        let mut acc = [Rational::zero(), Rational::zero(), Rational::zero()];
        for i in 0..3 {
            let scale = &self.weights[i] * Rational::from_integer(Pow::pow(&self.eigenvalues[i], (n - 2) as u32));
            for (slot, v) in acc.iter_mut().zip(&self.eigenvectors[i]) {
                *slot += &scale * Rational::from_integer(v.clone());
            }
        }
        let [a, b, c] = acc.map(|q| {
            assert!(q.is_integer(), "closed form produced a non-integer count");
            q.to_integer()
        });
        Ok((a, b, c))
    }
}

/// Solves `sum_i w_i * cols[i] = rhs` exactly by Cramer's rule.
fn solve3(cols: &[[BigInt; 3]; 3], rhs: &[BigInt; 3]) -> [Rational; 3] {
    let det = |m: &[[BigInt; 3]; 3]| -> BigInt {
        // m[c][r]: column c, row r
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[2][1] * &m[1][2]) - &m[1][0] * (&m[0][1] * &m[2][2] - &m[2][1] * &m[0][2])
            + &m[2][0] * (&m[0][1] * &m[1][2] - &m[1][1] * &m[0][2])
    };
    let d = det(cols);
    assert!(!d.is_zero(), "eigenbasis is singular");
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut m = cols.clone();
        m[i] = rhs.clone();
        *slot = Rational::new(det(&m), d.clone());
    }
    out
}

pub fn abc_closed_form(rank: u32, n: usize) -> Result<(BigInt, BigInt, BigInt)> {
    ClosedForm::new(rank)?.eval(n)
}

/// `alpha_n - (2k-1)^(n-1) / 2k`, exactly.
pub fn alpha_drift(rank: u32, n: usize, alpha: &BigInt) -> Rational {
    let k = BigInt::from(rank);
    let main = Rational::new(Pow::pow(&k * 2 - 1u32, (n - 1) as u32), &k * 2);
    Rational::from_integer(alpha.clone()) - main
}

/// `C_k = 2 + 3/(2k)`.
pub fn constant_c(rank: u32) -> Rational {
    Rational::from_integer(BigInt::from(2)) + Rational::new(BigInt::from(3), BigInt::from(2 * rank as u64))
}

/// `D_k = 8 k^2 C_k`.
pub fn constant_d(rank: u32) -> Rational {
    let k = BigInt::from(rank);
    Rational::from_integer(&k * &k * 8) * constant_c(rank)
}

/// Which of the three counts governs words starting with `x` and ending with `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    Distinct,
    Equal,
    Inverse,
}

pub fn classify(x: Letter, y: Letter) -> PairKind {
    if y == x {
        PairKind::Equal
    } else if y == x.inverse() {
        PairKind::Inverse
    } else {
        PairKind::Distinct
    }
}

pub fn nu_single(table: &CountTable, x: Letter, y: Letter, n: usize) -> Result<BigInt> {
    x.check_rank(table.rank)?;
    y.check_rank(table.rank)?;
    let (a, b, c) = table.abc(n)?;
    Ok(match classify(x, y) {
        PairKind::Distinct => a,
        PairKind::Equal => b,
        PairKind::Inverse => c,
    })
}

/// A nonempty subset of the `2k` letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterSet {
    rank: u32,
    letters: BTreeSet<Letter>,
}

impl LetterSet {
    pub fn new<I: IntoIterator<Item = Letter>>(rank: u32, letters: I) -> Result<Self> {
        check_rank(rank)?;
        let letters: BTreeSet<Letter> = letters.into_iter().collect();
        for l in &letters {
            l.check_rank(rank)?;
        }
        if letters.is_empty() {
            return Err(Error::EmptyLetterSet);
        }
        Ok(LetterSet { rank, letters })
    }

    pub fn all(rank: u32) -> Result<Self> {
        Self::new(rank, alphabet(rank))
    }

    /// `S_k` minus the listed letters.
    pub fn all_except(rank: u32, excluded: &[Letter]) -> Result<Self> {
        Self::new(rank, alphabet(rank).into_iter().filter(|l| !excluded.contains(l)))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.letters.contains(&l)
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
}

/// Words of length `n` starting in `sigma` and ending in `tau`.
pub fn nu_sets(table: &CountTable, sigma: &LetterSet, tau: &LetterSet, n: usize) -> Result<BigInt> {
    let (a, b, c) = table.abc(n)?;
    let mut counts = [0u64; 3];
    for x in sigma.iter() {
        for y in tau.iter() {
            counts[classify(x, y) as usize] += 1;
        }
    }
    Ok(a * counts[0] + b * counts[1] + c * counts[2])
}

/// Allowed first letters of the surviving middle segment after exactly `r`
/// cancellations between `x` and a word on its right.
///
/// With `x = x_l ... x_1` (so `x_1` is the last letter): `r = 0` excludes
/// `x_1^-1`, `r = l` excludes `x_l`, and `0 < r < l` excludes `x_{r+1}^-1`
/// and `x_r`.
pub fn sigma_r(x: &ReducedWord, r: usize) -> Result<LetterSet> {
    let l = x.len();
    if l == 0 || r > l {
        return Err(Error::Precondition(format!(
            "sigma_r needs 0 <= r <= |x| and |x| >= 1, got r={r}, |x|={l}"
        )));
    }
    // x_i is the i-th letter counted from the right
    let xi = |i: usize| x.letters()[l - i];
    let excluded = if r == 0 {
        vec![xi(1).inverse()]
    } else if r == l {
        vec![xi(l)]
    } else {
        vec![xi(r + 1).inverse(), xi(r)]
    };
    LetterSet::all_except(x.rank(), &excluded)
}

/// Allowed last letters of the middle segment after exactly `s`
/// cancellations against `y = y_1 ... y_m` on its right.
pub fn tau_s(y: &ReducedWord, s: usize) -> Result<LetterSet> {
    let m = y.len();
    if m == 0 || s > m {
        return Err(Error::Precondition(format!(
            "tau_s needs 0 <= s <= |y| and |y| >= 1, got s={s}, |y|={m}"
        )));
    }
    let yj = |j: usize| y.letters()[j - 1];
    let excluded = if s == 0 {
        vec![yj(1).inverse()]
    } else if s == m {
        vec![yj(m)]
    } else {
        vec![yj(s + 1).inverse(), yj(s)]
    };
    LetterSet::all_except(y.rank(), &excluded)
}

/// Number of length-`n` words `u` for which `x u y` has exactly `r`
/// cancellations on the left and `s` on the right. Requires
/// `n >= |x| + |y| + 2`, which keeps the middle segment at length >= 2.
pub fn mu(table: &CountTable, r: usize, s: usize, n: usize, x: &ReducedWord, y: &ReducedWord) -> Result<BigInt> {
    if x.rank() != y.rank() || x.rank() != table.rank {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: y.rank(),
        });
    }
    let (l, m) = (x.len(), y.len());
    if n < l + m + 2 {
        return Err(Error::Precondition(format!(
            "mu needs n >= |x|+|y|+2 = {}, got n={n}",
            l + m + 2
        )));
    }
    nu_sets(table, &sigma_r(x, r)?, &tau_s(y, s)?, n - r - s)
}

/// `|2k alpha_n - (2k-1)^(n-1)|`, used for the uniform drift bound.
pub fn scaled_alpha_gap(rank: u32, n: usize, alpha: &BigInt) -> BigInt {
    let k = BigInt::from(rank);
    let gap: BigInt = &k * 2 * alpha - Pow::pow(&k * 2 - 1u32, (n - 1) as u32);
    gap.abs()
}

/// `(2k-2) alpha_n + beta_n + gamma_n`, which must equal `(2k-1)^(n-1)`.
pub fn total_check(rank: u32, alpha: &BigInt, beta: &BigInt, gamma: &BigInt) -> BigInt {
    alpha * (2 * rank as u64 - 2) + beta + gamma
}

/// Sanity relation: counts over all `(x, y)` add up to the total word count.
pub fn full_sum(rank: u32, n: usize, alpha: &BigInt, beta: &BigInt, gamma: &BigInt) -> bool {
    let two_k = 2 * rank as u64;
    let lhs = (alpha * (two_k - 2) + beta + gamma) * two_k;
    lhs == word_count(rank, n)
}
