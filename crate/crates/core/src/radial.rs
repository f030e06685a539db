//! The radial subalgebra spanned by the sphere sums `w_n`.
//!
//! A [`RadialElement`] stores coefficients against `w_0, w_1, ...`. Products
//! use `w_1 w_1 = w_2 + 2k w_0` and `w_1 w_n = w_{n+1} + (2k-1) w_{n-1}`
//! (`n >= 2`) and never touch the underlying words. The conditional
//! expectation onto this subalgebra sends a word of length `p` to
//! `w_p / |w_p|^2`.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::counting::{constant_d, mu, CountTable};
use crate::error::{Error, Result};
use crate::freegroup::{check_rank, word_count, ReducedWord};
use crate::group_algebra::{w_n_explicit, AlgebraElement};
use crate::scalar::Scalar;
use crate::Rational;

/// `sum_n c_n w_n` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialElement<S> {
    rank: u32,
    coeffs: Vec<S>,
}

impl<S: Scalar> RadialElement<S> {
    pub fn zero(rank: u32) -> Result<Self> {
        check_rank(rank)?;
        Ok(RadialElement {
            rank,
            coeffs: Vec::new(),
        })
    }

    /// `w_n` itself.
    pub fn basis(rank: u32, n: usize) -> Result<Self> {
        check_rank(rank)?;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        Ok(RadialElement { rank, coeffs })
    }

    pub fn from_coeffs(rank: u32, coeffs: Vec<S>) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self::trimmed(rank, coeffs))
    }

    fn trimmed(rank: u32, mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RadialElement { rank, coeffs }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> S {
        self.coeffs.get(n).cloned().unwrap_or_else(S::zero)
    }

    /// Highest `n` with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) + other.coeff(n)).collect();
        Ok(Self::trimmed(self.rank, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&-S::one()))
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        Self::trimmed(self.rank, self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Product in the radial subalgebra. Commutative.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        let k = S::from_i64(self.rank as i64);
        let two_k = k.clone() + k;
        let two_k_minus_one = two_k.clone() - S::one();
        let mut acc = vec![S::zero(); self.coeffs.len() + other.coeffs.len()];
        // cur = w_m * other; w_2 = w_1 w_1 - 2k w_0, w_m = w_1 w_{m-1} - (2k-1) w_{m-2} for m >= 3
        let mut prev: Vec<S> = Vec::new();
        let mut cur: Vec<S> = other.coeffs.clone();
        for (m, a) in self.coeffs.iter().enumerate() {
            if m > 0 {
                let mut next = times_w1(&cur, &two_k, &two_k_minus_one);
                let back = if m == 2 { &two_k } else { &two_k_minus_one };
                for (slot, p) in next.iter_mut().zip(&prev) {
                    *slot = slot.clone() - back.clone() * p.clone();
                }
                prev = std::mem::replace(&mut cur, next);
            }
            if !a.is_zero() {
                for (slot, c) in acc.iter_mut().zip(&cur) {
                    *slot = slot.clone() + a.clone() * c.clone();
                }
            }
        }
        Ok(Self::trimmed(self.rank, acc))
    }

    /// `sum_n c_n^2 |w_n|^2`.
    pub fn norm_sq(&self) -> S {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(S::zero(), |acc, (n, c)| {
                acc + c.clone() * c.clone() * S::from_bigint(&word_count(self.rank, n))
            })
    }

    /// The same element written out over words. Fails when a sphere is larger
    /// than `cap`.
    pub fn embed(&self, cap: usize) -> Result<AlgebraElement<S>> {
        let mut out = AlgebraElement::zero(self.rank)?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&w_n_explicit::<S>(self.rank, n, cap)?.scalar_mul(c))?;
            }
        }
        Ok(out)
    }
}

/// `w_1 * v` on coefficient vectors.
fn times_w1<S: Scalar>(v: &[S], two_k: &S, two_k_minus_one: &S) -> Vec<S> {
    let mut out = vec![S::zero(); v.len() + 1];
    for (n, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out[n + 1] = out[n + 1].clone() + c.clone();
        match n {
            0 => {}
            1 => out[0] = out[0].clone() + two_k.clone() * c.clone(),
            _ => out[n - 1] = out[n - 1].clone() + two_k_minus_one.clone() * c.clone(),
        }
    }
    out
}

pub fn radial_mul<S: Scalar>(a: &RadialElement<S>, b: &RadialElement<S>) -> Result<RadialElement<S>> {
    a.mul(b)
}

pub fn radial_norm_sq<S: Scalar>(a: &RadialElement<S>) -> S {
    a.norm_sq()
}

/// Conditional expectation: `c_n = (sum of coefficients on length-n words) / |w_n|^2`.
pub fn expect<S: Scalar>(x: &AlgebraElement<S>) -> RadialElement<S> {
    let coeffs = x
        .level_sums()
        .into_iter()
        .enumerate()
        .map(|(n, s)| s / S::from_bigint(&word_count(x.rank(), n)))
        .collect();
    RadialElement::trimmed(x.rank(), coeffs)
}

/// Expectation of a single word of length `p`: `w_p / |w_p|^2`.
pub fn expect_word<S: Scalar>(v: &ReducedWord) -> RadialElement<S> {
    let p = v.len();
    let mut coeffs = vec![S::zero(); p + 1];
    coeffs[p] = S::from_ratio(&BigInt::from(1), &word_count(v.rank(), p));
    RadialElement { rank: v.rank(), coeffs }
}

/// How `E(x w_n y)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichPath {
    /// `x` or `y` is the identity; the expectation factors through the radial product.
    Modular,
    /// Cancellation counts, valid for `n >= |x| + |y| + 2`.
    Counting,
    /// `w_n` materialized and both products convolved.
    Explicit,
}

impl SandwichPath {
    pub fn as_str(self) -> &'static str {
        match self {
            SandwichPath::Modular => "modular",
            SandwichPath::Counting => "counting",
            SandwichPath::Explicit => "explicit",
        }
    }
}

fn check_pair(x: &ReducedWord, y: &ReducedWord) -> Result<()> {
    if x.rank() != y.rank() {
        Err(Error::RankMismatch {
            left: x.rank(),
            right: y.rank(),
        })
    } else {
        Ok(())
    }
}

/// `E(x w_n y)` from cancellation counts only.
///
/// Each pair `(r, s)` of left/right cancellation depths contributes
/// `mu(r, s, n; x, y)` words of length `n + |x| + |y| - 2(r+s)`.
pub fn expect_xwny<S: Scalar>(
    table: &CountTable,
    x: &ReducedWord,
    y: &ReducedWord,
    n: usize,
) -> Result<RadialElement<S>> {
    check_pair(x, y)?;
    let (l, m) = (x.len(), y.len());
    if l == 0 || m == 0 {
        return Err(Error::Precondition("counting path needs |x| >= 1 and |y| >= 1".into()));
    }
    if n < l + m + 2 {
        return Err(Error::Precondition(format!(
            "counting path needs n >= |x|+|y|+2 = {}, got n={n}",
            l + m + 2
        )));
    }
    let rank = x.rank();
    let top = n + l + m;
    let mut counts = vec![BigInt::zero(); top + 1];
    for r in 0..=l {
        for s in 0..=m {
            counts[top - 2 * (r + s)] += mu(table, r, s, n, x, y)?;
        }
    }
    let coeffs = counts
        .iter()
        .enumerate()
        .map(|(p, c)| {
            if c.is_zero() {
                S::zero()
            } else {
                S::from_ratio(c, &word_count(rank, p))
            }
        })
        .collect();
    Ok(RadialElement::trimmed(rank, coeffs))
}

/// `E(x w_n y)` by writing out `w_n` and convolving.
pub fn expect_xwny_explicit<S: Scalar>(
    x: &ReducedWord,
    y: &ReducedWord,
    n: usize,
    cap: usize,
) -> Result<RadialElement<S>> {
    check_pair(x, y)?;
    let wn = w_n_explicit::<S>(x.rank(), n, cap)?;
    let prod = AlgebraElement::word(x.clone())
        .mul_capped(&wn, cap)?
        .mul_capped(&AlgebraElement::word(y.clone()), cap)?;
    Ok(expect(&prod))
}

/// Computes `E(x w_n y)` for sandwiched words, choosing the cheapest
/// correct route.
#[derive(Debug, Clone)]
pub struct Sandwich {
    table: CountTable,
    cap: usize,
}

impl Sandwich {
    /// Prepares counts up to `n_max`.
    pub fn new(rank: u32, n_max: usize, cap: usize) -> Result<Self> {
        Ok(Sandwich {
            table: CountTable::new(rank, n_max.max(2))?,
            cap,
        })
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    fn table_for(&self, n: usize) -> Result<std::borrow::Cow<'_, CountTable>> {
        if n <= self.table.n_max() {
            Ok(std::borrow::Cow::Borrowed(&self.table))
        } else {
            Ok(std::borrow::Cow::Owned(CountTable::new(self.table.rank(), n)?))
        }
    }

    pub fn path(x: &ReducedWord, y: &ReducedWord, n: usize) -> SandwichPath {
        if x.is_identity() || y.is_identity() {
            SandwichPath::Modular
        } else if n >= x.len() + y.len() + 2 {
            SandwichPath::Counting
        } else {
            SandwichPath::Explicit
        }
    }

    pub fn expect<S: Scalar>(
        &self,
        x: &ReducedWord,
        y: &ReducedWord,
        n: usize,
    ) -> Result<(RadialElement<S>, SandwichPath)> {
        check_pair(x, y)?;
        let path = Self::path(x, y, n);
        let value = match path {
            SandwichPath::Modular => {
                let wn = RadialElement::basis(x.rank(), n)?;
                expect_word::<S>(x).mul(&wn)?.mul(&expect_word(y))?
            }
            SandwichPath::Counting => expect_xwny(&*self.table_for(n)?, x, y, n)?,
            SandwichPath::Explicit => expect_xwny_explicit(x, y, n, self.cap)?,
        };
        Ok((value, path))
    }

    /// Squared deviation `|E(x w_n y) - E(x) E(y) w_n|^2`.
    pub fn deviation<S: Scalar>(&self, x: &ReducedWord, y: &ReducedWord, n: usize) -> Result<(S, SandwichPath)> {
        check_pair(x, y)?;
        if x.is_identity() || y.is_identity() {
            return Ok((S::zero(), SandwichPath::Modular));
        }
        let (exy, path) = self.expect::<S>(x, y, n)?;
        let factored = expect_word::<S>(x).mul(&expect_word::<S>(y).mul(&RadialElement::basis(x.rank(), n)?)?)?;
        Ok((exy.sub(&factored)?.norm_sq(), path))
    }

    /// Rows `(n, term_n, S_n)` with `term_n = deviation(x, y, n) / |w_n|^2`,
    /// the squared deviation against the normalized basis vector.
    pub fn series<S: Scalar>(&self, x: &ReducedWord, y: &ReducedWord, n_max: usize) -> Result<Vec<SeriesRow<S>>> {
        let mut rows = Vec::with_capacity(n_max + 1);
        let mut sum = S::zero();
        for n in 0..=n_max {
            let (d, _) = self.deviation::<S>(x, y, n)?;
            let term = d / S::from_bigint(&word_count(x.rank(), n));
            sum = sum + term.clone();
            rows.push(SeriesRow {
                n,
                term,
                partial_sum: sum.clone(),
            });
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow<S> {
    pub n: usize,
    pub term: S,
    pub partial_sum: S,
}

/// Squared deviation, dispatching on `n` as [`Sandwich::expect`] does.
pub fn deviation<S: Scalar>(x: &ReducedWord, y: &ReducedWord, n: usize, cap: usize) -> Result<S> {
    Sandwich::new(x.rank(), n, cap)?.deviation(x, y, n).map(|(d, _)| d)
}

/// Partial sums of the squared deviations against `w_n / |w_n|`.
pub fn partial_sum_criterion<S: Scalar>(
    x: &ReducedWord,
    y: &ReducedWord,
    n_max: usize,
    cap: usize,
) -> Result<Vec<SeriesRow<S>>> {
    Sandwich::new(x.rank(), n_max, cap)?.series(x, y, n_max)
}

/// `H^2` where `H = (l+1)(m+1) D_k (2k-1)^((l+m)/2)`; squaring keeps it rational.
pub fn deviation_bound(l: usize, m: usize, rank: u32) -> Rational {
    let lm = BigInt::from((l + 1) * (m + 1));
    let d = constant_d(rank);
    let growth = Pow::pow(BigInt::from(2 * rank as u64 - 1), (l + m) as u32);
    Rational::from_integer(&lm * &lm * growth) * &d * &d
}
