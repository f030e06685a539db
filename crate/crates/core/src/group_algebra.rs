//! Finitely supported linear combinations of reduced words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::freegroup::{self, enumerate_words, format_word, parse_word, ReducedWord, DEFAULT_CAP};
use crate::scalar::Scalar;

/// An element of the group algebra `R[F_k]` with finite support.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S> {
    rank: u32,
    terms: BTreeMap<ReducedWord, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(rank: u32) -> Result<Self> {
        freegroup::check_rank(rank)?;
        Ok(AlgebraElement {
            rank,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(rank: u32) -> Result<Self> {
        Ok(Self::word(ReducedWord::identity(rank)?))
    }

    pub fn word(w: ReducedWord) -> Self {
        Self::monomial(w, S::one())
    }

    pub fn monomial(w: ReducedWord, coeff: S) -> Self {
        let rank = w.rank();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(w, coeff);
        }
        AlgebraElement { rank, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (ReducedWord, S)>>(rank: u32, terms: I) -> Result<Self> {
        let mut out = Self::zero(rank)?;
        for (w, c) in terms {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, w: ReducedWord, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &ReducedWord) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Terms in word order (shortlex).
    pub fn terms(&self) -> impl Iterator<Item = (&ReducedWord, &S)> {
        self.terms.iter()
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
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&-S::one()))
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone() * s.clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        AlgebraElement { rank: self.rank, terms }
    }

    /// Convolution product, capped at [`DEFAULT_CAP`] support terms.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, DEFAULT_CAP)
    }

    pub fn mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_same_rank(other)?;
        let mut acc: HashMap<ReducedWord, S> = HashMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let (w, _) = u.concat_same_rank(v);
                let p = a.clone() * b.clone();
                match acc.get_mut(&w) {
                    Some(existing) => *existing = existing.clone() + p,
                    None => {
                        acc.insert(w, p);
                        if acc.len() > cap {
                            return Err(Error::CapExceeded {
                                what: "product support",
                                requested: format!("more than {cap}"),
                                cap,
                            });
                        }
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(AlgebraElement { rank: self.rank, terms })
    }

    /// `a*`: the coefficient at `v` is the coefficient of `v^-1`.
    pub fn adjoint(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.inverse(), c.clone())).collect();
        AlgebraElement { rank: self.rank, terms }
    }

    /// Coefficient of the identity.
    pub fn trace(&self) -> S {
        self.terms
            .iter()
            .next()
            .filter(|(w, _)| w.is_identity())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(S::zero)
    }

    /// `tr(a* a)`, i.e. the sum of squared coefficients.
    pub fn l2_norm_sq(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    /// `<a, b> = tr(b* a)`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same_rank(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(w, a)| other.terms.get(w).map(|b| a.clone() * b.clone()))
            .fold(S::zero(), |acc, x| acc + x))
    }

    /// Sum of the coefficients over words of each length; entry `n` is the
    /// level-`n` sum.
    pub fn level_sums(&self) -> Vec<S> {
        let mut sums: Vec<S> = Vec::new();
        for (w, c) in &self.terms {
            if sums.len() <= w.len() {
                sums.resize(w.len() + 1, S::zero());
            }
            sums[w.len()] = sums[w.len()].clone() + c.clone();
        }
        sums
    }
}

/// `w_n`: the sum of every reduced word of length `n`.
pub fn w_n_explicit<S: Scalar>(rank: u32, n: usize, cap: usize) -> Result<AlgebraElement<S>> {
    let terms = enumerate_words(rank, n, cap)?.map(|w| (w, S::one())).collect();
    Ok(AlgebraElement { rank, terms })
}

impl<S: Scalar + fmt::Display> AlgebraElement<S> {
    /// One `<coefficient> <word>` line per term, in word order.
    pub fn to_text(&self, letters: bool) -> String {
        let mut out = String::new();
        for (w, c) in &self.terms {
            out.push_str(&format!("{} {}\n", c, format_word(w, letters)));
        }
        out
    }
}

impl<S: Scalar + FromStr> AlgebraElement<S> {
    /// Parses the line format of [`AlgebraElement::to_text`]; blank lines and
    /// lines starting with `#` are skipped, repeated words accumulate.
    pub fn parse_text(text: &str, rank: u32, letters: bool) -> Result<Self> {
        let mut out = Self::zero(rank)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (coeff, word) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("line {}: expected `<coefficient> <word>`", lineno + 1)))?;
            let c: S = coeff
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad coefficient `{coeff}`", lineno + 1)))?;
            out.add_term(parse_word(word, rank, letters)?, c);
        }
        Ok(out)
    }
}
