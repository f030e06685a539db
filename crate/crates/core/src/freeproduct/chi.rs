//! Which length-`n` words `u` of the embedded `F_k` keep `x u y` inside it.

use num_bigint::BigInt;

use super::config::FPConfig;
use super::word::{FPWord, Syllable};
use crate::error::{Error, Result};
use crate::freegroup::{enumerate_words, ReducedWord};
use crate::radial::{expect_word, RadialElement};
use crate::scalar::Scalar;

/// A member `u` of `chi_n` and the `F_k` word `x u y` reduces to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiMember {
    pub u: ReducedWord,
    pub product: ReducedWord,
}

/// `x u y` in normal form.
pub fn sandwich(x: &FPWord, u: &ReducedWord, y: &FPWord, cfg: &FPConfig) -> Result<FPWord> {
    let image = cfg.embed_fk_word(u)?;
    x.concat(&[&image, y], &cfg.factors)
}

/// All `u` with `|u| = n` and `x u y` in the embedded `F_k`, in canonical order.
pub fn chi_n(x: &FPWord, y: &FPWord, n: usize, cfg: &FPConfig, cap: usize) -> Result<Vec<ChiMember>> {
    let mut out = Vec::new();
    for u in enumerate_words(cfg.rank(), n, cap)? {
        let w = sandwich(x, &u, y, cfg)?;
        if let Some(product) = cfg.is_in_fk(&w) {
            out.push(ChiMember { u, product });
        }
    }
    Ok(out)
}

/// Upper bound `(n+1)(2n+1)` on `|chi_n|` when neither `x` nor `y` is in `F_k`.
pub fn chi_bound(n: usize) -> BigInt {
    BigInt::from(n + 1) * BigInt::from(2 * n + 1)
}

/// `E(x w_n y) = sum over u in chi_n of w_p / |w_p|^2` with `p = |x u y|`,
/// together with `|chi_n|`.
pub fn expect_fp<S: Scalar>(
    x: &FPWord,
    y: &FPWord,
    n: usize,
    cfg: &FPConfig,
    cap: usize,
) -> Result<(RadialElement<S>, usize)> {
    let members = chi_n(x, y, n, cfg, cap)?;
    let mut acc = RadialElement::zero(cfg.rank())?;
    for m in &members {
        acc = acc.add(&expect_word(&m.product))?;
    }
    Ok((acc, members.len()))
}

/// The two ways `x u y` can land in `F_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `u` cancels completely: its first `p` syllables against the end of
    /// `x`, the rest against the start of `y`.
    FullCancellation,
    /// Everything except the syllable `u_p` cancels; `u_p` survives between
    /// `x_p` and `y_{r-p+1}`.
    Survivor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseClass {
    pub case: CaseTag,
    pub p: usize,
}

/// Classifies a member of `chi_n`, checking that the remaining product named
/// by the case equals the actual normal form of `x u y`.
pub fn case_classify(u: &ReducedWord, x: &FPWord, y: &FPWord, cfg: &FPConfig) -> Result<CaseClass> {
    let actual = sandwich(x, u, y, cfg)?;
    if cfg.is_in_fk(&actual).is_none() {
        return Err(Error::Precondition(format!("{u} is not in chi_n for x = {x}, y = {y}")));
    }
    let image = cfg.embed_fk_word(u)?;
    let us = image.syllables();
    let xs = x.syllables();
    let ys = y.syllables();
    let (r, l, q) = (us.len(), xs.len(), ys.len());
    let f = &cfg.factors;
    let inv = |s: &Syllable| Syllable {
        factor: s.factor,
        element: f[s.factor - 1].neg(&s.element),
    };
    // x = x_l ... x_1, so x_i = xs[l - i]; y = y_1 ... y_q; u = u_1 ... u_r
    let left_cancels = |count: usize| count <= l && (1..=count).all(|i| us[i - 1] == inv(&xs[l - i]));
    let right_cancels = |count: usize| count <= q && (1..=count).all(|i| us[r - i] == inv(&ys[i - 1]));

    for p in 0..=r {
        if left_cancels(p) && right_cancels(r - p) {
            let rest = cfg.reduce(xs[..l - p].iter().chain(&ys[r - p..]).cloned())?;
            if rest == actual {
                return Ok(CaseClass {
                    case: CaseTag::FullCancellation,
                    p,
                });
            }
        }
    }
    for p in 1..=r {
        if p - 1 <= l && left_cancels(p - 1) && right_cancels(r - p) {
            let head = &xs[..l - (p - 1)];
            let rest = cfg.reduce(
                head.iter()
                    .chain(std::iter::once(&us[p - 1]))
                    .chain(&ys[r - p..])
                    .cloned(),
            )?;
            if rest == actual {
                return Ok(CaseClass {
                    case: CaseTag::Survivor,
                    p,
                });
            }
        }
    }
    Err(Error::Precondition(format!(
        "{u} matches neither cancellation pattern for x = {x}, y = {y}"
    )))
}
