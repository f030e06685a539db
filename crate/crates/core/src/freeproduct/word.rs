//! Normal forms in a free product of abelian groups.

use std::fmt;

use super::abelian::{AbelianElement, AbelianGroupSpec};
use crate::error::{Error, Result};

/// A nonidentity element of one factor. Factor indices start at 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub element: AbelianElement,
}

/// A word in normal form: no identity syllables, adjacent factors distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FPWord {
    syllables: Vec<Syllable>,
}

impl FPWord {
    pub fn identity() -> Self {
        FPWord::default()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn inverse(&self, factors: &[AbelianGroupSpec]) -> FPWord {
        FPWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    element: factors[s.factor - 1].neg(&s.element),
                })
                .collect(),
        }
    }

    /// Normal form of `self` followed by `others`.
    pub fn concat(&self, others: &[&FPWord], factors: &[AbelianGroupSpec]) -> Result<FPWord> {
        let all = self
            .syllables
            .iter()
            .chain(others.iter().flat_map(|w| w.syllables.iter()))
            .cloned();
        fp_reduce(all, factors)
    }
}

/// Merges adjacent syllables from the same factor and drops identities until
/// the sequence is in normal form.
pub fn fp_reduce<I: IntoIterator<Item = Syllable>>(seq: I, factors: &[AbelianGroupSpec]) -> Result<FPWord> {
    let mut stack: Vec<Syllable> = Vec::new();
    for syl in seq {
        let spec = syl.factor.checked_sub(1).and_then(|i| factors.get(i)).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "factor index {} out of range 1..={}",
                syl.factor,
                factors.len()
            ))
        })?;
        let element = spec.normalize(syl.element)?;
        let merged = match stack.last() {
            Some(top) if top.factor == syl.factor => {
                let m = spec.add(&top.element, &element);
                stack.pop();
                m
            }
            _ => element,
        };
        if !merged.is_identity() {
            stack.push(Syllable {
                factor: syl.factor,
                element: merged,
            });
        }
    }
    Ok(FPWord { syllables: stack })
}

fn parse_ints(text: &str, what: &str) -> Result<Vec<i64>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad {what} component `{t}`")))
        })
        .collect()
}

/// Parses whitespace-separated syllables `F:a,b/t` (factor `F`, free part
/// `a,b`, torsion residues `t` after an optional `/`), then reduces.
/// `e` is the identity.
pub fn parse_fp_word(text: &str, factors: &[AbelianGroupSpec]) -> Result<FPWord> {
    let mut seq = Vec::new();
    for atom in text.split_whitespace() {
        if atom == "e" {
            continue;
        }
        let (factor, rest) = atom
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("syllable `{atom}` needs the form F:free[/torsion]")))?;
        let factor: usize = factor
            .parse()
            .map_err(|_| Error::Parse(format!("bad factor index in `{atom}`")))?;
        let (free, torsion) = rest.split_once('/').unwrap_or((rest, ""));
        seq.push(Syllable {
            factor,
            element: AbelianElement {
                free: parse_ints(free, "free")?,
                torsion: parse_ints(torsion, "torsion")?,
            },
        });
    }
    fp_reduce(seq, factors)
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}", self.factor, join(&self.element.free))?;
        if !self.element.torsion.is_empty() {
            write!(f, "/{}", join(&self.element.torsion))?;
        }
        Ok(())
    }
}

impl fmt::Display for FPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.syllables.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}
