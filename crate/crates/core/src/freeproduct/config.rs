//! The free product `G = G_1 * ... * G_m` with designated elements
//! `g_1, ..., g_k` of infinite order in distinct factors, and the copy of
//! `F_k` they generate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::abelian::{AbelianElement, AbelianGroupSpec};
use super::word::{fp_reduce, FPWord, Syllable};
use crate::error::{Error, Result};
use crate::freegroup::{Letter, ReducedWord};

fn default_power() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designated {
    /// 1-based factor index.
    pub factor: usize,
    pub element: AbelianElement,
    /// Replaces `g_i` by `g_i^power`.
    #[serde(default = "default_power")]
    pub power: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPConfig {
    pub factors: Vec<AbelianGroupSpec>,
    pub designated: Vec<Designated>,
}

impl FPConfig {
    pub fn new(factors: Vec<AbelianGroupSpec>, designated: Vec<Designated>) -> Result<Self> {
        let mut cfg = FPConfig { factors, designated };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: FPConfig = serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        FPConfig::new(cfg.factors, cfg.designated)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// `Z^2 * Z` with `(1,0)` and `1` designated, raised to the given powers.
    pub fn z2_star_z(powers: (i64, i64)) -> Self {
        FPConfig::new(
            vec![AbelianGroupSpec::free(2), AbelianGroupSpec::free(1)],
            vec![
                Designated {
                    factor: 1,
                    element: AbelianElement {
                        free: vec![1, 0],
                        torsion: vec![],
                    },
                    power: powers.0,
                },
                Designated {
                    factor: 2,
                    element: AbelianElement {
                        free: vec![1],
                        torsion: vec![],
                    },
                    power: powers.1,
                },
            ],
        )
        .expect("built-in configuration is valid")
    }

    fn validate(&mut self) -> Result<()> {
        if self.factors.len() < 2 {
            return Err(Error::InvalidConfig("need at least two factor groups".into()));
        }
        for f in &self.factors {
            f.validate()?;
        }
        if self.designated.len() < 2 {
            return Err(Error::InvalidConfig("need at least two designated elements".into()));
        }
        let mut seen = vec![false; self.factors.len()];
        for d in &mut self.designated {
            let spec = d
                .factor
                .checked_sub(1)
                .and_then(|i| self.factors.get(i))
                .ok_or_else(|| Error::InvalidConfig(format!("designated factor {} out of range", d.factor)))?;
            if std::mem::replace(&mut seen[d.factor - 1], true) {
                return Err(Error::InvalidConfig(format!(
                    "factor {} carries two designated elements",
                    d.factor
                )));
            }
            d.element = spec.normalize(d.element.clone())?;
            if !d.element.has_infinite_order() {
                return Err(Error::InvalidConfig(format!(
                    "designated element in factor {} has finite order",
                    d.factor
                )));
            }
            if d.power == 0 {
                return Err(Error::InvalidConfig("designated power must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// Rank of the embedded free group.
    pub fn rank(&self) -> u32 {
        self.designated.len() as u32
    }

    fn base(&self, i: usize) -> AbelianElement {
        let d = &self.designated[i];
        self.factors[d.factor - 1].scale(&d.element, d.power)
    }

    fn generator_for_factor(&self, factor: usize) -> Option<usize> {
        self.designated.iter().position(|d| d.factor == factor)
    }

    pub fn reduce(&self, seq: impl IntoIterator<Item = Syllable>) -> Result<FPWord> {
        fp_reduce(seq, &self.factors)
    }

    /// Image of an `F_k` word: `g_i^{±1}` becomes `(factor_i, ±power_i * element_i)`.
    pub fn embed_fk_word(&self, u: &ReducedWord) -> Result<FPWord> {
        if u.rank() != self.rank() {
            return Err(Error::RankMismatch {
                left: u.rank(),
                right: self.rank(),
            });
        }
        let seq = u.letters().iter().map(|l| {
            let i = l.generator() as usize - 1;
            Syllable {
                factor: self.designated[i].factor,
                element: self.factors[self.designated[i].factor - 1].scale(&self.base(i), l.sign() as i64),
            }
        });
        self.reduce(seq)
    }

    /// The `F_k` word whose image is `w`, if there is one.
    pub fn is_in_fk(&self, w: &FPWord) -> Option<ReducedWord> {
        let mut letters = Vec::new();
        for syl in w.syllables() {
            let i = self.generator_for_factor(syl.factor)?;
            let e = self.factors[syl.factor - 1].power_of(&syl.element, &self.base(i))?;
            let letter = Letter::new(i as u32 + 1, e < 0);
            letters.extend(std::iter::repeat_n(letter, e.unsigned_abs() as usize));
        }
        ReducedWord::reduce(letters, self.rank()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{enumerate_words, parse_word, DEFAULT_CAP};
    use crate::freeproduct::parse_fp_word;

    #[test]
    fn json_round_trip() {
        let cfg = FPConfig::z2_star_z((1, 1));
        assert_eq!(FPConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        let text = r#"{"factors":[{"free_rank":2},{"free_rank":1,"torsion":[]}],
            "designated":[{"factor":1,"element":{"free":[1,0]}},{"factor":2,"element":{"free":[1]},"power":3}]}"#;
        let parsed = FPConfig::from_json(text).unwrap();
        assert_eq!(parsed.designated[0].power, 1);
        assert_eq!(parsed.designated[1].power, 3);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            // designated elements share a factor
            r#"{"factors":[{"free_rank":1},{"free_rank":1}],
               "designated":[{"factor":1,"element":{"free":[1]}},{"factor":1,"element":{"free":[2]}}]}"#,
            // finite order
            r#"{"factors":[{"free_rank":1},{"free_rank":0,"torsion":[2]}],
               "designated":[{"factor":1,"element":{"free":[1]}},{"factor":2,"element":{"free":[],"torsion":[1]}}]}"#,
            // one factor only
            r#"{"factors":[{"free_rank":1}],"designated":[{"factor":1,"element":{"free":[1]}}]}"#,
            // out of range
            r#"{"factors":[{"free_rank":1},{"free_rank":1}],
               "designated":[{"factor":1,"element":{"free":[1]}},{"factor":3,"element":{"free":[1]}}]}"#,
            // zero power
            r#"{"factors":[{"free_rank":1},{"free_rank":1}],
               "designated":[{"factor":1,"element":{"free":[1]},"power":0},{"factor":2,"element":{"free":[1]}}]}"#,
            "not json",
        ];
        for text in bad {
            assert!(
                matches!(FPConfig::from_json(text), Err(Error::InvalidConfig(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn embedding_examples() {
        let cfg = FPConfig::z2_star_z((1, 1));
        let u = parse_word("g1 g2", 2, false).unwrap();
        assert_eq!(cfg.embed_fk_word(&u).unwrap().len(), 2);
        let u = parse_word("g1 g1", 2, false).unwrap();
        assert_eq!(cfg.embed_fk_word(&u).unwrap().to_string(), "1:2,0");
        assert!(cfg
            .embed_fk_word(&ReducedWord::identity(2).unwrap())
            .unwrap()
            .is_identity());

        let cfg = FPConfig::z2_star_z((2, 3));
        let u = parse_word("g1 g1", 2, false).unwrap();
        assert_eq!(cfg.embed_fk_word(&u).unwrap().to_string(), "1:4,0");
        assert!(cfg.embed_fk_word(&ReducedWord::identity(3).unwrap()).is_err());
    }

    #[test]
    fn membership_round_trip() {
        for powers in [(1, 1), (2, 3), (-1, 2)] {
            let cfg = FPConfig::z2_star_z(powers);
            for n in 0..=5 {
                for u in enumerate_words(2, n, DEFAULT_CAP).unwrap() {
                    assert_eq!(cfg.is_in_fk(&cfg.embed_fk_word(&u).unwrap()), Some(u));
                }
            }
        }
    }

    #[test]
    fn membership_rejections() {
        let cfg = FPConfig::z2_star_z((1, 1));
        let f = &cfg.factors;
        assert!(cfg.is_in_fk(&parse_fp_word("1:3,1", f).unwrap()).is_none());
        assert_eq!(
            cfg.is_in_fk(&parse_fp_word("1:3,0", f).unwrap()),
            Some(parse_word("g1^3", 2, false).unwrap())
        );
        let cfg3 = FPConfig::new(
            vec![
                AbelianGroupSpec::free(1),
                AbelianGroupSpec::free(1),
                AbelianGroupSpec::free(1),
            ],
            vec![
                Designated {
                    factor: 1,
                    element: AbelianElement {
                        free: vec![1],
                        torsion: vec![],
                    },
                    power: 1,
                },
                Designated {
                    factor: 2,
                    element: AbelianElement {
                        free: vec![1],
                        torsion: vec![],
                    },
                    power: 1,
                },
            ],
        )
        .unwrap();
        assert!(cfg3.is_in_fk(&parse_fp_word("3:1", &cfg3.factors).unwrap()).is_none());
        let t = FPConfig::z2_star_z((2, 1));
        assert!(t.is_in_fk(&parse_fp_word("1:3,0", &t.factors).unwrap()).is_none());
    }
}
