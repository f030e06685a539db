//! Reduced words in the free group on `k` generators.
//!
//! Letters are ordered `g1 < g1^-1 < g2 < g2^-1 < ...`; this order fixes the
//! enumeration order of [`enumerate_words`] and hence every table the crate
//! produces.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};

/// Default upper bound on the number of words any enumeration may produce.
pub const DEFAULT_CAP: usize = 10_000_000;

/// A generator or inverse generator, `g_i^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u32,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        assert!(generator >= 1, "generator indices start at 1");
        Letter { generator, inverse }
    }

    pub fn gen(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub fn inv(generator: u32) -> Self {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> u32 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the canonical order, `0..2k`.
    pub fn code(self) -> usize {
        2 * (self.generator as usize - 1) + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter {
            generator: (code / 2) as u32 + 1,
            inverse: code % 2 == 1,
        }
    }

    pub fn check_rank(self, rank: u32) -> Result<()> {
        if self.generator > rank {
            Err(Error::InvalidGenerator {
                index: self.generator,
                rank,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator)
        } else {
            write!(f, "g{}", self.generator)
        }
    }
}

/// All `2k` letters in canonical order.
pub fn alphabet(rank: u32) -> Vec<Letter> {
    (0..2 * rank as usize).map(Letter::from_code).collect()
}

pub(crate) fn check_rank(rank: u32) -> Result<()> {
    if rank < 2 {
        Err(Error::InvalidRank(rank))
    } else {
        Ok(())
    }
}

/// A freely reduced word of `F_k`. The empty word is the identity.
///
/// Words order by rank, then length, then lexicographically on letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    rank: u32,
    letters: Vec<Letter>,
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ReducedWord {
    pub fn identity(rank: u32) -> Result<Self> {
        check_rank(rank)?;
        Ok(ReducedWord {
            rank,
            letters: Vec::new(),
        })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I, rank: u32) -> Result<Self> {
        check_rank(rank)?;
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            l.check_rank(rank)?;
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(ReducedWord { rank, letters: out })
    }

    /// Builds a word from letters already known to be reduced and in range.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>, rank: u32) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        ReducedWord { rank, letters }
    }

    pub fn letter(l: Letter, rank: u32) -> Result<Self> {
        Self::reduce([l], rank)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced product `self · other` together with the number of cancelled
    /// letter pairs at the junction.
    pub fn concat(&self, other: &ReducedWord) -> Result<(ReducedWord, usize)> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(self.concat_same_rank(other))
    }

    pub(crate) fn concat_same_rank(&self, other: &ReducedWord) -> (ReducedWord, usize) {
        let a = &self.letters;
        let b = &other.letters;
        let mut c = 0;
        while c < a.len() && c < b.len() && a[a.len() - 1 - c] == b[c].inverse() {
            c += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * c);
        letters.extend_from_slice(&a[..a.len() - c]);
        letters.extend_from_slice(&b[c..]);
        (
            ReducedWord {
                rank: self.rank,
                letters,
            },
            c,
        )
    }

    pub fn mul(&self, other: &ReducedWord) -> Result<ReducedWord> {
        self.concat(other).map(|(w, _)| w)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self, false))
    }
}

/// Number of reduced words of length `n`: `1` for `n = 0`, else `2k(2k-1)^(n-1)`.
pub fn word_count(rank: u32, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let k = BigInt::from(rank);
    let two_k = &k * 2u32;
    let base: BigInt = &two_k - 1u32;
    two_k * Pow::pow(base, (n - 1) as u32)
}

fn count_within_cap(rank: u32, n: usize, cap: usize) -> Result<usize> {
    let count = word_count(rank, n);
    if count > BigInt::from(cap) {
        return Err(Error::CapExceeded {
            what: "word enumeration",
            requested: count.to_string(),
            cap,
        });
    }
    Ok(usize::try_from(&count).expect("count bounded by cap"))
}

/// Iterator over the reduced words of a fixed length in canonical order.
#[derive(Debug, Clone)]
pub struct Words {
    rank: u32,
    codes: Vec<usize>,
    remaining: usize,
}

impl Words {
    fn first_valid_after(&self, pos: usize, start: usize) -> Option<usize> {
        let alpha = 2 * self.rank as usize;
        (start..alpha).find(|&c| pos == 0 || c != self.codes[pos - 1] ^ 1)
    }

    fn advance(&mut self) {
        let n = self.codes.len();
        for pos in (0..n).rev() {
            if let Some(c) = self.first_valid_after(pos, self.codes[pos] + 1) {
                self.codes[pos] = c;
                for tail in pos + 1..n {
                    self.codes[tail] = self.first_valid_after(tail, 0).expect("alphabet has >= 4 letters");
                }
                return;
            }
        }
    }
}

impl Iterator for Words {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        if self.remaining == 0 {
            return None;
        }
        let word =
            ReducedWord::from_reduced_unchecked(self.codes.iter().map(|&c| Letter::from_code(c)).collect(), self.rank);
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(word)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Words {}

/// All reduced words of length `n`, each exactly once, in canonical order.
pub fn enumerate_words(rank: u32, n: usize, cap: usize) -> Result<Words> {
    check_rank(rank)?;
    let remaining = count_within_cap(rank, n, cap)?;
    // g1 g1 ... g1 is the smallest reduced word
    Ok(Words {
        rank,
        codes: vec![0; n],
        remaining,
    })
}

/// Words of length `n` whose first letter is `first`, in canonical order.
pub fn enumerate_words_with_first(
    rank: u32,
    n: usize,
    first: Letter,
    cap: usize,
) -> Result<impl Iterator<Item = ReducedWord>> {
    let all = enumerate_words(rank, n, cap)?;
    Ok(all.filter(move |w| w.first() == Some(first)))
}

/// Renders a word as whitespace-separated atoms, collapsing runs into powers.
pub fn format_word(w: &ReducedWord, letters: bool) -> String {
    if w.is_identity() {
        return "e".to_string();
    }
    let mut atoms = Vec::new();
    let mut i = 0;
    let ls = w.letters();
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let exp = (j - i) as i64 * ls[i].sign() as i64;
        let name = generator_name(ls[i].generator(), letters);
        atoms.push(if exp == 1 { name } else { format!("{name}^{exp}") });
        i = j;
    }
    atoms.join(" ")
}

fn generator_name(generator: u32, letters: bool) -> String {
    // `e` is reserved for the identity, so g5 keeps its long name
    if letters && generator <= 26 && generator != 5 {
        char::from(b'a' + (generator - 1) as u8).to_string()
    } else {
        format!("g{generator}")
    }
}

fn parse_generator(name: &str, letters: bool) -> Result<u32> {
    if let Some(idx) = name.strip_prefix('g') {
        if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) {
            return idx
                .parse::<u32>()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse(format!("bad generator index in `{name}`")));
        }
    }
    let mut chars = name.chars();
    if let (true, Some(c), None) = (letters, chars.next(), chars.next()) {
        if c.is_ascii_lowercase() && c != 'e' {
            return Ok(c as u32 - 'a' as u32 + 1);
        }
    }
    Err(Error::Parse(format!("unknown atom `{name}`")))
}

/// Parses `g1 g2^-1 g1^3` (or `a b^-1 a^3` with `letters`) and reduces.
/// `e` denotes the identity.
pub fn parse_word(text: &str, rank: u32, letters: bool) -> Result<ReducedWord> {
    check_rank(rank)?;
    let mut seq = Vec::new();
    for atom in text.split_whitespace() {
        if atom == "e" {
            continue;
        }
        let (name, exp) = match atom.split_once('^') {
            Some((name, exp)) => {
                let e: i64 = exp
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{atom}`")))?;
                if e == 0 {
                    return Err(Error::Parse(format!("zero exponent in `{atom}`")));
                }
                (name, e)
            }
            None => (atom, 1),
        };
        let generator = parse_generator(name, letters)?;
        let letter = Letter::new(generator, exp < 0);
        letter.check_rank(rank)?;
        seq.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    ReducedWord::reduce(seq, rank)
}
