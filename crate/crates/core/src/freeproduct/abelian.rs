//! Finitely generated abelian groups `Z^r x Z/n_1 x ... x Z/n_t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

/// An element in normal form: integer free part, torsion residues in `0..n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianElement {
    pub free: Vec<i64>,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

impl AbelianGroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        let spec = AbelianGroupSpec { free_rank, torsion };
        spec.validate()?;
        Ok(spec)
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupSpec {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.torsion.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidConfig(format!("torsion modulus {bad} must be >= 2")));
        }
        if self.free_rank == 0 && self.torsion.is_empty() {
            return Err(Error::InvalidConfig("trivial factor group".into()));
        }
        Ok(())
    }

    pub fn identity(&self) -> AbelianElement {
        AbelianElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion.len()],
        }
    }

    /// Checks shape and brings torsion parts into `0..n_i`.
    pub fn normalize(&self, mut e: AbelianElement) -> Result<AbelianElement> {
        if e.free.len() != self.free_rank || e.torsion.len() != self.torsion.len() {
            return Err(Error::InvalidConfig(format!(
                "element has shape ({}, {}), factor expects ({}, {})",
                e.free.len(),
                e.torsion.len(),
                self.free_rank,
                self.torsion.len()
            )));
        }
        for (t, n) in e.torsion.iter_mut().zip(&self.torsion) {
            *t = t.rem_euclid(*n);
        }
        Ok(e)
    }

    pub fn add(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        AbelianElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((x, y), n)| (x + y).rem_euclid(*n))
                .collect(),
        }
    }

    pub fn neg(&self, a: &AbelianElement) -> AbelianElement {
        self.scale(a, -1)
    }

    pub fn scale(&self, a: &AbelianElement, e: i64) -> AbelianElement {
        AbelianElement {
            free: a.free.iter().map(|x| x * e).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(x, n)| (x * e).rem_euclid(*n))
                .collect(),
        }
    }

    /// The unique `e` with `a = e * base`, for `base` of infinite order.
    pub fn power_of(&self, a: &AbelianElement, base: &AbelianElement) -> Option<i64> {
        let (j, &b) = base.free.iter().enumerate().find(|(_, &b)| b != 0)?;
        if a.free[j] % b != 0 {
            return None;
        }
        let e = a.free[j] / b;
        (self.scale(base, e) == *a).then_some(e)
    }
}

impl AbelianElement {
    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }

    pub fn has_infinite_order(&self) -> bool {
        self.free.iter().any(|&x| x != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(free: &[i64], torsion: &[i64]) -> AbelianElement {
        AbelianElement {
            free: free.to_vec(),
            torsion: torsion.to_vec(),
        }
    }

    #[test]
    fn arithmetic_and_normalization() {
        let g = AbelianGroupSpec::new(1, vec![3]).unwrap();
        let a = g.normalize(el(&[2], &[-1])).unwrap();
        assert_eq!(a, el(&[2], &[2]));
        assert!(g.add(&a, &g.neg(&a)).is_identity());
        assert_eq!(g.scale(&a, 2), el(&[4], &[1]));
        assert!(g.normalize(el(&[1, 2], &[0])).is_err());
        assert!(AbelianGroupSpec::new(1, vec![1]).is_err());
        assert!(AbelianGroupSpec::new(0, vec![]).is_err());
    }

    #[test]
    fn powers_in_z2() {
        let g = AbelianGroupSpec::free(2);
        let base = el(&[1, 0], &[]);
        assert_eq!(g.power_of(&el(&[3, 1], &[]), &base), None);
        assert_eq!(g.power_of(&el(&[3, 0], &[]), &base), Some(3));
        let base2 = el(&[2, 0], &[]);
        assert_eq!(g.power_of(&el(&[3, 0], &[]), &base2), None);
        assert_eq!(g.power_of(&el(&[-4, 0], &[]), &base2), Some(-2));
    }

    #[test]
    fn powers_with_torsion() {
        let g = AbelianGroupSpec::new(1, vec![4]).unwrap();
        let base = el(&[1], &[1]);
        assert_eq!(g.power_of(&el(&[3], &[3]), &base), Some(3));
        assert_eq!(g.power_of(&el(&[3], &[0]), &base), None);
        assert_eq!(g.power_of(&el(&[-1], &[3]), &base), Some(-1));
    }
}
