//! Free products of finitely generated abelian groups and the copy of `F_k`
//! generated by designated elements of infinite order.

mod abelian;
mod chi;
mod config;
mod word;

pub use abelian::{AbelianElement, AbelianGroupSpec};
pub use chi::{case_classify, chi_bound, chi_n, expect_fp, sandwich, CaseClass, CaseTag, ChiMember};
pub use config::{Designated, FPConfig};
pub use word::{fp_reduce, parse_fp_word, FPWord, Syllable};
