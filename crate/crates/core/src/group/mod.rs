//! Words, permutations, homomorphisms to `S_n`, finite-quotient search and
//! abelianization for marked presentations.

pub mod hom;
pub mod perm;
pub mod search;
pub mod snf;
pub mod word;

use serde::{Deserialize, Serialize};

pub use hom::{evaluate, order_profile, Hom, HomError, OrderProfile};
pub use perm::Perm;
pub use search::{nontriviality_certificate, vtf_witness_search, Certificate, SearchOutcome};
pub use snf::{smith_normal_form, ImageLattice, IntMatrix, SnfResult};
pub use word::{FreeWord, Letter};

/// A relator `r`, standing for `r^p` when `power` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedRelator {
    pub word: FreeWord,
    pub power: bool,
    /// Branch level, for relators of branch vertices.
    pub branch: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPresentation {
    pub generator_count: usize,
    pub p: u32,
    pub relators: Vec<MarkedRelator>,
}

impl MarkedPresentation {
    /// Branch levels whose relators carry the power flag.
    pub fn flagged_levels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.relators.iter().filter(|r| r.power).filter_map(|r| r.branch).collect();
        out.sort_unstable();
        out
    }

    pub fn branch_relator(&self, level: u32) -> Option<&MarkedRelator> {
        self.relators.iter().find(|r| r.branch == Some(level))
    }

    /// Exponent-sum matrix, one row per relator, flagged rows scaled by `p`.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generator_count);
        for (i, r) in self.relators.iter().enumerate() {
            let scale = if r.power { self.p as i64 } else { 1 };
            for (g, s) in r.word.exponent_sums(self.generator_count).into_iter().enumerate() {
                m.set(i, g, s * scale);
            }
        }
        m
    }
}

/// `H_1` of the presented group: torsion from the invariant factors, plus free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub snf: SnfResult,
    pub free_rank: usize,
}

pub fn abelianization(p: &MarkedPresentation) -> Abelianization {
    let snf = smith_normal_form(&p.exponent_matrix());
    let free_rank = p.generator_count - snf.rank();
    Abelianization { snf, free_rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rel(letters: &[i32], power: bool) -> MarkedRelator {
        MarkedRelator {
            word: FreeWord::new(letters.iter().copied()),
            power,
            branch: None,
        }
    }

    #[test]
    fn no_relators_is_free() {
        let p = MarkedPresentation {
            generator_count: 35,
            p: 2,
            relators: vec![],
        };
        let ab = abelianization(&p);
        assert_eq!(ab.free_rank, 35);
        assert!(ab.snf.invariants.is_empty());
    }

    #[test]
    fn killing_one_of_two_generators() {
        let p = MarkedPresentation {
            generator_count: 2,
            p: 2,
            relators: vec![rel(&[1], false)],
        };
        let ab = abelianization(&p);
        assert_eq!(ab.snf.invariants, vec![BigInt::from(1)]);
        assert_eq!(ab.free_rank, 1);
    }

    #[test]
    fn power_flag_scales_row() {
        let p = MarkedPresentation {
            generator_count: 1,
            p: 3,
            relators: vec![rel(&[1], true)],
        };
        assert_eq!(abelianization(&p).snf.torsion(), vec![BigInt::from(3)]);
    }
}
