//! Free words. A letter is a nonzero `i32`: `g + 1` for generator `g`,
//! `-(g + 1)` for its inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type Letter = i32;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// Freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> FreeWord {
        FreeWord::default()
    }

    /// Reduces `letters`; zero letters are skipped.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l == 0 {
                continue;
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    pub fn generator(g: usize) -> FreeWord {
        FreeWord {
            letters: vec![letter(g, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&l| generator_of(l)).max()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> FreeWord {
        FreeWord::new(std::iter::repeat_n(self.letters.iter().copied(), k).flatten())
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count.max(self.max_generator().map_or(0, |g| g + 1))];
        for &l in &self.letters {
            sums[generator_of(l)] += l.signum() as i64;
        }
        sums
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| {
                let g = generator_of(l);
                if l > 0 {
                    format!("x{g}")
                } else {
                    format!("x{g}^-1")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_cancelling_pairs() {
        let w = FreeWord::new([1, 2, -2, -1, 3]);
        assert_eq!(w.letters(), &[3]);
        assert_eq!(FreeWord::new([1, -1]).to_string(), "1");
    }

    proptest! {
        #[test]
        fn inverse_cancels(ls in prop::collection::vec(prop_oneof![-4i32..=-1, 1i32..=4], 0..30)) {
            let w = FreeWord::new(ls);
            prop_assert!(w.concat(&w.inverse()).is_empty());
            let reduced = w.letters().windows(2).all(|p| p[0] != -p[1]);
            prop_assert!(reduced);
        }
    }
}
