//! Permutations of `{0..n-1}` as image arrays.
//!
//! Products read left to right: `p.then(q)` applies `p` first.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image array is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("cycle notation: {0}")]
    Notation(String),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection(n));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// The permutation of degree `n` with the given disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let x = x as usize;
                if x >= n || moved[x] {
                    return Err(PermError::Notation(format!("point {x} repeated or out of range")));
                }
                moved[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    /// Nontrivial cycles, each starting at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// One-line cycle notation, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")))
            .collect()
    }

    pub fn parse_cycles(n: usize, text: &str) -> Result<Perm, PermError> {
        let text = text.trim();
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let body_end = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')'))
                .ok_or_else(|| PermError::Notation(format!("malformed cycle list {text:?}")))?;
            let body = &rest[1..=body_end];
            let cycle = body
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|e| PermError::Notation(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = rest[body_end + 2..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }

    /// Canonical representative of each conjugacy class of `S_n`:
    /// consecutive cycles `(0 1 .. k-1)(k ..)` for each partition of `n`,
    /// partitions in reverse lexicographic order.
    pub fn class_representatives(n: usize) -> Vec<Perm> {
        fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n == 0 {
                out.push(prefix.clone());
                return;
            }
            for k in (1..=n.min(max)).rev() {
                prefix.push(k);
                partitions(n - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut parts = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut parts);
        parts
            .into_iter()
            .rev()
            .map(|part| {
                let mut start = 0u32;
                let cycles: Vec<Vec<u32>> = part
                    .iter()
                    .map(|&k| {
                        let c = (start..start + k as u32).collect();
                        start += k as u32;
                        c
                    })
                    .collect();
                Perm::from_cycles(n, &cycles).expect("disjoint consecutive cycles")
            })
            .collect()
    }

    /// Every element of `S_n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..n as u32).collect();
        loop {
            out.push(Perm { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_has_order_three() {
        let c = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.order(), 3);
        assert!(c.pow(3).is_identity());
        assert_eq!(c.cycle_notation(), "(0 1 2)");
    }

    #[test]
    fn then_applies_left_first() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
    }

    #[test]
    fn notation_round_trip() {
        let p = Perm::from_cycles(6, &[vec![0, 3], vec![1, 5, 2]]).unwrap();
        assert_eq!(Perm::parse_cycles(6, &p.cycle_notation()).unwrap(), p);
        assert!(Perm::parse_cycles(4, "()").unwrap().is_identity());
        assert!(Perm::parse_cycles(3, "(0 1)(1 2)").is_err());
        assert!(Perm::parse_cycles(3, "(0 1").is_err());
    }

    #[test]
    fn class_representatives_cover_cycle_types() {
        let reps = Perm::class_representatives(4);
        assert_eq!(reps.len(), 5);
        assert!(reps[0].is_identity());
        let types: Vec<_> = reps.iter().map(Perm::cycle_type).collect();
        assert_eq!(types, vec![vec![1, 1, 1, 1], vec![2, 1, 1], vec![2, 2], vec![3, 1], vec![4]]);
    }

    #[test]
    fn all_lists_n_factorial() {
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(Perm::all(1).len(), 1);
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }
}
