//! Versioned JSON form of a marked presentation.

use serde::{Deserialize, Serialize};
use sizeable_core::group::{FreeWord, MarkedPresentation, MarkedRelator};
use sizeable_core::relators::BranchedPresentation;

use crate::report::{canonical_compact, TOOL_VERSION};

pub const FORMAT: &str = "sizeable-presentation";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub t: u32,
    pub p: u32,
    #[serde(rename = "W")]
    pub w: Vec<u32>,
    pub tie_break_seed: u64,
    pub tool_version: String,
}

/// Relators are letter sequences: `g + 1` for generator `g`, `-(g + 1)` for
/// its inverse. `power_flags[i]` marks relator `i` as standing for its p-th
/// power; `branch[i]` is its branch level, if any; `labels[i]` names its
/// cover vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub format: String,
    pub version: u32,
    pub generator_count: usize,
    pub relators: Vec<Vec<i32>>,
    pub power_flags: Vec<bool>,
    pub branch: Vec<Option<u32>>,
    pub labels: Vec<String>,
    pub metadata: Metadata,
}

impl PresentationFile {
    pub fn from_branched(bp: &BranchedPresentation) -> PresentationFile {
        let pres = &bp.presentation;
        PresentationFile {
            format: FORMAT.to_string(),
            version: VERSION,
            generator_count: pres.generator_count,
            relators: pres.relators.iter().map(|r| r.word.letters().to_vec()).collect(),
            power_flags: pres.relators.iter().map(|r| r.power).collect(),
            branch: pres.relators.iter().map(|r| r.branch).collect(),
            labels: bp.vertices.iter().map(ToString::to_string).collect(),
            metadata: Metadata {
                t: bp.t,
                p: pres.p,
                w: bp.w.clone(),
                tie_break_seed: bp.seed,
                tool_version: TOOL_VERSION.to_string(),
            },
        }
    }

    /// Canonical compact JSON.
    pub fn to_bytes(&self) -> Vec<u8> {
        canonical_compact(&serde_json::to_value(self).expect("presentation serializes")).into_bytes()
    }

    pub fn parse(bytes: &[u8]) -> Result<PresentationFile, String> {
        let f: PresentationFile = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        if f.format != FORMAT || f.version != VERSION {
            return Err(format!("unsupported format {} v{}", f.format, f.version));
        }
        let n = f.relators.len();
        if f.power_flags.len() != n || f.branch.len() != n || f.labels.len() != n {
            return Err("relators, power_flags, branch and labels differ in length".into());
        }
        for (i, r) in f.relators.iter().enumerate() {
            if let Some(&l) = r.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > f.generator_count) {
                return Err(format!("relator {i}: letter {l} outside ±1..={}", f.generator_count));
            }
        }
        Ok(f)
    }

    pub fn presentation(&self) -> MarkedPresentation {
        MarkedPresentation {
            generator_count: self.generator_count,
            p: self.metadata.p,
            relators: self
                .relators
                .iter()
                .zip(&self.power_flags)
                .zip(&self.branch)
                .map(|((letters, &power), &branch)| MarkedRelator {
                    word: FreeWord::new(letters.iter().copied()),
                    power,
                    branch,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PresentationFile {
        PresentationFile {
            format: FORMAT.into(),
            version: VERSION,
            generator_count: 2,
            relators: vec![vec![1, -2], vec![2, 2]],
            power_flags: vec![false, true],
            branch: vec![None, Some(1)],
            labels: vec!["a".into(), "b".into()],
            metadata: Metadata {
                t: 1,
                p: 3,
                w: vec![1],
                tie_break_seed: 0,
                tool_version: TOOL_VERSION.into(),
            },
        }
    }

    #[test]
    fn round_trip() {
        let f = sample();
        let back = PresentationFile::parse(&f.to_bytes()).unwrap();
        assert_eq!(back, f);
        let pres = back.presentation();
        assert_eq!(pres.flagged_levels(), vec![1]);
        assert_eq!(pres.relators[1].word.letters(), &[2, 2]);
    }

    #[test]
    fn rejects_bad_letters_and_lengths() {
        let mut f = sample();
        f.relators[0].push(3);
        assert!(PresentationFile::parse(&f.to_bytes()).is_err());
        let mut f = sample();
        f.power_flags.pop();
        assert!(PresentationFile::parse(&f.to_bytes()).is_err());
    }
}
