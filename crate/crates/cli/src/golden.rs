//! Golden reports: the canonical report of each case, one file per case.
//!
//! Reports depend only on their inputs, so a mismatch is a behaviour change.
//! `--bless` rewrites the files after an intended one.

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::commands::{self, Output, RelatorCache, Rules};
use crate::config::{CliError, RunConfig};
use crate::report::{sha256_hex, write_atomic, CertReport};

type Run = Box<dyn Fn(&mut RelatorCache) -> Result<Output, CliError>>;

pub struct Case {
    pub file: String,
    run: Run,
}

fn case(file: impl Into<String>, run: impl Fn(&mut RelatorCache) -> Result<Output, CliError> + 'static) -> Case {
    Case {
        file: format!("{}.json", file.into()),
        run: Box::new(run),
    }
}

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

fn branched(t: u32, p: u32, w: &[u32]) -> RunConfig {
    RunConfig {
        t: Some(t),
        p: Some(p),
        w: Some(w.to_vec()),
        ..Default::default()
    }
}

pub fn cases() -> Vec<Case> {
    let mut out = vec![
        case("gamma-verify", |_| Ok(commands::gamma_verify(Rules::Standard))),
        case("gamma-verify-plus-two", |_| Ok(commands::gamma_verify(Rules::PlusTwo))),
    ];
    for p in [2, 3, 5] {
        out.push(case(format!("gamma-cover-p{p}"), move |_| commands::gamma_cover(p)));
    }
    out.push(case("complex-verify", |_| commands::complex_verify()));
    for t in 1..=4 {
        out.push(case(format!("cover-build-t{t}"), move |_| commands::cover_build(t, None)));
    }
    out.push(case("cover-links-t4", |_| commands::cover_links(4)));
    for t in 1..=4 {
        out.push(case(format!("relators-t{t}"), move |c| commands::relators(c, t, 0, None)));
    }
    out.push(case("present-t3-p2-w1_3", |c| commands::present(c, &branched(3, 2, &[1, 3]), None)));
    out.push(case("abelianize-t3-p2-w1_3", |c| {
        let file = commands::presentation_file(c, &branched(3, 2, &[1, 3]))?;
        Ok(commands::abelianize_file(&file, &sha256_hex(&file.to_bytes())))
    }));
    out.push(case("abelianization-table", commands::abelianization_table));
    out.push(case("quotient-search-t3-p2-w1_3-n3", |c| {
        let file = commands::presentation_file(c, &branched(3, 2, &[1, 3]))?;
        Ok(commands::quotient_search_file(&file, &sha256_hex(&file.to_bytes()), 3, 1_000_000)?.0)
    }));
    out.push(case("quotient-certify-t1-p2-w1-n4", |c| {
        let file = commands::presentation_file(c, &branched(1, 2, &[1]))?;
        commands::quotient_certify_file(&file, &sha256_hex(&file.to_bytes()), &[1], 4, 1_000_000)
    }));
    out
}

/// Line number (1-based) and contents of the first differing line.
fn first_difference(expected: &str, actual: &str) -> Option<(usize, String, String)> {
    let (mut e, mut a) = (expected.lines(), actual.lines());
    for line in 1.. {
        match (e.next(), a.next()) {
            (None, None) => return None,
            (x, y) if x == y => continue,
            (x, y) => {
                let show = |s: Option<&str>| s.unwrap_or("<end of file>").to_string();
                return Some((line, show(x), show(y)));
            }
        }
    }
    unreachable!()
}

pub fn golden_check(dir: &Path, bless: bool, cache: &mut RelatorCache) -> Result<Output, CliError> {
    let all = cases();
    let names: Vec<&str> = all.iter().map(|c| c.file.as_str()).collect();
    let mut r = CertReport::new("golden check", &json!({"cases": names}));
    for c in &all {
        let actual = (c.run)(cache)?.report.to_canonical();
        let path = dir.join(&c.file);
        if bless {
            write_atomic(&path, actual.as_bytes()).map_err(|e| CliError::Output {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            r.check(&c.file, true);
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) => {
                let diff = first_difference(&expected, &actual);
                r.check_with(&c.file, diff.is_none(), || {
                    let (line, expected, actual) = diff.clone().unwrap();
                    json!({"line": line, "expected": expected, "actual": actual})
                });
            }
            Err(e) => {
                r.check_with(&c.file, false, || json!(format!("missing golden: {e}")));
            }
        }
    }
    r.derive("cases", all.len());
    Ok(Output {
        name: "golden-check".into(),
        report: r,
        artifacts: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_difference_reports_line() {
        assert_eq!(first_difference("a\nb\n", "a\nb\n"), None);
        assert_eq!(first_difference("a\nb\n", "a\nc\n"), Some((2, "b".into(), "c".into())));
        assert_eq!(first_difference("a\n", "a\nb\n"), Some((2, "<end of file>".into(), "b".into())));
    }

    /// The stored goldens match, and a changed report is caught at its first
    /// differing line.
    #[test]
    fn goldens_match_and_changes_are_caught() {
        let mut cache = RelatorCache::default();
        let pristine = golden_check(&default_dir(), false, &mut cache).unwrap();
        assert!(pristine.report.passed(), "{}", pristine.report.to_canonical());

        let dir = tempfile::tempdir().unwrap();
        for c in cases() {
            std::fs::copy(default_dir().join(&c.file), dir.path().join(&c.file)).unwrap();
        }
        let mutated = commands::gamma_verify(Rules::PlusTwo).report.to_canonical();
        std::fs::write(dir.path().join("gamma-verify.json"), mutated).unwrap();
        let o = golden_check(dir.path(), false, &mut cache).unwrap();
        let failed: Vec<_> = o.report.checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "gamma-verify.json");
        assert!(failed[0].witness.as_ref().unwrap()["line"].as_u64().unwrap() > 1);
    }

    #[test]
    fn case_files_are_distinct() {
        let mut files: Vec<String> = cases().into_iter().map(|c| c.file).collect();
        let n = files.len();
        files.sort();
        files.dedup();
        assert_eq!(files.len(), n);
    }
}
