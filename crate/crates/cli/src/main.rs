use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sizeable_reports::commands::{self, Output, RelatorCache, Rules};
use sizeable_reports::config::{parse_budget, parse_w, CliError, RunConfig};
use sizeable_reports::golden;
use sizeable_reports::report::{resolve_out, write_atomic, OUT_DIR_VAR};

/// Certification reports for the sizeable graph, its square complex, the
/// Morse cover and the branched presentations built from it.
///
/// Exit status: 0 when every check passes, 1 when a check fails or an
/// output cannot be written, 2 on bad flags or unreadable input.
#[derive(Parser)]
#[command(name = "sizeable", version)]
struct Cli {
    /// Also write the report here. Relative paths, and the per-command report
    /// file, go under $SIZEABLE_OUT_DIR when it is set.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The sizeable graph Γ.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// The square complex X_Γ.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Truncations of the infinite cyclic cover.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Relator words of Z_t.
    Relators {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the relator words as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Branched presentation for (t, p, W).
    Present {
        #[command(flatten)]
        params: PresentParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Abelianization of a presentation file, or the standard table.
    Abelianize {
        #[arg(long, required_unless_present = "table", conflicts_with = "table")]
        pres: Option<PathBuf>,
        /// t ≤ 4, p ∈ {2, 3}, W ∈ {∅, {1}, {1, 2}}.
        #[arg(long)]
        table: bool,
    },
    /// Finite quotients through symmetric groups.
    #[command(subcommand)]
    Quotient(QuotientCmd),
    /// Golden reports.
    #[command(subcommand)]
    Golden(GoldenCmd),
}

#[derive(Subcommand)]
enum GammaCmd {
    Verify {
        #[arg(long, value_enum, default_value_t = Rules::Standard)]
        rules: Rules,
    },
    /// The connected p-fold link cover.
    Cover {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Subcommand)]
enum ComplexCmd {
    Verify,
}

#[derive(Subcommand)]
enum CoverCmd {
    Build {
        #[arg(long)]
        t: u32,
        /// Write the truncation as text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ascending and descending links of every vertex.
    Links {
        #[arg(long)]
        t: u32,
    },
}

#[derive(Args)]
struct PresentParams {
    #[arg(long)]
    t: u32,
    #[arg(long)]
    p: u32,
    /// Branch levels, comma separated; may be empty.
    #[arg(long = "W", value_parser = w_list, default_value = "")]
    w: Levels,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum QuotientCmd {
    /// Order profile of a homomorphism file.
    Eval {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        hom: PathBuf,
    },
    /// Search S_n for a witness with O = W.
    Search {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = budget, default_value = "10^6")]
        budget: u64,
        /// Write the witness, if found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homomorphisms showing branch relators nontrivial, degrees 1..=n.
    Certify {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long, value_parser = w_list)]
        levels: Levels,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = budget, default_value = "10^6")]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum GoldenCmd {
    Check {
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// A comma list kept whole, so clap sees a single value.
#[derive(Clone, Debug)]
struct Levels(Vec<u32>);

fn w_list(s: &str) -> Result<Levels, String> {
    parse_w(s).map(Levels).map_err(|e| e.to_string())
}

fn budget(s: &str) -> Result<u64, String> {
    parse_budget(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let mut cache = RelatorCache::default();
    match cli.command {
        Command::Gamma(GammaCmd::Verify { rules }) => Ok(commands::gamma_verify(rules)),
        Command::Gamma(GammaCmd::Cover { p }) => commands::gamma_cover(p),
        Command::Complex(ComplexCmd::Verify) => commands::complex_verify(),
        Command::Cover(CoverCmd::Build { t, out }) => commands::cover_build(t, out.as_deref()),
        Command::Cover(CoverCmd::Links { t }) => commands::cover_links(t),
        Command::Relators { t, seed, out } => commands::relators(&mut cache, t, seed, out.as_deref()),
        Command::Present { params, out } => {
            let cfg = RunConfig {
                t: Some(params.t),
                p: Some(params.p),
                w: Some(params.w.0),
                tie_break_seed: params.seed,
                ..Default::default()
            };
            commands::present(&mut cache, &cfg, out.as_deref())
        }
        Command::Abelianize { pres: Some(pres), .. } => commands::abelianize(&pres),
        Command::Abelianize { pres: None, .. } => commands::abelianization_table(&mut cache),
        Command::Quotient(QuotientCmd::Eval { pres, hom }) => commands::quotient_eval(&pres, &hom),
        Command::Quotient(QuotientCmd::Search { pres, n, budget, out }) => {
            commands::quotient_search(&pres, n, budget, out.as_deref())
        }
        Command::Quotient(QuotientCmd::Certify { pres, levels, n, budget }) => {
            commands::quotient_certify(&pres, &levels.0, n, budget)
        }
        Command::Golden(GoldenCmd::Check { bless, dir }) => {
            let dir = dir.unwrap_or_else(golden::default_dir);
            golden::golden_check(&dir, bless, &mut cache)
        }
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(o: &Output, report_path: Option<&Path>) -> Result<(), CliError> {
    let text = o.report.to_canonical();
    for a in &o.artifacts {
        write(&resolve_out(&a.path), &a.bytes)?;
    }
    if let Some(dir) = std::env::var_os(OUT_DIR_VAR) {
        write(&Path::new(&dir).join(format!("{}.json", o.name)), text.as_bytes())?;
    }
    if let Some(path) = report_path {
        write(&resolve_out(path), text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

/// Runs one parsed command line and returns its exit status.
fn execute(cli: Cli) -> u8 {
    let report_path = cli.report.clone();
    let result = run(cli).and_then(|o| emit(&o, report_path.as_deref()).map(|()| o.report.passed()));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on bad flags.
    ExitCode::from(execute(Cli::parse()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sizeable_core::group::Hom;
    use sizeable_reports::presentation_file::PresentationFile;
    use sizeable_reports::report::sha256_hex;

    fn status(args: &[&str]) -> u8 {
        match Cli::try_parse_from(std::iter::once("sizeable").chain(args.iter().copied())) {
            Ok(cli) => execute(cli),
            Err(e) => e.exit_code() as u8,
        }
    }

    fn path_str(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn present_t2_p3_w1() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("p.json");
        assert_eq!(status(&["present", "--t", "2", "--p", "3", "--W", "1", "--out", path_str(&out)]), 0);
        let file = PresentationFile::parse(&std::fs::read(&out).unwrap()).unwrap();
        assert_eq!(file.relators.len(), 16);
        assert_eq!(file.power_flags.iter().filter(|&&f| f).count(), 1);
        assert_eq!(file.presentation().flagged_levels(), vec![1]);
        assert_eq!(file.generator_count, 35);
    }

    #[test]
    fn bad_flags_exit_2() {
        assert_eq!(status(&["present", "--t", "2", "--p", "3", "--W", "5"]), 2);
        assert_eq!(status(&["present", "--t", "2", "--p", "4", "--W", "1"]), 2);
        assert_eq!(status(&["present", "--t", "0", "--p", "3"]), 2);
        assert_eq!(status(&["present", "--t", "2", "--p", "3", "--W", "x"]), 2);
        assert_eq!(status(&["gamma", "cover", "--p", "1"]), 2);
        assert_eq!(status(&["cover", "build", "--t", "0"]), 2);
        assert_eq!(status(&["quotient", "search", "--pres", "p.json", "--n", "3", "--budget", "0"]), 2);
        assert_eq!(status(&["frobnicate"]), 2);
    }

    #[test]
    fn unreadable_inputs_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("missing.json");
        assert_eq!(status(&["abelianize", "--pres", path_str(&missing)]), 2);
        let junk = dir.path().join("junk.json");
        std::fs::write(&junk, b"{\"format\": \"other\"}").unwrap();
        assert_eq!(status(&["abelianize", "--pres", path_str(&junk)]), 2);
    }

    #[test]
    fn failing_checks_exit_1() {
        assert_eq!(status(&["gamma", "verify", "--rules", "plus-two"]), 1);
        assert_eq!(status(&["gamma", "verify"]), 0);
    }

    /// The trivial homomorphism satisfies everything and has O = ∅, so it is a
    /// witness exactly when W is empty.
    #[test]
    fn quotient_eval_compares_o_with_w() {
        let dir = tempfile::tempdir().unwrap();
        let hom = dir.path().join("hom.json");
        std::fs::write(&hom, serde_json::to_vec(&Hom::trivial(2, 35).to_file()).unwrap()).unwrap();
        for (w, expect) in [("", 0), ("1", 1)] {
            let pres = dir.path().join(format!("p{w}.json"));
            assert_eq!(status(&["present", "--t", "1", "--p", "2", "--W", w, "--out", path_str(&pres)]), 0);
            assert_eq!(status(&["quotient", "eval", "--pres", path_str(&pres), "--hom", path_str(&hom)]), expect, "W = {w:?}");
        }
        let short = dir.path().join("short.json");
        std::fs::write(&short, serde_json::to_vec(&Hom::trivial(2, 3).to_file()).unwrap()).unwrap();
        let pres = dir.path().join("p.json");
        assert_eq!(status(&["quotient", "eval", "--pres", path_str(&pres), "--hom", path_str(&short)]), 2);
    }

    #[test]
    fn report_and_artifact_files() {
        let dir = tempfile::tempdir().unwrap();
        let report = dir.path().join("r.json");
        let out = dir.path().join("z.txt");
        assert_eq!(status(&["--report", path_str(&report), "cover", "build", "--t", "2", "--out", path_str(&out)]), 0);
        let r: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
        assert_eq!(r["derived"]["truncation_sha256"].as_str().unwrap(), sha256_hex(&std::fs::read(&out).unwrap()));
        let again = commands::cover_build(2, None).unwrap().report.to_canonical();
        assert_eq!(std::fs::read_to_string(&report).unwrap(), again);
    }
}
