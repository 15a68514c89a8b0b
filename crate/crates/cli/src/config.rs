//! Run parameters and their validation.

use serde::Serialize;
use sizeable_core::gamma::is_prime;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliError {
    /// Bad flag value; exit code 2.
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    /// Unreadable or malformed input file; exit code 2.
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("writing {path}: {message}")]
    Output { path: String, message: String },
    /// A construction step refused its input; a defect, not a usage error.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn usage(flag: &str, message: impl Into<String>) -> CliError {
        CliError::Usage {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Input { .. } => 2,
            CliError::Output { .. } | CliError::Compute(_) => 1,
        }
    }
}

/// Branch levels as given on the command line: a comma list of positive
/// integers, possibly empty. Returned sorted and deduplicated.
pub fn parse_w(text: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let level: u32 = part
            .parse()
            .map_err(|_| CliError::usage("--W", format!("`{part}` is not a positive integer")))?;
        if level == 0 {
            return Err(CliError::usage("--W", "branch levels start at 1"));
        }
        out.push(level);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Node budgets: plain integers, powers such as `10^6`, or `1e6`-style forms.
pub fn parse_budget(text: &str) -> Result<u64, CliError> {
    let bad = || CliError::usage("--budget", format!("`{text}` is not a node count"));
    let t = text.trim().replace('_', "");
    let value = if let Some((base, exp)) = t.split_once('^') {
        let base: u64 = base.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        base.checked_pow(exp).ok_or_else(bad)?
    } else if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        10u64.checked_pow(exp).and_then(|p| p.checked_mul(mant)).ok_or_else(bad)?
    } else {
        t.parse().map_err(|_| bad())?
    };
    if value == 0 {
        return Err(CliError::usage("--budget", "must be positive"));
    }
    Ok(value)
}

/// The parameters one run depends on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub t: Option<u32>,
    pub p: Option<u32>,
    #[serde(rename = "W")]
    pub w: Option<Vec<u32>>,
    pub n: Option<usize>,
    pub budget: Option<u64>,
    pub tie_break_seed: u64,
}

impl RunConfig {
    /// Checks `W ⊆ {1..t}`, `p` prime and positive bounds.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.t == Some(0) {
            return Err(CliError::usage("--t", "must be at least 1"));
        }
        if let Some(p) = self.p {
            if !is_prime(p) {
                return Err(CliError::usage("--p", format!("{p} is not prime")));
            }
        }
        if let (Some(w), Some(t)) = (&self.w, self.t) {
            let bad: Vec<String> = w.iter().filter(|&&l| l > t).map(u32::to_string).collect();
            if !bad.is_empty() {
                return Err(CliError::usage(
                    "--W",
                    format!("levels {} not in 1..={t}", bad.join(",")),
                ));
            }
        }
        if self.n == Some(0) {
            return Err(CliError::usage("--n", "degree must be at least 1"));
        }
        if self.budget == Some(0) {
            return Err(CliError::usage("--budget", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_lists() {
        assert_eq!(parse_w("").unwrap(), Vec::<u32>::new());
        assert_eq!(parse_w("3,1, 3").unwrap(), vec![1, 3]);
        assert!(parse_w("0").is_err());
        assert!(parse_w("a").is_err());
    }

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("10^6").unwrap(), 1_000_000);
        assert_eq!(parse_budget("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_budget("25E3").unwrap(), 25_000);
        assert_eq!(parse_budget("1_000").unwrap(), 1000);
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("10^40").is_err());
        assert!(parse_budget("lots").is_err());
    }

    #[test]
    fn validation() {
        let cfg = RunConfig {
            t: Some(2),
            p: Some(3),
            w: Some(vec![5]),
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().starts_with("--W"));
        let ok = RunConfig {
            w: Some(vec![1, 2]),
            ..cfg.clone()
        };
        assert!(ok.validate().is_ok());
        assert!(RunConfig { p: Some(4), ..ok }.validate().is_err());
    }
}
