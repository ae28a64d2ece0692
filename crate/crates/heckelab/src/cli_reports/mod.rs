//! Suite configuration, machine-readable reports and JSON round trips.

pub mod suites;

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finite_group::GroupDescriptor;

pub use suites::run_suite;

/// Coefficient field descriptor: `fp:P` or `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    Fp(u64),
    Q,
}

pub const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

impl Coeff {
    pub fn characteristic(self) -> u64 {
        match self {
            Coeff::Fp(p) => p,
            Coeff::Q => 0,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Fp(p) => write!(f, "fp:{p}"),
            Coeff::Q => f.write_str("q"),
        }
    }
}

impl FromStr for Coeff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" {
            return Ok(Coeff::Q);
        }
        let p: u64 = s
            .strip_prefix("fp:")
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::parse("coeff", format!("expected fp:P or q, got {s:?}")))?;
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::parse("coeff", format!("prime {p} not among {SUPPORTED_PRIMES:?}")));
        }
        Ok(Coeff::Fp(p))
    }
}

/// Runs `$body` with `$S` bound to the scalar type named by a [`Coeff`].
#[macro_export]
macro_rules! with_scalar {
    ($coeff:expr, $S:ident => $body:expr) => {
        match $coeff {
            $crate::cli_reports::Coeff::Q => {
                type $S = $crate::scalar::Q;
                $body
            }
            $crate::cli_reports::Coeff::Fp(2) => {
                type $S = $crate::scalar::F2;
                $body
            }
            $crate::cli_reports::Coeff::Fp(3) => {
                type $S = $crate::scalar::F3;
                $body
            }
            $crate::cli_reports::Coeff::Fp(5) => {
                type $S = $crate::scalar::F5;
                $body
            }
            $crate::cli_reports::Coeff::Fp(7) => {
                type $S = $crate::scalar::F7;
                $body
            }
            $crate::cli_reports::Coeff::Fp(11) => {
                type $S = $crate::scalar::F11;
                $body
            }
            $crate::cli_reports::Coeff::Fp(13) => {
                type $S = $crate::scalar::F13;
                $body
            }
            $crate::cli_reports::Coeff::Fp(p) => Err($crate::error::Error::Config(format!("unsupported prime {p}")).into()),
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Coxeter,
    FiniteOracle,
    Frobenius,
    FiniteDiagrams,
    AffinePresentation,
    AffineFunctors,
    Supersingular,
    /// `finite-oracle`, `frobenius` and `finite-diagrams`.
    Finite,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Coxeter,
        Suite::FiniteOracle,
        Suite::Frobenius,
        Suite::FiniteDiagrams,
        Suite::AffinePresentation,
        Suite::AffineFunctors,
        Suite::Supersingular,
        Suite::Finite,
        Suite::All,
    ];
    pub const NAMES: [&'static str; 9] =
        ["coxeter", "finite-oracle", "frobenius", "finite-diagrams", "affine-presentation", "affine-functors", "supersingular", "finite", "all"];

    /// The concrete suites this name runs, in order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::Finite => vec![Suite::FiniteOracle, Suite::Frobenius, Suite::FiniteDiagrams],
            Suite::All => Self::ALL[..7].to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = Self::ALL.iter().position(|s| s == self).expect("listed");
        f.write_str(Self::NAMES[i])
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| Error::parse("suite", format!("unknown suite {s:?}; expected one of {}", Self::NAMES.join(", "))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub group: GroupDescriptor,
    pub coeff: Coeff,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
}

impl SuiteConfig {
    pub fn new(suite: Suite, group: GroupDescriptor, coeff: Coeff) -> Self {
        SuiteConfig { suite, group, coeff, seed: 0, jobs: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not applicable to this group or coefficient field.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub params: Value,
    pub verdict: Verdict,
    pub measured: Value,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn tally(records: &[CheckRecord]) -> Self {
        let count = |v| records.iter().filter(|r| r.verdict == v).count();
        Summary { total: records.len(), passed: count(Verdict::Pass), failed: count(Verdict::Fail), skipped: count(Verdict::Skip) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, records: Vec<CheckRecord>) -> Self {
        let summary = Summary::tally(&records);
        Report { config, records, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Process exit status: 0 iff no check failed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.summary != Summary::tally(&self.records) {
            return Err(Error::parse("summary", "counts do not match the records"));
        }
        Ok(())
    }

    /// The report with wall times zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.records.iter_mut().for_each(|x| x.wall_ms = 0.0);
        r
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

/// Deserializes `doc`, naming the offending field on failure.
pub fn from_json<T: DeserializeOwned>(doc: &str) -> Result<T> {
    serde_json::from_str(doc).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("field"))
            .map_or_else(|| format!("line {} column {}", e.line(), e.column()), str::to_string);
        Error::parse(field, msg)
    })
}

pub fn report_from_json(doc: &str) -> Result<Report> {
    let r: Report = from_json(doc)?;
    r.validate()?;
    Ok(r)
}
