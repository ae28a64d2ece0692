use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use heckelab::cli_reports::{from_json, run_suite, to_json, Coeff, Suite, SuiteConfig};
use heckelab::finite_group::{Family, FiniteGroup, GroupDescriptor};
use heckelab::hecke_affine::classify::{is_supersingular, unit_trivial_characters};
use heckelab::hecke_affine::{eval_expr, AffineSetting};
use heckelab::hecke_core::FiniteHeckeData;
use heckelab::hecke_modules::{characters, HeckeModule, ModuleJson};
use heckelab::{with_scalar, Scalar};

/// Exact verification suites for unipotent and pro-p Iwahori Hecke algebras.
#[derive(Parser)]
#[command(name = "heckelab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite given with `--suite`.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Dump the structure constants of a finite unipotent Hecke algebra.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
    /// Pro-p Iwahori Hecke algebra tools.
    Affine {
        #[command(subcommand)]
        command: AffineCommand,
    },
    /// Supersingularity of every character of the pro-p Iwahori Hecke algebra.
    Classify {
        /// Report only characters with trivial unit-torus action.
        #[arg(long)]
        unit_trivial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Any suite name: coxeter, finite-oracle, frobenius, finite-diagrams,
    /// affine-presentation, affine-functors, supersingular, finite, all.
    #[command(external_subcommand)]
    Suite(Vec<String>),
}

#[derive(Subcommand)]
enum AffineCommand {
    /// Expand a product of basis elements in the τ basis.
    Mul {
        /// Group type such as `gl2` or `sl2`.
        #[arg(long = "type", default_value = "gl2")]
        ty: String,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Supersingularity report for a module stored as JSON.
    Classify {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    /// Group descriptor `fam:n:q`, e.g. `gl:2:3`.
    #[arg(long)]
    group: Option<String>,
    /// Residue characteristic; sets `q` when `--group` is absent.
    #[arg(long)]
    p: Option<u8>,
    /// Coefficient field `fp:P` or `q`; defaults to `fp:p`.
    #[arg(long)]
    coeff: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
#[command(name = "heckelab")]
struct SuiteArgs {
    suite: String,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn group(&self, family: Family, n: usize) -> anyhow::Result<GroupDescriptor> {
        let g = match (&self.group, self.p) {
            (Some(s), p) => {
                let g: GroupDescriptor = s.parse()?;
                if p.is_some_and(|p| p != g.q) {
                    bail!("--p {} disagrees with --group {g}", p.unwrap_or_default());
                }
                g
            }
            (None, p) => GroupDescriptor { family, n, q: p.unwrap_or(2) },
        };
        Ok(g)
    }

    fn coeff(&self, g: &GroupDescriptor) -> anyhow::Result<Coeff> {
        match &self.coeff {
            Some(c) => Ok(c.parse()?),
            None => Ok(format!("fp:{}", g.q).parse()?),
        }
    }
}

fn emit(out: Option<&Path>, doc: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{doc}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{doc}");
            Ok(())
        }
    }
}

fn suite(name: &str, common: &Common) -> anyhow::Result<ExitCode> {
    let suite: Suite = name.parse()?;
    let group = common.group(Family::GL, 2)?;
    let mut config = SuiteConfig::new(suite, group, common.coeff(&group)?);
    config.seed = common.seed;
    config.jobs = common.jobs;
    let report = run_suite(&config)?;
    emit(common.out.as_deref(), &to_json(&report)?)?;
    let s = report.summary;
    eprintln!("{suite} {group} {}: {} passed, {} failed, {} skipped", config.coeff, s.passed, s.failed, s.skipped);
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn oracle(common: &Common) -> anyhow::Result<()> {
    let g = common.group(Family::GL, 2)?;
    let data = FiniteHeckeData::build(FiniteGroup::build(g.family, g.n, g.q)?.into())?;
    emit(common.out.as_deref(), &to_json(&data.dump())?)
}

fn parse_type(ty: &str) -> anyhow::Result<(Family, usize)> {
    let ty = ty.to_ascii_lowercase();
    let (fam, n) = ty.split_at(ty.find(|c: char| c.is_ascii_digit()).unwrap_or(ty.len()));
    let n = n.parse().with_context(|| format!("--type expects e.g. gl2, got {ty:?}"))?;
    Ok((fam.parse()?, n))
}

fn affine_mul(ty: &str, expr: &str, common: &Common) -> anyhow::Result<()> {
    let (family, n) = parse_type(ty)?;
    let g = common.group(family, n)?;
    let setting = AffineSetting::new(g.family, g.n, g.q)?;
    with_scalar!(common.coeff(&g)?, S => {
        let alg = setting.algebra::<S>()?;
        let x = eval_expr(&alg, expr)?;
        let sys = &alg.system;
        let terms: Vec<_> = x
            .terms()
            .iter()
            .map(|(w, c)| {
                let (word, u) = sys.decompose(w);
                let word: Vec<&str> = word.iter().map(|&i| sys.simples[i].name.as_str()).collect();
                json!({ "coeff": c.to_string(), "word": word, "length_zero": u.to_string(), "w": w })
            })
            .collect();
        let doc = json!({ "algebra": sys.id(), "coeff": S::descriptor(), "expr": expr, "expansion": x.to_string(), "terms": terms });
        emit(common.out.as_deref(), &serde_json::to_string_pretty(&doc)?)
    })
}

fn affine_classify(path: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: ModuleJson = from_json(&text)?;
    let parts: Vec<&str> = doc.algebra_id.split(':').collect();
    if parts.len() != 5 || parts[0] != "affine" {
        return Err(heckelab::Error::parse("algebra_id", format!("expected affine:fam:n:q:J{{..}}, got {:?}", doc.algebra_id)).into());
    }
    let g: GroupDescriptor = parts[1..4].join(":").parse()?;
    let setting = AffineSetting::new(g.family, g.n, g.q)?;
    let coeff: Coeff = doc.coeff.parse()?;
    with_scalar!(coeff, S => {
        let m = HeckeModule::from_json(setting.algebra::<S>()?, &doc)?;
        emit(out, &to_json(&is_supersingular(&setting, &m)?)?)
    })
}

fn classify(unit_trivial: bool, common: &Common) -> anyhow::Result<()> {
    let g = common.group(Family::GL, 2)?;
    let setting = AffineSetting::new(g.family, g.n, g.q)?;
    with_scalar!(common.coeff(&g)?, S => {
        let chars = if unit_trivial {
            unit_trivial_characters::<S>(&setting)?.into_iter().map(|(_, m)| m).collect()
        } else {
            characters(&setting.algebra::<S>()?)
        };
        let mut rows = Vec::new();
        for m in &chars {
            rows.push(json!({ "module": m.to_json(), "report": is_supersingular(&setting, m)? }));
        }
        emit(common.out.as_deref(), &serde_json::to_string_pretty(&rows)?)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { suite: name, common } => suite(&name, &common),
        Command::Suite(args) => {
            let a = SuiteArgs::try_parse_from(std::iter::once("heckelab".to_string()).chain(args)).unwrap_or_else(|e| e.exit());
            suite(&a.suite, &a.common)
        }
        Command::Oracle { common } => oracle(&common).map(|_| ExitCode::SUCCESS),
        Command::Affine { command: AffineCommand::Mul { ty, expr, common } } => affine_mul(&ty, &expr, &common).map(|_| ExitCode::SUCCESS),
        Command::Affine { command: AffineCommand::Classify { module, out } } => affine_classify(&module, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Classify { unit_trivial, common } => classify(unit_trivial, &common).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
