//! The `modcat` command line.
//!
//! Exit codes: 0 ok, 1 failed check or runtime error, 2 usage, 3 capacity,
//! 4 no nontrivial Tannakian subgroup.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alcove::DEFAULT_MAX_ALCOVE;
use crate::bundle::{write_atomic, Cache, DataBundle, LocalCensus};
use crate::currents::{find_invertibles, maximal_tannakian, tannakian_subgroups, TannakianSubgroup};
use crate::error::{Error, Result};
use crate::localmods::{build_local_category, LocalCategoryData};
use crate::modular::{Caps, ModularData};
use crate::rootsys::{RootSystem, Series, Weight};
use crate::suites::{self, CheckResult, RangeFilter};
use crate::wittlab::WittFingerprint;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_NO_SUBGROUP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "modcat", version, about = "Modular data of C(g,k) and local-module censuses")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cache directory for data bundles (overrides MODCAT_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest alcove to build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ALCOVE)]
    max_alcove: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Thm1,
    Witt,
    All,
}

#[derive(Args, Debug)]
struct TypeArgs {
    /// Series letter A–G.
    series: Series,
    rank: usize,
    /// Level.
    k: u32,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simples, dimensions, twists, S-matrix and fusion rules.
    Data {
        #[command(flatten)]
        ty: TypeArgs,
        /// Include a local census for every nontrivial Tannakian subgroup.
        #[arg(long)]
        local: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Fusion rules: one product with --a/--b, otherwise all of them.
    Fusion {
        #[command(flatten)]
        ty: TypeArgs,
        /// Dynkin labels, comma separated.
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Census of the local modules over a simple-current algebra.
    Local {
        #[command(flatten)]
        ty: TypeArgs,
        /// `auto` (largest Tannakian subgroup) or `;`-separated labels of its members.
        #[arg(long, default_value = "auto")]
        subgroup: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run a battery of checks; exits 1 if any fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// `default`, or e.g. `E6:k<6,A,lemma33`.
        #[arg(long, default_value = "default")]
        range: String,
        #[command(flatten)]
        output: Output,
    },
    /// Witt-class fingerprint of C(g,k) or of its local category.
    Fingerprint {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        local: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::InvalidType { .. }
        | Error::LengthMismatch { .. }
        | Error::NotDominant(_)
        | Error::NotInAlcove { .. }
        | Error::InvalidParameter(_)
        | Error::LevelTooSmall { .. } => EXIT_USAGE,
        _ => EXIT_CHECK,
    }
}

fn caps(cli: &Cli) -> Caps {
    Caps {
        max_alcove: cli.max_alcove,
        ..Caps::default()
    }
}

fn modular(cli: &Cli, ty: &TypeArgs) -> Result<Arc<ModularData>> {
    let rs = RootSystem::new(ty.series, ty.rank)?;
    Ok(Arc::new(ModularData::build(Arc::new(rs), ty.k, caps(cli))?))
}

fn parse_weight(s: &str, rank: usize) -> Result<Weight> {
    let labels = s
        .split(',')
        .map(|x| x.trim().parse::<i32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad weight {s:?}")))?;
    if labels.len() != rank {
        return Err(Error::LengthMismatch {
            expected: rank,
            got: labels.len(),
        });
    }
    Ok(Weight::new(&labels))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Data { ty, local, output } => cmd_data(cli, ty, *local, output),
        Command::Fusion { ty, a, b, output } => cmd_fusion(cli, ty, a.as_deref().zip(b.as_deref()), output),
        Command::Local { ty, subgroup, output } => cmd_local(cli, ty, subgroup, output),
        Command::Verify { suite, range, output } => cmd_verify(*suite, range, output),
        Command::Fingerprint { ty, local, output } => cmd_fingerprint(cli, ty, *local, output),
    }
}

/// Bundle for `ty`, from the cache when one is configured.
pub fn load_or_build(cache_dir: Option<&Path>, caps: Caps, series: Series, rank: usize, k: u32, with_local: bool) -> Result<DataBundle> {
    let cache = Cache::resolve(cache_dir);
    let key = Cache::key(series, rank, k, with_local);
    if let Some(c) = &cache {
        if let Some(b) = c.load(&key)? {
            return Ok(b);
        }
    }
    let md = Arc::new(ModularData::build(Arc::new(RootSystem::new(series, rank)?), k, caps)?);
    let b = DataBundle::from_modular(md, with_local)?;
    if let Some(c) = &cache {
        c.store(&key, &b)?;
    }
    Ok(b)
}

fn twist_str(t: (i64, i64)) -> String {
    if t.1 == 1 {
        format!("{}", t.0)
    } else {
        format!("{}/{}", t.0, t.1)
    }
}

fn cmd_data(cli: &Cli, ty: &TypeArgs, with_local: bool, output: &Output) -> Result<i32> {
    let b = load_or_build(cli.cache_dir.as_deref(), caps(cli), ty.series, ty.rank, ty.k, with_local)?;
    let text = match output.format {
        Format::Json => b.to_json()?,
        Format::Table => {
            let mut s = String::new();
            let gd: f64 = b.dims.iter().map(|d| d.0 * d.0).sum();
            let _ = writeln!(s, "# {}{}, k={}: rank {}, altitude {}, global dim {:.6}", ty.series, ty.rank, ty.k, b.rank(), b.altitude, gd);
            let _ = writeln!(s, "# twist t means θ = exp(πi·t); * marks invertible objects");
            let _ = writeln!(s, "{:>5}  {:<16} {:>14}  {:>10}  {:>5}", "index", "weight", "dim", "twist", "dual");
            for i in 0..b.rank() {
                let w = Weight::new(&b.labels[i]);
                let mark = if (b.dims[i].0 - 1.0).abs() < 1e-9 { "*" } else { "" };
                let row = format!(
                    "{:>5}  {:<16} {:>14.9}  {:>10}  {:>5} {mark}",
                    i,
                    w.to_string(),
                    b.dims[i].0,
                    twist_str(b.twists[i]),
                    b.dual[i]
                );
                let _ = writeln!(s, "{}", row.trim_end());
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ProductReport {
    a: Vec<i32>,
    b: Vec<i32>,
    product: Vec<(Vec<i32>, u32)>,
}

#[derive(Serialize)]
struct FusionReport {
    labels: Vec<Vec<i32>>,
    fusion: Vec<(usize, usize, usize, u32)>,
}

fn cmd_fusion(cli: &Cli, ty: &TypeArgs, pair: Option<(&str, &str)>, output: &Output) -> Result<i32> {
    let md = modular(cli, ty)?;
    let labels = |i: usize| md.weight(i).labels().to_vec();
    let text = match pair {
        Some((a, b)) => {
            let ia = md.index_of(&parse_weight(a, ty.rank)?)?;
            let ib = md.index_of(&parse_weight(b, ty.rank)?)?;
            let product: Vec<(Vec<i32>, u32)> = md.product(ia, ib)?.into_iter().map(|(l, n)| (labels(l), n)).collect();
            match output.format {
                Format::Json => json(&ProductReport {
                    a: labels(ia),
                    b: labels(ib),
                    product,
                })?,
                Format::Table => {
                    let terms: Vec<String> = product
                        .iter()
                        .map(|(w, n)| {
                            let w = Weight::new(w);
                            if *n == 1 {
                                w.to_string()
                            } else {
                                format!("{n}·{w}")
                            }
                        })
                        .collect();
                    format!("{} ⊗ {} = {}\n", md.weight(ia), md.weight(ib), terms.join(" + "))
                }
            }
        }
        None => {
            let entries = md.fusion()?.entries();
            match output.format {
                Format::Json => json(&FusionReport {
                    labels: (0..md.rank()).map(labels).collect(),
                    fusion: entries,
                })?,
                Format::Table => {
                    let mut s = String::new();
                    for (i, j, l, n) in entries {
                        let _ = writeln!(s, "{} ⊗ {} ∋ {} ×{n}", md.weight(i), md.weight(j), md.weight(l));
                    }
                    s
                }
            }
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

fn pick_subgroup(md: &ModularData, spec: &str, group: &crate::currents::CurrentGroup) -> Result<Option<TannakianSubgroup>> {
    if spec == "auto" {
        return Ok(maximal_tannakian(group));
    }
    let mut want = spec
        .split(';')
        .map(|w| md.index_of(&parse_weight(w, md.rs.rank)?))
        .collect::<Result<Vec<_>>>()?;
    want.push(0);
    want.sort_unstable();
    want.dedup();
    Ok(tannakian_subgroups(group).into_iter().find(|t| {
        let mut e = t.elements.clone();
        e.sort_unstable();
        e == want && !t.is_trivial()
    }))
}

fn local_census(cli: &Cli, ty: &TypeArgs, spec: &str) -> Result<Option<LocalCategoryData>> {
    let md = modular(cli, ty)?;
    let group = find_invertibles(&md)?;
    match pick_subgroup(&md, spec, &group)? {
        Some(h) => Ok(Some(build_local_category(md, &group, &h)?)),
        None => Ok(None),
    }
}

fn cmd_local(cli: &Cli, ty: &TypeArgs, spec: &str, output: &Output) -> Result<i32> {
    let Some(lc) = local_census(cli, ty, spec)? else {
        eprintln!("error: {}{}, k={} has no matching nontrivial Tannakian subgroup", ty.series, ty.rank, ty.k);
        return Ok(EXIT_NO_SUBGROUP);
    };
    let census = LocalCensus::from_local(&lc);
    let text = match output.format {
        Format::Json => json(&census)?,
        Format::Table => {
            let md = &lc.base;
            let mut s = String::new();
            let h: Vec<String> = lc.subgroup.elements.iter().map(|&e| md.weight(e).to_string()).collect();
            let _ = writeln!(s, "# {} with H = {{{}}}", md.label(), h.join(", "));
            let _ = writeln!(s, "rank {}", lc.rank());
            let _ = writeln!(s, "global dim {:.9} (expected {:.9})", lc.global_dim_r, lc.expected_global_dim());
            let structure = match &lc.pointed.structure {
                Some(v) if v.is_empty() => "trivial".to_string(),
                Some(v) => v.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join(" × "),
                None => "undetermined".into(),
            };
            let _ = writeln!(s, "pointed part rank {} ({structure})", lc.pointed.rank());
            let _ = writeln!(
                s,
                "adjoint rank {}",
                lc.adjoint_rank.map_or("undetermined".into(), |r| r.to_string())
            );
            let _ = writeln!(s, "{:>5}  {:<16} {:>5}  {:>14}  {:>10}", "index", "weight", "split", "dim_R", "twist");
            for (i, x) in lc.simples.iter().enumerate() {
                let o = &lc.orbits[x.orbit];
                let split = if o.is_free() { "-".to_string() } else { format!("{}/{}", x.split_index + 1, o.stabilizer_order) };
                let _ = writeln!(
                    s,
                    "{:>5}  {:<16} {:>5}  {:>14.9}  {:>10}",
                    i,
                    md.weight(o.rep()).to_string(),
                    split,
                    x.dim_r,
                    twist_str((x.twist.numer(), x.twist.denom()))
                );
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    checks: &'a [CheckResult],
    failed: usize,
}

fn cmd_verify(suite: Suite, range: &str, output: &Output) -> Result<i32> {
    let filter = RangeFilter::parse(range)?;
    let mut checks = Vec::new();
    if matches!(suite, Suite::Thm1 | Suite::All) {
        checks.extend(suites::thm1(&filter)?);
    }
    if matches!(suite, Suite::Witt | Suite::All) {
        checks.extend(suites::witt()?);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let text = match output.format {
        Format::Json => json(&VerifyReport { checks: &checks, failed })?,
        Format::Table => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} [{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.group, c.name, c.detail);
            }
            let _ = writeln!(s, "{} checks, {failed} failed", checks.len());
            s
        }
    };
    emit(output, &text)?;
    if failed > 0 {
        for c in checks.iter().filter(|c| !c.pass) {
            eprintln!("failed: [{}] {} ({})", c.group, c.name, c.detail);
        }
        return Ok(EXIT_CHECK);
    }
    Ok(EXIT_OK)
}

fn cmd_fingerprint(cli: &Cli, ty: &TypeArgs, local: bool, output: &Output) -> Result<i32> {
    let fp = if local {
        let Some(lc) = local_census(cli, ty, "auto")? else {
            eprintln!("error: {}{}, k={} has no nontrivial Tannakian subgroup", ty.series, ty.rank, ty.k);
            return Ok(EXIT_NO_SUBGROUP);
        };
        WittFingerprint::from_local(&lc, format!("{} local", lc.base.label()))?
    } else {
        let md = modular(cli, ty)?;
        WittFingerprint::from_modular(&md, md.label())?
    };
    let text = match output.format {
        Format::Json => json(&fp)?,
        Format::Table => {
            let arg = fp.central_charge.arg() / std::f64::consts::PI;
            format!(
                "{}\nrank {}\ncentral charge exp({arg:.12}·πi)\nself-dual {}\npointed rank {}\nmultiplicity free {}\n",
                fp.label,
                fp.rank,
                fp.self_dual_count,
                fp.pointed_rank,
                fp.multiplicity_free.map_or("undetermined".into(), |b| b.to_string())
            )
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}
