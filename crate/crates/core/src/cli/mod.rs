//! Command-line front end.
//!
//! Every subcommand writes to a caller-supplied writer and maps its outcome
//! to an exit code: 0 success, 1 invalid input or failed check, 2 a
//! regenerated table that deviates from its reference values.

mod tables;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::decomposition::{ChainDecomposition, ChainParameters};
use crate::error::{Error, Result};
use crate::kernel::{known_kernel, Kernel, RecursiveEncoder};
use crate::lpbound::{build_refined_constraints, lp_feasible, optimal_lp_sequence_with, simple_upper_bound, SearchOptions};
use crate::polarize::{
    bec_design, frozen_worst, genie_error_rates, simulate_sc, tree_process, DiscreteChannel, SubchannelStats,
    DEFAULT_ALPHABET_CAP, EXACT_MAX_LENGTH,
};

pub use tables::{TABLE_I, TABLE_II};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "polar-kernels", version, about = "Polar-code kernels from code decompositions")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partial distances and exponent of a kernel.
    Exponent {
        #[arg(long)]
        kernel: KernelSelector,
    },
    /// LP upper bound on the exponent at dimension ℓ.
    Bound(BoundArgs),
    /// Seeded simulations.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Regenerates the bound and kernel tables as CSV files.
    Tables(TablesArgs),
    /// Writes a kernel in its text form.
    DumpKernel(DumpArgs),
    /// Validates a chain decomposition file and reports its kernel.
    CheckDecomposition {
        path: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Kernel dimension, 2..=16.
    #[arg(long = "l")]
    pub length: usize,
    /// Skip seeding the search with the shipped chain sequences.
    #[arg(long)]
    pub no_seed: bool,
    /// Include the feasibility witness of the optimum and the Farkas
    /// vector of every pruned branch.
    #[arg(long)]
    pub certificates: bool,
}

#[derive(Subcommand, Debug)]
pub enum Simulate {
    /// Z_n along random branch sequences.
    Tree(TreeArgs),
    /// Block errors of SC decoding of g^{(m)}.
    Sc(ScArgs),
    /// I and Z of the ℓ synthesized channels of one kernel.
    Subchannel(SubchannelArgs),
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    #[arg(long, default_value = "arikan")]
    pub kernel: KernelSelector,
    #[arg(long, default_value = "bec:0.5")]
    pub channel: ChannelSpec,
    #[arg(long)]
    pub depth: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent in the thresholds 2^{−N^β} and 1 − 2^{−N^β}.
    #[arg(long, default_value_t = 0.4)]
    pub beta: f64,
    /// Cap on the merged output alphabet per synthesized channel.
    #[arg(long, default_value_t = DEFAULT_ALPHABET_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Design {
    /// `bec` for linear kernels of dimension ≤ 8 on a BEC, otherwise `genie`.
    Auto,
    /// Bhattacharyya recursion on the BEC.
    Bec,
    /// Error rates of genie-aided SC, estimated by simulation.
    Genie,
}

#[derive(Args, Debug)]
pub struct ScArgs {
    #[arg(long, default_value = "arikan")]
    pub kernel: KernelSelector,
    /// Recursion depth; the block length is ℓ^m.
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub channel: ChannelSpec,
    #[arg(long)]
    pub rate: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Design::Auto)]
    pub design: Design,
    /// Trials of the genie-aided design run.
    #[arg(long, default_value_t = 2000)]
    pub design_trials: usize,
    /// Seed of the design run; defaults to seed + 1.
    #[arg(long)]
    pub design_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Enumeration up to dimension 8, Monte-Carlo beyond.
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Args, Debug)]
pub struct SubchannelArgs {
    #[arg(long)]
    pub kernel: KernelSelector,
    #[arg(long)]
    pub channel: ChannelSpec,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    /// Directory receiving table1.csv and table2.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Regenerate only this table.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub only: Option<u8>,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[arg(long)]
    pub kernel: KernelSelector,
    /// Write the full table as hexadecimal pairs even when a coset-sum form exists.
    #[arg(long)]
    pub hex: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `1`..`4`, `arikan`, `example` (the ℓ = 4 kernel with rows 1000, 1100,
/// 1010, 1111) or `file:PATH` holding a kernel or a chain decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSelector {
    Known(usize),
    Arikan,
    Example,
    File(PathBuf),
}

impl FromStr for KernelSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(KernelSelector::File(PathBuf::from(path)));
        }
        match s.trim_start_matches('#') {
            "arikan" => Ok(KernelSelector::Arikan),
            "example" => Ok(KernelSelector::Example),
            n => match n.parse::<usize>() {
                Ok(i @ 1..=4) => Ok(KernelSelector::Known(i)),
                _ => Err(format!("unknown kernel {s:?}; expected 1..4, arikan, example or file:PATH")),
            },
        }
    }
}

impl std::fmt::Display for KernelSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelSelector::Known(i) => write!(f, "{i}"),
            KernelSelector::Arikan => f.write_str("arikan"),
            KernelSelector::Example => f.write_str("example"),
            KernelSelector::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A kernel together with the chain it came from, when known.
pub struct LoadedKernel {
    pub kernel: Kernel,
    pub chain: Option<ChainParameters>,
}

impl KernelSelector {
    pub fn load(&self) -> Result<LoadedKernel> {
        let params = |l, levels: &[(usize, u32)]| ChainParameters::new(l, levels.to_vec()).ok();
        Ok(match self {
            KernelSelector::Known(i) => LoadedKernel {
                kernel: known_kernel(*i)?,
                chain: crate::decomposition::known_chains().get(i - 1).cloned(),
            },
            KernelSelector::Arikan => LoadedKernel {
                kernel: Kernel::arikan(),
                chain: params(2, &[(2, 1), (1, 2)]),
            },
            KernelSelector::Example => LoadedKernel {
                kernel: Kernel::parity_repetition_4(),
                chain: params(4, &[(4, 1), (3, 2), (1, 4)]),
            },
            KernelSelector::File(path) => load_kernel_file(path)?,
        })
    }
}

fn load_kernel_file(path: &Path) -> Result<LoadedKernel> {
    let text = std::fs::read_to_string(path)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if header.starts_with("decomposition") {
        let chain = ChainDecomposition::from_text(&text, path.parent())?;
        Ok(LoadedKernel {
            kernel: Kernel::from_decomposition(&chain.binary_refinement()?),
            chain: Some(chain.parameters()),
        })
    } else {
        Ok(LoadedKernel {
            kernel: Kernel::from_text(&text)?,
            chain: None,
        })
    }
}

/// `bec:ε`, `bsc:p` or `noiseless`.
#[derive(Clone, Debug)]
pub struct ChannelSpec {
    pub channel: DiscreteChannel,
    /// ε or p; 0 for the noiseless channel.
    pub parameter: f64,
}

impl FromStr for ChannelSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let channel: DiscreteChannel = s.parse().map_err(|e: Error| e.to_string())?;
        let parameter = s.split_once(':').map_or(Ok(0.0), |(_, v)| v.parse::<f64>()).map_err(|e| e.to_string())?;
        Ok(ChannelSpec { channel, parameter })
    }
}

/// Runs the command line in `args` (program name first). Help and version
/// requests print to `out`; usage errors go to `err` and exit with 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let helpful = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if helpful { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if helpful { EXIT_OK } else { EXIT_INVALID };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let f = cli.format;
    match &cli.command {
        Command::Exponent { kernel } => cmd_exponent(kernel, f, out),
        Command::Bound(a) => cmd_bound(a, f, out),
        Command::Simulate(Simulate::Tree(a)) => cmd_tree(a, f, out),
        Command::Simulate(Simulate::Sc(a)) => cmd_sc(a, f, out),
        Command::Simulate(Simulate::Subchannel(a)) => cmd_subchannel(a, f, out),
        Command::Tables(a) => tables::cmd_tables(a, f, out),
        Command::DumpKernel(a) => cmd_dump(a, out),
        Command::CheckDecomposition { path } => cmd_check(path, f, out),
    }
}

/// Exponents are reported to six decimals in every format.
pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn joined<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `# polar-kernels <command> key=value ...`, the first line of every
/// text and CSV report of a seeded run.
fn header_line(command: &str, config: &Map<String, Value>) -> String {
    let mut line = format!("# polar-kernels {command}");
    for (k, v) in config {
        let _ = write!(line, " {k}={}", render_value(v));
    }
    line
}

fn cmd_exponent(sel: &KernelSelector, f: Format, out: &mut dyn Write) -> Result<u8> {
    let LoadedKernel { kernel, chain } = sel.load()?;
    let d = kernel.partial_distances();
    let e = d.exponent();
    let bound = chain.as_ref().map(|c| (c.to_string(), c.lower_bound_sequence(), c.exponent_lower_bound()));
    match f {
        Format::Text => {
            writeln!(out, "kernel: {sel} (length {})", kernel.length())?;
            writeln!(out, "partial distances: {}", joined(d.values(), ","))?;
            writeln!(out, "exponent: {e:.6}")?;
            match &bound {
                Some((c, seq, lb)) => {
                    writeln!(out, "chain: {c}")?;
                    writeln!(out, "chain lower bound: {}", joined(seq, ","))?;
                    writeln!(out, "chain exponent bound: {lb:.6}")?;
                }
                None => writeln!(out, "chain: none")?,
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "kernel": sel.to_string(),
                "length": kernel.length(),
                "partial_distances": d.values(),
                "exponent": round6(e),
                "chain": bound.as_ref().map(|b| b.0.clone()),
                "chain_lower_bound": bound.as_ref().map(|b| b.1.clone()),
                "chain_exponent_bound": bound.as_ref().map(|b| round6(b.2)),
            }),
        )?,
        Format::Csv => {
            writeln!(out, "kernel,length,partial_distances,exponent,chain,chain_lower_bound,chain_exponent_bound")?;
            let (c, seq, lb) = match &bound {
                Some((c, seq, lb)) => (format!("\"{c}\""), joined(seq, " "), format!("{lb:.6}")),
                None => Default::default(),
            };
            writeln!(
                out,
                "{sel},{},{},{e:.6},{c},{seq},{lb}",
                kernel.length(),
                joined(d.values(), " ")
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bound(a: &BoundArgs, f: Format, out: &mut dyn Write) -> Result<u8> {
    let opts = SearchOptions {
        incumbent: None,
        seed_from_known_chains: !a.no_seed,
        record_pruned: a.certificates,
    };
    let r = optimal_lp_sequence_with(a.length, &opts)?;
    let simple = simple_upper_bound(a.length)?;
    let s = &r.stats;
    match f {
        Format::Text => {
            writeln!(out, "dimension: {}", a.length)?;
            writeln!(out, "optimal sequence: {}", joined(r.sequence.values(), ","))?;
            writeln!(out, "E_l: {:.6}", r.exponent)?;
            writeln!(out, "simple bound: {simple:.6}")?;
            writeln!(
                out,
                "search: nodes={} lp_calls={} pruned={} exact_checks={} pivots={}",
                s.nodes, s.lp_calls, s.pruned_infeasible, s.exact_checks, s.pivots
            )?;
            if a.certificates {
                if let Some(w) = &r.certificate.witness {
                    writeln!(out, "witness: {}", joined(w, " "))?;
                }
                for b in &r.pruned {
                    writeln!(out, "pruned D_{}..: {} farkas: {}", b.first, joined(&b.assigned, ","), joined(&b.farkas, " "))?;
                }
            }
        }
        Format::Json => {
            let mut v = json!({
                "dimension": a.length,
                "optimal_sequence": r.sequence.values(),
                "exponent": round6(r.exponent),
                "simple_bound": round6(simple),
                "nodes": s.nodes,
                "lp_calls": s.lp_calls,
                "pruned": s.pruned_infeasible,
                "exact_checks": s.exact_checks,
                "pivots": s.pivots,
            });
            if a.certificates {
                v["certificate"] = serde_json::to_value(&r.certificate).map_err(std::io::Error::from)?;
                v["pruned_branches"] = serde_json::to_value(&r.pruned).map_err(std::io::Error::from)?;
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "l,optimal_sequence,E_l,simple_bound,nodes,lp_calls,pruned,exact_checks,pivots")?;
            writeln!(
                out,
                "{},{},{:.6},{simple:.6},{},{},{},{},{}",
                a.length,
                joined(r.sequence.values(), " "),
                r.exponent,
                s.nodes,
                s.lp_calls,
                s.pruned_infeasible,
                s.exact_checks,
                s.pivots
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tree(a: &TreeArgs, f: Format, out: &mut dyn Write) -> Result<u8> {
    let kernel = a.kernel.load()?.kernel;
    let t = tree_process(&kernel, &a.channel.channel, a.depth, a.trials, a.seed, a.cap)?;
    let threshold = t.threshold(a.beta);
    let (below, above) = t.summary(a.beta);
    let config = json_map(json!({
        "kernel": a.kernel.to_string(),
        "channel": a.channel.channel.label(),
        "depth": a.depth,
        "trials": a.trials,
        "seed": a.seed,
        "beta": a.beta,
        "cap": a.cap,
    }));
    let header = header_line("simulate tree", &config);
    match f {
        Format::Csv => {
            writeln!(out, "{header}")?;
            writeln!(out, "trial,n,Z")?;
            for s in &t.samples {
                writeln!(out, "{},{},{}", s.trial, a.depth, s.z)?;
            }
        }
        Format::Text => {
            writeln!(out, "{header}")?;
            writeln!(out, "threshold 2^-N^beta: {threshold:e}")?;
            writeln!(out, "fraction Z <= threshold: {below}")?;
            writeln!(out, "fraction Z >= 1 - threshold: {above}")?;
            let z = t.z_values();
            let mean = z.iter().sum::<f64>() / z.len().max(1) as f64;
            writeln!(out, "mean Z: {mean}")?;
        }
        Format::Json => {
            let samples: Vec<Value> = t
                .samples
                .iter()
                .map(|s| json!({"trial": s.trial, "n": a.depth, "branches": s.branches, "Z": s.z}))
                .collect();
            emit_json(
                out,
                &json!({
                    "config": config,
                    "threshold": threshold,
                    "fraction_below": below,
                    "fraction_above": above,
                    "samples": samples,
                }),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn json_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn cmd_sc(a: &ScArgs, f: Format, out: &mut dyn Write) -> Result<u8> {
    if !(0.0..=1.0).contains(&a.rate) {
        return Err(Error::OutOfRange(format!("rate {} outside [0, 1]", a.rate)));
    }
    let kernel = a.kernel.load()?.kernel;
    let l = kernel.length();
    let re = RecursiveEncoder::new(kernel, a.m)?;
    let n = re.block_length();
    let info = (a.rate * n as f64).round() as usize;
    let channel = &a.channel.channel;
    let is_bec = channel.label().starts_with("bec:");
    let design = match a.design {
        Design::Auto if is_bec && l <= EXACT_MAX_LENGTH && re.kernel().is_linear() => Design::Bec,
        Design::Auto => Design::Genie,
        d => d,
    };
    let design_seed = a.design_seed.unwrap_or(a.seed.wrapping_add(1));
    let scores = match design {
        Design::Bec if !is_bec => {
            return Err(Error::OutOfRange("the bec design needs a bec channel".into()));
        }
        Design::Bec => bec_design(&re, a.channel.parameter)?,
        _ => genie_error_rates(&re, channel, a.design_trials, design_seed)?,
    };
    let frozen = frozen_worst(&scores, info);
    let summary = simulate_sc(&re, channel, &frozen, a.trials, a.seed)?;
    let rate = info as f64 / n as f64;

    let mut config = json_map(json!({
        "kernel": a.kernel.to_string(),
        "m": a.m,
        "N": n,
        "channel": channel.label(),
        "rate": rate,
        "trials": a.trials,
        "seed": a.seed,
        "design": format!("{design:?}").to_lowercase(),
    }));
    if design == Design::Genie {
        config.insert("design_trials".into(), json!(a.design_trials));
        config.insert("design_seed".into(), json!(design_seed));
    }
    let header = header_line("simulate sc", &config);
    match f {
        Format::Csv => {
            writeln!(out, "{header}")?;
            writeln!(out, "snr_or_eps,rate,block_errors,trials")?;
            writeln!(out, "{},{rate},{},{}", a.channel.parameter, summary.block_errors, summary.trials)?;
        }
        Format::Text => {
            writeln!(out, "{header}")?;
            writeln!(out, "information bits: {info} of {n}")?;
            writeln!(out, "block errors: {} / {}", summary.block_errors, summary.trials)?;
            writeln!(out, "block error rate: {}", summary.block_error_rate())?;
            writeln!(out, "bit errors: {}", summary.bit_errors)?;
        }
        Format::Json => emit_json(
            out,
            &json!({
                "config": config,
                "snr_or_eps": a.channel.parameter,
                "rate": rate,
                "block_errors": summary.block_errors,
                "bit_errors": summary.bit_errors,
                "trials": summary.trials,
                "frozen": frozen.iter().enumerate().filter(|(_, &f)| f).map(|(k, _)| k + 1).collect::<Vec<_>>(),
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_subchannel(a: &SubchannelArgs, f: Format, out: &mut dyn Write) -> Result<u8> {
    let kernel = a.kernel.load()?.kernel;
    let exact = match a.method {
        MethodChoice::Exact => true,
        MethodChoice::MonteCarlo => false,
        MethodChoice::Auto => kernel.length() <= EXACT_MAX_LENGTH,
    };
    let stats = if exact {
        SubchannelStats::exact(&kernel, &a.channel.channel)?
    } else {
        SubchannelStats::monte_carlo(&kernel, &a.channel.channel, a.samples, a.seed)?
    };
    let mut config = json_map(json!({
        "kernel": a.kernel.to_string(),
        "channel": stats.channel,
        "method": if exact { "exact" } else { "monte-carlo" },
    }));
    if !exact {
        config.insert("samples".into(), json!(a.samples));
        config.insert("seed".into(), json!(a.seed));
    }
    let header = header_line("simulate subchannel", &config);
    let stderr = |i: usize| stats.stderr.as_ref().map(|s| s[i]);
    match f {
        Format::Csv | Format::Text => {
            writeln!(out, "{header}")?;
            let sep = if f == Format::Csv { "," } else { " " };
            writeln!(out, "{}", ["i", "I", "Z", "I_stderr", "Z_stderr"].join(sep))?;
            for i in 0..kernel.length() {
                let (se_i, se_z) = stderr(i).map_or((String::new(), String::new()), |(a, b)| (a.to_string(), b.to_string()));
                let row = [(i + 1).to_string(), stats.capacity[i].to_string(), stats.bhattacharyya[i].to_string(), se_i, se_z];
                writeln!(out, "{}", row.join(sep).trim_end())?;
            }
            if f == Format::Text {
                writeln!(out, "sum I: {}", stats.total_capacity())?;
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "config": config,
                "capacity": stats.capacity,
                "bhattacharyya": stats.bhattacharyya,
                "stderr": stats.stderr,
                "sum_capacity": stats.total_capacity(),
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_dump(a: &DumpArgs, out: &mut dyn Write) -> Result<u8> {
    let kernel = a.kernel.load()?.kernel;
    let text = if a.hex { kernel.to_hex_table() } else { kernel.to_text() };
    match &a.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_check(path: &Path, f: Format, out: &mut dyn Write) -> Result<u8> {
    let text = std::fs::read_to_string(path)?;
    let chain = ChainDecomposition::from_text(&text, path.parent())?;
    let params = chain.parameters();
    let kernel = Kernel::from_decomposition(&chain.binary_refinement()?);
    let d = kernel.partial_distances();
    let lower = params.lower_bound_sequence();
    let bound_holds = d.values().iter().zip(&lower).all(|(a, b)| a >= b);
    // Only non-decreasing sequences have an LP system.
    let lp_valid = match build_refined_constraints(kernel.length(), d.values()) {
        Ok(p) => {
            let cert = lp_feasible(&p);
            Some(cert.is_feasible() && cert.verify(&p))
        }
        Err(_) => None,
    };
    let ok = bound_holds && lp_valid != Some(false);
    match f {
        Format::Text => {
            writeln!(out, "chain: {params}")?;
            writeln!(out, "partial distances: {}", joined(d.values(), ","))?;
            writeln!(out, "exponent: {:.6}", d.exponent())?;
            writeln!(out, "chain lower bound: {}", joined(&lower, ","))?;
            writeln!(out, "chain exponent bound: {:.6}", params.exponent_lower_bound())?;
            writeln!(out, "bound holds: {}", if bound_holds { "yes" } else { "no" })?;
            let lp = match lp_valid {
                Some(true) => "feasible",
                Some(false) => "infeasible",
                None => "not applicable (sequence decreases)",
            };
            writeln!(out, "lp system: {lp}")?;
        }
        Format::Json => emit_json(
            out,
            &json!({
                "chain": params.to_string(),
                "partial_distances": d.values(),
                "exponent": round6(d.exponent()),
                "chain_lower_bound": lower,
                "chain_exponent_bound": round6(params.exponent_lower_bound()),
                "bound_holds": bound_holds,
                "lp_feasible": lp_valid,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "chain,partial_distances,exponent,chain_lower_bound,chain_exponent_bound,bound_holds,lp_feasible")?;
            writeln!(
                out,
                "\"{params}\",{},{:.6},{},{:.6},{bound_holds},{}",
                joined(d.values(), " "),
                d.exponent(),
                joined(&lower, " "),
                params.exponent_lower_bound(),
                lp_valid.map_or(String::new(), |v| v.to_string())
            )?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_INVALID })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("polar-kernels").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn selectors() {
        assert_eq!("1".parse::<KernelSelector>().unwrap(), KernelSelector::Known(1));
        assert_eq!("#4".parse::<KernelSelector>().unwrap(), KernelSelector::Known(4));
        assert_eq!("arikan".parse::<KernelSelector>().unwrap(), KernelSelector::Arikan);
        assert_eq!(
            "file:k.txt".parse::<KernelSelector>().unwrap(),
            KernelSelector::File(PathBuf::from("k.txt"))
        );
        assert!("5".parse::<KernelSelector>().is_err());
        assert!("nope".parse::<KernelSelector>().is_err());
    }

    #[test]
    fn arikan_exponent() {
        let (code, out, _) = run_capture(&["exponent", "--kernel", "arikan"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("partial distances: 1,2"));
        assert!(out.contains("exponent: 0.500000"));
    }

    #[test]
    fn usage_errors_exit_with_one() {
        let (code, _, err) = run_capture(&["exponent", "--kernel", "9"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("unknown kernel"));
        let (code, _, err) = run_capture(&["bound", "--l", "17"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("outside 2..=16"));
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("exponent"));
    }

    #[test]
    fn small_bound() {
        let (code, out, _) = run_capture(&["bound", "--l", "2", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        let row = out.lines().nth(1).unwrap();
        assert!(row.starts_with("2,1 2,0.500000,"), "{row}");
    }

    #[test]
    fn exact_beyond_limit_is_rejected() {
        let (code, _, err) = run_capture(&["simulate", "subchannel", "--kernel", "1", "--channel", "bec:0.5", "--method", "exact"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("exact-mode limit"));
    }

    #[test]
    fn channel_specs() {
        let c: ChannelSpec = "bsc:0.11".parse().unwrap();
        assert_eq!(c.parameter, 0.11);
        assert_eq!("noiseless".parse::<ChannelSpec>().unwrap().parameter, 0.0);
        assert!("bec:2".parse::<ChannelSpec>().is_err());
    }

    #[test]
    fn header_renders_strings_bare() {
        let m = json_map(json!({"kernel": "arikan", "seed": 7}));
        assert_eq!(header_line("simulate tree", &m), "# polar-kernels simulate tree kernel=arikan seed=7");
    }
}
