//! `symdyn`: generate sequences, inspect covers and run Möbius-disjointness
//! experiments from the command line or from a declaration file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use symdyn::experiment::{ExperimentConfig, Mode, ReportFormat};
use symdyn::frontend::{self, builtin_document, parse_observable_expr, parse_spec, Diagnostic, SpecDocument, System};
use symdyn::morse::hat;
use symdyn::permgrp::centralizer_in_sym;
use symdyn::spectral::{autocorrelation, periodogram};
use symdyn::stream::prefix;
use symdyn::subst::{analyze, group_cover, language, skeleton_index, sound_horizon};

#[derive(Parser)]
#[command(name = "symdyn", version, about = "Substitutions, Morse sequences and Möbius-disjointness experiments")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Declaration file; without it only the built-in systems are known.
    file: Option<PathBuf>,

    /// System to use (default: the first system in FILE, or thue-morse).
    #[arg(long)]
    system: Option<String>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    Moebius,
    Liouville,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of the sequence.
    Gen {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Group cover of a bijective substitution.
    Cover {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Print `y[k+1] y[k]^{-1}` for `k < n`.
    Hat {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Skeleton offset of `S^k` of the fixed point at level `t`.
    Skeleton {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        shift: u64,
    },
    /// Blocks of length k with their counts.
    Blocks {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Prefix length scanned (substitutions pick a sufficient one by default).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fejér periodogram of an observable, as `frequency,density`.
    Spectrum {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value = "walsh {0}")]
        observable: String,
        #[arg(long, default_value_t = 1 << 16)]
        n: usize,
        #[arg(long, default_value_t = 256)]
        max_lag: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Autocorrelations as `lag,real,imag`.
    Corr {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value = "walsh {0}")]
        observable: String,
        #[arg(long, default_value_t = 1 << 16)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        max_lag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted averages `(1/M) Σ f(S^n y) w(n)`.
    Sarnak {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value = "walsh {0}")]
        observable: String,
        #[arg(long, value_enum, default_value_t = Weight::Moebius)]
        weight: Weight,
        #[arg(long, default_value_t = 1 << 16)]
        n: usize,
        /// `pow2` or a comma-separated list.
        #[arg(long, default_value = "pow2")]
        checkpoints: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Correlations `(1/M) Σ f(S^{nr} y) conj f(S^{ns} y)`.
    Kbsz {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value = "walsh {0}")]
        observable: String,
        #[arg(long, default_value = "3,5")]
        primes: String,
        #[arg(long, default_value_t = 1 << 16)]
        n: usize,
        #[arg(long, default_value = "pow2")]
        checkpoints: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the experiments declared in a file.
    Run {
        file: PathBuf,
        /// Only this experiment.
        #[arg(long)]
        experiment: Option<String>,
        /// Output file (one experiment) or directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum Failure {
    Diagnostics(String, Vec<Diagnostic>),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<symdyn::Error> for Failure {
    fn from(e: symdyn::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T> = Result<T, Failure>;

fn load(path: &Path) -> CliResult<SpecDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_spec(&text).map_err(|d| Failure::Diagnostics(path.display().to_string(), d))
}

struct Context_ {
    name: String,
    doc: SpecDocument,
    system: System,
}

fn resolve(args: &SystemArgs) -> CliResult<Context_> {
    let file_doc = args.file.as_deref().map(load).transpose()?;
    let builtins = builtin_document();
    let name = match (&args.system, &file_doc) {
        (Some(n), _) => n.clone(),
        (None, Some(doc)) => doc
            .systems()
            .next()
            .map(|d| d.name().text.clone())
            .ok_or_else(|| anyhow!("the file declares no system"))?,
        (None, None) => "thue-morse".into(),
    };
    let doc = match file_doc {
        Some(doc) if doc.get(&name).is_some() => doc,
        Some(_) if builtins.get(&name).is_none() => {
            return Err(anyhow!("no system named '{name}'").into());
        }
        Some(doc) => {
            // built-in system, observables from the file
            let mut merged = builtins;
            merged.declarations.extend(doc.declarations);
            merged
        }
        None => builtins,
    };
    let system = System::build(&doc, &name)?;
    Ok(Context_ { name, doc, system })
}

fn observable(ctx: &Context_, spec: &str) -> CliResult<symdyn::spectral::Observable> {
    let expr = match ctx.doc.get(spec) {
        Some(frontend::Declaration::Observable(o)) => o.expr.clone(),
        _ => parse_observable_expr(spec).map_err(|d| Failure::Diagnostics("--observable".into(), vec![d]))?,
    };
    Ok(ctx.system.observable(&expr)?)
}

fn checkpoints(spec: &str, n: usize) -> anyhow::Result<Option<Vec<usize>>> {
    if spec == "pow2" {
        return Ok(None);
    }
    let list = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad checkpoint '{s}'")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if list.last().is_some_and(|&m| m > n) {
        bail!("checkpoints exceed --n {n}");
    }
    Ok(Some(list))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_config(config: &ExperimentConfig, threads: Option<usize>, output: &OutputArgs) -> CliResult<()> {
    let report = config.run_with_threads(threads)?;
    emit(&report.render(output.format.into()), output.out.as_deref())?;
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    let threads = cli.threads;
    match cli.command {
        Command::Gen { sys, n } => {
            let ctx = resolve(&sys)?;
            let word = prefix(ctx.system.source()?.as_ref(), n);
            println!("{}", ctx.system.render(&word));
        }
        Command::Cover { sys } => {
            let ctx = resolve(&sys)?;
            let System::Substitution(sub) = &ctx.system else {
                return Err(anyhow!("cover needs a substitution").into());
            };
            let report = analyze(sub);
            let (cover, _) = group_cover(sub)?;
            println!("|G| = {}", cover.group.order());
            println!("block: {}", cover.cycle_names().join(", "));
            println!("primitive: {}", report.primitive);
            let perms = sub.column_maps().perms().expect("cover implies bijective columns");
            if sub.alphabet_size() <= symdyn::permgrp::CENTRALIZER_DEGREE_CAP {
                let (c, _) = centralizer_in_sym(&perms, sub.alphabet_size())?;
                println!("|C(θ)| = {}", c.order());
            }
        }
        Command::Hat { sys, n } => {
            let ctx = resolve(&sys)?;
            let group = ctx.system.hat_group().ok_or_else(|| anyhow!("hat needs group-valued symbols"))?;
            let word = prefix(ctx.system.source()?.as_ref(), n + 1);
            let h = hat(&word, &group)?;
            let digits: String = h.iter().map(|&g| std::char::from_digit((g % 36) as u32, 36).unwrap()).collect();
            println!("{digits}");
        }
        Command::Skeleton { sys, level, shift } => {
            let ctx = resolve(&sys)?;
            let lambda = match &ctx.system {
                System::Substitution(s) => s.length(),
                _ => return Err(anyhow!("skeleton needs a substitution").into()),
            };
            println!("{}", skeleton_index(lambda, level, shift)?);
        }
        Command::Blocks { sys, k, n } => {
            let ctx = resolve(&sys)?;
            let (words, horizon) = match (&ctx.system, n) {
                (System::Substitution(s), None) => {
                    let h = sound_horizon(s, k)?;
                    (language(s, k, h)?.words.into_iter().collect::<Vec<_>>(), h)
                }
                (_, n) => {
                    let h = n.unwrap_or(1 << 16);
                    let w = prefix(ctx.system.source()?.as_ref(), h);
                    let set: std::collections::BTreeSet<Vec<usize>> = w.windows(k).map(<[usize]>::to_vec).collect();
                    (set.into_iter().collect(), h)
                }
            };
            for w in &words {
                println!("{}", ctx.system.render(w));
            }
            println!("# {} blocks of length {k} in a prefix of length {horizon}", words.len());
        }
        Command::Spectrum { sys, observable: o, n, max_lag, grid, out } => {
            let ctx = resolve(&sys)?;
            let obs = observable(&ctx, &o)?;
            let est = autocorrelation(ctx.system.source()?.as_ref(), &obs, n, max_lag)?;
            let p = periodogram(&est, grid)?;
            let mut text = String::from("frequency,density\n");
            for (j, v) in p.iter().enumerate() {
                text.push_str(&format!(
                    "{},{}\n",
                    symdyn::experiment::format_g12(j as f64 / grid as f64),
                    symdyn::experiment::format_g12(*v)
                ));
            }
            emit(&text, out.as_deref())?;
        }
        Command::Corr { sys, observable: o, n, max_lag, out } => {
            let ctx = resolve(&sys)?;
            let obs = observable(&ctx, &o)?;
            let est = autocorrelation(ctx.system.source()?.as_ref(), &obs, n, max_lag)?;
            let mut text = String::from("lag,real,imag\n");
            for (lag, v) in est.values.iter().enumerate() {
                text.push_str(&format!(
                    "{lag},{},{}\n",
                    symdyn::experiment::format_g12(v.re),
                    symdyn::experiment::format_g12(v.im)
                ));
            }
            emit(&text, out.as_deref())?;
        }
        Command::Sarnak { sys, observable: o, weight, n, checkpoints: cps, output } => {
            let ctx = resolve(&sys)?;
            let config = ExperimentConfig {
                name: "sarnak".into(),
                system_name: ctx.name.clone(),
                observable_name: o.clone(),
                source: ctx.system.source()?,
                observable: observable(&ctx, &o)?,
                mode: Mode::Sarnak(match weight {
                    Weight::Moebius => Some(symdyn::arith::WeightKind::Moebius),
                    Weight::Liouville => Some(symdyn::arith::WeightKind::Liouville),
                    Weight::None => None,
                }),
                sample_size: n,
                checkpoints: checkpoints(&cps, n)?,
            };
            run_config(&config, threads, &output)?;
        }
        Command::Kbsz { sys, observable: o, primes, n, checkpoints: cps, output } => {
            let ctx = resolve(&sys)?;
            let (r, s) = primes
                .split_once(',')
                .and_then(|(r, s)| Some((r.trim().parse().ok()?, s.trim().parse().ok()?)))
                .ok_or_else(|| anyhow!("--primes expects R,S"))?;
            let config = ExperimentConfig {
                name: "kbsz".into(),
                system_name: ctx.name.clone(),
                observable_name: o.clone(),
                source: ctx.system.source()?,
                observable: observable(&ctx, &o)?,
                mode: Mode::Kbsz { r, s },
                sample_size: n,
                checkpoints: checkpoints(&cps, n)?,
            };
            run_config(&config, threads, &output)?;
        }
        Command::Run { file, experiment, out, format } => {
            let doc = load(&file)?;
            let selected: Vec<_> = doc
                .experiments()
                .filter(|e| experiment.as_ref().is_none_or(|n| &e.name.text == n))
                .collect();
            if selected.is_empty() {
                return Err(anyhow!("no matching experiment in {}", file.display()).into());
            }
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let single_file = out.as_ref().filter(|p| selected.len() == 1 && p.extension().is_some() && !p.is_dir());
            if let Some(dir) = out.as_ref().filter(|_| single_file.is_none()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            for e in selected {
                let config = e.build(&doc)?;
                let report = config.run_with_threads(threads)?;
                let text = report.render(format.into());
                match (&out, single_file) {
                    (_, Some(path)) => emit(&text, Some(path))?,
                    (Some(dir), None) => emit(&text, Some(&dir.join(format!("{}.{ext}", e.name.text))))?,
                    (None, _) => {
                        if doc.experiments().count() > 1 {
                            println!("# {}", e.name.text);
                        }
                        emit(&text, None)?;
                    }
                }
                eprintln!("{}: N = {}, checkpoints {}", e.name.text, config.sample_size, config.checkpoints().len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Diagnostics(file, diags)) => {
            for d in &diags {
                eprintln!("{}", d.render(&file));
            }
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_lists() {
        assert_eq!(checkpoints("pow2", 8).unwrap(), None);
        assert_eq!(checkpoints("1, 4,8", 8).unwrap(), Some(vec![1, 4, 8]));
        assert!(checkpoints("1,16", 8).is_err());
        assert!(checkpoints("x", 8).is_err());
    }
}
