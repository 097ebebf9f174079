use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use oddnl_core::config::ConfigFile;
use oddnl_core::harness::{export_boxplot_data, run_campaign, summarize_records, write_jsonl, write_summary_csv};
use oddnl_core::{bounds, orbit_count, run, verify, EncodingKind, OptimizerKind, OrbitTable};

#[derive(Parser)]
#[command(
    name = "oddnl",
    version,
    about = "Evolutionary search for highly nonlinear Boolean functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single search and print the best function found.
    Search {
        #[command(flatten)]
        opts: SearchOpts,
        /// Print the full run record as JSON instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Run one or more multi-seed campaigns and write result files.
    Campaign {
        #[command(flatten)]
        opts: SearchOpts,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed_base: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Keep wall-clock times in the run log.
        #[arg(long)]
        timing: bool,
        /// Directory for runs.jsonl, summary.csv and boxplot.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the properties of a function given as hex.
    Verify {
        #[arg(long)]
        hex: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the number of rotation orbits followed by their representatives.
    Orbits {
        #[arg(long)]
        n: u32,
    },
    /// Print reference nonlinearity bounds for an odd dimension.
    Bounds {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct SearchOpts {
    /// TOML configuration; may be repeated for campaigns. Flags override file values.
    #[arg(long = "config")]
    configs: Vec<PathBuf>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    /// bitstring, float or tree (aliases: tt, fp, gp).
    #[arg(long)]
    encoding: Option<EncodingKind>,
    /// Restrict the search to rotation-symmetric functions.
    #[arg(long, conflicts_with = "no_rs")]
    rs: bool,
    #[arg(long)]
    no_rs: bool,
    /// Bits per float gene.
    #[arg(long)]
    decode: Option<u32>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
    /// sst or de.
    #[arg(long)]
    optimizer: Option<OptimizerKind>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    p_mut: Option<f64>,
    #[arg(long)]
    budget: Option<u64>,
    /// Stop once this nonlinearity is reached.
    #[arg(long)]
    target: Option<u32>,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    de_f: Option<f64>,
    #[arg(long)]
    de_cr: Option<f64>,
    /// none, ls1, ls2 or ls3.
    #[arg(long)]
    ls: Option<String>,
    #[arg(long)]
    ls_fraction: Option<f64>,
    #[arg(long)]
    ls_trials: Option<usize>,
    /// Steady-state steps between local search rounds.
    #[arg(long)]
    ls_period: Option<usize>,
}

impl SearchOpts {
    fn flags(&self) -> ConfigFile {
        let mut f = ConfigFile {
            label: self.label.clone(),
            ..ConfigFile::default()
        };
        let p = &mut f.problem;
        p.n = self.n;
        p.encoding = self.encoding;
        p.rs = match (self.rs, self.no_rs) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        };
        p.decode = self.decode;
        p.max_depth = self.max_depth;
        p.max_nodes = self.max_nodes;
        let a = &mut f.algorithm;
        a.optimizer = self.optimizer;
        a.population_size = self.pop;
        a.p_mut = self.p_mut;
        a.evaluation_budget = self.budget;
        a.target_nl = self.target;
        a.time_limit_secs = self.time_limit;
        a.seed = self.seed;
        a.de_f = self.de_f;
        a.de_cr = self.de_cr;
        let l = &mut f.local_search;
        l.variant = self.ls.clone();
        l.fraction = self.ls_fraction;
        l.trials = self.ls_trials;
        l.period = self.ls_period;
        f
    }

    /// One merged configuration per `--config`, or just the flags.
    fn resolve(&self, extra: &ConfigFile) -> Result<Vec<ConfigFile>> {
        let flags = self.flags().merge(extra);
        if self.configs.is_empty() {
            return Ok(vec![flags]);
        }
        self.configs
            .iter()
            .map(|path| {
                let file = ConfigFile::load(path).with_context(|| format!("loading {}", path.display()))?;
                Ok(file.merge(&flags))
            })
            .collect()
    }
}

fn search(opts: &SearchOpts, json: bool) -> Result<()> {
    let files = opts.resolve(&ConfigFile::default())?;
    if files.len() > 1 {
        bail!("search takes at most one --config");
    }
    let cfg = files[0].run_config()?;
    let record = run(&cfg)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&record)?);
    } else {
        println!("label: {}", record.label);
        println!("seed: {}", record.seed);
        println!("nonlinearity: {}", record.nonlinearity);
        println!("num_max_values: {}", record.num_max_values);
        println!("fitness: {}", record.fitness);
        println!("evaluations: {}", record.evaluations);
        println!("stop_reason: {:?}", record.stop_reason);
        println!("truth_table: {}", record.truth_table);
    }
    Ok(())
}

fn campaign(opts: &SearchOpts, extra: &ConfigFile, out: Option<PathBuf>) -> Result<()> {
    let mut records = Vec::new();
    let mut out_dir = out;
    for file in opts.resolve(extra)? {
        if out_dir.is_none() {
            out_dir = file.campaign.output.clone();
        }
        let c = file.campaign()?;
        let result = run_campaign(&c)?;
        let s = &result.summary;
        eprintln!(
            "{}: runs {} max {} avg {:.4} std {:.4}",
            s.label, s.runs, s.max, s.avg, s.std
        );
        records.extend(result.records);
    }
    let dir = out_dir.unwrap_or_else(|| PathBuf::from("results"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let create = |name: &str| -> Result<BufWriter<File>> {
        let path = dir.join(name);
        Ok(BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        ))
    };
    let mut w = create("runs.jsonl")?;
    write_jsonl(&mut w, &records)?;
    w.flush()?;
    let mut w = create("summary.csv")?;
    write_summary_csv(&mut w, &summarize_records(&records)?)?;
    w.flush()?;
    let mut w = create("boxplot.csv")?;
    export_boxplot_data(&mut w, &records)?;
    w.flush()?;
    println!("{}", dir.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Search { opts, json } => search(&opts, json),
        Command::Campaign {
            opts,
            runs,
            seed_base,
            workers,
            timing,
            out,
        } => {
            let mut extra = ConfigFile::default();
            extra.campaign.runs = runs;
            extra.campaign.seed_base = seed_base;
            extra.campaign.workers = workers;
            extra.campaign.timing = timing.then_some(true);
            campaign(&opts, &extra, out)
        }
        Command::Verify { hex, n, json } => {
            let report = verify::verify(&hex, n)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(())
        }
        Command::Orbits { n } => {
            let table = OrbitTable::cached(n)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", orbit_count(n)?)?;
            for r in table.representatives() {
                writeln!(out, "{r}")?;
            }
            Ok(())
        }
        Command::Bounds { n } => {
            let b = bounds(n)?;
            println!("n: {n}");
            println!("quadratic: {}", b.quadratic);
            println!("best_known: {}", b.best_known);
            println!("upper: {}", b.upper);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
