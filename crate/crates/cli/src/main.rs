use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use localp2::solver::Mode;
use localp2_cli::{compute, export, load_tables, run_suite, CliError, Format, RunConfig, Suite};

#[derive(Parser, Debug)]
#[command(author, version, about = "Exact Gromov-Witten tables of local P2 and its orbifold and conifold points")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON config file; flags and environment variables override it.
    #[arg(long, global = true, env = "LOCALP2_CONFIG")]
    config: Option<PathBuf>,

    #[arg(long, global = true, env = "LOCALP2_MAX_GENUS")]
    max_genus: Option<u32>,

    #[arg(long, global = true, env = "LOCALP2_MAX_DEGREE")]
    max_degree: Option<i64>,

    #[arg(long, global = true, env = "LOCALP2_MAX_INSERTIONS")]
    max_insertions: Option<i64>,

    /// Highest conifold Laurent degree reported.
    #[arg(long, global = true, env = "LOCALP2_CON_MAX")]
    con_max: Option<i64>,

    /// gw-input, gap or joint.
    #[arg(long, global = true, env = "LOCALP2_MODE")]
    mode: Option<Mode>,

    /// Propagator constant, as p/q.
    #[arg(long, global = true, env = "LOCALP2_A", allow_hyphen_values = true)]
    a: Option<String>,

    /// JSON file of per-genus inputs overriding the embedded ones.
    #[arg(long, global = true, env = "LOCALP2_INPUTS")]
    inputs: Option<PathBuf>,

    #[arg(long, global = true, env = "LOCALP2_OUT")]
    out: Option<PathBuf>,

    #[arg(long, global = true, env = "LOCALP2_CACHE")]
    cache: Option<PathBuf>,

    /// Series windows as chart=order, e.g. lr=25 orb=12 con=40.
    #[arg(long, global = true, num_args = 1.., value_parser = parse_order, env = "LOCALP2_ORDERS", value_delimiter = ',')]
    orders: Vec<(String, i64)>,

    /// json, csv or md.
    #[arg(long, global = true, env = "LOCALP2_FORMAT")]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the pipeline and write all five tables.
    Compute,
    /// Run a verification suite: tables, gap, e2, eta, oracle, graphs, finite-gen or all.
    Verify { suite: Suite },
    /// Write tables in the chosen format, from a previous export or a fresh run.
    Export {
        /// `tables.json` or a directory of CSV files to convert instead of computing.
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

fn parse_order(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected chart=order, got {s:?}"))?;
    let v = v.parse().map_err(|_| format!("order {v:?} is not an integer"))?;
    Ok((k.to_string(), v))
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(RunConfig {
            max_genus: self.max_genus,
            max_degree: self.max_degree,
            max_insertions: self.max_insertions,
            con_max: self.con_max,
            mode: self.mode,
            a: self.a,
            inputs: self.inputs,
            out: self.out,
            cache: self.cache,
            orders: self.orders.into_iter().collect(),
            format: self.format,
        }))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = cli.run.resolve()?;
    match cli.command {
        Command::Compute => {
            let (_, t) = compute(&cfg)?;
            for f in export(&t, cfg.format(), &cfg.out_dir())? {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
        Command::Export { from } => {
            let t = match from {
                Some(p) => load_tables(&p)?,
                None => compute(&cfg)?.1,
            };
            for f in export(&t, cfg.format(), &cfg.out_dir())? {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let report = run_suite(suite, &cfg)?;
            print!("{report}");
            match report.first_failure() {
                None => {
                    println!("all {} checks passed", report.checks.len());
                    Ok(0)
                }
                Some(c) => {
                    eprintln!("first failure: {}: {}", c.name, c.detail);
                    Ok(1)
                }
            }
        }
    }
}
