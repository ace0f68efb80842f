//! `verlab`: Grothendieck rings of `Ver_{p^n}`, `SL_2` characters in
//! characteristic `p`, and the verification suite, from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use verlab_core::char_ring::SymChar;
use verlab_core::frobenius_limit::{stabilization_check, stable_class};
use verlab_core::sl2_modp::{decompose_simples, decompose_tiltings, decompose_weyl};
use verlab_core::verify_suite::{check_ids, run_suite, ReportFormat, SuiteConfig};
use verlab_core::verlinde_ring::{
    ext1_locus, fuse_l1, structure_constants, tensor_power_class, tilting_image_class,
    CacheOutcome, FusionTable, TableCache, VerLevel, DEFAULT_BUDGET,
};
use verlab_core::{Error, Prime};

use output::{render_class, render_labels, render_table, Format};

#[derive(Parser, Debug)]
#[command(
    name = "verlab",
    version,
    about = "Exact Grothendieck-ring data of Ver_{p^n} and modular SL2 characters"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Directory for persisted fusion tables.
    #[arg(long, global = true, env = "VERLAB_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Allow stabilization checks outside 2r < p^(n-1) - p^(n-2).
    #[arg(long, global = true)]
    override_bounds: bool,

    /// Report cache hits and builds on standard error.
    #[arg(long, global = true)]
    stats: bool,

    /// Largest |Lambda|^3 allowed for a table build.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class of L_1 (x) L_a.
    Fuse {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
    },
    /// Class of the i-th tensor power of L_1.
    Power {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
    },
    /// Full structure constants N_ab^c.
    Ring {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a symmetric character, e.g. "v^2+2+v^-2".
    Decompose {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long = "char")]
        character: String,
        #[arg(long, value_enum)]
        basis: Basis,
    },
    /// Stable multiplicities of Lbar_1^(x) i in the limit category.
    Limit {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: u32,
    },
    /// Compare tensor powers of L_1 at levels n and n-1 for i <= r.
    Stabilize {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Image of the tilting module T_m in Ver_{p^n}.
    TiltingImage {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u64,
    },
    /// Run verification checks; exits 1 if any fails.
    Verify {
        /// Comma-separated check ids (default: all).
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<String>>,
        #[arg(long)]
        max_i: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
        /// Comma-separated primes (default: 2,3,5).
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u64>>,
    },
    /// Labels a with Ext^1(L_a, 1) nonzero.
    ExtLocus {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    Simple,
    Tilting,
    Weyl,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

fn level(p: u64, n: u32) -> Result<VerLevel, Error> {
    VerLevel::from_raw(p, n)
}

fn load_table(cli: &Cli, level: VerLevel) -> Result<FusionTable, Error> {
    let budget = u128::from(cli.budget);
    match &cli.cache_dir {
        Some(dir) => {
            let cache = TableCache::new(dir);
            let (table, outcome) = cache.get_or_build(level, budget)?;
            if cli.stats {
                let what = match outcome {
                    CacheOutcome::Hit => "hit",
                    CacheOutcome::Built => "built",
                };
                eprintln!("cache {what}: {}", cache.path_for(level).display());
            }
            Ok(table)
        }
        None => {
            if cli.stats {
                eprintln!("cache disabled: built {level} in memory");
            }
            structure_constants(level, budget)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    let out = match &cli.command {
        Command::Fuse { p, n, a } => render_class(format, fuse_l1(level(*p, *n)?, *a)?.mults()),
        Command::Power { p, n, i } => {
            render_class(format, tensor_power_class(level(*p, *n)?, *i)?.mults())
        }
        Command::TiltingImage { p, n, m } => {
            render_class(format, tilting_image_class(level(*p, *n)?, *m)?.mults())
        }
        Command::Ring { p, n, out } => {
            let table = load_table(cli, level(*p, *n)?)?;
            let text = render_table(format, &table);
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(Error::from)?;
                String::new()
            } else {
                text
            }
        }
        Command::Decompose {
            p,
            character,
            basis,
        } => {
            let f: SymChar = character.parse()?;
            let prime = || {
                p.ok_or_else(|| {
                    Failure::Usage("--p is required for the simple and tilting bases".into())
                })
                .and_then(|q| Prime::new(q).map_err(Failure::from))
            };
            let mults = match basis {
                Basis::Simple => decompose_simples(f.poly(), prime()?)?,
                Basis::Tilting => decompose_tiltings(f.poly(), prime()?)?,
                Basis::Weyl => decompose_weyl(f.poly())?,
            };
            render_class(format, &mults)
        }
        Command::Limit { p, i } => {
            let (class, window) = stable_class(Prime::new(*p)?, *i)?;
            let checked: Vec<String> = window.n_checked.iter().map(u32::to_string).collect();
            let note = format!(
                "window: p={} i={} n_min={} n_checked={}",
                window.p,
                window.i,
                window.n_min,
                checked.join(",")
            );
            let mut text = render_class(format, &class);
            match format {
                Format::Md => text.push_str(&format!("\n{note}\n")),
                _ => eprintln!("{note}"),
            }
            text
        }
        Command::Stabilize { p, n, r } => {
            let mismatch = stabilization_check(Prime::new(*p)?, *n, *r, cli.override_bounds)?;
            let value = match &mismatch {
                None => json!({ "agree": true }),
                Some(m) => json!({
                    "agree": false,
                    "i": m.i,
                    "level_n": output::class_json(&m.upper),
                    "level_n_minus_1": output::class_json(&m.lower),
                }),
            };
            match format {
                Format::Json => format!("{value}\n"),
                Format::Csv => format!("agree\n{}\n", mismatch.is_none()),
                Format::Md => format!("| agree |\n|---|\n| {} |\n", mismatch.is_none()),
            }
        }
        Command::Verify {
            suite,
            max_i,
            max_n,
            p,
        } => {
            let mut config = SuiteConfig::default();
            if let Some(primes) = p {
                config.primes = primes.clone();
            }
            if let Some(i) = max_i {
                config.max_i = *i;
            }
            config.max_n = *max_n;
            let ids: Vec<String> = match suite {
                Some(ids) => ids.clone(),
                None => check_ids().into_iter().map(String::from).collect(),
            };
            let report = run_suite(&ids, &config)?;
            let text = match format {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Md => {
                    verlab_core::verify_suite::emit_report(&report, ReportFormat::Markdown)
                }
                Format::Csv => output::report_csv(&report),
            };
            return Ok(Outcome {
                stdout: text,
                code: report.exit_code() as u8,
            });
        }
        Command::ExtLocus { p, n } => render_labels(format, &ext1_locus(level(*p, *n)?)),
    };
    Ok(Outcome::ok(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!(
                "{}",
                json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
            );
            ExitCode::from(1)
        }
    }
}
