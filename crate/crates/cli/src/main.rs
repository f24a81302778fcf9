//! `ltype`: batch front end for Delone subdivisions, secondary cones,
//! enumeration of `T`-generic cones, certified covering bounds and the
//! thin-field classification.

mod commands;
mod config;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ltype", version, about = "Exact L-type domain computations for lattice coverings")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct GlobalOpts {
    /// Seed for the search for a generic starting form.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Stop adding representatives after this many cones.
    #[arg(long, global = true)]
    pub max_cones: Option<usize>,
    /// Random draws allowed when looking for a generic form.
    #[arg(long, global = true)]
    pub max_tries: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit the JSON mirror of the report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Re-check every produced certificate before reporting.
    #[arg(long, global = true)]
    pub verify: bool,
    /// TOML file with seed, max_cones, max_tries, threads, gap_tol, max_newton.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Progress messages on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Delone subdivision, inhomogeneous minimum and covering density of a form.
    Delone {
        #[arg(long)]
        form: PathBuf,
    },
    /// Secondary cone of the form's Delone subdivision, restricted to T.
    Cone {
        #[arg(long)]
        form: PathBuf,
        /// Subspace T (default: all symmetric matrices).
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Flip across one facet of the form's secondary cone.
    Flip {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        subspace: Option<PathBuf>,
        #[arg(long)]
        facet: usize,
    },
    /// All T-inequivalent T-generic secondary cones.
    Enumerate {
        /// Subspace T (`.tsp`).
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Certified bounds on the least covering density in T, or in one cone
    /// when a form is given.
    Optimize {
        /// Subspace T (`.tsp`); with `--form` alone, all symmetric matrices.
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Optimize only over the secondary cone of this form.
        #[arg(long)]
        form: Option<PathBuf>,
    },
    /// Thin-field verdict for a totally real field.
    Thinfield {
        /// Field file (`.nf`).
        #[arg(long, conflicts_with = "fixture")]
        field: Option<PathBuf>,
        /// One of the built-in candidate fields, by discriminant.
        #[arg(long)]
        fixture: Option<u32>,
    },
    /// Print a named form, or list the available names.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Automorphism group of a form.
    Autgroup {
        #[arg(long)]
        form: PathBuf,
    },
    /// Arithmetic equivalence test between two forms.
    Isometry {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Re-check every certificate in a report.
    Verify {
        #[arg(long)]
        certificates: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Delone { .. } => "delone",
            Command::Cone { .. } => "cone",
            Command::Flip { .. } => "flip",
            Command::Enumerate { .. } => "enumerate",
            Command::Optimize { .. } => "optimize",
            Command::Thinfield { .. } => "thinfield",
            Command::Catalog { .. } => "catalog",
            Command::Autgroup { .. } => "autgroup",
            Command::Isometry { .. } => "isometry",
            Command::Verify { .. } => "verify",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.opts.verbose {
        env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).format_timestamp(None).init();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let settings = config::resolve(&cli.opts)?;
    if let Some(n) = settings.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    let out = commands::dispatch(&cli.command, &settings, &cli.opts)?;
    let l = &settings.limits;
    let body = if cli.opts.json {
        let v = serde_json::json!({
            "command": cli.command.name(),
            "seed": l.seed,
            "max_cones": l.max_cones,
            "max_tries": l.max_tries,
            "partial": out.partial,
            "result": out.json,
        });
        serde_json::to_string_pretty(&v).map_err(|e| e.to_string())? + "\n"
    } else {
        format!("# ltype {} seed {} max_cones {} max_tries {}\n{}", cli.command.name(), l.seed, l.max_cones, l.max_tries, out.text)
    };
    match &cli.opts.out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(if out.failed {
        ExitCode::from(1)
    } else if out.partial {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}
