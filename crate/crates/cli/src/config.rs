//! Run settings: defaults, then command-line flags, then an optional TOML
//! config file, each overriding the previous.

use std::path::Path;

use ltype::covopt::SolverOptions;
use ltype::enumerate::EnumerationLimits;
use serde::Deserialize;

use crate::GlobalOpts;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    max_cones: Option<usize>,
    max_tries: Option<usize>,
    threads: Option<usize>,
    gap_tol: Option<f64>,
    max_newton: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub limits: EnumerationLimits,
    pub threads: Option<usize>,
    pub solver: SolverOptions,
}

pub fn resolve(opts: &GlobalOpts) -> Result<Settings, String> {
    let file = match &opts.config {
        Some(p) => read_config(p)?,
        None => ConfigFile::default(),
    };
    let defaults = EnumerationLimits::default();
    let mut solver = SolverOptions::default();
    if let Some(g) = file.gap_tol {
        solver.gap_tol = g;
    }
    if let Some(n) = file.max_newton {
        solver.max_newton = n;
    }
    Ok(Settings {
        limits: EnumerationLimits {
            seed: file.seed.or(opts.seed).unwrap_or(defaults.seed),
            max_cones: file.max_cones.or(opts.max_cones).unwrap_or(defaults.max_cones),
            max_tries: file.max_tries.or(opts.max_tries).unwrap_or(defaults.max_tries),
        },
        threads: file.threads.or(opts.threads),
        solver,
    })
}

fn read_config(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
