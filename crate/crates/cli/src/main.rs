//! `hermite-cs`: batch front end for the holomorphic Hermite coherent-state library.

mod commands;
mod params;
mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Arg, ArgAction, ArgMatches};
use hermite_cs::Error;

use commands::{Failure, COMMANDS};
use params::{norm_key, read_config, Params, UsageError};
use report::Report;

const USAGE: u8 = 2;
const FAILED: u8 = 1;

/// Flags that take no value on the command line.
const SWITCHES: &[&str] = &["normalize"];

fn cli() -> clap::Command {
    let mut app = clap::Command::new("hermite-cs")
        .about("Holomorphic Hermite coherent states: evaluation, verification and sweeps")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("key = value parameter file"))
        .arg(Arg::new("output").long("output").short('o').global(true).value_name("FILE").help("write the report here instead of stdout"))
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .value_parser(["json", "csv"])
                .help("report format; sweeps default to csv, everything else to json"),
        )
        .arg(
            Arg::new("deterministic")
                .long("deterministic")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("report wall_time_s as 0 so identical runs give identical bytes"),
        );
    for c in COMMANDS {
        let mut sub = clap::Command::new(c.name).about(c.about);
        for &k in c.keys {
            let mut a = Arg::new(k).long(k).value_name("VALUE").allow_hyphen_values(true);
            if SWITCHES.contains(&k) {
                a = a.num_args(0..=1).default_missing_value("true");
            }
            sub = sub.arg(a);
        }
        app = app.subcommand(sub);
    }
    app.subcommand(clap::Command::new("run").about("Run the command named by `command = ...` in the --config file"))
}

fn flags(sub: &ArgMatches, keys: &[&str]) -> BTreeMap<String, String> {
    keys.iter()
        .filter_map(|&k| sub.get_one::<String>(k).map(|v| (norm_key(k), v.clone())))
        .collect()
}

struct Options {
    output: Option<PathBuf>,
    format: Option<String>,
    deterministic: bool,
}

fn execute(m: &ArgMatches) -> Result<u8, Failure> {
    let (name, sub) = m.subcommand().expect("subcommand is required");
    let mut file = match m.get_one::<String>("config") {
        Some(path) => read_config(path.as_ref())?,
        None => BTreeMap::new(),
    };
    let file_command = file.remove("command");
    let (cmd, given) = if name == "run" {
        let Some(cname) = file_command else {
            return Err(UsageError("run needs a --config file with a `command = ...` line".into()).into());
        };
        let cmd = commands::find(cname.trim()).ok_or_else(|| unknown(cname.trim()))?;
        (cmd, BTreeMap::new())
    } else {
        let cmd = commands::find(name).expect("subcommands come from the table");
        if let Some(other) = file_command.filter(|c| c.trim() != name) {
            return Err(UsageError(format!("config file names command {other:?} but {name} was invoked")).into());
        }
        (cmd, flags(sub, cmd.keys))
    };
    let opts = Options {
        output: m.get_one::<String>("output").map(PathBuf::from),
        format: m.get_one::<String>("format").cloned(),
        deterministic: m.get_flag("deterministic"),
    };

    let mut p = Params::new(file, given);
    let t = Instant::now();
    let mut outcome = (cmd.run)(&mut p)?;
    let wall = if opts.deterministic { 0.0 } else { t.elapsed().as_secs_f64() };
    for k in p.unused() {
        outcome.warnings.push(format!("parameter {k:?} is not used by {}", cmd.name));
    }
    let passed = outcome.passed();
    let report = Report { command: cmd.name.to_string(), parameters: p.into_resolved(), outcome, wall_time_s: wall };

    let csv = match opts.format.as_deref() {
        Some(f) => f == "csv",
        None => cmd.csv_default,
    };
    let written = match &opts.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            emit(&report, csv, &mut w)?;
            w.flush()
        }),
        None => {
            let mut w = io::stdout().lock();
            emit(&report, csv, &mut w).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return Ok(FAILED);
    }
    for w in &report.outcome.warnings {
        eprintln!("warning: {w}");
    }
    for c in report.outcome.checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
    }
    Ok(if passed { 0 } else { FAILED })
}

fn emit(r: &Report, csv: bool, w: &mut dyn Write) -> io::Result<()> {
    if csv {
        r.write_csv(w)
    } else {
        r.write_json(w)
    }
}

fn unknown(name: &str) -> UsageError {
    let names: Vec<&str> = COMMANDS.iter().map(|c| c.name).collect();
    UsageError(format!("unknown command {name:?}; expected one of: {}", names.join(", ")))
}

fn main() -> ExitCode {
    hermite_cs::init_thread_pool();
    let m = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if e.kind() == clap::error::ErrorKind::InvalidSubcommand => {
            let args: Vec<String> = std::env::args().skip(1).collect();
            let bad = args
                .iter()
                .enumerate()
                .find(|(i, a)| {
                    !a.starts_with('-') && (*i == 0 || !matches!(args[i - 1].as_str(), "--config" | "--output" | "-o" | "--format"))
                })
                .map(|(_, a)| a.clone())
                .unwrap_or_default();
            eprintln!("error: {}", unknown(&bad));
            return ExitCode::from(USAGE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match execute(&m) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            // bad arguments that only the library can judge are still the caller's to fix
            let code = match e {
                Error::Argument(_) | Error::Domain(_) => USAGE,
                _ => FAILED,
            };
            ExitCode::from(code)
        }
    }
}
