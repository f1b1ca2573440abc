use clap::{Parser, Subcommand, ValueEnum};
use nullscri::commands::{guess_csv, parse_list, peel, peel_csv, table};
use nullscri::registry::REGISTRY;
use nullscri::{exit_code, resolve, run_source, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nullscri", version, about = "Run asymptotics experiments and sweeps")]
struct Cli {
    /// Directory for report files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Multiplies every matching tolerance.
    #[arg(long = "tol-scale", global = true, default_value_t = 1.0)]
    tol_scale: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run configs given as paths, criterion numbers or registered names; `all` runs the registry.
    Run {
        #[arg(required = true)]
        configs: Vec<String>,
    },
    /// The exact RHS/LHS ratio table.
    Table {
        p_max: u32,
        ell_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
    /// c2 or c_log with the peeling classification per (p, l).
    Peel {
        /// `a`, `a,b,c` or `start:stop:step`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
    /// Sweep of the conjectured multiplier pattern (hypothesis).
    Guess { p_max: u32, n_max: u32 },
    /// The registered acceptance configs.
    List,
}

fn write_file(out: Option<&Path>, name: &str, text: &str) -> Result<(), String> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        std::fs::write(dir.join(name), text).map_err(|e| format!("cannot write {name}: {e}"))?;
    }
    Ok(())
}

fn run(configs: &[String], out: Option<&Path>, tol_scale: f64) -> i32 {
    let keys: Vec<String> = if configs.iter().any(|c| c == "all") { REGISTRY.iter().map(|e| e.file.to_string()).collect() } else { configs.to_vec() };
    let results: Vec<_> = keys.par_iter().map(|k| resolve(k).and_then(|src| run_source(&src, out, tol_scale))).collect();
    let mut code = EXIT_PASS;
    for (key, res) in keys.iter().zip(&results) {
        match res {
            Ok(o) => {
                let r = &o.report;
                let verdict = if r.pass() { "PASS" } else { "FAIL" };
                println!("{verdict} {} ({} rows, {} blocking failures)", r.name, r.rows.len(), r.blocking_failures());
                for row in r.rows.iter().filter(|x| !x.pass) {
                    let tag = if row.blocking { "" } else { " [non-blocking]" };
                    println!("  {}: target {} value {}{tag}", row.case, row.target, row.value);
                }
                if let Some((csv, man)) = &o.files {
                    println!("  wrote {} and {}", csv.display(), man.display());
                }
            }
            Err(e) => eprintln!("{key}: {e}"),
        }
        code = code.max(exit_code(res));
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start {} workers: {e}", cli.jobs);
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let code = pool.install(|| match &cli.command {
        Command::Run { configs } => run(configs, out, cli.tol_scale),
        Command::Table { p_max, ell_max, format } => match table(*p_max, *ell_max) {
            Ok(t) => {
                let (csv, text) = (t.table.to_csv(), t.table.to_text());
                match format {
                    Format::Csv => print!("{csv}"),
                    Format::Text => print!("{text}"),
                    Format::Both => print!("{csv}\n{text}"),
                }
                eprintln!("printed table: {}/{} entries match", t.matched, t.compared);
                let written = write_file(out, "ratio_table.csv", &csv).and_then(|_| write_file(out, "ratio_table.txt", &text));
                match written {
                    Err(e) => {
                        eprintln!("{e}");
                        EXIT_CONFIG
                    }
                    Ok(()) if t.matched == t.compared => EXIT_PASS,
                    Ok(()) => EXIT_FAIL,
                }
            }
            Err(e) => {
                eprintln!("{e}");
                EXIT_CONFIG
            }
        },
        Command::Peel { p, l } => match (parse_list(p), parse_list(l)) {
            (Ok(ps), Ok(ls)) => {
                let csv = peel_csv(&peel(&ps, &ls));
                print!("{csv}");
                match write_file(out, "peel.csv", &csv) {
                    Ok(()) => EXIT_PASS,
                    Err(e) => {
                        eprintln!("{e}");
                        EXIT_CONFIG
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                eprintln!("bad list: {e}");
                EXIT_CONFIG
            }
        },
        Command::Guess { p_max, n_max } => match guess_csv(*p_max, *n_max) {
            Ok((csv, all)) => {
                print!("{csv}");
                eprintln!("HYPOTHESIS: {}", if all { "pattern holds on every row" } else { "pattern fails on some rows" });
                match write_file(out, "guess.csv", &csv) {
                    Ok(()) => EXIT_PASS,
                    Err(e) => {
                        eprintln!("{e}");
                        EXIT_CONFIG
                    }
                }
            }
            Err(e) => {
                eprintln!("{e}");
                EXIT_CONFIG
            }
        },
        Command::List => {
            for e in &REGISTRY {
                let tag = if e.blocking { "" } else { " (non-blocking)" };
                println!("{:>2}  {:<30} {}{tag}", e.criterion, e.file, e.summary);
            }
            EXIT_PASS
        }
    });
    ExitCode::from(code as u8)
}
