//! Command-line front end. Exit codes: 0 success, 1 domain failure (invalid design,
//! refused or failed target, table mismatch), 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ccover::bounds::{BoundInputs, BoundRecord};
use ccover::catalog::Catalog;
use ccover::construct::{
    construct_kostochka, construct_mantel_dual, construct_n, construct_r2, gordon_covering, trivial_cases,
};
use ccover::io::{read_design, write_design, DesignFile};
use ccover::solver::{exhaustive_min, local_search, lower_bound, SearchConfig};
use ccover::table::{compute_single, compute_table, render_csv, render_json, render_text};
use ccover::verify::{dual_adjacency_preserved, dualize, verify_family};
use ccover::{CoverParams, DesignFamily, Error};

#[derive(Parser)]
#[command(name = "ccover", version, about = "Connected covering designs toolkit")]
struct Cli {
    /// Witness directory (overrides CCOVER_WITNESS_DIR).
    #[arg(long, global = true)]
    witness_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Connector construction, any `2 <= r < n`.
    N,
    /// Triangle chain, `r = 2`.
    R2,
    /// Two cliques and a bridge, `r = n - 3`.
    Mantel,
    /// Kostochka systems, `r = n - 4`; writes the Turán system and its dual covering.
    Kostochka,
    /// `r` in `{0, 1, n-2, n-1}`.
    Trivial,
    /// Recursive `(n, r+1, r)` covering, not necessarily connected.
    Gordon,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every bound on CC(n,r), with catalog inputs filled in.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Builds a family and writes it as a design file.
    Construct {
        #[arg(long, value_enum, ignore_case = true)]
        method: Method,
        #[arg(long)]
        n: usize,
        /// Defaults to 2 for r2, n-3 for mantel and n-4 for kostochka.
        #[arg(long)]
        r: Option<usize>,
        /// Sub-covering `(n-2, r-1, r-2)` for the connector construction when `n - r` is even.
        #[arg(long)]
        sub: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Dual covering output for kostochka (default: `<out>.dual`).
        #[arg(long)]
        dual_out: Option<PathBuf>,
    },
    /// Checks a design file; exit 0 iff valid (and connected with --connected).
    Verify {
        file: PathBuf,
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bounds for every 0 <= r < n <= n_max, compared with the published grid up to 14.
    Table {
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Searches for a small (connected) (n,k,r)-covering.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        connected: bool,
        /// Proves minimality by exhaustion (tiny instances only).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stores the witness in the catalog directory.
        #[arg(long)]
        register: bool,
    },
    /// Complements every block: coverings become Turán systems and back.
    Dualize {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidParams(_) | Error::Io(_) => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn domain(msg: impl Into<String>) -> Failure {
    Failure(1, msg.into())
}

fn open_catalog(dir: Option<&Path>) -> Result<Catalog, Failure> {
    let cat = match dir {
        Some(d) if d.is_dir() => Catalog::open(d)?,
        Some(d) => return Err(Failure(2, format!("witness directory {} not found", d.display()))),
        None => Catalog::open_default()?,
    };
    for (file, why) in cat.rejected() {
        eprintln!("warning: skipped witness {file}: {why}");
    }
    Ok(cat)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn write_verified(path: &Path, fam: DesignFamily, comment: &str) -> Outcome {
    write_file(path, DesignFile::new(fam).with_comment(format!(" {comment}")))
}

fn write_file(path: &Path, file: DesignFile) -> Outcome {
    let rep = verify_family(&file.family)?;
    write_design(path, &file)?;
    let fam = &file.family;
    println!(
        "{}: {} blocks of {}, valid {}, connected {} ({} component(s))",
        path.display(),
        fam.len(),
        fam.params(),
        rep.is_valid_design,
        rep.is_connected,
        rep.component_count
    );
    if rep.is_valid_design {
        Ok(())
    } else {
        Err(domain("family failed verification"))
    }
}

fn cmd_bounds(cat: &Catalog, n: usize, r: usize, format: Format) -> Outcome {
    let upper = |n, k, r| cat.covering_number(n, k, r).ok().and_then(|e| e.upper());
    let mut inputs = BoundInputs::default();
    if r >= 2 && n >= 2 {
        inputs.c_sub = upper(n - 2, r - 1, r - 2);
    }
    if r >= 1 && n > r + 1 {
        inputs.c_prev = upper(n - 1, r, r - 1);
        inputs.c_lower_prev = cat.covering_number(n - 1, r, r - 1).ok().map(|e| e.lower());
        inputs.cc_prev = Some(compute_single(cat, n - 1, r)?.upper.value);
        inputs.c_chain = (r..n).map(|i| upper(i, r, r - 1)).collect();
    }
    if r < n {
        inputs.c_value = upper(n, r + 1, r);
    }
    let record = BoundRecord::compute(n, r, &inputs)?;
    let cell = compute_single(cat, n, r)?;
    match format {
        Format::Json => print_json(&json!({ "record": record, "cell": cell })),
        Format::Csv => return Err(Failure(2, "bounds supports text and json".into())),
        Format::Text => {
            println!("CC({n},{r})");
            let rat = |b: &Option<ccover::bounds::RationalBound>| {
                b.as_ref().map_or("n/a".to_owned(), |b| format!("{} -> {}", b.exact, b.ceiling))
            };
            println!("  lower cc1            {}", rat(&record.lower_cc1));
            println!("  lower cc2            {}", rat(&record.lower_cc2));
            let tagged = [
                ("lower schoenheim", &record.lower_schoenheim),
                ("lower schoenheim_step", &record.lower_schoenheim_step),
                ("upper S", &record.upper_s),
                ("upper N", &record.upper_n),
                ("upper recursive", &record.upper_recursive),
                ("upper sum", &record.upper_sum),
                ("upper 2C-1", &record.upper_2c_minus_1),
                ("upper mantel", &record.upper_mantel),
                ("upper kostochka", &record.upper_kostochka),
            ];
            for (label, t) in tagged {
                println!("  {label:<20} {}", t.as_ref().map_or("n/a".to_owned(), |t| t.value.to_string()));
            }
            let c = &cell;
            if c.exact {
                println!("  exact {} via {}", c.lower.value, c.upper.sources.join(", "));
            } else {
                println!(
                    "  best lower {} via {}; best upper {} via {}",
                    c.lower.value,
                    c.lower.sources.join(", "),
                    c.upper.value,
                    c.upper.sources.join(", ")
                );
            }
            println!(
                "  plain covering C({n},{},{r}) in [{}, {}]",
                r + 1,
                c.covering.lower,
                c.covering.upper.map_or("?".into(), |u| u.to_string())
            );
        }
    }
    Ok(())
}

fn cmd_construct(
    cat: &Catalog,
    method: Method,
    n: usize,
    r: Option<usize>,
    sub: Option<&Path>,
    out: &Path,
    dual_out: Option<&Path>,
) -> Outcome {
    let need_r = || r.ok_or_else(|| Failure(2, "--r is required for this method".into()));
    match method {
        Method::R2 => write_verified(out, construct_r2(n)?, "triangle chain"),
        Method::Mantel => write_verified(out, construct_mantel_dual(n)?, "two cliques and a bridge, dualized"),
        Method::Trivial => write_verified(out, trivial_cases(n, need_r()?)?, "trivial case"),
        Method::Gordon => {
            let r = need_r()?;
            write_verified(out, gordon_covering(n, r)?, "recursive pair construction")
        }
        Method::N => {
            let r = need_r()?;
            let sub_fam = if r >= 2 && n >= r + 2 && (n - r).is_multiple_of(2) {
                let fam = match sub {
                    Some(p) => read_design(p)?.family,
                    None => match cat.witness(CoverParams::new(n - 2, r - 1, r - 2)?, false) {
                        Some(w) => w.file.family.clone(),
                        None => gordon_covering(n - 2, r - 2)?,
                    },
                };
                Some(fam)
            } else {
                None
            };
            write_verified(out, construct_n(n, r, sub_fam.as_ref())?, "connector construction")
        }
        Method::Kostochka => {
            let sys = construct_kostochka(n)?;
            let note = if sys.optimality_open { ", optimality open" } else { "" };
            write_verified(out, sys.turan, &format!("Kostochka system{note}"))?;
            let dual = dual_out.map_or_else(|| PathBuf::from(format!("{}.dual", out.display())), Path::to_path_buf);
            write_verified(&dual, sys.covering, "dual of a Kostochka system")
        }
    }
}

fn cmd_verify(path: &Path, connected: bool, format: Format) -> Outcome {
    let file = read_design(path)?;
    let rep = verify_family(&file.family)?;
    match format {
        Format::Json => print_json(&rep),
        _ => {
            println!("{}: {} blocks of {}", path.display(), file.family.len(), file.family.params());
            println!("  valid: {}", rep.is_valid_design);
            if let Some(w) = rep.first_uncovered_witness {
                println!("  violation: {w}");
            }
            println!("  connected: {} ({} component(s), sizes {:?})", rep.is_connected, rep.component_count, rep.component_sizes);
        }
    }
    if !rep.is_valid_design {
        return Err(domain("not a valid design"));
    }
    if connected && !rep.is_connected {
        return Err(domain("design is not connected"));
    }
    Ok(())
}

fn cmd_table(cat: &Catalog, n_max: usize, format: Format) -> Outcome {
    let rep = compute_table(cat, n_max)?;
    match format {
        Format::Text => print!("{}", render_text(&rep)),
        Format::Json => println!("{}", render_json(&rep)),
        Format::Csv => print!("{}", render_csv(&rep)),
    }
    match rep.counts.mismatch {
        0 => Ok(()),
        m => Err(domain(format!("{m} cell(s) contradict the published table"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    cat: &mut Catalog,
    params: CoverParams,
    target: Option<usize>,
    seed: u64,
    budget: u64,
    connected: bool,
    exhaustive: bool,
    out: Option<&Path>,
    register: bool,
) -> Outcome {
    let mut floor = lower_bound(params, connected);
    if let Ok(e) = cat.covering_number(params.n(), params.k(), params.r()) {
        floor = floor.max(e.lower());
    }
    if let Some(t) = target {
        if (t as u64) < floor {
            return Err(domain(format!("target {t} is below the lower bound {floor}; refusing to search")));
        }
    }
    let outcome = if exhaustive {
        let cap = match target {
            Some(t) => t as u64,
            None if connected && params.k() == params.r() + 1 => compute_single(cat, params.n(), params.r())?.upper.value,
            None => {
                let plain = cat.covering_number(params.n(), params.k(), params.r())?.upper().unwrap_or(u64::MAX);
                if connected {
                    ccover::bounds::two_c_bound(plain)
                } else {
                    plain
                }
            }
        };
        let cap = usize::try_from(cap).unwrap_or(usize::MAX);
        exhaustive_min(params, connected, cap)?
    } else {
        let cfg = SearchConfig { seed, budget, target_size: target, require_connected: connected, ..SearchConfig::default() };
        local_search(params, &cfg)?
    };
    let status = serde_json::to_value(outcome.status).expect("enum");
    println!(
        "{params}{}: status {}, lower bound {}, work {}",
        if connected { " connected" } else { "" },
        status.as_str().unwrap_or(""),
        outcome.lower_bound_used,
        outcome.work
    );
    let Some(fam) = outcome.witness else {
        return Err(domain("no witness found"));
    };
    println!("  witness: {} blocks", fam.len());
    if exhaustive {
        println!("  minimum certified by exhaustion: {}", fam.len());
    }
    if let Some(p) = out {
        write_verified(p, fam.clone(), &format!("search seed {seed}"))?;
    }
    if register {
        let entry = cat.register_witness(&fam, connected)?;
        println!("  catalog now {:?}", entry.status);
    }
    Ok(())
}

fn cmd_dualize(path: &Path, out: &Path) -> Outcome {
    let file = read_design(path)?;
    let dual = dualize(&file.family);
    if let Some(p) = file.family.cover_params() {
        if p.k() == p.r() + 1 {
            println!("  block graphs isomorphic under complement: {}", dual_adjacency_preserved(&file.family)?);
        }
    }
    // Comments carry over unchanged so that dualizing twice restores the file.
    write_file(out, DesignFile { family: dual, comments: file.comments })
}

fn run(cli: Cli) -> Outcome {
    let dir = cli.witness_dir.as_deref();
    match cli.cmd {
        Cmd::Bounds { n, r, format } => cmd_bounds(&open_catalog(dir)?, n, r, format),
        Cmd::Construct { method, n, r, sub, out, dual_out } => {
            let r = r.or(match method {
                Method::R2 => Some(2),
                Method::Mantel => n.checked_sub(3),
                Method::Kostochka => n.checked_sub(4),
                _ => None,
            });
            cmd_construct(&open_catalog(dir)?, method, n, r, sub.as_deref(), &out, dual_out.as_deref())
        }
        Cmd::Verify { file, connected, format } => cmd_verify(&file, connected, format),
        Cmd::Table { n_max, format } => cmd_table(&open_catalog(dir)?, n_max, format),
        Cmd::Search { n, k, r, target, seed, budget, connected, exhaustive, out, register } => {
            let params = CoverParams::new(n, k, r)?;
            let mut cat = open_catalog(dir)?;
            cmd_search(&mut cat, params, target, seed, budget, connected, exhaustive, out.as_deref(), register)
        }
        Cmd::Dualize { file, out } => cmd_dualize(&file, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
