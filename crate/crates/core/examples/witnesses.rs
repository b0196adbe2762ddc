//! Regenerates the witness files behind the catalog.
//!
//! ```text
//! cargo run --release --example witnesses -- [--dir DIR] [--only n,k,r] [--scale F] [--slack S]
//! ```
//!
//! Existing files that verify at or below the target size are kept. Each
//! missing witness is tried by orbit search first, then by annealing with the
//! job's budget multiplied by `--scale`. `--slack` accepts witnesses up to that
//! many blocks above each target. The connected `(8,4,3)`, `(10,4,3)` and
//! `(12,4,3)` files are then assembled from the ones already on disk.

use std::path::PathBuf;
use std::time::Instant;

use ccover::construct::{assemble_cc12_3, extend_by_recursion};
use ccover::io::{read_design, write_design, DesignFile};
use ccover::orbits::orbit_search_any;
use ccover::solver::{local_search, SearchConfig};
use ccover::verify::verify_family;
use ccover::CoverParams;

struct Job {
    n: usize,
    k: usize,
    r: usize,
    size: usize,
    connected: bool,
    /// Annealing moves per restart.
    budget: u64,
    restarts: usize,
    /// Constant temperature; `None` keeps the default cooling schedule.
    temperature: Option<f64>,
}

const fn job(n: usize, k: usize, r: usize, size: usize, connected: bool, budget: u64) -> Job {
    Job { n, k, r, size, connected, budget, restarts: 1, temperature: None }
}

const fn hard(n: usize, k: usize, r: usize, size: usize, budget: u64, restarts: usize) -> Job {
    Job { n, k, r, size, connected: false, budget, restarts, temperature: Some(0.15) }
}

const JOBS: &[Job] = &[
    job(7, 4, 3, 12, true, 1_000_000),
    job(9, 4, 3, 28, true, 4_000_000),
    job(11, 4, 3, 55, true, 8_000_000),
    job(9, 5, 4, 34, true, 4_000_000),
    job(7, 3, 2, 7, false, 1_000_000),
    job(9, 3, 2, 12, false, 1_000_000),
    job(11, 3, 2, 19, false, 1_000_000),
    job(12, 3, 2, 24, false, 1_000_000),
    job(13, 3, 2, 26, false, 1_000_000),
    job(8, 4, 3, 14, false, 1_000_000),
    job(9, 4, 3, 25, false, 1_000_000),
    job(10, 4, 3, 30, false, 4_000_000),
    job(11, 4, 3, 47, false, 4_000_000),
    job(12, 4, 3, 57, false, 4_000_000),
    hard(13, 4, 3, 78, 60_000_000, 2),
    job(9, 5, 4, 30, false, 1_000_000),
    hard(10, 5, 4, 50, 200_000_000, 4),
    job(11, 5, 4, 66, false, 4_000_000),
    hard(12, 5, 4, 113, 200_000_000, 4),
    hard(13, 5, 4, 157, 200_000_000, 4),
    job(10, 6, 5, 50, false, 1_000_000),
    job(11, 6, 5, 100, false, 4_000_000),
    job(12, 6, 5, 132, false, 1_000_000),
    job(13, 6, 5, 245, false, 4_000_000),
    job(11, 7, 6, 84, false, 1_000_000),
    hard(12, 7, 6, 176, 200_000_000, 4),
    hard(13, 7, 6, 264, 200_000_000, 4),
    job(12, 8, 7, 126, false, 4_000_000),
    hard(13, 8, 7, 295, 200_000_000, 4),
    hard(13, 9, 8, 185, 200_000_000, 4),
];

fn file_name(j: &Job) -> String {
    format!("{}-{}-{}-{}.design", if j.connected { "cc" } else { "c" }, j.n, j.k, j.r)
}

fn existing_ok(path: &PathBuf, j: &Job, size: usize) -> bool {
    let Ok(file) = read_design(path) else { return false };
    verify_family(&file.family).is_ok_and(|rep| {
        (if j.connected { rep.is_connected_design() } else { rep.is_valid_design }) && file.family.len() <= size
    })
}

fn main() -> ccover::Result<()> {
    let mut dir = PathBuf::from(std::env::var("CCOVER_WITNESS_DIR").unwrap_or_else(|_| "witnesses".into()));
    let mut only: Option<(usize, usize, usize)> = None;
    let mut scale = 1.0f64;
    let mut slack = 0usize;
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--dir" => dir = PathBuf::from(args.next().expect("--dir needs a path")),
            "--only" => {
                let v: Vec<usize> = args
                    .next()
                    .expect("--only needs n,k,r")
                    .split(',')
                    .map(|x| x.parse().expect("integer"))
                    .collect();
                only = Some((v[0], v[1], v[2]));
            }
            "--scale" => scale = args.next().expect("--scale needs a number").parse().expect("number"),
            "--slack" => slack = args.next().expect("--slack needs a count").parse().expect("integer"),
            other => panic!("unknown argument {other}"),
        }
    }
    for j in JOBS {
        if only.is_some_and(|o| o != (j.n, j.k, j.r)) {
            continue;
        }
        let path = dir.join(file_name(j));
        let size = j.size + slack;
        if existing_ok(&path, j, size) {
            println!("{}: kept", file_name(j));
            continue;
        }
        let params = CoverParams::new(j.n, j.k, j.r)?;
        let t = Instant::now();
        let orbit = orbit_search_any(params, size, j.connected, 2_000_000)?;
        let (family, method) = if let Some(w) = orbit.witness {
            (Some(w), format!("orbit search under {}", orbit.group))
        } else {
            let mut cfg = SearchConfig {
                seed: 1,
                budget: (j.budget as f64 * scale) as u64,
                target_size: Some(size),
                require_connected: j.connected,
                restarts: j.restarts,
                verbose: true,
                ..SearchConfig::default()
            };
            if let Some(temp) = j.temperature {
                cfg.temp_hot = temp;
                cfg.temp_cold = temp;
            }
            let out = local_search(params, &cfg)?;
            (out.witness, format!("annealing, seed 1, {} moves", out.work))
        };
        match family {
            Some(f) => {
                let file = DesignFile::new(f).with_comment(format!(" {method}"));
                write_design(&path, &file)?;
                println!("{}: {} blocks by {method} in {:.1?}", file_name(j), file.family.len(), t.elapsed());
            }
            None => println!("{}: not found at size {size} in {:.1?}", file_name(j), t.elapsed()),
        }
    }
    derive_connected_triples(&dir)
}

/// `CC(n,3)` for even `n` from the file at `n - 1`.
fn derive_connected_triples(dir: &std::path::Path) -> ccover::Result<()> {
    let load = |name: &str| read_design(dir.join(name)).map(|f| f.family);
    let have = |name: &str| load(name).is_ok_and(|f| verify_family(&f).is_ok_and(|rep| rep.is_connected_design()));
    for n in [8, 10] {
        if have(&format!("cc-{n}-4-3.design")) {
            continue;
        }
        let (Ok(prev), Ok(sub)) = (load(&format!("cc-{}-4-3.design", n - 1)), load(&format!("c-{}-3-2.design", n - 1)))
        else {
            continue;
        };
        let fam = extend_by_recursion(&prev, &sub)?;
        let file = DesignFile::new(fam).with_comment(" recursion from the n - 1 connected covering");
        write_design(dir.join(format!("cc-{n}-4-3.design")), &file)?;
        println!("cc-{n}-4-3.design: {} blocks by recursion", file.family.len());
    }
    if have("cc-12-4-3.design") {
        return Ok(());
    }
    if let Ok(cc11) = load("cc-11-4-3.design") {
        let (fam, how) = assemble_cc12_3(&cc11)?;
        let file = DesignFile::new(fam).with_comment(format!(" assembled from cc-11-4-3: {how:?}"));
        write_design(dir.join("cc-12-4-3.design"), &file)?;
        println!("cc-12-4-3.design: {} blocks ({how:?})", file.family.len());
    }
    Ok(())
}
