//! Seeded local search for a connected covering, then an exhaustive certificate on a tiny case.
//!
//! ```text
//! cargo run --release --example search -- 9 4 3 28
//! ```

use ccover::solver::{exhaustive_min, local_search, lower_bound, SearchConfig};
use ccover::CoverParams;

fn main() -> ccover::Result<()> {
    let v: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (n, k, r, target) = match v[..] {
        [n, k, r, t] => (n, k, r, Some(t)),
        [n, k, r] => (n, k, r, None),
        _ => (7, 4, 3, Some(12)),
    };
    let params = CoverParams::new(n, k, r)?;
    println!("{params}: connected lower bound {}", lower_bound(params, true));
    let cfg = SearchConfig {
        seed: 7,
        budget: 4_000_000,
        target_size: target,
        require_connected: true,
        ..SearchConfig::default()
    };
    let out = local_search(params, &cfg)?;
    match &out.witness {
        Some(w) => println!("found {} blocks after {} moves ({:?})", w.len(), out.work, out.status),
        None => println!("nothing at the target after {} moves", out.work),
    }

    let tiny = CoverParams::new(6, 4, 3)?;
    let cert = exhaustive_min(tiny, true, 10)?;
    let size = cert.witness.as_ref().map(|w| w.len());
    println!("{tiny}: connected minimum {size:?} certified after {} nodes", cert.work);
    Ok(())
}
