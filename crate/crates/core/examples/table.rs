//! The `CC(n,r)` table with provenance, compared with the published grid.
//!
//! ```text
//! cargo run --release --example table -- 14
//! ```

use ccover::catalog::Catalog;
use ccover::table::{compute_table, render_text, Match};

fn main() -> ccover::Result<()> {
    let n_max = std::env::args().nth(1).map_or(14, |a| a.parse().expect("integer argument"));
    let cat = Catalog::open_default()?;
    let rep = compute_table(&cat, n_max)?;
    print!("{}", render_text(&rep));
    if let Some(c) = rep.cell(7, 3) {
        println!("\n(7,3): lower via {:?}, upper via {:?}", c.lower.sources, c.upper.sources);
    }
    let tighter: Vec<_> = rep.cells.iter().filter(|c| c.matched == Some(Match::WithinInterval)).map(|c| (c.n, c.r)).collect();
    println!("tighter than published: {tighter:?}");
    Ok(())
}
