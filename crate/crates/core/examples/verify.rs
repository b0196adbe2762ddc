//! Verifies a design file (or a small built-in family) and prints its block graph.
//!
//! ```text
//! cargo run --example verify -- witnesses/cc-7-4-3.design
//! ```

use ccover::io::read_design;
use ccover::verify::{block_graph, connectivity, dual_adjacency_preserved, dualize, verify_family};
use ccover::{Block, CoverParams, DesignFamily};

fn main() -> ccover::Result<()> {
    let fam = match std::env::args().nth(1) {
        Some(path) => read_design(path)?.family,
        None => {
            // A valid covering whose block graph has three components.
            let blocks = [[1, 2, 3], [1, 2, 4], [3, 4, 5], [3, 4, 6], [1, 5, 6], [2, 5, 6]];
            let blocks = blocks.iter().map(|b| Block::new(b)).collect::<ccover::Result<Vec<_>>>()?;
            DesignFamily::covering(CoverParams::new(6, 3, 2)?, blocks)?
        }
    };
    let rep = verify_family(&fam)?;
    println!("{}: {} blocks", fam.params(), fam.len());
    println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));

    let threshold = fam.params().adjacency_threshold().expect("valid threshold");
    let g = block_graph(&fam, threshold);
    println!("block graph: {} vertices, {} edges", g.vertex_count(), g.edge_count());
    println!("components: {:?}", connectivity(&g).sizes());

    let dual = dualize(&fam);
    println!("dual {} verifies: {}", dual.params(), verify_family(&dual)?.is_valid_design);
    if fam.cover_params().is_some_and(|p| p.k() == p.r() + 1) {
        println!("block graphs agree under complement: {}", dual_adjacency_preserved(&fam)?);
    }
    Ok(())
}
