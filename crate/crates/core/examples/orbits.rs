//! Coverings invariant under a prescribed permutation group: the search space shrinks to orbits.
//!
//! ```text
//! cargo run --release --example orbits -- 12 6 5 132
//! ```

use ccover::orbits::{candidate_groups, orbit_search, PermutationGroup};
use ccover::CoverParams;

fn main() -> ccover::Result<()> {
    let v: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (n, k, r, cap) = match v[..] {
        [n, k, r, cap] => (n, k, r, cap),
        _ => (7, 3, 2, 7),
    };
    let params = CoverParams::new(n, k, r)?;
    let cyclic = PermutationGroup::cycle_power(n, n, 1)?;
    println!("{} has order {:?}", cyclic.name(), cyclic.order(1 << 16));

    for group in candidate_groups(n) {
        let out = orbit_search(params, &group, cap, false, 1_000_000)?;
        let found = out.witness.as_ref().map(|w| w.len());
        println!("{:<24} nodes {:>8} truncated {:<5} found {found:?}", group.name(), out.nodes, out.truncated);
        if found.is_some() {
            break;
        }
    }
    Ok(())
}
