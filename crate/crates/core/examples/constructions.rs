//! The explicit connected families, each verified and compared with its size formula.
//!
//! ```text
//! cargo run --example constructions
//! ```

use ccover::bounds;
use ccover::construct::{
    construct_kostochka, construct_mantel_dual, construct_n, construct_r2, gordon_covering, trivial_cases,
};
use ccover::verify::verify_family;
use ccover::DesignFamily;

fn report(label: &str, fam: &DesignFamily, formula: u64) -> ccover::Result<()> {
    let rep = verify_family(fam)?;
    println!(
        "{label:<28} {:<22} {:>5} blocks (formula {formula:>5}) valid {} connected {}",
        fam.params().to_string(),
        fam.len(),
        rep.is_valid_design,
        rep.is_connected
    );
    Ok(())
}

fn main() -> ccover::Result<()> {
    for (n, r) in [(9, 0), (9, 1), (9, 7), (9, 8)] {
        report("trivial", &trivial_cases(n, r)?, bounds::cc_lower(n, r).unwrap_or(1))?;
    }
    for n in [5, 9, 14] {
        report("triangle chain", &construct_r2(n)?, bounds::cc1_lower(n, 2)?.ceiling)?;
    }
    report("connector, n - r odd", &construct_n(7, 4, None)?, bounds::n_upper(7, 4, None)?)?;
    let sub = gordon_covering(8, 2)?;
    let size = sub.len() as u64;
    report("connector, n - r even", &construct_n(10, 4, Some(&sub))?, bounds::n_upper(10, 4, Some(size))?)?;
    for n in [7, 14] {
        report("cliques and a bridge", &construct_mantel_dual(n)?, bounds::mantel_cc(n)?)?;
    }
    for n in [8, 9, 12, 14] {
        let sys = construct_kostochka(n)?;
        let note = if sys.optimality_open { " (open)" } else { "" };
        report(&format!("Kostochka, dual{note}"), &sys.covering, bounds::kostochka_cc_upper(n)?)?;
    }
    Ok(())
}
