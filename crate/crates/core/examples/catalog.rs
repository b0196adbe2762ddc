//! Covering-number knowledge: closed forms, stated values, witnesses and registration.
//!
//! ```text
//! cargo run --example catalog
//! ```

use ccover::catalog::{embedded_table, Catalog};
use ccover::construct::construct_r2;

fn main() -> ccover::Result<()> {
    let cat = Catalog::open_default()?;
    println!("{} witness files loaded, {} rejected", cat.witnesses().count(), cat.rejected().len());
    for (n, k, r) in [(9, 3, 2), (13, 9, 8), (10, 7, 6), (12, 6, 5), (11, 4, 3)] {
        let e = cat.covering_number(n, k, r)?;
        println!("C({n},{k},{r}) {:?}  lower {:?}  upper {:?}", e.status, e.lower_sources, e.upper_sources);
    }
    let t = cat.turan_number(9, 4, 3)?;
    println!("T(9,4,3) = C({},{},{}) {:?}", t.n, t.k, t.r, t.status);
    println!("embedded literature lower bounds: {}", embedded_table().len());

    let scratch = std::env::temp_dir().join("ccover-catalog-example");
    std::fs::create_dir_all(&scratch)?;
    let mut fresh = Catalog::open(&scratch)?;
    let params = ccover::CoverParams::new(8, 3, 2)?;
    let entry = fresh.register_witness(&construct_r2(8)?, true)?;
    println!("registered a connected (8,3,2) witness; plain C(8,3,2) stays {:?}", entry.status);
    println!("reloaded connected upper: {:?}", Catalog::open(&scratch)?.connected_upper(params));
    Ok(())
}
