//! Every bound on `CC(n,r)` for one cell, with the catalog feeding the recursive inputs.
//!
//! ```text
//! cargo run --example bounds -- 10 4
//! ```

use ccover::bounds::{self, BoundInputs, BoundRecord};
use ccover::catalog::Catalog;

fn main() -> ccover::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(10);
    let r = args.next().unwrap_or(4);
    let cat = Catalog::open_default()?;
    let c_upper = |n, k, r| cat.covering_number(n, k, r).ok().and_then(|e| e.upper());

    let inputs = BoundInputs {
        c_sub: (r >= 2).then(|| c_upper(n - 2, r - 1, r - 2)).flatten(),
        c_prev: c_upper(n - 1, r, r - 1),
        c_value: c_upper(n, r + 1, r),
        c_lower_prev: cat.covering_number(n - 1, r, r - 1).ok().map(|e| e.lower()),
        ..BoundInputs::default()
    };
    let record = BoundRecord::compute(n, r, &inputs)?;
    println!("{}", serde_json::to_string_pretty(&record).expect("serializable"));
    println!("best lower {:?}", record.best_lower());
    println!("best upper {:?}", record.best_upper());
    println!("second lower beats the first: {}", bounds::lower_threshold_holds(n, r)?);
    println!("ratios to C(n,r): {:?}", bounds::asymptotic_ratios(n, r, &record));
    Ok(())
}
