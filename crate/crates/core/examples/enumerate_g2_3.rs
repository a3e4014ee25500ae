//! Exhaustive closure of the generator set over F_3 (build with `--release`).

use std::time::Instant;

use g2_monodromy::g2::{build_group, enumerate};

fn main() {
    let g = build_group(3).unwrap();
    let start = Instant::now();
    let n = enumerate(&g).unwrap();
    println!("|<generators>| = {n}, formula = {}, {:.1?}", g.order(), start.elapsed());
}
