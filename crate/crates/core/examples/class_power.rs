//! An element h of G2(5) with h ginf h^-1 = ginf^p, and how it permutes the
//! eigenlines of ginf.

use g2_monodromy::g2::build_group;
use g2_monodromy::monodromy::{build_triple, solve_h_inf_p};

fn main() {
    let g = build_group(5).unwrap();
    let t = build_triple(&g, 42, 1_000_000, 1).unwrap();
    for p in [3u64, 17, 19, 2] {
        match solve_h_inf_p(&t, p) {
            Ok(s) => println!(
                "p = {p:>2}: transport {:?}, orientation {:+}, rational coset size {}",
                s.transport, s.orientation, s.rational_solutions
            ),
            Err(e) => println!("p = {p:>2}: {e}"),
        }
    }
}
