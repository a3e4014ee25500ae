//! Certificates for individual specialization points.
//!
//! Usage: `cargo run --example certify_point -- 20/17 5`

use g2_monodromy::certify::{certify, Outcome, Rational};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let points: Vec<(String, u64)> = if args.len() == 2 {
        vec![(args[0].clone(), args[1].parse().expect("l must be an integer"))]
    } else {
        ["20/17", "-14/17", "2", "3/17", "1/2"].iter().map(|s| (s.to_string(), 5)).collect()
    };
    for (s, ell) in points {
        let r: Rational = s.parse().expect("a rational number a/b");
        match certify(&r, ell) {
            Ok(Outcome::Certified(c)) => {
                println!("{s:>7}: certified with p = {}, q = {} (revalidates: {})", c.p, c.q, c.revalidate())
            }
            Ok(Outcome::Inconclusive(i)) => println!("{s:>7}: inconclusive {:?}", i.failures),
            Err(e) => println!("{s:>7}: {e}"),
        }
    }
}
