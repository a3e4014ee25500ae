//! Random search for a rigid triple with the prescribed local Jordan data,
//! its verification, and rigidity witnessed by a simultaneous conjugator.

use g2_monodromy::g2::build_group;
use g2_monodromy::linalg::simultaneous_conjugator;
use g2_monodromy::monodromy::{build_triple, rigidity_index, verify_triple, ClassData};

fn main() {
    let r = rigidity_index(&ClassData::target());
    println!("centralizer dimensions {:?}, sum {} (rigid: {})", r.centralizer_dims, r.index, r.rigid);

    let g = build_group(5).unwrap();
    let t = build_triple(&g, 42, 1_000_000, 1).unwrap();
    println!("found after {} trials", t.trials);
    let report = verify_triple(&t).unwrap();
    for c in &report.checks {
        println!("  {:<24} {}", c.name, c.pass);
    }
    println!("verdict: {}", report.verdict);

    let other = build_triple(&g, 7, 1_000_000, 1).unwrap();
    let a = [t.g0.clone(), t.g1.clone(), t.ginf.clone()];
    let b = [other.g0.clone(), other.g1.clone(), other.ginf.clone()];
    println!("seeds 42 and 7 simultaneously conjugate: {}", simultaneous_conjugator(&a, &b).is_some());
}
