//! Submodules of F_5^7 under <ginf, h> and the effect of adding g1.

use g2_monodromy::g2::build_group;
use g2_monodromy::modstruct::{eigen_split, exclusion_report, h_module_analysis, spin, Module};
use g2_monodromy::monodromy::{build_triple, solve_h_inf_p};

fn main() {
    let g = build_group(5).unwrap();
    let t = build_triple(&g, 42, 1_000_000, 1).unwrap();
    let h = solve_h_inf_p(&t, 3).unwrap().h;

    let (v1, v2) = eigen_split(&t.ginf).unwrap();
    println!("dim V1 = {}, dim V2 = {}", v1.dim(), v2.dim());
    let acting = Module::new(vec![t.ginf.clone(), h.clone()]);
    let v = v2.basis()[0].clone();
    println!("spin of a vector of V2 under <ginf, h>: dim {}", spin(&[v], &acting).dim());

    let report = h_module_analysis(&t.ginf, &[t.ginf.clone(), h], &t.g1).unwrap();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    let ex = exclusion_report(&t.module(), &g).unwrap();
    for row in &ex.rows {
        println!("  {:<32} excluded: {:<5} {}", row.subgroup_type, row.excluded, row.witness);
    }
    println!("generates: {}", ex.generates);
}
