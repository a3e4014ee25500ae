//! G2(l) as the stabilizer of a quadratic and a trilinear form: form spaces,
//! parabolic flags and random members.

use g2_monodromy::g2::build_group;
use g2_monodromy::linalg::{invariant_forms, FormKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for ell in [5u64, 13, 17, 29] {
        let g = build_group(ell).unwrap();
        let gens = g.generator_mats();
        let sym = invariant_forms(g.ctx(), 7, &gens, FormKind::Sym2).len();
        let alt = invariant_forms(g.ctx(), 7, &gens, FormKind::Alt3).len();
        let mut rng = ChaCha8Rng::seed_from_u64(ell);
        let members = (0..100).filter(|_| g.is_member(&g.random_element(&mut rng))).count();
        println!("{g}\n  form spaces: sym2 {sym}, alt3 {alt}; random members: {members}/100");
    }
    let g = build_group(5).unwrap();
    for f in g.parabolic_flags() {
        println!("  {} {:<12} stabilizes <e1..e{}>: {}", f.parabolic, f.generator, f.flag_dim, f.pass);
    }
}
