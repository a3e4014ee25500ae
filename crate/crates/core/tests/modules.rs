use std::sync::OnceLock;

use g2_monodromy::ff::{FieldCtx, Fq};
use g2_monodromy::g2::build_group;
use g2_monodromy::linalg::{kernel, Mat};
use g2_monodromy::modstruct::{
    eigen_split, exclusion_report, h_module_analysis, is_absolutely_irreducible, is_irreducible, spin, Module,
};
use g2_monodromy::monodromy::{build_triple, solve_h_inf_p, MonodromyTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn triple5() -> &'static MonodromyTriple {
    static T: OnceLock<MonodromyTriple> = OnceLock::new();
    T.get_or_init(|| build_triple(&build_group(5).unwrap(), 42, 1_000_000, 1).unwrap())
}

/// Irreducible iff every nonzero vector spins to the whole space; checks one
/// representative per line.
fn exhaustive_irreducible(m: &Module) -> bool {
    let ctx = m.ctx();
    let (ell, n) = (ctx.ell(), m.dim());
    let total = ell.pow(n as u32);
    (1..total)
        .filter_map(|code| {
            let digits: Vec<u64> = (0..n).map(|i| code / ell.pow(i as u32) % ell).collect();
            // first nonzero coordinate equal to 1
            (digits.iter().find(|&&d| d != 0) == Some(&1)).then_some(digits)
        })
        .all(|d| {
            let v: Vec<Fq> = d.iter().map(|&x| ctx.from_u64(x)).collect();
            spin(&[v], m).dim() == n
        })
}

fn random_reducible(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Module {
    let x = Mat::random_invertible(ctx, 7, rng);
    let block = |rng: &mut ChaCha8Rng| {
        let mut a = Mat::random_invertible(ctx, 7, rng);
        for r in 3..7 {
            for c in 0..3 {
                a.set(r, c, ctx.zero());
            }
        }
        a
    };
    let gens = (0..2).map(|_| block(rng).conjugate_by(&x).unwrap()).collect();
    Module::new(gens)
}

#[test]
fn meataxe_agrees_with_exhaustive_search() {
    let g = build_group(5).unwrap();
    let ctx = g.ctx().clone();
    let t = triple5();
    let h = solve_h_inf_p(t, 3).unwrap().h;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = vec![
        t.module(),
        Module::new(vec![t.ginf.clone()]),
        Module::new(vec![t.ginf.clone(), h.clone()]),
        Module::new(vec![t.g1.clone(), t.ginf.clone(), h]),
        Module::new(g.generator_mats()),
        Module::new(g.generator_mats()[..2].to_vec()),
        Module::new(vec![g.random_element(&mut rng), g.random_element(&mut rng)]),
    ];
    for _ in 0..3 {
        cases.push(random_reducible(&ctx, &mut rng));
    }
    let verdicts: Vec<bool> = cases.iter().map(|m| is_irreducible(m).unwrap()).collect();
    for (m, v) in cases.iter().zip(&verdicts) {
        assert_eq!(*v, exhaustive_irreducible(m));
    }
    assert_eq!(verdicts[..6], [true, false, false, true, true, false]);
    assert!(verdicts[7..].iter().all(|v| !v));
}

#[test]
fn triple_module_is_absolutely_irreducible() {
    assert!(is_absolutely_irreducible(&triple5().module()).unwrap());
}

#[test]
fn ginf_alone_does_not_pass_the_battery() {
    let t = triple5();
    let rep = exclusion_report(&Module::new(vec![t.ginf.clone()]), &t.group).unwrap();
    let parabolic = rep.rows.iter().find(|r| r.subgroup_type == "parabolic P_alpha").unwrap();
    assert!(!parabolic.excluded);
    assert!(!rep.generates);
    assert!(rep.membership);

    let full = exclusion_report(&t.module(), &t.group).unwrap();
    assert!(full.generates && full.rows.iter().all(|r| r.excluded));
    let json = serde_json::to_value(&full.rows).unwrap();
    assert_eq!(json[0]["subgroup_type"], "parabolic P_alpha");
    assert!(json[0]["excluded"].as_bool().unwrap());
}

#[test]
fn fixed_line_and_v2_spins() {
    let t = triple5();
    let (v1, v2) = eigen_split(&t.ginf).unwrap();
    let only_ginf = Module::new(vec![t.ginf.clone()]);
    assert_eq!(spin(v1.basis(), &only_ginf), v1);
    assert_eq!(kernel(&t.ginf.shift(t.group.ctx().one())), v1);

    let h = solve_h_inf_p(t, 3).unwrap().h;
    let acting = Module::new(vec![t.ginf.clone(), h]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ctx = t.group.ctx();
    for _ in 0..20 {
        let coeffs: Vec<Fq> = (0..6).map(|_| ctx.random(&mut rng)).collect();
        if coeffs.iter().all(Fq::is_zero) {
            continue;
        }
        let v: Vec<Fq> = (0..7)
            .map(|i| coeffs.iter().zip(v2.basis()).fold(ctx.zero(), |acc, (&c, b)| ctx.add(acc, ctx.mul(c, b[i]))))
            .collect();
        assert_eq!(spin(&[v], &acting), v2);
    }
}

#[test]
fn indecomposable_once_g1_joins() {
    let t = triple5();
    let h = solve_h_inf_p(t, 3).unwrap().h;
    let r = h_module_analysis(&t.ginf, &[t.ginf.clone(), h.clone()], &t.g1).unwrap();
    assert_eq!(r.verdict, "indecomposable");
    assert_eq!(r.commutant_dim, 1);

    let id = Mat::identity(t.group.ctx(), 7);
    let trivial = h_module_analysis(&t.ginf, std::slice::from_ref(&id), &t.g1).unwrap();
    assert!(trivial.v1_invariant && trivial.v2_invariant);
    assert_ne!(trivial.verdict, "indecomposable");
}
