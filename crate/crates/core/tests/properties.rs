use std::collections::BTreeMap;
use std::sync::OnceLock;

use g2_monodromy::certify::{certify, factor, valuation, Rational};
use g2_monodromy::ff::{make_field, FieldCtx, Fq};
use g2_monodromy::g2::{build_group, sym6_rep, GroupCtx};
use g2_monodromy::linalg::{jcf_signature, JcfSignature, Mat};
use g2_monodromy::modstruct::{orbit_span_dim, spin, Module};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f29() -> &'static FieldCtx {
    static F: OnceLock<FieldCtx> = OnceLock::new();
    F.get_or_init(|| FieldCtx::prime(29).unwrap())
}

fn g5() -> &'static GroupCtx {
    static G: OnceLock<GroupCtx> = OnceLock::new();
    G.get_or_init(|| build_group(5).unwrap())
}

/// Block-diagonal Jordan matrix from (eigenvalue, size) pairs.
fn jordan(ctx: &FieldCtx, blocks: &[(u64, usize)]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.1).sum();
    let mut m = Mat::zeros(ctx, n, n);
    let mut at = 0;
    for &(e, size) in blocks {
        for i in 0..size {
            m.set(at + i, at + i, ctx.from_u64(e));
            if i + 1 < size {
                m.set(at + i, at + i + 1, ctx.one());
            }
        }
        at += size;
    }
    m
}

fn blocks_strategy() -> impl Strategy<Value = Vec<(u64, usize)>> {
    prop::collection::vec((0u64..4, 1usize..4), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn jordan_signature_survives_conjugation(blocks in blocks_strategy(), seed in any::<u64>()) {
        let ctx = f29();
        let j = jordan(ctx, &blocks);
        let want = JcfSignature::new(blocks.iter().map(|&(e, s)| (ctx.from_u64(e), s)).collect());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Mat::random_invertible(ctx, j.rows(), &mut rng);
        let conj = j.conjugate_by(&x).unwrap();
        prop_assert_eq!(jcf_signature(&j).unwrap(), want.clone());
        prop_assert_eq!(jcf_signature(&conj).unwrap(), want);
    }

    #[test]
    fn products_of_members_are_members(seed in any::<u64>()) {
        let g = g5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = g.random_element(&mut rng);
        let b = g.random_element(&mut rng);
        prop_assert!(g.is_member(&a.mul(&b)));
        prop_assert!(g.is_member(&g.member_inverse(&a)));
        prop_assert!(g.member_inverse(&a).mul(&a).is_identity());
    }

    #[test]
    fn valuation_matches_factorization(num in -1_000_000i64..1_000_000, den in 1i64..1_000_000, p_idx in 0usize..8) {
        prop_assume!(num != 0);
        let p = [2u64, 3, 5, 7, 11, 13, 17, 31][p_idx];
        let r = Rational::new(num, den).unwrap();
        let exp = |n: &BigUint| -> i64 {
            let f = factor(n).unwrap();
            let m: BTreeMap<BigUint, u32> = f.0.into_iter().collect();
            m.get(&BigUint::from(p)).copied().unwrap_or(0) as i64
        };
        let want = exp(&r.num_abs()) - exp(r.den());
        prop_assert_eq!(valuation(&r, &BigUint::from(p)).unwrap(), want);
    }

    #[test]
    fn sym6_is_multiplicative(a in prop::array::uniform4(0u64..11), b in prop::array::uniform4(0u64..11)) {
        let ctx = FieldCtx::prime(11).unwrap();
        let m = |v: [u64; 4]| Mat::from_fn(&ctx, 2, 2, |i, j| ctx.from_u64(v[2 * i + j]));
        let (ma, mb) = (m(a), m(b));
        prop_assume!(!ma.det().is_zero() && !mb.det().is_zero());
        prop_assert_eq!(sym6_rep(&ma.mul(&mb)).unwrap(), sym6_rep(&ma).unwrap().mul(&sym6_rep(&mb).unwrap()));
    }

    #[test]
    fn certify_ignores_the_representative(a in -300i64..300, b in 1i64..300, k in 1i64..50) {
        prop_assume!(a != 0 && a != b);
        let s = Rational::new(a, b).unwrap();
        let scaled: Rational = format!("{}/{}", BigInt::from(a * k), b * k).parse().unwrap();
        prop_assert_eq!(certify(&s, 5).unwrap(), certify(&scaled, 5).unwrap());
    }

    #[test]
    fn spin_is_a_closure(seed in any::<u64>(), k in 1usize..3) {
        let g = g5();
        let ctx = g.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Module::new(vec![g.generator_mats()[0].clone(), g.generator_mats()[4].clone()]);
        let vs: Vec<Vec<Fq>> = (0..k).map(|_| (0..7).map(|_| ctx.random(&mut rng)).collect()).collect();
        let s = spin(&vs, &m);
        prop_assert!(m.generators.iter().all(|x| s.is_invariant(x)));
        prop_assert_eq!(spin(s.basis(), &m), s.clone());
        let wider = spin(&[vs.clone(), vec![(0..7).map(|_| ctx.random(&mut rng)).collect()]].concat(), &m);
        prop_assert!(wider.contains_subspace(&s));
    }

    #[test]
    fn orbit_dimension_counts_eigencomponents(mask in 1u8..128, seed in any::<u64>()) {
        let ext = make_field(29).unwrap();
        let z = ext.zeta();
        let g = Mat::diag(&ext, &(1..=7u64).map(|i| ext.pow_u64(z, i % 7)).collect::<Vec<_>>());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Fq> = (0..7)
            .map(|i| if mask >> i & 1 == 1 { ext.random_nonzero(&mut rng) } else { ext.zero() })
            .collect();
        prop_assert_eq!(orbit_span_dim(&v, &g).unwrap(), mask.count_ones() as usize);
    }
}
