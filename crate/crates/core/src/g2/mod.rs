//! G2(l) inside GL7(F_l) as the stabilizer of a symmetric bilinear form and an
//! alternating trilinear (Dickson) form.

mod enumerate;

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certify::factor::{factor, Factorization};
use crate::ff::{FieldCtx, FieldError, Fq};
use crate::linalg::{
    invariant_forms, FormKind, LinalgError, Mat, Subspace, SymmetricForm, TrilinearForm,
};

pub use enumerate::{enumerate, enumerate_subgroup};

pub const DIM: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum G2Error {
    #[error("characteristic {0} is not supported")]
    UnsupportedCharacteristic(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invariant {kind} forms span a {dim}-dimensional space, expected 1")]
    FormSpaceNotOneDimensional { kind: &'static str, dim: usize },
    #[error("torus parameters must be nonzero")]
    ZeroTorusParameter,
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("singular input matrix")]
    SingularInput,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<FieldError> for G2Error {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::NotPrime(l) => G2Error::NotPrime(l),
            FieldError::UnsupportedCharacteristic(l) => G2Error::UnsupportedCharacteristic(l),
            other => G2Error::Linalg(LinalgError::Field(other)),
        }
    }
}

/// `l^6 (l^6 - 1) (l^2 - 1)`.
pub fn group_order(ell: u64) -> BigUint {
    let l = BigUint::from(ell);
    let l2 = &l * &l;
    let l6 = l2.pow(3);
    &l6 * (&l6 - 1u32) * (&l2 - 1u32)
}

/// Root element for the short simple root.
pub fn x_alpha(ctx: &FieldCtx) -> Mat {
    unipotent(ctx, &[(0, 1, 1), (2, 3, 1), (2, 4, -1), (3, 4, -2), (5, 6, -1)])
}

/// Root element for the long simple root.
pub fn x_beta(ctx: &FieldCtx) -> Mat {
    unipotent(ctx, &[(1, 2, 1), (4, 5, -1)])
}

fn unipotent(ctx: &FieldCtx, entries: &[(usize, usize, i64)]) -> Mat {
    let mut m = Mat::identity(ctx, DIM);
    for &(i, j, v) in entries {
        m.set(i, j, ctx.from_i64(v));
    }
    m
}

/// The antidiagonal reversal `e_i <-> e_(8-i)`.
pub fn reversal(ctx: &FieldCtx) -> Mat {
    Mat::from_fn(ctx, DIM, DIM, |i, j| if i + j == DIM - 1 { ctx.one() } else { ctx.zero() })
}

/// Root element of the opposite root subgroup: `x` conjugated by the reversal.
/// It is lower triangular with the mirrored support of `x`.
pub fn opposite(x: &Mat) -> Mat {
    let r = reversal(x.ctx());
    r.mul(x).mul(&r)
}

/// `diag(t1, t2, t1/t2, 1, t2/t1, 1/t2, 1/t1)`.
pub fn torus_diag(ctx: &FieldCtx, t1: Fq, t2: Fq) -> Result<Mat, G2Error> {
    let i1 = ctx.inv(t1).map_err(|_| G2Error::ZeroTorusParameter)?;
    let i2 = ctx.inv(t2).map_err(|_| G2Error::ZeroTorusParameter)?;
    let d = [t1, t2, ctx.mul(t1, i2), ctx.one(), ctx.mul(t2, i1), i2, i1];
    Ok(Mat::diag(ctx, &d))
}

/// Smallest primitive root modulo `ell`.
pub fn primitive_root(ell: u64) -> u64 {
    let ctx = FieldCtx::prime(ell).expect("prime");
    ctx.primitive_element().constant() as u64
}

#[derive(Clone, Debug)]
pub struct NamedMat {
    pub name: &'static str,
    pub mat: Mat,
}

#[derive(Clone, Debug)]
pub struct GroupCtx {
    ctx: FieldCtx,
    gamma: u64,
    generators: Vec<NamedMat>,
    b: SymmetricForm,
    b_inv: Mat,
    f: TrilinearForm,
    order: BigUint,
    order_factors: Factorization,
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G2({}) of order {} = {}", self.ell(), self.order, self.order_factors)
    }
}

/// Constructs the generator set and solves for the invariant forms.
pub fn build_group(ell: u64) -> Result<GroupCtx, G2Error> {
    if ell == 2 || ell == 7 {
        return Err(G2Error::UnsupportedCharacteristic(ell));
    }
    let ctx = FieldCtx::prime(ell)?;
    let gamma = ctx.primitive_element();
    let xa = x_alpha(&ctx);
    let xb = x_beta(&ctx);
    let generators = vec![
        NamedMat { name: "x_alpha", mat: xa.clone() },
        NamedMat { name: "x_beta", mat: xb.clone() },
        NamedMat { name: "x_-alpha", mat: opposite(&xa) },
        NamedMat { name: "x_-beta", mat: opposite(&xb) },
        NamedMat { name: "t(gamma,1)", mat: torus_diag(&ctx, gamma, ctx.one())? },
        NamedMat { name: "t(1,gamma)", mat: torus_diag(&ctx, ctx.one(), gamma)? },
    ];
    let mats: Vec<Mat> = generators.iter().map(|g| g.mat.clone()).collect();
    let sym = invariant_forms(&ctx, DIM, &mats, FormKind::Sym2);
    if sym.len() != 1 {
        return Err(G2Error::FormSpaceNotOneDimensional { kind: "sym2", dim: sym.len() });
    }
    let alt = invariant_forms(&ctx, DIM, &mats, FormKind::Alt3);
    if alt.len() != 1 {
        return Err(G2Error::FormSpaceNotOneDimensional { kind: "alt3", dim: alt.len() });
    }
    let order = group_order(ell);
    let order_factors = factor(&order).expect("group orders factor by trial division");
    let b = SymmetricForm::from_coords(&ctx, DIM, &sym[0]);
    Ok(GroupCtx {
        b_inv: b.matrix.inverse()?,
        b,
        f: TrilinearForm::from_coords(DIM, &alt[0]),
        ctx,
        gamma: gamma.constant() as u64,
        generators,
        order,
        order_factors,
    })
}

impl GroupCtx {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ell(&self) -> u64 {
        self.ctx.ell()
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn generators(&self) -> &[NamedMat] {
        &self.generators
    }

    pub fn generator_mats(&self) -> Vec<Mat> {
        self.generators.iter().map(|g| g.mat.clone()).collect()
    }

    pub fn generator(&self, name: &str) -> Option<&Mat> {
        self.generators.iter().find(|g| g.name == name).map(|g| &g.mat)
    }

    pub fn bilinear(&self) -> &SymmetricForm {
        &self.b
    }

    pub fn trilinear(&self) -> &TrilinearForm {
        &self.f
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_factors(&self) -> &Factorization {
        &self.order_factors
    }

    pub fn torus_element(&self, t1: u64, t2: u64) -> Result<Mat, G2Error> {
        torus_diag(&self.ctx, self.ctx.from_u64(t1), self.ctx.from_u64(t2))
    }

    /// True iff `m` is a 7x7 matrix over this prime field preserving both forms.
    pub fn is_member(&self, m: &Mat) -> bool {
        m.ctx() == &self.ctx
            && m.rows() == DIM
            && m.is_square()
            && self.b.is_invariant(m)
            && self.f.is_invariant(m)
    }

    /// Inverse of a member through the bilinear form: `B^-1 M^T B`.
    pub fn member_inverse(&self, m: &Mat) -> Mat {
        self.b_inv.mul(&m.transpose()).mul(&self.b.matrix)
    }

    /// Multiplicative order of a member, which divides the group order.
    pub fn element_order(&self, m: &Mat) -> BigUint {
        let mut ord = self.order.clone();
        for (p, _) in &self.order_factors.0 {
            while (&ord % p) == BigUint::from(0u32) && m.pow(&(&ord / p)).is_identity() {
                ord /= p;
            }
        }
        ord
    }

    /// Fresh product-replacement sampler seeded from `rng`.
    pub fn sampler<R: Rng + ?Sized>(&self, rng: &mut R) -> ProductReplacement {
        ProductReplacement::new(self, rng)
    }

    /// One random member from a freshly burnt-in sampler.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        self.sampler(rng).next(self, rng)
    }

    pub fn parabolic_flags(&self) -> Vec<FlagCheck> {
        parabolic_flags(self)
    }
}

const SLOTS: usize = 10;
const BURN_IN: usize = 50;

/// Product-replacement random walk on generating tuples.
#[derive(Clone, Debug)]
pub struct ProductReplacement {
    slots: Vec<Mat>,
}

impl ProductReplacement {
    pub fn new<R: Rng + ?Sized>(g: &GroupCtx, rng: &mut R) -> Self {
        let gens = g.generator_mats();
        let slots = (0..SLOTS).map(|i| gens[i % gens.len()].clone()).collect();
        let mut pr = ProductReplacement { slots };
        for _ in 0..BURN_IN {
            pr.step(g, rng);
        }
        pr
    }

    fn step<R: Rng + ?Sized>(&mut self, g: &GroupCtx, rng: &mut R) -> usize {
        let i = rng.gen_range(0..SLOTS);
        let mut j = rng.gen_range(0..SLOTS - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen::<bool>() {
            self.slots[j].clone()
        } else {
            g.member_inverse(&self.slots[j])
        };
        self.slots[i] = if rng.gen::<bool>() { self.slots[i].mul(&other) } else { other.mul(&self.slots[i]) };
        i
    }

    pub fn next<R: Rng + ?Sized>(&mut self, g: &GroupCtx, rng: &mut R) -> Mat {
        let i = self.step(g, rng);
        self.slots[i].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagCheck {
    pub parabolic: &'static str,
    pub generator: String,
    pub flag_dim: usize,
    pub pass: bool,
}

/// Checks that each generator of the two maximal parabolics stabilizes its
/// coordinate flag: `<e1, e2>` for the alpha parabolic, `<e1, e2, e3>` for beta.
pub fn parabolic_flags(g: &GroupCtx) -> Vec<FlagCheck> {
    let ctx = &g.ctx;
    let gen = |n: &str| g.generator(n).expect("generator").clone();
    let torus = [("t(gamma,1)", gen("t(gamma,1)")), ("t(1,gamma)", gen("t(1,gamma)"))];
    let sets: [(&'static str, usize, Vec<(&str, Mat)>); 2] = [
        ("P_alpha", 2, vec![("x_alpha", gen("x_alpha")), ("x_-alpha", gen("x_-alpha")), ("x_beta", gen("x_beta"))]),
        ("P_beta", 3, vec![("x_alpha", gen("x_alpha")), ("x_beta", gen("x_beta")), ("x_-beta", gen("x_-beta"))]),
    ];
    let mut out = Vec::new();
    for (name, k, roots) in sets {
        let flag = Subspace::coordinate(ctx, DIM, k);
        for (gname, m) in torus.iter().cloned().chain(roots) {
            out.push(FlagCheck {
                parabolic: name,
                generator: gname.to_string(),
                flag_dim: k,
                pass: flag.is_invariant(&m),
            });
        }
    }
    out
}

/// Stabilization check for an arbitrary matrix against a coordinate flag.
pub fn stabilizes_flag(m: &Mat, k: usize) -> bool {
    Subspace::coordinate(m.ctx(), m.rows(), k).is_invariant(m)
}

/// Action of `A = [[a, b], [c, d]]` on binary sextics,
/// `P(X, Y) -> P(aX + cY, bX + dY)`, on the basis `X^6, X^5 Y, ..., Y^6`.
/// With this convention the map is a homomorphism.
pub fn sym6_rep(a: &Mat) -> Result<Mat, G2Error> {
    if a.rows() != 2 || !a.is_square() {
        return Err(G2Error::Linalg(LinalgError::DimensionMismatch("expected a 2x2 matrix".into())));
    }
    if a.det().is_zero() {
        return Err(G2Error::SingularInput);
    }
    let ctx = a.ctx();
    let (aa, bb, cc, dd) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    // binary forms as coefficient vectors indexed by the power of Y
    let mul = |p: &[Fq], q: &[Fq]| {
        let mut out = vec![ctx.zero(); p.len() + q.len() - 1];
        for (i, &x) in p.iter().enumerate() {
            for (j, &y) in q.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
        out
    };
    let power = |p: &[Fq], e: usize| (0..e).fold(vec![ctx.one()], |acc, _| mul(&acc, p));
    let x_img = [aa, cc];
    let y_img = [bb, dd];
    let mut m = Mat::zeros(ctx, 7, 7);
    for k in 0..7 {
        let img = mul(&power(&x_img, 6 - k), &power(&y_img, k));
        for (r, &c) in img.iter().enumerate() {
            m.set(r, k, c);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jcf_signature, JcfSignature};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders() {
        assert_eq!(group_order(5), BigUint::from(5_859_000_000u64));
        assert_eq!(group_order(3), BigUint::from(4_245_696u64));
        let g = build_group(5).unwrap();
        assert_eq!(g.order_factors().to_string(), "2^6 * 3^3 * 5^6 * 7 * 31");
        assert_eq!(build_group(2).unwrap_err(), G2Error::UnsupportedCharacteristic(2));
        assert_eq!(build_group(7).unwrap_err(), G2Error::UnsupportedCharacteristic(7));
        assert_eq!(build_group(9).unwrap_err(), G2Error::NotPrime(9));
    }

    #[test]
    fn torus_examples() {
        let g = build_group(5).unwrap();
        let ctx = g.ctx();
        let d = |xs: &[u64]| Mat::diag(ctx, &xs.iter().map(|&x| ctx.from_u64(x)).collect::<Vec<_>>());
        assert_eq!(g.torus_element(2, 3).unwrap(), d(&[2, 3, 4, 1, 4, 2, 3]));
        assert!(g.torus_element(1, 1).unwrap().is_identity());
        assert_eq!(g.gamma(), 2);
        assert_eq!(g.torus_element(2, 1).unwrap(), d(&[2, 1, 2, 1, 3, 1, 3]));
        assert_eq!(g.torus_element(0, 1).unwrap_err(), G2Error::ZeroTorusParameter);
        assert!(g.is_member(&g.torus_element(2, 3).unwrap()));
    }

    #[test]
    fn membership_examples() {
        let g = build_group(5).unwrap();
        let ctx = g.ctx();
        assert!(g.is_member(&x_alpha(ctx)));
        assert!(g.is_member(&Mat::identity(ctx, 7)));
        assert!(!g.is_member(&Mat::identity(ctx, 7).scale(ctx.from_u64(2))));
        for gen in g.generators() {
            assert!(g.is_member(&gen.mat), "{}", gen.name);
            assert!(g.member_inverse(&gen.mat).mul(&gen.mat).is_identity());
        }
        assert!(g.is_member(&reversal(ctx).scale(ctx.from_i64(-1))));
        assert!(!g.is_member(&reversal(ctx)));
    }

    #[test]
    fn forms_are_nondegenerate_and_alternating() {
        let g = build_group(13).unwrap();
        let ctx = g.ctx();
        assert!(g.bilinear().is_nondegenerate());
        assert_eq!(g.bilinear().matrix, g.bilinear().matrix.transpose());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<Fq> = (0..7).map(|_| ctx.random(&mut rng)).collect();
            let y: Vec<Fq> = (0..7).map(|_| ctx.random(&mut rng)).collect();
            assert!(g.trilinear().eval(ctx, &x, &x, &y).is_zero());
            assert!(g.trilinear().eval(ctx, &x, &y, &y).is_zero());
        }
    }

    #[test]
    fn random_elements_are_members_with_dividing_order() {
        let g = build_group(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut pr = g.sampler(&mut rng);
        for _ in 0..50 {
            let m = pr.next(&g, &mut rng);
            assert!(g.is_member(&m));
            let o = g.element_order(&m);
            assert!((g.order() % &o) == BigUint::from(0u32));
            assert!(m.pow(&o).is_identity());
        }
    }

    #[test]
    fn flags() {
        let g = build_group(5).unwrap();
        let checks = parabolic_flags(&g);
        assert_eq!(checks.len(), 10);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        let ctx = g.ctx();
        assert!(stabilizes_flag(&Mat::identity(ctx, 7), 2));
        assert!(!stabilizes_flag(g.generator("x_-beta").unwrap(), 2));
        assert!(!stabilizes_flag(g.generator("x_-alpha").unwrap(), 3));
        // e1 -> e1 - e2 under the opposite alpha root element
        let col0 = g.generator("x_-alpha").unwrap().col(0);
        assert_eq!(col0[..2], [ctx.one(), ctx.from_i64(-1)]);
    }

    #[test]
    fn sym6_examples() {
        let ctx = FieldCtx::prime(11).unwrap();
        assert!(sym6_rep(&Mat::identity(&ctx, 2)).unwrap().is_identity());
        let u = Mat::from_i64(&ctx, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            jcf_signature(&sym6_rep(&u).unwrap()).unwrap(),
            JcfSignature::new(vec![(ctx.one(), 7)])
        );
        let d = Mat::from_i64(&ctx, &[&[2, 0], &[0, 1]]);
        let expect: Vec<Fq> = [9, 10, 5, 8, 4, 2, 1].iter().map(|&x| ctx.from_u64(x)).collect();
        assert_eq!(sym6_rep(&d).unwrap(), Mat::diag(&ctx, &expect));
        let s = Mat::from_i64(&ctx, &[&[1, 2], &[2, 4]]);
        assert_eq!(sym6_rep(&s).unwrap_err(), G2Error::SingularInput);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = Mat::random_invertible(&ctx, 2, &mut rng);
            let b = Mat::random_invertible(&ctx, 2, &mut rng);
            assert_eq!(sym6_rep(&a.mul(&b)).unwrap(), sym6_rep(&a).unwrap().mul(&sym6_rep(&b).unwrap()));
        }
    }
}
