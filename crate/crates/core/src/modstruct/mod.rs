//! Submodule structure of `F^7` under a set of matrices: spin-up, MeatAxe
//! irreducibility, the eigen-split of `ginf`, indecomposability, and the
//! maximal-subgroup exclusion battery.

mod exclusion;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ff::poly::{self, Poly};
use crate::ff::{FieldCtx, Fq};
use crate::linalg::{charpoly, commutant, kernel, poly_eval_mat, LinalgError, Mat, Subspace};

pub use exclusion::{exclusion_report, ExclusionReport, ExclusionRow, SMALL_GROUPS};

const MEATAXE_ATTEMPTS: usize = 200;
const MAX_WORD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("zero vector")]
    ZeroVector,
    #[error("characteristic polynomial of ginf is not x^7 - 1")]
    WrongCharPoly,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("l = {0} is not supported")]
    UnsupportedEll(u64),
    #[error("irreducibility test inconclusive after {0} random algebra elements")]
    Inconclusive(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A module `F^n` given by the matrices of its acting generators.
#[derive(Clone, Debug)]
pub struct Module {
    pub generators: Vec<Mat>,
}

impl Module {
    pub fn new(generators: Vec<Mat>) -> Self {
        assert!(!generators.is_empty(), "a module needs at least one generator");
        Module { generators }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.generators[0].ctx()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].rows()
    }

    pub fn transposed(&self) -> Module {
        Module::new(self.generators.iter().map(Mat::transpose).collect())
    }
}

/// Smallest subspace containing `vectors` and stable under every generator.
pub fn spin(vectors: &[Vec<Fq>], m: &Module) -> Subspace {
    let (ctx, n) = (m.ctx(), m.dim());
    let mut s = Subspace::span(ctx, n, vectors.to_vec());
    loop {
        let mut rows: Vec<Vec<Fq>> = s.basis().to_vec();
        for v in s.basis() {
            rows.extend(m.generators.iter().map(|g| g.apply(v)));
        }
        let next = Subspace::span(ctx, n, rows);
        if next.dim() == s.dim() {
            return s;
        }
        s = next;
    }
}

/// `dim span { ginf^k v }`.
pub fn orbit_span_dim(v: &[Fq], ginf: &Mat) -> Result<usize, ModError> {
    if v.iter().all(Fq::is_zero) {
        return Err(ModError::ZeroVector);
    }
    Ok(spin(&[v.to_vec()], &Module::new(vec![ginf.clone()])).dim())
}

/// `V1 = ker(ginf - 1)` and `V2 = ker(Phi_7(ginf))`.
pub fn eigen_split(ginf: &Mat) -> Result<(Subspace, Subspace), ModError> {
    let ctx = ginf.ctx();
    if charpoly(ginf) != Poly::from_i64s(ctx, &[-1, 0, 0, 0, 0, 0, 0, 1]) {
        return Err(ModError::WrongCharPoly);
    }
    let v1 = kernel(&ginf.shift(ctx.one()));
    let v2 = kernel(&poly_eval_mat(&Poly::from_u64s(ctx, &[1; 7]), ginf));
    Ok((v1, v2))
}

fn random_algebra_element<R: Rng>(m: &Module, rng: &mut R) -> Mat {
    let ctx = m.ctx();
    let n = m.dim();
    let mut acc = Mat::zeros(ctx, n, n);
    for _ in 0..3 {
        let len = rng.gen_range(1..=MAX_WORD);
        let mut w = Mat::identity(ctx, n);
        for _ in 0..len {
            w = w.mul(&m.generators[rng.gen_range(0..m.generators.len())]);
        }
        acc = acc.add(&w.scale(ctx.random(rng)));
    }
    acc
}

/// MeatAxe: an invariant subspace found by spinning proves reducibility; a
/// factor `f` of the characteristic polynomial of a random algebra element
/// with `nullity f(A) = deg f` settles irreducibility by Norton's criterion.
pub fn is_irreducible(m: &Module) -> Result<bool, ModError> {
    let n = m.dim();
    if n <= 1 {
        return Ok(true);
    }
    let ctx = m.ctx();
    let dual = m.transposed();
    let mut rng = ctx.internal_rng();
    for _ in 0..MEATAXE_ATTEMPTS {
        let a = random_algebra_element(m, &mut rng);
        let factors = poly::factor(ctx, &charpoly(&a));
        for (f, _) in factors {
            let fa = poly_eval_mat(&f, &a);
            let null = kernel(&fa);
            let v = null.basis()[0].clone();
            if spin(&[v], m).dim() < n {
                return Ok(false);
            }
            if null.dim() != f.degree().unwrap_or(0) {
                continue;
            }
            let w = kernel(&fa.transpose()).basis()[0].clone();
            return Ok(spin(&[w], &dual).dim() == n);
        }
    }
    Err(ModError::Inconclusive(MEATAXE_ATTEMPTS))
}

pub fn is_absolutely_irreducible(m: &Module) -> Result<bool, ModError> {
    Ok(is_irreducible(m)? && commutant(m.ctx(), m.dim(), &m.generators).len() == 1)
}

/// Matrix of `g` restricted to an invariant subspace, in the echelon basis
/// (acting on coordinate columns).
pub fn restrict(g: &Mat, s: &Subspace) -> Result<Mat, ModError> {
    let ctx = g.ctx();
    let k = s.dim();
    let basis = s.basis();
    // coordinates of g b_j: solve sum c_i b_i = g b_j
    let sys = Mat::from_fn(ctx, s.ambient(), k, |r, c| basis[c][r]);
    let mut cols = Vec::with_capacity(k);
    for b in basis {
        let target = g.apply(b);
        let mut aug: Vec<Vec<Fq>> = (0..s.ambient())
            .map(|r| {
                let mut row = sys.row(r).to_vec();
                row.push(target[r]);
                row
            })
            .collect();
        let piv = crate::linalg::rref(ctx, &mut aug);
        if piv.last() == Some(&k) {
            return Err(ModError::PreconditionUnmet("subspace is not invariant".into()));
        }
        let mut c = vec![ctx.zero(); k];
        for (row, &p) in aug.iter().zip(&piv) {
            c[p] = row[k];
        }
        cols.push(c);
    }
    Ok(Mat::from_fn(ctx, k, k, |r, c| cols[c][r]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HModuleReport {
    pub v1_dim: usize,
    pub v2_dim: usize,
    pub v1_invariant: bool,
    pub v2_invariant: bool,
    /// `Some` only when the subspace is invariant.
    pub v1_irreducible: Option<bool>,
    pub v2_irreducible: Option<bool>,
    pub g1_stabilizes_v1: bool,
    pub g1_stabilizes_v2: bool,
    /// V1 and V2 are the only proper nonzero submodules for the acting set.
    pub only_candidates: bool,
    pub commutant_dim: usize,
    pub verdict: String,
}

/// Decides whether adding `g1` to the acting set makes `F^7` indecomposable,
/// using that `V1` and `V2` are the only candidate submodules whenever both
/// are irreducible under the acting set.
pub fn h_module_analysis(ginf: &Mat, h_gens: &[Mat], g1: &Mat) -> Result<HModuleReport, ModError> {
    let (v1, v2) = eigen_split(ginf).map_err(|_| {
        ModError::PreconditionUnmet("ginf must have characteristic polynomial x^7 - 1".into())
    })?;
    if h_gens.is_empty() {
        return Err(ModError::PreconditionUnmet("empty acting set".into()));
    }
    let inv = |s: &Subspace| h_gens.iter().all(|h| s.is_invariant(h));
    let irr = |s: &Subspace| -> Result<bool, ModError> {
        let gens = h_gens.iter().map(|h| restrict(h, s)).collect::<Result<Vec<_>, _>>()?;
        is_irreducible(&Module::new(gens))
    };
    let (v1_invariant, v2_invariant) = (inv(&v1), inv(&v2));
    let v1_irreducible = if v1_invariant { Some(irr(&v1)?) } else { None };
    let v2_irreducible = if v2_invariant { Some(irr(&v2)?) } else { None };
    let only_candidates = v1_irreducible == Some(true) && v2_irreducible == Some(true);
    let (g1_v1, g1_v2) = (v1.is_invariant(g1), v2.is_invariant(g1));
    let mut all = h_gens.to_vec();
    all.push(g1.clone());
    let commutant_dim = commutant(ginf.ctx(), ginf.rows(), &all).len();
    let verdict = if !only_candidates {
        "V1 and V2 are not both irreducible; raw invariance data only".to_string()
    } else if !g1_v1 && !g1_v2 {
        "indecomposable".to_string()
    } else {
        "decomposition V1 + V2 not excluded".to_string()
    };
    Ok(HModuleReport {
        v1_dim: v1.dim(),
        v2_dim: v2.dim(),
        v1_invariant,
        v2_invariant,
        v1_irreducible,
        v2_irreducible,
        g1_stabilizes_v1: g1_v1,
        g1_stabilizes_v2: g1_v2,
        only_candidates,
        commutant_dim,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shift7(ctx: &FieldCtx) -> Mat {
        Mat::from_fn(ctx, 7, 7, |i, j| if (i + 1) % 7 == j { ctx.one() } else { ctx.zero() })
    }

    #[test]
    fn spin_basics() {
        let ctx = FieldCtx::prime(5).unwrap();
        let m = Module::new(vec![shift7(&ctx)]);
        assert_eq!(spin(&[vec![ctx.zero(); 7]], &m).dim(), 0);
        let ones = vec![ctx.one(); 7];
        assert_eq!(spin(std::slice::from_ref(&ones), &m).dim(), 1);
        let mut e = vec![ctx.zero(); 7];
        e[0] = ctx.one();
        let s = spin(&[e.clone()], &m);
        assert_eq!(s.dim(), 7);
        assert_eq!(spin(s.basis(), &m), s);
    }

    #[test]
    fn orbit_dims_in_eigenbasis() {
        let ext = make_field(29).unwrap();
        let z = ext.zeta();
        let d: Vec<Fq> = (1..=7).map(|i| ext.pow_u64(z, i % 7)).collect();
        let g = Mat::diag(&ext, &d);
        let v = |idx: &[usize]| {
            let mut v = vec![ext.zero(); 7];
            for &i in idx {
                v[i - 1] = ext.one();
            }
            v
        };
        assert_eq!(orbit_span_dim(&v(&[2]), &g), Ok(1));
        assert_eq!(orbit_span_dim(&v(&[1, 3]), &g), Ok(2));
        assert_eq!(orbit_span_dim(&v(&[1, 2, 3, 4, 5, 6]), &g), Ok(6));
        assert_eq!(orbit_span_dim(&[ext.zero(); 7], &g), Err(ModError::ZeroVector));
    }

    #[test]
    fn split_of_a_cyclic_shift() {
        let ctx = FieldCtx::prime(5).unwrap();
        let (v1, v2) = eigen_split(&shift7(&ctx)).unwrap();
        assert_eq!((v1.dim(), v2.dim()), (1, 6));
        assert_eq!(v1.intersect(&v2).dim(), 0);
        assert!(v1.is_invariant(&shift7(&ctx)) && v2.is_invariant(&shift7(&ctx)));
        assert_eq!(eigen_split(&Mat::identity(&ctx, 7)).unwrap_err(), ModError::WrongCharPoly);
    }

    #[test]
    fn meataxe_small_cases() {
        let ctx = FieldCtx::prime(5).unwrap();
        assert!(!is_irreducible(&Module::new(vec![Mat::identity(&ctx, 7)])).unwrap());
        assert!(!is_irreducible(&Module::new(vec![shift7(&ctx)])).unwrap());
        // the regular representation of C_7 plus a transposition-like map
        let swap = Mat::from_fn(&ctx, 2, 2, |i, j| if i != j { ctx.one() } else { ctx.zero() });
        assert!(!is_irreducible(&Module::new(vec![swap])).unwrap());
        let rot = Mat::from_i64(&ctx, &[&[0, 2], &[1, 0]]);
        assert!(is_irreducible(&Module::new(vec![rot.clone()])).unwrap());
        assert!(!is_absolutely_irreducible(&Module::new(vec![rot])).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gens = vec![Mat::random_invertible(&ctx, 5, &mut rng), Mat::random_invertible(&ctx, 5, &mut rng)];
        assert!(is_absolutely_irreducible(&Module::new(gens)).unwrap());
    }

    #[test]
    fn restriction_matches_action() {
        let ctx = FieldCtx::prime(5).unwrap();
        let g = shift7(&ctx);
        let (_, v2) = eigen_split(&g).unwrap();
        let r = restrict(&g, &v2).unwrap();
        assert_eq!(r.rows(), 6);
        assert!(r.pow_u64(7).is_identity());
        let mut e = vec![ctx.zero(); 7];
        e[0] = ctx.one();
        assert!(restrict(&g, &Subspace::span(&ctx, 7, vec![e])).is_err());
    }

    #[test]
    fn trivial_acting_set_leaves_both_invariant() {
        let ctx = FieldCtx::prime(5).unwrap();
        let id = Mat::identity(&ctx, 7);
        let r = h_module_analysis(&shift7(&ctx), std::slice::from_ref(&id), &id).unwrap();
        assert!(r.v1_invariant && r.v2_invariant);
        assert_eq!((r.v1_dim, r.v2_dim), (1, 6));
        assert_eq!(r.v2_irreducible, Some(false));
        assert!(!r.only_candidates);
        assert!(h_module_analysis(&id, std::slice::from_ref(&id), &id).is_err());
    }
}
