//! Dense univariate polynomials over a [`FieldCtx`], with factorization by
//! squarefree decomposition, distinct-degree and Cantor-Zassenhaus splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::{FieldCtx, Fq};

/// Coefficients constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly(Vec<Fq>);

impl Poly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Poly(vec![ctx.one()])
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Poly(vec![ctx.zero(), ctx.one()])
    }

    /// `x - a`
    pub fn linear(ctx: &FieldCtx, a: Fq) -> Self {
        Poly(vec![ctx.neg(a), ctx.one()])
    }

    pub fn from_u64s(ctx: &FieldCtx, coeffs: &[u64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| ctx.from_u64(c)).collect())
    }

    pub fn from_i64s(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }

    pub fn lead(&self) -> Option<Fq> {
        self.0.last().copied()
    }

    pub fn is_one(&self, ctx: &FieldCtx) -> bool {
        self.0.len() == 1 && self.0[0] == ctx.one()
    }

    pub fn eval(&self, ctx: &FieldCtx, a: Fq) -> Fq {
        self.0
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, a), c))
    }

    pub fn map(&self, f: impl Fn(Fq) -> Fq) -> Poly {
        Poly::new(self.0.iter().map(|&c| f(c)).collect())
    }
}

pub fn add(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    let get = |p: &Poly, i: usize| p.0.get(i).copied().unwrap_or_default();
    Poly::new((0..n).map(|i| ctx.add(get(a, i), get(b, i))).collect())
}

pub fn sub(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    add(ctx, a, &b.map(|c| ctx.neg(c)))
}

pub fn scale(ctx: &FieldCtx, a: &Poly, k: Fq) -> Poly {
    a.map(|c| ctx.mul(c, k))
}

pub fn mul(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![ctx.zero(); a.0.len() + b.0.len() - 1];
    for (i, &x) in a.0.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.0.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    Poly::new(out)
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(ctx: &FieldCtx, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.degree().expect("division by the zero polynomial");
    let inv_lead = ctx.inv(b.lead().unwrap()).expect("nonzero leading coefficient");
    let mut rem = a.0.clone();
    if rem.len() <= db {
        return (Poly::zero(), a.clone());
    }
    let mut quo = vec![ctx.zero(); rem.len() - db];
    for k in (0..quo.len()).rev() {
        let c = ctx.mul(rem[k + db], inv_lead);
        quo[k] = c;
        if c.is_zero() {
            continue;
        }
        for (j, &bj) in b.0.iter().enumerate() {
            rem[k + j] = ctx.sub(rem[k + j], ctx.mul(c, bj));
        }
    }
    rem.truncate(db);
    (Poly::new(quo), Poly::new(rem))
}

pub fn rem(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    divrem(ctx, a, b).1
}

pub fn monic(ctx: &FieldCtx, a: &Poly) -> Poly {
    match a.lead() {
        None => Poly::zero(),
        Some(l) => scale(ctx, a, ctx.inv(l).unwrap()),
    }
}

/// Monic gcd (zero only if both inputs are zero).
pub fn gcd(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = rem(ctx, &x, &y);
        x = y;
        y = r;
    }
    monic(ctx, &x)
}

pub fn derivative(ctx: &FieldCtx, a: &Poly) -> Poly {
    Poly::new(
        a.0.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.scale(c, i as u64))
            .collect(),
    )
}

pub fn powmod(ctx: &FieldCtx, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let b = rem(ctx, base, m);
    let mut acc = rem(ctx, &Poly::one(ctx), m);
    for i in (0..e.bits()).rev() {
        acc = rem(ctx, &mul(ctx, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(ctx, &mul(ctx, &acc, &b), m);
        }
    }
    acc
}

pub fn pow(ctx: &FieldCtx, base: &Poly, e: usize) -> Poly {
    (0..e).fold(Poly::one(ctx), |acc, _| mul(ctx, &acc, base))
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with the
/// `g` squarefree, pairwise coprime, and `f = prod g^m`.
fn squarefree(ctx: &FieldCtx, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let ell = ctx.ell() as usize;
    let df = derivative(ctx, f);
    let mut c = gcd(ctx, f, &df);
    let mut w = divrem(ctx, f, &c).0;
    let mut i = 1;
    while !w.is_one(ctx) {
        let y = gcd(ctx, &w, &c);
        let fac = divrem(ctx, &w, &y).0;
        if !fac.is_one(ctx) {
            out.push((fac, i));
        }
        w = y;
        c = divrem(ctx, &c, &w).0;
        i += 1;
    }
    if !c.is_one(ctx) {
        // c is a polynomial in x^l; take the l-th root coefficientwise.
        let d = ctx.degree();
        let root: Vec<Fq> = c
            .0
            .iter()
            .step_by(ell)
            .map(|&a| ctx.frobenius_pow(a, d - 1))
            .collect();
        for (g, m) in squarefree(ctx, &Poly::new(root)) {
            out.push((g, m * ell));
        }
    }
    out
}

fn distinct_degree(ctx: &FieldCtx, f: &Poly) -> Vec<(Poly, usize)> {
    let q = ctx.size();
    let x = Poly::x(ctx);
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while f.degree().unwrap_or(0) >= 2 * i {
        h = powmod(ctx, &h, &q, &f);
        let g = gcd(ctx, &f, &sub(ctx, &h, &x));
        if !g.is_one(ctx) {
            f = divrem(ctx, &f, &g).0;
            h = rem(ctx, &h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = f.degree() {
        if d > 0 {
            out.push((f, d));
        }
    }
    out
}

fn equal_degree<R: Rng>(ctx: &FieldCtx, g: &Poly, i: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let n = g.degree().unwrap();
    if n == i {
        out.push(g.clone());
        return;
    }
    let e = (ctx.size().pow(i as u32) - BigUint::one()) >> 1;
    loop {
        let a = Poly::new((0..n).map(|_| ctx.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(ctx, &powmod(ctx, &a, &e, g), &Poly::one(ctx));
        let h = gcd(ctx, g, &b);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            equal_degree(ctx, &h, i, rng, out);
            equal_degree(ctx, &divrem(ctx, g, &h).0, i, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities, sorted
/// by degree and then coefficientwise (constant term first).
pub fn factor(ctx: &FieldCtx, f: &Poly) -> Vec<(Poly, usize)> {
    let f = monic(ctx, f);
    let mut rng = ctx.internal_rng();
    let mut out = Vec::new();
    for (sf, m) in squarefree(ctx, &f) {
        for (g, i) in distinct_degree(ctx, &sf) {
            let mut parts = Vec::new();
            equal_degree(ctx, &g, i, &mut rng, &mut parts);
            out.extend(parts.into_iter().map(|p| (p, m)));
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0).cmp(&(b.0.degree(), &b.0)));
    out
}

/// Roots in the context field with multiplicities, ascending.
pub fn roots(ctx: &FieldCtx, f: &Poly) -> Vec<(Fq, usize)> {
    let mut r: Vec<(Fq, usize)> = factor(ctx, f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, m)| (ctx.neg(g.coeffs()[0]), m))
        .collect();
    r.sort();
    r
}
