use crate::ff::{FieldCtx, Fq};

use super::{rref, Mat};

/// A subspace of `F^n`, stored by its reduced row echelon basis so that equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ctx: FieldCtx,
    n: usize,
    basis: Vec<Vec<Fq>>,
}

impl Subspace {
    pub fn span(ctx: &FieldCtx, n: usize, mut vectors: Vec<Vec<Fq>>) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == n), "vector length must be {n}");
        rref(ctx, &mut vectors);
        Subspace { ctx: ctx.clone(), n, basis: vectors }
    }

    pub fn zero(ctx: &FieldCtx, n: usize) -> Subspace {
        Subspace { ctx: ctx.clone(), n, basis: Vec::new() }
    }

    pub fn full(ctx: &FieldCtx, n: usize) -> Subspace {
        Subspace::span(ctx, n, Mat::identity(ctx, n).to_rows())
    }

    /// Span of the first `k` standard basis vectors.
    pub fn coordinate(ctx: &FieldCtx, n: usize, k: usize) -> Subspace {
        Subspace::span(ctx, n, Mat::identity(ctx, n).to_rows().into_iter().take(k).collect())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(&self.ctx, &mut rows).len() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// `M S` (column action on each basis vector).
    pub fn image(&self, m: &Mat) -> Subspace {
        Subspace::span(&self.ctx, self.n, self.basis.iter().map(|v| m.apply(v)).collect())
    }

    pub fn is_invariant(&self, m: &Mat) -> bool {
        self.basis.iter().all(|v| self.contains(&m.apply(v)))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(&self.ctx, self.n, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // dim(A + B) + dim(A n B) = dim A + dim B; solve a = b via the kernel of [A; -B]^T
        let ctx = &self.ctx;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(ctx, self.n);
        }
        let sys = Mat::from_fn(ctx, self.n, a + b, |r, c| {
            if c < a {
                self.basis[c][r]
            } else {
                ctx.neg(other.basis[c - a][r])
            }
        });
        let ker = super::kernel(&sys);
        let vectors = ker
            .basis()
            .iter()
            .map(|coef| {
                (0..self.n)
                    .map(|r| {
                        (0..a).fold(ctx.zero(), |acc, c| ctx.add(acc, ctx.mul(coef[c], self.basis[c][r])))
                    })
                    .collect()
            })
            .collect();
        Subspace::span(ctx, self.n, vectors)
    }
}
