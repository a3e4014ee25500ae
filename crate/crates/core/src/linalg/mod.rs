//! Dense matrices over a [`FieldCtx`], echelon forms, characteristic and
//! minimal polynomials, and Jordan signatures from rank profiles.

mod forms;
mod subspace;

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::ff::poly::{self, Poly};
use crate::ff::{FieldCtx, FieldError, Fq};

pub use forms::{
    commutant, invariant_forms, simultaneous_conjugator, FormKind, SymmetricForm, TrilinearForm,
};
pub use subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrices live over different fields")]
    ContextMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("characteristic polynomial does not split over the coefficient field")]
    NonSplitSpectrum,
    #[error("malformed matrix encoding: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A dense `rows x cols` matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Mat {
        Mat { ctx: ctx.clone(), rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Mat {
        let mut m = Mat::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_fn(ctx: &FieldCtx, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Fq) -> Mat {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Mat { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn from_rows(ctx: &FieldCtx, rows: Vec<Vec<Fq>>) -> Result<Mat, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        let data: Vec<Fq> = rows.into_iter().flatten().collect();
        for &a in &data {
            ctx.check(a)?;
        }
        Ok(Mat { ctx: ctx.clone(), rows: n, cols, data })
    }

    /// Integer entries reduced modulo the characteristic.
    pub fn from_i64(ctx: &FieldCtx, rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_fn(ctx, rows.len(), cols, |i, j| ctx.from_i64(rows[i][j]))
    }

    pub fn diag(ctx: &FieldCtx, entries: &[Fq]) -> Mat {
        let n = entries.len();
        Mat::from_fn(ctx, n, n, |i, j| if i == j { entries[i] } else { ctx.zero() })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fq> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn same_field(&self, other: &Mat) -> Result<(), LinalgError> {
        if self.ctx != other.ctx {
            return Err(LinalgError::ContextMismatch);
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Matrix product; panics on shape or field mismatch.
    pub fn mul(&self, other: &Mat) -> Mat {
        self.checked_mul(other).expect("incompatible matrices")
    }

    fn mul_unchecked(&self, other: &Mat) -> Mat {
        let ctx = &self.ctx;
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut out = Mat::zeros(ctx, n, m);
        if ctx.degree() == 1 {
            let l = ctx.ell();
            for i in 0..n {
                for j in 0..m {
                    let mut acc = 0u64;
                    for t in 0..k {
                        let a = self.data[i * k + t].constant() as u64;
                        if a != 0 {
                            acc = (acc + a * other.data[t * m + j].constant() as u64) % l;
                        }
                    }
                    out.data[i * m + j] = ctx.from_u64(acc);
                }
            }
            return out;
        }
        for i in 0..n {
            for t in 0..k {
                let a = self.data[i * k + t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let idx = i * m + j;
                    out.data[idx] = ctx.add(out.data[idx], ctx.mul(a, other.data[t * m + j]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols && self.ctx == other.ctx);
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.ctx.add(a, b)).collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert!(self.rows == other.rows && self.cols == other.cols && self.ctx == other.ctx);
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.ctx.sub(a, b)).collect();
        Mat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: Fq) -> Mat {
        self.map(|a| self.ctx.mul(a, k))
    }

    pub fn map(&self, f: impl Fn(Fq) -> Fq) -> Mat {
        Mat {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: Fq) -> Mat {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.set(i, i, self.ctx.sub(m.get(i, i), lambda));
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Fq {
        (0..self.rows).fold(self.ctx.zero(), |acc, i| self.ctx.add(acc, self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(&self.ctx, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Fq::is_zero)
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[Fq]) -> Vec<Fq> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.ctx.zero(), |acc, (&a, &b)| self.ctx.add(acc, self.ctx.mul(a, b)))
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let ctx = &self.ctx;
        let n = self.rows;
        let mut aug: Vec<Vec<Fq>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
                r
            })
            .collect();
        let pivots = rref(ctx, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Mat::from_fn(ctx, n, n, |i, j| aug[i][n + j]))
    }

    pub fn det(&self) -> Fq {
        let ctx = &self.ctx;
        let mut a = self.to_rows();
        let n = self.rows;
        let mut det = ctx.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return ctx.zero();
            };
            if p != c {
                a.swap(p, c);
                det = ctx.neg(det);
            }
            det = ctx.mul(det, a[c][c]);
            let inv = ctx.inv(a[c][c]).expect("nonzero pivot");
            for r in c + 1..n {
                let f = ctx.mul(a[r][c], inv);
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    a[r][k] = ctx.sub(a[r][k], ctx.mul(f, a[c][k]));
                }
            }
        }
        det
    }

    pub fn pow_u64(&self, mut e: u64) -> Mat {
        let mut acc = Mat::identity(&self.ctx, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow(&self, e: &BigUint) -> Mat {
        let mut acc = Mat::identity(&self.ctx, self.rows);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// `P^-1 M P`.
    pub fn base_change(&self, p: &Mat) -> Result<Mat, LinalgError> {
        p.inverse()?.checked_mul(self)?.checked_mul(p)
    }

    /// `X M X^-1`.
    pub fn conjugate_by(&self, x: &Mat) -> Result<Mat, LinalgError> {
        x.checked_mul(self)?.checked_mul(&x.inverse()?)
    }

    /// Reinterprets a matrix with prime-field entries over a larger field of the
    /// same characteristic.
    pub fn extend_scalars(&self, target: &FieldCtx) -> Result<Mat, LinalgError> {
        if target.ell() != self.ctx.ell() || self.data.iter().any(|a| !a.in_prime_field()) {
            return Err(LinalgError::ContextMismatch);
        }
        Ok(Mat {
            ctx: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| target.embed_prime(a)).collect(),
        })
    }

    /// Inverse of [`Mat::extend_scalars`]; fails unless every entry is rational.
    pub fn restrict_scalars(&self, target: &FieldCtx) -> Result<Mat, LinalgError> {
        if target.degree() != 1 || target.ell() != self.ctx.ell() {
            return Err(LinalgError::ContextMismatch);
        }
        if self.data.iter().any(|a| !a.in_prime_field()) {
            return Err(LinalgError::ContextMismatch);
        }
        Ok(Mat {
            ctx: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| target.from_u64(a.constant() as u64)).collect(),
        })
    }

    pub fn frobenius_entrywise(&self) -> Mat {
        self.map(|a| self.ctx.frobenius(a))
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Mat {
        let data = (0..n * n).map(|_| ctx.random(rng)).collect();
        Mat { ctx: ctx.clone(), rows: n, cols: n, data }
    }

    pub fn random_invertible<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(ctx, n, rng);
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// Row-major JSON: each entry a list of `d` residues, or a bare integer when `d = 1`.
    pub fn to_json(&self) -> Value {
        let d = self.ctx.degree();
        let enc = |a: &Fq| -> Value {
            let c = self.ctx.coeffs(a);
            if d == 1 {
                Value::from(c[0])
            } else {
                Value::from(c)
            }
        };
        Value::Array((0..self.rows).map(|i| Value::Array(self.row(i).iter().map(enc).collect())).collect())
    }

    pub fn from_json(ctx: &FieldCtx, v: &Value) -> Result<Mat, LinalgError> {
        let bad = |m: &str| LinalgError::Parse(m.to_string());
        let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("expected a row array"))?;
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                let coeffs: Vec<u64> = match e {
                    Value::Number(n) if ctx.degree() == 1 => {
                        vec![n.as_u64().ok_or_else(|| bad("entries must be nonnegative integers"))?]
                    }
                    Value::Array(cs) => cs
                        .iter()
                        .map(|c| c.as_u64().ok_or_else(|| bad("coefficients must be nonnegative integers")))
                        .collect::<Result<_, _>>()?,
                    _ => return Err(bad("unexpected entry")),
                };
                row.push(ctx.elem(&coeffs)?);
            }
            out.push(row);
        }
        let m = Mat::from_rows(ctx, out)?;
        if !m.is_square() {
            return Err(bad("matrix must be square"));
        }
        Ok(m)
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(ctx: &FieldCtx, a: &mut Vec<Vec<Fq>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = ctx.inv(a[r][c]).expect("nonzero pivot");
        for k in c..cols {
            a[r][k] = ctx.mul(a[r][k], inv);
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c];
            for k in c..cols {
                let t = ctx.mul(f, a[r][k]);
                a[i][k] = ctx.sub(a[i][k], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut a = m.to_rows();
    rref(&m.ctx, &mut a).len()
}

/// Right kernel `{v : M v = 0}`.
pub fn kernel(m: &Mat) -> Subspace {
    let ctx = &m.ctx;
    let mut a = m.to_rows();
    let pivots = rref(ctx, &mut a);
    let n = m.cols;
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![ctx.zero(); n];
            v[free] = ctx.one();
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = ctx.neg(row[free]);
            }
            v
        })
        .collect();
    Subspace::span(ctx, n, basis)
}

/// `p(M)` by Horner's rule.
pub fn poly_eval_mat(p: &Poly, m: &Mat) -> Mat {
    let ctx = m.ctx();
    let mut acc = Mat::zeros(ctx, m.rows, m.cols);
    for &c in p.coeffs().iter().rev() {
        acc = acc.mul(m);
        for i in 0..m.rows {
            acc.set(i, i, ctx.add(acc.get(i, i), c));
        }
    }
    acc
}

/// Characteristic polynomial `det(x I - M)` through an upper Hessenberg form.
pub fn charpoly(m: &Mat) -> Poly {
    let ctx = m.ctx();
    let n = m.rows;
    let mut h = m.to_rows();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        let inv = ctx.inv(h[j + 1][j]).expect("nonzero pivot");
        for k in j + 2..n {
            let u = ctx.mul(h[k][j], inv);
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = ctx.mul(u, h[j + 1][c]);
                h[k][c] = ctx.sub(h[k][c], t);
            }
            for row in h.iter_mut() {
                let t = ctx.mul(u, row[k]);
                row[j + 1] = ctx.add(row[j + 1], t);
            }
        }
    }
    let mut p: Vec<Poly> = vec![Poly::one(ctx)];
    for k in 1..=n {
        let lin = Poly::linear(ctx, h[k - 1][k - 1]);
        let mut next = poly::mul(ctx, &lin, &p[k - 1]);
        let mut t = ctx.one();
        for i in 1..k {
            t = ctx.mul(t, h[k - i][k - i - 1]);
            let coef = ctx.mul(h[k - i - 1][k - 1], t);
            next = poly::sub(ctx, &next, &poly::scale(ctx, &p[k - i - 1], coef));
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Minimal polynomial: the first linear dependency among `I, M, M^2, ...`.
pub fn minpoly(m: &Mat) -> Poly {
    let ctx = m.ctx();
    let n = m.rows;
    let mut powers = vec![Mat::identity(ctx, n)];
    loop {
        let next = powers.last().unwrap().mul(m);
        powers.push(next);
        let k = powers.len();
        let sys = Mat::from_fn(ctx, n * n, k, |r, c| powers[c].data[r]);
        let ker = kernel(&sys);
        if ker.dim() > 0 {
            let v = &ker.basis()[0];
            let lead = v[k - 1];
            let inv = ctx.inv(lead).expect("dependency involves the top power");
            return Poly::new(v.iter().map(|&c| ctx.mul(c, inv)).collect());
        }
    }
}

pub fn char_min_poly(m: &Mat) -> (Poly, Poly) {
    (charpoly(m), minpoly(m))
}

/// `rank((M - lambda)^k)` for `k = 0, 1, ...` until it stabilizes.
pub fn rank_profile(m: &Mat, lambda: Fq) -> Vec<usize> {
    let shifted = m.shift(lambda);
    let mut out = vec![m.rows];
    let mut acc = Mat::identity(m.ctx(), m.rows);
    loop {
        acc = acc.mul(&shifted);
        let r = rank(&acc);
        let done = r == *out.last().unwrap();
        out.push(r);
        if done {
            out.pop();
            return out;
        }
    }
}

/// Multiset of `(eigenvalue, block length)` pairs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JcfSignature(Vec<(Fq, usize)>);

impl JcfSignature {
    pub fn new(mut blocks: Vec<(Fq, usize)>) -> Self {
        blocks.sort();
        JcfSignature(blocks)
    }

    pub fn blocks(&self) -> &[(Fq, usize)] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|b| b.1).sum()
    }

    pub fn map_eigenvalues(&self, f: impl Fn(Fq) -> Fq) -> JcfSignature {
        JcfSignature::new(self.0.iter().map(|&(e, l)| (f(e), l)).collect())
    }

    /// Readable form with eigenvalues written through `ctx`.
    pub fn describe(&self, ctx: &FieldCtx) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(e, l)| {
                if e.in_prime_field() {
                    return format!("({}, {l})", e.constant());
                }
                let zeta_power = ctx.is_cyclotomic()
                    .then(|| (1..7u64).find(|&k| ctx.pow_u64(ctx.zeta(), k) == *e))
                    .flatten();
                match zeta_power {
                    Some(k) => format!("(z^{k}, {l})"),
                    None => format!("({:?}, {l})", ctx.coeffs(e)),
                }
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Block partition of one eigenvalue from its rank profile.
pub fn blocks_from_profile(profile: &[usize]) -> Vec<usize> {
    let at = |k: usize| profile.get(k).copied().unwrap_or(*profile.last().unwrap());
    let mut out = Vec::new();
    for k in 1..profile.len() + 1 {
        let at_least_k = at(k - 1) - at(k);
        let at_least_k1 = at(k) - at(k + 1);
        for _ in 0..at_least_k - at_least_k1 {
            out.push(k);
        }
    }
    out
}

pub fn jcf_signature(m: &Mat) -> Result<JcfSignature, LinalgError> {
    let ctx = m.ctx();
    let cp = charpoly(m);
    let roots = poly::roots(ctx, &cp);
    if roots.iter().map(|r| r.1).sum::<usize>() != m.rows {
        return Err(LinalgError::NonSplitSpectrum);
    }
    let mut blocks = Vec::new();
    for (lambda, _) in roots {
        for len in blocks_from_profile(&rank_profile(m, lambda)) {
            blocks.push((lambda, len));
        }
    }
    Ok(JcfSignature::new(blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldCtx {
        FieldCtx::prime(5).unwrap()
    }

    pub(crate) fn x_alpha(ctx: &FieldCtx) -> Mat {
        let mut m = Mat::identity(ctx, 7);
        for (i, j, v) in [(0, 1, 1), (2, 3, 1), (2, 4, -1), (3, 4, -2), (5, 6, -1)] {
            m.set(i, j, ctx.from_i64(v));
        }
        m
    }

    /// Leibniz expansion, used as an independent determinant oracle.
    fn det_oracle(m: &Mat) -> Fq {
        let ctx = m.ctx();
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = ctx.zero();
        fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 1 {
                out.push(p.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, p, out);
                if k.is_multiple_of(2) { p.swap(i, k - 1) } else { p.swap(0, k - 1) }
            }
        }
        let mut all = Vec::new();
        heap(n, &mut perm, &mut all);
        for p in all {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let mut t = ctx.one();
            for (i, &pi) in p.iter().enumerate() {
                t = ctx.mul(t, m.get(i, pi));
            }
            total = if inv % 2 == 0 { ctx.add(total, t) } else { ctx.sub(total, t) };
        }
        total
    }

    #[test]
    fn rank_examples() {
        let ctx = f5();
        let id = Mat::identity(&ctx, 7);
        assert_eq!(rank(&id), 7);
        assert_eq!(kernel(&id).dim(), 0);
        let n = x_alpha(&ctx).sub(&id);
        assert_eq!(rank(&n), 4);
        assert_eq!(rank(&n.mul(&n)), 1);
        assert_eq!(rank(&n.mul(&n).mul(&n)), 0);
        assert_eq!(kernel(&n).dim(), 3);
        assert_eq!(rank_profile(&x_alpha(&ctx), ctx.one()), vec![7, 4, 1, 0]);
    }

    #[test]
    fn char_and_min_polys() {
        let ctx = f5();
        let id = Mat::identity(&ctx, 7);
        let (c, m) = char_min_poly(&id);
        assert_eq!(c, poly::pow(&ctx, &Poly::from_i64s(&ctx, &[-1, 1]), 7));
        assert_eq!(m, Poly::from_i64s(&ctx, &[-1, 1]));
        let m = minpoly(&x_alpha(&ctx));
        assert_eq!(m, poly::pow(&ctx, &Poly::from_i64s(&ctx, &[-1, 1]), 3));
        // cyclic shift: charpoly = minpoly = x^7 - 1
        let shift = Mat::from_fn(&ctx, 7, 7, |i, j| if (i + 1) % 7 == j { ctx.one() } else { ctx.zero() });
        let x7 = Poly::from_i64s(&ctx, &[-1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(char_min_poly(&shift), (x7.clone(), x7));
    }

    #[test]
    fn charpoly_constant_term_is_signed_det() {
        let ctx = FieldCtx::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for _ in 0..10 {
                let m = Mat::random(&ctx, n, &mut rng);
                let c = charpoly(&m);
                let sign = if n % 2 == 0 { ctx.one() } else { ctx.from_i64(-1) };
                assert_eq!(c.coeffs().first().copied().unwrap_or(ctx.zero()), ctx.mul(sign, det_oracle(&m)));
                assert_eq!(m.det(), det_oracle(&m));
                assert!(poly_eval_mat(&c, &m).is_zero());
                let mp = minpoly(&m);
                assert!(poly::rem(&ctx, &c, &mp).is_zero());
            }
        }
    }

    #[test]
    fn charpoly_over_extension() {
        let ctx = crate::ff::make_field(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = Mat::random(&ctx, 5, &mut rng);
        assert!(poly_eval_mat(&charpoly(&m), &m).is_zero());
    }

    #[test]
    fn jcf_examples() {
        let ctx = f5();
        let one = ctx.one();
        let m1 = ctx.from_i64(-1);
        let d = Mat::diag(&ctx, &[m1, m1, m1, m1, one, one, one]);
        let sig = jcf_signature(&d).unwrap();
        assert_eq!(sig, JcfSignature::new(vec![(m1, 1), (m1, 1), (m1, 1), (m1, 1), (one, 1), (one, 1), (one, 1)]));
        assert_eq!(jcf_signature(&x_alpha(&ctx)).unwrap(), JcfSignature::new(vec![(one, 3), (one, 2), (one, 2)]));
        assert_eq!(jcf_signature(&Mat::identity(&ctx, 7)).unwrap(), JcfSignature::new(vec![(one, 1); 7]));
        let rot = Mat::from_i64(&ctx, &[&[0, -1], &[1, 0]]);
        // x^2 + 1 splits mod 5 but x^2 - 2 does not
        assert!(jcf_signature(&rot).is_ok());
        let irr = Mat::from_i64(&ctx, &[&[0, 2], &[1, 0]]);
        assert_eq!(jcf_signature(&irr), Err(LinalgError::NonSplitSpectrum));
    }

    #[test]
    fn blocks_from_profiles() {
        assert_eq!(blocks_from_profile(&[7, 4, 1, 0]), vec![2, 2, 3]);
        assert_eq!(blocks_from_profile(&[7, 0]), vec![1; 7]);
        assert_eq!(blocks_from_profile(&[7, 6, 5, 4, 3, 2, 1, 0]), vec![7]);
    }

    #[test]
    fn inverse_and_json_round_trip() {
        let ctx = crate::ff::make_field(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Mat::random_invertible(&ctx, 4, &mut rng);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let back = Mat::from_json(&ctx, &m.to_json()).unwrap();
        assert_eq!(back, m);
        let f = f5();
        let a = x_alpha(&f);
        assert_eq!(a.to_json()[0][1], 1);
        assert_eq!(Mat::from_json(&f, &a.to_json()).unwrap(), a);
        assert!(Mat::from_json(&f, &serde_json::json!([[5]])).is_err());
        assert!(Mat::from_json(&f, &serde_json::json!([[1, 2]])).is_err());
        assert_eq!(Mat::zeros(&f, 3, 3).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = Mat::identity(&f5(), 2);
        let b = Mat::identity(&FieldCtx::prime(13).unwrap(), 2);
        assert_eq!(a.checked_mul(&b), Err(LinalgError::ContextMismatch));
    }
}
