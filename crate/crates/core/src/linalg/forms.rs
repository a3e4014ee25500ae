use crate::ff::{FieldCtx, Fq};

use super::{kernel, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Symmetric bilinear forms, coordinates indexed by pairs `i <= j`.
    Sym2,
    /// Alternating trilinear forms, coordinates indexed by triples `i < j < k`.
    Alt3,
}

impl FormKind {
    pub fn index(self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        match self {
            FormKind::Sym2 => {
                for i in 0..n {
                    for j in i..n {
                        out.push(vec![i, j]);
                    }
                }
            }
            FormKind::Alt3 => {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            out.push(vec![i, j, k]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Solves the homogeneous system whose columns are `columns[t]` and returns the
/// kernel basis in reduced echelon form.
fn solve_columns(ctx: &FieldCtx, rows: usize, columns: &[Vec<Fq>]) -> Vec<Vec<Fq>> {
    if rows == 0 {
        return super::Subspace::full(ctx, columns.len()).basis().to_vec();
    }
    let sys = Mat::from_fn(ctx, rows, columns.len(), |r, c| columns[c][r]);
    kernel(&sys).basis().to_vec()
}

fn det3(ctx: &FieldCtx, m: [[Fq; 3]; 3]) -> Fq {
    let t = |a, b, c| ctx.mul(ctx.mul(a, b), c);
    let pos = ctx.add(
        ctx.add(t(m[0][0], m[1][1], m[2][2]), t(m[0][1], m[1][2], m[2][0])),
        t(m[0][2], m[1][0], m[2][1]),
    );
    let neg = ctx.add(
        ctx.add(t(m[0][2], m[1][1], m[2][0]), t(m[0][0], m[1][2], m[2][1])),
        t(m[0][1], m[1][0], m[2][2]),
    );
    ctx.sub(pos, neg)
}

fn minor3(g: &Mat, rows: [usize; 3], cols: [usize; 3]) -> Fq {
    let mut m = [[g.ctx().zero(); 3]; 3];
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            m[r][c] = g.get(i, j);
        }
    }
    det3(g.ctx(), m)
}

/// Coordinates of the pulled-back form `F(g., g.[, g.])`.
fn pullback(kind: FormKind, g: &Mat, index: &[Vec<usize>], coords: &[Fq]) -> Vec<Fq> {
    let ctx = g.ctx();
    match kind {
        FormKind::Sym2 => {
            let b = SymmetricForm::from_coords(ctx, g.rows(), coords).matrix;
            let pb = g.transpose().mul(&b).mul(g);
            index.iter().map(|ij| pb.get(ij[0], ij[1])).collect()
        }
        FormKind::Alt3 => {
            let support: Vec<(usize, Fq)> =
                coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, &c)| (t, c)).collect();
            index
                .iter()
                .map(|ijk| {
                    support.iter().fold(ctx.zero(), |acc, &(t, c)| {
                        let abc = &index[t];
                        let m = minor3(g, [abc[0], abc[1], abc[2]], [ijk[0], ijk[1], ijk[2]]);
                        ctx.add(acc, ctx.mul(c, m))
                    })
                })
                .collect()
        }
    }
}

/// Basis of forms of `kind` on `F^n` invariant under every generator. Rows come
/// out in reduced echelon form, so each has first nonzero coordinate 1.
pub fn invariant_forms(ctx: &FieldCtx, n: usize, gens: &[Mat], kind: FormKind) -> Vec<Vec<Fq>> {
    let index = kind.index(n);
    let dim = index.len();
    let columns: Vec<Vec<Fq>> = (0..dim)
        .map(|t| {
            let mut e = vec![ctx.zero(); dim];
            e[t] = ctx.one();
            gens.iter()
                .flat_map(|g| {
                    let pb = pullback(kind, g, &index, &e);
                    pb.into_iter().zip(&e).map(|(a, &b)| ctx.sub(a, b)).collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    solve_columns(ctx, dim * gens.len(), &columns)
}

/// A symmetric bilinear form `B(x, y) = x^T B y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    pub matrix: Mat,
}

impl SymmetricForm {
    pub fn from_coords(ctx: &FieldCtx, n: usize, coords: &[Fq]) -> SymmetricForm {
        let mut m = Mat::zeros(ctx, n, n);
        for (ij, &c) in FormKind::Sym2.index(n).iter().zip(coords) {
            m.set(ij[0], ij[1], c);
            m.set(ij[1], ij[0], c);
        }
        SymmetricForm { matrix: m }
    }

    pub fn eval(&self, x: &[Fq], y: &[Fq]) -> Fq {
        let ctx = self.matrix.ctx();
        let by = self.matrix.apply(y);
        x.iter().zip(&by).fold(ctx.zero(), |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
    }

    pub fn is_invariant(&self, g: &Mat) -> bool {
        g.transpose().mul(&self.matrix).mul(g) == self.matrix
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.matrix.det().is_zero()
    }
}

/// An alternating trilinear form `sum c_ijk e^i ^ e^j ^ e^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrilinearForm {
    n: usize,
    coords: Vec<Fq>,
    /// Nonzero terms `(i, j, k, c)` for fast evaluation.
    terms: Vec<([usize; 3], Fq)>,
}

impl TrilinearForm {
    pub fn from_coords(n: usize, coords: &[Fq]) -> TrilinearForm {
        let terms = FormKind::Alt3
            .index(n)
            .into_iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(ijk, &c)| ([ijk[0], ijk[1], ijk[2]], c))
            .collect();
        TrilinearForm { n, coords: coords.to_vec(), terms }
    }

    pub fn coords(&self) -> &[Fq] {
        &self.coords
    }

    pub fn terms(&self) -> &[([usize; 3], Fq)] {
        &self.terms
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &[Fq], y: &[Fq], z: &[Fq]) -> Fq {
        self.terms.iter().fold(ctx.zero(), |acc, &([a, b, c], coef)| {
            let m = [[x[a], x[b], x[c]], [y[a], y[b], y[c]], [z[a], z[b], z[c]]];
            ctx.add(acc, ctx.mul(coef, det3(ctx, m)))
        })
    }

    pub fn pullback(&self, g: &Mat) -> Vec<Fq> {
        pullback(FormKind::Alt3, g, &FormKind::Alt3.index(self.n), &self.coords)
    }

    pub fn is_invariant(&self, g: &Mat) -> bool {
        self.pullback(g) == self.coords
    }
}

/// Basis of `{X : X M = M X for all M in gens}`.
pub fn commutant(ctx: &FieldCtx, n: usize, gens: &[Mat]) -> Vec<Mat> {
    intertwiners(ctx, n, gens, gens)
}

/// Basis of `{X : X a_i = b_i X}`.
fn intertwiners(ctx: &FieldCtx, n: usize, a: &[Mat], b: &[Mat]) -> Vec<Mat> {
    let columns: Vec<Vec<Fq>> = (0..n * n)
        .map(|t| {
            let mut e = Mat::zeros(ctx, n, n);
            e.set(t / n, t % n, ctx.one());
            a.iter()
                .zip(b)
                .flat_map(|(ai, bi)| e.mul(ai).sub(&bi.mul(&e)).entries().to_vec())
                .collect()
        })
        .collect();
    solve_columns(ctx, n * n * a.len(), &columns)
        .into_iter()
        .map(|v| Mat::from_fn(ctx, n, n, |i, j| v[i * n + j]))
        .collect()
}

/// An invertible `X` with `X a_i X^-1 = b_i` for all `i`, if one exists among
/// random combinations of the intertwiner space.
pub fn simultaneous_conjugator(a: &[Mat], b: &[Mat]) -> Option<Mat> {
    let first = a.first()?;
    if a.len() != b.len() {
        return None;
    }
    let ctx = first.ctx();
    let n = first.rows();
    let space = intertwiners(ctx, n, a, b);
    if space.is_empty() {
        return None;
    }
    let mut rng = ctx.internal_rng();
    for attempt in 0..64 {
        let x = if attempt == 0 {
            space[0].clone()
        } else {
            space.iter().fold(Mat::zeros(ctx, n, n), |acc, m| acc.add(&m.scale(ctx.random(&mut rng))))
        };
        if !x.det().is_zero() {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_generator_dims() {
        let ctx = FieldCtx::prime(5).unwrap();
        let id = Mat::identity(&ctx, 7);
        assert_eq!(invariant_forms(&ctx, 7, std::slice::from_ref(&id), FormKind::Sym2).len(), 28);
        assert_eq!(invariant_forms(&ctx, 7, std::slice::from_ref(&id), FormKind::Alt3).len(), 35);
        let neg = id.scale(ctx.from_i64(-1));
        assert_eq!(invariant_forms(&ctx, 7, std::slice::from_ref(&neg), FormKind::Alt3).len(), 0);
        assert_eq!(invariant_forms(&ctx, 7, &[neg], FormKind::Sym2).len(), 28);
        assert_eq!(commutant(&ctx, 7, &[]).len(), 49);
    }

    #[test]
    fn regular_element_commutant_is_seven_dimensional() {
        let ctx = FieldCtx::prime(29).unwrap();
        let shift = Mat::from_fn(&ctx, 7, 7, |i, j| if (i + 1) % 7 == j { ctx.one() } else { ctx.zero() });
        assert_eq!(commutant(&ctx, 7, std::slice::from_ref(&shift)).len(), 7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Mat::random_invertible(&ctx, 7, &mut rng);
        let conj = shift.conjugate_by(&p).unwrap();
        let x = simultaneous_conjugator(std::slice::from_ref(&shift), std::slice::from_ref(&conj)).unwrap();
        assert_eq!(shift.conjugate_by(&x).unwrap(), conj);
    }

    #[test]
    fn forms_are_invariant_and_alternating() {
        let ctx = FieldCtx::prime(11).unwrap();
        // SO-type generator: the swap of two coordinates preserves sum x_i y_i
        let swap = Mat::from_fn(&ctx, 3, 3, |i, j| {
            if (i, j) == (0, 1) || (i, j) == (1, 0) || (i, j) == (2, 2) { ctx.one() } else { ctx.zero() }
        });
        let sym = invariant_forms(&ctx, 3, std::slice::from_ref(&swap), FormKind::Sym2);
        assert_eq!(sym.len(), 4);
        for c in &sym {
            assert!(SymmetricForm::from_coords(&ctx, 3, c).is_invariant(&swap));
        }
        // the determinant form on F^3 is SL_3-invariant
        let alt = invariant_forms(&ctx, 3, std::slice::from_ref(&swap), FormKind::Alt3);
        assert!(alt.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = TrilinearForm::from_coords(3, &[ctx.one()]);
        let x: Vec<Fq> = (0..3).map(|_| ctx.random(&mut rng)).collect();
        let y: Vec<Fq> = (0..3).map(|_| ctx.random(&mut rng)).collect();
        assert!(t.eval(&ctx, &x, &x, &y).is_zero());
        let m = Mat::random_invertible(&ctx, 3, &mut rng);
        assert_eq!(t.pullback(&m), vec![m.det()]);
    }
}
