//! An element `h` of G2(l) with `h ginf h^-1 = ginf^p`.
//!
//! In an eigenbasis `v_1, ..., v_7` of `ginf` (`v_i` for `zeta^i`, `v_7` for 1),
//! `h` must send `v_i` to a multiple of `v_(p^-1 i)`, so `h = P Pi D P^-1` with a
//! fixed permutation `Pi` and a diagonal `D`. Invariance of the two forms gives
//! monomial equations on `D`; its solutions form a coset of a rank-2 torus.
//! Rationality over F_l becomes `d_(l i) = d_i^l` once the eigenbasis is chosen
//! Frobenius-compatibly, and is solved through discrete logarithms.

use serde::Serialize;

use super::{MonodromyError, MonodromyTriple};
use crate::ff::{make_field, FieldCtx, Fq};
use crate::linalg::{kernel, Mat};

#[derive(Clone, Debug, Serialize)]
pub struct HSolution {
    #[serde(skip)]
    pub h: Mat,
    pub p: u64,
    /// `transport[i - 1] = j` when `h` maps the `zeta^i` eigenline onto the
    /// `zeta^j` eigenline (index 7 stands for eigenvalue 1).
    pub transport: Vec<usize>,
    /// `+1` when the transport is `i -> p i mod 7`, `-1` when it is `i -> p^-1 i`.
    /// Both hold when `p = 1 mod 7`.
    pub orientation: i32,
    /// Size of the F_l-rational solution coset that was searched.
    pub rational_solutions: u64,
}

fn idx(i: usize) -> usize {
    // eigen-index 1..=7 to column 0..=6
    i - 1
}

fn mul7(a: usize, i: usize) -> usize {
    match (a * i) % 7 {
        0 => 7,
        r => r,
    }
}

fn inverse_mod7(p: u64) -> usize {
    (1..7).find(|&x| (p as usize % 7) * x % 7 == 1).expect("p coprime to 7")
}

/// Eigenbasis of `ginf` over the extension with `frobenius(v_i) = v_(l i)`.
fn frobenius_eigenbasis(ginf: &Mat, ext: &FieldCtx) -> Result<Mat, MonodromyError> {
    let g = ginf.extend_scalars(ext)?;
    let ell = ext.ell() as usize;
    let zeta = ext.zeta();
    let mut cols: Vec<Option<Vec<Fq>>> = vec![None; 7];
    let eigvec = |lambda: Fq| -> Result<Vec<Fq>, MonodromyError> {
        let k = kernel(&g.shift(lambda));
        if k.dim() != 1 {
            return Err(MonodromyError::NoSolution(format!(
                "eigenspace of dimension {} (ginf is not regular)",
                k.dim()
            )));
        }
        Ok(k.basis()[0].clone())
    };
    for i in 1..=6 {
        if cols[idx(i)].is_some() {
            continue;
        }
        let mut v = eigvec(ext.pow_u64(zeta, i as u64))?;
        let mut j = i;
        loop {
            cols[idx(j)] = Some(v.clone());
            j = mul7(ell, j);
            if j == i {
                break;
            }
            v = v.iter().map(|&a| ext.frobenius(a)).collect();
        }
    }
    cols[idx(7)] = Some(eigvec(ext.one())?);
    let cols: Vec<Vec<Fq>> = cols.into_iter().map(Option::unwrap).collect();
    Ok(Mat::from_fn(ext, 7, 7, |r, c| cols[c][r]))
}

/// Exponents of the stabilizer torus `t(s1, s2)` on the eigen-indices.
const TORUS: [(i64, i64); 7] = [(1, 0), (0, 1), (1, 1), (-1, -1), (0, -1), (-1, 0), (0, 0)];

pub fn solve_h_inf_p(t: &MonodromyTriple, p: u64) -> Result<HSolution, MonodromyError> {
    if p == 0 || p.is_multiple_of(7) {
        return Err(MonodromyError::BadPrime(p));
    }
    let g = &t.group;
    let ext = make_field(t.ell())?;
    let ell = t.ell() as usize;
    let pm = mul7(inverse_mod7(p), 1);
    let sigma = |i: usize| if i == 7 { 7 } else { mul7(pm, i) };

    let pmat = frobenius_eigenbasis(&t.ginf, &ext)?;
    let b = g.bilinear().matrix.extend_scalars(&ext)?;
    let bp = pmat.transpose().mul(&b).mul(&pmat);
    let col = |i: usize| pmat.col(idx(i));
    let f = g.trilinear();
    let fp = |i: usize, j: usize, k: usize| f.eval(&ext, &col(i), &col(j), &col(k));

    // ratio r with d_i d_j (d_k) = r, from F'(i, j, k) = d_i d_j d_k F'(s i, s j, s k)
    let ratio = |num: Fq, den: Fq| -> Result<Fq, MonodromyError> {
        if num.is_zero() && den.is_zero() {
            return Err(MonodromyError::NoSolution("degenerate form in the eigenbasis".into()));
        }
        ext.div(num, den).map_err(|_| MonodromyError::NoSolution("form support not preserved".into()))
    };
    let beta = |i: usize, j: usize| ratio(bp.get(idx(i), idx(j)), bp.get(idx(sigma(i)), idx(sigma(j))));
    let phi = |i: usize, j: usize, k: usize| ratio(fp(i, j, k), fp(sigma(i), sigma(j), sigma(k)));

    let one = ext.one();
    let mut d = [one; 8];
    d[6] = beta(1, 6)?;
    d[5] = beta(2, 5)?;
    d[4] = phi(1, 2, 4)?;
    d[3] = ext.div(beta(3, 4)?, d[4])?;
    d[7] = ext.div(phi(1, 6, 7)?, d[6])?;
    let consistent = ext.mul(d[7], d[7]) == beta(7, 7)?
        && ext.mul(ext.mul(d[2], d[5]), d[7]) == phi(2, 5, 7)?
        && ext.mul(ext.mul(d[3], d[4]), d[7]) == phi(3, 4, 7)?
        && ext.mul(ext.mul(d[3], d[5]), d[6]) == phi(3, 5, 6)?;
    if !consistent {
        return Err(MonodromyError::NoSolution("form equations are inconsistent".into()));
    }

    // rationality: (d0_(l i) t_(l i)) = (d0_i t_i)^l with t = t(g^x, g^y)
    let gen = ext.primitive_element();
    let n = ext.size_u64().expect("small field") - 1;
    let nn = n as i128;
    let logs: Vec<i128> = (1..=7)
        .map(|i| ext.discrete_log(gen, d[i]).map(|x| x as i128))
        .collect::<Option<_>>()
        .ok_or_else(|| MonodromyError::NoSolution("discrete logarithm failed".into()))?;
    let l = ell as i128;
    // rows: a x + b y = c (mod n)
    let eqs: Vec<(i128, i128, i128)> = (1..=7)
        .map(|i| {
            let j = if i == 7 { 7 } else { mul7(ell, i) };
            let (ai, bi) = TORUS[idx(i)];
            let (aj, bj) = TORUS[idx(j)];
            let a = (aj as i128 - l * ai as i128).rem_euclid(nn);
            let b = (bj as i128 - l * bi as i128).rem_euclid(nn);
            let c = (l * logs[idx(i)] - logs[idx(j)]).rem_euclid(nn);
            (a, b, c)
        })
        .collect();
    let holds = |x: i128, y: i128| eqs.iter().all(|&(a, b, c)| (a * x + b * y - c).rem_euclid(nn) == 0);

    let mut found: Option<(i128, i128)> = None;
    let mut count = 0u64;
    for x in 0..nn {
        for y in y_candidates(&eqs, x, nn) {
            if holds(x, y) {
                count += 1;
                found.get_or_insert((x, y));
            }
        }
    }
    let (x, y) = found.ok_or_else(|| MonodromyError::NoSolution("no F_l-rational solution".into()))?;
    let s1 = ext.pow_u64(gen, x as u64);
    let s2 = ext.pow_u64(gen, y as u64);
    let mut diag = [ext.zero(); 7];
    for i in 1..=7 {
        let (a, b) = TORUS[idx(i)];
        let tpow = |s: Fq, e: i64| {
            if e >= 0 { ext.pow_u64(s, e as u64) } else { ext.inv(ext.pow_u64(s, (-e) as u64)).unwrap() }
        };
        diag[idx(i)] = ext.mul(d[i], ext.mul(tpow(s1, a), tpow(s2, b)));
    }
    // h' e_i = d_i e_(sigma i)
    let hp = Mat::from_fn(&ext, 7, 7, |r, c| if r == idx(sigma(c + 1)) { diag[c] } else { ext.zero() });
    let h_ext = pmat.mul(&hp).mul(&pmat.inverse()?);
    let h = h_ext
        .restrict_scalars(g.ctx())
        .map_err(|_| MonodromyError::NoSolution("solution is not F_l-rational".into()))?;
    if !g.is_member(&h) {
        return Err(MonodromyError::NoSolution("solution does not preserve the forms".into()));
    }
    let lhs = h.mul(&t.ginf).mul(&g.member_inverse(&h));
    if lhs != t.ginf.pow_u64(p) {
        return Err(MonodromyError::NoSolution("conjugation relation fails".into()));
    }

    let transport: Vec<usize> = (1..=7).map(sigma).collect();
    let forward: Vec<usize> = (1..=7).map(|i| if i == 7 { 7 } else { mul7(p as usize % 7, i) }).collect();
    let orientation = if transport == forward { 1 } else { -1 };
    Ok(HSolution { h, p, transport, orientation, rational_solutions: count })
}

/// Solutions `y` of the first equation with a nonzero `y` coefficient, for a
/// fixed `x`; all of `0..n` when no equation involves `y`.
fn y_candidates(eqs: &[(i128, i128, i128)], x: i128, n: i128) -> Vec<i128> {
    let Some(&(a, b, c)) = eqs.iter().find(|e| e.1 != 0) else {
        return (0..n).collect();
    };
    let rhs = (c - a * x).rem_euclid(n);
    let g = gcd(b, n);
    if rhs % g != 0 {
        return Vec::new();
    }
    let m = n / g;
    let y0 = (rhs / g) * mod_inverse(b / g, m) % m;
    (0..g).map(|k| y0 + k * m).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(inverse_mod7(3), 5);
        assert_eq!(inverse_mod7(5), 3);
        assert_eq!(mul7(3, 7), 7);
        assert_eq!(mul7(3, 5), 1);
        assert_eq!(7 * mod_inverse(7, 30) % 30, 1);
        let eqs = [(0, 4, 6), (0, 0, 0)];
        let ys = y_candidates(&eqs, 0, 10);
        assert!(ys.iter().all(|y| (4 * y - 6i128).rem_euclid(10) == 0));
        assert_eq!(ys.len(), 2);
    }
}
