//! Arithmetic in F_l and in the cyclotomic extension F_l(zeta_7) = F_{l^d}.
//!
//! A [`FieldCtx`] owns the model of the field (characteristic, degree and the
//! defining modulus); elements are plain [`Fq`] values holding the residues of
//! the coefficients of `1, z, ..., z^(d-1)` and are only meaningful relative to
//! the context that produced them.

pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::factor::{factor_u64, is_prime_u64};
use poly::Poly;

/// Largest extension degree that occurs: the order of l modulo 7 divides 6.
pub const MAX_DEGREE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported")]
    UnsupportedCharacteristic(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element or modulus does not belong to this field context")]
    ContextMismatch,
}

/// A field element: least nonnegative residues of the coefficients of
/// `1, z, ..., z^(d-1)`. Unused trailing slots are always zero.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub(crate) [u32; MAX_DEGREE]);

impl Fq {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Constant coefficient; the whole value when the element lies in F_l.
    pub fn constant(&self) -> u32 {
        self.0[0]
    }

    pub fn in_prime_field(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        if last == 0 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", &self.0[..=last])
        }
    }
}

struct Inner {
    ell: u32,
    d: usize,
    /// Monic modulus, constant term first, length d + 1.
    modulus: Vec<u32>,
    /// `frob[k]` = coefficients of `z^(k*l)`; row k of the Frobenius matrix.
    frob: Vec<[u32; MAX_DEGREE]>,
    cyclotomic: bool,
}

/// Model of F_l or F_l(zeta_7). Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ell == other.0.ell && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.ell, self.0.d, self.0.modulus)
    }
}

/// Serialized field header: `{"ell": 29, "d": 1, "modulus": [4, 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub ell: u64,
    pub d: usize,
    pub modulus: Vec<u64>,
}

/// Multiplicative order of `ell` modulo 7.
pub fn order_mod_7(ell: u64) -> usize {
    let r = ell % 7;
    let mut x = r;
    for k in 1..=6 {
        if x == 1 {
            return k;
        }
        x = x * r % 7;
    }
    unreachable!("{ell} is divisible by 7")
}

fn check_characteristic(ell: u64) -> Result<(), FieldError> {
    if !is_prime_u64(ell) {
        return Err(FieldError::NotPrime(ell));
    }
    if ell == 2 || ell >= 1 << 31 {
        return Err(FieldError::UnsupportedCharacteristic(ell));
    }
    Ok(())
}

/// Builds F_l(zeta_7) with the lexicographically smallest irreducible factor of
/// the 7th cyclotomic polynomial as modulus.
pub fn make_field(ell: u64) -> Result<FieldCtx, FieldError> {
    FieldCtx::cyclotomic(ell)
}

impl FieldCtx {
    /// The prime field F_l (modulus `x`, so `z = 0`).
    pub fn prime(ell: u64) -> Result<Self, FieldError> {
        check_characteristic(ell)?;
        Ok(Self::from_parts(ell as u32, vec![0, 1], false))
    }

    pub fn cyclotomic(ell: u64) -> Result<Self, FieldError> {
        check_characteristic(ell)?;
        if ell == 7 {
            return Err(FieldError::UnsupportedCharacteristic(ell));
        }
        let base = Self::prime(ell)?;
        let phi7 = Poly::new(vec![base.one(); 7]);
        let mut factors: Vec<Vec<u32>> = poly::factor(&base, &phi7)
            .into_iter()
            .map(|(f, _)| f.coeffs().iter().map(|c| c.constant()).collect())
            .collect();
        factors.sort();
        let modulus = factors.swap_remove(0);
        debug_assert_eq!(modulus.len() - 1, order_mod_7(ell));
        Ok(Self::from_parts(ell as u32, modulus, true))
    }

    /// Rebuilds a context from a serialized header, validating it against the
    /// canonical choice for that characteristic.
    pub fn from_header(h: &FieldHeader) -> Result<Self, FieldError> {
        let ctx = if h.modulus == [0, 1] {
            Self::prime(h.ell)?
        } else {
            Self::cyclotomic(h.ell)?
        };
        if ctx.header() != *h {
            return Err(FieldError::ContextMismatch);
        }
        Ok(ctx)
    }

    fn from_parts(ell: u32, modulus: Vec<u32>, cyclotomic: bool) -> Self {
        let d = modulus.len() - 1;
        let mut ctx = FieldCtx(Arc::new(Inner {
            ell,
            d,
            modulus,
            frob: Vec::new(),
            cyclotomic,
        }));
        let z = ctx.generator();
        let zl = ctx.pow_u64(z, ell as u64);
        let mut frob = Vec::with_capacity(d);
        let mut acc = ctx.one();
        for _ in 0..d {
            frob.push(acc.0);
            acc = ctx.mul(acc, zl);
        }
        Arc::get_mut(&mut ctx.0).expect("fresh context").frob = frob;
        ctx
    }

    pub fn ell(&self) -> u64 {
        self.0.ell as u64
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.0.cyclotomic
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            ell: self.ell(),
            d: self.degree(),
            modulus: self.0.modulus.iter().map(|&c| c as u64).collect(),
        }
    }

    /// Field size l^d.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.ell()).pow(self.degree() as u32)
    }

    pub fn size_u64(&self) -> Option<u64> {
        self.size().to_u64()
    }

    pub fn zero(&self) -> Fq {
        Fq::default()
    }

    pub fn one(&self) -> Fq {
        self.from_u64(1)
    }

    /// Residue class of `x`; a primitive 7th root of unity for cyclotomic contexts.
    pub fn generator(&self) -> Fq {
        let d = self.degree();
        let mut c = [0u32; MAX_DEGREE];
        if d == 1 {
            let m0 = self.0.modulus[0];
            c[0] = if m0 == 0 { 0 } else { self.0.ell - m0 };
        } else {
            c[1] = 1;
        }
        Fq(c)
    }

    /// zeta_7; only defined for cyclotomic contexts.
    pub fn zeta(&self) -> Fq {
        assert!(self.is_cyclotomic(), "zeta_7 requires a cyclotomic context");
        self.generator()
    }

    pub fn from_u64(&self, v: u64) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        c[0] = (v % self.ell()) as u32;
        Fq(c)
    }

    pub fn from_i64(&self, v: i64) -> Fq {
        let l = self.ell() as i64;
        self.from_u64(v.rem_euclid(l) as u64)
    }

    /// Validates an external coefficient vector (constant term first).
    pub fn elem(&self, coeffs: &[u64]) -> Result<Fq, FieldError> {
        if coeffs.len() != self.degree() || coeffs.iter().any(|&c| c >= self.ell()) {
            return Err(FieldError::ContextMismatch);
        }
        let mut c = [0u32; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v as u32;
        }
        Ok(Fq(c))
    }

    /// Checks that `a` is a well-formed element of this context.
    pub fn check(&self, a: Fq) -> Result<Fq, FieldError> {
        let d = self.degree();
        if a.0[..d].iter().any(|&c| c >= self.0.ell) || a.0[d..].iter().any(|&c| c != 0) {
            return Err(FieldError::ContextMismatch);
        }
        Ok(a)
    }

    pub fn coeffs(&self, a: &Fq) -> Vec<u64> {
        a.0[..self.degree()].iter().map(|&c| c as u64).collect()
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let l = self.0.ell;
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.degree() {
            let s = a.0[i] + b.0[i];
            c[i] = if s >= l { s - l } else { s };
        }
        Fq(c)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let l = self.0.ell;
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.degree() {
            c[i] = if a.0[i] == 0 { 0 } else { l - a.0[i] };
        }
        Fq(c)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let l = self.0.ell as u64;
        let d = self.degree();
        if d == 1 {
            let mut c = [0u32; MAX_DEGREE];
            c[0] = (a.0[0] as u64 * b.0[0] as u64 % l) as u32;
            return Fq(c);
        }
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                t[i + j] = (t[i + j] + a.0[i] as u64 * b.0[j] as u64) % l;
            }
        }
        let m = &self.0.modulus;
        for k in (d..2 * d - 1).rev() {
            let lead = t[k];
            if lead == 0 {
                continue;
            }
            t[k] = 0;
            for j in 0..d {
                t[k - d + j] = (t[k - d + j] + (l - lead) * m[j] as u64) % l;
            }
        }
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..d {
            c[i] = t[i] as u32;
        }
        Fq(c)
    }

    pub fn scale(&self, a: Fq, k: u64) -> Fq {
        self.mul(a, self.from_u64(k))
    }

    pub fn pow_u64(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Square-and-multiply with an arbitrary-precision exponent.
    pub fn pow(&self, a: Fq, e: &BigUint) -> Fq {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.degree() == 1 {
            let l = self.ell() as i64;
            let (mut r0, mut r1) = (l, a.0[0] as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (s0, s1) = (s1, s0 - q * s1);
            }
            return Ok(self.from_i64(s0));
        }
        let e = self.size() - BigUint::from(2u32);
        Ok(self.pow(a, &e))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^l`, computed as a linear map over F_l.
    pub fn frobenius(&self, a: Fq) -> Fq {
        let d = self.degree();
        if d == 1 {
            return a;
        }
        let l = self.ell();
        let mut c = [0u64; MAX_DEGREE];
        for k in 0..d {
            let ak = a.0[k] as u64;
            if ak == 0 {
                continue;
            }
            for (j, slot) in c.iter_mut().enumerate().take(d) {
                *slot = (*slot + ak * self.0.frob[k][j] as u64) % l;
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..d {
            out[i] = c[i] as u32;
        }
        Fq(out)
    }

    pub fn frobenius_pow(&self, a: Fq, k: usize) -> Fq {
        (0..k % self.degree().max(1)).fold(a, |x, _| self.frobenius(x))
    }

    /// Embeds an element of the prime field (given through any context of the
    /// same characteristic) as a constant.
    pub fn embed_prime(&self, a: Fq) -> Fq {
        self.from_u64(a.0[0] as u64)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        for slot in c.iter_mut().take(self.degree()) {
            *slot = rng.gen_range(0..self.0.ell);
        }
        Fq(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Enumerates all field elements (only sensible for small fields).
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let d = self.degree();
        let l = self.0.ell;
        let total = (l as u64).pow(d as u32);
        (0..total).map(move |mut idx| {
            let mut c = [0u32; MAX_DEGREE];
            for slot in c.iter_mut().take(d) {
                *slot = (idx % l as u64) as u32;
                idx /= l as u64;
            }
            Fq(c)
        })
    }

    /// Order of `a` in the multiplicative group, for fields with `l^d < 2^64`.
    pub fn mult_order(&self, a: Fq) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let n = self.size_u64()? - 1;
        let mut ord = n;
        for (p, _) in factor_u64(n) {
            while ord % p == 0 && self.pow_u64(a, ord / p) == self.one() {
                ord /= p;
            }
        }
        Some(ord)
    }

    /// Smallest generator of F_q^x in enumeration order.
    pub fn primitive_element(&self) -> Fq {
        let n = self.size_u64().expect("field too large") - 1;
        let primes: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
        self.elements()
            .skip(1)
            .find(|&a| primes.iter().all(|&p| self.pow_u64(a, n / p) != self.one()))
            .expect("finite fields have cyclic unit groups")
    }

    /// Discrete logarithm to base `g` by baby-step giant-step.
    pub fn discrete_log(&self, g: Fq, target: Fq) -> Option<u64> {
        let n = self.size_u64()? - 1;
        let m = (n as f64).sqrt().ceil() as u64 + 1;
        let mut table = std::collections::HashMap::with_capacity(m as usize);
        let mut x = self.one();
        for j in 0..m {
            table.entry(x).or_insert(j);
            x = self.mul(x, g);
        }
        let giant = self.inv(self.pow_u64(g, m)).ok()?;
        let mut y = target;
        for i in 0..=m {
            if let Some(&j) = table.get(&y) {
                return Some((i * m + j) % n);
            }
            y = self.mul(y, giant);
        }
        None
    }

    /// A reproducible rng for internal randomized algorithms.
    pub(crate) fn internal_rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x6732_u64 ^ self.ell() << 8 ^ self.degree() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn make_field_29_is_split() {
        let k = make_field(29).unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(k.modulus(), &[4, 1]);
        assert_eq!(k.zeta().constant(), 25);
    }

    #[test]
    fn make_field_5_keeps_phi7() {
        let k = make_field(5).unwrap();
        assert_eq!(k.degree(), 6);
        assert_eq!(k.modulus(), &[1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn make_field_13_quadratic() {
        let k = make_field(13).unwrap();
        assert_eq!(k.degree(), 2);
        // Oracle: every monic quadratic x^2 + b x + c over F_13 dividing Phi_7,
        // found by checking both roots-free division remainder.
        let base = FieldCtx::prime(13).unwrap();
        let phi7 = Poly::new(vec![base.one(); 7]);
        let mut quads = Vec::new();
        for c in 0..13u64 {
            for b in 0..13u64 {
                let q = Poly::new(vec![base.from_u64(c), base.from_u64(b), base.one()]);
                if poly::divrem(&base, &phi7, &q).1.is_zero() {
                    quads.push(vec![c as u32, b as u32, 1]);
                }
            }
        }
        quads.sort();
        assert_eq!(quads.len(), 3);
        assert_eq!(k.modulus(), quads[0].as_slice());
    }

    #[test]
    fn unsupported_characteristics() {
        assert_eq!(make_field(2).unwrap_err(), FieldError::UnsupportedCharacteristic(2));
        assert_eq!(make_field(7).unwrap_err(), FieldError::UnsupportedCharacteristic(7));
        assert_eq!(make_field(15).unwrap_err(), FieldError::NotPrime(15));
    }

    #[test]
    fn zeta_has_order_seven() {
        for ell in [3, 5, 11, 13, 17, 29, 43] {
            let k = make_field(ell).unwrap();
            let z = k.zeta();
            assert_ne!(z, k.one());
            assert_eq!(k.pow_u64(z, 7), k.one(), "ell = {ell}");
        }
    }

    #[test]
    fn inverse_in_f29() {
        let k = make_field(29).unwrap();
        assert_eq!(k.inv(k.from_u64(25)).unwrap(), k.from_u64(7));
        assert_eq!(k.inv(k.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn malformed_elements_rejected() {
        let k = make_field(5).unwrap();
        assert_eq!(k.elem(&[1, 2]), Err(FieldError::ContextMismatch));
        assert_eq!(k.elem(&[5, 0, 0, 0, 0, 0]), Err(FieldError::ContextMismatch));
        let k29 = make_field(29).unwrap();
        let wide = k.elem(&[0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(k29.check(wide), Err(FieldError::ContextMismatch));
    }

    #[test]
    fn frobenius_basics() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for ell in [5, 13, 11, 29] {
            let k = make_field(ell).unwrap();
            assert_eq!(k.frobenius(k.generator()), k.pow_u64(k.generator(), ell));
            for c in 0..ell {
                let a = k.from_u64(c);
                assert_eq!(k.frobenius(a), a);
            }
            for _ in 0..50 {
                let a = k.random(&mut rng);
                let b = k.random(&mut rng);
                assert_eq!(k.frobenius_pow(a, k.degree()), a);
                assert_eq!(k.pow(a, &k.size()), a);
                assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
                assert_eq!(k.frobenius(k.mul(a, b)), k.mul(k.frobenius(a), k.frobenius(b)));
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_only_prime_field() {
        let k = make_field(5).unwrap();
        let fixed = k.elements().filter(|&a| k.frobenius(a) == a).count();
        assert_eq!(fixed, 5);
    }

    #[test]
    fn discrete_log_round_trip() {
        let k = make_field(5).unwrap();
        let g = k.primitive_element();
        assert_eq!(k.mult_order(g), Some(15624));
        for e in [0u64, 1, 7, 1000, 15623] {
            let t = k.pow_u64(g, e);
            assert_eq!(k.discrete_log(g, t), Some(e));
        }
    }
}
