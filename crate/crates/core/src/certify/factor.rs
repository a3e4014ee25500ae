//! Integer factorization: trial division, Pollard rho (Brent) and Miller-Rabin
//! with deterministic base sets.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::CertifyError;

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Bases 2..41 are a deterministic witness set below this bound (Sorenson-Webster).
fn mr_deterministic_bound() -> BigUint {
    "3317044064679887385961981".parse().unwrap()
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut y, mut g, mut r, mut q) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Complete factorization of a 64-bit integer, ascending primes.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d * d <= m && d < 1000 {
        while m.is_multiple_of(d) {
            primes.push(d);
            m /= d;
        }
        d += steps[i];
        i = (i + 1) % 8;
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime_u64(x) {
            primes.push(x);
            continue;
        }
        let f = rho_u64(x);
        stack.push(f);
        stack.push(x / f);
    }
    collect(primes)
}

fn collect<T: Ord + Clone>(mut primes: Vec<T>) -> Vec<(T, u32)> {
    primes.sort();
    let mut out: Vec<(T, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Prime factorization `n = prod p^e`, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization(pub Vec<(BigUint, u32)>);

impl Factorization {
    pub fn product(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.0.iter().map(|(p, _)| p)
    }

    pub fn divides(&self, p: &BigUint) -> bool {
        self.0.iter().any(|(q, _)| q == p)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn is_prime_big(n: &BigUint) -> Result<bool, CertifyError> {
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    if *n < mr_deterministic_bound() {
        Ok(true)
    } else {
        Err(CertifyError::FactorizationFailed(format!(
            "primality of {n} cannot be proven with the deterministic base set"
        )))
    }
}

fn rho_big(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        for _ in 0..(1u64 << 22) {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if g != one {
                return Some(g);
            }
        }
    }
    None
}

/// Factors `n >= 1`. Trial division up to 10^6, then Pollard rho; a cofactor
/// that is neither split nor provably prime yields `FactorizationFailed`.
pub fn factor(n: &BigUint) -> Result<Factorization, CertifyError> {
    if n.is_zero() {
        return Err(CertifyError::ZeroArgument);
    }
    if let Some(small) = n.to_u64() {
        return Ok(Factorization(
            factor_u64(small)
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
        ));
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigUint::from(d);
        if &bd * &bd > m {
            break;
        }
        while (&m % &bd).is_zero() {
            primes.push(bd.clone());
            m /= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if let Some(small) = x.to_u64() {
            primes.extend(factor_u64(small).into_iter().flat_map(|(p, e)| {
                std::iter::repeat_n(BigUint::from(p), e as usize)
            }));
            continue;
        }
        if is_prime_big(&x)? {
            primes.push(x);
            continue;
        }
        match rho_big(&x) {
            Some(f) => {
                stack.push(&x / &f);
                stack.push(f);
            }
            None => {
                return Err(CertifyError::FactorizationFailed(format!(
                    "could not split composite {x}"
                )))
            }
        }
    }
    Ok(Factorization(collect(primes)))
}

pub fn factor_u64_big(n: u64) -> Factorization {
    factor(&BigUint::from(n)).expect("64-bit inputs always factor")
}
