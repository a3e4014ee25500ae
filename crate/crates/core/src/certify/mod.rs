//! The arithmetic surjectivity criterion for specializations at rational points.
//!
//! For `s` in Q \ {0, 1} and an admissible `l`, a certificate consists of two
//! primes `p, q` outside {2, 7, l} such that
//!
//! * `p` does not divide |G2(l)| and `p = 3, 5 (mod 7)`,
//! * `v_p(s) < 0` with `7` not dividing `v_p(s)`,
//! * `v_q(s - 1) > 0` with `l` not dividing `v_q(s - 1)`.
//!
//! Under these conditions the mod-l specialization at `s` has full image
//! G2(F_l). `q` is deliberately not screened against |G2(l)|.

pub mod factor;
pub mod rational;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::g2::group_order;
pub use factor::{factor, Factorization};
pub use rational::{valuation, Rational};

/// Characteristics for which the criterion is not available.
pub const EXCLUDED_ELLS: [u64; 5] = [2, 3, 7, 11, 13];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("zero argument")]
    ZeroArgument,
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),
    #[error("l = {0} is not supported (need a prime l not in {{2, 3, 7, 11, 13}})")]
    UnsupportedEll(u64),
    #[error("prime {0} is excluded (must avoid 2, 7 and l)")]
    ExcludedPrime(u64),
    #[error("s must avoid 0 and 1")]
    DegeneratePoint,
    #[error("{0}")]
    Parse(String),
}

pub fn check_ell(ell: u64) -> Result<(), CertifyError> {
    if EXCLUDED_ELLS.contains(&ell) || !factor::is_prime_u64(ell) {
        return Err(CertifyError::UnsupportedEll(ell));
    }
    Ok(())
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn avoids_2_7_ell(p: &BigUint, ell: u64) -> bool {
    ![big(2), big(7), big(ell)].contains(p)
}

fn mod7_is_3_or_5(p: &BigUint) -> bool {
    matches!((p % 7u32).to_u32(), Some(3) | Some(5))
}

/// Ascending primes `p <= bound` usable as the `p` of a certificate at `ell`.
pub fn find_admissible_primes(ell: u64, bound: u64) -> Vec<u64> {
    let order = group_order(ell);
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !sieve[i] {
            continue;
        }
        for j in (i * i..=n).step_by(i) {
            sieve[j] = false;
        }
        let p = i as u64;
        if p != 2 && p != 7 && p != ell && matches!(p % 7, 3 | 5) && !(&order % p).is_zero() {
            out.push(p);
        }
    }
    out
}

/// Which local monodromy generator the inertia image at `p` is known to contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaceWitness {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "inf")]
    Infinity,
    #[serde(rename = "none")]
    Nothing,
}

pub fn place_witness(s: &Rational, p: u64, ell: u64) -> Result<PlaceWitness, CertifyError> {
    if s.is_zero() || s.is_one() {
        return Err(CertifyError::DegeneratePoint);
    }
    if p == 2 || p == 7 || p == ell {
        return Err(CertifyError::ExcludedPrime(p));
    }
    let bp = big(p);
    let v_s = valuation(s, &bp)?;
    let v_s1 = valuation(&s.minus_one(), &bp)?;
    Ok(if v_s < 0 && v_s % 7 != 0 {
        PlaceWitness::Infinity
    } else if v_s1 > 0 && v_s1 % ell as i64 != 0 {
        PlaceWitness::One
    } else if v_s > 0 && v_s % 2 != 0 {
        PlaceWitness::Zero
    } else {
        PlaceWitness::Nothing
    })
}

/// A prime written as a JSON number when it fits in 64 bits, else as a string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prime(pub BigUint);

impl Serialize for Prime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.collect_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(Prime(big(v))),
            Raw::S(s) => s.parse().map(Prime).map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub s: Rational,
    pub ell: u64,
    pub p: Prime,
    pub q: Prime,
    pub nu_p_s: i64,
    pub nu_q_s_minus_1: i64,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconclusive {
    pub s: Rational,
    pub ell: u64,
    /// Candidate (`"p=17"`, `"q=2"`) or role (`"p"`, `"q"`) to failed conditions.
    pub failures: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Certified(Certificate),
    Inconclusive(Inconclusive),
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Inconclusive(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }
}

fn check(name: &str, pass: bool) -> Check {
    Check { name: name.to_string(), pass }
}

fn p_checks(s: &Rational, p: &BigUint, ell: u64, order: &BigUint) -> Result<(Vec<Check>, i64), CertifyError> {
    let v = valuation(s, p)?;
    let checks = vec![
        check("p_not_2_7_ell", avoids_2_7_ell(p, ell)),
        check("p_coprime_to_group_order", !(order % p).is_zero()),
        check("p_mod_7_is_3_or_5", mod7_is_3_or_5(p)),
        check("nu_p_s_negative", v < 0),
        check("nu_p_s_not_divisible_by_7", v % 7 != 0),
    ];
    Ok((checks, v))
}

fn q_checks(s1: &Rational, q: &BigUint, ell: u64) -> Result<(Vec<Check>, i64), CertifyError> {
    let v = valuation(s1, q)?;
    let checks = vec![
        check("q_not_2_7_ell", avoids_2_7_ell(q, ell)),
        check("nu_q_s_minus_1_positive", v > 0),
        check("nu_q_s_minus_1_not_divisible_by_ell", v % ell as i64 != 0),
    ];
    Ok((checks, v))
}

fn failed(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect()
}

/// Searches the prime divisors of den(s) for `p` and of num(s - 1) for `q` and
/// returns the smallest witness pair, or the per-candidate failure map.
pub fn certify(s: &Rational, ell: u64) -> Result<Outcome, CertifyError> {
    check_ell(ell)?;
    if s.is_zero() || s.is_one() {
        return Err(CertifyError::DegeneratePoint);
    }
    let order = group_order(ell);
    let s1 = s.minus_one();
    let mut failures = BTreeMap::new();

    let mut best_p = None;
    let p_cands = factor(s.den())?;
    if p_cands.0.is_empty() {
        failures.insert("p".into(), vec!["den(s) = 1: no prime with nu_p(s) < 0".into()]);
    }
    for p in p_cands.primes() {
        let (checks, v) = p_checks(s, p, ell, &order)?;
        let bad = failed(&checks);
        if bad.is_empty() {
            best_p.get_or_insert((p.clone(), v, checks));
        } else {
            failures.insert(format!("p={p}"), bad);
        }
    }

    let mut best_q = None;
    let q_cands = factor(&s1.num_abs())?;
    if q_cands.0.is_empty() {
        failures.insert("q".into(), vec!["|num(s - 1)| = 1: no prime with nu_q(s - 1) > 0".into()]);
    }
    for q in q_cands.primes() {
        let (checks, v) = q_checks(&s1, q, ell)?;
        let bad = failed(&checks);
        if bad.is_empty() {
            best_q.get_or_insert((q.clone(), v, checks));
        } else {
            failures.insert(format!("q={q}"), bad);
        }
    }

    match (best_p, best_q) {
        (Some((p, nu_p, pc)), Some((q, nu_q, qc))) => {
            let mut checks = vec![check("ell_admissible", true), check("s_not_0_or_1", true)];
            checks.push(check("p_prime", true));
            checks.extend(pc);
            checks.push(check("q_prime", true));
            checks.extend(qc);
            Ok(Outcome::Certified(Certificate {
                s: s.clone(),
                ell,
                p: Prime(p),
                q: Prime(q),
                nu_p_s: nu_p,
                nu_q_s_minus_1: nu_q,
                checks,
            }))
        }
        (p, q) => {
            if p.is_none() && !failures.contains_key("p") {
                failures.insert("p".into(), vec!["no admissible prime divides den(s)".into()]);
            }
            if q.is_none() && !failures.contains_key("q") {
                failures.insert("q".into(), vec!["no admissible prime divides num(s - 1)".into()]);
            }
            Ok(Outcome::Inconclusive(Inconclusive { s: s.clone(), ell, failures }))
        }
    }
}

impl Certificate {
    /// Re-evaluates every condition from scratch, independent of the search.
    pub fn revalidate(&self) -> bool {
        let (p, q, ell) = (&self.p.0, &self.q.0, self.ell);
        let prime = |n: &BigUint| match n.to_u64() {
            Some(v) => factor::is_prime_u64(v),
            None => matches!(factor(n), Ok(f) if f.0.len() == 1 && f.0[0].1 == 1),
        };
        let (Ok(vp), Ok(vq)) = (valuation(&self.s, p), valuation(&self.s.minus_one(), q)) else {
            return false;
        };
        check_ell(ell).is_ok()
            && !self.s.is_zero()
            && !self.s.is_one()
            && prime(p)
            && prime(q)
            && avoids_2_7_ell(p, ell)
            && avoids_2_7_ell(q, ell)
            && !(group_order(ell) % p).is_zero()
            && mod7_is_3_or_5(p)
            && vp == self.nu_p_s
            && vq == self.nu_q_s_minus_1
            && vp < 0
            && vq > 0
            && vp % 7 != 0
            && vq % ell as i64 != 0
            && self.checks.iter().all(|c| c.pass)
    }
}

fn scan_column(ell: u64, height: i64, b: i64) -> Result<Vec<(Rational, Certificate)>, CertifyError> {
    let mut out = Vec::new();
    for a in -height..=height {
        if a == 0 || num_integer::gcd(a.abs(), b) != 1 || (a == b) {
            continue;
        }
        let s = Rational::new(a, b)?;
        if let Outcome::Certified(c) = certify(&s, ell)? {
            out.push((s, c));
        }
    }
    Ok(out)
}

/// All reduced `a/b` with `0 < |a|, b <= height`, `s != 1`, that certify,
/// ordered by `(b, a)`.
pub fn scan(ell: u64, height: u64) -> Result<Vec<(Rational, Certificate)>, CertifyError> {
    scan_parallel(ell, height, 1)
}

pub fn scan_parallel(
    ell: u64,
    height: u64,
    workers: usize,
) -> Result<Vec<(Rational, Certificate)>, CertifyError> {
    check_ell(ell)?;
    let h = height as i64;
    let workers = workers.max(1);
    let columns: Vec<Result<Vec<_>, CertifyError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (1..=h)
                        .filter(|b| (*b as usize) % workers == w)
                        .map(|b| scan_column(ell, h, b).map(|v| (b, v)))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|r| r.map(|cols| cols.into_iter().flat_map(|(_, v)| v).collect()))
            .collect()
    });
    let mut out = Vec::new();
    for c in columns {
        out.extend(c?);
    }
    out.sort_by(|x, y| (x.0.den(), x.0.num()).cmp(&(y.0.den(), y.0.num())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn admissible_primes_at_5() {
        assert_eq!(find_admissible_primes(5, 100), vec![17, 19, 47, 59, 61, 73, 89]);
        assert_eq!(find_admissible_primes(5, 16), Vec::<u64>::new());
        assert_eq!(find_admissible_primes(5, 17), vec![17]);
    }

    #[test]
    fn place_witness_examples() {
        assert_eq!(place_witness(&r("20/17"), 17, 5), Ok(PlaceWitness::Infinity));
        assert_eq!(place_witness(&r("20/17"), 3, 5), Ok(PlaceWitness::One));
        assert_eq!(place_witness(&r("3"), 3, 5), Ok(PlaceWitness::Zero));
        assert_eq!(place_witness(&r("9"), 3, 5), Ok(PlaceWitness::Nothing));
        assert_eq!(place_witness(&r("3"), 7, 5), Err(CertifyError::ExcludedPrime(7)));
        assert_eq!(place_witness(&r("1"), 3, 5), Err(CertifyError::DegeneratePoint));
    }

    #[test]
    fn certify_examples() {
        let c = certify(&r("20/17"), 5).unwrap();
        let cert = c.certificate().expect("certified");
        assert_eq!((cert.p.0.clone(), cert.q.0.clone()), (big(17), big(3)));
        assert_eq!((cert.nu_p_s, cert.nu_q_s_minus_1), (-1, 1));
        assert!(cert.revalidate());

        match certify(&r("2"), 5).unwrap() {
            Outcome::Inconclusive(i) => assert!(i.failures.contains_key("p")),
            other => panic!("{other:?}"),
        }
        match certify(&r("3/17"), 5).unwrap() {
            Outcome::Inconclusive(i) => {
                assert_eq!(i.failures["q=2"], vec!["q_not_2_7_ell"]);
                assert_eq!(i.failures["q=7"], vec!["q_not_2_7_ell"]);
            }
            other => panic!("{other:?}"),
        }
        for ell in EXCLUDED_ELLS {
            assert_eq!(certify(&r("1/2"), ell), Err(CertifyError::UnsupportedEll(ell)));
        }
        assert_eq!(certify(&r("1"), 5), Err(CertifyError::DegeneratePoint));
    }

    #[test]
    fn q_may_divide_group_order() {
        // s - 1 = -31/17 and 31 divides |G2(5)|
        let c = certify(&r("-14/17"), 5).unwrap();
        let cert = c.certificate().unwrap();
        assert_eq!(cert.q.0, big(31));
    }

    #[test]
    fn ell_divides_nu_q_fails() {
        // s - 1 = 3^5 / 17: nu_3(s - 1) = 5 is divisible by l = 5
        let s = Rational::new(243 + 17, 17).unwrap();
        match certify(&s, 5).unwrap() {
            Outcome::Inconclusive(i) => {
                assert_eq!(i.failures["q=3"], vec!["nu_q_s_minus_1_not_divisible_by_ell"])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_json_shape() {
        let c = certify(&r("20/17"), 5).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["s"], "20/17");
        assert_eq!(v["status"], "certified");
        assert_eq!(v["p"], 17);
        assert_eq!(v["q"], 3);
        assert_eq!(v["nu_p_s"], -1);
        assert_eq!(v["nu_q_s_minus_1"], 1);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
        let back: Outcome = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        let inc = serde_json::to_value(certify(&r("2"), 5).unwrap()).unwrap();
        assert_eq!(inc["status"], "inconclusive");
    }

    #[test]
    fn scan_examples() {
        let hits = scan(5, 20).unwrap();
        let find = |s: &str| hits.iter().find(|(x, _)| *x == r(s)).map(|(_, c)| c.clone());
        let c = find("20/17").unwrap();
        assert_eq!((c.p.0.clone(), c.q.0.clone()), (big(17), big(3)));
        let c = find("-14/17").unwrap();
        assert_eq!((c.p.0.clone(), c.q.0.clone()), (big(17), big(31)));
        assert!(scan(5, 2).unwrap().is_empty());
        let keys: Vec<_> = hits.iter().map(|(s, _)| (s.den().clone(), s.num().clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(scan_parallel(5, 20, 3).unwrap(), hits);
        assert_eq!(scan(13, 5), Err(CertifyError::UnsupportedEll(13)));
    }
}
