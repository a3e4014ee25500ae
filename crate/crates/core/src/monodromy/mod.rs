//! The rigid triple `(g0, g1, ginf)` in G2(l): class data, randomized
//! construction, verification, and the class-power witness for `ginf`.

mod hinf;

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ff::poly::Poly;
use crate::ff::{make_field, FieldCtx, FieldError, FieldHeader};
use crate::g2::{build_group, G2Error, GroupCtx, ProductReplacement, DIM};
use crate::linalg::{
    charpoly, commutant, jcf_signature, rank, JcfSignature, LinalgError, Mat,
};
use crate::modstruct::{self, ExclusionRow, ModError, Module};

pub use hinf::{solve_h_inf_p, HSolution};

/// Characteristics for which the triple construction is refused.
pub const EXCLUDED_ELLS: [u64; 5] = [2, 3, 7, 11, 13];
pub const DEFAULT_RETRIES: u64 = 10_000;
pub const DEFAULT_MAX_TRIALS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("l = {0} is not supported for the triple (need l not in {{2, 3, 7, 11, 13}})")]
    UnsupportedEll(u64),
    #[error("no triple found within {0} trials")]
    TrialsExhausted(u64),
    #[error("no suitable {0} found within the retry limit")]
    RetriesExhausted(&'static str),
    #[error("p = {0} must be coprime to 7")]
    BadPrime(u64),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("malformed triple: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] G2Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Module(#[from] ModError),
}

/// Jordan data of one conjugacy class: for each eigenvalue, its block partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassShape {
    pub name: String,
    pub partitions: Vec<Vec<usize>>,
}

impl ClassShape {
    pub fn from_signature(name: &str, sig: &JcfSignature) -> ClassShape {
        let mut partitions: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for &(e, l) in sig.blocks() {
            if last != Some(e) {
                partitions.push(Vec::new());
                last = Some(e);
            }
            partitions.last_mut().unwrap().push(l);
        }
        ClassShape { name: name.to_string(), partitions }
    }

    pub fn size(&self) -> usize {
        self.partitions.iter().flatten().sum()
    }

    /// `dim Z(g) = sum over eigenvalues of sum_{i,j} min(lambda_i, lambda_j)`.
    pub fn centralizer_dim(&self) -> usize {
        self.partitions
            .iter()
            .map(|p| p.iter().flat_map(|&a| p.iter().map(move |&b| a.min(b))).sum::<usize>())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassData {
    pub classes: Vec<ClassShape>,
}

impl ClassData {
    /// The local data of the G2 triple: an involution with eigenvalues
    /// `(-1)^4, 1^3`, a unipotent of shape `3 + 2 + 2`, and a regular element
    /// of order 7.
    pub fn target() -> ClassData {
        let shape = |name: &str, p: Vec<Vec<usize>>| ClassShape { name: name.into(), partitions: p };
        ClassData {
            classes: vec![
                shape("g0", vec![vec![1; 4], vec![1; 3]]),
                shape("g1", vec![vec![3, 2, 2]]),
                shape("ginf", vec![vec![1]; 7]),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rigidity {
    pub n: usize,
    pub centralizer_dims: Vec<usize>,
    pub index: usize,
    pub rigid: bool,
}

/// Sum of centralizer dimensions; rigid iff it equals `n^2 + 2`.
pub fn rigidity_index(cd: &ClassData) -> Rigidity {
    let n = cd.classes.first().map_or(0, ClassShape::size);
    let dims: Vec<usize> = cd.classes.iter().map(ClassShape::centralizer_dim).collect();
    let index = dims.iter().sum();
    Rigidity { n, centralizer_dims: dims, index, rigid: index == n * n + 2 }
}

fn x7_minus_1(ctx: &FieldCtx) -> Poly {
    Poly::from_i64s(ctx, &[-1, 0, 0, 0, 0, 0, 0, 1])
}

/// `|G|` with every factor 7 removed.
fn seven_free_part(order: &BigUint) -> BigUint {
    let mut m = order.clone();
    while (&m % 7u32).is_zero() {
        m /= 7u32;
    }
    m
}

/// A regular element of order 7, obtained by powering random members.
pub fn find_order7(
    g: &GroupCtx,
    pr: &mut ProductReplacement,
    rng: &mut ChaCha8Rng,
    retries: u64,
) -> Result<Mat, MonodromyError> {
    let e = seven_free_part(g.order());
    let target = x7_minus_1(g.ctx());
    for _ in 0..retries {
        let y = pr.next(g, rng).pow(&e);
        if is_regular_order7(&y, &target) {
            return Ok(y);
        }
    }
    Err(MonodromyError::RetriesExhausted("regular element of order 7"))
}

fn is_regular_order7(y: &Mat, target: &Poly) -> bool {
    !y.is_identity() && y.pow_u64(7).is_identity() && charpoly(y) == *target
}

/// An involution of trace -1.
pub fn find_involution(
    g: &GroupCtx,
    pr: &mut ProductReplacement,
    rng: &mut ChaCha8Rng,
    retries: u64,
) -> Result<Mat, MonodromyError> {
    let minus_one = g.ctx().from_i64(-1);
    for _ in 0..retries {
        let m = pr.next(g, rng);
        let o = g.element_order(&m);
        if (&o % 2u32).is_zero() {
            let i = m.pow(&(o / 2u32));
            if i.trace() == minus_one && i.mul(&i).is_identity() {
                return Ok(i);
            }
        }
    }
    Err(MonodromyError::RetriesExhausted("involution"))
}

/// Unipotent with Jordan blocks `3 + 2 + 2`: ranks of `(u - 1)^k` are 4, 1, 0.
pub fn has_unipotent_profile(u: &Mat) -> bool {
    let n = u.shift(u.ctx().one());
    if rank(&n) != 4 {
        return false;
    }
    let n2 = n.mul(&n);
    rank(&n2) == 1 && n2.mul(&n).is_zero()
}

#[derive(Clone, Debug)]
pub struct MonodromyTriple {
    pub group: GroupCtx,
    pub g0: Mat,
    pub g1: Mat,
    pub ginf: Mat,
    pub seed: u64,
    pub trials: u64,
}

pub fn check_ell(ell: u64) -> Result<(), MonodromyError> {
    if EXCLUDED_ELLS.contains(&ell) {
        return Err(MonodromyError::UnsupportedEll(ell));
    }
    Ok(())
}

fn search(
    g: &GroupCtx,
    seed: u64,
    max_trials: u64,
    stop: &AtomicBool,
) -> Result<MonodromyTriple, MonodromyError> {
    if max_trials == 0 {
        return Err(MonodromyError::TrialsExhausted(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pr = g.sampler(&mut rng);
    let ginf = find_order7(g, &mut pr, &mut rng, DEFAULT_RETRIES)?;
    let iota = find_involution(g, &mut pr, &mut rng, DEFAULT_RETRIES)?;
    let ginf_inv = g.member_inverse(&ginf);
    for trial in 1..=max_trials {
        if trial % 1024 == 0 && stop.load(Ordering::Relaxed) {
            break;
        }
        let h = pr.next(g, &mut rng);
        let g0 = h.mul(&iota).mul(&g.member_inverse(&h));
        let g1 = g0.mul(&ginf_inv);
        if has_unipotent_profile(&g1) {
            return Ok(MonodromyTriple { group: g.clone(), g0, g1, ginf, seed, trials: trial });
        }
    }
    Err(MonodromyError::TrialsExhausted(max_trials))
}

/// Randomized search for `g0 g1 ginf = 1` with the target local data.
/// With one worker the result depends only on `(l, seed)`.
pub fn build_triple(
    g: &GroupCtx,
    seed: u64,
    max_trials: u64,
    workers: usize,
) -> Result<MonodromyTriple, MonodromyError> {
    check_ell(g.ell())?;
    let stop = AtomicBool::new(false);
    if workers <= 1 {
        return search(g, seed, max_trials, &stop);
    }
    let share = max_trials.div_ceil(workers as u64);
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let stop = &stop;
                s.spawn(move || {
                    let derived = seed ^ w.wrapping_mul(0x9e37_79b9_7f4a_7c15);
                    let r = search(g, derived, share, stop);
                    if r.is_ok() {
                        stop.store(true, Ordering::Relaxed);
                    }
                    r
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });
    let mut last_err = MonodromyError::TrialsExhausted(max_trials);
    for r in results {
        match r {
            Ok(t) => return Ok(t),
            Err(e @ MonodromyError::RetriesExhausted(_)) => last_err = e,
            Err(_) => {}
        }
    }
    Err(last_err)
}

impl MonodromyTriple {
    pub fn ell(&self) -> u64 {
        self.group.ell()
    }

    pub fn mats(&self) -> [&Mat; 3] {
        [&self.g0, &self.g1, &self.ginf]
    }

    pub fn module(&self) -> Module {
        Module::new(vec![self.g0.clone(), self.g1.clone(), self.ginf.clone()])
    }

    /// Simultaneous conjugate `X g_i X^-1`.
    pub fn conjugate(&self, x: &Mat) -> Result<MonodromyTriple, MonodromyError> {
        let xi = x.inverse()?;
        let c = |m: &Mat| x.mul(m).mul(&xi);
        Ok(MonodromyTriple {
            group: self.group.clone(),
            g0: c(&self.g0),
            g1: c(&self.g1),
            ginf: c(&self.ginf),
            seed: self.seed,
            trials: self.trials,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell(),
            "field": self.group.ctx().header(),
            "g0": self.g0.to_json(),
            "g1": self.g1.to_json(),
            "ginf": self.ginf.to_json(),
            "seed": self.seed,
            "trials": self.trials,
        })
    }

    pub fn from_json(v: &Value) -> Result<MonodromyTriple, MonodromyError> {
        let bad = |m: &str| MonodromyError::Parse(m.to_string());
        let ell = v["ell"].as_u64().ok_or_else(|| bad("missing ell"))?;
        let header: FieldHeader =
            serde_json::from_value(v["field"].clone()).map_err(|e| bad(&e.to_string()))?;
        let group = build_group(ell)?;
        if header != group.ctx().header() {
            return Err(bad("field header does not match the prime field of l"));
        }
        let ctx = group.ctx().clone();
        let mat = |k: &str| Mat::from_json(&ctx, &v[k]);
        let (g0, g1, ginf) = (mat("g0")?, mat("g1")?, mat("ginf")?);
        if [&g0, &g1, &ginf].iter().any(|m| m.rows() != DIM) {
            return Err(bad("matrices must be 7x7"));
        }
        Ok(MonodromyTriple {
            group,
            g0,
            g1,
            ginf,
            seed: v["seed"].as_u64().ok_or_else(|| bad("missing seed"))?,
            trials: v["trials"].as_u64().ok_or_else(|| bad("missing trials"))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass, detail: detail.into() }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub checks: Vec<Check>,
    pub exclusions: Vec<ExclusionRow>,
    pub verdict: String,
}

impl TripleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.exclusions.iter().all(|r| r.excluded)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Target signatures over the extension containing the 7th roots of unity.
pub fn target_signatures(ext: &FieldCtx) -> [JcfSignature; 3] {
    let one = ext.one();
    let m1 = ext.from_i64(-1);
    let zeta = ext.zeta();
    [
        JcfSignature::new([vec![(m1, 1); 4], vec![(one, 1); 3]].concat()),
        JcfSignature::new(vec![(one, 3), (one, 2), (one, 2)]),
        JcfSignature::new((0..7).map(|k| (ext.pow_u64(zeta, k), 1)).collect()),
    ]
}

/// Product relation, local signatures, membership, (absolute) irreducibility
/// and the maximal-subgroup exclusions, each reported separately.
pub fn verify_triple(t: &MonodromyTriple) -> Result<TripleReport, MonodromyError> {
    let g = &t.group;
    let ctx = g.ctx();
    let ext = make_field(t.ell())?;
    let mut checks = Vec::new();

    let product = t.g0.mul(&t.g1).mul(&t.ginf);
    checks.push(check("product_relation", product.is_identity(), "g0 g1 ginf = 1"));

    let targets = target_signatures(&ext);
    for ((name, m), want) in ["g0", "g1", "ginf"].iter().zip(t.mats()).zip(&targets) {
        let got = jcf_signature(&m.extend_scalars(&ext)?);
        let (pass, detail) = match got {
            Ok(sig) => (sig == *want, sig.describe(&ext)),
            Err(e) => (false, e.to_string()),
        };
        checks.push(check(&format!("signature_{name}"), pass, detail));
    }
    checks.push(check(
        "charpoly_ginf",
        charpoly(&t.ginf) == x7_minus_1(ctx),
        "x^7 - 1",
    ));
    for (name, m) in ["g0", "g1", "ginf"].iter().zip(t.mats()) {
        checks.push(check(&format!("member_{name}"), g.is_member(m), "preserves both forms"));
    }

    let module = t.module();
    let irreducible = modstruct::is_irreducible(&module)?;
    checks.push(check("irreducible", irreducible, "MeatAxe over F_l"));
    let comm = commutant(ctx, DIM, &module.generators);
    checks.push(check(
        "absolutely_irreducible",
        irreducible && comm.len() == 1,
        format!("commutant dimension {}", comm.len()),
    ));

    let exclusions = modstruct::exclusion_report(&module, g)?;
    let generates = exclusions.generates && checks.iter().all(|c| c.pass);
    let exclusions = exclusions.rows;
    let verdict = if generates {
        format!("generates G2({})", t.ell())
    } else {
        format!("does not certify generation of G2({})", t.ell())
    };
    Ok(TripleReport { checks, exclusions, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub name: String,
    pub signature: String,
    pub stable: bool,
}

/// Compares the Jordan signature of each element with that of its entrywise
/// Frobenius image, after moving eigenvalues by Frobenius.
pub fn frobenius_class_stability(mats: &[(&str, &Mat)]) -> Result<Vec<Stability>, MonodromyError> {
    let mut out = Vec::new();
    for &(name, m) in mats {
        let ext = if m.ctx().degree() == 1 { make_field(m.ctx().ell())? } else { m.ctx().clone() };
        let m = if m.ctx() == &ext { m.clone() } else { m.extend_scalars(&ext)? };
        let sig = jcf_signature(&m)?;
        let frob_sig = jcf_signature(&m.frobenius_entrywise())?;
        let moved = sig.map_eigenvalues(|e| ext.frobenius(e));
        out.push(Stability {
            name: name.to_string(),
            signature: sig.describe(&ext),
            stable: frob_sig == moved && moved == sig,
        });
    }
    Ok(out)
}

pub fn triple_stability(t: &MonodromyTriple) -> Result<Vec<Stability>, MonodromyError> {
    frobenius_class_stability(&[("g0", &t.g0), ("g1", &t.g1), ("ginf", &t.ginf)])
}
