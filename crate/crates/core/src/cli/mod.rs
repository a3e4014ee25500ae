//! Command-line front end. `dispatch` parses arguments, runs one subcommand
//! and maps the outcome to an exit code: 0 success, 1 inconclusive or failed
//! check, 2 usage or environment error.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{self, factor::is_prime_u64, Outcome, Rational};
use crate::g2::{self, build_group, enumerate, DIM};
use crate::linalg::{invariant_forms, FormKind};
use crate::modstruct::h_module_analysis;
use crate::monodromy::{self, build_triple, solve_h_inf_p, verify_triple, MonodromyTriple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SELFTEST_SAMPLES: usize = 100;
const ADMISSIBLE_SEARCH_BOUND: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(name = "g2mono", version, about = "G2(F_l) monodromy computations and specialization certificates")]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans and triple searches.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a certificate that the specialization at s is surjective.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        ell: u64,
    },
    /// Certify every a/b with |a|, b up to the height.
    Scan {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        height: u64,
    },
    /// Order of G2(l) with its factorization.
    Order {
        #[arg(long)]
        ell: u64,
    },
    /// Group-level self tests.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Build or verify a monodromy triple.
    Triple {
        #[command(subcommand)]
        action: TripleAction,
    },
    /// Exhaustive enumeration of G2(3).
    Enumerate {
        #[arg(long)]
        ell: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GroupAction {
    /// Form-space dimensions, parabolic flags and a membership closure sample.
    Selftest {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = monodromy::DEFAULT_MAX_TRIALS)]
    max_trials: u64,
    /// Destination for the triple JSON; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum TripleAction {
    Build(BuildArgs),
    /// Verify a stored triple, including the class-power witness for ginf.
    Verify {
        #[arg(long)]
        file: PathBuf,
        /// Prime for the class-power witness; defaults to the smallest admissible one.
        #[arg(long)]
        p: Option<u64>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(e: impl Display) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

type CmdResult = Result<(i32, Value, String), Failure>;

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn check_prime_ell(ell: u64) -> Result<(), Failure> {
    if is_prime_u64(ell) {
        Ok(())
    } else {
        Err(usage(format!("l = {ell} is not a prime")))
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let json = cli.json;
    let result = std::panic::catch_unwind(|| run(cli))
        .unwrap_or_else(|_| Err(usage("internal error")));
    match result {
        Ok((code, value, human)) => {
            let text = if json { serde_json::to_string_pretty(&value).expect("json") } else { human };
            emit(&text);
            code
        }
        Err(f) => {
            if json {
                emit(&json!({ "error": f.message }).to_string());
            }
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> CmdResult {
    let workers = cli.workers.max(1);
    match cli.command {
        Command::Certify { s, ell } => cmd_certify(&s, ell),
        Command::Scan { ell, height } => cmd_scan(ell, height, workers),
        Command::Order { ell } => cmd_order(ell),
        Command::Group { action: GroupAction::Selftest { ell, seed } } => cmd_selftest(ell, seed),
        Command::Triple { action: TripleAction::Build(a) } => cmd_build(a, workers),
        Command::Triple { action: TripleAction::Verify { file, p } } => cmd_verify(&file, p),
        Command::Enumerate { ell } => cmd_enumerate(ell),
    }
}

fn cmd_certify(s: &str, ell: u64) -> CmdResult {
    let s: Rational = s.parse().map_err(usage)?;
    let outcome = certify::certify(&s, ell).map_err(usage)?;
    let human = match &outcome {
        Outcome::Certified(c) => format!(
            "certified s = {} for l = {}: p = {} (nu_p(s) = {}), q = {} (nu_q(s-1) = {})",
            c.s, c.ell, c.p, c.nu_p_s, c.q, c.nu_q_s_minus_1
        ),
        Outcome::Inconclusive(i) => {
            let fails: Vec<String> =
                i.failures.iter().map(|(k, v)| format!("{k}: {}", v.join(", "))).collect();
            format!("inconclusive for s = {} and l = {}\n  {}", i.s, i.ell, fails.join("\n  "))
        }
    };
    let code = if outcome.is_certified() { EXIT_OK } else { EXIT_FAIL };
    Ok((code, to_value(&outcome), human))
}

fn cmd_scan(ell: u64, height: u64, workers: usize) -> CmdResult {
    let found = certify::scan_parallel(ell, height, workers).map_err(usage)?;
    let certs: Vec<Value> = found
        .iter()
        .map(|(_, c)| to_value(&Outcome::Certified(c.clone())))
        .collect();
    let mut human = format!("{} certified points of height <= {height} for l = {ell}", found.len());
    for (s, c) in &found {
        human.push_str(&format!("\n  {s}  p = {}  q = {}", c.p, c.q));
    }
    Ok((EXIT_OK, json!({ "ell": ell, "height": height, "certified": certs }), human))
}

fn cmd_order(ell: u64) -> CmdResult {
    check_prime_ell(ell)?;
    let order = g2::group_order(ell);
    let fac = certify::factor::factor(&order).map_err(usage)?;
    let human = format!("|G2({ell})| = {order} = {fac}");
    let value = json!({ "ell": ell, "order": order.to_string(), "factorization": fac.to_string() });
    Ok((EXIT_OK, value, human))
}

fn cmd_selftest(ell: u64, seed: u64) -> CmdResult {
    check_prime_ell(ell)?;
    let g = build_group(ell).map_err(usage)?;
    let mats = g.generator_mats();
    let sym = invariant_forms(g.ctx(), DIM, &mats, FormKind::Sym2).len();
    let alt = invariant_forms(g.ctx(), DIM, &mats, FormKind::Alt3).len();
    let flags = g.parabolic_flags();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = g.sampler(&mut rng);
    let members = (0..SELFTEST_SAMPLES).filter(|_| g.is_member(&sampler.next(&g, &mut rng))).count();
    let pass = sym == 1 && alt == 1 && flags.iter().all(|f| f.pass) && members == SELFTEST_SAMPLES;
    let human = format!(
        "{g}\n  sym2 forms: {sym}\n  alt3 forms: {alt}\n  parabolic flags: {}/{} stabilized\n  random members preserving both forms: {members}/{SELFTEST_SAMPLES}\n  {}",
        flags.iter().filter(|f| f.pass).count(),
        flags.len(),
        if pass { "PASS" } else { "FAIL" }
    );
    let value = json!({
        "ell": ell,
        "sym2_dim": sym,
        "alt3_dim": alt,
        "parabolic_flags": flags.iter().map(|f| json!({
            "parabolic": f.parabolic, "generator": f.generator, "flag_dim": f.flag_dim, "pass": f.pass,
        })).collect::<Vec<_>>(),
        "members_sampled": SELFTEST_SAMPLES,
        "members_preserving": members,
        "pass": pass,
    });
    Ok((if pass { EXIT_OK } else { EXIT_FAIL }, value, human))
}

fn cmd_build(a: BuildArgs, workers: usize) -> CmdResult {
    monodromy::check_ell(a.ell).map_err(usage)?;
    let g = build_group(a.ell).map_err(usage)?;
    let t = match build_triple(&g, a.seed, a.max_trials, workers) {
        Ok(t) => t,
        Err(e @ monodromy::MonodromyError::TrialsExhausted(_)) => {
            return Ok((EXIT_FAIL, json!({ "error": e.to_string() }), e.to_string()))
        }
        Err(e) => return Err(usage(e)),
    };
    let doc = t.to_json();
    let mut human = format!("triple for l = {} found after {} trials (seed {})", a.ell, t.trials, t.seed);
    if let Some(path) = &a.out {
        let text = serde_json::to_string_pretty(&doc).expect("json");
        std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        human.push_str(&format!("\n  written to {}", path.display()));
    } else {
        human.push_str(&format!("\n{}", serde_json::to_string_pretty(&doc).expect("json")));
    }
    Ok((EXIT_OK, doc, human))
}

fn cmd_verify(file: &PathBuf, p: Option<u64>) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let t = MonodromyTriple::from_json(&doc).map_err(usage)?;
    let report = verify_triple(&t).map_err(usage)?;
    let p = match p {
        Some(p) => p,
        None => *certify::find_admissible_primes(t.ell(), ADMISSIBLE_SEARCH_BOUND)
            .first()
            .ok_or_else(|| usage("no admissible prime below the search bound"))?,
    };
    let (h_value, h_line, modules, h_ok) = match solve_h_inf_p(&t, p) {
        Ok(sol) => {
            let analysis = h_module_analysis(&t.ginf, &[t.ginf.clone(), sol.h.clone()], &t.g1);
            let (mvalue, mline, mok) = match analysis {
                Ok(r) => (to_value(&r), format!("module structure under <ginf, h>: {}", r.verdict), r.verdict == "indecomposable"),
                Err(e) => (json!({ "error": e.to_string() }), format!("module structure: {e}"), false),
            };
            let line = format!(
                "h_inf,{p}: found, eigenline transport {:?} (orientation {:+})",
                sol.transport, sol.orientation
            );
            (to_value(&sol), line, (mvalue, mline), mok)
        }
        Err(e) => (json!({ "p": p, "error": e.to_string() }), format!("h_inf,{p}: {e}"), (Value::Null, String::new()), false),
    };
    let pass = report.all_pass() && h_ok;
    let mut human = String::new();
    for c in &report.checks {
        human.push_str(&format!("{} {:<24} {}\n", mark(c.pass), c.name, c.detail));
    }
    for r in &report.exclusions {
        human.push_str(&format!("{} excluded {:<30} {}\n", mark(r.excluded), r.subgroup_type, r.witness));
    }
    human.push_str(&format!("verdict: {}\n{h_line}\n{}", report.verdict, modules.1));
    let value = json!({
        "report": to_value(&report),
        "h_inf_p": h_value,
        "modules": modules.0,
        "pass": pass,
    });
    Ok((if pass { EXIT_OK } else { EXIT_FAIL }, value, human))
}

fn mark(pass: bool) -> &'static str {
    if pass { "[ok]  " } else { "[FAIL]" }
}

fn cmd_enumerate(ell: u64) -> CmdResult {
    check_prime_ell(ell)?;
    let g = build_group(ell).map_err(usage)?;
    let n = enumerate(&g).map_err(usage)?;
    let expected = g.order().to_string();
    let pass = n.to_string() == expected;
    let human = format!("enumerated {n} elements of G2({ell}); order formula gives {expected}");
    let value = json!({ "ell": ell, "enumerated": n, "order_formula": expected, "pass": pass });
    Ok((if pass { EXIT_OK } else { EXIT_FAIL }, value, human))
}
