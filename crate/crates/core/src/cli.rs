//! Command-line front end. `run` is pure apart from reading input files and
//! writing requested output files, so it is also driven from tests.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{run_all, AcceptanceConfig, DEFAULT_SEED};
use crate::algebra::IntMat;
use crate::constants::{
    bound_report, consistency_report, h_closed, kazhdan_lower_a, kazhdan_lower_a_double_prime,
    kazhdan_lower_a_prime, kazhdan_upper, verify_chain_r2, verify_chain_rp, verify_chain_rpq, BoundOptions,
    HTable,
};
use crate::factor::{expand_to_elementary, factor_full, verify_certificate, DEFAULT_EXPAND_CAP};
use crate::spectral::{cayley_graph, compare_bounds, enumerate_group, mixing_time, spectrum};
use crate::torus::{check_bp_cp, check_mapping_identities, check_partition, check_symmetry, partition_table};
use crate::vecsys::{reduce_to_standard, Policy, Ring, VectorSystem};

pub const SCHEMA_VERSION: &str = "1";
pub const SEED_ENV: &str = "BOUNDGEN_SEED";

#[derive(Parser, Debug)]
#[command(name = "boundgen", version, about = "Bounded generation, Kazhdan-constant bounds and Cayley-graph checks")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kazhdan-constant bounds, sweeps and inequality-chain checks.
    Constants(ConstantsArgs),
    /// Factor a matrix of SL_n(Z) into generalized elementary matrices.
    Factor(FactorArgs),
    /// Reduce a complete vector system to the standard one.
    Reduce(ReduceArgs),
    /// Exhaustive grid checks of the torus partition and set mappings.
    VerifyTorus(TorusArgs),
    /// Spectral gap of the Cayley graph of SL_n(F_p) against the bounds.
    Spectral(SpectralArgs),
    /// Lazy-walk mixing time on the Cayley graph of SL_n(F_p).
    Mix(MixArgs),
    /// Run every acceptance criterion and print a summary.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Field size for the SL_n(F_p) bounds.
    #[arg(long)]
    p: Option<u64>,
    /// Group order to use in the mixing and product-replacement bounds.
    #[arg(long)]
    group_size: Option<BigUint>,
    /// Also report the mixing bound as β·log|G|.
    #[arg(long)]
    literal: bool,
    /// CSV with one row per n in lo:hi.
    #[arg(long, value_name = "LO:HI", conflicts_with_all = ["n", "verify_chains", "consistency"])]
    sweep: Option<String>,
    #[arg(long, conflicts_with_all = ["n", "consistency"])]
    verify_chains: bool,
    #[arg(long, default_value_t = 10_000)]
    p_max: u64,
    #[arg(long, default_value_t = 10_000)]
    q_max: u64,
    /// Consistency report for 3 <= n <= N.
    #[arg(long, value_name = "N", conflicts_with = "n")]
    consistency: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Z3k,
    Z2k1,
    Fp2k,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Z3k => Policy::Z3k,
            PolicyArg::Z2k1 => Policy::Z2k1,
            PolicyArg::Fp2k => Policy::Fp2k,
        }
    }
}

#[derive(Args, Debug)]
struct FactorArgs {
    /// Matrix file: "rows cols" header, then one row per line.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "z3k")]
    policy: PolicyArg,
    /// Also emit the word in E_n as (i, j, sign) triples.
    #[arg(long)]
    expand: bool,
    #[arg(long, default_value_t = DEFAULT_EXPAND_CAP)]
    expand_cap: u64,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// k×n matrix whose columns are the vectors.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "z3k")]
    policy: PolicyArg,
    /// Prime modulus, required by fp2k.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Debug)]
struct TorusArgs {
    #[arg(long, default_value_t = 64)]
    grid: i64,
    /// Dimension for the coordinate-set check (3..=5); defaults to p=3, Q=8 and p=4, Q=4.
    #[arg(long)]
    p: Option<usize>,
    /// Grid for the coordinate-set check when --p is given.
    #[arg(long)]
    bp_grid: Option<i64>,
    /// Write the boundary-convention table as JSON.
    #[arg(long, value_name = "PATH")]
    emit_table: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectralArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Write every eigenvalue as CSV (dense sizes only).
    #[arg(long, value_name = "PATH")]
    spectrum_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0.25)]
    threshold: f64,
    #[arg(long, default_value_t = 10_000)]
    cap: u64,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Reduced sweeps (n <= 1000, Q <= 64).
    #[arg(long)]
    quick: bool,
    /// JSON instead of the text table.
    #[arg(long)]
    json: bool,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, passed: bool) -> Self {
        Outcome { code: if passed { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

type CmdResult = Result<Outcome, Outcome>;

fn usage<E: std::fmt::Display>(e: E) -> Outcome {
    Outcome::usage(e)
}

fn envelope(command: &str, body: impl Serialize) -> String {
    let mut v = serde_json::to_value(body).expect("serializable report");
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn read_matrix(path: &Path) -> Result<IntMat, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    IntMat::parse_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Outcome> {
    std::fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_range(s: &str) -> Result<(u64, u64), Outcome> {
    let bad = || usage(format!("--sweep expects LO:HI with 3 <= LO <= HI, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?);
    if lo < 3 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn constants(a: ConstantsArgs) -> CmdResult {
    if let Some(range) = &a.sweep {
        let (lo, hi) = parse_range(range)?;
        let table = HTable::compute(hi);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "h_dp",
            "h_closed",
            "kazhdan_lower_A",
            "kazhdan_lower_Aprime",
            "kazhdan_lower_Adoubleprime",
            "kazhdan_upper",
            "kazhdan_from_h_dp",
        ])
        .expect("in-memory csv");
        for n in lo..=hi {
            let h = table.get(n).map_err(usage)?;
            let row = [h, h_closed(n), kazhdan_lower_a(n), kazhdan_lower_a_prime(n)]
                .into_iter()
                .chain([kazhdan_lower_a_double_prime(n), kazhdan_upper(n), std::f64::consts::SQRT_2 / h]);
            let mut rec = vec![n.to_string()];
            rec.extend(row.map(|x| format!("{x:e}")));
            w.write_record(&rec).expect("in-memory csv");
        }
        let bytes = w.into_inner().expect("flush");
        return Ok(Outcome::ok(String::from_utf8(bytes).expect("utf8"), true));
    }
    if a.verify_chains {
        let reports = [verify_chain_r2(), verify_chain_rp(a.p_max), verify_chain_rpq(a.p_max, a.q_max)];
        let passed = reports.iter().all(|r| r.passed());
        let out = envelope("constants", json!({ "passed": passed, "chains": reports }));
        return Ok(Outcome::ok(out, passed));
    }
    if let Some(n_max) = a.consistency {
        if n_max < 3 {
            return Err(usage("--consistency needs N >= 3"));
        }
        let r = consistency_report(3, n_max);
        let passed = r.all_verified();
        return Ok(Outcome::ok(envelope("constants", r), passed));
    }
    let n = a.n.ok_or_else(|| usage("constants needs one of --n, --sweep, --verify-chains, --consistency"))?;
    let opts = BoundOptions { p: a.p, group_size: a.group_size, literal_mixing: a.literal };
    let r = bound_report(n, &opts).map_err(usage)?;
    Ok(Outcome::ok(envelope("constants", r), true))
}

#[derive(Serialize)]
struct FactorOutput {
    verified: bool,
    #[serde(flatten)]
    certificate: crate::factor::FactorCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<Vec<(usize, usize, i8)>>,
}

fn factor(a: FactorArgs) -> CmdResult {
    let g = read_matrix(&a.input)?;
    let policy = Policy::from(a.policy);
    if policy == Policy::Fp2k {
        return Err(usage("factor works over Z; use --policy z3k or z2k1"));
    }
    let cert = factor_full(&g, policy).map_err(usage)?;
    let verified = verify_certificate(&cert, &g);
    let word = if a.expand {
        let w = expand_to_elementary(&cert, a.expand_cap).map_err(usage)?;
        Some(w.into_iter().map(|l| (l.i, l.j, l.sign)).collect())
    } else {
        None
    };
    Ok(Outcome::ok(envelope("factor", FactorOutput { verified, certificate: cert, word }), verified))
}

fn reduce(a: ReduceArgs) -> CmdResult {
    let m = read_matrix(&a.input)?;
    let policy = Policy::from(a.policy);
    let ring = match (policy, a.p) {
        (Policy::Fp2k, Some(p)) => Ring::Prime(p),
        (Policy::Fp2k, None) => return Err(usage("--policy fp2k needs --p")),
        (_, None) => Ring::Integers,
        (_, Some(_)) => return Err(usage("--p only applies to --policy fp2k")),
    };
    let v = VectorSystem::new(m, ring).map_err(usage)?;
    let t = reduce_to_standard(&v, policy).map_err(usage)?;
    let verified = t.verify(&v);
    let mut body = serde_json::to_value(&t).expect("json");
    body["verified"] = json!(verified);
    Ok(Outcome::ok(envelope("reduce", body), verified))
}

fn verify_torus(a: TorusArgs) -> CmdResult {
    if a.grid < 4 {
        return Err(usage("--grid must be at least 4"));
    }
    if let Some(path) = &a.emit_table {
        let table = envelope("verify-torus", json!({ "partition_table": partition_table() }));
        write_file(path, &table)?;
    }
    let cases: Vec<(usize, i64)> = match a.p {
        Some(p) if !(3..=5).contains(&p) => return Err(usage("--p must be in 3..=5")),
        Some(p) => vec![(p, a.bp_grid.unwrap_or(if p == 3 { 8 } else { 4 }))],
        None => vec![(3, 8), (4, 4)],
    };
    if let Some(&(p, q)) = cases.iter().find(|(p, q)| (*q as f64).powi(*p as i32) > 2e7) {
        return Err(usage(format!("coordinate-set grid {q}^{p} is too large")));
    }
    let partition = check_partition(a.grid);
    let identities = check_mapping_identities(a.grid);
    let symmetry = check_symmetry(a.grid);
    let bp: Vec<_> = cases.iter().map(|&(p, q)| check_bp_cp(p, q)).collect();
    let per_identity: serde_json::Map<String, Value> =
        identities.identities.iter().map(|r| (r.name.to_string(), json!(r.violations()))).collect();
    let bp_violations: u64 = bp.iter().map(|r| r.violations).sum();
    let passed = partition.violations == 0
        && identities.violations() == 0
        && (a.grid == 4 || identities.control.violations() > 0)
        && symmetry.violations == 0
        && bp_violations == 0
        && identities.grid_bijective != Some(false);
    let body = json!({
        "grid": a.grid,
        "partition_violations": partition.violations,
        "identity_violations": per_identity,
        "control_violations": identities.control.violations(),
        "symmetry_violations": symmetry.violations,
        "bp_cp_violations": bp_violations,
        "grid_bijective": identities.grid_bijective,
        "partition": partition,
        "identities": identities,
        "bp_cp": bp,
    });
    Ok(Outcome::ok(envelope("verify-torus", body), passed))
}

fn spectral(a: SpectralArgs) -> CmdResult {
    let r = compare_bounds(a.n, a.p, a.cap).map_err(usage)?;
    if let Some(path) = &a.spectrum_csv {
        let g = cayley_graph(enumerate_group(a.n, a.p, a.cap).map_err(usage)?);
        let ev = spectrum(&g.graph).map_err(usage)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "eigenvalue"]).expect("in-memory csv");
        for (i, e) in ev.iter().enumerate() {
            w.write_record([i.to_string(), format!("{e:e}")]).expect("in-memory csv");
        }
        write_file(path, &String::from_utf8(w.into_inner().expect("flush")).expect("utf8"))?;
    }
    let passed = r.bound_checks.lower_holds != Some(false);
    Ok(Outcome::ok(envelope("spectral", r), passed))
}

fn mix(a: MixArgs) -> CmdResult {
    let g = cayley_graph(enumerate_group(a.n, a.p, a.cap).map_err(usage)?);
    let m = mixing_time(&g.graph, a.threshold, 1_000_000).map_err(usage)?;
    let body = json!({
        "n": a.n,
        "p": a.p,
        "order": g.graph.vertices,
        "threshold": a.threshold,
        "steps": m.steps,
        "distance": m.distance,
    });
    Ok(Outcome::ok(envelope("mix", body), true))
}

fn report(a: ReportArgs, seed: u64) -> CmdResult {
    let results = run_all(&AcceptanceConfig { quick: a.quick, seed });
    let passed = results.iter().all(|r| r.passed);
    let out = if a.json {
        envelope("report", json!({ "quick": a.quick, "seed": seed, "passed": passed, "criteria": results }))
    } else {
        let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
        let n_pass = results.iter().filter(|r| r.passed).count();
        s.push_str(&format!("{n_pass}/{} criteria passed\n", results.len()));
        s
    };
    Ok(Outcome::ok(out, passed))
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match cli.command {
        Command::Constants(a) => constants(a),
        Command::Factor(a) => factor(a),
        Command::Reduce(a) => reduce(a),
        Command::VerifyTorus(a) => verify_torus(a),
        Command::Spectral(a) => spectral(a),
        Command::Mix(a) => mix(a),
        Command::Report(a) => report(a, cli.seed),
    };
    result.unwrap_or_else(|e| e)
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let out = run(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
