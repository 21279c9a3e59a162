use std::io::{self, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cyclocover::certify::{
    certify, enumerate_families, shimura_count, Certificate, EnumerationMode, Verdict,
};
use cyclocover::hodge::{eigenspace_table, report, WeightTuple};
use cyclocover::monodromy::sweep::{sweep, SweepReport};
use cyclocover::monodromy::{
    finiteness_by_signature, group_closure_with, has_common_eigenvector, invariant_hermitian_form,
    is_irreducible, levelt_triple, params_from_weights, ClosureOptions, Generator,
};
use cyclocover::surface::{admissible_families, standard_family, FamilyData};
use cyclocover::Error;

const SCHEMA_VERSION: &str = "1.0";
const SWEEP_SAFE_N_MAX: u32 = 16;

const EXIT_INVALID: u8 = 1;
const EXIT_INCONSISTENT: u8 = 2;
const EXIT_NOT_CERTIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cyclocover",
    version,
    about = "Cyclic covers of P^1 branched at four points, their monodromy, and the fibred surfaces built from them"
)]
struct Cli {
    /// Print the JSON schema of the output records and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenspace table (or a single character) of a weight tuple.
    Analyze {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm', value_delimiter = ',', required = true)]
        m: Vec<u32>,
        #[arg(short = 'j')]
        j: Option<i64>,
    },
    /// Certificate for a family (n; m; n').
    Certify {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm', value_delimiter = ',', required = true)]
        m: Vec<u32>,
        #[arg(long = "nw", value_delimiter = ',', required = true)]
        nw: Vec<u32>,
        /// Also enumerate the monodromy group of the flat character.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Certify families over a range of n, one JSON line per family.
    #[command(group(ArgGroup::new("mode").args(["standard_only", "all"])))]
    Enumerate {
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        standard_only: bool,
        #[arg(long)]
        all: bool,
        /// Collapse families related by the symmetries of the construction.
        #[arg(long)]
        normalize: bool,
    },
    /// Compare the signature criteria with the matrix oracle exhaustively.
    Sweep {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Shimura-curve candidates among admissible families, one JSON line each.
    Shimura {
        #[arg(long, default_value_t = 5)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        standard_only: bool,
    },
    /// Inspect the monodromy triple of one character.
    Oracle {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm', value_delimiter = ',', required = true)]
        m: Vec<u32>,
        #[arg(short = 'j')]
        j: i64,
        #[command(flatten)]
        closure: ClosureArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ClosureArgs {
    #[arg(long, default_value_t = ClosureOptions::default().cap)]
    cap: usize,
    #[arg(long = "max-word", default_value_t = ClosureOptions::default().max_word_len)]
    max_word: usize,
}

impl From<ClosureArgs> for ClosureOptions {
    fn from(a: ClosureArgs) -> Self {
        ClosureOptions {
            cap: a.cap.max(1),
            max_word_len: a.max_word.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Check {
    name: String,
    passed: bool,
    details: Value,
}

fn check(name: &str, passed: bool, details: Value) -> Check {
    Check {
        name: name.to_string(),
        passed,
        details,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct OutputRecord {
    schema_version: String,
    command: String,
    inputs: Value,
    result: Value,
    checks: Vec<Check>,
}

impl OutputRecord {
    fn new(command: &str, inputs: Value, result: Value, checks: Vec<Check>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            result,
            checks,
        }
    }
}

struct Output {
    out: io::StdoutLock<'static>,
}

impl Output {
    fn emit(&mut self, record: &OutputRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")
    }
}

enum Failure {
    Invalid(String),
    Inconsistent(String),
    /// The reader went away; not an error for a streaming tool.
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Inconsistent(format!("write failed: {e}"))
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn weights(n: u32, m: &[u32]) -> Result<WeightTuple, Failure> {
    let m: [u32; 4] = m
        .try_into()
        .map_err(|_| Failure::Invalid("expected four weights".into()))?;
    Ok(WeightTuple::new(n, m)?)
}

fn analyze(out: &mut Output, n: u32, m: &[u32], j: Option<i64>) -> Result<u8, Failure> {
    let w = weights(n, m)?;
    let inputs = json!({ "n": n, "m": m, "j": j });
    let (result, checks) = match j {
        Some(j) => {
            let r = report(&w, w.character(j))?;
            let checks = vec![check(
                "sigma_in_range",
                [n, 2 * n, 3 * n].contains(&r.sigma),
                json!({ "sigma": r.sigma }),
            )];
            (to_value(&r), checks)
        }
        None => {
            let table = eigenspace_table(&w);
            let reports: Vec<_> = table.iter().filter_map(|e| e.report()).collect();
            let total: u32 = reports.iter().map(|r| r.dim_h10).sum();
            let complementary = reports.iter().all(|r| {
                reports
                    .iter()
                    .find(|s| s.j == n - r.j)
                    .is_none_or(|s| s.sigma + r.sigma == 4 * n)
            });
            let mut checks = vec![check(
                "complementary_sigma",
                complementary,
                json!({ "sum": 4 * n }),
            )];
            if w.all_units() {
                checks.push(check(
                    "genus_sum",
                    total == n - 1,
                    json!({ "sum_dim_h10": total, "expected": n - 1 }),
                ));
            }
            (json!({ "weights": w, "table": table }), checks)
        }
    };
    out.emit(&OutputRecord::new("analyze", inputs, result, checks))?;
    Ok(0)
}

fn run_certify(
    out: &mut Output,
    n: u32,
    m: &[u32],
    nw: &[u32],
    oracle: bool,
    closure: ClosureOptions,
) -> Result<u8, Failure> {
    let m: [u32; 4] = m
        .try_into()
        .map_err(|_| Failure::Invalid("expected four weights".into()))?;
    let nw: [u32; 3] = nw
        .try_into()
        .map_err(|_| Failure::Invalid("expected three base weights".into()))?;
    let f = FamilyData::new(n, m, nw)?;
    let cert = certify(&f, oracle.then_some(&closure));
    let inputs = json!({
        "n": n, "m": m, "nw": nw, "oracle": oracle,
        "cap": closure.cap, "max_word": closure.max_word_len,
    });
    let mut checks = vec![
        check(
            "admissible",
            cert.admissible,
            json!({ "reason": cert.admissibility_reason }),
        ),
        check(
            "smooth",
            cert.smooth,
            json!({ "pairs": cert.smoothness.pairs.len() }),
        ),
        check("irreducible_all", cert.irreducible_all, Value::Null),
        check(
            "rank_flat_at_least_2",
            cert.splitting.rank_flat >= 2,
            json!({ "rank_flat": cert.splitting.rank_flat }),
        ),
        check(
            "infinite_witness_valid",
            cert.infinite_witness
                .as_ref()
                .is_some_and(|x| x.is_valid(f.weights())),
            to_value(&cert.infinite_witness),
        ),
    ];
    if oracle {
        let agrees = cert.oracle.as_ref().and_then(|o| o.agrees);
        checks.push(check(
            "oracle_agrees",
            agrees == Some(true),
            to_value(&cert.oracle),
        ));
    }
    let code = certify_exit_code(&cert);
    out.emit(&OutputRecord::new(
        "certify",
        inputs,
        to_value(&cert),
        checks,
    ))?;
    Ok(code)
}

/// A disagreement between criterion and oracle outranks the verdict.
fn certify_exit_code(cert: &Certificate) -> u8 {
    if cert
        .oracle
        .as_ref()
        .is_some_and(|o| o.agrees == Some(false))
    {
        return EXIT_INCONSISTENT;
    }
    match cert.verdict {
        Verdict::Counterexample => 0,
        Verdict::NotCertified { .. } => EXIT_NOT_CERTIFIED,
    }
}

fn sweep_exit_code(r: &SweepReport) -> u8 {
    if r.is_consistent() {
        0
    } else {
        EXIT_INCONSISTENT
    }
}

fn enumerate(
    out: &mut Output,
    n_min: u32,
    n_max: u32,
    all: bool,
    normalize: bool,
) -> Result<u8, Failure> {
    let mode = if all {
        EnumerationMode::All
    } else {
        EnumerationMode::StandardOnly
    };
    let entries = enumerate_families(n_min, n_max, mode, normalize)?;
    let inputs = json!({ "n_min": n_min, "n_max": n_max, "mode": mode, "normalize": normalize });
    let mut code = 0;
    for e in &entries {
        let certified = e.verdict.is_counterexample();
        if !certified {
            code = EXIT_NOT_CERTIFIED;
        }
        let checks = vec![check("certified", certified, to_value(&e.verdict))];
        out.emit(&OutputRecord::new(
            "enumerate",
            inputs.clone(),
            to_value(e),
            checks,
        ))?;
    }
    Ok(code)
}

fn run_sweep(out: &mut Output, n_max: u32, closure: ClosureOptions) -> Result<u8, Failure> {
    if !(4..=SWEEP_SAFE_N_MAX).contains(&n_max) {
        return Err(Failure::Invalid(format!(
            "--n-max must lie in 4..={SWEEP_SAFE_N_MAX}"
        )));
    }
    let r = sweep(n_max, &closure, None);
    let s = &r.summary;
    let inconclusive: Vec<Value> = r
        .inconclusive_instances()
        .map(|i| json!({ "n": i.n, "m": i.m, "j": i.j }))
        .collect();
    let disagreements: Vec<Value> = r
        .instances
        .iter()
        .filter(|i| {
            i.finiteness_disagrees() || i.irreducibility_disagrees() || i.signature_disagrees()
        })
        .map(to_value)
        .collect();
    let checks = vec![
        check(
            "finiteness_agrees",
            s.disagreements == 0,
            json!({ "disagreements": s.disagreements }),
        ),
        check(
            "irreducibility_agrees",
            s.irreducibility_disagreements == 0,
            json!({ "disagreements": s.irreducibility_disagreements }),
        ),
        check(
            "signature_agrees",
            s.signature_disagreements == 0,
            json!({ "disagreements": s.signature_disagreements }),
        ),
    ];
    let result =
        json!({ "summary": s, "inconclusive": inconclusive, "disagreements": disagreements });
    let inputs = json!({ "n_max": n_max, "cap": closure.cap, "max_word": closure.max_word_len });
    out.emit(&OutputRecord::new("sweep", inputs, result, checks))?;
    Ok(sweep_exit_code(&r))
}

fn shimura(out: &mut Output, n_min: u32, n_max: u32, standard_only: bool) -> Result<u8, Failure> {
    if n_min > n_max {
        return Err(Failure::Invalid(format!(
            "--n-min {n_min} exceeds --n-max {n_max}"
        )));
    }
    let inputs = json!({ "n_min": n_min, "n_max": n_max, "standard_only": standard_only });
    for n in n_min..=n_max {
        let families = if standard_only {
            standard_family(n).into_iter().collect()
        } else {
            admissible_families(n)
        };
        for f in families {
            let r = shimura_count(f.weights());
            let result = json!({ "family": f, "count": r.count, "pairs": r.pairs, "candidate": r.candidate });
            out.emit(&OutputRecord::new(
                "shimura",
                inputs.clone(),
                result,
                Vec::new(),
            ))?;
        }
    }
    Ok(0)
}

fn oracle(
    out: &mut Output,
    n: u32,
    m: &[u32],
    j: i64,
    closure: ClosureOptions,
) -> Result<u8, Failure> {
    let w = weights(n, m)?;
    let cj = w.character(j);
    if cj.is_zero() {
        return Err(Error::ZeroCharacter.into());
    }
    let p = params_from_weights(&w, cj);
    let inputs =
        json!({ "n": n, "m": m, "j": j, "cap": closure.cap, "max_word": closure.max_word_len });
    let t = levelt_triple(&p, w.modulus())?;
    let field = t.field();
    let generators: Vec<Value> = Generator::ALL
        .iter()
        .map(|&g| {
            let mat = t.generator(g).to_rational(field);
            json!({
                "name": g.name(),
                "trace": mat.trace().to_string(),
                "det": mat.det().to_string(),
            })
        })
        .collect();
    let form = invariant_hermitian_form(&t).ok();
    let verdict = group_closure_with(&t, &closure);
    let criterion = finiteness_by_signature(&w, cj).ok();
    let expected = report(&w, cj).ok().map(|r| r.signature);
    let disagrees = criterion
        .as_ref()
        .is_some_and(|c| c.disagrees_with(&verdict));
    let checks = vec![
        check("product_is_identity", t.product_is_identity(), Value::Null),
        check(
            "irreducibility_agrees",
            is_irreducible(&w, cj) != has_common_eigenvector(&t),
            Value::Null,
        ),
        check(
            "signature_agrees",
            form.as_ref().map(|f| f.signature) == expected,
            json!({ "form": form.as_ref().map(|f| f.signature), "hodge": expected }),
        ),
        check(
            "finiteness_agrees",
            !disagrees,
            json!({ "criterion": criterion }),
        ),
    ];
    let result = json!({
        "params": p,
        "level": t.level(),
        "generators": generators,
        "hermitian_form": form.as_ref().map(|f| json!({
            "matrix": f.matrix.0.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "signature": f.signature,
        })),
        "verdict": verdict,
        "criterion": criterion,
    });
    out.emit(&OutputRecord::new("oracle", inputs, result, checks))?;
    Ok(if disagrees { EXIT_INCONSISTENT } else { 0 })
}

fn schema() -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "cyclocover output record",
        "type": "object",
        "required": ["schema_version", "command", "inputs", "result", "checks"],
        "properties": {
            "schema_version": { "const": SCHEMA_VERSION },
            "command": { "enum": ["analyze", "certify", "enumerate", "sweep", "shimura", "oracle"] },
            "inputs": { "type": "object" },
            "result": {},
            "checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "passed", "details"],
                    "properties": {
                        "name": { "type": "string" },
                        "passed": { "type": "boolean" },
                        "details": {}
                    }
                }
            }
        },
        "$defs": {
            "rational": { "type": "string", "pattern": "^-?[0-9]+/[1-9][0-9]*$" }
        }
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut out = Output {
        out: io::stdout().lock(),
    };
    if cli.schema {
        serde_json::to_writer_pretty(&mut out.out, &schema()).map_err(io::Error::from)?;
        out.out.write_all(b"\n")?;
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(Failure::Invalid("no command given; see --help".into()));
    };
    match command {
        Command::Analyze { n, m, j } => analyze(&mut out, n, &m, j),
        Command::Certify {
            n,
            m,
            nw,
            oracle,
            closure,
        } => run_certify(&mut out, n, &m, &nw, oracle, closure.into()),
        Command::Enumerate {
            n_min,
            n_max,
            all,
            normalize,
            ..
        } => enumerate(&mut out, n_min, n_max, all, normalize),
        Command::Sweep { n_max, closure } => run_sweep(&mut out, n_max, closure.into()),
        Command::Shimura {
            n_min,
            n_max,
            standard_only,
        } => shimura(&mut out, n_min, n_max, standard_only),
        Command::Oracle { n, m, j, closure } => oracle(&mut out, n, &m, j, closure.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
        Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
    }
}
