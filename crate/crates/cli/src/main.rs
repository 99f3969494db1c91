use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use clonepower::boolfun::DEFAULT_MAX_ARITY;
use clonepower::clone::{self, standard, Verdict};
use clonepower::error::bits;
use clonepower::transform;
use clonepower::{BoolFun, Circuit, Equivalence, GateBase, Oracle, Semantics, TransformError};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "clonepower",
    version,
    about = "Non-deterministic power of Boolean gate bases"
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest n + m the exhaustive oracle will enumerate.
    #[arg(long, global = true, env = "CLONEPOWER_MAX_EXHAUSTIVE", default_value_t = clonepower::circuit::DEFAULT_EXHAUSTIVE_BOUND)]
    max_exhaustive: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Monotone,
    Selfdual,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetArg {
    And,
    Or,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sem {
    Det,
    Nondet,
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Det => Semantics::Det,
            Sem::Nondet => Semantics::Nondet,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a base as LACKS or FULL non-deterministic power.
    Classify { base: PathBuf },
    /// List the closure members up to an arity bound, with witness sizes.
    Closure {
        base: PathBuf,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Allow the constants 0 and 1 as leaves.
        #[arg(long)]
        consts: bool,
    },
    /// Find a witness circuit for a function, given as `<table-bits>:<arity>`.
    Synthesize {
        base: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        consts: bool,
    },
    /// Remove non-deterministic inputs.
    Determinize {
        base: PathBuf,
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replace constants by two fresh inputs.
    Lift {
        base: PathBuf,
        circuit: PathBuf,
        #[arg(long, value_enum)]
        gadget: GadgetArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite NOT gates of an {AND, OR, NOT} circuit.
    Noteliminate {
        circuit: PathBuf,
        /// 1 uses an AND chain and XNOR, 0 an OR chain and XOR.
        #[arg(long, value_parser = ["0", "1"])]
        polarity: String,
        /// Convert the result into this base, with the matching constant added.
        #[arg(long)]
        target_base: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Truth table of a circuit, or its value on one assignment.
    Eval {
        #[arg(long)]
        base: PathBuf,
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Sem::Nondet)]
        semantics: Sem,
        /// Ordinary input bits x1..xn.
        #[arg(long)]
        x: Option<String>,
        /// Non-deterministic input bits y1..ym, for det semantics.
        #[arg(long)]
        y: Option<String>,
    },
    /// Compare the languages of two circuits.
    Equiv {
        #[arg(long)]
        base: PathBuf,
        /// Base of the right circuit, if different.
        #[arg(long)]
        right_base: Option<PathBuf>,
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Sem::Nondet)]
        left_semantics: Sem,
        #[arg(long, value_enum, default_value_t = Sem::Nondet)]
        right_semantics: Sem,
    },
}

enum Failure {
    Usage(String),
    Precondition(String),
    /// A transformed circuit disagreed with its input; carries the assignment.
    Oracle(String, Option<String>),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Oracle(..) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) | Failure::Oracle(m, _) => m,
        }
    }
}

fn pre(e: impl std::fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: Vec<InputDigest>,
    verdict: String,
    outputs: BTreeMap<String, Value>,
    oracle_checked: bool,
    counterexample: Option<String>,
    timing_ms: u64,
}

struct Run {
    command: &'static str,
    inputs: Vec<InputDigest>,
    oracle: Oracle,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
        Ok(text)
    }

    fn base(&mut self, path: &Path) -> Result<Arc<GateBase>, Failure> {
        let text = self.read(path)?;
        GateBase::parse(&text, DEFAULT_MAX_ARITY)
            .map(Arc::new)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn circuit(&mut self, path: &Path, base: Arc<GateBase>) -> Result<Circuit, Failure> {
        let text = self.read(path)?;
        Circuit::parse(&text, base).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn table(&self, c: &Circuit, s: Semantics) -> Result<BoolFun, Failure> {
        self.oracle.truth_table(c, s).map_err(pre)
    }
}

struct Outcome {
    verdict: String,
    outputs: BTreeMap<String, Value>,
    oracle_checked: bool,
    counterexample: Option<String>,
}

impl Outcome {
    fn new(verdict: impl Into<String>) -> Self {
        Outcome {
            verdict: verdict.into(),
            outputs: BTreeMap::new(),
            oracle_checked: false,
            counterexample: None,
        }
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }
}

fn parse_bits(text: &str, len: usize, what: &str) -> Result<Vec<bool>, Failure> {
    let v = text
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Failure::Usage(format!("{what}: invalid bit `{c}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != len {
        return Err(Failure::Usage(format!(
            "{what}: expected {len} bits, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// Writes the netlist only after the oracle accepted it.
fn emit(outcome: Outcome, netlist: &Circuit, output: Option<&Path>) -> Result<Outcome, Failure> {
    let outcome = outcome
        .with("netlist", netlist.to_text())
        .with("gates", netlist.gate_count());
    if let Some(path) = output {
        std::fs::write(path, netlist.to_text())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(outcome)
}

fn check_equal(
    oracle: &Oracle,
    l: &Circuit,
    ls: Semantics,
    r: &Circuit,
    rs: Semantics,
) -> Result<(), Failure> {
    match oracle.equiv(l, ls, r, rs).map_err(pre)? {
        Equivalence::Equal => Ok(()),
        Equivalence::Counterexample(x) => Err(Failure::Oracle(
            "transformed circuit differs from its input".into(),
            Some(bits(&x)),
        )),
    }
}

fn classify(run: &mut Run, base: &Path) -> Result<Outcome, Failure> {
    let base = run.base(base)?;
    let c = clone::classify(base).map_err(pre)?;
    let mut out = Outcome::new(c.verdict.to_string())
        .with("complete", c.complete)
        .with("has_both_constants", c.has_both_constants);
    if let Verdict::Full { gadget, witness } = &c.verdict {
        let t = run.table(witness, Semantics::Det)?;
        if t != gadget.function() {
            return Err(Failure::Oracle(
                format!("witness does not compute {gadget}"),
                None,
            ));
        }
        out = out.with("witness", witness.to_text());
        out.oracle_checked = true;
    }
    Ok(out)
}

fn closure(run: &mut Run, base: &Path, arity: usize, consts: bool) -> Result<Outcome, Failure> {
    let base = run.base(base)?;
    let c = clone::closure(base, arity, consts).map_err(pre)?;
    let members: Vec<Value> = c
        .all_members()
        .into_iter()
        .map(|(f, size)| json!({"arity": f.arity(), "table": f.to_bit_string(), "size": size}))
        .collect();
    let counts: Vec<usize> = (0..=arity).map(|a| c.member_count(a)).collect();
    Ok(Outcome::new(format!("{} members", members.len()))
        .with("members", members)
        .with("counts_by_arity", counts))
}

fn parse_target(text: &str) -> Result<BoolFun, Failure> {
    let (table, arity) = text
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("target `{text}` is not `<table-bits>:<arity>`")))?;
    let arity: usize = arity
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid arity in `{text}`")))?;
    if arity > DEFAULT_MAX_ARITY {
        return Err(Failure::Usage(format!(
            "arity {arity} exceeds {DEFAULT_MAX_ARITY}"
        )));
    }
    let bits = parse_bits(table.trim(), 1 << arity, "target table")?;
    BoolFun::from_bits(arity, bits).map_err(|e| Failure::Usage(e.to_string()))
}

fn synthesize(run: &mut Run, base: &Path, target: &str, consts: bool) -> Result<Outcome, Failure> {
    let f = parse_target(target)?;
    let base = run.base(base)?;
    let c = clone::closure(base, f.arity(), consts).map_err(pre)?;
    match c.member(&f).map_err(pre)? {
        None => Ok(Outcome::new("not a member")),
        Some(w) => {
            if run.table(&w, Semantics::Det)? != f {
                return Err(Failure::Oracle(
                    "witness does not compute the target".into(),
                    None,
                ));
            }
            let mut out = Outcome::new("member")
                .with("witness", w.to_text())
                .with("gates", w.gate_count());
            out.oracle_checked = true;
            Ok(out)
        }
    }
}

fn determinize(
    run: &mut Run,
    base: &Path,
    circuit: &Path,
    mode: Mode,
    output: Option<&Path>,
) -> Result<Outcome, Failure> {
    let base = run.base(base)?;
    let c = run.circuit(circuit, base.clone())?;
    let mode = match mode {
        Mode::Auto if base.is_monotone() => Mode::Monotone,
        Mode::Auto if base.is_linear() => Mode::Linear,
        Mode::Auto if base.is_self_dual() => Mode::Selfdual,
        Mode::Auto => {
            return Err(Failure::Precondition(
                "base is neither monotone, linear nor self-dual".into(),
            ))
        }
        m => m,
    };
    let (name, result) = match mode {
        Mode::Monotone => ("monotone", transform::determinize_monotone(&c)),
        Mode::Selfdual => (
            "selfdual",
            transform::determinize_self_dual(&c, &run.oracle),
        ),
        _ => (
            "linear",
            transform::determinize_linear(&c, base, &run.oracle),
        ),
    };
    let d = match result {
        Ok(d) => d,
        Err(TransformError::NotSelfDual { first, second }) => {
            return Err(Failure::Precondition(format!(
                "accepted function is not self-dual: f({}) = f({})",
                bits(&first),
                bits(&second)
            )))
        }
        Err(e) => return Err(pre(e)),
    };
    check_equal(&run.oracle, &c, Semantics::Nondet, &d, Semantics::Det)?;
    let mut out = Outcome::new("determinized")
        .with("mode", name)
        .with("input_gates", c.gate_count());
    out.oracle_checked = true;
    emit(out, &d, output)
}

/// First `x` violating the padded-language contract, if any.
fn lift_violation(f: &BoolFun, g: &BoolFun, n: usize, and: bool) -> Option<usize> {
    (0..1usize << n).find(|&x| {
        let at = |a: bool, b: bool| g.bit(x | (a as usize) << n | (b as usize) << (n + 1));
        let ok = if and {
            at(true, false) == f.bit(x) && at(true, true) && !at(false, false) && !at(false, true)
        } else {
            at(false, true) == f.bit(x) && at(true, false) && at(true, true) && !at(false, false)
        };
        !ok
    })
}

fn lift(
    run: &mut Run,
    base: &Path,
    circuit: &Path,
    gadget: GadgetArg,
    output: Option<&Path>,
) -> Result<Outcome, Failure> {
    let base = run.base(base)?;
    let c = run.circuit(circuit, base.clone())?;
    let closure = clone::closure(base, 3, false).map_err(pre)?;
    let and = matches!(gadget, GadgetArg::And);
    let out = if and {
        transform::lift_and(&c, &closure)
    } else {
        transform::lift_or(&c, &closure)
    }
    .map_err(pre)?;
    let f = run.table(&c, Semantics::Nondet)?;
    let g = run.table(&out, Semantics::Nondet)?;
    let mut outcome = Outcome::new("lifted").with("contract_rows", 4usize << c.n());
    if let Some(x) = lift_violation(&f, &g, c.n(), and) {
        return Err(Failure::Oracle(
            "padded-language contract fails".into(),
            Some(bits(&clonepower::boolfun::assignment_of(x, c.n()))),
        ));
    }
    if out.const_count() > 0 {
        return Err(Failure::Oracle(
            "lifted circuit still has constants".into(),
            None,
        ));
    }
    outcome.oracle_checked = true;
    emit(outcome, &out, output)
}

fn noteliminate(
    run: &mut Run,
    circuit: &Path,
    polarity: bool,
    target_base: Option<&Path>,
    output: Option<&Path>,
) -> Result<Outcome, Failure> {
    let c = run.circuit(circuit, standard::and_or_not())?;
    let mut out = if polarity {
        transform::not_eliminate_conj(&c)
    } else {
        transform::not_eliminate_disj(&c)
    }
    .map_err(pre)?;
    let mut outcome = Outcome::new("eliminated").with("input_gates", c.gate_count());
    if let Some(path) = target_base {
        let target = run.base(path)?;
        let (name, k) = if polarity {
            ("ONE", clonepower::boolfun::named::one())
        } else {
            ("ZERO", clonepower::boolfun::named::zero())
        };
        let with_const = if target.name_of(&k).is_some() {
            (*target).clone()
        } else {
            target.with_gate(name, k).map_err(pre)?
        };
        let closure = clone::closure(Arc::new(with_const), 2, false).map_err(pre)?;
        outcome = outcome.with("conversion_constant", closure.conversion_constant());
        out = transform::convert_base(&out, &closure).map_err(pre)?;
    }
    check_equal(&run.oracle, &c, Semantics::Det, &out, Semantics::Det)?;
    outcome = outcome.with("table", run.table(&out, Semantics::Det)?.to_bit_string());
    outcome.oracle_checked = true;
    emit(outcome, &out, output)
}

fn eval(
    run: &mut Run,
    base: &Path,
    circuit: &Path,
    sem: Sem,
    x: Option<&str>,
    y: Option<&str>,
) -> Result<Outcome, Failure> {
    let base = run.base(base)?;
    let c = run.circuit(circuit, base)?;
    match x {
        Some(x) => {
            let xs = parse_bits(x, c.n(), "--x")?;
            let value = match (sem, y) {
                (Sem::Det, Some(y)) => c
                    .eval_det(&xs, &parse_bits(y, c.m(), "--y")?)
                    .map_err(pre)?,
                (Sem::Det, None) if c.m() == 0 => c.eval_det(&xs, &[]).map_err(pre)?,
                (Sem::Det, None) => return Err(Failure::Usage("det semantics needs --y".into())),
                (Sem::Nondet, Some(_)) => {
                    return Err(Failure::Usage("--y only applies to det semantics".into()))
                }
                (Sem::Nondet, None) => run.oracle.eval_nondet(&c, &xs).map_err(pre)?,
            };
            let mut out = Outcome::new((value as u8).to_string());
            out.oracle_checked = sem == Sem::Nondet;
            Ok(out)
        }
        None => {
            let t = run.table(&c, sem.into())?;
            let mut out = Outcome::new(t.to_hex())
                .with("arity", t.arity())
                .with("ones", t.count_ones());
            if t.arity() <= 8 {
                out = out.with("bits", t.to_bit_string());
            }
            out.oracle_checked = true;
            Ok(out)
        }
    }
}

fn equiv(
    run: &mut Run,
    base: &Path,
    right_base: Option<&Path>,
    left: &Path,
    right: &Path,
    ls: Sem,
    rs: Sem,
) -> Result<Outcome, Failure> {
    let lb = run.base(base)?;
    let rb = match right_base {
        Some(p) => run.base(p)?,
        None => lb.clone(),
    };
    let l = run.circuit(left, lb)?;
    let r = run.circuit(right, rb)?;
    let mut out = match run
        .oracle
        .equiv(&l, ls.into(), &r, rs.into())
        .map_err(pre)?
    {
        Equivalence::Equal => Outcome::new("equal"),
        Equivalence::Counterexample(x) => {
            let mut o = Outcome::new("different");
            o.counterexample = Some(bits(&x));
            o
        }
    };
    out.oracle_checked = true;
    Ok(out)
}

fn dispatch(run: &mut Run, cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Classify { base } => classify(run, base),
        Command::Closure {
            base,
            arity,
            consts,
        } => closure(run, base, *arity, *consts),
        Command::Synthesize {
            base,
            target,
            consts,
        } => synthesize(run, base, target, *consts),
        Command::Determinize {
            base,
            circuit,
            mode,
            output,
        } => determinize(run, base, circuit, *mode, output.as_deref()),
        Command::Lift {
            base,
            circuit,
            gadget,
            output,
        } => lift(run, base, circuit, *gadget, output.as_deref()),
        Command::Noteliminate {
            circuit,
            polarity,
            target_base,
            output,
        } => noteliminate(
            run,
            circuit,
            polarity == "1",
            target_base.as_deref(),
            output.as_deref(),
        ),
        Command::Eval {
            base,
            circuit,
            semantics,
            x,
            y,
        } => eval(run, base, circuit, *semantics, x.as_deref(), y.as_deref()),
        Command::Equiv {
            base,
            right_base,
            left,
            right,
            left_semantics,
            right_semantics,
        } => equiv(
            run,
            base,
            right_base.as_deref(),
            left,
            right,
            *left_semantics,
            *right_semantics,
        ),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classify { .. } => "classify",
        Command::Closure { .. } => "closure",
        Command::Synthesize { .. } => "synthesize",
        Command::Determinize { .. } => "determinize",
        Command::Lift { .. } => "lift",
        Command::Noteliminate { .. } => "noteliminate",
        Command::Eval { .. } => "eval",
        Command::Equiv { .. } => "equiv",
    }
}

fn render_text(report: &RunReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "{}: {}", report.command, report.verdict).unwrap();
    if let Some(x) = &report.counterexample {
        writeln!(out, "counterexample: {x}").unwrap();
    }
    for (key, value) in &report.outputs {
        match value {
            Value::String(s) if s.contains('\n') => write!(out, "{key}:\n{s}").unwrap(),
            Value::String(s) => writeln!(out, "{key}: {s}").unwrap(),
            Value::Array(items) if items.iter().all(Value::is_object) => {
                writeln!(out, "{key}:").unwrap();
                for item in items {
                    let fields: Vec<String> = item
                        .as_object()
                        .unwrap()
                        .iter()
                        .map(|(k, v)| {
                            format!(
                                "{k}={}",
                                v.as_str().map(str::to_string).unwrap_or(v.to_string())
                            )
                        })
                        .collect();
                    writeln!(out, "  {}", fields.join(" ")).unwrap();
                }
            }
            other => writeln!(out, "{key}: {other}").unwrap(),
        }
    }
    writeln!(out, "oracle_checked: {}", report.oracle_checked).unwrap();
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut run = Run {
        command: command_name(&cli.command),
        inputs: Vec::new(),
        oracle: Oracle::new(cli.max_exhaustive),
    };
    let (outcome, code) = match dispatch(&mut run, &cli.command) {
        Ok(outcome) => (outcome, 0),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            let mut o = Outcome::new("error")
                .with("error", failure.message())
                .with("exit_code", failure.code());
            if let Failure::Oracle(_, x) = &failure {
                o.counterexample = x.clone();
            }
            (o, failure.code())
        }
    };
    let report = RunReport {
        command: run.command,
        inputs: run.inputs,
        verdict: outcome.verdict,
        outputs: outcome.outputs,
        oracle_checked: outcome.oracle_checked,
        counterexample: outcome.counterexample,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    // Failures only print a report in JSON mode; the message is on stderr.
    let text = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else if code == 0 {
        render_text(&report)
    } else {
        String::new()
    };
    // A closed pipe (`| head`) is not an error worth reporting.
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(code)
}
