//! `matsemi` command-line front-end.
//!
//! Every subcommand produces a [`report::Report`]; the exit code is 0 on
//! success, 1 when a self-check fails, 2 on bad input and 3 when a size cap
//! stops the computation.

mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use matsemi::conjugacy::{conjugacy_chain, core, sg_classes, ClassMethod};
use matsemi::flags::{
    consolidation, flag_transporter, is_k_maximal, nilpotency_degree, phi_enumerate, phi_size_exponent, psi, Flag,
};
use matsemi::isolated::{
    classify, enumerate_isolated, ideal, ideal_generated_by_stratum, is_completely_isolated, is_isolated, EnumMode,
};
use matsemi::nilclass::{iso_construct, iso_decide, FieldClass, NilContext};
use matsemi::semigroup::{closure, MatSet};
use matsemi::verify::{verify_selected, Profile, VerifyOptions};
use matsemi::{Error, Field, Limits, Matrix};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "matsemi", version, about = "Exact computations in the matrix semigroup M(n, F_q)")]
struct Cli {
    /// Field as `p` or `p^k`.
    #[arg(long, global = true, default_value = "2")]
    field: String,

    /// Matrix size.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Raise the element caps to at least this many.
    #[arg(long, global = true)]
    max_elems: Option<u64>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup-conjugacy classes of M(n, F_q).
    Classes {
        #[arg(long, value_enum, default_value_t = MethodArg::Core)]
        method: MethodArg,
        /// Recompute with a second method and require the partitions to agree.
        #[arg(long, value_enum)]
        check: Option<MethodArg>,
    },
    /// Stability index, image/kernel splitting and core of a matrix.
    Core {
        #[arg(long)]
        matrix: String,
    },
    /// Primary-conjugacy chain from a matrix to its core.
    Chain {
        #[arg(long)]
        matrix: String,
    },
    #[command(subcommand)]
    Flags(FlagsCmd),
    #[command(subcommand)]
    Nil(NilCmd),
    #[command(subcommand)]
    Isolated(IsolatedCmd),
    #[command(subcommand)]
    Ideal(IdealCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum FlagsCmd {
    /// Enumerate the nilpotent semigroup of a flag.
    Phi {
        #[arg(long)]
        flag: String,
    },
    /// Flag of a nilpotent set of matrices.
    Psi(ElemArgs),
    /// Whether a nilpotent semigroup is maximal for its nilpotency degree.
    Maximal(ElemArgs),
    /// Whether the first flag refines the second.
    Consolidation {
        #[arg(long)]
        flag: String,
        #[arg(long)]
        flag2: String,
    },
}

#[derive(Args)]
struct ElemArgs {
    /// Matrix, repeatable.
    #[arg(long = "elem", required = true)]
    elems: Vec<String>,
    /// Replace the set by the semigroup it generates.
    #[arg(long)]
    closure: bool,
}

#[derive(Args)]
struct FlagSource {
    /// Flag of F^n.
    #[arg(long, conflicts_with = "sig")]
    flag: Option<String>,
    /// Signature, e.g. `1,2,1`, for the standard flag.
    #[arg(long, value_delimiter = ',')]
    sig: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum NilCmd {
    /// Isomorphism invariants of the semigroup of a flag.
    Fingerprint(FlagSource),
    /// Decide isomorphism of two flag semigroups from their signatures.
    /// Here `--field` also accepts `infinite`.
    IsoDecide {
        #[arg(long)]
        n1: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sig1: Vec<usize>,
        #[arg(long)]
        n2: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sig2: Vec<usize>,
    },
    /// Explicit isomorphism between the semigroups of two flags.
    IsoConstruct {
        #[arg(long)]
        flag: String,
        #[arg(long)]
        flag2: String,
    },
}

#[derive(Subcommand)]
enum IsolatedCmd {
    /// List isolated subsemigroups of M(n, F_q).
    Enum {
        #[arg(long, value_enum, default_value_t = ModeArg::Predicted)]
        mode: ModeArg,
    },
    /// Test a set of matrices for (complete) isolation.
    Check(ElemArgs),
}

#[derive(Subcommand)]
enum IdealCmd {
    /// Semigroup generated by the rank-k matrices.
    Gen {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run the acceptance checks.
    All {
        #[arg(long, value_enum, default_value_t = ProfileArg::Full)]
        profile: ProfileArg,
        /// Criterion ids to run, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Core,
    Brute,
}

impl From<MethodArg> for ClassMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Core => ClassMethod::Core,
            MethodArg::Brute => ClassMethod::Brute,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Predicted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

/// Outcome of a subcommand: the result payload and whether its self-checks held.
struct Outcome {
    params: Map<String, Value>,
    result: Value,
    ok: bool,
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("params are objects"),
    }
}

fn parse_elems(field: &Field, n: usize, args: &ElemArgs, limits: &Limits) -> Result<MatSet, Error> {
    let elems = args
        .elems
        .iter()
        .map(|s| Matrix::parse(field, s))
        .collect::<Result<Vec<_>, _>>()?;
    let set = MatSet::new(field, n, elems)?;
    if args.closure {
        closure(&set, limits)
    } else {
        Ok(set)
    }
}

fn flag_from(field: &Field, n: usize, src: &FlagSource) -> Result<Flag, Error> {
    match (&src.flag, &src.sig) {
        (Some(f), _) => Flag::parse(field, n, f),
        (None, Some(sig)) if sig.iter().sum::<usize>() == n => Flag::standard(field, sig),
        (None, Some(sig)) => Err(Error::BadSignature { sig: sig.clone(), n }),
        (None, None) => Err(Error::Parse("give --flag or --sig".into())),
    }
}

fn run(cli: &Cli, limits: &Limits) -> Result<(String, Outcome), Error> {
    let n = cli.n;
    let field = || cli.field.parse::<Field>();
    let mut params = obj(json!({ "field": cli.field, "n": n }));
    let (name, result, ok) = match &cli.command {
        Command::Classes { method, check } => {
            let f = field()?;
            let main = sg_classes(&f, n, (*method).into(), limits)?;
            let classes: Vec<Vec<String>> = main
                .classes()
                .iter()
                .map(|c| c.iter().map(|m| m.to_string()).collect())
                .collect();
            let mut result = obj(json!({
                "method": ClassMethod::from(*method),
                "elements": main.elements.len(),
                "class_count": classes.len(),
                "size_multiset": main.size_multiset(),
                "classes": classes,
            }));
            let mut ok = true;
            params.insert("method".into(), to_json(&ClassMethod::from(*method)));
            if let Some(c) = check {
                let other = sg_classes(&f, n, (*c).into(), limits)?;
                ok = other.partition == main.partition;
                params.insert("check".into(), to_json(&ClassMethod::from(*c)));
                result.insert("check".into(), json!({ "method": ClassMethod::from(*c), "agrees": ok }));
            }
            ("classes", Value::Object(result), ok)
        }
        Command::Core { matrix } => {
            let a = Matrix::parse(&field()?, matrix)?;
            params.insert("matrix".into(), json!(matrix));
            ("core", to_json(&core(&a)?), true)
        }
        Command::Chain { matrix } => {
            let a = Matrix::parse(&field()?, matrix)?;
            params.insert("matrix".into(), json!(matrix));
            let chain = conjugacy_chain(&a)?;
            let ok = chain.is_valid();
            let mut result = obj(to_json(&chain));
            result.insert("valid".into(), json!(ok));
            ("chain", Value::Object(result), ok)
        }
        Command::Flags(cmd) => {
            let f = field()?;
            match cmd {
                FlagsCmd::Phi { flag } => {
                    let fl = Flag::parse(&f, n, flag)?;
                    params.insert("flag".into(), json!(flag));
                    let elems = phi_enumerate(&fl, limits)?;
                    let predicted = (f.q() as u128).pow(phi_size_exponent(&fl.signature()) as u32);
                    let ok = predicted == elems.len() as u128;
                    let result = json!({
                        "flag": fl,
                        "signature": fl.signature(),
                        "size": elems.len(),
                        "predicted_size": predicted,
                        "nilpotency_degree": nilpotency_degree(&elems)?,
                        "elements": elems,
                    });
                    ("flags phi", result, ok)
                }
                FlagsCmd::Psi(args) => {
                    let s = parse_elems(&f, n, args, limits)?;
                    params.insert("elems".into(), json!(args.elems));
                    params.insert("closure".into(), json!(args.closure));
                    let fl = psi(&s)?;
                    let result = json!({
                        "flag": fl,
                        "signature": fl.signature(),
                        "nilpotency_degree": nilpotency_degree(&s)?,
                    });
                    ("flags psi", result, true)
                }
                FlagsCmd::Maximal(args) => {
                    let s = parse_elems(&f, n, args, limits)?;
                    params.insert("elems".into(), json!(args.elems));
                    params.insert("closure".into(), json!(args.closure));
                    let result = json!({
                        "size": s.len(),
                        "nilpotency_degree": nilpotency_degree(&s)?,
                        "maximal": is_k_maximal(&s, limits)?,
                    });
                    ("flags maximal", result, true)
                }
                FlagsCmd::Consolidation { flag, flag2 } => {
                    let (f1, f2) = (Flag::parse(&f, n, flag)?, Flag::parse(&f, n, flag2)?);
                    params.insert("flag".into(), json!(flag));
                    params.insert("flag2".into(), json!(flag2));
                    let refines = consolidation(&f1, &f2)?;
                    let contained = phi_enumerate(&f2, limits)?.is_subset(&phi_enumerate(&f1, limits)?);
                    let result = json!({
                        "consolidates": refines,
                        "phi2_within_phi": contained,
                    });
                    ("flags consolidation", result, refines == contained)
                }
            }
        }
        Command::Nil(cmd) => match cmd {
            NilCmd::Fingerprint(src) => {
                let f = field()?;
                let fl = flag_from(&f, n, src)?;
                params.insert("flag".into(), json!(src.flag));
                params.insert("sig".into(), json!(src.sig));
                let ctx = NilContext::new(&fl, limits)?;
                let result = json!({
                    "flag": fl,
                    "signature": fl.signature(),
                    "fingerprint": ctx.fingerprint()?,
                });
                ("nil fingerprint", result, true)
            }
            NilCmd::IsoDecide { n1, sig1, n2, sig2 } => {
                let class = if cli.field == "infinite" {
                    FieldClass::Infinite
                } else {
                    FieldClass::Finite(field()?.q() as u64)
                };
                params = obj(json!({
                    "field": cli.field, "n1": n1, "sig1": sig1, "n2": n2, "sig2": sig2,
                }));
                let verdict = iso_decide(class, *n1, sig1, *n2, sig2)?;
                ("nil iso-decide", json!({ "verdict": verdict }), true)
            }
            NilCmd::IsoConstruct { flag, flag2 } => {
                let f = field()?;
                let (f1, f2) = (Flag::parse(&f, n, flag)?, Flag::parse(&f, n, flag2)?);
                params.insert("flag".into(), json!(flag));
                params.insert("flag2".into(), json!(flag2));
                let (c1, c2) = (NilContext::new(&f1, limits)?, NilContext::new(&f2, limits)?);
                let map = iso_construct(&c1, &c2)?;
                let pairs: Vec<[String; 2]> = map
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| [c1.matrix(i as u32).to_string(), c2.matrix(j).to_string()])
                    .collect();
                let result = json!({
                    "signature": f1.signature(),
                    "conjugator": flag_transporter(&f1, &f2)?,
                    "size": pairs.len(),
                    "mapping": pairs,
                });
                ("nil iso-construct", result, true)
            }
        },
        Command::Isolated(cmd) => {
            let f = field()?;
            match cmd {
                IsolatedCmd::Enum { mode } => {
                    let mode = match mode {
                        ModeArg::Exhaustive => EnumMode::Exhaustive,
                        ModeArg::Predicted => EnumMode::Predicted,
                    };
                    params.insert("mode".into(), to_json(&mode));
                    let e = enumerate_isolated(&f, n, mode, limits)?;
                    let ok = e.matches_prediction != Some(false);
                    let mut result = obj(json!({
                        "count": e.records.len(),
                        "completely_isolated_count": e.completely_isolated().count(),
                    }));
                    result.extend(obj(to_json(&e)));
                    ("isolated enum", Value::Object(result), ok)
                }
                IsolatedCmd::Check(args) => {
                    let s = parse_elems(&f, n, args, limits)?;
                    params.insert("elems".into(), json!(args.elems));
                    params.insert("closure".into(), json!(args.closure));
                    let (kind, family) = classify(&s, limits)?;
                    let result = json!({
                        "size": s.len(),
                        "kind": kind,
                        "family": family,
                        "isolated": is_isolated(&s, limits)?,
                        "completely_isolated": is_completely_isolated(&s, limits)?,
                    });
                    ("isolated check", result, true)
                }
            }
        }
        Command::Ideal(IdealCmd::Gen { k }) => {
            let f = field()?;
            params.insert("k".into(), json!(k));
            let generated = ideal_generated_by_stratum(&f, n, *k, limits)?;
            let expected = ideal(&f, n, *k, limits)?;
            let ok = generated == expected;
            let result = json!({
                "size": generated.len(),
                "ideal_size": expected.len(),
                "equals_ideal": ok,
            });
            ("ideal gen", result, ok)
        }
        Command::Verify(VerifyCmd::All {
            profile,
            only,
            inject_fault,
        }) => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            params.insert("profile".into(), to_json(&profile));
            params.insert("only".into(), json!(only));
            let opts = VerifyOptions {
                profile,
                inject_fault: *inject_fault,
            };
            let rep = verify_selected(&opts, only);
            let ok = rep.passed;
            ("verify all", to_json(&rep), ok)
        }
    };
    Ok((name.to_string(), Outcome { params, result, ok }))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Internal(_) | Error::InvariantViolation(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let limits = match cli.max_elems {
        Some(m) => Limits::default().with_max_elems(m),
        None => Limits::default(),
    };

    let start = Instant::now();
    let (command, outcome) = match run(&cli, &limits) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let report = Report {
        command,
        params: outcome.params,
        caps: limits,
        result: outcome.result,
    };
    let text = report.render(cli.format, Some(start.elapsed()));
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: verification failed");
        ExitCode::from(1)
    }
}
