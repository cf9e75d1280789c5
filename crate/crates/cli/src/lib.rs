//! The `falg` command line.
//!
//! Every subcommand reads one presentation file and writes a report to
//! stdout, either as text or, with `--json`, as one JSON document. Exit
//! codes: 0 for success or a true verdict, 1 for a false verdict, 2 when a
//! bound ran out before an answer was found, 3 for bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use falg::adjunction::{
    check_all_laws, check_triangle_identities, monad_from_monoid, monoid_from_monad, unit_nu,
    FinitePowerset, IdentityMonad, LawReport, LawSweep, Monad, PresentedMonad,
};
use falg::algebra::{
    ffp_quotient_witness, is_generated_by, kernel_pairs_to_depth, saturate,
    smallest_generating_set, FiniteAlgebra, Saturation,
};
use falg::colimit::{chain_colimit, OmegaChain};
use falg::congruence::{
    closure_build, finite_generation_witness, CongruenceClass, GroundPresentation, Witness,
};
use falg::equational::{bounded_theory_congruence, variety_membership, Verdict};
use falg::format::{self, MonadSpec, PresentationFile};
use falg::signature::{chain_sizes, chain_stage};
use falg::term::parse_term;
use falg::{Atom, Error, FinSet, Limits, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_BOUND: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Environment variable overriding the global node cap.
pub const NODE_CAP_VAR: &str = "FALG_NODE_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "falg",
    version,
    about = "Finitely presented algebras: word problems, quotients, monads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Clone, Copy, Debug)]
struct Options {
    /// Term depth for enumerations and bounded monads.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    /// Instantiation depth for equations.
    #[arg(long = "inst-depth", global = true, default_value_t = 3)]
    inst_depth: usize,
    /// Class budget for saturation.
    #[arg(long = "max-classes", global = true, default_value_t = 1000)]
    max_classes: usize,
    /// Stage bound for chain colimits.
    #[arg(long, global = true, default_value_t = 6)]
    bound: usize,
    /// Largest set size swept by `laws`.
    #[arg(long, global = true, default_value_t = 3)]
    size: usize,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a file, and summarize it.
    Check { file: PathBuf },
    /// Decide whether two terms over the generators are equal.
    Word {
        file: PathBuf,
        lhs: String,
        rhs: String,
    },
    /// Partition the terms up to `--depth` into congruence classes.
    Classes { file: PathBuf },
    /// Find the finite quotient algebra, if there is one within `--max-classes`.
    Saturate { file: PathBuf },
    /// The monoid `T1` induced by the file's monad.
    Monoid { file: PathBuf },
    /// Check monad, strength and adjunction laws pointwise.
    Laws { file: PathBuf },
    /// Free-monad chain sizes and the colimit of depth truncations.
    Chain { file: PathBuf },
    /// Generating sets, quotient witnesses and finite relation sets.
    Witness {
        file: PathBuf,
        /// Restrict to one algebra block.
        #[arg(long)]
        algebra: Option<String>,
        /// Check this comma-separated subset instead of searching.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
    },
}

/// A finished report.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeCapExceeded { .. }
            | Error::DepthBudgetExceeded { .. }
            | Error::BudgetExceeded(_)
            | Error::CarrierNotMaterializable(_) => EXIT_BOUND,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let json = cli.opts.json;
    let outcome = limits_from_env().and_then(|limits| dispatch(&cli.command, &cli.opts, &limits));
    match outcome {
        Ok(report) => {
            let body = if json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            report.code
        }
        Err(f) => {
            if json {
                let doc = json!({ "status": "error", "exit": f.code, "message": f.message });
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("reports serialize")
                );
            }
            let _ = writeln!(err, "falg: {}", f.message);
            f.code
        }
    }
}

fn limits_from_env() -> Result<Limits, Failure> {
    let mut limits = Limits::default();
    if let Some(raw) = std::env::var_os(NODE_CAP_VAR) {
        let raw = raw.to_string_lossy();
        limits.node_cap = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| {
                Failure::input(format!(
                    "{NODE_CAP_VAR} must be a positive integer, got `{raw}`"
                ))
            })?;
    }
    Ok(limits)
}

fn dispatch(command: &Command, opts: &Options, limits: &Limits) -> Outcome {
    let mut limits = *limits;
    limits.max_depth = limits.max_depth.max(opts.depth);
    match command {
        Command::Check { file } => check(&load(file)?),
        Command::Word { file, lhs, rhs } => word(&load(file)?, lhs, rhs, opts, &limits),
        Command::Classes { file } => classes(&load(file)?, opts, &limits),
        Command::Saturate { file } => saturate_cmd(&load(file)?, opts, &limits),
        Command::Monoid { file } => monoid(&load(file)?, opts, &limits),
        Command::Laws { file } => laws(&load(file)?, opts, &limits),
        Command::Chain { file } => chain(&load(file)?, opts, &limits),
        Command::Witness {
            file,
            algebra,
            subset,
        } => witness(
            &load(file)?,
            algebra.as_deref(),
            subset.as_deref(),
            opts,
            &limits,
        ),
    }
}

fn load(path: &Path) -> Result<PresentationFile, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    format::parse_bytes(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn ground(file: &PresentationFile) -> Result<GroundPresentation, Failure> {
    Ok(file.ground_presentation()?)
}

fn read_term(file: &PresentationFile, text: &str, which: &str) -> Result<Term<Atom>, Failure> {
    parse_term(text, &file.signature, Some(&file.generators()))
        .map_err(|e| Failure::input(format!("{which} term: {e}")))
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn check(file: &PresentationFile) -> Outcome {
    let mut text = format!(
        "signature {}\ngenerators {}\nrelations {}\nequations {}\n",
        file.signature,
        file.generators().len(),
        file.relations.len(),
        file.equations.len()
    );
    let mut algebras = BTreeMap::new();
    for (name, a) in &file.algebras {
        let models = if file.equations.is_empty() {
            None
        } else {
            Some(variety_membership(a, &file.equational_presentation()?)?)
        };
        text.push_str(&format!("algebra {name}: {} elements", a.len()));
        if let Some(m) = models {
            text.push_str(if m {
                ", satisfies the equations"
            } else {
                ", violates the equations"
            });
        }
        text.push('\n');
        algebras.insert(
            name.clone(),
            json!({ "size": a.len(), "satisfies_equations": models }),
        );
    }
    let mut monoids = BTreeMap::new();
    for (name, m) in &file.monoids {
        text.push_str(&format!("monoid {name}: {} elements\n", m.len()));
        monoids.insert(name.clone(), json!({ "size": m.len() }));
    }
    if let Some(spec) = &file.monad {
        text.push_str(&format!("monad {spec}\n"));
    }
    text.push_str("ok\n");
    let doc = json!({
        "command": "check",
        "status": "ok",
        "signature": file.signature.ops().map(|(s, a)| json!({ "op": s.as_str(), "arity": a })).collect::<Vec<_>>(),
        "generators": strings(file.generators().iter()),
        "relations": file.relations.len(),
        "equations": file.equations.len(),
        "algebras": algebras,
        "monoids": monoids,
        "monad": file.monad.as_ref().map(|m| m.to_string()),
    });
    Ok(Report::new(EXIT_OK, text, doc))
}

fn word(file: &PresentationFile, lhs: &str, rhs: &str, opts: &Options, limits: &Limits) -> Outcome {
    let p = ground(file)?;
    let t = read_term(file, lhs, "first")?;
    let u = read_term(file, rhs, "second")?;
    let (verdict, method) = if file.equations.is_empty() {
        let mut idx = closure_build(&p, &[], limits)?;
        let v = if idx.word_equal(&t, &u)? {
            "equal"
        } else {
            "not equal"
        };
        (v, "closure")
    } else {
        let mut th = bounded_theory_congruence(
            &p.signature,
            &file.equations,
            &p.generators,
            &p.relations,
            opts.inst_depth,
            0,
            limits,
        )?;
        let v = match th.query(&t, &u)? {
            Verdict::Equal => "equal",
            Verdict::Unknown => "unknown",
        };
        (v, "bounded-theory")
    };
    let code = match verdict {
        "equal" => EXIT_OK,
        "not equal" => EXIT_FALSE,
        _ => EXIT_BOUND,
    };
    let mut text = format!("{verdict}\n");
    if verdict == "unknown" {
        text.push_str(&format!("no proof with --inst-depth {}\n", opts.inst_depth));
    }
    let doc = json!({
        "command": "word",
        "lhs": t.to_string(),
        "rhs": u.to_string(),
        "verdict": verdict,
        "method": method,
        "inst_depth": if method == "closure" { Value::Null } else { json!(opts.inst_depth) },
    });
    Ok(Report::new(code, text, doc))
}

fn classes(file: &PresentationFile, opts: &Options, limits: &Limits) -> Outcome {
    let p = ground(file)?;
    let list: Vec<CongruenceClass> = if file.equations.is_empty() {
        closure_build(&p, &[], limits)?.enumerate_classes(opts.depth, limits)?
    } else {
        bounded_theory_congruence(
            &p.signature,
            &file.equations,
            &p.generators,
            &p.relations,
            opts.inst_depth,
            opts.depth,
            limits,
        )?
        .enumerate_classes(opts.depth, limits)?
    };
    let terms: usize = list.iter().map(|c| c.members.len()).sum();
    let mut text = format!(
        "{} classes among {terms} terms of depth <= {}\n",
        list.len(),
        opts.depth
    );
    for c in &list {
        text.push_str(&format!(
            "{}: {}\n",
            c.representative,
            strings(&c.members).join(", ")
        ));
    }
    let doc = json!({
        "command": "classes",
        "depth": opts.depth,
        "terms": terms,
        "classes": list.iter().map(|c| json!({
            "representative": c.representative.to_string(),
            "members": strings(&c.members),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(EXIT_OK, text, doc))
}

fn algebra_json(a: &FiniteAlgebra) -> Value {
    let carrier = a.carrier();
    let label = |i: usize| carrier.get(i).map(|x| x.to_string()).unwrap_or_default();
    let mut tables: Vec<Value> = a
        .signature()
        .ops()
        .map(|(op, arity)| json!({ "op": op.as_str(), "arity": arity, "entries": [] }))
        .collect();
    for (pos, args, value) in a.entries() {
        if let Some(Value::Array(es)) = tables[pos].get_mut("entries") {
            es.push(json!({ "args": args.iter().map(|&i| label(i)).collect::<Vec<_>>(), "value": label(value) }));
        }
    }
    json!({ "carrier": strings(carrier.iter()), "tables": tables })
}

fn algebra_block(name: &str, a: &FiniteAlgebra) -> String {
    let mut file = PresentationFile::default();
    file.algebras.insert(name.to_string(), a.clone());
    format::print(&file)
}

fn saturate_cmd(file: &PresentationFile, opts: &Options, limits: &Limits) -> Outcome {
    let p = ground(file)?;
    match saturate(&p, opts.max_classes, limits)? {
        Saturation::Finite(q) => {
            let mut text = format!("finite quotient with {} elements\n", q.algebra.len());
            for (i, r) in q.representatives.iter().enumerate() {
                text.push_str(&format!("{i} = {r}\n"));
            }
            text.push_str(&algebra_block("quotient", &q.algebra));
            let doc = json!({
                "command": "saturate",
                "status": "finite",
                "size": q.algebra.len(),
                "representatives": strings(&q.representatives),
                "algebra": algebra_json(&q.algebra),
            });
            Ok(Report::new(EXIT_OK, text, doc))
        }
        Saturation::Inconclusive { classes_found } => {
            let text = format!(
                "inconclusive: {classes_found} classes found without closing the tables (--max-classes {})\n",
                opts.max_classes
            );
            let doc = json!({
                "command": "saturate",
                "status": "inconclusive",
                "classes_found": classes_found,
                "max_classes": opts.max_classes,
            });
            Ok(Report::new(EXIT_BOUND, text, doc))
        }
    }
}

/// The monads a file can name, with the finite ones kept apart.
enum Chosen {
    Finite(Box<dyn Monad>),
    Bounded(PresentedMonad),
}

fn choose_monad(
    file: &PresentationFile,
    opts: &Options,
    limits: &Limits,
) -> Result<Chosen, Failure> {
    let spec = file
        .monad
        .as_ref()
        .ok_or_else(|| Failure::input("the file declares no `monad` block"))?;
    Ok(match spec {
        MonadSpec::Identity => Chosen::Finite(Box::new(IdentityMonad)),
        MonadSpec::Powerset => Chosen::Finite(Box::new(FinitePowerset)),
        MonadSpec::FreeMSet(name) => {
            Chosen::Finite(Box::new(monad_from_monoid(&file.monoids[name])))
        }
        MonadSpec::Terms => Chosen::Bounded(PresentedMonad::new(
            file.signature.clone(),
            Vec::new(),
            opts.depth,
            opts.inst_depth,
            *limits,
        )?),
        MonadSpec::Presented => Chosen::Bounded(PresentedMonad::new(
            file.signature.clone(),
            file.equations.clone(),
            opts.depth,
            opts.inst_depth,
            *limits,
        )?),
    })
}

fn monoid(file: &PresentationFile, opts: &Options, limits: &Limits) -> Outcome {
    match choose_monad(file, opts, limits)? {
        Chosen::Finite(t) => {
            let m = monoid_from_monad(t.as_ref(), limits)?;
            let relabelled = m.relabel();
            let mut text = format!("induced monoid of {}\n", t.name());
            for (i, x) in m.carrier().iter().enumerate() {
                text.push_str(&format!("{i} = {x}\n"));
            }
            let mut block = PresentationFile::default();
            block.monoids.insert("induced".into(), relabelled.clone());
            text.push_str(&format::print(&block));
            let n = m.len();
            let doc = json!({
                "command": "monoid",
                "monad": t.name(),
                "status": "finite",
                "elements": strings(m.carrier().iter()),
                "carrier": strings(relabelled.carrier().iter()),
                "unit": relabelled.unit().to_string(),
                "table": (0..n).map(|i| (0..n).map(|j| json!(relabelled.mult(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok(Report::new(EXIT_OK, text, doc))
        }
        Chosen::Bounded(t) => {
            let b = t.bounded_induced_monoid(opts.depth)?;
            let n = b.len();
            let mut text = format!(
                "induced monoid of {}, {n} classes of depth <= {}\nunit {}\n",
                t.name(),
                opts.depth,
                b.unit
            );
            for (i, r) in b.representatives.iter().enumerate() {
                text.push_str(&format!("{i} = {r}\n"));
            }
            text.push_str("mult");
            let mut undefined = 0usize;
            for i in 0..n {
                for j in 0..n {
                    match b.mult(i, j) {
                        Some(k) => text.push_str(&format!(" ({i},{j})->{k}")),
                        None => {
                            undefined += 1;
                            text.push_str(&format!(" ({i},{j})->?"));
                        }
                    }
                }
            }
            text.push('\n');
            let status = if undefined == 0 { "closed" } else { "partial" };
            text.push_str(&format!(
                "{status}: {undefined} products leave the depth bound\n"
            ));
            let doc = json!({
                "command": "monoid",
                "monad": t.name(),
                "status": status,
                "depth": opts.depth,
                "elements": strings(&b.representatives),
                "carrier": strings(0..n),
                "unit": b.unit.to_string(),
                "table": (0..n).map(|i| (0..n).map(|j| json!(b.mult(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "undefined": undefined,
            });
            Ok(Report::new(
                if undefined == 0 { EXIT_OK } else { EXIT_BOUND },
                text,
                doc,
            ))
        }
    }
}

fn report_json(r: &LawReport) -> Value {
    json!({
        "subject": r.subject,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "law": c.law,
            "points": c.points,
            "exhaustive": c.exhaustive,
            "violations": c.violations,
        })).collect::<Vec<_>>(),
        "skipped": r.skipped.iter().map(|(law, why)| json!({ "law": law, "reason": why })).collect::<Vec<_>>(),
    })
}

fn laws(file: &PresentationFile, opts: &Options, limits: &Limits) -> Outcome {
    let sweep = LawSweep {
        max_size: opts.size,
        ..LawSweep::default()
    };
    let chosen = choose_monad(file, opts, limits)?;
    let t: &dyn Monad = match &chosen {
        Chosen::Finite(t) => t.as_ref(),
        Chosen::Bounded(t) => t,
    };
    let mut reports = vec![check_all_laws(t, sweep)?];
    let mut iso: Option<bool> = None;
    if let Chosen::Finite(_) = &chosen {
        let m = match &file.monad {
            Some(MonadSpec::FreeMSet(name)) => file.monoids[name].clone(),
            _ => monoid_from_monad(t, limits)?,
        };
        reports.push(check_triangle_identities(&m, t, opts.size, limits)?);
        iso = Some(unit_nu(&m, limits)?.is_isomorphism());
    }
    let passed = reports.iter().all(LawReport::passed) && iso != Some(false);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    if let Some(ok) = iso {
        text.push_str(&format!(
            "{} unit of the adjunction is an isomorphism\n",
            if ok { "ok  " } else { "FAIL" }
        ));
    }
    text.push_str(if passed {
        "all laws hold\n"
    } else {
        "law violations found\n"
    });
    let doc = json!({
        "command": "laws",
        "max_size": opts.size,
        "passed": passed,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        "unit_isomorphism": iso,
    });
    Ok(Report::new(
        if passed { EXIT_OK } else { EXIT_FALSE },
        text,
        doc,
    ))
}

fn chain(file: &PresentationFile, opts: &Options, limits: &Limits) -> Outcome {
    let gens = file.generators();
    let predicted = chain_sizes(&file.signature, gens.len(), opts.depth);
    let mut text = format!(
        "free chain for {} on {} generators\n",
        file.signature,
        gens.len()
    );
    let mut stages = Vec::new();
    let mut exhausted = false;
    for (n, p) in predicted.iter().enumerate() {
        let built = if exhausted {
            None
        } else {
            match chain_stage(&file.signature, &gens, n, limits) {
                Ok(s) => Some(s.carrier.len()),
                Err(Error::DepthBudgetExceeded { .. }) => {
                    exhausted = true;
                    None
                }
                Err(e) => return Err(e.into()),
            }
        };
        match built {
            Some(k) => text.push_str(&format!("stage {n}: {k}\n")),
            None => text.push_str(&format!("stage {n}: over the node cap\n")),
        }
        stages.push(json!({ "stage": n, "size": built, "predicted": p }));
    }
    let mut doc = json!({ "command": "chain", "depth": opts.depth, "stages": stages, "truncations": Value::Null });
    if !file.relations.is_empty() {
        let p = ground(file)?;
        let mut tchain = OmegaChain::truncations(&p, limits)?;
        let upto = opts.bound;
        let col = chain_colimit(&mut tchain, upto, limits)?;
        let mut sizes = Vec::new();
        for n in 0..=upto {
            sizes.push(tchain.stage(n)?.len());
        }
        text.push_str(&format!(
            "truncation chain up to stage {upto}: {}\ncolimit: {} classes, born at stages {}\n",
            strings(&sizes).join(" "),
            col.len(),
            strings(&col.births).join(" ")
        ));
        doc["truncations"] = json!({
            "upto": upto,
            "stage_sizes": sizes,
            "colimit_size": col.len(),
            "births": col.births,
            "classes": strings(col.classes.iter()),
        });
    }
    let code = if exhausted { EXIT_BOUND } else { EXIT_OK };
    Ok(Report::new(code, text, doc))
}

fn witness(
    file: &PresentationFile,
    only: Option<&str>,
    subset: Option<&[String]>,
    opts: &Options,
    limits: &Limits,
) -> Outcome {
    let mut targets: Vec<(String, FiniteAlgebra)> = Vec::new();
    let mut text = String::new();
    let mut doc = json!({ "command": "witness", "algebras": [], "relations": Value::Null });
    match only {
        Some(name) => {
            let a = file
                .algebras
                .get(name)
                .ok_or_else(|| Failure::input(format!("no algebra block named `{name}`")))?;
            targets.push((name.to_string(), a.clone()));
        }
        None => targets.extend(file.algebras.iter().map(|(n, a)| (n.clone(), a.clone()))),
    }

    let mut code = EXIT_OK;
    if only.is_none() && !file.relations.is_empty() {
        let p = ground(file)?;
        match saturate(&p, opts.max_classes, limits)? {
            Saturation::Finite(q) => {
                let candidates = kernel_pairs_to_depth(&q.evaluation, 2, limits)?;
                let found = finite_generation_witness(
                    &p,
                    &q.evaluation,
                    &candidates,
                    opts.depth,
                    1000,
                    limits,
                )?;
                match found {
                    Witness::Found(r0) => {
                        text.push_str(&format!(
                            "quotient has {} elements; {} relations of depth <= 2 generate its kernel to depth {}\n",
                            q.algebra.len(),
                            r0.len(),
                            opts.depth
                        ));
                        for (l, r) in &r0 {
                            text.push_str(&format!("  {l} = {r}\n"));
                        }
                        doc["relations"] = json!({
                            "status": "found",
                            "quotient_size": q.algebra.len(),
                            "depth": opts.depth,
                            "relations": r0.iter().map(|(l, r)| json!([l.to_string(), r.to_string()])).collect::<Vec<_>>(),
                        });
                    }
                    Witness::NotFoundWithinBound => {
                        text.push_str(
                            "no finite relation set of depth <= 2 found within the bound\n",
                        );
                        doc["relations"] = json!({ "status": "not_found" });
                        code = EXIT_BOUND;
                    }
                }
                if only.is_none() && subset.is_none() {
                    targets.push(("quotient".into(), q.algebra));
                }
            }
            Saturation::Inconclusive { classes_found } => {
                text.push_str(&format!(
                    "saturation inconclusive after {classes_found} classes\n"
                ));
                doc["relations"] =
                    json!({ "status": "inconclusive", "classes_found": classes_found });
                code = EXIT_BOUND;
            }
        }
    }
    if targets.is_empty() && doc["relations"].is_null() {
        return Err(Failure::input(
            "the file has no algebra blocks and no relations",
        ));
    }

    let mut entries = Vec::new();
    for (name, a) in &targets {
        let m = match subset {
            Some(labels) => {
                let atoms: Vec<Atom> = labels.iter().map(|l| Atom::name(l.trim())).collect();
                if let Some(bad) = atoms.iter().find(|x| !a.carrier().contains(x)) {
                    return Err(Failure::input(format!(
                        "`{bad}` is not an element of algebra {name}"
                    )));
                }
                FinSet::new(atoms)?
            }
            None => smallest_generating_set(a),
        };
        let generated = is_generated_by(a, &m)?;
        let shown = strings(m.iter()).join(" ");
        if !generated {
            text.push_str(&format!(
                "algebra {name}: {{{shown}}} does not generate it\n"
            ));
            entries.push(json!({ "name": name, "subset": strings(m.iter()), "generates": false }));
            code = code.max(EXIT_FALSE);
            continue;
        }
        let w = ffp_quotient_witness(a, &m)?;
        text.push_str(&format!("algebra {name}: generated by {{{shown}}}\n"));
        for (x, t) in a.carrier().iter().zip(&w.witnesses) {
            text.push_str(&format!("  {x} = {t}\n"));
        }
        entries.push(json!({
            "name": name,
            "subset": strings(m.iter()),
            "generates": true,
            "witnesses": a.carrier().iter().zip(&w.witnesses).map(|(x, t)| json!([x.to_string(), t.to_string()])).collect::<Vec<_>>(),
        }));
    }
    doc["algebras"] = Value::Array(entries);
    Ok(Report::new(code, text, doc))
}
