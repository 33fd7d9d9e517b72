//! Command-line front end: instance files, command dispatch, corpus runs and reports.
//!
//! Exit codes: 0 ok or member, 1 checked and negative, 2 invalid input, 3 the two
//! membership methods disagree (a bug bundle is written) or the model contradicts itself.

pub mod runner;
pub mod schema;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{MultitreeParams, TwoComponentGrid};
use crate::curves::CurveInstance;
use crate::exactalg::{Field, FieldSpec, PrimeField, Rationals, Subspace};
use crate::linkedet::{
    complete_flags, curve_to_chain, gen_random_chain, linked_det_membership, sufficient_extra_degree, FlagPair,
};
use crate::llseries::{is_lls_eh, is_lls_kernel_prepared, pairwise_kernel_check, LLSCandidate, MembershipVerdict, PreparedWindow, Window};
use crate::multidegrees::{concentrate, concentrate_negative, is_concentrated, satisfies_canonical_concentration, AdmissibleMultidegree, TwistMultiset};
use crate::{Error, Result};
use schema::{ChainFile, InstanceFile, MultidegreeSpec, Scalar, REPORT_SCHEMA};

/// Environment variable fixing the worker count of the corpus runner.
pub const WORKERS_ENV: &str = "NLLS_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "nodal-lls", version, about = "Limit linear series on nodal curves with rational components")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Include wall-clock timings in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file and summarize it.
    Validate { file: PathBuf },
    /// Apply a twist multiset (one count per vertex) to w0 or to a tuple member.
    Twist {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        multiset: Vec<i64>,
        /// Start from the tuple member of this vertex instead of w0.
        #[arg(long)]
        from: Option<String>,
    },
    /// Concentrate w0 at a vertex.
    Concentrate {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        /// Run the whole procedure, making every other vertex negative.
        #[arg(long)]
        full: bool,
    },
    /// Enumerate the multidegrees between adjacent tuple members.
    BarG { file: PathBuf },
    /// Global sections for a multidegree (w0 by default).
    Sections {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<u32>>,
    },
    /// Decide membership of the file's candidates.
    LlsCheck(LlsCheckArgs),
    /// Linked chains of vector spaces.
    LinkedDet {
        #[command(subcommand)]
        command: LinkedCommand,
    },
    /// Build the linked chain along a collapsed edge and compare with the pairwise kernels.
    Bridge {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        edge: usize,
        /// Extra degree per component; the smallest sufficient uniform value when absent.
        #[arg(long, value_delimiter = ',')]
        extra: Option<Vec<i64>>,
        #[arg(long)]
        candidate: Option<usize>,
    },
    /// Run a cross-validation suite.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Kernel,
    Eh,
    Both,
}

#[derive(Debug, Args)]
pub struct LlsCheckArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
    pub method: MethodChoice,
    /// Twists beyond \bar G inspected by the kernel method.
    #[arg(long, default_value_t = 0)]
    pub window: usize,
    /// Only this candidate (0-based).
    #[arg(long)]
    pub candidate: Option<usize>,
    /// Where bug bundles are written on disagreement.
    #[arg(long, default_value = ".")]
    pub bug_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum LinkedCommand {
    /// Check the s-linked conditions.
    Validate { file: PathBuf },
    /// Membership of the file's flags in the linked determinantal locus.
    Check { file: PathBuf },
    /// Complete the file's flags to a point of the linked Grassmannian.
    Complete { file: PathBuf },
    /// Write a random chain file.
    Gen {
        #[arg(long)]
        seed: u64,
        /// "Q" or a prime p.
        #[arg(long, default_value = "2")]
        field: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0")]
        s: String,
        /// Ranks of the forward maps when s = 0 (nondecreasing).
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
        /// Also write the chain file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Exhaustive two-component corpus, kernel against vanishing conditions.
    Equivalence,
    /// Random multitrees, kernel against vanishing conditions.
    Multitree,
    /// Random multitrees, \bar G against an enlarged window.
    Window,
    /// Random multitrees, verdicts under independently generated tuples.
    Indep,
    /// Exhaustive small chains, membership against completion and brute force.
    Linked,
    /// Two-component chains against pairwise kernels.
    Bridge,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Largest r for the equivalence suite, interior dimension for the linked suite.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Largest component degree (equivalence, bridge) or root degree (random suites).
    #[arg(long, default_value_t = 3)]
    pub max_degree: i64,
    #[arg(long, default_value_t = 2)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 2)]
    pub max_chain: u32,
    #[arg(long, default_value_t = 3)]
    pub min_components: usize,
    #[arg(long, default_value_t = 5)]
    pub max_components: usize,
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    #[arg(long, default_value_t = 3)]
    pub tuples: usize,
    /// Chain dimension for the linked suite.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Chain lengths for the linked suite.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    pub lengths: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Member,
    Negative,
    Disagreement,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Member => 0,
            Status::Negative => 1,
            Status::Disagreement => 3,
        }
    }
}

/// The machine-readable result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

struct Outcome {
    status: Status,
    seed: Option<u64>,
    result: Value,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { status: Status::Ok, seed: None, result }
    }
}

/// Parses arguments (program name first), runs the command and writes the report.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli.command, err) {
        Ok(outcome) => {
            let timings_ms = cli.timings.then(|| BTreeMap::from([("total".to_string(), start.elapsed().as_millis() as u64)]));
            let report = Report {
                schema: REPORT_SCHEMA,
                version: env!("CARGO_PKG_VERSION"),
                command: command_name(&cli.command).into(),
                status: outcome.status,
                seed: outcome.seed,
                result: outcome.result,
                timings_ms,
            };
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable report") + "\n",
                Format::Text => render_text(&report),
            };
            let _ = out.write_all(text.as_bytes());
            report.status.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ModelInconsistency(_) => 3,
                _ => 2,
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Twist { .. } => "twist",
        Command::Concentrate { .. } => "concentrate",
        Command::BarG { .. } => "bar-g",
        Command::Sections { .. } => "sections",
        Command::LlsCheck(_) => "lls-check",
        Command::LinkedDet { command } => match command {
            LinkedCommand::Validate { .. } => "linked-det validate",
            LinkedCommand::Check { .. } => "linked-det check",
            LinkedCommand::Complete { .. } => "linked-det complete",
            LinkedCommand::Gen { .. } => "linked-det gen",
        },
        Command::Bridge { .. } => "bridge",
        Command::Corpus(_) => "corpus",
    }
}

/// Sets the global worker pool from the environment, once.
pub fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().map_err(|_| Error::Invalid(format!("{WORKERS_ENV} must be a positive integer")))?;
        if n == 0 {
            return Err(Error::Invalid(format!("{WORKERS_ENV} must be a positive integer")));
        }
        // A pool that already exists keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// Runs `$body` with `$field` bound to the concrete field of `$spec`.
macro_rules! with_field {
    ($spec:expr, $field:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $field = Rationals;
                $body
            }
            FieldSpec::Prime { p } => {
                let $field = PrimeField::new(*p)?;
                $body
            }
        }
    };
}

fn execute(command: &Command, err: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::LinkedDet { command } => return linked_command(command),
        Command::Corpus(args) => return corpus_command(args),
        _ => {}
    }
    let path = match command {
        Command::Validate { file }
        | Command::Twist { file, .. }
        | Command::Concentrate { file, .. }
        | Command::BarG { file }
        | Command::Sections { file, .. }
        | Command::Bridge { file, .. } => file,
        Command::LlsCheck(a) => &a.file,
        Command::LinkedDet { .. } | Command::Corpus(_) => unreachable!(),
    };
    let file = InstanceFile::parse(&read(path)?)?;
    with_field!(&file.field, field => instance_command(command, &file, &field, err))
}

fn labels<F: Field>(inst: &CurveInstance<F>) -> &[String] {
    inst.skeleton().graph().labels()
}

fn vertex<F: Field>(inst: &CurveInstance<F>, label: &str) -> Result<usize> {
    inst.skeleton().graph().vertex_index(label).ok_or_else(|| Error::Invalid(format!("no vertex labelled {label:?}")))
}

fn md(w: &AdmissibleMultidegree) -> Value {
    json!(MultidegreeSpec::of(w))
}

fn instance_command<F: Field>(command: &Command, file: &InstanceFile, field: &F, err: &mut dyn Write) -> Result<Outcome> {
    let inst = file.build(field)?;
    let g = inst.skeleton();
    match command {
        Command::Validate { .. } => {
            let candidates = file.candidates.iter().map(|c| file.build_candidate(&inst, c)).collect::<Result<Vec<_>>>()?;
            let nv = g.vertex_count();
            Ok(Outcome::ok(json!({
                "field": field.spec().to_string(),
                "vertices": nv,
                "edges": g.edge_count(),
                "genus": inst.genus(),
                "degree": inst.total_degree(),
                "multitree": inst.is_multitree(),
                "tuple_derived": file.tuple.is_none(),
                "tuple": inst.tuple().members.iter().map(md).collect::<Vec<_>>(),
                "component_degrees": (0..nv).map(|v| inst.component_degree(v)).collect::<Vec<_>>(),
                "links": inst.tree().map(|t| t.b.clone()),
                "candidates": candidates.iter().map(|c| c.r).collect::<Vec<_>>(),
            })))
        }
        Command::Twist { multiset, from, .. } => {
            if multiset.len() != g.vertex_count() {
                return Err(Error::Invalid(format!("the multiset needs {} counts", g.vertex_count())));
            }
            let start = match from {
                Some(l) => inst.tuple().members[vertex(&inst, l)?].clone(),
                None => inst.w0().clone(),
            };
            let m = TwistMultiset { counts: multiset.clone() };
            let w = g.apply(&start, &m);
            Ok(Outcome::ok(json!({ "from": md(&start), "multiset": multiset, "result": md(&w), "degree": w.total_degree() })))
        }
        Command::Concentrate { vertex: label, full, .. } => {
            let v = vertex(&inst, label)?;
            let (w, m) = if *full { concentrate_negative(g, inst.w0(), v) } else { concentrate(g, inst.w0(), v) };
            let order = is_concentrated(g, &w, v).ok_or_else(|| Error::ModelInconsistency("concentrate returned an unconcentrated multidegree".into()))?;
            let names = labels(&inst);
            Ok(Outcome::ok(json!({
                "vertex": label,
                "result": md(&w),
                "multiset": m.counts,
                "order": order.iter().map(|&u| names[u].clone()).collect::<Vec<_>>(),
                "canonical": satisfies_canonical_concentration(g, &w, v),
            })))
        }
        Command::BarG { .. } => {
            let bg = inst.tuple().bar_g(g)?;
            let names = labels(&inst);
            let col = g.collapsed();
            Ok(Outcome::ok(json!({
                "nodes": bg.nodes.iter().map(|n| json!({ "w": md(&n.w), "twists": n.twists.counts })).collect::<Vec<_>>(),
                "edges": bg.edges.iter().map(|e| {
                    let se = col.edge(e.ebar);
                    json!({ "from": e.from, "to": e.to, "between": [names[se.a].clone(), names[se.b].clone()], "at": names[e.at].clone() })
                }).collect::<Vec<_>>(),
                "members": bg.members,
            })))
        }
        Command::Sections { w, mu, .. } => {
            let target = match w {
                Some(ws) => AdmissibleMultidegree::new(ws.clone(), mu.clone().unwrap_or_else(|| vec![0; g.edge_count()])),
                None => inst.w0().clone(),
            };
            g.check(&target)?;
            let loc = inst.locate(&target)?;
            let space = inst.section_space(&loc)?;
            let names = labels(&inst);
            let basis: Vec<Value> = space
                .basis()
                .iter()
                .map(|b| {
                    let per: BTreeMap<String, Vec<String>> = (0..g.vertex_count())
                        .map(|v| (names[v].clone(), space.component(b, v).iter().map(|x| field.format(x)).collect()))
                        .collect();
                    json!(per)
                })
                .collect();
            Ok(Outcome::ok(json!({
                "w": md(&target),
                "twists": loc.twists.counts,
                "dim": space.dim(),
                "lower_bound": inst.total_degree() + 1 - inst.genus(),
                "basis": basis,
            })))
        }
        Command::LlsCheck(args) => lls_check(args, file, &inst, err),
        Command::Bridge { edge, extra, candidate, .. } => {
            let cands = selected(file, &inst, *candidate)?;
            let extra = match extra {
                Some(x) => x.clone(),
                None => sufficient_extra_degree(&inst, *edge, 16)?,
            };
            let mut rows = Vec::new();
            let mut status = Status::Member;
            for (i, c) in &cands {
                let bc = curve_to_chain(&inst, c, *edge, &extra)?;
                let pairwise = pairwise_kernel_check(&inst, c, *edge)?;
                let pair_member = pairwise.iter().all(|&k| k > c.r);
                let linked = bc.member();
                let ranks = bc.flags.as_ref().map(|fl| linked_det_membership(&bc.chain, fl).ranks);
                if pair_member != linked {
                    status = Status::Disagreement;
                } else if !linked && status == Status::Member {
                    status = Status::Negative;
                }
                rows.push(json!({
                    "candidate": i,
                    "chain_length": bc.chain.n,
                    "chain_dim": bc.chain.d,
                    "violations": bc.violations,
                    "flags_lifted": bc.flags.is_some(),
                    "linked_ranks": ranks,
                    "linked_member": linked,
                    "pairwise_kernels": pairwise,
                    "pairwise_member": pair_member,
                }));
            }
            Ok(Outcome { status, seed: None, result: json!({ "edge": edge, "extra_degree": extra, "candidates": rows }) })
        }
        Command::LinkedDet { .. } | Command::Corpus(_) => unreachable!(),
    }
}

fn selected<F: Field>(file: &InstanceFile, inst: &CurveInstance<F>, only: Option<usize>) -> Result<Vec<(usize, LLSCandidate<F>)>> {
    if file.candidates.is_empty() {
        return Err(Error::Invalid("the instance has no candidates".into()));
    }
    let idx: Vec<usize> = match only {
        Some(i) if i < file.candidates.len() => vec![i],
        Some(i) => return Err(Error::Invalid(format!("no candidate {i}; the file has {}", file.candidates.len()))),
        None => (0..file.candidates.len()).collect(),
    };
    idx.into_iter().map(|i| Ok((i, file.build_candidate(inst, &file.candidates[i])?))).collect()
}

/// How two verdicts on one candidate combine.
pub fn combine_verdicts(kernel: Option<bool>, eh: Option<bool>) -> Status {
    match (kernel, eh) {
        (Some(a), Some(b)) if a != b => Status::Disagreement,
        (Some(true), _) | (None, Some(true)) => Status::Member,
        _ => Status::Negative,
    }
}

fn verdict_json(v: &Option<MembershipVerdict>) -> Value {
    match v {
        Some(v) => json!({
            "member": v.member,
            "window_bounded": v.window_bounded,
            "kernel_dims": v.kernel_dims.iter().map(|k| json!({ "w": md(&k.w), "sections": k.sections, "kernel": k.kernel })).collect::<Vec<_>>(),
            "edges": v.edges.iter().map(|e| json!({
                "condition_i": e.condition_i,
                "condition_ii": e.condition_ii,
                "failures_i": e.failures_i,
                "vanishing": e.report.side.a,
                "vanishing_other": e.report.other.a,
            })).collect::<Vec<_>>(),
        }),
        None => Value::Null,
    }
}

/// Writes the instance with the offending candidate and both verdicts; returns the path.
pub fn write_bug_bundle<F: Field>(
    dir: &Path,
    inst: &CurveInstance<F>,
    index: usize,
    cand: &LLSCandidate<F>,
    verdicts: Value,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("nodal-lls-bug-candidate-{index}.json"));
    let bundle = json!({
        "schema": "nodal-lls/bug@1",
        "version": env!("CARGO_PKG_VERSION"),
        "instance": InstanceFile::from_instance(inst, &[cand]),
        "verdicts": verdicts,
    });
    std::fs::write(&path, serde_json::to_string_pretty(&bundle)? + "\n")?;
    Ok(path)
}

fn lls_check<F: Field>(args: &LlsCheckArgs, file: &InstanceFile, inst: &CurveInstance<F>, err: &mut dyn Write) -> Result<Outcome> {
    let cands = selected(file, inst, args.candidate)?;
    let run_kernel = args.method != MethodChoice::Eh;
    let run_eh = args.method != MethodChoice::Kernel;
    if args.method == MethodChoice::Eh && !inst.is_multitree() {
        return Err(Error::NotMultitree);
    }
    let window = if args.window == 0 && inst.is_multitree() { Window::BarG } else { Window::Ball(args.window) };
    let prepared = if run_kernel { Some(PreparedWindow::new(inst, &window)?) } else { None };
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    for (i, c) in &cands {
        let kernel = prepared.as_ref().map(|p| is_lls_kernel_prepared(inst, p, c));
        let eh = if run_eh && inst.is_multitree() { Some(is_lls_eh(inst, c)?) } else { None };
        let status = combine_verdicts(kernel.as_ref().map(|v| v.member), eh.as_ref().map(|v| v.member));
        let verdicts = json!({ "kernel": verdict_json(&kernel), "eh": verdict_json(&eh) });
        if status == Status::Disagreement {
            let path = write_bug_bundle(&args.bug_dir, inst, *i, c, verdicts.clone())?;
            let _ = writeln!(err, "methods disagree on candidate {i}; bug bundle written to {}", path.display());
        }
        let any = kernel.as_ref().or(eh.as_ref()).expect("at least one method");
        rows.push(json!({
            "candidate": i,
            "r": c.r,
            "rho": any.rho,
            "verdict": status,
            "kernel": verdicts["kernel"],
            "eh": verdicts["eh"],
        }));
        statuses.push(status);
    }
    let status = if statuses.contains(&Status::Disagreement) {
        Status::Disagreement
    } else if statuses.contains(&Status::Negative) {
        Status::Negative
    } else {
        Status::Member
    };
    Ok(Outcome {
        status,
        seed: None,
        result: json!({
            "degree": inst.total_degree(),
            "genus": inst.genus(),
            "window": match window { Window::BarG => json!("bar-g"), _ => json!(args.window) },
            "eh_available": inst.is_multitree(),
            "candidates": rows,
        }),
    })
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    let spec = match s {
        "Q" | "q" | "rationals" => FieldSpec::Rationals,
        _ => {
            let p = s.trim_start_matches("GF(").trim_end_matches(')');
            FieldSpec::Prime { p: p.parse().map_err(|_| Error::Invalid(format!("unknown field {s:?}; use Q or a prime")))? }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn linked_command(command: &LinkedCommand) -> Result<Outcome> {
    if let LinkedCommand::Gen { seed, field, d, n, s, ranks, out } = command {
        let spec = parse_field(field)?;
        return with_field!(&spec, f => {
            let chain = gen_random_chain(*seed, &f, *d, *n, f.parse(s)?, ranks)?;
            let file = ChainFile::from_chain(&chain, None);
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
            }
            Ok(Outcome { status: Status::Ok, seed: Some(*seed), result: serde_json::to_value(file)? })
        });
    }
    let path = match command {
        LinkedCommand::Validate { file } | LinkedCommand::Check { file } | LinkedCommand::Complete { file } => file,
        LinkedCommand::Gen { .. } => unreachable!(),
    };
    let file = ChainFile::parse(&read(path)?)?;
    with_field!(&file.field, f => {
        let (chain, flags) = file.build(&f)?;
        let need_flags = || flags.clone().ok_or_else(|| Error::Invalid("the chain file has no flags".into()));
        let rows = |s: &Subspace<_>| s.basis().iter().map(|r| r.iter().map(|x| Scalar::of(&f, x)).collect::<Vec<_>>()).collect::<Vec<_>>();
        match command {
            LinkedCommand::Validate { .. } => {
                let v = chain.validate();
                let status = if v.is_empty() { Status::Ok } else { Status::Negative };
                Ok(Outcome { status, seed: None, result: json!({ "s_linked": v.is_empty(), "violations": v }) })
            }
            LinkedCommand::Check { .. } => {
                let fl: FlagPair<_> = need_flags()?;
                let rep = linked_det_membership(&chain, &fl);
                let status = if rep.member { Status::Member } else { Status::Negative };
                Ok(Outcome { status, seed: None, result: json!({ "member": rep.member, "ranks": rep.ranks, "bound": chain.d - fl.r }) })
            }
            LinkedCommand::Complete { .. } => {
                let fl = need_flags()?;
                match complete_flags(&chain, &fl)? {
                    Some(mid) => Ok(Outcome {
                        status: Status::Member,
                        seed: None,
                        result: json!({ "member": true, "interior": mid.iter().map(rows).collect::<Vec<_>>() }),
                    }),
                    None => Ok(Outcome { status: Status::Negative, seed: None, result: json!({ "member": false }) }),
                }
            }
            LinkedCommand::Gen { .. } => unreachable!(),
        }
    })
}

fn corpus_command(a: &CorpusArgs) -> Result<Outcome> {
    configure_workers()?;
    let grid = TwoComponentGrid { max_nodes: a.max_nodes, max_chain: a.max_chain, max_degree: a.max_degree, ..Default::default() };
    let params = MultitreeParams {
        min_components: a.min_components,
        max_components: a.max_components,
        max_degree: a.max_degree,
        ..Default::default()
    };
    let ranks: Vec<usize> = (0..=a.r).collect();
    let report = match a.suite {
        Suite::Equivalence => runner::equivalence_suite(a.p.unwrap_or(2), &grid, &ranks)?,
        Suite::Multitree => runner::multitree_suite(a.seed, a.samples, a.p.unwrap_or(5), &params)?,
        Suite::Window => runner::window_suite(a.seed, a.samples, a.p.unwrap_or(5), &params, a.radius)?,
        Suite::Indep => runner::indep_suite(a.seed, a.samples, a.p.unwrap_or(5), &params, a.tuples)?,
        Suite::Linked => runner::linked_suite(a.p.unwrap_or(2), a.d, &a.lengths, a.r, a.samples as u64)?,
        Suite::Bridge => runner::bridge_suite(a.seed, a.samples, a.p.unwrap_or(3), &grid, 16)?,
    };
    let status = if report.disagree > 0 { Status::Disagreement } else { Status::Ok };
    let seed = report.seed;
    Ok(Outcome { status, seed, result: serde_json::to_value(report)? })
}

/// Indented "key: value" lines carrying the same content as the JSON report.
pub fn render_text(report: &Report) -> String {
    let mut out = format!("{} [{}]: {}\n", report.command, report.version, status_word(report.status));
    if let Some(s) = report.seed {
        out += &format!("seed: {s}\n");
    }
    render_value(&report.result, 0, &mut out);
    if let Some(t) = &report.timings_ms {
        for (k, v) in t {
            out += &format!("time {k}: {v} ms\n");
        }
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Member => "member",
        Status::Negative => "negative",
        Status::Disagreement => "disagreement",
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.iter().all(|x| !x.is_object()) && v.to_string().len() <= 100 => Some(v.to_string()),
        Value::Object(o) if o.values().all(|x| !x.is_object() && !x.is_array()) && v.to_string().len() <= 100 => {
            Some(v.to_string())
        }
        _ => None,
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match inline(x) {
                    Some(s) => *out += &format!("{pad}{k}: {s}\n"),
                    None => {
                        *out += &format!("{pad}{k}:\n");
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match inline(x) {
                    Some(s) => *out += &format!("{pad}[{i}] {s}\n"),
                    None => {
                        *out += &format!("{pad}[{i}]\n");
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        _ => *out += &format!("{pad}{}\n", inline(v).unwrap_or_default()),
    }
}
