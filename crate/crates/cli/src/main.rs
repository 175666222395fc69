//! `copies`: command-line front end for constructing and checking copies.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copies::certify::{self, CertKind, Certificate, Verdict};
use copies::closures::{self, IC_MAXRANK};
use copies::copy_engine::{self, parse_omega, CopyHandle, CopySpec, Membership, Subset};
use copies::structures::{format_set, parse_set, StructureId};
use copies::suite::{self, RowStatus, SuiteConfig};
use copies::typesets::{self, TypeHandle};
use copies::{builtin, Error, FiniteSet, Shared};
use serde_json::json;

mod outcome;

use outcome::Outcome;

/// Stages a staged copy runs before it is reported.
const DEFAULT_STAGES: usize = 64;
/// Copies sampled for the upper bound on the intersection closure.
const IC_SAMPLES: usize = 8;
/// Candidate scan for the Bernstein prefix.
const BERNSTEIN_SCAN: u64 = 1 << 16;

#[derive(Parser, Debug)]
#[command(
    name = "copies",
    version,
    about = "Construct and check copies of countable group actions"
)]
struct Cli {
    #[command(flatten)]
    cfg: RunArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Built-in structure id (see `copies structures`).
    #[arg(long, global = true, env = "COPIES_STRUCTURE")]
    structure: Option<String>,
    /// Window U_depth of the enumeration examined by checks.
    #[arg(long, global = true, env = "COPIES_DEPTH", default_value_t = 10)]
    depth: usize,
    /// Candidate-scan budget per witness search.
    #[arg(long, global = true, env = "COPIES_BUDGET", default_value_t = 200)]
    budget: u64,
    #[arg(long = "sockel-cap", global = true, env = "COPIES_SOCKEL_CAP", default_value_t = 2)]
    sockel_cap: usize,
    #[arg(long, global = true, env = "COPIES_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "COPIES_FORMAT", value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Also write every certificate, one JSON record per line, to this file.
    #[arg(long, global = true, env = "COPIES_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClosureKind {
    Ac,
    Rc,
    Ic,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the built-in structures and their capabilities.
    Structures,
    /// Describe the type <F |> x>: window members, finiteness, rank.
    Typeset {
        sockel: String,
        point: String,
        #[arg(long, default_value_t = IC_MAXRANK)]
        rank_bound: u32,
    },
    /// Algebraic, ranked or sampled intersection closure of F.
    Closure { kind: ClosureKind, sockel: String },
    /// Build a copy: identity, through:F, proper:F, avoid:F;E, powerset:S,
    /// powerset-co:S or planted.
    Copy {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        stages: usize,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        certify: bool,
    },
    /// Strictly descending chain of k copies below U, all containing F.
    Chain {
        sockel: String,
        k: usize,
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        stages: usize,
    },
    /// Two copies meeting exactly in the algebraic closure of F.
    Disjoint {
        #[arg(default_value = "")]
        sockel: String,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        rounds: usize,
    },
    /// The copy S_Q of the rationals attached to a set S of naturals.
    EmbedPowerset {
        #[arg(long)]
        set: String,
        /// Read --set as the complement of S.
        #[arg(long)]
        cofinite: bool,
        #[arg(long)]
        certify: bool,
    },
    /// Bernstein-style partition of a prefix of U.
    Bernstein,
    /// Run a single check and print its certificate.
    Certify {
        #[command(subcommand)]
        target: Target,
    },
    /// Run the verification battery for the structure.
    Verify,
}

#[derive(Subcommand, Debug)]
enum Target {
    /// Bounded copy check of a copy spec.
    Copy {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        stages: usize,
    },
    /// Inclusion of the first copy in the second.
    Inclusion {
        left: String,
        right: String,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        stages: usize,
    },
    /// Search for a copy refuting maximality among copies avoiding x.
    MeetIrreducible {
        spec: String,
        point: String,
        #[arg(long, default_value_t = 8)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        stages: usize,
    },
    /// Disjointness of the pair built over F.
    Disjointness {
        #[arg(default_value = "")]
        sockel: String,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        rounds: usize,
    },
    /// rank(<F |> x>) <= k.
    Rank { sockel: String, point: String, k: u32 },
}

struct Run {
    cfg: RunArgs,
    certs: Vec<Certificate>,
    stdout: Vec<String>,
}

impl Run {
    fn structure(&self) -> Result<Shared, Error> {
        let name = self
            .cfg
            .structure
            .as_deref()
            .ok_or_else(|| Error::Precondition("--structure is required".into()))?;
        builtin(name)
    }

    fn say(&mut self, line: impl Into<String>) {
        self.stdout.push(line.into());
    }

    fn human(&self) -> bool {
        self.cfg.format == Format::Human
    }

    /// Records a certificate and returns the exit outcome of its verdict.
    fn emit(&mut self, cert: Certificate) -> Outcome {
        let out = Outcome::of(&cert.verdict);
        if self.human() {
            let line = format!(
                "{} [{}]: {}",
                kind_name(cert.kind),
                cert.structure,
                verdict_text(&cert.verdict)
            );
            self.say(line);
        } else {
            self.say(cert.to_line());
        }
        self.certs.push(cert);
        out
    }

    fn validate(&self) -> Result<(), Error> {
        if self.cfg.depth < 1 {
            return Err(Error::Precondition("--depth must be at least 1".into()));
        }
        if self.cfg.budget < self.cfg.depth as u64 {
            return Err(Error::Precondition("--budget must be at least --depth".into()));
        }
        Ok(())
    }
}

fn kind_name(k: CertKind) -> String {
    serde_json::to_value(k)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail { counterexample } => format!("fail {counterexample}"),
        Verdict::Unknown { obligation } => {
            let text = obligation.to_string();
            if text.chars().count() > 200 {
                format!("unknown {}...", text.chars().take(200).collect::<String>())
            } else {
                format!("unknown {text}")
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn build_copy(s: &Shared, spec: &str, stages: usize, seed: u64) -> Result<CopyHandle, Error> {
    CopySpec::parse(s.as_ref(), spec)?.build(s, seed)?.advanced(stages)
}

fn cmd_structures(run: &mut Run) -> Result<Outcome, Error> {
    if run.human() {
        run.say(format!(
            "{:<8} {:<10} {:<10} {:<11} {:<11} {:<11} description",
            "id", "fin-exact", "unranked", "alg-finite", "disj-amalg", "single-copy"
        ));
    }
    for id in StructureId::ALL {
        let s = id.build();
        let c = s.capabilities();
        if run.human() {
            run.say(format!(
                "{:<8} {:<10} {:<10} {:<11} {:<11} {:<11} {}",
                s.id(),
                yes(c.finiteness_exact),
                yes(c.unranked_witness),
                yes(c.algebraically_finite),
                yes(c.disjoint_amalgamation),
                yes(c.single_copy),
                s.description()
            ));
        } else {
            let line = json!({"id": s.id(), "description": s.description(), "capabilities": c});
            run.say(line.to_string());
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_typeset(run: &mut Run, sockel: &str, point: &str, k: u32) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let f = parse_set(sd, sockel)?;
    let x = sd.parse_point(point)?;
    let t = TypeHandle::new(f.clone(), x)?;
    let members = FiniteSet::from_indices(typesets::typeset_in_window(sd, &t, run.cfg.depth).iter().map(|p| p.0));
    let cert = suite::rank_certificate(sd, &t, k, run.cfg.depth)?;
    if run.human() {
        let finite = match sd.typeset_finite(&f, x) {
            copies::structures::FinitenessAnswer::Finite(all) => format!("finite {}", format_set(sd, &all)),
            copies::structures::FinitenessAnswer::Infinite(_) => "infinite".into(),
            copies::structures::FinitenessAnswer::Unknown { .. } => "unknown".into(),
        };
        run.say(format!("type <{} |> {}>", format_set(sd, &f), sd.format_point(x)));
        run.say(format!("members in U_{}: {}", run.cfg.depth, format_set(sd, &members)));
        run.say(format!("typeset: {finite}"));
        let w = &cert.witnesses[0];
        let rank = match w.get("rank") {
            Some(r) => format!("{} {r}", w["answer"].as_str().unwrap_or("")),
            None => w["answer"].as_str().unwrap_or("").to_string(),
        };
        run.say(format!("rank (k <= {k}): {rank}"));
        run.certs.push(cert);
        return Ok(Outcome::Pass);
    }
    run.emit(cert);
    Ok(Outcome::Pass)
}

fn cmd_closure(run: &mut Run, kind: ClosureKind, sockel: &str) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let f = parse_set(sd, sockel)?;
    let d = run.cfg.depth;
    let (set, note) = match kind {
        ClosureKind::Ac => {
            let r = closures::algebraic_closure(sd, &f, d)?;
            (r.closure_window, if r.exact { "exact" } else { "window" })
        }
        ClosureKind::Rc => {
            let r = closures::ranked_closure(sd, &f, IC_MAXRANK, d)?;
            (r.closure_window, if r.exact { "exact" } else { "lower bound" })
        }
        ClosureKind::Ic => (
            closures::intersection_closure_upper(&s, &f, IC_SAMPLES, d, run.cfg.seed)?,
            "upper bound",
        ),
    };
    let cert = suite::closure_sandwich(&s, &f, d, IC_SAMPLES, run.cfg.seed)?.param(
        "closure",
        match kind {
            ClosureKind::Ac => "ac",
            ClosureKind::Rc => "rc",
            ClosureKind::Ic => "ic",
        },
    );
    if run.human() {
        run.say(format!("{} ({note})", format_set(sd, &set)));
        run.certs.push(cert);
        return Ok(Outcome::Pass);
    }
    Ok(run.emit(cert))
}

fn report_copy(run: &mut Run, c: &CopyHandle, trace: bool) {
    let s = c.structure().clone();
    let sd = s.as_ref();
    let d = run.cfg.depth;
    if run.human() {
        run.say(c.describe());
        run.say(format!("in  U_{d}: {}", format_set(sd, &c.decided_in(d))));
        run.say(format!("out U_{d}: {}", format_set(sd, &c.decided_out(d))));
        let open: Vec<String> = copies::point::window(d)
            .filter(|&p| matches!(c.membership(p), Membership::UnknownAtStage(_)))
            .map(|p| sd.format_point(p))
            .collect();
        if !open.is_empty() {
            run.say(format!("undecided: {}", open.join(", ")));
        }
    }
    if trace {
        for r in c.trace_json() {
            run.say(r.to_string());
        }
    }
}

fn cmd_copy(run: &mut Run, spec: &str, stages: usize, trace: bool, check: bool) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let c = build_copy(&s, spec, stages, run.cfg.seed)?;
    report_copy(run, &c, trace);
    if !check {
        return Ok(Outcome::Pass);
    }
    let cert = certify::check_copy(&c, run.cfg.depth, run.cfg.sockel_cap, run.cfg.budget);
    Ok(run.emit(cert))
}

fn cmd_chain(run: &mut Run, sockel: &str, k: usize, window: usize, stages: usize) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let f = parse_set(sd, sockel)?;
    let u = copy_engine::copy_identity(&s);
    let chain = copy_engine::descending_chain(&s, &f, &u, k, window, stages, run.cfg.seed)?;
    let d = run.cfg.depth;
    if run.human() {
        for (i, c) in chain.iter().enumerate() {
            run.say(format!("C_{i} in U_{d}: {}", format_set(sd, &c.decided_in(d))));
        }
    }
    let mut out = Outcome::Pass;
    for w in chain.windows(2) {
        out = out.max(run.emit(certify::check_inclusion(&w[1], &w[0], d)));
    }
    Ok(out)
}

fn cmd_disjoint(run: &mut Run, sockel: &str, rounds: usize) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let f = parse_set(sd, sockel)?;
    let mut pair = copy_engine::disjoint_pair(&s, &f, run.cfg.seed)?;
    pair.advance(rounds)?;
    let (c, d) = pair.handles();
    let depth = run.cfg.depth;
    if run.human() {
        run.say(format!("base ac(F): {}", format_set(sd, pair.base())));
        run.say(format!("C in U_{depth}: {}", format_set(sd, &c.decided_in(depth))));
        run.say(format!("D in U_{depth}: {}", format_set(sd, &d.decided_in(depth))));
    }
    Ok(run.emit(certify::check_disjointness(&c, &d, pair.base(), depth)))
}

fn parse_subset(text: &str, cofinite: bool) -> Result<Subset, Error> {
    let nums = parse_omega(text).ok_or_else(|| Error::Precondition(format!("`{text}` is not a list of naturals")))?;
    Ok(if cofinite {
        Subset::Cofinite(nums)
    } else {
        Subset::Finite(nums)
    })
}

fn cmd_embed(run: &mut Run, set: &str, cofinite: bool, check: bool) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let c = copy_engine::powerset_embedding_dlo(&s, &parse_subset(set, cofinite)?)?;
    report_copy(run, &c, false);
    if !check {
        return Ok(Outcome::Pass);
    }
    let cert = certify::check_copy(&c, run.cfg.depth, run.cfg.sockel_cap, run.cfg.budget);
    Ok(run.emit(cert))
}

fn cmd_bernstein(run: &mut Run) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let (d, cap) = (run.cfg.depth, run.cfg.sockel_cap);
    let (a, b) = copy_engine::bernstein_base(&s, d, cap, BERNSTEIN_SCAN)?;
    if run.human() {
        let first = |x: &FiniteSet| FiniteSet::from_indices(x.iter().map(|p| p.0).filter(|&i| i < d as u64));
        run.say(format!("prefix U_{}", a.len() + b.len()));
        run.say(format!("A in U_{d}: {}", format_set(sd, &first(&a))));
        run.say(format!("B in U_{d}: {}", format_set(sd, &first(&b))));
    }
    Ok(run.emit(suite::check_partition(sd, &a, &b, d, cap)))
}

fn cmd_certify(run: &mut Run, target: &Target) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let sd = s.as_ref();
    let (d, seed) = (run.cfg.depth, run.cfg.seed);
    let cert = match target {
        Target::Copy { spec, stages } => {
            let c = build_copy(&s, spec, *stages, seed)?;
            certify::check_copy(&c, d, run.cfg.sockel_cap, run.cfg.budget)
        }
        Target::Inclusion { left, right, stages } => {
            let c = build_copy(&s, left, *stages, seed)?;
            let e = build_copy(&s, right, *stages, seed.wrapping_add(1))?;
            certify::check_inclusion(&c, &e, d)
        }
        Target::MeetIrreducible {
            spec,
            point,
            samples,
            stages,
        } => {
            let c = build_copy(&s, spec, *stages, seed)?;
            certify::check_meet_irreducible_candidate(&c, sd.parse_point(point)?, d, *samples)?
        }
        Target::Disjointness { sockel, rounds } => {
            let mut pair = copy_engine::disjoint_pair(&s, &parse_set(sd, sockel)?, seed)?;
            pair.advance(*rounds)?;
            let (c, e) = pair.handles();
            certify::check_disjointness(&c, &e, pair.base(), d)
        }
        Target::Rank { sockel, point, k } => {
            let t = TypeHandle::new(parse_set(sd, sockel)?, sd.parse_point(point)?)?;
            suite::rank_certificate(sd, &t, *k, d)?
        }
    };
    Ok(run.emit(cert))
}

fn cmd_verify(run: &mut Run) -> Result<Outcome, Error> {
    let s = run.structure()?;
    let cfg = SuiteConfig {
        depth: run.cfg.depth,
        budget: run.cfg.budget,
        sockel_cap: run.cfg.sockel_cap,
        seed: run.cfg.seed,
    };
    let report = suite::verify_suite(&s, &cfg);
    let mut out = Outcome::Pass;
    for r in &report.rows {
        out = out.max(match r.status {
            RowStatus::Pass | RowStatus::Unsupported => Outcome::Pass,
            RowStatus::Unknown => Outcome::Unknown,
            RowStatus::Fail => Outcome::Fail,
        });
    }
    if run.human() {
        let rows: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("{:<18} {:<12} {}", r.name, r.status.name(), r.detail))
            .collect();
        run.say(format!("verify {}", s.id()));
        for r in rows {
            run.say(r);
        }
    } else {
        for c in &report.certificates {
            run.say(c.to_line());
        }
    }
    run.certs.extend(report.certificates);
    Ok(out)
}

fn dispatch(run: &mut Run, cmd: &Cmd) -> Result<Outcome, Error> {
    run.validate()?;
    match cmd {
        Cmd::Structures => cmd_structures(run),
        Cmd::Typeset {
            sockel,
            point,
            rank_bound,
        } => cmd_typeset(run, sockel, point, *rank_bound),
        Cmd::Closure { kind, sockel } => cmd_closure(run, *kind, sockel),
        Cmd::Copy {
            spec,
            stages,
            trace,
            certify,
        } => cmd_copy(run, spec, *stages, *trace, *certify),
        Cmd::Chain {
            sockel,
            k,
            window,
            stages,
        } => cmd_chain(run, sockel, *k, *window, *stages),
        Cmd::Disjoint { sockel, rounds } => cmd_disjoint(run, sockel, *rounds),
        Cmd::EmbedPowerset { set, cofinite, certify } => cmd_embed(run, set, *cofinite, *certify),
        Cmd::Bernstein => cmd_bernstein(run),
        Cmd::Certify { target } => cmd_certify(run, target),
        Cmd::Verify => cmd_verify(run),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Outcome::Usage } else { Outcome::Pass };
            let _ = e.print();
            return code.exit();
        }
    };
    let mut run = Run {
        cfg: cli.cfg.clone(),
        certs: Vec::new(),
        stdout: Vec::new(),
    };
    let outcome = match dispatch(&mut run, &cli.cmd) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::of_error(&e)
        }
    };
    let mut stdout = std::io::stdout().lock();
    for line in &run.stdout {
        let _ = writeln!(stdout, "{line}");
    }
    if let Some(path) = &run.cfg.out {
        let body: String = run.certs.iter().map(|c| c.to_line() + "\n").collect();
        if let Err(e) = fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Outcome::Usage.exit();
        }
    }
    outcome.exit()
}
