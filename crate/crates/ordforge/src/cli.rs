//! The `ordforge` command line.
//!
//! Exit codes: 0 success, 1 a negative verdict (failed check, failed
//! analysis), 2 unreadable or unparsable input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{analyze_sigma, BoundReport, NodeAnnotation};
use crate::calculus::{check, parse_proof, CheckReport};
use crate::collapse::{in_b, ControlledOperator};
use crate::hierarchy::{parse_cap, Assignment, HFSet, HierError, Hierarchy, CAP_ENV, DEFAULT_CAP};
use crate::ord::{self, OrdTerm};
use crate::syntax::{parse_formula, relativize, Term, Theory};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "ordforge", version, about = "Ordinal bookkeeping for IKP-style proofs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoryArg {
    Ikp,
    Ikpp,
    Ikpe,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Ikp => Theory::Ikp,
            TheoryArg::Ikpp => Theory::IkpP,
            TheoryArg::Ikpe => Theory::IkpE,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check a proof file.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "ikp")]
        theory: TheoryArg,
        #[arg(long)]
        json: bool,
    },
    /// Run the Σ-sentence bound pipeline on a proof file.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "ikp")]
        theory: TheoryArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ordinal notation utilities.
    Ord {
        #[command(subcommand)]
        cmd: OrdCmd,
    },
    /// Hereditarily finite stages.
    Hier {
        #[command(subcommand)]
        cmd: HierCmd,
    },
}

#[derive(Debug, Subcommand)]
enum OrdCmd {
    /// Print the normal form.
    Eval {
        expr: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Print <, = or >.
    Cmp { a: String, b: String },
    /// Is X in B^Ω(ALPHA)?
    InB { alpha: String, x: String },
    /// Is X in H_ETA[PARAMS]?
    HContains {
        x: String,
        #[arg(long, default_value = "0")]
        eta: String,
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum HierCmd {
    /// Evaluate a bounded formula, or a formula relativized to a stage.
    Eval {
        #[arg(long)]
        formula: String,
        /// NAME=SET, e.g. x={{}}.
        #[arg(long = "assign")]
        assign: Vec<String>,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long, value_enum, default_value = "ikp")]
        theory: TheoryArg,
        #[arg(long, env = CAP_ENV)]
        stage_cap: Option<String>,
    },
}

/// An ordinal as canonical text plus its Unicode rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdOut {
    pub text: String,
    pub pretty: String,
}

impl From<&OrdTerm> for OrdOut {
    fn from(a: &OrdTerm) -> OrdOut {
        OrdOut { text: a.to_string(), pretty: a.pretty() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationOut {
    pub ordinal: OrdOut,
    pub cutrank: OrdOut,
    pub eta: OrdOut,
    pub params: Vec<OrdOut>,
}

impl From<&NodeAnnotation> for AnnotationOut {
    fn from(a: &NodeAnnotation) -> Self {
        AnnotationOut {
            ordinal: (&a.ordinal).into(),
            cutrank: (&a.cutrank).into(),
            eta: (&a.operator.eta).into(),
            params: a.operator.params.iter().map(OrdOut::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOut {
    pub m: u64,
    pub embed: [OrdOut; 2],
    pub pre_collapse: [OrdOut; 2],
    pub gamma_or_sigma: OrdOut,
    pub collapsed: OrdOut,
    #[serde(rename = "final")]
    pub final_bound: OrdOut,
    pub annotations: BTreeMap<String, AnnotationOut>,
}

impl From<&BoundReport> for BoundOut {
    fn from(r: &BoundReport) -> Self {
        BoundOut {
            m: r.m,
            embed: [(&r.embed.0).into(), (&r.embed.1).into()],
            pre_collapse: [(&r.pre_collapse.0).into(), (&r.pre_collapse.1).into()],
            gamma_or_sigma: (&r.gamma_or_sigma).into(),
            collapsed: (&r.collapsed).into(),
            final_bound: (&r.final_bound).into(),
            annotations: r.embedding.annotations.iter().map(|(k, v)| (k.clone(), v.into())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    /// sha256 of the proof file, hex.
    pub input_digest: String,
    pub theory: String,
    pub check: CheckReport,
    pub bound: Option<BoundOut>,
    pub error: Option<String>,
    pub elapsed_us: u64,
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

/// Builds the analysis report for proof text `src`.
pub fn analyze_report(src: &str, theory: Theory) -> Result<Report, String> {
    let start = Instant::now();
    let d = parse_proof(src, theory).map_err(|e| e.to_string())?;
    let report = check(&d, theory);
    let (bound, error) = match analyze_sigma(&d, theory) {
        Ok(r) => (Some(BoundOut::from(&r)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(Report {
        schema: SCHEMA,
        input_digest: digest(src.as_bytes()),
        theory: theory.name().to_string(),
        check: report,
        bound,
        error,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {}", msg);
            2
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))
}

fn ordinal(s: &str) -> Result<OrdTerm, String> {
    ord::parse(s).map_err(|e| format!("{:?}: {}", s, e))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Cmd::Check { path, theory, json } => {
            let theory = Theory::from(theory);
            let d = parse_proof(&read(&path)?, theory).map_err(|e| e.to_string())?;
            let report = check(&d, theory);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?).map_err(io)?;
            } else if report.ok {
                writeln!(out, "ok ({} nodes)", d.node_count()).map_err(io)?;
            } else {
                for f in &report.failures {
                    writeln!(out, "{}: {}", f.path, f.reason).map_err(io)?;
                }
            }
            Ok(if report.ok { 0 } else { 1 })
        }
        Cmd::Analyze { path, theory, out: dest } => {
            let report = analyze_report(&read(&path)?, theory.into())?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            match dest {
                Some(p) => std::fs::write(&p, text + "\n").map_err(|e| format!("{}: {}", p.display(), e))?,
                None => writeln!(out, "{}", text).map_err(io)?,
            }
            Ok(if report.bound.is_some() { 0 } else { 1 })
        }
        Cmd::Ord { cmd } => {
            match cmd {
                OrdCmd::Eval { expr, pretty } => {
                    let a = ordinal(&expr)?;
                    writeln!(out, "{}", if pretty { a.pretty() } else { a.to_string() }).map_err(io)?;
                }
                OrdCmd::Cmp { a, b } => {
                    let sym = match ordinal(&a)?.cmp(&ordinal(&b)?) {
                        std::cmp::Ordering::Less => "<",
                        std::cmp::Ordering::Equal => "=",
                        std::cmp::Ordering::Greater => ">",
                    };
                    writeln!(out, "{}", sym).map_err(io)?;
                }
                OrdCmd::InB { alpha, x } => {
                    writeln!(out, "{}", in_b(&ordinal(&alpha)?, &ordinal(&x)?)).map_err(io)?;
                }
                OrdCmd::HContains { x, eta, params } => {
                    let ps = params.iter().map(|p| ordinal(p)).collect::<Result<Vec<_>, _>>()?;
                    let h = ControlledOperator::with_params(ordinal(&eta)?, &ps);
                    writeln!(out, "{}", h.contains(&ordinal(&x)?)).map_err(io)?;
                }
            }
            Ok(0)
        }
        Cmd::Hier { cmd: HierCmd::Eval { formula, assign, stage, theory, stage_cap } } => {
            let theory = Theory::from(theory);
            let cap = match stage_cap {
                Some(c) => parse_cap(&c).map_err(|e| e.to_string())?,
                None => DEFAULT_CAP,
            };
            let h = Hierarchy::new(cap).map_err(|e| e.to_string())?;
            let mut f = parse_formula(&formula, theory).map_err(|e| e.to_string())?;
            let mut v = Assignment::new();
            for a in &assign {
                let (name, set) = a.split_once('=').ok_or_else(|| format!("expected NAME=SET, got {:?}", a))?;
                v.insert(name.trim().to_string(), HFSet::parse(set).map_err(|e| e.to_string())?);
            }
            if let Some(n) = stage {
                if n > h.cap {
                    return Err(HierError::StageCapExceeded { n, cap: h.cap }.to_string());
                }
                let z = match theory {
                    Theory::Ikp => Term::L(OrdTerm::nat(n as u64)),
                    Theory::IkpP => Term::V(OrdTerm::nat(n as u64)),
                    Theory::IkpE => Term::E(OrdTerm::nat(n as u64)),
                };
                f = relativize(&f, &z);
            }
            let verdict = h.eval_bounded(&f, &v, theory).map_err(|e| e.to_string())?;
            writeln!(out, "{}", verdict).map_err(io)?;
            Ok(0)
        }
    }
}
