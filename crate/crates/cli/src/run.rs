//! Argument parsing and the single-family commands.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qqforge::cartan::{CartanError, CartanMatrix};
use qqforge::qqchar::{
    chi_column, chi_column_terms, chi_hook, chi_vector, eta, letters, verify_basic, xi, xi_closed_terms,
    HookPartition, QQCharError,
};
use qqforge::relations::{self, Relation, RelationError, RelationReport};
use qqforge::ring::ParamRational;
use qqforge::wcurrents::{
    apaths, bosonize, cchi_coefficient, char_edges, cxi_coefficient, dual_screening_check, path_consistency,
    two_term_ratio, vector_coefficient, Bosonization, CurrentError,
};
use qqforge::ycalc::{QQChar, YMonomial};

use crate::suite;

#[derive(Parser, Debug)]
#[command(name = "qqforge", version, about = "Exact qq-characters, bosonizations and current relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a deformed Cartan matrix, its K limit and the axiom checks.
    Cartan {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        json: bool,
    },
    /// Build a qq-character, optionally verifying that it is basic.
    Char {
        #[command(flatten)]
        family: FamilyArgs,
        /// vector, column:K, hook:PARTS, xi or eta
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Solve the bosonization coefficients and compare with the closed forms.
    Bosonize {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        kind: Kind,
        /// Also check the dual screening currents of the bosonic colors.
        #[arg(long)]
        check_dual: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check one relation between the currents.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        /// ee, ff, ef, te, tf or ef-osp-exp
        #[arg(long, value_parser = parse_relation)]
        rel: Relation,
        #[arg(long)]
        json: bool,
    },
    /// Run every check for all families up to the given rank.
    VerifyAll {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    GlSym,
    Osp,
    GlStd,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: usize,
    /// Second rank, for gl-std only.
    #[arg(long)]
    pub m: Option<usize>,
}

impl FamilyArgs {
    pub fn matrix(&self) -> Result<CartanMatrix, Failure> {
        match (self.family, self.m) {
            (FamilyName::GlSym, None) => Ok(CartanMatrix::gl_sym(self.n)?),
            (FamilyName::Osp, None) => Ok(CartanMatrix::osp(self.n)?),
            (FamilyName::GlStd, Some(m)) => Ok(CartanMatrix::gl_std(self.n, m)?),
            (FamilyName::GlStd, None) => Err(Failure::Input("gl-std needs --m".into())),
            (_, Some(_)) => Err(Failure::Input("--m is only used with gl-std".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Vector,
    Column(usize),
    Hook(String),
    Xi,
    Eta,
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vector" => Ok(Kind::Vector),
            "xi" => Ok(Kind::Xi),
            "eta" => Ok(Kind::Eta),
            _ => {
                if let Some(k) = s.strip_prefix("column:") {
                    k.parse().map(Kind::Column).map_err(|e| format!("column height {k:?}: {e}"))
                } else if let Some(p) = s.strip_prefix("hook:") {
                    Ok(Kind::Hook(p.to_string()))
                } else {
                    Err(format!("unknown kind {s:?}; expected vector, column:K, hook:PARTS, xi or eta"))
                }
            }
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Vector => f.write_str("vector"),
            Kind::Column(k) => write!(f, "column:{k}"),
            Kind::Hook(p) => write!(f, "hook:{p}"),
            Kind::Xi => f.write_str("xi"),
            Kind::Eta => f.write_str("eta"),
        }
    }
}

fn parse_relation(s: &str) -> Result<Relation, String> {
    s.parse().map_err(|e: RelationError| e.to_string())
}

/// Exit 2 for bad or unsupported input, exit 1 for a failed verification.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Check(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(s) | Failure::Check(s) => f.write_str(s),
        }
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<QQCharError> for Failure {
    fn from(e: QQCharError) -> Self {
        match e {
            QQCharError::NotBasic { .. } | QQCharError::SearchBudgetExceeded { .. } => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CurrentError> for Failure {
    fn from(e: CurrentError) -> Self {
        match e {
            CurrentError::WrongFamily { .. } | CurrentError::NotBosonic(_) => Failure::Input(e.to_string()),
            CurrentError::Char(inner) => inner.into(),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::WrongFamily { .. } | RelationError::UnknownRelation(_) => Failure::Input(e.to_string()),
            RelationError::Current(inner) => inner.into(),
            RelationError::Char(inner) => inner.into(),
            RelationError::Ring(_) => Failure::Check(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("output: {e}"))
    }
}

/// One named pass/fail line of a report.
#[derive(Clone, Debug)]
pub struct Line {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Line {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Line { name: name.into(), pass, detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "pass": self.pass, "detail": self.detail})
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", if self.pass { "pass" } else { "FAIL" }, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Run `f` on a pool of `QQFORGE_THREADS` workers when the variable is set.
pub fn with_pool<T>(f: impl FnOnce() -> Result<T, Failure> + Send) -> Result<T, Failure>
where
    T: Send,
{
    match std::env::var("QQFORGE_THREADS") {
        Err(_) => f(),
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|t| *t > 0)
                .ok_or_else(|| Failure::Input(format!("QQFORGE_THREADS={v:?} is not a positive integer")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
            pool.install(f)
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut impl Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Cartan { family, json } => cartan(&family.matrix()?, *json, out),
        Command::Char { family, kind, verify, json } => character(&family.matrix()?, kind, *verify, *json, out),
        Command::Bosonize { family, kind, check_dual, json } => {
            let c = family.matrix()?;
            let solved = solve(&c, kind, *check_dual)?;
            if *json {
                let mut v = json!({
                    "family": c.family.name(),
                    "kind": kind.to_string(),
                    "bosonization": solved.bos.to_json(&c),
                    "checks": solved.lines.iter().map(Line::to_json).collect::<Vec<_>>(),
                });
                add_ranks(&mut v, &c);
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"))?;
            } else {
                writeln!(out, "{} terms, {} residue classes", solved.bos.terms.len(), solved.bos.classes)?;
                let mut rows: Vec<(String, String)> = solved
                    .bos
                    .terms
                    .iter()
                    .zip(&solved.bos.coeffs)
                    .map(|(m, k)| (m.display(&c).to_string(), k.to_string()))
                    .collect();
                rows.sort();
                for (m, k) in rows {
                    writeln!(out, "  {k}  ·  {m}")?;
                }
                for l in &solved.lines {
                    writeln!(out, "{l}")?;
                }
            }
            Ok(u8::from(!solved.lines.iter().all(|l| l.pass)))
        }
        Command::Verify { family, rel, json } => {
            let c = family.matrix()?;
            let rep = relations::check(&c, *rel)?;
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rep.to_json()).expect("json values serialize"))?;
            } else {
                write_report(&rep, out)?;
            }
            Ok(u8::from(!rep.relation.experimental() && !rep.pass()))
        }
        Command::VerifyAll { max_n, json } => suite::run(*max_n, *json, out),
    }
}

pub fn add_ranks(v: &mut Value, c: &CartanMatrix) {
    match c.family {
        qqforge::cartan::Family::GlSym { n } | qqforge::cartan::Family::Osp { n } => v["n"] = json!(n),
        qqforge::cartan::Family::GlStd { n, m } => {
            v["n"] = json!(n);
            v["m"] = json!(m);
        }
        qqforge::cartan::Family::Custom => {}
    }
}

pub fn write_report(rep: &RelationReport, out: &mut impl Write) -> Result<(), Failure> {
    let status = if rep.relation.experimental() {
        "experimental"
    } else if rep.pass() {
        "pass"
    } else {
        "FAIL"
    };
    let n = rep.family.rank().unwrap_or(0);
    writeln!(
        out,
        "{} on {} n={n}: {status} ({:.3} s)",
        rep.relation,
        rep.family.name(),
        rep.elapsed.as_secs_f64()
    )?;
    for ch in &rep.checks {
        writeln!(out, "  {}", Line::new(ch.name.clone(), ch.pass, ch.detail.clone()))?;
    }
    if !rep.loci.is_empty() {
        let loci: Vec<String> = rep.loci.iter().map(|l| l.to_string()).collect();
        writeln!(out, "  loci z/w: {}", loci.join(", "))?;
    }
    for (name, v) in &rep.constants {
        writeln!(out, "  {name} = {v}")?;
    }
    Ok(())
}

fn cartan(c: &CartanMatrix, json_out: bool, out: &mut impl Write) -> Result<u8, Failure> {
    let report = c.validate();
    let k = c.k_matrix()?;
    let det_k = c.det_k()?;
    let det_c = c.det_c()?;
    if json_out {
        let mut v = c.to_json();
        v["k"] = Value::Array(k.iter().map(|r| Value::Array(r.iter().map(|e| e.to_json()).collect())).collect());
        v["det_k"] = det_k.to_json();
        v["det_c"] = det_c.to_json();
        v["validation"] = report.to_json();
        v["valid"] = json!(report.all_pass());
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"))?;
    } else {
        let labels: Vec<String> = c.labels.iter().map(|l| l.to_string()).collect();
        writeln!(out, "{} colors: {}", c.family.name(), labels.join(" "))?;
        writeln!(out, "C:")?;
        for row in &c.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(out, "  [{}]", cells.join(", "))?;
        }
        let d: Vec<String> = c.d.iter().map(|e| e.to_string()).collect();
        writeln!(out, "d: [{}]", d.join(", "))?;
        writeln!(out, "K:")?;
        for row in &k {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(out, "  [{}]", cells.join(", "))?;
        }
        writeln!(out, "det K = {det_k}")?;
        writeln!(out, "det C = {det_c}")?;
        for ch in &report.checks {
            writeln!(out, "{}", Line::new(ch.name, ch.pass, ch.detail.clone()))?;
        }
    }
    Ok(u8::from(!report.all_pass()))
}

pub fn build_char(c: &CartanMatrix, kind: &Kind) -> Result<QQChar, Failure> {
    Ok(match kind {
        Kind::Vector => chi_vector(c)?,
        Kind::Column(k) => chi_column(c, *k)?,
        Kind::Hook(p) => {
            let (n, m) = match c.family {
                qqforge::cartan::Family::GlStd { n, m } => (n, m),
                f => return Err(Failure::Input(format!("hook characters are not available for {}", f.name()))),
            };
            chi_hook(c, &HookPartition::parse(p, n, m)?)?
        }
        Kind::Xi => xi(c)?,
        Kind::Eta => eta(c)?,
    })
}

fn character(c: &CartanMatrix, kind: &Kind, verify: bool, json_out: bool, out: &mut impl Write) -> Result<u8, Failure> {
    let chi = build_char(c, kind)?;
    let basic = if verify {
        Some(match verify_basic(&chi, c) {
            Ok(cert) => Line::new("basic", true, format!("{} top monomial(s)", cert.tops.len())),
            Err(e @ (QQCharError::NotBasic { .. } | QQCharError::SearchBudgetExceeded { .. })) => {
                Line::new("basic", false, e.to_string())
            }
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };
    if json_out {
        let mut v = json!({
            "family": c.family.name(),
            "kind": kind.to_string(),
            "count": chi.len(),
            "terms": chi.to_json(c),
        });
        add_ranks(&mut v, c);
        if let Some(b) = &basic {
            v["basic"] = b.to_json();
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"))?;
    } else {
        writeln!(out, "{} terms", chi.len())?;
        for (m, k) in chi.terms() {
            if k == 1 {
                writeln!(out, "  {}", m.display(c))?;
            } else {
                writeln!(out, "  {k} × {}", m.display(c))?;
            }
        }
        if let Some(b) = &basic {
            writeln!(out, "{b}")?;
        }
    }
    Ok(u8::from(basic.is_some_and(|b| !b.pass)))
}

/// A bosonization together with its closed-form and consistency checks.
pub struct Solved {
    pub bos: Bosonization,
    pub lines: Vec<Line>,
}

/// Closed-form coefficients of the characters that have one.
fn closed_coefficients(c: &CartanMatrix, kind: &Kind) -> Result<Option<Vec<(YMonomial, ParamRational)>>, Failure> {
    use qqforge::cartan::Family;
    let xi_like = matches!(c.family, Family::GlSym { .. } | Family::Osp { .. });
    Ok(match kind {
        Kind::Vector => Some(
            letters(c)?
                .into_iter()
                .map(|(l, m)| Ok((m, vector_coefficient(c, l)?)))
                .collect::<Result<Vec<_>, CurrentError>>()?,
        ),
        Kind::Column(k) => {
            Some(chi_column_terms(c, *k)?.into_iter().map(|(labels, m)| (m, cchi_coefficient(&labels))).collect())
        }
        Kind::Xi if xi_like => {
            Some(xi_closed_terms(c)?.into_iter().map(|(nu, m)| (m, cxi_coefficient(&nu))).collect())
        }
        Kind::Eta if xi_like => Some(
            xi_closed_terms(c)?
                .into_iter()
                .map(|(nu, m)| Ok((m.bar_map(c)?, cxi_coefficient(&nu))))
                .collect::<Result<Vec<_>, CartanError>>()?,
        ),
        _ => None,
    })
}

pub fn solve(c: &CartanMatrix, kind: &Kind, check_dual: bool) -> Result<Solved, Failure> {
    let chi = build_char(c, kind)?;
    let closed = closed_coefficients(c, kind)?;
    let (top, _) = apaths(c, &chi)?;
    let top_coeff = closed
        .as_ref()
        .and_then(|cl| cl.iter().find(|(m, _)| *m == top).map(|(_, k)| k.clone()))
        .unwrap_or_else(ParamRational::one);
    let bos = bosonize(c, &chi, top_coeff)?;
    let mut lines = vec![Line::new("screening", true, format!("{} residue classes cancel", bos.classes))];
    if let Some(cl) = closed {
        let bad: Vec<String> = cl
            .iter()
            .filter(|(m, k)| bos.coeff(m) != Some(k))
            .map(|(m, _)| m.display(c).to_string())
            .collect();
        let detail = if bad.is_empty() { format!("{} coefficients", cl.len()) } else { format!("differs at {}", bad.join(", ")) };
        lines.push(Line::new("closed form", bad.is_empty(), detail));
    }
    if matches!(c.family, qqforge::cartan::Family::GlStd { .. }) {
        lines.push(two_term_line(c, &bos)?);
    }
    let squares = path_consistency(c, &bos)?;
    lines.push(Line::new("path consistency", true, format!("{squares} squares")));
    if check_dual {
        let colors = dual_screening_check(c, &bos)?;
        lines.push(Line::new("dual screening", true, format!("{colors} bosonic colors")));
    }
    Ok(Solved { bos, lines })
}

/// Compare every edge ratio with the two-term rule.
pub fn two_term_line(c: &CartanMatrix, bos: &Bosonization) -> Result<Line, Failure> {
    let edges = char_edges(c, &bos.terms);
    let mut bad = Vec::new();
    for e in &edges {
        let want = two_term_ratio(c, &bos.terms[e.from], e.color, e.shift)?;
        let got = bos.coeffs[e.to].checked_div(&bos.coeffs[e.from]).map_err(|e| Failure::Check(e.to_string()))?;
        if got != want {
            bad.push(bos.terms[e.to].display(c).to_string());
        }
    }
    let detail = if bad.is_empty() { format!("{} edges", edges.len()) } else { format!("differs at {}", bad.join(", ")) };
    Ok(Line::new("two-term ratios", bad.is_empty(), detail))
}
