//! `verify-all`: every check for all families up to a rank.

use std::io::Write;

use rayon::prelude::*;
use serde_json::{json, Value};

use qqforge::cartan::{CartanMatrix, Family};
use qqforge::qqchar::{
    chi_column, chi_vector, eta, nonbasic_example, verify_basic, xi, xi_closed, xi_rect, xi_recursive, QQCharError,
};
use qqforge::relations::{self, contraction_identities, RelationReport};
use qqforge::ring::GammaPoly;
use qqforge::ycalc::QQChar;

use crate::run::{solve, Failure, Kind, Line};

struct Section {
    name: &'static str,
    lines: Vec<Line>,
}

/// The families checked at rank bound `max_n`.
fn families(max_n: usize) -> Result<Vec<CartanMatrix>, Failure> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push(CartanMatrix::gl_sym(n)?);
    }
    for n in 2..=max_n {
        out.push(CartanMatrix::osp(n)?);
    }
    for n in 1..=max_n {
        for m in 1..=max_n {
            if n + m <= max_n + 1 {
                out.push(CartanMatrix::gl_std(n, m)?);
            }
        }
    }
    Ok(out)
}

fn tag(c: &CartanMatrix) -> String {
    match c.family {
        Family::GlSym { n } | Family::Osp { n } => format!("{} n={n}", c.family.name()),
        Family::GlStd { n, m } => format!("{} n={n} m={m}", c.family.name()),
        Family::Custom => c.family.name().to_string(),
    }
}

/// `det K` for the `gl_sym` and `osp` families, as coefficients in `γ`.
fn det_k_formula(c: &CartanMatrix) -> Option<GammaPoly> {
    match c.family {
        Family::GlSym { n } => {
            let mut coeffs = vec![0i64; 2 * n + 1];
            coeffs[2 * n - 1] = 2 * n as i64;
            coeffs[2 * n] = 1 - 2 * n as i64;
            Some(GammaPoly::from_ints(&coeffs))
        }
        Family::Osp { n } => {
            let sign = if n % 2 == 0 { 4 } else { -4 };
            let mut coeffs = vec![0i64; n + 2];
            coeffs[n] = -sign;
            coeffs[n + 1] = sign;
            Some(GammaPoly::from_ints(&coeffs))
        }
        _ => None,
    }
}

fn cartan_section(cs: &[CartanMatrix]) -> Result<Section, Failure> {
    let mut lines = Vec::new();
    for c in cs {
        let report = c.validate();
        let failed: Vec<&str> = report.checks.iter().filter(|ch| !ch.pass).map(|ch| ch.name).collect();
        let detail = if failed.is_empty() { format!("{} axioms", report.checks.len()) } else { failed.join(", ") };
        lines.push(Line::new(format!("{} axioms", tag(c)), failed.is_empty(), detail));
        if let Some(want) = det_k_formula(c) {
            let got = c.det_k()?;
            lines.push(Line::new(format!("{} det K", tag(c)), got == want, got.to_string()));
        }
    }
    Ok(Section { name: "cartan", lines })
}

fn basic_line(name: String, chi: &QQChar, c: &CartanMatrix) -> Result<Line, Failure> {
    Ok(match verify_basic(chi, c) {
        Ok(cert) => Line::new(name, true, format!("{} terms, {} top monomial(s)", chi.len(), cert.tops.len())),
        Err(e @ (QQCharError::NotBasic { .. } | QQCharError::SearchBudgetExceeded { .. })) => {
            Line::new(name, false, e.to_string())
        }
        Err(e) => return Err(e.into()),
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn count_line(name: String, got: usize, want: usize) -> Line {
    Line::new(name, got == want, format!("{got} terms, expected {want}"))
}

fn character_section(cs: &[CartanMatrix]) -> Result<Section, Failure> {
    let mut lines = Vec::new();
    for c in cs {
        let t = tag(c);
        let vector = chi_vector(c)?;
        let want = match c.family {
            Family::GlSym { n } => 2 * n + 1,
            Family::Osp { n } => 2 * n + 2,
            Family::GlStd { n, m } => n + m,
            Family::Custom => unreachable!("suite families are named"),
        };
        lines.push(count_line(format!("{t} vector count"), vector.len(), want));
        lines.push(basic_line(format!("{t} vector basic"), &vector, c)?);
        match c.family {
            Family::GlSym { n } => {
                for k in 1..=n {
                    let col = chi_column(c, k)?;
                    let want = (0..=k).map(|i| binomial(2 * n, i)).sum();
                    lines.push(count_line(format!("{t} column:{k} count"), col.len(), want));
                    lines.push(basic_line(format!("{t} column:{k} basic"), &col, c)?);
                }
            }
            Family::GlStd { n, m } => {
                let rect = xi_rect(c)?;
                lines.push(count_line(format!("{t} rectangle count"), rect.len(), 1 << (n * m)));
                lines.push(basic_line(format!("{t} rectangle basic"), &rect, c)?);
            }
            _ => {}
        }
        if matches!(c.family, Family::GlSym { .. } | Family::Osp { .. }) {
            let same = xi_recursive(c)? == xi_closed(c)?;
            lines.push(Line::new(format!("{t} xi recursion"), same, "recursive and closed forms agree"));
            lines.push(basic_line(format!("{t} xi basic"), &xi(c)?, c)?);
            lines.push(basic_line(format!("{t} eta basic"), &eta(c)?, c)?);
        }
    }
    let (c, chi) = nonbasic_example();
    let rejected = matches!(verify_basic(&chi, &c), Err(QQCharError::NotBasic { .. }));
    lines.push(Line::new("five-term example", rejected, "rejected as not basic"));
    Ok(Section { name: "characters", lines })
}

fn kinds(c: &CartanMatrix) -> Vec<Kind> {
    match c.family {
        Family::GlSym { n } => {
            let mut ks = vec![Kind::Vector];
            ks.extend((2..=n).map(Kind::Column));
            ks.extend([Kind::Xi, Kind::Eta]);
            ks
        }
        Family::Osp { .. } => vec![Kind::Vector, Kind::Xi, Kind::Eta],
        Family::GlStd { n, m } => vec![Kind::Vector, Kind::Hook(vec![m.to_string(); n].join(","))],
        Family::Custom => Vec::new(),
    }
}

fn bosonization_section(cs: &[CartanMatrix]) -> Result<Section, Failure> {
    let jobs: Vec<(&CartanMatrix, Kind)> = cs.iter().flat_map(|c| kinds(c).into_iter().map(move |k| (c, k))).collect();
    let results: Vec<Result<Vec<Line>, Failure>> = jobs
        .par_iter()
        .map(|(c, kind)| {
            let check_dual = !matches!(c.family, Family::GlStd { .. });
            let prefix = format!("{} {kind}", tag(c));
            Ok(match solve(c, kind, check_dual) {
                Ok(s) => s.lines.into_iter().map(|l| Line::new(format!("{prefix} {}", l.name), l.pass, l.detail)).collect(),
                Err(Failure::Check(e)) => vec![Line::new(prefix, false, e)],
                Err(e) => return Err(e),
            })
        })
        .collect();
    let mut lines = Vec::new();
    for r in results {
        lines.extend(r?);
    }
    Ok(Section { name: "bosonizations", lines })
}

fn contraction_section(cs: &[CartanMatrix]) -> Result<Section, Failure> {
    let mut lines = Vec::new();
    for c in cs.iter().filter(|c| matches!(c.family, Family::GlSym { .. })) {
        for ch in contraction_identities(c)? {
            lines.push(Line::new(format!("{} {}", tag(c), ch.name), ch.pass, ch.detail));
        }
    }
    Ok(Section { name: "contractions", lines })
}

fn relation_reports(cs: &[CartanMatrix]) -> Result<Vec<RelationReport>, Failure> {
    let jobs: Vec<_> = cs
        .iter()
        .filter(|c| !matches!(c.family, Family::GlStd { .. }))
        .flat_map(|c| relations::relations_for(c).into_iter().map(move |r| (c, r)))
        .collect();
    jobs.par_iter().map(|(c, r)| relations::check(c, *r).map_err(Failure::from)).collect()
}

pub fn run(max_n: usize, json_out: bool, out: &mut impl Write) -> Result<u8, Failure> {
    if max_n == 0 {
        return Err(Failure::Input("--max-n must be at least 1".into()));
    }
    let cs = families(max_n)?;
    let sections = vec![
        cartan_section(&cs)?,
        character_section(&cs)?,
        bosonization_section(&cs)?,
        contraction_section(&cs)?,
    ];
    let reports = relation_reports(&cs)?;
    let pass = sections.iter().all(|s| s.lines.iter().all(|l| l.pass))
        && reports.iter().all(|r| r.relation.experimental() || r.pass());
    if json_out {
        let v = json!({
            "max_n": max_n,
            "sections": sections
                .iter()
                .map(|s| json!({"name": s.name, "checks": s.lines.iter().map(Line::to_json).collect::<Vec<_>>()}))
                .collect::<Vec<_>>(),
            "relations": reports.iter().map(RelationReport::to_json).collect::<Vec<Value>>(),
            "pass": pass,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"))?;
    } else {
        for s in &sections {
            writeln!(out, "== {}", s.name)?;
            for l in &s.lines {
                writeln!(out, "{l}")?;
            }
        }
        writeln!(out, "== relations")?;
        for r in &reports {
            crate::run::write_report(r, out)?;
        }
        writeln!(out, "{}", if pass { "all checks pass" } else { "some checks FAIL" })?;
    }
    Ok(u8::from(!pass))
}
