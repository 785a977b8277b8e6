//! Deformed Cartan matrices, their symmetrization `B`, and the classical
//! limit `K`.

use std::fmt;

use num_traits::{One, Signed};

use serde_json::{json, Value};
use thiserror::Error;

use crate::ring::{bareiss_det, gamma_limit, GammaPoly, ParamLaurent, ParamMonomial, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("rank too small for {family}: {detail}")]
    RankTooSmall { family: &'static str, detail: String },
    #[error("no color labelled {0}")]
    UnknownColor(String),
    #[error("the bar involution is not defined for {0}")]
    NoBarInvolution(&'static str),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A color label such as `3` or `2b` (the barred color 2̄).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub num: u32,
    pub bar: bool,
}

impl Label {
    pub const fn plain(num: u32) -> Self {
        Label { num, bar: false }
    }

    pub const fn barred(num: u32) -> Self {
        Label { num, bar: true }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bar {
            write!(f, "{}b", self.num)
        } else {
            write!(f, "{}", self.num)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Bosonic,
    Fermionic,
}

/// `σ_i`, and for bosonic colors `σ'_i, σ''_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub sigma: ParamMonomial,
    pub prime: Option<(ParamMonomial, ParamMonomial)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GlSym { n: usize },
    Osp { n: usize },
    GlStd { n: usize, m: usize },
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::GlSym { .. } => "gl-sym",
            Family::Osp { .. } => "osp",
            Family::GlStd { .. } => "gl-std",
            Family::Custom => "custom",
        }
    }

    pub fn rank(&self) -> Option<usize> {
        match *self {
            Family::GlSym { n } | Family::Osp { n } | Family::GlStd { n, .. } => Some(n),
            Family::Custom => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CartanMatrix {
    pub family: Family,
    pub labels: Vec<Label>,
    pub parity: Vec<Parity>,
    pub entries: Vec<Vec<ParamLaurent>>,
    pub sigma: Vec<Sigma>,
    pub d: Vec<ParamLaurent>,
    /// Color involution `i <-> ī`, where the family has one.
    pub bar: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, failures: Vec<String>) {
        let pass = failures.is_empty();
        self.checks.push(AxiomCheck { name, pass, detail: failures.join("; ") });
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| json!({"axiom": c.name, "pass": c.pass, "detail": c.detail}))
                .collect(),
        )
    }
}

fn mono(a: i32, b: i32) -> ParamLaurent {
    ParamLaurent::monomial(ParamMonomial::new(a, b))
}

fn t(i: u8) -> ParamLaurent {
    ParamLaurent::t(i)
}

fn bos_q() -> ParamLaurent {
    ParamLaurent::p_of(ParamMonomial::Q)
}

pub const BOSONIC_Q: Sigma = Sigma {
    sigma: ParamMonomial::Q,
    prime: Some((ParamMonomial::S1, ParamMonomial::S3)),
};
const BOSONIC_S1: Sigma = Sigma {
    sigma: ParamMonomial::S1,
    prime: Some((ParamMonomial::Q, ParamMonomial::S3)),
};
const FERMIONIC_S3: Sigma = Sigma { sigma: ParamMonomial::S3, prime: None };

struct Builder {
    labels: Vec<Label>,
    entries: Vec<Vec<ParamLaurent>>,
}

impl Builder {
    fn new(labels: Vec<Label>) -> Self {
        let l = labels.len();
        Builder { labels, entries: vec![vec![ParamLaurent::zero(); l]; l] }
    }

    fn at(&self, l: Label) -> usize {
        self.labels.iter().position(|x| *x == l).expect("label present")
    }

    fn set(&mut self, i: Label, j: Label, v: ParamLaurent) {
        let (a, b) = (self.at(i), self.at(j));
        self.entries[a][b] = v;
    }
}

impl CartanMatrix {
    /// The symmetric-parity `gl(2n|1)` matrix, colors `n..1, 1̄..n̄`.
    pub fn gl_sym(n: usize) -> Result<Self, CartanError> {
        if n < 1 {
            return Err(CartanError::RankTooSmall { family: "gl-sym", detail: format!("n = {n} < 1") });
        }
        let n32 = n as u32;
        let mut labels: Vec<Label> = (1..=n32).rev().map(Label::plain).collect();
        labels.extend((1..=n32).map(Label::barred));
        let mut b = Builder::new(labels.clone());
        for bar in [false, true] {
            let c = |k: u32| Label { num: k, bar };
            for i in 2..=n32 {
                b.set(c(i), c(i), bos_q());
            }
            b.set(c(1), c(1), t(3));
            if n >= 2 {
                b.set(c(1), c(2), t(1));
            }
            for i in 2..n32 {
                b.set(c(i), c(i + 1), ParamLaurent::int(-1));
            }
            for i in 1..n32 {
                b.set(c(i + 1), c(i), ParamLaurent::int(-1));
            }
        }
        b.set(Label::plain(1), Label::barred(1), t(2));
        b.set(Label::barred(1), Label::plain(1), t(2));
        let fermi = |l: &Label| l.num == 1;
        let bar = labels
            .iter()
            .map(|l| b.at(Label { num: l.num, bar: !l.bar }))
            .collect::<Vec<_>>();
        Ok(Self::assemble(Family::GlSym { n }, labels.clone(), b.entries, &fermi, |_| BOSONIC_Q, Some(bar)))
    }

    /// The `osp(2|2n)` matrix, colors `n..2, 1, 1̄`.
    pub fn osp(n: usize) -> Result<Self, CartanError> {
        if n < 2 {
            return Err(CartanError::RankTooSmall { family: "osp", detail: format!("n = {n} < 2") });
        }
        let n32 = n as u32;
        let mut labels: Vec<Label> = (1..=n32).rev().map(Label::plain).collect();
        labels.push(Label::barred(1));
        let mut b = Builder::new(labels.clone());
        let (one, onebar) = (Label::plain(1), Label::barred(1));
        for i in 2..=n32 {
            b.set(Label::plain(i), Label::plain(i), bos_q());
        }
        for i in 2..n32 {
            b.set(Label::plain(i), Label::plain(i + 1), ParamLaurent::int(-1));
            b.set(Label::plain(i + 1), Label::plain(i), ParamLaurent::int(-1));
        }
        b.set(one, one, t(3));
        b.set(onebar, onebar, t(3));
        let c11b = &mono(-1, 1) - &mono(1, -1);
        b.set(one, onebar, c11b.clone());
        b.set(onebar, one, c11b);
        b.set(Label::plain(2), one, ParamLaurent::int(-1));
        b.set(Label::plain(2), onebar, ParamLaurent::int(-1));
        b.set(one, Label::plain(2), t(1));
        b.set(onebar, Label::plain(2), t(1));
        let fermi = |l: &Label| l.num == 1;
        let bar = labels
            .iter()
            .map(|l| if l.num == 1 { b.at(Label { num: 1, bar: !l.bar }) } else { b.at(*l) })
            .collect::<Vec<_>>();
        Ok(Self::assemble(Family::Osp { n }, labels.clone(), b.entries, &fermi, |_| BOSONIC_Q, Some(bar)))
    }

    /// The standard-parity `gl(n|m)` matrix, colors `n-1..1, 0, 1̄..(m-1)̄`.
    pub fn gl_std(n: usize, m: usize) -> Result<Self, CartanError> {
        if n < 1 || m < 1 {
            return Err(CartanError::RankTooSmall {
                family: "gl-std",
                detail: format!("(n, m) = ({n}, {m}) needs n, m >= 1"),
            });
        }
        let (n32, m32) = (n as u32, m as u32);
        let mut labels: Vec<Label> = (0..n32).rev().map(Label::plain).collect();
        labels.extend((1..m32).map(Label::barred));
        let mut b = Builder::new(labels.clone());
        let zero = Label::plain(0);
        for i in 1..n32 {
            b.set(Label::plain(i), Label::plain(i), bos_q());
        }
        b.set(zero, zero, t(3));
        for j in 1..m32 {
            b.set(Label::barred(j), Label::barred(j), ParamLaurent::p_of(ParamMonomial::S1));
        }
        if n >= 2 {
            b.set(zero, Label::plain(1), t(1));
        }
        if m >= 2 {
            b.set(zero, Label::barred(1), t(2));
        }
        for i in 1..n32.saturating_sub(1) {
            b.set(Label::plain(i), Label::plain(i + 1), ParamLaurent::int(-1));
        }
        for i in 0..n32.saturating_sub(1) {
            b.set(Label::plain(i + 1), Label::plain(i), ParamLaurent::int(-1));
        }
        // 0̄ is color 0
        let barl = |j: u32| if j == 0 { zero } else { Label::barred(j) };
        for j in 0..m32.saturating_sub(1) {
            b.set(Label::barred(j + 1), barl(j), ParamLaurent::int(-1));
        }
        for j in 1..m32.saturating_sub(1) {
            b.set(Label::barred(j), Label::barred(j + 1), ParamLaurent::int(-1));
        }
        let fermi = |l: &Label| l.num == 0;
        let sig = |l: &Label| if l.bar { BOSONIC_S1 } else { BOSONIC_Q };
        Ok(Self::assemble(Family::GlStd { n, m }, labels.clone(), b.entries, &fermi, sig, None))
    }

    fn assemble(
        family: Family,
        labels: Vec<Label>,
        entries: Vec<Vec<ParamLaurent>>,
        fermi: &dyn Fn(&Label) -> bool,
        bos_sigma: impl Fn(&Label) -> Sigma,
        bar: Option<Vec<usize>>,
    ) -> Self {
        let mut parity = Vec::new();
        let mut sigma = Vec::new();
        let mut d = Vec::new();
        for l in &labels {
            if fermi(l) {
                parity.push(Parity::Fermionic);
                sigma.push(FERMIONIC_S3);
                d.push(t(3));
            } else {
                let s = bos_sigma(l);
                let (p, pp) = s.prime.expect("bosonic sigma data");
                parity.push(Parity::Bosonic);
                sigma.push(s);
                d.push(-(ParamLaurent::t_of(p) * ParamLaurent::t_of(pp)));
            }
        }
        CartanMatrix { family, labels, parity, entries, sigma, d, bar }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, l: Label) -> Result<usize, CartanError> {
        self.labels
            .iter()
            .position(|x| *x == l)
            .ok_or_else(|| CartanError::UnknownColor(l.to_string()))
    }

    /// Index of the plain color `k`, or of `k̄` if `bar`.
    pub fn color(&self, num: u32, bar: bool) -> usize {
        self.index(Label { num, bar }).expect("color exists in this family")
    }

    pub fn try_color(&self, num: u32, bar: bool) -> Option<usize> {
        self.index(Label { num, bar }).ok()
    }

    pub fn is_fermionic(&self, i: usize) -> bool {
        self.parity[i] == Parity::Fermionic
    }

    pub fn bar_of(&self, i: usize) -> Result<usize, CartanError> {
        match &self.bar {
            Some(b) => Ok(b[i]),
            None => Err(CartanError::NoBarInvolution(self.family.name())),
        }
    }

    pub fn b_matrix(&self) -> Vec<Vec<ParamLaurent>> {
        let l = self.size();
        (0..l)
            .map(|i| (0..l).map(|j| &self.d[i] * &self.entries[i][j]).collect())
            .collect()
    }

    pub fn det_c(&self) -> Result<ParamLaurent, CartanError> {
        Ok(bareiss_det(&self.entries)?)
    }

    pub fn k_matrix(&self) -> Result<Vec<Vec<GammaPoly>>, CartanError> {
        let b = self.b_matrix();
        let mut out = Vec::with_capacity(b.len());
        for row in &b {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                r.push(gamma_limit(e)?);
            }
            out.push(r);
        }
        Ok(out)
    }

    pub fn det_k(&self) -> Result<GammaPoly, CartanError> {
        Ok(bareiss_det(&self.k_matrix()?)?)
    }

    /// Checks every axiom of a deformed Cartan matrix; failures are report entries.
    pub fn validate(&self) -> ValidationReport {
        let l = self.size();
        let mut rep = ValidationReport::default();

        let mut bad = Vec::new();
        for i in 0..l {
            for j in 0..l {
                if self.entries[i][j].terms().any(|(_, c)| !c.abs().is_one()) {
                    bad.push(format!("c[{},{}] = {}", self.labels[i], self.labels[j], self.entries[i][j]));
                }
            }
        }
        rep.push("alternating entries", bad);

        let mut bad = Vec::new();
        for i in 0..l {
            let s = self.sigma[i].sigma;
            let want = match self.parity[i] {
                Parity::Bosonic => ParamLaurent::p_of(s),
                Parity::Fermionic => ParamLaurent::t_of(s),
            };
            if self.entries[i][i] != want {
                bad.push(format!("c[{0},{0}] = {1}, expected {2}", self.labels[i], self.entries[i][i], want));
            }
        }
        rep.push("diagonal form", bad);

        let mut bad = Vec::new();
        for i in 0..l {
            let s = &self.sigma[i];
            let want = match (self.parity[i], s.prime) {
                (Parity::Fermionic, _) => ParamLaurent::t_of(s.sigma),
                (Parity::Bosonic, Some((p, pp))) => {
                    if !(s.sigma * p * pp).is_one() {
                        bad.push(format!("color {}: sigma sigma' sigma'' != 1", self.labels[i]));
                    }
                    -(ParamLaurent::t_of(p) * ParamLaurent::t_of(pp))
                }
                (Parity::Bosonic, None) => {
                    bad.push(format!("color {}: missing sigma', sigma''", self.labels[i]));
                    continue;
                }
            };
            if self.d[i] != want {
                bad.push(format!("d[{}] = {}, expected {}", self.labels[i], self.d[i], want));
            }
        }
        rep.push("symmetrizer form", bad);

        let b = self.b_matrix();
        let mut bad = Vec::new();
        for i in 0..l {
            for j in i + 1..l {
                if b[i][j] != b[j][i] {
                    bad.push(format!("B[{},{}] != B[{},{}]", self.labels[i], self.labels[j], self.labels[j], self.labels[i]));
                }
            }
        }
        rep.push("B symmetric", bad);

        let mut bad = Vec::new();
        for i in 0..l {
            for j in 0..l {
                if b[i][j].invert_params() != b[i][j] {
                    bad.push(format!("B[{},{}] not inversion invariant", self.labels[i], self.labels[j]));
                }
            }
        }
        rep.push("B inversion invariant", bad);

        let mut bad = Vec::new();
        let t3 = t(3);
        for i in 0..l {
            for j in 0..l {
                if b[i][j].exact_divide(&t3).is_err() {
                    bad.push(format!("t3 does not divide B[{},{}]", self.labels[i], self.labels[j]));
                }
            }
        }
        rep.push("B divisible by t3", bad);

        let bad = match self.det_c() {
            Ok(d) if d.is_zero() => vec!["det C = 0".to_string()],
            Ok(_) => Vec::new(),
            Err(e) => vec![e.to_string()],
        };
        rep.push("det C nonzero", bad);

        rep
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "family": self.family.name(),
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "parity": self.parity.iter().map(|p| match p {
                Parity::Bosonic => "bosonic",
                Parity::Fermionic => "fermionic",
            }).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|r| r.iter().map(|e| e.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "d": self.d.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        });
        match self.family {
            Family::GlSym { n } | Family::Osp { n } => v["n"] = json!(n),
            Family::GlStd { n, m } => {
                v["n"] = json!(n);
                v["m"] = json!(m);
            }
            Family::Custom => {}
        }
        v
    }

    /// A one-color matrix, used for rank-one block experiments.
    pub fn rank_one(parity: Parity, sigma: Sigma) -> Self {
        let entry = match parity {
            Parity::Bosonic => ParamLaurent::p_of(sigma.sigma),
            Parity::Fermionic => ParamLaurent::t_of(sigma.sigma),
        };
        let d = match (parity, sigma.prime) {
            (Parity::Bosonic, Some((p, pp))) => -(ParamLaurent::t_of(p) * ParamLaurent::t_of(pp)),
            _ => entry.clone(),
        };
        CartanMatrix {
            family: Family::Custom,
            labels: vec![Label::plain(1)],
            parity: vec![parity],
            entries: vec![vec![entry]],
            sigma: vec![sigma],
            d: vec![d],
            bar: None,
        }
    }
}

impl Sigma {
    pub const BOSONIC_Q: Sigma = BOSONIC_Q;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_sym_one_is_two_by_two() {
        let c = CartanMatrix::gl_sym(1).unwrap();
        assert_eq!(c.size(), 2);
        assert_eq!(c.entries[0][0], t(3));
        assert_eq!(c.entries[1][1], t(3));
        assert_eq!(c.entries[0][1], t(2));
        assert_eq!(c.entries[1][0], t(2));
        assert!(c.validate().all_pass());
    }

    #[test]
    fn perturbed_matrix_breaks_symmetry() {
        let mut c = CartanMatrix::gl_sym(1).unwrap();
        c.entries[0][1] = ParamLaurent::zero();
        let rep = c.validate();
        assert!(!rep.get("B symmetric").unwrap().pass);
        assert!(rep.get("det C nonzero").unwrap().pass);
    }

    #[test]
    fn rank_errors() {
        assert!(CartanMatrix::gl_sym(0).is_err());
        assert!(CartanMatrix::osp(1).is_err());
        assert!(CartanMatrix::gl_std(0, 2).is_err());
    }

    #[test]
    fn k_gl_sym_one() {
        let c = CartanMatrix::gl_sym(1).unwrap();
        let k = c.k_matrix().unwrap();
        assert_eq!(k[0][0], GammaPoly::from_ints(&[-1]));
        assert_eq!(k[0][1], GammaPoly::from_ints(&[1, -1]));
        assert_eq!(c.det_k().unwrap(), GammaPoly::from_ints(&[0, 2, -1]));
    }
}
