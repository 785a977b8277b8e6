//! Vertex-operator currents attached to qq-characters: A-paths, screening
//! residues, bosonization, and the words making up `E`, `F` and `T`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{CartanMatrix, Family, Label};
use crate::contraction::{lambda_data, prim_contract, ContractionError, ContractionFn, Gen};
use crate::qqchar::{letters, xi_closed_terms, QQCharError};
use crate::ring::{ParamLaurent, ParamMonomial, ParamRational, RingError};
use crate::ycalc::{affine_root, QQChar, YMonomial, YVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentError {
    #[error("character has {0} terms without a parent, expected exactly one")]
    NoUniqueTop(usize),
    #[error("term {0} is not reachable from the top by root steps")]
    Unreachable(String),
    #[error("term {0} has multiplicity {1}")]
    Multiplicity(String, i64),
    #[error("color {color}: screening residues do not cancel ({detail})")]
    NotScreened { color: String, detail: String },
    #[error("coefficients are path dependent at {0}")]
    PathInconsistent(String),
    #[error("edge is not a two-term step of the expected shape: {0}")]
    BadStep(String),
    #[error("color {0} is fermionic and has no dual screening current")]
    NotBosonic(String),
    #[error("{what} is not available for {family}")]
    WrongFamily { what: &'static str, family: &'static str },
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Char(#[from] QQCharError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn sq(x: i32, y: i32) -> ParamMonomial {
    ParamMonomial::sq(x, y)
}

/// An edge `terms[to] = terms[from] · A^{-1}_{color, shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub color: usize,
    pub shift: ParamMonomial,
}

/// Solve `a = A_{i,μ}` for `(i, μ)`.
pub fn root_of(c: &CartanMatrix, a: &YMonomial) -> Option<(usize, ParamMonomial)> {
    for i in 0..c.size() {
        let diag = c.entries[i][i].signed_monomials().ok()?;
        for (s, e) in a.color_factors(i) {
            for (sign, cm) in &diag {
                if *sign != e.signum() {
                    continue;
                }
                let mu = s / *cm;
                if affine_root(c, i, mu) == *a {
                    return Some((i, mu));
                }
            }
        }
    }
    None
}

pub fn char_edges(c: &CartanMatrix, terms: &[YMonomial]) -> Vec<Edge> {
    let mut out = Vec::new();
    for (from, m) in terms.iter().enumerate() {
        for (to, m2) in terms.iter().enumerate() {
            if from == to {
                continue;
            }
            if let Some((color, shift)) = root_of(c, &m.div(m2)) {
                out.push(Edge { from, to, color, shift });
            }
        }
    }
    out
}

fn plain_terms(chi: &QQChar) -> Result<Vec<YMonomial>, CurrentError> {
    chi.terms()
        .map(|(m, k)| if k == 1 { Ok(m.clone()) } else { Err(CurrentError::Multiplicity(m.to_string(), k)) })
        .collect()
}

fn top_of(n: usize, edges: &[Edge]) -> Result<usize, CurrentError> {
    let mut has_parent = vec![false; n];
    for e in edges {
        has_parent[e.to] = true;
    }
    let tops: Vec<usize> = (0..n).filter(|i| !has_parent[*i]).collect();
    match tops.as_slice() {
        [t] => Ok(*t),
        _ => Err(CurrentError::NoUniqueTop(tops.len())),
    }
}

/// A root path from the top term: `target = top · ∏ A^{-1}_{i,μ}` along `steps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APath {
    pub target: YMonomial,
    pub steps: Vec<(usize, ParamMonomial)>,
}

impl APath {
    pub fn check(&self, c: &CartanMatrix, top: &YMonomial) -> bool {
        let mut m = top.clone();
        for (i, mu) in &self.steps {
            m = m.div(&affine_root(c, *i, *mu));
        }
        m == self.target
    }

    /// The product of roots along the path, as exponents of `A_{i,μ}`.
    pub fn roots(&self) -> BTreeMap<(usize, ParamMonomial), i32> {
        let mut r = BTreeMap::new();
        for s in &self.steps {
            *r.entry(*s).or_insert(0) -= 1;
        }
        r.retain(|_, e| *e != 0);
        r
    }
}

/// Shortest root paths from the unique top of `chi` to every term.
pub fn apaths(c: &CartanMatrix, chi: &QQChar) -> Result<(YMonomial, Vec<APath>), CurrentError> {
    let terms = plain_terms(chi)?;
    let edges = char_edges(c, &terms);
    let top = top_of(terms.len(), &edges)?;
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; terms.len()];
    let mut seen = vec![false; terms.len()];
    seen[top] = true;
    let mut queue = VecDeque::from([top]);
    while let Some(u) = queue.pop_front() {
        for (k, e) in edges.iter().enumerate() {
            if e.from == u && !seen[e.to] {
                seen[e.to] = true;
                prev[e.to] = Some((u, k));
                queue.push_back(e.to);
            }
        }
    }
    let mut out = Vec::with_capacity(terms.len());
    for (t, m) in terms.iter().enumerate() {
        if !seen[t] {
            return Err(CurrentError::Unreachable(m.display(c).to_string()));
        }
        let mut steps = Vec::new();
        let mut cur = t;
        while let Some((p, k)) = prev[cur] {
            steps.push((edges[k].color, edges[k].shift));
            cur = p;
        }
        steps.reverse();
        out.push(APath { target: m.clone(), steps });
    }
    Ok((terms[top].clone(), out))
}

/// Which screening current: `S_i`, or the dual `S^-_i` of a bosonic color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Screening {
    Standard,
    Dual,
}

impl Screening {
    fn gen(self, i: usize) -> Gen {
        match self {
            Screening::Standard => Gen::S(i),
            Screening::Dual => Gen::SDual(i),
        }
    }

    /// `τ` with `A_i(z) = S(τ^{-1} z) / S(τ z)`.
    fn tau(self, c: &CartanMatrix, i: usize) -> Option<ParamMonomial> {
        match self {
            Screening::Standard => Some(ParamMonomial::S3),
            Screening::Dual => c.sigma[i].prime.map(|(p, _)| p),
        }
    }
}

/// A simple pole of `⟨S_i(w) m(z)⟩` at `w = b z` with residue `d z^{zpow}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub b: ParamMonomial,
    pub d: ParamRational,
    pub zpow: i32,
}

pub fn screening_contraction(
    c: &CartanMatrix,
    m: &YMonomial,
    i: usize,
    kind: Screening,
) -> Result<ContractionFn, CurrentError> {
    let mut f = ContractionFn::one();
    for (v, e) in m.factors() {
        let p = prim_contract(c, kind.gen(i), Gen::Y(v.color))?;
        f = &f * &p.shift(ParamMonomial::ONE, v.shift).pow(e);
    }
    Ok(f)
}

pub fn screening_residues(
    c: &CartanMatrix,
    m: &YMonomial,
    i: usize,
    kind: Screening,
) -> Result<Vec<Residue>, CurrentError> {
    let f = screening_contraction(c, m, i, kind)?;
    let mut out = Vec::new();
    for (b, _) in f.poles() {
        let (d, zpow) = f.residue_at(b)?;
        out.push(Residue { b, d, zpow });
    }
    Ok(out)
}

/// Residue entries of one color grouped into classes of equal operators
/// `:S_i(bz) m(z):`. Each class lists `(term, residue)`.
fn residue_classes(
    c: &CartanMatrix,
    terms: &[YMonomial],
    i: usize,
    kind: Screening,
) -> Result<Vec<Vec<(usize, Residue)>>, CurrentError> {
    let tau = match kind.tau(c, i) {
        Some(t) => t,
        None => return Ok(Vec::new()),
    };
    let index: HashMap<&YMonomial, usize> = terms.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut entries = Vec::new();
    for (t, m) in terms.iter().enumerate() {
        for r in screening_residues(c, m, i, kind)? {
            entries.push((t, r));
        }
    }
    let pos: HashMap<(usize, ParamMonomial), usize> =
        entries.iter().enumerate().map(|(k, (t, r))| ((*t, r.b), k)).collect();
    // :m S(bz): = :(m A^{-1}_{i, τ^{-1} b}) S(τ^{-2} b z):
    let forward = |k: usize| -> Option<usize> {
        let (t, r) = &entries[k];
        let m2 = terms[*t].div(&affine_root(c, i, tau.inv() * r.b));
        let t2 = *index.get(&m2)?;
        pos.get(&(t2, tau.pow(-2) * r.b)).copied()
    };
    let mut next = vec![None; entries.len()];
    let mut has_prev = vec![false; entries.len()];
    for k in 0..entries.len() {
        next[k] = forward(k);
        if let Some(k2) = next[k] {
            has_prev[k2] = true;
        }
    }
    let mut done = vec![false; entries.len()];
    let mut classes = Vec::new();
    for start in 0..entries.len() {
        if has_prev[start] || done[start] {
            continue;
        }
        let mut class = Vec::new();
        let mut k = Some(start);
        while let Some(j) = k {
            if done[j] {
                break;
            }
            done[j] = true;
            class.push(entries[j].clone());
            k = next[j];
        }
        classes.push(class);
    }
    // cycles cannot occur since each link lowers the degree, but stay total
    for k in 0..entries.len() {
        if !done[k] {
            classes.push(vec![entries[k].clone()]);
        }
    }
    Ok(classes)
}

fn class_sum(class: &[(usize, Residue)], coeffs: &[ParamRational]) -> BTreeMap<i32, ParamRational> {
    let mut sums: BTreeMap<i32, ParamRational> = BTreeMap::new();
    for (t, r) in class {
        let s = sums.entry(r.zpow).or_insert_with(ParamRational::zero);
        *s = &*s + &(&coeffs[*t] * &r.d);
    }
    sums.retain(|_, v| !v.is_zero());
    sums
}

/// Coefficients making `Σ c_m m(z)` commute with all screening charges.
#[derive(Clone, Debug)]
pub struct Bosonization {
    pub top: usize,
    pub terms: Vec<YMonomial>,
    pub coeffs: Vec<ParamRational>,
    /// `(from, to, color, c_to / c_from)` read off two-entry residue classes.
    pub edges: Vec<(usize, usize, usize, ParamRational)>,
    pub classes: usize,
}

impl Bosonization {
    pub fn coeff(&self, m: &YMonomial) -> Option<&ParamRational> {
        self.terms.iter().position(|t| t == m).map(|k| &self.coeffs[k])
    }

    pub fn to_json(&self, c: &CartanMatrix) -> Value {
        let mut rows: Vec<(String, Value)> = self
            .terms
            .iter()
            .zip(&self.coeffs)
            .map(|(m, k)| {
                (m.display(c).to_string(), json!({"monomial": m.to_json(c), "coeff": k.to_json()}))
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        json!({
            "top": self.terms[self.top].to_json(c),
            "terms": rows.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
            "residue_classes": self.classes,
        })
    }
}

/// Solve for the coefficients of `V_χ`, normalised so that the top term has `top_coeff`.
pub fn bosonize(c: &CartanMatrix, chi: &QQChar, top_coeff: ParamRational) -> Result<Bosonization, CurrentError> {
    let terms = plain_terms(chi)?;
    let top = top_of(terms.len(), &char_edges(c, &terms))?;
    let mut all_classes = Vec::new();
    let mut edges = Vec::new();
    for i in 0..c.size() {
        for class in residue_classes(c, &terms, i, Screening::Standard)? {
            if let [(t1, r1), (t2, r2)] = class.as_slice() {
                if r1.zpow == r2.zpow {
                    let ratio = -(r1.d.checked_div(&r2.d)?);
                    edges.push((*t1, *t2, i, ratio));
                }
            }
            all_classes.push((i, class));
        }
    }
    let mut coeffs: Vec<Option<ParamRational>> = vec![None; terms.len()];
    coeffs[top] = Some(top_coeff);
    let mut queue = VecDeque::from([top]);
    while let Some(u) = queue.pop_front() {
        let cu = coeffs[u].clone().expect("queued terms are assigned");
        for (a, b, _, r) in &edges {
            let (v, val) = if *a == u {
                (*b, &cu * r)
            } else if *b == u {
                (*a, cu.checked_div(r)?)
            } else {
                continue;
            };
            match &coeffs[v] {
                Some(old) if *old != val => {
                    return Err(CurrentError::PathInconsistent(terms[v].display(c).to_string()));
                }
                Some(_) => {}
                None => {
                    coeffs[v] = Some(val);
                    queue.push_back(v);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(terms.len());
    for (k, v) in coeffs.into_iter().enumerate() {
        out.push(v.ok_or_else(|| CurrentError::Unreachable(terms[k].display(c).to_string()))?);
    }
    for (i, class) in &all_classes {
        let sums = class_sum(class, &out);
        if !sums.is_empty() {
            return Err(CurrentError::NotScreened {
                color: c.labels[*i].to_string(),
                detail: format!("class of {} residues at {}", class.len(), terms[class[0].0].display(c)),
            });
        }
    }
    Ok(Bosonization { top, terms, coeffs: out, edges, classes: all_classes.len() })
}

/// Number of commuting squares of root steps checked; errors on the first
/// square whose two coefficient paths disagree.
pub fn path_consistency(c: &CartanMatrix, b: &Bosonization) -> Result<usize, CurrentError> {
    let ratio = |from: usize, to: usize| -> Option<ParamRational> {
        b.edges.iter().find_map(|(a, t, _, r)| {
            if *a == from && *t == to {
                Some(r.clone())
            } else if *a == to && *t == from {
                r.recip().ok()
            } else {
                None
            }
        })
    };
    let edges = char_edges(c, &b.terms);
    let mut squares = 0;
    for e1 in &edges {
        for e2 in &edges {
            if e2.from != e1.from || e2.to <= e1.to {
                continue;
            }
            for e3 in edges.iter().filter(|e| e.from == e1.to) {
                for e4 in edges.iter().filter(|e| e.from == e2.to && e.to == e3.to) {
                    let (Some(r1), Some(r3), Some(r2), Some(r4)) =
                        (ratio(e1.from, e1.to), ratio(e3.from, e3.to), ratio(e2.from, e2.to), ratio(e4.from, e4.to))
                    else {
                        return Err(CurrentError::PathInconsistent(b.terms[e3.to].display(c).to_string()));
                    };
                    if &r1 * &r3 != &r2 * &r4 {
                        return Err(CurrentError::PathInconsistent(b.terms[e3.to].display(c).to_string()));
                    }
                    squares += 1;
                }
            }
        }
    }
    Ok(squares)
}

/// Check that the coefficients cancel the dual screening residues of color `i`.
pub fn dual_screening_color(c: &CartanMatrix, b: &Bosonization, i: usize) -> Result<(), CurrentError> {
    if c.is_fermionic(i) || c.sigma[i].prime.is_none() {
        return Err(CurrentError::NotBosonic(c.labels[i].to_string()));
    }
    for class in residue_classes(c, &b.terms, i, Screening::Dual)? {
        if !class_sum(&class, &b.coeffs).is_empty() {
            return Err(CurrentError::NotScreened {
                color: format!("{} (dual)", c.labels[i]),
                detail: format!("class of {} residues", class.len()),
            });
        }
    }
    Ok(())
}

/// The dual screening check on every bosonic color carrying a second
/// factorisation. Returns the number of colors checked.
pub fn dual_screening_check(c: &CartanMatrix, b: &Bosonization) -> Result<usize, CurrentError> {
    let mut checked = 0;
    for i in 0..c.size() {
        if c.is_fermionic(i) || c.sigma[i].prime.is_none() {
            continue;
        }
        dual_screening_color(c, b, i)?;
        checked += 1;
    }
    Ok(checked)
}

fn lin(x: ParamMonomial) -> ParamLaurent {
    // 1 - x
    ParamLaurent::binomial(ParamMonomial::ONE, x)
}

/// `ω_2`, `ω_1` and `ω_0` (for any other `kind`) of the two-term rule.
pub fn omega(kind: u8, x: ParamMonomial) -> Result<ParamRational, RingError> {
    let (s1, s3, q) = (ParamMonomial::S1, ParamMonomial::S3, ParamMonomial::Q);
    match kind {
        2 => ParamRational::new(&lin(s3.pow(2) * x) * &lin(s1.pow(2) * x), &lin(x) * &lin(q.pow(-2) * x)),
        1 => ParamRational::new(&lin(s3.pow(2) * x) * &lin(q.pow(2) * x), &lin(x) * &lin(s1.pow(-2) * x)),
        _ => Ok(&ParamRational::monomial(s3.pow(-2)) * &ParamRational::new(lin(s3.pow(2) * x), lin(x))?),
    }
}

/// Closed-form ratio `c_{m2}/c_{m1}` for a `gl(n|m)` step `m2 = m1 A^{-1}_{i,μ}`.
pub fn two_term_ratio(c: &CartanMatrix, m1: &YMonomial, i: usize, mu: ParamMonomial) -> Result<ParamRational, CurrentError> {
    if !matches!(c.family, Family::GlStd { .. }) {
        return Err(CurrentError::WrongFamily { what: "two-term ratios", family: c.family.name() });
    }
    let label = c.labels[i];
    let (a, kind, pre) = if label.num == 0 && !label.bar {
        (mu * ParamMonomial::S3, 0, ParamRational::int(-1))
    } else if label.bar {
        (mu / ParamMonomial::S1, 1, ParamRational::monomial(ParamMonomial::S1.pow(-2)))
    } else {
        (mu / ParamMonomial::Q, 2, ParamRational::monomial(ParamMonomial::Q.pow(-2)))
    };
    if m1.exp(YVar::new(i, a)) != 1 {
        return Err(CurrentError::BadStep(format!("{} lacks Y[{label},{a}]", m1.display(c))));
    }
    let mut r = pre;
    for (b, e) in m1.color_factors(i) {
        if b == a {
            continue;
        }
        r = &r * &omega(kind, b / a)?.pow(e)?;
    }
    Ok(r)
}

/// Closed-form coefficient of a column tableau of `gl_sym`, given its labels.
pub fn cchi_coefficient(labels: &[Label]) -> ParamRational {
    let (s1, q) = (ParamMonomial::S1, ParamMonomial::Q);
    let mut out = ParamRational::one();
    let mut zeros = 0;
    for l in labels {
        let i = l.num as i32;
        if l.num == 0 {
            zeros += 1;
        } else if l.bar {
            out = &out * &ParamRational::monomial(sq(-1, 1 - 2 * i));
        } else {
            out = &out * &ParamRational::monomial(sq(1, 2 * i - 1));
        }
    }
    for j in 1..=zeros {
        let num = ParamLaurent::binomial(q.pow(1 - j) * s1, q.pow(j - 1) * s1.inv());
        let den = ParamLaurent::binomial(q.pow(j), q.pow(-j));
        out = &out * &ParamRational::new(num, den).expect("q^j - q^-j is nonzero");
    }
    out
}

/// `c^ξ_ν = (-1)^{|ν|} q^{n(n-1)/2 - 2 Σ (i-1) ν_i}`.
pub fn cxi_coefficient(nu: &[u8]) -> ParamRational {
    let n = nu.len() as i32;
    let weight: i32 = nu.iter().enumerate().map(|(k, v)| k as i32 * *v as i32).sum();
    let total: i32 = nu.iter().map(|v| *v as i32).sum();
    let m = ParamRational::monomial(sq(0, n * (n - 1) / 2 - 2 * weight));
    if total % 2 == 1 {
        -m
    } else {
        m
    }
}

/// Closed-form coefficient of the vector-character letter `l` in `V_{χ_{1,1}}`.
pub fn vector_coefficient(c: &CartanMatrix, l: Label) -> Result<ParamRational, CurrentError> {
    let (s1, s2, q) = (ParamMonomial::S1, ParamMonomial::S2, ParamMonomial::Q);
    let i = l.num as i32;
    Ok(match c.family {
        Family::GlSym { .. } => cchi_coefficient(&[l]),
        Family::Osp { .. } => {
            if l.num == 0 {
                ParamRational::new(ParamLaurent::t_of(s1), ParamLaurent::t_of(q))?
            } else if l.bar {
                ParamRational::monomial(sq(-1, 1 - 2 * i))
            } else {
                ParamRational::monomial(sq(1, 2 * i - 1))
            }
        }
        Family::GlStd { .. } => {
            if l.bar {
                &ParamRational::from(ParamLaurent::t_of(s1)) * &ParamRational::monomial(sq(1 - 2 * i, 0))
            } else {
                &ParamRational::from(ParamLaurent::t_of(s2)) * &ParamRational::monomial(sq(0, 2 * i - 1))
            }
        }
        Family::Custom => return Err(CurrentError::WrongFamily { what: "vector currents", family: "custom" }),
    })
}

/// The vertex operators `Λ'`, `Λ̄'`, `W'` that commute with every screening current.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Lambda,
    LambdaBar,
    W,
}

/// The operator content of a normal-ordered product: screening-neutral factors,
/// a `Y` monomial and a leftover power of the variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Content {
    pub primes: BTreeMap<(Prime, ParamMonomial), i32>,
    pub y: YMonomial,
    pub wpow: i32,
}

impl Content {
    pub fn prime(p: Prime, shift: ParamMonomial, exp: i32) -> Self {
        let mut c = Content::default();
        c.add_prime(p, shift, exp);
        c
    }

    pub fn add_prime(&mut self, p: Prime, shift: ParamMonomial, exp: i32) {
        let e = self.primes.entry((p, shift)).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.primes.remove(&(p, shift));
        }
    }

    pub fn mul(&self, o: &Content) -> Content {
        let mut out = self.clone();
        for ((p, s), e) in &o.primes {
            out.add_prime(*p, *s, *e);
        }
        out.y = out.y.mul(&o.y);
        out.wpow += o.wpow;
        out
    }

    pub fn tau(&self, by: ParamMonomial) -> Content {
        Content {
            primes: self.primes.iter().map(|((p, s), e)| ((*p, *s * by), *e)).collect(),
            y: self.y.tau(by),
            wpow: self.wpow,
        }
    }

    pub fn to_json(&self, c: &CartanMatrix) -> Value {
        let primes: Vec<Value> = self
            .primes
            .iter()
            .map(|((p, s), e)| json!({"op": format!("{p:?}"), "shift": [s.a, s.b], "exp": e}))
            .collect();
        json!({"primes": primes, "y": self.y.to_json(c), "wpow": self.wpow})
    }
}

/// One term of a current: base operators `Λ`, `Λ̄` or the `T` base at shifts,
/// times a product of root currents `A_i(μ z)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub label: String,
    pub bases: Vec<(Gen, ParamMonomial)>,
    pub roots: BTreeMap<(usize, ParamMonomial), i32>,
}

impl Word {
    pub fn content(&self, c: &CartanMatrix) -> Result<Content, CurrentError> {
        let mut out = Content::default();
        for (g, a) in &self.bases {
            out = out.mul(&base_content(c, *g, *a)?);
        }
        for ((i, mu), e) in &self.roots {
            out.y = out.y.mul(&affine_root(c, *i, *mu).pow(*e));
        }
        Ok(out)
    }
}

fn base_content(c: &CartanMatrix, g: Gen, a: ParamMonomial) -> Result<Content, CurrentError> {
    let wrong = || CurrentError::WrongFamily { what: "lambda currents", family: c.family.name() };
    match g {
        Gen::Lambda | Gen::LambdaBar => {
            let (one, onebar, s) = lambda_data(c).ok_or_else(wrong)?;
            let (p, own, other) =
                if g == Gen::Lambda { (Prime::Lambda, one, onebar) } else { (Prime::LambdaBar, onebar, one) };
            let mut out = Content::prime(p, a, 1);
            out.y = YMonomial::from_factors([(own, a, 1), (other, s * a, -1)]);
            Ok(out)
        }
        Gen::TBase => {
            let first = letters(c)?.into_iter().next().expect("vector character is nonempty").1;
            let mut out = Content::prime(Prime::W, a, 1);
            out.y = first.tau(a);
            Ok(out)
        }
        other => Err(CurrentError::Contraction(ContractionError::UnsupportedPair(other.to_string(), "content".into()))),
    }
}

/// `Σ coeff · word(z)`.
#[derive(Clone, Debug)]
pub struct Current {
    pub name: &'static str,
    pub terms: Vec<(ParamRational, Word)>,
}

/// Memoised primitive contractions.
#[derive(Default)]
pub struct ContractionCache(HashMap<(Gen, Gen), ContractionFn>);

impl ContractionCache {
    pub fn prim(&mut self, c: &CartanMatrix, g1: Gen, g2: Gen) -> Result<ContractionFn, ContractionError> {
        if let Some(f) = self.0.get(&(g1, g2)) {
            return Ok(f.clone());
        }
        let f = prim_contract(c, g1, g2)?;
        self.0.insert((g1, g2), f.clone());
        Ok(f)
    }
}

/// `⟨w1(z) w2(w)⟩`.
pub fn contract_words(
    c: &CartanMatrix,
    w1: &Word,
    w2: &Word,
    cache: &mut ContractionCache,
) -> Result<ContractionFn, CurrentError> {
    let pieces = |w: &Word| -> Vec<(Gen, ParamMonomial, i32)> {
        let mut v: Vec<_> = w.bases.iter().map(|(g, a)| (*g, *a, 1)).collect();
        v.extend(w.roots.iter().map(|((i, mu), e)| (Gen::A(*i), *mu, *e)));
        v
    };
    let mut f = ContractionFn::one();
    for (g1, a1, e1) in pieces(w1) {
        for (g2, a2, e2) in pieces(w2) {
            let p = cache.prim(c, g1, g2)?;
            if p.is_one() {
                continue;
            }
            f = &f * &p.shift(a1, a2).pow(e1 * e2);
        }
    }
    Ok(f)
}

fn xi_family(c: &CartanMatrix, what: &'static str) -> Result<(), CurrentError> {
    match c.family {
        Family::GlSym { .. } | Family::Osp { .. } => Ok(()),
        f => Err(CurrentError::WrongFamily { what, family: f.name() }),
    }
}

fn nu_label(nu: &[u8]) -> String {
    nu.iter().rev().map(|v| char::from(b'0' + v)).collect()
}

fn xi_words(c: &CartanMatrix, bar: bool) -> Result<Vec<(Vec<u8>, ParamRational, Word)>, CurrentError> {
    xi_family(c, "E and F currents")?;
    let closed = xi_closed_terms(c)?;
    let chi = QQChar::from_monomials(closed.iter().map(|(_, m)| m.clone()));
    let (_, paths) = apaths(c, &chi)?;
    let base = if bar { Gen::LambdaBar } else { Gen::Lambda };
    let perm = if bar { c.bar.clone() } else { None };
    let mut out = Vec::with_capacity(closed.len());
    for (nu, m) in &closed {
        let path = paths.iter().find(|p| &p.target == m).expect("every term has a path");
        let roots = path
            .roots()
            .into_iter()
            .map(|((i, mu), e)| ((perm.as_ref().map_or(i, |p| p[i]), mu), e))
            .collect();
        let word = Word { label: nu_label(nu), bases: vec![(base, ParamMonomial::ONE)], roots };
        out.push((nu.clone(), cxi_coefficient(nu), word));
    }
    Ok(out)
}

/// `E(z) = Σ_ν c^ξ_ν :Λ'(z) ξ̃_ν(z):`, with words labelled by `ν_n ... ν_1`.
pub fn build_e(c: &CartanMatrix) -> Result<Current, CurrentError> {
    Ok(Current { name: "E", terms: xi_words(c, false)?.into_iter().map(|(_, k, w)| (k, w)).collect() })
}

/// `F(z)`: `E` with `Λ ↔ Λ̄` and `A_i ↔ A_ī`.
pub fn build_f(c: &CartanMatrix) -> Result<Current, CurrentError> {
    Ok(Current { name: "F", terms: xi_words(c, true)?.into_iter().map(|(_, k, w)| (k, w)).collect() })
}

/// `T(z) = :W'(z) V_{χ_{1,1}}(z):`, one word per letter.
pub fn build_t(c: &CartanMatrix) -> Result<Current, CurrentError> {
    xi_family(c, "the T current")?;
    let lts = letters(c)?;
    let chi = QQChar::from_monomials(lts.iter().map(|(_, m)| m.clone()));
    let (top, paths) = apaths(c, &chi)?;
    if top != lts[0].1 {
        return Err(CurrentError::NoUniqueTop(0));
    }
    let mut terms = Vec::with_capacity(lts.len());
    for (label, m) in &lts {
        let path = paths.iter().find(|p| &p.target == m).expect("every letter has a path");
        let word = Word { label: label.to_string(), bases: vec![(Gen::TBase, ParamMonomial::ONE)], roots: path.roots() };
        terms.push((vector_coefficient(c, *label)?, word));
    }
    Ok(Current { name: "T", terms })
}

/// Delta-function terms `Σ coeff δ(c w / z) :X(cw) Y(w):` of `pre(z,w) ⟨X(z) Y(w)⟩`,
/// keyed by locus `c` and grouped by operator content in the variable `w`.
pub type DeltaTerms = BTreeMap<ParamMonomial, BTreeMap<Content, ParamRational>>;

pub fn delta_terms(
    c: &CartanMatrix,
    x: &Current,
    y: &Current,
    pre: &ContractionFn,
    cache: &mut ContractionCache,
) -> Result<DeltaTerms, CurrentError> {
    let mut out: DeltaTerms = BTreeMap::new();
    for (cx, wx) in &x.terms {
        let content_x = wx.content(c)?;
        for (cy, wy) in &y.terms {
            let content_y = wy.content(c)?;
            let f = pre * &contract_words(c, wx, wy, cache)?;
            for (locus, _) in f.poles() {
                let (val, ydeg) = f.residue_at(locus)?;
                let coeff = &(cx * cy) * &val.checked_div(&ParamRational::monomial(locus))?;
                let mut content = content_x.tau(locus).mul(&content_y);
                content.wpow = ydeg - 1;
                let slot = out.entry(locus).or_default().entry(content).or_insert_with(ParamRational::zero);
                *slot = &*slot + &coeff;
            }
        }
    }
    for by_content in out.values_mut() {
        by_content.retain(|_, v| !v.is_zero());
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}

/// An elementary field whose derivative can appear at a double pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Y(usize),
    Prime(Prime),
}

/// One independent piece of the singular part at a locus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Singular {
    /// `δ(cw/z)` times the operator.
    Delta(Content),
    /// The derivative delta times the operator.
    DeltaPrime(Content),
    /// `δ(cw/z)` times the operator with the derivative of one field inserted;
    /// `position: None` is the zero-mode part shared by all positions.
    Field { content: Content, kind: FieldKind, position: Option<ParamMonomial> },
}

pub type SingularTerms = BTreeMap<ParamMonomial, BTreeMap<Singular, ParamRational>>;

fn bump(out: &mut SingularTerms, locus: ParamMonomial, key: Singular, v: ParamRational) {
    let slot = out.entry(locus).or_default().entry(key).or_insert_with(ParamRational::zero);
    *slot = &*slot + &v;
}

fn content_pieces(ct: &Content) -> Vec<(FieldKind, ParamMonomial, i32)> {
    let mut v: Vec<_> = ct.primes.iter().map(|((p, s), e)| (FieldKind::Prime(*p), *s, *e)).collect();
    v.extend(ct.y.factors().map(|(yv, e)| (FieldKind::Y(yv.color), yv.shift, e)));
    v
}

/// Full singular part of `pre(z,w) ⟨X(z) Y(w)⟩` for poles of order at most two.
/// Every entry must vanish for the product to be regular.
pub fn singular_terms(
    c: &CartanMatrix,
    x: &Current,
    y: &Current,
    pre: &ContractionFn,
    cache: &mut ContractionCache,
) -> Result<SingularTerms, CurrentError> {
    let mut out: SingularTerms = BTreeMap::new();
    for (cx, wx) in &x.terms {
        let content_x = wx.content(c)?;
        for (cy, wy) in &y.terms {
            let content_y = wy.content(c)?;
            let f = pre * &contract_words(c, wx, wy, cache)?;
            let k = cx * cy;
            for (locus, _) in f.poles() {
                let (order, val, ydeg, dlog) = f.expand_at(locus)?;
                let cl = ParamRational::monomial(locus);
                let mut content = content_x.tau(locus).mul(&content_y);
                match order {
                    1 => {
                        content.wpow = ydeg - 1;
                        bump(&mut out, locus, Singular::Delta(content), &k * &val.checked_div(&cl)?);
                    }
                    2 => {
                        let h = &k * &val;
                        let mut c2 = content.clone();
                        c2.wpow = ydeg;
                        bump(&mut out, locus, Singular::DeltaPrime(c2), h.clone());
                        let mut c1 = content.clone();
                        c1.wpow = ydeg - 2;
                        bump(&mut out, locus, Singular::Delta(c1.clone()), (&h * &dlog).checked_div(&cl)?);
                        for (kind, s, e) in content_pieces(&content_x) {
                            let e = ParamRational::int(e as i64);
                            let mut cf = content.clone();
                            cf.wpow = ydeg - 1;
                            let at = (&(&h * &e) * &ParamRational::monomial(s)).checked_div(&cl)?;
                            bump(&mut out, locus, Singular::Field { content: cf, kind, position: Some(s * locus) }, at);
                            let zero = (&h * &e).checked_div(&cl)?;
                            bump(&mut out, locus, Singular::Field { content: c1.clone(), kind, position: None }, zero);
                        }
                    }
                    _ => {
                        return Err(ContractionError::NonSimplePole { at: locus.to_string(), order }.into());
                    }
                }
            }
        }
    }
    for by_key in out.values_mut() {
        by_key.retain(|_, v| !v.is_zero());
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}
