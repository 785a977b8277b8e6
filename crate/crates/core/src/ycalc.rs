//! Monomials in the variables `Y_{i,a}` and integer combinations of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::cartan::{CartanError, CartanMatrix};
use crate::ring::ParamMonomial;

/// The variable `Y_{color, shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YVar {
    pub color: usize,
    pub shift: ParamMonomial,
}

impl YVar {
    pub fn new(color: usize, shift: ParamMonomial) -> Self {
        YVar { color, shift }
    }
}

/// A Laurent monomial in the `Y` variables; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YMonomial(BTreeMap<YVar, i32>);

impl YMonomial {
    pub fn one() -> Self {
        YMonomial(BTreeMap::new())
    }

    pub fn var(color: usize, shift: ParamMonomial, exp: i32) -> Self {
        let mut m = Self::one();
        m.mul_var(YVar::new(color, shift), exp);
        m
    }

    pub fn from_factors<I: IntoIterator<Item = (usize, ParamMonomial, i32)>>(it: I) -> Self {
        let mut m = Self::one();
        for (c, s, e) in it {
            m.mul_var(YVar::new(c, s), e);
        }
        m
    }

    pub fn mul_var(&mut self, v: YVar, exp: i32) {
        if exp == 0 {
            return;
        }
        let e = self.0.entry(v).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.0.remove(&v);
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: YVar) -> i32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (YVar, i32)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        YMonomial(self.0.iter().map(|(v, e)| (*v, e * k)).collect())
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn mul(&self, o: &YMonomial) -> Self {
        let mut m = self.clone();
        for (v, e) in o.factors() {
            m.mul_var(v, e);
        }
        m
    }

    pub fn div(&self, o: &YMonomial) -> Self {
        self.mul(&o.inv())
    }

    /// `τ_μ`: multiply every shift by `μ`.
    pub fn tau(&self, mu: ParamMonomial) -> Self {
        YMonomial(self.0.iter().map(|(v, e)| (YVar::new(v.color, v.shift * mu), *e)).collect())
    }

    /// The factors of one color, relabelled as color 0.
    pub fn restrict(&self, color: usize) -> Self {
        YMonomial(
            self.0
                .iter()
                .filter(|(v, _)| v.color == color)
                .map(|(v, e)| (YVar::new(0, v.shift), *e))
                .collect(),
        )
    }

    pub fn color_factors(&self, color: usize) -> impl Iterator<Item = (ParamMonomial, i32)> + '_ {
        self.0.iter().filter(move |(v, _)| v.color == color).map(|(v, e)| (v.shift, *e))
    }

    /// Total exponent of a color; only meaningful for fermionic colors.
    pub fn color_degree(&self, color: usize) -> i32 {
        self.color_factors(color).map(|(_, e)| e).sum()
    }

    /// Degree vector over the fermionic colors of `c`, bosonic entries are 0.
    pub fn degree(&self, c: &CartanMatrix) -> Vec<i32> {
        (0..c.size())
            .map(|i| if c.is_fermionic(i) { self.color_degree(i) } else { 0 })
            .collect()
    }

    pub fn generators(&self) -> BTreeSet<YVar> {
        self.0.keys().copied().collect()
    }

    pub fn shares_generator(&self, o: &YMonomial) -> bool {
        self.0.keys().any(|v| o.0.contains_key(v))
    }

    /// Apply a color permutation.
    pub fn recolor(&self, perm: &[usize]) -> Self {
        YMonomial(self.0.iter().map(|(v, e)| (YVar::new(perm[v.color], v.shift), *e)).collect())
    }

    pub fn bar_map(&self, c: &CartanMatrix) -> Result<Self, CartanError> {
        let perm = c.bar.as_ref().ok_or(CartanError::NoBarInvolution(c.family.name()))?;
        Ok(self.recolor(perm))
    }

    pub fn to_json(&self, c: &CartanMatrix) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(v, e)| {
                    json!({
                        "color": c.labels[v.color].to_string(),
                        "shift": [v.shift.a, v.shift.b],
                        "exp": e,
                    })
                })
                .collect(),
        )
    }

    pub fn display<'a>(&'a self, c: &'a CartanMatrix) -> impl fmt::Display + 'a {
        LabelledMonomial { m: self, c }
    }
}

struct LabelledMonomial<'a> {
    m: &'a YMonomial,
    c: &'a CartanMatrix,
}

impl fmt::Display for LabelledMonomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.m.factors() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "Y[{},{}]", self.c.labels[v.color], v.shift)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.factors() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "Y[{},{}]", v.color, v.shift)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `A_{i,μ} = ∏_j ∏_k Y_{j, μ c_k}^{σ_k}` over the signed monomials of `c_{ji}`.
pub fn affine_root(c: &CartanMatrix, i: usize, mu: ParamMonomial) -> YMonomial {
    let mut m = YMonomial::one();
    for j in 0..c.size() {
        let terms = c.entries[j][i].signed_monomials().expect("cartan entries are integral");
        for (sign, mono) in terms {
            m.mul_var(YVar::new(j, mu * mono), sign);
        }
    }
    m
}

/// A finite `Z`-linear combination of `Y` monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QQChar(BTreeMap<YMonomial, i64>);

impl QQChar {
    pub fn zero() -> Self {
        QQChar(BTreeMap::new())
    }

    pub fn monomial(m: YMonomial) -> Self {
        let mut c = Self::zero();
        c.add(m, 1);
        c
    }

    pub fn from_monomials<I: IntoIterator<Item = YMonomial>>(it: I) -> Self {
        let mut c = Self::zero();
        for m in it {
            c.add(m, 1);
        }
        c
    }

    pub fn add(&mut self, m: YMonomial, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&m);
        }
    }

    pub fn add_char(&mut self, o: &QQChar) {
        for (m, k) in &o.0 {
            self.add(m.clone(), *k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct monomials.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of coefficients.
    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn coeff(&self, m: &YMonomial) -> i64 {
        self.0.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&YMonomial, i64)> {
        self.0.iter().map(|(m, k)| (m, *k))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &YMonomial> {
        self.0.keys()
    }

    pub fn mul(&self, o: &QQChar) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &YMonomial) -> Self {
        QQChar(self.0.iter().map(|(a, k)| (a.mul(m), *k)).collect())
    }

    pub fn tau(&self, mu: ParamMonomial) -> Self {
        QQChar(self.0.iter().map(|(m, k)| (m.tau(mu), *k)).collect())
    }

    pub fn restrict(&self, color: usize) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.0 {
            out.add(m.restrict(color), *k);
        }
        out
    }

    pub fn bar_map(&self, c: &CartanMatrix) -> Result<Self, CartanError> {
        let mut out = Self::zero();
        for (m, k) in &self.0 {
            out.add(m.bar_map(c)?, *k);
        }
        Ok(out)
    }

    /// The common degree of all terms, if they agree.
    pub fn degree(&self, c: &CartanMatrix) -> Option<Vec<i32>> {
        let mut it = self.0.keys().map(|m| m.degree(c));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Whether every term has exponent `exp` on `v`.
    pub fn all_contain(&self, v: YVar, exp: i32) -> bool {
        self.0.keys().all(|m| m.exp(v) == exp)
    }

    pub fn generators(&self) -> BTreeSet<YVar> {
        self.0.keys().flat_map(|m| m.generators()).collect()
    }

    pub fn to_json(&self, c: &CartanMatrix) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(m, k)| json!({"coeff": k, "factors": m.to_json(c)}))
                .collect(),
        )
    }
}

/// No generator occurs in both characters.
pub fn mutually_generic(a: &QQChar, b: &QQChar) -> bool {
    a.generators().is_disjoint(&b.generators())
}
