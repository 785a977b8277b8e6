//! Constructions of the vector, column, hook, `ξ` and `η` characters, and a
//! checker for the basic (block-decomposable) property.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, Family, Label, Parity};
use crate::ring::ParamMonomial;
use crate::ycalc::{affine_root, QQChar, YMonomial, YVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QQCharError {
    #[error("{what} is not available for {family}")]
    WrongFamily { what: &'static str, family: &'static str },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid column height {0}")]
    InvalidColumn(usize),
    #[error("not a product of elementary blocks in color {color}: {reason}")]
    NotBasic { color: String, reason: String },
    #[error("block search budget exhausted in color {color}")]
    SearchBudgetExceeded { color: String },
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

fn sq(s1: i32, q: i32) -> ParamMonomial {
    ParamMonomial::sq(s1, q)
}

struct Factors<'a> {
    c: &'a CartanMatrix,
    m: YMonomial,
}

impl<'a> Factors<'a> {
    fn new(c: &'a CartanMatrix) -> Self {
        Factors { c, m: YMonomial::one() }
    }

    /// Colors outside the family (such as `n+1`) are skipped.
    fn y(mut self, num: u32, bar: bool, shift: ParamMonomial, exp: i32) -> Self {
        if let Some(i) = self.c.try_color(num, bar) {
            self.m.mul_var(YVar::new(i, shift), exp);
        }
        self
    }

    fn done(self) -> YMonomial {
        self.m
    }
}

/// The monomials `M_{i,1}` of the vector character, in the order `≺`.
pub fn letters(c: &CartanMatrix) -> Result<Vec<(Label, YMonomial)>, QQCharError> {
    let mut out = Vec::new();
    match c.family {
        Family::GlSym { n } | Family::Osp { n } => {
            let osp = matches!(c.family, Family::Osp { .. });
            let n = n as i32;
            let nu = n as u32;
            for i in (2..=n).rev() {
                let iu = i as u32;
                let m = Factors::new(c).y(iu, false, sq(0, n - i), 1).y(iu + 1, false, sq(0, n - i + 1), -1);
                out.push((Label::plain(iu), m.done()));
            }
            if !osp {
                out.push((
                    Label::plain(1),
                    Factors::new(c)
                        .y(2, false, sq(0, n), -1)
                        .y(1, false, sq(-1, n - 1), 1)
                        .y(1, false, sq(1, n - 1), -1)
                        .done(),
                ));
                out.push((
                    Label::plain(0),
                    Factors::new(c)
                        .y(1, false, sq(1, n + 1), 1)
                        .y(1, false, sq(1, n - 1), -1)
                        .y(1, true, sq(0, n - 1), 1)
                        .y(1, true, sq(0, n + 1), -1)
                        .done(),
                ));
                out.push((
                    Label::barred(1),
                    Factors::new(c)
                        .y(1, true, sq(2, n + 1), 1)
                        .y(1, true, sq(0, n + 1), -1)
                        .y(2, true, sq(1, n), 1)
                        .done(),
                ));
                for i in 2..=n {
                    let iu = i as u32;
                    let m = Factors::new(c).y(iu, true, sq(1, n + i), -1).y(iu + 1, true, sq(1, n + i - 1), 1);
                    out.push((Label::barred(iu), m.done()));
                }
            } else {
                out.push((
                    Label::plain(1),
                    Factors::new(c)
                        .y(2, false, sq(0, n), -1)
                        .y(1, false, sq(-1, n - 1), 1)
                        .y(1, false, sq(1, n - 1), -1)
                        .y(1, true, sq(-1, n - 1), 1)
                        .y(1, true, sq(1, n - 1), -1)
                        .done(),
                ));
                out.push((
                    Label::plain(0),
                    Factors::new(c)
                        .y(1, false, sq(1, n + 1), 1)
                        .y(1, false, sq(1, n - 1), -1)
                        .y(1, true, sq(-1, n - 1), 1)
                        .y(1, true, sq(-1, n + 1), -1)
                        .done(),
                ));
                out.push((
                    Label::barred(0),
                    Factors::new(c)
                        .y(1, false, sq(-1, n - 1), 1)
                        .y(1, false, sq(-1, n + 1), -1)
                        .y(1, true, sq(1, n + 1), 1)
                        .y(1, true, sq(1, n - 1), -1)
                        .done(),
                ));
                out.push((
                    Label::barred(1),
                    Factors::new(c)
                        .y(1, false, sq(1, n + 1), 1)
                        .y(1, false, sq(-1, n + 1), -1)
                        .y(1, true, sq(1, n + 1), 1)
                        .y(1, true, sq(-1, n + 1), -1)
                        .y(2, false, sq(0, n), 1)
                        .done(),
                ));
                for i in 2..=n {
                    let iu = i as u32;
                    let m = Factors::new(c).y(iu, false, sq(0, n + i), -1).y(iu + 1, false, sq(0, n + i - 1), 1);
                    out.push((Label::barred(iu), m.done()));
                }
            }
            debug_assert_eq!(out.len(), if osp { 2 * nu as usize + 2 } else { 2 * nu as usize + 1 });
        }
        Family::GlStd { n, m } => {
            let (n, m) = (n as i32, m as i32);
            for j in (2..=n).rev() {
                let ju = j as u32;
                let f = Factors::new(c).y(ju - 1, false, sq(0, n - j), 1).y(ju, false, sq(0, n - j + 1), -1);
                out.push((Label::plain(ju), f.done()));
            }
            out.push((
                Label::plain(1),
                Factors::new(c)
                    .y(1, false, sq(0, n), -1)
                    .y(0, false, sq(-1, n - 1), 1)
                    .y(0, false, sq(1, n - 1), -1)
                    .done(),
            ));
            out.push((
                Label::barred(1),
                Factors::new(c)
                    .y(0, false, sq(1, n + 1), 1)
                    .y(0, false, sq(1, n - 1), -1)
                    .y(1, true, sq(0, n), 1)
                    .done(),
            ));
            for j in 2..=m {
                let ju = j as u32;
                let f = Factors::new(c).y(ju - 1, true, sq(j, n), -1).y(ju, true, sq(j - 1, n), 1);
                out.push((Label::barred(ju), f.done()));
            }
        }
        Family::Custom => return Err(QQCharError::WrongFamily { what: "vector letters", family: "custom" }),
    }
    Ok(out)
}

/// The vector character `χ_{1,1}`.
pub fn chi_vector(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    Ok(QQChar::from_monomials(letters(c)?.into_iter().map(|(_, m)| m)))
}

/// A five-term rank-one character with no block decomposition, on a bosonic color with `σ = q`.
pub fn nonbasic_example() -> (CartanMatrix, QQChar) {
    let c = CartanMatrix::rank_one(Parity::Bosonic, crate::cartan::BOSONIC_Q);
    let (s1, s2) = (ParamMonomial::S1, ParamMonomial::S3);
    let q2 = ParamMonomial::Q.pow(2);
    let y = |shift: ParamMonomial, exp: i32| (0, shift, exp);
    let terms = [
        vec![y(ParamMonomial::ONE, 1), y(s1.pow(-2), 1), y(s2.pow(-2), 1)],
        vec![y(ParamMonomial::ONE, 1), y(s2.pow(-2), 1), y(q2 * s1.pow(-2), -1)],
        vec![y(ParamMonomial::ONE, 1), y(s1.pow(-2), 1), y(q2 * s2.pow(-2), -1)],
        vec![y(ParamMonomial::ONE, 1), y(q2 * s1.pow(-2), -1), y(q2 * s2.pow(-2), -1)],
        vec![y(q2, -1), y(q2 * s1.pow(-2), -1), y(q2 * s2.pow(-2), -1)],
    ];
    let chi = QQChar::from_monomials(terms.into_iter().map(YMonomial::from_factors));
    (c, chi)
}

/// Non-decreasing fillings of a column of height `k`; only `0` may repeat.
pub fn column_fillings(n: usize, k: usize) -> Vec<Vec<usize>> {
    // letters indexed by position in order: 0..n-1 are n..1, n is 0, n+1.. are 1̄..n̄
    let zero = n;
    let total = 2 * n + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(cur: &mut Vec<usize>, k: usize, total: usize, zero: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let start = match cur.last() {
            None => 0,
            Some(&l) if l == zero => zero,
            Some(&l) => l + 1,
        };
        for l in start..total {
            cur.push(l);
            rec(cur, k, total, zero, out);
            cur.pop();
        }
    }
    rec(&mut cur, k, total, zero, &mut out);
    out
}

/// `χ_{k,1}` for the symmetric-parity family: fillings paired with monomials.
pub fn chi_column_terms(c: &CartanMatrix, k: usize) -> Result<Vec<(Vec<Label>, YMonomial)>, QQCharError> {
    let n = match c.family {
        Family::GlSym { n } => n,
        f => return Err(QQCharError::WrongFamily { what: "column characters", family: f.name() }),
    };
    if k == 0 {
        return Err(QQCharError::InvalidColumn(k));
    }
    let lets = letters(c)?;
    let mut out = Vec::new();
    for fill in column_fillings(n, k) {
        let mut m = YMonomial::one();
        for (s, &l) in fill.iter().enumerate() {
            let shift = sq(0, k as i32 - 1 - 2 * s as i32);
            m = m.mul(&lets[l].1.tau(shift));
        }
        out.push((fill.iter().map(|&l| lets[l].0).collect(), m));
    }
    Ok(out)
}

pub fn chi_column(c: &CartanMatrix, k: usize) -> Result<QQChar, QQCharError> {
    Ok(QQChar::from_monomials(chi_column_terms(c, k)?.into_iter().map(|(_, m)| m)))
}

/// `χ_{k̄,1}`, the bar image of the column character.
pub fn chi_column_bar(c: &CartanMatrix, k: usize) -> Result<QQChar, QQCharError> {
    Ok(chi_column(c, k)?.bar_map(c)?)
}

/// A hook partition `λ` for `gl(n|m)`: non-increasing, positive, `λ_{n+1} <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookPartition(pub Vec<usize>);

impl HookPartition {
    pub fn new(parts: Vec<usize>, n: usize, m: usize) -> Result<Self, QQCharError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(QQCharError::InvalidPartition(format!("{parts:?}: parts must be positive")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(QQCharError::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        if parts.get(n).is_some_and(|&p| p > m) {
            return Err(QQCharError::InvalidPartition(format!("{parts:?} is not an ({n}|{m}) hook")));
        }
        Ok(HookPartition(parts))
    }

    /// The `n x m` rectangle.
    pub fn rectangle(n: usize, m: usize) -> Self {
        HookPartition(vec![m; n])
    }

    /// Parse `"3,2,1"`.
    pub fn parse(s: &str, n: usize, m: usize) -> Result<Self, QQCharError> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| QQCharError::InvalidPartition(format!("{s}: {e}")))?;
        Self::new(parts, n, m)
    }

    fn boxes(&self) -> Vec<(usize, usize)> {
        self.0.iter().enumerate().flat_map(|(i, &l)| (0..l).map(move |j| (i, j))).collect()
    }
}

/// Semi-standard fillings with letter indices `0..n` = `n..1`, `n..n+m` = `1̄..m̄`.
pub fn hook_tableaux(lambda: &HookPartition, n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    let boxes = lambda.boxes();
    let total = n + m;
    let mut t: Vec<Vec<usize>> = lambda.0.iter().map(|&l| vec![usize::MAX; l]).collect();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        boxes: &[(usize, usize)],
        t: &mut Vec<Vec<usize>>,
        n: usize,
        total: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == boxes.len() {
            out.push(t.clone());
            return;
        }
        let (i, j) = boxes[k];
        for l in 0..total {
            if i > 0 {
                let up = t[i - 1][j];
                // equal in a column only for barred letters
                if l < up || (l == up && up < n) {
                    continue;
                }
            }
            if j > 0 {
                let left = t[i][j - 1];
                // equal in a row only for unbarred letters
                if l < left || (l == left && left >= n) {
                    continue;
                }
            }
            t[i][j] = l;
            rec(k + 1, boxes, t, n, total, out);
        }
        t[i][j] = usize::MAX;
    }
    rec(0, &boxes, &mut t, n, total, &mut out);
    out
}

/// `χ_{λ,1}` for the standard-parity family.
pub fn chi_hook(c: &CartanMatrix, lambda: &HookPartition) -> Result<QQChar, QQCharError> {
    let (n, m) = match c.family {
        Family::GlStd { n, m } => (n, m),
        f => return Err(QQCharError::WrongFamily { what: "hook characters", family: f.name() }),
    };
    let lets = letters(c)?;
    let mut out = QQChar::zero();
    for t in hook_tableaux(lambda, n, m) {
        let mut mono = YMonomial::one();
        for (i, row) in t.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                let shift = sq(-2 * (j as i32 + 1), -2 * (i as i32 + 1));
                mono = mono.mul(&lets[l].1.tau(shift));
            }
        }
        out.add(mono, 1);
    }
    Ok(out)
}

fn xi_base(c: &CartanMatrix, mu: ParamMonomial) -> (YMonomial, YMonomial) {
    let (one, onebar) = (c.color(1, false), c.color(1, true));
    let osp = matches!(c.family, Family::Osp { .. });
    let first = YMonomial::from_factors([(one, mu, 1), (onebar, mu * if osp { sq(2, 0) } else { sq(1, 0) }, -1)]);
    let second = YMonomial::from_factors([
        (one, mu * sq(2, 2), 1),
        (onebar, mu * if osp { sq(0, 2) } else { sq(1, 2) }, -1),
    ]);
    (first, second)
}

fn xi_family_rank(c: &CartanMatrix, what: &'static str) -> Result<usize, QQCharError> {
    match c.family {
        Family::GlSym { n } | Family::Osp { n } => Ok(n),
        f => Err(QQCharError::WrongFamily { what, family: f.name() }),
    }
}

/// `ξ_1` built by the two-part recursion in the rank.
pub fn xi_recursive(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    let n = xi_family_rank(c, "xi recursion")?;
    let (a, b) = xi_base(c, ParamMonomial::ONE);
    let mut p1 = QQChar::monomial(a);
    let mut p2 = QQChar::monomial(b);
    for k in 2..=n {
        let ki = k as i32;
        let ck = c.color(k as u32, false);
        let up = YMonomial::var(ck, sq(1, ki - 1), 1);
        let down = YMonomial::var(ck, sq(1, ki + 1), -1);
        let mut n1 = p1.clone();
        n1.add_char(&p2.mul_monomial(&up));
        let mut n2 = p1.tau(sq(0, 2)).mul_monomial(&down);
        n2.add_char(&p2.tau(sq(0, 2)));
        p1 = n1;
        p2 = n2;
    }
    p1.add_char(&p2);
    Ok(p1)
}

/// The terms `ξ̃_ν` from the closed form, with `nu[i-1] = ν_i`, ordered by `ν`
/// read as a binary number `ν_n ... ν_1`.
pub fn xi_closed_terms(c: &CartanMatrix) -> Result<Vec<(Vec<u8>, YMonomial)>, QQCharError> {
    let n = xi_family_rank(c, "xi closed form")?;
    let osp = matches!(c.family, Family::Osp { .. });
    let (one, onebar) = (c.color(1, false), c.color(1, true));
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0..(1u32 << n) {
        let nu: Vec<u8> = (0..n).map(|k| ((bits >> k) & 1) as u8).collect();
        out.push((nu.clone(), xi_term(c, &nu, osp, one, onebar)));
    }
    Ok(out)
}

fn xi_term(c: &CartanMatrix, nu: &[u8], osp: bool, one: usize, onebar: usize) -> YMonomial {
    let n = nu.len();
    let v = |i: usize| nu[i - 1] as i32;
    let total: i32 = nu.iter().map(|&x| x as i32).sum();
    let mut m = YMonomial::one();
    for i in 2..=n {
        let above: i32 = (i + 1..=n).map(v).sum();
        let e = -v(i) + v(i - 1);
        let shift = sq(1, 2 * above + v(i) - v(i - 1) + i as i32);
        m.mul_var(YVar::new(c.color(i as u32, false), shift), e);
    }
    m.mul_var(YVar::new(one, sq(2 * v(1), 2 * total)), 1);
    let bar_s1 = if osp { 2 - 2 * v(1) } else { 1 };
    m.mul_var(YVar::new(onebar, sq(bar_s1, 2 * total)), -1);
    m
}

pub fn xi_closed(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    Ok(QQChar::from_monomials(xi_closed_terms(c)?.into_iter().map(|(_, m)| m)))
}

/// `ξ_1` for any family: the recursion, or the rectangle quotient for `gl(n|m)`.
pub fn xi(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    match c.family {
        Family::GlStd { .. } => xi_rect(c),
        _ => xi_recursive(c),
    }
}

/// The generator `Y_{0, q^{-n-1} s1^{-1}}` dividing `χ_{λ0}`.
pub fn rect_divisor(c: &CartanMatrix) -> Result<YVar, QQCharError> {
    match c.family {
        Family::GlStd { n, .. } => Ok(YVar::new(c.color(0, false), sq(-1, -(n as i32) - 1))),
        f => Err(QQCharError::WrongFamily { what: "rectangle characters", family: f.name() }),
    }
}

/// `ξ_1 = τ_{q^{n+1} s1^{2m+1}}(Y_{0,q^{-n-1}s1^{-1}} χ_{λ0})`.
pub fn xi_rect(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    let (n, m) = match c.family {
        Family::GlStd { n, m } => (n as i32, m as i32),
        f => return Err(QQCharError::WrongFamily { what: "rectangle characters", family: f.name() }),
    };
    let chi = chi_hook(c, &HookPartition::rectangle(n as usize, m as usize))?;
    let v = rect_divisor(c)?;
    if !chi.all_contain(v, -1) {
        return Err(QQCharError::NotBasic {
            color: "0".into(),
            reason: "rectangle character is not divisible by the color-0 generator".into(),
        });
    }
    let div = YMonomial::var(v.color, v.shift, 1);
    Ok(chi.mul_monomial(&div).tau(sq(2 * m + 1, n + 1)))
}

/// `η_1`: the bar image of `ξ_1`, or `Y_{0,1}^{-1}` for `gl(n|m)`.
pub fn eta(c: &CartanMatrix) -> Result<QQChar, QQCharError> {
    match c.family {
        Family::GlStd { .. } => Ok(QQChar::monomial(YMonomial::var(c.color(0, false), ParamMonomial::ONE, -1))),
        Family::Custom => Err(QQCharError::WrongFamily { what: "eta", family: "custom" }),
        _ => Ok(xi_recursive(c)?.bar_map(c)?),
    }
}

/// One block of a color-`i` group: consecutive positions `a, aρ, ..., aρ^{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub base: ParamMonomial,
    pub ratio: ParamMonomial,
    pub len: usize,
}

/// A group `top · ∏ (1 + L_1 + L_1 L_2 + ...)` of a color decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGroup {
    pub top: YMonomial,
    pub chains: Vec<Chain>,
}

#[derive(Clone, Debug)]
pub struct BasicCertificate {
    /// Groups per color, in color order.
    pub groups: Vec<Vec<BlockGroup>>,
    /// Monomials that are group tops in every color.
    pub tops: Vec<YMonomial>,
}

/// Longest elementary block considered by the search.
pub const MAX_BLOCK_LEN: usize = 4;
/// Default node budget of the per-color search.
pub const DEFAULT_BUDGET: usize = 200_000;

struct ColorCtx<'a> {
    c: &'a CartanMatrix,
    i: usize,
    fermionic: bool,
    sigma: ParamMonomial,
    ratios: Vec<ParamMonomial>,
    roots: BTreeMap<ParamMonomial, YMonomial>,
}

impl<'a> ColorCtx<'a> {
    fn new(c: &'a CartanMatrix, i: usize) -> Self {
        let s = c.sigma[i];
        let fermionic = c.parity[i] == Parity::Fermionic;
        let ratios = match (fermionic, s.prime) {
            (true, _) => vec![s.sigma.pow(2)],
            (false, Some((p, pp))) => vec![p.pow(2), pp.pow(2)],
            (false, None) => vec![],
        };
        ColorCtx { c, i, fermionic, sigma: s.sigma, ratios, roots: BTreeMap::new() }
    }

    fn root(&mut self, mu: ParamMonomial) -> YMonomial {
        let (c, i) = (self.c, self.i);
        self.roots.entry(mu).or_insert_with(|| affine_root(c, i, mu)).clone()
    }

    /// Shift of the root removing position `b`.
    fn step_shift(&self, b: ParamMonomial) -> ParamMonomial {
        if self.fermionic {
            b * self.sigma.inv()
        } else {
            b * self.sigma
        }
    }

    /// Monomials one step above `x`.
    fn parents(&mut self, x: &YMonomial) -> Vec<YMonomial> {
        let gens: Vec<(ParamMonomial, i32)> = x.color_factors(self.i).collect();
        let mut out = Vec::new();
        for (s, e) in gens {
            let mu = match (self.fermionic, e) {
                // the added position b σ^{-2}
                (true, 1) => s * self.sigma,
                // the added Y^{-1}_{b σ^2}
                (false, -1) => s * self.sigma.inv(),
                _ => continue,
            };
            out.push(x.mul(&self.root(mu)));
        }
        out
    }

    fn generator_set(&self, ch: &Chain) -> Vec<ParamMonomial> {
        let pos: Vec<ParamMonomial> = (0..ch.len).map(|r| ch.base * ch.ratio.pow(r as i32)).collect();
        let mut g = pos.clone();
        if self.fermionic {
            g.push(ch.base * self.sigma.pow(-2));
        } else {
            g.extend(pos.iter().map(|p| *p * self.sigma.pow(2)));
        }
        g
    }

    /// All chain partitions of the positive positions of `t`.
    fn chain_partitions(&self, t: &YMonomial) -> Option<Vec<Vec<Chain>>> {
        let mut pos = Vec::new();
        let mut spectators = Vec::new();
        for (s, e) in t.color_factors(self.i) {
            match e {
                1 => pos.push(s),
                e if e < 0 && self.fermionic => spectators.push(s),
                _ => return None,
            }
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let set: BTreeSet<ParamMonomial> = pos.iter().copied().collect();
        self.partitions_rec(&set, &mut cur, &mut out);
        out.retain(|p| self.disjoint(p, &spectators));
        Some(out)
    }

    fn partitions_rec(&self, left: &BTreeSet<ParamMonomial>, cur: &mut Vec<Chain>, out: &mut Vec<Vec<Chain>>) {
        let Some(&p) = left.iter().next() else {
            out.push(cur.clone());
            return;
        };
        let mut seen_single = false;
        for &rho in &self.ratios {
            for start in 0..MAX_BLOCK_LEN {
                let base = p * rho.pow(-(start as i32));
                for len in start + 1..=MAX_BLOCK_LEN {
                    if len == 1 {
                        if seen_single {
                            continue;
                        }
                        seen_single = true;
                    }
                    let members: Vec<ParamMonomial> = (0..len).map(|r| base * rho.pow(r as i32)).collect();
                    if !members.iter().all(|m| left.contains(m)) {
                        continue;
                    }
                    let mut rest = left.clone();
                    for m in &members {
                        rest.remove(m);
                    }
                    cur.push(Chain { base, ratio: rho, len });
                    self.partitions_rec(&rest, cur, out);
                    cur.pop();
                }
            }
        }
    }

    fn disjoint(&self, chains: &[Chain], spectators: &[ParamMonomial]) -> bool {
        let mut used: BTreeSet<ParamMonomial> = BTreeSet::new();
        for ch in chains {
            for g in self.generator_set(ch) {
                if !used.insert(g) {
                    return false;
                }
            }
        }
        spectators.iter().all(|s| !used.contains(s))
    }

    fn group_terms(&mut self, top: &YMonomial, chains: &[Chain]) -> Vec<YMonomial> {
        let mut terms = vec![top.clone()];
        for ch in chains {
            let mut ladder = vec![YMonomial::one()];
            let mut acc = YMonomial::one();
            for r in 0..ch.len {
                let b = ch.base * ch.ratio.pow(r as i32);
                acc = acc.mul(&self.root(self.step_shift(b)).inv());
                ladder.push(acc.clone());
            }
            terms = terms.iter().flat_map(|t| ladder.iter().map(move |l| t.mul(l))).collect();
        }
        terms
    }
}

fn label(c: &CartanMatrix, i: usize) -> String {
    c.labels[i].to_string()
}

fn decompose_color(
    ctx: &mut ColorCtx<'_>,
    chi: &QQChar,
    budget: usize,
) -> Result<Vec<BlockGroup>, QQCharError> {
    let mut remaining: BTreeMap<YMonomial, i64> = BTreeMap::new();
    for (m, k) in chi.terms() {
        if k < 0 {
            return Err(QQCharError::NotBasic {
                color: label(ctx.c, ctx.i),
                reason: format!("negative coefficient {k}"),
            });
        }
        remaining.insert(m.clone(), k);
    }
    let mut groups = Vec::new();
    let mut nodes = 0usize;
    match search(ctx, &mut remaining, &mut groups, &mut nodes, budget) {
        Some(true) => Ok(groups),
        Some(false) => Err(QQCharError::NotBasic {
            color: label(ctx.c, ctx.i),
            reason: "no decomposition into products of mutually generic elementary blocks".into(),
        }),
        None => Err(QQCharError::SearchBudgetExceeded { color: label(ctx.c, ctx.i) }),
    }
}

fn take(remaining: &mut BTreeMap<YMonomial, i64>, terms: &[YMonomial]) -> bool {
    let mut need: BTreeMap<&YMonomial, i64> = BTreeMap::new();
    for t in terms {
        *need.entry(t).or_insert(0) += 1;
    }
    if need.iter().any(|(t, k)| remaining.get(*t).copied().unwrap_or(0) < *k) {
        return false;
    }
    for (t, k) in need {
        let e = remaining.get_mut(t).expect("checked above");
        *e -= k;
        if *e == 0 {
            remaining.remove(t);
        }
    }
    true
}

fn give_back(remaining: &mut BTreeMap<YMonomial, i64>, terms: &[YMonomial]) {
    for t in terms {
        *remaining.entry(t.clone()).or_insert(0) += 1;
    }
}

/// `None` when the budget runs out.
fn search(
    ctx: &mut ColorCtx<'_>,
    remaining: &mut BTreeMap<YMonomial, i64>,
    groups: &mut Vec<BlockGroup>,
    nodes: &mut usize,
    budget: usize,
) -> Option<bool> {
    if remaining.is_empty() {
        return Some(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    // prefer a term with no parent left: it has to be a top
    let keys: Vec<YMonomial> = remaining.keys().cloned().collect();
    let mut x = keys[0].clone();
    for k in &keys {
        if ctx.parents(k).iter().all(|p| !remaining.contains_key(p)) {
            x = k.clone();
            break;
        }
    }
    let mut candidates = vec![x.clone()];
    let mut frontier = vec![x.clone()];
    while let Some(y) = frontier.pop() {
        for p in ctx.parents(&y) {
            if remaining.contains_key(&p) && !candidates.contains(&p) && candidates.len() < 64 {
                candidates.push(p.clone());
                frontier.push(p);
            }
        }
    }
    for t in candidates {
        let Some(parts) = ctx.chain_partitions(&t) else { continue };
        for chains in parts {
            let terms = ctx.group_terms(&t, &chains);
            if !terms.contains(&x) || !take(remaining, &terms) {
                continue;
            }
            groups.push(BlockGroup { top: t.clone(), chains });
            match search(ctx, remaining, groups, nodes, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            groups.pop();
            give_back(remaining, &terms);
        }
    }
    Some(false)
}

/// Decompose `chi` into mutually generic elementary blocks for every color.
pub fn verify_basic(chi: &QQChar, c: &CartanMatrix) -> Result<BasicCertificate, QQCharError> {
    verify_basic_with_budget(chi, c, DEFAULT_BUDGET)
}

pub fn verify_basic_with_budget(
    chi: &QQChar,
    c: &CartanMatrix,
    budget: usize,
) -> Result<BasicCertificate, QQCharError> {
    let mut groups = Vec::with_capacity(c.size());
    for i in 0..c.size() {
        let mut ctx = ColorCtx::new(c, i);
        groups.push(decompose_color(&mut ctx, chi, budget)?);
    }
    let tops = chi
        .monomials()
        .filter(|m| groups.iter().all(|g| g.iter().any(|b| &b.top == *m)))
        .cloned()
        .collect();
    Ok(BasicCertificate { groups, tops })
}
