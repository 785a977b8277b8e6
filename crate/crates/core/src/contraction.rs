//! Rational contractions `κ x^p y^r ∏ (x - c y)^e` between vertex operators,
//! and the primitive table they are built from.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{CartanMatrix, Family};
use crate::ring::{ParamLaurent, ParamMonomial, ParamRational, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("no rational contraction between {0} and {1}")]
    UnsupportedPair(String, String),
    #[error("pole of order {order} at x = {at} y")]
    NonSimplePole { at: String, order: i32 },
    #[error("no pole at x = {0} y")]
    NoPole(String),
    #[error("contraction has degree {0}, expected 0")]
    NonZeroDegree(i32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `κ · x^p · y^r · ∏_c (x - c y)^{e_c}` with `c` monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContractionFn {
    pub kappa: ParamRational,
    pub xpow: i32,
    pub ypow: i32,
    factors: BTreeMap<ParamMonomial, i32>,
}

impl ContractionFn {
    pub fn one() -> Self {
        Self::constant(ParamRational::one())
    }

    pub fn constant(kappa: ParamRational) -> Self {
        ContractionFn { kappa, xpow: 0, ypow: 0, factors: BTreeMap::new() }
    }

    /// `x - c y`.
    pub fn linear(c: ParamMonomial) -> Self {
        let mut f = Self::one();
        f.factors.insert(c, 1);
        f
    }

    /// `a x - b y`.
    pub fn binomial(a: ParamMonomial, b: ParamMonomial) -> Self {
        let mut f = Self::linear(b / a);
        f.kappa = ParamRational::monomial(a);
        f
    }

    /// `(x - num y) / (x - den y)`.
    pub fn ratio(num: ParamMonomial, den: ParamMonomial) -> Self {
        &Self::linear(num) * &Self::linear(den).pow(-1)
    }

    pub fn x_power(p: i32) -> Self {
        let mut f = Self::one();
        f.xpow = p;
        f
    }

    pub fn factors(&self) -> impl Iterator<Item = (ParamMonomial, i32)> + '_ {
        self.factors.iter().map(|(c, e)| (*c, *e))
    }

    pub fn is_one(&self) -> bool {
        self.kappa.is_one() && self.xpow == 0 && self.ypow == 0 && self.factors.is_empty()
    }

    /// Total homogeneous degree.
    pub fn degree(&self) -> i32 {
        self.xpow + self.ypow + self.factors.values().sum::<i32>()
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        ContractionFn {
            kappa: self.kappa.pow(k).expect("contraction constants are nonzero"),
            xpow: self.xpow * k,
            ypow: self.ypow * k,
            factors: self.factors.iter().map(|(c, e)| (*c, e * k)).collect(),
        }
    }

    /// `f(y, x)` written in `(x, y)`.
    pub fn swap(&self) -> Self {
        let mut kappa = self.kappa.clone();
        let mut factors = BTreeMap::new();
        for (c, e) in &self.factors {
            // y - c x = -c (x - c^{-1} y)
            let minus_c = -ParamRational::monomial(*c);
            kappa = &kappa * &minus_c.pow(*e).expect("nonzero");
            factors.insert(c.inv(), *e);
        }
        ContractionFn { kappa, xpow: self.ypow, ypow: self.xpow, factors }
    }

    /// `f(α x, β y)`.
    pub fn shift(&self, alpha: ParamMonomial, beta: ParamMonomial) -> Self {
        let mut kappa = &self.kappa * &ParamRational::monomial(alpha.pow(self.xpow) * beta.pow(self.ypow));
        let mut factors = BTreeMap::new();
        for (c, e) in &self.factors {
            kappa = &kappa * &ParamRational::monomial(alpha.pow(*e));
            *factors.entry(*c * beta / alpha).or_insert(0) += *e;
        }
        factors.retain(|_, e| *e != 0);
        ContractionFn { kappa, xpow: self.xpow, ypow: self.ypow, factors }
    }

    /// Poles `x = c y` with their orders.
    pub fn poles(&self) -> Vec<(ParamMonomial, i32)> {
        self.factors.iter().filter(|(_, e)| **e < 0).map(|(c, e)| (*c, -e)).collect()
    }

    /// `(x - c0 y) f` at `x = c0 y`, as `(constant, power of y)`.
    pub fn residue_at(&self, c0: ParamMonomial) -> Result<(ParamRational, i32), ContractionError> {
        match self.factors.get(&c0) {
            Some(-1) => {}
            Some(e) if *e < -1 => return Err(ContractionError::NonSimplePole { at: c0.to_string(), order: -e }),
            _ => return Err(ContractionError::NoPole(c0.to_string())),
        }
        let mut val = &self.kappa * &ParamRational::monomial(c0.pow(self.xpow));
        let mut ydeg = self.xpow + self.ypow;
        for (c, e) in &self.factors {
            if *c == c0 {
                continue;
            }
            let diff = ParamRational::from(ParamLaurent::binomial(c0, *c));
            val = &val * &diff.pow(*e)?;
            ydeg += e;
        }
        Ok((val, ydeg))
    }

    /// For a pole of order `k` at `x = c0 y`, with `h = (x - c0 y)^k f`, returns
    /// `(k, v, d, l)` such that `h(c0 y, y) = v y^d` and `∂_x h (c0 y, y) = v l y^{d-1}`.
    pub fn expand_at(&self, c0: ParamMonomial) -> Result<(i32, ParamRational, i32, ParamRational), ContractionError> {
        let k = match self.factors.get(&c0) {
            Some(e) if *e < 0 => -e,
            _ => return Err(ContractionError::NoPole(c0.to_string())),
        };
        let mut val = &self.kappa * &ParamRational::monomial(c0.pow(self.xpow));
        let mut ydeg = self.xpow + self.ypow;
        let mut dlog = &ParamRational::int(self.xpow as i64) / &ParamRational::monomial(c0);
        for (c, e) in &self.factors {
            if *c == c0 {
                continue;
            }
            let diff = ParamRational::from(ParamLaurent::binomial(c0, *c));
            val = &val * &diff.pow(*e)?;
            dlog = &dlog + &(&ParamRational::int(*e as i64) / &diff);
            ydeg += e;
        }
        Ok((k, val, ydeg, dlog))
    }

    /// Value at `x = c0 y` when there is no pole or zero there, as `(constant, power of y)`.
    pub fn value_at(&self, c0: ParamMonomial) -> Result<(ParamRational, i32), ContractionError> {
        let mut val = &self.kappa * &ParamRational::monomial(c0.pow(self.xpow));
        let mut ydeg = self.xpow + self.ypow;
        for (c, e) in &self.factors {
            if *c == c0 {
                return Err(ContractionError::NonSimplePole { at: c0.to_string(), order: -e });
            }
            let diff = ParamRational::from(ParamLaurent::binomial(c0, *c));
            val = &val * &diff.pow(*e)?;
            ydeg += e;
        }
        Ok((val, ydeg))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kappa": self.kappa.to_json(),
            "xpow": self.xpow,
            "ypow": self.ypow,
            "factors": self.factors.iter().map(|(c, e)| json!({"c": [c.a, c.b], "exp": e})).collect::<Vec<_>>(),
        })
    }
}

impl std::ops::Mul<&ContractionFn> for &ContractionFn {
    type Output = ContractionFn;
    fn mul(self, o: &ContractionFn) -> ContractionFn {
        let mut factors = self.factors.clone();
        for (c, e) in &o.factors {
            *factors.entry(*c).or_insert(0) += *e;
        }
        factors.retain(|_, e| *e != 0);
        ContractionFn {
            kappa: &self.kappa * &o.kappa,
            xpow: self.xpow + o.xpow,
            ypow: self.ypow + o.ypow,
            factors,
        }
    }
}

impl std::ops::Mul for ContractionFn {
    type Output = ContractionFn;
    fn mul(self, o: ContractionFn) -> ContractionFn {
        &self * &o
    }
}

impl fmt::Display for ContractionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.kappa)?;
        if self.xpow != 0 {
            write!(f, " z^{}", self.xpow)?;
        }
        if self.ypow != 0 {
            write!(f, " w^{}", self.ypow)?;
        }
        for (c, e) in &self.factors {
            write!(f, " (z - {c} w)^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ContractionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Vertex operators with a known rational contraction table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S(usize),
    Y(usize),
    A(usize),
    /// `Λ`
    Lambda,
    /// `Λ̄`
    LambdaBar,
    /// The base of the `T` current, `:W'(z) M_top(z):`.
    TBase,
    /// Dual screening current of a bosonic color.
    SDual(usize),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::S(i) => write!(f, "S{i}"),
            Gen::Y(i) => write!(f, "Y{i}"),
            Gen::A(i) => write!(f, "A{i}"),
            Gen::Lambda => write!(f, "La"),
            Gen::LambdaBar => write!(f, "LaBar"),
            Gen::TBase => write!(f, "TBase"),
            Gen::SDual(i) => write!(f, "S-{i}"),
        }
    }
}

fn unsupported(a: Gen, b: Gen) -> ContractionError {
    ContractionError::UnsupportedPair(a.to_string(), b.to_string())
}

/// The `Λ`-family data of a family: `(1, 1̄, s)` with `Λ = Λ' Y_1(z) / Y_1̄(s z)`.
pub fn lambda_data(c: &CartanMatrix) -> Option<(usize, usize, ParamMonomial)> {
    let s = match c.family {
        Family::GlSym { .. } => ParamMonomial::S1,
        Family::Osp { .. } => ParamMonomial::S1.pow(2),
        _ => return None,
    };
    Some((c.color(1, false), c.color(1, true), s))
}

/// `p(x) = (1 - q^{-1} s1^{-2} x)(1 - q s1^2 x) / ((1 - q^{-1} x)(1 - q x))` at `x = y/x`.
pub fn p_function() -> ContractionFn {
    let q = ParamMonomial::Q;
    let s1 = ParamMonomial::S1;
    &(&ContractionFn::linear(q.inv() * s1.pow(-2)) * &ContractionFn::linear(q * s1.pow(2)))
        * &(&ContractionFn::linear(q.inv()) * &ContractionFn::linear(q)).pow(-1)
}

/// `⟨A_i(x) A_j(y)⟩ = ∏_k (x - c_k y)^{-σ_k}` over the signed monomials of `B_ij`.
fn aa(c: &CartanMatrix, i: usize, j: usize) -> Result<ContractionFn, ContractionError> {
    let b = &c.d[i] * &c.entries[i][j];
    let mut f = ContractionFn::one();
    for (sign, m) in b.signed_monomials()? {
        f = &f * &ContractionFn::linear(m).pow(-sign);
    }
    Ok(f)
}

/// Whether exchanging two operators of these kinds produces a sign.
fn odd(c: &CartanMatrix, g: Gen) -> bool {
    match g {
        Gen::S(i) | Gen::Y(i) => c.is_fermionic(i),
        Gen::Lambda | Gen::LambdaBar => true,
        _ => false,
    }
}

fn s_y(c: &CartanMatrix, i: usize, j: usize) -> ContractionFn {
    if i != j {
        return ContractionFn::one();
    }
    match c.sigma[i].prime {
        Some((sp, _)) if !c.is_fermionic(i) => ContractionFn::ratio(sp, sp.inv()),
        _ => ContractionFn::linear(ParamMonomial::ONE).pow(-1),
    }
}

fn lambda_s(c: &CartanMatrix, bar: bool, j: usize) -> Result<ContractionFn, ContractionError> {
    let (one, onebar, s) = lambda_data(c).ok_or_else(|| unsupported(Gen::Lambda, Gen::S(j)))?;
    let (own, other) = if bar { (onebar, one) } else { (one, onebar) };
    Ok(if j == own {
        ContractionFn::linear(ParamMonomial::ONE).pow(-1)
    } else if j == other {
        ContractionFn::binomial(s, ParamMonomial::ONE)
    } else {
        ContractionFn::one()
    })
}

/// `⟨g1(x) g2(y)⟩`.
pub fn prim_contract(c: &CartanMatrix, g1: Gen, g2: Gen) -> Result<ContractionFn, ContractionError> {
    use Gen::*;
    let s3 = ParamMonomial::S3;
    let via_s = |f: &dyn Fn(ParamMonomial) -> Result<ContractionFn, ContractionError>| -> Result<ContractionFn, ContractionError> {
        Ok(&f(s3.inv())? * &f(s3)?.pow(-1))
    };
    match (g1, g2) {
        (S(i), Y(j)) => Ok(s_y(c, i, j)),
        (A(i), A(j)) => aa(c, i, j),
        (Lambda, Lambda) => Ok(ContractionFn::ratio(ParamMonomial::ONE, s3.pow(2))),
        (LambdaBar, LambdaBar) => Ok(ContractionFn::ratio(ParamMonomial::ONE, s3.pow(-2))),
        (Lambda, LambdaBar) | (LambdaBar, Lambda) => Ok(ContractionFn::one()),
        (Lambda, S(j)) => lambda_s(c, false, j),
        (LambdaBar, S(j)) => lambda_s(c, true, j),
        // A_i(x) = S_i(s3^{-1} x) / S_i(s3 x)
        (A(i), Y(_)) | (A(i), Lambda) | (A(i), LambdaBar) => {
            via_s(&|a| Ok(prim_contract(c, S(i), g2)?.shift(a, ParamMonomial::ONE)))
        }
        (Y(_), A(i)) | (Lambda, A(i)) | (LambdaBar, A(i)) => {
            via_s(&|a| Ok(prim_contract(c, g1, S(i))?.shift(ParamMonomial::ONE, a)))
        }
        (TBase, Lambda) | (TBase, LambdaBar) | (Lambda, TBase) | (LambdaBar, TBase) => Ok(ContractionFn::one()),
        (TBase, A(j)) => {
            let n = c.family.rank().ok_or_else(|| unsupported(g1, g2))?;
            if Some(j) == c.try_color(n as u32, false) {
                // ⟨TBase(x) A_n^{-1}(y)⟩ = p(y / x)
                Ok(p_function().pow(-1))
            } else {
                Ok(ContractionFn::one())
            }
        }
        (A(_), TBase) => Ok(prim_contract(c, g2, g1)?.swap()),
        (SDual(i), Y(j)) => {
            if i != j {
                return Ok(ContractionFn::one());
            }
            let (_, spp) = c.sigma[i].prime.ok_or_else(|| unsupported(g1, g2))?;
            Ok(ContractionFn::ratio(spp, spp.inv()))
        }
        // remaining reversed pairs follow from the exchange rule
        (Y(_), S(_)) | (S(_), Lambda) | (S(_), LambdaBar) | (Y(_), SDual(_)) => {
            let f = prim_contract(c, g2, g1)?.swap();
            let sign = if odd(c, g1) && odd(c, g2) { -1 } else { 1 };
            Ok(if sign < 0 {
                let mut g = f;
                g.kappa = -g.kappa;
                g
            } else {
                f
            })
        }
        _ => Err(unsupported(g1, g2)),
    }
}
