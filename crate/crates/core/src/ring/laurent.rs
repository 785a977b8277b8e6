use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::monomial::ParamMonomial;
use super::poly::BPoly;
use super::{RingError, Q};

/// A Laurent polynomial in `s1, s2` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamLaurent {
    terms: BTreeMap<ParamMonomial, Q>,
}

pub fn qint(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl ParamLaurent {
    pub fn zero() -> Self {
        ParamLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(ParamMonomial::ONE)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qint(n))
    }

    pub fn constant(c: Q) -> Self {
        Self::term(ParamMonomial::ONE, c)
    }

    pub fn monomial(m: ParamMonomial) -> Self {
        Self::term(m, Q::one())
    }

    pub fn term(m: ParamMonomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamLaurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (ParamMonomial, Q)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// `x - x^{-1}`.
    pub fn t_of(x: ParamMonomial) -> Self {
        Self::from_terms([(x, Q::one()), (x.inv(), -Q::one())])
    }

    /// `x + x^{-1}`.
    pub fn p_of(x: ParamMonomial) -> Self {
        Self::from_terms([(x, Q::one()), (x.inv(), Q::one())])
    }

    /// `t_i = s_i - s_i^{-1}` for `i = 1, 2, 3`.
    pub fn t(i: u8) -> Self {
        match i {
            1 => Self::t_of(ParamMonomial::S1),
            2 => Self::t_of(ParamMonomial::S2),
            3 => Self::t_of(ParamMonomial::S3),
            _ => panic!("t_{i} is not defined"),
        }
    }

    /// The binomial `x - y` of two monomials.
    pub fn binomial(x: ParamMonomial, y: ParamMonomial) -> Self {
        Self::from_terms([(x, Q::one()), (y, -Q::one())])
    }

    pub fn add_term(&mut self, m: ParamMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&ParamMonomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: ParamMonomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    /// The single term if this is `c * monomial`.
    pub fn as_term(&self) -> Option<(ParamMonomial, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    pub fn least_term(&self) -> Option<(ParamMonomial, &Q)> {
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamLaurent { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn shift(&self, by: ParamMonomial) -> Self {
        ParamLaurent { terms: self.terms.iter().map(|(m, x)| (*m * by, x.clone())).collect() }
    }

    /// Image under `s1 -> s1^{-1}, s2 -> s2^{-1}`.
    pub fn invert_params(&self) -> Self {
        ParamLaurent { terms: self.terms.iter().map(|(m, x)| (m.inv(), x.clone())).collect() }
    }

    /// Value at `s1 = s2 = 1`.
    pub fn at_one(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn min_exponents(&self) -> (i32, i32) {
        let a = self.terms.keys().map(|m| m.a).min().unwrap_or(0);
        let b = self.terms.keys().map(|m| m.b).min().unwrap_or(0);
        (a, b)
    }

    /// Multiset of signed monomials; a coefficient `n` contributes `|n|` copies.
    pub fn signed_monomials(&self) -> Result<Vec<(i32, ParamMonomial)>, RingError> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if !c.is_integer() {
                return Err(RingError::NonIntegral(format!("{c} at {m}")));
            }
            let n = c.to_integer();
            let k = n.abs().to_usize().ok_or_else(|| RingError::NonIntegral(format!("{n}")))?;
            let s = if n.is_negative() { -1 } else { 1 };
            out.extend(std::iter::repeat((s, *m)).take(k));
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient in the Laurent ring.
    pub fn exact_divide(&self, d: &ParamLaurent) -> Result<ParamLaurent, RingError> {
        if d.is_zero() {
            return Err(RingError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((m, c)) = d.as_term() {
            return Ok(self.shift(m.inv()).scale(&(Q::one() / c)));
        }
        let (pn, pa, pb) = BPoly::from_laurent(self);
        let (dn, da, db) = BPoly::from_laurent(d);
        match pn.exact_div(&dn) {
            Some(qp) => Ok(qp.to_laurent(pa - da, pb - db)),
            None => Err(RingError::NotDivisible),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!([m.a, m.b, q_to_json(c)]))
                .collect(),
        )
    }
}

pub fn q_to_json(c: &Q) -> Value {
    if c.is_integer() {
        match c.to_integer().to_i64() {
            Some(v) => json!(v),
            None => json!(c.to_integer().to_string()),
        }
    } else {
        json!(c.to_string())
    }
}

impl From<ParamMonomial> for ParamLaurent {
    fn from(m: ParamMonomial) -> Self {
        ParamLaurent::monomial(m)
    }
}

impl From<i64> for ParamLaurent {
    fn from(n: i64) -> Self {
        ParamLaurent::int(n)
    }
}

impl fmt::Display for ParamLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Add<&ParamLaurent> for &ParamLaurent {
    type Output = ParamLaurent;
    fn add(self, o: &ParamLaurent) -> ParamLaurent {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&ParamLaurent> for &ParamLaurent {
    type Output = ParamLaurent;
    fn sub(self, o: &ParamLaurent) -> ParamLaurent {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl AddAssign<&ParamLaurent> for ParamLaurent {
    fn add_assign(&mut self, o: &ParamLaurent) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&ParamLaurent> for ParamLaurent {
    fn sub_assign(&mut self, o: &ParamLaurent) {
        for (m, c) in &o.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Mul<&ParamLaurent> for &ParamLaurent {
    type Output = ParamLaurent;
    fn mul(self, o: &ParamLaurent) -> ParamLaurent {
        let mut r = ParamLaurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(*m1 * *m2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &ParamLaurent {
    type Output = ParamLaurent;
    fn neg(self) -> ParamLaurent {
        ParamLaurent { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

super::forward_owned_ops!(ParamLaurent);
