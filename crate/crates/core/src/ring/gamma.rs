use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::laurent::{q_to_json, qint, ParamLaurent};
use super::{RingError, Q};

/// A polynomial in `γ` over `Q`, index = exponent.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GammaPoly(Vec<Q>);

impl GammaPoly {
    pub fn new(coeffs: Vec<Q>) -> Self {
        GammaPoly(coeffs).trimmed()
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| qint(x)).collect())
    }

    pub fn zero() -> Self {
        GammaPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The variable `γ`.
    pub fn gamma() -> Self {
        Self::from_ints(&[0, 1])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn exact_div(&self, d: &GammaPoly) -> Result<GammaPoly, RingError> {
        let dd = d.degree().ok_or(RingError::ZeroDivisor)?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Err(RingError::NotDivisible);
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &d.0[dd];
            for (j, b) in d.0.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            quo[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(RingError::NotDivisible);
        }
        Ok(GammaPoly::new(quo))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(q_to_json).collect())
    }
}

/// `K`-entry of a `B`-entry under `s1 = s3^{-γ}`, `s2 = s3^{-(1-γ)}`, `s3 -> 1`.
///
/// A monomial `s1^a s2^b` becomes `s3^{c}` with `c = -b + (b - a)γ`, so
/// `-lim t3^{-2} Σ n_j s3^{c_j} = -(1/8) Σ n_j c_j^2` once the constant and
/// linear orders vanish.
pub fn gamma_limit(p: &ParamLaurent) -> Result<GammaPoly, RingError> {
    let mut order0 = Q::zero();
    let mut order1 = GammaPoly::zero();
    let mut order2 = GammaPoly::zero();
    for (m, n) in p.terms() {
        let c = GammaPoly::from_ints(&[-(m.b as i64), (m.b - m.a) as i64]);
        order0 += n;
        let nc = &c * &GammaPoly::constant(n.clone());
        order2 = &order2 + &(&nc * &c);
        order1 = &order1 + &nc;
    }
    if !order0.is_zero() {
        return Err(RingError::LimitDiverges(format!("{p}: value at s = 1 is {order0}")));
    }
    if !order1.is_zero() {
        return Err(RingError::LimitDiverges(format!("{p}: first order {order1}")));
    }
    Ok(&order2 * &GammaPoly::constant(Q::new((-1).into(), 8.into())))
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
            let var = match k {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{var}")?,
                _ => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Add<&GammaPoly> for &GammaPoly {
    type Output = GammaPoly;
    fn add(self, o: &GammaPoly) -> GammaPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        GammaPoly::new(v)
    }
}

impl Sub<&GammaPoly> for &GammaPoly {
    type Output = GammaPoly;
    fn sub(self, o: &GammaPoly) -> GammaPoly {
        self + &(-o)
    }
}

impl Mul<&GammaPoly> for &GammaPoly {
    type Output = GammaPoly;
    fn mul(self, o: &GammaPoly) -> GammaPoly {
        if self.is_zero() || o.is_zero() {
            return GammaPoly::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        GammaPoly::new(v)
    }
}

impl Neg for &GammaPoly {
    type Output = GammaPoly;
    fn neg(self) -> GammaPoly {
        GammaPoly(self.0.iter().map(|c| -c.clone()).collect())
    }
}

super::forward_owned_ops!(GammaPoly);
