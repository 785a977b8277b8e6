use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::laurent::ParamLaurent;
use super::monomial::ParamMonomial;
use super::poly::BPoly;
use super::{RingError, Q};

/// An element of `Q(s1, s2)` kept in canonical form.
///
/// Canonical means: numerator and denominator coprime, the denominator is a
/// polynomial with no monomial factor, and its graded-lex least term has
/// coefficient one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamRational {
    num: ParamLaurent,
    den: ParamLaurent,
}

impl ParamRational {
    pub fn new(num: ParamLaurent, den: ParamLaurent) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDivisor);
        }
        Ok(Self::canon(num, den))
    }

    pub fn zero() -> Self {
        ParamRational { num: ParamLaurent::zero(), den: ParamLaurent::one() }
    }

    pub fn one() -> Self {
        ParamRational { num: ParamLaurent::one(), den: ParamLaurent::one() }
    }

    pub fn int(n: i64) -> Self {
        ParamRational::from(ParamLaurent::int(n))
    }

    pub fn monomial(m: ParamMonomial) -> Self {
        ParamRational::from(ParamLaurent::monomial(m))
    }

    fn canon(num: ParamLaurent, den: ParamLaurent) -> Self {
        Self::normalize(num, den, true)
    }

    /// Canonical form of `num/den` when the two are already known to be coprime.
    fn coprime(num: ParamLaurent, den: ParamLaurent) -> Self {
        Self::normalize(num, den, false)
    }

    fn normalize(num: ParamLaurent, den: ParamLaurent, reduce: bool) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut n, na, nb) = BPoly::from_laurent(&num);
        let (mut d, da, db) = BPoly::from_laurent(&den);
        if reduce && (d.deg() != Some(0) || d.0[0].deg() != Some(0)) {
            let g = BPoly::gcd(&n, &d);
            if g.deg() != Some(0) || g.0[0].deg() != Some(0) {
                n = n.exact_div(&g).expect("gcd divides numerator");
                d = d.exact_div(&g).expect("gcd divides denominator");
            }
        }
        // gcd may reintroduce no monomial factors, but division can; strip again
        let den_l = d.to_laurent(0, 0);
        let (ea, eb) = den_l.min_exponents();
        let den_l = den_l.shift(ParamMonomial::new(-ea, -eb));
        let num_l = n.to_laurent(na - da - ea, nb - db);
        let num_l = num_l.shift(ParamMonomial::new(0, -eb));
        let lead = den_l.least_term().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = Q::one() / lead;
        ParamRational { num: num_l.scale(&inv), den: den_l.scale(&inv) }
    }

    pub fn numer(&self) -> &ParamLaurent {
        &self.num
    }

    pub fn denom(&self) -> &ParamLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial this equals, if the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&ParamLaurent> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, RingError> {
        ParamRational::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &ParamRational) -> Result<Self, RingError> {
        if o.is_zero() {
            return Err(RingError::ZeroDivisor);
        }
        Ok(Self::canon(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn pow(&self, k: i32) -> Result<Self, RingError> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn invert_params(&self) -> Self {
        Self::canon(self.num.invert_params(), self.den.invert_params())
    }

    pub fn to_json(&self) -> Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }
}

impl Default for ParamRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<ParamLaurent> for ParamRational {
    fn from(p: ParamLaurent) -> Self {
        Self::canon(p, ParamLaurent::one())
    }
}

impl From<ParamMonomial> for ParamRational {
    fn from(m: ParamMonomial) -> Self {
        ParamRational::monomial(m)
    }
}

impl fmt::Display for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Add<&ParamRational> for &ParamRational {
    type Output = ParamRational;
    fn add(self, o: &ParamRational) -> ParamRational {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return ParamRational::canon(&self.num + &o.num, self.den.clone());
        }
        // both sides are reduced, so only the common part of the denominators
        // can cancel against the new numerator
        let g = poly_gcd(&self.den, &o.den);
        let (b, d) = (exact_quotient(&self.den, &g), exact_quotient(&o.den, &g));
        let t = &(&self.num * &d) + &(&o.num * &b);
        if t.is_zero() {
            return ParamRational::zero();
        }
        let g2 = poly_gcd(&t, &g);
        ParamRational::coprime(exact_quotient(&t, &g2), &(&b * &d) * &exact_quotient(&g, &g2))
    }
}

impl Sub<&ParamRational> for &ParamRational {
    type Output = ParamRational;
    fn sub(self, o: &ParamRational) -> ParamRational {
        self + &(-o)
    }
}

impl Mul<&ParamRational> for &ParamRational {
    type Output = ParamRational;
    fn mul(self, o: &ParamRational) -> ParamRational {
        if self.is_zero() || o.is_zero() {
            return ParamRational::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return ParamRational::from(&self.num * &o.num);
        }
        let (g1, g2) = (poly_gcd(&self.num, &o.den), poly_gcd(&o.num, &self.den));
        ParamRational::coprime(
            &exact_quotient(&self.num, &g1) * &exact_quotient(&o.num, &g2),
            &exact_quotient(&self.den, &g2) * &exact_quotient(&o.den, &g1),
        )
    }
}

/// Gcd of two nonzero Laurent polynomials, as a polynomial free of monomial factors.
fn poly_gcd(a: &ParamLaurent, b: &ParamLaurent) -> ParamLaurent {
    let (x, _, _) = BPoly::from_laurent(a);
    let (y, _, _) = BPoly::from_laurent(b);
    BPoly::gcd(&x, &y).to_laurent(0, 0)
}

/// `a / g` for a gcd `g` from [`poly_gcd`].
fn exact_quotient(a: &ParamLaurent, g: &ParamLaurent) -> ParamLaurent {
    if g.is_one() {
        return a.clone();
    }
    let (x, sa, sb) = BPoly::from_laurent(a);
    let (y, _, _) = BPoly::from_laurent(g);
    x.exact_div(&y).expect("gcd divides").to_laurent(sa, sb)
}

impl Div<&ParamRational> for &ParamRational {
    type Output = ParamRational;
    fn div(self, o: &ParamRational) -> ParamRational {
        self.checked_div(o).expect("division by zero rational")
    }
}

impl Neg for &ParamRational {
    type Output = ParamRational;
    fn neg(self) -> ParamRational {
        ParamRational { num: -&self.num, den: self.den.clone() }
    }
}

super::forward_owned_ops!(ParamRational);

impl Div for ParamRational {
    type Output = ParamRational;
    fn div(self, o: ParamRational) -> ParamRational {
        &self / &o
    }
}

impl Zero for ParamRational {
    fn zero() -> Self {
        ParamRational::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
