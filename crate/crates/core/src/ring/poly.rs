//! Dense polynomials in `s1` (univariate) and `s2` over `Q[s1]` (bivariate),
//! used only for exact division and gcd of Laurent polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::laurent::ParamLaurent;
use super::monomial::ParamMonomial;
use super::Q;

/// Dense polynomial in `s1`, index = exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Q>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        UPoly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        UPoly(v).trimmed()
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> UPoly {
        UPoly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly(v).trimmed()
    }

    /// Division with remainder over `Q`.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by zero polynomial");
        let lc = d.lc();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            quo[k] = c;
        }
        (UPoly(quo).trimmed(), UPoly(r).trimmed())
    }

    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&(Q::one() / self.lc()))
    }

    pub fn pow(&self, k: usize) -> UPoly {
        (0..k).fold(UPoly::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// Value at an integer point.
    pub fn eval(&self, x: i64) -> Q {
        let x = Q::from_integer(x.into());
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * &x + c)
    }

    /// Rescaled to coprime integer coefficients.
    fn integral(&self) -> UPoly {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&Q::new(den, num))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self` reduced by `d`.
    fn prem(&self, d: &UPoly) -> UPoly {
        let dd = d.deg().expect("nonzero divisor");
        let lc = d.lc();
        let mut r = self.clone();
        while let Some(dr) = r.deg() {
            if dr < dd {
                break;
            }
            let rl = r.lc();
            let mut v = r.scale(&lc).0;
            for (j, b) in d.0.iter().enumerate() {
                v[dr - dd + j] -= &rl * b;
            }
            r = UPoly(v).trimmed();
        }
        r
    }

    /// Monic gcd, via a primitive remainder sequence over the integers.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.integral(), b.integral());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).integral();
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Polynomial in `s2` with coefficients in `Q[s1]`, index = `s2` exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly(pub Vec<UPoly>);

impl BPoly {
    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lc(&self) -> UPoly {
        self.0.last().cloned().unwrap_or_else(UPoly::zero)
    }

    /// Strips the monomial factor; returns the polynomial and the stripped exponents.
    pub fn from_laurent(p: &ParamLaurent) -> (BPoly, i32, i32) {
        let (ma, mb) = p.min_exponents();
        let mut rows: Vec<UPoly> = Vec::new();
        for (m, c) in p.terms() {
            let i = (m.b - mb) as usize;
            let j = (m.a - ma) as usize;
            if rows.len() <= i {
                rows.resize(i + 1, UPoly::zero());
            }
            let row = &mut rows[i].0;
            if row.len() <= j {
                row.resize(j + 1, Q::zero());
            }
            row[j] = c.clone();
        }
        (BPoly(rows).trimmed(), ma, mb)
    }

    pub fn to_laurent(&self, sa: i32, sb: i32) -> ParamLaurent {
        let mut out = ParamLaurent::zero();
        for (i, row) in self.0.iter().enumerate() {
            for (j, c) in row.0.iter().enumerate() {
                out.add_term(ParamMonomial::new(j as i32 + sa, i as i32 + sb), c.clone());
            }
        }
        out
    }

    fn shift_mul(&self, k: usize, c: &UPoly) -> BPoly {
        let mut v = vec![UPoly::zero(); k];
        v.extend(self.0.iter().map(|x| x.mul(c)));
        BPoly(v).trimmed()
    }

    fn sub(&self, o: &BPoly) -> BPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(UPoly::zero);
            let b = o.0.get(i).cloned().unwrap_or_else(UPoly::zero);
            v.push(a.sub(&b));
        }
        BPoly(v).trimmed()
    }

    fn scale_u(&self, c: &UPoly) -> BPoly {
        self.shift_mul(0, c)
    }

    pub fn mul(&self, o: &BPoly) -> BPoly {
        if self.is_zero() || o.is_zero() {
            return BPoly(Vec::new());
        }
        let mut v = vec![UPoly::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        BPoly(v).trimmed()
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &BPoly) -> Option<BPoly> {
        let dd = d.deg()?;
        let dlc = d.lc();
        let mut r = self.clone();
        let mut quo: Vec<UPoly> = Vec::new();
        while let Some(dr) = r.deg() {
            if dr < dd {
                return None;
            }
            let c = r.lc().exact_div(&dlc)?;
            let k = dr - dd;
            if quo.len() <= k {
                quo.resize(k + 1, UPoly::zero());
            }
            r = r.sub(&d.shift_mul(k, &c));
            // leading term must cancel exactly
            if r.deg().is_some_and(|x| x >= dr) {
                return None;
            }
            quo[k] = c;
        }
        Some(BPoly(quo).trimmed())
    }

    fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for c in &self.0 {
            g = UPoly::gcd(&g, c);
            if g.deg() == Some(0) {
                break;
            }
        }
        g
    }

    fn primitive(&self) -> BPoly {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        BPoly(self.0.iter().map(|x| x.exact_div(&c).expect("content divides")).collect()).integral()
    }

    /// Rescaled to coprime integer coefficients, keeping remainder sequences small.
    fn integral(&self) -> BPoly {
        let coeffs = || self.0.iter().flat_map(|row| row.0.iter()).filter(|c| !c.is_zero());
        let den = coeffs().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        if num.is_zero() {
            return self.clone();
        }
        let k = Q::new(den, num);
        BPoly(self.0.iter().map(|row| row.scale(&k)).collect())
    }

    fn prem(&self, d: &BPoly) -> BPoly {
        let dd = d.deg().expect("nonzero divisor");
        let lc = d.lc();
        let Some(mut steps) = self.deg().and_then(|n| (n + 1).checked_sub(dd)) else {
            return self.clone();
        };
        let mut r = self.clone();
        while let Some(dr) = r.deg() {
            if dr < dd {
                break;
            }
            let rl = r.lc();
            r = r.scale_u(&lc).sub(&d.shift_mul(dr - dd, &rl));
            steps -= 1;
        }
        // exactly lc^(deg self - deg d + 1), as the subresultant divisions expect
        r.scale_u(&lc.pow(steps))
    }

    /// The polynomial in `s2` obtained by setting `s1 = x`.
    fn specialize(&self, x: i64) -> UPoly {
        UPoly(self.0.iter().map(|c| c.eval(x)).collect()).trimmed()
    }

    /// Whether the gcd has `s2`-degree zero, decided at a point where neither
    /// leading coefficient vanishes (the specialized gcd can only grow there).
    fn coprime_in_s2(&self, o: &BPoly) -> bool {
        let (la, lb) = (self.lc(), o.lc());
        let Some(x) = [2i64, 3, 5, 7, 11, 13].into_iter().find(|x| !la.eval(*x).is_zero() && !lb.eval(*x).is_zero()) else {
            return false;
        };
        UPoly::gcd(&self.specialize(x), &o.specialize(x)).deg() == Some(0)
    }

    /// Gcd up to a rational scalar, via content and a primitive remainder sequence.
    pub fn gcd(a: &BPoly, b: &BPoly) -> BPoly {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let cg = UPoly::gcd(&a.content(), &b.content());
        if a.coprime_in_s2(b) {
            return BPoly(vec![cg]);
        }
        let (mut x, mut y) = (a.primitive(), b.primitive());
        if x.deg() < y.deg() {
            std::mem::swap(&mut x, &mut y);
        }
        // subresultant remainder sequence: all divisions below are exact
        let (mut g, mut h) = (UPoly::constant(Q::one()), UPoly::constant(Q::one()));
        loop {
            let delta = x.deg().expect("nonzero") - y.deg().expect("nonzero");
            let r = x.prem(&y);
            if r.is_zero() {
                break;
            }
            if r.deg() == Some(0) {
                return BPoly(vec![cg]);
            }
            let div = g.mul(&h.pow(delta));
            x = y;
            y = BPoly(r.0.iter().map(|c| c.exact_div(&div).expect("subresultant division")).collect());
            g = x.lc();
            h = match delta {
                0 => h,
                d => g.pow(d).exact_div(&h.pow(d - 1)).expect("subresultant division"),
            };
        }
        y.primitive().scale_u(&cg)
    }
}
