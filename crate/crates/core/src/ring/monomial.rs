use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

/// A monomial `s1^a * s2^b` of the parameter ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamMonomial {
    pub a: i32,
    pub b: i32,
}

impl ParamMonomial {
    pub const ONE: ParamMonomial = ParamMonomial { a: 0, b: 0 };
    pub const S1: ParamMonomial = ParamMonomial { a: 1, b: 0 };
    pub const S2: ParamMonomial = ParamMonomial { a: 0, b: 1 };
    pub const Q: ParamMonomial = ParamMonomial { a: 0, b: 1 };
    pub const S3: ParamMonomial = ParamMonomial { a: -1, b: -1 };

    pub const fn new(a: i32, b: i32) -> Self {
        ParamMonomial { a, b }
    }

    /// `s1^x * q^y`, the form most shifts are written in.
    pub const fn sq(x: i32, y: i32) -> Self {
        ParamMonomial { a: x, b: y }
    }

    pub fn is_one(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn inv(self) -> Self {
        ParamMonomial { a: -self.a, b: -self.b }
    }

    pub fn pow(self, k: i32) -> Self {
        ParamMonomial { a: self.a * k, b: self.b * k }
    }

    pub fn degree(self) -> i32 {
        self.a + self.b
    }
}

impl Mul for ParamMonomial {
    type Output = ParamMonomial;
    fn mul(self, o: ParamMonomial) -> ParamMonomial {
        ParamMonomial { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Div for ParamMonomial {
    type Output = ParamMonomial;
    fn div(self, o: ParamMonomial) -> ParamMonomial {
        ParamMonomial { a: self.a - o.a, b: self.b - o.b }
    }
}

// Graded lexicographic: total degree first, then the s1 exponent.
impl Ord for ParamMonomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(self.a.cmp(&o.a))
            .then(self.b.cmp(&o.b))
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "s1^{a}"),
            (0, b) => write!(f, "s2^{b}"),
            (a, b) => write!(f, "s1^{a}*s2^{b}"),
        }
    }
}
