//! Exact arithmetic over `Z[s1^±, s2^±]`, its fraction field, and `Q[γ]`.

use num_rational::BigRational;
use thiserror::Error;

pub type Q = BigRational;

macro_rules! forward_owned_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use forward_owned_ops;

mod det;
mod gamma;
mod laurent;
mod monomial;
mod poly;
mod rational;

pub use det::{bareiss_det, BareissRing};
pub use gamma::{gamma_limit, GammaPoly};
pub use laurent::{q_to_json, qint, ParamLaurent};
pub use monomial::ParamMonomial;
pub use poly::{BPoly, UPoly};
pub use rational::ParamRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("no exact quotient exists")]
    NotDivisible,
    #[error("coefficient is not an integer: {0}")]
    NonIntegral(String),
    #[error("gamma limit diverges: {0}")]
    LimitDiverges(String),
    #[error("division by zero")]
    ZeroDivisor,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u8) -> ParamLaurent {
        ParamLaurent::t(i)
    }

    fn qpq() -> ParamLaurent {
        ParamLaurent::p_of(ParamMonomial::Q)
    }

    #[test]
    fn divide_goldens() {
        assert_eq!((t(3) * t(2)).exact_divide(&t(3)).unwrap(), t(2));
        let b22 = -(t(1) * t(3) * qpq());
        assert_eq!(b22.exact_divide(&t(3)).unwrap(), -(t(1) * qpq()));
        let p = ParamLaurent::one() + ParamLaurent::monomial(ParamMonomial::S1);
        assert_eq!(p.exact_divide(&t(3)), Err(RingError::NotDivisible));
    }

    #[test]
    fn signed_monomial_goldens() {
        let sm = t(3).signed_monomials().unwrap();
        assert_eq!(sm, vec![(1, ParamMonomial::S3), (-1, ParamMonomial::S3.inv())]);
        let mut got = (t(3) * t(2)).signed_monomials().unwrap();
        got.sort();
        let mut want = vec![
            (1, ParamMonomial::new(-1, 0)),
            (-1, ParamMonomial::new(-1, -2)),
            (-1, ParamMonomial::new(1, 2)),
            (1, ParamMonomial::new(1, 0)),
        ];
        want.sort();
        assert_eq!(got, want);
        let b = -(t(1) * t(3) * qpq());
        let consts = b.signed_monomials().unwrap().into_iter().filter(|(_, m)| m.is_one()).collect::<Vec<_>>();
        assert_eq!(consts, vec![(-1, ParamMonomial::ONE), (-1, ParamMonomial::ONE)]);
        let half = ParamLaurent::constant(Q::new(1.into(), 2.into()));
        assert!(matches!(half.signed_monomials(), Err(RingError::NonIntegral(_))));
    }

    #[test]
    fn gamma_goldens() {
        assert_eq!(gamma_limit(&(t(3) * t(3))).unwrap(), GammaPoly::from_ints(&[-1]));
        assert_eq!(gamma_limit(&(t(3) * t(2))).unwrap(), GammaPoly::from_ints(&[1, -1]));
        let b = -(t(1) * t(3) * qpq());
        assert_eq!(gamma_limit(&b).unwrap(), GammaPoly::from_ints(&[0, -2]));
        assert!(gamma_limit(&t(3)).is_err());
        assert!(gamma_limit(&ParamLaurent::one()).is_err());
    }

    #[test]
    fn rational_canonical() {
        let a = ParamRational::new(t(3) * t(2), t(3) * t(1)).unwrap();
        let b = ParamRational::new(t(2), t(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.denom().least_term().unwrap().1, &Q::from_integer(1.into()));
        let c = ParamRational::new(ParamLaurent::monomial(ParamMonomial::S1), ParamLaurent::int(-3)).unwrap();
        assert_eq!(c.denom(), &ParamLaurent::one());
        assert_eq!(&(&a - &b), &ParamRational::zero());
        assert!(ParamRational::new(ParamLaurent::one(), ParamLaurent::zero()).is_err());
    }

    #[test]
    fn bareiss_small() {
        let m = vec![
            vec![GammaPoly::from_ints(&[-1]), GammaPoly::from_ints(&[1, -1])],
            vec![GammaPoly::from_ints(&[1, -1]), GammaPoly::from_ints(&[-1])],
        ];
        assert_eq!(bareiss_det(&m).unwrap(), GammaPoly::from_ints(&[0, 2, -1]));
    }
}
