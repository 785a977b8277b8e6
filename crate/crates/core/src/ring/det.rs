use super::gamma::GammaPoly;
use super::laurent::ParamLaurent;
use super::rational::ParamRational;
use super::RingError;

/// The operations fraction-free elimination needs.
pub trait BareissRing: Clone {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_is_zero(&self) -> bool;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    fn r_div_exact(&self, o: &Self) -> Result<Self, RingError>;
}

macro_rules! bareiss_impl {
    ($t:ty, $div:expr) => {
        impl BareissRing for $t {
            fn r_zero() -> Self {
                <$t>::zero()
            }
            fn r_one() -> Self {
                <$t>::one()
            }
            fn r_is_zero(&self) -> bool {
                self.is_zero()
            }
            fn r_mul(&self, o: &Self) -> Self {
                self * o
            }
            fn r_sub(&self, o: &Self) -> Self {
                self - o
            }
            fn r_neg(&self) -> Self {
                -self
            }
            fn r_div_exact(&self, o: &Self) -> Result<Self, RingError> {
                $div(self, o)
            }
        }
    };
}

bareiss_impl!(ParamLaurent, |a: &ParamLaurent, b: &ParamLaurent| a.exact_divide(b));
bareiss_impl!(GammaPoly, |a: &GammaPoly, b: &GammaPoly| a.exact_div(b));
bareiss_impl!(ParamRational, |a: &ParamRational, b: &ParamRational| a.checked_div(b));

/// Determinant by Bareiss elimination with row pivoting.
pub fn bareiss_det<R: BareissRing>(m: &[Vec<R>]) -> Result<R, RingError> {
    let n = m.len();
    if n == 0 {
        return Ok(R::r_one());
    }
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut prev = R::r_one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].r_is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].r_is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(R::r_zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].r_mul(&a[k][k]).r_sub(&a[i][k].r_mul(&a[k][j]));
                a[i][j] = v.r_div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.r_neg() } else { d })
}
