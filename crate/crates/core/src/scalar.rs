//! Exact Gaussian rationals `re + im·i`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};

/// An exact element of ℚ(i).
///
/// Both parts are kept in lowest terms with a positive denominator by
/// `BigRational`; all arithmetic is exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn imag(im: BigRational) -> Self {
        Scalar::new(BigRational::zero(), im)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiply by a small integer without building a full scalar.
    pub fn scale_int(&self, k: i64) -> Scalar {
        let k = BigInt::from(k);
        Scalar::new(&self.re * &k, &self.im * &k)
    }

    pub fn mul_i(&self) -> Scalar {
        Scalar::new(-self.im.clone(), self.re.clone())
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::real(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        if self.im.is_zero() {
            return Scalar::new(&self.re * &o.re, &self.re * &o.im);
        }
        if o.im.is_zero() {
            return Scalar::new(&self.re * &o.re, &self.im * &o.re);
        }
        Scalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like integer division.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        &self / &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

impl<'a> MulAssign<&'a Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `a`, `b*i`, or `a + b*i` / `a - b*i`; parseable by
/// [`crate::parse`].
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "*i")
                }
            }
            (false, false) => {
                fmt_rational(&self.re, f)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    let a = -self.im.clone();
                    if a.is_one() {
                        write!(f, "i")
                    } else {
                        fmt_rational(&a, f)?;
                        write!(f, "*i")
                    }
                } else {
                    write!(f, " + ")?;
                    if self.im.is_one() {
                        write!(f, "i")
                    } else {
                        fmt_rational(&self.im, f)?;
                        write!(f, "*i")
                    }
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `k!` as a scalar.
pub fn factorial(k: u32) -> Scalar {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= j;
    }
    Scalar::real(BigRational::from_integer(acc))
}

/// Falling factorial `b (b-1) ... (b-p+1)` as an integer.
pub fn falling(b: u32, p: u32) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..p {
        acc *= (b - j) as i64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer(3.into()));
        let b = Scalar::from_frac(-2, 3);
        let c = &(&a * &b) / &b;
        assert_eq!(c, a);
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_none());
        assert_eq!(Scalar::from_frac(4, 8), Scalar::from_frac(1, 2));
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::from_frac(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::imag(BigRational::new((-1).into(), 2.into())).to_string(), "-1/2*i");
        assert_eq!((Scalar::from_int(1) - Scalar::i()).to_string(), "1 - i");
    }
}
