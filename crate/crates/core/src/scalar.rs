//! Scalar abstractions shared by the exact and the floating-point layers.
//!
//! Exact algebra (jets, resultants, Clifford relations) runs over [`Field`]s
//! such as `BigRational` or Gaussian rationals; spectral field code runs over
//! [`Real`] floats.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// A commutative ring element that can produce its own zero and one.
///
/// Jets carry their variable count and truncation order, so `Zero::zero()`
/// cannot be used for them; this trait takes a template element instead.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_null(&self) -> bool;

    /// Whether two elements live in the same ring (same jet shape, etc.).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

impl<T> Ring for T
where
    T: Num + Clone + Debug + Neg<Output = T>,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }

    fn one_like(&self) -> Self {
        T::one()
    }

    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

/// Coefficient fields: rationals, Gaussian rationals, floats.
pub trait Field: Ring + Num + FromPrimitive + Send + Sync + 'static {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer not representable in field")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl<T> Field for T where T: Ring + Num + FromPrimitive + Send + Sync + 'static {}

/// Ordered fields that embed into the rationals (exactly, or via the exact
/// value of a float).
pub trait RealScalar: Field + PartialOrd + Signed + ToPrimitive {
    fn to_rational(&self) -> Option<BigRational>;
    fn from_rational(q: &BigRational) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl RealScalar for BigRational {
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
}

macro_rules! impl_real_scalar_float {
    ($f:ty) => {
        impl RealScalar for $f {
            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }

            fn from_rational(q: &BigRational) -> Self {
                rational_to_f64(q) as $f
            }
        }
    };
}

impl_real_scalar_float!(f32);
impl_real_scalar_float!(f64);

/// Floating-point scalars for sampled fields and FFTs.
pub trait Real: RealScalar + Float + FloatConst + rustfft::FftNum {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("float literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Nearest-double conversion that survives huge numerators/denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (q.numer(), q.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        BigRational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn gaussian_rationals_are_a_field() {
        let a = Complex::new(rat(1, 2), rat(-3, 1));
        let inv = Complex::<BigRational>::from_int(1) / a.clone();
        assert_eq!(a * inv, Complex::from_int(1));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert!((rational_to_f64(&big) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn floats_embed_exactly() {
        let q = 0.1f64.to_rational().unwrap();
        assert_eq!(f64::from_rational(&q), 0.1);
    }
}
