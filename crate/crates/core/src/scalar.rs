//! Scalar abstractions.
//!
//! Exact formula probes (breakpoints of the exponent function, the
//! zero-free-width ratio) run over [`Field`], which includes rationals.
//! Everything that needs `exp`/`ln` runs over [`Real`] (`f32`, `f64`).

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field in which small rational constants can be written down
/// exactly (or as exactly as the representation allows).
pub trait Field: Num + Clone + PartialOrd + Debug + Signed {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

impl Field for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Field for Ratio<BigInt> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Field
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("integer representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(2πi · num/den)`, recomputed from the reduced rational each time.
pub fn unit_root<T: Real>(num: u64, den: u64) -> Complex<T> {
    debug_assert!(den > 0);
    let r = num % den;
    if (4 * r as u128) % den as u128 == 0 {
        let (zero, one) = (T::zero(), T::one());
        return match (4 * r as u128) / den as u128 {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        };
    }
    // Fold into (-1/2, 1/2] so the angle stays small.
    let signed = if 2 * r > den { r as i128 - den as i128 } else { r as i128 };
    let angle = T::TAU() * T::lit(signed as f64) / T::lit(den as f64);
    let (s, c) = angle.sin_cos();
    Complex::new(c, s)
}

/// Kahan–Babuška (Neumaier) compensated accumulator over complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<T> {
    re: T,
    im: T,
    c_re: T,
    c_im: T,
}

#[inline]
fn neumaier<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        neumaier(&mut self.re, &mut self.c_re, z.re);
        neumaier(&mut self.im, &mut self.c_im, z.im);
    }

    #[inline]
    pub fn add_real(&mut self, x: T) {
        neumaier(&mut self.re, &mut self.c_re, x);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re + self.c_re, self.im + self.c_im)
    }
}
