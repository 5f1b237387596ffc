//! Float math shim for `no_std` builds.
//!
//! Under the default `std` feature the inherent `f64` methods are available
//! and this module compiles to nothing. Without `std`, the [`FloatMath`]
//! extension trait routes the same method names through `libm`, so call
//! sites write `x.sin()` either way.

#[cfg(not(feature = "std"))]
pub trait FloatMath {
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn sin_cos(self) -> (f64, f64);
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn sqrt(self) -> f64;
    fn abs(self) -> f64;
    fn floor(self) -> f64;
    fn round(self) -> f64;
    fn atan2(self, other: f64) -> f64;
    fn hypot(self, other: f64) -> f64;
    fn powf(self, exp: f64) -> f64;
    fn powi(self, exp: i32) -> f64;
}

#[cfg(not(feature = "std"))]
impl FloatMath for f64 {
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn sin_cos(self) -> (f64, f64) {
        libm::sincos(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
    fn powf(self, exp: f64) -> f64 {
        libm::pow(self, exp)
    }
    fn powi(self, exp: i32) -> f64 {
        libm::pow(self, exp as f64)
    }
}
