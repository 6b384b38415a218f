//! Float math that works under `no_std`.
//!
//! With the `std` feature (default) the inherent `f64` methods are used and
//! this module is a no-op. Without it, an extension trait routes the same
//! method names to `libm`, so call sites stay identical either way.

#![allow(dead_code)]

#[cfg(not(feature = "std"))]
pub(crate) trait F64Ext {
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn tan(self) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn log10(self) -> f64;
    fn sqrt(self) -> f64;
    fn cbrt(self) -> f64;
    fn powf(self, e: f64) -> f64;
    fn powi(self, e: i32) -> f64;
    fn abs(self) -> f64;
    fn floor(self) -> f64;
    fn ceil(self) -> f64;
    fn round(self) -> f64;
    fn hypot(self, other: f64) -> f64;
    fn atan2(self, other: f64) -> f64;
    fn tanh(self) -> f64;
}

#[cfg(not(feature = "std"))]
impl F64Ext for f64 {
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn tan(self) -> f64 {
        libm::tan(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn log10(self) -> f64 {
        libm::log10(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn cbrt(self) -> f64 {
        libm::cbrt(self)
    }
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    fn powi(self, e: i32) -> f64 {
        libm::pow(self, e as f64)
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn ceil(self) -> f64 {
        libm::ceil(self)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    fn tanh(self) -> f64 {
        libm::tanh(self)
    }
}
