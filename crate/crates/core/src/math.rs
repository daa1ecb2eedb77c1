//! Float routines routed through `std` or `libm` depending on features.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    #[inline]
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[inline]
    pub fn sinh(x: f64) -> f64 {
        x.sinh()
    }
    #[inline]
    pub fn cosh(x: f64) -> f64 {
        x.cosh()
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn powi(x: f64, n: i32) -> f64 {
        x.powi(n)
    }
    #[inline]
    pub fn fract(x: f64) -> f64 {
        x.fract()
    }
    #[inline]
    pub fn hypot_n(xs: impl Iterator<Item = f64>) -> f64 {
        xs.map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    #[inline]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[inline]
    pub fn sinh(x: f64) -> f64 {
        libm::sinh(x)
    }
    #[inline]
    pub fn cosh(x: f64) -> f64 {
        libm::cosh(x)
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn powi(x: f64, n: i32) -> f64 {
        // binary exponentiation; matches std::powi semantics closely enough
        let mut base = if n < 0 { 1.0 / x } else { x };
        let mut e = n.unsigned_abs();
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    #[inline]
    pub fn fract(x: f64) -> f64 {
        x - libm::trunc(x)
    }
    #[inline]
    pub fn hypot_n(xs: impl Iterator<Item = f64>) -> f64 {
        sqrt(xs.map(|x| x * x).sum::<f64>())
    }
}

pub(crate) use imp::*;

/// Euclidean norm of a flat slice of tensor components.
#[inline]
pub(crate) fn norm(xs: &[f64]) -> f64 {
    hypot_n(xs.iter().copied())
}
