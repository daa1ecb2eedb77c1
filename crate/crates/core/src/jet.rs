//! Truncated Taylor jets in four variables, total degree three.
//!
//! A [`Jet3`] carries the value of a function together with every partial
//! derivative up to third order, stored as Taylor coefficients
//! `c_alpha = (d^alpha f) / alpha!` at the expansion point. Arithmetic and
//! the elementary functions propagate all 35 coefficients exactly, so the
//! third metric derivatives that feed `∇Ricci` come out at machine
//! precision with no truncation error.
//!
//! Coefficients live in a dense 35-slot array in graded lexicographic
//! order: degree 0, then the four degree-1 indices `(1,0,0,0)...(0,0,0,1)`,
//! and so on. Degree is fixed at 3; there is no configuration knob.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

/// Number of independent variables.
pub const NUM_VARS: usize = 4;
/// Truncation degree.
pub const DEGREE: usize = 3;
/// Number of multi-indices with `|alpha| <= 3` in four variables.
pub const NUM_COEFFS: usize = 35;

/// Exponent tuple `(a0, a1, a2, a3)` with `a0 + a1 + a2 + a3 <= 3`.
pub type MultiIndex = [u8; NUM_VARS];

const fn build_multi_indices() -> [MultiIndex; NUM_COEFFS] {
    let mut out = [[0u8; NUM_VARS]; NUM_COEFFS];
    let mut slot = 0;
    let mut d = 0;
    while d <= DEGREE {
        let mut a = d;
        loop {
            let mut b = d - a;
            loop {
                let mut c = d - a - b;
                loop {
                    out[slot] = [a as u8, b as u8, c as u8, (d - a - b - c) as u8];
                    slot += 1;
                    if c == 0 {
                        break;
                    }
                    c -= 1;
                }
                if b == 0 {
                    break;
                }
                b -= 1;
            }
            if a == 0 {
                break;
            }
            a -= 1;
        }
        d += 1;
    }
    out
}

/// All multi-indices in storage order (graded lexicographic).
pub const MULTI_INDEX: [MultiIndex; NUM_COEFFS] = build_multi_indices();

const fn pack(alpha: MultiIndex) -> usize {
    alpha[0] as usize | (alpha[1] as usize) << 2 | (alpha[2] as usize) << 4 | (alpha[3] as usize) << 6
}

const INVALID: u8 = 0xFF;

const fn build_slot_table() -> [u8; 256] {
    let mut t = [INVALID; 256];
    let mut s = 0;
    while s < NUM_COEFFS {
        t[pack(MULTI_INDEX[s])] = s as u8;
        s += 1;
    }
    t
}

const SLOT: [u8; 256] = build_slot_table();

const fn degree_of(alpha: MultiIndex) -> usize {
    (alpha[0] + alpha[1] + alpha[2] + alpha[3]) as usize
}

const fn build_degree_table() -> [u8; NUM_COEFFS] {
    let mut t = [0u8; NUM_COEFFS];
    let mut s = 0;
    while s < NUM_COEFFS {
        t[s] = degree_of(MULTI_INDEX[s]) as u8;
        s += 1;
    }
    t
}

const SLOT_DEGREE: [u8; NUM_COEFFS] = build_degree_table();

// PROD[i][j] = slot of MULTI_INDEX[i] + MULTI_INDEX[j], or -1 past degree 3.
const fn build_prod_table() -> [[i8; NUM_COEFFS]; NUM_COEFFS] {
    let mut t = [[-1i8; NUM_COEFFS]; NUM_COEFFS];
    let mut i = 0;
    while i < NUM_COEFFS {
        let mut j = 0;
        while j < NUM_COEFFS {
            let a = MULTI_INDEX[i];
            let b = MULTI_INDEX[j];
            let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
            if degree_of(sum) <= DEGREE {
                t[i][j] = SLOT[pack(sum)] as i8;
            }
            j += 1;
        }
        i += 1;
    }
    t
}

const PROD: [[i8; NUM_COEFFS]; NUM_COEFFS] = build_prod_table();

/// Storage slot of a multi-index, if it is within degree 3.
pub fn slot_of(alpha: MultiIndex) -> Option<usize> {
    if alpha.iter().any(|&a| a > DEGREE as u8) {
        return None;
    }
    match SLOT[pack(alpha)] {
        INVALID => None,
        s => Some(s as usize),
    }
}

/// `alpha!` for exponents bounded by the truncation degree.
fn alpha_factorial(alpha: MultiIndex) -> f64 {
    const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
    alpha.iter().map(|&a| FACT[a as usize]).product()
}

/// Error from jet arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetError {
    /// Division (or negative integer power) of a jet whose value part is zero.
    DivisionByZero,
    /// `ln` or `sqrt` of a jet with non-positive value part.
    Domain { func: &'static str },
}

impl fmt::Display for JetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetError::DivisionByZero => write!(f, "division by a jet with zero value part"),
            JetError::Domain { func } => {
                write!(f, "{func} of a jet with non-positive value part")
            }
        }
    }
}

impl core::error::Error for JetError {}

/// Threshold below which a divisor's value part counts as zero.
const DIV_EPS: f64 = 1e-300;

/// Degree-3 truncated Taylor expansion of a function of four variables.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet3 {
    /// Taylor coefficients `c_alpha = (d^alpha f)/alpha!` in [`MULTI_INDEX`] order.
    pub coeffs: [f64; NUM_COEFFS],
}

impl fmt::Debug for Jet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet3[{}", self.coeffs[0])?;
        for s in 1..NUM_COEFFS {
            if self.coeffs[s] != 0.0 {
                let m = MULTI_INDEX[s];
                write!(
                    f,
                    " + {}*h^({},{},{},{})",
                    self.coeffs[s], m[0], m[1], m[2], m[3]
                )?;
            }
        }
        write!(f, "]")
    }
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 {
        coeffs: [0.0; NUM_COEFFS],
    };

    /// Jet of a constant: value coefficient `v`, everything else zero.
    pub fn constant(v: f64) -> Self {
        let mut coeffs = [0.0; NUM_COEFFS];
        coeffs[0] = v;
        Jet3 { coeffs }
    }

    /// Jet of the coordinate function `x_index` seeded at `value`.
    ///
    /// Panics if `index >= 4`.
    pub fn variable(index: usize, value: f64) -> Self {
        assert!(index < NUM_VARS, "jet variable index {index} out of range");
        let mut coeffs = [0.0; NUM_COEFFS];
        coeffs[0] = value;
        coeffs[1 + index] = 1.0;
        Jet3 { coeffs }
    }

    /// Value of the function at the expansion point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient for a multi-index.
    ///
    /// Panics if `|alpha| > 3`.
    pub fn coeff(&self, alpha: MultiIndex) -> f64 {
        let s = slot_of(alpha).expect("multi-index beyond degree 3");
        self.coeffs[s]
    }

    /// True partial derivative `d^alpha f`, i.e. `c_alpha * alpha!`.
    ///
    /// Panics if `|alpha| > 3` (derivative order overflow).
    pub fn partial(&self, alpha: MultiIndex) -> f64 {
        self.coeff(alpha) * alpha_factorial(alpha)
    }

    /// Jet of `df/dx_var`.
    ///
    /// The result's degree-3 coefficients would need fourth derivatives of
    /// `f`, which are not carried; they are set to zero, so the returned jet
    /// is trustworthy through degree 2 only.
    pub fn derivative(&self, var: usize) -> Jet3 {
        assert!(var < NUM_VARS, "jet variable index {var} out of range");
        let mut out = [0.0; NUM_COEFFS];
        for (s, m) in MULTI_INDEX.iter().enumerate() {
            if SLOT_DEGREE[s] as usize == DEGREE {
                continue;
            }
            let mut src = *m;
            src[var] += 1;
            let src_slot = slot_of(src).expect("within degree by construction");
            out[s] = (src[var] as f64) * self.coeffs[src_slot];
        }
        Jet3 { coeffs: out }
    }

    /// Reciprocal `1/self`.
    pub fn recip(&self) -> Result<Jet3, JetError> {
        let v = self.coeffs[0];
        if v.abs() < DIV_EPS {
            return Err(JetError::DivisionByZero);
        }
        // 1/(v + h) = (1 - u + u^2 - u^3)/v with u = h/v, h nilpotent.
        let iv = 1.0 / v;
        Ok(self.compose([iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv]))
    }

    /// Checked division; [`JetError::DivisionByZero`] when the divisor's
    /// value part is (numerically) zero.
    pub fn try_div(&self, rhs: &Jet3) -> Result<Jet3, JetError> {
        Ok(*self * rhs.recip()?)
    }

    /// Truncated composition with a univariate function given by its
    /// derivatives `[f(v), f'(v), f''(v), f'''(v)]` at `v = self.value()`.
    fn compose(&self, derivs: [f64; 4]) -> Jet3 {
        let mut h = *self;
        h.coeffs[0] = 0.0;
        let k = [derivs[0], derivs[1], derivs[2] / 2.0, derivs[3] / 6.0];
        // Horner: ((k3*h + k2)*h + k1)*h + k0
        let mut acc = Jet3::constant(k[3]);
        for &c in [k[2], k[1], k[0]].iter() {
            acc = acc * h + Jet3::constant(c);
        }
        acc
    }

    pub fn exp(&self) -> Jet3 {
        let e = math::exp(self.coeffs[0]);
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Result<Jet3, JetError> {
        let v = self.coeffs[0];
        if v <= 0.0 {
            return Err(JetError::Domain { func: "ln" });
        }
        let iv = 1.0 / v;
        Ok(self.compose([math::ln(v), iv, -iv * iv, 2.0 * iv * iv * iv]))
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = (math::sin(self.coeffs[0]), math::cos(self.coeffs[0]));
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = (math::sin(self.coeffs[0]), math::cos(self.coeffs[0]));
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Jet3 {
        let (s, c) = (math::sinh(self.coeffs[0]), math::cosh(self.coeffs[0]));
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet3 {
        let (s, c) = (math::sinh(self.coeffs[0]), math::cosh(self.coeffs[0]));
        self.compose([c, s, c, s])
    }

    pub fn sqrt(&self) -> Result<Jet3, JetError> {
        let v = self.coeffs[0];
        if v <= 0.0 {
            return Err(JetError::Domain { func: "sqrt" });
        }
        let r = math::sqrt(v);
        Ok(self.compose([
            r,
            0.5 / r,
            -0.25 / (r * v),
            0.375 / (r * v * v),
        ]))
    }

    /// Integer power by repeated multiplication (exact in the jet algebra).
    ///
    /// Negative exponents go through [`Jet3::recip`] and can fail on a zero
    /// value part.
    pub fn powi(&self, n: i32) -> Result<Jet3, JetError> {
        let mut base = *self;
        let mut e = n.unsigned_abs();
        let mut acc = Jet3::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Largest absolute coefficient; handy for residual checks.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut out = self.coeffs;
        for (o, r) in out.iter_mut().zip(rhs.coeffs.iter()) {
            *o += r;
        }
        Jet3 { coeffs: out }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        let mut out = self.coeffs;
        for (o, r) in out.iter_mut().zip(rhs.coeffs.iter()) {
            *o -= r;
        }
        Jet3 { coeffs: out }
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        let mut out = self.coeffs;
        for o in out.iter_mut() {
            *o = -*o;
        }
        Jet3 { coeffs: out }
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    /// Cauchy product truncated at total degree 3.
    fn mul(self, rhs: Jet3) -> Jet3 {
        let mut out = [0.0; NUM_COEFFS];
        for i in 0..NUM_COEFFS {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let row = &PROD[i];
            for j in 0..NUM_COEFFS {
                let t = row[j];
                if t >= 0 {
                    out[t as usize] += a * rhs.coeffs[j];
                }
            }
        }
        Jet3 { coeffs: out }
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Jet3 {
        let mut out = self.coeffs;
        for o in out.iter_mut() {
            *o *= rhs;
        }
        Jet3 { coeffs: out }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    /// Panicking division; use [`Jet3::try_div`] when the divisor is not
    /// known to have a nonzero value part.
    fn div(self, rhs: Jet3) -> Jet3 {
        self.try_div(&rhs).expect("jet division by zero value part")
    }
}
