//! Exact arithmetic in the quadratic field Q(√2).
//!
//! Probabilities in the Schröder samplers live in Q(√2) (the step
//! distribution uses r = √2 − 1), while everything Motzkin-side is rational.
//! [`Exact`] represents `a + b·√2` with arbitrary-precision rational `a`, `b`
//! and supports field arithmetic, exact sign/comparison, binary-digit
//! extraction for values in [0, 1), and a robust natural logarithm used by
//! the success-probability formulas.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact real of the form `a + b·√2` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact {
    a: BigRational,
    b: BigRational,
}

impl Exact {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Exact { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Exact { a, b: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Exact::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The rational `p/q`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Exact::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Exact::from_int(0)
    }

    pub fn one() -> Self {
        Exact::from_int(1)
    }

    pub fn sqrt2() -> Self {
        Exact { a: BigRational::zero(), b: BigRational::one() }
    }

    /// `r = √2 − 1`, the positive root of `2r + r² = 1`.
    pub fn sqrt2_minus_one() -> Self {
        Exact { a: -BigRational::one(), b: BigRational::one() }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign: −1, 0 or +1.
    ///
    /// For mixed-sign coefficients the sign of `a + b√2` is decided by
    /// comparing `a²` against `2b²`, which is exact.
    pub fn signum(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // a and b have opposite signs; |a| vs |b|√2 ⇔ a² vs 2b².
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(2));
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Exact {
        assert!(!self.is_zero(), "division by zero");
        // 1/(a+b√2) = (a−b√2)/(a²−2b²)
        let denom = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(2));
        assert!(!denom.is_zero());
        Exact { a: &self.a / &denom, b: -(&self.b / &denom) }
    }

    pub fn pow(&self, mut e: u32) -> Exact {
        let mut base = self.clone();
        let mut acc = Exact::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Approximate double value. Accurate when the coefficients are of
    /// moderate size; for nearly-cancelling huge coefficients use [`Exact::ln`].
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    /// Natural log of a positive value, robust against catastrophic
    /// cancellation between the rational and √2 parts (e.g. `r^n` for large
    /// `n`, whose coefficients are astronomically larger than the value).
    pub fn ln(&self) -> f64 {
        assert!(self.is_positive(), "ln of non-positive value");
        if self.b.is_zero() {
            return ln_ratio(&self.a);
        }
        if self.a.is_zero() {
            return ln_ratio(&self.b) + 0.5 * std::f64::consts::LN_2;
        }
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sa == sb {
            // Same-sign parts: |a| + |b|√2, no cancellation.
            ln_abs_sum(&self.a, &self.b)
        } else {
            // x = (a² − 2b²) / (a − b√2); the conjugate has same-sign parts.
            let num = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(2));
            ln_ratio(&num.abs()) - ln_abs_sum(&self.a, &(-self.b.clone()))
        }
    }

    /// Compact display form used in JSON reports: `"p/q"` or `"p/q+s/t*sqrt2"`.
    pub fn display_string(&self) -> String {
        if self.b.is_zero() {
            format!("{}", self.a)
        } else if self.a.is_zero() {
            format!("{}*sqrt2", self.b)
        } else if self.b.is_negative() {
            format!("{}{}*sqrt2", self.a, self.b)
        } else {
            format!("{}+{}*sqrt2", self.a, self.b)
        }
    }
}

fn rational_sign(x: &BigRational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// ln(|a| + |b|√2) for same-sign (or zero) a, b, scaled to avoid overflow.
fn ln_abs_sum(a: &BigRational, b: &BigRational) -> f64 {
    let aa = a.abs();
    let bb = b.abs();
    let bits = |x: &BigRational| x.numer().bits().max(1) as i64 - x.denom().bits() as i64;
    let scale = bits(&aa).max(bits(&bb));
    let av = shifted_to_f64(&aa, -scale);
    let bv = shifted_to_f64(&bb, -scale);
    (av + bv * std::f64::consts::SQRT_2).ln() + scale as f64 * std::f64::consts::LN_2
}

/// x · 2^shift as f64, where x may be astronomically large or tiny.
fn shifted_to_f64(x: &BigRational, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (m, e) = mantissa_exp(x);
    m * exp2_i64(e + shift)
}

fn exp2_i64(e: i64) -> f64 {
    // Split so each factor stays in f64 range for |e| < 2000-ish.
    if e.abs() <= 1000 {
        (e as f64).exp2()
    } else if e > 0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Decompose |x| = m · 2^e with m ∈ [0.5, 2) roughly.
fn mantissa_exp(x: &BigRational) -> (f64, i64) {
    let n = x.numer().abs();
    let d = x.denom().clone();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let take = |v: &BigInt, bits_v: i64| -> f64 {
        let keep = 63i64;
        if bits_v <= keep {
            v.to_f64().unwrap()
        } else {
            (v >> (bits_v - keep) as u64).to_f64().unwrap()
        }
    };
    let keep = 63i64;
    let ne = (nb - keep).max(0);
    let de = (db - keep).max(0);
    let m = take(&n, nb) / take(&d, db);
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    (sign * m, ne - de)
}

/// ln of a positive rational of arbitrary magnitude.
pub fn ln_ratio(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    let (m, e) = mantissa_exp(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// f64 value of a rational of arbitrary magnitude (no Inf/Inf pitfalls).
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    shifted_to_f64(&x.abs(), 0) * if x.is_negative() { -1.0 } else { 1.0 }
}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        match d.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, |$x:ident, $y:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b Exact> for &'a Exact {
            type Output = Exact;
            fn $method(self, rhs: &'b Exact) -> Exact {
                let $x = self;
                let $y = rhs;
                $body
            }
        }
        impl $trait<Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: &'a Exact) -> Exact {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Exact> for &'a Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, |x, y| Exact { a: &x.a + &y.a, b: &x.b + &y.b });
impl_binop!(Sub, sub, |x, y| Exact { a: &x.a - &y.a, b: &x.b - &y.b });
impl_binop!(Mul, mul, |x, y| {
    let two = BigRational::from_integer(BigInt::from(2));
    Exact {
        a: &x.a * &y.a + (&x.b * &y.b) * &two,
        b: &x.a * &y.b + &x.b * &y.a,
    }
});
impl_binop!(Div, div, |x, y| {
    #[allow(clippy::suspicious_arithmetic_impl)]
    let q = x * &y.recip();
    q
});

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { a: -self.a, b: -self.b }
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_string())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_string())
    }
}

/// Streams the binary digits of a value in [0, 1).
///
/// Yields `None` once the remainder becomes exactly zero (all further digits
/// are 0); this lets Bernoulli sampling terminate on dyadic biases.
pub struct DigitStream {
    frac: Exact,
}

impl DigitStream {
    pub fn new(x: Exact) -> Self {
        debug_assert!(x.signum() >= 0 && (&x - &Exact::one()).signum() < 0);
        DigitStream { frac: x }
    }
}

impl Iterator for DigitStream {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.frac.is_zero() {
            return None;
        }
        let doubled = &self.frac + &self.frac;
        if (&doubled - &Exact::one()).signum() >= 0 {
            self.frac = doubled - Exact::one();
            Some(true)
        } else {
            self.frac = doubled;
            Some(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Exact {
        Exact::sqrt2_minus_one()
    }

    #[test]
    fn r_satisfies_defining_identity() {
        // 2r + r² = 1
        let lhs = Exact::from_int(2) * r() + r() * r();
        assert_eq!(lhs, Exact::one());
        // r + r² = 2 − √2
        let rhs = Exact::from_int(2) - Exact::sqrt2();
        assert_eq!(r() + r() * r(), rhs);
    }

    #[test]
    fn field_ops_are_exact() {
        let x = Exact::new(BigRational::new(3.into(), 7.into()), BigRational::new((-2).into(), 5.into()));
        let y = Exact::new(BigRational::new(1.into(), 3.into()), BigRational::new(4.into(), 9.into()));
        let q = &x / &y;
        assert_eq!(q * y, x);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn sign_of_mixed_coefficients() {
        assert_eq!(r().signum(), 1);
        assert_eq!((-r()).signum(), -1);
        // 17/12 − √2 > 0 (17/12 ≈ 1.41667 > 1.41421)
        let x = Exact::new(BigRational::new(17.into(), 12.into()), BigRational::from_integer((-1).into()));
        assert_eq!(x.signum(), 1);
        // 7/5 − √2 < 0
        let y = Exact::new(BigRational::new(7.into(), 5.into()), BigRational::from_integer((-1).into()));
        assert_eq!(y.signum(), -1);
    }

    #[test]
    fn ordering_matches_values() {
        let half = Exact::ratio(1, 2);
        assert!(r() < half);
        assert!(r() * r() < r());
        assert!(Exact::sqrt2() > Exact::one());
    }

    #[test]
    fn digits_of_r() {
        // r ≈ 0.41421356 = 0.0110101000001…₂
        let got: Vec<bool> = DigitStream::new(r()).take(12).collect();
        let expect = [false, true, true, false, true, false, true, false, false, false, false, false];
        assert_eq!(got, expect);
    }

    #[test]
    fn digits_of_dyadic_terminate() {
        let got: Vec<bool> = DigitStream::new(Exact::ratio(5, 8)).collect();
        assert_eq!(got, vec![true, false, true]);
    }

    #[test]
    fn ln_handles_cancellation() {
        // r^200 has ~160-bit coefficients that cancel to ~2^-254.
        let x = r().pow(200);
        let expect = 200.0 * (std::f64::consts::SQRT_2 - 1.0).ln();
        assert!((x.ln() - expect).abs() < 1e-9, "{} vs {}", x.ln(), expect);
    }

    #[test]
    fn ln_of_huge_rational() {
        let mut v = BigRational::one();
        for i in 1..400u64 {
            v *= BigRational::from_integer(BigInt::from(2 * i));
        }
        let expect: f64 = (1..400u64).map(|i| ((2 * i) as f64).ln()).sum();
        assert!((ln_ratio(&v) - expect).abs() < 1e-8);
    }

    #[test]
    fn to_f64_small_values() {
        assert!((r().to_f64() - 0.41421356237).abs() < 1e-10);
        assert!((Exact::ratio(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
