//! Arbitrary-precision real and complex scalars.
//!
//! Precision is never ambient: every operation goes through a [`Ctx`] that
//! owns the target precision and the rounding mode. Two contexts at different
//! precisions can coexist (the Gram-Schmidt verifier runs the same build at
//! `p` and `2p`), so nothing here touches global state.

use alloc::string::String;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt::Write as _;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

/// Arbitrary-precision real number.
pub type Real = BigFloat;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arithmetic context: working precision in bits plus a constants cache.
pub struct Ctx {
    p: usize,
    cc: RefCell<Consts>,
}

impl Ctx {
    /// Creates a context with working precision `p` bits. Minimum 64.
    pub fn new(p: usize) -> Self {
        assert!(p >= 64, "working precision below 64 bits");
        Ctx {
            p,
            cc: RefCell::new(Consts::new().expect("constants cache allocation")),
        }
    }

    pub fn prec(&self) -> usize {
        self.p
    }

    /// Fresh context at a different precision (own constants cache).
    pub fn with_prec(&self, p: usize) -> Ctx {
        Ctx::new(p)
    }

    pub fn zero(&self) -> Real {
        BigFloat::new(self.p)
    }

    pub fn one(&self) -> Real {
        BigFloat::from_word(1, self.p)
    }

    pub fn from_u64(&self, v: u64) -> Real {
        BigFloat::from_u64(v, self.p)
    }

    pub fn from_i64(&self, v: i64) -> Real {
        BigFloat::from_i64(v, self.p)
    }

    pub fn from_f64(&self, v: f64) -> Real {
        BigFloat::from_f64(v, self.p)
    }

    /// Exact power of two, `2^k`.
    pub fn pow2(&self, k: i32) -> Real {
        let mut r = self.one();
        r.set_exponent(k + 1);
        r
    }

    pub fn pi(&self) -> Real {
        self.cc.borrow_mut().pi(self.p, RM)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.p, RM)
    }

    pub fn recip(&self, a: &Real) -> Real {
        a.reciprocal(self.p, RM)
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.p, RM)
    }

    /// `a^(1/4)` for `a >= 0`.
    pub fn fourth_root(&self, a: &Real) -> Real {
        a.sqrt(self.p, RM).sqrt(self.p, RM)
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        a.powi(n, self.p, RM)
    }

    /// `sqrt(a^2 + b^2)`, no scaling needed at this exponent range.
    pub fn hypot(&self, a: &Real, b: &Real) -> Real {
        let s = self.add(&self.mul(a, a), &self.mul(b, b));
        self.sqrt(&s)
    }

    /// Total-order comparison. Panics if either side is NaN: comparisons in
    /// this crate are only made between values already checked finite.
    pub fn cmp(&self, a: &Real, b: &Real) -> Ordering {
        match a.cmp(b) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("comparison with NaN"),
        }
    }

    pub fn lt(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    pub fn le(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    /// Parses a decimal literal. Returns NaN on malformed input.
    pub fn parse(&self, s: &str) -> Real {
        BigFloat::parse(s, Radix::Dec, self.p, RM, &mut self.cc.borrow_mut())
    }

    /// Renders `x` in scientific notation with the full digit count of the
    /// context precision plus a pad, so the string round-trips at `p` bits.
    /// Deterministic: same value and context always yield the same string.
    pub fn to_decimal(&self, x: &Real) -> String {
        if x.is_nan() {
            return String::from("NaN");
        }
        if x.is_inf() {
            return String::from(if x.is_inf_neg() { "-Inf" } else { "Inf" });
        }
        if x.is_zero() {
            return String::from("0");
        }
        let mut y = x.clone();
        y.set_precision(self.p + 64, RM)
            .expect("precision widening failed");
        let (sign, digits, e) = y
            .convert_to_radix(Radix::Dec, RM, &mut self.cc.borrow_mut())
            .expect("decimal conversion failed");
        let mut out = String::with_capacity(digits.len() + 12);
        if sign == Sign::Neg {
            out.push('-');
        }
        let mut it = digits.iter();
        let lead = it.next().copied().unwrap_or(0);
        out.push((b'0' + lead) as char);
        out.push('.');
        if digits.len() == 1 {
            out.push('0');
        } else {
            for &d in it {
                out.push((b'0' + d) as char);
            }
        }
        let dec_exp = e as i64 - 1;
        if dec_exp < 0 {
            let _ = write!(out, "e-{}", -dec_exp);
        } else {
            let _ = write!(out, "e+{dec_exp}");
        }
        out
    }

    /// Lossy conversion for coarse diagnostics (trend checks, reports).
    pub fn approx_f64(&self, x: &Real) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_inf() {
            return if x.is_inf_neg() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if x.is_zero() {
            return 0.0;
        }
        let s = self.to_decimal(x);
        let (mant, exp) = match s.split_once('e') {
            Some((m, e)) => (m, e),
            None => (s.as_str(), "+0"),
        };
        let mut short = String::with_capacity(32);
        short.push_str(&mant[..mant.len().min(25)]);
        short.push('e');
        short.push_str(exp);
        short.parse::<f64>().unwrap_or(f64::NAN)
    }

    // Complex helpers. Plain component formulas throughout: the binary
    // exponent range makes premature overflow a non-issue.

    pub fn czero(&self) -> Complex {
        Complex {
            re: self.zero(),
            im: self.zero(),
        }
    }

    pub fn creal(&self, re: &Real) -> Complex {
        Complex {
            re: re.clone(),
            im: self.zero(),
        }
    }

    pub fn cadd(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn csub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.sub(&a.re, &b.re),
            im: self.sub(&a.im, &b.im),
        }
    }

    pub fn cmul(&self, a: &Complex, b: &Complex) -> Complex {
        let re = self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re));
        Complex { re, im }
    }

    pub fn cdiv(&self, a: &Complex, b: &Complex) -> Complex {
        let den = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        Complex {
            re: self.div(&re, &den),
            im: self.div(&im, &den),
        }
    }

    pub fn cabs(&self, a: &Complex) -> Real {
        self.hypot(&a.re, &a.im)
    }

    /// Principal square root. Real negative inputs resolve to the upper side
    /// of the cut (`sqrt(-1) = i`).
    pub fn csqrt(&self, a: &Complex) -> Complex {
        if a.im.is_zero() {
            return if a.re.is_negative() {
                Complex {
                    re: self.zero(),
                    im: self.sqrt(&a.re.neg()),
                }
            } else {
                Complex {
                    re: self.sqrt(&a.re),
                    im: self.zero(),
                }
            };
        }
        let r = self.cabs(a);
        let two = self.from_u64(2);
        // t = sqrt((r + |re|)/2) keeps the subtraction-free branch.
        let t = self.sqrt(&self.div(&self.add(&r, &a.re.abs()), &two));
        let q = self.div(&a.im.abs(), &self.mul(&two, &t));
        if !a.re.is_negative() {
            Complex {
                re: t,
                im: if a.im.is_negative() { q.neg() } else { q },
            }
        } else {
            Complex {
                re: q,
                im: if a.im.is_negative() { t.neg() } else { t },
            }
        }
    }
}

/// Complex number over [`Real`]; operations live on [`Ctx`].
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_is_exact() {
        let cx = Ctx::new(64);
        let h = cx.pow2(-1);
        assert_eq!(cx.approx_f64(&h), 0.5);
        let big = cx.pow2(100);
        assert_eq!(cx.approx_f64(&big), 2f64.powi(100));
    }

    #[test]
    fn decimal_round_trip() {
        let cx = Ctx::new(256);
        let x = cx.parse("-3.14159265358979323846264338327950288419716939937510582097e+2");
        let s = cx.to_decimal(&x);
        let y = cx.parse(&s);
        assert!(cx.sub(&x, &y).is_zero());
        assert!(s.starts_with("-3.1415926535897932384626433832795028841971693993751"));
        assert!(s.ends_with("e+2"));
    }

    #[test]
    fn decimal_digit_count_scales_with_precision() {
        let cx = Ctx::new(256);
        let third = cx.div(&cx.one(), &cx.from_u64(3));
        let s = cx.to_decimal(&third);
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
        assert!(digits >= 77, "only {digits} digits rendered");
    }

    #[test]
    fn approx_f64_small_and_zero() {
        let cx = Ctx::new(64);
        assert_eq!(cx.approx_f64(&cx.zero()), 0.0);
        let x = cx.parse("2.5e-10");
        assert!((cx.approx_f64(&x) - 2.5e-10).abs() < 1e-24);
    }

    #[test]
    fn csqrt_principal_branch() {
        let cx = Ctx::new(128);
        // sqrt(-4) = 2i
        let m4 = cx.creal(&cx.from_i64(-4));
        let s = cx.csqrt(&m4);
        assert!(s.re.is_zero());
        assert_eq!(cx.approx_f64(&s.im), 2.0);
        // sqrt(3+4i) = 2+i
        let z = Complex {
            re: cx.from_u64(3),
            im: cx.from_u64(4),
        };
        let s = cx.csqrt(&z);
        assert!((cx.approx_f64(&s.re) - 2.0).abs() < 1e-30);
        assert!((cx.approx_f64(&s.im) - 1.0).abs() < 1e-30);
        // sqrt(3-4i) = 2-i (conjugate symmetry)
        let zb = Complex {
            re: cx.from_u64(3),
            im: cx.from_i64(-4),
        };
        let s = cx.csqrt(&zb);
        assert!((cx.approx_f64(&s.im) + 1.0).abs() < 1e-30);
        // sqrt(-3+4i) = 1+2i, sqrt(-3-4i) = 1-2i
        let z = Complex {
            re: cx.from_i64(-3),
            im: cx.from_u64(4),
        };
        let s = cx.csqrt(&z);
        assert!((cx.approx_f64(&s.re) - 1.0).abs() < 1e-30);
        assert!((cx.approx_f64(&s.im) - 2.0).abs() < 1e-30);
        let z = Complex {
            re: cx.from_i64(-3),
            im: cx.from_i64(-4),
        };
        let s = cx.csqrt(&z);
        assert!((cx.approx_f64(&s.im) + 2.0).abs() < 1e-30);
    }

    #[test]
    fn cdiv_matches_hand_value() {
        let cx = Ctx::new(128);
        // (1+2i)/(3-4i) = (-1+2i)/5
        let a = Complex {
            re: cx.one(),
            im: cx.from_u64(2),
        };
        let b = Complex {
            re: cx.from_u64(3),
            im: cx.from_i64(-4),
        };
        let q = cx.cdiv(&a, &b);
        assert!((cx.approx_f64(&q.re) + 0.2).abs() < 1e-30);
        assert!((cx.approx_f64(&q.im) - 0.4).abs() < 1e-30);
    }

    #[test]
    fn parse_rejects_garbage() {
        let cx = Ctx::new(64);
        assert!(cx.parse("not a number").is_nan());
    }
}
