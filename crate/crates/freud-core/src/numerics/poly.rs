//! Dense polynomials with arbitrary-precision coefficients.
//!
//! Coefficients are stored low degree first; the families built by this crate
//! are monic with a fixed parity, and the generators keep the off-parity
//! slots as exact zeros. That makes Horner evaluation exactly parity
//! symmetric bit for bit: rounding to even is sign symmetric, so for an even
//! polynomial `eval(-x)` reproduces `eval(x)` exactly, and for an odd one it
//! reproduces the negation.

use alloc::vec::Vec;

use super::scalar::{Complex, Ctx, Real};

/// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
pub fn poly_eval(cx: &Ctx, coeffs: &[Real], x: &Real) -> Real {
    let mut acc = cx.zero();
    for c in coeffs.iter().rev() {
        acc = cx.add(&cx.mul(&acc, x), c);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct Poly {
    pub coeffs: Vec<Real>,
}

impl Poly {
    pub fn new(coeffs: Vec<Real>) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient vector");
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, cx: &Ctx, x: &Real) -> Real {
        poly_eval(cx, &self.coeffs, x)
    }

    /// Horner value together with a running error bound
    /// `(2 deg + 2) * 2^-p * sum |c_i| |x|^i`: if `|value| > bound`, the sign
    /// of `value` is certified.
    pub fn eval_bounded(&self, cx: &Ctx, x: &Real) -> (Real, Real) {
        let ax = x.abs();
        let mut acc = cx.zero();
        let mut s = cx.zero();
        for c in self.coeffs.iter().rev() {
            acc = cx.add(&cx.mul(&acc, x), c);
            s = cx.add(&cx.mul(&s, &ax), &c.abs());
        }
        let factor = cx.from_u64(2 * self.degree() as u64 + 2);
        let bound = cx.mul(&cx.mul(&factor, &cx.pow2(-(cx.prec() as i32))), &s);
        (acc, bound)
    }

    pub fn eval_complex(&self, cx: &Ctx, z: &Complex) -> Complex {
        let mut acc = cx.czero();
        for c in self.coeffs.iter().rev() {
            acc = cx.cmul(&acc, z);
            acc.re = cx.add(&acc.re, c);
        }
        acc
    }

    pub fn deriv(&self, cx: &Ctx) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::new(alloc::vec![cx.zero()]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| cx.mul(c, &cx.from_u64(i as u64)))
            .collect();
        Poly::new(coeffs)
    }

    /// `f^(k)(0) = k! * coeffs[k]` (zero when `k` exceeds the degree).
    pub fn deriv_at_zero(&self, cx: &Ctx, k: usize) -> Real {
        match self.coeffs.get(k) {
            None => cx.zero(),
            Some(c) => {
                let mut f = cx.one();
                for i in 2..=k as u64 {
                    f = cx.mul(&f, &cx.from_u64(i));
                }
                cx.mul(&f, c)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn horner_matches_hand_value() {
        let cx = Ctx::new(128);
        // x^4 - 4x^2 + 4 at x = 3 is 49
        let p = Poly::new(vec![
            cx.from_u64(4),
            cx.zero(),
            cx.from_i64(-4),
            cx.zero(),
            cx.one(),
        ]);
        let v = p.eval(&cx, &cx.from_u64(3));
        assert!(cx.sub(&v, &cx.from_u64(49)).is_zero());
        let w = poly_eval(&cx, &p.coeffs, &cx.from_u64(3));
        assert!(cx.sub(&v, &w).is_zero());
    }

    #[test]
    fn parity_symmetry_is_exact() {
        let cx = Ctx::new(96);
        let x = cx.parse("1.73904217311111189271903");
        // even polynomial, odd slots exact zero
        let even = Poly::new(vec![
            cx.parse("0.3331"),
            cx.zero(),
            cx.parse("-2.718281828459045"),
            cx.zero(),
            cx.one(),
        ]);
        let a = even.eval(&cx, &x);
        let b = even.eval(&cx, &x.neg());
        assert!(cx.sub(&a, &b).is_zero());
        // odd polynomial flips sign exactly
        let odd = Poly::new(vec![
            cx.zero(),
            cx.parse("-0.125"),
            cx.zero(),
            cx.one(),
        ]);
        let a = odd.eval(&cx, &x);
        let b = odd.eval(&cx, &x.neg());
        assert!(cx.add(&a, &b).is_zero());
    }

    #[test]
    fn error_bound_covers_true_error() {
        let lo = Ctx::new(64);
        let hi = Ctx::new(320);
        // (x - 1)^6 expanded; evaluation near 1 cancels heavily
        let ints: [i64; 7] = [1, -6, 15, -20, 15, -6, 1];
        let p_lo = Poly::new(ints.iter().map(|&c| lo.from_i64(c)).collect());
        let p_hi = Poly::new(ints.iter().map(|&c| hi.from_i64(c)).collect());
        let x_lo = lo.add(&lo.one(), &lo.pow2(-9));
        let x_hi = hi.add(&hi.one(), &hi.pow2(-9));
        let (v, bound) = p_lo.eval_bounded(&lo, &x_lo);
        let exact = p_hi.eval(&hi, &x_hi);
        let err = hi.sub(&v, &exact).abs();
        assert!(hi.le(&err, &bound));
        assert!(!bound.is_zero());
    }

    #[test]
    fn complex_evaluation() {
        let cx = Ctx::new(128);
        // x^2 at 1+i is 2i
        let p = Poly::new(vec![cx.zero(), cx.zero(), cx.one()]);
        let z = Complex {
            re: cx.one(),
            im: cx.one(),
        };
        let v = p.eval_complex(&cx, &z);
        assert!(v.re.is_zero());
        assert!(cx.sub(&v.im, &cx.from_u64(2)).is_zero());
    }

    #[test]
    fn derivative_and_values_at_zero() {
        let cx = Ctx::new(64);
        // x^3 - 2x
        let p = Poly::new(vec![cx.zero(), cx.from_i64(-2), cx.zero(), cx.one()]);
        let d = p.deriv(&cx);
        assert_eq!(d.coeffs.len(), 3);
        assert!(cx.sub(&d.coeffs[0], &cx.from_i64(-2)).is_zero());
        assert!(d.coeffs[1].is_zero());
        assert!(cx.sub(&d.coeffs[2], &cx.from_u64(3)).is_zero());
        // f'''(0) = 3! * 1 = 6, f''(0) = 0, f'(0) = -2
        assert!(cx.sub(&p.deriv_at_zero(&cx, 3), &cx.from_u64(6)).is_zero());
        assert!(p.deriv_at_zero(&cx, 2).is_zero());
        assert!(cx.sub(&p.deriv_at_zero(&cx, 1), &cx.from_i64(-2)).is_zero());
        assert!(p.deriv_at_zero(&cx, 7).is_zero());
    }
}
