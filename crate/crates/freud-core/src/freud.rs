//! Monic orthogonal polynomials for the weight `exp(-x^4)` on the real line.
//!
//! With `P_{n+1} = x P_n - c_n P_{n-1}` (the weight is even, so the `x P_n`
//! term carries no diagonal coefficient), the recurrence coefficients satisfy
//! the string equation
//!
//! ```text
//! n = 4 c_n (c_{n+1} + c_n + c_{n-1}),    c_0 = 0,
//! ```
//!
//! with `c_1 = Gamma(3/4)/Gamma(1/4)` fixed by the moments. Two engines build
//! the table:
//!
//! * [`string_forward`] iterates the equation directly. That is exponentially
//!   unstable (noise grows by about `2 + sqrt(3)` per index), so the table
//!   carries per-index trust flags from a two-precision agreement test.
//! * [`string_newton`] solves the whole string globally with a pinned tail
//!   `c_{M+1} = sqrt((M+1)/12)` and discards a precision-scaled buffer of
//!   trailing indices. The boundary error contracts by `2 - sqrt(3)` per
//!   index moving away from the pin, so the kept range is fully trusted and
//!   `c_1` becomes an emergent prediction instead of an input.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::numerics::{
    gamma_quarter, symtridiag_eigen, thomas_solve, Complex, Ctx, Poly, Real,
};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Forward,
    Newton,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Forward => "forward",
            Method::Newton => "newton",
        }
    }
}

/// Recurrence table for the weight `exp(-x^4)`.
///
/// All vectors are indexed `0..=n_max`. `c[0]` is exactly zero by convention.
/// `residual[n]` is the string-equation residual `4c_n(c_{n+1}+c_n+c_{n-1})-n`
/// where it is defined (`1 <= n < n_max`); the boundary rows stay unset rather
/// than being zero-filled. `trusted[n]` marks indices whose values the build
/// method vouches for; once an index fails the flag stays off for the rest of
/// the table.
pub struct FreudTable {
    pub n_max: usize,
    pub c: Vec<Real>,
    pub k: Vec<Real>,
    pub residual: Vec<Option<Real>>,
    pub trusted: Vec<bool>,
    pub method: Method,
    pub precision_bits: usize,
}

impl FreudTable {
    /// Largest index `t` such that rows `0..=t` are all trusted.
    pub fn trusted_max(&self) -> usize {
        let mut t = 0;
        for (i, ok) in self.trusted.iter().enumerate() {
            if *ok {
                t = i;
            } else {
                break;
            }
        }
        t
    }

    /// `max |residual_n| / n` over the trusted range.
    pub fn max_rel_residual(&self, cx: &Ctx) -> Real {
        let mut worst = cx.zero();
        for n in 1..=self.trusted_max() {
            if let Some(r) = &self.residual[n] {
                let rel = cx.div(&r.abs(), &cx.from_u64(n as u64));
                worst = worst.max(&rel);
            }
        }
        worst
    }
}

/// Moment `integral x^m exp(-x^4) dx` over the whole line:
/// `Gamma((m+1)/4)/2` for even `m`, zero for odd `m`.
pub fn moment(cx: &Ctx, m: u64) -> Real {
    if m % 2 == 1 {
        return cx.zero();
    }
    let g = gamma_quarter(cx, (m + 1) as u32);
    cx.div(&g, &cx.from_u64(2))
}

/// `c_1 = mu_2 / mu_0 = Gamma(3/4) / Gamma(1/4)`.
pub fn recurrence_c1(cx: &Ctx) -> Real {
    cx.div(&gamma_quarter(cx, 3), &gamma_quarter(cx, 1))
}

/// Squared norms `k_n = <P_n, P_n>` from the recurrence coefficients:
/// `k_0 = mu_0`, `k_n = c_n k_{n-1}`.
pub fn freud_norms(cx: &Ctx, c: &[Real]) -> Vec<Real> {
    let mut k = Vec::with_capacity(c.len());
    k.push(moment(cx, 0));
    for n in 1..c.len() {
        let prev = k[n - 1].clone();
        k.push(cx.mul(&c[n], &prev));
    }
    k
}

fn residuals_from(cx: &Ctx, c: &[Real]) -> Vec<Option<Real>> {
    let n_max = c.len() - 1;
    let mut res: Vec<Option<Real>> = vec![None; n_max + 1];
    for n in 1..n_max {
        let sum = cx.add(&cx.add(&c[n + 1], &c[n]), &c[n - 1]);
        let lhs = cx.mul(&cx.mul(&cx.from_u64(4), &c[n]), &sum);
        res[n] = Some(cx.sub(&lhs, &cx.from_u64(n as u64)));
    }
    res
}

fn forward_run(cx: &Ctx, n_max: usize) -> Vec<Real> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(cx.zero());
    if n_max >= 1 {
        c.push(recurrence_c1(cx));
    }
    for n in 1..n_max {
        // c_{n+1} = n/(4 c_n) - c_n - c_{n-1}
        let q = cx.div(
            &cx.from_u64(n as u64),
            &cx.mul(&cx.from_u64(4), &c[n]),
        );
        let next = cx.sub(&cx.sub(&q, &c[n]), &c[n - 1]);
        c.push(next);
    }
    c
}

/// Forward iteration of the string equation at the context precision, with
/// trust flags from agreement against a second run carrying 64 guard bits.
/// An index is trusted while the two runs agree to `2^(-prec/2)` relative and
/// the value is positive; after the first failure everything downstream is
/// untrusted (the instability only compounds).
pub fn string_forward(cx: &Ctx, n_max: usize) -> FreudTable {
    let c = forward_run(cx, n_max);
    let hi = cx.with_prec(cx.prec() + 64);
    let c_hi = forward_run(&hi, n_max);
    let gate = cx.pow2(-((cx.prec() / 2) as i32));
    let mut trusted = vec![false; n_max + 1];
    trusted[0] = true;
    let mut ok = true;
    for n in 1..=n_max {
        if ok {
            let agree = hi.div(&hi.sub(&c[n], &c_hi[n]).abs(), &c_hi[n].abs());
            ok = c[n].is_positive() && hi.le(&agree, &gate);
        }
        trusted[n] = ok;
    }
    let k = freud_norms(cx, &c);
    let residual = residuals_from(cx, &c);
    FreudTable {
        n_max,
        c,
        k,
        residual,
        trusted,
        method: Method::Forward,
        precision_bits: cx.prec(),
    }
}

/// Newton solve of the full string `F_n = 4c_n(c_{n+1}+c_n+c_{n-1}) - n = 0`,
/// `n = 1..=M`, with `c_0 = 0` and the tail pinned at
/// `c_{M+1} = sqrt((M+1)/12)`. `M = n_max + discard`; the trailing `discard`
/// indices absorb the pin error and are dropped. The default discard is
/// precision-scaled (`ceil(0.53 prec) + 16`), sized so the boundary error
/// contracting by `2 - sqrt(3)` per index is below `2^-prec` at `n_max`;
/// a fixed small discard would poison the top of the table.
///
/// `tol` bounds `max_n |F_n|/n` at convergence; the default `10 * 2^-prec`
/// is as tight as values stored at `prec` bits can support.
pub fn string_newton(
    cx: &Ctx,
    n_max: usize,
    tol: Option<&Real>,
    discard: Option<usize>,
) -> Result<FreudTable> {
    let p = cx.prec();
    let discard = discard.unwrap_or((53 * p).div_ceil(100) + 16);
    let m = n_max.max(1) + discard;
    let w = cx.with_prec(p + 32);
    let tol_eff = match tol {
        Some(t) => {
            let mut t = t.clone();
            t.set_precision(p + 32, astro_float::RoundingMode::ToEven)
                .expect("tolerance precision");
            t
        }
        None => w.mul(&w.from_u64(10), &w.pow2(-(p as i32))),
    };

    let twelve = w.from_u64(12);
    // seed and pin from the limit law c_n ~ sqrt(n/12)
    let mut c: Vec<Real> = Vec::with_capacity(m + 2);
    c.push(w.zero());
    for n in 1..=m {
        c.push(w.sqrt(&w.div(&w.from_u64(n as u64), &twelve)));
    }
    let pin = w.sqrt(&w.div(&w.from_u64((m + 1) as u64), &twelve));
    c.push(pin);

    let four = w.from_u64(4);
    let two = w.from_u64(2);
    let eval_f = |c: &[Real]| -> (Vec<Real>, Real) {
        let mut f = Vec::with_capacity(m);
        let mut worst = w.zero();
        for n in 1..=m {
            let sum = w.add(&w.add(&c[n + 1], &c[n]), &c[n - 1]);
            let v = w.sub(
                &w.mul(&w.mul(&four, &c[n]), &sum),
                &w.from_u64(n as u64),
            );
            let rel = w.div(&v.abs(), &w.from_u64(n as u64));
            worst = worst.max(&rel);
            f.push(v);
        }
        (f, worst)
    };

    let mut converged = false;
    for _iter in 0..60 {
        let (f, worst) = eval_f(&c);
        if w.le(&worst, &tol_eff) {
            converged = true;
            break;
        }
        // tridiagonal Jacobian rows n = 1..=m
        let mut sub = Vec::with_capacity(m - 1);
        let mut diag = Vec::with_capacity(m);
        let mut sup = Vec::with_capacity(m - 1);
        for n in 1..=m {
            if n >= 2 {
                sub.push(w.mul(&four, &c[n]));
            }
            let s = w.add(&w.add(&c[n + 1], &w.mul(&two, &c[n])), &c[n - 1]);
            diag.push(w.mul(&four, &s));
            if n <= m - 1 {
                sup.push(w.mul(&four, &c[n]));
            }
        }
        let delta = thomas_solve(&w, &sub, &diag, &sup, &f)?;
        // damped update: halve the step until positivity survives
        let mut step = w.one();
        let mut accepted = false;
        for _halving in 0..48 {
            let mut trial = c.clone();
            let mut positive = true;
            for n in 1..=m {
                trial[n] = w.sub(&c[n], &w.mul(&step, &delta[n - 1]));
                if !trial[n].is_positive() {
                    positive = false;
                    break;
                }
            }
            if positive {
                c = trial;
                accepted = true;
                break;
            }
            step = w.div(&step, &two);
        }
        if !accepted {
            return Err(Error::Iteration {
                index: 0,
                detail: String::from("Newton step lost positivity at every damping level"),
            });
        }
    }
    if !converged {
        return Err(Error::Iteration {
            index: m,
            detail: String::from("string Newton did not reach tolerance"),
        });
    }

    let mut kept: Vec<Real> = Vec::with_capacity(n_max + 1);
    for item in c.iter().take(n_max + 1) {
        let mut v = item.clone();
        v.set_precision(p, astro_float::RoundingMode::ToEven)
            .expect("rounding Newton output");
        kept.push(v);
    }
    let k = freud_norms(cx, &kept);
    let residual = residuals_from(cx, &kept);
    let trusted = vec![true; n_max + 1];
    Ok(FreudTable {
        n_max,
        c: kept,
        k,
        residual,
        trusted,
        method: Method::Newton,
        precision_bits: p,
    })
}

/// `P_n(x)` by the three-term recurrence. Needs `n <= table.n_max`.
pub fn eval_p(cx: &Ctx, table: &FreudTable, n: usize, x: &Real) -> Real {
    assert!(n <= table.n_max, "P_{n} beyond table");
    if n == 0 {
        return cx.one();
    }
    let mut prev = cx.one();
    let mut cur = x.clone();
    for j in 1..n {
        let next = cx.sub(&cx.mul(x, &cur), &cx.mul(&table.c[j], &prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_n(z)` for complex `z`.
pub fn eval_p_complex(cx: &Ctx, table: &FreudTable, n: usize, z: &Complex) -> Complex {
    assert!(n <= table.n_max, "P_{n} beyond table");
    if n == 0 {
        return cx.creal(&cx.one());
    }
    let mut prev = cx.creal(&cx.one());
    let mut cur = z.clone();
    for j in 1..n {
        let mut next = cx.cmul(z, &cur);
        next.re = cx.sub(&next.re, &cx.mul(&table.c[j], &prev.re));
        next.im = cx.sub(&next.im, &cx.mul(&table.c[j], &prev.im));
        prev = cur;
        cur = next;
    }
    cur
}

/// Monic coefficient vector of `P_n`. Off-parity slots are exact zeros, which
/// keeps evaluation exactly parity-symmetric.
pub fn p_coefficients(cx: &Ctx, table: &FreudTable, n: usize) -> Poly {
    assert!(n <= table.n_max, "P_{n} beyond table");
    let mut prev = vec![cx.one()];
    if n == 0 {
        return Poly::new(prev);
    }
    let mut cur = vec![cx.zero(), cx.one()];
    for j in 1..n {
        // next = shift(cur) - c_j * prev
        let mut next = vec![cx.zero(); j + 2];
        for (i, v) in cur.iter().enumerate() {
            next[i + 1] = v.clone();
        }
        for (i, v) in prev.iter().enumerate() {
            next[i] = cx.sub(&next[i], &cx.mul(&table.c[j], v));
        }
        prev = cur;
        cur = next;
    }
    Poly::new(cur)
}

/// Coefficient in the derivative identity
/// `P_n' = n P_{n-1} + d_n P_{n-3}`, `d_n = 4 c_n c_{n-1} c_{n-2}` (n >= 3).
pub fn d_coeff(cx: &Ctx, table: &FreudTable, n: usize) -> Real {
    assert!((3..=table.n_max).contains(&n), "d_n needs 3 <= n <= n_max");
    let prod = cx.mul(&cx.mul(&table.c[n], &table.c[n - 1]), &table.c[n - 2]);
    cx.mul(&cx.from_u64(4), &prod)
}

/// Gauss nodes and weights for the weight `exp(-x^4)`: nodes are eigenvalues
/// of the Jacobi matrix (zero diagonal, off-diagonal `sqrt(c_j)`), weights
/// are reciprocal Christoffel sums `1 / sum_j phat_j(x_i)^2` over the
/// orthonormal family `phat_j = P_j / sqrt(k_j)`.
pub fn gauss_freud(
    cx: &Ctx,
    table: &FreudTable,
    n: usize,
) -> Result<(Vec<Real>, Vec<Real>)> {
    assert!(n >= 1 && n <= table.n_max, "rule size beyond table");
    let diag = vec![cx.zero(); n];
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        off.push(cx.sqrt(&table.c[j]));
    }
    let nodes = symtridiag_eigen(cx, &diag, &off)?;
    let a: Vec<Real> = (1..n).map(|j| cx.sqrt(&table.c[j])).collect();
    let p0 = cx.recip(&cx.sqrt(&table.k[0]));
    let mut weights = Vec::with_capacity(n);
    for x in &nodes {
        // orthonormal recurrence: x phat_j = a_{j+1} phat_{j+1} + a_j phat_{j-1}
        let mut sum = cx.mul(&p0, &p0);
        let mut prev = cx.zero();
        let mut cur = p0.clone();
        for j in 0..n - 1 {
            let mut next = cx.mul(x, &cur);
            if j > 0 {
                next = cx.sub(&next, &cx.mul(&a[j - 1], &prev));
            }
            next = cx.div(&next, &a[j]);
            prev = cur;
            cur = next;
            sum = cx.add(&sum, &cx.mul(&cur, &cur));
        }
        weights.push(cx.recip(&sum));
    }
    Ok((nodes, weights))
}
