//! Symmetric tridiagonal eigenvalues (implicit-shift QL) and a tridiagonal
//! linear solve. This is all the linear algebra the crate needs: Jacobi
//! matrices deliver zero estimates, and the Newton corrector for the
//! recurrence string solves tridiagonal systems.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

use super::scalar::{Ctx, Real};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `offdiag` (`offdiag.len() == diag.len() - 1`), ascending.
///
/// Implicit-shift QL, eigenvalues only. Deflation uses a splitting tolerance
/// of a few ulps at the context precision, so clustered eigenvalues still
/// separate as far as the precision allows.
pub fn symtridiag_eigen(cx: &Ctx, diag: &[Real], offdiag: &[Real]) -> Result<Vec<Real>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(offdiag.len(), n - 1, "off-diagonal length mismatch");
    let mut d: Vec<Real> = diag.to_vec();
    // padded by one slot so e[m] is addressable at the split index
    let mut e: Vec<Real> = offdiag.to_vec();
    e.push(cx.zero());

    let eps = cx.pow2(-(cx.prec() as i32) + 2);
    let two = cx.from_u64(2);

    for l in 0..n {
        let mut iter = 0usize;
        'sweep: loop {
            let mut m = l;
            while m + 1 < n {
                let dd = cx.add(&d[m].abs(), &d[m + 1].abs());
                if cx.le(&e[m].abs(), &cx.mul(&eps, &dd)) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::Iteration {
                    index: l,
                    detail: String::from("QL sweep did not deflate"),
                });
            }
            // Wilkinson-style shift from the 2x2 at the top of the block.
            let mut g = cx.div(&cx.sub(&d[l + 1], &d[l]), &cx.mul(&two, &e[l]));
            let mut r = cx.hypot(&g, &cx.one());
            let denom = if g.is_negative() {
                cx.sub(&g, &r)
            } else {
                cx.add(&g, &r)
            };
            g = cx.add(&cx.sub(&d[m], &d[l]), &cx.div(&e[l], &denom));
            let mut s = cx.one();
            let mut c = cx.one();
            let mut p = cx.zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = cx.mul(&s, &e[i]);
                let b = cx.mul(&c, &e[i]);
                r = cx.hypot(&f, &g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] = cx.sub(&d[i + 1], &p);
                    e[m] = cx.zero();
                    underflow = true;
                    break;
                }
                s = cx.div(&f, &r);
                c = cx.div(&g, &r);
                g = cx.sub(&d[i + 1], &p);
                r = cx.add(
                    &cx.mul(&cx.sub(&d[i], &g), &s),
                    &cx.mul(&cx.mul(&two, &c), &b),
                );
                p = cx.mul(&s, &r);
                d[i + 1] = cx.add(&g, &p);
                g = cx.sub(&cx.mul(&c, &r), &b);
            }
            if underflow {
                continue 'sweep;
            }
            d[l] = cx.sub(&d[l], &p);
            e[l] = g;
            e[m] = cx.zero();
        }
    }
    d.sort_by(|a, b| cx.cmp(a, b));
    Ok(d)
}

/// Solves the tridiagonal system with sub-diagonal `sub`, diagonal `diag`,
/// super-diagonal `sup` and right-hand side `rhs` by elimination without
/// pivoting. Fails on a zero pivot.
pub fn thomas_solve(
    cx: &Ctx,
    sub: &[Real],
    diag: &[Real],
    sup: &[Real],
    rhs: &[Real],
) -> Result<Vec<Real>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    assert_eq!(sub.len(), n.saturating_sub(1));
    assert_eq!(sup.len(), n.saturating_sub(1));
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut cp: Vec<Real> = Vec::with_capacity(n.saturating_sub(1));
    let mut dp: Vec<Real> = Vec::with_capacity(n);
    if diag[0].is_zero() {
        return Err(Error::Precision {
            index: 0,
            detail: String::from("zero pivot in tridiagonal solve"),
        });
    }
    if n > 1 {
        cp.push(cx.div(&sup[0], &diag[0]));
    }
    dp.push(cx.div(&rhs[0], &diag[0]));
    for i in 1..n {
        let denom = cx.sub(&diag[i], &cx.mul(&sub[i - 1], &cp[i - 1]));
        if denom.is_zero() {
            return Err(Error::Precision {
                index: i,
                detail: String::from("zero pivot in tridiagonal solve"),
            });
        }
        if i + 1 < n {
            cp.push(cx.div(&sup[i], &denom));
        }
        let num = cx.sub(&rhs[i], &cx.mul(&sub[i - 1], &dp[i - 1]));
        dp.push(cx.div(&num, &denom));
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let t = cx.mul(&cp[i], &x[i + 1]);
        x[i] = cx.sub(&x[i], &t);
    }
    Ok(x)
}
