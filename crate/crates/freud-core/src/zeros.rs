//! Real zeros with certified enclosures, interlacing verdicts, and the
//! normalized x^2 three-term recurrence check.
//!
//! `P_n` zeros come from the Jacobi matrix (symmetric tridiagonal, zero
//! diagonal, off-diagonal sqrt(c_j)), polished by bisection. `Q_n` zeros use
//! bracketed bisection seeded by the zeros of `P_{n-1}, P_n, P_{n+1}`: when
//! the two families interlace those brackets isolate every real zero, and
//! bisection yields an enclosure radius instead of a bare approximation. A
//! denser uniform sweep backs this up when the primary brackets certify
//! fewer than `n` zeros; if zeros are still missing the report says so
//! rather than failing (`all_real = false`).
//!
//! A note on ordering: with any positive mass at the origin the zeros of
//! `Q_n` are pulled inward, so in the merged ascending order of positive
//! zeros each Q-zero precedes its P partner and the "extra" sign change
//! sits between 0 and the smallest P-zero, while the outermost Q-zero stays
//! inside the outermost P-zero. Interlacing verdicts are therefore
//! phase-agnostic: strict alternation in either phase passes, coincidences
//! within the degeneracy band are reported as degenerate, and the observed
//! phase can be read off the report's zero lists.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::freud::{self, FreudTable};
use crate::numerics::{symtridiag_eigen, Ctx, Poly, Real};
use crate::report::{Check, VerifyReport};
use crate::sobolev::{sobolev_inner, SobolevTable};
use crate::{Error, Result};

/// Verdict for one positive-zero pair in an interlacing comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairVerdict {
    Strict,
    Degenerate,
    Violated,
}

impl PairVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairVerdict::Strict => "strict",
            PairVerdict::Degenerate => "degenerate",
            PairVerdict::Violated => "violated",
        }
    }
}

/// Ordered real zeros with enclosure half-widths. `reference` and
/// `interlace` are filled by the comparison operations.
pub struct ZeroReport {
    pub n: usize,
    pub zeros: Vec<Real>,
    pub radii: Vec<Real>,
    pub all_real: bool,
    pub reference: Option<Vec<Real>>,
    pub interlace: Option<Vec<PairVerdict>>,
}

enum Sign {
    Neg,
    Zero,
    Pos,
}

fn sign_of(v: &Real) -> Sign {
    if v.is_zero() {
        Sign::Zero
    } else if v.is_negative() {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

fn opposite(a: &Sign, b: &Sign) -> bool {
    matches!((a, b), (Sign::Neg, Sign::Pos) | (Sign::Pos, Sign::Neg))
}

/// Bisect `f` on a bracket with a strict sign change down to half-width
/// `tol`. Returns (zero, radius); an exact hit gets radius 0.
fn bisect<F: Fn(&Real) -> Real>(
    cx: &Ctx,
    f: &F,
    mut lo: Real,
    mut hi: Real,
    mut s_lo: Sign,
    tol: &Real,
) -> (Real, Real) {
    let half = cx.pow2(-1);
    loop {
        let width = cx.mul(&cx.sub(&hi, &lo), &half);
        if cx.le(&width, tol) {
            let mid = cx.mul(&cx.add(&lo, &hi), &half);
            return (mid, width);
        }
        let mid = cx.mul(&cx.add(&lo, &hi), &half);
        match sign_of(&f(&mid)) {
            Sign::Zero => return (mid, cx.zero()),
            s if opposite(&s_lo, &s) => hi = mid,
            s => {
                lo = mid;
                s_lo = s;
            }
        }
    }
}

/// Zeros of `P_n`: Jacobi-matrix eigenvalues polished by bisection to
/// half-width `tol`. All real by construction.
pub fn zeros_p(cx: &Ctx, freud_table: &FreudTable, n: usize, tol: &Real) -> Result<ZeroReport> {
    assert!(n >= 1 && n <= freud_table.n_max, "order outside the table");
    let diag = vec![cx.zero(); n];
    let off: Vec<Real> = (1..n).map(|j| cx.sqrt(&freud_table.c[j])).collect();
    let eig = symtridiag_eigen(cx, &diag, &off)?;
    let f = |x: &Real| freud::eval_p(cx, freud_table, n, x);
    let mut zeros = Vec::with_capacity(n);
    let mut radii = Vec::with_capacity(n);
    for e in &eig {
        let (z, r) = polish(cx, &f, e, tol)?;
        zeros.push(z);
        radii.push(r);
    }
    Ok(ZeroReport {
        n,
        zeros,
        radii,
        all_real: true,
        reference: None,
        interlace: None,
    })
}

/// Expand a bracket around `e` until the signs differ, then bisect.
fn polish<F: Fn(&Real) -> Real>(cx: &Ctx, f: &F, e: &Real, tol: &Real) -> Result<(Real, Real)> {
    let v = f(e);
    if v.is_zero() {
        return Ok((e.clone(), cx.zero()));
    }
    let mut h = tol.clone();
    for _ in 0..80 {
        let lo = cx.sub(e, &h);
        let hi = cx.add(e, &h);
        let s_lo = sign_of(&f(&lo));
        let s_hi = sign_of(&f(&hi));
        if matches!(s_lo, Sign::Zero) {
            return Ok((lo, cx.zero()));
        }
        if matches!(s_hi, Sign::Zero) {
            return Ok((hi, cx.zero()));
        }
        if opposite(&s_lo, &s_hi) {
            return Ok(bisect(cx, f, lo, hi, s_lo, tol));
        }
        h = cx.add(&h, &h);
    }
    Err(Error::Iteration {
        index: 0,
        detail: String::from("no sign change around an eigenvalue"),
    })
}

/// Scan a sorted candidate grid for sign changes of `f` and bisect each.
/// Exact hits at grid points count as zeros with radius 0; around such a
/// point the scan re-samples just inside the adjacent intervals so a
/// neighboring sign change is not shadowed by the zero-valued endpoint.
fn scan_brackets<F: Fn(&Real) -> Real>(
    cx: &Ctx,
    f: &F,
    grid: &[Real],
    tol: &Real,
) -> (Vec<Real>, Vec<Real>) {
    let mut zeros = Vec::new();
    let mut radii = Vec::new();
    let signs: Vec<Sign> = grid.iter().map(|x| sign_of(&f(x))).collect();
    let nudge = cx.pow2(-8);
    for i in 0..grid.len() {
        if matches!(signs[i], Sign::Zero) {
            zeros.push(grid[i].clone());
            radii.push(cx.zero());
        }
        if i + 1 == grid.len() {
            break;
        }
        let gap = cx.mul(&cx.sub(&grid[i + 1], &grid[i]), &nudge);
        let (xl, sl) = match signs[i] {
            Sign::Zero => {
                let x = cx.add(&grid[i], &gap);
                let s = sign_of(&f(&x));
                (x, s)
            }
            Sign::Neg => (grid[i].clone(), Sign::Neg),
            Sign::Pos => (grid[i].clone(), Sign::Pos),
        };
        let (xr, sr) = match signs[i + 1] {
            Sign::Zero => {
                let x = cx.sub(&grid[i + 1], &gap);
                let s = sign_of(&f(&x));
                (x, s)
            }
            Sign::Neg => (grid[i + 1].clone(), Sign::Neg),
            Sign::Pos => (grid[i + 1].clone(), Sign::Pos),
        };
        if opposite(&sl, &sr) {
            let (z, r) = bisect(cx, f, xl, xr, sl, tol);
            zeros.push(z);
            radii.push(r);
        }
    }
    (zeros, radii)
}

/// Sort and coalesce nearby candidates, preferring the smallest-magnitude
/// member of a cluster (this keeps an exact 0 when near-zero noise
/// surrounds it).
fn sort_dedup(cx: &Ctx, mut pts: Vec<Real>, band: &Real) -> Vec<Real> {
    pts.sort_by(|a, b| cx.cmp(a, b));
    let mut out: Vec<Real> = Vec::with_capacity(pts.len());
    for p in pts {
        if let Some(last) = out.last_mut() {
            if cx.le(&cx.sub(&p, last).abs(), band) {
                if cx.lt(&p.abs(), &last.abs()) {
                    *last = p;
                }
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Zeros of `Q_n` by bracketed bisection. Brackets come from the zeros of
/// `P_{n-1}, P_n, P_{n+1}` (orders that exist in the table) plus sentinels
/// at plus/minus (largest candidate + 1); a uniform sweep over the same
/// interval backs this up when fewer than `n` zeros certify. `all_real`
/// records whether `n` zeros were found; a shortfall is reported, not an
/// error.
pub fn zeros_q(
    cx: &Ctx,
    st: &SobolevTable,
    freud_table: &FreudTable,
    n: usize,
    tol: &Real,
) -> Result<ZeroReport> {
    assert!(n >= 1 && n <= st.n_max, "order outside the table");
    let mut cand: Vec<Real> = Vec::new();
    for order in [n.checked_sub(1).filter(|&m| m >= 1), Some(n), Some(n + 1)]
        .into_iter()
        .flatten()
    {
        if order <= freud_table.n_max {
            cand.extend(zeros_p(cx, freud_table, order, tol)?.zeros);
        }
    }
    let mut mx = cx.zero();
    for p in &cand {
        mx = mx.max(&p.abs());
    }
    let m = cx.add(&mx, &cx.one());
    cand.push(m.neg());
    cand.push(m.clone());
    // an exact origin candidate so parity-forced zeros register exactly
    cand.push(cx.zero());
    let dedup_band = cx.mul(tol, &cx.pow2(-4));
    let grid = sort_dedup(cx, cand, &dedup_band);

    let f = |x: &Real| st.q[n].eval(cx, x);
    let (mut zeros, mut radii) = scan_brackets(cx, &f, &grid, tol);
    if zeros.len() < n {
        // uniform backup sweep over the same interval
        let steps = 8 * n + 1;
        let width = cx.mul(&m, &cx.from_u64(2));
        let step = cx.div(&width, &cx.from_u64(steps as u64));
        let mut dense = grid.clone();
        let mut x = m.neg();
        for _ in 0..=steps {
            dense.push(x.clone());
            x = cx.add(&x, &step);
        }
        let dense = sort_dedup(cx, dense, &dedup_band);
        let (z2, r2) = scan_brackets(cx, &f, &dense, tol);
        if z2.len() > zeros.len() {
            zeros = z2;
            radii = r2;
        }
    }
    let all_real = zeros.len() == n;
    Ok(ZeroReport {
        n,
        zeros,
        radii,
        all_real,
        reference: None,
        interlace: None,
    })
}

fn positive_part(cx: &Ctx, zs: &[Real], band: &Real) -> Vec<Real> {
    zs.iter()
        .filter(|z| !cx.le(z, band))
        .cloned()
        .collect()
}

/// Per-pair interlacing verdicts for two ascending positive-zero lists of
/// equal length. Strict alternation in either phase passes; a pair whose
/// members coincide within `band` is degenerate.
fn pair_verdicts(cx: &Ctx, q: &[Real], p: &[Real], band: &Real) -> Vec<PairVerdict> {
    let m = q.len().min(p.len());
    let mut verdicts = vec![PairVerdict::Violated; m];
    // q_inside = true means the Q member of each pair comes first
    let mut q_inside: Option<bool> = None;
    for k in 0..m {
        if cx.le(&cx.sub(&q[k], &p[k]).abs(), band) {
            verdicts[k] = PairVerdict::Degenerate;
            continue;
        }
        let inside = cx.lt(&q[k], &p[k]);
        let phase = *q_inside.get_or_insert(inside);
        let mut ok = inside == phase;
        if ok && k + 1 < m {
            let next_deg = cx.le(&cx.sub(&q[k + 1], &p[k + 1]).abs(), band);
            if !next_deg {
                // the trailing member of this pair must precede the leading
                // member of the next
                ok = if phase {
                    cx.lt(&p[k], &q[k + 1])
                } else {
                    cx.lt(&q[k], &p[k + 1])
                };
            }
        }
        if ok {
            verdicts[k] = PairVerdict::Strict;
        }
    }
    verdicts
}

/// Compare the zeros of `Q_n` against `P_n`: the report carries Q's zeros,
/// P's as `reference`, and a verdict per positive-zero pair. The degeneracy
/// band is 100 times `tol`, wide enough to absorb rounding when the two
/// families coincide exactly in theory.
pub fn interlacing_report(
    cx: &Ctx,
    st: &SobolevTable,
    freud_table: &FreudTable,
    n: usize,
    tol: &Real,
) -> Result<ZeroReport> {
    assert!(n >= 3, "interlacing needs at least one positive pair each");
    let zq = zeros_q(cx, st, freud_table, n, tol)?;
    let zp = zeros_p(cx, freud_table, n, tol)?;
    let band = cx.mul(tol, &cx.from_u64(100));
    let qpos = positive_part(cx, &zq.zeros, &band);
    let ppos = positive_part(cx, &zp.zeros, &band);
    let verdicts = pair_verdicts(cx, &qpos, &ppos, &band);
    Ok(ZeroReport {
        n,
        zeros: zq.zeros,
        radii: zq.radii,
        all_real: zq.all_real,
        reference: Some(zp.zeros),
        interlace: Some(verdicts),
    })
}

fn unit_norm(cx: &Ctx, st: &SobolevTable, n: usize) -> Poly {
    let s = cx.recip(&cx.sqrt(&st.khat[n]));
    Poly::new(st.q[n].coeffs.iter().map(|v| cx.mul(&s, v)).collect())
}

fn shift2(cx: &Ctx, p: &Poly) -> Poly {
    let mut coeffs = vec![cx.zero(); p.coeffs.len() + 2];
    for (i, v) in p.coeffs.iter().enumerate() {
        coeffs[i + 2] = v.clone();
    }
    Poly::new(coeffs)
}

/// The x^2 three-term recurrence of the unit-norm family
/// `Qhat_n = Q_n / sqrt(khat_n)`:
///
/// ```text
/// x^2 Qhat_n = A_n Qhat_{n+2} + B_n Qhat_n + A_{n-2} Qhat_{n-2}
/// ```
///
/// with `A_n = <x^2 Qhat_n, Qhat_{n+2}>_S` and `B_n = <x^2 Qhat_n, Qhat_n>_S`
/// extracted as inner products. Checks, per degree: the max coefficient of
/// the residual polynomial, the cross-coefficient symmetry
/// `A_n = <x^2 Qhat_{n+2}, Qhat_n>_S` (x^2-multiplication is self-adjoint
/// for this inner product), and, as an experiment, strict interlacing of the
/// zeros of `Qhat_n` with those of `Qhat_{n-2}`.
pub fn normalized_x2_recurrence_check(
    cx: &Ctx,
    st: &SobolevTable,
    freud_table: &FreudTable,
    n_max: usize,
    tol: &Real,
) -> Result<VerifyReport> {
    if !st.params.single_derivative_mass() {
        return Err(Error::Param(
            "the x^2 recurrence check applies to the single-derivative-mass case",
        ));
    }
    let nn = n_max.min(st.n_max);
    let mut rep = VerifyReport::new();
    let qhat: Vec<Poly> = (0..=nn).map(|n| unit_norm(cx, st, n)).collect();
    for n in 0..=nn.saturating_sub(2) {
        let x2q = shift2(cx, &qhat[n]);
        let a_n = sobolev_inner(cx, &x2q, &qhat[n + 2], &st.params);
        let b_n = sobolev_inner(cx, &x2q, &qhat[n], &st.params);
        let a_sym = sobolev_inner(cx, &shift2(cx, &qhat[n + 2]), &qhat[n], &st.params);
        rep.push(Check::new(
            cx,
            "x^2 cross-coefficient symmetry A_n = <x^2 Qhat_{n+2}, Qhat_n>",
            Some(n as i64),
            cx.sub(&a_n, &a_sym),
            tol,
            "",
        ));
        let mut resid = x2q.coeffs.clone();
        let mut apply = |coef: &Real, poly: &Poly| {
            for (i, v) in poly.coeffs.iter().enumerate() {
                resid[i] = cx.sub(&resid[i], &cx.mul(coef, v));
            }
        };
        apply(&a_n, &qhat[n + 2]);
        apply(&b_n, &qhat[n]);
        if n >= 2 {
            let x2q_prev = shift2(cx, &qhat[n - 2]);
            let a_prev = sobolev_inner(cx, &x2q_prev, &qhat[n], &st.params);
            apply(&a_prev, &qhat[n - 2]);
        }
        let mut worst = cx.zero();
        for v in &resid {
            worst = worst.max(&v.abs());
        }
        rep.push(Check::new(
            cx,
            "normalized x^2 recurrence, max coefficient residual",
            Some(n as i64),
            worst,
            tol,
            "",
        ));
    }
    // zero-interlacing experiment between Qhat_n and Qhat_{n-2}
    let band = cx.mul(tol, &cx.from_u64(100));
    for n in 3..=nn.min(10) {
        let zn = zeros_q(cx, st, freud_table, n, tol)?;
        let zp = zeros_q(cx, st, freud_table, n - 2, tol)?;
        let a = positive_part(cx, &zn.zeros, &band);
        let b = positive_part(cx, &zp.zeros, &band);
        let (alternates, coincident) = merged_alternation(cx, &a, &b, &band);
        let pass = alternates && !coincident && zn.all_real && zp.all_real;
        rep.push(Check::verdict(
            "zeros of Qhat_n and Qhat_{n-2} strictly interlace (experiment)",
            Some(n as i64),
            cx.zero(),
            tol.clone(),
            pass,
            format!(
                "{} vs {} positive zeros{}",
                a.len(),
                b.len(),
                if coincident { ", coincidence hit" } else { "" }
            ),
        ));
    }
    Ok(rep)
}

/// Do two ascending lists alternate in merged order? Returns
/// (alternates, any coincidence within band).
fn merged_alternation(cx: &Ctx, a: &[Real], b: &[Real], band: &Real) -> (bool, bool) {
    if a.len().abs_diff(b.len()) > 1 {
        return (false, false);
    }
    let mut merged: Vec<(usize, &Real)> = Vec::with_capacity(a.len() + b.len());
    merged.extend(a.iter().map(|v| (0usize, v)));
    merged.extend(b.iter().map(|v| (1usize, v)));
    merged.sort_by(|x, y| cx.cmp(x.1, y.1));
    let mut coincident = false;
    let mut alternates = true;
    for w in merged.windows(2) {
        if cx.le(&cx.sub(w[1].1, w[0].1).abs(), band) {
            coincident = true;
        }
        if w[0].0 == w[1].0 {
            alternates = false;
        }
    }
    (alternates, coincident)
}
