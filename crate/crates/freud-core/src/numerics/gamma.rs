//! Gamma function at quarter-integer arguments.
//!
//! Everything the weight `exp(-x^4)` needs reduces to `Gamma(j/4)`:
//! the moments are `Gamma((m+1)/4)/2` for even `m`. The base value comes from
//! the lemniscatic AGM,
//!
//! ```text
//! Gamma(1/4) = sqrt(2 * w * sqrt(2 pi)),   w = pi / agm(1, sqrt(2)),
//! ```
//!
//! and the rest follow from reflection (`Gamma(1/4) Gamma(3/4) = pi sqrt(2)`)
//! and the functional equation. No numerical integration anywhere.

use super::scalar::{Ctx, Real};

/// `Gamma(j/4)` for `j >= 1`, computed with guard bits and rounded back to
/// the context precision.
pub fn gamma_quarter(cx: &Ctx, j: u32) -> Real {
    assert!(j >= 1, "gamma_quarter needs j >= 1");
    let g = cx.with_prec(cx.prec() + 64);
    let v = match j % 4 {
        1 => gamma_quarter_base(&g),
        2 => g.sqrt(&g.pi()),
        3 => {
            // reflection at 1/4: Gamma(1/4) Gamma(3/4) = pi sqrt(2)
            let num = g.mul(&g.pi(), &g.sqrt(&g.from_u64(2)));
            g.div(&num, &gamma_quarter_base(&g))
        }
        _ => g.one(),
    };
    // climb with Gamma(x+1) = x Gamma(x)
    let mut v = v;
    let four = g.from_u64(4);
    let mut jj = j % 4;
    if jj == 0 {
        jj = 4;
    }
    while jj < j {
        let x = g.div(&g.from_u64(jj as u64), &four);
        v = g.mul(&v, &x);
        jj += 4;
    }
    round_back(cx, v)
}

fn gamma_quarter_base(g: &Ctx) -> Real {
    let one = g.one();
    let two = g.from_u64(2);
    let agm = agm(g, &one, &g.sqrt(&two));
    let w = g.div(&g.pi(), &agm);
    let two_pi = g.mul(&two, &g.pi());
    let inner = g.mul(&g.mul(&two, &w), &g.sqrt(&two_pi));
    g.sqrt(&inner)
}

fn agm(g: &Ctx, a0: &Real, b0: &Real) -> Real {
    let mut a = a0.clone();
    let mut b = b0.clone();
    let half = g.pow2(-1);
    let tiny = g.pow2(-(g.prec() as i32) + 4);
    for _ in 0..64 {
        let am = g.mul(&g.add(&a, &b), &half);
        let gm = g.sqrt(&g.mul(&a, &b));
        a = am;
        b = gm;
        let gap = g.div(&g.sub(&a, &b).abs(), &a);
        if g.le(&gap, &tiny) {
            break;
        }
    }
    a
}

fn round_back(cx: &Ctx, mut v: Real) -> Real {
    v.set_precision(cx.prec(), astro_float::RoundingMode::ToEven)
        .expect("rounding to context precision failed");
    v
}
