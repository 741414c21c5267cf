//! End-to-end acceptance: nine criteria, one test and one PASS line each.
//!
//! Every numeric gate is stated inline with its tolerance. The suite is the
//! exit bar for the whole workspace: tables from both engines, oracle
//! equivalence of the fast connection paths against Gram-Schmidt, the
//! identity suites, certified zeros with interlacing, asymptotic targets,
//! ratio convergence, the conjecture-level prediction experiment, and
//! byte-level determinism of the CLI.

use std::process::Command;

use freud_core::asymptotics::{
    empirical_ratio_conn, limit_diagnostics, p_ratio_empirical, p_ratio_limit_target, phi,
    prediction_experiment, ratio_target,
};
use freud_core::freud::{self, p_coefficients, recurrence_c1, string_forward, string_newton};
use freud_core::numerics::{Complex, Ctx, Real};
use freud_core::sobolev::{
    connection_pos_fast, gram_schmidt_q, identity_residuals, khat_recurrence_lambda2zero,
    q_over_x_integral, SobolevParams,
};
use freud_core::zeros::{interlacing_report, normalized_x2_recurrence_check, PairVerdict};

fn cx() -> Ctx {
    Ctx::new(256)
}

fn params(cx: &Ctx, vals: &[&str]) -> SobolevParams {
    SobolevParams::new(vals.iter().map(|s| cx.parse(s)).collect()).unwrap()
}

fn creal(cx: &Ctx, s: &str) -> Complex {
    cx.creal(&cx.parse(s))
}

fn rel(cx: &Ctx, a: &Real, b: &Real) -> Real {
    let scale = b.abs().max(&cx.one());
    cx.div(&cx.sub(a, b).abs(), &scale)
}

fn le_f(cx: &Ctx, v: &Real, bound: &str) -> bool {
    cx.le(v, &cx.parse(bound))
}

#[test]
fn criterion_1_string_equation_both_engines() {
    let cx = cx();
    let newton = string_newton(&cx, 2000, None, None).unwrap();
    let fwd = string_forward(&cx, 2000);
    assert!(newton.trusted.iter().all(|&t| t), "newton vouches for every row");

    // cross-engine agreement gate, as the CLI's --method both applies it
    let gate = cx.pow2(-128);
    let mut trusted_upto = 0usize;
    for n in 1..=2000 {
        let d = rel(&cx, &fwd.c[n], &newton.c[n]);
        if !fwd.trusted[n] || !cx.le(&d, &gate) {
            break;
        }
        trusted_upto = n;
    }
    assert!(trusted_upto >= 30, "cross-engine trusted range too short: {trusted_upto}");

    let worst = newton.max_rel_residual(&cx);
    assert!(le_f(&cx, &worst, "1e-30"), "string residual too large");

    let c1_err = cx.sub(&newton.c[1], &recurrence_c1(&cx)).abs();
    assert!(le_f(&cx, &c1_err, "1e-30"), "emergent c_1 off the gamma ratio");

    println!(
        "criterion 1 PASS: max|4c(c+c+c)-n|/n = {:.3e} (<= 1e-30) over all 2000 rows, \
         emergent c_1 error = {:.3e} (<= 1e-30), cross-engine trusted prefix = {}",
        cx.approx_f64(&worst),
        cx.approx_f64(&c1_err),
        trusted_upto
    );
}

#[test]
fn criterion_2_limit_constants() {
    let cx = cx();

    // c_n / sqrt(n) at n = 1000 within 1e-2 of 1/(2 sqrt 3)
    let ft = string_newton(&cx, 1001, None, None).unwrap();
    let lim = cx.recip(&cx.mul(&cx.from_u64(2), &cx.sqrt(&cx.from_u64(3))));
    let v = cx.div(&ft.c[1000], &cx.sqrt(&cx.from_u64(1000)));
    let dev_c = cx.sub(&v, &lim).abs();
    assert!(le_f(&cx, &dev_c, "1e-2"), "c_n/sqrt(n) off at n = 1000");

    let shrink = |name: &str, ds: &[freud_core::asymptotics::LimitDiagnostics]| {
        for d in ds {
            if d.deviations.len() < 2 {
                continue;
            }
            let (n0, first) = &d.deviations[0];
            let (n1, last) = d.deviations.last().unwrap();
            assert!(
                cx.lt(last, first),
                "{name}: {} deviation at {n1} not below its value at {n0}",
                d.name
            );
        }
    };

    // fast paths to 550/551: the even and odd subsequences carry different
    // mass corrections (at odd n the zero-case b_n collapses to c_n exactly),
    // so the tenfold-index comparison pairs indices of matching parity
    let ft550 = string_newton(&cx, 556, None, None).unwrap();
    let one = cx.one();
    let conn0 = khat_recurrence_lambda2zero(&cx, &ft550, &one, 551).unwrap();
    shrink("zero-case fast, odd", &limit_diagnostics(&cx, Some(&conn0), &ft550, &[55, 551]));
    shrink("zero-case fast, even", &limit_diagnostics(&cx, Some(&conn0), &ft550, &[56, 550]));

    // derivative-mass chain: b, sigma, alpha, delta, khat/k at 550/551 and
    // the odd-step a at half-index 275 (full index 549)
    let connp = connection_pos_fast(&cx, &ft550, &one, &one, 551).unwrap();
    shrink("pos-case fast, odd", &limit_diagnostics(&cx, Some(&connp), &ft550, &[55, 551]));
    shrink("pos-case fast, even", &limit_diagnostics(&cx, Some(&connp), &ft550, &[56, 550]));
    let ds_a = limit_diagnostics(&cx, Some(&connp), &ft550, &[27, 275]);
    let a_diag = ds_a
        .iter()
        .find(|d| d.name.starts_with("a_m"))
        .expect("odd-step a diagnostics");
    let (_, a_first) = &a_diag.deviations[0];
    let (_, a_last) = a_diag.deviations.last().unwrap();
    assert!(cx.lt(a_last, a_first), "odd-step a deviation not shrinking");

    // Gram-Schmidt-backed connection at 60
    let st = gram_schmidt_q(&cx, &params(&cx, &["1", "1"]), 60, None).unwrap();
    let ft60 = string_newton(&cx, 61, None, None).unwrap();
    shrink(
        "Gram-Schmidt-backed",
        &limit_diagnostics(&cx, st.conn.as_ref(), &ft60, &[6, 60]),
    );

    println!(
        "criterion 2 PASS: every normalized sequence's deviation shrinks tenfold-index \
         (fast chains at 550, odd-step a at full index 549, Gram-Schmidt-backed at 60); \
         |c_1000/sqrt(1000) - 1/(2 sqrt 3)| = {:.3e} (<= 1e-2)",
        cx.approx_f64(&dev_c)
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    let cx = cx();
    let ft = string_newton(&cx, 41, None, None).unwrap();

    // all masses zero: Q_n = P_n coefficientwise
    let st0 = gram_schmidt_q(&cx, &params(&cx, &["0"]), 40, None).unwrap();
    let mut worst0 = cx.zero();
    for n in 0..=40 {
        let p = p_coefficients(&cx, &ft, n);
        for (qa, pa) in st0.q[n].coeffs.iter().zip(&p.coeffs) {
            worst0 = worst0.max(&rel(&cx, qa, pa));
        }
    }
    assert!(le_f(&cx, &worst0, "1e-25"), "lambda = 0 coefficients drift");

    // chain vs Gram-Schmidt for khat, a, b
    let mut worst = cx.zero();
    for l0 in ["0.5", "1", "10"] {
        let st = gram_schmidt_q(&cx, &params(&cx, &[l0]), 40, None).unwrap();
        let l0v = cx.parse(l0);
        let conn = khat_recurrence_lambda2zero(&cx, &ft, &l0v, 40).unwrap();
        let gs = st.conn.as_ref().unwrap();
        for n in 0..=40 {
            worst = worst.max(&rel(&cx, &conn.khat[n], &gs.khat[n]));
            if n >= 1 {
                let (ca, ga) = (conn.a[n].as_ref().unwrap(), gs.a[n].as_ref().unwrap());
                let (cb, gb) = (conn.b[n].as_ref().unwrap(), gs.b[n].as_ref().unwrap());
                worst = worst.max(&rel(&cx, ca, ga)).max(&rel(&cx, cb, gb));
            }
        }
    }
    assert!(le_f(&cx, &worst, "1e-20"), "chain vs Gram-Schmidt drift");

    println!(
        "criterion 3 PASS: Q = P coefficientwise to {:.3e} (<= 1e-25) at lambda = 0; \
         khat/a/b chain vs Gram-Schmidt relative error {:.3e} (<= 1e-20) \
         for lambda_0 in {{0.5, 1, 10}}, n <= 40",
        cx.approx_f64(&worst0),
        cx.approx_f64(&worst)
    );
}

#[test]
fn criterion_4_identity_suite() {
    let cx = cx();
    let tol = cx.parse("1e-18");
    let ft = string_newton(&cx, 32, None, None).unwrap();
    let grids: [&[&str]; 6] = [
        &["0.5"],
        &["1"],
        &["10"],
        &["1", "0"],
        &["0", "1"],
        &["1", "1"],
    ];
    let mut saw_origin_verdict = false;
    let mut saw_trace_verdict = false;
    let mut worst = cx.zero();
    let mut checks = 0usize;
    for grid in grids {
        let pr = params(&cx, grid);
        let st = gram_schmidt_q(&cx, &pr, 30, None).unwrap();
        let conn = st.conn.as_ref().unwrap();
        let rep = identity_residuals(&cx, &st, conn, &ft, 30, &tol);
        for ch in &rep.checks {
            assert!(ch.pass, "lambdas {grid:?}: {} failed: {}", ch.name, ch.note);
            if ch.name.starts_with("origin recursion index form") {
                saw_origin_verdict = true;
            }
            if ch.name.starts_with("trace identity denominator form") {
                saw_trace_verdict = true;
            }
            if !ch.name.contains("form") {
                worst = worst.max(&ch.residual);
            }
            checks += 1;
        }
    }
    assert!(saw_origin_verdict, "origin-recursion discrimination verdict missing");
    assert!(saw_trace_verdict, "trace-identity discrimination verdict missing");

    // reciprocal-integral value at m = 1
    let st = gram_schmidt_q(&cx, &params(&cx, &["1"]), 4, None).unwrap();
    let v = q_over_x_integral(&cx, &st.q[3]);
    let coarse = cx.sub(&v, &cx.parse("-0.7281664")).abs();
    assert!(le_f(&cx, &coarse, "1e-5"));
    let fine = cx
        .sub(
            &v,
            &cx.parse("-0.72816687718490676371629190977369462527196018212041845481194"),
        )
        .abs();
    assert!(le_f(&cx, &fine, "1e-45"));

    println!(
        "criterion 4 PASS: {checks} identity checks over 6 mass grids all pass at 1e-18 \
         (worst residual {:.3e}); both discrimination verdicts reported \
         (origin recursion holds with a_{{2m-1}}, trace identity with sigma/b); \
         integral Q_3/x = -0.7281664 +- 1e-5 confirmed to {:.3e}",
        cx.approx_f64(&worst),
        cx.approx_f64(&fine)
    );
}

#[test]
fn criterion_5_zeros_and_interlacing() {
    let cx = cx();
    let tol = cx.parse("1e-30");
    let ft = string_newton(&cx, 62, None, None).unwrap();

    // even degrees, no derivative mass: strict interlacing, inward phase
    let mut reports = 0usize;
    for l0 in ["0.5", "1", "10"] {
        let st = gram_schmidt_q(&cx, &params(&cx, &[l0]), 60, None).unwrap();
        for n in (4..=60usize).step_by(2) {
            let rep = interlacing_report(&cx, &st, &ft, n, &tol).unwrap();
            assert!(rep.all_real, "lambda_0 = {l0}, n = {n}: not all zeros real");
            assert_eq!(rep.zeros.len(), n);
            for w in rep.zeros.windows(2) {
                assert!(cx.lt(&w[0], &w[1]), "zeros not simple at n = {n}");
            }
            let verdicts = rep.interlace.as_ref().unwrap();
            assert!(
                verdicts.iter().all(|v| *v == PairVerdict::Strict),
                "lambda_0 = {l0}, n = {n}: non-strict pair"
            );
            // phase: the first positive Q-zero sits in (0, x_1) and the
            // outermost Q-zero sits inside the outermost P-zero. The written
            // proof places the extra zero beyond the largest P-zero; the
            // computed tables land it inside, next to the origin, and the
            // strict-interlacing conclusion is unaffected.
            let refz = rep.reference.as_ref().unwrap();
            let (q0, p0) = (&rep.zeros[n / 2], &refz[n / 2]);
            assert!(cx.lt(&cx.zero(), q0) && cx.lt(q0, p0), "inner phase at n = {n}");
            let (qm, pm) = (rep.zeros.last().unwrap(), refz.last().unwrap());
            assert!(cx.lt(qm, pm), "outermost pair order at n = {n}");
            reports += 1;
        }
    }

    // odd degrees, no derivative mass: Q coincides with P
    let st1 = gram_schmidt_q(&cx, &params(&cx, &["1"]), 31, None).unwrap();
    let mut worst_odd = cx.zero();
    for n in (3..=31usize).step_by(2) {
        let p = p_coefficients(&cx, &ft, n);
        for (qa, pa) in st1.q[n].coeffs.iter().zip(&p.coeffs) {
            worst_odd = worst_odd.max(&rel(&cx, qa, pa));
        }
    }
    assert!(le_f(&cx, &worst_odd, "1e-25"), "odd-degree degeneracy drift");

    // derivative mass on: even interlacing to 40, normalized x^2 recurrence
    let st11 = gram_schmidt_q(&cx, &params(&cx, &["1", "1"]), 40, None).unwrap();
    for n in (4..=40usize).step_by(2) {
        let rep = interlacing_report(&cx, &st11, &ft, n, &tol).unwrap();
        assert!(rep.all_real && rep.interlace.unwrap().iter().all(|v| *v == PairVerdict::Strict));
    }
    let tol20 = cx.parse("1e-20");
    let repx = normalized_x2_recurrence_check(&cx, &st11, &ft, 20, &tol20).unwrap();
    for ch in &repx.checks {
        assert!(ch.pass, "{} failed: {}", ch.name, ch.note);
    }

    println!(
        "criterion 5 PASS: {reports} even-degree reports (n <= 60, lambda_0 in {{0.5,1,10}}) \
         all certified real, simple, strictly interlacing; phase note: the extra Q-zero \
         lands in (0, x_1) with the outermost Q-zero inside the outermost P-zero, \
         complementing the written 'one zero beyond the largest P-zero' form; \
         odd-degree coincidence {:.3e} (<= 1e-25); derivative-mass interlacing to n = 40 \
         strict; normalized x^2 recurrence residuals <= 1e-20 to n = 20",
        cx.approx_f64(&worst_odd)
    );
}

#[test]
fn criterion_6_asymptotic_targets() {
    let cx = cx();

    // constancy of the structural target on the 50-point grid
    let tol = cx.parse("1e-28");
    let mut worst = cx.zero();
    for r in 0..4usize {
        for k in 0..50usize {
            let x = cx.add(&cx.parse("1.08"), &cx.mul(&cx.parse("0.1"), &cx.from_u64(k as u64)));
            let t = ratio_target(&cx, &cx.creal(&x), r).unwrap();
            let d = cx.cabs(&cx.csub(&t, &cx.creal(&cx.one())));
            worst = worst.max(&d);
        }
    }
    assert!(cx.le(&worst, &tol), "constancy identity broken");

    // conformal-map invariants at 4 ulps
    let eps = cx.pow2(-254);
    let pts = [
        ("1.5", "0"), ("-2.75", "0"), ("1.0625", "0"), ("8", "0"),
        ("1", "1"), ("2", "0.5"), ("0.5", "2"), ("-1.25", "-0.25"),
        ("0", "0.125"), ("-3", "4"), ("0.25", "-1.5"), ("10", "-0.03125"),
    ];
    for (re, im) in pts {
        let z = Complex {
            re: cx.parse(re),
            im: cx.parse(im),
        };
        let p = phi(&cx, &z).unwrap();
        assert!(cx.lt(&cx.one(), &cx.cabs(&p)), "|phi| <= 1 at {re}+{im}i");
        let s = cx.cadd(&p, &cx.cdiv(&cx.creal(&cx.one()), &p));
        let zz = Complex {
            re: cx.mul(&cx.from_u64(2), &z.re),
            im: cx.mul(&cx.from_u64(2), &z.im),
        };
        let d = cx.cabs(&cx.csub(&s, &zz));
        let scale = cx.cabs(&zz).max(&cx.one());
        assert!(cx.le(&d, &cx.mul(&eps, &scale)), "phi + 1/phi != 2z at {re}+{im}i");
    }

    // one-step P ratio against 12^{1/4}/phi(u)
    let ft = string_newton(&cx, 512, None, None).unwrap();
    let x = creal(&cx, "1.5");
    let target = p_ratio_limit_target(&cx, &x).unwrap();
    let mut errs = Vec::new();
    for n in [32usize, 64, 128, 256, 512] {
        let e = p_ratio_empirical(&cx, &ft, n, &x).unwrap();
        errs.push(cx.cabs(&cx.csub(&e, &target)));
    }
    let violations = errs.windows(2).filter(|w| !cx.lt(&w[1], &w[0])).count();
    assert!(violations <= 1, "{violations} non-monotone steps in the P-ratio error");
    assert!(le_f(&cx, errs.last().unwrap(), "0.02"), "P-ratio error at n = 512");

    println!(
        "criterion 6 PASS: |ratio_target - 1| <= {:.3e} (<= 1e-28) on 200 grid points; \
         phi invariants within 4 ulps at 12 points; P-ratio error at n = 512 is {:.3e} \
         (<= 0.02) with {violations} non-monotone step(s) from n = 32",
        cx.approx_f64(&worst),
        cx.approx_f64(errs.last().unwrap())
    );
}

#[test]
fn criterion_7_ratio_convergence_theorem_cases() {
    let cx = cx();
    let ft = string_newton(&cx, 256, None, None).unwrap();
    let x = creal(&cx, "1.5");
    let one = cx.one();

    let conn0 = khat_recurrence_lambda2zero(&cx, &ft, &one, 256).unwrap();
    let pr0 = params(&cx, &["1"]);
    let e16 = empirical_ratio_conn(&cx, 16, &x, &pr0, &conn0, &ft).unwrap();
    let e256 = empirical_ratio_conn(&cx, 256, &x, &pr0, &conn0, &ft).unwrap();
    assert!(cx.lt(&e256.abs_error, &e16.abs_error) && le_f(&cx, &e256.abs_error, "0.05"));
    let r0 = (cx.approx_f64(&e16.abs_error), cx.approx_f64(&e256.abs_error));

    let connp = connection_pos_fast(&cx, &ft, &one, &one, 256).unwrap();
    let pr1 = params(&cx, &["1", "1"]);
    let e16 = empirical_ratio_conn(&cx, 16, &x, &pr1, &connp, &ft).unwrap();
    let e256 = empirical_ratio_conn(&cx, 256, &x, &pr1, &connp, &ft).unwrap();
    assert!(cx.lt(&e256.abs_error, &e16.abs_error) && le_f(&cx, &e256.abs_error, "0.05"));

    println!(
        "criterion 7 PASS: |P/Q - 1| at scaled x = 1.5 falls from {:.3e} (n = 16) to \
         {:.3e} (n = 256, <= 0.05) with one mass, and from {:.3e} to {:.3e} with a \
         derivative mass",
        r0.0,
        r0.1,
        cx.approx_f64(&e16.abs_error),
        cx.approx_f64(&e256.abs_error)
    );
}

#[test]
fn criterion_8_prediction_experiment_conjecture() {
    let cx = cx();
    let pr = params(&cx, &["1", "1", "1"]);
    let ns = [16usize, 32, 64, 96, 128, 160, 200];
    let xs = [creal(&cx, "1.5"), creal(&cx, "3")];
    let (samples, rep) = prediction_experiment(&cx, &pr, &ns, &xs).unwrap();
    assert_eq!(samples.len(), ns.len() * xs.len());
    assert_eq!(rep.checks.len(), xs.len());
    for ch in &rep.checks {
        assert!(ch.name.contains("conjecture"), "experiment must stay labeled");
        assert!(ch.pass, "deviation trend failed: {}", ch.note);
    }
    // frozen anchors for the r = 2 run at x = 1.5
    let first = &samples[0];
    let last = &samples[ns.len() - 1];
    assert!(le_f(&cx, &cx.sub(&first.abs_error, &cx.parse("0.07584")).abs(), "1e-4"));
    assert!(le_f(&cx, &last.abs_error, "0.008"));

    println!(
        "criterion 8 PASS (conjecture, not a theorem): r = 2 deviations shrink over \
         n in {{16..200}} at x = 1.5 ({:.3e} -> {:.3e}) and x = 3; trend observation only",
        cx.approx_f64(&first.abs_error),
        cx.approx_f64(&last.abs_error)
    );
}

#[test]
fn criterion_9_cli_determinism() {
    let run = |fmt: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_freud-lab"))
            .args([
                "verify", "--n-max", "10", "--lambdas", "1", "--tol", "1e-18", "--format", fmt,
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "verify exited nonzero");
        out.stdout
    };
    for fmt in ["json", "csv"] {
        let a = run(fmt);
        let b = run(fmt);
        assert_eq!(a, b, "{fmt} output not byte-identical across reruns");
        assert!(!a.is_empty());
    }
    println!("criterion 9 PASS: verify reruns byte-identical in both formats");
}
