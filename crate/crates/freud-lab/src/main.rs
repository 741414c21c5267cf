//! Command-line laboratory for monic orthogonal polynomials of exp(-x^4)
//! and their Sobolev variants with derivative point masses at the origin.
//!
//! Every command builds its tables from scratch at the requested precision
//! and emits one table (CSV or JSON) whose numeric cells are decimal strings
//! at working precision. Exit codes: 0 success, 2 bad configuration,
//! 3 numeric failure (precision cap or iteration budget), 4 verification
//! failure.

mod emit;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use freud_core::asymptotics::{
    self, empirical_ratio, empirical_ratio_conn, limit_diagnostics, prediction_experiment,
    quartic_factorization_check,
};
use freud_core::freud::{self, FreudTable};
use freud_core::numerics::{Complex, Ctx, Real};
use freud_core::report::VerifyReport;
use freud_core::sobolev::{
    connection_pos_fast, gram_schmidt_q, khat_recurrence_lambda2zero, ConnectionTable,
    SobolevParams,
};
use freud_core::zeros::{interlacing_report, normalized_x2_recurrence_check};
use freud_core::Error;

use emit::{write_out, Format, Table};

#[derive(Parser)]
#[command(
    name = "freud-lab",
    about = "Recurrence tables, Sobolev connection coefficients, certified zeros, \
             identity verification, and ratio asymptotics for the weight exp(-x^4) \
             with derivative point masses at the origin"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recurrence coefficients c_n and squared norms k_n
    Coeffs(Common),
    /// Sobolev squared norms, connection coefficients, and Q coefficients
    Sobolev(Common),
    /// Certified positive zeros of Q_n against P_n with interlacing verdicts
    Zeros(Common),
    /// Normalized coefficient sequences against their limit constants
    Limits(Common),
    /// Empirical P_n/Q_n at scaled points against the constant target
    Ratio(Common),
    /// Identity suite; exits 4 when any check fails
    Verify(Common),
    /// Ratio-deviation experiment for two or more derivative masses (conjecture)
    Predict(Common),
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Coeffs(_) => "coeffs",
            Cmd::Sobolev(_) => "sobolev",
            Cmd::Zeros(_) => "zeros",
            Cmd::Limits(_) => "limits",
            Cmd::Ratio(_) => "ratio",
            Cmd::Verify(_) => "verify",
            Cmd::Predict(_) => "predict",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Forward,
    Newton,
    Both,
}

impl MethodArg {
    fn as_str(self) -> &'static str {
        match self {
            MethodArg::Forward => "forward",
            MethodArg::Newton => "newton",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Largest table index (for zeros: the degree under test)
    #[arg(long = "n-max", default_value_t = 20)]
    n_max: usize,

    /// Masses lambda_0,lambda_1,... on f(0)g(0), f'(0)g'(0), ... in order
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<String>>,

    /// Working precision in bits
    #[arg(long = "prec-bits", default_value_t = 256)]
    prec_bits: usize,

    /// Engine for the plain recurrence table
    #[arg(long, value_enum, default_value_t = MethodArg::Newton)]
    method: MethodArg,

    /// Residual tolerance for verification verdicts
    #[arg(long, default_value = "1e-20")]
    tol: String,

    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Output path; "-" writes to stdout
    #[arg(long, default_value = "-")]
    out: String,

    /// Evaluation points, comma-separated decimals
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<String>>,

    /// Degrees, comma-separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,

    /// Number of derivative masses for predict (lambda count minus one)
    #[arg(long)]
    r: Option<usize>,
}

struct Fail {
    code: u8,
    msg: String,
}

fn bad(msg: impl Into<String>) -> Fail {
    Fail {
        code: 2,
        msg: msg.into(),
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::Precision { .. } | Error::Iteration { .. } => 3,
            _ => 2,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

struct Setup {
    cx: Ctx,
    params: SobolevParams,
    tol: Real,
    format: Format,
}

fn parse_real(cx: &Ctx, s: &str, what: &str) -> Result<Real, Fail> {
    let v = cx.parse(s);
    if v.is_nan() || v.is_inf() {
        return Err(bad(format!("{what}: cannot parse {s:?} as a finite decimal")));
    }
    Ok(v)
}

fn setup(c: &Common) -> Result<Setup, Fail> {
    if c.prec_bits < 64 {
        return Err(bad("--prec-bits must be at least 64"));
    }
    if c.n_max < 1 {
        return Err(bad("--n-max must be at least 1"));
    }
    let cx = Ctx::new(c.prec_bits);
    let raw: Vec<String> = c.lambdas.clone().unwrap_or_else(|| vec!["0".to_owned()]);
    let mut lambdas = Vec::with_capacity(raw.len());
    for s in &raw {
        lambdas.push(parse_real(&cx, s, "--lambdas")?);
    }
    let params = SobolevParams::new(lambdas).map_err(|e| bad(e.to_string()))?;
    let tol = parse_real(&cx, &c.tol, "--tol")?;
    if !cx.lt(&cx.zero(), &tol) {
        return Err(bad("--tol must be positive"));
    }
    let format = match c.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    Ok(Setup {
        cx,
        params,
        tol,
        format,
    })
}

fn echo_meta(t: &mut Table, cmd: &str, c: &Common, eff_n_max: usize) {
    t.meta("command", cmd);
    t.meta("n_max", eff_n_max.to_string());
    t.meta(
        "lambdas",
        c.lambdas
            .clone()
            .unwrap_or_else(|| vec!["0".to_owned()])
            .join(","),
    );
    t.meta("prec_bits", c.prec_bits.to_string());
    t.meta("method", c.method.as_str());
    t.meta("tol", c.tol.clone());
}

fn dec(cx: &Ctx, v: &Real) -> Option<String> {
    Some(cx.to_decimal(v))
}

fn dec_opt(cx: &Ctx, v: &Option<Real>) -> Option<String> {
    v.as_ref().map(|x| cx.to_decimal(x))
}

fn emit_table(c: &Common, t: &Table, format: Format) -> Result<(), Fail> {
    write_out(&c.out, &t.render(format)).map_err(|e| Fail {
        code: 2,
        msg: format!("cannot write {}: {e}", c.out),
    })
}

fn run(cmd: Cmd) -> Result<u8, Fail> {
    let name = cmd.name();
    match cmd {
        Cmd::Coeffs(c) => run_coeffs(name, c),
        Cmd::Sobolev(c) => run_sobolev(name, c),
        Cmd::Zeros(c) => run_zeros(name, c),
        Cmd::Limits(c) => run_limits(name, c),
        Cmd::Ratio(c) => run_ratio(name, c),
        Cmd::Verify(c) => run_verify(name, c),
        Cmd::Predict(c) => run_predict(name, c),
    }
}

fn freud_by_method(cx: &Ctx, c: &Common, n_max: usize) -> Result<(FreudTable, Vec<bool>), Fail> {
    match c.method {
        MethodArg::Forward => {
            let t = freud::string_forward(cx, n_max);
            let trusted = t.trusted.clone();
            Ok((t, trusted))
        }
        MethodArg::Newton => {
            let t = freud::string_newton(cx, n_max, None, None)?;
            let trusted = t.trusted.clone();
            Ok((t, trusted))
        }
        MethodArg::Both => {
            let newton = freud::string_newton(cx, n_max, None, None)?;
            let fwd = freud::string_forward(cx, n_max);
            let gate = cx.pow2(-((cx.prec() / 2) as i32));
            let mut trusted = vec![true; n_max + 1];
            for n in 1..=n_max {
                let d = cx.sub(&fwd.c[n], &newton.c[n]).abs();
                let scale = newton.c[n].abs().max(&cx.one());
                let agree = cx.le(&d, &cx.mul(&gate, &scale));
                trusted[n] = trusted[n - 1] && fwd.trusted[n] && agree;
            }
            Ok((newton, trusted))
        }
    }
}

fn run_coeffs(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    let (table, trusted) = freud_by_method(cx, &c, c.n_max)?;
    let mut t = Table::new(&["n", "c_n", "k_n", "residual", "trusted"]);
    echo_meta(&mut t, name, &c, c.n_max);
    t.meta("engine_precision_bits", table.precision_bits.to_string());
    t.meta(
        "max_rel_residual",
        cx.to_decimal(&table.max_rel_residual(cx)),
    );
    for n in 0..=c.n_max {
        t.row(vec![
            Some(n.to_string()),
            dec(cx, &table.c[n]),
            dec(cx, &table.k[n]),
            dec_opt(cx, &table.residual[n]),
            Some(trusted[n].to_string()),
        ]);
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}

fn run_sobolev(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    let st = gram_schmidt_q(cx, &s.params, c.n_max, Some(&s.tol))?;
    let mut cols: Vec<String> = ["n", "khat_n", "a_n", "b_n", "alpha_n", "sigma_n", "delta_n"]
        .iter()
        .map(|s| (*s).to_owned())
        .collect();
    for j in 0..=c.n_max {
        cols.push(format!("coeff_{j}"));
    }
    let col_refs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
    let mut t = Table::new(&col_refs);
    echo_meta(&mut t, name, &c, c.n_max);
    t.meta(
        "case",
        st.conn.as_ref().map(|k| k.case.as_str()).unwrap_or("none"),
    );
    t.meta("gs_bits", st.gs_bits.to_string());
    for n in 0..=c.n_max {
        let mut row = vec![Some(n.to_string()), dec(cx, &st.khat[n])];
        match &st.conn {
            Some(conn) => {
                row.push(dec_opt(cx, &conn.a[n]));
                row.push(dec_opt(cx, &conn.b[n]));
                row.push(dec_opt(cx, &conn.alpha[n]));
                row.push(dec_opt(cx, &conn.sigma[n]));
                row.push(dec_opt(cx, &conn.delta[n]));
            }
            None => row.extend(std::iter::repeat_n(None, 5)),
        }
        for j in 0..=c.n_max {
            row.push(st.q[n].coeffs.get(j).and_then(|v| dec(cx, v)));
        }
        t.row(row);
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}

fn run_zeros(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    if c.n_max < 3 {
        return Err(bad("zeros needs --n-max at least 3"));
    }
    let st = gram_schmidt_q(cx, &s.params, c.n_max, None)?;
    let ft = freud::string_newton(cx, c.n_max + 1, None, None)?;
    let rep = interlacing_report(cx, &st, &ft, c.n_max, &s.tol)?;
    let mut t = Table::new(&["k", "q_zero", "q_radius", "p_zero", "verdict"]);
    echo_meta(&mut t, name, &c, c.n_max);
    t.meta("all_real", rep.all_real.to_string());
    t.meta(
        "case",
        st.conn.as_ref().map(|k| k.case.as_str()).unwrap_or("none"),
    );
    t.meta("positive_zero_count", rep.zeros.len().to_string());
    let reference = rep.reference.as_deref().unwrap_or(&[]);
    let verdicts = rep.interlace.as_deref().unwrap_or(&[]);
    // verdicts cover the ascending positive pairs, i.e. the tail rows
    let qoff = rep.zeros.len().saturating_sub(verdicts.len());
    let rows = rep.zeros.len().max(reference.len()).max(verdicts.len());
    for i in 0..rows {
        t.row(vec![
            Some((i + 1).to_string()),
            rep.zeros.get(i).and_then(|v| dec(cx, v)),
            rep.radii.get(i).and_then(|v| dec(cx, v)),
            reference.get(i).and_then(|v| dec(cx, v)),
            i.checked_sub(qoff)
                .and_then(|k| verdicts.get(k))
                .map(|v| v.as_str().to_owned()),
        ]);
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}

/// Attach the connection table matching the mass pattern, when one exists.
fn connection_for(
    cx: &Ctx,
    params: &SobolevParams,
    ft: &FreudTable,
    n_max: usize,
) -> Result<Option<ConnectionTable>, Fail> {
    if params.derivative_masses_zero() {
        let l0 = params
            .lambdas
            .first()
            .cloned()
            .unwrap_or_else(|| cx.zero());
        Ok(Some(khat_recurrence_lambda2zero(cx, ft, &l0, n_max)?))
    } else if params.single_derivative_mass() {
        let l0 = params.lambdas[0].clone();
        let l1 = params.lambdas[1].clone();
        Ok(Some(connection_pos_fast(cx, ft, &l0, &l1, n_max)?))
    } else {
        Ok(None)
    }
}

fn run_limits(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    let ns: Vec<usize> = c.n.clone().unwrap_or_else(|| vec![16, 32, 64, 128, 256]);
    if ns.is_empty() {
        return Err(bad("--n must list at least one index"));
    }
    let eff = c.n_max.max(*ns.iter().max().unwrap());
    let ft = freud::string_newton(cx, eff + 1, None, None)?;
    let conn = connection_for(cx, &s.params, &ft, eff)?;
    let ds = limit_diagnostics(cx, conn.as_ref(), &ft, &ns);
    let mut t = Table::new(&["sequence", "n", "value", "limit", "deviation"]);
    echo_meta(&mut t, name, &c, eff);
    let quartic = quartic_factorization_check();
    t.meta(
        "quartic_factorization",
        if quartic.all_pass() {
            "exact: coefficients match (sqrt(3) t - 1)^4 in Z[sqrt(3)]; \
             only real root t = 1/sqrt(3)"
        } else {
            "FAILED"
        },
    );
    for d in &ds {
        for ((n, value), (_, dev)) in d.samples.iter().zip(&d.deviations) {
            t.row(vec![
                Some(d.name.clone()),
                Some(n.to_string()),
                dec(cx, value),
                dec(cx, &d.limit),
                dec(cx, dev),
            ]);
        }
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}

fn ratio_columns() -> [&'static str; 7] {
    [
        "x",
        "n",
        "empirical_re",
        "empirical_im",
        "target_re",
        "target_im",
        "abs_error",
    ]
}

fn push_sample(cx: &Ctx, t: &mut Table, s: &asymptotics::RatioSample) {
    t.row(vec![
        dec(cx, &s.x.re),
        Some(s.n.to_string()),
        dec(cx, &s.empirical.re),
        dec(cx, &s.empirical.im),
        dec(cx, &s.target.re),
        dec(cx, &s.target.im),
        dec(cx, &s.abs_error),
    ]);
}

fn parse_points(cx: &Ctx, c: &Common, default: &[&str]) -> Result<Vec<Complex>, Fail> {
    let raw: Vec<String> = c
        .x
        .clone()
        .unwrap_or_else(|| default.iter().map(|s| (*s).to_owned()).collect());
    let mut out = Vec::with_capacity(raw.len());
    for s in &raw {
        out.push(cx.creal(&parse_real(cx, s, "--x")?));
    }
    Ok(out)
}

fn run_ratio(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    let ns: Vec<usize> = c.n.clone().unwrap_or_else(|| vec![16, 32, 64, 128, 256]);
    let xs = parse_points(cx, &c, &["1.2", "1.5", "2", "3"])?;
    if ns.is_empty() || xs.is_empty() {
        return Err(bad("--n and --x must each list at least one entry"));
    }
    let eff = *ns.iter().max().unwrap();
    let ft = freud::string_newton(cx, eff, None, None)?;
    let conn = connection_for(cx, &s.params, &ft, eff)?;
    let st = match conn {
        Some(_) => None,
        None => Some(gram_schmidt_q(cx, &s.params, eff, None)?),
    };
    let mut t = Table::new(&ratio_columns());
    echo_meta(&mut t, name, &c, eff);
    for x in &xs {
        for &n in &ns {
            let sample = match (&conn, &st) {
                (Some(conn), _) => empirical_ratio_conn(cx, n, x, &s.params, conn, &ft)?,
                (None, Some(st)) => empirical_ratio(cx, n, x, st, &ft)?,
                (None, None) => unreachable!(),
            };
            push_sample(cx, &mut t, &sample);
        }
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}

fn report_rows(cx: &Ctx, t: &mut Table, rep: &VerifyReport) {
    for ch in &rep.checks {
        t.row(vec![
            Some(ch.name.clone()),
            ch.index.map(|i| i.to_string()),
            dec(cx, &ch.residual),
            dec(cx, &ch.tol),
            Some(ch.pass.to_string()),
            Some(ch.note.clone()),
        ]);
    }
}

fn run_verify(name: &'static str, c: Common) -> Result<u8, Fail> {
    let s = setup(&c)?;
    let cx = &s.cx;
    let st = gram_schmidt_q(cx, &s.params, c.n_max, None)?;
    let Some(conn) = st.conn.as_ref() else {
        return Err(bad(
            "the identity suite covers at most one derivative mass (r <= 1)",
        ));
    };
    let ft = freud::string_newton(cx, c.n_max + 2, None, None)?;
    let mut rep = freud_core::sobolev::identity_residuals(cx, &st, conn, &ft, c.n_max, &s.tol);
    if s.params.single_derivative_mass() {
        let nx = c.n_max.min(20);
        rep.extend(normalized_x2_recurrence_check(cx, &st, &ft, nx, &s.tol)?);
    }
    rep.extend(quartic_factorization_check());
    let mut t = Table::new(&["name", "index", "residual", "tol", "pass", "note"]);
    echo_meta(&mut t, name, &c, c.n_max);
    let failed = rep.failed();
    t.meta("checks_total", rep.checks.len().to_string());
    t.meta("checks_failed", failed.to_string());
    report_rows(cx, &mut t, &rep);
    emit_table(&c, &t, s.format)?;
    Ok(if failed == 0 { 0 } else { 4 })
}

fn run_predict(name: &'static str, mut c: Common) -> Result<u8, Fail> {
    // resolve the mass list against --r before the common setup
    let lam = match (c.r, c.lambdas.take()) {
        (Some(r), Some(l)) => {
            if l.len() != r + 1 {
                return Err(bad(format!(
                    "--r {} needs exactly {} masses, got {}",
                    r,
                    r + 1,
                    l.len()
                )));
            }
            l
        }
        (Some(r), None) => vec!["1".to_owned(); r + 1],
        (None, Some(l)) => l,
        (None, None) => vec!["1".to_owned(); 3],
    };
    c.lambdas = Some(lam);
    let s = setup(&c)?;
    let cx = &s.cx;
    if s.params.r() < 2 {
        return Err(bad("predict needs at least two derivative masses (r >= 2)"));
    }
    if s.params
        .lambdas
        .iter()
        .any(|l| l.is_zero() || !l.is_positive())
    {
        return Err(bad("predict needs every mass strictly positive"));
    }
    let ns: Vec<usize> = c.n.clone().unwrap_or_else(|| vec![16, 32, 64, 128, 256]);
    let xs = parse_points(cx, &c, &["1.2", "1.5", "2", "3"])?;
    if ns.is_empty() || xs.is_empty() {
        return Err(bad("--n and --x must each list at least one entry"));
    }
    let (samples, rep) = prediction_experiment(cx, &s.params, &ns, &xs)?;
    let mut t = Table::new(&ratio_columns());
    echo_meta(&mut t, name, &c, *ns.iter().max().unwrap());
    t.meta(
        "label",
        "conjecture experiment: trend observations only, no theorem backs this case",
    );
    for (i, ch) in rep.checks.iter().enumerate() {
        t.meta(
            &format!("trend_{i}"),
            format!("{}: {}", if ch.pass { "shrinks" } else { "does not shrink" }, ch.note),
        );
    }
    for sample in &samples {
        push_sample(cx, &mut t, sample);
    }
    emit_table(&c, &t, s.format)?;
    Ok(0)
}
