//! Subcommand implementations. Each produces both a JSON value (sorted keys,
//! index-ordered arrays, byte-stable) and a human-readable rendering; the
//! binary picks one according to the output flags.

use crate::{aexpr, checks, json, render, session::CurveSpec, CliResult, Failure};
use drinfeld_core::anderson::{AndersonModule, CoeffKind, CoeffSeries, TauPoly};
use drinfeld_core::curve::class_number;
use drinfeld_core::shtuka::{find_v, shtuka_data, TensorBasis};
use drinfeld_core::zeta::{
    power_sum_bruteforce, power_sum_closed, script_g, zeta_vector, AElem,
};
use drinfeld_core::{KContext, KElem};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct CmdOut {
    pub value: Value,
    pub pretty: String,
}

fn parse_b(ctx: &KContext, expr: &str) -> CliResult<AElem> {
    aexpr::parse_a_expr(ctx, expr)
        .map_err(|e| Failure::Usage(format!("invalid --b expression {expr:?}: {e}")))
}

fn require_rank(ctx: &KContext, n: usize) -> CliResult<()> {
    if n < 1 || n > ctx.q() - 1 {
        return Err(Failure::Usage(format!(
            "--n {n} is out of range: this curve supports 1 <= n <= {}",
            ctx.q() - 1
        )));
    }
    Ok(())
}

fn build_basis(ctx: &KContext, n: usize) -> CliResult<TensorBasis> {
    let v = find_v(ctx)?;
    let sd = shtuka_data(ctx, &v)?;
    Ok(TensorBasis::build(ctx, &sd, n)?)
}

// --- curve-info -------------------------------------------------------------

/// Reports q, the divisor class number, and nonsingularity. A singular curve
/// is reported (not errored) and classified as a check failure by the caller.
pub fn curve_info(spec: &CurveSpec) -> CliResult<(CmdOut, bool)> {
    let fd = spec.field()?;
    let coeffs = spec.coefficients(&fd)?;
    match drinfeld_core::KContext::new(&fd, coeffs) {
        Ok(ctx) => {
            let h = class_number(&ctx);
            let value = json!({ "q": ctx.q(), "h": h, "nonsingular": true });
            let pretty = format!(
                "q = {}\nclass number h = {}\nnonsingular: yes\n",
                ctx.q(),
                h
            );
            Ok((CmdOut { value, pretty }, true))
        }
        Err(drinfeld_core::Error::SingularCurve) => {
            let value = json!({ "q": fd.q(), "h": Value::Null, "nonsingular": false });
            let pretty = format!("q = {}\nnonsingular: no\n", fd.q());
            Ok((CmdOut { value, pretty }, false))
        }
        Err(e) => Err(Failure::from(e)),
    }
}

// --- shtuka ------------------------------------------------------------------

pub fn shtuka(ctx: &KContext) -> CliResult<CmdOut> {
    let v = find_v(ctx)?;
    let sd = shtuka_data(ctx, &v)?;
    let fd = ctx.fd();
    let value = json!({
        "V": json::point_to_json(fd, &sd.v),
        "f": json::curvefunc_to_json(fd, &sd.f),
    });
    let pretty = format!(
        "V = {}\nf = {}\n",
        render::point(ctx, &sd.v),
        render::curvefunc(ctx, &sd.f)
    );
    Ok(CmdOut { value, pretty })
}

// --- basis --------------------------------------------------------------------

pub fn basis(ctx: &KContext, n: usize) -> CliResult<CmdOut> {
    require_rank(ctx, n)?;
    let basis = build_basis(ctx, n)?;
    let fd = ctx.fd();

    // The final h-side constant b_n generally lies only in the perfect
    // closure: what is exact in K is b_n^q (stored in the last slot of b).
    // Emit the first n-1 constants, always emit b_n^q, and emit b_n itself
    // only when the q-th root exists in K.
    let b_head = &basis.b[..n - 1];
    let bn_pow_q = basis.b[n - 1].clone();
    let bn = basis.bn_root(ctx).ok();

    let value = json!({
        "V": json::point_to_json(fd, &basis.v),
        "f": json::curvefunc_to_json(fd, &basis.f),
        "g": Value::Array(basis.g.iter().map(|x| json::curvefunc_to_json(fd, x)).collect()),
        "h": Value::Array(basis.h.iter().map(|x| json::curvefunc_to_json(fd, x)).collect()),
        "a": json::kelem_vec_to_json(fd, &basis.a),
        "b": json::kelem_vec_to_json(fd, b_head),
        "bnPowQ": json::kelem_to_json(fd, &bn_pow_q),
        "bn": match &bn {
            Some(x) => json::kelem_to_json(fd, x),
            None => Value::Null,
        },
        "y": json::kelem_vec_to_json(fd, &basis.y),
        "z": json::kelem_vec_to_json(fd, &basis.z),
    });

    let mut pretty = format!("V = {}\nf = {}\n", render::point(ctx, &basis.v), render::curvefunc(ctx, &basis.f));
    for (i, g) in basis.g.iter().enumerate() {
        pretty.push_str(&format!("g_{} = {}\n", i + 1, render::curvefunc(ctx, g)));
    }
    for (i, h) in basis.h.iter().enumerate() {
        pretty.push_str(&format!("h_{} = {}\n", i + 1, render::curvefunc(ctx, h)));
    }
    for (i, x) in basis.a.iter().enumerate() {
        pretty.push_str(&format!("a_{} = {}\n", i + 1, x.render(ctx)));
    }
    for (i, x) in b_head.iter().enumerate() {
        pretty.push_str(&format!("b_{} = {}\n", i + 1, x.render(ctx)));
    }
    pretty.push_str(&format!("b_{}^q = {}\n", n, bn_pow_q.render(ctx)));
    match &bn {
        Some(x) => pretty.push_str(&format!("b_{} = {}\n", n, x.render(ctx))),
        None => pretty.push_str(&format!(
            "b_{} lies in the perfect closure only (no q-th root in K)\n",
            n
        )),
    }
    for (i, x) in basis.y.iter().enumerate() {
        pretty.push_str(&format!("y_{} = {}\n", i + 1, x.render(ctx)));
    }
    for (i, x) in basis.z.iter().enumerate() {
        pretty.push_str(&format!("z_{} = {}\n", i + 1, x.render(ctx)));
    }
    Ok(CmdOut { value, pretty })
}

// --- module ---------------------------------------------------------------------

fn taupoly_to_json(ctx: &KContext, p: &TauPoly) -> Value {
    let fd = ctx.fd();
    Value::Array(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(j, m)| json!({ "tau": j, "matrix": json::kmat_to_json(fd, m) }))
            .collect(),
    )
}

pub fn module(ctx: &KContext, n: usize) -> CliResult<CmdOut> {
    require_rank(ctx, n)?;
    let basis = build_basis(ctx, n)?;
    let module = AndersonModule::build(ctx, &basis)?;
    let fd = ctx.fd();
    let value = json!({
        "n": n,
        "dTheta": json::kmat_to_json(fd, &module.d_theta),
        "dEta": json::kmat_to_json(fd, &module.d_eta),
        "eTheta": json::kmat_to_json(fd, &module.e_theta),
        "eEta": json::kmat_to_json(fd, &module.e_eta),
        "rhoT": taupoly_to_json(ctx, &module.rho_t),
        "rhoY": taupoly_to_json(ctx, &module.rho_y),
    });
    let mut pretty = format!("dimension n = {n}\n");
    pretty.push_str(&render::taupoly(ctx, &module.rho_t, "rho_t"));
    pretty.push_str(&render::taupoly(ctx, &module.rho_y, "rho_y"));
    Ok(CmdOut { value, pretty })
}

// --- exp / log --------------------------------------------------------------------

fn series_out(ctx: &KContext, series: &CoeffSeries) -> CmdOut {
    let fd = ctx.fd();
    let name = match series.kind {
        CoeffKind::Exp => "Q",
        CoeffKind::Log => "P",
    };
    let value = Value::Array(
        series
            .mats
            .iter()
            .enumerate()
            .map(|(i, m)| json!({ "i": i, "matrix": json::kmat_to_json(fd, m) }))
            .collect(),
    );
    let mut pretty = String::new();
    for (i, m) in series.mats.iter().enumerate() {
        pretty.push_str(&format!("{name}_{i}:\n"));
        pretty.push_str(&render::kmat(ctx, m, "  "));
    }
    CmdOut { value, pretty }
}

pub fn exp(ctx: &KContext, n: usize, terms: usize) -> CliResult<CmdOut> {
    require_rank(ctx, n)?;
    let basis = build_basis(ctx, n)?;
    let module = AndersonModule::build(ctx, &basis)?;
    let exp = module.exp_coeffs(terms, ctx)?;
    Ok(series_out(ctx, &exp))
}

pub fn log(ctx: &KContext, n: usize, terms: usize) -> CliResult<CmdOut> {
    require_rank(ctx, n)?;
    let basis = build_basis(ctx, n)?;
    let module = AndersonModule::build(ctx, &basis)?;
    let exp = module.exp_coeffs(terms, ctx)?;
    let log = module.log_coeffs(terms, &exp, ctx)?;
    Ok(series_out(ctx, &log))
}

// --- zeta ----------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMode {
    Brute,
    Closed,
}

/// Partial sums of zeta(b; s) = b * sum_i S_i(s), term by term.
pub fn zeta(
    ctx: &KContext,
    b_expr: &str,
    s: i64,
    terms: usize,
    mode: ZetaMode,
) -> CliResult<CmdOut> {
    if s < 1 {
        return Err(Failure::Usage(format!("--s {s} is out of range: s must be >= 1")));
    }
    let b = parse_b(ctx, b_expr)?;
    let q = ctx.q() as i64;
    if mode == ZetaMode::Closed && s > q - 1 {
        return Err(Failure::Usage(format!(
            "--s {s} is out of range for the closed form: 1 <= s <= {} on this curve \
             (use --mode brute for larger exponents)",
            q - 1
        )));
    }
    let sd = match mode {
        ZetaMode::Closed => {
            let v = find_v(ctx)?;
            Some(shtuka_data(ctx, &v)?)
        }
        ZetaMode::Brute => None,
    };

    let fd = ctx.fd();
    let mut term_values = Vec::with_capacity(terms + 1);
    let mut sum = KElem::zero(ctx);
    for i in 0..=terms {
        let s_i = match (&sd, i) {
            // Degree 0 has only the unit; degree 1 is the gap.
            (_, 0) => KElem::one(ctx),
            (_, 1) => KElem::zero(ctx),
            (Some(sd), _) => power_sum_closed(ctx, sd, i, s)?,
            (None, _) => power_sum_bruteforce(ctx, i, s),
        };
        let term = b.elem().mul(&s_i, ctx);
        sum = sum.add(&term, ctx);
        term_values.push(term);
    }

    let value = json!({
        "b": json::kelem_to_json(fd, b.elem()),
        "s": s,
        "mode": match mode { ZetaMode::Brute => "brute", ZetaMode::Closed => "closed" },
        "terms": json::kelem_vec_to_json(fd, &term_values),
        "sum": json::kelem_to_json(fd, &sum),
    });
    let mut pretty = format!("b = {}\ns = {s}\n", b.elem().render(ctx));
    for (i, t) in term_values.iter().enumerate() {
        pretty.push_str(&format!("term {i}: {}\n", t.render(ctx)));
    }
    pretty.push_str(&format!("partial sum: {}\n", sum.render(ctx)));
    Ok(CmdOut { value, pretty })
}

// --- zeta-vector ------------------------------------------------------------------

pub fn zeta_vector_cmd(ctx: &KContext, b_expr: &str, n: usize) -> CliResult<CmdOut> {
    require_rank(ctx, n)?;
    let b = parse_b(ctx, b_expr)?;
    let basis = build_basis(ctx, n)?;
    let zv = zeta_vector(ctx, &basis, &b, n)?;
    let fd = ctx.fd();

    let g_aux = {
        let sd = shtuka_data(ctx, &basis.v)?;
        script_g(ctx, &sd)?
    };

    let terms = Value::Array(
        zv.expansion
            .d_twisted
            .iter()
            .enumerate()
            .map(|(j, vec)| json!({ "j": j, "vector": json::kelem_vec_to_json(fd, vec) }))
            .collect(),
    );
    let value = json!({
        "C": json::kelem_to_json(fd, &zv.c),
        "d": json::kelem_vec_to_json(fd, &zv.d),
        "terms": terms,
        "checks": {
            "perTermOracle": true,
            "termsChecked": zv.terms_checked,
            "reconstruction": "exact",
        },
        "auxiliary": json::curvefunc_to_json(fd, &g_aux),
    });

    let mut pretty = format!(
        "C = {}\nauxiliary function = {}\n",
        zv.c.render(ctx),
        render::curvefunc(ctx, &g_aux)
    );
    for (j, vec) in zv.expansion.d_twisted.iter().enumerate() {
        let parts: Vec<String> = vec.iter().map(|x| x.render(ctx)).collect();
        pretty.push_str(&format!("d_{j} (twist {j}): ({})\n", parts.join(", ")));
    }
    let total: Vec<String> = zv.d.iter().map(|x| x.render(ctx)).collect();
    pretty.push_str(&format!("total d: ({})\n", total.join(", ")));
    pretty.push_str(&format!(
        "leading terms checked against the power-sum oracle: {}\n",
        zv.terms_checked
    ));
    Ok(CmdOut { value, pretty })
}

// --- verify ------------------------------------------------------------------------

pub fn verify(
    ctx: &KContext,
    n: usize,
    depth: usize,
    precision: usize,
    seed: u64,
    prop_cases: usize,
) -> CliResult<(CmdOut, bool)> {
    require_rank(ctx, n)?;
    if precision < 8 {
        return Err(Failure::Usage(format!(
            "--precision {precision} is too small: the tail comparison needs at least 8 digits"
        )));
    }
    let checks = checks::run_verify(ctx, n, depth, precision, seed, prop_cases);
    let all_pass = checks.iter().all(|c| c.pass);

    let value = json!({
        "checks": Value::Array(
            checks
                .iter()
                .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
                .collect(),
        ),
        "pass": all_pass,
        "n": n,
        "depth": depth,
        "precision": precision,
        "seed": seed,
    });

    let mut pretty = String::new();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        pretty.push_str(&format!(
            "{}  {:width$}  {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail,
        ));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    pretty.push_str(&format!("verify: {passed}/{} checks passed\n", checks.len()));
    Ok((CmdOut { value, pretty }, all_pass))
}
