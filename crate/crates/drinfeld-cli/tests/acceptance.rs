//! Acceptance battery: ten criteria covering the golden outputs on the two
//! bundled example curves, the exact structural identities of the tensor
//! basis and Anderson module, the exponential/logarithm coefficient
//! cross-checks, the power-sum and per-term zeta oracles, the tail
//! summability comparison, and the randomized property suites.
//!
//! Each test prints exactly one `[PASS]`/`[FAIL]` line (visible with
//! `--nocapture`; cargo shows it on failure regardless).

use drinfeld_cli::{aexpr, checks, json, props};
use drinfeld_core::anderson::{AndersonModule, AVar};
use drinfeld_core::curve::Point;
use drinfeld_core::func::CurveFunc;
use drinfeld_core::laurent::tail_check;
use drinfeld_core::shtuka::{find_v, shtuka_data, TensorBasis};
use drinfeld_core::zeta::{
    monic_enumerate, power_sum_bruteforce, script_g, zeta_term_check, AElem,
};
use drinfeld_core::{FieldDesc, KContext, KElem};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

// --- shared helpers ----------------------------------------------------------

fn ctx_f3() -> KContext {
    let fd = FieldDesc::new(3, 1, None).unwrap();
    let m1 = fd.from_int(-1);
    KContext::new(&fd, [fd.zero(), fd.zero(), fd.zero(), m1, m1]).unwrap()
}

fn ctx_f4() -> KContext {
    let fd = FieldDesc::new(2, 2, None).unwrap();
    let c = fd.from_digits(&[0, 1]).unwrap();
    KContext::new(&fd, [fd.zero(), fd.zero(), fd.one(), fd.zero(), c]).unwrap()
}

fn both_curves() -> [(KContext, &'static str); 2] {
    [(ctx_f3(), "q=3"), (ctx_f4(), "q=4")]
}

fn basis_for(ctx: &KContext, n: usize) -> Result<TensorBasis, String> {
    let v = find_v(ctx).map_err(|e| e.to_string())?;
    let sd = shtuka_data(ctx, &v).map_err(|e| e.to_string())?;
    TensorBasis::build(ctx, &sd, n).map_err(|e| e.to_string())
}

fn module_for(ctx: &KContext, n: usize) -> Result<AndersonModule, String> {
    AndersonModule::build(ctx, &basis_for(ctx, n)?).map_err(|e| e.to_string())
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run_binary(sub: &str, name: &str, extra: &[&str]) -> Result<Value, String> {
    let path = fixture(name);
    let mut args: Vec<&str> = vec![sub, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(&args)
        .output()
        .map_err(|e| format!("cannot spawn binary: {e}"))?;
    if !status.success() {
        return Err(format!(
            "`drinfeld {}` exited {:?}: {}",
            args.join(" "),
            status.code(),
            String::from_utf8_lossy(&stderr)
        ));
    }
    serde_json::from_slice(&stdout).map_err(|e| format!("stdout is not JSON: {e}"))
}

fn constant(x: &KElem, ctx: &KContext) -> CurveFunc {
    CurveFunc::constant(x.clone(), ctx)
}

fn report(n: usize, desc: &str, r: Result<(), String>) {
    match r {
        Ok(()) => println!("[PASS] criterion {n}: {desc}"),
        Err(e) => {
            println!("[FAIL] criterion {n}: {desc} - {e}");
            panic!("criterion {n} failed: {e}");
        }
    }
}

fn within(budget: Duration, start: Instant, what: &str) -> Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, over the {budget:?} budget"))
    }
}

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

// --- criterion 1: golden outputs on the q=3 curve ---------------------------

fn criterion_1() -> Result<(), String> {
    let start = Instant::now();
    let ctx = ctx_f3();
    let fd = ctx.fd();
    let theta = KElem::theta(&ctx);
    let eta = KElem::eta(&ctx);

    // f = (y - eta - eta (t - theta)) / (t - theta - 1).
    let t = CurveFunc::var_t(&ctx);
    let num = CurveFunc::var_y(&ctx)
        .sub(&constant(&eta, &ctx), &ctx)
        .sub(
            &constant(&eta, &ctx).mul(&t.sub(&constant(&theta, &ctx), &ctx), &ctx),
            &ctx,
        );
    let den = t
        .sub(&constant(&theta, &ctx), &ctx)
        .sub(&CurveFunc::one(&ctx), &ctx);
    let f_expected = num.div(&den, &ctx).map_err(|e| e.to_string())?;

    let v = run_binary("shtuka", "ex82.json", &[])?;
    expect(
        v["f"] == json::curvefunc_to_json(fd, &f_expected),
        "emitted f differs from the golden line quotient",
    )?;

    // zeta-vector --b 1 --n 2: three summand vectors and zero total.
    let one = KElem::one(&ctx);
    let zero = KElem::zero(&ctx);
    let e2p1 = eta.pow(2, &ctx).unwrap().add(&one, &ctx);
    let d0 = eta.pow(3, &ctx).unwrap().neg(&ctx).div(&e2p1, &ctx).unwrap();
    let d1 = eta.pow(5, &ctx).unwrap().div(&e2p1, &ctx).unwrap();
    let d2 = eta
        .pow(5, &ctx)
        .unwrap()
        .neg(&ctx)
        .add(&eta.pow(3, &ctx).unwrap(), &ctx)
        .div(&e2p1, &ctx)
        .unwrap();

    let v = run_binary("zeta-vector", "ex82.json", &["--b", "1", "--n", "2"])?;
    let summands = [
        vec![one.clone(), d0],
        vec![one.clone(), d1],
        vec![one, d2],
    ];
    for (j, expected) in summands.iter().enumerate() {
        expect(
            v["terms"][j]["vector"] == json::kelem_vec_to_json(fd, expected),
            &format!("summand vector {j} differs from the golden value"),
        )?;
    }
    expect(
        v["d"] == json::kelem_vec_to_json(fd, &[zero.clone(), zero]),
        "total vector is not (0, 0)",
    )?;
    within(Duration::from_secs(5), start, "q=3 golden run")
}

#[test]
fn criterion_01_golden_outputs_q3() {
    report(
        1,
        "q=3 curve: shtuka function and zeta-vector summands match the golden values exactly",
        criterion_1(),
    );
}

// --- criterion 2: golden outputs on the q=4 curve ---------------------------

fn criterion_2() -> Result<(), String> {
    let start = Instant::now();
    let ctx = ctx_f4();
    let fd = ctx.fd();
    let theta = KElem::theta(&ctx);
    let eta = KElem::eta(&ctx);
    let one = KElem::one(&ctx);

    // V = (theta, eta + 1).
    let v_pt = find_v(&ctx).map_err(|e| e.to_string())?;
    expect(
        v_pt == Point::affine(theta.clone(), eta.add(&one, &ctx)),
        "distinguished point is not (theta, eta + 1)",
    )?;
    let sd = shtuka_data(&ctx, &v_pt).map_err(|e| e.to_string())?;

    // f = (y + eta + m (t + theta)) / (t + theta) with m the tangent slope
    // theta^2 (the numerator passes through the twisted distinguished point).
    let slope = theta.pow(2, &ctx).unwrap();
    let t = CurveFunc::var_t(&ctx);
    let num = CurveFunc::var_y(&ctx)
        .add(&constant(&eta, &ctx), &ctx)
        .add(
            &constant(&slope, &ctx).mul(&t.add(&constant(&theta, &ctx), &ctx), &ctx),
            &ctx,
        );
    let den = t.add(&constant(&theta, &ctx), &ctx);
    let f_expected = num.div(&den, &ctx).map_err(|e| e.to_string())?;
    expect(sd.f == f_expected, "shtuka function differs from the golden quotient")?;

    // Auxiliary function (eta + y + 1)/(theta + t) + (y^4 + y + 1)/(t^4 + t).
    let y = CurveFunc::var_y(&ctx);
    let t = CurveFunc::var_t(&ctx);
    let first = constant(&eta, &ctx)
        .add(&y, &ctx)
        .add(&CurveFunc::one(&ctx), &ctx)
        .div(&constant(&theta, &ctx).add(&t, &ctx), &ctx)
        .map_err(|e| e.to_string())?;
    let second = y
        .pow(4, &ctx)
        .unwrap()
        .add(&y, &ctx)
        .add(&CurveFunc::one(&ctx), &ctx)
        .div(&t.pow(4, &ctx).unwrap().add(&t, &ctx), &ctx)
        .map_err(|e| e.to_string())?;
    let g_expected = first.add(&second, &ctx);
    let g = script_g(&ctx, &sd).map_err(|e| e.to_string())?;
    expect(g == g_expected, "auxiliary function differs from the golden sum")?;

    // Total summand vector ((r^2 + r^4), (r + r^3)) and constant C = 1/r
    // with r = theta^4 + theta.
    let r = theta.pow(4, &ctx).unwrap().add(&theta, &ctx);
    let pow = |k: i64| r.pow(k, &ctx).unwrap();
    let total = vec![pow(2).add(&pow(4), &ctx), r.add(&pow(3), &ctx)];
    let v = run_binary("zeta-vector", "ex83.json", &["--b", "1", "--n", "2"])?;
    expect(
        v["d"] == json::kelem_vec_to_json(fd, &total),
        "total vector differs from the golden value",
    )?;
    expect(
        v["C"] == json::kelem_to_json(fd, &r.inv(&ctx).unwrap()),
        "constant C is not the inverse of theta^4 + theta",
    )?;
    within(Duration::from_secs(10), start, "q=4 golden run")
}

#[test]
fn criterion_02_golden_outputs_q4() {
    report(
        2,
        "q=4 curve: distinguished point, shtuka function, auxiliary function, total vector, and constant match",
        criterion_2(),
    );
}

// --- criterion 3: basis product identities -----------------------------------

fn criterion_3() -> Result<(), String> {
    for (ctx, label, ranks) in [
        (ctx_f3(), "q=3", &[1usize, 2][..]),
        (ctx_f4(), "q=4", &[1usize, 2, 3][..]),
    ] {
        for &n in ranks {
            let basis = basis_for(&ctx, n)?;
            checks::basis_products(&ctx, &basis)
                .map_err(|e| format!("{label}, n={n}: {e}"))?;
        }
    }
    Ok(())
}

#[test]
fn criterion_03_basis_product_identities() {
    report(
        3,
        "g/h product identities hold exactly for n in {1,2} (q=3) and {1,2,3} (q=4)",
        criterion_3(),
    );
}

// --- criterion 4: operator identities -----------------------------------------

fn criterion_4() -> Result<(), String> {
    for (ctx, label, ranks) in [
        (ctx_f3(), "q=3", &[1usize, 2][..]),
        (ctx_f4(), "q=4", &[1usize, 2, 3][..]),
    ] {
        for &n in ranks {
            let module = module_for(&ctx, n)?;
            checks::weierstrass_operator(&ctx, &module)
                .map_err(|e| format!("{label}, n={n}: {e}"))?;
        }
    }
    Ok(())
}

#[test]
fn criterion_04_weierstrass_operator_identity() {
    report(
        4,
        "operator images of t and y commute and satisfy the Weierstrass equation for every (curve, n)",
        criterion_4(),
    );
}

// --- criterion 5: exponential/logarithm coefficients ---------------------------

fn criterion_5() -> Result<(), String> {
    let start = Instant::now();
    for (ctx, label) in both_curves() {
        // Dimension 2: recurrence, inversion, and the three reference shapes.
        let module = module_for(&ctx, 2)?;
        let exp = module.exp_coeffs(5, &ctx).map_err(|e| e.to_string())?;
        let log = module.log_coeffs(5, &exp, &ctx).map_err(|e| e.to_string())?;
        let wrap = |what: &str, r: checks::CheckResult| -> Result<(), String> {
            r.map(|_| ()).map_err(|e| format!("{label}, n=2, {what}: {e}"))
        };
        // Q_0 = P_0 = I and the recurrence residual vanishes through i = 5.
        wrap("recurrence", checks::exp_recurrence(&ctx, &module, &exp, 5))?;
        // Sum_{j+k=m} Q_j P_k^(j) = 0 for 1 <= m <= 5.
        wrap("inversion", checks::exp_log_inversion(&ctx, &exp, &log, 5))?;
        wrap("first column", checks::exp_first_column(&ctx, &module, &exp, 3))?;
        wrap("residue matrix", checks::log_residue_matrix(&ctx, &module, &log, 3))?;
        wrap("bottom row", checks::log_bottom_row(&ctx, &module, &log, 3))?;

        // Dimension 1: both scalar closed forms.
        let module = module_for(&ctx, 1)?;
        let exp = module.exp_coeffs(3, &ctx).map_err(|e| e.to_string())?;
        let log = module.log_coeffs(3, &exp, &ctx).map_err(|e| e.to_string())?;
        let xi = Point::generic(&ctx);
        for i in 0..=3usize {
            let xi_i = xi.frobenius(i, &ctx);
            let prod = module
                .basis
                .f_twist_product(i, &ctx)
                .eval(&xi_i, &ctx)
                .map_err(|e| e.to_string())?;
            let q_closed = prod.inv(&ctx).map_err(|e| e.to_string())?;
            if exp.mats[i].get(0, 0) != &q_closed {
                return Err(format!(
                    "{label}, n=1: scalar exponential coefficient {i} differs from the product formula"
                ));
            }
            let p_closed = module
                .log_closed_form_rank_one(i, &ctx)
                .map_err(|e| e.to_string())?;
            if log.mats[i].get(0, 0) != &p_closed {
                return Err(format!(
                    "{label}, n=1: scalar logarithm coefficient {i} differs from the closed form"
                ));
            }
        }
    }
    within(Duration::from_secs(30), start, "coefficient cross-checks")
}

#[test]
fn criterion_05_exp_log_coefficients() {
    report(
        5,
        "exponential/logarithm coefficients: recurrence (i<=5), inversion (m<=5), reference shapes (i<=3), scalar closed forms",
        criterion_5(),
    );
}

// --- criterion 6: functional equation ------------------------------------------

fn criterion_6() -> Result<(), String> {
    for (ctx, label) in both_curves() {
        let module = module_for(&ctx, 2)?;
        let exp = module.exp_coeffs(3, &ctx).map_err(|e| e.to_string())?;
        for var in [AVar::T, AVar::Y] {
            for k in 0..=3 {
                let res = module.functional_equation_residual(var, k, &exp.mats, &ctx);
                if !res.is_zero() {
                    return Err(format!(
                        "{label}: functional equation residual nonzero at depth {k}"
                    ));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_06_functional_equation() {
    report(
        6,
        "exponential functional equation holds to tau-depth 3 for both generators, n=2, both curves",
        criterion_6(),
    );
}

// --- criterion 7: power sums ----------------------------------------------------

fn criterion_7() -> Result<(), String> {
    for (ctx, label) in both_curves() {
        let sd = shtuka_data(&ctx, &find_v(&ctx).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        checks::power_sum_oracle(&ctx, &sd).map_err(|e| format!("{label}: {e}"))?;
        // Enumeration sizes stay within q^4 elements per degree.
        let q4 = ctx.q().pow(4);
        for i in 0..=4usize {
            let count = monic_enumerate(&ctx, i).len();
            if count > q4 {
                return Err(format!(
                    "{label}: degree-{i} enumeration has {count} elements (> q^4 = {q4})"
                ));
            }
        }
    }
    // Golden value: S_2(1) = -1/(theta^3 - theta) on the q=3 curve.
    let ctx = ctx_f3();
    let theta = KElem::theta(&ctx);
    let expected = KElem::one(&ctx)
        .neg(&ctx)
        .div(&theta.pow(3, &ctx).unwrap().sub(&theta, &ctx), &ctx)
        .unwrap();
    let s21 = power_sum_bruteforce(&ctx, 2, 1);
    expect(s21 == expected, "S_2(1) does not equal -1/(theta^3 - theta)")
}

#[test]
fn criterion_07_power_sums() {
    report(
        7,
        "closed-form power sums match brute force (2<=i<=4, 1<=s<=q-1) and the S_2(1) golden value",
        criterion_7(),
    );
}

// --- criterion 8: per-term zeta identity -----------------------------------------

fn criterion_8() -> Result<(), String> {
    for (ctx, label) in both_curves() {
        let basis = basis_for(&ctx, 2)?;
        for expr in ["1", "T", "T+1"] {
            let b = aexpr::parse_a_expr(&ctx, expr).map_err(|e| e.to_string())?;
            for i in 0..=4usize {
                zeta_term_check(&ctx, &basis, &b, 2, i)
                    .map_err(|e| format!("{label}, b={expr}, i={i}: {e}"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_08_per_term_zeta_identity() {
    report(
        8,
        "per-term zeta identity holds for 0<=i<=4 and b in {1, T, T+1}, n=2, both curves",
        criterion_8(),
    );
}

// --- criterion 9: tail comparison -------------------------------------------------

fn criterion_9() -> Result<(), String> {
    for (name, ctx, label) in [("ex82", ctx_f3(), "q=3"), ("ex83", ctx_f4(), "q=4")] {
        let basis = basis_for(&ctx, 2)?;
        let b = AElem::one(&ctx);
        let tr = tail_check(&ctx, &basis, &b, 4, 4, 2, 64).map_err(|e| e.to_string())?;
        if !tr.pass {
            return Err(format!(
                "{name} ({label}): difference valuation does not increase from cuts {:?} to {:?}: {:?} -> {:?}",
                tr.cuts[0], tr.cuts[1], tr.val_diff[0], tr.val_diff[1]
            ));
        }
    }
    Ok(())
}

#[test]
fn criterion_09_tail_valuation_increases() {
    report(
        9,
        "tail comparison at precision 64: difference valuation strictly increases from cut 4 to cut 6",
        criterion_9(),
    );
}

// --- criterion 10: randomized property suites ---------------------------------------

fn criterion_10() -> Result<(), String> {
    for (ctx, label) in both_curves() {
        for suite in props::run_all(&ctx, 0x5eed, 1000) {
            if !suite.pass {
                return Err(format!("{label}, {}: {}", suite.name, suite.detail));
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_10_property_suites() {
    report(
        10,
        "field axioms, twisting, degree/sign, principal divisors, residue invariance: 1000 cases per curve",
        criterion_10(),
    );
}
