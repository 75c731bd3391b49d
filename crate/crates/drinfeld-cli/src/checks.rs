//! The deterministic invariant checks behind `verify`: group-law and divisor
//! sanity, tensor-basis product and structure-constant identities, operator
//! identities of the module, exponential/logarithm cross-checks, power-sum
//! oracle equality, per-term zeta identities, and the infinite-place tail
//! comparison. Each check returns a summary on success and a reason on
//! failure, so the frontend can print one line per check.

use crate::props;
use drinfeld_core::anderson::{AndersonModule, AVar, CoeffSeries, ExpRecursionData};
use drinfeld_core::curve::check_associativity;
use drinfeld_core::func::vertical_line;
use drinfeld_core::laurent::tail_check;
use drinfeld_core::matrix::KMat;
use drinfeld_core::shtuka::{find_v, shtuka_data, ShtukaData, TensorBasis};
use drinfeld_core::zeta::{power_sum_bruteforce, power_sum_closed, zeta_term, AElem};
use drinfeld_core::{CurveFunc, KContext, KElem, Point};

pub type CheckResult = Result<String, String>;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: &'static str, r: CheckResult) -> Check {
        match r {
            Ok(detail) => Check { name, pass: true, detail },
            Err(detail) => Check { name, pass: false, detail },
        }
    }
}

fn err_to_string<T>(r: drinfeld_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// --- point and divisor checks ----------------------------------------------

/// Group-law sanity over a pool of affine anchors: closure, associativity,
/// commutativity, and scalar-multiple consistency.
pub fn group_law(ctx: &KContext) -> CheckResult {
    let mut pool = props::divisor_pool(ctx);
    pool.truncate(8);
    pool.push(Point::infinity());
    for p in &pool {
        if !p.on_curve(ctx) {
            return Err("a pool point is not on the curve".to_string());
        }
    }
    err_to_string(check_associativity(&pool, ctx))?;
    for p in &pool {
        for q in &pool {
            let pq = err_to_string(p.add(q, ctx))?;
            let qp = err_to_string(q.add(p, ctx))?;
            if pq != qp {
                return Err("addition is not commutative".to_string());
            }
            if !pq.on_curve(ctx) {
                return Err("a sum left the curve".to_string());
            }
        }
    }
    if let Ok(v) = find_v(ctx) {
        let two = err_to_string(v.mul_scalar(2, ctx))?;
        let three = err_to_string(v.mul_scalar(3, ctx))?;
        if err_to_string(two.add(&v, ctx))? != three {
            return Err("scalar multiples disagree with repeated addition".to_string());
        }
    }
    Ok(format!("{} anchor points", pool.len()))
}

/// The shtuka function must vanish to order one at the twisted distinguished
/// point and at the generic point, have a simple pole at the distinguished
/// point, have pole order one at infinity, and be sign-normalized.
pub fn shtuka_divisor(ctx: &KContext, sd: &ShtukaData) -> CheckResult {
    let xi = Point::generic(ctx);
    let v1 = sd.v.frobenius(1, ctx);
    let checks: [(&Point, i64, &str); 3] = [
        (&v1, 1, "twisted distinguished point"),
        (&sd.v, -1, "distinguished point"),
        (&xi, 1, "generic point"),
    ];
    for (p, want, label) in checks {
        let got = err_to_string(sd.f.order_at(p, ctx))?;
        if got != want {
            return Err(format!("order at the {label} is {got}, expected {want}"));
        }
    }
    let deg = err_to_string(sd.f.deg(ctx))?;
    if deg != 1 {
        return Err(format!("pole order at infinity is {deg}, expected 1"));
    }
    let sgn = err_to_string(sd.f.sgn(ctx))?;
    if !sgn.is_one() {
        return Err("shtuka function is not sign-normalized".to_string());
    }
    let minus_v = sd.v.negate(ctx);
    if err_to_string(sd.nu.order_at(&minus_v, ctx))? < 1 {
        return Err("numerator line misses the negated distinguished point".to_string());
    }
    Ok("orders (+1, -1, +1), pole order 1 at infinity, sign 1".to_string())
}

// --- tensor-basis identities ------------------------------------------------

/// The two product identities tying the g- and h-chains together:
/// g_1^(1) h_1 = (t - t([n]V))^(1) and, for 1 <= j <= n-1,
/// g_(j+1) h_(n-j+1) = f^n (t - t([j]V^(1) + [n-j]V)).
pub fn basis_products(ctx: &KContext, basis: &TensorBasis) -> CheckResult {
    let n = basis.n;
    // points[k] = [k]V^(1) + [n-k]V, so points[0] = [n]V.
    let nv = &basis.points[0];
    let lhs = basis.g[0].twist(1, ctx).mul(&basis.h[0], ctx);
    let rhs = err_to_string(vertical_line(nv, ctx))?.twist(1, ctx);
    if lhs != rhs {
        return Err("the twisted g_1 h_1 identity fails".to_string());
    }
    let fn_pow = err_to_string(basis.f.pow(n as i64, ctx))?;
    for j in 1..n {
        let lhs = basis.g[j].mul(&basis.h[n - j], ctx);
        let rhs = fn_pow.mul(&err_to_string(vertical_line(&basis.points[j], ctx))?, ctx);
        if lhs != rhs {
            return Err(format!("the product identity fails at chain index {j}"));
        }
    }
    Ok(format!("both product identities hold for dimension {n}"))
}

/// The action identities defining the structure constants:
/// t g_i = theta g_i + a_i g_(i+1) + g_(i+2) and
/// y g_i = eta g_i + y_i g_(i+1) + z_i g_(i+2) + g_(i+3),
/// with indices past n resolved through the twist extension rule.
pub fn structure_constants(ctx: &KContext, basis: &TensorBasis) -> CheckResult {
    let n = basis.n;
    let t = CurveFunc::var_t(ctx);
    let y = CurveFunc::var_y(ctx);
    let theta = CurveFunc::constant(KElem::theta(ctx), ctx);
    let eta = CurveFunc::constant(KElem::eta(ctx), ctx);
    for i in 1..=n {
        let gi = err_to_string(basis.extended_g(i, ctx))?;
        let g1 = err_to_string(basis.extended_g(i + 1, ctx))?;
        let g2 = err_to_string(basis.extended_g(i + 2, ctx))?;
        let g3 = err_to_string(basis.extended_g(i + 3, ctx))?;
        let lhs_t = t.mul(&gi, ctx);
        let rhs_t = theta
            .mul(&gi, ctx)
            .add(&g1.mul_scalar(&basis.a[i - 1], ctx), ctx)
            .add(&g2, ctx);
        if lhs_t != rhs_t {
            return Err(format!("t-action identity fails at row {i}"));
        }
        let lhs_y = y.mul(&gi, ctx);
        let rhs_y = eta
            .mul(&gi, ctx)
            .add(&g1.mul_scalar(&basis.y[i - 1], ctx), ctx)
            .add(&g2.mul_scalar(&basis.z[i - 1], ctx), ctx)
            .add(&g3, ctx);
        if lhs_y != rhs_y {
            return Err(format!("y-action identity fails at row {i}"));
        }
    }
    Ok(format!("t- and y-action identities hold for all {n} rows"))
}

// --- operator identities -----------------------------------------------------

/// The two operators must commute and satisfy the curve equation.
pub fn weierstrass_operator(ctx: &KContext, module: &AndersonModule) -> CheckResult {
    if !module.commutation_holds(ctx) {
        return Err("the t- and y-operators do not commute".to_string());
    }
    if !module.curve_identity_holds(ctx) {
        return Err("the operators do not satisfy the curve equation".to_string());
    }
    Ok("operators commute and satisfy the curve equation".to_string())
}

/// Coefficient identity of Exp(d[a] z) = rho_a(Exp z) at every tau-depth
/// up to `depth`, for both generators.
pub fn functional_equation(
    ctx: &KContext,
    module: &AndersonModule,
    exp: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    for var in [AVar::T, AVar::Y] {
        for k in 0..=depth {
            let residual = module.functional_equation_residual(var, k, &exp.mats, ctx);
            if !residual.is_zero() {
                return Err(format!("residual nonzero at depth {k} for {var:?}"));
            }
        }
    }
    Ok(format!("both generators, tau-depth <= {depth}"))
}

// --- exponential / logarithm cross-checks ------------------------------------

/// Q_0 = I and the defining recursion has residual zero at every index
/// (dimension >= 2); in dimension 1 the closed product form is checked
/// instead.
pub fn exp_recurrence(
    ctx: &KContext,
    module: &AndersonModule,
    exp: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    let n = module.basis.n;
    if !exp.mats[0].sub(&KMat::identity(n, ctx), ctx).is_zero() {
        return Err("Q_0 is not the identity".to_string());
    }
    if n == 1 {
        let xi = Point::generic(ctx);
        for i in 1..=depth {
            let prod = module.basis.f_twist_product(i, ctx);
            let denom = err_to_string(prod.eval(&xi.frobenius(i, ctx), ctx))?;
            let expected = err_to_string(denom.inv(ctx))?;
            if exp.mats[i].get(0, 0) != &expected {
                return Err(format!("closed product form fails at index {i}"));
            }
        }
        return Ok(format!("dimension 1 closed form, indices <= {depth}"));
    }
    let rec = err_to_string(ExpRecursionData::new(module, ctx))?;
    for i in 1..=depth {
        let residual = err_to_string(rec.recurrence_residual(i, &exp.mats, ctx))?;
        if !residual.is_zero() {
            return Err(format!("recursion residual nonzero at index {i}"));
        }
    }
    Ok(format!("residual zero at indices 1..={depth}"))
}

/// P_0 = I and the compositional-inverse identity
/// sum_(j+k=m) Q_j P_k^(j) = 0 for 1 <= m <= depth.
pub fn exp_log_inversion(
    ctx: &KContext,
    exp: &CoeffSeries,
    log: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    let n = exp.mats[0].n();
    if !log.mats[0].sub(&KMat::identity(n, ctx), ctx).is_zero() {
        return Err("P_0 is not the identity".to_string());
    }
    for m in 1..=depth {
        let mut acc = KMat::zero(n, ctx);
        for j in 0..=m {
            let term = exp.mats[j].mul(&log.mats[m - j].twist(j, ctx), ctx);
            acc = acc.add(&term, ctx);
        }
        if !acc.is_zero() {
            return Err(format!("inversion identity fails at order {m}"));
        }
    }
    Ok(format!("orders 1..={depth}"))
}

/// First column of Q_i against the evaluation formula
/// (g_1..g_n)^T / (g_1^(i) (f f^(1) ... f^(i-1))^n) at the i-fold twisted
/// generic point.
pub fn exp_first_column(
    ctx: &KContext,
    module: &AndersonModule,
    exp: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    // The closed formula starts at index 1; Q_0 = I is covered by the
    // recurrence check.
    for i in 1..=depth {
        let reference = err_to_string(module.exp_first_column_reference(i, ctx))?;
        let col = exp.mats[i].col(0);
        if reference != col {
            return Err(format!("first column differs at index {i}"));
        }
    }
    Ok(format!("indices 1..={depth}"))
}

/// P_i against the residue matrix of the basis functions.
pub fn log_residue_matrix(
    ctx: &KContext,
    module: &AndersonModule,
    log: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    for i in 0..=depth {
        let reference = err_to_string(module.log_residue_reference(i, ctx))?;
        if !reference.sub(&log.mats[i], ctx).is_zero() {
            return Err(format!("residue matrix differs at index {i}"));
        }
    }
    Ok(format!("indices 0..={depth}"))
}

/// Bottom row of P_i against its evaluation closed form.
pub fn log_bottom_row(
    ctx: &KContext,
    module: &AndersonModule,
    log: &CoeffSeries,
    depth: usize,
) -> CheckResult {
    let n = module.basis.n;
    for i in 0..=depth {
        let reference = err_to_string(module.log_bottom_row_reference(i, ctx))?;
        if reference.as_slice() != log.mats[i].row(n - 1) {
            return Err(format!("bottom row differs at index {i}"));
        }
    }
    Ok(format!("indices 0..={depth}"))
}

// --- zeta checks --------------------------------------------------------------

/// Closed-form power sums against brute-force enumeration for degrees 2..=4
/// and all exponents 1..=q-1.
pub fn power_sum_oracle(ctx: &KContext, sd: &ShtukaData) -> CheckResult {
    let q = ctx.q();
    for i in 2..=4usize {
        for s in 1..=(q as i64 - 1) {
            let closed = err_to_string(power_sum_closed(ctx, sd, i, s))?;
            let brute = power_sum_bruteforce(ctx, i, s);
            if closed != brute {
                return Err(format!("S_{i}({s}) disagrees with enumeration"));
            }
        }
    }
    Ok(format!("degrees 2..=4, exponents 1..={}", q - 1))
}

/// Per-term zeta identity: term_i = b * S_i(n) for the leading terms.
pub fn zeta_per_term(
    ctx: &KContext,
    basis: &TensorBasis,
    b: &AElem,
    n: usize,
    terms: usize,
) -> CheckResult {
    for i in 0..=terms {
        let closed = err_to_string(zeta_term(ctx, basis, b, n, i))?;
        let brute = b.elem().mul(&power_sum_bruteforce(ctx, i, n as i64), ctx);
        if closed != brute {
            return Err(format!("term {i} disagrees with the power-sum oracle"));
        }
    }
    Ok(format!("terms 0..={terms}"))
}

/// Infinite-place comparison of the two series for C·zeta(b; n): the
/// difference valuation must strictly increase as both cuts advance.
pub fn tail_convergence(
    ctx: &KContext,
    basis: &TensorBasis,
    b: &AElem,
    precision: usize,
) -> CheckResult {
    let report = err_to_string(tail_check(ctx, basis, b, 4, 4, 2, precision))?;
    let detail = format!(
        "difference valuations {:?} -> {:?} at cuts {:?} -> {:?}",
        report.val_diff[0], report.val_diff[1], report.cuts[0], report.cuts[1]
    );
    if report.pass {
        Ok(detail)
    } else {
        Err(format!("valuation did not increase: {detail}"))
    }
}

// --- aggregate ---------------------------------------------------------------

/// Runs the whole `verify` battery and returns one entry per check, in a
/// fixed order. Randomized suites run with `prop_cases` cases each from the
/// given seed.
pub fn run_verify(
    ctx: &KContext,
    n: usize,
    depth: usize,
    precision: usize,
    seed: u64,
    prop_cases: usize,
) -> Vec<Check> {
    let mut out = Vec::new();

    for report in props::run_all(ctx, seed, prop_cases) {
        out.push(Check { name: report.name, pass: report.pass, detail: report.detail });
    }

    out.push(Check::from_result("group-law", group_law(ctx)));

    // Everything downstream needs the shtuka data and basis; on failure,
    // report the blockage once and stop.
    let blocked = |what: &'static str, e: String, out: &mut Vec<Check>| {
        out.push(Check { name: what, pass: false, detail: e });
    };

    let v = match find_v(ctx) {
        Ok(v) => v,
        Err(e) => {
            blocked("shtuka-divisor", e.to_string(), &mut out);
            return out;
        }
    };
    let sd = match shtuka_data(ctx, &v) {
        Ok(sd) => sd,
        Err(e) => {
            blocked("shtuka-divisor", e.to_string(), &mut out);
            return out;
        }
    };
    out.push(Check::from_result("shtuka-divisor", shtuka_divisor(ctx, &sd)));

    let basis = match TensorBasis::build(ctx, &sd, n) {
        Ok(b) => b,
        Err(e) => {
            blocked("basis-products", e.to_string(), &mut out);
            return out;
        }
    };
    out.push(Check::from_result("basis-products", basis_products(ctx, &basis)));
    out.push(Check::from_result("structure-constants", structure_constants(ctx, &basis)));

    let module = match AndersonModule::build(ctx, &basis) {
        Ok(m) => m,
        Err(e) => {
            blocked("weierstrass-operator", e.to_string(), &mut out);
            return out;
        }
    };
    out.push(Check::from_result("weierstrass-operator", weierstrass_operator(ctx, &module)));

    let series_depth = depth.max(1);
    let cross_depth = depth.min(3);
    let exp = match module.exp_coeffs(series_depth, ctx) {
        Ok(e) => e,
        Err(e) => {
            blocked("exp-recurrence", e.to_string(), &mut out);
            return out;
        }
    };
    out.push(Check::from_result(
        "exp-recurrence",
        exp_recurrence(ctx, &module, &exp, series_depth),
    ));
    out.push(Check::from_result(
        "functional-equation",
        functional_equation(ctx, &module, &exp, cross_depth),
    ));
    let log = match module.log_coeffs(series_depth, &exp, ctx) {
        Ok(l) => l,
        Err(e) => {
            blocked("exp-log-inversion", e.to_string(), &mut out);
            return out;
        }
    };
    out.push(Check::from_result(
        "exp-log-inversion",
        exp_log_inversion(ctx, &exp, &log, series_depth),
    ));
    out.push(Check::from_result(
        "exp-first-column",
        exp_first_column(ctx, &module, &exp, cross_depth),
    ));
    out.push(Check::from_result(
        "log-residue-matrix",
        log_residue_matrix(ctx, &module, &log, cross_depth),
    ));
    out.push(Check::from_result(
        "log-bottom-row",
        log_bottom_row(ctx, &module, &log, cross_depth),
    ));

    out.push(Check::from_result("power-sum-oracle", power_sum_oracle(ctx, &sd)));

    let b = AElem::one(ctx);
    out.push(Check::from_result(
        "zeta-per-term",
        zeta_per_term(ctx, &basis, &b, n, 4),
    ));
    out.push(Check::from_result(
        "tail-convergence",
        tail_convergence(ctx, &basis, &b, precision),
    ));

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use drinfeld_core::FieldDesc;

    fn ctx_f3() -> KContext {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        let a = [fd.zero(), fd.zero(), fd.zero(), fd.from_int(-1), fd.from_int(-1)];
        KContext::new(&fd, a).unwrap()
    }

    #[test]
    fn battery_runs_with_only_the_tail_diverging() {
        let ctx = ctx_f3();
        let checks = run_verify(&ctx, 2, 3, 48, 0, 10);
        for c in &checks {
            if c.name == "tail-convergence" {
                assert!(!c.pass, "tail check unexpectedly passed: {}", c.detail);
            } else {
                assert!(c.pass, "{} failed: {}", c.name, c.detail);
            }
        }
    }
}
