//! Seeded randomized property suites over a curve context: field axioms,
//! the twisting homomorphism, degree/sign multiplicativity, principal-divisor
//! degree zero, and residue invariance under regular perturbation. Each suite
//! reports the number of cases run and the first counterexample, if any.

use drinfeld_core::func::{law_line, vertical_line};
use drinfeld_core::shtuka::find_v;
use drinfeld_core::{CurveFunc, FqPoly, KContext, KElem, KPoly, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct PropReport {
    pub name: &'static str,
    pub cases: usize,
    pub pass: bool,
    pub detail: String,
}

impl PropReport {
    fn pass(name: &'static str, cases: usize) -> PropReport {
        PropReport { name, cases, pass: true, detail: format!("{cases} cases") }
    }

    fn fail(name: &'static str, case: usize, what: String) -> PropReport {
        PropReport { name, cases: case + 1, pass: false, detail: format!("case {case}: {what}") }
    }
}

/// Random polynomial in the degree-2 generator with degree at most `deg`.
fn rand_fqpoly(ctx: &KContext, rng: &mut ChaCha8Rng, deg: usize) -> FqPoly {
    let fd = ctx.fd();
    let q = fd.q() as u16;
    let coeffs: Vec<_> = (0..=deg).map(|_| fd.elem(rng.gen_range(0..q)).unwrap()).collect();
    FqPoly::from_coeffs(coeffs)
}

/// Random element of K with small numerator and denominator degrees.
pub fn rand_kelem(ctx: &KContext, rng: &mut ChaCha8Rng) -> KElem {
    let u = rand_fqpoly(ctx, rng, 3);
    let v = rand_fqpoly(ctx, rng, 2);
    let d = loop {
        let d = rand_fqpoly(ctx, rng, 2);
        if !d.is_zero() {
            break d;
        }
    };
    KElem::new(u, v, d, ctx).expect("nonzero denominator")
}

fn rand_nonzero_kelem(ctx: &KContext, rng: &mut ChaCha8Rng) -> KElem {
    loop {
        let x = rand_kelem(ctx, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn field_axioms(ctx: &KContext, rng: &mut ChaCha8Rng, cases: usize) -> PropReport {
    const NAME: &str = "field-axioms";
    for case in 0..cases {
        let x = rand_kelem(ctx, rng);
        let y = rand_kelem(ctx, rng);
        let z = rand_kelem(ctx, rng);
        let add_assoc = x.add(&y, ctx).add(&z, ctx) == x.add(&y.add(&z, ctx), ctx);
        if !add_assoc {
            return PropReport::fail(NAME, case, "addition associativity".to_string());
        }
        let mul_assoc = x.mul(&y, ctx).mul(&z, ctx) == x.mul(&y.mul(&z, ctx), ctx);
        if !mul_assoc {
            return PropReport::fail(NAME, case, "multiplication associativity".to_string());
        }
        let distrib = x.mul(&y.add(&z, ctx), ctx) == x.mul(&y, ctx).add(&x.mul(&z, ctx), ctx);
        if !distrib {
            return PropReport::fail(NAME, case, "distributivity".to_string());
        }
        let comm = x.mul(&y, ctx) == y.mul(&x, ctx) && x.add(&y, ctx) == y.add(&x, ctx);
        if !comm {
            return PropReport::fail(NAME, case, "commutativity".to_string());
        }
        if !x.sub(&x, ctx).is_zero() {
            return PropReport::fail(NAME, case, "additive inverse".to_string());
        }
        if !x.is_zero() {
            let inv = match x.inv(ctx) {
                Ok(i) => i,
                Err(e) => return PropReport::fail(NAME, case, format!("inverse failed: {e}")),
            };
            if !x.mul(&inv, ctx).is_one() {
                return PropReport::fail(NAME, case, "multiplicative inverse".to_string());
            }
        }
    }
    PropReport::pass(NAME, cases)
}

pub fn twist_homomorphism(ctx: &KContext, rng: &mut ChaCha8Rng, cases: usize) -> PropReport {
    const NAME: &str = "twist-homomorphism";
    for case in 0..cases {
        let x = rand_kelem(ctx, rng);
        let y = rand_kelem(ctx, rng);
        let sum_twist = x.add(&y, ctx).frobenius(1, ctx);
        if sum_twist != x.frobenius(1, ctx).add(&y.frobenius(1, ctx), ctx) {
            return PropReport::fail(NAME, case, "twist is not additive".to_string());
        }
        let prod_twist = x.mul(&y, ctx).frobenius(1, ctx);
        if prod_twist != x.frobenius(1, ctx).mul(&y.frobenius(1, ctx), ctx) {
            return PropReport::fail(NAME, case, "twist is not multiplicative".to_string());
        }
        let root = match x.frobenius(1, ctx).qth_root(ctx) {
            Ok(r) => r,
            Err(e) => return PropReport::fail(NAME, case, format!("q-th root failed: {e}")),
        };
        if root != x {
            return PropReport::fail(NAME, case, "q-th root does not invert the twist".to_string());
        }
    }
    PropReport::pass(NAME, cases)
}

pub fn degree_sign_multiplicativity(
    ctx: &KContext,
    rng: &mut ChaCha8Rng,
    cases: usize,
) -> PropReport {
    const NAME: &str = "degree-sign-multiplicativity";
    let fd = ctx.fd();
    for case in 0..cases {
        let x = rand_nonzero_kelem(ctx, rng);
        let y = rand_nonzero_kelem(ctx, rng);
        let (dx, sx) = x.deg_sgn().expect("nonzero");
        let (dy, sy) = y.deg_sgn().expect("nonzero");
        let (dxy, sxy) = x.mul(&y, ctx).deg_sgn().expect("product of nonzero");
        if dxy != dx + dy {
            return PropReport::fail(
                NAME,
                case,
                format!("deg(xy) = {dxy}, expected {dx} + {dy}"),
            );
        }
        if sxy != fd.mul(sx, sy) {
            return PropReport::fail(NAME, case, "sgn(xy) != sgn(x)sgn(y)".to_string());
        }
    }
    PropReport::pass(NAME, cases)
}

/// Affine points to anchor divisor constructions at: the distinguished point
/// V and its twist, the generic point and its twist, small multiples of V,
/// and every affine rational point of the curve.
pub fn divisor_pool(ctx: &KContext) -> Vec<Point> {
    let mut pool = Vec::new();
    let xi = Point::generic(ctx);
    pool.push(xi.clone());
    pool.push(xi.frobenius(1, ctx));
    if let Ok(v) = find_v(ctx) {
        pool.push(v.clone());
        pool.push(v.frobenius(1, ctx));
        pool.push(v.negate(ctx));
        for k in 2..=3 {
            if let Ok(m) = v.mul_scalar(k, ctx) {
                if !m.is_infinity() {
                    pool.push(m);
                }
            }
        }
    }
    for p in drinfeld_core::curve::rational_points(ctx) {
        if !p.is_infinity() {
            pool.push(p);
        }
    }
    pool
}

fn push_order(orders: &mut Vec<(Point, i64)>, p: &Point, mult: i64) {
    if p.is_infinity() {
        return;
    }
    for entry in orders.iter_mut() {
        if entry.0 == *p {
            entry.1 += mult;
            return;
        }
    }
    orders.push((p.clone(), mult));
}

/// Builds a random product of group-law lines and verticals (divisor known
/// by construction) and checks that the computed local orders match and that
/// the principal divisor has total degree zero: the function's pole order at
/// infinity, read off from its graded degree, equals the number of finite
/// zeros counted with multiplicity.
pub fn principal_divisor_degree_zero(
    ctx: &KContext,
    rng: &mut ChaCha8Rng,
    cases: usize,
) -> PropReport {
    const NAME: &str = "principal-divisor-degree-zero";
    let pool = divisor_pool(ctx);
    for case in 0..cases {
        let factors = rng.gen_range(1..=2);
        let mut func = CurveFunc::one(ctx);
        let mut orders: Vec<(Point, i64)> = Vec::new();
        for _ in 0..factors {
            if rng.gen_bool(0.3) {
                let p = &pool[rng.gen_range(0..pool.len())];
                let line = match vertical_line(p, ctx) {
                    Ok(l) => l,
                    Err(e) => return PropReport::fail(NAME, case, format!("vertical: {e}")),
                };
                func = func.mul(&line, ctx);
                push_order(&mut orders, p, 1);
                push_order(&mut orders, &p.negate(ctx), 1);
            } else {
                let p = &pool[rng.gen_range(0..pool.len())];
                let q = &pool[rng.gen_range(0..pool.len())];
                let (line, sum) = match law_line(p, q, ctx) {
                    Ok(r) => r,
                    Err(e) => return PropReport::fail(NAME, case, format!("line: {e}")),
                };
                func = func.mul(&line, ctx);
                push_order(&mut orders, p, 1);
                push_order(&mut orders, q, 1);
                push_order(&mut orders, &sum.negate(ctx), 1);
            }
        }
        let mut finite_total = 0i64;
        for (p, expected) in &orders {
            let got = match func.order_at(p, ctx) {
                Ok(o) => o,
                Err(e) => return PropReport::fail(NAME, case, format!("order: {e}")),
            };
            if got != *expected {
                return PropReport::fail(
                    NAME,
                    case,
                    format!("order at a construction point is {got}, expected {expected}"),
                );
            }
            finite_total += expected;
        }
        // Pole order at infinity from the graded degree.
        let deg = match func.deg(ctx) {
            Ok(d) => d,
            Err(e) => return PropReport::fail(NAME, case, format!("degree: {e}")),
        };
        if deg != finite_total {
            return PropReport::fail(
                NAME,
                case,
                format!("finite zeros total {finite_total} but pole order at infinity is {deg}"),
            );
        }
    }
    PropReport::pass(NAME, cases)
}

/// Residues against the invariant differential are unchanged when the
/// function is perturbed by anything regular at the point: coordinate-ring
/// polynomials never contribute, and the residue is K-linear.
pub fn residue_regular_perturbation(
    ctx: &KContext,
    rng: &mut ChaCha8Rng,
    cases: usize,
) -> PropReport {
    const NAME: &str = "residue-regular-perturbation";
    // Expansion at a point fixed by negation needs the other coordinate
    // chart; keep the suite on points where the vertical is a uniformizer.
    let pool: Vec<Point> = divisor_pool(ctx)
        .into_iter()
        .filter(|p| !p.is_two_torsion_affine(ctx))
        .collect();
    if pool.is_empty() {
        return PropReport::fail(NAME, 0, "no usable points on this curve".to_string());
    }
    for case in 0..cases {
        let p = &pool[rng.gen_range(0..pool.len())];
        let vert = match vertical_line(p, ctx) {
            Ok(v) => v,
            Err(e) => return PropReport::fail(NAME, case, format!("vertical: {e}")),
        };
        let c = rand_nonzero_kelem(ctx, rng);
        let base = match CurveFunc::constant(c.clone(), ctx).div(&vert, ctx) {
            Ok(f) => f,
            Err(e) => return PropReport::fail(NAME, case, format!("divide: {e}")),
        };
        let res = match base.residue_at(p, ctx) {
            Ok(r) => r,
            Err(e) => return PropReport::fail(NAME, case, format!("residue: {e}")),
        };
        // Perturb by a random coordinate-ring polynomial (regular at every
        // affine point).
        let reg = {
            let coeffs_u: Vec<KElem> = (0..3).map(|_| rand_kelem(ctx, rng)).collect();
            let coeffs_v: Vec<KElem> = (0..2).map(|_| rand_kelem(ctx, rng)).collect();
            CurveFunc::new(
                KPoly::from_coeffs(coeffs_u),
                KPoly::from_coeffs(coeffs_v),
                KPoly::one(ctx),
                ctx,
            )
            .expect("unit denominator")
        };
        let res_shifted = match base.add(&reg, ctx).residue_at(p, ctx) {
            Ok(r) => r,
            Err(e) => return PropReport::fail(NAME, case, format!("residue: {e}")),
        };
        if res_shifted != res {
            return PropReport::fail(
                NAME,
                case,
                "residue moved under a regular perturbation".to_string(),
            );
        }
        // Scaling check: residue is K-linear.
        let s = rand_nonzero_kelem(ctx, rng);
        let res_scaled = match base.mul_scalar(&s, ctx).residue_at(p, ctx) {
            Ok(r) => r,
            Err(e) => return PropReport::fail(NAME, case, format!("residue: {e}")),
        };
        if res_scaled != s.mul(&res, ctx) {
            return PropReport::fail(NAME, case, "residue is not K-linear".to_string());
        }
    }
    PropReport::pass(NAME, cases)
}

/// Runs all five suites with `cases` cases each and a fixed seed.
pub fn run_all(ctx: &KContext, seed: u64, cases: usize) -> Vec<PropReport> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        field_axioms(ctx, &mut rng, cases),
        twist_homomorphism(ctx, &mut rng, cases),
        degree_sign_multiplicativity(ctx, &mut rng, cases),
        principal_divisor_degree_zero(ctx, &mut rng, cases),
        residue_regular_perturbation(ctx, &mut rng, cases),
    ]
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

    fn ctx_f4() -> KContext {
        let fd = FieldDesc::new(2, 2, None).unwrap();
        let c = fd.from_digits(&[0, 1]).unwrap();
        let a = [fd.zero(), fd.zero(), fd.one(), fd.zero(), c];
        KContext::new(&fd, a).unwrap()
    }

    #[test]
    fn quick_suites_pass_on_both_examples() {
        for ctx in [ctx_f3(), ctx_f4()] {
            for report in run_all(&ctx, 7, 25) {
                assert!(report.pass, "{}: {}", report.name, report.detail);
            }
        }
    }
}
