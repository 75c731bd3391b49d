//! Human-readable rendering for `--pretty` output. Elements of K print with
//! `T` for the degree-2 generator and `Y` for the degree-3 generator;
//! functions on the curve use lowercase `t` and `y` for the coordinates.

use drinfeld_core::anderson::TauPoly;
use drinfeld_core::matrix::KMat;
use drinfeld_core::{CurveFunc, KContext, KElem, KPoly, Point};

pub fn kelem(ctx: &KContext, x: &KElem) -> String {
    x.render(ctx)
}

pub fn point(ctx: &KContext, p: &Point) -> String {
    if p.is_infinity() {
        "infinity".to_string()
    } else {
        format!(
            "({}, {})",
            p.x().expect("affine").render(ctx),
            p.y().expect("affine").render(ctx)
        )
    }
}

fn kpoly_terms(ctx: &KContext, p: &KPoly, var: &str, y_factor: bool) -> Vec<String> {
    let mut parts = Vec::new();
    for i in (0..p.coeffs().len()).rev() {
        let c = &p.coeffs()[i];
        if c.is_zero() {
            continue;
        }
        let mut factors = Vec::new();
        if !c.is_one() || (i == 0 && !y_factor) {
            let r = c.render(ctx);
            // Parenthesize composite coefficients.
            if r.contains('+') || r.contains('-') || r.contains('/') {
                factors.push(format!("({r})"));
            } else {
                factors.push(r);
            }
        }
        if i == 1 {
            factors.push(var.to_string());
        } else if i > 1 {
            factors.push(format!("{var}^{i}"));
        }
        if y_factor {
            factors.push("y".to_string());
        }
        parts.push(factors.join("*"));
    }
    parts
}

pub fn curvefunc(ctx: &KContext, f: &CurveFunc) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut num_parts = kpoly_terms(ctx, f.num_u(), "t", false);
    num_parts.extend(kpoly_terms(ctx, f.num_v(), "t", true));
    let num = num_parts.join(" + ");
    if f.den().is_one() {
        num
    } else {
        let den = kpoly_terms(ctx, f.den(), "t", false).join(" + ");
        format!("({num}) / ({den})")
    }
}

pub fn kmat(ctx: &KContext, m: &KMat, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.render(ctx)).collect();
        out.push_str(indent);
        out.push_str("[ ");
        out.push_str(&row.join(", "));
        out.push_str(" ]\n");
    }
    out
}

pub fn taupoly(ctx: &KContext, p: &TauPoly, name: &str) -> String {
    let mut out = String::new();
    for (j, mat) in p.coeffs().iter().enumerate() {
        out.push_str(&format!("{name}, coefficient of tau^{j}:\n"));
        out.push_str(&kmat(ctx, mat, "  "));
    }
    out
}
