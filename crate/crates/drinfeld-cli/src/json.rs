//! JSON encodings of the arithmetic objects. All maps serialize with sorted
//! keys (the default map representation is ordered) and all sequences are
//! index-ordered, so output is byte-stable; every emitter has a matching
//! parser and round-trips to an equal value.
//!
//! Formats:
//! - field element: little-endian digit array, e.g. `[2]` or `[0,1]`
//! - polynomial in theta: array of field elements, little-endian
//! - rational function of theta: `{"num":[...],"den":[...]}`
//! - element of K: `{"U":[...],"V":[...],"D":[...]}` for (U + V*eta)/D
//! - point: `{"inf":true}` or `{"x":KElem,"y":KElem}`
//! - function on the curve: `{"numU":[KElem...],"numV":[KElem...],"den":[KElem...]}`,
//!   little-endian in t, representing (numU(t) + numV(t)*y)/den(t)
//! - Laurent series at infinity: `{"val":v,"coeffs":[FqElem...],"prec":p}`

use drinfeld_core::laurent::LaurentK;
use drinfeld_core::matrix::KMat;
use drinfeld_core::{CurveFunc, FieldDesc, FqElem, FqPoly, KContext, KElem, KPoly, Point, ThetaRat};
use serde_json::{json, Map, Value};

pub type JsonResult<T> = Result<T, String>;

fn expect_array<'v>(v: &'v Value, what: &str) -> JsonResult<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| format!("{what}: expected an array"))
}

fn expect_object<'v>(v: &'v Value, what: &str) -> JsonResult<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| format!("{what}: expected an object"))
}

fn field<'v>(m: &'v Map<String, Value>, key: &str, what: &str) -> JsonResult<&'v Value> {
    m.get(key).ok_or_else(|| format!("{what}: missing key \"{key}\""))
}

// --- field elements -------------------------------------------------------

pub fn fq_to_json(fd: &FieldDesc, c: FqElem) -> Value {
    json!(fd.digits(c))
}

pub fn fq_from_json(fd: &FieldDesc, v: &Value) -> JsonResult<FqElem> {
    let arr = expect_array(v, "field element")?;
    let mut digits = Vec::with_capacity(arr.len());
    for d in arr {
        let n = d
            .as_u64()
            .ok_or_else(|| "field element: digits must be nonnegative integers".to_string())?;
        digits.push(u32::try_from(n).map_err(|_| "field element: digit too large".to_string())?);
    }
    fd.from_digits(&digits).map_err(|e| format!("field element: {e}"))
}

// --- polynomials and rational functions in theta --------------------------

pub fn fqpoly_to_json(fd: &FieldDesc, p: &FqPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| fq_to_json(fd, c)).collect())
}

pub fn fqpoly_from_json(fd: &FieldDesc, v: &Value) -> JsonResult<FqPoly> {
    let arr = expect_array(v, "polynomial")?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for c in arr {
        coeffs.push(fq_from_json(fd, c)?);
    }
    Ok(FqPoly::from_coeffs(coeffs))
}

pub fn thetarat_to_json(fd: &FieldDesc, r: &ThetaRat) -> Value {
    json!({
        "num": fqpoly_to_json(fd, r.num()),
        "den": fqpoly_to_json(fd, r.den()),
    })
}

pub fn thetarat_from_json(fd: &FieldDesc, v: &Value) -> JsonResult<ThetaRat> {
    let m = expect_object(v, "rational function")?;
    let num = fqpoly_from_json(fd, field(m, "num", "rational function")?)?;
    let den = fqpoly_from_json(fd, field(m, "den", "rational function")?)?;
    ThetaRat::new(num, den, fd).map_err(|e| format!("rational function: {e}"))
}

// --- elements of K --------------------------------------------------------

pub fn kelem_to_json(fd: &FieldDesc, x: &KElem) -> Value {
    json!({
        "U": fqpoly_to_json(fd, x.num_u()),
        "V": fqpoly_to_json(fd, x.num_v()),
        "D": fqpoly_to_json(fd, x.den()),
    })
}

pub fn kelem_from_json(ctx: &KContext, v: &Value) -> JsonResult<KElem> {
    let m = expect_object(v, "K element")?;
    let fd = ctx.fd();
    let u = fqpoly_from_json(fd, field(m, "U", "K element")?)?;
    let vv = fqpoly_from_json(fd, field(m, "V", "K element")?)?;
    let d = fqpoly_from_json(fd, field(m, "D", "K element")?)?;
    KElem::new(u, vv, d, ctx).map_err(|e| format!("K element: {e}"))
}

pub fn kelem_vec_to_json(fd: &FieldDesc, xs: &[KElem]) -> Value {
    Value::Array(xs.iter().map(|x| kelem_to_json(fd, x)).collect())
}

// --- points ---------------------------------------------------------------

pub fn point_to_json(fd: &FieldDesc, p: &Point) -> Value {
    if p.is_infinity() {
        json!({ "inf": true })
    } else {
        json!({
            "x": kelem_to_json(fd, p.x().expect("affine point")),
            "y": kelem_to_json(fd, p.y().expect("affine point")),
        })
    }
}

pub fn point_from_json(ctx: &KContext, v: &Value) -> JsonResult<Point> {
    let m = expect_object(v, "point")?;
    if let Some(flag) = m.get("inf") {
        if flag.as_bool() == Some(true) {
            return Ok(Point::infinity());
        }
        return Err("point: \"inf\" must be true when present".to_string());
    }
    let x = kelem_from_json(ctx, field(m, "x", "point")?)?;
    let y = kelem_from_json(ctx, field(m, "y", "point")?)?;
    Ok(Point::affine(x, y))
}

// --- functions on the curve -----------------------------------------------

pub fn kpoly_to_json(fd: &FieldDesc, p: &KPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| kelem_to_json(fd, c)).collect())
}

pub fn kpoly_from_json(ctx: &KContext, v: &Value) -> JsonResult<KPoly> {
    let arr = expect_array(v, "curve polynomial")?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for c in arr {
        coeffs.push(kelem_from_json(ctx, c)?);
    }
    Ok(KPoly::from_coeffs(coeffs))
}

pub fn curvefunc_to_json(fd: &FieldDesc, f: &CurveFunc) -> Value {
    json!({
        "numU": kpoly_to_json(fd, f.num_u()),
        "numV": kpoly_to_json(fd, f.num_v()),
        "den": kpoly_to_json(fd, f.den()),
    })
}

pub fn curvefunc_from_json(ctx: &KContext, v: &Value) -> JsonResult<CurveFunc> {
    let m = expect_object(v, "curve function")?;
    let nu = kpoly_from_json(ctx, field(m, "numU", "curve function")?)?;
    let nv = kpoly_from_json(ctx, field(m, "numV", "curve function")?)?;
    let den = kpoly_from_json(ctx, field(m, "den", "curve function")?)?;
    CurveFunc::new(nu, nv, den, ctx).map_err(|e| format!("curve function: {e}"))
}

// --- matrices -------------------------------------------------------------

pub fn kmat_to_json(fd: &FieldDesc, m: &KMat) -> Value {
    Value::Array(
        (0..m.n())
            .map(|i| Value::Array(m.row(i).iter().map(|x| kelem_to_json(fd, x)).collect()))
            .collect(),
    )
}

pub fn kmat_from_json(ctx: &KContext, v: &Value) -> JsonResult<KMat> {
    let rows = expect_array(v, "matrix")?;
    let n = rows.len();
    if n == 0 {
        return Err("matrix: must have at least one row".to_string());
    }
    let mut m = KMat::zero(n, ctx);
    for (i, row) in rows.iter().enumerate() {
        let cells = expect_array(row, "matrix row")?;
        if cells.len() != n {
            return Err(format!(
                "matrix: row {i} has {} entries, expected {n}",
                cells.len()
            ));
        }
        for (j, cell) in cells.iter().enumerate() {
            m.set(i, j, kelem_from_json(ctx, cell)?);
        }
    }
    Ok(m)
}

// --- Laurent series at the infinite place ----------------------------------

pub fn laurent_to_json(fd: &FieldDesc, s: &LaurentK) -> Value {
    let val = s.valuation().unwrap_or_else(|| s.prec());
    json!({
        "val": val,
        "coeffs": Value::Array(s.coeffs().iter().map(|&c| fq_to_json(fd, c)).collect()),
        "prec": s.prec(),
    })
}

pub fn laurent_from_json(fd: &FieldDesc, v: &Value) -> JsonResult<LaurentK> {
    let m = expect_object(v, "Laurent series")?;
    let val = field(m, "val", "Laurent series")?
        .as_i64()
        .ok_or_else(|| "Laurent series: \"val\" must be an integer".to_string())?;
    let prec = field(m, "prec", "Laurent series")?
        .as_i64()
        .ok_or_else(|| "Laurent series: \"prec\" must be an integer".to_string())?;
    let coeff_arr = expect_array(field(m, "coeffs", "Laurent series")?, "Laurent series coeffs")?;
    let mut out = LaurentK::zero_to(prec);
    for (i, c) in coeff_arr.iter().enumerate() {
        let c = fq_from_json(fd, c)?;
        out = out.add(&LaurentK::monomial(c, val + i as i64, prec), fd);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use drinfeld_core::laurent::embed_k;

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

    fn sample_elems(ctx: &KContext) -> Vec<KElem> {
        let theta = KElem::theta(ctx);
        let eta = KElem::eta(ctx);
        let one = KElem::one(ctx);
        let mut xs = vec![
            KElem::zero(ctx),
            one.clone(),
            theta.clone(),
            eta.clone(),
            theta.add(&one, ctx),
            eta.mul(&theta, ctx).add(&one, ctx),
            one.div(&theta.add(&eta, ctx), ctx).unwrap(),
        ];
        xs.push(xs[5].div(&xs[4], ctx).unwrap());
        xs
    }

    #[test]
    fn kelem_round_trip() {
        for ctx in [ctx_f3(), ctx_f4()] {
            for x in sample_elems(&ctx) {
                let v = kelem_to_json(ctx.fd(), &x);
                let back = kelem_from_json(&ctx, &v).unwrap();
                assert_eq!(back, x);
                assert_eq!(kelem_to_json(ctx.fd(), &back), v);
            }
        }
    }

    #[test]
    fn point_round_trip() {
        for ctx in [ctx_f3(), ctx_f4()] {
            let xi = Point::generic(&ctx);
            for p in [Point::infinity(), xi.clone(), xi.frobenius(1, &ctx)] {
                let v = point_to_json(ctx.fd(), &p);
                let back = point_from_json(&ctx, &v).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn curvefunc_round_trip() {
        for ctx in [ctx_f3(), ctx_f4()] {
            let t = CurveFunc::var_t(&ctx);
            let y = CurveFunc::var_y(&ctx);
            let theta = CurveFunc::constant(KElem::theta(&ctx), &ctx);
            let f = y
                .sub(&theta.mul(&t, &ctx), &ctx)
                .div(&t.mul(&t, &ctx).add(&y, &ctx), &ctx)
                .unwrap();
            for g in [CurveFunc::one(&ctx), t.clone(), y.clone(), f] {
                let v = curvefunc_to_json(ctx.fd(), &g);
                let back = curvefunc_from_json(&ctx, &v).unwrap();
                assert_eq!(back, g);
                assert_eq!(curvefunc_to_json(ctx.fd(), &back), v);
            }
        }
    }

    #[test]
    fn thetarat_round_trip() {
        let ctx = ctx_f3();
        let fd = ctx.fd();
        let num = FqPoly::from_coeffs(vec![fd.from_int(2), fd.one()]);
        let den = FqPoly::from_coeffs(vec![fd.one(), fd.zero(), fd.one()]);
        let r = ThetaRat::new(num, den, fd).unwrap();
        let v = thetarat_to_json(fd, &r);
        let back = thetarat_from_json(fd, &v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn laurent_round_trip() {
        let ctx = ctx_f3();
        let fd = ctx.fd();
        let theta = KElem::theta(&ctx);
        let x = theta.add(&KElem::eta(&ctx), &ctx).inv(&ctx).unwrap();
        let s = embed_k(&ctx, &x, 24).unwrap();
        let v = laurent_to_json(fd, &s);
        let back = laurent_from_json(fd, &v).unwrap();
        assert_eq!(laurent_to_json(fd, &back), v);
        // Zero to finite precision keeps its window.
        let z = LaurentK::zero_to(12);
        let vz = laurent_to_json(fd, &z);
        let backz = laurent_from_json(fd, &vz).unwrap();
        assert_eq!(laurent_to_json(fd, &backz), vz);
    }

    #[test]
    fn sorted_keys_are_byte_stable() {
        let ctx = ctx_f3();
        let x = KElem::theta(&ctx);
        let v = kelem_to_json(ctx.fd(), &x);
        // Default map serialization orders keys, so D < U < V; the zero
        // polynomial is the empty coefficient list.
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"D":[[1]],"U":[[0],[1]],"V":[]}"#);
    }
}
