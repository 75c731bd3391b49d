//! Local expansions of curve functions at affine points, with certified
//! orders, evaluation through removable singularities, and residues of
//! F dt / (2y + a1 t + a3).
//!
//! At a point where 2y + a1 x + a3 != 0 the uniformizer is u = t - x0 and
//! y(u) is solved by Newton iteration; at an affine 2-torsion point the
//! uniformizer is v = y - y0 and t(v) is solved instead (there
//! dE/dt != 0 because the curve is nonsingular).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::Point;
use crate::error::{Error, Result};
use crate::func::CurveFunc;
use crate::kfield::{KContext, KElem};
use crate::kpoly::KPoly;

/// Effectively infinite precision for exact (polynomial) series.
const EXACT: i64 = i64::MAX / 4;

/// Truncated Laurent series over K in a local uniformizer. Coefficients
/// cover exponents val .. prec-1; exponents below val are zero. A series
/// that is zero to its precision has an empty coefficient list and
/// val == prec.
#[derive(Clone, Debug)]
pub struct KSeries {
    val: i64,
    prec: i64,
    c: Vec<KElem>,
}

impl KSeries {
    pub fn zero_to(prec: i64) -> KSeries {
        KSeries {
            val: prec,
            prec,
            c: Vec::new(),
        }
    }

    pub fn constant(c: KElem, prec: i64) -> KSeries {
        let mut s = KSeries {
            val: 0,
            prec,
            c: vec![c],
        };
        s.normalize();
        s
    }

    /// Series from polynomial coefficients starting at exponent `val`.
    pub fn from_coeffs(val: i64, coeffs: Vec<KElem>, prec: i64) -> KSeries {
        let mut s = KSeries {
            val,
            prec,
            c: coeffs,
        };
        s.clip();
        s.normalize();
        s
    }

    fn clip(&mut self) {
        if self.val + self.c.len() as i64 > self.prec {
            self.c.truncate((self.prec - self.val).max(0) as usize);
        }
    }

    fn normalize(&mut self) {
        while let Some(first) = self.c.first() {
            if first.is_zero() {
                self.c.remove(0);
                self.val += 1;
            } else {
                break;
            }
        }
        while self.c.last().map_or(false, |x| x.is_zero()) {
            self.c.pop();
        }
        if self.c.is_empty() {
            self.val = self.prec;
        }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero_to_prec(&self) -> bool {
        self.c.is_empty()
    }

    /// Valuation, requiring a visible nonzero coefficient.
    pub fn val(&self) -> Result<i64> {
        if self.is_zero_to_prec() {
            Err(Error::PrecisionExhausted)
        } else {
            Ok(self.val)
        }
    }

    pub fn coeff_at(&self, e: i64, ctx: &KContext) -> Result<KElem> {
        if e >= self.prec {
            return Err(Error::PrecisionExhausted);
        }
        if e < self.val || e >= self.val + self.c.len() as i64 {
            Ok(KElem::zero(ctx))
        } else {
            Ok(self.c[(e - self.val) as usize].clone())
        }
    }

    pub fn truncate(&self, prec: i64) -> KSeries {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.clip();
        s.normalize();
        s
    }

    pub fn add(&self, o: &KSeries, ctx: &KContext) -> KSeries {
        let prec = self.prec.min(o.prec);
        if self.is_zero_to_prec() && o.is_zero_to_prec() {
            return KSeries::zero_to(prec);
        }
        let val = self.val.min(o.val).min(prec);
        let len = (prec - val).max(0) as usize;
        let mut c = vec![KElem::zero(ctx); len];
        for (i, x) in self.c.iter().enumerate() {
            let e = self.val + i as i64;
            if e < prec {
                c[(e - val) as usize] = c[(e - val) as usize].add(x, ctx);
            }
        }
        for (i, x) in o.c.iter().enumerate() {
            let e = o.val + i as i64;
            if e < prec {
                c[(e - val) as usize] = c[(e - val) as usize].add(x, ctx);
            }
        }
        KSeries::from_coeffs(val, c, prec)
    }

    pub fn neg(&self, ctx: &KContext) -> KSeries {
        KSeries {
            val: self.val,
            prec: self.prec,
            c: self.c.iter().map(|x| x.neg(ctx)).collect(),
        }
    }

    pub fn sub(&self, o: &KSeries, ctx: &KContext) -> KSeries {
        self.add(&o.neg(ctx), ctx)
    }

    pub fn mul(&self, o: &KSeries, ctx: &KContext) -> KSeries {
        let prec = (self.prec.saturating_add(o.val))
            .min(o.prec.saturating_add(self.val))
            .min(EXACT);
        if self.is_zero_to_prec() || o.is_zero_to_prec() {
            return KSeries::zero_to(prec);
        }
        let val = self.val + o.val;
        let len = (prec - val).max(0) as usize;
        let mut c = vec![KElem::zero(ctx); len];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                let e = (i + j) as i64;
                if e >= len as i64 {
                    break;
                }
                c[i + j] = c[i + j].add(&x.mul(y, ctx), ctx);
            }
        }
        KSeries::from_coeffs(val, c, prec)
    }

    pub fn mul_scalar(&self, k: &KElem, ctx: &KContext) -> KSeries {
        if k.is_zero() {
            return KSeries::zero_to(self.prec);
        }
        KSeries {
            val: self.val,
            prec: self.prec,
            c: self.c.iter().map(|x| x.mul(k, ctx)).collect(),
        }
    }

    /// Inverse of a series with visible leading coefficient.
    pub fn inv(&self, ctx: &KContext) -> Result<KSeries> {
        if self.is_zero_to_prec() {
            return Err(Error::PrecisionExhausted);
        }
        let rel = (self.prec - self.val) as usize;
        let a0_inv = self.c[0].inv(ctx)?;
        let mut b = Vec::with_capacity(rel);
        b.push(a0_inv.clone());
        for k in 1..rel {
            let mut acc = KElem::zero(ctx);
            for j in 1..=k {
                let aj = if j < self.c.len() {
                    self.c[j].clone()
                } else {
                    KElem::zero(ctx)
                };
                if !aj.is_zero() {
                    acc = acc.add(&aj.mul(&b[k - j], ctx), ctx);
                }
            }
            b.push(acc.neg(ctx).mul(&a0_inv, ctx));
        }
        let prec = (-self.val).saturating_add(rel as i64);
        Ok(KSeries::from_coeffs(-self.val, b, prec.min(EXACT)))
    }

    pub fn div(&self, o: &KSeries, ctx: &KContext) -> Result<KSeries> {
        Ok(self.mul(&o.inv(ctx)?, ctx))
    }
}

/// Evaluates a polynomial over K at a series by Horner's rule.
pub fn eval_kpoly_series(p: &KPoly, x: &KSeries, ctx: &KContext) -> KSeries {
    let prec = x.prec;
    let mut acc = KSeries::zero_to(EXACT.min(prec.saturating_mul(2)));
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x, ctx).add(&KSeries::constant(c.clone(), EXACT), ctx);
    }
    acc.truncate(prec)
}

/// Local coordinate series of the curve at an affine point, to absolute
/// precision n: returns (t-series, y-series, is_two_torsion) in the
/// appropriate uniformizer.
pub fn point_series(p: &Point, n: i64, ctx: &KContext) -> Result<(KSeries, KSeries, bool)> {
    let x0 = p.x()?.clone();
    let y0 = p.y()?.clone();
    let two_torsion = p.is_two_torsion_affine(ctx);
    let l = KPoly::from_fqpoly(ctx.l_poly(), ctx);
    let w = KPoly::from_fqpoly(ctx.w_poly(), ctx);
    let e_of = |ts: &KSeries, ys: &KSeries| -> KSeries {
        // E = y^2 + L(t) y - W(t).
        let ls = eval_kpoly_series(&l, ts, ctx);
        let ws = eval_kpoly_series(&w, ts, ctx);
        ys.mul(ys, ctx).add(&ls.mul(ys, ctx), ctx).sub(&ws, ctx)
    };
    if !two_torsion {
        // t = x0 + u exactly; solve E(t(u), y) = 0 for y with y(0) = y0.
        let ts = KSeries::from_coeffs(0, vec![x0.clone(), KElem::one(ctx)], n);
        let mut ys = KSeries::constant(y0.clone(), n);
        let dl = eval_kpoly_series(&l, &ts, ctx);
        let mut steps = 0;
        loop {
            let e = e_of(&ts, &ys);
            if e.is_zero_to_prec() {
                break;
            }
            // dE/dy = 2y + L(t), a unit here.
            let dy = ys
                .mul_scalar(&KElem::from_int(2, ctx), ctx)
                .add(&dl, ctx);
            ys = ys.sub(&e.div(&dy, ctx)?, ctx);
            steps += 1;
            if steps > 128 {
                return Err(Error::InternalCheck("newton for y(u) stalled".to_string()));
            }
        }
        Ok((ts, ys, false))
    } else {
        // y = y0 + v exactly; solve E(t, y(v)) = 0 for t with t(0) = x0.
        let ys = KSeries::from_coeffs(0, vec![y0.clone(), KElem::one(ctx)], n);
        let mut ts = KSeries::constant(x0.clone(), n);
        let a = ctx.a();
        let mut steps = 0;
        loop {
            let e = e_of(&ts, &ys);
            if e.is_zero_to_prec() {
                break;
            }
            // dE/dt = a1 y - (3t^2 + 2 a2 t + a4), nonzero at a nonsingular
            // 2-torsion point.
            let t2 = ts.mul(&ts, ctx);
            let dt = ys
                .mul_scalar(&KElem::from_fq(a[0], ctx), ctx)
                .sub(&t2.mul_scalar(&KElem::from_int(3, ctx), ctx), ctx)
                .sub(
                    &ts.mul_scalar(
                        &KElem::from_fq(a[1], ctx).mul(&KElem::from_int(2, ctx), ctx),
                        ctx,
                    ),
                    ctx,
                )
                .sub(&KSeries::constant(KElem::from_fq(a[3], ctx), n), ctx);
            ts = ts.sub(&e.div(&dt, ctx)?, ctx);
            steps += 1;
            if steps > 128 {
                return Err(Error::InternalCheck("newton for t(v) stalled".to_string()));
            }
        }
        Ok((ts, ys, true))
    }
}

/// Expansion of a function at an affine point in the local uniformizer.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub point: Point,
    /// True when the uniformizer is y - y0 (2-torsion); false for t - x0.
    pub two_torsion: bool,
    pub series: KSeries,
}

fn numerator_series(f: &CurveFunc, ts: &KSeries, ys: &KSeries, ctx: &KContext) -> KSeries {
    let a = eval_kpoly_series(f.num_u(), ts, ctx);
    let b = eval_kpoly_series(f.num_v(), ts, ctx);
    a.add(&b.mul(ys, ctx), ctx)
}

impl CurveFunc {
    /// Exact order of vanishing at a point; infinity uses minus the
    /// geometric degree. The required precision is certified from root
    /// multiplicities of the numerator norm and denominator, both y-free.
    pub fn order_at(&self, p: &Point, ctx: &KContext) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::DegreeOfZero);
        }
        if p.is_infinity() {
            return Ok(-self.deg(ctx)?);
        }
        let x0 = p.x()?;
        let y0 = p.y()?;
        // Fast path: regular point of both numerator and denominator.
        let den_at = self.den().eval(x0, ctx);
        if !den_at.is_zero() {
            let num_at = self
                .num_u()
                .eval(x0, ctx)
                .add(&self.num_v().eval(x0, ctx).mul(y0, ctx), ctx);
            if !num_at.is_zero() {
                return Ok(0);
            }
        }
        let e: i64 = if p.is_two_torsion_affine(ctx) { 2 } else { 1 };
        let den_mult = self.den().root_multiplicity(x0, ctx) as i64;
        let ord_den = e * den_mult;
        // ord(numerator) <= e * mult of the numerator norm at x0, because the
        // conjugate numerator has nonnegative order at the conjugate point.
        let norm = self.numerator_norm(ctx);
        let norm_mult = norm.root_multiplicity(x0, ctx) as i64;
        let bound = e * norm_mult;
        let n = bound + 2;
        let (ts, ys, _) = point_series(p, n, ctx)?;
        let num = numerator_series(self, &ts, &ys, ctx);
        let vn = num.val().map_err(|_| {
            Error::InternalCheck("numerator order exceeded certified bound".to_string())
        })?;
        Ok(vn - ord_den)
    }

    /// Value at an affine point, resolving removable singularities through
    /// local expansion; a pole reports its order.
    pub fn eval(&self, p: &Point, ctx: &KContext) -> Result<KElem> {
        let x0 = p.x()?;
        let y0 = p.y()?;
        let den_at = self.den().eval(x0, ctx);
        if !den_at.is_zero() {
            let num_at = self
                .num_u()
                .eval(x0, ctx)
                .add(&self.num_v().eval(x0, ctx).mul(y0, ctx), ctx);
            return num_at.div(&den_at, ctx);
        }
        if self.is_zero() {
            return Ok(KElem::zero(ctx));
        }
        let ord = self.order_at(p, ctx)?;
        if ord < 0 {
            return Err(Error::PoleAtPoint(ord));
        }
        if ord > 0 {
            return Ok(KElem::zero(ctx));
        }
        let exp = self.local_expansion(p, 2, ctx)?;
        exp.series.coeff_at(0, ctx)
    }

    /// Local expansion with at least `rel` coefficients from the leading
    /// term (or from exponent 0 when the function vanishes).
    pub fn local_expansion(&self, p: &Point, rel: i64, ctx: &KContext) -> Result<LocalExpansion> {
        if self.is_zero() {
            let (_, _, tt) = point_series(p, 1, ctx)?;
            return Ok(LocalExpansion {
                point: p.clone(),
                two_torsion: tt,
                series: KSeries::zero_to(rel),
            });
        }
        let ord = self.order_at(p, ctx)?;
        let e: i64 = if p.is_two_torsion_affine(ctx) { 2 } else { 1 };
        let den_mult = self.den().root_multiplicity(p.x()?, ctx) as i64;
        // Absolute precision needed so the quotient is known past ord + rel.
        let n = e * den_mult + (ord + rel).max(1) + 2;
        let (ts, ys, tt) = point_series(p, n, ctx)?;
        let num = numerator_series(self, &ts, &ys, ctx);
        let den = eval_kpoly_series(self.den(), &ts, ctx);
        let series = num.div(&den, ctx)?;
        Ok(LocalExpansion {
            point: p.clone(),
            two_torsion: tt,
            series: series.truncate(ord + rel),
        })
    }

    /// Residue at P of F dt / (2y + a1 t + a3). P must be affine and not
    /// 2-torsion, so t - x0 is the uniformizer and the differential factor
    /// is a unit there.
    pub fn residue_at(&self, p: &Point, ctx: &KContext) -> Result<KElem> {
        if p.is_infinity() {
            return Err(Error::PointAtInfinity);
        }
        if p.is_two_torsion_affine(ctx) {
            return Err(Error::TwoTorsionPoint);
        }
        if self.is_zero() {
            return Ok(KElem::zero(ctx));
        }
        let ord = self.order_at(p, ctx)?;
        if ord >= 0 {
            return Ok(KElem::zero(ctx));
        }
        let exp = self.local_expansion(p, -ord + 2, ctx)?;
        // 2y + a1 t + a3 expanded as a unit series.
        let n = exp.series.prec() + (-ord) + 2;
        let (ts, ys, _) = point_series(p, n, ctx)?;
        let unit = ys
            .mul_scalar(&KElem::from_int(2, ctx), ctx)
            .add(&ts.mul_scalar(&KElem::from_fq(ctx.a1(), ctx), ctx), ctx)
            .add(&KSeries::constant(KElem::from_fq(ctx.a3(), ctx), n), ctx);
        let omega = exp.series.mul(&unit.inv(ctx)?, ctx);
        omega.coeff_at(-1, ctx)
    }
}

/// Residue at P of (prod f^e) dt / (2y + a1 t + a3) for a multiplicative
/// combination of functions given as (factor, exponent) pairs. Each factor
/// is expanded locally on its own, so the combined function is never formed
/// globally; this keeps coefficient sizes small when factors involve high
/// twists. P must be affine and not 2-torsion.
pub fn residue_factored(
    factors: &[(CurveFunc, i64)],
    p: &Point,
    ctx: &KContext,
) -> Result<KElem> {
    if p.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    if p.is_two_torsion_affine(ctx) {
        return Err(Error::TwoTorsionPoint);
    }
    for (f, e) in factors {
        if f.is_zero() {
            if *e < 0 {
                return Err(Error::DivisionByZero);
            }
            if *e > 0 {
                return Ok(KElem::zero(ctx));
            }
        }
    }
    // Exact total order at P: series valuations add, so no cancellation can
    // raise it.
    let mut ord = 0i64;
    for (f, e) in factors {
        if *e != 0 {
            ord += e * f.order_at(p, ctx)?;
        }
    }
    if ord >= 0 {
        return Ok(KElem::zero(ctx));
    }
    // Relative precision is preserved by series mul/inv, so expanding every
    // factor rel coefficients past its leading term certifies the -1
    // coefficient of the product.
    let rel = -ord + 2;
    let mut acc = KSeries::constant(KElem::one(ctx), rel);
    for (f, e) in factors {
        if *e == 0 {
            continue;
        }
        let series = f.local_expansion(p, rel, ctx)?.series;
        let series = if *e < 0 { series.inv(ctx)? } else { series };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&series, ctx);
        }
    }
    // The differential factor 2y + a1 t + a3 is a unit at P.
    let n = rel + 2;
    let (ts, ys, _) = point_series(p, n, ctx)?;
    let unit = ys
        .mul_scalar(&KElem::from_int(2, ctx), ctx)
        .add(&ts.mul_scalar(&KElem::from_fq(ctx.a1(), ctx), ctx), ctx)
        .add(&KSeries::constant(KElem::from_fq(ctx.a3(), ctx), n), ctx);
    acc.mul(&unit.inv(ctx)?, ctx).coeff_at(-1, ctx)
}

/// Checks that a function has exactly the stated orders at the stated
/// points (one entry may be Point::Infinity). Entries for equal points are
/// merged before checking.
pub fn verify_divisor(f: &CurveFunc, entries: &[(Point, i64)], ctx: &KContext) -> Result<()> {
    let mut merged: Vec<(Point, i64)> = Vec::new();
    for (p, k) in entries {
        if let Some(slot) = merged.iter_mut().find(|(q, _)| q == p) {
            slot.1 += k;
        } else {
            merged.push((p.clone(), *k));
        }
    }
    let mut total = 0i64;
    for (p, k) in &merged {
        let ord = f.order_at(p, ctx)?;
        if ord != *k {
            return Err(Error::InternalCheck(alloc::format!(
                "divisor order mismatch: expected {k}, got {ord}"
            )));
        }
        total += k;
    }
    if total != 0 {
        return Err(Error::InternalCheck(
            "divisor entries do not sum to zero".to_string(),
        ));
    }
    Ok(())
}
