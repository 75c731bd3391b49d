//! Functions on the curve: elements of K(t, y) written as
//! (A(t) + B(t) y) / D(t) with y-free denominator, reduced and with monic
//! denominator. The geometric degree uses deg t = 2, deg y = 3 with
//! K-coefficients weightless; the sign is the leading K coefficient.

use alloc::string::ToString;
use alloc::vec;

use crate::curve::{chord_tangent_slope, Point};
use crate::error::{Error, Result};
use crate::kfield::{KContext, KElem};
use crate::kpoly::KPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveFunc {
    nu: KPoly,
    nv: KPoly,
    den: KPoly,
}

impl CurveFunc {
    pub fn new(nu: KPoly, nv: KPoly, den: KPoly, ctx: &KContext) -> Result<CurveFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut nu = nu;
        let mut nv = nv;
        let mut den = den;
        if nu.is_zero() && nv.is_zero() {
            return Ok(CurveFunc::zero(ctx));
        }
        let g = nu.gcd(&nv, ctx).gcd(&den, ctx);
        if g.deg() > 0 {
            nu = nu.div_exact(&g, ctx)?;
            nv = nv.div_exact(&g, ctx)?;
            den = den.div_exact(&g, ctx)?;
        }
        if !den.is_monic(ctx) {
            let li = den.lead(ctx).inv(ctx)?;
            nu = nu.mul_scalar(&li, ctx);
            nv = nv.mul_scalar(&li, ctx);
            den = den.mul_scalar(&li, ctx);
        }
        Ok(CurveFunc { nu, nv, den })
    }

    pub fn zero(ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: KPoly::zero(),
            nv: KPoly::zero(),
            den: KPoly::one(ctx),
        }
    }

    pub fn one(ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: KPoly::one(ctx),
            nv: KPoly::zero(),
            den: KPoly::one(ctx),
        }
    }

    pub fn constant(c: KElem, ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: KPoly::constant(c),
            nv: KPoly::zero(),
            den: KPoly::one(ctx),
        }
    }

    pub fn var_t(ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: KPoly::var(ctx),
            nv: KPoly::zero(),
            den: KPoly::one(ctx),
        }
    }

    pub fn var_y(ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: KPoly::zero(),
            nv: KPoly::one(ctx),
            den: KPoly::one(ctx),
        }
    }

    /// Embeds an integral element of K (the coordinate ring) into functions
    /// on the curve: theta maps to t and eta to y, coefficients unchanged.
    pub fn chi(a: &KElem, ctx: &KContext) -> Result<CurveFunc> {
        if !a.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(CurveFunc {
            nu: KPoly::from_fqpoly(a.num_u(), ctx),
            nv: KPoly::from_fqpoly(a.num_v(), ctx),
            den: KPoly::one(ctx),
        })
    }

    pub fn num_u(&self) -> &KPoly {
        &self.nu
    }

    pub fn num_v(&self) -> &KPoly {
        &self.nv
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.nu.is_zero() && self.nv.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.nu.is_one() && self.nv.is_zero() && self.den.is_one()
    }

    /// Some(c) when the function is the constant c.
    pub fn as_constant(&self, ctx: &KContext) -> Option<KElem> {
        if self.nv.is_zero() && self.nu.deg() <= 0 && self.den.is_one() {
            Some(self.nu.coeff(0, ctx))
        } else {
            None
        }
    }

    pub fn add(&self, o: &CurveFunc, ctx: &KContext) -> CurveFunc {
        let nu = self
            .nu
            .mul(&o.den, ctx)
            .add(&o.nu.mul(&self.den, ctx), ctx);
        let nv = self
            .nv
            .mul(&o.den, ctx)
            .add(&o.nv.mul(&self.den, ctx), ctx);
        let den = self.den.mul(&o.den, ctx);
        CurveFunc::new(nu, nv, den, ctx).expect("den nonzero")
    }

    pub fn sub(&self, o: &CurveFunc, ctx: &KContext) -> CurveFunc {
        self.add(&o.neg(ctx), ctx)
    }

    pub fn neg(&self, ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: self.nu.neg(ctx),
            nv: self.nv.neg(ctx),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &CurveFunc, ctx: &KContext) -> CurveFunc {
        let w = KPoly::from_fqpoly(ctx.w_poly(), ctx);
        let l = KPoly::from_fqpoly(ctx.l_poly(), ctx);
        let bb = self.nv.mul(&o.nv, ctx);
        let nu = self.nu.mul(&o.nu, ctx).add(&bb.mul(&w, ctx), ctx);
        let nv = self
            .nu
            .mul(&o.nv, ctx)
            .add(&self.nv.mul(&o.nu, ctx), ctx)
            .sub(&bb.mul(&l, ctx), ctx);
        let den = self.den.mul(&o.den, ctx);
        CurveFunc::new(nu, nv, den, ctx).expect("den nonzero")
    }

    pub fn mul_scalar(&self, c: &KElem, ctx: &KContext) -> CurveFunc {
        if c.is_zero() {
            return CurveFunc::zero(ctx);
        }
        CurveFunc {
            nu: self.nu.mul_scalar(c, ctx),
            nv: self.nv.mul_scalar(c, ctx),
            den: self.den.clone(),
        }
    }

    /// Conjugate under the hyperelliptic involution: y maps to -y - L(t).
    pub fn conjugate(&self, ctx: &KContext) -> CurveFunc {
        let l = KPoly::from_fqpoly(ctx.l_poly(), ctx);
        let nu = self.nu.sub(&self.nv.mul(&l, ctx), ctx);
        let nv = self.nv.neg(ctx);
        CurveFunc {
            nu,
            nv,
            den: self.den.clone(),
        }
    }

    /// Norm of the numerator to K[t]: (A + By)(A + B ybar) = A^2 - ABL - B^2 W.
    pub(crate) fn numerator_norm(&self, ctx: &KContext) -> KPoly {
        let w = KPoly::from_fqpoly(ctx.w_poly(), ctx);
        let l = KPoly::from_fqpoly(ctx.l_poly(), ctx);
        let aa = self.nu.mul(&self.nu, ctx);
        let abl = self.nu.mul(&self.nv, ctx).mul(&l, ctx);
        let bbw = self.nv.mul(&self.nv, ctx).mul(&w, ctx);
        aa.sub(&abl, ctx).sub(&bbw, ctx)
    }

    pub fn inv(&self, ctx: &KContext) -> Result<CurveFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = self.numerator_norm(ctx);
        if norm.is_zero() {
            return Err(Error::InternalCheck(
                "norm of nonzero function is zero".to_string(),
            ));
        }
        let conj = self.conjugate(ctx);
        CurveFunc::new(
            self.den.mul(&conj.nu, ctx),
            self.den.mul(&conj.nv, ctx),
            norm,
            ctx,
        )
    }

    pub fn div(&self, o: &CurveFunc, ctx: &KContext) -> Result<CurveFunc> {
        Ok(self.mul(&o.inv(ctx)?, ctx))
    }

    pub fn pow(&self, e: i64, ctx: &KContext) -> Result<CurveFunc> {
        if e < 0 {
            return self.inv(ctx)?.pow(-e, ctx);
        }
        let mut acc = CurveFunc::one(ctx);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Applies the k-fold Frobenius to all K coefficients; t and y are fixed.
    pub fn twist(&self, k: usize, ctx: &KContext) -> CurveFunc {
        CurveFunc {
            nu: self.nu.twist(k, ctx),
            nv: self.nv.twist(k, ctx),
            den: self.den.twist(k, ctx),
        }
    }

    /// Geometric degree (pole order at infinity) and sign. The numerator
    /// candidates 2 deg_t A and 3 + 2 deg_t B differ in parity, so one wins
    /// strictly; the sign is its leading K coefficient (denominator monic).
    pub fn deg_sgn(&self, ctx: &KContext) -> Result<(i64, KElem)> {
        if self.is_zero() {
            return Err(Error::DegreeOfZero);
        }
        let mut best: Option<(i64, KElem)> = None;
        if !self.nu.is_zero() {
            best = Some((2 * self.nu.deg(), self.nu.lead(ctx)));
        }
        if !self.nv.is_zero() {
            let cand = (3 + 2 * self.nv.deg(), self.nv.lead(ctx));
            best = Some(match best {
                Some(b) if b.0 > cand.0 => b,
                _ => cand,
            });
        }
        let (d, s) = best.expect("nonzero");
        Ok((d - 2 * self.den.deg(), s))
    }

    pub fn deg(&self, ctx: &KContext) -> Result<i64> {
        Ok(self.deg_sgn(ctx)?.0)
    }

    pub fn sgn(&self, ctx: &KContext) -> Result<KElem> {
        Ok(self.deg_sgn(ctx)?.1)
    }

    /// Divides by the sign so the result has sign 1.
    pub fn sgn_normalize(&self, ctx: &KContext) -> Result<CurveFunc> {
        let (_, s) = self.deg_sgn(ctx)?;
        Ok(self.mul_scalar(&s.inv(ctx)?, ctx))
    }
}

/// The group-law line through P and Q (tangent when P = Q) together with
/// P + Q. Its divisor is (P) + (Q) + (-(P+Q)) - 3(infinity) in all cases,
/// with vertical lines and points at infinity handled uniformly.
pub fn law_line(p: &Point, q: &Point, ctx: &KContext) -> Result<(CurveFunc, Point)> {
    match (p, q) {
        (Point::Infinity, Point::Infinity) => Ok((CurveFunc::one(ctx), Point::Infinity)),
        (Point::Infinity, _) => Ok((vertical_line(q, ctx)?, q.clone())),
        (_, Point::Infinity) => Ok((vertical_line(p, ctx)?, p.clone())),
        _ => {
            let sum = p.add(q, ctx)?;
            match chord_tangent_slope(p, q, ctx)? {
                None => Ok((vertical_line(p, ctx)?, Point::Infinity)),
                Some(m) => {
                    let x1 = p.x()?.clone();
                    let y1 = p.y()?.clone();
                    // y - y1 - m (t - x1)
                    let nu = KPoly::from_coeffs(vec![
                        m.mul(&x1, ctx).sub(&y1, ctx),
                        m.neg(ctx),
                    ]);
                    let line = CurveFunc {
                        nu,
                        nv: KPoly::one(ctx),
                        den: KPoly::one(ctx),
                    };
                    Ok((line, sum))
                }
            }
        }
    }
}

/// t - x(P); divisor (P) + (-P) - 2(infinity).
pub fn vertical_line(p: &Point, ctx: &KContext) -> Result<CurveFunc> {
    let x = p.x()?;
    Ok(CurveFunc {
        nu: KPoly::from_coeffs(vec![x.neg(ctx), KElem::one(ctx)]),
        nv: KPoly::zero(),
        den: KPoly::one(ctx),
    })
}

/// The line through P and Q for the group law (tangent when P = Q).
pub fn line_through(p: &Point, q: &Point, ctx: &KContext) -> Result<CurveFunc> {
    Ok(law_line(p, q, ctx)?.0)
}

/// Miller function f_{n,P} with divisor n(P) - ([n]P) - (n-1)(infinity),
/// computed by double-and-add.
pub fn miller(p: &Point, n: u64, ctx: &KContext) -> Result<CurveFunc> {
    if p.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    if n == 0 {
        return Ok(CurveFunc::one(ctx));
    }
    let mut f = CurveFunc::one(ctx);
    let mut r = p.clone();
    let bits = 64 - n.leading_zeros();
    for i in (0..bits.saturating_sub(1)).rev() {
        let (line, r2) = law_line(&r, &r, ctx)?;
        f = f.mul(&f, ctx).mul(&line, ctx);
        if !r2.is_infinity() {
            f = f.div(&vertical_line(&r2, ctx)?, ctx)?;
        }
        r = r2;
        if (n >> i) & 1 == 1 {
            let (line, r2) = law_line(&r, p, ctx)?;
            f = f.mul(&line, ctx);
            if !r2.is_infinity() {
                f = f.div(&vertical_line(&r2, ctx)?, ctx)?;
            }
            r = r2;
        }
    }
    Ok(f)
}

/// Line through a triple of affine points summing to the identity: a chord
/// through two distinct points of the multiset, or the tangent when all
/// coincide. Verified to vanish at each point with at least the multiset
/// multiplicity.
pub fn collinear_line(pts: &[Point; 3], ctx: &KContext) -> Result<CurveFunc> {
    for p in pts.iter() {
        if p.is_infinity() {
            return Err(Error::PointAtInfinity);
        }
    }
    // Sanity: the triple must sum to the identity for a line to exist.
    let total = pts[0].add(&pts[1], ctx)?.add(&pts[2], ctx)?;
    if !total.is_infinity() {
        return Err(Error::InternalCheck(
            "collinear triple does not sum to identity".to_string(),
        ));
    }
    let (a, b) = if pts[0] != pts[1] {
        (&pts[0], &pts[1])
    } else if pts[0] != pts[2] {
        (&pts[0], &pts[2])
    } else {
        (&pts[0], &pts[0])
    };
    let (line, _) = law_line(a, b, ctx)?;
    // Multiplicity check at each distinct point of the multiset.
    let mut idx = 0;
    while idx < 3 {
        let p = &pts[idx];
        let mult = pts.iter().filter(|q| *q == p).count() as i64;
        let ord = line.order_at(p, ctx)?;
        if ord < mult {
            return Err(Error::InternalCheck(
                "line misses a collinear point".to_string(),
            ));
        }
        idx += 1;
    }
    Ok(line)
}
