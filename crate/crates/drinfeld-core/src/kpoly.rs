//! Dense univariate polynomials over K (used with the variable t).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fqpoly::FqPoly;
use crate::kfield::{KContext, KElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KPoly(Vec<KElem>);

impl KPoly {
    pub fn zero() -> KPoly {
        KPoly(Vec::new())
    }

    pub fn one(ctx: &KContext) -> KPoly {
        KPoly(vec![KElem::one(ctx)])
    }

    pub fn constant(c: KElem) -> KPoly {
        if c.is_zero() {
            KPoly::zero()
        } else {
            KPoly(vec![c])
        }
    }

    pub fn var(ctx: &KContext) -> KPoly {
        KPoly(vec![KElem::zero(ctx), KElem::one(ctx)])
    }

    pub fn from_coeffs(coeffs: Vec<KElem>) -> KPoly {
        let mut p = KPoly(coeffs);
        p.trim();
        p
    }

    /// Lifts a polynomial in theta with F_q coefficients to one in t.
    pub fn from_fqpoly(p: &FqPoly, ctx: &KContext) -> KPoly {
        KPoly(p.coeffs().iter().map(|&c| KElem::from_fq(c, ctx)).collect())
    }

    fn trim(&mut self) {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[KElem] {
        &self.0
    }

    pub fn coeff(&self, i: usize, ctx: &KContext) -> KElem {
        self.0.get(i).cloned().unwrap_or_else(|| KElem::zero(ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self, ctx: &KContext) -> KElem {
        self.0.last().cloned().unwrap_or_else(|| KElem::zero(ctx))
    }

    pub fn is_monic(&self, ctx: &KContext) -> bool {
        self.lead(ctx).is_one()
    }

    pub fn add(&self, o: &KPoly, ctx: &KContext) -> KPoly {
        let n = self.0.len().max(o.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i, ctx).add(&o.coeff(i, ctx), ctx));
        }
        KPoly::from_coeffs(out)
    }

    pub fn sub(&self, o: &KPoly, ctx: &KContext) -> KPoly {
        let n = self.0.len().max(o.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i, ctx).sub(&o.coeff(i, ctx), ctx));
        }
        KPoly::from_coeffs(out)
    }

    pub fn neg(&self, ctx: &KContext) -> KPoly {
        KPoly(self.0.iter().map(|c| c.neg(ctx)).collect())
    }

    pub fn mul_scalar(&self, c: &KElem, ctx: &KContext) -> KPoly {
        if c.is_zero() {
            return KPoly::zero();
        }
        KPoly(self.0.iter().map(|a| a.mul(c, ctx)).collect())
    }

    pub fn mul(&self, o: &KPoly, ctx: &KContext) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return KPoly::zero();
        }
        let mut out = vec![KElem::zero(ctx); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b, ctx), ctx);
            }
        }
        KPoly::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u64, ctx: &KContext) -> KPoly {
        let mut acc = KPoly::one(ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        acc
    }

    pub fn divrem(&self, divisor: &KPoly, ctx: &KContext) -> Result<(KPoly, KPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.deg() < divisor.deg() {
            return Ok((KPoly::zero(), self.clone()));
        }
        let lead_inv = divisor.lead(ctx).inv(ctx)?;
        let dd = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        let mut quot = vec![KElem::zero(ctx); rem.len() - dd];
        let mut top = rem.len();
        while top > dd {
            let c = rem[top - 1].clone();
            if !c.is_zero() {
                let qc = c.mul(&lead_inv, ctx);
                let shift = top - 1 - dd;
                for (i, mc) in divisor.0.iter().enumerate() {
                    rem[shift + i] = rem[shift + i].sub(&qc.mul(mc, ctx), ctx);
                }
                quot[shift] = qc;
            }
            top -= 1;
        }
        Ok((KPoly::from_coeffs(quot), KPoly::from_coeffs(rem)))
    }

    pub fn div_exact(&self, divisor: &KPoly, ctx: &KContext) -> Result<KPoly> {
        let (q, r) = self.divrem(divisor, ctx)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InternalCheck("inexact division over K".to_string()))
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &KPoly, ctx: &KContext) -> KPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, ctx).expect("divisor nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let li = a.lead(ctx).inv(ctx).expect("nonzero lead");
            a.mul_scalar(&li, ctx)
        }
    }

    pub fn eval(&self, x: &KElem, ctx: &KContext) -> KElem {
        let mut acc = KElem::zero(ctx);
        for c in self.0.iter().rev() {
            acc = acc.mul(x, ctx).add(c, ctx);
        }
        acc
    }

    /// Applies the k-fold Frobenius to every coefficient (t is fixed).
    pub fn twist(&self, k: usize, ctx: &KContext) -> KPoly {
        KPoly(self.0.iter().map(|c| c.frobenius(k, ctx)).collect())
    }

    /// Multiplicity of c as a root.
    pub fn root_multiplicity(&self, c: &KElem, ctx: &KContext) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = KPoly::from_coeffs(vec![c.neg(ctx), KElem::one(ctx)]);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(&lin, ctx).expect("linear divisor");
            if r.is_zero() {
                m += 1;
                cur = q;
            } else {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FieldDesc;

    fn ctx() -> KContext {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        KContext::new(
            &fd,
            [
                fd.zero(),
                fd.zero(),
                fd.zero(),
                fd.from_int(-1),
                fd.from_int(-1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ring_operations() {
        let ctx = ctx();
        let t = KPoly::var(&ctx);
        let theta = KPoly::constant(KElem::theta(&ctx));
        let p = t.sub(&theta, &ctx);
        let q = t.add(&theta, &ctx);
        let prod = p.mul(&q, &ctx);
        // (t - theta)(t + theta) = t^2 - theta^2.
        let mut expect = t.mul(&t, &ctx);
        expect = expect.sub(
            &KPoly::constant(KElem::theta(&ctx).pow(2, &ctx).unwrap()),
            &ctx,
        );
        assert_eq!(prod, expect);
        let (quot, rem) = prod.divrem(&p, &ctx).unwrap();
        assert_eq!(quot, q);
        assert!(rem.is_zero());
    }

    #[test]
    fn eval_and_twist_commute() {
        let ctx = ctx();
        let t = KPoly::var(&ctx);
        let p = t
            .mul(&t, &ctx)
            .add(&KPoly::constant(KElem::eta(&ctx)), &ctx);
        let x = KElem::theta(&ctx).add(&KElem::one(&ctx), &ctx);
        // Evaluating the twisted polynomial at x^q equals twisting the value.
        let lhs = p.twist(1, &ctx).eval(&x.frobenius(1, &ctx), &ctx);
        let rhs = p.eval(&x, &ctx).frobenius(1, &ctx);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn root_multiplicity_counts() {
        let ctx = ctx();
        let t = KPoly::var(&ctx);
        let theta = KPoly::constant(KElem::theta(&ctx));
        let lin = t.sub(&theta, &ctx);
        let p = lin.pow(3, &ctx).mul(&t, &ctx);
        assert_eq!(p.root_multiplicity(&KElem::theta(&ctx), &ctx), 3);
        assert_eq!(p.root_multiplicity(&KElem::zero(&ctx), &ctx), 1);
        assert_eq!(p.root_multiplicity(&KElem::one(&ctx), &ctx), 0);
    }
}
