//! The function field K = F_q(theta, eta) of an elliptic curve
//! y^2 + a1 t y + a3 y = t^3 + a2 t^2 + a4 t + a6, where (theta, eta)
//! denotes the generic point. Elements are stored as
//! (U(theta) + V(theta) eta) / D(theta) with monic denominator and
//! gcd(U, V, D) = 1; eta^2 reduces through the curve equation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::{FieldDesc, FqElem};
use crate::fqpoly::{FqPoly, ThetaRat};

/// Immutable data shared by all arithmetic over one curve: the field tables,
/// the Weierstrass coefficients, the reduction polynomials
/// W = theta^3 + a2 theta^2 + a4 theta + a6 and L = a1 theta + a3
/// (so eta^2 = W - L eta), and the expansion eta^q = R + S eta.
#[derive(Clone, Debug)]
pub struct KContext {
    fd: FieldDesc,
    a: [FqElem; 5],
    w: FqPoly,
    l: FqPoly,
    eta_q_r: FqPoly,
    eta_q_s: FqPoly,
}

impl KContext {
    /// Builds the context from Weierstrass coefficients [a1, a2, a3, a4, a6].
    /// Rejects singular curves.
    pub fn new(fd: &FieldDesc, a: [FqElem; 5]) -> Result<KContext> {
        let fd = fd.clone();
        let [a1, a2, a3, a4, a6] = a;
        let i = |n: i64| fd.from_int(n);
        let m = |x: FqElem, y: FqElem| fd.mul(x, y);
        let b2 = fd.add(m(a1, a1), m(i(4), a2));
        let b4 = fd.add(m(i(2), a4), m(a1, a3));
        let b6 = fd.add(m(a3, a3), m(i(4), a6));
        let b8 = {
            let t1 = m(m(a1, a1), a6);
            let t2 = m(m(i(4), a2), a6);
            let t3 = m(m(a1, a3), a4);
            let t4 = m(a2, m(a3, a3));
            let t5 = m(a4, a4);
            fd.sub(fd.add(fd.add(t1, t2), t4), fd.add(t3, t5))
        };
        let disc = {
            let t1 = m(m(b2, b2), b8);
            let t2 = m(i(8), m(b4, m(b4, b4)));
            let t3 = m(i(27), m(b6, b6));
            let t4 = m(i(9), m(b2, m(b4, b6)));
            fd.sub(t4, fd.add(fd.add(t1, t2), t3))
        };
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }

        let w = FqPoly::from_coeffs(vec![a6, a4, a2, fd.one()]);
        let l = FqPoly::from_coeffs(vec![a3, a1]);

        // eta^q as R + S eta by square-and-multiply on pairs (A, B)
        // representing A + B eta.
        let mul_pair = |x: &(FqPoly, FqPoly), y: &(FqPoly, FqPoly)| -> (FqPoly, FqPoly) {
            let bb = x.1.mul(&y.1, &fd);
            let u = x.0.mul(&y.0, &fd).add(&bb.mul(&w, &fd), &fd);
            let v = x.0.mul(&y.1, &fd).add(&x.1.mul(&y.0, &fd), &fd).sub(&bb.mul(&l, &fd), &fd);
            (u, v)
        };
        let eta = (FqPoly::zero(), FqPoly::one(&fd));
        let mut acc = (FqPoly::one(&fd), FqPoly::zero());
        let mut base = eta;
        let mut e = fd.q();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_pair(&acc, &base);
            }
            base = mul_pair(&base, &base);
            e >>= 1;
        }
        let (eta_q_r, eta_q_s) = acc;
        if eta_q_s.is_zero() {
            return Err(Error::InternalCheck("eta^q has no eta part".to_string()));
        }

        Ok(KContext {
            fd,
            a,
            w,
            l,
            eta_q_r,
            eta_q_s,
        })
    }

    pub fn fd(&self) -> &FieldDesc {
        &self.fd
    }

    pub fn q(&self) -> usize {
        self.fd.q()
    }

    /// Weierstrass coefficients [a1, a2, a3, a4, a6].
    pub fn a(&self) -> [FqElem; 5] {
        self.a
    }

    pub fn a1(&self) -> FqElem {
        self.a[0]
    }

    pub fn a2(&self) -> FqElem {
        self.a[1]
    }

    pub fn a3(&self) -> FqElem {
        self.a[2]
    }

    pub fn a4(&self) -> FqElem {
        self.a[3]
    }

    pub fn a6(&self) -> FqElem {
        self.a[4]
    }

    /// W(theta) with eta^2 + L eta = W.
    pub fn w_poly(&self) -> &FqPoly {
        &self.w
    }

    /// L(theta) = a1 theta + a3.
    pub fn l_poly(&self) -> &FqPoly {
        &self.l
    }

    /// (R, S) with eta^q = R(theta) + S(theta) eta.
    pub fn eta_q(&self) -> (&FqPoly, &FqPoly) {
        (&self.eta_q_r, &self.eta_q_s)
    }
}

/// Element of K in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KElem {
    u: FqPoly,
    v: FqPoly,
    d: FqPoly,
}

impl KElem {
    pub fn new(u: FqPoly, v: FqPoly, d: FqPoly, ctx: &KContext) -> Result<KElem> {
        let fd = ctx.fd();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if u.is_zero() && v.is_zero() {
            return Ok(KElem::zero(ctx));
        }
        let mut u = u;
        let mut v = v;
        let mut d = d;
        let g = u.gcd(&v, fd).gcd(&d, fd);
        if g.deg() > 0 {
            u = u.div_exact(&g, fd)?;
            v = v.div_exact(&g, fd)?;
            d = d.div_exact(&g, fd)?;
        }
        if !d.is_monic() {
            let li = fd.inv(d.lead())?;
            u = u.mul_scalar(li, fd);
            v = v.mul_scalar(li, fd);
            d = d.mul_scalar(li, fd);
        }
        Ok(KElem { u, v, d })
    }

    pub fn zero(ctx: &KContext) -> KElem {
        KElem {
            u: FqPoly::zero(),
            v: FqPoly::zero(),
            d: FqPoly::one(ctx.fd()),
        }
    }

    pub fn one(ctx: &KContext) -> KElem {
        KElem {
            u: FqPoly::one(ctx.fd()),
            v: FqPoly::zero(),
            d: FqPoly::one(ctx.fd()),
        }
    }

    pub fn from_int(n: i64, ctx: &KContext) -> KElem {
        KElem::from_fq(ctx.fd().from_int(n), ctx)
    }

    pub fn from_fq(c: FqElem, ctx: &KContext) -> KElem {
        KElem {
            u: FqPoly::constant(c),
            v: FqPoly::zero(),
            d: FqPoly::one(ctx.fd()),
        }
    }

    pub fn from_theta_poly(p: FqPoly, ctx: &KContext) -> KElem {
        KElem {
            u: p,
            v: FqPoly::zero(),
            d: FqPoly::one(ctx.fd()),
        }
    }

    pub fn theta(ctx: &KContext) -> KElem {
        KElem::from_theta_poly(FqPoly::var(ctx.fd()), ctx)
    }

    pub fn eta(ctx: &KContext) -> KElem {
        KElem {
            u: FqPoly::zero(),
            v: FqPoly::one(ctx.fd()),
            d: FqPoly::one(ctx.fd()),
        }
    }

    pub fn num_u(&self) -> &FqPoly {
        &self.u
    }

    pub fn num_v(&self) -> &FqPoly {
        &self.v
    }

    pub fn den(&self) -> &FqPoly {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero() && self.d.is_one()
    }

    /// True when the element lies in the coordinate ring F_q[theta, eta].
    pub fn is_integral(&self) -> bool {
        self.d.is_one()
    }

    pub fn add(&self, o: &KElem, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        let u = self.u.mul(&o.d, fd).add(&o.u.mul(&self.d, fd), fd);
        let v = self.v.mul(&o.d, fd).add(&o.v.mul(&self.d, fd), fd);
        let d = self.d.mul(&o.d, fd);
        KElem::new(u, v, d, ctx).expect("den nonzero")
    }

    pub fn sub(&self, o: &KElem, ctx: &KContext) -> KElem {
        self.add(&o.neg(ctx), ctx)
    }

    pub fn neg(&self, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        KElem {
            u: self.u.neg(fd),
            v: self.v.neg(fd),
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, o: &KElem, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        let vv = self.v.mul(&o.v, fd);
        let u = self
            .u
            .mul(&o.u, fd)
            .add(&vv.mul(&ctx.w, fd), fd);
        let v = self
            .u
            .mul(&o.v, fd)
            .add(&self.v.mul(&o.u, fd), fd)
            .sub(&vv.mul(&ctx.l, fd), fd);
        let d = self.d.mul(&o.d, fd);
        KElem::new(u, v, d, ctx).expect("den nonzero")
    }

    pub fn mul_fq(&self, c: FqElem, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        if c.is_zero() {
            return KElem::zero(ctx);
        }
        KElem {
            u: self.u.mul_scalar(c, fd),
            v: self.v.mul_scalar(c, fd),
            d: self.d.clone(),
        }
    }

    /// Conjugate over F_q(theta): eta maps to -eta - L.
    pub fn conj(&self, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        let u = self.u.sub(&self.v.mul(&ctx.l, fd), fd);
        let v = self.v.neg(fd);
        KElem {
            u,
            v,
            d: self.d.clone(),
        }
    }

    /// Field norm to F_q(theta) of the numerator U + V eta:
    /// U^2 - U V L - V^2 W.
    fn numerator_norm(&self, ctx: &KContext) -> FqPoly {
        let fd = ctx.fd();
        let uu = self.u.mul(&self.u, fd);
        let uvl = self.u.mul(&self.v, fd).mul(&ctx.l, fd);
        let vvw = self.v.mul(&self.v, fd).mul(&ctx.w, fd);
        uu.sub(&uvl, fd).sub(&vvw, fd)
    }

    pub fn inv(&self, ctx: &KContext) -> Result<KElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let fd = ctx.fd();
        let norm = self.numerator_norm(ctx);
        if norm.is_zero() {
            return Err(Error::InternalCheck("norm of nonzero element is zero".to_string()));
        }
        // 1/x = D * conj(numerator) / Norm(numerator).
        let cu = self.u.sub(&self.v.mul(&ctx.l, fd), fd);
        let cv = self.v.neg(fd);
        KElem::new(self.d.mul(&cu, fd), self.d.mul(&cv, fd), norm, ctx)
    }

    pub fn div(&self, o: &KElem, ctx: &KContext) -> Result<KElem> {
        Ok(self.mul(&o.inv(ctx)?, ctx))
    }

    pub fn pow(&self, e: i64, ctx: &KContext) -> Result<KElem> {
        if e < 0 {
            return self.inv(ctx)?.pow(-e, ctx);
        }
        let mut acc = KElem::one(ctx);
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

    /// Degree at the infinite place (deg theta = 2, deg eta = 3) and the sign,
    /// the leading coefficient of the expansion in the uniformizer
    /// u = theta/eta. The two numerator candidates 2 deg U and 3 + 2 deg V
    /// have different parity, so there is a strict winner whose leading
    /// F_q coefficient is the sign (the denominator is monic).
    pub fn deg_sgn(&self) -> Result<(i64, FqElem)> {
        if self.is_zero() {
            return Err(Error::DegreeOfZero);
        }
        let mut best: Option<(i64, FqElem)> = None;
        if !self.u.is_zero() {
            best = Some((2 * self.u.deg(), self.u.lead()));
        }
        if !self.v.is_zero() {
            let cand = (3 + 2 * self.v.deg(), self.v.lead());
            best = Some(match best {
                Some(b) if b.0 > cand.0 => b,
                _ => cand,
            });
        }
        let (d, s) = best.expect("nonzero element");
        Ok((d - 2 * self.d.deg(), s))
    }

    pub fn deg(&self) -> Result<i64> {
        Ok(self.deg_sgn()?.0)
    }

    pub fn sgn(&self) -> Result<FqElem> {
        Ok(self.deg_sgn()?.1)
    }

    /// k-fold q-power Frobenius: coefficients in F_q are fixed, theta and eta
    /// are raised componentwise through eta^q = R + S eta.
    pub fn frobenius(&self, k: usize, ctx: &KContext) -> KElem {
        let fd = ctx.fd();
        let mut cur = self.clone();
        for _ in 0..k {
            let uq = cur.u.power_q(1, fd);
            let vq = cur.v.power_q(1, fd);
            let dq = cur.d.power_q(1, fd);
            let u = uq.add(&vq.mul(&ctx.eta_q_r, fd), fd);
            let v = vq.mul(&ctx.eta_q_s, fd);
            cur = KElem::new(u, v, dq, ctx).expect("den nonzero");
        }
        cur
    }

    /// Unique q-th root in K, if one exists. Writing x = x_U + x_V eta with
    /// x_U, x_V in F_q(theta), a root y = A + B eta satisfies
    /// B^q = x_V / S and A^q = x_U - (x_V / S) R; both componentwise roots
    /// must exist and the result is verified by re-powering.
    pub fn qth_root(&self, ctx: &KContext) -> Result<KElem> {
        let fd = ctx.fd();
        let xu = ThetaRat::new(self.u.clone(), self.d.clone(), fd)?;
        let xv = ThetaRat::new(self.v.clone(), self.d.clone(), fd)?;
        let s = ThetaRat::from_poly(ctx.eta_q_s.clone(), fd);
        let r = ThetaRat::from_poly(ctx.eta_q_r.clone(), fd);
        let w = xv.div(&s, fd)?;
        let b = w.qth_root(fd)?;
        let a = xu.sub(&w.mul(&r, fd), fd).qth_root(fd)?;
        let u = a.num().mul(b.den(), fd);
        let v = b.num().mul(a.den(), fd);
        let d = a.den().mul(b.den(), fd);
        let root = KElem::new(u, v, d, ctx)?;
        if root.frobenius(1, ctx) != *self {
            return Err(Error::NotAPower);
        }
        Ok(root)
    }

    /// Human-readable rendering with theta as T and eta as Y.
    pub fn render(&self, ctx: &KContext) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let fd = ctx.fd();
        let num = render_pair(&self.u, &self.v, fd);
        if self.d.is_one() {
            num
        } else {
            format!("({})/({})", num, render_poly(&self.d, fd, "T"))
        }
    }
}

fn render_coeff(c: FqElem, fd: &FieldDesc) -> String {
    if fd.r() == 1 {
        format!("{}", c.index())
    } else {
        let digits = fd.digits(c);
        let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

pub(crate) fn render_poly(p: &FqPoly, fd: &FieldDesc, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<String> = Vec::new();
    for i in (0..p.coeffs().len()).rev() {
        let c = p.coeff(i);
        if c.is_zero() {
            continue;
        }
        let cs = render_coeff(c, fd);
        let term = if i == 0 {
            cs
        } else {
            let pow = if i == 1 {
                var.to_string()
            } else {
                format!("{var}^{i}")
            };
            if c.is_one() {
                pow
            } else {
                format!("{cs}*{pow}")
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

fn render_pair(u: &FqPoly, v: &FqPoly, fd: &FieldDesc) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !u.is_zero() {
        parts.push(render_poly(u, fd, "T"));
    }
    if !v.is_zero() {
        if v.is_one() {
            parts.push("Y".to_string());
        } else if v.deg() == 0 && fd.r() == 1 {
            parts.push(format!("{}*Y", render_coeff(v.coeff(0), fd)));
        } else {
            parts.push(format!("({})*Y", render_poly(v, fd, "T")));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// y^2 = t^3 - t - 1 over F_3.
    pub fn ctx_f3() -> KContext {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        let a = [
            fd.zero(),
            fd.zero(),
            fd.zero(),
            fd.from_int(-1),
            fd.from_int(-1),
        ];
        KContext::new(&fd, a).unwrap()
    }

    /// y^2 + y = t^3 + c over F_4 with c a generator.
    pub fn ctx_f4() -> KContext {
        let fd = FieldDesc::new(2, 2, None).unwrap();
        let c = fd.from_digits(&[0, 1]).unwrap();
        let a = [fd.zero(), fd.zero(), fd.one(), fd.zero(), c];
        KContext::new(&fd, a).unwrap()
    }

    fn rand_elem(ctx: &KContext, rng: &mut ChaCha8Rng) -> KElem {
        let fd = ctx.fd();
        let q = fd.q() as u16;
        let mut poly = |deg: usize| {
            let coeffs: alloc::vec::Vec<FqElem> = (0..=deg)
                .map(|_| fd.elem(rng.gen_range(0..q)).unwrap())
                .collect();
            FqPoly::from_coeffs(coeffs)
        };
        let u = poly(3);
        let v = poly(2);
        let mut d = poly(2);
        if d.is_zero() {
            d = FqPoly::one(fd);
        }
        KElem::new(u, v, d, ctx).unwrap()
    }

    #[test]
    fn curve_relation_holds() {
        for ctx in [ctx_f3(), ctx_f4()] {
            let eta = KElem::eta(&ctx);
            let lhs = eta.mul(&eta, &ctx).add(
                &KElem::from_theta_poly(ctx.l_poly().clone(), &ctx).mul(&eta, &ctx),
                &ctx,
            );
            let rhs = KElem::from_theta_poly(ctx.w_poly().clone(), &ctx);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rejects_singular_curves() {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        // y^2 = t^3 is singular.
        let z = fd.zero();
        assert_eq!(
            KContext::new(&fd, [z, z, z, z, z]).err(),
            Some(Error::SingularCurve)
        );
    }

    #[test]
    fn eta_q_precompute_matches_direct_power() {
        for ctx in [ctx_f3(), ctx_f4()] {
            let eta = KElem::eta(&ctx);
            let direct = eta.pow(ctx.q() as i64, &ctx).unwrap();
            let (r, s) = ctx.eta_q();
            let expected = KElem::new(r.clone(), s.clone(), FqPoly::one(ctx.fd()), &ctx).unwrap();
            assert_eq!(direct, expected);
            assert_eq!(eta.frobenius(1, &ctx), expected);
        }
    }

    #[test]
    fn eta_fourth_power_on_f4() {
        // On y^2 + y = t^3 + c: eta^4 = theta^6 + theta^3 + 1 + eta.
        let ctx = ctx_f4();
        let fd = ctx.fd();
        let eta = KElem::eta(&ctx);
        let mut u = FqPoly::zero();
        for (i, c) in [(0usize, fd.one()), (3, fd.one()), (6, fd.one())] {
            u = u.add(&FqPoly::constant(c).shift(i), fd);
        }
        let expected = KElem::new(u, FqPoly::one(fd), FqPoly::one(fd), &ctx).unwrap();
        assert_eq!(eta.frobenius(1, &ctx), expected);
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for ctx in [ctx_f3(), ctx_f4()] {
            for _ in 0..40 {
                let x = rand_elem(&ctx, &mut rng);
                let y = rand_elem(&ctx, &mut rng);
                let z = rand_elem(&ctx, &mut rng);
                assert_eq!(x.add(&y, &ctx), y.add(&x, &ctx));
                assert_eq!(x.mul(&y, &ctx), y.mul(&x, &ctx));
                assert_eq!(
                    x.mul(&y.add(&z, &ctx), &ctx),
                    x.mul(&y, &ctx).add(&x.mul(&z, &ctx), &ctx)
                );
                assert_eq!(
                    x.mul(&y.mul(&z, &ctx), &ctx),
                    x.mul(&y, &ctx).mul(&z, &ctx)
                );
                if !x.is_zero() {
                    assert!(x.mul(&x.inv(&ctx).unwrap(), &ctx).is_one());
                }
                assert!(x.sub(&x, &ctx).is_zero());
            }
        }
    }

    #[test]
    fn deg_sgn_basics() {
        let ctx = ctx_f3();
        let one = ctx.fd().one();
        assert_eq!(KElem::theta(&ctx).deg_sgn().unwrap(), (2, one));
        assert_eq!(KElem::eta(&ctx).deg_sgn().unwrap(), (3, one));
        let x = KElem::theta(&ctx)
            .pow(2, &ctx)
            .unwrap()
            .add(&KElem::eta(&ctx), &ctx);
        assert_eq!(x.deg_sgn().unwrap(), (4, one));
        let y = KElem::eta(&ctx).div(&KElem::theta(&ctx), &ctx).unwrap();
        assert_eq!(y.deg_sgn().unwrap(), (1, one));
        assert!(KElem::zero(&ctx).deg_sgn().is_err());
    }

    #[test]
    fn deg_is_a_valuation() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for ctx in [ctx_f3(), ctx_f4()] {
            for _ in 0..40 {
                let x = rand_elem(&ctx, &mut rng);
                let y = rand_elem(&ctx, &mut rng);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let (dx, sx) = x.deg_sgn().unwrap();
                let (dy, sy) = y.deg_sgn().unwrap();
                let (dp, sp) = x.mul(&y, &ctx).deg_sgn().unwrap();
                assert_eq!(dp, dx + dy);
                assert_eq!(sp, ctx.fd().mul(sx, sy));
            }
        }
    }

    #[test]
    fn frobenius_is_field_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for ctx in [ctx_f3(), ctx_f4()] {
            for _ in 0..20 {
                let x = rand_elem(&ctx, &mut rng);
                let y = rand_elem(&ctx, &mut rng);
                assert_eq!(
                    x.add(&y, &ctx).frobenius(1, &ctx),
                    x.frobenius(1, &ctx).add(&y.frobenius(1, &ctx), &ctx)
                );
                assert_eq!(
                    x.mul(&y, &ctx).frobenius(1, &ctx),
                    x.frobenius(1, &ctx).mul(&y.frobenius(1, &ctx), &ctx)
                );
                assert_eq!(x.pow(ctx.q() as i64, &ctx).unwrap(), x.frobenius(1, &ctx));
                assert_eq!(x.frobenius(2, &ctx), x.frobenius(1, &ctx).frobenius(1, &ctx));
            }
        }
    }

    #[test]
    fn qth_root_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for ctx in [ctx_f3(), ctx_f4()] {
            for _ in 0..20 {
                let x = rand_elem(&ctx, &mut rng);
                let xq = x.frobenius(1, &ctx);
                assert_eq!(xq.qth_root(&ctx).unwrap(), x);
            }
            // theta itself is not a q-th power.
            assert_eq!(
                KElem::theta(&ctx).qth_root(&ctx).err(),
                Some(Error::NotAPower)
            );
        }
    }

    #[test]
    fn render_smoke() {
        let ctx = ctx_f3();
        let x = KElem::eta(&ctx)
            .add(&KElem::theta(&ctx).mul_fq(ctx.fd().from_int(2), &ctx), &ctx)
            .div(&KElem::theta(&ctx), &ctx)
            .unwrap();
        assert_eq!(x.render(&ctx), "(2*T+Y)/(T)");
    }
}
