//! Dense univariate polynomials over F_q and reduced rational functions.
//!
//! Coefficient vectors are little endian with no trailing zeros; the zero
//! polynomial is the empty vector. Every operation takes the field
//! description explicitly.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::{FieldDesc, FqElem};

const KARATSUBA_THRESHOLD: usize = 32;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FqPoly(Vec<FqElem>);

impl FqPoly {
    pub fn zero() -> FqPoly {
        FqPoly(Vec::new())
    }

    pub fn one(fd: &FieldDesc) -> FqPoly {
        FqPoly(vec![fd.one()])
    }

    pub fn constant(c: FqElem) -> FqPoly {
        if c.is_zero() {
            FqPoly::zero()
        } else {
            FqPoly(vec![c])
        }
    }

    /// The variable itself.
    pub fn var(fd: &FieldDesc) -> FqPoly {
        FqPoly(vec![fd.zero(), fd.one()])
    }

    pub fn from_coeffs(coeffs: Vec<FqElem>) -> FqPoly {
        let mut p = FqPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.0
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FqElem {
        self.0.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree with deg 0 = -1 convention for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> FqElem {
        self.0.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, other: &FqPoly, fd: &FieldDesc) -> FqPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fd.add(self.coeff(i), other.coeff(i)));
        }
        FqPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &FqPoly, fd: &FieldDesc) -> FqPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fd.sub(self.coeff(i), other.coeff(i)));
        }
        FqPoly::from_coeffs(out)
    }

    pub fn neg(&self, fd: &FieldDesc) -> FqPoly {
        FqPoly(self.0.iter().map(|&c| fd.neg(c)).collect())
    }

    pub fn mul_scalar(&self, c: FqElem, fd: &FieldDesc) -> FqPoly {
        if c.is_zero() {
            return FqPoly::zero();
        }
        FqPoly(self.0.iter().map(|&a| fd.mul(a, c)).collect())
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: usize) -> FqPoly {
        if self.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![FqElem::default(); k];
        out.extend_from_slice(&self.0);
        FqPoly(out)
    }

    pub fn mul(&self, other: &FqPoly, fd: &FieldDesc) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![FqElem::default(); self.0.len() + other.0.len() - 1];
        mul_into(&self.0, &other.0, &mut out, fd);
        FqPoly::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u64, fd: &FieldDesc) -> FqPoly {
        let mut acc = FqPoly::one(fd);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fd);
            }
            base = base.mul(&base, fd);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &FqPoly, fd: &FieldDesc) -> Result<(FqPoly, FqPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.deg() < divisor.deg() {
            return Ok((FqPoly::zero(), self.clone()));
        }
        let lead_inv = fd.inv(divisor.lead())?;
        let mut rem = self.0.clone();
        let dd = divisor.0.len() - 1;
        let mut quot = vec![FqElem::default(); rem.len() - dd];
        let mut top = rem.len();
        while top > dd {
            let c = rem[top - 1];
            if !c.is_zero() {
                let qc = fd.mul(c, lead_inv);
                let shift = top - 1 - dd;
                quot[shift] = qc;
                for (i, &mc) in divisor.0.iter().enumerate() {
                    rem[shift + i] = fd.sub(rem[shift + i], fd.mul(qc, mc));
                }
            }
            top -= 1;
        }
        Ok((FqPoly::from_coeffs(quot), FqPoly::from_coeffs(rem)))
    }

    /// Division that must be exact.
    pub fn div_exact(&self, divisor: &FqPoly, fd: &FieldDesc) -> Result<FqPoly> {
        let (q, r) = self.divrem(divisor, fd)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InternalCheck("inexact polynomial division".to_string()))
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &FqPoly, fd: &FieldDesc) -> FqPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, fd).expect("divisor nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let li = fd.inv(a.lead()).expect("nonzero lead");
            a.mul_scalar(li, fd)
        }
    }

    pub fn eval(&self, x: FqElem, fd: &FieldDesc) -> FqElem {
        let mut acc = fd.zero();
        for &c in self.0.iter().rev() {
            acc = fd.add(fd.mul(acc, x), c);
        }
        acc
    }

    /// Spreads coefficients to indices i * s. Because F_q coefficients are
    /// fixed by the q-power map, stretch(q) computes the polynomial self^q
    /// exactly, and stretching by q^k iterates it.
    pub fn stretch(&self, s: usize) -> FqPoly {
        if self.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![FqElem::default(); (self.0.len() - 1) * s + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i * s] = c;
        }
        FqPoly(out)
    }

    /// self^(q^k) via index stretching.
    pub fn power_q(&self, k: usize, fd: &FieldDesc) -> FqPoly {
        let mut s = 1usize;
        for _ in 0..k {
            s *= fd.q();
        }
        self.stretch(s)
    }

    /// Unique q-th root of a polynomial whose support lies on multiples of q.
    pub fn qth_root(&self, fd: &FieldDesc) -> Result<FqPoly> {
        if self.is_zero() {
            return Ok(FqPoly::zero());
        }
        let q = fd.q();
        let mut out = Vec::with_capacity(self.0.len() / q + 1);
        for (i, &c) in self.0.iter().enumerate() {
            if i % q == 0 {
                out.push(c);
            } else if !c.is_zero() {
                return Err(Error::NotAPower);
            }
        }
        Ok(FqPoly::from_coeffs(out))
    }

    /// Returns (monic polynomial, leading coefficient).
    pub fn monicize(&self, fd: &FieldDesc) -> Result<(FqPoly, FqElem)> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = self.lead();
        Ok((self.mul_scalar(fd.inv(l)?, fd), l))
    }

    /// Multiplicity of c as a root.
    pub fn root_multiplicity(&self, c: FqElem, fd: &FieldDesc) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = FqPoly::from_coeffs(vec![fd.neg(c), fd.one()]);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(&lin, fd).expect("linear divisor");
            if r.is_zero() {
                m += 1;
                cur = q;
            } else {
                return m;
            }
        }
    }
}

fn mul_schoolbook(a: &[FqElem], b: &[FqElem], out: &mut [FqElem], fd: &FieldDesc) {
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = fd.add(out[i + j], fd.mul(ai, bj));
        }
    }
}

/// Adds a * b into out (out must hold len(a) + len(b) - 1 entries).
fn mul_into(a: &[FqElem], b: &[FqElem], out: &mut [FqElem], fd: &FieldDesc) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        mul_schoolbook(a, b, out, fd);
        return;
    }
    let half = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(a.len().min(half));
    let (b0, b1) = b.split_at(b.len().min(half));

    // out += a0 b0 + x^half (a0 b1 + a1 b0) + x^(2 half) a1 b1, with the
    // middle term computed as (a0+a1)(b0+b1) - a0 b0 - a1 b1.
    let mut low = vec![FqElem::default(); a0.len() + b0.len() - 1];
    mul_into(a0, b0, &mut low, fd);
    let mut high: Vec<FqElem> = Vec::new();
    if !a1.is_empty() && !b1.is_empty() {
        high = vec![FqElem::default(); a1.len() + b1.len() - 1];
        mul_into(a1, b1, &mut high, fd);
    }

    let asum: Vec<FqElem> = (0..a0.len().max(a1.len()))
        .map(|i| {
            fd.add(
                a0.get(i).copied().unwrap_or_default(),
                a1.get(i).copied().unwrap_or_default(),
            )
        })
        .collect();
    let bsum: Vec<FqElem> = (0..b0.len().max(b1.len()))
        .map(|i| {
            fd.add(
                b0.get(i).copied().unwrap_or_default(),
                b1.get(i).copied().unwrap_or_default(),
            )
        })
        .collect();
    let mut mid = vec![FqElem::default(); asum.len() + bsum.len() - 1];
    mul_into(&asum, &bsum, &mut mid, fd);
    for (i, &c) in low.iter().enumerate() {
        mid[i] = fd.sub(mid[i], c);
    }
    for (i, &c) in high.iter().enumerate() {
        mid[i] = fd.sub(mid[i], c);
    }

    for (i, &c) in low.iter().enumerate() {
        out[i] = fd.add(out[i], c);
    }
    for (i, &c) in mid.iter().enumerate() {
        if !c.is_zero() {
            out[half + i] = fd.add(out[half + i], c);
        }
    }
    for (i, &c) in high.iter().enumerate() {
        if !c.is_zero() {
            out[2 * half + i] = fd.add(out[2 * half + i], c);
        }
    }
}

/// Reduced rational function over F_q: numerator / denominator with monic
/// denominator and gcd 1. Zero is (0, 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThetaRat {
    num: FqPoly,
    den: FqPoly,
}

impl ThetaRat {
    pub fn new(num: FqPoly, den: FqPoly, fd: &FieldDesc) -> Result<ThetaRat> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return Ok(ThetaRat {
                num,
                den: FqPoly::one(fd),
            });
        }
        let g = num.gcd(&den, fd);
        if g.deg() > 0 {
            num = num.div_exact(&g, fd)?;
            den = den.div_exact(&g, fd)?;
        }
        let (dm, l) = den.monicize(fd)?;
        den = dm;
        num = num.mul_scalar(fd.inv(l)?, fd);
        Ok(ThetaRat { num, den })
    }

    pub fn zero(fd: &FieldDesc) -> ThetaRat {
        ThetaRat {
            num: FqPoly::zero(),
            den: FqPoly::one(fd),
        }
    }

    pub fn from_poly(p: FqPoly, fd: &FieldDesc) -> ThetaRat {
        ThetaRat {
            num: p,
            den: FqPoly::one(fd),
        }
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &ThetaRat, fd: &FieldDesc) -> ThetaRat {
        let num = self
            .num
            .mul(&o.den, fd)
            .add(&o.num.mul(&self.den, fd), fd);
        let den = self.den.mul(&o.den, fd);
        ThetaRat::new(num, den, fd).expect("den nonzero")
    }

    pub fn sub(&self, o: &ThetaRat, fd: &FieldDesc) -> ThetaRat {
        self.add(&o.neg(fd), fd)
    }

    pub fn neg(&self, fd: &FieldDesc) -> ThetaRat {
        ThetaRat {
            num: self.num.neg(fd),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &ThetaRat, fd: &FieldDesc) -> ThetaRat {
        ThetaRat::new(
            self.num.mul(&o.num, fd),
            self.den.mul(&o.den, fd),
            fd,
        )
        .expect("den nonzero")
    }

    pub fn inv(&self, fd: &FieldDesc) -> Result<ThetaRat> {
        ThetaRat::new(self.den.clone(), self.num.clone(), fd)
    }

    pub fn div(&self, o: &ThetaRat, fd: &FieldDesc) -> Result<ThetaRat> {
        Ok(self.mul(&o.inv(fd)?, fd))
    }

    /// q-th root of a rational function. In reduced form, a q-th power has
    /// q-th power numerator and denominator, so the root is componentwise.
    pub fn qth_root(&self, fd: &FieldDesc) -> Result<ThetaRat> {
        let num = self.num.qth_root(fd)?;
        let den = self.den.qth_root(fd)?;
        Ok(ThetaRat { num, den })
    }
}
